//! Distributed games with causal-memory strategies.
//!
//! Exploration runs over traces, never over words: σ-play consistency is
//! invariant under commutation, so every explored play is deduplicated by its
//! canonical form. The search is breadth-first by length, and each layer is
//! sorted, which makes every reported witness the shortlex-least one.

use std::collections::HashMap;
use std::ops::ControlFlow;

use rayon::prelude::*;
use thiserror::Error;

use crate::automata::{self, is_final_state, AsyncAutomaton, AutomatonError, GlobalState};
use crate::traces::{Letter, LetterSet, ProcessId, Trace, TraceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error("letter `{0}` is both controllable and environment")]
    OverlappingPartition(String),
    #[error("letter `{0}` is neither controllable nor environment")]
    IncompletePartition(String),
    #[error("`{0}` is not a play of the automaton")]
    NotAPlay(String),
    #[error("strategy failed: {0}")]
    Strategy(String),
    #[error("environment letters missing from the allowed set of process `{process}` after `{play}`")]
    EnvironmentBlocked { process: String, play: String },
    #[error("audit failed after `{play}`: {message}")]
    Audit { play: String, message: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    /// A table strategy has no entry for this view; the engine treats it as
    /// blocking every controllable letter.
    #[error("no table entry for process `{process}` at view `{view}`")]
    MissingView { process: String, view: String },
    #[error("{0}")]
    Rule(String),
}

/// An asynchronous automaton with its letters split into controllable and
/// environment actions.
#[derive(Debug, Clone)]
pub struct DistributedGame<A> {
    automaton: A,
    controllable: LetterSet,
    environment: LetterSet,
}

impl<A: AsyncAutomaton> DistributedGame<A> {
    /// Every letter outside `environment` is controllable.
    pub fn new(automaton: A, environment: LetterSet) -> Result<Self, GameError> {
        let alphabet = automaton.alphabet();
        for a in environment.iter() {
            alphabet.check_letter(a)?;
        }
        let controllable = alphabet.letters().filter(|a| !environment.contains(*a)).collect();
        Ok(DistributedGame {
            automaton,
            controllable,
            environment,
        })
    }

    /// Checks that the two sets partition the alphabet.
    pub fn with_partition(
        automaton: A,
        controllable: LetterSet,
        environment: LetterSet,
    ) -> Result<Self, GameError> {
        let alphabet = automaton.alphabet();
        for a in controllable.iter().chain(environment.iter()) {
            alphabet.check_letter(a)?;
        }
        for a in alphabet.letters() {
            let name = alphabet.letter_name(a).to_string();
            match (controllable.contains(a), environment.contains(a)) {
                (true, true) => return Err(GameError::OverlappingPartition(name)),
                (false, false) => return Err(GameError::IncompletePartition(name)),
                _ => {}
            }
        }
        Ok(DistributedGame {
            automaton,
            controllable,
            environment,
        })
    }

    pub fn automaton(&self) -> &A {
        &self.automaton
    }

    pub fn controllable(&self) -> &LetterSet {
        &self.controllable
    }

    pub fn environment(&self) -> &LetterSet {
        &self.environment
    }

    pub fn is_environment(&self, a: Letter) -> bool {
        self.environment.contains(a)
    }
}

/// A distributed strategy: for each process, the letters it allows given its
/// causal view. The engine only ever passes `view_p(u)`, and always adds the
/// environment letters to the returned set.
pub trait Strategy: Sync {
    fn decide(&self, process: ProcessId, view: &Trace) -> Result<LetterSet, StrategyError>;
}

impl<S: Strategy + ?Sized> Strategy for &S {
    fn decide(&self, process: ProcessId, view: &Trace) -> Result<LetterSet, StrategyError> {
        (**self).decide(process, view)
    }
}

impl<S: Strategy + ?Sized> Strategy for Box<S> {
    fn decide(&self, process: ProcessId, view: &Trace) -> Result<LetterSet, StrategyError> {
        (**self).decide(process, view)
    }
}

/// Blocks every controllable letter.
#[derive(Debug, Clone, Copy, Default)]
pub struct BlockAll;

impl Strategy for BlockAll {
    fn decide(&self, _: ProcessId, _: &Trace) -> Result<LetterSet, StrategyError> {
        Ok(LetterSet::new())
    }
}

/// Allows every letter.
#[derive(Debug, Clone, Default)]
pub struct AllowAll {
    letters: LetterSet,
}

impl AllowAll {
    pub fn for_game<A: AsyncAutomaton>(game: &DistributedGame<A>) -> Self {
        AllowAll {
            letters: game.automaton().alphabet().letters().collect(),
        }
    }
}

impl Strategy for AllowAll {
    fn decide(&self, _: ProcessId, _: &Trace) -> Result<LetterSet, StrategyError> {
        Ok(self.letters.clone())
    }
}

/// A finite strategy keyed by canonical view.
#[derive(Debug, Clone, Default)]
pub struct TableStrategy {
    entries: HashMap<(ProcessId, Vec<Letter>), LetterSet>,
}

impl TableStrategy {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets the allowed letters of `process` at `view`, replacing any previous entry.
    pub fn insert(&mut self, process: ProcessId, view: &Trace, allowed: LetterSet) {
        self.entries.insert((process, view.letters().to_vec()), allowed);
    }

    /// Entries sorted by process, then shortlex on the view.
    pub fn entries(&self) -> Vec<(ProcessId, &[Letter], &LetterSet)> {
        let mut out: Vec<_> = self
            .entries
            .iter()
            .map(|((p, v), s)| (*p, v.as_slice(), s))
            .collect();
        out.sort_by(|a, b| (a.0, a.1.len(), a.1).cmp(&(b.0, b.1.len(), b.1)));
        out
    }
}

impl Strategy for TableStrategy {
    fn decide(&self, process: ProcessId, view: &Trace) -> Result<LetterSet, StrategyError> {
        self.entries
            .get(&(process, view.letters().to_vec()))
            .cloned()
            .ok_or_else(|| StrategyError::MissingView {
                process: view.alphabet().process_name(process).to_string(),
                view: view.to_string(),
            })
    }
}

/// A reached σ-play with its global state and its σ-allowed, enabled letters.
#[derive(Debug, Clone)]
pub struct PlayNode<S> {
    pub play: Trace,
    pub state: GlobalState<S>,
    pub allowed: LetterSet,
}

impl<S> PlayNode<S> {
    pub fn is_maximal(&self) -> bool {
        self.allowed.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExploreStats {
    /// Distinct σ-plays visited.
    pub plays: usize,
    /// Visited plays with no allowed extension.
    pub maximal: usize,
    /// No play of the maximal explored length still had an allowed extension.
    pub complete: bool,
    pub longest: usize,
    /// Strategy queries, each checked to contain every environment letter.
    pub environment_checks: usize,
    /// Queries answered by a missing table entry (treated as blocking).
    pub missing_views: usize,
    /// Plays passed through the automaton's audit.
    pub audited: usize,
}

struct Expanded<S> {
    node: PlayNode<S>,
    successors: Vec<(Letter, GlobalState<S>)>,
    queries: usize,
    missing: usize,
}

fn expand<A: AsyncAutomaton, St: Strategy + ?Sized>(
    game: &DistributedGame<A>,
    strategy: &St,
    play: Trace,
    state: GlobalState<A::State>,
) -> Result<Expanded<A::State>, GameError> {
    let aut = game.automaton();
    let alphabet = aut.alphabet();
    aut.audit(&play, &state).map_err(|message| GameError::Audit {
        play: play.to_string(),
        message,
    })?;
    let mut sigma: Vec<Option<LetterSet>> = vec![None; alphabet.process_count()];
    let mut allowed = LetterSet::new();
    let mut successors = Vec::new();
    let (mut queries, mut missing) = (0, 0);
    for a in alphabet.letters() {
        let Some(next) = automata::step(aut, &state, a)? else {
            continue;
        };
        let mut ok = true;
        if !game.is_environment(a) {
            for p in alphabet.domain(a).iter() {
                if sigma[p.index()].is_none() {
                    let view = play.view_unchecked(p);
                    let mut set = match strategy.decide(p, &view) {
                        Ok(set) => set,
                        Err(StrategyError::MissingView { .. }) => {
                            missing += 1;
                            LetterSet::new()
                        }
                        Err(StrategyError::Rule(msg)) => return Err(GameError::Strategy(msg)),
                    };
                    set.union_with(game.environment());
                    queries += 1;
                    if !game.environment().is_subset(&set) {
                        return Err(GameError::EnvironmentBlocked {
                            process: alphabet.process_name(p).to_string(),
                            play: play.to_string(),
                        });
                    }
                    sigma[p.index()] = Some(set);
                }
                if !sigma[p.index()].as_ref().is_some_and(|s| s.contains(a)) {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            allowed.insert(a);
            successors.push((a, next));
        }
    }
    Ok(Expanded {
        node: PlayNode {
            play,
            state,
            allowed,
        },
        successors,
        queries,
        missing,
    })
}

/// Breadth-first exploration of the σ-plays of length at most `max_len`.
///
/// `visit` sees every play exactly once, shortest first and in canonical order
/// within a length; returning `ControlFlow::Break` stops the search (the
/// returned stats then have `complete = false`).
pub fn explore<A, St, F>(
    game: &DistributedGame<A>,
    strategy: &St,
    max_len: usize,
    mut visit: F,
) -> Result<ExploreStats, GameError>
where
    A: AsyncAutomaton,
    St: Strategy + ?Sized,
    F: FnMut(&PlayNode<A::State>) -> ControlFlow<()>,
{
    let aut = game.automaton();
    let mut stats = ExploreStats::default();
    let mut layer = vec![(Trace::empty(aut.alphabet()), automata::initial_state(aut))];
    let mut len = 0;
    loop {
        let expanded: Vec<Expanded<A::State>> = layer
            .into_par_iter()
            .map(|(play, state)| expand(game, strategy, play, state))
            .collect::<Result<_, _>>()?;
        let mut next = Vec::new();
        let mut frontier_open = false;
        for e in &expanded {
            stats.plays += 1;
            stats.audited += 1;
            stats.environment_checks += e.queries;
            stats.missing_views += e.missing;
            stats.longest = len;
            if e.node.is_maximal() {
                stats.maximal += 1;
            }
            if visit(&e.node).is_break() {
                stats.complete = false;
                return Ok(stats);
            }
            if len == max_len {
                frontier_open |= !e.node.is_maximal();
            }
        }
        if len == max_len {
            stats.complete = !frontier_open;
            return Ok(stats);
        }
        for e in expanded {
            for (a, state) in e.successors {
                next.push((e.node.play.push(a)?, state));
            }
        }
        if next.is_empty() {
            stats.complete = true;
            return Ok(stats);
        }
        next.par_sort_unstable_by(|x, y| x.0.letters().cmp(y.0.letters()));
        next.dedup_by(|x, y| x.0 == y.0);
        layer = next;
        len += 1;
    }
}

/// The σ-plays of length at most `max_len`.
#[derive(Debug, Clone)]
pub struct SigmaPlays {
    pub plays: Vec<Trace>,
    pub complete: bool,
}

pub fn enumerate_sigma_plays<A: AsyncAutomaton, St: Strategy + ?Sized>(
    game: &DistributedGame<A>,
    strategy: &St,
    max_len: usize,
) -> Result<SigmaPlays, GameError> {
    let mut plays = Vec::new();
    let stats = explore(game, strategy, max_len, |node| {
        plays.push(node.play.clone());
        ControlFlow::Continue(())
    })?;
    Ok(SigmaPlays {
        plays,
        complete: stats.complete,
    })
}

/// Maximal σ-plays of length at most `max_len`, plus the completeness flag.
pub fn maximal_sigma_plays<A: AsyncAutomaton, St: Strategy + ?Sized>(
    game: &DistributedGame<A>,
    strategy: &St,
    max_len: usize,
) -> Result<SigmaPlays, GameError> {
    let mut plays = Vec::new();
    let stats = explore(game, strategy, max_len, |node| {
        if node.is_maximal() {
            plays.push(node.play.clone());
        }
        ControlFlow::Continue(())
    })?;
    Ok(SigmaPlays {
        plays,
        complete: stats.complete,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossReason {
    /// No allowed letter while some process is not final.
    DeadlockNonFinal,
    /// The play reached an explicit losing sink of the automaton.
    LoseState,
}

impl LossReason {
    pub fn as_str(self) -> &'static str {
        match self {
            LossReason::DeadlockNonFinal => "deadlock-non-final",
            LossReason::LoseState => "lose-state",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Winning {
        plays: usize,
        maximal: usize,
    },
    Losing {
        witness: Trace,
        reason: LossReason,
        /// Automaton-specific description of the losing sink, if any.
        detail: Option<String>,
    },
    /// Exploration hit the length bound without finding a losing play.
    Unknown {
        depth: usize,
    },
}

impl Verdict {
    pub fn is_winning(&self) -> bool {
        matches!(self, Verdict::Winning { .. })
    }

    pub fn is_losing(&self) -> bool {
        matches!(self, Verdict::Losing { .. })
    }
}

/// Decides whether `strategy` is winning, exploring σ-plays up to `max_len`.
pub fn verify_winning<A: AsyncAutomaton, St: Strategy + ?Sized>(
    game: &DistributedGame<A>,
    strategy: &St,
    max_len: usize,
) -> Result<Verdict, GameError> {
    verify_with_stats(game, strategy, max_len).map(|(v, _)| v)
}

/// [`verify_winning`], also returning the exploration statistics.
pub fn verify_with_stats<A: AsyncAutomaton, St: Strategy + ?Sized>(
    game: &DistributedGame<A>,
    strategy: &St,
    max_len: usize,
) -> Result<(Verdict, ExploreStats), GameError> {
    let aut = game.automaton();
    let mut losing = None;
    let stats = explore(game, strategy, max_len, |node| {
        if node.is_maximal() && !is_final_state(aut, &node.state) {
            let detail = aut.loss_label(&node.state);
            let reason = if detail.is_some() {
                LossReason::LoseState
            } else {
                LossReason::DeadlockNonFinal
            };
            losing = Some(Verdict::Losing {
                witness: node.play.clone(),
                reason,
                detail,
            });
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    })?;
    let verdict = match losing {
        Some(v) => v,
        None if stats.complete => Verdict::Winning {
            plays: stats.plays,
            maximal: stats.maximal,
        },
        None => Verdict::Unknown { depth: max_len },
    };
    Ok((verdict, stats))
}

/// Returns the index and value of the first candidate verified as winning.
pub fn search_strategy<A, St, I>(
    game: &DistributedGame<A>,
    candidates: I,
    max_len: usize,
) -> Result<Option<(usize, St)>, GameError>
where
    A: AsyncAutomaton,
    St: Strategy,
    I: IntoIterator<Item = St>,
{
    for (i, candidate) in candidates.into_iter().enumerate() {
        if verify_winning(game, &candidate, max_len)?.is_winning() {
            return Ok(Some((i, candidate)));
        }
    }
    Ok(None)
}

/// σ-allowed letters enabled after the play `u`.
pub fn allowed<A: AsyncAutomaton, St: Strategy + ?Sized>(
    game: &DistributedGame<A>,
    strategy: &St,
    u: &Trace,
) -> Result<LetterSet, GameError> {
    let state = automata::run(game.automaton(), u)?.ok_or_else(|| GameError::NotAPlay(u.to_string()))?;
    Ok(expand(game, strategy, u.clone(), state)?.node.allowed)
}

/// Outcome of replaying a word letter by letter under a strategy.
#[derive(Debug, Clone)]
pub struct Replay<S> {
    /// The longest σ-consistent prefix.
    pub play: Trace,
    pub state: GlobalState<S>,
    /// Index of the first letter that was not σ-allowed, if any.
    pub rejected_at: Option<usize>,
}

/// Replays `word`, checking at each step that the letter is enabled and allowed.
pub fn replay<A: AsyncAutomaton, St: Strategy + ?Sized>(
    game: &DistributedGame<A>,
    strategy: &St,
    word: &[Letter],
) -> Result<Replay<A::State>, GameError> {
    let aut = game.automaton();
    let mut play = Trace::empty(aut.alphabet());
    let mut state = automata::initial_state(aut);
    for (i, &a) in word.iter().enumerate() {
        aut.alphabet().check_letter(a)?;
        let e = expand(game, strategy, play.clone(), state.clone())?;
        match e.successors.into_iter().find(|(b, _)| *b == a) {
            Some((_, next)) => {
                play = play.push(a)?;
                state = next;
            }
            None => {
                return Ok(Replay {
                    play,
                    state,
                    rejected_at: Some(i),
                })
            }
        }
    }
    Ok(Replay {
        play,
        state,
        rejected_at: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{ProcessSpec, TableAutomaton, TableTransition};
    use crate::traces::DependencyAlphabet;
    use std::sync::Arc;

    fn spec(states: &[&str], initial: &str, finals: &[&str]) -> ProcessSpec {
        ProcessSpec {
            states: states.iter().map(|s| s.to_string()).collect(),
            initial: initial.into(),
            finals: finals.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn tr(letter: &str, from: &[&str], to: &[&str]) -> TableTransition {
        TableTransition {
            letter: letter.into(),
            from: from.iter().map(|s| s.to_string()).collect(),
            to: to.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn single(env: bool) -> DistributedGame<TableAutomaton> {
        let al = Arc::new(DependencyAlphabet::from_names(&["1"], &[("a", &["1"])]).unwrap());
        let aut = TableAutomaton::new(al, vec![spec(&["q0", "q1"], "q0", &["q1"])], vec![tr("a", &["q0"], &["q1"])]).unwrap();
        let envs = if env { [Letter(0)].into_iter().collect() } else { LetterSet::new() };
        DistributedGame::new(aut, envs).unwrap()
    }

    fn self_loop() -> DistributedGame<TableAutomaton> {
        let al = Arc::new(DependencyAlphabet::from_names(&["1"], &[("a", &["1"])]).unwrap());
        let aut = TableAutomaton::new(al, vec![spec(&["q"], "q", &[])], vec![tr("a", &["q"], &["q"])]).unwrap();
        DistributedGame::new(aut, LetterSet::new()).unwrap()
    }

    fn shared() -> DistributedGame<TableAutomaton> {
        let al = Arc::new(DependencyAlphabet::from_names(&["1", "2"], &[("s", &["1", "2"])]).unwrap());
        let aut = TableAutomaton::new(
            al,
            vec![spec(&["p0", "p1"], "p0", &["p1"]), spec(&["r0", "r1"], "r0", &["r1"])],
            vec![tr("s", &["p0", "r0"], &["p1", "r1"])],
        )
        .unwrap();
        DistributedGame::new(aut, LetterSet::new()).unwrap()
    }

    struct OnlyProcess(ProcessId, Letter);

    impl Strategy for OnlyProcess {
        fn decide(&self, p: ProcessId, _: &Trace) -> Result<LetterSet, StrategyError> {
            Ok(if p == self.0 { [self.1].into_iter().collect() } else { LetterSet::new() })
        }
    }

    #[test]
    fn allowed_examples() {
        let g = single(false);
        let eps = Trace::empty(g.automaton().alphabet());
        assert!(allowed(&g, &BlockAll, &eps).unwrap().is_empty());
        let g = single(true);
        assert_eq!(allowed(&g, &BlockAll, &eps).unwrap().iter().collect::<Vec<_>>(), vec![Letter(0)]);
        let g = shared();
        let eps = Trace::empty(g.automaton().alphabet());
        assert!(allowed(&g, &OnlyProcess(ProcessId(0), Letter(0)), &eps).unwrap().is_empty());
        assert!(!allowed(&g, &AllowAll::for_game(&g), &eps).unwrap().is_empty());
    }

    #[test]
    fn allowed_rejects_non_plays() {
        let g = single(false);
        let al = g.automaton().alphabet().clone();
        let aa = Trace::parse(&al, "a a").unwrap();
        assert!(matches!(allowed(&g, &BlockAll, &aa), Err(GameError::NotAPlay(_))));
    }

    #[test]
    fn enumerate_examples() {
        let g = single(false);
        let all = AllowAll::for_game(&g);
        let res = enumerate_sigma_plays(&g, &all, 5).unwrap();
        assert!(res.complete);
        assert_eq!(res.plays.iter().map(|t| t.to_string()).collect::<Vec<_>>(), vec!["ε", "a"]);

        let g = self_loop();
        let all = AllowAll::for_game(&g);
        let res = enumerate_sigma_plays(&g, &all, 3).unwrap();
        assert!(!res.complete);
        assert_eq!(res.plays.len(), 4);
        assert_eq!(verify_winning(&g, &all, 3).unwrap(), Verdict::Unknown { depth: 3 });
    }

    #[test]
    fn verify_examples() {
        let g = single(false);
        let v = verify_winning(&g, &BlockAll, 10).unwrap();
        match v {
            Verdict::Losing { witness, reason, .. } => {
                assert!(witness.is_empty());
                assert_eq!(reason, LossReason::DeadlockNonFinal);
            }
            other => panic!("{other:?}"),
        }
        assert!(verify_winning(&g, &AllowAll::for_game(&g), 10).unwrap().is_winning());
    }

    #[test]
    fn search_picks_first_winner() {
        let g = single(false);
        let candidates: Vec<Box<dyn Strategy>> = vec![Box::new(BlockAll), Box::new(AllowAll::for_game(&g))];
        let found = search_strategy(&g, candidates, 5).unwrap();
        assert_eq!(found.map(|(i, _)| i), Some(1));
        assert!(search_strategy(&g, vec![BlockAll], 5).unwrap().is_none());
    }

    #[test]
    fn table_strategy_missing_view_blocks() {
        let g = single(false);
        let al = g.automaton().alphabet().clone();
        let mut table = TableStrategy::new();
        let (_, stats) = verify_with_stats(&g, &table, 4).unwrap();
        assert_eq!(stats.missing_views, 1);
        table.insert(ProcessId(0), &Trace::empty(&al), [Letter(0)].into_iter().collect());
        assert!(verify_winning(&g, &table, 4).unwrap().is_winning());
    }

    #[test]
    fn partition_is_checked() {
        let g = single(false);
        let aut = g.automaton().clone();
        let a: LetterSet = [Letter(0)].into_iter().collect();
        assert!(matches!(
            DistributedGame::with_partition(aut.clone(), a.clone(), a.clone()),
            Err(GameError::OverlappingPartition(_))
        ));
        assert!(matches!(
            DistributedGame::with_partition(aut, LetterSet::new(), LetterSet::new()),
            Err(GameError::IncompletePartition(_))
        ));
    }

    #[test]
    fn replay_reports_first_rejection() {
        let g = single(false);
        let r = replay(&g, &AllowAll::for_game(&g), &[Letter(0), Letter(0)]).unwrap();
        assert_eq!(r.rejected_at, Some(1));
        assert_eq!(r.play.len(), 1);
    }
}
