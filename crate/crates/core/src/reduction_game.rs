//! The six-process game built from a coloring constraint.
//!
//! Two pools `T` and `B` of three processes each play rounds of increments
//! `I_{X,0} I_{X,1} I_{X,2}`. The environment may interrupt a pair
//! `(T_ℓ, B_ℓ)` with `CHECK_ℓ`, after which the pair must answer a color: the
//! color of the grid edge `(x, y)` given by the round indices of `T_ℓ` and
//! `B_ℓ`. `LOSE` is enabled when answers contradict the constraint or each
//! other; `WIN` once a pair has answered or every process has ended.
//!
//! `LOSE` is an environment action, since the adversary must be able to fire it.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::automata::{self, AsyncAutomaton, GlobalState};
use crate::coloring::{self, Color, Coloring, ColoringConstraint, ColoringError};
use crate::games::{self, DistributedGame, GameError, Strategy, StrategyError};
use crate::traces::{DependencyAlphabet, Letter, LetterSet, ProcessId, ProcessSet, Trace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("round index is undefined before the first increment")]
    NoIncrement,
    #[error("color name `{0}` cannot be used in an action name")]
    BadColorName(String),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("coloring violates the constraint: {0}")]
    Unsatisfied(String),
    #[error("probe ({x},{y}) is not a play consistent with the strategy")]
    ProbeOutsideBudget { x: usize, y: usize },
    #[error("probe ({x},{y}): no answer is allowed after the check")]
    NoAnswer { x: usize, y: usize },
    #[error("probe ({x},{y}): several answers are allowed after the check")]
    SeveralAnswers { x: usize, y: usize },
    #[error("the uninterrupted play gives no rounds to {0}")]
    NoRounds(&'static str),
    #[error("extracted coloring violates the constraint: {0}")]
    ExtractedInvalid(String),
}

/// `⌊(h − 1) / 2⌋`, the round of a process that has played `h ≥ 1` increments.
pub fn round_index(h: usize) -> Result<usize, ReductionError> {
    if h == 0 {
        return Err(ReductionError::NoIncrement);
    }
    Ok((h - 1) / 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pool {
    T,
    B,
}

impl Pool {
    pub fn name(self) -> &'static str {
        match self {
            Pool::T => "T",
            Pool::B => "B",
        }
    }

    /// Process id of `X_ℓ`.
    pub fn process(self, ell: usize) -> ProcessId {
        match self {
            Pool::T => ProcessId(ell as u8),
            Pool::B => ProcessId(3 + ell as u8),
        }
    }
}

fn pool_of(p: ProcessId) -> (Pool, usize) {
    if p.0 < 3 {
        (Pool::T, p.index())
    } else {
        (Pool::B, p.index() - 3)
    }
}

/// Which of the losing conditions (a)–(f) fired, as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LoseConditions(pub u8);

impl LoseConditions {
    pub const INITIAL: u8 = 1;
    pub const FINAL: u8 = 2;
    pub const CHEAT: u8 = 4;
    pub const SQUARE: u8 = 8;
    pub const UPPER: u8 = 16;
    pub const LOWER: u8 = 32;

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, bit: u8) -> bool {
        self.0 & bit != 0
    }
}

impl fmt::Display for LoseConditions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = ["a", "b", "c", "d", "e", "f"]
            .iter()
            .enumerate()
            .filter(|(i, _)| self.0 & (1 << i) != 0)
            .map(|(_, n)| *n)
            .collect();
        write!(f, "{}", names.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Playing,
    Ended,
    Checked,
    Answered(Color),
    Won,
    Lost(LoseConditions),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LastAction {
    None,
    Increment,
    End,
    Check,
    Answer,
}

/// Local state of process `X_ℓ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProcessLocalState {
    pub pool: Pool,
    pub index: u8,
    pub phase: Phase,
    /// May synchronize with the next process of the pool.
    pub turn_flag: bool,
    pub inc_mod4: u8,
    pub inc_total_is_one: bool,
    /// The last increment closed the process's part of the round.
    pub round_complete: bool,
    /// `END` was played; kept after a later check.
    pub ended: bool,
    pub last_action: LastAction,
}

impl ProcessLocalState {
    fn terminal(&self) -> bool {
        matches!(self.phase, Phase::Won | Phase::Lost(_))
    }

    /// Parity of the round index, read from the increment counter mod 4.
    pub fn round_parity(&self) -> u8 {
        match self.inc_mod4 {
            1 | 2 => 0,
            _ => 1,
        }
    }

    fn increment(&mut self) {
        self.inc_total_is_one = self.last_action == LastAction::None;
        self.inc_mod4 = (self.inc_mod4 + 1) % 4;
        self.round_complete = self.inc_mod4 % 2 == 0;
        self.turn_flag = !self.turn_flag;
        self.last_action = LastAction::Increment;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    /// `I_{X,ℓ}`, shared by `X_ℓ` and `X_{ℓ+1 mod 3}`.
    Increment(Pool, usize),
    End(Pool, usize),
    Check(usize),
    Answer(usize, Color),
    Win,
    Lose,
}

/// Names and kinds of the game's actions.
#[derive(Debug, Clone)]
pub struct Catalog {
    alphabet: Arc<DependencyAlphabet>,
    actions: Vec<Action>,
    colors: usize,
}

impl Catalog {
    fn new(k: &ColoringConstraint) -> Result<Self, ReductionError> {
        for name in k.colors() {
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(ReductionError::BadColorName(name.clone()));
            }
        }
        let processes: Vec<String> = ["T0", "T1", "T2", "B0", "B1", "B2"].iter().map(|s| s.to_string()).collect();
        let mut actions = Vec::new();
        for pool in [Pool::T, Pool::B] {
            for ell in 0..3 {
                actions.push(Action::Increment(pool, ell));
            }
        }
        for pool in [Pool::T, Pool::B] {
            for ell in 0..3 {
                actions.push(Action::End(pool, ell));
            }
        }
        for ell in 0..3 {
            actions.push(Action::Check(ell));
        }
        for ell in 0..3 {
            for c in 0..k.color_count() {
                actions.push(Action::Answer(ell, c));
            }
        }
        actions.push(Action::Win);
        actions.push(Action::Lose);
        let all = ProcessSet::from_processes((0..6).map(ProcessId));
        let letters: Vec<(String, ProcessSet)> = actions
            .iter()
            .map(|a| match *a {
                Action::Increment(pool, ell) => (
                    format!("I_{}{}", pool.name(), ell),
                    ProcessSet::singleton(pool.process(ell)).with(pool.process((ell + 1) % 3)),
                ),
                Action::End(pool, ell) => (format!("END_{}{}", pool.name(), ell), ProcessSet::singleton(pool.process(ell))),
                Action::Check(ell) => (
                    format!("CHECK_{ell}"),
                    ProcessSet::singleton(Pool::T.process(ell)).with(Pool::B.process(ell)),
                ),
                Action::Answer(ell, c) => (
                    format!("ANSWER_{ell}_{}", k.color_name(c)),
                    ProcessSet::singleton(Pool::T.process(ell)).with(Pool::B.process(ell)),
                ),
                Action::Win => ("WIN".to_string(), all),
                Action::Lose => ("LOSE".to_string(), all),
            })
            .collect();
        let letters = letters.into_iter().map(|(name, dom)| (name, dom.iter().collect::<Vec<_>>()));
        let alphabet = DependencyAlphabet::new(processes, letters).map_err(GameError::from)?;
        Ok(Catalog {
            alphabet: Arc::new(alphabet),
            actions,
            colors: k.color_count(),
        })
    }

    pub fn alphabet(&self) -> &Arc<DependencyAlphabet> {
        &self.alphabet
    }

    pub fn action(&self, a: Letter) -> Action {
        self.actions[a.index()]
    }

    pub fn letter(&self, action: Action) -> Letter {
        let i = match action {
            Action::Increment(pool, ell) => pool as usize * 3 + ell,
            Action::End(pool, ell) => 6 + pool as usize * 3 + ell,
            Action::Check(ell) => 12 + ell,
            Action::Answer(ell, c) => 15 + ell * self.colors + c,
            Action::Win => 15 + 3 * self.colors,
            Action::Lose => 16 + 3 * self.colors,
        };
        Letter(i as u16)
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn environment(&self) -> LetterSet {
        self.actions
            .iter()
            .enumerate()
            .filter(|(_, a)| matches!(a, Action::Check(_) | Action::Lose))
            .map(|(i, _)| Letter(i as u16))
            .collect()
    }

    fn is_increment_of(&self, a: Letter, p: ProcessId) -> bool {
        matches!(self.action(a), Action::Increment(..)) && self.alphabet.domain(a).contains(p)
    }

    /// Increments in `u` involving `p`.
    pub fn increments(&self, u: &Trace, p: ProcessId) -> usize {
        u.letters().iter().filter(|&&a| self.is_increment_of(a, p)).count()
    }

    /// The last action of `p` in `u`.
    pub fn last_of(&self, u: &Trace, p: ProcessId) -> Option<Letter> {
        u.letters().iter().rev().copied().find(|&a| self.alphabet.domain(a).contains(p))
    }
}

/// The asynchronous automaton of the game.
#[derive(Debug, Clone)]
pub struct ReductionAutomaton {
    catalog: Catalog,
    constraint: ColoringConstraint,
}

pub type ColoringGame = DistributedGame<ReductionAutomaton>;

impl ReductionAutomaton {
    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    pub fn constraint(&self) -> &ColoringConstraint {
        &self.constraint
    }

    fn lose_conditions(&self, s: &[ProcessLocalState]) -> LoseConditions {
        let k = &self.constraint;
        let answer = |ell: usize| match (s[ell].phase, s[3 + ell].phase) {
            (Phase::Answered(c), Phase::Answered(d)) if c == d => Some(c),
            _ => None,
        };
        let mut mask = 0;
        for ell in 0..3 {
            let Some(c) = answer(ell) else { continue };
            let (t, b) = (&s[ell], &s[3 + ell]);
            if t.inc_total_is_one && b.inc_total_is_one && !k.is_initial(c) {
                mask |= LoseConditions::INITIAL;
            }
            if t.ended && b.ended && !k.is_final(c) {
                mask |= LoseConditions::FINAL;
            }
            for ell2 in 0..ell {
                let Some(c2) = answer(ell2) else { continue };
                let top_same = s[ell].round_parity() == s[ell2].round_parity();
                let bottom_same = s[3 + ell].round_parity() == s[3 + ell2].round_parity();
                mask |= match (top_same, bottom_same) {
                    (true, true) if c != c2 => LoseConditions::CHEAT,
                    (false, false) if k.squares().contains(c, c2) => LoseConditions::SQUARE,
                    (false, true) if k.upper().contains(c, c2) => LoseConditions::UPPER,
                    (true, false) if k.lower().contains(c, c2) => LoseConditions::LOWER,
                    _ => 0,
                };
            }
        }
        LoseConditions(mask)
    }
}

impl AsyncAutomaton for ReductionAutomaton {
    type State = ProcessLocalState;

    fn alphabet(&self) -> &Arc<DependencyAlphabet> {
        &self.catalog.alphabet
    }

    fn initial(&self, p: ProcessId) -> ProcessLocalState {
        let (pool, ell) = pool_of(p);
        ProcessLocalState {
            pool,
            index: ell as u8,
            phase: Phase::Playing,
            turn_flag: ell == 0,
            inc_mod4: 0,
            inc_total_is_one: false,
            round_complete: false,
            ended: false,
            last_action: LastAction::None,
        }
    }

    fn is_final(&self, _: ProcessId, state: &ProcessLocalState) -> bool {
        state.phase == Phase::Won
    }

    fn transition(&self, a: Letter, locals: &[ProcessLocalState]) -> Option<Vec<ProcessLocalState>> {
        let mut next = locals.to_vec();
        match self.catalog.action(a) {
            Action::Increment(_, ell) => {
                // Domain order is by process id, so X_2's increment lists X_0 first.
                let (init, partner) = if ell == 2 { (1, 0) } else { (0, 1) };
                let ok = locals.iter().all(|s| s.phase == Phase::Playing) && locals[init].turn_flag;
                if !ok {
                    return None;
                }
                next[init].increment();
                next[partner].increment();
            }
            Action::End(..) => {
                let s = &locals[0];
                if s.phase != Phase::Playing || !s.round_complete || s.last_action != LastAction::Increment {
                    return None;
                }
                next[0].phase = Phase::Ended;
                next[0].ended = true;
                next[0].last_action = LastAction::End;
            }
            Action::Check(_) => {
                let ok = locals.iter().all(|s| {
                    matches!(s.phase, Phase::Playing | Phase::Ended)
                        && matches!(s.last_action, LastAction::Increment | LastAction::End)
                });
                if !ok {
                    return None;
                }
                for s in &mut next {
                    s.phase = Phase::Checked;
                    s.last_action = LastAction::Check;
                }
            }
            Action::Answer(_, c) => {
                if !locals.iter().all(|s| s.phase == Phase::Checked) {
                    return None;
                }
                for s in &mut next {
                    s.phase = Phase::Answered(c);
                    s.last_action = LastAction::Answer;
                }
            }
            Action::Win => {
                if locals.iter().any(ProcessLocalState::terminal) {
                    return None;
                }
                let all_ended = locals.iter().all(|s| s.phase == Phase::Ended);
                let answered = (0..3).any(|ell| {
                    matches!(locals[ell].phase, Phase::Answered(_)) && matches!(locals[3 + ell].phase, Phase::Answered(_))
                });
                if !all_ended && !answered {
                    return None;
                }
                for s in &mut next {
                    s.phase = Phase::Won;
                }
            }
            Action::Lose => {
                if locals.iter().any(ProcessLocalState::terminal) {
                    return None;
                }
                let fired = self.lose_conditions(locals);
                if fired.is_empty() {
                    return None;
                }
                for s in &mut next {
                    s.phase = Phase::Lost(fired);
                }
            }
        }
        Some(next)
    }

    fn audit(&self, play: &Trace, state: &GlobalState<ProcessLocalState>) -> Result<(), String> {
        let cat = &self.catalog;
        for pool in [Pool::T, Pool::B] {
            let order: Vec<usize> = play
                .letters()
                .iter()
                .filter_map(|&a| match cat.action(a) {
                    Action::Increment(p, ell) if p == pool => Some(ell),
                    _ => None,
                })
                .collect();
            if order.iter().enumerate().any(|(i, &ell)| ell != i % 3) {
                return Err(format!("increments of pool {} out of order", pool.name()));
            }
        }
        for p in (0..6).map(ProcessId) {
            let h = cat.increments(play, p);
            let s = state.get(p);
            if s.inc_mod4 as usize != h % 4 || s.inc_total_is_one != (h == 1) {
                return Err(format!("increment counters of {} disagree with the play", cat.alphabet.process_name(p)));
            }
        }
        for ell in 0..3 {
            let from_trace = [Pool::T, Pool::B].iter().all(|pool| {
                cat.last_of(play, pool.process(ell))
                    .is_some_and(|a| matches!(cat.action(a), Action::Increment(..) | Action::End(..)))
            });
            let enabled = automata::step(self, state, cat.letter(Action::Check(ell)))
                .map_err(|e| e.to_string())?
                .is_some();
            if from_trace != enabled {
                return Err(format!("CHECK_{ell} enabled={enabled} but last actions say {from_trace}"));
            }
        }
        if state.0.iter().any(ProcessLocalState::terminal) {
            for a in cat.alphabet.letters() {
                if automata::step(self, state, a).map_err(|e| e.to_string())?.is_some() {
                    return Err(format!("{} enabled after the game ended", cat.alphabet.letter_name(a)));
                }
            }
        }
        for pool in [Pool::T, Pool::B] {
            for ell in 1..3 {
                for ell2 in 0..ell {
                    let (p, p2) = (pool.process(ell), pool.process(ell2));
                    let (h, h2) = (cat.increments(play, p), cat.increments(play, p2));
                    if h == 0 || h2 == 0 {
                        continue;
                    }
                    let (r, r2) = ((h - 1) / 2, (h2 - 1) / 2);
                    if r2 != r && r2 != r + 1 {
                        return Err(format!("{}{ell2} is neither level with nor one round ahead of {}{ell}", pool.name(), pool.name()));
                    }
                    let parity_same = state.get(p).round_parity() == state.get(p2).round_parity();
                    if parity_same != (r == r2) {
                        return Err(format!("round parity of {}{ell2}/{}{ell} disagrees with round indices", pool.name(), pool.name()));
                    }
                }
            }
        }
        Ok(())
    }

    fn loss_label(&self, state: &GlobalState<ProcessLocalState>) -> Option<String> {
        match state.0.first()?.phase {
            Phase::Lost(fired) => Some(format!("LOSE ({fired})")),
            _ => None,
        }
    }
}

/// Builds the game of a constraint: `CHECK_ℓ` and `LOSE` belong to the
/// environment, every other action is controllable.
pub fn build_game(k: &ColoringConstraint) -> Result<ColoringGame, ReductionError> {
    let catalog = Catalog::new(k)?;
    let env = catalog.environment();
    let automaton = ReductionAutomaton {
        catalog,
        constraint: k.clone(),
    };
    Ok(DistributedGame::new(automaton, env)?)
}

/// Plays `n` rounds on the top pool and `m` on the bottom one, then ends; after
/// a check answers the color of the checked pair's cell; always allows `WIN`.
#[derive(Debug, Clone)]
pub struct ColoringStrategy {
    catalog: Catalog,
    coloring: Coloring,
}

impl ColoringStrategy {
    /// Skips the satisfaction check, to build deliberately losing strategies.
    pub fn unchecked(game: &ColoringGame, f: Coloring) -> Result<Self, ReductionError> {
        let colors = game.automaton().constraint().color_count();
        f.check_colors(colors)?;
        Ok(ColoringStrategy {
            catalog: game.automaton().catalog().clone(),
            coloring: f,
        })
    }

    pub fn coloring(&self) -> &Coloring {
        &self.coloring
    }
}

pub fn strategy_from_coloring(game: &ColoringGame, f: &Coloring) -> Result<ColoringStrategy, ReductionError> {
    let k = game.automaton().constraint();
    if let Some(v) = coloring::check(f, k)? {
        return Err(ReductionError::Unsatisfied(v.describe(k)));
    }
    ColoringStrategy::unchecked(game, f.clone())
}

impl Strategy for ColoringStrategy {
    fn decide(&self, p: ProcessId, view: &Trace) -> Result<LetterSet, StrategyError> {
        let cat = &self.catalog;
        let (pool, ell) = pool_of(p);
        let mut out = LetterSet::new();
        out.insert(cat.letter(Action::Win));
        if let Some(last) = cat.last_of(view, p) {
            if let Action::Check(checked) = cat.action(last) {
                let x = round_of(cat, view, Pool::T.process(checked))?;
                let y = round_of(cat, view, Pool::B.process(checked))?;
                if x >= self.coloring.n() || y >= self.coloring.m() {
                    return Err(StrategyError::Rule(format!("check at ({x},{y}) outside the coloring")));
                }
                out.insert(cat.letter(Action::Answer(checked, self.coloring.get(x, y))));
                return Ok(out);
            }
        }
        let budget = match pool {
            Pool::T => self.coloring.n(),
            Pool::B => self.coloring.m(),
        };
        if cat.increments(view, p) < 2 * budget {
            out.insert(cat.letter(Action::Increment(pool, ell)));
            out.insert(cat.letter(Action::Increment(pool, (ell + 2) % 3)));
        } else {
            out.insert(cat.letter(Action::End(pool, ell)));
        }
        Ok(out)
    }
}

fn round_of(cat: &Catalog, view: &Trace, p: ProcessId) -> Result<usize, StrategyError> {
    round_index(cat.increments(view, p)).map_err(|e| StrategyError::Rule(e.to_string()))
}

/// Restricts a strategy to a single answer per check: the least color both
/// checked processes allow.
pub struct SingleAnswer<'a, S: ?Sized> {
    catalog: Catalog,
    inner: &'a S,
}

impl<'a, S: Strategy + ?Sized> SingleAnswer<'a, S> {
    pub fn new(game: &ColoringGame, inner: &'a S) -> Self {
        SingleAnswer {
            catalog: game.automaton().catalog().clone(),
            inner,
        }
    }
}

impl<S: Strategy + ?Sized> Strategy for SingleAnswer<'_, S> {
    fn decide(&self, p: ProcessId, view: &Trace) -> Result<LetterSet, StrategyError> {
        let cat = &self.catalog;
        let mut set = self.inner.decide(p, view)?;
        let Some(Action::Check(ell)) = cat.last_of(view, p).map(|a| cat.action(a)) else {
            return Ok(set);
        };
        // Right after the check both processes share this view.
        let other = if p == Pool::T.process(ell) { Pool::B.process(ell) } else { Pool::T.process(ell) };
        let theirs = match self.inner.decide(other, view) {
            Ok(s) => s,
            Err(StrategyError::MissingView { .. }) => LetterSet::new(),
            Err(e) => return Err(e),
        };
        let answers: Vec<Letter> = set
            .iter()
            .filter(|&a| matches!(cat.action(a), Action::Answer(..)))
            .collect();
        let keep = answers.iter().copied().find(|&a| theirs.contains(a));
        for a in answers {
            if Some(a) != keep {
                set.remove(a);
            }
        }
        Ok(set)
    }
}

/// `(I_{X,0} I_{X,1} I_{X,2})^r I_{X,0} I_{X,1}` for both pools: after it,
/// `T_1` and `B_1` are in rounds `x` and `y`.
pub fn probe_play(game: &ColoringGame, x: usize, y: usize) -> Vec<Letter> {
    let cat = game.automaton().catalog();
    let mut word = Vec::new();
    for (pool, r) in [(Pool::T, x), (Pool::B, y)] {
        for i in 0..3 * r + 2 {
            word.push(cat.letter(Action::Increment(pool, i % 3)));
        }
    }
    word
}

/// The color answered by the pair `(T_1, B_1)` when checked in rounds `(x, y)`.
pub fn probe<S: Strategy + ?Sized>(game: &ColoringGame, strategy: &S, x: usize, y: usize) -> Result<Color, ReductionError> {
    let cat = game.automaton().catalog();
    let mut word = probe_play(game, x, y);
    word.push(cat.letter(Action::Check(1)));
    let r = games::replay(game, strategy, &word)?;
    if r.rejected_at.is_some() {
        return Err(ReductionError::ProbeOutsideBudget { x, y });
    }
    let allowed = games::allowed(game, strategy, &r.play)?;
    let answers: Vec<Color> = allowed
        .iter()
        .filter_map(|a| match cat.action(a) {
            Action::Answer(1, c) => Some(c),
            _ => None,
        })
        .collect();
    match answers.as_slice() {
        [] => Err(ReductionError::NoAnswer { x, y }),
        [c] => Ok(*c),
        _ => Err(ReductionError::SeveralAnswers { x, y }),
    }
}

/// The longest play using only increments and `END`, taking the least allowed
/// letter at each step.
pub fn uninterrupted_play<S: Strategy + ?Sized>(game: &ColoringGame, strategy: &S) -> Result<Trace, ReductionError> {
    let cat = game.automaton().catalog();
    let mut play = Trace::empty(cat.alphabet());
    loop {
        let allowed = games::allowed(game, strategy, &play)?;
        let next = allowed
            .iter()
            .find(|&a| matches!(cat.action(a), Action::Increment(..) | Action::End(..)));
        match next {
            Some(a) => play = play.push(a).map_err(GameError::from)?,
            None => return Ok(play),
        }
    }
}

/// Reads a coloring off a winning strategy: grid size from the rounds of
/// `T_1` and `B_1` in the uninterrupted play, cells by probing.
///
/// `Ok(None)` if the strategy is not verified winning within `max_len`.
pub fn coloring_from_strategy<S: Strategy + ?Sized>(
    game: &ColoringGame,
    strategy: &S,
    max_len: usize,
) -> Result<Option<Coloring>, ReductionError> {
    if !games::verify_winning(game, strategy, max_len)?.is_winning() {
        return Ok(None);
    }
    let cat = game.automaton().catalog();
    let single = SingleAnswer::new(game, strategy);
    let play = uninterrupted_play(game, &single)?;
    let rounds = |p: ProcessId, name| {
        round_index(cat.increments(&play, p))
            .map(|r| r + 1)
            .map_err(|_| ReductionError::NoRounds(name))
    };
    let n = rounds(Pool::T.process(1), "T1")?;
    let m = rounds(Pool::B.process(1), "B1")?;
    let mut cells = BTreeMap::new();
    for x in 0..n {
        for y in 0..m {
            cells.insert((x, y), probe(game, &single, x, y)?);
        }
    }
    let f = Coloring::from_fn(n, m, |x, y| cells[&(x, y)])?;
    let k = game.automaton().constraint();
    if let Some(v) = coloring::check(&f, k)? {
        return Err(ReductionError::ExtractedInvalid(v.describe(k)));
    }
    Ok(Some(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{verify_winning, BlockAll, LossReason, Verdict};

    fn one_color(initial: bool) -> ColoringConstraint {
        let init: &[&str] = if initial { &["c"] } else { &[] };
        ColoringConstraint::from_names(&["c"], init, &["c"], &[], &[], &[]).unwrap()
    }

    #[test]
    fn round_index_examples() {
        assert_eq!(round_index(1).unwrap(), 0);
        assert_eq!(round_index(2).unwrap(), 0);
        assert_eq!(round_index(3).unwrap(), 1);
        assert_eq!(round_index(5).unwrap(), 2);
        assert_eq!(round_index(0), Err(ReductionError::NoIncrement));
    }

    #[test]
    fn action_catalog() {
        let k = ColoringConstraint::from_names(&["c0", "c1"], &["c0"], &["c0"], &[], &[], &[]).unwrap();
        let g = build_game(&k).unwrap();
        let cat = g.automaton().catalog();
        assert_eq!(cat.len(), 23);
        for a in cat.alphabet().letters() {
            assert_eq!(cat.letter(cat.action(a)), a);
            let env = matches!(cat.action(a), Action::Check(_) | Action::Lose);
            assert_eq!(g.is_environment(a), env);
        }
        let al = cat.alphabet();
        assert_eq!(al.domain(al.letter("I_T2").unwrap()), ProcessSet::from_processes([ProcessId(2), ProcessId(0)]));
        assert_eq!(al.domain(al.letter("WIN").unwrap()).len(), 6);
        assert_eq!(al.domain(al.letter("END_B1").unwrap()), ProcessSet::singleton(ProcessId(4)));
    }

    #[test]
    fn block_all_loses_at_once() {
        let g = build_game(&one_color(true)).unwrap();
        let v = verify_winning(&g, &BlockAll, 40).unwrap();
        match v {
            Verdict::Losing { witness, reason, .. } => {
                assert!(witness.is_empty());
                assert_eq!(reason, LossReason::DeadlockNonFinal);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_cell_coloring_wins() {
        let g = build_game(&one_color(true)).unwrap();
        let f = Coloring::new(1, 1, vec![0]).unwrap();
        let s = strategy_from_coloring(&g, &f).unwrap();
        assert!(verify_winning(&g, &s, 40).unwrap().is_winning());
        assert_eq!(probe(&g, &s, 0, 0).unwrap(), 0);
        assert_eq!(coloring_from_strategy(&g, &s, 40).unwrap(), Some(f));
    }

    #[test]
    fn missing_initial_color_loses_by_lose() {
        let k = one_color(false);
        let g = build_game(&k).unwrap();
        let f = Coloring::new(1, 1, vec![0]).unwrap();
        assert!(matches!(strategy_from_coloring(&g, &f), Err(ReductionError::Unsatisfied(_))));
        let s = ColoringStrategy::unchecked(&g, f).unwrap();
        match verify_winning(&g, &s, 40).unwrap() {
            Verdict::Losing { witness, reason, detail } => {
                assert_eq!(reason, LossReason::LoseState);
                assert_eq!(witness.last().ok().map(|a| g.automaton().catalog().action(a)), Some(Action::Lose));
                assert!(detail.unwrap().contains('a'));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn probe_outside_budget_is_an_error() {
        let g = build_game(&one_color(true)).unwrap();
        let s = strategy_from_coloring(&g, &Coloring::new(1, 1, vec![0]).unwrap()).unwrap();
        assert_eq!(probe(&g, &s, 1, 0), Err(ReductionError::ProbeOutsideBudget { x: 1, y: 0 }));
    }

    #[test]
    fn color_names_must_be_tokens() {
        let k = ColoringConstraint::from_names(&["a b"], &[], &[], &[], &[], &[]).unwrap();
        assert!(matches!(build_game(&k), Err(ReductionError::BadColorName(_))));
    }

    #[test]
    fn lose_mask_display() {
        assert_eq!(LoseConditions(LoseConditions::INITIAL | LoseConditions::CHEAT).to_string(), "a,c");
    }
}
