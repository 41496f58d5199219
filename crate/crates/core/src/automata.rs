//! Deterministic asynchronous automata.
//!
//! A transition on letter `a` reads and writes only the local states of the
//! processes in `dom(a)`. Oracles receive those states in ascending process
//! order and return the successors in the same order.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use thiserror::Error;

use crate::traces::{DependencyAlphabet, Letter, ProcessId, Trace, TraceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error("trace is over a different alphabet than the automaton")]
    AlphabetMismatch,
    #[error("global state has {got} components, expected {expected}")]
    StateArity { got: usize, expected: usize },
    #[error("process `{process}` has no state named `{state}`")]
    UnknownState { process: String, state: String },
    #[error("process `{process}`: {reason}")]
    BadProcessSpec { process: String, reason: String },
    #[error("letter `{letter}`: {reason}")]
    BadTransition { letter: String, reason: String },
    #[error("nondeterministic transitions on `{0}`")]
    Nondeterministic(String),
    #[error("oracle returned {got} successor states for `{letter}`, expected {expected}")]
    OracleArity { letter: String, got: usize, expected: usize },
}

/// A deterministic asynchronous automaton.
pub trait AsyncAutomaton: Sync {
    type State: Clone + Eq + Hash + Debug + Send + Sync;

    fn alphabet(&self) -> &Arc<DependencyAlphabet>;

    fn initial(&self, p: ProcessId) -> Self::State;

    fn is_final(&self, p: ProcessId, state: &Self::State) -> bool;

    /// Successor local states of `dom(a)`, or `None` when `a` is disabled.
    fn transition(&self, a: Letter, locals: &[Self::State]) -> Option<Vec<Self::State>>;

    /// Consistency checks run by the exploration engine on every reached play.
    /// The default accepts everything.
    fn audit(&self, _play: &Trace, _state: &GlobalState<Self::State>) -> Result<(), String> {
        Ok(())
    }

    /// Short description of why a terminal non-final state is losing, if the
    /// automaton distinguishes explicit losing sinks from plain deadlocks.
    fn loss_label(&self, _state: &GlobalState<Self::State>) -> Option<String> {
        None
    }
}

/// One local state per process, indexed by process.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GlobalState<S>(pub Vec<S>);

impl<S> GlobalState<S> {
    pub fn get(&self, p: ProcessId) -> &S {
        &self.0[p.index()]
    }
}

pub fn initial_state<A: AsyncAutomaton + ?Sized>(aut: &A) -> GlobalState<A::State> {
    GlobalState(aut.alphabet().processes().map(|p| aut.initial(p)).collect())
}

pub fn is_final_state<A: AsyncAutomaton + ?Sized>(aut: &A, g: &GlobalState<A::State>) -> bool {
    aut.alphabet()
        .processes()
        .all(|p| aut.is_final(p, g.get(p)))
}

/// Fires `a` from `g`; components outside `dom(a)` are copied unchanged.
pub fn step<A: AsyncAutomaton + ?Sized>(
    aut: &A,
    g: &GlobalState<A::State>,
    a: Letter,
) -> Result<Option<GlobalState<A::State>>, AutomatonError> {
    let alphabet = aut.alphabet();
    alphabet.check_letter(a)?;
    if g.0.len() != alphabet.process_count() {
        return Err(AutomatonError::StateArity {
            got: g.0.len(),
            expected: alphabet.process_count(),
        });
    }
    let dom = alphabet.domain(a);
    let locals: Vec<A::State> = dom.iter().map(|p| g.get(p).clone()).collect();
    let Some(next) = aut.transition(a, &locals) else {
        return Ok(None);
    };
    if next.len() != locals.len() {
        return Err(AutomatonError::OracleArity {
            letter: alphabet.letter_name(a).to_string(),
            got: next.len(),
            expected: locals.len(),
        });
    }
    let mut out = g.clone();
    for (p, s) in dom.iter().zip(next) {
        out.0[p.index()] = s;
    }
    Ok(Some(out))
}

/// Folds [`step`] over the canonical linearization; `None` iff `u` is not a play.
pub fn run<A: AsyncAutomaton + ?Sized>(
    aut: &A,
    u: &Trace,
) -> Result<Option<GlobalState<A::State>>, AutomatonError> {
    run_from(aut, initial_state(aut), u)
}

/// Folds the letters of `u` starting from `g`.
pub fn run_from<A: AsyncAutomaton + ?Sized>(
    aut: &A,
    g: GlobalState<A::State>,
    u: &Trace,
) -> Result<Option<GlobalState<A::State>>, AutomatonError> {
    if **u.alphabet() != **aut.alphabet() {
        return Err(AutomatonError::AlphabetMismatch);
    }
    let mut g = g;
    for &a in u.letters() {
        match step(aut, &g, a)? {
            Some(next) => g = next,
            None => return Ok(None),
        }
    }
    Ok(Some(g))
}

pub fn is_play<A: AsyncAutomaton + ?Sized>(aut: &A, u: &Trace) -> Result<bool, AutomatonError> {
    Ok(run(aut, u)?.is_some())
}

/// Per-process description for a [`TableAutomaton`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessSpec {
    pub states: Vec<String>,
    pub initial: String,
    pub finals: Vec<String>,
}

/// One explicit transition: local states of `dom(letter)` in ascending process order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableTransition {
    pub letter: String,
    pub from: Vec<String>,
    pub to: Vec<String>,
}

/// An asynchronous automaton given by an explicit transition table.
#[derive(Debug, Clone)]
pub struct TableAutomaton {
    alphabet: Arc<DependencyAlphabet>,
    specs: Vec<ProcessSpec>,
    initial: Vec<usize>,
    finals: Vec<Vec<bool>>,
    table: HashMap<(Letter, Vec<usize>), Vec<usize>>,
    transitions: Vec<TableTransition>,
}

impl TableAutomaton {
    pub fn new(
        alphabet: Arc<DependencyAlphabet>,
        specs: Vec<ProcessSpec>,
        transitions: Vec<TableTransition>,
    ) -> Result<Self, AutomatonError> {
        if specs.len() != alphabet.process_count() {
            return Err(AutomatonError::StateArity {
                got: specs.len(),
                expected: alphabet.process_count(),
            });
        }
        let mut initial = Vec::new();
        let mut finals = Vec::new();
        for (i, spec) in specs.iter().enumerate() {
            let name = alphabet.process_names()[i].clone();
            let lookup = |s: &str| {
                spec.states.iter().position(|q| q == s).ok_or_else(|| AutomatonError::UnknownState {
                    process: name.clone(),
                    state: s.to_string(),
                })
            };
            if spec.states.is_empty() {
                return Err(AutomatonError::BadProcessSpec {
                    process: name,
                    reason: "no states".into(),
                });
            }
            initial.push(lookup(&spec.initial)?);
            let mut f = vec![false; spec.states.len()];
            for q in &spec.finals {
                f[lookup(q)?] = true;
            }
            finals.push(f);
        }
        let mut table = HashMap::new();
        for t in &transitions {
            let a = alphabet
                .letter(&t.letter)
                .ok_or_else(|| TraceError::UnknownLetterName(t.letter.clone()))?;
            let dom: Vec<ProcessId> = alphabet.domain(a).iter().collect();
            if t.from.len() != dom.len() || t.to.len() != dom.len() {
                return Err(AutomatonError::BadTransition {
                    letter: t.letter.clone(),
                    reason: format!("expected {} states on each side", dom.len()),
                });
            }
            let resolve = |names: &[String]| -> Result<Vec<usize>, AutomatonError> {
                dom.iter()
                    .zip(names)
                    .map(|(p, s)| {
                        specs[p.index()].states.iter().position(|q| q == s).ok_or_else(|| {
                            AutomatonError::UnknownState {
                                process: alphabet.process_name(*p).to_string(),
                                state: s.clone(),
                            }
                        })
                    })
                    .collect()
            };
            let from = resolve(&t.from)?;
            let to = resolve(&t.to)?;
            if let Some(prev) = table.insert((a, from), to.clone()) {
                if prev != to {
                    return Err(AutomatonError::Nondeterministic(t.letter.clone()));
                }
            }
        }
        Ok(TableAutomaton {
            alphabet,
            specs,
            initial,
            finals,
            table,
            transitions,
        })
    }

    pub fn specs(&self) -> &[ProcessSpec] {
        &self.specs
    }

    pub fn transitions(&self) -> &[TableTransition] {
        &self.transitions
    }

    pub fn state_name(&self, p: ProcessId, q: usize) -> &str {
        &self.specs[p.index()].states[q]
    }
}

impl AsyncAutomaton for TableAutomaton {
    type State = usize;

    fn alphabet(&self) -> &Arc<DependencyAlphabet> {
        &self.alphabet
    }

    fn initial(&self, p: ProcessId) -> usize {
        self.initial[p.index()]
    }

    fn is_final(&self, p: ProcessId, state: &usize) -> bool {
        self.finals[p.index()][*state]
    }

    fn transition(&self, a: Letter, locals: &[usize]) -> Option<Vec<usize>> {
        self.table.get(&(a, locals.to_vec())).cloned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

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

    fn one_process() -> TableAutomaton {
        let al = Arc::new(DependencyAlphabet::from_names(&["1"], &[("a", &["1"])]).unwrap());
        TableAutomaton::new(al, vec![spec(&["q0", "q1"], "q0", &["q1"])], vec![tr("a", &["q0"], &["q1"])]).unwrap()
    }

    fn two_process() -> TableAutomaton {
        let al = Arc::new(
            DependencyAlphabet::from_names(&["1", "2"], &[("a", &["1"]), ("b", &["2"]), ("s", &["1", "2"])]).unwrap(),
        );
        TableAutomaton::new(
            al,
            vec![spec(&["q0", "q1"], "q0", &["q1"]), spec(&["r0", "r1"], "r0", &["r1"])],
            vec![
                tr("a", &["q0"], &["q1"]),
                tr("b", &["r0"], &["r1"]),
                tr("s", &["q1", "r1"], &["q0", "r0"]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn step_examples() {
        let aut = one_process();
        let g0 = initial_state(&aut);
        let g1 = step(&aut, &g0, Letter(0)).unwrap().unwrap();
        assert_eq!(g1, GlobalState(vec![1]));
        assert_eq!(step(&aut, &g1, Letter(0)).unwrap(), None);
        assert!(matches!(step(&aut, &g0, Letter(9)), Err(AutomatonError::Trace(_))));
    }

    #[test]
    fn step_frame_condition() {
        let aut = two_process();
        let g0 = initial_state(&aut);
        let g1 = step(&aut, &g0, Letter(1)).unwrap().unwrap();
        assert_eq!(g1.0[0], g0.0[0]);
        assert_eq!(g1.0[1], 1);
    }

    #[test]
    fn run_examples() {
        let aut = two_process();
        let al = aut.alphabet().clone();
        assert_eq!(run(&aut, &Trace::empty(&al)).unwrap(), Some(GlobalState(vec![0, 0])));
        let ab = run(&aut, &Trace::parse(&al, "a b").unwrap()).unwrap();
        let ba = run(&aut, &Trace::parse(&al, "b a").unwrap()).unwrap();
        assert_eq!(ab, ba);
        assert_eq!(ab, Some(GlobalState(vec![1, 1])));
        assert_eq!(run(&aut, &Trace::parse(&al, "a b s").unwrap()).unwrap(), Some(GlobalState(vec![0, 0])));
        assert!(!is_play(&aut, &Trace::parse(&al, "s").unwrap()).unwrap());
        assert!(is_play(&aut, &Trace::empty(&al)).unwrap());
    }

    #[test]
    fn rejects_nondeterminism_and_bad_states() {
        let al = Arc::new(DependencyAlphabet::from_names(&["1"], &[("a", &["1"])]).unwrap());
        let err = TableAutomaton::new(
            al.clone(),
            vec![spec(&["q0", "q1"], "q0", &[])],
            vec![tr("a", &["q0"], &["q1"]), tr("a", &["q0"], &["q0"])],
        )
        .unwrap_err();
        assert_eq!(err, AutomatonError::Nondeterministic("a".into()));
        let err = TableAutomaton::new(al, vec![spec(&["q0"], "qx", &[])], vec![]).unwrap_err();
        assert!(matches!(err, AutomatonError::UnknownState { .. }));
    }

    #[test]
    fn run_rejects_foreign_traces() {
        let aut = one_process();
        let other = Arc::new(DependencyAlphabet::from_names(&["9"], &[("z", &["9"])]).unwrap());
        assert_eq!(run(&aut, &Trace::empty(&other)), Err(AutomatonError::AlphabetMismatch));
    }
}
