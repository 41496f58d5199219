//! Dependency alphabets and Mazurkiewicz traces.
//!
//! Letters carry a nonempty set of processes (their domain). Two letters commute
//! exactly when their domains are disjoint, so the dependency relation is never
//! supplied separately. A [`Trace`] stores the lexicographically least
//! linearization of its class under the alphabet's declared letter order; this
//! word is the canonical representative used for equality, hashing and
//! serialization.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

/// Maximum number of processes an alphabet may declare (domains are `u64` masks).
pub const MAX_PROCESSES: usize = 64;

/// Index of a letter in its alphabet. The letter order is the index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u16);

impl Letter {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Index of a process in its alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProcessId(pub u8);

impl ProcessId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A set of processes, stored as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ProcessSet(pub u64);

impl ProcessSet {
    pub const EMPTY: ProcessSet = ProcessSet(0);

    pub fn singleton(p: ProcessId) -> Self {
        ProcessSet(1 << p.0)
    }

    pub fn from_processes<I: IntoIterator<Item = ProcessId>>(iter: I) -> Self {
        iter.into_iter()
            .fold(ProcessSet::EMPTY, |acc, p| acc.with(p))
    }

    pub fn with(self, p: ProcessId) -> Self {
        ProcessSet(self.0 | (1 << p.0))
    }

    pub fn contains(self, p: ProcessId) -> bool {
        self.0 & (1 << p.0) != 0
    }

    pub fn intersects(self, other: ProcessSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: ProcessSet) -> Self {
        ProcessSet(self.0 | other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Processes in ascending order.
    pub fn iter(self) -> impl Iterator<Item = ProcessId> {
        let bits = self.0;
        (0..MAX_PROCESSES as u8).filter(move |i| bits & (1 << i) != 0).map(ProcessId)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("unknown letter #{0}")]
    UnknownLetter(u16),
    #[error("unknown letter name `{0}`")]
    UnknownLetterName(String),
    #[error("unknown process `{0}`")]
    UnknownProcess(String),
    #[error("traces are over different alphabets")]
    AlphabetMismatch,
    #[error("letter `{0}` has an empty domain")]
    EmptyDomain(String),
    #[error("duplicate {kind} name `{name}`")]
    Duplicate { kind: &'static str, name: String },
    #[error("at most {MAX_PROCESSES} processes are supported, got {0}")]
    TooManyProcesses(usize),
    #[error("at most 65535 letters are supported, got {0}")]
    TooManyLetters(usize),
    #[error("the empty trace has no last letter")]
    EmptyTrace,
    #[error("trace `{0}` is not prime")]
    NotPrime(String),
}

/// A finite alphabet of letters, each mapped to the nonempty set of processes
/// that take part in it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyAlphabet {
    processes: Vec<String>,
    letters: Vec<String>,
    domains: Vec<ProcessSet>,
}

impl DependencyAlphabet {
    /// Builds an alphabet. Letter order is the order of `letters`.
    pub fn new<P, L, D>(processes: P, letters: L) -> Result<Self, TraceError>
    where
        P: IntoIterator,
        P::Item: Into<String>,
        L: IntoIterator<Item = (String, D)>,
        D: IntoIterator<Item = ProcessId>,
    {
        let processes: Vec<String> = processes.into_iter().map(Into::into).collect();
        if processes.len() > MAX_PROCESSES {
            return Err(TraceError::TooManyProcesses(processes.len()));
        }
        check_unique("process", &processes)?;
        let mut names = Vec::new();
        let mut domains = Vec::new();
        for (name, dom) in letters {
            let mut set = ProcessSet::EMPTY;
            for p in dom {
                if p.index() >= processes.len() {
                    return Err(TraceError::UnknownProcess(format!("#{}", p.0)));
                }
                set = set.with(p);
            }
            if set.is_empty() {
                return Err(TraceError::EmptyDomain(name));
            }
            names.push(name);
            domains.push(set);
        }
        if names.len() > u16::MAX as usize {
            return Err(TraceError::TooManyLetters(names.len()));
        }
        check_unique("letter", &names)?;
        Ok(DependencyAlphabet {
            processes,
            letters: names,
            domains,
        })
    }

    /// Convenience constructor from process names and `(letter, [process names])`.
    pub fn from_names(processes: &[&str], letters: &[(&str, &[&str])]) -> Result<Self, TraceError> {
        let lookup = |name: &str| {
            processes
                .iter()
                .position(|p| *p == name)
                .map(|i| ProcessId(i as u8))
                .ok_or_else(|| TraceError::UnknownProcess(name.to_string()))
        };
        let mut resolved = Vec::with_capacity(letters.len());
        for (name, dom) in letters {
            let dom = dom.iter().map(|p| lookup(p)).collect::<Result<Vec<_>, _>>()?;
            resolved.push((name.to_string(), dom));
        }
        DependencyAlphabet::new(processes.iter().copied(), resolved)
    }

    pub fn process_count(&self) -> usize {
        self.processes.len()
    }

    pub fn letter_count(&self) -> usize {
        self.letters.len()
    }

    pub fn process_name(&self, p: ProcessId) -> &str {
        &self.processes[p.index()]
    }

    pub fn process_names(&self) -> &[String] {
        &self.processes
    }

    pub fn letter_name(&self, a: Letter) -> &str {
        &self.letters[a.index()]
    }

    pub fn letter_names(&self) -> &[String] {
        &self.letters
    }

    pub fn process(&self, name: &str) -> Option<ProcessId> {
        self.processes.iter().position(|p| p == name).map(|i| ProcessId(i as u8))
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.letters.iter().position(|l| l == name).map(|i| Letter(i as u16))
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.letters.len()).map(|i| Letter(i as u16))
    }

    pub fn processes(&self) -> impl Iterator<Item = ProcessId> + '_ {
        (0..self.processes.len()).map(|i| ProcessId(i as u8))
    }

    pub fn domain(&self, a: Letter) -> ProcessSet {
        self.domains[a.index()]
    }

    pub fn contains(&self, a: Letter) -> bool {
        a.index() < self.letters.len()
    }

    pub fn independent(&self, a: Letter, b: Letter) -> bool {
        !self.domain(a).intersects(self.domain(b))
    }

    pub fn check_letter(&self, a: Letter) -> Result<Letter, TraceError> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(TraceError::UnknownLetter(a.0))
        }
    }

    pub fn check_process(&self, p: ProcessId) -> Result<ProcessId, TraceError> {
        if p.index() < self.processes.len() {
            Ok(p)
        } else {
            Err(TraceError::UnknownProcess(format!("#{}", p.0)))
        }
    }

    /// Resolves letter names into a word.
    pub fn word<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<Letter>, TraceError> {
        names
            .iter()
            .map(|n| {
                self.letter(n.as_ref())
                    .ok_or_else(|| TraceError::UnknownLetterName(n.as_ref().to_string()))
            })
            .collect()
    }

    /// Renders a word as space-separated letter names.
    pub fn render(&self, word: &[Letter]) -> String {
        word.iter()
            .map(|a| self.letter_name(*a))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn check_unique(kind: &'static str, names: &[String]) -> Result<(), TraceError> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(TraceError::Duplicate {
                kind,
                name: n.clone(),
            });
        }
    }
    Ok(())
}

/// A set of letters backed by a bit vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LetterSet {
    bits: Vec<u64>,
}

impl LetterSet {
    pub fn new() -> Self {
        LetterSet { bits: Vec::new() }
    }

    pub fn insert(&mut self, a: Letter) {
        let (w, b) = (a.index() / 64, a.index() % 64);
        if self.bits.len() <= w {
            self.bits.resize(w + 1, 0);
        }
        self.bits[w] |= 1 << b;
    }

    pub fn remove(&mut self, a: Letter) {
        let (w, b) = (a.index() / 64, a.index() % 64);
        if let Some(word) = self.bits.get_mut(w) {
            *word &= !(1 << b);
        }
        // Keep no trailing zero words so the derived equality is set equality.
        while self.bits.last() == Some(&0) {
            self.bits.pop();
        }
    }

    pub fn contains(&self, a: Letter) -> bool {
        let (w, b) = (a.index() / 64, a.index() % 64);
        self.bits.get(w).is_some_and(|word| word & (1 << b) != 0)
    }

    pub fn union_with(&mut self, other: &LetterSet) {
        if self.bits.len() < other.bits.len() {
            self.bits.resize(other.bits.len(), 0);
        }
        for (x, y) in self.bits.iter_mut().zip(&other.bits) {
            *x |= *y;
        }
    }

    pub fn is_subset(&self, other: &LetterSet) -> bool {
        self.bits.iter().enumerate().all(|(i, w)| {
            let o = other.bits.get(i).copied().unwrap_or(0);
            w & !o == 0
        })
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|w| *w == 0)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Letters in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = Letter> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, w)| {
            let w = *w;
            (0..64).filter(move |b| w & (1u64 << b) != 0).map(move |b| Letter((i * 64 + b) as u16))
        })
    }
}

impl FromIterator<Letter> for LetterSet {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        let mut set = LetterSet::new();
        for a in iter {
            set.insert(a);
        }
        set
    }
}

impl fmt::Debug for LetterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|a| a.0)).finish()
    }
}

/// A Mazurkiewicz trace in lexicographic normal form.
#[derive(Clone)]
pub struct Trace {
    alphabet: Arc<DependencyAlphabet>,
    canonical: Vec<Letter>,
}

impl PartialEq for Trace {
    fn eq(&self, other: &Self) -> bool {
        self.canonical == other.canonical && same_alphabet(&self.alphabet, &other.alphabet)
    }
}

impl Eq for Trace {}

impl Hash for Trace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical.hash(state);
    }
}

impl PartialOrd for Trace {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Trace {
    /// Shortlex order on canonical words.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.canonical
            .len()
            .cmp(&other.canonical.len())
            .then_with(|| self.canonical.cmp(&other.canonical))
    }
}

impl fmt::Debug for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Trace[{}]", self.alphabet.render(&self.canonical))
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.canonical.is_empty() {
            f.write_str("ε")
        } else {
            f.write_str(&self.alphabet.render(&self.canonical))
        }
    }
}

fn same_alphabet(a: &Arc<DependencyAlphabet>, b: &Arc<DependencyAlphabet>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Linearization-invariant statistics of a trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStats {
    pub length: usize,
    /// Occurrences of each letter, indexed by letter.
    pub letter_counts: Vec<usize>,
    /// `|u|_p` for each process, indexed by process.
    pub process_counts: Vec<usize>,
    pub domain: ProcessSet,
}

/// Inserts `a` at the end of the trace whose lexicographic normal form is `word`,
/// keeping the result in normal form.
///
/// The letter lands at the first position from which it commutes with the whole
/// remaining suffix and is smaller than the letter there.
fn push_normal(alphabet: &DependencyAlphabet, word: &mut Vec<Letter>, a: Letter) {
    let dom = alphabet.domain(a);
    // Earliest index k such that a commutes with word[k..].
    let mut k = word.len();
    while k > 0 && !alphabet.domain(word[k - 1]).intersects(dom) {
        k -= 1;
    }
    let pos = (k..word.len()).find(|&i| a < word[i]).unwrap_or(word.len());
    word.insert(pos, a);
}

/// Returns the trace containing `word`.
pub fn normalize(alphabet: &Arc<DependencyAlphabet>, word: &[Letter]) -> Result<Trace, TraceError> {
    let mut canonical = Vec::with_capacity(word.len());
    for &a in word {
        alphabet.check_letter(a)?;
        push_normal(alphabet, &mut canonical, a);
    }
    Ok(Trace {
        alphabet: Arc::clone(alphabet),
        canonical,
    })
}

/// Whether two words over the same alphabet belong to the same trace.
pub fn equivalent(
    alphabet: &Arc<DependencyAlphabet>,
    w1: &[Letter],
    w2: &[Letter],
) -> Result<bool, TraceError> {
    Ok(normalize(alphabet, w1)? == normalize(alphabet, w2)?)
}

impl Trace {
    pub fn empty(alphabet: &Arc<DependencyAlphabet>) -> Trace {
        Trace {
            alphabet: Arc::clone(alphabet),
            canonical: Vec::new(),
        }
    }

    /// Parses space-separated letter names.
    pub fn parse(alphabet: &Arc<DependencyAlphabet>, text: &str) -> Result<Trace, TraceError> {
        let names: Vec<&str> = text.split_whitespace().collect();
        normalize(alphabet, &alphabet.word(&names)?)
    }

    pub fn alphabet(&self) -> &Arc<DependencyAlphabet> {
        &self.alphabet
    }

    /// The canonical linearization.
    pub fn letters(&self) -> &[Letter] {
        &self.canonical
    }

    pub fn len(&self) -> usize {
        self.canonical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.canonical.is_empty()
    }

    fn check_same(&self, other: &Trace) -> Result<(), TraceError> {
        if same_alphabet(&self.alphabet, &other.alphabet) {
            Ok(())
        } else {
            Err(TraceError::AlphabetMismatch)
        }
    }

    /// `u · a`.
    pub fn push(&self, a: Letter) -> Result<Trace, TraceError> {
        self.alphabet.check_letter(a)?;
        let mut canonical = Vec::with_capacity(self.canonical.len() + 1);
        canonical.extend_from_slice(&self.canonical);
        push_normal(&self.alphabet, &mut canonical, a);
        Ok(Trace {
            alphabet: Arc::clone(&self.alphabet),
            canonical,
        })
    }

    /// `u · v`.
    pub fn concat(&self, other: &Trace) -> Result<Trace, TraceError> {
        self.check_same(other)?;
        let mut canonical = self.canonical.clone();
        for &a in &other.canonical {
            push_normal(&self.alphabet, &mut canonical, a);
        }
        Ok(Trace {
            alphabet: Arc::clone(&self.alphabet),
            canonical,
        })
    }

    fn letter_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.alphabet.letter_count()];
        for a in &self.canonical {
            counts[a.index()] += 1;
        }
        counts
    }

    /// Letters of `other` whose occurrence rank exceeds this trace's count of that
    /// letter, in `other`'s canonical order.
    fn excess_of(&self, other: &Trace) -> Vec<Letter> {
        let mut budget = self.letter_counts();
        let mut rest = Vec::new();
        for &a in &other.canonical {
            if budget[a.index()] > 0 {
                budget[a.index()] -= 1;
            } else {
                rest.push(a);
            }
        }
        rest
    }

    /// `self ⊑ other`: some trace `w` satisfies `self · w = other`.
    pub fn is_prefix_of(&self, other: &Trace) -> Result<bool, TraceError> {
        self.check_same(other)?;
        if self.len() > other.len() {
            return Ok(false);
        }
        let mine = self.letter_counts();
        let theirs = other.letter_counts();
        if mine.iter().zip(&theirs).any(|(x, y)| x > y) {
            return Ok(false);
        }
        // If a witness exists, it is the multiset difference taken in `other`'s order.
        let mut candidate = self.canonical.clone();
        for a in self.excess_of(other) {
            push_normal(&self.alphabet, &mut candidate, a);
        }
        Ok(candidate == other.canonical)
    }

    /// Letters ending some linearization.
    pub fn maxima(&self) -> BTreeSet<Letter> {
        let mut later = ProcessSet::EMPTY;
        let mut out = BTreeSet::new();
        for &a in self.canonical.iter().rev() {
            let dom = self.alphabet.domain(a);
            if !dom.intersects(later) {
                out.insert(a);
            }
            later = later.union(dom);
        }
        out
    }

    pub fn is_prime(&self) -> bool {
        self.maxima().len() == 1
    }

    /// The unique maximal letter of a prime trace.
    pub fn last(&self) -> Result<Letter, TraceError> {
        if self.is_empty() {
            return Err(TraceError::EmptyTrace);
        }
        let maxima = self.maxima();
        if maxima.len() != 1 {
            return Err(TraceError::NotPrime(self.to_string()));
        }
        Ok(*maxima.iter().next().expect("one maximum"))
    }

    /// Two prime traces are parallel when neither is a prefix of the other and
    /// both are prefixes of a common trace.
    pub fn is_parallel_to(&self, other: &Trace) -> Result<bool, TraceError> {
        self.check_same(other)?;
        if !self.is_prime() {
            return Err(TraceError::NotPrime(self.to_string()));
        }
        if !other.is_prime() {
            return Err(TraceError::NotPrime(other.to_string()));
        }
        if self.is_prefix_of(other)? || other.is_prefix_of(self)? {
            return Ok(false);
        }
        Ok(self.common_extension(other)?.is_some())
    }

    /// The least trace extending both `self` and `other`, if any trace extends both.
    pub fn common_extension(&self, other: &Trace) -> Result<Option<Trace>, TraceError> {
        self.check_same(other)?;
        let mut candidate = self.canonical.clone();
        for a in self.excess_of(other) {
            push_normal(&self.alphabet, &mut candidate, a);
        }
        let candidate = Trace {
            alphabet: Arc::clone(&self.alphabet),
            canonical: candidate,
        };
        Ok(if other.is_prefix_of(&candidate)? {
            Some(candidate)
        } else {
            None
        })
    }

    /// The causal view of process `p`: the prefix left after removing the longest
    /// suffix in which `p` does not take part.
    pub fn view(&self, p: ProcessId) -> Result<Trace, TraceError> {
        self.alphabet.check_process(p)?;
        Ok(self.view_unchecked(p))
    }

    pub(crate) fn view_unchecked(&self, p: ProcessId) -> Trace {
        let mut cone = ProcessSet::singleton(p);
        let mut keep = vec![false; self.canonical.len()];
        for (i, &a) in self.canonical.iter().enumerate().rev() {
            let dom = self.alphabet.domain(a);
            if dom.intersects(cone) {
                keep[i] = true;
                cone = cone.union(dom);
            }
        }
        // A downward-closed subsequence of a normal form is itself in normal form.
        let canonical = self
            .canonical
            .iter()
            .zip(&keep)
            .filter(|(_, k)| **k)
            .map(|(a, _)| *a)
            .collect();
        Trace {
            alphabet: Arc::clone(&self.alphabet),
            canonical,
        }
    }

    /// `|u|_p`.
    pub fn process_count(&self, p: ProcessId) -> usize {
        self.canonical
            .iter()
            .filter(|a| self.alphabet.domain(**a).contains(p))
            .count()
    }

    /// Number of occurrences of `a`.
    pub fn count(&self, a: Letter) -> usize {
        self.canonical.iter().filter(|b| **b == a).count()
    }

    pub fn domain(&self) -> ProcessSet {
        self.canonical
            .iter()
            .fold(ProcessSet::EMPTY, |acc, a| acc.union(self.alphabet.domain(*a)))
    }

    pub fn stats(&self) -> TraceStats {
        let mut process_counts = vec![0; self.alphabet.process_count()];
        for &a in &self.canonical {
            for p in self.alphabet.domain(a).iter() {
                process_counts[p.index()] += 1;
            }
        }
        TraceStats {
            length: self.len(),
            letter_counts: self.letter_counts(),
            process_counts,
            domain: self.domain(),
        }
    }
}
