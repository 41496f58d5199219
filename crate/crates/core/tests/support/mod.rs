//! Brute-force oracles and fixtures shared by the integration tests. None of
//! these reuse the library's algorithms: traces are compared through explicit
//! commutation closures, colorings by exhaustive grid enumeration.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use causal_games::coloring::{Coloring, ColoringConstraint};
use causal_games::traces::{DependencyAlphabet, Letter, ProcessId, ProcessSet};
use rand::rngs::StdRng;
use rand::Rng;

/// At most `max_procs` processes and `max_letters` letters, each with a
/// random nonempty domain.
pub fn random_alphabet(rng: &mut StdRng, max_procs: usize, max_letters: usize) -> Arc<DependencyAlphabet> {
    let procs = rng.gen_range(1..=max_procs);
    let letters = rng.gen_range(1..=max_letters);
    let names: Vec<String> = (0..procs).map(|i| format!("p{i}")).collect();
    let letters: Vec<(String, Vec<ProcessId>)> = (0..letters)
        .map(|i| {
            let mask = rng.gen_range(1..(1u32 << procs));
            let dom = (0..procs).filter(|p| mask & (1 << p) != 0).map(|p| ProcessId(p as u8)).collect();
            (format!("{}", (b'a' + i as u8) as char), dom)
        })
        .collect();
    Arc::new(DependencyAlphabet::new(names, letters).unwrap())
}

pub fn random_word(rng: &mut StdRng, al: &DependencyAlphabet, max_len: usize) -> Vec<Letter> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| Letter(rng.gen_range(0..al.letter_count()) as u16)).collect()
}

fn independent(al: &DependencyAlphabet, a: Letter, b: Letter) -> bool {
    let (da, db) = (al.domain(a), al.domain(b));
    da.0 & db.0 == 0
}

/// Every word reachable by swapping adjacent independent letters.
pub fn closure(al: &DependencyAlphabet, word: &[Letter]) -> BTreeSet<Vec<Letter>> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(word.to_vec());
    queue.push_back(word.to_vec());
    while let Some(w) = queue.pop_front() {
        for i in 0..w.len().saturating_sub(1) {
            if independent(al, w[i], w[i + 1]) {
                let mut next = w.clone();
                next.swap(i, i + 1);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    seen
}

pub fn lex_least(al: &DependencyAlphabet, word: &[Letter]) -> Vec<Letter> {
    closure(al, word).into_iter().next().unwrap()
}

pub fn equivalent(al: &DependencyAlphabet, u: &[Letter], v: &[Letter]) -> bool {
    closure(al, u).contains(v)
}

/// Some linearization of `v` starts with a linearization of `u`.
pub fn is_prefix(al: &DependencyAlphabet, u: &[Letter], v: &[Letter]) -> bool {
    if u.len() > v.len() {
        return false;
    }
    let cu = closure(al, u);
    closure(al, v).iter().any(|w| cu.contains(&w[..u.len()]))
}

fn involves(al: &DependencyAlphabet, a: Letter, p: ProcessId) -> bool {
    al.domain(a).contains(p)
}

/// The shortest prefix over all linearizations holding every action of `p`,
/// as its lexicographically least linearization.
pub fn view(al: &DependencyAlphabet, u: &[Letter], p: ProcessId) -> Vec<Letter> {
    let total = u.iter().filter(|&&a| involves(al, a, p)).count();
    let mut best: Option<Vec<Letter>> = None;
    for w in closure(al, u) {
        let mut seen = 0;
        let mut k = 0;
        while seen < total {
            if involves(al, w[k], p) {
                seen += 1;
            }
            k += 1;
        }
        if best.as_ref().is_none_or(|b| k < b.len()) {
            best = Some(w[..k].to_vec());
        }
    }
    lex_least(al, &best.unwrap())
}

/// Letters that end some linearization.
pub fn maxima(al: &DependencyAlphabet, u: &[Letter]) -> BTreeSet<Letter> {
    closure(al, u).iter().filter_map(|w| w.last().copied()).collect()
}

pub fn is_prime(al: &DependencyAlphabet, u: &[Letter]) -> bool {
    maxima(al, u).len() == 1
}

/// Whether some rearrangement `u·z` of the letters missing from `u` extends `v`.
pub fn has_common_extension(al: &DependencyAlphabet, u: &[Letter], v: &[Letter]) -> bool {
    let mut missing = v.to_vec();
    for a in u {
        if let Some(i) = missing.iter().position(|b| b == a) {
            missing.remove(i);
        }
    }
    permutations(&missing).into_iter().any(|z| {
        let mut w = u.to_vec();
        w.extend(z);
        is_prefix(al, v, &w)
    })
}

fn permutations(items: &[Letter]) -> BTreeSet<Vec<Letter>> {
    if items.is_empty() {
        return [Vec::new()].into_iter().collect();
    }
    let mut out = BTreeSet::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.insert(p);
        }
    }
    out
}

pub fn parallel(al: &DependencyAlphabet, u: &[Letter], v: &[Letter]) -> bool {
    !is_prefix(al, u, v) && !is_prefix(al, v, u) && has_common_extension(al, u, v)
}

pub fn all_processes(al: &DependencyAlphabet) -> Vec<ProcessId> {
    (0..al.process_count()).map(|p| ProcessId(p as u8)).collect()
}

pub fn domain_of(al: &DependencyAlphabet, a: Letter) -> ProcessSet {
    al.domain(a)
}

/// Every satisfying coloring of size `n × m`, by exhaustive enumeration that
/// abandons a partial grid as soon as two placed cells form a forbidden pair.
pub fn all_satisfying(k: &ColoringConstraint, n: usize, m: usize) -> Vec<Coloring> {
    let mut out = Vec::new();
    let mut cells = vec![0; n * m];
    fill(k, n, m, 0, &mut cells, &mut out);
    out
}

fn fill(k: &ColoringConstraint, n: usize, m: usize, i: usize, cells: &mut Vec<usize>, out: &mut Vec<Coloring>) {
    if i == n * m {
        out.push(Coloring::new(n, m, cells.clone()).unwrap());
        return;
    }
    let (x, y) = (i / m, i % m);
    for c in 0..k.color_count() {
        if i == 0 && !k.is_initial(c) {
            continue;
        }
        if i == n * m - 1 && !k.is_final(c) {
            continue;
        }
        if x > 0 && k.upper().contains(cells[(x - 1) * m + y], c) {
            continue;
        }
        if y > 0 && k.lower().contains(cells[x * m + y - 1], c) {
            continue;
        }
        if x > 0 && y > 0 && k.squares().contains(cells[(x - 1) * m + y - 1], c) {
            continue;
        }
        cells[i] = c;
        fill(k, n, m, i + 1, cells, out);
    }
}

/// Colors `0` exactly on the first column.
pub fn first_column_constraint() -> ColoringConstraint {
    ColoringConstraint::from_names(&["0", "+"], &["0"], &["0", "+"], &[], &[("+", "0"), ("0", "0")], &[("0", "+")])
        .unwrap()
}

/// Forces `f(x,y)` to `0`, `+` or `-` as `x = y`, `x > y` or `x < y`.
pub fn sign_constraint(final_zero_only: bool) -> ColoringConstraint {
    let colors = ["0", "-", "+"];
    let all: Vec<(&str, &str)> = colors.iter().flat_map(|a| colors.iter().map(move |b| (*a, *b))).collect();
    let minus = |keep: &[(&str, &str)]| all.iter().copied().filter(|p| !keep.contains(p)).collect::<Vec<_>>();
    let finals: &[&str] = if final_zero_only { &["0"] } else { &colors };
    ColoringConstraint::from_names(
        &colors,
        &["0"],
        finals,
        &minus(&[("0", "0"), ("-", "-"), ("+", "+")]),
        &minus(&[("0", "+"), ("+", "+"), ("-", "0"), ("-", "-")]),
        &minus(&[("0", "-"), ("-", "-"), ("+", "0"), ("+", "+")]),
    )
    .unwrap()
}

pub fn sign_coloring(n: usize, m: usize) -> Coloring {
    Coloring::from_fn(n, m, |x, y| match x.cmp(&y) {
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Less => 1,
        std::cmp::Ordering::Greater => 2,
    })
    .unwrap()
}

/// Four by two grid: `G` at the origin, `B` in the far corner, `R` elsewhere.
pub fn figure_three() -> (ColoringConstraint, Coloring) {
    let bad = [("B", "G"), ("G", "B")];
    let k = ColoringConstraint::from_names(&["G", "R", "B"], &["G", "R"], &["B"], &bad, &bad, &bad).unwrap();
    let f = Coloring::from_fn(4, 2, |x, y| match (x, y) {
        (0, 0) => 0,
        (3, 1) => 2,
        _ => 1,
    })
    .unwrap();
    (k, f)
}

/// Satisfiable constraints over at most two colors with a witness of size at
/// most 2x2.
pub fn small_corpus() -> Vec<(&'static str, ColoringConstraint, Coloring)> {
    let one = || ColoringConstraint::from_names(&["c"], &["c"], &["c"], &[], &[], &[]).unwrap();
    vec![
        ("one color 1x1", one(), Coloring::new(1, 1, vec![0]).unwrap()),
        ("one color 2x2", one(), Coloring::new(2, 2, vec![0; 4]).unwrap()),
        (
            "corner change 2x2",
            ColoringConstraint::from_names(&["c0", "c1"], &["c0"], &["c1"], &[("c1", "c0")], &[], &[]).unwrap(),
            Coloring::new(2, 2, vec![0, 1, 1, 1]).unwrap(),
        ),
        ("first column 2x2", first_column_constraint(), Coloring::new(2, 2, vec![0, 0, 1, 1]).unwrap()),
        (
            "lower step 1x2",
            ColoringConstraint::from_names(&["c0", "c1"], &["c0"], &["c1"], &[], &[], &[("c0", "c0")]).unwrap(),
            Coloring::new(1, 2, vec![0, 1]).unwrap(),
        ),
        (
            "upper step 2x1",
            ColoringConstraint::from_names(&["c0", "c1"], &["c0"], &["c1"], &[], &[("c1", "c0")], &[]).unwrap(),
            Coloring::new(2, 1, vec![0, 1]).unwrap(),
        ),
    ]
}
