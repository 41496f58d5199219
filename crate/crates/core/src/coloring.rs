//! Finite bipartite colorings `f : [n] × [m] → C`, the patterns they induce,
//! coloring constraints and a bounded, complete solver.
//!
//! Cells are stored x-major: `f(x, y)` lives at index `x * m + y`. Colors are
//! indices into the constraint's color list.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

pub type Color = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("grid dimensions must be positive, got {n}x{m}")]
    EmptyGrid { n: usize, m: usize },
    #[error("expected {expected} cells, got {got}")]
    CellCount { expected: usize, got: usize },
    #[error("cell ({x},{y}) holds color {color}, but only {colors} colors exist")]
    ColorOutOfRange { x: usize, y: usize, color: Color, colors: usize },
    #[error("unknown color `{0}`")]
    UnknownColor(String),
    #[error("duplicate color `{0}`")]
    DuplicateColor(String),
    #[error("a constraint needs at least one color")]
    NoColors,
}

/// A set of ordered color pairs, stored as a dense bit matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PairSet {
    k: usize,
    bits: Vec<u64>,
}

impl PairSet {
    pub fn new(k: usize) -> Self {
        PairSet {
            k,
            bits: vec![0; (k * k).div_ceil(64)],
        }
    }

    pub fn universe(&self) -> usize {
        self.k
    }

    pub fn insert(&mut self, c: Color, d: Color) {
        assert!(c < self.k && d < self.k, "pair ({c},{d}) outside {} colors", self.k);
        let i = c * self.k + d;
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, c: Color, d: Color) {
        if c < self.k && d < self.k {
            let i = c * self.k + d;
            self.bits[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn contains(&self, c: Color, d: Color) -> bool {
        if c >= self.k || d >= self.k {
            return false;
        }
        let i = c * self.k + d;
        self.bits[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|w| *w == 0)
    }

    /// Pairs in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (Color, Color)> + '_ {
        let k = self.k;
        (0..k * k)
            .filter(move |i| self.bits[i / 64] & (1 << (i % 64)) != 0)
            .map(move |i| (i / k, i % k))
    }

    pub fn is_subset(&self, other: &PairSet) -> bool {
        self.iter().all(|(c, d)| other.contains(c, d))
    }

    /// All pairs not in `self`.
    pub fn complement(&self) -> PairSet {
        let mut out = PairSet::new(self.k);
        for c in 0..self.k {
            for d in 0..self.k {
                if !self.contains(c, d) {
                    out.insert(c, d);
                }
            }
        }
        out
    }
}

impl fmt::Debug for PairSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A grid function `f : [n] × [m] → C`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    n: usize,
    m: usize,
    cells: Vec<Color>,
}

impl Coloring {
    /// `cells` is x-major: `cells[x * m + y] = f(x, y)`.
    pub fn new(n: usize, m: usize, cells: Vec<Color>) -> Result<Self, ColoringError> {
        if n == 0 || m == 0 {
            return Err(ColoringError::EmptyGrid { n, m });
        }
        if cells.len() != n * m {
            return Err(ColoringError::CellCount {
                expected: n * m,
                got: cells.len(),
            });
        }
        Ok(Coloring { n, m, cells })
    }

    pub fn from_fn(n: usize, m: usize, f: impl Fn(usize, usize) -> Color) -> Result<Self, ColoringError> {
        let cells = (0..n).flat_map(|x| (0..m).map(move |y| (x, y))).map(|(x, y)| f(x, y)).collect();
        Coloring::new(n, m, cells)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn cells(&self) -> &[Color] {
        &self.cells
    }

    pub fn get(&self, x: usize, y: usize) -> Color {
        assert!(x < self.n && y < self.m, "cell ({x},{y}) outside {}x{}", self.n, self.m);
        self.cells[x * self.m + y]
    }

    /// Checks every cell against a palette of `k` colors.
    pub fn check_colors(&self, k: usize) -> Result<(), ColoringError> {
        for x in 0..self.n {
            for y in 0..self.m {
                let color = self.get(x, y);
                if color >= k {
                    return Err(ColoringError::ColorOutOfRange { x, y, color, colors: k });
                }
            }
        }
        Ok(())
    }
}

/// The pairs of colors a coloring induces on its diagonal, horizontal and
/// vertical edges.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Patterns {
    /// `(f(x,y), f(x+1,y+1))`.
    pub squares: BTreeSet<(Color, Color)>,
    /// `(f(x,y), f(x+1,y))`.
    pub upper: BTreeSet<(Color, Color)>,
    /// `(f(x,y), f(x,y+1))`.
    pub lower: BTreeSet<(Color, Color)>,
}

pub fn patterns(f: &Coloring) -> Patterns {
    let mut out = Patterns::default();
    for x in 0..f.n {
        for y in 0..f.m {
            if x + 1 < f.n && y + 1 < f.m {
                out.squares.insert((f.get(x, y), f.get(x + 1, y + 1)));
            }
            if x + 1 < f.n {
                out.upper.insert((f.get(x, y), f.get(x + 1, y)));
            }
            if y + 1 < f.m {
                out.lower.insert((f.get(x, y), f.get(x, y + 1)));
            }
        }
    }
    out
}

/// Allowed initial and final colors plus forbidden squares and triangles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringConstraint {
    colors: Vec<String>,
    initial: Vec<bool>,
    final_: Vec<bool>,
    squares: PairSet,
    upper: PairSet,
    lower: PairSet,
}

impl ColoringConstraint {
    /// A constraint over `colors` allowing nothing initially or finally and
    /// forbidding no pattern.
    pub fn new(colors: Vec<String>) -> Result<Self, ColoringError> {
        if colors.is_empty() {
            return Err(ColoringError::NoColors);
        }
        let mut seen = BTreeSet::new();
        for c in &colors {
            if !seen.insert(c.as_str()) {
                return Err(ColoringError::DuplicateColor(c.clone()));
            }
        }
        let k = colors.len();
        Ok(ColoringConstraint {
            colors,
            initial: vec![false; k],
            final_: vec![false; k],
            squares: PairSet::new(k),
            upper: PairSet::new(k),
            lower: PairSet::new(k),
        })
    }

    /// Builds a constraint from color names.
    pub fn from_names(
        colors: &[&str],
        initial: &[&str],
        final_: &[&str],
        squares: &[(&str, &str)],
        upper: &[(&str, &str)],
        lower: &[(&str, &str)],
    ) -> Result<Self, ColoringError> {
        let mut k = ColoringConstraint::new(colors.iter().map(|s| s.to_string()).collect())?;
        for c in initial {
            let c = k.color_of(c)?;
            k.allow_initial(c);
        }
        for c in final_ {
            let c = k.color_of(c)?;
            k.allow_final(c);
        }
        for (set, pairs) in [(0, squares), (1, upper), (2, lower)] {
            for (c, d) in pairs {
                let (c, d) = (k.color_of(c)?, k.color_of(d)?);
                match set {
                    0 => k.squares.insert(c, d),
                    1 => k.upper.insert(c, d),
                    _ => k.lower.insert(c, d),
                }
            }
        }
        Ok(k)
    }

    pub fn color_count(&self) -> usize {
        self.colors.len()
    }

    pub fn colors(&self) -> &[String] {
        &self.colors
    }

    pub fn color_name(&self, c: Color) -> &str {
        &self.colors[c]
    }

    pub fn color_of(&self, name: &str) -> Result<Color, ColoringError> {
        self.colors
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| ColoringError::UnknownColor(name.to_string()))
    }

    pub fn allow_initial(&mut self, c: Color) {
        self.initial[c] = true;
    }

    pub fn allow_final(&mut self, c: Color) {
        self.final_[c] = true;
    }

    pub fn is_initial(&self, c: Color) -> bool {
        self.initial.get(c).copied().unwrap_or(false)
    }

    pub fn is_final(&self, c: Color) -> bool {
        self.final_.get(c).copied().unwrap_or(false)
    }

    pub fn initial(&self) -> impl Iterator<Item = Color> + '_ {
        (0..self.colors.len()).filter(|&c| self.initial[c])
    }

    pub fn final_colors(&self) -> impl Iterator<Item = Color> + '_ {
        (0..self.colors.len()).filter(|&c| self.final_[c])
    }

    pub fn squares(&self) -> &PairSet {
        &self.squares
    }

    pub fn upper(&self) -> &PairSet {
        &self.upper
    }

    pub fn lower(&self) -> &PairSet {
        &self.lower
    }

    pub fn squares_mut(&mut self) -> &mut PairSet {
        &mut self.squares
    }

    pub fn upper_mut(&mut self) -> &mut PairSet {
        &mut self.upper
    }

    pub fn lower_mut(&mut self) -> &mut PairSet {
        &mut self.lower
    }

    /// Renders a pattern pair with color names.
    pub fn render_pair(&self, (c, d): (Color, Color)) -> String {
        format!("({},{})", self.colors[c], self.colors[d])
    }
}

/// The first clause a coloring breaks, with the offending cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Initial { color: Color },
    Final { color: Color },
    Square { from: (usize, usize), to: (usize, usize), pair: (Color, Color) },
    Upper { from: (usize, usize), to: (usize, usize), pair: (Color, Color) },
    Lower { from: (usize, usize), to: (usize, usize), pair: (Color, Color) },
}

impl Violation {
    pub fn clause(&self) -> &'static str {
        match self {
            Violation::Initial { .. } => "initial",
            Violation::Final { .. } => "final",
            Violation::Square { .. } => "square",
            Violation::Upper { .. } => "upper-triangle",
            Violation::Lower { .. } => "lower-triangle",
        }
    }

    pub fn describe(&self, k: &ColoringConstraint) -> String {
        match self {
            Violation::Initial { color } => format!("f(0,0) = {} is not an allowed initial color", k.color_name(*color)),
            Violation::Final { color } => format!("last cell color {} is not an allowed final color", k.color_name(*color)),
            Violation::Square { from, to, pair }
            | Violation::Upper { from, to, pair }
            | Violation::Lower { from, to, pair } => format!(
                "forbidden {} {} at f{:?}, f{:?}",
                self.clause(),
                k.render_pair(*pair),
                from,
                to
            ),
        }
    }
}

/// `Ok(None)` when `f` satisfies `k`, otherwise the first violation: initial,
/// final, then squares, upper and lower triangles, each scanned x-major.
pub fn check(f: &Coloring, k: &ColoringConstraint) -> Result<Option<Violation>, ColoringError> {
    f.check_colors(k.color_count())?;
    let first = f.get(0, 0);
    if !k.is_initial(first) {
        return Ok(Some(Violation::Initial { color: first }));
    }
    let last = f.get(f.n - 1, f.m - 1);
    if !k.is_final(last) {
        return Ok(Some(Violation::Final { color: last }));
    }
    let cells = || (0..f.n).flat_map(|x| (0..f.m).map(move |y| (x, y)));
    for (x, y) in cells() {
        if x + 1 < f.n && y + 1 < f.m {
            let pair = (f.get(x, y), f.get(x + 1, y + 1));
            if k.squares.contains(pair.0, pair.1) {
                return Ok(Some(Violation::Square { from: (x, y), to: (x + 1, y + 1), pair }));
            }
        }
    }
    for (x, y) in cells() {
        if x + 1 < f.n {
            let pair = (f.get(x, y), f.get(x + 1, y));
            if k.upper.contains(pair.0, pair.1) {
                return Ok(Some(Violation::Upper { from: (x, y), to: (x + 1, y), pair }));
            }
        }
    }
    for (x, y) in cells() {
        if y + 1 < f.m {
            let pair = (f.get(x, y), f.get(x, y + 1));
            if k.lower.contains(pair.0, pair.1) {
                return Ok(Some(Violation::Lower { from: (x, y), to: (x, y + 1), pair }));
            }
        }
    }
    Ok(None)
}

pub fn satisfies(f: &Coloring, k: &ColoringConstraint) -> Result<bool, ColoringError> {
    Ok(check(f, k)?.is_none())
}

/// Bitset over colors.
#[derive(Clone, PartialEq, Eq)]
struct Domain(Vec<u64>);

impl Domain {
    fn empty(k: usize) -> Self {
        Domain(vec![0; k.div_ceil(64)])
    }

    fn full(k: usize) -> Self {
        let mut d = Domain::empty(k);
        for c in 0..k {
            d.insert(c);
        }
        d
    }

    fn insert(&mut self, c: Color) {
        self.0[c / 64] |= 1 << (c % 64);
    }

    fn remove(&mut self, c: Color) {
        self.0[c / 64] &= !(1 << (c % 64));
    }

    fn contains(&self, c: Color) -> bool {
        self.0[c / 64] & (1 << (c % 64)) != 0
    }

    fn intersects(&self, other: &Domain) -> bool {
        self.0.iter().zip(&other.0).any(|(a, b)| a & b != 0)
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }

    fn iter(&self) -> impl Iterator<Item = Color> + '_ {
        self.0.iter().enumerate().flat_map(|(i, w)| {
            let w = *w;
            (0..64).filter(move |b| w & (1u64 << b) != 0).map(move |b| i * 64 + b)
        })
    }
}

/// For each relation kind and color, the colors allowed on the other end of
/// an edge, in both directions.
struct Supports {
    /// `forward[r][c]`: colors `d` with `(c, d)` allowed by relation `r`.
    forward: [Vec<Domain>; 3],
    /// `backward[r][d]`: colors `c` with `(c, d)` allowed by relation `r`.
    backward: [Vec<Domain>; 3],
}

const SQUARE: usize = 0;
const UPPER: usize = 1;
const LOWER: usize = 2;

impl Supports {
    fn new(k: &ColoringConstraint) -> Self {
        let n = k.color_count();
        let build = |set: &PairSet| {
            let mut fwd = vec![Domain::full(n); n];
            let mut bwd = vec![Domain::full(n); n];
            for (c, d) in set.iter() {
                fwd[c].remove(d);
                bwd[d].remove(c);
            }
            (fwd, bwd)
        };
        let (sf, sb) = build(&k.squares);
        let (uf, ub) = build(&k.upper);
        let (lf, lb) = build(&k.lower);
        Supports {
            forward: [sf, uf, lf],
            backward: [sb, ub, lb],
        }
    }
}

/// An edge of the constraint graph: `(cell, other, relation, forward)`. When
/// `forward` is true, `cell` is the first component of the pair.
type Arc = (usize, usize, usize, bool);

struct Grid<'a> {
    n: usize,
    m: usize,
    supports: &'a Supports,
    /// Arcs leaving each cell, used to revise that cell against its neighbours.
    arcs: Vec<Vec<Arc>>,
}

impl<'a> Grid<'a> {
    fn new(n: usize, m: usize, supports: &'a Supports) -> Self {
        let idx = |x: usize, y: usize| x * m + y;
        let mut arcs = vec![Vec::new(); n * m];
        for x in 0..n {
            for y in 0..m {
                let here = idx(x, y);
                let mut link = |there: usize, rel: usize| {
                    arcs[here].push((here, there, rel, true));
                    arcs[there].push((there, here, rel, false));
                };
                if x + 1 < n && y + 1 < m {
                    link(idx(x + 1, y + 1), SQUARE);
                }
                if x + 1 < n {
                    link(idx(x + 1, y), UPPER);
                }
                if y + 1 < m {
                    link(idx(x, y + 1), LOWER);
                }
            }
        }
        Grid { n, m, supports, arcs }
    }

    /// Removes values of `arc.0` without support in `arc.1`; true if anything changed.
    fn revise(&self, doms: &mut [Domain], (cell, other, rel, forward): Arc) -> bool {
        let table = if forward { &self.supports.forward[rel] } else { &self.supports.backward[rel] };
        let mut changed = false;
        let values: Vec<Color> = doms[cell].iter().collect();
        for c in values {
            if !table[c].intersects(&doms[other]) {
                doms[cell].remove(c);
                changed = true;
            }
        }
        changed
    }

    /// Arc consistency starting from the arcs into `touched`; false on a wipe-out.
    fn propagate(&self, doms: &mut [Domain], touched: &[usize]) -> bool {
        let mut queue: Vec<Arc> = Vec::new();
        for &t in touched {
            // Neighbours of `t` need revising against `t`.
            for &(_, other, rel, forward) in &self.arcs[t] {
                queue.push((other, t, rel, !forward));
            }
        }
        while let Some(arc) = queue.pop() {
            if self.revise(doms, arc) {
                let cell = arc.0;
                if doms[cell].is_empty() {
                    return false;
                }
                for &(_, other, rel, forward) in &self.arcs[cell] {
                    if other != arc.1 {
                        queue.push((other, cell, rel, !forward));
                    }
                }
            }
        }
        true
    }

    fn search(&self, doms: &mut Vec<Domain>, cell: usize) -> Option<Vec<Color>> {
        if cell == self.n * self.m {
            return Some(doms.iter().map(|d| d.iter().next().expect("nonempty domain")).collect());
        }
        let values: Vec<Color> = doms[cell].iter().collect();
        for c in values {
            let mut next = doms.clone();
            next[cell] = Domain::empty(self.supports.forward[0].len());
            next[cell].insert(c);
            if self.propagate(&mut next, &[cell]) {
                if let Some(sol) = self.search(&mut next, cell + 1) {
                    return Some(sol);
                }
            }
        }
        None
    }
}

/// The first satisfying coloring of size exactly `n × m`, assigning cells
/// x-major with colors in ascending order.
///
/// Search maintains arc consistency on the square and triangle relations.
/// Pruning only discards values that extend to no solution, so the result is
/// the same coloring plain backtracking would find first.
pub fn solve_at(k: &ColoringConstraint, n: usize, m: usize) -> Option<Coloring> {
    if n == 0 || m == 0 {
        return None;
    }
    let supports = Supports::new(k);
    solve_with(k, &supports, n, m)
}

fn solve_with(k: &ColoringConstraint, supports: &Supports, n: usize, m: usize) -> Option<Coloring> {
    let kc = k.color_count();
    let grid = Grid::new(n, m, supports);
    let mut doms = vec![Domain::full(kc); n * m];
    let mut first = Domain::empty(kc);
    for c in k.initial() {
        first.insert(c);
    }
    let mut last = Domain::empty(kc);
    for c in k.final_colors() {
        last.insert(c);
    }
    let last_idx = n * m - 1;
    doms[0] = first;
    if last_idx == 0 {
        let both: Vec<Color> = doms[0].iter().filter(|&c| last.contains(c)).collect();
        doms[0] = Domain::empty(kc);
        for c in both {
            doms[0].insert(c);
        }
    } else {
        doms[last_idx] = last;
    }
    if doms[0].is_empty() || doms[last_idx].is_empty() {
        return None;
    }
    if !grid.propagate(&mut doms, &[0, last_idx]) {
        return None;
    }
    let cells = grid.search(&mut doms, 0)?;
    Coloring::new(n, m, cells).ok()
}

/// Grid sizes in search order: increasing `n + m`, then increasing `n`.
pub fn search_order(n_max: usize, m_max: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for total in 2..=n_max + m_max {
        for n in 1..=n_max.min(total - 1) {
            let m = total - n;
            if (1..=m_max).contains(&m) {
                out.push((n, m));
            }
        }
    }
    out
}

/// The first satisfying coloring with `n ≤ n_max` and `m ≤ m_max`, sizes taken
/// in [`search_order`]. Sizes are tried in parallel; the earliest one wins.
pub fn solve(k: &ColoringConstraint, n_max: usize, m_max: usize) -> Option<Coloring> {
    let supports = Supports::new(k);
    search_order(n_max, m_max)
        .into_par_iter()
        .find_map_first(|(n, m)| solve_with(k, &supports, n, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn figure_three() -> (ColoringConstraint, Coloring) {
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

    /// Forces `f(x,y)` to be `0`, `+` or `-` as `x = y`, `x > y` or `x < y`.
    /// Runs of `-` along x and of `+` along y must be allowed for the sign
    /// grid to exist beyond 2x2.
    pub(crate) fn sign_constraint() -> ColoringConstraint {
        let all: Vec<(&str, &str)> = ["0", "-", "+"]
            .iter()
            .flat_map(|a| ["0", "-", "+"].iter().map(move |b| (*a, *b)))
            .collect();
        let minus = |keep: &[(&str, &str)]| all.iter().copied().filter(|p| !keep.contains(p)).collect::<Vec<_>>();
        ColoringConstraint::from_names(
            &["0", "-", "+"],
            &["0"],
            &["0", "-", "+"],
            &minus(&[("0", "0"), ("-", "-"), ("+", "+")]),
            &minus(&[("0", "+"), ("+", "+"), ("-", "0"), ("-", "-")]),
            &minus(&[("0", "-"), ("-", "-"), ("+", "0"), ("+", "+")]),
        )
        .unwrap()
    }

    fn sign(n: usize, m: usize) -> Coloring {
        Coloring::from_fn(n, m, |x, y| match x.cmp(&y) {
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Less => 1,
            std::cmp::Ordering::Greater => 2,
        })
        .unwrap()
    }

    #[test]
    fn single_cell_has_no_patterns() {
        let f = Coloring::new(1, 1, vec![0]).unwrap();
        assert_eq!(patterns(&f), Patterns::default());
    }

    #[test]
    fn figure_three_patterns() {
        let (_, f) = figure_three();
        let p = patterns(&f);
        assert_eq!(p.squares, [(0, 1), (1, 1), (1, 2)].into_iter().collect());
        assert!(p.upper.contains(&(0, 1)));
        assert!(p.lower.contains(&(0, 1)));
    }

    #[test]
    fn figure_three_satisfies() {
        let (mut k, f) = figure_three();
        assert!(satisfies(&f, &k).unwrap());
        k.initial = vec![false, false, true];
        assert_eq!(check(&f, &k).unwrap(), Some(Violation::Initial { color: 0 }));
    }

    #[test]
    fn sign_coloring_satisfies() {
        assert!(satisfies(&sign(3, 3), &sign_constraint()).unwrap());
    }

    #[test]
    fn color_out_of_range_is_an_error() {
        let (k, _) = figure_three();
        let f = Coloring::new(1, 1, vec![7]).unwrap();
        assert!(matches!(check(&f, &k), Err(ColoringError::ColorOutOfRange { .. })));
    }

    #[test]
    fn bad_grids_are_rejected() {
        assert!(Coloring::new(0, 1, vec![]).is_err());
        assert!(Coloring::new(2, 2, vec![0; 3]).is_err());
        assert!(ColoringConstraint::new(vec!["a".into(), "a".into()]).is_err());
    }

    #[test]
    fn first_column_constraint() {
        let k = ColoringConstraint::from_names(
            &["0", "+"],
            &["0"],
            &["0", "+"],
            &[],
            &[("+", "0"), ("0", "0")],
            &[("0", "+")],
        )
        .unwrap();
        let f = solve(&k, 3, 3).unwrap();
        for x in 0..f.n() {
            for y in 0..f.m() {
                assert_eq!(f.get(x, y) == 0, x == 0);
            }
        }
    }

    #[test]
    fn sign_with_final_zero_needs_square_grid() {
        let mut k = sign_constraint();
        k.final_ = vec![true, false, false];
        for (n, m) in search_order(3, 3) {
            assert_eq!(solve_at(&k, n, m).is_some(), n == m, "{n}x{m}");
        }
        let f = solve(&k, 2, 3).unwrap();
        assert_eq!((f.n(), f.m()), (1, 1));
    }

    #[test]
    fn no_initial_color_means_no_solution() {
        let k = ColoringConstraint::from_names(&["c"], &[], &["c"], &[], &[], &[]).unwrap();
        assert!(solve(&k, 4, 4).is_none());
    }

    #[test]
    fn search_order_is_by_perimeter_then_rows() {
        assert_eq!(search_order(2, 2), vec![(1, 1), (1, 2), (2, 1), (2, 2)]);
    }
}
