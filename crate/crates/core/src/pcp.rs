//! Tile correspondence instances, a bounded brute-force solver, the local
//! characterization of a solution by `SameLength`/`SameTile` position sets,
//! and the reduction to a coloring constraint.
//!
//! Tile indices are 0-based in this module. Documents and the CLI present
//! them 1-based.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::coloring::{Coloring, ColoringConstraint, ColoringError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PcpError {
    #[error("an instance needs at least one tile")]
    NoTiles,
    #[error("tile {tile} has an empty {side} word")]
    EmptyWord { tile: usize, side: &'static str },
    #[error("symbol `{symbol}` in tile {tile} is not in the alphabet")]
    UnknownSymbol { tile: usize, symbol: char },
    #[error("duplicate alphabet symbol `{0}`")]
    DuplicateSymbol(char),
    #[error("tile sequence is empty")]
    EmptySequence,
    #[error("tile index {index} out of range (instance has {tiles} tiles)")]
    BadIndex { index: usize, tiles: usize },
    #[error("position pair ({0},{1}) is outside the grid")]
    OutOfRange(usize, usize),
    #[error("oracle bound exceeded: {cells} cells, at most {bound} supported")]
    OracleBound { cells: usize, bound: usize },
    #[error("diagonal needs words of equal length, got {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error("top state differs within column x={x} (at y={y})")]
    ColumnInconsistent { x: usize, y: usize },
    #[error("bottom state differs within row y={y} (at x={x})")]
    RowInconsistent { x: usize, y: usize },
    #[error("the {side} states do not spell a tile factorization at position {position}")]
    NotAFactorization { side: &'static str, position: usize },
}

/// A finite list of tiles `(u_i, v_i)` of nonempty words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcpInstance {
    alphabet: Vec<char>,
    tiles: Vec<(Vec<char>, Vec<char>)>,
}

impl PcpInstance {
    pub fn new(alphabet: Vec<char>, tiles: Vec<(Vec<char>, Vec<char>)>) -> Result<Self, PcpError> {
        let mut seen = BTreeSet::new();
        for &a in &alphabet {
            if !seen.insert(a) {
                return Err(PcpError::DuplicateSymbol(a));
            }
        }
        if tiles.is_empty() {
            return Err(PcpError::NoTiles);
        }
        for (tile, (u, v)) in tiles.iter().enumerate() {
            for (side, w) in [("top", u), ("bottom", v)] {
                if w.is_empty() {
                    return Err(PcpError::EmptyWord { tile, side });
                }
                if let Some(&symbol) = w.iter().find(|s| !seen.contains(s)) {
                    return Err(PcpError::UnknownSymbol { tile, symbol });
                }
            }
        }
        Ok(PcpInstance { alphabet, tiles })
    }

    /// Tiles from strings, with the alphabet taken as their symbols in order
    /// of first appearance.
    pub fn from_strs(tiles: &[(&str, &str)]) -> Result<Self, PcpError> {
        let mut alphabet = Vec::new();
        for (u, v) in tiles {
            for c in u.chars().chain(v.chars()) {
                if !alphabet.contains(&c) {
                    alphabet.push(c);
                }
            }
        }
        let tiles = tiles.iter().map(|(u, v)| (u.chars().collect(), v.chars().collect())).collect();
        PcpInstance::new(alphabet, tiles)
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn tiles(&self) -> &[(Vec<char>, Vec<char>)] {
        &self.tiles
    }

    pub fn tile_count(&self) -> usize {
        self.tiles.len()
    }

    pub fn top(&self, i: usize) -> &[char] {
        &self.tiles[i].0
    }

    pub fn bottom(&self, i: usize) -> &[char] {
        &self.tiles[i].1
    }

    pub fn max_top_len(&self) -> usize {
        self.tiles.iter().map(|(u, _)| u.len()).max().unwrap_or(0)
    }

    fn check_seq(&self, seq: &[usize]) -> Result<(), PcpError> {
        if seq.is_empty() {
            return Err(PcpError::EmptySequence);
        }
        match seq.iter().find(|&&i| i >= self.tiles.len()) {
            Some(&index) => Err(PcpError::BadIndex {
                index,
                tiles: self.tiles.len(),
            }),
            None => Ok(()),
        }
    }

    /// Concatenated top words.
    pub fn top_word(&self, seq: &[usize]) -> Result<Vec<char>, PcpError> {
        self.check_seq(seq)?;
        Ok(seq.iter().flat_map(|&i| self.top(i).iter().copied()).collect())
    }

    /// Concatenated bottom words.
    pub fn bottom_word(&self, seq: &[usize]) -> Result<Vec<char>, PcpError> {
        self.check_seq(seq)?;
        Ok(seq.iter().flat_map(|&i| self.bottom(i).iter().copied()).collect())
    }
}

pub fn check_solution(inst: &PcpInstance, seq: &[usize]) -> Result<bool, PcpError> {
    Ok(inst.top_word(seq)? == inst.bottom_word(seq)?)
}

/// The shortest solution of length at most `max_len`, lexicographically first
/// among those of that length.
pub fn brute_force(inst: &PcpInstance, max_len: usize) -> Option<Vec<usize>> {
    // Each frontier entry keeps the unmatched overhang: which side is ahead and by what.
    let mut frontier: Vec<(Vec<usize>, bool, Vec<char>)> = vec![(Vec::new(), true, Vec::new())];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (seq, top_ahead, rest) in &frontier {
            for i in 0..inst.tile_count() {
                let (mut ahead, mut behind) = (rest.clone(), Vec::new());
                if *top_ahead {
                    ahead.extend_from_slice(inst.top(i));
                    behind.extend_from_slice(inst.bottom(i));
                } else {
                    ahead.extend_from_slice(inst.bottom(i));
                    behind.extend_from_slice(inst.top(i));
                }
                let common = ahead.len().min(behind.len());
                if ahead[..common] != behind[..common] {
                    continue;
                }
                let mut seq = seq.clone();
                seq.push(i);
                if ahead.len() == behind.len() {
                    return Some(seq);
                }
                if ahead.len() > behind.len() {
                    next.push((seq, *top_ahead, ahead[common..].to_vec()));
                } else {
                    next.push((seq, !*top_ahead, behind[common..].to_vec()));
                }
            }
        }
        frontier = next;
    }
    None
}

pub type PositionSet = BTreeSet<(usize, usize)>;

fn check_range(set: &PositionSet, nu: usize, nv: usize) -> Result<(), PcpError> {
    match set.iter().find(|&&(a, b)| a >= nu || b >= nv) {
        Some(&(a, b)) => Err(PcpError::OutOfRange(a, b)),
        None => Ok(()),
    }
}

/// Whether `set` is a `SameLength` witness for `u = v`: it holds the last
/// pair, is closed under diagonal predecessors, meets the axes only at the
/// origin, and relates equal letters.
pub fn verify_same_length(set: &PositionSet, u: &[char], v: &[char]) -> Result<bool, PcpError> {
    check_range(set, u.len(), v.len())?;
    if u.is_empty() || v.is_empty() {
        return Ok(false);
    }
    if !set.contains(&(u.len() - 1, v.len() - 1)) || !set.contains(&(0, 0)) {
        return Ok(false);
    }
    for &(a, b) in set {
        if a > 0 && b > 0 && !set.contains(&(a - 1, b - 1)) {
            return Ok(false);
        }
        if (a == 0) != (b == 0) {
            return Ok(false);
        }
        if u[a] != v[b] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest grid the subset-enumeration oracles accept.
pub const ORACLE_CELLS: usize = 16;

fn subsets(nu: usize, nv: usize) -> Result<impl Iterator<Item = PositionSet>, PcpError> {
    let cells = nu * nv;
    if cells > ORACLE_CELLS {
        return Err(PcpError::OracleBound {
            cells,
            bound: ORACLE_CELLS,
        });
    }
    Ok((0u32..1 << cells).map(move |mask| {
        (0..cells)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| (i / nv, i % nv))
            .collect()
    }))
}

/// Searches every subset of `[|u|] × [|v|]` for a `SameLength` witness.
pub fn exists_same_length(u: &[char], v: &[char]) -> Result<bool, PcpError> {
    for set in subsets(u.len(), v.len())? {
        if verify_same_length(&set, u, v)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Which tile of the factorization covers each position.
fn tile_of_positions(words: impl Iterator<Item = usize>) -> Vec<usize> {
    words.enumerate().flat_map(|(t, len)| std::iter::repeat(t).take(len)).collect()
}

struct Factorizations {
    top_len: usize,
    bottom_len: usize,
    /// Index within the top sequence of the tile covering each top position.
    top_slot: Vec<usize>,
    bottom_slot: Vec<usize>,
    top_starts: Vec<bool>,
    bottom_starts: Vec<bool>,
}

impl Factorizations {
    fn new(inst: &PcpInstance, top_seq: &[usize], bottom_seq: &[usize]) -> Result<Self, PcpError> {
        inst.check_seq(top_seq)?;
        inst.check_seq(bottom_seq)?;
        let top_slot = tile_of_positions(top_seq.iter().map(|&i| inst.top(i).len()));
        let bottom_slot = tile_of_positions(bottom_seq.iter().map(|&i| inst.bottom(i).len()));
        let starts = |slot: &[usize]| (0..slot.len()).map(|x| x == 0 || slot[x] != slot[x - 1]).collect();
        Ok(Factorizations {
            top_len: top_slot.len(),
            bottom_len: bottom_slot.len(),
            top_starts: starts(&top_slot),
            bottom_starts: starts(&bottom_slot),
            top_slot,
            bottom_slot,
        })
    }
}

/// Whether `set` is a `SameTile` witness for the two tile sequences being equal.
pub fn verify_same_tile(
    set: &PositionSet,
    inst: &PcpInstance,
    top_seq: &[usize],
    bottom_seq: &[usize],
) -> Result<bool, PcpError> {
    let fz = Factorizations::new(inst, top_seq, bottom_seq)?;
    check_range(set, fz.top_len, fz.bottom_len)?;
    if !set.contains(&(fz.top_len - 1, fz.bottom_len - 1)) || !set.contains(&(0, 0)) {
        return Ok(false);
    }
    for &(a, b) in set {
        if a > 0 && b > 0 {
            let (su, sv) = (fz.top_starts[a], fz.bottom_starts[b]);
            if su && sv && !set.contains(&(a - 1, b - 1)) {
                return Ok(false);
            }
            if !su && !set.contains(&(a - 1, b)) {
                return Ok(false);
            }
            if !sv && !set.contains(&(a, b - 1)) {
                return Ok(false);
            }
        }
        if (fz.top_slot[a] == 0) != (fz.bottom_slot[b] == 0) {
            return Ok(false);
        }
        if top_seq[fz.top_slot[a]] != bottom_seq[fz.bottom_slot[b]] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Searches every subset of the position grid for a `SameTile` witness.
pub fn exists_same_tile(inst: &PcpInstance, top_seq: &[usize], bottom_seq: &[usize]) -> Result<bool, PcpError> {
    let fz = Factorizations::new(inst, top_seq, bottom_seq)?;
    for set in subsets(fz.top_len, fz.bottom_len)? {
        if verify_same_tile(&set, inst, top_seq, bottom_seq)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The diagonal `{(x, x)}` for words of equal length.
pub fn canonical_same_length(u: &[char], v: &[char]) -> Result<PositionSet, PcpError> {
    if u.len() != v.len() {
        return Err(PcpError::LengthMismatch(u.len(), v.len()));
    }
    Ok((0..u.len()).map(|x| (x, x)).collect())
}

/// Position pairs with the same number of tiles after them on both sides.
pub fn canonical_same_tile(
    inst: &PcpInstance,
    top_seq: &[usize],
    bottom_seq: &[usize],
) -> Result<PositionSet, PcpError> {
    let fz = Factorizations::new(inst, top_seq, bottom_seq)?;
    let (k, l) = (top_seq.len() - 1, bottom_seq.len() - 1);
    let mut out = PositionSet::new();
    for a in 0..fz.top_len {
        for b in 0..fz.bottom_len {
            if k - fz.top_slot[a] == l - fz.bottom_slot[b] {
                out.insert((a, b));
            }
        }
    }
    Ok(out)
}

/// A position inside one side of a tile, with flags marking the first letter
/// of the word and the first tile of the factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TileLetterState {
    pub letter: char,
    pub tile: usize,
    pub position: usize,
    pub initial_letter: bool,
    pub initial_tile: bool,
}

impl fmt::Display for TileLetterState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}:{}{}",
            self.letter,
            self.tile + 1,
            self.position,
            u8::from(self.initial_letter),
            u8::from(self.initial_tile)
        )
    }
}

/// One color of the reduction: a top state, a bottom state and the two
/// witness-membership flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReductionColor {
    pub top: TileLetterState,
    pub bottom: TileLetterState,
    pub same_length: bool,
    pub same_tile: bool,
}

impl fmt::Display for ReductionColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}|{}|{}|{}",
            self.top,
            self.bottom,
            if self.same_length { "SameLength" } else { "-" },
            if self.same_tile { "SameTile" } else { "-" }
        )
    }
}

fn side_states(words: impl Iterator<Item = Vec<char>>) -> Vec<TileLetterState> {
    let mut out = Vec::new();
    for (tile, w) in words.enumerate() {
        for (position, &letter) in w.iter().enumerate() {
            for initial_letter in [false, true] {
                for initial_tile in [false, true] {
                    out.push(TileLetterState {
                        letter,
                        tile,
                        position,
                        initial_letter,
                        initial_tile,
                    });
                }
            }
        }
    }
    out
}

/// The coloring constraint built from an instance, with the meaning of each color.
#[derive(Debug, Clone)]
pub struct Reduction {
    inst: PcpInstance,
    colors: Vec<ReductionColor>,
    raw_colors: usize,
    constraint: ColoringConstraint,
}

impl Reduction {
    pub fn new(inst: &PcpInstance) -> Self {
        let top_states = side_states(inst.tiles.iter().map(|t| t.0.clone()));
        let bottom_states = side_states(inst.tiles.iter().map(|t| t.1.clone()));
        let mut raw_colors = 0;
        let mut colors = Vec::new();
        for &top in &top_states {
            for &bottom in &bottom_states {
                for same_length in [true, false] {
                    for same_tile in [true, false] {
                        raw_colors += 1;
                        let c = ReductionColor {
                            top,
                            bottom,
                            same_length,
                            same_tile,
                        };
                        if same_length && (top.initial_letter != bottom.initial_letter || top.letter != bottom.letter) {
                            continue;
                        }
                        if same_tile && (top.initial_tile != bottom.initial_tile || top.tile != bottom.tile) {
                            continue;
                        }
                        colors.push(c);
                    }
                }
            }
        }
        let top_max = |q: &TileLetterState| q.position + 1 == inst.top(q.tile).len();
        let bottom_max = |q: &TileLetterState| q.position + 1 == inst.bottom(q.tile).len();
        // One step of the tiling automaton, with the flag bookkeeping.
        let side_ok = |q: &TileLetterState, r: &TileLetterState, maximal: bool| {
            let tiling = (maximal && r.position == 0) || (q.tile == r.tile && r.position == q.position + 1);
            let letter_flag = !r.initial_letter;
            let tile_flag = !r.initial_tile || (q.initial_tile && !maximal);
            tiling && letter_flag && tile_flag
        };

        let names = colors.iter().map(|c| c.to_string()).collect();
        let mut k = ColoringConstraint::new(names).expect("reduction colors are distinct");
        for (i, c) in colors.iter().enumerate() {
            let all_flags = c.top.initial_letter && c.top.initial_tile && c.bottom.initial_letter && c.bottom.initial_tile;
            if c.same_length && c.same_tile && c.top.position == 0 && c.bottom.position == 0 && all_flags {
                k.allow_initial(i);
            }
            if c.same_length && c.same_tile && top_max(&c.top) && bottom_max(&c.bottom) {
                k.allow_final(i);
            }
        }
        for (i, c) in colors.iter().enumerate() {
            for (j, d) in colors.iter().enumerate() {
                // Along x: the bottom state is fixed and the top word advances.
                let upper = c.bottom != d.bottom
                    || !side_ok(&c.top, &d.top, top_max(&c.top))
                    || (!c.same_tile && d.same_tile && d.top.position != 0);
                // Along y: the top state is fixed and the bottom word advances.
                let lower = c.top != d.top
                    || !side_ok(&c.bottom, &d.bottom, bottom_max(&c.bottom))
                    || (!c.same_tile && d.same_tile && d.bottom.position != 0);
                let square = (!c.same_length && d.same_length)
                    || (!c.same_tile && d.same_tile && d.top.position == 0 && d.bottom.position == 0);
                if upper {
                    k.upper_mut().insert(i, j);
                }
                if lower {
                    k.lower_mut().insert(i, j);
                }
                if square {
                    k.squares_mut().insert(i, j);
                }
            }
        }
        Reduction {
            inst: inst.clone(),
            colors,
            raw_colors,
            constraint: k,
        }
    }

    pub fn constraint(&self) -> &ColoringConstraint {
        &self.constraint
    }

    pub fn into_constraint(self) -> ColoringConstraint {
        self.constraint
    }

    /// Meaning of each color, indexed like the constraint's colors.
    pub fn colors(&self) -> &[ReductionColor] {
        &self.colors
    }

    /// Size of the color universe before pruning.
    pub fn raw_color_count(&self) -> usize {
        self.raw_colors
    }

    /// Size of the color alphabet after pruning.
    pub fn color_count(&self) -> usize {
        self.colors.len()
    }

    /// Reads the top factorization along x and the bottom one along y.
    pub fn decode(&self, f: &Coloring) -> Result<(Vec<usize>, Vec<usize>), PcpError> {
        f.check_colors(self.colors.len())?;
        let at = |x: usize, y: usize| self.colors[f.get(x, y)];
        for x in 0..f.n() {
            for y in 1..f.m() {
                if at(x, y).top != at(x, 0).top {
                    return Err(PcpError::ColumnInconsistent { x, y });
                }
            }
        }
        for y in 0..f.m() {
            for x in 1..f.n() {
                if at(x, y).bottom != at(0, y).bottom {
                    return Err(PcpError::RowInconsistent { x, y });
                }
            }
        }
        let top: Vec<_> = (0..f.n()).map(|x| at(x, 0).top).collect();
        let bottom: Vec<_> = (0..f.m()).map(|y| at(0, y).bottom).collect();
        let top_seq = factorization(&top, |i| self.inst.top(i).len(), "top")?;
        let bottom_seq = factorization(&bottom, |i| self.inst.bottom(i).len(), "bottom")?;
        Ok((top_seq, bottom_seq))
    }
}

fn factorization(
    states: &[TileLetterState],
    len: impl Fn(usize) -> usize,
    side: &'static str,
) -> Result<Vec<usize>, PcpError> {
    let mut seq = Vec::new();
    for (x, q) in states.iter().enumerate() {
        let continues = x > 0 && {
            let p = &states[x - 1];
            p.tile == q.tile && q.position == p.position + 1
        };
        if q.position == 0 && (x == 0 || states[x - 1].position + 1 == len(states[x - 1].tile)) {
            seq.push(q.tile);
        } else if !continues {
            return Err(PcpError::NotAFactorization { side, position: x });
        }
    }
    let last = states.last().expect("grids are nonempty");
    if last.position + 1 != len(last.tile) {
        return Err(PcpError::NotAFactorization {
            side,
            position: states.len() - 1,
        });
    }
    Ok(seq)
}

pub fn to_coloring_constraint(inst: &PcpInstance) -> ColoringConstraint {
    Reduction::new(inst).into_constraint()
}

/// Decodes a coloring of [`to_coloring_constraint`] into its two tile sequences.
pub fn decode_coloring(inst: &PcpInstance, f: &Coloring) -> Result<(Vec<usize>, Vec<usize>), PcpError> {
    Reduction::new(inst).decode(f)
}
