//! Permutations of n-bit points and their decomposition into groups of
//! pairwise independent transpositions.
//!
//! Sequences of permutations compose left to right: the product `g ∘ h` of an
//! emitted sequence maps `x` to `h(g(x))`, so the first element is applied first.
//! This matches circuit order, where the first gate acts first.

use std::fmt;

use crate::error::{Error, Result};

/// An arbitrary map `{0..2^n} -> {0..2^n}` stored as an image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BooleanMapping {
    n: usize,
    images: Vec<usize>,
}

impl BooleanMapping {
    pub fn new(n: usize, images: Vec<usize>) -> Result<Self> {
        let size = table_size(n)?;
        if images.len() != size {
            return Err(Error::structural(format!(
                "mapping on {n} bits needs {size} images, got {}",
                images.len()
            )));
        }
        if let Some(&bad) = images.iter().find(|&&v| v >= size) {
            return Err(Error::structural(format!(
                "image {bad} out of range [0, {size})"
            )));
        }
        Ok(BooleanMapping { n, images })
    }

    pub fn identity(n: usize) -> Self {
        BooleanMapping {
            n,
            images: (0..1usize << n).collect(),
        }
    }

    pub fn bits(&self) -> usize {
        self.n
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.images.len()];
        self.images
            .iter()
            .all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    /// Coordinate function `j` evaluated at `x`.
    pub fn coordinate(&self, x: usize, j: usize) -> bool {
        (self.images[x] >> j) & 1 == 1
    }
}

impl From<Permutation> for BooleanMapping {
    fn from(p: Permutation) -> Self {
        BooleanMapping {
            n: p.n,
            images: p.images,
        }
    }
}

fn table_size(n: usize) -> Result<usize> {
    if n >= usize::BITS as usize - 1 {
        return Err(Error::Capacity(format!("{n}-bit table is too large")));
    }
    Ok(1usize << n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// A bijection on `{0..2^n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    n: usize,
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            n,
            images: (0..1usize << n).collect(),
        }
    }

    pub fn from_images(n: usize, images: Vec<usize>) -> Result<Self> {
        let m = BooleanMapping::new(n, images)?;
        if !m.is_bijective() {
            return Err(Error::structural("image table is not a bijection"));
        }
        Ok(Permutation {
            n,
            images: m.images,
        })
    }

    /// Product of transpositions applied in the given order.
    pub fn from_transpositions<'a, I>(n: usize, ts: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Transposition>,
    {
        let mut p = Permutation::identity(n);
        for t in ts {
            if t.b >= p.images.len() {
                return Err(Error::structural(format!("transposition {t} out of range")));
            }
            p.compose_transposition(*t);
        }
        Ok(p)
    }

    pub fn bits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Permutation {
            n: self.n,
            images: inv,
        }
    }

    /// `self` followed by `other`: `x -> other(self(x))`.
    pub fn then(&self, other: &Permutation) -> Self {
        assert_eq!(self.n, other.n, "permutations on different point sets");
        Permutation {
            n: self.n,
            images: self.images.iter().map(|&v| other.images[v]).collect(),
        }
    }

    /// Post-composes with a transposition in place.
    fn compose_transposition(&mut self, t: Transposition) {
        for v in self.images.iter_mut() {
            if *v == t.a {
                *v = t.b;
            } else if *v == t.b {
                *v = t.a;
            }
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = cycle_decomposition(self);
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let s: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", s.join(","))?;
        }
        Ok(())
    }
}

/// A swap of two distinct points, stored with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transposition {
    a: usize,
    b: usize,
}

impl Transposition {
    pub fn new(x: usize, y: usize) -> Result<Self> {
        if x == y {
            return Err(Error::structural(format!(
                "degenerate transposition ({x},{x})"
            )));
        }
        Ok(Transposition {
            a: x.min(y),
            b: x.max(y),
        })
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn contains(&self, x: usize) -> bool {
        self.a == x || self.b == x
    }

    pub fn is_independent_of(&self, other: &Transposition) -> bool {
        !self.contains(other.a) && !self.contains(other.b)
    }

    fn pair(x: usize, y: usize) -> Self {
        debug_assert_ne!(x, y);
        Transposition {
            a: x.min(y),
            b: x.max(y),
        }
    }
}

impl fmt::Display for Transposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// Pairwise independent transpositions; their product does not depend on order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranspositionGroup {
    members: Vec<Transposition>,
}

impl TranspositionGroup {
    pub fn new(members: Vec<Transposition>) -> Result<Self> {
        for (i, t) in members.iter().enumerate() {
            if members[..i].iter().any(|u| !u.is_independent_of(t)) {
                return Err(Error::structural(format!(
                    "transposition {t} shares a point with an earlier member"
                )));
            }
        }
        Ok(TranspositionGroup { members })
    }

    pub fn members(&self) -> &[Transposition] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Moved points in row order `x_1, y_1, ..., x_K, y_K`.
    pub fn points(&self) -> Vec<usize> {
        self.members.iter().flat_map(|t| [t.a, t.b]).collect()
    }

    pub fn permutation(&self, n: usize) -> Result<Permutation> {
        Permutation::from_transpositions(n, &self.members)
    }
}

impl fmt::Display for TranspositionGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, t) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("]")
    }
}

/// Parity from the cycle count: even iff `2^n - #cycles` (fixed points included) is even.
pub fn parity(p: &Permutation) -> Parity {
    let mut seen = vec![false; p.len()];
    let mut cycles = 0usize;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p.images[x];
        }
    }
    if (p.len() - cycles).is_multiple_of(2) {
        Parity::Even
    } else {
        Parity::Odd
    }
}

pub fn moved_points(p: &Permutation) -> Vec<usize> {
    (0..p.len()).filter(|&x| p.images[x] != x).collect()
}

/// Disjoint cycles of length >= 2, each starting at its minimum, sorted by minimum.
pub fn cycle_decomposition(p: &Permutation) -> Vec<Vec<usize>> {
    let mut seen = vec![false; p.len()];
    let mut cycles = Vec::new();
    for start in 0..p.len() {
        if seen[start] || p.images[start] == start {
            seen[start] = true;
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push(x);
            x = p.images[x];
        }
        cycles.push(cycle);
    }
    cycles
}

/// Permutation given by a list of cycles on `n`-bit points.
pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Permutation> {
    let mut images: Vec<usize> = (0..table_size(n)?).collect();
    for c in cycles {
        for (i, &x) in c.iter().enumerate() {
            images[x] = c[(i + 1) % c.len()];
        }
    }
    Permutation::from_images(n, images)
}

/// Peels up to `budget` leading transpositions off one cycle.
///
/// Uses `(i1,...,il) = (i1,i2)∘(i3,i4)∘…∘(i_{2t-1},i_{2t}) ∘ (i1,i3,…,i_{2t-1},i_{2t+1},…,il)`
/// for `t <= l/2`; `t = 1` is the plain split of a cycle and `t = 2` with `l >= 5`
/// the two-transposition split. The peeled transpositions are pairwise independent.
fn peel(cycle: &mut Vec<usize>, budget: usize, out: &mut Vec<Transposition>) {
    let take = budget.min(cycle.len() / 2);
    if take == 0 {
        return;
    }
    for t in 0..take {
        out.push(Transposition::pair(cycle[2 * t], cycle[2 * t + 1]));
    }
    let mut rest: Vec<usize> = (0..take).map(|t| cycle[2 * t]).collect();
    rest.extend_from_slice(&cycle[2 * take..]);
    *cycle = rest;
}

fn available(cycles: &[Vec<usize>]) -> usize {
    cycles.iter().map(|c| c.len() / 2).sum()
}

/// Greedily extracts groups of exactly `size` independent transpositions.
///
/// Each pass takes transpositions from the front of the cycles, in canonical
/// cycle order, until `size` are collected. Extraction stops when the residual
/// cycles cannot supply `size` more; their product is returned as the residual
/// `h'`, so `p = G_1 ∘ … ∘ G_r ∘ h'`.
pub fn extract_groups(
    p: &Permutation,
    size: usize,
) -> Result<(Vec<TranspositionGroup>, Permutation)> {
    if size == 0 {
        return Err(Error::Parameter("group size must be positive".into()));
    }
    let mut cycles = cycle_decomposition(p);
    let groups = extract_from_cycles(&mut cycles, size);
    Ok((groups, from_cycles(p.bits(), &cycles)?))
}

fn extract_from_cycles(cycles: &mut Vec<Vec<usize>>, size: usize) -> Vec<TranspositionGroup> {
    let mut groups = Vec::new();
    while available(cycles) >= size {
        let mut members = Vec::with_capacity(size);
        for c in cycles.iter_mut() {
            if members.len() == size {
                break;
            }
            peel(c, size - members.len(), &mut members);
        }
        cycles.retain(|c| c.len() >= 2);
        groups.push(TranspositionGroup { members });
    }
    groups
}

/// Rewrites a dependent pair `(i,j)∘(i,k)` as `((i,j)∘(r,s)) ∘ ((r,s)∘(i,k))`.
///
/// `(r,s)` are the two smallest points outside `{i,j,k}`.
pub fn split_dependent_pair(
    t1: Transposition,
    t2: Transposition,
    n: usize,
) -> Result<[TranspositionGroup; 2]> {
    let shared: Vec<usize> = [t1.a, t1.b]
        .into_iter()
        .filter(|&x| t2.contains(x))
        .collect();
    if shared.len() != 1 {
        return Err(Error::structural(format!(
            "{t1} and {t2} must share exactly one point"
        )));
    }
    let size = table_size(n)?;
    let mut free = (0..size).filter(|&x| !t1.contains(x) && !t2.contains(x));
    let (r, s) = match (free.next(), free.next()) {
        (Some(r), Some(s)) => (r, s),
        _ => {
            return Err(Error::Capacity(format!(
                "{n}-bit points leave fewer than two free points"
            )))
        }
    };
    let rs = Transposition::pair(r, s);
    Ok([
        TranspositionGroup {
            members: vec![t1, rs],
        },
        TranspositionGroup {
            members: vec![rs, t2],
        },
    ])
}

/// Decomposes an even permutation into groups of `group_size` independent
/// transpositions, followed by pairs for the residual.
///
/// The ordered product of every emitted transposition equals `p`. A final
/// dependent pair left by a 3-cycle is rewritten through [`split_dependent_pair`].
pub fn transposition_stream(p: &Permutation, group_size: usize) -> Result<Vec<TranspositionGroup>> {
    if group_size < 2 {
        return Err(Error::Parameter(format!(
            "group size {group_size} must be at least 2"
        )));
    }
    if parity(p) == Parity::Odd {
        return Err(Error::Parity(
            "odd permutation is not a product of transposition pairs".into(),
        ));
    }
    let mut cycles = cycle_decomposition(p);
    let mut groups = extract_from_cycles(&mut cycles, group_size);
    if group_size != 2 {
        groups.extend(extract_from_cycles(&mut cycles, 2));
    }
    match cycles.as_slice() {
        [] => {}
        [c] if c.len() == 3 => {
            let t1 = Transposition::pair(c[0], c[1]);
            let t2 = Transposition::pair(c[0], c[2]);
            groups.extend(split_dependent_pair(t1, t2, p.bits())?);
        }
        rest => {
            return Err(Error::structural(format!(
                "unexpected residual cycles {rest:?} after pair extraction"
            )))
        }
    }
    Ok(groups)
}

/// Single transpositions whose ordered product is `p`; works for any parity.
pub fn transposition_sequence(p: &Permutation) -> Vec<Transposition> {
    let mut out = Vec::new();
    for c in cycle_decomposition(p) {
        for &x in &c[1..] {
            out.push(Transposition::pair(c[0], x));
        }
    }
    out
}

/// Ordered product of all transpositions in the groups.
pub fn recompose(n: usize, groups: &[TranspositionGroup]) -> Result<Permutation> {
    Permutation::from_transpositions(n, groups.iter().flat_map(|g| g.members.iter()))
}
