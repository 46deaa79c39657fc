//! Ancilla-free synthesis of even permutations.
//!
//! The permutation is split into blocks of `K` independent transpositions. The
//! `k = 2K` moved points of a block form the rows of a binary matrix; conjugating
//! the block by single gates acts on every row at once. A fixed sequence of
//! conjugations drives the matrix to the form where row `r` reads `r` in the low
//! `log2 k` columns and all high columns are 1. In that form the block is the
//! single gate with controls on lines `log2 k..n` and target line 0. The circuit
//! is the conjugators, then the decomposed core gate, then the conjugators mirrored.

use crate::bounds;
use crate::circuit::{count_gates, Circuit, Gate, GateCountReport};
use crate::error::{Error, Result};
use crate::growth::GrowthFn;
use crate::perm::{self, Parity, Permutation, TranspositionGroup};
use crate::toffoli::{decompose_borrowed, decompose_clean, DecompositionPlan, HelperMode};

/// Rows are the moved points `x_1, y_1, ..., x_K, y_K` of one block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMatrix {
    n: usize,
    rows: Vec<usize>,
}

impl BlockMatrix {
    pub fn from_group(group: &TranspositionGroup, n: usize) -> Result<Self> {
        let rows = group.points();
        let k = rows.len();
        if k == 0 || !k.is_power_of_two() {
            return Err(Error::Parameter(format!(
                "block of {k} moved points is not a power of two"
            )));
        }
        if k > 64 {
            return Err(Error::Capacity(format!("block of {k} rows exceeds 64")));
        }
        if k.trailing_zeros() as usize >= n {
            return Err(Error::Parameter(format!(
                "log2 k = {} must be below n = {n}",
                k.trailing_zeros()
            )));
        }
        let size = 1usize << n;
        for (i, &x) in rows.iter().enumerate() {
            if x >= size {
                return Err(Error::structural(format!(
                    "point {x} out of range for n = {n}"
                )));
            }
            if rows[..i].contains(&x) {
                return Err(Error::structural(format!("duplicate point {x}")));
            }
        }
        Ok(BlockMatrix { n, rows })
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn log_k(&self) -> usize {
        self.rows.len().trailing_zeros() as usize
    }

    /// Column `j` as a pattern: bit `r` is row `r`'s bit `j`.
    pub fn column(&self, j: usize) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(0u64, |acc, (r, &x)| acc | ((((x >> j) & 1) as u64) << r))
    }

    fn bit(&self, r: usize, j: usize) -> bool {
        (self.rows[r] >> j) & 1 == 1
    }

    fn conjugate(&mut self, gate: &Gate) {
        for x in &mut self.rows {
            *x = gate.apply_word(*x as u64) as usize;
        }
    }

    /// Row `r` equals `r` for every `r < upto`.
    pub fn prefix_canonical(&self, upto: usize) -> bool {
        self.rows[..upto].iter().enumerate().all(|(r, &x)| x == r)
    }

    fn high_mask(&self) -> usize {
        ((1usize << self.n) - 1) & !((1usize << self.log_k()) - 1)
    }

    /// Counter in the low columns and ones in every high column.
    pub fn is_core_form(&self) -> bool {
        let high = self.high_mask();
        self.rows.iter().enumerate().all(|(r, &x)| x == r | high)
    }
}

/// Conjugating gates in the order they were applied to the matrix.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConjugationLog {
    gates: Vec<Gate>,
}

impl ConjugationLog {
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }
}

/// Emitted gate counts of each conjugation stage, counting both mirror copies.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BlockTrace {
    /// Distinct nonzero columns before canonicalization.
    pub distinct_columns: usize,
    pub dedup: usize,
    pub first_row: usize,
    /// One entry per row `2..=k` (1-indexed).
    pub rows: Vec<usize>,
    pub final_not: usize,
    pub core: usize,
}

impl BlockTrace {
    pub fn total(&self) -> usize {
        self.dedup + self.first_row + self.rows.iter().sum::<usize>() + self.final_not + self.core
    }
}

#[derive(Debug, Clone)]
pub struct BlockSynthesis {
    pub gates: Vec<Gate>,
    pub log: ConjugationLog,
    pub core: Gate,
    pub core_gates: Vec<Gate>,
    pub trace: BlockTrace,
}

/// How the core gate is expanded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoreExpansion {
    /// Borrow the free lines of the block.
    Borrowed,
    /// Use these zero-initialized ancilla lines.
    Clean(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockContext {
    /// Lines of the surrounding circuit; lines `0..n` carry the permutation.
    pub lines: usize,
    pub core: CoreExpansion,
}

struct Planned {
    log: Vec<Gate>,
    /// Log index where each stage ends: dedup, first row, rows..., final NOT.
    marks: Vec<usize>,
    distinct_columns: usize,
    core: Gate,
}

fn plan_block(mut a: BlockMatrix) -> Result<Planned> {
    let n = a.n;
    let k = a.k();
    let b = a.log_k();
    let mut log = Vec::new();
    let mut marks = Vec::new();
    let apply = |a: &mut BlockMatrix, g: Gate, log: &mut Vec<Gate>| {
        a.conjugate(&g);
        log.push(g);
    };

    // clear duplicate columns against their first occurrence
    let mut kept: Vec<(u64, usize)> = Vec::new();
    for j in 0..n {
        let pat = a.column(j);
        if pat == 0 {
            continue;
        }
        match kept.iter().find(|(p, _)| *p == pat) {
            Some(&(_, i)) => apply(&mut a, Gate::cnot(i, j), &mut log),
            None => kept.push((pat, j)),
        }
    }
    let d = kept.len();
    debug_assert!(
        d >= b,
        "{k} distinct rows need at least {b} distinct columns"
    );
    debug_assert!((0..n).all(|j| a.column(j) == 0 || kept.iter().any(|&(_, i)| i == j)));
    marks.push(log.len());

    // zero the first row
    for j in 0..n {
        if a.bit(0, j) {
            apply(&mut a, Gate::not(j), &mut log);
        }
    }
    debug_assert_eq!(a.rows[0], 0);
    marks.push(log.len());

    for r in 1..k {
        if a.rows[r] != r {
            if a.rows[r] >> b == 0 {
                // no high bit to pivot on: raise column b for this row and the ones below
                let controls: Vec<usize> = (0..b).filter(|&j| a.bit(r, j)).collect();
                apply(&mut a, Gate::new(controls, b)?, &mut log);
                debug_assert!(a.prefix_canonical(r));
            }
            let pivot = (b..n)
                .find(|&j| a.bit(r, j))
                .expect("row has a high bit after raising");
            for j in 0..n {
                if j != pivot && a.bit(r, j) != ((r >> j) & 1 == 1) {
                    apply(&mut a, Gate::cnot(pivot, j), &mut log);
                }
            }
            let counter: Vec<usize> = (0..b).filter(|&j| (r >> j) & 1 == 1).collect();
            apply(&mut a, Gate::new(counter, pivot)?, &mut log);
        }
        debug_assert!(a.prefix_canonical(r + 1), "row {r} not canonical");
        marks.push(log.len());
    }

    for j in b..n {
        apply(&mut a, Gate::not(j), &mut log);
    }
    marks.push(log.len());
    if !a.is_core_form() {
        return Err(Error::structural("block matrix did not reach core form"));
    }
    Ok(Planned {
        log,
        marks,
        distinct_columns: d,
        core: Gate::new((b..n).collect(), 0)?,
    })
}

fn expand(gate: &Gate, lines: usize) -> Result<Vec<Gate>> {
    if gate.is_basis() {
        Ok(vec![gate.clone()])
    } else {
        decompose_borrowed(&DecompositionPlan::borrowing_all(gate, lines))
    }
}

/// Circuit fragment realizing the product of one group's transpositions on lines `0..n`.
pub fn synth_block(group: &TranspositionGroup, n: usize) -> Result<BlockSynthesis> {
    synth_block_in(
        group,
        n,
        &BlockContext {
            lines: n,
            core: CoreExpansion::Borrowed,
        },
    )
}

pub fn synth_block_in(
    group: &TranspositionGroup,
    n: usize,
    ctx: &BlockContext,
) -> Result<BlockSynthesis> {
    if ctx.lines < n {
        return Err(Error::structural(
            "context has fewer lines than the permutation",
        ));
    }
    let planned = plan_block(BlockMatrix::from_group(group, n)?)?;
    let expanded: Vec<Vec<Gate>> = planned
        .log
        .iter()
        .map(|g| expand(g, ctx.lines))
        .collect::<Result<_>>()?;
    let core_gates = match &ctx.core {
        CoreExpansion::Borrowed => expand(&planned.core, ctx.lines)?,
        CoreExpansion::Clean(helpers) => {
            let need = planned.core.controls().len().saturating_sub(2);
            if helpers.len() < need {
                return Err(Error::Capacity(format!(
                    "core gate needs {need} clean helpers, {} available",
                    helpers.len()
                )));
            }
            decompose_clean(&DecompositionPlan::new(
                HelperMode::Clean,
                planned.core.controls().to_vec(),
                0,
                helpers[..need].to_vec(),
            ))?
        }
    };

    let mut gates = Vec::new();
    for e in &expanded {
        gates.extend_from_slice(e);
    }
    gates.extend_from_slice(&core_gates);
    for e in expanded.iter().rev() {
        gates.extend(e.iter().rev().cloned());
    }

    let stage = |lo: usize, hi: usize| -> usize {
        2 * expanded[lo..hi].iter().map(Vec::len).sum::<usize>()
    };
    let m = &planned.marks;
    let rows = (2..m.len() - 1).map(|i| stage(m[i - 1], m[i])).collect();
    let trace = BlockTrace {
        distinct_columns: planned.distinct_columns,
        dedup: stage(0, m[0]),
        first_row: stage(m[0], m[1]),
        rows,
        final_not: stage(m[m.len() - 2], m[m.len() - 1]),
        core: core_gates.len(),
    };
    debug_assert_eq!(trace.total(), gates.len());
    Ok(BlockSynthesis {
        gates,
        log: ConjugationLog { gates: planned.log },
        core: planned.core,
        core_gates,
        trace,
    })
}

/// Block size `k = 2^floor(log2 m)` for `m = log2 n - log2 log2 n - log2 phi(n)`,
/// raised to at least 4 and clamped so the block fits `n` lines.
pub fn choose_block_size(n: usize, phi: GrowthFn) -> usize {
    let nf = n as f64;
    let m = nf.log2() - nf.log2().log2() - phi.eval(n).log2();
    let mut k = if m >= 1.0 {
        1usize << (m.log2().floor() as u32).min(6)
    } else {
        1
    };
    k = k.max(4);
    while k > 4 && !block_fits(n, k) {
        k /= 2;
    }
    k
}

/// A block of size `k` on `n` lines keeps `log2 k < n`, `k <= 2^(n-1)`, and leaves a
/// free line for conjugators with three or more controls.
fn block_fits(n: usize, k: usize) -> bool {
    let b = k.trailing_zeros() as usize;
    b < n && (b <= 2 || b + 2 <= n) && (n > usize::BITS as usize || k <= 1usize << (n - 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AncillaBudget {
    None,
    /// `n - 3` clean lines for the core gate of every block.
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasicOptions {
    pub k: Option<usize>,
    pub phi: GrowthFn,
    pub ancillas: AncillaBudget,
}

impl Default for BasicOptions {
    fn default() -> Self {
        BasicOptions {
            k: None,
            phi: GrowthFn::Log2,
            ancillas: AncillaBudget::None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockStat {
    /// Moved points of the block.
    pub k: usize,
    pub gates: usize,
    pub budget: f64,
}

#[derive(Debug, Clone)]
pub struct BasicSynthesis {
    pub circuit: Circuit,
    pub report: GateCountReport,
    pub k: usize,
    pub blocks: Vec<BlockStat>,
}

/// Synthesizes a circuit on `n` lines (plus `n - 3` ancillas with the linear budget)
/// whose state permutation on the input lines is `p`.
pub fn synth_even_permutation(p: &Permutation, opts: &BasicOptions) -> Result<BasicSynthesis> {
    let n = p.bits();
    let odd = perm::parity(p) == Parity::Odd;
    if n >= 4 && odd {
        return Err(Error::Parity(format!(
            "odd permutation on {n} >= 4 lines cannot be built from NOT, CNOT and 2-CNOT without ancillas"
        )));
    }
    let k = match opts.k {
        Some(k) => {
            if n >= 3 && (k < 4 || !k.is_power_of_two() || !block_fits(n, k)) {
                return Err(Error::Parameter(format!(
                    "block size {k} must be a power of two >= 4 that fits {n} lines"
                )));
            }
            k
        }
        None => choose_block_size(n, opts.phi),
    };
    let ancillas = match opts.ancillas {
        AncillaBudget::Linear if n > 3 => n - 3,
        _ => 0,
    };
    let lines = n + ancillas;
    let ctx = BlockContext {
        lines,
        core: match opts.ancillas {
            AncillaBudget::None => CoreExpansion::Borrowed,
            AncillaBudget::Linear => CoreExpansion::Clean((n..lines).collect()),
        },
    };
    let mut circuit = Circuit::new(lines, n)?;
    let mut blocks = Vec::new();

    if n == 1 {
        if !p.is_identity() {
            circuit.push(Gate::not(0))?;
            blocks.push(BlockStat {
                k: 2,
                gates: 1,
                budget: 1.0,
            });
        }
    } else if n >= 2 {
        let mut groups = Vec::new();
        let mut rest = p.clone();
        if n == 2 || odd {
            // single transpositions realize odd permutations on <= 3 lines
            let seq = perm::transposition_sequence(p);
            let take = if n == 2 { seq.len() } else { 1 };
            for t in &seq[..take] {
                groups.push(TranspositionGroup::new(vec![*t])?);
            }
            let head = Permutation::from_transpositions(n, &seq[..take])?;
            rest = head.inverse().then(p);
        }
        if !rest.is_identity() {
            groups.extend(perm::transposition_stream(&rest, k / 2)?);
        }
        for g in &groups {
            let block = synth_block_in(g, n, &ctx)?;
            let bk = 2 * g.len();
            blocks.push(BlockStat {
                k: bk,
                gates: block.gates.len(),
                budget: bounds::block_upper(n, bk)?,
            });
            circuit.extend(block.gates)?;
        }
    }
    let report = count_gates(&circuit);
    Ok(BasicSynthesis {
        circuit,
        report,
        k,
        blocks,
    })
}
