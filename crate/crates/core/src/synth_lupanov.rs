//! Synthesis of arbitrary mappings `f: Z_2^n -> Z_2^n` with many ancilla lines.
//!
//! `f` is split by its last `n - k` variables: for every assignment `i` of those
//! variables the restriction `f_i` is a map of the first `k` variables, and each of
//! its coordinates `f_{i,j}` is an XOR of minterms of the first `k` variables. The
//! minterms are partitioned into `p` groups of at most `s`; every subset-XOR of a
//! group is precomputed, so each `f_{i,j}` costs at most one CNOT per group.
//!
//! Stages, in emission order:
//! 1. all minterms of the first `k` input lines;
//! 2. all minterms of the last `n - k` input lines;
//! 3. subset-XOR banks over each group of stage-1 lines;
//! 4. one line per nonzero coordinate function, assembled from the banks;
//! 5. `n` output lines, output `j` collecting `minterm_i ∧ f_{i,j}` over all `i`.

use std::fmt;

use crate::circuit::{basis_gadget, Circuit, GadgetOp, Gate};
use crate::error::{Error, Result};
use crate::growth::GrowthFn;
use crate::perm::BooleanMapping;

/// Default ceiling on the number of lines a synthesis may allocate.
pub const DEFAULT_LINE_CAP: usize = 1 << 22;

/// Hands out fresh line indices, never reusing one.
#[derive(Debug, Clone)]
pub struct LineAllocator {
    next: usize,
    first: usize,
    cap: usize,
}

impl LineAllocator {
    /// Allocator whose first fresh line is `first`.
    pub fn new(first: usize, cap: usize) -> Self {
        LineAllocator {
            next: first,
            first,
            cap,
        }
    }

    pub fn alloc(&mut self) -> Result<usize> {
        if self.next >= self.cap {
            return Err(Error::Capacity(format!("line cap {} exhausted", self.cap)));
        }
        self.next += 1;
        Ok(self.next - 1)
    }

    /// Total line count so far, including the lines below `first`.
    pub fn lines(&self) -> usize {
        self.next
    }

    pub fn allocated(&self) -> usize {
        self.next - self.first
    }
}

/// Line holding the bank's function for each descriptor index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BankIndex {
    lines: Vec<usize>,
}

impl BankIndex {
    pub fn line(&self, descriptor: usize) -> usize {
        self.lines[descriptor]
    }

    pub fn lines(&self) -> &[usize] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

/// Lines holding every minterm of `vars`.
///
/// Descriptor `a` selects `x_t` where bit `t` of `a` is 1 and `¬x_t` where it is 0.
/// Costs `2v` gates for the negations plus `C(v) = 2^v + C(⌈v/2⌉) + C(⌊v/2⌋)`,
/// `C(1) = 0`, for the products.
pub fn conjunction_bank(
    vars: &[usize],
    alloc: &mut LineAllocator,
) -> Result<(Vec<Gate>, BankIndex)> {
    if vars.is_empty() {
        return Err(Error::Parameter(
            "conjunction bank needs at least one variable".into(),
        ));
    }
    let mut gates = Vec::new();
    let mut literals = Vec::with_capacity(vars.len());
    for &x in vars {
        let neg = alloc.alloc()?;
        gates.extend(basis_gadget(GadgetOp::Negation(x), neg));
        literals.push([neg, x]);
    }
    let lines = product_bank(&literals, alloc, &mut gates)?;
    Ok((gates, BankIndex { lines }))
}

fn product_bank(
    literals: &[[usize; 2]],
    alloc: &mut LineAllocator,
    gates: &mut Vec<Gate>,
) -> Result<Vec<usize>> {
    if literals.len() == 1 {
        return Ok(literals[0].to_vec());
    }
    let (first, second) = literals.split_at(literals.len().div_ceil(2));
    let left = product_bank(first, alloc, gates)?;
    let right = product_bank(second, alloc, gates)?;
    let low_bits = first.len();
    let mut out = Vec::with_capacity(1 << literals.len());
    for a in 0..1usize << literals.len() {
        let line = alloc.alloc()?;
        let l = left[a & ((1 << low_bits) - 1)];
        let r = right[a >> low_bits];
        gates.extend(basis_gadget(GadgetOp::Conjunction(l, r), line));
        out.push(line);
    }
    Ok(out)
}

/// C(v) of the conjunction bank recursion.
pub fn conjunction_product_count(v: usize) -> usize {
    if v <= 1 {
        0
    } else {
        (1 << v) + conjunction_product_count(v.div_ceil(2)) + conjunction_product_count(v / 2)
    }
}

/// Lines holding the XOR of every subset of `group`.
///
/// Descriptor bit `u` includes `group[u]`. The empty subset maps to `zero_line`,
/// singletons to the group lines themselves. Each subset with both halves
/// nonempty costs one fresh line and two CNOTs, at most `2^(s+1)` CNOTs in total.
pub fn xor_bank(
    group: &[usize],
    zero_line: usize,
    alloc: &mut LineAllocator,
) -> Result<(Vec<Gate>, BankIndex)> {
    if group.is_empty() {
        return Err(Error::Parameter("xor bank needs at least one line".into()));
    }
    let mut gates = Vec::new();
    let lines = subset_bank(group, zero_line, alloc, &mut gates)?;
    Ok((gates, BankIndex { lines }))
}

fn subset_bank(
    group: &[usize],
    zero: usize,
    alloc: &mut LineAllocator,
    gates: &mut Vec<Gate>,
) -> Result<Vec<usize>> {
    if group.len() == 1 {
        return Ok(vec![zero, group[0]]);
    }
    let (first, second) = group.split_at(group.len().div_ceil(2));
    let left = subset_bank(first, zero, alloc, gates)?;
    let right = subset_bank(second, zero, alloc, gates)?;
    let low_bits = first.len();
    let mut out = Vec::with_capacity(1 << group.len());
    for m in 0..1usize << group.len() {
        let (ml, mr) = (m & ((1 << low_bits) - 1), m >> low_bits);
        let line = match (ml, mr) {
            (0, _) => right[mr],
            (_, 0) => left[ml],
            _ => {
                let line = alloc.alloc()?;
                gates.extend(basis_gadget(GadgetOp::Xor(left[ml], right[mr]), line));
                line
            }
        };
        out.push(line);
    }
    Ok(out)
}

/// Split parameters: `k` leading variables, group size `s`, `p = ⌈2^k / s⌉` groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LupanovParams {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub p: usize,
    /// The growth requirement `2^k / s >= psi(n)` could not be met and was ignored.
    pub psi_waived: bool,
}

impl LupanovParams {
    /// Validates `s = n - 2k`, `1 <= s < n` and `1 <= k < n / 2`.
    pub fn new(n: usize, k: usize, s: usize) -> Result<Self> {
        if k == 0 || 2 * k >= n {
            return Err(Error::Parameter(format!(
                "k = {k} must satisfy 1 <= k < n/2 for n = {n}"
            )));
        }
        if s != n - 2 * k {
            return Err(Error::Parameter(format!(
                "s = {s} must equal n - 2k = {}",
                n - 2 * k
            )));
        }
        let p = (1usize << k).div_ceil(s);
        Ok(LupanovParams {
            n,
            k,
            s,
            p,
            psi_waived: false,
        })
    }

    /// Parameters for a forced `k` with `s = n - 2k`.
    pub fn with_k(n: usize, k: usize) -> Result<Self> {
        if 2 * k >= n {
            return Err(Error::Parameter(format!(
                "k = {k} must satisfy 1 <= k < n/2 for n = {n}"
            )));
        }
        LupanovParams::new(n, k, n - 2 * k)
    }

    /// Whether `2^k / s >= psi(n)`.
    pub fn meets_psi(&self, psi: GrowthFn) -> bool {
        (1u64 << self.k) as f64 / self.s as f64 >= psi.eval(self.n)
    }
}

/// `k = ⌈n / phi(n)⌉` clamped into `1 <= k < n/2`, `s = n - 2k`.
pub fn choose_params(n: usize, phi: GrowthFn, psi: GrowthFn) -> Result<LupanovParams> {
    if n < 4 {
        return Err(Error::Parameter(format!(
            "no split parameters for n = {n} < 4"
        )));
    }
    let phi_n = phi.eval(n);
    let k_raw = if phi_n > 0.0 {
        (n as f64 / phi_n).ceil() as usize
    } else {
        1
    };
    let k = k_raw.clamp(1, (n - 1) / 2);
    let mut params = LupanovParams::with_k(n, k)?;
    params.psi_waived = !params.meets_psi(psi);
    Ok(params)
}

/// Gate and ancilla counts per stage.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StageReport {
    pub k: usize,
    pub s: usize,
    pub p: usize,
    pub psi_waived: bool,
    pub gates: [usize; 5],
    pub ancillas: [usize; 5],
}

impl StageReport {
    pub fn total_gates(&self) -> usize {
        self.gates.iter().sum()
    }

    pub fn total_ancillas(&self) -> usize {
        self.ancillas.iter().sum()
    }

    /// `p n 2^(n-k)`
    pub fn coordinate_budget(&self, n: usize) -> usize {
        (self.p * n) << (n - self.k)
    }

    /// `n 2^(n-k)`
    pub fn output_budget(&self, n: usize) -> usize {
        n << (n - self.k)
    }
}

impl fmt::Display for StageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "params k={} s={} p={}{}",
            self.k,
            self.s,
            self.p,
            if self.psi_waived {
                " (psi constraint waived)"
            } else {
                ""
            }
        )?;
        for i in 0..5 {
            writeln!(
                f,
                "stage S{} gates {} ancillas {}",
                i + 1,
                self.gates[i],
                self.ancillas[i]
            )?;
        }
        write!(
            f,
            "total gates {} ancillas {}",
            self.total_gates(),
            self.total_ancillas()
        )
    }
}

#[derive(Debug, Clone)]
pub struct LupanovSynthesis {
    pub circuit: Circuit,
    pub report: StageReport,
    /// Line carrying `f_{i,j}` at index `i * n + j`; `None` when it is identically 0.
    pub coordinate_lines: Vec<Option<usize>>,
    /// Minterm lines of the last `n - k` variables, by assignment index.
    pub high_minterms: BankIndex,
}

pub fn synth_mapping(f: &BooleanMapping, params: &LupanovParams) -> Result<LupanovSynthesis> {
    synth_mapping_with_cap(f, params, DEFAULT_LINE_CAP)
}

pub fn synth_mapping_with_cap(
    f: &BooleanMapping,
    params: &LupanovParams,
    line_cap: usize,
) -> Result<LupanovSynthesis> {
    let n = f.bits();
    if params.n != n {
        return Err(Error::Parameter(format!(
            "parameters for n = {} applied to a {n}-bit mapping",
            params.n
        )));
    }
    let LupanovParams { k, s, p, .. } = *params;
    let mut alloc = LineAllocator::new(n, line_cap);
    let mut gates = Vec::new();
    let mut report = StageReport {
        k,
        s,
        p,
        psi_waived: params.psi_waived,
        ..Default::default()
    };
    let stage = |i: usize,
                 alloc: &LineAllocator,
                 gates: &[Gate],
                 report: &mut StageReport,
                 before: (usize, usize)| {
        report.gates[i] = gates.len() - before.0;
        report.ancillas[i] = alloc.allocated() - before.1;
    };

    let mark = (gates.len(), alloc.allocated());
    let low_vars: Vec<usize> = (0..k).collect();
    let (g1, low) = conjunction_bank(&low_vars, &mut alloc)?;
    gates.extend(g1);
    stage(0, &alloc, &gates, &mut report, mark);

    let mark = (gates.len(), alloc.allocated());
    let high_vars: Vec<usize> = (k..n).collect();
    let (g2, high) = conjunction_bank(&high_vars, &mut alloc)?;
    gates.extend(g2);
    stage(1, &alloc, &gates, &mut report, mark);

    let mark = (gates.len(), alloc.allocated());
    let zero = alloc.alloc()?;
    let mut banks = Vec::with_capacity(p);
    for t in 0..p {
        let members: Vec<usize> = (t * s..((t + 1) * s).min(1 << k))
            .map(|sigma| low.line(sigma))
            .collect();
        let (g3, bank) = xor_bank(&members, zero, &mut alloc)?;
        gates.extend(g3);
        banks.push(bank);
    }
    stage(2, &alloc, &gates, &mut report, mark);

    let mark = (gates.len(), alloc.allocated());
    let rows = 1usize << (n - k);
    let mut coordinate_lines = Vec::with_capacity(rows * n);
    for i in 0..rows {
        for j in 0..n {
            let selected: Vec<usize> = banks
                .iter()
                .enumerate()
                .filter_map(|(t, bank)| {
                    let lo = t * s;
                    let hi = ((t + 1) * s).min(1 << k);
                    let mask = (lo..hi)
                        .filter(|&sigma| f.coordinate(sigma | (i << k), j))
                        .fold(0usize, |m, sigma| m | (1 << (sigma - lo)));
                    (mask != 0).then(|| bank.line(mask))
                })
                .collect();
            let line = match selected.as_slice() {
                [] => None,
                [only] => Some(*only),
                many => {
                    let line = alloc.alloc()?;
                    gates.extend(many.iter().map(|&src| Gate::cnot(src, line)));
                    Some(line)
                }
            };
            coordinate_lines.push(line);
        }
    }
    stage(3, &alloc, &gates, &mut report, mark);

    let mark = (gates.len(), alloc.allocated());
    let outputs: Vec<usize> = (0..n).map(|_| alloc.alloc()).collect::<Result<_>>()?;
    for (j, &out) in outputs.iter().enumerate() {
        for i in 0..rows {
            if let Some(line) = coordinate_lines[i * n + j] {
                gates.push(Gate::toffoli(high.line(i), line, out));
            }
        }
    }
    stage(4, &alloc, &gates, &mut report, mark);

    let circuit = Circuit::with_parts(alloc.lines(), n, outputs, gates)?;
    Ok(LupanovSynthesis {
        circuit,
        report,
        coordinate_lines,
        high_minterms: high,
    })
}
