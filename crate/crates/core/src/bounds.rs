//! Closed-form complexity bounds for circuits over {NOT, CNOT, 2-CNOT}.
//!
//! All logarithms are binary.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::growth::GrowthFn;

/// Largest `n` for which the counting bound is evaluated with exact integers.
pub const EXACT_GLUHOV_LIMIT: usize = 20;

/// Counting lower bound `2^n (n - 2) / (3 log2(n + q)) - n / 3`.
pub fn shannon_lower(n: usize, q: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("lower bound needs n >= 2, got {n}")));
    }
    let nf = n as f64;
    let pow = 2f64.powi(n as i32);
    Ok(pow * (nf - 2.0) / (3.0 * ((n + q) as f64).log2()) - nf / 3.0)
}

/// Number of distinct NOT, CNOT and 2-CNOT gates on `n` lines: `(n^3 - n^2 + 2n) / 2`.
pub fn gate_set_size(n: usize) -> u128 {
    let n = n as u128;
    (n * n * n - n * n + 2 * n) / 2
}

/// `ceil(log_r((2^n)!/2))` with `r = gate_set_size(n)`, from exact integers
/// when `n <= 20` and from log-gamma beyond.
pub fn gluhov_bound(n: usize) -> Result<u64> {
    if n <= EXACT_GLUHOV_LIMIT {
        gluhov_bound_exact(n)
    } else {
        gluhov_bound_lgamma(n)
    }
}

fn check_gluhov_domain(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "counting bound needs n >= 2, got {n}"
        )));
    }
    Ok(())
}

fn product(lo: u64, hi: u64) -> BigUint {
    if hi < lo {
        return BigUint::one();
    }
    if hi - lo < 32 {
        return (lo..=hi).fold(BigUint::one(), |acc, v| acc * v);
    }
    let mid = lo + (hi - lo) / 2;
    product(lo, mid) * product(mid + 1, hi)
}

/// Exact evaluation with big-integer factorials.
pub fn gluhov_bound_exact(n: usize) -> Result<u64> {
    check_gluhov_domain(n)?;
    if n > EXACT_GLUHOV_LIMIT {
        return Err(Error::Capacity(format!(
            "exact evaluation is limited to n <= {EXACT_GLUHOV_LIMIT}"
        )));
    }
    let group = product(3, 1u64 << n); // (2^n)! / 2
    let r = BigUint::from(gate_set_size(n));
    let mut l = gluhov_bound_lgamma(n)?.max(1) as u32;
    let pow = |e: u32| r.pow(e);
    while pow(l) < group {
        l += 1;
    }
    while l > 0 && pow(l - 1) >= group {
        l -= 1;
    }
    Ok(u64::from(l))
}

/// Floating-point evaluation through `ln Γ(2^n + 1)`.
pub fn gluhov_bound_lgamma(n: usize) -> Result<u64> {
    check_gluhov_domain(n)?;
    let ln_group = ln_gamma(2f64.powi(n as i32) + 1.0) - std::f64::consts::LN_2;
    let ln_r = (gate_set_size(n) as f64).ln();
    Ok((ln_group / ln_r).ceil() as u64)
}

/// Simple lower bound `n 2^n / (3 log2 n)`.
pub fn simple_lower(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "simple lower bound needs n >= 2, got {n}"
        )));
    }
    let nf = n as f64;
    Ok(nf * 2f64.powi(n as i32) / (3.0 * nf.log2()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AncillaFreeBound {
    /// `3n 2^(n+4) / (log2 n - log2 log2 n - log2 phi(n))`
    pub main: f64,
    /// `1 / (6 phi(n)) + (8/3) log2 n log2 log2 n / n`, lower-order term dropped.
    pub epsilon: f64,
    /// `main * (1 + epsilon)`
    pub value: f64,
}

/// Upper bound for ancilla-free synthesis of even permutations.
pub fn ancilla_free_upper(n: usize, phi: GrowthFn) -> Result<AncillaFreeBound> {
    if n < 4 {
        return Err(Error::Domain(format!(
            "the ancilla-free upper bound requires n >= 4, got {n}"
        )));
    }
    let nf = n as f64;
    let lg = nf.log2();
    let phi_n = phi.eval(n);
    if !(phi_n > 0.0 && phi_n < nf / lg) {
        return Err(Error::Domain(format!(
            "phi={phi} gives phi({n}) = {phi_n:.4}, outside (0, n/log2 n = {:.4})",
            nf / lg
        )));
    }
    let llg = lg.log2();
    let denom = lg - llg - phi_n.log2();
    let main = 3.0 * nf * 2f64.powi(n as i32 + 4) / denom;
    let epsilon = 1.0 / (6.0 * phi_n) + (8.0 / 3.0) * lg * llg / nf;
    Ok(AncillaFreeBound {
        main,
        epsilon,
        value: main * (1.0 + epsilon),
    })
}

fn check_block(n: usize, k: usize) -> Result<u32> {
    if k < 2 || !k.is_power_of_two() {
        return Err(Error::Domain(format!(
            "block size {k} must be a power of two >= 2"
        )));
    }
    let log_k = k.trailing_zeros();
    if log_k as usize >= n {
        return Err(Error::Domain(format!(
            "log2 k = {log_k} must be below n = {n}"
        )));
    }
    Ok(log_k)
}

/// Gate budget of one block of `k/2` transpositions: `12n + k 2^(k+1) + 32k log2 k - 10 log2 k`.
pub fn block_upper(n: usize, k: usize) -> Result<f64> {
    let log_k = f64::from(check_block(n, k)?);
    let kf = k as f64;
    Ok(12.0 * n as f64 + kf * 2f64.powi(k as i32 + 1) + 32.0 * kf * log_k - 10.0 * log_k)
}

/// Budget of a pair block, `12n + 364`.
pub fn pair_block_upper(n: usize) -> f64 {
    12.0 * n as f64 + 364.0
}

/// Whole-permutation budget `2^(n+1)/k * block_upper(n, k) + k (12n + 364)`.
pub fn basic_total_upper(n: usize, k: usize) -> Result<f64> {
    let stage = block_upper(n, k)?;
    Ok(2f64.powi(n as i32 + 1) / k as f64 * stage + k as f64 * pair_block_upper(n))
}

/// All bound formulas evaluated at one `(n, q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub n: usize,
    pub q: usize,
    pub shannon_lower: f64,
    pub gluhov_bound: u64,
    pub simple_lower: f64,
    pub gate_set_size: u128,
    pub phi: GrowthFn,
    pub ancilla_free_upper: Result<AncillaFreeBound>,
    pub block_upper: Vec<(usize, f64)>,
    pub seven_n_2n: f64,
    pub six_n_2n: f64,
}

impl BoundReport {
    pub fn new(n: usize, q: usize, phi: GrowthFn) -> Result<Self> {
        let mut block = Vec::new();
        let mut k = 4usize;
        while (k.trailing_zeros() as usize) < n && k <= 64 {
            block.push((k, block_upper(n, k)?));
            k *= 2;
        }
        let base = n as f64 * 2f64.powi(n as i32);
        Ok(BoundReport {
            n,
            q,
            shannon_lower: shannon_lower(n, q)?,
            gluhov_bound: gluhov_bound(n)?,
            simple_lower: simple_lower(n)?,
            gate_set_size: gate_set_size(n),
            phi,
            ancilla_free_upper: ancilla_free_upper(n, phi),
            block_upper: block,
            seven_n_2n: 7.0 * base,
            six_n_2n: 6.0 * base,
        })
    }

    pub const CSV_HEADER: &'static str = "n,q,shannon_lower,gluhov_bound,simple_lower,gate_set_size,phi,ancilla_free_upper,ancilla_free_epsilon,block_upper_k4,seven_n_2n,six_n_2n";

    pub fn csv_row(&self) -> String {
        let (t2, eps) = match &self.ancilla_free_upper {
            Ok(b) => (fmt_real(b.value), fmt_real(b.epsilon)),
            Err(_) => (String::new(), String::new()),
        };
        let k4 = self
            .block_upper
            .iter()
            .find(|(k, _)| *k == 4)
            .map(|(_, v)| fmt_real(*v))
            .unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.q,
            fmt_real(self.shannon_lower),
            self.gluhov_bound,
            fmt_real(self.simple_lower),
            self.gate_set_size,
            self.phi,
            t2,
            eps,
            k4,
            fmt_real(self.seven_n_2n),
            fmt_real(self.six_n_2n)
        )
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n)?;
        writeln!(f, "q {}", self.q)?;
        writeln!(f, "shannon_lower {}", fmt_real(self.shannon_lower))?;
        writeln!(f, "gluhov_bound {} (heuristic)", self.gluhov_bound)?;
        writeln!(f, "simple_lower {}", fmt_real(self.simple_lower))?;
        writeln!(f, "gate_set_size {}", self.gate_set_size)?;
        match &self.ancilla_free_upper {
            Ok(b) => writeln!(
                f,
                "ancilla_free_upper {} (phi={}, epsilon {})",
                fmt_real(b.value),
                self.phi,
                fmt_real(b.epsilon)
            )?,
            Err(e) => writeln!(f, "ancilla_free_upper unavailable: {e}")?,
        }
        for (k, v) in &self.block_upper {
            writeln!(f, "block_upper k={k} {}", fmt_real(*v))?;
        }
        writeln!(f, "reference 7n2^n {}", fmt_real(self.seven_n_2n))?;
        write!(f, "reference 6n2^n {}", fmt_real(self.six_n_2n))
    }
}

/// Six decimals with trailing zeros trimmed, keeping at least one (`4.0`, `227.555556`).
pub fn fmt_real(v: f64) -> String {
    let s = format!("{v:.6}");
    let trimmed = s.trim_end_matches('0');
    if trimmed.ends_with('.') {
        format!("{trimmed}0")
    } else {
        trimmed.to_string()
    }
}
