//! Replacement of a k-CNOT by basis gates under three helper-line regimes.
//!
//! * borrowed: helpers hold arbitrary values and are restored, at most `8k` gates;
//! * clean: `k - 2` zero helpers, `2k - 3` gates, helpers end at zero;
//! * garbage: `k - 2` zero helpers, `k - 1` gates, helpers are left dirty.
//!
//! Gates with at most two controls pass through unchanged in every mode.

use crate::circuit::Gate;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HelperMode {
    Borrowed,
    Clean,
    Garbage,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionPlan {
    pub mode: HelperMode,
    pub controls: Vec<usize>,
    pub target: usize,
    pub helpers: Vec<usize>,
}

impl DecompositionPlan {
    pub fn new(mode: HelperMode, controls: Vec<usize>, target: usize, helpers: Vec<usize>) -> Self {
        DecompositionPlan {
            mode,
            controls,
            target,
            helpers,
        }
    }

    /// Borrowed plan for `gate` that may use every other line of an `lines`-line circuit.
    pub fn borrowing_all(gate: &Gate, lines: usize) -> Self {
        let helpers = (0..lines).filter(|&l| !gate.touches(l)).collect();
        DecompositionPlan::new(
            HelperMode::Borrowed,
            gate.controls().to_vec(),
            gate.target(),
            helpers,
        )
    }

    fn validate(&self) -> Result<Gate> {
        let gate = Gate::new(self.controls.clone(), self.target)?;
        for (i, &h) in self.helpers.iter().enumerate() {
            if gate.touches(h) || self.helpers[..i].contains(&h) {
                return Err(Error::structural(format!(
                    "helper line {h} overlaps the gate or another helper"
                )));
            }
        }
        Ok(gate)
    }
}

/// Dispatches on the plan's mode.
pub fn decompose(plan: &DecompositionPlan) -> Result<Vec<Gate>> {
    match plan.mode {
        HelperMode::Borrowed => decompose_borrowed(plan),
        HelperMode::Clean => decompose_clean(plan),
        HelperMode::Garbage => decompose_garbage(plan),
    }
}

/// k-CNOT using dirty helper lines; every helper is restored on every input.
///
/// With at least `k - 2` helpers this is the dirty-ancilla ladder of `4(k - 2)`
/// 2-CNOTs. With fewer, the controls are split into two halves across one helper
/// `b`, giving `C(B ∪ {b}; t) C(A; b) C(B ∪ {b}; t) C(A; b)`, where each half
/// borrows the lines of the other half; the total stays below `8(k - 3)`.
pub fn decompose_borrowed(plan: &DecompositionPlan) -> Result<Vec<Gate>> {
    if plan.mode != HelperMode::Borrowed {
        return Err(Error::Parameter("plan is not in borrowed mode".into()));
    }
    let gate = plan.validate()?;
    if gate.is_basis() {
        return Ok(vec![gate]);
    }
    if plan.helpers.is_empty() {
        return Err(Error::Capacity(format!(
            "{}-CNOT needs at least one free line",
            plan.controls.len()
        )));
    }
    let mut out = Vec::new();
    borrowed_into(&plan.controls, plan.target, &plan.helpers, &mut out);
    Ok(out)
}

fn borrowed_into(controls: &[usize], target: usize, helpers: &[usize], out: &mut Vec<Gate>) {
    let k = controls.len();
    match k {
        0 => out.push(Gate::not(target)),
        1 => out.push(Gate::cnot(controls[0], target)),
        2 => out.push(Gate::toffoli(controls[0], controls[1], target)),
        _ if helpers.len() >= k - 2 => dirty_ladder(controls, target, &helpers[..k - 2], out),
        _ => {
            let b = helpers[0];
            let (first, second) = controls.split_at(k.div_ceil(2));
            let mut upper: Vec<usize> = second.to_vec();
            upper.push(b);
            // helpers for the first half: the second half, the target and spare helpers
            let lower_helpers: Vec<usize> = second
                .iter()
                .copied()
                .chain(std::iter::once(target))
                .chain(helpers[1..].iter().copied())
                .collect();
            let upper_helpers: Vec<usize> = first
                .iter()
                .copied()
                .chain(helpers[1..].iter().copied())
                .collect();
            for _ in 0..2 {
                borrowed_into(&upper, target, &upper_helpers, out);
                borrowed_into(first, b, &lower_helpers, out);
            }
        }
    }
}

/// Ladder on `k` controls with exactly `k - 2` dirty helpers.
fn dirty_ladder(controls: &[usize], target: usize, helpers: &[usize], out: &mut Vec<Gate>) {
    let k = controls.len();
    debug_assert_eq!(helpers.len(), k - 2);
    // rung(i) for i in 2..k-1 adds controls[i] ∧ helpers[i-2] into helpers[i-1]
    let rung = |i: usize| Gate::toffoli(controls[i], helpers[i - 2], helpers[i - 1]);
    let top = Gate::toffoli(controls[k - 1], helpers[k - 3], target);
    let base = Gate::toffoli(controls[0], controls[1], helpers[0]);
    let down = |out: &mut Vec<Gate>| {
        for i in (2..k - 1).rev() {
            out.push(rung(i));
        }
    };
    let up = |out: &mut Vec<Gate>| {
        for i in 2..k - 1 {
            out.push(rung(i));
        }
    };
    out.push(top.clone());
    down(out);
    out.push(base.clone());
    up(out);
    out.push(top);
    down(out);
    out.push(base);
    up(out);
}

fn check_zero_helpers(plan: &DecompositionPlan, mode: HelperMode) -> Result<Option<Gate>> {
    if plan.mode != mode {
        return Err(Error::Parameter(format!("plan is not in {mode:?} mode")));
    }
    let gate = plan.validate()?;
    if gate.is_basis() {
        return Ok(Some(gate));
    }
    let need = plan.controls.len() - 2;
    if plan.helpers.len() != need {
        return Err(Error::Parameter(format!(
            "{}-CNOT needs exactly {need} zero helpers, got {}",
            plan.controls.len(),
            plan.helpers.len()
        )));
    }
    Ok(None)
}

/// AND-chain into the helpers: `h_0 = c_0 ∧ c_1`, `h_i = c_{i+1} ∧ h_{i-1}`.
fn and_chain(controls: &[usize], helpers: &[usize]) -> Vec<Gate> {
    let mut chain = vec![Gate::toffoli(controls[0], controls[1], helpers[0])];
    for i in 1..helpers.len() {
        chain.push(Gate::toffoli(controls[i + 1], helpers[i - 1], helpers[i]));
    }
    chain
}

/// k-CNOT with `k - 2` zero helpers, uncomputed afterwards: exactly `2k - 3` gates.
pub fn decompose_clean(plan: &DecompositionPlan) -> Result<Vec<Gate>> {
    if let Some(g) = check_zero_helpers(plan, HelperMode::Clean)? {
        return Ok(vec![g]);
    }
    let k = plan.controls.len();
    let chain = and_chain(&plan.controls, &plan.helpers);
    let mut out = chain.clone();
    out.push(Gate::toffoli(
        plan.controls[k - 1],
        plan.helpers[k - 3],
        plan.target,
    ));
    out.extend(chain.into_iter().rev());
    Ok(out)
}

/// k-CNOT with `k - 2` zero helpers left holding partial products: exactly `k - 1` gates.
pub fn decompose_garbage(plan: &DecompositionPlan) -> Result<Vec<Gate>> {
    if let Some(g) = check_zero_helpers(plan, HelperMode::Garbage)? {
        return Ok(vec![g]);
    }
    let k = plan.controls.len();
    let mut out = and_chain(&plan.controls, &plan.helpers);
    out.push(Gate::toffoli(
        plan.controls[k - 1],
        plan.helpers[k - 3],
        plan.target,
    ));
    Ok(out)
}
