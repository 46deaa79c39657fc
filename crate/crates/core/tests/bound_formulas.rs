mod common;

use common::enumerate_basis_gates;
use rcsynth::bounds::{
    ancilla_free_upper, basic_total_upper, block_upper, gate_set_size, gluhov_bound_exact,
    gluhov_bound_lgamma, shannon_lower, simple_lower,
};
use rcsynth::GrowthFn;

#[test]
fn gate_set_size_matches_enumeration() {
    for n in 1..=12 {
        assert_eq!(gate_set_size(n), enumerate_basis_gates(n) as u128, "n={n}");
    }
    assert_eq!(enumerate_basis_gates(4), 28);
}

#[test]
fn counting_bound_evaluations_agree() {
    for n in 2..=12 {
        let exact = gluhov_bound_exact(n).unwrap();
        let approx = gluhov_bound_lgamma(n).unwrap();
        assert!(exact.abs_diff(approx) <= 1, "n={n}: {exact} vs {approx}");
    }
}

#[test]
fn block_budgets() {
    assert_eq!(block_upper(8, 4).unwrap(), 460.0);
    for n in 3..40 {
        assert_eq!(block_upper(n, 4).unwrap(), 12.0 * n as f64 + 364.0);
    }
    let n = 10;
    let expect = 2f64.powi(11) / 4.0 * block_upper(n, 4).unwrap() + 4.0 * (12.0 * 10.0 + 364.0);
    assert_eq!(basic_total_upper(n, 4).unwrap(), expect);
}

#[test]
fn sandwich_on_finite_range() {
    let mut violations = Vec::new();
    for n in 8..=64 {
        let lower = shannon_lower(n, 0).unwrap();
        let simple = simple_lower(n).unwrap();
        for phi in GrowthFn::REGISTRY {
            if let Ok(upper) = ancilla_free_upper(n, phi) {
                if lower > upper.value {
                    violations.push((n, phi));
                }
                assert!(upper.value >= simple, "n={n} phi={phi}");
            }
        }
    }
    assert!(violations.is_empty(), "{violations:?}");
}
