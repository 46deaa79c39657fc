//! Reference implementations shared by the integration tests. They avoid the
//! library's bit-parallel machinery so they can serve as independent oracles.
#![allow(dead_code)]

use std::collections::HashSet;

use proptest::prelude::*;
use rcsynth::{Circuit, Gate};

/// Runs `gates` on a full `m`-line state held as one bool per line.
pub fn run_state(gates: &[Gate], m: usize, x: usize) -> Vec<bool> {
    let mut state: Vec<bool> = (0..m)
        .map(|j| x.checked_shr(j as u32).unwrap_or(0) & 1 == 1)
        .collect();
    for g in gates {
        if g.controls().iter().all(|&l| state[l]) {
            state[g.target()] = !state[g.target()];
        }
    }
    state
}

pub fn pack(bits: &[bool]) -> usize {
    bits.iter()
        .enumerate()
        .map(|(i, &b)| (b as usize) << i)
        .sum()
}

/// Output of `c` on input `x`: zero-padded, run, then read through the outputs list.
pub fn run_circuit(c: &Circuit, x: usize) -> usize {
    let state = run_state(c.gates(), c.lines(), x);
    let read: Vec<bool> = c.outputs().iter().map(|&o| state[o]).collect();
    pack(&read)
}

/// Even iff the number of inversions is even.
pub fn is_even_by_inversions(images: &[usize]) -> bool {
    let mut inversions = 0usize;
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            if images[i] > images[j] {
                inversions += 1;
            }
        }
    }
    inversions.is_multiple_of(2)
}

/// Distinct permutations of `Z_2^n` realized by single NOT, CNOT and 2-CNOT gates.
pub fn enumerate_basis_gates(n: usize) -> usize {
    let mut seen = HashSet::new();
    for t in 0..n {
        for c1 in 0..=n {
            for c2 in 0..=n {
                let mut controls: Vec<usize> = [c1, c2].into_iter().filter(|&c| c < n).collect();
                controls.sort_unstable();
                controls.dedup();
                if controls.contains(&t) {
                    continue;
                }
                seen.insert((controls, t));
            }
        }
    }
    seen.len()
}

/// Picks distinct lines from `m` by walking offsets modulo `m`.
fn distinct(m: usize, picks: &[usize]) -> Vec<usize> {
    let mut free: Vec<usize> = (0..m).collect();
    picks.iter().map(|&p| free.remove(p % free.len())).collect()
}

/// Random gate on `m` lines with at most `max_controls` controls.
pub fn gate_from(m: usize, arity: usize, picks: &[usize; 8]) -> Gate {
    let arity = arity.min(m - 1);
    let lines = distinct(m, &picks[..arity + 1]);
    Gate::new(lines[1..].to_vec(), lines[0]).unwrap()
}

pub fn arb_gates(
    m: usize,
    max_controls: usize,
    max_len: usize,
) -> impl Strategy<Value = Vec<Gate>> {
    prop::collection::vec((0..=max_controls, any::<[usize; 8]>()), 0..=max_len)
        .prop_map(move |raw| raw.iter().map(|(a, p)| gate_from(m, *a, p)).collect())
}

/// Circuit with `m` lines, `n` inputs and a shuffled outputs list.
pub fn arb_circuit(
    max_lines: usize,
    max_controls: usize,
    max_len: usize,
) -> impl Strategy<Value = Circuit> {
    (1..=max_lines)
        .prop_flat_map(move |m| {
            (
                Just(m),
                1..=m,
                arb_gates(m, max_controls, max_len),
                any::<[usize; 8]>(),
            )
        })
        .prop_map(|(m, n, gates, picks)| {
            let mut offsets = picks.to_vec();
            offsets.resize(n, 0);
            let outputs = distinct(m, &offsets);
            Circuit::with_parts(m, n, outputs, gates).unwrap()
        })
}
