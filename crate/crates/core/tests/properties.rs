mod common;

use common::{arb_circuit, arb_gates, is_even_by_inversions, pack, run_circuit, run_state};
use proptest::prelude::*;
use rcsynth::circuit::{
    circuit_permutation, invert, realized_mapping, simulate, State, DEFAULT_CAP,
};
use rcsynth::format::{
    parse_circuit, parse_mapping, parse_permutation, serialize_circuit, serialize_mapping,
    serialize_permutation,
};
use rcsynth::instances::{random_even_permutation, random_mapping, random_permutation, rng};
use rcsynth::perm::{
    self, cycle_decomposition, from_cycles, moved_points, recompose, transposition_sequence,
    transposition_stream,
};
use rcsynth::{Circuit, Parity, Permutation};

proptest! {
    #[test]
    fn gate_is_an_involution(gates in arb_gates(7, 6, 1), x in 0u64..128) {
        let g = &gates.first().cloned().unwrap_or_else(|| rcsynth::Gate::not(0));
        prop_assert_eq!(g.apply_word(g.apply_word(x)), x);
        let mut s = State::from_word(7, x).unwrap();
        g.apply(&mut s).unwrap();
        g.apply(&mut s).unwrap();
        prop_assert_eq!(s.low_word(), x);
    }

    #[test]
    fn gate_only_changes_its_target(gates in arb_gates(8, 7, 1), x in 0u64..256) {
        if let Some(g) = gates.first() {
            let diff = g.apply_word(x) ^ x;
            prop_assert!(diff == 0 || diff == 1 << g.target());
            let fires = g.controls().iter().all(|&c| (x >> c) & 1 == 1);
            prop_assert_eq!(diff != 0, fires);
        }
    }

    #[test]
    fn basis_circuits_on_four_or_more_lines_are_even(
        (m, gates) in (4usize..=7).prop_flat_map(|m| (Just(m), arb_gates(m, 2, 30)))
    ) {
        let c = Circuit::with_parts(m, m, (0..m).collect(), gates).unwrap();
        let p = circuit_permutation(&c, DEFAULT_CAP).unwrap();
        prop_assert_eq!(perm::parity(&p), Parity::Even);
        prop_assert!(is_even_by_inversions(p.images()));
    }

    #[test]
    fn realized_mapping_matches_reference_run(c in arb_circuit(8, 4, 40)) {
        let f = realized_mapping(&c, DEFAULT_CAP).unwrap();
        for x in 0..1usize << c.inputs() {
            let want = run_circuit(&c, x);
            prop_assert_eq!(f.apply(x), want);
            prop_assert_eq!(simulate(&c, x as u64).unwrap().0 as usize, want);
        }
    }

    #[test]
    fn circuit_permutation_matches_full_state_run(c in arb_circuit(7, 5, 30)) {
        let p = circuit_permutation(&c, DEFAULT_CAP).unwrap();
        for x in 0..1usize << c.lines() {
            prop_assert_eq!(p.apply(x), pack(&run_state(c.gates(), c.lines(), x)));
        }
        let back = circuit_permutation(&invert(&c), DEFAULT_CAP).unwrap();
        prop_assert!(p.then(&back).is_identity());
    }

    #[test]
    fn circuit_text_round_trip(c in arb_circuit(9, 5, 30)) {
        let text = serialize_circuit(&c, true).unwrap();
        prop_assert_eq!(parse_circuit(&text, true).unwrap(), c.clone());
        if c.is_basis() {
            prop_assert_eq!(parse_circuit(&serialize_circuit(&c, false).unwrap(), false).unwrap(), c);
        }
    }

    #[test]
    fn table_files_round_trip(n in 1usize..=7, seed in any::<u64>()) {
        let p = random_permutation(n, &mut rng(seed));
        prop_assert_eq!(parse_permutation(&serialize_permutation(&p)).unwrap(), p);
        let f = random_mapping(n, &mut rng(seed));
        prop_assert_eq!(parse_mapping(&serialize_mapping(&f)).unwrap(), f);
    }

    #[test]
    fn parity_agrees_with_inversion_count(n in 1usize..=6, seed in any::<u64>()) {
        let p = random_permutation(n, &mut rng(seed));
        let even = is_even_by_inversions(p.images());
        prop_assert_eq!(perm::parity(&p) == Parity::Even, even);
        prop_assert_eq!(transposition_sequence(&p).len().is_multiple_of(2), even);
    }

    #[test]
    fn cycles_rebuild_the_permutation(n in 1usize..=7, seed in any::<u64>()) {
        let p = random_permutation(n, &mut rng(seed));
        let cycles = cycle_decomposition(&p);
        for c in &cycles {
            prop_assert!(c.len() >= 2);
            prop_assert_eq!(c[0], *c.iter().min().unwrap());
        }
        prop_assert!(cycles.windows(2).all(|w| w[0][0] < w[1][0]));
        prop_assert_eq!(from_cycles(n, &cycles).unwrap(), p.clone());
        prop_assert_eq!(cycles.iter().map(Vec::len).sum::<usize>(), moved_points(&p).len());
    }

    #[test]
    fn stream_recomposes_with_independent_groups(n in 3usize..=8, half in prop::sample::select(vec![2usize, 4, 8]), seed in any::<u64>()) {
        let p = random_even_permutation(n, &mut rng(seed));
        let groups = transposition_stream(&p, half).unwrap();
        // full groups first, then pairs for the residual
        let full = groups.iter().take_while(|g| g.len() == half).count();
        prop_assert!(groups[full..].iter().all(|g| g.len() == 2));
        for g in &groups {
            let members = g.members();
            for i in 0..members.len() {
                for j in i + 1..members.len() {
                    prop_assert!(members[i].is_independent_of(&members[j]));
                }
            }
        }
        prop_assert_eq!(recompose(n, &groups).unwrap(), p);
    }
}

#[test]
fn odd_permutations_have_no_stream() {
    let p =
        Permutation::from_transpositions(4, &[rcsynth::Transposition::new(0, 1).unwrap()]).unwrap();
    assert!(transposition_stream(&p, 2).is_err());
}
