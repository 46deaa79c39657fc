//! Gates, circuits and their exhaustive simulation.
//!
//! Lines are 0-indexed. A state is a word whose bit `j` is the value on line `j`
//! (line 0 is the least significant bit). A circuit on `m` lines has `n` designated
//! inputs on lines `0..n`; the remaining `m - n` lines are ancillas that start at 0.
//! The ordered `outputs` list selects which lines are read back as the result.

use std::fmt;

use crate::error::{Error, Result};
use crate::perm::{BooleanMapping, Permutation};

/// Default upper bound on the width enumerated by exhaustive operations.
pub const DEFAULT_CAP: usize = 24;

/// Classification of a gate by its number of controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    Not,
    Cnot,
    Toffoli,
    /// A k-CNOT with k >= 3; not in the basis and must be decomposed before emission.
    Generalized(usize),
}

/// A (generalized) Toffoli gate: flips `target` iff every control line is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    controls: Vec<usize>,
    target: usize,
}

impl Gate {
    pub fn new(controls: Vec<usize>, target: usize) -> Result<Self> {
        for (i, &c) in controls.iter().enumerate() {
            if c == target {
                return Err(Error::structural(format!(
                    "control {c} coincides with target"
                )));
            }
            if controls[..i].contains(&c) {
                return Err(Error::structural(format!("duplicate control {c}")));
            }
        }
        Ok(Gate { controls, target })
    }

    pub fn not(target: usize) -> Self {
        Gate {
            controls: Vec::new(),
            target,
        }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        assert_ne!(control, target, "CNOT control equals target");
        Gate {
            controls: vec![control],
            target,
        }
    }

    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Self {
        assert!(
            c1 != c2 && c1 != target && c2 != target,
            "2-CNOT lines must be distinct"
        );
        Gate {
            controls: vec![c1, c2],
            target,
        }
    }

    pub fn controls(&self) -> &[usize] {
        &self.controls
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn kind(&self) -> GateKind {
        match self.controls.len() {
            0 => GateKind::Not,
            1 => GateKind::Cnot,
            2 => GateKind::Toffoli,
            k => GateKind::Generalized(k),
        }
    }

    /// Membership in the basis {NOT, CNOT, 2-CNOT}.
    pub fn is_basis(&self) -> bool {
        self.controls.len() <= 2
    }

    /// Largest line index the gate touches.
    pub fn max_line(&self) -> usize {
        self.controls
            .iter()
            .copied()
            .chain(std::iter::once(self.target))
            .max()
            .unwrap_or(self.target)
    }

    pub fn touches(&self, line: usize) -> bool {
        self.target == line || self.controls.contains(&line)
    }

    /// Control mask for word-level application; every line must be below 64.
    pub fn control_mask(&self) -> u64 {
        self.controls.iter().fold(0u64, |m, &c| m | (1u64 << c))
    }

    /// Applies the gate to a state packed in a machine word (all lines < 64).
    #[inline]
    pub fn apply_word(&self, x: u64) -> u64 {
        let mask = self.control_mask();
        if x & mask == mask {
            x ^ (1u64 << self.target)
        } else {
            x
        }
    }

    /// Applies the gate to a state in place, checking every index.
    pub fn apply(&self, state: &mut State) -> Result<()> {
        if self.max_line() >= state.width() {
            return Err(Error::structural(format!(
                "gate touches line {} but state has width {}",
                self.max_line(),
                state.width()
            )));
        }
        if self.controls.iter().all(|&c| state.get(c)) {
            state.flip(self.target);
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            GateKind::Not => write!(f, "NOT({})", self.target),
            _ => {
                let cs: Vec<String> = self.controls.iter().map(|c| c.to_string()).collect();
                write!(f, "C[{}]({})", cs.join(","), self.target)
            }
        }
    }
}

/// Binary word of arbitrary width; bit `j` is line `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct State {
    width: usize,
    words: Vec<u64>,
}

impl State {
    pub fn zeros(width: usize) -> Self {
        State {
            width,
            words: vec![0; width.div_ceil(64).max(1)],
        }
    }

    /// State whose low 64 lines are taken from `value`; bits beyond `width` must be 0.
    pub fn from_word(width: usize, value: u64) -> Result<Self> {
        if width < 64 && value >> width != 0 {
            return Err(Error::structural(format!(
                "value {value} does not fit in {width} lines"
            )));
        }
        let mut s = State::zeros(width);
        s.words[0] = value;
        Ok(s)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, line: usize) -> bool {
        (self.words[line / 64] >> (line % 64)) & 1 == 1
    }

    pub fn set(&mut self, line: usize, value: bool) {
        let bit = 1u64 << (line % 64);
        if value {
            self.words[line / 64] |= bit;
        } else {
            self.words[line / 64] &= !bit;
        }
    }

    pub fn flip(&mut self, line: usize) {
        self.words[line / 64] ^= 1u64 << (line % 64);
    }

    /// Packed value of lines `0..min(width, 64)`.
    pub fn low_word(&self) -> u64 {
        self.words[0]
    }

    /// Value as a single word, if the width allows it.
    pub fn to_word(&self) -> Option<u64> {
        (self.width <= 64).then(|| self.words[0])
    }

    /// Lines currently at 1, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.width).filter(move |&j| self.get(j))
    }
}

impl fmt::Display for State {
    /// Binary, most significant line first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.width)
            .rev()
            .map(|j| if self.get(j) { '1' } else { '0' })
            .collect();
        f.write_str(&s)
    }
}

/// Pure gate application.
pub fn apply_gate(gate: &Gate, state: &State) -> Result<State> {
    let mut out = state.clone();
    gate.apply(&mut out)?;
    Ok(out)
}

/// An ordered gate sequence over `lines` lines with `inputs` designated inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    lines: usize,
    inputs: usize,
    outputs: Vec<usize>,
    gates: Vec<Gate>,
}

impl Circuit {
    /// Empty circuit whose outputs are the input lines in order.
    pub fn new(lines: usize, inputs: usize) -> Result<Self> {
        Circuit::with_parts(lines, inputs, (0..inputs).collect(), Vec::new())
    }

    pub fn with_parts(
        lines: usize,
        inputs: usize,
        outputs: Vec<usize>,
        gates: Vec<Gate>,
    ) -> Result<Self> {
        if inputs > lines {
            return Err(Error::structural(format!(
                "{inputs} inputs exceed {lines} lines"
            )));
        }
        let mut c = Circuit {
            lines,
            inputs,
            outputs: Vec::new(),
            gates: Vec::with_capacity(gates.len()),
        };
        c.set_outputs(outputs)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn set_outputs(&mut self, outputs: Vec<usize>) -> Result<()> {
        if outputs.len() != self.inputs {
            return Err(Error::structural(format!(
                "expected {} outputs, got {}",
                self.inputs,
                outputs.len()
            )));
        }
        for (i, &o) in outputs.iter().enumerate() {
            if o >= self.lines {
                return Err(Error::structural(format!(
                    "output line {o} out of range for {} lines",
                    self.lines
                )));
            }
            if outputs[..i].contains(&o) {
                return Err(Error::structural(format!("duplicate output line {o}")));
            }
        }
        self.outputs = outputs;
        Ok(())
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if gate.max_line() >= self.lines {
            return Err(Error::structural(format!(
                "gate {gate} touches line {} of a {}-line circuit",
                gate.max_line(),
                self.lines
            )));
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend<I: IntoIterator<Item = Gate>>(&mut self, gates: I) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    pub fn lines(&self) -> usize {
        self.lines
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn ancillas(&self) -> usize {
        self.lines - self.inputs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Circuit complexity: number of gates.
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn is_basis(&self) -> bool {
        self.gates.iter().all(Gate::is_basis)
    }
}

/// Runs the circuit on one input word.
///
/// Returns the output word gathered from the circuit's output list and the final
/// state of every line.
pub fn simulate(circuit: &Circuit, input: u64) -> Result<(u64, State)> {
    let n = circuit.inputs();
    if n > 63 {
        return Err(Error::Capacity(format!("{n} inputs do not fit in a word")));
    }
    if input >> n != 0 {
        return Err(Error::structural(format!(
            "input {input} out of range for {n} inputs"
        )));
    }
    let mut state = State::from_word(circuit.lines(), input)?;
    for g in circuit.gates() {
        g.apply(&mut state)?;
    }
    let out = circuit
        .outputs()
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &line)| {
            acc | (u64::from(state.get(line)) << i)
        });
    Ok((out, state))
}

/// Value of every line for every input, computed bit-parallel.
///
/// Column `line` holds one bit per input word `w` in `0..2^width_enumerated`.
#[derive(Debug, Clone)]
pub struct LineTable {
    enumerated: usize,
    columns: Vec<Vec<u64>>,
}

impl LineTable {
    /// Sweeps all `2^enumerated` assignments of lines `0..enumerated`, other lines 0.
    fn run(lines: usize, enumerated: usize, gates: &[Gate], cap: usize) -> Result<Self> {
        if enumerated > cap {
            return Err(Error::Capacity(format!(
                "exhaustive sweep over {enumerated} lines exceeds cap {cap}"
            )));
        }
        let points = 1usize << enumerated;
        let words = points.div_ceil(64);
        let mut columns = vec![vec![0u64; words]; lines];
        for (j, col) in columns.iter_mut().enumerate().take(enumerated) {
            for (wi, word) in col.iter_mut().enumerate() {
                let base = wi * 64;
                let mut v = 0u64;
                for b in 0..64.min(points - base) {
                    if ((base + b) >> j) & 1 == 1 {
                        v |= 1u64 << b;
                    }
                }
                *word = v;
            }
        }
        let tail_mask = if points.is_multiple_of(64) {
            u64::MAX
        } else {
            (1u64 << (points % 64)) - 1
        };
        let mut scratch = vec![0u64; words];
        for g in gates {
            if g.max_line() >= lines {
                return Err(Error::structural(format!("gate {g} out of range")));
            }
            scratch.iter_mut().for_each(|w| *w = u64::MAX);
            for &c in g.controls() {
                for (s, &v) in scratch.iter_mut().zip(&columns[c]) {
                    *s &= v;
                }
            }
            if let Some(last) = scratch.last_mut() {
                *last &= tail_mask;
            }
            for (t, &s) in columns[g.target()].iter_mut().zip(&scratch) {
                *t ^= s;
            }
        }
        Ok(LineTable {
            enumerated,
            columns,
        })
    }

    /// Sweep over the circuit's inputs with ancillas at 0.
    pub fn for_inputs(circuit: &Circuit, cap: usize) -> Result<Self> {
        LineTable::run(circuit.lines(), circuit.inputs(), circuit.gates(), cap)
    }

    /// Sweep over every line of the circuit treated as an input.
    pub fn for_all_lines(circuit: &Circuit, cap: usize) -> Result<Self> {
        LineTable::run(circuit.lines(), circuit.lines(), circuit.gates(), cap)
    }

    pub fn points(&self) -> usize {
        1usize << self.enumerated
    }

    pub fn value(&self, line: usize, point: usize) -> bool {
        (self.columns[line][point / 64] >> (point % 64)) & 1 == 1
    }

    /// Gathers the listed lines at `point` into a word, first line lowest.
    pub fn gather(&self, lines: &[usize], point: usize) -> usize {
        lines.iter().enumerate().fold(0usize, |acc, (i, &l)| {
            acc | (usize::from(self.value(l, point)) << i)
        })
    }
}

/// The mapping the circuit realizes on its inputs (ancillas zero, outputs projected).
///
/// The cap limits the number of enumerated inputs.
pub fn realized_mapping(circuit: &Circuit, cap: usize) -> Result<BooleanMapping> {
    let table = LineTable::for_inputs(circuit, cap)?;
    let images = (0..table.points())
        .map(|w| table.gather(circuit.outputs(), w))
        .collect();
    BooleanMapping::new(circuit.inputs(), images)
}

/// The permutation of all `2^m` line states induced by the gate sequence.
pub fn circuit_permutation(circuit: &Circuit, cap: usize) -> Result<Permutation> {
    let table = LineTable::for_all_lines(circuit, cap)?;
    let all: Vec<usize> = (0..circuit.lines()).collect();
    let images = (0..table.points()).map(|w| table.gather(&all, w)).collect();
    Permutation::from_images(circuit.lines(), images)
}

/// Same circuit with the gate order reversed; each gate is its own inverse.
pub fn invert(circuit: &Circuit) -> Circuit {
    Circuit {
        lines: circuit.lines,
        inputs: circuit.inputs,
        outputs: circuit.outputs.clone(),
        gates: circuit.gates.iter().rev().cloned().collect(),
    }
}

/// Gate counts by kind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GateCountReport {
    pub not: usize,
    pub cnot: usize,
    pub toffoli: usize,
    pub generalized: usize,
    pub total: usize,
    pub ancillas: usize,
}

impl GateCountReport {
    pub fn for_gates<'a, I: IntoIterator<Item = &'a Gate>>(gates: I, ancillas: usize) -> Self {
        let mut r = GateCountReport {
            ancillas,
            ..Default::default()
        };
        for g in gates {
            match g.kind() {
                GateKind::Not => r.not += 1,
                GateKind::Cnot => r.cnot += 1,
                GateKind::Toffoli => r.toffoli += 1,
                GateKind::Generalized(_) => r.generalized += 1,
            }
            r.total += 1;
        }
        r
    }
}

impl fmt::Display for GateCountReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "not {}", self.not)?;
        writeln!(f, "cnot {}", self.cnot)?;
        writeln!(f, "toffoli {}", self.toffoli)?;
        writeln!(f, "generalized {}", self.generalized)?;
        writeln!(f, "total {}", self.total)?;
        write!(f, "ancillas {}", self.ancillas)
    }
}

pub fn count_gates(circuit: &Circuit) -> GateCountReport {
    GateCountReport::for_gates(circuit.gates(), circuit.ancillas())
}

/// Operations of the classical basis {not, xor, and}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetOp {
    Negation(usize),
    Xor(usize, usize),
    Conjunction(usize, usize),
}

/// Gates writing `op` of the source lines onto `fresh`, which must currently hold 0.
pub fn basis_gadget(op: GadgetOp, fresh: usize) -> Vec<Gate> {
    match op {
        GadgetOp::Negation(a) => vec![Gate::not(fresh), Gate::cnot(a, fresh)],
        GadgetOp::Xor(a, b) => vec![Gate::cnot(a, fresh), Gate::cnot(b, fresh)],
        GadgetOp::Conjunction(a, b) => vec![Gate::toffoli(a, b, fresh)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(width: usize, v: u64) -> State {
        State::from_word(width, v).unwrap()
    }

    #[test]
    fn not_sets_bit_zero() {
        let s = apply_gate(&Gate::not(0), &word(2, 0b00)).unwrap();
        assert_eq!(s.low_word(), 0b01);
    }

    #[test]
    fn toffoli_needs_both_controls() {
        let g = Gate::toffoli(0, 1, 2);
        assert_eq!(apply_gate(&g, &word(3, 0b011)).unwrap().low_word(), 0b111);
        assert_eq!(apply_gate(&g, &word(3, 0b001)).unwrap().low_word(), 0b001);
    }

    #[test]
    fn out_of_range_gate_is_structural_error() {
        let err = apply_gate(&Gate::cnot(0, 3), &word(2, 0)).unwrap_err();
        assert!(matches!(err, Error::Structural(_)));
    }

    #[test]
    fn gate_rejects_duplicate_or_overlapping_lines() {
        assert!(Gate::new(vec![0, 0], 1).is_err());
        assert!(Gate::new(vec![2], 2).is_err());
        assert_eq!(
            Gate::new(vec![0, 1, 2], 3).unwrap().kind(),
            GateKind::Generalized(3)
        );
    }

    #[test]
    fn simulate_examples() {
        let empty = Circuit::new(3, 3).unwrap();
        assert_eq!(simulate(&empty, 0b101).unwrap().0, 0b101);

        let cnot = Circuit::with_parts(2, 2, vec![0, 1], vec![Gate::cnot(0, 1)]).unwrap();
        assert_eq!(simulate(&cnot, 0b01).unwrap().0, 0b11);

        let anc = Circuit::with_parts(3, 2, vec![0, 1], vec![Gate::not(2), Gate::toffoli(0, 2, 1)])
            .unwrap();
        let (out, state) = simulate(&anc, 0b01).unwrap();
        assert_eq!(out, 0b11);
        assert!(state.get(2));
        assert!(simulate(&anc, 0b100).is_err());
    }

    #[test]
    fn realized_mapping_examples() {
        let id = Circuit::new(3, 3).unwrap();
        assert_eq!(
            realized_mapping(&id, DEFAULT_CAP).unwrap().images(),
            &[0, 1, 2, 3, 4, 5, 6, 7]
        );
        let not = Circuit::with_parts(1, 1, vec![0], vec![Gate::not(0)]).unwrap();
        assert_eq!(
            realized_mapping(&not, DEFAULT_CAP).unwrap().images(),
            &[1, 0]
        );
        let wide = Circuit::new(30, 25).unwrap();
        assert!(matches!(
            realized_mapping(&wide, DEFAULT_CAP),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn circuit_permutation_examples() {
        let not = Circuit::with_parts(1, 1, vec![0], vec![Gate::not(0)]).unwrap();
        assert_eq!(
            circuit_permutation(&not, DEFAULT_CAP).unwrap().images(),
            &[1, 0]
        );
        let cnot = Circuit::with_parts(2, 2, vec![0, 1], vec![Gate::cnot(0, 1)]).unwrap();
        assert_eq!(
            circuit_permutation(&cnot, DEFAULT_CAP).unwrap().images(),
            &[0, 3, 2, 1]
        );
    }

    #[test]
    fn count_gates_by_kind() {
        assert_eq!(
            count_gates(&Circuit::new(2, 2).unwrap()),
            GateCountReport::default()
        );
        let c = Circuit::with_parts(
            3,
            3,
            vec![0, 1, 2],
            vec![Gate::not(0), Gate::cnot(0, 1), Gate::toffoli(0, 1, 2)],
        )
        .unwrap();
        let r = count_gates(&c);
        assert_eq!(
            (r.not, r.cnot, r.toffoli, r.generalized, r.total),
            (1, 1, 1, 0, 3)
        );
    }

    #[test]
    fn gadgets_compute_their_operation() {
        for a in 0..2u64 {
            for b in 0..2u64 {
                let x = a | (b << 1);
                let cases = [
                    (GadgetOp::Negation(0), 1 ^ a),
                    (GadgetOp::Xor(0, 1), a ^ b),
                    (GadgetOp::Conjunction(0, 1), a & b),
                ];
                for (op, want) in cases {
                    let gates = basis_gadget(op, 2);
                    assert!(gates.len() <= 2);
                    let c = Circuit::with_parts(3, 2, vec![0, 1], gates).unwrap();
                    let (out, st) = simulate(&c, x).unwrap();
                    assert_eq!(out, x, "sources unchanged");
                    assert_eq!(u64::from(st.get(2)), want, "{op:?} on {x:02b}");
                }
            }
        }
    }

    #[test]
    fn invert_single_gate_is_itself() {
        let c = Circuit::with_parts(2, 2, vec![0, 1], vec![Gate::cnot(1, 0)]).unwrap();
        assert_eq!(invert(&c), c);
    }
}
