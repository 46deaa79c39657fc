//! Synthesis of reversible circuits over NOT, CNOT and 2-CNOT gates.
//!
//! * [`circuit`]: gates, circuits, exhaustive simulation and gate counting;
//! * [`perm`]: permutations of `Z_2^n`, parity and transposition streams;
//! * [`toffoli`]: k-CNOT replacement with borrowed, clean or garbage helpers;
//! * [`synth_basic`]: ancilla-free synthesis of even permutations by blocks of
//!   independent transpositions;
//! * [`synth_lupanov`]: synthesis of arbitrary mappings with many ancillas;
//! * [`bounds`]: closed-form lower and upper bounds on circuit size;
//! * [`format`] and [`instances`]: file formats and seeded random inputs.

pub mod bounds;
pub mod circuit;
pub mod error;
pub mod format;
pub mod growth;
pub mod instances;
pub mod perm;
pub mod synth_basic;
pub mod synth_lupanov;
pub mod toffoli;

pub use circuit::{Circuit, Gate, GateCountReport, GateKind, State};
pub use error::{Error, Result};
pub use growth::GrowthFn;
pub use perm::{BooleanMapping, Parity, Permutation, Transposition, TranspositionGroup};
