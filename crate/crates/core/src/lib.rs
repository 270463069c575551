//! Simulation of the magic-state model of quantum computation.
//!
//! Ideal operations are Clifford unitaries, `|0⟩` preparation and Pauli
//! measurements, all simulated exactly by the stabilizer [`tableau`]. The only
//! noisy resource is a one-qubit ancilla ([`magic::Qubit1State`]). Two
//! distillation protocols purify such ancillas toward magic states:
//!
//! * the 5-qubit code protocol for T-type states, and
//! * the 15-qubit Reed–Muller CSS protocol for H-type states.
//!
//! Their closed-form error maps live in [`distill`] and are cross-checked by
//! Monte Carlo runs on the dense [`statevec`] oracle. [`inject`] turns
//! distilled states into non-Clifford phase gates.
//!
//! The `book/` directory at the repository root walks through each piece; its
//! code listings are compiled as doctests of this crate.

pub mod codes;
pub mod distill;
pub mod error;
pub mod inject;
pub mod magic;
pub mod matrices;
pub mod pauli;
pub mod rng;
pub mod statevec;
pub mod tableau;

pub use error::{Error, Result};
pub use pauli::{Pauli, PauliString};
pub use statevec::{ProjectorSpec, StateVector};
pub use tableau::{CliffordGate, StabilizerTableau};

/// Largest register handled by the tableau and the statevector oracle.
pub const MAX_QUBITS: usize = 16;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/stabilizers.md")]
    mod stabilizers {}
    #[doc = include_str!("../../../book/src/magic_states.md")]
    mod magic_states {}
    #[doc = include_str!("../../../book/src/five_qubit.md")]
    mod five_qubit {}
    #[doc = include_str!("../../../book/src/fifteen_qubit.md")]
    mod fifteen_qubit {}
    #[doc = include_str!("../../../book/src/injection.md")]
    mod injection {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
