//! Gottesman–Knill simulation of Clifford circuits.
//!
//! The state is a destabilizer/stabilizer frame of `2n` phase-exact Pauli
//! rows. Gates conjugate every row; Pauli measurements use the usual
//! row-replacement update. A measurement outcome is either deterministic or a
//! fair coin, so the classical simulation needs nothing beyond a seeded RNG.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::matrices;
use crate::pauli::{Pauli, PauliString};
use crate::statevec::StateVector;
use crate::MAX_QUBITS;

/// Generators of the Clifford group plus the Pauli gates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CliffordGate {
    H(usize),
    /// Phase gate `diag(1, i)`.
    K(usize),
    Cnot(usize, usize),
    X(usize),
    Y(usize),
    Z(usize),
}

impl CliffordGate {
    fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            CliffordGate::H(q)
            | CliffordGate::K(q)
            | CliffordGate::X(q)
            | CliffordGate::Y(q)
            | CliffordGate::Z(q) => (q, None),
            CliffordGate::Cnot(c, t) => (c, Some(t)),
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        let (a, b) = self.qubits();
        for q in std::iter::once(a).chain(b) {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, n });
            }
        }
        if b == Some(a) {
            return Err(Error::DuplicateTarget(a));
        }
        Ok(())
    }

    /// `U P U†`.
    pub fn conjugate(&self, p: &PauliString) -> Result<PauliString> {
        let n = p.num_qubits();
        self.check(n)?;
        let (mut x, mut z, mut ph) = (p.x_bits(), p.z_bits(), p.phase_exp());
        let bit = |v: u16, q: usize| (v >> q) & 1;
        match *self {
            CliffordGate::H(q) => {
                let (xq, zq) = (bit(x, q), bit(z, q));
                ph += 2 * (xq & zq) as u8;
                x = (x & !(1 << q)) | (zq << q);
                z = (z & !(1 << q)) | (xq << q);
            }
            CliffordGate::K(q) => {
                let xq = bit(x, q);
                ph += xq as u8;
                z ^= xq << q;
            }
            CliffordGate::Cnot(c, t) => {
                x ^= bit(x, c) << t;
                z ^= bit(z, t) << c;
            }
            CliffordGate::X(q) => ph += 2 * bit(z, q) as u8,
            CliffordGate::Y(q) => ph += 2 * (bit(x, q) ^ bit(z, q)) as u8,
            CliffordGate::Z(q) => ph += 2 * bit(x, q) as u8,
        }
        PauliString::from_symplectic(n, x, z, ph)
    }

    /// Applies the gate's unitary to a statevector.
    pub fn apply_to(&self, state: &mut StateVector) -> Result<()> {
        self.check(state.num_qubits())?;
        match *self {
            CliffordGate::H(q) => state.apply_1q(&matrices::hadamard(), q),
            CliffordGate::K(q) => state.apply_1q(&matrices::phase_k(), q),
            CliffordGate::X(q) => state.apply_1q(&matrices::sigma_x(), q),
            CliffordGate::Y(q) => state.apply_1q(&matrices::sigma_y(), q),
            CliffordGate::Z(q) => state.apply_1q(&matrices::sigma_z(), q),
            CliffordGate::Cnot(c, t) => state.apply_cnot(c, t),
        }
    }
}

impl fmt::Display for CliffordGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CliffordGate::H(q) => write!(f, "H {q}"),
            CliffordGate::K(q) => write!(f, "K {q}"),
            CliffordGate::Cnot(c, t) => write!(f, "CNOT {c} {t}"),
            CliffordGate::X(q) => write!(f, "X {q}"),
            CliffordGate::Y(q) => write!(f, "Y {q}"),
            CliffordGate::Z(q) => write!(f, "Z {q}"),
        }
    }
}

/// Outcome of a Pauli measurement on a stabilizer state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Measurement {
    /// Eigenvalue `±1`.
    pub outcome: i8,
    /// Probability of the observed outcome: `1` or `1/2`.
    pub probability: f64,
}

impl Measurement {
    pub fn is_deterministic(&self) -> bool {
        self.probability == 1.0
    }
}

/// Destabilizer/stabilizer frame of an `n`-qubit stabilizer state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    destabilizers: Vec<PauliString>,
    stabilizers: Vec<PauliString>,
}

impl StabilizerTableau {
    /// `|0…0⟩`: stabilizers `Z_j`, destabilizers `X_j`.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::QubitCount(n));
        }
        let destabilizers = (0..n).map(|q| PauliString::single(n, q, Pauli::X)).collect::<Result<_>>()?;
        let stabilizers = (0..n).map(|q| PauliString::single(n, q, Pauli::Z)).collect::<Result<_>>()?;
        Ok(Self { n, destabilizers, stabilizers })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn stabilizers(&self) -> &[PauliString] {
        &self.stabilizers
    }

    pub fn destabilizers(&self) -> &[PauliString] {
        &self.destabilizers
    }

    pub fn apply_gate(&mut self, gate: CliffordGate) -> Result<()> {
        gate.check(self.n)?;
        for row in self.destabilizers.iter_mut().chain(self.stabilizers.iter_mut()) {
            *row = gate.conjugate(row)?;
        }
        debug_assert!(self.check_invariants().is_ok());
        Ok(())
    }

    pub fn apply_gates(&mut self, gates: &[CliffordGate]) -> Result<()> {
        gates.iter().try_for_each(|g| self.apply_gate(*g))
    }

    fn check_observable(&self, p: &PauliString) -> Result<()> {
        if p.num_qubits() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: p.num_qubits() });
        }
        if !p.is_hermitian() {
            return Err(Error::NotHermitian(p.to_string()));
        }
        Ok(())
    }

    /// `Some(±1)` when `±p` belongs to the stabilizer group, `None` when the
    /// outcome would be random. Does not touch the state.
    pub fn deterministic_outcome(&self, p: &PauliString) -> Result<Option<i8>> {
        self.check_observable(p)?;
        for s in &self.stabilizers {
            if !s.commutes(p)? {
                return Ok(None);
            }
        }
        let mut acc = PauliString::identity(self.n)?;
        for (d, s) in self.destabilizers.iter().zip(&self.stabilizers) {
            if !d.commutes(p)? {
                acc = acc.multiply(s)?;
            }
        }
        debug_assert!(acc.same_letters(p));
        Ok(Some(if acc.letter_phase() == p.letter_phase() { 1 } else { -1 }))
    }

    /// Non-destructive measurement of a Hermitian Pauli observable.
    pub fn measure_pauli<R: Rng + ?Sized>(&mut self, p: &PauliString, rng: &mut R) -> Result<Measurement> {
        if let Some(outcome) = self.deterministic_outcome(p)? {
            return Ok(Measurement { outcome, probability: 1.0 });
        }
        let outcome: i8 = if rng.random::<bool>() { 1 } else { -1 };
        self.collapse(p, outcome)?;
        Ok(Measurement { outcome, probability: 0.5 })
    }

    /// Forces outcome `outcome` of a measurement whose result is random.
    /// Errors with [`Error::ZeroProbability`] if `p` is deterministic with the
    /// opposite sign.
    pub fn postselect(&mut self, p: &PauliString, outcome: i8) -> Result<f64> {
        match self.deterministic_outcome(p)? {
            Some(o) if o == outcome => Ok(1.0),
            Some(_) => Err(Error::ZeroProbability),
            None => {
                self.collapse(p, outcome)?;
                Ok(0.5)
            }
        }
    }

    fn collapse(&mut self, p: &PauliString, outcome: i8) -> Result<()> {
        let mut k = None;
        for (i, s) in self.stabilizers.iter().enumerate() {
            if !s.commutes(p)? {
                k = Some(i);
                break;
            }
        }
        let k = k.expect("collapse called on a deterministic observable");
        let pivot = self.stabilizers[k];
        for i in 0..self.n {
            if i != k && !self.stabilizers[i].commutes(p)? {
                self.stabilizers[i] = self.stabilizers[i].multiply(&pivot)?;
            }
            if i != k && !self.destabilizers[i].commutes(p)? {
                self.destabilizers[i] = self.destabilizers[i].multiply(&pivot)?;
            }
        }
        self.destabilizers[k] = pivot;
        self.stabilizers[k] = if outcome == 1 { *p } else { p.negated() };
        debug_assert!(self.check_invariants().is_ok());
        Ok(())
    }

    /// Sequential measurement of pairwise-commuting observables. The
    /// returned syndrome has one `±1` entry per observable.
    pub fn measure_syndrome<R: Rng + ?Sized>(
        &mut self,
        stabs: &[PauliString],
        rng: &mut R,
    ) -> Result<Vec<Measurement>> {
        for (i, a) in stabs.iter().enumerate() {
            self.check_observable(a)?;
            for b in &stabs[..i] {
                if !a.commutes(b)? {
                    return Err(Error::NonCommuting(b.to_string(), a.to_string()));
                }
            }
        }
        stabs.iter().map(|s| self.measure_pauli(s, rng)).collect()
    }

    /// Verifies the symplectic frame: stabilizers commute and are Hermitian,
    /// destabilizer `i` anticommutes only with stabilizer `i`, destabilizers
    /// commute among themselves, and all `2n` rows are independent.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Invalid(msg));
        for (i, s) in self.stabilizers.iter().enumerate() {
            if !s.is_hermitian() {
                return fail(format!("stabilizer {i} = {s} is not Hermitian"));
            }
            for (j, t) in self.stabilizers.iter().enumerate() {
                if !s.commutes(t)? {
                    return fail(format!("stabilizers {i} and {j} anticommute"));
                }
                let d = &self.destabilizers[j];
                if d.commutes(s)? == (i == j) {
                    return fail(format!("destabilizer {j} vs stabilizer {i} has wrong commutation"));
                }
                if !d.commutes(&self.destabilizers[i])? {
                    return fail(format!("destabilizers {i} and {j} anticommute"));
                }
            }
        }
        let rows: Vec<u32> = self
            .destabilizers
            .iter()
            .chain(&self.stabilizers)
            .map(|r| r.x_bits() as u32 | (r.z_bits() as u32) << 16)
            .collect();
        if gf2_rank(rows) != 2 * self.n {
            return fail("rows are linearly dependent".into());
        }
        Ok(())
    }
}

fn gf2_rank(mut rows: Vec<u32>) -> usize {
    let mut rank = 0;
    for bit in 0..32 {
        let mask = 1u32 << bit;
        if let Some(pos) = (rank..rows.len()).find(|&i| rows[i] & mask != 0) {
            rows.swap(rank, pos);
            let pivot = rows[rank];
            for (i, r) in rows.iter_mut().enumerate() {
                if i != rank && *r & mask != 0 {
                    *r ^= pivot;
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Samples one of the six Pauli eigenstates so that the average density
/// matrix is `½(I + r·σ)`. Requires `|r_x| + |r_y| + |r_z| ≤ 1`.
pub fn sample_octahedron_prep<R: Rng + ?Sized>(r: [f64; 3], rng: &mut R) -> Result<StabilizerTableau> {
    let l1: f64 = r.iter().map(|v| v.abs()).sum();
    if l1 > 1.0 + 1e-12 || r.iter().any(|v| !v.is_finite()) {
        return Err(Error::OutsideOctahedron(r));
    }
    // Weight |r_a| on the vertex sign(r_a)·e_a, the rest spread evenly over
    // all six vertices.
    let slack = (1.0 - l1).max(0.0) / 6.0;
    let mut u = rng.random::<f64>();
    let mut choice = (2, 1i8);
    'outer: for axis in 0..3 {
        for sign in [1i8, -1] {
            let w = slack + if (r[axis] >= 0.0) == (sign > 0) { r[axis].abs() } else { 0.0 };
            if u < w {
                choice = (axis, sign);
                break 'outer;
            }
            u -= w;
        }
    }
    let gates: &[CliffordGate] = match choice {
        (0, 1) => &[CliffordGate::H(0)],
        (0, _) => &[CliffordGate::X(0), CliffordGate::H(0)],
        (1, 1) => &[CliffordGate::H(0), CliffordGate::K(0)],
        (1, _) => &[CliffordGate::X(0), CliffordGate::H(0), CliffordGate::K(0)],
        (_, 1) => &[],
        _ => &[CliffordGate::X(0)],
    };
    let mut t = StabilizerTableau::new(1)?;
    t.apply_gates(gates)?;
    Ok(t)
}

/// `len` gates drawn uniformly from `H, K, X, Y, Z` on a random qubit and
/// CNOT on a random ordered pair (CNOT only when `n ≥ 2`).
pub fn random_circuit<R: Rng + ?Sized>(n: usize, len: usize, rng: &mut R) -> Vec<CliffordGate> {
    let kinds = if n >= 2 { 6 } else { 5 };
    (0..len)
        .map(|_| {
            let q = rng.random_range(0..n);
            match rng.random_range(0..kinds) {
                0 => CliffordGate::H(q),
                1 => CliffordGate::K(q),
                2 => CliffordGate::X(q),
                3 => CliffordGate::Y(q),
                4 => CliffordGate::Z(q),
                _ => {
                    let t = (q + rng.random_range(1..n)) % n;
                    CliffordGate::Cnot(q, t)
                }
            }
        })
        .collect()
}

/// A uniformly random Pauli string with random sign, never the identity.
pub fn random_pauli<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PauliString {
    loop {
        let letters: Vec<Pauli> =
            (0..n).map(|_| [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][rng.random_range(0..4)]).collect();
        if letters.iter().any(|l| *l != Pauli::I) {
            return PauliString::from_letters(&letters, rng.random()).expect("length within range");
        }
    }
}

/// One line of a circuit file.
#[derive(Clone, Debug, PartialEq)]
pub enum CircuitOp {
    Gate(CliffordGate),
    Measure(PauliString),
}

/// A Clifford circuit with Pauli measurements, in the line-oriented text
/// format:
///
/// ```text
/// # comment
/// QUBITS 5        (optional; otherwise inferred)
/// H 0
/// K 3
/// CNOT 0 1
/// MEASURE +ZZIXI
/// ```
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub num_qubits: usize,
    pub ops: Vec<CircuitOp>,
}

/// Record of one `MEASURE` line during [`Circuit::run`].
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementRecord {
    pub observable: PauliString,
    pub outcome: i8,
    pub probability: f64,
}

impl Circuit {
    pub fn run<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(StabilizerTableau, Vec<MeasurementRecord>)> {
        let mut t = StabilizerTableau::new(self.num_qubits)?;
        let mut records = Vec::new();
        for op in &self.ops {
            match op {
                CircuitOp::Gate(g) => t.apply_gate(*g)?,
                CircuitOp::Measure(p) => {
                    let m = t.measure_pauli(p, rng)?;
                    records.push(MeasurementRecord { observable: *p, outcome: m.outcome, probability: m.probability });
                }
            }
        }
        Ok((t, records))
    }
}

impl FromStr for Circuit {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut declared = None;
        let mut ops = Vec::new();
        let mut needed = 0usize;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = || Error::Parse { what: "circuit line", input: format!("{}: {raw}", lineno + 1) };
            let mut words = line.split_whitespace();
            let head = words.next().ok_or_else(err)?.to_ascii_uppercase();
            let args: Vec<&str> = words.collect();
            let idx = |i: usize| -> Result<usize> { args.get(i).and_then(|a| a.parse().ok()).ok_or_else(err) };
            let one = |ctor: fn(usize) -> CliffordGate| -> Result<CircuitOp> {
                if args.len() != 1 {
                    return Err(err());
                }
                Ok(CircuitOp::Gate(ctor(idx(0)?)))
            };
            let op = match head.as_str() {
                "QUBITS" => {
                    if args.len() != 1 || declared.is_some() {
                        return Err(err());
                    }
                    declared = Some(idx(0)?);
                    continue;
                }
                "H" => one(CliffordGate::H)?,
                "K" | "S" => one(CliffordGate::K)?,
                "X" => one(CliffordGate::X)?,
                "Y" => one(CliffordGate::Y)?,
                "Z" => one(CliffordGate::Z)?,
                "CNOT" | "CX" => {
                    if args.len() != 2 {
                        return Err(err());
                    }
                    CircuitOp::Gate(CliffordGate::Cnot(idx(0)?, idx(1)?))
                }
                "MEASURE" | "M" => {
                    if args.len() != 1 {
                        return Err(err());
                    }
                    CircuitOp::Measure(args[0].parse().map_err(|_| err())?)
                }
                _ => return Err(err()),
            };
            needed = needed.max(match &op {
                CircuitOp::Gate(g) => {
                    let (a, b) = g.qubits();
                    a.max(b.unwrap_or(0)) + 1
                }
                CircuitOp::Measure(p) => p.num_qubits(),
            });
            ops.push(op);
        }
        let n = declared.unwrap_or(needed);
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::QubitCount(n));
        }
        for op in &ops {
            match op {
                CircuitOp::Gate(g) => g.check(n)?,
                CircuitOp::Measure(p) if p.num_qubits() != n => {
                    return Err(Error::DimensionMismatch { expected: n, got: p.num_qubits() })
                }
                CircuitOp::Measure(_) => {}
            }
        }
        Ok(Circuit { num_qubits: n, ops })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn hadamard_maps_z_to_x() {
        let mut t = StabilizerTableau::new(1).unwrap();
        t.apply_gate(CliffordGate::H(0)).unwrap();
        assert_eq!(t.stabilizers()[0], p("+X"));
    }

    #[test]
    fn phase_gate_maps_x_to_y() {
        assert_eq!(CliffordGate::K(0).conjugate(&p("X")).unwrap(), p("Y"));
        assert_eq!(CliffordGate::K(0).conjugate(&p("Y")).unwrap(), p("-X"));
        assert_eq!(CliffordGate::K(0).conjugate(&p("Z")).unwrap(), p("Z"));
    }

    #[test]
    fn t_sequence_cycles_paulis() {
        // e^{iπ/4} K H: apply H first, then K.
        let seq = [CliffordGate::H(0), CliffordGate::K(0)];
        let conj = |q: PauliString| seq.iter().fold(q, |acc, g| g.conjugate(&acc).unwrap());
        assert_eq!(conj(p("X")), p("Z"));
        assert_eq!(conj(p("Z")), p("Y"));
        assert_eq!(conj(p("Y")), p("X"));
    }

    #[test]
    fn generator_identities_on_tableau() {
        // K² = Z and H K² H = X act identically on every row.
        let mut rng = seeded(4);
        let mut a = StabilizerTableau::new(2).unwrap();
        a.apply_gates(&[CliffordGate::H(0), CliffordGate::Cnot(0, 1), CliffordGate::K(1)]).unwrap();
        a.measure_pauli(&p("XX"), &mut rng).unwrap();
        let mut b = a.clone();
        a.apply_gates(&[CliffordGate::K(0), CliffordGate::K(0)]).unwrap();
        b.apply_gate(CliffordGate::Z(0)).unwrap();
        assert_eq!(a, b);
        let mut c = a.clone();
        a.apply_gates(&[CliffordGate::H(1), CliffordGate::K(1), CliffordGate::K(1), CliffordGate::H(1)]).unwrap();
        c.apply_gate(CliffordGate::X(1)).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn conjugation_matches_matrices() {
        let gates = [
            CliffordGate::H(1),
            CliffordGate::K(0),
            CliffordGate::Cnot(0, 1),
            CliffordGate::Cnot(1, 0),
            CliffordGate::X(0),
            CliffordGate::Y(1),
            CliffordGate::Z(0),
        ];
        for g in gates {
            let u = {
                let mut cols = Vec::new();
                for b in 0..4 {
                    let mut s = StateVector::basis(2, b).unwrap();
                    g.apply_to(&mut s).unwrap();
                    cols.push(s.amplitudes().to_vec());
                }
                nalgebra::DMatrix::from_fn(4, 4, |i, j| cols[j][i])
            };
            for x in 0..4u16 {
                for z in 0..4u16 {
                    let q = PauliString::from_symplectic(2, x, z, 0).unwrap();
                    let want = &u * q.to_matrix() * u.adjoint();
                    let got = g.conjugate(&q).unwrap().to_matrix();
                    assert!((want - got).iter().all(|v| v.norm() < 1e-12), "{g} on {q}");
                }
            }
        }
    }

    #[test]
    fn measuring_z_on_zero_is_deterministic() {
        let mut t = StabilizerTableau::new(1).unwrap();
        let before = t.clone();
        let m = t.measure_pauli(&p("Z"), &mut seeded(0)).unwrap();
        assert_eq!(m, Measurement { outcome: 1, probability: 1.0 });
        assert_eq!(t, before);
        let m = t.measure_pauli(&p("-Z"), &mut seeded(0)).unwrap();
        assert_eq!(m.outcome, -1);
    }

    #[test]
    fn measuring_x_on_zero_is_a_fair_coin() {
        let mut plus = 0;
        for seed in 0..2000 {
            let mut t = StabilizerTableau::new(1).unwrap();
            let m = t.measure_pauli(&p("X"), &mut seeded(seed)).unwrap();
            assert_eq!(m.probability, 0.5);
            assert_eq!(t.stabilizers()[0], if m.outcome == 1 { p("X") } else { p("-X") });
            // A repeated measurement now agrees.
            assert_eq!(t.measure_pauli(&p("X"), &mut seeded(seed + 1)).unwrap().outcome, m.outcome);
            plus += (m.outcome == 1) as i32;
        }
        // 3σ for Binomial(2000, 1/2) is about 67.
        assert!((plus - 1000).abs() < 67, "{plus}");
    }

    #[test]
    fn non_hermitian_observable_rejected() {
        let mut t = StabilizerTableau::new(1).unwrap();
        assert!(matches!(t.measure_pauli(&p("iZ"), &mut seeded(0)), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn syndrome_examples() {
        let mut rng = seeded(2);
        let mut t = StabilizerTableau::new(2).unwrap();
        assert!(t.measure_syndrome(&[], &mut rng).unwrap().is_empty());
        let out = t.measure_syndrome(&[p("ZZ"), p("XX")], &mut rng).unwrap();
        assert_eq!(out[0], Measurement { outcome: 1, probability: 1.0 });
        assert_eq!(out[1].probability, 0.5);
        let bad = t.measure_syndrome(&[p("ZI"), p("XI")], &mut rng);
        assert!(matches!(bad, Err(Error::NonCommuting(_, _))));
    }

    #[test]
    fn five_qubit_code_syndrome_on_zero_state() {
        // Each generator anticommutes with some Z_j except when the state
        // already fixes it; compare with projector norms on the oracle.
        let gens = [p("XZZXI"), p("IXZZX"), p("XIXZZ"), p("ZXIXZ")];
        let mut rng = seeded(8);
        let mut t = StabilizerTableau::new(5).unwrap();
        let mut sv = StateVector::zero(5).unwrap();
        for g in &gens {
            let want = sv.prob_plus(g).unwrap();
            let m = t.measure_pauli(g, &mut rng).unwrap();
            assert_eq!(m.probability, 0.5);
            assert!((want - 0.5).abs() < 1e-12);
            sv.project_pauli(g, m.outcome).unwrap();
        }
    }

    #[test]
    fn postselect_respects_deterministic_outcomes() {
        let mut t = StabilizerTableau::new(1).unwrap();
        assert_eq!(t.postselect(&p("-Z"), 1), Err(Error::ZeroProbability));
        assert_eq!(t.postselect(&p("X"), -1), Ok(0.5));
        assert_eq!(t.stabilizers()[0], p("-X"));
    }

    #[test]
    fn octahedron_vertices_and_center() {
        let mut rng = seeded(12);
        for _ in 0..20 {
            let t = sample_octahedron_prep([0.0, 0.0, 1.0], &mut rng).unwrap();
            assert_eq!(t.stabilizers()[0], p("Z"));
        }
        let mut counts = std::collections::HashMap::new();
        for _ in 0..6000 {
            let t = sample_octahedron_prep([0.0; 3], &mut rng).unwrap();
            *counts.entry(t.stabilizers()[0].to_string()).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 6);
        for (k, v) in counts {
            // mean 1000, sd ≈ 29
            assert!((v as i32 - 1000).abs() < 120, "{k}: {v}");
        }
        assert!(matches!(
            sample_octahedron_prep([0.6, 0.6, 0.0], &mut rng),
            Err(Error::OutsideOctahedron(_))
        ));
    }

    #[test]
    fn octahedron_sampling_reproduces_polarization() {
        let r = [1.0 / 3.0; 3];
        let trials = 100_000;
        let mut rng = seeded(99);
        let mut sum = [0.0; 3];
        for _ in 0..trials {
            let s = sample_octahedron_prep(r, &mut rng).unwrap().stabilizers()[0];
            let sign = s.sign().unwrap() as f64;
            let axis = match s.letter(0) {
                Pauli::X => 0,
                Pauli::Y => 1,
                _ => 2,
            };
            sum[axis] += sign;
        }
        for a in 0..3 {
            let mean = sum[a] / trials as f64;
            // Var of one component ≤ E[s_a²] = P(axis a) = 1/3 + 0 slack here.
            let sd = ((1.0 / 3.0 - r[a] * r[a]) / trials as f64).sqrt();
            assert!((mean - r[a]).abs() < 3.0 * sd, "axis {a}: {mean}");
        }
    }

    #[test]
    fn deterministic_outcomes_are_reproducible() {
        let circuit: Circuit = "H 0\nCNOT 0 1\nMEASURE +XX\nMEASURE ZI\nMEASURE ZZ\n".parse().unwrap();
        let (_, a) = circuit.run(&mut seeded(5)).unwrap();
        let (_, b) = circuit.run(&mut seeded(5)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[0].outcome, 1);
        assert_eq!(a[0].probability, 1.0);
        assert_eq!(a[1].probability, 0.5);
        assert_eq!(a[2], MeasurementRecord { observable: p("ZZ"), outcome: 1, probability: 1.0 });
    }

    #[test]
    fn circuit_parsing() {
        let c: Circuit = "# bell\nQUBITS 3\nH 0\nK 2\ncx 0 1\nMEASURE +ZZI\n".parse().unwrap();
        assert_eq!(c.num_qubits, 3);
        assert_eq!(c.ops.len(), 4);
        assert_eq!(c.ops[2], CircuitOp::Gate(CliffordGate::Cnot(0, 1)));
        let inferred: Circuit = "H 4\n".parse().unwrap();
        assert_eq!(inferred.num_qubits, 5);
        assert!("FOO 1".parse::<Circuit>().is_err());
        assert!("H".parse::<Circuit>().is_err());
        assert!("QUBITS 2\nH 2".parse::<Circuit>().is_err());
        assert!("QUBITS 2\nMEASURE ZZZ".parse::<Circuit>().is_err());
        assert!("CNOT 1 1".parse::<Circuit>().is_err());
    }
}
