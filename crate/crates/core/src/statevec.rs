//! Dense statevector simulation, used as the ground-truth oracle.
//!
//! Amplitudes are indexed with qubit 0 as the most significant bit, so the
//! basis state `|b_0 b_1 … b_{n-1}⟩` lives at index `Σ b_j 2^{n-1-j}`. That
//! keeps qubit 0 the leftmost tensor factor, matching [`PauliString`].
//!
//! Mixed inputs are never stored as density matrices. Protocol drivers sample
//! pure components of a diagonal ensemble instead.

use nalgebra::{DMatrix, Matrix2};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrices::{c, unitarity_error, C64};
use crate::pauli::{i_pow, reverse_bits, PauliString};
use crate::MAX_QUBITS;

/// Working tolerance for normalization checks.
pub const NORM_TOL: f64 = 1e-9;
/// Tolerance for unitarity of user-supplied matrices.
pub const UNITARY_TOL: f64 = 1e-12;

/// A normalized pure state of `n ≤ 16` qubits.
#[derive(Clone, Debug)]
pub struct StateVector {
    n: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_n(n)?;
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::Invalid(format!("basis index {index} >= {dim}")));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = c(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Wraps amplitudes that must already be normalized to within [`NORM_TOL`].
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let n = dim_to_n(amps.len())?;
        let s = Self { n, amps };
        let norm = s.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(s)
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        let n = dim_to_n(amps.len())?;
        let mut s = Self { n, amps };
        let norm = s.norm();
        if norm < 1e-300 {
            return Err(Error::ZeroProbability);
        }
        s.scale(1.0 / norm);
        Ok(s)
    }

    /// Tensor product of one-qubit states `[a_j, b_j]`, qubit 0 first.
    pub fn product(factors: &[[C64; 2]]) -> Result<Self> {
        check_n(factors.len())?;
        let mut amps = vec![c(1.0, 0.0)];
        for f in factors {
            let norm = (f[0].norm_sqr() + f[1].norm_sqr()).sqrt();
            if (norm - 1.0).abs() > NORM_TOL {
                return Err(Error::NotNormalized(norm));
            }
            amps = amps.iter().flat_map(|a| [a * f[0], a * f[1]]).collect();
        }
        Ok(Self { n: factors.len(), amps })
    }

    /// Haar-random state (normalized complex Gaussian amplitudes).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        check_n(n)?;
        let amps = (0..1usize << n)
            .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::normalized(amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn scale(&mut self, k: f64) {
        for a in &mut self.amps {
            *a *= k;
        }
    }

    fn renormalize(&mut self) -> Result<()> {
        let norm = self.norm();
        if norm < 1e-300 {
            return Err(Error::ZeroProbability);
        }
        self.scale(1.0 / norm);
        Ok(())
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::QubitOutOfRange { index: q, n: self.n });
        }
        Ok(())
    }

    #[inline]
    fn bit(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    /// Applies a `2^k × 2^k` unitary to the listed target qubits, the first
    /// target being the most significant within the matrix.
    pub fn apply_unitary(&mut self, u: &DMatrix<C64>, targets: &[usize]) -> Result<()> {
        let k = targets.len();
        if k == 0 || u.nrows() != 1 << k || u.ncols() != 1 << k {
            return Err(Error::Invalid(format!(
                "{}x{} matrix cannot act on {k} targets",
                u.nrows(),
                u.ncols()
            )));
        }
        for (i, &t) in targets.iter().enumerate() {
            self.check_qubit(t)?;
            if targets[..i].contains(&t) {
                return Err(Error::DuplicateTarget(t));
            }
        }
        let dev = unitarity_error(u);
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
        let masks: Vec<usize> = targets.iter().map(|&t| self.bit(t)).collect();
        let all: usize = masks.iter().sum();
        let offsets: Vec<usize> = (0..1usize << k)
            .map(|sub| {
                (0..k).filter(|&i| sub & (1 << (k - 1 - i)) != 0).map(|i| masks[i]).sum()
            })
            .collect();
        let mut buf = vec![C64::new(0.0, 0.0); 1 << k];
        for base in 0..self.amps.len() {
            if base & all != 0 {
                continue;
            }
            for (slot, off) in buf.iter_mut().zip(&offsets) {
                *slot = self.amps[base + off];
            }
            for (row, off) in offsets.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for (col, v) in buf.iter().enumerate() {
                    acc += u[(row, col)] * v;
                }
                self.amps[base + off] = acc;
            }
        }
        Ok(())
    }

    /// One-qubit gate fast path. The matrix is trusted to be unitary.
    pub fn apply_1q(&mut self, u: &Matrix2<C64>, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        let m = self.bit(q);
        let (u00, u01, u10, u11) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
        for i in 0..self.amps.len() {
            if i & m == 0 {
                let a = self.amps[i];
                let b = self.amps[i | m];
                self.amps[i] = u00 * a + u01 * b;
                self.amps[i | m] = u10 * a + u11 * b;
            }
        }
        Ok(())
    }

    /// Applies the same one-qubit gate to every qubit in `support`
    /// (bit `j` = qubit `j`).
    pub fn apply_1q_on(&mut self, u: &Matrix2<C64>, support: u32) -> Result<()> {
        for q in 0..self.n {
            if support & (1 << q) != 0 {
                self.apply_1q(u, q)?;
            }
        }
        Ok(())
    }

    /// Multiplies each basis amplitude by `phase(|b|)` where `|b|` is the
    /// Hamming weight of the basis index; this is `diag(1, e^{iφ})^{⊗n}`.
    pub fn apply_weight_phase(&mut self, phi: f64) {
        let table: Vec<C64> = (0..=self.n).map(|w| C64::from_polar(1.0, phi * w as f64)).collect();
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= table[i.count_ones() as usize];
        }
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::DuplicateTarget(target));
        }
        let (cm, tm) = (self.bit(control), self.bit(target));
        for i in 0..self.amps.len() {
            if i & cm != 0 && i & tm == 0 {
                self.amps.swap(i, i | tm);
            }
        }
        Ok(())
    }

    pub fn apply_pauli(&mut self, p: &PauliString) -> Result<()> {
        self.check_pauli(p)?;
        let old = self.amps.clone();
        let (xm, zm) = index_masks(p, self.n);
        for (i, a) in old.iter().enumerate() {
            let k = (p.phase_exp() + 2 * (zm & i).count_ones() as u8) & 3;
            self.amps[i ^ xm] = i_pow(k) * a;
        }
        Ok(())
    }

    fn check_pauli(&self, p: &PauliString) -> Result<()> {
        if p.num_qubits() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: p.num_qubits() });
        }
        Ok(())
    }

    /// `⟨ψ|P|ψ⟩` for Hermitian `P`.
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        self.check_pauli(p)?;
        if !p.is_hermitian() {
            return Err(Error::NotHermitian(p.to_string()));
        }
        let (xm, zm) = index_masks(p, self.n);
        let mut acc = C64::new(0.0, 0.0);
        for (i, a) in self.amps.iter().enumerate() {
            // (P ψ)[i ^ x] = c_i ψ[i], c_i = i^phase (−1)^{|z ∧ i|}
            let sign = 1.0 - 2.0 * ((zm & i).count_ones() & 1) as f64;
            acc += self.amps[i ^ xm].conj() * a * sign;
        }
        Ok((i_pow(p.phase_exp() & 3) * acc).re)
    }

    /// Projects onto the `sign` eigenspace of a Hermitian Pauli without
    /// renormalizing; returns the squared norm of the result.
    fn project_pauli_raw(&mut self, p: &PauliString, sign: i8) -> f64 {
        let (xm, zm) = index_masks(p, self.n);
        let s = if sign >= 0 { 1.0 } else { -1.0 };
        let base = i_pow(p.phase_exp() & 3) * s;
        let coef = |j: usize| base * (1.0 - 2.0 * ((zm & j).count_ones() & 1) as f64);
        let mut total = 0.0;
        if xm == 0 {
            for (i, a) in self.amps.iter_mut().enumerate() {
                *a = (*a + coef(i) * *a) * 0.5;
                total += a.norm_sqr();
            }
            return total;
        }
        for i in 0..self.amps.len() {
            let j = i ^ xm;
            if j < i {
                continue;
            }
            let (ai, aj) = (self.amps[i], self.amps[j]);
            let vi = (ai + coef(j) * aj) * 0.5;
            let vj = (aj + coef(i) * ai) * 0.5;
            total += vi.norm_sqr() + vj.norm_sqr();
            self.amps[i] = vi;
            self.amps[j] = vj;
        }
        total
    }

    /// `½(I + sign·P)` applied in place without renormalizing. Callers
    /// inside the crate use this for projector algebra on raw vectors.
    pub(crate) fn project_pauli_unnormalized(&mut self, p: &PauliString, sign: i8) -> f64 {
        self.project_pauli_raw(p, sign)
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    /// Probability of outcome `+1` when measuring a Hermitian Pauli.
    pub fn prob_plus(&self, p: &PauliString) -> Result<f64> {
        Ok(((1.0 + self.expectation(p)?) / 2.0).clamp(0.0, 1.0))
    }

    /// Projective measurement of a Hermitian Pauli. Returns the outcome and
    /// its probability; the state collapses onto that eigenspace.
    pub fn measure_pauli<R: Rng + ?Sized>(&mut self, p: &PauliString, rng: &mut R) -> Result<(i8, f64)> {
        let plus = self.prob_plus(p)?;
        let outcome = if rng.random::<f64>() < plus { 1 } else { -1 };
        let prob = if outcome == 1 { plus } else { 1.0 - plus };
        let kept = self.project_pauli_raw(p, outcome);
        if prob > 1e-6 {
            // one pass instead of recomputing the norm
            self.scale(1.0 / kept.max(prob).sqrt());
        } else {
            self.renormalize()?;
        }
        Ok((outcome, prob))
    }

    /// Jointly measures commuting σz-type strings (no X or Y letters).
    /// Outcome `i` of the returned vector belongs to `ps[i]`; the joint
    /// distribution is that of measuring them one after another.
    pub fn measure_diagonal<R: Rng + ?Sized>(&mut self, ps: &[PauliString], rng: &mut R) -> Result<(Vec<i8>, f64)> {
        if ps.len() > 20 {
            return Err(Error::TooLarge(ps.len()));
        }
        let mut masks = Vec::with_capacity(ps.len());
        for p in ps {
            self.check_pauli(p)?;
            if p.x_bits() != 0 || !p.is_hermitian() {
                return Err(Error::Invalid(format!("{p} is not a Hermitian σz string")));
            }
            // a Hermitian σz string has phase 0 or 2
            masks.push((index_masks(p, self.n).1, p.phase_exp() & 2 != 0));
        }
        // the syndrome is affine in the index bits: split into two lookup tables
        let neg: usize = masks.iter().enumerate().filter(|(_, m)| m.1).fold(0, |a, (k, _)| a | 1 << k);
        let parities = |i: usize| -> usize {
            masks.iter().enumerate().filter(|(_, m)| (m.0 & i).count_ones() & 1 == 1).fold(0, |a, (k, _)| a | 1 << k)
        };
        let lo_bits = self.n / 2;
        let lo: Vec<usize> = (0..1usize << lo_bits).map(parities).collect();
        let hi: Vec<usize> = (0..1usize << (self.n - lo_bits)).map(|h| parities(h << lo_bits)).collect();
        let lo_mask = (1 << lo_bits) - 1;
        let syndrome = |i: usize| lo[i & lo_mask] ^ hi[i >> lo_bits] ^ neg;
        let mut dist = vec![0.0; 1 << ps.len()];
        for (i, a) in self.amps.iter().enumerate() {
            dist[syndrome(i)] += a.norm_sqr();
        }
        let total: f64 = dist.iter().sum();
        let mut r = rng.random::<f64>() * total;
        let mut pick = dist.len() - 1;
        for (k, d) in dist.iter().enumerate() {
            if r < *d {
                pick = k;
                break;
            }
            r -= d;
        }
        while dist[pick] == 0.0 {
            pick -= 1;
        }
        let scale = 1.0 / dist[pick].sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a = if syndrome(i) == pick { *a * scale } else { C64::new(0.0, 0.0) };
        }
        let outcomes = (0..ps.len()).map(|k| if pick >> k & 1 == 1 { -1 } else { 1 }).collect();
        Ok((outcomes, dist[pick] / total))
    }

    /// Forces the `sign` outcome of a Pauli measurement. Fails when that
    /// branch has (numerically) zero probability.
    pub fn project_pauli(&mut self, p: &PauliString, sign: i8) -> Result<f64> {
        self.check_pauli(p)?;
        if !p.is_hermitian() {
            return Err(Error::NotHermitian(p.to_string()));
        }
        let mut trial = self.clone();
        let prob = trial.project_pauli_raw(p, sign);
        if prob < 1e-14 {
            return Err(Error::ZeroProbability);
        }
        trial.scale(1.0 / prob.sqrt());
        *self = trial;
        Ok(prob)
    }

    /// `Π|ψ⟩` together with `‖Π|ψ⟩‖²`; `None` when the projection vanishes.
    pub fn projected(&self, spec: &ProjectorSpec) -> Result<(Option<StateVector>, f64)> {
        spec.check_n(self.n)?;
        let mut s = self.clone();
        let mut prob = 1.0;
        for (p, sign) in spec.terms() {
            prob = s.project_pauli_raw(p, *sign);
        }
        if prob < 1e-24 {
            return Ok((None, prob));
        }
        s.scale(1.0 / prob.sqrt());
        Ok((Some(s), prob))
    }

    /// Two-outcome measurement `{Π, I − Π}`.
    pub fn measure_projector<R: Rng + ?Sized>(
        &mut self,
        spec: &ProjectorSpec,
        rng: &mut R,
    ) -> Result<ProjectorOutcome> {
        let (hit_state, prob) = self.projected(spec)?;
        let hit = rng.random::<f64>() < prob;
        if hit {
            *self = hit_state.ok_or(Error::ZeroProbability)?;
        } else {
            // (I − Π)ψ = ψ − Πψ
            let mut rest = self.amps.clone();
            if let Some(h) = &hit_state {
                let k = prob.sqrt();
                for (r, a) in rest.iter_mut().zip(h.amplitudes()) {
                    *r -= a * k;
                }
            }
            *self = Self::normalized(rest)?;
        }
        Ok(ProjectorOutcome { hit, probability: prob })
    }

    /// Collapses onto `Π|ψ⟩/‖Π|ψ⟩‖`, failing on a zero-probability branch.
    pub fn project(&mut self, spec: &ProjectorSpec) -> Result<f64> {
        let (state, prob) = self.projected(spec)?;
        *self = state.ok_or(Error::ZeroProbability)?;
        Ok(prob)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Equality up to a global phase: `|⟨self|other⟩| ≥ 1 − tol`.
    pub fn equal_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        self.inner(other).map(|z| z.norm() >= 1.0 - tol).unwrap_or(false)
    }

    pub fn kron(&self, other: &StateVector) -> Result<StateVector> {
        check_n(self.n + other.n)?;
        let amps = self.amps.iter().flat_map(|a| other.amps.iter().map(move |b| a * b)).collect();
        Ok(Self { n: self.n + other.n, amps })
    }

    /// Drops qubit `q` when it is in a computational basis state, returning
    /// the remaining register and the bit value.
    pub fn remove_qubit(&self, q: usize) -> Result<(StateVector, bool)> {
        self.check_qubit(q)?;
        if self.n == 1 {
            return Err(Error::QubitCount(0));
        }
        let m = self.bit(q);
        let weight_one: f64 = self.amps.iter().enumerate().filter(|(i, _)| i & m != 0).map(|(_, a)| a.norm_sqr()).sum();
        let value = weight_one > 0.5;
        let leftover = if value { 1.0 - weight_one } else { weight_one };
        if leftover > NORM_TOL {
            return Err(Error::Entangled(q));
        }
        let low = m - 1;
        let amps: Vec<C64> = (0..self.amps.len() / 2)
            .map(|r| {
                let i = ((r & !low) << 1) | (r & low) | if value { m } else { 0 };
                self.amps[i]
            })
            .collect();
        Ok((Self::normalized(amps)?, value))
    }
}

/// Result of a [`StateVector::measure_projector`] call.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectorOutcome {
    pub hit: bool,
    /// `‖Π|ψ⟩‖²` before the measurement.
    pub probability: f64,
}

/// `Π = ∏ ½(I + λ_j S_j)` for pairwise-commuting Hermitian Paulis `S_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectorSpec {
    n: usize,
    terms: Vec<(PauliString, i8)>,
}

impl ProjectorSpec {
    pub fn new(terms: Vec<(PauliString, i8)>) -> Result<Self> {
        let n = terms.first().map(|(p, _)| p.num_qubits()).ok_or_else(|| Error::Invalid("empty projector".into()))?;
        for (i, (p, s)) in terms.iter().enumerate() {
            if p.num_qubits() != n {
                return Err(Error::DimensionMismatch { expected: n, got: p.num_qubits() });
            }
            if !p.is_hermitian() {
                return Err(Error::NotHermitian(p.to_string()));
            }
            if *s != 1 && *s != -1 {
                return Err(Error::Invalid(format!("eigenvalue sign must be ±1, got {s}")));
            }
            for (q, _) in &terms[..i] {
                if !p.commutes(q)? {
                    return Err(Error::NonCommuting(q.to_string(), p.to_string()));
                }
            }
        }
        Ok(Self { n, terms })
    }

    /// Projector onto the joint `+1` eigenspace.
    pub fn stabilized_by(stabs: &[PauliString]) -> Result<Self> {
        Self::new(stabs.iter().map(|s| (*s, 1)).collect())
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(PauliString, i8)] {
        &self.terms
    }

    fn check_n(&self, n: usize) -> Result<()> {
        if self.n != n {
            return Err(Error::DimensionMismatch { expected: n, got: self.n });
        }
        Ok(())
    }

    /// Dense matrix; only sensible for small `n`.
    pub fn to_matrix(&self) -> DMatrix<C64> {
        let dim = 1usize << self.n;
        let mut m = DMatrix::<C64>::identity(dim, dim);
        for (p, s) in &self.terms {
            let f = (DMatrix::<C64>::identity(dim, dim) + p.to_matrix() * c(*s as f64, 0.0)) * c(0.5, 0.0);
            m = m * f;
        }
        m
    }
}

/// Pauli masks in amplitude-index convention (qubit 0 = most significant bit).
#[inline]
fn index_masks(p: &PauliString, n: usize) -> (usize, usize) {
    (
        reverse_bits(p.x_bits() as u32, n) as usize,
        reverse_bits(p.z_bits() as u32, n) as usize,
    )
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::QubitCount(n));
    }
    Ok(())
}

fn dim_to_n(len: usize) -> Result<usize> {
    if !len.is_power_of_two() || len < 2 {
        return Err(Error::Invalid(format!("amplitude count {len} is not a power of two")));
    }
    let n = len.trailing_zeros() as usize;
    check_n(n)?;
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::{cnot, hadamard, identity, t_op};
    use crate::rng::seeded;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn dm(m: &Matrix2<C64>) -> DMatrix<C64> {
        DMatrix::from_fn(2, 2, |i, j| m[(i, j)])
    }

    #[test]
    fn joint_diagonal_measurement_matches_sequential_projection() {
        let mut rng = seeded(4);
        let ps: Vec<PauliString> = ["ZZII", "-IZZI", "IIZZ"].iter().map(|t| t.parse().unwrap()).collect();
        let s = StateVector::random(4, &mut rng).unwrap();
        for _ in 0..20 {
            let mut joint = s.clone();
            let (outcomes, prob) = joint.measure_diagonal(&ps, &mut rng).unwrap();
            let mut seq = s.clone();
            let mut p_seq = 1.0;
            for (p, o) in ps.iter().zip(&outcomes) {
                p_seq *= seq.project_pauli(p, *o).unwrap();
            }
            assert!((prob - p_seq).abs() < 1e-12);
            assert!(joint.fidelity(&seq).unwrap() > 1.0 - 1e-12);
        }
        let mut s = StateVector::zero(2).unwrap();
        assert!(s.measure_diagonal(&["XZ".parse().unwrap()], &mut rng).is_err());
    }

    #[test]
    fn identity_leaves_state_unchanged() {
        let mut rng = seeded(1);
        let s = StateVector::random(3, &mut rng).unwrap();
        let mut t = s.clone();
        t.apply_unitary(&dm(&identity()), &[1]).unwrap();
        assert!(t.equal_up_to_phase(&s, 1e-12));
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply_unitary(&dm(&hadamard()), &[0]).unwrap();
        let want = StateVector::product(&[[c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]]).unwrap();
        assert!(s.equal_up_to_phase(&want, 1e-12));
        assert!((s.amplitudes()[1].re - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_matrices_and_targets() {
        let mut s = StateVector::zero(2).unwrap();
        let bad = DMatrix::from_element(2, 2, c(1.0, 0.0));
        assert!(matches!(s.apply_unitary(&bad, &[0]), Err(Error::NotUnitary(_))));
        let cx = DMatrix::from_fn(4, 4, |i, j| cnot()[(i, j)]);
        assert!(matches!(s.apply_unitary(&cx, &[1, 1]), Err(Error::DuplicateTarget(1))));
        assert!(s.apply_unitary(&cx, &[0, 2]).is_err());
    }

    #[test]
    fn generic_two_qubit_path_matches_cnot_fast_path() {
        let mut rng = seeded(7);
        let s = StateVector::random(4, &mut rng).unwrap();
        let cx = DMatrix::from_fn(4, 4, |i, j| cnot()[(i, j)]);
        let mut a = s.clone();
        a.apply_unitary(&cx, &[3, 1]).unwrap();
        let mut b = s.clone();
        b.apply_cnot(3, 1).unwrap();
        assert!(a.equal_up_to_phase(&b, 1e-12));
        assert!((a.inner(&b).unwrap().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn z_projector_on_zero() {
        let mut s = StateVector::zero(1).unwrap();
        let spec = ProjectorSpec::stabilized_by(&["Z".parse().unwrap()]).unwrap();
        let mut rng = seeded(3);
        let out = s.measure_projector(&spec, &mut rng).unwrap();
        assert!(out.hit);
        assert!((out.probability - 1.0).abs() < 1e-15);
        assert!(s.equal_up_to_phase(&StateVector::zero(1).unwrap(), 1e-12));
    }

    #[test]
    fn forced_zero_branch_is_an_error() {
        let mut s = StateVector::zero(1).unwrap();
        let minus_z = ProjectorSpec::new(vec![("Z".parse().unwrap(), -1)]).unwrap();
        assert_eq!(s.project(&minus_z), Err(Error::ZeroProbability));
        assert_eq!(s.project_pauli(&"Z".parse().unwrap(), -1), Err(Error::ZeroProbability));
    }

    #[test]
    fn t_gate_eigenvector() {
        // |T0⟩ = cos β|0⟩ + e^{iπ/4} sin β|1⟩, cos 2β = 1/√3
        let beta = (1.0f64 / 3f64.sqrt()).acos() / 2.0;
        let t0 = StateVector::product(&[[c(beta.cos(), 0.0), crate::matrices::cis(std::f64::consts::FRAC_PI_4) * beta.sin()]]).unwrap();
        let mut s = t0.clone();
        s.apply_1q(&t_op(), 0).unwrap();
        let phase = t0.inner(&s).unwrap();
        assert!((phase - crate::matrices::cis(std::f64::consts::PI / 3.0)).norm() < 1e-12);
    }

    #[test]
    fn expectation_examples() {
        let s = StateVector::zero(1).unwrap();
        assert_eq!(s.expectation(&"Z".parse().unwrap()).unwrap(), 1.0);
        assert!(s.expectation(&"iZ".parse().unwrap()).is_err());
    }

    #[test]
    fn projector_rejects_non_commuting_terms() {
        let r = ProjectorSpec::stabilized_by(&["XI".parse().unwrap(), "ZZ".parse().unwrap()]);
        assert!(matches!(r, Err(Error::NonCommuting(_, _))));
    }

    #[test]
    fn projector_matrix_is_idempotent() {
        let spec = ProjectorSpec::stabilized_by(&[
            "XZZXI".parse().unwrap(),
            "IXZZX".parse().unwrap(),
            "XIXZZ".parse().unwrap(),
            "ZXIXZ".parse().unwrap(),
        ])
        .unwrap();
        let m = spec.to_matrix();
        let diff = &m * &m - &m;
        assert!(diff.iter().all(|v| v.norm() < 1e-12));
        assert!((m.trace().re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn syndrome_projectors_sum_to_one() {
        let mut rng = seeded(11);
        let s = StateVector::random(4, &mut rng).unwrap();
        let gens: Vec<PauliString> = ["XXII", "ZZII", "IIXX", "IIZZ"].iter().map(|t| t.parse().unwrap()).collect();
        let mut total = 0.0;
        for signs in 0..16u32 {
            let terms = gens.iter().enumerate().map(|(j, g)| (*g, if signs >> j & 1 == 1 { -1 } else { 1 })).collect();
            let (_, p) = s.projected(&ProjectorSpec::new(terms).unwrap()).unwrap();
            total += p;
        }
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn remove_qubit_detects_entanglement() {
        let mut s = StateVector::zero(2).unwrap();
        s.apply_1q(&hadamard(), 0).unwrap();
        let (r, v) = s.remove_qubit(1).unwrap();
        assert!(!v);
        assert_eq!(r.num_qubits(), 1);
        s.apply_cnot(0, 1).unwrap();
        assert_eq!(s.remove_qubit(1).unwrap_err(), Error::Entangled(1));
    }

    #[test]
    fn pauli_application_matches_matrix() {
        let mut rng = seeded(5);
        let s = StateVector::random(3, &mut rng).unwrap();
        let p: PauliString = "-iXYZ".parse().unwrap();
        let mut a = s.clone();
        a.apply_pauli(&p).unwrap();
        let m = p.to_matrix();
        let v = nalgebra::DVector::from_column_slice(s.amplitudes());
        let want = m * v;
        for (x, y) in a.amplitudes().iter().zip(want.iter()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    proptest::proptest! {
        #[test]
        fn random_unitaries_preserve_norm(seed in 0u64..1000, q in 0usize..4) {
            let mut rng = seeded(seed);
            let mut s = StateVector::random(4, &mut rng).unwrap();
            let u = random_unitary(2, &mut rng);
            s.apply_unitary(&u, &[q]).unwrap();
            let u2 = random_unitary(4, &mut rng);
            s.apply_unitary(&u2, &[q, (q + 1) % 4]).unwrap();
            proptest::prop_assert!((s.norm() - 1.0).abs() < 1e-9);
        }
    }

    /// QR-orthonormalized complex Gaussian matrix.
    fn random_unitary(dim: usize, rng: &mut impl Rng) -> DMatrix<C64> {
        let m = DMatrix::from_fn(dim, dim, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
        m.qr().q()
    }
}
