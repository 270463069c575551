//! One-qubit states, the Clifford group `C(1)` and the magic-state zoo.
//!
//! A mixed qubit is stored by its polarization vector `r`, with density
//! matrix `½(I + r·σ)`. The fidelity of `ρ` with a pure state of Bloch vector
//! `m` is `√((1 + r·m)/2)`, which makes every metric here a dot product.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_8};
use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrices::{self, c, cis, C64};

const BALL_TOL: f64 = 1e-12;

/// The two magic-state families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Cube diagonals, eigenstates of the order-3 Clifford `T`.
    T,
    /// Face diagonals, eigenstates of the Hadamard gate.
    H,
}

impl Family {
    /// Bloch vector of the reference magic state used for canonical
    /// orientation: `(1,1,1)/√3` for T, `(1,0,1)/√2` for H.
    pub fn axis(self) -> [f64; 3] {
        match self {
            Family::T => [1.0 / 3f64.sqrt(); 3],
            Family::H => [FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2],
        }
    }

    /// Bloch vectors of all magic states in the family.
    pub fn catalog(self) -> Vec<[f64; 3]> {
        match self {
            Family::T => t_type_vectors(),
            Family::H => h_type_vectors(),
        }
    }

    /// Reference pure state with Bloch vector [`Family::axis`].
    pub fn reference_state(self) -> [C64; 2] {
        match self {
            Family::T => t0_state(),
            Family::H => h_state(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::T => "T",
            Family::H => "H",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "T" | "t" => Ok(Family::T),
            "H" | "h" => Ok(Family::H),
            _ => Err(Error::Parse { what: "family (T or H)", input: s.to_string() }),
        }
    }
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// A one-qubit density matrix `½(I + r·σ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Qubit1State {
    r: [f64; 3],
}

impl Qubit1State {
    pub fn new(r: [f64; 3]) -> Result<Self> {
        if r.iter().any(|v| !v.is_finite()) || dot(r, r) > 1.0 + BALL_TOL {
            return Err(Error::OutsideBlochBall(r));
        }
        Ok(Self { r })
    }

    pub fn maximally_mixed() -> Self {
        Self { r: [0.0; 3] }
    }

    /// `ρ = (1−ε)|m⟩⟨m| + ε|m⊥⟩⟨m⊥|` for the family's reference state `m`.
    pub fn from_epsilon(family: Family, epsilon: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&epsilon) {
            return Err(Error::EpsilonOutOfRange(epsilon));
        }
        let a = family.axis();
        let s = 1.0 - 2.0 * epsilon;
        Self::new([s * a[0], s * a[1], s * a[2]])
    }

    /// Pure state `|ψ⟩⟨ψ|`; `ψ` need not be normalized.
    pub fn from_pure(psi: [C64; 2]) -> Result<Self> {
        let n = psi[0].norm_sqr() + psi[1].norm_sqr();
        if n < 1e-300 {
            return Err(Error::NotNormalized(0.0));
        }
        let off = psi[0].conj() * psi[1];
        let r = [2.0 * off.re / n, 2.0 * off.im / n, (psi[0].norm_sqr() - psi[1].norm_sqr()) / n];
        Self::new(r)
    }

    /// Reads `r_a = tr(ρ σ_a)`. Rejects non-Hermitian or non-unit-trace input.
    pub fn from_matrix(rho: &Matrix2<C64>) -> Result<Self> {
        let herm = matrices::max_abs_diff(rho, &rho.adjoint());
        let tr = rho.trace();
        if herm > 1e-9 {
            return Err(Error::Invalid(format!("density matrix not Hermitian (deviation {herm:.3e})")));
        }
        if (tr - c(1.0, 0.0)).norm() > 1e-9 {
            return Err(Error::Invalid(format!("density matrix trace {tr}")));
        }
        let comp = |s: Matrix2<C64>| (rho * s).trace().re;
        Self::new([comp(matrices::sigma_x()), comp(matrices::sigma_y()), comp(matrices::sigma_z())])
    }

    pub fn to_matrix(&self) -> Matrix2<C64> {
        (matrices::identity() + matrices::bloch_operator(self.r)) * c(0.5, 0.0)
    }

    pub fn bloch(&self) -> [f64; 3] {
        self.r
    }

    pub fn purity(&self) -> f64 {
        (1.0 + dot(self.r, self.r)) / 2.0
    }

    /// `U ρ U†`.
    pub fn conjugated(&self, u: &Matrix2<C64>) -> Result<Self> {
        Self::from_matrix(&matrices::conjugate(u, &self.to_matrix()))
    }

    /// `⟨ψ|ρ|ψ⟩` for the pure state with Bloch vector `m`.
    pub fn overlap_with_axis(&self, m: [f64; 3]) -> f64 {
        (1.0 + dot(self.r, m)) / 2.0
    }
}

/// Whether `ρ` lies in the stabilizer octahedron `|r_x|+|r_y|+|r_z| ≤ 1`,
/// i.e. is a convex mixture of the six Pauli eigenstates.
pub fn in_octahedron(s: &Qubit1State) -> bool {
    s.r.iter().map(|v| v.abs()).sum::<f64>() <= 1.0 + BALL_TOL
}

/// `|T_0⟩ = cos β|0⟩ + e^{iπ/4} sin β|1⟩` with `cos 2β = 1/√3`.
pub fn t0_state() -> [C64; 2] {
    let beta = 0.5 * (1.0 / 3f64.sqrt()).acos();
    [c(beta.cos(), 0.0), cis(FRAC_PI_4) * beta.sin()]
}

/// `|T_1⟩ = σy H |T_0⟩`, the other eigenvector of `T`.
pub fn t1_state() -> [C64; 2] {
    apply(&(matrices::sigma_y() * matrices::hadamard()), t0_state())
}

/// `|H⟩ = cos(π/8)|0⟩ + sin(π/8)|1⟩`.
pub fn h_state() -> [C64; 2] {
    [c(FRAC_PI_8.cos(), 0.0), c(FRAC_PI_8.sin(), 0.0)]
}

/// `|A_θ⟩ = (|0⟩ + e^{iθ}|1⟩)/√2`.
pub fn a_state(theta: f64) -> [C64; 2] {
    [c(FRAC_1_SQRT_2, 0.0), cis(theta) * FRAC_1_SQRT_2]
}

/// `|A_0⟩ = |A_{π/4}⟩`, the `+1` eigenvector of `A = (σx+σy)/√2`.
pub fn a0_state() -> [C64; 2] {
    a_state(FRAC_PI_4)
}

/// `|A_1⟩ = σz|A_0⟩`.
pub fn a1_state() -> [C64; 2] {
    a_state(FRAC_PI_4 + std::f64::consts::PI)
}

pub(crate) fn apply(u: &Matrix2<C64>, v: [C64; 2]) -> [C64; 2] {
    [u[(0, 0)] * v[0] + u[(0, 1)] * v[1], u[(1, 0)] * v[0] + u[(1, 1)] * v[1]]
}

fn t_type_vectors() -> Vec<[f64; 3]> {
    let s = 1.0 / 3f64.sqrt();
    let mut out = Vec::with_capacity(8);
    for bits in 0..8 {
        let sign = |k: usize| if bits >> (2 - k) & 1 == 1 { -s } else { s };
        out.push([sign(0), sign(1), sign(2)]);
    }
    out
}

fn h_type_vectors() -> Vec<[f64; 3]> {
    let s = FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(12);
    for zero in [1usize, 0, 2] {
        for bits in 0..4 {
            let mut v = [0.0; 3];
            let mut k = 0;
            for (a, slot) in v.iter_mut().enumerate() {
                if a != zero {
                    *slot = if bits >> (1 - k) & 1 == 1 { -s } else { s };
                    k += 1;
                }
            }
            out.push(v);
        }
    }
    out
}

/// An element of the one-qubit Clifford group modulo phase.
#[derive(Clone, Debug, PartialEq)]
pub struct Clifford1 {
    /// Unitary with the phase fixed by [`matrices::canonical_phase`].
    pub matrix: Matrix2<C64>,
    /// Word in the generators, applied left to right (`"HK"` = first H, then K).
    pub word: String,
    /// SO(3) action on polarization vectors: `r ↦ R r`.
    pub rotation: [[f64; 3]; 3],
}

impl Clifford1 {
    pub fn rotate(&self, r: [f64; 3]) -> [f64; 3] {
        let m = &self.rotation;
        [dot(m[0], r), dot(m[1], r), dot(m[2], r)]
    }
}

fn rotation_of(u: &Matrix2<C64>) -> [[f64; 3]; 3] {
    let paulis = [matrices::sigma_x(), matrices::sigma_y(), matrices::sigma_z()];
    let mut rot = [[0.0; 3]; 3];
    for (a, row) in rot.iter_mut().enumerate() {
        for (b, entry) in row.iter_mut().enumerate() {
            *entry = 0.5 * (paulis[a] * matrices::conjugate(u, &paulis[b])).trace().re;
        }
    }
    rot
}

/// The 24 elements of `C(1)/U(1)`, in breadth-first order over words in
/// `{H, K}`. The identity comes first; the order is fixed and is used as the
/// tie-break for canonical orientation.
pub fn enumerate_c1() -> Vec<Clifford1> {
    let gens = [("H", matrices::hadamard()), ("K", matrices::phase_k())];
    let mut found = vec![(matrices::identity(), String::new())];
    let mut frontier = 0;
    while frontier < found.len() {
        let (u, word) = found[frontier].clone();
        frontier += 1;
        for (name, g) in &gens {
            let v = g * u;
            if !found.iter().any(|(w, _)| matrices::equal_up_to_phase(&v, w, 1e-9)) {
                found.push((v, format!("{word}{name}")));
            }
        }
    }
    found
        .into_iter()
        .map(|(u, word)| Clifford1 { matrix: matrices::canonical_phase(&u), rotation: rotation_of(&u), word })
        .collect()
}

/// Whether `u` equals some element of `C(1)` up to phase.
pub fn is_clifford1(u: &Matrix2<C64>) -> bool {
    enumerate_c1().iter().any(|g| matrices::equal_up_to_phase(u, &g.matrix, 1e-9))
}

/// `F(ρ) = max over the family's catalog of √⟨m|ρ|m⟩`.
pub fn fidelity(s: &Qubit1State, family: Family) -> f64 {
    family
        .catalog()
        .into_iter()
        .map(|m| s.overlap_with_axis(m))
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0)
        .sqrt()
}

pub fn fidelity_t(s: &Qubit1State) -> f64 {
    fidelity(s, Family::T)
}

pub fn fidelity_h(s: &Qubit1State) -> f64 {
    fidelity(s, Family::H)
}

/// `max_{U ∈ C(1)} √⟨m|U†ρU|m⟩` computed with explicit 2×2 matrices.
pub fn fidelity_explicit(s: &Qubit1State, family: Family) -> f64 {
    let psi = family.reference_state();
    let rho = s.to_matrix();
    enumerate_c1()
        .iter()
        .map(|g| {
            let phi = apply(&g.matrix, psi);
            let rphi = apply(&rho, phi);
            (phi[0].conj() * rphi[0] + phi[1].conj() * rphi[1]).re
        })
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0)
        .sqrt()
}

/// `ε = 1 − F(ρ)²`, in `[0, 1/2]`.
pub fn epsilon_of(s: &Qubit1State, family: Family) -> f64 {
    let f = fidelity(s, family);
    (1.0 - f * f).clamp(0.0, 0.5)
}

/// Largest fidelity reachable inside the stabilizer octahedron. `F` is
/// monotone in the linear functional `r·m`, so the maximum sits on a vertex.
pub fn max_octahedron_fidelity(family: Family) -> f64 {
    let vertices = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]];
    vertices
        .iter()
        .map(|&v| fidelity(&Qubit1State { r: v }, family))
        .fold(0.0, f64::max)
}

/// Keeps only the component of `r` along the unit vector `axis`.
pub fn dephase_axis(s: &Qubit1State, axis: [f64; 3]) -> Qubit1State {
    let n = dot(axis, axis).sqrt();
    let a = [axis[0] / n, axis[1] / n, axis[2] / n];
    let k = dot(s.r, a);
    Qubit1State { r: [k * a[0], k * a[1], k * a[2]] }
}

/// Twirl over `{I, T, T†}`: projects `r` onto `(1,1,1)/√3`.
pub fn dephase_t(s: &Qubit1State) -> Qubit1State {
    dephase_axis(s, Family::T.axis())
}

/// Twirl over `{I, H}`: projects `r` onto the `|H⟩` axis `(1,0,1)/√2`.
pub fn dephase_h(s: &Qubit1State) -> Qubit1State {
    dephase_axis(s, Family::H.axis())
}

/// Twirl over `{I, A}`: projects `r` onto the `|A_0⟩` axis `(1,1,0)/√2`.
pub fn dephase_a(s: &Qubit1State) -> Qubit1State {
    dephase_axis(s, [FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0])
}

/// `D(η) = (η + TηT† + T†ηT)/3` on an arbitrary 2×2 operator.
pub fn dephase_t_matrix(eta: &Matrix2<C64>) -> Matrix2<C64> {
    let t = matrices::t_op();
    let td = t.adjoint();
    (eta + t * eta * td + td * eta * t) / c(3.0, 0.0)
}

/// `D(η) = (η + UηU†)/2` for an involution `U` (`A` or `H`).
pub fn dephase_involution_matrix(u: &Matrix2<C64>, eta: &Matrix2<C64>) -> Matrix2<C64> {
    (eta + u * eta * u.adjoint()) / c(2.0, 0.0)
}

/// Rotates `s` by the first Clifford (in [`enumerate_c1`] order) that takes
/// its best-matching catalog state onto the family reference axis. Returns
/// the rotated state and the index of the Clifford used.
pub fn canonicalize(s: &Qubit1State, family: Family) -> (Qubit1State, usize) {
    let axis = family.axis();
    let group = enumerate_c1();
    let scores: Vec<f64> = group.iter().map(|g| dot(g.rotate(s.r), axis)).collect();
    let best = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let idx = scores.iter().position(|&v| v >= best - 1e-12).unwrap_or(0);
    (Qubit1State { r: group[idx].rotate(s.r) }, idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use rand::Rng;

    fn close3(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
        (0..3).all(|k| (a[k] - b[k]).abs() < tol)
    }

    #[test]
    fn matrix_round_trip() {
        let s = Qubit1State::new([0.3, -0.2, 0.5]).unwrap();
        let back = Qubit1State::from_matrix(&s.to_matrix()).unwrap();
        assert!(close3(s.bloch(), back.bloch(), 1e-15));
        assert!(Qubit1State::new([0.8, 0.8, 0.0]).is_err());
    }

    #[test]
    fn named_state_bloch_vectors() {
        let t0 = Qubit1State::from_pure(t0_state()).unwrap();
        assert!(close3(t0.bloch(), Family::T.axis(), 1e-12));
        let t1 = Qubit1State::from_pure(t1_state()).unwrap();
        assert!(close3(t1.bloch(), [-1.0 / 3f64.sqrt(); 3], 1e-12));
        let h = Qubit1State::from_pure(h_state()).unwrap();
        assert!(close3(h.bloch(), Family::H.axis(), 1e-12));
        let a0 = Qubit1State::from_pure(a0_state()).unwrap();
        assert!(close3(a0.bloch(), [FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0], 1e-12));
    }

    #[test]
    fn clifford_group_has_24_elements() {
        let g = enumerate_c1();
        assert_eq!(g.len(), 24);
        assert!(matrices::equal_up_to_phase(&g[0].matrix, &matrices::identity(), 1e-12));
        assert!(g.iter().any(|u| matrices::equal_up_to_phase(&u.matrix, &matrices::t_op(), 1e-9)));
        for u in &g {
            // rotations are proper orthogonal
            let r = u.rotation;
            let det = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
                + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
            assert!((det - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn orbits_match_catalogs() {
        let g = enumerate_c1();
        for family in [Family::T, Family::H] {
            let cat = family.catalog();
            let mut orbit: Vec<[f64; 3]> = Vec::new();
            for u in &g {
                let v = u.rotate(family.axis());
                if !orbit.iter().any(|w| close3(*w, v, 1e-9)) {
                    orbit.push(v);
                }
                // closure: every catalog state maps into the catalog
                for m in &cat {
                    let w = u.rotate(*m);
                    assert!(cat.iter().any(|x| close3(*x, w, 1e-9)));
                }
            }
            assert_eq!(orbit.len(), cat.len());
            assert_eq!(cat.len(), if family == Family::T { 8 } else { 12 });
            assert!(orbit.iter().all(|v| cat.iter().any(|x| close3(*x, *v, 1e-9))));
        }
    }

    #[test]
    fn octahedron_examples() {
        assert!(in_octahedron(&Qubit1State::maximally_mixed()));
        assert!(!in_octahedron(&Qubit1State::from_pure(t0_state()).unwrap()));
        assert!(in_octahedron(&Qubit1State::new([1.0, 0.0, 0.0]).unwrap()));
    }

    #[test]
    fn fidelity_examples() {
        let t = Qubit1State::from_pure(t0_state()).unwrap();
        assert!((fidelity_t(&t) - 1.0).abs() < 1e-12);
        assert!((fidelity_t(&Qubit1State::maximally_mixed()) - FRAC_1_SQRT_2).abs() < 1e-15);
        let ft = max_octahedron_fidelity(Family::T);
        assert!((ft - (0.5 * (1.0 + 1.0 / 3f64.sqrt())).sqrt()).abs() < 1e-15);
        assert!((ft - 0.888).abs() < 5e-4);
        assert!((max_octahedron_fidelity(Family::H) - 0.924).abs() < 5e-4);
        let eps0 = 0.5 * (1.0 - (3.0f64 / 7.0).sqrt());
        let s = Qubit1State::from_epsilon(Family::T, eps0).unwrap();
        assert!((epsilon_of(&s, Family::T) - eps0).abs() < 1e-12);
        assert!((fidelity_t(&s) - 0.910).abs() < 5e-4);
        assert!((epsilon_of(&Qubit1State::maximally_mixed(), Family::H) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn closed_form_fidelity_equals_explicit_maximum() {
        let mut rng = seeded(21);
        for _ in 0..1000 {
            let r: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let len = dot(r, r).sqrt().max(1.0);
            let s = Qubit1State::new(r.map(|v| v / len)).unwrap();
            for family in [Family::T, Family::H] {
                assert!((fidelity(&s, family) - fidelity_explicit(&s, family)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dephasing_examples() {
        let t0 = Qubit1State::from_pure(t0_state()).unwrap();
        assert!(close3(dephase_t(&t0).bloch(), t0.bloch(), 1e-15));
        let x = Qubit1State::new([1.0, 0.0, 0.0]).unwrap();
        assert!(close3(dephase_t(&x).bloch(), [1.0 / 3.0; 3], 1e-15));
        // D(|T0⟩⟨T1|) = 0 as an operator map.
        let (a, b) = (t0_state(), t1_state());
        let outer = Matrix2::new(a[0] * b[0].conj(), a[0] * b[1].conj(), a[1] * b[0].conj(), a[1] * b[1].conj());
        assert!(dephase_t_matrix(&outer).iter().all(|v| v.norm() < 1e-12));
        assert!(dephase_t_matrix(&outer.adjoint()).iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn vector_and_matrix_dephasing_agree() {
        let mut rng = seeded(3);
        for _ in 0..200 {
            let r: [f64; 3] = std::array::from_fn(|_| rng.random_range(-0.57..0.57));
            let s = Qubit1State::new(r).unwrap();
            let cases = [
                (dephase_t(&s), dephase_t_matrix(&s.to_matrix())),
                (dephase_a(&s), dephase_involution_matrix(&matrices::a_op(), &s.to_matrix())),
                (dephase_h(&s), dephase_involution_matrix(&matrices::hadamard(), &s.to_matrix())),
            ];
            for (v, m) in cases {
                assert!(matrices::max_abs_diff(&v.to_matrix(), &m) < 1e-12);
                assert!((m.trace().re - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn canonical_orientation() {
        // A state near -(1,1,1)/√3 is rotated into the positive octant.
        let s = Qubit1State::new([-0.5, -0.5, -0.5]).unwrap();
        let (c, idx) = canonicalize(&s, Family::T);
        assert!(close3(c.bloch(), [0.5; 3], 1e-12));
        assert!(idx > 0);
        // Already canonical: identity is chosen.
        let (_, idx) = canonicalize(&Qubit1State::from_epsilon(Family::H, 0.1).unwrap(), Family::H);
        assert_eq!(idx, 0);
        let (m, _) = canonicalize(&Qubit1State::maximally_mixed(), Family::T);
        assert_eq!(m.bloch(), [0.0; 3]);
    }

    #[test]
    fn family_parsing() {
        assert_eq!("T".parse::<Family>().unwrap(), Family::T);
        assert_eq!("h".parse::<Family>().unwrap(), Family::H);
        assert!("Q".parse::<Family>().is_err());
        assert_eq!(Family::H.to_string(), "H");
    }

    proptest::proptest! {
        #[test]
        fn dephasing_is_idempotent_and_keeps_axis_component(
            x in -0.57f64..0.57, y in -0.57f64..0.57, z in -0.57f64..0.57
        ) {
            let s = Qubit1State::new([x, y, z]).unwrap();
            for (axis, f) in [
                (Family::T.axis(), dephase_t as fn(&Qubit1State) -> Qubit1State),
                (Family::H.axis(), dephase_h),
                ([FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0], dephase_a),
            ] {
                let once = f(&s);
                let twice = f(&once);
                proptest::prop_assert!(close3(once.bloch(), twice.bloch(), 1e-14));
                proptest::prop_assert!((dot(once.bloch(), axis) - dot(s.bloch(), axis)).abs() < 1e-14);
            }
        }
    }
}
