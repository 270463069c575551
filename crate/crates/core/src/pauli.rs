//! Phase-exact n-qubit Pauli operators in symplectic form.
//!
//! A [`PauliString`] stores the operator
//!
//! ```text
//! i^phase · X^{x_0} Z^{z_0} ⊗ X^{x_1} Z^{z_1} ⊗ … ⊗ X^{x_{n-1}} Z^{z_{n-1}}
//! ```
//!
//! with qubit 0 the leftmost tensor factor. Because `Y = i·XZ`, a `Y` factor
//! contributes one unit to `phase`; the operator is Hermitian exactly when
//! `phase + |x & z|` is even.
//!
//! The text form used by the CLI and fixtures is an optional sign, an optional
//! `i`, and one letter per qubit: `+XZZXI`, `-iYY`, `ZZ`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::MAX_QUBITS;

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// An element of the n-qubit Pauli group, including its phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: u8,
    x: u16,
    z: u16,
    phase: u8,
}

impl PauliString {
    /// The identity on `n` qubits.
    pub fn identity(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Self { n: n as u8, x: 0, z: 0, phase: 0 })
    }

    /// Builds the operator `i^phase · ∏ X^{x_j} Z^{z_j}` from raw symplectic
    /// data. Bit `j` of `x`/`z` refers to qubit `j`.
    pub fn from_symplectic(n: usize, x: u16, z: u16, phase: u8) -> Result<Self> {
        check_n(n)?;
        let mask = mask(n);
        if x & !mask != 0 || z & !mask != 0 {
            return Err(Error::Invalid(format!("bits set beyond qubit {}", n - 1)));
        }
        Ok(Self { n: n as u8, x, z, phase: phase & 3 })
    }

    /// `+P` on qubit `q` of an `n`-qubit register, with `P` Hermitian.
    pub fn single(n: usize, q: usize, p: Pauli) -> Result<Self> {
        check_n(n)?;
        if q >= n {
            return Err(Error::QubitOutOfRange { index: q, n });
        }
        let mut out = Self::identity(n)?;
        out.set(q, p);
        Ok(out)
    }

    /// Hermitian product of `X` on the qubits set in `support` (bit `j` = qubit `j`).
    pub fn x_on(n: usize, support: u32) -> Result<Self> {
        Self::from_symplectic(n, narrow(n, support)?, 0, 0)
    }

    /// Hermitian product of `Z` on the qubits set in `support`.
    pub fn z_on(n: usize, support: u32) -> Result<Self> {
        Self::from_symplectic(n, 0, narrow(n, support)?, 0)
    }

    /// Builds `sign · P_0 ⊗ … ⊗ P_{n-1}` from letters, with `Y` meaning the
    /// Hermitian Pauli-Y matrix.
    pub fn from_letters(letters: &[Pauli], negative: bool) -> Result<Self> {
        let mut out = Self::identity(letters.len())?;
        for (q, &p) in letters.iter().enumerate() {
            out.set(q, p);
        }
        if negative {
            out.phase = (out.phase + 2) & 3;
        }
        Ok(out)
    }

    fn set(&mut self, q: usize, p: Pauli) {
        let (xb, zb) = p.bits();
        let bit = 1u16 << q;
        // Clear any existing factor (and its Y phase) first.
        if self.x & self.z & bit != 0 {
            self.phase = (self.phase + 3) & 3;
        }
        self.x &= !bit;
        self.z &= !bit;
        if xb {
            self.x |= bit;
        }
        if zb {
            self.z |= bit;
        }
        if xb && zb {
            self.phase = (self.phase + 1) & 3;
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n as usize
    }

    pub fn x_bits(&self) -> u16 {
        self.x
    }

    pub fn z_bits(&self) -> u16 {
        self.z
    }

    /// Exponent `p` of the prefactor `i^p` in the `X^x Z^z` normal form.
    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    /// Phase exponent relative to the letter form, i.e. the `k` in
    /// `i^k · P_0 ⊗ … ⊗ P_{n-1}` where every letter is a Hermitian Pauli matrix.
    pub fn letter_phase(&self) -> u8 {
        let ys = (self.x & self.z).count_ones() as u8;
        (self.phase + 4 - (ys & 3)) & 3
    }

    pub fn letter(&self, q: usize) -> Pauli {
        let bit = 1u16 << q;
        Pauli::from_bits(self.x & bit != 0, self.z & bit != 0)
    }

    pub fn letters(&self) -> Vec<Pauli> {
        (0..self.num_qubits()).map(|q| self.letter(q)).collect()
    }

    /// Number of qubits on which the operator acts nontrivially.
    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn is_hermitian(&self) -> bool {
        self.letter_phase() % 2 == 0
    }

    /// True for the identity up to phase.
    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Same Pauli letters, ignoring the phase.
    pub fn same_letters(&self, other: &Self) -> bool {
        self.n == other.n && self.x == other.x && self.z == other.z
    }

    /// Exact product `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same_n(other)?;
        // X^a Z^b X^c Z^d = (-1)^{|b & c|} X^{a+c} Z^{b+d}
        let swap = (self.z & other.x).count_ones() as u8;
        Ok(Self {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: (self.phase + other.phase + 2 * swap) & 3,
        })
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_same_n(other)?;
        let s = (self.x & other.z).count_ones() + (self.z & other.x).count_ones();
        Ok(s % 2 == 0)
    }

    /// Multiplies the operator by `i^k`.
    pub fn times_i_pow(&self, k: u8) -> Self {
        Self { phase: (self.phase + k) & 3, ..*self }
    }

    pub fn negated(&self) -> Self {
        self.times_i_pow(2)
    }

    /// Sign `±1` of a Hermitian operator in letter form.
    pub fn sign(&self) -> Option<i8> {
        match self.letter_phase() {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    /// Hermitian-conjugate.
    pub fn adjoint(&self) -> Self {
        // (i^p X^x Z^z)† = i^{-p} Z^z X^x = i^{-p} (-1)^{|x&z|} X^x Z^z
        let ys = (self.x & self.z).count_ones() as u8;
        Self { phase: (4 - self.phase + 2 * ys) & 3, ..*self }
    }

    /// Action on a computational basis state: `P|b⟩ = c·|b ⊕ x⟩`.
    ///
    /// `basis` uses the statevector convention where qubit 0 is the most
    /// significant bit of the index. Returns `(target index, i-power of c)`.
    #[inline]
    pub fn act_on_basis(&self, basis: usize) -> (usize, u8) {
        let n = self.num_qubits();
        let b = reverse_bits(basis as u32, n) as u16;
        let minus = (self.z & b).count_ones() as u8;
        let target = b ^ self.x;
        (reverse_bits(target as u32, n) as usize, (self.phase + 2 * minus) & 3)
    }

    /// Dense `2^n × 2^n` matrix, qubit 0 being the leftmost Kronecker factor.
    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n;
        let mut m = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            let (row, k) = self.act_on_basis(col);
            m[(row, col)] = i_pow(k);
        }
        m
    }

    fn check_same_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n as usize, got: other.n as usize });
        }
        Ok(())
    }
}

/// `i^k` as a complex number.
#[inline]
pub fn i_pow(k: u8) -> Complex64 {
    match k & 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

#[inline]
pub(crate) fn reverse_bits(v: u32, n: usize) -> u32 {
    if n == 0 {
        0
    } else {
        v.reverse_bits() >> (32 - n)
    }
}

fn mask(n: usize) -> u16 {
    if n >= 16 {
        u16::MAX
    } else {
        (1u16 << n) - 1
    }
}

fn narrow(n: usize, support: u32) -> Result<u16> {
    if support >> n != 0 && n < 32 {
        return Err(Error::Invalid(format!("support {support:#b} exceeds {n} qubits")));
    }
    Ok(support as u16)
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::QubitCount(n));
    }
    Ok(())
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.letter_phase() {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        for q in 0..self.num_qubits() {
            write!(f, "{}", self.letter(q).letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse { what: "Pauli string", input: s.to_string() };
        let mut rest = s.trim();
        let mut k = 0u8;
        if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        } else if let Some(r) = rest.strip_prefix('-').or_else(|| rest.strip_prefix('\u{2212}')) {
            rest = r;
            k = 2;
        }
        if let Some(r) = rest.strip_prefix('i') {
            rest = r;
            k += 1;
        }
        let letters = rest
            .chars()
            .map(|c| match c {
                'I' | '_' | '.' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                _ => Err(err()),
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() || letters.len() > MAX_QUBITS {
            return Err(err());
        }
        Ok(PauliString::from_letters(&letters, false)?.times_i_pow(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn matrices_close(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, tol: f64) -> bool {
        a.shape() == b.shape() && a.iter().zip(b.iter()).all(|(x, y)| (x - y).norm() < tol)
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        let prod = p("X").multiply(&p("Z")).unwrap();
        assert_eq!(prod, p("-iY"));
        assert_eq!(prod.to_string(), "-iY");
        assert_eq!(prod.letter_phase(), 3);
    }

    #[test]
    fn hermitian_squares_to_identity() {
        for s in ["X", "Y", "Z", "-XYZ", "+YYIZX", "-ZZZZZZZZZZZZZZZZ"] {
            let q = p(s);
            assert!(q.is_hermitian());
            let sq = q.multiply(&q).unwrap();
            assert!(sq.is_identity());
            assert_eq!(sq.letter_phase(), 0, "{s}");
        }
    }

    #[test]
    fn five_qubit_code_products() {
        let s1 = p("XZZXI");
        let s2 = p("IXZZX");
        let s3 = p("XIXZZ");
        let s4 = p("ZXIXZ");
        assert_eq!(s3.multiply(&s4).unwrap(), p("YXXYI"));
        assert!(s1.commutes(&s2).unwrap());
        assert_eq!(s1.weight(), 4);
        let s5 = s1.multiply(&s2).unwrap().multiply(&s3).unwrap().multiply(&s4).unwrap();
        assert_eq!(s5, p("ZZXIX"));
    }

    #[test]
    fn commutation_basics() {
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
        let id = PauliString::identity(3).unwrap();
        for s in ["XYZ", "ZZI", "YII"] {
            assert!(p(s).commutes(&id).unwrap());
        }
    }

    #[test]
    fn weight_examples() {
        assert_eq!(p("IIIII").weight(), 0);
        assert_eq!(p("XXYII").weight(), 3);
    }

    #[test]
    fn size_mismatch_is_an_error() {
        assert!(matches!(p("X").multiply(&p("XX")), Err(Error::DimensionMismatch { .. })));
        assert!(p("X").commutes(&p("XX")).is_err());
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(p("+XZZXI").to_string(), "+XZZXI");
        assert_eq!(p("\u{2212}iYY").to_string(), "-iYY");
        assert_eq!(p("iZ").to_string(), "+iZ");
        assert!("XQ".parse::<PauliString>().is_err());
        assert!("".parse::<PauliString>().is_err());
        assert!("XXXXXXXXXXXXXXXXX".parse::<PauliString>().is_err());
    }

    #[test]
    fn y_matrix_is_standard() {
        let y = p("Y").to_matrix();
        assert!((y[(0, 1)] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((y[(1, 0)] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn hermitian_predicate_matches_matrices_on_two_qubits() {
        for x in 0..4u16 {
            for z in 0..4u16 {
                for ph in 0..4u8 {
                    let q = PauliString::from_symplectic(2, x, z, ph).unwrap();
                    let m = q.to_matrix();
                    let herm = matrices_close(&m, &m.adjoint(), 1e-12);
                    assert_eq!(herm, q.is_hermitian(), "{q}");
                    assert!(matrices_close(&q.adjoint().to_matrix(), &m.adjoint(), 1e-12));
                }
            }
        }
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = PauliString> {
        let m = ((1u32 << n) - 1) as u16;
        (any::<u16>(), any::<u16>(), 0u8..4)
            .prop_map(move |(x, z, ph)| PauliString::from_symplectic(n, x & m, z & m, ph).unwrap())
    }

    proptest! {
        #[test]
        fn product_matches_matrix_product(
            (a, b) in (1usize..=3).prop_flat_map(|n| (arb_pauli(n), arb_pauli(n)))
        ) {
            let prod = a.multiply(&b).unwrap().to_matrix();
            let want = a.to_matrix() * b.to_matrix();
            prop_assert!(matrices_close(&prod, &want, 1e-12));
        }

        #[test]
        fn reversed_product_differs_by_commutation_sign(
            (a, b) in (1usize..=16).prop_flat_map(|n| (arb_pauli(n), arb_pauli(n)))
        ) {
            let ab = a.multiply(&b).unwrap();
            let ba = b.multiply(&a).unwrap();
            prop_assert!(ab.same_letters(&ba));
            let shift = (ab.phase_exp() + 4 - ba.phase_exp()) & 3;
            prop_assert_eq!(shift == 0, a.commutes(&b).unwrap());
            prop_assert!(shift == 0 || shift == 2);
        }

        #[test]
        fn multiplication_is_associative(
            (a, b, c) in (1usize..=16).prop_flat_map(|n| (arb_pauli(n), arb_pauli(n), arb_pauli(n)))
        ) {
            let l = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let r = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn text_round_trip(a in (1usize..=16).prop_flat_map(arb_pauli)) {
            prop_assert_eq!(a.to_string().parse::<PauliString>().unwrap(), a);
        }
    }
}
