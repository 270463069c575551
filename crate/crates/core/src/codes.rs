//! The two distillation codes.
//!
//! * [`FiveQubitCode`]: the cyclic `[[5,1,3]]` code whose projector commutes
//!   with `T^{⊗5}`.
//! * [`FifteenQubitCode`]: the CSS code built from the punctured Reed–Muller
//!   spaces `L₁ ⊂ L₂ ⊂ F₂¹⁵`, measured through σz and σx stabilizers even
//!   though its second stabilizer family is made of non-Pauli `A(u)`.
//!
//! Binary vectors are `u32` masks with bit `j` the `j`-th coordinate, which is
//! also qubit `j` of the matching [`PauliString`].

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};

use nalgebra::Matrix2;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::magic;
use crate::matrices::{self, c, cis, C64};
use crate::pauli::{reverse_bits, Pauli, PauliString};
use crate::statevec::{ProjectorSpec, StateVector};

/// Largest dimension [`BinarySubspace::elements`] will enumerate.
pub const MAX_ENUM_DIM: usize = 20;

/// Outcome of one named identity check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.to_string(), passed, detail: detail.into() }
    }
}

fn weight(v: u32) -> u32 {
    v.count_ones()
}

fn parity(v: u32) -> bool {
    v.count_ones() & 1 == 1
}

/// A linear subspace of `F₂ⁿ`, stored as a reduced row-echelon basis.
///
/// Each basis vector has a distinct pivot (its lowest set bit) and is zero on
/// every other pivot; vectors are sorted by pivot. The basis is therefore
/// canonical and `==` compares subspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinarySubspace {
    n: usize,
    basis: Vec<u32>,
}

fn rref(rows: &mut Vec<u32>) {
    let mut out: Vec<u32> = Vec::new();
    for &r in rows.iter() {
        let mut v = r;
        for &b in &out {
            if v & (b & b.wrapping_neg()) != 0 {
                v ^= b;
            }
        }
        if v == 0 {
            continue;
        }
        let pivot = v & v.wrapping_neg();
        for b in out.iter_mut() {
            if *b & pivot != 0 {
                *b ^= v;
            }
        }
        out.push(v);
    }
    out.sort_by_key(|b| b.trailing_zeros());
    *rows = out;
}

impl BinarySubspace {
    /// Span of `generators` inside `F₂ⁿ`, `1 ≤ n ≤ 31`.
    pub fn new(n: usize, generators: &[u32]) -> Result<Self> {
        if n == 0 || n > 31 {
            return Err(Error::Invalid(format!("binary length {n} outside 1..=31")));
        }
        if let Some(g) = generators.iter().find(|&&g| g >> n != 0) {
            return Err(Error::Invalid(format!("vector {g:#b} does not fit in {n} bits")));
        }
        let mut basis = generators.to_vec();
        rref(&mut basis);
        Ok(Self { n, basis })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(n, &[])
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    /// Lexicographically smallest element of `v + L`, reading coordinate 0
    /// as the most significant digit.
    pub fn coset_min(&self, v: u32) -> u32 {
        let mut v = v;
        for &b in &self.basis {
            if v & (b & b.wrapping_neg()) != 0 {
                v ^= b;
            }
        }
        v
    }

    pub fn contains(&self, v: u32) -> bool {
        v >> self.n == 0 && self.coset_min(v) == 0
    }

    /// All `2^dim` elements, in Gray-code order starting from 0.
    pub fn elements(&self) -> Result<Vec<u32>> {
        if self.dim() > MAX_ENUM_DIM {
            return Err(Error::TooLarge(self.dim()));
        }
        let mut out = Vec::with_capacity(1 << self.dim());
        let mut v = 0u32;
        out.push(v);
        for i in 1u32..(1 << self.dim()) {
            v ^= self.basis[i.trailing_zeros() as usize];
            out.push(v);
        }
        Ok(out)
    }

    /// `L^⊥ = {w : (w, u) = 0 for all u ∈ L}`.
    pub fn dual(&self) -> Self {
        let pivots: Vec<u32> = self.basis.iter().map(|b| b.trailing_zeros()).collect();
        let mut gens = Vec::new();
        for f in 0..self.n as u32 {
            if pivots.contains(&f) {
                continue;
            }
            let mut v = 1u32 << f;
            for (b, &p) in self.basis.iter().zip(&pivots) {
                if b >> f & 1 == 1 {
                    v |= 1 << p;
                }
            }
            gens.push(v);
        }
        Self::new(self.n, &gens).expect("dual fits")
    }

    /// `L + M`.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        let gens: Vec<u32> = self.basis.iter().chain(&other.basis).copied().collect();
        Self::new(self.n, &gens)
    }

    /// Whether `(u, v) = 0` for every pair of basis vectors.
    pub fn is_orthogonal_to(&self, other: &Self) -> bool {
        self.basis.iter().all(|&u| other.basis.iter().all(|&v| !parity(u & v)))
    }

    pub fn weight_enumerator(&self) -> Result<WeightEnumerator> {
        let mut coeffs = vec![0u64; self.n + 1];
        for v in self.elements()? {
            coeffs[weight(v) as usize] += 1;
        }
        Ok(WeightEnumerator { n: self.n, coeffs })
    }
}

/// Smallest `w` (coordinate 0 most significant) with `(w, rows_i) = rhs_i`
/// for every `i`, or `None` when the system is inconsistent.
pub fn solve_parities(n: usize, rows: &[u32], rhs: &[bool]) -> Result<Option<u32>> {
    if rows.len() != rhs.len() {
        return Err(Error::DimensionMismatch { expected: rows.len(), got: rhs.len() });
    }
    // Augment each row with its right-hand side in bit 31.
    const AUG: u32 = 1 << 31;
    if n > 31 || rows.iter().any(|r| r >> n != 0) {
        return Err(Error::Invalid("parity rows do not fit".into()));
    }
    let mut reduced: Vec<u32> = Vec::new();
    for (&r, &b) in rows.iter().zip(rhs) {
        let mut v = r | if b { AUG } else { 0 };
        for &p in &reduced {
            let low = p & !AUG;
            if v & (low & low.wrapping_neg()) != 0 {
                v ^= p;
            }
        }
        let low = v & !AUG;
        if low == 0 {
            if v & AUG != 0 {
                return Ok(None);
            }
            continue;
        }
        let pivot = low & low.wrapping_neg();
        for p in reduced.iter_mut() {
            if *p & pivot != 0 {
                *p ^= v;
            }
        }
        reduced.push(v);
    }
    let mut w = 0u32;
    for p in &reduced {
        if p & AUG != 0 {
            let low = p & !AUG;
            w |= low & low.wrapping_neg();
        }
    }
    let null = BinarySubspace::new(n, rows)?.dual();
    Ok(Some(null.coset_min(w)))
}

/// `W_L(x, y) = Σ_{u∈L} x^{n−|u|} y^{|u|}`, stored by its coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightEnumerator {
    n: usize,
    coeffs: Vec<u64>,
}

fn binomial(n: i128, k: i128) -> i128 {
    if k < 0 || k > n {
        return 0;
    }
    let mut r = 1i128;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

impl WeightEnumerator {
    pub fn from_coefficients(coeffs: Vec<u64>) -> Self {
        Self { n: coeffs.len() - 1, coeffs }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    /// `coefficients()[w]` = number of words of weight `w`.
    pub fn coefficients(&self) -> &[u64] {
        &self.coeffs
    }

    /// Number of words, `W(1, 1)`.
    pub fn size(&self) -> u64 {
        self.coeffs.iter().sum()
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(w, &a)| a as f64 * x.powi((self.n - w) as i32) * y.powi(w as i32))
            .sum()
    }

    /// Enumerator of the dual code: `W_{L^⊥}(x,y) = W_L(x+y, x−y)/|L|`,
    /// computed exactly with Krawtchouk polynomials.
    pub fn macwilliams(&self) -> Result<Self> {
        let n = self.n as i128;
        let size = self.size() as i128;
        let mut out = Vec::with_capacity(self.n + 1);
        for j in 0..=n {
            let mut acc = 0i128;
            for (w, &a) in self.coeffs.iter().enumerate() {
                let w = w as i128;
                let k: i128 = (0..=j).map(|s| (if s % 2 == 0 { 1 } else { -1 }) * binomial(w, s) * binomial(n - w, j - s)).sum();
                acc += a as i128 * k;
            }
            if acc % size != 0 || acc < 0 {
                return Err(Error::Invalid("coefficients are not the enumerator of a linear code".into()));
            }
            out.push((acc / size) as u64);
        }
        Ok(Self { n: self.n, coeffs: out })
    }
}

/// `(1, 1, …, 1)` in `F₂ⁿ`.
pub fn all_ones(n: usize) -> u32 {
    ((1u64 << n) - 1) as u32
}

/// `[x_j]` for `j = 1..4`. Coordinate `p` holds the value at input `a = p+1`,
/// with `x_1` the most significant input bit.
pub fn linear_generators() -> [u32; 4] {
    std::array::from_fn(|k| {
        let mut v = 0;
        for p in 0..15 {
            if ((p + 1) >> (3 - k)) & 1 == 1 {
                v |= 1 << p;
            }
        }
        v
    })
}

/// `[x_i x_j]` for `i < j`, in the order 12, 13, 14, 23, 24, 34.
pub fn quadratic_generators() -> [u32; 6] {
    let x = linear_generators();
    let mut out = [0; 6];
    let mut k = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            out[k] = x[i] & x[j];
            k += 1;
        }
    }
    out
}

/// `(L₁, L₂)`: the punctured first- and second-order Reed–Muller spaces.
pub fn reed_muller_spaces() -> (BinarySubspace, BinarySubspace) {
    let lin = linear_generators();
    let gens: Vec<u32> = lin.iter().chain(quadratic_generators().iter()).copied().collect();
    (BinarySubspace::new(15, &lin).expect("valid"), BinarySubspace::new(15, &gens).expect("valid"))
}

/// Negative control: `(L₁, L₂')` where `L₂'` has the generator `[x₃x₄]`
/// replaced by a weight-1 vector. Breaks the even-weight and duality checks.
pub fn corrupted_reed_muller_spaces() -> (BinarySubspace, BinarySubspace) {
    let lin = linear_generators();
    let mut gens: Vec<u32> = lin.to_vec();
    gens.extend(&quadratic_generators()[..5]);
    gens.push(1);
    (BinarySubspace::new(15, &lin).expect("valid"), BinarySubspace::new(15, &gens).expect("valid"))
}

/// The five weight/duality properties of the Reed–Muller pair, checked by
/// exhaustive enumeration.
pub fn verify_subspace_properties_for(l1: &BinarySubspace, l2: &BinarySubspace) -> Result<Vec<Check>> {
    let ones = BinarySubspace::new(l1.len(), &[all_ones(l1.len())])?;
    let e1 = l1.elements()?;
    let e2 = l2.elements()?;
    let l2_dual = l2.dual();
    let e2d = l2_dual.elements()?;

    let bad1 = e1.iter().filter(|&&u| weight(u) % 8 != 0).count();
    let bad2 = e2.iter().filter(|&&v| weight(v) % 2 != 0).count();
    let dual1_ok = l1.dual() == l2.sum(&ones)?;
    let dual2_ok = l2_dual == l1.sum(&ones)?;
    let bad4 = e1.iter().flat_map(|&u| e1.iter().map(move |&v| u & v)).filter(|&uv| weight(uv) % 4 != 0).count();
    let bad5 = e1.iter().flat_map(|&u| e2d.iter().map(move |&v| u & v)).filter(|&uv| weight(uv) % 4 != 0).count();

    Ok(vec![
        Check::new("L1 weights are 0 mod 8", bad1 == 0, format!("{} vectors, {bad1} violations", e1.len())),
        Check::new("L2 weights are even", bad2 == 0, format!("{} vectors, {bad2} violations", e2.len())),
        Check::new(
            "L1^perp = L2 + [1] and L2^perp = L1 + [1]",
            dual1_ok && dual2_ok,
            format!("first {dual1_ok}, second {dual2_ok}; dim L2^perp = {}", l2_dual.dim()),
        ),
        Check::new("|u.v| = 0 mod 4 on L1 x L1", bad4 == 0, format!("{} pairs, {bad4} violations", e1.len() * e1.len())),
        Check::new(
            "|u.v| = 0 mod 4 on L1 x L2^perp",
            bad5 == 0,
            format!("{} pairs, {bad5} violations", e1.len() * e2d.len()),
        ),
    ])
}

pub fn verify_subspace_properties() -> Result<Vec<Check>> {
    let (l1, l2) = reed_muller_spaces();
    verify_subspace_properties_for(&l1, &l2)
}

// ---------------------------------------------------------------------------
// Five-qubit code

/// How `Π|T_x⟩` sits relative to the logical basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProjectionClass {
    Zero,
    AlongT0,
    AlongT1,
    Mixed,
}

/// One row of the five-qubit projection table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectionEntry {
    /// Bit `j` selects `|T_1⟩` on qubit `j`.
    pub x: u32,
    pub weight: u32,
    /// `‖Π|T_x⟩‖²`.
    pub norm_sq: f64,
    /// `⟨T_0^L|Π|T_x⟩` and `⟨T_1^L|Π|T_x⟩`.
    #[serde(skip)]
    pub amp_t0: C64,
    #[serde(skip)]
    pub amp_t1: C64,
    pub class: ProjectionClass,
}

/// `⟨T_00000|Π|T_00000⟩` evaluated in independent ways.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrivialInputOverlap {
    /// `(1/16) Σ_{g∈G} ⟨T_0^{⊗5}|g|T_0^{⊗5}⟩` from Bloch components and signs.
    pub group_sum: f64,
    /// `(1/16) Σ_{g∈G} 3^{−|g|/2}`.
    pub weight_formula: f64,
    /// Statevector `‖Π|T_00000⟩‖²`.
    pub statevector_t0: f64,
    /// Statevector `‖Π|T_11111⟩‖²`.
    pub statevector_t1: f64,
}

/// The `[[5,1,3]]` code with stabilizers `XZZXI` and its cyclic shifts.
#[derive(Clone, Debug)]
pub struct FiveQubitCode {
    stabilizers: [PauliString; 4],
    projector: ProjectorSpec,
    t0_logical: StateVector,
    t1_logical: StateVector,
}

impl FiveQubitCode {
    pub fn new() -> Result<Self> {
        let stabilizers = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"].map(|s| s.parse::<PauliString>().expect("literal"));
        let projector = ProjectorSpec::stabilized_by(&stabilizers)?;
        let (t1, p1) = Self::t_x_state(0)?.projected(&projector)?;
        let (t0, p0) = Self::t_x_state(0b11111)?.projected(&projector)?;
        let t1_logical = t1.ok_or(Error::ZeroProbability)?;
        let t0_logical = t0.ok_or(Error::ZeroProbability)?;
        debug_assert!((p0 - 1.0 / 6.0).abs() < 1e-12 && (p1 - 1.0 / 6.0).abs() < 1e-12);
        Ok(Self { stabilizers, projector, t0_logical, t1_logical })
    }

    pub fn stabilizers(&self) -> &[PauliString; 4] {
        &self.stabilizers
    }

    /// `S₅ = S₁S₂S₃S₄`.
    pub fn s5(&self) -> PauliString {
        self.stabilizers.iter().skip(1).fold(self.stabilizers[0], |acc, s| acc.multiply(s).expect("same size"))
    }

    /// The 16 products of subsets of `S₁…S₄`.
    pub fn group(&self) -> Vec<PauliString> {
        (0..16u32)
            .map(|mask| {
                (0..4).filter(|k| mask >> k & 1 == 1).fold(PauliString::identity(5).expect("n=5"), |acc, k| {
                    acc.multiply(&self.stabilizers[k]).expect("same size")
                })
            })
            .collect()
    }

    pub fn logical_x() -> PauliString {
        "XXXXX".parse().expect("literal")
    }

    pub fn logical_y() -> PauliString {
        "YYYYY".parse().expect("literal")
    }

    pub fn logical_z() -> PauliString {
        "ZZZZZ".parse().expect("literal")
    }

    /// `Π = (1/16) ∏ (I + S_j)`.
    pub fn projector(&self) -> &ProjectorSpec {
        &self.projector
    }

    /// `√6 Π|T_11111⟩`.
    pub fn t0_logical(&self) -> &StateVector {
        &self.t0_logical
    }

    /// `√6 Π|T_00000⟩`.
    pub fn t1_logical(&self) -> &StateVector {
        &self.t1_logical
    }

    /// `|T_{x_0}⟩ ⊗ … ⊗ |T_{x_4}⟩` with bit `j` of `x` choosing qubit `j`.
    pub fn t_x_state(x: u32) -> Result<StateVector> {
        let (t0, t1) = (magic::t0_state(), magic::t1_state());
        let factors: Vec<[C64; 2]> = (0..5).map(|j| if x >> j & 1 == 1 { t1 } else { t0 }).collect();
        StateVector::product(&factors)
    }

    /// `T̂ = T^{⊗5}`.
    pub fn apply_t_hat(state: &mut StateVector) -> Result<()> {
        state.apply_1q_on(&matrices::t_op(), 0b11111)
    }

    pub fn project_t_x(&self, x: u32) -> Result<ProjectionEntry> {
        let (state, norm_sq) = Self::t_x_state(x)?.projected(&self.projector)?;
        let (amp_t0, amp_t1) = match &state {
            Some(s) => {
                let k = norm_sq.sqrt();
                (self.t0_logical.inner(s)? * k, self.t1_logical.inner(s)? * k)
            }
            None => (c(0.0, 0.0), c(0.0, 0.0)),
        };
        let class = if norm_sq < 1e-18 {
            ProjectionClass::Zero
        } else if (amp_t0.norm_sqr() - norm_sq).abs() < 1e-9 * norm_sq.max(1e-12) + 1e-15 {
            ProjectionClass::AlongT0
        } else if (amp_t1.norm_sqr() - norm_sq).abs() < 1e-9 * norm_sq.max(1e-12) + 1e-15 {
            ProjectionClass::AlongT1
        } else {
            ProjectionClass::Mixed
        };
        Ok(ProjectionEntry { x, weight: weight(x), norm_sq, amp_t0, amp_t1, class })
    }

    /// `Π|T_x⟩` for all 32 inputs.
    pub fn projection_table(&self) -> Result<Vec<ProjectionEntry>> {
        (0..32).map(|x| self.project_t_x(x)).collect()
    }

    pub fn trivial_input_overlap(&self) -> Result<TrivialInputOverlap> {
        let r = magic::Qubit1State::from_pure(magic::t0_state())?.bloch();
        let mut group_sum = 0.0;
        let mut weight_formula = 0.0;
        for g in self.group() {
            let sign = g.sign().ok_or_else(|| Error::NotHermitian(g.to_string()))? as f64;
            let prod: f64 = g
                .letters()
                .iter()
                .map(|l| match l {
                    Pauli::I => 1.0,
                    Pauli::X => r[0],
                    Pauli::Y => r[1],
                    Pauli::Z => r[2],
                })
                .product();
            group_sum += sign * prod / 16.0;
            weight_formula += 3f64.powf(-(g.weight() as f64) / 2.0) / 16.0;
        }
        let norm = |x| -> Result<f64> { Ok(Self::t_x_state(x)?.projected(&self.projector)?.1) };
        Ok(TrivialInputOverlap { group_sum, weight_formula, statevector_t0: norm(0)?, statevector_t1: norm(0b11111)? })
    }

    /// Checks of the projection table: zero rows, the two extreme rows, and
    /// the weight-2 and weight-3 aggregate norms.
    pub fn verify_projection_table(&self) -> Result<Vec<Check>> {
        let table = self.projection_table()?;
        let sixth: f64 = 1.0 / 6.0;
        let zeros_max = table.iter().filter(|e| e.weight == 1 || e.weight == 4).map(|e| e.norm_sq).fold(0.0, f64::max);
        let sum = |w: u32| table.iter().filter(|e| e.weight == w).map(|e| e.norm_sq).sum::<f64>();
        let classes_ok = table.iter().all(|e| {
            let want = match e.weight {
                1 | 4 => ProjectionClass::Zero,
                0 | 3 => ProjectionClass::AlongT1,
                _ => ProjectionClass::AlongT0,
            };
            e.class == want
        });
        let e0 = &table[0];
        let e31 = &table[31];
        let extreme = (e0.amp_t1 - c(sixth.sqrt(), 0.0)).norm() < 1e-9 && (e31.amp_t0 - c(sixth.sqrt(), 0.0)).norm() < 1e-9;
        Ok(vec![
            Check::new("Pi|T_x> = 0 for |x| in {1,4}", zeros_max.sqrt() < 1e-9, format!("max norm {:.2e}", zeros_max.sqrt())),
            Check::new(
                "Pi|T_00000> = 6^-1/2 |T1L>, Pi|T_11111> = 6^-1/2 |T0L>",
                extreme,
                format!("amplitudes {:.12} and {:.12}", e0.amp_t1, e31.amp_t0),
            ),
            Check::new("|x|=2 rows along T0L, |x|=3 along T1L", classes_ok, ""),
            Check::new(
                "sum over |x|=2 and |x|=3 of norm^2 = 5/6",
                (sum(2) - 5.0 / 6.0).abs() < 1e-9 && (sum(3) - 5.0 / 6.0).abs() < 1e-9,
                format!("{:.12}, {:.12}", sum(2), sum(3)),
            ),
        ])
    }

    pub fn verify_trivial_input_overlap(&self) -> Result<Check> {
        let a = self.trivial_input_overlap()?;
        let sixth: f64 = 1.0 / 6.0;
        let ok = [a.group_sum, a.weight_formula, a.statevector_t0, a.statevector_t1].iter().all(|v| (v - sixth).abs() < 1e-9)
            && (a.group_sum - a.statevector_t0).abs() < 1e-9;
        Ok(Check::new(
            "<T_00000|Pi|T_00000> = 1/6",
            ok,
            format!(
                "group sum {:.12}, statevector {:.12} (T_11111: {:.12})",
                a.group_sum, a.statevector_t0, a.statevector_t1
            ),
        ))
    }
}

// ---------------------------------------------------------------------------
// Fifteen-qubit code

/// `CSS(A, L_A; B, L_B)`: stabilizers `A(u)` for `u ∈ L_A` and `B(v)` for
/// `v ∈ L_B`, where `A(u) = ⊗_j A^{u_j}`.
#[derive(Clone, Debug)]
pub struct CssCode {
    pub op_a: Matrix2<C64>,
    pub space_a: BinarySubspace,
    pub op_b: Matrix2<C64>,
    pub space_b: BinarySubspace,
}

impl CssCode {
    pub fn len(&self) -> usize {
        self.space_a.len()
    }

    pub fn num_logical(&self) -> usize {
        self.len() - self.space_a.dim() - self.space_b.dim()
    }

    /// `A² = B² = I`, `AB = −BA` and `(u, v) = 0` on the two bases.
    pub fn is_well_defined(&self) -> bool {
        let id = matrices::identity();
        let (a, b) = (&self.op_a, &self.op_b);
        matrices::max_abs_diff(&(a * a), &id) < 1e-12
            && matrices::max_abs_diff(&(b * b), &id) < 1e-12
            && matrices::max_abs_diff(&(a * b), &(-(b * a))) < 1e-12
            && self.space_a.is_orthogonal_to(&self.space_b)
    }
}

/// `CSS(σz, L₂; A, L₁)` with `A = (σx+σy)/√2`.
pub fn build_15qubit_css() -> CssCode {
    let (l1, l2) = reed_muller_spaces();
    CssCode { op_a: matrices::a_op(), space_a: l1, op_b: matrices::sigma_z(), space_b: l2 }
}

/// `A(w)` on a state in place: `A|0⟩ = e^{iπ/4}|1⟩`, `A|1⟩ = e^{−iπ/4}|0⟩`.
pub fn apply_a_string(state: &mut StateVector, w: u32) -> Result<()> {
    let n = state.num_qubits();
    if w >> n != 0 {
        return Err(Error::QubitOutOfRange { index: 31 - w.leading_zeros() as usize, n });
    }
    let wm = reverse_bits(w, n) as usize;
    let k = weight(w) as i32;
    // phase = e^{iπ/4 (|w ∧ ¬b| − |w ∧ b|)} = e^{iπ/4 (k − 2|w ∧ b|)}
    let table: Vec<C64> = (0..=k).map(|m| cis(FRAC_PI_4 * (k - 2 * m) as f64)).collect();
    let amps = state.amps_mut();
    let old = amps.to_vec();
    for (i, a) in old.iter().enumerate() {
        amps[i ^ wm] = table[(i & wm).count_ones() as usize] * a;
    }
    Ok(())
}

/// Norms and residuals from the σx-for-A substitution checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectorIdentityReport {
    pub probes: usize,
    /// `max ‖P_H(0,0)ψ − P_G(0,0)ψ‖`.
    pub code_space_residual: f64,
    /// `max ‖P_H(μ,0)ψ − A(w) P_G(0,0) A(w)ψ‖` over one sampled `μ` per probe.
    pub rotated_residual: f64,
    /// `max ‖A(u)|v⟩ − σx(u)|v⟩‖` over `u ∈ L₁`, `v ∈ L₂^⊥`.
    pub basis_residual: f64,
    /// `1 − ⟨A_0^L|P_G(0,0)|A_0^L⟩`.
    pub a0_residual: f64,
}

impl ProjectorIdentityReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.code_space_residual < tol && self.rotated_residual < tol && self.basis_residual < tol && self.a0_residual < tol
    }
}

/// Residuals of the transversal-`W` check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AutomorphismReport {
    pub w_in_clifford_group: bool,
    /// `max(‖WσxW† − A‖, ‖WσzW† − σz‖)`.
    pub conjugation_residual: f64,
    /// `max ‖W^{⊗15} P W^{†⊗15} ψ − Pψ‖` over the probes.
    pub projector_residual: f64,
    pub probes: usize,
}

impl AutomorphismReport {
    pub fn passed(&self, tol: f64) -> bool {
        !self.w_in_clifford_group && self.conjugation_residual < 1e-12 && self.projector_residual < tol
    }
}

/// The 15-qubit code together with the stabilizer lists used to measure it.
#[derive(Clone, Debug)]
pub struct FifteenQubitCode {
    css: CssCode,
    z_gens: Vec<u32>,
    x_gens: Vec<u32>,
    z_stabs: Vec<PauliString>,
    x_stabs: Vec<PauliString>,
    a0_logical: StateVector,
    a1_logical: StateVector,
}

pub const N15: usize = 15;

impl FifteenQubitCode {
    pub fn new() -> Result<Self> {
        let css = build_15qubit_css();
        let z_gens: Vec<u32> = linear_generators().iter().chain(quadratic_generators().iter()).copied().collect();
        let x_gens: Vec<u32> = linear_generators().to_vec();
        let z_stabs = z_gens.iter().map(|&v| PauliString::z_on(N15, v)).collect::<Result<Vec<_>>>()?;
        let x_stabs = x_gens.iter().map(|&u| PauliString::x_on(N15, u)).collect::<Result<Vec<_>>>()?;
        let pz = ProjectorSpec::stabilized_by(&z_stabs)?;
        let logical = |f: [C64; 2]| -> Result<StateVector> {
            let (s, p) = StateVector::product(&[f; N15])?.projected(&pz)?;
            debug_assert!((p - 1.0 / 1024.0).abs() < 1e-12);
            s.ok_or(Error::ZeroProbability)
        };
        let a0_logical = logical(magic::a0_state())?;
        let a1_logical = logical(magic::a1_state())?;
        Ok(Self { css, z_gens, x_gens, z_stabs, x_stabs, a0_logical, a1_logical })
    }

    pub fn css(&self) -> &CssCode {
        &self.css
    }

    /// `σz([x_j])` then `σz([x_i x_j])`: ten generators of `σz(L₂)`.
    pub fn z_stabilizers(&self) -> &[PauliString] {
        &self.z_stabs
    }

    /// `σx([x_j])`, which act like `A([x_j])` once the σz syndrome is trivial.
    pub fn x_stabilizers(&self) -> &[PauliString] {
        &self.x_stabs
    }

    pub fn stabilizer_generators(&self) -> Vec<PauliString> {
        self.z_stabs.iter().chain(&self.x_stabs).copied().collect()
    }

    pub fn logical_x() -> PauliString {
        PauliString::x_on(N15, all_ones(N15)).expect("n=15")
    }

    pub fn logical_y() -> PauliString {
        PauliString::from_letters(&[Pauli::Y; N15], false).expect("n=15")
    }

    /// `Ẑ = −σz^{⊗15}`.
    pub fn logical_z() -> PauliString {
        PauliString::z_on(N15, all_ones(N15)).expect("n=15").negated()
    }

    /// `√|L₂| Π_z |A_{0…0}⟩`.
    pub fn a0_logical(&self) -> &StateVector {
        &self.a0_logical
    }

    /// `√|L₂| Π_z |A_{1…1}⟩`.
    pub fn a1_logical(&self) -> &StateVector {
        &self.a1_logical
    }

    /// `|A_{u_0}⟩ ⊗ … ⊗ |A_{u_14}⟩`.
    pub fn a_u_state(u: u32) -> Result<StateVector> {
        let (a0, a1) = (magic::a0_state(), magic::a1_state());
        let factors: Vec<[C64; 2]> = (0..N15).map(|j| if u >> j & 1 == 1 { a1 } else { a0 }).collect();
        StateVector::product(&factors)
    }

    /// The smallest `w` with `(w, g_i) = μ_i` for the σz generators `g_i`;
    /// bit `i` of `mu` set means generator `i` returned `−1`.
    pub fn correction(&self, mu: u32) -> u32 {
        let rhs: Vec<bool> = (0..self.z_gens.len()).map(|i| mu >> i & 1 == 1).collect();
        solve_parities(N15, &self.z_gens, &rhs).expect("sizes match").expect("generators are independent")
    }

    fn z_projector(&self, mu: u32) -> Result<ProjectorSpec> {
        let terms = self.z_stabs.iter().enumerate().map(|(i, s)| (*s, if mu >> i & 1 == 1 { -1 } else { 1 })).collect();
        ProjectorSpec::new(terms)
    }

    fn project_terms(state: &mut StateVector, spec: &ProjectorSpec) {
        for (p, sign) in spec.terms() {
            state.project_pauli_unnormalized(p, *sign);
        }
    }

    /// `P_G(μ, 0) ψ` on an unnormalized vector: σz syndrome `μ`, σx syndrome 0.
    fn apply_g_projector(&self, state: &mut StateVector, mu: u32) -> Result<()> {
        Self::project_terms(state, &self.z_projector(mu)?);
        for s in &self.x_stabs {
            state.project_pauli_unnormalized(s, 1);
        }
        Ok(())
    }

    /// `P_H(μ, 0) ψ` using the non-Pauli stabilizers `A([x_j])`.
    fn apply_h_projector(&self, state: &mut StateVector, mu: u32) -> Result<()> {
        Self::project_terms(state, &self.z_projector(mu)?);
        for &u in &self.x_gens {
            let mut moved = state.clone();
            apply_a_string(&mut moved, u)?;
            for (a, b) in state.amps_mut().iter_mut().zip(moved.amplitudes()) {
                *a = (*a + b) * 0.5;
            }
        }
        Ok(())
    }

    /// Projector onto the code space `G(0,0)` applied to `ψ` (unnormalized).
    pub fn code_projection(&self, psi: &StateVector) -> Result<StateVector> {
        let mut s = psi.clone();
        self.apply_g_projector(&mut s, 0)?;
        Ok(s)
    }

    pub fn verify_projector_identities<R: Rng + ?Sized>(&self, probes: usize, rng: &mut R) -> Result<ProjectorIdentityReport> {
        let mut code_space_residual: f64 = 0.0;
        let mut rotated_residual: f64 = 0.0;
        let pz = self.z_projector(0)?;
        for k in 0..probes {
            let psi = match k {
                0 => self.a0_logical.clone(),
                _ if k % 2 == 1 => StateVector::random(N15, rng)?,
                _ => {
                    let mut s = StateVector::random(N15, rng)?;
                    s.project(&pz)?;
                    s
                }
            };
            let mut ph = psi.clone();
            self.apply_h_projector(&mut ph, 0)?;
            let mut pg = psi.clone();
            self.apply_g_projector(&mut pg, 0)?;
            code_space_residual = code_space_residual.max(distance(&ph, &pg));

            let mu = rng.random_range(0..1u32 << self.z_gens.len());
            let w = self.correction(mu);
            let mut lhs = psi.clone();
            self.apply_h_projector(&mut lhs, mu)?;
            let mut rhs = psi;
            apply_a_string(&mut rhs, w)?;
            self.apply_g_projector(&mut rhs, 0)?;
            apply_a_string(&mut rhs, w)?;
            rotated_residual = rotated_residual.max(distance(&lhs, &rhs));
        }

        let (l1, l2) = reed_muller_spaces();
        let mut basis_residual: f64 = 0.0;
        for &u in &l1.elements()? {
            for &v in &l2.dual().elements()? {
                let idx = reverse_bits(v, N15) as usize;
                let mut a = StateVector::basis(N15, idx)?;
                apply_a_string(&mut a, u)?;
                let mut x = StateVector::basis(N15, idx)?;
                x.apply_pauli(&PauliString::x_on(N15, u)?)?;
                basis_residual = basis_residual.max(distance(&a, &x));
            }
        }

        let p = self.code_projection(&self.a0_logical)?;
        let a0_residual = (1.0 - self.a0_logical.inner(&p)?.re).abs();
        Ok(ProjectorIdentityReport { probes, code_space_residual, rotated_residual, basis_residual, a0_residual })
    }

    pub fn verify_transversal_automorphism<R: Rng + ?Sized>(&self, probes: usize, rng: &mut R) -> Result<AutomorphismReport> {
        let w = matrices::w_op();
        let conjugation_residual = matrices::max_abs_diff(&matrices::conjugate(&w, &matrices::sigma_x()), &matrices::a_op())
            .max(matrices::max_abs_diff(&matrices::conjugate(&w, &matrices::sigma_z()), &matrices::sigma_z()));
        let mut projector_residual: f64 = 0.0;
        for _ in 0..probes {
            let psi = StateVector::random(N15, rng)?;
            let direct = self.code_projection(&psi)?;
            let mut moved = psi;
            moved.apply_weight_phase(-FRAC_PI_4);
            let mut moved = self.code_projection(&moved)?;
            moved.apply_weight_phase(FRAC_PI_4);
            projector_residual = projector_residual.max(distance(&direct, &moved));
        }
        Ok(AutomorphismReport {
            w_in_clifford_group: magic::is_clifford1(&w),
            conjugation_residual,
            projector_residual,
            probes,
        })
    }
}

fn distance(a: &StateVector, b: &StateVector) -> f64 {
    a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// `T^{⊗5}` eigenphase of `Π|T_x⟩`: `e^{iπ/3 (5 − 2|x|)}`.
pub fn t_hat_phase(x: u32) -> C64 {
    cis(FRAC_PI_3 * (5.0 - 2.0 * weight(x) as f64))
}

/// Every identity the `verify` command reports, in a fixed order. `spaces`
/// lets a caller substitute a deliberately broken `(L₁, L₂)` pair.
pub fn verification_suite(spaces: &(BinarySubspace, BinarySubspace), rng: &mut impl Rng) -> Result<Vec<Check>> {
    let (l1, l2) = spaces;
    let mut out = verify_subspace_properties_for(l1, l2)?;

    let w1 = l1.weight_enumerator()?;
    let direct = l1.dual().weight_enumerator()?;
    let transformed = w1.macwilliams()?;
    let want_l1 = {
        let mut v = vec![0u64; 16];
        v[0] = 1;
        v[8] = 15;
        v
    };
    out.push(Check::new(
        "W_L1 = x^15 + 15 x^7 y^8",
        w1.coefficients() == want_l1.as_slice(),
        format!("{:?}", w1.coefficients()),
    ));
    let twice = transformed.macwilliams()?;
    out.push(Check::new(
        "MacWilliams(W_L1) = W_(L1^perp), applied twice = identity",
        transformed == direct && twice == w1,
        format!("{:?}", transformed.coefficients()),
    ));

    let five = FiveQubitCode::new()?;
    out.extend(five.verify_projection_table()?);
    out.push(five.verify_trivial_input_overlap()?);

    let fifteen = FifteenQubitCode::new()?;
    let report = fifteen.verify_projector_identities(50, rng)?;
    out.push(Check::new(
        "H(0,eta) = G(0,eta) and H(mu,eta) = A(w) G(0,eta)",
        report.passed(1e-6),
        format!(
            "{} probes: code space {:.2e}, rotated {:.2e}, basis {:.2e}",
            report.probes, report.code_space_residual, report.rotated_residual, report.basis_residual
        ),
    ));
    let auto = fifteen.verify_transversal_automorphism(8, rng)?;
    out.push(Check::new(
        "W^(x15) preserves the code space, W not Clifford",
        auto.passed(1e-6),
        format!("projector residual {:.2e}, W in C(1): {}", auto.projector_residual, auto.w_in_clifford_group),
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn subspace_basics() {
        let s = BinarySubspace::new(4, &[0b0011, 0b0110, 0b0101]).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.contains(0b0101));
        assert!(!s.contains(0b0001));
        assert_eq!(s.elements().unwrap().len(), 4);
        let d = s.dual();
        assert_eq!(d.dim(), 2);
        assert_eq!(d.dual(), s);
        assert!(s.is_orthogonal_to(&d));
        assert_eq!(BinarySubspace::zero(6).unwrap().weight_enumerator().unwrap().coefficients(), &[1, 0, 0, 0, 0, 0, 0]);
        assert!(BinarySubspace::new(3, &[0b1000]).is_err());
    }

    #[test]
    fn coset_minimum_is_lexicographic() {
        // coordinate 0 most significant: prefer clearing bit 0 first
        let s = BinarySubspace::new(3, &[0b011]).unwrap();
        assert_eq!(s.coset_min(0b001), 0b010);
        assert_eq!(s.coset_min(0b111), 0b100);
    }

    #[test]
    fn parity_solver() {
        let rows = [0b011, 0b110];
        let w = solve_parities(3, &rows, &[true, false]).unwrap().unwrap();
        assert!(parity(w & rows[0]));
        assert!(!parity(w & rows[1]));
        // brute-force minimality in string order
        let key = |v: u32| reverse_bits(v, 3);
        let best = (0..8u32).filter(|&v| parity(v & rows[0]) && !parity(v & rows[1])).min_by_key(|&v| key(v)).unwrap();
        assert_eq!(w, best);
        assert_eq!(solve_parities(3, &[0b1, 0b1], &[true, false]).unwrap(), None);
    }

    #[test]
    fn reed_muller_examples() {
        let x = linear_generators();
        assert_eq!(x[0].count_ones(), 8);
        assert_eq!((x[0] & x[1]).count_ones(), 4);
        // [x_4] is 1 at odd inputs: positions 0, 2, 4, ...
        assert_eq!(x[3] & 0b111, 0b101);
        let (l1, l2) = reed_muller_spaces();
        assert_eq!((l1.dim(), l2.dim()), (4, 10));
        let ones = BinarySubspace::new(15, &[all_ones(15)]).unwrap();
        assert_eq!(l1.dual(), l2.sum(&ones).unwrap());
        assert_eq!(l2.dual(), l1.sum(&ones).unwrap());
    }

    #[test]
    fn subspace_properties_pass_and_detect_corruption() {
        assert!(verify_subspace_properties().unwrap().iter().all(|c| c.passed));
        let (l1, broken) = corrupted_reed_muller_spaces();
        let checks = verify_subspace_properties_for(&l1, &broken).unwrap();
        assert!(!checks[2].passed);
        assert!(!checks[1].passed);
    }

    #[test]
    fn weight_enumerators() {
        let (l1, l2) = reed_muller_spaces();
        let w1 = l1.weight_enumerator().unwrap();
        for (x, y) in [(1.0f64, 1.0f64), (0.3, 0.7), (2.0, -1.5)] {
            let want = x.powi(15) + 15.0 * x.powi(7) * y.powi(8);
            assert!((w1.eval(x, y) - want).abs() < 1e-9 * want.abs().max(1.0));
        }
        let dual = l1.dual().weight_enumerator().unwrap();
        assert_eq!(w1.macwilliams().unwrap(), dual);
        assert_eq!(dual.macwilliams().unwrap(), w1);
        let w2 = l2.weight_enumerator().unwrap();
        assert_eq!(w2.macwilliams().unwrap().macwilliams().unwrap(), w2);
        for eps in [0.0, 0.05, 0.2, 0.5] {
            let lhs = dual.eval(eps, 1.0 - eps);
            let rhs = w1.eval(1.0, 1.0 - 2.0 * eps) / 16.0;
            assert!((lhs - rhs).abs() < 1e-14);
        }
        assert!(WeightEnumerator::from_coefficients(vec![1, 1, 0]).macwilliams().is_ok());
        assert!(WeightEnumerator::from_coefficients(vec![1, 1, 1]).macwilliams().is_err());
    }

    #[test]
    fn five_qubit_structure() {
        let code = FiveQubitCode::new().unwrap();
        assert_eq!(code.s5(), p("ZZXIX"));
        assert_eq!(code.stabilizers()[2].multiply(&code.stabilizers()[3]).unwrap(), p("YXXYI"));
        let group = code.group();
        assert_eq!(group.len(), 16);
        assert!(group.iter().all(|g| g.sign() == Some(1)));
        assert_eq!(group.iter().filter(|g| g.weight() == 4).count(), 15);
        for a in code.stabilizers() {
            for b in code.stabilizers() {
                assert!(a.commutes(b).unwrap());
            }
        }
        // logical basis
        let (t0, t1) = (code.t0_logical(), code.t1_logical());
        assert!(t0.inner(t1).unwrap().norm() < 1e-12);
        assert!((t0.norm() - 1.0).abs() < 1e-12);
        for s in code.stabilizers() {
            assert!((t0.expectation(s).unwrap() - 1.0).abs() < 1e-12);
        }
        // X̂Ŷ = iẐ
        let xy = FiveQubitCode::logical_x().multiply(&FiveQubitCode::logical_y()).unwrap();
        assert_eq!(xy, FiveQubitCode::logical_z().times_i_pow(1));
    }

    #[test]
    fn t_hat_commutes_with_projector_and_has_logical_eigenphases() {
        let code = FiveQubitCode::new().unwrap();
        let mut rng = seeded(17);
        for _ in 0..4 {
            let psi = StateVector::random(5, &mut rng).unwrap();
            let (a, pa) = psi.projected(code.projector()).unwrap();
            let mut a = a.unwrap();
            FiveQubitCode::apply_t_hat(&mut a).unwrap();
            let mut tpsi = psi.clone();
            FiveQubitCode::apply_t_hat(&mut tpsi).unwrap();
            let (b, pb) = tpsi.projected(code.projector()).unwrap();
            assert!((pa - pb).abs() < 1e-12);
            assert!((a.inner(&b.unwrap()).unwrap() - c(1.0, 0.0)).norm() < 1e-9);
        }
        for (state, phase) in [(code.t0_logical(), FRAC_PI_3), (code.t1_logical(), -FRAC_PI_3)] {
            let mut s = state.clone();
            FiveQubitCode::apply_t_hat(&mut s).unwrap();
            assert!((state.inner(&s).unwrap() - cis(phase)).norm() < 1e-12);
        }
        for x in 0..32 {
            let (proj, _) = FiveQubitCode::t_x_state(x).unwrap().projected(code.projector()).unwrap();
            if let Some(v) = proj {
                let mut tv = v.clone();
                FiveQubitCode::apply_t_hat(&mut tv).unwrap();
                assert!((v.inner(&tv).unwrap() - t_hat_phase(x)).norm() < 1e-9, "x = {x:05b}");
            }
        }
    }

    #[test]
    fn projection_table_and_overlap() {
        let code = FiveQubitCode::new().unwrap();
        for check in code.verify_projection_table().unwrap() {
            assert!(check.passed, "{check:?}");
        }
        let table = code.projection_table().unwrap();
        assert!((table[0].norm_sq - 1.0 / 6.0).abs() < 1e-12);
        assert_eq!(table[0b00001].class, ProjectionClass::Zero);
        let a = code.trivial_input_overlap().unwrap();
        assert!((a.group_sum - 1.0 / 6.0).abs() < 1e-12);
        assert!((a.weight_formula - 1.0 / 6.0).abs() < 1e-12);
        assert!((a.statevector_t1 - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn fifteen_qubit_css_structure() {
        let css = build_15qubit_css();
        assert!(css.is_well_defined());
        assert_eq!(css.num_logical(), 1);
        let a = css.op_a;
        let a0 = magic::apply(&a, magic::a0_state());
        let a1 = magic::apply(&a, magic::a1_state());
        assert!((a0[0] - magic::a0_state()[0]).norm() + (a0[1] - magic::a0_state()[1]).norm() < 1e-12);
        assert!((a1[0] + magic::a1_state()[0]).norm() + (a1[1] + magic::a1_state()[1]).norm() < 1e-12);
    }

    #[test]
    fn fifteen_qubit_logical_states() {
        let code = FifteenQubitCode::new().unwrap();
        let (a0, a1) = (code.a0_logical(), code.a1_logical());
        assert!(a0.inner(a1).unwrap().norm() < 1e-12);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((a0.expectation(&FifteenQubitCode::logical_x()).unwrap() - r).abs() < 1e-12);
        assert!((a0.expectation(&FifteenQubitCode::logical_y()).unwrap() - r).abs() < 1e-12);
        assert!(a0.expectation(&FifteenQubitCode::logical_z()).unwrap().abs() < 1e-12);
        for s in code.stabilizer_generators() {
            assert!((a0.expectation(&s).unwrap() - 1.0).abs() < 1e-12);
            assert!((a1.expectation(&s).unwrap() - 1.0).abs() < 1e-12);
            // logical operators preserve the code space
            for l in [FifteenQubitCode::logical_x(), FifteenQubitCode::logical_z()] {
                assert!(l.commutes(&s).unwrap());
            }
        }
        // explicit amplitudes: 2^{-5/2} e^{iπ|u|/4} on L2^perp
        let (_, l2) = reed_muller_spaces();
        for v in l2.dual().elements().unwrap() {
            let amp = a0.amplitudes()[reverse_bits(v, 15) as usize];
            let want = cis(FRAC_PI_4 * v.count_ones() as f64) * 2f64.powf(-2.5);
            assert!((amp - want).norm() < 1e-12);
        }
    }

    #[test]
    fn correction_is_trivial_for_trivial_syndrome() {
        let code = FifteenQubitCode::new().unwrap();
        assert_eq!(code.correction(0), 0);
        let (_, l2) = reed_muller_spaces();
        let _ = l2;
        for mu in [1u32, 0b1010000001, 0b1111111111] {
            let w = code.correction(mu);
            for (i, g) in code.z_gens.iter().enumerate() {
                assert_eq!(parity(w & g), mu >> i & 1 == 1);
            }
        }
    }

    #[test]
    fn projector_identities_and_automorphism_small_probe_set() {
        let code = FifteenQubitCode::new().unwrap();
        let mut rng = seeded(5);
        let report = code.verify_projector_identities(6, &mut rng).unwrap();
        assert!(report.passed(1e-6), "{report:?}");
        let auto = code.verify_transversal_automorphism(2, &mut rng).unwrap();
        assert!(auto.passed(1e-6), "{auto:?}");
        // negative control: σz(1) does not preserve the A-type projector
        let mut psi = StateVector::random(15, &mut rng).unwrap();
        let before = code.code_projection(&psi).unwrap();
        psi.apply_1q(&matrices::hadamard(), 0).unwrap();
        let after = code.code_projection(&psi).unwrap();
        assert!(distance(&before, &after) > 1e-3);
    }
}
