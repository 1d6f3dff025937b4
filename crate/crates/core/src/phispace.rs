//! Canonical affinor structures of a homogeneous Φ-space of order `k`.
//!
//! The automorphism is conjugation by a diagonal element `s ∈ SU(3)` of
//! finite order. It fixes the diagonal subalgebra and rotates each block `m_j`
//! by a root of unity `μ_j`, so `θ = Ad(s)|_m` is stored as three complex
//! multipliers together with the equivalent real 6×6 matrix in the basis
//! `{D(1,0,0), D(i,0,0), D(0,1,0), D(0,i,0), D(0,0,1), D(0,0,i)}`.
//!
//! Blocks with `μ_j = 1` are fixed by Φ and therefore belong to the isotropy
//! algebra; `m` is the sum of the remaining blocks and every operator here is
//! supported on it. The identity of `m` is the projector onto those blocks.
//!
//! All canonical structures are polynomials in `θ` with real coefficients and
//! are evaluated on the real matrix, never on the block multipliers, so the
//! recovered characteristic collections are an honest check.

use std::f64::consts::{PI, TAU};
use std::fmt;

use nalgebra::{Matrix6, SMatrix, SVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::exec::Execution;
use crate::flagmetric::FStructure;
use crate::liealg::{matrix_mul, Matrix3c, SuElement, TangentVector};

/// Tolerance for operator identities and deduplication.
pub const OPERATOR_TOL: f64 = 1e-9;

/// Orders above this are refused by [`enumerate_canonical`]; the number of
/// coefficient vectors grows like `3^(k/2)`.
pub const MAX_ENUMERATION_ORDER: u32 = 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhiError {
    #[error("order must be positive")]
    ZeroOrder,
    #[error("diagonal entries must be unit complex numbers with product 1")]
    NotSpecialUnitary,
    #[error("s^{declared} is not the identity")]
    NotFiniteOrder { declared: u32 },
    #[error("declared order {declared} is not minimal: s^{actual} is already the identity")]
    OrderNotMinimal { declared: u32, actual: u32 },
    #[error("regularity check failed: rank(A) = {rank_a}, rank(A²) = {rank_a2}, dim ker A = {kernel}")]
    RegularityViolation { rank_a: usize, rank_a2: usize, kernel: usize },
    #[error("every coefficient is zero")]
    AllZeroCoefficients,
    #[error("expected {expected} coefficients for order {order}, got {got}")]
    ArityMismatch { order: u32, expected: usize, got: usize },
    #[error("coefficients must lie in {{-1, 0, 1}}, got {0}")]
    InvalidCoefficient(i8),
    #[error("relation table needs an automorphism of order {expected}, got {got}")]
    WrongOrder { expected: u32, got: u32 },
    #[error("enumeration refused for order {0} (limit {MAX_ENUMERATION_ORDER})")]
    OrderTooLarge(u32),
}

/// Inner automorphism `I(s)` of SU(3) by a diagonal element of order `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerAutomorphism {
    diag: [Complex64; 3],
    order: u32,
}

impl InnerAutomorphism {
    pub fn new(diag: [Complex64; 3], order: u32) -> Result<Self, PhiError> {
        if order == 0 {
            return Err(PhiError::ZeroOrder);
        }
        let unit = diag.iter().all(|z| (z.norm() - 1.0).abs() <= 1e-12);
        let det = diag[0] * diag[1] * diag[2];
        if !unit || (det - 1.0).norm() > 1e-12 {
            return Err(PhiError::NotSpecialUnitary);
        }
        let is_identity_power = |p: u32| diag.iter().all(|z| (z.powu(p) - 1.0).norm() <= 1e-9);
        if !is_identity_power(order) {
            return Err(PhiError::NotFiniteOrder { declared: order });
        }
        if let Some(actual) = (1..order).find(|&p| is_identity_power(p)) {
            return Err(PhiError::OrderNotMinimal { declared: order, actual });
        }
        Ok(InnerAutomorphism { diag, order })
    }

    /// `s = diag(ω^{p1}, ω^{p2}, ω^{p3})` with `ω = exp(2πi/k)`.
    pub fn from_root_powers(order: u32, powers: [i64; 3]) -> Result<Self, PhiError> {
        if order == 0 {
            return Err(PhiError::ZeroOrder);
        }
        let diag = powers.map(|p| root_of_unity(order, p));
        InnerAutomorphism::new(diag, order)
    }

    pub fn identity() -> Self {
        InnerAutomorphism { diag: [Complex64::new(1.0, 0.0); 3], order: 1 }
    }

    pub fn diag(&self) -> [Complex64; 3] {
        self.diag
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `Ad(s)X = s X s⁻¹`, computed on the matrix.
    pub fn adjoint(&self, x: &SuElement) -> SuElement {
        let zero = Complex64::new(0.0, 0.0);
        let mut s: Matrix3c = [[zero; 3]; 3];
        let mut s_inv: Matrix3c = [[zero; 3]; 3];
        for j in 0..3 {
            s[j][j] = self.diag[j];
            s_inv[j][j] = self.diag[j].conj();
        }
        let m = matrix_mul(&matrix_mul(&s, &x.to_matrix()), &s_inv);
        SuElement::from_matrix(&m, f64::INFINITY).expect("conjugation preserves su(3)")
    }

    /// Block multipliers `(s1 s̄2, s2 s̄3, s3 s̄1)` of `Ad(s)` on `(a, b, c)`.
    pub fn block_multipliers(&self) -> [Complex64; 3] {
        let [s1, s2, s3] = self.diag;
        [s1 * s2.conj(), s2 * s3.conj(), s3 * s1.conj()]
    }
}

/// `exp(2πi·p/k)`.
pub fn root_of_unity(k: u32, p: i64) -> Complex64 {
    let p = p.rem_euclid(i64::from(k)) as f64;
    Complex64::from_polar(1.0, TAU * p / f64::from(k))
}

/// `θ = Ad(s)|_m` together with its spectral data.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaOperator {
    order: u32,
    multipliers: [Complex64; 3],
    active: [bool; 3],
    matrix: Matrix6<f64>,
    identity: Matrix6<f64>,
    spectrum: Vec<Complex64>,
    quadratic_factors: usize,
    irreducible_factors: usize,
}

type Matrix8 = SMatrix<f64, 8, 8>;

fn su_coords(x: &SuElement) -> SVector<f64, 8> {
    let p = x.phases();
    let d = x.d.to_real();
    SVector::<f64, 8>::from_column_slice(&[p[0], p[1], d[0], d[1], d[2], d[3], d[4], d[5]])
}

fn su_basis(k: usize) -> SuElement {
    let mut v = [0.0; 8];
    v[k] = 1.0;
    let mut d = [0.0; 6];
    d.copy_from_slice(&v[2..]);
    let t = TangentVector::from_real_coords(&d);
    SuElement::new(v[0], v[1], t.a, t.b, t.c)
}

fn numerical_rank(m: &Matrix8, tol: f64) -> usize {
    m.singular_values().iter().filter(|s| **s > tol).count()
}

fn block_rotation(z: Complex64) -> [[f64; 2]; 2] {
    [[z.re, -z.im], [z.im, z.re]]
}

/// Builds `θ` and checks that the Φ-space is regular: `A = φ - id` satisfies
/// `rank A = rank A²` on su(3) and its kernel is exactly the fixed algebra.
pub fn build_theta(auto: &InnerAutomorphism) -> Result<ThetaOperator, PhiError> {
    let multipliers = auto.block_multipliers();
    let active = multipliers.map(|z| (z - 1.0).norm() > OPERATOR_TOL);

    // Fitting check on the full algebra, through the matrix action of Ad(s).
    let mut phi = Matrix8::zeros();
    for k in 0..8 {
        phi.set_column(k, &su_coords(&auto.adjoint(&su_basis(k))));
    }
    let a = phi - Matrix8::identity();
    let rank_a = numerical_rank(&a, OPERATOR_TOL);
    let rank_a2 = numerical_rank(&(a * a), OPERATOR_TOL);
    let kernel = 8 - rank_a;
    let fixed_dim = 2 + 2 * active.iter().filter(|x| !**x).count();
    if rank_a != rank_a2 || kernel != fixed_dim {
        return Err(PhiError::RegularityViolation { rank_a, rank_a2, kernel });
    }

    let mut matrix = Matrix6::zeros();
    let mut identity = Matrix6::zeros();
    for j in 0..3 {
        if !active[j] {
            continue;
        }
        let r = block_rotation(multipliers[j]);
        for (p, row) in r.iter().enumerate() {
            for (q, v) in row.iter().enumerate() {
                matrix[(2 * j + p, 2 * j + q)] = *v;
            }
            identity[(2 * j + p, 2 * j + p)] = 1.0;
        }
    }
    // θ must agree with the m-block of the adjoint matrix.
    let adjoint_m = phi.fixed_view::<6, 6>(2, 2).into_owned();
    debug_assert!((adjoint_m * identity - matrix).amax() < 1e-12);

    let mut spectrum: Vec<Complex64> = Vec::new();
    for j in 0..3 {
        if active[j] {
            for z in [multipliers[j], multipliers[j].conj()] {
                if !spectrum.iter().any(|w| (w - z).norm() <= OPERATOR_TOL) {
                    spectrum.push(z);
                }
            }
        }
    }
    spectrum.sort_by(|x, y| angle(*x).total_cmp(&angle(*y)));
    let non_real = spectrum.iter().filter(|z| z.im.abs() > OPERATOR_TOL).count();
    let real = spectrum.len() - non_real;
    Ok(ThetaOperator {
        order: auto.order(),
        multipliers,
        active,
        matrix,
        identity,
        spectrum,
        quadratic_factors: non_real / 2,
        irreducible_factors: non_real / 2 + real,
    })
}

fn angle(z: Complex64) -> f64 {
    z.arg().rem_euclid(TAU)
}

impl ThetaOperator {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn multipliers(&self) -> [Complex64; 3] {
        self.multipliers
    }

    /// Which blocks lie in `m`.
    pub fn active_blocks(&self) -> [bool; 3] {
        self.active
    }

    pub fn dim(&self) -> usize {
        2 * self.active.iter().filter(|x| **x).count()
    }

    pub fn matrix(&self) -> &Matrix6<f64> {
        &self.matrix
    }

    /// Identity of `m` (projector onto the active blocks).
    pub fn identity(&self) -> &Matrix6<f64> {
        &self.identity
    }

    /// Distinct eigenvalues over ℂ, ordered by argument in `[0, 2π)`.
    pub fn spectrum(&self) -> &[Complex64] {
        &self.spectrum
    }

    /// `s`: number of irreducible quadratic factors of the minimal polynomial.
    pub fn quadratic_factors(&self) -> usize {
        self.quadratic_factors
    }

    /// `s̃`: number of all irreducible real factors of the minimal polynomial.
    pub fn irreducible_factors(&self) -> usize {
        self.irreducible_factors
    }

    pub fn minimal_polynomial_degree(&self) -> usize {
        self.spectrum.len()
    }

    pub fn has_minus_one(&self) -> bool {
        self.spectrum.iter().any(|z| (z + 1.0).norm() <= OPERATOR_TOL)
    }

    /// `θ^m` (with `θ^0` the identity of `m`).
    pub fn power(&self, m: u32) -> Matrix6<f64> {
        (0..m).fold(self.identity, |acc, _| self.matrix * acc)
    }

    /// `Σ c_m θ^m`.
    pub fn polynomial(&self, coeffs: &[f64]) -> Matrix6<f64> {
        let mut acc = Matrix6::zeros();
        let mut pow = self.identity;
        for c in coeffs {
            acc += pow * *c;
            pow = self.matrix * pow;
        }
        acc
    }

    /// Number of free coefficients `u` in the canonical formulas.
    pub fn free_coefficients(&self) -> usize {
        free_coefficients(self.order)
    }
}

/// `u = n` for `k = 2n+1`, `u = n-1` for `k = 2n`.
pub fn free_coefficients(k: u32) -> usize {
    let k = k as usize;
    if k % 2 == 1 {
        k / 2
    } else {
        (k / 2).saturating_sub(1)
    }
}

/// Role of an affinor structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructureTag {
    /// Almost complex, `F² = -1`.
    J,
    /// Almost product, `F² = 1`.
    P,
    /// `F³ + F = 0`.
    F,
    /// `F³ - F = 0`.
    H,
    Other,
}

impl fmt::Display for StructureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StructureTag::J => "J",
            StructureTag::P => "P",
            StructureTag::F => "f",
            StructureTag::H => "h",
            StructureTag::Other => "other",
        };
        f.write_str(s)
    }
}

/// Operator distance measured on the standard basis: the largest column norm
/// of `a - b`.
pub fn operator_distance(a: &Matrix6<f64>, b: &Matrix6<f64>) -> f64 {
    (a - b).column_iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Invariant affinor structure `F` on `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinorStructure {
    pub op: Matrix6<f64>,
    pub tag: StructureTag,
    /// Coefficient vector (`ζ` or `ξ`) the structure was generated from.
    pub coefficients: Vec<i8>,
}

impl AffinorStructure {
    /// Tags `op` by the strongest identity it satisfies relative to `identity`.
    pub fn classify(op: Matrix6<f64>, identity: &Matrix6<f64>) -> StructureTag {
        let sq = op * op;
        let cube = sq * op;
        let zero = Matrix6::zeros();
        if operator_distance(&sq, &(-identity)) <= OPERATOR_TOL {
            StructureTag::J
        } else if operator_distance(&sq, identity) <= OPERATOR_TOL {
            StructureTag::P
        } else if operator_distance(&(cube + op), &zero) <= OPERATOR_TOL {
            StructureTag::F
        } else if operator_distance(&(cube - op), &zero) <= OPERATOR_TOL {
            StructureTag::H
        } else {
            StructureTag::Other
        }
    }

    pub fn is_zero(&self) -> bool {
        self.op.amax() <= OPERATOR_TOL
    }

    pub fn rank(&self) -> usize {
        self.op.singular_values().iter().filter(|s| **s > OPERATOR_TOL).count()
    }

    /// Residual of the identity that defines the tag.
    pub fn defining_residual(&self, identity: &Matrix6<f64>) -> f64 {
        let sq = self.op * self.op;
        let zero = Matrix6::zeros();
        match self.tag {
            StructureTag::J => operator_distance(&sq, &(-identity)),
            StructureTag::P => operator_distance(&sq, identity),
            StructureTag::F => operator_distance(&(sq * self.op + self.op), &zero),
            StructureTag::H => operator_distance(&(sq * self.op - self.op), &zero),
            StructureTag::Other => f64::NAN,
        }
    }

    /// If `F` multiplies every block by `ζ_j·i` with `ζ_j ∈ {-1,0,1}`, the
    /// triple `(ζ1, ζ2, ζ3)`.
    pub fn characteristic(&self) -> Option<[i8; 3]> {
        let mut zeta = [0i8; 3];
        for (j, slot) in zeta.iter_mut().enumerate() {
            for k in 0..3 {
                if k != j {
                    let off = self.op.fixed_view::<2, 2>(2 * j, 2 * k);
                    if off.amax() > OPERATOR_TOL {
                        return None;
                    }
                }
            }
            let b = self.op.fixed_view::<2, 2>(2 * j, 2 * j);
            let z = b[(1, 0)];
            let zi = z.round();
            let expected = [[0.0, -zi], [zi, 0.0]];
            let ok = (0..2).all(|p| (0..2).all(|q| (b[(p, q)] - expected[p][q]).abs() <= OPERATOR_TOL));
            if !ok || zi.abs() > 1.0 {
                return None;
            }
            *slot = zi as i8;
        }
        Some(zeta)
    }

    /// The characteristic collection as an f-structure on the flag manifold.
    pub fn as_fstructure(&self) -> Option<FStructure> {
        self.characteristic().map(FStructure::from_array)
    }
}

fn check_coefficients(order: u32, coeffs: &[i8], expected: usize) -> Result<(), PhiError> {
    if coeffs.len() != expected {
        return Err(PhiError::ArityMismatch { order, expected, got: coeffs.len() });
    }
    if let Some(bad) = coeffs.iter().find(|c| !(-1..=1).contains(*c)) {
        return Err(PhiError::InvalidCoefficient(*bad));
    }
    Ok(())
}

/// Polynomial coefficients of the canonical f-structure with collection `ζ`:
/// `f = (2/k) Σ_m (Σ_j ζ_j sin(2πmj/k)) (θ^m - θ^{k-m})`.
pub fn f_polynomial(order: u32, zeta: &[i8]) -> Vec<f64> {
    let k = order as usize;
    let kf = f64::from(order);
    let mut coeffs = vec![0.0; k.max(1)];
    for m in 1..=zeta.len() {
        let weight: f64 = zeta
            .iter()
            .enumerate()
            .map(|(j, z)| f64::from(*z) * (TAU * (m * (j + 1)) as f64 / kf).sin())
            .sum::<f64>()
            * 2.0
            / kf;
        coeffs[m] += weight;
        coeffs[k - m] -= weight;
    }
    coeffs
}

/// Polynomial coefficients of the canonical h-structure with collection `ξ`.
/// For even `k` the last entry of `ξ` is `ξ_n`, the weight of `-1 ∈ spec θ`.
pub fn h_polynomial(order: u32, xi: &[i8]) -> Vec<f64> {
    let k = order as usize;
    let kf = f64::from(order);
    let u = free_coefficients(order);
    (0..k)
        .map(|m| {
            let cos_sum: f64 = xi[..u]
                .iter()
                .enumerate()
                .map(|(j, x)| f64::from(*x) * (TAU * (m * (j + 1)) as f64 / kf).cos())
                .sum();
            if k % 2 == 1 {
                2.0 * cos_sum / kf
            } else {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                (2.0 * cos_sum + sign * f64::from(xi[u])) / kf
            }
        })
        .collect()
}

/// Canonical f-structure for the collection `ζ` (`u` entries).
pub fn canonical_f(theta: &ThetaOperator, zeta: &[i8]) -> Result<AffinorStructure, PhiError> {
    check_coefficients(theta.order, zeta, theta.free_coefficients())?;
    if zeta.iter().all(|z| *z == 0) {
        return Err(PhiError::AllZeroCoefficients);
    }
    let op = theta.polynomial(&f_polynomial(theta.order, zeta));
    let tag = match AffinorStructure::classify(op, theta.identity()) {
        StructureTag::J => StructureTag::J,
        _ => StructureTag::F,
    };
    let s = AffinorStructure { op, tag, coefficients: zeta.to_vec() };
    debug_assert!(s.defining_residual(theta.identity()) <= OPERATOR_TOL);
    Ok(s)
}

/// Canonical h-structure for the collection `ξ` (`u` entries, plus `ξ_n` when
/// `k = 2n`).
pub fn canonical_h(theta: &ThetaOperator, xi: &[i8]) -> Result<AffinorStructure, PhiError> {
    let expected = theta.free_coefficients() + usize::from(theta.order.is_multiple_of(2));
    check_coefficients(theta.order, xi, expected)?;
    let op = theta.polynomial(&h_polynomial(theta.order, xi));
    let tag = match AffinorStructure::classify(op, theta.identity()) {
        StructureTag::P => StructureTag::P,
        _ => StructureTag::H,
    };
    let s = AffinorStructure { op, tag, coefficients: xi.to_vec() };
    debug_assert!(s.defining_residual(theta.identity()) <= OPERATOR_TOL);
    Ok(s)
}

/// Counts of distinct canonical structures of each type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructureCounts {
    pub p: usize,
    pub j: usize,
    pub f: usize,
    pub h: usize,
}

impl StructureCounts {
    /// Counts predicted from the factor numbers `s` and `s̃`.
    pub fn predicted(s: usize, s_tilde: usize) -> StructureCounts {
        let pow = |b: usize, e: usize| b.pow(e as u32);
        StructureCounts {
            p: pow(2, s_tilde),
            j: if s == s_tilde { pow(2, s) } else { 0 },
            f: pow(3, s) - 1,
            h: pow(3, s_tilde),
        }
    }
}

/// All canonical f- and h-structures of `θ`, deduplicated as operators.
#[derive(Debug, Clone)]
pub struct CanonicalCatalog {
    pub order: u32,
    pub quadratic_factors: usize,
    pub irreducible_factors: usize,
    /// Nonzero f-structures, both signs, in enumeration order.
    pub f_structures: Vec<AffinorStructure>,
    /// h-structures including the zero operator.
    pub h_structures: Vec<AffinorStructure>,
    pub counts: StructureCounts,
    pub predicted: StructureCounts,
}

impl CanonicalCatalog {
    pub fn matches_prediction(&self) -> bool {
        self.counts == self.predicted
    }

    /// f-structures up to sign, using the representative whose first nonzero
    /// block multiplier has positive imaginary part.
    pub fn f_up_to_sign(&self) -> Vec<&AffinorStructure> {
        let mut out: Vec<&AffinorStructure> = Vec::new();
        for s in &self.f_structures {
            if out.iter().any(|o| operator_distance(&o.op, &(-s.op)) <= OPERATOR_TOL) {
                continue;
            }
            if out.iter().any(|o| operator_distance(&o.op, &s.op) <= OPERATOR_TOL) {
                continue;
            }
            out.push(s);
        }
        out.into_iter()
            .map(|s| {
                let positive = first_nonzero_block_sign(&s.op) >= 0.0;
                if positive {
                    s
                } else {
                    self.f_structures
                        .iter()
                        .find(|o| operator_distance(&o.op, &(-s.op)) <= OPERATOR_TOL)
                        .unwrap_or(s)
                }
            })
            .collect()
    }

    pub fn almost_complex(&self) -> impl Iterator<Item = &AffinorStructure> {
        self.f_structures.iter().filter(|s| s.tag == StructureTag::J)
    }

    pub fn almost_product(&self) -> impl Iterator<Item = &AffinorStructure> {
        self.h_structures.iter().filter(|s| s.tag == StructureTag::P)
    }
}

/// Sign of the "imaginary part" `F[2j+1, 2j]` of the first block on which `F`
/// does not vanish.
fn first_nonzero_block_sign(op: &Matrix6<f64>) -> f64 {
    for j in 0..3 {
        let b = op.fixed_view::<2, 2>(2 * j, 2 * j);
        if b.amax() > OPERATOR_TOL {
            return b[(1, 0)].signum();
        }
    }
    0.0
}

fn all_coefficient_vectors(len: usize) -> Vec<Vec<i8>> {
    let mut out = vec![Vec::with_capacity(len)];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                [-1i8, 0, 1].into_iter().map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

fn dedup(structures: Vec<AffinorStructure>) -> Vec<AffinorStructure> {
    let mut out: Vec<AffinorStructure> = Vec::new();
    for s in structures {
        if !out.iter().any(|o| operator_distance(&o.op, &s.op) <= OPERATOR_TOL) {
            out.push(s);
        }
    }
    out
}

/// Enumerates every coefficient vector, evaluates the canonical polynomials
/// and counts distinct operators of each type.
pub fn enumerate_canonical(theta: &ThetaOperator, exec: Execution) -> Result<CanonicalCatalog, PhiError> {
    if theta.order > MAX_ENUMERATION_ORDER {
        return Err(PhiError::OrderTooLarge(theta.order));
    }
    let u = theta.free_coefficients();
    let zetas: Vec<Vec<i8>> = all_coefficient_vectors(u)
        .into_iter()
        .filter(|z| z.iter().any(|c| *c != 0))
        .collect();
    let f_all = exec.map(&zetas, |z| canonical_f(theta, z));
    let f_all: Vec<AffinorStructure> = f_all.into_iter().collect::<Result<_, _>>()?;
    let f_structures: Vec<AffinorStructure> = dedup(f_all).into_iter().filter(|s| !s.is_zero()).collect();

    let xi_len = u + usize::from(theta.order.is_multiple_of(2));
    let xis = all_coefficient_vectors(xi_len);
    let h_all = exec.map(&xis, |x| canonical_h(theta, x));
    let h_structures = dedup(h_all.into_iter().collect::<Result<_, _>>()?);

    let counts = StructureCounts {
        p: h_structures.iter().filter(|s| s.tag == StructureTag::P).count(),
        j: f_structures.iter().filter(|s| s.tag == StructureTag::J).count(),
        f: f_structures.len(),
        h: h_structures.len(),
    };
    Ok(CanonicalCatalog {
        order: theta.order,
        quadratic_factors: theta.quadratic_factors,
        irreducible_factors: theta.irreducible_factors,
        f_structures,
        h_structures,
        counts,
        predicted: StructureCounts::predicted(theta.quadratic_factors, theta.irreducible_factors),
    })
}

/// One operator identity and its residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    pub label: &'static str,
    pub residual: f64,
}

impl Relation {
    pub fn holds(&self) -> bool {
        self.residual <= OPERATOR_TOL
    }
}

fn rel(label: &'static str, lhs: Matrix6<f64>, rhs: Matrix6<f64>) -> Relation {
    Relation { label, residual: operator_distance(&lhs, &rhs) }
}

fn require_order(theta: &ThetaOperator, expected: u32) -> Result<(), PhiError> {
    if theta.order != expected {
        return Err(PhiError::WrongOrder { expected, got: theta.order });
    }
    Ok(())
}

/// Order 3: `J = (1/√3)(θ - θ²)` and `P = 1`.
#[derive(Debug, Clone)]
pub struct OrderThreeReport {
    pub j: AffinorStructure,
    pub relations: Vec<Relation>,
}

pub fn order_three_structures(theta: &ThetaOperator) -> Result<OrderThreeReport, PhiError> {
    require_order(theta, 3)?;
    let id = *theta.identity();
    let j_op = (theta.power(1) - theta.power(2)) / 3f64.sqrt();
    let generated = canonical_f(theta, &[1])?;
    let j = AffinorStructure { op: j_op, tag: AffinorStructure::classify(j_op, &id), coefficients: vec![1] };
    let relations = vec![
        rel("J = (1/√3)(θ - θ²)", generated.op, j_op),
        rel("J² = -1", j_op * j_op, -id),
    ];
    Ok(OrderThreeReport { j, relations })
}

/// Order 4: `P = θ²`, `f = ½(θ - θ³)`, `h1 = ½(1 - θ²)`, `h2 = ½(1 + θ²)`.
#[derive(Debug, Clone)]
pub struct OrderFourReport {
    pub p: Matrix6<f64>,
    pub f: Matrix6<f64>,
    pub h1: Matrix6<f64>,
    pub h2: Matrix6<f64>,
    pub relations: Vec<Relation>,
    /// The five equivalent conditions, in order: `-1 ∉ spec θ`, `P = -1`,
    /// `f` almost complex, `h1 = 1`, `h2 = 0`.
    pub equivalences: [bool; 5],
}

impl OrderFourReport {
    pub fn equivalences_consistent(&self) -> bool {
        self.equivalences.iter().all(|b| *b == self.equivalences[0])
    }
}

pub fn order_four_structures(theta: &ThetaOperator) -> Result<OrderFourReport, PhiError> {
    require_order(theta, 4)?;
    let id = *theta.identity();
    let t2 = theta.power(2);
    let p = t2;
    let f = (theta.power(1) - theta.power(3)) * 0.5;
    let h1 = (id - t2) * 0.5;
    let h2 = (id + t2) * 0.5;
    let relations = vec![
        rel("f = canonical f(ζ=(1))", canonical_f(theta, &[1])?.op, f),
        rel("h1 = canonical h(ξ=(1,0))", canonical_h(theta, &[1, 0])?.op, h1),
        rel("h2 = canonical h(ξ=(0,1))", canonical_h(theta, &[0, 1])?.op, h2),
        rel("P = canonical h(ξ=(-1,1))", canonical_h(theta, &[-1, 1])?.op, p),
        rel("P² = 1", p * p, id),
        rel("f³ + f = 0", f * f * f + f, Matrix6::zeros()),
        rel("h1 + h2 = 1", h1 + h2, id),
        rel("h1² = h1", h1 * h1, h1),
        rel("h2² = h2", h2 * h2, h2),
    ];
    let small = |m: Matrix6<f64>| operator_distance(&m, &Matrix6::zeros()) <= OPERATOR_TOL;
    let equivalences = [
        !theta.has_minus_one(),
        small(p + id),
        small(f * f + id),
        small(h1 - id),
        small(h2),
    ];
    Ok(OrderFourReport { p, f, h1, h2, relations, equivalences })
}

/// `(α, β, γ, δ)` of the order-five table.
pub fn order_five_constants() -> [f64; 4] {
    let r5 = 5f64.sqrt();
    [
        (5.0 + 2.0 * r5).sqrt() / 5.0,
        (5.0 - 2.0 * r5).sqrt() / 5.0,
        (10.0 + 2.0 * r5).sqrt() / 10.0,
        (10.0 - 2.0 * r5).sqrt() / 10.0,
    ]
}

#[derive(Debug, Clone)]
pub struct OrderFiveReport {
    pub p: Matrix6<f64>,
    pub j1: Matrix6<f64>,
    pub j2: Matrix6<f64>,
    pub f1: Matrix6<f64>,
    pub f2: Matrix6<f64>,
    pub h1: Matrix6<f64>,
    pub h2: Matrix6<f64>,
    /// The relation table with `h1 + h2 = 1`.
    pub relations: Vec<Relation>,
    /// `‖h1 + h2 - P‖`. Zero only when `P = 1`; kept so the printed form of
    /// the table can be compared.
    pub h_sum_equals_p_residual: f64,
    /// Conditions equivalent to `spec θ` having two elements, in order:
    /// two-element spectrum, `P = ±1`, `J1 = ±J2`, one of `f1, f2` null with the
    /// other almost complex, one of `h1, h2` the identity with the other null.
    pub degeneracy: [bool; 5],
}

impl OrderFiveReport {
    pub fn all_relations_hold(&self) -> bool {
        self.relations.iter().all(Relation::holds)
    }

    pub fn degeneracy_consistent(&self) -> bool {
        self.degeneracy.iter().all(|b| *b == self.degeneracy[0])
    }
}

pub fn order_five_structures(theta: &ThetaOperator) -> Result<OrderFiveReport, PhiError> {
    require_order(theta, 5)?;
    let [alpha, beta, gamma, delta] = order_five_constants();
    let id = *theta.identity();
    let t: [Matrix6<f64>; 5] = std::array::from_fn(|m| theta.power(m as u32));
    let odd = t[1] - t[4];
    let even = t[2] - t[3];
    let p = (t[1] - t[2] - t[3] + t[4]) / 5f64.sqrt();
    let j1 = odd * alpha - even * beta;
    let j2 = odd * beta + even * alpha;
    let f1 = odd * gamma + even * delta;
    let f2 = odd * delta - even * gamma;
    let h1 = (id + p) * 0.5;
    let h2 = (id - p) * 0.5;
    let zero = Matrix6::zeros();
    let relations = vec![
        rel("J1 P = J2", j1 * p, j2),
        rel("f1 P = f1", f1 * p, f1),
        rel("J1 h1 = f1", j1 * h1, f1),
        rel("J2 h1 = f1", j2 * h1, f1),
        rel("h1 P = h1", h1 * p, h1),
        rel("h2 P = -h2", h2 * p, -h2),
        rel("f2 P = -f2", f2 * p, -f2),
        rel("J2 h2 = -f2", j2 * h2, -f2),
        rel("-J1 h2 = -f2", -(j1 * h2), -f2),
        rel("f1 f2 = 0", f1 * f2, zero),
        rel("h1 h2 = 0", h1 * h2, zero),
        rel("h1 + h2 = 1", h1 + h2, id),
        rel("h1 - h2 = P", h1 - h2, p),
    ];
    let near = |a: Matrix6<f64>, b: Matrix6<f64>| operator_distance(&a, &b) <= OPERATOR_TOL;
    let j_sq = |m: Matrix6<f64>| near(m * m, -id);
    let degeneracy = [
        theta.spectrum().len() == 2,
        near(p, id) || near(p, -id),
        near(j1, j2) || near(j1, -j2),
        (near(f1, zero) && j_sq(f2)) || (near(f2, zero) && j_sq(f1)),
        (near(h1, id) && near(h2, zero)) || (near(h2, id) && near(h1, zero)),
    ];
    Ok(OrderFiveReport {
        p,
        j1,
        j2,
        f1,
        f2,
        h1,
        h2,
        relations,
        h_sum_equals_p_residual: operator_distance(&(h1 + h2), &p),
        degeneracy,
    })
}

/// Exponent `p` with `z = exp(2πi·p/k)`, if `z` is such a root.
pub fn root_exponent(z: Complex64, k: u32) -> Option<u32> {
    let p = (angle(z) * f64::from(k) / TAU).round();
    let candidate = root_of_unity(k, p as i64);
    ((candidate - z).norm() <= 1e-9).then_some(p as u32 % k)
}

/// Angle helper for reports: argument of `z` in units of `π`.
pub fn arg_over_pi(z: Complex64) -> f64 {
    angle(z) / PI
}
