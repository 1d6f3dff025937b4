//! su(3) in the split coordinates `E(α1,α2,α3) ⊕ D(a,b,c) = h ⊕ m`.
//!
//! An element is stored through its six coordinates rather than as a 3×3
//! matrix. The matrix picture is
//!
//! ```text
//! [  α1    a    conj(c) ]
//! [ -ā     α2   b       ]
//! [ -c    -b̄    α3      ]
//! ```
//!
//! with `α_j` purely imaginary and `α1 + α2 + α3 = 0`. The diagonal part is
//! kept as the real phases `φ_j` with `α_j = i·φ_j`.
//!
//! The bracket is evaluated in closed form on coordinates. [`matrix_bracket`]
//! computes the same thing through the matrix commutator and is used as the
//! independent check.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

pub type Matrix3c = [[Complex64; 3]; 3];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieError {
    #[error("matrix is not anti-Hermitian (residual {0:.3e})")]
    NotAntiHermitian(f64),
    #[error("matrix is not traceless (trace {0})")]
    NotTraceless(Complex64),
}

/// One of the three two-dimensional summands `m_1, m_2, m_3` of `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    M1,
    M2,
    M3,
}

impl Block {
    pub const ALL: [Block; 3] = [Block::M1, Block::M2, Block::M3];

    pub fn index(self) -> usize {
        match self {
            Block::M1 => 0,
            Block::M2 => 1,
            Block::M3 => 2,
        }
    }

    pub fn from_index(j: usize) -> Block {
        Block::ALL[j % 3]
    }

    /// `m_{j+1}` with indices taken mod 3.
    pub fn next(self) -> Block {
        Block::from_index(self.index() + 1)
    }

    /// `m_{j+2}` with indices taken mod 3.
    pub fn after_next(self) -> Block {
        Block::from_index(self.index() + 2)
    }
}

/// Orthogonal summand of `su(3) = h ⊕ m1 ⊕ m2 ⊕ m3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    H,
    M(Block),
}

/// Tangent vector at the base point: `D(a,b,c) ∈ m`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TangentVector {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

impl TangentVector {
    pub const ZERO: TangentVector = TangentVector { a: ZERO, b: ZERO, c: ZERO };

    pub fn new(a: Complex64, b: Complex64, c: Complex64) -> Self {
        TangentVector { a, b, c }
    }

    pub fn from_real(a: f64, b: f64, c: f64) -> Self {
        TangentVector::new(a.into(), b.into(), c.into())
    }

    pub fn from_components(v: [Complex64; 3]) -> Self {
        TangentVector::new(v[0], v[1], v[2])
    }

    pub fn components(&self) -> [Complex64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn component(&self, block: Block) -> Complex64 {
        self.components()[block.index()]
    }

    /// Vector concentrated in a single block.
    pub fn in_block(block: Block, z: Complex64) -> Self {
        let mut v = [ZERO; 3];
        v[block.index()] = z;
        TangentVector::from_components(v)
    }

    pub fn block_part(&self, block: Block) -> Self {
        TangentVector::in_block(block, self.component(block))
    }

    /// Multiplies each block coordinate by its own complex factor.
    pub fn scale_blocks(&self, factors: [Complex64; 3]) -> Self {
        TangentVector::new(self.a * factors[0], self.b * factors[1], self.c * factors[2])
    }

    /// Real coordinates in the basis
    /// `{D(1,0,0), D(i,0,0), D(0,1,0), D(0,i,0), D(0,0,1), D(0,0,i)}`.
    pub fn to_real(&self) -> [f64; 6] {
        [self.a.re, self.a.im, self.b.re, self.b.im, self.c.re, self.c.im]
    }

    pub fn from_real_coords(x: &[f64; 6]) -> Self {
        TangentVector::new(
            Complex64::new(x[0], x[1]),
            Complex64::new(x[2], x[3]),
            Complex64::new(x[4], x[5]),
        )
    }

    /// The six standard basis vectors, in the order used by [`Self::to_real`].
    pub fn basis() -> [TangentVector; 6] {
        std::array::from_fn(|k| {
            let mut x = [0.0; 6];
            x[k] = 1.0;
            TangentVector::from_real_coords(&x)
        })
    }

    /// Norm for the base inner product `⟨·,·⟩_o`.
    pub fn norm(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.a.norm().max(self.b.norm()).max(self.c.norm())
    }

    /// Components drawn independently and uniformly from the closed unit disk.
    pub fn random_in_disk<R: Rng + ?Sized>(rng: &mut R) -> Self {
        TangentVector::new(disk_sample(rng), disk_sample(rng), disk_sample(rng))
    }
}

impl Add for TangentVector {
    type Output = TangentVector;
    fn add(self, o: TangentVector) -> TangentVector {
        TangentVector::new(self.a + o.a, self.b + o.b, self.c + o.c)
    }
}

impl AddAssign for TangentVector {
    fn add_assign(&mut self, o: TangentVector) {
        *self = *self + o;
    }
}

impl Sub for TangentVector {
    type Output = TangentVector;
    fn sub(self, o: TangentVector) -> TangentVector {
        TangentVector::new(self.a - o.a, self.b - o.b, self.c - o.c)
    }
}

impl Neg for TangentVector {
    type Output = TangentVector;
    fn neg(self) -> TangentVector {
        TangentVector::new(-self.a, -self.b, -self.c)
    }
}

impl Mul<f64> for TangentVector {
    type Output = TangentVector;
    fn mul(self, k: f64) -> TangentVector {
        TangentVector::new(self.a * k, self.b * k, self.c * k)
    }
}

impl fmt::Display for TangentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Element of su(3) in `E ⊕ D` coordinates.
///
/// `phi` holds the phases of `α1` and `α2`; `α3 = -α1 - α2` is derived, so the
/// element is traceless by construction.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SuElement {
    phi: [f64; 2],
    pub d: TangentVector,
}

impl SuElement {
    pub const ZERO: SuElement = SuElement { phi: [0.0; 2], d: TangentVector::ZERO };

    /// Builds `E(iφ1, iφ2, -iφ1-iφ2) ⊕ D(a,b,c)`.
    pub fn new(phi1: f64, phi2: f64, a: Complex64, b: Complex64, c: Complex64) -> Self {
        SuElement { phi: [phi1, phi2], d: TangentVector::new(a, b, c) }
    }

    /// Pure isotropy element `E(iφ1, iφ2, iφ3)`; `φ3` is ignored in favour of
    /// `-φ1-φ2`.
    pub fn isotropy(phi1: f64, phi2: f64) -> Self {
        SuElement { phi: [phi1, phi2], d: TangentVector::ZERO }
    }

    pub fn phases(&self) -> [f64; 3] {
        [self.phi[0], self.phi[1], -self.phi[0] - self.phi[1]]
    }

    /// The diagonal entries `α_j` as purely imaginary numbers.
    pub fn alphas(&self) -> [Complex64; 3] {
        self.phases().map(|p| Complex64::new(0.0, p))
    }

    pub fn tangent(&self) -> TangentVector {
        self.d
    }

    pub fn isotropy_part(&self) -> SuElement {
        SuElement { phi: self.phi, d: TangentVector::ZERO }
    }

    pub fn project(&self, part: Part) -> SuElement {
        match part {
            Part::H => self.isotropy_part(),
            Part::M(block) => SuElement::from(self.d.block_part(block)),
        }
    }

    pub fn to_matrix(&self) -> Matrix3c {
        let [a1, a2, a3] = self.alphas();
        let TangentVector { a, b, c } = self.d;
        [
            [a1, a, c.conj()],
            [-a.conj(), a2, b],
            [-c, -b.conj(), a3],
        ]
    }

    /// Inverse of [`Self::to_matrix`]. Fails unless `m` lies in su(3) up to `tol`.
    pub fn from_matrix(m: &Matrix3c, tol: f64) -> Result<SuElement, LieError> {
        let mut skew = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                skew = skew.max((m[i][j] + m[j][i].conj()).norm());
            }
        }
        if skew > tol {
            return Err(LieError::NotAntiHermitian(skew));
        }
        let trace = m[0][0] + m[1][1] + m[2][2];
        if trace.norm() > tol {
            return Err(LieError::NotTraceless(trace));
        }
        Ok(SuElement::new(m[0][0].im, m[1][1].im, m[0][1], m[1][2], -m[2][0]))
    }

    pub fn norm(&self) -> f64 {
        killing_inner(self, self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        let p = self.phases();
        p.iter().fold(self.d.max_abs(), |acc, x| acc.max(x.abs()))
    }

    pub fn random_in_disk<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let phi1 = rng.random_range(-1.0..=1.0);
        let phi2 = rng.random_range(-1.0..=1.0);
        SuElement { phi: [phi1, phi2], d: TangentVector::random_in_disk(rng) }
    }
}

impl From<TangentVector> for SuElement {
    fn from(d: TangentVector) -> Self {
        SuElement { phi: [0.0; 2], d }
    }
}

impl Add for SuElement {
    type Output = SuElement;
    fn add(self, o: SuElement) -> SuElement {
        SuElement { phi: [self.phi[0] + o.phi[0], self.phi[1] + o.phi[1]], d: self.d + o.d }
    }
}

impl Sub for SuElement {
    type Output = SuElement;
    fn sub(self, o: SuElement) -> SuElement {
        self + (-o)
    }
}

impl Neg for SuElement {
    type Output = SuElement;
    fn neg(self) -> SuElement {
        SuElement { phi: [-self.phi[0], -self.phi[1]], d: -self.d }
    }
}

impl Mul<f64> for SuElement {
    type Output = SuElement;
    fn mul(self, k: f64) -> SuElement {
        SuElement { phi: [self.phi[0] * k, self.phi[1] * k], d: self.d * k }
    }
}

impl fmt::Display for SuElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [p1, p2, p3] = self.phases();
        write!(f, "E({p1}i, {p2}i, {p3}i) + {}", self.d)
    }
}

fn disk_sample<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let r = rng.random::<f64>().sqrt();
    let angle = rng.random_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(r, angle)
}

/// `[X, Y]` for `X, Y ∈ m`, split into its `h` phases and `m` part.
fn bracket_mm(x: &TangentVector, y: &TangentVector) -> SuElement {
    let (a, b, c) = (x.a, x.b, x.c);
    let (a1, b1, c1) = (y.a, y.b, y.c);
    let d = TangentVector::new(
        (b * c1 - b1 * c).conj(),
        (c * a1 - c1 * a).conj(),
        (a * b1 - a1 * b).conj(),
    );
    // E-part: -2 E(Im(..)) with E carrying the factor i on the diagonal.
    let e1 = -2.0 * (a * a1.conj() + c.conj() * c1).im;
    let e2 = -2.0 * (a.conj() * a1 + b * b1.conj()).im;
    SuElement { phi: [e1, e2], d }
}

/// `[Z, X]` for `Z ∈ h`, `X ∈ m`.
fn bracket_hm(z: &[Complex64; 3], x: &TangentVector) -> TangentVector {
    TangentVector::new(
        z[0] * x.a - x.a * z[1],
        z[1] * x.b - x.b * z[2],
        z[2] * x.c - x.c * z[0],
    )
}

/// Lie bracket of su(3), evaluated on coordinates.
pub fn bracket(x: &SuElement, y: &SuElement) -> SuElement {
    let zx = x.alphas();
    let zy = y.alphas();
    let mm = bracket_mm(&x.d, &y.d);
    let d = mm.d + bracket_hm(&zx, &y.d) - bracket_hm(&zy, &x.d);
    SuElement { phi: mm.phi, d }
}

/// Bracket of two tangent vectors; both `h` and `m` components are kept.
pub fn bracket_tangent(x: &TangentVector, y: &TangentVector) -> SuElement {
    bracket_mm(x, y)
}

/// `[X, Y]_m`.
pub fn bracket_m(x: &TangentVector, y: &TangentVector) -> TangentVector {
    bracket_mm(x, y).d
}

/// `[Z, X]` for an isotropy element `Z` acting on a tangent vector.
pub fn bracket_isotropy(z: &SuElement, x: &TangentVector) -> TangentVector {
    bracket_hm(&z.alphas(), x)
}

pub fn matrix_mul(x: &Matrix3c, y: &Matrix3c) -> Matrix3c {
    let mut out = [[ZERO; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = (0..3).map(|k| x[i][k] * y[k][j]).sum();
        }
    }
    out
}

/// Bracket through the 3×3 matrix commutator.
pub fn matrix_bracket(x: &SuElement, y: &SuElement) -> SuElement {
    let (mx, my) = (x.to_matrix(), y.to_matrix());
    let xy = matrix_mul(&mx, &my);
    let yx = matrix_mul(&my, &mx);
    let mut comm = [[ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            comm[i][j] = xy[i][j] - yx[i][j];
        }
    }
    // A commutator of anti-Hermitian traceless matrices stays in su(3).
    SuElement::from_matrix(&comm, f64::INFINITY).expect("commutator leaves su(3)")
}

/// `⟨X, Y⟩_o = -½ Re tr(XY)`, evaluated on coordinates.
pub fn killing_inner(x: &SuElement, y: &SuElement) -> f64 {
    let px = x.phases();
    let py = y.phases();
    let diag: f64 = px.iter().zip(py.iter()).map(|(p, q)| p * q).sum::<f64>() * 0.5;
    diag + tangent_inner(&x.d, &y.d)
}

/// `⟨X, Y⟩_o` restricted to `m`.
pub fn tangent_inner(x: &TangentVector, y: &TangentVector) -> f64 {
    (x.a * y.a.conj()).re + (x.b * y.b.conj()).re + (x.c * y.c.conj()).re
}

/// `-½ Re tr(XY)` on the matrix reconstructions.
pub fn matrix_killing_inner(x: &SuElement, y: &SuElement) -> f64 {
    let p = matrix_mul(&x.to_matrix(), &y.to_matrix());
    -0.5 * (p[0][0] + p[1][1] + p[2][2]).re
}

pub fn project(x: &SuElement, part: Part) -> SuElement {
    x.project(part)
}

/// Largest deviation between the coordinate bracket and the matrix commutator
/// over `samples` random pairs.
pub fn bracket_self_test<R: Rng + ?Sized>(rng: &mut R, samples: usize) -> f64 {
    (0..samples)
        .map(|_| {
            let x = SuElement::random_in_disk(rng);
            let y = SuElement::random_in_disk(rng);
            (bracket(&x, &y) - matrix_bracket(&x, &y)).max_abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn d(a: Complex64, b: Complex64, c: Complex64) -> SuElement {
        SuElement::from(TangentVector::new(a, b, c))
    }

    fn close(x: &SuElement, y: &SuElement, tol: f64) -> bool {
        (*x - *y).max_abs() <= tol
    }

    #[test]
    fn bracket_of_m1_and_m2_is_m3() {
        let one = Complex64::new(1.0, 0.0);
        let x = d(one, ZERO, ZERO);
        let y = d(ZERO, one, ZERO);
        let expected = d(ZERO, ZERO, one);
        assert!(close(&bracket(&x, &y), &expected, 0.0));
        assert!(close(&matrix_bracket(&x, &y), &expected, 1e-15));
    }

    #[test]
    fn bracket_with_itself_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let x = SuElement::random_in_disk(&mut rng);
            assert_eq!(bracket(&x, &x).max_abs(), 0.0);
        }
    }

    #[test]
    fn isotropy_acts_by_phase_difference() {
        // E(i,-i,0) acting on D(1,0,0).
        let z = SuElement::isotropy(1.0, -1.0);
        let x = d(Complex64::new(1.0, 0.0), ZERO, ZERO);
        let expected = d(Complex64::new(0.0, 2.0), ZERO, ZERO);
        assert!(close(&bracket(&z, &x), &expected, 0.0));
        assert!(close(&matrix_bracket(&z, &x), &expected, 1e-15));
    }

    #[test]
    fn closed_form_matches_matrix_commutator() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        assert!(bracket_self_test(&mut rng, 2000) < 1e-14);
    }

    #[test]
    fn killing_inner_examples() {
        let one = Complex64::new(1.0, 0.0);
        let x = d(one, ZERO, ZERO);
        let y = d(ZERO, one, ZERO);
        assert_abs_diff_eq!(killing_inner(&x, &x), 1.0);
        assert_abs_diff_eq!(matrix_killing_inner(&x, &x), 1.0);
        assert_abs_diff_eq!(killing_inner(&x, &y), 0.0);
    }

    #[test]
    fn killing_inner_matches_trace_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let x = SuElement::random_in_disk(&mut rng);
            let y = SuElement::random_in_disk(&mut rng);
            assert_abs_diff_eq!(killing_inner(&x, &y), matrix_killing_inner(&x, &y), epsilon = 1e-14);
            assert_abs_diff_eq!(killing_inner(&x, &y), killing_inner(&y, &x), epsilon = 1e-15);
        }
    }

    #[test]
    fn projection_extracts_coordinates() {
        let x = SuElement::new(1.0, -1.0, 1.0.into(), 2.0.into(), 3.0.into());
        let m2 = project(&x, Part::M(Block::M2));
        assert_eq!(m2, d(ZERO, 2.0.into(), ZERO));
        let sum = project(&x, Part::H)
            + project(&x, Part::M(Block::M1))
            + project(&x, Part::M(Block::M2))
            + project(&x, Part::M(Block::M3));
        assert_eq!(sum, x);
    }

    #[test]
    fn from_matrix_rejects_hermitian_input() {
        let mut m = [[ZERO; 3]; 3];
        m[0][1] = Complex64::new(1.0, 0.0);
        m[1][0] = Complex64::new(1.0, 0.0);
        assert!(matches!(SuElement::from_matrix(&m, 1e-12), Err(LieError::NotAntiHermitian(_))));
        let mut t = [[ZERO; 3]; 3];
        t[0][0] = Complex64::i();
        assert!(matches!(SuElement::from_matrix(&t, 1e-12), Err(LieError::NotTraceless(_))));
    }

    #[test]
    fn matrix_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let x = SuElement::random_in_disk(&mut rng);
        let back = SuElement::from_matrix(&x.to_matrix(), 1e-14).unwrap();
        assert!(close(&x, &back, 1e-15));
    }

    #[test]
    fn block_indices_cycle() {
        assert_eq!(Block::M3.next(), Block::M1);
        assert_eq!(Block::M2.after_next(), Block::M1);
    }
}
