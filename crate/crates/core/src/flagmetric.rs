//! Invariant geometry of the flag manifold `SU(3)/T_max`.
//!
//! Every invariant metric is diagonal in the blocks `m1 ⊕ m2 ⊕ m3` with
//! positive weights `(λ1, λ2, λ3)`, and every invariant f-structure multiplies
//! block `j` by `ζ_j·i` with `ζ_j ∈ {-1, 0, 1}`. On top of these the module
//! provides the Nomizu map of the Levi-Civita connection, the covariant
//! derivative `∇_X(f)Y`, the composition tensor `T`, the fundamental form and
//! the Nijenhuis tensors.
//!
//! `∇f` and `T` are available twice: through the Nomizu map (`nabla_f`,
//! `composition_t`) and through the closed coordinate formulas
//! (`nabla_f_closed`, `composition_t_closed`). The Nomizu path is the
//! reference; the closed forms are checked against it.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::liealg::{bracket_m, bracket_tangent, bracket_isotropy, Block, TangentVector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlagError {
    #[error("metric weights must be positive and finite, got ({0}, {1}, {2})")]
    NonPositiveMetric(f64, f64, f64),
    #[error("characteristic entries must lie in {{-1, 0, 1}}, got {0}")]
    InvalidZeta(i32),
    #[error("the zero f-structure is not admissible")]
    ZeroStructure,
    #[error("f-structure {0} is not almost complex (some ζ_j = 0)")]
    NotAlmostComplex(FStructure),
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
}

/// Invariant Riemannian metric with characteristic collection `(λ1, λ2, λ3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metric {
    lambda: [f64; 3],
}

impl Metric {
    pub fn new(l1: f64, l2: f64, l3: f64) -> Result<Metric, FlagError> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if ok(l1) && ok(l2) && ok(l3) {
            Ok(Metric { lambda: [l1, l2, l3] })
        } else {
            Err(FlagError::NonPositiveMetric(l1, l2, l3))
        }
    }

    /// The metric `(1, t, s)`.
    pub fn from_ts(t: f64, s: f64) -> Result<Metric, FlagError> {
        Metric::new(1.0, t, s)
    }

    pub fn naturally_reductive() -> Metric {
        Metric { lambda: [1.0; 3] }
    }

    pub fn lambdas(&self) -> [f64; 3] {
        self.lambda
    }

    pub fn lambda(&self, block: Block) -> f64 {
        self.lambda[block.index()]
    }

    pub fn t(&self) -> f64 {
        self.lambda[1] / self.lambda[0]
    }

    pub fn s(&self) -> f64 {
        self.lambda[2] / self.lambda[0]
    }

    /// Representative `(1, t, s)` of the homothety class.
    pub fn normalized(&self) -> Metric {
        Metric { lambda: [1.0, self.t(), self.s()] }
    }

    pub fn scaled(&self, c: f64) -> Result<Metric, FlagError> {
        Metric::new(self.lambda[0] * c, self.lambda[1] * c, self.lambda[2] * c)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.lambda;
        write!(f, "({a}, {b}, {c})")
    }
}

/// Invariant f-structure `D(a,b,c) ↦ D(ζ1·i·a, ζ2·i·b, ζ3·i·c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FStructure {
    zeta: [i8; 3],
}

/// The thirteen structures up to sign, in the order J1..J4, f1..f9.
const NAMED: [(&str, [i8; 3]); 13] = [
    ("J1", [1, 1, 1]),
    ("J2", [1, -1, 1]),
    ("J3", [1, 1, -1]),
    ("J4", [1, -1, -1]),
    ("f1", [1, 1, 0]),
    ("f2", [1, 0, 1]),
    ("f3", [0, 1, 1]),
    ("f4", [1, -1, 0]),
    ("f5", [1, 0, -1]),
    ("f6", [0, 1, -1]),
    ("f7", [1, 0, 0]),
    ("f8", [0, 1, 0]),
    ("f9", [0, 0, 1]),
];

impl FStructure {
    /// Accepts any triple in `{-1,0,1}³`, including the zero structure.
    pub fn new(z1: i32, z2: i32, z3: i32) -> Result<FStructure, FlagError> {
        let mut zeta = [0i8; 3];
        for (slot, z) in zeta.iter_mut().zip([z1, z2, z3]) {
            if !(-1..=1).contains(&z) {
                return Err(FlagError::InvalidZeta(z));
            }
            *slot = z as i8;
        }
        Ok(FStructure { zeta })
    }

    /// Like [`FStructure::new`] but rejects `(0,0,0)`.
    pub fn nonzero(z1: i32, z2: i32, z3: i32) -> Result<FStructure, FlagError> {
        let f = FStructure::new(z1, z2, z3)?;
        if f.rank() == 0 {
            return Err(FlagError::ZeroStructure);
        }
        Ok(f)
    }

    pub(crate) const fn from_array(zeta: [i8; 3]) -> FStructure {
        FStructure { zeta }
    }

    /// The thirteen sign-canonical nonzero structures, J1..J4 then f1..f9.
    pub fn all() -> Vec<FStructure> {
        NAMED.iter().map(|(_, z)| FStructure { zeta: *z }).collect()
    }

    pub fn zeta(&self) -> [i8; 3] {
        self.zeta
    }

    pub fn zeta_f64(&self) -> [f64; 3] {
        self.zeta.map(f64::from)
    }

    pub fn zeta_of(&self, block: Block) -> i8 {
        self.zeta[block.index()]
    }

    pub fn rank(&self) -> usize {
        2 * self.zeta.iter().filter(|z| **z != 0).count()
    }

    pub fn is_almost_complex(&self) -> bool {
        self.rank() == 6
    }

    pub fn negated(&self) -> FStructure {
        FStructure { zeta: self.zeta.map(|z| -z) }
    }

    /// Sign representative whose first nonzero entry is `+1`.
    pub fn canonical(&self) -> FStructure {
        match self.zeta.iter().find(|z| **z != 0) {
            Some(&z) if z < 0 => self.negated(),
            _ => *self,
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical() == *self
    }

    /// Name of the canonical representative (`J1`..`J4`, `f1`..`f9`).
    pub fn name(&self) -> Option<&'static str> {
        let c = self.canonical();
        NAMED.iter().find(|(_, z)| *z == c.zeta).map(|(n, _)| *n)
    }

    pub fn by_name(name: &str) -> Option<FStructure> {
        NAMED
            .iter()
            .find(|(n, _)| n.eq_ignore_ascii_case(name))
            .map(|(_, z)| FStructure { zeta: *z })
    }

    fn factors(&self) -> [Complex64; 3] {
        self.zeta.map(|z| Complex64::new(0.0, f64::from(z)))
    }
}

impl fmt::Display for FStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.zeta;
        write!(f, "({a},{b},{c})")
    }
}

impl FromStr for FStructure {
    type Err = FlagError;

    /// Parses `"1,1,0"` or a name such as `"J2"` / `"f7"`.
    fn from_str(input: &str) -> Result<FStructure, FlagError> {
        if let Some(f) = FStructure::by_name(input.trim()) {
            return Ok(f);
        }
        let err = || FlagError::Parse { what: "f-structure", input: input.to_string() };
        let parts: Vec<i32> = input
            .split(',')
            .map(|p| p.trim().parse::<i32>())
            .collect::<Result<_, _>>()
            .map_err(|_| err())?;
        match parts.as_slice() {
            [a, b, c] => FStructure::new(*a, *b, *c),
            _ => Err(err()),
        }
    }
}

/// `g(X, Y) = Σ λ_j ⟨X_j, Y_j⟩_o`.
pub fn metric_inner(g: &Metric, x: &TangentVector, y: &TangentVector) -> f64 {
    Block::ALL
        .iter()
        .map(|&b| g.lambda(b) * (x.component(b) * y.component(b).conj()).re)
        .sum()
}

pub fn metric_norm(g: &Metric, x: &TangentVector) -> f64 {
    metric_inner(g, x, x).sqrt()
}

pub fn apply_f(f: &FStructure, x: &TangentVector) -> TangentVector {
    x.scale_blocks(f.factors())
}

/// The symmetric part `U` of the Nomizu map for the metric `g`.
///
/// Zero on pairs from the same block; on `X ∈ m_{j+1}`, `Y ∈ m_{j+2}` it is
/// `-(λ_{j+1} - λ_{j+2}) / (2λ_j) · [X, Y]`, extended bilinearly.
pub fn nomizu_u(g: &Metric, x: &TangentVector, y: &TangentVector) -> TangentVector {
    let mut out = TangentVector::ZERO;
    for j in Block::ALL {
        let (p, q) = (j.next(), j.after_next());
        let coef = -(g.lambda(p) - g.lambda(q)) / (2.0 * g.lambda(j));
        if coef == 0.0 {
            continue;
        }
        // U(X_p, Y_q) + U(X_q, Y_p), and U is symmetric so the second term is
        // U(Y_p, X_q) = coef·[Y_p, X_q].
        let xp = x.block_part(p);
        let xq = x.block_part(q);
        let yp = y.block_part(p);
        let yq = y.block_part(q);
        let pair = bracket_m(&xp, &yq) + bracket_m(&yp, &xq);
        out += pair.block_part(j) * coef;
    }
    out
}

/// Nomizu map `α(X, Y) = ½[X, Y]_m + U(X, Y)` of the Levi-Civita connection.
pub fn nomizu_alpha(g: &Metric, x: &TangentVector, y: &TangentVector) -> TangentVector {
    bracket_m(x, y) * 0.5 + nomizu_u(g, x, y)
}

/// `∇_X(f)Y = α(X, fY) - f α(X, Y)`.
pub fn nabla_f(g: &Metric, f: &FStructure, x: &TangentVector, y: &TangentVector) -> TangentVector {
    nomizu_alpha(g, x, &apply_f(f, y)) - apply_f(f, &nomizu_alpha(g, x, y))
}

/// Closed coordinate expression of `∇_X(f)Y` for the normalized metric.
pub fn nabla_f_closed(g: &Metric, f: &FStructure, x: &TangentVector, y: &TangentVector) -> TangentVector {
    let (t, s) = (g.t(), g.s());
    let [z1, z2, z3] = f.zeta_f64();
    let TangentVector { a, b, c } = *x;
    let TangentVector { a: a1, b: b1, c: c1 } = *y;
    let i = Complex64::i();
    let u = (1.0 - s) / t;
    let v = (t - 1.0) / s;
    let ca = (i * ((z1 + z3) * (1.0 + s - t) * b * c1 + (z1 + z2) * (s - t - 1.0) * b1 * c)).conj();
    let cb = (i * ((z2 + z1) * (1.0 + u) * c * a1 + (z2 + z3) * (u - 1.0) * c1 * a)).conj();
    let cc = (i * ((z3 + z2) * (v + 1.0) * a * b1 + (z3 + z1) * (v - 1.0) * a1 * b)).conj();
    TangentVector::new(ca, cb, cc) * 0.5
}

/// Composition tensor `T(X,Y) = ¼ f(∇_{fX}(f)fY - ∇_{f²X}(f)f²Y)`.
pub fn composition_t(g: &Metric, f: &FStructure, x: &TangentVector, y: &TangentVector) -> TangentVector {
    let fx = apply_f(f, x);
    let fy = apply_f(f, y);
    let ffx = apply_f(f, &fx);
    let ffy = apply_f(f, &fy);
    apply_f(f, &(nabla_f(g, f, &fx, &fy) - nabla_f(g, f, &ffx, &ffy))) * 0.25
}

/// Closed coordinate expression of `T(X,Y)` for the normalized metric.
pub fn composition_t_closed(
    g: &Metric,
    f: &FStructure,
    x: &TangentVector,
    y: &TangentVector,
) -> TangentVector {
    let (t, s) = (g.t(), g.s());
    let [z1, z2, z3] = f.zeta_f64();
    let TangentVector { a, b, c } = *x;
    let TangentVector { a: a1, b: b1, c: c1 } = *y;
    let global = -z1 * z2 * z3;
    let u = (1.0 - s) / t;
    let v = (t - 1.0) / s;
    let ca = global
        * (1.0 + z2 * z3)
        * ((z1 + z3) * (1.0 + s - t) * (b * c1).conj() + (z1 + z2) * (s - t - 1.0) * (b1 * c).conj());
    let cb = global
        * (1.0 + z1 * z3)
        * ((z2 + z1) * (1.0 + u) * (c * a1).conj() + (z2 + z3) * (u - 1.0) * (c1 * a).conj());
    let cc = global
        * (1.0 + z1 * z2)
        * ((z3 + z2) * (v + 1.0) * (a * b1).conj() + (z3 + z1) * (v - 1.0) * (a1 * b).conj());
    TangentVector::new(ca, cb, cc) * 0.125
}

/// Fundamental form `Ω(X, Y) = g(X, fY)`.
pub fn fundamental_omega(g: &Metric, f: &FStructure, x: &TangentVector, y: &TangentVector) -> f64 {
    metric_inner(g, x, &apply_f(f, y))
}

/// `(∇Ω)(X, Y; Z) = g(X, ∇_Z(f)Y)`.
pub fn nabla_omega(
    g: &Metric,
    f: &FStructure,
    x: &TangentVector,
    y: &TangentVector,
    z: &TangentVector,
) -> f64 {
    metric_inner(g, x, &nabla_f(g, f, z, y))
}

/// Largest violation of total skew-symmetry of `∇Ω` over basis triples,
/// relative to the largest entry. Zero exactly when `Ω` is a Killing form.
pub fn nabla_omega_skew_defect(g: &Metric, f: &FStructure) -> f64 {
    let basis = TangentVector::basis();
    let mut defect = 0.0f64;
    let mut scale = 0.0f64;
    for x in &basis {
        for y in &basis {
            for z in &basis {
                let xyz = nabla_omega(g, f, x, y, z);
                let xzy = nabla_omega(g, f, x, z, y);
                let yxz = nabla_omega(g, f, y, x, z);
                scale = scale.max(xyz.abs());
                defect = defect.max((xyz + xzy).abs()).max((xyz + yxz).abs());
            }
        }
    }
    if scale == 0.0 {
        0.0
    } else {
        defect / scale
    }
}

/// Nijenhuis tensor `¼([JX,JY] - J[JX,Y] - J[X,JY] - [X,Y])` of an invariant
/// almost complex structure, brackets projected to `m`.
pub fn nijenhuis_j(j: &FStructure, x: &TangentVector, y: &TangentVector) -> Result<TangentVector, FlagError> {
    if !j.is_almost_complex() {
        return Err(FlagError::NotAlmostComplex(*j));
    }
    let jx = apply_f(j, x);
    let jy = apply_f(j, y);
    let n = bracket_m(&jx, &jy)
        - apply_f(j, &bracket_m(&jx, y))
        - apply_f(j, &bracket_m(x, &jy))
        - bracket_m(x, y);
    Ok(n * 0.25)
}

/// Nijenhuis tensor of an f-structure,
/// `f²[X,Y] + [fX,fY] - f[fX,Y] - f[X,fY]`, brackets projected to `m`.
pub fn nijenhuis_f(f: &FStructure, x: &TangentVector, y: &TangentVector) -> TangentVector {
    let fx = apply_f(f, x);
    let fy = apply_f(f, y);
    let xy = bracket_m(x, y);
    apply_f(f, &apply_f(f, &xy)) + bracket_m(&fx, &fy)
        - apply_f(f, &bracket_m(&fx, y))
        - apply_f(f, &bracket_m(x, &fy))
}

/// Checks `g([X,Y]_m, Z) = g(X, [Y,Z]_m)` on all basis triples.
pub fn is_naturally_reductive(g: &Metric, tol: f64) -> bool {
    naturally_reductive_defect(g) <= tol
}

/// Largest violation of the naturally-reductive identity over basis triples.
pub fn naturally_reductive_defect(g: &Metric) -> f64 {
    let basis = TangentVector::basis();
    let mut worst = 0.0f64;
    for x in &basis {
        for y in &basis {
            let xy = bracket_m(x, y);
            for z in &basis {
                let lhs = metric_inner(g, &xy, z);
                let rhs = metric_inner(g, x, &bracket_m(y, z));
                worst = worst.max((lhs - rhs).abs());
            }
        }
    }
    worst
}

/// `[[X,Y]_h, Z]`, the isotropy contribution used by the curvature tensor.
pub fn isotropy_action(x: &TangentVector, y: &TangentVector, z: &TangentVector) -> TangentVector {
    let h = bracket_tangent(x, y).isotropy_part();
    bracket_isotropy(&h, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use crate::liealg::tangent_inner;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn e(block: Block) -> TangentVector {
        TangentVector::in_block(block, one())
    }

    fn close(x: &TangentVector, y: &TangentVector, tol: f64) -> bool {
        (*x - *y).max_abs() <= tol
    }

    /// U from its defining identity 2g(U(X,Y),Z) = g(X,[Z,Y]_m) + g([Z,X]_m,Y),
    /// solved coordinate-wise in the g-orthogonal basis.
    fn u_from_koszul(g: &Metric, x: &TangentVector, y: &TangentVector) -> TangentVector {
        let basis = TangentVector::basis();
        let mut coords = [0.0; 6];
        for (k, z) in basis.iter().enumerate() {
            let rhs = metric_inner(g, x, &bracket_m(z, y)) + metric_inner(g, &bracket_m(z, x), y);
            coords[k] = rhs / (2.0 * metric_inner(g, z, z));
        }
        TangentVector::from_real_coords(&coords)
    }

    #[test]
    fn metric_rejects_non_positive_weights() {
        assert!(Metric::new(1.0, 0.0, 1.0).is_err());
        assert!(Metric::new(1.0, -2.0, 1.0).is_err());
        assert!(Metric::new(f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn homothetic_metrics_normalize_alike() {
        let g = Metric::new(3.0, 3.0, 4.0).unwrap();
        let h = Metric::new(6.0, 6.0, 8.0).unwrap();
        assert_eq!(g.normalized(), h.normalized());
        assert_abs_diff_eq!(g.s(), 4.0 / 3.0);
    }

    #[test]
    fn metric_inner_examples() {
        let g = Metric::new(1.0, 2.0, 1.0).unwrap();
        assert_abs_diff_eq!(metric_inner(&g, &e(Block::M2), &e(Block::M2)), 2.0);
        assert_abs_diff_eq!(metric_inner(&g, &e(Block::M1), &e(Block::M2)), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = TangentVector::random_in_disk(&mut rng);
        let y = TangentVector::random_in_disk(&mut rng);
        assert_abs_diff_eq!(
            metric_inner(&Metric::naturally_reductive(), &x, &y),
            tangent_inner(&x, &y),
            epsilon = 1e-15
        );
    }

    #[test]
    fn zeta_parsing_and_validation() {
        assert_eq!("1,1,0".parse::<FStructure>().unwrap().zeta(), [1, 1, 0]);
        assert_eq!("J2".parse::<FStructure>().unwrap().zeta(), [1, -1, 1]);
        assert!("1,2,0".parse::<FStructure>().is_err());
        assert!("1,1".parse::<FStructure>().is_err());
        assert!(matches!(FStructure::nonzero(0, 0, 0), Err(FlagError::ZeroStructure)));
    }

    #[test]
    fn canonical_sign_and_names() {
        let f = FStructure::new(0, -1, -1).unwrap();
        assert_eq!(f.canonical().zeta(), [0, 1, 1]);
        assert_eq!(f.name(), Some("f3"));
        assert_eq!(FStructure::all().len(), 13);
        assert!(FStructure::all().iter().all(|f| f.is_canonical()));
        assert_eq!(FStructure::by_name("f5").unwrap().rank(), 4);
    }

    #[test]
    fn apply_f_examples() {
        let j1 = FStructure::new(1, 1, 1).unwrap();
        let x = TangentVector::from_real(1.0, 1.0, 1.0);
        let i = Complex64::i();
        assert!(close(&apply_f(&j1, &x), &TangentVector::new(i, i, i), 0.0));
        let f3 = FStructure::new(0, 1, 1).unwrap();
        assert_eq!(apply_f(&f3, &TangentVector::from_real(5.0, 0.0, 0.0)), TangentVector::ZERO);
    }

    #[test]
    fn f_cubed_plus_f_vanishes_and_f_is_skew() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = Metric::new(0.7, 1.9, 2.4).unwrap();
        for f in FStructure::all() {
            let x = TangentVector::random_in_disk(&mut rng);
            let y = TangentVector::random_in_disk(&mut rng);
            let f3 = apply_f(&f, &apply_f(&f, &apply_f(&f, &x)));
            assert!(close(&(f3 + apply_f(&f, &x)), &TangentVector::ZERO, 1e-15));
            let skew = metric_inner(&g, &apply_f(&f, &x), &y) + metric_inner(&g, &x, &apply_f(&f, &y));
            assert_abs_diff_eq!(skew, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn nomizu_u_examples() {
        let g = Metric::new(1.0, 2.0, 1.0).unwrap();
        let u = nomizu_u(&g, &e(Block::M2), &e(Block::M3));
        assert!(close(&u, &TangentVector::from_real(-0.5, 0.0, 0.0), 1e-15));
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = TangentVector::random_in_disk(&mut rng);
        let y = TangentVector::random_in_disk(&mut rng);
        assert_eq!(nomizu_u(&Metric::naturally_reductive(), &x, &y), TangentVector::ZERO);
        assert!(close(&nomizu_u(&g, &x, &y), &nomizu_u(&g, &y, &x), 1e-15));
    }

    #[test]
    fn nomizu_u_matches_koszul_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..300 {
            let g = Metric::new(1.0, 0.1 + 3.0 * rand::Rng::random::<f64>(&mut rng), 0.1 + 3.0 * rand::Rng::random::<f64>(&mut rng))
                .unwrap();
            let x = TangentVector::random_in_disk(&mut rng);
            let y = TangentVector::random_in_disk(&mut rng);
            assert!(close(&nomizu_u(&g, &x, &y), &u_from_koszul(&g, &x, &y), 1e-13));
        }
    }

    #[test]
    fn nomizu_alpha_examples() {
        let g = Metric::new(1.0, 2.0, 1.0).unwrap();
        let a = nomizu_alpha(&g, &e(Block::M2), &e(Block::M3));
        assert!(close(&a, &TangentVector::ZERO, 1e-15));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = TangentVector::random_in_disk(&mut rng);
        let y = TangentVector::random_in_disk(&mut rng);
        let nr = Metric::naturally_reductive();
        assert!(close(&nomizu_alpha(&nr, &x, &y), &(bracket_m(&x, &y) * 0.5), 1e-15));
        assert!(close(&nomizu_alpha(&g, &x, &x), &nomizu_u(&g, &x, &x), 1e-15));
    }

    #[test]
    fn nabla_j1_is_not_parallel() {
        let j1 = FStructure::new(1, 1, 1).unwrap();
        let g = Metric::naturally_reductive();
        let expected = TangentVector::new(Complex64::new(0.0, -1.0), 0.0.into(), 0.0.into());
        assert!(close(&nabla_f_closed(&g, &j1, &e(Block::M2), &e(Block::M3)), &expected, 1e-15));
        assert!(close(&nabla_f(&g, &j1, &e(Block::M2), &e(Block::M3)), &expected, 1e-15));
    }

    #[test]
    fn killing_structure_has_vanishing_nabla_on_diagonal() {
        let f1 = FStructure::new(1, 1, 0).unwrap();
        let g = Metric::new(3.0, 3.0, 4.0).unwrap().normalized();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..100 {
            let x = TangentVector::random_in_disk(&mut rng);
            assert!(nabla_f(&g, &f1, &x, &x).max_abs() < 1e-15);
        }
    }

    #[test]
    fn nabla_vanishes_within_a_block() {
        let g = Metric::new(1.0, 0.3, 2.2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for f in FStructure::all() {
            for b in Block::ALL {
                let x = TangentVector::random_in_disk(&mut rng).block_part(b);
                let y = TangentVector::random_in_disk(&mut rng).block_part(b);
                assert!(nabla_f(&g, &f, &x, &y).max_abs() < 1e-15);
                assert!(nabla_f_closed(&g, &f, &x, &y).max_abs() < 1e-15);
            }
        }
    }

    #[test]
    fn composition_t_examples() {
        let g = Metric::new(1.0, 1.7, 0.4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let x = TangentVector::random_in_disk(&mut rng);
        let y = TangentVector::random_in_disk(&mut rng);
        for name in ["f1", "f5", "f9", "J2"] {
            let f = FStructure::by_name(name).unwrap();
            assert!(composition_t(&g, &f, &x, &y).max_abs() < 1e-15, "{name}");
            assert!(composition_t_closed(&g, &f, &x, &y).max_abs() < 1e-15, "{name}");
        }
        let j1 = FStructure::by_name("J1").unwrap();
        let nr = Metric::naturally_reductive();
        let t = composition_t(&nr, &j1, &e(Block::M2), &e(Block::M3));
        assert!(t.max_abs() > 0.1);
        assert!(close(&t, &composition_t_closed(&nr, &j1, &e(Block::M2), &e(Block::M3)), 1e-15));
    }

    #[test]
    fn omega_is_skew() {
        let f = FStructure::by_name("J1").unwrap();
        let g = Metric::naturally_reductive();
        assert_abs_diff_eq!(fundamental_omega(&g, &f, &e(Block::M1), &e(Block::M1)), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let g = Metric::new(2.0, 0.5, 1.5).unwrap();
        for f in FStructure::all() {
            let x = TangentVector::random_in_disk(&mut rng);
            let y = TangentVector::random_in_disk(&mut rng);
            assert_abs_diff_eq!(fundamental_omega(&g, &f, &x, &x), 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(
                fundamental_omega(&g, &f, &x, &y) + fundamental_omega(&g, &f, &y, &x),
                0.0,
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn nijenhuis_of_almost_complex_structures() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let j2 = FStructure::by_name("J2").unwrap();
        let j1 = FStructure::by_name("J1").unwrap();
        let mut worst_j2 = 0.0f64;
        for _ in 0..200 {
            let x = TangentVector::random_in_disk(&mut rng);
            let y = TangentVector::random_in_disk(&mut rng);
            worst_j2 = worst_j2.max(nijenhuis_j(&j2, &x, &y).unwrap().max_abs());
            assert!(nijenhuis_j(&j1, &x, &x).unwrap().max_abs() < 1e-15);
        }
        assert!(worst_j2 < 1e-15);
        let n = nijenhuis_j(&j1, &e(Block::M1), &e(Block::M2)).unwrap();
        assert!(n.max_abs() > 0.5);
        let f1 = FStructure::by_name("f1").unwrap();
        assert!(matches!(nijenhuis_j(&f1, &e(Block::M1), &e(Block::M2)), Err(FlagError::NotAlmostComplex(_))));
    }

    #[test]
    fn naturally_reductive_examples() {
        assert!(is_naturally_reductive(&Metric::naturally_reductive(), 1e-12));
        assert!(is_naturally_reductive(&Metric::new(2.5, 2.5, 2.5).unwrap(), 1e-12));
        assert!(!is_naturally_reductive(&Metric::new(1.0, 2.0, 1.0).unwrap(), 1e-12));
        // A concrete violating triple for (1,2,1): X ∈ m2, Y ∈ m3, Z ∈ m1.
        let g = Metric::new(1.0, 2.0, 1.0).unwrap();
        let (x, y, z) = (e(Block::M2), e(Block::M3), e(Block::M1));
        let lhs = metric_inner(&g, &bracket_m(&x, &y), &z);
        let rhs = metric_inner(&g, &x, &bracket_m(&y, &z));
        assert!((lhs - rhs).abs() > 0.5);
    }
}
