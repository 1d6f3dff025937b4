//! Riemann and Ricci tensors of invariant metrics on `SU(3)/T_max` and the
//! scan for Einstein metrics in the `(t, s)` plane.
//!
//! Curvature is computed from the Nomizu map of the Levi-Civita connection:
//! `R(X,Y)Z = α(X, α(Y,Z)) - α(Y, α(X,Z)) - α([X,Y]_m, Z) - [[X,Y]_h, Z]`.
//! Ricci is traced over a `g`-orthonormal basis, so `Ric(c·g) = Ric(g)`.

use nalgebra::Matrix6;
use thiserror::Error;

use crate::exec::Execution;
use crate::flagmetric::{isotropy_action, metric_inner, nomizu_alpha, Metric};
use crate::liealg::{bracket_m, Block, TangentVector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurvatureError {
    #[error("grid has no points: {0}")]
    EmptyGrid(String),
}

/// `R(X, Y)Z`.
pub fn riemann_r(g: &Metric, x: &TangentVector, y: &TangentVector, z: &TangentVector) -> TangentVector {
    let xy = bracket_m(x, y);
    nomizu_alpha(g, x, &nomizu_alpha(g, y, z)) - nomizu_alpha(g, y, &nomizu_alpha(g, x, z))
        - nomizu_alpha(g, &xy, z)
        - isotropy_action(x, y, z)
}

/// `g(R(X,Y)Y, X) / (g(X,X)g(Y,Y) - g(X,Y)²)`.
pub fn sectional_curvature(g: &Metric, x: &TangentVector, y: &TangentVector) -> f64 {
    let num = metric_inner(g, &riemann_r(g, x, y, y), x);
    let gxy = metric_inner(g, x, y);
    num / (metric_inner(g, x, x) * metric_inner(g, y, y) - gxy * gxy)
}

fn orthonormal_basis(g: &Metric) -> [TangentVector; 6] {
    let basis = TangentVector::basis();
    std::array::from_fn(|k| basis[k] * (1.0 / g.lambda(Block::ALL[k / 2]).sqrt()))
}

/// `Ric(Y, Z) = Σ_i g(R(e_i, Y)Z, e_i)`.
pub fn ricci_value(g: &Metric, y: &TangentVector, z: &TangentVector) -> f64 {
    orthonormal_basis(g)
        .iter()
        .map(|e| metric_inner(g, &riemann_r(g, e, y, z), e))
        .sum()
}

/// Ricci tensor as a symmetric bilinear form in the standard basis of `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct RicciForm {
    pub matrix: Matrix6<f64>,
}

impl RicciForm {
    /// `(r1, r2, r3)` with `Ric = r_j ⟨·,·⟩` on `m_j`.
    pub fn blocks(&self) -> [f64; 3] {
        std::array::from_fn(|j| 0.5 * (self.matrix[(2 * j, 2 * j)] + self.matrix[(2 * j + 1, 2 * j + 1)]))
    }

    /// Largest deviation from `r1·id ⊕ r2·id ⊕ r3·id`.
    pub fn block_scalar_defect(&self) -> f64 {
        let r = self.blocks();
        let mut worst: f64 = 0.0;
        for p in 0..6 {
            for q in 0..6 {
                let expected = if p == q { r[p / 2] } else { 0.0 };
                worst = worst.max((self.matrix[(p, q)] - expected).abs());
            }
        }
        worst
    }

    pub fn symmetry_defect(&self) -> f64 {
        (self.matrix - self.matrix.transpose()).amax()
    }
}

/// Full Ricci form, every entry traced independently.
pub fn ricci(g: &Metric) -> RicciForm {
    let basis = TangentVector::basis();
    let mut matrix = Matrix6::zeros();
    for p in 0..6 {
        for q in 0..6 {
            matrix[(p, q)] = ricci_value(g, &basis[p], &basis[q]);
        }
    }
    RicciForm { matrix }
}

/// `(r1, r2, r3)` from one diagonal entry per block.
pub fn ricci_blocks(g: &Metric) -> [f64; 3] {
    let basis = TangentVector::basis();
    std::array::from_fn(|j| ricci_value(g, &basis[2 * j], &basis[2 * j]))
}

/// Ricci eigenvalues `ρ_j = r_j / λ_j` relative to `g`.
pub fn ricci_eigenvalues(g: &Metric) -> [f64; 3] {
    let r = ricci_blocks(g);
    let l = g.lambdas();
    std::array::from_fn(|j| r[j] / l[j])
}

/// `‖Ric - λg‖ / ‖Ric‖` with the best constant `λ`, norms taken with respect
/// to `g`.
pub fn einstein_residual(g: &Metric) -> f64 {
    residual_of(ricci_eigenvalues(g))
}

fn residual_of(rho: [f64; 3]) -> f64 {
    let mean = rho.iter().sum::<f64>() / 3.0;
    let dev: f64 = rho.iter().map(|r| (r - mean).powi(2)).sum();
    let size: f64 = rho.iter().map(|r| r * r).sum();
    (dev / size).sqrt()
}

/// Best-fit Einstein constant `λ` in `Ric ≈ λg`.
pub fn einstein_constant(g: &Metric) -> f64 {
    ricci_eigenvalues(g).iter().sum::<f64>() / 3.0
}

/// Points `lo, lo + step, ...` up to `hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, step: f64) -> Self {
        Axis { lo, hi, step }
    }

    pub fn len(&self) -> usize {
        if !(self.step > 0.0) || !(self.hi >= self.lo) || !self.lo.is_finite() || !self.hi.is_finite() {
            return 0;
        }
        ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn at(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.step
    }

    fn contains(&self, x: f64) -> bool {
        x >= self.lo - 1e-12 && x <= self.at(self.len() - 1) + 1e-12
    }
}

/// Rectangular grid in the `(t, s)` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub t: Axis,
    pub s: Axis,
}

impl Grid {
    pub fn new(t: Axis, s: Axis) -> Self {
        Grid { t, s }
    }

    pub fn square(lo: f64, hi: f64, step: f64) -> Self {
        Grid { t: Axis::new(lo, hi, step), s: Axis::new(lo, hi, step) }
    }

    pub fn cells(&self) -> usize {
        self.t.len() * self.s.len()
    }
}

impl Default for Grid {
    /// `(0, 2.5]²` with step `0.01`.
    fn default() -> Self {
        Grid::square(0.01, 2.5, 0.01)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EinsteinCandidate {
    pub t: f64,
    pub s: f64,
    pub residual: f64,
    pub constant: f64,
}

impl EinsteinCandidate {
    pub fn metric(&self) -> Metric {
        Metric::from_ts(self.t, self.s).expect("positive point")
    }
}

fn residual_at(t: f64, s: f64) -> f64 {
    match Metric::from_ts(t, s) {
        Ok(g) => einstein_residual(&g),
        Err(_) => f64::INFINITY,
    }
}

/// `(ρ1 - ρ2, ρ1 - ρ3) / |ρ|` as a function of `(t, s)`.
fn einstein_defect(t: f64, s: f64) -> Option<[f64; 2]> {
    let g = Metric::from_ts(t, s).ok()?;
    let rho = ricci_eigenvalues(&g);
    let size = rho.iter().map(|r| r * r).sum::<f64>().sqrt();
    Some([(rho[0] - rho[1]) / size, (rho[0] - rho[2]) / size])
}

/// Newton iteration on the two Einstein equations with a central-difference
/// Jacobian.
fn refine(mut t: f64, mut s: f64) -> Option<(f64, f64)> {
    for _ in 0..60 {
        let f = einstein_defect(t, s)?;
        if f[0].abs().max(f[1].abs()) < 1e-15 {
            break;
        }
        let h = 1e-7 * t.max(s).max(1.0);
        let ft_p = einstein_defect(t + h, s)?;
        let ft_m = einstein_defect(t - h, s)?;
        let fs_p = einstein_defect(t, s + h)?;
        let fs_m = einstein_defect(t, s - h)?;
        let j = [
            [(ft_p[0] - ft_m[0]) / (2.0 * h), (fs_p[0] - fs_m[0]) / (2.0 * h)],
            [(ft_p[1] - ft_m[1]) / (2.0 * h), (fs_p[1] - fs_m[1]) / (2.0 * h)],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det.abs() < 1e-300 {
            return None;
        }
        let dt = (f[0] * j[1][1] - f[1] * j[0][1]) / det;
        let ds = (j[0][0] * f[1] - j[1][0] * f[0]) / det;
        // Damp steps that would leave the quadrant.
        let mut damp = 1.0;
        while t - damp * dt <= 0.0 || s - damp * ds <= 0.0 {
            damp *= 0.5;
            if damp < 1e-6 {
                return None;
            }
        }
        t -= damp * dt;
        s -= damp * ds;
        if (damp * dt).abs().max((damp * ds).abs()) < 1e-14 {
            break;
        }
    }
    (t.is_finite() && s.is_finite()).then_some((t, s))
}

/// Einstein metrics inside `grid`: local minima of the residual on the grid
/// are refined by Newton's method, kept when the refined residual is below
/// `tol` and the point lies in the grid, and merged within `1e-6`.
pub fn einstein_scan(grid: &Grid, tol: f64, exec: Execution) -> Result<Vec<EinsteinCandidate>, CurvatureError> {
    let (nt, ns) = (grid.t.len(), grid.s.len());
    if nt == 0 || ns == 0 {
        return Err(CurvatureError::EmptyGrid(format!("{grid:?}")));
    }
    let rows: Vec<Vec<f64>> = exec.map_range(nt, |i| (0..ns).map(|j| residual_at(grid.t.at(i), grid.s.at(j))).collect());
    let mut seeds = Vec::new();
    for i in 0..nt {
        for j in 0..ns {
            let v = rows[i][j];
            let mut is_min = true;
            for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    let (p, q) = (i as i64 + di, j as i64 + dj);
                    if (di, dj) == (0, 0) || p < 0 || q < 0 || p >= nt as i64 || q >= ns as i64 {
                        continue;
                    }
                    if rows[p as usize][q as usize] < v {
                        is_min = false;
                    }
                }
            }
            if is_min {
                seeds.push((grid.t.at(i), grid.s.at(j)));
            }
        }
    }
    let refined = exec.map(&seeds, |(t, s)| refine(*t, *s));
    let mut out: Vec<EinsteinCandidate> = Vec::new();
    for (t, s) in refined.into_iter().flatten() {
        if !grid.t.contains(t) || !grid.s.contains(s) {
            continue;
        }
        let g = Metric::from_ts(t, s).expect("positive");
        let residual = einstein_residual(&g);
        if !(residual < tol) {
            continue;
        }
        if out.iter().any(|c| (c.t - t).abs() < 1e-6 && (c.s - s).abs() < 1e-6) {
            continue;
        }
        out.push(EinsteinCandidate { t, s, residual, constant: einstein_constant(&g) });
    }
    out.sort_by(|a, b| a.t.total_cmp(&b.t).then(a.s.total_cmp(&b.s)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flagmetric::metric_norm;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(l1: f64, l2: f64, l3: f64) -> Metric {
        Metric::new(l1, l2, l3).unwrap()
    }

    #[test]
    fn curvature_symmetries() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = m(1.0, 2.3, 0.7);
        for _ in 0..200 {
            let [x, y, z, w] = std::array::from_fn(|_| TangentVector::random_in_disk(&mut rng));
            assert!(riemann_r(&g, &x, &x, &z).max_abs() < 1e-12);
            let skew = riemann_r(&g, &x, &y, &z) + riemann_r(&g, &y, &x, &z);
            assert!(skew.max_abs() < 1e-12);
            let bianchi = riemann_r(&g, &x, &y, &z) + riemann_r(&g, &y, &z, &x) + riemann_r(&g, &z, &x, &y);
            assert!(bianchi.max_abs() < 1e-12);
            let metricity = metric_inner(&g, &riemann_r(&g, &x, &y, &z), &w)
                + metric_inner(&g, &z, &riemann_r(&g, &x, &y, &w));
            assert!(metricity.abs() < 1e-12);
        }
    }

    #[test]
    fn positive_sectional_curvature_in_m1() {
        let g = Metric::naturally_reductive();
        let k = sectional_curvature(&g, &TangentVector::basis()[0], &TangentVector::basis()[1]);
        assert!(k > 0.0);
    }

    /// `Ric(X,X) = -½Σ|[X,X_i]_m|² - ½B(X,X) + ¼Σ g([X_i,X_j]_m, X)²` for a
    /// unimodular group, `B(X,Y) = 6 tr(XY) = -12⟨X,Y⟩`.
    fn ricci_by_bracket_formula(g: &Metric, x: &TangentVector) -> f64 {
        let e = orthonormal_basis(g);
        let first: f64 = e.iter().map(|ei| metric_norm(g, &bracket_m(x, ei)).powi(2)).sum();
        let killing = -12.0 * x.norm().powi(2);
        let mut third = 0.0;
        for ei in &e {
            for ej in &e {
                third += metric_inner(g, &bracket_m(ei, ej), x).powi(2);
            }
        }
        -0.5 * first - 0.5 * killing + 0.25 * third
    }

    #[test]
    fn ricci_matches_bracket_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for g in [m(1.0, 1.0, 1.0), m(3.0, 3.0, 4.0), m(1.0, 0.4, 2.7)] {
            for _ in 0..20 {
                let x = TangentVector::random_in_disk(&mut rng);
                let direct = ricci_value(&g, &x, &x);
                assert_abs_diff_eq!(direct, ricci_by_bracket_formula(&g, &x), epsilon = 1e-11);
            }
        }
    }

    #[test]
    fn ricci_is_block_scalar_and_symmetric() {
        let r = ricci(&m(1.0, 2.0, 3.5));
        assert!(r.symmetry_defect() < 1e-12);
        assert!(r.block_scalar_defect() < 1e-12);
        let fast = ricci_blocks(&m(1.0, 2.0, 3.5));
        for (a, b) in r.blocks().iter().zip(fast.iter()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn homothety_invariance() {
        let a = ricci(&m(1.0, 1.0, 1.0));
        let b = ricci(&m(2.0, 2.0, 2.0));
        assert!((a.matrix - b.matrix).amax() < 1e-12);
    }

    #[test]
    fn einstein_examples() {
        assert!(einstein_residual(&m(1.0, 1.0, 1.0)) < 1e-12);
        assert!(einstein_residual(&m(1.0, 2.0, 1.0)) < 1e-12);
        assert!(einstein_residual(&m(2.0, 1.0, 1.0)) < 1e-12);
        for g in [m(3.0, 3.0, 4.0), m(3.0, 4.0, 3.0), m(4.0, 3.0, 3.0)] {
            assert!(einstein_residual(&g) > 1e-3);
        }
    }

    #[test]
    fn scan_edge_cases() {
        let grid = Grid::square(3.0, 4.0, 0.05);
        assert!(einstein_scan(&grid, 1e-9, Execution::Sequential).unwrap().is_empty());
        let small = Grid::square(0.9, 1.1, 0.01);
        assert!(einstein_scan(&small, 0.0, Execution::Sequential).unwrap().is_empty());
        let found = einstein_scan(&small, 1e-9, Execution::Sequential).unwrap();
        assert_eq!(found.len(), 1);
        assert_abs_diff_eq!(found[0].t, 1.0, epsilon = 1e-10);
        assert!(matches!(
            einstein_scan(&Grid::square(1.0, 0.5, 0.1), 1e-9, Execution::Sequential),
            Err(CurvatureError::EmptyGrid(_))
        ));
    }
}
