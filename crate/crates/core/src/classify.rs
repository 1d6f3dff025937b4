//! Metric loci of the Kähler, Killing, nearly Kähler, Hermitian and G1
//! classes for the thirteen invariant f-structures on `SU(3)/T_max`.
//!
//! A metric `(λ1, λ2, λ3)` is normalized to `(1, t, s)`. Every defining
//! condition reduces to finitely many equations that are affine in `(t, s)`
//! once the positive denominators `t` and `s` are cleared, so loci are solved
//! exactly over the rationals. The floating-point sampler in
//! [`numeric_verify`] evaluates the same conditions through the Nomizu map and
//! serves as the independent check.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exec::Execution;
use crate::flagmetric::{
    apply_f, composition_t, nabla_f, nijenhuis_f, nijenhuis_j, FStructure, FlagError, Metric,
};
use crate::liealg::TangentVector;

/// Random draws per RNG stream in [`numeric_verify`].
pub const TRIALS_PER_STREAM: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error("unknown class tag {0:?} (expected Kf, Kill, NKf, Hf or G1f)")]
    UnknownClassTag(String),
    #[error("at least one trial is required")]
    NoTrials,
    #[error(transparent)]
    Flag(#[from] FlagError),
}

/// Structure classes covered by the classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassTag {
    /// `∇f = 0`.
    Kahler,
    /// `∇_X(f)X = 0`.
    Killing,
    /// `∇_{fX}(f)fX = 0`.
    NearlyKahler,
    /// `T(X, Y) = 0`.
    Hermitian,
    /// `T(X, X) = 0`.
    G1,
}

impl ClassTag {
    pub const ALL: [ClassTag; 5] =
        [ClassTag::Kahler, ClassTag::Killing, ClassTag::NearlyKahler, ClassTag::Hermitian, ClassTag::G1];

    pub fn label(self) -> &'static str {
        match self {
            ClassTag::Kahler => "Kf",
            ClassTag::Killing => "Kill",
            ClassTag::NearlyKahler => "NKf",
            ClassTag::Hermitian => "Hf",
            ClassTag::G1 => "G1f",
        }
    }

    pub fn condition(self) -> &'static str {
        match self {
            ClassTag::Kahler => "∇_X(f)Y = 0",
            ClassTag::Killing => "∇_X(f)X = 0",
            ClassTag::NearlyKahler => "∇_{fX}(f)fX = 0",
            ClassTag::Hermitian => "T(X,Y) = 0",
            ClassTag::G1 => "T(X,X) = 0",
        }
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ClassTag {
    type Err = ClassifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "kf" | "kahler" => Ok(ClassTag::Kahler),
            "kill" | "killf" | "killing" => Ok(ClassTag::Killing),
            "nkf" | "nk" | "nearly-kahler" => Ok(ClassTag::NearlyKahler),
            "hf" | "hermitian" => Ok(ClassTag::Hermitian),
            "g1f" | "g1" => Ok(ClassTag::G1),
            _ => Err(ClassifyError::UnknownClassTag(s.to_string())),
        }
    }
}

/// `a·t + b·s = c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinearCondition {
    pub a: Rational64,
    pub b: Rational64,
    pub c: Rational64,
}

impl LinearCondition {
    pub fn new(a: Rational64, b: Rational64, c: Rational64) -> Self {
        LinearCondition { a, b, c }
    }

    pub fn is_trivial(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    pub fn is_inconsistent(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && !self.c.is_zero()
    }

    pub fn holds_at(&self, t: Rational64, s: Rational64) -> bool {
        self.a * t + self.b * s == self.c
    }

    /// Scales to coprime integers with the first nonzero of `(a, b)` positive.
    fn normalized(&self) -> LinearCondition {
        let lead = if !self.a.is_zero() { self.a } else { self.b };
        if lead.is_zero() {
            return *self;
        }
        let (a, b, c) = (self.a / lead, self.b / lead, self.c / lead);
        let den = lcm(lcm(*a.denom(), *b.denom()), *c.denom());
        let scale = Rational64::from_integer(den);
        let (a, b, c) = (a * scale, b * scale, c * scale);
        let g = gcd(gcd(a.numer().abs(), b.numer().abs()), c.numer().abs()).max(1);
        let g = Rational64::from_integer(g);
        LinearCondition { a: a / g, b: b / g, c: c / g }
    }
}

impl fmt::Display for LinearCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_affine(self.a, self.b, Rational64::zero()))?;
        write!(f, " = {}", self.c)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    (a / gcd(a, b) * b).abs()
}

/// Writes `a·t + b·s + c` compactly.
fn format_affine(a: Rational64, b: Rational64, c: Rational64) -> String {
    let mut out = String::new();
    for (coef, var) in [(a, "t"), (b, "s"), (c, "")] {
        if coef.is_zero() {
            continue;
        }
        let mag = coef.abs();
        let body = if var.is_empty() {
            mag.to_string()
        } else if mag.is_one() {
            var.to_string()
        } else {
            format!("{mag}{var}")
        };
        if out.is_empty() {
            if coef.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if coef.is_negative() { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Affine form `t·T + s·S + c` with integer coefficients, used to assemble
/// the defining systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Affine {
    t: i64,
    s: i64,
    c: i64,
}

impl Affine {
    const fn new(t: i64, s: i64, c: i64) -> Self {
        Affine { t, s, c }
    }

    fn scale(self, k: i64) -> Self {
        Affine { t: k * self.t, s: k * self.s, c: k * self.c }
    }

    fn plus(self, o: Affine) -> Self {
        Affine { t: self.t + o.t, s: self.s + o.s, c: self.c + o.c }
    }

    fn minus(self, o: Affine) -> Self {
        self.plus(o.scale(-1))
    }

    /// The condition `self = 0`.
    fn vanishes(self) -> LinearCondition {
        LinearCondition {
            a: Rational64::from_integer(self.t),
            b: Rational64::from_integer(self.s),
            c: Rational64::from_integer(-self.c),
        }
    }
}

/// The three building blocks `e1 = (ζ1+ζ3)(s-t+1)`, `e2 = (ζ1+ζ2)(s-t-1)`,
/// `e3 = (ζ2+ζ3)(s+t-1)`.
fn building_blocks(f: &FStructure) -> [Affine; 3] {
    let [z1, z2, z3] = f.zeta().map(i64::from);
    [
        Affine::new(-1, 1, 1).scale(z1 + z3),
        Affine::new(-1, 1, -1).scale(z1 + z2),
        Affine::new(1, 1, -1).scale(z2 + z3),
    ]
}

/// Defining equations of `class` for `f`.
pub fn class_conditions(f: &FStructure, class: ClassTag) -> Vec<LinearCondition> {
    let [e1, e2, e3] = building_blocks(f);
    let [z1, z2, z3] = f.zeta().map(i64::from);
    let p = z1 * z2 * z3;
    let forms = match class {
        ClassTag::Kahler => vec![e1, e2, e3],
        ClassTag::Killing => vec![e1.plus(e2), e2.plus(e3)],
        ClassTag::NearlyKahler => vec![
            e1.plus(e2).scale(z2 * z3),
            e2.plus(e3).scale(-z1 * z3),
            e3.minus(e1).scale(z1 * z2),
        ],
        ClassTag::Hermitian => {
            let (wa, wb, wc) = (p * (1 + z2 * z3), p * (1 + z1 * z3), p * (1 + z1 * z2));
            vec![
                e1.scale(wa),
                e2.scale(wa),
                e2.scale(-wb),
                e3.scale(-wb),
                e3.scale(wc),
                e1.scale(-wc),
            ]
        }
        ClassTag::G1 => vec![
            e1.plus(e2).scale(p * (1 + z2 * z3)),
            e2.plus(e3).scale(-p * (1 + z1 * z3)),
            e3.minus(e1).scale(p * (1 + z1 * z2)),
        ],
    };
    forms.into_iter().map(Affine::vanishes).collect()
}

/// Solution set of a linear system inside the open quadrant `t, s > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Locus {
    Empty,
    Point { t: Rational64, s: Rational64 },
    /// `a·t + b·s = c` (normalized), restricted to `t, s > 0`.
    Line(LinearCondition),
    All,
}

/// Solves `conditions` exactly and intersects with `t, s > 0`.
pub fn solve(conditions: &[LinearCondition]) -> Locus {
    let mut rows: Vec<LinearCondition> = Vec::new();
    for c in conditions {
        if c.is_inconsistent() {
            return Locus::Empty;
        }
        if !c.is_trivial() {
            rows.push(*c);
        }
    }
    let Some(first) = rows.first().copied() else {
        return Locus::All;
    };
    // Eliminate with the first row; any row independent of it fixes a point.
    for r in &rows[1..] {
        let det = first.a * r.b - first.b * r.a;
        if !det.is_zero() {
            let t = (first.c * r.b - first.b * r.c) / det;
            let s = (first.a * r.c - first.c * r.a) / det;
            let point = Locus::Point { t, s };
            let ok = rows.iter().all(|q| q.holds_at(t, s));
            return if ok && t.is_positive() && s.is_positive() { point } else { Locus::Empty };
        }
    }
    // All rows are parallel to the first; they must be multiples of it.
    let lead = first.normalized();
    if rows.iter().any(|r| r.normalized() != lead) {
        return Locus::Empty;
    }
    if line_meets_quadrant(&lead) {
        Locus::Line(lead)
    } else {
        Locus::Empty
    }
}

fn line_meets_quadrant(l: &LinearCondition) -> bool {
    let zero = Rational64::zero();
    if l.a >= zero && l.b >= zero {
        l.c.is_positive()
    } else if l.a <= zero && l.b <= zero {
        l.c.is_negative()
    } else {
        true
    }
}

/// `t ∈ (lo, hi)` for the part of the line `a·t + b·s = c` with `s > 0`,
/// `t > 0` (requires `b ≠ 0`). `hi = None` means unbounded.
fn line_t_range(l: &LinearCondition) -> (Rational64, Option<Rational64>) {
    // s = (c - a t)/b > 0.
    let mut lo = Rational64::zero();
    let mut hi = None;
    if !l.a.is_zero() {
        let root = l.c / l.a;
        // sign of (c - a t)/b flips at t = root; positive on the side where
        // -a/b times (t - root) is positive.
        if (l.a / l.b).is_positive() {
            hi = Some(root);
        } else if root > lo {
            lo = root;
        }
    }
    (lo, hi)
}

impl Locus {
    pub fn is_empty(&self) -> bool {
        matches!(self, Locus::Empty)
    }

    pub fn conditions(&self) -> Vec<LinearCondition> {
        let one = Rational64::one();
        let zero = Rational64::zero();
        match self {
            Locus::Empty => vec![LinearCondition::new(zero, zero, one)],
            Locus::Point { t, s } => vec![LinearCondition::new(one, zero, *t), LinearCondition::new(zero, one, *s)],
            Locus::Line(l) => vec![*l],
            Locus::All => Vec::new(),
        }
    }

    pub fn contains(&self, t: Rational64, s: Rational64) -> bool {
        if !(t.is_positive() && s.is_positive()) {
            return false;
        }
        match self {
            Locus::Empty => false,
            Locus::Point { t: pt, s: ps } => *pt == t && *ps == s,
            Locus::Line(l) => l.holds_at(t, s),
            Locus::All => true,
        }
    }

    pub fn intersect(&self, other: &Locus) -> Locus {
        let mut c = self.conditions();
        c.extend(other.conditions());
        solve(&c)
    }

    pub fn is_subset_of(&self, other: &Locus) -> bool {
        match (self, other) {
            (Locus::Empty, _) | (_, Locus::All) => true,
            (Locus::Point { t, s }, o) => o.contains(*t, *s),
            (Locus::Line(a), Locus::Line(b)) => a == b,
            _ => false,
        }
    }

    /// Up to `n` points of the locus, in a fixed order.
    pub fn sample_points(&self, n: usize) -> Vec<(Rational64, Rational64)> {
        let r = |p: i64, q: i64| Rational64::new(p, q);
        match self {
            Locus::Empty => Vec::new(),
            Locus::Point { t, s } => vec![(*t, *s)],
            Locus::All => [(r(1, 1), r(1, 1)), (r(2, 1), r(3, 1)), (r(1, 2), r(5, 3)), (r(7, 2), r(1, 4))]
                .into_iter()
                .cycle()
                .take(n)
                .collect(),
            Locus::Line(l) => {
                if l.b.is_zero() {
                    let t = l.c / l.a;
                    return (1..=n as i64).map(|k| (t, r(k, 2))).collect();
                }
                let (lo, hi) = line_t_range(l);
                (1..=n as i64)
                    .map(|k| {
                        let t = match hi {
                            Some(hi) => lo + (hi - lo) * r(k, n as i64 + 1),
                            None => lo + r(k, 2),
                        };
                        (t, (l.c - l.a * t) / l.b)
                    })
                    .collect()
            }
        }
    }

    /// For a point, the metric `(λ1, λ2, λ3)` with coprime positive integers.
    pub fn integer_metric(&self) -> Option<[i64; 3]> {
        let Locus::Point { t, s } = self else { return None };
        let den = lcm(*t.denom(), *s.denom());
        let v = [den, (t * den).to_integer(), (s * den).to_integer()];
        let g = gcd(gcd(v[0], v[1]), v[2]);
        Some(v.map(|x| x / g))
    }
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Locus::Empty => f.write_str("none"),
            Locus::All => f.write_str("all metrics"),
            Locus::Point { t, s } => write!(f, "(t,s)=({t},{s})"),
            Locus::Line(l) => {
                if l.b.is_zero() {
                    return write!(f, "t = {}, s > 0", l.c / l.a);
                }
                let rhs = format_affine(-l.a / l.b, Rational64::zero(), l.c / l.b);
                let (lo, hi) = line_t_range(l);
                match hi {
                    Some(hi) if lo.is_zero() => write!(f, "s = {rhs}, 0 < t < {hi}"),
                    Some(hi) => write!(f, "s = {rhs}, {lo} < t < {hi}"),
                    None => write!(f, "s = {rhs}, t > {lo}"),
                }
            }
        }
    }
}

/// `base` minus the union of `holes`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub base: Locus,
    pub holes: Vec<Locus>,
}

impl Region {
    pub fn new(base: Locus, holes: Vec<Locus>) -> Self {
        Region { base, holes }
    }

    /// A line, a point or the quadrant minus finitely many lines and points
    /// is empty only when it lies inside one of them.
    pub fn is_empty(&self) -> bool {
        self.base.is_empty() || self.holes.iter().any(|h| self.base.is_subset_of(h))
    }

    pub fn contains(&self, t: Rational64, s: Rational64) -> bool {
        self.base.contains(t, s) && !self.holes.iter().any(|h| h.contains(t, s))
    }

    pub fn sample_points(&self, n: usize) -> Vec<(Rational64, Rational64)> {
        if self.is_empty() {
            return Vec::new();
        }
        self.base
            .sample_points(n + 2 * self.holes.len())
            .into_iter()
            .filter(|(t, s)| self.contains(*t, *s))
            .take(n)
            .collect()
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("none");
        }
        write!(f, "{}", self.base)?;
        let cut: Vec<String> = self
            .holes
            .iter()
            .filter(|h| !h.is_empty() && !h.intersect(&self.base).is_empty())
            .map(|h| h.intersect(&self.base).to_string())
            .collect();
        if !cut.is_empty() {
            write!(f, " minus {}", cut.join(", "))?;
        }
        Ok(())
    }
}

pub fn kahler_locus(f: &FStructure) -> Locus {
    solve(&class_conditions(f, ClassTag::Kahler))
}

pub fn killing_locus(f: &FStructure) -> Locus {
    solve(&class_conditions(f, ClassTag::Killing))
}

pub fn nkf_locus(f: &FStructure) -> Locus {
    solve(&class_conditions(f, ClassTag::NearlyKahler))
}

pub fn hermitian_locus(f: &FStructure) -> Locus {
    solve(&class_conditions(f, ClassTag::Hermitian))
}

pub fn g1f_locus(f: &FStructure) -> Locus {
    solve(&class_conditions(f, ClassTag::G1))
}

pub fn class_locus(f: &FStructure, class: ClassTag) -> Locus {
    solve(&class_conditions(f, class))
}

/// Metrics for which `f` is strictly in `class`: Killing, nearly Kähler and
/// Hermitian exclude the Kähler locus; G1 excludes the nearly Kähler and
/// Hermitian loci.
pub fn strict_region(f: &FStructure, class: ClassTag) -> Region {
    let base = class_locus(f, class);
    let holes = match class {
        ClassTag::Kahler => Vec::new(),
        ClassTag::Killing | ClassTag::NearlyKahler | ClassTag::Hermitian => vec![kahler_locus(f)],
        ClassTag::G1 => vec![nkf_locus(f), hermitian_locus(f)],
    };
    Region::new(base, holes)
}

/// Normalized value of the class-defining expression at `(x, y)`:
/// `‖E‖ / (1 + ‖X‖·‖Y‖)`, with `y` ignored by the quadratic conditions.
pub fn class_residual(
    f: &FStructure,
    g: &Metric,
    class: ClassTag,
    x: &TangentVector,
    y: &TangentVector,
) -> f64 {
    let (e, scale) = match class {
        ClassTag::Kahler => (nabla_f(g, f, x, y), x.norm() * y.norm()),
        ClassTag::Killing => (nabla_f(g, f, x, x), x.norm() * x.norm()),
        ClassTag::NearlyKahler => {
            let fx = apply_f(f, x);
            (nabla_f(g, f, &fx, &fx), x.norm() * x.norm())
        }
        ClassTag::Hermitian => (composition_t(g, f, x, y), x.norm() * y.norm()),
        ClassTag::G1 => (composition_t(g, f, x, x), x.norm() * x.norm()),
    };
    e.norm() / (1.0 + scale)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub holds: bool,
    pub max_residual: f64,
    pub trials: usize,
}

/// Samples `trials` random pairs from the unit polydisk and checks the class
/// condition through the direct Nomizu path. Draws are split into streams of
/// [`TRIALS_PER_STREAM`] so the result does not depend on `exec`.
pub fn numeric_verify(
    f: &FStructure,
    g: &Metric,
    class: ClassTag,
    trials: usize,
    tol: f64,
    seed: u64,
    exec: Execution,
) -> Result<Verdict, ClassifyError> {
    if trials == 0 {
        return Err(ClassifyError::NoTrials);
    }
    let streams = trials.div_ceil(TRIALS_PER_STREAM);
    let maxima = exec.map_range(streams, |k| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let count = TRIALS_PER_STREAM.min(trials - k * TRIALS_PER_STREAM);
        (0..count)
            .map(|_| {
                let x = TangentVector::random_in_disk(&mut rng);
                let y = TangentVector::random_in_disk(&mut rng);
                class_residual(f, g, class, &x, &y)
            })
            .fold(0.0, f64::max)
    });
    let max_residual = maxima.into_iter().fold(0.0, f64::max);
    Ok(Verdict { holds: max_residual <= tol, max_residual, trials })
}

/// Integrability of `f`: the Nijenhuis tensor of `J` for rank 6, the
/// f-Nijenhuis tensor otherwise, evaluated on all pairs of basis vectors.
pub fn is_integrable(f: &FStructure) -> bool {
    nijenhuis_defect(f) <= 1e-9
}

pub fn nijenhuis_defect(f: &FStructure) -> f64 {
    let basis = TangentVector::basis();
    let mut worst: f64 = 0.0;
    for x in &basis {
        for y in &basis {
            let n = if f.is_almost_complex() {
                nijenhuis_j(f, x, y).expect("rank-6 structure").norm()
            } else {
                nijenhuis_f(f, x, y).norm()
            };
            worst = worst.max(n);
        }
    }
    worst
}

/// Sampler settings for [`classify_all`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeSettings {
    pub trials: usize,
    pub tol: f64,
    pub seed: u64,
    /// Off-locus probes must exceed this residual.
    pub separation: f64,
}

impl Default for ProbeSettings {
    fn default() -> Self {
        ProbeSettings { trials: 200, tol: 1e-9, seed: 42, separation: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub t: Rational64,
    pub s: Rational64,
    /// Homothety factor applied to `(1, t, s)`.
    pub scale: f64,
    pub max_residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationRecord {
    pub f: FStructure,
    pub class: ClassTag,
    pub locus: Locus,
    pub strict: Region,
    /// Probes inside the locus; each must satisfy the condition.
    pub interior: Vec<Probe>,
    /// Probes outside the locus; each must violate it.
    pub off_locus: Vec<Probe>,
}

impl ClassificationRecord {
    pub fn consistent(&self) -> bool {
        self.interior.iter().all(|p| p.passed) && self.off_locus.iter().all(|p| p.passed)
    }

    pub fn strict_nonempty(&self) -> bool {
        !self.strict.is_empty()
    }
}

const PROBE_SCALES: [f64; 3] = [1.0, 2.5, 0.4];

fn off_locus_candidates() -> Vec<(Rational64, Rational64)> {
    let r = |p: i64, q: i64| Rational64::new(p, q);
    vec![
        (r(2, 1), r(3, 1)),
        (r(3, 1), r(5, 3)),
        (r(1, 2), r(2, 1)),
        (r(5, 2), r(1, 3)),
        (r(1, 1), r(1, 1)),
        (r(4, 1), r(1, 1)),
        (r(1, 3), r(1, 4)),
    ]
}

fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Metric `c·(1, t, s)`.
pub fn metric_at(t: Rational64, s: Rational64, scale: f64) -> Metric {
    Metric::new(scale, scale * to_f64(t), scale * to_f64(s)).expect("positive locus point")
}

fn probe(
    f: &FStructure,
    class: ClassTag,
    (t, s): (Rational64, Rational64),
    scale: f64,
    settings: &ProbeSettings,
    inside: bool,
) -> Probe {
    let g = metric_at(t, s, scale);
    let v = numeric_verify(f, &g, class, settings.trials, settings.tol, settings.seed, Execution::Sequential)
        .expect("trials > 0");
    let passed = if inside { v.holds } else { v.max_residual > settings.separation };
    Probe { t, s, scale, max_residual: v.max_residual, passed }
}

/// Builds the record for one `(f, class)` pair with its sampled witnesses.
pub fn classify_one(f: &FStructure, class: ClassTag, settings: &ProbeSettings) -> ClassificationRecord {
    let locus = class_locus(f, class);
    let strict = strict_region(f, class);
    let points = locus.sample_points(3);
    let mut interior = Vec::new();
    for (k, scale) in PROBE_SCALES.iter().enumerate() {
        for p in &points {
            if interior.len() < 3 || k == 0 {
                interior.push(probe(f, class, *p, *scale, settings, true));
            }
        }
    }
    let off_locus = off_locus_candidates()
        .into_iter()
        .filter(|(t, s)| !locus.contains(*t, *s))
        .take(3)
        .map(|p| probe(f, class, p, 1.0, settings, false))
        .collect();
    ClassificationRecord { f: *f, class, locus, strict, interior, off_locus }
}

/// All 13 × 5 records in the order J1..J4, f1..f9 and Kf, Kill, NKf, Hf, G1f.
pub fn classify_all(settings: &ProbeSettings, exec: Execution) -> Vec<ClassificationRecord> {
    let pairs: Vec<(FStructure, ClassTag)> = FStructure::all()
        .into_iter()
        .flat_map(|f| ClassTag::ALL.into_iter().map(move |c| (f, c)))
        .collect();
    exec.map(&pairs, |(f, c)| classify_one(f, *c, settings))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational64 {
        Rational64::new(p, q)
    }

    fn named(name: &str) -> FStructure {
        FStructure::by_name(name).unwrap()
    }

    #[test]
    fn solver_cases() {
        let one = r(1, 1);
        let zero = r(0, 1);
        assert_eq!(solve(&[]), Locus::All);
        let l = LinearCondition::new(one, -one, one);
        assert_eq!(solve(&[l, LinearCondition::new(r(2, 1), r(-2, 1), r(2, 1))]), Locus::Line(l));
        assert_eq!(solve(&[l, LinearCondition::new(one, -one, r(2, 1))]), Locus::Empty);
        assert_eq!(
            solve(&[l, LinearCondition::new(zero, one, r(3, 1))]),
            Locus::Point { t: r(4, 1), s: r(3, 1) }
        );
        // t + s = -1 misses the quadrant.
        assert_eq!(solve(&[LinearCondition::new(one, one, -one)]), Locus::Empty);
    }

    #[test]
    fn kahler_families() {
        let j2 = kahler_locus(&named("J2"));
        assert!(j2.contains(r(3, 1), r(2, 1)));
        assert!(!j2.contains(r(1, 2), r(-1, 2)));
        assert_eq!(j2.to_string(), "s = t - 1, t > 1");
        assert_eq!(kahler_locus(&named("J3")).to_string(), "s = t + 1, t > 0");
        assert_eq!(kahler_locus(&named("J4")).to_string(), "s = -t + 1, 0 < t < 1");
        assert_eq!(kahler_locus(&named("J1")), Locus::Empty);
        assert_eq!(kahler_locus(&named("f7")), Locus::Empty);
    }

    #[test]
    fn killing_points() {
        assert_eq!(killing_locus(&named("J1")), Locus::Point { t: r(1, 1), s: r(1, 1) });
        let f1 = killing_locus(&named("f1"));
        assert_eq!(f1, Locus::Point { t: r(1, 1), s: r(4, 3) });
        assert_eq!(f1.integer_metric(), Some([3, 3, 4]));
        assert_eq!(killing_locus(&named("f2")).integer_metric(), Some([3, 4, 3]));
        assert_eq!(killing_locus(&named("f3")).integer_metric(), Some([4, 3, 3]));
        assert!(strict_region(&named("f7"), ClassTag::Killing).is_empty());
        assert!(strict_region(&named("J2"), ClassTag::Killing).is_empty());
    }

    #[test]
    fn nearly_kahler_loci() {
        assert_eq!(nkf_locus(&named("f3")).to_string(), "s = t, t > 0");
        assert_eq!(nkf_locus(&named("f7")), Locus::All);
        assert_eq!(nkf_locus(&named("J1")), Locus::Point { t: r(1, 1), s: r(1, 1) });
        assert_eq!(nkf_locus(&named("f1")).to_string(), "t = 1, s > 0");
    }

    #[test]
    fn hermitian_and_g1() {
        for name in ["J2", "J3", "J4", "f1", "f5", "f9"] {
            assert_eq!(hermitian_locus(&named(name)), Locus::All, "{name}");
        }
        assert_eq!(hermitian_locus(&named("J1")), Locus::Empty);
        assert_eq!(g1f_locus(&named("J1")), Locus::Point { t: r(1, 1), s: r(1, 1) });
        for f in FStructure::all() {
            assert!(strict_region(&f, ClassTag::G1).is_empty(), "{f}");
        }
    }

    #[test]
    fn class_inclusions() {
        for f in FStructure::all() {
            let k = kahler_locus(&f);
            let kill = killing_locus(&f);
            let nk = nkf_locus(&f);
            let h = hermitian_locus(&f);
            let g1 = g1f_locus(&f);
            assert!(k.is_subset_of(&kill) && kill.is_subset_of(&nk) && nk.is_subset_of(&g1), "{f}");
            assert!(k.is_subset_of(&h) && h.is_subset_of(&g1), "{f}");
        }
    }

    #[test]
    fn sign_invariance() {
        for f in FStructure::all() {
            for c in ClassTag::ALL {
                assert_eq!(class_locus(&f, c), class_locus(&f.negated(), c), "{f} {c}");
            }
        }
    }

    #[test]
    fn numeric_examples() {
        let g = Metric::new(3.0, 4.0, 3.0).unwrap();
        let v = numeric_verify(&named("f2"), &g, ClassTag::Killing, 1000, 1e-9, 42, Execution::Parallel).unwrap();
        assert!(v.holds, "{}", v.max_residual);
        let nr = Metric::naturally_reductive();
        let v = numeric_verify(&named("J1"), &nr, ClassTag::Hermitian, 1000, 1e-9, 42, Execution::Parallel).unwrap();
        assert!(!v.holds);
        let zero = TangentVector::default();
        assert_eq!(class_residual(&named("J1"), &nr, ClassTag::G1, &zero, &zero), 0.0);
        assert_eq!(
            numeric_verify(&named("J1"), &nr, ClassTag::G1, 0, 1e-9, 42, Execution::Sequential),
            Err(ClassifyError::NoTrials)
        );
    }

    #[test]
    fn sampling_is_execution_independent() {
        let g = Metric::new(1.0, 2.0, 5.0).unwrap();
        let a = numeric_verify(&named("J1"), &g, ClassTag::Kahler, 300, 1e-9, 7, Execution::Sequential).unwrap();
        let b = numeric_verify(&named("J1"), &g, ClassTag::Kahler, 300, 1e-9, 7, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn integrability() {
        assert!(is_integrable(&named("J2")));
        assert!(!is_integrable(&named("J1")));
        assert!(!is_integrable(&named("f1")));
        assert!(!is_integrable(&named("f8")));
    }

    #[test]
    fn class_tag_parsing() {
        assert_eq!("Kill".parse::<ClassTag>(), Ok(ClassTag::Killing));
        assert_eq!("g1f".parse::<ClassTag>(), Ok(ClassTag::G1));
        assert!(matches!("QKf".parse::<ClassTag>(), Err(ClassifyError::UnknownClassTag(_))));
    }

    #[test]
    fn full_table_agrees_with_sampler() {
        let records = classify_all(&ProbeSettings { trials: 64, ..ProbeSettings::default() }, Execution::Parallel);
        assert_eq!(records.len(), 65);
        for rec in &records {
            assert!(rec.consistent(), "{} {}: {:?} {:?}", rec.f, rec.class, rec.interior, rec.off_locus);
        }
        let count = |c: ClassTag, p: &dyn Fn(&ClassificationRecord) -> bool| {
            records.iter().filter(|r| r.class == c && p(r)).count()
        };
        assert_eq!(count(ClassTag::Kahler, &|r| !r.locus.is_empty()), 3);
        assert_eq!(count(ClassTag::Killing, &|r| r.strict_nonempty()), 4);
        assert_eq!(count(ClassTag::Hermitian, &|r| r.locus == Locus::All), 12);
        assert_eq!(count(ClassTag::NearlyKahler, &|r| r.strict_nonempty() && r.f.rank() == 6), 1);
        assert_eq!(count(ClassTag::G1, &|r| r.strict_nonempty()), 0);
    }

    #[test]
    fn region_emptiness() {
        let line = Locus::Line(LinearCondition::new(r(1, 1), r(-1, 1), r(0, 1)));
        let point = Locus::Point { t: r(1, 1), s: r(1, 1) };
        assert!(!Region::new(line.clone(), vec![point.clone()]).is_empty());
        assert!(Region::new(point.clone(), vec![line.clone()]).is_empty());
        assert!(!Region::new(Locus::All, vec![line.clone()]).is_empty());
        assert!(Region::new(line.clone(), vec![line]).is_empty());
    }
}
