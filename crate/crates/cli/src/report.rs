//! Report model shared by the JSON and markdown renderers. Floats are stored
//! already formatted so both renderers print identical digits.

use std::fmt::Write as _;

use fstruct_core::classify::{Locus, Region};
use fstruct_core::flagmetric::FStructure;
use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;

/// Decimal string with 15 significant digits.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Float(pub String);

impl Float {
    pub fn new(x: f64) -> Float {
        Float(format!("{x:.14e}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

impl From<Rational64> for Rational {
    fn from(r: Rational64) -> Self {
        Rational { num: *r.numer(), den: *r.denom() }
    }
}

impl std::fmt::Display for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexValue {
    pub re: Float,
    pub im: Float,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        ComplexValue { re: Float::new(z.re), im: Float::new(z.im) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tolerances {
    pub tol: Float,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub tolerances: Tolerances,
    /// `ok` or `disagreement`.
    pub status: String,
    pub result: Body,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Body {
    Classify(ClassifyBody),
    Canonical(CanonicalBody),
    Einstein(EinsteinBody),
    Verify(VerifyBody),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureRef {
    pub zeta: [i8; 3],
    pub name: String,
}

impl From<&FStructure> for StructureRef {
    fn from(f: &FStructure) -> Self {
        StructureRef { zeta: f.zeta(), name: structure_label(f) }
    }
}

/// `f3`, or `-f3` for the negated structure.
pub fn structure_label(f: &FStructure) -> String {
    match f.canonical().name() {
        Some(n) if f.is_canonical() => n.to_string(),
        Some(n) => format!("-{n}"),
        None => f.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointValue {
    pub t: Rational,
    pub s: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineValue {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocusValue {
    /// `empty`, `point`, `line` or `all`.
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<PointValue>,
    /// `a·t + b·s = c`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<LineValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric: Option<[i64; 3]>,
    pub description: String,
}

impl From<&Locus> for LocusValue {
    fn from(l: &Locus) -> Self {
        let (kind, point, line) = match l {
            Locus::Empty => ("empty", None, None),
            Locus::All => ("all", None, None),
            Locus::Point { t, s } => ("point", Some(PointValue { t: (*t).into(), s: (*s).into() }), None),
            Locus::Line(c) => ("line", None, Some(LineValue { a: c.a.into(), b: c.b.into(), c: c.c.into() })),
        };
        LocusValue { kind: kind.into(), point, line, metric: l.integer_metric(), description: l.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrictValue {
    pub empty: bool,
    pub description: String,
}

impl From<&Region> for StrictValue {
    fn from(r: &Region) -> Self {
        StrictValue { empty: r.is_empty(), description: r.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeValue {
    pub t: Rational,
    pub s: Rational,
    pub scale: Float,
    pub max_residual: Float,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witnesses {
    pub interior: Vec<ProbeValue>,
    pub off_locus: Vec<ProbeValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricCheck {
    pub metric: [Rational; 3],
    pub in_locus: bool,
    pub in_strict: bool,
    pub holds: bool,
    pub max_residual: Float,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecordValue {
    pub f: StructureRef,
    pub class: String,
    pub condition: String,
    pub locus: LocusValue,
    pub strict: StrictValue,
    pub witnesses: Witnesses,
    pub consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metric_check: Option<MetricCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifySummary {
    pub records: usize,
    pub kahler: Vec<String>,
    pub strict_killing: Vec<String>,
    pub strict_nkf: Vec<String>,
    pub hermitian_all_metrics: Vec<String>,
    pub strict_g1f: Vec<String>,
    pub integrable: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifyBody {
    pub records: Vec<RecordValue>,
    pub summary: ClassifySummary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureValue {
    pub coefficients: Vec<i8>,
    pub tag: String,
    pub rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub characteristic: Option<[i8; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Counts {
    pub p: usize,
    pub j: usize,
    pub f: usize,
    pub h: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationValue {
    pub label: String,
    pub residual: Float,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CanonicalBody {
    pub order: u32,
    pub element: Vec<ComplexValue>,
    pub multipliers: Vec<ComplexValue>,
    pub spectrum: Vec<ComplexValue>,
    pub quadratic_factors: usize,
    pub irreducible_factors: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<StructureValue>,
    pub f_structures: Vec<StructureValue>,
    pub h_structures: Vec<StructureValue>,
    pub counts: Counts,
    pub predicted: Counts,
    pub counts_match: bool,
    pub relations: Vec<RelationValue>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxisValue {
    pub lo: Float,
    pub hi: Float,
    pub step: Float,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EinsteinPoint {
    pub t: Float,
    pub s: Float,
    pub residual: Float,
    pub constant: Float,
    /// Structures whose strict nearly Kähler locus contains the point.
    pub nkf_structures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EinsteinProbe {
    pub metric: [Rational; 3],
    pub ricci: [Float; 3],
    pub residual: Float,
    pub constant: Float,
    pub einstein: bool,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NkfCount {
    pub name: String,
    pub einstein_metrics: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EinsteinBody {
    pub grid: [AxisValue; 2],
    pub points: Vec<EinsteinPoint>,
    pub nkf_einstein_counts: Vec<NkfCount>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<EinsteinProbe>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyBody {
    pub f: StructureRef,
    pub class: String,
    pub condition: String,
    pub check: MetricCheck,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# fstruct {}\n", self.command);
        let _ = writeln!(out, "- seed: {}", self.seed);
        let _ = writeln!(out, "- tol: {}", self.tolerances.tol.0);
        let _ = writeln!(out, "- trials: {}", self.tolerances.trials);
        let _ = writeln!(out, "- status: {}\n", self.status);
        match &self.result {
            Body::Classify(b) => classify_md(&mut out, b),
            Body::Canonical(b) => canonical_md(&mut out, b),
            Body::Einstein(b) => einstein_md(&mut out, b),
            Body::Verify(b) => verify_md(&mut out, b),
        }
        out
    }
}

fn probes_md(probes: &[ProbeValue]) -> String {
    probes
        .iter()
        .map(|p| format!("({}, {})×{}: {}{}", p.t, p.s, p.scale.0, p.max_residual.0, if p.passed { "" } else { " ✗" }))
        .collect::<Vec<_>>()
        .join("; ")
}

fn check_md(out: &mut String, c: &MetricCheck) {
    let m: Vec<String> = c.metric.iter().map(|r| r.to_string()).collect();
    let _ = writeln!(
        out,
        "- metric ({}): in locus {}, in strict locus {}, sampled {} (max residual {}), agrees {}",
        m.join(", "),
        c.in_locus,
        c.in_strict,
        c.holds,
        c.max_residual.0,
        c.agrees
    );
}

fn classify_md(out: &mut String, b: &ClassifyBody) {
    let _ = writeln!(out, "| f | ζ | class | locus | strict | interior witnesses | off-locus witnesses | consistent |");
    let _ = writeln!(out, "|---|---|---|---|---|---|---|---|");
    for r in &b.records {
        let z = r.f.zeta;
        let _ = writeln!(
            out,
            "| {} | ({},{},{}) | {} | {} | {} | {} | {} | {} |",
            r.f.name,
            z[0],
            z[1],
            z[2],
            r.class,
            r.locus.description,
            r.strict.description,
            probes_md(&r.witnesses.interior),
            probes_md(&r.witnesses.off_locus),
            r.consistent
        );
    }
    let checks: Vec<&RecordValue> = b.records.iter().filter(|r| r.metric_check.is_some()).collect();
    if !checks.is_empty() {
        let _ = writeln!(out, "\n## Metric probe\n");
        for r in checks {
            let _ = write!(out, "- {} {}: ", r.f.name, r.class);
            let mut line = String::new();
            check_md(&mut line, r.metric_check.as_ref().unwrap());
            out.push_str(line.trim_start_matches("- "));
        }
    }
    let s = &b.summary;
    let _ = writeln!(out, "\n## Summary\n");
    let _ = writeln!(out, "- records: {}", s.records);
    let _ = writeln!(out, "- Kähler: {}", s.kahler.join(", "));
    let _ = writeln!(out, "- strictly Killing: {}", s.strict_killing.join(", "));
    let _ = writeln!(out, "- strictly nearly Kähler: {}", s.strict_nkf.join(", "));
    let _ = writeln!(out, "- Hermitian for all metrics: {}", s.hermitian_all_metrics.join(", "));
    let _ = writeln!(out, "- strictly G1: {}", if s.strict_g1f.is_empty() { "none".into() } else { s.strict_g1f.join(", ") });
    let _ = writeln!(out, "- integrable: {}", s.integrable.join(", "));
}

fn complex_md(z: &ComplexValue) -> String {
    format!("{} + {}i", z.re.0, z.im.0)
}

fn structure_md(out: &mut String, title: &str, list: &[StructureValue]) {
    let _ = writeln!(out, "\n## {title}\n");
    let _ = writeln!(out, "| coefficients | tag | rank | characteristic | name |");
    let _ = writeln!(out, "|---|---|---|---|---|");
    for s in list {
        let c = s.characteristic.map(|z| format!("({},{},{})", z[0], z[1], z[2])).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "| {:?} | {} | {} | {} | {} |",
            s.coefficients,
            s.tag,
            s.rank,
            c,
            s.name.as_deref().unwrap_or("-")
        );
    }
}

fn canonical_md(out: &mut String, b: &CanonicalBody) {
    let _ = writeln!(out, "- order: {}", b.order);
    let _ = writeln!(out, "- element: {}", b.element.iter().map(complex_md).collect::<Vec<_>>().join(", "));
    let _ = writeln!(out, "- block multipliers: {}", b.multipliers.iter().map(complex_md).collect::<Vec<_>>().join(", "));
    let _ = writeln!(out, "- spectrum: {}", b.spectrum.iter().map(complex_md).collect::<Vec<_>>().join(", "));
    let _ = writeln!(out, "- s = {}, s̃ = {}", b.quadratic_factors, b.irreducible_factors);
    if let Some(g) = &b.generator {
        structure_md(out, "Generator", std::slice::from_ref(g));
    }
    structure_md(out, "f-structures", &b.f_structures);
    structure_md(out, "h-structures", &b.h_structures);
    let _ = writeln!(out, "\n## Counts\n");
    let _ = writeln!(out, "| | P | J | f | h |");
    let _ = writeln!(out, "|---|---|---|---|---|");
    for (label, c) in [("found", b.counts), ("predicted", b.predicted)] {
        let _ = writeln!(out, "| {label} | {} | {} | {} | {} |", c.p, c.j, c.f, c.h);
    }
    let _ = writeln!(out, "\ncounts match: {}", b.counts_match);
    if !b.relations.is_empty() {
        let _ = writeln!(out, "\n## Relations\n");
        let _ = writeln!(out, "| relation | residual | holds |");
        let _ = writeln!(out, "|---|---|---|");
        for r in &b.relations {
            let _ = writeln!(out, "| {} | {} | {} |", r.label, r.residual.0, r.holds);
        }
    }
    for n in &b.notes {
        let _ = writeln!(out, "\n> {n}");
    }
}

fn einstein_md(out: &mut String, b: &EinsteinBody) {
    for (name, a) in ["t", "s"].iter().zip(&b.grid) {
        let _ = writeln!(out, "- {name} grid: {} to {} step {}", a.lo.0, a.hi.0, a.step.0);
    }
    let _ = writeln!(out, "\n| t | s | residual | constant | strictly nearly Kähler for |");
    let _ = writeln!(out, "|---|---|---|---|---|");
    for p in &b.points {
        let _ = writeln!(out, "| {} | {} | {} | {} | {} |", p.t.0, p.s.0, p.residual.0, p.constant.0, p.nkf_structures.join(", "));
    }
    if !b.nkf_einstein_counts.is_empty() {
        let _ = writeln!(out, "\n| structure | Einstein metrics on its strict nearly Kähler locus |");
        let _ = writeln!(out, "|---|---|");
        for c in &b.nkf_einstein_counts {
            let _ = writeln!(out, "| {} | {} |", c.name, c.einstein_metrics);
        }
    }
    if let Some(p) = &b.probe {
        let m: Vec<String> = p.metric.iter().map(|r| r.to_string()).collect();
        let r: Vec<&str> = p.ricci.iter().map(|x| x.0.as_str()).collect();
        let _ = writeln!(
            out,
            "\n## Probe ({})\n\n- Ricci eigenvalues: {}\n- residual: {}\n- constant: {}\n- verdict: {}",
            m.join(", "),
            r.join(", "),
            p.residual.0,
            p.constant.0,
            p.verdict
        );
    }
}

fn verify_md(out: &mut String, b: &VerifyBody) {
    let _ = writeln!(out, "- structure: {} {:?}", b.f.name, b.f.zeta);
    let _ = writeln!(out, "- class: {} ({})", b.class, b.condition);
    check_md(out, &b.check);
}
