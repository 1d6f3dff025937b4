//! Subcommand implementations. Each returns a report and whether every
//! internal cross-check agreed.

use fstruct_core::classify::{
    class_locus, classify_one, is_integrable, numeric_verify, strict_region, ClassTag, ClassificationRecord,
    Locus, ProbeSettings, Probe,
};
use fstruct_core::curvature::{einstein_constant, einstein_residual, einstein_scan, ricci_eigenvalues, Grid};
use fstruct_core::flagmetric::{FStructure, Metric};
use fstruct_core::phispace::{
    build_theta, canonical_f, order_five_structures, enumerate_canonical, order_four_structures,
    order_three_structures, AffinorStructure, InnerAutomorphism, Relation, StructureCounts, ThetaOperator,
};
use fstruct_core::Execution;
use num_complex::Complex64;
use num_rational::Rational64;

use crate::config::Settings;
use crate::report::*;

pub struct Outcome {
    pub body: Body,
    pub agreed: bool,
}

fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn probe_value(p: &Probe) -> ProbeValue {
    ProbeValue {
        t: p.t.into(),
        s: p.s.into(),
        scale: Float::new(p.scale),
        max_residual: Float::new(p.max_residual),
        passed: p.passed,
    }
}

fn metric_check(
    f: &FStructure,
    class: ClassTag,
    lambdas: [Rational64; 3],
    settings: &Settings,
) -> MetricCheck {
    let t = lambdas[1] / lambdas[0];
    let s = lambdas[2] / lambdas[0];
    let g = Metric::new(to_f64(lambdas[0]), to_f64(lambdas[1]), to_f64(lambdas[2])).expect("positive metric");
    let v = numeric_verify(f, &g, class, settings.trials, settings.tol, settings.seed, Execution::default())
        .expect("trials > 0");
    let in_locus = class_locus(f, class).contains(t, s);
    MetricCheck {
        metric: lambdas.map(Rational::from),
        in_locus,
        in_strict: strict_region(f, class).contains(t, s),
        holds: v.holds,
        max_residual: Float::new(v.max_residual),
        agrees: in_locus == v.holds,
    }
}

fn record_value(rec: &ClassificationRecord, check: Option<MetricCheck>) -> RecordValue {
    RecordValue {
        f: (&rec.f).into(),
        class: rec.class.label().into(),
        condition: rec.class.condition().into(),
        locus: (&rec.locus).into(),
        strict: (&rec.strict).into(),
        witnesses: Witnesses {
            interior: rec.interior.iter().map(probe_value).collect(),
            off_locus: rec.off_locus.iter().map(probe_value).collect(),
        },
        consistent: rec.consistent(),
        metric_check: check,
    }
}

pub fn classify(
    structure: Option<FStructure>,
    class: Option<ClassTag>,
    metric: Option<[Rational64; 3]>,
    settings: &Settings,
) -> Outcome {
    let structures = structure.map(|f| vec![f]).unwrap_or_else(FStructure::all);
    let classes = class.map(|c| vec![c]).unwrap_or_else(|| ClassTag::ALL.to_vec());
    let pairs: Vec<(FStructure, ClassTag)> =
        structures.iter().flat_map(|f| classes.iter().map(move |c| (*f, *c))).collect();
    let probe = ProbeSettings { trials: settings.trials, tol: settings.tol, seed: settings.seed, ..ProbeSettings::default() };
    let records = Execution::default().map(&pairs, |(f, c)| classify_one(f, *c, &probe));
    let values: Vec<RecordValue> = records
        .iter()
        .map(|r| record_value(r, metric.map(|m| metric_check(&r.f, r.class, m, settings))))
        .collect();
    let agreed = values.iter().all(|v| v.consistent && v.metric_check.as_ref().is_none_or(|c| c.agrees));

    let names = |class: ClassTag, keep: &dyn Fn(&ClassificationRecord) -> bool| -> Vec<String> {
        records.iter().filter(|r| r.class == class && keep(r)).map(|r| structure_label(&r.f)).collect()
    };
    let summary = ClassifySummary {
        records: records.len(),
        kahler: names(ClassTag::Kahler, &|r| !r.locus.is_empty()),
        strict_killing: names(ClassTag::Killing, &|r| r.strict_nonempty()),
        strict_nkf: names(ClassTag::NearlyKahler, &|r| r.strict_nonempty()),
        hermitian_all_metrics: names(ClassTag::Hermitian, &|r| r.locus == Locus::All),
        strict_g1f: names(ClassTag::G1, &|r| r.strict_nonempty()),
        integrable: structures.iter().filter(|f| is_integrable(f)).map(structure_label).collect(),
    };
    Outcome { body: Body::Classify(ClassifyBody { records: values, summary }), agreed }
}

pub fn verify(f: FStructure, class: ClassTag, metric: [Rational64; 3], settings: &Settings) -> Outcome {
    let check = metric_check(&f, class, metric, settings);
    let agreed = check.agrees;
    Outcome {
        body: Body::Verify(VerifyBody {
            f: (&f).into(),
            class: class.label().into(),
            condition: class.condition().into(),
            check,
        }),
        agreed,
    }
}

fn structure_value(s: &AffinorStructure) -> StructureValue {
    let characteristic = s.characteristic();
    StructureValue {
        coefficients: s.coefficients.clone(),
        tag: s.tag.to_string(),
        rank: s.rank(),
        characteristic,
        name: s.as_fstructure().filter(|f| f.rank() > 0).map(|f| structure_label(&f)),
    }
}

fn counts(c: StructureCounts) -> Counts {
    Counts { p: c.p, j: c.j, f: c.f, h: c.h }
}

fn relations(list: &[Relation]) -> Vec<RelationValue> {
    list.iter()
        .map(|r| RelationValue { label: r.label.to_string(), residual: Float::new(r.residual), holds: r.holds() })
        .collect()
}

fn relation_tables(theta: &ThetaOperator) -> (Vec<RelationValue>, Vec<String>, bool) {
    let mut notes = Vec::new();
    let (rows, extra_ok) = match theta.order() {
        3 => (relations(&order_three_structures(theta).expect("order 3").relations), true),
        4 => {
            let r = order_four_structures(theta).expect("order 4");
            notes.push(format!(
                "equivalent conditions (-1 not in spec, P = -1, f almost complex, h1 = 1, h2 = 0): {:?}",
                r.equivalences
            ));
            (relations(&r.relations), r.equivalences_consistent())
        }
        5 => {
            let r = order_five_structures(theta).expect("order 5");
            notes.push(format!(
                "h1 + h2 = P is not an identity: residual {}; the table uses h1 + h2 = 1 and h1 - h2 = P",
                Float::new(r.h_sum_equals_p_residual).0
            ));
            notes.push(format!(
                "equivalent conditions (two-point spectrum, P = ±1, J1 = ±J2, one f null, one h trivial): {:?}",
                r.degeneracy
            ));
            (relations(&r.relations), r.degeneracy_consistent())
        }
        _ => (Vec::new(), true),
    };
    let ok = extra_ok && rows.iter().all(|r| r.holds);
    (rows, notes, ok)
}

pub fn canonical(order: u32, element: [Complex64; 3]) -> Result<Outcome, String> {
    let auto = InnerAutomorphism::new(element, order).map_err(|e| e.to_string())?;
    let theta = build_theta(&auto).map_err(|e| e.to_string())?;
    let catalog = enumerate_canonical(&theta, Execution::default()).map_err(|e| e.to_string())?;
    let generator = (theta.free_coefficients() > 0).then(|| {
        let mut zeta = vec![0i8; theta.free_coefficients()];
        zeta[0] = 1;
        structure_value(&canonical_f(&theta, &zeta).expect("nonzero coefficients"))
    });
    let (relations, notes, relations_ok) = relation_tables(&theta);
    let body = CanonicalBody {
        order,
        element: element.iter().map(|z| (*z).into()).collect(),
        multipliers: theta.multipliers().iter().map(|z| (*z).into()).collect(),
        spectrum: theta.spectrum().iter().map(|z| (*z).into()).collect(),
        quadratic_factors: theta.quadratic_factors(),
        irreducible_factors: theta.irreducible_factors(),
        generator,
        f_structures: catalog.f_structures.iter().map(structure_value).collect(),
        h_structures: catalog.h_structures.iter().map(structure_value).collect(),
        counts: counts(catalog.counts),
        predicted: counts(catalog.predicted),
        counts_match: catalog.matches_prediction(),
        relations,
        notes,
    };
    let agreed = body.counts_match && relations_ok;
    Ok(Outcome { body: Body::Canonical(body), agreed })
}

/// Nearest rational with denominator at most 12, if within `1e-9`.
fn snap(x: f64) -> Option<Rational64> {
    (1..=12i64).find_map(|q| {
        let p = (x * q as f64).round();
        ((x * q as f64 - p).abs() < 1e-9 * q as f64).then(|| Rational64::new(p as i64, q))
    })
}

pub fn einstein(grid: Grid, probe: Option<[Rational64; 3]>, settings: &Settings) -> Result<Outcome, String> {
    let found = einstein_scan(&grid, settings.tol, Execution::default()).map_err(|e| e.to_string())?;
    let mut points = Vec::new();
    for c in &found {
        let nkf = match (snap(c.t), snap(c.s)) {
            (Some(t), Some(s)) => FStructure::all()
                .iter()
                .filter(|f| strict_region(f, ClassTag::NearlyKahler).contains(t, s))
                .map(structure_label)
                .collect(),
            _ => Vec::new(),
        };
        points.push(EinsteinPoint {
            t: Float::new(c.t),
            s: Float::new(c.s),
            residual: Float::new(c.residual),
            constant: Float::new(c.constant),
            nkf_structures: nkf,
        });
    }
    let nkf_einstein_counts = FStructure::all()
        .iter()
        .filter(|f| !strict_region(f, ClassTag::NearlyKahler).is_empty())
        .map(|f| {
            let name = structure_label(f);
            let n = points.iter().filter(|p| p.nkf_structures.contains(&name)).count();
            NkfCount { name, einstein_metrics: n }
        })
        .collect();
    let probe = probe.map(|m| {
        let g = Metric::new(to_f64(m[0]), to_f64(m[1]), to_f64(m[2])).expect("positive metric");
        let residual = einstein_residual(&g);
        let einstein = residual <= settings.tol;
        EinsteinProbe {
            metric: m.map(Rational::from),
            ricci: ricci_eigenvalues(&g).map(Float::new),
            residual: Float::new(residual),
            constant: Float::new(einstein_constant(&g)),
            einstein,
            verdict: if einstein { "Einstein".into() } else { "not Einstein".into() },
        }
    });
    let axis = |a: fstruct_core::curvature::Axis| AxisValue {
        lo: Float::new(a.lo),
        hi: Float::new(a.hi),
        step: Float::new(a.step),
    };
    Ok(Outcome {
        body: Body::Einstein(EinsteinBody { grid: [axis(grid.t), axis(grid.s)], points, nkf_einstein_counts, probe }),
        agreed: true,
    })
}
