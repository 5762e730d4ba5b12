//! The eleven reproduction criteria, each returning a verdict with a JSON
//! record of what was compared.

use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::applications::{
    brute_force_iso, counting_sweep, dot_product_map, platonic_zmod_spectrum, ramanujan_classify,
    realized_iso_report, RealizedIso,
};
use crate::error::Result;
use crate::graph::{
    build_trace_graph, build_um, build_um0, cayley_witness, cayley_witness0, platonic_odd_matrix,
    relabel_iso_check,
};
use crate::ring::{parse_chain, parse_ring, ChainRing, Extension, Ring};
use crate::spectral::{
    bipartite_spectrum, compose_product_spectrum, extremal_plN, multiset_match, platonic_spectrum,
    predict_platonic_odd, predict_platonic_spectrum, predict_um0_spectrum, predict_um_spectrum,
    singular_values, FactorSpectrum, MatchVerdict, Spectrum, SpectrumPrediction,
};
use crate::sums::{close, verify_character_sums, verify_gauss_sums, SumsReport, DEFAULT_TOLERANCE};

pub const SPECTRUM_TOLERANCE: f64 = 1e-5;
pub const COUNTING_SEED: u64 = 1;
pub const COUNTING_TRIALS: usize = 200;

/// Extensions swept by the Eisenstein and relation criteria.
pub const SUM_EXTENSIONS: [(&str, usize); 9] = [
    ("GF(3)", 2),
    ("GF(3)", 3),
    ("GF(5)", 2),
    ("GF(9)", 2),
    ("Zmod(9)", 2),
    ("Zmod(9)", 3),
    ("Zmod(27)", 2),
    ("Zmod(25)", 2),
    ("EC(3,2,1)", 2),
];

pub const GAUSS_RINGS: [&str; 6] = [
    "GF(3)",
    "GF(5)",
    "Zmod(9)",
    "Zmod(27)",
    "Zmod(25)",
    "EC(3,2,1)",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Criterion {
    pub id: u32,
    pub key: &'static str,
    /// Extra names `--only` accepts for this criterion.
    pub groups: &'static [&'static str],
    pub title: &'static str,
}

pub const CRITERIA: [Criterion; 11] = [
    Criterion {
        id: 1,
        key: "eisenstein",
        groups: &["sums"],
        title: "Eisenstein sums match their predicted absolute values",
    },
    Criterion {
        id: 2,
        key: "gauss",
        groups: &["sums"],
        title: "Gauss sums match their predicted values",
    },
    Criterion {
        id: 3,
        key: "relation",
        groups: &["eisenstein", "sums"],
        title: "Gauss sums of induced characters decompose over trace fibers",
    },
    Criterion {
        id: 4,
        key: "spectra",
        groups: &["spectrum"],
        title: "Unimodular graph spectra match the predicted multisets",
    },
    Criterion {
        id: 5,
        key: "structure",
        groups: &["graphs"],
        title: "Sizes, degrees, diameters, girths, Cayley certificates",
    },
    Criterion {
        id: 6,
        key: "trace-iso",
        groups: &["graphs"],
        title: "Standard and trace realizations have equal edge sets",
    },
    Criterion {
        id: 7,
        key: "platonic",
        groups: &["spectrum"],
        title: "Platonic spectra over chain rings",
    },
    Criterion {
        id: 8,
        key: "product",
        groups: &["spectrum", "platonic"],
        title: "Platonic spectrum of Z/15 from its factors",
    },
    Criterion {
        id: 9,
        key: "ramanujan",
        groups: &["platonic"],
        title: "Ramanujan Platonic graphs over odd composite N <= 45",
    },
    Criterion {
        id: 10,
        key: "counting",
        groups: &["applications"],
        title: "Dot-product counting bound and edge-count reduction",
    },
    Criterion {
        id: 11,
        key: "iso",
        groups: &["applications"],
        title: "Isoperimetric constants certified by matching bounds",
    },
];

impl Criterion {
    pub fn selected_by(&self, filter: &str) -> bool {
        filter == self.key || filter == self.id.to_string() || self.groups.contains(&filter)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub key: &'static str,
    pub title: &'static str,
    pub pass: bool,
    #[serde(skip)]
    pub seconds: f64,
    pub details: Value,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} [{:>2}] {:<10} {} ({:.1}s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.key,
            self.title,
            self.seconds
        )
    }
}

/// Runs criteria, sharing the character-sum sweeps between criteria 1 and 3.
#[derive(Default)]
pub struct Runner {
    sums: Option<Vec<SumsReport>>,
}

impl Runner {
    pub fn new() -> Runner {
        Runner::default()
    }

    pub fn run(&mut self, c: &Criterion) -> CriterionResult {
        let start = Instant::now();
        let outcome = match c.id {
            1 => self.eisenstein(),
            2 => gauss(),
            3 => self.relation(),
            4 => spectra(),
            5 => structure(),
            6 => trace_iso(),
            7 => platonic(),
            8 => product(),
            9 => ramanujan(),
            10 => counting(),
            11 => iso(),
            _ => Ok((false, json!({ "error": "unknown criterion" }))),
        };
        let (pass, details) =
            outcome.unwrap_or_else(|e| (false, json!({ "error": e.to_string() })));
        CriterionResult {
            id: c.id,
            key: c.key,
            title: c.title,
            pass,
            seconds: start.elapsed().as_secs_f64(),
            details,
        }
    }

    /// Every criterion matching `only` (all of them when `None`), in order.
    pub fn run_all(&mut self, only: Option<&str>) -> Vec<CriterionResult> {
        CRITERIA
            .iter()
            .filter(|c| only.is_none_or(|f| c.selected_by(f)))
            .map(|c| self.run(c))
            .collect()
    }

    fn sums(&mut self) -> Result<&[SumsReport]> {
        if self.sums.is_none() {
            self.sums = Some(sum_sweeps()?);
        }
        Ok(self.sums.as_deref().expect("filled above"))
    }

    fn eisenstein(&mut self) -> Result<(bool, Value)> {
        let reports = self.sums()?;
        let rows: Vec<Value> = reports
            .iter()
            .map(|r| {
                json!({
                    "base": r.base, "degree": r.degree, "characters": r.characters,
                    "eisenstein_failures": r.eisenstein_failures, "higher_failures": r.higher_failures,
                    "zero_pattern_ok": r.zero_pattern_ok, "conjugation_ok": r.conjugation_ok,
                    "parseval_ok": r.parseval_ok,
                })
            })
            .collect();
        let pass = reports.iter().all(|r| {
            r.eisenstein_failures == 0
                && r.higher_failures == 0
                && r.zero_pattern_ok
                && r.conjugation_ok
                && r.parseval_ok
        });
        Ok((
            pass,
            json!({ "tolerance": DEFAULT_TOLERANCE, "extensions": rows }),
        ))
    }

    fn relation(&mut self) -> Result<(bool, Value)> {
        let reports = self.sums()?;
        let rows: Vec<Value> = reports
            .iter()
            .map(|r| {
                json!({
                    "base": r.base, "degree": r.degree,
                    "relation_failures": r.relation_failures,
                    "relation_max_residual": r.relation_max_residual,
                    "gauss_failures": r.gauss_failures,
                })
            })
            .collect();
        let pass = reports
            .iter()
            .all(|r| r.relation_failures == 0 && r.gauss_failures == 0);
        Ok((
            pass,
            json!({ "tolerance": DEFAULT_TOLERANCE, "extensions": rows }),
        ))
    }
}

/// The sweeps of criterion 1, one thread per extension, in list order.
pub fn sum_sweeps() -> Result<Vec<SumsReport>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = SUM_EXTENSIONS
            .iter()
            .map(|&(base, n)| {
                scope.spawn(move || {
                    let ext = Extension::new(&parse_chain(base)?, n)?;
                    verify_character_sums(&ext, DEFAULT_TOLERANCE)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep thread panicked"))
            .collect()
    })
}

fn gauss() -> Result<(bool, Value)> {
    let mut rows = Vec::new();
    let mut pass = true;
    for name in GAUSS_RINGS {
        let r = verify_gauss_sums(&parse_chain(name)?, DEFAULT_TOLERANCE)?;
        pass &= r.pass;
        rows.push(serde_json::to_value(&r).expect("serializable"));
    }
    Ok((
        pass,
        json!({ "tolerance": DEFAULT_TOLERANCE, "rings": rows }),
    ))
}

fn match_json(verdict: &MatchVerdict, predicted: &SpectrumPrediction) -> Value {
    json!({
        "pass": verdict.pass,
        "source": predicted.source,
        "dimension": predicted.dimension,
        "rows": verdict.rows,
        "unmatched": verdict.unmatched,
    })
}

/// `(family, base, n)` for the unimodular spectrum criterion.
pub const SPECTRUM_CASES: [(&str, &str, usize); 6] = [
    ("um", "GF(3)", 2),
    ("um", "GF(5)", 2),
    ("um0", "GF(3)", 3),
    ("um0", "GF(3)", 4),
    ("um", "Zmod(9)", 2),
    ("um0", "Zmod(9)", 3),
];

/// Builds `Um` or `Um₀`, computes its spectrum, and matches the prediction.
pub fn unimodular_spectrum_check(
    family: &str,
    base: &ChainRing,
    n: usize,
    tol: f64,
) -> Result<(MatchVerdict, SpectrumPrediction, Spectrum)> {
    let ring = Ring::from(base.clone());
    let (graph, predicted) = match family {
        "um0" => (build_um0(&ring, n)?, predict_um0_spectrum(base, n)?),
        _ => (build_um(&ring, n)?, predict_um_spectrum(base, n)?),
    };
    let computed = bipartite_spectrum(&graph)?;
    Ok((
        multiset_match(&computed, &predicted, tol),
        predicted,
        computed,
    ))
}

fn spectra() -> Result<(bool, Value)> {
    let mut rows = Vec::new();
    let mut pass = true;
    for (family, base, n) in SPECTRUM_CASES {
        let (verdict, predicted, _) =
            unimodular_spectrum_check(family, &parse_chain(base)?, n, SPECTRUM_TOLERANCE)?;
        pass &= verdict.pass;
        rows.push(json!({ "family": family, "ring": base, "n": n, "match": match_json(&verdict, &predicted) }));
    }
    Ok((
        pass,
        json!({ "tolerance": SPECTRUM_TOLERANCE, "cases": rows }),
    ))
}

fn expected_shape(family: &str, r: &ChainRing, n: usize) -> (u64, u64, usize, usize) {
    let (q, l, n32) = (r.q(), r.ell(), n as u32);
    if family == "um0" {
        let m = q.pow((n32 - 1) * (l - 1)) * (q.pow(n32) - 1) / (q - 1);
        let d = q.pow((n32 - 2) * (l - 1)) * (q.pow(n32 - 1) - 1) / (q - 1);
        let girth = if n == 3 && l == 1 { 6 } else { 4 };
        (m, d, 3, girth)
    } else {
        let m = q.pow(n32 * l) - q.pow(n32 * (l - 1));
        let d = q.pow((n32 - 1) * l);
        let girth = if n == 2 && l == 1 { 6 } else { 4 };
        (m, d, 4, girth)
    }
}

fn structure() -> Result<(bool, Value)> {
    let mut rows = Vec::new();
    let mut pass = true;
    for (family, base, n) in SPECTRUM_CASES.iter().copied().chain([("um", "GF(3)", 3)]) {
        let r = parse_chain(base)?;
        let ring = Ring::from(r.clone());
        let g = if family == "um0" {
            build_um0(&ring, n)?
        } else {
            build_um(&ring, n)?
        };
        let stats = g.to_graph().stats();
        let (m, d, diameter, girth) = expected_shape(family, &r, n);
        let ok = g.half_size() as u64 == m
            && g.degree() == Some(d as usize)
            && stats.diameter == Some(diameter)
            && stats.girth == Some(girth);
        pass &= ok;
        rows.push(json!({
            "graph": g.name, "half_size": g.half_size(), "expected_half_size": m,
            "degree": g.degree(), "expected_degree": d,
            "diameter": stats.diameter, "expected_diameter": diameter,
            "girth": stats.girth, "expected_girth": girth, "pass": ok,
        }));
    }
    let mut certs = Vec::new();
    for (base, n, projective) in [
        ("GF(3)", 2, false),
        ("GF(3)", 3, false),
        ("GF(5)", 2, false),
        ("Zmod(9)", 2, false),
        ("GF(3)", 3, true),
        ("GF(3)", 4, true),
        ("Zmod(9)", 3, true),
    ] {
        let ext = Extension::new(&parse_chain(base)?, n)?;
        let cert = if projective {
            cayley_witness0(&ext)?
        } else {
            cayley_witness(&ext)?
        };
        pass &= cert.verified();
        certs.push(json!({
            "extension": format!("{} over {base}", ext.top()),
            "projective": projective,
            "connection_set_size": cert.connection_set.len(),
            "involutions": cert.involutions,
            "identity_excluded": cert.identity_excluded,
            "edges_match": cert.edges_match,
        }));
    }
    Ok((pass, json!({ "graphs": rows, "cayley": certs })))
}

fn trace_iso() -> Result<(bool, Value)> {
    let mut rows = Vec::new();
    let mut pass = true;
    for (base, n) in [("GF(3)", 2), ("Zmod(9)", 2)] {
        let r = parse_chain(base)?;
        let ext = Extension::new(&r, n)?;
        let um = build_um(&Ring::from(r), n)?;
        let tr = build_trace_graph(&ext)?;
        let ok = relabel_iso_check(&um, &tr, &ext, &dot_product_map(&ext)?)?;
        pass &= ok;
        rows.push(json!({ "standard": um.name, "trace": tr.name, "edges": um.edge_count(), "equal_edge_sets": ok }));
    }
    Ok((pass, json!({ "cases": rows })))
}

/// Spectrum checks of `Pl(R)` for a chain ring: the even part against the
/// prediction, the odd part through singular values of `odd`.
pub fn platonic_check(r: &ChainRing, odd: &[Vec<f64>]) -> Result<(bool, Value)> {
    let ring = Ring::from(r.clone());
    let even = platonic_spectrum(&ring)?;
    let pe = predict_platonic_spectrum(r)?;
    let ve = multiset_match(&even, &pe, SPECTRUM_TOLERANCE);
    let po = predict_platonic_odd(r)?;
    let vo = multiset_match(&singular_values(odd)?, &po, SPECTRUM_TOLERANCE);
    let trace_zero = even.trace().abs() < 1e-6;
    let missing = if r.q() == 3 {
        let m = 3f64.powf(r.ell() as f64 - 0.5);
        Some(
            even.multiplicity_of(m, SPECTRUM_TOLERANCE)
                + even.multiplicity_of(-m, SPECTRUM_TOLERANCE)
                == 0,
        )
    } else {
        None
    };
    let pass = ve.pass && vo.pass && trace_zero && missing.unwrap_or(true);
    Ok((
        pass,
        json!({
            "ring": r.label(), "vertices": even.dimension(),
            "even": match_json(&ve, &pe), "odd_singular_values": match_json(&vo, &po),
            "trace_zero": trace_zero, "missing_branch_absent": missing,
        }),
    ))
}

fn pairs_equal(got: &SpectrumPrediction, want: &[(f64, u64)]) -> bool {
    let g = got.merged(1e-9).pairs();
    g.len() == want.len()
        && g.iter()
            .zip(want)
            .all(|(a, b)| close(a.0, b.0, 1e-9) && a.1 == b.1)
}

fn platonic() -> Result<(bool, Value)> {
    let s5 = 5f64.sqrt();
    let stated: [(&str, Vec<(f64, u64)>); 3] = [
        ("Zmod(3)", vec![(-1.0, 3), (3.0, 1)]),
        ("Zmod(5)", vec![(-s5, 3), (-1.0, 5), (s5, 3), (5.0, 1)]),
        ("Zmod(9)", vec![(-3.0, 15), (0.0, 8), (3.0, 12), (9.0, 1)]),
    ];
    let mut rows = Vec::new();
    let mut pass = true;
    for (name, want) in &stated {
        let r = parse_chain(name)?;
        let stated_ok = pairs_equal(&predict_platonic_spectrum(&r)?, want);
        let (ok, detail) = platonic_check(&r, &platonic_odd_matrix(&Ring::from(r.clone()))?)?;
        pass &= ok && stated_ok;
        rows.push(json!({ "check": detail, "prediction_equals_stated": stated_ok }));
    }
    for name in ["Zmod(7)", "Zmod(25)", "Zmod(27)", "GF(9)"] {
        let r = parse_chain(name)?;
        let (ok, detail) = platonic_check(&r, &platonic_odd_matrix(&Ring::from(r.clone()))?)?;
        pass &= ok;
        rows.push(json!({ "check": detail }));
    }
    Ok((
        pass,
        json!({ "tolerance": SPECTRUM_TOLERANCE, "rings": rows }),
    ))
}

fn product() -> Result<(bool, Value)> {
    let ring = parse_ring("Zmod(15)")?;
    let numeric = platonic_spectrum(&ring)?;
    let predicted_factors = ring
        .factors()
        .iter()
        .map(FactorSpectrum::predicted)
        .collect::<Result<Vec<_>>>()?;
    let numeric_factors = ring
        .factors()
        .iter()
        .map(FactorSpectrum::numeric)
        .collect::<Result<Vec<_>>>()?;
    let composed = compose_product_spectrum(&predicted_factors)?;
    let composed_numeric = compose_product_spectrum(&numeric_factors)?;
    let v1 = multiset_match(&numeric, &composed, SPECTRUM_TOLERANCE);
    let v2 = multiset_match(&numeric, &composed_numeric, SPECTRUM_TOLERANCE);
    let (hi, lo) = numeric.nontrivial_extremes(15.0, false);
    let (thi, tlo) = extremal_plN(15)?;
    let extremes_ok = close(hi, thi, SPECTRUM_TOLERANCE) && close(lo, tlo, SPECTRUM_TOLERANCE);
    let minus_n_over_p: Vec<Value> = [3.0, 5.0]
        .iter()
        .map(|p| {
            let v = -15.0 / p;
            json!({ "value": v, "multiplicity": numeric.multiplicity_of(v, SPECTRUM_TOLERANCE) })
        })
        .collect();
    let minus_n_over_p_ok = minus_n_over_p
        .iter()
        .all(|g| g["multiplicity"].as_u64().unwrap_or(0) > 0);
    let pass = v1.pass && v2.pass && numeric.dimension() == 96 && extremes_ok && minus_n_over_p_ok;
    Ok((
        pass,
        json!({
            "vertices": numeric.dimension(),
            "composed_from_predictions": match_json(&v1, &composed),
            "composed_from_numeric_factors": match_json(&v2, &composed_numeric),
            "largest": hi, "smallest": lo, "table": [thi, tlo], "extremes_ok": extremes_ok,
            "minus_n_over_p": minus_n_over_p,
        }),
    ))
}

/// `N` whose composed spectrum is also checked against the numeric one.
pub const RAMANUJAN_NUMERIC: [u64; 4] = [15, 21, 25, 27];

fn ramanujan() -> Result<(bool, Value)> {
    let rows = ramanujan_classify(45)?;
    let set: Vec<u64> = rows.iter().filter(|r| r.ramanujan).map(|r| r.n).collect();
    let mut numeric = Vec::new();
    let mut numeric_ok = true;
    for n in RAMANUJAN_NUMERIC {
        let computed = platonic_spectrum(&Ring::zmod(n)?)?;
        let composed = platonic_zmod_spectrum(n)?;
        let pred = SpectrumPrediction::new(
            "composed",
            composed.dimension(),
            composed
                .values
                .iter()
                .map(|e| (e.value, e.multiplicity, String::new()))
                .collect(),
            None,
        )?;
        let ok = multiset_match(&computed, &pred, SPECTRUM_TOLERANCE).pass;
        numeric_ok &= ok;
        numeric.push(json!({ "n": n, "numeric_equals_composed": ok }));
    }
    let minus_n_over_p_ok = rows.iter().all(|r| r.minus_n_over_p_ok);
    let pass = set == [9, 15, 21, 27, 33] && numeric_ok && minus_n_over_p_ok;
    Ok((
        pass,
        json!({ "ramanujan_set": set, "rows": rows, "numeric": numeric }),
    ))
}

fn counting() -> Result<(bool, Value)> {
    let mut rows = Vec::new();
    let mut pass = true;
    for (base, n) in [("Zmod(9)", 2), ("GF(5)", 3)] {
        let sweep = counting_sweep(&parse_chain(base)?, n, 1, COUNTING_TRIALS, COUNTING_SEED)?;
        let bound_ok = sweep.trials.iter().all(|t| t.pass);
        let reduction_ok = sweep.trials.iter().all(|t| t.reduction_ok);
        let threshold_ok = sweep.trials.iter().all(|t| t.threshold_ok);
        pass &= bound_ok && reduction_ok && threshold_ok;
        let worst = sweep
            .trials
            .iter()
            .map(|t| (t.count as f64 - t.expected).abs() / t.bound)
            .fold(0.0, f64::max);
        rows.push(json!({
            "ring": base, "n": n, "trials": sweep.trials.len(), "seed": sweep.seed,
            "bound_ok": bound_ok, "reduction_ok": reduction_ok, "threshold_ok": threshold_ok,
            "above_threshold_trials": sweep.trials.iter().filter(|t| t.above_threshold).count(),
            "worst_residual_over_bound": worst,
        }));
    }
    Ok((pass, json!({ "sweeps": rows })))
}

fn iso() -> Result<(bool, Value)> {
    let gf3 = parse_chain("GF(3)")?;
    let exact_ok = |r: &RealizedIso, v: f64| {
        r.certified
            && r.report.exact == Some(v)
            && r.report
                .partition
                .as_ref()
                .is_some_and(|p| p.blocks_ok && p.cut_ok)
    };
    let um3 = realized_iso_report(&gf3, 3, false)?;
    let um04 = realized_iso_report(&gf3, 4, true)?;

    let um2 = build_um(&Ring::from(gf3), 2)?;
    let exact = brute_force_iso(&um2.to_graph())?;
    let (lo, hi) = (0.5 * (3.0 - 3f64.sqrt()), 1.0);
    let sandwich_ok = exact.value >= lo - 1e-12 && exact.value <= hi + 1e-12;

    let pass = exact_ok(&um3, 3.0) && exact_ok(&um04, 5.0) && sandwich_ok;
    Ok((
        pass,
        json!({
            "um_gf3_3": um3,
            "um0_gf3_4": um04,
            "um_gf3_2": { "brute_force": exact, "sandwich": [lo, hi], "inside": sandwich_ok },
        }),
    ))
}
