//! Command-line front end: ring and character tables, sum sweeps, graph
//! construction and statistics, spectra against their predictions, counting
//! sweeps, isoperimetric bounds, and the full reproduction run.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use unigraph::applications::{
    brute_force_iso, counting_sweep, ramanujan_classify, realized_iso_report, regular_iso_lower,
    BRUTE_FORCE_ISO_CAP,
};
use unigraph::graph::{
    build_platonic, build_trace_graph, build_trace_graph0, build_um, build_um0,
    platonic_odd_matrix, BipartiteGraph, EdgeList, Graph,
};
use unigraph::reproduce::{platonic_check, Runner, CRITERIA};
use unigraph::ring::{parse_chain, parse_ring};
use unigraph::spectral::{
    bipartite_spectrum, compose_product_spectrum, extremal_plN, multiset_match, platonic_spectrum,
    predict_platonic_spectrum, predict_um0_spectrum, predict_um_spectrum, symmetric_eigs,
    FactorSpectrum, Spectrum, SpectrumPrediction,
};
use unigraph::sums::{verify_character_sums, verify_gauss_sums, DEFAULT_TOLERANCE};
use unigraph::{AdditiveCharacters, ChainRing, Extension, Ring, Subset, UnitGroup};

#[derive(Parser)]
#[command(
    name = "unigraph",
    version,
    about = "Finite chain rings, Eisenstein sums, and unimodular graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(clap::Args, Clone)]
struct Global {
    /// Report format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here; a summary then goes to standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Tolerance for comparisons with predicted values.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Edges,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Um,
    Um0,
    Trace,
    Trace0,
    Platonic,
}

#[derive(clap::Args, Clone)]
struct GraphArgs {
    #[arg(long)]
    ring: String,
    /// Tuple length, or extension degree for the trace families.
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, value_enum, default_value = "um")]
    family: Family,
}

#[derive(Subcommand)]
enum Command {
    /// Chain-ring parameters and unit group structure.
    RingInfo {
        #[arg(long)]
        ring: String,
    },
    /// Multiplicative and additive characters with their valuations.
    Chars {
        #[arg(long)]
        ring: String,
    },
    /// Eisenstein and Gauss sums against their closed forms.
    SumsVerify {
        #[arg(long)]
        ring: String,
        /// Degree of the unramified extension; without it only Gauss sums over the ring are checked.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Build a unimodular, trace, or Platonic graph.
    GraphBuild(GraphArgs),
    /// Size, degree, diameter, and girth.
    GraphStats(GraphArgs),
    /// Numeric adjacency spectrum.
    Spectrum(GraphArgs),
    /// Numeric spectrum against the predicted multiset.
    SpectrumVerify(GraphArgs),
    /// Platonic graph spectrum: even and odd parts of the determinant operator.
    Platonic {
        #[arg(long)]
        ring: String,
    },
    /// Platonic spectrum of a product ring composed from its factors.
    PlatonicProduct {
        #[arg(long)]
        ring: String,
    },
    /// Dot-product counting over random sets with the edge-count reduction.
    CountingSweep {
        #[arg(long)]
        ring: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Target value `r` of `a·b`, as an integer in the ring.
        #[arg(long, default_value_t = 1)]
        r: i64,
    },
    /// Isoperimetric bounds from eigenvalues and eigenvectors.
    Iso(GraphArgs),
    /// Ramanujan classification of Platonic graphs over Z/N.
    Ramanujan {
        #[arg(long, default_value_t = 45)]
        max: u64,
    },
    /// Run the reproduction criteria.
    ReproduceAll {
        /// Run only criteria with this key, number, or group.
        #[arg(long)]
        only: Option<String>,
    },
}

/// What a command produced: a machine-readable report, a human summary, and a verdict.
struct Outcome {
    report: String,
    summary: Vec<String>,
    pass: bool,
}

impl Outcome {
    fn json(command: &str, pass: bool, body: Value, summary: Vec<String>) -> Outcome {
        let mut doc = json!({ "schema": 1, "command": command, "pass": pass });
        if let (Some(doc), Value::Object(body)) = (doc.as_object_mut(), body) {
            doc.extend(body);
        }
        Outcome {
            report: serde_json::to_string_pretty(&doc).expect("serializable") + "\n",
            summary,
            pass,
        }
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn chain(spec: &str) -> Result<ChainRing> {
    parse_chain(spec).with_context(|| format!("ring `{spec}`"))
}

fn ring_info(spec: &str) -> Result<Outcome> {
    let ring = parse_ring(spec)?;
    let mut factors = Vec::new();
    for f in ring.factors() {
        let units = UnitGroup::new(f)?;
        factors.push(json!({
            "label": f.label(), "family": f.family(), "p": f.p(), "ell": f.ell(), "m": f.m(), "q": f.q(),
            "size": f.size(), "units": f.unit_count(), "modulus": f.modulus(),
            "unit_group": { "orders": units.orders(), "generators": units.generators(), "exponent": units.exponent() },
        }));
    }
    let summary = vec![format!(
        "{}: {} elements, {} units, {} factor(s)",
        ring,
        ring.size(),
        ring.unit_count(),
        factors.len()
    )];
    Ok(Outcome::json(
        "ring-info",
        true,
        json!({ "ring": ring.label(), "size": ring.size(), "units": ring.unit_count(), "factors": factors }),
        summary,
    ))
}

fn chars(spec: &str, format: Format) -> Result<Outcome> {
    let r = chain(spec)?;
    let units = UnitGroup::new(&r)?;
    let add = AdditiveCharacters::new(&r)?;
    let mult: Vec<(Vec<u64>, u64, u32)> = units
        .characters()
        .map(|c| {
            (
                c.exponents.clone(),
                units.char_order(&c),
                units.valuation(&c),
            )
        })
        .collect();
    let additive: Vec<(u64, u32)> = r
        .enumerate(Subset::All)?
        .into_iter()
        .map(|a| (a, add.valuation(a)))
        .collect();
    let summary = vec![format!(
        "{}: {} multiplicative and {} additive characters",
        r,
        mult.len(),
        additive.len()
    )];
    if format == Format::Csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["kind", "index", "exponents", "order", "valuation"])?;
        for (i, (e, o, v)) in mult.iter().enumerate() {
            let e = e.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
            w.write_record([
                "multiplicative",
                &i.to_string(),
                &e,
                &o.to_string(),
                &v.to_string(),
            ])?;
        }
        for (a, v) in &additive {
            w.write_record([
                "additive",
                &a.to_string(),
                &a.to_string(),
                "",
                &v.to_string(),
            ])?;
        }
        let report = String::from_utf8(w.into_inner()?)?;
        return Ok(Outcome {
            report,
            summary,
            pass: true,
        });
    }
    let mult_json: Vec<Value> = mult
        .iter()
        .map(|(e, o, v)| json!({ "exponents": e, "order": o, "valuation": v }))
        .collect();
    let add_json: Vec<Value> = additive
        .iter()
        .map(|(a, v)| json!({ "a": a, "valuation": v }))
        .collect();
    Ok(Outcome::json(
        "chars",
        true,
        json!({
            "ring": r.label(), "generators": units.generators(), "orders": units.orders(),
            "multiplicative": mult_json, "additive": add_json,
        }),
        summary,
    ))
}

fn sums_verify(spec: &str, degree: Option<usize>, tol: f64) -> Result<Outcome> {
    let r = chain(spec)?;
    let gauss = verify_gauss_sums(&r, tol)?;
    let mut summary = vec![format!(
        "{} Gauss sums over {}: {} pairs, max relative error {:.1e}",
        verdict(gauss.pass),
        r,
        gauss.pairs,
        gauss.max_error
    )];
    let mut pass = gauss.pass;
    let mut body = json!({ "ring": r.label(), "tolerance": tol, "gauss": gauss });
    if let Some(n) = degree {
        let report = verify_character_sums(&Extension::new(&r, n)?, tol)?;
        summary.push(format!(
            "{} Eisenstein sums, degree {n}: {} characters, {} failures, relation residual {:.1e}",
            verdict(report.pass),
            report.characters,
            report.eisenstein_failures
                + report.relation_failures
                + report.higher_failures
                + report.gauss_failures,
            report.relation_max_residual
        ));
        pass &= report.pass;
        body["extension"] = serde_json::to_value(&report)?;
    }
    Ok(Outcome::json("sums-verify", pass, body, summary))
}

enum Built {
    Bipartite(BipartiteGraph),
    Plain(Graph),
}

impl Built {
    fn name(&self) -> &str {
        match self {
            Built::Bipartite(b) => &b.name,
            Built::Plain(g) => &g.name,
        }
    }

    fn graph(&self) -> Graph {
        match self {
            Built::Bipartite(b) => b.to_graph(),
            Built::Plain(g) => g.clone(),
        }
    }

    fn edge_list(&self) -> EdgeList {
        match self {
            Built::Bipartite(b) => b.edge_list(),
            Built::Plain(g) => g.edge_list(),
        }
    }

    fn spectrum(&self) -> Result<Spectrum> {
        Ok(match self {
            Built::Bipartite(b) => bipartite_spectrum(b)?,
            Built::Plain(g) => symmetric_eigs(&g.matrix())?,
        })
    }
}

fn build(args: &GraphArgs) -> Result<Built> {
    let ring = parse_ring(&args.ring)?;
    Ok(match args.family {
        Family::Um => Built::Bipartite(build_um(&ring, args.n)?),
        Family::Um0 => Built::Bipartite(build_um0(&ring, args.n)?),
        Family::Trace => Built::Bipartite(build_trace_graph(&Extension::new(
            &chain(&args.ring)?,
            args.n,
        )?)?),
        Family::Trace0 => Built::Bipartite(build_trace_graph0(&Extension::new(
            &chain(&args.ring)?,
            args.n,
        )?)?),
        Family::Platonic => Built::Plain(build_platonic(&ring)?),
    })
}

fn graph_build(args: &GraphArgs, format: Format) -> Result<Outcome> {
    let g = build(args)?;
    let edges = g.edge_list();
    let summary = vec![format!(
        "{}: {} vertices, {} edges, degree {}",
        g.name(),
        edges.vertices,
        edges.edges.len(),
        edges.degree
    )];
    match format {
        Format::Edges => Ok(Outcome {
            report: edges.to_text(),
            summary,
            pass: true,
        }),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["u", "v"])?;
            for (u, v) in &edges.edges {
                w.write_record([u.to_string(), v.to_string()])?;
            }
            Ok(Outcome {
                report: String::from_utf8(w.into_inner()?)?,
                summary,
                pass: true,
            })
        }
        Format::Json => Ok(Outcome::json(
            "graph-build",
            true,
            json!({ "graph": g.name(), "vertices": edges.vertices, "degree": edges.degree, "edges": edges.edges }),
            summary,
        )),
    }
}

fn graph_stats(args: &GraphArgs) -> Result<Outcome> {
    let g = build(args)?;
    let stats = g.graph().stats();
    let half = match &g {
        Built::Bipartite(b) => Some(b.half_size()),
        Built::Plain(_) => None,
    };
    let summary = vec![format!(
        "{}: {} vertices, degree {:?}, diameter {:?}, girth {:?}",
        g.name(),
        stats.vertices,
        stats.degree,
        stats.diameter,
        stats.girth
    )];
    Ok(Outcome::json(
        "graph-stats",
        true,
        json!({ "graph": g.name(), "half_size": half, "stats": stats }),
        summary,
    ))
}

fn spectrum_rows(s: &Spectrum) -> Vec<Value> {
    s.values
        .iter()
        .map(|e| json!({ "value": e.value, "multiplicity": e.multiplicity }))
        .collect()
}

fn spectrum(args: &GraphArgs, format: Format) -> Result<Outcome> {
    let g = build(args)?;
    let s = g.spectrum()?;
    let summary = vec![format!(
        "{}: {} distinct eigenvalues, dimension {}",
        g.name(),
        s.values.len(),
        s.dimension()
    )];
    if format == Format::Csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["value", "multiplicity"])?;
        for e in &s.values {
            w.write_record([e.value.to_string(), e.multiplicity.to_string()])?;
        }
        return Ok(Outcome {
            report: String::from_utf8(w.into_inner()?)?,
            summary,
            pass: true,
        });
    }
    Ok(Outcome::json(
        "spectrum",
        true,
        json!({ "graph": g.name(), "spectrum": spectrum_rows(&s) }),
        summary,
    ))
}

fn platonic_prediction(ring: &Ring) -> Result<SpectrumPrediction> {
    match ring.as_chain() {
        Some(c) => Ok(predict_platonic_spectrum(c)?),
        None => {
            let factors = ring
                .factors()
                .iter()
                .map(FactorSpectrum::predicted)
                .collect::<Result<Vec<_>, _>>()?;
            Ok(compose_product_spectrum(&factors)?)
        }
    }
}

fn prediction(args: &GraphArgs) -> Result<SpectrumPrediction> {
    if args.family == Family::Platonic {
        return platonic_prediction(&parse_ring(&args.ring)?);
    }
    let c = chain(&args.ring)?;
    Ok(match args.family {
        Family::Um | Family::Trace => predict_um_spectrum(&c, args.n)?,
        _ => predict_um0_spectrum(&c, args.n)?,
    })
}

fn spectrum_verify(args: &GraphArgs, format: Format, tol: f64) -> Result<Outcome> {
    let g = build(args)?;
    let computed = g.spectrum()?;
    let predicted = prediction(args)?;
    let v = multiset_match(&computed, &predicted, tol);
    let mut summary = vec![format!(
        "{} {} against {} ({})",
        verdict(v.pass),
        g.name(),
        predicted.source,
        predicted.dimension
    )];
    summary.extend(v.table().lines().map(str::to_string));
    if format == Format::Csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["value", "predicted", "computed", "delta", "label"])?;
        for r in &v.rows {
            w.write_record([
                r.value.to_string(),
                r.predicted.to_string(),
                r.computed.to_string(),
                r.delta.to_string(),
                r.label.clone(),
            ])?;
        }
        for e in &v.unmatched {
            w.write_record([
                e.value.to_string(),
                "0".into(),
                e.multiplicity.to_string(),
                String::new(),
                "unpredicted".into(),
            ])?;
        }
        return Ok(Outcome {
            report: String::from_utf8(w.into_inner()?)?,
            summary,
            pass: v.pass,
        });
    }
    Ok(Outcome::json(
        "spectrum-verify",
        v.pass,
        json!({
            "graph": g.name(), "tolerance": tol, "source": predicted.source,
            "computed": spectrum_rows(&computed), "predicted": predicted.entries,
            "rows": v.rows, "unmatched": v.unmatched,
        }),
        summary,
    ))
}

fn platonic(spec: &str) -> Result<Outcome> {
    let ring = parse_ring(spec)?;
    let Some(c) = ring.as_chain() else {
        return platonic_product(spec);
    };
    let (pass, detail) = platonic_check(c, &platonic_odd_matrix(&ring)?)?;
    let summary = vec![format!(
        "{} Pl({}): even part and odd singular values against the prediction",
        verdict(pass),
        ring
    )];
    Ok(Outcome::json(
        "platonic",
        pass,
        json!({ "check": detail }),
        summary,
    ))
}

fn platonic_product(spec: &str) -> Result<Outcome> {
    let ring = parse_ring(spec)?;
    let factors = ring
        .factors()
        .iter()
        .map(FactorSpectrum::predicted)
        .collect::<Result<Vec<_>, _>>()?;
    let composed = compose_product_spectrum(&factors)?;
    let numeric = platonic_spectrum(&ring)?;
    let v = multiset_match(&numeric, &composed, unigraph::reproduce::SPECTRUM_TOLERANCE);
    let n = ring.size();
    let (hi, lo) = numeric.nontrivial_extremes(n as f64, false);
    let mut body = json!({
        "ring": ring.label(), "factors": factors, "vertices": numeric.dimension(),
        "composed": composed.merged(1e-9).entries, "numeric": spectrum_rows(&numeric),
        "rows": v.rows, "unmatched": v.unmatched, "largest": hi, "smallest": lo,
    });
    let mut pass = v.pass;
    let zmod_odd =
        ring.factors().iter().all(|f| f.m() == 1 && f.p() != 2) && ring.label().starts_with("Zmod");
    if zmod_odd {
        let (thi, tlo) = extremal_plN(n)?;
        let ok = (hi - thi).abs() < 1e-5 * thi.abs().max(1.0)
            && (lo - tlo).abs() < 1e-5 * tlo.abs().max(1.0);
        pass &= ok;
        body["table"] = json!({ "largest": thi, "smallest": tlo, "agrees": ok });
    }
    let mut summary = vec![format!(
        "{} Pl({}): {} vertices, composed spectrum {} numeric; extremes {:.6}, {:.6}",
        verdict(pass),
        ring,
        numeric.dimension(),
        if v.pass { "equals" } else { "differs from" },
        hi,
        lo
    )];
    summary.extend(v.table().lines().map(str::to_string));
    Ok(Outcome::json("platonic-product", pass, body, summary))
}

fn counting(
    spec: &str,
    n: usize,
    trials: usize,
    r: i64,
    seed: u64,
    format: Format,
) -> Result<Outcome> {
    let c = chain(spec)?;
    let sweep = counting_sweep(&c, n, c.from_int(r), trials, seed)?;
    let summary = vec![format!(
        "{} counting over {}^{}: {} trials, r = {}, seed {}",
        verdict(sweep.pass),
        c,
        n,
        sweep.trials.len(),
        r,
        seed
    )];
    if format == Format::Csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "trial",
            "size_a",
            "size_b",
            "density_a",
            "density_b",
            "count",
            "expected",
            "bound",
            "pass",
            "reduction_count",
            "reduction_ok",
            "above_threshold",
            "threshold_ok",
        ])?;
        for (i, t) in sweep.trials.iter().enumerate() {
            w.write_record([
                i.to_string(),
                t.size_a.to_string(),
                t.size_b.to_string(),
                t.density_a.to_string(),
                t.density_b.to_string(),
                t.count.to_string(),
                t.expected.to_string(),
                t.bound.to_string(),
                t.pass.to_string(),
                t.reduction_count.to_string(),
                t.reduction_ok.to_string(),
                t.above_threshold.to_string(),
                t.threshold_ok.to_string(),
            ])?;
        }
        return Ok(Outcome {
            report: String::from_utf8(w.into_inner()?)?,
            summary,
            pass: sweep.pass,
        });
    }
    let pass = sweep.pass;
    Ok(Outcome::json(
        "counting-sweep",
        pass,
        serde_json::to_value(&sweep)?,
        summary,
    ))
}

fn iso(args: &GraphArgs) -> Result<Outcome> {
    let g = build(args)?;
    let graph = g.graph();
    let exact = if graph.vertex_count() <= BRUTE_FORCE_ISO_CAP {
        Some(brute_force_iso(&graph)?)
    } else {
        None
    };
    let (report, certified) = match (args.family, parse_chain(&args.ring)) {
        (Family::Um | Family::Um0 | Family::Trace | Family::Trace0, Ok(c)) => {
            let projective = matches!(args.family, Family::Um0 | Family::Trace0);
            let r = realized_iso_report(&c, args.n, projective)?;
            (r.report, Some(r.certified))
        }
        (Family::Platonic, _) => (regular_iso_lower(&graph, &g.spectrum()?)?, None),
        _ => bail!(
            "unimodular and trace families need a chain ring; use --family platonic for products"
        ),
    };
    let sandwich_ok = exact.is_none_or(|e| {
        e.value >= report.lower - 1e-9 && report.upper.is_none_or(|u| e.value <= u + 1e-9)
    });
    let pass = sandwich_ok && certified.unwrap_or(true);
    let summary = vec![format!(
        "{} {}: lower {:.6}, upper {}, exact {}",
        verdict(pass),
        g.name(),
        report.lower,
        report.upper.map_or("none".into(), |u| format!("{u:.6}")),
        exact
            .map(|e| format!("{:.6}", e.value))
            .or(report.exact.map(|e| format!("{e:.6}")))
            .unwrap_or("unknown".into())
    )];
    Ok(Outcome::json(
        "iso",
        pass,
        json!({ "graph": g.name(), "report": report, "trace_realization_certified": certified, "brute_force": exact }),
        summary,
    ))
}

fn ramanujan(max: u64, format: Format) -> Result<Outcome> {
    let rows = ramanujan_classify(max)?;
    let set: Vec<u64> = rows.iter().filter(|r| r.ramanujan).map(|r| r.n).collect();
    let pass = rows.iter().all(|r| r.minus_n_over_p_ok && r.table_ok);
    let summary = vec![format!("Ramanujan among odd composite N <= {max}: {set:?}")];
    if format == Format::Csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "n",
            "ramanujan",
            "largest",
            "smallest",
            "max_abs_nontrivial",
            "bound",
            "iso_lower",
        ])?;
        for r in &rows {
            w.write_record([
                r.n.to_string(),
                r.ramanujan.to_string(),
                r.largest.to_string(),
                r.smallest.to_string(),
                r.max_abs_nontrivial.to_string(),
                r.bound.to_string(),
                r.iso_lower.to_string(),
            ])?;
        }
        return Ok(Outcome {
            report: String::from_utf8(w.into_inner()?)?,
            summary,
            pass,
        });
    }
    Ok(Outcome::json(
        "ramanujan",
        pass,
        json!({ "max": max, "ramanujan_set": set, "rows": rows }),
        summary,
    ))
}

fn reproduce_all(only: Option<&str>) -> Result<Outcome> {
    if let Some(f) = only {
        if !CRITERIA.iter().any(|c| c.selected_by(f)) {
            bail!("no criterion matches `{f}`");
        }
    }
    let results = Runner::new().run_all(only);
    let pass = results.iter().all(|r| r.pass);
    let summary: Vec<String> = results.iter().map(|r| r.line()).collect();
    let failed: Vec<&str> = results.iter().filter(|r| !r.pass).map(|r| r.key).collect();
    Ok(Outcome::json(
        "reproduce-all",
        pass,
        json!({ "failed": failed, "results": results }),
        summary,
    ))
}

fn run(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    let tol = g.tol.unwrap_or(DEFAULT_TOLERANCE);
    let spectral_tol = g.tol.unwrap_or(unigraph::reproduce::SPECTRUM_TOLERANCE);
    let fmt = |default: Format| g.format.unwrap_or(default);
    match &cli.command {
        Command::RingInfo { ring } => ring_info(ring),
        Command::Chars { ring } => chars(ring, fmt(Format::Json)),
        Command::SumsVerify { ring, degree } => sums_verify(ring, *degree, tol),
        Command::GraphBuild(a) => graph_build(a, fmt(Format::Edges)),
        Command::GraphStats(a) => graph_stats(a),
        Command::Spectrum(a) => spectrum(a, fmt(Format::Json)),
        Command::SpectrumVerify(a) => spectrum_verify(a, fmt(Format::Json), spectral_tol),
        Command::Platonic { ring } => platonic(ring),
        Command::PlatonicProduct { ring } => platonic_product(ring),
        Command::CountingSweep { ring, n, trials, r } => {
            counting(ring, *n, *trials, *r, g.seed, fmt(Format::Json))
        }
        Command::Iso(a) => iso(a),
        Command::Ramanujan { max } => ramanujan(*max, fmt(Format::Json)),
        Command::ReproduceAll { only } => reproduce_all(only.as_deref()),
    }
}

/// Report to `out` (summary on stdout) or report on stdout (summary on stderr).
fn emit(outcome: &Outcome, out: Option<&Path>) -> io::Result<()> {
    let mut stdout = io::stdout().lock();
    match out {
        Some(path) => {
            fs::write(path, &outcome.report).map_err(|e| {
                io::Error::new(e.kind(), format!("writing {}: {e}", path.display()))
            })?;
            for line in &outcome.summary {
                writeln!(stdout, "{line}")?;
            }
        }
        None => {
            stdout.write_all(outcome.report.as_bytes())?;
            for line in &outcome.summary {
                eprintln!("{line}");
            }
        }
    }
    stdout.flush()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&outcome, cli.global.out.as_deref()) {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    if outcome.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
