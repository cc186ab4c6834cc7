use anyhow::{anyhow, Context, Result};
use qcorr::boundent::{self, BoundEntReport};
use qcorr::classify3q::{classify_decision_table, classify_general, decision_observables};
use qcorr::measures::{measure_all, MeasureRecord};
use qcorr::npa::{self, LocalityReport, Settings};
use qcorr::reproduce::{self, ReproOptions, ReproRow, TableId, TABLE_CH5};
use qcorr::states::{self, GenericParams};
use qcorr::witnesses::{self, COpt, DetectionFraction, MvPoint, ProtocolOptions, SampleRegion, WitnessOptions, WitnessReport};
use qcorr::PureState;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::fixtures::{self, Measured};
use crate::output::{self, num, opt, text, Format, Rendered, Table};
use crate::source::{self, Loaded};
use crate::*;

pub struct Outcome {
    pub breach: bool,
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    if let Cmd::Run(r) = &cli.cmd {
        let inner = RunConfig::load(&r.config)?.to_cli()?;
        return execute(&inner);
    }
    let rendered = render(cli)?;
    output::write(&rendered, cli.common.format, cli.common.out.as_deref())?;
    Ok(Outcome { breach: rendered.breach })
}

fn render(cli: &Cli) -> Result<Rendered> {
    let c = &cli.common;
    match &cli.cmd {
        Cmd::State(s) => state(&source::load(s, None, c.seed)?),
        Cmd::Measure(s) => measure(&source::load(s, None, c.seed)?),
        Cmd::Witness(w) => witness(w, c),
        Cmd::Fractions(f) => fractions(f, c),
        Cmd::Ncc(n) => ncc(n, c),
        Cmd::Classify(a) => classify(a, c),
        Cmd::Boundent(b) => bound(b),
        Cmd::Npa(n) => locality(n, c),
        Cmd::Reproduce(r) => repro(r, c),
        Cmd::Run(_) => unreachable!("dispatched in execute"),
    }
}

fn state(l: &Loaded) -> Result<Rendered> {
    let m = l.rho.matrix();
    let mut t = Table::new(&["row", "col", "re", "im"]);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let z = m.get(i, j);
            t.push(vec![i.to_string(), j.to_string(), num(z.re), num(z.im)]);
        }
    }
    Rendered::new(&l.rho, t, Format::Json)
}

#[derive(Serialize)]
struct MeasureOut<'a> {
    state: &'a str,
    #[serde(flatten)]
    record: &'a MeasureRecord,
}

fn measure(l: &Loaded) -> Result<Rendered> {
    let r = measure_all(&l.rho)?;
    let mut t = Table::new(&[
        "state",
        "dims",
        "purity",
        "negativity",
        "ppt_min_eig",
        "ccnr_sum",
        "majorization_ok",
        "discord_a",
        "discord_b",
        "three_tangle",
        "g1",
        "g2",
        "g3",
    ]);
    let g = |k: usize| opt(r.g.map(|g| g[k]));
    t.push(vec![
        l.name.clone(),
        r.dims.iter().map(usize::to_string).collect::<Vec<_>>().join("x"),
        num(r.purity),
        opt(r.negativity),
        opt(r.ppt_min_eig),
        opt(r.ccnr_sum),
        text(r.majorization_ok),
        opt(r.discord_a),
        opt(r.discord_b),
        opt(r.three_tangle),
        g(0),
        g(1),
        g(2),
    ]);
    Rendered::new(&MeasureOut { state: &l.name, record: &r }, t, Format::Json)
}

#[derive(Serialize)]
struct WitnessOut<'a> {
    state: &'a str,
    seed: u64,
    #[serde(flatten)]
    report: &'a WitnessReport,
}

fn witness(a: &WitnessArgs, c: &Common) -> Result<Rendered> {
    let l = source::load(&a.state, None, c.seed)?;
    let opts = ProtocolOptions {
        max_rounds: a.max_rounds,
        correlation_first: !a.random_only,
        witness: WitnessOptions {
            pt_side: a.pt_side,
            ..Default::default()
        },
    };
    let r = witnesses::random_measurement_protocol(&l.rho, c.seed, &opts)?;
    let mut t = Table::new(&["state", "seed", "rounds", "detected", "min_ctm", "c0", "operator", "coeff"]);
    for (op, coeff) in r.operators.iter().zip(&r.coeffs) {
        t.push(vec![
            l.name.clone(),
            c.seed.to_string(),
            r.rounds.to_string(),
            r.detected.to_string(),
            num(r.min_ctm),
            num(r.c0),
            op.clone(),
            num(*coeff),
        ]);
    }
    let out = WitnessOut {
        state: &l.name,
        seed: c.seed,
        report: &r,
    };
    Rendered::new(&out, t, Format::Json)
}

fn fractions(a: &FractionArgs, c: &Common) -> Result<Rendered> {
    let ops: Vec<usize> = match a.ops {
        Some(n) => vec![n],
        None => (1..=4).collect(),
    };
    let region = match a.region {
        Region::Rectangle => SampleRegion::PlotRectangle,
        Region::Physical => SampleRegion::PhysicalTriangle,
    };
    let samples = c.samples.unwrap_or(ReproOptions::default().samples);
    let all: Vec<DetectionFraction> = ops
        .par_iter()
        .map(|&n| witnesses::detection_fraction(n, samples, c.seed, region))
        .collect::<qcorr::Result<_>>()?;
    let mut t = Table::new(&["n_ops", "subset", "fraction", "best", "worst", "entangled_samples"]);
    for f in &all {
        for s in &f.subsets {
            t.push(vec![
                f.n_ops.to_string(),
                s.terms.join("+"),
                num(s.fraction),
                (s.fraction == f.best).to_string(),
                (s.fraction == f.worst).to_string(),
                f.entangled_samples.to_string(),
            ]);
        }
    }
    Rendered::new(&all, t, Format::Csv)
}

#[derive(Serialize)]
struct NccOut<'a> {
    state: &'a str,
    c_opt: COpt,
    sign_change: Option<f64>,
    points: Vec<MvPoint>,
}

fn ncc(a: &NccArgs, c: &Common) -> Result<Rendered> {
    let l = source::load(&a.state, Some("sigma"), c.seed)?;
    let lambdas = if !a.lambda.is_empty() {
        a.lambda.clone()
    } else {
        a.sweep
            .unwrap_or(Sweep {
                start: 0.0,
                stop: 1.0,
                step: 0.05,
            })
            .points()
    };
    let points: Vec<MvPoint> = lambdas
        .par_iter()
        .map(|&x| witnesses::mv_dynamics(&l.rho, &[x]).map(|p| p[0]))
        .collect::<qcorr::Result<_>>()?;
    let mut t = Table::new(&["lambda", "mv", "discord_b"]);
    for p in &points {
        t.push(vec![num(p.lambda), num(p.mv), num(p.discord)]);
    }
    let out = NccOut {
        state: &l.name,
        c_opt: witnesses::ncc_c_opt(),
        sign_change: witnesses::mv_sign_change(&l.rho)?,
        points,
    };
    Rendered::new(&out, t, Format::Csv)
}

#[derive(Serialize)]
struct ClassifyRow {
    index: usize,
    state: String,
    class: String,
    class_table: String,
    #[serde(rename = "O")]
    o: f64,
    #[serde(rename = "O1")]
    o1: f64,
    #[serde(rename = "O2")]
    o2: f64,
    #[serde(rename = "O3")]
    o3: f64,
    #[serde(rename = "G1")]
    g1: f64,
    #[serde(rename = "G2")]
    g2: f64,
    #[serde(rename = "G3")]
    g3: f64,
    tau: f64,
    tol: f64,
}

fn classify_one(index: usize, state: String, psi: &PureState, tol: f64) -> Result<ClassifyRow> {
    let general = classify_general(psi, tol)?;
    let table = classify_decision_table(psi, tol)?;
    let [o, o1, o2, o3] = decision_observables(psi)?;
    let ev = |k: &str| general.evidence.get(k).copied().ok_or_else(|| anyhow!("missing evidence {k}"));
    Ok(ClassifyRow {
        index,
        state,
        class: general.class.to_string(),
        class_table: table.class.to_string(),
        o,
        o1,
        o2,
        o3,
        g1: ev("G1")?,
        g2: ev("G2")?,
        g3: ev("G3")?,
        tau: ev("tau")?,
        tol,
    })
}

/// Random state `i` comes from its own ChaCha stream, so rows do not depend on scheduling.
fn random_three_qubit(seed: u64, i: usize, family: Family) -> Result<PureState> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    Ok(match family {
        Family::Generic => states::generic(&GenericParams::random(&mut rng))?,
        Family::Haar => states::haar_random_state(&[2, 2, 2], &mut rng)?,
    })
}

fn classify(a: &ClassifyArgs, c: &Common) -> Result<Rendered> {
    let tol = c.tol.unwrap_or(1e-6);
    let rows: Vec<ClassifyRow> = match a.random {
        Some(n) => (0..n)
            .into_par_iter()
            .map(|i| classify_one(i, format!("R{}", i + 1), &random_three_qubit(c.seed, i, a.family)?, tol))
            .collect::<Result<_>>()?,
        None => {
            let l = source::load(&a.state, None, c.seed)?;
            vec![classify_one(0, l.name.clone(), l.require_pure()?, tol)?]
        }
    };
    let mut t = Table::new(&[
        "index",
        "state",
        "O",
        "O1",
        "O2",
        "O3",
        "G1",
        "G2",
        "G3",
        "tau",
        "class",
        "class_table",
        "tol",
    ]);
    for r in &rows {
        t.push(vec![
            r.index.to_string(),
            r.state.clone(),
            num(r.o),
            num(r.o1),
            num(r.o2),
            num(r.o3),
            num(r.g1),
            num(r.g2),
            num(r.g3),
            num(r.tau),
            r.class.clone(),
            r.class_table.clone(),
            num(r.tol),
        ]);
    }
    Rendered::new(&rows, t, Format::Json)
}

#[derive(Serialize)]
struct BoundOut {
    threshold: Option<f64>,
    rows: Vec<BoundEntReport>,
}

fn printed_theory(b: f64) -> Option<f64> {
    TABLE_CH5.iter().find(|(x, _)| (x - b).abs() < 1e-12).map(|&(_, v)| v)
}

fn bound(a: &BoundentArgs) -> Result<Rendered> {
    let mut points: Vec<f64> = a.b.into_iter().collect();
    if let Some(s) = a.sweep {
        points.extend(s.points());
    }
    let rows: Vec<BoundEntReport> = points.par_iter().map(|&b| boundent::detect(b)).collect::<qcorr::Result<_>>()?;
    let threshold = if a.threshold { Some(boundent::detection_threshold()?) } else { None };
    let t = if rows.is_empty() {
        let mut t = Table::new(&["threshold"]);
        t.push(vec![opt(threshold)]);
        t
    } else {
        let mut t = Table::new(&[
            "b",
            "theory",
            "inequality_value",
            "violated",
            "e1",
            "e2",
            "e3",
            "ppt_min_eig",
            "negativity",
            "bound_entanglement_case",
        ]);
        for r in &rows {
            t.push(vec![
                num(r.b),
                opt(printed_theory(r.b)),
                num(r.inequality_value),
                r.violated.to_string(),
                num(r.expectations[0]),
                num(r.expectations[1]),
                num(r.expectations[2]),
                num(r.ppt_min_eig),
                num(r.negativity),
                r.bound_entanglement_case.to_string(),
            ]);
        }
        t
    };
    Rendered::new(&BoundOut { threshold, rows }, t, Format::Csv)
}

#[derive(Serialize)]
struct NpaOut<'a> {
    state: &'a str,
    settings: &'a str,
    #[serde(flatten)]
    report: &'a LocalityReport,
}

fn load_settings(spec: &str) -> Result<Vec<Settings>> {
    match spec {
        "w" | "ghz" => Ok(reproduce::npa_settings(spec)?),
        path => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading settings {path}"))?;
            serde_json::from_str(&text).with_context(|| format!("settings {path}: expected [[M0, M1], ...]"))
        }
    }
}

fn locality(a: &NpaArgs, c: &Common) -> Result<Rendered> {
    let l = source::load(&a.state, None, c.seed)?;
    let settings = load_settings(&a.settings)?;
    let moments = npa::measured_moments(&l.rho, &settings)?;
    let r = npa::test_locality(&moments, l.rho.dims().len())?;
    let verdict = serde_json::to_value(r.verdict)?.as_str().unwrap_or_default().to_string();
    let mut t = Table::new(&["state", "settings", "verdict", "t_star", "free_variables", "kind", "key", "value"]);
    let entries = r
        .known
        .iter()
        .map(|e| ("known", e))
        .chain(r.free_values.iter().map(|e| ("free", e)));
    for (kind, (key, value)) in entries {
        t.push(vec![
            l.name.clone(),
            a.settings.clone(),
            verdict.clone(),
            num(r.t_star),
            r.free_variables.to_string(),
            kind.into(),
            key.clone(),
            num(*value),
        ]);
    }
    let out = NpaOut {
        state: &l.name,
        settings: &a.settings,
        report: &r,
    };
    Rendered::new(&out, t, Format::Json)
}

#[derive(Serialize)]
struct ReproRowOut<'a> {
    #[serde(flatten)]
    row: &'a ReproRow,
    experiment: Vec<&'a Measured>,
}

#[derive(Serialize)]
struct ReproOut<'a> {
    id: TableId,
    all_pass: bool,
    rows: Vec<ReproRowOut<'a>>,
}

fn repro(a: &ReproduceArgs, c: &Common) -> Result<Rendered> {
    let ids: Vec<TableId> = if a.table.eq_ignore_ascii_case("all") {
        TableId::ALL.to_vec()
    } else {
        vec![a.table.parse()?]
    };
    let opts = ReproOptions {
        seed: c.seed,
        samples: c.samples.unwrap_or(ReproOptions::default().samples),
    };
    let tables = ids
        .par_iter()
        .map(|&id| Ok((reproduce::reproduce(id, &opts)?, fixtures::load(id)?)))
        .collect::<Result<Vec<_>>>()?;

    let mut t = Table::new(&[
        "table",
        "label",
        "quantity",
        "theory",
        "computed",
        "delta",
        "tol",
        "expected",
        "observed",
        "pass",
        "experiment",
    ]);
    let mut outs = Vec::new();
    for (table, measured) in &tables {
        let mut rows = Vec::new();
        for r in &table.rows {
            let found: Vec<&Measured> = measured
                .iter()
                .filter(|m| m.label == r.label && m.quantity == r.quantity)
                .collect();
            t.push(vec![
                table.id.to_string(),
                r.label.clone(),
                r.quantity.clone(),
                opt(r.theory),
                num(r.computed),
                opt(r.delta),
                num(r.tol),
                text(r.expected.as_ref()),
                text(r.observed.as_ref()),
                text(r.pass),
                fixtures::summary(&found),
            ]);
            rows.push(ReproRowOut { row: r, experiment: found });
        }
        outs.push(ReproOut {
            id: table.id,
            all_pass: table.all_pass(),
            rows,
        });
    }
    let breach = tables.iter().any(|(t, _)| !t.all_pass());
    let mut rendered = if outs.len() == 1 {
        Rendered::new(&outs[0], t, Format::Csv)?
    } else {
        Rendered::new(&outs, t, Format::Csv)?
    };
    rendered.breach = breach;
    Ok(rendered)
}
