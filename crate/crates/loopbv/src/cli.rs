//! Subcommands. `run` returns the rendered-ready output and whether every
//! check passed; usage problems come back as `CliError` (exit code 2).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use loopbv_core::chern::{gysin_homology, pair_top, run_pipeline, total_chern, BundleSpec, Summand};
use loopbv_core::confluence::check_local_confluence;
use loopbv_core::cpn::generator_brackets;
use loopbv_core::hochschild::decide_bv_iso;
use loopbv_core::{
    bv::bracket, BvOperator, CoeffRing, Coefficient, DegreeWindow, Element, Presentation, PresentationExt,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use std::sync::Arc;
use thiserror::Error;

use crate::audit::{run_audit, AuditError, AuditPlan};
use crate::instance::{
    adversarial_fixture, builtin_names, choose_window, cpn_instance, parse_ring, resolve, Instance, InstanceError,
    Loaded, WINDOW_ENV,
};
use crate::json::{
    element_to_json, graded_group_to_json, ActionsJson, AlgebraRef, AuditReport, BundleSpecJson, BvOperatorJson,
    ElementJson, FormatError, HochschildJson, PipelineJson, PresentationJson,
};
use crate::render::{csv_rows, text_table, Format, Output};
use crate::with_instance;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Instance(#[from] InstanceError),
    #[error("{0}")]
    Format(#[from] FormatError),
    #[error("{0}")]
    Audit(#[from] AuditError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}: {1}")]
    Io(PathBuf, std::io::Error),
}

impl CliError {
    fn usage(e: impl std::fmt::Display) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "loopbv", version, about = "BV algebra computations for the free loop homology of CP^n")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for the audits; results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Δ on every window basis monomial.
    Table(InstanceArgs),
    /// Run the audit suite; exit 1 with certificates on any failure.
    Verify(VerifyArgs),
    /// Brackets of two elements, or of all generator pairs.
    Bracket(BracketArgs),
    /// Derive Δ from the sphere-bundle data and compare with the closed form.
    Pipeline(PipelineArgs),
    /// Search for a BV isomorphism with the Hochschild cohomology.
    Hochschild(RankArgs),
    /// Chern classes, pairings and sphere-bundle homology.
    Chern(ChernArgs),
    /// Critical-pair audit of the presentations.
    Confluence(ConfluenceArgs),
}

#[derive(Debug, Args)]
pub struct InstanceArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Z, Q or Zm:<m>.
    #[arg(long, default_value = "Z")]
    pub coeff: String,
    /// cpn:<n>:<coeff>, s2, cpn-rational:<n> or hochschild:<n>.
    #[arg(long, conflicts_with = "n")]
    pub instance: Option<String>,
    /// Exponent cap for positive-degree generators.
    #[arg(long)]
    pub qmax: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    /// Δ(w) gains a spurious w term.
    DeltaW,
    /// Δ(c) := w.
    DeltaC,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Comma list of checks (default: all).
    #[arg(long)]
    pub checks: Option<String>,
    /// Restrict the triple checks, e.g. `c,w,v` or `c,w,v;w,v,v`.
    #[arg(long)]
    pub triples: Option<String>,
    #[arg(long, value_enum)]
    pub inject_fault: Option<Fault>,
    /// Audit a Δ table read from a BV operator file instead.
    #[arg(long, conflicts_with = "inject_fault")]
    pub operator: Option<PathBuf>,
    /// Certificates kept per check.
    #[arg(long, default_value_t = 20)]
    pub max_certificates: usize,
}

#[derive(Debug, Args)]
pub struct BracketArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    pub a: Option<String>,
    pub b: Option<String>,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub qmax: Option<u32>,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub qmax: Option<u32>,
}

#[derive(Debug, Args)]
pub struct ChernArgs {
    /// Include TCP^m.
    #[arg(long)]
    pub tangent: Option<usize>,
    /// Line bundles (γ*)^k, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub summands: Vec<i64>,
    /// Include the complement of the tautological line.
    #[arg(long)]
    pub complement: bool,
    /// The base CP^m (default: the tangent rank, else the pairing degree).
    #[arg(long)]
    pub base: Option<usize>,
    /// Read the bundle from a BundleSpec file.
    #[arg(long, conflicts_with_all = ["tangent", "summands", "complement", "base"])]
    pub spec: Option<PathBuf>,
    /// Print ⟨c_k, [CP^k]⟩.
    #[arg(long)]
    pub pair: Option<usize>,
    /// Print the homology of the unit sphere bundle.
    #[arg(long, conflicts_with = "pair")]
    pub gysin: bool,
}

#[derive(Debug, Args)]
pub struct ConfluenceArgs {
    #[arg(long)]
    pub instance: Option<String>,
    /// A presentation file.
    #[arg(long, conflicts_with = "instance")]
    pub file: Option<PathBuf>,
    /// Check the non-confluent fixture {xy -> x, yx -> y}.
    #[arg(long, conflicts_with_all = ["instance", "file"])]
    pub adversarial: bool,
    #[arg(long)]
    pub qmax: Option<u32>,
}

/// Result of a command: output plus whether all checks passed.
pub struct Outcome {
    pub output: Output,
    pub passed: bool,
}

fn ok(output: Output) -> Result<Outcome, CliError> {
    Ok(Outcome { output, passed: true })
}

fn window(qmax: Option<u32>) -> Result<DegreeWindow, CliError> {
    let env = std::env::var(WINDOW_ENV).ok();
    Ok(choose_window(qmax, env.as_deref())?)
}

fn load(args: &InstanceArgs, w: &DegreeWindow) -> Result<Instance, CliError> {
    match (&args.instance, args.n) {
        (Some(name), _) => Ok(resolve(name, w)?),
        (None, Some(n)) if n >= 1 => Ok(cpn_instance(n, parse_ring(&args.coeff)?)?),
        (None, Some(_)) => Err(CliError::usage("--n must be at least 1")),
        (None, None) => Err(CliError::usage("one of --n or --instance is required")),
    }
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.clone(), e))
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Table(a) => cmd_table(a),
        Command::Verify(a) => cmd_verify(a, cli.jobs),
        Command::Bracket(a) => cmd_bracket(a),
        Command::Pipeline(a) => cmd_pipeline(a),
        Command::Hochschild(a) => cmd_hochschild(a),
        Command::Chern(a) => cmd_chern(a),
        Command::Confluence(a) => cmd_confluence(a),
    }
}

#[derive(Serialize)]
struct TableRowOut {
    monomial: String,
    degree: i64,
    delta: String,
    annihilator: u64,
}

#[derive(Serialize)]
struct TableOut {
    instance: String,
    ring: String,
    window: String,
    rows: Vec<TableRowOut>,
    operator: BvOperatorJson,
}

fn table_rows<C: Coefficient>(b: &Loaded<C>, w: &DegreeWindow) -> Result<Vec<TableRowOut>, CliError> {
    let p = &b.presentation;
    let mut basis = p.window_basis(w).map_err(CliError::usage)?;
    basis.sort_by(|x, y| (p.degree_of(&x.monomial), &x.monomial).cmp(&(p.degree_of(&y.monomial), &y.monomial)));
    basis
        .into_iter()
        .map(|e| {
            let d = b.delta.delta_monomial(&e.monomial).map_err(CliError::usage)?;
            Ok(TableRowOut {
                monomial: p.format_monomial(&e.monomial),
                degree: p.degree_of(&e.monomial),
                delta: d.to_string(),
                annihilator: e.annihilator,
            })
        })
        .collect()
}

fn operator_json<C: Coefficient>(b: &Loaded<C>, w: &DegreeWindow) -> Result<BvOperatorJson, CliError> {
    let mut j = BvOperatorJson::from_operator(AlgebraRef::Named(b.name.clone()), &b.delta, w).map_err(CliError::usage)?;
    if let Some(inst) = &b.cpn {
        j.actions = Some(ActionsJson::from_tables(&inst.actions, &inst.loops));
    }
    Ok(j)
}

fn cmd_table(a: &InstanceArgs) -> Result<Outcome, CliError> {
    let w = window(a.qmax)?;
    let inst = load(a, &w)?;
    let (rows, operator) = with_instance!(&inst, b => (table_rows(b, &w)?, operator_json(b, &w)?));
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![r.monomial.clone(), r.degree.to_string(), r.delta.clone(), r.annihilator.to_string()])
        .collect();
    let header = ["monomial", "degree", "delta", "annihilator"];
    let text = format!(
        "# {} over {}, window {}\n{}",
        inst.name(),
        inst.ring().label(),
        w.describe(),
        text_table(&header, &cells)
    );
    let out = TableOut {
        instance: inst.name().to_string(),
        ring: inst.ring().label(),
        window: w.describe(),
        rows,
        operator,
    };
    ok(Output::new(text, &out, csv_rows(&header, cells)))
}

/// The generator a fault targets: `w`/`c` when present, otherwise the first
/// odd generator / the first even generator of negative degree.
fn fault_target<C: Coefficient>(p: &Presentation<C>, fault: Fault) -> Option<usize> {
    let (name, odd) = match fault {
        Fault::DeltaW => ("w", true),
        Fault::DeltaC => ("c", false),
    };
    p.generator_index(name).or_else(|| {
        p.generators().iter().position(|g| if odd { g.is_odd() } else { !g.is_odd() && g.degree < 0 })
    })
}

pub fn inject_fault<C: Coefficient>(op: &BvOperator<C>, fault: Fault) -> Result<BvOperator<C>, CliError> {
    let p = op.algebra();
    let g = fault_target(p, fault).ok_or_else(|| CliError::usage("no generator for this fault"))?;
    let m = loopbv_core::Monomial::generator(p.rank(), g);
    let value = match fault {
        Fault::DeltaW => op.delta_monomial(&m).map_err(CliError::usage)? + p.monomial(&m),
        Fault::DeltaC => {
            let odd = p.generators().iter().position(|g| g.is_odd()).ok_or_else(|| CliError::usage("no odd generator"))?;
            p.monomial(&loopbv_core::Monomial::generator(p.rank(), odd))
        }
    };
    Ok(op.clone().with_override(m, value))
}

fn load_operator(path: &PathBuf, w: &DegreeWindow) -> Result<Instance, CliError> {
    let j: BvOperatorJson = serde_json::from_str(&read(path)?).map_err(FormatError::from)?;
    fn with_table<C: Coefficient>(mut b: Loaded<C>, j: &BvOperatorJson) -> Result<Loaded<C>, CliError> {
        b.delta = j.to_operator(&b.presentation)?;
        b.name = format!("{} (table)", b.name);
        Ok(b)
    }
    fn inline<C: Coefficient>(p: &PresentationJson, j: &BvOperatorJson) -> Result<Loaded<C>, CliError> {
        let pres = p.build::<C>()?;
        let delta = j.to_operator(&pres)?;
        Ok(Loaded { name: "inline".into(), presentation: pres, delta, cpn: None })
    }
    match &j.algebra {
        AlgebraRef::Named(name) => match resolve(name, w)? {
            Instance::Integral(b) => Ok(Instance::Integral(with_table(b, &j)?)),
            Instance::Rational(b) => Ok(Instance::Rational(with_table(b, &j)?)),
        },
        AlgebraRef::Inline(p) => match p.ring()? {
            CoeffRing::Rationals => Ok(Instance::Rational(inline(p, &j)?)),
            _ => Ok(Instance::Integral(inline(p, &j)?)),
        },
    }
}

fn audit_text(r: &AuditReport) -> String {
    let mut s = format!("# verify {} window {}\n", r.instance, r.window);
    for rep in &r.reports {
        let status = if rep.passed() { "ok" } else { "FAIL" };
        s.push_str(&format!("{status:<4}  {:<28} checked {:>7}  failed {}\n", rep.check, rep.checked, rep.failed));
        if let Some(e) = &rep.error {
            s.push_str(&format!("      not evaluated: {e}\n"));
        }
    }
    for c in r.certificates() {
        s.push_str(&format!("certificate {} [{}]: {}\n", c.check, c.inputs.join(", "), element_text(&c.residual)));
    }
    s.push_str(&format!("{} passed, {} failed\n", r.passed, r.failed));
    s
}

/// `{"c·v": "2", "1": "-1"}` as `-1 + 2·c·v`, in the JSON key order.
fn element_text(e: &ElementJson) -> String {
    let mut out = String::new();
    for (m, c) in e {
        let term = match (m.as_str(), c.as_str()) {
            ("1", _) => c.clone(),
            (_, "1") => m.clone(),
            (_, "-1") => format!("-{m}"),
            _ => format!("{c}·{m}"),
        };
        match term.strip_prefix('-') {
            Some(rest) if !out.is_empty() => out.push_str(&format!(" - {rest}")),
            _ if !out.is_empty() => out.push_str(&format!(" + {term}")),
            _ => out.push_str(&term),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn audit_csv(r: &AuditReport) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for rep in &r.reports {
        rows.push(vec![
            rep.check.clone(),
            rep.window.clone(),
            rep.checked.to_string(),
            rep.failed.to_string(),
            String::new(),
            String::new(),
        ]);
        for c in &rep.failures {
            rows.push(vec![
                c.check.clone(),
                rep.window.clone(),
                String::new(),
                String::new(),
                c.inputs.join(";"),
                element_text(&c.residual),
            ]);
        }
    }
    csv_rows(&["check", "window", "checked", "failed", "inputs", "residual"], rows)
}

fn cmd_verify(a: &VerifyArgs, jobs: usize) -> Result<Outcome, CliError> {
    let w = window(a.instance.qmax)?;
    let inst = match &a.operator {
        Some(path) => load_operator(path, &w)?,
        None => load(&a.instance, &w)?,
    };
    let mut plan = AuditPlan::new(w);
    plan.jobs = jobs;
    plan.max_certificates = a.max_certificates;
    if let Some(c) = &a.checks {
        plan = plan.with_checks(c)?;
    }
    if let Some(t) = &a.triples {
        plan = plan.with_triples(t)?;
    }
    let report = with_instance!(&inst, b => {
        let op = match a.inject_fault {
            Some(f) => inject_fault(&b.delta, f)?,
            None => b.delta.clone(),
        };
        run_audit(b, &op, &plan)?
    });
    let passed = report.all_passed();
    Ok(Outcome { output: Output::new(audit_text(&report), &report, audit_csv(&report)), passed })
}

#[derive(Serialize)]
struct BracketOut {
    a: String,
    b: String,
    bracket: ElementJson,
    text: String,
}

fn brackets<C: Coefficient>(b: &Loaded<C>, x: Option<&str>, y: Option<&str>) -> Result<Vec<BracketOut>, CliError> {
    let p = &b.presentation;
    let out = |a: String, bb: String, v: Element<C>| BracketOut { a, b: bb, bracket: element_to_json(&v), text: v.to_string() };
    match (x, y) {
        (Some(x), Some(y)) => {
            let ex = p.parse_element(x).map_err(CliError::usage)?;
            let ey = p.parse_element(y).map_err(CliError::usage)?;
            let v = bracket(&b.delta, &ex, &ey).map_err(CliError::usage)?;
            Ok(vec![out(ex.to_string(), ey.to_string(), v)])
        }
        (None, None) => match &b.cpn {
            Some(inst) => Ok(generator_brackets(inst)
                .map_err(CliError::usage)?
                .into_iter()
                .map(|(a, bb, v)| out(a, bb, v))
                .collect()),
            None => {
                let mut v = Vec::new();
                for g in p.generators() {
                    for h in p.generators() {
                        let r = bracket(&b.delta, &p.gen(&g.name), &p.gen(&h.name)).map_err(CliError::usage)?;
                        v.push(out(g.name.clone(), h.name.clone(), r));
                    }
                }
                Ok(v)
            }
        },
        _ => Err(CliError::usage("give two elements or none")),
    }
}

fn cmd_bracket(a: &BracketArgs) -> Result<Outcome, CliError> {
    let w = window(a.instance.qmax)?;
    let inst = load(&a.instance, &w)?;
    let rows = with_instance!(&inst, b => brackets(b, a.a.as_deref(), a.b.as_deref())?);
    let cells: Vec<Vec<String>> = rows.iter().map(|r| vec![r.a.clone(), r.b.clone(), r.text.clone()]).collect();
    let header = ["a", "b", "bracket"];
    let text = format!("# {}\n{}", inst.name(), text_table(&header, &cells));
    ok(Output::new(text, &rows, csv_rows(&header, cells)))
}

fn tuple(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("({})", parts.join(", "))
}

fn cmd_pipeline(a: &PipelineArgs) -> Result<Outcome, CliError> {
    if a.n < 1 {
        return Err(CliError::usage("--n must be at least 1"));
    }
    let w = window(a.qmax)?;
    let p = run_pipeline(a.n, &w).map_err(CliError::usage)?;
    let j = PipelineJson::from(&p);
    let cmp = &j.comparison;
    let mut text = format!(
        "n = {}\nmu = {}\nlambda = {}\nlambda_0 = {}\nconstants = ({}, {})\naction tables from the sphere bundle: {}\n\
         derived vs closed form on {}: {} checked, {} failed\n",
        p.n,
        tuple(&p.mu),
        tuple(&p.lambda),
        p.lambda_zero,
        p.constants.0,
        p.constants.1,
        if p.b_matches_reference { "match" } else { "MISMATCH" },
        cmp.window,
        cmp.checked,
        cmp.failed
    );
    for c in &cmp.failures {
        text.push_str(&format!("certificate {} [{}]: {}\n", c.check, c.inputs.join(", "), element_text(&c.residual)));
    }
    text.push_str(if j.passed() { "pipeline: pass\n" } else { "pipeline: FAIL\n" });
    let csv = csv_rows(
        &["key", "value"],
        vec![
            vec!["n".into(), p.n.to_string()],
            vec!["mu".into(), tuple(&p.mu)],
            vec!["lambda".into(), tuple(&p.lambda)],
            vec!["lambda_0".into(), p.lambda_zero.to_string()],
            vec!["constants".into(), tuple(&[p.constants.0, p.constants.1])],
            vec!["b_matches_reference".into(), p.b_matches_reference.to_string()],
            vec!["checked".into(), cmp.checked.to_string()],
            vec!["failed".into(), cmp.failed.to_string()],
        ],
    );
    Ok(Outcome { passed: j.passed(), output: Output::new(text, &j, csv) })
}

fn cmd_hochschild(a: &RankArgs) -> Result<Outcome, CliError> {
    if a.n < 1 {
        return Err(CliError::usage("--n must be at least 1"));
    }
    let w = match a.qmax {
        Some(q) => DegreeWindow::new(q),
        None => DegreeWindow::new(3),
    };
    let d = decide_bv_iso(a.n, &w).map_err(CliError::usage)?;
    let j = HochschildJson::from(&d);
    let mut text = format!("n = {}, {} candidates checked on window {}\n", d.n, d.candidates_checked, w.describe());
    match (&j.iso, &j.obstruction) {
        (Some(c), _) => text.push_str(&format!("isomorphism: {}\n", c.map)),
        (None, Some(o)) => text.push_str(&format!(
            "no isomorphism; least defect at {}: {}\n",
            j.obstruction_input.as_deref().unwrap_or("?"),
            o
        )),
        (None, None) => text.push_str("no isomorphism\n"),
    }
    let csv = csv_rows(
        &["n", "iso", "obstruction"],
        vec![vec![
            d.n.to_string(),
            j.iso.as_ref().map(|c| c.map.clone()).unwrap_or_default(),
            j.obstruction.clone().unwrap_or_default(),
        ]],
    );
    ok(Output::new(text, &j, csv))
}

fn bundle(a: &ChernArgs) -> Result<BundleSpec, CliError> {
    if let Some(path) = &a.spec {
        let j: BundleSpecJson = serde_json::from_str(&read(path)?).map_err(FormatError::from)?;
        return Ok(j.to_spec()?);
    }
    if a.tangent.is_none() && a.summands.is_empty() && !a.complement {
        return Err(CliError::usage("give --tangent, --summands, --complement or --spec"));
    }
    let base = a.base.or(a.tangent).or(a.pair).unwrap_or(0);
    let mut s: Vec<Summand> = a.summands.iter().map(|&k| Summand::Line(k)).collect();
    if let Some(m) = a.tangent {
        s.push(Summand::Tangent(m));
    }
    if a.complement {
        s.push(Summand::Complement);
    }
    Ok(BundleSpec::new(base, s))
}

#[derive(Serialize)]
struct ChernOut {
    bundle: BundleSpecJson,
    rank: usize,
    total: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pairing: Option<(usize, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gysin: Option<crate::json::GradedGroupJson>,
}

fn cmd_chern(a: &ChernArgs) -> Result<Outcome, CliError> {
    let b = bundle(a)?;
    let c = total_chern(&b);
    let mut out = ChernOut {
        bundle: BundleSpecJson::from_spec(&b),
        rank: b.rank(),
        total: c.coeffs().iter().map(BigInt::to_string).collect(),
        pairing: None,
        gysin: None,
    };
    let (text, csv) = if let Some(k) = a.pair {
        let v = pair_top(&c, k).map_err(CliError::usage)?;
        out.pairing = Some((k, v.to_string()));
        (v.to_string(), csv_rows(&["k", "pairing"], vec![vec![k.to_string(), v.to_string()]]))
    } else if a.gysin {
        let h = gysin_homology(&b).map_err(CliError::usage)?;
        let groups = h.groups();
        let mut text = format!("# sphere bundle of rank {} over CP^{}, Euler number {}\n", h.rank, h.base, h.euler);
        let mut rows = Vec::new();
        for (d, piece) in &groups {
            let mut parts: Vec<String> = std::iter::repeat_n("Z".to_string(), piece.free).collect();
            parts.extend(piece.torsion.iter().map(|t| format!("Z/{t}")));
            text.push_str(&format!("H_{d} = {}\n", parts.join(" + ")));
            let tors: Vec<String> = piece.torsion.iter().map(u64::to_string).collect();
            rows.push(vec![d.to_string(), piece.free.to_string(), tors.join(";")]);
        }
        out.gysin = Some(graded_group_to_json(&groups));
        (text, csv_rows(&["degree", "free", "torsion"], rows))
    } else {
        let rows: Vec<Vec<String>> =
            out.total.iter().enumerate().map(|(k, v)| vec![k.to_string(), v.clone()]).collect();
        (format!("c = {c}"), csv_rows(&["k", "coefficient"], rows))
    };
    ok(Output::new(text, &out, csv))
}

#[derive(Serialize)]
struct ConfluenceRow {
    presentation: String,
    pairs_checked: usize,
    passed: bool,
    failures: Vec<ConfluenceFailure>,
}

#[derive(Serialize)]
struct ConfluenceFailure {
    overlap: String,
    first: String,
    second: String,
    left: String,
    right: String,
}

fn confluence_row<C: Coefficient>(name: &str, p: &Arc<Presentation<C>>, w: &DegreeWindow) -> ConfluenceRow {
    let r = check_local_confluence(p, w);
    ConfluenceRow {
        presentation: name.to_string(),
        pairs_checked: r.pairs_checked,
        passed: r.passed(),
        failures: r
            .failures
            .iter()
            .map(|f| ConfluenceFailure {
                overlap: p.format_monomial(&f.overlap),
                first: f.first.clone(),
                second: f.second.clone(),
                left: f.left.to_string(),
                right: f.right.to_string(),
            })
            .collect(),
    }
}

fn cmd_confluence(a: &ConfluenceArgs) -> Result<Outcome, CliError> {
    let w = window(a.qmax)?;
    let mut rows = Vec::new();
    if a.adversarial {
        let p = adversarial_fixture().map_err(CliError::usage)?;
        rows.push(confluence_row("adversarial", &p, &w));
    } else if let Some(path) = &a.file {
        let j: PresentationJson = serde_json::from_str(&read(path)?).map_err(FormatError::from)?;
        let name = path.display().to_string();
        match j.ring()? {
            CoeffRing::Rationals => rows.push(confluence_row(&name, &j.build::<BigRational>()?, &w)),
            _ => rows.push(confluence_row(&name, &j.build::<BigInt>()?, &w)),
        }
    } else {
        let names = match &a.instance {
            Some(n) => vec![n.clone()],
            None => builtin_names(),
        };
        for name in names {
            let inst = resolve(&name, &w)?;
            rows.push(with_instance!(&inst, b => confluence_row(&name, &b.presentation, &w)));
        }
    }
    let passed = rows.iter().all(|r| r.passed);
    let mut cells = Vec::new();
    let mut text = String::new();
    for r in &rows {
        cells.push(vec![
            r.presentation.clone(),
            r.pairs_checked.to_string(),
            if r.passed { "ok".into() } else { "FAIL".into() },
        ]);
    }
    let header = ["presentation", "pairs", "status"];
    text.push_str(&text_table(&header, &cells));
    for r in &rows {
        for f in &r.failures {
            text.push_str(&format!(
                "{}: {} reduces to {} by {} but to {} by {}\n",
                r.presentation, f.overlap, f.left, f.first, f.right, f.second
            ));
        }
    }
    Ok(Outcome { passed, output: Output::new(text, &rows, csv_rows(&header, cells)) })
}
