//! The verify suite: each check runs over the window, split into chunks on
//! a rayon pool. Chunks are merged in input order, so reports do not depend
//! on the job count.

use loopbv_core::bv::{
    audit_antisymmetry, audit_bv_identity, audit_delta_squared, audit_jacobi, audit_leibniz, basis_pairs,
    basis_triples, Triple,
};
use loopbv_core::chern::{run_pipeline, ChernError};
use loopbv_core::hopf::{check_action_laws, ActionAudit};
use loopbv_core::{BvError, BvOperator, CoeffRing, Coefficient, DegreeWindow, Monomial, Report};
use rayon::prelude::*;
use thiserror::Error;

use crate::instance::Loaded;
use crate::json::{AuditReport, ReportJson};

pub const CHECKS: &[&str] = &[
    "delta-well-defined",
    "delta-squared",
    "bv-identity",
    "bracket-antisymmetry",
    "bracket-leibniz",
    "bracket-jacobi",
    "action-laws",
    "hopf-tables",
    "pipeline",
];

/// Action laws iterate over products in the Hopf algebras, so they run on
/// a smaller window than the BV checks.
pub const ACTION_CAP: u32 = 2;

#[derive(Debug, Error)]
pub enum AuditError {
    #[error("{0}")]
    Bv(#[from] BvError),
    #[error("{0}")]
    Pipeline(#[from] ChernError),
    #[error("{0}")]
    Map(String),
    #[error("unknown check {0:?}")]
    UnknownCheck(String),
    #[error("bad triple {0:?}")]
    BadTriple(String),
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Clone, Debug)]
pub struct AuditPlan {
    pub checks: Vec<String>,
    pub window: DegreeWindow,
    pub jobs: usize,
    /// Restricts the triple checks to these inputs.
    pub triples: Option<Vec<[String; 3]>>,
    pub max_certificates: usize,
}

impl AuditPlan {
    pub fn new(window: DegreeWindow) -> Self {
        AuditPlan {
            checks: CHECKS.iter().map(|s| s.to_string()).collect(),
            window,
            jobs: 1,
            triples: None,
            max_certificates: 20,
        }
    }

    /// Parses a comma list; unknown names are rejected.
    pub fn with_checks(mut self, list: &str) -> Result<Self, AuditError> {
        let mut v = Vec::new();
        for c in list.split(',').map(str::trim).filter(|c| !c.is_empty()) {
            if !CHECKS.contains(&c) {
                return Err(AuditError::UnknownCheck(c.to_string()));
            }
            v.push(c.to_string());
        }
        self.checks = v;
        Ok(self)
    }

    /// `a,b,c` or several triples separated by `;`.
    pub fn with_triples(mut self, spec: &str) -> Result<Self, AuditError> {
        let mut v = Vec::new();
        for t in spec.split(';').map(str::trim).filter(|t| !t.is_empty()) {
            let parts: Vec<String> = t.split(',').map(|s| s.trim().to_string()).collect();
            let arr: [String; 3] = parts.try_into().map_err(|_| AuditError::BadTriple(t.to_string()))?;
            v.push(arr);
        }
        self.triples = Some(v);
        Ok(self)
    }

    fn wants(&self, c: &str) -> bool {
        self.checks.iter().any(|x| x == c)
    }
}

/// Splits `items` into ordered chunks, audits each with its own cache and
/// merges the results.
fn chunked<T, C, F>(items: &[T], check: &str, window: &str, jobs: usize, f: F) -> Result<Report<C>, AuditError>
where
    T: Sync,
    C: Coefficient,
    F: Fn(&[T]) -> Result<Report<C>, BvError> + Sync,
{
    let mut out = Report::new(check, window.to_string());
    if items.is_empty() {
        return Ok(out);
    }
    let size = items.len().div_ceil(4 * jobs.max(1)).max(1);
    let parts: Vec<Result<Report<C>, BvError>> = items.par_chunks(size).map(&f).collect();
    for p in parts {
        out.merge(p?);
    }
    Ok(out)
}

fn parse_triples<C: Coefficient>(b: &Loaded<C>, ts: &[[String; 3]]) -> Result<Vec<Triple>, AuditError> {
    let p = &b.presentation;
    let mono = |s: &str| p.parse_monomial(s).map_err(|_| AuditError::BadTriple(s.to_string()));
    ts.iter().map(|[x, y, z]| Ok((mono(x)?, mono(y)?, mono(z)?))).collect()
}

/// Runs the planned checks with `op` on the instance's algebra.
pub fn run_audit<C: Coefficient>(
    b: &Loaded<C>,
    op: &BvOperator<C>,
    plan: &AuditPlan,
) -> Result<AuditReport, AuditError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.jobs.max(1))
        .build()
        .map_err(|e| AuditError::Pool(e.to_string()))?;
    pool.install(|| run_inner(b, op, plan))
}

fn run_inner<C: Coefficient>(b: &Loaded<C>, op: &BvOperator<C>, plan: &AuditPlan) -> Result<AuditReport, AuditError> {
    let w = &plan.window;
    let label = w.describe();
    let jobs = plan.jobs.max(1);
    let p = op.algebra();
    let basis: Vec<Monomial> = p.window_basis(w).map_err(BvError::from)?.into_iter().map(|e| e.monomial).collect();
    let triples = match &plan.triples {
        Some(ts) => parse_triples(b, ts)?,
        None => {
            let needs = ["bv-identity", "bracket-leibniz", "bracket-jacobi"].iter().any(|c| plan.wants(c));
            if needs {
                basis_triples(&basis)
            } else {
                Vec::new()
            }
        }
    };
    let restricted = plan.triples.is_some();
    let limit = plan.max_certificates;
    let mut json: Vec<ReportJson> = Vec::new();
    // a check that cannot be evaluated becomes an aborted report
    let mut push = |check: &str, r: Result<Report<C>, AuditError>| {
        json.push(match r {
            Ok(mut r) => {
                r.check = check.to_string();
                ReportJson::truncated(&r, limit)
            }
            Err(e) => ReportJson::aborted(check, &label, e.to_string()),
        })
    };

    if plan.wants("delta-well-defined") && !restricted {
        push("delta-well-defined", op.validate(w).map_err(AuditError::from));
    }
    if plan.wants("delta-squared") && !restricted {
        push("delta-squared", chunked(&basis, "delta-squared", &label, jobs, |c| audit_delta_squared(op, c, &label)));
    }
    if plan.wants("bv-identity") {
        push("bv-identity", chunked(&triples, "bv-identity", &label, jobs, |c| audit_bv_identity(op, c, &label)));
    }
    if plan.wants("bracket-antisymmetry") && !restricted {
        let pairs = basis_pairs(&basis);
        let r = chunked(&pairs, "bracket-antisymmetry", &label, jobs, |c| audit_antisymmetry(op, c, &label));
        push("bracket-antisymmetry", r);
    }
    if plan.wants("bracket-leibniz") {
        push("bracket-leibniz", chunked(&triples, "bracket-leibniz", &label, jobs, |c| audit_leibniz(op, c, &label)));
    }
    if plan.wants("bracket-jacobi") {
        push("bracket-jacobi", chunked(&triples, "bracket-jacobi", &label, jobs, |c| audit_jacobi(op, c, &label)));
    }

    if let Some(inst) = b.cpn.as_ref().filter(|_| !restricted) {
        let small = DegreeWindow::new(w.default_cap.min(ACTION_CAP));
        // Hopf monomials up to the degree of the top generator E_{2n}
        let lw = DegreeWindow::new(ACTION_CAP).with_max_abs_degree(2 * inst.n as i64);
        if plan.wants("action-laws") {
            let audit = ActionAudit {
                op,
                table: &inst.actions,
                loops: &inst.loops,
                group: &inst.group,
                window: &small,
                loops_window: &lw,
            };
            match check_action_laws(&audit) {
                Ok(rs) => {
                    for r in rs {
                        let name = r.check.clone();
                        push(&name, Ok(r));
                    }
                }
                Err(e) => push("action-laws", Err(e.into())),
            }
        }
        if plan.wants("hopf-tables") {
            let err = |e: loopbv_core::hom::MapError<C>| AuditError::Map(e.to_string());
            push("hopf-tables-loops", inst.loops.check_hopf_tables(&lw).map_err(err));
            push("hopf-tables-group", inst.group.check_hopf_tables(&lw).map_err(err));
        }
        if plan.wants("pipeline") && p.ring() == CoeffRing::Integers {
            match run_pipeline(inst.n, w) {
                Ok(pipe) => {
                    let mut r = ReportJson::truncated(&pipe.derivation.comparison, limit);
                    r.check = "pipeline".into();
                    if !pipe.b_matches_reference {
                        r.failed += 1;
                        r.failures.push(crate::json::CertificateJson {
                            check: "pipeline".into(),
                            inputs: vec!["derived action tables differ from the reference tables".into()],
                            residual: Default::default(),
                        });
                    }
                    json.push(r);
                }
                Err(e) => json.push(ReportJson::aborted("pipeline", &label, e.to_string())),
            }
        }
    }
    Ok(AuditReport::new(&b.name, &label, json))
}
