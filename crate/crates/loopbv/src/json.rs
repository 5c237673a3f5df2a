//! JSON file formats. Exact integers and rationals travel as decimal strings.

use std::collections::BTreeMap;
use std::sync::Arc;

use loopbv_core::bv::DeltaRule;
use loopbv_core::chern::{BundleSpec, GradedGroup, GroupPiece, Summand};
use loopbv_core::hochschild::{IsoCandidate, IsoDecision};
use loopbv_core::hopf::{ActionTable, HopfAlgebra};
use loopbv_core::{
    BvOperator, CoeffRing, Coefficient, DegreeWindow, Element, Monomial, Presentation, PresentationExt, Report,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad coefficient {0:?}")]
    Coefficient(String),
    #[error("unknown coefficient ring {0:?}")]
    Ring(String),
    #[error("bad base {0:?}, expected CP^m")]
    Base(String),
    #[error("bad degree key {0:?}")]
    Degree(String),
    #[error(transparent)]
    Algebra(#[from] loopbv_core::AlgebraError),
}

/// `{"monomial": "coefficient"}`; the zero element is `{}`.
pub type ElementJson = BTreeMap<String, String>;

pub fn element_to_json<C: Coefficient>(x: &Element<C>) -> ElementJson {
    let p = x.algebra();
    x.terms().iter().map(|(m, c)| (p.format_monomial(m), c.to_string())).collect()
}

pub fn element_from_json<C: Coefficient>(
    p: &Arc<Presentation<C>>,
    j: &ElementJson,
) -> Result<Element<C>, FormatError> {
    let mut terms = Vec::with_capacity(j.len());
    for (m, c) in j {
        let c = C::parse_str(c).ok_or_else(|| FormatError::Coefficient(c.clone()))?;
        terms.push((p.parse_monomial(m)?, c));
    }
    Ok(p.element(terms))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub name: String,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteJson {
    pub lhs: String,
    pub rhs: ElementJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionJson {
    pub modulus: u64,
    pub monomial: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    #[serde(default = "default_ring")]
    pub ring: String,
    pub generators: Vec<GeneratorJson>,
    #[serde(default)]
    pub rewrites: Vec<RewriteJson>,
    #[serde(default)]
    pub torsion: Vec<TorsionJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<String>>,
}

fn default_ring() -> String {
    "Z".into()
}

impl PresentationJson {
    pub fn from_presentation<C: Coefficient>(p: &Presentation<C>) -> Self {
        let rewrites = p
            .rewrites()
            .iter()
            .map(|r| RewriteJson {
                lhs: p.format_monomial(&r.lhs),
                rhs: r.rhs.iter().map(|(m, c)| (p.format_monomial(m), c.to_string())).collect(),
            })
            .collect();
        PresentationJson {
            ring: p.ring().label(),
            generators: p.generators().iter().map(|g| GeneratorJson { name: g.name.clone(), degree: g.degree }).collect(),
            rewrites,
            torsion: p
                .torsion_rules()
                .iter()
                .map(|t| TorsionJson { modulus: t.modulus, monomial: p.format_monomial(&t.monomial) })
                .collect(),
            order: Some(p.generators().iter().map(|g| g.name.clone()).collect()),
        }
    }

    pub fn ring(&self) -> Result<CoeffRing, FormatError> {
        CoeffRing::parse(&self.ring).ok_or_else(|| FormatError::Ring(self.ring.clone()))
    }

    pub fn build<C: Coefficient>(&self) -> Result<Arc<Presentation<C>>, FormatError> {
        let mut b = Presentation::<C>::builder(self.ring()?);
        for g in &self.generators {
            b = b.generator(&g.name, g.degree);
        }
        if let Some(order) = &self.order {
            b = b.order_owned(order.clone());
        }
        for r in &self.rewrites {
            let mut rhs = Vec::with_capacity(r.rhs.len());
            for (m, c) in &r.rhs {
                rhs.push((m.clone(), C::parse_str(c).ok_or_else(|| FormatError::Coefficient(c.clone()))?));
            }
            b = b.rewrite(&r.lhs, rhs);
        }
        for t in &self.torsion {
            b = b.torsion(t.modulus, &t.monomial);
        }
        Ok(b.build()?)
    }
}

/// A built-in instance name or an inline presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Named(String),
    Inline(PresentationJson),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub monomial: String,
    pub value: ElementJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaRow {
    pub generator: String,
    pub value: ElementJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRow {
    pub generator: String,
    pub on: String,
    pub value: ElementJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoproductRow {
    pub generator: String,
    /// (left, right, coefficient)
    pub value: Vec<(String, String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuspensionRow {
    pub generator: String,
    /// Coefficients on e_1, e_3, …
    pub value: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionsJson {
    pub omega: Vec<OmegaRow>,
    pub g: Vec<GroupRow>,
    pub coproduct: Vec<CoproductRow>,
    pub suspension: Vec<SuspensionRow>,
}

impl ActionsJson {
    pub fn from_tables<C: Coefficient>(table: &ActionTable<C>, loops: &HopfAlgebra<C>) -> Self {
        let omega_names = table.omega_names();
        let omega = omega_names
            .iter()
            .zip(&table.omega_values)
            .map(|(g, v)| OmegaRow { generator: g.clone(), value: element_to_json(v) })
            .collect();
        let module_names = table.module_generator_names();
        let mut g = Vec::new();
        for (name, row) in table.group_names().iter().zip(&table.g_values) {
            for (on, v) in module_names.iter().zip(row) {
                g.push(GroupRow { generator: name.clone(), on: on.clone(), value: element_to_json(v) });
            }
        }
        let lp = loops.algebra();
        let mut coproduct = Vec::new();
        let mut suspension = Vec::new();
        for (i, name) in omega_names.iter().enumerate() {
            let x = loops.generator(i);
            let value = loops
                .coproduct_terms(&x)
                .into_iter()
                .map(|(l, r, c)| (lp.format_monomial(&l), lp.format_monomial(&r), c.to_string()))
                .collect();
            coproduct.push(CoproductRow { generator: name.clone(), value });
            let s = loops.suspension(&x).iter().map(|c| c.to_string()).collect();
            suspension.push(SuspensionRow { generator: name.clone(), value: s });
        }
        ActionsJson { omega, g, coproduct, suspension }
    }
}

/// Δ as a finite table, optionally naming the closed form it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BvOperatorJson {
    pub algebra: AlgebraRef,
    pub table: Vec<TableRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actions: Option<ActionsJson>,
}

impl BvOperatorJson {
    /// Tabulates `op` over the window basis.
    pub fn from_operator<C: Coefficient>(
        algebra: AlgebraRef,
        op: &BvOperator<C>,
        window: &DegreeWindow,
    ) -> Result<Self, loopbv_core::BvError> {
        let p = op.algebra();
        let mut table = Vec::new();
        for e in p.window_basis(window)? {
            let v = op.delta_monomial(&e.monomial)?;
            table.push(TableRow { monomial: p.format_monomial(&e.monomial), value: element_to_json(&v) });
        }
        let closed_form = match op.rule() {
            DeltaRule::Closed { .. } => op.closed_form_name().map(str::to_string),
            _ => None,
        };
        Ok(BvOperatorJson { algebra, table, closed_form, actions: None })
    }

    /// A table operator on `p`; the closed-form name is informational.
    pub fn to_operator<C: Coefficient>(&self, p: &Arc<Presentation<C>>) -> Result<BvOperator<C>, FormatError> {
        let mut values: BTreeMap<Monomial, Element<C>> = BTreeMap::new();
        for row in &self.table {
            values.insert(p.parse_monomial(&row.monomial)?, element_from_json(p, &row.value)?);
        }
        Ok(BvOperator::table(p, values))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub check: String,
    pub inputs: Vec<String>,
    pub residual: ElementJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub check: String,
    pub window: String,
    pub checked: usize,
    /// Number of failed items; `failures` may list only the first few.
    pub failed: usize,
    pub failures: Vec<CertificateJson>,
    /// Set when the check could not be evaluated, e.g. because Δ left the
    /// homogeneous elements.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ReportJson {
    pub fn from_report<C: Coefficient>(r: &Report<C>) -> Self {
        Self::truncated(r, usize::MAX)
    }

    /// Keeps at most `limit` certificates.
    pub fn truncated<C: Coefficient>(r: &Report<C>, limit: usize) -> Self {
        ReportJson {
            check: r.check.clone(),
            window: r.window.clone(),
            checked: r.checked,
            failed: r.failures.len(),
            failures: r
                .failures
                .iter()
                .take(limit)
                .map(|c| CertificateJson {
                    check: c.check.clone(),
                    inputs: c.inputs.clone(),
                    residual: element_to_json(&c.residual),
                })
                .collect(),
            error: None,
        }
    }

    pub fn aborted(check: &str, window: &str, error: String) -> Self {
        ReportJson {
            check: check.to_string(),
            window: window.to_string(),
            checked: 0,
            failed: 0,
            failures: Vec::new(),
            error: Some(error),
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0 && self.error.is_none()
    }
}

/// Several reports over one instance and window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub instance: String,
    pub window: String,
    pub checks: Vec<String>,
    pub passed: usize,
    pub failed: usize,
    pub reports: Vec<ReportJson>,
}

impl AuditReport {
    pub fn new(instance: &str, window: &str, reports: Vec<ReportJson>) -> Self {
        let failed = reports.iter().filter(|r| !r.passed()).count();
        AuditReport {
            instance: instance.to_string(),
            window: window.to_string(),
            checks: reports.iter().map(|r| r.check.clone()).collect(),
            passed: reports.len() - failed,
            failed,
            reports,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn certificates(&self) -> impl Iterator<Item = &CertificateJson> {
        self.reports.iter().flat_map(|r| r.failures.iter())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleSpecJson {
    pub base: String,
    #[serde(default)]
    pub summands: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tangent: Option<usize>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub complement: bool,
}

impl BundleSpecJson {
    pub fn to_spec(&self) -> Result<BundleSpec, FormatError> {
        let base: usize = self
            .base
            .trim()
            .strip_prefix("CP^")
            .and_then(|m| m.parse().ok())
            .ok_or_else(|| FormatError::Base(self.base.clone()))?;
        let mut s: Vec<Summand> = self.summands.iter().map(|&k| Summand::Line(k)).collect();
        if let Some(m) = self.tangent {
            s.push(Summand::Tangent(m));
        }
        if self.complement {
            s.push(Summand::Complement);
        }
        Ok(BundleSpec::new(base, s))
    }

    /// Line summands first, then the tangent and complement summands.
    pub fn from_spec(b: &BundleSpec) -> Self {
        let mut j = BundleSpecJson { base: format!("CP^{}", b.base), ..Default::default() };
        for s in &b.summands {
            match s {
                Summand::Line(k) => j.summands.push(*k),
                Summand::Tangent(m) => j.tangent = Some(*m),
                Summand::Complement => j.complement = true,
            }
        }
        j
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceJson {
    pub free: usize,
    pub torsion: Vec<u64>,
}

/// Keys are degrees as decimal strings.
pub type GradedGroupJson = BTreeMap<String, PieceJson>;

pub fn graded_group_to_json(g: &GradedGroup) -> GradedGroupJson {
    g.iter()
        .map(|(d, p)| (d.to_string(), PieceJson { free: p.free, torsion: p.torsion.clone() }))
        .collect()
}

pub fn graded_group_from_json(j: &GradedGroupJson) -> Result<GradedGroup, FormatError> {
    let mut g = GradedGroup::new();
    for (k, p) in j {
        let d: i64 = k.parse().map_err(|_| FormatError::Degree(k.clone()))?;
        g.insert(d, GroupPiece { free: p.free, torsion: p.torsion.clone() });
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateJson {
    pub eps: [i64; 3],
    pub alpha: u64,
    pub map: String,
}

impl From<&IsoCandidate> for CandidateJson {
    fn from(c: &IsoCandidate) -> Self {
        CandidateJson { eps: c.eps, alpha: c.alpha, map: c.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HochschildJson {
    pub n: usize,
    pub candidates_checked: usize,
    pub iso: Option<CandidateJson>,
    pub obstruction: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstruction_input: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstruction_candidate: Option<CandidateJson>,
}

impl From<&IsoDecision> for HochschildJson {
    fn from(d: &IsoDecision) -> Self {
        let (cand, input, res) = match &d.obstruction {
            Some((c, i, r)) => (Some(CandidateJson::from(c)), Some(i.clone()), Some(r.to_string())),
            None => (None, None, None),
        };
        HochschildJson {
            n: d.n,
            candidates_checked: d.candidates_checked,
            iso: d.iso.as_ref().map(CandidateJson::from),
            obstruction: res,
            obstruction_input: input,
            obstruction_candidate: cand,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineJson {
    pub n: usize,
    pub mu: Vec<i64>,
    pub lambda: Vec<i64>,
    pub lambda_zero: i64,
    pub constants: (i64, i64),
    pub b_matches_reference: bool,
    pub comparison: ReportJson,
}

impl From<&loopbv_core::chern::Pipeline> for PipelineJson {
    fn from(p: &loopbv_core::chern::Pipeline) -> Self {
        PipelineJson {
            n: p.n,
            mu: p.mu.clone(),
            lambda: p.lambda.clone(),
            lambda_zero: p.lambda_zero,
            constants: p.constants,
            b_matches_reference: p.b_matches_reference,
            comparison: ReportJson::from_report(&p.derivation.comparison),
        }
    }
}

impl PipelineJson {
    pub fn passed(&self) -> bool {
        self.b_matches_reference && self.comparison.passed()
    }
}
