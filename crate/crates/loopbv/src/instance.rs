//! Built-in instances by name, and window parsing.

use std::sync::Arc;

use loopbv_core::cpn::{
    build_theorem_a_over, rational_instance, s2_instance, CpnError, StringBvInstance,
};
use loopbv_core::hochschild::build_hochschild;
use loopbv_core::{BvOperator, CoeffRing, Coefficient, DegreeWindow, Presentation, PresentationExt};
use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub const WINDOW_ENV: &str = "LOOPBV_WINDOW";
pub const DEFAULT_QMAX: u32 = 6;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("unknown instance {0:?} (expected cpn:<n>:<coeff>, s2, cpn-rational:<n> or hochschild:<n>)")]
    Unknown(String),
    #[error("unknown coefficient ring {0:?} (expected Z, Q or Zm:<m>)")]
    Ring(String),
    #[error("bad window {0:?}")]
    Window(String),
    #[error("{0}")]
    Build(#[from] CpnError),
}

/// One instance over a fixed scalar type.
#[derive(Clone, Debug)]
pub struct Loaded<C: Coefficient> {
    pub name: String,
    pub presentation: Arc<Presentation<C>>,
    pub delta: BvOperator<C>,
    /// Present for the ℂPⁿ instances, which carry action tables.
    pub cpn: Option<StringBvInstance<C>>,
}

#[derive(Clone, Debug)]
pub enum Instance {
    Integral(Loaded<BigInt>),
    Rational(Loaded<BigRational>),
}

/// Runs `$body` with `$b` bound to the loaded instance, whatever its scalars.
#[macro_export]
macro_rules! with_instance {
    ($inst:expr, $b:ident => $body:expr) => {
        match $inst {
            $crate::instance::Instance::Integral($b) => $body,
            $crate::instance::Instance::Rational($b) => $body,
        }
    };
}

impl Instance {
    pub fn name(&self) -> &str {
        with_instance!(self, b => &b.name)
    }

    pub fn ring(&self) -> CoeffRing {
        with_instance!(self, b => b.presentation.ring())
    }
}

fn cpn<C: Coefficient>(n: usize, ring: CoeffRing) -> Result<Loaded<C>, InstanceError> {
    let inst = build_theorem_a_over::<C>(n, ring)?;
    Ok(Loaded {
        name: format!("cpn:{n}:{}", ring.label()),
        presentation: inst.presentation.clone(),
        delta: inst.delta.clone(),
        cpn: Some(inst),
    })
}

pub fn cpn_instance(n: usize, ring: CoeffRing) -> Result<Instance, InstanceError> {
    match ring {
        CoeffRing::Rationals => Ok(Instance::Rational(cpn(n, ring)?)),
        _ => Ok(Instance::Integral(cpn(n, ring)?)),
    }
}

fn parse_n(s: &str, name: &str) -> Result<usize, InstanceError> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(InstanceError::Unknown(name.to_string())),
    }
}

pub fn parse_ring(s: &str) -> Result<CoeffRing, InstanceError> {
    CoeffRing::parse(s).ok_or_else(|| InstanceError::Ring(s.to_string()))
}

/// Resolves a built-in name. `window` bounds the bijectivity checks of the
/// substituted instances.
pub fn resolve(name: &str, window: &DegreeWindow) -> Result<Instance, InstanceError> {
    let unknown = || InstanceError::Unknown(name.to_string());
    let parts: Vec<&str> = name.trim().splitn(3, ':').collect();
    match parts.as_slice() {
        ["s2"] => {
            let s = s2_instance(window)?;
            Ok(Instance::Integral(Loaded { name: "s2".into(), presentation: s.presentation, delta: s.delta, cpn: None }))
        }
        ["cpn", n] => cpn_instance(parse_n(n, name)?, CoeffRing::Integers),
        ["cpn", n, ring] => cpn_instance(parse_n(n, name)?, parse_ring(ring)?),
        ["cpn-rational", n] => {
            let n = parse_n(n, name)?;
            let s = rational_instance(n, window)?;
            Ok(Instance::Rational(Loaded {
                name: format!("cpn-rational:{n}"),
                presentation: s.presentation,
                delta: s.delta,
                cpn: None,
            }))
        }
        ["hochschild", n] => {
            let n = parse_n(n, name)?;
            let h = build_hochschild(n)?;
            Ok(Instance::Integral(Loaded {
                name: format!("hochschild:{n}"),
                presentation: h.presentation,
                delta: h.delta,
                cpn: None,
            }))
        }
        _ => Err(unknown()),
    }
}

/// Parses `6` or the `describe()` form `cap=6,v<=4,|deg|<=20`.
pub fn parse_window(s: &str) -> Result<DegreeWindow, InstanceError> {
    let bad = || InstanceError::Window(s.to_string());
    let s = s.trim();
    if let Ok(cap) = s.parse::<u32>() {
        return Ok(DegreeWindow::new(cap));
    }
    let mut w = DegreeWindow::new(DEFAULT_QMAX);
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some(c) = part.strip_prefix("cap=") {
            w.default_cap = c.parse().map_err(|_| bad())?;
        } else if let Some(d) = part.strip_prefix("|deg|<=") {
            w = w.with_max_abs_degree(d.parse().map_err(|_| bad())?);
        } else if let Some((name, cap)) = part.split_once("<=") {
            w = w.with_cap(name.trim(), cap.trim().parse().map_err(|_| bad())?);
        } else {
            return Err(bad());
        }
    }
    Ok(w)
}

/// `--qmax` wins over the environment, which wins over the default.
pub fn choose_window(qmax: Option<u32>, env: Option<&str>) -> Result<DegreeWindow, InstanceError> {
    match (qmax, env) {
        (Some(q), _) => Ok(DegreeWindow::new(q)),
        (None, Some(e)) if !e.trim().is_empty() => parse_window(e),
        _ => Ok(DegreeWindow::new(DEFAULT_QMAX)),
    }
}

/// The presentations every instance is built from, for the confluence audit.
pub fn builtin_names() -> Vec<String> {
    let mut v = Vec::new();
    for n in 1..=5 {
        v.push(format!("cpn:{n}:Z"));
    }
    v.push("cpn:2:Q".into());
    v.push("cpn:3:Zm:4".into());
    v.push("s2".into());
    for n in 1..=4 {
        v.push(format!("cpn-rational:{n}"));
        v.push(format!("hochschild:{n}"));
    }
    v
}

/// `{xy → x, yx → y}` on two even generators: not locally confluent.
pub fn adversarial_fixture() -> Result<Arc<Presentation<BigInt>>, loopbv_core::AlgebraError> {
    Presentation::builder(CoeffRing::Integers)
        .generator("x", 0)
        .generator("y", 0)
        .order(&["x", "y"])
        .rewrite("x·y", vec![("x".to_string(), BigInt::from(1))])
        .rewrite("y·x", vec![("y".to_string(), BigInt::from(1))])
        .build()
}

/// Parses an element in the instance's presentation.
pub fn parse_in<C: Coefficient>(b: &Loaded<C>, s: &str) -> Result<loopbv_core::Element<C>, loopbv_core::AlgebraError> {
    b.presentation.parse_element(s)
}
