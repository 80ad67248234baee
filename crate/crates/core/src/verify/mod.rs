//! Independent checks of expansion results: exact residuals, an
//! undetermined-coefficients oracle and a numeric slope estimate.
//!
//! Nothing here uses the hull or shift-substitution code of the engine.

mod oracle;
mod slope;

use std::collections::BTreeMap;
use std::fmt;

use rug::Float;

use crate::engine::PuiseuxSeries;
use crate::error::{Error, Result};
use crate::field::{Backend, Coeff, Rat};
use crate::mpoly::XYPoly;

pub use oracle::oracle_expand;
pub use slope::{numeric_residual_slope, numeric_residual_slope_with, DEFAULT_SAMPLES};

/// Univariate sparse series in `x` with rational exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct XSeriesPoly {
    backend: Backend,
    terms: BTreeMap<Rat, Coeff>,
}

impl XSeriesPoly {
    pub fn terms(&self) -> impl Iterator<Item = (&Rat, &Coeff)> + '_ {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exponent(&self) -> Option<&Rat> {
        self.terms.keys().next()
    }

    pub fn coeff(&self, exponent: &Rat) -> Option<&Coeff> {
        self.terms.get(exponent)
    }

    fn one(backend: Backend) -> Self {
        XSeriesPoly {
            backend,
            terms: BTreeMap::from([(Rat::new(), backend.one())]),
        }
    }

    fn mul(&self, other: &XSeriesPoly) -> XSeriesPoly {
        let mut terms: BTreeMap<Rat, Coeff> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let p = ca * cb;
                let e = Rat::from(ea + eb);
                match terms.get_mut(&e) {
                    Some(s) => *s = &*s + &p,
                    None => {
                        terms.insert(e, p);
                    }
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        XSeriesPoly {
            backend: self.backend,
            terms,
        }
    }
}

impl fmt::Display for XSeriesPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("({c})x^({e})")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `f(x, S(x))` by expanding every power of `S`.
///
/// Numerically, coefficients below `2^-(p/2)` of the largest contribution
/// `|f_ba|·max(1,|S|)^b` are dropped.
pub fn substitute_series(f: &XYPoly, s: &PuiseuxSeries) -> XSeriesPoly {
    let backend = f.backend();
    let series = XSeriesPoly {
        backend,
        terms: s
            .terms
            .iter()
            .map(|t| (t.exponent.clone(), backend.convert(&t.coeff)))
            .collect(),
    };
    let mut powers = vec![XSeriesPoly::one(backend)];
    for b in 1..=f.degree_y() as usize {
        let next = powers[b - 1].mul(&series);
        powers.push(next);
    }
    let mut terms: BTreeMap<Rat, Coeff> = BTreeMap::new();
    for (m, k) in f.terms() {
        for (e, c) in &powers[m.y as usize].terms {
            let p = k * c;
            let e = Rat::from(e + &m.x);
            match terms.get_mut(&e) {
                Some(slot) => *slot = &*slot + &p,
                None => {
                    terms.insert(e, p);
                }
            }
        }
    }
    terms.retain(|_, c| !c.is_zero());
    if let Backend::Numeric { precision } = backend {
        let one = Float::with_val(precision, 1);
        let bound = series
            .terms
            .values()
            .map(|c| c.magnitude(precision))
            .fold(one, |a, b| a.max(&b));
        let mut cutoff = Float::with_val(precision, 0);
        for (m, k) in f.terms() {
            let mut contrib = k.magnitude(precision);
            for _ in 0..m.y {
                contrib *= &bound;
            }
            cutoff = cutoff.max(&contrib);
        }
        cutoff >>= backend.tolerance_bits();
        terms.retain(|_, c| c.magnitude(precision) >= cutoff);
    }
    XSeriesPoly { backend, terms }
}

/// Order of vanishing of a residual; `Infinite` for an exact solution.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(Rat),
    Infinite,
}

impl Valuation {
    pub fn to_f64(&self) -> f64 {
        match self {
            Valuation::Finite(r) => r.to_f64(),
            Valuation::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(r) => write!(f, "{r}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

pub fn residual_valuation(f: &XYPoly, s: &PuiseuxSeries) -> Valuation {
    match substitute_series(f, s).min_exponent() {
        Some(e) => Valuation::Finite(e.clone()),
        None => Valuation::Infinite,
    }
}

/// Valuations of the prefixes of length `1..=len`.
pub fn prefix_valuations(f: &XYPoly, s: &PuiseuxSeries) -> Vec<Valuation> {
    (1..=s.terms.len()).map(|k| residual_valuation(f, &s.prefix(k))).collect()
}

/// Strictly increasing prefix valuations, each above the exponent of the
/// last term of its prefix. A prefix that already solves `f` (another
/// branch ending there) may be followed only by further exact prefixes.
pub fn is_monotone(s: &PuiseuxSeries, valuations: &[Valuation]) -> bool {
    let increasing = valuations
        .windows(2)
        .all(|w| w[0] < w[1] || (w[0] == Valuation::Infinite && w[1] == Valuation::Infinite));
    let above = valuations
        .iter()
        .zip(&s.terms)
        .all(|(v, t)| *v > Valuation::Finite(t.exponent.clone()));
    increasing && above
}

/// Outcome of comparing one engine branch with the oracle.
#[derive(Clone, Debug, PartialEq)]
pub enum OracleVerdict {
    /// Every coefficient reproduced; `jet` leading terms had to be given.
    Agrees { jet: usize },
    /// The series is an exact solution (zero residual).
    ExactSolution,
    /// An unresolved cluster: the whole series extends to several branches.
    ConsistentCluster,
    Disagrees { detail: String },
}

impl OracleVerdict {
    pub fn passed(&self) -> bool {
        !matches!(self, OracleVerdict::Disagrees { .. })
    }
}

fn close(a: &Coeff, b: &Coeff) -> bool {
    match (a, b) {
        (Coeff::Exact(x), Coeff::Exact(y)) => x == y,
        _ => {
            let prec = a.backend().precision().or(b.backend().precision()).unwrap_or(256);
            let mut tol = a.magnitude(prec).max(&b.magnitude(prec)).max(&Float::with_val(prec, 1));
            tol >>= prec / 2;
            (a - b).magnitude(prec) <= tol
        }
    }
}

/// Re-derives `s` with [`oracle_expand`], seeding it with the shortest jet
/// that singles out one branch.
pub fn oracle_check(f: &XYPoly, s: &PuiseuxSeries) -> OracleVerdict {
    if s.exact {
        return match residual_valuation(f, s) {
            Valuation::Infinite => OracleVerdict::ExactSolution,
            v => OracleVerdict::Disagrees {
                detail: format!("marked exact but the residual has order {v}"),
            },
        };
    }
    let k = s.terms.len();
    for jet in 1..=k {
        match oracle_expand(f, &s.terms[..jet], k) {
            Ok(o) => {
                if o.terms.len() != k {
                    return OracleVerdict::Disagrees {
                        detail: format!("oracle found {} terms, expected {k}", o.terms.len()),
                    };
                }
                for (a, b) in s.terms.iter().zip(&o.terms) {
                    if a.exponent != b.exponent || !close(&a.coeff, &b.coeff) {
                        return OracleVerdict::Disagrees {
                            detail: format!(
                                "term {}x^({}) vs oracle {}x^({})",
                                a.coeff, a.exponent, b.coeff, b.exponent
                            ),
                        };
                    }
                }
                return OracleVerdict::Agrees { jet };
            }
            Err(Error::AmbiguousBranch { .. }) if jet < k => continue,
            Err(Error::AmbiguousBranch { .. }) if s.multiplicity > 1 => {
                return OracleVerdict::ConsistentCluster;
            }
            Err(e) => return OracleVerdict::Disagrees { detail: e.to_string() },
        }
    }
    OracleVerdict::Disagrees {
        detail: "empty series".into(),
    }
}

/// Everything the `verify` command reports for one branch.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchCheck {
    pub valuations: Vec<Valuation>,
    pub monotone: bool,
    pub oracle: OracleVerdict,
    /// `None` when the residual underflowed (exact solution).
    pub slope: Option<f64>,
    pub slope_ok: bool,
}

impl BranchCheck {
    pub fn passed(&self) -> bool {
        self.monotone && self.oracle.passed() && self.slope_ok
    }
}

/// Relative tolerance of the slope check.
pub const SLOPE_TOLERANCE: f64 = 0.05;

pub fn check_branch(f: &XYPoly, s: &PuiseuxSeries, samples: &[f64], precision: u32) -> Result<BranchCheck> {
    let valuations = prefix_valuations(f, s);
    let monotone = is_monotone(s, &valuations);
    let oracle = oracle_check(f, s);
    let full = valuations.last().cloned().unwrap_or_else(|| residual_valuation(f, s));
    let (slope, slope_ok) = match numeric_residual_slope_with(f, s, samples, precision) {
        Ok(m) => {
            let ok = match &full {
                Valuation::Finite(v) => ((m - v.to_f64()) / v.to_f64()).abs() <= SLOPE_TOLERANCE,
                Valuation::Infinite => false,
            };
            (Some(m), ok)
        }
        Err(Error::ResidualUnderflow { .. }) => (None, full == Valuation::Infinite),
        Err(e) => return Err(e),
    };
    Ok(BranchCheck {
        valuations,
        monotone,
        oracle,
        slope,
        slope_ok,
    })
}
