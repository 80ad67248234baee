//! Regular tail: once the iterate `G` has a single expansion segment from
//! `(0, β)` to `(1, 0)`, the rest of the branch is the unique solution of
//! `G(x, Y) = 0` with `Y(0) = 0`. With `x = t^D` every coefficient follows
//! from one linear equation `L·c_v + R_v = 0`, where `L = coeff(y)` and
//! `R_v` is the lowest coefficient of the residual `G(t^D, Y(t))`.

use std::collections::BTreeMap;

use rug::{Float, Integer};

use crate::error::{Error, Result};
use crate::field::{Backend, Coeff, Rat};
use crate::mpoly::XYPoly;
use crate::polygon::{segments_of, Segment};

/// Coefficient of `y` when `segs` describe the regular shape, else `None`.
pub(crate) fn regular_pivot(current: &XYPoly, segs: &[Segment]) -> Option<Coeff> {
    match segs {
        [seg] if seg.start.y == 0 && seg.end.y == 1 && seg.end.x.cmp0().is_eq() => {
            current.coeff(1, &Rat::new()).cloned()
        }
        _ => None,
    }
}

/// Sparse power series in `t`: exponent to nonzero coefficient.
type TSeries = BTreeMap<u64, Coeff>;

pub(crate) struct TailSolution {
    /// `(v, c_v)` for each nonzero coefficient, `v` in units of `1/D`.
    pub coeffs: Vec<(u64, Coeff)>,
    /// Order of the first unsolved residual term; `None` when the
    /// residual vanished identically.
    pub next: Option<u64>,
}

pub(crate) struct RegularSolver {
    /// `(b, a·D, g)` for every term of the iterate.
    terms: Vec<(u32, u64, Coeff)>,
    pivot: Coeff,
    backend: Backend,
}

impl RegularSolver {
    /// `scale` is `D`, the substitution `x = t^D`; every `a·D` must be an
    /// integer.
    pub fn new(current: &XYPoly, pivot: Coeff, scale: &Integer) -> Option<Self> {
        let mut terms = Vec::with_capacity(current.term_count());
        for (m, c) in current.terms() {
            let e = Rat::from(&m.x * scale);
            if *e.denom() != 1 {
                return None;
            }
            terms.push((m.y, e.numer().to_u64()?, c.clone()));
        }
        Some(RegularSolver {
            terms,
            pivot,
            backend: current.backend(),
        })
    }

    fn multiply(&self, a: &TSeries, b: &TSeries) -> TSeries {
        let mut out = TSeries::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                let p = ca * cb;
                out.entry(ea + eb)
                    .and_modify(|s| *s = &*s + &p)
                    .or_insert(p);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// `G(t^D, Y(t))`, exact for the exact backend; numerically, entries
    /// below `2^-(p/2)` of the contribution scale are dropped.
    fn residual(&self, y: &TSeries) -> TSeries {
        let max_b = self.terms.iter().map(|t| t.0).max().unwrap_or(0) as usize;
        let mut powers = vec![TSeries::from([(0, self.backend.one())])];
        for b in 1..=max_b {
            let next = self.multiply(&powers[b - 1], y);
            powers.push(next);
        }
        let mut out = TSeries::new();
        for (b, e, g) in &self.terms {
            for (k, c) in &powers[*b as usize] {
                let p = g * c;
                out.entry(e + k)
                    .and_modify(|s| *s = &*s + &p)
                    .or_insert(p);
            }
        }
        out.retain(|_, c| !c.is_zero());
        if let Backend::Numeric { precision } = self.backend {
            let one = Float::with_val(precision, 1);
            let m = y.values().map(|c| c.magnitude(precision)).fold(one.clone(), |a, b| a.max(&b));
            let mut cutoff = Float::with_val(precision, 0);
            for (b, _, g) in &self.terms {
                let mut contrib = g.magnitude(precision);
                for _ in 0..*b {
                    contrib *= &m;
                }
                cutoff = cutoff.max(&contrib);
            }
            cutoff >>= self.backend.tolerance_bits();
            out.retain(|_, c| c.magnitude(precision) >= cutoff);
        }
        out
    }

    /// Solves until `want` nonzero coefficients are found, the residual
    /// vanishes, or the next order exceeds `max_order`.
    pub fn solve(&self, want: usize, max_order: Option<u64>) -> TailSolution {
        let mut y = TSeries::new();
        let mut coeffs = Vec::new();
        loop {
            let r = self.residual(&y);
            let Some((&v, rv)) = r.iter().next() else {
                return TailSolution { coeffs, next: None };
            };
            if coeffs.len() >= want || max_order.is_some_and(|m| v > m) {
                return TailSolution { coeffs, next: Some(v) };
            }
            debug_assert!(coeffs.last().is_none_or(|(last, _)| v > *last));
            let c = -(rv / &self.pivot);
            y.insert(v, c.clone());
            coeffs.push((v, c));
        }
    }
}

/// Dense tail coefficients `c_1..c_count`, where `c_k` multiplies
/// `x^(offset + k·delta)`. Zero entries mark skipped exponents.
pub fn regular_tail(state: &super::ExpansionState, delta: &Rat, count: usize) -> Result<Vec<Coeff>> {
    let current = &state.current;
    let segs = segments_of(current)?;
    let pivot = regular_pivot(current, &segs).ok_or_else(|| Error::NotRegular {
        reason: "the polygon is not a single segment ending at (1,0)".into(),
    })?;
    if delta.cmp0().is_le() || *delta.numer() != 1 {
        return Err(Error::NotRegular {
            reason: format!("step {delta} is not of the form 1/D"),
        });
    }
    let scale = delta.denom().clone();
    let solver = RegularSolver::new(current, pivot, &scale).ok_or_else(|| Error::NotRegular {
        reason: format!("exponents are not multiples of {delta}"),
    })?;
    let solution = solver.solve(usize::MAX, Some(count as u64));
    let mut dense = vec![current.backend().zero(); count];
    for (v, c) in solution.coeffs {
        dense[v as usize - 1] = c;
    }
    Ok(dense)
}
