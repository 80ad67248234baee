//! Undetermined-coefficients oracle.
//!
//! With `x = t^e`, where `e` clears every denominator a branch of `f` can
//! need, each branch becomes an ordinary power series `Y(t) = Σ a_k t^k`.
//! Writing `Y = P + a·t^k + O(t^(k+1))` for a known prefix `P`,
//!
//! ```text
//! F(t, Y) = Σ_j T_j(t) · (a·t^k + ...)^j,   T_j = Σ_b C(b,j)·f_b(t)·P^(b-j)
//! ```
//!
//! so the lowest order that can still cancel is `min_j(ord T_j + k·j)` and
//! `a` must be a root of `Q(a) = Σ lead(T_j)·a^j` over the minimizing `j`.
//! Orders where only one `j ≥ 1` attains the minimum force `a = 0` and are
//! skipped in one jump.

use std::collections::BTreeMap;

use rug::{Float, Integer};

use crate::engine::{PuiseuxSeries, Term};
use crate::error::{Error, Result};
use crate::field::rat::lcm;
use crate::field::{find_roots, Backend, Coeff, Rat, UniPoly};
use crate::mpoly::XYPoly;

type TSeries = BTreeMap<u64, Coeff>;

struct Problem {
    /// `(b, a·e, f_ba)` for every term of `f`.
    terms: Vec<(u32, u64, Coeff)>,
    deg: u32,
    backend: Backend,
    /// Prescribed coefficients by order; orders up to `jet_end` not listed
    /// are zero.
    jet: BTreeMap<u64, Coeff>,
    jet_end: u64,
    want: usize,
}

struct Solution {
    y: TSeries,
    /// First order not determined; `None` for an exact solution.
    next: Option<u64>,
}

/// Extends `jet` (leading terms of one branch, possibly none) to `k`
/// nonzero terms by solving `f(x, y) = 0` order by order.
///
/// Fails with [`Error::NoSolution`] when no branch starts with `jet` and
/// with [`Error::AmbiguousBranch`] when several branches share it.
pub fn oracle_expand(f: &XYPoly, jet: &[Term], k: usize) -> Result<PuiseuxSeries> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if k < jet.len() || k == 0 {
        return Err(Error::InvalidArgument(format!(
            "cannot extend a {}-term jet to {k} terms",
            jet.len()
        )));
    }
    if jet.windows(2).any(|w| w[0].exponent >= w[1].exponent) || jet.iter().any(|t| t.exponent.cmp0().is_le()) {
        return Err(Error::InvalidArgument("jet exponents must be positive and increasing".into()));
    }
    let backend = match (f.backend(), jet.iter().find(|t| !t.coeff.is_exact())) {
        (Backend::Exact, Some(t)) => t.coeff.backend(),
        (b, _) => b,
    };

    let deg = f.degree_y();
    // a branch of f in x^(1/d) ramifies at most deg-fold over x^(1/d)
    let mut e = (1..=deg.max(1)).fold(Integer::from(1), |acc, n| lcm(&acc, &Integer::from(n))) * f.x_denominator_lcm();
    for t in jet {
        e = lcm(&e, t.exponent.denom());
    }

    let order_of = |r: &Rat| -> Result<u64> {
        Rat::from(r * &e)
            .numer()
            .to_u64()
            .ok_or_else(|| Error::InvalidArgument("exponent out of range".into()))
    };
    let mut terms = Vec::new();
    for (m, c) in f.terms() {
        terms.push((m.y, order_of(&m.x)?, backend.convert(c)));
    }
    let mut jet_map = BTreeMap::new();
    for t in jet {
        jet_map.insert(order_of(&t.exponent)?, backend.convert(&t.coeff));
    }
    let jet_end = jet_map.keys().last().copied().unwrap_or(0);
    let problem = Problem {
        terms,
        deg,
        backend,
        jet: jet_map,
        jet_end,
        want: k,
    };

    let mut found = Vec::new();
    let mut extra = 0usize;
    problem.search(TSeries::new(), 1, &mut found, &mut extra)?;
    match (found.len() + extra, found.pop()) {
        (1, Some(sol)) => {
            let exponent = |o: u64| Rat::from((Integer::from(o), e.clone()));
            let terms = sol.y.iter().map(|(o, c)| Term::new(exponent(*o), c.clone())).collect();
            Ok(PuiseuxSeries::new(terms, sol.next.map(exponent), 1))
        }
        (0, _) => Err(Error::NoSolution),
        (count, _) => Err(Error::AmbiguousBranch { count }),
    }
}

impl Problem {
    fn tolerance_cut(&self, scale: &Float) -> Option<Float> {
        let Backend::Numeric { .. } = self.backend else {
            return None;
        };
        let mut cut = scale.clone();
        cut >>= self.backend.tolerance_bits();
        Some(cut)
    }

    fn is_negligible(&self, c: &Coeff, scale: &Float) -> bool {
        match (self.tolerance_cut(scale), self.backend.precision()) {
            (Some(cut), Some(p)) => c.magnitude(p) < cut,
            _ => c.is_zero(),
        }
    }

    fn multiply(a: &TSeries, b: &TSeries) -> TSeries {
        let mut out = TSeries::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                let p = ca * cb;
                out.entry(ea + eb).and_modify(|s| *s = &*s + &p).or_insert(p);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// `T_0..T_deg` for the prefix `y`, with numeric noise removed.
    fn t_polys(&self, y: &TSeries) -> Vec<TSeries> {
        let backend = self.backend;
        let mut powers = vec![TSeries::from([(0, backend.one())])];
        for m in 1..=self.deg as usize {
            let next = Self::multiply(&powers[m - 1], y);
            powers.push(next);
        }
        let prec = backend.precision().unwrap_or(64);
        let bound = y
            .values()
            .map(|c| c.magnitude(prec))
            .fold(Float::with_val(prec, 1), |a, b| a.max(&b));

        let mut out = Vec::with_capacity(self.deg as usize + 1);
        for j in 0..=self.deg {
            let mut t = TSeries::new();
            let mut scale = Float::with_val(prec, 0);
            for (b, ea, g) in self.terms.iter().filter(|t| t.0 >= j) {
                let binom = backend.from_rat(&Rat::from(Integer::from(Integer::binomial_u(*b, j))));
                let gb = g * &binom;
                let mut contrib = gb.magnitude(prec);
                for _ in 0..(b - j) {
                    contrib *= &bound;
                }
                scale = scale.max(&contrib);
                for (o, c) in &powers[(b - j) as usize] {
                    let p = &gb * c;
                    t.entry(ea + o).and_modify(|s| *s = &*s + &p).or_insert(p);
                }
            }
            t.retain(|_, c| !self.is_negligible(c, &scale));
            out.push(t);
        }
        out
    }

    /// `|Q(a)|` is negligible against `Σ|q_j||a|^j`.
    fn vanishes(&self, q: &[(u32, Coeff)], a: &Coeff) -> bool {
        let mut sum = self.backend.zero();
        let prec = self.backend.precision().unwrap_or(64);
        let mut scale = Float::with_val(prec, 0);
        for (j, c) in q {
            let term = c * &a.pow(*j);
            scale += term.magnitude(prec);
            sum = &sum + &term;
        }
        self.is_negligible(&sum, &scale)
    }

    /// Smallest order `≥ from` at which either `T_0` or two of the `T_j`
    /// attain `min_j(ord T_j + k·j)`.
    fn next_event(ords: &[Option<u64>], from: u64) -> Option<u64> {
        let live: Vec<(i128, i128)> = ords
            .iter()
            .enumerate()
            .filter_map(|(j, o)| o.map(|o| (j as i128, o as i128)))
            .collect();
        let mut candidates = vec![from as i128];
        for (x, &(i, oi)) in live.iter().enumerate() {
            for &(j, oj) in &live[x + 1..] {
                let (num, den) = (oi - oj, j - i);
                if num >= 0 {
                    candidates.push(num / den);
                    candidates.push((num + den - 1) / den);
                }
            }
        }
        candidates.retain(|&k| k >= from as i128);
        candidates.sort_unstable();
        candidates.dedup();
        candidates.into_iter().find_map(|k| {
            let values: Vec<(i128, i128)> = live.iter().map(|&(j, o)| (j, o + k * j)).collect();
            let min = values.iter().map(|v| v.1).min()?;
            let hits: Vec<i128> = values.iter().filter(|v| v.1 == min).map(|v| v.0).collect();
            (hits.len() >= 2 || hits[0] == 0).then_some(k as u64)
        })
    }

    fn search(&self, y: TSeries, from: u64, found: &mut Vec<Solution>, extra: &mut usize) -> Result<()> {
        let t = self.t_polys(&y);
        let exact = t[0].is_empty();
        let past_jet = from > self.jet_end;
        if exact && past_jet {
            // other branches may still share the prefix
            found.push(Solution { y: y.clone(), next: None });
        } else if y.len() >= self.want && past_jet {
            found.push(Solution { y, next: Some(from) });
            return Ok(());
        }
        let ords: Vec<Option<u64>> = t.iter().map(|p| p.keys().next().copied()).collect();
        let event = Self::next_event(&ords, from);
        let next_jet = self.jet.range(from..).next().map(|(o, _)| *o);
        let k = match (event, next_jet) {
            (Some(a), Some(b)) => a.min(b),
            (a, b) => match a.or(b) {
                Some(k) => k,
                None => return Ok(()),
            },
        };
        let q: Vec<(u32, Coeff)> = {
            let min = ords
                .iter()
                .enumerate()
                .filter_map(|(j, o)| o.map(|o| o + k * j as u64))
                .min();
            ords.iter()
                .enumerate()
                .filter(|(j, o)| o.is_some_and(|o| Some(o + k * *j as u64) == min))
                .map(|(j, o)| (j as u32, t[j][&o.unwrap()].clone()))
                .collect()
        };
        if q.len() == 1 && q[0].0 == 0 {
            return Ok(());
        }

        if k <= self.jet_end {
            let a = self.jet.get(&k).cloned().unwrap_or_else(|| self.backend.zero());
            if !self.vanishes(&q, &a) {
                return Ok(());
            }
            let mut y = y;
            if !a.is_zero() {
                y.insert(k, a);
            }
            return self.search(y, k + 1, found, extra);
        }

        let qpoly = {
            let top = q.iter().map(|(j, _)| *j).max().unwrap_or(0) as usize;
            let mut coeffs = vec![self.backend.zero(); top + 1];
            for (j, c) in &q {
                coeffs[*j as usize] = c.clone();
            }
            UniPoly::new(coeffs)
        };
        let (reduced, zero_mult) = qpoly.strip_zero_roots();
        if zero_mult > 0 && !(exact && past_jet) {
            self.search(y.clone(), k + 1, found, extra)?;
        }
        if reduced.degree().unwrap_or(0) == 0 {
            return Ok(());
        }
        let roots = match find_roots(&reduced, 0.0) {
            Ok(r) => r,
            Err(Error::NonRationalRoot { factor, .. }) => {
                // irrational branches extend the jet as well
                *extra += factor.degree().unwrap_or(1);
                return Ok(());
            }
            Err(e) => return Err(e),
        };
        for r in roots {
            let mut next = y.clone();
            next.insert(k, r.value);
            self.search(next, k + 1, found, extra)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat::{int, rat};
    use crate::mpoly::parse_poly;

    fn exact(s: &str) -> XYPoly {
        parse_poly(s, Backend::Exact).unwrap()
    }

    fn term(e: Rat, c: Rat) -> Term {
        Term::new(e, Coeff::Exact(c))
    }

    fn pairs(s: &PuiseuxSeries) -> Vec<(Rat, Rat)> {
        s.terms
            .iter()
            .map(|t| (t.exponent.clone(), t.coeff.as_rat().unwrap().clone()))
            .collect()
    }

    const EX1: &str = "2x^4 + x^2y + 4xy^2 + 4y^3";

    #[test]
    fn example_one_regular_branch() {
        let s = oracle_expand(&exact(EX1), &[term(int(2), int(-2))], 5).unwrap();
        assert_eq!(
            pairs(&s),
            [(2, -2), (3, -16), (4, -224), (5, -3840), (6, -73216)]
                .map(|(e, c)| (int(e), int(c)))
                .to_vec()
        );
    }

    #[test]
    fn example_one_ramified_branches() {
        let f = exact(EX1);
        assert!(matches!(
            oracle_expand(&f, &[term(int(1), rat(-1, 2))], 5),
            Err(Error::AmbiguousBranch { count: 2 })
        ));
        let s = oracle_expand(&f, &[term(int(1), rat(-1, 2)), term(rat(3, 2), int(1))], 5).unwrap();
        assert_eq!(
            pairs(&s),
            vec![
                (int(1), rat(-1, 2)),
                (rat(3, 2), int(1)),
                (int(2), int(1)),
                (rat(5, 2), rat(5, 2)),
                (int(3), int(8)),
            ]
        );
    }

    #[test]
    fn polynomial_branches() {
        let s = oracle_expand(&exact("y - x - x^2"), &[term(int(1), int(1))], 2).unwrap();
        assert_eq!(pairs(&s), vec![(int(1), int(1)), (int(2), int(1))]);
        let s = oracle_expand(&exact("y - x - x^2"), &[term(int(1), int(1))], 5).unwrap();
        assert!(s.exact);
        assert!(matches!(
            oracle_expand(&exact("(y - x)(y - x - x^2)"), &[term(int(1), int(1))], 2),
            Err(Error::AmbiguousBranch { count: 2 })
        ));
    }

    #[test]
    fn rejects_foreign_jets() {
        assert!(matches!(
            oracle_expand(&exact(EX1), &[term(int(2), int(3))], 3),
            Err(Error::NoSolution)
        ));
        assert!(matches!(
            oracle_expand(&exact(EX1), &[term(int(3), int(1))], 3),
            Err(Error::NoSolution)
        ));
    }

    #[test]
    fn irrational_continuations_count_as_ambiguity() {
        // y^2 = 2x^2 + x^3: leading coefficients are ±sqrt 2
        assert!(matches!(
            oracle_expand(&exact("y^2 - 2x^2 - x^3"), &[], 1),
            Err(Error::AmbiguousBranch { .. })
        ));
    }
}
