use std::cmp::Ordering;

use crate::field::rat::lcm_denominators;
use crate::field::{Coeff, Rat};
use crate::mpoly::{coefficient, power, Style};

/// One term `coeff · x^exponent` of a series.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub exponent: Rat,
    pub coeff: Coeff,
}

impl Term {
    pub fn new(exponent: Rat, coeff: Coeff) -> Self {
        Term { exponent, coeff }
    }
}

/// A truncated Puiseux series `y = Σ coeff·x^exponent` for one branch (or
/// one unresolved cluster of `multiplicity` branches).
///
/// Exponents are positive and strictly increasing. `truncation_order` is
/// `None` exactly when `exact` holds; otherwise every omitted term has an
/// exponent of at least that order.
#[derive(Clone, Debug, PartialEq)]
pub struct PuiseuxSeries {
    pub terms: Vec<Term>,
    /// Least common multiple of the exponent denominators.
    pub ramification: u64,
    pub truncation_order: Option<Rat>,
    pub exact: bool,
    pub multiplicity: u32,
}

impl PuiseuxSeries {
    pub fn new(terms: Vec<Term>, truncation_order: Option<Rat>, multiplicity: u32) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].exponent < w[1].exponent));
        let ramification = lcm_denominators(terms.iter().map(|t| &t.exponent))
            .to_u64()
            .unwrap_or(u64::MAX);
        PuiseuxSeries {
            exact: truncation_order.is_none(),
            terms,
            ramification,
            truncation_order,
            multiplicity,
        }
    }

    pub fn leading(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn coeff_at(&self, exponent: &Rat) -> Option<&Coeff> {
        self.terms.iter().find(|t| t.exponent == *exponent).map(|t| &t.coeff)
    }

    /// The first `k` terms, truncated at the exponent of the first dropped
    /// term.
    pub fn prefix(&self, k: usize) -> PuiseuxSeries {
        if k >= self.terms.len() {
            return self.clone();
        }
        let order = self.terms[k].exponent.clone();
        PuiseuxSeries::new(self.terms[..k].to_vec(), Some(order), self.multiplicity)
    }

    /// Lexicographic over terms by (exponent, coefficient sort key), then by
    /// length and multiplicity.
    pub fn sort_cmp(&self, other: &PuiseuxSeries) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let o = a.exponent.cmp(&b.exponent).then_with(|| a.coeff.sort_cmp(&b.coeff));
            if o != Ordering::Equal {
                return o;
            }
        }
        self.terms
            .len()
            .cmp(&other.terms.len())
            .then(self.multiplicity.cmp(&other.multiplicity))
            .then(other.exact.cmp(&self.exact))
    }

    /// `y = ...` with `digits` significant digits for numeric coefficients,
    /// ending in `+ O(x^order)` unless exact.
    pub fn render(&self, style: Style, digits: usize) -> String {
        let mut out = String::from("y = ");
        if self.terms.is_empty() {
            out.push('0');
        }
        for (i, t) in self.terms.iter().enumerate() {
            let (negative, body) = coefficient(&t.coeff, style, digits);
            let body = if body == "1" { String::new() } else { body };
            out.push_str(match (i == 0, negative) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            });
            out.push_str(&body);
            out.push_str(&power("x", &t.exponent, style));
        }
        if let Some(order) = &self.truncation_order {
            let big_o = match style {
                Style::Plain => format!("O({})", power("x", order, style)),
                Style::Latex => format!("O\\left({}\\right)", power("x", order, style)),
            };
            if self.terms.is_empty() {
                out = format!("y = {big_o}");
            } else {
                out.push_str(" + ");
                out.push_str(&big_o);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat::{int, rat};
    use crate::field::Backend;

    fn t(e: Rat, c: i64) -> Term {
        Term::new(e, Coeff::Exact(int(c)))
    }

    #[test]
    fn text_rendering() {
        let s = PuiseuxSeries::new(
            vec![t(int(2), -2), t(int(3), -16), t(int(4), -224), t(int(5), -3840)],
            Some(int(6)),
            1,
        );
        assert_eq!(s.render(Style::Plain, 12), "y = -2x^2 - 16x^3 - 224x^4 - 3840x^5 + O(x^6)");
        assert_eq!(s.ramification, 1);
        assert!(!s.exact);
        assert_eq!(PuiseuxSeries::new(vec![], None, 1).render(Style::Plain, 12), "y = 0");
        assert_eq!(PuiseuxSeries::new(vec![t(int(1), 1)], None, 1).render(Style::Plain, 12), "y = x");
    }

    #[test]
    fn latex_and_ramification() {
        let s = PuiseuxSeries::new(
            vec![
                t(rat(4, 3), 2),
                Term::new(int(2), Coeff::Exact(rat(-2, 3))),
            ],
            Some(rat(7, 3)),
            1,
        );
        assert_eq!(s.ramification, 3);
        assert_eq!(
            s.render(Style::Latex, 12),
            "y = 2x^{\\frac{4}{3}} - \\frac{2}{3}x^{2} + O\\left(x^{\\frac{7}{3}}\\right)"
        );
    }

    #[test]
    fn numeric_rendering() {
        let b = Backend::numeric(128);
        let c = &b.from_int(-1) + &(&b.imaginary_unit().unwrap() * &b.from_rat(&rat(1, 2)));
        let s = PuiseuxSeries::new(vec![Term::new(rat(4, 3), c)], Some(int(2)), 1);
        assert_eq!(s.render(Style::Plain, 12), "y = (-1+0.5i)x^(4/3) + O(x^2)");
    }

    #[test]
    fn prefix_and_order() {
        let s = PuiseuxSeries::new(vec![t(int(1), 1), t(int(2), 3)], None, 1);
        let p = s.prefix(1);
        assert_eq!(p.truncation_order, Some(int(2)));
        assert!(p.sort_cmp(&s).is_lt());
    }
}
