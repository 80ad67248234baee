use crate::field::rat::{fmt_rat, is_integer};
use crate::field::{format_complex, Coeff, Rat};

use super::XYPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    /// Accepted back by [`super::parse_poly`].
    Plain,
    Latex,
}

/// Significant digits that carry the full precision of a numeric value.
pub(crate) fn full_digits(precision: u32) -> usize {
    (precision as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2
}

/// Terms ordered by ascending y-exponent, then ascending x-exponent.
pub fn format_poly(p: &XYPoly, style: Style) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let digits = p.backend().precision().map_or(12, full_digits);
    let mut out = String::new();
    for (i, (m, c)) in p.terms().enumerate() {
        let (negative, body) = coefficient(c, style, digits);
        let vars = format!("{}{}", power("x", &m.x, style), power("y", &Rat::from(m.y), style));
        let body = match (body.as_str(), vars.is_empty()) {
            (_, true) => body,
            ("1", false) => String::new(),
            _ => body,
        };
        out.push_str(match (i == 0, negative) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        });
        out.push_str(&body);
        out.push_str(&vars);
    }
    out
}

/// Splits a coefficient into its sign and the magnitude text. Complex
/// values with both parts keep their parenthesized form and a `+` sign.
pub(crate) fn coefficient(c: &Coeff, style: Style, digits: usize) -> (bool, String) {
    match c {
        Coeff::Exact(r) => {
            let negative = r.cmp0().is_lt();
            let abs = Rat::from(r.abs_ref());
            let s = match style {
                Style::Plain => fmt_rat(&abs),
                Style::Latex => latex_rat(&abs),
            };
            (negative, s)
        }
        Coeff::Complex(_) => {
            let s = format_complex(c, digits);
            match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            }
        }
    }
}

pub(crate) fn latex_rat(r: &Rat) -> String {
    if is_integer(r) {
        r.numer().to_string()
    } else if r.cmp0().is_lt() {
        format!("-\\frac{{{}}}{{{}}}", Rat::from(-r).numer(), r.denom())
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

/// `var^exp` in the given style; empty for exponent zero.
pub(crate) fn power(var: &str, exp: &Rat, style: Style) -> String {
    if exp.cmp0().is_eq() {
        return String::new();
    }
    if *exp == 1 {
        return var.to_string();
    }
    match style {
        Style::Plain if is_integer(exp) => format!("{var}^{}", fmt_rat(exp)),
        Style::Plain => format!("{var}^({})", fmt_rat(exp)),
        Style::Latex => format!("{var}^{{{}}}", latex_rat(exp)),
    }
}
