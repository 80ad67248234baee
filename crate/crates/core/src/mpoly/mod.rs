//! Sparse bivariate polynomials `Σ k·x^a·y^b` with rational `a ≥ 0` and
//! integer `b ≥ 0`.
//!
//! A term `k·x^a·y^b` sits at the support point `(b, a)`; that is the
//! coordinate system used by the Newton polygon.

mod format;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

use rug::{Float, Integer};

use crate::error::{Error, Result};
use crate::field::rat::{fmt_rat, is_integer, lcm_denominators};
use crate::field::{Backend, Coeff, Rat};

pub(crate) use format::{coefficient, full_digits, power};
pub use format::{format_poly, Style};
pub use parse::parse_poly;

/// Exponent pair of a term: `y` is the y-exponent `b`, `x` the x-exponent
/// `a`. Orders by `y` first, then `x`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub y: u32,
    pub x: Rat,
}

impl Monomial {
    pub fn new(y: u32, x: Rat) -> Self {
        Monomial { y, x }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.y, fmt_rat(&self.x))
    }
}

/// Canonical sparse bivariate polynomial: no zero coefficients, all
/// exponents nonnegative, one backend for every coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct XYPoly {
    backend: Backend,
    terms: BTreeMap<Monomial, Coeff>,
}

impl XYPoly {
    pub fn zero(backend: Backend) -> Self {
        XYPoly {
            backend,
            terms: BTreeMap::new(),
        }
    }

    /// Single term `coeff · x^x · y^y`.
    pub fn monomial(backend: Backend, y: u32, x: Rat, coeff: Coeff) -> Self {
        Self::from_terms(backend, [(Monomial::new(y, x), coeff)])
    }

    /// Sums the given terms (like exponents combine) and canonicalizes.
    pub fn from_terms(backend: Backend, terms: impl IntoIterator<Item = (Monomial, Coeff)>) -> Self {
        let mut map: BTreeMap<Monomial, Coeff> = BTreeMap::new();
        for (m, c) in terms {
            let c = backend.convert(&c);
            match map.get_mut(&m) {
                Some(slot) => *slot = &*slot + &c,
                None => {
                    map.insert(m, c);
                }
            }
        }
        let mut p = XYPoly { backend, terms: map };
        p.canonicalize();
        p
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    /// The same polynomial over `backend`. A numeric polynomial cannot
    /// become exact and is returned unchanged.
    pub fn to_backend(&self, backend: Backend) -> XYPoly {
        if backend == self.backend || backend.is_exact() {
            return self.clone();
        }
        XYPoly::from_terms(backend, self.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coeff)> + '_ {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, y: u32, x: &Rat) -> Option<&Coeff> {
        self.terms.get(&Monomial::new(y, x.clone()))
    }

    /// Largest coefficient magnitude, as a float at the backend precision
    /// (64 bits for the exact backend).
    pub fn max_magnitude(&self) -> Float {
        let prec = self.backend.precision().unwrap_or(64);
        self.terms
            .values()
            .map(|c| c.magnitude(prec))
            .fold(Float::with_val(prec, 0), |a, b| if b > a { b } else { a })
    }

    fn canonicalize(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
        if let Backend::Numeric { .. } = self.backend {
            self.prune(self.backend.tolerance_bits());
        }
    }

    /// Drops numeric coefficients whose magnitude is below
    /// `2^-bits · max_magnitude()`. No effect on exact polynomials.
    pub fn prune(&mut self, bits: u32) {
        let Some(prec) = self.backend.precision() else {
            return;
        };
        let mut cutoff = self.max_magnitude();
        cutoff >>= bits;
        self.terms.retain(|_, c| c.magnitude(prec) >= cutoff);
    }

    pub fn add(&self, other: &XYPoly) -> XYPoly {
        let terms = self
            .terms
            .iter()
            .chain(other.terms.iter())
            .map(|(m, c)| (m.clone(), c.clone()));
        XYPoly::from_terms(self.backend, terms)
    }

    pub fn neg(&self) -> XYPoly {
        XYPoly {
            backend: self.backend,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &XYPoly) -> XYPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &XYPoly) -> XYPoly {
        let mut out = Vec::with_capacity(self.term_count() * other.term_count());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.push((
                    Monomial::new(m1.y + m2.y, Rat::from(&m1.x + &m2.x)),
                    c1 * c2,
                ));
            }
        }
        XYPoly::from_terms(self.backend, out)
    }

    pub fn pow(&self, exp: u32) -> XYPoly {
        let mut out = XYPoly::monomial(self.backend, 0, Rat::new(), self.backend.one());
        for _ in 0..exp {
            out = out.mul(self);
        }
        out
    }

    pub fn scale(&self, k: &Coeff) -> XYPoly {
        XYPoly::from_terms(self.backend, self.terms.iter().map(|(m, c)| (m.clone(), c * k)))
    }

    /// The exponent pairs `(b, a)` of all terms, sorted by `(b, a)`.
    pub fn support_points(&self) -> Result<Vec<Monomial>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.terms.keys().cloned().collect())
    }

    /// Largest `m` such that `y^m` divides every term.
    pub fn y_multiplicity(&self) -> Result<u32> {
        self.terms.keys().map(|m| m.y).min().ok_or(Error::ZeroPolynomial)
    }

    pub fn degree_y(&self) -> u32 {
        self.terms.keys().map(|m| m.y).max().unwrap_or(0)
    }

    /// `self / y^k`; `k` must not exceed [`Self::y_multiplicity`].
    pub fn div_y_pow(&self, k: u32) -> XYPoly {
        XYPoly {
            backend: self.backend,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial::new(m.y - k, m.x.clone()), c.clone()))
                .collect(),
        }
    }

    /// `f(x, 0)`: the terms free of `y`.
    pub fn pure_x_part(&self) -> XYPoly {
        XYPoly {
            backend: self.backend,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.y == 0)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn has_constant_term(&self) -> bool {
        self.coeff(0, &Rat::new()).is_some()
    }

    /// Least common multiple of the x-exponent denominators.
    pub fn x_denominator_lcm(&self) -> Integer {
        lcm_denominators(self.terms.keys().map(|m| &m.x))
    }

    /// `x^-beta · f(x, x^gamma · (c + y))`, expanded and canonicalized.
    ///
    /// The constant term must vanish (exactly, or below
    /// `2^-(precision/2)` of the largest coefficient numerically) and no
    /// exponent may become negative.
    pub fn shift_substitute(&self, gamma: &Rat, c: &Coeff, beta: &Rat) -> Result<XYPoly> {
        let backend = self.backend;
        let c = backend.convert(c);
        let max_b = self.degree_y() as usize;
        let mut powers = Vec::with_capacity(max_b + 1);
        powers.push(backend.one());
        for k in 1..=max_b {
            let next = &powers[k - 1] * &c;
            powers.push(next);
        }

        let mut out = Vec::new();
        for (m, k) in &self.terms {
            let base = Rat::from(&m.x + Rat::from(gamma * m.y)) - beta;
            let mut binom = Integer::from(1);
            for j in 0..=m.y {
                let coeff = k * &(&backend.from_rat(&Rat::from(binom.clone())) * &powers[(m.y - j) as usize]);
                out.push((Monomial::new(j, base.clone()), coeff));
                binom = binom * (m.y - j) / (j + 1);
            }
        }

        let mut map: BTreeMap<Monomial, Coeff> = BTreeMap::new();
        for (m, c) in out {
            match map.get_mut(&m) {
                Some(slot) => *slot = &*slot + &c,
                None => {
                    map.insert(m, c);
                }
            }
        }
        let origin = Monomial::new(0, Rat::new());
        let constant = map.remove(&origin);
        let mut result = XYPoly { backend, terms: map };
        result.canonicalize();

        if let Some((m, _)) = result.terms.iter().find(|(m, _)| m.x.cmp0().is_lt()) {
            return Err(Error::NegativeResultExponent {
                exponent: fmt_rat(&m.x),
            });
        }
        if let Some(k) = constant.filter(|k| !k.is_zero()) {
            let vanishes = match backend {
                Backend::Exact => false,
                Backend::Numeric { precision } => {
                    let mut cutoff = result.max_magnitude().max(&k.magnitude(precision));
                    cutoff >>= backend.tolerance_bits();
                    k.magnitude(precision) < cutoff
                }
            };
            if !vanishes {
                return Err(Error::ConstantTermNonzero { value: k.to_string() });
            }
        }
        Ok(result)
    }

    /// `f(x + x0, y + y0)`. Only defined for integer x-exponents.
    pub fn translate(&self, x0: &Coeff, y0: &Coeff) -> Result<XYPoly> {
        if let Some(m) = self.terms.keys().find(|m| !is_integer(&m.x)) {
            return Err(Error::FractionalExponent {
                exponent: fmt_rat(&m.x),
            });
        }
        let backend = self.backend;
        let shifted = |var_y: bool, shift: &Coeff| -> XYPoly {
            let (y, x) = if var_y { (1, Rat::new()) } else { (0, Rat::from(1)) };
            XYPoly::from_terms(
                backend,
                [
                    (Monomial::new(y, x), backend.one()),
                    (Monomial::new(0, Rat::new()), shift.clone()),
                ],
            )
        };
        let x_lin = shifted(false, x0);
        let y_lin = shifted(true, y0);
        let mut out = XYPoly::zero(backend);
        for (m, k) in &self.terms {
            let a = m.x.numer().to_u32().expect("x-exponent too large to translate");
            let term = x_lin.pow(a).mul(&y_lin.pow(m.y)).scale(k);
            out = out.add(&term);
        }
        Ok(out)
    }
}

impl fmt::Display for XYPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(self, Style::Plain))
    }
}
