use std::fmt;

use super::coeff::{format_complex, Backend, Coeff};

/// Dense univariate polynomial, `coeffs[k]` multiplying `c^k`.
///
/// Trailing exact zeros are trimmed, so the leading coefficient is nonzero
/// unless the polynomial is zero (empty coefficient list).
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly {
    coeffs: Vec<Coeff>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Coeff>) -> Self {
        while coeffs.last().is_some_and(Coeff::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    /// `∏ (c - root)^multiplicity`, mostly for tests.
    pub fn from_roots(backend: Backend, roots: &[(Coeff, usize)]) -> Self {
        let mut p = UniPoly::new(vec![backend.one()]);
        for (r, m) in roots {
            let linear = UniPoly::new(vec![-r, backend.one()]);
            for _ in 0..*m {
                p = p.mul(&linear);
            }
        }
        p
    }

    pub fn coeffs(&self) -> &[Coeff] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Multiplicity of the root `0`, i.e. the index of the lowest nonzero
    /// coefficient.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn leading(&self) -> Option<&Coeff> {
        self.coeffs.last()
    }

    pub fn backend(&self) -> Backend {
        self.coeffs
            .iter()
            .find(|c| !c.is_exact())
            .map(Coeff::backend)
            .unwrap_or(Backend::Exact)
    }

    pub fn eval(&self, at: &Coeff) -> Coeff {
        let mut acc = match self.coeffs.last() {
            Some(c) => c.clone(),
            None => return at.backend().zero(),
        };
        for c in self.coeffs.iter().rev().skip(1) {
            acc = &(&acc * at) + c;
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * &c.backend().from_int(k as i64))
            .collect();
        UniPoly::new(coeffs)
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let zero = self.coeffs[0].backend().zero();
        let mut out = vec![zero; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UniPoly::new(out)
    }

    /// Synthetic division by `(c - root)`: returns the quotient and the
    /// remainder `p(root)`.
    pub fn deflate(&self, root: &Coeff) -> (UniPoly, Coeff) {
        let n = self.coeffs.len();
        if n == 0 {
            return (UniPoly::zero(), root.backend().zero());
        }
        let mut quotient = Vec::with_capacity(n - 1);
        let mut carry = self.coeffs[n - 1].clone();
        for c in self.coeffs[..n - 1].iter().rev() {
            quotient.push(carry.clone());
            carry = &(&carry * root) + c;
        }
        quotient.reverse();
        (UniPoly::new(quotient), carry)
    }

    /// Drops the factor `c^k` (all leading zero coefficients).
    pub fn strip_zero_roots(&self) -> (UniPoly, usize) {
        let k = self.order().unwrap_or(0);
        (UniPoly::new(self.coeffs[k..].to_vec()), k)
    }
}

impl fmt::Display for UniPoly {
    /// Descending powers of `c`, e.g. `4c^3 + 4c^2 + c`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mut s = format_complex(c, 12);
            let negative = s.starts_with('-');
            if negative {
                s.remove(0);
            }
            if k > 0 && s == "1" {
                s.clear();
            }
            let var = match k {
                0 => String::new(),
                1 => "c".to_string(),
                _ => format!("c^{k}"),
            };
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            write!(f, "{s}{var}")?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat::rat;

    fn ex(v: &[(i64, i64)]) -> UniPoly {
        UniPoly::new(v.iter().map(|&(p, q)| Coeff::Exact(rat(p, q))).collect())
    }

    #[test]
    fn trims_and_degrees() {
        let p = ex(&[(1, 1), (0, 1), (0, 1)]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(UniPoly::zero().degree(), None);
        assert_eq!(ex(&[(0, 1), (0, 1), (3, 1)]).order(), Some(2));
    }

    #[test]
    fn deflation_and_eval() {
        // c(1+2c)^2 = c + 4c^2 + 4c^3
        let p = ex(&[(0, 1), (1, 1), (4, 1), (4, 1)]);
        let r = Coeff::Exact(rat(-1, 2));
        assert!(p.eval(&r).is_zero());
        let (q, rem) = p.deflate(&r);
        assert!(rem.is_zero());
        assert_eq!(q, ex(&[(0, 1), (2, 1), (4, 1)]));
        assert_eq!(p.to_string(), "4c^3 + 4c^2 + c");
    }

    #[test]
    fn derivative_and_product() {
        let p = UniPoly::from_roots(Backend::Exact, &[(Coeff::Exact(rat(2, 1)), 2)]);
        assert_eq!(p, ex(&[(4, 1), (-4, 1), (1, 1)]));
        assert_eq!(p.derivative(), ex(&[(-4, 1), (2, 1)]));
    }
}
