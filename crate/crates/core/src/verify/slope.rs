use rug::ops::Pow;
use rug::{Complex, Float};

use crate::engine::PuiseuxSeries;
use crate::error::{Error, Result};
use crate::field::{Backend, Rat};
use crate::mpoly::XYPoly;

pub const DEFAULT_SAMPLES: [f64; 3] = [1e-2, 1e-3, 1e-4];

fn power(t: &Float, exponent: &Rat, precision: u32) -> Float {
    if exponent.cmp0().is_eq() {
        return Float::with_val(precision, 1);
    }
    let ln = Float::with_val(precision, t.ln_ref());
    let r = Float::with_val(precision, exponent);
    (ln * r).exp()
}

/// Least-squares slope of `ln|f(t, S(t))|` against `ln t`, evaluated with
/// big floats at the precision of `f` (256 bits for exact input).
pub fn numeric_residual_slope(f: &XYPoly, s: &PuiseuxSeries, samples: &[f64]) -> Result<f64> {
    let precision = f
        .backend()
        .precision()
        .or_else(|| s.terms.iter().find_map(|t| t.coeff.backend().precision()))
        .unwrap_or(Backend::DEFAULT_PRECISION);
    numeric_residual_slope_with(f, s, samples, precision)
}

/// [`numeric_residual_slope`] at an explicit precision.
///
/// Samples must be at least three values in `(0, 0.1]`. A residual below
/// `2^-(precision-16)` of the summed term magnitudes counts as zero and
/// fails with [`Error::ResidualUnderflow`].
pub fn numeric_residual_slope_with(f: &XYPoly, s: &PuiseuxSeries, samples: &[f64], precision: u32) -> Result<f64> {
    if samples.len() < 3 || samples.iter().any(|&t| !(t > 0.0 && t <= 0.1)) {
        return Err(Error::InvalidArgument(
            "need at least three samples in (0, 0.1]".into(),
        ));
    }
    let mut xs = Vec::with_capacity(samples.len());
    let mut ys = Vec::with_capacity(samples.len());
    for &sample in samples {
        let t = Float::with_val(precision, sample);
        let mut y = Complex::with_val(precision, 0);
        for term in &s.terms {
            let c = term.coeff.to_complex(precision);
            y += c * power(&t, &term.exponent, precision);
        }
        let y_abs = Float::with_val(precision, y.abs_ref());
        let mut residual = Complex::with_val(precision, 0);
        let mut scale = Float::with_val(precision, 0);
        for (m, g) in f.terms() {
            let xa = power(&t, &m.x, precision);
            let yb = Complex::with_val(precision, (&y).pow(m.y));
            let g = g.to_complex(precision);
            let g_abs = Float::with_val(precision, g.abs_ref());
            scale += g_abs * &xa * Float::with_val(precision, (&y_abs).pow(m.y));
            residual += g * xa * yb;
        }
        let r_abs = Float::with_val(precision, residual.abs_ref());
        let mut floor = scale;
        floor >>= precision.saturating_sub(16);
        if r_abs <= floor {
            return Err(Error::ResidualUnderflow { sample });
        }
        xs.push(sample.ln());
        ys.push(r_abs.ln().to_f64());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Term;
    use crate::field::rat::int;
    use crate::field::Coeff;
    use crate::mpoly::parse_poly;

    fn exact(s: &str) -> XYPoly {
        parse_poly(s, Backend::Exact).unwrap()
    }

    fn series(terms: &[(i64, i64)]) -> PuiseuxSeries {
        let terms = terms.iter().map(|&(e, c)| Term::new(int(e), Coeff::Exact(int(c)))).collect();
        PuiseuxSeries::new(terms, Some(int(100)), 1)
    }

    #[test]
    fn slope_of_first_residual() {
        let m = numeric_residual_slope(&exact("2x^4 + x^2y + 4xy^2 + 4y^3"), &series(&[(2, -2)]), &DEFAULT_SAMPLES).unwrap();
        assert!((m - 5.0).abs() / 5.0 < 0.05, "{m}");
    }

    #[test]
    fn exact_solution_underflows() {
        let r = numeric_residual_slope(&exact("y - x"), &series(&[(1, 1)]), &DEFAULT_SAMPLES);
        assert!(matches!(r, Err(Error::ResidualUnderflow { .. })));
    }

    #[test]
    fn sample_validation() {
        let f = exact("y - x");
        let s = series(&[(1, 2)]);
        assert!(matches!(numeric_residual_slope(&f, &s, &[1e-2, 1e-3]), Err(Error::InvalidArgument(_))));
        assert!(matches!(numeric_residual_slope(&f, &s, &[0.5, 1e-2, 1e-3]), Err(Error::InvalidArgument(_))));
        let m = numeric_residual_slope(&f, &s, &[1e-2, 1e-3, 1e-4]).unwrap();
        assert!((m - 1.0).abs() < 1e-9);
    }
}
