//! Helpers around [`rug::Rational`], the exact rational type used for every
//! exponent and for exact coefficients.

use rug::{Integer, Rational};

/// Arbitrary-precision rational number. `rug` keeps it in lowest terms with a
/// positive denominator after every operation.
pub type Rat = Rational;

/// Builds `num/den`, normalized.
///
/// # Panics
///
/// Panics when `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::from((num, den))
}

pub fn int(n: i64) -> Rat {
    Rat::from(n)
}

/// Re-normalizes `num/den` from its raw parts. Used to check that stored
/// values are already canonical.
pub fn normalize(r: &Rat) -> Rat {
    let (num, den) = r.clone().into_numer_denom();
    Rat::from((num, den))
}

pub fn is_integer(r: &Rat) -> bool {
    *r.denom() == 1
}

pub fn lcm(a: &Integer, b: &Integer) -> Integer {
    Integer::from(a.lcm_ref(b))
}

/// Least common multiple of the denominators of `values` (1 for none).
pub fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a Rat>) -> Integer {
    values
        .into_iter()
        .fold(Integer::from(1), |acc, r| lcm(&acc, r.denom()))
}

/// Formats a rational as `p/q`, or `p` when the denominator is one.
pub fn fmt_rat(r: &Rat) -> String {
    if is_integer(r) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let r = rat(6, -4);
        assert_eq!(*r.numer(), -3);
        assert_eq!(*r.denom(), 2);
        assert_eq!(normalize(&r), r);
        assert_eq!(normalize(&normalize(&r)), normalize(&r));
    }

    #[test]
    fn lcm_of_denominators() {
        let v = [rat(1, 2), rat(2, 3), int(5), rat(7, 4)];
        assert_eq!(lcm_denominators(v.iter()), 12);
        assert_eq!(lcm_denominators(std::iter::empty()), 1);
    }

    #[test]
    fn formatting() {
        assert_eq!(fmt_rat(&rat(-4, 3)), "-4/3");
        assert_eq!(fmt_rat(&int(7)), "7");
    }
}
