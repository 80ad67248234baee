use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::{Complex, Float, Integer};

use super::rat::{fmt_rat, Rat};

/// Which coefficient field a computation runs in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    /// Exact rational arithmetic. Only rational characteristic roots.
    Exact,
    /// Complex big-float arithmetic with a fixed mantissa precision in bits.
    Numeric { precision: u32 },
}

impl Backend {
    pub const DEFAULT_PRECISION: u32 = 256;
    pub const MIN_PRECISION: u32 = 64;

    /// Numeric backend, clamping the precision to at least 64 bits.
    pub fn numeric(precision: u32) -> Self {
        Backend::Numeric {
            precision: precision.max(Self::MIN_PRECISION),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Numeric { .. } => "numeric",
        }
    }

    pub fn precision(&self) -> Option<u32> {
        match *self {
            Backend::Exact => None,
            Backend::Numeric { precision } => Some(precision),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Backend::Exact)
    }

    /// Number of bits below the working scale at which numeric values count
    /// as zero: `precision / 2`. Unused by the exact backend.
    pub fn tolerance_bits(&self) -> u32 {
        match *self {
            Backend::Exact => 0,
            Backend::Numeric { precision } => precision / 2,
        }
    }

    pub fn zero(&self) -> Coeff {
        self.from_rat(&Rat::new())
    }

    pub fn one(&self) -> Coeff {
        self.from_rat(&Rat::from(1))
    }

    pub fn from_int(&self, n: i64) -> Coeff {
        self.from_rat(&Rat::from(n))
    }

    pub fn from_rat(&self, r: &Rat) -> Coeff {
        match *self {
            Backend::Exact => Coeff::Exact(r.clone()),
            Backend::Numeric { precision } => Coeff::Complex(Complex::with_val(precision, r)),
        }
    }

    /// The imaginary unit, unavailable in the exact backend.
    pub fn imaginary_unit(&self) -> Option<Coeff> {
        match *self {
            Backend::Exact => None,
            Backend::Numeric { precision } => {
                Some(Coeff::Complex(Complex::with_val(precision, (0, 1))))
            }
        }
    }

    /// Converts `c` into this backend. Complex values cannot become exact and
    /// are returned unchanged in that case.
    pub fn convert(&self, c: &Coeff) -> Coeff {
        match (*self, c) {
            (Backend::Exact, _) => c.clone(),
            (Backend::Numeric { precision }, _) => Coeff::Complex(c.to_complex(precision)),
        }
    }
}

/// A coefficient: an exact rational or a complex big-float.
#[derive(Clone, Debug, PartialEq)]
pub enum Coeff {
    Exact(Rat),
    Complex(Complex),
}

impl Coeff {
    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Exact(r) => r.cmp0() == Ordering::Equal,
            Coeff::Complex(z) => z.real().is_zero() && z.imag().is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Exact(r) => *r == 1,
            Coeff::Complex(z) => *z.real() == 1 && z.imag().is_zero(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coeff::Exact(_))
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            Coeff::Exact(r) => Some(r),
            Coeff::Complex(_) => None,
        }
    }

    /// The backend this value belongs to.
    pub fn backend(&self) -> Backend {
        match self {
            Coeff::Exact(_) => Backend::Exact,
            Coeff::Complex(z) => Backend::Numeric {
                precision: z.prec().0,
            },
        }
    }

    pub fn to_complex(&self, precision: u32) -> Complex {
        match self {
            Coeff::Exact(r) => Complex::with_val(precision, r),
            Coeff::Complex(z) => Complex::with_val(precision, z),
        }
    }

    /// `|self|` as a big float of the given precision.
    pub fn magnitude(&self, precision: u32) -> Float {
        match self {
            Coeff::Exact(r) => Float::with_val(precision, &Rat::from(r.abs_ref())),
            Coeff::Complex(z) => Float::with_val(precision, z.abs_ref()),
        }
    }

    pub fn pow(&self, exp: u32) -> Coeff {
        match self {
            Coeff::Exact(r) => {
                let mut out = Rat::from(1);
                for _ in 0..exp {
                    out *= r;
                }
                Coeff::Exact(out)
            }
            Coeff::Complex(z) => {
                let prec = z.prec().0;
                let mut out = Complex::with_val(prec, (1, 0));
                for _ in 0..exp {
                    out *= z;
                }
                Coeff::Complex(out)
            }
        }
    }

    /// Real and imaginary parts as `f64` (lossy, for display and statistics).
    pub fn to_f64_parts(&self) -> (f64, f64) {
        match self {
            Coeff::Exact(r) => (r.to_f64(), 0.0),
            Coeff::Complex(z) => (z.real().to_f64(), z.imag().to_f64()),
        }
    }

    /// Deterministic total order: real part, then imaginary part. Numeric
    /// values are compared after rounding to `2^-(precision/2)` so that
    /// roundoff cannot reorder conjugates or near-equal reals.
    pub fn sort_cmp(&self, other: &Coeff) -> Ordering {
        match (self, other) {
            (Coeff::Exact(a), Coeff::Exact(b)) => a.cmp(b),
            _ => {
                let prec = match (self, other) {
                    (Coeff::Complex(z), _) | (_, Coeff::Complex(z)) => z.prec().0,
                    _ => unreachable!(),
                };
                let (ar, ai) = quantized_parts(self, prec);
                let (br, bi) = quantized_parts(other, prec);
                ar.cmp(&br).then(ai.cmp(&bi))
            }
        }
    }
}

fn quantized_parts(c: &Coeff, prec: u32) -> (Integer, Integer) {
    let z = c.to_complex(prec);
    let shift = prec / 2;
    let q = |f: &Float| -> Integer {
        let scaled = Float::with_val(prec + 64, f << shift);
        scaled.to_integer().unwrap_or_default()
    };
    (q(z.real()), q(z.imag()))
}

fn combined_precision(a: &Coeff, b: &Coeff) -> Option<u32> {
    match (a, b) {
        (Coeff::Exact(_), Coeff::Exact(_)) => None,
        (Coeff::Complex(z), Coeff::Exact(_)) | (Coeff::Exact(_), Coeff::Complex(z)) => {
            Some(z.prec().0)
        }
        (Coeff::Complex(x), Coeff::Complex(y)) => Some(x.prec().0.max(y.prec().0)),
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Coeff> for &Coeff {
            type Output = Coeff;
            fn $method(self, rhs: &Coeff) -> Coeff {
                match (self, rhs) {
                    (Coeff::Exact(a), Coeff::Exact(b)) => Coeff::Exact(Rat::from(a $op b)),
                    _ => {
                        let prec = combined_precision(self, rhs).unwrap();
                        let a = self.to_complex(prec);
                        let b = rhs.to_complex(prec);
                        Coeff::Complex(Complex::with_val(prec, &a $op &b))
                    }
                }
            }
        }

        impl $trait<Coeff> for Coeff {
            type Output = Coeff;
            fn $method(self, rhs: Coeff) -> Coeff {
                (&self).$method(&rhs)
            }
        }

        impl $trait<&Coeff> for Coeff {
            type Output = Coeff;
            fn $method(self, rhs: &Coeff) -> Coeff {
                (&self).$method(rhs)
            }
        }
    };
}

binary_op!(Add, add, +);
binary_op!(Sub, sub, -);
binary_op!(Mul, mul, *);
binary_op!(Div, div, /);

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        match self {
            Coeff::Exact(r) => Coeff::Exact(Rat::from(-r)),
            Coeff::Complex(z) => Coeff::Complex(Complex::with_val(z.prec().0, -z)),
        }
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        -&self
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Exact(r) => f.write_str(&fmt_rat(r)),
            Coeff::Complex(_) => f.write_str(&format_complex(self, 12)),
        }
    }
}

/// Formats a real number with `digits` significant digits, trimming trailing
/// zeros and switching to scientific notation outside `[1e-5, 1e12)`.
pub fn format_real(value: &Float, digits: usize) -> String {
    if value.is_zero() {
        return "0".to_string();
    }
    let v = value.to_f64();
    if digits <= 15 && v.is_finite() && v != 0.0 {
        let mag = v.abs().log10().floor() as i32;
        if (-5..12).contains(&mag) {
            let decimals = (digits as i32 - 1 - mag).max(0) as usize;
            let s = format!("{:.*}", decimals, v);
            return trim_decimal(&s);
        }
        let s = format!("{:.*e}", digits.saturating_sub(1), v);
        if let Some((mant, exp)) = s.split_once('e') {
            return format!("{}e{}", trim_decimal(mant), exp);
        }
        return s;
    }
    let s = value.to_string_radix(10, Some(digits));
    match s.split_once('e') {
        Some((mant, exp)) => match exp.parse::<i32>() {
            Ok(e) if (-5..12).contains(&e) => trim_decimal(&positional(mant, e)),
            _ => format!("{}e{}", trim_decimal(mant), exp),
        },
        None => trim_decimal(&s),
    }
}

/// `d.ddd` times `10^exp` written without an exponent.
fn positional(mantissa: &str, exp: i32) -> String {
    let (sign, body) = match mantissa.strip_prefix('-') {
        Some(b) => ("-", b),
        None => ("", mantissa),
    };
    let digits: String = body.chars().filter(|c| *c != '.').collect();
    let point = body.find('.').unwrap_or(body.len()) as i32 + exp;
    let (int, frac) = if point <= 0 {
        ("0".to_string(), "0".repeat(-point as usize) + &digits)
    } else if point as usize >= digits.len() {
        (digits.clone() + &"0".repeat(point as usize - digits.len()), String::new())
    } else {
        (digits[..point as usize].to_string(), digits[point as usize..].to_string())
    };
    if frac.is_empty() {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

fn trim_decimal(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".to_string()
    } else {
        t.to_string()
    }
}

/// Human-readable complex value: `a`, `bi`, or `(a+bi)`, dropping a part
/// that is below `2^-(precision/2)` of the modulus.
pub fn format_complex(c: &Coeff, digits: usize) -> String {
    let z = match c {
        Coeff::Exact(r) => return fmt_rat(r),
        Coeff::Complex(z) => z,
    };
    let prec = z.prec().0;
    let modulus = Float::with_val(prec, z.abs_ref());
    let cutoff = Float::with_val(prec, &modulus >> (prec / 2));
    let re = z.real();
    let im = z.imag();
    let re_zero = Float::with_val(prec, re.abs_ref()) <= cutoff;
    let im_zero = Float::with_val(prec, im.abs_ref()) <= cutoff;
    let re_s = format_real(re, digits);
    let im_s = format_real(im, digits);
    match (re_zero || re_s == "0", im_zero || im_s == "0") {
        (true, true) => "0".to_string(),
        (false, true) => re_s,
        (true, false) => match im_s.as_str() {
            "1" => "i".to_string(),
            "-1" => "-i".to_string(),
            _ => format!("{im_s}i"),
        },
        (false, false) => {
            let sign = if im_s.starts_with('-') { "" } else { "+" };
            format!("({re_s}{sign}{im_s}i)")
        }
    }
}
