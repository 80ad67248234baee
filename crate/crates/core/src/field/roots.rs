//! Complete root finding with multiplicities.
//!
//! The exact backend enumerates rational-root candidates (`±p/q` with `p`
//! dividing the constant and `q` the leading coefficient of the primitive
//! integer polynomial) and deflates by synthetic division. Whatever factor is
//! left without a rational root is reported as [`Error::NonRationalRoot`].
//!
//! The numeric backend runs Aberth–Ehrlich simultaneous iteration from
//! perturbed roots of unity scaled by the Cauchy bound, then groups the
//! approximations into clusters. A cluster of `m` roots is accepted when its
//! single-linkage diameter is at most `64 · tol^(2/m)` (relative to
//! `max(1, |z|)`): multiplicity-`m` roots of a polynomial with coefficients
//! perturbed by `tol²` spread over a disc of radius about `tol^(2/m)`. Each
//! cluster is replaced by its centroid, polished by Newton's method on the
//! `(m-1)`-th derivative.

use std::cmp::Ordering;

use rug::float::Constant;
use rug::{Complex, Float, Integer};

use super::coeff::{Backend, Coeff};
use super::rat::Rat;
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

/// A root together with its multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub value: Coeff,
    pub multiplicity: usize,
}

/// Default clustering tolerance `2^-(precision/2)`.
pub fn default_tolerance(precision: u32) -> Float {
    let mut t = Float::with_val(precision, 1);
    t >>= precision / 2;
    t
}

/// All roots of `p` with multiplicities summing to `deg p`.
///
/// The backend is taken from the coefficients: all-rational input is solved
/// exactly (and `tol` is ignored), anything else numerically. A
/// non-positive `tol` selects [`default_tolerance`].
pub fn find_roots(p: &UniPoly, tol: f64) -> Result<Vec<Root>> {
    let tol = match p.backend() {
        Backend::Numeric { precision } if tol > 0.0 => Some(Float::with_val(precision, tol)),
        _ => None,
    };
    find_roots_with(p, tol)
}

/// Like [`find_roots`] with the tolerance as a big float (`None` = default).
pub fn find_roots_with(p: &UniPoly, tol: Option<Float>) -> Result<Vec<Root>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    match p.backend() {
        Backend::Exact => exact_roots(p),
        Backend::Numeric { precision } => {
            let tol = tol.unwrap_or_else(|| default_tolerance(precision));
            numeric_roots(p, precision, &tol)
        }
    }
}

fn sort_roots(roots: &mut [Root]) {
    roots.sort_by(|a, b| a.value.sort_cmp(&b.value));
}

// ---------------------------------------------------------------------------
// exact backend

fn exact_roots(p: &UniPoly) -> Result<Vec<Root>> {
    let (mut rest, zero_mult) = p.strip_zero_roots();
    let mut roots = Vec::new();
    if zero_mult > 0 {
        roots.push(Root {
            value: Coeff::Exact(Rat::new()),
            multiplicity: zero_mult,
        });
    }

    let mut candidates: Option<Vec<Rat>> = None;
    while let Some(deg) = rest.degree().filter(|&d| d >= 1) {
        if deg == 1 {
            let c = rest.coeffs();
            push_root(&mut roots, -(&c[0] / &c[1]), 1);
            break;
        }
        let cands = candidates.get_or_insert_with(|| rational_candidates(&rest));
        let mut found = false;
        for cand in cands.iter() {
            let r = Coeff::Exact(cand.clone());
            let (quot, rem) = rest.deflate(&r);
            if rem.is_zero() {
                rest = quot;
                push_root(&mut roots, r, 1);
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::NonRationalRoot {
                factor: make_primitive(&rest),
                branch: None,
            });
        }
    }
    sort_roots(&mut roots);
    Ok(roots)
}

fn push_root(roots: &mut Vec<Root>, value: Coeff, mult: usize) {
    if let Some(r) = roots.iter_mut().find(|r| r.value == value) {
        r.multiplicity += mult;
    } else {
        roots.push(Root {
            value,
            multiplicity: mult,
        });
    }
}

/// Integer coefficients of `p` scaled to be primitive.
fn integer_coefficients(p: &UniPoly) -> Vec<Integer> {
    let rats: Vec<&Rat> = p.coeffs().iter().filter_map(Coeff::as_rat).collect();
    let den = super::rat::lcm_denominators(rats.iter().copied());
    let ints: Vec<Integer> = rats
        .iter()
        .map(|r| r.numer() * Integer::from(&den / r.denom()))
        .collect();
    let g = ints
        .iter()
        .fold(Integer::new(), |g, a| Integer::from(g.gcd_ref(a)));
    let sign = if ints.last().is_some_and(|l| l.cmp0() == Ordering::Less) {
        -1
    } else {
        1
    };
    let g = if g == 0 { Integer::from(1) } else { g * sign };
    ints.into_iter().map(|a| a / &g).collect()
}

fn make_primitive(p: &UniPoly) -> UniPoly {
    UniPoly::new(
        integer_coefficients(p)
            .into_iter()
            .map(|a| Coeff::Exact(Rat::from(a)))
            .collect(),
    )
}

/// Candidate rational roots of `p` (which has a nonzero constant term),
/// sorted and bounded by the Cauchy bound.
fn rational_candidates(p: &UniPoly) -> Vec<Rat> {
    let ints = integer_coefficients(p);
    let a0 = Integer::from(ints[0].abs_ref());
    let an = Integer::from(ints[ints.len() - 1].abs_ref());
    let bound = {
        let max = ints[..ints.len() - 1]
            .iter()
            .map(|a| Rat::from((Integer::from(a.abs_ref()), an.clone())))
            .max()
            .unwrap_or_default();
        max + 1u32
    };

    let mut out = Vec::new();
    match (divisors(&a0), divisors(&an)) {
        (Some(ps), Some(qs)) if ps.len().saturating_mul(qs.len()) <= 200_000 => {
            for num in &ps {
                for den in &qs {
                    let r = Rat::from((num.clone(), den.clone()));
                    if Rat::from(r.abs_ref()) <= bound {
                        out.push(Rat::from(-&r));
                        out.push(r);
                    }
                }
            }
        }
        _ => out = guided_candidates(&ints),
    }
    out.sort();
    out.dedup();
    out
}

/// Positive divisors of `n`, or `None` when `n` cannot be factored quickly.
fn divisors(n: &Integer) -> Option<Vec<Integer>> {
    let mut rest = n.clone();
    let mut factors: Vec<(Integer, u32)> = Vec::new();
    let mut d = 2u32;
    while d < (1 << 16) && Integer::from(d) * d <= rest {
        let mut k = 0;
        while rest.is_divisible_u(d) {
            rest /= d;
            k += 1;
        }
        if k > 0 {
            factors.push((Integer::from(d), k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        let trial_complete = Integer::from(d) * d > rest;
        if !trial_complete && rest.is_probably_prime(40) == rug::integer::IsPrime::No {
            return None;
        }
        factors.push((rest, 1));
    }
    let mut divs = vec![Integer::from(1)];
    for (prime, k) in factors {
        let mut next = Vec::with_capacity(divs.len() * (k as usize + 1));
        for d in &divs {
            let mut pw = Integer::from(1);
            for _ in 0..=k {
                next.push(Integer::from(d * &pw));
                pw *= &prime;
            }
        }
        divs = next;
        if divs.len() > 1_000_000 {
            return None;
        }
    }
    Some(divs)
}

/// Candidates from numeric approximations: a rational root `r` of a primitive
/// integer polynomial with leading coefficient `an` makes `an·r` an integer.
fn guided_candidates(ints: &[Integer]) -> Vec<Rat> {
    let bits = ints.iter().map(|a| a.significant_bits()).max().unwrap_or(1);
    let deg = (ints.len() - 1) as u32;
    let prec = 128 + 4 * deg * bits;
    let coeffs: Vec<Complex> = ints.iter().map(|a| Complex::with_val(prec, a)).collect();
    let an = ints[ints.len() - 1].clone();
    let mut out = Vec::new();
    if let Ok(approx) = aberth(&coeffs, prec) {
        for z in approx {
            let scaled = Float::with_val(prec, z.real() * &an);
            if let Some(k) = scaled.to_integer() {
                for delta in [-1, 0, 1] {
                    out.push(Rat::from((Integer::from(&k + delta), an.clone())));
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// numeric backend

fn numeric_roots(p: &UniPoly, precision: u32, tol: &Float) -> Result<Vec<Root>> {
    let (rest, zero_mult) = p.strip_zero_roots();
    let mut roots = Vec::new();
    if zero_mult > 0 {
        roots.push(Root {
            value: Backend::numeric(precision).zero(),
            multiplicity: zero_mult,
        });
    }
    let deg = rest.degree().unwrap_or(0);
    if deg == 0 {
        return Ok(roots);
    }
    let wp = precision + 32;
    let coeffs: Vec<Complex> = rest.coeffs().iter().map(|c| c.to_complex(wp)).collect();
    if deg == 1 {
        let r = -Complex::with_val(precision, &coeffs[0] / &coeffs[1]);
        roots.push(Root {
            value: Coeff::Complex(r),
            multiplicity: 1,
        });
        sort_roots(&mut roots);
        return Ok(roots);
    }

    let approx = aberth(&coeffs, wp).map_err(|_| Error::NoConvergence { precision })?;
    let tol = Float::with_val(wp, tol);
    for cluster in cluster_roots(&approx, &tol, wp) {
        let m = cluster.len();
        let mut centroid = Complex::with_val(wp, (0, 0));
        for &i in &cluster {
            centroid += &approx[i];
        }
        centroid /= m as u32;
        let polished = polish(&coeffs, centroid, m, &tol, wp);
        roots.push(Root {
            value: Coeff::Complex(Complex::with_val(precision, polished)),
            multiplicity: m,
        });
    }
    sort_roots(&mut roots);
    Ok(roots)
}

fn horner(coeffs: &[Complex], z: &Complex, wp: u32) -> Complex {
    let mut acc = Complex::with_val(wp, coeffs.last().unwrap());
    for c in coeffs.iter().rev().skip(1) {
        acc *= z;
        acc += c;
    }
    acc
}

fn derivative(coeffs: &[Complex], wp: u32) -> Vec<Complex> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| Complex::with_val(wp, c * k as u32))
        .collect()
}

fn abs(z: &Complex, wp: u32) -> Float {
    Float::with_val(wp, z.abs_ref())
}

/// `Σ |a_k| |z|^k`, the scale for backward-error tests.
fn absolute_scale(coeffs: &[Complex], z: &Complex, wp: u32) -> Float {
    let r = abs(z, wp);
    let mut acc = abs(coeffs.last().unwrap(), wp);
    for c in coeffs.iter().rev().skip(1) {
        acc *= &r;
        acc += abs(c, wp);
    }
    acc
}

/// Aberth–Ehrlich iteration. A root is frozen once `|p(z)|` reaches the
/// rounding level of its evaluation; multiple roots stall there.
pub(crate) fn aberth(coeffs: &[Complex], wp: u32) -> std::result::Result<Vec<Complex>, ()> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].clone();
    let monic: Vec<Complex> = coeffs.iter().map(|c| Complex::with_val(wp, c / &lead)).collect();
    let dmonic = derivative(&monic, wp);

    let mut cauchy = Float::with_val(wp, 0);
    for c in &monic[..n] {
        let a = abs(c, wp);
        if a > cauchy {
            cauchy = a;
        }
    }
    cauchy += 1;

    let two_pi = Float::with_val(wp, Constant::Pi) * 2u32;
    let mut z: Vec<Complex> = (0..n)
        .map(|k| {
            let angle = Float::with_val(wp, &two_pi * k as u32) / n as u32 + 0.4f64;
            let radius = Float::with_val(wp, &cauchy * (1.0 + 0.01 * k as f64));
            let re = Float::with_val(wp, angle.cos_ref()) * &radius;
            let im = Float::with_val(wp, angle.sin_ref()) * &radius;
            Complex::with_val(wp, (re, im))
        })
        .collect();

    let mut frozen = vec![false; n];
    let mut rounding = Float::with_val(wp, 1);
    rounding >>= wp.saturating_sub(16);
    let mut step_floor = Float::with_val(wp, 1);
    step_floor >>= wp.saturating_sub(8);
    let max_iter = 200 + 4 * wp as usize;

    for _ in 0..max_iter {
        if frozen.iter().all(|&f| f) {
            return Ok(z);
        }
        for k in 0..n {
            if frozen[k] {
                continue;
            }
            let pz = horner(&monic, &z[k], wp);
            let scale = absolute_scale(&monic, &z[k], wp);
            if abs(&pz, wp) <= Float::with_val(wp, &scale * &rounding) {
                frozen[k] = true;
                continue;
            }
            let dpz = horner(&dmonic, &z[k], wp);
            let ratio = Complex::with_val(wp, &pz / &dpz);
            let mut sum = Complex::with_val(wp, (0, 0));
            for j in 0..n {
                if j != k {
                    let diff = Complex::with_val(wp, &z[k] - &z[j]);
                    if !(diff.real().is_zero() && diff.imag().is_zero()) {
                        sum += Complex::with_val(wp, diff.recip_ref());
                    }
                }
            }
            let denom = Complex::with_val(wp, 1 - Complex::with_val(wp, &ratio * &sum));
            let w = Complex::with_val(wp, &ratio / &denom);
            if !w.real().is_finite() || !w.imag().is_finite() {
                return Err(());
            }
            let size = abs(&z[k], wp).max(&Float::with_val(wp, 1));
            if abs(&w, wp) <= Float::with_val(wp, &size * &step_floor) {
                frozen[k] = true;
            }
            z[k] -= w;
        }
    }
    Err(())
}

/// Cluster radius for multiplicity `m`: `64 · tol^(2/m)`.
fn cluster_radius(tol: &Float, m: usize, wp: u32) -> Float {
    let ln = Float::with_val(wp, tol.ln_ref()) * 2u32 / m as u32;
    Float::with_val(wp, ln.exp_ref()) * 64u32
}

struct Node {
    children: Option<(usize, usize)>,
    leaves: Vec<usize>,
    height: Float,
}

/// Single-linkage dendrogram cut top-down: a subtree of size `m` whose
/// merge height is within the radius for `m` becomes one cluster.
fn cluster_roots(z: &[Complex], tol: &Float, wp: u32) -> Vec<Vec<usize>> {
    let n = z.len();
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let scale = abs(&z[i], wp).max(&abs(&z[j], wp)).max(&Float::with_val(wp, 1));
            let d = abs(&Complex::with_val(wp, &z[i] - &z[j]), wp) / scale;
            pairs.push((d, i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal).then((a.1, a.2).cmp(&(b.1, b.2))));

    let mut nodes: Vec<Node> = (0..n)
        .map(|i| Node {
            children: None,
            leaves: vec![i],
            height: Float::with_val(wp, 0),
        })
        .collect();
    let mut owner: Vec<usize> = (0..n).collect();
    for (d, i, j) in pairs {
        let (a, b) = (owner[i], owner[j]);
        if a == b {
            continue;
        }
        let mut leaves = nodes[a].leaves.clone();
        leaves.extend_from_slice(&nodes[b].leaves);
        let id = nodes.len();
        for &l in &leaves {
            owner[l] = id;
        }
        nodes.push(Node {
            children: Some((a, b)),
            leaves,
            height: d,
        });
    }

    let mut clusters = Vec::new();
    let mut stack = vec![nodes.len() - 1];
    while let Some(id) = stack.pop() {
        let node = &nodes[id];
        let m = node.leaves.len();
        if m == 1 || node.height <= cluster_radius(tol, m, wp) {
            let mut leaves = node.leaves.clone();
            leaves.sort_unstable();
            clusters.push(leaves);
        } else if let Some((a, b)) = node.children {
            stack.push(a);
            stack.push(b);
        }
    }
    clusters.sort();
    clusters
}

/// Newton's method on the `(m-1)`-th derivative, which has a simple root at
/// a root of multiplicity `m`. Rejected if it leaves the cluster disc.
fn polish(coeffs: &[Complex], start: Complex, m: usize, tol: &Float, wp: u32) -> Complex {
    let mut q = coeffs.to_vec();
    for _ in 1..m {
        q = derivative(&q, wp);
    }
    let dq = derivative(&q, wp);
    let limit = Float::with_val(wp, cluster_radius(tol, m.max(2), wp) * abs(&start, wp).max(&Float::with_val(wp, 1)));
    let mut z = start.clone();
    let mut last_step: Option<Float> = None;
    for _ in 0..16 {
        let d = horner(&dq, &z, wp);
        if d.real().is_zero() && d.imag().is_zero() {
            break;
        }
        let step = Complex::with_val(wp, horner(&q, &z, wp) / &d);
        let size = abs(&step, wp);
        if let Some(prev) = &last_step {
            if size >= *prev {
                break;
            }
        }
        z -= &step;
        if size.is_zero() {
            break;
        }
        last_step = Some(size);
    }
    if abs(&Complex::with_val(wp, &z - &start), wp) <= limit {
        z
    } else {
        start
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat::rat;

    fn ex(v: &[(i64, i64)]) -> UniPoly {
        UniPoly::new(v.iter().map(|&(p, q)| Coeff::Exact(rat(p, q))).collect())
    }

    fn num(b: Backend, v: &[i64]) -> UniPoly {
        UniPoly::new(v.iter().map(|&a| b.from_int(a)).collect())
    }

    #[test]
    fn characteristic_of_example_one() {
        // c(1+2c)^2
        let roots = find_roots(&ex(&[(0, 1), (1, 1), (4, 1), (4, 1)]), 0.0).unwrap();
        assert_eq!(
            roots,
            vec![
                Root { value: Coeff::Exact(rat(-1, 2)), multiplicity: 2 },
                Root { value: Coeff::Exact(rat(0, 1)), multiplicity: 1 },
            ]
        );
    }

    #[test]
    fn linear_exact() {
        let roots = find_roots(&ex(&[(-5, 1), (1, 1)]), 0.0).unwrap();
        assert_eq!(roots, vec![Root { value: Coeff::Exact(rat(5, 1)), multiplicity: 1 }]);
    }

    #[test]
    fn irrational_factor_is_reported() {
        // (c - 3)(2c^2 + 1)
        let p = ex(&[(-3, 1), (1, 1), (-6, 1), (2, 1)]);
        match find_roots(&p, 0.0) {
            Err(Error::NonRationalRoot { factor, .. }) => assert_eq!(factor, ex(&[(1, 1), (0, 1), (2, 1)])),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_polynomial() {
        assert!(matches!(find_roots(&UniPoly::zero(), 0.0), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn cube_roots_of_eight() {
        let b = Backend::numeric(256);
        let p = num(b, &[8, 0, 0, -1]);
        let roots = find_roots(&p, 1e-20).unwrap();
        assert_eq!(roots.len(), 3);
        let sqrt3 = 3f64.sqrt();
        let expected = [(-1.0, -sqrt3), (-1.0, sqrt3), (2.0, 0.0)];
        for (r, (re, im)) in roots.iter().zip(expected) {
            assert_eq!(r.multiplicity, 1);
            let (a, b) = r.value.to_f64_parts();
            assert!((a - re).abs() < 1e-14 && (b - im).abs() < 1e-14, "{a} {b}");
        }
    }

    #[test]
    fn numeric_multiple_roots_cluster() {
        let b = Backend::numeric(256);
        // (c+1)^2 (c-3)^3 (c - 1/3)
        let p = UniPoly::from_roots(
            b,
            &[(b.from_int(-1), 2), (b.from_int(3), 3), (b.from_rat(&rat(1, 3)), 1)],
        );
        let roots = find_roots(&p, 0.0).unwrap();
        let got: Vec<(f64, usize)> = roots.iter().map(|r| (r.value.to_f64_parts().0, r.multiplicity)).collect();
        assert_eq!(got.len(), 3);
        assert_eq!(got[0], (-1.0, 2));
        assert!((got[1].0 - 1.0 / 3.0).abs() < 1e-15 && got[1].1 == 1);
        assert_eq!(got[2], (3.0, 3));
    }

    #[test]
    fn huge_coefficients_fall_back_to_guided_candidates() {
        // (c - p/q)(c^2 + 1) with p, q products of two large primes each
        let p = Integer::from(1_000_000_007u64) * Integer::from(998_244_353u64);
        let q = Integer::from(1_000_000_009u64) * Integer::from(754_974_721u64);
        let r = Rat::from((p, q));
        let lin = UniPoly::new(vec![Coeff::Exact(Rat::from(-&r)), Coeff::Exact(Rat::from(1))]);
        let quad = ex(&[(1, 1), (0, 1), (1, 1)]);
        let poly = lin.mul(&lin).mul(&quad);
        match find_roots(&poly, 0.0) {
            Err(Error::NonRationalRoot { factor, .. }) => assert_eq!(factor, quad),
            other => panic!("unexpected {other:?}"),
        }
        let roots = find_roots(&lin.mul(&lin), 0.0).unwrap();
        assert_eq!(roots, vec![Root { value: Coeff::Exact(r), multiplicity: 2 }]);
    }
}
