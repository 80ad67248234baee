//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero when any
//! criterion fails.

use std::panic;
use std::process::{Command, ExitCode};

use puiseux::engine::{expand_all, ExpandOptions, Expansion, PuiseuxSeries};
use puiseux::field::rat::{int, rat};
use puiseux::field::{Backend, Coeff, Rat};
use puiseux::mpoly::{parse_poly, Monomial, XYPoly};
use puiseux::polygon::{characteristic_poly, segments_of};
use puiseux::verify::{is_monotone, numeric_residual_slope_with, oracle_expand, prefix_valuations, residual_valuation, Valuation, DEFAULT_SAMPLES};
use puiseux::Error;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rug::{Complex, Float};

const EX1: &str = "2x^4+x^2y+4xy^2+4y^3";
const EX2: &str = "x^5+8x^4-2x^2y^2-y^3+2y^4";
const EX3: &str = "y^2+2x^2y+x^4+x^2y^2+xy^3+1/4y^4+x^4y+x^3y^2-1/2xy^4-1/2y^5";
const PREC: u32 = 256;
const TIGHT: f64 = 1e-30;

type Check = fn() -> Result<String, String>;

fn main() -> ExitCode {
    let criteria: [(&str, Check); 10] = [
        ("example one regular branch", c1_regular_branch),
        ("example one full run", c2_full_run),
        ("example two numeric branches", c3_example_two),
        ("example three split", c4_example_three),
        ("residual monotonicity", c5_monotone),
        ("span accounting", c6_span),
        ("fast path equivalence", c7_fast_path),
        ("numeric slope", c8_slope),
        ("parser round trip", c9_round_trip),
        ("determinism", c10_determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(check).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn exact(s: &str) -> XYPoly {
    parse_poly(s, Backend::Exact).unwrap()
}

fn numeric(s: &str) -> XYPoly {
    parse_poly(s, Backend::numeric(PREC)).unwrap()
}

fn expand(f: &XYPoly, terms: usize) -> Result<Expansion, String> {
    let opts = ExpandOptions {
        max_terms: terms,
        backend: f.backend(),
        ..Default::default()
    };
    expand_all(f, &opts).map_err(|e| e.to_string())
}

fn pairs(s: &PuiseuxSeries) -> Vec<(Rat, Rat)> {
    s.terms
        .iter()
        .map(|t| (t.exponent.clone(), t.coeff.as_rat().expect("exact coefficient").clone()))
        .collect()
}

fn complex(re: f64, im: f64) -> Complex {
    Complex::with_val(PREC, (re, im))
}

fn sqrt(v: u32) -> Float {
    Float::with_val(PREC, v).sqrt()
}

/// `|got - want| / max(|want|, tiny)`.
fn rel_error(got: &Coeff, want: &Complex) -> f64 {
    let diff = Complex::with_val(PREC, &got.to_complex(PREC) - want);
    let d = Float::with_val(PREC, diff.abs_ref());
    let w = Float::with_val(PREC, want.abs_ref());
    if w.is_zero() {
        d.to_f64()
    } else {
        (d / w).to_f64()
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1_regular_branch() -> Result<String, String> {
    let f = exact(EX1);
    let e = expand(&f, 5)?;
    let b = e
        .branches
        .iter()
        .find(|b| b.terms[0].exponent == int(2))
        .ok_or("no branch starting at x^2")?;
    let want = [(2, -2), (3, -16), (4, -224), (5, -3840), (6, -73216)];
    let want: Vec<(Rat, Rat)> = want.iter().map(|&(e, c)| (int(e), int(c))).collect();
    ensure(pairs(b) == want, || format!("got {:?}", pairs(b)))?;
    // -73216, not -39504: the oracle settles the x^6 coefficient
    let o = oracle_expand(&f, &b.terms[..1], 5).map_err(|e| e.to_string())?;
    ensure(pairs(&o) == want, || format!("oracle gives {:?}", pairs(&o)))?;
    Ok("-2, -16, -224, -3840 and oracle value -73216 at x^6".into())
}

fn c2_full_run() -> Result<String, String> {
    let f = exact(EX1);
    let e = expand(&f, 5)?;
    ensure(e.branches.len() == 3 && e.branch_count() == 3, || {
        format!("{} branches, count {}", e.branches.len(), e.branch_count())
    })?;
    for sign in [-1, 1] {
        let want = vec![
            (int(1), rat(-1, 2)),
            (rat(3, 2), int(sign)),
            (int(2), int(1)),
            (rat(5, 2), rat(5 * sign, 2)),
            (int(3), int(8)),
        ];
        let b = e
            .branches
            .iter()
            .find(|b| b.terms.len() > 1 && b.terms[1].coeff == Coeff::Exact(int(sign)))
            .ok_or("missing gamma 1 branch")?;
        ensure(pairs(b) == want, || format!("got {:?}", pairs(b)))?;
        let o = oracle_expand(&f, &b.terms[..2], 5).map_err(|e| e.to_string())?;
        ensure(pairs(&o) == want, || format!("oracle gives {:?}", pairs(&o)))?;
    }
    Ok("3 branches; -1/2x ± x^(3/2) + x^2 ± 5/2x^(5/2) + 8x^3 match the oracle".into())
}

fn c3_example_two() -> Result<String, String> {
    let f = numeric(EX2);
    let e = expand(&f, 5)?;
    ensure(e.branches.len() == 3, || format!("{} branches", e.branches.len()))?;
    let real = e
        .branches
        .iter()
        .find(|b| rel_error(&b.terms[0].coeff, &complex(2.0, 0.0)) < TIGHT)
        .ok_or("no branch with leading coefficient 2")?;
    // target series as stated, including its sign at x^(10/3)
    let want = [
        (rat(4, 3), rat(2, 1)),
        (int(2), rat(-2, 3)),
        (rat(7, 3), rat(1, 12)),
        (rat(8, 3), rat(26, 9)),
        (rat(10, 3), rat(9353, 2592)),
    ];
    let mut bad = Vec::new();
    for (i, (exp, c)) in want.iter().enumerate() {
        let t = real.terms.get(i).ok_or("real branch too short")?;
        let target = Complex::with_val(PREC, c);
        let err = rel_error(&t.coeff, &target);
        if t.exponent != *exp || err > TIGHT {
            bad.push(format!("x^({}) got {} want {} (relative error {err:.3e})", t.exponent, t.coeff, c));
        }
    }
    let root3 = sqrt(3);
    for sign in [-1, 1] {
        let target = Complex::with_val(PREC, (-1, Float::with_val(PREC, &root3 * sign)));
        let hit = e.branches.iter().any(|b| rel_error(&b.terms[0].coeff, &target) < TIGHT);
        if !hit {
            bad.push(format!("no branch led by -1{}i sqrt 3", if sign < 0 { "-" } else { "+" }));
        }
    }
    if bad.is_empty() {
        Ok("real series and -1 ± i sqrt 3 leads within 1e-30".into())
    } else {
        Err(bad.join("; "))
    }
}

fn c4_example_three() -> Result<String, String> {
    let f = numeric(EX3);
    let e = expand(&f, 5)?;
    ensure(e.branches.len() == 2 && e.branch_count() == 2, || format!("{} branches", e.branches.len()))?;
    let (a, b) = (&e.branches[0], &e.branches[1]);
    let shared = [(int(2), rat(-1, 1)), (int(4), rat(1, 2)), (int(5), rat(-1, 2))];
    for (i, (exp, c)) in shared.iter().enumerate() {
        let (ta, tb) = (&a.terms[i], &b.terms[i]);
        ensure(ta == tb, || format!("branches differ at term {i}"))?;
        let err = rel_error(&ta.coeff, &Complex::with_val(PREC, c));
        ensure(ta.exponent == *exp && err <= TIGHT, || format!("term {i}: {}x^({})", ta.coeff, ta.exponent))?;
    }
    let half_root2 = Float::with_val(PREC, sqrt(2) / 2u32);
    let mut split = Vec::new();
    for s in [a, b] {
        let t = &s.terms[3];
        ensure(t.exponent == rat(11, 2), || format!("fourth exponent {}", t.exponent))?;
        split.push(t.coeff.clone());
    }
    ensure(split[0] != split[1], || "no split at 11/2".into())?;
    for sign in [-1, 1] {
        let target = Complex::with_val(PREC, (0, Float::with_val(PREC, &half_root2 * sign)));
        ensure(split.iter().any(|c| rel_error(c, &target) <= TIGHT), || {
            format!("no coefficient near {}(sqrt 2/2)i at x^(11/2)", if sign < 0 { "-" } else { "+" })
        })?;
    }
    Ok("shared -x^2 + 1/2x^4 - 1/2x^5, split at 11/2 with ±(sqrt 2/2)i".into())
}

/// Seeded polynomials of up to six terms of total degree at most 4
/// with integer coefficients in [-5, 5], vanishing at the origin.
fn random_corpus(count: usize) -> Vec<XYPoly> {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(1..=6);
        let terms: Vec<(Monomial, Coeff)> = (0..n)
            .map(|_| {
                let b = rng.gen_range(0..=4u32);
                let a = rng.gen_range(0..=4 - b as i64);
                let c = rng.gen_range(-5..=5i64);
                (Monomial::new(b, int(a)), Coeff::Exact(int(c)))
            })
            .filter(|(m, _)| !(m.y == 0 && m.x == 0))
            .collect();
        let f = XYPoly::from_terms(Backend::Exact, terms);
        if !f.is_zero() && f.degree_y() > 0 {
            out.push(f);
        }
    }
    out
}

/// Exact expansion, or numeric when some root is irrational.
fn expand_any(f: &XYPoly, terms: usize) -> Result<(XYPoly, Expansion), String> {
    let opts = ExpandOptions {
        max_terms: terms,
        ..Default::default()
    };
    match expand_all(f, &opts) {
        Ok(e) => Ok((f.clone(), e)),
        Err(Error::NonRationalRoot { .. }) => {
            let g = f.to_backend(Backend::numeric(PREC));
            let e = expand(&g, terms)?;
            Ok((g, e))
        }
        Err(e) => Err(format!("{f}: {e}")),
    }
}

fn examples() -> Vec<(XYPoly, Expansion)> {
    vec![
        (exact(EX1), expand(&exact(EX1), 5).unwrap()),
        (numeric(EX2), expand(&numeric(EX2), 5).unwrap()),
        (numeric(EX3), expand(&numeric(EX3), 5).unwrap()),
    ]
}

fn c5_monotone() -> Result<String, String> {
    let mut cases = examples();
    for f in random_corpus(200) {
        cases.push(expand_any(&f, 5)?);
    }
    let mut branches = 0;
    for (f, e) in &cases {
        for b in &e.branches {
            branches += 1;
            let v = prefix_valuations(f, b);
            ensure(is_monotone(b, &v), || {
                let v: Vec<String> = v.iter().map(|v| v.to_string()).collect();
                format!("{f}: {} has residual orders {}", b.render(puiseux::mpoly::Style::Plain, 12), v.join(", "))
            })?;
        }
    }
    Ok(format!("{branches} branches over {} polynomials", cases.len()))
}

fn c6_span() -> Result<String, String> {
    let mut cases = examples();
    for f in random_corpus(200) {
        cases.push(expand_any(&f, 5)?);
    }
    let mut with_y_factor = 0;
    for (f, e) in &cases {
        let segs = segments_of(f).map_err(|e| e.to_string())?;
        let span: u32 = segs.iter().map(|s| s.span).sum();
        // y = 0 branches of a y^k factor lie off the polygon's segments
        let k = f.y_multiplicity().map_err(|e| e.to_string())?;
        with_y_factor += usize::from(k > 0);
        ensure(e.branch_count() == span + k, || format!("{f}: {} branches, span {span}, y^{k}", e.branch_count()))?;
        for s in &segs {
            let phi = characteristic_poly(f, s).map_err(|e| e.to_string())?;
            let spread = phi.degree().unwrap_or(0) - phi.order().unwrap_or(0);
            ensure(spread == s.span as usize, || format!("{f}: phi {phi} spread {spread}, span {}", s.span))?;
        }
    }
    Ok(format!("{} polynomials, {with_y_factor} with a y factor", cases.len()))
}

fn c7_fast_path() -> Result<String, String> {
    let f = exact(EX1);
    let run = |fast_path| {
        expand_all(
            &f,
            &ExpandOptions {
                max_terms: 8,
                fast_path,
                ..Default::default()
            },
        )
        .map(|e| e.branches)
        .map_err(|e| e.to_string())
    };
    let (on, off) = (run(true)?, run(false)?);
    ensure(on == off, || format!("fast {on:?} vs slow {off:?}"))?;
    Ok(format!("{} identical branches of 8 terms", on.len()))
}

fn c8_slope() -> Result<String, String> {
    let mut bad = Vec::new();
    let mut count = 0;
    for (name, (f, e)) in ["ex1", "ex2", "ex3"].iter().zip(examples()) {
        for (i, b) in e.branches.iter().enumerate() {
            count += 1;
            let v = match residual_valuation(&f, b) {
                Valuation::Finite(v) => v.to_f64(),
                Valuation::Infinite => {
                    bad.push(format!("{name} branch {}: exact", i + 1));
                    continue;
                }
            };
            let m = numeric_residual_slope_with(&f, b, &DEFAULT_SAMPLES, PREC).map_err(|e| e.to_string())?;
            let err = (m - v).abs() / v;
            if err > 0.05 {
                bad.push(format!("{name} branch {}: slope {m:.4} vs order {v:.4} ({:.1}%)", i + 1, err * 100.0));
            }
        }
    }
    if bad.is_empty() {
        Ok(format!("{count} branches within 5%"))
    } else {
        Err(bad.join("; "))
    }
}

fn c9_round_trip() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(9);
    for _ in 0..1000 {
        let n = rng.gen_range(0..8);
        let terms = (0..n).map(|_| {
            let m = Monomial::new(rng.gen_range(0..5), rat(rng.gen_range(0..7), rng.gen_range(1..5)));
            (m, Coeff::Exact(rat(rng.gen_range(-9..10), rng.gen_range(1..6))))
        });
        let f = XYPoly::from_terms(Backend::Exact, terms.collect::<Vec<_>>());
        let text = f.to_string();
        let back = parse_poly(&text, Backend::Exact).map_err(|e| format!("{text}: {e}"))?;
        ensure(back == f, || format!("{text} parsed as {back}"))?;
    }
    let table = |ts: &[(u32, i64, Rat)]| {
        XYPoly::from_terms(
            Backend::Exact,
            ts.iter().map(|(b, a, c)| (Monomial::new(*b, int(*a)), Coeff::Exact(c.clone()))).collect::<Vec<_>>(),
        )
    };
    let ex1 = table(&[(0, 4, int(2)), (1, 2, int(1)), (2, 1, int(4)), (3, 0, int(4))]);
    let ex2 = table(&[(0, 5, int(1)), (0, 4, int(8)), (2, 2, int(-2)), (3, 0, int(-1)), (4, 0, int(2))]);
    let ex3 = table(&[
        (2, 0, int(1)),
        (1, 2, int(2)),
        (0, 4, int(1)),
        (2, 2, int(1)),
        (3, 1, int(1)),
        (4, 0, rat(1, 4)),
        (1, 4, int(1)),
        (2, 3, int(1)),
        (4, 1, rat(-1, 2)),
        (5, 0, rat(-1, 2)),
    ]);
    for (src, want) in [(EX1, ex1), (EX2, ex2), (EX3, ex3)] {
        let got = exact(src);
        ensure(got == want, || format!("{src} parsed as {got}"))?;
    }
    Ok("1000 random polynomials and the three example inputs".into())
}

fn c10_determinism() -> Result<String, String> {
    let bin = env!("CARGO_BIN_EXE_puiseux");
    let run = |poly: &str, backend: &str, parallel: bool| -> Result<Vec<u8>, String> {
        let mut cmd = Command::new(bin);
        cmd.args(["expand", poly, "--format", "json", "--backend", backend]);
        if parallel {
            cmd.arg("--parallel");
        }
        let out = cmd.env_remove("PUISEUX_PRECISION").output().map_err(|e| e.to_string())?;
        ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
        Ok(out.stdout)
    };
    for (poly, backend) in [(EX1, "exact"), (EX2, "numeric"), (EX3, "numeric")] {
        let first = run(poly, backend, false)?;
        for parallel in [false, true, true] {
            ensure(run(poly, backend, parallel)? == first, || format!("{poly} output changed (parallel {parallel})"))?;
        }
    }
    Ok("byte-identical JSON across serial and parallel runs".into())
}
