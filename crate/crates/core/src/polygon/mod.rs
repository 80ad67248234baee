//! Newton polygon geometry over support points `(b, a)`: `b` is the
//! y-exponent, `a` the x-exponent. All arithmetic is exact.

mod svg;

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::field::{Rat, UniPoly};
use crate::mpoly::{Monomial, XYPoly};

pub use svg::polygon_svg;

/// A strictly negative-slope edge of the lower hull.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub start: Monomial,
    pub end: Monomial,
    /// Negative of the slope; the exponent increment of the next term.
    pub gamma: Rat,
    /// Intercept of the supporting line `a + gamma·b = beta` on the a-axis.
    pub beta: Rat,
    /// Horizontal extent `end.b - start.b`.
    pub span: u32,
}

impl Segment {
    fn between(start: &Monomial, end: &Monomial) -> Segment {
        let span = end.y - start.y;
        let gamma = Rat::from(&start.x - &end.x) / span;
        let beta = Rat::from(&start.x + Rat::from(&gamma * start.y));
        Segment {
            start: start.clone(),
            end: end.clone(),
            gamma,
            beta,
            span,
        }
    }

    pub fn slope(&self) -> Rat {
        Rat::from(-&self.gamma)
    }

    /// `a + gamma·b - beta` for a point: zero on the line, positive above.
    pub fn height(&self, p: &Monomial) -> Rat {
        Rat::from(&p.x + Rat::from(&self.gamma * p.y)) - &self.beta
    }
}

/// `(q - p) × (r - p)`; positive for a counter-clockwise turn.
fn cross(p: &Monomial, q: &Monomial, r: &Monomial) -> Rat {
    let (qb, rb) = (q.y as i64 - p.y as i64, r.y as i64 - p.y as i64);
    Rat::from(qb) * Rat::from(&r.x - &p.x) - Rat::from(&q.x - &p.x) * Rat::from(rb)
}

/// Vertices of the lower-left hull chain, sorted by increasing `b`, from
/// the point with minimal `b` (ties: minimal `a`) to the first point with
/// minimal `a`. Collinear interior points are not vertices.
pub fn newton_polygon(points: &[Monomial]) -> Vec<Monomial> {
    let mut sorted = points.to_vec();
    sorted.sort();
    sorted.dedup();
    let Some(min_a) = sorted.iter().map(|p| &p.x).min().cloned() else {
        return Vec::new();
    };

    let mut hull: Vec<Monomial> = Vec::new();
    for p in sorted {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &p).cmp0() != Ordering::Greater {
            hull.pop();
        }
        hull.push(p);
    }
    let stop = hull
        .iter()
        .position(|p| p.x == min_a)
        .expect("minimal point is a hull vertex");
    hull.truncate(stop + 1);
    hull
}

/// The strictly negative-slope edges of `chain` in chain order, so `gamma`
/// strictly decreases along the list.
pub fn expansion_segments(chain: &[Monomial]) -> Vec<Segment> {
    chain
        .windows(2)
        .filter(|w| w[1].y > w[0].y && w[1].x < w[0].x)
        .map(|w| Segment::between(&w[0], &w[1]))
        .collect()
}

/// Convenience: segments of the polygon of `f`.
pub fn segments_of(f: &XYPoly) -> Result<Vec<Segment>> {
    Ok(expansion_segments(&newton_polygon(&f.support_points()?)))
}

/// `φ(c) = Σ coeff(b,a)·c^b` over the support points of `f` on the line of
/// `seg`. Not divided by `c^start.b`: degree is `end.b`, order `start.b`.
pub fn characteristic_poly(f: &XYPoly, seg: &Segment) -> Result<UniPoly> {
    let backend = f.backend();
    let mut coeffs = vec![backend.zero(); seg.end.y as usize + 1];
    let mut hits = 0;
    for (m, c) in f.terms() {
        if seg.height(m).cmp0() == Ordering::Equal {
            if m.y < seg.start.y || m.y > seg.end.y {
                return Err(Error::EmptySegment);
            }
            coeffs[m.y as usize] = c.clone();
            hits += 1;
        }
    }
    let phi = UniPoly::new(coeffs);
    if hits < 2 || phi.order() != Some(seg.start.y as usize) || phi.degree() != Some(seg.end.y as usize) {
        return Err(Error::EmptySegment);
    }
    Ok(phi)
}
