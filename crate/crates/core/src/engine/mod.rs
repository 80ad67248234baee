//! The expansion loop: a depth-first branch tree over (segment, root)
//! choices, each edge one shift-substitution.

mod regular;
mod series;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{find_roots, Backend, Coeff, Rat, Root};
use crate::mpoly::{Monomial, XYPoly};
use crate::polygon::{characteristic_poly, newton_polygon, segments_of, Segment};

pub use regular::regular_tail;
pub use series::{PuiseuxSeries, Term};

use regular::{regular_pivot, RegularSolver};

/// One node of the branch tree.
///
/// `current` is the iterate obtained from the input by shifting along
/// `accumulated`; `exponent_offset` is the last accumulated exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionState {
    pub current: XYPoly,
    pub accumulated: Vec<Term>,
    pub exponent_offset: Rat,
    pub depth: u32,
    /// Number of branches (with multiplicity) the node still represents.
    pub multiplicity: u32,
}

impl ExpansionState {
    pub fn initial(f: XYPoly) -> Self {
        ExpansionState {
            multiplicity: f.degree_y(),
            current: f,
            accumulated: Vec::new(),
            exponent_offset: Rat::new(),
            depth: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpandOptions {
    /// Terms per branch.
    pub max_terms: usize,
    /// Shift-substitutions per branch.
    pub max_depth: u32,
    pub backend: Backend,
    /// Solve regular tails by undetermined coefficients instead of one
    /// substitution per term. Results are identical in the exact backend.
    pub fast_path: bool,
    pub parallel: bool,
    /// Keep the polygon of every visited iterate in [`Expansion::snapshots`].
    pub record_polygons: bool,
}

impl Default for ExpandOptions {
    fn default() -> Self {
        ExpandOptions {
            max_terms: 8,
            max_depth: 32,
            backend: Backend::Exact,
            fast_path: true,
            parallel: false,
            record_polygons: false,
        }
    }
}

impl ExpandOptions {
    pub fn validate(&self) -> Result<()> {
        if self.max_terms == 0 {
            return Err(Error::InvalidArgument("max_terms must be at least 1".into()));
        }
        if self.max_depth == 0 {
            return Err(Error::InvalidArgument("max_depth must be at least 1".into()));
        }
        if let Some(p) = self.backend.precision() {
            if p < Backend::MIN_PRECISION {
                return Err(Error::InvalidArgument(format!(
                    "precision must be at least {} bits",
                    Backend::MIN_PRECISION
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    Continue,
    ExactSolution,
    TermBudgetReached,
    NoSegment,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagnosticKind {
    Step,
    ExactSplit,
    Budget,
    RegularTail,
    NoSegment,
    NotThroughOrigin,
}

/// One event of the branch tree walk, in exploration order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub branch: String,
    pub depth: u32,
    pub kind: DiagnosticKind,
    pub detail: String,
}

/// Support points and hull chain of one visited iterate.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub branch: String,
    pub depth: u32,
    pub points: Vec<Monomial>,
    pub chain: Vec<Monomial>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Expansion {
    pub branches: Vec<PuiseuxSeries>,
    pub diagnostics: Vec<Diagnostic>,
    pub snapshots: Vec<Snapshot>,
}

impl Expansion {
    fn append(&mut self, other: Expansion) {
        self.branches.extend(other.branches);
        self.diagnostics.extend(other.diagnostics);
        self.snapshots.extend(other.snapshots);
    }

    fn note(&mut self, branch: &str, depth: u32, kind: DiagnosticKind, detail: String) {
        self.diagnostics.push(Diagnostic {
            branch: branch.to_string(),
            depth,
            kind,
            detail,
        });
    }

    /// Branch count with multiplicity.
    pub fn branch_count(&self) -> u32 {
        self.branches.iter().map(|b| b.multiplicity).sum()
    }
}

/// Appends `(offset + γ, c)` and replaces the iterate by
/// `x^-β · current(x, x^γ(c + y))`.
pub fn expand_step(state: &ExpansionState, seg: &Segment, root: &Root) -> Result<ExpansionState> {
    let current = state.current.shift_substitute(&seg.gamma, &root.value, &seg.beta)?;
    let exponent = Rat::from(&state.exponent_offset + &seg.gamma);
    let mut accumulated = state.accumulated.clone();
    accumulated.push(Term::new(exponent.clone(), root.value.clone()));
    Ok(ExpansionState {
        current,
        accumulated,
        exponent_offset: exponent,
        depth: state.depth + 1,
        multiplicity: root.multiplicity as u32,
    })
}

pub fn detect_termination(state: &ExpansionState, opts: &ExpandOptions) -> Termination {
    if state.current.pure_x_part().is_zero() {
        return Termination::ExactSolution;
    }
    if state.accumulated.len() >= opts.max_terms || state.depth >= opts.max_depth {
        return Termination::TermBudgetReached;
    }
    match segments_of(&state.current) {
        Ok(segs) if !segs.is_empty() => Termination::Continue,
        _ => Termination::NoSegment,
    }
}

/// All branches of `f = 0` through the origin, expanded to the budget in
/// `opts`, sorted by [`PuiseuxSeries::sort_cmp`].
///
/// A factor `y^k` of any iterate yields an exact branch of multiplicity
/// `k` before the cofactor is expanded further. Inputs with a nonzero
/// constant term have no such branches.
pub fn expand_all(f: &XYPoly, opts: &ExpandOptions) -> Result<Expansion> {
    opts.validate()?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let f = f.to_backend(opts.backend);
    let mut out = if f.has_constant_term() {
        let mut e = Expansion::default();
        e.note("1", 0, DiagnosticKind::NotThroughOrigin, "f(0,0) != 0".into());
        e
    } else {
        Walker { opts }.explore(ExpansionState::initial(f), "1".to_string())?
    };
    out.branches.sort_by(PuiseuxSeries::sort_cmp);
    Ok(out)
}

struct Walker<'a> {
    opts: &'a ExpandOptions,
}

impl Walker<'_> {
    fn explore(&self, mut state: ExpansionState, id: String) -> Result<Expansion> {
        let mut out = Expansion::default();
        let depth = state.depth;
        if self.opts.record_polygons {
            let points = state.current.support_points()?;
            let chain = newton_polygon(&points);
            out.snapshots.push(Snapshot {
                branch: id.clone(),
                depth,
                points,
                chain,
            });
        }

        if detect_termination(&state, self.opts) == Termination::ExactSolution {
            let k = state.current.y_multiplicity()?;
            out.branches
                .push(PuiseuxSeries::new(state.accumulated.clone(), None, k));
            out.note(&format!("{id}.0"), depth, DiagnosticKind::ExactSplit, format!("y^{k} divides the iterate"));
            state.current = state.current.div_y_pow(k);
            state.multiplicity = state.multiplicity.saturating_sub(k);
            if state.current.has_constant_term() {
                return Ok(out);
            }
        }

        let segs = segments_of(&state.current)?;
        if segs.is_empty() {
            if depth == 0 {
                out.note(&id, depth, DiagnosticKind::NoSegment, "no negative-slope segment".into());
                return Ok(out);
            }
            return Err(Error::InconsistentState { branch: id });
        }
        let span: u32 = segs.iter().map(|s| s.span).sum();

        if detect_termination(&state, self.opts) == Termination::TermBudgetReached {
            let min_gamma = segs.iter().map(|s| &s.gamma).min().expect("nonempty");
            let order = Rat::from(&state.exponent_offset + min_gamma);
            out.branches
                .push(PuiseuxSeries::new(state.accumulated, Some(order.clone()), span));
            out.note(&id, depth, DiagnosticKind::Budget, format!("truncated at O(x^{order})"));
            return Ok(out);
        }

        if self.opts.fast_path {
            if let Some(pivot) = regular_pivot(&state.current, &segs) {
                self.regular_leaf(&state, pivot, &id, &mut out);
                return Ok(out);
            }
        }

        let mut children = Vec::new();
        for seg in segs.iter().rev() {
            let phi = characteristic_poly(&state.current, seg)?;
            let (reduced, _) = phi.strip_zero_roots();
            let mut roots = find_roots(&reduced, 0.0).map_err(|e| match e {
                Error::NonRationalRoot { factor, .. } => Error::NonRationalRoot {
                    factor,
                    branch: Some(id.clone()),
                },
                other => other,
            })?;
            roots.sort_by(|a, b| a.value.sort_cmp(&b.value));
            for root in roots {
                let n = children.len() + 1;
                out.note(
                    &format!("{id}.{n}"),
                    depth,
                    DiagnosticKind::Step,
                    format!(
                        "gamma={} beta={} phi={} root={} multiplicity={}",
                        seg.gamma, seg.beta, phi, root.value, root.multiplicity
                    ),
                );
                children.push((format!("{id}.{n}"), seg, root));
            }
        }

        let visit = |(child_id, seg, root): &(String, &Segment, Root)| -> Result<Expansion> {
            let next = expand_step(&state, seg, root)?;
            self.explore(next, child_id.clone())
        };
        let results: Vec<Result<Expansion>> = if self.opts.parallel {
            children.par_iter().map(visit).collect()
        } else {
            children.iter().map(visit).collect()
        };
        for r in results {
            out.append(r?);
        }
        Ok(out)
    }

    fn regular_leaf(&self, state: &ExpansionState, pivot: Coeff, id: &str, out: &mut Expansion) {
        let scale = state.current.x_denominator_lcm();
        let solver = RegularSolver::new(&state.current, pivot, &scale).expect("lcm scale clears denominators");
        let by_terms = self.opts.max_terms - state.accumulated.len();
        let by_depth = (self.opts.max_depth - state.depth) as usize;
        let solution = solver.solve(by_terms.min(by_depth), None);
        let at = |v: u64| Rat::from(&state.exponent_offset + Rat::from((v, scale.clone())));
        let mut terms = state.accumulated.clone();
        terms.extend(solution.coeffs.iter().map(|(v, c)| Term::new(at(*v), c.clone())));
        let order = solution.next.map(at);
        out.note(
            id,
            state.depth,
            DiagnosticKind::RegularTail,
            format!("{} terms in steps of 1/{}", solution.coeffs.len(), scale),
        );
        out.branches.push(PuiseuxSeries::new(terms, order, 1));
    }
}
