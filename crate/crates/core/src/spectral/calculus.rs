//! Functional calculus for continuous functions.
//!
//! `I(f)` for continuous `f` is pointwise composition ([`compose_continuous`]).
//! The Daniell route is kept as an independent path: monotone step
//! approximations from below ([`step_approximation`]) integrated against the
//! spectral system and passed to the supremum ([`daniell_monotone`]).

use std::fmt;
use std::sync::Arc;

use super::interval::Interval;
use super::step::StepFunction;
use super::system::SpectralSystem;
use crate::error::{Error, Result};
use crate::lattice::LatticeElement;

type Callback = Arc<dyn Fn(&[f64]) -> std::result::Result<f64, String> + Send + Sync>;
type LipschitzBound = Arc<dyn Fn(&[(f64, f64)]) -> f64 + Send + Sync>;

/// A continuous map `R^d -> R` given by a callback.
///
/// Callbacks must be deterministic and side-effect free. The optional
/// uniform continuity data is a Lipschitz bound per compact box (in the
/// sup-norm on the arguments), from which grid spacings are derived.
#[derive(Clone)]
pub struct ContinuousFunction {
    name: String,
    arity: usize,
    eval: Callback,
    lipschitz: Option<LipschitzBound>,
}

impl fmt::Debug for ContinuousFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ContinuousFunction")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .field("lipschitz", &self.lipschitz.is_some())
            .finish()
    }
}

impl ContinuousFunction {
    pub fn univariate(name: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        ContinuousFunction {
            name: name.into(),
            arity: 1,
            eval: Arc::new(move |t: &[f64]| Ok(f(t[0]))),
            lipschitz: None,
        }
    }

    pub fn multivariate(
        name: impl Into<String>,
        arity: usize,
        f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        ContinuousFunction {
            name: name.into(),
            arity,
            eval: Arc::new(move |t: &[f64]| Ok(f(t))),
            lipschitz: None,
        }
    }

    /// A callback that may report failure.
    pub fn fallible(
        name: impl Into<String>,
        arity: usize,
        f: impl Fn(&[f64]) -> std::result::Result<f64, String> + Send + Sync + 'static,
    ) -> Self {
        ContinuousFunction {
            name: name.into(),
            arity,
            eval: Arc::new(f),
            lipschitz: None,
        }
    }

    /// Attaches a Lipschitz bound valid on each box passed to `bound`.
    pub fn with_lipschitz(mut self, bound: impl Fn(&[(f64, f64)]) -> f64 + Send + Sync + 'static) -> Self {
        self.lipschitz = Some(Arc::new(bound));
        self
    }

    /// Attaches a global Lipschitz constant.
    pub fn with_lipschitz_constant(self, constant: f64) -> Self {
        self.with_lipschitz(move |_| constant)
    }

    pub fn identity() -> Self {
        ContinuousFunction::univariate("id", |t| t).with_lipschitz_constant(1.0)
    }

    pub fn constant(c: f64) -> Self {
        ContinuousFunction::univariate(format!("{c}"), move |_| c).with_lipschitz_constant(0.0)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn lipschitz_on(&self, bbox: &[(f64, f64)]) -> Option<f64> {
        self.lipschitz.as_ref().map(|l| l(bbox))
    }

    /// Grid spacing on `bbox` that keeps the oscillation of the function on
    /// any cell below `eps`.
    pub fn grid_spacing(&self, bbox: &[(f64, f64)], eps: f64) -> Option<f64> {
        let l = self.lipschitz_on(bbox)?;
        let width = bbox.iter().map(|(a, b)| b - a).fold(0.0, f64::max);
        Some(if l > 0.0 { (eps / l).min(width) } else { width })
    }

    pub fn eval(&self, args: &[f64]) -> Result<f64> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: args.len(),
            });
        }
        let v = (self.eval)(args).map_err(|e| Error::CallbackFailure(format!("{}: {e}", self.name)))?;
        if !v.is_finite() {
            return Err(Error::CallbackFailure(format!(
                "{} returned {v} at {args:?}",
                self.name
            )));
        }
        Ok(v)
    }

    pub fn eval1(&self, t: f64) -> Result<f64> {
        self.eval(&[t])
    }

    fn combine(
        &self,
        other: &ContinuousFunction,
        name: String,
        op: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        lip: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        let (f, g) = (self.eval.clone(), other.eval.clone());
        let lipschitz: Option<LipschitzBound> = match (&self.lipschitz, &other.lipschitz) {
            (Some(lf), Some(lg)) => {
                let (lf, lg) = (lf.clone(), lg.clone());
                Some(Arc::new(move |b: &[(f64, f64)]| lip(lf(b), lg(b))))
            }
            _ => None,
        };
        Ok(ContinuousFunction {
            name,
            arity: self.arity,
            eval: Arc::new(move |t: &[f64]| Ok(op(f(t)?, g(t)?))),
            lipschitz,
        })
    }

    fn transform(
        &self,
        name: String,
        op: impl Fn(f64) -> f64 + Send + Sync + 'static,
        lip_factor: f64,
    ) -> Self {
        let f = self.eval.clone();
        ContinuousFunction {
            name,
            arity: self.arity,
            eval: Arc::new(move |t: &[f64]| Ok(op(f(t)?))),
            lipschitz: self.lipschitz.clone().map(|l| {
                Arc::new(move |b: &[(f64, f64)]| lip_factor * l(b)) as LipschitzBound
            }),
        }
    }

    /// `f v g`.
    pub fn sup(&self, other: &ContinuousFunction) -> Result<Self> {
        self.combine(other, format!("({} v {})", self.name, other.name), f64::max, f64::max)
    }

    /// `f ^ g`.
    pub fn inf(&self, other: &ContinuousFunction) -> Result<Self> {
        self.combine(other, format!("({} ^ {})", self.name, other.name), f64::min, f64::max)
    }

    pub fn add(&self, other: &ContinuousFunction) -> Result<Self> {
        self.combine(other, format!("({} + {})", self.name, other.name), |a, b| a + b, |a, b| a + b)
    }

    pub fn sub(&self, other: &ContinuousFunction) -> Result<Self> {
        self.combine(other, format!("({} - {})", self.name, other.name), |a, b| a - b, |a, b| a + b)
    }

    pub fn abs(&self) -> Self {
        self.transform(format!("|{}|", self.name), f64::abs, 1.0)
    }

    pub fn pos_part(&self) -> Self {
        self.transform(format!("{}+", self.name), |v| v.max(0.0), 1.0)
    }

    pub fn neg_part(&self) -> Self {
        self.transform(format!("{}-", self.name), |v| (-v).max(0.0), 1.0)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.transform(format!("{c}*{}", self.name), move |v| c * v, c.abs())
    }

    /// `f_n = f` on `[-n, n]`, `0` off `[-n-1, n+1]`, linear cutoff in between.
    /// Univariate only; requires Lipschitz data.
    pub fn truncate(&self, n: f64) -> Result<Self> {
        if self.arity != 1 {
            return Err(Error::ArityMismatch {
                expected: 1,
                found: self.arity,
            });
        }
        let bbox = [(-n - 1.0, n + 1.0)];
        let l = self
            .lipschitz_on(&bbox)
            .ok_or_else(|| Error::MissingContinuityData(self.name.clone()))?;
        let sup_bound = self.eval1(0.0)?.abs() + l * (n + 1.0);
        let f = self.eval.clone();
        Ok(ContinuousFunction {
            name: format!("{}|{n}", self.name),
            arity: 1,
            eval: Arc::new(move |t: &[f64]| {
                let ramp = (n + 1.0 - t[0].abs()).clamp(0.0, 1.0);
                if ramp == 0.0 {
                    Ok(0.0)
                } else {
                    Ok(ramp * f(t)?)
                }
            }),
            lipschitz: Some(Arc::new(move |_: &[(f64, f64)]| l + sup_bound)),
        })
    }
}

/// `I(f) = f o X` for continuous univariate `f`.
pub fn compose_continuous(f: &ContinuousFunction, x: &LatticeElement) -> Result<LatticeElement> {
    if f.arity() != 1 {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            found: 1,
        });
    }
    x.ensure_finite()?;
    let values = x.values().iter().map(|v| f.eval1(*v)).collect::<Result<Vec<_>>>()?;
    LatticeElement::new(x.space(), values)
}

/// `f(X_1, ..., X_n)` evaluated atom by atom.
pub fn compose_multivariate(f: &ContinuousFunction, xs: &[LatticeElement]) -> Result<LatticeElement> {
    if xs.len() != f.arity() {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            found: xs.len(),
        });
    }
    let space = xs.first().ok_or(Error::EmptyFamily)?.space();
    for x in xs {
        space.ensure_same(&x.space())?;
        x.ensure_finite()?;
    }
    let mut args = vec![0.0; xs.len()];
    let values = (0..space.atoms())
        .map(|atom| {
            for (slot, x) in args.iter_mut().zip(xs) {
                *slot = x.get(atom);
            }
            f.eval(&args)
        })
        .collect::<Result<Vec<_>>>()?;
    LatticeElement::new(space, values)
}

/// Dyadic lower approximation data shared by all terms of one sequence.
#[derive(Debug)]
struct DyadicGrid {
    f: ContinuousFunction,
    lower: f64,
    upper: f64,
    lipschitz: f64,
    base_level: u32,
}

impl DyadicGrid {
    fn width(&self, level: u32) -> f64 {
        (self.upper - self.lower) / 2f64.powi(level as i32)
    }

    fn boundary(&self, level: u32, j: u64) -> f64 {
        self.lower + j as f64 * self.width(level)
    }

    /// Index of the cell `(b_j, b_{j+1}]` containing `t`, for `t` in `(lower, upper]`.
    fn cell(&self, level: u32, t: f64) -> u64 {
        let cells = 1u64 << level;
        let h = self.width(level);
        let guess = ((t - self.lower) / h).ceil() - 1.0;
        let mut j = guess.clamp(0.0, (cells - 1) as f64) as u64;
        while j > 0 && self.boundary(level, j) >= t {
            j -= 1;
        }
        while j + 1 < cells && self.boundary(level, j + 1) < t {
            j += 1;
        }
        j
    }

    /// Certified lower bound of `f` on one cell: the midpoint value minus the
    /// largest possible drop over half a cell.
    fn raw_value(&self, level: u32, j: u64) -> Result<f64> {
        let h = self.width(level);
        let mid = self.lower + (j as f64 + 0.5) * h;
        Ok(self.f.eval1(mid)? - self.lipschitz * h / 2.0)
    }
}

/// One term of a dyadic approximation: a step function on `2^level` equal
/// cells of `[lower, upper]`, zero outside. Cell values are evaluated on
/// demand, so arbitrarily fine terms cost nothing until they are read.
#[derive(Debug, Clone)]
pub struct DyadicStep {
    grid: Arc<DyadicGrid>,
    depth: u32,
}

impl DyadicStep {
    pub fn level(&self) -> u32 {
        self.grid.base_level + self.depth
    }

    pub fn cell_count(&self) -> u64 {
        1u64 << self.level()
    }

    /// Upper bound of `f - term` on `[lower, upper]`.
    pub fn gap_bound(&self) -> f64 {
        self.grid.lipschitz * self.grid.width(self.level())
    }

    /// The piece of the partition containing `t` and the value there.
    ///
    /// The value is the maximum of the certified lower bounds of all coarser
    /// ancestor cells, which makes consecutive terms increase exactly.
    pub fn piece_at(&self, t: f64) -> Result<(Interval, f64)> {
        let g = &self.grid;
        if t <= g.lower {
            return Ok((Interval::ray_down(g.lower)?, 0.0));
        }
        if t > g.upper {
            return Ok((Interval::ray_up(g.upper)?, 0.0));
        }
        let level = self.level();
        let j = g.cell(level, t);
        let mut value = f64::NEG_INFINITY;
        for d in 1..=self.depth {
            let l = g.base_level + d;
            let ancestor = j >> (level - l);
            value = value.max(g.raw_value(l, ancestor)?);
        }
        let piece = Interval::left_open(g.boundary(level, j), g.boundary(level, j + 1))?;
        Ok((piece, value))
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        Ok(self.piece_at(t)?.1)
    }

    /// Materialises the term as an explicit step function. Only sensible for
    /// coarse levels.
    pub fn to_step_function(&self) -> Result<StepFunction> {
        if self.level() > 22 {
            return Err(Error::DomainViolation(format!(
                "refusing to materialise 2^{} cells",
                self.level()
            )));
        }
        let g = &self.grid;
        let level = self.level();
        let mut breakpoints = vec![g.lower];
        let mut values = vec![0.0];
        for j in 0..self.cell_count() {
            let right = g.boundary(level, j + 1);
            breakpoints.push(right);
            values.push(self.piece_at(right)?.1);
        }
        StepFunction::new(breakpoints, values, 0.0)
    }
}

/// A term of a monotone step sequence.
#[derive(Debug, Clone)]
pub enum StepTerm {
    Explicit(StepFunction),
    Dyadic(DyadicStep),
}

impl StepTerm {
    pub fn piece_at(&self, t: f64) -> Result<(Interval, f64)> {
        match self {
            StepTerm::Explicit(f) => {
                let pieces = f.pieces();
                let (piece, v) = pieces
                    .into_iter()
                    .find(|(p, _)| p.contains(t))
                    .expect("pieces cover the line");
                Ok((piece, v))
            }
            StepTerm::Dyadic(d) => d.piece_at(t),
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        match self {
            StepTerm::Explicit(f) => Ok(f.eval(t)),
            StepTerm::Dyadic(d) => d.eval(t),
        }
    }

    /// `I(term)` against the spectral system.
    ///
    /// Explicit terms sum over every part of their partition. Dyadic terms sum
    /// only over cells holding a breakpoint of the spectral system: `A_t` is
    /// constant between breakpoints, so every other cell has measure zero.
    pub fn integrate(&self, system: &SpectralSystem) -> Result<LatticeElement> {
        match self {
            StepTerm::Explicit(f) => Ok(system.integrate(f)),
            StepTerm::Dyadic(d) => {
                let mut seen: Vec<(Interval, f64)> = Vec::new();
                for b in system.breakpoints() {
                    let (piece, v) = d.piece_at(*b)?;
                    if !seen.iter().any(|(p, _)| *p == piece) {
                        seen.push((piece, v));
                    }
                }
                seen.iter().try_fold(system.source().space().zero(), |acc, (piece, v)| {
                    acc.add(&system.measure_piece(piece).scale(*v)?)
                })
            }
        }
    }
}

/// A pointwise non-decreasing sequence of step functions.
#[derive(Debug, Clone)]
pub struct MonotoneStepSequence {
    terms: Vec<StepTerm>,
}

impl MonotoneStepSequence {
    /// Validates monotonicity exactly on the common breakpoints of each pair.
    pub fn new(terms: Vec<StepFunction>) -> Result<Self> {
        for (k, w) in terms.windows(2).enumerate() {
            if !w[0].le(&w[1]) {
                return Err(Error::NotMonotone(format!("term {k} exceeds term {}", k + 1)));
            }
        }
        Ok(MonotoneStepSequence {
            terms: terms.into_iter().map(StepTerm::Explicit).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[StepTerm] {
        &self.terms
    }

    pub fn last(&self) -> Option<&StepTerm> {
        self.terms.last()
    }
}

/// Increasing step approximations from below of `f` on `[a, b]`, zero
/// outside.
///
/// Term `k` (1-based) lives on the dyadic grid of level `base + k`, where
/// `2^base >= L (b - a)` for the Lipschitz bound `L` on `[a, b]`. Its cell
/// values are certified lower bounds of `f`, so `f - term_k <= 2^-k <= 1/k`
/// on `[a, b]`. Terms are produced until `2^-k <= eps`.
pub fn step_approximation(f: &ContinuousFunction, a: f64, b: f64, eps: f64) -> Result<MonotoneStepSequence> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidSupport { a, b });
    }
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::DomainViolation(format!("eps must be positive, got {eps}")));
    }
    if f.arity() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            found: f.arity(),
        });
    }
    let lipschitz = f
        .lipschitz_on(&[(a, b)])
        .ok_or_else(|| Error::MissingContinuityData(f.name().to_string()))?;
    if !(lipschitz >= 0.0 && lipschitz.is_finite()) {
        return Err(Error::MissingContinuityData(format!("{}: bad bound {lipschitz}", f.name())));
    }
    let spread = lipschitz * (b - a);
    let base_level = if spread > 1.0 { spread.log2().ceil() as u32 } else { 0 };
    let depth = ((1.0 / eps).log2().ceil() as u32).max(1);
    if base_level + depth > 62 {
        return Err(Error::DomainViolation(format!(
            "approximation needs 2^{} cells",
            base_level + depth
        )));
    }
    let grid = Arc::new(DyadicGrid {
        f: f.clone(),
        lower: a,
        upper: b,
        lipschitz,
        base_level,
    });
    Ok(MonotoneStepSequence {
        terms: (1..=depth)
            .map(|d| {
                StepTerm::Dyadic(DyadicStep {
                    grid: grid.clone(),
                    depth: d,
                })
            })
            .collect(),
    })
}

/// The integrals `I(f_1) <= I(f_2) <= ...` of the first `horizon` terms.
pub fn daniell_monotone_trace(
    seq: &MonotoneStepSequence,
    x: &LatticeElement,
    horizon: usize,
) -> Result<Vec<LatticeElement>> {
    let system = SpectralSystem::new(x)?;
    let mut out: Vec<LatticeElement> = Vec::with_capacity(horizon.min(seq.len()));
    for (k, term) in seq.terms().iter().take(horizon).enumerate() {
        let value = term.integrate(&system)?;
        if let Some(prev) = out.last() {
            if !prev.le(&value)? {
                return Err(Error::NotMonotone(format!(
                    "I(f_{k}) exceeds I(f_{})",
                    k + 1
                )));
            }
        }
        out.push(value);
    }
    Ok(out)
}

/// `sup_k I(f_k)` over the first `horizon` terms; the extension of the
/// Daniell integral to increasing limits of step functions.
pub fn daniell_monotone(seq: &MonotoneStepSequence, x: &LatticeElement, horizon: usize) -> Result<LatticeElement> {
    let trace = daniell_monotone_trace(seq, x, horizon)?;
    match trace.last() {
        Some(last) => Ok(last.clone()),
        None => Ok(x.space().zero()),
    }
}

/// The Daniell route to `I(f)` for continuous `f`: split `f = f+ - f-`,
/// truncate each part to bounded support around the range of `x`,
/// approximate from below to within `eps`, and integrate the approximants.
pub fn daniell_continuous(f: &ContinuousFunction, x: &LatticeElement, eps: f64) -> Result<LatticeElement> {
    x.ensure_finite()?;
    let radius = x.values().iter().fold(0.0f64, |m, v| m.max(v.abs())).ceil() + 1.0;
    let mut parts = Vec::with_capacity(2);
    for part in [f.pos_part(), f.neg_part()] {
        let bounded = part.truncate(radius)?;
        let seq = step_approximation(&bounded, -radius - 1.0, radius + 1.0, eps)?;
        parts.push(daniell_monotone(&seq, x, seq.len())?);
    }
    parts[0].sub(&parts[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::system::daniell_step;

    fn el(v: &[f64]) -> LatticeElement {
        LatticeElement::from_values(v.to_vec()).unwrap()
    }

    fn hat() -> ContinuousFunction {
        ContinuousFunction::univariate("hat", |t| (1.0 - (2.0 * t - 1.0).abs()).max(0.0))
            .with_lipschitz_constant(2.0)
    }

    #[test]
    fn composition_examples() {
        let x = el(&[-1.0, 2.0, 3.0]);
        assert_eq!(compose_continuous(&ContinuousFunction::identity(), &x).unwrap(), x);
        let sq = ContinuousFunction::univariate("sq", |t| t * t);
        assert_eq!(compose_continuous(&sq, &x).unwrap(), el(&[1.0, 4.0, 9.0]));
    }

    #[test]
    fn callback_failures_surface() {
        let bad = ContinuousFunction::fallible("bad", 1, |_| Err("boom".into()));
        assert!(matches!(
            compose_continuous(&bad, &el(&[1.0])),
            Err(Error::CallbackFailure(_))
        ));
        let nan = ContinuousFunction::univariate("nan", |_| f64::NAN);
        assert!(matches!(
            compose_continuous(&nan, &el(&[1.0])),
            Err(Error::CallbackFailure(_))
        ));
        assert!(matches!(
            compose_continuous(&ContinuousFunction::identity(), &el(&[f64::INFINITY])),
            Err(Error::NotFinite { atom: 0 })
        ));
    }

    #[test]
    fn multivariate_examples() {
        let max = ContinuousFunction::multivariate("max", 2, |t| t[0].max(t[1]));
        let xs = [el(&[1.0, 0.0]), el(&[0.0, 1.0])];
        assert_eq!(compose_multivariate(&max, &xs).unwrap(), el(&[1.0, 1.0]));
        assert!(matches!(
            compose_multivariate(&max, &xs[..1]),
            Err(Error::ArityMismatch { expected: 2, found: 1 })
        ));
        let ys = [el(&[1.0, 0.0]), el(&[0.0])];
        assert!(matches!(
            compose_multivariate(&max, &ys),
            Err(Error::SpaceMismatch { .. })
        ));
    }

    #[test]
    fn hat_approximation_is_uniform() {
        let eps = 2f64.powi(-10);
        let seq = step_approximation(&hat(), 0.0, 1.0, eps).unwrap();
        let StepTerm::Dyadic(last) = seq.last().unwrap() else { panic!() };
        assert!(last.gap_bound() <= eps);
        // Dense grid oracle.
        let n = 1 << 14;
        let f = hat();
        for i in 0..=n {
            let t = i as f64 / n as f64;
            let gap = f.eval1(t).unwrap() - last.eval(t).unwrap();
            assert!(gap >= -1e-15, "term above f at {t}");
            assert!(gap <= eps, "gap {gap} at {t}");
        }
    }

    #[test]
    fn approximation_terms_increase() {
        let seq = step_approximation(&hat(), 0.0, 1.0, 2f64.powi(-8)).unwrap();
        let explicit: Vec<StepFunction> = seq
            .terms()
            .iter()
            .map(|t| match t {
                StepTerm::Dyadic(d) => d.to_step_function().unwrap(),
                StepTerm::Explicit(f) => f.clone(),
            })
            .collect();
        for (k, f) in explicit.iter().enumerate() {
            assert!(f.eval(0.37) <= hat().eval1(0.37).unwrap());
            assert!(f.eval(0.37) >= hat().eval1(0.37).unwrap() - 2f64.powi(-(k as i32) - 1));
        }
        assert!(MonotoneStepSequence::new(explicit).is_ok());
    }

    #[test]
    fn zero_function_gives_zero_terms() {
        let seq = step_approximation(&ContinuousFunction::constant(0.0), -1.0, 1.0, 0.01).unwrap();
        for term in seq.terms() {
            for t in [-2.0, -0.3, 0.0, 0.9, 5.0] {
                assert_eq!(term.eval(t).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn invalid_support() {
        assert!(matches!(
            step_approximation(&hat(), 1.0, 1.0, 0.1),
            Err(Error::InvalidSupport { .. })
        ));
        let bare = ContinuousFunction::univariate("bare", |t| t);
        assert!(matches!(
            step_approximation(&bare, 0.0, 1.0, 0.1),
            Err(Error::MissingContinuityData(_))
        ));
    }

    #[test]
    fn sparse_integral_matches_materialised_integral() {
        let seq = step_approximation(&hat(), 0.0, 1.0, 2f64.powi(-9)).unwrap();
        let x = el(&[0.1, 0.25, 0.5, 0.5, 0.99, 1.0, -3.0, 4.0]);
        let system = SpectralSystem::new(&x).unwrap();
        for term in seq.terms() {
            let StepTerm::Dyadic(d) = term else { panic!() };
            let explicit = d.to_step_function().unwrap();
            assert_eq!(term.integrate(&system).unwrap(), daniell_step(&explicit, &x).unwrap());
        }
    }

    #[test]
    fn monotone_extension_of_staircase() {
        // f_k = sum_{j <= k} 1_(j-1, inf): equals t at every positive integer t <= k.
        let terms: Vec<StepFunction> = (1..=12)
            .map(|k| StepFunction::new((0..k).map(|j| j as f64).collect(), (0..k).map(|j| j as f64).collect(), k as f64).unwrap())
            .collect();
        let seq = MonotoneStepSequence::new(terms).unwrap();
        let x = el(&[3.0, 10.0]);
        assert_eq!(daniell_monotone(&seq, &x, 10).unwrap(), x);
        assert_eq!(daniell_monotone(&seq, &x, 12).unwrap(), x);
        assert_eq!(daniell_monotone(&seq, &x, 5).unwrap(), el(&[3.0, 5.0]));

        let constant = MonotoneStepSequence::new(vec![StepFunction::constant(2.0).unwrap(); 4]).unwrap();
        assert_eq!(daniell_monotone(&constant, &x, 1).unwrap(), daniell_monotone(&constant, &x, 4).unwrap());
    }

    #[test]
    fn decreasing_sequence_is_rejected() {
        let up = StepFunction::constant(1.0).unwrap();
        let down = StepFunction::constant(0.0).unwrap();
        assert!(matches!(MonotoneStepSequence::new(vec![up, down]), Err(Error::NotMonotone(_))));
    }

    #[test]
    fn daniell_route_matches_composition_on_hat() {
        let x = el(&[0.0, 0.2, 0.5, 0.75, 1.0, 1.7]);
        let eps = 2f64.powi(-20);
        let daniell = daniell_continuous(&hat(), &x, eps).unwrap();
        let direct = compose_continuous(&hat(), &x).unwrap();
        assert!(daniell.max_abs_diff(&direct).unwrap() <= 2.0 * eps);
    }

    #[test]
    fn daniell_route_for_signed_polynomial() {
        let f = ContinuousFunction::univariate("p", |t| t * t * t - 2.0 * t)
            .with_lipschitz(|b| {
                let r = b.iter().map(|(a, c)| a.abs().max(c.abs())).fold(0.0, f64::max);
                3.0 * r * r + 2.0
            });
        let x = el(&[-3.5, -1.0, 0.0, 0.4, 2.25, 7.0]);
        let eps = 2f64.powi(-20);
        let daniell = daniell_continuous(&f, &x, eps).unwrap();
        let direct = compose_continuous(&f, &x).unwrap();
        assert!(daniell.max_abs_diff(&direct).unwrap() <= 2f64.powi(-18));
    }
}
