//! Jensen's inequality for conditional expectations through affine
//! minorants, and convex images of martingales.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::expectation::ConditionalExpectation;
use super::process::{AdaptedProcess, ProcessClass};
use crate::error::{Error, Result};
use crate::lattice::{LatticeElement, Tolerance};
use crate::spectral::{compose_multivariate, ContinuousFunction};

/// `L(t) = <a, t> + b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub coefficients: Vec<f64>,
    pub intercept: f64,
}

impl AffineMap {
    pub fn new(coefficients: Vec<f64>, intercept: f64) -> Self {
        AffineMap {
            coefficients,
            intercept,
        }
    }

    pub fn arity(&self) -> usize {
        self.coefficients.len()
    }

    pub fn eval(&self, t: &[f64]) -> f64 {
        self.coefficients
            .iter()
            .zip(t)
            .fold(self.intercept, |acc, (a, x)| acc + a * x)
    }

    /// `sum_i a_i X_i + b E`.
    pub fn apply(&self, xs: &[LatticeElement]) -> Result<LatticeElement> {
        if xs.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: xs.len(),
            });
        }
        let space = xs.first().ok_or(Error::EmptyFamily)?.space();
        xs.iter()
            .zip(&self.coefficients)
            .try_fold(space.constant(self.intercept), |acc, (x, a)| acc.add(&x.scale(*a)?))
    }

    pub fn to_function(&self) -> ContinuousFunction {
        let map = self.clone();
        let lip: f64 = self.coefficients.iter().map(|a| a.abs()).sum();
        ContinuousFunction::multivariate("affine", self.arity(), move |t| map.eval(t)).with_lipschitz_constant(lip)
    }
}

type Supporting = Arc<dyn Fn(&[f64]) -> AffineMap + Send + Sync>;

/// Where the affine minorants of a convex function come from.
#[derive(Clone)]
pub enum MinorantSource {
    /// A fixed family whose supremum is the function.
    Fixed(Vec<AffineMap>),
    /// A supporting hyperplane at any given point.
    Supporting(Supporting),
}

impl fmt::Debug for MinorantSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinorantSource::Fixed(m) => f.debug_tuple("Fixed").field(m).finish(),
            MinorantSource::Supporting(_) => f.write_str("Supporting(..)"),
        }
    }
}

/// A convex function bundled with affine minorants.
#[derive(Debug, Clone)]
pub struct ConvexFunction {
    function: ContinuousFunction,
    minorants: MinorantSource,
}

fn sign(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    }
}

impl ConvexFunction {
    pub fn new(function: ContinuousFunction, minorants: MinorantSource) -> Self {
        ConvexFunction { function, minorants }
    }

    /// `max(t_1, ..., t_n)` with the coordinate projections.
    pub fn max(n: usize) -> Self {
        let f = ContinuousFunction::multivariate("max", n, |t| t.iter().copied().fold(f64::NEG_INFINITY, f64::max))
            .with_lipschitz_constant(1.0);
        let minorants = (0..n)
            .map(|i| AffineMap::new((0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect(), 0.0))
            .collect();
        ConvexFunction::new(f, MinorantSource::Fixed(minorants))
    }

    /// `sum_i |t_i|` with sign-vector supporting hyperplanes.
    pub fn l1(n: usize) -> Self {
        let f = ContinuousFunction::multivariate("l1", n, |t| t.iter().map(|x| x.abs()).sum())
            .with_lipschitz_constant(n as f64);
        ConvexFunction::new(
            f,
            MinorantSource::Supporting(Arc::new(|p| AffineMap::new(p.iter().map(|x| sign(*x)).collect(), 0.0))),
        )
    }

    pub fn abs() -> Self {
        ConvexFunction::l1(1)
    }

    /// `sum_i t_i^2` with tangent planes `2 <p, t> - |p|^2`.
    pub fn quadratic(n: usize) -> Self {
        let f = ContinuousFunction::multivariate("quadratic", n, |t| t.iter().map(|x| x * x).sum()).with_lipschitz(
            move |bbox| {
                let r = bbox.iter().map(|(a, b)| a.abs().max(b.abs())).fold(0.0, f64::max);
                2.0 * r * bbox.len() as f64
            },
        );
        ConvexFunction::new(
            f,
            MinorantSource::Supporting(Arc::new(|p| {
                AffineMap::new(p.iter().map(|x| 2.0 * x).collect(), -p.iter().map(|x| x * x).sum::<f64>())
            })),
        )
    }

    /// An affine function is its own minorant.
    pub fn affine(map: AffineMap) -> Self {
        ConvexFunction::new(map.to_function(), MinorantSource::Fixed(vec![map]))
    }

    pub fn function(&self) -> &ContinuousFunction {
        &self.function
    }

    pub fn arity(&self) -> usize {
        self.function.arity()
    }

    /// Minorants relevant at `points`: the fixed family, or one supporting
    /// hyperplane per point.
    pub fn minorants_for(&self, points: &[Vec<f64>]) -> Vec<AffineMap> {
        match &self.minorants {
            MinorantSource::Fixed(m) => m.clone(),
            MinorantSource::Supporting(s) => {
                let mut out: Vec<AffineMap> = Vec::new();
                for p in points {
                    let m = s(p);
                    if !out.contains(&m) {
                        out.push(m);
                    }
                }
                out
            }
        }
    }
}

/// One link `F(f(X)) >= F(L(X)) = L(F X)` of the minorant chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainLink {
    pub minorant: AffineMap,
    /// `L(F X)`.
    pub bound: LatticeElement,
    /// `min_w (F f(X) - L(F X))(w)`.
    pub margin: f64,
    /// `max_w |F(L(X)) - L(F X)|(w)`; zero up to rounding by linearity.
    pub commutation_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JensenRecord {
    pub function: String,
    /// `F(f(X))`.
    pub lhs: LatticeElement,
    /// `f(F X)`.
    pub rhs: LatticeElement,
    pub slack: LatticeElement,
    pub min_slack: f64,
    pub chain: Vec<ChainLink>,
    /// `max_w (f(F X) - sup_m L_m(F X))(w)`: how far the minorants fall short
    /// of the function at the averaged point.
    pub envelope_gap: f64,
    /// The hypothesis `f(X)` finite; always true on finite spaces.
    pub image_finite: bool,
    pub holds: bool,
}

fn points(xs: &[LatticeElement]) -> Vec<Vec<f64>> {
    let atoms = xs[0].space().atoms();
    (0..atoms).map(|w| xs.iter().map(|x| x.get(w)).collect()).collect()
}

/// Checks `F(f(X)) >= f(F X)` via the supplied minorants, which must lie
/// below `f` at every point of `X` and `F X`.
pub fn jensen_with(
    f: &ContinuousFunction,
    minorants: &[AffineMap],
    xs: &[LatticeElement],
    ce: &ConditionalExpectation,
    tol: Tolerance,
) -> Result<JensenRecord> {
    if xs.len() != f.arity() {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            found: xs.len(),
        });
    }
    if let Some(m) = minorants.iter().find(|m| m.arity() != f.arity()) {
        return Err(Error::ArityMismatch {
            expected: f.arity(),
            found: m.arity(),
        });
    }
    let image = compose_multivariate(f, xs)?;
    let averaged = xs.iter().map(|x| ce.apply(x)).collect::<Result<Vec<_>>>()?;
    let needed: Vec<Vec<f64>> = points(xs).into_iter().chain(points(&averaged)).collect();
    for (index, m) in minorants.iter().enumerate() {
        for p in &needed {
            if !tol.le(m.eval(p), f.eval(p)?) {
                return Err(Error::MinorantViolation {
                    index,
                    point: p.clone(),
                });
            }
        }
    }

    let lhs = ce.apply(&image)?;
    let rhs = compose_multivariate(f, &averaged)?;
    let slack = lhs.sub(&rhs)?;
    let min_slack = slack.values().iter().copied().fold(f64::INFINITY, f64::min);

    let mut chain = Vec::with_capacity(minorants.len());
    let mut envelope = rhs.space().constant(f64::NEG_INFINITY);
    for m in minorants {
        let bound = m.apply(&averaged)?;
        let through = ce.apply(&m.apply(xs)?)?;
        let margin = lhs
            .sub(&bound)?
            .values()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        chain.push(ChainLink {
            minorant: m.clone(),
            commutation_residual: through.max_abs_diff(&bound)?,
            margin,
            bound: bound.clone(),
        });
        envelope = envelope.sup(&bound)?;
    }
    let envelope_gap = if minorants.is_empty() {
        f64::INFINITY
    } else {
        rhs.sub(&envelope)?
            .values()
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    };

    let sides_hold = (0..lhs.space().atoms()).all(|w| tol.le(rhs.get(w), lhs.get(w)));
    let chain_holds = chain
        .iter()
        .all(|c| (0..lhs.space().atoms()).all(|w| tol.le(c.bound.get(w), lhs.get(w))));
    Ok(JensenRecord {
        function: f.name().to_string(),
        image_finite: image.is_finite(),
        holds: sides_hold && chain_holds,
        lhs,
        rhs,
        slack,
        min_slack,
        chain,
        envelope_gap,
    })
}

/// Jensen's inequality with the minorants the convex function provides at
/// the averaged point.
pub fn jensen(
    f: &ConvexFunction,
    xs: &[LatticeElement],
    ce: &ConditionalExpectation,
    tol: Tolerance,
) -> Result<JensenRecord> {
    if xs.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let averaged = xs.iter().map(|x| ce.apply(x)).collect::<Result<Vec<_>>>()?;
    let minorants = f.minorants_for(&points(&averaged));
    jensen_with(&f.function, &minorants, xs, ce, tol)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubmartingaleRecord {
    pub function: String,
    pub image: Vec<Vec<f64>>,
    pub class: ProcessClass,
    /// Minimum Jensen slack of `F_t g(X_s) - g(F_t X_s)` over `t <= s`.
    pub min_slack: f64,
    pub holds: bool,
}

/// Checks that `g(X_t)` is a submartingale when each component of `X` is a
/// martingale for a common filtration.
pub fn convex_image_submartingale(
    components: &[AdaptedProcess],
    g: &ConvexFunction,
    tol: Tolerance,
) -> Result<SubmartingaleRecord> {
    let first = components.first().ok_or(Error::EmptyFamily)?;
    if components.len() != g.arity() {
        return Err(Error::ArityMismatch {
            expected: g.arity(),
            found: components.len(),
        });
    }
    for (i, p) in components.iter().enumerate() {
        if p.filtration() != first.filtration() || p.len() != first.len() {
            return Err(Error::FiltrationMismatch);
        }
        if p.classify(tol) != ProcessClass::Martingale {
            return Err(Error::NotMartingale { component: i });
        }
    }
    let at = |t: usize| components.iter().map(|p| p.at(t).clone()).collect::<Vec<_>>();
    let path = (1..=first.len())
        .map(|t| compose_multivariate(g.function(), &at(t)))
        .collect::<Result<Vec<_>>>()?;
    let image = AdaptedProcess::new(first.filtration().clone(), path)?;
    let mut min_slack = f64::INFINITY;
    for t in 1..=first.len() {
        for s in t..=first.len() {
            let record = jensen(g, &at(s), first.filtration().stage(t), tol)?;
            min_slack = min_slack.min(record.min_slack);
        }
    }
    let class = image.classify(tol);
    Ok(SubmartingaleRecord {
        function: g.function().name().to_string(),
        image: image.to_values(),
        holds: matches!(class, ProcessClass::Martingale | ProcessClass::Submartingale),
        class,
        min_slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::StoneSpace;
    use crate::probability::Filtration;

    fn el(v: &[f64]) -> LatticeElement {
        LatticeElement::from_values(v.to_vec()).unwrap()
    }

    #[test]
    fn square_on_two_atoms() {
        let space = StoneSpace::new(2).unwrap();
        let ce = ConditionalExpectation::trivial(space, vec![1.0, 1.0]).unwrap();
        let r = jensen(&ConvexFunction::quadratic(1), &[el(&[0.0, 2.0])], &ce, Tolerance::default()).unwrap();
        assert_eq!(r.lhs, space.constant(2.0));
        assert_eq!(r.rhs, space.constant(1.0));
        assert_eq!(r.min_slack, 1.0);
        assert!(r.holds && r.image_finite);
        assert_eq!(r.envelope_gap, 0.0);
        assert!(r.chain.iter().all(|c| c.commutation_residual == 0.0));
    }

    #[test]
    fn affine_has_zero_slack() {
        let space = StoneSpace::new(3).unwrap();
        let ce = ConditionalExpectation::new(space, vec![vec![0, 1], vec![2]], vec![1.0, 3.0, 2.0]).unwrap();
        let g = ConvexFunction::affine(AffineMap::new(vec![2.0, -1.0], 0.5));
        let r = jensen(&g, &[el(&[1.0, 5.0, 2.0]), el(&[0.0, 4.0, -1.0])], &ce, Tolerance::default()).unwrap();
        assert!(r.slack.max_abs_diff(&space.zero()).unwrap() <= 1e-12);
    }

    #[test]
    fn bad_minorant_is_reported() {
        let space = StoneSpace::new(2).unwrap();
        let ce = ConditionalExpectation::trivial(space, vec![1.0, 1.0]).unwrap();
        let f = ConvexFunction::quadratic(1);
        let err = jensen_with(
            f.function(),
            &[AffineMap::new(vec![0.0], 0.5)],
            &[el(&[0.0, 2.0])],
            &ce,
            Tolerance::default(),
        )
        .unwrap_err();
        assert_eq!(err, Error::MinorantViolation { index: 0, point: vec![0.0] });
    }

    #[test]
    fn absolute_value_of_a_martingale() {
        let f = Arc::new(
            Filtration::from_partitions(vec![1.0, 1.0, 2.0], vec![vec![vec![0, 1, 2]], vec![vec![0, 1], vec![2]]]).unwrap(),
        );
        let p = AdaptedProcess::doob(f, &el(&[-3.0, 1.0, 0.5]), 2).unwrap();
        let r = convex_image_submartingale(std::slice::from_ref(&p), &ConvexFunction::abs(), Tolerance::default()).unwrap();
        assert_eq!(r.class, ProcessClass::Submartingale);
        assert!(r.holds && r.min_slack >= 0.0);
        let affine = ConvexFunction::affine(AffineMap::new(vec![-2.0], 1.0));
        let r = convex_image_submartingale(&[p], &affine, Tolerance::default()).unwrap();
        assert_eq!(r.class, ProcessClass::Martingale);
    }

    #[test]
    fn non_martingale_component_is_rejected() {
        let space = StoneSpace::new(1).unwrap();
        let ce = ConditionalExpectation::trivial(space, vec![1.0]).unwrap();
        let f = Arc::new(Filtration::constant(ce, 2).unwrap());
        let p = AdaptedProcess::new(f, vec![space.constant(0.0), space.constant(1.0)]).unwrap();
        assert_eq!(
            convex_image_submartingale(&[p], &ConvexFunction::abs(), Tolerance::default()).unwrap_err(),
            Error::NotMartingale { component: 0 }
        );
    }
}
