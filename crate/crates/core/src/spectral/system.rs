//! Spectral systems, the lattice-valued measure they induce on the interval
//! algebra, and the Daniell integral of step functions.

use super::interval::{Interval, IntervalSet};
use super::step::StepFunction;
use crate::error::Result;
use crate::lattice::{BandProjection, ClopenSet, LatticeElement};
use crate::mutation::{self, Mutation};

/// The right continuous spectral system `A_t = E - P_{(X - tE)+} E` of a
/// finite element `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSystem {
    source: LatticeElement,
    breakpoints: Vec<f64>,
}

impl SpectralSystem {
    pub fn new(x: &LatticeElement) -> Result<Self> {
        x.ensure_finite()?;
        let mut breakpoints = x.values().to_vec();
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();
        Ok(SpectralSystem {
            source: x.clone(),
            breakpoints,
        })
    }

    pub fn source(&self) -> &LatticeElement {
        &self.source
    }

    /// The distinct values of the source; `A_t` only jumps at these.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// `A_t`, including `A_{-inf} = 0` and `A_{inf} = E`.
    pub fn at(&self, t: f64) -> LatticeElement {
        let space = self.source.space();
        if t == f64::NEG_INFINITY {
            return space.zero();
        }
        if t == f64::INFINITY {
            return space.unit();
        }
        let shifted = self
            .source
            .sub(&space.constant(t))
            .expect("finite source minus a real constant")
            .pos_part();
        space
            .unit()
            .sub(&BandProjection::of(&shifted).apply_to_unit())
            .expect("indicators are finite")
    }

    /// The clopen set carrying `A_t`.
    pub fn set_at(&self, t: f64) -> ClopenSet {
        self.at(t).support()
    }

    // Left limit `A_{t-}`; only reachable through the endpoint mutation.
    fn before(&self, t: f64) -> LatticeElement {
        self.source.level_set(|v| v < t).indicator()
    }

    /// `mu_A(a, b] = A_b - A_a`.
    pub fn measure_piece(&self, piece: &Interval) -> LatticeElement {
        let (lo, hi) = if mutation::active(Mutation::MuEndpointOffByOne) {
            (self.before(piece.lower()), self.before(piece.upper()))
        } else {
            (self.at(piece.lower()), self.at(piece.upper()))
        };
        hi.sub(&lo).expect("indicators are finite")
    }

    /// `mu_A(S)`, additive over the pieces of `S`.
    pub fn measure(&self, set: &IntervalSet) -> LatticeElement {
        set.pieces()
            .iter()
            .fold(self.source.space().zero(), |acc, p| {
                acc.add(&self.measure_piece(p)).expect("finite sum")
            })
    }

    /// `I(f) = sum_i a_i mu_A(S_i)` for `f = sum_i a_i 1_{S_i}`.
    pub fn integrate(&self, f: &StepFunction) -> LatticeElement {
        f.partition()
            .iter()
            .fold(self.source.space().zero(), |acc, (set, a)| {
                let term = self.measure(set).scale(*a).expect("real coefficient");
                acc.add(&term).expect("finite sum")
            })
    }
}

/// The Daniell integral of a step function with respect to the spectral
/// system of `x`.
pub fn daniell_step(f: &StepFunction, x: &LatticeElement) -> Result<LatticeElement> {
    Ok(SpectralSystem::new(x)?.integrate(f))
}

/// The band-projection closed form of the step integral:
///
/// `I(f) = a_inf P_{(X - g_n E)+} E + sum_i a_i (P_{(X - g_{i-1} E)+} E - P_{(X - g_i E)+} E)`
///
/// with `P_{(X - g_0 E)+} E = E`. Computed without going through the
/// spectral system.
pub fn daniell_step_closed_form(f: &StepFunction, x: &LatticeElement) -> Result<LatticeElement> {
    x.ensure_finite()?;
    let space = x.space();
    let above = |gamma: f64| -> Result<LatticeElement> {
        let shifted = x.sub(&space.constant(gamma))?.pos_part();
        Ok(BandProjection::of(&shifted).apply_to_unit())
    };
    let mut acc = space.zero();
    let mut prev = space.unit();
    for (gamma, a) in f.breakpoints().iter().zip(f.values()) {
        let next = above(*gamma)?;
        acc = acc.add(&prev.sub(&next)?.scale(*a)?)?;
        prev = next;
    }
    acc.add(&prev.scale(f.value_at_infinity())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(v: &[f64]) -> LatticeElement {
        LatticeElement::from_values(v.to_vec()).unwrap()
    }

    #[test]
    fn spectral_system_thresholds() {
        let a = SpectralSystem::new(&el(&[0.5, 1.5, 2.5])).unwrap();
        assert_eq!(a.at(1.0), el(&[1.0, 0.0, 0.0]));
        assert_eq!(a.at(1.5), el(&[1.0, 1.0, 0.0]));
        assert!(a.at(0.0).is_zero());
        assert!(a.at(f64::NEG_INFINITY).is_zero());
        assert_eq!(a.at(3.0), el(&[1.0, 1.0, 1.0]));
        assert_eq!(a.at(f64::INFINITY), el(&[1.0, 1.0, 1.0]));
        assert_eq!(a.breakpoints(), &[0.5, 1.5, 2.5]);
    }

    #[test]
    fn infinite_source_is_rejected() {
        assert!(SpectralSystem::new(&el(&[1.0, f64::INFINITY])).is_err());
    }

    #[test]
    fn measure_examples() {
        let a = SpectralSystem::new(&el(&[0.5, 1.5, 2.5])).unwrap();
        let s = IntervalSet::single(Interval::left_open(1.0, 2.0).unwrap());
        assert_eq!(a.measure(&s), el(&[0.0, 1.0, 0.0]));
        let line = IntervalSet::from_pieces([
            Interval::ray_down(1.5).unwrap(),
            Interval::ray_up(1.5).unwrap(),
        ]);
        assert_eq!(a.measure(&line), el(&[1.0, 1.0, 1.0]));
    }

    #[test]
    fn step_integral_examples() {
        let x = el(&[0.5, 1.5, 2.5]);
        let f = StepFunction::indicator(&IntervalSet::single(Interval::left_open(1.0, 2.0).unwrap()), 1.0)
            .unwrap();
        assert_eq!(daniell_step(&f, &x).unwrap(), el(&[0.0, 1.0, 0.0]));
        assert_eq!(daniell_step_closed_form(&f, &x).unwrap(), el(&[0.0, 1.0, 0.0]));
        let c = StepFunction::constant(-3.25).unwrap();
        assert_eq!(daniell_step(&c, &x).unwrap(), x.space().constant(-3.25));
        assert_eq!(daniell_step_closed_form(&c, &x).unwrap(), x.space().constant(-3.25));
    }

    #[test]
    fn endpoint_mutation_changes_the_measure() {
        let a = SpectralSystem::new(&el(&[1.0, 2.0])).unwrap();
        let s = IntervalSet::single(Interval::left_open(1.0, 2.0).unwrap());
        assert_eq!(a.measure(&s), el(&[0.0, 1.0]));
        let mutated = mutation::with_mutation(Some(Mutation::MuEndpointOffByOne), || a.measure(&s));
        assert_eq!(mutated, el(&[1.0, 0.0]));
    }
}
