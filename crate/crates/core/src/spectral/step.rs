//! Real step functions over a finite partition of the line into
//! left-open right-closed pieces.

use serde::{Deserialize, Serialize};

use super::interval::{Interval, IntervalSet};
use crate::error::{Error, Result};

/// `f = a_inf 1_(g_n, inf) + sum_i a_i 1_(g_{i-1}, g_i]` with `g_0 = -inf`.
///
/// Always canonical: adjacent pieces carry distinct values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StepJson", into = "StepJson")]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    value_at_infinity: f64,
}

#[derive(Serialize, Deserialize)]
struct StepJson {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    value_at_infinity: f64,
}

impl TryFrom<StepJson> for StepFunction {
    type Error = Error;
    fn try_from(j: StepJson) -> Result<Self> {
        StepFunction::new(j.breakpoints, j.values, j.value_at_infinity)
    }
}

impl From<StepFunction> for StepJson {
    fn from(f: StepFunction) -> Self {
        StepJson {
            breakpoints: f.breakpoints,
            values: f.values,
            value_at_infinity: f.value_at_infinity,
        }
    }
}

impl StepFunction {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>, value_at_infinity: f64) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::InvalidStepFunction(format!(
                "{} breakpoints but {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidStepFunction("breakpoints must be real".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidStepFunction(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        if values.iter().chain([&value_at_infinity]).any(|v| !v.is_finite()) {
            return Err(Error::InvalidStepFunction("values must be real".into()));
        }
        Ok(StepFunction::canonical(breakpoints, values, value_at_infinity))
    }

    fn canonical(breakpoints: Vec<f64>, values: Vec<f64>, value_at_infinity: f64) -> Self {
        let mut bps = Vec::with_capacity(breakpoints.len());
        let mut vals: Vec<f64> = Vec::with_capacity(values.len());
        for (i, (b, v)) in breakpoints.iter().zip(&values).enumerate() {
            let next = values.get(i + 1).copied().unwrap_or(value_at_infinity);
            if *v != next {
                bps.push(*b);
                vals.push(*v);
            }
        }
        StepFunction {
            breakpoints: bps,
            values: vals,
            value_at_infinity,
        }
    }

    pub fn constant(c: f64) -> Result<Self> {
        StepFunction::new(Vec::new(), Vec::new(), c)
    }

    /// `value * 1_S`.
    pub fn indicator(set: &IntervalSet, value: f64) -> Result<Self> {
        StepFunction::from_partition(&[(set.clone(), value), (set.complement(), 0.0)])
    }

    /// Builds `sum_i a_i 1_{S_i}` from a partition of the line into members of
    /// the interval algebra. Empty parts are ignored.
    pub fn from_partition(parts: &[(IntervalSet, f64)]) -> Result<Self> {
        let mut pieces: Vec<(Interval, f64)> = parts
            .iter()
            .flat_map(|(s, a)| s.pieces().iter().map(move |p| (*p, *a)))
            .collect();
        pieces.sort_by(|x, y| x.0.lower().total_cmp(&y.0.lower()));
        let mut cursor = f64::NEG_INFINITY;
        for (p, _) in &pieces {
            if p.lower() != cursor {
                return Err(Error::InvalidStepFunction(format!(
                    "parts do not partition the line near {cursor}"
                )));
            }
            cursor = p.upper();
        }
        if cursor != f64::INFINITY {
            return Err(Error::InvalidStepFunction(format!(
                "parts do not cover ({cursor}, inf)"
            )));
        }
        let (last, init) = pieces.split_last().expect("cover is non-empty");
        StepFunction::new(
            init.iter().map(|(p, _)| p.upper()).collect(),
            init.iter().map(|(_, a)| *a).collect(),
            last.1,
        )
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_at_infinity(&self) -> f64 {
        self.value_at_infinity
    }

    pub fn eval(&self, t: f64) -> f64 {
        let i = self.breakpoints.partition_point(|b| *b < t);
        self.values.get(i).copied().unwrap_or(self.value_at_infinity)
    }

    /// The pieces of the defining partition, left to right.
    pub fn pieces(&self) -> Vec<(Interval, f64)> {
        let mut out = Vec::with_capacity(self.values.len() + 1);
        let mut lower = f64::NEG_INFINITY;
        for (b, v) in self.breakpoints.iter().zip(&self.values) {
            out.push((Interval::new(lower, *b).expect("increasing"), *v));
            lower = *b;
        }
        out.push((
            Interval::new(lower, f64::INFINITY).expect("finite lower"),
            self.value_at_infinity,
        ));
        out
    }

    /// Groups the pieces by value: the representation `sum_i a_i 1_{S_i}`
    /// with distinct `a_i`.
    pub fn partition(&self) -> Vec<(IntervalSet, f64)> {
        let mut groups: Vec<(Vec<Interval>, f64)> = Vec::new();
        for (piece, v) in self.pieces() {
            match groups.iter_mut().find(|(_, a)| *a == v) {
                Some((ps, _)) => ps.push(piece),
                None => groups.push((vec![piece], v)),
            }
        }
        groups
            .into_iter()
            .map(|(ps, a)| (IntervalSet::from_pieces(ps), a))
            .collect()
    }

    /// Combines two step functions piecewise over their common refinement.
    pub fn zip_with(&self, other: &StepFunction, op: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let mut merged: Vec<f64> = self
            .breakpoints
            .iter()
            .chain(&other.breakpoints)
            .copied()
            .collect();
        merged.sort_by(f64::total_cmp);
        merged.dedup();
        // Each merged breakpoint is the right endpoint of a common piece, so
        // evaluating there reads off both functions' values on that piece.
        let values = merged
            .iter()
            .map(|b| op(self.eval(*b), other.eval(*b)))
            .collect();
        StepFunction::new(
            merged,
            values,
            op(self.value_at_infinity, other.value_at_infinity),
        )
    }

    pub fn map(&self, op: impl Fn(f64) -> f64) -> Result<Self> {
        StepFunction::new(
            self.breakpoints.clone(),
            self.values.iter().map(|v| op(*v)).collect(),
            op(self.value_at_infinity),
        )
    }

    pub fn add(&self, other: &StepFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &StepFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        self.map(|v| c * v)
    }

    pub fn sup(&self, other: &StepFunction) -> Result<Self> {
        self.zip_with(other, f64::max)
    }

    pub fn inf(&self, other: &StepFunction) -> Result<Self> {
        self.zip_with(other, f64::min)
    }

    pub fn abs(&self) -> Result<Self> {
        self.map(f64::abs)
    }

    /// Pointwise `self <= other` on all of the line. Exact: the common
    /// breakpoints plus the value at infinity form a complete witness set.
    pub fn le(&self, other: &StepFunction) -> bool {
        self.breakpoints
            .iter()
            .chain(&other.breakpoints)
            .all(|b| self.eval(*b) <= other.eval(*b))
            && self.value_at_infinity <= other.value_at_infinity
    }

    pub fn is_zero(&self) -> bool {
        self.breakpoints.is_empty() && self.value_at_infinity == 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_form_merges_equal_neighbours() {
        let f = StepFunction::new(vec![0.0, 1.0, 2.0], vec![3.0, 3.0, 5.0], 5.0).unwrap();
        assert_eq!(f.breakpoints(), &[1.0]);
        assert_eq!(f.values(), &[3.0]);
        assert_eq!(f.value_at_infinity(), 5.0);
    }

    #[test]
    fn evaluation_respects_closed_right_endpoints() {
        let f = StepFunction::indicator(&IntervalSet::single(Interval::left_open(1.0, 2.0).unwrap()), 1.0)
            .unwrap();
        assert_eq!(f.eval(1.0), 0.0);
        assert_eq!(f.eval(1.5), 1.0);
        assert_eq!(f.eval(2.0), 1.0);
        assert_eq!(f.eval(2.0 + 1e-12), 0.0);
    }

    #[test]
    fn invalid_inputs() {
        assert!(StepFunction::new(vec![1.0, 1.0], vec![0.0, 1.0], 0.0).is_err());
        assert!(StepFunction::new(vec![1.0], vec![], 0.0).is_err());
        assert!(StepFunction::new(vec![f64::INFINITY], vec![1.0], 0.0).is_err());
        let gap = [(IntervalSet::single(Interval::ray_down(0.0).unwrap()), 1.0)];
        assert!(StepFunction::from_partition(&gap).is_err());
    }

    #[test]
    fn json_form() {
        let f = StepFunction::new(vec![0.0, 1.0], vec![2.0, -1.0], 4.0).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(text, r#"{"breakpoints":[0.0,1.0],"values":[2.0,-1.0],"value_at_infinity":4.0}"#);
        assert_eq!(serde_json::from_str::<StepFunction>(&text).unwrap(), f);
    }

    fn step() -> impl Strategy<Value = StepFunction> {
        prop::collection::btree_set(-20i32..20, 0..6).prop_flat_map(|bps| {
            let n = bps.len();
            (Just(bps), prop::collection::vec(-3i32..4, n + 1)).prop_map(|(bps, vals)| {
                StepFunction::new(
                    bps.iter().map(|b| *b as f64 / 4.0).collect(),
                    vals[..vals.len() - 1].iter().map(|v| *v as f64).collect(),
                    *vals.last().unwrap() as f64,
                )
                .unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn pointwise_operations(f in step(), g in step(), probe in -100i32..100) {
            let t = probe as f64 / 8.0;
            prop_assert_eq!(f.add(&g).unwrap().eval(t), f.eval(t) + g.eval(t));
            prop_assert_eq!(f.sup(&g).unwrap().eval(t), f.eval(t).max(g.eval(t)));
            prop_assert_eq!(f.inf(&g).unwrap().eval(t), f.eval(t).min(g.eval(t)));
            prop_assert_eq!(f.abs().unwrap().eval(t), f.eval(t).abs());
        }

        #[test]
        fn partition_round_trip(f in step()) {
            prop_assert_eq!(StepFunction::from_partition(&f.partition()).unwrap(), f.clone());
            let parts = f.partition();
            for (i, (s, _)) in parts.iter().enumerate() {
                for (t, _) in &parts[i + 1..] {
                    prop_assert!(s.is_disjoint(t));
                }
            }
        }

        #[test]
        fn order_is_exact(f in step(), g in step()) {
            let lo = f.inf(&g).unwrap();
            prop_assert!(lo.le(&f) && lo.le(&g));
            prop_assert_eq!(f.le(&g), f.sup(&g).unwrap() == g);
        }
    }
}
