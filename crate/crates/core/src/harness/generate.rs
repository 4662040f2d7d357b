//! Seeded random instances.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::SuiteConfig;
use crate::lattice::{LatticeElement, StoneSpace};
use crate::probability::{AdaptedProcess, ConditionalExpectation, Filtration};
use crate::spectral::{ContinuousFunction, Interval, IntervalSet, StepFunction};
use crate::stopping::{ExtNat, StoppingTime};

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// The stream of trial `trial` of property `property`:
/// `splitmix64(splitmix64(seed ^ fnv1a64(property)) + trial)`, fed to
/// ChaCha8 as a 64-bit seed.
pub fn trial_seed(seed: u64, property: &str, trial: u64) -> u64 {
    let name = property.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    });
    splitmix64(splitmix64(seed ^ name).wrapping_add(trial))
}

/// Closed-form continuous functions with known Lipschitz bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedForm {
    /// `sum_k c_k t^k`.
    Polynomial { coefficients: Vec<f64> },
    /// Linear interpolation through `(knots[i], values[i])`, constant outside.
    PiecewiseLinear { knots: Vec<f64>, values: Vec<f64> },
}

impl ClosedForm {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            ClosedForm::Polynomial { coefficients } => coefficients.iter().rev().fold(0.0, |acc, c| acc * t + c),
            ClosedForm::PiecewiseLinear { knots, values } => {
                let i = knots.partition_point(|k| *k < t);
                if i == 0 {
                    values[0]
                } else if i == knots.len() {
                    values[values.len() - 1]
                } else {
                    let s = (t - knots[i - 1]) / (knots[i] - knots[i - 1]);
                    values[i - 1] + s * (values[i] - values[i - 1])
                }
            }
        }
    }

    /// A Lipschitz bound on `[a, b]`.
    pub fn lipschitz(&self, a: f64, b: f64) -> f64 {
        match self {
            ClosedForm::Polynomial { coefficients } => {
                let r = a.abs().max(b.abs());
                coefficients
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, c)| k as f64 * c.abs() * r.powi(k as i32 - 1))
                    .sum()
            }
            ClosedForm::PiecewiseLinear { knots, values } => knots
                .windows(2)
                .zip(values.windows(2))
                .map(|(k, v)| ((v[1] - v[0]) / (k[1] - k[0])).abs())
                .fold(0.0, f64::max),
        }
    }

    pub fn to_function(&self) -> ContinuousFunction {
        let (f, l) = (self.clone(), self.clone());
        let name = match self {
            ClosedForm::Polynomial { .. } => "polynomial",
            ClosedForm::PiecewiseLinear { .. } => "piecewise_linear",
        };
        ContinuousFunction::univariate(name, move |t| f.eval(t)).with_lipschitz(move |bbox| {
            let (a, b) = bbox[0];
            l.lipschitz(a, b)
        })
    }
}

/// Random instances drawn from one trial stream.
pub struct Gen {
    rng: ChaCha8Rng,
    atoms: (usize, usize),
    horizon: (usize, usize),
}

impl Gen {
    pub fn new(cfg: &SuiteConfig, seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            atoms: cfg.atoms,
            horizon: cfg.horizon,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn usize_in(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn real(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    /// A multiple of `1/4` in `[-10, 10]`; sums and small products of these
    /// are exact.
    pub fn dyadic(&mut self) -> f64 {
        self.rng.gen_range(-40i32..=40) as f64 / 4.0
    }

    pub fn space(&mut self) -> StoneSpace {
        let n = self.usize_in(self.atoms.0, self.atoms.1);
        StoneSpace::new(n).expect("validated range")
    }

    pub fn horizon(&mut self) -> usize {
        self.usize_in(self.horizon.0, self.horizon.1)
    }

    /// Reals in `[-10, 10]` with deliberate ties between atoms.
    pub fn element(&mut self, space: StoneSpace) -> LatticeElement {
        self.element_with(space, |g| g.real(-10.0, 10.0))
    }

    /// Like [`Gen::element`] with dyadic values.
    pub fn dyadic_element(&mut self, space: StoneSpace) -> LatticeElement {
        self.element_with(space, Gen::dyadic)
    }

    fn element_with(&mut self, space: StoneSpace, mut draw: impl FnMut(&mut Gen) -> f64) -> LatticeElement {
        let pool: Vec<f64> = (0..space.atoms().div_ceil(2)).map(|_| draw(self)).collect();
        let values = (0..space.atoms())
            .map(|_| if self.chance(0.5) { *pool.choose(&mut self.rng).expect("non-empty") } else { draw(self) })
            .collect();
        LatticeElement::new(space, values).expect("finite values")
    }

    /// Non-negative dyadic values, `+inf` at each atom with probability `p_inf`.
    pub fn sup_element(&mut self, space: StoneSpace, p_inf: f64) -> LatticeElement {
        let values = (0..space.atoms())
            .map(|_| if self.chance(p_inf) { f64::INFINITY } else { self.dyadic().abs() })
            .collect();
        LatticeElement::new(space, values).expect("extended reals")
    }

    /// Sorted distinct reals: half from `anchors`, half fresh dyadics.
    pub fn cut_points(&mut self, anchors: &[f64], max: usize) -> Vec<f64> {
        let n = self.usize_in(0, max);
        let mut cuts: Vec<f64> = (0..n)
            .map(|_| match anchors.choose(&mut self.rng) {
                Some(a) if self.rng.gen_bool(0.5) => *a,
                _ => self.dyadic(),
            })
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        cuts
    }

    /// A random member of the interval algebra with endpoints drawn partly
    /// from `anchors`.
    pub fn interval_set(&mut self, anchors: &[f64]) -> IntervalSet {
        let cuts = self.cut_points(anchors, 5);
        let mut lower = f64::NEG_INFINITY;
        let mut pieces = Vec::new();
        for upper in cuts.iter().copied().chain([f64::INFINITY]) {
            if self.chance(0.5) {
                pieces.push(Interval::new(lower, upper).expect("increasing cuts"));
            }
            lower = upper;
        }
        IntervalSet::from_pieces(pieces)
    }

    /// A step function with dyadic values and breakpoints drawn partly from
    /// `anchors`.
    pub fn step_function(&mut self, anchors: &[f64]) -> StepFunction {
        let cuts = self.cut_points(anchors, 6);
        let values = cuts.iter().map(|_| self.dyadic()).collect();
        let tail = self.dyadic();
        StepFunction::new(cuts, values, tail).expect("valid cuts")
    }

    pub fn closed_form(&mut self) -> ClosedForm {
        if self.chance(0.5) {
            let degree = self.usize_in(0, 3);
            ClosedForm::Polynomial {
                coefficients: (0..=degree).map(|_| self.rng.gen_range(-8i32..=8) as f64 / 4.0).collect(),
            }
        } else {
            let n = self.usize_in(2, 6);
            let mut knots: Vec<f64> = Vec::new();
            while knots.len() < n {
                let k = self.dyadic();
                if !knots.contains(&k) {
                    knots.push(k);
                }
            }
            knots.sort_by(f64::total_cmp);
            ClosedForm::PiecewiseLinear {
                values: knots.iter().map(|_| self.dyadic()).collect(),
                knots,
            }
        }
    }

    pub fn weights(&mut self, space: StoneSpace) -> Vec<f64> {
        (0..space.atoms()).map(|_| self.real(0.1, 3.0)).collect()
    }

    /// A random partition of the atoms.
    pub fn partition(&mut self, space: StoneSpace) -> Vec<Vec<usize>> {
        let labels = self.usize_in(1, space.atoms());
        let mut blocks = vec![Vec::new(); labels];
        for atom in 0..space.atoms() {
            let l = self.usize_in(0, labels - 1);
            blocks[l].push(atom);
        }
        blocks.retain(|b| !b.is_empty());
        blocks
    }

    /// Splits some blocks of `partition` in two.
    pub fn refine(&mut self, partition: &[Vec<usize>]) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for block in partition {
            if block.len() > 1 && self.chance(0.5) {
                let (mut a, mut b) = (Vec::new(), Vec::new());
                for atom in block {
                    if self.chance(0.5) {
                        a.push(*atom)
                    } else {
                        b.push(*atom)
                    }
                }
                out.extend([a, b].into_iter().filter(|p| !p.is_empty()));
            } else {
                out.push(block.clone());
            }
        }
        out
    }

    pub fn conditional_expectation(&mut self, space: StoneSpace) -> ConditionalExpectation {
        let weights = self.weights(space);
        let blocks = self.partition(space);
        ConditionalExpectation::new(space, blocks, weights).expect("valid partition")
    }

    pub fn filtration(&mut self, space: StoneSpace, horizon: usize) -> Arc<Filtration> {
        let weights = self.weights(space);
        let mut partitions = vec![self.partition(space)];
        while partitions.len() < horizon {
            let next = self.refine(partitions.last().expect("non-empty"));
            partitions.push(next);
        }
        Arc::new(Filtration::from_partitions(weights, partitions).expect("refining partitions"))
    }

    /// A dyadic element constant on the blocks of `ce`.
    pub fn block_constant(&mut self, ce: &ConditionalExpectation) -> LatticeElement {
        let mut values = vec![0.0; ce.space().atoms()];
        for block in ce.blocks() {
            let v = self.dyadic();
            for a in block {
                values[*a] = v;
            }
        }
        LatticeElement::new(ce.space(), values).expect("finite")
    }

    /// `X_t = F_t X` for a random terminal `X`.
    pub fn martingale(&mut self, filtration: &Arc<Filtration>) -> AdaptedProcess {
        let terminal = self.element(filtration.space());
        AdaptedProcess::doob(filtration.clone(), &terminal, filtration.horizon()).expect("doob construction")
    }

    /// `X_1 <= X_2 <= ...` with `X_n` constant on the blocks of `F_n`.
    pub fn increasing_process(&mut self, filtration: &Arc<Filtration>) -> AdaptedProcess {
        let mut path: Vec<LatticeElement> = Vec::new();
        for t in 1..=filtration.horizon() {
            let step = self.block_constant(filtration.stage(t)).abs();
            let next = match path.last() {
                Some(prev) => prev.add(&step).expect("finite"),
                None => self.block_constant(filtration.stage(1)),
            };
            path.push(next);
        }
        AdaptedProcess::new(filtration.clone(), path).expect("adapted by construction")
    }

    /// A measurable stopping time: each not-yet-stopped block of `F_n` stops
    /// at `n` with some probability. Past the horizon the remaining blocks
    /// of `F_T` stop at `bound` if given, else at a later time or never.
    pub fn stopping_time(&mut self, filtration: &Arc<Filtration>, bound: Option<u64>) -> StoppingTime {
        let horizon = filtration.horizon() as u64;
        let last = bound.unwrap_or(horizon).max(1);
        let mut values: Vec<Option<ExtNat>> = vec![None; filtration.space().atoms()];
        let p = self.real(0.1, 0.6);
        for n in 1..=last.min(horizon) {
            for block in filtration.stage(n as usize).blocks() {
                if values[block[0]].is_none() && (n == last || self.chance(p)) {
                    for a in block {
                        values[*a] = Some(ExtNat::Finite(n));
                    }
                }
            }
        }
        for block in filtration.stage(horizon as usize).blocks() {
            if values[block[0]].is_none() {
                let v = match bound {
                    Some(b) => ExtNat::Finite(b),
                    None if self.chance(0.5) => ExtNat::Infinity,
                    None => ExtNat::Finite(horizon + self.usize_in(1, 3) as u64),
                };
                for a in block {
                    values[*a] = Some(v);
                }
            }
        }
        let values = values.into_iter().map(|v| v.expect("every block assigned")).collect();
        StoppingTime::new(filtration.clone(), values).expect("measurable by construction")
    }
}
