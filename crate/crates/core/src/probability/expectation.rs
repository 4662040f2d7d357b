//! Conditional expectations as weighted block averages, and filtrations of
//! them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{ClopenSet, LatticeElement, StoneSpace, Tolerance};
use crate::mutation::{self, Mutation};

/// `F x` is, on each block `B` of a partition of the atoms,
/// `sum_{w in B} p_w x(w) / sum_{w in B} p_w` for strictly positive weights
/// `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalExpectation {
    space: StoneSpace,
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
    weights: Vec<f64>,
}

fn check_weights(space: StoneSpace, weights: &[f64]) -> Result<()> {
    if weights.len() != space.atoms() {
        return Err(Error::LengthMismatch {
            expected: space.atoms(),
            found: weights.len(),
        });
    }
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
        return Err(Error::InvalidWeights(format!("weight {w} is not strictly positive")));
    }
    Ok(())
}

impl ConditionalExpectation {
    pub fn new(space: StoneSpace, blocks: Vec<Vec<usize>>, weights: Vec<f64>) -> Result<Self> {
        check_weights(space, &weights)?;
        let mut block_of = vec![usize::MAX; space.atoms()];
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort();
        for (i, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &atom in block {
                if atom >= space.atoms() {
                    return Err(Error::AtomOutOfRange {
                        atom,
                        atoms: space.atoms(),
                    });
                }
                if block_of[atom] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("atom {atom} is in two blocks")));
                }
                block_of[atom] = i;
            }
        }
        if let Some(atom) = block_of.iter().position(|b| *b == usize::MAX) {
            return Err(Error::InvalidPartition(format!("atom {atom} is in no block")));
        }
        Ok(ConditionalExpectation {
            space,
            blocks,
            block_of,
            weights,
        })
    }

    /// The identity operator (every atom its own block).
    pub fn identity(space: StoneSpace, weights: Vec<f64>) -> Result<Self> {
        ConditionalExpectation::new(space, (0..space.atoms()).map(|a| vec![a]).collect(), weights)
    }

    /// Full averaging onto the constants.
    pub fn trivial(space: StoneSpace, weights: Vec<f64>) -> Result<Self> {
        ConditionalExpectation::new(space, vec![(0..space.atoms()).collect()], weights)
    }

    pub fn space(&self) -> StoneSpace {
        self.space
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn block_of(&self, atom: usize) -> usize {
        self.block_of[atom]
    }

    pub fn apply(&self, x: &LatticeElement) -> Result<LatticeElement> {
        self.space.ensure_same(&x.space())?;
        x.ensure_finite()?;
        let mut out = vec![0.0; self.space.atoms()];
        for block in &self.blocks {
            let first = x.get(block[0]);
            let value = if block.iter().all(|a| x.get(*a) == first) {
                first
            } else {
                let drop_weight = mutation::active(Mutation::CeDroppedWeight);
                let (num, den) = block.iter().fold((0.0, 0.0), |(n, d), a| {
                    let w = self.weights[*a];
                    let term = if drop_weight { x.get(*a) } else { w * x.get(*a) };
                    (n + term, d + w)
                });
                num / den
            };
            for a in block {
                out[*a] = value;
            }
        }
        LatticeElement::new(self.space, out)
    }

    /// Range membership: constant on every block.
    pub fn is_in_range(&self, x: &LatticeElement) -> bool {
        x.space() == self.space
            && self
                .blocks
                .iter()
                .all(|b| b.iter().all(|a| x.get(*a) == x.get(b[0])))
    }

    /// True iff the set is a union of blocks, i.e. its indicator is in the
    /// range.
    pub fn is_measurable(&self, set: &ClopenSet) -> bool {
        self.blocks
            .iter()
            .all(|b| b.iter().all(|a| set.contains(*a) == set.contains(b[0])))
    }

    /// Every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &ConditionalExpectation) -> bool {
        self.space == coarser.space
            && self
                .blocks
                .iter()
                .all(|b| b.iter().all(|a| coarser.block_of(*a) == coarser.block_of(b[0])))
    }
}

/// An increasing family `F_1, ..., F_T` of conditional expectations with
/// shared weights and refining partitions. Indices past `T` refer to `F_T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FiltrationJson", into = "FiltrationJson")]
pub struct Filtration {
    stages: Vec<ConditionalExpectation>,
}

#[derive(Serialize, Deserialize)]
struct FiltrationJson {
    weights: Vec<f64>,
    stages: Vec<Vec<Vec<usize>>>,
}

impl TryFrom<FiltrationJson> for Filtration {
    type Error = Error;
    fn try_from(j: FiltrationJson) -> Result<Self> {
        Filtration::from_partitions(j.weights, j.stages)
    }
}

impl From<Filtration> for FiltrationJson {
    fn from(f: Filtration) -> Self {
        FiltrationJson {
            weights: f.weights().to_vec(),
            stages: f.stages.iter().map(|s| s.blocks.clone()).collect(),
        }
    }
}

impl Filtration {
    pub fn new(stages: Vec<ConditionalExpectation>) -> Result<Self> {
        let first = stages
            .first()
            .ok_or_else(|| Error::InvalidFiltration("no stages".into()))?;
        for (t, pair) in stages.windows(2).enumerate() {
            if pair[1].weights != first.weights || pair[1].space != first.space {
                return Err(Error::InvalidFiltration(format!(
                    "stage {} uses different weights",
                    t + 2
                )));
            }
            if !pair[1].refines(&pair[0]) {
                return Err(Error::InvalidFiltration(format!(
                    "stage {} does not refine stage {}",
                    t + 2,
                    t + 1
                )));
            }
        }
        Ok(Filtration { stages })
    }

    pub fn from_partitions(weights: Vec<f64>, partitions: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let space = StoneSpace::new(weights.len())?;
        let stages = partitions
            .into_iter()
            .map(|p| ConditionalExpectation::new(space, p, weights.clone()))
            .collect::<Result<Vec<_>>>()?;
        Filtration::new(stages)
    }

    /// The filtration that is constant at `ce` for `horizon` stages.
    pub fn constant(ce: ConditionalExpectation, horizon: usize) -> Result<Self> {
        Filtration::new(vec![ce; horizon.max(1)])
    }

    pub fn space(&self) -> StoneSpace {
        self.stages[0].space
    }

    pub fn weights(&self) -> &[f64] {
        &self.stages[0].weights
    }

    /// Number of explicitly given stages `T`.
    pub fn horizon(&self) -> usize {
        self.stages.len()
    }

    /// `F_n` for `n >= 1`; `n > T` gives `F_T` and `n = 0` gives `F_1`.
    pub fn stage(&self, n: usize) -> &ConditionalExpectation {
        &self.stages[n.clamp(1, self.stages.len()) - 1]
    }

    pub fn stages(&self) -> &[ConditionalExpectation] {
        &self.stages
    }

    /// Checks `F_s F_t = F_t F_s = F_s` for `s <= t` on the indicators of the
    /// atoms, which span the space.
    pub fn verify_tower(&self, tol: Tolerance) -> Result<()> {
        let space = self.space();
        for s in 1..=self.horizon() {
            for t in s..=self.horizon() {
                let (fs, ft) = (self.stage(s), self.stage(t));
                for atom in 0..space.atoms() {
                    let e = ClopenSet::from_atoms(space, [atom])?.indicator();
                    let direct = fs.apply(&e)?;
                    let st = fs.apply(&ft.apply(&e)?)?;
                    let ts = ft.apply(&fs.apply(&e)?)?;
                    if !st.approx_eq(&direct, tol) || !ts.approx_eq(&direct, tol) {
                        return Err(Error::InvalidFiltration(format!(
                            "tower property fails for s={s}, t={t} on atom {atom}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}
