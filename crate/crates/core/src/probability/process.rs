//! Adapted processes and their martingale classification.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::expectation::Filtration;
use crate::error::{Error, Result};
use crate::lattice::{LatticeElement, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProcessClass {
    Martingale,
    Submartingale,
    Supermartingale,
    None,
}

/// `(X_1, ..., X_T)` with `F_t X_t = X_t` for every `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedProcess {
    filtration: Arc<Filtration>,
    path: Vec<LatticeElement>,
}

impl AdaptedProcess {
    pub fn new(filtration: Arc<Filtration>, path: Vec<LatticeElement>) -> Result<Self> {
        if path.is_empty() {
            return Err(Error::EmptyFamily);
        }
        for (i, x) in path.iter().enumerate() {
            filtration.space().ensure_same(&x.space())?;
            x.ensure_finite()?;
            if !filtration.stage(i + 1).is_in_range(x) {
                return Err(Error::NotAdapted { time: i + 1 });
            }
        }
        Ok(AdaptedProcess { filtration, path })
    }

    /// The Doob martingale `X_t = F_t X` for `t = 1..=horizon`.
    pub fn doob(filtration: Arc<Filtration>, terminal: &LatticeElement, horizon: usize) -> Result<Self> {
        let path = (1..=horizon)
            .map(|t| filtration.stage(t).apply(terminal))
            .collect::<Result<Vec<_>>>()?;
        AdaptedProcess::new(filtration, path)
    }

    /// Parses the path form: a list of value arrays, one per time.
    pub fn from_values(filtration: Arc<Filtration>, path: Vec<Vec<f64>>) -> Result<Self> {
        let space = filtration.space();
        let path = path
            .into_iter()
            .map(|v| LatticeElement::new(space, v))
            .collect::<Result<Vec<_>>>()?;
        AdaptedProcess::new(filtration, path)
    }

    pub fn to_values(&self) -> Vec<Vec<f64>> {
        self.path.iter().map(|x| x.values().to_vec()).collect()
    }

    pub fn filtration(&self) -> &Arc<Filtration> {
        &self.filtration
    }

    pub fn path(&self) -> &[LatticeElement] {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }

    /// `X_t` for `1 <= t <= len`.
    pub fn at(&self, t: usize) -> &LatticeElement {
        &self.path[t - 1]
    }

    /// Applies `f` atomwise at each time. The image is adapted because each
    /// stage's range is closed under atomwise maps.
    pub fn map_path(&self, f: impl Fn(&LatticeElement) -> Result<LatticeElement>) -> Result<Self> {
        let path = self.path.iter().map(f).collect::<Result<Vec<_>>>()?;
        AdaptedProcess::new(self.filtration.clone(), path)
    }

    /// Compares `F_t X_s` with `X_t` for all `t <= s`.
    pub fn classify(&self, tol: Tolerance) -> ProcessClass {
        let (mut sub, mut sup) = (true, true);
        for t in 1..=self.len() {
            let xt = self.at(t);
            for s in t..=self.len() {
                let projected = self
                    .filtration
                    .stage(t)
                    .apply(self.at(s))
                    .expect("path elements are finite and share the space");
                for atom in 0..xt.space().atoms() {
                    sub &= tol.le(xt.get(atom), projected.get(atom));
                    sup &= tol.le(projected.get(atom), xt.get(atom));
                }
            }
        }
        match (sub, sup) {
            (true, true) => ProcessClass::Martingale,
            (true, false) => ProcessClass::Submartingale,
            (false, true) => ProcessClass::Supermartingale,
            (false, false) => ProcessClass::None,
        }
    }

    pub fn is_increasing(&self) -> bool {
        self.path
            .windows(2)
            .all(|w| w[0].le(&w[1]).unwrap_or(false))
    }
}

pub fn classify_process(p: &AdaptedProcess, tol: Tolerance) -> ProcessClass {
    p.classify(tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::StoneSpace;
    use crate::probability::ConditionalExpectation;

    fn trivial(atoms: usize, horizon: usize) -> Arc<Filtration> {
        let space = StoneSpace::new(atoms).unwrap();
        let ce = ConditionalExpectation::trivial(space, vec![1.0; atoms]).unwrap();
        Arc::new(Filtration::constant(ce, horizon).unwrap())
    }

    #[test]
    fn constant_path_is_a_martingale() {
        let f = trivial(3, 4);
        let c = f.space().constant(2.5);
        let p = AdaptedProcess::new(f, vec![c; 4]).unwrap();
        assert_eq!(p.classify(Tolerance::EXACT), ProcessClass::Martingale);
    }

    #[test]
    fn linear_drift_is_a_submartingale() {
        let f = trivial(2, 3);
        let path = (1..=3).map(|t| f.space().constant(t as f64)).collect();
        let p = AdaptedProcess::new(f.clone(), path).unwrap();
        assert_eq!(p.classify(Tolerance::EXACT), ProcessClass::Submartingale);
        let down = p.map_path(|x| Ok(x.neg())).unwrap();
        assert_eq!(down.classify(Tolerance::EXACT), ProcessClass::Supermartingale);
    }

    #[test]
    fn non_adapted_paths_are_rejected() {
        let f = trivial(2, 2);
        let x = LatticeElement::from_values(vec![0.0, 1.0]).unwrap();
        assert_eq!(
            AdaptedProcess::new(f, vec![x.clone(), x]).unwrap_err(),
            Error::NotAdapted { time: 1 }
        );
    }

    #[test]
    fn doob_martingale() {
        let f = Arc::new(
            Filtration::from_partitions(
                vec![1.0, 2.0, 0.5, 1.5],
                vec![vec![vec![0, 1, 2, 3]], vec![vec![0, 1], vec![2, 3]], vec![vec![0], vec![1], vec![2], vec![3]]],
            )
            .unwrap(),
        );
        let x = LatticeElement::from_values(vec![3.0, -1.0, 0.25, 8.0]).unwrap();
        let p = AdaptedProcess::doob(f, &x, 3).unwrap();
        assert_eq!(p.classify(Tolerance::default()), ProcessClass::Martingale);
        let abs = p.map_path(|x| Ok(x.abs())).unwrap();
        assert_eq!(abs.classify(Tolerance::default()), ProcessClass::Submartingale);
    }
}
