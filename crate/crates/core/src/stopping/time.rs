//! Discrete stopping times and their closure operations.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{BandProjection, ClopenSet, LatticeElement, StoneSpace, Tolerance};
use crate::probability::Filtration;

/// An element of `{1, 2, ...} ∪ {inf}` (zero is representable but never a
/// valid stopping-time value). Orders with `Infinity` on top.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtNat {
    Finite(u64),
    Infinity,
}

impl ExtNat {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtNat::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Finite(n) => Some(n),
            ExtNat::Infinity => None,
        }
    }

    /// Sum with `inf` absorbing; overflow saturates to `inf`.
    pub fn plus(self, other: ExtNat) -> ExtNat {
        match (self, other) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => a.checked_add(b).map_or(ExtNat::Infinity, ExtNat::Finite),
            _ => ExtNat::Infinity,
        }
    }

    pub fn le_n(self, n: u64) -> bool {
        self <= ExtNat::Finite(n)
    }

    pub fn to_f64(self) -> f64 {
        match self {
            ExtNat::Finite(n) => n as f64,
            ExtNat::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(n) => write!(f, "{n}"),
            ExtNat::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ExtNatRepr {
    Finite(u64),
    Word(String),
}

impl Serialize for ExtNat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtNat::Finite(n) => ExtNatRepr::Finite(*n),
            ExtNat::Infinity => ExtNatRepr::Word("inf".into()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExtNat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match ExtNatRepr::deserialize(d)? {
            ExtNatRepr::Finite(n) => Ok(ExtNat::Finite(n)),
            ExtNatRepr::Word(w) if w == "inf" => Ok(ExtNat::Infinity),
            ExtNatRepr::Word(w) => Err(serde::de::Error::custom(format!("expected a natural or \"inf\", got {w:?}"))),
        }
    }
}

/// Wire form of a stopping time; the filtration is referenced by id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoppingTimeDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filtration: Option<String>,
    pub values: Vec<ExtNat>,
}

/// `tau: atoms -> {1, 2, ...} ∪ {inf}` with `{tau = n}` a union of blocks of
/// `F_n` for every `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct StoppingTime {
    filtration: Arc<Filtration>,
    values: Vec<ExtNat>,
}

pub(crate) fn same_filtration(a: &Arc<Filtration>, b: &Arc<Filtration>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// The first `n` for which `{tau = n}` is not `F_n`-measurable, by block
/// enumeration.
pub fn measurability_violation(filtration: &Filtration, values: &[ExtNat]) -> Option<u64> {
    let mut levels: Vec<u64> = values.iter().filter_map(|v| v.finite()).collect();
    levels.sort_unstable();
    levels.dedup();
    levels.into_iter().find(|&n| {
        let stage = filtration.stage(n as usize);
        stage
            .blocks()
            .iter()
            .any(|b| b.iter().any(|a| (values[*a] == ExtNat::Finite(n)) != (values[b[0]] == ExtNat::Finite(n))))
    })
}

impl StoppingTime {
    pub fn new(filtration: Arc<Filtration>, values: Vec<ExtNat>) -> Result<Self> {
        let atoms = filtration.space().atoms();
        if values.len() != atoms {
            return Err(Error::LengthMismatch {
                expected: atoms,
                found: values.len(),
            });
        }
        if values.contains(&ExtNat::Finite(0)) {
            return Err(Error::InvalidStoppingTime("stopping times take values in 1, 2, ..., inf".into()));
        }
        if let Some(n) = measurability_violation(&filtration, &values) {
            return Err(Error::InvalidStoppingTime(format!("{{tau = {n}}} is not measurable at stage {n}")));
        }
        Ok(StoppingTime { filtration, values })
    }

    pub fn constant(filtration: Arc<Filtration>, value: ExtNat) -> Result<Self> {
        let atoms = filtration.space().atoms();
        StoppingTime::new(filtration, vec![value; atoms])
    }

    pub fn from_doc(doc: &StoppingTimeDoc, filtration: Arc<Filtration>) -> Result<Self> {
        StoppingTime::new(filtration, doc.values.clone())
    }

    pub fn to_doc(&self, filtration_id: Option<&str>) -> StoppingTimeDoc {
        StoppingTimeDoc {
            filtration: filtration_id.map(str::to_string),
            values: self.values.clone(),
        }
    }

    pub fn filtration(&self) -> &Arc<Filtration> {
        &self.filtration
    }

    pub fn space(&self) -> StoneSpace {
        self.filtration.space()
    }

    pub fn values(&self) -> &[ExtNat] {
        &self.values
    }

    pub fn get(&self, atom: usize) -> ExtNat {
        self.values[atom]
    }

    /// `{tau = n}`.
    pub fn level_set(&self, n: ExtNat) -> ClopenSet {
        ClopenSet::filter(self.space(), |a| self.values[a] == n)
    }

    /// `{tau <= n}`.
    pub fn at_most(&self, n: u64) -> ClopenSet {
        ClopenSet::filter(self.space(), |a| self.values[a].le_n(n))
    }

    /// Largest finite value, if any.
    pub fn max_finite(&self) -> Option<u64> {
        self.values.iter().filter_map(|v| v.finite()).max()
    }

    /// True iff every value is finite and at most `horizon`.
    pub fn is_bounded_by(&self, horizon: u64) -> bool {
        self.values.iter().all(|v| v.le_n(horizon))
    }

    /// `tau` as a sup-completion element: `n` on `{tau = n}`, `+inf` on
    /// `{tau = inf}`.
    pub fn to_element(&self) -> LatticeElement {
        LatticeElement::new(self.space(), self.values.iter().map(|v| v.to_f64()).collect())
            .expect("naturals and +inf are extended reals")
    }

    /// `P_1, ..., P_n` with `P_k` the projection onto `{tau <= k}`.
    pub fn to_projections_until(&self, n: u64) -> Vec<BandProjection> {
        (1..=n).map(|k| BandProjection::onto(self.at_most(k))).collect()
    }

    /// Projections up to the last index at which they can still change: the
    /// larger of the largest finite value and the filtration horizon.
    pub fn to_projections(&self) -> Vec<BandProjection> {
        let n = self.max_finite().unwrap_or(0).max(self.filtration.horizon() as u64);
        self.to_projections_until(n)
    }

    fn check_compatible(&self, other: &StoppingTime) -> Result<()> {
        self.space().ensure_same(&other.space())?;
        if !same_filtration(&self.filtration, &other.filtration) {
            return Err(Error::FiltrationMismatch);
        }
        Ok(())
    }

    fn zip(&self, other: &StoppingTime, op: impl Fn(ExtNat, ExtNat) -> ExtNat) -> Result<StoppingTime> {
        self.check_compatible(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| op(*a, *b)).collect();
        StoppingTime::new(self.filtration.clone(), values)
    }

    fn relevant_levels(times: &[&StoppingTime]) -> u64 {
        times.iter().filter_map(|t| t.max_finite()).max().unwrap_or(0)
    }

    /// `sigma ∨ tau`, checking `{sigma ∨ tau <= n} = {sigma <= n} ∩ {tau <= n}`.
    pub fn join(&self, other: &StoppingTime) -> Result<StoppingTime> {
        let out = self.zip(other, ExtNat::max)?;
        for n in 1..=Self::relevant_levels(&[self, other]) {
            if out.at_most(n) != self.at_most(n).intersection(&other.at_most(n))? {
                return Err(Error::InvalidStoppingTime(format!("join level identity fails at {n}")));
            }
        }
        Ok(out)
    }

    /// `sigma ∧ tau`, checking `{sigma ∧ tau <= n} = {sigma <= n} ∪ {tau <= n}`.
    pub fn meet(&self, other: &StoppingTime) -> Result<StoppingTime> {
        let out = self.zip(other, ExtNat::min)?;
        for n in 1..=Self::relevant_levels(&[self, other]) {
            if out.at_most(n) != self.at_most(n).union(&other.at_most(n))? {
                return Err(Error::InvalidStoppingTime(format!("meet level identity fails at {n}")));
            }
        }
        Ok(out)
    }

    /// `sigma + tau` with `inf` absorbing.
    pub fn plus(&self, other: &StoppingTime) -> Result<StoppingTime> {
        self.zip(other, ExtNat::plus)
    }

    /// `tau ∧ n` for a natural `n >= 1`.
    pub fn truncate(&self, n: u64) -> Result<StoppingTime> {
        let values = self.values.iter().map(|v| (*v).min(ExtNat::Finite(n))).collect();
        StoppingTime::new(self.filtration.clone(), values)
    }

    /// `n_tau`, where `nk[k - 1] = n_k`, with `inf` fixed.
    pub fn time_change(&self, nk: &[u64]) -> Result<StoppingTime> {
        if let Some(k) = nk.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::NotIncreasing(format!("n_{} >= n_{}", k + 1, k + 2)));
        }
        if let Some(k) = nk.iter().enumerate().position(|(i, n)| *n < i as u64 + 1) {
            return Err(Error::DomainViolation(format!("n_{} = {} is below {}", k + 1, nk[k], k + 1)));
        }
        let needed = self.max_finite().unwrap_or(0);
        if (nk.len() as u64) < needed {
            return Err(Error::DomainViolation(format!(
                "the sequence has {} terms but tau reaches {needed}",
                nk.len()
            )));
        }
        let values = self
            .values
            .iter()
            .map(|v| match v {
                ExtNat::Finite(k) => ExtNat::Finite(nk[*k as usize - 1]),
                ExtNat::Infinity => ExtNat::Infinity,
            })
            .collect();
        let out = StoppingTime::new(self.filtration.clone(), values)?;
        for k in 1..=needed {
            if out.level_set(ExtNat::Finite(nk[k as usize - 1])) != self.level_set(ExtNat::Finite(k)) {
                return Err(Error::InvalidStoppingTime(format!("time change relabels level {k} inconsistently")));
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extremum {
    Sup,
    Inf,
}

/// Pointwise supremum or infimum of a non-empty family, checking
/// `{sup tau_n <= k} = ∩_n {tau_n <= k}` (resp. `∪_n` for the infimum).
pub fn extremum(family: &[StoppingTime], which: Extremum) -> Result<StoppingTime> {
    let first = family.first().ok_or(Error::EmptyFamily)?;
    for t in &family[1..] {
        first.check_compatible(t)?;
    }
    let values = (0..first.space().atoms())
        .map(|a| {
            let it = family.iter().map(|t| t.get(a));
            match which {
                Extremum::Sup => it.max(),
                Extremum::Inf => it.min(),
            }
            .expect("non-empty family")
        })
        .collect();
    let out = StoppingTime::new(first.filtration.clone(), values)?;
    let refs: Vec<&StoppingTime> = family.iter().collect();
    for k in 1..=StoppingTime::relevant_levels(&refs) {
        let mut expected = first.at_most(k);
        for t in &family[1..] {
            expected = match which {
                Extremum::Sup => expected.intersection(&t.at_most(k))?,
                Extremum::Inf => expected.union(&t.at_most(k))?,
            };
        }
        if out.at_most(k) != expected {
            return Err(Error::InvalidStoppingTime(format!("extremum level identity fails at {k}")));
        }
    }
    Ok(out)
}

/// Builds `tau` from an increasing sequence `P_1 <= P_2 <= ...` (with
/// `P_0 = 0`) commuting with the filtration, as the lateral sum
/// `inf 1_V + sum_n n 1_{U_n}` with `U_n = W_n \ W_{n-1}` and `V` the
/// complement of the last band.
pub fn from_projections(bands: &[BandProjection], filtration: Arc<Filtration>) -> Result<StoppingTime> {
    let space = filtration.space();
    for (i, p) in bands.iter().enumerate() {
        space.ensure_same(&p.space())?;
        if i > 0 && !bands[i - 1].le(p)? {
            return Err(Error::NotIncreasing(format!("P_{i} is not below P_{}", i + 1)));
        }
    }
    let tol = Tolerance::default();
    for (i, p) in bands.iter().enumerate() {
        for j in (i + 1)..=bands.len().max(filtration.horizon()) {
            let fj = filtration.stage(j);
            for atom in 0..space.atoms() {
                let e = ClopenSet::from_atoms(space, [atom])?.indicator();
                let left = fj.apply(&p.apply(&e)?)?;
                let right = p.apply(&fj.apply(&e)?)?;
                if !left.approx_eq(&right, tol) {
                    return Err(Error::CommutationFailure(format!(
                        "F_{j} P_{} != P_{} F_{j} on atom {atom}",
                        i + 1,
                        i + 1
                    )));
                }
            }
        }
    }

    let mut previous = space.empty();
    let mut pieces = Vec::with_capacity(bands.len());
    let mut sum = space.zero();
    for (i, p) in bands.iter().enumerate() {
        let u = p.support().difference(&previous)?;
        sum = sum.add(&u.indicator().scale((i + 1) as f64)?)?;
        pieces.push(u);
        previous = p.support().clone();
    }
    let v = previous.complement();
    sum = sum.add(&v.indicator().scale(f64::INFINITY)?)?;
    let values = sum
        .values()
        .iter()
        .map(|x| if x.is_infinite() { ExtNat::Infinity } else { ExtNat::Finite(*x as u64) })
        .collect();
    let tau = StoppingTime::new(filtration, values)?;
    for (i, u) in pieces.iter().enumerate() {
        if tau.level_set(ExtNat::Finite(i as u64 + 1)) != *u {
            return Err(Error::InvalidStoppingTime(format!("level set {} is not recovered", i + 1)));
        }
    }
    Ok(tau)
}
