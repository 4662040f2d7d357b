//! Finite Stone space model of an order complete vector lattice with weak unit.
//!
//! A [`StoneSpace`] is a finite discrete set of atoms. Every subset is clopen,
//! so a [`ClopenSet`] is just a membership mask, and lattice elements are
//! extended-real functions on the atoms. Finite elements model the lattice
//! itself; elements that take `+inf` but never `-inf` model its
//! sup-completion. The weak unit is the all-ones element.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::ext_real_vec;

/// A finite discrete compact space. Two spaces are equal iff they have the
/// same number of atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SpaceJson", into = "SpaceJson")]
pub struct StoneSpace {
    atoms: usize,
}

#[derive(Serialize, Deserialize)]
struct SpaceJson {
    atoms: usize,
}

impl TryFrom<SpaceJson> for StoneSpace {
    type Error = Error;
    fn try_from(j: SpaceJson) -> Result<Self> {
        StoneSpace::new(j.atoms)
    }
}

impl From<StoneSpace> for SpaceJson {
    fn from(s: StoneSpace) -> Self {
        SpaceJson { atoms: s.atoms }
    }
}

impl StoneSpace {
    pub fn new(atoms: usize) -> Result<Self> {
        if atoms == 0 {
            return Err(Error::EmptySpace);
        }
        Ok(StoneSpace { atoms })
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn ensure_same(&self, other: &StoneSpace) -> Result<()> {
        if self.atoms != other.atoms {
            return Err(Error::SpaceMismatch {
                left: self.atoms,
                right: other.atoms,
            });
        }
        Ok(())
    }

    pub fn full(&self) -> ClopenSet {
        ClopenSet {
            space: *self,
            members: vec![true; self.atoms],
        }
    }

    pub fn empty(&self) -> ClopenSet {
        ClopenSet {
            space: *self,
            members: vec![false; self.atoms],
        }
    }

    /// The weak unit `E`.
    pub fn unit(&self) -> LatticeElement {
        self.constant(1.0)
    }

    pub fn zero(&self) -> LatticeElement {
        self.constant(0.0)
    }

    pub fn constant(&self, c: f64) -> LatticeElement {
        LatticeElement {
            space: *self,
            values: vec![c; self.atoms],
        }
    }
}

/// A clopen subset of a finite Stone space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ClopenJson", into = "ClopenJson")]
pub struct ClopenSet {
    space: StoneSpace,
    members: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct ClopenJson {
    atoms: usize,
    values: Vec<u8>,
}

impl TryFrom<ClopenJson> for ClopenSet {
    type Error = Error;
    fn try_from(j: ClopenJson) -> Result<Self> {
        let space = StoneSpace::new(j.atoms)?;
        if let Some(pos) = j.values.iter().position(|v| *v > 1) {
            return Err(Error::Json(format!("clopen indicator value at {pos} is not 0 or 1")));
        }
        ClopenSet::new(space, j.values.into_iter().map(|v| v == 1).collect())
    }
}

impl From<ClopenSet> for ClopenJson {
    fn from(c: ClopenSet) -> Self {
        ClopenJson {
            atoms: c.space.atoms,
            values: c.members.iter().map(|m| u8::from(*m)).collect(),
        }
    }
}

impl ClopenSet {
    pub fn new(space: StoneSpace, members: Vec<bool>) -> Result<Self> {
        if members.len() != space.atoms {
            return Err(Error::LengthMismatch {
                expected: space.atoms,
                found: members.len(),
            });
        }
        Ok(ClopenSet { space, members })
    }

    pub fn from_atoms<I: IntoIterator<Item = usize>>(space: StoneSpace, atoms: I) -> Result<Self> {
        let mut members = vec![false; space.atoms];
        for atom in atoms {
            if atom >= space.atoms {
                return Err(Error::AtomOutOfRange {
                    atom,
                    atoms: space.atoms,
                });
            }
            members[atom] = true;
        }
        Ok(ClopenSet { space, members })
    }

    /// The set of atoms satisfying `pred`.
    pub fn filter(space: StoneSpace, pred: impl Fn(usize) -> bool) -> Self {
        ClopenSet {
            space,
            members: (0..space.atoms).map(pred).collect(),
        }
    }

    pub fn space(&self) -> StoneSpace {
        self.space
    }

    pub fn contains(&self, atom: usize) -> bool {
        self.members.get(atom).copied().unwrap_or(false)
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }

    pub fn atoms(&self) -> impl Iterator<Item = usize> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(i, m)| m.then_some(i))
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|m| **m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|m| *m)
    }

    pub fn is_full(&self) -> bool {
        self.members.iter().all(|m| *m)
    }

    fn zip(&self, other: &ClopenSet, op: impl Fn(bool, bool) -> bool) -> Result<ClopenSet> {
        self.space.ensure_same(&other.space)?;
        Ok(ClopenSet {
            space: self.space,
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(a, b)| op(*a, *b))
                .collect(),
        })
    }

    pub fn union(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.zip(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.zip(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &ClopenSet) -> Result<ClopenSet> {
        self.zip(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> ClopenSet {
        ClopenSet {
            space: self.space,
            members: self.members.iter().map(|m| !m).collect(),
        }
    }

    pub fn is_subset(&self, other: &ClopenSet) -> Result<bool> {
        self.space.ensure_same(&other.space)?;
        Ok(self
            .members
            .iter()
            .zip(&other.members)
            .all(|(a, b)| !a || *b))
    }

    /// `1_U` as a lattice element.
    pub fn indicator(&self) -> LatticeElement {
        LatticeElement {
            space: self.space,
            values: self
                .members
                .iter()
                .map(|m| if *m { 1.0 } else { 0.0 })
                .collect(),
        }
    }
}

/// Relative/absolute tolerance used wherever floating point evaluation of
/// callbacks or averages is compared.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub relative: f64,
    pub absolute: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            relative: 1e-9,
            absolute: 1e-12,
        }
    }
}

impl Tolerance {
    pub const EXACT: Tolerance = Tolerance {
        relative: 0.0,
        absolute: 0.0,
    };

    pub fn close(&self, a: f64, b: f64) -> bool {
        if a == b {
            return true;
        }
        if !a.is_finite() || !b.is_finite() {
            return false;
        }
        (a - b).abs() <= self.absolute + self.relative * a.abs().max(b.abs())
    }

    /// `a <= b` up to tolerance.
    pub fn le(&self, a: f64, b: f64) -> bool {
        a <= b || self.close(a, b)
    }
}

/// An extended-real valued function on the atoms of a Stone space.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ElementJson", into = "ElementJson")]
pub struct LatticeElement {
    space: StoneSpace,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    atoms: usize,
    #[serde(with = "ext_real_vec")]
    values: Vec<f64>,
}

impl TryFrom<ElementJson> for LatticeElement {
    type Error = Error;
    fn try_from(j: ElementJson) -> Result<Self> {
        LatticeElement::new(StoneSpace::new(j.atoms)?, j.values)
    }
}

impl From<LatticeElement> for ElementJson {
    fn from(e: LatticeElement) -> Self {
        ElementJson {
            atoms: e.space.atoms,
            values: e.values,
        }
    }
}

impl fmt::Debug for LatticeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatticeElement{:?}", self.values)
    }
}

impl LatticeElement {
    pub fn new(space: StoneSpace, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.atoms {
            return Err(Error::LengthMismatch {
                expected: space.atoms,
                found: values.len(),
            });
        }
        if let Some(atom) = values.iter().position(|v| v.is_nan()) {
            return Err(Error::NotANumber { atom });
        }
        Ok(LatticeElement { space, values })
    }

    /// Shorthand for an element on a fresh space sized to `values`.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        LatticeElement::new(StoneSpace::new(values.len())?, values)
    }

    pub fn space(&self) -> StoneSpace {
        self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, atom: usize) -> f64 {
        self.values[atom]
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn ensure_finite(&self) -> Result<()> {
        match self.values.iter().position(|v| !v.is_finite()) {
            Some(atom) => Err(Error::NotFinite { atom }),
            None => Ok(()),
        }
    }

    /// Member of the sup-completion: never `-inf`.
    pub fn in_sup_completion(&self) -> bool {
        self.values.iter().all(|v| *v != f64::NEG_INFINITY)
    }

    pub fn ensure_sup_completion(&self) -> Result<()> {
        match self.values.iter().position(|v| *v == f64::NEG_INFINITY) {
            Some(atom) => Err(Error::NotSupCompletion { atom }),
            None => Ok(()),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.values.iter().all(|v| *v >= 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0.0)
    }

    /// True iff every atom carries `+inf`, i.e. the element is `inf * 1`.
    pub fn is_infinite_unit(&self) -> bool {
        self.values.iter().all(|v| *v == f64::INFINITY)
    }

    /// The set `{x != 0}`.
    pub fn support(&self) -> ClopenSet {
        ClopenSet::filter(self.space, |i| self.values[i] != 0.0)
    }

    /// The set of atoms where `pred(x(atom))` holds.
    pub fn level_set(&self, pred: impl Fn(f64) -> bool) -> ClopenSet {
        ClopenSet::filter(self.space, |i| pred(self.values[i]))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<LatticeElement> {
        LatticeElement::new(self.space, self.values.iter().map(|v| f(*v)).collect())
    }

    fn zip_with(
        &self,
        other: &LatticeElement,
        op: impl Fn(usize, f64, f64) -> Result<f64>,
    ) -> Result<LatticeElement> {
        self.space.ensure_same(&other.space)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .enumerate()
            .map(|(i, (a, b))| op(i, *a, *b))
            .collect::<Result<Vec<_>>>()?;
        Ok(LatticeElement {
            space: self.space,
            values,
        })
    }

    pub fn add(&self, other: &LatticeElement) -> Result<LatticeElement> {
        self.zip_with(other, |atom, a, b| {
            if a.is_infinite() && b.is_infinite() && a != b {
                Err(Error::UndefinedArithmetic { atom })
            } else {
                Ok(a + b)
            }
        })
    }

    pub fn sub(&self, other: &LatticeElement) -> Result<LatticeElement> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LatticeElement {
        LatticeElement {
            space: self.space,
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    /// `c * x` with `0 * inf = 0`.
    pub fn scale(&self, c: f64) -> Result<LatticeElement> {
        if c.is_nan() {
            return Err(Error::NotANumber { atom: 0 });
        }
        Ok(LatticeElement {
            space: self.space,
            values: self.values.iter().map(|v| ext_mul(c, *v)).collect(),
        })
    }

    /// Pointwise product (the f-algebra multiplication) with `0 * inf = 0`.
    pub fn mul(&self, other: &LatticeElement) -> Result<LatticeElement> {
        self.zip_with(other, |_, a, b| Ok(ext_mul(a, b)))
    }

    pub fn sup(&self, other: &LatticeElement) -> Result<LatticeElement> {
        self.zip_with(other, |_, a, b| Ok(a.max(b)))
    }

    pub fn inf(&self, other: &LatticeElement) -> Result<LatticeElement> {
        self.zip_with(other, |_, a, b| Ok(a.min(b)))
    }

    pub fn abs(&self) -> LatticeElement {
        LatticeElement {
            space: self.space,
            values: self.values.iter().map(|v| v.abs()).collect(),
        }
    }

    /// `x+ = x v 0`.
    pub fn pos_part(&self) -> LatticeElement {
        LatticeElement {
            space: self.space,
            values: self.values.iter().map(|v| v.max(0.0)).collect(),
        }
    }

    /// `x- = (-x) v 0`.
    pub fn neg_part(&self) -> LatticeElement {
        LatticeElement {
            space: self.space,
            values: self.values.iter().map(|v| (-v).max(0.0)).collect(),
        }
    }

    /// Pointwise `self <= other`.
    pub fn le(&self, other: &LatticeElement) -> Result<bool> {
        self.space.ensure_same(&other.space)?;
        Ok(self.values.iter().zip(&other.values).all(|(a, b)| a <= b))
    }

    pub fn approx_eq(&self, other: &LatticeElement, tol: Tolerance) -> bool {
        self.space == other.space
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| tol.close(*a, *b))
    }

    /// Largest per-atom absolute difference; infinite when the elements
    /// disagree about an infinite value.
    pub fn max_abs_diff(&self, other: &LatticeElement) -> Result<f64> {
        self.space.ensure_same(&other.space)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| if a == b { 0.0 } else { (a - b).abs() })
            .fold(0.0, f64::max))
    }

    /// Splits `u` in the sup-completion into its finite part `P_U u` and
    /// infinite part `P_{U^c} u`, where `U = {u < inf}`.
    pub fn finite_infinite_decomposition(&self) -> Result<(LatticeElement, LatticeElement)> {
        self.ensure_sup_completion()?;
        let finite_band = BandProjection::onto(self.level_set(|v| v < f64::INFINITY));
        let infinite_band = finite_band.complement();
        Ok((finite_band.apply(self)?, infinite_band.apply(self)?))
    }
}

fn ext_mul(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

/// Pointwise supremum of a non-empty family of positive sup-completion
/// elements.
pub fn sup_family(family: &[LatticeElement]) -> Result<LatticeElement> {
    let first = family.first().ok_or(Error::EmptyFamily)?;
    let mut acc = first.clone();
    for g in family {
        g.ensure_sup_completion()?;
        if let Some(atom) = g.values.iter().position(|v| *v < 0.0) {
            return Err(Error::NotPositive { atom });
        }
        acc = acc.sup(g)?;
    }
    Ok(acc)
}

/// Order projection onto the band of a clopen set: multiplication by its
/// indicator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BandProjection {
    band_support: ClopenSet,
}

impl BandProjection {
    pub fn onto(band_support: ClopenSet) -> Self {
        BandProjection { band_support }
    }

    /// `P_y`, the projection onto the band generated by `y`. On a discrete
    /// space the closure of `{y != 0}` is the set itself.
    pub fn of(y: &LatticeElement) -> Self {
        BandProjection {
            band_support: y.support(),
        }
    }

    pub fn zero(space: StoneSpace) -> Self {
        BandProjection::onto(space.empty())
    }

    pub fn identity(space: StoneSpace) -> Self {
        BandProjection::onto(space.full())
    }

    pub fn support(&self) -> &ClopenSet {
        &self.band_support
    }

    pub fn space(&self) -> StoneSpace {
        self.band_support.space
    }

    pub fn is_zero(&self) -> bool {
        self.band_support.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.band_support.is_full()
    }

    pub fn apply(&self, x: &LatticeElement) -> Result<LatticeElement> {
        self.band_support.space.ensure_same(&x.space)?;
        x.mul(&self.band_support.indicator())
    }

    /// `P E`.
    pub fn apply_to_unit(&self) -> LatticeElement {
        self.band_support.indicator()
    }

    pub fn compose(&self, other: &BandProjection) -> Result<BandProjection> {
        Ok(BandProjection::onto(
            self.band_support.intersection(&other.band_support)?,
        ))
    }

    pub fn complement(&self) -> BandProjection {
        BandProjection::onto(self.band_support.complement())
    }

    /// `P <= Q` as operators, i.e. inclusion of supports.
    pub fn le(&self, other: &BandProjection) -> Result<bool> {
        self.band_support.is_subset(&other.band_support)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn el(v: &[f64]) -> LatticeElement {
        LatticeElement::from_values(v.to_vec()).unwrap()
    }

    const INF: f64 = f64::INFINITY;

    #[test]
    fn sup_is_pointwise() {
        assert_eq!(el(&[1.0, -2.0]).sup(&el(&[0.0, 5.0])).unwrap(), el(&[1.0, 5.0]));
    }

    #[test]
    fn infinity_minus_infinity_is_an_error() {
        let err = el(&[1.0, INF]).sub(&el(&[0.0, INF])).unwrap_err();
        assert_eq!(err, Error::UndefinedArithmetic { atom: 1 });
        assert_eq!(el(&[INF]).add(&el(&[INF])).unwrap(), el(&[INF]));
    }

    #[test]
    fn space_mismatch_is_reported() {
        let err = el(&[1.0]).add(&el(&[1.0, 2.0])).unwrap_err();
        assert_eq!(err, Error::SpaceMismatch { left: 1, right: 2 });
    }

    #[test]
    fn nan_is_rejected() {
        assert!(matches!(
            LatticeElement::from_values(vec![0.0, f64::NAN]),
            Err(Error::NotANumber { atom: 1 })
        ));
        assert_eq!(StoneSpace::new(0), Err(Error::EmptySpace));
    }

    #[test]
    fn zero_times_infinity_is_zero() {
        assert_eq!(el(&[0.0, INF]).mul(&el(&[INF, 0.0])).unwrap(), el(&[0.0, 0.0]));
        assert_eq!(el(&[INF, -INF]).scale(0.0).unwrap(), el(&[0.0, 0.0]));
        assert_eq!(el(&[INF, 2.0]).mul(&el(&[-3.0, 2.0])).unwrap(), el(&[-INF, 4.0]));
    }

    #[test]
    fn band_projection_support() {
        let p = BandProjection::of(&el(&[0.0, 3.0, -1.0]));
        assert_eq!(p.support().atoms().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(p.apply_to_unit(), el(&[0.0, 1.0, 1.0]));

        let zero = BandProjection::of(&el(&[0.0, 0.0]));
        assert!(zero.is_zero());
        assert_eq!(zero.apply(&el(&[4.0, -7.0])).unwrap(), el(&[0.0, 0.0]));
    }

    #[test]
    fn apply_projection_examples() {
        let space = StoneSpace::new(2).unwrap();
        let p = BandProjection::onto(ClopenSet::from_atoms(space, [0]).unwrap());
        assert_eq!(p.apply(&el(&[7.0, 9.0])).unwrap(), el(&[7.0, 0.0]));
        let projected = p.apply(&el(&[7.0, INF])).unwrap();
        assert!(projected.is_finite());
    }

    #[test]
    fn decomposition_examples() {
        let (fin, inf) = el(&[2.0, INF, 5.0]).finite_infinite_decomposition().unwrap();
        assert_eq!(fin, el(&[2.0, 0.0, 5.0]));
        assert_eq!(inf, el(&[0.0, INF, 0.0]));

        let (fin, inf) = el(&[2.0, -1.0]).finite_infinite_decomposition().unwrap();
        assert_eq!(fin, el(&[2.0, -1.0]));
        assert!(inf.is_zero());

        assert_eq!(
            el(&[1.0, -INF]).finite_infinite_decomposition().unwrap_err(),
            Error::NotSupCompletion { atom: 1 }
        );
    }

    #[test]
    fn sup_family_examples() {
        assert_eq!(sup_family(&[el(&[1.0, 2.0]), el(&[2.0, 1.0])]).unwrap(), el(&[2.0, 2.0]));
        assert_eq!(sup_family(&[]).unwrap_err(), Error::EmptyFamily);
        assert_eq!(
            sup_family(&[el(&[1.0, -2.0])]).unwrap_err(),
            Error::NotPositive { atom: 1 }
        );

        // n * 1 for n <= N stays finite; only an explicit +inf member reaches inf * 1.
        let space = StoneSpace::new(3).unwrap();
        let family: Vec<_> = (1..=50).map(|n| space.constant(n as f64)).collect();
        let sup = sup_family(&family).unwrap();
        assert!(!sup.is_infinite_unit());
        assert_eq!(sup, space.constant(50.0));
        let mut with_inf = family.clone();
        with_inf.push(space.constant(INF));
        assert!(sup_family(&with_inf).unwrap().is_infinite_unit());
    }

    #[test]
    fn json_round_trip_uses_inf_strings() {
        let x = el(&[1.5, INF, -INF]);
        let text = serde_json::to_string(&x).unwrap();
        assert_eq!(text, r#"{"atoms":3,"values":[1.5,"inf","-inf"]}"#);
        assert_eq!(serde_json::from_str::<LatticeElement>(&text).unwrap(), x);

        let set = ClopenSet::from_atoms(StoneSpace::new(3).unwrap(), [2]).unwrap();
        let text = serde_json::to_string(&set).unwrap();
        assert_eq!(text, r#"{"atoms":3,"values":[0,0,1]}"#);
        assert_eq!(serde_json::from_str::<ClopenSet>(&text).unwrap(), set);

        assert!(serde_json::from_str::<LatticeElement>(r#"{"atoms":2,"values":[1]}"#).is_err());
        assert!(serde_json::from_str::<LatticeElement>(r#"{"atoms":1,"values":["big"]}"#).is_err());
    }

    fn finite(n: usize) -> impl Strategy<Value = LatticeElement> {
        prop::collection::vec(-1.0e6..1.0e6f64, n).prop_map(|v| el(&v))
    }

    fn triple() -> impl Strategy<Value = (LatticeElement, LatticeElement, LatticeElement)> {
        (1usize..12).prop_flat_map(|n| (finite(n), finite(n), finite(n)))
    }

    fn sup_completion(n: usize) -> impl Strategy<Value = LatticeElement> {
        prop::collection::vec(
            prop_oneof![4 => -1.0e6..1.0e6f64, 1 => Just(f64::INFINITY)],
            n,
        )
        .prop_map(|v| el(&v))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn abs_is_sup_with_negation((x, _, _) in triple()) {
            prop_assert_eq!(x.abs(), x.sup(&x.neg()).unwrap());
        }

        #[test]
        fn adding_zero_is_identity((x, _, _) in triple()) {
            prop_assert_eq!(x.add(&x.space().zero()).unwrap(), x);
        }

        #[test]
        fn lattice_laws((x, y, z) in triple()) {
            prop_assert_eq!(x.sup(&y).unwrap(), y.sup(&x).unwrap());
            prop_assert_eq!(x.inf(&y).unwrap(), y.inf(&x).unwrap());
            prop_assert_eq!(x.sup(&y.sup(&z).unwrap()).unwrap(), x.sup(&y).unwrap().sup(&z).unwrap());
            prop_assert_eq!(x.inf(&y.inf(&z).unwrap()).unwrap(), x.inf(&y).unwrap().inf(&z).unwrap());
            prop_assert_eq!(x.sup(&x.inf(&y).unwrap()).unwrap(), x.clone());
            prop_assert_eq!(x.inf(&x.sup(&y).unwrap()).unwrap(), x.clone());
            prop_assert_eq!(
                x.add(&y.sup(&z).unwrap()).unwrap(),
                x.add(&y).unwrap().sup(&x.add(&z).unwrap()).unwrap()
            );
            prop_assert_eq!(
                x.add(&y.inf(&z).unwrap()).unwrap(),
                x.add(&y).unwrap().inf(&x.add(&z).unwrap()).unwrap()
            );
            prop_assert_eq!(x.pos_part().sub(&x.neg_part()).unwrap(), x.clone());
            prop_assert_eq!(x.pos_part().add(&x.neg_part()).unwrap(), x.abs());
        }

        #[test]
        fn projections_commute((x, y, z) in triple()) {
            let p = BandProjection::of(&y.pos_part());
            let q = BandProjection::of(&z.neg_part());
            let pq = p.apply(&q.apply(&x).unwrap()).unwrap();
            let qp = q.apply(&p.apply(&x).unwrap()).unwrap();
            prop_assert_eq!(&pq, &qp);
            prop_assert_eq!(&pq, &p.compose(&q).unwrap().apply(&x).unwrap());
            prop_assert_eq!(p.apply(&p.apply(&x).unwrap()).unwrap(), p.apply(&x).unwrap());
            prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        }

        #[test]
        fn projection_of_unit_is_support_indicator((y, _, _) in triple()) {
            let direct = y.level_set(|v| v != 0.0).indicator();
            prop_assert_eq!(BandProjection::of(&y).apply(&y.space().unit()).unwrap(), direct);
        }

        #[test]
        fn decomposition_recomposes(u in (1usize..12).prop_flat_map(sup_completion)) {
            let (fin, inf) = u.finite_infinite_decomposition().unwrap();
            prop_assert!(fin.is_finite());
            prop_assert!(fin.mul(&inf).unwrap().is_zero());
            let recomposed: Vec<f64> = fin.values().iter().zip(inf.values()).map(|(a, b)| a + b).collect();
            prop_assert_eq!(recomposed, u.values().to_vec());
        }
    }
}
