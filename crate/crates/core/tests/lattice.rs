use proptest::prelude::*;
use stonecalc::{sup_family, BandProjection, ClopenSet, Error, LatticeElement, StoneSpace};

const INF: f64 = f64::INFINITY;

fn el(v: &[f64]) -> LatticeElement {
    LatticeElement::from_values(v.to_vec()).unwrap()
}

#[test]
fn pointwise_sup() {
    assert_eq!(el(&[1.0, -2.0]).sup(&el(&[0.0, 5.0])).unwrap(), el(&[1.0, 5.0]));
}

#[test]
fn support_of_an_element() {
    let y = el(&[0.0, 3.0, -1.0]);
    assert_eq!(y.support().atoms().collect::<Vec<_>>(), vec![1, 2]);
    let zero = BandProjection::of(&el(&[0.0, 0.0]));
    assert!(zero.is_zero());
    assert!(zero.apply(&el(&[4.0, -4.0])).unwrap().is_zero());
}

#[test]
fn projection_examples() {
    let space = StoneSpace::new(2).unwrap();
    let p = BandProjection::onto(ClopenSet::from_atoms(space, [0]).unwrap());
    assert_eq!(p.apply(&el(&[7.0, 9.0])).unwrap(), el(&[7.0, 0.0]));
    // 0 * inf = 0 off the band
    let x = el(&[3.0, INF]);
    assert!(p.apply(&x).unwrap().is_finite());
}

#[test]
fn finite_infinite_decomposition_example() {
    let (f, i) = el(&[2.0, INF, 5.0]).finite_infinite_decomposition().unwrap();
    assert_eq!(f, el(&[2.0, 0.0, 5.0]));
    assert_eq!(i, el(&[0.0, INF, 0.0]));
    let (_, i) = el(&[1.0, 2.0]).finite_infinite_decomposition().unwrap();
    assert!(i.is_zero());
}

#[test]
fn family_suprema() {
    assert_eq!(sup_family(&[el(&[1.0, 2.0]), el(&[2.0, 1.0])]).unwrap(), el(&[2.0, 2.0]));
    // a finite family of finite elements stays finite
    let family: Vec<_> = (1..=50).map(|n| el(&[n as f64, n as f64])).collect();
    assert!(sup_family(&family).unwrap().is_finite());
    let mut with_top = family.clone();
    with_top.push(el(&[INF, INF]));
    assert!(sup_family(&with_top).unwrap().is_infinite_unit());
    assert_eq!(sup_family(&[]).unwrap_err(), Error::EmptyFamily);
}

#[test]
fn undefined_arithmetic_is_an_error() {
    let a = el(&[INF]);
    assert!(a.sub(&a).is_err());
    assert!(LatticeElement::from_values(vec![f64::NAN]).is_err());
    assert!(el(&[1.0]).add(&el(&[1.0, 2.0])).is_err());
}

#[test]
fn elements_round_trip_through_json() {
    let x = el(&[1.5, INF, -2.0]);
    let text = serde_json::to_string(&x).unwrap();
    assert!(text.contains("\"inf\""));
    let back: LatticeElement = serde_json::from_str(&text).unwrap();
    assert_eq!(back, x);
}

fn finite_vec() -> impl Strategy<Value = Vec<f64>> {
    (1usize..12).prop_flat_map(|n| prop::collection::vec(-1e6f64..1e6, n))
}

proptest! {
    #[test]
    fn abs_is_sup_with_negative(v in finite_vec()) {
        let x = el(&v);
        prop_assert_eq!(x.abs(), x.sup(&x.neg()).unwrap());
        prop_assert_eq!(x.add(&x.space().zero()).unwrap(), x);
    }

    #[test]
    fn projection_of_unit_is_support_indicator(v in finite_vec()) {
        let y = el(&v.iter().map(|t| if *t > 0.0 { 0.0 } else { *t }).collect::<Vec<_>>());
        let direct: Vec<f64> = y.values().iter().map(|t| if *t != 0.0 { 1.0 } else { 0.0 }).collect();
        prop_assert_eq!(BandProjection::of(&y).apply_to_unit(), el(&direct));
    }

    #[test]
    fn projections_are_idempotent(v in finite_vec(), mask in prop::collection::vec(any::<bool>(), 12)) {
        let x = el(&v);
        let set = ClopenSet::new(x.space(), mask[..v.len()].to_vec()).unwrap();
        let p = BandProjection::onto(set);
        let once = p.apply(&x).unwrap();
        prop_assert_eq!(p.apply(&once).unwrap(), once);
    }

    #[test]
    fn decomposition_recomposes(v in finite_vec(), mask in prop::collection::vec(any::<bool>(), 12)) {
        let u = el(&v.iter().zip(&mask).map(|(t, m)| if *m { INF } else { *t }).collect::<Vec<_>>());
        let (f, i) = u.finite_infinite_decomposition().unwrap();
        prop_assert_eq!(f.add(&i).unwrap(), u);
    }
}
