use std::sync::Arc;

use stonecalc::probability::{AdaptedProcess, Filtration};
use stonecalc::stopping::{
    debut, extremum, from_projections, hitting_time, increasing_process_identities, stopped_element,
    stopped_process, ExtNat, Extremum, StoppingTime, StoppingTimeDoc,
};
use stonecalc::{BandProjection, Error, LatticeElement};

use ExtNat::{Finite, Infinity};

fn filtration() -> Arc<Filtration> {
    Arc::new(
        Filtration::from_partitions(
            vec![1.0, 2.0, 1.0, 1.0],
            vec![
                vec![vec![0, 1], vec![2, 3]],
                vec![vec![0, 1], vec![2], vec![3]],
                vec![vec![0], vec![1], vec![2], vec![3]],
            ],
        )
        .unwrap(),
    )
}

fn tau(v: &[ExtNat]) -> StoppingTime {
    StoppingTime::new(filtration(), v.to_vec()).unwrap()
}

fn constant(n: ExtNat) -> StoppingTime {
    StoppingTime::constant(filtration(), n).unwrap()
}

fn el(v: &[f64]) -> LatticeElement {
    LatticeElement::from_values(v.to_vec()).unwrap()
}

/// `X_n = n E`, increasing.
fn linear(horizon: usize) -> AdaptedProcess {
    AdaptedProcess::new(filtration(), (1..=horizon).map(|n| el(&[n as f64; 4])).collect()).unwrap()
}

#[test]
fn measurability_is_enforced() {
    // {tau = 1} splits the first block
    assert!(matches!(
        StoppingTime::new(filtration(), vec![Finite(1), Finite(2), Finite(2), Finite(2)]),
        Err(Error::InvalidStoppingTime(_))
    ));
    assert!(StoppingTime::new(filtration(), vec![Finite(0); 4]).is_err());
    let t = tau(&[Finite(1), Finite(1), Finite(2), Infinity]);
    assert_eq!(t.level_set(Infinity).atoms().collect::<Vec<_>>(), vec![3]);
}

#[test]
fn projections_determine_the_time() {
    let space = filtration().space();
    let full = BandProjection::identity(space);
    assert_eq!(from_projections(&[full.clone(), full], filtration()).unwrap(), constant(Finite(1)));
    let zero = BandProjection::zero(space);
    assert_eq!(from_projections(&[zero.clone(), zero], filtration()).unwrap(), constant(Infinity));
    let t = tau(&[Finite(3), Finite(3), Finite(2), Infinity]);
    assert_eq!(from_projections(&t.to_projections(), filtration()).unwrap(), t);
}

#[test]
fn join_meet_plus() {
    let (s, t) = (constant(Finite(1)), constant(Finite(2)));
    assert_eq!(s.join(&t).unwrap(), t);
    assert_eq!(s.meet(&t).unwrap(), s);
    assert_eq!(s.plus(&t).unwrap(), constant(Finite(3)));
    let u = tau(&[Finite(1), Finite(1), Finite(2), Infinity]);
    assert_eq!(u.join(&u).unwrap(), u);
    assert_eq!(u.meet(&u).unwrap(), u);
    assert_eq!(u.plus(&s).unwrap().get(3), Infinity);
}

#[test]
fn extrema_of_families() {
    let t = tau(&[Finite(3), Finite(3), Finite(2), Infinity]);
    let truncations: Vec<_> = (1..=5).map(|n| t.truncate(n).unwrap()).collect();
    assert_eq!(extremum(&truncations, Extremum::Sup).unwrap().values()[..3], t.values()[..3]);
    let next = t.plus(&constant(Finite(1))).unwrap();
    assert_eq!(extremum(&[t.clone(), next], Extremum::Inf).unwrap(), t);
}

#[test]
fn time_changes() {
    let t = tau(&[Finite(3), Finite(3), Finite(2), Infinity]);
    let identity: Vec<u64> = (1..=6).collect();
    assert_eq!(t.time_change(&identity).unwrap(), t);
    let doubled: Vec<u64> = (1..=6).map(|k| 2 * k).collect();
    assert_eq!(constant(Finite(3)).time_change(&doubled).unwrap(), constant(Finite(6)));
    assert!(matches!(t.time_change(&[1, 1, 2]), Err(Error::NotIncreasing(_))));
}

#[test]
fn stopped_elements() {
    let p = AdaptedProcess::new(
        filtration(),
        vec![el(&[1.0, 1.0, 2.0, 2.0]), el(&[1.0, 1.0, 5.0, 6.0]), el(&[0.0, 9.0, 5.0, 6.0])],
    )
    .unwrap();
    for k in 1..=3 {
        assert_eq!(&stopped_element(&p, &constant(Finite(k))).unwrap(), p.at(k as usize));
    }
    let t = tau(&[Finite(1), Finite(1), Finite(2), Finite(3)]);
    assert_eq!(stopped_element(&p, &t).unwrap(), el(&[1.0, 1.0, 5.0, 6.0]));
    assert!(matches!(stopped_element(&p, &constant(Infinity)), Err(Error::Unbounded { .. })));
    assert_eq!(stopped_process(&p, &constant(Infinity)).unwrap(), p);
}

#[test]
fn increasing_identities_on_linear_process() {
    let p = linear(3);
    let s = tau(&[Finite(1), Finite(1), Finite(3), Finite(2)]);
    let t = tau(&[Finite(2), Finite(2), Finite(2), Finite(3)]);
    let r = increasing_process_identities(&p, &s, &t, &[s.clone(), t.clone()]).unwrap();
    assert!(r.all());
    assert!(increasing_process_identities(&p, &s, &s, std::slice::from_ref(&s)).unwrap().all());
    let x = stopped_element(&p, &s.join(&t).unwrap()).unwrap();
    assert_eq!(x, el(&[2.0, 2.0, 3.0, 3.0]));
}

#[test]
fn debut_round_trips() {
    let d = debut(&constant(Finite(1)), 3).unwrap();
    assert!(d.process.path().iter().all(|x| x.values().iter().all(|v| *v == 1.0)));
    assert_eq!(d.recovered, constant(Finite(1)));
    let d = debut(&constant(Infinity), 3).unwrap();
    assert!(d.process.path().iter().all(LatticeElement::is_zero));
    assert_eq!(d.recovered, constant(Infinity));
    let t = tau(&[Finite(2), Finite(2), Finite(3), Infinity]);
    let d = debut(&t, 3).unwrap();
    assert_eq!(d.recovered, t);
    assert_eq!(hitting_time(&d.process).unwrap(), t);
}

#[test]
fn stopping_time_json() {
    let t = tau(&[Finite(2), Finite(2), Finite(3), Infinity]);
    let text = serde_json::to_string(&t.to_doc(Some("F"))).unwrap();
    assert_eq!(text, r#"{"filtration":"F","values":[2,2,3,"inf"]}"#);
    let doc: StoppingTimeDoc = serde_json::from_str(&text).unwrap();
    assert_eq!(StoppingTime::from_doc(&doc, filtration()).unwrap(), t);
}
