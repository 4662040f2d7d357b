// Stopping times as increasing projection sequences, their algebra, and
// stopped processes.

use std::sync::Arc;

use stonecalc::probability::{AdaptedProcess, Filtration};
use stonecalc::stopping::{from_projections, stopped_element, stopped_process, ExtNat, StoppingTime};
use stonecalc::{LatticeElement, Result};

pub fn run() -> Result<()> {
    let f = Arc::new(Filtration::from_partitions(
        vec![1.0; 4],
        vec![
            vec![vec![0, 1], vec![2, 3]],
            vec![vec![0, 1], vec![2], vec![3]],
            vec![vec![0], vec![1], vec![2], vec![3]],
        ],
    )?);
    use ExtNat::{Finite, Infinity};
    let sigma = StoppingTime::new(f.clone(), vec![Finite(1), Finite(1), Finite(2), Finite(3)])?;
    let tau = StoppingTime::new(f.clone(), vec![Finite(2), Finite(2), Finite(2), Infinity])?;

    let bands = tau.to_projections();
    for (n, p) in bands.iter().enumerate() {
        println!("P_{} onto {:?}", n + 1, p.support().atoms().collect::<Vec<_>>());
    }
    assert_eq!(from_projections(&bands, f.clone())?, tau);

    let show = |name: &str, t: &StoppingTime| {
        let v: Vec<String> = t.values().iter().map(ToString::to_string).collect();
        println!("{name:<12} = [{}]", v.join(", "));
    };
    show("sigma v tau", &sigma.join(&tau)?);
    show("sigma ^ tau", &sigma.meet(&tau)?);
    show("sigma + tau", &sigma.plus(&tau)?);
    show("n_k = 2k", &sigma.time_change(&[2, 4, 6])?);

    let x = AdaptedProcess::new(
        f.clone(),
        vec![
            LatticeElement::from_values(vec![1.0, 1.0, 0.0, 0.0])?,
            LatticeElement::from_values(vec![1.0, 1.0, 4.0, -2.0])?,
            LatticeElement::from_values(vec![0.0, 2.0, 4.0, -2.0])?,
        ],
    )?;
    println!("X_sigma = {:?}", stopped_element(&x, &sigma)?.values());
    for (n, y) in stopped_process(&x, &tau)?.path().iter().enumerate() {
        println!("X_(tau ^ {}) = {:?}", n + 1, y.values());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
