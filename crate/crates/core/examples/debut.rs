// The Debut round trip: a stopping time, its indicator process
// 1{tau <= n}, and the first time that process reaches one.

use std::sync::Arc;

use stonecalc::probability::Filtration;
use stonecalc::stopping::{debut, ExtNat, StoppingTime};
use stonecalc::Result;

pub fn run() -> Result<()> {
    let f = Arc::new(Filtration::from_partitions(
        vec![1.0; 3],
        vec![vec![vec![0], vec![1, 2]], vec![vec![0], vec![1], vec![2]]],
    )?);
    let tau = StoppingTime::new(f, vec![ExtNat::Finite(1), ExtNat::Finite(2), ExtNat::Infinity])?;
    let d = debut(&tau, 2)?;
    for (n, x) in d.process.path().iter().enumerate() {
        println!("1{{tau <= {}}} = {:?}", n + 1, x.values());
    }
    let v: Vec<String> = d.recovered.values().iter().map(ToString::to_string).collect();
    println!("first hit   = [{}]", v.join(", "));
    assert_eq!(d.recovered, tau);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
