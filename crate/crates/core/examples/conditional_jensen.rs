// A filtration on six atoms, a Doob martingale, and Jensen's inequality
// for the maximum of two coordinates.

use std::sync::Arc;

use stonecalc::probability::{
    convex_image_submartingale, jensen, AdaptedProcess, ConvexFunction, Filtration,
};
use stonecalc::{LatticeElement, Result, Tolerance};

pub fn run() -> Result<()> {
    let weights = vec![1.0, 2.0, 1.0, 0.5, 0.5, 3.0];
    let f = Arc::new(Filtration::from_partitions(
        weights,
        vec![
            vec![vec![0, 1, 2], vec![3, 4, 5]],
            vec![vec![0, 1], vec![2], vec![3, 4], vec![5]],
            vec![vec![0], vec![1], vec![2], vec![3], vec![4], vec![5]],
        ],
    )?);
    f.verify_tower(Tolerance::default())?;

    let terminal = LatticeElement::from_values(vec![3.0, -1.0, 4.0, 1.0, -5.0, 9.0])?;
    let m = AdaptedProcess::doob(f.clone(), &terminal, 3)?;
    for (t, x) in m.path().iter().enumerate() {
        println!("M_{} = {:?}", t + 1, x.values());
    }
    println!("class: {:?}", m.classify(Tolerance::default()));

    let other = AdaptedProcess::doob(f.clone(), &LatticeElement::from_values(vec![0.0, 2.0, -2.0, 6.0, 1.0, 1.0])?, 3)?;
    let xs = [m.at(3).clone(), other.at(3).clone()];
    let r = jensen(&ConvexFunction::max(2), &xs, f.stage(1), Tolerance::default())?;
    println!("F(max X) = {:?}", r.lhs.values());
    println!("max(F X) = {:?}", r.rhs.values());
    println!("min slack {:.4}, holds {}", r.min_slack, r.holds);

    let image = convex_image_submartingale(&[m, other], &ConvexFunction::max(2), Tolerance::default())?;
    println!("max(M, N) is {:?}", image.class);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
