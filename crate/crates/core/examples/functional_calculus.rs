// The Daniell functional calculus: a step function integrated against the
// spectral system of X, and a continuous function reached through its
// monotone step approximations.

use stonecalc::spectral::{
    compose_continuous, daniell_continuous, daniell_step, daniell_step_closed_form, ContinuousFunction, Interval,
    IntervalSet, SpectralSystem, StepFunction,
};
use stonecalc::{LatticeElement, Result};

pub fn run() -> Result<()> {
    let x = LatticeElement::from_values(vec![0.5, 1.5, 2.5, -0.75])?;
    let a = SpectralSystem::new(&x)?;
    println!("A_1        = {:?}", a.at(1.0).values());
    let s = IntervalSet::single(Interval::left_open(1.0, 2.0)?);
    println!("mu_A(1, 2] = {:?}", a.measure(&s).values());

    let f = StepFunction::new(vec![0.0, 1.0, 2.0], vec![-1.0, 3.0, 0.5], 4.0)?;
    println!("I(f)         = {:?}", daniell_step(&f, &x)?.values());
    println!("closed form  = {:?}", daniell_step_closed_form(&f, &x)?.values());

    let g = ContinuousFunction::univariate("cos", f64::cos).with_lipschitz_constant(1.0);
    let eps = 2f64.powi(-20);
    let via_steps = daniell_continuous(&g, &x, eps)?;
    let direct = compose_continuous(&g, &x)?;
    println!("I(cos)       = {:?}", via_steps.values());
    println!("cos o X      = {:?}", direct.values());
    println!("max gap      = {:e}", via_steps.max_abs_diff(&direct)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
