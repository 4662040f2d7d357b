// Elements of a four-atom space: lattice operations, band projections and
// the split of a sup-completion element into finite and infinite parts.

use stonecalc::{sup_family, BandProjection, ClopenSet, LatticeElement, Result, StoneSpace};

pub fn run() -> Result<()> {
    let space = StoneSpace::new(4)?;
    let x = LatticeElement::new(space, vec![1.0, -2.0, 0.0, 3.5])?;
    let y = LatticeElement::new(space, vec![0.0, 5.0, -1.0, 3.0])?;
    println!("x v y   = {:?}", x.sup(&y)?.values());
    println!("x ^ y   = {:?}", x.inf(&y)?.values());
    println!("|x|     = {:?}", x.abs().values());
    println!("x+ - x- = {:?}", x.pos_part().sub(&x.neg_part())?.values());

    let p = BandProjection::of(&x);
    println!("support of x = {:?}", p.support().atoms().collect::<Vec<_>>());
    println!("P_x y        = {:?}", p.apply(&y)?.values());

    // off the band, infinity is multiplied by zero
    let u = LatticeElement::new(space, vec![2.0, f64::INFINITY, 5.0, 0.0])?;
    let off = BandProjection::onto(ClopenSet::from_atoms(space, [0, 2])?);
    println!("P u          = {:?}", off.apply(&u)?.values());
    let (finite, infinite) = u.finite_infinite_decomposition()?;
    println!("u = {:?} + {:?}", finite.values(), infinite.values());

    let family = [x.abs(), y.pos_part(), space.constant(1.0)];
    println!("sup of family = {:?}", sup_family(&family)?.values());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
