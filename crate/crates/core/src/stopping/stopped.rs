//! Stopped elements and processes, increasing processes, and the Début
//! round trip.

use serde::Serialize;

use super::time::{extremum, same_filtration, ExtNat, Extremum, StoppingTime};
use crate::error::{Error, Result};
use crate::lattice::{BandProjection, LatticeElement};
use crate::mutation::{self, Mutation};
use crate::probability::AdaptedProcess;

fn check_bounded(p: &AdaptedProcess, tau: &StoppingTime) -> Result<()> {
    p.filtration().space().ensure_same(&tau.space())?;
    let horizon = p.len();
    match tau.values().iter().position(|v| !v.le_n(horizon as u64)) {
        Some(atom) => Err(Error::Unbounded { atom, horizon }),
        None => Ok(()),
    }
}

/// `X_tau(w) = X_{tau(w)}(w)`, read off atom by atom.
pub fn stopped_element_pointwise(p: &AdaptedProcess, tau: &StoppingTime) -> Result<LatticeElement> {
    check_bounded(p, tau)?;
    let values = (0..tau.space().atoms())
        .map(|a| p.at(tau.get(a).finite().expect("bounded") as usize).get(a))
        .collect();
    LatticeElement::new(tau.space(), values)
}

/// `X_tau = sum_n (P_n - P_{n-1}) X_n` with `P_n` the projection onto
/// `{tau <= n}`.
pub fn stopped_element_band_sum(p: &AdaptedProcess, tau: &StoppingTime) -> Result<LatticeElement> {
    check_bounded(p, tau)?;
    let space = tau.space();
    let mut previous = BandProjection::zero(space);
    let mut acc = space.zero();
    for (n, current) in tau.to_projections_until(p.len() as u64).into_iter().enumerate() {
        let increment = BandProjection::onto(current.support().difference(previous.support())?);
        acc = acc.add(&increment.apply(p.at(n + 1))?)?;
        previous = current;
    }
    Ok(acc)
}

/// The stopped element of a bounded stopping time, computed pointwise and
/// as a band sum; the two must agree exactly.
pub fn stopped_element(p: &AdaptedProcess, tau: &StoppingTime) -> Result<LatticeElement> {
    let pointwise = stopped_element_pointwise(p, tau)?;
    let band_sum = stopped_element_band_sum(p, tau)?;
    if pointwise != band_sum {
        return Err(Error::InvalidStoppingTime(
            "band sum and pointwise stopped elements disagree".into(),
        ));
    }
    Ok(pointwise)
}

/// `(X_{tau ∧ n})_n`, adapted to the same filtration.
pub fn stopped_process(p: &AdaptedProcess, tau: &StoppingTime) -> Result<AdaptedProcess> {
    if !same_filtration(p.filtration(), tau.filtration()) {
        return Err(Error::FiltrationMismatch);
    }
    let path = (1..=p.len() as u64)
        .map(|n| stopped_element(p, &tau.truncate(n)?))
        .collect::<Result<Vec<_>>>()?;
    AdaptedProcess::new(p.filtration().clone(), path)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IncreasingIdentities {
    /// `X_{sigma ∨ tau} = X_sigma ∨ X_tau`.
    pub join: bool,
    /// `X_{sigma ∧ tau} = X_sigma ∧ X_tau`.
    pub meet: bool,
    /// `X_{sup tau_n} = sup X_{tau_n}`.
    pub sup: bool,
    /// `X_{inf tau_n} = inf X_{tau_n}`.
    pub inf: bool,
}

impl IncreasingIdentities {
    pub fn all(&self) -> bool {
        self.join && self.meet && self.sup && self.inf
    }
}

/// Checks the lattice identities of an increasing process under stopping.
/// `sigma`, `tau` and every member of `family` must be bounded by the
/// process length; an unbounded supremum is rejected as `Unbounded`.
pub fn increasing_process_identities(
    p: &AdaptedProcess,
    sigma: &StoppingTime,
    tau: &StoppingTime,
    family: &[StoppingTime],
) -> Result<IncreasingIdentities> {
    if !p.is_increasing() {
        return Err(Error::NotIncreasing("process is not increasing".into()));
    }
    let x = |t: &StoppingTime| stopped_element(p, t);
    let (xs, xt) = (x(sigma)?, x(tau)?);
    let join = x(&sigma.join(tau)?)? == xs.sup(&xt)?;
    let meet = x(&sigma.meet(tau)?)? == xs.inf(&xt)?;
    let stopped = family.iter().map(x).collect::<Result<Vec<_>>>()?;
    let first = stopped.first().ok_or(Error::EmptyFamily)?;
    let (mut hi, mut lo) = (first.clone(), first.clone());
    for s in &stopped[1..] {
        hi = hi.sup(s)?;
        lo = lo.inf(s)?;
    }
    let sup = x(&extremum(family, Extremum::Sup)?)? == hi;
    let inf = x(&extremum(family, Extremum::Inf)?)? == lo;
    Ok(IncreasingIdentities { join, meet, sup, inf })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Debut {
    /// `X_n = 1_{tau <= n}`.
    pub process: AdaptedProcess,
    /// `inf {n : X_n = 1}`.
    pub recovered: StoppingTime,
}

/// `X_n = 1_{tau <= n}` for `n` up to the largest finite value of `tau`
/// (or `fallback_horizon` when `tau` is identically infinite), and its
/// hitting time.
pub fn debut(tau: &StoppingTime, fallback_horizon: usize) -> Result<Debut> {
    let horizon = tau.max_finite().map_or(fallback_horizon.max(1), |n| n as usize);
    let path = (1..=horizon as u64).map(|n| tau.at_most(n).indicator()).collect();
    let process = AdaptedProcess::new(tau.filtration().clone(), path)?;
    let recovered = hitting_time(&process)?;
    Ok(Debut { process, recovered })
}

/// `sigma(w) = inf {n : X_n(w) = 1}` for an increasing `{0, 1}`-valued
/// process, assembled from `{sigma = n} = {X_{n-1} = 0} ∩ {X_n = 1}`.
pub fn hitting_time(p: &AdaptedProcess) -> Result<StoppingTime> {
    if p.path().iter().any(|x| x.values().iter().any(|v| *v != 0.0 && *v != 1.0)) {
        return Err(Error::NotIndicatorProcess("values outside {0, 1}".into()));
    }
    if !p.is_increasing() {
        return Err(Error::NotIndicatorProcess("process is not increasing".into()));
    }
    let space = p.filtration().space();
    let hit = |n: usize| -> Vec<bool> {
        if n == 0 || n > p.len() {
            return vec![false; space.atoms()];
        }
        p.at(n).values().iter().map(|v| *v == 1.0).collect()
    };
    let late = mutation::active(Mutation::HittingTimeShift);
    let mut values = vec![ExtNat::Infinity; space.atoms()];
    for n in 1..=p.len() {
        let (before, now) = if late { (hit(n.saturating_sub(2)), hit(n - 1)) } else { (hit(n - 1), hit(n)) };
        for a in 0..space.atoms() {
            if !before[a] && now[a] {
                values[a] = ExtNat::Finite(n as u64);
            }
        }
    }
    StoppingTime::new(p.filtration().clone(), values)
}
