//! The property registry. Every trial draws its instance from a [`Gen`],
//! records it as JSON, and checks it against an independent oracle.

use serde_json::{json, Value};

use super::config::Suite;
use super::generate::Gen;
use crate::error::Error;
use crate::lattice::{sup_family, BandProjection, ClopenSet, LatticeElement, StoneSpace, Tolerance};
use crate::probability::{
    convex_image_submartingale, jensen, AdaptedProcess, AffineMap, ConvexFunction, ProcessClass,
};
use crate::spectral::{
    compose_continuous, compose_multivariate, daniell_continuous, daniell_monotone, daniell_monotone_trace,
    daniell_step, daniell_step_closed_form, Interval, IntervalSet, MonotoneStepSequence, SpectralSystem,
    StepFunction,
};
use crate::stopping::{
    debut, extremum, from_projections, increasing_process_identities, stopped_element_band_sum,
    stopped_element_pointwise, stopped_process, ExtNat, Extremum, StoppingTime,
};

/// Step approximation accuracy used by the functional calculus check.
pub const CALCULUS_EPS: f64 = 1.0 / (1u64 << 20) as f64;
/// Agreement required between the Daniell route and composition.
pub const CALCULUS_TOLERANCE: f64 = 1.0 / (1u64 << 18) as f64;

#[derive(Debug, Clone, PartialEq)]
pub struct Failure(pub String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

type Check = std::result::Result<f64, Failure>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), Failure> {
    if cond {
        Ok(())
    } else {
        Err(Failure(msg()))
    }
}

/// One trial: the generated instance and either the largest observed
/// deviation (zero for exact properties) or the failure.
pub struct Trial {
    pub instance: Value,
    pub outcome: std::result::Result<f64, String>,
}

impl Trial {
    fn new(instance: Value, check: impl FnOnce() -> Check) -> Trial {
        Trial {
            instance,
            outcome: check().map_err(|f| f.0),
        }
    }
}

pub struct Property {
    pub name: &'static str,
    /// The identity being checked, in words.
    pub anchor: &'static str,
    pub suite: Suite,
    pub(crate) run: fn(&mut Gen, &Tolerance) -> Trial,
}

impl std::fmt::Debug for Property {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Property")
            .field("name", &self.name)
            .field("suite", &self.suite)
            .finish()
    }
}

macro_rules! property {
    ($name:literal, $suite:ident, $anchor:literal, $run:path) => {
        Property {
            name: $name,
            anchor: $anchor,
            suite: Suite::$suite,
            run: $run,
        }
    };
}

pub static PROPERTIES: &[Property] = &[
    property!("core.lattice_laws", Core,
        "sup/inf are commutative, associative, absorptive; x + (y v z) = (x+y) v (x+z); |x| = x v -x = x+ + x-; x = x+ - x-",
        core_lattice_laws),
    property!("core.f_algebra", Core,
        "multiplication is associative and commutative; band projections commute and compose by intersecting supports",
        core_f_algebra),
    property!("core.band_projection", Core,
        "P_y E = 1_{y != 0}; projections are idempotent and 0 <= P x <= x for x >= 0",
        core_band_projection),
    property!("core.sup_decomposition", Core,
        "u = finite part + infinite part, with disjoint parts",
        core_sup_decomposition),
    property!("core.sup_family", Core,
        "sup G is infinite at an atom iff some member is; sup of an increasing sequence is its atomwise limit",
        core_sup_family),
    property!("spectral.spectral_system", Spectral,
        "A_t = 1_{X <= t}, increasing and right continuous in t, 0 below min X and E from max X on",
        spectral_system),
    property!("spectral.measure", Spectral,
        "mu_A(S) = 1_{X in S}, finitely additive on disjoint members of the interval algebra",
        spectral_measure),
    property!("spectral.step_integral", Spectral,
        "I(f) = f o X exactly for step functions, by the spectral measure and by the band-projection closed form",
        spectral_step_integral),
    property!("spectral.linearity_positivity", Spectral,
        "I(af + bg) = a I(f) + b I(g) for a, b >= 0; f <= g implies I(f) <= I(g)",
        spectral_linearity_positivity),
    property!("spectral.lattice_homomorphism", Spectral,
        "I(f v g) = I(f) v I(g), I(f ^ g) = I(f) ^ I(g), I(|f|) = |I(f)| exactly",
        spectral_lattice_homomorphism),
    property!("spectral.daniell_axiom", Spectral,
        "step functions decreasing pointwise to 0 have integrals decreasing to 0",
        spectral_daniell_axiom),
    property!("spectral.monotone_extension", Spectral,
        "I(f_n) increases to I(f) along increasing step sequences and is additive on their limits",
        spectral_monotone_extension),
    property!("spectral.uo_transfer", Spectral,
        "x_n -> x atomwise implies f(x_n) -> f(x) atomwise at the Lipschitz rate",
        spectral_uo_transfer),
    property!("spectral.functional_calculus", Spectral,
        "the Daniell integral of f+ and f- approximants at eps 2^-20 equals f o X within 2^-18",
        spectral_functional_calculus),
    property!("probability.projection", Probability,
        "F F = F, F E = E, and the range of F is the block-constant elements",
        probability_projection),
    property!("probability.strict_positivity", Probability,
        "x >= 0 and x != 0 imply F x > 0 on every block meeting the support of x",
        probability_strict_positivity),
    property!("probability.averaging", Probability,
        "F(f g) = f F(g) for block-constant f",
        probability_averaging),
    property!("probability.tower", Probability,
        "F_s F_t = F_t F_s = F_s for s <= t",
        probability_tower),
    property!("probability.range_regularity", Probability,
        "suprema of block-constant families are block-constant",
        probability_range_regularity),
    property!("probability.martingale", Probability,
        "X_t = F_t X is classified as a martingale",
        probability_martingale),
    property!("probability.affine_commutation", Probability,
        "F(L(X)) = L(F X) for affine L",
        probability_affine_commutation),
    property!("probability.jensen", Probability,
        "F(f(X)) >= f(F X) for max, l1 and quadratic f; equality for affine f",
        probability_jensen),
    property!("probability.convex_image", Probability,
        "convex images of martingales are submartingales; affine images are martingales",
        probability_convex_image),
    property!("stopping.representation", Stopping,
        "stopping times and increasing projection sequences commuting with the filtration correspond one to one",
        stopping_representation),
    property!("stopping.level_sets", Stopping,
        "the lateral sum of disjoint measurable U_n has level sets {tau = n} = U_n",
        stopping_level_sets),
    property!("stopping.closure", Stopping,
        "join, meet, sum, sup, inf and time changes of stopping times are stopping times",
        stopping_closure),
    property!("stopping.stopped_element", Stopping,
        "X_tau(w) = X_{tau(w)}(w) equals the band sum of (P_n - P_{n-1}) X_n",
        stopping_stopped_element),
    property!("stopping.stopped_process", Stopping,
        "(X_{tau ^ n})_n is adapted",
        stopping_stopped_process),
    property!("stopping.increasing_identities", Stopping,
        "for increasing X: X_{s v t} = X_s v X_t, X_{s ^ t} = X_s ^ X_t, X_{sup t_n} = sup X_{t_n}, X_{inf t_n} = inf X_{t_n}",
        stopping_increasing_identities),
    property!("stopping.debut", Stopping,
        "the first time 1_{tau <= n} reaches 1 is tau, including never",
        stopping_debut),
];

pub fn find(name: &str) -> Option<&'static Property> {
    PROPERTIES.iter().find(|p| p.name == name)
}

fn exact(a: &LatticeElement, b: &LatticeElement, what: &str) -> std::result::Result<(), Failure> {
    ensure(a == b, || format!("{what}: {a:?} != {b:?}"))
}

// ---- core ----

fn core_lattice_laws(g: &mut Gen, _: &Tolerance) -> Trial {
    let space = g.space();
    let (x, y, z) = (g.element(space), g.element(space), g.element(space));
    Trial::new(json!({ "x": x, "y": y, "z": z }), || {
        exact(&x.sup(&y)?, &y.sup(&x)?, "sup commutes")?;
        exact(&x.inf(&y)?, &y.inf(&x)?, "inf commutes")?;
        exact(&x.sup(&y)?.sup(&z)?, &x.sup(&y.sup(&z)?)?, "sup associates")?;
        exact(&x.inf(&y)?.inf(&z)?, &x.inf(&y.inf(&z)?)?, "inf associates")?;
        exact(&x.sup(&x.inf(&y)?)?, &x, "absorption v")?;
        exact(&x.inf(&x.sup(&y)?)?, &x, "absorption ^")?;
        exact(&x.add(&y.sup(&z)?)?, &x.add(&y)?.sup(&x.add(&z)?)?, "translation over v")?;
        exact(&x.add(&y.inf(&z)?)?, &x.add(&y)?.inf(&x.add(&z)?)?, "translation over ^")?;
        exact(&x.abs(), &x.sup(&x.neg())?, "|x| = x v -x")?;
        exact(&x.pos_part().sub(&x.neg_part())?, &x, "x = x+ - x-")?;
        exact(&x.pos_part().add(&x.neg_part())?, &x.abs(), "|x| = x+ + x-")?;
        exact(&x.add(&space.zero())?, &x, "x + 0 = x")?;
        Ok(0.0)
    })
}

fn random_set(g: &mut Gen, space: StoneSpace) -> ClopenSet {
    ClopenSet::new(space, (0..space.atoms()).map(|_| g.chance(0.5)).collect()).expect("sized")
}

fn core_f_algebra(g: &mut Gen, _: &Tolerance) -> Trial {
    let space = g.space();
    let (x, y, z) = (g.dyadic_element(space), g.dyadic_element(space), g.dyadic_element(space));
    let (p, q) = (BandProjection::onto(random_set(g, space)), BandProjection::onto(random_set(g, space)));
    Trial::new(json!({ "x": x, "y": y, "z": z, "p": p.support(), "q": q.support() }), || {
        exact(&x.mul(&y)?, &y.mul(&x)?, "xy = yx")?;
        exact(&x.mul(&y)?.mul(&z)?, &x.mul(&y.mul(&z)?)?, "(xy)z = x(yz)")?;
        exact(&p.apply(&q.apply(&x)?)?, &q.apply(&p.apply(&x)?)?, "PQ = QP")?;
        let pq = p.compose(&q)?;
        ensure(*pq.support() == p.support().intersection(q.support())?, || "support of PQ".into())?;
        exact(&pq.apply(&x)?, &p.apply(&q.apply(&x)?)?, "composite acts as PQ")?;
        Ok(0.0)
    })
}

fn core_band_projection(g: &mut Gen, _: &Tolerance) -> Trial {
    let space = g.space();
    let mut y = g.dyadic_element(space);
    if g.chance(0.3) {
        // force some zeros
        y = y.mul(&random_set(g, space).indicator()).expect("finite");
    }
    let u = g.sup_element(space, 0.2);
    let x = g.dyadic_element(space).abs();
    Trial::new(json!({ "y": y, "u": u, "x": x }), || {
        let p = BandProjection::of(&y);
        let direct = LatticeElement::new(space, y.values().iter().map(|v| if *v != 0.0 { 1.0 } else { 0.0 }).collect())?;
        exact(&p.apply_to_unit(), &direct, "P_y E = 1_{y != 0}")?;
        exact(&p.apply(&p.apply(&u)?)?, &p.apply(&u)?, "P P = P")?;
        let px = p.apply(&x)?;
        ensure(space.zero().le(&px)? && px.le(&x)?, || "0 <= P x <= x".into())?;
        let off = p.complement().apply(&u)?;
        ensure(
            (0..space.atoms()).all(|a| p.support().contains(a) || off.get(a) == u.get(a)),
            || "complement keeps u off the band".into(),
        )?;
        Ok(0.0)
    })
}

fn core_sup_decomposition(g: &mut Gen, _: &Tolerance) -> Trial {
    let space = g.space();
    let u = g.sup_element(space, 0.3).add(&g.dyadic_element(space)).expect("no -inf");
    Trial::new(json!({ "u": u }), || {
        let (finite, infinite) = u.finite_infinite_decomposition()?;
        ensure(finite.is_finite(), || "finite part is finite".into())?;
        exact(&finite.add(&infinite)?, &u, "finite + infinite = u")?;
        ensure(finite.mul(&infinite)?.is_zero(), || "parts are disjoint".into())?;
        for a in 0..space.atoms() {
            let (fa, ia) = if u.get(a).is_infinite() { (0.0, f64::INFINITY) } else { (u.get(a), 0.0) };
            ensure(finite.get(a) == fa && infinite.get(a) == ia, || format!("atom {a}"))?;
        }
        Ok(0.0)
    })
}

fn core_sup_family(g: &mut Gen, _: &Tolerance) -> Trial {
    let space = g.space();
    let p_inf = g.real(0.0, 0.7);
    let members = g.usize_in(1, 5);
    let family: Vec<LatticeElement> = (0..members).map(|_| g.sup_element(space, p_inf)).collect();
    let mut chain = vec![g.sup_element(space, 0.0)];
    for _ in 0..g.usize_in(0, 6) {
        let step = g.sup_element(space, 0.05);
        let next = chain.last().expect("non-empty").add(&step).expect("non-negative");
        chain.push(next);
    }
    Trial::new(json!({ "family": family, "chain": chain }), || {
        let s = sup_family(&family)?;
        let brute = (0..space.atoms()).all(|a| family.iter().any(|g| g.get(a) == f64::INFINITY));
        ensure(s.is_infinite_unit() == brute, || "sup G = inf E iff every atom is unbounded".into())?;
        for a in 0..space.atoms() {
            let m = family.iter().map(|g| g.get(a)).fold(f64::NEG_INFINITY, f64::max);
            ensure(s.get(a) == m, || format!("sup at atom {a}"))?;
        }
        let limit = sup_family(&chain)?;
        for a in 0..space.atoms() {
            let mut v = f64::NEG_INFINITY;
            for c in &chain {
                ensure(c.get(a) >= v, || "chain increases".into())?;
                v = c.get(a);
            }
            ensure(limit.get(a) == v, || format!("limit at atom {a}"))?;
        }
        Ok(0.0)
    })
}

// ---- spectral ----

fn probes(g: &mut Gen, x: &LatticeElement) -> Vec<f64> {
    let mut ts: Vec<f64> = x.values().to_vec();
    ts.extend(x.values().iter().map(|v| v - 0.125));
    ts.extend((0..4).map(|_| g.real(-12.0, 12.0)));
    ts.extend([f64::NEG_INFINITY, f64::INFINITY]);
    ts
}

fn spectral_system(g: &mut Gen, _: &Tolerance) -> Trial {
    let space = g.space();
    let x = g.dyadic_element(space);
    let ts = probes(g, &x);
    Trial::new(json!({ "x": x, "t": ts.iter().filter(|t| t.is_finite()).collect::<Vec<_>>() }), || {
        let a = SpectralSystem::new(&x)?;
        let mut distinct = x.values().to_vec();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        ensure(a.breakpoints() == distinct.as_slice(), || "breakpoints are the distinct values".into())?;
        for t in &ts {
            let direct = x.level_set(|v| v <= *t).indicator();
            exact(&a.at(*t), &direct, &format!("A_{t}"))?;
        }
        let (lo, hi) = (distinct[0], distinct[distinct.len() - 1]);
        ensure(a.at(lo - 1.0).is_zero(), || "A_t = 0 below min X".into())?;
        exact(&a.at(hi), &space.unit(), "A_t = E at max X")?;
        let mut sorted = ts.clone();
        sorted.sort_by(f64::total_cmp);
        for w in sorted.windows(2) {
            ensure(a.at(w[0]).le(&a.at(w[1]))?, || format!("A increasing at {} <= {}", w[0], w[1]))?;
        }
        for b in &distinct {
            // right continuity: the value at a jump is the limit from the right
            exact(&a.at(*b), &a.at(b + 1e-9), "right continuity")?;
        }
        Ok(0.0)
    })
}

fn spectral_measure(g: &mut Gen, _: &Tolerance) -> Trial {
    let space = g.space();
    let x = g.dyadic_element(space);
    let s = g.interval_set(x.values());
    let t = g.interval_set(x.values()).difference(&s);
    Trial::new(json!({ "x": x, "s": s, "t": t }), || {
        let a = SpectralSystem::new(&x)?;
        for set in [&s, &t] {
            let direct = x.level_set(|v| set.contains(v)).indicator();
            exact(&a.measure(set), &direct, "mu_A(S) = 1_{X in S}")?;
        }
        exact(&a.measure(&s.union(&t)), &a.measure(&s).add(&a.measure(&t))?, "additivity")?;
        exact(&a.measure(&IntervalSet::whole_line()), &space.unit(), "mu_A(R) = E")?;
        for p in s.pieces() {
            let direct = x.level_set(|v| p.lower() < v && v <= p.upper()).indicator();
            exact(&a.measure_piece(p), &direct, "mu_A(a, b] = 1_{a < X <= b}")?;
        }
        Ok(0.0)
    })
}

fn pointwise(f: &StepFunction, x: &LatticeElement) -> LatticeElement {
    x.map(|v| f.eval(v)).expect("finite")
}

fn spectral_step_integral(g: &mut Gen, _: &Tolerance) -> Trial {
    let space = g.space();
    let x = g.dyadic_element(space);
    let f = g.step_function(x.values());
    Trial::new(json!({ "x": x, "f": f }), || {
        let oracle = pointwise(&f, &x);
        exact(&daniell_step(&f, &x)?, &oracle, "I(f) = f o X")?;
        exact(&daniell_step_closed_form(&f, &x)?, &oracle, "closed form = f o X")?;
        Ok(0.0)
    })
}

fn spectral_linearity_positivity(g: &mut Gen, _: &Tolerance) -> Trial {
    let space = g.space();
    let x = g.dyadic_element(space);
    let (f, h) = (g.step_function(x.values()), g.step_function(x.values()));
    let bump = g.step_function(x.values()).abs().expect("valid");
    let (alpha, beta) = (g.dyadic().abs(), g.dyadic().abs());
    Trial::new(json!({ "x": x, "f": f, "g": h, "bump": bump, "alpha": alpha, "beta": beta }), || {
        let combo = f.scale(alpha)?.add(&h.scale(beta)?)?;
        let lhs = daniell_step(&combo, &x)?;
        let rhs = daniell_step(&f, &x)?.scale(alpha)?.add(&daniell_step(&h, &x)?.scale(beta)?)?;
        exact(&lhs, &rhs, "I(af + bg) = a I(f) + b I(g)")?;
        let above = f.add(&bump)?;
        ensure(f.le(&above), || "f <= f + bump".into())?;
        ensure(daniell_step(&f, &x)?.le(&daniell_step(&above, &x)?)?, || "I monotone".into())?;
        Ok(0.0)
    })
}

fn spectral_lattice_homomorphism(g: &mut Gen, _: &Tolerance) -> Trial {
    let space = g.space();
    let x = g.element(space);
    let (cf, cg) = (g.closed_form(), g.closed_form());
    let xs = g.dyadic_element(space);
    let (sf, sg) = (g.step_function(xs.values()), g.step_function(xs.values()));
    Trial::new(json!({ "x": x, "f": cf, "g": cg, "x_step": xs, "f_step": sf, "g_step": sg }), || {
        let (f, h) = (cf.to_function(), cg.to_function());
        let (i_f, i_g) = (compose_continuous(&f, &x)?, compose_continuous(&h, &x)?);
        exact(&compose_continuous(&f.sup(&h)?, &x)?, &i_f.sup(&i_g)?, "I(f v g)")?;
        exact(&compose_continuous(&f.inf(&h)?, &x)?, &i_f.inf(&i_g)?, "I(f ^ g)")?;
        exact(&compose_continuous(&f.abs(), &x)?, &i_f.abs(), "I(|f|)")?;
        let (j_f, j_g) = (daniell_step(&sf, &xs)?, daniell_step(&sg, &xs)?);
        exact(&daniell_step(&sf.sup(&sg)?, &xs)?, &j_f.sup(&j_g)?, "step I(f v g)")?;
        exact(&daniell_step(&sf.inf(&sg)?, &xs)?, &j_f.inf(&j_g)?, "step I(f ^ g)")?;
        exact(&daniell_step(&sf.abs()?, &xs)?, &j_f.abs(), "step I(|f|)")?;
        Ok(0.0)
    })
}

fn spectral_daniell_axiom(g: &mut Gen, _: &Tolerance) -> Trial {
    let space = g.space();
    let a = g.dyadic();
    let width = g.usize_in(1, 8) as f64;
    // Some atoms sit inside the shrinking window, one on its open end.
    let values = (0..space.atoms())
        .map(|_| match g.usize_in(0, 3) {
            0 => a,
            1 => a + width / (1u64 << g.usize_in(0, 12)) as f64,
            _ => g.dyadic(),
        })
        .collect();
    let x = LatticeElement::new(space, values).expect("finite");
    let base = g.step_function(x.values()).abs().expect("valid");
    let height = g.dyadic().abs();
    Trial::new(json!({ "x": x, "a": a, "width": width, "base": base, "height": height }), || {
        // f_n = (base + h_n) 1_{(a, a + width 2^-n]} decreases to 0 at every t
        let mut previous: Option<LatticeElement> = None;
        let mut last = space.zero();
        for n in 0..64u32 {
            let window = IntervalSet::single(Interval::left_open(a, a + width / 2f64.powi(n as i32))?);
            let f = base.add(&StepFunction::constant(height / (n as f64 + 1.0))?)?.zip_with(
                &StepFunction::indicator(&window, 1.0)?,
                |u, v| u * v,
            )?;
            let value = daniell_step(&f, &x)?;
            if let Some(p) = &previous {
                ensure(value.le(p)?, || format!("I(f_{n}) exceeds I(f_{})", n.saturating_sub(1)))?;
            }
            last = value.clone();
            previous = Some(value);
            if !x.values().iter().any(|v| window.contains(*v)) {
                break;
            }
        }
        ensure(last.is_zero(), || format!("I(f_n) does not reach 0: {last:?}"))?;
        Ok(0.0)
    })
}

fn spectral_monotone_extension(g: &mut Gen, _: &Tolerance) -> Trial {
    let space = g.space();
    let x = LatticeElement::new(space, (0..space.atoms()).map(|_| g.usize_in(1, 12) as f64).collect())
        .expect("finite");
    let xd = g.dyadic_element(space);
    let len = g.usize_in(1, 6);
    let increments = |g: &mut Gen| -> Vec<StepFunction> {
        (0..len).map(|_| g.step_function(xd.values()).abs().expect("valid")).collect()
    };
    let (df, dg) = (increments(g), increments(g));
    let horizon = g.usize_in(1, len);
    Trial::new(json!({ "x": x, "x_sum": xd, "f_increments": df, "g_increments": dg, "horizon": horizon }), || {
        // truncations of the identity on the positive integers
        let staircase = (1..=12)
            .map(|k| {
                let pieces: Vec<(IntervalSet, f64)> = (0..=k)
                    .map(|j| {
                        let lo = if j == 0 { f64::NEG_INFINITY } else { (j - 1) as f64 };
                        let hi = if j == k { f64::INFINITY } else { j as f64 };
                        (IntervalSet::single(Interval::new(lo, hi).expect("increasing")), j as f64)
                    })
                    .collect();
                StepFunction::from_partition(&pieces)
            })
            .collect::<crate::Result<Vec<_>>>()?;
        let seq = MonotoneStepSequence::new(staircase)?;
        exact(&daniell_monotone(&seq, &x, 12)?, &x, "truncations of the identity recover X")?;
        let trace = daniell_monotone_trace(&seq, &x, 12)?;
        for w in trace.windows(2) {
            ensure(w[0].le(&w[1])?, || "I(f_n) increases".into())?;
        }

        let partial = |inc: &[StepFunction]| -> crate::Result<Vec<StepFunction>> {
            let mut acc = Vec::with_capacity(inc.len());
            for d in inc {
                let next = match acc.last() {
                    Some(prev) => d.add(prev)?,
                    None => d.clone(),
                };
                acc.push(next);
            }
            Ok(acc)
        };
        let (fs, gs) = (partial(&df)?, partial(&dg)?);
        let sums = fs.iter().zip(&gs).map(|(a, b)| a.add(b)).collect::<crate::Result<Vec<_>>>()?;
        let i = |terms: Vec<StepFunction>| -> crate::Result<LatticeElement> {
            daniell_monotone(&MonotoneStepSequence::new(terms)?, &xd, horizon)
        };
        exact(&i(sums)?, &i(fs)?.add(&i(gs)?)?, "I(f + g) = I(f) + I(g)")?;
        Ok(0.0)
    })
}

fn spectral_uo_transfer(g: &mut Gen, tol: &Tolerance) -> Trial {
    let space = g.space();
    let x = g.element(space);
    let d = LatticeElement::new(space, (0..space.atoms()).map(|_| g.real(-1.0, 1.0)).collect()).expect("finite");
    let cf = g.closed_form();
    let tol = *tol;
    Trial::new(json!({ "x": x, "direction": d, "f": cf }), || {
        let f = cf.to_function();
        let target = compose_continuous(&f, &x)?;
        let radius = x.values().iter().fold(0.0f64, |m, v| m.max(v.abs())) + 1.0;
        let l = f.lipschitz_on(&[(-radius, radius)]).expect("closed forms carry bounds");
        let mut worst = 0.0f64;
        let mut gap = f64::INFINITY;
        for n in 0..=40 {
            let step = 2f64.powi(-n);
            let xn = x.add(&d.scale(step)?)?;
            let fx = compose_continuous(&f, &xn)?;
            gap = fx.max_abs_diff(&target)?;
            let allowed = l * step + tol.absolute + tol.relative * target.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
            worst = worst.max(gap - l * step);
            ensure(gap <= allowed, || format!("|f(x_{n}) - f(x)| = {gap} exceeds {allowed}"))?;
        }
        ensure(gap <= tol.absolute.max(tol.relative), || format!("no atomwise convergence: {gap}"))?;
        Ok(worst.max(0.0))
    })
}

fn spectral_functional_calculus(g: &mut Gen, _: &Tolerance) -> Trial {
    let space = g.space();
    let x = g.element(space);
    let cf = g.closed_form();
    Trial::new(json!({ "x": x, "f": cf, "eps": CALCULUS_EPS }), || {
        let f = cf.to_function();
        let via_daniell = daniell_continuous(&f, &x, CALCULUS_EPS)?;
        let direct = compose_continuous(&f, &x)?;
        let gap = via_daniell.max_abs_diff(&direct)?;
        ensure(gap <= CALCULUS_TOLERANCE, || format!("Daniell route differs from f o X by {gap}"))?;
        Ok(gap)
    })
}

// ---- probability ----

fn probability_projection(g: &mut Gen, _: &Tolerance) -> Trial {
    let space = g.space();
    let ce = g.conditional_expectation(space);
    let x = g.element(space);
    let fixed = g.block_constant(&ce);
    Trial::new(json!({ "weights": ce.weights(), "blocks": ce.blocks(), "x": x, "block_constant": fixed }), || {
        let fx = ce.apply(&x)?;
        exact(&ce.apply(&fx)?, &fx, "F F = F")?;
        exact(&ce.apply(&space.unit())?, &space.unit(), "F E = E")?;
        ensure(ce.is_in_range(&fx), || "F x is block-constant".into())?;
        exact(&ce.apply(&fixed)?, &fixed, "block-constant elements are fixed")?;
        Ok(0.0)
    })
}

fn probability_strict_positivity(g: &mut Gen, _: &Tolerance) -> Trial {
    let space = g.space();
    let ce = g.conditional_expectation(space);
    let mut x = g.element(space).abs().mul(&random_set(g, space).indicator()).expect("finite");
    if x.is_zero() {
        x = ClopenSet::from_atoms(space, [g.usize_in(0, space.atoms() - 1)]).expect("in range").indicator();
    }
    Trial::new(json!({ "weights": ce.weights(), "blocks": ce.blocks(), "x": x }), || {
        let fx = ce.apply(&x)?;
        for block in ce.blocks() {
            let meets = block.iter().any(|a| x.get(*a) > 0.0);
            for a in block {
                ensure(fx.get(*a) >= 0.0, || "F x >= 0".into())?;
                ensure(!meets || fx.get(*a) > 0.0, || format!("F x vanishes at atom {a}"))?;
            }
        }
        Ok(0.0)
    })
}

fn probability_averaging(g: &mut Gen, tol: &Tolerance) -> Trial {
    let space = g.space();
    let ce = g.conditional_expectation(space);
    let f = g.block_constant(&ce);
    let x = g.element(space);
    let tol = *tol;
    Trial::new(json!({ "weights": ce.weights(), "blocks": ce.blocks(), "f": f, "g": x }), || {
        let lhs = ce.apply(&f.mul(&x)?)?;
        let rhs = f.mul(&ce.apply(&x)?)?;
        ensure(lhs.approx_eq(&rhs, tol), || format!("F(fg) = {lhs:?}, f F(g) = {rhs:?}"))?;
        Ok(lhs.max_abs_diff(&rhs)?)
    })
}

fn probability_tower(g: &mut Gen, tol: &Tolerance) -> Trial {
    let space = g.space();
    let horizon = g.horizon();
    let f = g.filtration(space, horizon);
    let x = g.element(space);
    let tol = *tol;
    Trial::new(json!({ "filtration": &*f, "x": x }), || {
        f.verify_tower(tol)?;
        let mut worst = 0.0f64;
        for s in 1..=horizon {
            for t in s..=horizon {
                let direct = f.stage(s).apply(&x)?;
                for composed in [
                    f.stage(s).apply(&f.stage(t).apply(&x)?)?,
                    f.stage(t).apply(&f.stage(s).apply(&x)?)?,
                ] {
                    ensure(composed.approx_eq(&direct, tol), || format!("tower fails for s={s}, t={t}"))?;
                    worst = worst.max(composed.max_abs_diff(&direct)?);
                }
            }
        }
        Ok(worst)
    })
}

fn probability_range_regularity(g: &mut Gen, _: &Tolerance) -> Trial {
    let space = g.space();
    let ce = g.conditional_expectation(space);
    let n = g.usize_in(1, 5);
    let family: Vec<LatticeElement> = (0..n).map(|_| g.block_constant(&ce)).collect();
    Trial::new(json!({ "weights": ce.weights(), "blocks": ce.blocks(), "family": family }), || {
        let mut hi = family[0].clone();
        let mut lo = family[0].clone();
        for m in &family[1..] {
            hi = hi.sup(m)?;
            lo = lo.inf(m)?;
        }
        ensure(ce.is_in_range(&hi) && ce.is_in_range(&lo), || "extrema leave the range".into())?;
        Ok(0.0)
    })
}

fn probability_martingale(g: &mut Gen, tol: &Tolerance) -> Trial {
    let space = g.space();
    let horizon = g.horizon();
    let f = g.filtration(space, horizon);
    let terminal = g.element(space);
    let tol = *tol;
    Trial::new(json!({ "filtration": &*f, "terminal": terminal }), || {
        let p = AdaptedProcess::doob(f.clone(), &terminal, horizon)?;
        let class = p.classify(tol);
        ensure(class == ProcessClass::Martingale, || format!("classified as {class:?}"))?;
        Ok(0.0)
    })
}

fn affine_map(g: &mut Gen, n: usize) -> AffineMap {
    AffineMap::new((0..n).map(|_| g.dyadic() / 5.0).collect(), g.dyadic())
}

fn probability_affine_commutation(g: &mut Gen, tol: &Tolerance) -> Trial {
    let space = g.space();
    let ce = g.conditional_expectation(space);
    let n = g.usize_in(1, 3);
    let xs: Vec<LatticeElement> = (0..n).map(|_| g.element(space)).collect();
    let l = affine_map(g, n);
    let tol = *tol;
    Trial::new(json!({ "weights": ce.weights(), "blocks": ce.blocks(), "xs": xs, "affine": l }), || {
        let through = ce.apply(&compose_multivariate(&l.to_function(), &xs)?)?;
        let averaged = xs.iter().map(|x| ce.apply(x)).collect::<crate::Result<Vec<_>>>()?;
        let outside = l.apply(&averaged)?;
        ensure(through.approx_eq(&outside, tol), || format!("F(L(X)) = {through:?}, L(F X) = {outside:?}"))?;
        Ok(through.max_abs_diff(&outside)?)
    })
}

fn probability_jensen(g: &mut Gen, tol: &Tolerance) -> Trial {
    let space = g.space();
    let ce = g.conditional_expectation(space);
    let n = g.usize_in(1, 3);
    let xs: Vec<LatticeElement> = (0..n).map(|_| g.element(space).scale(0.4).expect("finite")).collect();
    let kind = ["max", "l1", "quadratic", "affine"][g.usize_in(0, 3)];
    let l = affine_map(g, n);
    let tol = *tol;
    Trial::new(
        json!({ "weights": ce.weights(), "blocks": ce.blocks(), "xs": xs, "function": kind, "affine": l }),
        || {
            let f = match kind {
                "max" => ConvexFunction::max(n),
                "l1" => ConvexFunction::l1(n),
                "quadratic" => ConvexFunction::quadratic(n),
                _ => ConvexFunction::affine(l.clone()),
            };
            let r = jensen(&f, &xs, &ce, tol)?;
            ensure(r.min_slack >= -tol.absolute, || format!("{kind}: slack {}", r.min_slack))?;
            ensure(r.holds, || format!("{kind}: minorant chain fails"))?;
            ensure(r.envelope_gap <= tol.absolute.max(tol.relative * 100.0), || {
                format!("{kind}: minorants miss f(F X) by {}", r.envelope_gap)
            })?;
            if kind == "affine" {
                let worst = r.slack.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
                ensure(worst <= tol.absolute, || format!("affine slack {worst}"))?;
                return Ok(worst);
            }
            Ok((-r.min_slack).max(0.0))
        },
    )
}

fn probability_convex_image(g: &mut Gen, tol: &Tolerance) -> Trial {
    let space = g.space();
    let horizon = g.horizon();
    let f = g.filtration(space, horizon);
    let (m1, m2) = (g.martingale(&f), g.martingale(&f));
    let kind = ["abs", "max2", "affine"][g.usize_in(0, 2)];
    let l = affine_map(g, 2);
    let tol = *tol;
    Trial::new(
        json!({ "filtration": &*f, "x": m1.to_values(), "y": m2.to_values(), "function": kind, "affine": l }),
        || {
            let (components, g) = match kind {
                "abs" => (vec![m1.clone()], ConvexFunction::abs()),
                "max2" => (vec![m1.clone(), m2.clone()], ConvexFunction::max(2)),
                _ => (vec![m1.clone(), m2.clone()], ConvexFunction::affine(l.clone())),
            };
            let r = convex_image_submartingale(&components, &g, tol)?;
            ensure(r.holds, || format!("{kind} image classified as {:?}", r.class))?;
            if kind == "affine" {
                ensure(r.class == ProcessClass::Martingale, || format!("affine image is {:?}", r.class))?;
            }
            Ok((-r.min_slack).max(0.0))
        },
    )
}

// ---- stopping ----

/// Independent measurability oracle: `1_{tau <= n}` is fixed by `F_n`.
fn measurable_by_averaging(t: &StoppingTime) -> std::result::Result<(), Failure> {
    let f = t.filtration();
    let top = t.max_finite().unwrap_or(0).max(f.horizon() as u64);
    for n in 1..=top {
        let ind = t.at_most(n).indicator();
        ensure(f.stage(n as usize).apply(&ind)? == ind, || format!("{{tau <= {n}}} is not F_{n}-measurable"))?;
    }
    Ok(())
}

fn doc(t: &StoppingTime) -> Value {
    serde_json::to_value(t.to_doc(Some("F"))).expect("serializable")
}

fn stopping_representation(g: &mut Gen, _: &Tolerance) -> Trial {
    let space = g.space();
    let horizon = g.horizon();
    let f = g.filtration(space, horizon);
    let t = g.stopping_time(&f, None);
    Trial::new(json!({ "filtration": &*f, "tau": doc(&t) }), || {
        let bands = t.to_projections();
        for w in bands.windows(2) {
            ensure(w[0].le(&w[1])?, || "projections increase".into())?;
        }
        let back = from_projections(&bands, f.clone())?;
        ensure(back == t, || format!("tau -> P -> tau gave {:?}", back.values()))?;
        ensure(back.to_projections() == bands, || "P -> tau -> P changed the projections".into())?;
        Ok(0.0)
    })
}

fn stopping_level_sets(g: &mut Gen, _: &Tolerance) -> Trial {
    let space = g.space();
    let horizon = g.horizon();
    let f = g.filtration(space, horizon);
    // disjoint U_n, U_n a union of F_n blocks outside earlier U's
    let mut taken = space.empty();
    let mut pieces = Vec::new();
    for n in 1..=horizon {
        let mut u = space.empty();
        for block in f.stage(n).blocks() {
            if !taken.contains(block[0]) && g.chance(0.4) {
                u = u.union(&ClopenSet::from_atoms(space, block.iter().copied()).expect("in range")).expect("same");
            }
        }
        taken = taken.union(&u).expect("same space");
        pieces.push(u);
    }
    Trial::new(json!({ "filtration": &*f, "pieces": pieces }), || {
        let mut w = space.empty();
        let bands: Vec<BandProjection> = pieces
            .iter()
            .map(|u| {
                w = w.union(u).expect("same space");
                BandProjection::onto(w.clone())
            })
            .collect();
        let t = from_projections(&bands, f.clone())?;
        for (i, u) in pieces.iter().enumerate() {
            ensure(t.level_set(ExtNat::Finite(i as u64 + 1)) == *u, || format!("{{tau = {}}} != U_{}", i + 1, i + 1))?;
        }
        ensure(t.level_set(ExtNat::Infinity) == taken.complement(), || "{tau = inf} is the rest".into())?;
        ensure(!t.values().contains(&ExtNat::Finite(0)), || "zero in the range".into())?;
        Ok(0.0)
    })
}

fn stopping_closure(g: &mut Gen, _: &Tolerance) -> Trial {
    let space = g.space();
    let horizon = g.horizon();
    let f = g.filtration(space, horizon);
    let (s, t) = (g.stopping_time(&f, None), g.stopping_time(&f, None));
    let family: Vec<StoppingTime> = (0..g.usize_in(1, 4)).map(|_| g.stopping_time(&f, None)).collect();
    let reach = horizon + 3;
    let mut nk = Vec::with_capacity(reach);
    let mut last = 0u64;
    for k in 1..=reach as u64 {
        last = (last + 1).max(k) + g.usize_in(0, 2) as u64;
        nk.push(last);
    }
    Trial::new(
        json!({ "filtration": &*f, "sigma": doc(&s), "tau": doc(&t),
                "family": family.iter().map(doc).collect::<Vec<_>>(), "nk": nk }),
        || {
            let results = [
                ("join", s.join(&t)?),
                ("meet", s.meet(&t)?),
                ("plus", s.plus(&t)?),
                ("sup", extremum(&family, Extremum::Sup)?),
                ("inf", extremum(&family, Extremum::Inf)?),
                ("time_change", t.time_change(&nk)?),
            ];
            for (what, r) in &results {
                measurable_by_averaging(r).map_err(|e| Failure(format!("{what}: {}", e.0)))?;
            }
            for a in 0..space.atoms() {
                let (x, y) = (s.get(a), t.get(a));
                ensure(results[0].1.get(a) == x.max(y), || "join is the max".into())?;
                ensure(results[1].1.get(a) == x.min(y), || "meet is the min".into())?;
                ensure(results[2].1.get(a) == x.plus(y), || "plus is the sum".into())?;
                let m = family.iter().map(|t| t.get(a));
                ensure(results[3].1.get(a) == m.clone().max().expect("non-empty"), || "sup".into())?;
                ensure(results[4].1.get(a) == m.min().expect("non-empty"), || "inf".into())?;
            }
            Ok(0.0)
        },
    )
}

fn stopping_stopped_element(g: &mut Gen, _: &Tolerance) -> Trial {
    let space = g.space();
    let horizon = g.horizon();
    let f = g.filtration(space, horizon);
    let p = if g.chance(0.5) { g.martingale(&f) } else { g.increasing_process(&f) };
    let t = g.stopping_time(&f, Some(horizon as u64));
    Trial::new(json!({ "filtration": &*f, "process": p.to_values(), "tau": doc(&t) }), || {
        let pointwise = stopped_element_pointwise(&p, &t)?;
        let band_sum = stopped_element_band_sum(&p, &t)?;
        exact(&pointwise, &band_sum, "pointwise = band sum")?;
        for a in 0..space.atoms() {
            let n = t.get(a).finite().expect("bounded") as usize;
            ensure(pointwise.get(a) == p.at(n).get(a), || format!("atom {a}"))?;
        }
        Ok(0.0)
    })
}

fn stopping_stopped_process(g: &mut Gen, _: &Tolerance) -> Trial {
    let space = g.space();
    let horizon = g.horizon();
    let f = g.filtration(space, horizon);
    let p = g.martingale(&f);
    let t = g.stopping_time(&f, None);
    Trial::new(json!({ "filtration": &*f, "process": p.to_values(), "tau": doc(&t) }), || {
        let s = stopped_process(&p, &t)?;
        for n in 1..=s.len() {
            let y = s.at(n);
            exact(&f.stage(n).apply(y)?, y, &format!("F_{n} fixes the stopped value"))?;
            for a in 0..space.atoms() {
                let m = t.get(a).min(ExtNat::Finite(n as u64)).finite().expect("truncated") as usize;
                ensure(y.get(a) == p.at(m).get(a), || format!("X_(tau ^ {n}) at atom {a}"))?;
            }
        }
        Ok(0.0)
    })
}

fn stopping_increasing_identities(g: &mut Gen, _: &Tolerance) -> Trial {
    let space = g.space();
    let horizon = g.horizon();
    let f = g.filtration(space, horizon);
    let p = g.increasing_process(&f);
    let h = Some(horizon as u64);
    let (s, t) = (g.stopping_time(&f, h), g.stopping_time(&f, h));
    let family: Vec<StoppingTime> = (0..g.usize_in(1, 4)).map(|_| g.stopping_time(&f, h)).collect();
    Trial::new(
        json!({ "filtration": &*f, "process": p.to_values(), "sigma": doc(&s), "tau": doc(&t),
                "family": family.iter().map(doc).collect::<Vec<_>>() }),
        || {
            let r = increasing_process_identities(&p, &s, &t, &family)?;
            ensure(r.all(), || format!("identities: {r:?}"))?;
            // atomwise oracle
            let at = |tau: ExtNat, a: usize| p.at(tau.finite().expect("bounded") as usize).get(a);
            let x_join = stopped_element_pointwise(&p, &s.join(&t)?)?;
            for a in 0..space.atoms() {
                ensure(x_join.get(a) == at(s.get(a), a).max(at(t.get(a), a)), || format!("join at atom {a}"))?;
            }
            Ok(0.0)
        },
    )
}

fn stopping_debut(g: &mut Gen, _: &Tolerance) -> Trial {
    let space = g.space();
    let horizon = g.horizon();
    let f = g.filtration(space, horizon);
    let t = g.stopping_time(&f, None);
    Trial::new(json!({ "filtration": &*f, "tau": doc(&t), "fallback_horizon": horizon }), || {
        let d = debut(&t, horizon)?;
        ensure(d.process.is_increasing(), || "1_{tau <= n} increases".into())?;
        ensure(
            d.process.path().iter().all(|x| x.values().iter().all(|v| *v == 0.0 || *v == 1.0)),
            || "indicator values".into(),
        )?;
        ensure(d.recovered == t, || format!("recovered {:?} from {:?}", d.recovered.values(), t.values()))?;
        Ok(0.0)
    })
}
