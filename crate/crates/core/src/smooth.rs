//! Exact certificates for the geometric hypotheses: emptiness of bivariate
//! systems over the algebraic closure, smoothness of bidegree-(1,4)
//! hypersurfaces in P^1 x P^2 via the Jacobian criterion, fiberwise
//! nonvanishing, and square-freeness of the generic fiber polynomial.
//!
//! Emptiness is decided by exact elimination, never by sampling: a random
//! integer shear puts the system in triangular position, resultants cut out
//! the candidate locus on the first axis, and solvability above it is
//! decided by gcd computations in the quotient ring modulo the square-free
//! candidate polynomial, splitting the modulus at zero-divisors
//! (dynamic evaluation). Rational points found along the way are reported
//! as witnesses.

use std::fmt;

use num_traits::{One, Zero};
use rand_core::{RngCore, SeedableRng};

use crate::algebra::gcd::{poly_gcd, resultant, squarefree_test};
use crate::algebra::poly::{MPoly, Mono, Rat};
use crate::algebra::roots::rational_roots;
use crate::algebra::var::Var;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmoothError {
    AllInputsZero,
    NotBivariate(String),
    ShearRetryCapExceeded,
    SectionsNotDistinct,
    NotHomogeneousQuartic(String),
    ZeroForm,
    SplitDepthExceeded,
}

impl fmt::Display for SmoothError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmoothError::AllInputsZero => write!(f, "all input polynomials are zero"),
            SmoothError::NotBivariate(s) => {
                write!(
                    f,
                    "inputs must be polynomials in the two chart variables: {s}"
                )
            }
            SmoothError::ShearRetryCapExceeded => {
                write!(
                    f,
                    "shear retry cap exceeded without constant leading coefficients"
                )
            }
            SmoothError::SectionsNotDistinct => write!(f, "sections not distinct"),
            SmoothError::NotHomogeneousQuartic(s) => {
                write!(f, "expected a homogeneous quartic in x1, x2, x3: {s}")
            }
            SmoothError::ZeroForm => write!(f, "both quartics vanish identically"),
            SmoothError::SplitDepthExceeded => {
                write!(f, "dynamic-evaluation split depth exceeded")
            }
        }
    }
}

impl std::error::Error for SmoothError {}

/// Outcome of a common-zero decision; the witness, when present, is a
/// rational common zero found by the fast path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroDecision {
    pub exists: bool,
    pub witness: Option<(Rat, Rat)>,
}

impl ZeroDecision {
    fn no() -> ZeroDecision {
        ZeroDecision {
            exists: false,
            witness: None,
        }
    }

    fn yes(witness: Option<(Rat, Rat)>) -> ZeroDecision {
        ZeroDecision {
            exists: true,
            witness,
        }
    }
}

const SHEAR_CAP: u32 = 32;
const SPLIT_DEPTH_CAP: u32 = 64;

fn draw_i64(rng: &mut impl RngCore, lo: i64, hi: i64) -> i64 {
    let span = (hi - lo + 1) as u64;
    lo + (rng.next_u64() % span) as i64
}

// ---------------------------------------------------------------------------
// univariate helpers over Q, coefficients ascending in u
// ---------------------------------------------------------------------------

fn uni(p: &MPoly) -> Vec<Rat> {
    debug_assert!(p.vars_used().iter().all(|&v| v == Var::U));
    let mut out = vec![Rat::zero(); p.degree_in(Var::U) as usize + 1];
    for (m, c) in p.terms() {
        out[m.exp(Var::U) as usize] = c.clone();
    }
    out
}

fn uni_poly(c: &[Rat]) -> MPoly {
    MPoly::from_terms(
        c.iter()
            .enumerate()
            .map(|(e, c)| (Mono::of_var(Var::U, e as u32), c.clone())),
    )
}

fn uni_trim(v: &mut Vec<Rat>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

fn uni_rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r = a.to_vec();
    uni_trim(&mut r);
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db {
        let c = &r[r.len() - 1] / &lead;
        let shift = r.len() - 1 - db;
        for i in 0..=db {
            let v = &r[shift + i] - &(&c * &b[i]);
            r[shift + i] = v;
        }
        uni_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// (g, s) with s*a ≡ g (mod b) and g = gcd(a, b), monic.
fn uni_half_ext_gcd(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    uni_trim(&mut r0);
    uni_trim(&mut r1);
    let mut s0 = vec![Rat::one()];
    let mut s1: Vec<Rat> = Vec::new();
    while !r1.is_empty() {
        // r0 = q*r1 + r
        let (q, r) = uni_divrem(&r0, &r1);
        let s = uni_sub(&s0, &uni_mul(&q, &s1));
        r0 = r1;
        s0 = s1;
        r1 = r;
        s1 = s;
    }
    // normalize monic
    if let Some(lead) = r0.last().cloned() {
        let inv = lead.recip();
        for c in r0.iter_mut() {
            *c *= &inv;
        }
        for c in s0.iter_mut() {
            *c *= &inv;
        }
    }
    (r0, s0)
}

fn uni_divrem(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut r = a.to_vec();
    uni_trim(&mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let lead = b[db].clone();
    let mut q = vec![Rat::zero(); r.len() - db];
    while r.len() > db {
        let c = &r[r.len() - 1] / &lead;
        let shift = r.len() - 1 - db;
        q[shift] = c.clone();
        for i in 0..=db {
            let v = &r[shift + i] - &(&c * &b[i]);
            r[shift + i] = v;
        }
        uni_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    uni_trim(&mut q);
    (q, r)
}

fn uni_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let v = &out[i + j] + &(x * y);
            out[i + j] = v;
        }
    }
    uni_trim(&mut out);
    out
}

fn uni_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] = x.clone();
    }
    for (i, y) in b.iter().enumerate() {
        let v = &out[i] - y;
        out[i] = v;
    }
    uni_trim(&mut out);
    out
}

// ---------------------------------------------------------------------------
// arithmetic in (Q[u]/(m))[v] with dynamic-evaluation splitting
// ---------------------------------------------------------------------------

/// Split request: the modulus factors as m1 * m2 and the computation must be
/// redone on each factor.
struct Split(MPoly, MPoly);

/// Reduce every v-coefficient of p modulo m(u).
fn amod(p: &MPoly, m: &[Rat]) -> MPoly {
    let coeffs = p.coeffs_in(Var::V);
    let mut out = MPoly::zero();
    for (e, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut r = uni_rem(&uni(c), m);
        uni_trim(&mut r);
        if r.is_empty() {
            continue;
        }
        out = out.add(&uni_poly(&r).mul_mono(&Mono::of_var(Var::V, e as u32)));
    }
    out
}

/// Inverse of the u-polynomial `c` modulo m, or a split of m.
fn a_invert(c: &MPoly, m: &MPoly) -> Result<Vec<Rat>, Split> {
    let mu = uni(m);
    let (g, s) = uni_half_ext_gcd(&uni(c), &mu);
    if g.len() == 1 {
        // unit: s * c ≡ g (a nonzero constant, already monic => g = 1)
        return Ok(s);
    }
    // proper zero divisor: split the modulus
    let g_poly = uni_poly(&g);
    let cofactor = uni_poly(&uni_divrem(&mu, &g).0);
    Err(Split(g_poly, cofactor))
}

/// Remainder of a by b in (Q[u]/(m))[v], where b is monic in v.
fn a_rem(a: &MPoly, b: &MPoly, m: &[Rat]) -> MPoly {
    let db = b.degree_in(Var::V);
    let mut r = amod(a, m);
    loop {
        if r.is_zero() {
            return r;
        }
        let dr = r.degree_in(Var::V);
        if dr < db {
            return r;
        }
        let c = r.coeff_of(Var::V, dr);
        let shift = Mono::of_var(Var::V, dr - db);
        r = amod(&r.sub(&c.mul_mono(&shift).mul(b)), m);
    }
}

/// gcd of a and b in (Q[u]/(m))[v]; m square-free. May request a split.
fn a_gcd(a: &MPoly, b: &MPoly, m: &MPoly) -> Result<MPoly, Split> {
    let mu = uni(m);
    let mut x = amod(a, &mu);
    let mut y = amod(b, &mu);
    loop {
        if y.is_zero() {
            return Ok(x);
        }
        let dy = y.degree_in(Var::V);
        if dy == 0 {
            // constant in v: either a unit (gcd is 1) or a zero divisor
            return match a_invert(&y, m) {
                Ok(_) => Ok(MPoly::one()),
                Err(split) => Err(split),
            };
        }
        let lc = y.coeff_of(Var::V, dy);
        let inv = a_invert(&lc, m)?;
        let monic = amod(&y.mul(&uni_poly(&inv)), &mu);
        let r = a_rem(&x, &monic, &mu);
        x = monic;
        y = r;
    }
}

/// True iff the system has a common zero with u lying above a root of the
/// square-free modulus m.
fn solvable_above(m: &MPoly, polys: &[MPoly], depth: u32) -> Result<bool, SmoothError> {
    if depth > SPLIT_DEPTH_CAP {
        return Err(SmoothError::SplitDepthExceeded);
    }
    if m.is_constant() {
        return Ok(false);
    }
    let mu = uni(m);
    let reduced: Vec<MPoly> = polys.iter().map(|p| amod(p, &mu)).collect();
    let mut g: Option<MPoly> = None;
    for p in &reduced {
        if p.is_zero() {
            continue;
        }
        let next = match &g {
            None => p.clone(),
            Some(acc) => match a_gcd(acc, p, m) {
                Ok(v) => v,
                Err(Split(m1, m2)) => {
                    return Ok(solvable_above(&m1, polys, depth + 1)?
                        || solvable_above(&m2, polys, depth + 1)?);
                }
            },
        };
        g = Some(next);
    }
    match g {
        // every polynomial vanishes identically above m: the whole fiber is
        // a common zero
        None => Ok(true),
        Some(g) => {
            if g.is_zero() {
                return Ok(true);
            }
            if g.degree_in(Var::V) > 0 {
                return Ok(true);
            }
            // constant in v but possibly a zero divisor: the chain may have
            // terminated early on the components where g vanishes
            let d = poly_gcd(&g, m);
            if d.is_constant() {
                Ok(false)
            } else {
                solvable_above(&d, polys, depth + 1)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// the decision procedure
// ---------------------------------------------------------------------------

fn rename_to_uv(p: &MPoly, vars: (Var, Var)) -> Result<MPoly, SmoothError> {
    if p.vars_used().iter().any(|v| *v != vars.0 && *v != vars.1) {
        return Err(SmoothError::NotBivariate(p.to_string()));
    }
    // route through unused slots to avoid collisions
    let q = p
        .substitute(vars.0, &MPoly::var(Var::Z0))
        .substitute(vars.1, &MPoly::var(Var::Z1));
    Ok(q.substitute(Var::Z0, &MPoly::var(Var::U))
        .substitute(Var::Z1, &MPoly::var(Var::V)))
}

/// Rational common zero search at a candidate rational first coordinate.
fn rational_point_above(u0: &Rat, polys: &[MPoly]) -> Option<(Rat, Rat)> {
    let specialized: Vec<MPoly> = polys
        .iter()
        .map(|p| p.specialize(&[(Var::U, u0.clone())]))
        .collect();
    if specialized.iter().any(|p| !p.is_zero() && p.is_constant()) {
        return None;
    }
    let mut g = MPoly::zero();
    for p in &specialized {
        g = poly_gcd(&g, p);
    }
    if g.is_zero() {
        // all zero: any v works
        return Some((u0.clone(), Rat::zero()));
    }
    if g.is_constant() {
        return None;
    }
    let roots = rational_roots(&g, Var::V);
    roots.roots.first().map(|v0| (u0.clone(), v0.clone()))
}

/// True iff the polynomials have a common zero over the algebraic closure.
///
/// `vars` names the pair of variables the inputs live in; the shear stream
/// is drawn from the given seed so the certificate path is reproducible.
pub fn bivariate_common_zero_exists(
    polys: &[MPoly],
    vars: (Var, Var),
    seed: u64,
) -> Result<ZeroDecision, SmoothError> {
    let mut sys: Vec<MPoly> = Vec::new();
    for p in polys {
        let q = rename_to_uv(p, vars)?;
        if !q.is_zero() {
            sys.push(q.primitive_part());
        }
    }
    if sys.is_empty() {
        return Err(SmoothError::AllInputsZero);
    }
    if sys.iter().any(|p| p.is_constant()) {
        return Ok(ZeroDecision::no());
    }
    common_zero_inner(sys, seed, 0).map(|mut d| {
        if let Some((u0, v0)) = d.witness.take() {
            // translate back to the caller's variable pair (identity rename)
            d.witness = Some((u0, v0));
        }
        d
    })
}

fn common_zero_inner(
    mut sys: Vec<MPoly>,
    seed: u64,
    depth: u32,
) -> Result<ZeroDecision, SmoothError> {
    if depth > SPLIT_DEPTH_CAP {
        return Err(SmoothError::SplitDepthExceeded);
    }
    sys.retain(|p| !p.is_zero());
    if sys.is_empty() {
        // reachable only through recursion after exact divisions
        return Ok(ZeroDecision::yes(Some((Rat::zero(), Rat::zero()))));
    }
    if sys.iter().any(|p| p.is_constant()) {
        return Ok(ZeroDecision::no());
    }
    let mut g = MPoly::zero();
    for p in &sys {
        g = poly_gcd(&g, p);
    }
    if !g.is_constant() {
        // a nonconstant bivariate polynomial has zeros over the closure
        return Ok(ZeroDecision::yes(rational_point_on_curve(&g)));
    }
    // triangular position: shear until every input has constant leading
    // coefficient in v
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut lambda: Option<i64> = None;
    let mut sheared: Vec<MPoly> = Vec::new();
    for attempt in 0..SHEAR_CAP {
        let candidate = if attempt == 0 {
            0
        } else {
            draw_i64(&mut rng, -(2 + attempt as i64), 2 + attempt as i64)
        };
        let shear = MPoly::var(Var::U)
            .add(&MPoly::var(Var::V).scale(&crate::algebra::poly::rat_i(candidate)));
        let mapped: Vec<MPoly> = sys.iter().map(|p| p.substitute(Var::U, &shear)).collect();
        let ok = mapped.iter().all(|p| {
            let d = p.degree_in(Var::V);
            d > 0 && p.coeff_of(Var::V, d).is_constant()
        });
        if ok {
            lambda = Some(candidate);
            sheared = mapped;
            break;
        }
    }
    let Some(lambda) = lambda else {
        return Err(SmoothError::ShearRetryCapExceeded);
    };

    // pivot: smallest v-degree keeps the resultants small
    let pivot_idx = (0..sheared.len())
        .min_by_key(|&i| sheared[i].degree_in(Var::V))
        .unwrap();
    let pivot = sheared[pivot_idx].clone();
    let mut candidate_locus = MPoly::zero();
    for (i, other) in sheared.iter().enumerate() {
        if i == pivot_idx {
            continue;
        }
        let r = resultant(&pivot, other, Var::V).expect("positive v-degree");
        if r.is_zero() {
            // shared factor between the pivot and this input: split the system
            let d = poly_gcd(&pivot, other);
            let a = pivot.div_exact(&d).expect("gcd divides");
            let b = other.div_exact(&d).expect("gcd divides");
            let rest: Vec<MPoly> = sheared
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != pivot_idx && *j != i)
                .map(|(_, p)| p.clone())
                .collect();
            let mut sys1 = vec![d];
            sys1.extend(rest.iter().cloned());
            let mut sys2 = vec![a, b];
            sys2.extend(rest);
            let d1 = common_zero_inner(unshear(sys1, lambda), seed + 1, depth + 1)?;
            if d1.exists {
                return Ok(d1);
            }
            return common_zero_inner(unshear(sys2, lambda), seed + 1, depth + 1);
        }
        candidate_locus = poly_gcd(&candidate_locus, &r);
        if candidate_locus.is_one() {
            break;
        }
    }
    if candidate_locus.is_constant() {
        return Ok(ZeroDecision::no());
    }
    // square-free part
    let m = candidate_locus
        .div_exact(&poly_gcd(
            &candidate_locus,
            &candidate_locus.derivative(Var::U),
        ))
        .expect("gcd divides")
        .primitive_part();
    // fast path: rational candidates give rational witnesses
    let roots = rational_roots(&m, Var::U);
    for u0 in &roots.roots {
        if let Some((u0, v0)) = rational_point_above(u0, &sheared) {
            let orig_u = &u0 + &(&v0 * &crate::algebra::poly::rat_i(lambda));
            return Ok(ZeroDecision::yes(Some((orig_u, v0))));
        }
    }
    if roots.complete && m.degree_in(Var::U) as usize == roots.roots.len() {
        // all candidates were rational and none extended to a common zero
        return Ok(ZeroDecision::no());
    }
    // exact decision above the (possibly irrational) candidates
    if solvable_above(&m, &sheared, depth)? {
        Ok(ZeroDecision::yes(None))
    } else {
        Ok(ZeroDecision::no())
    }
}

fn unshear(sys: Vec<MPoly>, lambda: i64) -> Vec<MPoly> {
    // invert u -> u + λv so recursive calls start from unsheared systems
    let inv =
        MPoly::var(Var::U).sub(&MPoly::var(Var::V).scale(&crate::algebra::poly::rat_i(lambda)));
    sys.into_iter()
        .map(|p| p.substitute(Var::U, &inv))
        .collect()
}

/// Small search for a rational point on a plane curve, used only to decorate
/// a positive certificate with a witness.
fn rational_point_on_curve(g: &MPoly) -> Option<(Rat, Rat)> {
    use crate::algebra::poly::rat;
    let candidates: Vec<Rat> = (-4i64..=4)
        .map(crate::algebra::poly::rat_i)
        .chain([rat(1, 2), rat(-1, 2), rat(3, 2), rat(-3, 2)])
        .collect();
    for u0 in &candidates {
        let s = g.specialize(&[(Var::U, u0.clone())]);
        if s.is_zero() {
            return Some((u0.clone(), Rat::zero()));
        }
        if s.is_constant() {
            continue;
        }
        let roots = rational_roots(&s, Var::V);
        if let Some(v0) = roots.roots.first() {
            return Some((u0.clone(), v0.clone()));
        }
    }
    None
}

// ---------------------------------------------------------------------------
// bidegree-(1,4) hypersurfaces in P^1 x P^2
// ---------------------------------------------------------------------------

/// The form z0*g0(x) + z1*g1(x) with g0, g1 quartic in x1, x2, x3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bidegree14Form {
    g0: MPoly,
    g1: MPoly,
}

fn check_quartic(g: &MPoly) -> Result<(), SmoothError> {
    let allowed = [Var::X1, Var::X2, Var::X3];
    if g.vars_used().iter().any(|v| !allowed.contains(v)) {
        return Err(SmoothError::NotHomogeneousQuartic(g.to_string()));
    }
    if g.terms().iter().any(|(m, _)| m.total_degree() != 4) {
        return Err(SmoothError::NotHomogeneousQuartic(g.to_string()));
    }
    Ok(())
}

impl Bidegree14Form {
    pub fn new(g0: MPoly, g1: MPoly) -> Result<Bidegree14Form, SmoothError> {
        check_quartic(&g0)?;
        check_quartic(&g1)?;
        Ok(Bidegree14Form { g0, g1 })
    }

    pub fn g0(&self) -> &MPoly {
        &self.g0
    }

    pub fn g1(&self) -> &MPoly {
        &self.g1
    }
}

/// A singular point of the (1,4)-divisor, as a projective point of P^2
/// (over a suitable [z0 : z1]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularWitness {
    pub point: [Rat; 3],
}

impl fmt::Display for SingularWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} : {} : {})",
            self.point[0], self.point[1], self.point[2]
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularLocusDecision {
    pub empty: bool,
    pub witness: Option<SingularWitness>,
}

/// True iff z0*g0 + z1*g1 cuts a smooth divisor in P^1 x P^2: no x in P^2
/// over the closure satisfies g0(x) = g1(x) = 0 together with rank <= 1 of
/// the Jacobian [∇g0; ∇g1]. Decided chart by chart.
pub fn singular_locus_empty(form: &Bidegree14Form, seed: u64) -> Result<bool, SmoothError> {
    singular_locus_decision(form, seed).map(|d| d.empty)
}

pub fn singular_locus_decision(
    form: &Bidegree14Form,
    seed: u64,
) -> Result<SingularLocusDecision, SmoothError> {
    if form.g0.is_zero() && form.g1.is_zero() {
        return Err(SmoothError::ZeroForm);
    }
    let xs = [Var::X1, Var::X2, Var::X3];
    let grad0: Vec<MPoly> = xs.iter().map(|&v| form.g0.derivative(v)).collect();
    let grad1: Vec<MPoly> = xs.iter().map(|&v| form.g1.derivative(v)).collect();
    let mut system = vec![form.g0.clone(), form.g1.clone()];
    for i in 0..3 {
        for j in i + 1..3 {
            let minor = grad0[i].mul(&grad1[j]).sub(&grad0[j].mul(&grad1[i]));
            if !minor.is_zero() {
                system.push(minor);
            }
        }
    }
    // charts x_j = 1, remaining coordinates in order
    for (chart, &xj) in xs.iter().enumerate() {
        let others: Vec<Var> = xs.iter().copied().filter(|&v| v != xj).collect();
        let chart_system: Vec<MPoly> = system
            .iter()
            .map(|p| p.specialize(&[(xj, Rat::one())]))
            .collect();
        if chart_system.iter().all(|p| p.is_zero()) {
            // every defining equation vanishes on the whole chart
            return Ok(SingularLocusDecision {
                empty: false,
                witness: Some(witness_from_chart(chart, (Rat::zero(), Rat::zero()))),
            });
        }
        let decision = bivariate_common_zero_exists(
            &chart_system,
            (others[0], others[1]),
            seed + chart as u64,
        )?;
        if decision.exists {
            let witness = decision.witness.map(|uv| witness_from_chart(chart, uv));
            return Ok(SingularLocusDecision {
                empty: false,
                witness,
            });
        }
    }
    Ok(SingularLocusDecision {
        empty: true,
        witness: None,
    })
}

fn witness_from_chart(chart: usize, (u, v): (Rat, Rat)) -> SingularWitness {
    let point = match chart {
        0 => [Rat::one(), u, v],
        1 => [u, Rat::one(), v],
        _ => [u, v, Rat::one()],
    };
    SingularWitness { point }
}

// ---------------------------------------------------------------------------
// linear forms on P^1 and the reducedness witnesses
// ---------------------------------------------------------------------------

/// α*z0 + β*z1 with (α, β) != (0, 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFormPair {
    pub alpha: Rat,
    pub beta: Rat,
}

impl LinearFormPair {
    pub fn new(alpha: Rat, beta: Rat) -> Option<LinearFormPair> {
        if alpha.is_zero() && beta.is_zero() {
            return None;
        }
        Some(LinearFormPair { alpha, beta })
    }

    pub fn from_form(form: &MPoly) -> Option<LinearFormPair> {
        let allowed = [Var::Z0, Var::Z1];
        if form.vars_used().iter().any(|v| !allowed.contains(v)) {
            return None;
        }
        if form.terms().iter().any(|(m, _)| m.total_degree() != 1) {
            return None;
        }
        LinearFormPair::new(
            form.coefficient(&Mono::of_var(Var::Z0, 1)),
            form.coefficient(&Mono::of_var(Var::Z1, 1)),
        )
    }

    pub fn to_form(&self) -> MPoly {
        MPoly::var(Var::Z0)
            .scale(&self.alpha)
            .add(&MPoly::var(Var::Z1).scale(&self.beta))
    }

    /// Resultant of the two linear forms: α*β' - β*α'.
    pub fn resultant(&self, other: &LinearFormPair) -> Rat {
        &self.alpha * &other.beta - &self.beta * &other.alpha
    }

    pub fn proportional(&self, other: &LinearFormPair) -> bool {
        self.resultant(other).is_zero()
    }

    /// Value on the chart z0 = 1, as a polynomial in beta (the base
    /// coordinate): α + β * beta.
    fn chart0(&self) -> MPoly {
        MPoly::constant(self.alpha.clone()).add(&MPoly::var(Var::Beta).scale(&self.beta))
    }

    /// Value on the chart z1 = 1: α * beta + β.
    fn chart1(&self) -> MPoly {
        MPoly::var(Var::Beta)
            .scale(&self.alpha)
            .add(&MPoly::constant(self.beta.clone()))
    }
}

impl fmt::Display for LinearFormPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_form())
    }
}

fn check_distinct(
    a: &LinearFormPair,
    b: &LinearFormPair,
    s: &LinearFormPair,
) -> Result<(), SmoothError> {
    if a.proportional(b) || a.proportional(s) || b.proportional(s) {
        return Err(SmoothError::SectionsNotDistinct);
    }
    Ok(())
}

/// The special-fiber section a*y^4 + b*q^4 is nonzero along every geometric
/// fiber iff a and b*s^4 have no common zero on P^1; with pairwise
/// non-proportional sections this is automatic, verified exactly through
/// the pairwise resultants.
pub fn fiberwise_nonvanishing(
    a: &LinearFormPair,
    b: &LinearFormPair,
    s: &LinearFormPair,
) -> Result<bool, SmoothError> {
    check_distinct(a, b, s)?;
    Ok(!a.resultant(b).is_zero() && !a.resultant(s).is_zero())
}

/// Content of f with respect to the variables outside `vars`, then the
/// square-freeness test in `vars` over the rational-function coefficients.
fn squarefree_over_function_field(f: &MPoly, vars: &[Var]) -> bool {
    // primitive part: divide out the gcd of the coefficients indexed by the
    // `vars`-monomials
    let mut groups: std::collections::BTreeMap<Vec<u32>, MPoly> = std::collections::BTreeMap::new();
    for (m, c) in f.terms() {
        let key: Vec<u32> = vars.iter().map(|&v| m.exp(v)).collect();
        let mut rest = m.0;
        for &v in vars {
            rest[v.index()] = 0;
        }
        let entry = groups.entry(key).or_insert_with(MPoly::zero);
        *entry = entry.add(&MPoly::monomial(c.clone(), Mono(rest)));
    }
    let mut content = MPoly::zero();
    for c in groups.values() {
        content = poly_gcd(&content, c);
    }
    let pp = f.div_exact(&content).expect("content divides");
    squarefree_test(&pp, vars).expect("nonzero polynomial")
}

/// Square-freeness of the generic fiber polynomial
/// a*v^4 + b*s^4*w^4 in both base charts.
pub fn generic_fiber_squarefree(
    a: &LinearFormPair,
    b: &LinearFormPair,
    s: &LinearFormPair,
) -> Result<bool, SmoothError> {
    check_distinct(a, b, s)?;
    let v4 = MPoly::var_pow(Var::V, 4);
    let w4 = MPoly::var_pow(Var::W, 4);
    for charts in [
        (a.chart0(), b.chart0(), s.chart0()),
        (a.chart1(), b.chart1(), s.chart1()),
    ] {
        let f = charts
            .0
            .mul(&v4)
            .add(&charts.1.mul(&charts.2.pow(4)).mul(&w4));
        if !squarefree_over_function_field(&f, &[Var::V, Var::W]) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_mpoly;
    use crate::algebra::poly::rat_i;

    fn p(s: &str) -> MPoly {
        parse_mpoly(s).unwrap()
    }

    fn decide(polys: &[&str]) -> ZeroDecision {
        let sys: Vec<MPoly> = polys.iter().map(|s| p(s)).collect();
        bivariate_common_zero_exists(&sys, (Var::U, Var::V), 0).unwrap()
    }

    #[test]
    fn origin_is_a_common_zero() {
        let d = decide(&["u", "v"]);
        assert!(d.exists);
        assert_eq!(d.witness, Some((rat_i(0), rat_i(0))));
    }

    #[test]
    fn contradictory_system_is_empty() {
        assert!(!decide(&["u", "u - 1"]).exists);
    }

    /// Candidates at u^2 = 2 pair the pivot with each input through
    /// different v-roots, so the candidate locus is nonempty while the full
    /// system is: the quotient-ring gcd chain must end in a unit.
    #[test]
    fn nonextending_candidates_are_rejected() {
        let d = decide(&[
            "v^2 - 3*v + 2",
            "(v - 1)^2 + u^2 - 2",
            "(v - 2)^2 + u^2 - 2",
        ]);
        assert!(!d.exists);
    }

    #[test]
    fn modulus_splitting_decides_mixed_components() {
        // above u = 1 the first polynomial is the unit -1; above u = 2 the
        // system needs v = 1 and v = 0 at once: empty on both components
        let m = p("(u - 1)*(u - 2)");
        let empty = [p("(u - 1)*v - 1"), p("(u - 2)*v - (u - 2)"), p("v")];
        assert_eq!(solvable_above(&m, &empty, 0), Ok(false));
        // the remainder chain hits the zero divisor u - 2 and must split;
        // the component u = 2 carries the common root v = 1
        let solvable = [p("(u - 1)*v - 1"), p("v - 1")];
        assert_eq!(solvable_above(&m, &solvable, 0), Ok(true));
    }

    #[test]
    fn irrational_intersection_found() {
        // 2u^2 = 1 has algebraic solutions on the line u = v
        let d = decide(&["u^2 + v^2 - 1", "u - v"]);
        assert!(d.exists);
        assert!(d.witness.is_none());
    }

    #[test]
    fn shared_factor_systems() {
        // {fg, f, g} with coprime f, g: common zeros are V(f) ∩ V(g)
        let d = decide(&["(u - v)*(u + v)", "u - v", "u + v"]);
        assert!(d.exists);
        // {fg, fh}: the common component f has zeros
        let d = decide(&["(u - v)*(u + 1)", "(u - v)*(v + 2)"]);
        assert!(d.exists);
    }

    #[test]
    fn answer_is_shear_invariant() {
        for polys in [
            vec!["u^2 + v^2 - 1", "u - v"],
            vec!["u", "u - 1"],
            vec!["u^2 - v^3", "u - v"],
        ] {
            let sys: Vec<MPoly> = polys.iter().map(|s| p(s)).collect();
            let answers: Vec<bool> = [1u64, 77, 123456]
                .iter()
                .map(|&s| {
                    bivariate_common_zero_exists(&sys, (Var::U, Var::V), s)
                        .unwrap()
                        .exists
                })
                .collect();
            assert!(answers.windows(2).all(|w| w[0] == w[1]));
        }
    }

    fn quartic_pair(g0: &str, g1: &str) -> Bidegree14Form {
        Bidegree14Form::new(p(g0), p(g1)).unwrap()
    }

    #[test]
    fn model_form_is_smooth() {
        let f = quartic_pair("x1^4 + x2^4", "x2^4 + x3^4");
        assert!(singular_locus_empty(&f, 0).unwrap());
    }

    #[test]
    fn coordinate_quartics_are_singular() {
        let f = quartic_pair("x1^4", "x2^4");
        let d = singular_locus_decision(&f, 0).unwrap();
        assert!(!d.empty);
        // (0:0:1) is the singular point
        assert_eq!(d.witness.unwrap().point, [rat_i(0), rat_i(0), rat_i(1)]);
    }

    #[test]
    fn untweaked_special_form_is_singular() {
        let f = quartic_pair("x3^4", "(x1 + x2)^4");
        let d = singular_locus_decision(&f, 0).unwrap();
        assert!(!d.empty);
        if let Some(w) = d.witness {
            // any witness lies on x3 = 0, x1 + x2 = 0
            assert!(w.point[2].is_zero());
            assert!((&w.point[0] + &w.point[1]).is_zero());
        }
    }

    #[test]
    fn repeated_quartic_is_singular() {
        let f = quartic_pair("x1^4 + x2^4", "x1^4 + x2^4");
        assert!(!singular_locus_empty(&f, 0).unwrap());
    }

    #[test]
    fn common_linear_factor_is_singular() {
        let f = quartic_pair("x1*x2^3", "x1*x3^3");
        assert!(!singular_locus_empty(&f, 0).unwrap());
    }

    fn lf(a: i64, b: i64) -> LinearFormPair {
        LinearFormPair::new(rat_i(a), rat_i(b)).unwrap()
    }

    #[test]
    fn nonvanishing_of_default_sections() {
        assert!(fiberwise_nonvanishing(&lf(1, 0), &lf(0, 1), &lf(1, 1)).unwrap());
        assert!(fiberwise_nonvanishing(&lf(1, 1), &lf(1, -1), &lf(0, 1)).unwrap());
        assert_eq!(
            fiberwise_nonvanishing(&lf(1, 0), &lf(2, 0), &lf(1, 1)).unwrap_err(),
            SmoothError::SectionsNotDistinct
        );
    }

    #[test]
    fn generic_fiber_squarefreeness() {
        assert!(generic_fiber_squarefree(&lf(1, 0), &lf(0, 1), &lf(1, 1)).unwrap());
        assert!(generic_fiber_squarefree(&lf(1, 1), &lf(1, -1), &lf(0, 1)).unwrap());
        assert!(LinearFormPair::new(rat_i(0), rat_i(0)).is_none());
    }
}
