//! Rational root extraction for univariate polynomials over Q.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::{MPoly, Rat};
use super::var::Var;

/// Roots found by candidate enumeration. `complete` is false when a
/// coefficient was too large to factor within the trial-division budget,
/// in which case some rational roots may be missing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalRoots {
    pub roots: Vec<Rat>,
    pub complete: bool,
}

const TRIAL_DIVISION_CAP: u64 = 1_000_000;

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let mut n = n.abs();
    if n.is_zero() {
        return None;
    }
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2u32);
    while &d * &d <= n {
        if u64::try_from(&d)
            .map(|v| v > TRIAL_DIVISION_CAP)
            .unwrap_or(true)
        {
            return None;
        }
        let mut e = 0u32;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            primes.push((d.clone(), e));
        }
        d += 1;
    }
    if n > BigInt::one() {
        primes.push((n, 1));
    }
    let mut out = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for base in &out {
            let mut q = base.clone();
            next.push(q.clone());
            for _ in 0..e {
                q = &q * &p;
                next.push(q.clone());
            }
        }
        out = next;
    }
    out.sort();
    out.dedup();
    Some(out)
}

/// All rational roots of a univariate polynomial in `v`. The polynomial
/// must involve no other variable.
pub fn rational_roots(p: &MPoly, v: Var) -> RationalRoots {
    assert!(
        p.vars_used().iter().all(|&u| u == v),
        "rational_roots requires a univariate polynomial"
    );
    if p.is_zero() || p.is_constant() {
        return RationalRoots {
            roots: Vec::new(),
            complete: true,
        };
    }
    let prim = p.primitive_part();
    let coeffs: Vec<MPoly> = prim.coeffs_in(v);
    let mut roots = Vec::new();
    // factor out v^k
    let low = coeffs.iter().position(|c| !c.is_zero()).unwrap();
    if low > 0 {
        roots.push(Rat::zero());
    }
    let reduced: Vec<BigInt> = coeffs[low..]
        .iter()
        .map(|c| c.constant_value().expect("univariate").to_integer())
        .collect();
    if reduced.len() == 1 {
        return RationalRoots {
            roots,
            complete: true,
        };
    }
    let trailing = &reduced[0];
    let leading = reduced.last().unwrap();
    let (Some(ps), Some(qs)) = (divisors(trailing), divisors(leading)) else {
        return RationalRoots {
            roots,
            complete: false,
        };
    };
    for num in &ps {
        for den in &qs {
            for sign in [1i64, -1] {
                let cand = Rat::new(num * BigInt::from(sign), den.clone());
                let val: Rat = reduced.iter().rev().fold(Rat::zero(), |acc, c| {
                    acc * &cand + Rat::from_integer(c.clone())
                });
                if val.is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    RationalRoots {
        roots,
        complete: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_mpoly;
    use crate::algebra::poly::{rat, rat_i};

    #[test]
    fn roots_of_small_polynomials() {
        let p = parse_mpoly("2*t^3 - 3*t^2 - 3*t + 2").unwrap();
        // roots: -1, 1/2, 2
        let r = rational_roots(&p, Var::T);
        assert!(r.complete);
        assert_eq!(r.roots, vec![rat_i(-1), rat(1, 2), rat_i(2)]);
    }

    #[test]
    fn zero_root_from_monomial_factor() {
        let p = parse_mpoly("t^2 - t").unwrap();
        let r = rational_roots(&p, Var::T);
        assert_eq!(r.roots, vec![rat_i(0), rat_i(1)]);
        let c = parse_mpoly("5").unwrap();
        assert!(rational_roots(&c, Var::T).roots.is_empty());
    }

    #[test]
    fn irrational_only() {
        let p = parse_mpoly("t^2 - 2").unwrap();
        let r = rational_roots(&p, Var::T);
        assert!(r.complete);
        assert!(r.roots.is_empty());
    }
}
