//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms are stored sorted in descending graded-lexicographic order over the
//! fixed variable alphabet (see [`Var`]), with no zero coefficients, so equal
//! polynomials have identical representations and the printer is canonical.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::var::{Var, ALL_VARS, NVARS};

/// Exact rational scalar. Always reduced, denominator positive.
pub type Rat = num_rational::BigRational;

/// Rational from an integer.
pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational n/d.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyError {
    UnknownVariable(String),
    NegativeExponent,
    ZeroToNegativePower,
    ZeroPolynomial,
    BothConstantIn(Var),
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::UnknownVariable(s) => write!(f, "unknown variable `{s}`"),
            PolyError::NegativeExponent => write!(f, "negative exponent"),
            PolyError::ZeroToNegativePower => write!(f, "zero substituted into a negative power"),
            PolyError::ZeroPolynomial => write!(f, "operation undefined for the zero polynomial"),
            PolyError::BothConstantIn(v) => {
                write!(f, "both polynomials are constant in `{v}`")
            }
        }
    }
}

impl std::error::Error for PolyError {}

/// Exponent vector over the full alphabet, ordered graded-lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Mono(pub [u32; NVARS]);

impl Mono {
    pub fn unit() -> Mono {
        Mono([0; NVARS])
    }

    pub fn of_var(v: Var, e: u32) -> Mono {
        let mut m = [0; NVARS];
        m[v.index()] = e;
        Mono(m)
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut m = self.0;
        for i in 0..NVARS {
            m[i] += other.0[i];
        }
        Mono(m)
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// other / self, assuming divisibility.
    pub fn quotient_into(&self, other: &Mono) -> Mono {
        let mut m = other.0;
        for i in 0..NVARS {
            m[i] -= self.0[i];
        }
        Mono(m)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => self.0.cmp(&other.0),
            ord => ord,
        }
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over Q.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct MPoly {
    /// Terms in descending graded-lex order, no zero coefficients.
    terms: Vec<(Mono, Rat)>,
}

impl MPoly {
    pub fn zero() -> MPoly {
        MPoly { terms: Vec::new() }
    }

    pub fn one() -> MPoly {
        MPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> MPoly {
        if c.is_zero() {
            MPoly::zero()
        } else {
            MPoly {
                terms: vec![(Mono::unit(), c)],
            }
        }
    }

    pub fn var(v: Var) -> MPoly {
        MPoly::monomial(Rat::one(), Mono::of_var(v, 1))
    }

    pub fn var_pow(v: Var, e: u32) -> MPoly {
        MPoly::monomial(Rat::one(), Mono::of_var(v, e))
    }

    pub fn monomial(c: Rat, m: Mono) -> MPoly {
        if c.is_zero() {
            MPoly::zero()
        } else {
            MPoly {
                terms: vec![(m, c)],
            }
        }
    }

    /// Build from arbitrary (monomial, coefficient) pairs; merges and sorts.
    pub fn from_terms(terms: impl IntoIterator<Item = (Mono, Rat)>) -> MPoly {
        let mut map: BTreeMap<Mono, Rat> = BTreeMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            let entry = map.entry(m).or_insert_with(Rat::zero);
            *entry += c;
            if entry.is_zero() {
                map.remove(&m);
            }
        }
        MPoly {
            terms: map.into_iter().rev().collect(),
        }
    }

    pub fn terms(&self) -> &[(Mono, Rat)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_unit())
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.is_zero() {
            Some(Rat::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().map(|c| c.is_one()).unwrap_or(false)
    }

    /// Leading (graded-lex largest) term.
    pub fn leading_term(&self) -> Option<&(Mono, Rat)> {
        self.terms.first()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(v) > 0)
    }

    /// Variables with positive exponent somewhere, in alphabet order.
    pub fn vars_used(&self) -> Vec<Var> {
        ALL_VARS
            .iter()
            .copied()
            .filter(|&v| self.contains_var(v))
            .collect()
    }

    pub fn coefficient(&self, m: &Mono) -> Rat {
        self.terms
            .iter()
            .find(|(mm, _)| mm == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }

    pub fn map_coeffs(&self, f: impl Fn(&Rat) -> Rat) -> MPoly {
        MPoly::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, k)| (*m, k * c)).collect(),
        }
    }

    pub fn mul_mono(&self, m: &Mono) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(mm, c)| (mm.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        // merge of two descending-sorted term lists
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].0.cmp(&other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + &other.terms[j].1;
                    if !c.is_zero() {
                        out.push((self.terms[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        MPoly { terms: out }
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        if self.is_zero() || other.is_zero() {
            return MPoly::zero();
        }
        let mut map: BTreeMap<Mono, Rat> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let entry = map.entry(m).or_insert_with(Rat::zero);
                *entry += ca * cb;
                if entry.is_zero() {
                    map.remove(&m);
                }
            }
        }
        MPoly {
            terms: map.into_iter().rev().collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut result = MPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Formal partial derivative.
    pub fn derivative(&self, v: Var) -> MPoly {
        MPoly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(v);
            if e == 0 {
                return None;
            }
            let mut mm = m.0;
            mm[v.index()] = e - 1;
            Some((Mono(mm), c * rat_i(e as i64)))
        }))
    }

    /// Exact substitution of rational values for some variables.
    pub fn specialize(&self, bindings: &[(Var, Rat)]) -> MPoly {
        MPoly::from_terms(self.terms.iter().map(|(m, c)| {
            let mut mm = m.0;
            let mut coeff = c.clone();
            for (v, val) in bindings {
                let e = mm[v.index()];
                if e > 0 {
                    coeff *= rat_pow(val, e);
                    mm[v.index()] = 0;
                }
            }
            (Mono(mm), coeff)
        }))
    }

    /// Substitute a polynomial for a variable (composition).
    pub fn substitute(&self, v: Var, value: &MPoly) -> MPoly {
        let max_e = self.degree_in(v);
        if max_e == 0 {
            return self.clone();
        }
        // cache value^e
        let mut powers = Vec::with_capacity(max_e as usize + 1);
        powers.push(MPoly::one());
        for e in 1..=max_e {
            powers.push(powers[(e - 1) as usize].mul(value));
        }
        let mut acc = MPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            let mut mm = m.0;
            mm[v.index()] = 0;
            let stub = MPoly::monomial(c.clone(), Mono(mm));
            acc = acc.add(&stub.mul(&powers[e as usize]));
        }
        acc
    }

    /// Coefficient list with respect to one variable: index = exponent of `v`,
    /// entries are polynomials in the remaining variables.
    pub fn coeffs_in(&self, v: Var) -> Vec<MPoly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![MPoly::zero(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            let mut mm = m.0;
            mm[v.index()] = 0;
            out[e] = out[e].add(&MPoly::monomial(c.clone(), Mono(mm)));
        }
        out
    }

    /// Inverse of [`MPoly::coeffs_in`].
    pub fn from_coeffs_in(v: Var, coeffs: &[MPoly]) -> MPoly {
        let mut acc = MPoly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            acc = acc.add(&c.mul_mono(&Mono::of_var(v, e as u32)));
        }
        acc
    }

    /// Coefficient of `v^e` as a polynomial in the remaining variables.
    pub fn coeff_of(&self, v: Var, e: u32) -> MPoly {
        MPoly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            if m.exp(v) != e {
                return None;
            }
            let mut mm = m.0;
            mm[v.index()] = 0;
            Some((Mono(mm), c.clone()))
        }))
    }

    /// Exact division: Some(q) with self = q * d, or None when not divisible.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MPoly::zero());
        }
        let (dm, dc) = d.leading_term().unwrap().clone();
        let mut rem = self.clone();
        let mut q_terms: Vec<(Mono, Rat)> = Vec::new();
        while !rem.is_zero() {
            let (rm, rc) = rem.leading_term().unwrap().clone();
            if !dm.divides(&rm) {
                return None;
            }
            let qm = dm.quotient_into(&rm);
            let qc = &rc / &dc;
            q_terms.push((qm, qc.clone()));
            rem = rem.sub(&d.mul(&MPoly::monomial(qc, qm)));
        }
        Some(MPoly { terms: q_terms })
    }

    /// Writes self = c * p with p integer-primitive (coprime integer
    /// coefficients) and positive leading coefficient. Zero maps to (0, 0).
    pub fn primitive_normalize(&self) -> (Rat, MPoly) {
        if self.is_zero() {
            return (Rat::zero(), MPoly::zero());
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for (_, c) in &self.terms {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut scale = Rat::new(num_gcd, den_lcm);
        if self.terms[0].1.is_negative() {
            scale = -scale;
        }
        let inv = scale.recip();
        (scale, self.scale(&inv))
    }

    /// Integer-primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> MPoly {
        self.primitive_normalize().1
    }
}

/// val^e for a rational base.
pub fn rat_pow(val: &Rat, e: u32) -> Rat {
    let mut result = Rat::one();
    let mut base = val.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result *= &base;
        }
        e >>= 1;
        if e > 0 {
            let b = base.clone();
            base *= b;
        }
    }
    result
}

impl std::ops::Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        MPoly::add(self, rhs)
    }
}

impl std::ops::Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        MPoly::sub(self, rhs)
    }
}

impl std::ops::Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        MPoly::mul(self, rhs)
    }
}

impl std::ops::Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly::neg(self)
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, m: &Mono, c: &Rat) -> fmt::Result {
    let mut wrote_coeff = false;
    if m.is_unit() || !c.is_one() {
        write!(f, "{c}")?;
        wrote_coeff = true;
    }
    for v in ALL_VARS {
        let e = m.exp(v);
        if e == 0 {
            continue;
        }
        if wrote_coeff {
            write!(f, "*")?;
        }
        wrote_coeff = true;
        if e == 1 {
            write!(f, "{}", v.name())?;
        } else {
            write!(f, "{}^{}", v.name(), e)?;
        }
    }
    Ok(())
}

impl fmt::Display for MPoly {
    /// Canonical printer: terms in descending graded-lex order,
    /// e.g. `z0*x2^4 + z1*x3^4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write_term(f, m, &c.abs())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: Var) -> MPoly {
        MPoly::var(x)
    }

    #[test]
    fn binomial_square() {
        // (v+w)^2 = v^2 + 2vw + w^2
        let f = v(Var::V).add(&v(Var::W));
        let sq = f.pow(2);
        let expect = MPoly::from_terms([
            (Mono::of_var(Var::V, 2), rat_i(1)),
            (
                Mono::of_var(Var::V, 1).mul(&Mono::of_var(Var::W, 1)),
                rat_i(2),
            ),
            (Mono::of_var(Var::W, 2), rat_i(1)),
        ]);
        assert_eq!(sq, expect);
    }

    #[test]
    fn binomial_quartic_coefficients() {
        let f = v(Var::Z0).add(&v(Var::Z1)).pow(4);
        let coeffs: Vec<Rat> = f.terms().iter().map(|(_, c)| c.clone()).collect();
        assert_eq!(
            coeffs,
            vec![rat_i(1), rat_i(4), rat_i(6), rat_i(4), rat_i(1)]
        );
    }

    #[test]
    fn sigma0_fiber_form_expansion() {
        // a*v^4 + b*s^4*w^4 with a=z0, b=z1, s=z0+z1: direct expansion has
        // one v^4 term plus the five terms of z1*(z0+z1)^4*w^4.
        let a = v(Var::Z0);
        let b = v(Var::Z1);
        let s = v(Var::Z0).add(&v(Var::Z1));
        let form = a
            .mul(&v(Var::V).pow(4))
            .add(&b.mul(&s.pow(4)).mul(&v(Var::W).pow(4)));
        assert_eq!(form.num_terms(), 6);
        let mut m = Mono::of_var(Var::Z0, 2).mul(&Mono::of_var(Var::Z1, 3));
        m = m.mul(&Mono::of_var(Var::W, 4));
        assert_eq!(form.coefficient(&m), rat_i(6));
        assert_eq!(
            form.coefficient(&Mono::of_var(Var::Z0, 1).mul(&Mono::of_var(Var::V, 4))),
            rat_i(1)
        );
    }

    #[test]
    fn derivative_examples() {
        // d(u*v^4)/dv = 4*u*v^3 (u standing in for a coefficient section)
        let f = v(Var::U).mul(&v(Var::V).pow(4));
        let d = f.derivative(Var::V);
        assert_eq!(
            d,
            MPoly::monomial(
                rat_i(4),
                Mono::of_var(Var::U, 1).mul(&Mono::of_var(Var::V, 3))
            )
        );
        assert_eq!(MPoly::constant(rat_i(7)).derivative(Var::V), MPoly::zero());
        // d(v^2 w)/dw = v^2
        let g = v(Var::V).pow(2).mul(&v(Var::W));
        assert_eq!(g.derivative(Var::W), v(Var::V).pow(2));
    }

    #[test]
    fn specialize_evaluates_exactly() {
        // p(t) = 3t^2 - 1/2 at t=2 -> 23/2
        let p = MPoly::from_terms([
            (Mono::of_var(Var::T, 2), rat_i(3)),
            (Mono::unit(), rat(-1, 2)),
        ]);
        let val = p.specialize(&[(Var::T, rat_i(2))]);
        assert_eq!(val, MPoly::constant(rat(23, 2)));
    }

    #[test]
    fn div_exact_round_trip() {
        let f = v(Var::U).add(&v(Var::V)).pow(3);
        let d = v(Var::U).add(&v(Var::V));
        let q = f.div_exact(&d).unwrap();
        assert_eq!(q, v(Var::U).add(&v(Var::V)).pow(2));
        assert!(f.add(&MPoly::one()).div_exact(&d).is_none());
    }

    #[test]
    fn primitive_normalization() {
        // -4/6 u^2 - 2/6 -> scale * (2u^2 + 1), scale = -1/3
        let f = MPoly::from_terms([
            (Mono::of_var(Var::U, 2), rat(-4, 6)),
            (Mono::unit(), rat(-2, 6)),
        ]);
        let (c, p) = f.primitive_normalize();
        assert_eq!(c, rat(-1, 3));
        assert_eq!(
            p,
            MPoly::from_terms([
                (Mono::of_var(Var::U, 2), rat_i(2)),
                (Mono::unit(), rat_i(1))
            ])
        );
        assert_eq!(p.scale(&c), f);
    }

    #[test]
    fn substitute_shear() {
        // u -> u + 3v in u^2: (u+3v)^2
        let f = v(Var::U).pow(2);
        let sheared = f.substitute(Var::U, &v(Var::U).add(&v(Var::V).scale(&rat_i(3))));
        assert_eq!(sheared, v(Var::U).add(&v(Var::V).scale(&rat_i(3))).pow(2));
    }

    #[test]
    fn display_canonical_order() {
        let f = v(Var::Z0)
            .mul(&v(Var::X2).pow(4))
            .add(&v(Var::Z1).mul(&v(Var::X3).pow(4)));
        assert_eq!(f.to_string(), "z0*x2^4 + z1*x3^4");
        assert_eq!(MPoly::zero().to_string(), "0");
        let g = MPoly::constant(rat(-5, 2))
            .mul(&v(Var::V))
            .sub(&MPoly::one());
        assert_eq!(g.to_string(), "-5/2*v - 1");
    }
}
