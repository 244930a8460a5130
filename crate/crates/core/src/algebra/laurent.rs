//! Laurent polynomials: one distinguished variable may carry negative powers,
//! represented as a single global shift times an ordinary polynomial.

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::poly::{rat_pow, MPoly, PolyError, Rat};
use super::var::{Var, ALL_VARS};

/// value = var^shift * body, with body containing a term of exponent 0 in
/// `var` (the shift is maximal). Zero is (shift 0, body 0).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentPoly {
    var: Var,
    shift: i64,
    body: MPoly,
}

impl LaurentPoly {
    pub fn new(var: Var, shift: i64, body: MPoly) -> LaurentPoly {
        LaurentPoly { var, shift, body }.normalized()
    }

    pub fn zero(var: Var) -> LaurentPoly {
        LaurentPoly {
            var,
            shift: 0,
            body: MPoly::zero(),
        }
    }

    pub fn one(var: Var) -> LaurentPoly {
        LaurentPoly {
            var,
            shift: 0,
            body: MPoly::one(),
        }
    }

    /// Embed an ordinary polynomial.
    pub fn from_poly(var: Var, p: MPoly) -> LaurentPoly {
        LaurentPoly {
            var,
            shift: 0,
            body: p,
        }
        .normalized()
    }

    /// var^e for any integer e.
    pub fn var_power(var: Var, e: i64) -> LaurentPoly {
        LaurentPoly {
            var,
            shift: e,
            body: MPoly::one(),
        }
    }

    /// Reinterpret a polynomial in `from` as a Laurent polynomial in `var`
    /// under from = 1/var (chart inversion). `p` must not contain `var`.
    pub fn from_inverted_poly(var: Var, from: Var, p: &MPoly) -> LaurentPoly {
        assert!(
            !p.contains_var(var),
            "chart inversion: target variable present"
        );
        let coeffs = p.coeffs_in(from);
        let mut acc = LaurentPoly::zero(var);
        for (e, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&LaurentPoly {
                var,
                shift: -(e as i64),
                body: c.clone(),
            });
        }
        acc.normalized()
    }

    fn normalized(mut self) -> LaurentPoly {
        if self.body.is_zero() {
            self.shift = 0;
            return self;
        }
        let min_e = self
            .body
            .terms()
            .iter()
            .map(|(m, _)| m.exp(self.var))
            .min()
            .unwrap();
        if min_e > 0 {
            let div = MPoly::var_pow(self.var, min_e);
            self.body = self.body.div_exact(&div).expect("monomial factor");
            self.shift += min_e as i64;
        }
        self
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn body(&self) -> &MPoly {
        &self.body
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    /// Lowest and highest exponent of the distinguished variable, if nonzero.
    pub fn exponent_range(&self) -> Option<(i64, i64)> {
        if self.is_zero() {
            return None;
        }
        let max_e = self.body.degree_in(self.var) as i64;
        Some((self.shift, self.shift + max_e))
    }

    /// Coefficient of var^e: a polynomial in the remaining variables.
    pub fn coeff_at(&self, e: i64) -> MPoly {
        if e < self.shift {
            return MPoly::zero();
        }
        self.body.coeff_of(self.var, (e - self.shift) as u32)
    }

    /// True when no negative powers of the distinguished variable occur.
    pub fn is_polynomial(&self) -> bool {
        self.is_zero() || self.shift >= 0
    }

    /// Convert to an ordinary polynomial; None when negative powers remain.
    pub fn to_poly(&self) -> Option<MPoly> {
        if self.is_zero() {
            return Some(MPoly::zero());
        }
        if self.shift < 0 {
            return None;
        }
        Some(
            self.body
                .mul_mono(&super::poly::Mono::of_var(self.var, self.shift as u32)),
        )
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.var, other.var, "mixed distinguished variables");
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let shift = self.shift.min(other.shift);
        let a = self.body.mul_mono(&super::poly::Mono::of_var(
            self.var,
            (self.shift - shift) as u32,
        ));
        let b = other.body.mul_mono(&super::poly::Mono::of_var(
            self.var,
            (other.shift - shift) as u32,
        ));
        LaurentPoly {
            var: self.var,
            shift,
            body: a.add(&b),
        }
        .normalized()
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            var: self.var,
            shift: self.shift,
            body: self.body.neg(),
        }
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.var, other.var, "mixed distinguished variables");
        LaurentPoly {
            var: self.var,
            shift: self.shift + other.shift,
            body: self.body.mul(&other.body),
        }
        .normalized()
    }

    pub fn mul_poly(&self, p: &MPoly) -> LaurentPoly {
        LaurentPoly {
            var: self.var,
            shift: self.shift,
            body: self.body.mul(p),
        }
        .normalized()
    }

    pub fn shifted(&self, d: i64) -> LaurentPoly {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly {
            var: self.var,
            shift: self.shift + d,
            body: self.body.clone(),
        }
    }

    /// Exact substitution of rational values. Binding the distinguished
    /// variable to zero is an error when negative powers are present.
    pub fn specialize(&self, bindings: &[(Var, Rat)]) -> Result<LaurentPoly, PolyError> {
        let mut rest: Vec<(Var, Rat)> = Vec::new();
        let mut dist: Option<Rat> = None;
        for (v, val) in bindings {
            if *v == self.var {
                dist = Some(val.clone());
            } else {
                rest.push((*v, val.clone()));
            }
        }
        let body = self.body.specialize(&rest);
        let out = LaurentPoly {
            var: self.var,
            shift: self.shift,
            body,
        }
        .normalized();
        match dist {
            None => Ok(out),
            Some(val) => {
                if out.is_zero() {
                    return Ok(LaurentPoly::zero(self.var));
                }
                if val.is_zero() && out.shift < 0 {
                    return Err(PolyError::ZeroToNegativePower);
                }
                let evaluated = out.body.specialize(&[(self.var, val.clone())]);
                let scaled = if out.shift >= 0 {
                    evaluated.scale(&rat_pow(&val, out.shift as u32))
                } else {
                    // val != 0 here
                    evaluated.scale(&rat_pow(&val.recip(), (-out.shift) as u32))
                };
                Ok(LaurentPoly::from_poly(self.var, scaled))
            }
        }
    }
}

impl fmt::Display for LaurentPoly {
    /// Canonical printer; negative powers written like `z^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.body.terms().iter().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let c = c.abs();
            let e = m.exp(self.var) as i64 + self.shift;
            let mut wrote = false;
            let unit_apart_from_var = m.total_degree() == m.exp(self.var);
            if (unit_apart_from_var && e == 0) || !c.is_one() {
                write!(f, "{c}")?;
                wrote = true;
            }
            for v in ALL_VARS {
                let ve = if v == self.var { e } else { m.exp(v) as i64 };
                if ve == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                wrote = true;
                if ve == 1 {
                    write!(f, "{}", v.name())?;
                } else {
                    write!(f, "{}^{}", v.name(), ve)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::rat_i;

    #[test]
    fn normalization_extracts_maximal_shift() {
        // z^-2 * (z^3 + z) normalizes to z^-1 * (z^2 + 1)
        let body = MPoly::var_pow(Var::Z, 3).add(&MPoly::var(Var::Z));
        let l = LaurentPoly::new(Var::Z, -2, body);
        assert_eq!(l.shift(), -1);
        assert_eq!(l.exponent_range(), Some((-1, 1)));
    }

    #[test]
    fn specialize_t_in_cocycle() {
        // t*z^-1 at t=0 -> 0; at t=1 -> z^-1
        let c = LaurentPoly::new(Var::Z, -1, MPoly::var(Var::T));
        let at0 = c.specialize(&[(Var::T, rat_i(0))]).unwrap();
        assert!(at0.is_zero());
        let at1 = c.specialize(&[(Var::T, rat_i(1))]).unwrap();
        assert_eq!(at1, LaurentPoly::var_power(Var::Z, -1));
    }

    #[test]
    fn zero_into_negative_power_rejected() {
        let c = LaurentPoly::var_power(Var::Z, -1);
        assert_eq!(
            c.specialize(&[(Var::Z, rat_i(0))]),
            Err(PolyError::ZeroToNegativePower)
        );
        // positive shift is fine
        let p = LaurentPoly::var_power(Var::Z, 2);
        assert_eq!(
            p.specialize(&[(Var::Z, rat_i(0))]).unwrap(),
            LaurentPoly::zero(Var::Z)
        );
    }

    #[test]
    fn chart_inversion() {
        // 1 + w  ->  1 + z^-1
        let p = MPoly::one().add(&MPoly::var(Var::W));
        let l = LaurentPoly::from_inverted_poly(Var::Z, Var::W, &p);
        assert_eq!(l.shift(), -1);
        assert_eq!(l.coeff_at(-1), MPoly::one());
        assert_eq!(l.coeff_at(0), MPoly::one());
    }

    #[test]
    fn display_negative_powers() {
        let c = LaurentPoly::new(Var::Z, -1, MPoly::var(Var::T));
        assert_eq!(c.to_string(), "z^-1*t");
        let l = LaurentPoly::var_power(Var::Z, -2).add(&LaurentPoly::one(Var::Z));
        assert_eq!(l.to_string(), "1 + z^-2");
    }
}
