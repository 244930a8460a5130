//! Multivariate gcd via content/primitive-part recursion over subresultant
//! polynomial remainder sequences, exact resultants as Sylvester
//! determinants, and the derivative-gcd square-freeness test.

use super::poly::{MPoly, Mono, PolyError};
use super::var::Var;

/// Pseudo-remainder of `a` by `b` with respect to `v`:
/// lc_v(b)^(deg a - deg b + 1) * a = q*b + r with deg_v r < deg_v b.
pub fn pseudo_rem(a: &MPoly, b: &MPoly, v: Var) -> MPoly {
    let db = b.degree_in(v);
    assert!(b.contains_var(v) || db == 0);
    assert!(!b.is_zero(), "pseudo-division by zero");
    let lc_b = b.coeff_of(v, db);
    let mut r = a.clone();
    let mut steps_left = a.degree_in(v) as i64 - db as i64 + 1;
    loop {
        if r.is_zero() {
            break;
        }
        let dr = r.degree_in(v);
        if dr < db {
            break;
        }
        let lc_r = r.coeff_of(v, dr);
        let shift = Mono::of_var(v, dr - db);
        r = lc_b.mul(&r).sub(&lc_r.mul_mono(&shift).mul(b));
        steps_left -= 1;
    }
    // pad with unused leading-coefficient factors for the standard normalization
    if steps_left > 0 && !r.is_zero() {
        r = r.mul(&lc_b.pow(steps_left as u32));
    }
    r
}

/// Last nonzero element of the subresultant PRS of (a, b) in the variable `v`.
/// Both inputs must have positive degree in `v`; the result is a gcd of the
/// pair up to content in the remaining variables.
fn subresultant_prs_last(a: &MPoly, b: &MPoly, v: Var) -> MPoly {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    let mut g = MPoly::one();
    let mut h = MPoly::one();
    loop {
        let delta = a.degree_in(v) - b.degree_in(v);
        let r = pseudo_rem(&a, &b, v);
        if r.is_zero() {
            return b;
        }
        let divisor = g.mul(&h.pow(delta));
        let b_next = r
            .div_exact(&divisor)
            .expect("subresultant PRS division is exact");
        a = b;
        g = a.coeff_of(v, a.degree_in(v));
        if delta > 0 {
            h = g
                .pow(delta)
                .div_exact(&h.pow(delta - 1))
                .expect("subresultant h-update division is exact");
        }
        b = b_next;
        if b.degree_in(v) == 0 {
            // coprime in v
            return b;
        }
    }
}

/// Content of `f` with respect to `v`: the gcd of its `v`-coefficients.
pub fn content_in(f: &MPoly, v: Var) -> MPoly {
    let mut c = MPoly::zero();
    for coeff in f.coeffs_in(v) {
        if coeff.is_zero() {
            continue;
        }
        c = poly_gcd(&c, &coeff);
        if c.is_one() {
            break;
        }
    }
    c
}

/// Primitive part of `f` with respect to `v`.
pub fn primitive_part_in(f: &MPoly, v: Var) -> MPoly {
    if f.is_zero() {
        return MPoly::zero();
    }
    let c = content_in(f, v);
    f.div_exact(&c).expect("content divides")
}

/// Primitive greatest common divisor, normalized with coprime integer
/// coefficients and a positive leading coefficient. gcd(0, g) is the
/// primitive part of g.
pub fn poly_gcd(f: &MPoly, g: &MPoly) -> MPoly {
    if f.is_zero() {
        return g.primitive_part();
    }
    if g.is_zero() {
        return f.primitive_part();
    }
    let fv = f.vars_used();
    let gv = g.vars_used();
    let common: Vec<Var> = fv.iter().copied().filter(|v| gv.contains(v)).collect();
    if common.is_empty() {
        // only constant common divisors remain
        return MPoly::one();
    }
    let v = common[0];
    let fc = content_in(f, v);
    let gc = content_in(g, v);
    let fp = f.div_exact(&fc).expect("content divides");
    let gp = g.div_exact(&gc).expect("content divides");
    let c = poly_gcd(&fc, &gc);
    let prs = subresultant_prs_last(&fp, &gp, v);
    let pp = if prs.degree_in(v) == 0 {
        MPoly::one()
    } else {
        primitive_part_in(&prs, v)
    };
    c.mul(&pp).primitive_part()
}

/// Sylvester-matrix resultant of f and g with respect to `v`, exact.
pub fn resultant(f: &MPoly, g: &MPoly, v: Var) -> Result<MPoly, PolyError> {
    let m = f.degree_in(v) as usize;
    let n = g.degree_in(v) as usize;
    if m == 0 && n == 0 {
        return Err(PolyError::BothConstantIn(v));
    }
    if f.is_zero() || g.is_zero() {
        return Ok(MPoly::zero());
    }
    // coefficients in descending order of v
    let fc: Vec<MPoly> = (0..=m).rev().map(|e| f.coeff_of(v, e as u32)).collect();
    let gc: Vec<MPoly> = (0..=n).rev().map(|e| g.coeff_of(v, e as u32)).collect();
    let size = m + n;
    let mut rows: Vec<Vec<MPoly>> = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![MPoly::zero(); size];
        row[i..i + m + 1].clone_from_slice(&fc);
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![MPoly::zero(); size];
        row[i..i + n + 1].clone_from_slice(&gc);
        rows.push(row);
    }
    Ok(det_poly_matrix(rows))
}

/// Exact determinant of a polynomial matrix by fraction-free (Bareiss)
/// elimination with row pivoting.
pub fn det_poly_matrix(mut m: Vec<Vec<MPoly>>) -> MPoly {
    let n = m.len();
    if n == 0 {
        return MPoly::one();
    }
    for row in &m {
        assert_eq!(row.len(), n, "determinant of a non-square matrix");
    }
    let mut negate = false;
    let mut prev = MPoly::one();
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                None => return MPoly::zero(),
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = MPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// True iff gcd(f, ∂f/∂v_1, …, ∂f/∂v_k) is a constant, i.e. f has no
/// repeated factor involving the listed variables.
pub fn squarefree_test(f: &MPoly, vars: &[Var]) -> Result<bool, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut g = f.clone();
    for &v in vars {
        g = poly_gcd(&g, &f.derivative(v));
        if g.is_constant() {
            return Ok(true);
        }
    }
    Ok(g.is_constant())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_mpoly;
    use crate::algebra::poly::{rat_i, MPoly};

    fn p(s: &str) -> MPoly {
        parse_mpoly(s).unwrap()
    }

    #[test]
    fn monomial_gcd() {
        assert_eq!(poly_gcd(&p("v^4"), &p("4*v^3")), p("v^3"));
    }

    #[test]
    fn coprime_powers() {
        assert_eq!(poly_gcd(&p("v^3"), &p("w^3")), MPoly::one());
    }

    #[test]
    fn common_root_gcd() {
        assert_eq!(poly_gcd(&p("u^2 - 1"), &p("u^2 - 2*u + 1")), p("u - 1"));
    }

    #[test]
    fn gcd_with_zero_is_primitive_part() {
        assert_eq!(poly_gcd(&MPoly::zero(), &p("-2*u^2 - 4")), p("u^2 + 2"));
        assert_eq!(poly_gcd(&MPoly::zero(), &MPoly::zero()), MPoly::zero());
    }

    #[test]
    fn resultant_examples() {
        // substituting the root of x1-2 into x1^2+1 gives 5
        assert_eq!(
            resultant(&p("x1^2 + 1"), &p("x1 - 2"), Var::X1).unwrap(),
            MPoly::constant(rat_i(5))
        );
        assert_eq!(
            resultant(&p("x1^2 - 1"), &p("2*x1"), Var::X1).unwrap(),
            MPoly::constant(rat_i(-4))
        );
        assert_eq!(
            resultant(&p("v - u"), &p("v + u"), Var::V).unwrap(),
            p("2*u")
        );
        assert!(resultant(&p("u"), &p("u + 1"), Var::V).is_err());
    }

    #[test]
    fn squarefree_examples() {
        // v^4 + z*(1+z)^4*w^4 is square-free in {v, w}
        let f = p("v^4 + z*(1+z)^4*w^4");
        assert!(squarefree_test(&f, &[Var::V, Var::W]).unwrap());
        assert!(!squarefree_test(&p("v^4"), &[Var::V]).unwrap());
        let g = p("(v - w)^2 * (v + w)");
        assert!(!squarefree_test(&g, &[Var::V, Var::W]).unwrap());
        assert!(squarefree_test(&MPoly::zero(), &[Var::V]).is_err());
    }

    #[test]
    fn gcd_divides_both() {
        let f = p("(u + v)*(u - 2)");
        let g = p("(u + v)*(v + 3)");
        let d = poly_gcd(&f, &g);
        assert_eq!(d, p("u + v"));
        assert!(f.div_exact(&d).is_some());
        assert!(g.div_exact(&d).is_some());
    }

    #[test]
    fn determinant_with_pivoting() {
        // [[0, 1], [1, 0]] -> -1
        let m = vec![
            vec![MPoly::zero(), MPoly::one()],
            vec![MPoly::one(), MPoly::zero()],
        ];
        assert_eq!(det_poly_matrix(m), MPoly::constant(rat_i(-1)));
    }
}
