//! Exact Gauss-Jordan elimination over Q: reduced row echelon form,
//! canonical nullspace bases, rank, and linear solves.

use num_traits::Zero;

use super::poly::Rat;

/// Reduced row echelon form. Returns the reduced matrix and pivot columns.
pub fn rref(mut m: Vec<Vec<Rat>>) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let rows = m.len();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].recip();
        for j in c..cols {
            let v = &m[r][j] * &inv;
            m[r][j] = v;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in c..cols {
                    let v = &m[i][j] - &(&factor * &m[r][j]);
                    m[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank(m: Vec<Vec<Rat>>) -> usize {
    rref(m).1.len()
}

/// Canonical basis of the solution space of M x = 0. One vector per free
/// column, in ascending free-column order, with a 1 in the free slot.
pub fn nullspace(m: Vec<Vec<Rat>>, cols: usize) -> Vec<Vec<Rat>> {
    let (red, pivots) = rref(m);
    let mut basis = Vec::new();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    for &f in &free {
        let mut v = vec![Rat::zero(); cols];
        v[f] = Rat::from_integer(1.into());
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -red[row][f].clone();
        }
        basis.push(v);
    }
    basis
}

/// Particular solution of M x = b with free variables set to zero.
/// None when the system is inconsistent.
pub fn solve(m: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut aug: Vec<Vec<Rat>> = m
        .iter()
        .zip(b.iter())
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    if aug.is_empty() {
        return Some(vec![Rat::zero(); cols]);
    }
    let (red, pivots) = {
        let a = std::mem::take(&mut aug);
        rref(a)
    };
    // inconsistent iff a pivot lands in the rhs column
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = red[row][cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::rat_i;

    #[test]
    fn nullspace_canonical() {
        // x + y + z = 0 -> basis {(-1,1,0), (-1,0,1)}
        let m = vec![vec![rat_i(1), rat_i(1), rat_i(1)]];
        let ns = nullspace(m, 3);
        assert_eq!(
            ns,
            vec![
                vec![rat_i(-1), rat_i(1), rat_i(0)],
                vec![rat_i(-1), rat_i(0), rat_i(1)],
            ]
        );
    }

    #[test]
    fn solve_and_inconsistency() {
        let m = vec![vec![rat_i(1), rat_i(1)], vec![rat_i(0), rat_i(1)]];
        let x = solve(&m, &[rat_i(3), rat_i(1)]).unwrap();
        assert_eq!(x, vec![rat_i(2), rat_i(1)]);
        let bad = vec![vec![rat_i(1), rat_i(0)], vec![rat_i(1), rat_i(0)]];
        assert!(solve(&bad, &[rat_i(0), rat_i(1)]).is_none());
    }

    #[test]
    fn rank_counts_pivots() {
        let m = vec![vec![rat_i(1), rat_i(2)], vec![rat_i(2), rat_i(4)]];
        assert_eq!(rank(m), 1);
    }
}
