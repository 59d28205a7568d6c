//! Exact dense linear algebra over a field: row reduction and nullspace
//! bases. Sizes here are small (tens of rows), entries are exact.

use crate::algebra::field::Field;

/// Reduced row echelon form in place; returns the pivot column of each
/// pivot row.
pub fn rref<F: Field>(m: &mut Vec<Vec<F>>) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].inv();
        for j in c..cols {
            m[r][j] = m[r][j].mul(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = m[r][j].mul(&f);
                    m[i][j] = m[i][j].sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// A basis of the right nullspace `{ v : M v = 0 }`.
pub fn nullspace<F: Field>(m: &[Vec<F>]) -> Vec<Vec<F>> {
    if m.is_empty() {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut work = m.to_vec();
    let pivots = rref(&mut work);
    let pivot_set: Vec<Option<usize>> = {
        let mut v = vec![None; cols];
        for (row, &c) in pivots.iter().enumerate() {
            v[c] = Some(row);
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set[free].is_some() {
            continue;
        }
        let mut vec = vec![F::zero(); cols];
        vec[free] = F::one();
        for (c, p) in pivot_set.iter().enumerate() {
            if let Some(row) = p {
                vec[c] = work[*row][free].neg();
            }
        }
        basis.push(vec);
    }
    basis
}

/// Rank of the matrix.
pub fn rank<F: Field>(m: &[Vec<F>]) -> usize {
    let mut work = m.to_vec();
    rref(&mut work).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::Rat;

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    #[test]
    fn nullspace_of_rank_one() {
        // x + 2y + 3z = 0
        let m = vec![vec![r(1), r(2), r(3)]];
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let dot = v[0].clone() + v[1].clone() * r(2) + v[2].clone() * r(3);
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn full_rank_has_trivial_nullspace() {
        let m = vec![vec![r(1), r(1)], vec![r(0), r(2)]];
        assert!(nullspace(&m).is_empty());
        assert_eq!(rank(&m), 2);
    }
}
