//! Exact rational linear algebra.
//!
//! Rows are cleared of denominators and eliminated with fraction-free
//! (Bareiss) steps over `BigInt`, which keeps intermediate entries bounded by
//! minors of the scaled input instead of letting naive fraction arithmetic
//! blow up. Back-substitution then runs over `BigRational` and results are
//! rescaled to primitive integer vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::mat::Mat;

type Rat = BigRational;

fn clear_denominators(a: &Mat<Rat>) -> Vec<Vec<BigInt>> {
    let mut out = Vec::with_capacity(a.rows());
    for r in 0..a.rows() {
        let mut lcm = BigInt::one();
        for c in 0..a.cols() {
            lcm = lcm.lcm(a.at(r, c).denom());
        }
        let row = (0..a.cols())
            .map(|c| {
                let e = a.at(r, c);
                e.numer() * (&lcm / e.denom())
            })
            .collect();
        out.push(row);
    }
    out
}

/// Fraction-free row echelon form, in place. Returns the pivot columns.
fn bareiss(rows: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let m = rows.len();
    let mut pivot_cols = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..cols {
        if r == m {
            break;
        }
        // smallest nonzero magnitude keeps the minors compact
        let pivot_row = (r..m)
            .filter(|&i| !rows[i][col].is_zero())
            .min_by(|&i, &j| rows[i][col].abs().cmp(&rows[j][col].abs()));
        let Some(pr) = pivot_row else { continue };
        rows.swap(r, pr);
        let pivot = rows[r][col].clone();
        // Every remaining row must take the fraction-free update, including
        // rows with a zero head (they are rescaled by pivot/prev); skipping
        // them breaks the exactness of later divisions.
        for i in (r + 1)..m {
            let head = rows[i][col].clone();
            for j in col..cols {
                let num = &rows[i][j] * &pivot - &head * &rows[r][j];
                rows[i][j] = num / &prev; // exact by the Bareiss identity
            }
        }
        prev = pivot;
        pivot_cols.push(col);
        r += 1;
    }
    pivot_cols
}

/// Scale a rational vector to coprime integers with positive leading entry.
fn primitive(v: Vec<Rat>) -> Vec<Rat> {
    let mut lcm = BigInt::one();
    for e in &v {
        lcm = lcm.lcm(e.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|e| e.numer() * (&lcm / e.denom())).collect();
    let mut gcd = BigInt::zero();
    for e in &ints {
        gcd = gcd.gcd(e);
    }
    if gcd.is_zero() {
        return v;
    }
    let lead_negative = ints.iter().find(|e| !e.is_zero()).map(|e| e.is_negative()).unwrap_or(false);
    let div = if lead_negative { -gcd } else { gcd };
    ints.into_iter().map(|e| Rat::from_integer(e / &div)).collect()
}

pub fn rank(a: &Mat<Rat>) -> usize {
    let mut rows = clear_denominators(a);
    bareiss(&mut rows, a.cols()).len()
}

/// Exact nullspace basis as primitive integer vectors.
pub fn nullspace(a: &Mat<Rat>) -> Vec<Vec<Rat>> {
    let n = a.cols();
    let mut rows = clear_denominators(a);
    let pivot_cols = bareiss(&mut rows, n);
    let rank = pivot_cols.len();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; n];
        for &c in &pivot_cols {
            v[c] = true;
        }
        v
    };

    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !is_pivot[*c]) {
        let mut x = vec![Rat::zero(); n];
        x[free] = Rat::one();
        for k in (0..rank).rev() {
            let pc = pivot_cols[k];
            let mut acc = Rat::zero();
            for j in (pc + 1)..n {
                if !x[j].is_zero() && !rows[k][j].is_zero() {
                    acc += Rat::from_integer(rows[k][j].clone()) * &x[j];
                }
            }
            x[pc] = -acc / Rat::from_integer(rows[k][pc].clone());
        }
        basis.push(primitive(x));
    }
    basis
}

/// Canonical basis of `span(rows)`: reduced row echelon form scaled to
/// primitive integer vectors.
pub fn row_basis(rows: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let n = rows[0].len();
    let mut work: Vec<Vec<Rat>> = rows.to_vec();
    let m = work.len();
    let mut r = 0;
    for col in 0..n {
        if r == m {
            break;
        }
        let Some(pr) = (r..m).find(|&i| !work[i][col].is_zero()) else { continue };
        work.swap(r, pr);
        let inv = work[r][col].clone();
        for j in col..n {
            let v = work[r][j].clone() / &inv;
            work[r][j] = v;
        }
        for i in 0..m {
            if i != r && !work[i][col].is_zero() {
                let f = work[i][col].clone();
                for j in col..n {
                    let v = work[i][j].clone() - &f * &work[r][j];
                    work[i][j] = v;
                }
            }
        }
        r += 1;
    }
    work.truncate(r);
    work.into_iter().map(primitive).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::from_ratio(n, d)
    }

    fn mat(rows: Vec<Vec<(i64, i64)>>) -> Mat<Rat> {
        Mat::from_rows(rows.into_iter().map(|r| r.into_iter().map(|(n, d)| rat(n, d)).collect()).collect())
    }

    #[test]
    fn nullspace_of_zero_is_everything() {
        let a = Mat::<Rat>::zeros(3, 3);
        assert_eq!(nullspace(&a).len(), 3);
        assert_eq!(rank(&a), 0);
    }

    #[test]
    fn nullspace_of_identity_is_empty() {
        let a = Mat::<Rat>::identity(3);
        assert!(nullspace(&a).is_empty());
    }

    #[test]
    fn symmetric_rank_one() {
        let a = mat(vec![vec![(1, 1), (1, 1)], vec![(1, 1), (1, 1)]]);
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0], vec![rat(1, 1), rat(-1, 1)]);
    }

    #[test]
    fn nullspace_vectors_annihilate_exactly() {
        let a = mat(vec![
            vec![(1, 2), (1, 3), (1, 6), (0, 1)],
            vec![(2, 1), (0, 1), (-1, 1), (3, 1)],
        ]);
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let av = a.matvec(v);
            assert!(av.iter().all(|e| e.is_zero()));
        }
    }

    #[test]
    fn row_basis_is_canonical_under_scaling() {
        let rows1 = vec![vec![rat(2, 1), rat(2, 1)]];
        let rows2 = vec![vec![rat(-5, 3), rat(-5, 3)]];
        assert_eq!(row_basis(&rows1), row_basis(&rows2));
    }

    #[test]
    fn sparse_matrices_with_zero_heads_eliminate_exactly() {
        // regression: rows whose head entry is zero still need the
        // fraction-free rescaling, otherwise later divisions truncate
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 13) as i64 - 6
        };
        for _ in 0..50 {
            let m = 6;
            let n = 9;
            let data: Vec<Rat> = (0..m * n)
                .map(|_| {
                    let v = next();
                    // thin the matrix out so zero heads actually occur
                    if v.abs() <= 2 {
                        Rat::from_int(0)
                    } else {
                        Rat::from_int(v)
                    }
                })
                .collect();
            let a = Mat::from_vec(m, n, data);
            let ns = nullspace(&a);
            assert_eq!(rank(&a) + ns.len(), n);
            for v in &ns {
                let av = a.matvec(v);
                assert!(av.iter().all(|e| e.is_zero()), "nonzero residual: {av:?}");
            }
        }
    }

    #[test]
    fn rank_plus_nullity_is_cols() {
        let a = mat(vec![
            vec![(1, 1), (2, 1), (3, 1)],
            vec![(2, 1), (4, 1), (6, 1)],
            vec![(0, 1), (1, 1), (1, 1)],
        ]);
        assert_eq!(rank(&a) + nullspace(&a).len(), 3);
    }
}
