//! Exact rational linear algebra on small integer matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Row-major integer matrix.
pub type IntMatrix = Vec<Vec<i64>>;

pub fn transpose(m: &IntMatrix) -> IntMatrix {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|row| row[j]).collect()).collect()
}

struct Echelon {
    rows: Vec<Vec<BigRational>>,
    pivots: Vec<usize>,
}

/// Reduced row echelon form.
fn rref(m: &IntMatrix) -> Echelon {
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let (rows, cols) = (a.len(), m.first().map_or(0, Vec::len));
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
        }
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    Echelon { rows: a, pivots }
}

pub fn rank(m: &IntMatrix) -> usize {
    rref(m).pivots.len()
}

/// Determinant of a square matrix by fraction-free elimination.
pub fn determinant(m: &IntMatrix) -> Option<BigInt> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return None;
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Some(BigInt::zero());
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                // Bareiss step; the division is exact
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    Some(sign * prev)
}

/// Integer basis of the right kernel `{q : M q = 0}`; each vector is
/// gcd-reduced with its first nonzero entry positive.
pub fn kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let cols = m.first().map_or(0, Vec::len);
    let e = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (row, &p) in e.pivots.iter().enumerate() {
                v[p] = -e.rows[row][f].clone();
            }
            normalize(&v)
        })
        .collect()
}

/// Clears denominators, divides by the gcd, and makes the first nonzero entry positive.
pub fn normalize(v: &[BigRational]) -> Vec<BigInt> {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x * &sign / &g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    fn from_columns(cols: &[[i64; 3]]) -> IntMatrix {
        transpose(&cols.iter().map(|c| c.to_vec()).collect())
    }

    #[test]
    fn hand_computed_cases() {
        let m = from_columns(&[[2, 0, 0], [1, 1, 0], [1, 0, 1]]);
        assert_eq!(determinant(&m), Some(2.into()));
        assert_eq!(rank(&m), 3);
        assert!(kernel(&m).is_empty());

        let s = from_columns(&[[2, 0, 0], [0, 2, 0], [1, 1, 0]]);
        assert_eq!(determinant(&s), Some(0.into()));
        assert_eq!(rank(&s), 2);
        assert_eq!(kernel(&s), vec![big(&[1, 1, -2])]);
        assert_eq!(kernel(&transpose(&s)), vec![big(&[0, 0, 1])]);

        assert_eq!(determinant(&vec![vec![7]]), Some(7.into()));
        let m = vec![vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]];
        assert_eq!(determinant(&m), Some((-2).into()));
    }

    #[test]
    fn rank_deficient_and_rectangular() {
        let m = vec![vec![1, 2, 3], vec![2, 4, 6]];
        assert_eq!(rank(&m), 1);
        let k = kernel(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot: BigInt = v.iter().zip(&m[0]).map(|(a, &b)| a * b).sum();
            assert!(dot.is_zero());
        }
        assert_eq!(determinant(&m), None);
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        // 3×3 cofactor expansion as an independent oracle
        let cof = |m: &IntMatrix| {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        let mut seed = 12345u64;
        for _ in 0..500 {
            let m: IntMatrix = (0..3)
                .map(|_| {
                    (0..3)
                        .map(|_| {
                            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                            (seed >> 60) as i64 - 8
                        })
                        .collect()
                })
                .collect();
            assert_eq!(determinant(&m), Some(cof(&m).into()));
            assert_eq!(rank(&m) == 3, cof(&m) != 0);
        }
    }
}
