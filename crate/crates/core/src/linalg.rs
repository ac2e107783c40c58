//! Small exact linear algebra over rationals and over polynomial rings.
//!
//! Everything here is desk-scale (n <= 4 or so): Gauss-Jordan inverses,
//! determinants by elimination, cofactor adjugates for polynomial matrices.

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::rational::Rational;
use crate::scalarfield::PolynomialField;

pub type Mat = Vec<Vec<Rational>>;

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect()
}

pub fn zeros(n: usize) -> Mat {
    vec![vec![Rational::zero(); n]; n]
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                let prod = &a[i][k] * &b[k][j];
                out[i][j] += prod;
            }
        }
    }
    out
}

pub fn mat_add(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn mat_neg(a: &Mat) -> Mat {
    a.iter().map(|r| r.iter().map(|x| -x).collect()).collect()
}

pub fn mat_scale(a: &Mat, c: &Rational) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

/// Exact determinant by fraction-free-ish Gaussian elimination.
pub fn det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Mat = m.to_vec();
    let mut sign = Rational::one();
    let mut acc = Rational::one();
    for c in 0..n {
        let pivot_row = match (c..n).find(|&r| !a[r][c].is_zero()) {
            Some(r) => r,
            None => return Rational::zero(),
        };
        if pivot_row != c {
            a.swap(pivot_row, c);
            sign = -sign;
        }
        let pivot = a[c][c].clone();
        acc *= &pivot;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &pivot;
            for j in c..n {
                let sub = &f * &a[c][j];
                a[r][j] -= sub;
            }
        }
    }
    sign * acc
}

/// Exact inverse via Gauss-Jordan. Errors on a singular matrix.
pub fn inverse(m: &[Vec<Rational>]) -> Result<Mat, Error> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let pivot_row = (c..n)
            .find(|&r| !a[r][c].is_zero())
            .ok_or(Error::SingularMatrix)?;
        a.swap(pivot_row, c);
        let pivot = a[c][c].clone();
        for v in &mut a[c] {
            *v /= &pivot;
        }
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for j in 0..2 * n {
                let sub = &f * &a[c][j];
                a[r][j] -= sub;
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Leading principal minors; all positive iff the symmetric matrix is
/// positive-definite (Sylvester's criterion).
pub fn leading_principal_minors(m: &[Vec<Rational>]) -> Vec<Rational> {
    (1..=m.len())
        .map(|k| {
            let sub: Mat = m[..k].iter().map(|row| row[..k].to_vec()).collect();
            det(&sub)
        })
        .collect()
}

pub fn is_positive_definite(m: &[Vec<Rational>]) -> bool {
    leading_principal_minors(m).iter().all(|d| d.is_positive())
}

/// Determinant of a matrix of polynomials, by cofactor expansion.
pub fn poly_det(m: &[Vec<PolynomialField>]) -> PolynomialField {
    let n = m.len();
    let dim = m[0][0].dimension();
    match n {
        0 => PolynomialField::one(dim),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = PolynomialField::zero(dim);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<PolynomialField>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let cof = m[0][j].mul(&poly_det(&minor));
                acc = if j % 2 == 0 { acc.add(&cof) } else { acc.sub(&cof) };
            }
            acc
        }
    }
}

/// Adjugate of a polynomial matrix: adj(M)[i][j] = cofactor_{j,i}, so that
/// M * adj(M) = det(M) * I exactly.
pub fn poly_adjugate(m: &[Vec<PolynomialField>]) -> Vec<Vec<PolynomialField>> {
    let n = m.len();
    let dim = m[0][0].dimension();
    if n == 1 {
        return vec![vec![PolynomialField::one(dim)]];
    }
    let mut adj = vec![vec![PolynomialField::zero(dim); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<PolynomialField>> = m
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != i)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, p)| p.clone())
                        .collect()
                })
                .collect();
            let mut cof = poly_det(&minor);
            if (i + j) % 2 == 1 {
                cof = cof.negate();
            }
            adj[j][i] = cof;
        }
    }
    adj
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    #[test]
    fn inverse_and_det_agree() {
        let m = vec![
            vec![rat_int(2), rat_int(1), rat_int(0)],
            vec![rat_int(1), rat_int(3), rat_int(1)],
            vec![rat_int(0), rat_int(1), rat_int(4)],
        ];
        assert_eq!(det(&m), rat_int(18));
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(3));
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let m = vec![
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(2), rat_int(4)],
        ];
        assert!(det(&m).is_zero());
        assert!(inverse(&m).is_err());
    }

    #[test]
    fn positive_definite_by_minors() {
        let good = vec![
            vec![rat_int(2), rat(1, 2)],
            vec![rat(1, 2), rat_int(1)],
        ];
        assert!(is_positive_definite(&good));
        let bad = vec![
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(2), rat_int(1)],
        ];
        assert!(!is_positive_definite(&bad));
    }

    #[test]
    fn polynomial_adjugate_identity() {
        // M * adj(M) = det(M) * I for a polynomial matrix
        let x = PolynomialField::variable(2, 0);
        let y = PolynomialField::variable(2, 1);
        let one = PolynomialField::one(2);
        let m = vec![
            vec![one.add(&x), y.clone()],
            vec![y.clone(), one.clone()],
        ];
        let adj = poly_adjugate(&m);
        let d = poly_det(&m);
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = PolynomialField::zero(2);
                for k in 0..2 {
                    acc = acc.add(&m[i][k].mul(&adj[k][j]));
                }
                let expect = if i == j { d.clone() } else { PolynomialField::zero(2) };
                assert_eq!(acc, expect);
            }
        }
    }
}
