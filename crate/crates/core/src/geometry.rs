//! Pointwise curvature calculus on polynomial metrics.
//!
//! A `MetricField` is a symmetric matrix of exact polynomials. A `MetricJet`
//! packages the exact values of g, its partials up to third order, and the
//! inverse-metric partials at one point; every curvature formula consumes a
//! jet. The inverse metric is never a symbolic object — only its pointwise
//! derivatives via d(g^-1) = -g^-1 (dg) g^-1 and the second-order analogue.
//!
//! Index conventions: all tensors are `Vec`-nested with 0-based axes;
//! derivative axes come first (`dg[a][i][j]` is the a-partial of g_ij) and
//! the contravariant Christoffel index first (`gamma[k][i][j]`). Einstein
//! sums run over the full axis range everywhere.

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::linalg::{self, Mat};
use crate::rational::{rat, Rational};
use crate::scalarfield::{Point, PolynomialField};

pub type T2 = Vec<Vec<Rational>>;
pub type T3 = Vec<Vec<Vec<Rational>>>;
pub type T4 = Vec<Vec<Vec<Vec<Rational>>>>;
pub type T5 = Vec<Vec<Vec<Vec<Vec<Rational>>>>>;

pub(crate) fn tensor2(n: usize, mut f: impl FnMut(usize, usize) -> Rational) -> T2 {
    (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect()
}

pub(crate) fn tensor3(n: usize, mut f: impl FnMut(usize, usize, usize) -> Rational) -> T3 {
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| f(i, j, k)).collect()).collect())
        .collect()
}

pub(crate) fn tensor4(
    n: usize,
    mut f: impl FnMut(usize, usize, usize, usize) -> Rational,
) -> T4 {
    (0..n)
        .map(|a| tensor3(n, |i, j, k| f(a, i, j, k)))
        .collect()
}

pub(crate) fn sum(n: usize, mut f: impl FnMut(usize) -> Rational) -> Rational {
    (0..n).fold(Rational::zero(), |acc, i| acc + f(i))
}

pub(crate) fn sum2(n: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Rational {
    sum(n, |i| sum(n, |j| f(i, j)))
}

/// Symmetric matrix of exact polynomials, positive-definite at its declared
/// base point (checked at construction; positivity elsewhere is the caller's
/// concern and is re-checked wherever a jet is taken).
#[derive(Debug, Clone, PartialEq)]
pub struct MetricField {
    dimension: usize,
    components: Vec<Vec<PolynomialField>>,
    base_point: Point,
}

impl MetricField {
    pub fn new(components: Vec<Vec<PolynomialField>>, base_point: Point) -> Result<Self, Error> {
        let n = components.len();
        assert!(n > 0, "empty metric");
        assert!(
            components.iter().all(|row| row.len() == n),
            "metric component matrix must be square"
        );
        assert_eq!(base_point.dimension(), n, "base point dimension mismatch");
        for row in &components {
            for p in row {
                assert_eq!(p.dimension(), n, "component polynomial dimension mismatch");
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if components[i][j] != components[j][i] {
                    return Err(Error::AsymmetricMetric { i, j });
                }
            }
        }
        let m = MetricField {
            dimension: n,
            components,
            base_point,
        };
        let at_base = m.eval_matrix(&m.base_point);
        if !linalg::is_positive_definite(&at_base) {
            return Err(Error::MetricNotPositiveDefinite(m.base_point.to_string()));
        }
        Ok(m)
    }

    /// The flat metric delta_ij.
    pub fn identity(dimension: usize) -> Self {
        let components = (0..dimension)
            .map(|i| {
                (0..dimension)
                    .map(|j| {
                        if i == j {
                            PolynomialField::one(dimension)
                        } else {
                            PolynomialField::zero(dimension)
                        }
                    })
                    .collect()
            })
            .collect();
        MetricField::new(components, Point::origin(dimension)).expect("identity metric is valid")
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn base_point(&self) -> &Point {
        &self.base_point
    }

    pub fn component(&self, i: usize, j: usize) -> &PolynomialField {
        &self.components[i][j]
    }

    pub fn components(&self) -> &Vec<Vec<PolynomialField>> {
        &self.components
    }

    pub fn eval_matrix(&self, x: &Point) -> Mat {
        tensor2(self.dimension, |i, j| self.components[i][j].eval(x))
    }

    /// Returns `self + c * p` as a new metric, verifying symmetry of `p` and
    /// positive-definiteness at the base point.
    pub fn add_scaled(
        &self,
        p: &[Vec<PolynomialField>],
        c: &Rational,
    ) -> Result<Self, Error> {
        let n = self.dimension;
        let components: Vec<Vec<PolynomialField>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.components[i][j].add(&p[i][j].scale(c)))
                    .collect()
            })
            .collect();
        MetricField::new(components, self.base_point.clone())
            .map_err(|e| match e {
                Error::MetricNotPositiveDefinite(_) => Error::StepNotPositiveDefinite,
                other => other,
            })
    }

    /// Pullback under the linear coordinate change x = L y:
    /// (L*g)_ij(y) = L_ai L_bj g_ab(L y). The base point moves to L^-1 x0.
    pub fn pullback_linear(&self, l: &Mat) -> Result<Self, Error> {
        let n = self.dimension;
        let l_inv = linalg::inverse(l)?;
        let composed: Vec<Vec<PolynomialField>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| self.components[a][b].compose_linear(l))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let components = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut acc = PolynomialField::zero(n);
                        for a in 0..n {
                            for b in 0..n {
                                let c = &l[a][i] * &l[b][j];
                                acc = acc.add(&composed[a][b].scale(&c));
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let new_base = Point::new(
            (0..n)
                .map(|i| {
                    sum(n, |j| &l_inv[i][j] * self.base_point.coord(j))
                })
                .collect(),
        );
        MetricField::new(components, new_base)
    }

    /// Exact jet of the metric at `x` up to `order` (1..=3). Inverse-metric
    /// partials are populated up to `order - 1`.
    pub fn jet_at(&self, x: &Point, order: usize) -> Result<MetricJet, Error> {
        assert!((1..=3).contains(&order), "jet order must be 1, 2 or 3");
        assert_eq!(x.dimension(), self.dimension, "point dimension mismatch");
        let n = self.dimension;

        let g = self.eval_matrix(x);
        if !linalg::is_positive_definite(&g) {
            return Err(Error::MetricNotPositiveDefinite(x.to_string()));
        }
        let ginv = linalg::inverse(&g)?;

        let dpolys: Vec<Vec<Vec<PolynomialField>>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| self.components[i][j].partial(a))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let dg: T3 = (0..n)
            .map(|a| tensor2(n, |i, j| dpolys[a][i][j].eval(x)))
            .collect();

        let mut d2g: T4 = Vec::new();
        let mut d3g: T5 = Vec::new();
        if order >= 2 {
            let d2polys: Vec<Vec<Vec<Vec<PolynomialField>>>> = (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| {
                            (0..n)
                                .map(|i| {
                                    (0..n)
                                        .map(|j| {
                                            if b >= a {
                                                dpolys[a][i][j].partial(b)
                                            } else {
                                                PolynomialField::zero(n)
                                            }
                                        })
                                        .collect()
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect();
            d2g = (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| {
                            let (lo, hi) = (a.min(b), a.max(b));
                            tensor2(n, |i, j| d2polys[lo][hi][i][j].eval(x))
                        })
                        .collect()
                })
                .collect();
            if order >= 3 {
                d3g = (0..n)
                    .map(|a| {
                        (0..n)
                            .map(|b| {
                                (0..n)
                                    .map(|c| {
                                        let mut axes = [a, b, c];
                                        axes.sort_unstable();
                                        tensor2(n, |i, j| {
                                            d2polys[axes[0]][axes[1]][i][j].partial(axes[2]).eval(x)
                                        })
                                    })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect();
            }
        }

        // d(g^-1) = -g^-1 (dg) g^-1; the second derivative follows by Leibniz.
        let mut dginv: T3 = Vec::new();
        let mut d2ginv: T4 = Vec::new();
        if order >= 2 {
            dginv = (0..n)
                .map(|a| {
                    linalg::mat_neg(&linalg::mat_mul(&ginv, &linalg::mat_mul(&dg[a], &ginv)))
                })
                .collect();
            if order >= 3 {
                d2ginv = (0..n)
                    .map(|a| {
                        (0..n)
                            .map(|b| {
                                let t1 = linalg::mat_mul(
                                    &dginv[b],
                                    &linalg::mat_mul(&dg[a], &ginv),
                                );
                                let t2 = linalg::mat_mul(
                                    &ginv,
                                    &linalg::mat_mul(&d2g[a][b], &ginv),
                                );
                                let t3 = linalg::mat_mul(
                                    &ginv,
                                    &linalg::mat_mul(&dg[a], &dginv[b]),
                                );
                                linalg::mat_neg(&linalg::mat_add(&linalg::mat_add(&t1, &t2), &t3))
                            })
                            .collect()
                    })
                    .collect();
            }
        }

        Ok(MetricJet {
            point: x.clone(),
            order,
            g,
            dg,
            d2g,
            d3g,
            ginv,
            dginv,
            d2ginv,
        })
    }
}

/// Pointwise values of the metric, its partials, and the inverse-metric
/// partials at one point.
#[derive(Debug, Clone)]
pub struct MetricJet {
    point: Point,
    order: usize,
    pub g: T2,
    pub dg: T3,
    pub d2g: T4,
    pub d3g: T5,
    pub ginv: T2,
    pub dginv: T3,
    pub d2ginv: T4,
}

impl MetricJet {
    pub fn point(&self) -> &Point {
        &self.point
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dimension(&self) -> usize {
        self.g.len()
    }

    /// True iff g at this point is exactly the identity matrix.
    pub fn is_identity_normalized(&self) -> bool {
        let n = self.dimension();
        (0..n).all(|i| {
            (0..n).all(|j| {
                if i == j {
                    self.g[i][j].is_one()
                } else {
                    self.g[i][j].is_zero()
                }
            })
        })
    }
}

/// Christoffel symbols of the second kind:
/// Gamma^k_ij = 1/2 g^km (d_i g_jm + d_j g_im - d_m g_ij).
pub fn christoffel_at(jet: &MetricJet) -> T3 {
    let n = jet.dimension();
    let half = rat(1, 2);
    tensor3(n, |k, i, j| {
        &half
            * &sum(n, |m| {
                &jet.ginv[k][m] * &(&(&jet.dg[i][j][m] + &jet.dg[j][i][m]) - &jet.dg[m][i][j])
            })
    })
}

/// d_a Gamma^k_ij by exact differentiation of the Christoffel formula,
/// using the inverse-metric partials. Needs a jet of order >= 2.
pub fn christoffel_partials_at(jet: &MetricJet) -> T4 {
    assert!(jet.order() >= 2, "christoffel partials need a jet of order >= 2");
    let n = jet.dimension();
    let half = rat(1, 2);
    let s = |m: usize, i: usize, j: usize| -> Rational {
        &(&jet.dg[i][j][m] + &jet.dg[j][i][m]) - &jet.dg[m][i][j]
    };
    let ds = |a: usize, m: usize, i: usize, j: usize| -> Rational {
        &(&jet.d2g[a][i][j][m] + &jet.d2g[a][j][i][m]) - &jet.d2g[a][m][i][j]
    };
    tensor4(n, |a, k, i, j| {
        &half
            * &sum(n, |m| {
                &(&jet.dginv[a][k][m] * &s(m, i, j)) + &(&jet.ginv[k][m] * &ds(a, m, i, j))
            })
    })
}

/// d_b d_a Gamma^k_ij; needs a full third-order jet.
/// Returned as [a][b][k][i][j], symmetric in (a, b).
pub fn christoffel_second_partials_at(jet: &MetricJet) -> T5 {
    assert!(jet.order() >= 3, "second christoffel partials need a jet of order 3");
    let n = jet.dimension();
    let half = rat(1, 2);
    let s = |m: usize, i: usize, j: usize| -> Rational {
        &(&jet.dg[i][j][m] + &jet.dg[j][i][m]) - &jet.dg[m][i][j]
    };
    let ds = |a: usize, m: usize, i: usize, j: usize| -> Rational {
        &(&jet.d2g[a][i][j][m] + &jet.d2g[a][j][i][m]) - &jet.d2g[a][m][i][j]
    };
    let d2s = |a: usize, b: usize, m: usize, i: usize, j: usize| -> Rational {
        &(&jet.d3g[a][b][i][j][m] + &jet.d3g[a][b][j][i][m]) - &jet.d3g[a][b][m][i][j]
    };
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    tensor3(n, |k, i, j| {
                        &half
                            * &sum(n, |m| {
                                let mut acc = &jet.d2ginv[a][b][k][m] * &s(m, i, j);
                                acc += &jet.dginv[a][k][m] * &ds(b, m, i, j);
                                acc += &jet.dginv[b][k][m] * &ds(a, m, i, j);
                                acc += &jet.ginv[k][m] * &d2s(a, b, m, i, j);
                                acc
                            })
                    })
                })
                .collect()
        })
        .collect()
}

/// Full Ricci tensor, quadratic terms included:
/// R_ij = d_t Gamma^t_ij - d_j Gamma^t_it + Gamma^t_tm Gamma^m_ij - Gamma^t_jm Gamma^m_it.
pub fn ricci_full_at(jet: &MetricJet) -> T2 {
    let n = jet.dimension();
    let gamma = christoffel_at(jet);
    let dgamma = christoffel_partials_at(jet);
    tensor2(n, |i, j| {
        let linear = sum(n, |t| &dgamma[t][t][i][j] - &dgamma[j][t][i][t]);
        let quad = sum2(n, |t, m| {
            &(&gamma[t][t][m] * &gamma[m][i][j]) - &(&gamma[t][j][m] * &gamma[m][i][t])
        });
        linear + quad
    })
}

/// Truncated Ricci tensor with the quadratic Christoffel terms dropped:
/// R_ij = d_t Gamma^t_ij - d_j Gamma^t_it. Not symmetric in general.
pub fn ricci_linear_at(jet: &MetricJet) -> T2 {
    let n = jet.dimension();
    let dgamma = christoffel_partials_at(jet);
    tensor2(n, |i, j| {
        sum(n, |t| &dgamma[t][t][i][j] - &dgamma[j][t][i][t])
    })
}

/// d_a R_ij by exact differentiation of the full or truncated formula.
/// Returned as [a][i][j]; needs a third-order jet.
pub fn ricci_partials_at(jet: &MetricJet, use_full: bool) -> T3 {
    assert!(jet.order() >= 3, "ricci partials need a jet of order 3");
    let n = jet.dimension();
    let gamma = christoffel_at(jet);
    let dgamma = christoffel_partials_at(jet);
    let d2gamma = christoffel_second_partials_at(jet);
    tensor3(n, |a, i, j| {
        let mut acc = sum(n, |t| &d2gamma[a][t][t][i][j] - &d2gamma[a][j][t][i][t]);
        if use_full {
            acc += sum2(n, |t, m| {
                let mut q = &dgamma[a][t][t][m] * &gamma[m][i][j];
                q += &gamma[t][t][m] * &dgamma[a][m][i][j];
                q -= &dgamma[a][t][j][m] * &gamma[m][i][t];
                q -= &gamma[t][j][m] * &dgamma[a][m][i][t];
                q
            });
        }
        acc
    })
}

/// Covariant derivative of a symmetric 2-tensor given its pointwise value
/// and partials: (nabla_a h)_ij = d_a h_ij - Gamma^m_ai h_mj - Gamma^m_aj h_im.
pub fn covariant_derivative_sym2_at(
    jet: &MetricJet,
    h: &T2,
    dh: &T3,
    axis: usize,
) -> Result<T2, Error> {
    let n = jet.dimension();
    assert!(axis < n, "axis out of range");
    for i in 0..n {
        for j in i + 1..n {
            if h[i][j] != h[j][i] {
                return Err(Error::AsymmetricTensor { i, j });
            }
        }
    }
    let gamma = christoffel_at(jet);
    Ok(tensor2(n, |i, j| {
        let mut acc = dh[axis][i][j].clone();
        for m in 0..n {
            acc -= &gamma[m][axis][i] * &h[m][j];
            acc -= &gamma[m][axis][j] * &h[i][m];
        }
        acc
    }))
}

/// Every curvature symbol at one point, in both the full and the truncated
/// flavor. The derivative slots stay empty below jet order 3.
#[derive(Debug, Clone)]
pub struct CurvatureBundle {
    pub gamma: T3,
    pub dgamma: T4,
    pub ricci_full: T2,
    pub ricci_linear: T2,
    pub dricci_full: T3,
    pub dricci_linear: T3,
}

impl CurvatureBundle {
    pub fn at(jet: &MetricJet) -> Self {
        assert!(jet.order() >= 2, "curvature bundle needs a jet of order >= 2");
        let (dricci_full, dricci_linear) = if jet.order() >= 3 {
            (ricci_partials_at(jet, true), ricci_partials_at(jet, false))
        } else {
            (Vec::new(), Vec::new())
        };
        CurvatureBundle {
            gamma: christoffel_at(jet),
            dgamma: christoffel_partials_at(jet),
            ricci_full: ricci_full_at(jet),
            ricci_linear: ricci_linear_at(jet),
            dricci_full,
            dricci_linear,
        }
    }
}

/// Largest absolute entry of a rank-2 block, used for gap measurements.
pub fn max_abs2(t: &T2) -> Rational {
    let mut best = Rational::zero();
    for row in t {
        for v in row {
            let a = v.abs();
            if a > best {
                best = a;
            }
        }
    }
    best
}

/// Largest absolute entry of a rank-3 block.
pub fn max_abs3(t: &T3) -> Rational {
    let mut best = Rational::zero();
    for block in t {
        let b = max_abs2(block);
        if b > best {
            best = b;
        }
    }
    best
}
