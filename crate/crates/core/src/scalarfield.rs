//! Exact multivariate polynomials with rational coefficients.
//!
//! `PolynomialField` is the scalar building block for every metric component:
//! a sparse map from exponent multi-indices to rational coefficients, with a
//! fixed ambient dimension. All ring operations, differentiation, linear
//! substitution and Taylor truncation are exact. Floating evaluation is a
//! one-way conversion for oracles and integrators.
//!
//! Arithmetic between fields of different dimensions is a caller bug and
//! panics; data-dependent failures (singular substitution matrices) return
//! `Error`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::linalg;
use crate::rational::{rat_to_f64, Rational};

/// Exponent multi-index; length equals the ambient dimension.
pub type MultiIndex = Vec<u32>;

/// A point with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Point {
    coords: Vec<Rational>,
}

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point { coords }
    }

    pub fn origin(dimension: usize) -> Self {
        Point {
            coords: vec![Rational::zero(); dimension],
        }
    }

    /// Point on the x1-axis: (x1, 0, ..., 0).
    pub fn on_axis(dimension: usize, x1: Rational) -> Self {
        let mut coords = vec![Rational::zero(); dimension];
        coords[0] = x1;
        Point { coords }
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Rational {
        &self.coords[i]
    }

    /// Returns the point shifted by `step` along `axis`.
    pub fn shifted(&self, axis: usize, step: &Rational) -> Self {
        let mut coords = self.coords.clone();
        coords[axis] += step;
        Point { coords }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(rat_to_f64).collect()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Sparse exact polynomial in `dimension` variables x1..xn.
///
/// Invariants: no stored zero coefficients; every key has length `dimension`;
/// keys live in a `BTreeMap`, so iteration order is canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialField {
    dimension: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl PolynomialField {
    pub fn zero(dimension: usize) -> Self {
        PolynomialField {
            dimension,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dimension: usize, c: Rational) -> Self {
        let mut p = Self::zero(dimension);
        p.add_term(vec![0; dimension], c);
        p
    }

    pub fn one(dimension: usize) -> Self {
        Self::constant(dimension, Rational::one())
    }

    /// The coordinate function `x_{axis+1}` (0-based axis).
    pub fn variable(dimension: usize, axis: usize) -> Self {
        assert!(axis < dimension, "axis {axis} out of range for dimension {dimension}");
        let mut exps = vec![0; dimension];
        exps[axis] = 1;
        let mut p = Self::zero(dimension);
        p.add_term(exps, Rational::one());
        p
    }

    /// Single monomial `c * x^exps`.
    pub fn monomial(dimension: usize, exps: MultiIndex, c: Rational) -> Self {
        assert_eq!(exps.len(), dimension, "multi-index length mismatch");
        let mut p = Self::zero(dimension);
        p.add_term(exps, c);
        p
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Largest total degree among stored terms; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// Accumulates `c * x^exps`, dropping the entry if it cancels to zero.
    pub fn add_term(&mut self, exps: MultiIndex, c: Rational) {
        assert_eq!(exps.len(), self.dimension, "multi-index length mismatch");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn assert_same_dimension(&self, other: &Self) {
        assert_eq!(
            self.dimension, other.dimension,
            "polynomial dimensions differ ({} vs {})",
            self.dimension, other.dimension
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_dimension(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.negate())
    }

    pub fn negate(&self) -> Self {
        PolynomialField {
            dimension: self.dimension,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_dimension(other);
        let mut out = Self::zero(self.dimension);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let exps: MultiIndex = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.dimension);
        }
        PolynomialField {
            dimension: self.dimension,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(self.dimension);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Exact value at a rational point. Panics on dimension mismatch.
    pub fn eval(&self, x: &Point) -> Rational {
        assert_eq!(
            x.dimension(),
            self.dimension,
            "point dimension {} does not match polynomial dimension {}",
            x.dimension(),
            self.dimension
        );
        let mut acc = Rational::zero();
        for (exps, c) in &self.terms {
            let mut term = c.clone();
            for (e, xi) in exps.iter().zip(x.coords()) {
                for _ in 0..*e {
                    term *= xi;
                }
            }
            acc += term;
        }
        acc
    }

    /// Floating evaluation; the conversion boundary for integrators and oracles.
    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dimension, "point dimension mismatch");
        let mut acc = 0.0;
        for (exps, c) in &self.terms {
            let mut term = rat_to_f64(c);
            for (e, xi) in exps.iter().zip(x) {
                term *= xi.powi(*e as i32);
            }
            acc += term;
        }
        acc
    }

    /// Exact partial derivative along `axis` (0-based). Panics if out of range.
    pub fn partial(&self, axis: usize) -> Self {
        assert!(
            axis < self.dimension,
            "axis {axis} out of range for dimension {}",
            self.dimension
        );
        let mut out = Self::zero(self.dimension);
        for (exps, c) in &self.terms {
            let e = exps[axis];
            if e == 0 {
                continue;
            }
            let mut m = exps.clone();
            m[axis] = e - 1;
            out.add_term(m, c * Rational::from_integer(e.into()));
        }
        out
    }

    /// Substitutes `x_i -> forms[i]`; all forms must share this dimension.
    pub fn substitute(&self, forms: &[PolynomialField]) -> Self {
        assert_eq!(forms.len(), self.dimension, "one substitution form per variable");
        for f in forms {
            self.assert_same_dimension(f);
        }
        // cache powers of each form up to its maximal exponent
        let max_exp: Vec<u32> = (0..self.dimension)
            .map(|i| self.terms.keys().map(|m| m[i]).max().unwrap_or(0))
            .collect();
        let mut powers: Vec<Vec<PolynomialField>> = Vec::with_capacity(self.dimension);
        for (i, f) in forms.iter().enumerate() {
            let mut ps = vec![Self::one(self.dimension)];
            for e in 1..=max_exp[i] {
                ps.push(ps[(e - 1) as usize].mul(f));
            }
            powers.push(ps);
        }
        let mut out = Self::zero(self.dimension);
        for (exps, c) in &self.terms {
            let mut term = Self::constant(self.dimension, c.clone());
            for (i, e) in exps.iter().enumerate() {
                if *e > 0 {
                    term = term.mul(&powers[i][*e as usize]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Returns `p(L x)` for an invertible rational matrix `L`.
    pub fn compose_linear(&self, l: &[Vec<Rational>]) -> Result<Self, Error> {
        let n = self.dimension;
        assert_eq!(l.len(), n, "matrix size mismatch");
        if linalg::det(l).is_zero() {
            return Err(Error::SingularMatrix);
        }
        let forms: Vec<PolynomialField> = (0..n)
            .map(|i| {
                let mut f = Self::zero(n);
                for (j, c) in l[i].iter().enumerate() {
                    let mut exps = vec![0; n];
                    exps[j] = 1;
                    f.add_term(exps, c.clone());
                }
                f
            })
            .collect();
        Ok(self.substitute(&forms))
    }

    /// Returns `p(x + c)`.
    pub fn translate(&self, c: &Point) -> Self {
        assert_eq!(c.dimension(), self.dimension, "point dimension mismatch");
        let n = self.dimension;
        let forms: Vec<PolynomialField> = (0..n)
            .map(|i| {
                let mut f = Self::variable(n, i);
                f.add_term(vec![0; n], c.coord(i).clone());
                f
            })
            .collect();
        self.substitute(&forms)
    }

    /// Drops all terms of total degree above `max_degree`.
    pub fn truncate_total_degree(&self, max_degree: u32) -> Self {
        PolynomialField {
            dimension: self.dimension,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.iter().sum::<u32>() <= max_degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Taylor polynomial about `center` up to total degree `max_degree`,
    /// re-expressed in the original coordinates.
    pub fn taylor_truncate(&self, center: &Point, max_degree: u32) -> Self {
        let shifted = self.translate(center); // q(y) = p(center + y)
        let truncated = shifted.truncate_total_degree(max_degree);
        let neg_center = Point::new(center.coords().iter().map(|c| -c).collect());
        truncated.translate(&neg_center)
    }

    /// Sets every coordinate except `axis` to zero: the restriction to the
    /// coordinate axis, kept in the ambient dimension.
    pub fn restrict_to_axis(&self, axis: usize) -> Self {
        assert!(axis < self.dimension, "axis out of range");
        let mut out = Self::zero(self.dimension);
        for (exps, c) in &self.terms {
            if exps
                .iter()
                .enumerate()
                .all(|(i, e)| i == axis || *e == 0)
            {
                out.add_term(exps.clone(), c.clone());
            }
        }
        out
    }
}

impl Add for &PolynomialField {
    type Output = PolynomialField;
    fn add(self, rhs: Self) -> PolynomialField {
        PolynomialField::add(self, rhs)
    }
}

impl Sub for &PolynomialField {
    type Output = PolynomialField;
    fn sub(self, rhs: Self) -> PolynomialField {
        PolynomialField::sub(self, rhs)
    }
}

impl Mul for &PolynomialField {
    type Output = PolynomialField;
    fn mul(self, rhs: Self) -> PolynomialField {
        PolynomialField::mul(self, rhs)
    }
}

impl Neg for &PolynomialField {
    type Output = PolynomialField;
    fn neg(self) -> PolynomialField {
        self.negate()
    }
}

impl fmt::Display for PolynomialField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, c) in &self.terms {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            let is_const = exps.iter().all(|e| *e == 0);
            if !mag.is_one() || is_const {
                write!(f, "{mag}")?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut sep = "";
            for (i, e) in exps.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                write!(f, "{sep}x{}", i + 1)?;
                if *e > 1 {
                    write!(f, "^{e}")?;
                }
                sep = "*";
            }
        }
        Ok(())
    }
}

// Serialization: {"dimension": n, "terms": [{"exponents": [...], "coeff": "num/den"}, ...]}
#[derive(Serialize, Deserialize)]
struct TermRecord {
    exponents: Vec<u32>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct PolyRecord {
    dimension: usize,
    terms: Vec<TermRecord>,
}

impl Serialize for PolynomialField {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        PolyRecord {
            dimension: self.dimension,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRecord {
                    exponents: m.clone(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for PolynomialField {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let rec = PolyRecord::deserialize(de)?;
        let mut p = PolynomialField::zero(rec.dimension);
        for t in rec.terms {
            if t.exponents.len() != rec.dimension {
                return Err(D::Error::custom("exponent tuple length != dimension"));
            }
            let c = crate::rational::parse_rational(&t.coeff).map_err(D::Error::custom)?;
            p.add_term(t.exponents, c);
        }
        Ok(p)
    }
}

// Point serializes as a list of rational strings.
impl Serialize for Point {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_seq(self.coords.iter().map(|c| c.to_string()))
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let strs = Vec::<String>::deserialize(de)?;
        let coords = strs
            .iter()
            .map(|s| crate::rational::parse_rational(s).map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Point::new(coords))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn p_x1sq_x2() -> PolynomialField {
        // x1^2 * x2 in three variables
        PolynomialField::monomial(3, vec![2, 1, 0], rat_int(1))
    }

    #[test]
    fn eval_direct_substitution() {
        let p = p_x1sq_x2();
        let x = Point::new(vec![rat_int(1), rat_int(1), rat_int(0)]);
        assert_eq!(p.eval(&x), rat_int(1));

        let zero = PolynomialField::zero(3);
        assert_eq!(zero.eval(&x), rat_int(0));

        let half = PolynomialField::monomial(3, vec![2, 1, 0], rat(1, 2));
        let y = Point::new(vec![rat_int(2), rat_int(3), rat_int(0)]);
        assert_eq!(half.eval(&y), rat_int(6));
    }

    #[test]
    fn partial_power_rule() {
        let p = p_x1sq_x2();
        let d1 = p.partial(0);
        let mut expect = PolynomialField::zero(3);
        expect.add_term(vec![1, 1, 0], rat_int(2));
        assert_eq!(d1, expect);

        assert!(p.partial(2).is_zero());

        // third mixed partial of (1/2) x1^2 x2 is the constant 1
        let half = PolynomialField::monomial(3, vec![2, 1, 0], rat(1, 2));
        let third = half.partial(0).partial(0).partial(1);
        assert_eq!(third, PolynomialField::constant(3, rat_int(1)));
    }

    #[test]
    fn ring_ops() {
        let x1 = PolynomialField::variable(3, 0);
        let x2 = PolynomialField::variable(3, 1);
        assert!((&x1 + &x1.negate()).is_zero());
        assert_eq!(
            &x1 * &x2,
            PolynomialField::monomial(3, vec![1, 1, 0], rat_int(1))
        );
        let sq = &x1 * &x1;
        assert_eq!(
            sq.scale(&rat(1, 2)),
            PolynomialField::monomial(3, vec![2, 0, 0], rat(1, 2))
        );
    }

    #[test]
    fn compose_linear_identity_and_swap() {
        let x1 = PolynomialField::variable(2, 0);
        let id = vec![
            vec![rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(1)],
        ];
        assert_eq!(x1.compose_linear(&id).unwrap(), x1);

        let swap = vec![
            vec![rat_int(0), rat_int(1)],
            vec![rat_int(1), rat_int(0)],
        ];
        assert_eq!(
            x1.compose_linear(&swap).unwrap(),
            PolynomialField::variable(2, 1)
        );

        let singular = vec![
            vec![rat_int(1), rat_int(1)],
            vec![rat_int(2), rat_int(2)],
        ];
        assert!(matches!(
            x1.compose_linear(&singular),
            Err(Error::SingularMatrix)
        ));
    }

    #[test]
    fn taylor_truncate_examples() {
        // degree <= max_degree about the origin: unchanged
        let p = p_x1sq_x2();
        assert_eq!(p.taylor_truncate(&Point::origin(3), 3), p);

        // x1^3 truncated to degree 2 about 0 vanishes
        let cube = PolynomialField::monomial(3, vec![3, 0, 0], rat_int(1));
        assert!(cube.taylor_truncate(&Point::origin(3), 2).is_zero());

        // x1^3 about (1,0,0) to degree 1 is 1 + 3(x1 - 1) = 3 x1 - 2
        let center = Point::new(vec![rat_int(1), rat_int(0), rat_int(0)]);
        let lin = cube.taylor_truncate(&center, 1);
        let mut expect = PolynomialField::zero(3);
        expect.add_term(vec![1, 0, 0], rat_int(3));
        expect.add_term(vec![0, 0, 0], rat_int(-2));
        assert_eq!(lin, expect);

        // evaluation oracle: near the center the linearization is accurate to O(|d|^2)
        for d in [rat(1, 100), rat(-1, 150)] {
            let x = Point::new(vec![&rat_int(1) + &d, rat_int(0), rat_int(0)]);
            let gap = (cube.eval(&x) - lin.eval(&x)).abs();
            assert!(gap <= &(&d * &d) * &rat_int(4), "gap {gap} too large for step {d}");
        }
    }

    #[test]
    fn serde_roundtrip_keeps_exact_coefficients() {
        let mut p = PolynomialField::zero(2);
        p.add_term(vec![2, 1], rat(-7, 3));
        p.add_term(vec![0, 0], rat(1, 2));
        let json = serde_json::to_string(&p).unwrap();
        assert!(json.contains("-7/3"));
        let back: PolynomialField = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn display_reads_naturally() {
        let mut p = PolynomialField::zero(2);
        p.add_term(vec![2, 1], rat(-1, 2));
        p.add_term(vec![1, 0], rat_int(3));
        assert_eq!(p.to_string(), "3*x1 - 1/2*x1^2*x2");
    }

    #[test]
    fn restriction_keeps_only_axis_terms() {
        let mut p = PolynomialField::zero(3);
        p.add_term(vec![2, 0, 0], rat_int(5));
        p.add_term(vec![1, 1, 0], rat_int(7));
        let r = p.restrict_to_axis(0);
        assert_eq!(r, PolynomialField::monomial(3, vec![2, 0, 0], rat_int(5)));
    }
}
