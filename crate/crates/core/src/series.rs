//! Truncated multivariate formal power series with exact rational coefficients.
//!
//! Variables are the curve-class basis elements, a monomial `q^d` is keyed by
//! the exponent vector `d`, and truncation is by grading degree: a series of
//! order `K` stores exactly the terms with `deg(d) ≤ K`. Exponents may have
//! negative components (effective classes need not be nonnegative in the
//! curve basis) but every stored term has nonnegative degree.
//!
//! Terms are kept in canonical order `(degree, exponent)`, which is also the
//! order of the textual rendering.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::geom::Grading;

pub type Rational = BigRational;
pub type Exponent = Vec<i64>;

type Homogeneous = BTreeMap<Exponent, Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series have different gradings")]
    GradingMismatch,
    #[error("exponent {exponent:?} has {found} entries, expected {expected}")]
    Arity {
        exponent: Exponent,
        expected: usize,
        found: usize,
    },
    #[error("term q^{exponent:?} has negative degree {degree}")]
    NegativeDegree { exponent: Exponent, degree: i64 },
    #[error("constant term must be {expected}, found {found}")]
    BadConstantTerm { expected: String, found: String },
    #[error("non-constant term q^{exponent:?} has degree 0")]
    DegreeZeroTerm { exponent: Exponent },
    #[error("series is not invertible (constant term is zero)")]
    NotAUnit,
    #[error("exponent of degree {degree} is beyond truncation order {order}")]
    ExponentBeyondOrder { degree: i64, order: i64 },
    #[error("substitution is not grading compatible for variable {variable}: {reason}")]
    SubstitutionNotGradingCompatible { variable: usize, reason: String },
}

/// A series `Σ c_d q^d` truncated at grading degree `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    grading: Grading,
    order: i64,
    terms: BTreeMap<(i64, Exponent), Rational>,
}

impl QSeries {
    pub fn zero(grading: &Grading, order: i64) -> Self {
        QSeries {
            grading: grading.clone(),
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(grading: &Grading, order: i64, c: Rational) -> Self {
        let mut s = Self::zero(grading, order);
        if !c.is_zero() && order >= 0 {
            s.terms.insert((0, vec![0; grading.rank()]), c);
        }
        s
    }

    pub fn one(grading: &Grading, order: i64) -> Self {
        Self::constant(grading, order, Rational::one())
    }

    /// `c · q^exponent`, or zero if the monomial lies beyond `order`.
    pub fn monomial(
        grading: &Grading,
        order: i64,
        exponent: Exponent,
        c: Rational,
    ) -> Result<Self, SeriesError> {
        Self::from_terms(grading, order, [(exponent, c)])
    }

    /// Builds a series from `(exponent, coefficient)` pairs, summing repeats
    /// and dropping terms beyond `order`.
    pub fn from_terms<I>(grading: &Grading, order: i64, terms: I) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = (Exponent, Rational)>,
    {
        let mut s = Self::zero(grading, order);
        for (e, c) in terms {
            if e.len() != grading.rank() {
                return Err(SeriesError::Arity {
                    found: e.len(),
                    expected: grading.rank(),
                    exponent: e,
                });
            }
            let deg = grading.degree(&e);
            if deg < 0 {
                return Err(SeriesError::NegativeDegree {
                    exponent: e,
                    degree: deg,
                });
            }
            s.add_term(deg, e, c);
        }
        Ok(s)
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    /// Number of stored (nonzero) terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter().map(|((_, e), c)| (e, c))
    }

    pub fn constant_term(&self) -> Rational {
        let zero = vec![0; self.grading.rank()];
        self.terms
            .get(&(0, zero))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Coefficient of `q^exponent`. Asking beyond the truncation order is an
    /// error: the caller must recompute at a higher order.
    pub fn coefficient(&self, exponent: &[i64]) -> Result<Rational, SeriesError> {
        if exponent.len() != self.grading.rank() {
            return Err(SeriesError::Arity {
                exponent: exponent.to_vec(),
                expected: self.grading.rank(),
                found: exponent.len(),
            });
        }
        let deg = self.grading.degree(exponent);
        if deg > self.order {
            return Err(SeriesError::ExponentBeyondOrder {
                degree: deg,
                order: self.order,
            });
        }
        Ok(self
            .terms
            .get(&(deg, exponent.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero))
    }

    /// Drops every term of degree above `order` (never raises the order).
    pub fn truncate(&self, order: i64) -> Self {
        let order = order.min(self.order);
        QSeries {
            grading: self.grading.clone(),
            order,
            terms: self
                .terms
                .iter()
                .filter(|((d, _), _)| *d <= order)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.grading, self.order);
        }
        QSeries {
            grading: self.grading.clone(),
            order: self.order,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.same_grading(other)?;
        let mut out = self.truncate(other.order);
        for ((d, e), c) in &other.terms {
            if *d <= out.order {
                out.add_term(*d, e.clone(), c.clone());
            }
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.same_grading(other)?;
        let order = self.order.min(other.order);
        let mut out = Self::zero(&self.grading, order);
        for ((da, ea), ca) in &self.terms {
            if *da > order {
                break;
            }
            for ((db, eb), cb) in &other.terms {
                let d = da + db;
                if d > order {
                    break;
                }
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(d, e, ca * cb);
            }
        }
        Ok(out)
    }

    /// Multiplies by the monomial `q^shift`; terms pushed past the order are
    /// dropped. Fails if a shifted term would have negative degree.
    pub fn shift(&self, shift: &[i64]) -> Result<Self, SeriesError> {
        let ds = self.grading.degree(shift);
        let mut out = Self::zero(&self.grading, self.order);
        for ((d, e), c) in &self.terms {
            let deg = d + ds;
            let e: Exponent = e.iter().zip(shift).map(|(x, y)| x + y).collect();
            if deg < 0 {
                return Err(SeriesError::NegativeDegree {
                    exponent: e,
                    degree: deg,
                });
            }
            out.add_term(deg, e, c.clone());
        }
        Ok(out)
    }

    /// Returns a copy carrying a different truncation order. Raising the order
    /// asserts that the missing terms are zero; use only for exact data.
    pub fn with_order(&self, order: i64) -> Self {
        let mut s = self.truncate(order);
        s.order = order;
        s
    }

    /// `exp(s)`; the constant term of `s` must be zero.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        let c = self.constant_term();
        if !c.is_zero() {
            return Err(SeriesError::BadConstantTerm {
                expected: "0".into(),
                found: c.to_string(),
            });
        }
        let s = self.graded_parts()?;
        // degree derivation: n r_n = Σ_{k=1}^{n} k s_k r_{n-k}
        let mut r: Vec<Homogeneous> = vec![self.unit_part(Rational::one())];
        for n in 1..=self.order.max(0) as usize {
            let mut acc = Homogeneous::new();
            for k in 1..=n {
                mul_homogeneous(
                    &mut acc,
                    &s[k],
                    &r[n - k],
                    &Rational::from_integer(k.into()),
                );
            }
            let inv_n = Rational::new(BigInt::one(), BigInt::from(n));
            scale_homogeneous(&mut acc, &inv_n);
            r.push(acc);
        }
        Ok(self.collect_graded(r))
    }

    /// `log(u)`; the constant term of `u` must be one.
    pub fn log(&self) -> Result<Self, SeriesError> {
        let c = self.constant_term();
        if !c.is_one() {
            return Err(SeriesError::BadConstantTerm {
                expected: "1".into(),
                found: c.to_string(),
            });
        }
        let u = self.graded_parts()?;
        // n L_n = n u_n − Σ_{k=1}^{n−1} k L_k u_{n−k}
        let mut l: Vec<Homogeneous> = vec![Homogeneous::new()];
        for n in 1..=self.order.max(0) as usize {
            let mut acc = Homogeneous::new();
            for k in 1..n {
                mul_homogeneous(
                    &mut acc,
                    &l[k],
                    &u[n - k],
                    &Rational::from_integer(k.into()),
                );
            }
            let inv_n = Rational::new(BigInt::one(), BigInt::from(n));
            scale_homogeneous(&mut acc, &-inv_n);
            for (e, c) in &u[n] {
                add_homogeneous(&mut acc, e.clone(), c.clone());
            }
            l.push(acc);
        }
        Ok(self.collect_graded(l))
    }

    /// Multiplicative inverse of a series with nonzero constant term.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(SeriesError::NotAUnit);
        }
        let u = self.graded_parts()?;
        let c_inv = c.recip();
        let mut v: Vec<Homogeneous> = vec![self.unit_part(c_inv.clone())];
        for n in 1..=self.order.max(0) as usize {
            let mut acc = Homogeneous::new();
            for k in 1..=n {
                mul_homogeneous(&mut acc, &u[k], &v[n - k], &Rational::one());
            }
            scale_homogeneous(&mut acc, &-c_inv.clone());
            v.push(acc);
        }
        Ok(self.collect_graded(v))
    }

    /// Integer power; negative exponents require a unit.
    pub fn powi(&self, k: i64) -> Result<Self, SeriesError> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one(&self.grading, self.order);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Homogeneous degree-`deg` part as a series of the same order.
    pub fn homogeneous(&self, deg: i64) -> Self {
        QSeries {
            grading: self.grading.clone(),
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|((d, _), _)| *d == deg)
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Canonical one-term-per-line rendering, `NUM/DEN q^[a,b,…]`.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        for (e, c) in self.iter() {
            out.push_str(&format!("{}/{} q^{}\n", c.numer(), c.denom(), bracket(e)));
        }
        out
    }

    /// Inline rendering such as `1 - 2*q + 5*q^2`, with `names[k]` the name
    /// of variable `k`.
    pub fn inline(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.iter().enumerate() {
            let mono = monomial_text(e, names);
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (abs.is_one(), mono.is_empty()) {
                (true, true) => out.push('1'),
                (true, false) => out.push_str(&mono),
                (false, true) => out.push_str(&abs.to_string()),
                (false, false) => out.push_str(&format!("{abs}*{mono}")),
            }
        }
        out
    }

    fn same_grading(&self, other: &Self) -> Result<(), SeriesError> {
        if self.grading == other.grading {
            Ok(())
        } else {
            Err(SeriesError::GradingMismatch)
        }
    }

    fn add_term(&mut self, deg: i64, e: Exponent, c: Rational) {
        if deg > self.order || c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((deg, e)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn unit_part(&self, c: Rational) -> Homogeneous {
        let mut h = Homogeneous::new();
        if !c.is_zero() {
            h.insert(vec![0; self.grading.rank()], c);
        }
        h
    }

    // Homogeneous components of degree 0..=order. Degree zero may only hold
    // the constant term.
    fn graded_parts(&self) -> Result<Vec<Homogeneous>, SeriesError> {
        let len = self.order.max(0) as usize + 1;
        let mut parts = vec![Homogeneous::new(); len];
        for ((d, e), c) in &self.terms {
            if *d == 0 && e.iter().any(|&x| x != 0) {
                return Err(SeriesError::DegreeZeroTerm {
                    exponent: e.clone(),
                });
            }
            parts[*d as usize].insert(e.clone(), c.clone());
        }
        Ok(parts)
    }

    fn collect_graded(&self, parts: Vec<Homogeneous>) -> Self {
        let mut s = Self::zero(&self.grading, self.order);
        for (d, part) in parts.into_iter().enumerate() {
            for (e, c) in part {
                s.add_term(d as i64, e, c);
            }
        }
        s
    }
}

fn add_homogeneous(acc: &mut Homogeneous, e: Exponent, c: Rational) {
    use std::collections::btree_map::Entry;
    match acc.entry(e) {
        Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
        Entry::Occupied(mut o) => {
            let sum = o.get() + c;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

fn mul_homogeneous(acc: &mut Homogeneous, a: &Homogeneous, b: &Homogeneous, scale: &Rational) {
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            add_homogeneous(acc, e, ca * cb * scale);
        }
    }
}

fn scale_homogeneous(acc: &mut Homogeneous, c: &Rational) {
    for v in acc.values_mut() {
        *v = &*v * c;
    }
}

pub(crate) fn bracket(e: &[i64]) -> String {
    let inner: Vec<String> = e.iter().map(i64::to_string).collect();
    format!("[{}]", inner.join(","))
}

/// Text of `q^e` as a product of named powers; empty for the unit monomial.
pub fn monomial_text(e: &[i64], names: &[String]) -> String {
    let mut parts = Vec::new();
    for (k, &a) in e.iter().enumerate() {
        match a {
            0 => {}
            1 => parts.push(names[k].clone()),
            _ => parts.push(format!("{}^{}", names[k], a)),
        }
    }
    parts.join("*")
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl Add for &QSeries {
    type Output = QSeries;

    /// Panics on grading mismatch; see [`QSeries::checked_add`].
    fn add(self, rhs: &QSeries) -> QSeries {
        self.checked_add(rhs)
            .expect("grading mismatch in series addition")
    }
}

impl Sub for &QSeries {
    type Output = QSeries;

    fn sub(self, rhs: &QSeries) -> QSeries {
        self.checked_sub(rhs)
            .expect("grading mismatch in series subtraction")
    }
}

impl Mul for &QSeries {
    type Output = QSeries;

    fn mul(self, rhs: &QSeries) -> QSeries {
        self.checked_mul(rhs)
            .expect("grading mismatch in series product")
    }
}

impl Neg for &QSeries {
    type Output = QSeries;

    fn neg(self) -> QSeries {
        self.scale(&-Rational::one())
    }
}

/// A substitution image `q̌_k ↦ q^monomial · unit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitImage {
    pub monomial: Exponent,
    pub unit: QSeries,
}

impl UnitImage {
    /// Splits a series into its unique lowest-degree monomial and a unit.
    pub fn factor(image: &QSeries, variable: usize) -> Result<Self, SeriesError> {
        let mut iter = image.terms.iter();
        let Some(((d0, e0), _)) = iter.next() else {
            return Err(SeriesError::SubstitutionNotGradingCompatible {
                variable,
                reason: "image is zero".into(),
            });
        };
        if let Some(((d1, _), _)) = iter.next() {
            if d1 == d0 {
                return Err(SeriesError::SubstitutionNotGradingCompatible {
                    variable,
                    reason: "image has no unique leading monomial".into(),
                });
            }
        }
        let neg: Exponent = e0.iter().map(|x| -x).collect();
        let unit = image.shift(&neg)?.with_order(image.order - d0);
        Ok(UnitImage {
            monomial: e0.clone(),
            unit,
        })
    }
}

/// Formal composition `s(q̌ ↦ image_k(q))` truncated at the exact order.
///
/// Every image must be a single lowest-degree monomial times a unit, of
/// degree at least the degree of its source variable. The result order is
/// lowered if the images are not precise enough to determine all terms up to
/// `s.order()`.
pub fn substitute(s: &QSeries, images: &[QSeries]) -> Result<QSeries, SeriesError> {
    let factored = images
        .iter()
        .enumerate()
        .map(|(k, im)| UnitImage::factor(im, k))
        .collect::<Result<Vec<_>, _>>()?;
    substitute_units(s, &factored)
}

/// [`substitute`] with images already split as monomial × unit. A unit of
/// order `R` is taken as exact to relative degree `R`.
pub fn substitute_units(s: &QSeries, images: &[UnitImage]) -> Result<QSeries, SeriesError> {
    let source = s.grading();
    if images.len() != source.rank() {
        return Err(SeriesError::Arity {
            exponent: vec![],
            expected: source.rank(),
            found: images.len(),
        });
    }
    let Some(target) = images.first().map(|im| im.unit.grading().clone()) else {
        return Ok(s.clone());
    };
    if images.iter().any(|im| im.unit.grading() != &target) {
        return Err(SeriesError::GradingMismatch);
    }
    for (k, im) in images.iter().enumerate() {
        if im.unit.constant_term().is_zero() {
            return Err(SeriesError::SubstitutionNotGradingCompatible {
                variable: k,
                reason: "unit part has zero constant term".into(),
            });
        }
        let has_negative = s.iter().any(|(e, _)| e[k] < 0);
        let dm = target.degree(&im.monomial);
        let w = source.weights()[k];
        if dm < w || (has_negative && dm != w) {
            return Err(SeriesError::SubstitutionNotGradingCompatible {
                variable: k,
                reason: format!("image degree {dm} vs variable degree {w}"),
            });
        }
    }

    let mut order = s.order();
    for (e, _) in s.iter() {
        let support: Vec<usize> = (0..e.len()).filter(|&k| e[k] != 0).collect();
        if support.is_empty() {
            continue;
        }
        let shift = combine(images, e);
        let precision = support
            .iter()
            .map(|&k| images[k].unit.order())
            .min()
            .unwrap();
        order = order.min(target.degree(&shift) + precision);
    }

    let mut out = QSeries::zero(&target, order);
    let mut powers: BTreeMap<(usize, i64), QSeries> = BTreeMap::new();
    for (e, c) in s.iter() {
        let shift = combine(images, e);
        let sd = target.degree(&shift);
        if sd > order {
            continue;
        }
        let rel = order - sd;
        let mut body = QSeries::constant(&target, rel, c.clone());
        for (k, &a) in e.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if let std::collections::btree_map::Entry::Vacant(slot) = powers.entry((k, a)) {
                let unit = &images[k].unit;
                slot.insert(unit.with_order(unit.order().min(order)).powi(a)?);
            }
            body = body.checked_mul(&powers[&(k, a)].truncate(rel))?;
        }
        // the body is known to relative order `rel`, so after the shift it
        // is exact through `order`
        for (be, bc) in body.iter() {
            let e: Exponent = be.iter().zip(&shift).map(|(x, y)| x + y).collect();
            out.add_term(target.degree(&e), e, bc.clone());
        }
    }
    Ok(out)
}

fn combine(images: &[UnitImage], e: &[i64]) -> Exponent {
    let len = images[0].monomial.len();
    let mut shift = vec![0; len];
    for (k, &a) in e.iter().enumerate() {
        for (x, y) in shift.iter_mut().zip(&images[k].monomial) {
            *x += a * y;
        }
    }
    shift
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn uni(order: i64, coeffs: &[(i64, Rational)]) -> QSeries {
        let g = Grading::ones(1);
        QSeries::from_terms(&g, order, coeffs.iter().map(|(k, c)| (vec![*k], c.clone()))).unwrap()
    }

    #[test]
    fn ring_examples() {
        let a = uni(2, &[(0, r(1, 1)), (1, r(1, 1))]);
        let b = uni(2, &[(0, r(1, 1)), (1, r(-1, 1))]);
        assert_eq!(&a * &b, uni(2, &[(0, r(1, 1)), (2, r(-1, 1))]));
        assert!((&a * &QSeries::zero(&Grading::ones(1), 2)).is_zero());
        let c = uni(2, &[(0, r(1, 1)), (1, r(1, 1)), (2, r(1, 1))]);
        assert_eq!(&c * &a, uni(2, &[(0, r(1, 1)), (1, r(2, 1)), (2, r(2, 1))]));
    }

    #[test]
    fn grading_mismatch() {
        let a = QSeries::one(&Grading::ones(1), 2);
        let b = QSeries::one(&Grading::new(vec![2]).unwrap(), 2);
        assert_eq!(a.checked_add(&b), Err(SeriesError::GradingMismatch));
        assert_eq!(a.checked_mul(&b), Err(SeriesError::GradingMismatch));
    }

    #[test]
    fn exp_log_examples() {
        let u = uni(3, &[(0, r(1, 1)), (1, r(1, 1))]);
        assert_eq!(
            u.log().unwrap(),
            uni(3, &[(1, r(1, 1)), (2, r(-1, 2)), (3, r(1, 3))])
        );
        let u = uni(2, &[(0, r(1, 1)), (1, r(1, 1)), (2, r(5, 1))]);
        assert_eq!(u.log().unwrap().exp().unwrap(), u);
        let s = uni(2, &[(1, r(1, 1)), (2, r(3, 2))]);
        assert_eq!(
            s.exp().unwrap(),
            uni(2, &[(0, r(1, 1)), (1, r(1, 1)), (2, r(2, 1))])
        );
        assert!(matches!(u.exp(), Err(SeriesError::BadConstantTerm { .. })));
        assert!(matches!(s.log(), Err(SeriesError::BadConstantTerm { .. })));
    }

    #[test]
    fn substitution_examples() {
        let g = Grading::ones(1);
        let map = vec![uni(3, &[(1, r(1, 1)), (2, r(-2, 1))])];
        let s = uni(3, &[(1, r(1, 1))]);
        assert_eq!(
            substitute(&s, &map).unwrap(),
            uni(3, &[(1, r(1, 1)), (2, r(-2, 1))])
        );
        let s = uni(3, &[(2, r(1, 1))]);
        assert_eq!(
            substitute(&s, &map).unwrap(),
            uni(3, &[(2, r(1, 1)), (3, r(-4, 1))])
        );
        let one = QSeries::one(&g, 3);
        assert_eq!(substitute(&one, &map).unwrap(), one);
        let bad = vec![uni(3, &[(0, r(1, 1)), (1, r(1, 1))])];
        assert!(matches!(
            substitute(&s, &bad),
            Err(SeriesError::SubstitutionNotGradingCompatible { .. })
        ));
    }

    #[test]
    fn substitution_with_negative_exponent() {
        // weights (1, 3); source q̌1^-2 q̌2 (degree 1) under q̌k ↦ qk (1 + qk-ish)
        let g = Grading::new(vec![1, 3]).unwrap();
        let s = QSeries::monomial(&g, 4, vec![-2, 1], r(1, 1)).unwrap();
        let im1 =
            QSeries::from_terms(&g, 5, [(vec![1, 0], r(1, 1)), (vec![2, 0], r(1, 1))]).unwrap();
        let im2 = QSeries::from_terms(&g, 7, [(vec![0, 1], r(1, 1))]).unwrap();
        let out = substitute(&s, &[im1, im2]).unwrap();
        // q1^-2 q2 (1 + q1)^-2 = q1^-2 q2 (1 - 2 q1 + 3 q1^2 - 4 q1^3)
        let expect = QSeries::from_terms(
            &g,
            4,
            [
                (vec![-2, 1], r(1, 1)),
                (vec![-1, 1], r(-2, 1)),
                (vec![0, 1], r(3, 1)),
                (vec![1, 1], r(-4, 1)),
            ],
        )
        .unwrap();
        assert_eq!(out, expect);
    }

    #[test]
    fn coefficient_guard() {
        let s = uni(1, &[(0, r(1, 1)), (1, r(2, 1))]);
        assert_eq!(s.coefficient(&[1]).unwrap(), r(2, 1));
        assert!(matches!(
            s.coefficient(&[2]),
            Err(SeriesError::ExponentBeyondOrder { .. })
        ));
        assert_eq!(
            QSeries::zero(&Grading::ones(1), 3)
                .coefficient(&[2])
                .unwrap(),
            r(0, 1)
        );
    }

    #[test]
    fn canonical_rendering() {
        let s = uni(2, &[(0, r(1, 1)), (2, r(-3, 2))]);
        assert_eq!(s.canonical(), "1/1 q^[0]\n-3/2 q^[2]\n");
        assert_eq!(s.inline(&["q".into()]), "1 - 3/2*q^2");
    }
}
