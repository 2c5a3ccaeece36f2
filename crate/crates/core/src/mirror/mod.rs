//! Hypergeometric series, mirror map and open Gromov-Witten generating series.
//!
//! For a ray `j`, the classes `d` with `D_j·d < 0` and `D_p·d ≥ 0` otherwise
//! are exactly `Σ_{i≠j} a_i (C_i − C_j)` with `a ≥ 0` balanced
//! (`Σ a_i (v_i − v_j) = 0`), and `a_i = D_i·d`. The series
//!
//! ```text
//! g_j(q̌) = Σ_d (−1)^{D_j·d} (−D_j·d − 1)! / Π_{p≠j} (D_p·d)! · q̌^d
//! ```
//!
//! runs over those classes. The mirror map is
//! `q_l = q̌_l exp(−Σ_k (D_k·C_l) g_k(q̌))` and the open invariants of the
//! basic disc `β_i` are generated by `exp g_i(q̌(q))`.

pub mod balanced;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::geom::{CurveClass, FanData, Grading};
use crate::series::{substitute_units, QSeries, Rational, UnitImage};
use crate::{Error, Result};

pub use balanced::{balanced_tuples, min_degree_per_unit, multinomial};

/// A balanced tuple for ray `j`: `a[j] = 0`, `p = Σ a_i`, and
/// `class = Σ a_i (C_i − C_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedTuple {
    pub j: usize,
    pub a: Vec<u64>,
    pub p: u64,
    pub class: CurveClass,
}

/// Classes with `deg ≤ order`, sorted by `(p, a)`.
pub fn enumerate_balanced(
    fan: &FanData,
    j: usize,
    order: i64,
    grading: &Grading,
) -> Result<Vec<BalancedTuple>> {
    fan.check_ray(j)?;
    let others: Vec<usize> = (0..fan.m()).filter(|&i| i != j).collect();
    let vectors: Vec<Vec<i64>> = others.iter().map(|&i| fan.z_exponent(i, j)).collect();
    let shifts: Vec<CurveClass> = others
        .iter()
        .map(|&i| class_difference(fan, i, j))
        .collect();
    let degrees: Vec<i64> = shifts.iter().map(|c| grading.degree(&c.0)).collect();
    let found = balanced_tuples(&vectors, &degrees, order)
        .map_err(|_| Error::GradingNotPositive { ray: j })?;

    let mut tuples = Vec::with_capacity(found.len());
    for sub in found {
        let mut a = vec![0u64; fan.m()];
        let mut class = CurveClass::zero(fan.rank());
        for (k, &i) in others.iter().enumerate() {
            a[i] = sub[k];
            for (x, y) in class.0.iter_mut().zip(&shifts[k].0) {
                *x += sub[k] as i64 * y;
            }
        }
        let p: u64 = a.iter().sum();
        for i in 0..fan.m() {
            let expected = if i == j { -(p as i64) } else { a[i] as i64 };
            assert_eq!(
                fan.intersect(i, &class)?,
                expected,
                "pairing of balanced class"
            );
        }
        tuples.push(BalancedTuple { j, a, p, class });
    }
    Ok(tuples)
}

/// `C_i − C_j` in curve-basis coordinates.
pub fn class_difference(fan: &FanData, i: usize, j: usize) -> CurveClass {
    let ci = fan.ray_class(i);
    let cj = fan.ray_class(j);
    CurveClass(ci.0.iter().zip(&cj.0).map(|(a, b)| a - b).collect())
}

/// The hypergeometric series `g_j(q̌)` truncated at `order`.
pub fn g_series(fan: &FanData, j: usize, order: i64, grading: &Grading) -> Result<QSeries> {
    let tuples = enumerate_balanced(fan, j, order, grading)?;
    let mut terms = Vec::with_capacity(tuples.len());
    let mut seen = std::collections::BTreeSet::new();
    for t in tuples {
        assert!(
            seen.insert(t.class.clone()),
            "balanced tuples map to distinct classes"
        );
        terms.push((t.class.0.clone(), g_coefficient(t.p, &t.a)));
    }
    Ok(QSeries::from_terms(grading, order, terms)?)
}

/// `(−1)^p (p − 1)! / Π a_i!`.
pub fn g_coefficient(p: u64, a: &[u64]) -> Rational {
    let num = factorial(p - 1);
    let den = a.iter().fold(BigInt::one(), |acc, &x| acc * factorial(x));
    let c = Rational::new(num, den);
    if p.is_multiple_of(2) {
        c
    } else {
        -c
    }
}

/// `n!`.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// The mirror map and its inverse, stored as monomial × unit:
/// `q_l = q̌_l · F_l(q̌)` and `q̌_l = q_l · V_l(q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MirrorMap {
    order: i64,
    grading: Grading,
    forward_units: Vec<QSeries>,
    inverse_units: Vec<QSeries>,
}

impl MirrorMap {
    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    /// `q_l(q̌)` for every basis class, truncated at the map order.
    pub fn forward(&self) -> Vec<QSeries> {
        images(&self.forward_units, self.order)
    }

    /// `q̌_l(q)` for every basis class, truncated at the map order.
    pub fn inverse(&self) -> Vec<QSeries> {
        images(&self.inverse_units, self.order)
    }

    pub fn forward_units(&self) -> &[QSeries] {
        &self.forward_units
    }

    pub fn inverse_units(&self) -> &[QSeries] {
        &self.inverse_units
    }

    /// Rewrites a series in `q̌` as a series in `q` through `q̌(q)`.
    pub fn to_kahler(&self, s: &QSeries) -> Result<QSeries> {
        Ok(substitute_units(s, &unit_images(&self.inverse_units))?)
    }

    /// Rewrites a series in `q` as a series in `q̌` through `q(q̌)`.
    pub fn to_complex(&self, s: &QSeries) -> Result<QSeries> {
        Ok(substitute_units(s, &unit_images(&self.forward_units))?)
    }

    /// `q̌^e(q) / q^e` as a unit series in `q`; `e` may have negative entries.
    pub fn inverse_monomial_unit(&self, e: &[i64]) -> Result<QSeries> {
        let mut acc = QSeries::one(&self.grading, self.order);
        for (k, &a) in e.iter().enumerate() {
            if a != 0 {
                acc = &acc * &self.inverse_units[k].powi(a)?;
            }
        }
        Ok(acc)
    }
}

fn unit_images(units: &[QSeries]) -> Vec<UnitImage> {
    let rank = units.len();
    units
        .iter()
        .enumerate()
        .map(|(k, u)| {
            let mut monomial = vec![0; rank];
            monomial[k] = 1;
            UnitImage {
                monomial,
                unit: u.clone(),
            }
        })
        .collect()
}

fn images(units: &[QSeries], order: i64) -> Vec<QSeries> {
    let rank = units.len();
    units
        .iter()
        .enumerate()
        .map(|(k, u)| {
            let mut e = vec![0; rank];
            e[k] = 1;
            u.with_order(order)
                .shift(&e)
                .expect("variable shift has positive degree")
        })
        .collect()
}

/// All hypergeometric series together with the mirror map they define.
#[derive(Debug, Clone)]
pub struct MirrorData {
    pub g: Vec<QSeries>,
    pub map: MirrorMap,
}

impl MirrorData {
    pub fn compute(fan: &FanData, order: i64, grading: &Grading) -> Result<Self> {
        let g = (0..fan.m())
            .map(|j| g_series(fan, j, order, grading))
            .collect::<Result<Vec<_>>>()?;
        let map = build_mirror_map(fan, &g, order, grading)?;
        Ok(MirrorData { g, map })
    }

    /// `exp g_i(q̌(q))`, the generating series `1 + δ_i(q)`.
    pub fn ogw(&self, i: usize) -> Result<QSeries> {
        Ok(self.map.to_kahler(&self.g[i])?.exp()?)
    }
}

/// The mirror map at `order`, inverse by fixed-point iteration.
pub fn mirror_map(fan: &FanData, order: i64, grading: &Grading) -> Result<MirrorMap> {
    Ok(MirrorData::compute(fan, order, grading)?.map)
}

fn build_mirror_map(
    fan: &FanData,
    g: &[QSeries],
    order: i64,
    grading: &Grading,
) -> Result<MirrorMap> {
    let n = fan.n();
    // exponent E_l = Σ_k (D_k·C_l) g_k
    let exponents: Vec<QSeries> = (0..fan.rank())
        .map(|l| {
            let beta = &fan.curve_basis()[l];
            let mut acc = QSeries::zero(grading, order);
            for (k, &pairing) in beta.iter().enumerate() {
                if pairing != 0 {
                    acc = &acc + &g[k].scale(&Rational::from_integer(pairing.into()));
                }
            }
            acc
        })
        .collect();
    let forward_units = exponents
        .iter()
        .map(|e| (-e).exp())
        .collect::<std::result::Result<Vec<_>, _>>()?;

    // V ← exp(E(q·V)); each pass fixes one more degree of the unit
    let mut inverse_units = vec![QSeries::one(grading, order); fan.rank()];
    for _ in 0..=order.max(0) {
        let current = unit_images(&inverse_units);
        inverse_units = exponents
            .iter()
            .map(|e| -> Result<QSeries> {
                let pulled = substitute_units(e, &current)?;
                Ok(pulled.with_order(order).exp()?)
            })
            .collect::<Result<Vec<_>>>()?;
    }

    let map = MirrorMap {
        order,
        grading: grading.clone(),
        forward_units,
        inverse_units,
    };
    let _ = n;
    check_round_trip(&map)?;
    Ok(map)
}

fn check_round_trip(map: &MirrorMap) -> Result<()> {
    let forward = map.forward();
    let inverse = map.inverse();
    for l in 0..forward.len() {
        let there = map.to_kahler(&forward[l])?;
        let back = map.to_complex(&inverse[l])?;
        let expected = variable(&map.grading, l, map.order);
        if there.truncate(map.order) != expected || back.truncate(map.order) != expected {
            return Err(Error::RoundTripFailure { variable: l });
        }
    }
    Ok(())
}

/// The series `q_l` itself.
pub fn variable(grading: &Grading, l: usize, order: i64) -> QSeries {
    let mut e = vec![0; grading.rank()];
    e[l] = 1;
    QSeries::monomial(grading, order, e, Rational::one()).expect("positive weight")
}

/// `exp g_i(q̌(q))`.
pub fn ogw_series(fan: &FanData, i: usize, order: i64, grading: &Grading) -> Result<QSeries> {
    fan.check_ray(i)?;
    MirrorData::compute(fan, order, grading)?.ogw(i)
}

/// `n_{β_i + α}`: the coefficient of `q^α` in `exp g_i(q̌(q))`.
pub fn ogw_invariant(
    fan: &FanData,
    i: usize,
    alpha: &CurveClass,
    order: i64,
    grading: &Grading,
) -> Result<Rational> {
    fan.check_class(alpha)?;
    let s = ogw_series(fan, i, order, grading)?;
    let c = s.coefficient(&alpha.0)?;
    debug_assert!(!alpha.is_zero() || !c.is_zero());
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{build_fan, default_grading, PolytopeInput};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn kp1() -> FanData {
        build_fan(&PolytopeInput {
            dim: 1,
            points: vec![vec![-1], vec![0], vec![1]],
            cells: vec![vec![0, 1], vec![2, 1]],
            base_cell: 1,
        })
        .unwrap()
    }

    fn kp2() -> FanData {
        build_fan(&PolytopeInput {
            dim: 2,
            points: vec![vec![1, 0], vec![0, 1], vec![0, 0], vec![-1, -1]],
            cells: vec![vec![0, 1, 2], vec![1, 2, 3], vec![0, 2, 3]],
            base_cell: 0,
        })
        .unwrap()
    }

    fn uni(order: i64, coeffs: &[Rational]) -> QSeries {
        QSeries::from_terms(
            &Grading::ones(1),
            order,
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (vec![k as i64], c.clone())),
        )
        .unwrap()
    }

    #[test]
    fn balanced_kp1() {
        let fan = kp1();
        let g = Grading::ones(1);
        let t = enumerate_balanced(&fan, 1, 3, &g).unwrap();
        let a: Vec<_> = t.iter().map(|t| t.a.clone()).collect();
        assert_eq!(a, vec![vec![1, 0, 1], vec![2, 0, 2], vec![3, 0, 3]]);
        let classes: Vec<_> = t.iter().map(|t| t.class.clone()).collect();
        assert_eq!(
            classes,
            (1..=3).map(|l| CurveClass(vec![l])).collect::<Vec<_>>()
        );
        assert!(enumerate_balanced(&fan, 0, 3, &g).unwrap().is_empty());
    }

    #[test]
    fn balanced_kp2() {
        let t = enumerate_balanced(&kp2(), 2, 2, &Grading::ones(1)).unwrap();
        let a: Vec<_> = t.iter().map(|t| t.a.clone()).collect();
        assert_eq!(a, vec![vec![1, 1, 0, 1], vec![2, 2, 0, 2]]);
    }

    #[test]
    fn g_examples() {
        let g = Grading::ones(1);
        assert_eq!(
            g_series(&kp1(), 1, 4, &g).unwrap(),
            uni(4, &[r(0, 1), r(1, 1), r(3, 2), r(10, 3), r(35, 4)])
        );
        assert!(g_series(&kp1(), 0, 4, &g).unwrap().is_zero());
        assert_eq!(
            g_series(&kp2(), 2, 3, &g).unwrap(),
            uni(3, &[r(0, 1), r(-2, 1), r(15, 1), r(-560, 3)])
        );
    }

    #[test]
    fn kp1_mirror_map() {
        let g = Grading::ones(1);
        let map = mirror_map(&kp1(), 4, &g).unwrap();
        // q̌ exp(2g): Catalan numbers
        assert_eq!(
            map.forward()[0],
            uni(4, &[r(0, 1), r(1, 1), r(2, 1), r(5, 1), r(14, 1)])
        );
        assert_eq!(
            map.inverse()[0],
            uni(4, &[r(0, 1), r(1, 1), r(-2, 1), r(3, 1), r(-4, 1)])
        );
    }

    #[test]
    fn ogw_examples() {
        let g = Grading::ones(1);
        assert_eq!(
            ogw_series(&kp1(), 1, 10, &g).unwrap(),
            uni(10, &[r(1, 1), r(1, 1)])
        );
        let expect: Vec<Rational> = [1, -2, 5, -32, 286, -3038, 35870]
            .iter()
            .map(|&c| r(c, 1))
            .collect();
        assert_eq!(ogw_series(&kp2(), 2, 6, &g).unwrap(), uni(6, &expect));
        assert_eq!(ogw_series(&kp2(), 0, 6, &g).unwrap(), QSeries::one(&g, 6));
        assert_eq!(
            ogw_invariant(&kp1(), 1, &CurveClass(vec![1]), 3, &g).unwrap(),
            r(1, 1)
        );
        assert_eq!(
            ogw_invariant(&kp2(), 2, &CurveClass(vec![2]), 3, &g).unwrap(),
            r(5, 1)
        );
        assert_eq!(
            ogw_invariant(&kp2(), 3, &CurveClass(vec![0]), 3, &g).unwrap(),
            r(1, 1)
        );
    }

    #[test]
    fn multinomial_counts() {
        assert_eq!(multinomial(&[2, 2]), BigInt::from(6));
        assert_eq!(multinomial(&[1, 1, 1]), BigInt::from(6));
        assert_eq!(multinomial(&[]), BigInt::from(1));
    }

    #[test]
    fn degenerate_fan() {
        let fan = build_fan(&PolytopeInput {
            dim: 2,
            points: vec![vec![0, 0], vec![1, 0], vec![0, 1]],
            cells: vec![vec![0, 1, 2]],
            base_cell: 0,
        })
        .unwrap();
        let g = default_grading(&fan).unwrap();
        let map = mirror_map(&fan, 3, &g).unwrap();
        assert!(map.forward().is_empty() && map.inverse().is_empty());
        for j in 0..3 {
            assert!(enumerate_balanced(&fan, j, 5, &g).unwrap().is_empty());
            assert_eq!(ogw_series(&fan, j, 3, &g).unwrap(), QSeries::one(&g, 3));
        }
    }
}
