//! Executable cross-checks between the two routes and the combinatorial
//! identities behind them.
//!
//! Every check returns a [`CheckReport`] that records how many values were
//! compared and the first disagreement, so a failing run can be diffed
//! rather than merely flagged.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::geom::{CurveClass, FanData, Grading};
use crate::mirror::{self, MirrorData};
use crate::series::{bracket, QSeries, Rational};
use crate::slab::{self, assemble, slab_relation_check, z_free_log};
use crate::Result;

/// First value where two computations disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub location: String,
    pub expected: String,
    pub actual: String,
}

/// Outcome of one check on one subject.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub subject: String,
    pub passed: bool,
    pub compared: usize,
    pub first_failure: Option<Mismatch>,
}

impl CheckReport {
    fn new(check: &str, subject: impl Into<String>) -> Self {
        CheckReport {
            check: check.into(),
            subject: subject.into(),
            passed: true,
            compared: 0,
            first_failure: None,
        }
    }

    fn fail(&mut self, location: String, expected: String, actual: String) {
        self.passed = false;
        if self.first_failure.is_none() {
            self.first_failure = Some(Mismatch {
                location,
                expected,
                actual,
            });
        }
    }

    /// Compares two series coefficientwise up to the lower of their orders.
    fn compare_series(&mut self, label: &str, expected: &QSeries, actual: &QSeries) {
        let order = expected.order().min(actual.order());
        let exponents: BTreeSet<Vec<i64>> = expected
            .truncate(order)
            .iter()
            .chain(actual.truncate(order).iter())
            .map(|(e, _)| e.clone())
            .collect();
        self.compared += exponents.len().max(1);
        for e in exponents {
            let a = expected.coefficient(&e).expect("within order");
            let b = actual.coefficient(&e).expect("within order");
            if a != b {
                self.fail(format!("{label} q^{}", bracket(&e)), ratio(&a), ratio(&b));
            }
        }
    }

    fn compare_flag(&mut self, label: String, ok: bool) {
        self.compared += 1;
        if !ok {
            self.fail(label, "true".into(), "false".into());
        }
    }
}

fn ratio(c: &Rational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

/// All reports of a suite run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub order: i64,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Both routes to the block series, computed once and shared by the checks.
#[derive(Debug, Clone)]
pub struct Routes {
    pub order: i64,
    pub grading: Grading,
    pub mirror: MirrorData,
    /// `A_i` from the normalization solver.
    pub normalized: Vec<QSeries>,
    /// `A_i = exp g_i(q̌(q))`.
    pub closed_form: Vec<QSeries>,
}

impl Routes {
    pub fn compute(fan: &FanData, order: i64, grading: &Grading) -> Result<Self> {
        let mirror = MirrorData::compute(fan, order, grading)?;
        let closed_form = (0..fan.m())
            .map(|i| mirror.ogw(i))
            .collect::<Result<Vec<_>>>()?;
        let normalized = slab::solve_normalized(fan, order, grading)?;
        Ok(Routes {
            order,
            grading: grading.clone(),
            mirror,
            normalized,
            closed_form,
        })
    }
}

/// The normalization solver and the closed form agree on every block.
pub fn route_equivalence(routes: &Routes) -> CheckReport {
    let mut report = CheckReport::new("route_equivalence", format!("order {}", routes.order));
    for (i, (a, b)) in routes
        .closed_form
        .iter()
        .zip(&routes.normalized)
        .enumerate()
    {
        report.compare_series(&format!("A_{}", i + 1), a, b);
    }
    report
}

/// Brute force over the box `[−B, B]^r` of classes with `D_j·d < 0` and
/// `D_p·d ≥ 0` otherwise, against the balanced-tuple parametrization.
pub fn balanced_class_oracle(
    fan: &FanData,
    j: usize,
    bound: i64,
    grading: &Grading,
) -> Result<CheckReport> {
    fan.check_ray(j)?;
    let mut report = CheckReport::new("balanced_class_oracle", format!("ray {}", j + 1));
    let rank = fan.rank();
    let mut brute = BTreeSet::new();
    let mut point = vec![-bound; rank];
    loop {
        let d = CurveClass(point.clone());
        let mut admissible = !d.is_zero();
        for p in 0..fan.m() {
            let x = fan.intersect(p, &d)?;
            if (p == j && x >= 0) || (p != j && x < 0) {
                admissible = false;
            }
        }
        if admissible {
            brute.insert(d);
        }
        // odometer over the box
        let Some(k) = (0..rank).rev().find(|&k| point[k] < bound) else {
            break;
        };
        point[k] += 1;
        for x in &mut point[k + 1..] {
            *x = -bound;
        }
    }

    let reach = bound * grading.weights().iter().sum::<i64>();
    let param: BTreeSet<CurveClass> = mirror::enumerate_balanced(fan, j, reach.max(0), grading)?
        .into_iter()
        .map(|t| t.class)
        .filter(|d| d.0.iter().all(|x| x.abs() <= bound))
        .collect();

    report.compared = brute.len().max(param.len());
    if brute != param {
        let render = |s: &BTreeSet<CurveClass>| {
            s.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        };
        let first = brute.symmetric_difference(&param).next().unwrap();
        report.fail(format!("class {first}"), render(&brute), render(&param));
    }
    Ok(report)
}

/// With every block equal to 1, the `z`-free part of `log f_j`, expanded
/// directly, equals `−g_j`.
pub fn z_free_identity(
    fan: &FanData,
    j: usize,
    order: i64,
    grading: &Grading,
) -> Result<CheckReport> {
    let mut report = CheckReport::new("z_free_identity", format!("ray {}", j + 1));
    let ones = vec![QSeries::one(grading, order); fan.m()];
    let direct = z_free_log(&assemble(fan, j, &ones, order)?)?;
    let g = mirror::g_series(fan, j, order, grading)?;
    report.compare_series("z-free log", &-&g, &direct);
    Ok(report)
}

/// The blocks `exp g_i(q̌(q))` equal `exp g_j(q̌) q̌^{C_i−C_j}` after the
/// change `z̃^{v̄_i} ↦ z^{v̄_i} exp(Σ_{l<n} (v_{i,l} − v_{j,l}) g_l)` and the
/// mirror map, block by block.
pub fn coordinate_change_check(fan: &FanData, j: usize, routes: &Routes) -> Result<CheckReport> {
    fan.check_ray(j)?;
    let mut report = CheckReport::new("coordinate_change", format!("ray {}", j + 1));
    let g = &routes.mirror.g;
    let map = &routes.mirror.map;
    let left = assemble(fan, j, &routes.closed_form, routes.order)?;
    for (i, block) in left.blocks.iter().enumerate() {
        let mut exponent = g[j].clone();
        for l in 0..fan.n() {
            let c = fan.coords()[i][l] - fan.coords()[j][l];
            if c != 0 {
                exponent = &exponent + &g[l].scale(&Rational::from_integer(c.into()));
            }
        }
        let unit = map.inverse_monomial_unit(&block.shift)?;
        let right = &map.to_kahler(&exponent.exp()?)? * &unit;
        report.compare_series(&format!("block {}", i + 1), &right, &block.series);
    }
    Ok(report)
}

/// The closed-form blocks satisfy the normalization condition for `f_j`.
pub fn normalization_check(fan: &FanData, j: usize, routes: &Routes) -> Result<CheckReport> {
    let mut report = CheckReport::new("normalization", format!("ray {}", j + 1));
    let f = assemble(fan, j, &routes.closed_form, routes.order)?;
    let zero = QSeries::zero(&routes.grading, routes.order);
    report.compare_series("z-free log", &zero, &z_free_log(&f)?);
    Ok(report)
}

/// `f_i = q^{C_j−C_i} z^{v_j−v_i} f_j` for every pair, on the solver blocks.
pub fn slab_relations(fan: &FanData, routes: &Routes) -> Result<CheckReport> {
    let mut report = CheckReport::new("slab_relations", "all pairs");
    let fs = (0..fan.m())
        .map(|j| assemble(fan, j, &routes.normalized, routes.order))
        .collect::<Result<Vec<_>>>()?;
    for fi in &fs {
        for fj in &fs {
            let label = format!("f_{} vs f_{}", fi.j + 1, fj.j + 1);
            report.compare_flag(label, slab_relation_check(fi, fj));
        }
    }
    Ok(report)
}

/// Forward after inverse and inverse after forward are both the identity.
pub fn mirror_round_trip(routes: &Routes) -> Result<CheckReport> {
    let map = &routes.mirror.map;
    let mut report = CheckReport::new("mirror_round_trip", format!("order {}", routes.order));
    for (l, (fwd, inv)) in map.forward().iter().zip(map.inverse()).enumerate() {
        let id = mirror::variable(&routes.grading, l, routes.order);
        report.compare_series(&format!("q(q̌(q))_{l}"), &id, &map.to_kahler(fwd)?);
        report.compare_series(&format!("q̌(q(q̌))_{l}"), &id, &map.to_complex(&inv)?);
    }
    Ok(report)
}

/// Every check on one geometry, with a brute-force box of half-width `bound`.
pub fn full_suite(fan: &FanData, order: i64, grading: &Grading, bound: i64) -> Result<SuiteReport> {
    let routes = Routes::compute(fan, order, grading)?;
    let mut checks = vec![route_equivalence(&routes), mirror_round_trip(&routes)?];
    for j in 0..fan.m() {
        checks.push(normalization_check(fan, j, &routes)?);
        checks.push(z_free_identity(fan, j, order, grading)?);
        checks.push(coordinate_change_check(fan, j, &routes)?);
        checks.push(balanced_class_oracle(fan, j, bound, grading)?);
    }
    checks.push(slab_relations(fan, &routes)?);
    Ok(SuiteReport { order, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{build_fan, default_grading, PolytopeInput};

    fn fan(points: Vec<Vec<i64>>, cells: Vec<Vec<usize>>, base_cell: usize) -> FanData {
        let dim = points[0].len();
        build_fan(&PolytopeInput {
            dim,
            points,
            cells,
            base_cell,
        })
        .unwrap()
    }

    #[test]
    fn kp1_suite_passes() {
        let f = fan(
            vec![vec![-1], vec![0], vec![1]],
            vec![vec![0, 1], vec![2, 1]],
            1,
        );
        let g = default_grading(&f).unwrap();
        let suite = full_suite(&f, 5, &g, 3).unwrap();
        assert!(suite.passed(), "{suite:#?}");
    }

    #[test]
    fn conifold_suite_passes() {
        let f = fan(
            vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]],
            vec![vec![0, 1, 2], vec![1, 2, 3]],
            0,
        );
        let g = default_grading(&f).unwrap();
        let suite = full_suite(&f, 4, &g, 3).unwrap();
        assert!(suite.passed(), "{suite:#?}");
    }

    #[test]
    fn oracle_sets_kp1() {
        let f = fan(
            vec![vec![-1], vec![0], vec![1]],
            vec![vec![0, 1], vec![2, 1]],
            1,
        );
        let g = Grading::ones(1);
        let r = balanced_class_oracle(&f, 1, 3, &g).unwrap();
        assert!(r.passed);
        assert_eq!(r.compared, 3);
        let r = balanced_class_oracle(&f, 0, 3, &g).unwrap();
        assert!(r.passed);
        assert_eq!(r.compared, 0);
    }

    #[test]
    fn corrupted_routes_fail() {
        let f = fan(
            vec![vec![-1], vec![0], vec![1]],
            vec![vec![0, 1], vec![2, 1]],
            1,
        );
        let g = Grading::ones(1);
        let mut routes = Routes::compute(&f, 3, &g).unwrap();
        routes.normalized[1] = QSeries::one(&g, 3);
        let r = route_equivalence(&routes);
        assert!(!r.passed);
        let m = r.first_failure.unwrap();
        assert_eq!(m.location, "A_2 q^[1]");
        assert_eq!((m.expected.as_str(), m.actual.as_str()), ("1/1", "0/1"));
    }
}
