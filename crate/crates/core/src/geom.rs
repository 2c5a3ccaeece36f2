//! Lattice data of a toric Calabi-Yau manifold built from a triangulated
//! lattice polytope.
//!
//! The polytope σ sits at height one; coning over its unimodular triangulation
//! gives the fan. Rays are reordered so that a chosen base cell occupies the
//! first `n` slots, every other ray is expanded in that basis, and the curve
//! classes `C_i = β_i − Σ_l v_{i,l} β_l` (for `i ≥ n`, zero-based) form a basis
//! of `H₂(X)`. All intersection numbers reduce to β-coordinates under the
//! convention `D_p · β_k = δ_{pk}`.
//!
//! Ray indices in this crate are zero-based.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::linalg;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("polytope has no points")]
    Empty,
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("point {point} has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        point: usize,
        expected: usize,
        found: usize,
    },
    #[error("points {first} and {second} coincide")]
    DuplicatePoint { first: usize, second: usize },
    #[error("cell {cell} has {found} vertices, expected {expected}")]
    CellSize {
        cell: usize,
        expected: usize,
        found: usize,
    },
    #[error("cell {cell} refers to point {index}, which does not exist")]
    IndexOutOfRange { cell: usize, index: usize },
    #[error("base cell {index} does not exist ({cells} cells)")]
    BaseCellOutOfRange { index: usize, cells: usize },
    #[error("cell {cell} is not unimodular (determinant {det})")]
    NonUnimodularCell { cell: usize, det: String },
    #[error("base cell does not give a basis of the lattice")]
    SingularBase,
    #[error("inconsistent triangulation: {0}")]
    InconsistentTriangulation(String),
    #[error("ray index {index} out of range (m = {m})")]
    RayOutOfRange { index: usize, m: usize },
    #[error("curve class has {found} coordinates, expected {expected}")]
    ClassArity { expected: usize, found: usize },
    #[error("invalid grading: {0}")]
    InvalidGrading(String),
    #[error(
        "no positive grading found; class {class} has non-positive degree under all-ones weights"
    )]
    NoGradingFound { class: CurveClass },
}

/// Raw polytope data as given by the user.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytopeInput {
    /// Dimension of σ, i.e. `n − 1`.
    pub dim: usize,
    pub points: Vec<Vec<i64>>,
    /// Maximal cells of the triangulation, as indices into `points`.
    pub cells: Vec<Vec<usize>>,
    pub base_cell: usize,
}

impl PolytopeInput {
    /// Checks shape, distinctness, unimodularity and coverage.
    pub fn validate(&self) -> Result<(), GeomError> {
        if self.dim == 0 {
            return Err(GeomError::ZeroDimension);
        }
        if self.points.is_empty() {
            return Err(GeomError::Empty);
        }
        for (i, p) in self.points.iter().enumerate() {
            if p.len() != self.dim {
                return Err(GeomError::DimensionMismatch {
                    point: i,
                    expected: self.dim,
                    found: p.len(),
                });
            }
        }
        let mut seen: BTreeMap<&[i64], usize> = BTreeMap::new();
        for (i, p) in self.points.iter().enumerate() {
            if let Some(&first) = seen.get(p.as_slice()) {
                return Err(GeomError::DuplicatePoint { first, second: i });
            }
            seen.insert(p, i);
        }
        if self.base_cell >= self.cells.len() {
            return Err(GeomError::BaseCellOutOfRange {
                index: self.base_cell,
                cells: self.cells.len(),
            });
        }
        let mut covered = vec![false; self.points.len()];
        for (c, cell) in self.cells.iter().enumerate() {
            if cell.len() != self.dim + 1 {
                return Err(GeomError::CellSize {
                    cell: c,
                    expected: self.dim + 1,
                    found: cell.len(),
                });
            }
            for &idx in cell {
                if idx >= self.points.len() {
                    return Err(GeomError::IndexOutOfRange {
                        cell: c,
                        index: idx,
                    });
                }
                covered[idx] = true;
            }
            let distinct: BTreeSet<usize> = cell.iter().copied().collect();
            if distinct.len() != cell.len() {
                return Err(GeomError::InconsistentTriangulation(format!(
                    "cell {c} repeats a vertex"
                )));
            }
            let origin = &self.points[cell[0]];
            let edges: Vec<Vec<i64>> = cell[1..]
                .iter()
                .map(|&k| {
                    self.points[k]
                        .iter()
                        .zip(origin)
                        .map(|(a, b)| a - b)
                        .collect()
                })
                .collect();
            let det = linalg::determinant(&edges);
            if !linalg::abs_is_one(&det) {
                return Err(GeomError::NonUnimodularCell {
                    cell: c,
                    det: det.to_string(),
                });
            }
        }
        if let Some(p) = covered.iter().position(|&c| !c) {
            return Err(GeomError::InconsistentTriangulation(format!(
                "point {p} lies in no cell"
            )));
        }
        Ok(())
    }
}

/// A class `Σ a_i C_i` written in the curve-class basis (`m − n` entries).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurveClass(pub Vec<i64>);

impl CurveClass {
    pub fn zero(rank: usize) -> Self {
        CurveClass(vec![0; rank])
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn scaled(&self, k: i64) -> Self {
        CurveClass(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

/// Positive integer weights on the curve-class basis; `deg(Σ a_i C_i) = Σ w_i a_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grading {
    weights: Arc<[i64]>,
}

impl Grading {
    pub fn new(weights: Vec<i64>) -> Result<Self, GeomError> {
        if let Some(w) = weights.iter().find(|&&w| w < 1) {
            return Err(GeomError::InvalidGrading(format!(
                "weight {w} is not a positive integer"
            )));
        }
        Ok(Grading {
            weights: weights.into(),
        })
    }

    pub fn ones(rank: usize) -> Self {
        Grading {
            weights: vec![1; rank].into(),
        }
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn degree(&self, exponent: &[i64]) -> i64 {
        debug_assert_eq!(exponent.len(), self.weights.len());
        exponent
            .iter()
            .zip(self.weights.iter())
            .map(|(a, w)| a * w)
            .sum()
    }

    pub fn max_weight(&self) -> i64 {
        self.weights.iter().copied().max().unwrap_or(1)
    }
}

/// Fan data of the toric Calabi-Yau manifold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanData {
    n: usize,
    rays: Vec<Vec<i64>>,
    coords: Vec<Vec<i64>>,
    permutation: Vec<usize>,
    cells: Vec<Vec<usize>>,
    curve_basis: Vec<Vec<i64>>,
}

/// Cones over the triangulation and fills in coordinates, curve classes and
/// the pairing table. Base-cell vertices become rays `0..n` in the order the
/// cell lists them; the remaining points follow in input order.
pub fn build_fan(input: &PolytopeInput) -> Result<FanData, GeomError> {
    input.validate()?;
    let n = input.dim + 1;
    let m = input.points.len();
    let base = &input.cells[input.base_cell];
    let mut permutation: Vec<usize> = base.clone();
    permutation.extend((0..m).filter(|i| !base.contains(i)));
    let mut position = vec![0; m];
    for (ray, &point) in permutation.iter().enumerate() {
        position[point] = ray;
    }

    let rays: Vec<Vec<i64>> = permutation
        .iter()
        .map(|&p| {
            let mut v = input.points[p].clone();
            v.push(1);
            v
        })
        .collect();
    let basis = &rays[..n];
    let mut coords = Vec::with_capacity(m);
    for ray in &rays {
        let c = linalg::solve_integer(basis, ray).ok_or(GeomError::SingularBase)?;
        coords.push(c);
    }

    let curve_basis = (n..m)
        .map(|i| {
            let mut beta = vec![0; m];
            beta[i] = 1;
            for l in 0..n {
                beta[l] = -coords[i][l];
            }
            beta
        })
        .collect();

    let cells = input
        .cells
        .iter()
        .map(|c| c.iter().map(|&p| position[p]).collect())
        .collect();

    Ok(FanData {
        n,
        rays,
        coords,
        permutation,
        cells,
        curve_basis,
    })
}

impl FanData {
    /// Rank of the lattice `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of rays.
    pub fn m(&self) -> usize {
        self.rays.len()
    }

    /// Number of curve-class basis elements, `m − n`.
    pub fn rank(&self) -> usize {
        self.m() - self.n
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    /// `coords()[i][l] = v_{i,l}`.
    pub fn coords(&self) -> &[Vec<i64>] {
        &self.coords
    }

    /// `permutation()[ray] = input point index`.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Cells of the triangulation in ray indices.
    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// β-coordinates of `C_{n+k}`.
    pub fn curve_basis(&self) -> &[Vec<i64>] {
        &self.curve_basis
    }

    pub fn check_ray(&self, index: usize) -> Result<(), GeomError> {
        if index < self.m() {
            Ok(())
        } else {
            Err(GeomError::RayOutOfRange { index, m: self.m() })
        }
    }

    pub fn check_class(&self, d: &CurveClass) -> Result<(), GeomError> {
        if d.0.len() == self.rank() {
            Ok(())
        } else {
            Err(GeomError::ClassArity {
                expected: self.rank(),
                found: d.0.len(),
            })
        }
    }

    /// β-coordinates of a class: entry `p` is `D_p · d`.
    pub fn beta_coords(&self, d: &CurveClass) -> Vec<i64> {
        let m = self.m();
        let mut beta = vec![0; m];
        for (k, &a) in d.0.iter().enumerate() {
            if a != 0 {
                for (b, c) in beta.iter_mut().zip(&self.curve_basis[k]) {
                    *b += a * c;
                }
            }
        }
        beta
    }

    /// `D_p · d`.
    pub fn intersect(&self, p: usize, d: &CurveClass) -> Result<i64, GeomError> {
        self.check_ray(p)?;
        self.check_class(d)?;
        let n = self.n;
        if p >= n {
            return Ok(d.0[p - n]);
        }
        Ok(d.0
            .iter()
            .enumerate()
            .map(|(k, a)| -a * self.coords[n + k][p])
            .sum())
    }

    /// `D_p · C_{n+k}` for all rays `p` and basis classes `k`.
    pub fn pairing_table(&self) -> Vec<Vec<i64>> {
        (0..self.m())
            .map(|p| (0..self.rank()).map(|k| self.curve_basis[k][p]).collect())
            .collect()
    }

    /// The class `C_i` in curve-basis coordinates; zero for base rays.
    pub fn ray_class(&self, i: usize) -> CurveClass {
        let mut c = CurveClass::zero(self.rank());
        if i >= self.n {
            c.0[i - self.n] = 1;
        }
        c
    }

    /// Recovers a curve class from β-coordinates, or `None` if the boundary
    /// `Σ β_k v_k` does not vanish.
    pub fn class_from_beta(&self, beta: &[i64]) -> Option<CurveClass> {
        if beta.len() != self.m() {
            return None;
        }
        let boundary = self.boundary(beta);
        if boundary.iter().any(|&x| x != 0) {
            return None;
        }
        Some(CurveClass(beta[self.n..].to_vec()))
    }

    /// `Σ_k β_k v_k ∈ N`.
    pub fn boundary(&self, beta: &[i64]) -> Vec<i64> {
        let mut s = vec![0; self.n];
        for (b, v) in beta.iter().zip(&self.rays) {
            for (x, y) in s.iter_mut().zip(v) {
                *x += b * y;
            }
        }
        s
    }

    /// Exponent of `z^{v_i − v_j}` in the basis `e_k = v_k − v_{n−1}`,
    /// `k = 0..n−1`.
    pub fn z_exponent(&self, i: usize, j: usize) -> Vec<i64> {
        (0..self.n - 1)
            .map(|k| self.coords[i][k] - self.coords[j][k])
            .collect()
    }
}

/// Classes of the interior walls: for each pair of cells sharing a facet,
/// the primitive relation among their `n + 1` vertices, oriented so the two
/// opposite vertices have positive coefficient.
pub fn wall_curve_classes(fan: &FanData) -> Result<Vec<CurveClass>, GeomError> {
    let n = fan.n();
    let cells = fan.cells();
    let mut facet_count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for cell in cells {
        for skip in 0..cell.len() {
            let mut facet: Vec<usize> = cell
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != skip)
                .map(|(_, &v)| v)
                .collect();
            facet.sort_unstable();
            *facet_count.entry(facet).or_default() += 1;
        }
    }
    if let Some((facet, _)) = facet_count.iter().find(|&(_, &c)| c > 2) {
        return Err(GeomError::InconsistentTriangulation(format!(
            "facet {facet:?} is shared by more than two cells"
        )));
    }

    let mut classes = Vec::new();
    for a in 0..cells.len() {
        for b in a + 1..cells.len() {
            let sa: BTreeSet<usize> = cells[a].iter().copied().collect();
            let sb: BTreeSet<usize> = cells[b].iter().copied().collect();
            if sa.intersection(&sb).count() != n - 1 {
                continue;
            }
            let union: Vec<usize> = sa.union(&sb).copied().collect();
            let matrix: Vec<Vec<i64>> = (0..n)
                .map(|row| union.iter().map(|&r| fan.rays()[r][row]).collect())
                .collect();
            let mut relation = linalg::kernel_generator(&matrix).ok_or_else(|| {
                GeomError::InconsistentTriangulation(format!("cells {a} and {b} are degenerate"))
            })?;
            let opposite: Vec<usize> = (0..union.len())
                .filter(|&k| !(sa.contains(&union[k]) && sb.contains(&union[k])))
                .collect();
            let (x, y) = (relation[opposite[0]], relation[opposite[1]]);
            if x.signum() != y.signum() || x == 0 {
                return Err(GeomError::InconsistentTriangulation(format!(
                    "cells {a} and {b} overlap"
                )));
            }
            if x < 0 {
                relation.iter_mut().for_each(|v| *v = -*v);
            }
            let mut beta = vec![0; fan.m()];
            for (k, &r) in union.iter().enumerate() {
                beta[r] = relation[k];
            }
            let class = fan
                .class_from_beta(&beta)
                .expect("kernel relation has zero boundary");
            classes.push(class);
        }
    }
    Ok(classes)
}

/// Checks that a grading has the right length and is positive on every wall
/// class and every basis class.
pub fn validate_grading(fan: &FanData, grading: &Grading) -> Result<(), GeomError> {
    if grading.rank() != fan.rank() {
        return Err(GeomError::InvalidGrading(format!(
            "expected {} weights, found {}",
            fan.rank(),
            grading.rank()
        )));
    }
    for w in wall_curve_classes(fan)? {
        if grading.degree(&w.0) < 1 {
            return Err(GeomError::InvalidGrading(format!(
                "wall class {w} has degree {}",
                grading.degree(&w.0)
            )));
        }
    }
    Ok(())
}

const GRADING_SEARCH_LIMIT: i64 = 16;

/// Deterministic search for a grading positive on all wall classes: the
/// all-ones vector first, then vectors in `[1, 16]^{m−n}` by increasing
/// coordinate sum, lexicographically within a sum.
pub fn default_grading(fan: &FanData) -> Result<Grading, GeomError> {
    let walls = wall_curve_classes(fan)?;
    let r = fan.rank();
    let positive = |w: &[i64]| walls.iter().all(|c| dot(&c.0, w) >= 1);
    let ones = vec![1; r];
    if positive(&ones) {
        return Ok(Grading::ones(r));
    }
    let limit = GRADING_SEARCH_LIMIT;
    for total in (r as i64 + 1)..=(limit * r as i64) {
        let mut found = None;
        compositions(r, total, limit, &mut Vec::new(), &mut |w| {
            if found.is_none() && positive(w) {
                found = Some(w.to_vec());
            }
            found.is_some()
        });
        if let Some(w) = found {
            return Grading::new(w);
        }
    }
    let class = walls
        .into_iter()
        .find(|c| dot(&c.0, &ones) < 1)
        .unwrap_or_else(|| CurveClass::zero(r));
    Err(GeomError::NoGradingFound { class })
}

// Visits vectors of `len` entries in [1, limit] summing to `total`, in
// lexicographic order, until the visitor returns true.
fn compositions(
    len: usize,
    total: i64,
    limit: i64,
    prefix: &mut Vec<i64>,
    visit: &mut dyn FnMut(&[i64]) -> bool,
) -> bool {
    let remaining = len - prefix.len();
    if remaining == 0 {
        return total == 0 && visit(prefix);
    }
    let rest = remaining as i64 - 1;
    let lo = (total - rest * limit).max(1);
    let hi = (total - rest).min(limit);
    for x in lo..=hi {
        prefix.push(x);
        let stop = compositions(len, total - x, limit, prefix, visit);
        prefix.pop();
        if stop {
            return true;
        }
    }
    false
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn kp1() -> PolytopeInput {
        PolytopeInput {
            dim: 1,
            points: vec![vec![-1], vec![0], vec![1]],
            cells: vec![vec![0, 1], vec![2, 1]],
            base_cell: 1,
        }
    }

    fn kp2() -> PolytopeInput {
        PolytopeInput {
            dim: 2,
            points: vec![vec![1, 0], vec![0, 1], vec![0, 0], vec![-1, -1]],
            cells: vec![vec![0, 1, 2], vec![1, 2, 3], vec![0, 2, 3]],
            base_cell: 0,
        }
    }

    fn a2_chain() -> PolytopeInput {
        PolytopeInput {
            dim: 1,
            points: vec![vec![0], vec![1], vec![2], vec![3]],
            cells: vec![vec![0, 1], vec![1, 2], vec![2, 3]],
            base_cell: 0,
        }
    }

    #[test]
    fn kp1_fan() {
        let fan = build_fan(&kp1()).unwrap();
        assert_eq!(fan.rays(), &[vec![1, 1], vec![0, 1], vec![-1, 1]]);
        assert_eq!(fan.coords()[2], vec![-1, 2]);
        assert_eq!(fan.curve_basis(), &[vec![1, -2, 1]]);
        assert_eq!(fan.permutation(), &[2, 1, 0]);
        let c3 = fan.ray_class(2);
        assert_eq!(fan.intersect(1, &c3).unwrap(), -2);
        for p in 0..3 {
            assert_eq!(fan.intersect(p, &CurveClass::zero(1)).unwrap(), 0);
        }
    }

    #[test]
    fn kp2_fan() {
        let fan = build_fan(&kp2()).unwrap();
        assert_eq!(fan.rays()[3], vec![-1, -1, 1]);
        assert_eq!(fan.coords()[3], vec![-1, -1, 3]);
        assert_eq!(fan.curve_basis(), &[vec![1, 1, -3, 1]]);
        let c4 = fan.ray_class(3);
        let pairings: Vec<i64> = (0..4).map(|p| fan.intersect(p, &c4).unwrap()).collect();
        assert_eq!(pairings, vec![1, 1, -3, 1]);
        assert_eq!(fan.intersect(2, &c4).unwrap(), -3);
    }

    #[test]
    fn unit_simplex_has_no_classes() {
        let input = PolytopeInput {
            dim: 2,
            points: vec![vec![0, 0], vec![1, 0], vec![0, 1]],
            cells: vec![vec![0, 1, 2]],
            base_cell: 0,
        };
        let fan = build_fan(&input).unwrap();
        assert_eq!(fan.m(), fan.n());
        assert!(fan.curve_basis().is_empty());
        assert!(wall_curve_classes(&fan).unwrap().is_empty());
        assert_eq!(default_grading(&fan).unwrap().rank(), 0);
    }

    #[test]
    fn height_one_and_duality() {
        for input in [kp1(), kp2(), a2_chain()] {
            let fan = build_fan(&input).unwrap();
            for (i, c) in fan.coords().iter().enumerate() {
                assert_eq!(c.iter().sum::<i64>(), 1);
                if i < fan.n() {
                    for (l, &x) in c.iter().enumerate() {
                        assert_eq!(x, i64::from(i == l));
                    }
                }
            }
            for k in 0..fan.rank() {
                let c = fan.ray_class(fan.n() + k);
                assert!(fan.boundary(&fan.beta_coords(&c)).iter().all(|&x| x == 0));
                for p in fan.n()..fan.m() {
                    assert_eq!(fan.intersect(p, &c).unwrap(), i64::from(p == fan.n() + k));
                }
            }
        }
    }

    #[test]
    fn walls() {
        let fan = build_fan(&kp1()).unwrap();
        assert_eq!(wall_curve_classes(&fan).unwrap(), vec![CurveClass(vec![1])]);
        let fan = build_fan(&kp2()).unwrap();
        assert_eq!(
            wall_curve_classes(&fan).unwrap(),
            vec![CurveClass(vec![1]); 3]
        );
        let fan = build_fan(&a2_chain()).unwrap();
        let walls = wall_curve_classes(&fan).unwrap();
        assert_eq!(walls, vec![CurveClass(vec![1, 0]), CurveClass(vec![-2, 1])]);
    }

    #[test]
    fn gradings() {
        assert_eq!(
            default_grading(&build_fan(&kp1()).unwrap())
                .unwrap()
                .weights(),
            &[1]
        );
        assert_eq!(
            default_grading(&build_fan(&kp2()).unwrap())
                .unwrap()
                .weights(),
            &[1]
        );
        let square = PolytopeInput {
            dim: 2,
            points: vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]],
            cells: vec![vec![0, 1, 2], vec![1, 2, 3]],
            base_cell: 0,
        };
        assert_eq!(
            default_grading(&build_fan(&square).unwrap())
                .unwrap()
                .weights(),
            &[1]
        );
        // -2 C_3 + C_4 forces w_4 >= 3
        let fan = build_fan(&a2_chain()).unwrap();
        let g = default_grading(&fan).unwrap();
        assert_eq!(g.weights(), &[1, 3]);
        assert!(validate_grading(&fan, &Grading::ones(2)).is_err());
        assert!(validate_grading(&fan, &g).is_ok());
        assert!(Grading::new(vec![0]).is_err());
    }

    #[test]
    fn validation_errors() {
        let bad = PolytopeInput {
            dim: 1,
            points: vec![vec![0], vec![2]],
            cells: vec![vec![0, 1]],
            base_cell: 0,
        };
        assert!(matches!(
            build_fan(&bad),
            Err(GeomError::NonUnimodularCell { .. })
        ));

        let mut dup = kp1();
        dup.points[2] = vec![-1];
        assert!(matches!(
            build_fan(&dup),
            Err(GeomError::DuplicatePoint { .. })
        ));

        let mut uncovered = kp2();
        uncovered.cells.truncate(1);
        assert!(matches!(
            build_fan(&uncovered),
            Err(GeomError::InconsistentTriangulation(_))
        ));

        let mut range = kp1();
        range.cells[0] = vec![0, 7];
        assert!(matches!(
            build_fan(&range),
            Err(GeomError::IndexOutOfRange { .. })
        ));

        let mut base = kp1();
        base.base_cell = 5;
        assert!(matches!(
            build_fan(&base),
            Err(GeomError::BaseCellOutOfRange { .. })
        ));

        let fan = build_fan(&kp1()).unwrap();
        assert!(fan.intersect(3, &CurveClass(vec![1])).is_err());
    }

    #[test]
    fn permutation_stable() {
        // same polytope as kp2 with the non-base points swapped
        let permuted = PolytopeInput {
            dim: 2,
            points: vec![vec![-1, -1], vec![0, 1], vec![0, 0], vec![1, 0]],
            cells: vec![vec![3, 1, 2], vec![1, 2, 0], vec![3, 2, 0]],
            base_cell: 0,
        };
        let a = build_fan(&kp2()).unwrap();
        let b = build_fan(&permuted).unwrap();
        assert_eq!(a.rays(), b.rays());
        assert_eq!(a.pairing_table(), b.pairing_table());
        assert_eq!(b.permutation(), &[3, 1, 2, 0]);
    }
}
