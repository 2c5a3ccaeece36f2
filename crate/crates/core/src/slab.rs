//! Slab functions `f_j = Σ_i A_i(q) q^{C_i − C_j} z^{v_i − v_j}`.
//!
//! The blocks `A_i` are shared by every `f_j`, so the relation
//! `f_i = q^{C_j − C_i} z^{v_j − v_i} f_j` holds by construction. The
//! normalization condition asks that `log f_j` has no nonconstant term free
//! of `z`. [`solve_normalized`] imposes it degree by degree, and
//! [`z_free_log`] measures it by expanding powers of the Laurent polynomial
//! directly.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::geom::{FanData, Grading};
use crate::mirror::{self, balanced, g_coefficient};
use crate::series::{monomial_text, Exponent, QSeries, Rational};
use crate::{Error, Result};

/// One block `A · q^shift · z^z` of a slab function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlabBlock {
    pub ray: usize,
    pub series: QSeries,
    pub shift: Exponent,
    pub z: Exponent,
}

/// The slab function attached to ray `j`, one block per ray.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlabFunction {
    pub j: usize,
    pub order: i64,
    pub blocks: Vec<SlabBlock>,
}

/// Builds `f_j` from the block series `A_0, …, A_{m−1}`.
pub fn assemble(fan: &FanData, j: usize, a: &[QSeries], order: i64) -> Result<SlabFunction> {
    fan.check_ray(j)?;
    if a.len() != fan.m() {
        return Err(Error::BadBlock {
            ray: a.len().min(fan.m()),
            reason: format!("expected {} blocks, found {}", fan.m(), a.len()),
        });
    }
    let cj = fan.ray_class(j);
    let mut blocks = Vec::with_capacity(fan.m());
    for (i, series) in a.iter().enumerate() {
        if !series.constant_term().is_one() {
            return Err(Error::BadBlock {
                ray: i,
                reason: format!("constant term is {}", series.constant_term()),
            });
        }
        if series.order() < order {
            return Err(Error::BadBlock {
                ray: i,
                reason: format!("order {} is below {order}", series.order()),
            });
        }
        let shift = fan
            .ray_class(i)
            .0
            .iter()
            .zip(&cj.0)
            .map(|(x, y)| x - y)
            .collect();
        blocks.push(SlabBlock {
            ray: i,
            series: series.truncate(order),
            shift,
            z: fan.z_exponent(i, j),
        });
    }
    Ok(SlabFunction { j, order, blocks })
}

impl SlabFunction {
    pub fn block(&self, ray: usize) -> &SlabBlock {
        &self.blocks[ray]
    }

    /// Display form such as `(1 + q) + x + q*x^-1`: the constant block first,
    /// the others by decreasing `z` exponent.
    pub fn render(&self) -> String {
        let mut rest: Vec<&SlabBlock> = self.blocks.iter().filter(|b| b.ray != self.j).collect();
        rest.sort_by(|a, b| b.z.cmp(&a.z).then(a.ray.cmp(&b.ray)));
        let mut parts = vec![self.render_block(&self.blocks[self.j])];
        parts.extend(rest.into_iter().map(|b| self.render_block(b)));
        parts.join(" + ")
    }

    fn render_block(&self, b: &SlabBlock) -> String {
        let q_names = q_names(b.shift.len(), b.z.len() + 1);
        let mut factors = Vec::new();
        if b.series != QSeries::one(b.series.grading(), b.series.order()) {
            factors.push(format!("({})", b.series.inline(&q_names)));
        }
        let q = monomial_text(&b.shift, &q_names);
        if !q.is_empty() {
            factors.push(q);
        }
        let z = monomial_text(&b.z, &z_names(b.z.len()));
        if !z.is_empty() {
            factors.push(z);
        }
        if factors.is_empty() {
            "1".into()
        } else {
            factors.join("*")
        }
    }
}

/// Names of the Kähler variables: `q` alone, or `q<ray>` with 1-based ray
/// numbers of the curve-basis classes.
pub fn q_names(rank: usize, n: usize) -> Vec<String> {
    if rank == 1 {
        vec!["q".into()]
    } else {
        (0..rank).map(|k| format!("q{}", n + k + 1)).collect()
    }
}

/// Names of the `z` variables: `x`, `y` when there are at most two.
pub fn z_names(count: usize) -> Vec<String> {
    if count <= 2 {
        ["x", "y"][..count].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=count).map(|k| format!("z{k}")).collect()
    }
}

// Laurent polynomial in z with Laurent monomials in q, keyed by (z, q).
type Laurent = BTreeMap<(Exponent, Exponent), Rational>;

fn add_laurent(acc: &mut Laurent, key: (Exponent, Exponent), c: Rational) {
    use std::collections::btree_map::Entry;
    match acc.entry(key) {
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

/// The part of `log f_j` without `z`, computed as
/// `log A_j + Σ_p (−1)^{p−1}/p · [X^p]_{z⁰}` with
/// `X = Σ_{i≠j} (A_i/A_j) q^{C_i−C_j} z^{v_i−v_j}` expanded by repeated
/// multiplication.
pub fn z_free_log(f: &SlabFunction) -> Result<QSeries> {
    let order = f.order;
    let own = &f.blocks[f.j];
    let grading = own.series.grading().clone();
    let mut result = own.series.log()?;
    let others: Vec<&SlabBlock> = f.blocks.iter().filter(|b| b.ray != f.j).collect();
    if others.is_empty() {
        return Ok(result);
    }
    let vectors: Vec<Exponent> = others.iter().map(|b| b.z.clone()).collect();
    let degrees: Vec<i64> = others.iter().map(|b| grading.degree(&b.shift)).collect();
    let Some((mu, _)) = balanced::min_degree_per_unit(&vectors, &degrees) else {
        return Ok(result);
    };
    if !mu.is_positive() {
        return Err(Error::GradingNotPositive { ray: f.j });
    }
    // a z-free product of p blocks has degree at least p·μ
    let max_p = (Rational::from_integer(order.into()) / &mu)
        .floor()
        .to_integer()
        .try_into()
        .unwrap_or(0i64);

    let inv = own.series.inverse()?;
    let mut x = Laurent::new();
    for b in &others {
        let ratio = &b.series * &inv;
        for (e, c) in ratio.iter() {
            let q = e.iter().zip(&b.shift).map(|(a, s)| a + s).collect();
            add_laurent(&mut x, (b.z.clone(), q), c.clone());
        }
    }
    let dim = vectors[0].len();
    let min_shift = degrees.iter().copied().min().unwrap();
    let lo: Vec<i64> = (0..dim)
        .map(|c| vectors.iter().map(|v| v[c]).min().unwrap())
        .collect();
    let hi: Vec<i64> = (0..dim)
        .map(|c| vectors.iter().map(|v| v[c]).max().unwrap())
        .collect();
    // a partial product is kept only if some number r of further factors can
    // cancel its z exponent within the degree budget
    let viable = |z: &[i64], deg: i64, left: i64| {
        (0..=left).any(|r| {
            deg + r * min_shift <= order
                && (0..dim).all(|c| -z[c] >= r * lo[c] && -z[c] <= r * hi[c])
        })
    };

    let zero_z = vec![0; dim];
    let mut power = Laurent::new();
    power.insert((zero_z.clone(), vec![0; grading.rank()]), Rational::one());
    for p in 1..=max_p {
        let mut next = Laurent::new();
        for ((za, qa), ca) in &power {
            for ((zb, qb), cb) in &x {
                let z: Exponent = za.iter().zip(zb).map(|(a, b)| a + b).collect();
                let q: Exponent = qa.iter().zip(qb).map(|(a, b)| a + b).collect();
                if viable(&z, grading.degree(&q), max_p - p) {
                    add_laurent(&mut next, (z, q), ca * cb);
                }
            }
        }
        power = next;
        let sign = if p % 2 == 1 {
            Rational::one()
        } else {
            -Rational::one()
        };
        let weight = sign / Rational::from_integer(p.into());
        let mut terms = Vec::new();
        for ((z, q), c) in power.range((zero_z.clone(), vec![])..) {
            if *z != zero_z {
                break;
            }
            let deg = grading.degree(q);
            if deg <= 0 {
                return Err(Error::InternalLaurentLeak {
                    exponent: q.clone(),
                });
            }
            if deg <= order {
                terms.push((q.clone(), c * &weight));
            }
        }
        result = &result + &QSeries::from_terms(&grading, order, terms)?;
    }
    Ok(result)
}

/// The blocks `A_i` fixed by the normalization condition on every `f_j`.
///
/// With `L_j = log A_j`, the `z`-free part of `log f_j` is
/// `L_j + Σ_a (−1)^{p−1}(p−1)!/Π a_i! · q^{d(a)} exp(Σ a_i L_i − p L_j)`
/// over balanced tuples `a`. Each term of the sum has degree at least
/// `deg d(a) ≥ 1`, so the degree-`D` part of `L_j` is determined by the
/// parts of degree below `D`.
pub fn solve_normalized(fan: &FanData, order: i64, grading: &Grading) -> Result<Vec<QSeries>> {
    let m = fan.m();
    let tuples = (0..m)
        .map(|j| mirror::enumerate_balanced(fan, j, order, grading))
        .collect::<Result<Vec<_>>>()?;
    let mut logs = vec![QSeries::zero(grading, order); m];
    for degree in 1..=order {
        // every j reads only the parts below `degree`, so all updates of one
        // degree are computed before any is applied
        let mut updates = Vec::with_capacity(m);
        for (j, list) in tuples.iter().enumerate() {
            let mut sum = QSeries::zero(grading, degree);
            for t in list {
                let mut exponent = logs[j]
                    .truncate(degree)
                    .scale(&-Rational::from_integer(t.p.into()));
                for (i, &a) in t.a.iter().enumerate() {
                    if a != 0 {
                        let scaled = logs[i]
                            .truncate(degree)
                            .scale(&Rational::from_integer(a.into()));
                        exponent = &exponent + &scaled;
                    }
                }
                // (−1)^{p−1}(p−1)!/Π a! is minus the hypergeometric coefficient
                let c = -g_coefficient(t.p, &t.a);
                let term = exponent.exp()?.scale(&c).shift(&t.class.0)?;
                sum = &sum + &term;
            }
            updates.push(-&sum.homogeneous(degree));
        }
        for (log, update) in logs.iter_mut().zip(updates) {
            *log = &*log + &update.with_order(order);
        }
    }
    logs.iter().map(|l| Ok(l.exp()?)).collect()
}

/// Whether `f_i = q^{C_j − C_i} z^{v_j − v_i} f_j` holds block by block.
pub fn slab_relation_check(f_i: &SlabFunction, f_j: &SlabFunction) -> bool {
    if f_i.blocks.len() != f_j.blocks.len() || f_i.j >= f_j.blocks.len() {
        return false;
    }
    let pivot = &f_j.blocks[f_i.j];
    let order = f_i.order.min(f_j.order);
    f_i.blocks.iter().zip(&f_j.blocks).all(|(bi, bj)| {
        let shift: Exponent = bj
            .shift
            .iter()
            .zip(&pivot.shift)
            .map(|(a, b)| a - b)
            .collect();
        let z: Exponent = bj.z.iter().zip(&pivot.z).map(|(a, b)| a - b).collect();
        bi.ray == bj.ray
            && bi.shift == shift
            && bi.z == z
            && bi.series.truncate(order) == bj.series.truncate(order)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{build_fan, PolytopeInput};

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

    fn ones(m: usize, order: i64) -> Vec<QSeries> {
        vec![QSeries::one(&Grading::ones(1), order); m]
    }

    #[test]
    fn kp1_rendering() {
        let mut a = ones(3, 4);
        a[1] = uni(4, &[r(1, 1), r(1, 1)]);
        let f = assemble(&kp1(), 1, &a, 4).unwrap();
        assert_eq!(f.render(), "(1 + q) + x + q*x^-1");
        let f = assemble(&kp2(), 2, &ones(4, 2), 2).unwrap();
        assert_eq!(f.render(), "1 + x + y + q*x^-1*y^-1");
    }

    #[test]
    fn bad_constant_rejected() {
        let mut a = ones(3, 2);
        a[0] = uni(2, &[r(2, 1)]);
        assert!(matches!(
            assemble(&kp1(), 1, &a, 2),
            Err(Error::BadBlock { ray: 0, .. })
        ));
    }

    #[test]
    fn uncorrected_z_free_is_minus_g() {
        let f = assemble(&kp1(), 1, &ones(3, 4), 4).unwrap();
        let expect = uni(4, &[r(0, 1), r(-1, 1), r(-3, 2), r(-10, 3), r(-35, 4)]);
        assert_eq!(z_free_log(&f).unwrap(), expect);
    }

    #[test]
    fn solver_examples() {
        let g = Grading::ones(1);
        let a = solve_normalized(&kp1(), 6, &g).unwrap();
        assert_eq!(a[0], QSeries::one(&g, 6));
        assert_eq!(a[1], uni(6, &[r(1, 1), r(1, 1)]));
        assert_eq!(a[2], QSeries::one(&g, 6));

        let a = solve_normalized(&kp2(), 4, &g).unwrap();
        assert_eq!(
            a[2],
            uni(4, &[r(1, 1), r(-2, 1), r(5, 1), r(-32, 1), r(286, 1)])
        );
        for i in [0, 1, 3] {
            assert_eq!(a[i], QSeries::one(&g, 4));
        }
        for j in 0..4 {
            let f = assemble(&kp2(), j, &a, 4).unwrap();
            assert!(z_free_log(&f).unwrap().is_zero());
        }
    }

    #[test]
    fn relation_and_negative_control() {
        let g = Grading::ones(1);
        let fan = kp2();
        let a = solve_normalized(&fan, 3, &g).unwrap();
        let fs: Vec<_> = (0..4).map(|j| assemble(&fan, j, &a, 3).unwrap()).collect();
        for fi in &fs {
            for fj in &fs {
                assert!(slab_relation_check(fi, fj));
            }
        }
        let mut bad = fs[3].clone();
        bad.blocks[1].series = uni(3, &[r(1, 1), r(1, 1)]);
        assert!(!slab_relation_check(&fs[2], &bad));
    }

    #[test]
    fn simplex_is_constant() {
        let fan = build_fan(&PolytopeInput {
            dim: 2,
            points: vec![vec![0, 0], vec![1, 0], vec![0, 1]],
            cells: vec![vec![0, 1, 2]],
            base_cell: 0,
        })
        .unwrap();
        let g = Grading::new(vec![]).unwrap();
        let a = solve_normalized(&fan, 3, &g).unwrap();
        assert!(a.iter().all(|s| *s == QSeries::one(&g, 3)));
        let f = assemble(&fan, 0, &a, 3).unwrap();
        assert!(z_free_log(&f).unwrap().is_zero());
    }
}
