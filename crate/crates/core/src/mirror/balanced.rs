//! Nonnegative integer solutions of `Σ a_i u_i = 0` with bounded degree.
//!
//! The search runs over the total `p = Σ a_i`. The exact bound on `p` comes
//! from the minimum degree per unit of `p`, i.e. the minimum of `Σ a_i δ_i`
//! over the polytope `{a ≥ 0, Σ a_i = 1, Σ a_i u_i = 0}`, which is attained at
//! a basic solution with support at most `dim + 1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::linalg::{rat, solve_rational, Solution};
use crate::series::Rational;

/// Raised when some balanced direction has non-positive degree, so no finite
/// enumeration exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonPositiveDirection {
    pub witness: Vec<Rational>,
}

/// Exact minimum degree per unit of `p` over balanced directions, with a
/// minimizing vertex. `None` if no nonzero balanced tuple exists.
pub fn min_degree_per_unit(
    vectors: &[Vec<i64>],
    degrees: &[i64],
) -> Option<(Rational, Vec<Rational>)> {
    let count = vectors.len();
    let dim = vectors.first().map_or(0, Vec::len);
    let mut best: Option<(Rational, Vec<Rational>)> = None;
    let mut subset = Vec::new();
    visit_subsets(count, dim + 1, 0, &mut subset, &mut |support| {
        // rows: each coordinate of Σ a_i u_i, then Σ a_i
        let mut matrix: Vec<Vec<Rational>> = (0..dim)
            .map(|c| support.iter().map(|&i| rat(vectors[i][c])).collect())
            .collect();
        matrix.push(vec![rat(1); support.len()]);
        let mut rhs = vec![Rational::zero(); dim];
        rhs.push(rat(1));
        let Solution::Unique(x) = solve_rational(&matrix, &rhs) else {
            return;
        };
        if x.iter().any(Signed::is_negative) {
            return;
        }
        let value: Rational = support
            .iter()
            .zip(&x)
            .map(|(&i, a)| a * rat(degrees[i]))
            .sum();
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            let mut full = vec![Rational::zero(); count];
            for (&i, a) in support.iter().zip(x) {
                full[i] = a;
            }
            best = Some((value, full));
        }
    });
    best
}

fn visit_subsets(
    count: usize,
    max_size: usize,
    start: usize,
    current: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if !current.is_empty() {
        visit(current);
    }
    if current.len() == max_size {
        return;
    }
    for i in start..count {
        current.push(i);
        visit_subsets(count, max_size, i + 1, current, visit);
        current.pop();
    }
}

/// All nonzero `a ∈ ℤ_{≥0}^len` with `Σ a_i u_i = 0` and `Σ a_i δ_i ≤ bound`,
/// sorted by `(Σ a_i, a)`.
pub fn balanced_tuples(
    vectors: &[Vec<i64>],
    degrees: &[i64],
    bound: i64,
) -> Result<Vec<Vec<u64>>, NonPositiveDirection> {
    let Some((mu, witness)) = min_degree_per_unit(vectors, degrees) else {
        return Ok(Vec::new());
    };
    if !mu.is_positive() {
        return Err(NonPositiveDirection { witness });
    }
    if bound < 1 {
        return Ok(Vec::new());
    }
    // p·μ ≤ deg ≤ bound
    let max_p: BigInt = (Rational::from_integer(bound.into()) / &mu)
        .floor()
        .to_integer();
    let max_p = max_p.to_u64().expect("total bound fits in u64");

    let search = Search::new(vectors, degrees, bound);
    let mut out = Vec::new();
    for p in 1..=max_p {
        let mut a = vec![0u64; vectors.len()];
        let mut partial = vec![0i64; search.dim];
        search.descend(0, p, 0, &mut a, &mut partial, &mut out);
    }
    Ok(out)
}

struct Search<'a> {
    vectors: &'a [Vec<i64>],
    degrees: &'a [i64],
    bound: i64,
    dim: usize,
    // extreme coordinates and degree over indices ≥ k
    suffix_min: Vec<Vec<i64>>,
    suffix_max: Vec<Vec<i64>>,
    suffix_min_degree: Vec<i64>,
}

impl<'a> Search<'a> {
    fn new(vectors: &'a [Vec<i64>], degrees: &'a [i64], bound: i64) -> Self {
        let len = vectors.len();
        let dim = vectors.first().map_or(0, Vec::len);
        let mut suffix_min = vec![vec![i64::MAX; dim]; len + 1];
        let mut suffix_max = vec![vec![i64::MIN; dim]; len + 1];
        let mut suffix_min_degree = vec![i64::MAX; len + 1];
        for k in (0..len).rev() {
            for c in 0..dim {
                suffix_min[k][c] = suffix_min[k + 1][c].min(vectors[k][c]);
                suffix_max[k][c] = suffix_max[k + 1][c].max(vectors[k][c]);
            }
            suffix_min_degree[k] = suffix_min_degree[k + 1].min(degrees[k]);
        }
        Search {
            vectors,
            degrees,
            bound,
            dim,
            suffix_min,
            suffix_max,
            suffix_min_degree,
        }
    }

    fn descend(
        &self,
        k: usize,
        remaining: u64,
        degree: i64,
        a: &mut Vec<u64>,
        partial: &mut Vec<i64>,
        out: &mut Vec<Vec<u64>>,
    ) {
        let len = self.vectors.len();
        if k == len {
            if remaining == 0 && degree <= self.bound && partial.iter().all(|&x| x == 0) {
                out.push(a.clone());
            }
            return;
        }
        let r = remaining as i64;
        // the remaining r units must cancel the partial sum
        for c in 0..self.dim {
            let need = -partial[c];
            if need < r * self.suffix_min[k][c] || need > r * self.suffix_max[k][c] {
                return;
            }
        }
        if degree + r * self.suffix_min_degree[k] > self.bound {
            return;
        }
        let choices = if k == len - 1 {
            remaining..=remaining
        } else {
            0..=remaining
        };
        for x in choices {
            let xi = x as i64;
            a[k] = x;
            for c in 0..self.dim {
                partial[c] += xi * self.vectors[k][c];
            }
            self.descend(
                k + 1,
                remaining - x,
                degree + xi * self.degrees[k],
                a,
                partial,
                out,
            );
            for c in 0..self.dim {
                partial[c] -= xi * self.vectors[k][c];
            }
            a[k] = 0;
        }
    }
}

/// Multinomial coefficient `(Σ a_i)! / Π a_i!`.
pub fn multinomial(a: &[u64]) -> BigInt {
    let mut total = 0u64;
    let mut acc = BigInt::from(1);
    for &x in a {
        for t in 1..=x {
            total += 1;
            acc *= BigInt::from(total);
            acc = acc.div_floor(&BigInt::from(t));
        }
    }
    acc
}
