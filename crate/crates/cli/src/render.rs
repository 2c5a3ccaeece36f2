//! Text and JSON renderings of series, slab functions and reports.

use serde::Serialize;
use slabcy_core::series::Rational;
use slabcy_core::slab::{q_names, SlabFunction};
use slabcy_core::QSeries;

/// A series as canonical terms with exact `num/den` coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesJson {
    pub order: i64,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TermJson {
    pub exponent: Vec<i64>,
    pub coefficient: String,
}

pub fn ratio(c: &Rational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

pub fn series_json(s: &QSeries) -> SeriesJson {
    SeriesJson {
        order: s.order(),
        terms: s
            .iter()
            .map(|(e, c)| TermJson {
                exponent: e.clone(),
                coefficient: ratio(c),
            })
            .collect(),
    }
}

/// A slab function block by block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlabJson {
    pub j: usize,
    pub display: String,
    pub blocks: Vec<BlockJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockJson {
    pub ray: usize,
    pub q_shift: Vec<i64>,
    pub z_exponent: Vec<i64>,
    pub series: SeriesJson,
}

pub fn slab_json(f: &SlabFunction) -> SlabJson {
    SlabJson {
        j: f.j + 1,
        display: f.render(),
        blocks: f
            .blocks
            .iter()
            .map(|b| BlockJson {
                ray: b.ray + 1,
                q_shift: b.shift.clone(),
                z_exponent: b.z.clone(),
                series: series_json(&b.series),
            })
            .collect(),
    }
}

/// Names of the Kähler variables for a fan with `n` base rays.
pub fn kahler_names(rank: usize, n: usize) -> Vec<String> {
    q_names(rank, n)
}

/// Names of the complex-side variables, written `Q` in plain text.
pub fn complex_names(rank: usize, n: usize) -> Vec<String> {
    q_names(rank, n)
        .into_iter()
        .map(|s| s.replacen('q', "Q", 1))
        .collect()
}

/// `label = inline form` followed by the canonical term lines.
pub fn series_text(label: &str, s: &QSeries, names: &[String]) -> String {
    format!("{label} = {}\n{}", s.inline(names), s.canonical())
}

/// Pretty JSON followed by a newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// `[a,b,c]`.
pub fn list(v: &[i64]) -> String {
    let inner: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("[{}]", inner.join(","))
}
