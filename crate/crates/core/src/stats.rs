//! Size statistics and z-scores over families of opens and points.

use std::collections::HashSet;

use num_traits::Float;
use serde::Serialize;

use crate::chains::t_pchain_at;
use crate::error::{Error, Result};
use crate::space::{OpenId, PointSet, TypedSpace};

/// Raw values per subject with their mean, sample standard deviation and
/// z-scores.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable<T: Float> {
    pub subjects: Vec<String>,
    pub values: Vec<T>,
    pub mean: T,
    pub sample_std: T,
    pub z: Vec<T>,
}

impl<T: Float> ScoreTable<T> {
    /// Fails with [`Error::NoVariance`] for fewer than two values or a zero
    /// standard deviation.
    pub fn new(subjects: Vec<String>, values: Vec<T>) -> Result<Self> {
        assert_eq!(subjects.len(), values.len(), "one value per subject");
        let n = values.len();
        if n < 2 {
            return Err(Error::NoVariance { n });
        }
        // Welford
        let mut mean = T::zero();
        let mut m2 = T::zero();
        let mut count = T::zero();
        for &v in &values {
            count = count + T::one();
            let delta = v - mean;
            mean = mean + delta / count;
            m2 = m2 + delta * (v - mean);
        }
        let sample_std = (m2 / (count - T::one())).sqrt();
        // a NaN deviation is no variance either
        if sample_std.is_nan() || sample_std <= T::zero() {
            return Err(Error::NoVariance { n });
        }
        let z = values.iter().map(|&v| (v - mean) / sample_std).collect();
        Ok(ScoreTable {
            subjects,
            values,
            mean,
            sample_std,
            z,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn z_of(&self, subject: &str) -> Option<T> {
        self.subjects
            .iter()
            .position(|s| s == subject)
            .map(|i| self.z[i])
    }

    /// Subject indices by decreasing z, ties by subject order.
    pub fn ranking(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| {
            self.z[b]
                .partial_cmp(&self.z[a])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        idx
    }

    fn rows(&self) -> Vec<ScoreRow> {
        (0..self.len())
            .map(|i| ScoreRow {
                subject: self.subjects[i].clone(),
                value: self.values[i].to_f64().unwrap_or(f64::NAN),
                z: self.z[i].to_f64().unwrap_or(f64::NAN),
            })
            .collect()
    }

    /// `subject,value,z` lines with a header.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in self.rows() {
            w.serialize(row)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "mean": self.mean.to_f64(),
            "sample_std": self.sample_std.to_f64(),
            "rows": self.rows(),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
struct ScoreRow {
    subject: String,
    value: f64,
    z: f64,
}

fn generator(s: &TypedSpace, p: &str) -> Result<usize> {
    s.ctx().generator_index(p)
}

fn to_float<T: Float>(n: usize) -> T {
    T::from(n).expect("counts fit in any float")
}

/// Distinct opens reachable through `p`-chains, sized.
pub fn pchain_members(s: &TypedSpace, p: &str) -> Result<Vec<OpenId>> {
    let g = generator(s, p)?;
    let mut members: Vec<OpenId> = Vec::new();
    for x in 0..s.point_count() {
        members.extend(t_pchain_at(s, x, 1 << g)?);
    }
    members.sort_unstable();
    members.dedup();
    // largest first, matching the usual reading of a family of rays
    members.sort_by(|&a, &b| s.open(b).len().cmp(&s.open(a).len()).then(a.cmp(&b)));
    Ok(members)
}

/// Sizes of the opens reachable through `p`-chains.
pub fn pchain_stats<T: Float>(s: &TypedSpace, p: &str) -> Result<ScoreTable<T>> {
    let members = pchain_members(s, p)?;
    let subjects = members.iter().map(|&u| s.format_set(s.open(u))).collect();
    let values = members.iter().map(|&u| to_float(s.open(u).len())).collect();
    ScoreTable::new(subjects, values)
}

/// Distinct types of opens around `x` that lie in the sublattice of `p`.
pub fn activity_types(s: &TypedSpace, p: &str, x: usize) -> Result<usize> {
    s.check_point(x)?;
    let g = generator(s, p)?;
    let types: HashSet<&crate::lattice::TypeTerm> = s
        .nonempty()
        .filter(|&u| s.open(u).contains(x))
        .map(|u| s.type_of(u))
        .filter(|t| s.ctx().in_sublattice(t, 1 << g))
        .collect();
    Ok(types.len())
}

/// Per point, the number of distinct `p`-sublattice types forced there.
pub fn point_activity<T: Float>(s: &TypedSpace, p: &str) -> Result<ScoreTable<T>> {
    let mut values = Vec::with_capacity(s.point_count());
    for x in 0..s.point_count() {
        values.push(to_float(activity_types(s, p, x)?));
    }
    ScoreTable::new(s.ctx().points().to_vec(), values)
}

/// How two points share types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AffinityMode {
    /// Types of opens containing both points.
    #[default]
    SingleWitness,
    /// Types forced at each point, possibly through different opens.
    TwoWitness,
}

pub fn pair_types(s: &TypedSpace, x: usize, y: usize, mode: AffinityMode) -> Result<usize> {
    s.check_point(x)?;
    s.check_point(y)?;
    if x == y {
        return Err(Error::Precondition("a pair needs two distinct points".into()));
    }
    let pair = PointSet::singleton(x) | PointSet::singleton(y);
    let count = match mode {
        AffinityMode::SingleWitness => s
            .nonempty()
            .filter(|&u| pair.is_subset(&s.open(u)))
            .map(|u| s.type_of(u))
            .collect::<HashSet<_>>()
            .len(),
        AffinityMode::TwoWitness => {
            let at = |z: usize| {
                s.nonempty()
                    .filter(move |&u| s.open(u).contains(z))
                    .map(|u| s.type_of(u))
                    .collect::<HashSet<_>>()
            };
            at(x).intersection(&at(y)).count()
        }
    };
    Ok(count)
}

/// Shared-type counts over all unordered pairs of distinct points.
pub fn pair_affinity<T: Float>(s: &TypedSpace, mode: AffinityMode) -> Result<ScoreTable<T>> {
    let n = s.point_count();
    let names = s.ctx().points();
    let mut subjects = Vec::new();
    let mut values = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            subjects.push(format!("{{{},{}}}", names[x], names[y]));
            values.push(to_float(pair_types(s, x, y, mode)?));
        }
    }
    ScoreTable::new(subjects, values)
}
