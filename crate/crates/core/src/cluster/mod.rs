//! Distance matrices, cluster validation and statistics, and cluster mining.

mod dendrogram;
mod io;
mod mining;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{information_distance, Complexity, ComplexityModel};
use crate::scalar::{at_least_pow2, floor_log2, Scalar};

pub use dendrogram::{dendrogram_dot, Merge};
pub use io::ClusterRecord;
pub use mining::{mine_clusters, EXACT_MINING_LIMIT};

/// Symmetric matrix of pairwise distances. `None` entries are infinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix<T> {
    ids: Vec<String>,
    entries: Vec<Option<T>>,
}

impl<T: Scalar> DistanceMatrix<T> {
    /// Builds a matrix from row-major entries, checking symmetry and sign.
    pub fn new(ids: Vec<String>, entries: Vec<Option<T>>) -> Result<Self> {
        let n = ids.len();
        if entries.len() != n * n {
            return Err(Error::Format(format!(
                "expected {} entries for {n} ids, got {}",
                n * n,
                entries.len()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                let e = entries[i * n + j];
                if e != entries[j * n + i] {
                    return Err(Error::AsymmetricMatrix(i, j));
                }
                if let Some(v) = e {
                    if !v.is_valid_distance() {
                        return Err(Error::BadDistance(i, j));
                    }
                }
            }
        }
        Ok(DistanceMatrix { ids, entries })
    }

    /// Evaluates `f` once per unordered pair (diagonal included), in parallel,
    /// and mirrors the result.
    pub fn from_pairs<F>(ids: Vec<String>, f: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> Result<Option<T>> + Sync,
    {
        let n = ids.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let values: Vec<Option<T>> = pairs
            .par_iter()
            .map(|&(i, j)| f(i, j))
            .collect::<Result<_>>()?;
        let mut entries = vec![None; n * n];
        for (&(i, j), v) in pairs.iter().zip(values) {
            entries[i * n + j] = v;
            entries[j * n + i] = v;
        }
        DistanceMatrix::new(ids, entries)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|x| x == id)
    }

    pub fn resolve(&self, ids: &[impl AsRef<str>]) -> Result<Vec<usize>> {
        ids.iter()
            .map(|id| {
                self.index_of(id.as_ref())
                    .ok_or_else(|| Error::UnknownMember(id.as_ref().to_string()))
            })
            .collect()
    }

    pub fn get(&self, i: usize, j: usize) -> Option<T> {
        self.entries[i * self.len() + j]
    }

    /// Largest finite entry.
    pub fn max_entry(&self) -> Option<T> {
        self.entries.iter().flatten().copied().reduce(Scalar::max_of)
    }

    pub fn has_infinite(&self) -> bool {
        self.entries.iter().any(Option::is_none)
    }

    /// Applies `f` to every finite entry.
    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Result<DistanceMatrix<U>> {
        DistanceMatrix::new(
            self.ids.clone(),
            self.entries.iter().map(|e| e.map(&f)).collect(),
        )
    }

    fn check_members(&self, members: &[usize]) -> Result<()> {
        match members.iter().find(|&&i| i >= self.len()) {
            Some(&bad) => Err(Error::UnknownItem(bad)),
            None => Ok(()),
        }
    }

    /// Diameter over all pairs including `x` with itself; `None` if some pair
    /// is infinite, reported with the offending pair.
    pub fn diameter(&self, members: &[usize]) -> Result<std::result::Result<T, (usize, usize)>> {
        self.check_members(members)?;
        if members.is_empty() {
            return Err(Error::EmptyCluster);
        }
        let mut best = T::zero();
        for (k, &a) in members.iter().enumerate() {
            for &b in &members[k..] {
                match self.get(a, b) {
                    Some(v) => best = best.max_of(v),
                    None => return Ok(Err((a, b))),
                }
            }
        }
        Ok(Ok(best))
    }
}

/// Distance matrix of a complexity model over the given items.
pub fn model_matrix<M: ComplexityModel + ?Sized>(model: &M, items: &[usize]) -> Result<DistanceMatrix<u32>> {
    for &i in items {
        model.check_item(i)?;
    }
    let ids = items.iter().map(|&i| model.label(i)).collect();
    DistanceMatrix::from_pairs(ids, |a, b| {
        Ok(match information_distance(model, items[a], items[b]) {
            Complexity::Bits(v) => Some(v),
            Complexity::Infinite => None,
        })
    })
}

/// Distance matrix over every item of the model, so matrix index = item.
pub fn full_model_matrix<M: ComplexityModel + ?Sized>(model: &M) -> Result<DistanceMatrix<u32>> {
    let items: Vec<usize> = (0..model.len()).collect();
    model_matrix(model, &items)
}

/// A validated cluster: sorted member indices, diameter and logsize.
#[derive(Clone, Debug, PartialEq)]
pub struct Cluster<T> {
    pub members: Vec<usize>,
    pub diameter: T,
    pub logsize: u32,
}

impl<T: Scalar> Cluster<T> {
    pub fn from_members(mut members: Vec<usize>, matrix: &DistanceMatrix<T>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        let stats = cluster_stats(&members, matrix)?;
        Ok(Cluster {
            members,
            diameter: stats.diameter,
            logsize: stats.logsize,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Outcome of [`validate_cluster`].
#[derive(Clone, Debug, PartialEq)]
pub enum Validation<T> {
    Valid,
    /// A pair farther apart than `m` (`None` = infinite distance).
    PairTooFar { a: usize, b: usize, distance: Option<T> },
    /// Fewer than `2^l` members.
    TooSmall { size: usize, l: i64 },
}

impl<T> Validation<T> {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validation::Valid)
    }
}

impl<T: Scalar> Validation<T> {
    pub fn describe(&self, ids: &[String]) -> String {
        match self {
            Validation::Valid => "valid".into(),
            Validation::PairTooFar { a, b, distance } => format!(
                "dist({}, {}) = {}",
                ids[*a],
                ids[*b],
                distance.map_or("inf".to_string(), |d| d.to_string())
            ),
            Validation::TooSmall { size, l } => format!("{size} members < 2^{l}"),
        }
    }
}

/// Checks that all pairs of `members` are within `m` and `#members >= 2^l`.
/// A negative `l` only requires a nonempty set.
pub fn validate_cluster<T: Scalar>(
    members: &[usize],
    m: T,
    l: i64,
    matrix: &DistanceMatrix<T>,
) -> Result<Validation<T>> {
    matrix.check_members(members)?;
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for (k, &a) in sorted.iter().enumerate() {
        for &b in &sorted[k..] {
            let d = matrix.get(a, b);
            if !matches!(d, Some(v) if v <= m) {
                return Ok(Validation::PairTooFar { a, b, distance: d });
            }
        }
    }
    if !at_least_pow2(sorted.len() as u64, l) {
        return Ok(Validation::TooSmall {
            size: sorted.len(),
            l,
        });
    }
    Ok(Validation::Valid)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClusterStats<T> {
    pub diameter: T,
    pub logsize: u32,
    /// `diameter - logsize`; smaller means denser.
    pub density_gap: f64,
}

pub fn cluster_stats<T: Scalar>(members: &[usize], matrix: &DistanceMatrix<T>) -> Result<ClusterStats<T>> {
    let mut sorted = members.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let diameter = matrix.diameter(&sorted)?.map_err(|(a, b)| {
        Error::InfiniteDistance(matrix.ids[a].clone(), matrix.ids[b].clone())
    })?;
    let logsize = floor_log2(sorted.len() as u64);
    Ok(ClusterStats {
        diameter,
        logsize,
        density_gap: diameter.to_f64().unwrap_or(f64::NAN) - logsize as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{SetModel, Universe};

    fn three_sets() -> DistanceMatrix<u32> {
        let model = SetModel::new(Universe::new(3).unwrap()).unwrap();
        let items: Vec<usize> = ["{0}", "{0,1}", "{0,1,2}"]
            .iter()
            .map(|l| model.resolve(l).unwrap())
            .collect();
        model_matrix(&model, &items).unwrap()
    }

    #[test]
    fn set_model_matrix_examples() {
        let m = three_sets();
        let expect = [[0, 1, 2], [1, 0, 1], [2, 1, 0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.get(i, j), Some(expect[i][j]));
            }
        }
        let model = SetModel::new(Universe::new(3).unwrap()).unwrap();
        let pair = [model.resolve("{0,1}").unwrap(), model.resolve("{1,2}").unwrap()];
        assert_eq!(model_matrix(&model, &pair).unwrap().get(0, 1), Some(1));
    }

    #[test]
    fn matrix_rejects_asymmetry_and_negatives() {
        let ids = vec!["a".to_string(), "b".to_string()];
        assert!(matches!(
            DistanceMatrix::new(ids.clone(), vec![Some(0.0), Some(1.0), Some(2.0), Some(0.0)]),
            Err(Error::AsymmetricMatrix(0, 1))
        ));
        assert!(matches!(
            DistanceMatrix::new(ids, vec![Some(0.0), Some(-1.0), Some(-1.0), Some(0.0)]),
            Err(Error::BadDistance(0, 1))
        ));
    }

    #[test]
    fn validation_examples() {
        let m = three_sets();
        assert_eq!(validate_cluster(&[1], 0, 0, &m).unwrap(), Validation::Valid);
        assert_eq!(
            validate_cluster(&[0, 2], 1, 0, &m).unwrap(),
            Validation::PairTooFar { a: 0, b: 2, distance: Some(2) }
        );
        assert_eq!(
            validate_cluster(&[0, 1, 2], 2, 2, &m).unwrap(),
            Validation::TooSmall { size: 3, l: 2 }
        );
        assert!(matches!(validate_cluster(&[7], 1, 0, &m), Err(Error::UnknownItem(7))));
    }

    #[test]
    fn seven_members_are_not_eight() {
        let ids: Vec<String> = (0..7).map(|i| format!("s{i}")).collect();
        let m = DistanceMatrix::from_pairs(ids, |_, _| Ok(Some(0u32))).unwrap();
        let all: Vec<usize> = (0..7).collect();
        assert_eq!(
            validate_cluster(&all, 0, 3, &m).unwrap(),
            Validation::TooSmall { size: 7, l: 3 }
        );
        assert!(validate_cluster(&all, 0, 2, &m).unwrap().is_valid());
    }

    #[test]
    fn infinite_entries_disqualify() {
        let ids = vec!["a".to_string(), "b".to_string()];
        let m = DistanceMatrix::new(ids, vec![Some(0u32), None, None, Some(0)]).unwrap();
        assert_eq!(
            validate_cluster(&[0, 1], 100, 0, &m).unwrap(),
            Validation::PairTooFar { a: 0, b: 1, distance: None }
        );
        assert!(matches!(cluster_stats(&[0, 1], &m), Err(Error::InfiniteDistance(..))));
    }

    #[test]
    fn stats_examples() {
        let m = three_sets();
        let s = cluster_stats(&[1], &m).unwrap();
        assert_eq!((s.diameter, s.logsize, s.density_gap), (0, 0, 0.0));
        // antipodal pair at distance k
        let model = SetModel::new(Universe::new(4).unwrap()).unwrap();
        let pair = [model.resolve("{0,1}").unwrap(), model.resolve("{2,3}").unwrap()];
        let mm = model_matrix(&model, &pair).unwrap();
        let s = cluster_stats(&[0, 1], &mm).unwrap();
        assert_eq!((s.diameter, s.logsize, s.density_gap), (2, 1, 1.0));
    }

    #[test]
    fn subsets_of_clusters_remain_clusters() {
        let model = SetModel::new(Universe::new(4).unwrap()).unwrap();
        let full = full_model_matrix(&model).unwrap();
        // all supersets of {0}: diameter 3, 8 members
        let s: Vec<usize> = (0..16).filter(|x| x & 1 == 1).collect();
        assert!(validate_cluster(&s, 3, 3, &full).unwrap().is_valid());
        for mask in 0u32..256 {
            let sub: Vec<usize> = (0..8).filter(|k| mask >> k & 1 == 1).map(|k| s[k]).collect();
            if sub.is_empty() {
                continue;
            }
            let l = floor_log2(sub.len() as u64) as i64;
            assert!(validate_cluster(&sub, 3, l, &full).unwrap().is_valid());
        }
    }
}
