//! The referential-cluster filter and the multiplicity bound.

use serde::{Deserialize, Serialize};

use crate::cluster::{validate_cluster, DistanceMatrix};
use crate::error::{Error, Result};
use crate::model::ComplexityModel;
use crate::scalar::exceeds_pow2;

/// A cluster kept by the filter, with its ordinal (assignment order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeptCluster {
    pub ordinal: usize,
    /// Position in the input stream.
    pub stream_index: usize,
    /// Sorted, deduplicated member indices.
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferentialRegistry {
    pub m: u32,
    pub d: u32,
    pub dprime: u32,
    pub kept: Vec<KeptCluster>,
    /// `(stream index, ordinal of the earlier cluster it overlapped)`.
    pub dropped: Vec<(usize, usize)>,
}

fn intersection_size(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

impl ReferentialRegistry {
    /// Exponent `m - d'` of the large-intersection threshold.
    pub fn threshold_exponent(&self) -> i64 {
        self.m as i64 - self.dprime as i64
    }

    /// `#(a ∩ b) > 2^(m - d')`.
    pub fn is_large(&self, a: &[usize], b: &[usize]) -> bool {
        exceeds_pow2(intersection_size(a, b) as u64, self.threshold_exponent())
    }

    pub fn intersection(a: &[usize], b: &[usize]) -> usize {
        intersection_size(a, b)
    }

    /// Re-checks the pairwise-intersection invariant; returns the first
    /// offending pair of ordinals with their intersection size.
    pub fn invariant_violation(&self) -> Option<(usize, usize, usize)> {
        for (k, a) in self.kept.iter().enumerate() {
            for b in &self.kept[k + 1..] {
                if self.is_large(&a.members, &b.members) {
                    return Some((a.ordinal, b.ordinal, intersection_size(&a.members, &b.members)));
                }
            }
        }
        None
    }

    /// Ordinals of the kept clusters containing `item`, ascending.
    pub fn covering(&self, item: usize) -> Vec<usize> {
        self.kept
            .iter()
            .filter(|c| c.members.binary_search(&item).is_ok())
            .map(|c| c.ordinal)
            .collect()
    }

    pub fn get(&self, ordinal: usize) -> Option<&KeptCluster> {
        self.kept.get(ordinal).filter(|c| c.ordinal == ordinal)
    }

    /// Number of kept clusters containing each of `0..items`.
    pub fn multiplicities(&self, items: usize) -> Vec<usize> {
        let mut mult = vec![0; items];
        for c in &self.kept {
            for &x in &c.members {
                if x < items {
                    mult[x] += 1;
                }
            }
        }
        mult
    }

    pub fn to_file(&self, ids: &[String]) -> RegistryFile {
        RegistryFile {
            m: self.m,
            d: self.d,
            dprime: self.dprime,
            kept: self
                .kept
                .iter()
                .map(|c| RegistryEntry {
                    ordinal: c.ordinal,
                    stream_index: c.stream_index,
                    members: c.members.iter().map(|&i| ids[i].clone()).collect(),
                })
                .collect(),
        }
    }

    /// Loads a registry dump. The invariant is not re-checked here; use
    /// [`ReferentialRegistry::invariant_violation`].
    pub fn from_file(file: &RegistryFile, resolve: impl Fn(&str) -> Option<usize>) -> Result<Self> {
        let mut kept = Vec::with_capacity(file.kept.len());
        for (k, e) in file.kept.iter().enumerate() {
            if e.ordinal != k {
                return Err(Error::Format(format!("registry ordinal {} at position {k}", e.ordinal)));
            }
            let mut members = e
                .members
                .iter()
                .map(|id| resolve(id).ok_or_else(|| Error::UnknownMember(id.clone())))
                .collect::<Result<Vec<_>>>()?;
            members.sort_unstable();
            members.dedup();
            kept.push(KeptCluster {
                ordinal: e.ordinal,
                stream_index: e.stream_index,
                members,
            });
        }
        Ok(ReferentialRegistry {
            m: file.m,
            d: file.d,
            dprime: file.dprime,
            kept,
            dropped: Vec::new(),
        })
    }
}

/// JSON dump of a registry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegistryFile {
    pub m: u32,
    pub d: u32,
    pub dprime: u32,
    pub kept: Vec<RegistryEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegistryEntry {
    pub ordinal: usize,
    #[serde(default)]
    pub stream_index: usize,
    pub members: Vec<String>,
}

/// One line of a cluster stream file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamRecord {
    pub members: Vec<String>,
}

/// Parses a JSON-lines cluster stream; blank lines are skipped.
pub fn parse_stream(text: &str, resolve: impl Fn(&str) -> Option<usize>) -> Result<Vec<Vec<usize>>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let rec: StreamRecord = serde_json::from_str(line)?;
            rec.members
                .iter()
                .map(|id| resolve(id).ok_or_else(|| Error::UnknownMember(id.clone())))
                .collect()
        })
        .collect()
}

/// Keeps each stream cluster whose intersection with every earlier kept
/// cluster is at most `2^(m - d')`. Every element must be an
/// `(m, m - d)`-cluster of `matrix`.
pub fn referential_filter(
    stream: &[Vec<usize>],
    m: u32,
    d: u32,
    dprime: u32,
    matrix: &DistanceMatrix<u32>,
) -> Result<ReferentialRegistry> {
    let mut registry = ReferentialRegistry {
        m,
        d,
        dprime,
        kept: Vec::new(),
        dropped: Vec::new(),
    };
    let l = m as i64 - d as i64;
    for (index, cluster) in stream.iter().enumerate() {
        let v = validate_cluster(cluster, m, l, matrix)?;
        if !v.is_valid() {
            return Err(Error::InvalidStreamCluster {
                index,
                m,
                l,
                reason: v.describe(matrix.ids()),
            });
        }
        let mut members = cluster.clone();
        members.sort_unstable();
        members.dedup();
        match registry.kept.iter().find(|k| registry.is_large(&k.members, &members)) {
            Some(blocker) => registry.dropped.push((index, blocker.ordinal)),
            None => {
                let ordinal = registry.kept.len();
                registry.kept.push(KeptCluster {
                    ordinal,
                    stream_index: index,
                    members,
                });
            }
        }
    }
    Ok(registry)
}

/// First item `x` whose radius-`m` ball `#{y : C(y|x) <= m}` exceeds
/// `2^(m+1) - 1`, if any. Description systems never produce one.
pub fn ball_condition<M: ComplexityModel + ?Sized>(model: &M, m: u32) -> Option<(usize, usize)> {
    let cap = (1u64 << (m + 1).min(63)) - 1;
    (0..model.len()).find_map(|x| {
        let ball = (0..model.len())
            .filter(|&y| model.complexity(y, Some(x)).within(m))
            .count();
        (ball as u64 > cap).then_some((x, ball))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicityReport {
    pub max_multiplicity: usize,
    /// Item attaining the maximum (first one).
    pub witness: Option<usize>,
    /// `2^(d+1)`
    pub bound: u64,
    /// Whether the model satisfied the ball condition at radius `m`.
    pub ball_condition: bool,
    pub pass: bool,
}

/// Checks that no item lies in more than `2^(d+1)` kept clusters. Refuses
/// registries built with `d' <= 2d + 1`.
pub fn multiplicity_check<M: ComplexityModel + ?Sized>(
    registry: &ReferentialRegistry,
    model: &M,
) -> Result<MultiplicityReport> {
    if registry.dprime <= 2 * registry.d + 1 {
        return Err(Error::MultiplicityHypothesis {
            d: registry.d,
            dprime: registry.dprime,
        });
    }
    let mult = registry.multiplicities(model.len());
    let (witness, max_multiplicity) = mult
        .iter()
        .enumerate()
        .fold((None, 0), |(w, best), (x, &k)| if k > best { (Some(x), k) } else { (w, best) });
    let bound = 1u64 << (registry.d + 1).min(63);
    Ok(MultiplicityReport {
        max_multiplicity,
        witness,
        bound,
        ball_condition: ball_condition(model, registry.m).is_none(),
        pass: max_multiplicity as u64 <= bound,
    })
}
