//! Core certificates: the registry ordinal of a kept cluster, plus explicit
//! two-part codes that recover every member of the target cluster from the
//! ordinal and the ordinal from every member.
//!
//! Members inside the kept cluster `S_i` use `(i, rank in S_i)` forward and
//! `(x, rank among the kept clusters covering x)` backward. Members of the
//! target outside `S_i` go through the shared part: forward by their rank in
//! the set of strings reachable within `m` bits from many members of `S_i`,
//! backward by the rank of `i` among the kept clusters that many short
//! programs from `x` reach.

use serde::Serialize;

use super::referential::ReferentialRegistry;
use crate::cluster::{validate_cluster, DistanceMatrix};
use crate::error::{Error, Result};
use crate::model::ComplexityModel;
use crate::scalar::{above_pow2, gamma_len, index_width};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MemberCode {
    /// The member lies in the kept cluster.
    Direct { rank_in_cluster: usize, covering_rank: usize },
    /// The member is reached through the intersection.
    Merged { path_rank: usize, inverse_path_rank: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MemberRecord {
    pub member: usize,
    pub code: MemberCode,
    /// Width of the forward code word (ordinal to member), bits.
    pub forward_bits: u32,
    /// Width of the backward code word (member to ordinal), bits.
    pub inverse_bits: u32,
}

/// Declared widths, in bits, that every code word must respect.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CodeBudget {
    /// `m + 1`
    pub rank_bits: u32,
    /// `d + 1`
    pub covering_bits: u32,
    /// `2(m + 1) - max(m - d', 0)`
    pub path_bits: u32,
    /// `(m + 1) + (d + 1) - max(m - d', 0)`
    pub inverse_path_bits: u32,
    /// Self-delimiting encoding of `m`, `d` and `d'`.
    pub parameter_bits: u32,
}

impl CodeBudget {
    pub fn new(m: u32, d: u32, dprime: u32) -> Self {
        let saved = m.saturating_sub(dprime);
        CodeBudget {
            rank_bits: m + 1,
            covering_bits: d + 1,
            path_bits: 2 * (m + 1) - saved,
            inverse_path_bits: (m + 1) + (d + 1) - saved,
            parameter_bits: gamma_len(m as u64) + gamma_len(d as u64) + gamma_len(dprime as u64),
        }
    }

    pub fn admits(&self, record: &MemberRecord) -> bool {
        match record.code {
            MemberCode::Direct { .. } => {
                record.forward_bits <= self.rank_bits && record.inverse_bits <= self.covering_bits
            }
            MemberCode::Merged { .. } => {
                record.forward_bits <= self.path_bits && record.inverse_bits <= self.inverse_path_bits
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoreCertificate {
    pub ordinal: usize,
    pub m: u32,
    pub d: u32,
    pub dprime: u32,
    /// `#(S ∩ S_i)`
    pub shared: usize,
    /// Smallest count exceeding `2^(m - d')`.
    pub threshold: u64,
    pub records: Vec<MemberRecord>,
    pub budget: CodeBudget,
}

impl CoreCertificate {
    pub fn within_budget(&self) -> bool {
        self.records.iter().all(|r| self.budget.admits(r))
    }

    pub fn max_forward_bits(&self) -> u32 {
        self.records.iter().map(|r| r.forward_bits).max().unwrap_or(0)
    }

    pub fn max_inverse_bits(&self) -> u32 {
        self.records.iter().map(|r| r.inverse_bits).max().unwrap_or(0)
    }
}

/// Strings `t` with at least `threshold` members `x'` of the kept cluster
/// satisfying `C(t|x') <= m`, ascending.
fn path_targets<M: ComplexityModel + ?Sized>(
    members: &[usize],
    m: u32,
    threshold: u64,
    model: &M,
) -> Vec<usize> {
    (0..model.len())
        .filter(|&t| {
            members
                .iter()
                .filter(|&&x| model.complexity(t, Some(x)).within(m))
                .count() as u64
                >= threshold
        })
        .collect()
}

/// Ordinals of kept clusters with at least `threshold` members `x'`
/// satisfying `C(x'|x) <= m`, ascending.
fn inverse_candidates<M: ComplexityModel + ?Sized>(
    x: usize,
    registry: &ReferentialRegistry,
    threshold: u64,
    model: &M,
) -> Vec<usize> {
    registry
        .kept
        .iter()
        .filter(|c| {
            c.members
                .iter()
                .filter(|&&y| model.complexity(y, Some(x)).within(registry.m))
                .count() as u64
                >= threshold
        })
        .map(|c| c.ordinal)
        .collect()
}

fn position(list: &[usize], value: usize, what: &str) -> Result<usize> {
    list.binary_search(&value)
        .map_err(|_| Error::CertificateMismatch(format!("{value} missing from its {what} list")))
}

/// Certifies the `(m, m - d)`-cluster `s` against the registry: picks the
/// first kept cluster sharing more than `2^(m - d')` members with `s` and
/// encodes every member of `s` relative to its ordinal.
pub fn certify_core<M: ComplexityModel + ?Sized>(
    s: &[usize],
    registry: &ReferentialRegistry,
    model: &M,
    matrix: &DistanceMatrix<u32>,
) -> Result<CoreCertificate> {
    let (m, d, dprime) = (registry.m, registry.d, registry.dprime);
    if dprime <= 2 * d + 1 {
        return Err(Error::MultiplicityHypothesis { d, dprime });
    }
    let l = m as i64 - d as i64;
    let v = validate_cluster(s, m, l, matrix)?;
    if !v.is_valid() {
        return Err(Error::NotACluster {
            m: m.to_string(),
            l,
            reason: v.describe(matrix.ids()),
        });
    }
    let mut s = s.to_vec();
    s.sort_unstable();
    s.dedup();

    let threshold = above_pow2(m as i64 - dprime as i64);
    let kept = registry
        .kept
        .iter()
        .find(|k| ReferentialRegistry::intersection(&k.members, &s) as u64 >= threshold)
        .ok_or(Error::StreamCoverage)?;
    let shared = ReferentialRegistry::intersection(&kept.members, &s);

    let rank_bits = index_width(kept.members.len() as u64);
    let mut targets = None;
    let mut records = Vec::with_capacity(s.len());
    for &x in &s {
        let record = match kept.members.binary_search(&x) {
            Ok(rank_in_cluster) => {
                let covering = registry.covering(x);
                let covering_rank = position(&covering, kept.ordinal, "covering")?;
                MemberRecord {
                    member: x,
                    code: MemberCode::Direct {
                        rank_in_cluster,
                        covering_rank,
                    },
                    forward_bits: rank_bits,
                    inverse_bits: index_width(covering.len() as u64),
                }
            }
            Err(_) => {
                let targets = targets.get_or_insert_with(|| path_targets(&kept.members, m, threshold, model));
                let path_rank = position(targets, x, "path target")?;
                let inverse = inverse_candidates(x, registry, threshold, model);
                let inverse_path_rank = position(&inverse, kept.ordinal, "inverse candidate")?;
                MemberRecord {
                    member: x,
                    code: MemberCode::Merged {
                        path_rank,
                        inverse_path_rank,
                    },
                    forward_bits: index_width(targets.len() as u64),
                    inverse_bits: index_width(inverse.len() as u64),
                }
            }
        };
        records.push(record);
    }
    Ok(CoreCertificate {
        ordinal: kept.ordinal,
        m,
        d,
        dprime,
        shared,
        threshold,
        records,
        budget: CodeBudget::new(m, d, dprime),
    })
}

fn kept_members(registry: &ReferentialRegistry, ordinal: usize) -> Result<&[usize]> {
    registry
        .get(ordinal)
        .map(|k| k.members.as_slice())
        .ok_or_else(|| Error::CertificateMismatch(format!("no kept cluster with ordinal {ordinal}")))
}

/// Recovers a member from the ordinal and its forward code word.
pub fn decode_member<M: ComplexityModel + ?Sized>(
    ordinal: usize,
    code: &MemberCode,
    registry: &ReferentialRegistry,
    model: &M,
) -> Result<usize> {
    let members = kept_members(registry, ordinal)?;
    let (list, rank) = match *code {
        MemberCode::Direct { rank_in_cluster, .. } => (members.to_vec(), rank_in_cluster),
        MemberCode::Merged { path_rank, .. } => (
            path_targets(members, registry.m, above_pow2(registry.threshold_exponent()), model),
            path_rank,
        ),
    };
    list.get(rank)
        .copied()
        .ok_or_else(|| Error::CertificateMismatch(format!("rank {rank} out of range for ordinal {ordinal}")))
}

/// Recovers the ordinal from a member and its backward code word.
pub fn decode_ordinal<M: ComplexityModel + ?Sized>(
    member: usize,
    code: &MemberCode,
    registry: &ReferentialRegistry,
    model: &M,
) -> Result<usize> {
    let (list, rank) = match *code {
        MemberCode::Direct { covering_rank, .. } => (registry.covering(member), covering_rank),
        MemberCode::Merged { inverse_path_rank, .. } => (
            inverse_candidates(member, registry, above_pow2(registry.threshold_exponent()), model),
            inverse_path_rank,
        ),
    };
    list.get(rank)
        .copied()
        .ok_or_else(|| Error::CertificateMismatch(format!("rank {rank} out of range for member {member}")))
}

/// Decodes every forward code word of the certificate, ascending.
pub fn decode_core<M: ComplexityModel + ?Sized>(
    cert: &CoreCertificate,
    registry: &ReferentialRegistry,
    model: &M,
) -> Result<Vec<usize>> {
    let mut out = cert
        .records
        .iter()
        .map(|r| decode_member(cert.ordinal, &r.code, registry, model))
        .collect::<Result<Vec<_>>>()?;
    out.sort_unstable();
    Ok(out)
}
