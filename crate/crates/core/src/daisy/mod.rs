//! Daisies, path counting, cluster merging, the referential-cluster filter,
//! the multiplicity bound and core certification.

mod certify;
mod claim;
mod referential;

use serde::Serialize;

use crate::cluster::{validate_cluster, DistanceMatrix};
use crate::error::{Error, Result};
use crate::model::{information_distance, Complexity, ComplexityModel};
use crate::scalar::at_least_pow2;

pub use certify::{
    certify_core, decode_core, decode_member, decode_ordinal, CodeBudget, CoreCertificate, MemberCode, MemberRecord,
};
pub use claim::{
    claim_check, claim_search, tightness_configuration, ClaimReport, ClaimSearch, EventSystem,
};
pub use referential::{
    ball_condition, multiplicity_check, parse_stream, referential_filter, KeptCluster, MultiplicityReport,
    ReferentialRegistry, RegistryEntry, RegistryFile, StreamRecord,
};

/// Core and radii of an `(m, d)`-daisy: all `x` with `C(core|x) <= d` and
/// `C(x|core) <= m + d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DaisyParams {
    pub core: usize,
    pub m: u32,
    pub d: u32,
}

pub fn daisy_members<M: ComplexityModel + ?Sized>(p: &DaisyParams, model: &M) -> Result<Vec<usize>> {
    model.check_item(p.core)?;
    Ok((0..model.len())
        .filter(|&x| {
            model.complexity(p.core, Some(x)).within(p.d)
                && model.complexity(x, Some(p.core)).within(p.m + p.d)
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DaisyCheck {
    pub members: usize,
    pub diameter: Complexity,
    /// `m + 2d + slack`
    pub bound: u32,
    pub pass: bool,
}

/// Measures the daisy's diameter against `m + 2d + slack`, where the slack is
/// the model's triangle slack or, failing that, the one supplied.
pub fn daisy_cluster_check<M: ComplexityModel + ?Sized>(
    p: &DaisyParams,
    model: &M,
    slack: Option<u32>,
) -> Result<DaisyCheck> {
    let members = daisy_members(p, model)?;
    let slack = model.triangle_slack().or(slack).unwrap_or(0);
    let mut diameter = Complexity::ZERO;
    'outer: for (k, &a) in members.iter().enumerate() {
        for &b in &members[k..] {
            diameter = diameter.max(information_distance(model, a, b));
            if diameter == Complexity::Infinite {
                break 'outer;
            }
        }
    }
    let bound = p.m + 2 * p.d + slack;
    Ok(DaisyCheck {
        members: members.len(),
        diameter,
        bound,
        pass: diameter.within(bound),
    })
}

/// Path counts `#{y : C(y|x) < v and C(z|y) < w}` for every target `z`.
pub fn path_counts<M: ComplexityModel + ?Sized>(x: usize, v: u32, w: u32, model: &M) -> Result<Vec<u64>> {
    model.check_item(x)?;
    let n = model.len();
    let mut counts = vec![0u64; n];
    for y in (0..n).filter(|&y| model.complexity(y, Some(x)).below(v)) {
        for (z, c) in counts.iter_mut().enumerate() {
            if model.complexity(z, Some(y)).below(w) {
                *c += 1;
            }
        }
    }
    Ok(counts)
}

/// Number of intermediate `y` with `C(y|x) < v` and `C(z|y) < w`.
pub fn count_paths<M: ComplexityModel + ?Sized>(x: usize, z: usize, v: u32, w: u32, model: &M) -> Result<u64> {
    model.check_item(x)?;
    model.check_item(z)?;
    Ok((0..model.len())
        .filter(|&y| model.complexity(y, Some(x)).below(v) && model.complexity(z, Some(y)).below(w))
        .count() as u64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathLemmaCheck {
    /// `#{z : count_paths(x, z, v, w) >= 2^u}`
    pub targets: u64,
    /// `2^(v + w - u)`
    pub bound: u128,
    pub pass: bool,
}

/// The counting half of the path lemma: fewer than `2^(v+w)` two-step paths
/// leave `x`, so at most `2^(v+w-u)` targets collect `2^u` of them.
pub fn path_lemma_check<M: ComplexityModel + ?Sized>(
    x: usize,
    v: u32,
    w: u32,
    u: u32,
    model: &M,
) -> Result<PathLemmaCheck> {
    let counts = path_counts(x, v, w, model)?;
    path_lemma_from_counts(&counts, v, w, u)
}

/// [`path_lemma_check`] over precomputed [`path_counts`], so sweeps over `u`
/// share one count.
pub fn path_lemma_from_counts(counts: &[u64], v: u32, w: u32, u: u32) -> Result<PathLemmaCheck> {
    if u > v + w {
        return Err(Error::PathExponent { u, vw: v + w });
    }
    let targets = counts
        .iter()
        .filter(|&&c| at_least_pow2(c, u as i64))
        .count() as u64;
    let exp = v + w - u;
    let bound = if exp >= 127 { u128::MAX } else { 1u128 << exp };
    Ok(PathLemmaCheck {
        targets,
        bound,
        pass: (targets as u128) <= bound,
    })
}

/// What [`merge_check`] asserts about the union.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MergeClaim {
    /// `diameter(S ∪ S') <= m + d`.
    Diameter,
    /// Every cross pair is joined by at least `2^(m-d)` two-step paths of
    /// length `<= m` through `S ∩ S'`.
    PathCount,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MergeReport {
    pub shared: usize,
    /// `None` when the union contains an infinite pair.
    pub union_diameter: Option<u32>,
    /// `m + d`
    pub bound: u32,
    /// Smallest number of paths `x - x'' - x'` with `x''` shared, over cross pairs.
    pub min_cross_paths: usize,
    pub claim: MergeClaim,
    pub pass: bool,
}

pub fn merge_check(
    s: &[usize],
    t: &[usize],
    m: u32,
    d: u32,
    matrix: &DistanceMatrix<u32>,
    claim: MergeClaim,
) -> Result<MergeReport> {
    for set in [s, t] {
        let v = validate_cluster(set, m, i64::MIN, matrix)?;
        if !v.is_valid() {
            return Err(Error::NotACluster {
                m: m.to_string(),
                l: 0,
                reason: v.describe(matrix.ids()),
            });
        }
    }
    let mut s = s.to_vec();
    let mut t = t.to_vec();
    s.sort_unstable();
    s.dedup();
    t.sort_unstable();
    t.dedup();
    let shared: Vec<usize> = s.iter().copied().filter(|x| t.binary_search(x).is_ok()).collect();
    let exponent = m as i64 - d as i64;
    if !at_least_pow2(shared.len() as u64, exponent) {
        return Err(Error::MergeThreshold {
            shared: shared.len(),
            exponent,
        });
    }
    let mut union = s.clone();
    union.extend(&t);
    union.sort_unstable();
    union.dedup();
    let union_diameter = matrix.diameter(&union)?.ok();
    let near = |a: usize, b: usize| matches!(matrix.get(a, b), Some(v) if v <= m);
    let min_cross_paths = s
        .iter()
        .flat_map(|&a| t.iter().map(move |&b| (a, b)))
        .map(|(a, b)| shared.iter().filter(|&&c| near(a, c) && near(c, b)).count())
        .min()
        .unwrap_or(0);
    let bound = m + d;
    let pass = match claim {
        MergeClaim::Diameter => matches!(union_diameter, Some(v) if v <= bound),
        MergeClaim::PathCount => at_least_pow2(min_cross_paths as u64, exponent),
    };
    Ok(MergeReport {
        shared: shared.len(),
        union_diameter,
        bound,
        min_cross_paths,
        claim,
        pass,
    })
}
