//! Triples in the set model: complexity profiles, clone sets, triple mutual
//! information, the five-string non-Shannon inequality and the common core.

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::{set_complexity, set_information, SetString, Universe, ENUMERATION_LIMIT};

fn bits(c: crate::model::Complexity) -> u32 {
    c.bits().expect("set-model complexities are finite")
}

fn check_same(sets: &[&SetString]) -> Result<Universe> {
    let u = sets[0].universe();
    for s in &sets[1..] {
        if s.universe() != u {
            return Err(Error::UniverseMismatch(u.size(), s.universe().size()));
        }
    }
    Ok(u)
}

/// `(C(x), C(y), C(z), C(x,y), C(x,z), C(y,z), C(x,y,z))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ComplexityProfile(pub [u32; 7]);

impl ComplexityProfile {
    fn from_masks(x: u64, y: u64, z: u64) -> Self {
        let c = |m: u64| m.count_ones();
        ComplexityProfile([c(x), c(y), c(z), c(x | y), c(x | z), c(y | z), c(x | y | z)])
    }

    /// The seven-term inclusion–exclusion `I(x:y:z)`.
    pub fn triple_information(&self) -> i64 {
        let [x, y, z, xy, xz, yz, xyz] = self.0.map(i64::from);
        x + y + z - xy - xz - yz + xyz
    }

    /// Every component within `delta` of `other`'s.
    pub fn within(&self, other: &ComplexityProfile, delta: u32) -> bool {
        self.0.iter().zip(other.0).all(|(&a, b)| a.abs_diff(b) <= delta)
    }
}

pub fn profile(x: &SetString, y: &SetString, z: &SetString) -> Result<ComplexityProfile> {
    check_same(&[x, y, z])?;
    let c = |items: &[SetString]| set_complexity(items, None).map(bits);
    Ok(ComplexityProfile([
        c(&[*x])?,
        c(&[*y])?,
        c(&[*z])?,
        c(&[*x, *y])?,
        c(&[*x, *z])?,
        c(&[*y, *z])?,
        c(&[*x, *y, *z])?,
    ]))
}

fn require_enumerable(u: Universe) -> Result<()> {
    if u.size() > ENUMERATION_LIMIT {
        Err(Error::UniverseTooLarge {
            size: u.size(),
            limit: ENUMERATION_LIMIT,
        })
    } else {
        Ok(())
    }
}

/// The `δ`-clones of `z` given `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CloneSet {
    pub x: SetString,
    pub y: SetString,
    pub z: SetString,
    pub delta: u32,
    /// Ascending by bit mask.
    pub members: Vec<SetString>,
}

/// All `z'` whose profile with `(x, y)` is within `δ` of that of `z`, by an
/// exhaustive scan of the universe.
pub fn clones(x: &SetString, y: &SetString, z: &SetString, delta: u32) -> Result<CloneSet> {
    let u = check_same(&[x, y, z])?;
    require_enumerable(u)?;
    let target = ComplexityProfile::from_masks(x.bits(), y.bits(), z.bits());
    let members = (0..1u64 << u.size())
        .into_par_iter()
        .filter(|&c| ComplexityProfile::from_masks(x.bits(), y.bits(), c).within(&target, delta))
        .map(|c| SetString::from_bits(u, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(CloneSet {
        x: *x,
        y: *y,
        z: *z,
        delta,
        members,
    })
}

/// `max(I(x:y|z), I(x:z|y), I(y:z|x))`.
pub fn epsilon(x: &SetString, y: &SetString, z: &SetString) -> Result<u32> {
    Ok(bits(set_information(x, y, Some(z))?)
        .max(bits(set_information(x, z, Some(y))?))
        .max(bits(set_information(y, z, Some(x))?)))
}

/// The common core `w` with its complexity and residuals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TripleCore {
    pub w: SetString,
    /// `C(w)`
    pub complexity: u32,
    /// `(C(w|x), C(w|y), C(w|z))`
    pub residuals: [u32; 3],
}

/// `w = x ∩ y ∩ z`.
pub fn extract_triple_core(x: &SetString, y: &SetString, z: &SetString) -> Result<TripleCore> {
    let w = x.intersection(y)?.intersection(z)?;
    let c = |given: &SetString| set_complexity(&[w], Some(given)).map(bits);
    Ok(TripleCore {
        w,
        complexity: bits(set_complexity(&[w], None)?),
        residuals: [c(x)?, c(y)?, c(z)?],
    })
}

fn positions<S: Serializer>(w: &SetString, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(w.positions())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TripleReport {
    pub eps: u32,
    pub triple_info: i64,
    #[serde(serialize_with = "positions")]
    pub w: SetString,
    pub residuals: [u32; 3],
    pub profile: ComplexityProfile,
}

pub fn triple_report(x: &SetString, y: &SetString, z: &SetString) -> Result<TripleReport> {
    let profile = profile(x, y, z)?;
    let core = extract_triple_core(x, y, z)?;
    Ok(TripleReport {
        eps: epsilon(x, y, z)?,
        triple_info: profile.triple_information(),
        w: core.w,
        residuals: core.residuals,
        profile,
    })
}

fn slack_masks(x: u64, y: u64, z: u64, z1: u64, z2: u64) -> i64 {
    let i = |a: u64, b: u64, c: u64| i64::from((a & b & !c).count_ones());
    let rhs = i(x, y, z1) + i(x, y, z2) + i(z1, z2, 0) + i(x, y, z) + i(x, z, y) + i(y, z, x);
    rhs - i(x, y, 0)
}

/// `I(x:y|z') + I(x:y|z'') + I(z':z'') + I(x:y|z) + I(x:z|y) + I(y:z|x) − I(x:y)`.
pub fn nonshannon_slack(
    x: &SetString,
    y: &SetString,
    z: &SetString,
    z1: &SetString,
    z2: &SetString,
) -> Result<i64> {
    check_same(&[x, y, z, z1, z2])?;
    Ok(slack_masks(x.bits(), y.bits(), z.bits(), z1.bits(), z2.bits()))
}

/// Minimum slack over every five-tuple of subsets, with the first tuple (in
/// mask order) attaining it.
pub fn nonshannon_min_slack(universe: Universe) -> Result<(i64, [u64; 5], u64)> {
    let n = universe.size();
    if n > 6 {
        return Err(Error::UniverseTooLarge { size: n, limit: 6 });
    }
    let k = 1u64 << n;
    let (slack, witness) = (0..k)
        .into_par_iter()
        .map(|x| {
            let mut best = (i64::MAX, [0u64; 5]);
            for y in 0..k {
                for z in 0..k {
                    for z1 in 0..k {
                        for z2 in 0..k {
                            let s = slack_masks(x, y, z, z1, z2);
                            if s < best.0 {
                                best = (s, [x, y, z, z1, z2]);
                            }
                        }
                    }
                }
            }
            best
        })
        .reduce(|| (i64::MAX, [0; 5]), |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    Ok((slack, witness, k.pow(5)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CloneClusterCheck {
    pub members: usize,
    pub diameter: u32,
    pub logsize: u32,
    /// `C(z|x,y)`
    pub conditional: u32,
    pub eps: u32,
    /// `C(z|x,y) + 7δ + 3ε`
    pub bound: u32,
    /// `C(z|x,y) + 2δ + 3ε`, exceeded on some triples.
    pub tight_bound: u32,
    pub within_tight: bool,
    /// `C(z|x,y) − logsize`
    pub logsize_gap: i64,
    pub pass: bool,
}

/// Measures the clone set as a cluster under set-model distance.
///
/// Splitting the universe into the parts outside `x ∪ y`, in `x` only, in `y`
/// only and in both, each profile component pins the size of `z'` on those
/// parts to within `δ` (joint terms) so two clones differ by at most
/// `C(z|x,y) + 7δ + 3ε`. The `7δ` term is attained.
pub fn clone_cluster_check(x: &SetString, y: &SetString, z: &SetString, delta: u32) -> Result<CloneClusterCheck> {
    let set = clones(x, y, z, delta)?;
    let masks: Vec<u64> = set.members.iter().map(|s| s.bits()).collect();
    let diameter = masks
        .par_iter()
        .enumerate()
        .map(|(i, &a)| {
            masks[i..]
                .iter()
                .map(|&b| (a & !b).count_ones().max((b & !a).count_ones()))
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0);
    let conditional = (z.bits() & !(x.bits() | y.bits())).count_ones();
    let eps = epsilon(x, y, z)?;
    let logsize = crate::scalar::floor_log2(masks.len() as u64);
    let bound = conditional + 7 * delta + 3 * eps;
    let tight_bound = conditional + 2 * delta + 3 * eps;
    Ok(CloneClusterCheck {
        members: masks.len(),
        diameter,
        logsize,
        conditional,
        eps,
        bound,
        tight_bound,
        within_tight: diameter <= tight_bound,
        logsize_gap: conditional as i64 - logsize as i64,
        pass: diameter <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(n: u32) -> Universe {
        Universe::new(n).unwrap()
    }

    fn s(n: u32, p: &[u32]) -> SetString {
        SetString::from_positions(u(n), p.iter().copied()).unwrap()
    }

    #[test]
    fn profile_examples() {
        let x = s(3, &[0, 1]);
        let y = s(3, &[1, 2]);
        let z = s(3, &[2, 0]);
        assert_eq!(profile(&x, &y, &z).unwrap().0, [2, 2, 2, 3, 3, 3, 3]);
        assert_eq!(profile(&x, &x, &x).unwrap().0, [2; 7]);
        let (a, b, c) = (s(6, &[0]), s(6, &[1, 2]), s(6, &[3, 4, 5]));
        assert_eq!(profile(&a, &b, &c).unwrap().0, [1, 2, 3, 3, 4, 5, 6]);
        assert!(matches!(profile(&x, &y, &a), Err(Error::UniverseMismatch(3, 6))));
    }

    #[test]
    fn venn_instance() {
        // g = {0,1}, a = {2}, b = {3,4}, c = {5}
        let x = s(6, &[0, 1, 2]);
        let y = s(6, &[0, 1, 3, 4]);
        let z = s(6, &[0, 1, 5]);
        let r = triple_report(&x, &y, &z).unwrap();
        assert_eq!(r.eps, 0);
        assert_eq!(r.triple_info, 2);
        assert_eq!(r.w, s(6, &[0, 1]));
        assert_eq!(r.residuals, [0, 0, 0]);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"eps":0,"triple_info":2,"w":[0,1],"residuals":[0,0,0],"profile":[3,4,3,5,4,5,6]}"#
        );
        let check = clone_cluster_check(&x, &y, &z, 0).unwrap();
        assert_eq!(check.conditional, 1);
        assert!(check.diameter <= check.conditional);
    }

    #[test]
    fn empty_x() {
        let e = s(4, &[]);
        let r = triple_report(&e, &s(4, &[0, 1]), &s(4, &[1, 2])).unwrap();
        assert_eq!(r.triple_info, 0);
        assert_eq!(r.w, e);
        assert_eq!(bits(set_information(&e, &s(4, &[0, 1]), Some(&s(4, &[1, 2]))).unwrap()), 0);
    }

    #[test]
    fn clone_edge_cases() {
        let (x, y, z) = (s(4, &[0]), s(4, &[1]), s(4, &[2, 3]));
        let zero = clones(&x, &y, &z, 0).unwrap();
        assert!(zero.members.contains(&z));
        let all = clones(&x, &y, &z, 4).unwrap();
        assert_eq!(all.members.len(), 16);
        assert!(clones(&s(21, &[]), &s(21, &[]), &s(21, &[]), 0).is_err());
    }

    #[test]
    fn clone_scan_matches_rescan() {
        let (x, y, z) = (s(5, &[0, 1, 2]), s(5, &[1, 2, 3]), s(5, &[2, 4]));
        let set = clones(&x, &y, &z, 1).unwrap();
        let base = profile(&x, &y, &z).unwrap();
        let mut rescan = Vec::new();
        for c in 0..32u32 {
            let cand = SetString::from_positions(u(5), (0..5).filter(|p| c >> p & 1 == 1)).unwrap();
            let p = profile(&x, &y, &cand).unwrap();
            if p.0.iter().zip(base.0).all(|(&a, b)| (a as i64 - b as i64).abs() <= 1) {
                rescan.push(cand);
            }
        }
        assert_eq!(set.members, rescan);
    }

    #[test]
    fn nonshannon_small_cases() {
        let e = s(3, &[]);
        assert_eq!(nonshannon_slack(&e, &e, &e, &e, &e).unwrap(), 0);
        let (x, y, z) = (s(3, &[0, 1]), s(3, &[1, 2]), s(3, &[0]));
        assert!(nonshannon_slack(&x, &y, &z, &x, &x).unwrap() >= 0);
        let (min, _, count) = nonshannon_min_slack(u(2)).unwrap();
        assert_eq!(count, 1024);
        assert_eq!(min, 0);
    }

    #[test]
    fn two_delta_bound_fails_but_seven_delta_holds() {
        // brute force for a triple on universe 4 exceeding C(z|x,y) + 2δ + 3ε at δ = 1
        let mut witness = None;
        'search: for x in 0..16u64 {
            for y in 0..16u64 {
                for z in 0..16u64 {
                    let f = |b| SetString::from_bits(u(4), b).unwrap();
                    let c = clone_cluster_check(&f(x), &f(y), &f(z), 1).unwrap();
                    assert!(c.pass);
                    if !c.within_tight {
                        witness = Some(c);
                        break 'search;
                    }
                }
            }
        }
        let c = witness.expect("a triple beyond the 2δ band");
        assert_eq!(c.diameter, c.tight_bound + 1);
    }

    #[test]
    fn seven_delta_is_attained() {
        // outside x∪y: {0,1}; x only: 2..6; y only: 6..10; both: 10..16
        let x = s(16, &(2..6).chain(10..16).collect::<Vec<_>>());
        let y = s(16, &(6..16).collect::<Vec<_>>());
        let z = s(16, &[0, 10, 11, 12, 13, 14, 15]);
        let c = clone_cluster_check(&x, &y, &z, 1).unwrap();
        assert_eq!(c.eps, 0);
        assert_eq!(c.conditional, 1);
        assert_eq!(c.diameter, c.bound);
        assert_eq!(c.bound, 8);
    }
}
