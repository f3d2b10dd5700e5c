//! The covering claim: in a space of equiprobable points, more than `1/ε`-heavy
//! events whose pairwise intersections are lighter than `ε²/2` number fewer
//! than `2/ε`.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Probability;

/// Events over `points` equiprobable points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventSystem {
    pub points: usize,
    pub events: Vec<Vec<usize>>,
}

impl EventSystem {
    pub fn new(points: usize, events: Vec<Vec<usize>>) -> Result<Self> {
        for (event, e) in events.iter().enumerate() {
            if let Some(&point) = e.iter().find(|&&p| p >= points) {
                return Err(Error::EventOutOfSpace { event, point, points });
            }
        }
        let events = events
            .into_iter()
            .map(|mut e| {
                e.sort_unstable();
                e.dedup();
                e
            })
            .collect();
        Ok(EventSystem { points, events })
    }

    fn from_masks(points: usize, masks: &[u32]) -> Self {
        let events = masks
            .iter()
            .map(|&m| (0..points).filter(|&p| m >> p & 1 == 1).collect())
            .collect();
        EventSystem { points, events }
    }

    fn intersection(&self, i: usize, j: usize) -> usize {
        self.events[i]
            .iter()
            .filter(|p| self.events[j].binary_search(p).is_ok())
            .count()
    }

    fn union_size(&self) -> usize {
        let mut seen = vec![false; self.points];
        for e in &self.events {
            for &p in e {
                seen[p] = true;
            }
        }
        seen.into_iter().filter(|&s| s).count()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClaimReport<T> {
    pub events: usize,
    /// `1/ε`
    pub k: u64,
    /// Every event heavier than `ε` and every pairwise intersection lighter
    /// than `ε²/2`.
    pub hypotheses: bool,
    /// `Σ p_i − Σ_{i<j} p_ij`
    pub union_lower_bound: T,
    pub union_probability: T,
    /// `!hypotheses || events < 2k`
    pub pass: bool,
}

fn unit_fraction_denominator(epsilon: Ratio<i64>) -> Result<u64> {
    let (num, den) = (*epsilon.numer(), *epsilon.denom());
    if num == 1 && den >= 1 {
        Ok(den as u64)
    } else {
        Err(Error::NotUnitFraction(den.unsigned_abs()))
    }
}

fn prob<T: Probability>(count: usize, points: usize) -> T {
    let n = T::from_usize(points).expect("point count fits the field");
    T::from_usize(count).expect("count fits the field") / n
}

/// Checks the claim on one event system, with all probabilities computed in `T`.
pub fn claim_check<T: Probability>(ev: &EventSystem, epsilon: Ratio<i64>) -> Result<ClaimReport<T>> {
    let k = unit_fraction_denominator(epsilon)?;
    if ev.points == 0 {
        return Err(Error::Format("event system needs at least one point".into()));
    }
    let eps = T::one() / T::from_u64(k).expect("k fits the field");
    let half_eps_sq = eps.clone() * eps.clone() / T::from_u8(2).expect("2 fits the field");
    let n = ev.events.len();

    let mut hypotheses = true;
    let mut sum = T::zero();
    for e in &ev.events {
        let p: T = prob(e.len(), ev.points);
        hypotheses &= p > eps;
        sum = sum + p;
    }
    let mut pair_sum = T::zero();
    for i in 0..n {
        for j in i + 1..n {
            let p: T = prob(ev.intersection(i, j), ev.points);
            hypotheses &= p < half_eps_sq;
            pair_sum = pair_sum + p;
        }
    }
    Ok(ClaimReport {
        events: n,
        k,
        hypotheses,
        union_lower_bound: sum - pair_sum,
        union_probability: prob(ev.union_size(), ev.points),
        pass: !hypotheses || (n as u64) < 2 * k,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimSearch {
    pub max_points: usize,
    pub max_events: usize,
    pub k: u64,
    /// Nonempty event families satisfying both hypotheses.
    pub instances: u64,
    /// Largest family size seen among them.
    pub largest_family: usize,
    pub counterexample: Option<EventSystem>,
}

impl ClaimSearch {
    pub fn pass(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Enumerates every family of at most `max_events` distinct events over at
/// most `max_points` points that satisfies the hypotheses for `ε = 1/k`, and
/// checks each one with exact rational arithmetic.
///
/// Families are built in increasing mask order. Both hypotheses are
/// hereditary, so a branch is abandoned as soon as one fails.
pub fn claim_search(max_points: usize, max_events: usize, k: u64) -> Result<ClaimSearch> {
    if k == 0 {
        return Err(Error::NotUnitFraction(0));
    }
    if max_points > 20 {
        return Err(Error::UniverseTooLarge {
            size: max_points as u32,
            limit: 20,
        });
    }
    let epsilon = Ratio::new(1, k as i64);
    let per_space: Vec<(u64, usize, Option<EventSystem>)> = (1..=max_points)
        .into_par_iter()
        .map(|points| {
            let n = points as u64;
            // |E|/n > 1/k  and  |E ∩ F|/n < 1/(2k²)
            let heavy: Vec<u32> = (1u32..1 << points)
                .filter(|m| m.count_ones() as u64 * k > n)
                .collect();
            let light = |a: u32, b: u32| (a & b).count_ones() as u64 * 2 * k * k < n;
            let mut state = (0u64, 0usize, None);
            let mut family = Vec::with_capacity(max_events);
            extend(&heavy, 0, &mut family, max_events, &light, &mut |fam: &[u32]| {
                let ev = EventSystem::from_masks(points, fam);
                let report = claim_check::<Ratio<i64>>(&ev, epsilon)?;
                if !report.hypotheses {
                    return Err(Error::Format(format!("search and check disagree on {ev:?}")));
                }
                state.0 += 1;
                state.1 = state.1.max(fam.len());
                if !report.pass && state.2.is_none() {
                    state.2 = Some(ev);
                }
                Ok(())
            })?;
            Ok(state)
        })
        .collect::<Result<_>>()?;

    let mut out = ClaimSearch {
        max_points,
        max_events,
        k,
        instances: 0,
        largest_family: 0,
        counterexample: None,
    };
    for (instances, largest, cex) in per_space {
        out.instances += instances;
        out.largest_family = out.largest_family.max(largest);
        if out.counterexample.is_none() {
            out.counterexample = cex;
        }
    }
    Ok(out)
}

fn extend(
    heavy: &[u32],
    start: usize,
    family: &mut Vec<u32>,
    max_events: usize,
    light: &impl Fn(u32, u32) -> bool,
    visit: &mut impl FnMut(&[u32]) -> Result<()>,
) -> Result<()> {
    if family.len() == max_events {
        return Ok(());
    }
    for (offset, &e) in heavy[start..].iter().enumerate() {
        if family.iter().all(|&f| light(f, e)) {
            family.push(e);
            visit(family)?;
            extend(heavy, start + offset + 1, family, max_events, light, visit)?;
            family.pop();
        }
    }
    Ok(())
}

/// `k` points and the `k` singleton events: pairwise disjoint, each of
/// probability exactly `1/k`.
pub fn tightness_configuration(k: usize) -> EventSystem {
    EventSystem {
        points: k,
        events: (0..k).map(|p| vec![p]).collect(),
    }
}
