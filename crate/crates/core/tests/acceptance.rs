//! Acceptance criteria, each checked against an oracle written here rather
//! than in the library. Prints one line per criterion; exits nonzero if any
//! fails.

use std::collections::HashMap;
use std::fs;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use infodist::cluster::{full_model_matrix, mine_clusters, DistanceMatrix};
use infodist::daisy::{
    certify_core, claim_check, claim_search, daisy_cluster_check, daisy_members, decode_core, decode_ordinal,
    multiplicity_check, path_counts, path_lemma_from_counts, referential_filter, tightness_configuration,
    DaisyParams, EventSystem, MemberCode,
};
use infodist::gen::{cluster_stream, planted_instance, random_system, PlantedInstance};
use infodist::model::chain_rule_defect;
use infodist::ncd::{BitScale, Compressor, DEFAULT_LEVEL};
use infodist::pipeline::{run_pipeline, synthetic_corpus, PipelineConfig};
use infodist::triple::{extract_triple_core, nonshannon_slack};
use infodist::{ComplexityModel, DescriptionSystem, SetModel, SetString, Universe};

const SEED: u64 = 0x5eed;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn pop(bits: u64) -> i64 {
    i64::from(bits.count_ones())
}

/// Cardinality of `a \ b`, counted position by position.
fn diff_count(a: u64, b: u64, n: u32) -> i64 {
    (0..n).filter(|&p| a >> p & 1 == 1 && b >> p & 1 == 0).count() as i64
}

fn rng(criterion: u64, instance: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED + criterion);
    r.set_stream(instance);
    r
}

fn chain_rule() -> Outcome {
    let start = Instant::now();
    let model = SetModel::new(Universe::new(5).unwrap()).unwrap();
    let mut pairs = 0;
    for x in 0..32usize {
        for y in 0..32usize {
            let joint = (0..5).filter(|&p| (x | y) >> p & 1 == 1).count() as i64;
            let oracle = joint - pop(x as u64) - diff_count(y as u64, x as u64, 5);
            let got = chain_rule_defect(&model, x, y).map_err(|e| e.to_string())?;
            ensure(got == 0 && oracle == 0, || format!("x={x} y={y}: defect {got}, oracle {oracle}"))?;
            pairs += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("{pairs} pairs, defect 0, {:?}", start.elapsed()))
}

/// Shortest code per (cond, out) straight from the program list.
fn oracle_table(sys: &DescriptionSystem) -> Vec<Vec<Option<u32>>> {
    let n = sys.len();
    let mut t = vec![vec![None::<u32>; n]; n];
    for p in sys.programs() {
        if let Some(c) = p.cond {
            let len = p.code.len() as u32;
            let slot = &mut t[c][p.out];
            *slot = Some(slot.map_or(len, |v: u32| v.min(len)));
        }
    }
    t
}

fn path_lemma() -> Outcome {
    let start = Instant::now();
    let results: Vec<Result<(u64, u64), String>> = (0..1000u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(2, i);
            let n = r.gen_range(2..=64);
            let per = r.gen_range(0..=4 * n);
            let sys = random_system(&mut r, n, 8, per).map_err(|e| e.to_string())?;
            let table = oracle_table(&sys);
            let x = r.gen_range(0..n);
            // paths[v][w][z] via 2-D prefix counts over (C(y|x), C(z|y))
            let mut hist = vec![[[0u64; 10]; 10]; n];
            for y in 0..n {
                let Some(a) = table[x][y] else { continue };
                for z in 0..n {
                    if let Some(b) = table[y][z] {
                        hist[z][a.min(9) as usize][b.min(9) as usize] += 1;
                    }
                }
            }
            let mut checks = 0;
            let mut nontrivial = 0;
            for v in 0..=8u32 {
                for w in 0..=8u32 {
                    let oracle: Vec<u64> = (0..n)
                        .map(|z| {
                            (0..v as usize)
                                .flat_map(|a| (0..w as usize).map(move |b| (a, b)))
                                .map(|(a, b)| hist[z][a][b])
                                .sum()
                        })
                        .collect();
                    let counts = path_counts(x, v, w, &sys).map_err(|e| e.to_string())?;
                    ensure(counts == oracle, || format!("system {i}: path counts differ at v={v} w={w}"))?;
                    for u in 0..=v + w {
                        let check = path_lemma_from_counts(&counts, v, w, u).map_err(|e| e.to_string())?;
                        let targets = oracle.iter().filter(|&&c| u >= 64 || c >= 1u64 << u).count() as u64;
                        ensure(check.targets == targets, || format!("system {i}: target count differs"))?;
                        ensure(targets as u128 <= 1u128 << (v + w - u), || {
                            format!("system {i}: x={x} v={v} w={w} u={u}: {targets} targets")
                        })?;
                        checks += 1;
                        if targets > 0 && u > 0 {
                            nontrivial += 1;
                        }
                    }
                }
            }
            Ok((checks, nontrivial))
        })
        .collect();
    let mut checks = 0;
    let mut nontrivial = 0;
    for r in results {
        let (c, t) = r?;
        checks += c;
        nontrivial += t;
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!(
        "1000 systems, {checks} (v,w,u) checks ({nontrivial} with targets), 0 violations, {:?}",
        start.elapsed()
    ))
}

fn masks_to_events(points: usize, masks: &[u32]) -> EventSystem {
    EventSystem::new(points, masks.iter().map(|&m| (0..points).filter(|&p| m >> p & 1 == 1).collect()).collect())
        .unwrap()
}

/// Every family of distinct events of at most `max_events` members over
/// exactly `points` points satisfying the hypotheses, counted without pruning.
fn unpruned_claim_count(points: usize, max_events: usize, k: i64) -> u64 {
    fn rec(pool: &[u32], from: usize, fam: &mut Vec<u32>, left: usize, visit: &mut dyn FnMut(&[u32])) {
        if !fam.is_empty() {
            visit(fam);
        }
        if left == 0 {
            return;
        }
        for i in from..pool.len() {
            fam.push(pool[i]);
            rec(pool, i + 1, fam, left - 1, visit);
            fam.pop();
        }
    }
    let eps = Ratio::new(1, k);
    let pool: Vec<u32> = (1..1u32 << points).collect();
    let mut count = 0;
    rec(&pool, 0, &mut Vec::new(), max_events, &mut |fam| {
        let n = Ratio::from_integer(points as i64);
        let heavy = fam.iter().all(|&e| Ratio::from_integer(e.count_ones() as i64) / n > eps);
        let light = fam.iter().enumerate().all(|(a, &e)| {
            fam[a + 1..]
                .iter()
                .all(|&f| Ratio::from_integer((e & f).count_ones() as i64) / n < eps * eps / 2)
        });
        if heavy && light {
            count += 1;
        }
    });
    count
}

fn claim() -> Outcome {
    let start = Instant::now();
    let mut instances = 0;
    let mut largest = 0;
    for k in 1..=4u64 {
        let search = claim_search(10, 6, k).map_err(|e| e.to_string())?;
        ensure(search.pass(), || format!("k={k}: counterexample {:?}", search.counterexample))?;
        ensure((search.largest_family as u64) < 2 * k, || format!("k={k}: family of {}", search.largest_family))?;
        instances += search.instances;
        largest = largest.max(search.largest_family);

        // the pruned search agrees with plain enumeration on small spaces
        for points in 1..=5usize {
            let upto = claim_search(points, 3, k).unwrap().instances;
            let below = claim_search(points - 1, 3, k).unwrap().instances;
            let oracle = unpruned_claim_count(points, 3, k as i64);
            ensure(upto - below == oracle, || {
                format!("k={k} points={points}: search {} vs enumeration {oracle}", upto - below)
            })?;
        }

        let tight = tightness_configuration(k as usize);
        let report = claim_check::<Ratio<i64>>(&tight, Ratio::new(1, k as i64)).map_err(|e| e.to_string())?;
        ensure(report.events as u64 == k, || format!("k={k}: tightness has {} events", report.events))?;
        ensure(report.union_probability == Ratio::from_integer(1), || "union not 1".into())?;
        for (a, e) in tight.events.iter().enumerate() {
            ensure(Ratio::new(e.len() as i64, k as i64) == Ratio::new(1, k as i64), || "event not ε".into())?;
            for f in &tight.events[a + 1..] {
                ensure(e.iter().all(|p| !f.contains(p)), || "events overlap".into())?;
            }
        }
    }
    // a worked instance: ε = 1/4 with hypotheses holding
    let ev = masks_to_events(10, &[0b0000000111, 0b0000111000, 0b0111000000]);
    let r = claim_check::<Ratio<i64>>(&ev, Ratio::new(1, 4)).unwrap();
    ensure(r.hypotheses && r.events < 8, || "ε = 1/4 instance".into())?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "{instances} hypothesis-satisfying families, largest {largest}, no counterexample, N = 1/ε attained for k = 1..4, {:?}",
        start.elapsed()
    ))
}

fn planted(criterion: u64, i: u64) -> (ChaCha8Rng, PlantedInstance, u32) {
    let mut r = rng(criterion, i);
    let d = (i % 3) as u32;
    let m = d + r.gen_range(2..=4);
    let n = r.gen_range(16..=64);
    let blocks = r.gen_range(2..=10);
    let extra = r.gen_range(0..=4);
    let inst = planted_instance(&mut r, n, m, d, blocks, extra).unwrap();
    (r, inst, 2 * d + 2)
}

/// The filter rule restated: keep iff every earlier kept set shares at most
/// `2^(m - d')` members (none when the exponent is negative).
fn oracle_filter(stream: &[Vec<usize>], m: u32, dprime: u32) -> Vec<Vec<usize>> {
    let limit = |shared: usize| {
        let e = m as i64 - dprime as i64;
        if e < 0 {
            shared == 0
        } else {
            shared as u64 <= 1u64 << e
        }
    };
    let mut kept: Vec<Vec<usize>> = Vec::new();
    for s in stream {
        let mut s = s.clone();
        s.sort_unstable();
        s.dedup();
        if kept.iter().all(|k| limit(k.iter().filter(|x| s.contains(x)).count())) {
            kept.push(s);
        }
    }
    kept
}

fn multiplicity() -> Outcome {
    let results: Vec<Result<(u32, usize), String>> = (0..500u64)
        .into_par_iter()
        .map(|i| {
            let (mut r, inst, dprime) = planted(4, i);
            let stream = cluster_stream(&mut r, &inst, 3);
            let matrix = full_model_matrix(&inst.system).map_err(|e| e.to_string())?;
            let registry = referential_filter(&stream, inst.m, inst.d, dprime, &matrix).map_err(|e| e.to_string())?;
            let kept: Vec<Vec<usize>> = registry.kept.iter().map(|k| k.members.clone()).collect();
            ensure(kept == oracle_filter(&stream, inst.m, dprime), || format!("run {i}: registry differs"))?;
            let mut mult = vec![0usize; inst.system.len()];
            for k in &kept {
                for &x in k {
                    mult[x] += 1;
                }
            }
            let max = mult.into_iter().max().unwrap_or(0);
            let report = multiplicity_check(&registry, &inst.system).map_err(|e| e.to_string())?;
            ensure(report.max_multiplicity == max, || format!("run {i}: multiplicity recount differs"))?;
            ensure(max as u64 <= 1u64 << (inst.d + 1), || {
                format!("run {i}: m={} d={} multiplicity {max}", inst.m, inst.d)
            })?;
            Ok((inst.d, max))
        })
        .collect();
    let mut worst = [0usize; 3];
    for r in results {
        let (d, max) = r?;
        worst[d as usize] = worst[d as usize].max(max);
    }
    Ok(format!(
        "500 runs, max multiplicity by d = 0,1,2: {:?} (bounds 2, 4, 8)",
        worst
    ))
}

fn certification() -> Outcome {
    let results: Vec<Result<(usize, usize), String>> = (0..200u64)
        .into_par_iter()
        .map(|i| {
            let (mut r, inst, dprime) = planted(5, i);
            let stream = cluster_stream(&mut r, &inst, 3);
            let target = stream.choose(&mut r).unwrap().clone();
            let sys = &inst.system;
            let matrix = full_model_matrix(sys).map_err(|e| e.to_string())?;
            let registry = referential_filter(&stream, inst.m, inst.d, dprime, &matrix).map_err(|e| e.to_string())?;
            let cert = certify_core(&target, &registry, sys, &matrix).map_err(|e| format!("run {i}: {e}"))?;
            let decoded = decode_core(&cert, &registry, sys).map_err(|e| e.to_string())?;
            let mut expected = target.clone();
            expected.sort_unstable();
            ensure(decoded == expected, || format!("run {i}: decoded {decoded:?} != {expected:?}"))?;

            let kept = &registry.kept[cert.ordinal].members;
            let shared = kept.iter().filter(|x| expected.contains(x)).count();
            let large = if inst.m >= dprime {
                shared as u64 > 1u64 << (inst.m - dprime)
            } else {
                shared >= 1
            };
            ensure(shared == cert.shared && large, || format!("run {i}: intersection {shared} not large"))?;
            let mut merged = 0;
            for rec in &cert.records {
                let back = decode_ordinal(rec.member, &rec.code, &registry, sys).map_err(|e| e.to_string())?;
                ensure(back == cert.ordinal, || format!("run {i}: backward code gives {back}"))?;
                match rec.code {
                    MemberCode::Direct { rank_in_cluster, covering_rank } => {
                        let rank = kept.iter().position(|&x| x == rec.member).unwrap();
                        let covering = registry.kept[..cert.ordinal]
                            .iter()
                            .filter(|k| k.members.contains(&rec.member))
                            .count();
                        ensure(rank == rank_in_cluster && covering == covering_rank, || {
                            format!("run {i}: rank recount differs")
                        })?;
                        ensure(rec.forward_bits <= inst.m + 1, || format!("run {i}: rank width {}", rec.forward_bits))?;
                        ensure(rec.inverse_bits <= inst.d + 1, || {
                            format!("run {i}: covering width {}", rec.inverse_bits)
                        })?;
                    }
                    MemberCode::Merged { .. } => {
                        merged += 1;
                        ensure(cert.budget.admits(rec), || format!("run {i}: merged code over budget"))?;
                    }
                }
            }
            Ok((cert.records.len(), merged))
        })
        .collect();
    let (mut members, mut merged) = (0, 0);
    for r in results {
        let (a, b) = r?;
        members += a;
        merged += b;
    }
    Ok(format!(
        "200 certificates, {members} members decoded ({merged} through an intersection), widths within m+1 / d+1"
    ))
}

/// `I(a:b|c) = C(a|c) + C(b|c) - C(a,b|c)`, each term counted by position.
fn cmi(a: u64, b: u64, c: u64) -> i64 {
    diff_count(a, c, 4) + diff_count(b, c, 4) - diff_count(a | b, c, 4)
}

fn nonshannon() -> Outcome {
    let start = Instant::now();
    let u = Universe::new(4).unwrap();
    let sets: Vec<SetString> = (0..16).map(|b| SetString::from_bits(u, b).unwrap()).collect();
    let results: Vec<Result<i64, String>> = (0..16usize)
        .into_par_iter()
        .map(|x| {
            let mut min = i64::MAX;
            for y in 0..16usize {
                for z in 0..16usize {
                    for z1 in 0..16usize {
                        for z2 in 0..16usize {
                            let got = nonshannon_slack(&sets[x], &sets[y], &sets[z], &sets[z1], &sets[z2])
                                .map_err(|e| e.to_string())?;
                            let (xb, yb, zb, ab, bb) = (x as u64, y as u64, z as u64, z1 as u64, z2 as u64);
                            let rhs = cmi(xb, yb, ab) + cmi(xb, yb, bb) + cmi(ab, bb, 0) + cmi(xb, yb, zb)
                                + cmi(xb, zb, yb)
                                + cmi(yb, zb, xb);
                            let oracle = rhs - cmi(xb, yb, 0);
                            ensure(got == oracle, || format!("slack {got} vs oracle {oracle}"))?;
                            min = min.min(got);
                        }
                    }
                }
            }
            Ok(min)
        })
        .collect();
    let mut min = i64::MAX;
    for r in results {
        min = min.min(r?);
    }
    ensure(min >= 0, || format!("negative slack {min}"))?;
    within(start.elapsed(), Duration::from_secs(120))?;
    Ok(format!("{} five-tuples, min slack {min}, {:?}", 16u64.pow(5), start.elapsed()))
}

fn theorem_two() -> Outcome {
    let u = Universe::new(5).unwrap();
    let mut triples = 0;
    for x in 0..32u64 {
        for y in 0..32u64 {
            for z in 0..32u64 {
                let f = |b| SetString::from_bits(u, b).unwrap();
                let core = extract_triple_core(&f(x), &f(y), &f(z)).map_err(|e| e.to_string())?;
                let c = |m: u64| (0..5).filter(|&p| m >> p & 1 == 1).count() as i64;
                let info = c(x) + c(y) + c(z) - c(x | y) - c(x | z) - c(y | z) + c(x | y | z);
                ensure(core.complexity as i64 == info, || format!("C(w) {} vs I {info}", core.complexity))?;
                ensure(core.residuals == [0, 0, 0], || format!("residuals {:?}", core.residuals))?;
                ensure(core.w.bits() == x & y & z, || "w is not the triple intersection".into())?;
                triples += 1;
            }
        }
    }
    Ok(format!("{triples} triples, C(w) = I(x:y:z), residuals 0"))
}

fn daisies() -> Outcome {
    let mut checked = 0;
    let mut worst_gap = i64::MIN;
    for size in 1..=6u32 {
        let model = SetModel::new(Universe::new(size).unwrap()).unwrap();
        let n = 1u64 << size;
        for core in 0..n {
            for m in 0..=size {
                for d in 0..=2u32 {
                    let oracle: Vec<usize> = (0..n)
                        .filter(|&x| {
                            diff_count(core, x, size) <= d as i64 && diff_count(x, core, size) <= (m + d) as i64
                        })
                        .map(|x| x as usize)
                        .collect();
                    let p = DaisyParams { core: core as usize, m, d };
                    let members = daisy_members(&p, &model).map_err(|e| e.to_string())?;
                    ensure(members == oracle, || format!("daisy members differ at core {core}"))?;
                    let diameter = oracle
                        .iter()
                        .flat_map(|&a| oracle.iter().map(move |&b| (a as u64, b as u64)))
                        .map(|(a, b)| diff_count(a, b, size).max(diff_count(b, a, size)))
                        .max()
                        .unwrap();
                    let check = daisy_cluster_check(&p, &model, None).map_err(|e| e.to_string())?;
                    ensure(check.diameter.bits() == Some(diameter as u32), || "diameter differs".into())?;
                    ensure(diameter <= (m + 2 * d) as i64, || {
                        format!("universe {size} core {core} m={m} d={d}: diameter {diameter}")
                    })?;
                    worst_gap = worst_gap.max(diameter - (m + 2 * d) as i64);
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} daisies, max(diameter - (m+2d)) = {worst_gap}"))
}

fn random_matrix(r: &mut ChaCha8Rng) -> DistanceMatrix<u32> {
    let n = r.gen_range(1..=10);
    let mut e = vec![0u32; n * n];
    for i in 0..n {
        e[i * n + i] = u32::from(r.gen_range(0..8) == 0);
        for j in i + 1..n {
            let v = r.gen_range(0..=5);
            e[i * n + j] = v;
            e[j * n + i] = v;
        }
    }
    // a couple of tight blocks so clusters of size > 2 exist
    for _ in 0..2 {
        let size = r.gen_range(1..=n);
        let block: Vec<usize> = (0..n).collect::<Vec<_>>().choose_multiple(r, size).copied().collect();
        for &a in &block {
            for &b in &block {
                if a != b {
                    e[a * n + b] = e[a * n + b].min(1);
                }
            }
        }
    }
    DistanceMatrix::new((0..n).map(|i| format!("v{i}")).collect(), e.into_iter().map(Some).collect()).unwrap()
}

/// Maximal subsets with every pair (self-pairs included) within `m` and at
/// least `2^l` members, by listing all subsets.
fn subset_oracle(matrix: &DistanceMatrix<u32>, m: u32, l: u32) -> Vec<Vec<usize>> {
    let n = matrix.len();
    let feasible = |s: u32| {
        (0..n).all(|a| s >> a & 1 == 0 || (0..n).all(|b| s >> b & 1 == 0 || matrix.get(a, b).unwrap() <= m))
    };
    let all: Vec<u32> = (1..1u32 << n).filter(|&s| feasible(s)).collect();
    let mut out: Vec<Vec<usize>> = all
        .iter()
        .filter(|&&s| s.count_ones() >= 1 << l)
        .filter(|&&s| !all.iter().any(|&t| t != s && t & s == s))
        .map(|&s| (0..n).filter(|&i| s >> i & 1 == 1).collect())
        .collect();
    out.sort();
    out
}

fn mining() -> Outcome {
    let mut found = 0;
    for i in 0..50u64 {
        let mut r = rng(9, i);
        let matrix = random_matrix(&mut r);
        let m = r.gen_range(0..=3);
        let l = r.gen_range(0..=2);
        let mut mined: Vec<Vec<usize>> = mine_clusters(&matrix, m, l)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|c| c.members)
            .collect();
        mined.sort();
        let oracle = subset_oracle(&matrix, m, l);
        ensure(mined == oracle, || format!("instance {i} (m={m}, l={l}): mined {mined:?}, oracle {oracle:?}"))?;
        found += mined.len();
    }
    Ok(format!("50 matrices, {found} maximal clusters, identical to the subset oracle"))
}

fn ari(a: &[usize], b: &[usize]) -> f64 {
    let c2 = |k: f64| k * (k - 1.0) / 2.0;
    let mut cells: HashMap<(usize, usize), f64> = HashMap::new();
    let mut ra: HashMap<usize, f64> = HashMap::new();
    let mut rb: HashMap<usize, f64> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *cells.entry((x, y)).or_default() += 1.0;
        *ra.entry(x).or_default() += 1.0;
        *rb.entry(y).or_default() += 1.0;
    }
    let idx: f64 = cells.values().map(|&v| c2(v)).sum();
    let sa: f64 = ra.values().map(|&v| c2(v)).sum();
    let sb: f64 = rb.values().map(|&v| c2(v)).sum();
    let exp = sa * sb / c2(a.len() as f64);
    (idx - exp) / ((sa + sb) / 2.0 - exp)
}

fn ncd_pipeline() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let corpus = dir.path().join("corpus");
    let truth = synthetic_corpus(&corpus, 3, 10, 4096, 7).map_err(|e| e.to_string())?;
    let run = |name: &str| {
        run_pipeline(&PipelineConfig {
            input: corpus.clone(),
            out: dir.path().join(name),
            compressor: Compressor::builtin(DEFAULT_LEVEL),
            scale: BitScale::MeanCompressedBits,
            m: None,
            l: 0,
        })
        .map_err(|e| e.to_string())
    };
    let first = run("a")?;
    run("b")?;
    for file in ["matrix.csv", "clusters.json", "tree.dot"] {
        let a = fs::read(dir.path().join("a").join(file)).map_err(|e| e.to_string())?;
        let b = fs::read(dir.path().join("b").join(file)).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("{file} differs between runs"))?;
    }
    // labels from clusters.json, first cluster wins
    let json: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("a/clusters.json")).unwrap()).unwrap();
    let mut label: HashMap<String, usize> = HashMap::new();
    for (c, cluster) in json.as_array().unwrap().iter().enumerate() {
        for id in cluster["members"].as_array().unwrap() {
            label.entry(id.as_str().unwrap().to_string()).or_insert(c);
        }
    }
    let mut next = 1000;
    let predicted: Vec<usize> = truth
        .iter()
        .map(|(id, _)| {
            *label.entry(id.clone()).or_insert_with(|| {
                next += 1;
                next
            })
        })
        .collect();
    let expected: Vec<usize> = truth.iter().map(|&(_, f)| f).collect();
    ensure(first.ids == truth.iter().map(|(id, _)| id.clone()).collect::<Vec<_>>(), || "ids differ".into())?;
    let score = ari(&predicted, &expected);
    ensure(score >= 0.9, || format!("adjusted Rand index {score:.3}"))?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "{} clusters, adjusted Rand index {score:.3}, outputs byte-identical, {:?}",
        json.as_array().unwrap().len(),
        start.elapsed()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("chain rule defect is 0 on universe 5", chain_rule),
        ("path-lemma counting bound on 1000 random systems", path_lemma),
        ("claim search finds no counterexample; tightness", claim),
        ("multiplicity <= 2^(d+1) over 500 filter runs", multiplicity),
        ("core certificates decode with bounded widths", certification),
        ("non-Shannon slack >= 0 on universe 4", nonshannon),
        ("common core realizes triple information on universe 5", theorem_two),
        ("daisy diameter <= m + 2d on universes <= 6", daisies),
        ("mined clusters equal the subset oracle", mining),
        ("NCD pipeline recovers the synthetic families", ncd_pipeline),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
