//! Seeded verification suites over the finite models, as run by `infodist verify`.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cluster::{full_model_matrix, mine_clusters, DistanceMatrix};
use crate::daisy::{
    certify_core, claim_check, claim_search, daisy_cluster_check, decode_core, decode_ordinal,
    multiplicity_check, path_counts, path_lemma_from_counts, referential_filter, tightness_configuration,
    DaisyParams, MemberCode, ReferentialRegistry, RegistryFile,
};
use crate::error::{Error, Result};
use crate::gen::{cluster_stream, planted_instance, random_system};
use crate::model::{chain_rule_defect, SetModel, SetString, Universe};
use crate::triple::{extract_triple_core, nonshannon_min_slack, profile};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Chain,
    Path,
    Claim,
    Multiplicity,
    Certify,
    Nonshannon,
    Triple,
    Daisy,
    Mining,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Chain,
        Suite::Path,
        Suite::Claim,
        Suite::Multiplicity,
        Suite::Certify,
        Suite::Nonshannon,
        Suite::Triple,
        Suite::Daisy,
        Suite::Mining,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Chain => "chain",
            Suite::Path => "path",
            Suite::Claim => "claim",
            Suite::Multiplicity => "multiplicity",
            Suite::Certify => "certify",
            Suite::Nonshannon => "nonshannon",
            Suite::Triple => "triple",
            Suite::Daisy => "daisy",
            Suite::Mining => "mining",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Format(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub suites: Vec<Suite>,
    /// Largest probability space in the claim search.
    pub exhaustive_points: usize,
    pub path_systems: usize,
    pub multiplicity_runs: usize,
    pub certify_runs: usize,
    pub mining_instances: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: DEFAULT_SEED,
            suites: Suite::ALL.to_vec(),
            exhaustive_points: 10,
            path_systems: 1000,
            multiplicity_runs: 500,
            certify_runs: 200,
            mining_instances: 50,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub instances: u64,
    pub counterexample: Option<Value>,
    pub wall_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub pass: bool,
    pub suites: Vec<SuiteReport>,
}

/// Independent stream per suite and instance.
pub fn instance_rng(seed: u64, suite: Suite, instance: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (suite as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    rng.set_stream(instance);
    rng
}

struct Outcome {
    instances: u64,
    counterexample: Option<Value>,
}

fn first_failure(results: Vec<Option<Value>>) -> Outcome {
    Outcome {
        instances: results.len() as u64,
        counterexample: results.into_iter().flatten().next(),
    }
}

pub fn run_verify(config: &VerifyConfig) -> Result<VerifyReport> {
    let mut suites = Vec::with_capacity(config.suites.len());
    for &suite in &config.suites {
        let start = Instant::now();
        let outcome = match suite {
            Suite::Chain => chain_suite()?,
            Suite::Path => path_suite(config)?,
            Suite::Claim => claim_suite(config)?,
            Suite::Multiplicity => multiplicity_suite(config)?,
            Suite::Certify => certify_suite(config)?,
            Suite::Nonshannon => nonshannon_suite()?,
            Suite::Triple => triple_suite()?,
            Suite::Daisy => daisy_suite()?,
            Suite::Mining => mining_suite(config)?,
        };
        suites.push(SuiteReport {
            suite: suite.name().to_string(),
            pass: outcome.counterexample.is_none(),
            instances: outcome.instances,
            counterexample: outcome.counterexample,
            wall_ms: start.elapsed().as_millis() as u64,
        });
    }
    Ok(VerifyReport {
        seed: config.seed,
        pass: suites.iter().all(|s| s.pass),
        suites,
    })
}

/// Re-checks the pairwise-intersection invariant of a registry dump.
pub fn registry_suite(file: &RegistryFile) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut labels: Vec<&str> = file.kept.iter().flat_map(|k| k.members.iter().map(String::as_str)).collect();
    labels.sort_unstable();
    labels.dedup();
    let registry = ReferentialRegistry::from_file(file, |s| labels.binary_search(&s).ok())?;
    let violation = registry.invariant_violation();
    Ok(SuiteReport {
        suite: "registry".into(),
        pass: violation.is_none(),
        instances: (registry.kept.len() * registry.kept.len().saturating_sub(1) / 2) as u64,
        counterexample: violation.map(|(a, b, shared)| {
            json!({
                "ordinals": [a, b],
                "intersection": shared,
                "threshold_exponent": registry.threshold_exponent(),
            })
        }),
        wall_ms: start.elapsed().as_millis() as u64,
    })
}

fn set_model(size: u32) -> Result<SetModel> {
    SetModel::new(Universe::new(size)?)
}

fn chain_suite() -> Result<Outcome> {
    let model = set_model(5)?;
    let results = (0..32usize)
        .into_par_iter()
        .map(|x| {
            for y in 0..32 {
                let defect = chain_rule_defect(&model, x, y)?;
                if defect != 0 {
                    return Ok(Some(json!({"x": model.set(x).to_string(), "y": model.set(y).to_string(), "defect": defect})));
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome {
        instances: 1024,
        ..first_failure(results)
    })
}

fn path_suite(config: &VerifyConfig) -> Result<Outcome> {
    let results = (0..config.path_systems as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(config.seed, Suite::Path, i);
            let n = rng.gen_range(2..=64);
            let per = rng.gen_range(0..=4 * n);
            let sys = random_system(&mut rng, n, 8, per)?;
            let starts: Vec<usize> = (0..4).map(|_| rng.gen_range(0..n)).collect();
            for x in starts {
                for v in 0..=8 {
                    for w in 0..=8 {
                        let counts = path_counts(x, v, w, &sys)?;
                        for u in 0..=v + w {
                            let check = path_lemma_from_counts(&counts, v, w, u)?;
                            if !check.pass {
                                return Ok(Some(json!({
                                    "instance": i, "x": x, "v": v, "w": w, "u": u,
                                    "targets": check.targets, "bound": check.bound as u64,
                                })));
                            }
                        }
                    }
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(first_failure(results))
}

fn claim_suite(config: &VerifyConfig) -> Result<Outcome> {
    let mut instances = 0;
    for k in 1..=4u64 {
        let search = claim_search(config.exhaustive_points, 6, k)?;
        instances += search.instances;
        if let Some(ev) = search.counterexample {
            return Ok(Outcome {
                instances,
                counterexample: Some(json!({"k": k, "events": ev})),
            });
        }
        let tight = tightness_configuration(k as usize);
        let report = claim_check::<Ratio<i64>>(&tight, Ratio::new(1, k as i64))?;
        if report.events as u64 != k || report.union_probability != Ratio::from_integer(1) {
            return Ok(Outcome {
                instances,
                counterexample: Some(json!({"k": k, "tightness": tight})),
            });
        }
    }
    Ok(Outcome {
        instances,
        counterexample: None,
    })
}

/// A planted instance with `d` cycling through 0..=2 and `m` in `d+2..=d+4`.
fn planted_run(seed: u64, suite: Suite, i: u64) -> Result<(ChaCha8Rng, crate::gen::PlantedInstance, u32)> {
    let mut rng = instance_rng(seed, suite, i);
    let d = (i % 3) as u32;
    let m = d + rng.gen_range(2..=4);
    let n = rng.gen_range(16..=64);
    let blocks = rng.gen_range(2..=10);
    let extra = rng.gen_range(0..=4);
    let inst = planted_instance(&mut rng, n, m, d, blocks, extra)?;
    Ok((rng, inst, 2 * d + 2))
}

fn multiplicity_suite(config: &VerifyConfig) -> Result<Outcome> {
    let results = (0..config.multiplicity_runs as u64)
        .into_par_iter()
        .map(|i| {
            let (mut rng, inst, dprime) = planted_run(config.seed, Suite::Multiplicity, i)?;
            let stream = cluster_stream(&mut rng, &inst, 3);
            let matrix = full_model_matrix(&inst.system)?;
            let registry = referential_filter(&stream, inst.m, inst.d, dprime, &matrix)?;
            if let Some((a, b, shared)) = registry.invariant_violation() {
                return Ok(Some(json!({"instance": i, "ordinals": [a, b], "intersection": shared})));
            }
            let report = multiplicity_check(&registry, &inst.system)?;
            Ok((!report.pass).then(|| {
                json!({
                    "instance": i, "m": inst.m, "d": inst.d, "dprime": dprime,
                    "max_multiplicity": report.max_multiplicity, "bound": report.bound,
                    "witness": report.witness,
                })
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(first_failure(results))
}

fn certify_suite(config: &VerifyConfig) -> Result<Outcome> {
    let results = (0..config.certify_runs as u64)
        .into_par_iter()
        .map(|i| {
            let (mut rng, inst, dprime) = planted_run(config.seed, Suite::Certify, i)?;
            let stream = cluster_stream(&mut rng, &inst, 3);
            let target = stream.choose(&mut rng).expect("planted instances have blocks").clone();
            let matrix = full_model_matrix(&inst.system)?;
            let registry = referential_filter(&stream, inst.m, inst.d, dprime, &matrix)?;
            let cert = certify_core(&target, &registry, &inst.system, &matrix)?;
            let fail = |why: &str| Some(json!({"instance": i, "reason": why, "target": target, "ordinal": cert.ordinal}));
            if decode_core(&cert, &registry, &inst.system)? != target {
                return Ok(fail("decoded members differ from the target"));
            }
            for r in &cert.records {
                if decode_ordinal(r.member, &r.code, &registry, &inst.system)? != cert.ordinal {
                    return Ok(fail("backward code does not recover the ordinal"));
                }
                if let MemberCode::Direct { .. } = r.code {
                    if r.forward_bits > inst.m + 1 || r.inverse_bits > inst.d + 1 {
                        return Ok(fail("direct code wider than m+1 / d+1"));
                    }
                }
            }
            Ok((!cert.within_budget()).then(|| fail("code word over budget")).flatten())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(first_failure(results))
}

fn nonshannon_suite() -> Result<Outcome> {
    let (min, witness, count) = nonshannon_min_slack(Universe::new(4)?)?;
    Ok(Outcome {
        instances: count,
        counterexample: (min < 0).then(|| json!({"slack": min, "tuple": witness})),
    })
}

fn triple_suite() -> Result<Outcome> {
    let u = Universe::new(5)?;
    let results = (0..32u64)
        .into_par_iter()
        .map(|x| {
            let x = SetString::from_bits(u, x)?;
            for y in 0..32 {
                let y = SetString::from_bits(u, y)?;
                for z in 0..32 {
                    let z = SetString::from_bits(u, z)?;
                    let core = extract_triple_core(&x, &y, &z)?;
                    let info = profile(&x, &y, &z)?.triple_information();
                    if core.complexity as i64 != info || core.residuals != [0, 0, 0] {
                        return Ok(Some(json!({
                            "x": x.to_string(), "y": y.to_string(), "z": z.to_string(),
                            "triple_info": info, "core": core.complexity, "residuals": core.residuals,
                        })));
                    }
                }
            }
            Ok(None)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome {
        instances: 32 * 32 * 32,
        ..first_failure(results)
    })
}

fn daisy_suite() -> Result<Outcome> {
    let mut instances = 0;
    for size in 1..=6 {
        let model = set_model(size)?;
        for core in 0..model_len(size) {
            for m in 0..=size {
                for d in 0..=2 {
                    instances += 1;
                    let check = daisy_cluster_check(&DaisyParams { core, m, d }, &model, None)?;
                    if !check.pass {
                        return Ok(Outcome {
                            instances,
                            counterexample: Some(json!({
                                "universe": size, "core": model.set(core).to_string(), "m": m, "d": d,
                                "diameter": check.diameter, "bound": check.bound,
                            })),
                        });
                    }
                }
            }
        }
    }
    Ok(Outcome {
        instances,
        counterexample: None,
    })
}

fn model_len(size: u32) -> usize {
    1 << size
}

/// Maximal subsets of `0..n` with all pairs (self-pairs included) within `m`
/// and at least `2^l` members, by scanning every subset.
pub fn maximal_feasible_subsets(matrix: &DistanceMatrix<u32>, m: u32, l: u32) -> Vec<Vec<usize>> {
    let n = matrix.len();
    assert!(n <= 16);
    let ok = |a: usize, b: usize| matches!(matrix.get(a, b), Some(v) if v <= m);
    let feasible: Vec<bool> = (0..1u32 << n)
        .map(|s| {
            let members: Vec<usize> = (0..n).filter(|&i| s >> i & 1 == 1).collect();
            members.iter().all(|&a| members.iter().all(|&b| ok(a, b)))
        })
        .collect();
    (1..1u32 << n)
        .filter(|&s| feasible[s as usize] && s.count_ones() as u64 >= 1u64 << l)
        .filter(|&s| (0..n).all(|i| s >> i & 1 == 1 || !feasible[(s | 1 << i) as usize]))
        .map(|s| (0..n).filter(|&i| s >> i & 1 == 1).collect())
        .collect()
}

/// A random symmetric matrix on at most 10 items, with a few planted
/// low-distance blocks.
pub fn random_mining_matrix<R: Rng + ?Sized>(rng: &mut R) -> DistanceMatrix<u32> {
    let n = rng.gen_range(1..=10);
    let mut e = vec![0u32; n * n];
    for i in 0..n {
        e[i * n + i] = rng.gen_range(0..=1);
        for j in i + 1..n {
            let v = rng.gen_range(0..=6);
            e[i * n + j] = v;
            e[j * n + i] = v;
        }
    }
    for _ in 0..rng.gen_range(0..=2) {
        let size = rng.gen_range(1..=n);
        let block: Vec<usize> = (0..n).collect::<Vec<_>>().choose_multiple(rng, size).copied().collect();
        for &a in &block {
            for &b in &block {
                if a != b {
                    e[a * n + b] = e[a * n + b].min(1);
                }
            }
        }
    }
    let ids = (0..n).map(|i| format!("i{i}")).collect();
    DistanceMatrix::new(ids, e.into_iter().map(Some).collect()).expect("symmetric by construction")
}

fn mining_suite(config: &VerifyConfig) -> Result<Outcome> {
    let results = (0..config.mining_instances as u64)
        .map(|i| {
            let mut rng = instance_rng(config.seed, Suite::Mining, i);
            let matrix = random_mining_matrix(&mut rng);
            let m = rng.gen_range(0..=4);
            let l = rng.gen_range(0..=2);
            let mut mined: Vec<Vec<usize>> = mine_clusters(&matrix, m, l)?.into_iter().map(|c| c.members).collect();
            let mut oracle = maximal_feasible_subsets(&matrix, m, l);
            mined.sort();
            oracle.sort();
            Ok((mined != oracle).then(|| json!({"instance": i, "m": m, "l": l, "mined": mined, "oracle": oracle})))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(first_failure(results))
}
