//! The applied pipeline: NCD matrix of a byte corpus, mined clusters and a
//! dendrogram, plus the synthetic dictionary-family corpus used to test it.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cluster::{dendrogram_dot, mine_clusters, ClusterRecord, DistanceMatrix};
use crate::error::{Error, Result};
use crate::ncd::{ncd_matrix, read_corpus, BitScale, Compressor};

pub const DEFAULT_SEED: u64 = 7;

/// Writes `families × files` text files of about `bytes` bytes each. Every
/// family draws words from its own random dictionary. Files are named
/// `fam{f}_{k}.txt`; returns the ids in sorted order with their family.
pub fn synthetic_corpus(
    dir: &Path,
    families: usize,
    files: usize,
    bytes: usize,
    seed: u64,
) -> Result<Vec<(String, usize)>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut truth = Vec::new();
    for f in 0..families {
        let dictionary: Vec<String> = (0..48)
            .map(|_| {
                let len = rng.gen_range(3..=9);
                (0..len).map(|_| rng.gen_range(b'a'..=b'z') as char).collect()
            })
            .collect();
        for k in 0..files {
            let mut text = String::with_capacity(bytes + 16);
            while text.len() < bytes {
                text.push_str(dictionary.choose(&mut rng).expect("nonempty dictionary"));
                text.push(if rng.gen_range(0..12) == 0 { '\n' } else { ' ' });
            }
            let id = format!("fam{f}_{k:02}.txt");
            let path = dir.join(&id);
            fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
            truth.push((id, f));
        }
    }
    truth.sort();
    Ok(truth)
}

/// Threshold for NCD bit matrices: the lower end of the widest gap between
/// consecutive sorted off-diagonal entries, and never below the diagonal.
pub fn auto_threshold(matrix: &DistanceMatrix<f64>) -> f64 {
    let n = matrix.len();
    let diag = (0..n)
        .filter_map(|i| matrix.get(i, i))
        .fold(0.0f64, f64::max);
    let mut off: Vec<f64> = (0..n)
        .flat_map(|i| (i + 1..n).filter_map(move |j| matrix.get(i, j)))
        .collect();
    off.sort_by(f64::total_cmp);
    let gap = off
        .windows(2)
        .fold(None::<(f64, f64)>, |best, w| {
            let g = w[1] - w[0];
            match best {
                Some((bg, _)) if bg >= g => best,
                _ => Some((g, w[0])),
            }
        })
        .map(|(_, low)| low);
    match gap {
        Some(low) => low.max(diag),
        None => off.first().copied().unwrap_or(diag).max(diag),
    }
}

/// Labels each item by the first cluster containing it; uncovered items
/// get labels of their own.
pub fn partition(n: usize, clusters: &[Vec<usize>]) -> Vec<usize> {
    let mut labels = vec![usize::MAX; n];
    for (c, members) in clusters.iter().enumerate() {
        for &x in members {
            if labels[x] == usize::MAX {
                labels[x] = c;
            }
        }
    }
    let unassigned = labels.iter_mut().filter(|l| **l == usize::MAX);
    for (next, l) in (clusters.len()..).zip(unassigned) {
        *l = next;
    }
    labels
}

/// Adjusted Rand index of two labelings of the same items.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len());
    let pairs = |k: u64| (k * k.saturating_sub(1) / 2) as f64;
    let mut table: HashMap<(usize, usize), u64> = HashMap::new();
    let mut rows: HashMap<usize, u64> = HashMap::new();
    let mut cols: HashMap<usize, u64> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *table.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let index: f64 = table.values().map(|&k| pairs(k)).sum();
    let sa: f64 = rows.values().map(|&k| pairs(k)).sum();
    let sb: f64 = cols.values().map(|&k| pairs(k)).sum();
    let total = pairs(a.len() as u64);
    if total == 0.0 {
        return 1.0;
    }
    let expected = sa * sb / total;
    let max = (sa + sb) / 2.0;
    if max == expected {
        return 1.0;
    }
    (index - expected) / (max - expected)
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub input: PathBuf,
    pub out: PathBuf,
    pub compressor: Compressor,
    pub scale: BitScale,
    /// Diameter threshold in scaled bits; `None` picks [`auto_threshold`].
    pub m: Option<f64>,
    pub l: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineOutput {
    pub ids: Vec<String>,
    pub scale: f64,
    pub threshold: f64,
    pub clusters: Vec<ClusterRecord<f64>>,
    pub partition: Vec<usize>,
}

/// Writes `matrix.csv` (bit-scaled NCD), `clusters.json` and `tree.dot`
/// under `config.out`.
pub fn run_pipeline(config: &PipelineConfig) -> Result<PipelineOutput> {
    let items = read_corpus(&config.input)?;
    let mats = ncd_matrix(&items, &config.compressor, config.scale)?;
    let threshold = config.m.unwrap_or_else(|| auto_threshold(&mats.bits));
    let clusters = mine_clusters(&mats.bits, threshold, config.l)?;
    let records: Vec<ClusterRecord<f64>> = clusters
        .iter()
        .map(|c| ClusterRecord::new(c, &mats.bits, threshold, config.l))
        .collect();
    let members: Vec<Vec<usize>> = clusters.iter().map(|c| c.members.clone()).collect();

    fs::create_dir_all(&config.out).map_err(|e| Error::io(&config.out, e))?;
    let write = |name: &str, contents: &[u8]| {
        let path = config.out.join(name);
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))
    };
    write("matrix.csv", mats.bits.to_csv_string()?.as_bytes())?;
    let mut json = serde_json::to_string_pretty(&records)?;
    json.push('\n');
    write("clusters.json", json.as_bytes())?;
    write("tree.dot", dendrogram_dot(&mats.bits).as_bytes())?;

    Ok(PipelineOutput {
        ids: mats.bits.ids().to_vec(),
        scale: mats.scale,
        threshold,
        clusters: records,
        partition: partition(items.len(), &members),
    })
}
