//! Seeded generators for description systems, planted cluster instances and
//! cluster streams.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::model::DescriptionSystem;

/// The `index`-th binary word in length-then-lexicographic order:
/// `"", "0", "1", "00", ...`.
pub fn code_word(index: usize) -> String {
    let v = index as u64 + 1;
    let len = 63 - v.leading_zeros();
    (0..len).rev().map(|b| if v >> b & 1 == 1 { '1' } else { '0' }).collect()
}

/// Names `s00, s01, ...` padded to the width of `n - 1`.
pub fn string_names(n: usize) -> Vec<String> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n).map(|i| format!("s{i:0width$}")).collect()
}

/// A system where `neighbours[c]` lists the outputs reachable from `c`, in
/// order of increasing code length: the `k`-th listed output gets
/// [`code_word`]`(k)`.
pub fn system_from_neighbourhoods(neighbours: &[Vec<usize>]) -> Result<DescriptionSystem> {
    let mut sys = DescriptionSystem::new(string_names(neighbours.len()))?;
    for (cond, outs) in neighbours.iter().enumerate() {
        for (k, &out) in outs.iter().enumerate() {
            sys.add_program_by_index(&code_word(k), Some(cond), out)?;
        }
    }
    Ok(sys)
}

/// A random system on `strings` strings with code lengths at most `max_len`.
/// Each condition (and the empty one) draws up to `programs_per_condition`
/// programs of uniform length and output; a length whose codes are used up is
/// skipped.
pub fn random_system<R: Rng + ?Sized>(
    rng: &mut R,
    strings: usize,
    max_len: u32,
    programs_per_condition: usize,
) -> Result<DescriptionSystem> {
    let mut sys = DescriptionSystem::new(string_names(strings))?;
    let conds = std::iter::once(None).chain((0..strings).map(Some));
    for cond in conds {
        let mut used = vec![0u64; max_len as usize + 1];
        let count = rng.gen_range(0..=programs_per_condition);
        for _ in 0..count {
            let len = rng.gen_range(0..=max_len);
            let next = &mut used[len as usize];
            if *next >= 1u64 << len {
                continue;
            }
            let code: String = (0..len).rev().map(|b| if *next >> b & 1 == 1 { '1' } else { '0' }).collect();
            *next += 1;
            sys.add_program_by_index(&code, cond, rng.gen_range(0..strings))?;
        }
    }
    Ok(sys)
}

/// A description system with planted `(m, m - d)`-clusters.
#[derive(Clone, Debug)]
pub struct PlantedInstance {
    pub system: DescriptionSystem,
    pub m: u32,
    pub d: u32,
    /// Each block is a sorted `(m, m - d)`-cluster.
    pub blocks: Vec<Vec<usize>>,
}

/// Plants up to `blocks` random blocks of `2^(m-d)` to `2^(m-d) + extra`
/// strings among `strings` strings. Every pair inside a block gets programs of
/// length at most `m` both ways; a block is skipped if it would push some
/// string's radius-`m` ball past `2^(m+1) - 1`. Strings also get a few
/// programs of length `m + 1` or `m + 2` to random outputs.
pub fn planted_instance<R: Rng + ?Sized>(
    rng: &mut R,
    strings: usize,
    m: u32,
    d: u32,
    blocks: usize,
    extra: usize,
) -> Result<PlantedInstance> {
    assert!(d <= m && m <= 16);
    let base = 1usize << (m - d);
    let cap = (1usize << (m + 1)) - 1;
    let size_max = (base + extra).min(strings);
    let mut neighbours: Vec<Vec<usize>> = (0..strings).map(|x| vec![x]).collect();
    let mut planted: Vec<Vec<usize>> = Vec::new();
    let pool: Vec<usize> = (0..strings).collect();
    for _ in 0..blocks {
        if base > strings {
            break;
        }
        let size = rng.gen_range(base..=size_max);
        let mut block: Vec<usize> = pool.choose_multiple(rng, size).copied().collect();
        block.sort_unstable();
        let fits = block.iter().all(|&x| {
            let mut ball = neighbours[x].clone();
            ball.extend(&block);
            ball.sort_unstable();
            ball.dedup();
            ball.len() <= cap
        });
        if !fits {
            continue;
        }
        for &x in &block {
            let nb = &mut neighbours[x];
            nb.extend(&block);
            nb.sort_unstable();
            nb.dedup();
        }
        planted.push(block);
    }
    // within a ball, order outputs by first appearance so the string itself gets ""
    let mut system = DescriptionSystem::new(string_names(strings))?;
    for (cond, nb) in neighbours.iter().enumerate() {
        let mut ordered = vec![cond];
        ordered.extend(nb.iter().copied().filter(|&y| y != cond));
        for (k, &out) in ordered.iter().enumerate() {
            system.add_program_by_index(&code_word(k), Some(cond), out)?;
        }
        for (k, len) in [(0u64, m + 1), (1, m + 1), (0, m + 2)] {
            let code: String = std::iter::once('1')
                .chain((0..len - 1).rev().map(|b| if k >> b & 1 == 1 { '1' } else { '0' }))
                .collect();
            if !system.has_code(&code, Some(cond)) {
                system.add_program_by_index(&code, Some(cond), rng.gen_range(0..strings))?;
            }
        }
    }
    Ok(PlantedInstance {
        system,
        m,
        d,
        blocks: planted,
    })
}

/// Every block plus `subsets_per_block` random subsets of at least
/// `2^(m-d)` members of each block, shuffled.
pub fn cluster_stream<R: Rng + ?Sized>(
    rng: &mut R,
    instance: &PlantedInstance,
    subsets_per_block: usize,
) -> Vec<Vec<usize>> {
    let base = 1usize << (instance.m - instance.d);
    let mut stream = Vec::new();
    for block in &instance.blocks {
        stream.push(block.clone());
        for _ in 0..subsets_per_block {
            let size = rng.gen_range(base..=block.len());
            let mut sub: Vec<usize> = block.choose_multiple(rng, size).copied().collect();
            sub.sort_unstable();
            stream.push(sub);
        }
    }
    stream.shuffle(rng);
    stream
}
