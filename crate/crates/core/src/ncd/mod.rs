//! Compressor-based proxies for information distance on byte data.

pub mod lz77;

use std::path::Path;
use std::process::Command;

use num_rational::Ratio;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::cluster::DistanceMatrix;
use crate::error::{Error, Result};

pub use lz77::HEADER_LEN;

pub const DEFAULT_LEVEL: u8 = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompressorKind {
    /// The in-repo LZ77 coder (see [`lz77`]).
    Builtin,
    /// A shell command with `{in}` and `{out}` placeholders.
    External { template: String },
}

/// Which compressor stands in for `C`, and at what level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compressor {
    pub kind: CompressorKind,
    pub level: u8,
}

impl Default for Compressor {
    fn default() -> Self {
        Compressor::builtin(DEFAULT_LEVEL)
    }
}

impl Compressor {
    pub fn builtin(level: u8) -> Self {
        Compressor {
            kind: CompressorKind::Builtin,
            level: level.clamp(1, 9),
        }
    }

    pub fn external(template: impl Into<String>) -> Result<Self> {
        let template = template.into();
        if !template.contains("{in}") || !template.contains("{out}") {
            return Err(Error::BadTemplate(template));
        }
        Ok(Compressor {
            kind: CompressorKind::External { template },
            level: DEFAULT_LEVEL,
        })
    }

    /// Parses `builtin` or `cmd:TEMPLATE`.
    pub fn parse(spec: &str) -> Result<Self> {
        match spec {
            "builtin" => Ok(Compressor::default()),
            _ => match spec.strip_prefix("cmd:") {
                Some(t) => Compressor::external(t),
                None => Err(Error::BadTemplate(spec.to_string())),
            },
        }
    }
}

/// Output of [`compress`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compressed {
    pub length: usize,
    pub payload: Vec<u8>,
}

pub fn compress(data: &[u8], c: &Compressor) -> Result<Compressed> {
    let payload = match &c.kind {
        CompressorKind::Builtin => lz77::compress(data, c.level),
        CompressorKind::External { template } => {
            let first = run_external(template, data)?;
            let second = run_external(template, data)?;
            if first != second {
                return Err(Error::Nondeterministic {
                    first: first.len(),
                    second: second.len(),
                });
            }
            first
        }
    };
    Ok(Compressed {
        length: payload.len(),
        payload,
    })
}

pub fn decompress(payload: &[u8], c: &Compressor) -> Result<Vec<u8>> {
    match c.kind {
        CompressorKind::Builtin => lz77::decompress(payload),
        CompressorKind::External { .. } => Err(Error::NoDecompressor),
    }
}

/// Compressed length `Z(data)` in bytes.
pub fn compressed_len(data: &[u8], c: &Compressor) -> Result<usize> {
    Ok(compress(data, c)?.length)
}

fn shell_quote(path: &Path) -> String {
    format!("'{}'", path.display().to_string().replace('\'', r"'\''"))
}

fn run_external(template: &str, data: &[u8]) -> Result<Vec<u8>> {
    let dir = tempfile::tempdir().map_err(|e| Error::ExternalFailure(e.to_string()))?;
    let input = dir.path().join("in");
    let output = dir.path().join("out");
    std::fs::write(&input, data).map_err(|e| Error::io(&input, e))?;
    let cmd = template
        .replace("{in}", &shell_quote(&input))
        .replace("{out}", &shell_quote(&output));
    let status = Command::new("sh")
        .arg("-c")
        .arg(&cmd)
        .status()
        .map_err(|e| Error::ExternalFailure(format!("{cmd}: {e}")))?;
    if !status.success() {
        return Err(Error::ExternalFailure(format!("{cmd}: {status}")));
    }
    std::fs::read(&output).map_err(|e| Error::io(&output, e))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProxyUnits {
    /// Compressed bytes.
    Bytes,
    /// Normalized compression distance.
    Dimensionless,
}

/// A nonnegative rational proxy for a distance or conditional complexity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProxyDistance {
    pub value: Ratio<u64>,
    pub units: ProxyUnits,
}

impl ProxyDistance {
    pub fn to_f64(self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

/// One side of the information distance: `max(Z(y·x) - Z(y), 0)` bytes,
/// approximating `C(x|y)`.
pub fn cond_proxy(x: &[u8], y: &[u8], c: &Compressor) -> Result<ProxyDistance> {
    let zy = compressed_len(y, c)?;
    let yx = [y, x].concat();
    let zyx = compressed_len(&yx, c)?;
    Ok(ProxyDistance {
        value: Ratio::from_integer(zyx.saturating_sub(zy) as u64),
        units: ProxyUnits::Bytes,
    })
}

/// Orders the operands so the lexicographically smaller one comes first.
fn canonical<'a>(x: &'a [u8], y: &'a [u8]) -> (&'a [u8], &'a [u8]) {
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

fn ncd_from_lengths(zx: usize, zy: usize, zxy: usize) -> Result<ProxyDistance> {
    let (lo, hi) = (zx.min(zy), zx.max(zy));
    if hi == 0 {
        return Err(Error::EmptyInputs);
    }
    Ok(ProxyDistance {
        value: Ratio::new(zxy.saturating_sub(lo) as u64, hi as u64),
        units: ProxyUnits::Dimensionless,
    })
}

/// Normalized compression distance `(Z(xy) - min(Z(x),Z(y))) / max(Z(x),Z(y))`,
/// with the concatenation order canonicalized so the value is symmetric.
pub fn ncd(x: &[u8], y: &[u8], c: &Compressor) -> Result<ProxyDistance> {
    if x.is_empty() && y.is_empty() {
        return Err(Error::EmptyInputs);
    }
    let (a, b) = canonical(x, y);
    let zx = compressed_len(x, c)?;
    let zy = compressed_len(y, c)?;
    let zxy = compressed_len(&[a, b].concat(), c)?;
    ncd_from_lengths(zx, zy, zxy)
}

/// A corpus item: relative path and contents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusItem {
    pub id: String,
    pub data: Vec<u8>,
}

/// Reads every regular file under `dir`; ids are relative paths with `/`
/// separators, sorted.
pub fn read_corpus(dir: &Path) -> Result<Vec<CorpusItem>> {
    let meta = std::fs::metadata(dir).map_err(|e| Error::io(dir, e))?;
    if !meta.is_dir() {
        return Err(Error::io(
            dir,
            std::io::Error::new(std::io::ErrorKind::InvalidInput, "not a directory"),
        ));
    }
    let mut items = Vec::new();
    for entry in walkdir::WalkDir::new(dir).sort_by_file_name() {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(dir).to_path_buf();
            Error::io(path, std::io::Error::other(e.to_string()))
        })?;
        if !entry.file_type().is_file() {
            continue;
        }
        let rel = entry.path().strip_prefix(dir).expect("walkdir stays under root");
        let id = rel
            .components()
            .map(|c| c.as_os_str().to_string_lossy().into_owned())
            .collect::<Vec<_>>()
            .join("/");
        let data = std::fs::read(entry.path()).map_err(|e| Error::io(entry.path(), e))?;
        items.push(CorpusItem { id, data });
    }
    if items.is_empty() {
        return Err(Error::EmptyCorpus(dir.to_path_buf()));
    }
    items.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(items)
}

/// How dimensionless NCD values are mapped to bits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BitScale {
    /// Multiply by the mean compressed length of the corpus, in bits.
    MeanCompressedBits,
    Factor(f64),
}

/// Raw NCD matrix plus the bit-scaled matrix used for cluster thresholds.
#[derive(Clone, Debug)]
pub struct NcdMatrices {
    pub ncd: DistanceMatrix<f64>,
    pub bits: DistanceMatrix<f64>,
    pub scale: f64,
}

pub fn ncd_matrix(items: &[CorpusItem], c: &Compressor, scale: BitScale) -> Result<NcdMatrices> {
    let lengths: Vec<usize> = items
        .par_iter()
        .map(|it| compressed_len(&it.data, c))
        .collect::<Result<_>>()?;
    let ids = items.iter().map(|it| it.id.clone()).collect();
    let ncd = DistanceMatrix::from_pairs(ids, |i, j| {
        let (a, b) = canonical(&items[i].data, &items[j].data);
        if a.is_empty() && b.is_empty() {
            return Err(Error::EmptyInputs);
        }
        let zab = compressed_len(&[a, b].concat(), c)?;
        Ok(Some(ncd_from_lengths(lengths[i], lengths[j], zab)?.to_f64()))
    })?;
    let factor = match scale {
        BitScale::Factor(f) => f,
        BitScale::MeanCompressedBits => {
            8.0 * lengths.iter().sum::<usize>() as f64 / lengths.len().max(1) as f64
        }
    };
    let bits = ncd.map(|v| v * factor)?;
    Ok(NcdMatrices {
        ncd,
        bits,
        scale: factor,
    })
}
