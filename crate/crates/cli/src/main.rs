//! `infodist`: verification suites, distance matrices, cluster mining,
//! daisies, referential registries, core certificates and triple reports.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use infodist::cluster::{full_model_matrix, mine_clusters, ClusterRecord};
use infodist::daisy::{
    certify_core, daisy_cluster_check, daisy_members, decode_core, decode_ordinal, multiplicity_check,
    parse_stream, referential_filter, DaisyParams, RegistryFile,
};
use infodist::ncd::{ncd_matrix, read_corpus, BitScale, Compressor};
use infodist::pipeline::{run_pipeline, PipelineConfig};
use infodist::triple::{clone_cluster_check, triple_report};
use infodist::verify::{registry_suite, run_verify, Suite, VerifyConfig, DEFAULT_SEED};
use infodist::{ComplexityModel, DescriptionSystem, SetModel, SetString, Universe};

#[derive(Parser)]
#[command(name = "infodist", version, about = "Information-distance clusters in exact finite models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the seeded verification suites.
    Verify(VerifyArgs),
    /// Write the pairwise distance matrix as CSV.
    Matrix(MatrixArgs),
    /// Mine clusters; with the ncd backend, run the full corpus pipeline.
    Clusters(ClustersArgs),
    /// Enumerate a daisy and check its diameter.
    Daisy(DaisyArgs),
    /// Filter a cluster stream into a referential registry.
    Referential(ReferentialArgs),
    /// Certify a core for a cluster of the stream.
    Certify(CertifyArgs),
    /// Profile, triple information and common core of three sets.
    Triple(TripleArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    Set,
    Table,
    Ncd,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum, default_value = "set")]
    backend: Backend,
    /// Universe size for the set backend.
    #[arg(long, default_value_t = 4)]
    universe: u32,
    /// Description system JSON for the table backend.
    #[arg(long)]
    model: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suites to run (repeatable); all by default.
    #[arg(long = "suite")]
    suites: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Largest probability space for the claim search.
    #[arg(long, default_value_t = 10)]
    exhaustive_points: usize,
    /// Registry dump whose intersection invariant is re-checked.
    #[arg(long)]
    registry: Option<PathBuf>,
    /// Directory for verify.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MatrixArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Corpus directory for the ncd backend.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value = "builtin")]
    compressor: String,
    /// Directory for matrix.csv; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClustersArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value = "builtin")]
    compressor: String,
    /// Diameter threshold; for ncd, in scaled bits (automatic if absent).
    #[arg(long)]
    m: Option<f64>,
    #[arg(long, default_value_t = 0)]
    l: u32,
    /// Factor mapping NCD to bits; mean compressed bits if absent.
    #[arg(long)]
    bit_scale: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DaisyArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    core: String,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    d: u32,
    /// Triangle slack for models that do not declare one.
    #[arg(long)]
    slack: Option<u32>,
}

#[derive(Args)]
struct RegistryArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// JSON-lines cluster stream.
    #[arg(long)]
    stream: PathBuf,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    d: u32,
    #[arg(long)]
    dprime: u32,
}

#[derive(Args)]
struct ReferentialArgs {
    #[command(flatten)]
    registry: RegistryArgs,
    /// Directory for registry.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    registry: RegistryArgs,
    /// Zero-based index of the target cluster in the stream.
    #[arg(long, default_value_t = 0)]
    target: usize,
    /// Directory for certificate.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TripleArgs {
    #[arg(long)]
    universe: u32,
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
    #[arg(long)]
    z: String,
    /// Also measure the δ-clone set as a cluster.
    #[arg(long)]
    delta: Option<u32>,
}

enum Model {
    Set(SetModel),
    Table(DescriptionSystem),
}

impl Model {
    fn load(args: &ModelArgs) -> Result<Model> {
        match args.backend {
            Backend::Set => Ok(Model::Set(SetModel::new(Universe::new(args.universe)?)?)),
            Backend::Table => {
                let path = args.model.as_ref().context("--model is required for the table backend")?;
                Ok(Model::Table(DescriptionSystem::load(path)?))
            }
            Backend::Ncd => bail!("the ncd backend has no exact complexity model"),
        }
    }

    fn get(&self) -> &dyn ComplexityModel {
        match self {
            Model::Set(m) => m,
            Model::Table(t) => t,
        }
    }
}

fn write_or_print(out: Option<&Path>, name: &str, contents: &str) -> Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join(name);
            fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        }
        None => print!("{contents}"),
    }
    Ok(())
}

fn pretty(v: &impl serde::Serialize) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn compressor(spec: &str) -> Result<Compressor> {
    Ok(Compressor::parse(spec)?)
}

/// `Ok(true)` when everything checked passed.
fn verify(args: VerifyArgs) -> Result<bool> {
    let suites = if args.suites.is_empty() && args.registry.is_some() {
        Vec::new()
    } else if args.suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        args.suites.iter().map(|s| s.parse()).collect::<infodist::Result<_>>()?
    };
    let config = VerifyConfig {
        seed: args.seed,
        suites,
        exhaustive_points: args.exhaustive_points,
        ..VerifyConfig::default()
    };
    let mut report = run_verify(&config)?;
    if let Some(path) = &args.registry {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let file: RegistryFile = serde_json::from_str(&text)?;
        let suite = registry_suite(&file)?;
        report.pass &= suite.pass;
        report.suites.push(suite);
    }
    write_or_print(args.out.as_deref(), "verify.json", &pretty(&report)?)?;
    Ok(report.pass)
}

fn matrix(args: MatrixArgs) -> Result<bool> {
    let csv = if args.model.backend == Backend::Ncd {
        let input = args.input.context("--input is required for the ncd backend")?;
        let items = read_corpus(&input)?;
        ncd_matrix(&items, &compressor(&args.compressor)?, BitScale::Factor(1.0))?
            .ncd
            .to_csv_string()?
    } else {
        let model = Model::load(&args.model)?;
        full_model_matrix(model.get())?.to_csv_string()?
    };
    write_or_print(args.out.as_deref(), "matrix.csv", &csv)?;
    Ok(true)
}

fn clusters(args: ClustersArgs) -> Result<bool> {
    if args.model.backend == Backend::Ncd {
        let config = PipelineConfig {
            input: args.input.context("--input is required for the ncd backend")?,
            out: args.out.context("--out is required for the ncd backend")?,
            compressor: compressor(&args.compressor)?,
            scale: args.bit_scale.map_or(BitScale::MeanCompressedBits, BitScale::Factor),
            m: args.m,
            l: args.l,
        };
        let out = run_pipeline(&config)?;
        println!(
            "{} items, threshold {}, {} clusters",
            out.ids.len(),
            out.threshold,
            out.clusters.len()
        );
        return Ok(true);
    }
    let model = Model::load(&args.model)?;
    let m = args.m.context("--m is required for exact backends")?;
    if m < 0.0 || m.fract() != 0.0 {
        bail!("--m must be a nonnegative integer for exact backends");
    }
    let matrix = full_model_matrix(model.get())?;
    let found = mine_clusters(&matrix, m as u32, args.l)?;
    let records: Vec<ClusterRecord<u32>> = found
        .iter()
        .map(|c| ClusterRecord::new(c, &matrix, m as u32, args.l))
        .collect();
    write_or_print(args.out.as_deref(), "clusters.json", &pretty(&records)?)?;
    Ok(true)
}

fn daisy(args: DaisyArgs) -> Result<bool> {
    let model = Model::load(&args.model)?;
    let model = model.get();
    let core = model.resolve(&args.core)?;
    let params = DaisyParams { core, m: args.m, d: args.d };
    let members = daisy_members(&params, model)?;
    let check = daisy_cluster_check(&params, model, args.slack)?;
    let out = json!({
        "core": args.core,
        "members": members.iter().map(|&x| model.label(x)).collect::<Vec<_>>(),
        "check": check,
    });
    print!("{}", pretty(&out)?);
    Ok(check.pass)
}

fn load_stream(args: &RegistryArgs, model: &dyn ComplexityModel) -> Result<Vec<Vec<usize>>> {
    let text = fs::read_to_string(&args.stream).with_context(|| format!("reading {}", args.stream.display()))?;
    Ok(parse_stream(&text, |s| model.index_of(s))?)
}

fn referential(args: ReferentialArgs) -> Result<bool> {
    let r = &args.registry;
    let model = Model::load(&r.model)?;
    let model = model.get();
    let stream = load_stream(r, model)?;
    let matrix = full_model_matrix(model)?;
    let registry = referential_filter(&stream, r.m, r.d, r.dprime, &matrix)?;
    let file = registry.to_file(matrix.ids());
    write_or_print(args.out.as_deref(), "registry.json", &pretty(&file)?)?;
    let multiplicity = if r.dprime > 2 * r.d + 1 {
        Some(multiplicity_check(&registry, model)?)
    } else {
        None
    };
    eprintln!(
        "kept {} of {} clusters; dropped {}",
        registry.kept.len(),
        stream.len(),
        registry.dropped.len()
    );
    if let Some(report) = &multiplicity {
        eprintln!("multiplicity: {}", serde_json::to_string(report)?);
    }
    Ok(multiplicity.is_none_or(|m| m.pass))
}

fn certify(args: CertifyArgs) -> Result<bool> {
    let r = &args.registry;
    let model = Model::load(&r.model)?;
    let model = model.get();
    let stream = load_stream(r, model)?;
    let target = stream
        .get(args.target)
        .with_context(|| format!("stream has {} clusters", stream.len()))?;
    let matrix = full_model_matrix(model)?;
    let registry = referential_filter(&stream, r.m, r.d, r.dprime, &matrix)?;
    let cert = certify_core(target, &registry, model, &matrix)?;
    let mut expected = target.clone();
    expected.sort_unstable();
    expected.dedup();
    let decoded = decode_core(&cert, &registry, model)? == expected;
    let backward = cert
        .records
        .iter()
        .map(|rec| decode_ordinal(rec.member, &rec.code, &registry, model))
        .collect::<infodist::Result<Vec<_>>>()?
        .iter()
        .all(|&o| o == cert.ordinal);
    let records: Vec<Value> = cert
        .records
        .iter()
        .map(|rec| {
            let mut v = serde_json::to_value(rec).expect("records serialize");
            v["member"] = json!(model.label(rec.member));
            v
        })
        .collect();
    let out = json!({
        "ordinal": cert.ordinal,
        "shared": cert.shared,
        "threshold": cert.threshold,
        "budget": cert.budget,
        "records": records,
        "decoded": decoded,
        "backward": backward,
        "within_budget": cert.within_budget(),
    });
    write_or_print(args.out.as_deref(), "certificate.json", &pretty(&out)?)?;
    Ok(decoded && backward && cert.within_budget())
}

fn triple(args: TripleArgs) -> Result<bool> {
    let u = Universe::new(args.universe)?;
    let parse = |s: &str| SetString::parse(u, s);
    let (x, y, z) = (parse(&args.x)?, parse(&args.y)?, parse(&args.z)?);
    let report = triple_report(&x, &y, &z)?;
    let mut out = serde_json::to_value(report)?;
    let mut pass = true;
    if let Some(delta) = args.delta {
        let check = clone_cluster_check(&x, &y, &z, delta)?;
        pass = check.pass;
        out["clones"] = serde_json::to_value(check)?;
    }
    print!("{}", pretty(&out)?);
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Matrix(a) => matrix(a),
        Command::Clusters(a) => clusters(a),
        Command::Daisy(a) => daisy(a),
        Command::Referential(a) => referential(a),
        Command::Certify(a) => certify(a),
        Command::Triple(a) => triple(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
