//! Audit pipeline front end.
//!
//! Subcommands: `audit` decomposes a masked dataset against its original
//! and reports risk and information-loss measures; `dominance` compares
//! two maskings across a grid of aversion levels; `anonymize` applies the
//! bundled reference maskings; `demo` walks through the built-in sample.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 infeasible
//! operation (valid inputs that cannot be combined, e.g. comparing
//! datasets of different sizes).

mod output;
mod parse;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use permaudit::{
    add_noise, apply_permutations, block_permute, check_comparable, dominance_report, local_noise,
    parse_permutation_file, reverse_map, sample_bounded_permutation, samples, AuditConfig,
    AuditReport, BlockSpec, Dataset, Error as CoreError, MeasureKind, NoiseSpec, PairedDatasets,
    Permutation,
};

use output::{export_curves, write_atomic, Manifest, ManifestPermutation, RankNoiseSummary};
use parse::MethodSpecFile;

#[derive(Parser)]
#[command(
    name = "permaudit",
    version,
    about = "Permutation-based disclosure-risk and information-loss auditing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Audit a masked dataset against its original.
    Audit(AuditArgs),
    /// Compare two maskings for risk and information dominance.
    Dominance(DominanceArgs),
    /// Apply a reference masking method.
    Anonymize(AnonymizeArgs),
    /// Walk through the bundled sample pair.
    Demo,
}

#[derive(Args)]
struct MeasureArgs {
    /// Risk aversion grid: a value, a comma list, or min:max:step (all <= 1).
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Information-loss aversion grid (all >= 1).
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    /// Outer exponent over attributes for dataset risk (<= 1 or -inf).
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Outer exponent over pairs for dataset information loss (>= 1 or +inf).
    #[arg(long, allow_hyphen_values = true)]
    pi: Option<String>,
    /// Substitute for zero displacements in risk measures.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Scale all measures into [0, 1] by dividing by n - 1.
    #[arg(long)]
    normalize: bool,
    /// Ranking direction: descending (rank 1 = largest) or ascending.
    #[arg(long)]
    direction: Option<String>,
    /// Do not append the analytic -inf/+inf grid endpoints.
    #[arg(long)]
    no_limits: bool,
}

impl MeasureArgs {
    fn to_config(&self) -> Result<AuditConfig, Failure> {
        let mut config = AuditConfig::default();
        if let Some(spec) = &self.alpha {
            config.alpha_grid = parse::parse_grid(spec, MeasureKind::Risk, self.no_limits)?;
        } else if self.no_limits {
            config.alpha_grid =
                parse::parse_grid("-8,-4,-2,-1,-0.5,0,0.5,1", MeasureKind::Risk, true)?;
        }
        if let Some(spec) = &self.theta {
            config.theta_grid = parse::parse_grid(spec, MeasureKind::InfoLoss, self.no_limits)?;
        } else if self.no_limits {
            config.theta_grid = parse::parse_grid("1,1.5,2,3,4,8", MeasureKind::InfoLoss, true)?;
        }
        if let Some(spec) = &self.beta {
            config.beta = parse::parse_single_exponent("--beta", spec)?;
        }
        if let Some(spec) = &self.pi {
            config.pi = parse::parse_single_exponent("--pi", spec)?;
        }
        if let Some(epsilon) = self.epsilon {
            config.epsilon = epsilon;
        }
        config.normalize = self.normalize;
        if let Some(spec) = &self.direction {
            config.direction = parse::parse_direction(spec)?;
        }
        config
            .validate()
            .map_err(|e| Failure::usage(e.to_string()))?;
        Ok(config)
    }
}

#[derive(Args)]
struct AuditArgs {
    /// Original dataset file.
    #[arg(long)]
    original: PathBuf,
    /// Masked dataset file.
    #[arg(long)]
    masked: PathBuf,
    #[command(flatten)]
    measures: MeasureArgs,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Export the reverse-mapped dataset Z.
    #[arg(long)]
    export_z: Option<PathBuf>,
    /// Export the residual noise E.
    #[arg(long)]
    export_e: Option<PathBuf>,
    /// Export the extracted permutations (one line per attribute).
    #[arg(long)]
    export_perms: Option<PathBuf>,
    /// Export plot-ready curve files into this directory.
    #[arg(long)]
    export_curves: Option<PathBuf>,
}

#[derive(Args)]
struct DominanceArgs {
    /// Original dataset of masking A.
    #[arg(long)]
    original_a: PathBuf,
    /// Masked dataset of masking A.
    #[arg(long)]
    masked_a: PathBuf,
    /// Original dataset of masking B.
    #[arg(long)]
    original_b: PathBuf,
    /// Masked dataset of masking B.
    #[arg(long)]
    masked_b: PathBuf,
    #[command(flatten)]
    measures: MeasureArgs,
    /// Write the JSON verdict report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnonymizeArgs {
    /// noise | local-noise | block-permute | apply-perms | bounded-perm
    #[arg(long)]
    method: String,
    /// Input dataset file.
    #[arg(long)]
    original: PathBuf,
    /// Output dataset file; a `.manifest.json` sidecar is written next to it.
    #[arg(long)]
    out: PathBuf,
    /// Seed for all randomness (default 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Standard deviation(s): one value or one per attribute.
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<String>,
    /// 1-based record indices for local-noise, e.g. 2,3.
    #[arg(long)]
    rows: Option<String>,
    /// Attribute blocks for block-permute, e.g. "a,b;c".
    #[arg(long)]
    blocks: Option<String>,
    /// Permutation file for apply-perms (lines "name: i1 i2 ... in").
    #[arg(long)]
    perm_file: Option<PathBuf>,
    /// Displacement bound for bounded-perm.
    #[arg(long)]
    dmax: Option<usize>,
    /// Key-value configuration file (TOML); flags override it.
    #[arg(long)]
    spec: Option<PathBuf>,
}

/// A failed run: message plus process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: String) -> Self {
        Self { code: 1, message }
    }

    pub fn data(message: String) -> Self {
        Self { code: 2, message }
    }

    pub fn infeasible(message: String) -> Self {
        Self { code: 3, message }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(failure) = run(cli) {
        eprintln!("error: {}", failure.message);
        std::process::exit(failure.code);
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Audit(args) => run_audit(args),
        Command::Dominance(args) => run_dominance(args),
        Command::Anonymize(args) => run_anonymize(args),
        Command::Demo => {
            let text = samples::demo_walkthrough().map_err(|e| Failure::data(e.to_string()))?;
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<Dataset, Failure> {
    Dataset::from_path(path).map_err(|e| Failure::data(e.to_string()))
}

fn emit_report(report: &AuditReport, out: Option<&Path>) -> Result<(), Failure> {
    let json = report.to_json_string();
    match out {
        Some(path) => write_atomic(path, json.as_bytes()),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

fn run_audit(args: AuditArgs) -> Result<(), Failure> {
    let config = args.measures.to_config()?;
    let original = load(&args.original)?;
    let masked = load(&args.masked)?;
    let pair = PairedDatasets::new(original, masked).map_err(|e| Failure::data(e.to_string()))?;

    let report = permaudit::audit(&pair, &config).map_err(|e| Failure::data(e.to_string()))?;
    emit_report(&report, args.out.as_deref())?;

    if args.export_z.is_some() || args.export_e.is_some() || args.export_perms.is_some() {
        let dec = reverse_map(&pair, config.direction);
        if let Some(path) = &args.export_z {
            write_atomic(path, dec.z().to_csv_string().as_bytes())?;
        }
        if let Some(path) = &args.export_e {
            write_atomic(path, dec.residuals_to_csv().as_bytes())?;
        }
        if let Some(path) = &args.export_perms {
            write_atomic(path, dec.permutations_to_text().as_bytes())?;
        }
    }
    if let Some(dir) = &args.export_curves {
        export_curves(dir, &report)?;
    }
    Ok(())
}

fn run_dominance(args: DominanceArgs) -> Result<(), Failure> {
    let config = args.measures.to_config()?;
    let pair_a = PairedDatasets::new(load(&args.original_a)?, load(&args.masked_a)?)
        .map_err(|e| Failure::data(format!("masking A: {e}")))?;
    let pair_b = PairedDatasets::new(load(&args.original_b)?, load(&args.masked_b)?)
        .map_err(|e| Failure::data(format!("masking B: {e}")))?;
    check_comparable(&pair_a, &pair_b)
        .map_err(|e| Failure::infeasible(format!("maskings are not comparable: {e}")))?;

    let report =
        dominance_report(&pair_a, &pair_b, &config).map_err(|e| Failure::data(e.to_string()))?;
    emit_report(&report, args.out.as_deref())
}

fn run_anonymize(args: AnonymizeArgs) -> Result<(), Failure> {
    let original = load(&args.original)?;
    let spec = match &args.spec {
        Some(path) => MethodSpecFile::load(path)?,
        None => MethodSpecFile::default(),
    };
    let seed = args.seed.or(spec.seed).unwrap_or(0);

    let sigmas = match &args.sigma {
        Some(flag) => Some(parse::parse_sigma(flag, original.p())?),
        None => spec.sigmas_for(&original)?,
    };
    let noise = match &sigmas {
        Some(values) => Some(
            NoiseSpec::gaussian(values.clone(), seed).map_err(|e| Failure::usage(e.to_string()))?,
        ),
        None => None,
    };

    let mut manifest = Manifest::new(&args.method, seed);
    manifest.sigma = sigmas;

    let masked = match args.method.as_str() {
        "noise" => {
            let noise = noise
                .ok_or_else(|| Failure::usage("method 'noise' needs --sigma or a spec file".into()))?;
            add_noise(&original, &noise).map_err(anonymize_failure)?
        }
        "local-noise" => {
            let noise = noise.ok_or_else(|| {
                Failure::usage("method 'local-noise' needs --sigma or a spec file".into())
            })?;
            let rows = match (&args.rows, &spec.rows) {
                (Some(flag), _) => parse::parse_rows(flag)?,
                (None, Some(file_rows)) => {
                    if file_rows.contains(&0) {
                        return Err(Failure::usage("rows: record indices are 1-based".into()));
                    }
                    file_rows.iter().map(|r| r - 1).collect()
                }
                (None, None) => {
                    return Err(Failure::usage("method 'local-noise' needs --rows".into()))
                }
            };
            manifest.rows = Some(rows.iter().map(|r| r + 1).collect());
            local_noise(&original, &rows, &noise).map_err(anonymize_failure)?
        }
        "block-permute" => {
            let blocks = match (&args.blocks, spec.blocks) {
                (Some(flag), _) => parse::parse_blocks(flag)?,
                (None, Some(file_blocks)) => file_blocks,
                (None, None) => {
                    return Err(Failure::usage("method 'block-permute' needs --blocks".into()))
                }
            };
            manifest.blocks = Some(blocks.clone());
            block_permute(&original, &BlockSpec::new(blocks, seed)).map_err(anonymize_failure)?
        }
        "apply-perms" => {
            let path = args.perm_file.as_ref().ok_or_else(|| {
                Failure::usage("method 'apply-perms' needs --perm-file".into())
            })?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::data(format!("cannot read '{}': {e}", path.display())))?;
            let named = parse_permutation_file(&text).map_err(|e| Failure::data(e.to_string()))?;
            let perms = align_permutations(&original, &named)?;
            manifest.perm_file = Some(path.display().to_string());
            manifest.permutations = Some(
                original
                    .column_names()
                    .iter()
                    .zip(&perms)
                    .map(|(name, perm)| ManifestPermutation {
                        attribute: name.to_string(),
                        image: perm.image_one_based(),
                    })
                    .collect(),
            );
            let (masked, fallbacks) =
                apply_permutations(&original, &perms, noise.as_ref()).map_err(anonymize_failure)?;
            manifest.rank_noise = Some(RankNoiseSummary {
                tied_cells: fallbacks.tied_cells,
                exhausted_cells: fallbacks.exhausted_cells,
            });
            masked
        }
        "bounded-perm" => {
            let dmax = args
                .dmax
                .or(spec.dmax)
                .ok_or_else(|| Failure::usage("method 'bounded-perm' needs --dmax".into()))?;
            manifest.dmax = Some(dmax);
            let perms: Vec<Permutation> = (0..original.p())
                .map(|j| {
                    let column_seed = seed ^ (j as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
                    sample_bounded_permutation(original.n(), dmax, column_seed)
                })
                .collect::<Result<_, _>>()
                .map_err(anonymize_failure)?;
            manifest.permutations = Some(
                original
                    .column_names()
                    .iter()
                    .zip(&perms)
                    .map(|(name, perm)| ManifestPermutation {
                        attribute: name.to_string(),
                        image: perm.image_one_based(),
                    })
                    .collect(),
            );
            let (masked, fallbacks) =
                apply_permutations(&original, &perms, noise.as_ref()).map_err(anonymize_failure)?;
            manifest.rank_noise = Some(RankNoiseSummary {
                tied_cells: fallbacks.tied_cells,
                exhausted_cells: fallbacks.exhausted_cells,
            });
            masked
        }
        other => {
            return Err(Failure::usage(format!(
                "unknown method '{other}' (expected noise, local-noise, block-permute, apply-perms or bounded-perm)"
            )))
        }
    };

    write_atomic(&args.out, masked.to_csv_string().as_bytes())?;
    manifest.write(&args.out)
}

/// Match the permutation file's attribute names against the dataset,
/// in column order.
fn align_permutations(
    dataset: &Dataset,
    named: &[(String, Permutation)],
) -> Result<Vec<Permutation>, Failure> {
    let mut perms = Vec::with_capacity(dataset.p());
    for column in dataset.column_names() {
        let perm = named
            .iter()
            .find(|(name, _)| name == column)
            .map(|(_, p)| p.clone())
            .ok_or_else(|| {
                Failure::infeasible(format!(
                    "permutation file has no line for attribute '{column}'"
                ))
            })?;
        perms.push(perm);
    }
    for (name, _) in named {
        if dataset.column(name).is_none() {
            return Err(Failure::infeasible(format!(
                "permutation file names unknown attribute '{name}'"
            )));
        }
    }
    Ok(perms)
}

/// Valid config that cannot be applied to this particular dataset is an
/// infeasible operation; malformed settings are usage errors.
fn anonymize_failure(e: CoreError) -> Failure {
    match e {
        CoreError::BadSigma { .. } | CoreError::BadEpsilon(_) => Failure::usage(e.to_string()),
        _ => Failure::infeasible(e.to_string()),
    }
}
