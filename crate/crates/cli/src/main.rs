//! `skewhad` command-line tool.
//!
//! Exit codes: 0 when every certificate passes, 2 when a certificate fails or
//! the generator search is exhausted, 1 for usage, I/O and parse errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use skewhad::autgroup::{subgroup_audit, AuditOptions};
use skewhad::field::FieldTables;
use skewhad::hadamard::{gate0_verify, normalize_core_tournament};
use skewhad::manifest::{build, gate0_log, parse_index_set, BuildConfig, Manifest};
use skewhad::rank::{hadamard_rank, reference_rank, tournament_rank_gf2};
use skewhad::shdf::find_valid_generator;
use skewhad::sketch::{byte_accounting, decode, encode, SketchConfig, SketchPacket};
use skewhad::{Error, PmMatrix};

const MANIFEST_FILE: &str = "MANIFEST";

#[derive(Parser)]
#[command(name = "skewhad", version, about = "Skew-Hadamard matrices from cyclotomic difference families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a generator, assemble the matrix, certify it and write the bundle.
    Build(BuildArgs),
    /// Re-check a certificate.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// p-rank of the matrix, or of its normalized core tournament.
    Rank {
        matrix: PathBuf,
        #[arg(long)]
        field: u32,
        #[arg(long)]
        tournament: bool,
        /// Manifest whose generator is reported alongside a reference mismatch.
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Verify the affine automorphism subgroup.
    Aut {
        matrix: PathBuf,
        /// Manifest recording the field the matrix was built over.
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Top-k sketch codec.
    #[command(subcommand)]
    Sketch(SketchCmd),
    /// Check the digests recorded in DIR/MANIFEST.
    Manifest { dir: PathBuf },
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long, required_unless_present = "from_manifest")]
    p: Option<u32>,
    #[arg(long, required_unless_present = "from_manifest")]
    e: Option<u32>,
    /// Number of cyclotomic classes.
    #[arg(long = "N", required_unless_present = "from_manifest")]
    n: Option<usize>,
    /// Class indices of the first block, e.g. `4-11`.
    #[arg(long, required_unless_present = "from_manifest")]
    i0: Option<String>,
    #[arg(long, required_unless_present = "from_manifest")]
    i1: Option<String>,
    /// Modulus coefficients, constant term first, e.g. `2,0,0,0,1`.
    #[arg(long)]
    poly: Option<String>,
    /// Primitive element (canonical encoding) to use instead of searching.
    #[arg(long)]
    gen: Option<u32>,
    #[arg(long)]
    out: PathBuf,
    /// Take the whole configuration from an existing manifest.
    #[arg(long, conflicts_with_all = ["p", "e", "n", "i0", "i1", "poly", "gen"])]
    from_manifest: Option<PathBuf>,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// HH^T = nI and H + H^T = 2I.
    Gate0 { matrix: PathBuf },
    /// Difference family condition for the configuration in a manifest.
    Shdf { manifest: PathBuf },
}

#[derive(Subcommand)]
enum SketchCmd {
    Encode {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        k: usize,
        /// Text file with one float per line.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    Decode {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Byte accounting and encode timing on a pseudo-random vector.
    Bench {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        iters: usize,
    },
}

/// Outcome of a command that ran to completion.
enum Verdict {
    Pass,
    CertificateFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::CertificateFailed) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err:#}");
            let certificate = matches!(
                err.downcast_ref::<Error>(),
                Some(Error::GeneratorSearchExhausted { .. } | Error::Gate0Failed | Error::AutomorphismRejected(_))
            );
            ExitCode::from(if certificate { 2 } else { 1 })
        }
    }
}

fn run(command: Command) -> anyhow::Result<Verdict> {
    match command {
        Command::Build(args) => cmd_build(args),
        Command::Verify(VerifyCmd::Gate0 { matrix }) => {
            let h = read_matrix(&matrix)?;
            let report = gate0_verify(&h);
            print!("{}", gate0_log(&report));
            Ok(verdict(report.pass()))
        }
        Command::Verify(VerifyCmd::Shdf { manifest }) => {
            let m = read_manifest(&manifest)?;
            let c = &m.config;
            let search = find_valid_generator(&c.field_config(), c.n_classes, &c.i0, &c.i1)?;
            let log = search.certificate.to_log();
            println!("SHDF {}", log.lines().last().unwrap_or_default());
            Ok(verdict(search.certificate.pass()))
        }
        Command::Rank {
            matrix,
            field,
            tournament,
            manifest,
        } => {
            let h = read_matrix(&matrix)?;
            let report = if tournament {
                if field != 2 {
                    bail!("the tournament rank is defined over GF(2) only");
                }
                tournament_rank_gf2(&normalize_core_tournament(&h)?.tournament)
            } else {
                hadamard_rank(&h, field)?
            };
            println!("{report}");
            if let Some(expected) = reference_rank(&report).filter(|&r| r != report.rank) {
                let generator = match manifest {
                    Some(path) => read_manifest(&path)?
                        .config
                        .generator
                        .map_or("auto".to_string(), |g| g.to_string()),
                    None => "unknown".to_string(),
                };
                println!("MISMATCH reference={expected} generator={generator}");
            }
            Ok(Verdict::Pass)
        }
        Command::Aut {
            matrix,
            manifest,
            exhaustive,
            samples,
            seed,
        } => {
            let h = read_matrix(&matrix)?;
            let config = read_manifest(&manifest)?.config;
            let tables = FieldTables::build(&config.field_config())?;
            let options = AuditOptions {
                samples,
                exhaustive,
                seed,
            };
            let report = subgroup_audit(&h, &tables, config.n_classes, &options)?;
            print!("{}", report.to_log());
            Ok(Verdict::Pass)
        }
        Command::Sketch(cmd) => cmd_sketch(cmd),
        Command::Manifest { dir } => {
            let m = read_manifest(&dir.join(MANIFEST_FILE))?;
            let mut ok = true;
            for (digest, path) in &m.digests {
                let matches = fs::read(dir.join(path))
                    .map(|bytes| skewhad::manifest::sha256_hex(&bytes) == *digest)
                    .unwrap_or(false);
                println!("{path}: {}", if matches { "OK" } else { "FAILED" });
                ok &= matches;
            }
            Ok(verdict(ok))
        }
    }
}

fn verdict(pass: bool) -> Verdict {
    if pass {
        Verdict::Pass
    } else {
        Verdict::CertificateFailed
    }
}

fn cmd_build(args: BuildArgs) -> anyhow::Result<Verdict> {
    let config = match &args.from_manifest {
        Some(path) => read_manifest(path)?.config,
        None => BuildConfig {
            p: args.p.context("--p is required")?,
            e: args.e.context("--e is required")?,
            n_classes: args.n.context("--N is required")?,
            i0: parse_index_set(args.i0.as_deref().unwrap_or_default()).context("--i0")?,
            i1: parse_index_set(args.i1.as_deref().unwrap_or_default()).context("--i1")?,
            modulus: args.poly.as_deref().map(parse_poly).transpose()?,
            generator: args.gen,
        },
    };
    let artifacts = build(&config)?;
    let files = artifacts.bundle_files();
    let manifest = Manifest::new(artifacts.resolved_config(&config), &files);

    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    for (name, bytes) in &files {
        let path = args.out.join(name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
    }
    fs::write(args.out.join(MANIFEST_FILE), manifest.to_text())?;

    let cert = &artifacts.search.certificate;
    println!(
        "generator={} tried={}",
        artifacts.search.tables.generator(),
        artifacts.search.trace.len()
    );
    println!("SHDF {} v={}", if cert.pass() { "PASS" } else { "FAIL" }, cert.v);
    println!("{}", gate0_log(&artifacts.gate0).lines().last().unwrap_or_default());
    println!("wrote {}", args.out.join(artifacts.matrix_file_name()).display());
    Ok(verdict(artifacts.pass()))
}

fn parse_poly(s: &str) -> anyhow::Result<Vec<u32>> {
    s.split(',')
        .enumerate()
        .map(|(i, c)| {
            c.trim()
                .parse()
                .with_context(|| format!("--poly coefficient {} ({c:?}) is not an integer", i + 1))
        })
        .collect()
}

fn cmd_sketch(cmd: SketchCmd) -> anyhow::Result<Verdict> {
    match cmd {
        SketchCmd::Encode {
            matrix,
            k,
            input,
            output,
        } => {
            let h = read_matrix(&matrix)?;
            let x = read_vector(&input)?;
            let packet = encode(&x, &h, &SketchConfig::new(h.n(), k)?)?;
            let bytes = packet.to_bytes();
            fs::write(&output, &bytes).with_context(|| format!("writing {}", output.display()))?;
            println!("packet bytes={} k={} n={} scale={}", bytes.len(), packet.k(), packet.n(), packet.scale());
        }
        SketchCmd::Decode {
            matrix,
            input,
            output,
        } => {
            let h = read_matrix(&matrix)?;
            let bytes = fs::read(&input).with_context(|| format!("reading {}", input.display()))?;
            let x = decode(&SketchPacket::from_bytes(&bytes)?, &h)?;
            let text: String = x.iter().map(|v| format!("{v}\n")).collect();
            fs::write(&output, text).with_context(|| format!("writing {}", output.display()))?;
        }
        SketchCmd::Bench { matrix, k, iters } => {
            let h = read_matrix(&matrix)?;
            let cfg = SketchConfig::new(h.n(), k)?;
            println!("{}", byte_accounting(&cfg));
            // Deterministic input: a fixed xorshift sequence in [-1, 1).
            let mut state = 0x9e37_79b9_7f4a_7c15u64;
            let x: Vec<f64> = (0..h.n())
                .map(|_| {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    (state >> 11) as f64 / (1u64 << 52) as f64 - 1.0
                })
                .collect();
            let start = Instant::now();
            for _ in 0..iters.max(1) {
                encode(&x, &h, &cfg)?;
            }
            let per = start.elapsed() / iters.max(1) as u32;
            println!("encode mean={per:?} iters={}", iters.max(1));
        }
    }
    Ok(Verdict::Pass)
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_matrix(path: &Path) -> anyhow::Result<PmMatrix> {
    PmMatrix::from_text(&read_text(path)?).with_context(|| path.display().to_string())
}

fn read_manifest(path: &Path) -> anyhow::Result<Manifest> {
    Manifest::from_text(&read_text(path)?).with_context(|| path.display().to_string())
}

/// One float per line; blank lines are not allowed.
fn read_vector(path: &Path) -> anyhow::Result<Vec<f64>> {
    let text = read_text(path)?;
    text.lines()
        .enumerate()
        .map(|(i, line)| {
            let trimmed = line.trim_start();
            let column = line.len() - trimmed.len() + 1;
            trimmed.trim_end().parse::<f64>().map_err(|_| {
                anyhow::anyhow!(
                    "{}: line {}, column {column}: expected a number, found {line:?}",
                    path.display(),
                    i + 1
                )
            })
        })
        .collect()
}
