use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use dp2cert::groups::cache;
use dp2cert::local_search::{residue_profile, TupleClass};
use dp2cert::report::{self, RunConfig, DEFAULT_PRECISION};
use dp2cert::surface::local_form;

#[derive(Parser)]
#[command(name = "dp2cert", version, about = "Exact certificates for a pointless degree-2 del Pezzo surface")]
struct Cli {
    /// Bits of 2-adic precision.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    /// Comma-separated primes for the smoothness check.
    #[arg(long, global = true, value_delimiter = ',', num_args = 0..)]
    primes: Option<Vec<u64>>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Group cache directory (default: $DP2CERT_CACHE_DIR, then the user cache dir).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify one claim.
    Verify { claim_id: String },
    /// Verify every claim.
    VerifyAll,
    /// Manage the Sp6(F2) enumeration cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
    /// Residue statistics.
    Profile {
        #[command(subcommand)]
        what: ProfileKind,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    Build,
    Clear,
}

#[derive(Subcommand)]
enum ProfileKind {
    /// Values of f mod 2^bits over a class of tuples.
    ModResidues {
        #[arg(long, default_value_t = 3)]
        bits: u32,
        /// all, primitive, all-odd, w-odd-one-odd, w-even-one-even or odd-count.
        #[arg(long, default_value = "all-odd")]
        class: String,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| e.to_string())?;
            }
            std::fs::write(path, format!("{text}\n")).map_err(|e| format!("{}: {e}", path.display()))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    let config = RunConfig {
        claims: Vec::new(),
        precision: cli.precision,
        primes: cli.primes.clone().unwrap_or_else(|| report::DEFAULT_PRIMES.to_vec()),
        cache_dir: cli.cache_dir.clone(),
        jobs: cli.jobs,
        out: cli.out.clone(),
    };
    match cli.command {
        Command::Verify { claim_id } => {
            let cert = report::run_claim(&claim_id, &config).map_err(|e| e.to_string())?;
            emit(&serde_json::to_string_pretty(&cert).expect("serializable"), cli.out.as_ref())?;
            eprintln!("{}: {:?}", cert.claim_id, cert.verdict);
            Ok(report::exit_code_for([cert.verdict]) as u8)
        }
        Command::VerifyAll => {
            let r = report::run_all(&config).map_err(|e| e.to_string())?;
            emit(&r.to_json(), cli.out.as_ref())?;
            for c in &r.certificates {
                eprintln!("{:<26} {:?}", c.claim_id, c.verdict);
            }
            Ok(r.exit_code() as u8)
        }
        Command::Cache { action } => {
            config.validate().map_err(|e| e.to_string())?;
            let dir = config.resolved_cache_dir();
            match action {
                CacheAction::Build => {
                    let pool = rayon::ThreadPoolBuilder::new()
                        .num_threads(config.jobs.unwrap_or(0))
                        .build()
                        .map_err(|e| e.to_string())?;
                    let (g, status) = pool.install(|| cache::load_or_build(&dir)).map_err(|e| e.to_string())?;
                    let doc = json!({
                        "path": cache::cache_file(&dir).display().to_string(),
                        "order": g.order(),
                        "status": format!("{status:?}").to_lowercase(),
                    });
                    emit(&serde_json::to_string_pretty(&doc).expect("serializable"), cli.out.as_ref())?;
                }
                CacheAction::Clear => {
                    let removed = cache::clear_cache(&dir).map_err(|e| e.to_string())?;
                    eprintln!("{} {}", if removed { "removed" } else { "no cache at" }, cache::cache_file(&dir).display());
                }
            }
            Ok(0)
        }
        Command::Profile { what: ProfileKind::ModResidues { bits, class } } => {
            let cls = TupleClass::from_name(&class).ok_or_else(|| format!("unknown class `{class}`"))?;
            let f = local_form();
            let p = residue_profile(&f, bits, &cls).map_err(|e| e.to_string())?;
            let doc = json!({
                "form": f.to_string(),
                "modulus": 1u64 << bits,
                "class": cls.name(),
                "profile": p,
            });
            emit(&serde_json::to_string_pretty(&doc).expect("serializable"), cli.out.as_ref())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
