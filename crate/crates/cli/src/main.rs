use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use etalift::certificate::Certificate;
use etalift::Error;

mod commands;

#[derive(Parser, Debug)]
#[command(name = "etalift", version, about = "Exact certificates for characteristic-free Artin–Schreier theory")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Omit the wall-clock field, making output byte-stable.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// η, the b_i, y and the unit x for Z[ρ].
    EtaData {
        #[arg(long)]
        p: u32,
    },
    /// Parse expressions and print their normal forms.
    #[command(subcommand)]
    Ring(RingCmd),
    /// The eighteen η-calculus identities, symbolically and on finite specializations.
    Identities {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Additional ring to test on.
        #[arg(long)]
        ctx: Option<PathBuf>,
        /// Only these identities (1-based, comma separated).
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u32>>,
        #[arg(long)]
        no_symbolic: bool,
    },
    /// The polynomial g with Z^p + g(Z) − u.
    Gpoly {
        #[arg(long)]
        p: u32,
    },
    #[command(subcommand)]
    Galois(GaloisCmd),
    #[command(subcommand)]
    Descent(DescentCmd),
    #[command(subcommand)]
    Qweyl(QweylCmd),
}

#[derive(Subcommand, Debug)]
pub enum RingCmd {
    Eval {
        /// Ring descriptor (JSON); defaults to Z[ρ] for --p.
        #[arg(long)]
        ctx: Option<PathBuf>,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long = "expr", required = true)]
        exprs: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum GaloisCmd {
    /// Build S = R[θ]/(θ^p + g(θ) − a) and verify it.
    Build {
        #[arg(long)]
        ctx: PathBuf,
        #[arg(long)]
        a: String,
    },
    /// Lift an extension of the target ring along the canonical map from the source ring.
    Lift {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        /// Parameter in the target ring.
        #[arg(long)]
        a: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum DescentCmd {
    /// The generic descent extension and its finite specializations.
    Build {
        #[arg(long)]
        p: u32,
        /// Build the symbolic extension (default for p ≤ 3).
        #[arg(long)]
        symbolic: Option<bool>,
        /// JSON list of {"ctx": descriptor, "values": [expr, ...]}.
        #[arg(long)]
        specialize: Option<PathBuf>,
    },
    /// Lift T^p − T − a from a ρ-free ring R'' to R' through the descent.
    Lift {
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long, default_value = "1")]
        a: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum QweylCmd {
    /// Normal form of a word in x, y.
    Nf {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        word: String,
        /// Rewriting order for the cross-check: leftmost, rightmost, random[:seed].
        #[arg(long, default_value = "leftmost")]
        strategy: String,
    },
    /// Centrality of x^p, y^p and independence of the monomial basis.
    Center {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Determinant and invertibility locus of ψ(a ⊗ b)(z) = azb.
    Azumaya {
        #[arg(long)]
        p: u32,
        #[arg(long, value_enum, default_value_t = Mode::Eval)]
        mode: Mode,
        /// JSON list of [s, t] expression pairs in the evaluation field.
        #[arg(long)]
        points: Option<PathBuf>,
        /// Least field size to use for evaluation.
        #[arg(long, default_value_t = 7)]
        q: u64,
    },
    /// Lift a differential crossed product [c, b] over R/I to R.
    Lift {
        #[arg(long)]
        ctx: PathBuf,
        /// Ideal descriptor {"m", "eta_power", "rho"}.
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        c: String,
        #[arg(long)]
        b: String,
    },
    /// [c, b] is Azumaya over F_p for c = b = 0, random pairs, and over F_p[ε]/(ε²).
    Dcp {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Sym,
    Eval,
}

fn usage_error(e: &Error) -> bool {
    matches!(e, Error::Argument(_) | Error::Parse(_) | Error::Config(_) | Error::Json(_))
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("ETALIFT_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("ETALIFT_THREADS must be a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err("ETALIFT_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let argv: Vec<String> = std::env::args().skip(1).filter(|a| a != "--no-timing").collect();
    let start = Instant::now();
    let mut cert = match commands::run(&cli.cmd, argv.clone()) {
        Ok(c) => c,
        Err(e) if usage_error(&e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {e}");
            let mut c = Certificate::new(argv, None, None, &serde_json::Value::Null).expect("null serializes");
            c.check_with("completed", false, Some(e.to_string()));
            c
        }
    };
    if !cli.no_timing {
        cert.set_timing(start.elapsed());
    }
    let body = match cli.format {
        Format::Json => match cert.to_json() {
            Ok(s) => s + "\n",
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        },
        Format::Text => cert.to_text(),
    };
    // a closed pipe (`| head`) is not an error worth a panic
    let _ = std::io::stdout().lock().write_all(body.as_bytes());
    if cert.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
