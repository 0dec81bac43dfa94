//! Command-line driver: instance loading, stratum enumeration reports,
//! HN-vector membership checks, the two-route equivalence verifier, and
//! polygon export.
//!
//! Exit codes: 0 success, 1 negative mathematical answer, 2 validation
//! failure, 3 instance limits exceeded, 4 I/O failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hnstrata::gen::random_instance;
use hnstrata::isocrystal::{HodgeData, InstanceFile, NewtonData, NewtonInput};
use hnstrata::polygon::{export_csv, export_svg, is_convex, polygon_of};
use hnstrata::rational::RatTuple;
use hnstrata::strata::{enumerate_gamma, hn_vector, lambda_fibers, stratum_rank, HNVector};
use hnstrata::witness::{check_hn_vector, verify_equivalence};

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_LIMITS: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(
    name = "hnstrata",
    about = "Stratification indices, HN-vectors and HN-polygons of flag varieties of isocrystals"
)]
struct Cli {
    /// Instance file (JSON with "newton" and "hodge")
    #[arg(long)]
    instance: Option<PathBuf>,

    /// Largest accepted dimension d
    #[arg(long, default_value_t = 12)]
    max_d: usize,

    /// Largest accepted number of simple summands l
    #[arg(long, default_value_t = 10)]
    max_l: usize,

    /// Override the instance size limits
    #[arg(long)]
    force: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the full index set and write the strata table
    Gamma {
        /// Directory for the JSON-lines strata table
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// List the HN-vectors with their fiber sizes
    Lambda,
    /// Decide whether a tuple is a realizable HN-vector
    Check(CheckArgs),
    /// Cross-check the enumeration against the witness criterion
    Verify(VerifyArgs),
    /// Export one CSV and one SVG polygon per stratum
    Polygons {
        /// Output directory
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct CheckArgs {
    /// Candidate vector, e.g. "3/2,3/2,1"
    #[arg(long)]
    lambda: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// Verify this many random instances instead of the given one
    #[arg(long)]
    random: Option<usize>,

    /// Seed for the random instances
    #[arg(long, default_value_t = 7)]
    seed: u64,

    /// Largest dimension of the random instances
    #[arg(long, default_value_t = 6)]
    max_d: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(&cli))
}

fn run(cli: &Cli) -> u8 {
    match &cli.command {
        Command::Gamma { out } => with_instance(cli, |n, h| cmd_gamma(n, h, out)),
        Command::Lambda => with_instance(cli, cmd_lambda),
        Command::Check(args) => with_instance(cli, |n, h| cmd_check(n, h, &args.lambda)),
        Command::Verify(args) => match args.random {
            Some(count) => cmd_verify_random(count, args.seed, args.max_d),
            None => with_instance(cli, cmd_verify_instance),
        },
        Command::Polygons { out } => with_instance(cli, |n, h| cmd_polygons(n, h, out)),
    }
}

fn with_instance(cli: &Cli, f: impl FnOnce(&NewtonData, &HodgeData) -> u8) -> u8 {
    let path = match &cli.instance {
        Some(p) => p,
        None => {
            eprintln!("error: --instance FILE is required for this command");
            return EXIT_VALIDATION;
        }
    };
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {}", path.display(), e);
            return EXIT_IO;
        }
    };
    let file: InstanceFile = match serde_json::from_str(&text) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: invalid instance file: {}", e);
            return EXIT_VALIDATION;
        }
    };
    let (n, h) = match file.build() {
        Ok(pair) => pair,
        Err(e) => {
            eprintln!("error: {}", e);
            return EXIT_VALIDATION;
        }
    };
    if !cli.force && (n.d() > cli.max_d || n.l() > cli.max_l) {
        eprintln!(
            "error: instance has d={} l={}, limits are d<={} l<={} (use --force to override)",
            n.d(),
            n.l(),
            cli.max_d,
            cli.max_l
        );
        return EXIT_LIMITS;
    }
    f(&n, &h)
}

fn describe_instance(n: &NewtonData, h: &HodgeData) -> String {
    let slopes: Vec<String> = n.simple_slopes().iter().map(|s| s.to_string()).collect();
    format!(
        "d={} l={} slopes=({}) mu={}",
        n.d(),
        n.l(),
        slopes.join(","),
        h.mu_tuple()
    )
}

fn cmd_gamma(n: &NewtonData, h: &HodgeData, out: &Path) -> u8 {
    let gamma = match enumerate_gamma(n, h) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {}", e);
            return EXIT_VALIDATION;
        }
    };
    let mut lines = String::new();
    for s in &gamma {
        lines.push_str(&serde_json::to_string(&s.to_record()).unwrap());
        lines.push('\n');
    }
    let path = out.join("strata.jsonl");
    if let Err(e) = fs::write(&path, lines) {
        eprintln!("error: cannot write {}: {}", path.display(), e);
        return EXIT_IO;
    }
    println!("{}", describe_instance(n, h));
    println!("|Gamma| = {}", gamma.len());
    for (idx, s) in gamma.iter().enumerate() {
        let v = hn_vector(s).unwrap();
        println!(
            "  [{}] {}  hn={}  rank={}",
            idx,
            s,
            v,
            stratum_rank(s)
        );
    }
    println!("strata table written to {}", path.display());
    EXIT_OK
}

fn cmd_lambda(n: &NewtonData, h: &HodgeData) -> u8 {
    let fibers = match lambda_fibers(n, h) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {}", e);
            return EXIT_VALIDATION;
        }
    };
    println!("{}", describe_instance(n, h));
    println!("|Lambda| = {}", fibers.len());
    let mut noninjective = false;
    for (v, fiber) in fibers.iter().rev() {
        let marker = if fiber.len() > 1 {
            noninjective = true;
            "  non-injective"
        } else {
            ""
        };
        println!("  {}  fiber size {}{}", v, fiber.len(), marker);
    }
    if noninjective {
        println!("the map from strata to HN-vectors is non-injective");
    }
    EXIT_OK
}

fn cmd_check(n: &NewtonData, h: &HodgeData, lambda_text: &str) -> u8 {
    let tuple: RatTuple = match lambda_text.parse() {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}", e);
            return EXIT_VALIDATION;
        }
    };
    let lambda = match HNVector::from_tuple(&tuple) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {}", e);
            return EXIT_VALIDATION;
        }
    };
    match check_hn_vector(&lambda, n, h) {
        Ok(Some(wit)) => {
            println!("{} is an HN-vector", lambda);
            println!("{}", wit);
            println!("{}", serde_json::to_string(&wit.to_record()).unwrap());
            EXIT_OK
        }
        Ok(None) => {
            println!("{} is not an HN-vector", lambda);
            EXIT_NEGATIVE
        }
        Err(e) => {
            eprintln!("error: {}", e);
            EXIT_VALIDATION
        }
    }
}

fn cmd_verify_instance(n: &NewtonData, h: &HodgeData) -> u8 {
    println!("{}", describe_instance(n, h));
    match verify_equivalence(n, h) {
        Ok(report) => {
            println!("{}", report);
            if report.passed() {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            }
        }
        Err(e) => {
            eprintln!("error: {}", e);
            EXIT_VALIDATION
        }
    }
}

fn cmd_verify_random(count: usize, seed: u64, max_d: usize) -> u8 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0usize;
    for idx in 0..count {
        let (n, h) = random_instance(&mut rng, max_d);
        match verify_equivalence(&n, &h) {
            Ok(report) if report.passed() => {
                println!("instance {}: {} ok", idx, describe_instance(&n, &h));
            }
            Ok(report) => {
                failures += 1;
                println!("instance {}: {} FAILED", idx, describe_instance(&n, &h));
                println!("{}", report);
                println!("reproduce with: {}", instance_json(&n, &h));
            }
            Err(e) => {
                failures += 1;
                println!("instance {}: error: {}", idx, e);
                println!("reproduce with: {}", instance_json(&n, &h));
            }
        }
    }
    if failures == 0 {
        println!("all {} instances verified (seed {})", count, seed);
        EXIT_OK
    } else {
        println!("{} of {} instances failed", failures, count);
        EXIT_NEGATIVE
    }
}

fn instance_json(n: &NewtonData, h: &HodgeData) -> String {
    let file = InstanceFile {
        newton: NewtonInput::Slopes(n.simple_slopes().to_vec()),
        hodge: h.mu_tuple().entries().to_vec(),
    };
    serde_json::to_string(&file).unwrap()
}

fn cmd_polygons(n: &NewtonData, h: &HodgeData, out: &Path) -> u8 {
    let gamma = match enumerate_gamma(n, h) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {}", e);
            return EXIT_VALIDATION;
        }
    };
    if let Err(e) = fs::create_dir_all(out) {
        eprintln!("error: cannot create {}: {}", out.display(), e);
        return EXIT_IO;
    }
    for (idx, s) in gamma.iter().enumerate() {
        let poly = polygon_of(s).unwrap();
        debug_assert!(is_convex(&poly));
        let csv_path = out.join(format!("stratum_{:03}.csv", idx));
        let svg_path = out.join(format!("stratum_{:03}.svg", idx));
        let svg = match export_svg(&poly, 480, 320) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {}", e);
                return EXIT_VALIDATION;
            }
        };
        if let Err(e) = fs::write(&csv_path, export_csv(&poly)) {
            eprintln!("error: cannot write {}: {}", csv_path.display(), e);
            return EXIT_IO;
        }
        if let Err(e) = fs::write(&svg_path, svg) {
            eprintln!("error: cannot write {}: {}", svg_path.display(), e);
            return EXIT_IO;
        }
    }
    println!(
        "wrote {} polygon pairs (CSV + SVG) to {}",
        gamma.len(),
        out.display()
    );
    EXIT_OK
}
