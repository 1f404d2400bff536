// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The derandom authors

//! `derandom`: construct, verify and inspect family files.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};
use derandom::bisector::{alpha_bisector, base_bisector, interval_bisector};
use derandom::format::FamilyFile;
use derandom::mapping::{base_mapping_family, interval_mapping_family, iterated_mapping_family, universal_set};
use derandom::splitter::{brute_force_splitter, build_splitter, composed_splitter, modulo_splitter};
use derandom::verify::{verify_bisector, verify_mapping_family, verify_splitter, verify_uniformity, verify_universal};
use derandom::{
    BuildConfig, Error, Family, FamilyKind, Fraction, MappingStrategy, PoolBudget, Uniformity, VerifyReport,
};

const EXIT_INVALID: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUILD: u8 = 3;
const EXIT_ORACLE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "derandom",
    version,
    about = "Deterministic splitters, bisectors and universal sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a family and write it to a file.
    Construct(ConstructArgs),
    /// Check a family file with the exhaustive oracle.
    Verify(VerifyArgs),
    /// Summarise a family file.
    Info { path: PathBuf },
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    kind: FamilyKind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Codomain size for splitters.
    #[arg(long = "l")]
    ell: Option<usize>,
    #[arg(long)]
    alpha: Option<Fraction>,
    #[arg(long)]
    k0: Option<usize>,
    #[arg(long)]
    k1: Option<usize>,
    #[arg(long)]
    beta: Option<Fraction>,
    /// Uniformity goal for splitters: none, uniform or strong.
    #[arg(long, default_value = "none")]
    goal: Uniformity,
    /// Builder: auto, modulo, composed, brute-force, base, alpha, iterated, interval.
    #[arg(long, default_value = "auto")]
    method: String,
    #[arg(long)]
    out: PathBuf,
    /// FULL[,SAMPLE]: enumerate pools up to FULL candidates, else sample SAMPLE.
    #[arg(long)]
    pool_budget: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    granularity: Option<usize>,
    /// Permit builds outside the asymptotic regime; such outputs are always oracle-checked.
    #[arg(long, default_value_t = true, action = ArgAction::Set, num_args = 0..=1, default_missing_value = "true")]
    allow_out_of_regime: bool,
    /// Skip the post-build oracle pass.
    #[arg(long)]
    no_verify: bool,
}

#[derive(Args)]
struct VerifyArgs {
    path: PathBuf,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    alpha: Option<Fraction>,
    #[arg(long)]
    k0: Option<usize>,
    #[arg(long)]
    k1: Option<usize>,
    #[arg(long)]
    beta: Option<Fraction>,
    #[arg(long)]
    goal: Option<Uniformity>,
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::BadParams(_) | Error::Parse { .. } | Error::ChecksumMismatch { .. } | Error::LimitTooSmall(_) => {
            EXIT_USAGE
        }
        _ => EXIT_BUILD,
    }
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn parse_budget(text: &str) -> Result<PoolBudget, Error> {
    let bad = || Error::BadParams(format!("pool budget {text:?} is not FULL[,SAMPLE]"));
    let (full, sample) = match text.split_once(',') {
        Some((f, s)) => (f.parse().map_err(|_| bad())?, s.parse().map_err(|_| bad())?),
        None => {
            let full: u64 = text.parse().map_err(|_| bad())?;
            (full, (full as usize).min(PoolBudget::default().sample_size))
        }
    };
    if sample == 0 {
        return Err(bad());
    }
    Ok(PoolBudget {
        full_limit: full,
        sample_size: sample,
    })
}

fn print_report(report: &VerifyReport) {
    let witness = report
        .witness
        .as_ref()
        .map_or_else(|| "none".to_string(), |w| w.to_string());
    println!(
        "RESULT valid={} checked={} witness={}",
        report.valid, report.checked, witness
    );
    let stats: Vec<String> = report.stats.iter().map(|(m, c)| format!("{m}:{c}")).collect();
    println!(
        "STATS {}",
        if stats.is_empty() {
            "none".to_string()
        } else {
            stats.join(" ")
        }
    );
}

fn required<T>(v: Option<T>, flag: &str, kind: FamilyKind) -> Result<T, Error> {
    v.ok_or_else(|| Error::BadParams(format!("--{flag} is required for {kind} families")))
}

fn build(args: &ConstructArgs, cfg: &BuildConfig) -> Result<Family, Error> {
    let (n, k, kind) = (args.n, args.k, args.kind);
    let method = args.method.as_str();
    let unknown = || Error::BadParams(format!("method {method:?} does not apply to {kind} families"));
    match kind {
        FamilyKind::Splitter => {
            let ell = required(args.ell, "l", kind)?;
            match method {
                "auto" => build_splitter(n, k, ell, args.goal, cfg),
                "modulo" => modulo_splitter(n, k, ell, cfg),
                "composed" => composed_splitter(n, k, ell, cfg),
                "brute-force" => brute_force_splitter(n, k, ell, None, cfg),
                _ => Err(unknown()),
            }
        }
        FamilyKind::Bisector => {
            let alpha = required(args.alpha, "alpha", kind)?;
            match method {
                "auto" | "alpha" => alpha_bisector(n, k, alpha, cfg),
                "base" => base_bisector(n, k, alpha, cfg),
                "interval" => interval_bisector(n, k, alpha, cfg),
                _ => Err(unknown()),
            }
        }
        FamilyKind::Mapping => {
            let alpha = required(args.alpha, "alpha", kind)?;
            let k0 = required(args.k0, "k0", kind)?;
            let k1 = required(args.k1, "k1", kind)?;
            if k0 + k1 != k {
                return Err(Error::BadParams(format!("k0 + k1 = {} but --k {k}", k0 + k1)));
            }
            let beta = args.beta.unwrap_or(Fraction::one());
            let staged = beta == Fraction::one();
            match method {
                "auto" if staged => iterated_mapping_family(n, k0, k1, alpha, cfg),
                "auto" | "base" => base_mapping_family(n, k0, k1, alpha, beta, cfg),
                "iterated" if staged => iterated_mapping_family(n, k0, k1, alpha, cfg),
                "interval" if staged => interval_mapping_family(n, k0, k1, alpha, cfg),
                "iterated" | "interval" => Err(Error::BadParams(format!("method {method:?} builds beta = 1 only"))),
                _ => Err(unknown()),
            }
        }
        FamilyKind::Universal => {
            let alpha = required(args.alpha, "alpha", kind)?;
            let strategy = match method {
                "auto" | "iterated" => MappingStrategy::Iterated,
                "base" => MappingStrategy::Base,
                "interval" => MappingStrategy::Interval,
                _ => return Err(unknown()),
            };
            universal_set(
                n,
                k,
                alpha,
                &BuildConfig {
                    mapping_strategy: strategy,
                    ..cfg.clone()
                },
            )
        }
    }
}

fn oracle(family: &Family, over: &VerifyArgs) -> VerifyReport {
    let k = over.k.unwrap_or(family.k());
    let alpha = over.alpha.or(family.alpha()).unwrap_or(Fraction::zero());
    match family.kind() {
        FamilyKind::Splitter => {
            let report = verify_splitter(family, k);
            let goal = over.goal.unwrap_or(family.uniformity());
            if report.valid && goal != Uniformity::None {
                let uniform = verify_uniformity(family, goal);
                if !uniform.valid {
                    return uniform;
                }
            }
            report
        }
        FamilyKind::Bisector => verify_bisector(family, k, alpha),
        FamilyKind::Mapping => verify_mapping_family(
            family,
            over.k0.or(family.k0()).unwrap_or(0),
            over.k1.or(family.k1()).unwrap_or(0),
            alpha,
            over.beta.or(family.beta()).unwrap_or(Fraction::one()),
        ),
        FamilyKind::Universal => verify_universal(family, k, alpha),
    }
}

fn construct(args: ConstructArgs) -> ExitCode {
    let mut cfg = BuildConfig {
        desk_mode: args.allow_out_of_regime,
        skip_certify: true,
        ..BuildConfig::default()
    };
    if let Some(text) = &args.pool_budget {
        match parse_budget(text) {
            Ok(budget) => cfg.pool = budget,
            Err(e) => return fail(EXIT_USAGE, e),
        }
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(g) = args.granularity {
        if g == 0 {
            return fail(EXIT_USAGE, "granularity must be positive");
        }
        cfg.granularity = g;
    }
    let mut family = match build(&args, &cfg) {
        Ok(f) => f,
        Err(e) => return fail(exit_for(&e), e),
    };
    let report = (!args.no_verify).then(|| {
        let none = VerifyArgs {
            path: args.out.clone(),
            k: None,
            alpha: None,
            k0: None,
            k1: None,
            beta: None,
            goal: None,
        };
        oracle(&family, &none)
    });
    family.provenance_mut().valid = report.as_ref().map(|r| r.valid);
    if let Err(e) = FamilyFile::write(&family, &args.out) {
        return fail(EXIT_BUILD, e);
    }
    match report {
        Some(r) => {
            print_report(&r);
            if r.valid {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_ORACLE)
            }
        }
        None => ExitCode::SUCCESS,
    }
}

fn verify(args: VerifyArgs) -> ExitCode {
    let family = match FamilyFile::read(&args.path) {
        Ok(f) => f,
        Err(e @ Error::Io(_)) => return fail(EXIT_USAGE, e),
        Err(e) => return fail(exit_for(&e), e),
    };
    let report = oracle(&family, &args);
    print_report(&report);
    if report.valid {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_INVALID)
    }
}

fn info(path: PathBuf) -> ExitCode {
    let family = match FamilyFile::read(&path) {
        Ok(f) => f,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    let p = family.provenance();
    println!("kind={}", family.kind());
    println!("n={}", family.n());
    println!("k={}", family.k());
    println!("ell={}", family.ell());
    if let Some(a) = family.alpha() {
        println!("alpha={a}");
    }
    if let (Some(k0), Some(k1), Some(b)) = (family.k0(), family.k1(), family.beta()) {
        println!("k0={k0} k1={k1} beta={b}");
    }
    println!("count={}", family.len());
    println!("uniformity={}", family.uniformity());
    if family.kind().is_binary() {
        let target = family.ones_target().unwrap_or(0);
        let all_match = family.functions().iter().all(|f| f.ones() == target);
        println!("ones_target={target}");
        println!("ones_counts_match={all_match}");
    } else {
        let sizes = family.functions().iter().map(|f| f.image_size());
        let gaps = family.functions().iter().map(|f| f.nonuniformity());
        if let (Some(lo), Some(hi)) = (sizes.clone().min(), sizes.max()) {
            println!("image_sizes={lo}..{hi}");
        }
        println!("max_nonuniformity={}", gaps.max().unwrap_or(0));
    }
    println!("builder={}", p.builder);
    println!("out_of_regime={}", p.out_of_regime);
    println!(
        "valid={}",
        p.valid.map_or_else(|| "unchecked".to_string(), |v| v.to_string())
    );
    ExitCode::SUCCESS
}

fn init_threads() {
    let threads = std::env::var("DERANDOM_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    if threads > 0 {
        // Fails only if a global pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    match cli.command {
        Command::Construct(args) => construct(args),
        Command::Verify(args) => verify(args),
        Command::Info { path } => info(path),
    }
}
