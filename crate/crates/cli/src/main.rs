//! h1jump: exact verification of the h^1 jump for a flat family of
//! hypersurfaces in projective bundles over P^1.
//!
//! Exit codes: 0 = pass, 1 = a mathematical check failed, 2 = usage or
//! config error.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use h1jump_core::algebra::parse::{parse_laurent, parse_mpoly};
use h1jump_core::algebra::var::Var;
use h1jump_core::bundle::{splitting_type, TransitionBundle};
use h1jump_core::cohomology::{cohomology_pe, LineBundleOnPE, SplitBundle};
use h1jump_core::cox::{cox_cohomology, cox_cohomology_with_witness};
use h1jump_core::pipeline::{
    build_family, find_tau, tau_basis, verify, FamilyConfig, TauLock, TauMode,
};
use h1jump_core::smooth::{singular_locus_decision, Bidegree14Form};

#[derive(Parser)]
#[command(name = "h1jump", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full verification pipeline and emit the report.
    Verify {
        /// Config JSON; defaults are used when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// τ lockfile: reused when present, written after a search.
        #[arg(long)]
        lock: Option<PathBuf>,
        /// Override the search seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the worker count.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Search for a smoothing section τ and write the lockfile.
    FindTau {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        lock: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Splitting type of a transition matrix (JSON array of arrays of
    /// Laurent polynomial strings in z).
    SplittingType {
        #[arg(long)]
        matrix: PathBuf,
        /// Specialize the parameter t first.
        #[arg(long, allow_hyphen_values = true)]
        param: Option<String>,
    },
    /// Cohomology of O_P(a) ⊗ p^*O_B(b) on P(O(e1)⊕O(e2)⊕O(e3)).
    Cohomology {
        /// Splitting degrees, e.g. "-1,0,1".
        #[arg(long, allow_hyphen_values = true)]
        e: String,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long, value_enum, default_value_t = Oracle::Pushforward)]
        oracle: Oracle,
        /// With the Cox oracle, list the contributing monomials per H^i.
        #[arg(long)]
        witness: bool,
    },
    /// Smoothness certificate for z0*g0(x) + z1*g1(x) in P^1 x P^2.
    Smooth {
        #[arg(long)]
        g0: String,
        #[arg(long)]
        g1: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Oracle {
    Pushforward,
    Cox,
    Both,
}

fn load_config(path: &Option<PathBuf>) -> Result<FamilyConfig> {
    match path {
        None => Ok(FamilyConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("reading config {}", p.display()))?;
            Ok(FamilyConfig::from_json(&text)?)
        }
    }
}

fn run_verify(
    config: Option<PathBuf>,
    out: Option<PathBuf>,
    lock: Option<PathBuf>,
    seed: Option<u64>,
    jobs: Option<usize>,
) -> Result<ExitCode> {
    let mut config = load_config(&config)?;
    if let Some(seed) = seed {
        config = config.with_seed(seed);
    }
    if let Some(jobs) = jobs {
        config.jobs = jobs.max(1);
    }
    // an existing lockfile pins τ
    if let Some(lock_path) = &lock {
        if lock_path.exists() {
            let text = std::fs::read_to_string(lock_path)
                .with_context(|| format!("reading lock {}", lock_path.display()))?;
            let lock: TauLock = serde_json::from_str(&text).context("parsing lockfile")?;
            let coeffs: BTreeMap<usize, _> = lock
                .coeff_map()
                .map_err(|e| anyhow!("lockfile coefficients: {e}"))?;
            config.tau = TauMode::Fixed(coeffs);
        }
    }
    let searching = matches!(config.tau, TauMode::Search(_));
    let report = verify(&config)?;
    if let Some(lock_path) = &lock {
        if searching {
            if let Some(tau) = &report.tau {
                let record = TauLock {
                    seed: tau.seed,
                    attempt: tau.attempt.unwrap_or(0),
                    coeffs: tau.coeffs.clone(),
                    basis_order_version: tau.basis_order_version.clone(),
                };
                std::fs::write(lock_path, serde_json::to_string_pretty(&record)?)
                    .with_context(|| format!("writing lock {}", lock_path.display()))?;
            }
        }
    }
    let json = report.to_json();
    match &out {
        Some(p) => std::fs::write(p, &json).with_context(|| format!("writing {}", p.display()))?,
        None => println!("{json}"),
    }
    let h1_summary: Vec<String> = report
        .t0
        .iter()
        .map(|t| format!("h1(X_0) = {}", t.h1))
        .chain(
            report
                .samples
                .iter()
                .map(|s| format!("h1(X_{}) = {}", s.c, s.h1)),
        )
        .collect();
    eprintln!(
        "{}: {}",
        if report.pass { "PASS" } else { "FAIL" },
        h1_summary.join(", ")
    );
    for f in &report.failures {
        eprintln!("failure: {f}");
    }
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run_find_tau(config: Option<PathBuf>, lock: PathBuf, seed: Option<u64>) -> Result<ExitCode> {
    let mut config = load_config(&config)?;
    if let Some(seed) = seed {
        config = config.with_seed(seed);
    }
    let TauMode::Search(search) = config.tau.clone() else {
        return Err(anyhow!("find-tau requires tau mode \"search\""));
    };
    let family = build_family(&config).map_err(|e| anyhow!("{e}"))?;
    let basis = tau_basis(&family, &config.samples[0]).map_err(|e| anyhow!("{e}"))?;
    match find_tau(&config, &family, &basis, &search) {
        Ok((_, record)) => {
            std::fs::write(&lock, serde_json::to_string_pretty(&record)?)
                .with_context(|| format!("writing lock {}", lock.display()))?;
            eprintln!(
                "found τ at attempt {} (basis size {})",
                record.attempt,
                basis.sections.len()
            );
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            eprintln!("{e}");
            Ok(ExitCode::from(1))
        }
    }
}

fn run_splitting_type(matrix: PathBuf, param: Option<String>) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&matrix)
        .with_context(|| format!("reading matrix {}", matrix.display()))?;
    let rows: Vec<Vec<String>> = serde_json::from_str(&text).context("matrix JSON")?;
    let mut parsed = Vec::new();
    for row in &rows {
        let mut out = Vec::new();
        for s in row {
            out.push(parse_laurent(s, Var::Z).map_err(|e| anyhow!("entry `{s}`: {e}"))?);
        }
        parsed.push(out);
    }
    let mut bundle = TransitionBundle::new(parsed).map_err(|e| anyhow!("{e}"))?;
    if let Some(c) = &param {
        let c = parse_mpoly(c)
            .ok()
            .and_then(|p| p.constant_value())
            .ok_or_else(|| anyhow!("invalid rational `{c}`"))?;
        bundle = bundle
            .specialize_parameter(&c)
            .map_err(|e| anyhow!("{e}"))?;
    } else if bundle.has_param() {
        return Err(anyhow!("matrix involves the parameter t; pass --param"));
    }
    let st = splitting_type(&bundle).map_err(|e| anyhow!("{e}"))?;
    println!("{}", serde_json::to_string(st.degrees())?);
    Ok(ExitCode::SUCCESS)
}

fn run_cohomology(e: String, a: i64, b: i64, oracle: Oracle, witness: bool) -> Result<ExitCode> {
    let degrees: Vec<i64> = e
        .split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("parsing degrees `{e}`"))?;
    let split = SplitBundle::new(degrees).map_err(|e| anyhow!("{e}"))?;
    let pushforward = || -> Result<_> {
        Ok(cohomology_pe(
            &LineBundleOnPE::new(split.clone(), a, b).map_err(|e| anyhow!("{e}"))?,
        ))
    };
    match oracle {
        Oracle::Pushforward => {
            println!("{}", pushforward()?);
        }
        Oracle::Cox => {
            if witness {
                let (v, w) =
                    cox_cohomology_with_witness(&split, a, b).map_err(|e| anyhow!("{e}"))?;
                println!("{v}");
                for (i, monomials) in w.iter().enumerate() {
                    if monomials.is_empty() {
                        continue;
                    }
                    let list: Vec<String> = monomials.iter().map(|m| m.to_string()).collect();
                    println!("H^{i}: {}", list.join(", "));
                }
            } else {
                println!(
                    "{}",
                    cox_cohomology(&split, a, b).map_err(|e| anyhow!("{e}"))?
                );
            }
        }
        Oracle::Both => {
            let pe = pushforward()?;
            let cox = cox_cohomology(&split, a, b).map_err(|e| anyhow!("{e}"))?;
            println!("pushforward: {pe}");
            println!("cox:         {cox}");
            if pe != cox {
                eprintln!("oracle disagreement");
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_smooth(g0: String, g1: String, seed: u64) -> Result<ExitCode> {
    let g0 = parse_mpoly(&g0).map_err(|e| anyhow!("--g0: {e}"))?;
    let g1 = parse_mpoly(&g1).map_err(|e| anyhow!("--g1: {e}"))?;
    let form = Bidegree14Form::new(g0, g1).map_err(|e| anyhow!("{e}"))?;
    let decision = singular_locus_decision(&form, seed).map_err(|e| anyhow!("{e}"))?;
    if decision.empty {
        println!("smooth");
        Ok(ExitCode::SUCCESS)
    } else {
        match decision.witness {
            Some(w) => println!("singular at {w}"),
            None => println!("singular"),
        }
        Ok(ExitCode::from(1))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify {
            config,
            out,
            lock,
            seed,
            jobs,
        } => run_verify(config, out, lock, seed, jobs),
        Command::FindTau { config, lock, seed } => run_find_tau(config, lock, seed),
        Command::SplittingType { matrix, param } => run_splitting_type(matrix, param),
        Command::Cohomology {
            e,
            a,
            b,
            oracle,
            witness,
        } => run_cohomology(e, a, b, oracle, witness),
        Command::Smooth { g0, g1, seed } => run_smooth(g0, g1, seed),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
