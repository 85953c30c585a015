//! Command-line front end: `repwitness analyze|check|solve|degree`.
//!
//! Exit codes: 0 success / hypotheses hold; 1 negative result (hypothesis
//! fails for `check`, budget exhausted for `solve`, disagreement for
//! `degree --verify`); 2 parse error; 3 I/O error; 4 precondition
//! violation (hypothesis failure in `solve`).

use clap::{Args, Parser, Subcommand};
use repwitness::homology::{analyze, check_thm1, check_thm2, sigma_generator, Presentation};
use repwitness::liegrp::{degree_formula, empirical_degree, DegreeOutcome, Tolerances};
use repwitness::presfile::{parse_str, PresentationFile};
use repwitness::report::{MuReport, ProfileReport, Report, WitnessReport};
use repwitness::solver::{
    solve, ConstraintSystem, SolveError, SolverConfig, SystemOrigin, TargetValue,
};
use repwitness::words::parse_word;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

const EXIT_NEGATIVE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_PRECONDITION: u8 = 4;

#[derive(Parser)]
#[command(name = "repwitness", version, about = "SU(2)/SO(3) representation certificates and witnesses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Emit the machine-readable JSON report instead of text.
    #[arg(long)]
    json: bool,
    /// Reject input words longer than this many letters.
    #[arg(long, default_value_t = 1_000_000)]
    max_word_len: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Print the homology profile, σ, and μ of a presentation file.
    Analyze {
        path: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Decide a theorem's hypotheses for the file's presentation and loops.
    Check {
        path: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        theorem: u8,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Construct a witness representation by random-restart Newton descent.
    Solve {
        path: PathBuf,
        /// Theorem pipeline to run (omit with --raw).
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2), conflicts_with = "raw")]
        theorem: Option<u8>,
        /// Solve the file's relators/loops as raw word equations.
        #[arg(long)]
        raw: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restart budget (overrides any `budget:` line in the file).
        #[arg(long)]
        budget: Option<usize>,
        /// Success tolerance on the max constraint residual.
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Evaluate the degree formula for n words in F_n, rank m.
    Degree {
        /// Words over x1..xn, where n is the number of words given.
        words: Vec<String>,
        #[arg(long, default_value_t = 1)]
        rank: u32,
        /// Cross-check empirically by signed preimage counting (n = 1 only).
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze { path, common } => cmd_analyze(&path, &common),
        Command::Check {
            path,
            theorem,
            common,
        } => cmd_check(&path, theorem, &common),
        Command::Solve {
            path,
            theorem,
            raw,
            seed,
            budget,
            tol,
            common,
        } => cmd_solve(&path, theorem, raw, seed, budget, tol, &common),
        Command::Degree {
            words,
            rank,
            verify,
            seed,
            budget,
            common,
        } => cmd_degree(&words, rank, verify, seed, budget, &common),
    }
}

fn load_file(path: &PathBuf, common: &CommonOpts) -> Result<PresentationFile, ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(EXIT_IO)
    })?;
    let file = parse_str(&text, path).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(EXIT_PARSE)
    })?;
    for w in file.relators.iter().chain(file.gammas.iter()) {
        if w.len() > common.max_word_len {
            eprintln!(
                "error: word of length {} exceeds --max-word-len {}",
                w.len(),
                common.max_word_len
            );
            return Err(ExitCode::from(EXIT_PARSE));
        }
    }
    Ok(file)
}

fn presentation_of(file: &PresentationFile) -> Result<Presentation, ExitCode> {
    file.presentation().map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(EXIT_PARSE)
    })
}

fn emit(report: &Report, common: &CommonOpts, started: Instant) {
    if common.json {
        println!("{}", report.to_json());
    } else {
        print!("{report}");
        println!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
    }
}

fn cmd_analyze(path: &PathBuf, common: &CommonOpts) -> ExitCode {
    let started = Instant::now();
    let file = match load_file(path, common) {
        Ok(f) => f,
        Err(code) => return code,
    };
    let p = match presentation_of(&file) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let profile = analyze(&p);
    let mut report = Report {
        command: "analyze".into(),
        profile: Some(ProfileReport::from_profile(&profile)),
        ..Default::default()
    };
    if profile.b2 == 1 {
        if let Ok(sigma) = sigma_generator(&profile) {
            report.sigma = Some(sigma.coefficients.iter().map(|c| c.to_string()).collect());
            if let Ok(mu) = repwitness::homology::mu_form(&p, &profile, &sigma) {
                report.mu = Some(MuReport::from_element(&mu.mu));
            }
        }
    }
    emit(&report, common, started);
    ExitCode::SUCCESS
}

fn cmd_check(path: &PathBuf, theorem: u8, common: &CommonOpts) -> ExitCode {
    let started = Instant::now();
    let file = match load_file(path, common) {
        Ok(f) => f,
        Err(code) => return code,
    };
    let p = match presentation_of(&file) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let mut report = Report {
        command: format!("check --theorem {theorem}"),
        profile: Some(ProfileReport::from_profile(&analyze(&p))),
        ..Default::default()
    };
    let holds = match theorem {
        1 => {
            let check = check_thm1(&p, &file.gammas);
            report.decision = Some(check.holds);
            report.reason = Some(check.reason);
            report.prediction = check.degree_base.map(|b| num_traits::Signed::abs(&b).to_string());
            check.holds
        }
        _ => {
            let check = check_thm2(&p, &file.gammas);
            report.decision = Some(check.holds);
            report.reason = Some(check.reason);
            report.prediction = check.prediction.map(|b| num_traits::Signed::abs(&b).to_string());
            check.holds
        }
    };
    emit(&report, common, started);
    if holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NEGATIVE)
    }
}

fn solve_exit(err: &SolveError) -> u8 {
    match err {
        SolveError::HypothesisFailed(_) => EXIT_PRECONDITION,
        SolveError::TargetCount { .. } | SolveError::Word(_) => EXIT_PARSE,
        _ => EXIT_NEGATIVE,
    }
}

fn cmd_solve(
    path: &PathBuf,
    theorem: Option<u8>,
    raw: bool,
    seed: u64,
    budget: Option<usize>,
    tol: Option<f64>,
    common: &CommonOpts,
) -> ExitCode {
    let started = Instant::now();
    let file = match load_file(path, common) {
        Ok(f) => f,
        Err(code) => return code,
    };
    let p = match presentation_of(&file) {
        Ok(p) => p,
        Err(code) => return code,
    };
    if theorem.is_none() && !raw {
        eprintln!("error: pass --theorem 1|2 or --raw");
        return ExitCode::from(EXIT_PARSE);
    }
    let mut tolerances = Tolerances::default();
    if let Some(t) = tol {
        tolerances.success = t;
    }
    let mut config = SolverConfig {
        tolerances,
        ..SolverConfig::default()
    };
    if let Some(b) = budget.or(file.budget) {
        config.restarts = b;
    }
    let seed = if seed != 0 { seed } else { file.seed.unwrap_or(0) };

    let mut report = Report {
        command: "solve".into(),
        seed: Some(seed),
        budget: Some(config.restarts),
        tolerance: Some(format!("{:.1e}", config.tolerances.success)),
        ..Default::default()
    };

    let outcome: Result<WitnessReport, SolveError> = if raw {
        // Raw mode: relators are equations against the file's first target
        // lines (default 1), gammas against the remaining targets.
        let n = p.generator_count();
        let mut pairs = vec![];
        let mut targets = file.targets.iter();
        for r in p.relators() {
            let t = targets.next().copied().unwrap_or(repwitness::liegrp::Quat::one());
            pairs.push((r.clone(), t));
        }
        for g in &file.gammas {
            let t = targets.next().copied().unwrap_or(repwitness::liegrp::Quat::one());
            pairs.push((g.clone(), t));
        }
        ConstraintSystem::new(n, pairs, SystemOrigin::Raw)
            .and_then(|sys| solve(&sys, &config, seed))
            .map(|w| WitnessReport::from_witness(&w))
    } else if theorem == Some(1) {
        let targets: Vec<TargetValue> =
            file.targets.iter().map(|q| TargetValue::Sp1(*q)).collect();
        repwitness::solver::solve_thm1(&p, &file.gammas, &targets, &config, seed)
            .map(|w| WitnessReport::from_witness(&w))
    } else {
        repwitness::solver::solve_thm2(&p, &file.gammas, file.eta.as_deref(), &config, seed).map(
            |(w, w2, check)| {
                report.prediction = check.prediction.map(|b| num_traits::Signed::abs(&b).to_string());
                report.w2 = Some((&w2).into());
                WitnessReport::from_witness(&w)
            },
        )
    };

    match outcome {
        Ok(w) => {
            report.decision = Some(true);
            report.witness = Some(w);
            emit(&report, common, started);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            report.decision = Some(false);
            report.reason = Some(e.to_string());
            emit(&report, common, started);
            ExitCode::from(solve_exit(&e))
        }
    }
}

fn cmd_degree(
    words: &[String],
    rank: u32,
    verify: bool,
    seed: u64,
    budget: usize,
    common: &CommonOpts,
) -> ExitCode {
    let started = Instant::now();
    if words.is_empty() {
        eprintln!("error: at least one word required");
        return ExitCode::from(EXIT_PARSE);
    }
    let n = words.len();
    let parsed: Result<Vec<_>, _> = words.iter().map(|t| parse_word(t, n)).collect();
    let parsed = match parsed {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_PARSE);
        }
    };
    let formula = match degree_formula(&parsed, rank) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_PARSE);
        }
    };
    let mut report = Report {
        command: "degree".into(),
        degree_formula: Some(formula.to_string()),
        ..Default::default()
    };
    let mut agree = true;
    if verify {
        if n != 1 {
            eprintln!("error: --verify needs exactly one word (map S³ → S³)");
            return ExitCode::from(EXIT_PARSE);
        }
        let tolerances = Tolerances::default();
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut outcome = None;
        // resample near-singular targets a few times
        for _ in 0..8 {
            let target = repwitness::liegrp::random_unit_quat(&mut rng);
            match empirical_degree(&parsed[0], &target, budget, seed, &tolerances) {
                Ok(DegreeOutcome::NearSingularTarget) => continue,
                Ok(o) => {
                    outcome = Some(Ok(o));
                    break;
                }
                Err(e) => {
                    outcome = Some(Err(e));
                    break;
                }
            }
        }
        match outcome {
            Some(Ok(DegreeOutcome::Count(c))) => {
                report.degree_empirical = Some(c.to_string());
                agree = formula == c.into();
                report.degree_agreement = Some(agree);
            }
            Some(Ok(DegreeOutcome::Inconclusive)) | None => {
                report.degree_empirical = Some("inconclusive".into());
                report.degree_agreement = Some(false);
                agree = false;
            }
            Some(Ok(DegreeOutcome::NearSingularTarget)) => unreachable!(),
            Some(Err(e)) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_PARSE);
            }
        }
    }
    report.seed = verify.then_some(seed);
    emit(&report, common, started);
    if agree {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NEGATIVE)
    }
}
