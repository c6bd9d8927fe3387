use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;

use narayana_concat::baker::{self, enclose, power_of_ten_at_least};
use narayana_concat::constants::Constants;
use narayana_concat::numeric::{NumericError, PrecisionBudget};
use narayana_concat::par::Execution;
use narayana_concat::pipeline::stages::{run_stage1, run_stage2, tau_expansion, StageError};
use narayana_concat::pipeline::{
    low_range_search, oracle_cross_check, prove, verify_certificate_file, ProofConfig,
};

const EXIT_USAGE: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_PRECISION: u8 = 4;

/// Narayana numbers that are concatenations of two repdigits.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every n <= max-n whose N_n is a concatenation of two repdigits.
    Search {
        #[arg(long)]
        max_n: u64,
    },
    /// Print the initial bounds on n and m1 + m2.
    Bounds {
        #[arg(long)]
        paper_constants: bool,
        #[arg(long, default_value_t = 250)]
        cutoff: u64,
    },
    /// Run one reduction stage.
    Reduce {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        stage: u8,
        /// M in the reduction; defaults to the power of ten above the native m1 + m2 bound.
        #[arg(long)]
        big_m: Option<BigInt>,
        #[arg(long, default_value_t = 250)]
        cutoff: u64,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run the whole proof and optionally write a certificate.
    Prove {
        #[arg(long, default_value_t = 250)]
        cutoff: u64,
        #[arg(long)]
        precision_bits: Option<u32>,
        #[arg(long)]
        max_bits: Option<u32>,
        #[arg(long)]
        paper_constants: bool,
        #[arg(long)]
        emit: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Re-check a certificate.
    Verify {
        path: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Cross-check the search against enumeration of all patterns.
    Oracle {
        #[arg(long)]
        max_digits: u64,
    },
}

fn execution(jobs: Option<usize>) -> Execution {
    jobs.map_or_else(Execution::default, Execution::with_jobs)
}

fn numeric_exit(e: &NumericError) -> ExitCode {
    eprintln!("error: {e}");
    if matches!(e, NumericError::Escalation { .. }) {
        ExitCode::from(EXIT_PRECISION)
    } else {
        ExitCode::from(EXIT_INCONCLUSIVE)
    }
}

fn stage_exit(e: &StageError) -> ExitCode {
    eprintln!("error: {e}");
    if e.is_precision() {
        ExitCode::from(EXIT_PRECISION)
    } else {
        ExitCode::from(EXIT_INCONCLUSIVE)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Search { max_n } => {
            let start = Instant::now();
            let found = low_range_search(max_n);
            for s in &found {
                let p = s.pattern;
                println!(
                    "n = {:>4}  N_n = {}  (d1 = {}, m1 = {}, d2 = {}, m2 = {})",
                    s.n, s.value, p.d1, p.m1, p.d2, p.m2
                );
            }
            println!(
                "{} solutions for n <= {max_n} in {:.3?}",
                found.len(),
                start.elapsed()
            );
            ExitCode::SUCCESS
        }
        Command::Bounds {
            paper_constants,
            cutoff,
        } => bounds(paper_constants, cutoff),
        Command::Reduce {
            stage,
            big_m,
            cutoff,
            jobs,
        } => reduce(stage, big_m, cutoff, &execution(jobs)),
        Command::Prove {
            cutoff,
            precision_bits,
            max_bits,
            paper_constants,
            emit,
            jobs,
        } => {
            let mut precision = PrecisionBudget::default();
            if let Some(b) = precision_bits {
                precision.working_bits = b;
                precision.max_bits = precision.max_bits.max(b);
            }
            if let Some(m) = max_bits {
                precision.max_bits = m;
            }
            let precision = match PrecisionBudget::new(
                precision.working_bits,
                precision.max_bits,
                precision.escalation_factor,
            ) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_USAGE);
                }
            };
            let config = ProofConfig {
                low_range_cutoff: cutoff,
                precision,
                m_override: None,
                paper_constants,
                certificate_path: emit,
                execution: execution(jobs),
            };
            let start = Instant::now();
            match prove(&config) {
                Ok(outcome) => {
                    let values: Vec<String> = outcome
                        .solutions
                        .iter()
                        .map(|s| s.value.to_string())
                        .collect();
                    println!("solutions: {{{}}}", values.join(", "));
                    if let Some(r) = &outcome.certificate.reduction {
                        println!(
                            "stage 1: M = {}, eps_min = {}, m1 <= {}",
                            r.stage1.big_m, r.stage1.eps_min, r.stage1.m1_bound
                        );
                        if let Some(s2) = &r.stage2 {
                            println!(
                                "stage 2: {} families, eps_min = {}, n <= {}",
                                s2.family_count, s2.eps_min, s2.n_bound
                            );
                        }
                    }
                    let v = &outcome.certificate.verdict;
                    println!(
                        "verdict: {} ({})",
                        if v.closed { "closed" } else { "inconclusive" },
                        v.reason
                    );
                    println!("elapsed: {:.2?}", start.elapsed());
                    if outcome.closed() {
                        ExitCode::SUCCESS
                    } else if outcome.is_precision_failure() {
                        ExitCode::from(EXIT_PRECISION)
                    } else {
                        ExitCode::from(EXIT_INCONCLUSIVE)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(EXIT_USAGE)
                }
            }
        }
        Command::Verify { path, jobs } => match verify_certificate_file(&path, &execution(jobs)) {
            Ok(report) => {
                println!("{report}");
                if report.ok() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(EXIT_VERIFY)
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_VERIFY)
            }
        },
        Command::Oracle { max_digits } => {
            if max_digits < 2 {
                eprintln!("error: --max-digits must be at least 2");
                return ExitCode::from(EXIT_USAGE);
            }
            match oracle_cross_check(max_digits, &Execution::default()) {
                Ok(r) => {
                    let values: Vec<String> = r.values.iter().map(ToString::to_string).collect();
                    println!("oracle passed: {} patterns up to {max_digits} digits; common values {{{}}}", r.patterns, values.join(", "));
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("oracle FAILED: {e}");
                    ExitCode::from(EXIT_VERIFY)
                }
            }
        }
    }
}

fn bounds(paper_constants: bool, cutoff: u64) -> ExitCode {
    let c = Constants::new();
    let budget = PrecisionBudget::default();
    let b = if paper_constants {
        baker::paper_initial_bounds(&c, cutoff, &budget)
    } else {
        baker::initial_bounds(&c, cutoff, &budget)
    };
    let b = match b {
        Ok(b) => b,
        Err(e) => return numeric_exit(&e),
    };
    let show = |x: &narayana_concat::numeric::Real| {
        enclose(x, &budget)
            .map(|iv| iv.hi().to_string())
            .unwrap_or_else(|e| e.to_string())
    };
    for h in &b.heights {
        let paper = h
            .paper_value
            .as_deref()
            .map(|p| format!("  (paper: {p})"))
            .unwrap_or_default();
        println!("{:<28} <= {}{paper}", h.name, show(&h.value));
    }
    println!(
        "step 1 coefficient C1        = {}  (paper: {})",
        show(&b.stage1.coefficient),
        baker::paper::MATVEEV_STEP1
    );
    println!("m1 ln 10 < c1 (1 + ln n), c1 = {}", show(&b.m1_bound_coeff));
    println!(
        "step 2 coefficient C2        = {}  (paper: {})",
        show(&b.stage2.coefficient),
        baker::paper::MATVEEV_STEP2
    );
    println!("n < H (ln n)^{}, H            = {}", b.r, show(&b.h));
    println!(
        "n bound                      = {}{}",
        b.n_bound,
        if b.from_paper { "  (paper)" } else { "" }
    );
    println!(
        "m1 + m2 bound                = {}{}",
        b.m_sum_bound,
        if b.from_paper { "  (paper)" } else { "" }
    );
    println!(
        "M                            = {}",
        power_of_ten_at_least(&b.m_sum_bound)
    );
    ExitCode::SUCCESS
}

fn reduce(stage: u8, big_m: Option<BigInt>, cutoff: u64, exec: &Execution) -> ExitCode {
    let c = Constants::new();
    let budget = PrecisionBudget::default();
    let big_m = match big_m {
        Some(m) => m,
        None => match baker::initial_bounds(&c, cutoff, &budget) {
            Ok(b) => power_of_ten_at_least(&b.m_sum_bound),
            Err(e) => return numeric_exit(&e),
        },
    };
    if big_m < BigInt::from(1) {
        eprintln!("error: --big-m must be positive");
        return ExitCode::from(EXIT_USAGE);
    }
    let cf = match tau_expansion(&c, &big_m, &budget) {
        Ok(cf) => cf,
        Err(e) => return numeric_exit(&e),
    };
    let s1 = match run_stage1(&c, &big_m, &cf, &budget, exec) {
        Ok(s) => s,
        Err(e) => return stage_exit(&e),
    };
    println!("M = {big_m}, first q > 6M = {}", s1.q_first);
    if stage == 1 {
        for m in &s1.members {
            println!(
                "d1 = {}  eps = {}  m1 <= {}",
                m.key, m.outcome.eps_recorded, m.bound
            );
        }
        println!("stage 1: eps_min = {}, m1 <= {}", s1.eps_min, s1.bound);
        return ExitCode::SUCCESS;
    }
    let s2 = match run_stage2(&c, &big_m, &s1.bound, &cf, &budget, exec) {
        Ok(s) => s,
        Err(e) => return stage_exit(&e),
    };
    let worst = s2
        .members
        .iter()
        .max_by_key(|m| m.bound.clone())
        .expect("non-empty family");
    let retries = s2
        .members
        .iter()
        .filter(|m| m.outcome.q_used != s2.q_first)
        .count();
    println!("stage 1: m1 <= {}", s1.bound);
    println!(
        "stage 2: {} families ({retries} needed a later convergent), eps_min = {}, n <= {} (worst member d1 = {}, d2 = {}, m1 = {})",
        s2.members.len(),
        s2.eps_min,
        s2.bound,
        worst.key.0,
        worst.key.1,
        worst.key.2
    );
    ExitCode::SUCCESS
}
