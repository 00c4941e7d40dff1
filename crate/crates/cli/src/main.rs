//! nrlab: compute nonresidue sequences, character sums, explicit bound
//! envelopes, and solutions of the mean-value integral equation.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure (a
//! theorem-backed assertion did not hold), 3 work-budget exhaustion.

// `!(x > 0.0)` validation deliberately rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod cache;
mod config;
mod output;

use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{ArgGroup, Parser, Subcommand};

use nrlab_core::arith::{legendre, primes_in_with_segment, OddPrime, PrimeRange};
use nrlab_core::charsums::{
    best_burgess_r, burgess_rhs, char_sum, mchin_bound, mchin_r_choice, mchin_threshold,
    mean_value,
};
use nrlab_core::error::Error as CoreError;
use nrlab_core::experiments::{
    case_analysis_report, counting_inequality_check, sweep_density, sweep_mean_scaled,
    sweep_nk_ratios, CaseBranch, KPolicy, SkipNote,
};
use nrlab_core::gsmodel::{
    delta1_compute, sandwich_check, sigma_solve, StepKernel, ETA, LAMBDA, XI,
};
use nrlab_core::residues::vinogradov_decompose;

use config::{Config, ConfigFlags};
use output::LockOutcome;

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_VERIFY: i32 = 2;
const EXIT_BUDGET: i32 = 3;

#[derive(Parser)]
#[command(name = "nrlab", version, about = "quadratic nonresidue laboratory")]
struct Cli {
    #[command(flatten)]
    flags: ConfigFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Legendre symbol (n|p): -1, 0, or 1
    Symbol {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
    },
    /// Print the k-th smallest positive nonresidue mod p
    Nonresidue {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u64,
    },
    /// Enumerate nonresidues up to a limit, through the cache
    Table {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        limit: u64,
        /// Also write the table (cache format) to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Window character sum over M < n <= M+N
    Sum {
        #[arg(long)]
        p: u64,
        #[arg(long = "M", allow_negative_numbers = true)]
        m: i64,
        #[arg(long = "N")]
        n: u64,
    },
    /// Mean value (1/x)·sum of the symbol up to x
    Mean {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        x: u64,
    },
    /// Explicit envelope 30·N^(1-1/r)·p^((r+1)/4r²)·(ln p)^(1/r)
    #[command(group(ArgGroup::new("which_r").required(true).args(["r", "auto_r"])))]
    Burgess {
        #[arg(long)]
        p: u64,
        #[arg(long = "N")]
        n: u64,
        /// Evaluate at this r
        #[arg(long)]
        r: Option<u32>,
        /// Minimize over 1 <= r <= this bound
        #[arg(long)]
        auto_r: Option<u32>,
    },
    /// Mean-value threshold, bound shape, and r-choice at this c
    Mchin {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        c: f64,
    },
    /// Print lambda, eta, xi, delta1 and the identity residuals
    Constants,
    /// Evaluate delta1 by adaptive quadrature at this tolerance
    Delta1 {
        #[arg(long)]
        tol: f64,
    },
    /// Solve the integral equation on [0, U] and emit (u, sigma) TSV
    Sigma {
        /// extremal | one | const:`<v>` | steps:t0:v0,t1:v1,...
        #[arg(long)]
        kernel: String,
        #[arg(long = "U")]
        u_end: f64,
        /// Grid step (defaults to the configured grid_h)
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report (1 - I1, sigma, 1 - I1 + I2) at u
    Sandwich {
        /// extremal | one | const:`<v>` | steps:t0:v0,t1:v1,...
        #[arg(long)]
        kernel: String,
        #[arg(long)]
        u: f64,
        #[arg(long)]
        h: Option<f64>,
    },
    /// Sweep n_k(p)/E(p) over a prime range
    #[command(name = "sweep-t1")]
    #[command(group(ArgGroup::new("which_k").required(true).args(["k", "kmax"])))]
    SweepT1 {
        #[arg(long)]
        lo: u64,
        #[arg(long)]
        hi: u64,
        /// Fixed k for every prime
        #[arg(long)]
        k: Option<u64>,
        /// Take k = floor of the per-prime ceiling
        #[arg(long)]
        kmax: bool,
        /// Upper bound on k per prime
        #[arg(long, default_value_t = u64::MAX)]
        cap: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        lock: Option<PathBuf>,
    },
    /// Sweep symbol-class counts at the density threshold
    #[command(name = "sweep-t2")]
    SweepT2 {
        #[arg(long)]
        lo: u64,
        #[arg(long)]
        hi: u64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        lock: Option<PathBuf>,
    },
    /// Sweep |M(x0)|·(ln p)^(c²) at the mean-value threshold
    #[command(name = "sweep-mchin")]
    SweepMchin {
        #[arg(long)]
        lo: u64,
        #[arg(long)]
        hi: u64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        lock: Option<PathBuf>,
    },
    /// Factor a nonresidue n < n1(p)^3 as q·m
    Decompose {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u64,
    },
    /// Check the counting inequality at x < n1(p)^3
    #[command(name = "check-counting")]
    CheckCounting {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        x: u64,
    },
    /// Case analysis for one (p, k) at constant C
    #[command(name = "case-report")]
    CaseReport {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u64,
        #[arg(long = "C", default_value_t = 1.0)]
        c_param: f64,
    },
}

fn main() {
    std::process::exit(run(std::env::args()));
}

fn run<I>(argv: I) -> i32
where
    I: IntoIterator,
    I::Item: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders --help/--version as "errors" with success status
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match Config::resolve(&cli.flags) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("nrlab: {e:#}");
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command, &cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("nrlab: {e:#}");
            if e.downcast_ref::<CoreError>()
                .is_some_and(|ce| matches!(ce, CoreError::BudgetExceeded { .. }))
            {
                EXIT_BUDGET
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn require_budget(needed: u64, cfg: &Config) -> anyhow::Result<()> {
    if needed > cfg.work_budget {
        return Err(CoreError::BudgetExceeded {
            needed,
            budget: cfg.work_budget,
        }
        .into());
    }
    Ok(())
}

fn odd_prime(p: u64) -> anyhow::Result<OddPrime> {
    OddPrime::new(p).map_err(anyhow::Error::from)
}

fn sieve(lo: u64, hi: u64, cfg: &Config) -> anyhow::Result<PrimeRange> {
    primes_in_with_segment(lo.max(2), hi, cfg.segment_size).map_err(anyhow::Error::from)
}

fn parse_kernel(s: &str, u_end: f64) -> anyhow::Result<StepKernel> {
    let kernel = if s == "extremal" {
        StepKernel::extremal(u_end)
    } else if s == "one" {
        StepKernel::constant(1.0, u_end)
    } else if let Some(v) = s.strip_prefix("const:") {
        StepKernel::constant(v.parse().context("const kernel value")?, u_end)
    } else if let Some(body) = s.strip_prefix("steps:") {
        let mut breakpoints = Vec::new();
        let mut values = Vec::new();
        for piece in body.split(',') {
            let (t, v) = piece
                .split_once(':')
                .with_context(|| format!("piece {piece:?}: expected t:v"))?;
            breakpoints.push(t.parse::<f64>().context("breakpoint")?);
            values.push(v.parse::<f64>().context("piece value")?);
        }
        StepKernel::new(breakpoints, values, u_end)
    } else {
        bail!("unknown kernel {s:?}: use extremal | one | const:<v> | steps:t0:v0,...");
    };
    kernel.map_err(anyhow::Error::from)
}

fn print_skips(skipped: &[SkipNote]) {
    for s in skipped {
        eprintln!("skip p={}: {}", s.p, s.note);
    }
}

fn handle_lock(lock: Option<&PathBuf>, stats: &[(&str, f64)]) -> anyhow::Result<i32> {
    let Some(path) = lock else {
        return Ok(EXIT_OK);
    };
    match output::check_or_write_lock(path, stats)? {
        LockOutcome::Created => {
            println!("lock created: {}", path.display());
            Ok(EXIT_OK)
        }
        LockOutcome::Verified => {
            println!("lock verified: {}", path.display());
            Ok(EXIT_OK)
        }
        LockOutcome::Mismatch { detail } => {
            eprintln!("lock mismatch at {}:\n{detail}", path.display());
            Ok(EXIT_VERIFY)
        }
    }
}

fn dispatch(cmd: Command, cfg: &Config) -> anyhow::Result<i32> {
    match cmd {
        Command::Symbol { p, n } => {
            let p = odd_prime(p)?;
            println!("{}", legendre(n, &p).value());
            Ok(EXIT_OK)
        }

        Command::Nonresidue { p, k } => {
            let p = odd_prime(p)?;
            println!("{}", nrlab_core::residues::nth_nonresidue(&p, k)?);
            Ok(EXIT_OK)
        }

        Command::Table { p, limit, out } => {
            require_budget(limit, cfg)?;
            let p = odd_prime(p)?;
            let (table, was_cached) = cache::load_or_compute(&cfg.cache_dir, &p, limit)?;
            println!(
                "p={} limit={} nonresidues={} residues={} zeros={} cached={} path={}",
                p.value(),
                limit,
                table.nonresidue_count,
                table.residue_count,
                limit / p.value(),
                was_cached,
                cache::cache_path(&cfg.cache_dir, p.value(), limit).display()
            );
            if let Some(out) = out {
                std::fs::write(&out, cache::encode(&table))
                    .with_context(|| format!("writing {}", out.display()))?;
            }
            Ok(EXIT_OK)
        }

        Command::Sum { p, m, n } => {
            require_budget(n, cfg)?;
            let p = odd_prime(p)?;
            println!("{}", char_sum(&p, m, n)?.value);
            Ok(EXIT_OK)
        }

        Command::Mean { p, x } => {
            require_budget(x, cfg)?;
            let p = odd_prime(p)?;
            println!("{}", mean_value(&p, x)?);
            Ok(EXIT_OK)
        }

        Command::Burgess { p, n, r, auto_r } => {
            let p = odd_prime(p)?;
            if let Some(r) = r {
                println!("{}", burgess_rhs(&p, n, r)?.rhs);
            } else {
                let (r_star, rhs_star) = best_burgess_r(&p, n, auto_r.unwrap())?;
                println!("{r_star}\t{rhs_star}");
            }
            Ok(EXIT_OK)
        }

        Command::Mchin { p, c } => {
            let p = odd_prime(p)?;
            println!("threshold\t{}", mchin_threshold(&p, c)?);
            println!("bound\t{}", mchin_bound(&p, c)?);
            match mchin_r_choice(&p, c) {
                Ok(r) => println!("r\t{r}"),
                Err(CoreError::DegenerateR { .. }) => println!("r\tdegenerate"),
                Err(e) => return Err(e.into()),
            }
            Ok(EXIT_OK)
        }

        Command::Constants => {
            let delta1 = delta1_compute(cfg.quad_tol.min(1e-4))?;
            println!("lambda\t{LAMBDA:.10}");
            println!("eta\t{ETA:.10}");
            println!("xi\t{XI:.10}");
            println!("delta1\t{delta1:.10}");
            println!("|xi - eta(1-lambda)|\t{:e}", (XI - ETA * (1.0 - LAMBDA)).abs());
            println!("|xi - (2 lambda - 1)|\t{:e}", (XI - (2.0 * LAMBDA - 1.0)).abs());
            Ok(EXIT_OK)
        }

        Command::Delta1 { tol } => {
            println!("{}", delta1_compute(tol)?);
            Ok(EXIT_OK)
        }

        Command::Sigma {
            kernel,
            u_end,
            h,
            out,
        } => {
            let h = h.unwrap_or(cfg.grid_h);
            let kernel = parse_kernel(&kernel, u_end)?;
            let grid = sigma_solve(&kernel, u_end, h)?;
            let (u_min, sigma_min) = grid.min_on(1.0, grid.u_end());
            let tsv = grid.to_tsv();
            match out {
                Some(path) => {
                    std::fs::write(&path, tsv)
                        .with_context(|| format!("writing {}", path.display()))?;
                    println!("min sigma {sigma_min} at u {u_min} ({} grid points -> {})",
                        grid.values().len(), path.display());
                }
                None => {
                    print!("{tsv}");
                    eprintln!("min sigma {sigma_min} at u {u_min}");
                }
            }
            Ok(EXIT_OK)
        }

        Command::Sandwich { kernel, u, h } => {
            let h = h.unwrap_or(cfg.grid_h);
            let kernel = parse_kernel(&kernel, u.max(1.0))?;
            let b = sandwich_check(&kernel, u, h)?;
            let ok = b.ordered_within(5.0 * h);
            println!("lower\t{}", b.lower);
            println!("sigma\t{}", b.sigma);
            println!("upper\t{}", b.upper);
            println!("ordered\t{ok}");
            Ok(if ok { EXIT_OK } else { EXIT_VERIFY })
        }

        Command::SweepT1 {
            lo,
            hi,
            k,
            kmax: _,
            cap,
            csv,
            json,
            lock,
        } => {
            let range = sieve(lo, hi, cfg)?;
            let policy = match k {
                Some(k) => KPolicy::Fixed(k),
                None => KPolicy::KmaxFloor,
            };
            let sweep = sweep_nk_ratios(&range, policy, cap);
            print_skips(&sweep.skipped);
            if let Some(path) = &csv {
                output::write_csv(path, &sweep.records)?;
            }
            if let Some(path) = &json {
                output::write_json(path, &sweep.records)?;
            }
            println!(
                "records={} skipped={} max_ratio={}",
                sweep.records.len(),
                sweep.skipped.len(),
                sweep.max_ratio
            );
            handle_lock(lock.as_ref(), &[("t1_max_ratio", sweep.max_ratio)])
        }

        Command::SweepT2 {
            lo,
            hi,
            eps,
            c,
            csv,
            json,
            lock,
        } => {
            let range = sieve(lo, hi, cfg)?;
            let sweep = sweep_density(&range, eps, c, cfg.work_budget)?;
            print_skips(&sweep.skipped);
            if let Some(path) = &csv {
                output::write_csv(path, &sweep.records)?;
            }
            if let Some(path) = &json {
                output::write_json(path, &sweep.records)?;
            }
            println!(
                "records={} skipped={} min_normalized={}",
                sweep.records.len(),
                sweep.skipped.len(),
                sweep.min_normalized
            );
            let budget_skips = sweep.skipped.iter().any(|s| s.note.contains("budget"));
            if sweep.records.is_empty() && budget_skips {
                eprintln!("nrlab: every prime in range exceeded the work budget");
                return Ok(EXIT_BUDGET);
            }
            if let Some(bad) = sweep.records.iter().find(|r| !r.fork_ok) {
                eprintln!("nrlab: reconstruction identity failed at p={}", bad.p);
                return Ok(EXIT_VERIFY);
            }
            handle_lock(lock.as_ref(), &[("t2_min_normalized", sweep.min_normalized)])
        }

        Command::SweepMchin {
            lo,
            hi,
            c,
            csv,
            json,
            lock,
        } => {
            let range = sieve(lo, hi, cfg)?;
            let sweep = sweep_mean_scaled(&range, c, cfg.work_budget)?;
            print_skips(&sweep.skipped);
            if let Some(path) = &csv {
                output::write_csv(path, &sweep.records)?;
            }
            if let Some(path) = &json {
                output::write_json(path, &sweep.records)?;
            }
            println!(
                "records={} skipped={} max_scaled={}",
                sweep.records.len(),
                sweep.skipped.len(),
                sweep.max_scaled
            );
            let budget_skips = sweep.skipped.iter().any(|s| s.note.contains("budget"));
            if sweep.records.is_empty() && budget_skips {
                eprintln!("nrlab: every prime in range exceeded the work budget");
                return Ok(EXIT_BUDGET);
            }
            handle_lock(lock.as_ref(), &[("mchin_max_scaled", sweep.max_scaled)])
        }

        Command::Decompose { p, n } => {
            let p = odd_prime(p)?;
            let d = vinogradov_decompose(n, &p)?;
            println!("{}\t{}", d.q, d.m);
            Ok(EXIT_OK)
        }

        Command::CheckCounting { p, x } => {
            let p = odd_prime(p)?;
            let c = counting_inequality_check(&p, x)?;
            println!("lhs\t{}", c.lhs);
            println!("rhs\t{}", c.rhs);
            println!("ok\t{}", c.ok);
            Ok(if c.ok { EXIT_OK } else { EXIT_VERIFY })
        }

        Command::CaseReport { p, k, c_param } => {
            let p = odd_prime(p)?;
            let report = case_analysis_report(&p, k, c_param)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            let hard_branch = report.branch != CaseBranch::LargeLeastNonresidue;
            Ok(if hard_branch && !report.bound_holds {
                EXIT_VERIFY
            } else {
                EXIT_OK
            })
        }
    }
}
