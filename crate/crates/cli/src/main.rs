use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use eisenlab::corering::arith::is_prime;
use eisenlab::hecke::EisensteinOptions;
use eisenlab::massey::{run_selftest, selftest::DEFAULT_SEED};
use eisenlab_cli::{
    full_record, invariants_record, massey_conclusions, read_records, render, run_sweep, stats_table, verify_records,
    Failure, MasseyConclusion, ResultRecord, SweepConfig,
};

#[derive(Parser)]
#[command(name = "eisenlab", version, about = "Eisenstein-local Hecke invariants at prime level")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Merel's number, ord_s(zeta) and the Lecouturier identity.
    Invariants {
        #[arg(long = "N")]
        n: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        s_max: Option<u32>,
    },
    /// Rank, t-sequence, Newton polygon and components of the Hecke algebra.
    Hecke {
        #[arg(long = "N")]
        n: u64,
        #[arg(long)]
        p: u64,
        /// Good prime used for the generator of the Eisenstein ideal.
        #[arg(long)]
        ell: Option<u64>,
        /// Working precision exponent M (coefficients in Z/p^M).
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Full records for every prime N < max-N with N = 1 (mod p).
    Sweep {
        #[arg(long)]
        p: u64,
        #[arg(long = "max-N")]
        max_n: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        resume: bool,
        #[arg(long)]
        workers: Option<usize>,
        /// Leave timings out so reruns are byte-identical.
        #[arg(long)]
        no_timing: bool,
    },
    /// Rank frequencies r(d) against the heuristic g(d).
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Check the rank, Merel and zeta equivalences on a sweep file.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Randomized and exhaustive checks of the Massey product engine.
    MasseySelftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn check_primes(n: u64, p: u64) -> Result<(), Failure> {
    for x in [n, p] {
        if !is_prime(x) {
            return Err(Failure::Usage(format!("{x} is not a prime")));
        }
    }
    Ok(())
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string(value).expect("output serializes"));
    } else {
        print!("{}", text());
    }
}

#[derive(Serialize)]
struct HeckeOutput<'a> {
    #[serde(flatten)]
    record: &'a ResultRecord,
    derived_massey: Vec<MasseyConclusion>,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let json = cli.json;
    match cli.command {
        Command::Invariants { n, p, s_max } => {
            check_primes(n, p)?;
            if (n - 1) % p != 0 {
                return Err(Failure::Usage(format!("p = {p} does not divide N - 1 = {}", n - 1)));
            }
            let r = invariants_record(n, p, s_max)?;
            emit(json, &r, || render::invariants(&r));
        }
        Command::Hecke { n, p, ell, precision } => {
            check_primes(n, p)?;
            let opts = EisensteinOptions { ell, precision, ..Default::default() };
            let r = full_record(n, p, &opts)?;
            let out = HeckeOutput { record: &r, derived_massey: massey_conclusions(&r) };
            emit(json, &out, || render::hecke(&r));
        }
        Command::Sweep { p, max_n, out, resume, workers, no_timing } => {
            let cfg = SweepConfig { resume, workers, omit_timing: no_timing, ..SweepConfig::new(p, max_n, out) };
            let summary = run_sweep(&cfg, |r| {
                if !json {
                    eprintln!("N = {:>6}  e = {}", r.n, r.e.unwrap_or(0));
                }
            })?;
            let value = serde_json::json!({
                "levels": summary.levels,
                "skipped": summary.skipped,
                "written": summary.written,
            });
            emit(json, &value, || {
                format!("{} levels, {} already present, {} written\n", summary.levels, summary.skipped, summary.written)
            });
        }
        Command::Stats { input } => {
            let t = stats_table(&read_records(&input)?)?;
            emit(json, &t, || render::stats(&t));
        }
        Command::Verify { input } => {
            let v = verify_records(&read_records(&input)?);
            emit(json, &v, || render::verify(&v));
            if !v.passed() {
                return Err(Failure::Verification("verification failed".into()));
            }
        }
        Command::MasseySelftest { seed } => {
            let r = run_selftest(seed)?;
            emit(json, &r, || render::selftest(&r));
            if !r.passed() {
                return Err(Failure::Verification("massey self-test failed".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
