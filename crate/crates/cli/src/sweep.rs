//! Resumable JSON-lines sweeps over the levels `N = 1 (mod p)`.

use std::collections::BTreeSet;
use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;

use eisenlab::corering::arith::{is_prime, primes_below};
use eisenlab::hecke::EisensteinOptions;

use crate::record::{full_record, ResultRecord};
use crate::Failure;

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub p: u64,
    /// Levels run over primes `N < max_n`.
    pub max_n: u64,
    pub out: PathBuf,
    pub resume: bool,
    /// Defaults to the available parallelism.
    pub workers: Option<usize>,
    /// Leave timing out of the records so that reruns are byte-identical.
    pub omit_timing: bool,
    pub options: EisensteinOptions,
}

impl SweepConfig {
    pub fn new(p: u64, max_n: u64, out: impl Into<PathBuf>) -> Self {
        SweepConfig {
            p,
            max_n,
            out: out.into(),
            resume: false,
            workers: None,
            omit_timing: false,
            options: EisensteinOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSummary {
    pub levels: usize,
    pub skipped: usize,
    pub written: usize,
}

/// Primes `N < max_n` with `N = 1 (mod p)`, increasing.
pub fn sweep_levels(p: u64, max_n: u64) -> Vec<u64> {
    primes_below(max_n).into_iter().filter(|&n| n % p == 1).collect()
}

/// Parses a JSON-lines file. A final line without a newline is a torn
/// write and is ignored.
pub fn read_records(path: &Path) -> Result<Vec<ResultRecord>, Failure> {
    let text = fs::read_to_string(path)?;
    parse_records(&text, path)
}

fn complete_part(text: &str) -> &str {
    match text.rfind('\n') {
        Some(i) => &text[..=i],
        None => "",
    }
}

fn parse_records(text: &str, path: &Path) -> Result<Vec<ResultRecord>, Failure> {
    complete_part(text)
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            ResultRecord::from_line(l)
                .map_err(|e| Failure::Data(format!("{}:{}: {e}", path.display(), i + 1)))
        })
        .collect()
}

/// Runs the sweep, appending one line per finished level and calling
/// `progress` after each write.
///
/// With `resume`, levels already present in the output are skipped and a
/// torn final line is cut off first. Without it the output must not exist.
pub fn run_sweep(cfg: &SweepConfig, mut progress: impl FnMut(&ResultRecord)) -> Result<SweepSummary, Failure> {
    if !is_prime(cfg.p) {
        return Err(Failure::Usage(format!("p = {} is not a prime", cfg.p)));
    }
    let mut done = BTreeSet::new();
    if cfg.out.exists() {
        if !cfg.resume {
            return Err(Failure::Usage(format!("{} exists; pass --resume to continue it", cfg.out.display())));
        }
        let text = fs::read_to_string(&cfg.out)?;
        let keep = complete_part(&text).len();
        for r in parse_records(&text, &cfg.out)? {
            done.insert(r.key());
        }
        if keep < text.len() {
            OpenOptions::new().write(true).open(&cfg.out)?.set_len(keep as u64)?;
        }
    }
    let levels = sweep_levels(cfg.p, cfg.max_n);
    let todo: Vec<u64> = levels.iter().copied().filter(|&n| !done.contains(&(n, cfg.p))).collect();
    let mut writer = BufWriter::new(OpenOptions::new().create(true).append(true).open(&cfg.out)?);
    let workers = cfg
        .workers
        .unwrap_or_else(|| thread::available_parallelism().map_or(1, |n| n.get()))
        .clamp(1, todo.len().max(1));

    let next = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let mut written = 0;
    let outcome = thread::scope(|scope| {
        let (tx, rx) = mpsc::channel();
        for _ in 0..workers {
            let tx = tx.clone();
            let (next, stop, todo) = (&next, &stop, &todo);
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= todo.len() || stop.load(Ordering::SeqCst) {
                    break;
                }
                let mut r = full_record(todo[i], cfg.p, &cfg.options);
                if cfg.omit_timing {
                    if let Ok(r) = &mut r {
                        r.timing = None;
                    }
                }
                if tx.send(r).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for r in rx {
            let r = match r {
                Ok(r) => r,
                Err(e) => {
                    stop.store(true, Ordering::SeqCst);
                    return Err(e);
                }
            };
            let written_ok = writeln!(writer, "{}", r.to_line()).and_then(|_| writer.flush());
            if let Err(e) = written_ok {
                stop.store(true, Ordering::SeqCst);
                return Err(e.into());
            }
            written += 1;
            progress(&r);
        }
        Ok(())
    });
    outcome?;
    Ok(SweepSummary { levels: levels.len(), skipped: levels.len() - todo.len(), written })
}

/// Creates or truncates `path` and writes `records` to it.
pub fn write_records(path: &Path, records: &[ResultRecord]) -> Result<(), Failure> {
    let mut w = BufWriter::new(File::create(path)?);
    for r in records {
        writeln!(w, "{}", r.to_line())?;
    }
    w.flush()?;
    Ok(())
}
