//! Acceptance criteria 1 to 11, one status line each on stderr.
//!
//! Criterion 8 (full `N < 10000` statistics for p = 11, 13) takes about ten
//! minutes on one core and only runs when `EISENLAB_FULL_STATS=1`. It reads
//! `p11.jsonl` and `p13.jsonl` from `EISENLAB_SWEEP_DIR` when that is set
//! and sweeps from scratch otherwise.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use eisenlab::corering::{is_power, t_sequence, CappedValuation, Modulus, PadicPoly};
use eisenlab::hecke::{two_smallest_good_primes, EisensteinLocal, EisensteinOptions, EisensteinReport};
use eisenlab::invariants::{lecouturier_check, merel_number, ord_zeta};
use eisenlab::massey::{run_selftest, selftest::DEFAULT_SEED};
use eisenlab_cli::{full_record, read_records, run_sweep, stats_table, sweep_levels, ResultRecord, SweepConfig};

struct Outcome {
    passed: bool,
    detail: String,
}

fn line(text: &str) {
    // Written past the test harness capture so the lines always show.
    let _ = writeln!(std::io::stderr(), "{text}");
}

fn run(id: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut o = f();
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            o.passed = false;
            o.detail.push_str(&format!("; over the {limit:?} budget"));
        }
    }
    let status = if o.passed { "PASS" } else { "FAIL" };
    line(&format!("criterion {id:>2}: {status} ({:.1}s) {}", elapsed.as_secs_f64(), o.detail));
    o.passed
}

fn report(n: u64, p: u64, ell: Option<u64>) -> EisensteinReport {
    let opts = EisensteinOptions { ell, ..Default::default() };
    EisensteinLocal::compute(n, p, &opts).unwrap().into_report()
}

fn degrees(r: &EisensteinReport) -> Vec<usize> {
    r.components.iter().map(|c| c.degree).collect()
}

fn ord1(n: u64, p: u64) -> CappedValuation {
    ord_zeta(n, p, 1, None).unwrap()
}

fn sweep(p: u64, max_n: u64) -> Vec<ResultRecord> {
    let opts = EisensteinOptions::default();
    sweep_levels(p, max_n).into_iter().map(|n| full_record(n, p, &opts).unwrap()).collect()
}

fn criterion_1() -> Outcome {
    let m = merel_number(337).unwrap();
    let power = is_power(m, 337, 7).unwrap();
    Outcome { passed: m == 227 && !power, detail: format!("merel(337) = {m}, 7th power: {power}") }
}

fn criterion_2(cache: &mut BTreeMap<u64, EisensteinReport>) -> Outcome {
    let rows: [(u64, usize, Option<u32>); 5] =
        [(181, 3, Some(3)), (1571, 3, None), (2621, 3, None), (3671, 5, Some(3)), (3001, 6, Some(7))];
    let mut passed = true;
    let mut parts = Vec::new();
    for (n, e, ord) in rows {
        let start = Instant::now();
        let r = report(n, 5, None);
        let o = ord1(n, 5);
        let slow = start.elapsed() > Duration::from_secs(60);
        let ok = r.e == e && ord.map_or(true, |v| o == CappedValuation::Exact(v)) && !slow;
        passed &= ok;
        parts.push(format!("{n}: e={} ord_1={o}{}", r.e, if ok { "" } else { " MISMATCH" }));
        cache.insert(n, r);
    }
    Outcome { passed, detail: parts.join(", ") }
}

fn criterion_3(cache: &mut BTreeMap<u64, EisensteinReport>) -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    let r3001 = cache.entry(3001).or_insert_with(|| report(3001, 5, None)).clone();
    let ok = r3001.newton_polygon.vertices == vec![(0, 3), (1, 2), (3, 1), (6, 0)] && degrees(&r3001) == vec![1, 2, 3];
    passed &= ok;
    parts.push(format!("3001: np {:?} comps {:?}", r3001.newton_polygon.vertices, degrees(&r3001)));
    let rows: [(u64, usize, Option<u32>, Vec<usize>); 3] =
        [(751, 2, None, vec![1, 1]), (5651, 4, Some(5), vec![1, 3]), (6451, 3, None, vec![1, 2])];
    for (n, e, ord, comps) in rows {
        let start = Instant::now();
        let r = cache.entry(n).or_insert_with(|| report(n, 5, None)).clone();
        let o = ord1(n, 5);
        let ok = r.e == e
            && degrees(&r) == comps
            && ord.map_or(true, |v| o == CappedValuation::Exact(v))
            && start.elapsed() < Duration::from_secs(15 * 60);
        passed &= ok;
        parts.push(format!("{n}: e={} ord_1={o} comps {:?}", r.e, degrees(&r)));
    }
    Outcome { passed, detail: parts.join(", ") }
}

fn criterion_4(p5: &[ResultRecord]) -> Outcome {
    let bad: Vec<u64> = p5
        .iter()
        .filter(|r| r.hecke.as_ref().unwrap().diagnostics.f0_valuation != CappedValuation::Exact(r.t))
        .map(|r| r.n)
        .collect();
    Outcome { passed: bad.is_empty(), detail: format!("{} levels, violations {bad:?}", p5.len()) }
}

fn criterion_5(sweeps: &BTreeMap<u64, Vec<ResultRecord>>) -> Outcome {
    let mut bad = Vec::new();
    let mut count = 0;
    let mut lecouturier = 0;
    for p in [5, 7] {
        for r in &sweeps[&p] {
            count += 1;
            let e2 = r.e.unwrap() >= 2;
            let merel = r.merel.pth_power.unwrap();
            let ord2 = r.ord1().unwrap().lower_bound() >= 2;
            if e2 != merel || e2 != ord2 {
                bad.push((r.n, p));
            }
            for s in 1..=r.t {
                lecouturier += 1;
                if !lecouturier_check(r.n, p, s).unwrap() {
                    bad.push((r.n, p));
                }
            }
        }
    }
    Outcome {
        passed: bad.is_empty(),
        detail: format!("{count} levels, {lecouturier} Lecouturier checks, violations {bad:?}"),
    }
}

fn criterion_6(sweeps: &BTreeMap<u64, Vec<ResultRecord>>) -> Outcome {
    let mut bad = Vec::new();
    let mut rank_two = 0;
    for (p, records) in sweeps {
        for r in records {
            let e2 = r.e == Some(2);
            rank_two += usize::from(e2);
            if e2 != (r.ord1() == Some(CappedValuation::Exact(2))) {
                bad.push((r.n, *p));
            }
        }
    }
    Outcome { passed: bad.is_empty(), detail: format!("{rank_two} levels of rank 2, violations {bad:?}") }
}

fn criterion_7() -> Outcome {
    let counts: Vec<usize> = [5, 7, 11, 13].iter().map(|&p| sweep_levels(p, 10_000).len()).collect();
    Outcome { passed: counts == [306, 203, 125, 99], detail: format!("counts {counts:?}") }
}

fn criterion_8() -> Outcome {
    let expected: [(u64, [u64; 3]); 2] = [(11, [912, 80, 8]), (13, [929, 61, 10])];
    let dir = std::env::var_os("EISENLAB_SWEEP_DIR").map(PathBuf::from);
    let scratch = tempfile::tempdir().unwrap();
    let mut passed = true;
    let mut parts = Vec::new();
    for (p, r) in expected {
        let records = match &dir {
            Some(dir) => read_records(&dir.join(format!("p{p}.jsonl"))).unwrap(),
            None => {
                let path = scratch.path().join(format!("p{p}.jsonl"));
                run_sweep(&SweepConfig::new(p, 10_000, &path), |_| {}).unwrap();
                read_records(&path).unwrap()
            }
        };
        let t = stats_table(&records).unwrap();
        let got: Vec<u64> = (1..=3).map(|d| (t.r.get(&d).copied().unwrap_or(0.0) * 1000.0).round() as u64).collect();
        let ok = got == r && t.n == sweep_levels(p, 10_000).len() && t.r.len() == 3;
        passed &= ok;
        parts.push(format!("p={p}: n={} r={:?}", t.n, t.r));
    }
    Outcome { passed, detail: parts.join(", ") }
}

/// Largest `r <= M` with `g(eps) = 0` in `(Z/p^r)[eps]/(eps^(i+1))`,
/// evaluated with plain truncated-series arithmetic.
fn oracle_t(raw: &[u128], p: u128, big_m: u32, i: usize) -> u32 {
    let mut best = 0;
    for r in 1..=big_m {
        let q = p.pow(r);
        // Horner: acc = acc * eps + c, truncated at eps^(i+1).
        let mut acc = vec![0u128; i + 1];
        for &c in raw.iter().rev() {
            acc.rotate_right(1);
            acc[0] = c % q;
        }
        if acc.iter().all(|&a| a % q == 0) {
            best = r;
        }
    }
    best
}

fn criterion_9() -> Outcome {
    let seed = 9_000_001u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = 0;
    let mut bad = Vec::new();
    while cases < 240 {
        let p: u64 = if rng.gen_bool(0.5) { 5 } else { 7 };
        let big_m = rng.gen_range(1..=3u32);
        let deg = rng.gen_range(1..=4usize);
        let q = (p as u128).pow(big_m);
        let mut raw: Vec<u128> = (0..deg)
            .map(|_| {
                // Bias towards high valuations so that capped readings occur.
                let k = rng.gen_range(1..=big_m);
                (p as u128).pow(k) * rng.gen_range(0..q) % q
            })
            .collect();
        raw.push(1);
        let g = PadicPoly::from_raw(raw.clone(), Modulus::new(p, big_m).unwrap());
        let seq = t_sequence(&g).unwrap();
        cases += 1;
        for (i, v) in seq.iter().enumerate() {
            let o = oracle_t(&raw, p as u128, big_m, i);
            let agrees = match v {
                CappedValuation::Exact(t) => *t == o && o < big_m,
                CappedValuation::AtLeast(m) => *m == big_m && o == big_m,
            };
            if !agrees {
                bad.push((raw.clone(), i));
            }
        }
    }
    Outcome { passed: bad.is_empty(), detail: format!("{cases} polynomials, seed {seed}, mismatches {}", bad.len()) }
}

fn criterion_10() -> Outcome {
    let r = run_selftest(DEFAULT_SEED).unwrap();
    let required = [
        "d o d = 0",
        "Leibniz rule",
        "<a>^2 = [a cup a]",
        "full vanishing iff all four coordinate relations",
        "index shift and the (2,1) relation",
        "<a>^k on Z/5 vanishes iff k <= 4",
    ];
    let mut passed = r.passed();
    let mut missing = Vec::new();
    for name in required {
        match r.check(name) {
            Some(c) if name.starts_with("full vanishing") => passed &= c.cases >= 100,
            Some(_) => {}
            None => missing.push(name),
        }
    }
    passed &= missing.is_empty();
    let failed: Vec<&str> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let shift = r.check("index shift and the (2,1) relation").map_or("", |c| c.detail.as_str());
    Outcome {
        passed,
        detail: format!("seed {}, {} checks, failed {failed:?}, missing {missing:?}; index shift: {shift}", r.seed, r.checks.len()),
    }
}

fn criterion_11(cache: &BTreeMap<u64, EisensteinReport>) -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for (&n, first) in cache {
        let (l1, l2) = two_smallest_good_primes(n, 5).unwrap();
        let a = if first.ell == Some(l1) { first.clone() } else { report(n, 5, Some(l1)) };
        let b = report(n, 5, Some(l2));
        let ok = a.e == b.e
            && a.t_seq == b.t_seq
            && a.newton_polygon == b.newton_polygon
            && a.components == b.components;
        passed &= ok;
        parts.push(format!("{n}: ell {l1},{l2}{}", if ok { "" } else { " DIFFER" }));
    }
    Outcome { passed, detail: parts.join(", ") }
}

#[test]
fn acceptance() {
    line("acceptance criteria");
    let mut results = Vec::new();
    let mut cache = BTreeMap::new();
    results.push(run("1", Some(Duration::from_secs(1)), criterion_1));
    results.push(run("2", None, || criterion_2(&mut cache)));
    results.push(run("3", None, || criterion_3(&mut cache)));

    let start = Instant::now();
    let sweeps: BTreeMap<u64, Vec<ResultRecord>> = [5, 7, 11, 13].iter().map(|&p| (p, sweep(p, 2000))).collect();
    line(&format!("              sweeps p in {{5,7,11,13}}, N < 2000: {:.1}s", start.elapsed().as_secs_f64()));
    results.push(run("4", Some(Duration::from_secs(30 * 60)), || criterion_4(&sweeps[&5])));
    results.push(run("5", None, || criterion_5(&sweeps)));
    results.push(run("6", None, || criterion_6(&sweeps)));
    results.push(run("7", Some(Duration::from_secs(1)), criterion_7));
    if std::env::var("EISENLAB_FULL_STATS").is_ok_and(|v| v == "1") {
        results.push(run("8", None, criterion_8));
    } else {
        line("criterion  8: SKIPPED (opt-in; set EISENLAB_FULL_STATS=1)");
    }
    results.push(run("9", Some(Duration::from_secs(120)), criterion_9));
    results.push(run("10", Some(Duration::from_secs(300)), criterion_10));
    results.push(run("11", None, || criterion_11(&cache)));
    assert!(results.iter().all(|&ok| ok), "some acceptance criteria failed");
}

#[test]
#[ignore = "about ten minutes on one core; the acceptance test runs it with EISENLAB_FULL_STATS=1"]
fn full_statistics() {
    assert!(run("8", None, criterion_8));
}
