//! Plain-text tables for standard output.

use std::fmt::Write;

use eisenlab::massey::SelftestReport;

use crate::record::{massey_conclusions, ResultRecord};
use crate::stats::StatsTable;
use crate::verify::VerifyReport;

fn join<T: ToString>(xs: impl IntoIterator<Item = T>, sep: &str) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

pub fn invariants(r: &ResultRecord) -> String {
    let mut s = String::new();
    writeln!(s, "N = {}, p = {}, t = v_p(N-1) = {}", r.n, r.p, r.t).unwrap();
    let power = match r.merel.pth_power {
        Some(true) => format!("a {}-th power", r.p),
        Some(false) => format!("not a {}-th power", r.p),
        None => "p does not divide N - 1".into(),
    };
    writeln!(s, "merel number     {} ({power})", r.merel.value).unwrap();
    for (k, v) in &r.merel.power_s {
        writeln!(s, "  p^{k}-th power  {v}").unwrap();
    }
    for (k, v) in &r.ord_zeta {
        writeln!(s, "ord_{k}(zeta)      {v}").unwrap();
    }
    if !r.lecouturier.is_empty() {
        let ok = r.lecouturier.values().all(|&b| b);
        writeln!(s, "lecouturier      {}", if ok { "holds" } else { "FAILS" }).unwrap();
    }
    s
}

pub fn hecke(r: &ResultRecord) -> String {
    let mut s = invariants(r);
    let Some(e) = r.e else { return s };
    writeln!(s, "rank e           {e}").unwrap();
    if let Some(h) = &r.hecke {
        if let Some(ell) = h.ell {
            writeln!(s, "good prime       {ell}").unwrap();
        }
        writeln!(s, "precision        p^{}", h.precision).unwrap();
        writeln!(s, "f (const first)  [{}]", join(&h.f, ", ")).unwrap();
    }
    if let Some(t) = &r.t_seq {
        writeln!(s, "t_1..t_(e+1)     ({})", join(t, ", ")).unwrap();
    }
    if let Some(np) = &r.np {
        writeln!(s, "newton polygon   {}", join(np.iter().map(|(i, v)| format!("({i},{v})")), " ")).unwrap();
    }
    if let Some(c) = &r.components {
        writeln!(s, "components       ({})", join(c.iter().map(|c| c.degree), ",")).unwrap();
        for c in c {
            let tag = if c.resolved { "" } else { " (unresolved)" };
            writeln!(s, "  degree {} slope {}{tag}", c.degree, c.slope_string()).unwrap();
        }
    }
    for m in massey_conclusions(r) {
        writeln!(s, "derived: <M>_D^{} vanishes mod p^{}", m.power, m.exponent).unwrap();
    }
    s
}

pub fn stats(t: &StatsTable) -> String {
    let mut s = String::new();
    writeln!(s, "p = {}, levels up to {}, n = {}", t.p, t.x, t.n).unwrap();
    writeln!(s, "{:>3} {:>6} {:>7} {:>7}", "d", "count", "r(d)", "g(d)").unwrap();
    let top = t.r.keys().chain(t.g.keys()).copied().max().unwrap_or(0);
    let bottom = t.r.keys().chain(t.g.keys()).copied().min().unwrap_or(0);
    for d in bottom..=top {
        let count = t.counts.get(&d).copied().unwrap_or(0);
        let r = t.r.get(&d).copied().unwrap_or(0.0);
        let g = t.g.get(&d).map_or("-".to_string(), |g| format!("{g:.3}"));
        writeln!(s, "{d:>3} {count:>6} {r:>7.3} {g:>7}").unwrap();
    }
    s
}

pub fn verify(v: &VerifyReport) -> String {
    let mut s = String::new();
    writeln!(s, "{} records, {} with Hecke data", v.records, v.complete).unwrap();
    for c in &v.checks {
        let status = match (c.passed(), c.fatal) {
            (true, _) => "ok",
            (false, true) => "FAIL",
            (false, false) => "note",
        };
        writeln!(s, "[{status:>4}] {} ({} checked)", c.name, c.checked).unwrap();
        if !c.violations.is_empty() {
            let shown = join(c.violations.iter().take(20).map(|(n, p)| format!("({n},{p})")), " ");
            writeln!(s, "       violations: {shown}").unwrap();
        }
        if !c.detail.is_empty() {
            writeln!(s, "       {}", c.detail).unwrap();
        }
    }
    writeln!(s, "{}", if v.passed() { "verification passed" } else { "verification FAILED" }).unwrap();
    s
}

pub fn selftest(r: &SelftestReport) -> String {
    let mut s = String::new();
    writeln!(s, "seed {}", r.seed).unwrap();
    for c in &r.checks {
        let status = if c.passed { "ok" } else { "FAIL" };
        writeln!(s, "[{status:>4}] {} ({} cases): {}", c.name, c.cases, c.detail).unwrap();
    }
    writeln!(s, "{}", if r.passed() { "all checks passed" } else { "self-test FAILED" }).unwrap();
    s
}
