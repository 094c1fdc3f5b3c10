//! The persisted row type and its JSON-lines encoding.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use eisenlab::corering::CappedValuation;
use eisenlab::hecke::{Component, Diagnostics, EisensteinOptions, EisensteinReport, EisensteinLocal};
use eisenlab::invariants::{lecouturier_check, merel_number, merel_report, sylow_exponent, zeta_report};

use crate::Failure;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecordKind {
    Complete,
    InvariantsOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MerelSummary {
    pub value: u64,
    /// Absent when `p` does not divide `N - 1`.
    pub pth_power: Option<bool>,
    /// `p^s`-power status for `1 <= s <= t`.
    pub power_s: BTreeMap<u32, bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeckeSummary {
    pub ell: Option<u64>,
    pub precision: u32,
    /// Coefficients of the distinguished polynomial, constant term first.
    pub f: Vec<u64>,
    pub diagnostics: Diagnostics,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub invariants_ms: u64,
    pub hecke_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub schema_version: u32,
    #[serde(rename = "N")]
    pub n: u64,
    pub p: u64,
    pub t: u32,
    pub kind: RecordKind,
    pub merel: MerelSummary,
    pub ord_zeta: BTreeMap<u32, CappedValuation>,
    pub lecouturier: BTreeMap<u32, bool>,
    pub e: Option<usize>,
    pub t_seq: Option<Vec<CappedValuation>>,
    pub np: Option<Vec<(usize, u32)>>,
    pub components: Option<Vec<Component>>,
    pub hecke: Option<HeckeSummary>,
    pub timing: Option<Timing>,
}

impl ResultRecord {
    pub fn key(&self) -> (u64, u64) {
        (self.n, self.p)
    }

    pub fn ord1(&self) -> Option<CappedValuation> {
        self.ord_zeta.get(&1).copied()
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }

    pub fn from_line(line: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(line)
    }
}

/// Merel, zeta and Lecouturier data for `1 <= s <= s_max` (default `t`).
///
/// When `p` does not divide `N - 1` only Merel's number is filled in.
pub fn invariants_record(n: u64, p: u64, s_max: Option<u32>) -> Result<ResultRecord, Failure> {
    let start = Instant::now();
    let t = match sylow_exponent(n, p) {
        Ok(t) => t,
        Err(eisenlab::Error::NotDivisor { .. }) => 0,
        Err(e) => return Err(e.into()),
    };
    let mut merel = MerelSummary { value: merel_number(n)?, pth_power: None, power_s: BTreeMap::new() };
    let mut ord_zeta = BTreeMap::new();
    let mut lecouturier = BTreeMap::new();
    if t > 0 {
        let s_max = s_max.unwrap_or(t);
        let mr = merel_report(n, p, s_max)?;
        merel.pth_power = Some(mr.is_pth_power());
        merel.power_s = mr.is_power_s;
        ord_zeta = zeta_report(n, p, s_max, None)?.ord_s;
        for s in 1..=s_max {
            lecouturier.insert(s, lecouturier_check(n, p, s)?);
        }
    }
    Ok(ResultRecord {
        schema_version: SCHEMA_VERSION,
        n,
        p,
        t,
        kind: RecordKind::InvariantsOnly,
        merel,
        ord_zeta,
        lecouturier,
        e: None,
        t_seq: None,
        np: None,
        components: None,
        hecke: None,
        timing: Some(Timing { invariants_ms: start.elapsed().as_millis() as u64, hecke_ms: None }),
    })
}

impl ResultRecord {
    /// Fills in the Hecke fields from a report for the same `(N, p)`.
    pub fn attach_hecke(&mut self, report: EisensteinReport, elapsed_ms: u64) {
        debug_assert_eq!((report.n, report.p), (self.n, self.p));
        self.kind = RecordKind::Complete;
        self.e = Some(report.e);
        self.t_seq = Some(report.t_seq);
        self.np = Some(report.newton_polygon.vertices);
        self.components = Some(report.components);
        self.hecke = Some(HeckeSummary {
            ell: report.ell,
            precision: report.precision,
            f: report.f,
            diagnostics: report.diagnostics,
        });
        if let Some(timing) = &mut self.timing {
            timing.hecke_ms = Some(elapsed_ms);
        }
    }
}

/// The invariants record extended by the Eisenstein-local factor.
pub fn full_record(n: u64, p: u64, opts: &EisensteinOptions) -> Result<ResultRecord, Failure> {
    let mut record = invariants_record(n, p, None)?;
    let start = Instant::now();
    let report = EisensteinLocal::compute(n, p, opts)?.into_report();
    record.attach_hecke(report, start.elapsed().as_millis() as u64);
    Ok(record)
}

/// One line per `n` with `1 <= n < e`: the Massey power `<M>^{n+1}` vanishes
/// modulo `p^{t_{n+1}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MasseyConclusion {
    pub power: usize,
    pub exponent: CappedValuation,
}

pub fn massey_conclusions(record: &ResultRecord) -> Vec<MasseyConclusion> {
    let (Some(e), Some(t_seq)) = (record.e, &record.t_seq) else { return Vec::new() };
    (1..e).map(|n| MasseyConclusion { power: n + 1, exponent: t_seq[n] }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_through_a_line() {
        let r = full_record(181, 5, &EisensteinOptions::default()).unwrap();
        let line = r.to_line();
        assert!(!line.contains('\n'));
        assert_eq!(ResultRecord::from_line(&line).unwrap(), r);
        assert_eq!(r.kind, RecordKind::Complete);
        assert_eq!(r.e, Some(3));
    }

    #[test]
    fn capped_values_use_geq() {
        let mut r = invariants_record(11, 5, None).unwrap();
        r.ord_zeta.insert(1, CappedValuation::AtLeast(6));
        let line = r.to_line();
        assert!(line.contains(r#""1":{"geq":6}"#), "{line}");
        assert!(line.contains(r#""kind":"invariants-only""#));
        assert_eq!(ResultRecord::from_line(&line).unwrap(), r);
    }

    #[test]
    fn trivial_level_has_no_zeta_data() {
        let mut r = invariants_record(13, 5, None).unwrap();
        assert_eq!(r.t, 0);
        assert_eq!(r.merel.pth_power, None);
        assert!(r.ord_zeta.is_empty());
        r.attach_hecke(eisenlab::hecke::eisenstein_local_factor(13, 5).unwrap(), 0);
        assert_eq!(r.e, Some(0));
        assert!(massey_conclusions(&r).is_empty());
    }

    #[test]
    fn conclusions_read_the_t_sequence() {
        let r = full_record(3001, 5, &EisensteinOptions::default()).unwrap();
        let c = massey_conclusions(&r);
        assert_eq!(c.len(), 5);
        assert_eq!(c[0].power, 2);
        assert_eq!(c[0].exponent, r.t_seq.as_ref().unwrap()[1]);
    }
}
