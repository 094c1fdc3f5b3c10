//! A seeded battery of identity checks for the Massey engine.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::brute::{brute_force_power_vanishes, CochainCensus};
use super::cochain::{coboundary, cocycle_generators, cup, vanishes_in_h2, CoboundaryTester, Cochain};
use super::coords::{coordinate_relation, index_shift, CharacterPair};
use super::defining::{massey_power, search_massey_power, DefiningSystem, PowerSearch, ProductSystem};
use super::group::FiniteGroup;
use super::module::CoeffModule;
use super::unipotent::{deformation_is_homomorphism, is_homomorphism, unipotent_concatenation, unipotent_matrices};
use crate::corering::zmod::Modulus;
use crate::Result;

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestCheck {
    pub name: String,
    pub cases: usize,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<SelftestCheck>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&SelftestCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// A group with a module, and the character pair when the module is
/// `End(chi_1 + chi_2)`.
pub struct Setting {
    pub name: String,
    pub group: FiniteGroup,
    pub module: CoeffModule,
    pub pair: Option<CharacterPair>,
}

fn powers(group: &FiniteGroup, gen_images: impl Fn(usize) -> u64) -> Vec<u64> {
    (0..group.order()).map(gen_images).collect()
}

fn matrix_setting(name: &str, group: FiniteGroup, pair: CharacterPair) -> Setting {
    let module = pair.module(&group).expect("valid characters");
    Setting { name: name.into(), group, module, pair: Some(pair) }
}

/// Matrix-coefficient settings on groups of order at most 25.
pub fn matrix_settings() -> Vec<Setting> {
    let mut out = Vec::new();
    let z4 = FiniteGroup::cyclic(4);
    let m25 = Modulus::new(5, 2).unwrap();
    let chi = powers(&z4, |g| 7u64.pow(g as u32) % 25);
    out.push(matrix_setting("Z/4, Z/25, (chi, 1)", z4.clone(), CharacterPair::new(&z4, m25, chi, vec![1; 4]).unwrap()));
    let z5 = FiniteGroup::cyclic(5);
    let chi = powers(&z5, |g| 6u64.pow(g as u32) % 25);
    out.push(matrix_setting("Z/5, Z/25, (1, chi)", z5.clone(), CharacterPair::new(&z5, m25, vec![1; 5], chi).unwrap()));
    out.push(matrix_setting("Z/5, F_5, trivial", z5.clone(), CharacterPair::trivial(&z5, Modulus::new(5, 1).unwrap())));
    let s3 = FiniteGroup::symmetric3();
    let m7 = Modulus::new(7, 1).unwrap();
    // Sign: transpositions are the odd positions 1, 2, 5 of the lexicographic list.
    let sign: Vec<u64> = (0..6).map(|g| if [1, 2, 5].contains(&g) { 6 } else { 1 }).collect();
    out.push(matrix_setting("S3, F_7, (sgn, 1)", s3.clone(), CharacterPair::new(&s3, m7, sign, vec![1; 6]).unwrap()));
    let z6 = FiniteGroup::cyclic(6);
    let chi = powers(&z6, |g| 3u64.pow(g as u32) % 7);
    let chi2 = powers(&z6, |g| 2u64.pow(g as u32) % 7);
    out.push(matrix_setting("Z/6, F_7, (chi, chi^2)", z6.clone(), CharacterPair::new(&z6, m7, chi, chi2).unwrap()));
    let z55 = FiniteGroup::product(&z5, &z5);
    out.push(matrix_setting("Z/5 x Z/5, F_5, trivial", z55.clone(), CharacterPair::trivial(&z55, Modulus::new(5, 1).unwrap())));
    out
}

/// Settings used for identities that hold for any module.
pub fn all_settings() -> Vec<Setting> {
    let mut out = matrix_settings();
    let z5 = FiniteGroup::cyclic(5);
    let f5 = Modulus::new(5, 1).unwrap();
    out.push(Setting { name: "Z/5, F_5".into(), module: CoeffModule::trivial(&z5, f5), group: z5.clone(), pair: None });
    let rho: Vec<Vec<u64>> = (0..5).map(|g| vec![1, 0, g as u64, 1]).collect();
    out.push(Setting {
        name: "Z/5, End(unipotent), F_5".into(),
        module: CoeffModule::endomorphisms(&z5, f5, 2, &rho).unwrap(),
        group: z5,
        pair: None,
    });
    let d4 = FiniteGroup::dihedral(4);
    let eps: Vec<u64> = (0..8).map(|g| if g % 2 == 1 { 24 } else { 1 }).collect();
    let pair = CharacterPair::new(&d4, Modulus::new(5, 2).unwrap(), eps, vec![1; 8]).unwrap();
    out.push(matrix_setting("D4, Z/25, (eps, 1)", d4, pair));
    let z66 = FiniteGroup::product(&FiniteGroup::cyclic(6), &FiniteGroup::cyclic(6));
    out.push(Setting {
        name: "Z/6 x Z/6, F_7".into(),
        module: CoeffModule::trivial(&z66, Modulus::new(7, 1).unwrap()),
        group: z66,
        pair: None,
    });
    out
}

fn random_cocycle(gens: &[Cochain], template: &Cochain, q: u64, rng: &mut impl Rng) -> Cochain {
    gens.iter().fold(template.scale(0), |acc, g| acc.add(&g.scale(rng.gen_range(0..q))).unwrap())
}

/// A random defining system for `<A_1>^r` built step by step from random
/// cocycles; `None` if some intermediate obstruction is not a coboundary.
pub fn random_defining_system(
    s: &Setting,
    r: usize,
    gens: &[Cochain],
    tester: &CoboundaryTester,
    rng: &mut impl Rng,
) -> Result<Option<DefiningSystem>> {
    let q = s.module.modulus().q() as u64;
    let template = Cochain::zero(&s.group, &s.module, 1)?;
    let mut d = DefiningSystem::new(vec![random_cocycle(gens, &template, q, rng)], &s.group, &s.module)?;
    for i in 2..r {
        let probe = DefiningSystem::new(d.chain().to_vec(), &s.group, &s.module)?;
        let c = massey_power(&probe, &s.group, &s.module)?;
        debug_assert_eq!(probe.power(), i);
        let Some(x) = tester.primitive(&c)? else { return Ok(None) };
        d = d.extend(x.add(&random_cocycle(gens, &template, q, rng))?, &s.group, &s.module)?;
    }
    Ok(Some(d))
}

fn record(checks: &mut Vec<SelftestCheck>, name: &str, cases: usize, failures: usize, detail: String) {
    checks.push(SelftestCheck { name: name.into(), cases, passed: failures == 0 && cases > 0, detail });
}

fn check_dd(checks: &mut Vec<SelftestCheck>) -> Result<()> {
    let mut cases = 0;
    let mut failures = 0;
    for s in all_settings() {
        for deg in 0..=1 {
            let zero = Cochain::zero(&s.group, &s.module, deg)?;
            for i in 0..zero.table().len() {
                let mut t = zero.table().to_vec();
                t[i] = 1;
                let e = Cochain::from_table(&s.group, &s.module, deg, t)?;
                let dd = coboundary(&coboundary(&e, &s.group, &s.module)?, &s.group, &s.module)?;
                cases += 1;
                failures += usize::from(!dd.is_zero());
            }
        }
    }
    record(checks, "d o d = 0", cases, failures, "every basis cochain of degree 0 and 1, groups of order <= 36".into());
    Ok(())
}

fn check_leibniz(checks: &mut Vec<SelftestCheck>, rng: &mut impl Rng) -> Result<()> {
    let mut cases = 0;
    let mut failures = 0;
    for s in all_settings().into_iter().filter(|s| s.module.has_pairing() && s.group.order() <= 25) {
        for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1), (0, 2), (2, 0)] {
            for _ in 0..3 {
                let a = Cochain::random(&s.group, &s.module, i, rng)?;
                let b = Cochain::random(&s.group, &s.module, j, rng)?;
                let lhs = coboundary(&cup(&a, &b, &s.group, &s.module)?, &s.group, &s.module)?;
                let first = cup(&coboundary(&a, &s.group, &s.module)?, &b, &s.group, &s.module)?;
                let second = cup(&a, &coboundary(&b, &s.group, &s.module)?, &s.group, &s.module)?;
                let rhs = if i % 2 == 0 { first.add(&second)? } else { first.sub(&second)? };
                cases += 1;
                failures += usize::from(lhs != rhs);
            }
        }
    }
    record(checks, "Leibniz rule", cases, failures, "random cochains with i + j <= 2".into());
    Ok(())
}

fn check_square(checks: &mut Vec<SelftestCheck>, rng: &mut impl Rng) -> Result<()> {
    let mut cases = 0;
    let mut failures = 0;
    let mut identities = 0;
    for s in matrix_settings().into_iter().chain(all_settings().into_iter().filter(|s| s.name == "Z/5, F_5")) {
        let gens = cocycle_generators(&s.group, &s.module)?;
        let tester = CoboundaryTester::new(&s.group, &s.module, 1)?;
        let q = s.module.modulus().q() as u64;
        let template = Cochain::zero(&s.group, &s.module, 1)?;
        for _ in 0..8 {
            let a = random_cocycle(&gens, &template, q, rng);
            let d = DefiningSystem::new(vec![a.clone()], &s.group, &s.module)?;
            let c = massey_power(&d, &s.group, &s.module)?;
            let square = cup(&a, &a, &s.group, &s.module)?;
            cases += 1;
            if c == square {
                identities += 1;
            } else {
                failures += 1;
            }
            let by_tester = tester.primitive(&square)?.is_some();
            let by_search = matches!(search_massey_power(&a, 2, &s.group, &s.module, 1)?, PowerSearch::Vanishes(..));
            failures += usize::from(by_tester != by_search);
        }
    }
    record(checks, "<a>^2 = [a cup a]", cases, failures, format!("{identities} identities on random 1-cocycles"));
    Ok(())
}

fn check_coordinates(checks: &mut Vec<SelftestCheck>, rng: &mut impl Rng) -> Result<()> {
    let mut cases = 0;
    let mut failures = 0;
    let (mut vanishing, mut attempts) = (0, 0);
    let settings = matrix_settings();
    let per_setting = 120 / settings.len() + 1;
    for s in &settings {
        let pair = s.pair.as_ref().unwrap();
        let gens = cocycle_generators(&s.group, &s.module)?;
        let tester = CoboundaryTester::new(&s.group, &s.module, 1)?;
        let mut made = 0;
        while made < per_setting && attempts < 20_000 {
            attempts += 1;
            let r = rng.gen_range(2..=4);
            let Some(d) = random_defining_system(s, r, &gens, &tester, rng)? else { continue };
            made += 1;
            let c = massey_power(&d, &s.group, &s.module)?;
            let full = tester.primitive(&c)?.is_some();
            let mut all = true;
            for st in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                all &= coordinate_relation(&d, st, pair, &s.group)?;
            }
            cases += 1;
            vanishing += usize::from(full);
            failures += usize::from(full != all);
        }
    }
    record(
        checks,
        "full vanishing iff all four coordinate relations",
        cases,
        failures,
        format!("{vanishing} of {cases} random defining systems vanish"),
    );
    Ok(())
}

/// What the index shift gives for one defining system.
struct ShiftOutcome {
    /// `D'` satisfies the defining-system law.
    law: bool,
    shifted_vanishes: bool,
    relation_21: bool,
}

fn shift_case(s: &Setting, d: &DefiningSystem) -> Result<ShiftOutcome> {
    let pair = s.pair.as_ref().unwrap();
    let shifted = index_shift(d, pair, &s.group)?;
    let relation_21 = coordinate_relation(d, (2, 1), pair, &s.group)?;
    let Ok(d2) = DefiningSystem::new(shifted.chain.clone(), &s.group, &shifted.module) else {
        return Ok(ShiftOutcome { law: false, shifted_vanishes: false, relation_21 });
    };
    let c2 = massey_power(&d2, &s.group, &shifted.module)?;
    let shifted_vanishes = vanishes_in_h2(&c2, &s.group, &shifted.module)?.is_some();
    Ok(ShiftOutcome { law: true, shifted_vanishes, relation_21 })
}

/// The `r = 3` system `A_1 = x E_21`, `A_2 = y E_11` on `Z/5 x Z/5` over
/// `F_5`, with `x, y` the two coordinate homomorphisms. Its shifted system
/// is zero, so it vanishes, while the `(2,1)` obstruction is `x cup y`,
/// which is not a coboundary.
pub fn shift_counterexample() -> Result<(Setting, DefiningSystem)> {
    let s = matrix_settings().into_iter().find(|s| s.name.starts_with("Z/5 x Z/5")).unwrap();
    let a1 = Cochain::from_fn(&s.group, &s.module, 1, |g| vec![0, 0, (g[0] / 5) as u64, 0])?;
    let a2 = Cochain::from_fn(&s.group, &s.module, 1, |g| vec![(g[0] % 5) as u64, 0, 0, 0])?;
    let d = DefiningSystem::new(vec![a1, a2], &s.group, &s.module)?;
    Ok((s, d))
}

fn check_index_shift(checks: &mut Vec<SelftestCheck>, rng: &mut impl Rng) -> Result<()> {
    let mut cases = 0;
    let mut failures = 0;
    let mut related = 0;
    let mut literal_mismatches = 0;
    let mut grid_cases = 0;
    let mut tally = |o: ShiftOutcome, literal_expected: bool, failures: &mut usize| {
        cases += 1;
        related += usize::from(o.relation_21);
        // D' is a defining system, and the (2,1) relation forces D' to vanish.
        let mut bad = !o.law || (o.relation_21 && !o.shifted_vanishes);
        if o.shifted_vanishes != o.relation_21 {
            if literal_expected {
                bad = true;
            } else {
                literal_mismatches += 1;
            }
        }
        *failures += usize::from(bad);
    };
    // Grid of cocycles on Z/5 x Z/5 over F_5 with r = 3.
    let settings = matrix_settings();
    let grid = settings.iter().find(|s| s.name.starts_with("Z/5 x Z/5")).unwrap();
    let g = &grid.group;
    let hom = |a: u64, b: u64| move |x: usize| (a * (x / 5) as u64 + b * (x % 5) as u64) % 5;
    let lines: [(u64, u64); 4] = [(0, 0), (1, 0), (0, 1), (1, 2)];
    let gens = cocycle_generators(g, &grid.module)?;
    let tester = CoboundaryTester::new(g, &grid.module, 1)?;
    let template = Cochain::zero(g, &grid.module, 1)?;
    for &d11 in &lines[..3] {
        for &d22 in &lines[..3] {
            for &o12 in &lines {
                for &o21 in &lines {
                    let (f11, f12, f21, f22) = (hom(d11.0, d11.1), hom(o12.0, o12.1), hom(o21.0, o21.1), hom(d22.0, d22.1));
                    let a1 = Cochain::from_fn(g, &grid.module, 1, |x| vec![f11(x[0]), f12(x[0]), f21(x[0]), f22(x[0])])?;
                    let d1 = DefiningSystem::new(vec![a1], g, &grid.module)?;
                    let c = massey_power(&d1, g, &grid.module)?;
                    let Some(x) = tester.primitive(&c)? else { continue };
                    for _ in 0..2 {
                        let a2 = x.add(&random_cocycle(&gens, &template, 5, rng))?;
                        let d = d1.extend(a2, g, &grid.module)?;
                        grid_cases += 1;
                        tally(shift_case(grid, &d)?, false, &mut failures);
                    }
                }
            }
        }
    }
    // Random systems with r = 3, 4 on cyclic groups and S3, where cup
    // products of 1-cocycles vanish and the literal equivalence is expected.
    for s in settings.iter().filter(|s| !s.name.starts_with("Z/5 x Z/5")) {
        let gens = cocycle_generators(&s.group, &s.module)?;
        let tester = CoboundaryTester::new(&s.group, &s.module, 1)?;
        let mut made = 0;
        for _ in 0..400 {
            if made == 12 {
                break;
            }
            let r = rng.gen_range(3..=4);
            let Some(d) = random_defining_system(s, r, &gens, &tester, rng)? else { continue };
            made += 1;
            tally(shift_case(s, &d)?, true, &mut failures);
        }
    }
    let (s, d) = shift_counterexample()?;
    let o = shift_case(&s, &d)?;
    let counterexample_ok = o.law && o.shifted_vanishes && !o.relation_21;
    failures += usize::from(!counterexample_ok);
    record(
        checks,
        "index shift and the (2,1) relation",
        cases,
        failures,
        format!(
            "{related} of {cases} systems satisfy the (2,1) relation; shifted system valid in all; \
             (2,1) relation => shifted vanishing in all; converse fails in {literal_mismatches} of {grid_cases} \
             Z/5 x Z/5 cases (x E_21, y E_11 is a counterexample) and holds in all others"
        ),
    );
    Ok(())
}

fn check_powers_on_z5(checks: &mut Vec<SelftestCheck>) -> Result<()> {
    let g = FiniteGroup::cyclic(5);
    let v = CoeffModule::trivial(&g, Modulus::new(5, 1).unwrap());
    let a = Cochain::from_fn(&g, &v, 1, |x| vec![x[0] as u64])?;
    let census = CochainCensus::new(&g, &v)?;
    let mut failures = 0;
    let mut pattern = Vec::new();
    for k in 2..=5 {
        let engine = matches!(search_massey_power(&a, k, &g, &v, 25)?, PowerSearch::Vanishes(..));
        let brute = brute_force_power_vanishes(&a, k, &g, &v, &census)?;
        failures += usize::from(engine != brute) + usize::from(engine != (k <= 4));
        pattern.push(format!("k={k}:{}", if engine { "vanishes" } else { "nonzero" }));
    }
    record(checks, "<a>^k on Z/5 vanishes iff k <= 4", 4, failures, pattern.join(" "));
    Ok(())
}

fn check_deformations(checks: &mut Vec<SelftestCheck>, rng: &mut impl Rng) -> Result<()> {
    let mut cases = 0;
    let mut failures = 0;
    for s in matrix_settings().iter().filter(|s| s.group.order() <= 6) {
        let pair = s.pair.as_ref().unwrap();
        let m = s.module.modulus();
        let rho: Vec<Vec<u64>> = (0..s.group.order()).map(|g| vec![pair.chi(1)[g], 0, 0, pair.chi(2)[g]]).collect();
        let gens = cocycle_generators(&s.group, &s.module)?;
        let tester = CoboundaryTester::new(&s.group, &s.module, 1)?;
        let template = Cochain::zero(&s.group, &s.module, 1)?;
        let q = m.q() as u64;
        let mut made = 0;
        for _ in 0..200 {
            if made == 6 {
                break;
            }
            let r = rng.gen_range(2..=4);
            let Some(d) = random_defining_system(s, r, &gens, &tester, rng)? else { continue };
            made += 1;
            // The law holds, so the truncated deformation is a homomorphism.
            cases += 1;
            failures += usize::from(!deformation_is_homomorphism(&s.group, &rho, 2, d.chain(), m));
            // A perturbed chain breaks both the law and the homomorphism property together.
            let mut bad = d.chain().to_vec();
            let idx = rng.gen_range(0..bad.len());
            let mut t = bad[idx].table().to_vec();
            let pos = rng.gen_range(0..t.len());
            t[pos] = (t[pos] + rng.gen_range(1..q)) % q;
            bad[idx] = Cochain::from_table(&s.group, &s.module, 1, t)?;
            let law = DefiningSystem::new(bad.clone(), &s.group, &s.module).is_ok();
            cases += 1;
            failures += usize::from(law != deformation_is_homomorphism(&s.group, &rho, 2, &bad, m));
            // One more step: nu_r is a homomorphism iff dM_r = c(D).
            let c = massey_power(&d, &s.group, &s.module)?;
            let mut candidates = vec![Cochain::random(&s.group, &s.module, 1, rng)?];
            if let Some(x) = tester.primitive(&c)? {
                candidates.push(x.add(&random_cocycle(&gens, &template, q, rng))?);
            }
            for mr in candidates {
                let solves = coboundary(&mr, &s.group, &s.module)? == c;
                let mut chain = d.chain().to_vec();
                chain.push(mr);
                cases += 1;
                failures += usize::from(solves != deformation_is_homomorphism(&s.group, &rho, 2, &chain, m));
            }
        }
    }
    record(checks, "defining systems are truncated deformations", cases, failures, "both directions".into());
    Ok(())
}

fn check_unipotent(checks: &mut Vec<SelftestCheck>) -> Result<()> {
    let g = FiniteGroup::cyclic(5);
    let m = Modulus::new(5, 1).unwrap();
    let v = CoeffModule::trivial(&g, m);
    let a = Cochain::from_fn(&g, &v, 1, |x| vec![x[0] as u64])?;
    let mut failures = 0;
    let mut cases = 0;
    // n = 2: the cup product of two homomorphisms of Z/5 vanishes.
    let two = ProductSystem::new(2, [((1, 1), a.clone()), ((2, 2), a.scale(2))].into_iter().collect(), &g, &v)?;
    cases += 1;
    match unipotent_concatenation(&two, &g, &v)? {
        Some(nu) => failures += usize::from(!is_homomorphism(&g, &nu, 3, m)),
        None => failures += 1,
    }
    // n = 5 with every a(i, j) taken from one defining system for <a>^5:
    // the obstruction is nonzero and no corner entry at all works.
    let PowerSearch::NonVanishing { .. } = search_massey_power(&a, 5, &g, &v, 25)? else {
        failures += 1;
        record(checks, "unipotent concatenation", cases, failures, "<a>^5 unexpectedly vanished".into());
        return Ok(());
    };
    let mut chain = vec![a.clone()];
    let tester = CoboundaryTester::new(&g, &v, 1)?;
    for i in 2..5 {
        let d = DefiningSystem::new(chain.clone(), &g, &v)?;
        debug_assert_eq!(d.power(), i);
        let x = tester.primitive(&massey_power(&d, &g, &v)?)?.expect("<a>^i vanishes for i <= 4");
        chain.push(x);
    }
    let d = DefiningSystem::new(chain, &g, &v)?;
    let sys = ProductSystem::from_power(&d, &g, &v)?;
    cases += 1;
    failures += usize::from(unipotent_concatenation(&sys, &g, &v)?.is_some());
    let census = CochainCensus::new(&g, &v)?;
    let working = census
        .all()
        .iter()
        .filter(|corner| is_homomorphism(&g, &unipotent_matrices(&sys, corner, &g, m), 6, m))
        .count();
    cases += 1;
    failures += usize::from(working != 0);
    record(
        checks,
        "unipotent concatenation",
        cases,
        failures,
        format!("3x3 lift found; 6x6 lift: {working} of {} corners work", census.all().len()),
    );
    Ok(())
}

/// Run every check with the given seed.
pub fn run_selftest(seed: u64) -> Result<SelftestReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    check_dd(&mut checks)?;
    check_leibniz(&mut checks, &mut rng)?;
    check_square(&mut checks, &mut rng)?;
    check_coordinates(&mut checks, &mut rng)?;
    check_index_shift(&mut checks, &mut rng)?;
    check_powers_on_z5(&mut checks)?;
    check_deformations(&mut checks, &mut rng)?;
    check_unipotent(&mut checks)?;
    Ok(SelftestReport { seed, checks })
}
