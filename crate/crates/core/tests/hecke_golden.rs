use std::time::{Duration, Instant};

use eisenlab::corering::CappedValuation::Exact;
use eisenlab::hecke::{eisenstein_local_factor, rank_consistency_check, EisensteinReport};

fn run(n: u64) -> EisensteinReport {
    let start = Instant::now();
    let r = eisenstein_local_factor(n, 5).unwrap();
    let took = start.elapsed();
    println!("N = {n}: e = {} in {took:?}, diagnostics {:?}", r.e, r.diagnostics);
    assert!(took < Duration::from_secs(60), "N = {n} took {took:?}");
    assert!(rank_consistency_check(&r).ok(), "{:?}", rank_consistency_check(&r));
    r
}

fn degrees(r: &EisensteinReport) -> Vec<usize> {
    r.components.iter().map(|c| c.degree).collect()
}

#[test]
fn rank_three_at_181() {
    let r = run(181);
    assert_eq!(r.e, 3);
    assert_eq!(r.first_zero(), Some(4));
}

#[test]
fn level_3001() {
    let r = run(3001);
    assert_eq!(r.e, 6);
    assert_eq!(r.newton_polygon.vertices, vec![(0, 3), (1, 2), (3, 1), (6, 0)]);
    assert_eq!(degrees(&r), vec![1, 2, 3]);
    assert!(r.components.iter().all(|c| c.resolved));
    assert_eq!(r.t_seq[0], Exact(3));
}

#[test]
fn levels_with_two_or_more_components() {
    let r = run(751);
    assert_eq!(r.e, 2);
    assert_eq!(degrees(&r), vec![1, 1]);
    let r = run(5651);
    assert_eq!(r.e, 4);
    assert_eq!(degrees(&r), vec![1, 3]);
    let r = run(6451);
    assert_eq!(r.e, 3);
    assert_eq!(degrees(&r), vec![1, 2]);
}

#[test]
fn ranks_three_and_five() {
    for n in [1571, 2621] {
        assert_eq!(run(n).e, 3);
    }
    assert_eq!(run(3671).e, 5);
}

#[test]
fn independent_of_the_good_prime() {
    use eisenlab::hecke::{two_smallest_good_primes, EisensteinLocal, EisensteinOptions};
    for n in [181u64, 751, 3001] {
        let (a, b) = two_smallest_good_primes(n, 5).unwrap();
        let ra = EisensteinLocal::compute(n, 5, &EisensteinOptions { ell: Some(a), ..Default::default() }).unwrap();
        let rb = EisensteinLocal::compute(n, 5, &EisensteinOptions { ell: Some(b), ..Default::default() }).unwrap();
        let (ra, rb) = (ra.report(), rb.report());
        assert_eq!((ra.e, &ra.t_seq, &ra.newton_polygon, &ra.components), (rb.e, &rb.t_seq, &rb.newton_polygon, &rb.components));
    }
}

#[test]
fn t_sequence_survives_unit_rescaling() {
    use eisenlab::corering::t_sequence;
    let r = eisenstein_local_factor(3001, 5).unwrap();
    let f = r.polynomial().unwrap();
    let m = f.modulus();
    for c in [2u128, 3, 7, 12, 9999] {
        // f(c y) / c^e is again distinguished with the same invariants.
        let g = f.scale_variable(c).scale(m.inv(m.pow(c, r.e as u64)).unwrap());
        let seq = t_sequence(&g.shift(1)).unwrap();
        assert_eq!(seq[1..], r.t_seq[..]);
    }
}

#[test]
fn higher_precision_agrees() {
    use eisenlab::hecke::{EisensteinLocal, EisensteinOptions};
    let base = eisenstein_local_factor(751, 5).unwrap();
    let opts = EisensteinOptions { precision: Some(base.precision + 3), ..Default::default() };
    let hi = EisensteinLocal::compute(751, 5, &opts).unwrap().into_report();
    assert_eq!((base.e, &base.t_seq, &base.components), (hi.e, &hi.t_seq, &hi.components));
    let low = hi.polynomial().unwrap().reduce_to(base.polynomial().unwrap().modulus());
    assert_eq!(low, base.polynomial().unwrap());
}
