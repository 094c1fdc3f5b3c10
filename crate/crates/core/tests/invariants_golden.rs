use eisenlab::corering::{is_power, CappedValuation::Exact};
use eisenlab::invariants::{
    lecouturier_check, merel_number, merel_report, ord_zeta, sylow_exponent, zeta_report,
};

#[test]
fn merel_337() {
    assert_eq!(merel_number(337).unwrap(), 227);
    assert!(!is_power(227, 337, 7).unwrap());
    assert!(!merel_report(337, 7, 1).unwrap().is_pth_power());
}

#[test]
fn table_orders() {
    for (n, ord) in [(181, 3), (3001, 7), (3671, 3), (5651, 5)] {
        assert_eq!(ord_zeta(n, 5, 1, Some(10)).unwrap(), Exact(ord), "N = {n}");
    }
}

#[test]
fn orders_at_every_s() {
    let r = zeta_report(3001, 5, 3, None).unwrap();
    assert_eq!(r.cap, 126);
    assert!(!r.degenerate);
    for (s, ord) in &r.ord_s {
        assert!(ord.lower_bound() >= 1, "s = {s}");
    }
    assert_eq!(r.ord_s[&1], Exact(7));
}

#[test]
fn lecouturier_at_full_depth() {
    let t = sylow_exponent(3001, 5).unwrap();
    for s in 1..=t {
        assert!(lecouturier_check(3001, 5, s).unwrap());
    }
}
