use pdcalc::arith::{Assignment, BaseRing, PrimeLevel};
use pdcalc::invariant::{closed_invariant_forms, membership_check, rank_scan, GroupSpec, InvariantSetup};
use pdcalc::linalg::membership;

fn setup(group: GroupSpec, p: u64, m: u32, ring: &BaseRing) -> InvariantSetup {
    let pl = PrimeLevel::new(p, m).unwrap();
    InvariantSetup::new(group, pl, ring.clone(), Assignment::new(), 2 * pl.pm() as u32).unwrap()
}

#[test]
fn kernel_generators_span_exactly_the_closed_forms_over_z8() {
    let z8 = BaseRing::zmod(2, 3).unwrap();
    for group in [GroupSpec::Additive, GroupSpec::Multiplicative] {
        let s = setup(group.clone(), 2, 1, &z8);
        let res = closed_invariant_forms(&s).unwrap();
        for a in 0..8 {
            for b in 0..8 {
                let v = vec![z8.from_int(a), z8.from_int(b)];
                let killed = membership_check(&s, &v).unwrap().in_kernel;
                let spanned = membership(&z8, &v, &res.kernel).unwrap().is_some();
                assert_eq!(killed, spanned, "{} at ({a}, {b})", group.name());
            }
        }
    }
}

#[test]
fn field_extension_does_not_change_the_rank() {
    for (group, p, m) in [
        (GroupSpec::Additive, 2, 2),
        (GroupSpec::Multiplicative, 2, 2),
        (GroupSpec::Additive, 3, 1),
        (GroupSpec::Multiplicative, 5, 1),
    ] {
        let fp = BaseRing::prime_field(p).unwrap();
        let fq = BaseRing::galois_field(p, 2).unwrap();
        let a = closed_invariant_forms(&setup(group.clone(), p, m, &fp)).unwrap();
        let b = closed_invariant_forms(&setup(group.clone(), p, m, &fq)).unwrap();
        assert_eq!(a.rank(), b.rank(), "{} p={p} m={m}", group.name());
        assert!(a.kernel_matches_d && b.kernel_matches_d);
    }
}

#[test]
fn reduction_mod_p_of_the_z9_kernel_lies_in_the_f3_kernel() {
    let z9 = BaseRing::zmod(3, 2).unwrap();
    let f3 = BaseRing::prime_field(3).unwrap();
    for group in [GroupSpec::Additive, GroupSpec::Multiplicative] {
        let over_z9 = closed_invariant_forms(&setup(group.clone(), 3, 1, &z9)).unwrap();
        let s3 = setup(group.clone(), 3, 1, &f3);
        for g in &over_z9.kernel {
            let reduced: Vec<_> = g.iter().map(|x| f3.from_bigint(&z9.lift(x).unwrap().as_constant().unwrap().to_integer())).collect();
            assert!(membership_check(&s3, &reduced).unwrap().in_kernel, "{}", group.name());
        }
    }
}

#[test]
fn generic_scan_rank_matches_the_rational_function_field() {
    let pl = PrimeLevel::new(3, 1).unwrap();
    let q = BaseRing::rational(3, "lambda").unwrap();
    let s = InvariantSetup::new(GroupSpec::legendre(), pl, q, Assignment::new(), 6).unwrap();
    let generic = closed_invariant_forms(&s).unwrap();
    let scan = rank_scan(pl, 1, 6).unwrap();
    assert_eq!(Some(scan.generic_rank), generic.rank());
}

#[test]
fn supersingular_points_are_the_roots_of_the_hasse_polynomial() {
    // sum_i C(r, i)^2 lambda^i with r = (p - 1) / 2.
    for p in [5u64, 7] {
        let r = (p - 1) / 2;
        let binom = |n: u64, k: u64| (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1));
        let hasse = |l: u64| (0..=r).map(|i| binom(r, i).pow(2) * l.pow(i as u32)).sum::<u64>() % p;
        let roots: Vec<String> = (2..p).filter(|&l| hasse(l) == 0).map(|l| l.to_string()).collect();
        let scan = rank_scan(PrimeLevel::new(p, 1).unwrap(), 1, 2 * p as u32).unwrap();
        let mut flagged: Vec<_> = scan.supersingular().iter().map(|r| r.lambda.clone()).collect();
        flagged.sort();
        assert_eq!(flagged, roots, "p = {p}");
    }
}
