use std::collections::BTreeSet;

use proptest::prelude::*;
use veechkit::dioph::{
    discriminant_in_x, family_poly, parse_tpoly, vanishing_order, verify_solution, weierstrass_sections, Coeff, Cyc,
    CycloField, FunctionFieldPoly, ProjectiveSolution, TPoly,
};

/// `X (X^m - Z^m)(X^m - t Z^m) - Y^2 Z^(2m-1)` multiplied out factor by factor.
fn factored(m: u32) -> FunctionFieldPoly {
    let k = CycloField::new(m);
    let var = |i| FunctionFieldPoly::var(&k, i);
    let pow = |p: &FunctionFieldPoly, n: u32| (0..n).fold(FunctionFieldPoly::constant(&k, parse_tpoly("1", &k).unwrap()), |a, _| a.mul(p));
    let t = FunctionFieldPoly::constant(&k, parse_tpoly("t", &k).unwrap());
    let (x, y, z) = (var(0), var(1), var(2));
    let a = pow(&x, m).sub(&pow(&z, m));
    let b = pow(&x, m).sub(&t.mul(&pow(&z, m)));
    x.mul(&a).mul(&b).sub(&pow(&y, 2).mul(&pow(&z, 2 * m - 1)))
}

#[test]
fn family_matches_factored_form() {
    for m in 1..=6 {
        let f = family_poly(m).unwrap();
        assert_eq!(f, factored(m), "m = {m}");
        assert_eq!(f.homogeneous_degree(), Some(2 * m + 1));
    }
}

fn sol(src: &str, m: u32) -> ProjectiveSolution {
    ProjectiveSolution::parse(src, &CycloField::new(m)).unwrap()
}

#[test]
fn verification() {
    let f = family_poly(2).unwrap();
    assert!(verify_solution(&f, &sol("0;1;0", 2)));
    assert!(!verify_solution(&f, &sol("1;1;1", 2)));
    for m in [3, 4, 6] {
        let f = family_poly(m).unwrap();
        for nu in 1..=m {
            assert!(verify_solution(&f, &sol(&format!("zeta^{nu};0;1"), m)));
        }
    }
}

fn shown(v: &[ProjectiveSolution]) -> BTreeSet<String> {
    v.iter().map(|s| s.to_string()).collect()
}

#[test]
fn quadratic_family_sections() {
    let w = weierstrass_sections(2).unwrap();
    let expected: BTreeSet<String> = ["[0 : 0 : 1]", "[1 : 0 : 1]", "[-1 : 0 : 1]", "[0 : 1 : 0]"].map(String::from).into();
    assert_eq!(shown(&w.solutions), expected);
    assert_eq!(w.rejected.len(), 2);
    let cands: BTreeSet<_> = w.rejected.iter().map(|r| r.candidate.as_str()).collect();
    assert_eq!(cands, BTreeSet::from(["[sqrt(t) : 0 : 1]", "[-sqrt(t) : 0 : 1]"]));
    for r in &w.rejected {
        assert_eq!(r.reason, "t is not a square in the function field");
        let c = r.certificate.as_ref().unwrap();
        assert!(!c.result);
        assert_eq!((c.factors[0].factor.as_str(), c.factors[0].multiplicity), ("t", 1));
    }
}

#[test]
fn cyclotomic_family_sections() {
    for m in [3u32, 4, 6] {
        let w = weierstrass_sections(m).unwrap();
        let f = family_poly(m).unwrap();
        assert_eq!(w.solutions.len(), m as usize + 2, "m = {m}");
        assert_eq!(w.rejected.len(), m as usize);
        let k = f.field().clone();
        let one = Cyc::int(&k, 1);
        let mut roots = Vec::new();
        for s in &w.solutions {
            assert!(verify_solution(&f, s));
            if s.y.is_zero() && !s.x.is_zero() {
                assert_eq!(s.z, TPoly::constant(one.clone()));
                let x = s.x.coeffs()[0].clone();
                assert_eq!(s.x.degree(), Some(0));
                assert_eq!((0..m).fold(one.clone(), |a, _| a.times(&x)), one);
                roots.push(x);
            }
        }
        assert_eq!(roots.len(), m as usize);
        for (i, a) in roots.iter().enumerate() {
            assert!(roots[i + 1..].iter().all(|b| b != a));
        }
    }
    assert_eq!(weierstrass_sections(3).unwrap().solutions.len(), 5);
}

#[test]
fn discriminant_degenerates_at_one() {
    for m in 1..=4 {
        let f = family_poly(m).unwrap();
        let d = discriminant_in_x(&f);
        let k = f.field();
        // each root of unity collides with one radical root, each collision squared
        assert_eq!(vanishing_order(&d, &Cyc::int(k, 1)), 2 * m as usize, "m = {m}");
        assert_eq!(vanishing_order(&d, &Cyc::int(k, 2)), 0);
    }
}

fn small_tpoly(m: u32) -> impl Strategy<Value = TPoly> {
    prop::collection::vec(-3i64..=3, 1..4).prop_map(move |v| {
        let k = CycloField::new(m);
        let t = parse_tpoly("t", &k).unwrap();
        let mut acc = TPoly::zero();
        for (i, c) in v.iter().enumerate() {
            acc = acc.add(&t.pow(i as u32, &Cyc::int(&k, 1)).scale(&Cyc::int(&k, *c).plus(&Cyc::zeta_pow(&k, i as i64))));
        }
        acc
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn verification_ignores_scaling(c in small_tpoly(3), nu in 1u32..=3, which in 0usize..3) {
        prop_assume!(!c.is_zero());
        let f = family_poly(3).unwrap();
        let base = [format!("zeta^{nu};0;1"), "0;1;0".into(), "1;1;1".into()];
        let s = sol(&base[which], 3);
        prop_assert_eq!(verify_solution(&f, &s.scaled(&c)), verify_solution(&f, &s));
        prop_assert_eq!(s.scaled(&c).canonical(), s.canonical());
    }
}
