use veechkit::affine::{geometric_veech_group, DEFAULT_ORBIT_CAP};
use proptest::prelude::*;
use veechkit::bounds::{self, lemma_audit, prop_bound, BoundsInput, SgnCase};
use veechkit::{corpus, FlatSurface, Scalar};

fn measured(s: &FlatSurface) -> bounds::Measurement {
    let g = geometric_veech_group(s, DEFAULT_ORBIT_CAP).unwrap();
    bounds::measure(s, &g.generators, Some(g.signature()), 6).unwrap()
}

fn audit_passes(r: &bounds::BoundsReport, lemma: &str) -> bool {
    r.audits.iter().find(|a| a.lemma == lemma).unwrap_or_else(|| panic!("no audit {lemma}")).pass
}

#[test]
fn four_square_bounds() {
    let m = measured(&corpus::four_square());
    let inp = &m.data.input;
    assert_eq!(inp.modulus, Scalar::int(4));
    assert_eq!((inp.b0.clone(), inp.c0.clone()), (Scalar::one(), Scalar::int(2)));
    assert_eq!((inp.kernel_order, inp.sgn, inp.genus), (8, SgnCase::PlusMinus, 2));
    let r = lemma_audit(&m.data).unwrap();
    assert_eq!(r.prop_bound.high, Scalar::int(30));
    assert_eq!((r.i0.formula, r.i0.reported, r.i0.floored), (0, 1, true));
    assert_eq!(m.data.sections, Some(6));
    for a in &r.audits {
        assert!(a.pass, "{a:?}");
    }
}

#[test]
fn three_step_staircase_is_extremal() {
    let m = measured(&corpus::staircase(3).unwrap());
    let r = lemma_audit(&m.data).unwrap();
    let inp = &m.data.input;
    let d = inp.moduli_dimension() as usize;
    assert_eq!((inp.n0 + inp.n1) / 2, 2 * d);
    assert_eq!(inp.kernel_order as usize, 4 * d);
    for a in &r.audits {
        assert!(a.pass, "{a:?}");
    }
    assert!(audit_passes(&r, "average inequality"));
}

#[test]
fn torus_has_no_moduli() {
    let m = measured(&corpus::torus());
    assert!(matches!(lemma_audit(&m.data), Err(bounds::BoundsError::MissingData(_))));
}

fn arb_input() -> impl Strategy<Value = BoundsInput> {
    (1i64..50, 1i64..20, 1i64..50, 1i64..20, 1i64..20, 1u64..40, 0u32..5, 0u32..5, any::<bool>()).prop_map(
        |(mn, md, bn, bd, c0, k, g, n, plus)| BoundsInput {
            modulus: Scalar::frac(mn, md),
            b0: Scalar::frac(bn, bd),
            c0: Scalar::int(c0),
            kernel_order: k,
            sgn: if plus { SgnCase::Plus } else { SgnCase::PlusMinus },
            genus: g + 2,
            punctures: n,
            n0: 1,
            n1: 1,
            quotient_genus: 0,
            signature: None,
        },
    )
}

fn ge(a: &Scalar, b: &Scalar) -> bool {
    a.cmp_checked(b).unwrap().is_ge()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn fallback_dominates(inp in arb_input()) {
        let mut plus = inp.clone();
        plus.sgn = SgnCase::Plus;
        let p = prop_bound(&plus).unwrap();
        prop_assert!(ge(&p.fallback, &p.high));
    }

    #[test]
    fn monotone_in_c0_and_kernel(inp in arb_input(), dc in 0i64..5, dk in 0u64..5) {
        let base = prop_bound(&inp).unwrap();
        let mut more = inp.clone();
        more.c0 = &inp.c0 + &Scalar::int(dc);
        more.kernel_order += dk;
        let bigger = prop_bound(&more).unwrap();
        prop_assert!(ge(&bigger.high, &base.high));
        prop_assert!(ge(&bigger.low, &base.low));
    }
}
