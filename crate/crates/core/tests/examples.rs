use veechkit::affine::{check_generators, geometric_veech_group, is_affine_auto, kernel_of_d, Presentation, DEFAULT_ORBIT_CAP};
use veechkit::{corpus, fuchsian, sections};
use veechkit::flow::{cylinder_decomposition, Direction, DEFAULT_MAX_SEPARATRIX_CROSSINGS};
use veechkit::{Mat2, Scalar};

#[test]
fn four_square_basics() {
    let s = corpus::four_square();
    assert_eq!(s.surface_type().genus, 2);
    let h = cylinder_decomposition(&s, &Direction::horizontal(), DEFAULT_MAX_SEPARATRIX_CROSSINGS).unwrap();
    let v = cylinder_decomposition(&s, &Direction::vertical(), DEFAULT_MAX_SEPARATRIX_CROSSINGS).unwrap();
    assert_eq!((h.cylinders.len(), v.cylinders.len()), (1, 2));
}

#[test]
fn four_square_veech_group() {
    let s = corpus::four_square();
    let g = geometric_veech_group(&s, DEFAULT_ORBIT_CAP).unwrap();
    assert_eq!(g.index, 3);
    assert!(g.is_conjugate_to_gamma0(2));
    assert!(g.contains(&Mat2::ints(1, 1, 0, 1)).unwrap());
    assert!(g.contains(&Mat2::ints(1, 0, 2, 1)).unwrap());
    assert!(!g.contains(&Mat2::ints(1, 0, 1, 1)).unwrap());
    assert!(is_affine_auto(&s, &Mat2::ints(1, 0, 2, 1)).unwrap().is_some());
    assert!(is_affine_auto(&s, &Mat2::ints(1, 0, 1, 1)).unwrap().is_none());
}

#[test]
fn four_square_kernel() {
    let k = kernel_of_d(&corpus::four_square()).unwrap();
    assert_eq!(k.order, 8);
    assert_eq!(k.orientation_preserving, 4);
    assert_eq!(k.presentation, Presentation::TranslationsAndInvolutions);
    assert!(k.cyclic_translations);
    assert_eq!(k.reversals_fix_two_core_points, Some(true));
}

#[test]
fn octagon_generators_and_kernel() {
    let s = corpus::octagon();
    let (r, t) = corpus::regular_4n_gon_generators(2).unwrap();
    let report = check_generators(&s, &[r, t, Mat2::ints(1, 1, 0, 1)]).unwrap();
    assert_eq!(report.checks.iter().map(|c| c.passes).collect::<Vec<_>>(), vec![true, true, false]);
    let k = kernel_of_d(&s).unwrap();
    assert_eq!(k.order, 2);
    assert_eq!(k.presentation, Presentation::Involution);
}

fn veech_maps(s: &veechkit::FlatSurface) -> Vec<veechkit::affine::AffineAuto> {
    let g = geometric_veech_group(s, DEFAULT_ORBIT_CAP).unwrap();
    sections::generator_maps(s, &g.generators).unwrap()
}

#[test]
fn four_square_sections() {
    let s = corpus::four_square();
    let k = kernel_of_d(&s).unwrap();
    let c = sections::section_candidates(&s, &veech_maps(&s), &k).unwrap();
    assert_eq!(c.count, 6);
    let notes = sections::candidate_filter_note(&c);
    assert_eq!(notes.iter().filter(|n| n.critical).count(), 2);
    assert_eq!(notes.iter().filter(|n| !n.critical).count(), 4);
    // these are the fixed points of the hyperelliptic involution
    let candidates: Vec<_> = c.points.iter().map(|p| p.point.clone()).collect();
    let hyperelliptic = k.elements.iter().filter(|e| e.involution).any(|e| {
        let f = sections::fixed_set(&s, &e.map).unwrap();
        f.points.len() == 6 && f.points.iter().all(|p| candidates.contains(p))
    });
    assert!(hyperelliptic);
}

#[test]
fn four_square_quotient() {
    let s = corpus::four_square();
    let k = kernel_of_d(&s).unwrap();
    let q = sections::quotient_by_kernel(&s, &k).unwrap();
    assert!(q.riemann_hurwitz);
    assert_eq!((q.genus_y, q.branch_points), (0, 4));
    let poles = q.surface.cone_points().iter().filter(|c| c.angle_pi == 1).count();
    assert_eq!(poles, 4);
    // two of the branch points lie on the core curve of the horizontal cylinder
    let mut on_core: Vec<usize> = q.ramification.iter().filter(|r| r.x.y == Scalar::frac(1, 2)).map(|r| r.branch_point).collect();
    on_core.sort_unstable();
    on_core.dedup();
    assert_eq!(on_core.len(), 2);
}

#[test]
fn octagon_sections() {
    let s = corpus::octagon();
    let (r, t) = corpus::regular_4n_gon_generators(2).unwrap();
    let gens = sections::generator_maps(&s, &[r, t]).unwrap();
    let k = kernel_of_d(&s).unwrap();
    let c = sections::section_candidates(&s, &gens, &k).unwrap();
    assert_eq!(c.count, 2);
    let notes = sections::candidate_filter_note(&c);
    let angles: Vec<(bool, u32)> = notes.iter().map(|n| (n.critical, n.angle_pi)).collect();
    assert!(angles.contains(&(true, 6)) && angles.contains(&(false, 2)));
    assert!(notes.iter().all(|n| n.signature_unique));
    let q = sections::quotient_by_kernel(&s, &k).unwrap();
    assert_eq!((q.genus_y, q.branch_points), (0, 6));
    assert!(q.ramification.iter().all(|r| r.index == 2));
    assert!(q.riemann_hurwitz);
}

#[test]
fn octagon_triangle_group() {
    let (r, t) = corpus::regular_4n_gon_generators(2).unwrap();
    let gens = fuchsian::generators(&[r, t]).unwrap();
    let elems = fuchsian::enumerate(&gens, 6);
    let est = fuchsian::b0_c0_estimate(&elems).unwrap();
    assert_eq!(est.b0, Scalar::int(2) + Scalar::int(2) * Scalar::sqrt_int(2));
    let area = fuchsian::gauss_bonnet_area(&fuchsian::FuchsianSignature::new(0, vec![Some(4), None, None])).unwrap();
    let found = fuchsian::small_c_search(&gens, area.value, 2, 6).unwrap();
    assert!(found.normalized_c >= 1.0 && found.normalized_c < area.value - 1.0);
    let ford = fuchsian::ford_region(&elems).unwrap();
    assert!((ford.area - area.value).abs() < 1e-2);
    assert_eq!(ford.cusp_estimate(), 2);
    assert!(fuchsian::shimizu_check(&elems).unwrap().pass);
}
