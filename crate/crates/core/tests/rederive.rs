use veechkit::affine::matcher::first_isomorphism;
use veechkit::affine::{delaunay, Mode};
use veechkit::corpus;

#[test]
fn four_square_search_finds_the_builtin() {
    let found = corpus::rederive_four_square();
    let builtin = delaunay(&corpus::four_square()).unwrap().surface;
    assert_eq!(found.len(), 1, "candidates: {}", found.len());
    let cells = delaunay(&found[0]).unwrap().surface;
    assert!(first_isomorphism(&cells, &builtin, Mode::HalfTranslation).unwrap().is_some());
}

#[test]
fn staircase_search_finds_the_builtin() {
    for m in [2, 3] {
        let found = corpus::rederive_staircase(m);
        let builtin = delaunay(&corpus::staircase(m).unwrap()).unwrap().surface;
        assert!(found.iter().any(|s| {
            let cells = delaunay(s).unwrap().surface;
            first_isomorphism(&cells, &builtin, Mode::HalfTranslation).unwrap().is_some()
        }));
    }
}
