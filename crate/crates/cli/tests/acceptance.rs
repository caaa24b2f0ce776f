//! End-to-end acceptance checks, one line per criterion.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use veechkit::affine::{check_generators, geometric_veech_group, kernel_of_d, translation_equivalent, Presentation, DEFAULT_ORBIT_CAP};
use veechkit::dioph::{verify_solution, weierstrass_sections};
use veechkit::flow::{cylinder_decomposition, Direction, DEFAULT_MAX_SEPARATRIX_CROSSINGS};
use veechkit::{corpus, fuchsian, sections, Mat2, Scalar};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, format!("took {:.1}s, limit {}s", took.as_secs_f64(), limit.as_secs()))
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn four_square() -> Check {
    let start = Instant::now();
    let found = corpus::rederive_four_square();
    let s = corpus::four_square();
    ensure(found.len() == 1, format!("search found {} surfaces", found.len()))?;
    ensure(translation_equivalent(&found[0], &s).map_err(err)?.is_some(), "search result differs from the builtin")?;
    let ty = s.surface_type();
    let cones = s.cone_points();
    ensure(ty.genus == 2, "genus")?;
    ensure(cones.len() == 2 && cones.iter().all(|c| c.angle_pi == 4), "expected two cones of angle 4 pi")?;
    let h = cylinder_decomposition(&s, &Direction::horizontal(), DEFAULT_MAX_SEPARATRIX_CROSSINGS).map_err(err)?;
    let v = cylinder_decomposition(&s, &Direction::vertical(), DEFAULT_MAX_SEPARATRIX_CROSSINGS).map_err(err)?;
    ensure((h.cylinders.len(), v.cylinders.len()) == (1, 2), "cylinder counts")?;
    let g = geometric_veech_group(&s, DEFAULT_ORBIT_CAP).map_err(err)?;
    ensure(g.index == 3 && g.is_conjugate_to_gamma0(2), "Veech group is not an index 3 conjugate of Gamma0(2)")?;
    ensure(!g.contains(&Mat2::ints(1, 0, 1, 1)).map_err(err)?, "(1,0;1,1) should be excluded")?;
    let k = kernel_of_d(&s).map_err(err)?;
    let maps = sections::generator_maps(&s, &g.generators).map_err(err)?;
    let c = sections::section_candidates(&s, &maps, &k).map_err(err)?;
    ensure(c.count == 6, format!("{} section candidates", c.count))?;
    within(start, Duration::from_secs(10))?;
    Ok("genus 2, cylinders 1/2, index 3, 6 candidates".into())
}

fn octagon() -> Check {
    let start = Instant::now();
    let s = corpus::octagon();
    let (r, t) = corpus::regular_4n_gon_generators(2).map_err(err)?;
    ensure(check_generators(&s, &[r.clone(), t.clone()]).map_err(err)?.all_pass, "R and T are not both affine")?;
    let k = kernel_of_d(&s).map_err(err)?;
    ensure(k.order == 2 && k.presentation == Presentation::Involution, "kernel is not generated by one involution")?;
    let maps = sections::generator_maps(&s, &[r, t]).map_err(err)?;
    let c = sections::section_candidates(&s, &maps, &k).map_err(err)?;
    ensure(c.count == 2, format!("{} section candidates", c.count))?;
    within(start, Duration::from_secs(30))?;
    Ok("generators verified, kernel of order 2, 2 candidates".into())
}

fn random_directions() -> Check {
    let s = corpus::four_square();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tried = 0;
    while tried < 20 {
        let (x, y) = (rng.gen_range(-9i64..=9), rng.gen_range(-9i64..=9));
        if (x, y) == (0, 0) {
            continue;
        }
        tried += 1;
        let dir = Direction::ints(x, y).map_err(err)?;
        let d = cylinder_decomposition(&s, &dir, DEFAULT_MAX_SEPARATRIX_CROSSINGS).map_err(|e| format!("({x}, {y}): {e:?}"))?;
        let total = d.cylinders.iter().fold(Scalar::zero(), |a, c| &a + &c.area);
        ensure(total == Scalar::int(4), format!("({x}, {y}): total area {total}"))?;
        for c in &d.cylinders {
            ensure(&c.width_squared * &c.height_squared == &c.area * &c.area, format!("({x}, {y}): W H differs from area"))?;
            let ratio = c.modulus.try_div(&d.cylinders[0].modulus).map_err(err)?;
            ensure(ratio.as_rational().is_some(), format!("({x}, {y}): irrational moduli ratio"))?;
        }
    }
    Ok("20 directions decompose with total area 4 and commensurable moduli".into())
}

fn diophantine() -> Check {
    let start = Instant::now();
    let mut counts = Vec::new();
    for m in [2u32, 3, 4, 6] {
        let w = weierstrass_sections(m).map_err(err)?;
        ensure(w.solutions.iter().all(|p| verify_solution(&w.polynomial, p)), format!("m = {m}: a solution fails"))?;
        let expected = if m == 2 { 4 } else { m as usize + 2 };
        ensure(w.solutions.len() == expected, format!("m = {m}: {} solutions", w.solutions.len()))?;
        if m == 2 {
            ensure(w.rejected.len() == 2, "m = 2: expected the two square roots of t to be rejected")?;
        }
        counts.push(format!("{m}:{}", w.solutions.len()));
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!("solutions per m {}", counts.join(" ")))
}

fn fuchsian_groups() -> Check {
    let start = Instant::now();
    let modular = fuchsian::generators(&[Mat2::ints(0, -1, 1, 0), Mat2::ints(1, 1, 0, 1)]).map_err(err)?;
    let elems = fuchsian::enumerate(&modular, 8);
    let ford = fuchsian::ford_region(&elems).map_err(err)?;
    ensure((ford.area - PI / 3.0).abs() < 1e-3, format!("modular area {}", ford.area))?;
    ensure(fuchsian::shimizu_check(&elems).map_err(err)?.pass, "Shimizu fails on the modular group")?;
    let small = fuchsian::small_c_search(&modular, PI / 3.0, 1, 6).map_err(err)?;
    ensure((small.normalized_c - 1.0).abs() < 1e-12 && small.normalized_c < PI / 3.0, "modular small c")?;
    let level2 = fuchsian::generators(&[Mat2::ints(1, 1, 0, 1), Mat2::ints(1, 0, 2, 1)]).map_err(err)?;
    let ford2 = fuchsian::ford_region(&fuchsian::enumerate(&level2, 8)).map_err(err)?;
    ensure((ford2.area - PI).abs() < 1e-2, format!("level 2 area {}", ford2.area))?;
    let small2 = fuchsian::small_c_search(&level2, PI, 2, 6).map_err(err)?;
    ensure((small2.normalized_c - 2.0).abs() < 1e-12 && small2.normalized_c < PI - 1.0, "level 2 small c")?;
    within(start, Duration::from_secs(60))?;
    Ok(format!("areas {:.5} and {:.5}", ford.area, ford2.area))
}

fn cli(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_veechkit")).args(args).output().expect("binary runs");
    (out.status.code(), out.stdout)
}

fn audits() -> Check {
    let mut seen = Vec::new();
    for key in ["four-square", "staircase-Xm(3)", "staircase-Xm(4)", "staircase-Xm(5)"] {
        let (code, out) = cli(&["bounds", key]);
        let v: Value = serde_json::from_slice(&out).map_err(err)?;
        let failed: Vec<&str> = v["results"]["audits"]
            .as_array()
            .ok_or(format!("{key}: no audits"))?
            .iter()
            .filter(|a| a["pass"] != true)
            .filter_map(|a| a["lemma"].as_str())
            .collect();
        ensure(code == Some(0) && failed.is_empty(), format!("{key}: failed {failed:?}"))?;
        if key == "staircase-Xm(3)" {
            let i = &v["results"]["inputs"];
            let d = 3;
            let n = i["n0"].as_i64().unwrap_or(0) + i["n1"].as_i64().unwrap_or(0);
            ensure(n == 4 * d && i["kernel_order"] == 4 * d, "staircase-Xm(3) is not extremal")?;
        }
        seen.push(key);
    }
    // the octagon and the other regular 4n-gons have no one-cylinder horizontal direction
    let (code, _) = cli(&["bounds", "octagon"]);
    ensure(code == Some(1), "octagon bounds should report missing data")?;
    Ok(format!("all audits pass on {}; extremal at staircase-Xm(3)", seen.join(", ")))
}

fn properties_and_determinism() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let surfaces = [corpus::torus(), corpus::four_square(), corpus::octagon()];
    for _ in 0..10 {
        let a = (0..rng.gen_range(1..5)).fold(Mat2::identity(), |m, _| {
            let k = rng.gen_range(-2i64..=2);
            let e = if rng.gen() { Mat2::ints(1, k, 0, 1) } else { Mat2::ints(1, 0, k, 1) };
            &m * &e
        });
        let s = &surfaces[rng.gen_range(0..surfaces.len())];
        let image = s.apply_matrix(&a).map_err(err)?;
        ensure(image.area() == s.area(), "area changed under SL(2, Z)")?;
        let back = image.apply_matrix(&a.inverse_unimodular()).map_err(err)?;
        ensure(translation_equivalent(s, &back).map_err(err)?.is_some(), "round trip is not translation equivalent")?;
    }
    let runs: [&[&str]; 3] = [&["analyze", "four-square", "--pipeline"], &["sections", "octagon"], &["dioph", "--family", "3"]];
    for args in runs {
        let first = cli(args);
        for _ in 0..2 {
            ensure(cli(args) == first, format!("{args:?} output varies between runs"))?;
        }
    }
    Ok("area and round-trip samples hold; CLI output identical over 3 runs".into())
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("four-square end to end", four_square),
        ("octagon end to end", octagon),
        ("random rational directions", random_directions),
        ("function field sections", diophantine),
        ("Fuchsian group checks", fuchsian_groups),
        ("bound audits", audits),
        ("properties and determinism", properties_and_determinism),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {}: FAIL {name}: {why}", i + 1);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
