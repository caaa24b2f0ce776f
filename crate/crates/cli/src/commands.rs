//! One function per subcommand, each returning the `results` object of the report.

use serde_json::{json, Value};
use veechkit::affine::{check_generators, geometric_veech_group, kernel_of_d};
use veechkit::bounds::{self, lemma_audit, BoundsError};
use veechkit::corpus;
use veechkit::dioph::{self, ProjectiveSolution};
use veechkit::flow::{cylinder_decomposition, gluing_word, Direction};
use veechkit::fuchsian::{self, FuchsianError};
use veechkit::sections;
use veechkit::{Field, Scalar, Vec2};

use crate::input::{load, math, parse_matrices, read_generator_file, veech_generators, Source};
use crate::CliError;

/// Results of a subcommand. `ok` is false when a mathematical check failed.
pub struct Outcome {
    pub results: Value,
    pub warnings: Vec<String>,
    pub ok: bool,
    pub summary: String,
    pub backend: Option<Field>,
}

impl Outcome {
    fn new(results: Value, summary: String) -> Self {
        Outcome { results, warnings: Vec::new(), ok: true, summary, backend: None }
    }

    fn on(mut self, src: &Source) -> Self {
        self.backend = Some(src.surface.field());
        self
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

pub fn analyze(arg: &str, pipeline: bool, cap: usize, word_length: usize) -> Result<Outcome, CliError> {
    let src = load(arg)?;
    let piped = if pipeline { Some(end_to_end(&src, cap, word_length)?) } else { None };
    let s = &src.surface;
    let ty = s.surface_type();
    let cones: Vec<Value> = s
        .cone_points()
        .iter()
        .map(|c| json!({"class": c.class, "angle_pi": c.angle_pi, "ord": c.ord, "puncture": c.puncture, "corners": c.corners.len()}))
        .collect();
    let summary = format!("{}: genus {}, {} cone classes, area {}", src.name, ty.genus, cones.len(), s.area());
    let ok = piped.as_ref().is_none_or(|p| p.ok);
    let mut out = Outcome::new(
        json!({
            "surface": src.name,
            "field": s.field().name(),
            "type": ty,
            "translation_surface": s.is_translation_surface(),
            "polygons": s.polygons().len(),
            "area": s.area(),
            "euler_characteristic": s.euler_characteristic(),
            "cone_points": cones,
            "critical_points": corpus::critical_points(s),
        }),
        summary,
    )
    .on(&src);
    if let Some(p) = piped {
        out.results["pipeline"] = p.results;
        out.warnings.extend(p.warnings);
        out.ok = ok;
    }
    Ok(out)
}

/// Veech group, section candidates and bounds in one pass.
fn end_to_end(src: &Source, cap: usize, word_length: usize) -> Result<Outcome, CliError> {
    let ty = src.surface.surface_type();
    if ty.moduli_dimension() <= 0 {
        return Err(CliError::Math(format!("trivial moduli: 3g - 3 + n = {}", ty.moduli_dimension())));
    }
    let gens = veech_generators(src, None, cap)?;
    let mut results = json!({"generators": {"matrices": gens.matrices, "origin": gens.origin}});
    let mut ok = true;
    if src.surface.field() == Field::Rational {
        let g = geometric_veech_group(&src.surface, cap).map_err(math)?;
        results["veech_index"] = json!(g.index);
    } else {
        let report = check_generators(&src.surface, &gens.matrices).map_err(math)?;
        ok &= report.all_pass;
        results["generators_verified"] = json!(report.all_pass);
    }
    let mut warnings = Vec::new();
    match bounds::measure(&src.surface, &gens.matrices, gens.signature.clone(), word_length) {
        Ok(m) => {
            let r = lemma_audit(&m.data).map_err(math)?;
            let failed: Vec<&str> = r.audits.iter().filter(|a| !a.pass).map(|a| a.lemma.as_str()).collect();
            ok &= failed.is_empty();
            results["sections"] = json!(m.candidates.count);
            results["bounds"] = json!({
                "audits": r.audits.len(),
                "failed": failed,
                "prop_bound": r.prop_bound,
                "global_bound": r.global_bound,
            });
            warnings.push(format!("b0 and c0 are upper estimates from words of length at most {word_length}"));
        }
        Err(BoundsError::MissingData(why)) => {
            let kernel = kernel_of_d(&src.surface).map_err(math)?;
            let maps = sections::generator_maps(&src.surface, &gens.matrices).map_err(math)?;
            let c = sections::section_candidates(&src.surface, &maps, &kernel).map_err(math)?;
            results["sections"] = json!(c.count);
            results["bounds"] = json!({"skipped": why});
        }
        Err(e) => return Err(math(e)),
    }
    warnings.extend(subgroup_warning(gens.origin));
    let mut out = Outcome::new(results, String::new());
    out.warnings = warnings;
    out.ok = ok;
    Ok(out)
}

fn parse_direction(src: &str) -> Result<Direction, CliError> {
    let parts: Vec<&str> = src.split(',').map(str::trim).collect();
    let [x, y] = parts.as_slice() else {
        return Err(CliError::Input(format!("direction {src:?} must be dx,dy")));
    };
    let p = |v: &str| v.parse::<Scalar>().map_err(|e| CliError::Input(format!("direction {src:?}: {e}")));
    Direction::new(Vec2::new(p(x)?, p(y)?)).map_err(|e| CliError::Input(e.to_string()))
}

pub fn cylinders(arg: &str, direction: &str, max: usize) -> Result<Outcome, CliError> {
    let src = load(arg)?;
    let dir = parse_direction(direction)?;
    let d = cylinder_decomposition(&src.surface, &dir, max).map_err(math)?;
    let cyls: Vec<Value> = d
        .cylinders
        .iter()
        .map(|c| {
            json!({
                "W": c.width, "H": c.height, "mod": c.modulus,
                "W2": c.width_squared, "H2": c.height_squared, "area": c.area,
                "boundary": c.boundary,
            })
        })
        .collect();
    let simple = d.cylinders.len() == 1;
    let word = if simple {
        let transverse = Direction::new(dir.vector().rot90()).map_err(math)?;
        gluing_word(&src.surface, &d, &transverse, max).ok()
    } else {
        None
    };
    let summary = format!("{} cylinders in direction {direction}", d.cylinders.len());
    Ok(Outcome::new(
        json!({
            "direction": dir.vector(),
            "cylinders": cyls,
            "simple": simple,
            "total_area": d.total_area(),
            "word": word.as_ref().map(|w| &w.word),
            "n": word.as_ref().map(|w| w.n),
            "boundary_counts": d.boundary_counts(),
        }),
        summary,
    )
    .on(&src))
}

pub fn veech(arg: &str, check: Option<&str>, cap: usize) -> Result<Outcome, CliError> {
    let src = load(arg)?;
    let check = check.map(parse_matrices).transpose()?;
    let mut results = serde_json::Map::new();
    let mut ok = true;
    let mut summary = String::new();
    if src.surface.field() == Field::Rational {
        let g = geometric_veech_group(&src.surface, cap).map_err(math)?;
        summary = format!("Veech group of index {} in PSL(2,Z)", g.index);
        results.insert("generators".into(), to_value(&g.generators));
        results.insert("index".into(), json!(g.index));
        results.insert("orbit_size".into(), json!(g.orbit_size));
        results.insert("signature".into(), to_value(&g.signature()));
        results.insert("congruence_gamma0_2".into(), json!(g.is_conjugate_to_gamma0(2)));
    } else {
        results.insert("generators".into(), Value::Null);
        results.insert("index".into(), Value::Null);
        results.insert("orbit_size".into(), Value::Null);
    }
    let to_check = match (check, &src.entry) {
        (Some(c), _) => Some(c),
        (None, Some(e)) if src.surface.field() != Field::Rational && !e.generators.is_empty() => Some(e.generators.clone()),
        _ => None,
    };
    let mut checks = Value::Array(Vec::new());
    if let Some(gens) = to_check {
        let report = check_generators(&src.surface, &gens).map_err(math)?;
        ok = report.all_pass;
        if summary.is_empty() {
            summary = format!("{} of {} generators verified", report.checks.iter().filter(|c| c.passes).count(), gens.len());
        }
        checks = to_value(&report.checks);
    }
    if summary.is_empty() {
        return Err(CliError::Input("surface is not square-tiled; pass matrices to verify with --check".into()));
    }
    results.insert("checks".into(), checks);
    let mut out = Outcome::new(Value::Object(results), summary).on(&src);
    out.ok = ok;
    Ok(out)
}

pub fn kernel(arg: &str) -> Result<Outcome, CliError> {
    let src = load(arg)?;
    let k = kernel_of_d(&src.surface).map_err(math)?;
    let elements: Vec<Value> = k
        .elements
        .iter()
        .map(|e| json!({"chart_sign": e.map.global_sign(), "sgn": e.sgn, "order": e.order, "involution": e.order == 2}))
        .collect();
    let summary = format!("kernel of order {}", k.order);
    Ok(Outcome::new(
        json!({
            "order": k.order,
            "sgn_image": k.sgn_image,
            "orientation_preserving": k.orientation_preserving,
            "presentation": k.presentation,
            "cyclic_translations": k.cyclic_translations,
            "reversals_fix_two_core_points": k.reversals_fix_two_core_points,
            "elements": elements,
        }),
        summary,
    )
    .on(&src))
}

fn subgroup_warning(origin: &str) -> Option<String> {
    (origin != "orbit").then(|| "generators may span a proper subgroup of the Veech group".to_string())
}

pub fn sections(arg: &str, check: Option<&str>, cap: usize) -> Result<Outcome, CliError> {
    let src = load(arg)?;
    let gens = veech_generators(&src, check.map(parse_matrices).transpose()?, cap)?;
    let kernel = kernel_of_d(&src.surface).map_err(math)?;
    let maps = sections::generator_maps(&src.surface, &gens.matrices).map_err(|e| match e {
        sections::SectionError::NotInVeechGroup(m) => CliError::Math(format!("{m} is not the derivative of an affine automorphism")),
        other => math(other),
    })?;
    let c = sections::section_candidates(&src.surface, &maps, &kernel).map_err(math)?;
    let quotient = sections::quotient_by_kernel(&src.surface, &kernel).map_err(math)?;
    let points: Vec<Value> = c
        .points
        .iter()
        .map(|p| json!({"polygon": p.polygon, "x": p.x.x, "y": p.x.y, "critical": p.critical, "angle": p.angle_pi}))
        .collect();
    let mut out = Outcome::new(
        json!({
            "count": c.count,
            "points": points,
            "quotient_points": c.quotient_points,
            "certificates": c.certificates,
            "notes": sections::candidate_filter_note(&c),
            "generators": {"matrices": gens.matrices, "origin": gens.origin},
            "quotient": {
                "genus": quotient.genus_y,
                "branch_points": quotient.branch_points,
                "riemann_hurwitz": quotient.riemann_hurwitz,
            },
        }),
        format!("{} section candidates", c.count),
    )
    .on(&src);
    out.warnings.extend(subgroup_warning(gens.origin));
    out.ok = quotient.riemann_hurwitz;
    Ok(out)
}

pub fn bounds(arg: &str, check: Option<&str>, cap: usize, word_length: usize) -> Result<Outcome, CliError> {
    let src = load(arg)?;
    let gens = veech_generators(&src, check.map(parse_matrices).transpose()?, cap)?;
    let m = bounds::measure(&src.surface, &gens.matrices, gens.signature.clone(), word_length).map_err(|e| match e {
        BoundsError::Section(sections::SectionError::NotInVeechGroup(g)) => {
            CliError::Math(format!("{g} is not the derivative of an affine automorphism"))
        }
        other => math(other),
    })?;
    let r = lemma_audit(&m.data).map_err(math)?;
    let failed = r.audits.iter().filter(|a| !a.pass).count();
    let mut out = Outcome::new(
        json!({
            "inputs": r.inputs,
            "critical_points": m.data.critical,
            "separating_core": m.data.separating_core,
            "sections": m.data.sections,
            "cross": r.cross,
            "i0": r.i0,
            "prop_bound": r.prop_bound,
            "global_bound": r.global_bound,
            "audits": r.audits,
        }),
        format!("{} audits, {failed} failed", r.audits.len()),
    )
    .on(&src);
    out.warnings.push(format!("b0 and c0 are upper estimates from words of length at most {word_length}"));
    if r.i0.floored {
        out.warnings.push(format!("the I0 formula gives {}, reported as 1", r.i0.formula));
    }
    if r.global_bound.is_none() {
        out.warnings.push("global bound needs the type of the Veech group".into());
    }
    out.warnings.extend(subgroup_warning(gens.origin));
    out.ok = failed == 0;
    Ok(out)
}

pub fn ford(path: &str, word_length: usize) -> Result<Outcome, CliError> {
    let gens = read_generator_file(path)?;
    let gens = fuchsian::generators(&gens).map_err(|e| match e {
        FuchsianError::NotUnimodular => CliError::Input(format!("{path}: {e}")),
        other => math(other),
    })?;
    let elems = fuchsian::enumerate(&gens, word_length);
    let region = fuchsian::ford_region(&elems).map_err(math)?;
    let shimizu = fuchsian::shimizu_check(&elems).map_err(math)?;
    let estimates = fuchsian::b0_c0_estimate(&elems).ok();
    let k0 = region.cusp_estimate();
    let small = fuchsian::small_c_search(&gens, region.area, k0, word_length);
    let small_c = small.as_ref().ok().map(|s| {
        json!({"matrix": s.element.matrix, "word": s.element.word, "c": s.element.matrix.c, "normalized_c": s.normalized_c, "bound": s.bound})
    });
    let mut out = Outcome::new(
        json!({
            "elements": elems.len(),
            "area": region.area,
            "error": region.error,
            "cusps": k0,
            "real_vertices": region.real_vertices,
            "max_height": region.max_height,
            "shimizu": shimizu,
            "small_c": small_c,
            "b0": estimates.as_ref().map(|e| &e.b0),
            "c0": estimates.as_ref().map(|e| &e.c0),
        }),
        format!("Ford area {:.6} from {} elements", region.area, elems.len()),
    );
    out.warnings.push(format!("region, b0 and c0 come from words of length at most {word_length}"));
    if let Err(e) = &small {
        out.warnings.push(format!("small c search: {e}"));
    }
    out.ok = shimizu.pass && small.is_ok();
    Ok(out)
}

pub fn dioph_cmd(m: u32, verify: Option<&str>) -> Result<Outcome, CliError> {
    if m == 0 {
        return Err(CliError::Input("--family needs m >= 1".into()));
    }
    let w = dioph::weierstrass_sections(m).map_err(math)?;
    let mut out = Outcome::new(
        json!({
            "polynomial": w.polynomial,
            "solutions": w.solutions,
            "rejected": w.rejected,
        }),
        format!("{} solutions, {} rejected", w.solutions.len(), w.rejected.len()),
    );
    if let Some(v) = verify {
        let sol = ProjectiveSolution::parse(v, w.polynomial.field()).map_err(|e| CliError::Input(e.to_string()))?;
        let holds = dioph::verify_solution(&w.polynomial, &sol);
        out.results["verify"] = json!({"solution": sol, "canonical": sol.canonical(), "holds": holds});
        out.ok = holds;
    }
    Ok(out)
}

pub fn corpus_cmd(key: &str, rederive: bool) -> Result<Outcome, CliError> {
    let entry = corpus::by_key(key).map_err(|e| CliError::Input(e.to_string()))?;
    let mut file = entry.surface.to_file();
    file.metadata = Some(to_value(&entry));
    let mut results = json!({"surface": file});
    let mut ok = true;
    if rederive {
        let found = match key {
            "four-square" => corpus::rederive_four_square(),
            k => match k.strip_prefix("staircase-Xm(").and_then(|r| r.strip_suffix(')')).and_then(|m| m.trim().parse().ok()) {
                Some(m) => corpus::rederive_staircase(m),
                None => return Err(CliError::Input(format!("--rederive applies to four-square and staircase-Xm(m), not {key}"))),
            },
        };
        let mut matches = false;
        for s in &found {
            matches |= veechkit::affine::translation_equivalent(s, &entry.surface).map_err(math)?.is_some();
        }
        ok = matches;
        results["rederive"] = json!({"found": found.len(), "matches_builtin": matches});
    }
    let mut out = Outcome::new(results, format!("corpus surface {key}"));
    out.backend = Some(entry.surface.field());
    out.ok = ok;
    Ok(out)
}
