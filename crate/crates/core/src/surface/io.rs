//! JSON surface and origami files.

use serde::{Deserialize, Serialize};

use super::{Corner, EdgeRef, FlatSurface, Gluing, GluingKind, Origami, Polygon, SurfaceError};
use crate::geom::Vec2;
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GluingEntry {
    pub a: [usize; 2],
    pub b: [usize; 2],
    pub kind: GluingKind,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolygonEntry {
    pub vertices: Vec<[Scalar; 2]>,
}

/// `{"field", "polygons":[{"vertices"}], "gluings":[{"a","b","kind"}], "punctures"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SurfaceFile {
    #[serde(default = "default_field")]
    pub field: String,
    pub polygons: Vec<PolygonEntry>,
    pub gluings: Vec<GluingEntry>,
    #[serde(default)]
    pub punctures: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
}

fn default_field() -> String {
    "rational".into()
}

/// `{"squares": N, "h": [...], "v": [...]}` with 1-indexed images.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrigamiFile {
    pub squares: usize,
    pub h: Vec<usize>,
    pub v: Vec<usize>,
}

/// Parses a field tag: `rational`, `quad(d)`, `Q(sqrt d)`, or `interval`.
pub fn parse_field(tag: &str) -> Result<Field, SurfaceError> {
    let t: String = tag.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    if t == "rational" || t == "q" {
        return Ok(Field::Rational);
    }
    if t == "interval" {
        return Ok(Field::Interval);
    }
    let digits: String = t.chars().filter(|c| c.is_ascii_digit()).collect();
    if (t.starts_with("quad") || t.starts_with("q(sqrt")) && !digits.is_empty() {
        let d: u64 = digits.parse().map_err(|_| SurfaceError::Parse(format!("bad field tag {tag}")))?;
        let (_, sf) = crate::scalar::square_free_part(d);
        return Ok(if sf == 1 { Field::Rational } else { Field::Quadratic(sf) });
    }
    Err(SurfaceError::Parse(format!("unknown field tag {tag:?}")))
}

impl SurfaceFile {
    pub fn from_surface(s: &FlatSurface) -> Self {
        SurfaceFile {
            field: s.field().name(),
            polygons: s
                .polygons()
                .iter()
                .map(|p| PolygonEntry { vertices: p.vertices.iter().map(|v| [v.x.clone(), v.y.clone()]).collect() })
                .collect(),
            gluings: s
                .gluings()
                .iter()
                .map(|g| GluingEntry { a: [g.a.polygon, g.a.edge], b: [g.b.polygon, g.b.edge], kind: g.kind })
                .collect(),
            punctures: s.punctures().iter().map(|c| [c.polygon, c.vertex]).collect(),
            metadata: None,
        }
    }

    pub fn to_surface(&self) -> Result<FlatSurface, SurfaceError> {
        let declared = parse_field(&self.field)?;
        let polygons: Vec<Polygon> = self
            .polygons
            .iter()
            .map(|p| Polygon::new(p.vertices.iter().map(|[x, y]| Vec2::new(x.clone(), y.clone())).collect()))
            .collect();
        let gluings = self
            .gluings
            .iter()
            .map(|g| Gluing { a: EdgeRef::new(g.a[0], g.a[1]), b: EdgeRef::new(g.b[0], g.b[1]), kind: g.kind })
            .collect();
        let punctures: Vec<Corner> = self.punctures.iter().map(|p| Corner { polygon: p[0], vertex: p[1] }).collect();
        let s = FlatSurface::new(polygons, gluings, &punctures)?;
        let ok = match (declared, s.field()) {
            (a, b) if a == b => true,
            (Field::Quadratic(_), Field::Rational) | (Field::Interval, _) => true,
            _ => false,
        };
        if !ok {
            return Err(SurfaceError::Parse(format!(
                "declared field {} but coordinates lie in {}",
                declared.name(),
                s.field().name()
            )));
        }
        Ok(s)
    }
}

/// Loads either a polygon surface file or an origami file.
pub fn surface_from_json(text: &str) -> Result<FlatSurface, SurfaceError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| {
        SurfaceError::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
    })?;
    if value.get("squares").is_some() {
        let o: OrigamiFile = serde_json::from_value(value).map_err(|e| SurfaceError::Parse(e.to_string()))?;
        if o.h.len() != o.squares || o.v.len() != o.squares {
            return Err(SurfaceError::Parse("h and v must list one image per square".into()));
        }
        return Ok(Origami::from_one_indexed(&o.h, &o.v)?.to_surface());
    }
    let f: SurfaceFile = serde_json::from_value(value).map_err(|e| SurfaceError::Parse(e.to_string()))?;
    f.to_surface()
}

impl FlatSurface {
    pub fn from_json(text: &str) -> Result<FlatSurface, SurfaceError> {
        surface_from_json(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_file_round_trip() {
        let text = r#"{"field":"rational","polygons":[{"vertices":[["0","0"],["1","0"],["1","1"],["0","1"]]}],
            "gluings":[{"a":[0,0],"b":[0,2],"kind":"translation"},{"a":[0,1],"b":[0,3],"kind":"translation"}]}"#;
        let s = FlatSurface::from_json(text).unwrap();
        let back = serde_json::to_string(&s.to_file()).unwrap();
        let s2 = FlatSurface::from_json(&back).unwrap();
        assert_eq!(s2.polygons(), s.polygons());
    }

    #[test]
    fn origami_file() {
        let s = FlatSurface::from_json(r#"{"squares":2,"h":[2,1],"v":[1,2]}"#).unwrap();
        assert_eq!(s.polygons().len(), 2);
        assert!(FlatSurface::from_json(r#"{"squares":2,"h":[1,1],"v":[1,2]}"#).is_err());
    }

    #[test]
    fn parse_error_has_location() {
        let err = FlatSurface::from_json("{\"polygons\": [").unwrap_err();
        assert!(err.to_string().contains("line 1"));
    }

    #[test]
    fn field_tags() {
        assert_eq!(parse_field("quad(2)").unwrap(), Field::Quadratic(2));
        assert_eq!(parse_field("Q(sqrt 8)").unwrap(), Field::Quadratic(2));
        assert!(parse_field("cubic").is_err());
    }
}
