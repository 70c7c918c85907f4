//! SVG pictures of planar fans, simplex slices of 3-dimensional fans and
//! planar polyhedra.

use std::fmt::Write;

use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlotError {
    #[error("cannot plot a {kind} in dimension {n}")]
    UnsupportedDimension { kind: String, n: usize },
    #[error("field `{0}` is missing or malformed")]
    Field(String),
    #[error("schema `{0}` is not supported")]
    Schema(String),
}

const SIZE: f64 = 400.0;
const FILLS: [&str; 6] = ["#cfe3f3", "#f6d8c3", "#d7ecd0", "#eadcf0", "#f3efc4", "#d5d5d5"];

fn field<'a>(v: &'a Value, k: &str) -> Result<&'a Value, PlotError> {
    v.get(k).ok_or_else(|| PlotError::Field(k.into()))
}

fn as_usize(v: &Value, k: &str) -> Result<usize, PlotError> {
    field(v, k)?.as_u64().map(|x| x as usize).ok_or_else(|| PlotError::Field(k.into()))
}

fn matrix(v: &Value, k: &str) -> Result<Vec<Vec<f64>>, PlotError> {
    let bad = || PlotError::Field(k.into());
    field(v, k)?
        .as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|x| x.as_f64().or_else(|| x.as_str().and_then(|s| s.parse().ok())).ok_or_else(bad))
                .collect()
        })
        .collect()
}

fn ray_label(r: &[f64]) -> String {
    let parts: Vec<String> = r.iter().map(|x| format!("{x}")).collect();
    format!("({})", parts.join(","))
}

struct Canvas {
    body: String,
}

impl Canvas {
    fn new() -> Self {
        Self { body: String::new() }
    }

    fn polygon(&mut self, pts: &[(f64, f64)], fill: &str) {
        let p: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
        let _ = writeln!(self.body, r#"<polygon points="{}" fill="{fill}" stroke="black" stroke-width="1"/>"#, p.join(" "));
    }

    fn line(&mut self, a: (f64, f64), b: (f64, f64)) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="black" stroke-width="1.5"/>"#,
            a.0, a.1, b.0, b.1
        );
    }

    fn dot(&mut self, p: (f64, f64)) {
        let _ = writeln!(self.body, r#"<circle cx="{:.3}" cy="{:.3}" r="3" fill="black"/>"#, p.0, p.1);
    }

    fn text(&mut self, p: (f64, f64), s: &str) {
        let _ = writeln!(self.body, r#"<text x="{:.3}" y="{:.3}" font-size="12" font-family="sans-serif">{s}</text>"#, p.0, p.1);
    }

    fn finish(self) -> String {
        let pad = 40.0;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{w}\" viewBox=\"{v} {v} {w} {w}\">\n{}</svg>\n",
            self.body,
            w = SIZE + 2.0 * pad,
            v = -pad
        )
    }
}

fn hull(mut pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn cones(v: &Value) -> Result<Vec<Vec<usize>>, PlotError> {
    let bad = || PlotError::Field("maximal_cones".into());
    field(v, "maximal_cones")?
        .as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|c| {
            c.get("ray_indices")
                .and_then(Value::as_array)
                .ok_or_else(bad)?
                .iter()
                .map(|i| i.as_u64().map(|i| i as usize).ok_or_else(bad))
                .collect()
        })
        .collect()
}

fn plot_fan(v: &Value) -> Result<String, PlotError> {
    let n = as_usize(v, "n")?;
    let rays = matrix(v, "rays")?;
    let cones = cones(v)?;
    if cones.iter().flatten().any(|&i| i >= rays.len()) {
        return Err(PlotError::Field("maximal_cones".into()));
    }
    let mut c = Canvas::new();
    match n {
        2 => {
            // first quadrant, y pointing up
            let at = |r: &[f64]| {
                let len = r[0].hypot(r[1]);
                (SIZE * r[0] / len, SIZE - SIZE * r[1] / len)
            };
            for (k, cone) in cones.iter().enumerate() {
                let mut pts = vec![(0.0, SIZE)];
                let mut ends: Vec<(f64, f64)> = cone.iter().map(|&i| at(&rays[i])).collect();
                ends.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
                pts.extend(ends);
                c.polygon(&pts, FILLS[k % FILLS.len()]);
            }
            for r in &rays {
                let p = at(r);
                c.line((0.0, SIZE), p);
                c.text((p.0 + 4.0, p.1 - 4.0), &ray_label(r));
            }
        }
        3 => {
            // barycentric picture of the slice w1 + w2 + w3 = 1
            let corners = [(0.0, SIZE), (SIZE, SIZE), (SIZE / 2.0, SIZE - SIZE * 3f64.sqrt() / 2.0)];
            let at = |r: &[f64]| {
                let s: f64 = r.iter().sum();
                let (mut x, mut y) = (0.0, 0.0);
                for (w, q) in r.iter().zip(&corners) {
                    x += w / s * q.0;
                    y += w / s * q.1;
                }
                (x, y)
            };
            for (k, cone) in cones.iter().enumerate() {
                let pts = hull(cone.iter().map(|&i| at(&rays[i])).collect());
                c.polygon(&pts, FILLS[k % FILLS.len()]);
            }
            for r in &rays {
                let p = at(r);
                c.dot(p);
                c.text((p.0 + 4.0, p.1 - 4.0), &ray_label(r));
            }
        }
        _ => return Err(PlotError::UnsupportedDimension { kind: "fan".into(), n }),
    }
    Ok(c.finish())
}

fn plot_polyhedron(v: &Value) -> Result<String, PlotError> {
    let n = as_usize(v, "n")?;
    if n != 2 {
        return Err(PlotError::UnsupportedDimension { kind: "polyhedron".into(), n });
    }
    let verts = matrix(v, "vertices")?;
    if verts.is_empty() || verts.iter().any(|p| p.len() != 2) {
        return Err(PlotError::Field("vertices".into()));
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in &verts {
        lo = lo.min(p[0]).min(p[1]);
        hi = hi.max(p[0]).max(p[1]);
    }
    let span = (hi - lo).max(1e-9);
    // the recession cone is the negative orthant; cut it off one span below
    let cut = lo - span;
    let top = verts.iter().cloned().fold(verts[0].clone(), |a, p| if (p[1], p[0]) > (a[1], a[0]) { p } else { a });
    let right = verts.iter().cloned().fold(verts[0].clone(), |a, p| if (p[0], p[1]) > (a[0], a[1]) { p } else { a });
    let mut region: Vec<(f64, f64)> = verts.iter().map(|p| (p[0], p[1])).collect();
    region.extend([(cut, top[1]), (right[0], cut), (cut, cut)]);
    let scale = SIZE / (hi - cut);
    let at = |(x, y): (f64, f64)| ((x - cut) * scale, SIZE - (y - cut) * scale);
    let mut c = Canvas::new();
    let pts: Vec<(f64, f64)> = hull(region).into_iter().map(at).collect();
    c.polygon(&pts, FILLS[0]);
    for p in &verts {
        let q = at((p[0], p[1]));
        c.dot(q);
        c.text((q.0 + 4.0, q.1 - 4.0), &format!("({:.4},{:.4})", p[0], p[1]));
    }
    if let Some(edges) = v.get("bounded_edges").and_then(Value::as_array) {
        for e in edges {
            let ij: Vec<usize> = e.as_array().into_iter().flatten().filter_map(Value::as_u64).map(|x| x as usize).collect();
            if let [i, j] = ij[..] {
                if i < verts.len() && j < verts.len() {
                    c.line(at((verts[i][0], verts[i][1])), at((verts[j][0], verts[j][1])));
                }
            }
        }
    }
    Ok(c.finish())
}

/// Renders a fan or polyhedron document produced by the other commands.
pub fn render(v: &Value) -> Result<String, PlotError> {
    let schema = field(v, "schema")?.as_str().unwrap_or_default();
    if schema != super::SCHEMA {
        return Err(PlotError::Schema(schema.into()));
    }
    match field(v, "kind")?.as_str() {
        Some("fan") => plot_fan(v),
        Some("polyhedron") => plot_polyhedron(v),
        _ => Err(PlotError::Field("kind".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn hull_of_square() {
        let h = hull(vec![(0.0, 0.0), (1.0, 0.0), (0.5, 0.5), (1.0, 1.0), (0.0, 1.0)]);
        assert_eq!(h.len(), 4);
    }

    #[test]
    fn four_dimensional_fan_is_unsupported() {
        let v = json!({"schema": "hypfan/1", "kind": "fan", "n": 4, "rays": [], "maximal_cones": []});
        assert!(matches!(render(&v), Err(PlotError::UnsupportedDimension { n: 4, .. })));
    }
}
