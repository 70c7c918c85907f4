//! Secondary polyhedron: GKZ vectors of the maximal cones plus the
//! nonpositive orthant, and numerical checks of its normal fan.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::cones::DecompositionLabel;
use crate::develop::{gkz_after_flips, DevelopError, GkzVector, Mat3};
use crate::exact::{to_f64, to_rational, Rational};
use crate::fan::SecondaryFan;
use crate::penner::{DecoratedSurface, PennerError, Weighting};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyhedronError {
    #[error(transparent)]
    Develop(#[from] DevelopError),
    #[error(transparent)]
    Penner(#[from] PennerError),
    #[error("refinements of cone {cone} disagree by {gap:e}")]
    RefinementDisagreement { cone: usize, gap: f64 },
    #[error("vertices {0} and {1} are not supported by their common wall")]
    EdgeNormalMismatch(usize, usize),
    #[error("normal fan mismatch: worst margin {worst:e} below -{tol:e}")]
    NormalFanMismatch { worst: f64, tol: f64 },
    #[error("polyhedron and fan have different dimensions")]
    DimensionMismatch,
}

#[derive(Debug, Clone)]
pub struct PolyVertex {
    pub cone: usize,
    pub gkz: GkzVector,
    pub label: DecompositionLabel,
    /// Flip log from the input triangulation to the triangulation developed.
    pub flips: Vec<usize>,
    /// Distance to the GKZ vector of a second refinement, for non-triangulation labels.
    pub refinement_gap: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SecondaryPolyhedron {
    pub n: usize,
    /// One vertex per maximal cone of the fan, in the same order.
    pub vertices: Vec<PolyVertex>,
    pub bounded_edges: Vec<(usize, usize)>,
    /// Pairs of vertices closer than `10 tail_tol` (possible merges, reported only).
    pub ambiguous: Vec<(usize, usize)>,
    pub tail_tol: f64,
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn fdot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    fdot(a, a).sqrt()
}

fn vertex_for_cone(
    d: &DecoratedSurface,
    fan: &SecondaryFan,
    cone: usize,
    tail_tol: f64,
    transform: Option<&Mat3>,
) -> Result<PolyVertex, PolyhedronError> {
    let c = &fan.maximal_cones[cone];
    let w = Weighting::new(c.interior_point())?;
    let run = d.make_delaunay(&w)?;
    let gkz = gkz_after_flips(d, &run.flips, tail_tol, transform)?;
    let mut refinement_gap = None;
    if !c.label.is_triangulation() {
        let margins = run.surface.delaunay_margins(&w)?;
        let weak = (0..margins.len()).find(|&e| margins[e].is_zero() && !run.surface.surface().is_self_folded(e));
        if let Some(e) = weak {
            let mut flips = run.flips.clone();
            flips.push(e);
            let other = gkz_after_flips(d, &flips, tail_tol, transform)?;
            let gap = dist(&gkz.phi, &other.phi);
            if gap > 10.0 * tail_tol {
                return Err(PolyhedronError::RefinementDisagreement { cone, gap });
            }
            refinement_gap = Some(gap);
        }
    }
    Ok(PolyVertex { cone, gkz, label: c.label.clone(), flips: run.flips, refinement_gap })
}

pub fn secondary_polyhedron(d: &DecoratedSurface, fan: &SecondaryFan, tail_tol: f64) -> Result<SecondaryPolyhedron, PolyhedronError> {
    secondary_polyhedron_with(d, fan, tail_tol, None)
}

/// GKZ vector per maximal cone, developed from the base point moved by `transform`.
pub fn secondary_polyhedron_with(
    d: &DecoratedSurface,
    fan: &SecondaryFan,
    tail_tol: f64,
    transform: Option<&Mat3>,
) -> Result<SecondaryPolyhedron, PolyhedronError> {
    if fan.n != d.num_cusps() {
        return Err(PolyhedronError::DimensionMismatch);
    }
    let vertices: Vec<PolyVertex> = (0..fan.maximal_cones.len())
        .into_par_iter()
        .map(|c| vertex_for_cone(d, fan, c, tail_tol, transform))
        .collect::<Result<_, _>>()?;
    let mut bounded_edges = Vec::new();
    for (a, b, normal) in fan.walls() {
        // every weight on the wall is maximized by both vertices
        for r in fan.maximal_cones[a].facet_rays(&normal) {
            let rf = ray_f64(&r);
            let l1: f64 = rf.iter().map(|x| x.abs()).sum();
            let gap = (vertices[a].gkz.dot(&rf) - vertices[b].gkz.dot(&rf)).abs();
            if gap > 10.0 * tail_tol * l1 {
                return Err(PolyhedronError::EdgeNormalMismatch(a, b));
            }
        }
        bounded_edges.push((a, b));
    }
    let mut ambiguous = Vec::new();
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            if dist(&vertices[i].gkz.phi, &vertices[j].gkz.phi) <= 10.0 * tail_tol {
                ambiguous.push((i, j));
            }
        }
    }
    Ok(SecondaryPolyhedron { n: fan.n, vertices, bounded_edges, ambiguous, tail_tol })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalFanReport {
    pub samples: usize,
    /// Smallest `(<w, phi_C> - max_{C'} <w, phi_C'>) / |w|` over samples `w` in cone `C`;
    /// `None` when there is a single vertex.
    pub worst_margin: Option<f64>,
    /// Largest gap between a wall's two vertices and the maximum, at the wall's center.
    pub worst_wall_gap: f64,
    pub passed: bool,
}

impl NormalFanReport {
    pub fn to_json(&self) -> Value {
        json!({
            "samples": self.samples,
            "worst_margin": self.worst_margin,
            "worst_wall_gap": self.worst_wall_gap,
            "passed": self.passed,
        })
    }
}

fn unit(v: &[f64]) -> Vec<f64> {
    let n = norm(v);
    v.iter().map(|x| x / n).collect()
}

fn ray_f64(r: &[num_bigint::BigInt]) -> Vec<f64> {
    to_rational(r).iter().map(to_f64).collect()
}

/// Sample weights inside a maximal cone: its center, and points close to
/// each ray and to the center of each facet.
fn cone_samples(fan: &SecondaryFan, c: usize) -> Vec<Vec<f64>> {
    let cone = &fan.maximal_cones[c];
    let n = fan.n;
    let rays: Vec<Vec<f64>> = cone.rays.iter().map(|r| unit(&ray_f64(r))).collect();
    let mut center = vec![0.0; n];
    for r in &rays {
        for k in 0..n {
            center[k] += r[k];
        }
    }
    let center = unit(&center);
    let near = |p: &[f64]| -> Vec<f64> { p.iter().zip(&center).map(|(x, y)| x + 1e-3 * y).collect() };
    let mut out = vec![center.clone()];
    for r in &rays {
        out.push(near(r));
    }
    for f in &cone.facets {
        let fr: Vec<Vec<f64>> = cone.facet_rays(f).iter().map(|r| unit(&ray_f64(r))).collect();
        let mut m = vec![0.0; n];
        for r in &fr {
            for k in 0..n {
                m[k] += r[k];
            }
        }
        out.push(near(&unit(&m)));
    }
    out
}

/// Checks that each vertex maximizes `<w, .>` over all vertices for weights
/// `w` sampled in its cone, up to `tol |w|`.
pub fn check_normal_fan(p: &SecondaryPolyhedron, fan: &SecondaryFan, tol: f64) -> Result<NormalFanReport, PolyhedronError> {
    if p.n != fan.n || p.vertices.len() != fan.maximal_cones.len() {
        return Err(PolyhedronError::DimensionMismatch);
    }
    let mut worst: Option<f64> = None;
    let mut samples = 0;
    for (c, v) in p.vertices.iter().enumerate() {
        for w in cone_samples(fan, c) {
            samples += 1;
            let own = v.gkz.dot(&w);
            let best_other = p
                .vertices
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != c)
                .map(|(_, o)| o.gkz.dot(&w))
                .fold(f64::NEG_INFINITY, f64::max);
            if best_other.is_finite() {
                let m = (own - best_other) / norm(&w);
                worst = Some(worst.map_or(m, |x: f64| x.min(m)));
            }
        }
    }
    let mut worst_wall_gap: f64 = 0.0;
    for (a, b, normal) in fan.walls() {
        let cone = &fan.maximal_cones[a];
        let fr: Vec<Vec<f64>> = cone.facet_rays(&normal).iter().map(|r| unit(&ray_f64(r))).collect();
        let mut w = vec![0.0; fan.n];
        for r in &fr {
            for k in 0..fan.n {
                w[k] += r[k];
            }
        }
        let w = unit(&w);
        let best = p.vertices.iter().map(|v| v.gkz.dot(&w)).fold(f64::NEG_INFINITY, f64::max);
        for k in [a, b] {
            worst_wall_gap = worst_wall_gap.max(best - p.vertices[k].gkz.dot(&w));
        }
    }
    let passed = worst.is_none_or(|m| m >= -tol) && worst_wall_gap <= tol;
    let report = NormalFanReport { samples, worst_margin: worst, worst_wall_gap, passed };
    if !passed {
        return Err(PolyhedronError::NormalFanMismatch { worst: worst.unwrap_or(0.0).min(-worst_wall_gap), tol });
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiftingSample {
    pub weight: Vec<Rational>,
    pub values: Vec<f64>,
    pub argmax: usize,
    /// Whether each triangulation is Delaunay at the weight.
    pub refines: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiftingReport {
    pub gkz: Vec<GkzVector>,
    pub samples: Vec<LiftingSample>,
    /// Every maximizer refines `D(w)` and every refining triangulation attains the maximum.
    pub passed: bool,
}

/// For sampled weights (cone centers and wall centers of `fan`), compares
/// `<w, phi_T>` over the triangulations reached from `d` by the flip logs `t_list`.
pub fn lifting_check(
    d: &DecoratedSurface,
    fan: &SecondaryFan,
    t_list: &[Vec<usize>],
    tail_tol: f64,
) -> Result<LiftingReport, PolyhedronError> {
    let tris: Vec<DecoratedSurface> = t_list.iter().map(|f| d.replay(f)).collect::<Result<_, _>>()?;
    let gkz: Vec<GkzVector> = t_list
        .par_iter()
        .map(|f| gkz_after_flips(d, f, tail_tol, None))
        .collect::<Result<_, _>>()?;
    let mut weights: Vec<Vec<Rational>> = fan.maximal_cones.iter().map(|c| c.interior_point()).collect();
    for (a, _, normal) in fan.walls() {
        let cone = &fan.maximal_cones[a];
        let mut p = vec![Rational::zero(); fan.n];
        for r in cone.facet_rays(&normal) {
            for (x, y) in p.iter_mut().zip(to_rational(&r)) {
                *x += y;
            }
        }
        if p.iter().all(|x| x.is_positive()) {
            weights.push(p);
        }
    }
    let mut samples = Vec::new();
    let mut passed = true;
    for w in weights {
        let wf: Vec<f64> = w.iter().map(to_f64).collect();
        let l1: f64 = wf.iter().map(|x| x.abs()).sum();
        let values: Vec<f64> = gkz.iter().map(|g| g.dot(&wf)).collect();
        let argmax = (0..values.len()).max_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
        let weighting = Weighting::new(w.clone())?;
        let refines: Vec<bool> = tris.iter().map(|t| t.is_delaunay(&weighting)).collect::<Result<_, _>>()?;
        let max = values.get(argmax).copied().unwrap_or(0.0);
        let ok = refines.get(argmax).copied().unwrap_or(true)
            && refines.iter().zip(&values).all(|(&r, &v)| !r || max - v <= 10.0 * tail_tol * l1);
        passed &= ok;
        samples.push(LiftingSample { weight: w, values, argmax, refines });
    }
    Ok(LiftingReport { gkz, samples, passed })
}

impl SecondaryPolyhedron {
    /// Copy with one vertex coordinate shifted, for fault injection.
    pub fn perturbed(&self, vertex: usize, coord: usize, delta: f64) -> Self {
        let mut p = self.clone();
        p.vertices[vertex].gkz.phi[coord] += delta;
        p
    }

    pub fn vertex_points(&self) -> Vec<Vec<f64>> {
        self.vertices.iter().map(|v| v.gkz.phi.clone()).collect()
    }

    /// Dimension of the affine hull of the vertices plus the recession orthant.
    pub fn dimension(&self) -> usize {
        // the recession cone already spans every direction
        if self.vertices.is_empty() {
            0
        } else {
            self.n
        }
    }

    pub fn to_json(&self) -> Value {
        let labels: Vec<Value> = self
            .vertices
            .iter()
            .map(|v| {
                json!({
                    "cone": v.cone,
                    "flips": v.flips,
                    "weak_edges": v.label.weak_edges,
                    "is_triangulation": v.label.is_triangulation(),
                })
            })
            .collect();
        json!({
            "n": self.n,
            "vertices": self.vertex_points(),
            "labels": labels,
            "bounded_edges": self.bounded_edges.iter().map(|&(a, b)| vec![a, b]).collect::<Vec<_>>(),
            "tail_tol": self.tail_tol,
        })
    }
}
