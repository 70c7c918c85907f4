//! Floating-point developing map in the Minkowski light cone.
//!
//! Lifts are light-like vectors of `R^{2,1}` with `<u,v> = u1v1 + u2v2 - u3v3`.
//! Two lifts `u, v` of decorated ideal points satisfy `<u,v> = -2 λ²`.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use thiserror::Error;

use crate::exact::to_f64;
use crate::penner::{DecoratedSurface, PennerError};
use crate::surface::{next, prev};

pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];

pub const DEFAULT_TRIANGLE_BUDGET: usize = 10_000_000;
pub const BASE_CONVENTION: &str = "base-triangle-inf-0-1";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DevelopError {
    #[error("lambda-length {0} is not positive")]
    NonPositiveLambda(f64),
    #[error("lifts of the shared edge are degenerate")]
    DegenerateEdge,
    #[error("third coordinate {0} is not positive")]
    NonPositiveHeightComponent(f64),
    #[error("tail bound {bound:e} still above {tol:e} after {budget} triangles")]
    TailBoundNotReached { bound: f64, tol: f64, budget: usize },
    #[error("tail tolerance must be positive")]
    BadTolerance,
    #[error("matrix is not an orthochronous Minkowski isometry")]
    NotIsometry,
    #[error(transparent)]
    Penner(#[from] PennerError),
}

#[inline]
pub fn minkowski(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] - a[2] * b[2]
}

/// Light-cone lift of the ideal point `p` of the upper half-plane (`None` is ∞), scaled by `c`.
pub fn light_cone_point(p: Option<f64>, c: f64) -> Vec3 {
    match p {
        None => [0.0, c, c],
        Some(p) => [c * 2.0 * p, c * (p * p - 1.0), c * (p * p + 1.0)],
    }
}

/// Lifts of a decorated ideal triangle at ∞, 0, 1. `l01`, `l12`, `l20` are the
/// λ-lengths of the sides between consecutive vertices.
pub fn lift_base_triangle(l01: f64, l12: f64, l20: f64) -> Result<[Vec3; 3], DevelopError> {
    for l in [l01, l12, l20] {
        if !(l > 0.0) {
            return Err(DevelopError::NonPositiveLambda(l));
        }
    }
    let c_inf = l01 * l20 / l12;
    let c0 = l01 * l12 / l20;
    let c1 = l12 * l20 / l01;
    Ok([light_cone_point(None, c_inf), light_cone_point(Some(0.0), c0), light_cone_point(Some(1.0), c1)])
}

/// Lift of the vertex across the edge `a -> b` from `opp`, where the new
/// triangle has λ-lengths `l_e` on the shared edge, `l_ad` from `a` and `l_bd` from `b`.
pub fn extend_across_edge(a: &Vec3, b: &Vec3, opp: &Vec3, l_e: f64, l_ad: f64, l_bd: f64) -> Result<Vec3, DevelopError> {
    let e2 = l_e * l_e;
    let alpha = l_bd * l_bd / e2;
    let beta = l_ad * l_ad / e2;
    // J (a × b) is Minkowski-orthogonal to a and b
    let nrm = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        -(a[0] * b[1] - a[1] * b[0]),
    ];
    let nn = minkowski(&nrm, &nrm);
    if !(nn > 0.0) {
        return Err(DevelopError::DegenerateEdge);
    }
    let side = minkowski(opp, &nrm);
    if side == 0.0 {
        return Err(DevelopError::DegenerateEdge);
    }
    let g = (alpha * beta / e2).sqrt() * (4.0 * e2 * e2 / nn).sqrt();
    let gamma = if side > 0.0 { -g } else { g };
    Ok([
        alpha * a[0] + beta * b[0] + gamma * nrm[0],
        alpha * a[1] + beta * b[1] + gamma * nrm[1],
        alpha * a[2] + beta * b[2] + gamma * nrm[2],
    ])
}

/// `(1/v3)(v1, v2, 1)`: light-cone vectors land on the unit cylinder.
pub fn to_hemisphere(v: &Vec3) -> Result<Vec3, DevelopError> {
    if !(v[2] > 0.0) {
        return Err(DevelopError::NonPositiveHeightComponent(v[2]));
    }
    Ok([v[0] / v[2], v[1] / v[2], 1.0 / v[2]])
}

/// Height over the cylinder of the horocycle with weight `w` whose unit lift is `v`.
pub fn height(v: &Vec3, w: f64) -> f64 {
    w / v[2]
}

pub fn identity() -> Mat3 {
    [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
}

/// Rotation about the time axis.
pub fn rotation(theta: f64) -> Mat3 {
    let (s, c) = theta.sin_cos();
    [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
}

/// Boost along the first space axis.
pub fn boost(t: f64) -> Mat3 {
    let (s, c) = (t.sinh(), t.cosh());
    [[c, 0.0, s], [0.0, 1.0, 0.0], [s, 0.0, c]]
}

pub fn mat_mul(m: &Mat3, v: &Vec3) -> Vec3 {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

pub fn check_isometry(m: &Mat3) -> Result<(), DevelopError> {
    let j = [1.0, 1.0, -1.0];
    for r in 0..3 {
        for c in 0..3 {
            let g: f64 = (0..3).map(|k| m[k][r] * j[k] * m[k][c]).sum();
            let want = if r == c { j[r] } else { 0.0 };
            if (g - want).abs() > 1e-9 * (1.0 + m[r][r].abs() + m[c][c].abs()) {
                return Err(DevelopError::NotIsometry);
            }
        }
    }
    if m[2][2] <= 0.0 {
        return Err(DevelopError::NotIsometry);
    }
    Ok(())
}

/// Lifts of one triangle of a triangulation, indexed by the position of the
/// half-edge whose tail they lift. Carried through flips so that every
/// triangulation reached from the input develops with the same base point.
#[derive(Debug, Clone, PartialEq)]
pub struct Anchor {
    pub triangle: usize,
    pub lifts: [Vec3; 3],
}

fn lam(d: &DecoratedSurface, h: usize) -> f64 {
    to_f64(d.lambda_he(h))
}

impl Anchor {
    /// Triangle 0 placed at ∞, 0, 1, optionally moved by an isometry.
    pub fn base(d: &DecoratedSurface, transform: Option<&Mat3>) -> Result<Self, DevelopError> {
        let mut lifts = lift_base_triangle(lam(d, 0), lam(d, 1), lam(d, 2))?;
        if let Some(m) = transform {
            check_isometry(m)?;
            for v in lifts.iter_mut() {
                *v = mat_mul(m, v);
            }
        }
        Ok(Self { triangle: 0, lifts })
    }

    /// Anchor on the surface obtained from `d` by flipping `e`.
    pub fn after_flip(&self, d: &DecoratedSurface, e: usize) -> Result<Self, DevelopError> {
        let s = d.surface();
        let [h, hp] = s.half_edges(e);
        let (t, i) = (h / 3, h % 3);
        let (tp, j) = (hp / 3, hp % 3);
        let mut out = self.clone();
        if self.triangle == t {
            let (a, b, c) = (self.lifts[i], self.lifts[(i + 1) % 3], self.lifts[(i + 2) % 3]);
            let dd = extend_across_edge(&a, &b, &c, lam(d, h), lam(d, next(hp)), lam(d, prev(hp)))?;
            out.lifts[i] = c;
            out.lifts[(i + 1) % 3] = dd;
            out.lifts[(i + 2) % 3] = b;
        } else if self.triangle == tp {
            let (b, a, dd) = (self.lifts[j], self.lifts[(j + 1) % 3], self.lifts[(j + 2) % 3]);
            let c = extend_across_edge(&b, &a, &dd, lam(d, hp), lam(d, next(h)), lam(d, prev(h)))?;
            out.lifts[j] = dd;
            out.lifts[(j + 1) % 3] = c;
            out.lifts[(j + 2) % 3] = a;
        }
        Ok(out)
    }

    /// Replays a flip log from `d`, returning the final surface and anchor.
    pub fn replay(&self, d: &DecoratedSurface, flips: &[usize]) -> Result<(DecoratedSurface, Self), DevelopError> {
        let mut a = self.clone();
        let mut cur = d.clone();
        for &e in flips {
            a = a.after_flip(&cur, e)?;
            cur = cur.ptolemy_flip(e)?;
        }
        Ok((cur, a))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DevelopedTriangle {
    pub triangle: usize,
    pub lifts: [Vec3; 3],
    pub klein: [[f64; 2]; 3],
    pub cusps: [usize; 3],
    /// Unit-weight heights `z_p(1)` of the three vertices.
    pub heights: [f64; 3],
    pub euclid_area: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DevelopOptions {
    pub tail_tol: f64,
    pub budget: usize,
}

impl DevelopOptions {
    pub fn new(tail_tol: f64) -> Self {
        Self { tail_tol, budget: DEFAULT_TRIANGLE_BUDGET }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DevelopSummary {
    pub triangles: usize,
    pub covered_area: f64,
    pub max_height: f64,
    pub tail_bound: f64,
    /// Largest relative deviation of `<u,v>` from `-2λ²` on developed edges.
    pub max_drift: f64,
}

/// Neumaier-compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

struct Pending {
    area: f64,
    seq: u64,
    tri: DevelopedTriangle,
    from: usize,
}

impl PartialEq for Pending {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Pending {}
impl PartialOrd for Pending {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Pending {
    fn cmp(&self, o: &Self) -> Ordering {
        self.area.total_cmp(&o.area).then_with(|| o.seq.cmp(&self.seq))
    }
}

fn signed_area(k: &[[f64; 2]; 3]) -> f64 {
    let (a, b, c) = (k[0], k[1], k[2]);
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
}

struct Developer<'a> {
    d: &'a DecoratedSurface,
    unit_scale: Vec<f64>,
}

impl Developer<'_> {
    fn make(&self, t: usize, lifts: [Vec3; 3]) -> Result<DevelopedTriangle, DevelopError> {
        let s = self.d.surface();
        let mut klein = [[0.0; 2]; 3];
        let mut cusps = [0; 3];
        let mut heights = [0.0; 3];
        for k in 0..3 {
            let v = &lifts[k];
            if !(v[2] > 0.0) {
                return Err(DevelopError::NonPositiveHeightComponent(v[2]));
            }
            klein[k] = [v[0] / v[2], v[1] / v[2]];
            cusps[k] = s.tail_cusp(3 * t + k);
            heights[k] = 1.0 / (self.unit_scale[cusps[k]] * v[2]);
        }
        let euclid_area = signed_area(&klein);
        Ok(DevelopedTriangle { triangle: t, lifts, klein, cusps, heights, euclid_area })
    }

    fn child(&self, tri: &DevelopedTriangle, k: usize) -> Result<(DevelopedTriangle, usize), DevelopError> {
        let s = self.d.surface();
        let h = 3 * tri.triangle + k;
        let g = s.pair(h);
        let (t2, m) = (g / 3, g % 3);
        let a = tri.lifts[k];
        let b = tri.lifts[(k + 1) % 3];
        let opp = tri.lifts[(k + 2) % 3];
        let v = extend_across_edge(&a, &b, &opp, lam(self.d, h), lam(self.d, next(g)), lam(self.d, prev(g)))?;
        let mut lifts = [[0.0; 3]; 3];
        lifts[m] = b;
        lifts[(m + 1) % 3] = a;
        lifts[(m + 2) % 3] = v;
        Ok((self.make(t2, lifts)?, m))
    }

    fn drift(&self, tri: &DevelopedTriangle) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..3 {
            let l = lam(self.d, 3 * tri.triangle + k);
            let want = -2.0 * l * l;
            let got = minkowski(&tri.lifts[k], &tri.lifts[(k + 1) % 3]);
            worst = worst.max(((got - want) / want).abs());
        }
        worst
    }
}

/// Develops the universal cover from `anchor`, largest Klein area first,
/// until `3 H (π - covered) < tail_tol`, where `H` is twice the largest
/// unit height seen. A triangle adds at most `3 H area` to any GKZ
/// coordinate, so the bound covers each coordinate of the remainder.
/// Every developed triangle is passed to `visit`.
pub fn develop(
    d: &DecoratedSurface,
    anchor: &Anchor,
    opts: DevelopOptions,
    mut visit: impl FnMut(&DevelopedTriangle),
) -> Result<DevelopSummary, DevelopError> {
    if !(opts.tail_tol > 0.0) {
        return Err(DevelopError::BadTolerance);
    }
    let unit_scale: Vec<f64> = d.cusp_weights().iter().map(to_f64).collect();
    let dev = Developer { d, unit_scale };
    let root = dev.make(anchor.triangle, anchor.lifts)?;
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    heap.push(Pending { area: root.euclid_area, seq, tri: root, from: 3 });
    let mut covered = Accumulator::default();
    let mut hmax: f64 = 0.0;
    let mut drift: f64 = 0.0;
    let mut count = 0usize;
    let bound = |covered: f64, hmax: f64| 3.0 * (2.0 * hmax) * (PI - covered).max(0.0);
    while let Some(p) = heap.pop() {
        let tri = p.tri;
        visit(&tri);
        count += 1;
        covered.add(tri.euclid_area);
        for z in tri.heights {
            hmax = hmax.max(z);
        }
        if count % 1024 == 1 {
            drift = drift.max(dev.drift(&tri));
        }
        if bound(covered.value(), hmax) < opts.tail_tol {
            break;
        }
        if count >= opts.budget {
            return Err(DevelopError::TailBoundNotReached {
                bound: bound(covered.value(), hmax),
                tol: opts.tail_tol,
                budget: opts.budget,
            });
        }
        for k in 0..3 {
            if k == p.from {
                continue;
            }
            let (c, m) = dev.child(&tri, k)?;
            seq += 1;
            heap.push(Pending { area: c.euclid_area, seq, tri: c, from: m });
        }
    }
    let covered_area = covered.value();
    Ok(DevelopSummary {
        triangles: count,
        covered_area,
        max_height: hmax,
        tail_bound: bound(covered_area, hmax),
        max_drift: drift,
    })
}

/// Approximate GKZ vector.
#[derive(Debug, Clone, PartialEq)]
pub struct GkzVector {
    pub phi: Vec<f64>,
    pub tol: f64,
    pub triangles_developed: usize,
    pub covered_area: f64,
    pub base_convention: String,
}

impl GkzVector {
    pub fn dot(&self, w: &[f64]) -> f64 {
        self.phi.iter().zip(w).map(|(a, b)| a * b).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "phi": self.phi,
            "tail_tol": self.tol,
            "triangles_developed": self.triangles_developed,
            "base_convention": self.base_convention,
        })
    }
}

/// How a developed triangle distributes its prism volume over the cusps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GkzFormula {
    /// Vertex `p` adds `area * z_p(1)` to the coordinate of its cusp, so that
    /// `<w, phi> / 3` is the dome volume at weight `w`.
    #[default]
    PerVertex,
    /// Vertex `p` adds `area * (z_p(1) + z_q(1) + z_r(1))` to its cusp's coordinate.
    TriangleSum,
}

/// GKZ vector of the triangulation of `d`, developed from `anchor`.
pub fn gkz_vector(d: &DecoratedSurface, anchor: &Anchor, tail_tol: f64) -> Result<GkzVector, DevelopError> {
    gkz_vector_with(d, anchor, tail_tol, GkzFormula::PerVertex)
}

pub fn gkz_vector_with(
    d: &DecoratedSurface,
    anchor: &Anchor,
    tail_tol: f64,
    formula: GkzFormula,
) -> Result<GkzVector, DevelopError> {
    let n = d.num_cusps();
    let mut acc = vec![Accumulator::default(); n];
    let summary = develop(d, anchor, DevelopOptions::new(tail_tol), |t| {
        let total: f64 = t.heights.iter().sum();
        for k in 0..3 {
            let z = match formula {
                GkzFormula::PerVertex => t.heights[k],
                GkzFormula::TriangleSum => total,
            };
            acc[t.cusps[k]].add(t.euclid_area * z);
        }
    })?;
    Ok(GkzVector {
        phi: acc.iter().map(Accumulator::value).collect(),
        tol: match formula {
            GkzFormula::PerVertex => tail_tol,
            GkzFormula::TriangleSum => 3.0 * tail_tol,
        },
        triangles_developed: summary.triangles,
        covered_area: summary.covered_area,
        base_convention: BASE_CONVENTION.to_string(),
    })
}

/// GKZ vector of the triangulation reached from `input` by `flips`, with the
/// base point fixed on `input`.
pub fn gkz_after_flips(
    input: &DecoratedSurface,
    flips: &[usize],
    tail_tol: f64,
    transform: Option<&Mat3>,
) -> Result<GkzVector, DevelopError> {
    let base = Anchor::base(input, transform)?;
    let (d, anchor) = base.replay(input, flips)?;
    gkz_vector(&d, &anchor, tail_tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Vec3, b: &Vec3) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn unit_base_triangle() {
        let l = lift_base_triangle(1.0, 1.0, 1.0).unwrap();
        assert!(close(&l[0], &[0.0, 1.0, 1.0]));
        assert!(close(&l[1], &[0.0, -1.0, 1.0]));
        assert!(close(&l[2], &[2.0, 0.0, 2.0]));
        for i in 0..3 {
            assert!((minkowski(&l[i], &l[(i + 1) % 3]) + 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn extension_reaches_minus_one() {
        let v = extend_across_edge(&[0.0, 1.0, 1.0], &[0.0, -1.0, 1.0], &[2.0, 0.0, 2.0], 1.0, 1.0, 1.0).unwrap();
        assert!(close(&v, &[-2.0, 0.0, 2.0]), "{v:?}");
        let back = extend_across_edge(&[0.0, 1.0, 1.0], &[0.0, -1.0, 1.0], &v, 1.0, 1.0, 1.0).unwrap();
        assert!(close(&back, &[2.0, 0.0, 2.0]));
    }

    #[test]
    fn hemisphere_and_height() {
        assert_eq!(to_hemisphere(&[0.0, 0.0, 1.0]).unwrap(), [0.0, 0.0, 1.0]);
        let p = to_hemisphere(&[3.0, 4.0, 5.0]).unwrap();
        assert!(close(&p, &[0.6, 0.8, 0.2]));
        assert!((height(&[3.0, 4.0, 5.0], 1.0) - 0.2).abs() < 1e-15);
        assert!(to_hemisphere(&[1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn isometries() {
        check_isometry(&rotation(0.3)).unwrap();
        check_isometry(&boost(0.7)).unwrap();
        assert_eq!(check_isometry(&[[2.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]), Err(DevelopError::NotIsometry));
    }
}
