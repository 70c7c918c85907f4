//! Classical secondary fans and polytopes of point configurations, used as
//! an exactly checkable counterpart of the hyperbolic construction.
//!
//! Heights are lifted and the upper hull is taken: `D(w)` is refined by a
//! triangulation `T` iff the piecewise-affine interpolation of `w` on `T` is
//! concave and lies above every unused point.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::cones::{canonical_basis, dd_facets, dd_rays, ints_json, ConeError, Generators};
use crate::exact::{dot, format_rational, parse_rational, int, primitive, rank, rref, to_rational, Rational};

pub const MAX_POINTS: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EuclidError {
    #[error("points do not affinely span their ambient space")]
    Degenerate,
    #[error("points have inconsistent dimensions")]
    RaggedPoints,
    #[error("cells do not form a triangulation")]
    NotATriangulation,
    #[error("at most {MAX_POINTS} points are supported, got {0}")]
    TooManyPoints(usize),
    #[error("operation needs planar points in general position")]
    Unsupported,
    #[error("weight vector has length {got}, expected {expected}")]
    WeightLength { expected: usize, got: usize },
    #[error("secondary polytope has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("bad configuration document: {0}")]
    Parse(String),
    #[error(transparent)]
    Cone(#[from] ConeError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointConfiguration {
    points: Vec<Vec<Rational>>,
    d: usize,
}

/// Marked subdivision: each cell lists every point lying on its lifted face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EuclidSubdivision {
    pub cells: Vec<Vec<usize>>,
    pub is_triangulation: bool,
}

/// A triangulation as sorted simplices of point indices.
pub type Triangulation = Vec<Vec<usize>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EuclidCone {
    pub n: usize,
    /// One row per interior facet of `T` and per unused point: `row · w >= 0`.
    pub inequalities: Vec<Vec<BigInt>>,
    pub rays: Vec<Vec<BigInt>>,
    pub lineality: Vec<Vec<BigInt>>,
    pub facets: Vec<Vec<BigInt>>,
    pub dim: usize,
}

impl EuclidCone {
    pub fn contains(&self, w: &[Rational]) -> bool {
        self.inequalities.iter().all(|r| !dot(&to_rational(r), w).is_negative())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecondaryPolytope {
    pub triangulations: Vec<Triangulation>,
    pub gkz: Vec<Vec<Rational>>,
    /// Indices into `gkz` of the polytope's vertices.
    pub vertices: Vec<usize>,
    pub dim: usize,
    /// Number of faces of each dimension `0..dim`.
    pub f_vector: Vec<usize>,
    /// Facet normals of the homogenized cone.
    pub facets: Vec<Vec<BigInt>>,
}

impl SecondaryPolytope {
    pub fn to_json(&self) -> Value {
        let q = |v: &Vec<Rational>| v.iter().map(format_rational).collect::<Vec<_>>();
        json!({
            "vertices": self.vertices.iter().map(|&i| q(&self.gkz[i])).collect::<Vec<_>>(),
            "triangulations": self.triangulations,
            "dim": self.dim,
            "f_vector": self.f_vector,
            "facets": ints_json(&self.facets),
        })
    }
}

/// Solves for affine coefficients `mu` with `sum mu_k p_k = x`, `sum mu_k = 1`.
fn affine_coords(ps: &[&Vec<Rational>], x: &[Rational]) -> Option<Vec<Rational>> {
    let k = ps.len();
    let d = x.len();
    // rows: coordinates then the affine row; columns: mu_0..mu_{k-1} | rhs
    let mut m: Vec<Vec<Rational>> = Vec::with_capacity(d + 1);
    for i in 0..d {
        let mut row: Vec<Rational> = ps.iter().map(|p| p[i].clone()).collect();
        row.push(x[i].clone());
        m.push(row);
    }
    let mut last = vec![Rational::one(); k];
    last.push(Rational::one());
    m.push(last);
    let (r, piv) = rref(&m);
    if piv.contains(&k) || piv.len() < k {
        return None;
    }
    Some((0..k).map(|j| r[j][k].clone()).collect())
}

fn det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut s = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            s = -s;
        }
        s *= a[c][c].clone();
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    s
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

impl PointConfiguration {
    pub fn new(points: Vec<Vec<Rational>>) -> Result<Self, EuclidError> {
        let d = points.first().map_or(0, |p| p.len());
        if points.iter().any(|p| p.len() != d) {
            return Err(EuclidError::RaggedPoints);
        }
        let homog: Vec<Vec<Rational>> = points
            .iter()
            .map(|p| std::iter::once(Rational::one()).chain(p.iter().cloned()).collect())
            .collect();
        if d == 0 || rank(&homog) != d + 1 {
            return Err(EuclidError::Degenerate);
        }
        Ok(Self { points, d })
    }

    /// Parses `{"points": [["p/q", ...], ...]}`; plain JSON integers are accepted too.
    pub fn from_json(v: &Value) -> Result<Self, EuclidError> {
        let pts = v
            .get("points")
            .and_then(Value::as_array)
            .ok_or_else(|| EuclidError::Parse("missing array `points`".into()))?;
        let mut points = Vec::with_capacity(pts.len());
        for (i, p) in pts.iter().enumerate() {
            let coords = p.as_array().ok_or_else(|| EuclidError::Parse(format!("points[{i}] is not an array")))?;
            let row = coords
                .iter()
                .map(|c| {
                    let text = match c {
                        Value::String(s) => s.clone(),
                        Value::Number(n) if n.is_i64() => n.to_string(),
                        _ => return Err(EuclidError::Parse(format!("points[{i}] has a non-rational entry"))),
                    };
                    parse_rational(&text).map_err(|e| EuclidError::Parse(format!("points[{i}]: {e}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            points.push(row);
        }
        Self::new(points)
    }

    pub fn from_ints(points: &[&[i64]]) -> Result<Self, EuclidError> {
        Self::new(points.iter().map(|p| p.iter().map(|&x| int(x)).collect()).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
    pub fn dim(&self) -> usize {
        self.d
    }
    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    fn check_weights(&self, w: &[Rational]) -> Result<(), EuclidError> {
        if w.len() != self.len() {
            return Err(EuclidError::WeightLength { expected: self.len(), got: w.len() });
        }
        Ok(())
    }

    /// Euclidean volume of a simplex.
    pub fn volume(&self, s: &[usize]) -> Rational {
        let d = self.d;
        let m: Vec<Vec<Rational>> = (1..=d)
            .map(|k| (0..d).map(|i| &self.points[s[k]][i] - &self.points[s[0]][i]).collect())
            .collect();
        let fact: i64 = (1..=d as i64).product();
        det(&m).abs() / int(fact)
    }

    fn is_simplex(&self, s: &[usize]) -> bool {
        !self.volume(s).is_zero()
    }

    /// Upper-hull subdivision for heights `w`.
    pub fn regular_subdivision(&self, w: &[Rational]) -> Result<EuclidSubdivision, EuclidError> {
        self.check_weights(w)?;
        let n = self.len();
        let mut cells: BTreeSet<Vec<usize>> = BTreeSet::new();
        for s in subsets(n, self.d + 1) {
            if !self.is_simplex(&s) {
                continue;
            }
            let ps: Vec<&Vec<Rational>> = s.iter().map(|&i| &self.points[i]).collect();
            let mut tight = Vec::new();
            let mut upper = true;
            for b in 0..n {
                let mu = affine_coords(&ps, &self.points[b]).expect("simplex spans");
                let g = s.iter().zip(&mu).fold(Rational::zero(), |acc, (&i, m)| acc + m * &w[i]);
                if w[b] > g {
                    upper = false;
                    break;
                }
                if w[b] == g {
                    tight.push(b);
                }
            }
            if upper {
                cells.insert(tight);
            }
        }
        let cells: Vec<Vec<usize>> = cells.into_iter().collect();
        let is_triangulation = cells.iter().all(|c| c.len() == self.d + 1);
        Ok(EuclidSubdivision { cells, is_triangulation })
    }

    fn validate_triangulation(&self, t: &[Vec<usize>]) -> Result<(), EuclidError> {
        if t.iter().any(|s| s.len() != self.d + 1 || s.iter().any(|&i| i >= self.len()) || !self.is_simplex(s)) {
            return Err(EuclidError::NotATriangulation);
        }
        Ok(())
    }

    /// Cone of heights whose regular subdivision is refined by `t`.
    pub fn secondary_cone(&self, t: &[Vec<usize>]) -> Result<EuclidCone, EuclidError> {
        self.validate_triangulation(t)?;
        let n = self.len();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        let push = |simplex: &[usize], other: usize, rows: &mut Vec<Vec<BigInt>>| {
            let ps: Vec<&Vec<Rational>> = simplex.iter().map(|&i| &self.points[i]).collect();
            let mu = affine_coords(&ps, &self.points[other]).expect("simplex spans");
            let mut r = vec![Rational::zero(); n];
            for (&i, m) in simplex.iter().zip(&mu) {
                r[i] += m;
            }
            r[other] -= Rational::one();
            rows.push(primitive(&r));
        };
        for (a, s) in t.iter().enumerate() {
            for s2 in &t[a + 1..] {
                let shared = s.iter().filter(|x| s2.contains(x)).count();
                if shared == self.d {
                    let other = *s2.iter().find(|x| !s.contains(x)).expect("adjacent");
                    push(s, other, &mut rows);
                }
            }
        }
        let used: HashSet<usize> = t.iter().flatten().copied().collect();
        for b in (0..n).filter(|b| !used.contains(b)) {
            let host = t
                .iter()
                .find(|s| {
                    let ps: Vec<&Vec<Rational>> = s.iter().map(|&i| &self.points[i]).collect();
                    affine_coords(&ps, &self.points[b]).is_some_and(|mu| mu.iter().all(|m| !m.is_negative()))
                })
                .ok_or(EuclidError::NotATriangulation)?;
            push(host, b, &mut rows);
        }
        let g: Generators = dd_rays(n, &rows, &[])?;
        let f = dd_facets(n, &g)?;
        let span: Vec<Vec<Rational>> = g.rays.iter().chain(&g.lineality).map(|r| to_rational(r)).collect();
        Ok(EuclidCone {
            n,
            inequalities: rows,
            dim: rank(&span),
            rays: g.rays,
            lineality: canonical_basis(&g.lineality),
            facets: f.facets,
        })
    }

    /// `ell_a = sum of volumes of the simplices containing a`.
    pub fn gkz_vector(&self, t: &[Vec<usize>]) -> Result<Vec<Rational>, EuclidError> {
        self.validate_triangulation(t)?;
        let mut l = vec![Rational::zero(); self.len()];
        for s in t {
            let v = self.volume(s);
            for &i in s {
                l[i] += &v;
            }
        }
        Ok(l)
    }

    /// True iff every simplex of `t` lies in a cell of `sub`.
    pub fn refines(t: &[Vec<usize>], sub: &EuclidSubdivision) -> bool {
        t.iter().all(|s| sub.cells.iter().any(|c| s.iter().all(|x| c.contains(x))))
    }

    fn orient(&self, a: usize, b: usize, c: usize) -> i8 {
        let (p, q, r) = (&self.points[a], &self.points[b], &self.points[c]);
        let v = (&q[0] - &p[0]) * (&r[1] - &p[1]) - (&q[1] - &p[1]) * (&r[0] - &p[0]);
        crate::exact::sign(&v)
    }

    fn in_general_position(&self) -> bool {
        subsets(self.len(), 3).iter().all(|s| self.orient(s[0], s[1], s[2]) != 0)
    }

    fn seed_triangulation(&self) -> Triangulation {
        // heights -|a|^2 give the Delaunay triangulation; break ties by index
        let mut w: Vec<Rational> = self
            .points
            .iter()
            .map(|p| -p.iter().fold(Rational::zero(), |s, x| s + x * x))
            .collect();
        let mut k = 1i64;
        loop {
            let sub = self.regular_subdivision(&w).expect("weights sized");
            if sub.is_triangulation {
                return sub.cells;
            }
            for (i, x) in w.iter_mut().enumerate() {
                *x += Rational::new(BigInt::from((i as i64 * 7919 + k) % 97), BigInt::from(1000 * k));
            }
            k += 1;
        }
    }

    fn neighbors(&self, t: &Triangulation) -> Vec<Triangulation> {
        let mut out = Vec::new();
        let norm = |mut v: Vec<Vec<usize>>| {
            for s in v.iter_mut() {
                s.sort();
            }
            v.sort();
            v
        };
        // 2-2 flips
        for a in 0..t.len() {
            for b in a + 1..t.len() {
                let shared: Vec<usize> = t[a].iter().copied().filter(|x| t[b].contains(x)).collect();
                if shared.len() != 2 {
                    continue;
                }
                let c = *t[a].iter().find(|x| !shared.contains(x)).unwrap();
                let d = *t[b].iter().find(|x| !shared.contains(x)).unwrap();
                let (p, q) = (shared[0], shared[1]);
                if self.orient(p, q, c) * self.orient(p, q, d) < 0 && self.orient(c, d, p) * self.orient(c, d, q) < 0 {
                    let mut nt: Vec<Vec<usize>> =
                        t.iter().enumerate().filter(|&(i, _)| i != a && i != b).map(|(_, s)| s.clone()).collect();
                    nt.push(vec![p, c, d]);
                    nt.push(vec![q, c, d]);
                    out.push(norm(nt));
                }
            }
        }
        // 1-3 insertions
        let used: HashSet<usize> = t.iter().flatten().copied().collect();
        for b in (0..self.len()).filter(|b| !used.contains(b)) {
            for (i, s) in t.iter().enumerate() {
                let (x, y, z) = (s[0], s[1], s[2]);
                let o = self.orient(x, y, z);
                if self.orient(x, y, b) == o && self.orient(y, z, b) == o && self.orient(z, x, b) == o {
                    let mut nt: Vec<Vec<usize>> = t.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, s)| s.clone()).collect();
                    nt.push(vec![x, y, b]);
                    nt.push(vec![y, z, b]);
                    nt.push(vec![z, x, b]);
                    out.push(norm(nt));
                }
            }
        }
        // 3-1 removals of interior degree-3 vertices
        for &v in &used {
            let star: Vec<usize> = (0..t.len()).filter(|&i| t[i].contains(&v)).collect();
            if star.len() != 3 {
                continue;
            }
            let mut link: Vec<usize> = star.iter().flat_map(|&i| t[i].iter().copied()).filter(|&x| x != v).collect();
            link.sort();
            link.dedup();
            if link.len() != 3 {
                continue;
            }
            let (x, y, z) = (link[0], link[1], link[2]);
            let o = self.orient(x, y, z);
            if self.orient(x, y, v) == o && self.orient(y, z, v) == o && self.orient(z, x, v) == o {
                let mut nt: Vec<Vec<usize>> =
                    t.iter().enumerate().filter(|(j, _)| !star.contains(j)).map(|(_, s)| s.clone()).collect();
                nt.push(vec![x, y, z]);
                out.push(norm(nt));
            }
        }
        out
    }

    /// All triangulations (possibly omitting interior points) by exhaustive flipping.
    pub fn triangulations(&self) -> Result<Vec<Triangulation>, EuclidError> {
        if self.len() > MAX_POINTS {
            return Err(EuclidError::TooManyPoints(self.len()));
        }
        if self.d != 2 || !self.in_general_position() {
            return Err(EuclidError::Unsupported);
        }
        let start = self.seed_triangulation();
        let mut seen: HashSet<Triangulation> = HashSet::new();
        let mut queue = VecDeque::from([start.clone()]);
        seen.insert(start);
        let mut out = Vec::new();
        while let Some(t) = queue.pop_front() {
            for nb in self.neighbors(&t) {
                if seen.insert(nb.clone()) {
                    queue.push_back(nb);
                }
            }
            out.push(t);
        }
        out.sort();
        Ok(out)
    }

    /// Convex hull of the GKZ vectors of all triangulations.
    pub fn secondary_polytope(&self) -> Result<SecondaryPolytope, EuclidError> {
        let triangulations = self.triangulations()?;
        let gkz: Vec<Vec<Rational>> = triangulations.iter().map(|t| self.gkz_vector(t)).collect::<Result<_, _>>()?;
        let n = self.len();
        let homog: Vec<Vec<Rational>> = gkz
            .iter()
            .map(|l| std::iter::once(Rational::one()).chain(l.iter().cloned()).collect())
            .collect();
        let mut gens: Vec<Vec<BigInt>> = homog.iter().map(|h| primitive(h)).collect();
        gens.sort();
        gens.dedup();
        let g = Generators { rays: gens, lineality: Vec::new() };
        let f = dd_facets(n + 1, &g)?;
        let dim = rank(&homog) - 1;
        let expected = n - self.d - 1;
        if dim != expected {
            return Err(EuclidError::DimensionMismatch { expected, got: dim });
        }
        let incid = |h: &Vec<Rational>| -> Vec<usize> {
            (0..f.facets.len()).filter(|&k| dot(&to_rational(&f.facets[k]), h).is_zero()).collect()
        };
        let mut vertices = Vec::new();
        let mut vkeys: Vec<Vec<Rational>> = Vec::new();
        for (i, h) in homog.iter().enumerate() {
            let inc: Vec<Vec<Rational>> = incid(h).iter().map(|&k| to_rational(&f.facets[k])).collect();
            if rank(&inc) == dim && !vkeys.contains(&gkz[i]) {
                vkeys.push(gkz[i].clone());
                vertices.push(i);
            }
        }
        // faces as vertex sets: intersections of facet vertex sets
        let facet_sets: Vec<BTreeSet<usize>> = (0..f.facets.len())
            .map(|k| {
                vertices
                    .iter()
                    .copied()
                    .filter(|&v| dot(&to_rational(&f.facets[k]), &homog[v]).is_zero())
                    .collect()
            })
            .collect();
        let mut faces: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        let mut layer: Vec<BTreeSet<usize>> = facet_sets.clone();
        while !layer.is_empty() {
            let mut next = Vec::new();
            for s in layer {
                if s.is_empty() || faces.contains(&s) {
                    continue;
                }
                for fs in &facet_sets {
                    let inter: BTreeSet<usize> = s.intersection(fs).copied().collect();
                    if inter.len() < s.len() {
                        next.push(inter);
                    }
                }
                faces.insert(s);
            }
            layer = next;
        }
        let mut f_vector = vec![0; dim.max(1)];
        for face in &faces {
            let rows: Vec<Vec<Rational>> = face.iter().map(|&v| homog[v].clone()).collect();
            let fd = rank(&rows) - 1;
            if fd < dim {
                f_vector[fd] += 1;
            }
        }
        if dim == 0 {
            f_vector = vec![vertices.len()];
        }
        Ok(SecondaryPolytope { triangulations, gkz, vertices, dim, f_vector, facets: f.facets })
    }
}
