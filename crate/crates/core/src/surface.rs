//! Ideal triangulations of punctured surfaces as glued half-edges.
//!
//! Half-edge `h` lies on triangle `h / 3`; the three half-edges of a triangle
//! are ordered counterclockwise. The corner at the tail of `h` sits between
//! `prev(h)` and `h`, opposite to `next(h)`.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("pairing is not an involution on 0..{0}")]
    PairingNotInvolution(usize),
    #[error("half-edge {0} is paired with itself")]
    FixedHalfEdge(usize),
    #[error("Euler characteristic 2-2g-n = {0} is not negative")]
    NonNegativeEulerCharacteristic(i64),
    #[error("surface has no cusp")]
    NoCusp,
    #[error("gluing is not connected")]
    Disconnected,
    #[error("cusp index {0} out of range")]
    BadCuspIndex(usize),
    #[error("edge index {0} out of range")]
    BadEdgeIndex(usize),
    #[error("edge {0} is self-folded and cannot be flipped")]
    SelfFoldedEdge(usize),
}

#[inline]
pub fn next(h: usize) -> usize {
    3 * (h / 3) + (h % 3 + 1) % 3
}

#[inline]
pub fn prev(h: usize) -> usize {
    3 * (h / 3) + (h % 3 + 2) % 3
}

/// Corner of a triangle, named by the half-edge leaving it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Corner(pub usize);

impl Corner {
    pub fn triangle(self) -> usize {
        self.0 / 3
    }
    /// The two sides meeting at the corner: `(prev, h)`.
    pub fn sides(self) -> (usize, usize) {
        (prev(self.0), self.0)
    }
    pub fn opposite(self) -> usize {
        next(self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinatorialSurface {
    pair: Vec<usize>,
    edge_of: Vec<usize>,
    edges: Vec<[usize; 2]>,
    cusp: Vec<usize>,
    n_cusps: usize,
    genus: usize,
}

/// Result of a flip: the new surface and where every old half-edge slot went.
#[derive(Debug, Clone)]
pub struct Flip {
    pub surface: CombinatorialSurface,
    pub relabel: Vec<usize>,
}

impl CombinatorialSurface {
    /// Builds a surface from `triangles` and a list of glued half-edge pairs.
    /// Edge `k` is the `k`-th pair.
    pub fn new(triangles: usize, pairing: &[(usize, usize)]) -> Result<Self, SurfaceError> {
        let nh = 3 * triangles;
        if triangles == 0 {
            return Err(SurfaceError::NoCusp);
        }
        let mut pair = vec![usize::MAX; nh];
        let mut edge_of = vec![usize::MAX; nh];
        let mut edges = Vec::with_capacity(pairing.len());
        for (k, &(a, b)) in pairing.iter().enumerate() {
            if a == b {
                return Err(SurfaceError::FixedHalfEdge(a));
            }
            if a >= nh || b >= nh || pair[a] != usize::MAX || pair[b] != usize::MAX {
                return Err(SurfaceError::PairingNotInvolution(nh));
            }
            pair[a] = b;
            pair[b] = a;
            edge_of[a] = k;
            edge_of[b] = k;
            edges.push([a, b]);
        }
        if pair.contains(&usize::MAX) {
            return Err(SurfaceError::PairingNotInvolution(nh));
        }
        Self::from_parts(pair, edge_of, edges)
    }

    fn from_parts(pair: Vec<usize>, edge_of: Vec<usize>, edges: Vec<[usize; 2]>) -> Result<Self, SurfaceError> {
        let nh = pair.len();
        let mut cusp = vec![usize::MAX; nh];
        let mut n_cusps = 0;
        for start in 0..nh {
            if cusp[start] != usize::MAX {
                continue;
            }
            let mut h = start;
            loop {
                cusp[h] = n_cusps;
                h = next(pair[h]);
                if h == start {
                    break;
                }
            }
            n_cusps += 1;
        }
        if n_cusps == 0 {
            return Err(SurfaceError::NoCusp);
        }
        // connectivity over triangles
        let f = nh / 3;
        let mut seen = vec![false; f];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for k in 0..3 {
                let u = pair[3 * t + k] / 3;
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(SurfaceError::Disconnected);
        }
        let chi = f as i64 - edges.len() as i64 + n_cusps as i64;
        let two_g = 2 - chi;
        if two_g < 0 || two_g % 2 != 0 {
            return Err(SurfaceError::PairingNotInvolution(nh));
        }
        let punctured = chi - n_cusps as i64;
        if punctured >= 0 {
            return Err(SurfaceError::NonNegativeEulerCharacteristic(punctured));
        }
        Ok(Self { pair, edge_of, edges, cusp, n_cusps, genus: (two_g / 2) as usize })
    }

    pub fn num_triangles(&self) -> usize {
        self.pair.len() / 3
    }
    pub fn num_half_edges(&self) -> usize {
        self.pair.len()
    }
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }
    pub fn num_cusps(&self) -> usize {
        self.n_cusps
    }
    pub fn genus(&self) -> usize {
        self.genus
    }
    pub fn pair(&self, h: usize) -> usize {
        self.pair[h]
    }
    pub fn edge_of(&self, h: usize) -> usize {
        self.edge_of[h]
    }
    /// The two half-edges of edge `e`.
    pub fn half_edges(&self, e: usize) -> [usize; 2] {
        self.edges[e]
    }
    /// Cusp at the tail of `h`.
    pub fn tail_cusp(&self, h: usize) -> usize {
        self.cusp[h]
    }
    pub fn head_cusp(&self, h: usize) -> usize {
        self.cusp[next(h)]
    }
    pub fn pairing(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|&[a, b]| (a, b)).collect()
    }

    pub fn is_self_folded(&self, e: usize) -> bool {
        let [a, b] = self.edges[e];
        a / 3 == b / 3
    }

    /// Corners at cusp `i`, in rotation order starting from the smallest half-edge.
    pub fn corner_list(&self, i: usize) -> Result<Vec<Corner>, SurfaceError> {
        if i >= self.n_cusps {
            return Err(SurfaceError::BadCuspIndex(i));
        }
        let start = self.cusp.iter().position(|&c| c == i).expect("cusp has a corner");
        let mut out = Vec::new();
        let mut h = start;
        loop {
            out.push(Corner(h));
            h = next(self.pair[h]);
            if h == start {
                break;
            }
        }
        Ok(out)
    }

    /// Re-diagonalizes the quadrilateral around `e`. The edge keeps its id and
    /// its two half-edge slots; the four sides of the quadrilateral move.
    pub fn flip(&self, e: usize) -> Result<Flip, SurfaceError> {
        if e >= self.edges.len() {
            return Err(SurfaceError::BadEdgeIndex(e));
        }
        if self.is_self_folded(e) {
            return Err(SurfaceError::SelfFoldedEdge(e));
        }
        let [h, hp] = self.edges[e];
        let (t, i) = (h / 3, h % 3);
        let (tp, j) = (hp / 3, hp % 3);
        let (n, p) = (next(h), prev(h));
        let (np, pp) = (next(hp), prev(hp));
        let nh = self.pair.len();
        let mut m: Vec<usize> = (0..nh).collect();
        m[pp] = 3 * t + (i + 1) % 3;
        m[n] = 3 * t + (i + 2) % 3;
        m[p] = 3 * tp + (j + 1) % 3;
        m[np] = 3 * tp + (j + 2) % 3;

        let mut pair = vec![0; nh];
        let mut edge_of = vec![0; nh];
        let mut cusp = vec![0; nh];
        for x in 0..nh {
            pair[m[x]] = m[self.pair[x]];
            edge_of[m[x]] = self.edge_of[x];
            cusp[m[x]] = self.cusp[x];
        }
        // new diagonal: C -> D in t, D -> C in t'
        cusp[h] = self.cusp[p];
        cusp[hp] = self.cusp[pp];
        let edges = self.edges.iter().map(|&[a, b]| [m[a], m[b]]).collect();
        let surface = Self {
            pair,
            edge_of,
            edges,
            cusp,
            n_cusps: self.n_cusps,
            genus: self.genus,
        };
        Ok(Flip { surface, relabel: m })
    }

    /// Applies a half-edge relabeling (old slot -> new slot) to the gluing.
    pub fn relabeled(&self, m: &[usize]) -> Vec<(usize, usize)> {
        self.edges.iter().map(|&[a, b]| (m[a], m[b])).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus() -> CombinatorialSurface {
        CombinatorialSurface::new(2, &[(0, 3), (1, 4), (2, 5)]).unwrap()
    }

    #[test]
    fn once_punctured_torus() {
        let s = torus();
        assert_eq!((s.num_triangles(), s.num_edges(), s.num_cusps(), s.genus()), (2, 3, 1, 1));
        assert_eq!(s.corner_list(0).unwrap().len(), 6);
        assert_eq!(s.corner_list(1), Err(SurfaceError::BadCuspIndex(1)));
    }

    #[test]
    fn thrice_punctured_sphere() {
        let s = CombinatorialSurface::new(2, &[(0, 5), (1, 4), (2, 3)]).unwrap();
        assert_eq!((s.num_cusps(), s.genus()), (3, 0));
        for i in 0..3 {
            assert_eq!(s.corner_list(i).unwrap().len(), 2);
        }
    }

    #[test]
    fn rejects_bad_pairings() {
        assert_eq!(CombinatorialSurface::new(2, &[(0, 0), (1, 4), (2, 5)]), Err(SurfaceError::FixedHalfEdge(0)));
        assert!(matches!(
            CombinatorialSurface::new(2, &[(0, 3), (0, 4), (2, 5)]),
            Err(SurfaceError::PairingNotInvolution(_))
        ));
        assert!(matches!(CombinatorialSurface::new(2, &[(0, 3), (1, 4)]), Err(SurfaceError::PairingNotInvolution(_))));
    }

    #[test]
    fn self_folded_is_unflippable() {
        // triangle 0 folds its sides 1 and 2 together
        let s = CombinatorialSurface::new(2, &[(0, 3), (1, 2), (4, 5)]).unwrap();
        assert!(s.is_self_folded(1));
        assert_eq!(s.flip(1).unwrap_err(), SurfaceError::SelfFoldedEdge(1));
    }

    #[test]
    fn double_flip_is_relabeling() {
        let s = torus();
        for e in 0..3 {
            let a = s.flip(e).unwrap();
            let b = a.surface.flip(e).unwrap();
            let mut m: Vec<usize> = a.relabel.iter().map(|&x| b.relabel[x]).collect();
            // the diagonal comes back reversed: its two slots trade places
            let [h, hp] = s.half_edges(e);
            m.swap(h, hp);
            let norm = |v: Vec<(usize, usize)>| {
                let mut v: Vec<_> = v.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
                v.sort();
                v
            };
            let (want, got) = (norm(s.relabeled(&m)), norm(b.surface.pairing()));
            assert_eq!(want, got);
            for h in 0..6 {
                assert_eq!(b.surface.tail_cusp(m[h]), s.tail_cusp(h));
            }
        }
    }
}
