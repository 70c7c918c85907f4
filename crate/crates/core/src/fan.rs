//! Breadth-first enumeration of the secondary fan by wall crossing.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::cones::{dd_rays, ints_json, secondary_cone, ConeError, DecompositionLabel, SecondaryCone};
use crate::exact::{dot_int, rank, to_rational, Rational};
use crate::penner::{DecoratedSurface, PennerError, Weighting};

const MAX_RESAMPLES: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("seed weight {0} is not positive")]
    NonPositiveSeed(usize),
    #[error("facet lies in the boundary of the orthant")]
    BoundaryFacet,
    #[error("wall-crossing step fell below 2^-64")]
    StepUnderflow,
    #[error("no full-dimensional seed cone found after {0} samples")]
    NoGenericSeed(usize),
    #[error("unknown face {0}")]
    UnknownLabel(usize),
    #[error("fan is invalid: {0}")]
    Invalid(String),
    #[error(transparent)]
    Penner(#[from] PennerError),
    #[error(transparent)]
    Cone(#[from] ConeError),
}

impl From<crate::surface::SurfaceError> for FanError {
    fn from(e: crate::surface::SurfaceError) -> Self {
        FanError::Penner(e.into())
    }
}

/// A cone of the fan, named by its global ray indices.
#[derive(Debug, Clone)]
pub struct Face {
    pub rays: Vec<usize>,
    pub dim: usize,
    pub label: DecompositionLabel,
    /// Maximal cones containing this face.
    pub cones: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct SecondaryFan {
    pub n: usize,
    /// Distinct primitive rays, sorted.
    pub rays: Vec<Vec<BigInt>>,
    pub maximal_cones: Vec<SecondaryCone>,
    /// Global ray indices of each maximal cone.
    pub cone_rays: Vec<Vec<usize>>,
    /// Neighbor across each facet (`None` on the orthant boundary), indexed like `facets`.
    pub adjacency: Vec<Vec<Option<usize>>>,
    pub faces: Vec<Face>,
    pub f_vector: Vec<usize>,
    face_index: HashMap<Vec<usize>, usize>,
}

/// Random positive rational weights with numerators and denominators in 1..=1000.
pub fn random_weighting(rng: &mut impl Rng, n: usize) -> Weighting {
    let w = (0..n)
        .map(|_| crate::exact::rat(rng.gen_range(1..=1000), rng.gen_range(1..=1000)))
        .collect();
    Weighting::new(w).expect("positive weights")
}

/// Secondary cone of the Delaunay decomposition at `w`, flipping from `d`.
pub fn cone_at(d: &DecoratedSurface, w: &Weighting) -> Result<SecondaryCone, FanError> {
    let run = d.make_delaunay(w)?;
    Ok(secondary_cone(&run.surface, w)?)
}

/// Neighbor of `cone` across its facet with inward normal `facet`.
pub fn wall_cross(cone: &SecondaryCone, facet: &[BigInt]) -> Result<SecondaryCone, FanError> {
    if cone.is_boundary_facet(facet) {
        return Err(FanError::BoundaryFacet);
    }
    let frays = cone.facet_rays(facet);
    let n = cone.n;
    let mut p = vec![Rational::zero(); n];
    for r in &frays {
        for (x, y) in p.iter_mut().zip(r) {
            *x += Rational::from_integer(y.clone());
        }
    }
    let a = to_rational(facet);
    let floor = Rational::new(BigInt::one(), BigInt::one() << 64);
    let mut t = Rational::one();
    loop {
        let q: Vec<Rational> = p.iter().zip(&a).map(|(x, y)| x - &t * y).collect();
        if q.iter().all(|x| x.is_positive()) {
            let w = Weighting::new(q).expect("positive");
            let c = cone_at(&cone.label.reference, &w)?;
            if c.is_full() && c.rays != cone.rays && frays.iter().all(|r| c.contains_int(r)) {
                return Ok(c);
            }
        }
        t /= Rational::from_integer(BigInt::from(2));
        if t < floor {
            return Err(FanError::StepUnderflow);
        }
    }
}

fn seed_cone(d: &DecoratedSurface, seed: &Weighting, rng_seed: u64) -> Result<SecondaryCone, FanError> {
    let n = d.num_cusps();
    if seed.len() != n {
        return Err(PennerError::WeightLength { expected: n, got: seed.len() }.into());
    }
    if let Some(i) = seed.as_slice().iter().position(|x| !x.is_positive()) {
        return Err(FanError::NonPositiveSeed(i));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut w = seed.clone();
    for _ in 0..MAX_RESAMPLES {
        let c = cone_at(d, &w)?;
        if c.is_full() {
            return Ok(c);
        }
        w = random_weighting(&mut rng, n);
    }
    Err(FanError::NoGenericSeed(MAX_RESAMPLES))
}

/// Enumerates all maximal secondary cones reachable from the cone of `seed`.
pub fn enumerate_fan(d: &DecoratedSurface, seed: &Weighting, rng_seed: u64) -> Result<SecondaryFan, FanError> {
    let n = d.num_cusps();
    let start = seed_cone(d, seed, rng_seed)?;
    let mut cones: Vec<SecondaryCone> = Vec::new();
    let mut index: HashMap<Vec<Vec<BigInt>>, usize> = HashMap::new();
    let mut adjacency: Vec<Vec<Option<usize>>> = Vec::new();
    let mut frontier: VecDeque<(usize, usize)> = VecDeque::new();

    let mut insert = |c: SecondaryCone,
                      cones: &mut Vec<SecondaryCone>,
                      adjacency: &mut Vec<Vec<Option<usize>>>,
                      frontier: &mut VecDeque<(usize, usize)>| {
        if let Some(&i) = index.get(&c.rays) {
            return i;
        }
        let i = cones.len();
        index.insert(c.rays.clone(), i);
        for (k, f) in c.facets.iter().enumerate() {
            if !c.is_boundary_facet(f) {
                frontier.push_back((i, k));
            }
        }
        adjacency.push(vec![None; c.facets.len()]);
        cones.push(c);
        i
    };
    insert(start, &mut cones, &mut adjacency, &mut frontier);

    while !frontier.is_empty() {
        let batch: Vec<(usize, usize)> = frontier
            .drain(..)
            .filter(|&(c, k)| adjacency[c][k].is_none())
            .collect();
        let crossed: Vec<Result<SecondaryCone, FanError>> = batch
            .par_iter()
            .map(|&(c, k)| wall_cross(&cones[c], &cones[c].facets[k]))
            .collect();
        for (&(c, k), res) in batch.iter().zip(crossed) {
            let nb = res?;
            let j = insert(nb, &mut cones, &mut adjacency, &mut frontier);
            adjacency[c][k] = Some(j);
            let wall = cones[c].facet_rays(&cones[c].facets[k]);
            if let Some(kk) = (0..cones[j].facets.len()).find(|&kk| cones[j].facet_rays(&cones[j].facets[kk]) == wall) {
                adjacency[j][kk] = Some(c);
            }
        }
    }
    Ok(assemble(n, cones, adjacency))
}

fn assemble(n: usize, cones: Vec<SecondaryCone>, adjacency: Vec<Vec<Option<usize>>>) -> SecondaryFan {
    let mut all: Vec<Vec<BigInt>> = cones.iter().flat_map(|c| c.rays.iter().cloned()).collect();
    all.sort();
    all.dedup();
    let id: HashMap<&Vec<BigInt>, usize> = all.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let cone_rays: Vec<Vec<usize>> = cones
        .iter()
        .map(|c| {
            let mut v: Vec<usize> = c.rays.iter().map(|r| id[r]).collect();
            v.sort();
            v
        })
        .collect();

    let mut faces_by_key: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (ci, c) in cones.iter().enumerate() {
        let facet_sets: Vec<Vec<usize>> = c
            .facets
            .iter()
            .map(|f| {
                let mut v: Vec<usize> = c.facet_rays(f).iter().map(|r| id[r]).collect();
                v.sort();
                v
            })
            .collect();
        let mut lattice: Vec<Vec<usize>> = vec![cone_rays[ci].clone()];
        let mut layer = facet_sets.clone();
        while !layer.is_empty() {
            let mut next = Vec::new();
            for s in layer {
                if s.is_empty() || lattice.contains(&s) {
                    continue;
                }
                for f in &facet_sets {
                    let inter: Vec<usize> = s.iter().copied().filter(|x| f.contains(x)).collect();
                    if inter.len() < s.len() {
                        next.push(inter);
                    }
                }
                lattice.push(s);
            }
            layer = next;
        }
        for s in lattice {
            faces_by_key.entry(s).or_default().push(ci);
        }
    }

    let mut faces = Vec::new();
    let mut face_index = HashMap::new();
    let mut f_vector = vec![0; n];
    for (key, mut owners) in faces_by_key {
        owners.sort();
        owners.dedup();
        let rays: Vec<Vec<Rational>> = key.iter().map(|&i| to_rational(&all[i])).collect();
        let dim = rank(&rays);
        let c = &cones[owners[0]];
        let weak_edges = (0..c.inequalities.len())
            .filter(|&e| key.iter().all(|&i| dot_int(&c.inequalities[e], &all[i]).is_zero()))
            .collect();
        let label = DecompositionLabel { reference: c.label.reference.clone(), weak_edges };
        f_vector[dim - 1] += 1;
        face_index.insert(key.clone(), faces.len());
        faces.push(Face { rays: key, dim, label, cones: owners });
    }

    SecondaryFan { n, rays: all, maximal_cones: cones, cone_rays, adjacency, faces, f_vector, face_index }
}

/// Summary of the exact validity checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanValidation {
    pub interior_facets: usize,
    pub boundary_facets: usize,
    pub intersections_checked: usize,
}

impl SecondaryFan {
    pub fn f_vector(&self) -> &[usize] {
        &self.f_vector
    }

    pub fn face_id(&self, rays: &[usize]) -> Option<usize> {
        self.face_index.get(rays).copied()
    }

    /// Face id of maximal cone `c`.
    pub fn cone_face(&self, c: usize) -> usize {
        self.face_index[&self.cone_rays[c]]
    }

    /// Interior walls as pairs of adjacent maximal cones, each listed once.
    pub fn walls(&self) -> Vec<(usize, usize, Vec<BigInt>)> {
        let mut out = Vec::new();
        for (c, adj) in self.adjacency.iter().enumerate() {
            for (k, nb) in adj.iter().enumerate() {
                if let Some(j) = *nb {
                    if c < j {
                        out.push((c, j, self.maximal_cones[c].facets[k].clone()));
                    }
                }
            }
        }
        out
    }

    /// Label of the intersection of two faces, if it is not just the origin.
    pub fn common_coarsening(&self, a: usize, b: usize) -> Result<Option<usize>, FanError> {
        let fa = self.faces.get(a).ok_or(FanError::UnknownLabel(a))?;
        let fb = self.faces.get(b).ok_or(FanError::UnknownLabel(b))?;
        let inter: Vec<usize> = fa.rays.iter().copied().filter(|r| fb.rays.contains(r)).collect();
        if inter.is_empty() {
            return Ok(None);
        }
        self.face_id(&inter)
            .map(Some)
            .ok_or_else(|| FanError::Invalid(format!("intersection of faces {a} and {b} is not a face")))
    }

    pub fn maximal_keys(&self) -> Vec<Vec<Vec<BigInt>>> {
        let mut v: Vec<_> = self.maximal_cones.iter().map(|c| c.rays.clone()).collect();
        v.sort();
        v
    }

    /// Exact checks: facet sharing, pairwise intersections are faces, distinct cones.
    pub fn validate(&self) -> Result<FanValidation, FanError> {
        let mut facet_count: HashMap<Vec<Vec<BigInt>>, usize> = HashMap::new();
        let mut boundary = 0;
        for c in &self.maximal_cones {
            if !c.is_full() {
                return Err(FanError::Invalid("maximal cone is not full-dimensional".into()));
            }
            for f in &c.facets {
                if c.is_boundary_facet(f) {
                    boundary += 1;
                } else {
                    *facet_count.entry(c.facet_rays(f)).or_default() += 1;
                }
            }
        }
        if let Some((k, m)) = facet_count.iter().find(|(_, &m)| m != 2) {
            return Err(FanError::Invalid(format!("wall {k:?} is shared by {m} cones")));
        }
        for (c, adj) in self.adjacency.iter().enumerate() {
            for (k, nb) in adj.iter().enumerate() {
                let bnd = self.maximal_cones[c].is_boundary_facet(&self.maximal_cones[c].facets[k]);
                if nb.is_none() != bnd {
                    return Err(FanError::Invalid(format!("cone {c} facet {k} has inconsistent adjacency")));
                }
            }
        }
        if self.maximal_keys().windows(2).any(|w| w[0] == w[1]) {
            return Err(FanError::Invalid("duplicate maximal cone".into()));
        }
        let id: HashMap<&Vec<BigInt>, usize> = self.rays.iter().enumerate().map(|(i, r)| (r, i)).collect();
        let mut checked = 0;
        for i in 0..self.maximal_cones.len() {
            for j in i + 1..self.maximal_cones.len() {
                let (a, b) = (&self.maximal_cones[i], &self.maximal_cones[j]);
                let ineqs: Vec<Vec<BigInt>> = a.facets.iter().chain(&b.facets).cloned().collect();
                let key = match dd_rays(self.n, &ineqs, &[]) {
                    Ok(g) => {
                        if !g.lineality.is_empty() {
                            return Err(FanError::Invalid("intersection contains a line".into()));
                        }
                        let mut key = Vec::new();
                        for r in &g.rays {
                            match id.get(r) {
                                Some(&k) => key.push(k),
                                None => return Err(FanError::Invalid(format!("cones {i},{j} meet in a non-fan ray"))),
                            }
                        }
                        key.sort();
                        key
                    }
                    Err(ConeError::EmptyCone) => Vec::new(),
                    Err(e) => return Err(e.into()),
                };
                let common: Vec<usize> = self.cone_rays[i].iter().copied().filter(|r| self.cone_rays[j].contains(r)).collect();
                if key != common || (!key.is_empty() && self.face_id(&key).is_none()) {
                    return Err(FanError::Invalid(format!("cones {i},{j} do not meet in a common face")));
                }
                checked += 1;
            }
        }
        Ok(FanValidation {
            interior_facets: facet_count.len(),
            boundary_facets: boundary,
            intersections_checked: checked,
        })
    }

    pub fn to_json(&self) -> Value {
        let cones: Vec<Value> = self
            .maximal_cones
            .iter()
            .zip(&self.cone_rays)
            .map(|(c, r)| {
                json!({
                    "ray_indices": r,
                    "weak_edges": c.label.weak_edges,
                    "is_triangulation": c.label.is_triangulation(),
                })
            })
            .collect();
        json!({
            "n": self.n,
            "rays": ints_json(&self.rays),
            "maximal_cones": cones,
            "f_vector": self.f_vector,
        })
    }
}
