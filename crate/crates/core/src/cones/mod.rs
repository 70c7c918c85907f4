//! Secondary cones: the weights for which a given triangulation satisfies
//! every local Delaunay inequality.

pub mod dd;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

pub use dd::{canonical_basis, dd_facets, dd_rays, FacetDescription, Generators};

use crate::exact::{dot, dot_int, primitive, rank, to_rational, Rational};
use crate::penner::{DecoratedSurface, PennerError, Weighting};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConeError {
    #[error("inequality system describes only the origin")]
    EmptyCone,
    #[error("ambient dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("triangulation is not Delaunay for the weight: edge {0} has negative margin")]
    NotDelaunayForWeight(usize),
    #[error("cone contains a line")]
    NotPointed,
    #[error(transparent)]
    Penner(#[from] PennerError),
}

/// A Delaunay decomposition, stored as a triangulation refining it together
/// with the edges that must be removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionLabel {
    pub reference: DecoratedSurface,
    pub weak_edges: Vec<usize>,
}

impl DecompositionLabel {
    pub fn is_triangulation(&self) -> bool {
        self.weak_edges.is_empty()
    }

    pub fn kept_edges(&self) -> Vec<usize> {
        (0..self.reference.surface().num_edges()).filter(|e| !self.weak_edges.contains(e)).collect()
    }
}

#[derive(Debug, Clone)]
pub struct SecondaryCone {
    pub n: usize,
    /// Primitive margin row per edge of the reference triangulation (zero rows kept).
    pub inequalities: Vec<Vec<BigInt>>,
    /// Edges whose rows are imposed as equalities.
    pub equalities: Vec<usize>,
    /// Cusps whose weight is imposed to vanish.
    pub zero_weights: Vec<usize>,
    pub rays: Vec<Vec<BigInt>>,
    pub facets: Vec<Vec<BigInt>>,
    pub equations: Vec<Vec<BigInt>>,
    pub dim: usize,
    pub label: DecompositionLabel,
}

fn unit_row(n: usize, i: usize) -> Vec<BigInt> {
    (0..n).map(|j| BigInt::from((i == j) as i32)).collect()
}

/// Secondary cone of the decomposition `D(w)`, described through the
/// reference triangulation `d`, which must be Delaunay for `w`.
pub fn secondary_cone(d: &DecoratedSurface, w: &Weighting) -> Result<SecondaryCone, ConeError> {
    let n = d.num_cusps();
    if w.len() != n {
        return Err(ConeError::DimensionMismatch { expected: n, got: w.len() });
    }
    let rows = d.margin_rows();
    let mut equalities = Vec::new();
    for (e, r) in rows.iter().enumerate() {
        let m = dot(r, w.as_slice());
        if m.is_negative() {
            return Err(ConeError::NotDelaunayForWeight(e));
        }
        if m.is_zero() {
            equalities.push(e);
        }
    }
    let zero_weights: Vec<usize> = (0..n).filter(|&i| w.as_slice()[i].is_zero()).collect();
    let inequalities: Vec<Vec<BigInt>> = rows.iter().map(|r| primitive(r)).collect();
    build(n, inequalities, equalities, zero_weights, d.clone())
}

fn build(
    n: usize,
    inequalities: Vec<Vec<BigInt>>,
    equalities: Vec<usize>,
    zero_weights: Vec<usize>,
    reference: DecoratedSurface,
) -> Result<SecondaryCone, ConeError> {
    let mut ineqs: Vec<Vec<BigInt>> = (0..n).map(|i| unit_row(n, i)).collect();
    ineqs.extend(inequalities.iter().cloned());
    let mut eqs: Vec<Vec<BigInt>> = equalities.iter().map(|&e| inequalities[e].clone()).collect();
    eqs.extend(zero_weights.iter().map(|&i| unit_row(n, i)));
    let g = dd_rays(n, &ineqs, &eqs)?;
    if !g.lineality.is_empty() {
        return Err(ConeError::NotPointed);
    }
    let f = dd_facets(n, &g)?;
    let dim = rank(&g.rays.iter().map(|r| to_rational(r)).collect::<Vec<_>>());
    let weak_edges = (0..inequalities.len())
        .filter(|&e| g.rays.iter().all(|r| dot_int(&inequalities[e], r).is_zero()))
        .collect();
    Ok(SecondaryCone {
        n,
        inequalities,
        equalities,
        zero_weights,
        rays: g.rays,
        facets: f.facets,
        equations: f.equations,
        dim,
        label: DecompositionLabel { reference, weak_edges },
    })
}

/// Label of `D(w)`: edges of `d` with zero margin at `w` are weak.
pub fn delaunay_decomposition(d: &DecoratedSurface, w: &Weighting) -> Result<DecompositionLabel, ConeError> {
    let margins = d.delaunay_margins(w)?;
    if let Some(e) = margins.iter().position(|m| m.is_negative()) {
        return Err(ConeError::NotDelaunayForWeight(e));
    }
    let weak_edges = (0..margins.len()).filter(|&e| margins[e].is_zero()).collect();
    Ok(DecompositionLabel { reference: d.clone(), weak_edges })
}

pub fn cone_equal(a: &SecondaryCone, b: &SecondaryCone) -> Result<bool, ConeError> {
    if a.n != b.n {
        return Err(ConeError::DimensionMismatch { expected: a.n, got: b.n });
    }
    Ok(a.rays == b.rays)
}

impl SecondaryCone {
    /// Sum of the rays: a rational point of the relative interior.
    pub fn interior_point(&self) -> Vec<Rational> {
        let mut p = vec![Rational::zero(); self.n];
        for r in &self.rays {
            for (x, y) in p.iter_mut().zip(r) {
                *x += Rational::from_integer(y.clone());
            }
        }
        p
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.iter().all(|v| !v.is_negative())
            && self.facets.iter().all(|f| !dot(&to_rational(f), x).is_negative())
            && self.equations.iter().all(|e| dot(&to_rational(e), x).is_zero())
    }

    pub fn contains_int(&self, x: &[BigInt]) -> bool {
        self.contains(&to_rational(x))
    }

    /// Rays lying on the facet with inward normal `facet`.
    pub fn facet_rays(&self, facet: &[BigInt]) -> Vec<Vec<BigInt>> {
        self.rays.iter().filter(|r| dot_int(facet, r).is_zero()).cloned().collect()
    }

    /// A facet lies in the orthant boundary when all its rays share a zero coordinate.
    pub fn is_boundary_facet(&self, facet: &[BigInt]) -> bool {
        let rs = self.facet_rays(facet);
        (0..self.n).any(|i| rs.iter().all(|r| r[i].is_zero()))
    }

    pub fn is_full(&self) -> bool {
        self.dim == self.n
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rays": ints_json(&self.rays),
            "facets": ints_json(&self.facets),
            "weak_edges": self.label.weak_edges,
            "dim": self.dim,
        })
    }
}

pub(crate) fn ints_json(v: &[Vec<BigInt>]) -> Value {
    Value::Array(
        v.iter()
            .map(|r| Value::Array(r.iter().map(big_json).collect()))
            .collect(),
    )
}

pub(crate) fn big_json(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(i) => json!(i),
        Err(_) => json!(x.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::surface::CombinatorialSurface;

    fn s3() -> DecoratedSurface {
        let s = CombinatorialSurface::new(2, &[(0, 5), (1, 4), (2, 3)]).unwrap();
        DecoratedSurface::new(s, vec![int(1), int(1), int(1)]).unwrap()
    }

    #[test]
    fn s3_central_cone() {
        let d = s3();
        let c = secondary_cone(&d, &Weighting::from_ints(&[1, 1, 1]).unwrap()).unwrap();
        assert_eq!(c.dim, 3);
        let want: Vec<Vec<BigInt>> = [[-1, 1, 1], [1, -1, 1], [1, 1, -1]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(c.facets, want);
        assert!(c.label.is_triangulation());
    }

    #[test]
    fn rejects_non_delaunay() {
        let d = s3();
        let w = Weighting::from_ints(&[1, 1, 5]).unwrap();
        assert!(matches!(secondary_cone(&d, &w), Err(ConeError::NotDelaunayForWeight(_))));
    }
}
