//! Double description over exact integers.
//!
//! Constraints are processed one at a time. The generator set starts as the
//! whole space (lineality = standard basis, no rays); a constraint that is
//! not identically zero on the current lineality space consumes one
//! lineality vector, otherwise the rays are split and adjacent pairs combined.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::ConeError;
use crate::exact::{dot_int, primitive_int, rank_int, rref, to_rational, primitive};

/// Generators of a polyhedral cone: pointed part plus lineality basis.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Generators {
    pub rays: Vec<Vec<BigInt>>,
    pub lineality: Vec<Vec<BigInt>>,
}

/// Irredundant outer description: `facets · x >= 0`, `equations · x = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FacetDescription {
    pub facets: Vec<Vec<BigInt>>,
    pub equations: Vec<Vec<BigInt>>,
}

struct Ray {
    v: Vec<BigInt>,
    zero: Vec<bool>,
}

fn combine(s: &BigInt, x: &[BigInt], t: &BigInt, y: &[BigInt]) -> Vec<BigInt> {
    let v: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| s * a - t * b).collect();
    primitive_int(&v)
}

fn dd_core(n: usize, rows: &[Vec<BigInt>]) -> Generators {
    let mut lin: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect();
    let mut rays: Vec<Ray> = Vec::new();
    let m = rows.len();

    for (k, a) in rows.iter().enumerate() {
        if let Some(pos) = lin.iter().position(|l| !dot_int(a, l).is_zero()) {
            let mut l0 = lin.remove(pos);
            let mut s = dot_int(a, &l0);
            if s.is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
                s = -s;
            }
            for l in lin.iter_mut() {
                let t = dot_int(a, l);
                if !t.is_zero() {
                    *l = combine(&s, l, &t, &l0);
                }
            }
            for r in rays.iter_mut() {
                let t = dot_int(a, &r.v);
                if !t.is_zero() {
                    r.v = combine(&s, &r.v, &t, &l0);
                }
                r.zero[k] = true;
            }
            let mut zero = vec![false; m];
            zero[..k].iter_mut().for_each(|z| *z = true);
            rays.push(Ray { v: l0, zero });
            continue;
        }

        let vals: Vec<BigInt> = rays.iter().map(|r| dot_int(a, &r.v)).collect();
        let d = n - lin.len();
        let mut next = Vec::with_capacity(rays.len());
        let plus: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        for &p in &plus {
            for &q in &minus {
                if d < 2 {
                    continue;
                }
                let common: Vec<usize> = (0..k).filter(|&c| rays[p].zero[c] && rays[q].zero[c]).collect();
                if common.len() < d - 2 {
                    continue;
                }
                let sub: Vec<&Vec<BigInt>> = common.iter().map(|&c| &rows[c]).collect();
                if rank_int(&sub) != d - 2 {
                    continue;
                }
                let v = combine(&vals[p], &rays[q].v, &vals[q], &rays[p].v);
                let mut zero = vec![false; m];
                for &c in &common {
                    zero[c] = true;
                }
                zero[k] = true;
                next.push(Ray { v, zero });
            }
        }
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_positive() {
                next.push(r);
            } else if vals[i].is_zero() {
                r.zero[k] = true;
                next.push(r);
            }
        }
        rays = next;
    }

    let mut out: Vec<Vec<BigInt>> = rays.into_iter().map(|r| primitive_int(&r.v)).collect();
    out.sort();
    out.dedup();
    Generators { rays: out, lineality: canonical_basis(&lin) }
}

/// Canonical integer basis of a row span (primitive rows of the reduced echelon form).
pub fn canonical_basis(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let q: Vec<_> = rows.iter().map(|r| to_rational(r)).collect();
    rref(&q).0.iter().map(|r| primitive(r)).collect()
}

/// Generators of `{x : ineqs · x >= 0, eqs · x = 0}` in dimension `n`.
pub fn dd_rays(n: usize, ineqs: &[Vec<BigInt>], eqs: &[Vec<BigInt>]) -> Result<Generators, ConeError> {
    for r in ineqs.iter().chain(eqs) {
        if r.len() != n {
            return Err(ConeError::DimensionMismatch { expected: n, got: r.len() });
        }
    }
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(ineqs.len() + 2 * eqs.len());
    for e in eqs {
        rows.push(e.clone());
        rows.push(e.iter().map(|x| -x).collect());
    }
    rows.extend(ineqs.iter().cloned());
    let g = dd_core(n, &rows);
    if g.rays.is_empty() && g.lineality.is_empty() {
        return Err(ConeError::EmptyCone);
    }
    Ok(g)
}

/// Facets and equations of the cone generated by `g`. Facet normals are
/// taken inside the linear span of the cone, so they are unique.
pub fn dd_facets(n: usize, g: &Generators) -> Result<FacetDescription, ConeError> {
    for r in g.rays.iter().chain(&g.lineality) {
        if r.len() != n {
            return Err(ConeError::DimensionMismatch { expected: n, got: r.len() });
        }
    }
    let polar = dd_core(n, &{
        let mut rows = Vec::new();
        for l in &g.lineality {
            rows.push(l.clone());
            rows.push(l.iter().map(|x| -x).collect());
        }
        rows.extend(g.rays.iter().cloned());
        rows
    });
    let span: Vec<_> = g.rays.iter().chain(&g.lineality).map(|r| to_rational(r)).collect();
    let mut facets: Vec<Vec<BigInt>> = polar
        .rays
        .iter()
        .map(|f| {
            if polar.lineality.is_empty() {
                f.clone()
            } else {
                primitive(&crate::exact::project_onto_span(&to_rational(f), &span))
            }
        })
        .filter(|f| f.iter().any(|x| !x.is_zero()))
        .collect();
    facets.sort();
    facets.dedup();
    Ok(FacetDescription { facets, equations: polar.lineality })
}
