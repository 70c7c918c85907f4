//! Decorated surfaces in Penner coordinates: λ-lengths, h-lengths, cusp
//! weights, Ptolemy flips and the weighted local Delaunay test.

use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exact::{dot, Rational};
use crate::surface::{next, prev, CombinatorialSurface, Corner, SurfaceError};

pub const DEFAULT_FLIP_BUDGET: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PennerError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("expected {expected} lambda-lengths, got {got}")]
    LambdaCount { expected: usize, got: usize },
    #[error("lambda-length of edge {0} is not positive")]
    NonPositiveLambda(usize),
    #[error("corner {0} does not exist")]
    BadCorner(usize),
    #[error("weight vector has length {got}, surface has {expected} cusps")]
    WeightLength { expected: usize, got: usize },
    #[error("weight {0} is negative")]
    NegativeWeight(usize),
    #[error("weight vector is zero")]
    ZeroWeighting,
    #[error("weight {0} is not positive")]
    NonPositiveWeight(usize),
    #[error("flip budget of {0} exhausted")]
    FlipBudgetExceeded(usize),
}

/// Nonnegative, nonzero weight vector, one entry per cusp.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weighting(Vec<Rational>);

impl Weighting {
    pub fn new(w: Vec<Rational>) -> Result<Self, PennerError> {
        if let Some(i) = w.iter().position(|x| x.is_negative()) {
            return Err(PennerError::NegativeWeight(i));
        }
        if w.iter().all(|x| x.is_zero()) {
            return Err(PennerError::ZeroWeighting);
        }
        Ok(Self(w))
    }

    pub fn from_ints(w: &[i64]) -> Result<Self, PennerError> {
        Self::new(w.iter().map(|&x| crate::exact::int(x)).collect())
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|x| x.is_positive())
    }

    pub fn check_positive(&self) -> Result<(), PennerError> {
        match self.0.iter().position(|x| !x.is_positive()) {
            Some(i) => Err(PennerError::NonPositiveWeight(i)),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Weighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(crate::exact::format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoratedSurface {
    surface: CombinatorialSurface,
    lambda: Vec<Rational>,
}

#[derive(Debug, Clone)]
pub struct DelaunayRun {
    pub surface: DecoratedSurface,
    /// Edge ids in flip order.
    pub flips: Vec<usize>,
}

impl DecoratedSurface {
    pub fn new(surface: CombinatorialSurface, lambda: Vec<Rational>) -> Result<Self, PennerError> {
        if lambda.len() != surface.num_edges() {
            return Err(PennerError::LambdaCount { expected: surface.num_edges(), got: lambda.len() });
        }
        if let Some(e) = lambda.iter().position(|l| !l.is_positive()) {
            return Err(PennerError::NonPositiveLambda(e));
        }
        Ok(Self { surface, lambda })
    }

    pub fn surface(&self) -> &CombinatorialSurface {
        &self.surface
    }
    pub fn lambdas(&self) -> &[Rational] {
        &self.lambda
    }
    pub fn lambda(&self, e: usize) -> &Rational {
        &self.lambda[e]
    }
    /// λ-length of the edge carrying half-edge `h`.
    pub fn lambda_he(&self, h: usize) -> &Rational {
        &self.lambda[self.surface.edge_of(h)]
    }
    pub fn num_cusps(&self) -> usize {
        self.surface.num_cusps()
    }

    /// h-length of the horocyclic arc in corner `c`.
    pub fn h_length(&self, c: Corner) -> Result<Rational, PennerError> {
        if c.0 >= self.surface.num_half_edges() {
            return Err(PennerError::BadCorner(c.0));
        }
        Ok(self.h_len(c.0))
    }

    fn h_len(&self, h: usize) -> Rational {
        self.lambda_he(next(h)) / (self.lambda_he(prev(h)) * self.lambda_he(h))
    }

    pub fn cusp_weight(&self, i: usize) -> Result<Rational, PennerError> {
        let corners = self.surface.corner_list(i)?;
        Ok(corners.iter().fold(Rational::zero(), |s, c| s + self.h_len(c.0)))
    }

    /// Weights of the decoration encoded by the λ-lengths.
    pub fn cusp_weights(&self) -> Vec<Rational> {
        let mut w = vec![Rational::zero(); self.num_cusps()];
        for h in 0..self.surface.num_half_edges() {
            w[self.surface.tail_cusp(h)] += self.h_len(h);
        }
        w
    }

    /// h-lengths after rescaling every horocycle to length one.
    pub fn unit_h_lengths(&self) -> Vec<Rational> {
        let w = self.cusp_weights();
        (0..self.surface.num_half_edges())
            .map(|h| self.h_len(h) / &w[self.surface.tail_cusp(h)])
            .collect()
    }

    /// Coefficients of the local Delaunay margin of edge `e` as a linear form in the weights.
    pub fn margin_row(&self, e: usize) -> Vec<Rational> {
        let unit = self.unit_h_lengths();
        self.margin_row_with(e, &unit)
    }

    fn margin_row_with(&self, e: usize, unit: &[Rational]) -> Vec<Rational> {
        let s = &self.surface;
        let mut row = vec![Rational::zero(); s.num_cusps()];
        for x in s.half_edges(e) {
            let (nx, px) = (next(x), prev(x));
            row[s.tail_cusp(x)] += &unit[x];
            row[s.tail_cusp(nx)] += &unit[nx];
            row[s.tail_cusp(px)] -= &unit[px];
        }
        row
    }

    pub fn margin_rows(&self) -> Vec<Vec<Rational>> {
        let unit = self.unit_h_lengths();
        (0..self.surface.num_edges()).map(|e| self.margin_row_with(e, &unit)).collect()
    }

    pub fn delaunay_margin(&self, e: usize, w: &Weighting) -> Result<Rational, PennerError> {
        self.check_len(w)?;
        if e >= self.surface.num_edges() {
            return Err(SurfaceError::BadEdgeIndex(e).into());
        }
        Ok(dot(&self.margin_row(e), w.as_slice()))
    }

    pub fn delaunay_margins(&self, w: &Weighting) -> Result<Vec<Rational>, PennerError> {
        self.check_len(w)?;
        Ok(self.margin_rows().iter().map(|r| dot(r, w.as_slice())).collect())
    }

    fn check_len(&self, w: &Weighting) -> Result<(), PennerError> {
        if w.len() != self.num_cusps() {
            return Err(PennerError::WeightLength { expected: self.num_cusps(), got: w.len() });
        }
        Ok(())
    }

    /// Flips `e` and sets its λ-length by the Ptolemy relation. Also returns the
    /// half-edge relabeling of the combinatorial flip.
    pub fn ptolemy_flip_relabel(&self, e: usize) -> Result<(Self, Vec<usize>), PennerError> {
        let flip = self.surface.flip(e)?;
        let [h, hp] = self.surface.half_edges(e);
        let l = |x: usize| self.lambda_he(x);
        let f = (l(next(h)) * l(next(hp)) + l(prev(h)) * l(prev(hp))) / &self.lambda[e];
        let mut lambda = self.lambda.clone();
        lambda[e] = f;
        Ok((Self { surface: flip.surface, lambda }, flip.relabel))
    }

    pub fn ptolemy_flip(&self, e: usize) -> Result<Self, PennerError> {
        Ok(self.ptolemy_flip_relabel(e)?.0)
    }

    pub fn replay(&self, flips: &[usize]) -> Result<Self, PennerError> {
        let mut d = self.clone();
        for &e in flips {
            d = d.ptolemy_flip(e)?;
        }
        Ok(d)
    }

    /// First edge (by index) whose margin is strictly negative.
    pub fn first_violation(&self, w: &Weighting) -> Result<Option<usize>, PennerError> {
        self.check_len(w)?;
        let unit = self.unit_h_lengths();
        Ok((0..self.surface.num_edges()).find(|&e| {
            !self.surface.is_self_folded(e) && dot(&self.margin_row_with(e, &unit), w.as_slice()).is_negative()
        }))
    }

    pub fn is_delaunay(&self, w: &Weighting) -> Result<bool, PennerError> {
        Ok(self.delaunay_margins(w)?.iter().all(|m| !m.is_negative()))
    }

    pub fn make_delaunay(&self, w: &Weighting) -> Result<DelaunayRun, PennerError> {
        self.make_delaunay_with_budget(w, DEFAULT_FLIP_BUDGET)
    }

    /// Flips the first violating edge until every margin is nonnegative.
    pub fn make_delaunay_with_budget(&self, w: &Weighting, budget: usize) -> Result<DelaunayRun, PennerError> {
        self.check_len(w)?;
        w.check_positive()?;
        let mut d = self.clone();
        let mut flips = Vec::new();
        while let Some(e) = d.first_violation(w)? {
            if flips.len() == budget {
                return Err(PennerError::FlipBudgetExceeded(budget));
            }
            d = d.ptolemy_flip(e)?;
            flips.push(e);
        }
        Ok(DelaunayRun { surface: d, flips })
    }
}
