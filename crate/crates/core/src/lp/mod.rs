//! Fractional coverings as linear programs: the cover LP and its dual,
//! fractional rank, dual weights by column generation, and dual
//! certificates with their verifiers.

mod certificate;
mod simplex;

use std::collections::BTreeMap;

use num_traits::{One, Zero};

pub use certificate::{triangular_certificate, verify_certificate, CertificateReport, DualCertificate};
pub use simplex::{solve_lp, solve_lp_with_pricing, Column, Constraint, LinearProgram, LpSolution, Relation, Sense, Q};

use crate::boolmat::BooleanMatrix;
use crate::covers::{
    enumerate_all_rectangles, enumerate_maximal_rectangles, FractionalCovering, Rectangle, DEFAULT_MAX_RECTS,
};
use crate::error::{Error, Result};

/// A cover LP together with the rectangle behind each variable and the
/// 1-entry behind each constraint.
#[derive(Clone, Debug)]
pub struct CoverLp {
    pub lp: LinearProgram,
    pub rectangles: Vec<Rectangle>,
    pub ones: Vec<(usize, usize)>,
    pub dims: (usize, usize),
}

impl CoverLp {
    /// Reads a primal solution back as a fractional covering (zero weights dropped).
    pub fn covering(&self, sol: &LpSolution) -> FractionalCovering {
        let (rows, cols) = self.dims;
        FractionalCovering {
            rows,
            cols,
            weighted: self
                .rectangles
                .iter()
                .zip(&sol.x)
                .filter(|(_, w)| !w.is_zero())
                .map(|(r, w)| (r.clone(), w.clone()))
                .collect(),
        }
    }

    /// Pairs each 1-entry with its dual value.
    pub fn dual_map(&self, sol: &LpSolution) -> BTreeMap<(usize, usize), Q> {
        self.ones.iter().copied().zip(sol.duals.iter().cloned()).collect()
    }
}

fn rect_weight(r: &Rectangle, weighted: bool) -> Q {
    if weighted {
        Q::from_integer(r.cost().into())
    } else {
        Q::one()
    }
}

/// Cover LP over an explicit rectangle family. With `unit_bounds` every
/// variable is boxed in `[0,1]`, otherwise only `x ≥ 0`.
pub fn cover_lp_from_family(
    a: &BooleanMatrix,
    rectangles: Vec<Rectangle>,
    weighted: bool,
    unit_bounds: bool,
) -> Result<CoverLp> {
    let ones: Vec<(usize, usize)> = a.ones().collect();
    if ones.is_empty() {
        return Err(Error::OutOfRange("matrix has no 1-entries".into()));
    }
    let index: BTreeMap<(usize, usize), usize> = ones.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let mut lp = LinearProgram::new(Sense::Minimize, rectangles.len());
    let mut rows: Vec<Vec<(usize, Q)>> = vec![Vec::new(); ones.len()];
    for (v, r) in rectangles.iter().enumerate() {
        r.check(a)?;
        lp.objective[v] = rect_weight(r, weighted);
        if unit_bounds {
            lp.upper[v] = Some(Q::one());
        }
        for e in r.entries() {
            rows[index[&e]].push((v, Q::one()));
        }
    }
    for row in rows {
        lp.add_constraint(row, Relation::Ge, Q::one());
    }
    Ok(CoverLp {
        lp,
        rectangles,
        ones,
        dims: a.dims(),
    })
}

/// The cover LP of `a` with `x ∈ [0,1]`. The unweighted program ranges over
/// maximal rectangles; the weighted one over every rectangle, since a
/// sub-rectangle can be strictly cheaper than its maximal extension.
pub fn build_cover_lp(a: &BooleanMatrix, weighted: bool) -> Result<CoverLp> {
    let family = if weighted {
        enumerate_all_rectangles(a, DEFAULT_MAX_RECTS)?
    } else {
        enumerate_maximal_rectangles(a)?
    };
    cover_lp_from_family(a, family, weighted, true)
}

/// Optimum of the unweighted relaxation.
pub fn fractional_rank(k: &BooleanMatrix) -> Result<Q> {
    Ok(solve_lp(&build_cover_lp(k, false)?.lp)?.objective)
}

/// Optimal dual solution of the cover LP of `a`, as a map over 1-entries.
///
/// The values satisfy `Σ_{u∈S} y_u ≤ w(S)` for every rectangle `S`, not only
/// the ones in the generated family.
pub fn dual_weights(a: &BooleanMatrix, weighted: bool) -> Result<BTreeMap<(usize, usize), Q>> {
    Ok(solve_dual(a, weighted)?.1)
}

/// Optimal value and dual solution of the cover LP of `a`.
pub fn solve_dual(a: &BooleanMatrix, weighted: bool) -> Result<(Q, DualMap)> {
    if !weighted {
        // without x ≤ 1 the duals stay feasible; the bound is implied anyway
        let cl = cover_lp_from_family(a, enumerate_maximal_rectangles(a)?, false, false)?;
        let sol = solve_lp(&cl.lp)?;
        return Ok((sol.objective.clone(), cl.dual_map(&sol)));
    }
    column_generation(a)
}

/// Dual values keyed by 1-entry.
pub type DualMap = BTreeMap<(usize, usize), Q>;

/// Rectangles added to the family per pricing round.
const CUTS_PER_ROUND: usize = 32;

fn column_generation(a: &BooleanMatrix) -> Result<(Q, DualMap)> {
    let mut family: Vec<Rectangle> = a
        .ones()
        .map(|(i, j)| Rectangle::new([i], [j]).expect("singleton"))
        .collect();
    family.extend(enumerate_maximal_rectangles(a)?);
    family.sort();
    family.dedup();
    let mut cl = cover_lp_from_family(a, family, true, false)?;
    let index: BTreeMap<(usize, usize), usize> = cl.ones.iter().enumerate().map(|(k, &e)| (e, k)).collect();
    let ones = cl.ones.clone();
    let mut last = BTreeMap::new();
    let sol = solve_lp_with_pricing(&mut cl.lp, &mut |sol| {
        let cert = DualCertificate {
            rows: a.rows(),
            cols: a.cols(),
            values: ones.iter().copied().zip(sol.duals.iter().cloned()).collect(),
        };
        let cuts = certificate::violated(a, &cert, true, CUTS_PER_ROUND)?;
        last = cert.values;
        Ok(cuts
            .into_iter()
            .map(|(r, _)| Column {
                objective: rect_weight(&r, true),
                coeffs: r.entries().map(|e| (index[&e], Q::one())).collect(),
                upper: None,
            })
            .collect())
    })?;
    Ok((sol.objective, last))
}
