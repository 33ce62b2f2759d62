//! Dense bounded-variable primal simplex over exact rationals.
//!
//! Two phases. The entering column is the one with the largest reduced
//! cost until pivots stall, after which Bland's rule takes over for both the
//! entering and the leaving variable, so the method cannot cycle.
//! Every structural variable needs a finite lower bound; upper bounds are
//! optional and handled by bound flips rather than extra rows.

use std::fmt;

use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Q)>,
    pub relation: Relation,
    pub rhs: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Q>,
    pub lower: Vec<Q>,
    pub upper: Vec<Option<Q>>,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    /// Program with `n` variables, all in `[0, ∞)` with zero objective.
    pub fn new(sense: Sense, n: usize) -> Self {
        LinearProgram {
            sense,
            objective: vec![<Q as Zero>::zero(); n],
            lower: vec![<Q as Zero>::zero(); n],
            upper: vec![None; n],
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<(usize, Q)>, relation: Relation, rhs: Q) {
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    fn check(&self) -> Result<()> {
        let n = self.num_vars();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::DimensionMismatch(
                "bound vectors do not match variable count".into(),
            ));
        }
        for (l, u) in self.lower.iter().zip(&self.upper) {
            if let Some(u) = u {
                if u < l {
                    return Err(Error::OutOfRange(format!("bounds [{l}, {u}] are empty")));
                }
            }
        }
        for c in &self.constraints {
            if let Some(&(j, _)) = c.coeffs.iter().find(|(j, _)| *j >= n) {
                return Err(Error::DimensionMismatch(format!(
                    "constraint refers to variable {j} of {n}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub objective: Q,
    pub x: Vec<Q>,
    /// One dual value per constraint, in the sign convention of the
    /// program's own sense (objective = Σ duals·rhs + bound terms).
    pub duals: Vec<Q>,
    /// Reduced cost of each structural variable.
    pub reduced_costs: Vec<Q>,
    /// Dual objective, recomputed from the duals and the bound terms.
    pub dual_objective: Q,
    pub iterations: usize,
}

const MAX_ITERATIONS: usize = 5_000_000;
/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_RUN: usize = 50;

enum Fail {
    /// A fixed-width value overflowed; the caller retries with big rationals.
    Overflow,
    Lp(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lp(e)
    }
}

type Step<T> = std::result::Result<T, Fail>;

/// Exact ordered field. The checked operations return `None` on overflow.
trait Field: Clone + Ord + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn checked_add(&self, o: &Self) -> Option<Self>;
    fn checked_sub(&self, o: &Self) -> Option<Self>;
    fn checked_mul(&self, o: &Self) -> Option<Self>;
    fn checked_div(&self, o: &Self) -> Option<Self>;
    fn from_q(q: &Q) -> Option<Self>;
    fn to_q(&self) -> Q;

    fn plus(&self, o: &Self) -> Step<Self> {
        self.checked_add(o).ok_or(Fail::Overflow)
    }
    fn minus(&self, o: &Self) -> Step<Self> {
        self.checked_sub(o).ok_or(Fail::Overflow)
    }
    fn times(&self, o: &Self) -> Step<Self> {
        self.checked_mul(o).ok_or(Fail::Overflow)
    }
    fn over(&self, o: &Self) -> Step<Self> {
        self.checked_div(o).ok_or(Fail::Overflow)
    }
    fn negated(&self) -> Step<Self> {
        Self::zero().minus(self)
    }
    fn magnitude(&self) -> Step<Self> {
        if self.is_negative() {
            self.negated()
        } else {
            Ok(self.clone())
        }
    }
}

impl Field for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn checked_add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn checked_sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn checked_mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn checked_div(&self, o: &Self) -> Option<Self> {
        (!Zero::is_zero(o)).then(|| self / o)
    }
    fn from_q(q: &Q) -> Option<Self> {
        Some(q.clone())
    }
    fn to_q(&self) -> Q {
        self.clone()
    }
}

macro_rules! fixed_width_field {
    ($int:ty) => {
        impl Field for Ratio<$int> {
            fn zero() -> Self {
                Zero::zero()
            }
            fn one() -> Self {
                One::one()
            }
            fn is_zero(&self) -> bool {
                Zero::is_zero(self)
            }
            fn is_positive(&self) -> bool {
                Signed::is_positive(self)
            }
            fn is_negative(&self) -> bool {
                Signed::is_negative(self)
            }
            fn checked_add(&self, o: &Self) -> Option<Self> {
                CheckedAdd::checked_add(self, o)
            }
            fn checked_sub(&self, o: &Self) -> Option<Self> {
                CheckedSub::checked_sub(self, o)
            }
            fn checked_mul(&self, o: &Self) -> Option<Self> {
                CheckedMul::checked_mul(self, o)
            }
            fn checked_div(&self, o: &Self) -> Option<Self> {
                CheckedDiv::checked_div(self, o)
            }
            fn from_q(q: &Q) -> Option<Self> {
                Some(Ratio::new_raw(
                    q.numer().try_into().ok()?,
                    q.denom().try_into().ok()?,
                ))
            }
            fn to_q(&self) -> Q {
                Q::new((*self.numer()).into(), (*self.denom()).into())
            }
        }
    };
}

fixed_width_field!(i64);
fixed_width_field!(i128);

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Structural,
    Slack,
    Artificial,
}

struct Tableau<T> {
    m: usize,
    /// rows of B^{-1}A
    t: Vec<Vec<T>>,
    beta: Vec<T>,
    basis: Vec<usize>,
    /// value of each nonbasic variable (lower or upper bound)
    value: Vec<T>,
    is_basic: Vec<bool>,
    lower: Vec<T>,
    upper: Vec<Option<T>>,
    kind: Vec<Kind>,
    iterations: usize,
}

impl<T: Field> Tableau<T> {
    fn reduced_costs(&self, cost: &[T]) -> Step<Vec<T>> {
        let mut d = cost.to_vec();
        for r in 0..self.m {
            let cb = &cost[self.basis[r]];
            if cb.is_zero() {
                continue;
            }
            for (j, a) in self.t[r].iter().enumerate() {
                if !a.is_zero() {
                    d[j] = d[j].minus(&cb.times(a)?)?;
                }
            }
        }
        Ok(d)
    }

    fn pivot(&mut self, p: usize, q: usize, d: &mut [T]) -> Step<()> {
        let piv = self.t[p][q].clone();
        for a in self.t[p].iter_mut() {
            if !a.is_zero() {
                *a = a.over(&piv)?;
            }
        }
        let nz: Vec<usize> = (0..self.t[p].len()).filter(|&j| !self.t[p][j].is_zero()).collect();
        let prow = std::mem::take(&mut self.t[p]);
        for r in 0..self.m {
            if r == p {
                continue;
            }
            let f = self.t[r][q].clone();
            if f.is_zero() {
                continue;
            }
            let row = &mut self.t[r];
            for &j in &nz {
                row[j] = row[j].minus(&f.times(&prow[j])?)?;
            }
        }
        let f = d[q].clone();
        if !f.is_zero() {
            for &j in &nz {
                d[j] = d[j].minus(&f.times(&prow[j])?)?;
            }
        }
        self.t[p] = prow;
        Ok(())
    }

    fn at_upper(&self, j: usize) -> bool {
        self.upper[j].as_ref().is_some_and(|u| &self.value[j] == u) && self.value[j] != self.lower[j]
    }

    fn improving(&self, j: usize, d: &[T]) -> bool {
        if self.is_basic[j] {
            return false;
        }
        if self.at_upper(j) {
            d[j].is_positive()
        } else {
            d[j].is_negative() && self.upper[j].as_ref().is_none_or(|u| u > &self.lower[j])
        }
    }

    /// Runs simplex iterations minimizing `cost`; `allowed` filters entering columns.
    fn optimize(&mut self, cost: &[T], allowed: &dyn Fn(usize) -> bool) -> Step<Vec<T>> {
        let mut d = self.reduced_costs(cost)?;
        let ncols = d.len();
        let mut degenerate = 0usize;
        let mut bland = false;
        loop {
            self.iterations += 1;
            if self.iterations > MAX_ITERATIONS {
                return Err(Error::IterationLimit.into());
            }
            // largest |d_j| until a long degenerate run, then Bland for good
            let mut entering: Option<(usize, T)> = None;
            for j in (0..ncols).filter(|&j| allowed(j) && self.improving(j, &d)) {
                if bland {
                    entering = Some((j, T::zero()));
                    break;
                }
                let mag = d[j].magnitude()?;
                if entering.as_ref().is_none_or(|(_, b)| mag > *b) {
                    entering = Some((j, mag));
                }
            }
            let Some((q, _)) = entering else { return Ok(d) };
            let increasing = d[q].is_negative();
            let dir = if increasing { T::one() } else { T::one().negated()? };

            // ratio test: step t ≥ 0 in direction dir
            let mut best: Option<(T, Option<usize>)> = None; // (step, leaving row) None = bound flip
            if let Some(u) = &self.upper[q] {
                best = Some((u.minus(&self.lower[q])?, None));
            }
            for r in 0..self.m {
                let alpha = self.t[r][q].times(&dir)?;
                if alpha.is_zero() {
                    continue;
                }
                let b = self.basis[r];
                let step = if alpha.is_positive() {
                    self.beta[r].minus(&self.lower[b])?.over(&alpha)?
                } else {
                    match &self.upper[b] {
                        Some(u) => u.minus(&self.beta[r])?.over(&alpha.negated()?)?,
                        None => continue,
                    }
                };
                let better = match &best {
                    None => true,
                    Some((s, leave)) => {
                        step < *s
                            || (step == *s
                                && match leave {
                                    None => false,
                                    Some(lr) => b < self.basis[*lr],
                                })
                    }
                };
                if better {
                    best = Some((step, Some(r)));
                }
            }
            let Some((step, leave)) = best else {
                return Err(Error::Unbounded.into());
            };
            if step.is_zero() {
                degenerate += 1;
                bland |= degenerate > DEGENERATE_RUN;
            } else {
                degenerate = 0;
                for r in 0..self.m {
                    let a = &self.t[r][q];
                    if !a.is_zero() {
                        let delta = a.times(&dir)?.times(&step)?;
                        self.beta[r] = self.beta[r].minus(&delta)?;
                    }
                }
            }
            match leave {
                None => {
                    self.value[q] = if increasing {
                        self.upper[q].clone().unwrap()
                    } else {
                        self.lower[q].clone()
                    };
                }
                Some(p) => {
                    let b = self.basis[p];
                    let alpha = self.t[p][q].times(&dir)?;
                    self.value[b] = if alpha.is_positive() {
                        self.lower[b].clone()
                    } else {
                        self.upper[b].clone().unwrap()
                    };
                    let entering_value = self.value[q].plus(&dir.times(&step)?)?;
                    self.is_basic[b] = false;
                    self.is_basic[q] = true;
                    self.basis[p] = q;
                    self.beta[p] = entering_value;
                    self.pivot(p, q, &mut d)?;
                }
            }
        }
    }
}

/// A structural column added during pricing; its lower bound is 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Column {
    pub objective: Q,
    pub coeffs: Vec<(usize, Q)>,
    pub upper: Option<Q>,
}

impl LinearProgram {
    pub fn add_column(&mut self, c: Column) -> usize {
        let j = self.num_vars();
        self.objective.push(c.objective);
        self.lower.push(<Q as Zero>::zero());
        self.upper.push(c.upper);
        for (i, a) in c.coeffs {
            self.constraints[i].coeffs.push((j, a));
        }
        j
    }
}

/// Solves `lp` exactly. Returns `Infeasible` or `Unbounded` when appropriate.
///
/// The computation runs over `i64` rationals and is repeated over `i128`,
/// then big rationals, whenever an intermediate value overflows.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    let mut lp = lp.clone();
    solve_lp_with_pricing(&mut lp, &mut |_| Ok(Vec::new()))
}

/// Solves `lp`, then repeatedly asks `price` for new columns given the
/// current optimum and re-optimizes from the current basis, until `price`
/// returns none. Added columns are appended to `lp`.
pub fn solve_lp_with_pricing(
    lp: &mut LinearProgram,
    price: &mut dyn FnMut(&LpSolution) -> Result<Vec<Column>>,
) -> Result<LpSolution> {
    lp.check()?;
    match drive::<Ratio<i64>>(lp, price) {
        Ok(s) => return Ok(s),
        Err(Fail::Lp(e)) => return Err(e),
        Err(Fail::Overflow) => {}
    }
    match drive::<Ratio<i128>>(lp, price) {
        Ok(s) => return Ok(s),
        Err(Fail::Lp(e)) => return Err(e),
        Err(Fail::Overflow) => {}
    }
    match drive::<Q>(lp, price) {
        Ok(s) => Ok(s),
        Err(Fail::Lp(e)) => Err(e),
        Err(Fail::Overflow) => unreachable!("big rationals do not overflow"),
    }
}

fn drive<T: Field>(
    lp: &mut LinearProgram,
    price: &mut dyn FnMut(&LpSolution) -> Result<Vec<Column>>,
) -> Step<LpSolution> {
    let mut eng = Engine::<T>::build(lp)?;
    eng.phase1()?;
    loop {
        let d = eng.phase2()?;
        let sol = eng.solution(&d)?;
        let cols = price(&sol)?;
        if cols.is_empty() {
            return Ok(sol);
        }
        for c in cols {
            lp.add_column(c.clone());
            eng.add_column(&c)?;
        }
        lp.check()?;
    }
}

fn conv<T: Field>(q: &Q) -> Step<T> {
    T::from_q(q).ok_or(Fail::Overflow)
}

fn sum<T: Field>(it: impl IntoIterator<Item = Step<T>>) -> Step<T> {
    it.into_iter().try_fold(T::zero(), |acc, v| acc.plus(&v?))
}

struct Engine<T> {
    tab: Tableau<T>,
    /// sparse column of every tableau column in the original rows
    columns: Vec<Vec<(usize, T)>>,
    /// tableau column of each structural variable
    structural: Vec<usize>,
    /// initial basis column and its sign for every row
    init: Vec<(usize, T)>,
    /// phase-2 cost of every tableau column (minimization form)
    cost: Vec<T>,
    relations: Vec<Relation>,
    rhs: Vec<T>,
    sign: T,
    has_artificials: bool,
}

impl<T: Field> Engine<T> {
    fn build(lp: &LinearProgram) -> Step<Self> {
        let n = lp.num_vars();
        let m = lp.constraints.len();
        let sign = match lp.sense {
            Sense::Minimize => T::one(),
            Sense::Maximize => T::one().negated()?,
        };
        let mut lower: Vec<T> = lp.lower.iter().map(conv).collect::<Step<_>>()?;
        let rhs: Vec<T> = lp.constraints.iter().map(|c| conv(&c.rhs)).collect::<Step<_>>()?;
        let mut columns: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
        for (i, c) in lp.constraints.iter().enumerate() {
            for (j, a) in &c.coeffs {
                if !Zero::is_zero(a) {
                    columns[*j].push((i, conv(a)?));
                }
            }
        }

        // residual with all structurals at their lower bounds
        let mut resid = rhs.clone();
        for (j, col) in columns.iter().enumerate() {
            for (i, a) in col {
                resid[*i] = resid[*i].minus(&a.times(&lower[j])?)?;
            }
        }

        let mut kind = vec![Kind::Structural; n];
        let mut upper: Vec<Option<T>> = lp
            .upper
            .iter()
            .map(|u| u.as_ref().map(conv).transpose())
            .collect::<Step<_>>()?;
        let mut init: Vec<(usize, T)> = Vec::with_capacity(m);
        let mut art_rows = Vec::new();
        for (i, c) in lp.constraints.iter().enumerate() {
            let slack_sign = match c.relation {
                Relation::Le => Some(T::one()),
                Relation::Ge => Some(T::one().negated()?),
                Relation::Eq => None,
            };
            let mut basic_slack = None;
            if let Some(s) = slack_sign {
                let col = columns.len();
                columns.push(vec![(i, s.clone())]);
                kind.push(Kind::Slack);
                lower.push(T::zero());
                upper.push(None);
                // slack value would be resid / s
                if !resid[i].over(&s)?.is_negative() {
                    basic_slack = Some((col, s));
                }
            }
            match basic_slack {
                Some(b) => init.push(b),
                None => {
                    init.push((usize::MAX, T::zero()));
                    art_rows.push(i);
                }
            }
        }
        for &i in &art_rows {
            let s = if resid[i].is_negative() {
                T::one().negated()?
            } else {
                T::one()
            };
            let col = columns.len();
            columns.push(vec![(i, s.clone())]);
            kind.push(Kind::Artificial);
            lower.push(T::zero());
            upper.push(None);
            init[i] = (col, s);
        }
        let ncols = columns.len();

        let mut t = vec![vec![T::zero(); ncols]; m];
        for (j, col) in columns.iter().enumerate() {
            for (i, a) in col {
                t[*i][j] = a.times(&init[*i].1)?; // B0^{-1} = B0 (diagonal ±1)
            }
        }
        let mut value: Vec<T> = lower.clone();
        let mut is_basic = vec![false; ncols];
        let mut basis = Vec::with_capacity(m);
        let mut beta = Vec::with_capacity(m);
        for i in 0..m {
            let (col, s) = &init[i];
            is_basic[*col] = true;
            basis.push(*col);
            beta.push(resid[i].times(s)?);
            value[*col] = T::zero();
        }
        let mut cost = vec![T::zero(); ncols];
        for (c, o) in cost.iter_mut().zip(&lp.objective) {
            *c = conv::<T>(o)?.times(&sign)?;
        }
        Ok(Engine {
            tab: Tableau {
                m,
                t,
                beta,
                basis,
                value,
                is_basic,
                lower,
                upper,
                kind,
                iterations: 0,
            },
            columns,
            structural: (0..n).collect(),
            init,
            cost,
            relations: lp.constraints.iter().map(|c| c.relation).collect(),
            rhs,
            sign,
            has_artificials: !art_rows.is_empty(),
        })
    }

    /// Drives the artificials out, then pins them at zero.
    fn phase1(&mut self) -> Step<()> {
        if !self.has_artificials {
            return Ok(());
        }
        let tab = &mut self.tab;
        let cost1: Vec<T> = tab
            .kind
            .iter()
            .map(|k| if *k == Kind::Artificial { T::one() } else { T::zero() })
            .collect();
        tab.optimize(&cost1, &|_| true)?;
        let infeas = sum((0..tab.m)
            .filter(|&r| tab.kind[tab.basis[r]] == Kind::Artificial)
            .map(|r| Ok(tab.beta[r].clone())))?;
        if infeas.is_positive() {
            return Err(Error::Infeasible.into());
        }
        for j in 0..tab.kind.len() {
            if tab.kind[j] == Kind::Artificial {
                tab.upper[j] = Some(T::zero());
                if !tab.is_basic[j] {
                    tab.value[j] = T::zero();
                }
            }
        }
        Ok(())
    }

    fn phase2(&mut self) -> Step<Vec<T>> {
        let kinds = self.tab.kind.clone();
        self.tab.optimize(&self.cost, &|j| kinds[j] != Kind::Artificial)
    }

    /// Appends a structural column at its lower bound 0; the basis stays
    /// primal feasible.
    fn add_column(&mut self, c: &Column) -> Step<()> {
        let coeffs: Vec<(usize, T)> = c
            .coeffs
            .iter()
            .filter(|(_, a)| !Zero::is_zero(a))
            .map(|(i, a)| Ok((*i, conv(a)?)))
            .collect::<Step<_>>()?;
        let j = self.columns.len();
        let tab = &mut self.tab;
        // B^{-1} a, with column i of B^{-1} equal to T[:, init_i] * s_i
        for r in 0..tab.m {
            let mut v = T::zero();
            for (i, a) in &coeffs {
                let (col, s) = &self.init[*i];
                let e = &tab.t[r][*col];
                if !e.is_zero() {
                    v = v.plus(&e.times(s)?.times(a)?)?;
                }
            }
            tab.t[r].push(v);
        }
        tab.value.push(T::zero());
        tab.is_basic.push(false);
        tab.lower.push(T::zero());
        tab.upper.push(c.upper.as_ref().map(conv).transpose()?);
        tab.kind.push(Kind::Structural);
        self.cost.push(conv::<T>(&c.objective)?.times(&self.sign)?);
        self.columns.push(coeffs);
        self.structural.push(j);
        Ok(())
    }

    /// Reads off the optimum and checks it against the dual conditions.
    fn solution(&self, d: &[T]) -> Step<LpSolution> {
        let tab = &self.tab;
        let m = tab.m;
        let mut xs = tab.value.clone();
        for r in 0..m {
            xs[tab.basis[r]] = tab.beta[r].clone();
        }
        let x: Vec<T> = self.structural.iter().map(|&c| xs[c].clone()).collect();
        let min_obj = sum(self.structural.iter().zip(&x).map(|(&c, v)| self.cost[c].times(v)))?;

        // duals y = c_B B^{-1}; column i of B^{-1} is T[:, init_i] * s_i
        let mut y = vec![T::zero(); m];
        for (i, (col, s)) in self.init.iter().enumerate() {
            let mut acc = T::zero();
            for r in 0..m {
                let a = &tab.t[r][*col];
                if !a.is_zero() {
                    acc = acc.plus(&self.cost[tab.basis[r]].times(a)?)?;
                }
            }
            y[i] = acc.times(s)?;
        }

        // dual feasibility and dual objective for the minimization form
        for (i, rel) in self.relations.iter().enumerate() {
            let ok = match rel {
                Relation::Le => !y[i].is_positive(),
                Relation::Ge => !y[i].is_negative(),
                Relation::Eq => true,
            };
            assert!(ok, "dual sign violated on row {i}: {}", y[i]);
        }
        let mut dual_obj = sum(self.rhs.iter().zip(&y).map(|(b, yi)| b.times(yi)))?;
        let mut reduced = Vec::with_capacity(x.len());
        for (&c, xj) in self.structural.iter().zip(&x) {
            let mut dj = self.cost[c].clone();
            for (i, a) in &self.columns[c] {
                dj = dj.minus(&a.times(&y[*i])?)?;
            }
            assert!(dj == d[c], "reduced cost mismatch on column {c}");
            if !dj.is_zero() {
                assert!(!tab.is_basic[c], "basic column {c} with nonzero reduced cost");
                let at_lower = *xj == tab.lower[c];
                assert!(
                    (at_lower && dj.is_positive()) || (!at_lower && dj.is_negative()),
                    "reduced cost sign violated on column {c}"
                );
                dual_obj = dual_obj.plus(&dj.times(xj)?)?;
            }
            reduced.push(dj.times(&self.sign)?);
        }
        assert!(min_obj == dual_obj, "strong duality violated");

        let sign = self.sign.to_q();
        Ok(LpSolution {
            objective: min_obj.to_q() * &sign,
            x: x.iter().map(Field::to_q).collect(),
            duals: y.iter().map(|v| v.to_q() * &sign).collect(),
            reduced_costs: reduced.iter().map(Field::to_q).collect(),
            dual_objective: dual_obj.to_q() * &sign,
            iterations: tab.iterations,
        })
    }
}
