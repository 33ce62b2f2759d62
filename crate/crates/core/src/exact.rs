//! Exact covering costs for small matrices by branch and bound, the
//! Nechiporuk density bound, and the direct-product verification harness.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bits::BitSet;
use crate::boolmat::{kronecker, BooleanMatrix};
use crate::covers::{enumerate_maximal_rectangles, Covering, Rectangle};
use crate::error::{Error, Result};
use crate::lp::{dual_weights, solve_dual, Q};
use crate::network::RectifierNetwork;

/// Default cap on branch-and-bound nodes.
pub const DEFAULT_BB_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactResult {
    /// Objective value of `covering`: cost for OR₂ and SUM₂, rectangle
    /// count for the Boolean rank.
    pub value: usize,
    pub covering: Covering,
    /// Proven lower bound; equals `value` when `optimal`.
    pub lower_bound: usize,
    pub optimal: bool,
    pub nodes: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Cover,
    Rank,
    Partition,
}

pub fn exact_or2(a: &BooleanMatrix) -> Result<ExactResult> {
    exact_or2_with_budget(a, DEFAULT_BB_BUDGET)
}

/// Minimum-cost covering. Stops after `budget` search nodes and then
/// returns the best covering found with `optimal = false`.
pub fn exact_or2_with_budget(a: &BooleanMatrix, budget: u64) -> Result<ExactResult> {
    search(a, Mode::Cover, budget)
}

pub fn exact_boolean_rank(a: &BooleanMatrix) -> Result<ExactResult> {
    exact_boolean_rank_with_budget(a, DEFAULT_BB_BUDGET)
}

/// Minimum number of rectangles in a covering.
pub fn exact_boolean_rank_with_budget(a: &BooleanMatrix, budget: u64) -> Result<ExactResult> {
    search(a, Mode::Rank, budget)
}

pub fn exact_sum2(a: &BooleanMatrix) -> Result<ExactResult> {
    exact_sum2_with_budget(a, DEFAULT_BB_BUDGET)
}

/// Minimum-cost partition into rectangles.
pub fn exact_sum2_with_budget(a: &BooleanMatrix, budget: u64) -> Result<ExactResult> {
    search(a, Mode::Partition, budget)
}

/// Groups equal nonzero rows; returns the classes in order of first member.
fn classes(vectors: impl Iterator<Item = BitSet>) -> Vec<(BitSet, Vec<usize>)> {
    let mut out: Vec<(BitSet, Vec<usize>)> = Vec::new();
    let mut index: HashMap<BitSet, usize> = HashMap::new();
    for (i, v) in vectors.enumerate() {
        if v.is_empty() {
            continue;
        }
        match index.get(&v) {
            Some(&k) => out[k].1.push(i),
            None => {
                index.insert(v.clone(), out.len());
                out.push((v, vec![i]));
            }
        }
    }
    out
}

const REDUCED_LIMIT: usize = 64;

struct Search {
    mode: Mode,
    ones: Vec<u64>,
    /// class sizes of the reduced rows and columns
    wr: Vec<i128>,
    wc: Vec<i128>,
    y: Vec<Vec<i128>>,
    scale: i128,
    maximal: Vec<(u64, u64)>,
    unc: Vec<u64>,
    unc_y: i128,
    cost: i128,
    stack: Vec<(u64, u64)>,
    best_cost: i128,
    best: Vec<(u64, u64)>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

/// All submasks of `m`, including 0.
fn submasks(m: u64) -> impl Iterator<Item = u64> {
    let mut s = m;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let cur = s;
        if s == 0 {
            done = true;
        } else {
            s = (s - 1) & m;
        }
        Some(cur)
    })
}

impl Search {
    fn rect_cost(&self, r: u64, c: u64) -> i128 {
        match self.mode {
            Mode::Rank => 1,
            _ => bits(r).map(|i| self.wr[i]).sum::<i128>() + bits(c).map(|j| self.wc[j]).sum::<i128>(),
        }
    }

    fn gain(&self, r: u64, c: u64) -> i128 {
        let fresh: i128 = bits(r)
            .map(|i| bits(self.unc[i] & c).map(|j| self.y[i][j]).sum::<i128>())
            .sum();
        fresh - self.rect_cost(r, c) * self.scale
    }

    fn candidates(&self, i: usize, j: usize) -> Vec<(u64, u64)> {
        let jb = 1u64 << j;
        let mut out = Vec::new();
        match self.mode {
            Mode::Rank => {
                out.extend(
                    self.maximal
                        .iter()
                        .copied()
                        .filter(|&(r, c)| r >> i & 1 == 1 && c & jb != 0),
                );
            }
            Mode::Cover | Mode::Partition => {
                let base = if self.mode == Mode::Cover {
                    &self.ones
                } else {
                    &self.unc
                };
                let pool: Vec<usize> = (0..self.ones.len()).filter(|&r| r != i && base[r] & jb != 0).collect();
                self.extend_rows(j, &pool, 0, 1u64 << i, base[i], self.unc[i], &mut out);
            }
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_rows(
        &self,
        j: usize,
        pool: &[usize],
        start: usize,
        r: u64,
        support: u64,
        reach: u64,
        out: &mut Vec<(u64, u64)>,
    ) {
        let jb = 1u64 << j;
        // columns allowed: common support, and (for covers) hit by some uncovered entry
        let allowed = support & reach & !jb;
        for extra in submasks(allowed) {
            let c = extra | jb;
            if self.mode == Mode::Partition || bits(r).all(|t| self.unc[t] & c != 0) {
                out.push((r, c));
            }
        }
        let base = if self.mode == Mode::Cover {
            &self.ones
        } else {
            &self.unc
        };
        for (k, &t) in pool.iter().enumerate().skip(start) {
            let s = support & base[t];
            if self.unc[t] & s == 0 {
                continue;
            }
            self.extend_rows(j, pool, k + 1, r | 1u64 << t, s, reach | self.unc[t], out);
        }
    }

    fn apply(&mut self, r: u64, c: u64) -> Vec<(usize, u64)> {
        let mut saved = Vec::new();
        for t in bits(r) {
            let fresh = self.unc[t] & c;
            if fresh != 0 {
                saved.push((t, self.unc[t]));
                self.unc_y -= bits(fresh).map(|j| self.y[t][j]).sum::<i128>();
                self.unc[t] &= !c;
            }
        }
        self.cost += self.rect_cost(r, c);
        self.stack.push((r, c));
        saved
    }

    fn undo(&mut self, r: u64, c: u64, saved: Vec<(usize, u64)>) {
        self.stack.pop();
        self.cost -= self.rect_cost(r, c);
        for (t, old) in saved {
            let fresh = old & !self.unc[t];
            self.unc_y += bits(fresh).map(|j| self.y[t][j]).sum::<i128>();
            self.unc[t] = old;
        }
    }

    fn dfs(&mut self) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let Some(i) = self.unc.iter().position(|&u| u != 0) else {
            if self.cost < self.best_cost {
                self.best_cost = self.cost;
                self.best = self.stack.clone();
            }
            return;
        };
        // prune unless the bound leaves room for an improvement of at least 1
        if self.cost * self.scale + self.unc_y > (self.best_cost - 1) * self.scale {
            return;
        }
        let j = self.unc[i].trailing_zeros() as usize;
        let mut cands: Vec<(i128, u64, u64)> = self
            .candidates(i, j)
            .into_iter()
            .map(|(r, c)| (-self.gain(r, c), r, c))
            .collect();
        cands.sort_unstable();
        for (_, r, c) in cands {
            let saved = self.apply(r, c);
            self.dfs();
            self.undo(r, c, saved);
            if self.exhausted {
                return;
            }
        }
    }
}

fn search(a: &BooleanMatrix, mode: Mode, budget: u64) -> Result<ExactResult> {
    let (m, n) = a.dims();
    if a.ones_count() == 0 {
        return Ok(ExactResult {
            value: 0,
            covering: Covering::new((m, n), Vec::new()),
            lower_bound: 0,
            optimal: true,
            nodes: 0,
        });
    }
    let row_classes = classes((0..m).map(|i| a.row(i).clone()));
    let col_classes = classes((0..n).map(|j| a.column(j)));
    let (rm, rn) = (row_classes.len(), col_classes.len());
    if rm > REDUCED_LIMIT || rn > REDUCED_LIMIT {
        return Err(Error::SizeLimit {
            what: format!("{rm}x{rn} distinct rows and columns for exact search"),
            limit: REDUCED_LIMIT,
        });
    }
    let reduced = BooleanMatrix::from_fn(rm, rn, |r, c| a.get(row_classes[r].1[0], col_classes[c].1[0]))?;
    let ones: Vec<u64> = (0..rm)
        .map(|r| reduced.row(r).iter().fold(0u64, |acc, c| acc | 1 << c))
        .collect();

    let (_, y) = solve_dual(a, mode != Mode::Rank)?;
    let scale = y.values().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let too_big = || Error::SizeLimit {
        what: "dual denominators".into(),
        limit: i64::MAX as usize,
    };
    let mut yr = vec![vec![0i128; rn]; rm];
    let mut row_of = vec![usize::MAX; m];
    for (r, (_, members)) in row_classes.iter().enumerate() {
        for &i in members {
            row_of[i] = r;
        }
    }
    let mut col_of = vec![usize::MAX; n];
    for (c, (_, members)) in col_classes.iter().enumerate() {
        for &j in members {
            col_of[j] = c;
        }
    }
    for ((i, j), v) in &y {
        let s = (v.numer() * (&scale / v.denom())).to_i128().ok_or_else(too_big)?;
        yr[row_of[*i]][col_of[*j]] += s;
    }
    let scale = scale.to_i128().ok_or_else(too_big)?;
    let total_y: i128 = yr.iter().flatten().sum();

    let maximal = if mode == Mode::Rank {
        enumerate_maximal_rectangles(&reduced)?
            .iter()
            .map(|r| {
                (
                    r.rows().iter().fold(0u64, |acc, &t| acc | 1 << t),
                    r.cols().iter().fold(0u64, |acc, &t| acc | 1 << t),
                )
            })
            .collect()
    } else {
        Vec::new()
    };

    let mut s = Search {
        mode,
        wr: row_classes.iter().map(|(_, v)| v.len() as i128).collect(),
        wc: col_classes.iter().map(|(_, v)| v.len() as i128).collect(),
        y: yr,
        scale,
        maximal,
        unc: ones.clone(),
        unc_y: total_y,
        cost: 0,
        stack: Vec::new(),
        best_cost: i128::MAX,
        best: Vec::new(),
        nodes: 0,
        budget,
        exhausted: false,
        ones,
    };
    // incumbent: one rectangle per row class, or per column class
    let by_rows: Vec<(u64, u64)> = (0..rm).map(|r| (1u64 << r, s.ones[r])).collect();
    let by_cols: Vec<(u64, u64)> = (0..rn)
        .map(|c| {
            let rows = (0..rm)
                .filter(|&r| s.ones[r] >> c & 1 == 1)
                .fold(0u64, |acc, r| acc | 1 << r);
            (rows, 1u64 << c)
        })
        .collect();
    for cand in [by_rows, by_cols] {
        let cost: i128 = cand.iter().map(|&(r, c)| s.rect_cost(r, c)).sum();
        if cost < s.best_cost {
            s.best_cost = cost;
            s.best = cand;
        }
    }
    s.dfs();

    let expand = |mask: u64, cls: &[(BitSet, Vec<usize>)]| -> Vec<usize> {
        let mut v: Vec<usize> = bits(mask).flat_map(|t| cls[t].1.iter().copied()).collect();
        v.sort_unstable();
        v
    };
    let rects = s
        .best
        .iter()
        .map(|&(r, c)| Rectangle::new(expand(r, &row_classes), expand(c, &col_classes)))
        .collect::<Result<Vec<_>>>()?;
    let covering = Covering::new((m, n), rects);
    covering.validate(a)?;
    let value = s.best_cost as usize;
    let optimal = !s.exhausted;
    let root = Integer::div_ceil(&total_y, &scale) as usize;
    Ok(ExactResult {
        value,
        covering,
        lower_bound: if optimal { value } else { root.min(value) },
        optimal,
        nodes: s.nodes,
    })
}

/// Row-subset cap for the dense-submatrix check.
pub const NECHIPORUK_BUDGET: u64 = 10_000_000;

/// `|A| / (k·l)`, after checking that `A` has no all-1 `(k+1)×(l+1)`
/// submatrix; a witness is returned as the error otherwise.
pub fn nechiporuk_bound(a: &BooleanMatrix, k: usize, l: usize) -> Result<Q> {
    nechiporuk_bound_with_budget(a, k, l, NECHIPORUK_BUDGET)
}

/// As `nechiporuk_bound`, refusing when more than `budget` row subsets of
/// size `k+1` exist.
pub fn nechiporuk_bound_with_budget(a: &BooleanMatrix, k: usize, l: usize, budget: u64) -> Result<Q> {
    if k == 0 || l == 0 {
        return Err(Error::OutOfRange("k and l must be positive".into()));
    }
    let m = a.rows();
    let combos = crate::greedy::binomial(m, k + 1);
    if combos > budget.into() {
        return Err(Error::SizeLimit {
            what: format!("{combos} row subsets"),
            limit: budget as usize,
        });
    }
    fn rec(
        a: &BooleanMatrix,
        need: usize,
        l: usize,
        start: usize,
        rows: &mut Vec<usize>,
        s: &BitSet,
    ) -> Option<Vec<usize>> {
        if s.count() <= l {
            return None;
        }
        if rows.len() == need {
            return Some(rows.clone());
        }
        for i in start..a.rows() {
            let mut t = s.clone();
            t.intersect_with(a.row(i));
            rows.push(i);
            if let Some(w) = rec(a, need, l, i + 1, rows, &t) {
                return Some(w);
            }
            rows.pop();
        }
        None
    }
    if let Some(rows) = rec(a, k + 1, l, 0, &mut Vec::new(), &BitSet::full(a.cols())) {
        let mut s = BitSet::full(a.cols());
        for &i in &rows {
            s.intersect_with(a.row(i));
        }
        let cols = s.iter().take(l + 1).collect();
        return Err(Error::DenseWitness { rows, cols });
    }
    Ok(Q::new(a.ones_count().into(), (k * l).into()))
}

/// An edge with the rows its head reaches and the columns reaching its tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeRectangle {
    pub edge: (usize, usize),
    pub to_rows: Vec<usize>,
    pub from_cols: Vec<usize>,
}

pub fn edge_rectangles(net: &RectifierNetwork) -> Vec<EdgeRectangle> {
    let from = net.column_reach();
    let to = net.reversed().column_reach();
    net.edges()
        .iter()
        .map(|&(u, v)| EdgeRectangle {
            edge: (u, v),
            to_rows: to[v].to_vec(),
            from_cols: from[u].to_vec(),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeCheck {
    pub rect: EdgeRectangle,
    pub w_prime: Q,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubnetworkCheck {
    pub i1: usize,
    pub j1: usize,
    pub edges: usize,
    pub expresses: bool,
    /// Filled only by the SUM variant.
    pub unambiguous: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DirectProductReport {
    pub weights: BTreeMap<(usize, usize), Q>,
    pub rk_star: Q,
    pub edges: Vec<EdgeCheck>,
    pub subnetworks: Vec<SubnetworkCheck>,
    pub total_edges: usize,
    pub sum_w_prime: Q,
    /// `Σ w(i₁,j₁)·|E(N_{j₁⇝i₁})|`.
    pub weighted_subnetwork_edges: Q,
    /// Smallest subnetwork; an upper bound on OR(M) used in its place.
    pub min_edges: usize,
    pub product: Q,
}

impl DirectProductReport {
    /// Every per-edge, per-subnetwork and chain check holds.
    pub fn holds(&self) -> bool {
        self.edges.iter().all(|e| e.ok)
            && self
                .subnetworks
                .iter()
                .all(|s| s.expresses && s.unambiguous != Some(false))
            && self.chain_holds()
    }

    /// `|E| ≥ Σw′(e) ≥ Σ w·|E(N)| ≥ rk∨*(K)·min_edges`.
    pub fn chain_holds(&self) -> bool {
        let e = Q::from_integer(self.total_edges.into());
        e >= self.sum_w_prime
            && self.sum_w_prime >= self.weighted_subnetwork_edges
            && self.weighted_subnetwork_edges >= self.product
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# min_edges is the smallest subnetwork size, a >= OR(M) surrogate; OR(M) itself is not computed"
        );
        let _ = writeln!(s, "WEIGHTS rk*={}", self.rk_star);
        for ((i, j), w) in &self.weights {
            let _ = writeln!(s, "w {i} {j} {w}");
        }
        let _ = writeln!(s, "EDGES {}", self.edges.len());
        for e in &self.edges {
            let _ = writeln!(
                s,
                "e {} {} to={:?} from={:?} w'={} {}",
                e.rect.edge.0,
                e.rect.edge.1,
                e.rect.to_rows,
                e.rect.from_cols,
                e.w_prime,
                if e.ok { "ok" } else { "VIOLATED" }
            );
        }
        let _ = writeln!(s, "SUBNETWORKS {}", self.subnetworks.len());
        for n in &self.subnetworks {
            let _ = write!(s, "n {} {} edges={} expresses={}", n.i1, n.j1, n.edges, n.expresses);
            if let Some(u) = n.unambiguous {
                let _ = write!(s, " unambiguous={u}");
            }
            s.push('\n');
        }
        let _ = writeln!(s, "CHAIN");
        let _ = writeln!(s, "edges {}", self.total_edges);
        let _ = writeln!(s, "sum_w_prime {}", self.sum_w_prime);
        let _ = writeln!(s, "weighted_subnetwork_edges {}", self.weighted_subnetwork_edges);
        let _ = writeln!(s, "min_edges {} (>= OR(M) surrogate)", self.min_edges);
        let _ = writeln!(s, "rk_star_times_min_edges {}", self.product);
        let _ = writeln!(s, "holds {}", self.holds());
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("section,item,value,ok\n");
        for e in &self.edges {
            let _ = writeln!(s, "edge,{}->{},{},{}", e.rect.edge.0, e.rect.edge.1, e.w_prime, e.ok);
        }
        for n in &self.subnetworks {
            let ok = n.expresses && n.unambiguous != Some(false);
            let _ = writeln!(s, "subnetwork,{}:{},{},{}", n.i1, n.j1, n.edges, ok);
        }
        let chain = self.chain_holds();
        let _ = writeln!(s, "chain,edges,{},{chain}", self.total_edges);
        let _ = writeln!(s, "chain,sum_w_prime,{},{chain}", self.sum_w_prime);
        let _ = writeln!(
            s,
            "chain,weighted_subnetwork_edges,{},{chain}",
            self.weighted_subnetwork_edges
        );
        let _ = writeln!(s, "chain,min_edges,{},{chain}", self.min_edges);
        let _ = writeln!(s, "chain,rk_star_times_min_edges,{},{chain}", self.product);
        s
    }
}

/// Checks the counting argument behind `OR(K⊗M) ≥ rk∨*(K)·OR(M)` on a
/// concrete network for `K⊗M`.
pub fn verify_direct_product(
    k: &BooleanMatrix,
    m: &BooleanMatrix,
    net: &RectifierNetwork,
) -> Result<DirectProductReport> {
    direct_product(k, m, net, false)
}

/// The same chain for an unambiguous network, also checking that every
/// extracted subnetwork is unambiguous.
pub fn verify_direct_product_sum(
    k: &BooleanMatrix,
    m: &BooleanMatrix,
    net: &RectifierNetwork,
) -> Result<DirectProductReport> {
    if let Some((row, col, paths)) = net.first_ambiguity() {
        return Err(Error::Ambiguous {
            row,
            col,
            paths: paths.to_string(),
        });
    }
    direct_product(k, m, net, true)
}

fn direct_product(
    k: &BooleanMatrix,
    m: &BooleanMatrix,
    net: &RectifierNetwork,
    sum: bool,
) -> Result<DirectProductReport> {
    let km = kronecker(k, m)?;
    net.check_expresses(&km)?;
    let (m2, n2) = m.dims();
    let weights = dual_weights(k, false)?;
    let rk_star: Q = weights.values().cloned().sum();

    let mut edges = Vec::new();
    let mut sum_w_prime = Q::zero();
    for rect in edge_rectangles(net) {
        let mut r1: Vec<usize> = rect.to_rows.iter().map(|i| i / m2).collect();
        let mut c1: Vec<usize> = rect.from_cols.iter().map(|j| j / n2).collect();
        r1.dedup();
        c1.dedup();
        let mut w = Q::zero();
        for &i in &r1 {
            for &j in &c1 {
                if let Some(v) = weights.get(&(i, j)) {
                    w += v;
                }
            }
        }
        let ok = w <= Q::one();
        sum_w_prime += &w;
        edges.push(EdgeCheck { rect, w_prime: w, ok });
    }

    let mut subnetworks = Vec::new();
    let mut weighted = Q::zero();
    for (i1, j1) in k.ones() {
        let cols: Vec<usize> = (j1 * n2..(j1 + 1) * n2).collect();
        let rows: Vec<usize> = (i1 * m2..(i1 + 1) * m2).collect();
        let sub = net.restrict(&cols, &rows)?;
        let expresses = sub.check_expresses(m).is_ok();
        weighted += weights.get(&(i1, j1)).cloned().unwrap_or_else(Q::zero) * Q::from_integer(sub.size().into());
        subnetworks.push(SubnetworkCheck {
            i1,
            j1,
            edges: sub.size(),
            expresses,
            unambiguous: sum.then(|| sub.is_unambiguous()),
        });
    }
    let min_edges = subnetworks.iter().map(|s| s.edges).min().unwrap_or(0);
    let product = &rk_star * Q::from_integer(min_edges.into());
    debug_assert!(!sum_w_prime.is_negative());
    Ok(DirectProductReport {
        weights,
        rk_star,
        edges,
        subnetworks,
        total_edges: net.size(),
        sum_w_prime,
        weighted_subnetwork_edges: weighted,
        min_edges,
        product,
    })
}
