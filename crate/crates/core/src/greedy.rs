//! Greedy set cover and the bipartition coverings of Kneser–Sierpiński
//! blocks, with the quantities used to bound them.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::boolmat::subsets_lex;
use crate::covers::{Covering, FractionalCovering, Rectangle};
use crate::error::{Error, Result};
use crate::lp::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCoverInstance {
    pub universe: usize,
    pub sets: Vec<Vec<usize>>,
    /// Positive per-set costs; `None` means unit costs.
    pub weights: Option<Vec<Q>>,
}

impl SetCoverInstance {
    pub fn new(universe: usize, sets: Vec<Vec<usize>>) -> Result<Self> {
        let inst = SetCoverInstance {
            universe,
            sets,
            weights: None,
        };
        inst.check()?;
        Ok(inst)
    }

    pub fn weighted(universe: usize, sets: Vec<Vec<usize>>, weights: Vec<Q>) -> Result<Self> {
        let inst = SetCoverInstance {
            universe,
            sets,
            weights: Some(weights),
        };
        inst.check()?;
        Ok(inst)
    }

    fn check(&self) -> Result<()> {
        let mut hit = vec![false; self.universe];
        for s in &self.sets {
            for &e in s {
                if e >= self.universe {
                    return Err(Error::OutOfRange(format!(
                        "element {e} outside universe of {}",
                        self.universe
                    )));
                }
                hit[e] = true;
            }
        }
        if let Some(w) = &self.weights {
            if w.len() != self.sets.len() {
                return Err(Error::DimensionMismatch(format!(
                    "{} weights for {} sets",
                    w.len(),
                    self.sets.len()
                )));
            }
            if let Some(bad) = w.iter().find(|w| **w <= Q::zero()) {
                return Err(Error::BadWeight(bad.to_string()));
            }
        }
        match hit.iter().position(|h| !h) {
            Some(e) => Err(Error::InfeasibleCover(e)),
            None => Ok(()),
        }
    }
}

/// Repeatedly picks the set covering the most uncovered elements (per unit
/// of cost when weighted); ties go to the lowest index.
pub fn greedy_cover(inst: &SetCoverInstance) -> Result<Vec<usize>> {
    inst.check()?;
    let mut covered = vec![false; inst.universe];
    let mut left = inst.universe;
    let mut fresh: Vec<usize> = inst.sets.iter().map(|s| dedup_len(s)).collect();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); inst.universe];
    for (k, s) in inst.sets.iter().enumerate() {
        for &e in s {
            if members[e].last() != Some(&k) {
                members[e].push(k);
            }
        }
    }
    let mut chosen = Vec::new();
    while left > 0 {
        let mut best: Option<usize> = None;
        for k in 0..inst.sets.len() {
            if fresh[k] == 0 {
                continue;
            }
            let better = match best {
                None => true,
                Some(b) => match &inst.weights {
                    None => fresh[k] > fresh[b],
                    Some(w) => Q::from_integer(fresh[k].into()) * &w[b] > Q::from_integer(fresh[b].into()) * &w[k],
                },
            };
            if better {
                best = Some(k);
            }
        }
        let k = best.expect("feasible instance always has a useful set");
        chosen.push(k);
        for &e in &inst.sets[k] {
            if !covered[e] {
                covered[e] = true;
                left -= 1;
                for &t in &members[e] {
                    fresh[t] -= 1;
                }
            }
        }
    }
    Ok(chosen)
}

fn dedup_len(s: &[usize]) -> usize {
    let mut v = s.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// `⌈(1/γ)·ln⁺(γ|U|)⌉ + 1/γ`. The logarithm is evaluated in binary64; `1/γ`
/// is exact.
pub fn greedy_bound(gamma: &Q, universe: usize) -> Result<Q> {
    if *gamma <= Q::zero() || *gamma > Q::one() {
        return Err(Error::OutOfRange(format!("density {gamma} outside (0,1]")));
    }
    let mass = gamma * Q::from_integer(BigInt::from(universe));
    // ln⁺ vanishes exactly when γ|U| ≤ 1
    let head = if mass <= Q::one() {
        0.0
    } else {
        (mass.to_f64().expect("finite").ln() / gamma.to_f64().expect("finite")).ceil()
    };
    Ok(Q::from_integer(BigInt::from(head as u64)) + gamma.recip())
}

pub fn binomial(n: usize, r: usize) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for t in 0..r {
        acc = acc * BigUint::from(n - t) / BigUint::from(t + 1);
    }
    acc
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |a, t| a * BigUint::from(t))
}

fn qi(v: BigUint) -> Q {
    Q::from_integer(BigInt::from(v))
}

fn qb(n: usize, r: usize) -> Q {
    qi(binomial(n, r))
}

fn check_block(k: usize, x: usize, y: usize) -> Result<()> {
    if y > x || x + y > k {
        return Err(Error::OutOfRange(format!(
            "need 0 <= y <= x and x + y <= k, got k={k} x={x} y={y}"
        )));
    }
    Ok(())
}

/// Block shape check plus the mask width limit of the enumerating routines.
fn check_enumerable(k: usize, x: usize, y: usize) -> Result<()> {
    check_block(k, x, y)?;
    if k > 30 {
        return Err(Error::SizeLimit {
            what: format!("ground set size {k}"),
            limit: 30,
        });
    }
    Ok(())
}

/// `k! / (x! z! (k−x−z)!) / C(2z, z)` with `z = (k−x−y)/2`.
pub fn f_value(k: usize, x: usize, y: usize) -> Result<Q> {
    check_block(k, x, y)?;
    let r = k - x - y;
    if r % 2 == 1 {
        return Err(Error::Parity(r));
    }
    let z = r / 2;
    let multi = factorial(k) / (factorial(x) * factorial(z) * factorial(k - x - z));
    Ok(qi(multi) / qb(2 * z, z))
}

/// First-side size of the bipartitions used on `D^{x,y}_[k]`.
pub fn block_ell(k: usize, x: usize, y: usize) -> usize {
    x + (k - x - y).div_ceil(2)
}

/// Fraction of bipartitions with `|S| = ℓ` that cover a fixed disjoint pair:
/// `C(k−x−y, ℓ−x) / C(k, ℓ)`. Under even parity this is `C(2z,z)/C(k,x+z)`.
pub fn block_density(k: usize, x: usize, y: usize) -> Result<Q> {
    check_block(k, x, y)?;
    let ell = block_ell(k, x, y);
    Ok(qb(k - x - y, ell - x) / qb(k, ell))
}

/// `N = (C(k,x+z)/C(2z,z))·(1 + ln 4^k) + 1` with `z = ℓ − x`.
pub fn block_cover_size_bound(k: usize, x: usize, y: usize) -> Result<f64> {
    let inv = block_density(k, x, y)?.recip().to_f64().expect("finite");
    Ok(inv * (1.0 + k as f64 * 4f64.ln()) + 1.0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCover {
    pub k: usize,
    pub x: usize,
    pub y: usize,
    pub ell: usize,
    /// Chosen first sides `S`, as masks, in greedy order.
    pub bipartitions: Vec<u64>,
    pub covering: Covering,
    /// Number of disjoint pairs, i.e. 1-entries of the block.
    pub universe: usize,
}

/// Greedy covering of `D^{x,y}_[k]` by bipartition rectangles
/// `(x-subsets of S) × (y-subsets of S̄)` with `|S| = ℓ`. Requires `y ≤ x`.
pub fn disjointness_block_cover(k: usize, x: usize, y: usize) -> Result<BlockCover> {
    check_enumerable(k, x, y)?;
    let ell = block_ell(k, x, y);
    let full = (1u64 << k) - 1;
    let xs = subsets_lex(k, x);
    let ys = subsets_lex(k, y);
    let ss = subsets_lex(k, ell);
    let xrank: HashMap<u64, usize> = xs.iter().enumerate().map(|(r, &m)| (m, r)).collect();
    let yrank: HashMap<u64, usize> = ys.iter().enumerate().map(|(r, &m)| (m, r)).collect();
    let srank: HashMap<u64, usize> = ss.iter().enumerate().map(|(r, &m)| (m, r)).collect();

    let per_set = binomial(ell, x).to_usize().unwrap() * binomial(k - ell, y).to_usize().unwrap();
    let mut fresh = vec![per_set; ss.len()];
    let mut covered = vec![false; xs.len() * ys.len()];
    let universe: usize = xs.iter().map(|&a| ys.iter().filter(|&&b| a & b == 0).count()).sum();
    let mut left = universe;
    let mut chosen = Vec::new();
    let mut rects = Vec::new();
    let fill = ell - x;
    while left > 0 {
        let mut best = 0;
        for t in 1..ss.len() {
            if fresh[t] > fresh[best] {
                best = t;
            }
        }
        let s = ss[best];
        chosen.push(s);
        let comp = full & !s;
        let rows: Vec<usize> = submasks(s, x).into_iter().map(|m| xrank[&m]).collect();
        let cols: Vec<usize> = submasks(comp, y).into_iter().map(|m| yrank[&m]).collect();
        for &r in &rows {
            for &c in &cols {
                let cell = r * ys.len() + c;
                if covered[cell] {
                    continue;
                }
                covered[cell] = true;
                left -= 1;
                // every S' ⊇ X with S' ∩ Y = ∅ loses this pair
                let free = full & !(xs[r] | ys[c]);
                for t in submasks(free, fill) {
                    fresh[srank[&(xs[r] | t)]] -= 1;
                }
            }
        }
        rects.push(Rectangle::new(rows, cols)?);
    }
    Ok(BlockCover {
        k,
        x,
        y,
        ell,
        bipartitions: chosen,
        covering: Covering::new((xs.len(), ys.len()), rects),
        universe,
    })
}

/// Submasks of `mask` with exactly `size` bits, in lexicographic order of
/// their member lists.
fn submasks(mask: u64, size: usize) -> Vec<u64> {
    let bits: Vec<u32> = (0..64).filter(|b| mask >> b & 1 == 1).collect();
    subsets_lex(bits.len(), size)
        .into_iter()
        .map(|m| {
            (0..bits.len())
                .filter(|t| m >> t & 1 == 1)
                .fold(0, |acc, t| acc | 1u64 << bits[t])
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullCover {
    pub k: usize,
    pub covering: Covering,
    /// `(x, y, block cost)` for every nonempty block, `x` over rows.
    pub blocks: Vec<(usize, usize, usize)>,
}

impl FullCover {
    pub fn cost(&self) -> usize {
        self.covering.cost()
    }
}

/// Covering of `D_{2^k}` assembled from the block coverings for all
/// `x + y ≤ k`. Blocks with `x < y` reuse the `(y, x)` covering transposed.
/// Row and column indices are the subset masks.
pub fn disjointness_full_cover(k: usize) -> Result<FullCover> {
    if k > 14 {
        return Err(Error::SizeLimit {
            what: format!("disjointness order k={k}"),
            limit: 14,
        });
    }
    let n = 1usize << k;
    let mut rects = Vec::new();
    let mut blocks = Vec::new();
    for x in 0..=k {
        for y in 0..=k - x {
            let (a, b) = (x.max(y), x.min(y));
            let bc = disjointness_block_cover(k, a, b)?;
            let (rows_lex, cols_lex) = (subsets_lex(k, x), subsets_lex(k, y));
            let block = if x >= y { bc.covering } else { bc.covering.transpose() };
            blocks.push((x, y, block.cost()));
            for r in block.rectangles {
                rects.push(Rectangle::new(
                    r.rows().iter().map(|&i| rows_lex[i] as usize),
                    r.cols().iter().map(|&j| cols_lex[j] as usize),
                )?);
            }
        }
    }
    Ok(FullCover {
        k,
        covering: Covering::new((n, n), rects),
        blocks,
    })
}

fn check_ell(k: usize, x: usize, y: usize, ell: usize) -> Result<()> {
    if x + y > k || ell < x || ell + y > k {
        return Err(Error::OutOfRange(format!(
            "need x <= ell <= k - y, got k={k} x={x} y={y} ell={ell}"
        )));
    }
    Ok(())
}

/// `1/C(ℓ,x) + 1/C(k−ℓ,y)`.
pub fn mu(k: usize, x: usize, y: usize, ell: usize) -> Result<Q> {
    check_ell(k, x, y, ell)?;
    Ok(qb(ell, x).recip() + qb(k - ell, y).recip())
}

/// The `ℓ` minimizing `μ`, smallest on ties.
pub fn ell_star(k: usize, x: usize, y: usize) -> Result<usize> {
    if x + y > k {
        return Err(Error::OutOfRange(format!(
            "empty range for ell: x + y > k ({x} + {y} > {k})"
        )));
    }
    let mut best = (x, mu(k, x, y, x)?);
    for ell in x + 1..=k - y {
        let v = mu(k, x, y, ell)?;
        if v < best.1 {
            best = (ell, v);
        }
    }
    Ok(best.0)
}

pub fn mu_star(k: usize, x: usize, y: usize) -> Result<Q> {
    mu(k, x, y, ell_star(k, x, y)?)
}

/// Every bipartition `|S| = ℓ` with weight `1/C(k−x−y, ℓ−x)`, in
/// lexicographic order of `S`.
pub fn eta_covering(k: usize, x: usize, y: usize, ell: usize) -> Result<FractionalCovering> {
    check_ell(k, x, y, ell)?;
    if k > 30 {
        return Err(Error::SizeLimit {
            what: format!("ground set size {k}"),
            limit: 30,
        });
    }
    let full = (1u64 << k) - 1;
    let xs = subsets_lex(k, x);
    let ys = subsets_lex(k, y);
    let xrank: HashMap<u64, usize> = xs.iter().enumerate().map(|(r, &m)| (m, r)).collect();
    let yrank: HashMap<u64, usize> = ys.iter().enumerate().map(|(r, &m)| (m, r)).collect();
    let w = qb(k - x - y, ell - x).recip();
    let mut weighted = Vec::new();
    for s in subsets_lex(k, ell) {
        let rows = submasks(s, x).into_iter().map(|m| xrank[&m]);
        let cols = submasks(full & !s, y).into_iter().map(|m| yrank[&m]);
        weighted.push((Rectangle::new(rows, cols)?, w.clone()));
    }
    Ok(FractionalCovering {
        rows: xs.len(),
        cols: ys.len(),
        weighted,
    })
}

/// Closed-form cost of `eta_covering`: `(C(ℓ,x)+C(k−ℓ,y))·C(k,ℓ)/C(k−x−y,ℓ−x)`.
pub fn eta_cost(k: usize, x: usize, y: usize, ell: usize) -> Result<Q> {
    check_ell(k, x, y, ell)?;
    Ok((qb(ell, x) + qb(k - ell, y)) * qb(k, ell) / qb(k - x - y, ell - x))
}

/// `C(k,x)·C(k−x,y)·C(k−x−y,ℓ−x) = C(k,ℓ)·C(ℓ,x)·C(k−ℓ,y)`.
pub fn trinomial_identity_check(k: usize, x: usize, y: usize, ell: usize) -> Result<bool> {
    check_ell(k, x, y, ell)?;
    let lhs = binomial(k, x) * binomial(k - x, y) * binomial(k - x - y, ell - x);
    let rhs = binomial(k, ell) * binomial(ell, x) * binomial(k - ell, y);
    Ok(lhs == rhs)
}

/// Binary entropy in bits.
pub fn entropy(a: f64) -> f64 {
    if a <= 0.0 || a >= 1.0 {
        return 0.0;
    }
    -a * a.log2() - (1.0 - a) * (1.0 - a).log2()
}

/// Maximizes `H(α) + 1 − 3α` over `(0, 1/2)` by golden-section search down
/// to an interval of width `1e-10`. Returns `(argmax, max)`.
pub fn entropy_exponent() -> (f64, f64) {
    let g = |a: f64| entropy(a) + 1.0 - 3.0 * a;
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    let mut c = hi - phi * (hi - lo);
    let mut d = lo + phi * (hi - lo);
    let (mut gc, mut gd) = (g(c), g(d));
    while hi - lo > 1e-10 {
        if gc > gd {
            hi = d;
            d = c;
            gd = gc;
            c = hi - phi * (hi - lo);
            gc = g(c);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + phi * (hi - lo);
            gd = g(d);
        }
    }
    let a = (lo + hi) / 2.0;
    (a, g(a))
}

/// `k! / (m! (k/2−m)! (k/2)!) / C(k−2m, k/2−m)` for even `k`.
pub fn kneser_d(m: usize, k: usize) -> Result<Q> {
    if k % 2 == 1 {
        return Err(Error::Parity(k));
    }
    let h = k / 2;
    if m > h {
        return Err(Error::OutOfRange(format!("m={m} exceeds k/2={h}")));
    }
    let multi = factorial(k) / (factorial(m) * factorial(h - m) * factorial(h));
    Ok(qi(multi) / qb(k - 2 * m, h - m))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockReport {
    pub k: usize,
    pub x: usize,
    pub y: usize,
    pub ell: usize,
    pub gamma: Q,
    pub greedy_size: usize,
    pub greedy_bound: Q,
    pub block_cost: usize,
    /// `None` under odd parity.
    pub f_value: Option<Q>,
    pub mu_star: Q,
    /// Cost of `η(ℓ*)`.
    pub eta_cost: Q,
}

pub const REPORT_HEADER: &str = "k,x,y,ell,gamma,greedy_size,greedy_bound,block_cost,f_value,mu_star,eta_cost";

fn ratio(q: &Q) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

impl BlockReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.k,
            self.x,
            self.y,
            self.ell,
            ratio(&self.gamma),
            self.greedy_size,
            ratio(&self.greedy_bound),
            self.block_cost,
            self.f_value.as_ref().map(ratio).unwrap_or_default(),
            ratio(&self.mu_star),
            ratio(&self.eta_cost),
        )
    }
}

pub fn block_report(k: usize, x: usize, y: usize) -> Result<BlockReport> {
    let bc = disjointness_block_cover(k, x, y)?;
    let gamma = block_density(k, x, y)?;
    let ls = ell_star(k, x, y)?;
    Ok(BlockReport {
        k,
        x,
        y,
        ell: bc.ell,
        greedy_bound: greedy_bound(&gamma, bc.universe)?,
        gamma,
        greedy_size: bc.covering.len(),
        block_cost: bc.covering.cost(),
        f_value: f_value(k, x, y).ok(),
        mu_star: mu(k, x, y, ls)?,
        eta_cost: eta_cost(k, x, y, ls)?,
    })
}

/// CSV with one row per block `y ≤ x`, `x + y ≤ k`.
pub fn report_csv(k: usize) -> Result<String> {
    let mut s = format!("{REPORT_HEADER}\n");
    for x in 0..=k {
        for y in 0..=x.min(k - x) {
            s.push_str(&block_report(k, x, y)?.csv_row());
            s.push('\n');
        }
    }
    Ok(s)
}
