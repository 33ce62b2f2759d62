//! Dual certificates: per-entry values whose sum over every rectangle stays
//! within the rectangle's cost.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Q;
use crate::boolmat::{parse_header, triangular, BooleanMatrix};
use crate::covers::{parse_ratio, Rectangle, MAX_ENUM_ROWS};
use crate::error::{Error, Result};

/// Integer excess, row indices and column indices of a rectangle.
type Candidate = (i128, Vec<usize>, Vec<usize>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualCertificate {
    pub rows: usize,
    pub cols: usize,
    /// Values on 1-entries; missing entries are 0.
    pub values: BTreeMap<(usize, usize), Q>,
}

impl DualCertificate {
    pub fn get(&self, i: usize, j: usize) -> Q {
        self.values.get(&(i, j)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn total(&self) -> Q {
        self.values.values().cloned().sum()
    }

    /// ".dc" text: header `m n`, then `i j p/q` per stored value.
    pub fn to_dc_string(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for ((i, j), v) in &self.values {
            s.push_str(&format!("{i} {j} {}/{}\n", v.numer(), v.denom()));
        }
        s
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut lines = s.lines();
        let h = parse_header(lines.next(), 2)?;
        let (rows, cols) = (h[0], h[1]);
        let mut values = BTreeMap::new();
        for (k, line) in lines.enumerate() {
            let lineno = k + 2;
            if line.is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: lineno, msg };
            let parts: Vec<&str> = line.split(' ').collect();
            if parts.len() != 3 {
                return Err(perr(format!("malformed line {line:?}")));
            }
            let i: usize = parts[0].parse().map_err(|_| perr(format!("bad row {:?}", parts[0])))?;
            let j: usize = parts[1]
                .parse()
                .map_err(|_| perr(format!("bad column {:?}", parts[1])))?;
            if i >= rows || j >= cols {
                return Err(perr(format!("entry ({i},{j}) out of range")));
            }
            let v = parse_ratio(parts[2]).ok_or_else(|| perr(format!("bad value {:?}", parts[2])))?;
            if values.insert((i, j), v).is_some() {
                return Err(perr(format!("duplicate entry ({i},{j})")));
            }
        }
        Ok(DualCertificate { rows, cols, values })
    }
}

/// The diagonal certificate for `T_n`: 2 on the first superdiagonal, 1 where
/// `j − i` is a larger power of two.
pub fn triangular_certificate(n: usize) -> Result<DualCertificate> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("certificate needs n >= 2, got {n}")));
    }
    let mut values = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let d = j - i;
            let v = if d == 1 {
                2
            } else if d.is_power_of_two() {
                1
            } else {
                continue;
            };
            values.insert((i, j), Q::from_integer(v.into()));
        }
    }
    Ok(DualCertificate {
        rows: n,
        cols: n,
        values,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateReport {
    pub feasible: bool,
    /// Sum of all certificate values.
    pub value: Q,
    /// Minimum of `|R|+|C| − Σ_{R×C} y` over all rectangles.
    pub worst_slack: Q,
    /// A rectangle attaining the worst slack when it is negative.
    pub violation: Option<Rectangle>,
    /// First entry with a negative value, if any.
    pub negative: Option<(usize, usize)>,
}

/// Checks nonnegativity and every rectangle constraint. Triangular hosts use
/// the split-point oracle; other hosts enumerate the row subsets of the
/// smaller side.
pub fn verify_certificate(a: &BooleanMatrix, cert: &DualCertificate) -> Result<CertificateReport> {
    check_support(a, cert)?;
    let negative = cert.values.iter().find(|(_, v)| v.is_negative()).map(|(&e, _)| e);
    let n = a.rows();
    let (excess, rect) = if n >= 2 && a.cols() == n && *a == triangular(n)? {
        split_point_excess(cert)?
    } else {
        max_excess(a, cert, true)?
    };
    let worst_slack = -excess;
    let violation = if worst_slack.is_negative() { Some(rect) } else { None };
    Ok(CertificateReport {
        feasible: negative.is_none() && violation.is_none(),
        value: cert.total(),
        worst_slack,
        violation,
        negative,
    })
}

fn check_support(a: &BooleanMatrix, cert: &DualCertificate) -> Result<()> {
    if (cert.rows, cert.cols) != a.dims() {
        return Err(Error::DimensionMismatch(format!(
            "certificate is {}x{}, host is {}x{}",
            cert.rows,
            cert.cols,
            a.rows(),
            a.cols()
        )));
    }
    for &(i, j) in cert.values.keys() {
        if i >= a.rows() || j >= a.cols() || !a.get(i, j) {
            return Err(Error::NotARectangle { row: i, col: j });
        }
    }
    Ok(())
}

/// Scales all values to integers over a common denominator `L`.
fn scaled(values: impl Iterator<Item = Q> + Clone) -> Result<(i128, Vec<i128>)> {
    let l = values.clone().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let overflow = || Error::SizeLimit {
        what: "certificate denominators".into(),
        limit: i128::MAX as usize,
    };
    let li = l.to_i128().ok_or_else(overflow)?;
    let vs = values
        .map(|v| (v.numer() * (&l / v.denom())).to_i128().ok_or_else(overflow))
        .collect::<Result<Vec<_>>>()?;
    Ok((li, vs))
}

/// Largest `Σ_{R×C} y − w(R,C)` over 1-rectangles of `a` (with `w` either the
/// cost `|R|+|C|` or 1), and a rectangle attaining it.
pub(crate) fn max_excess(a: &BooleanMatrix, cert: &DualCertificate, weighted: bool) -> Result<(Q, Rectangle)> {
    let (v, mut top) = excess_search(a, cert, weighted, 1)?;
    Ok((v, top.pop().map(|(r, _)| r).expect("at least one rectangle")))
}

/// Maximum of `Σ_{u∈S} y_u − w(S)` over rectangles `S`, plus the `keep`
/// rectangles of largest excess (a best one first; positive excess only,
/// except that the overall best is always returned).
fn excess_search(
    a: &BooleanMatrix,
    cert: &DualCertificate,
    weighted: bool,
    keep: usize,
) -> Result<(Q, Vec<(Rectangle, Q)>)> {
    if a.ones_count() == 0 {
        return Err(Error::OutOfRange("matrix has no 1-entries".into()));
    }
    let transposed = a.rows() > a.cols();
    let (h, lookup): (BooleanMatrix, Box<dyn Fn(usize, usize) -> Q>) = if transposed {
        (a.transpose(), Box::new(|i, j| cert.get(j, i)))
    } else {
        (a.clone(), Box::new(|i, j| cert.get(i, j)))
    };
    if h.rows() > MAX_ENUM_ROWS {
        return Err(Error::SizeLimit {
            what: format!("{} rows for rectangle enumeration", h.rows()),
            limit: MAX_ENUM_ROWS,
        });
    }
    let (m, n) = h.dims();
    let ones: Vec<(usize, usize)> = h.ones().collect();
    let (l, vals) = scaled(ones.iter().map(|&(i, j)| lookup(i, j)))?;
    let mut y = vec![vec![0i128; n]; m];
    for (&(i, j), v) in ones.iter().zip(vals) {
        y[i][j] = v;
    }
    let (col_w, row_w) = if weighted { (l, l) } else { (0, 0) };
    let base = if weighted { 0 } else { l };

    struct Search<'a> {
        h: &'a BooleanMatrix,
        y: &'a [Vec<i128>],
        col_w: i128,
        row_w: i128,
        base: i128,
        rows: Vec<usize>,
        sums: Vec<i128>,
        best: Option<Candidate>,
        keep: usize,
        top: BinaryHeap<Reverse<Candidate>>,
    }
    impl Search<'_> {
        fn eval(&mut self, support: &[usize]) {
            let mut total = -(self.rows.len() as i128) * self.row_w - self.base;
            let mut cols = Vec::new();
            let mut single: Option<(i128, usize)> = None;
            for &c in support {
                let g = self.sums[c] - self.col_w;
                if g > 0 {
                    total += g;
                    cols.push(c);
                }
                if single.is_none_or(|(b, _)| g > b) {
                    single = Some((g, c));
                }
            }
            if cols.is_empty() {
                let (g, c) = single.expect("support is nonempty");
                total += g;
                cols.push(c);
            }
            if total > 0 && self.keep > 1 {
                if self.top.len() < self.keep {
                    self.top.push(Reverse((total, self.rows.clone(), cols.clone())));
                } else if self.top.peek().is_some_and(|Reverse(t)| t.0 < total) {
                    self.top.pop();
                    self.top.push(Reverse((total, self.rows.clone(), cols.clone())));
                }
            }
            if self.best.as_ref().is_none_or(|(b, _, _)| total > *b) {
                self.best = Some((total, self.rows.clone(), cols));
            }
        }

        fn dfs(&mut self, start: usize, support: &crate::bits::BitSet) {
            for i in start..self.h.rows() {
                let mut s = support.clone();
                s.intersect_with(self.h.row(i));
                if s.is_empty() {
                    continue;
                }
                let sv = s.to_vec();
                self.rows.push(i);
                for &c in &sv {
                    self.sums[c] += self.y[i][c];
                }
                self.eval(&sv);
                self.dfs(i + 1, &s);
                for &c in &sv {
                    self.sums[c] -= self.y[i][c];
                }
                self.rows.pop();
            }
        }
    }
    let mut s = Search {
        h: &h,
        y: &y,
        col_w,
        row_w,
        base,
        rows: Vec::new(),
        sums: vec![0; n],
        best: None,
        keep,
        top: BinaryHeap::new(),
    };
    s.dfs(0, &crate::bits::BitSet::full(n));
    let (v, r, c) = s.best.expect("at least one rectangle");
    let make = |r: Vec<usize>, c: Vec<usize>| {
        if transposed {
            Rectangle::new(c, r)
        } else {
            Rectangle::new(r, c)
        }
    };
    let mut out = vec![(make(r, c)?, Q::new(v.into(), l.into()))];
    let mut rest = s.top.into_sorted_vec();
    rest.retain(|Reverse(t)| t.0 > 0);
    for Reverse((t, r, c)) in rest {
        let rect = make(r, c)?;
        if rect != out[0].0 {
            out.push((rect, Q::new(t.into(), l.into())));
        }
    }
    Ok((Q::new(v.into(), l.into()), out))
}

/// A rectangle with positive excess, if any; used as the pricing step of
/// column generation.
/// Up to `cap` rectangles with positive excess, most violated first.
pub(crate) fn violated(
    a: &BooleanMatrix,
    cert: &DualCertificate,
    weighted: bool,
    cap: usize,
) -> Result<Vec<(Rectangle, Q)>> {
    let (v, mut out) = excess_search(a, cert, weighted, cap)?;
    if !v.is_positive() {
        return Ok(Vec::new());
    }
    out.truncate(cap);
    Ok(out)
}

/// Rectangles of `T_n` are exactly `R × C` with `max R < min C`. For each
/// nonempty `C` the best rows are those with `rowsum(C) > 1`, drawn from
/// `0..min C`.
fn split_point_excess(cert: &DualCertificate) -> Result<(Q, Rectangle)> {
    let n = cert.rows;
    if n > 30 {
        return Err(Error::SizeLimit {
            what: format!("triangular size {n} for the split-point oracle"),
            limit: 30,
        });
    }
    let keys: Vec<(usize, usize)> = cert.values.keys().copied().collect();
    let (l, vals) = scaled(cert.values.values().cloned())?;
    let mut y = vec![vec![0i128; n]; n];
    for (&(i, j), v) in keys.iter().zip(vals) {
        y[i][j] = v;
    }
    let mut best: Option<Candidate> = None;
    let mut rowsum = vec![0i128; n];
    for mask in 1u64..(1u64 << (n - 1)) {
        let cols: Vec<usize> = (1..n).filter(|c| mask >> (c - 1) & 1 == 1).collect();
        let t = cols[0];
        let mut total = -(cols.len() as i128) * l;
        let mut rows = Vec::new();
        let mut single = (i128::MIN, 0);
        for (i, rs) in rowsum.iter_mut().enumerate().take(t) {
            *rs = cols.iter().map(|&c| y[i][c]).sum::<i128>() - l;
            if *rs > 0 {
                total += *rs;
                rows.push(i);
            }
            if *rs > single.0 {
                single = (*rs, i);
            }
        }
        if rows.is_empty() {
            total += single.0;
            rows.push(single.1);
        }
        if best.as_ref().is_none_or(|(b, _, _)| total > *b) {
            best = Some((total, rows, cols));
        }
    }
    let (v, r, c) = best.expect("n >= 2");
    Ok((Q::new(v.into(), l.into()), Rectangle::new(r, c)?))
}
