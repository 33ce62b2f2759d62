//! Rectangles, integral and fractional coverings, partitions, and maximal
//! rectangle enumeration.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bits::BitSet;
use crate::boolmat::{parse_header, BooleanMatrix};
use crate::error::{Error, Result};

/// Row limit for maximal-rectangle enumeration.
pub const MAX_ENUM_ROWS: usize = 24;
/// Cap on the number of rectangles any enumeration may return.
pub const DEFAULT_MAX_RECTS: usize = 1 << 20;

/// A pair of nonempty sorted index sets `(R, C)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rectangle {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl Rectangle {
    pub fn new(rows: impl IntoIterator<Item = usize>, cols: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut rows: Vec<usize> = rows.into_iter().collect();
        let mut cols: Vec<usize> = cols.into_iter().collect();
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        if rows.is_empty() || cols.is_empty() {
            return Err(Error::EmptyRectangle);
        }
        Ok(Rectangle { rows, cols })
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    /// `|R| + |C|`.
    pub fn cost(&self) -> usize {
        self.rows.len() + self.cols.len()
    }

    /// Number of entries `|R| * |C|`.
    pub fn area(&self) -> usize {
        self.rows.len() * self.cols.len()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.rows.binary_search(&i).is_ok() && self.cols.binary_search(&j).is_ok()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .flat_map(move |&i| self.cols.iter().map(move |&j| (i, j)))
    }

    pub fn transpose(&self) -> Rectangle {
        Rectangle {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }

    /// Checks that the rectangle lies inside `a` and is all-1; reports the
    /// first zero entry in row-major order.
    pub fn check(&self, a: &BooleanMatrix) -> Result<()> {
        let (m, n) = a.dims();
        if self.rows.last().is_some_and(|&r| r >= m) || self.cols.last().is_some_and(|&c| c >= n) {
            return Err(Error::DimensionMismatch(format!("rectangle exceeds the {m}x{n} host")));
        }
        match self.entries().find(|&(i, j)| !a.get(i, j)) {
            Some((row, col)) => Err(Error::NotARectangle { row, col }),
            None => Ok(()),
        }
    }

    fn fmt_indices(v: &[usize]) -> String {
        v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for Rectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "R {} C {}",
            Self::fmt_indices(&self.rows),
            Self::fmt_indices(&self.cols)
        )
    }
}

/// Cost of a single rectangle.
pub fn rectangle_cost(r: &Rectangle) -> usize {
    r.cost()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Covering {
    pub rows: usize,
    pub cols: usize,
    pub rectangles: Vec<Rectangle>,
}

impl Covering {
    pub fn new(dims: (usize, usize), rectangles: Vec<Rectangle>) -> Self {
        Covering {
            rows: dims.0,
            cols: dims.1,
            rectangles,
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Sum of rectangle costs, without validation.
    pub fn cost(&self) -> usize {
        self.rectangles.iter().map(Rectangle::cost).sum()
    }

    pub fn len(&self) -> usize {
        self.rectangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rectangles.is_empty()
    }

    /// Per-entry coverage counts after checking every rectangle against `a`.
    fn coverage(&self, a: &BooleanMatrix) -> Result<Vec<u32>> {
        if self.dims() != a.dims() {
            return Err(Error::DimensionMismatch(format!(
                "covering is {}x{}, host is {}x{}",
                self.rows,
                self.cols,
                a.rows(),
                a.cols()
            )));
        }
        let mut bad: Option<(usize, usize)> = None;
        let n = a.cols();
        let mut counts = vec![0u32; a.rows() * n];
        for r in &self.rectangles {
            if let Err(e) = r.check(a) {
                match e {
                    Error::NotARectangle { row, col } => {
                        if bad.is_none_or(|b| (row, col) < b) {
                            bad = Some((row, col));
                        }
                        continue;
                    }
                    other => return Err(other),
                }
            }
            for (i, j) in r.entries() {
                counts[i * n + j] = counts[i * n + j].saturating_add(1);
            }
        }
        if let Some((row, col)) = bad {
            return Err(Error::NotARectangle { row, col });
        }
        Ok(counts)
    }

    /// Validates the covering against its host.
    pub fn validate(&self, a: &BooleanMatrix) -> Result<()> {
        let counts = self.coverage(a)?;
        let n = a.cols();
        match a.ones().find(|&(i, j)| counts[i * n + j] == 0) {
            Some((row, col)) => Err(Error::Uncovered { row, col }),
            None => Ok(()),
        }
    }

    pub fn as_fractional(&self) -> FractionalCovering {
        FractionalCovering {
            rows: self.rows,
            cols: self.cols,
            weighted: self
                .rectangles
                .iter()
                .map(|r| (r.clone(), BigRational::one()))
                .collect(),
        }
    }

    pub fn transpose(&self) -> Covering {
        Covering {
            rows: self.cols,
            cols: self.rows,
            rectangles: self.rectangles.iter().map(Rectangle::transpose).collect(),
        }
    }

    /// Rectangles in sorted order, for comparing coverings up to order.
    pub fn normalized(&self) -> Vec<Rectangle> {
        let mut v = self.rectangles.clone();
        v.sort();
        v
    }

    pub fn to_cov_string(&self) -> String {
        self.as_fractional().to_cov_string()
    }
}

/// Cost of a valid covering of `a`.
pub fn covering_cost(a: &BooleanMatrix, c: &Covering) -> Result<usize> {
    c.validate(a)?;
    Ok(c.cost())
}

/// True iff every 1-entry of `a` is covered exactly once.
pub fn is_partition(a: &BooleanMatrix, c: &Covering) -> Result<bool> {
    let counts = c.coverage(a)?;
    let n = a.cols();
    if let Some((row, col)) = a.ones().find(|&(i, j)| counts[i * n + j] == 0) {
        return Err(Error::Uncovered { row, col });
    }
    Ok(a.ones().all(|(i, j)| counts[i * n + j] == 1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalCovering {
    pub rows: usize,
    pub cols: usize,
    pub weighted: Vec<(Rectangle, BigRational)>,
}

impl FractionalCovering {
    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Coverage total of every 1-entry, row-major.
    pub fn coverage(&self, a: &BooleanMatrix) -> Result<Vec<((usize, usize), BigRational)>> {
        if self.dims() != a.dims() {
            return Err(Error::DimensionMismatch("fractional covering and host differ".into()));
        }
        let n = a.cols();
        let mut totals = vec![BigRational::zero(); a.rows() * n];
        for (r, w) in &self.weighted {
            if w < &BigRational::zero() || w > &BigRational::one() {
                return Err(Error::BadWeight(w.to_string()));
            }
            r.check(a)?;
            for (i, j) in r.entries() {
                totals[i * n + j] += w;
            }
        }
        Ok(a.ones().map(|(i, j)| ((i, j), totals[i * n + j].clone())).collect())
    }

    pub fn to_cov_string(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, self.weighted.len());
        for (r, w) in &self.weighted {
            if w.is_one() {
                s.push_str(&format!("{r}\n"));
            } else {
                s.push_str(&format!("{r} W {}/{}\n", w.numer(), w.denom()));
            }
        }
        s
    }

    /// Parses the ".cov" text format.
    pub fn parse(s: &str) -> Result<Self> {
        let mut lines = s.lines();
        let h = parse_header(lines.next(), 3)?;
        let (m, n, t) = (h[0], h[1], h[2]);
        let mut weighted = Vec::with_capacity(t);
        for k in 0..t {
            let lineno = k + 2;
            let perr = |msg: String| Error::Parse { line: lineno, msg };
            let line = lines.next().ok_or_else(|| perr(format!("expected {t} rectangles")))?;
            let parts: Vec<&str> = line.split(' ').collect();
            if !(parts.len() == 4 || parts.len() == 6) || parts[0] != "R" || parts[2] != "C" {
                return Err(perr(format!("malformed rectangle line {line:?}")));
            }
            let idx = |p: &str, bound: usize| -> Result<Vec<usize>> {
                let v: Vec<usize> = p
                    .split(',')
                    .map(|x| x.parse::<usize>().map_err(|_| perr(format!("bad index {x:?}"))))
                    .collect::<Result<_>>()?;
                if v.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(perr("indices must be strictly increasing".into()));
                }
                if v.iter().any(|&x| x >= bound) {
                    return Err(perr("index out of range".into()));
                }
                Ok(v)
            };
            let rect = Rectangle::new(idx(parts[1], m)?, idx(parts[3], n)?)?;
            let w = if parts.len() == 6 {
                if parts[4] != "W" {
                    return Err(perr(format!("expected W, got {:?}", parts[4])));
                }
                parse_ratio(parts[5]).ok_or_else(|| perr(format!("bad weight {:?}", parts[5])))?
            } else {
                BigRational::one()
            };
            weighted.push((rect, w));
        }
        if lines.any(|l| !l.is_empty()) {
            return Err(Error::Parse {
                line: t + 2,
                msg: "unexpected trailing content".into(),
            });
        }
        Ok(FractionalCovering {
            rows: m,
            cols: n,
            weighted,
        })
    }

    /// Integral view; fails unless every weight is 1.
    pub fn to_integral(&self) -> Result<Covering> {
        if let Some((_, w)) = self.weighted.iter().find(|(_, w)| !w.is_one()) {
            return Err(Error::BadWeight(format!("{w} in an integral covering")));
        }
        Ok(Covering::new(
            self.dims(),
            self.weighted.iter().map(|(r, _)| r.clone()).collect(),
        ))
    }
}

pub(crate) fn parse_ratio(s: &str) -> Option<BigRational> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().ok()?;
    let q: BigInt = q.parse().ok()?;
    if q.is_zero() {
        return None;
    }
    Some(BigRational::new(p, q))
}

/// Weighted cost `Σ w·(|R|+|C|)` of a feasible fractional covering.
pub fn fractional_cost(a: &BooleanMatrix, f: &FractionalCovering) -> Result<BigRational> {
    for ((row, col), total) in f.coverage(a)? {
        if total < BigRational::one() {
            return Err(Error::CoverageDeficit {
                row,
                col,
                total: total.to_string(),
            });
        }
    }
    Ok(f.weighted
        .iter()
        .map(|(r, w)| w * BigRational::from_integer(r.cost().into()))
        .sum())
}

/// All inclusion-maximal 1-rectangles of `a`, sorted by `(rows, cols)`.
pub fn enumerate_maximal_rectangles(a: &BooleanMatrix) -> Result<Vec<Rectangle>> {
    enumerate_maximal_rectangles_with_budget(a, DEFAULT_MAX_RECTS)
}

pub fn enumerate_maximal_rectangles_with_budget(a: &BooleanMatrix, max_rects: usize) -> Result<Vec<Rectangle>> {
    if a.rows() > MAX_ENUM_ROWS {
        return Err(Error::SizeLimit {
            what: format!("{} rows for maximal-rectangle enumeration", a.rows()),
            limit: MAX_ENUM_ROWS,
        });
    }
    if a.ones_count() == 0 {
        return Err(Error::OutOfRange("matrix has no 1-entries".into()));
    }
    // Closed column sets are exactly the nonempty intersections of row supports.
    let mut seen: HashSet<BitSet> = HashSet::new();
    let mut closed: Vec<BitSet> = Vec::new();
    for i in 0..a.rows() {
        let s = a.row(i);
        if s.is_empty() {
            continue;
        }
        let mut fresh = Vec::new();
        if seen.insert(s.clone()) {
            fresh.push(s.clone());
        }
        for t in &closed {
            let mut x = t.clone();
            x.intersect_with(s);
            if !x.is_empty() && seen.insert(x.clone()) {
                fresh.push(x);
            }
        }
        closed.extend(fresh);
        if closed.len() > max_rects {
            return Err(Error::SizeLimit {
                what: "number of maximal rectangles".into(),
                limit: max_rects,
            });
        }
    }
    let mut out: Vec<Rectangle> = closed
        .iter()
        .map(|c| {
            let rows = (0..a.rows()).filter(|&i| c.is_subset(a.row(i)));
            Rectangle::new(rows, c.iter()).expect("closed sets are nonempty")
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Every 1-rectangle of `a` (not only maximal ones), in DFS order over row
/// sets. Errors once more than `max_rects` would be produced.
pub fn enumerate_all_rectangles(a: &BooleanMatrix, max_rects: usize) -> Result<Vec<Rectangle>> {
    let mut out = Vec::new();
    let mut rows = Vec::new();
    fn subsets(support: &[usize], f: &mut dyn FnMut(Vec<usize>) -> bool) -> bool {
        let k = support.len();
        if k >= 63 {
            return false;
        }
        for mask in 1u64..(1 << k) {
            let c = (0..k).filter(|t| mask >> t & 1 == 1).map(|t| support[t]).collect();
            if !f(c) {
                return false;
            }
        }
        true
    }
    fn rec(
        a: &BooleanMatrix,
        start: usize,
        rows: &mut Vec<usize>,
        support: &BitSet,
        out: &mut Vec<Rectangle>,
        max: usize,
    ) -> bool {
        for i in start..a.rows() {
            let mut s = support.clone();
            s.intersect_with(a.row(i));
            if s.is_empty() {
                continue;
            }
            rows.push(i);
            let sv = s.to_vec();
            let ok = subsets(&sv, &mut |c| {
                out.push(Rectangle {
                    rows: rows.clone(),
                    cols: c,
                });
                out.len() <= max
            });
            if !ok || !rec(a, i + 1, rows, &s, out, max) {
                return false;
            }
            rows.pop();
        }
        true
    }
    if !rec(a, 0, &mut rows, &BitSet::full(a.cols()), &mut out, max_rects) {
        return Err(Error::SizeLimit {
            what: "number of rectangles".into(),
            limit: max_rects,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolmat::{all_ones, example_b, kneser_submatrix, subsets_lex, triangular};

    fn rect(r: &[usize], c: &[usize]) -> Rectangle {
        Rectangle::new(r.iter().copied(), c.iter().copied()).unwrap()
    }

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn rectangle_costs() {
        assert_eq!(rectangle_cost(&rect(&[0], &[1])), 2);
        assert_eq!(rectangle_cost(&rect(&[0, 1], &[2, 3, 4])), 5);
        assert_eq!(rect(&[0, 1, 2], &[0, 1, 2, 3, 4]).cost(), 8);
        assert_eq!(Rectangle::new([], [1]), Err(Error::EmptyRectangle));
    }

    #[test]
    fn covering_cost_examples() {
        let t2 = triangular(2).unwrap();
        let c = Covering::new((2, 2), vec![rect(&[0], &[1])]);
        assert_eq!(covering_cost(&t2, &c).unwrap(), 2);

        let j = all_ones(5, 5).unwrap();
        let c = Covering::new((5, 5), vec![rect(&[0, 1, 2, 3, 4], &[0, 1, 2, 3, 4])]);
        assert_eq!(covering_cost(&j, &c).unwrap(), 10);

        let b = example_b();
        let bad = Covering::new(
            (8, 8),
            vec![
                rect(&(0..4).collect::<Vec<_>>(), &(0..8).collect::<Vec<_>>()),
                rect(&(0..8).collect::<Vec<_>>(), &(0..8).collect::<Vec<_>>()),
            ],
        );
        assert_eq!(covering_cost(&b, &bad), Err(Error::NotARectangle { row: 4, col: 0 }));
        let good = Covering::new(
            (8, 8),
            vec![
                rect(&(0..4).collect::<Vec<_>>(), &(0..8).collect::<Vec<_>>()),
                rect(&(0..8).collect::<Vec<_>>(), &(4..8).collect::<Vec<_>>()),
            ],
        );
        assert_eq!(covering_cost(&b, &good).unwrap(), 24);
    }

    #[test]
    fn uncovered_entry_is_first_in_row_major_order() {
        let t = triangular(3).unwrap();
        let c = Covering::new((3, 3), vec![rect(&[0], &[1])]);
        assert_eq!(covering_cost(&t, &c), Err(Error::Uncovered { row: 0, col: 2 }));
    }

    #[test]
    fn fractional_cost_examples() {
        let t3 = triangular(3).unwrap();
        let c = Covering::new((3, 3), vec![rect(&[0], &[1, 2]), rect(&[0, 1], &[2])]);
        assert_eq!(fractional_cost(&t3, &c.as_fractional()).unwrap(), q(6, 1));
        assert_eq!(covering_cost(&t3, &c).unwrap(), 6);

        let t2 = triangular(2).unwrap();
        let f = FractionalCovering {
            rows: 2,
            cols: 2,
            weighted: vec![(rect(&[0], &[1]), q(1, 2))],
        };
        assert_eq!(
            fractional_cost(&t2, &f),
            Err(Error::CoverageDeficit {
                row: 0,
                col: 1,
                total: "1/2".into()
            })
        );
    }

    #[test]
    fn partitions() {
        let i2 = BooleanMatrix::identity(2).unwrap();
        let c = Covering::new((2, 2), vec![rect(&[0], &[0]), rect(&[1], &[1])]);
        assert!(is_partition(&i2, &c).unwrap());
        let dup = Covering::new((2, 2), vec![rect(&[0], &[0]), rect(&[1], &[1]), rect(&[1], &[1])]);
        assert!(!is_partition(&i2, &dup).unwrap());
    }

    #[test]
    fn maximal_rectangles_examples() {
        let t3 = triangular(3).unwrap();
        assert_eq!(
            enumerate_maximal_rectangles(&t3).unwrap(),
            vec![rect(&[0], &[1, 2]), rect(&[0, 1], &[2])]
        );
        assert_eq!(
            enumerate_maximal_rectangles(&all_ones(2, 2).unwrap()).unwrap(),
            vec![rect(&[0, 1], &[0, 1])]
        );
    }

    #[test]
    fn kneser_maximal_rectangles_are_bipartitions() {
        let k = 4;
        let a = kneser_submatrix(k, 1, 1).unwrap();
        let singles = subsets_lex(k, 1);
        let mut expected: Vec<Rectangle> = (1u64..(1 << k) - 1)
            .map(|s| {
                let rows = (0..k).filter(|&i| singles[i] & s != 0);
                let cols = (0..k).filter(|&j| singles[j] & s == 0);
                Rectangle::new(rows, cols).unwrap()
            })
            .collect();
        expected.sort();
        assert_eq!(enumerate_maximal_rectangles(&a).unwrap(), expected);
        assert_eq!(expected.len(), 14);
    }

    #[test]
    fn maximal_enumeration_budget() {
        let a = all_ones(25, 2).unwrap();
        assert!(matches!(enumerate_maximal_rectangles(&a), Err(Error::SizeLimit { .. })));
        let i = BooleanMatrix::identity(10).unwrap();
        assert!(matches!(
            enumerate_maximal_rectangles_with_budget(&i, 5),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn all_rectangles_of_t3() {
        let mut all = enumerate_all_rectangles(&triangular(3).unwrap(), 100).unwrap();
        all.sort();
        assert_eq!(
            all,
            vec![
                rect(&[0], &[1]),
                rect(&[0], &[1, 2]),
                rect(&[0], &[2]),
                rect(&[0, 1], &[2]),
                rect(&[1], &[2])
            ]
        );
        assert!(enumerate_all_rectangles(&all_ones(4, 4).unwrap(), 10).is_err());
    }

    #[test]
    fn cov_format_round_trip() {
        let f = FractionalCovering {
            rows: 3,
            cols: 3,
            weighted: vec![(rect(&[0], &[1, 2]), q(1, 1)), (rect(&[0, 1], &[2]), q(2, 3))],
        };
        let s = f.to_cov_string();
        assert_eq!(s, "3 3 2\nR 0 C 1,2\nR 0,1 C 2 W 2/3\n");
        assert_eq!(FractionalCovering::parse(&s).unwrap(), f);
        assert!(FractionalCovering::parse("3 3 1\nR 1,0 C 2\n").is_err());
        assert!(FractionalCovering::parse("3 3 1\nR 0 C 2 W 1/0\n").is_err());
    }
}
