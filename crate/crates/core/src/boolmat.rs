//! Dense Boolean matrices and the matrix families used throughout the crate.
//!
//! Rows and columns are 0-based. Subset-indexed families (disjointness and
//! Kneser blocks) use the ground set `{1, ..., k}`, where member `t` maps to
//! bit `t - 1` of the row or column integer.

use std::fmt;
use std::str::FromStr;

use crate::bits::BitSet;
use crate::error::{Error, Result};

/// Largest supported column count.
pub const MAX_COLS: usize = 1 << 20;
/// Largest supported number of cells (bits) in one matrix.
pub const MAX_CELLS: usize = 1 << 32;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BooleanMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitSet>,
}

fn check_dims(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyDimension { rows, cols });
    }
    if cols > MAX_COLS {
        return Err(Error::SizeLimit {
            what: format!("column count {cols}"),
            limit: MAX_COLS,
        });
    }
    if rows.checked_mul(cols).is_none_or(|c| c > MAX_CELLS) {
        return Err(Error::SizeLimit {
            what: format!("{rows}x{cols} matrix"),
            limit: MAX_CELLS,
        });
    }
    Ok(())
}

impl BooleanMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        check_dims(rows, cols)?;
        Ok(BooleanMatrix {
            rows,
            cols,
            data: vec![BitSet::new(cols); rows],
        })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut m = Self::zeros(rows, cols)?;
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.data[i].insert(j);
                }
            }
        }
        Ok(m)
    }

    /// Builds a matrix from nested 0/1 rows. Panics on ragged input; meant for literals.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| rows[i][j] != 0)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, n, |i, j| i == j)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].contains(j)
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        if v {
            self.data[i].insert(j)
        } else {
            self.data[i].remove(j)
        }
    }

    /// Support of row `i` as a column bitset.
    pub fn row(&self, i: usize) -> &BitSet {
        &self.data[i]
    }

    pub fn column(&self, j: usize) -> BitSet {
        BitSet::from_indices(self.rows, (0..self.rows).filter(|&i| self.get(i, j)))
    }

    /// Number of 1-entries.
    pub fn ones_count(&self) -> usize {
        self.data.iter().map(BitSet::count).sum()
    }

    /// 1-entries in row-major order.
    pub fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |j| (i, j)))
    }

    pub fn transpose(&self) -> BooleanMatrix {
        let mut t = BooleanMatrix::zeros(self.cols, self.rows).expect("transpose of a valid matrix");
        for (i, j) in self.ones() {
            t.data[j].insert(i);
        }
        t
    }

    /// Matrix with rows and columns reordered: entry (i,j) of the result is
    /// entry (row_perm[i], col_perm[j]) of `self`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> BooleanMatrix {
        BooleanMatrix::from_fn(self.rows, self.cols, |i, j| self.get(row_perm[i], col_perm[j]))
            .expect("same dimensions")
    }

    pub fn to_bm_string(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for BooleanMatrix {
    /// Text format: header "m n", then one line of n characters per row.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BooleanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn parse_header(line: Option<&str>, fields: usize) -> Result<Vec<usize>> {
    let line = line.ok_or(Error::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let parts: Vec<&str> = line.split(' ').collect();
    if parts.len() != fields {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected {fields} header fields, got {:?}", line),
        });
    }
    parts
        .iter()
        .map(|p| {
            p.parse::<usize>().map_err(|_| Error::Parse {
                line: 1,
                msg: format!("bad number {p:?}"),
            })
        })
        .collect()
}

impl FromStr for BooleanMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines();
        let h = parse_header(lines.next(), 2)?;
        let (m, n) = (h[0], h[1]);
        let mut mat = BooleanMatrix::zeros(m, n)?;
        for i in 0..m {
            let lineno = i + 2;
            let line = lines.next().ok_or(Error::Parse {
                line: lineno,
                msg: format!("expected {m} rows"),
            })?;
            if line.len() != n {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("row has {} characters, expected {n}", line.len()),
                });
            }
            for (j, c) in line.bytes().enumerate() {
                match c {
                    b'0' => {}
                    b'1' => mat.set(i, j, true),
                    _ => {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: format!("invalid character {:?}", c as char),
                        })
                    }
                }
            }
        }
        if let Some((k, extra)) = lines.enumerate().find(|(_, l)| !l.is_empty()) {
            return Err(Error::Parse {
                line: m + 2 + k,
                msg: format!("unexpected trailing line {extra:?}"),
            });
        }
        Ok(mat)
    }
}

/// Strictly upper triangular all-1 matrix `T_n`.
pub fn triangular(n: usize) -> Result<BooleanMatrix> {
    BooleanMatrix::from_fn(n, n, |i, j| i < j)
}

pub fn all_ones(m: usize, n: usize) -> Result<BooleanMatrix> {
    BooleanMatrix::from_fn(m, n, |_, _| true)
}

/// Kneser-Sierpinski matrix `D_{2^k}`: entry (i,j) is 1 iff `i & j == 0`.
pub fn disjointness(k: usize) -> Result<BooleanMatrix> {
    if k > 20 {
        return Err(Error::SizeLimit {
            what: format!("disjointness order k={k}"),
            limit: 20,
        });
    }
    let n = 1usize << k;
    BooleanMatrix::from_fn(n, n, |i, j| i & j == 0)
}

/// A subset of `{1, ..., k}` with strictly increasing members.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetIndex {
    pub k: usize,
    pub members: Vec<usize>,
}

impl SubsetIndex {
    pub fn new(k: usize, members: Vec<usize>) -> Result<Self> {
        if members.windows(2).any(|w| w[0] >= w[1]) || members.iter().any(|&t| t == 0 || t > k) {
            return Err(Error::OutOfRange(format!(
                "{members:?} is not a sorted subset of 1..={k}"
            )));
        }
        Ok(SubsetIndex { k, members })
    }

    pub fn from_mask(k: usize, mask: u64) -> Self {
        SubsetIndex {
            k,
            members: (1..=k).filter(|t| mask >> (t - 1) & 1 == 1).collect(),
        }
    }

    /// Bit `t - 1` is set for each member `t`.
    pub fn mask(&self) -> u64 {
        self.members.iter().fold(0, |m, &t| m | 1 << (t - 1))
    }

    /// Complement within `{1, ..., k}`.
    pub fn complement(&self) -> SubsetIndex {
        let full = if self.k == 64 { !0 } else { (1u64 << self.k) - 1 };
        SubsetIndex::from_mask(self.k, full & !self.mask())
    }
}

/// All `x`-subsets of `{1, ..., k}` as masks, in lexicographic order of
/// their sorted member lists.
pub fn subsets_lex(k: usize, x: usize) -> Vec<u64> {
    assert!(k <= 63, "ground set too large");
    let mut out = Vec::new();
    if x > k {
        return out;
    }
    let mut idx: Vec<usize> = (0..x).collect();
    loop {
        out.push(idx.iter().fold(0u64, |m, &t| m | 1 << t));
        // advance to the next combination
        let mut p = x;
        while p > 0 && idx[p - 1] == k - x + p - 1 {
            p -= 1;
        }
        if p == 0 {
            break;
        }
        idx[p - 1] += 1;
        for q in p..x {
            idx[q] = idx[q - 1] + 1;
        }
    }
    out
}

/// The block `D^{x,y}_{[k]}`: rows are x-subsets, columns y-subsets, both in
/// lexicographic order; entry 1 iff the subsets are disjoint.
pub fn kneser_submatrix(k: usize, x: usize, y: usize) -> Result<BooleanMatrix> {
    if x > k || y > k {
        return Err(Error::OutOfRange(format!("subset sizes ({x},{y}) exceed k={k}")));
    }
    if k > 30 {
        return Err(Error::SizeLimit {
            what: format!("ground set size {k}"),
            limit: 30,
        });
    }
    let rows = subsets_lex(k, x);
    let cols = subsets_lex(k, y);
    BooleanMatrix::from_fn(rows.len(), cols.len(), |i, j| rows[i] & cols[j] == 0)
}

/// Kronecker product; row (i1,i2) maps to `i1*m2 + i2`, column (j1,j2) to `j1*n2 + j2`.
pub fn kronecker(k: &BooleanMatrix, m: &BooleanMatrix) -> Result<BooleanMatrix> {
    let rows = k.rows.checked_mul(m.rows);
    let cols = k.cols.checked_mul(m.cols);
    let (rows, cols) = match (rows, cols) {
        (Some(r), Some(c)) => (r, c),
        _ => {
            return Err(Error::SizeLimit {
                what: "Kronecker product".into(),
                limit: MAX_CELLS,
            })
        }
    };
    let mut out = BooleanMatrix::zeros(rows, cols)?;
    for (i1, j1) in k.ones() {
        for (i2, j2) in m.ones() {
            out.set(i1 * m.rows + i2, j1 * m.cols + j2, true);
        }
    }
    Ok(out)
}

/// The matrix `B` of the worked example: `((1 1),(0 1)) ⊗ J_4`.
pub fn example_b() -> BooleanMatrix {
    let upper = BooleanMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
    kronecker(&upper, &all_ones(4, 4).unwrap()).unwrap()
}
