//! Finite languages of two-letter words and their sum-of-products regular
//! expressions.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::boolmat::{parse_header, BooleanMatrix};
use crate::covers::{Covering, Rectangle};
use crate::error::{Error, Result};
use crate::exact::{exact_or2_with_budget, DEFAULT_BB_BUDGET};
use crate::network::{covering_to_depth2, inclusion_chain_network};

/// Words `a_i·a_j` with `i` from the first alphabet (size `m`) and `j` from
/// the second (size `n`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoLetterLanguage {
    m: usize,
    n: usize,
    words: BTreeSet<(usize, usize)>,
}

impl TwoLetterLanguage {
    pub fn new(m: usize, n: usize, words: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let words: BTreeSet<(usize, usize)> = words.into_iter().collect();
        if words.is_empty() {
            return Err(Error::OutOfRange("language has no words".into()));
        }
        if let Some(&(i, j)) = words.iter().find(|&&(i, j)| i >= m || j >= n) {
            return Err(Error::OutOfRange(format!("word a{i} a{j} outside {m}x{n} alphabets")));
        }
        Ok(TwoLetterLanguage { m, n, words })
    }

    /// `L_n = { a_i a_j : 0 ≤ i < j < n }`.
    pub fn triangular(n: usize) -> Result<Self> {
        Self::new(n, n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
    }

    pub fn from_matrix(a: &BooleanMatrix) -> Result<Self> {
        Self::new(a.rows(), a.cols(), a.ones())
    }

    pub fn words(&self) -> &BTreeSet<(usize, usize)> {
        &self.words
    }

    pub fn alphabet_sizes(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    /// ".l2" text: header `m n`, then one `i j` line per word.
    pub fn to_l2_string(&self) -> String {
        let mut s = format!("{} {}\n", self.m, self.n);
        for (i, j) in &self.words {
            s.push_str(&format!("{i} {j}\n"));
        }
        s
    }
}

impl FromStr for TwoLetterLanguage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines();
        let h = parse_header(lines.next(), 2)?;
        let mut words = Vec::new();
        for (k, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let perr = || Error::Parse {
                line: k + 2,
                msg: format!("malformed word {line:?}"),
            };
            let (i, j) = line.split_once(' ').ok_or_else(perr)?;
            words.push((i.parse().map_err(|_| perr())?, j.parse().map_err(|_| perr())?));
        }
        Self::new(h[0], h[1], words)
    }
}

/// Rows are first letters, columns second letters.
pub fn characteristic_matrix(l: &TwoLetterLanguage) -> BooleanMatrix {
    BooleanMatrix::from_fn(l.m, l.n, |i, j| l.words.contains(&(i, j))).expect("alphabets are nonempty")
}

/// `R_1·C_1 + … + R_t·C_t` where each `R_k`, `C_k` is a sum of letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regex2 {
    pub terms: Vec<(Vec<usize>, Vec<usize>)>,
}

impl Regex2 {
    /// Terms ordered by (smallest first letter, smallest second letter).
    fn from_rectangles(rects: &[Rectangle]) -> Regex2 {
        let mut terms: Vec<(Vec<usize>, Vec<usize>)> =
            rects.iter().map(|r| (r.rows().to_vec(), r.cols().to_vec())).collect();
        terms.sort_by(|a, b| (a.0[0], a.1[0], &a.0, &a.1).cmp(&(b.0[0], b.1[0], &b.0, &b.1)));
        Regex2 { terms }
    }

    /// Number of letter occurrences.
    pub fn alphabetic_length(&self) -> usize {
        self.terms.iter().map(|(r, c)| r.len() + c.len()).sum()
    }

    pub fn words(&self) -> BTreeSet<(usize, usize)> {
        self.terms
            .iter()
            .flat_map(|(r, c)| r.iter().flat_map(move |&i| c.iter().map(move |&j| (i, j))))
            .collect()
    }

    pub fn denotes(&self, l: &TwoLetterLanguage) -> bool {
        self.words() == l.words
    }
}

fn factor(letters: &[usize]) -> String {
    let joined: Vec<String> = letters.iter().map(|t| format!("a{t}")).collect();
    if letters.len() == 1 {
        joined[0].clone()
    } else {
        format!("({})", joined.join("+"))
    }
}

impl fmt::Display for Regex2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(r, c)| {
                let sep = if r.len() == 1 && c.len() == 1 { " " } else { "" };
                format!("{}{sep}{}", factor(r), factor(c))
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// One product term per rectangle of a valid covering of `M^L`.
pub fn covering_to_regex(l: &TwoLetterLanguage, c: &Covering) -> Result<Regex2> {
    c.validate(&characteristic_matrix(l))?;
    Ok(Regex2::from_rectangles(&c.rectangles))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegexLength {
    pub length: usize,
    pub regex: Regex2,
    /// False when the search budget ran out and `length` is only an upper bound.
    pub exact: bool,
}

pub fn optimal_regex_length(l: &TwoLetterLanguage) -> Result<RegexLength> {
    optimal_regex_length_with_budget(l, DEFAULT_BB_BUDGET)
}

/// The shortest sum-of-products expression, found by the exact covering
/// search; flagged inexact when the budget runs out.
pub fn optimal_regex_length_with_budget(l: &TwoLetterLanguage, budget: u64) -> Result<RegexLength> {
    let r = exact_or2_with_budget(&characteristic_matrix(l), budget)?;
    Ok(RegexLength {
        length: r.value,
        regex: covering_to_regex(l, &r.covering)?,
        exact: r.optimal,
    })
}

/// `L_{A,B} = L_{A,C} ∪ L_{C+1,B} ∪ (a_A+…+a_C)(a_{C+1}+…+a_B)` with
/// `C = ⌊(A+B)/2⌋`, unrolled from `L_{0,n−1}`.
pub fn divide_and_conquer_regex(n: usize) -> Result<Regex2> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("need n >= 2, got {n}")));
    }
    fn rec(a: usize, b: usize, out: &mut Vec<Rectangle>) {
        if a >= b {
            return;
        }
        let c = (a + b) / 2;
        out.push(Rectangle::new(a..=c, c + 1..=b).expect("nonempty sides"));
        rec(a, c, out);
        rec(c + 1, b, out);
    }
    let mut rects = Vec::new();
    rec(0, n - 1, &mut rects);
    Ok(Regex2::from_rectangles(&rects))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NfaSizes {
    /// Smallest ε-free automaton; equals the shortest expression length.
    pub eps_free_size: usize,
    pub eps_free_exact: bool,
    /// Best network size found plus `m + n`; always an upper bound.
    pub eps_upper: usize,
}

pub fn nfa_sizes(l: &TwoLetterLanguage) -> Result<NfaSizes> {
    nfa_sizes_with_budget(l, DEFAULT_BB_BUDGET)
}

/// The ε-NFA bound uses the smallest of the depth-2 network of the best
/// covering and the inclusion-chain networks of `M^L` and its transpose.
pub fn nfa_sizes_with_budget(l: &TwoLetterLanguage, budget: u64) -> Result<NfaSizes> {
    let a = characteristic_matrix(l);
    let r = exact_or2_with_budget(&a, budget)?;
    let depth2 = covering_to_depth2(&r.covering)?.size();
    let chain = inclusion_chain_network(&a)?.size();
    let chain_t = inclusion_chain_network(&a.transpose())?.size();
    Ok(NfaSizes {
        eps_free_size: r.value,
        eps_free_exact: r.optimal,
        eps_upper: depth2.min(chain).min(chain_t) + l.m + l.n,
    })
}
