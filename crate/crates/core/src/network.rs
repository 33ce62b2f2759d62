//! Rectifier networks: DAGs whose input-to-output reachability expresses a
//! Boolean matrix.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::bits::BitSet;
use crate::boolmat::BooleanMatrix;
use crate::covers::{Covering, Rectangle};
use crate::error::{Error, Result};

/// A DAG on nodes `0..node_count` with injective input and output maps.
///
/// `in_map[j]` is the source attached to column `j`, `out_map[i]` the sink
/// attached to row `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RectifierNetwork {
    node_count: usize,
    edges: Vec<(usize, usize)>,
    in_map: Vec<usize>,
    out_map: Vec<usize>,
    topo: Vec<usize>,
}

impl RectifierNetwork {
    pub fn new(node_count: usize, edges: Vec<(usize, usize)>, in_map: Vec<usize>, out_map: Vec<usize>) -> Result<Self> {
        let bad = |msg: String| Err(Error::MalformedNetwork(msg));
        for &(u, v) in &edges {
            if u >= node_count || v >= node_count {
                return bad(format!("edge ({u},{v}) leaves the node range 0..{node_count}"));
            }
            if u == v {
                return Err(Error::Cycle);
            }
        }
        let mut seen = BTreeSet::new();
        if let Some(e) = edges.iter().find(|e| !seen.insert(**e)) {
            return bad(format!("duplicate edge ({},{})", e.0, e.1));
        }
        let mut role = vec![None; node_count];
        for (name, map) in [("input", &in_map), ("output", &out_map)] {
            for (k, &v) in map.iter().enumerate() {
                if v >= node_count {
                    return bad(format!("{name} {k} attached to missing node {v}"));
                }
                if let Some((other, idx)) = role[v] {
                    return bad(format!("node {v} is both {other} {idx} and {name} {k}"));
                }
                role[v] = Some((name, k));
            }
        }
        for &(u, v) in &edges {
            if let Some(("input", j)) = role[v] {
                return bad(format!("input {j} (node {v}) has an incoming edge from {u}"));
            }
            if let Some(("output", i)) = role[u] {
                return bad(format!("output {i} (node {u}) has an outgoing edge to {v}"));
            }
        }
        let topo = topological_order(node_count, &edges).ok_or(Error::Cycle)?;
        Ok(RectifierNetwork {
            node_count,
            edges,
            in_map,
            out_map,
            topo,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn in_map(&self) -> &[usize] {
        &self.in_map
    }

    pub fn out_map(&self) -> &[usize] {
        &self.out_map
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    /// Dimensions `(rows, cols)` of the expressed matrix.
    pub fn dims(&self) -> (usize, usize) {
        (self.out_map.len(), self.in_map.len())
    }

    fn successors(&self) -> Vec<Vec<usize>> {
        let mut s = vec![Vec::new(); self.node_count];
        for &(u, v) in &self.edges {
            s[u].push(v);
        }
        s
    }

    fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut p = vec![Vec::new(); self.node_count];
        for &(u, v) in &self.edges {
            p[v].push(u);
        }
        p
    }

    /// For every node, the set of columns whose source reaches it.
    pub fn column_reach(&self) -> Vec<BitSet> {
        let n = self.in_map.len();
        let mut reach = vec![BitSet::new(n); self.node_count];
        for (j, &v) in self.in_map.iter().enumerate() {
            reach[v].insert(j);
        }
        let succ = self.successors();
        for &u in &self.topo {
            if reach[u].is_empty() {
                continue;
            }
            let r = reach[u].clone();
            for &v in &succ[u] {
                reach[v].union_with(&r);
            }
        }
        reach
    }

    /// The matrix with `M[i][j] = 1` iff a path leads from `in(j)` to `out(i)`.
    pub fn express(&self) -> Result<BooleanMatrix> {
        let (m, n) = self.dims();
        let reach = self.column_reach();
        BooleanMatrix::from_fn(m, n, |i, j| reach[self.out_map[i]].contains(j))
    }

    /// Checks that the network expresses `a`, reporting the first differing entry.
    pub fn check_expresses(&self, a: &BooleanMatrix) -> Result<()> {
        if self.dims() != a.dims() {
            return Err(Error::DimensionMismatch(format!(
                "network is {}x{}, matrix is {}x{}",
                self.dims().0,
                self.dims().1,
                a.rows(),
                a.cols()
            )));
        }
        let e = self.express()?;
        for i in 0..a.rows() {
            if e.row(i) != a.row(i) {
                let col = (0..a.cols())
                    .find(|&j| e.get(i, j) != a.get(i, j))
                    .expect("rows differ");
                return Err(Error::DoesNotExpress { row: i, col });
            }
        }
        Ok(())
    }

    /// Shortest and longest maximal path, in edges. Isolated nodes carry no
    /// path and are ignored.
    pub fn depth_profile(&self) -> Result<(usize, usize)> {
        if self.edges.is_empty() {
            return Err(Error::NoPaths);
        }
        let pred = self.predecessors();
        let succ = self.successors();
        // (shortest, longest) path from any in-degree-0 node
        let mut lo = vec![0usize; self.node_count];
        let mut hi = vec![0usize; self.node_count];
        for &v in &self.topo {
            if !pred[v].is_empty() {
                lo[v] = pred[v].iter().map(|&u| lo[u]).min().unwrap() + 1;
                hi[v] = pred[v].iter().map(|&u| hi[u]).max().unwrap() + 1;
            }
        }
        let ends = (0..self.node_count).filter(|&v| succ[v].is_empty() && !pred[v].is_empty());
        let min = ends.clone().map(|v| lo[v]).min().ok_or(Error::NoPaths)?;
        let max = ends.map(|v| hi[v]).max().ok_or(Error::NoPaths)?;
        Ok((min, max))
    }

    /// Number of distinct paths from `in(j)` to `out(i)` for every pair, as an
    /// `m × n` table.
    pub fn path_counts(&self) -> Vec<Vec<BigUint>> {
        let (m, n) = self.dims();
        let succ = self.successors();
        let mut table = vec![vec![BigUint::zero(); n]; m];
        let mut count = vec![BigUint::zero(); self.node_count];
        for (j, &s) in self.in_map.iter().enumerate() {
            count.iter_mut().for_each(|c| c.set_zero());
            count[s] = BigUint::one();
            for &u in &self.topo {
                if count[u].is_zero() {
                    continue;
                }
                let c = count[u].clone();
                for &v in &succ[u] {
                    count[v] += &c;
                }
            }
            for (i, &t) in self.out_map.iter().enumerate() {
                table[i][j] = count[t].clone();
            }
        }
        table
    }

    /// First input/output pair joined by more than one path, in row-major order.
    pub fn first_ambiguity(&self) -> Option<(usize, usize, BigUint)> {
        let one = BigUint::one();
        self.path_counts().into_iter().enumerate().find_map(|(i, row)| {
            row.into_iter()
                .enumerate()
                .find(|(_, c)| *c > one)
                .map(|(j, c)| (i, j, c))
        })
    }

    pub fn is_unambiguous(&self) -> bool {
        self.first_ambiguity().is_none()
    }

    /// Reverses every edge and swaps the roles of inputs and outputs; the
    /// reversed network expresses the transpose.
    pub fn reversed(&self) -> RectifierNetwork {
        let edges = self.edges.iter().map(|&(u, v)| (v, u)).collect();
        RectifierNetwork::new(self.node_count, edges, self.out_map.clone(), self.in_map.clone())
            .expect("reversal preserves validity")
    }

    fn reachable(&self, starts: impl IntoIterator<Item = usize>, adj: &[Vec<usize>]) -> Vec<bool> {
        let mut seen = vec![false; self.node_count];
        let mut stack: Vec<usize> = starts.into_iter().collect();
        for &s in &stack {
            seen[s] = true;
        }
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// All nodes and edges lying on some path from `in(cols)` to `out(rows)`.
    /// The result keeps the given inputs and outputs, in the given order,
    /// and numbers the kept nodes by increasing original index.
    pub fn restrict(&self, cols: &[usize], rows: &[usize]) -> Result<RectifierNetwork> {
        if let Some(&j) = cols.iter().find(|&&j| j >= self.in_map.len()) {
            return Err(Error::OutOfRange(format!("input {j}")));
        }
        if let Some(&i) = rows.iter().find(|&&i| i >= self.out_map.len()) {
            return Err(Error::OutOfRange(format!("output {i}")));
        }
        let ins: Vec<usize> = cols.iter().map(|&j| self.in_map[j]).collect();
        let outs: Vec<usize> = rows.iter().map(|&i| self.out_map[i]).collect();
        let fwd = self.reachable(ins.iter().copied(), &self.successors());
        let bwd = self.reachable(outs.iter().copied(), &self.predecessors());
        let mut keep: Vec<bool> = fwd.iter().zip(&bwd).map(|(a, b)| *a && *b).collect();
        for &v in ins.iter().chain(&outs) {
            keep[v] = true;
        }
        let mut index = vec![usize::MAX; self.node_count];
        let mut next = 0;
        for v in 0..self.node_count {
            if keep[v] {
                index[v] = next;
                next += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| fwd[u] && bwd[u] && fwd[v] && bwd[v])
            .map(|&(u, v)| (index[u], index[v]))
            .collect();
        RectifierNetwork::new(
            next,
            edges,
            ins.iter().map(|&v| index[v]).collect(),
            outs.iter().map(|&v| index[v]).collect(),
        )
    }

    /// Drops edges that lie on no input-to-output path. Node numbering is kept.
    pub fn pruned(&self) -> RectifierNetwork {
        let fwd = self.reachable(self.in_map.iter().copied(), &self.successors());
        let bwd = self.reachable(self.out_map.iter().copied(), &self.predecessors());
        let edges = self.edges.iter().copied().filter(|&(u, v)| fwd[u] && bwd[v]).collect();
        RectifierNetwork::new(self.node_count, edges, self.in_map.clone(), self.out_map.clone())
            .expect("subgraph of a valid network")
    }

    /// ".rn" text: header, then inputs, outputs and edges one per line.
    pub fn to_rn_string(&self) -> String {
        let mut s = format!(
            "nodes {} edges {} in {} out {}\n",
            self.node_count,
            self.edges.len(),
            self.in_map.len(),
            self.out_map.len()
        );
        for (j, v) in self.in_map.iter().enumerate() {
            s.push_str(&format!("i {j} {v}\n"));
        }
        for (i, v) in self.out_map.iter().enumerate() {
            s.push_str(&format!("o {i} {v}\n"));
        }
        for (u, v) in &self.edges {
            s.push_str(&format!("e {u} {v}\n"));
        }
        s
    }
}

impl fmt::Display for RectifierNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_rn_string())
    }
}

impl FromStr for RectifierNetwork {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines();
        let header = lines.next().unwrap_or("");
        let hp: Vec<&str> = header.split(' ').collect();
        let herr = || Error::Parse {
            line: 1,
            msg: format!("bad header {header:?}"),
        };
        if hp.len() != 8 || hp[0] != "nodes" || hp[2] != "edges" || hp[4] != "in" || hp[6] != "out" {
            return Err(herr());
        }
        let num = |p: &str| p.parse::<usize>().map_err(|_| herr());
        let (c, e, n, m) = (num(hp[1])?, num(hp[3])?, num(hp[5])?, num(hp[7])?);
        let mut in_map = vec![None; n];
        let mut out_map = vec![None; m];
        let mut edges = Vec::with_capacity(e);
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
            let a: usize = parts[1]
                .parse()
                .map_err(|_| perr(format!("bad number {:?}", parts[1])))?;
            let b: usize = parts[2]
                .parse()
                .map_err(|_| perr(format!("bad number {:?}", parts[2])))?;
            let slot = match parts[0] {
                "i" => in_map.get_mut(a),
                "o" => out_map.get_mut(a),
                "e" => {
                    edges.push((a, b));
                    continue;
                }
                other => return Err(perr(format!("unknown record {other:?}"))),
            };
            match slot {
                Some(s @ None) => *s = Some(b),
                Some(Some(_)) => return Err(perr(format!("{} {a} attached twice", parts[0]))),
                None => return Err(perr(format!("{} index {a} out of range", parts[0]))),
            }
        }
        if edges.len() != e {
            return Err(Error::Parse {
                line: 1,
                msg: format!("header announces {e} edges, found {}", edges.len()),
            });
        }
        let complete = |v: Vec<Option<usize>>, what: &str| -> Result<Vec<usize>> {
            v.into_iter()
                .enumerate()
                .map(|(k, x)| {
                    x.ok_or_else(|| Error::Parse {
                        line: 1,
                        msg: format!("{what} {k} is not attached"),
                    })
                })
                .collect()
        };
        RectifierNetwork::new(c, edges, complete(in_map, "input")?, complete(out_map, "output")?)
    }
}

/// Kahn's algorithm, smallest ready node first.
fn topological_order(node_count: usize, edges: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut indeg = vec![0usize; node_count];
    let mut succ = vec![Vec::new(); node_count];
    for &(u, v) in edges {
        indeg[v] += 1;
        succ[u].push(v);
    }
    let mut ready: BTreeSet<usize> = (0..node_count).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(node_count);
    while let Some(u) = ready.pop_first() {
        order.push(u);
        for &v in &succ[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                ready.insert(v);
            }
        }
    }
    (order.len() == node_count).then_some(order)
}

/// Depth-2 network with one middle node per rectangle. Nodes are numbered
/// inputs `0..n`, outputs `n..n+m`, then middles in rectangle order.
pub fn covering_to_depth2(c: &Covering) -> Result<RectifierNetwork> {
    if c.is_empty() {
        return Err(Error::EmptyCovering);
    }
    let (m, n) = c.dims();
    let mut edges = Vec::with_capacity(c.cost());
    for (k, r) in c.rectangles.iter().enumerate() {
        if r.rows().iter().any(|&i| i >= m) || r.cols().iter().any(|&j| j >= n) {
            return Err(Error::OutOfRange(format!("rectangle {r} does not fit {m}x{n}")));
        }
        let mid = n + m + k;
        edges.extend(r.cols().iter().map(|&j| (j, mid)));
        edges.extend(r.rows().iter().map(|&i| (mid, n + i)));
    }
    RectifierNetwork::new(n + m + c.len(), edges, (0..n).collect(), (n..n + m).collect())
}

/// One rectangle per node with both predecessors and successors, read off
/// a network of depth exactly 2. Middles touching no input or no output are
/// skipped.
pub fn depth2_to_covering(net: &RectifierNetwork) -> Result<Covering> {
    let (min, max) = net.depth_profile()?;
    if (min, max) != (2, 2) {
        return Err(Error::WrongDepth { expected: 2, min, max });
    }
    let mut col_of = BTreeMap::new();
    for (j, &v) in net.in_map.iter().enumerate() {
        col_of.insert(v, j);
    }
    let mut row_of = BTreeMap::new();
    for (i, &v) in net.out_map.iter().enumerate() {
        row_of.insert(v, i);
    }
    let pred = net.predecessors();
    let succ = net.successors();
    let mut rects = Vec::new();
    for v in 0..net.node_count {
        if pred[v].is_empty() || succ[v].is_empty() {
            continue;
        }
        let cols: Vec<usize> = pred[v].iter().filter_map(|u| col_of.get(u).copied()).collect();
        let rows: Vec<usize> = succ[v].iter().filter_map(|w| row_of.get(w).copied()).collect();
        if cols.is_empty() || rows.is_empty() {
            continue;
        }
        rects.push(Rectangle::new(rows, cols)?);
    }
    Ok(Covering::new(net.dims(), rects))
}

/// Partition of `T_n` by halving: the top-left triangle, the full block to
/// its right, the bottom-right triangle. Rectangles are emitted in pre-order
/// (block first, then the two halves).
pub fn triangular_partition(n: usize) -> Result<Covering> {
    if n == 0 {
        return Err(Error::EmptyDimension { rows: 0, cols: 0 });
    }
    fn rec(a: usize, b: usize, out: &mut Vec<Rectangle>) {
        let len = b - a;
        if len < 2 {
            return;
        }
        let h = len / 2;
        out.push(Rectangle::new(a..a + h, a + h..b).expect("nonempty halves"));
        rec(a, a + h, out);
        rec(a + h, b, out);
    }
    let mut rects = Vec::new();
    rec(0, n, &mut rects);
    Ok(Covering::new((n, n), rects))
}

/// The depth-3 network of size 19 for `B`. Inputs are nodes `0..8`,
/// outputs `8..16`, and the middles are `16..20`.
pub fn net19() -> RectifierNetwork {
    let mut edges = Vec::new();
    edges.extend((0..4).map(|j| (j, 17)));
    edges.extend((4..8).map(|j| (j, 19)));
    edges.extend([(17, 16), (19, 16), (19, 18)]);
    edges.extend((0..4).map(|i| (16, 8 + i)));
    edges.extend((4..8).map(|i| (18, 8 + i)));
    RectifierNetwork::new(20, edges, (0..8).collect(), (8..16).collect()).expect("valid")
}

/// The depth-2 network of size 20 for `B`, with middles `16` and `17`.
pub fn net20() -> RectifierNetwork {
    let mut edges = Vec::new();
    edges.extend((0..4).map(|j| (j, 16)));
    edges.extend((0..4).map(|i| (16, 8 + i)));
    edges.extend((0..8).map(|i| (17, 8 + i)));
    edges.extend((4..8).map(|j| (j, 17)));
    RectifierNetwork::new(18, edges, (0..8).collect(), (8..16).collect()).expect("valid")
}

/// A network with `4n + 1` edges for `((1 1),(0 1)) ⊗ J_n`: inputs
/// `0..2n`, outputs `2n..4n`, then the two merged middles `x = 4n` and
/// `y = 4n + 1` joined by `y → x`.
pub fn family(n: usize) -> Result<RectifierNetwork> {
    if n == 0 {
        return Err(Error::OutOfRange("family needs n >= 1".into()));
    }
    let (x, y) = (4 * n, 4 * n + 1);
    let mut edges = Vec::with_capacity(4 * n + 1);
    edges.extend((0..n).map(|j| (j, x)));
    edges.extend((n..2 * n).map(|j| (j, y)));
    edges.push((y, x));
    edges.extend((0..n).map(|i| (x, 2 * n + i)));
    edges.extend((n..2 * n).map(|i| (y, 2 * n + i)));
    RectifierNetwork::new(4 * n + 2, edges, (0..2 * n).collect(), (2 * n..4 * n).collect())
}

pub fn example_networks() -> (
    RectifierNetwork,
    RectifierNetwork,
    fn(usize) -> Result<RectifierNetwork>,
) {
    (net19(), net20(), family)
}

/// Rewires `net` so that equal columns of `m` get identical source
/// neighbourhoods and equal rows identical sink neighbourhoods.
///
/// Each class of equal columns adopts the out-neighbourhood of the member
/// `j'` minimizing `(|X_j'|, j')`; rows are treated the same way with
/// in-neighbourhoods of sinks. Edges left on no input-to-output path are
/// dropped after each pass.
pub fn canonicalize(net: &RectifierNetwork, m: &BooleanMatrix) -> Result<RectifierNetwork> {
    net.check_expresses(m)?;
    let cur = net.pruned();
    let cur = unify_sources(&cur, m);
    let cur = unify_sources(&cur.reversed(), &m.transpose()).reversed();
    let mut edges = cur.edges.clone();
    edges.sort();
    let out = RectifierNetwork::new(cur.node_count, edges, cur.in_map, cur.out_map)?;
    debug_assert!(out.check_expresses(m).is_ok());
    Ok(out)
}

fn unify_sources(net: &RectifierNetwork, m: &BooleanMatrix) -> RectifierNetwork {
    let succ = net.successors();
    let cols: Vec<BitSet> = (0..m.cols()).map(|j| m.column(j)).collect();
    let mut classes: BTreeMap<&BitSet, Vec<usize>> = BTreeMap::new();
    for (j, c) in cols.iter().enumerate() {
        classes.entry(c).or_default().push(j);
    }
    let mut target: Vec<Vec<usize>> = (0..m.cols()).map(|j| succ[net.in_map[j]].clone()).collect();
    for members in classes.values() {
        let rep = *members
            .iter()
            .min_by_key(|&&j| (succ[net.in_map[j]].len(), j))
            .expect("classes are nonempty");
        for &j in members {
            target[j] = succ[net.in_map[rep]].clone();
        }
    }
    let is_input: BTreeSet<usize> = net.in_map.iter().copied().collect();
    let mut edges: Vec<(usize, usize)> = net
        .edges
        .iter()
        .copied()
        .filter(|(u, _)| !is_input.contains(u))
        .collect();
    for (j, t) in target.iter().enumerate() {
        let mut t = t.clone();
        t.sort();
        edges.extend(t.into_iter().map(|v| (net.in_map[j], v)));
    }
    RectifierNetwork::new(net.node_count, edges, net.in_map.clone(), net.out_map.clone())
        .expect("rewiring keeps the network valid")
        .pruned()
}

/// A network built from the inclusion order of the distinct nonzero row
/// supports. Each support gets a node that reaches exactly that support:
/// it is fed by the nodes of its maximal proper sub-supports plus the inputs
/// of the columns they miss, and feeds the outputs of its rows.
pub fn inclusion_chain_network(a: &BooleanMatrix) -> Result<RectifierNetwork> {
    let (m, n) = a.dims();
    let mut supports: Vec<BitSet> = (0..m).map(|i| a.row(i).clone()).filter(|s| !s.is_empty()).collect();
    supports.sort_by(|x, y| (x.count(), x).cmp(&(y.count(), y)));
    supports.dedup();
    let node = |k: usize| n + m + k;
    let mut edges = Vec::new();
    for (k, s) in supports.iter().enumerate() {
        let subs: Vec<usize> = (0..k)
            .filter(|&t| supports[t] != *s && supports[t].is_subset(s))
            .collect();
        let children: Vec<usize> = subs
            .iter()
            .copied()
            .filter(|&t| !subs.iter().any(|&u| u != t && supports[t].is_subset(&supports[u])))
            .collect();
        let mut covered = BitSet::new(n);
        for &t in &children {
            covered.union_with(&supports[t]);
            edges.push((node(t), node(k)));
        }
        let mut direct = s.clone();
        direct.difference_with(&covered);
        edges.extend(direct.iter().map(|j| (j, node(k))));
        edges.extend((0..m).filter(|&i| a.row(i) == s).map(|i| (node(k), n + i)));
    }
    RectifierNetwork::new(n + m + supports.len(), edges, (0..n).collect(), (n..n + m).collect())
}
