//! Graphs, the amplified edge-indicator gadget family, canonical hard
//! distributions, cover-based upper-bound trees, cutoff XOR trees, and
//! monotone coresets.
//!
//! A gadget instance is a graph plus a padding parameter `ell`. Inputs have
//! `ell + 1` blocks of `n` coordinates each: block 0 should encode an edge
//! and the remaining blocks must agree with it on its 1-coordinates.

use crate::boolfn::{BitVector, PartialFn};
use crate::dtree::{DecisionTree, Node, Pmf};
use crate::error::{Error, Result};
use num::bigint::RandBigInt;
use num::{BigInt, BigRational, BigUint, Integer, One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use std::collections::{BTreeMap, BTreeSet};

/// An undirected simple graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::Infeasible(format!("self-loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::Infeasible(format!(
                    "edge ({u},{v}) out of range for n={n}"
                )));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Graph { n, edges: set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn is_vertex_cover(&self, cover: &BTreeSet<usize>) -> bool {
        self.edges.iter().all(|&(u, v)| cover.contains(&u) || cover.contains(&v))
    }

    /// 1 iff `x` has exactly two ones and they form an edge.
    pub fn is_edge_indicator(&self, x: &BitVector) -> Result<bool> {
        if x.width() != self.n {
            return Err(Error::WidthMismatch {
                expected: self.n,
                got: x.width(),
            });
        }
        let ones: Vec<usize> = (0..self.n).filter(|&i| x.get(i)).collect();
        Ok(ones.len() == 2 && self.has_edge(ones[0], ones[1]))
    }

    /// The edge-indicator predicate as a partial function on the full cube.
    pub fn edge_indicator_fn(&self) -> Result<PartialFn> {
        let g = self.clone();
        PartialFn::total(self.n, move |x| g.is_edge_indicator(x).expect("width"))
    }

    /// Disjoint union, relabeling `other`'s vertices after `self`'s.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut edges: Vec<(usize, usize)> = self.edges().collect();
        edges.extend(other.edges().map(|(u, v)| (u + self.n, v + self.n)));
        Graph::new(self.n + other.n, edges).expect("relabeled edges are valid")
    }

    /// DIMACS-like format: `p <n> <m>` then `e <u> <v>` lines, 1-based ids.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p {} {}\n", self.n, self.m());
        for (u, v) in self.edges() {
            out.push_str(&format!("e {} {}\n", u + 1, v + 1));
        }
        out
    }

    pub fn from_dimacs(text: &str) -> Result<Graph> {
        let mut n = None;
        let mut edges = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let mut parts = line.split_whitespace();
            match parts.next() {
                Some("p") => {
                    let nv: usize = parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| Error::Parse(format!("bad p line {line:?}")))?;
                    n = Some(nv);
                }
                Some("e") => {
                    let u: usize = parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| Error::Parse(format!("bad e line {line:?}")))?;
                    let v: usize = parts
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| Error::Parse(format!("bad e line {line:?}")))?;
                    if u == 0 || v == 0 {
                        return Err(Error::Parse("vertex ids are 1-based".into()));
                    }
                    edges.push((u - 1, v - 1));
                }
                _ => return Err(Error::Parse(format!("unrecognized line {line:?}"))),
            }
        }
        let n = n.ok_or_else(|| Error::Parse("missing p line".into()))?;
        Graph::new(n, edges)
    }
}

/// Families the generator knows how to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphKind {
    Complete,
    Cycle,
    Path,
    RandomRegular(usize),
}

/// Deterministic seeded graph generation.
pub fn gen_graph(kind: GraphKind, n: usize, seed: u64) -> Result<Graph> {
    match kind {
        GraphKind::Complete => {
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    edges.push((u, v));
                }
            }
            Graph::new(n, edges)
        }
        GraphKind::Cycle => {
            if n < 3 {
                return Err(Error::Infeasible("cycle needs n >= 3".into()));
            }
            Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        GraphKind::Path => {
            if n < 2 {
                return Err(Error::Infeasible("path needs n >= 2".into()));
            }
            Graph::new(n, (0..n - 1).map(|i| (i, i + 1)))
        }
        GraphKind::RandomRegular(d) => {
            if d == 0 || d >= n || (n * d) % 2 != 0 {
                return Err(Error::Infeasible(format!(
                    "no {d}-regular graph on {n} vertices"
                )));
            }
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            'attempt: for _ in 0..10_000 {
                let mut stubs: Vec<usize> =
                    (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
                stubs.shuffle(&mut rng);
                let mut edges = BTreeSet::new();
                for pair in stubs.chunks(2) {
                    let (u, v) = (pair[0], pair[1]);
                    if u == v || !edges.insert((u.min(v), u.max(v))) {
                        continue 'attempt;
                    }
                }
                return Graph::new(n, edges);
            }
            Err(Error::Infeasible(format!(
                "could not realize a {d}-regular graph on {n} vertices"
            )))
        }
    }
}

/// A graph together with the padding parameter of its indicator gadget.
#[derive(Clone, Debug)]
pub struct Gadget {
    pub graph: Graph,
    pub ell: usize,
}

impl Gadget {
    pub fn new(graph: Graph, ell: usize) -> Result<Self> {
        if ell < 1 {
            return Err(Error::Infeasible("padding parameter must be >= 1".into()));
        }
        Ok(Gadget { graph, ell })
    }

    /// Input width: `ell + 1` blocks of `n` coordinates.
    pub fn width(&self) -> usize {
        self.graph.n() * (self.ell + 1)
    }

    /// The generalized indicator of an edge: its indicator repeated in
    /// every block.
    pub fn indicator(&self, edge: (usize, usize)) -> BitVector {
        let n = self.graph.n();
        let mut x = BitVector::zeros(self.width());
        for block in 0..=self.ell {
            x.set(block * n + edge.0, true);
            x.set(block * n + edge.1, true);
        }
        x
    }

    /// 1 iff block 0 encodes an edge and every later block is 1 on each
    /// coordinate where block 0 is 1.
    pub fn eval(&self, x: &BitVector) -> Result<bool> {
        if x.width() != self.width() {
            return Err(Error::WidthMismatch {
                expected: self.width(),
                got: x.width(),
            });
        }
        let n = self.graph.n();
        if !self.graph.is_edge_indicator(&x.slice(0, n))? {
            return Ok(false);
        }
        for i in 0..n {
            if x.get(i) {
                for block in 1..=self.ell {
                    if !x.get(block * n + i) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// The support of the canonical hard distribution as a labeled domain:
    /// every generalized indicator (label 1) together with each of its
    /// `2(ell+1)` flipped-1-coordinate neighbors (label 0). The point count
    /// is exactly `m * (2 * ell + 3)`.
    pub fn hard_support(&self) -> Result<PartialFn> {
        if self.graph.m() == 0 {
            return Err(Error::EmptyGadget);
        }
        let mut points = Vec::new();
        for edge in self.graph.edges() {
            let ind = self.indicator(edge);
            for i in 0..self.width() {
                if ind.get(i) {
                    points.push((ind.flip(i), false));
                }
            }
            points.push((ind, true));
        }
        PartialFn::new(self.width(), points)
    }
}

/// A canonical hard pmf, possibly degenerate.
#[derive(Clone, Debug)]
pub struct CanonicalPmf {
    pub pmf: Pmf,
    /// True when some 1-input had an empty sensitivity set, in which case
    /// that input absorbed its neighbor-branch mass.
    pub degenerate: bool,
}

/// The canonical hard distribution of `f`: pick a 1-input uniformly, then
/// return it with probability 1/2 or one of its sensitive neighbors
/// uniformly with probability 1/2. Exact rational masses.
pub fn canonical_hard_pmf(f: &PartialFn) -> Result<CanonicalPmf> {
    let ones = f.ones();
    canonical_hard_pmf_over(f, &ones)
}

/// Same two-stage experiment, restricted to a chosen set of 1-inputs.
pub fn canonical_hard_pmf_over(f: &PartialFn, chosen: &[BitVector]) -> Result<CanonicalPmf> {
    if f.is_constant() || chosen.is_empty() {
        return Err(Error::ConstantFunction);
    }
    let count = BigInt::from(chosen.len());
    let half_share = BigRational::new(BigInt::one(), 2 * &count);
    let mut masses: BTreeMap<BitVector, BigRational> = BTreeMap::new();
    let mut degenerate = false;
    for x in chosen {
        debug_assert_eq!(f.value(x), Some(true));
        *masses.entry(x.clone()).or_insert_with(BigRational::zero) += &half_share;
        let neighbors = f.sensitivity_set(x)?;
        if neighbors.is_empty() {
            // the neighbor branch is undefined; its mass collapses onto x
            *masses.entry(x.clone()).or_insert_with(BigRational::zero) += &half_share;
            degenerate = true;
        } else {
            let share = &half_share / BigRational::from_integer(BigInt::from(neighbors.len()));
            for y in neighbors {
                *masses.entry(y).or_insert_with(BigRational::zero) += &share;
            }
        }
    }
    let pmf = Pmf::new(masses.into_iter().collect())?;
    Ok(CanonicalPmf { pmf, degenerate })
}

/// The subfunction of `f` on `C` and all sensitive neighbors of `C`.
pub fn hard_subfunction(f: &PartialFn, chosen: &[BitVector]) -> Result<PartialFn> {
    let mut points = Vec::new();
    for x in chosen {
        let label = f.value(x).ok_or(Error::OutOfDomain)?;
        points.push((x.clone(), label));
        for y in f.sensitivity_set(x)? {
            let l = f.value(&y).ok_or(Error::OutOfDomain)?;
            points.push((y, l));
        }
    }
    PartialFn::new(f.width(), points)
}

/// Draws from an exact pmf, deterministically given the seed.
pub struct PmfSampler {
    points: Vec<BitVector>,
    cumulative: Vec<BigUint>,
    total: BigUint,
    rng: ChaCha20Rng,
}

impl PmfSampler {
    pub fn new(pmf: &Pmf, seed: u64) -> Self {
        // scale all masses to integers over the lcm of the denominators
        let mut denom = BigInt::one();
        for (_, mass) in pmf.iter() {
            denom = denom.lcm(mass.denom());
        }
        let mut cumulative = Vec::with_capacity(pmf.len());
        let mut points = Vec::with_capacity(pmf.len());
        let mut acc = BigInt::zero();
        for (x, mass) in pmf.iter() {
            acc += mass.numer() * (&denom / mass.denom());
            cumulative.push(acc.to_biguint().expect("positive"));
            points.push(x.clone());
        }
        PmfSampler {
            points,
            total: denom.to_biguint().expect("positive"),
            cumulative,
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    pub fn next(&mut self) -> BitVector {
        let draw = self.rng.gen_biguint_below(&self.total);
        let idx = self.cumulative.partition_point(|c| *c <= draw);
        self.points[idx].clone()
    }

    /// One draw from the r-fold product: r independent draws concatenated.
    pub fn next_product(&mut self, r: usize) -> BitVector {
        let mut out = BitVector::zeros(0);
        for _ in 0..r {
            let x = self.next();
            out = out.concat(&x);
        }
        out
    }
}

/// Builds the per-block edge-indicator tree used by both the cover-based
/// upper-bound tree and the cutoff tree.
///
/// Layout: a first-one search over the cover vertices in block 0; on a hit,
/// verify that vertex's copies, first-one search the candidate second
/// endpoints, verify the hit endpoint's copies, then scan the remaining
/// block-0 coordinates for strays. Leaves are produced through `done` so a
/// caller can keep stacking blocks.
fn edge_indicator_tree(
    graph: &Graph,
    cover: &[usize],
    ell: usize,
    offset: usize,
    done: &mut dyn FnMut(bool) -> Node,
) -> Node {
    let n = graph.n();
    let coord = |block: usize, v: usize| offset + block * n + v;

    // candidate second endpoints per cover vertex, excluding endpoints
    // already ruled out by earlier spine zeros
    let mut assigned: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(cover.len());
    for (pos, &u) in cover.iter().enumerate() {
        let earlier: BTreeSet<usize> = cover[..pos].iter().copied().collect();
        let mut ws: Vec<usize> = graph
            .edges()
            .filter(|&(a, b)| a == u || b == u)
            .map(|(a, b)| if a == u { b } else { a })
            .filter(|w| !earlier.contains(w))
            .collect();
        ws.sort_unstable();
        for &w in &ws {
            assigned.insert((u.min(w), u.max(w)));
        }
        candidates.push(ws);
    }
    debug_assert_eq!(assigned.len(), graph.m(), "cover candidates partition E");

    // innermost piece: verify every remaining block-0 coordinate is 0
    fn zero_scan(
        n: usize,
        coord: &dyn Fn(usize, usize) -> usize,
        skip: &BTreeSet<usize>,
        done: &mut dyn FnMut(bool) -> Node,
    ) -> Node {
        let mut node = done(true);
        for v in (0..n).rev() {
            if skip.contains(&v) {
                continue;
            }
            node = Node::Query {
                index: coord(0, v),
                lo: Box::new(node),
                hi: Box::new(done(false)),
            };
        }
        node
    }

    // copies chain: block coordinates of `v` in blocks 1..=ell must be 1
    fn copies_chain(
        ell: usize,
        v: usize,
        coord: &dyn Fn(usize, usize) -> usize,
        inner: Node,
        done: &mut dyn FnMut(bool) -> Node,
    ) -> Node {
        let mut node = inner;
        for block in (1..=ell).rev() {
            node = Node::Query {
                index: coord(block, v),
                lo: Box::new(done(false)),
                hi: Box::new(node),
            };
        }
        node
    }

    let coord_fn = |block: usize, v: usize| coord(block, v);

    // build from the innermost spine position outward
    let mut node = done(false); // all cover coordinates were 0
    for pos in (0..cover.len()).rev() {
        let u = cover[pos];
        let hit_branch = if candidates[pos].is_empty() {
            done(false)
        } else {
            // candidate search for the second endpoint
            let mut cand_node = done(false); // no candidate lit up
            for (ci, &w) in candidates[pos].iter().enumerate().rev() {
                let skip: BTreeSet<usize> = cover[..=pos]
                    .iter()
                    .copied()
                    .chain(candidates[pos][..ci].iter().copied())
                    .chain(std::iter::once(w))
                    .collect();
                let accept = zero_scan(n, &coord_fn, &skip, done);
                let verified = copies_chain(ell, w, &coord_fn, accept, done);
                cand_node = Node::Query {
                    index: coord(0, w),
                    lo: Box::new(cand_node),
                    hi: Box::new(verified),
                };
            }
            copies_chain(ell, u, &coord_fn, cand_node, done)
        };
        node = Node::Query {
            index: coord(0, u),
            lo: Box::new(node),
            hi: Box::new(hit_branch),
        };
    }
    node
}

/// A decision tree computing the gadget exactly on the full cube, built
/// from a vertex cover. Size is at most `(ell+1)(k+m) + mn`.
pub fn vc_upper_tree(gadget: &Gadget, cover: &BTreeSet<usize>) -> Result<DecisionTree> {
    if !gadget.graph.is_vertex_cover(cover) {
        return Err(Error::NotACover);
    }
    let cover_sorted: Vec<usize> = cover.iter().copied().collect();
    let mut done = |label: bool| Node::Leaf(label);
    let root = edge_indicator_tree(&gadget.graph, &cover_sorted, gadget.ell, 0, &mut done);
    Ok(DecisionTree::new(root))
}

/// The size budget the cover-based tree must stay within.
pub fn vc_upper_tree_bound(gadget: &Gadget, cover_size: usize) -> usize {
    let (n, m) = (gadget.graph.n(), gadget.graph.m());
    (gadget.ell + 1) * (cover_size + m) + m * n
}

/// Checks a tree computes the gadget on the entire cube. Enumerates when
/// the width is at most 22, otherwise analyzes each leaf's subcube for
/// constancy of the gadget predicate.
pub fn verify_gadget_tree_exact(tree: &DecisionTree, gadget: &Gadget) -> Result<bool> {
    let width = gadget.width();
    tree.validate(width)?;
    if width <= 22 {
        for value in 0u64..(1u64 << width) {
            let x = BitVector::from_u64(width, value);
            if tree.evaluate(&x) != gadget.eval(&x)? {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    let n = gadget.graph.n();
    for (path, label) in tree.leaves_with_paths() {
        let mut possible_one = false;
        let mut forced_one = false;
        for edge in gadget.graph.edges() {
            let ind = gadget.indicator(edge);
            // compatible: block-0 fixings match the indicator, and no
            // endpoint copy is fixed to 0
            let block0_ok = (0..n).all(|v| path.get(v).map_or(true, |b| b == ind.get(v)));
            if !block0_ok {
                continue;
            }
            let copies_ok = (1..=gadget.ell).all(|block| {
                [edge.0, edge.1]
                    .iter()
                    .all(|&v| path.get(block * n + v) != Some(false))
            });
            if !copies_ok {
                continue;
            }
            possible_one = true;
            let block0_fixed = (0..n).all(|v| path.get(v) == Some(ind.get(v)));
            let copies_fixed = (1..=gadget.ell).all(|block| {
                [edge.0, edge.1].iter().all(|&v| path.get(block * n + v) == Some(true))
            });
            if block0_fixed && copies_fixed {
                forced_one = true;
            }
        }
        let ok = if label { forced_one } else { !possible_one };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The give-up tree for the XOR of `r` edge-indicator blocks.
///
/// Blocks are processed in order with the cover-based single-block tree.
/// When a block evaluates to 1 after `tau` earlier 1-blocks the tree halts
/// with label 1; otherwise the final leaf carries the XOR of the block
/// values. With `tau = r` the tree is exact.
pub fn cutoff_xor_tree(
    graph: &Graph,
    r: usize,
    tau: usize,
    cover: &BTreeSet<usize>,
) -> Result<DecisionTree> {
    if tau > r {
        return Err(Error::InvalidCutoff { tau, r });
    }
    if !graph.is_vertex_cover(cover) {
        return Err(Error::NotACover);
    }
    assert!(r >= 1);
    let cover_sorted: Vec<usize> = cover.iter().copied().collect();
    let n = graph.n();
    fn build(
        graph: &Graph,
        cover: &[usize],
        n: usize,
        r: usize,
        tau: usize,
        block: usize,
        ones_seen: usize,
        parity: bool,
    ) -> Node {
        if block == r {
            return Node::Leaf(parity);
        }
        let mut done = |value: bool| -> Node {
            if value && ones_seen >= tau {
                Node::Leaf(true) // give up
            } else {
                build(
                    graph,
                    cover,
                    n,
                    r,
                    tau,
                    block + 1,
                    ones_seen + usize::from(value),
                    parity ^ value,
                )
            }
        };
        edge_indicator_tree(graph, cover, 0, block * n, &mut done)
    }
    Ok(DecisionTree::new(build(
        graph,
        &cover_sorted,
        n,
        r,
        tau,
        0,
        0,
        false,
    )))
}

/// Exact upper bound on the cutoff tree's error under the r-fold canonical
/// pmf: the probability that more than `tau` blocks draw an edge indicator,
/// i.e. the binomial(r, 1/2) tail beyond `tau`.
pub fn cutoff_error_budget(r: usize, tau: usize) -> BigRational {
    let mut sum = BigInt::zero();
    for j in (tau + 1)..=r {
        sum += binomial(r, j);
    }
    BigRational::new(sum, BigInt::one() << r)
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// The coreset of a monotone function: its minterms together with all of
/// their sensitive neighbors, labels inherited. Empty for constant-0.
pub fn coreset(f: &PartialFn) -> Result<PartialFn> {
    let minterms = f.minterms()?;
    let mut points = Vec::new();
    for x in &minterms {
        points.push((x.clone(), true));
        for y in f.sensitivity_set(x)? {
            points.push((y.clone(), f.value(&y).expect("neighbor in domain")));
        }
    }
    PartialFn::new(f.width(), points)
}
