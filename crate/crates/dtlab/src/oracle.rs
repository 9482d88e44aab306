//! Brute-force ground truth: optimal decision tree size for partial
//! functions, the full size/error Pareto frontier under a pmf, and exact
//! minimum vertex cover.
//!
//! These solvers are the reference every inequality check is audited
//! against, so they favor transparent exactness over speed. All of them
//! are capped; blowing a cap is a hard error.

use crate::boolfn::{BitVector, PartialFn};
use crate::dtree::{DecisionTree, Node, Pmf};
use crate::error::{Error, Result};
use crate::gadget::Graph;
use crate::Caps;
use num::{BigInt, BigRational, Integer, ToPrimitive, Zero};
use serde_json::{json, Value};
use std::collections::{BTreeSet, HashMap};

/// The nondominated (size, error) frontier of a function under a pmf.
/// Sizes strictly increase, errors strictly decrease, and the last point
/// has error zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParetoCurve {
    points: Vec<(usize, BigRational)>,
}

impl ParetoCurve {
    fn new(points: Vec<(usize, BigRational)>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 > w[1].1));
        debug_assert!(points.last().map_or(false, |p| p.1.is_zero()));
        ParetoCurve { points }
    }

    pub fn points(&self) -> &[(usize, BigRational)] {
        &self.points
    }

    /// Smallest size achieving error at most `eps`.
    pub fn min_size_for_error(&self, eps: &BigRational) -> Option<usize> {
        self.points
            .iter()
            .find(|(_, err)| err <= eps)
            .map(|&(size, _)| size)
    }

    /// The zero-error endpoint: the optimal exact size on the support.
    pub fn zero_error_size(&self) -> usize {
        self.points.last().expect("curve is nonempty").0
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.points
                .iter()
                .map(|(size, err)| json!({ "size": size, "error": crate::rat::format_rat(err) }))
                .collect(),
        )
    }
}

type StateKey = Box<[u32]>;

fn state_key(ids: &[u32]) -> StateKey {
    ids.to_vec().into_boxed_slice()
}

/// The true minimum leaf count of a tree agreeing with `f` on its whole
/// domain, plus one witness tree.
///
/// Recursion: a constant (or empty) domain needs one leaf; otherwise the
/// minimum over splitting coordinates of the two subproblem sizes. A
/// non-splitting coordinate leaves one child empty and cannot reduce the
/// leaf count, so it is never queried. Memoized on the alive point set.
pub fn exact_dtsize(f: &PartialFn, caps: &Caps) -> Result<(usize, DecisionTree)> {
    if f.len() > caps.domain_points {
        return Err(Error::SizeCap {
            what: "exact dtsize domain points",
            needed: f.len(),
            cap: caps.domain_points,
        });
    }
    if f.width() > caps.width {
        return Err(Error::SizeCap {
            what: "exact dtsize width",
            needed: f.width(),
            cap: caps.width,
        });
    }
    let points: Vec<(BitVector, bool)> = f.iter().map(|(x, l)| (x.clone(), l)).collect();
    let mut solver = DtSizeSolver {
        points,
        width: f.width(),
        memo: HashMap::new(),
    };
    let ids: Vec<u32> = (0..solver.points.len() as u32).collect();
    let size = solver.solve(&ids);
    let tree = solver.witness(&ids);
    debug_assert_eq!(tree.size(), size);
    Ok((size, tree))
}

struct DtSizeSolver {
    points: Vec<(BitVector, bool)>,
    width: usize,
    // value and the smallest optimal split coordinate (None for leaves)
    memo: HashMap<StateKey, (usize, Option<usize>)>,
}

impl DtSizeSolver {
    fn constant_of(&self, ids: &[u32]) -> Option<bool> {
        let mut labels = ids.iter().map(|&i| self.points[i as usize].1);
        match labels.next() {
            None => Some(false),
            Some(first) => {
                if labels.all(|l| l == first) {
                    Some(first)
                } else {
                    None
                }
            }
        }
    }

    fn split(&self, ids: &[u32], coord: usize) -> (Vec<u32>, Vec<u32>) {
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for &i in ids {
            if self.points[i as usize].0.get(coord) {
                hi.push(i);
            } else {
                lo.push(i);
            }
        }
        (lo, hi)
    }

    fn splitting_coords(&self, ids: &[u32]) -> Vec<usize> {
        (0..self.width)
            .filter(|&c| {
                let mut saw0 = false;
                let mut saw1 = false;
                for &i in ids {
                    if self.points[i as usize].0.get(c) {
                        saw1 = true;
                    } else {
                        saw0 = true;
                    }
                    if saw0 && saw1 {
                        return true;
                    }
                }
                false
            })
            .collect()
    }

    fn solve(&mut self, ids: &[u32]) -> usize {
        if self.constant_of(ids).is_some() {
            return 1;
        }
        let key = state_key(ids);
        if let Some(&(size, _)) = self.memo.get(&key) {
            return size;
        }
        let mut best = usize::MAX;
        let mut best_coord = None;
        for coord in self.splitting_coords(ids) {
            let (lo, hi) = self.split(ids, coord);
            let total = self.solve(&lo) + self.solve(&hi);
            if total < best {
                best = total;
                best_coord = Some(coord);
            }
        }
        self.memo.insert(key, (best, best_coord));
        best
    }

    fn witness(&mut self, ids: &[u32]) -> DecisionTree {
        fn build(solver: &mut DtSizeSolver, ids: &[u32]) -> Node {
            if let Some(value) = solver.constant_of(ids) {
                return Node::Leaf(value);
            }
            let key = state_key(ids);
            let (_, coord) = *solver.memo.get(&key).expect("solved before witness");
            let coord = coord.expect("nonconstant state has a split");
            let (lo, hi) = solver.split(ids, coord);
            Node::Query {
                index: coord,
                lo: Box::new(build(solver, &lo)),
                hi: Box::new(build(solver, &hi)),
            }
        }
        self.solve(ids);
        DecisionTree::new(build(self, ids))
    }
}

/// Exact size/error Pareto solver for a function restricted to the
/// support of a pmf. Masses are rescaled to integer weights over their
/// common denominator, so frontier arithmetic is pure integer work.
pub struct ParetoSolver {
    points: Vec<(BitVector, bool, u128)>,
    width: usize,
    denom: BigInt,
    frontier_cap: usize,
    memo: HashMap<StateKey, Vec<(usize, u128)>>,
}

impl ParetoSolver {
    pub fn new(f: &PartialFn, pmf: &Pmf, caps: &Caps) -> Result<Self> {
        if pmf.len() > caps.domain_points {
            return Err(Error::SizeCap {
                what: "pareto support points",
                needed: pmf.len(),
                cap: caps.domain_points,
            });
        }
        if f.width() > caps.width {
            return Err(Error::SizeCap {
                what: "pareto width",
                needed: f.width(),
                cap: caps.width,
            });
        }
        let mut denom = BigInt::from(1);
        for (_, mass) in pmf.iter() {
            denom = denom.lcm(mass.denom());
        }
        let mut points = Vec::with_capacity(pmf.len());
        for (x, mass) in pmf.iter() {
            let label = f.value(x).ok_or(Error::SupportMismatch)?;
            let weight = (mass.numer() * (&denom / mass.denom()))
                .to_u128()
                .ok_or_else(|| {
                    Error::Infeasible("pmf denominators exceed 128-bit weights".into())
                })?;
            points.push((x.clone(), label, weight));
        }
        Ok(ParetoSolver {
            points,
            width: f.width(),
            denom,
            frontier_cap: caps.frontier_points,
            memo: HashMap::new(),
        })
    }

    pub fn curve(&mut self) -> Result<ParetoCurve> {
        let ids: Vec<u32> = (0..self.points.len() as u32).collect();
        let frontier = self.solve(&ids)?;
        let points = frontier
            .into_iter()
            .map(|(size, err)| {
                (
                    size,
                    BigRational::new(BigInt::from(err), self.denom.clone()),
                )
            })
            .collect();
        Ok(ParetoCurve::new(points))
    }

    /// The smallest tree with error at most `eps`, with its exact size and
    /// error. `None` when even the best single leaf misses the budget --
    /// impossible here since error 0 is always achievable on a support.
    pub fn witness_for_error(
        &mut self,
        eps: &BigRational,
    ) -> Result<(usize, BigRational, DecisionTree)> {
        let ids: Vec<u32> = (0..self.points.len() as u32).collect();
        let frontier = self.solve(&ids)?;
        let budget = eps * BigRational::from_integer(self.denom.clone());
        let target = frontier
            .iter()
            .find(|(_, err)| BigRational::from_integer(BigInt::from(*err)) <= budget)
            .copied()
            .expect("error 0 is always on the frontier");
        let tree = self.replay(&ids, target)?;
        debug_assert_eq!(tree.size(), target.0);
        Ok((
            target.0,
            BigRational::new(BigInt::from(target.1), self.denom.clone()),
            tree,
        ))
    }

    fn weights_of(&self, ids: &[u32]) -> (u128, u128) {
        let mut w0 = 0u128;
        let mut w1 = 0u128;
        for &i in ids {
            let (_, label, weight) = self.points[i as usize];
            if label {
                w1 += weight;
            } else {
                w0 += weight;
            }
        }
        (w0, w1)
    }

    fn split(&self, ids: &[u32], coord: usize) -> (Vec<u32>, Vec<u32>) {
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for &i in ids {
            if self.points[i as usize].0.get(coord) {
                hi.push(i);
            } else {
                lo.push(i);
            }
        }
        (lo, hi)
    }

    fn splitting_coords(&self, ids: &[u32]) -> Vec<usize> {
        (0..self.width)
            .filter(|&c| {
                let mut saw0 = false;
                let mut saw1 = false;
                for &i in ids {
                    if self.points[i as usize].0.get(c) {
                        saw1 = true;
                    } else {
                        saw0 = true;
                    }
                    if saw0 && saw1 {
                        return true;
                    }
                }
                false
            })
            .collect()
    }

    fn solve(&mut self, ids: &[u32]) -> Result<Vec<(usize, u128)>> {
        let (w0, w1) = self.weights_of(ids);
        let leaf_err = w0.min(w1);
        if leaf_err == 0 {
            return Ok(vec![(1, 0)]);
        }
        let key = state_key(ids);
        if let Some(frontier) = self.memo.get(&key) {
            return Ok(frontier.clone());
        }
        let mut candidates: Vec<(usize, u128)> = vec![(1, leaf_err)];
        for coord in self.splitting_coords(ids) {
            let (lo, hi) = self.split(ids, coord);
            let f0 = self.solve(&lo)?;
            let f1 = self.solve(&hi)?;
            for &(s0, e0) in &f0 {
                for &(s1, e1) in &f1 {
                    candidates.push((s0 + s1, e0 + e1));
                }
            }
        }
        let frontier = prune_frontier(candidates);
        if frontier.len() > self.frontier_cap {
            return Err(Error::SizeCap {
                what: "pareto frontier points",
                needed: frontier.len(),
                cap: self.frontier_cap,
            });
        }
        self.memo.insert(key, frontier.clone());
        Ok(frontier)
    }

    /// Rebuilds a tree achieving an exact frontier point. Ties break by
    /// smallest coordinate, then smallest left size, so witnesses are
    /// reproducible.
    fn replay(&mut self, ids: &[u32], target: (usize, u128)) -> Result<DecisionTree> {
        fn build(solver: &mut ParetoSolver, ids: &[u32], target: (usize, u128)) -> Result<Node> {
            let (w0, w1) = solver.weights_of(ids);
            if target.0 == 1 && w0.min(w1) == target.1 {
                return Ok(Node::Leaf(w0 < w1));
            }
            for coord in solver.splitting_coords(ids) {
                let (lo, hi) = solver.split(ids, coord);
                let f0 = solver.solve(&lo)?;
                let f1 = solver.solve(&hi)?;
                for &(s0, e0) in &f0 {
                    if s0 >= target.0 || e0 > target.1 {
                        continue;
                    }
                    let want = (target.0 - s0, target.1 - e0);
                    if f1.iter().any(|&p| p == want) {
                        return Ok(Node::Query {
                            index: coord,
                            lo: Box::new(build(solver, &lo, (s0, e0))?),
                            hi: Box::new(build(solver, &hi, want)?),
                        });
                    }
                }
            }
            unreachable!("frontier point must be reachable");
        }
        Ok(DecisionTree::new(build(self, ids, target)?))
    }
}

fn prune_frontier(mut candidates: Vec<(usize, u128)>) -> Vec<(usize, u128)> {
    candidates.sort_unstable();
    let mut out: Vec<(usize, u128)> = Vec::new();
    for (size, err) in candidates {
        match out.last() {
            Some(&(_, last_err)) if err >= last_err => {} // dominated
            _ => out.push((size, err)),
        }
        if out.last().map_or(false, |&(_, e)| e == 0) {
            break;
        }
    }
    out
}

/// Convenience wrapper returning only the curve.
pub fn pareto_size_error(f: &PartialFn, pmf: &Pmf, caps: &Caps) -> Result<ParetoCurve> {
    ParetoSolver::new(f, pmf, caps)?.curve()
}

/// Exact minimum vertex cover by branch and bound on a max-degree vertex.
/// Capped at 40 vertices.
pub fn exact_vertex_cover(g: &Graph) -> Result<(usize, BTreeSet<usize>)> {
    if g.n() > 40 {
        return Err(Error::SizeCap {
            what: "exact vertex cover vertices",
            needed: g.n(),
            cap: 40,
        });
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut best: Vec<usize> = (0..g.n()).collect(); // all vertices always cover
    let mut picked = Vec::new();
    branch_cover(&edges, &mut picked, &mut best);
    let cover: BTreeSet<usize> = best.iter().copied().collect();
    debug_assert!(g.is_vertex_cover(&cover));
    Ok((cover.len(), cover))
}

fn matching_lower_bound(edges: &[(usize, usize)]) -> usize {
    let mut used = BTreeSet::new();
    let mut size = 0;
    for &(u, v) in edges {
        if !used.contains(&u) && !used.contains(&v) {
            used.insert(u);
            used.insert(v);
            size += 1;
        }
    }
    size
}

fn branch_cover(edges: &[(usize, usize)], picked: &mut Vec<usize>, best: &mut Vec<usize>) {
    if edges.is_empty() {
        if picked.len() < best.len() {
            *best = picked.clone();
        }
        return;
    }
    if picked.len() + matching_lower_bound(edges) >= best.len() {
        return;
    }
    // max-degree vertex among the remaining edges, smallest index on ties
    let mut degree: HashMap<usize, usize> = HashMap::new();
    for &(u, v) in edges {
        *degree.entry(u).or_default() += 1;
        *degree.entry(v).or_default() += 1;
    }
    let (&v, _) = degree
        .iter()
        .max_by_key(|(&vertex, &deg)| (deg, std::cmp::Reverse(vertex)))
        .expect("nonempty");

    // branch 1: v joins the cover
    let rest: Vec<(usize, usize)> = edges
        .iter()
        .copied()
        .filter(|&(a, b)| a != v && b != v)
        .collect();
    picked.push(v);
    branch_cover(&rest, picked, best);
    picked.pop();

    // branch 2: v stays out, so all its neighbors join
    let neighbors: BTreeSet<usize> = edges
        .iter()
        .filter(|&&(a, b)| a == v || b == v)
        .map(|&(a, b)| if a == v { b } else { a })
        .collect();
    let rest2: Vec<(usize, usize)> = edges
        .iter()
        .copied()
        .filter(|&(a, b)| !neighbors.contains(&a) && !neighbors.contains(&b))
        .collect();
    let before = picked.len();
    picked.extend(neighbors.iter().copied());
    branch_cover(&rest2, picked, best);
    picked.truncate(before);
}

/// Maximal-matching greedy cover: at most twice the optimum.
pub fn greedy_vertex_cover(g: &Graph) -> BTreeSet<usize> {
    let mut cover = BTreeSet::new();
    for (u, v) in g.edges() {
        if !cover.contains(&u) && !cover.contains(&v) {
            cover.insert(u);
            cover.insert(v);
        }
    }
    debug_assert!(g.is_vertex_cover(&cover));
    cover
}
