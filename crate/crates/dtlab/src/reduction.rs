//! The learning-task harness: two learners, the vertex-cover decision
//! procedures built on them, and dataset-minimization instances.

use crate::boolfn::{BitVector, PartialFn};
use crate::bounds::ReductionParams;
use crate::dtree::{error_exact, stacked_xor_tree, DecisionTree, Node, Pmf};
use crate::error::{Error, Result};
use crate::gadget::{canonical_hard_pmf, Gadget, Graph, PmfSampler};
use crate::oracle::ParetoSolver;
use crate::rat::{format_rat, rat_to_f64};
use crate::Caps;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, BTreeSet};

/// A learning task: query access to a target, a seeded sample stream, and
/// the promise/budget parameters.
///
/// `eps = 0` is allowed and means exact learning on the support.
pub struct LearnTask<'a> {
    pub width: usize,
    pub target: Box<dyn Fn(&BitVector) -> bool + 'a>,
    pub sampler: PmfSampler,
    /// Arity of the sample stream: each sample is `r` independent draws
    /// concatenated.
    pub r: usize,
    pub promised_size: BigInt,
    pub size_budget: usize,
    pub eps: BigRational,
    pub step_budget: u64,
}

impl<'a> LearnTask<'a> {
    pub fn validate(&self) -> Result<()> {
        if BigRational::from_integer(BigInt::from(self.size_budget))
            < BigRational::from_integer(self.promised_size.clone())
            || self.promised_size < BigInt::one()
        {
            return Err(Error::Infeasible("need s' >= s >= 1".into()));
        }
        if self.eps.is_negative() || self.eps >= BigRational::one() {
            return Err(Error::Infeasible("need 0 <= eps < 1".into()));
        }
        Ok(())
    }
}

/// What the greedy learner did, for the transcript.
#[derive(Clone, Debug)]
pub struct GreedyOutcome {
    pub tree: DecisionTree,
    pub samples_drawn: usize,
    pub distinct_points: usize,
    pub splits: usize,
    pub steps_used: u64,
    pub budget_exhausted: bool,
}

/// Top-down impurity learner on a drawn sample.
///
/// Draws a labeled sample (labels via queries), then repeatedly splits the
/// highest-impurity leaf on the coordinate with the largest exact
/// mass-weighted impurity reduction, until every leaf is pure or the leaf
/// budget is reached. Leaves take majority-mass labels. Deterministic
/// given the task's sampler seed.
pub fn greedy_learner(task: &mut LearnTask) -> GreedyOutcome {
    task.validate().expect("task parameters");
    let sample_target = ((task.step_budget / 2).min(5_000) as usize).max(1);
    let mut counts: BTreeMap<BitVector, u64> = BTreeMap::new();
    for _ in 0..sample_target {
        *counts.entry(task.sampler.next_product(task.r)).or_default() += 1;
    }
    let mut steps = sample_target as u64;
    let mut points: Vec<(BitVector, u64, bool)> = Vec::with_capacity(counts.len());
    for (x, count) in counts {
        let label = (task.target)(&x);
        steps += 1;
        points.push((x, count, label));
    }
    let distinct_points = points.len();

    enum Slot {
        Leaf(Vec<(BitVector, u64, bool)>),
        Split { index: usize, lo: usize, hi: usize },
    }
    fn impurity(points: &[(BitVector, u64, bool)]) -> u64 {
        let w1: u64 = points.iter().filter(|p| p.2).map(|p| p.1).sum();
        let w0: u64 = points.iter().filter(|p| !p.2).map(|p| p.1).sum();
        w0.min(w1)
    }
    fn best_split(points: &[(BitVector, u64, bool)], width: usize) -> Option<usize> {
        let parent = impurity(points) as i128;
        let mut best: Option<(i128, usize)> = None;
        for coord in 0..width {
            let (mut lo, mut hi) = (Vec::new(), Vec::new());
            for p in points {
                if p.0.get(coord) {
                    hi.push(p.clone());
                } else {
                    lo.push(p.clone());
                }
            }
            if lo.is_empty() || hi.is_empty() {
                continue;
            }
            let reduction = parent - impurity(&lo) as i128 - impurity(&hi) as i128;
            match best {
                Some((r, _)) if r >= reduction => {}
                _ => best = Some((reduction, coord)),
            }
        }
        best.map(|(_, c)| c)
    }

    let mut arena: Vec<Slot> = vec![Slot::Leaf(points)];
    let mut heap: BinaryHeap<(u64, Reverse<usize>, usize)> = BinaryHeap::new();
    let root_imp = match &arena[0] {
        Slot::Leaf(p) => impurity(p),
        _ => unreachable!(),
    };
    if root_imp > 0 {
        heap.push((root_imp, Reverse(0), 0));
    }
    let mut leaves = 1usize;
    let mut splits = 0usize;
    let mut budget_exhausted = false;
    let mut creation = 1usize;
    while let Some((_, _, slot)) = heap.pop() {
        if leaves >= task.size_budget {
            break;
        }
        if steps >= task.step_budget {
            budget_exhausted = true;
            break;
        }
        let pts = match &arena[slot] {
            Slot::Leaf(p) => p.clone(),
            _ => unreachable!(),
        };
        let Some(coord) = best_split(&pts, task.width) else {
            continue;
        };
        let (mut lo, mut hi) = (Vec::new(), Vec::new());
        for p in pts {
            if p.0.get(coord) {
                hi.push(p);
            } else {
                lo.push(p);
            }
        }
        let lo_imp = impurity(&lo);
        let hi_imp = impurity(&hi);
        let lo_id = arena.len();
        arena.push(Slot::Leaf(lo));
        let hi_id = arena.len();
        arena.push(Slot::Leaf(hi));
        arena[slot] = Slot::Split {
            index: coord,
            lo: lo_id,
            hi: hi_id,
        };
        leaves += 1;
        splits += 1;
        steps += 1;
        if lo_imp > 0 {
            heap.push((lo_imp, Reverse(creation), lo_id));
        }
        creation += 1;
        if hi_imp > 0 {
            heap.push((hi_imp, Reverse(creation), hi_id));
        }
        creation += 1;
    }

    fn materialize(arena: &[Slot], slot: usize) -> Node {
        match &arena[slot] {
            Slot::Leaf(points) => {
                let w1: u64 = points.iter().filter(|p| p.2).map(|p| p.1).sum();
                let w0: u64 = points.iter().filter(|p| !p.2).map(|p| p.1).sum();
                Node::Leaf(w1 > w0)
            }
            Slot::Split { index, lo, hi } => Node::Query {
                index: *index,
                lo: Box::new(materialize(arena, *lo)),
                hi: Box::new(materialize(arena, *hi)),
            },
        }
    }
    GreedyOutcome {
        tree: DecisionTree::new(materialize(&arena, 0)),
        samples_drawn: sample_target,
        distinct_points,
        splits,
        steps_used: steps,
        budget_exhausted,
    }
}

/// What the oracle learner found.
#[derive(Clone, Debug)]
pub struct OracleOutcome {
    pub tree: DecisionTree,
    pub size: usize,
    pub error: BigRational,
    /// False when no tree within the size budget met the error budget; the
    /// returned tree is then the best-error one within the budget.
    pub within_budgets: bool,
}

/// The ideal learner: the exact smallest tree with error at most `eps`
/// under the pmf, via the Pareto frontier. Falls back to the best-error
/// tree within the size budget when the target is infeasible.
pub fn oracle_learner(
    support: &PartialFn,
    pmf: &Pmf,
    eps: &BigRational,
    size_budget: usize,
    caps: &Caps,
) -> Result<OracleOutcome> {
    let mut solver = ParetoSolver::new(support, pmf, caps)?;
    let curve = solver.curve()?;
    let (size, error, tree) = solver.witness_for_error(eps)?;
    if size <= size_budget {
        return Ok(OracleOutcome {
            tree,
            size,
            error,
            within_budgets: true,
        });
    }
    // infeasible: best error achievable within the size budget
    let fallback = curve
        .points()
        .iter()
        .filter(|(s, _)| *s <= size_budget)
        .last()
        .cloned()
        .expect("size budget is at least 1, the single-leaf point qualifies");
    let (fsize, ferr, ftree) = solver.witness_for_error(&fallback.1)?;
    Ok(OracleOutcome {
        tree: ftree,
        size: fsize,
        error: ferr,
        within_budgets: false,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LearnerKind {
    Oracle,
    Greedy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Plain,
    Xor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Yes,
    No,
}

/// How the hypothesis error was measured.
#[derive(Clone, Debug)]
pub enum EpsMeasurement {
    Exact(BigRational),
    MonteCarlo {
        estimate: f64,
        ci_halfwidth: f64,
        samples: usize,
    },
}

/// Everything one decision run recorded.
#[derive(Clone, Debug)]
pub struct Transcript {
    pub graph_n: usize,
    pub graph_m: usize,
    pub degree: usize,
    pub k: usize,
    pub mode: Mode,
    pub learner: LearnerKind,
    pub ell: usize,
    pub r: usize,
    pub s: BigInt,
    pub size_threshold: BigRational,
    pub eps: BigRational,
    pub degree_pre_check_failed: bool,
    pub learner_failure: Option<String>,
    pub tree_size: Option<usize>,
    pub eps_hyp: Option<EpsMeasurement>,
    pub greedy_steps: Option<(usize, usize, usize, bool)>,
    pub decision: Decision,
}

impl Transcript {
    pub fn to_json(&self) -> Value {
        json!({
            "graph": { "n": self.graph_n, "m": self.graph_m, "d": self.degree },
            "k": self.k,
            "mode": match self.mode { Mode::Plain => "plain", Mode::Xor => "xor" },
            "learner": match self.learner { LearnerKind::Oracle => "oracle", LearnerKind::Greedy => "greedy" },
            "ell": self.ell,
            "r": self.r,
            "s": self.s.to_string(),
            "size_threshold": format_rat(&self.size_threshold),
            "eps": format_rat(&self.eps),
            "degree_pre_check_failed": self.degree_pre_check_failed,
            "learner_failure": self.learner_failure,
            "tree_size": self.tree_size,
            "eps_hyp": self.eps_hyp.as_ref().map(|m| match m {
                EpsMeasurement::Exact(e) => json!({ "mode": "exact", "value": format_rat(e) }),
                EpsMeasurement::MonteCarlo { estimate, ci_halfwidth, samples } => json!({
                    "mode": "monte-carlo",
                    "estimate": estimate,
                    "ci_halfwidth": ci_halfwidth,
                    "samples": samples,
                }),
            }),
            "greedy_steps": self.greedy_steps.map(|(samples, distinct, splits, exhausted)| json!({
                "samples": samples, "distinct": distinct, "splits": splits, "budget_exhausted": exhausted,
            })),
            "decision": match self.decision { Decision::Yes => "YES", Decision::No => "NO" },
        })
    }
}

/// Runs the figure's decision procedure: answer whether `graph` has a
/// vertex cover of size `k` by learning the gadget and inspecting the
/// hypothesis size and error.
///
/// A learner that fails (caps, budget) is treated as a time-bounded run
/// that produced nothing, hence a No.
pub fn decide_vertex_cover(
    graph: &Graph,
    k: usize,
    learner: LearnerKind,
    params: &ReductionParams,
    mode: Mode,
    seed: u64,
    step_budget: u64,
    caps: &Caps,
) -> Result<(Decision, Transcript)> {
    let r = match mode {
        Mode::Plain => 1,
        Mode::Xor => params.r,
    };
    if mode == Mode::Plain && params.r != 1 {
        return Err(Error::Infeasible("plain mode needs r = 1 parameters".into()));
    }
    let mut transcript = Transcript {
        graph_n: graph.n(),
        graph_m: graph.m(),
        degree: graph.max_degree(),
        k,
        mode,
        learner,
        ell: params.ell,
        r,
        s: params.s.clone(),
        size_threshold: params.size_threshold(),
        eps: params.eps.clone(),
        degree_pre_check_failed: false,
        learner_failure: None,
        tree_size: None,
        eps_hyp: None,
        greedy_steps: None,
        decision: Decision::No,
    };
    // degree pre-check: dk < m rules out a size-k cover outright
    if graph.max_degree() * k < graph.m() {
        transcript.degree_pre_check_failed = true;
        return Ok((Decision::No, transcript));
    }
    let gadget = Gadget::new(graph.clone(), params.ell)?;
    let support = gadget.hard_support()?;
    let pmf = canonical_hard_pmf(&support)?.pmf;
    let size_budget = transcript
        .size_threshold
        .floor()
        .to_integer()
        .to_usize()
        .unwrap_or(usize::MAX);

    let hypothesis: Option<DecisionTree> = match learner {
        LearnerKind::Oracle => {
            // zero-error per-block learning, stacked r times; Savicky's
            // equality makes the stack optimal whenever the blocks are
            let per_block = if r == 1 {
                oracle_learner(&support, &pmf, &params.eps, size_budget, caps)
            } else {
                oracle_learner(&support, &pmf, &BigRational::zero(), usize::MAX, caps)
            };
            match per_block {
                Ok(outcome) => {
                    if r == 1 {
                        Some(outcome.tree)
                    } else {
                        let trees: Vec<&DecisionTree> = vec![&outcome.tree; r];
                        let widths = vec![gadget.width(); r];
                        Some(stacked_xor_tree(&trees, &widths)?)
                    }
                }
                Err(err) => {
                    transcript.learner_failure = Some(err.to_string());
                    None
                }
            }
        }
        LearnerKind::Greedy => {
            let gadget_for_target = gadget.clone();
            let block_width = gadget.width();
            let mut task = LearnTask {
                width: block_width * r,
                target: Box::new(move |x: &BitVector| {
                    let mut acc = false;
                    for block in 0..r {
                        acc ^= gadget_for_target
                            .eval(&x.slice(block * block_width, block_width))
                            .expect("width");
                    }
                    acc
                }),
                sampler: PmfSampler::new(&pmf, seed),
                r,
                promised_size: params.s.clone(),
                size_budget: size_budget.max(1),
                eps: params.eps.clone(),
                step_budget,
            };
            let outcome = greedy_learner(&mut task);
            transcript.greedy_steps = Some((
                outcome.samples_drawn,
                outcome.distinct_points,
                outcome.splits,
                outcome.budget_exhausted,
            ));
            Some(outcome.tree)
        }
    };

    let Some(tree) = hypothesis else {
        transcript.decision = Decision::No;
        return Ok((Decision::No, transcript));
    };
    transcript.tree_size = Some(tree.size());

    // measure the hypothesis error: exact when the product support is
    // enumerable, seeded Monte Carlo otherwise
    let product_points = support.len().checked_pow(r as u32);
    let err_ok = if product_points.map_or(false, |p| p <= caps.product_points) {
        let fxor = support.xor_power(r, caps.product_points)?;
        let product_pmf = pmf.product(r, caps.product_points)?;
        let err = error_exact(&tree, &fxor, &product_pmf)?;
        let ok = err <= params.eps;
        transcript.eps_hyp = Some(EpsMeasurement::Exact(err));
        ok
    } else if params.eps.is_positive() {
        let quarter = &params.eps / BigRational::from_integer(BigInt::from(4));
        let q = rat_to_f64(&quarter);
        let n = ((2000.0f64).ln() / (2.0 * q * q)).ceil() as usize;
        let mut sampler = PmfSampler::new(&pmf, seed.wrapping_add(0x9E37_79B9));
        let gadget_for_target = gadget.clone();
        let block_width = gadget.width();
        let target = move |x: &BitVector| {
            let mut acc = false;
            for block in 0..r {
                acc ^= gadget_for_target
                    .eval(&x.slice(block * block_width, block_width))
                    .expect("width");
            }
            acc
        };
        let mut draw = || sampler.next_product(r);
        let (estimate, ci) = crate::dtree::error_monte_carlo(&tree, &target, &mut draw, n);
        let ok = estimate <= rat_to_f64(&params.eps);
        transcript.eps_hyp = Some(EpsMeasurement::MonteCarlo {
            estimate,
            ci_halfwidth: ci,
            samples: n,
        });
        ok
    } else {
        return Err(Error::Infeasible(
            "product support exceeds the enumeration cap and eps = 0".into(),
        ));
    };

    let size_ok = BigRational::from_integer(BigInt::from(tree.size())) <= transcript.size_threshold;
    let decision = if size_ok && err_ok {
        Decision::Yes
    } else {
        Decision::No
    };
    transcript.decision = decision;
    Ok((decision, transcript))
}

/// A dataset-minimization instance: a tree, the explicit domain it is to
/// be minimized against, an exact pmf, and the budgets.
#[derive(Clone, Debug)]
pub struct DatasetMinInstance {
    pub width: usize,
    pub tree: DecisionTree,
    pub domain: PartialFn,
    pub pmf: Pmf,
    pub eps: BigRational,
    pub s: BigInt,
    pub s_prime: BigInt,
}

/// Builds the instance: `r` stacked copies of the all-vertices cover tree,
/// over the r-fold product of the gadget's hard support, with the product
/// pmf emitted exactly.
pub fn emit_dataset_min(
    graph: &Graph,
    ell: usize,
    r: usize,
    eps: &BigRational,
    s_prime: Option<BigInt>,
    caps: &Caps,
) -> Result<DatasetMinInstance> {
    let gadget = Gadget::new(graph.clone(), ell)?;
    let all_vertices: BTreeSet<usize> = (0..graph.n()).collect();
    let block_tree = crate::gadget::vc_upper_tree(&gadget, &all_vertices)?;
    let trees: Vec<&DecisionTree> = vec![&block_tree; r];
    let widths = vec![gadget.width(); r];
    let stacked = stacked_xor_tree(&trees, &widths)?;
    let support = gadget.hard_support()?;
    let pmf = canonical_hard_pmf(&support)?.pmf.product(r, caps.product_points)?;
    // the domain's labels come from evaluating the instance tree
    let shape = support.xor_power(r, caps.product_points)?;
    let mut points = Vec::with_capacity(shape.len());
    for (x, _) in shape.iter() {
        points.push((x.clone(), stacked.evaluate(x)));
    }
    let domain = PartialFn::new(gadget.width() * r, points)?;
    let (n, m) = (graph.n(), graph.m());
    let s = BigInt::from((ell + 1) * (n + m) + m * n).pow(r as u32);
    let s_prime = s_prime.unwrap_or_else(|| s.clone());
    if s_prime < s {
        return Err(Error::Infeasible("instance needs s' >= s".into()));
    }
    Ok(DatasetMinInstance {
        width: gadget.width() * r,
        tree: stacked,
        domain,
        pmf,
        eps: eps.clone(),
        s,
        s_prime,
    })
}

#[derive(Clone, Debug)]
pub struct DatasetMinVerdict {
    pub size: usize,
    pub agreement: BigRational,
    pub size_ok: bool,
    pub agreement_ok: bool,
    pub pass: bool,
}

/// Scores a candidate: its size against `s'` and its exact agreement
/// probability against `1 - eps`.
pub fn check_dataset_min(
    instance: &DatasetMinInstance,
    candidate: &DecisionTree,
) -> Result<DatasetMinVerdict> {
    let disagreement = error_exact(candidate, &instance.domain, &instance.pmf)?;
    let agreement = BigRational::one() - disagreement;
    let size = candidate.size();
    let size_ok = BigRational::from_integer(BigInt::from(size))
        <= BigRational::from_integer(instance.s_prime.clone());
    let agreement_ok = agreement >= BigRational::one() - &instance.eps;
    Ok(DatasetMinVerdict {
        size,
        agreement,
        size_ok,
        agreement_ok,
        pass: size_ok && agreement_ok,
    })
}

impl DatasetMinInstance {
    pub fn to_json(&self) -> Value {
        json!({
            "width": self.width,
            "tree": self.tree.to_json(),
            "domain": self.domain.iter().map(|(x, l)| json!({
                "x": x.to_string(), "label": if l { 1 } else { 0 },
            })).collect::<Vec<_>>(),
            "pmf": self.pmf.to_json(),
            "eps": format_rat(&self.eps),
            "s": self.s.to_string(),
            "s_prime": self.s_prime.to_string(),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let width = value
            .get("width")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("instance needs width".into()))? as usize;
        let tree = DecisionTree::from_json(
            value
                .get("tree")
                .ok_or_else(|| Error::Parse("instance needs tree".into()))?,
        )?;
        let domain_arr = value
            .get("domain")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("instance needs domain".into()))?;
        let mut points = Vec::with_capacity(domain_arr.len());
        for item in domain_arr {
            let x = item
                .get("x")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("domain entry needs x".into()))?;
            let label = item
                .get("label")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse("domain entry needs label".into()))?;
            points.push((BitVector::parse(x)?, label == 1));
        }
        let domain = PartialFn::new(width, points)?;
        let pmf = Pmf::from_json(
            value
                .get("pmf")
                .ok_or_else(|| Error::Parse("instance needs pmf".into()))?,
        )?;
        let eps = crate::rat::parse_rat(
            value
                .get("eps")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("instance needs eps".into()))?,
        )?;
        let s: BigInt = value
            .get("s")
            .and_then(Value::as_str)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse("instance needs s".into()))?;
        let s_prime: BigInt = value
            .get("s_prime")
            .and_then(Value::as_str)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse("instance needs s_prime".into()))?;
        if s_prime < s {
            return Err(Error::Parse("instance needs s' >= s".into()));
        }
        for (x, _) in pmf.iter() {
            if !domain.contains(x) {
                return Err(Error::Parse("pmf support must lie inside the domain".into()));
            }
        }
        Ok(DatasetMinInstance {
            width,
            tree,
            domain,
            pmf,
            eps,
            s,
            s_prime,
        })
    }
}
