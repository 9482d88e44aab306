//! Randomized and anchored verification suites. Each suite returns one
//! [`CheckResult`] per check; the CLI prints them as JSON lines and the
//! test harness asserts on them directly. Deterministic given the seed.

use crate::boolfn::xor_join;
use crate::bounds::{
    check_coreset, check_gadget_lb, check_hard_dist, check_hard_dist_xor, check_param_inequality,
    check_patch_up, check_patch_up_xor, check_power_inequality, choose_params_plain, BoundReport,
    CheckResult, Relation,
};
use crate::dtree::error_exact;
use crate::error::Result;
use crate::gadget::{
    canonical_hard_pmf, cutoff_error_budget, cutoff_xor_tree, gen_graph, vc_upper_tree,
    vc_upper_tree_bound, verify_gadget_tree_exact, Gadget, Graph, GraphKind,
};
use crate::oracle::{exact_dtsize, exact_vertex_cover};
use crate::rat::{rat, rat_int, rat_usize};
use crate::sample::{rand_nonconstant_fn, rand_partial_fn, rand_tree};
use crate::Caps;
use num::{BigRational, One};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn eq_report(name: &str, context: String, lhs: usize, rhs: usize) -> CheckResult {
    CheckResult::Checked(BoundReport::new(
        name,
        context,
        rat_usize(lhs),
        rat_usize(rhs),
        Relation::Eq,
    ))
}

/// Product equality of optimal sizes for independent XOR blocks.
pub fn suite_savicky(trials: usize, seed: u64, caps: &Caps) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for trial in 0..trials {
        let wf = rng.gen_range(1..=4usize);
        let wg = rng.gen_range(1..=4usize);
        let f = rand_partial_fn(&mut rng, wf, 10);
        let g = rand_partial_fn(&mut rng, wg, 10);
        let joined = xor_join(&[&f, &g], caps.product_points)?;
        let (sf, _) = exact_dtsize(&f, caps)?;
        let (sg, _) = exact_dtsize(&g, caps)?;
        let (sj, _) = exact_dtsize(&joined, caps)?;
        out.push(eq_report(
            "savicky-product",
            format!("trial {trial}: widths ({wf},{wg}), domains ({},{})", f.len(), g.len()),
            sj,
            sf * sg,
        ));
    }
    // one three-block case
    let f = rand_partial_fn(&mut rng, 2, 4);
    let g = rand_partial_fn(&mut rng, 3, 6);
    let h = rand_partial_fn(&mut rng, 2, 4);
    let joined = xor_join(&[&f, &g, &h], caps.product_points)?;
    let (sf, _) = exact_dtsize(&f, caps)?;
    let (sg, _) = exact_dtsize(&g, caps)?;
    let (sh, _) = exact_dtsize(&h, caps)?;
    let (sj, _) = exact_dtsize(&joined, caps)?;
    out.push(eq_report(
        "savicky-product-triple",
        format!("domains ({},{},{})", f.len(), g.len(), h.len()),
        sj,
        sf * sg * sh,
    ));
    Ok(out)
}

/// Patch-up bound on random (tree, function) pairs; every patched tree is
/// audited exact on the domain.
pub fn suite_patchup(trials: usize, seed: u64, caps: &Caps) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for trial in 0..trials {
        let width = rng.gen_range(2..=4usize);
        let f = rand_partial_fn(&mut rng, width, 10);
        let tree = rand_tree(&mut rng, width, 8);
        out.push(check_patch_up(&tree, &f, caps)?);
        let patched = crate::dtree::patch_up_tree(&tree, &f, caps.width)?;
        out.push(eq_report(
            "patch-up-audit-exact",
            format!("trial {trial}: patched tree agrees on all of D"),
            usize::from(patched.is_exact_on(&f)),
            1,
        ));
    }
    Ok(out)
}

/// XOR patch-up bound at r = 2 on small random instances.
pub fn suite_patchup_xor(trials: usize, seed: u64, caps: &Caps) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..trials {
        let width = rng.gen_range(1..=2usize);
        let f = rand_nonconstant_fn(&mut rng, width, 4);
        let tree = rand_tree(&mut rng, width * 2, 6);
        out.push(check_patch_up_xor(&tree, &f, 2, caps)?);
    }
    Ok(out)
}

/// Hard-distribution bound on random (tree, function, C) triples.
pub fn suite_harddist(trials: usize, seed: u64, _caps: &Caps) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..trials {
        let width = rng.gen_range(2..=4usize);
        let f = rand_nonconstant_fn(&mut rng, width, 10);
        let ones = f.ones();
        let take = rng.gen_range(1..=ones.len());
        let chosen: Vec<_> = ones.into_iter().take(take).collect();
        let tree = rand_tree(&mut rng, width, 8);
        out.push(check_hard_dist(&tree, &f, &chosen)?);
    }
    Ok(out)
}

/// XOR hard-distribution bound at r = 2 on small random instances.
pub fn suite_harddist_xor(trials: usize, seed: u64, caps: &Caps) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..trials {
        let width = rng.gen_range(1..=3usize);
        let f = rand_nonconstant_fn(&mut rng, width, 6);
        let ones = f.ones();
        let take = rng.gen_range(1..=ones.len());
        let chosen: Vec<_> = ones.into_iter().take(take).collect();
        let tree = rand_tree(&mut rng, width * 2, 8);
        out.push(check_hard_dist_xor(&tree, &f, &chosen, 2, caps)?);
    }
    Ok(out)
}

fn seeded_graph(rng: &mut ChaCha20Rng, index: usize) -> Graph {
    let n = rng.gen_range(3..=8usize);
    match index % 4 {
        0 => gen_graph(GraphKind::Complete, n.min(5), rng.gen()),
        1 => gen_graph(GraphKind::Cycle, n, rng.gen()),
        2 => gen_graph(GraphKind::Path, n, rng.gen()),
        _ => {
            let n = if n % 2 == 1 { n + 1 } else { n };
            gen_graph(GraphKind::RandomRegular(3), n.max(4), rng.gen())
        }
    }
    .expect("feasible family parameters")
}

/// Gadget facts on seeded graphs: sensitivity, certificate equality under
/// random tree paths, canonical mass split, cover-tree exactness and size.
pub fn suite_gadget(graphs: usize, seed: u64, caps: &Caps) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for index in 0..graphs {
        let graph = seeded_graph(&mut rng, index);
        let ell = 1 + index % 3;
        let gadget = Gadget::new(graph.clone(), ell)?;
        let f = gadget.hard_support()?;
        let ctx = format!("graph {index}: n {}, m {}, ell {ell}", graph.n(), graph.m());
        out.push(eq_report(
            "gadget-sensitivity",
            format!("{ctx}: max sensitivity = 2(ell+1)"),
            f.max_sensitivity(),
            2 * (ell + 1),
        ));
        // certificate equals sensitivity for 1-inputs under restrictions
        // drawn from random tree paths
        let restriction_trials = 50usize;
        let mut worst: Option<(usize, usize)> = None;
        for x in f.ones() {
            for _ in 0..restriction_trials {
                let tree = rand_tree(&mut rng, f.width(), 10);
                let path = tree.path_of(&x);
                let restricted = f.restrict(&path)?;
                let cert = restricted.certificate_complexity(&x, caps.width)?;
                let sens = restricted.sensitivity_set(&x)?.len();
                if cert != sens {
                    worst = Some((cert, sens));
                }
            }
        }
        let (lhs, rhs) = worst.unwrap_or((0, 0));
        out.push(eq_report(
            "gadget-cert-equals-sens",
            format!("{ctx}: {restriction_trials} random restrictions per 1-input"),
            lhs,
            rhs,
        ));
        let pmf = canonical_hard_pmf(&f)?;
        let ones_mass: BigRational = f
            .ones()
            .iter()
            .map(|x| pmf.pmf.mass(x).expect("indicator in support").clone())
            .sum();
        out.push(CheckResult::Checked(BoundReport::new(
            "gadget-ones-mass",
            format!("{ctx}: canonical mass on 1-inputs"),
            ones_mass,
            rat(1, 2),
            Relation::Eq,
        )));
        let (cover_size, cover) = exact_vertex_cover(&graph)?;
        let tree = vc_upper_tree(&gadget, &cover)?;
        out.push(eq_report(
            "gadget-upper-tree-exact",
            format!("{ctx}: cover tree exact on the full cube"),
            usize::from(verify_gadget_tree_exact(&tree, &gadget)?),
            1,
        ));
        out.push(CheckResult::Checked(BoundReport::new(
            "gadget-upper-tree-size",
            format!("{ctx}: k = {cover_size}"),
            rat_usize(tree.size()),
            rat_usize(vc_upper_tree_bound(&gadget, cover_size)),
            Relation::Le,
        )));
    }
    Ok(out)
}

/// Zero-error and epsilon-error size lower bounds on small gadgets, via
/// the exact oracle.
pub fn suite_gadget_lb(seed: u64, caps: &Caps) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (kind, n) in [
        (GraphKind::Complete, 3),
        (GraphKind::Cycle, 4),
        (GraphKind::Path, 4),
    ] {
        for ell in [1usize, 2] {
            let graph = gen_graph(kind, n, rng.gen())?;
            let gadget = Gadget::new(graph.clone(), ell)?;
            let f = gadget.hard_support()?;
            let (opt, tree) = exact_dtsize(&f, caps)?;
            let (cover_size, _) = exact_vertex_cover(&graph)?;
            out.push(CheckResult::Checked(BoundReport::new(
                "gadget-zero-error-lb",
                format!("n {}, m {}, ell {ell}", graph.n(), graph.m()),
                rat_usize(opt),
                rat_usize((ell + 1) * (cover_size + graph.m())),
                Relation::Ge,
            )));
            out.push(check_gadget_lb(&tree, &gadget, &rat_int(0))?);
        }
    }
    Ok(out)
}

/// Cutoff trees on the single-edge graph and the triangle: exact error at
/// most the binomial tail, zero at tau = r.
pub fn suite_cutoff(caps: &Caps) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let graphs = [
        ("single-edge", Graph::new(2, [(0, 1)])?),
        ("triangle", gen_graph(GraphKind::Complete, 3, 0)?),
    ];
    for (name, graph) in graphs {
        let (_, cover) = exact_vertex_cover(&graph)?;
        let f = graph.edge_indicator_fn()?;
        let pmf = canonical_hard_pmf(&f)?.pmf;
        for r in [2usize, 3] {
            let fxor = f.xor_power(r, caps.product_points)?;
            let product = pmf.product(r, caps.product_points)?;
            for tau in 0..=r {
                let tree = cutoff_xor_tree(&graph, r, tau, &cover)?;
                let err = error_exact(&tree, &fxor, &product)?;
                // sizes are measured, not asserted against any formula
                out.push(CheckResult::Checked(BoundReport::new(
                    "cutoff-error-tail",
                    format!("{name}, r {r}, tau {tau}, |T| = {}", tree.size()),
                    err.clone(),
                    cutoff_error_budget(r, tau),
                    Relation::Le,
                )));
                if tau == r {
                    out.push(CheckResult::Checked(BoundReport::new(
                        "cutoff-exact-at-tau-r",
                        format!("{name}, r {r}"),
                        err,
                        rat_int(0),
                        Relation::Eq,
                    )));
                }
            }
        }
    }
    Ok(out)
}

/// Coreset bounds on random monotone functions.
pub fn suite_coreset(trials: usize, seed: u64, caps: &Caps) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let eps_list = [rat_int(0), rat(1, 16)];
    let mut produced = 0usize;
    while produced < trials {
        let width = rng.gen_range(2..=5usize);
        let f = crate::sample::rand_monotone_fn(&mut rng, width);
        if f.is_constant() {
            continue;
        }
        produced += 1;
        out.extend(check_coreset(&f, &eps_list, caps)?);
    }
    Ok(out)
}

/// Randomized trials of the two parameter propositions, plus the anchored
/// parameter choice.
pub fn suite_params(trials: usize, seed: u64) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut held = 0usize;
    while held < trials {
        let d = rng.gen_range(1..=4usize);
        let k = rng.gen_range(1..=6usize);
        let m = rng.gen_range(1..=d * k);
        let n = rng.gen_range(1..=8usize);
        let ell = rng.gen_range(1..=64usize);
        let delta = rat(rng.gen_range(1..=30i64), 100);
        let alpha = rat(rng.gen_range(0..=100i64), 100);
        // pick delta' strictly above the threshold so the check applies
        let margin = rat(rng.gen_range(1..=50i64), 100);
        let threshold = (&delta + &alpha) * rat_usize(d)
            + &delta
            + (BigRational::one() + &delta) * rat_usize(m * n) / rat_usize(k * (ell + 1));
        let delta_prime = threshold + margin;
        let result = check_param_inequality(&delta, &delta_prime, &alpha, ell, m, n, k, d);
        if result.is_applicable() {
            held += 1;
            out.push(result);
        }
    }
    let mut power_held = 0usize;
    while power_held < trials {
        let b = rat(rng.gen_range(1..=40i64), rng.gen_range(1..=10i64));
        let a = &b + rat(rng.gen_range(0..=40i64), rng.gen_range(1..=10i64));
        let r = rng.gen_range(1..=6u32);
        let result = check_power_inequality(&a, &b, r);
        if result.is_applicable() {
            power_held += 1;
            out.push(result);
        }
    }
    // anchored choice: the triangle at k = 2
    let graph = gen_graph(GraphKind::Complete, 3, 0)?;
    let params = choose_params_plain(&graph, 2, &rat(1, 10), &rat_int(1), &rat_int(0))?;
    out.push(eq_report(
        "params-anchor-ell",
        "triangle, k 2, delta 1/10, delta' 1, eps 0".into(),
        params.ell,
        7,
    ));
    out.push(eq_report(
        "params-anchor-s",
        "triangle, k 2: budget (ell+1)(k+m)+mn".into(),
        params.s.to_string().parse().unwrap(),
        49,
    ));
    Ok(out)
}

/// Which suites the CLI exposes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Patchup,
    Harddist,
    Xor,
    Savicky,
    Gadget,
    Coreset,
    Params,
    All,
}

impl Suite {
    pub fn parse(text: &str) -> Option<Suite> {
        Some(match text {
            "patchup" => Suite::Patchup,
            "harddist" => Suite::Harddist,
            "xor" => Suite::Xor,
            "savicky" => Suite::Savicky,
            "gadget" => Suite::Gadget,
            "coreset" => Suite::Coreset,
            "params" => Suite::Params,
            "all" => Suite::All,
            _ => return None,
        })
    }
}

/// Runs a suite with the given trial budget.
pub fn run_suite(suite: Suite, trials: usize, seed: u64, caps: &Caps) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let xor_trials = (trials / 4).max(1);
    match suite {
        Suite::Patchup => out.extend(suite_patchup(trials, seed, caps)?),
        Suite::Harddist => out.extend(suite_harddist(trials, seed, caps)?),
        Suite::Xor => {
            out.extend(suite_patchup_xor(xor_trials, seed, caps)?);
            out.extend(suite_harddist_xor(xor_trials, seed ^ 1, caps)?);
        }
        Suite::Savicky => out.extend(suite_savicky(trials, seed, caps)?),
        Suite::Gadget => {
            out.extend(suite_gadget(trials.clamp(1, 20), seed, caps)?);
            out.extend(suite_gadget_lb(seed ^ 2, caps)?);
            out.extend(suite_cutoff(caps)?);
        }
        Suite::Coreset => out.extend(suite_coreset(trials.clamp(1, 30), seed, caps)?),
        Suite::Params => out.extend(suite_params(trials, seed)?),
        Suite::All => {
            out.extend(suite_patchup(trials, seed, caps)?);
            out.extend(suite_patchup_xor(xor_trials, seed ^ 1, caps)?);
            out.extend(suite_harddist(trials, seed ^ 2, caps)?);
            out.extend(suite_harddist_xor(xor_trials, seed ^ 3, caps)?);
            out.extend(suite_savicky(trials, seed ^ 4, caps)?);
            out.extend(suite_gadget(trials.clamp(1, 10), seed ^ 5, caps)?);
            out.extend(suite_gadget_lb(seed ^ 6, caps)?);
            out.extend(suite_cutoff(caps)?);
            out.extend(suite_coreset(trials.clamp(1, 10), seed ^ 7, caps)?);
            out.extend(suite_params(trials, seed ^ 8)?);
        }
    }
    Ok(out)
}
