//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Every threshold is exact; the only tolerances are the stated
//! wall-clock budgets.

use dtlab::boolfn::PartialFn;
use dtlab::bounds::{check_hard_dist, choose_params_plain, choose_params_xor};
use dtlab::dtree::{error_exact, DecisionTree};
use dtlab::gadget::{canonical_hard_pmf, gen_graph, vc_upper_tree, vc_upper_tree_bound,
    verify_gadget_tree_exact, Gadget, Graph, GraphKind};
use dtlab::oracle::{exact_dtsize, exact_vertex_cover, pareto_size_error};
use dtlab::rat::{rat, rat_int, rat_usize};
use dtlab::reduction::{decide_vertex_cover, Decision, LearnerKind, Mode};
use dtlab::sample::rand_tree;
use dtlab::verify::*;
use dtlab::Caps;
use num::{BigRational, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::collections::BTreeSet;
use std::time::Instant;

const SEED: u64 = 7;

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_01_savicky_product() {
    let start = Instant::now();
    let caps = Caps::default();
    // 100 random pairs plus one triple, exact integer equality each time
    let results = suite_savicky(100, SEED, &caps).unwrap();
    assert_eq!(results.len(), 101);
    let all_hold = results.iter().all(|r| r.holds());
    let elapsed = start.elapsed();
    report(
        "01 savicky-product",
        all_hold && elapsed.as_secs() < 120,
        &format!("101 equalities, {elapsed:?}"),
    );
}

#[test]
fn criterion_02_gadget_sensitivity() {
    let caps = Caps::default();
    let mut rng = ChaCha20Rng::seed_from_u64(SEED);
    let mut violations = 0usize;
    let mut checks = 0usize;
    for index in 0..20 {
        let graph = match index % 4 {
            0 => gen_graph(GraphKind::Complete, 3 + index % 3, rng.gen()),
            1 => gen_graph(GraphKind::Cycle, 4 + index % 5, rng.gen()),
            2 => gen_graph(GraphKind::Path, 3 + index % 6, rng.gen()),
            _ => gen_graph(GraphKind::RandomRegular(3), 6 + 2 * (index % 2), rng.gen()),
        }
        .unwrap();
        assert!(graph.n() <= 8);
        for ell in [1usize, 2, 3] {
            let gadget = Gadget::new(graph.clone(), ell).unwrap();
            let f = gadget.hard_support().unwrap();
            checks += 1;
            if f.max_sensitivity() != 2 * (ell + 1) {
                violations += 1;
            }
            for x in f.ones() {
                for _ in 0..50 {
                    let tree = rand_tree(&mut rng, f.width(), 10);
                    let restricted = f.restrict(&tree.path_of(&x)).unwrap();
                    let cert = restricted.certificate_complexity(&x, caps.width).unwrap();
                    let sens = restricted.sensitivity_set(&x).unwrap().len();
                    checks += 1;
                    if cert != sens {
                        violations += 1;
                    }
                }
            }
        }
    }
    report(
        "02 gadget-sensitivity",
        violations == 0,
        &format!("{checks} exact checks over 20 graphs x ell in {{1,2,3}}, {violations} violations"),
    );
}

/// All graphs on up to `n` labeled vertices with at least one edge, one
/// representative per isomorphism class. The audited quantities are all
/// isomorphism-invariant.
fn graphs_up_to_iso(n: usize) -> Vec<Graph> {
    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 1 {
            return vec![vec![0]];
        }
        let mut out = Vec::new();
        for smaller in permutations(n - 1) {
            for slot in 0..n {
                let mut perm = smaller.clone();
                perm.insert(slot, n - 1);
                out.push(perm);
            }
        }
        out
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    let pair_index = |u: usize, v: usize| {
        pairs
            .iter()
            .position(|&p| p == (u.min(v), u.max(v)))
            .unwrap()
    };
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 1u32..(1 << pairs.len()) {
        let canon = perms
            .iter()
            .map(|perm| {
                let mut remapped = 0u32;
                for (i, &(u, v)) in pairs.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        remapped |= 1 << pair_index(perm[u], perm[v]);
                    }
                }
                remapped
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            out.push(Graph::new(n, edges).unwrap());
        }
    }
    out
}

#[test]
fn criterion_03_zero_error_bounds() {
    let caps = Caps::default();
    let mut instances = 0usize;
    let mut ok = true;
    let mut detail = String::new();
    for n in 2..=5usize {
        for graph in graphs_up_to_iso(n) {
            let (cover_size, cover) = exact_vertex_cover(&graph).unwrap();
            for ell in [1usize, 2] {
                let gadget = Gadget::new(graph.clone(), ell).unwrap();
                let f = gadget.hard_support().unwrap();
                let (opt, witness) = exact_dtsize(&f, &caps).unwrap();
                instances += 1;
                if !witness.is_exact_on(&f) {
                    ok = false;
                }
                if opt < (ell + 1) * (cover_size + graph.m()) {
                    ok = false;
                }
                let tree = vc_upper_tree(&gadget, &cover).unwrap();
                if !verify_gadget_tree_exact(&tree, &gadget).unwrap() {
                    ok = false;
                }
                if tree.size() > vc_upper_tree_bound(&gadget, cover_size) {
                    ok = false;
                }
                if n == 3 && graph.m() == 3 && ell == 1 {
                    // triangle anchors: lower bound 10, upper budget 19
                    let lb = (ell + 1) * (cover_size + graph.m());
                    let ub = vc_upper_tree_bound(&gadget, cover_size);
                    detail = format!("triangle anchors lb={lb} ub={ub} dtsize={opt}");
                    ok &= lb == 10 && ub == 19 && opt >= 10;
                }
            }
        }
    }
    report(
        "03 zero-error-bounds",
        ok,
        &format!("{instances} gadget instances over all graphs with n <= 5; {detail}"),
    );
}

#[test]
fn criterion_04_eps_error_lower_bound() {
    let start = Instant::now();
    let caps = Caps::default();
    let gadget = Gadget::new(gen_graph(GraphKind::Complete, 3, 0).unwrap(), 1).unwrap();
    let f = gadget.hard_support().unwrap();
    let pmf = canonical_hard_pmf(&f).unwrap().pmf;
    let curve = pareto_size_error(&f, &pmf, &caps).unwrap();
    // frozen by the exact solver: the zero-error optimum on this support
    assert_eq!(curve.zero_error_size(), 11);
    let mut ok = true;
    for (eps, threshold) in [
        (rat_int(0), 10usize),
        (rat(1, 24), 9),
        (rat(1, 12), 8),
        (rat(1, 8), 7),
    ] {
        let bound =
            rat_usize(2) * (rat_int(2) + (BigRational::one() - rat_usize(4) * &eps) * rat_int(3));
        assert_eq!(bound, rat_usize(threshold));
        for (size, err) in curve.points() {
            if err <= &eps && *size < threshold {
                ok = false;
            }
        }
    }
    let elapsed = start.elapsed();
    report(
        "04 eps-error-lb",
        ok && elapsed.as_secs() < 60,
        &format!("thresholds 10/9/8/7 against the exact curve, {elapsed:?}"),
    );
}

#[test]
fn criterion_05_hard_distribution() {
    let caps = Caps::default();
    let mut results = suite_harddist(200, SEED, &caps).unwrap();
    results.extend(suite_harddist_xor(50, SEED ^ 1, &caps).unwrap());
    let all_hold = results.iter().all(|r| r.holds());
    // anchor: constant-0 tree against the triangle gadget gives 1/2 = 1/2
    let gadget = Gadget::new(gen_graph(GraphKind::Complete, 3, 0).unwrap(), 1).unwrap();
    let f = gadget.hard_support().unwrap();
    let anchor = check_hard_dist(&DecisionTree::leaf(false), &f, &f.ones()).unwrap();
    let anchor_ok = match anchor.report() {
        Some(r) => r.lhs == rat(1, 2) && r.rhs == rat(1, 2) && r.holds,
        None => false,
    };
    report(
        "05 hard-distribution",
        all_hold && anchor_ok,
        &format!("{} randomized checks plus the 1/2 = 1/2 anchor", results.len()),
    );
}

#[test]
fn criterion_06_patch_up() {
    let caps = Caps::default();
    let mut results = suite_patchup(200, SEED, &caps).unwrap();
    results.extend(suite_patchup_xor(50, SEED ^ 1, &caps).unwrap());
    let all_hold = results.iter().all(|r| r.holds());
    report(
        "06 patch-up",
        all_hold,
        &format!("{} randomized checks incl. exactness audits", results.len()),
    );
}

#[test]
fn criterion_07_xor_lower_bound_curve() {
    let start = Instant::now();
    let caps = Caps::default();
    let gadget = Gadget::new(gen_graph(GraphKind::Complete, 3, 0).unwrap(), 1).unwrap();
    let f = gadget.hard_support().unwrap();
    let pmf = canonical_hard_pmf(&f).unwrap().pmf;
    let fxor = f.xor_power(2, caps.product_points).unwrap();
    let product = pmf.product(2, caps.product_points).unwrap();
    assert_eq!(product.len(), 225);
    let curve = pareto_size_error(&fxor, &product, &caps).unwrap();
    // the product of the single-block optimum with itself
    assert_eq!(curve.zero_error_size(), 121);
    let mut ok = true;
    for eps in [rat_int(0), rat(1, 128)] {
        // [ (ell+1)(k+m) ]^r - eps [ 8 m (ell+1) ]^r with r = 2
        let bound = rat_int(100) - &eps * rat_int(2304);
        for (size, err) in curve.points() {
            if err <= &eps && rat_usize(*size) < bound {
                ok = false;
            }
        }
    }
    let elapsed = start.elapsed();
    report(
        "07 xor-lower-bound",
        ok,
        &format!(
            "225-point product curve, thresholds 100 and 82, endpoint 121, {elapsed:?}"
        ),
    );
}

#[test]
fn criterion_08_parameter_inequalities() {
    let results = suite_params(1000, SEED).unwrap();
    let all_hold = results.iter().all(|r| r.holds());
    let graph = gen_graph(GraphKind::Complete, 3, 0).unwrap();
    let params = choose_params_plain(&graph, 2, &rat(1, 10), &rat_int(1), &rat_int(0)).unwrap();
    let anchor_ok = params.ell == 7 && params.s == num::BigInt::from(49);
    report(
        "08 parameter-inequalities",
        all_hold && anchor_ok,
        &format!(
            "{} randomized trials; anchor ell = {}, s = {}",
            results.len(),
            params.ell,
            params.s
        ),
    );
}

#[test]
fn criterion_09_end_to_end_reduction() {
    let start = Instant::now();
    let caps = Caps::default();
    let triangle = gen_graph(GraphKind::Complete, 3, 0).unwrap();

    // Yes instance: the triangle has a cover of size 2
    let params = choose_params_plain(&triangle, 2, &rat(1, 10), &rat_int(1), &rat_int(0)).unwrap();
    let (yes_plain, t1) = decide_vertex_cover(
        &triangle,
        2,
        LearnerKind::Oracle,
        &params,
        Mode::Plain,
        SEED,
        200_000,
        &caps,
    )
    .unwrap();
    println!("transcript yes/plain: {}", t1.to_json());

    let params_xor = choose_params_xor(
        &triangle,
        2,
        2,
        &rat(121, 100),
        &rat_int(1),
        &rat_int(0),
    )
    .unwrap();
    let (yes_xor, t2) = decide_vertex_cover(
        &triangle,
        2,
        LearnerKind::Oracle,
        &params_xor,
        Mode::Xor,
        SEED,
        200_000,
        &caps,
    )
    .unwrap();
    println!("transcript yes/xor: {}", t2.to_json());

    // No instance: two disjoint triangles, audited gap at k = 3
    let union = triangle.disjoint_union(&triangle);
    let (vc, _) = exact_vertex_cover(&union).unwrap();
    assert_eq!(vc, 4);
    let delta_prime = rat(1, 3);
    // audited: every cover has size >= (1 + 1/3) * 3 = 4 exactly
    assert!(rat_usize(vc) >= (BigRational::one() + &delta_prime) * rat_int(3));
    let no_params =
        choose_params_plain(&union, 3, &rat(1, 100), &delta_prime, &rat_int(0)).unwrap();
    let (no_plain, t3) = decide_vertex_cover(
        &union,
        3,
        LearnerKind::Oracle,
        &no_params,
        Mode::Plain,
        SEED,
        200_000,
        &caps,
    )
    .unwrap();
    println!("transcript no/plain: {}", t3.to_json());

    let no_params_xor = choose_params_xor(
        &union,
        3,
        2,
        &rat(10201, 10000),
        &delta_prime,
        &rat_int(0),
    )
    .unwrap();
    let (no_xor, t4) = decide_vertex_cover(
        &union,
        3,
        LearnerKind::Oracle,
        &no_params_xor,
        Mode::Xor,
        SEED,
        200_000,
        &caps,
    )
    .unwrap();
    println!("transcript no/xor: {}", t4.to_json());

    let elapsed = start.elapsed();
    let pass = yes_plain == Decision::Yes
        && yes_xor == Decision::Yes
        && no_plain == Decision::No
        && no_xor == Decision::No
        && elapsed.as_secs() < 300;
    report(
        "09 end-to-end-reduction",
        pass,
        &format!(
            "plain/xor yes = {yes_plain:?}/{yes_xor:?}, plain/xor no = {no_plain:?}/{no_xor:?}, {elapsed:?}"
        ),
    );
}

#[test]
fn criterion_10_coreset() {
    let caps = Caps::default();
    let results = suite_coreset(30, SEED, &caps).unwrap();
    let all_hold = results.iter().all(|r| r.holds());
    // anchor: OR of two bits
    let or2 = PartialFn::total(2, |x| x.get(0) || x.get(1)).unwrap();
    let h = dtlab::gadget::coreset(&or2).unwrap();
    let (opt, _) = exact_dtsize(&h, &caps).unwrap();
    report(
        "10 coreset",
        all_hold && opt == 3 && opt >= 2,
        &format!(
            "30 random monotone functions at eps in {{0, 1/16}}; anchor dtsize(H) = {opt} >= 2"
        ),
    );
}

#[test]
fn criterion_11_cutoff_trees() {
    let caps = Caps::default();
    let results = suite_cutoff(&caps).unwrap();
    let all_hold = results.iter().all(|r| r.holds());
    // tau = r entries must be exactly zero, and they are present
    let exact_rows = results
        .iter()
        .filter_map(|r| r.report())
        .filter(|r| r.name == "cutoff-exact-at-tau-r")
        .count();
    report(
        "11 cutoff-trees",
        all_hold && exact_rows == 4,
        &format!("{} checks over both graphs, r in {{2,3}}, all tau", results.len()),
    );
}

#[test]
fn criterion_12_bench_determinism() {
    let exe = env!("CARGO_BIN_EXE_dtlab");
    let run = || {
        std::process::Command::new(exe)
            .args(["bench", "--seed", "7"])
            .output()
            .expect("bench runs")
    };
    let first = run();
    let second = run();
    let pass = first.status.success()
        && second.status.success()
        && first.stdout == second.stdout
        && !first.stdout.is_empty();
    report(
        "12 bench-determinism",
        pass,
        &format!("{} identical bytes", first.stdout.len()),
    );
}

#[test]
fn xor_error_is_never_below_exact_error_zero() {
    // spot invariant: the exact product curve's first point matches the
    // single-leaf error of the product pmf mass split
    let caps = Caps::default();
    let gadget = Gadget::new(gen_graph(GraphKind::Complete, 3, 0).unwrap(), 1).unwrap();
    let f = gadget.hard_support().unwrap();
    let pmf = canonical_hard_pmf(&f).unwrap().pmf;
    let fxor = f.xor_power(2, caps.product_points).unwrap();
    let product = pmf.product(2, caps.product_points).unwrap();
    let curve = pareto_size_error(&fxor, &product, &caps).unwrap();
    let (size, err) = &curve.points()[0];
    assert_eq!(*size, 1);
    // exactly one edge block flips the label: mass 1/2 either way
    assert_eq!(err, &rat(1, 2));
    let zero = error_exact(&DecisionTree::leaf(false), &fxor, &product).unwrap();
    assert!(zero >= BigRational::zero() && !zero.is_zero());
}
