//! One executable check per inequality: both sides computed with exact
//! rationals, plus the parameter calculators for the two reductions.

use crate::boolfn::{BitVector, PartialFn, Restriction};
use crate::dtree::{error_exact, DecisionTree};
use crate::error::{Error, Result};
use crate::gadget::{canonical_hard_pmf_over, coreset, hard_subfunction, Gadget};
use crate::oracle::{exact_dtsize, exact_vertex_cover, ParetoSolver};
use crate::rat::{format_rat, nth_root_bounds, rat_pow, rat_usize};
use crate::Caps;
use num::{BigInt, BigRational, One, Signed, Zero};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Lt,
    Eq,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Lt => "<",
            Relation::Eq => "=",
        }
    }

    fn eval(self, lhs: &BigRational, rhs: &BigRational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Lt => lhs < rhs,
            Relation::Eq => lhs == rhs,
        }
    }
}

/// Both sides of one inequality instance, compared exactly.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub name: String,
    pub context: String,
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub relation: Relation,
    pub holds: bool,
}

impl BoundReport {
    pub fn new(
        name: impl Into<String>,
        context: impl Into<String>,
        lhs: BigRational,
        rhs: BigRational,
        relation: Relation,
    ) -> Self {
        let holds = relation.eval(&lhs, &rhs);
        BoundReport {
            name: name.into(),
            context: context.into(),
            lhs,
            rhs,
            relation,
            holds,
        }
    }
}

/// A check either produced a report or did not apply to the instance.
#[derive(Clone, Debug)]
pub enum CheckResult {
    Checked(BoundReport),
    NotApplicable {
        name: String,
        context: String,
        reason: String,
    },
}

impl CheckResult {
    pub fn holds(&self) -> bool {
        match self {
            CheckResult::Checked(report) => report.holds,
            CheckResult::NotApplicable { .. } => true,
        }
    }

    pub fn is_applicable(&self) -> bool {
        matches!(self, CheckResult::Checked(_))
    }

    pub fn report(&self) -> Option<&BoundReport> {
        match self {
            CheckResult::Checked(report) => Some(report),
            CheckResult::NotApplicable { .. } => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CheckResult::Checked(r) => json!({
                "name": r.name,
                "context": r.context,
                "lhs": format_rat(&r.lhs),
                "relation": r.relation.symbol(),
                "rhs": format_rat(&r.rhs),
                "holds": r.holds,
            }),
            CheckResult::NotApplicable {
                name,
                context,
                reason,
            } => json!({
                "name": name,
                "context": context,
                "status": "not_applicable",
                "reason": reason,
            }),
        }
    }
}

fn block_restriction(path: &Restriction, block: usize, n: usize) -> Restriction {
    let lo = block * n;
    let hi = lo + n;
    Restriction::from_pairs(
        &path
            .iter()
            .filter(|&(i, _)| i >= lo && i < hi)
            .map(|(i, b)| (i - lo, b))
            .collect::<Vec<_>>(),
    )
}

/// Error of `tree` under the canonical hard pmf built over `chosen` is at
/// least the mean restricted-sensitivity of the chosen 1-inputs.
pub fn check_hard_dist(
    tree: &DecisionTree,
    f: &PartialFn,
    chosen: &[BitVector],
) -> Result<CheckResult> {
    let name = "hard-distribution";
    if f.is_constant() {
        return Err(Error::ConstantFunction);
    }
    let sub = hard_subfunction(f, chosen)?;
    let context = format!("width {}, |C| = {}, |T| = {}", f.width(), chosen.len(), tree.size());
    let sens = sub.max_sensitivity();
    if sens == 0 {
        return Ok(CheckResult::NotApplicable {
            name: name.into(),
            context,
            reason: "every chosen input is insensitive".into(),
        });
    }
    let pmf = canonical_hard_pmf_over(&sub, chosen)?.pmf;
    let lhs = error_exact(tree, &sub, &pmf)?;
    let mut total = BigInt::zero();
    for x in chosen {
        let restricted = sub.restrict(&tree.path_of(x))?;
        total += BigInt::from(restricted.sensitivity_set(x)?.len());
    }
    let rhs = BigRational::new(total, BigInt::from(2 * chosen.len() * sens));
    Ok(CheckResult::Checked(BoundReport::new(
        name,
        context,
        lhs,
        rhs,
        Relation::Ge,
    )))
}

/// XOR form of the hard-distribution bound: error under the r-fold product
/// pmf is at least the scaled sum over chosen tuples whose restricted
/// product function is still sensitive somewhere.
pub fn check_hard_dist_xor(
    tree: &DecisionTree,
    f: &PartialFn,
    chosen: &[BitVector],
    r: usize,
    caps: &Caps,
) -> Result<CheckResult> {
    let name = "hard-distribution-xor";
    if f.is_constant() {
        return Err(Error::ConstantFunction);
    }
    let sub = hard_subfunction(f, chosen)?;
    let n = sub.width();
    let context = format!(
        "width {}, |C| = {}, r = {}, |T| = {}",
        n,
        chosen.len(),
        r,
        tree.size()
    );
    let sens = sub.max_sensitivity();
    if sens == 0 {
        return Ok(CheckResult::NotApplicable {
            name: name.into(),
            context,
            reason: "every chosen input is insensitive".into(),
        });
    }
    let pmf = canonical_hard_pmf_over(&sub, chosen)?.pmf;
    let product = pmf.product(r, caps.product_points)?;
    let fxor = sub.xor_power(r, caps.product_points)?;
    let lhs = error_exact(tree, &fxor, &product)?;

    let mut total = BigInt::zero();
    let mut tuple = vec![0usize; r];
    loop {
        let mut full = BitVector::zeros(0);
        for &idx in &tuple {
            full = full.concat(&chosen[idx]);
        }
        let path = tree.path_of(&full);
        let mut product_term = BigInt::one();
        let mut some_sensitive = false;
        for (i, &idx) in tuple.iter().enumerate() {
            let restricted = sub.restrict(&block_restriction(&path, i, n))?;
            let s = restricted.sensitivity_set(&chosen[idx])?.len();
            if s > 0 {
                some_sensitive = true;
            }
            product_term *= BigInt::from(s.max(1));
        }
        if some_sensitive {
            total += product_term;
        }
        // advance the tuple counter
        let mut pos = r;
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < chosen.len() {
                break;
            }
            tuple[pos] = 0;
        }
        if tuple.iter().all(|&t| t == 0) {
            break;
        }
    }
    let denom = BigInt::from(2 * chosen.len() * sens).pow(r as u32);
    let rhs = BigRational::new(total, denom);
    Ok(CheckResult::Checked(BoundReport::new(
        name,
        context,
        lhs,
        rhs,
        Relation::Ge,
    )))
}

/// Optimal size is at most `|T|` plus the per-1-input certificate costs of
/// the subfunctions at the leaves `T` sends them to.
pub fn check_patch_up(tree: &DecisionTree, f: &PartialFn, caps: &Caps) -> Result<CheckResult> {
    let (opt, _) = exact_dtsize(f, caps)?;
    let mut rhs = BigInt::from(tree.size());
    for x in f.ones() {
        let restricted = f.restrict(&tree.path_of(&x))?;
        rhs += BigInt::from(restricted.certificate_complexity(&x, caps.width)?);
    }
    let context = format!("width {}, |D| = {}, |T| = {}", f.width(), f.len(), tree.size());
    Ok(CheckResult::Checked(BoundReport::new(
        "patch-up",
        context,
        rat_usize(opt),
        BigRational::from_integer(rhs),
        Relation::Le,
    )))
}

/// XOR form of the patch-up bound, with the nonconstant-leaf filter, the
/// `max(1, .)` factors, and the `2^r` multiplier.
///
/// The right-hand side is accumulated per leaf path: a nonconstant leaf
/// contributes the product over blocks of the summed per-1-input
/// certificate costs of that block's subfunction, where a block whose
/// subfunction has no 1-inputs left contributes a factor of 1. On
/// instances where every nonconstant leaf keeps a 1-input alive in every
/// block this equals the sum over 1-input tuples of the per-block
/// certificate products; in general the factor-1 floor is what the
/// underlying block-by-block decomposition actually supports, and
/// [`tuple_patch_up_xor_rhs`] (the unfloored tuple sum) can undershoot the
/// true optimum.
pub fn check_patch_up_xor(
    tree: &DecisionTree,
    f: &PartialFn,
    r: usize,
    caps: &Caps,
) -> Result<CheckResult> {
    let n = f.width();
    let fxor = f.xor_power(r, caps.product_points)?;
    let (opt, _) = exact_dtsize(&fxor, caps)?;
    let mut sum = BigInt::zero();
    for (path, _) in tree.leaves_with_paths() {
        if fxor.restrict(&path)?.is_constant() {
            continue;
        }
        let mut product_term = BigInt::one();
        for block in 0..r {
            let restricted = f.restrict(&block_restriction(&path, block, n))?;
            let mut block_sum = BigInt::zero();
            for x in restricted.ones() {
                let c = restricted.certificate_complexity(&x, caps.width)?;
                block_sum += BigInt::from(c.max(1));
            }
            product_term *= block_sum.max(BigInt::one());
        }
        sum += product_term;
    }
    let rhs = BigInt::from(tree.size()) + (BigInt::one() << r) * sum;
    let context = format!(
        "width {}, |D| = {}, r = {}, |T| = {}",
        n,
        f.len(),
        r,
        tree.size()
    );
    Ok(CheckResult::Checked(BoundReport::new(
        "patch-up-xor",
        context,
        rat_usize(opt),
        BigRational::from_integer(rhs),
        Relation::Le,
    )))
}

/// The sum over 1-input tuples with nonconstant restricted product, of
/// the per-block `max(1, certificate)` products -- the unfloored tuple
/// form of the XOR patch-up right-hand side. Exposed so the degenerate
/// gap between the two forms stays executable.
pub fn tuple_patch_up_xor_rhs(
    tree: &DecisionTree,
    f: &PartialFn,
    r: usize,
    caps: &Caps,
) -> Result<BigInt> {
    let n = f.width();
    let fxor = f.xor_power(r, caps.product_points)?;
    let ones = f.ones();
    let mut sum = BigInt::zero();
    if !ones.is_empty() {
        let mut tuple = vec![0usize; r];
        loop {
            let mut full = BitVector::zeros(0);
            for &idx in &tuple {
                full = full.concat(&ones[idx]);
            }
            let path = tree.path_of(&full);
            if !fxor.restrict(&path)?.is_constant() {
                let mut product_term = BigInt::one();
                for (i, &idx) in tuple.iter().enumerate() {
                    let restricted = f.restrict(&block_restriction(&path, i, n))?;
                    let c = restricted.certificate_complexity(&ones[idx], caps.width)?;
                    product_term *= BigInt::from(c.max(1));
                }
                sum += product_term;
            }
            let mut pos = r;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                tuple[pos] += 1;
                if tuple[pos] < ones.len() {
                    break;
                }
                tuple[pos] = 0;
            }
            if tuple.iter().all(|&t| t == 0) {
                break;
            }
        }
    }
    Ok(BigInt::from(tree.size()) + (BigInt::one() << r) * sum)
}

/// Size lower bound for a tree that eps-approximates the gadget under its
/// canonical hard pmf: `|T| >= (ell+1)(k' + (1-4 eps) m)`.
pub fn check_gadget_lb(
    tree: &DecisionTree,
    gadget: &Gadget,
    eps: &BigRational,
) -> Result<CheckResult> {
    let name = "gadget-size-lb";
    let f = gadget.hard_support()?;
    let pmf = crate::gadget::canonical_hard_pmf(&f)?.pmf;
    let err = error_exact(tree, &f, &pmf)?;
    let context = format!(
        "n {}, m {}, ell {}, |T| = {}, eps = {}",
        gadget.graph.n(),
        gadget.graph.m(),
        gadget.ell,
        tree.size(),
        format_rat(eps)
    );
    if &err > eps {
        return Ok(CheckResult::NotApplicable {
            name: name.into(),
            context,
            reason: format!("tree error {} exceeds eps", format_rat(&err)),
        });
    }
    let (cover_size, _) = exact_vertex_cover(&gadget.graph)?;
    let ell1 = rat_usize(gadget.ell + 1);
    let m = rat_usize(gadget.graph.m());
    let rhs = ell1 * (rat_usize(cover_size) + (BigRational::one() - rat_usize(4) * eps) * m);
    Ok(CheckResult::Checked(BoundReport::new(
        name,
        context,
        rat_usize(tree.size()),
        rhs,
        Relation::Ge,
    )))
}

/// XOR form: `|T| >= [(ell+1)(k+m)]^r - eps [8 m (ell+1)]^r` for a tree
/// that eps-approximates the r-fold XOR under the product pmf.
pub fn check_gadget_lb_xor(
    tree: &DecisionTree,
    gadget: &Gadget,
    r: usize,
    eps: &BigRational,
    caps: &Caps,
) -> Result<CheckResult> {
    let name = "gadget-size-lb-xor";
    let f = gadget.hard_support()?;
    let pmf = crate::gadget::canonical_hard_pmf(&f)?.pmf;
    let product = pmf.product(r, caps.product_points)?;
    let fxor = f.xor_power(r, caps.product_points)?;
    let err = error_exact(tree, &fxor, &product)?;
    let context = format!(
        "n {}, m {}, ell {}, r {}, |T| = {}, eps = {}",
        gadget.graph.n(),
        gadget.graph.m(),
        gadget.ell,
        r,
        tree.size(),
        format_rat(eps)
    );
    if &err > eps {
        return Ok(CheckResult::NotApplicable {
            name: name.into(),
            context,
            reason: format!("tree error {} exceeds eps", format_rat(&err)),
        });
    }
    let (cover_size, _) = exact_vertex_cover(&gadget.graph)?;
    let ell1 = gadget.ell + 1;
    let m = gadget.graph.m();
    let main = rat_usize(ell1 * (cover_size + m));
    let loss = rat_usize(8 * m * ell1);
    let rhs = rat_pow(&main, r as u32) - eps * rat_pow(&loss, r as u32);
    Ok(CheckResult::Checked(BoundReport::new(
        name,
        context,
        rat_usize(tree.size()),
        rhs,
        Relation::Ge,
    )))
}

/// The parameter calculation behind both reductions: under `m <= dk` and a
/// sufficiently large cover gap, the padded upper bound stays strictly
/// below the padded lower bound.
#[allow(clippy::too_many_arguments)]
pub fn check_param_inequality(
    delta: &BigRational,
    delta_prime: &BigRational,
    alpha: &BigRational,
    ell: usize,
    m: usize,
    n: usize,
    k: usize,
    d: usize,
) -> CheckResult {
    let name = "param-inequality";
    let context = format!(
        "delta {}, delta' {}, alpha {}, ell {ell}, m {m}, n {n}, k {k}, d {d}",
        format_rat(delta),
        format_rat(delta_prime),
        format_rat(alpha),
    );
    if m > d * k {
        return CheckResult::NotApplicable {
            name: name.into(),
            context,
            reason: format!("m = {m} exceeds d*k = {}", d * k),
        };
    }
    let one = BigRational::one();
    let threshold = (delta + alpha) * rat_usize(d)
        + delta
        + (&one + delta) * rat_usize(m * n) / rat_usize(k * (ell + 1));
    if delta_prime <= &threshold {
        return CheckResult::NotApplicable {
            name: name.into(),
            context,
            reason: format!("delta' must exceed {}", format_rat(&threshold)),
        };
    }
    let lhs = (&one + delta) * rat_usize((ell + 1) * (k + m) + m * n);
    let rhs = rat_usize(ell + 1)
        * ((&one + delta_prime) * rat_usize(k) + (&one - alpha) * rat_usize(m));
    CheckResult::Checked(BoundReport::new(name, context, lhs, rhs, Relation::Lt))
}

/// `a^r - b^r >= (a - b)^r` for rationals `a >= b > 0`.
pub fn check_power_inequality(a: &BigRational, b: &BigRational, r: u32) -> CheckResult {
    let name = "power-inequality";
    let context = format!("a {}, b {}, r {r}", format_rat(a), format_rat(b));
    if !(a >= b && b > &BigRational::zero() && r >= 1) {
        return CheckResult::NotApplicable {
            name: name.into(),
            context,
            reason: "needs a >= b > 0 and r >= 1".into(),
        };
    }
    let lhs = rat_pow(a, r) - rat_pow(b, r);
    let rhs = rat_pow(&(a - b), r);
    CheckResult::Checked(BoundReport::new(name, context, lhs, rhs, Relation::Ge))
}

/// Everything the vertex-cover reduction needs to run on one instance.
#[derive(Clone, Debug)]
pub struct ReductionParams {
    pub delta: BigRational,
    pub delta_prime: BigRational,
    pub eps: BigRational,
    pub degree: usize,
    pub k: usize,
    pub ell: usize,
    pub r: usize,
    /// Allowed hypothesis blow-up: `1 + delta` for the plain reduction,
    /// `A` for the XOR reduction.
    pub amplification: BigRational,
    /// Size budget: `(ell+1)(k+m) + mn`, raised to `r` in XOR mode.
    pub s: BigInt,
}

impl ReductionParams {
    pub fn size_threshold(&self) -> BigRational {
        &self.amplification * BigRational::from_integer(self.s.clone())
    }
}

fn minimal_ell(
    margin: &BigRational,
    delta: &BigRational,
    m: usize,
    n: usize,
    k: usize,
) -> Result<usize> {
    const ELL_CAP: u64 = 1_000_000;
    if margin <= &BigRational::zero() {
        return Err(Error::NoFeasibleEll { cap: ELL_CAP });
    }
    // smallest ell >= 1 with (ell + 1) > (1 + delta) m n / (k * margin);
    // floor(bound) + 1 clears a strict inequality whether or not the
    // bound is an integer
    let bound = (BigRational::one() + delta) * rat_usize(m * n) / (rat_usize(k) * margin);
    let mut ell_plus_1 = bound.floor().to_integer() + 1;
    if ell_plus_1 < BigInt::from(2) {
        ell_plus_1 = BigInt::from(2);
    }
    let ell = (&ell_plus_1 - 1u8)
        .try_into()
        .map_err(|_| Error::NoFeasibleEll { cap: ELL_CAP })
        .and_then(|ell: u64| {
            if ell > ELL_CAP {
                Err(Error::NoFeasibleEll { cap: ELL_CAP })
            } else {
                Ok(ell as usize)
            }
        })?;
    Ok(ell)
}

/// Chooses the minimal padding parameter and size budget for the plain
/// reduction, re-verifying the defining inequality before returning.
pub fn choose_params_plain(
    graph: &crate::gadget::Graph,
    k: usize,
    delta: &BigRational,
    delta_prime: &BigRational,
    eps: &BigRational,
) -> Result<ReductionParams> {
    assert!(k >= 1);
    let (m, n, d) = (graph.m(), graph.n(), graph.max_degree());
    let alpha = rat_usize(4) * eps;
    let margin = delta_prime - (delta + &alpha) * rat_usize(d) - delta;
    let ell = minimal_ell(&margin, delta, m, n, k)?;
    let params = ReductionParams {
        delta: delta.clone(),
        delta_prime: delta_prime.clone(),
        eps: eps.clone(),
        degree: d,
        k,
        ell,
        r: 1,
        amplification: BigRational::one() + delta,
        s: BigInt::from((ell + 1) * (k + m) + m * n),
    };
    verify_chosen_ell(delta, delta_prime, &alpha, ell, m, n, k, d)?;
    Ok(params)
}

/// The chosen ell must clear the margin condition, and whenever the
/// parameter proposition applies (`m <= dk`) it must hold outright.
#[allow(clippy::too_many_arguments)]
fn verify_chosen_ell(
    delta: &BigRational,
    delta_prime: &BigRational,
    alpha: &BigRational,
    ell: usize,
    m: usize,
    n: usize,
    k: usize,
    d: usize,
) -> Result<()> {
    let threshold = (delta + alpha) * rat_usize(d)
        + delta
        + (BigRational::one() + delta) * rat_usize(m * n) / rat_usize(k * (ell + 1));
    if delta_prime <= &threshold {
        return Err(Error::Infeasible(
            "chosen parameters fail their defining inequality".into(),
        ));
    }
    if m <= d * k {
        let check = check_param_inequality(delta, delta_prime, alpha, ell, m, n, k, d);
        if !(check.is_applicable() && check.holds()) {
            return Err(Error::Infeasible(
                "chosen parameters fail the size-gap inequality".into(),
            ));
        }
    }
    Ok(())
}

/// XOR-mode parameter choice. `delta` is the conservative upper round of
/// `A^(1/r) - 1` (exact when `A` is a perfect r-th power), the error root
/// is rounded up as well, and the budget is `[(ell+1)(k+m) + mn]^r`.
pub fn choose_params_xor(
    graph: &crate::gadget::Graph,
    k: usize,
    r: usize,
    amplification: &BigRational,
    delta_prime: &BigRational,
    eps: &BigRational,
) -> Result<ReductionParams> {
    assert!(k >= 1 && r >= 1);
    if amplification <= &BigRational::one() {
        return Err(Error::Infeasible("amplification must exceed 1".into()));
    }
    if eps.is_negative() {
        return Err(Error::Infeasible("eps must be nonnegative".into()));
    }
    let budget = BigRational::new(BigInt::one(), BigInt::one() << (3 * r));
    if eps >= &budget {
        return Err(Error::EpsTooLarge);
    }
    let (m, n, d) = (graph.m(), graph.n(), graph.max_degree());
    let (_, a_root_up) = nth_root_bounds(amplification, r as u32);
    let delta = a_root_up - BigRational::one();
    let (_, eps_root_up) = nth_root_bounds(eps, r as u32);
    let alpha = rat_usize(8) * &eps_root_up;
    let margin = delta_prime - (&delta + &alpha) * rat_usize(d) - &delta;
    let ell = minimal_ell(&margin, &delta, m, n, k)?;
    let base = BigInt::from((ell + 1) * (k + m) + m * n);
    let params = ReductionParams {
        delta: delta.clone(),
        delta_prime: delta_prime.clone(),
        eps: eps.clone(),
        degree: d,
        k,
        ell,
        r,
        amplification: amplification.clone(),
        s: base.pow(r as u32),
    };
    verify_chosen_ell(&delta, delta_prime, &alpha, ell, m, n, k, d)?;
    Ok(params)
}

/// Coreset reports for a monotone function: the minterm-count lower bound,
/// its `s/n` reformulation, and the distributional variant at each `eps`.
pub fn check_coreset(
    f: &PartialFn,
    eps_list: &[BigRational],
    caps: &Caps,
) -> Result<Vec<CheckResult>> {
    let minterms = f.minterms()?;
    let core = coreset(f)?;
    let mut out = Vec::new();
    // shared neighbors make |H| smaller than the minterm-count times
    // sensitivity product, so both are recorded
    let context = format!(
        "width {}, minterms {}, |H| = {} (product bound {})",
        f.width(),
        minterms.len(),
        core.len(),
        minterms.len() * (f.max_sensitivity() + 1)
    );
    if minterms.is_empty() {
        out.push(CheckResult::NotApplicable {
            name: "coreset-minterm-lb".into(),
            context,
            reason: "constant-0 function has an empty coreset".into(),
        });
        return Ok(out);
    }
    let (opt, _) = exact_dtsize(&core, caps)?;
    out.push(CheckResult::Checked(BoundReport::new(
        "coreset-minterm-lb",
        context.clone(),
        rat_usize(opt),
        rat_usize(minterms.len()),
        Relation::Ge,
    )));
    // with s the optimal size over H, every exact tree over H has size
    // >= s/n; emitted for completeness even though s >= s/n is immediate
    out.push(CheckResult::Checked(BoundReport::new(
        "coreset-size-over-n",
        context.clone(),
        rat_usize(opt),
        rat_usize(opt) / rat_usize(f.width()),
        Relation::Ge,
    )));
    let sens = f.max_sensitivity();
    let pmf = canonical_hard_pmf_over(&core, &minterms)?.pmf;
    let mut solver = ParetoSolver::new(&core, &pmf, caps)?;
    let curve = solver.curve()?;
    for eps in eps_list {
        let rhs =
            (BigRational::one() - rat_usize(sens) * eps) * rat_usize(minterms.len());
        // every curve point with error <= eps must clear the bound; the
        // smallest such size is the binding one
        for (size, err) in curve.points() {
            if err <= eps {
                out.push(CheckResult::Checked(BoundReport::new(
                    "coreset-distributional",
                    format!("{context}, eps = {}, curve point ({size}, {})", format_rat(eps), format_rat(err)),
                    rat_usize(*size),
                    rhs.clone(),
                    Relation::Ge,
                )));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dtree::patch_up_certificates;
    use crate::gadget::{gen_graph, GraphKind};
    use crate::rat::{rat, rat_int};
    use rand::SeedableRng;

    fn k3_gadget() -> Gadget {
        Gadget::new(gen_graph(GraphKind::Complete, 3, 0).unwrap(), 1).unwrap()
    }

    #[test]
    fn hard_dist_constant_zero_tree_gives_half_half() {
        let gadget = k3_gadget();
        let f = gadget.hard_support().unwrap();
        let chosen = f.ones();
        let result = check_hard_dist(&DecisionTree::leaf(false), &f, &chosen).unwrap();
        let report = result.report().unwrap();
        assert_eq!(report.lhs, rat(1, 2));
        assert_eq!(report.rhs, rat(1, 2));
        assert!(report.holds);
    }

    #[test]
    fn hard_dist_exact_tree_gives_zero_both_sides() {
        let gadget = k3_gadget();
        let f = gadget.hard_support().unwrap();
        let tree = patch_up_certificates(&f, 32).unwrap();
        let result = check_hard_dist(&tree, &f, &f.ones()).unwrap();
        let report = result.report().unwrap();
        assert!(report.lhs.is_zero());
        assert!(report.rhs.is_zero());
        assert!(report.holds);
    }

    #[test]
    fn hard_dist_holds_on_random_trees() {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(21);
        let gadget = k3_gadget();
        let f = gadget.hard_support().unwrap();
        let ones = f.ones();
        for _ in 0..40 {
            let tree = crate::sample::rand_tree(&mut rng, f.width(), 12);
            let result = check_hard_dist(&tree, &f, &ones).unwrap();
            assert!(result.holds(), "{:?}", result.to_json());
        }
    }

    #[test]
    fn hard_dist_xor_exact_tree_is_zero_zero() {
        let gadget = Gadget::new(Graph2::single_edge(), 1).unwrap();
        let f = gadget.hard_support().unwrap();
        let chosen = f.ones();
        let fxor = f.xor_power(2, 1_000_000).unwrap();
        let (_, tree) = exact_dtsize(&fxor, &Caps::default()).unwrap();
        let result = check_hard_dist_xor(&tree, &f, &chosen, 2, &Caps::default()).unwrap();
        let report = result.report().unwrap();
        assert!(report.lhs.is_zero() && report.rhs.is_zero());
    }

    // small helper namespace to keep the test above readable
    struct Graph2;
    impl Graph2 {
        fn single_edge() -> crate::gadget::Graph {
            crate::gadget::Graph::new(2, [(0, 1)]).unwrap()
        }
    }

    #[test]
    fn hard_dist_xor_constant_zero_tree_single_edge() {
        let gadget = Gadget::new(Graph2::single_edge(), 1).unwrap();
        let f = gadget.hard_support().unwrap();
        let result = check_hard_dist_xor(
            &DecisionTree::leaf(false),
            &f,
            &f.ones(),
            2,
            &Caps::default(),
        )
        .unwrap();
        assert!(result.holds(), "{:?}", result.to_json());
    }

    #[test]
    fn patch_up_leaf_zero_and3_holds_with_equality() {
        let f = crate::boolfn::PartialFn::total(3, |x| x.get(0) && x.get(1) && x.get(2)).unwrap();
        let result = check_patch_up(&DecisionTree::leaf(false), &f, &Caps::default()).unwrap();
        let report = result.report().unwrap();
        assert_eq!(report.lhs, rat_int(4));
        assert_eq!(report.rhs, rat_int(4)); // 1 + Cert(f, 111)
        assert!(report.holds);
    }

    #[test]
    fn tuple_patch_up_rhs_can_undershoot_the_optimum() {
        // the identity function on one bit: its two-fold XOR is two-bit
        // parity with optimal size 4. A three-leaf tree that fully fixes
        // the path of the only 1-input tuple leaves the tuple sum empty,
        // so the unfloored tuple form bottoms out at |T| = 3 < 4, while
        // the per-path form keeps the factor-1 floor and stays valid.
        let f = crate::boolfn::PartialFn::total(1, |x| x.get(0)).unwrap();
        let tree = DecisionTree::new(crate::dtree::Node::Query {
            index: 0,
            lo: Box::new(crate::dtree::Node::Leaf(false)),
            hi: Box::new(crate::dtree::Node::Query {
                index: 1,
                lo: Box::new(crate::dtree::Node::Leaf(true)),
                hi: Box::new(crate::dtree::Node::Leaf(false)),
            }),
        });
        let caps = Caps::default();
        let fxor = f.xor_power(2, caps.product_points).unwrap();
        let (opt, _) = exact_dtsize(&fxor, &caps).unwrap();
        assert_eq!(opt, 4);
        let tuple_rhs = tuple_patch_up_xor_rhs(&tree, &f, 2, &caps).unwrap();
        assert_eq!(tuple_rhs, num::BigInt::from(3));
        assert!(rat_int(4) > BigRational::from_integer(tuple_rhs));
        // the per-path form holds: 3 + 2^2 * (1 * 1) = 7 >= 4
        let checked = check_patch_up_xor(&tree, &f, 2, &caps).unwrap();
        let report = checked.report().unwrap();
        assert_eq!(report.rhs, rat_int(7));
        assert!(report.holds);
    }

    #[test]
    fn patch_up_xor_forms_coincide_without_dead_blocks() {
        // when every nonconstant leaf keeps a 1-input alive per block the
        // per-path and tuple forms are the same number
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(99);
        let caps = Caps::default();
        let mut coincided = 0;
        for _ in 0..40 {
            let f = crate::sample::rand_nonconstant_fn(&mut rng, 2, 4);
            let tree = crate::sample::rand_tree(&mut rng, 4, 6);
            let fxor = f.xor_power(2, caps.product_points).unwrap();
            let mut degenerate = false;
            for (path, _) in tree.leaves_with_paths() {
                if fxor.restrict(&path).unwrap().is_constant() {
                    continue;
                }
                for block in 0..2 {
                    let sub = f
                        .restrict(&super::block_restriction(&path, block, 2))
                        .unwrap();
                    if sub.ones().is_empty() {
                        degenerate = true;
                    }
                }
            }
            if degenerate {
                continue;
            }
            coincided += 1;
            let tuple_rhs = tuple_patch_up_xor_rhs(&tree, &f, 2, &caps).unwrap();
            let checked = check_patch_up_xor(&tree, &f, 2, &caps).unwrap();
            assert_eq!(
                checked.report().unwrap().rhs,
                BigRational::from_integer(tuple_rhs)
            );
        }
        assert!(coincided > 5);
    }

    #[test]
    fn param_inequality_anchor_and_precondition() {
        // K3 values with ell = 7 satisfy both precondition and inequality
        let result = check_param_inequality(
            &rat(1, 10),
            &rat_int(1),
            &rat_int(0),
            7,
            3,
            3,
            2,
            2,
        );
        assert!(result.is_applicable() && result.holds());
        // ell = 1 violates the precondition
        let result = check_param_inequality(
            &rat(1, 10),
            &rat_int(1),
            &rat_int(0),
            1,
            3,
            3,
            2,
            2,
        );
        assert!(!result.is_applicable());
        // alpha = 1 with a huge delta' holds: the rhs is carried by k
        let result = check_param_inequality(
            &rat(1, 10),
            &rat_int(100),
            &rat_int(1),
            7,
            3,
            3,
            2,
            2,
        );
        assert!(result.is_applicable() && result.holds());
    }

    #[test]
    fn power_inequality_cases() {
        let r = check_power_inequality(&rat_int(3), &rat_int(1), 2);
        let report = r.report().unwrap();
        assert_eq!(report.lhs, rat_int(8));
        assert_eq!(report.rhs, rat_int(4));
        assert!(report.holds);
        let r = check_power_inequality(&rat_int(2), &rat_int(2), 3);
        let report = r.report().unwrap();
        assert_eq!(report.lhs, rat_int(0));
        assert!(report.holds);
        assert!(!check_power_inequality(&rat_int(1), &rat_int(2), 2).is_applicable());
    }

    #[test]
    fn choose_params_plain_k3_anchor() {
        let graph = gen_graph(GraphKind::Complete, 3, 0).unwrap();
        let params =
            choose_params_plain(&graph, 2, &rat(1, 10), &rat_int(1), &rat_int(0)).unwrap();
        assert_eq!(params.ell, 7);
        assert_eq!(params.s, num::BigInt::from(49));
        assert_eq!(params.amplification, rat(11, 10));
    }

    #[test]
    fn choose_params_xor_specializes_to_plain_at_r1() {
        let graph = gen_graph(GraphKind::Complete, 3, 0).unwrap();
        // A = 1 + delta and eps = 0 reduce to the plain computation
        let params = choose_params_xor(
            &graph,
            2,
            1,
            &rat(11, 10),
            &rat_int(1),
            &rat_int(0),
        )
        .unwrap();
        assert_eq!(params.ell, 7);
        assert_eq!(params.s, num::BigInt::from(49));
    }

    #[test]
    fn choose_params_xor_rejects_large_eps() {
        let graph = gen_graph(GraphKind::Complete, 3, 0).unwrap();
        // eps = 2^-3r exactly is too large, strictness matters
        let result = choose_params_xor(
            &graph,
            2,
            2,
            &rat(121, 100),
            &rat_int(1),
            &rat(1, 64),
        );
        assert!(matches!(result, Err(Error::EpsTooLarge)));
        // eps with an exact square root: alpha = 8/100, minimal ell is 9
        let ok = choose_params_xor(&graph, 2, 2, &rat(121, 100), &rat_int(1), &rat(1, 10_000));
        assert!(ok.is_ok());
        assert_eq!(ok.unwrap().ell, 9);
    }

    #[test]
    fn coreset_checks_on_or2_and_and3() {
        let or2 = crate::boolfn::PartialFn::total(2, |x| x.get(0) || x.get(1)).unwrap();
        let results = check_coreset(&or2, &[rat_int(0)], &Caps::default()).unwrap();
        let first = results[0].report().unwrap();
        assert_eq!(first.lhs, rat_int(3));
        assert_eq!(first.rhs, rat_int(2));
        assert!(results.iter().all(|r| r.holds()));
        let and3 =
            crate::boolfn::PartialFn::total(3, |x| x.get(0) && x.get(1) && x.get(2)).unwrap();
        let results = check_coreset(&and3, &[rat_int(0), rat(1, 16)], &Caps::default()).unwrap();
        let first = results[0].report().unwrap();
        assert_eq!(first.lhs, rat_int(4));
        assert_eq!(first.rhs, rat_int(1));
        assert!(results.iter().all(|r| r.holds()));
    }

    #[test]
    fn gadget_lb_not_applicable_when_error_exceeds_budget() {
        let gadget = k3_gadget();
        // the constant-0 tree has error 1/2 > 1/4
        let result =
            check_gadget_lb(&DecisionTree::leaf(false), &gadget, &rat(1, 4)).unwrap();
        assert!(!result.is_applicable());
    }

    #[test]
    fn gadget_lb_holds_for_the_optimal_tree() {
        let gadget = k3_gadget();
        let f = gadget.hard_support().unwrap();
        let (_, tree) = exact_dtsize(&f, &Caps::default()).unwrap();
        let result = check_gadget_lb(&tree, &gadget, &rat_int(0)).unwrap();
        let report = result.report().unwrap();
        assert_eq!(report.rhs, rat_int(10)); // (ell+1)(k'+m) = 2*(2+3)
        assert!(report.holds);
    }

    #[test]
    fn gadget_lb_xor_on_a_stacked_optimal_pair() {
        let caps = Caps::default();
        let gadget = k3_gadget();
        let f = gadget.hard_support().unwrap();
        let (_, block) = exact_dtsize(&f, &caps).unwrap();
        let stacked = crate::dtree::stacked_xor_tree(&[&block, &block], &[6, 6]).unwrap();
        let result = check_gadget_lb_xor(&stacked, &gadget, 2, &rat_int(0), &caps).unwrap();
        let report = result.report().unwrap();
        assert_eq!(report.rhs, rat_int(100)); // [(ell+1)(k+m)]^2 with eps 0
        assert_eq!(report.lhs, rat_int(121)); // 11^2, the product optimum
        assert!(report.holds);
        // a tree whose error exceeds the budget is out of scope
        let result = check_gadget_lb_xor(
            &DecisionTree::leaf(false),
            &gadget,
            2,
            &rat(1, 128),
            &caps,
        )
        .unwrap();
        assert!(!result.is_applicable());
    }
}
