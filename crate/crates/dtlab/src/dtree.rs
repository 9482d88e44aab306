//! Binary decision trees, exact error under a pmf, stacked XOR trees, and
//! the certificate patch-up constructions.

use crate::boolfn::{BitVector, PartialFn, Restriction};
use crate::error::{Error, Result};
use crate::rat::{format_rat, parse_rat};
use num::{BigRational, One, Zero};
use serde_json::{json, Value};

/// A decision tree node. `lo` is the 0-branch, `hi` the 1-branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Leaf(bool),
    Query {
        index: usize,
        lo: Box<Node>,
        hi: Box<Node>,
    },
}

/// A binary query tree. Size is the number of leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionTree {
    root: Node,
}

impl DecisionTree {
    pub fn leaf(label: bool) -> Self {
        DecisionTree {
            root: Node::Leaf(label),
        }
    }

    pub fn new(root: Node) -> Self {
        DecisionTree { root }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn size(&self) -> usize {
        fn leaves(node: &Node) -> usize {
            match node {
                Node::Leaf(_) => 1,
                Node::Query { lo, hi, .. } => leaves(lo) + leaves(hi),
            }
        }
        leaves(&self.root)
    }

    /// Largest queried index plus one; 0 for a bare leaf.
    pub fn min_width(&self) -> usize {
        fn walk(node: &Node) -> usize {
            match node {
                Node::Leaf(_) => 0,
                Node::Query { index, lo, hi } => (index + 1).max(walk(lo)).max(walk(hi)),
            }
        }
        walk(&self.root)
    }

    pub fn evaluate(&self, x: &BitVector) -> bool {
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf(label) => return *label,
                Node::Query { index, lo, hi } => {
                    node = if x.get(*index) { hi } else { lo };
                }
            }
        }
    }

    /// The restriction recorded along `x`'s root-to-leaf path.
    pub fn path_of(&self, x: &BitVector) -> Restriction {
        let mut node = &self.root;
        let mut path = Restriction::new();
        loop {
            match node {
                Node::Leaf(_) => return path,
                Node::Query { index, lo, hi } => {
                    let bit = x.get(*index);
                    path.fix(*index, bit);
                    node = if bit { hi } else { lo };
                }
            }
        }
    }

    /// Every root-to-leaf path with its leaf label.
    pub fn leaves_with_paths(&self) -> Vec<(Restriction, bool)> {
        fn walk(node: &Node, path: &mut Restriction, out: &mut Vec<(Restriction, bool)>) {
            match node {
                Node::Leaf(label) => out.push((path.clone(), *label)),
                Node::Query { index, lo, hi } => {
                    path.fix(*index, false);
                    walk(lo, path, out);
                    path.fix(*index, true);
                    walk(hi, path, out);
                    // restore: rebuild without this index
                    let restored: Vec<(usize, bool)> =
                        path.iter().filter(|&(i, _)| i != *index).collect();
                    *path = Restriction::from_pairs(&restored);
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut Restriction::new(), &mut out);
        out
    }

    /// Checks query indices are below `width` and no coordinate repeats
    /// along any root-to-leaf path.
    pub fn validate(&self, width: usize) -> Result<()> {
        fn walk(node: &Node, width: usize, seen: &mut Vec<usize>) -> Result<()> {
            match node {
                Node::Leaf(_) => Ok(()),
                Node::Query { index, lo, hi } => {
                    if *index >= width {
                        return Err(Error::WidthMismatch {
                            expected: width,
                            got: index + 1,
                        });
                    }
                    if seen.contains(index) {
                        return Err(Error::Parse(format!(
                            "coordinate {index} repeated along a path"
                        )));
                    }
                    seen.push(*index);
                    walk(lo, width, seen)?;
                    walk(hi, width, seen)?;
                    seen.pop();
                    Ok(())
                }
            }
        }
        walk(&self.root, width, &mut Vec::new())
    }

    /// True when the tree agrees with `f` on every domain point.
    pub fn is_exact_on(&self, f: &PartialFn) -> bool {
        f.iter().all(|(x, label)| self.evaluate(x) == label)
    }

    pub fn to_json(&self) -> Value {
        fn node_json(node: &Node) -> Value {
            match node {
                Node::Leaf(label) => json!({ "leaf": if *label { 1 } else { 0 } }),
                Node::Query { index, lo, hi } => json!({
                    "q": index,
                    "0": node_json(lo),
                    "1": node_json(hi),
                }),
            }
        }
        node_json(&self.root)
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        fn node_from(value: &Value) -> Result<Node> {
            let obj = value
                .as_object()
                .ok_or_else(|| Error::Parse("tree node must be an object".into()))?;
            if let Some(leaf) = obj.get("leaf") {
                return match leaf.as_u64() {
                    Some(0) => Ok(Node::Leaf(false)),
                    Some(1) => Ok(Node::Leaf(true)),
                    _ => Err(Error::Parse("leaf label must be 0 or 1".into())),
                };
            }
            let index = obj
                .get("q")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse("query node needs \"q\"".into()))?;
            let lo = obj
                .get("0")
                .ok_or_else(|| Error::Parse("query node needs \"0\"".into()))?;
            let hi = obj
                .get("1")
                .ok_or_else(|| Error::Parse("query node needs \"1\"".into()))?;
            Ok(Node::Query {
                index: index as usize,
                lo: Box::new(node_from(lo)?),
                hi: Box::new(node_from(hi)?),
            })
        }
        Ok(DecisionTree {
            root: node_from(value)?,
        })
    }
}

/// An exact probability mass function on an explicit support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pmf {
    width: usize,
    support: Vec<(BitVector, BigRational)>,
}

impl Pmf {
    pub fn new(points: Vec<(BitVector, BigRational)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Parse("pmf needs a nonempty support".into()));
        }
        let width = points[0].0.width();
        let mut support = points;
        support.sort_by(|a, b| a.0.cmp(&b.0));
        let mut total = BigRational::zero();
        for window in support.windows(2) {
            if window[0].0 == window[1].0 {
                return Err(Error::Parse("pmf support points must be distinct".into()));
            }
        }
        for (x, mass) in &support {
            if x.width() != width {
                return Err(Error::WidthMismatch {
                    expected: width,
                    got: x.width(),
                });
            }
            if *mass <= BigRational::zero() {
                return Err(Error::Parse("pmf masses must be positive".into()));
            }
            total += mass;
        }
        if !total.is_one() {
            return Err(Error::Parse(format!(
                "pmf masses must sum to 1, got {}",
                format_rat(&total)
            )));
        }
        Ok(Pmf { width, support })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BitVector, &BigRational)> + '_ {
        self.support.iter().map(|(x, m)| (x, m))
    }

    pub fn mass(&self, x: &BitVector) -> Option<&BigRational> {
        self.support
            .binary_search_by(|(p, _)| p.cmp(x))
            .ok()
            .map(|i| &self.support[i].1)
    }

    /// The r-fold product pmf on the enumerated product support.
    pub fn product(&self, r: usize, point_cap: usize) -> Result<Pmf> {
        assert!(r >= 1);
        let mut total: usize = 1;
        for _ in 0..r {
            total = total
                .checked_mul(self.len())
                .filter(|&t| t <= point_cap)
                .ok_or(Error::SizeCap {
                    what: "product pmf points",
                    needed: usize::MAX,
                    cap: point_cap,
                })?;
        }
        let mut acc: Vec<(BitVector, BigRational)> =
            vec![(BitVector::zeros(0), BigRational::one())];
        for _ in 0..r {
            let mut next = Vec::with_capacity(acc.len() * self.len());
            for (prefix, mass) in &acc {
                for (x, m) in self.iter() {
                    next.push((prefix.concat(x), mass * m));
                }
            }
            acc = next;
        }
        Pmf::new(acc)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.support
                .iter()
                .map(|(x, m)| json!({ "x": x.to_string(), "p": format_rat(m) }))
                .collect(),
        )
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let arr = value
            .as_array()
            .ok_or_else(|| Error::Parse("pmf must be a JSON array".into()))?;
        let mut points = Vec::with_capacity(arr.len());
        for item in arr {
            let x = item
                .get("x")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("pmf entry needs \"x\"".into()))?;
            let p = item
                .get("p")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("pmf entry needs \"p\"".into()))?;
            points.push((BitVector::parse(x)?, parse_rat(p)?));
        }
        Pmf::new(points)
    }
}

/// Exact probability mass on which the tree disagrees with `f`.
pub fn error_exact(tree: &DecisionTree, f: &PartialFn, pmf: &Pmf) -> Result<BigRational> {
    let mut err = BigRational::zero();
    for (x, mass) in pmf.iter() {
        let label = f.value(x).ok_or(Error::SupportMismatch)?;
        if tree.evaluate(x) != label {
            err += mass;
        }
    }
    Ok(err)
}

/// Monte Carlo estimate of the disagreement probability, with the
/// half-width of a 99% Hoeffding confidence interval. Deterministic given
/// the sampler's seed.
pub fn error_monte_carlo(
    tree: &DecisionTree,
    target: &dyn Fn(&BitVector) -> bool,
    sampler: &mut dyn FnMut() -> BitVector,
    n: usize,
) -> (f64, f64) {
    assert!(n >= 1);
    let mut mismatches = 0usize;
    for _ in 0..n {
        let x = sampler();
        if tree.evaluate(&x) != target(&x) {
            mismatches += 1;
        }
    }
    let estimate = mismatches as f64 / n as f64;
    let halfwidth = ((200.0f64).ln() / (2.0 * n as f64)).sqrt();
    (estimate, halfwidth)
}

/// Stacks block trees into one tree for the XOR of their functions.
///
/// Tree `i` is rewired to query its coordinates shifted into block `i`;
/// every leaf of tree `i` continues into a fresh copy of tree `i+1`, and
/// the final leaves carry the XOR of the constituent leaf labels. The
/// output size is exactly the product of the input sizes.
pub fn stacked_xor_tree(trees: &[&DecisionTree], widths: &[usize]) -> Result<DecisionTree> {
    assert_eq!(trees.len(), widths.len());
    assert!(!trees.is_empty());
    for (tree, &width) in trees.iter().zip(widths) {
        if tree.min_width() > width {
            return Err(Error::WidthMismatch {
                expected: width,
                got: tree.min_width(),
            });
        }
    }
    let mut offsets = vec![0usize; trees.len()];
    for i in 1..trees.len() {
        offsets[i] = offsets[i - 1] + widths[i - 1];
    }
    fn build(
        trees: &[&DecisionTree],
        offsets: &[usize],
        block: usize,
        node: &Node,
        parity: bool,
    ) -> Node {
        match node {
            Node::Leaf(label) => {
                let parity = parity ^ label;
                if block + 1 == trees.len() {
                    Node::Leaf(parity)
                } else {
                    build(trees, offsets, block + 1, trees[block + 1].root(), parity)
                }
            }
            Node::Query { index, lo, hi } => Node::Query {
                index: index + offsets[block],
                lo: Box::new(build(trees, offsets, block, lo, parity)),
                hi: Box::new(build(trees, offsets, block, hi, parity)),
            },
        }
    }
    Ok(DecisionTree::new(build(
        trees,
        &offsets,
        0,
        trees[0].root(),
        false,
    )))
}

/// Builds an exact tree for `f` by iteratively querying minimum
/// certificates of the 1-inputs, visited in lexicographic order.
///
/// The output agrees with `f` on its whole domain and has at most
/// `1 + sum over 1-inputs of certificate_complexity(f, x)` leaves.
pub fn patch_up_certificates(f: &PartialFn, width_cap: usize) -> Result<DecisionTree> {
    let ones = f.ones();
    // certificates are computed against f itself, up front
    let mut certs = Vec::with_capacity(ones.len());
    for x in &ones {
        certs.push(f.min_certificate(x, width_cap)?);
    }
    let mut root = Node::Leaf(false);
    for (x, cert) in ones.iter().zip(&certs) {
        insert_certificate_path(&mut root, x, cert);
    }
    label_leaves(&mut root, f, &Restriction::new())?;
    Ok(DecisionTree::new(root))
}

/// Walks `x` to its current leaf and extends that leaf with the
/// not-yet-queried certificate coordinates, in ascending order.
fn insert_certificate_path(node: &mut Node, x: &BitVector, cert: &[usize]) {
    let mut queried = Vec::new();
    let mut cursor: &mut Node = node;
    loop {
        match cursor {
            Node::Query { index, lo, hi } => {
                queried.push(*index);
                cursor = if x.get(*index) { hi } else { lo };
            }
            Node::Leaf(_) => break,
        }
    }
    let mut remaining: Vec<usize> = cert
        .iter()
        .copied()
        .filter(|i| !queried.contains(i))
        .collect();
    remaining.sort_unstable();
    for index in remaining {
        let placeholder = Node::Leaf(false);
        let (lo, hi) = if x.get(index) {
            (Box::new(placeholder), Box::new(Node::Leaf(false)))
        } else {
            (Box::new(Node::Leaf(false)), Box::new(placeholder))
        };
        *cursor = Node::Query { index, lo, hi };
        cursor = match cursor {
            Node::Query { lo, hi, .. } => {
                if x.get(index) {
                    hi
                } else {
                    lo
                }
            }
            Node::Leaf(_) => unreachable!(),
        };
    }
}

/// Labels every leaf with the constant value of `f` restricted by the
/// leaf's path; empty restrictions label 0.
fn label_leaves(node: &mut Node, f: &PartialFn, path: &Restriction) -> Result<()> {
    match node {
        Node::Leaf(label) => {
            let g = f.restrict(path)?;
            debug_assert!(g.is_constant(), "patch-up leaf must be constant");
            *label = g.constant_value().unwrap_or(false);
            Ok(())
        }
        Node::Query { index, lo, hi } => {
            let mut p0 = path.clone();
            p0.fix(*index, false);
            label_leaves(lo, f, &p0)?;
            let mut p1 = path.clone();
            p1.fix(*index, true);
            label_leaves(hi, f, &p1)
        }
    }
}

/// Patches an arbitrary tree into one exact on `f`'s domain by running the
/// certificate construction on the subfunction at every leaf.
///
/// The output size is at most `size(T)` plus the sum over 1-inputs of the
/// certificate complexity of the subfunction at the leaf the input reaches.
pub fn patch_up_tree(tree: &DecisionTree, f: &PartialFn, width_cap: usize) -> Result<DecisionTree> {
    fn rebuild(
        node: &Node,
        f: &PartialFn,
        path: &Restriction,
        width_cap: usize,
    ) -> Result<Node> {
        match node {
            Node::Leaf(_) => {
                let sub = f.restrict(path)?;
                let patched = patch_up_certificates(&sub, width_cap)?;
                Ok(patched.root().clone())
            }
            Node::Query { index, lo, hi } => {
                let mut p0 = path.clone();
                p0.fix(*index, false);
                let mut p1 = path.clone();
                p1.fix(*index, true);
                Ok(Node::Query {
                    index: *index,
                    lo: Box::new(rebuild(lo, f, &p0, width_cap)?),
                    hi: Box::new(rebuild(hi, f, &p1, width_cap)?),
                })
            }
        }
    }
    tree.validate(f.width())?;
    Ok(DecisionTree::new(rebuild(
        tree.root(),
        f,
        &Restriction::new(),
        width_cap,
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn and3() -> PartialFn {
        PartialFn::total(3, |x| x.get(0) && x.get(1) && x.get(2)).unwrap()
    }

    fn uniform_pmf(f: &PartialFn) -> Pmf {
        let n = f.len() as i64;
        Pmf::new(f.iter().map(|(x, _)| (x.clone(), rat(1, n))).collect()).unwrap()
    }

    #[test]
    fn single_leaf_basics() {
        let t = DecisionTree::leaf(true);
        let x = BitVector::parse("0101").unwrap();
        assert!(t.evaluate(&x));
        assert!(t.path_of(&x).is_empty());
        assert_eq!(t.size(), 1);
    }

    #[test]
    fn single_query_path() {
        let t = DecisionTree::new(Node::Query {
            index: 0,
            lo: Box::new(Node::Leaf(false)),
            hi: Box::new(Node::Leaf(true)),
        });
        let x = BitVector::parse("10").unwrap();
        assert!(t.evaluate(&x));
        assert_eq!(t.path_of(&x), Restriction::from_pairs(&[(0, true)]));
        assert_eq!(t.size(), 2);
    }

    #[test]
    fn json_round_trip() {
        let t = DecisionTree::new(Node::Query {
            index: 2,
            lo: Box::new(Node::Leaf(false)),
            hi: Box::new(Node::Query {
                index: 0,
                lo: Box::new(Node::Leaf(true)),
                hi: Box::new(Node::Leaf(false)),
            }),
        });
        let back = DecisionTree::from_json(&t.to_json()).unwrap();
        assert_eq!(t, back);
    }

    #[test]
    fn pmf_rejects_bad_mass() {
        let x = BitVector::parse("0").unwrap();
        let y = BitVector::parse("1").unwrap();
        assert!(Pmf::new(vec![(x.clone(), rat(1, 2)), (y.clone(), rat(1, 3))]).is_err());
        assert!(Pmf::new(vec![(x.clone(), rat_int(1)), (x, rat_int(0))]).is_err());
        assert!(Pmf::new(vec![(y, rat_int(1))]).is_ok());
    }

    #[test]
    fn product_pmf_of_two_point_half_half() {
        let pmf = Pmf::new(vec![
            (BitVector::parse("0").unwrap(), rat(1, 2)),
            (BitVector::parse("1").unwrap(), rat(1, 2)),
        ])
        .unwrap();
        let sq = pmf.product(2, 1_000_000).unwrap();
        assert_eq!(sq.len(), 4);
        for (_, m) in sq.iter() {
            assert_eq!(m, &rat(1, 4));
        }
        assert_eq!(pmf.product(1, 10).unwrap(), pmf);
    }

    #[test]
    fn exact_error_zero_iff_agreement() {
        let f = and3();
        let pmf = uniform_pmf(&f);
        let exact = patch_up_certificates(&f, 32).unwrap();
        assert_eq!(error_exact(&exact, &f, &pmf).unwrap(), rat_int(0));
        let zero = DecisionTree::leaf(false);
        // AND3 has one 1-input among 8
        assert_eq!(error_exact(&zero, &f, &pmf).unwrap(), rat(1, 8));
    }

    #[test]
    fn error_requires_support_in_domain() {
        let f = PartialFn::new(1, [(BitVector::parse("0").unwrap(), false)]).unwrap();
        let pmf = Pmf::new(vec![(BitVector::parse("1").unwrap(), rat_int(1))]).unwrap();
        assert!(matches!(
            error_exact(&DecisionTree::leaf(false), &f, &pmf),
            Err(Error::SupportMismatch)
        ));
    }

    #[test]
    fn monte_carlo_is_deterministic_and_sane() {
        use rand::{Rng, SeedableRng};
        let f = and3();
        let tree = DecisionTree::leaf(false);
        let run = |seed: u64| {
            let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
            let mut sampler = || BitVector::from_u64(3, rng.gen_range(0..8));
            error_monte_carlo(&tree, &|x| f.value(x).unwrap(), &mut sampler, 10_000)
        };
        let (e1, hw) = run(7);
        let (e2, _) = run(7);
        assert_eq!(e1, e2);
        assert!((e1 - 0.125).abs() <= hw);
        // n=1 with a correctly classified point estimates zero
        let mut once = || BitVector::parse("000").unwrap();
        let (e, _) = error_monte_carlo(&tree, &|x| f.value(x).unwrap(), &mut once, 1);
        assert_eq!(e, 0.0);
    }

    #[test]
    fn monte_carlo_brackets_the_exact_error_of_a_random_tree() {
        use crate::gadget::{canonical_hard_pmf, gen_graph, Gadget, GraphKind, PmfSampler};
        use rand::SeedableRng;
        let gadget = Gadget::new(gen_graph(GraphKind::Complete, 3, 0).unwrap(), 1).unwrap();
        let f = gadget.hard_support().unwrap();
        let pmf = canonical_hard_pmf(&f).unwrap().pmf;
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(13);
        let tree = crate::sample::rand_tree(&mut rng, f.width(), 4);
        let exact = crate::rat::rat_to_f64(&error_exact(&tree, &f, &pmf).unwrap());
        let mut sampler = PmfSampler::new(&pmf, 41);
        let mut draw = || sampler.next();
        let (estimate, halfwidth) =
            error_monte_carlo(&tree, &|x| f.value(x).unwrap(), &mut draw, 20_000);
        assert!((estimate - exact).abs() <= halfwidth);
    }

    #[test]
    fn stacked_tree_size_is_the_exact_product() {
        let t3 = DecisionTree::new(Node::Query {
            index: 0,
            lo: Box::new(Node::Leaf(false)),
            hi: Box::new(Node::Query {
                index: 1,
                lo: Box::new(Node::Leaf(false)),
                hi: Box::new(Node::Leaf(true)),
            }),
        });
        let t4 = DecisionTree::new(Node::Query {
            index: 0,
            lo: Box::new(Node::Query {
                index: 2,
                lo: Box::new(Node::Leaf(true)),
                hi: Box::new(Node::Leaf(false)),
            }),
            hi: Box::new(Node::Query {
                index: 1,
                lo: Box::new(Node::Leaf(false)),
                hi: Box::new(Node::Leaf(true)),
            }),
        });
        let stacked = stacked_xor_tree(&[&t3, &t4], &[2, 3]).unwrap();
        assert_eq!(stacked.size(), t3.size() * t4.size());
        stacked.validate(5).unwrap();
        // stacking one tree leaves it unchanged
        let same = stacked_xor_tree(&[&t3], &[2]).unwrap();
        assert_eq!(same, t3);
        // the path of an input is the concatenation of the block paths
        let x = BitVector::parse("11101").unwrap();
        let p = stacked.path_of(&x);
        let p1 = t3.path_of(&x.slice(0, 2));
        let p2 = t4.path_of(&x.slice(2, 3));
        let mut expected = Restriction::new();
        for (i, b) in p1.iter() {
            expected.fix(i, b);
        }
        for (i, b) in p2.iter() {
            expected.fix(i + 2, b);
        }
        assert_eq!(p, expected);
        // and the label is the XOR of the block labels
        assert_eq!(
            stacked.evaluate(&x),
            t3.evaluate(&x.slice(0, 2)) ^ t4.evaluate(&x.slice(2, 3))
        );
    }

    #[test]
    fn error_is_a_probability_and_vanishes_iff_agreement() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(17);
        for _ in 0..100 {
            let width = {
                use rand::Rng;
                rng.gen_range(1..=4usize)
            };
            let f = crate::sample::rand_partial_fn(&mut rng, width, 10);
            let pmf = crate::sample::rand_pmf(&mut rng, &f);
            let tree = crate::sample::rand_tree(&mut rng, width, 8);
            let err = error_exact(&tree, &f, &pmf).unwrap();
            assert!(err >= rat_int(0) && err <= rat_int(1));
            assert_eq!(err == rat_int(0), tree.is_exact_on(&f));
        }
    }

    #[test]
    fn patch_up_certificates_constant_zero_is_one_leaf() {
        let f = PartialFn::total(3, |_| false).unwrap();
        let t = patch_up_certificates(&f, 32).unwrap();
        assert_eq!(t.size(), 1);
        assert!(t.is_exact_on(&f));
    }

    #[test]
    fn patch_up_certificates_and3_meets_the_bound() {
        let f = and3();
        let t = patch_up_certificates(&f, 32).unwrap();
        assert!(t.is_exact_on(&f));
        // bound: 1 + Cert(f, 111) = 4
        assert!(t.size() <= 4);
        t.validate(3).unwrap();
    }

    #[test]
    fn patch_up_tree_degenerate_leaf_matches_certificate_bound() {
        let f = and3();
        let t = patch_up_tree(&DecisionTree::leaf(false), &f, 32).unwrap();
        assert!(t.is_exact_on(&f));
        assert!(t.size() <= 1 + 3);
    }

    #[test]
    fn patch_up_tree_repairs_a_wrong_tree() {
        let f = and3();
        let wrong = DecisionTree::new(Node::Query {
            index: 1,
            lo: Box::new(Node::Leaf(true)),
            hi: Box::new(Node::Leaf(false)),
        });
        let patched = patch_up_tree(&wrong, &f, 32).unwrap();
        assert!(patched.is_exact_on(&f));
        patched.validate(3).unwrap();
        // per-leaf certificate sums bound the growth
        let mut bound = wrong.size();
        for (x, label) in f.iter() {
            if label {
                let sub = f.restrict(&wrong.path_of(x)).unwrap();
                bound += sub.certificate_complexity(x, 32).unwrap();
            }
        }
        assert!(patched.size() <= bound);
    }
}
