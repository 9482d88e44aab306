//! Bit vectors, partial Boolean functions, restrictions, and the
//! complexity measures defined relative to an explicit domain.
//!
//! A partial function carries its domain as an explicit point set; the
//! sensitivity of a point and the certificate complexity of a point are
//! both computed with respect to that set, never the full cube.

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// A fixed-width bit string. Coordinates are 0-based internally and
/// rendered 1-based only in human-facing reports.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    width: usize,
    // Little-endian blocks; trailing bits above `width` are kept zero so
    // that Eq/Hash stay canonical.
    blocks: Vec<u64>,
}

impl Ord for BitVector {
    /// Width first, then lexicographic on the rendered bitstring
    /// (coordinate 0 is the most significant position).
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.width.cmp(&other.width).then_with(|| {
            for (a, b) in self.blocks.iter().zip(&other.blocks) {
                let ord = a.reverse_bits().cmp(&b.reverse_bits());
                if ord != std::cmp::Ordering::Equal {
                    return ord;
                }
            }
            std::cmp::Ordering::Equal
        })
    }
}

impl PartialOrd for BitVector {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl BitVector {
    pub fn zeros(width: usize) -> Self {
        BitVector {
            width,
            blocks: vec![0; (width + 63) / 64],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = BitVector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Parses a bitstring like `"01101"`, coordinate 0 first.
    pub fn parse(text: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(text.len());
        for c in text.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(Error::Parse(format!("bad bit {c:?} in {text:?}"))),
            }
        }
        if bits.is_empty() {
            return Err(Error::Parse("empty bitstring".into()));
        }
        Ok(BitVector::from_bits(&bits))
    }

    /// Unpacks the low `width` bits of `value`, coordinate 0 = bit 0.
    pub fn from_u64(width: usize, value: u64) -> Self {
        assert!(width <= 64);
        let mut v = BitVector::zeros(width);
        if width > 0 {
            v.blocks[0] = if width == 64 {
                value
            } else {
                value & ((1u64 << width) - 1)
            };
        }
        v
    }

    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.width);
        (self.blocks[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.width);
        if value {
            self.blocks[i / 64] |= 1u64 << (i % 64);
        } else {
            self.blocks[i / 64] &= !(1u64 << (i % 64));
        }
    }

    /// The input with coordinate `i` flipped.
    pub fn flip(&self, i: usize) -> Self {
        let mut v = self.clone();
        v.set(i, !v.get(i));
        v
    }

    pub fn count_ones(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.width).map(move |i| self.get(i))
    }

    /// Concatenates `self` and `other` into one wider vector.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut v = BitVector::zeros(self.width + other.width);
        for i in 0..self.width {
            v.set(i, self.get(i));
        }
        for i in 0..other.width {
            v.set(self.width + i, other.get(i));
        }
        v
    }

    /// Extracts coordinates `[start, start+len)` as a new vector.
    pub fn slice(&self, start: usize, len: usize) -> BitVector {
        let mut v = BitVector::zeros(len);
        for i in 0..len {
            v.set(i, self.get(start + i));
        }
        v
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// A partial assignment of coordinates to bits.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Restriction {
    assignments: BTreeMap<usize, bool>,
}

impl Restriction {
    pub fn new() -> Self {
        Restriction::default()
    }

    pub fn from_pairs(pairs: &[(usize, bool)]) -> Self {
        Restriction {
            assignments: pairs.iter().copied().collect(),
        }
    }

    pub fn fix(&mut self, index: usize, value: bool) {
        self.assignments.insert(index, value);
    }

    pub fn get(&self, index: usize) -> Option<bool> {
        self.assignments.get(&index).copied()
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.assignments.iter().map(|(&i, &b)| (i, b))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.assignments.keys().next_back().copied()
    }

    /// True when `x` agrees with every fixed coordinate.
    pub fn consistent_with(&self, x: &BitVector) -> bool {
        self.iter().all(|(i, b)| x.get(i) == b)
    }

    /// Union of two restrictions; `None` when they disagree somewhere.
    pub fn union(&self, other: &Restriction) -> Option<Restriction> {
        let mut merged = self.clone();
        for (i, b) in other.iter() {
            match merged.get(i) {
                Some(existing) if existing != b => return None,
                _ => merged.fix(i, b),
            }
        }
        Some(merged)
    }
}

/// A Boolean function defined on an explicit domain.
///
/// The empty function (no points) is permitted as the distinguished result
/// of a restriction; it is treated as constant everywhere in this crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFn {
    width: usize,
    entries: BTreeMap<BitVector, bool>,
}

impl PartialFn {
    pub fn new(width: usize, points: impl IntoIterator<Item = (BitVector, bool)>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (x, label) in points {
            if x.width() != width {
                return Err(Error::WidthMismatch {
                    expected: width,
                    got: x.width(),
                });
            }
            entries.insert(x, label);
        }
        Ok(PartialFn { width, entries })
    }

    /// The full cube on `width` variables labeled by `f`. Widths beyond 22
    /// are rejected: total functions past that are out of scope.
    pub fn total(width: usize, f: impl Fn(&BitVector) -> bool) -> Result<Self> {
        if width > 22 {
            return Err(Error::SizeCap {
                what: "full-cube enumeration width",
                needed: width,
                cap: 22,
            });
        }
        let mut entries = BTreeMap::new();
        for value in 0u64..(1u64 << width) {
            let x = BitVector::from_u64(width, value);
            let label = f(&x);
            entries.insert(x, label);
        }
        Ok(PartialFn { width, entries })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn value(&self, x: &BitVector) -> Option<bool> {
        self.entries.get(x).copied()
    }

    pub fn contains(&self, x: &BitVector) -> bool {
        self.entries.contains_key(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BitVector, bool)> + '_ {
        self.entries.iter().map(|(x, &l)| (x, l))
    }

    /// The 1-inputs, in lexicographic order.
    pub fn ones(&self) -> Vec<BitVector> {
        self.entries
            .iter()
            .filter(|(_, &l)| l)
            .map(|(x, _)| x.clone())
            .collect()
    }

    /// Empty domains count as constant.
    pub fn is_constant(&self) -> bool {
        let mut labels = self.entries.values();
        match labels.next() {
            None => true,
            Some(&first) => labels.all(|&l| l == first),
        }
    }

    pub fn constant_value(&self) -> Option<bool> {
        if self.is_constant() {
            self.entries.values().next().copied()
        } else {
            None
        }
    }

    /// The subfunction on points consistent with `rho`. The result may be
    /// empty; labels and width are unchanged.
    pub fn restrict(&self, rho: &Restriction) -> Result<PartialFn> {
        if let Some(max) = rho.max_index() {
            if max >= self.width {
                return Err(Error::WidthMismatch {
                    expected: self.width,
                    got: max + 1,
                });
            }
        }
        let entries = self
            .entries
            .iter()
            .filter(|(x, _)| rho.consistent_with(x))
            .map(|(x, &l)| (x.clone(), l))
            .collect();
        Ok(PartialFn {
            width: self.width,
            entries,
        })
    }

    /// The domain-resident sensitive neighbors of `x`: single-bit flips
    /// that stay in the domain and change the label.
    pub fn sensitivity_set(&self, x: &BitVector) -> Result<Vec<BitVector>> {
        let label = self.value(x).ok_or(Error::OutOfDomain)?;
        let mut out = Vec::new();
        for i in 0..self.width {
            let y = x.flip(i);
            if let Some(other) = self.value(&y) {
                if other != label {
                    out.push(y);
                }
            }
        }
        Ok(out)
    }

    /// Max over the domain of the sensitivity-set size; 0 for constants.
    pub fn max_sensitivity(&self) -> usize {
        self.entries
            .keys()
            .map(|x| self.sensitivity_set(x).expect("domain point").len())
            .max()
            .unwrap_or(0)
    }

    /// Difference masks between `x` and every opposite-label point.
    ///
    /// A restriction consistent with `x` forces the function constant iff
    /// the set of coordinates it fixes hits every one of these masks, so
    /// certificate search is exact minimum hitting set.
    fn certificate_masks(&self, x: &BitVector) -> Result<Vec<u64>> {
        if self.width > 64 {
            return Err(Error::SizeCap {
                what: "certificate search width",
                needed: self.width,
                cap: 64,
            });
        }
        let label = self.value(x).ok_or(Error::OutOfDomain)?;
        let mut masks: Vec<u64> = Vec::new();
        for (y, l) in self.iter() {
            if l == label {
                continue;
            }
            let mut mask = 0u64;
            for i in 0..self.width {
                if y.get(i) != x.get(i) {
                    mask |= 1 << i;
                }
            }
            masks.push(mask);
        }
        // Keep only inclusion-minimal masks; supersets are hit for free.
        masks.sort_by_key(|m| m.count_ones());
        let mut minimal: Vec<u64> = Vec::new();
        'outer: for m in masks {
            for &kept in &minimal {
                if kept & m == kept {
                    continue 'outer;
                }
            }
            minimal.push(m);
        }
        Ok(minimal)
    }

    /// The fewest coordinates that, fixed to `x`'s values, force the
    /// function constant on the surviving domain.
    pub fn certificate_complexity(&self, x: &BitVector, width_cap: usize) -> Result<usize> {
        if self.width > width_cap {
            return Err(Error::SizeCap {
                what: "certificate search width",
                needed: self.width,
                cap: width_cap,
            });
        }
        let masks = self.certificate_masks(x)?;
        Ok(min_hitting_set_size(&masks))
    }

    /// A minimum certificate for `x`, the lexicographically smallest
    /// coordinate set among all minimum ones. Determinism matters: the
    /// patch-up constructions are reproducible only if this choice is.
    pub fn min_certificate(&self, x: &BitVector, width_cap: usize) -> Result<Vec<usize>> {
        if self.width > width_cap {
            return Err(Error::SizeCap {
                what: "certificate search width",
                needed: self.width,
                cap: width_cap,
            });
        }
        let masks = self.certificate_masks(x)?;
        let k = min_hitting_set_size(&masks);
        let mut chosen: Vec<usize> = Vec::new();
        let found = lex_first_hitting_set(&masks, k, 0, 0, &mut chosen, self.width);
        debug_assert!(found);
        Ok(chosen)
    }

    /// The r-fold XOR: width `r * n`, domain `D^r` laid out as contiguous
    /// blocks in input order, label = XOR of the block labels.
    pub fn xor_power(&self, r: usize, point_cap: usize) -> Result<PartialFn> {
        assert!(r >= 1);
        let copies: Vec<&PartialFn> = (0..r).map(|_| self).collect();
        xor_join(&copies, point_cap)
    }

    /// Minimal 1-inputs of a monotone function.
    pub fn minterms(&self) -> Result<Vec<BitVector>> {
        if !self.is_monotone() {
            return Err(Error::NotMonotone);
        }
        let mut out = Vec::new();
        'candidates: for (x, label) in self.iter() {
            if !label {
                continue;
            }
            // every strictly smaller domain point must be a 0-input
            for (y, l) in self.iter() {
                if l && y != x && pointwise_le(y, x) {
                    continue 'candidates;
                }
            }
            // and every in-domain downward flip of a 1-coordinate too
            for i in 0..self.width {
                if x.get(i) {
                    if let Some(true) = self.value(&x.flip(i)) {
                        continue 'candidates;
                    }
                }
            }
            out.push(x.clone());
        }
        Ok(out)
    }

    /// Checks `f(y) <= f(x)` for every comparable pair `y <= x` in the domain.
    pub fn is_monotone(&self) -> bool {
        for (x, lx) in self.iter() {
            if !lx {
                continue;
            }
            // only pairs with a 1 above a 0 can violate monotonicity
            for (y, ly) in self.iter() {
                if !ly && pointwise_le(x, y) {
                    return false;
                }
            }
        }
        true
    }

    /// Writes the text format: `n <width>` then one `<bits> <label>` line
    /// per point, coordinate 0 first, points in lexicographic order.
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.width);
        for (x, label) in self.iter() {
            out.push_str(&format!("{} {}\n", x, if label { 1 } else { 0 }));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<PartialFn> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty file".into()))?;
        let width: usize = header
            .trim()
            .strip_prefix("n ")
            .and_then(|w| w.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad header {header:?}")))?;
        let mut points = Vec::new();
        for line in lines {
            let mut parts = line.split_whitespace();
            let bits = parts
                .next()
                .ok_or_else(|| Error::Parse(format!("bad line {line:?}")))?;
            let label = parts
                .next()
                .ok_or_else(|| Error::Parse(format!("missing label in {line:?}")))?;
            let x = BitVector::parse(bits)?;
            let label = match label {
                "0" => false,
                "1" => true,
                _ => return Err(Error::Parse(format!("bad label in {line:?}"))),
            };
            points.push((x, label));
        }
        if points.is_empty() {
            return Err(Error::Parse("function file has no points".into()));
        }
        PartialFn::new(width, points)
    }
}

/// `a <= b` coordinate-wise.
pub fn pointwise_le(a: &BitVector, b: &BitVector) -> bool {
    debug_assert_eq!(a.width(), b.width());
    a.iter().zip(b.iter()).all(|(x, y)| !x || y)
}

/// XOR of independent blocks, one per input function. Widths may differ;
/// block `i` occupies the coordinates after blocks `0..i`.
pub fn xor_join(parts: &[&PartialFn], point_cap: usize) -> Result<PartialFn> {
    assert!(!parts.is_empty());
    let mut total: usize = 1;
    for p in parts {
        total = total
            .checked_mul(p.len())
            .filter(|&t| t <= point_cap)
            .ok_or(Error::SizeCap {
                what: "product domain points",
                needed: usize::MAX,
                cap: point_cap,
            })?;
    }
    let width = parts.iter().map(|p| p.width()).sum();
    let mut acc: Vec<(BitVector, bool)> = vec![(BitVector::zeros(0), false)];
    for p in parts {
        let mut next = Vec::with_capacity(acc.len() * p.len());
        for (prefix, label) in &acc {
            for (x, l) in p.iter() {
                next.push((prefix.concat(x), label ^ l));
            }
        }
        acc = next;
    }
    PartialFn::new(width, acc)
}

/// Exact minimum hitting set size over bit-mask sets, branch and bound.
fn min_hitting_set_size(masks: &[u64]) -> usize {
    if masks.is_empty() {
        return 0;
    }
    let greedy = greedy_hitting_set(masks);
    let mut best = greedy;
    hs_branch(masks, 0, &mut best);
    best
}

fn greedy_hitting_set(masks: &[u64]) -> usize {
    let mut remaining: Vec<u64> = masks.to_vec();
    let mut picked = 0;
    while let Some(&smallest) = remaining.iter().min_by_key(|m| m.count_ones()) {
        // pick the element of the smallest set hitting the most sets
        let mut best_bit = 0u64;
        let mut best_hits = 0usize;
        let mut bits = smallest;
        while bits != 0 {
            let bit = bits & bits.wrapping_neg();
            let hits = remaining.iter().filter(|&&m| m & bit != 0).count();
            if hits > best_hits {
                best_hits = hits;
                best_bit = bit;
            }
            bits ^= bit;
        }
        remaining.retain(|&m| m & best_bit == 0);
        picked += 1;
    }
    picked
}

fn hs_branch(uncovered: &[u64], picked: usize, best: &mut usize) {
    if uncovered.is_empty() {
        *best = (*best).min(picked);
        return;
    }
    // lower bound: pairwise-disjoint uncovered sets each need a fresh pick
    let mut lb = 0usize;
    let mut used = 0u64;
    for &m in uncovered {
        if m & used == 0 {
            lb += 1;
            used |= m;
        }
    }
    if picked + lb >= *best {
        return;
    }
    let &branch_set = uncovered
        .iter()
        .min_by_key(|m| m.count_ones())
        .expect("nonempty");
    let mut bits = branch_set;
    while bits != 0 {
        let bit = bits & bits.wrapping_neg();
        let rest: Vec<u64> = uncovered.iter().copied().filter(|&m| m & bit == 0).collect();
        hs_branch(&rest, picked + 1, best);
        bits ^= bit;
    }
}

/// Depth-first search for the lexicographically first hitting set of size
/// exactly `k`, trying coordinates in increasing order.
fn lex_first_hitting_set(
    masks: &[u64],
    k: usize,
    start: usize,
    chosen_mask: u64,
    chosen: &mut Vec<usize>,
    width: usize,
) -> bool {
    let uncovered: Vec<u64> = masks
        .iter()
        .copied()
        .filter(|&m| m & chosen_mask == 0)
        .collect();
    if uncovered.is_empty() {
        return chosen.len() == k;
    }
    if chosen.len() == k {
        return false;
    }
    // disjoint-set lower bound on what is still needed
    let mut lb = 0usize;
    let mut used = 0u64;
    for &m in &uncovered {
        if m & used == 0 {
            lb += 1;
            used |= m;
        }
    }
    if chosen.len() + lb > k {
        return false;
    }
    for i in start..width {
        let bit = 1u64 << i;
        if chosen_mask & bit != 0 {
            continue;
        }
        if uncovered.iter().all(|&m| m & bit == 0) {
            continue; // coordinate hits nothing, minimality forbids it
        }
        chosen.push(i);
        if lex_first_hitting_set(masks, k, i + 1, chosen_mask | bit, chosen, width) {
            return true;
        }
        chosen.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn and3() -> PartialFn {
        PartialFn::total(3, |x| x.get(0) && x.get(1) && x.get(2)).unwrap()
    }

    fn parity3() -> PartialFn {
        PartialFn::total(3, |x| x.count_ones() % 2 == 1).unwrap()
    }

    #[test]
    fn restrict_filters_consistent_points() {
        let f = PartialFn::new(
            2,
            [
                (BitVector::parse("00").unwrap(), false),
                (BitVector::parse("11").unwrap(), true),
            ],
        )
        .unwrap();
        let rho = Restriction::from_pairs(&[(0, true)]);
        let g = f.restrict(&rho).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.value(&BitVector::parse("11").unwrap()), Some(true));
        // empty restriction is the identity
        assert_eq!(f.restrict(&Restriction::new()).unwrap(), f);
    }

    #[test]
    fn restrict_may_produce_the_empty_function() {
        let f = PartialFn::new(1, [(BitVector::parse("0").unwrap(), true)]).unwrap();
        let g = f.restrict(&Restriction::from_pairs(&[(0, true)])).unwrap();
        assert!(g.is_empty());
        assert!(g.is_constant());
    }

    #[test]
    fn sensitivity_of_constant_is_empty() {
        let f = PartialFn::total(3, |_| true).unwrap();
        let x = BitVector::parse("010").unwrap();
        assert!(f.sensitivity_set(&x).unwrap().is_empty());
        assert_eq!(f.max_sensitivity(), 0);
    }

    #[test]
    fn sensitivity_out_of_domain_errors() {
        let f = PartialFn::new(2, [(BitVector::parse("00").unwrap(), false)]).unwrap();
        let x = BitVector::parse("11").unwrap();
        assert!(matches!(f.sensitivity_set(&x), Err(Error::OutOfDomain)));
    }

    #[test]
    fn parity_on_the_cube_has_full_sensitivity() {
        // frozen by enumerating all 8 points: every flip changes parity
        assert_eq!(parity3().max_sensitivity(), 3);
    }

    #[test]
    fn and3_certificate_of_the_all_ones_point_is_three() {
        // frozen by exhausting restrictions of size <= 2: each leaves both
        // labels alive, so the minimum certificate fixes all three ones
        let f = and3();
        let x = BitVector::parse("111").unwrap();
        assert_eq!(f.certificate_complexity(&x, 32).unwrap(), 3);
        assert_eq!(f.min_certificate(&x, 32).unwrap(), vec![0, 1, 2]);
        // a 0-input with a single blocking zero has certificate 1
        let y = BitVector::parse("011").unwrap();
        assert_eq!(f.certificate_complexity(&y, 32).unwrap(), 1);
    }

    #[test]
    fn constant_function_has_certificate_zero() {
        let f = PartialFn::total(2, |_| false).unwrap();
        let x = BitVector::parse("01").unwrap();
        assert_eq!(f.certificate_complexity(&x, 32).unwrap(), 0);
        assert!(f.min_certificate(&x, 32).unwrap().is_empty());
    }

    #[test]
    fn certificate_witness_restricts_to_a_constant() {
        let f = parity3();
        for (x, _) in f.iter() {
            let cert = f.min_certificate(x, 32).unwrap();
            let rho = Restriction::from_pairs(
                &cert.iter().map(|&i| (i, x.get(i))).collect::<Vec<_>>(),
            );
            assert!(f.restrict(&rho).unwrap().is_constant());
        }
    }

    #[test]
    fn xor_power_of_one_is_identity() {
        let f = and3();
        let g = f.xor_power(1, 1_000_000).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn xor_power_multiplies_domains() {
        let f = PartialFn::new(
            2,
            [
                (BitVector::parse("00").unwrap(), false),
                (BitVector::parse("01").unwrap(), true),
                (BitVector::parse("11").unwrap(), true),
            ],
        )
        .unwrap();
        let g = f.xor_power(2, 1_000_000).unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g.width(), 4);
        // label of (1-input, 1-input) is 0
        let x = BitVector::parse("0101").unwrap();
        assert_eq!(g.value(&x), Some(false));
    }

    #[test]
    fn xor_power_respects_the_cap() {
        let f = and3();
        assert!(matches!(
            f.xor_power(3, 100),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn minterms_of_or2_and_and3() {
        let or2 = PartialFn::total(2, |x| x.get(0) || x.get(1)).unwrap();
        let ms = or2.minterms().unwrap();
        assert_eq!(
            ms,
            vec![
                BitVector::parse("01").unwrap(),
                BitVector::parse("10").unwrap()
            ]
        );
        assert_eq!(and3().minterms().unwrap(), vec![BitVector::parse("111").unwrap()]);
        let zero = PartialFn::total(2, |_| false).unwrap();
        assert!(zero.minterms().unwrap().is_empty());
    }

    #[test]
    fn minterms_reject_non_monotone() {
        assert!(!parity3().is_monotone());
        assert!(matches!(parity3().minterms(), Err(Error::NotMonotone)));
    }

    #[test]
    fn text_round_trip() {
        let f = and3();
        let g = PartialFn::from_text(&f.to_text()).unwrap();
        assert_eq!(f, g);
    }

    proptest! {
        #[test]
        fn restrict_composes_as_union(seed in 0u64..500) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
            let width = rng.gen_range(1..6usize);
            let f = crate::sample::rand_partial_fn(&mut rng, width, 10);
            let mut r1 = Restriction::new();
            let mut r2 = Restriction::new();
            for i in 0..width {
                match rng.gen_range(0..4) {
                    0 => r1.fix(i, rng.gen()),
                    1 => r2.fix(i, rng.gen()),
                    _ => {}
                }
            }
            let merged = r1.union(&r2).expect("disjoint fixings are consistent");
            let lhs = f.restrict(&r1).unwrap().restrict(&r2).unwrap();
            let rhs = f.restrict(&merged).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn xor_power_labels_are_block_xors(seed in 0u64..1000) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
            let width = rng.gen_range(1..4usize);
            let f = crate::sample::rand_partial_fn(&mut rng, width, 6);
            let r = rng.gen_range(1..4usize);
            let g = f.xor_power(r, 1_000_000).unwrap();
            // one random tuple per case; 1000 cases cover the invariant
            let points: Vec<_> = f.iter().map(|(x, l)| (x.clone(), l)).collect();
            let mut expect = false;
            let mut tuple = BitVector::zeros(0);
            for _ in 0..r {
                let (x, l) = &points[rng.gen_range(0..points.len())];
                expect ^= l;
                tuple = tuple.concat(x);
            }
            prop_assert_eq!(g.value(&tuple), Some(expect));
        }
    }
}
