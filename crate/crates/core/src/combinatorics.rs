//! Ground set, vertices of J(N,D), and subsets of the base vertex.
//!
//! The ground set is `{1,…,n}`. Vertices are `d`-subsets stored as bit sets
//! (bit `e-1` represents element `e`). Vertices are listed in colexicographic
//! order; subsets of a base vertex are listed by size, then colex.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// `C(n, k)`, zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Machine-sized `C(n, k)` for indexing; saturates at `u64::MAX`.
pub fn binomial_u64(n: u64, k: i64) -> u64 {
    if k < 0 || k as u64 > n {
        return 0;
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// `(n, d)` for the Johnson graph J(n, d).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundParams {
    n: usize,
    d: usize,
}

impl GroundParams {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n <= 2 * d {
            return Err(Error::InvalidParams(format!(
                "J({n},{d}) requires n > 2d"
            )));
        }
        Ok(GroundParams { n, d })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `|X| = C(n, d)`.
    pub fn num_vertices(&self) -> u64 {
        binomial_u64(self.n as u64, self.d as i64)
    }

    /// The default base vertex `{1,…,d}`.
    pub fn default_base(&self) -> Vertex {
        Vertex::from_elements(self.n, 1..=self.d).expect("in range")
    }
}

impl fmt::Display for GroundParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "J({},{})", self.n, self.d)
    }
}

/// Bit set over the ground set `{1,…,n}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    words: Vec<u64>,
}

impl ElementSet {
    pub fn empty(n: usize) -> Self {
        ElementSet {
            words: vec![0; n.div_ceil(64).max(1)],
        }
    }

    /// Panics when `e` is outside the set's width.
    pub fn insert(&mut self, e: usize) {
        assert!(e >= 1, "elements are 1-based");
        let b = e - 1;
        self.words[b / 64] |= 1 << (b % 64);
    }

    pub fn contains(&self, e: usize) -> bool {
        if e == 0 {
            return false;
        }
        let b = e - 1;
        self.words
            .get(b / 64)
            .is_some_and(|w| w & (1 << (b % 64)) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn intersection_len(&self, other: &ElementSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        ElementSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn difference(&self, other: &ElementSet) -> ElementSet {
        ElementSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect(),
        }
    }

    /// Sorted 1-based elements.
    pub fn elements(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(wi * 64 + b + 1);
                w &= w - 1;
            }
        }
        out
    }

    /// Colex comparison: the set holding the largest element of the
    /// symmetric difference is larger.
    pub fn colex_cmp(&self, other: &ElementSet) -> Ordering {
        for (a, b) in self.words.iter().zip(&other.words).rev() {
            let x = a ^ b;
            if x != 0 {
                let top = 63 - x.leading_zeros();
                return if a & (1 << top) != 0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
        }
        Ordering::Equal
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements().iter().map(|e| e.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `"[1,3,5]"` (or `"[]"`) into sorted, deduplicated elements.
pub fn parse_element_list(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::Parse(format!("expected a list like \"[1,2,3]\", got {s:?}"));
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(bad)?;
    let mut out = Vec::new();
    for part in inner.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        out.push(part.parse::<usize>().map_err(|_| bad())?);
    }
    out.sort_unstable();
    let before = out.len();
    out.dedup();
    if out.len() != before {
        return Err(Error::Parse(format!("repeated element in {s:?}")));
    }
    Ok(out)
}

/// A vertex of J(n, d): a `d`-subset of `{1,…,n}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vertex(ElementSet);

impl Vertex {
    pub fn from_elements(n: usize, elements: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set = ElementSet::empty(n);
        for e in elements {
            if e == 0 || e > n {
                return Err(Error::InvalidVertex(format!(
                    "element {e} outside ground set {{1,…,{n}}}"
                )));
            }
            set.insert(e);
        }
        Ok(Vertex(set))
    }

    /// Parses a vertex of J(n, d) from `"[1,2,…]"`.
    pub fn parse(p: &GroundParams, s: &str) -> Result<Self> {
        let elements = parse_element_list(s)?;
        if elements.len() != p.d() {
            return Err(Error::InvalidVertex(format!(
                "{s} has {} elements, expected {}",
                elements.len(),
                p.d()
            )));
        }
        Vertex::from_elements(p.n(), elements)
    }

    pub fn set(&self) -> &ElementSet {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn elements(&self) -> Vec<usize> {
        self.0.elements()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.0.contains(e)
    }

    pub fn contains_subset(&self, alpha: &SubsetOfX) -> bool {
        alpha.set().is_subset(&self.0)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Path length in J(n, d): `d − |x ∩ y|`.
pub fn distance(x: &Vertex, y: &Vertex) -> usize {
    x.len() - x.0.intersection_len(&y.0)
}

/// All vertices of J(n, d) in colex order, with the inverse map.
#[derive(Debug, Clone)]
pub struct VertexOrder {
    params: GroundParams,
    vertices: Vec<Vertex>,
}

impl VertexOrder {
    pub fn params(&self) -> GroundParams {
        self.params
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn get(&self, idx: usize) -> &Vertex {
        &self.vertices[idx]
    }

    /// Position of `v`, via the colex rank `Σ C(e_j − 1, j)` over the
    /// sorted elements `e_1 < … < e_d`.
    pub fn position(&self, v: &Vertex) -> Option<usize> {
        if v.len() != self.params.d() || v.elements().last().is_some_and(|&e| e > self.params.n()) {
            return None;
        }
        let rank: u64 = v
            .elements()
            .iter()
            .enumerate()
            .map(|(j, &e)| binomial_u64(e as u64 - 1, j as i64 + 1))
            .sum();
        Some(rank as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.iter()
    }
}

/// All `d`-subsets of `{1,…,n}` in colex order.
pub fn enumerate_vertices(p: GroundParams) -> VertexOrder {
    let (n, d) = (p.n(), p.d());
    let mut vertices = Vec::with_capacity(p.num_vertices() as usize);
    let mut comb: Vec<usize> = (1..=d).collect();
    loop {
        vertices.push(Vertex::from_elements(n, comb.iter().copied()).expect("in range"));
        // Colex successor: bump the lowest element that has room, reset the
        // ones below it to 1,2,….
        let mut j = 0;
        loop {
            if j == d {
                return VertexOrder { params: p, vertices };
            }
            let limit = if j + 1 < d { comb[j + 1] } else { n + 1 };
            if comb[j] + 1 < limit {
                comb[j] += 1;
                for (t, c) in comb.iter_mut().enumerate().take(j) {
                    *c = t + 1;
                }
                break;
            }
            j += 1;
        }
    }
}

/// A subset α of the base vertex x.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubsetOfX(ElementSet);

impl SubsetOfX {
    /// Checks `set ⊆ x`.
    pub fn new(x: &Vertex, set: ElementSet) -> Result<Self> {
        if !set.is_subset(x.set()) {
            return Err(Error::InvalidSubset(format!("{set} is not a subset of {x}")));
        }
        Ok(SubsetOfX(set))
    }

    pub fn parse(x: &Vertex, n: usize, s: &str) -> Result<Self> {
        let elements = parse_element_list(s)?;
        let mut set = ElementSet::empty(n);
        for e in elements {
            if e == 0 || e > n {
                return Err(Error::InvalidSubset(format!("element {e} outside ground set")));
            }
            set.insert(e);
        }
        SubsetOfX::new(x, set)
    }

    pub fn set(&self) -> &ElementSet {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &SubsetOfX) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersection_len(&self, other: &SubsetOfX) -> usize {
        self.0.intersection_len(&other.0)
    }
}

impl fmt::Display for SubsetOfX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for SubsetOfX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for GroundParams {
    type Err = Error;

    /// `"n,d"`.
    fn from_str(s: &str) -> Result<Self> {
        let (n, d) = s
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected \"n,d\", got {s:?}")))?;
        let n = n.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
        let d = d.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
        GroundParams::new(n, d)
    }
}

/// All `2^d` subsets of `x`, by size, ties broken colex.
pub fn subsets_of_base(x: &Vertex) -> Vec<SubsetOfX> {
    let elements = x.elements();
    let width = x.set().words.len() * 64;
    let d = elements.len();
    let mut out: Vec<SubsetOfX> = (0u64..1 << d)
        .map(|mask| {
            let mut set = ElementSet::empty(width);
            for (j, &e) in elements.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    set.insert(e);
                }
            }
            SubsetOfX(set)
        })
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.0.colex_cmp(&b.0)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(n: usize, e: &[usize]) -> Vertex {
        Vertex::from_elements(n, e.iter().copied()).unwrap()
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(7, -1), BigUint::zero());
        assert_eq!(binomial(10, 4), BigUint::from(210u32));
        assert_eq!(binomial(3, 4), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(binomial_u64(11, 5), 462);
    }

    #[test]
    fn enumeration_examples() {
        let o = enumerate_vertices(GroundParams::new(4, 1).unwrap());
        let listed: Vec<String> = o.iter().map(|v| v.to_string()).collect();
        assert_eq!(listed, ["[1]", "[2]", "[3]", "[4]"]);

        let o = enumerate_vertices(GroundParams::new(5, 2).unwrap());
        assert_eq!(o.len(), 10);
        assert_eq!(o.get(0).to_string(), "[1,2]");
        assert_eq!(o.get(9).to_string(), "[4,5]");

        assert_eq!(enumerate_vertices(GroundParams::new(9, 4).unwrap()).len(), 126);
        assert_eq!(enumerate_vertices(GroundParams::new(3, 0).unwrap()).len(), 1);
    }

    #[test]
    fn enumeration_is_colex_and_positions_invert() {
        for (n, d) in [(5, 2), (7, 3), (9, 4), (70, 2)] {
            let o = enumerate_vertices(GroundParams::new(n, d).unwrap());
            assert_eq!(o.len() as u64, binomial_u64(n as u64, d as i64));
            for w in o.vertices().windows(2) {
                assert_eq!(w[0].set().colex_cmp(w[1].set()), Ordering::Less);
            }
            for (i, x) in o.iter().enumerate() {
                assert_eq!(o.position(x), Some(i));
            }
        }
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(&v(5, &[1, 2]), &v(5, &[1, 2])), 0);
        assert_eq!(distance(&v(5, &[1, 2]), &v(5, &[3, 4])), 2);
        assert_eq!(distance(&v(7, &[1, 2, 3]), &v(7, &[1, 4, 5])), 2);
    }

    #[test]
    fn subsets_examples() {
        let s: Vec<String> = subsets_of_base(&v(5, &[1, 2])).iter().map(|a| a.to_string()).collect();
        assert_eq!(s, ["[]", "[1]", "[2]", "[1,2]"]);
        let s = subsets_of_base(&v(7, &[1, 2, 3]));
        assert_eq!(s.len(), 8);
        assert!(s[0].is_empty());
        assert_eq!(s[7].to_string(), "[1,2,3]");
    }

    #[test]
    fn subsets_are_size_blocks() {
        let x = v(9, &[2, 4, 6, 8]);
        let s = subsets_of_base(&x);
        let mut start = 0;
        for k in 0..=4 {
            let len = binomial_u64(4, k) as usize;
            assert!(s[start..start + len].iter().all(|a| a.len() == k as usize));
            start += len;
        }
    }

    #[test]
    fn parsing() {
        let p = GroundParams::new(5, 2).unwrap();
        assert_eq!(Vertex::parse(&p, "[2, 1]").unwrap(), v(5, &[1, 2]));
        assert!(Vertex::parse(&p, "[1,2,3]").is_err());
        assert!(Vertex::parse(&p, "[1,6]").is_err());
        assert!(Vertex::parse(&p, "[1,1]").is_err());
        assert!(Vertex::parse(&p, "1,2").is_err());
        let x = v(5, &[1, 2]);
        assert!(SubsetOfX::parse(&x, 5, "[]").unwrap().is_empty());
        assert!(SubsetOfX::parse(&x, 5, "[3]").is_err());
        assert!(GroundParams::new(4, 2).is_err());
    }

    proptest! {
        #[test]
        fn distance_is_a_metric_on_jnd((n, d) in (3usize..12).prop_flat_map(|n| (Just(n), 0..=(n - 1) / 2)),
                                      i in 0usize..10_000, j in 0usize..10_000) {
            let o = enumerate_vertices(GroundParams::new(n, d).unwrap());
            let x = o.get(i % o.len());
            let y = o.get(j % o.len());
            prop_assert_eq!(distance(x, y), distance(y, x));
            prop_assert!(distance(x, y) <= d);
            prop_assert_eq!(distance(x, y) == 0, x == y);
        }
    }
}
