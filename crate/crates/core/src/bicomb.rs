//! Partition and bipartition combinatorics: enumeration, the `n(.)`
//! statistic, interleaved compositions, the closure order on orbit labels,
//! orbit and fiber dimensions, and removable nodes.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A partition, stored as its positive parts in weakly decreasing order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Canonicalizes `parts`: sorts them decreasingly and drops zeros.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// `(1^n)`.
    pub fn column(n: usize) -> Self {
        Partition { parts: vec![1; n] }
    }

    /// `(n)`, or the empty partition for `n = 0`.
    pub fn row(n: usize) -> Self {
        Self::new(vec![n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Part `i` (0-based); zero beyond the length.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `n(λ) = Σ (i-1) λ_i`.
    pub fn n_invariant(&self) -> usize {
        self.parts.iter().enumerate().map(|(i, &p)| i * p).sum()
    }

    pub fn conjugate(&self) -> Self {
        let first = self.part(0);
        Partition {
            parts: (1..=first)
                .map(|j| self.parts.iter().take_while(|&&p| p >= j).count())
                .collect(),
        }
    }

    /// Componentwise sum `λ + μ`.
    pub fn sum(&self, other: &Partition) -> Self {
        let len = self.len().max(other.len());
        Partition::new((0..len).map(|i| self.part(i) + other.part(i)).collect())
    }

    /// Multiset union `λ ∪ μ`.
    pub fn union(&self, other: &Partition) -> Self {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        Partition::new(parts)
    }

    /// `λ ∪ λ`.
    pub fn doubled(&self) -> Self {
        self.union(self)
    }

    /// Inverse of [`Partition::doubled`], if every multiplicity is even.
    pub fn halved(&self) -> Option<Self> {
        let mut parts = Vec::with_capacity(self.len() / 2);
        let mut i = 0;
        while i < self.parts.len() {
            let p = self.parts[i];
            let mult = self.parts[i..].iter().take_while(|&&q| q == p).count();
            if mult % 2 == 1 {
                return None;
            }
            parts.extend(std::iter::repeat_n(p, mult / 2));
            i += mult;
        }
        Some(Partition { parts })
    }

    /// Multiplicity vector: entry `i` counts parts equal to `i + 1`.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m = vec![0; self.part(0)];
        for &p in &self.parts {
            m[p - 1] += 1;
        }
        m
    }

    /// Rows (1-based) holding a removable corner.
    pub fn corner_rows(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.part(i) > self.part(i + 1))
            .map(|i| i + 1)
            .collect()
    }

    /// The partition with one node removed from `row` (1-based), if that
    /// row ends in a corner.
    pub fn remove_node(&self, row: usize) -> Option<Self> {
        if row == 0 || row > self.len() || self.part(row - 1) <= self.part(row) {
            return None;
        }
        let mut parts = self.parts.clone();
        parts[row - 1] -= 1;
        Some(Partition::new(parts))
    }

    /// Number of standard Young tableaux, by the hook length formula.
    pub fn standard_tableaux(&self) -> u128 {
        let conj = self.conjugate();
        let mut hooks: u128 = 1;
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                hooks *= (row - j + conj.part(j) - i - 1) as u128;
            }
        }
        factorial(self.size()) / hooks
    }

    /// Centralizer order `z_λ = Π i^{m_i} m_i!` in the symmetric group.
    pub fn z(&self) -> u128 {
        self.multiplicities()
            .iter()
            .enumerate()
            .map(|(i, &m)| ((i + 1) as u128).pow(m as u32) * factorial(m))
            .product()
    }

    /// Sign of a permutation of this cycle type.
    pub fn sign(&self) -> i64 {
        if (self.size() - self.len()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("-");
        }
        let s: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        f.write_str(&s.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `"2,1,1"`; `"-"` is the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "-" {
            return Ok(Partition::empty());
        }
        if s.is_empty() {
            return Err(Error::Parse("empty partition must be written as \"-\"".into()));
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|&v| v > 0)
                    .ok_or_else(|| Error::Parse(format!("bad partition part {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!("partition {s:?} is not weakly decreasing")));
        }
        Ok(Partition { parts })
    }
}

pub(crate) fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// All partitions of `n` in decreasing lexicographic order, `(n)` first.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for first in (1..=rest.min(max)).rev() {
            cur.push(first);
            rec(rest - first, first, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// An ordered pair of partitions `(μ⁽¹⁾, μ⁽²⁾)`.
///
/// The string form is `"2,1|1"`, with `-` for an empty component. The
/// ordering is the canonical table order: decreasing lexicographic order of
/// the interleaved composition, so `((n),-)` sorts first and `(-,(1^n))`
/// last.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bipartition {
    pub first: Partition,
    pub second: Partition,
}

impl Bipartition {
    pub fn new(first: Partition, second: Partition) -> Self {
        Bipartition { first, second }
    }

    pub fn size(&self) -> usize {
        self.first.size() + self.second.size()
    }

    /// `ν = μ⁽¹⁾ + μ⁽²⁾`.
    pub fn nu(&self) -> Partition {
        self.first.sum(&self.second)
    }

    /// `n(Λ) = n(μ⁽¹⁾ + μ⁽²⁾)`.
    pub fn n_invariant(&self) -> usize {
        self.nu().n_invariant()
    }

    /// The open-orbit label `((n), -)`.
    pub fn top(n: usize) -> Self {
        Bipartition::new(Partition::row(n), Partition::empty())
    }

    /// The zero-orbit label `(-, (1^n))`.
    pub fn bottom(n: usize) -> Self {
        Bipartition::new(Partition::empty(), Partition::column(n))
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (interleave_c(self), interleave_c(other));
        let len = a.parts.len().max(b.parts.len());
        for i in 0..len {
            match b.part(i).cmp(&a.part(i)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        // c determines the label up to zero padding, so this only runs on equal labels
        (&self.first, &self.second).cmp(&(&other.first, &other.second))
    }
}

impl PartialOrd for Bipartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bipartition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_cmp(other)
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.first, self.second)
    }
}

impl FromStr for Bipartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("bipartition {s:?} lacks '|'")))?;
        if b.contains('|') {
            return Err(Error::Parse(format!("bipartition {s:?} has more than one '|'")));
        }
        Ok(Bipartition::new(a.parse()?, b.parse()?))
    }
}

impl Serialize for Bipartition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Bipartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A finite sequence of non-negative integers, compared after zero padding.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Self {
        Composition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }
}

/// All bipartitions of `n`, in canonical order.
pub fn bipartitions_of(n: usize) -> Vec<Bipartition> {
    let mut out = Vec::new();
    for m in 0..=n {
        for a in partitions_of(m) {
            for b in partitions_of(n - m) {
                out.push(Bipartition::new(a.clone(), b));
            }
        }
    }
    out.sort();
    out
}

/// `n(λ) = Σ (i-1) λ_i`.
pub fn n_invariant(lambda: &Partition) -> usize {
    lambda.n_invariant()
}

/// `c(Λ) = (μ_1, ν_1, μ_2, ν_2, ...)` for `Λ = (μ, ν)`.
pub fn interleave_c(label: &Bipartition) -> Composition {
    let len = label.first.len().max(label.second.len());
    let mut parts = Vec::with_capacity(2 * len);
    for i in 0..len {
        parts.push(label.first.part(i));
        parts.push(label.second.part(i));
    }
    Composition { parts }
}

/// Dominance order on compositions of equal total: every prefix sum of `c`
/// is bounded by the corresponding prefix sum of `d`.
pub fn dominance_leq(c: &Composition, d: &Composition) -> Result<bool> {
    if c.total() != d.total() {
        return Err(Error::UnequalTotals(c.total(), d.total()));
    }
    let len = c.parts.len().max(d.parts.len());
    let (mut sc, mut sd) = (0usize, 0usize);
    for i in 0..len {
        sc += c.part(i);
        sd += d.part(i);
        if sc > sd {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Closure order on orbit labels: `O_μ ⊂ closure(O_λ)` iff `c(μ) ≤ c(λ)`.
pub fn closure_leq(mu: &Bipartition, lambda: &Bipartition) -> Result<bool> {
    if mu.size() != lambda.size() {
        return Err(Error::RankMismatch(mu.size(), lambda.size()));
    }
    dominance_leq(&interleave_c(mu), &interleave_c(lambda))
}

fn check_rank(label: &Bipartition, n: usize) -> Result<()> {
    if label.size() != n {
        return Err(Error::RankMismatch(label.size(), n));
    }
    Ok(())
}

/// `dim O_Λ = 2n² - 2n - 4n(Λ) + 2|μ⁽¹⁾|`.
pub fn orbit_dim(label: &Bipartition, n: usize) -> Result<usize> {
    check_rank(label, n)?;
    let d = 2 * n * n + 2 * label.first.size();
    Ok(d - 2 * n - 4 * label.n_invariant())
}

/// `d_Λ = 2n(Λ) + n - |μ⁽¹⁾|`, half the codimension of the orbit in the
/// cone.
pub fn fiber_dim_d(label: &Bipartition, n: usize) -> Result<usize> {
    check_rank(label, n)?;
    Ok(2 * label.n_invariant() + n - label.first.size())
}

/// Which component a node is removed from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Component {
    First,
    Second,
}

impl Component {
    pub fn index(self) -> u8 {
        match self {
            Component::First => 1,
            Component::Second => 2,
        }
    }
}

/// A corner removal `Λ -> Λ'`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RemovableNode {
    pub component: Component,
    /// Row of the removed node, 1-based, in the component's own indexing.
    pub row: usize,
    pub result: Bipartition,
}

/// All corner removals, first component before second, rows increasing.
pub fn removable_nodes(label: &Bipartition) -> Result<Vec<RemovableNode>> {
    if label.size() == 0 {
        return Err(Error::EmptyBipartition);
    }
    let mut out = Vec::new();
    for row in label.first.corner_rows() {
        out.push(RemovableNode {
            component: Component::First,
            row,
            result: Bipartition::new(label.first.remove_node(row).unwrap(), label.second.clone()),
        });
    }
    for row in label.second.corner_rows() {
        out.push(RemovableNode {
            component: Component::Second,
            row,
            result: Bipartition::new(label.first.clone(), label.second.remove_node(row).unwrap()),
        });
    }
    Ok(out)
}

/// Covering pairs `(upper, lower)` of the closure order on labels of `n`.
pub fn hasse_covers(n: usize) -> Vec<(Bipartition, Bipartition)> {
    let labels = bipartitions_of(n);
    let k = labels.len();
    let less: Vec<Vec<bool>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| i != j && closure_leq(&labels[i], &labels[j]).expect("same rank"))
                .collect()
        })
        .collect();
    let mut covers = Vec::new();
    for hi in 0..k {
        for lo in 0..k {
            if less[lo][hi] && !(0..k).any(|mid| less[lo][mid] && less[mid][hi]) {
                covers.push((labels[hi].clone(), labels[lo].clone()));
            }
        }
    }
    covers
}

/// Graphviz rendering of the closure order: label strings as node ids,
/// orbit dimension as the rank hint.
pub fn hasse_dot(n: usize) -> String {
    let labels = bipartitions_of(n);
    let mut out = format!("digraph closure_order_{n} {{\n  rankdir=BT;\n");
    let mut dims: Vec<usize> = labels.iter().map(|l| orbit_dim(l, n).unwrap()).collect();
    for l in &labels {
        let d = orbit_dim(l, n).unwrap();
        out.push_str(&format!("  \"{l}\" [label=\"{l}\\ndim {d}\"];\n"));
    }
    dims.sort_unstable();
    dims.dedup();
    for d in dims {
        let same: Vec<String> = labels
            .iter()
            .filter(|l| orbit_dim(l, n).unwrap() == d)
            .map(|l| format!("\"{l}\""))
            .collect();
        out.push_str(&format!("  {{ rank=same; {}; }}\n", same.join("; ")));
    }
    for (hi, lo) in hasse_covers(n) {
        out.push_str(&format!("  \"{lo}\" -> \"{hi}\";\n"));
    }
    out.push_str("}\n");
    out
}
