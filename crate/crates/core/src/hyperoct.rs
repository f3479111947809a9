//! Characters of the hyperoctahedral group `W_n = S_n ⋉ (Z/2)^n`.
//!
//! Conjugacy classes are indexed by pairs `(α, β)` of partitions: `α` lists
//! the cycles with an even number of sign flips, `β` those with an odd
//! number. Irreducibles are indexed by bipartitions `(μ, ν)` and obtained by
//! inducing `χ^μ ⊠ (χ^ν · δ)` from `W_m × W_{n-m}`, where `δ` is the product
//! of the signs on the second factor.

use std::collections::{BTreeMap, HashMap};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bicomb::{bipartitions_of, binomial, factorial, partitions_of, Bipartition, Partition};
use crate::error::{Error, Result};

/// A conjugacy class of `W_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WnClass {
    pub signature: Bipartition,
    pub centralizer_order: u128,
}

impl WnClass {
    pub fn new(signature: Bipartition) -> Self {
        let a = &signature.first;
        let b = &signature.second;
        let centralizer_order = a.z() * (1u128 << a.len()) * b.z() * (1u128 << b.len());
        WnClass {
            signature,
            centralizer_order,
        }
    }

    pub fn size(&self) -> u128 {
        wn_order(self.signature.size()) / self.centralizer_order
    }
}

/// `|W_n| = 2^n n!`.
pub fn wn_order(n: usize) -> u128 {
    (1u128 << n) * factorial(n)
}

/// Classes ordered by `|α|` descending, then `α` ascending, then `β`
/// descending; the identity comes first and the central element last.
pub fn wn_classes(n: usize) -> Vec<WnClass> {
    let mut out = Vec::new();
    for a_size in (0..=n).rev() {
        let mut alphas = partitions_of(a_size);
        alphas.reverse();
        let betas = partitions_of(n - a_size);
        for a in &alphas {
            for b in &betas {
                out.push(WnClass::new(Bipartition::new(a.clone(), b.clone())));
            }
        }
    }
    out
}

/// Character table of `S_k`, values indexed `[λ][ρ]` in the order of
/// [`partitions_of`].
#[derive(Clone, Debug)]
pub struct SnTable {
    index: HashMap<Partition, usize>,
    values: Vec<Vec<i64>>,
}

impl SnTable {
    pub fn new(k: usize) -> Self {
        let parts = partitions_of(k);
        let mut memo = HashMap::new();
        let values = parts
            .iter()
            .map(|l| parts.iter().map(|r| mn_character(l, r.parts(), &mut memo)).collect())
            .collect();
        let index = parts.into_iter().enumerate().map(|(i, p)| (p, i)).collect();
        SnTable { index, values }
    }

    pub fn value(&self, lambda: &Partition, rho: &Partition) -> i64 {
        self.values[self.index[lambda]][self.index[rho]]
    }
}

/// Murnaghan-Nakayama on beta-sets: strip border strips of length `ρ_1`.
fn mn_character(lambda: &Partition, rho: &[usize], memo: &mut HashMap<(Partition, Vec<usize>), i64>) -> i64 {
    if rho.is_empty() {
        return 1;
    }
    let key = (lambda.clone(), rho.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let r = rho[0];
    let len = lambda.len();
    let beads: Vec<usize> = (0..len).map(|i| lambda.part(i) + (len - 1 - i)).collect();
    let mut total = 0i64;
    for (i, &b) in beads.iter().enumerate() {
        if b < r || beads.contains(&(b - r)) {
            continue;
        }
        let height = beads.iter().filter(|&&c| c > b - r && c < b).count();
        let mut moved = beads.clone();
        moved[i] = b - r;
        moved.sort_unstable_by(|x, y| y.cmp(x));
        let m = moved.len();
        let parts: Vec<usize> = moved.iter().enumerate().map(|(j, &c)| c - (m - 1 - j)).collect();
        let sign = if height % 2 == 0 { 1 } else { -1 };
        total += sign * mn_character(&Partition::new(parts), &rho[1..], memo);
    }
    memo.insert(key, total);
    total
}

/// `χ^λ` of `S_{|λ|}` at cycle type `ρ`.
pub fn sn_character(lambda: &Partition, rho: &Partition) -> Result<i64> {
    if lambda.size() != rho.size() {
        return Err(Error::SizeMismatch(format!(
            "partition {lambda} vs cycle type {rho}"
        )));
    }
    Ok(mn_character(lambda, rho.parts(), &mut HashMap::new()))
}

/// All sub-multisets of `parts`, each with the product of binomials
/// counting how many ways it sits inside `parts`.
fn sub_multisets(parts: &Partition) -> Vec<(Partition, Partition, u128)> {
    let mut distinct: Vec<(usize, usize)> = Vec::new();
    for &q in parts.parts() {
        match distinct.last_mut() {
            Some((v, c)) if *v == q => *c += 1,
            _ => distinct.push((q, 1)),
        }
    }
    let mut out = vec![(Vec::new(), Vec::new(), 1u128)];
    for &(value, count) in &distinct {
        let mut next = Vec::with_capacity(out.len() * (count + 1));
        for (taken, rest, weight) in &out {
            for k in 0..=count {
                let mut t = taken.clone();
                t.extend(std::iter::repeat_n(value, k));
                let mut r = rest.clone();
                r.extend(std::iter::repeat_n(value, count - k));
                next.push((t, r, weight * binomial(count, k)));
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|(t, r, w)| (Partition::new(t), Partition::new(r), w))
        .collect()
}

/// Shared data for computing `W_n` characters: `S_k` tables for `k <= n`.
#[derive(Clone, Debug)]
pub struct Hyperoctahedral {
    n: usize,
    sn: Vec<SnTable>,
    classes: Vec<WnClass>,
}

impl Hyperoctahedral {
    pub fn new(n: usize) -> Self {
        Hyperoctahedral {
            n,
            sn: (0..=n).map(SnTable::new).collect(),
            classes: wn_classes(n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &[WnClass] {
        &self.classes
    }

    fn sn(&self, lambda: &Partition, rho: &Partition) -> i64 {
        self.sn[lambda.size()].value(lambda, rho)
    }

    /// Induction from `W_m × W_{n-m}` with `m = |ρ₁|`: sum over the ways the
    /// class `(α, β)` meets the subgroup. `second` evaluates the second
    /// factor's class function at `(α₂, β₂)`.
    fn induce(
        &self,
        rho1: &Partition,
        class: &Bipartition,
        second: impl Fn(&Partition, &Partition) -> i64,
    ) -> i64 {
        let m = rho1.size();
        let mut total = 0i64;
        for (a1, a2, wa) in sub_multisets(&class.first) {
            if a1.size() > m {
                continue;
            }
            for (b1, b2, wb) in sub_multisets(&class.second) {
                if a1.size() + b1.size() != m {
                    continue;
                }
                let left = self.sn(rho1, &a1.union(&b1));
                if left == 0 {
                    continue;
                }
                let right = second(&a2, &b2);
                total += (wa * wb) as i64 * left * right;
            }
        }
        total
    }

    /// `χ^{(μ,ν)}(α, β)`.
    pub fn character(&self, irrep: &Bipartition, class: &Bipartition) -> Result<i64> {
        if irrep.size() != self.n || class.size() != self.n {
            return Err(Error::SizeMismatch(format!(
                "irrep {irrep} and class {class} in W_{}",
                self.n
            )));
        }
        let nu = &irrep.second;
        Ok(self.induce(&irrep.first, class, |a2, b2| {
            let sign = if b2.len() % 2 == 0 { 1 } else { -1 };
            sign * self.sn(nu, &a2.union(b2))
        }))
    }

    pub fn class_function(&self, irrep: &Bipartition) -> Result<ClassFunction> {
        let values = self
            .classes
            .iter()
            .map(|c| self.character(irrep, &c.signature))
            .collect::<Result<Vec<_>>>()?;
        Ok(ClassFunction { n: self.n, values })
    }

    /// Character of `Ind(χ^{ρ₁} ⊠ (χ^{ρ₂} ⊗ H^{2k}(P_1^{n-m})))`. On
    /// `H^•(P_1^{n-m})` a positive `i`-cycle has trace `1 + t^i` and a
    /// negative `j`-cycle `1 - t^j`.
    fn fiber_character(&self, rho1: &Partition, rho2: &Partition, k: usize) -> ClassFunction {
        let values = self
            .classes
            .iter()
            .map(|c| {
                self.induce(rho1, &c.signature, |a2, b2| {
                    let mut poly = vec![1i64];
                    for &i in a2.parts() {
                        poly = poly_mul_binomial(&poly, i, 1);
                    }
                    for &j in b2.parts() {
                        poly = poly_mul_binomial(&poly, j, -1);
                    }
                    let coeff = poly.get(k).copied().unwrap_or(0);
                    coeff * self.sn(rho2, &a2.union(b2))
                })
            })
            .collect();
        ClassFunction { n: self.n, values }
    }
}

/// `poly · (1 + sign t^i)`.
fn poly_mul_binomial(poly: &[i64], i: usize, sign: i64) -> Vec<i64> {
    let mut out = vec![0i64; poly.len() + i];
    for (d, &c) in poly.iter().enumerate() {
        out[d] += c;
        out[d + i] += sign * c;
    }
    out
}

/// `χ^{(μ,ν)}(α, β)`.
pub fn wn_character(irrep: &Bipartition, class: &Bipartition) -> Result<i64> {
    if irrep.size() != class.size() {
        return Err(Error::SizeMismatch(format!("irrep {irrep} vs class {class}")));
    }
    Hyperoctahedral::new(irrep.size()).character(irrep, class)
}

/// `C(n, |μ|) f^μ f^ν`.
pub fn irrep_dim(irrep: &Bipartition) -> u128 {
    let n = irrep.size();
    binomial(n, irrep.first.size()) * irrep.first.standard_tableaux() * irrep.second.standard_tableaux()
}

/// A class function on `W_n`, values in [`wn_classes`] order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassFunction {
    pub n: usize,
    pub values: Vec<i64>,
}

/// `|W_n|⁻¹ Σ |class| f(c) g(c)`; characters of `W_n` are real.
pub fn inner_product(f: &ClassFunction, g: &ClassFunction) -> Result<Ratio<i128>> {
    if f.n != g.n || f.values.len() != g.values.len() {
        return Err(Error::SizeMismatch(format!(
            "class functions on W_{} and W_{}",
            f.n, g.n
        )));
    }
    let classes = wn_classes(f.n);
    if classes.len() != f.values.len() {
        return Err(Error::SizeMismatch(format!(
            "{} values for {} classes",
            f.values.len(),
            classes.len()
        )));
    }
    let sum: i128 = classes
        .iter()
        .zip(f.values.iter().zip(&g.values))
        .map(|(c, (&a, &b))| c.size() as i128 * a as i128 * b as i128)
        .sum();
    Ok(Ratio::new(sum, wn_order(f.n) as i128))
}

/// The regular character of `W_n`.
pub fn regular_character(n: usize) -> ClassFunction {
    let values = wn_classes(n)
        .iter()
        .enumerate()
        .map(|(i, _)| if i == 0 { wn_order(n) as i64 } else { 0 })
        .collect();
    ClassFunction { n, values }
}

/// Rows are irreducibles in canonical bipartition order, columns are classes
/// in [`wn_classes`] order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterTable {
    pub n: usize,
    pub irreps: Vec<Bipartition>,
    pub classes: Vec<WnClass>,
    pub values: Vec<Vec<i64>>,
}

impl CharacterTable {
    pub fn build(n: usize) -> Self {
        let h = Hyperoctahedral::new(n);
        Self::from_context(&h)
    }

    pub fn from_context(h: &Hyperoctahedral) -> Self {
        let irreps = bipartitions_of(h.n);
        let values = irreps
            .par_iter()
            .map(|irrep| h.class_function(irrep).expect("sizes agree").values)
            .collect();
        CharacterTable {
            n: h.n,
            irreps,
            classes: h.classes.clone(),
            values,
        }
    }

    pub fn row(&self, irrep: &Bipartition) -> Option<ClassFunction> {
        let i = self.irreps.iter().position(|l| l == irrep)?;
        Some(ClassFunction {
            n: self.n,
            values: self.values[i].clone(),
        })
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("irrep");
        for c in &self.classes {
            out.push('\t');
            out.push_str(&c.signature.to_string());
        }
        out.push('\n');
        for (irrep, row) in self.irreps.iter().zip(&self.values) {
            out.push_str(&irrep.to_string());
            for v in row {
                out.push('\t');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// `B[Λ][Λ'] = <Res χ_Λ, χ_Λ'>` for `W_{n-1} ⊂ W_n`; rows in canonical
/// order of rank `n`, columns of rank `n - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchingMatrix {
    pub n: usize,
    pub rows: Vec<Bipartition>,
    pub cols: Vec<Bipartition>,
    pub entries: Vec<Vec<i64>>,
}

/// Restricts through the class fusion `(α, β) -> (α ∪ (1), β)`.
pub fn restrict(upper: &ClassFunction) -> Result<ClassFunction> {
    let n = upper.n;
    if n == 0 {
        return Err(Error::RangeError("cannot restrict from W_0".into()));
    }
    let big = wn_classes(n);
    let index: HashMap<&Bipartition, usize> =
        big.iter().enumerate().map(|(i, c)| (&c.signature, i)).collect();
    let values = wn_classes(n - 1)
        .iter()
        .map(|c| {
            let fused = Bipartition::new(
                c.signature.first.union(&Partition::new(vec![1])),
                c.signature.second.clone(),
            );
            upper.values[index[&fused]]
        })
        .collect();
    Ok(ClassFunction { n: n - 1, values })
}

pub fn restrict_branching(n: usize) -> Result<BranchingMatrix> {
    if n < 2 {
        return Err(Error::RangeError(format!("branching needs n >= 2, got {n}")));
    }
    let upper = CharacterTable::build(n);
    let lower = CharacterTable::build(n - 1);
    branching_from_tables(&upper, &lower)
}

pub fn branching_from_tables(upper: &CharacterTable, lower: &CharacterTable) -> Result<BranchingMatrix> {
    if upper.n != lower.n + 1 {
        return Err(Error::SizeMismatch(format!(
            "tables of ranks {} and {}",
            upper.n, lower.n
        )));
    }
    let entries = upper
        .values
        .par_iter()
        .map(|row| {
            let res = restrict(&ClassFunction {
                n: upper.n,
                values: row.clone(),
            })?;
            lower
                .values
                .iter()
                .map(|col| {
                    let ip = inner_product(
                        &res,
                        &ClassFunction {
                            n: lower.n,
                            values: col.clone(),
                        },
                    )?;
                    integral(ip)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BranchingMatrix {
        n: upper.n,
        rows: upper.irreps.clone(),
        cols: lower.irreps.clone(),
        entries,
    })
}

fn integral(r: Ratio<i128>) -> Result<i64> {
    if !r.is_integer() {
        return Err(Error::RangeError(format!("non-integral multiplicity {r}")));
    }
    Ok(r.to_integer() as i64)
}

/// Multiplicities of each irreducible, per even degree `2k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedWnModule {
    pub n: usize,
    pub degrees: BTreeMap<usize, BTreeMap<Bipartition, i64>>,
}

impl GradedWnModule {
    pub fn dimension(&self) -> u128 {
        self.degrees
            .values()
            .flat_map(|m| m.iter())
            .map(|(l, &c)| irrep_dim(l) * c as u128)
            .sum()
    }
}

/// `Ind_{W_m × W_{n-m}}(χ^{ρ₁} ⊠ (χ^{ρ₂} ⊗ H^•(P_1^{n-m})))`, where `Z/2` acts
/// trivially on the first factor and by `-1` on each `H^2(P_1)`.
pub fn graded_fiber_module(n: usize, m: usize, rho1: &Partition, rho2: &Partition) -> Result<GradedWnModule> {
    if m > n || rho1.size() != m || rho2.size() != n - m {
        return Err(Error::RangeError(format!(
            "need 0 <= m <= n, |ρ₁| = m, |ρ₂| = n - m (got n={n}, m={m}, |ρ₁|={}, |ρ₂|={})",
            rho1.size(),
            rho2.size()
        )));
    }
    let h = Hyperoctahedral::new(n);
    let table = CharacterTable::from_context(&h);
    let mut degrees = BTreeMap::new();
    for k in 0..=n - m {
        let chi = h.fiber_character(rho1, rho2, k);
        let mut mult = BTreeMap::new();
        for (irrep, row) in table.irreps.iter().zip(&table.values) {
            let c = integral(inner_product(
                &chi,
                &ClassFunction {
                    n,
                    values: row.clone(),
                },
            )?)?;
            if c != 0 {
                mult.insert(irrep.clone(), c);
            }
        }
        degrees.insert(2 * k, mult);
    }
    Ok(GradedWnModule { n, degrees })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(s: &str) -> Bipartition {
        s.parse().unwrap()
    }

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn class_lists() {
        let c1 = wn_classes(1);
        assert_eq!(c1.len(), 2);
        assert_eq!(c1.iter().map(WnClass::size).collect::<Vec<_>>(), vec![1, 1]);
        let c2 = wn_classes(2);
        let labels: Vec<String> = c2.iter().map(|c| c.signature.to_string()).collect();
        assert_eq!(labels, vec!["1,1|-", "2|-", "1|1", "-|2", "-|1,1"]);
        assert_eq!(c2.iter().map(WnClass::size).collect::<Vec<_>>(), vec![1, 2, 2, 2, 1]);
        let c3 = wn_classes(3);
        assert_eq!(c3.len(), 10);
        assert_eq!(c3.iter().map(WnClass::size).sum::<u128>(), 48);
    }

    #[test]
    fn symmetric_characters() {
        for r in partitions_of(4) {
            assert_eq!(sn_character(&part("4"), &r).unwrap(), 1);
            assert_eq!(sn_character(&part("1,1,1,1"), &r).unwrap(), r.sign());
        }
        assert_eq!(sn_character(&part("2,1"), &part("1,1,1")).unwrap(), 2);
        assert_eq!(sn_character(&part("2,1"), &part("3")).unwrap(), -1);
        assert_eq!(sn_character(&part("2,1"), &part("2,1")).unwrap(), 0);
        assert!(sn_character(&part("2,1"), &part("2")).is_err());
    }

    #[test]
    fn hyperoctahedral_characters() {
        for n in 1..=4 {
            for c in wn_classes(n) {
                let sig = &c.signature;
                assert_eq!(wn_character(&Bipartition::top(n), sig).unwrap(), 1);
                let sign_b = if sig.second.len() % 2 == 0 { 1 } else { -1 };
                let sign = sign_b * sig.first.union(&sig.second).sign();
                let col = Bipartition::new(Partition::empty(), Partition::column(n));
                assert_eq!(wn_character(&col, sig).unwrap(), sign);
            }
        }
        let c2 = wn_classes(2);
        let row: Vec<i64> = c2
            .iter()
            .map(|c| wn_character(&bp("1|1"), &c.signature).unwrap())
            .collect();
        assert_eq!(row, vec![2, 0, 0, 0, -2]);
    }

    #[test]
    fn dimensions() {
        assert_eq!(irrep_dim(&Bipartition::top(5)), 1);
        assert_eq!(irrep_dim(&bp("1|1")), 2);
        assert_eq!(irrep_dim(&bp("1|2")), 3);
        for n in 1..=5 {
            let h = Hyperoctahedral::new(n);
            for l in bipartitions_of(n) {
                let id = h.classes()[0].signature.clone();
                assert_eq!(h.character(&l, &id).unwrap() as u128, irrep_dim(&l));
            }
        }
    }

    #[test]
    fn inner_products() {
        let t = CharacterTable::build(3);
        let reg = regular_character(3);
        for (l, row) in t.irreps.iter().zip(&t.values) {
            let f = ClassFunction { n: 3, values: row.clone() };
            assert_eq!(inner_product(&f, &f).unwrap(), Ratio::from_integer(1));
            assert_eq!(inner_product(&reg, &f).unwrap(), Ratio::from_integer(irrep_dim(l) as i128));
        }
        let triv = t.row(&Bipartition::top(3)).unwrap();
        let sign = t.row(&bp("-|1,1,1")).unwrap();
        assert_eq!(inner_product(&triv, &sign).unwrap(), Ratio::from_integer(0));
        assert!(inner_product(&triv, &regular_character(2)).is_err());
    }

    #[test]
    fn branching_small() {
        let b = restrict_branching(2).unwrap();
        let i = b.rows.iter().position(|l| *l == bp("1|1")).unwrap();
        let cols: Vec<String> = b.cols.iter().map(ToString::to_string).collect();
        assert_eq!(cols, vec!["1|-", "-|1"]);
        assert_eq!(b.entries[i], vec![1, 1]);
        assert_eq!(b.entries[0], vec![1, 0]);
        assert!(restrict_branching(1).is_err());
    }

    #[test]
    fn fiber_modules() {
        let top = graded_fiber_module(3, 3, &part("2,1"), &Partition::empty()).unwrap();
        assert_eq!(top.degrees.len(), 1);
        assert_eq!(top.degrees[&0], BTreeMap::from([(bp("2,1|-"), 1)]));

        let p1 = graded_fiber_module(1, 0, &Partition::empty(), &part("1")).unwrap();
        assert_eq!(p1.degrees[&0], BTreeMap::from([(bp("1|-"), 1)]));
        assert_eq!(p1.degrees[&2], BTreeMap::from([(bp("-|1"), 1)]));

        for n in 1..=4 {
            let m = graded_fiber_module(n, 0, &Partition::empty(), &Partition::row(n)).unwrap();
            assert_eq!(m.dimension(), 1u128 << n);
        }
        assert!(graded_fiber_module(2, 3, &Partition::empty(), &Partition::empty()).is_err());
    }
}
