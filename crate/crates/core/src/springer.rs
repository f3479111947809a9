//! The Springer correspondence for the exotic nilpotent cone: the table
//! pairing orbits with `W_n`-irreducibles, a solver that recovers the pairing
//! rank by rank from restriction data, and the numerical cross-checks.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bicomb::{
    bipartitions_of, fiber_dim_d, hasse_covers, orbit_dim, removable_nodes, Bipartition, Component,
    Partition,
};
use crate::error::{Error, Result};
use crate::hyperoct::{branching_from_tables, irrep_dim, wn_order, BranchingMatrix, CharacterTable};

/// One disagreement found by a check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mismatch {
    pub check: String,
    pub instance: String,
    pub expected: Value,
    pub got: Value,
}

/// Outcome of a check suite: how many instances were examined and which
/// ones disagreed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub instances: usize,
    pub mismatches: Vec<Mismatch>,
}

impl CheckReport {
    pub fn new(check: &str) -> Self {
        CheckReport {
            check: check.to_string(),
            instances: 0,
            mismatches: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// Records one instance, adding a mismatch when `expected != got`.
    pub fn compare<T: Serialize + PartialEq>(&mut self, instance: impl Into<String>, expected: T, got: T) {
        self.instances += 1;
        if expected != got {
            self.mismatches.push(Mismatch {
                check: self.check.clone(),
                instance: instance.into(),
                expected: json!(expected),
                got: json!(got),
            });
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.instances += other.instances;
        self.mismatches.extend(other.mismatches);
    }
}

/// One row of the Springer table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub label: Bipartition,
    pub orbit_dim: usize,
    pub d: usize,
    pub irrep: Bipartition,
    pub irrep_dim: u128,
    /// Labels covered by this one in the closure order.
    pub covers: Vec<Bipartition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpringerTable {
    pub n: usize,
    pub rows: Vec<OrbitRecord>,
}

impl SpringerTable {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("label\torbit_dim\td\tirrep\tirrep_dim\tcovers\n");
        for r in &self.rows {
            let covers: Vec<String> = r.covers.iter().map(ToString::to_string).collect();
            let covers = if covers.is_empty() { "-".to_string() } else { covers.join(" ") };
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                r.label, r.orbit_dim, r.d, r.irrep, r.irrep_dim, covers
            ));
        }
        out
    }
}

/// Orbit `O_Λ` paired with `Ṽ_Λ`, in canonical label order.
pub fn springer_table(n: usize) -> Result<SpringerTable> {
    if n == 0 {
        return Err(Error::RangeError("rank n must be at least 1".into()));
    }
    let covers = hasse_covers(n);
    let rows = bipartitions_of(n)
        .into_iter()
        .map(|label| {
            let below = covers
                .iter()
                .filter(|(hi, _)| *hi == label)
                .map(|(_, lo)| lo.clone())
                .collect();
            Ok(OrbitRecord {
                orbit_dim: orbit_dim(&label, n)?,
                d: fiber_dim_d(&label, n)?,
                irrep_dim: irrep_dim(&label),
                irrep: label.clone(),
                covers: below,
                label,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpringerTable { n, rows })
}

/// The orbit-to-irreducible assignment found at one rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankAssignment {
    pub rank: usize,
    /// `(orbit, irrep)` in canonical orbit order.
    pub pairs: Vec<(Bipartition, Bipartition)>,
    /// Whether the restriction constraints alone, without pinning the
    /// trivial and sign representations, already force this assignment.
    pub unique_without_axioms: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrespondenceMap {
    pub ranks: Vec<RankAssignment>,
}

impl CorrespondenceMap {
    pub fn is_identity(&self) -> bool {
        self.ranks.iter().all(|r| r.pairs.iter().all(|(o, i)| o == i))
    }

    pub fn get(&self, rank: usize, orbit: &Bipartition) -> Option<&Bipartition> {
        let r = self.ranks.iter().find(|r| r.rank == rank)?;
        r.pairs.iter().find(|(o, _)| o == orbit).map(|(_, i)| i)
    }
}

/// Finds the perfect matchings of a bipartite graph given as adjacency
/// lists from left to right vertices: returns one matching and whether it
/// is the only one.
fn unique_perfect_matching(adj: &[Vec<usize>], right: usize) -> Option<(Vec<usize>, bool)> {
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].is_none_or(|w| augment(w, adj, seen, owner)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }
    let left = adj.len();
    if left != right {
        return None;
    }
    let mut owner: Vec<Option<usize>> = vec![None; right];
    for u in 0..left {
        if !augment(u, adj, &mut vec![false; right], &mut owner) {
            return None;
        }
    }
    let mut matched = vec![0usize; left];
    for (v, u) in owner.iter().enumerate() {
        matched[u.expect("perfect")] = v;
    }
    // The matching is unique iff the graph with left->right along unmatched
    // edges and right->left along matched edges has no cycle.
    let node_count = left + right;
    let succ = |x: usize| -> Vec<usize> {
        if x < left {
            adj[x].iter().filter(|&&v| v != matched[x]).map(|&v| left + v).collect()
        } else {
            vec![owner[x - left].expect("perfect")]
        }
    };
    let mut state = vec![0u8; node_count];
    for start in 0..node_count {
        if state[start] != 0 {
            continue;
        }
        let mut stack = vec![(start, succ(start), 0usize)];
        state[start] = 1;
        while let Some((node, next, idx)) = stack.last_mut() {
            if *idx < next.len() {
                let t = next[*idx];
                *idx += 1;
                match state[t] {
                    0 => {
                        state[t] = 1;
                        let s = succ(t);
                        stack.push((t, s, 0));
                    }
                    1 => return Some((matched, false)),
                    _ => {}
                }
            } else {
                state[*node] = 2;
                stack.pop();
            }
        }
    }
    Some((matched, true))
}

/// Recovers the orbit-to-irreducible assignment rank by rank. At each rank
/// the trivial character is pinned to `((k),-)` and the sign character to
/// `(-,(1^k))`; every other orbit may only go to an irreducible whose
/// restriction contains the image of each orbit obtained by removing a
/// node. The resulting bipartite constraint must have exactly one perfect
/// matching.
pub fn determine_correspondence(n_max: usize) -> Result<CorrespondenceMap> {
    if n_max == 0 {
        return Err(Error::RangeError("n_max must be at least 1".into()));
    }
    let tables: Vec<CharacterTable> = (1..=n_max).map(CharacterTable::build).collect();
    let mut ranks: Vec<RankAssignment> = Vec::new();
    for k in 1..=n_max {
        let table = &tables[k - 1];
        let labels = table.irreps.clone();
        let trivial = find_row(table, |_| 1)?;
        let sign = find_row(table, |c| {
            let b = if c.second.len() % 2 == 0 { 1 } else { -1 };
            b * c.first.union(&c.second).sign()
        })?;
        let top = Bipartition::top(k);
        let bottom = Bipartition::new(Partition::empty(), Partition::column(k));

        let branching = if k >= 2 {
            Some(branching_from_tables(table, &tables[k - 2])?)
        } else {
            None
        };
        let previous = ranks.last();
        let allowed = |orbit: &Bipartition, irrep_idx: usize| -> Result<bool> {
            let (Some(b), Some(prev)) = (&branching, previous) else {
                return Ok(true);
            };
            for node in removable_nodes(orbit)? {
                let image = prev
                    .pairs
                    .iter()
                    .find(|(o, _)| *o == node.result)
                    .map(|(_, i)| i)
                    .expect("previous rank covers every label");
                let col = b.cols.iter().position(|c| c == image).expect("label present");
                if b.entries[irrep_idx][col] < 1 {
                    return Ok(false);
                }
            }
            Ok(true)
        };

        let mut free_adj = Vec::with_capacity(labels.len());
        for orbit in &labels {
            let mut row = Vec::new();
            for j in 0..labels.len() {
                if allowed(orbit, j)? {
                    row.push(j);
                }
            }
            free_adj.push(row);
        }
        let pinned_adj: Vec<Vec<usize>> = labels
            .iter()
            .zip(&free_adj)
            .map(|(orbit, row)| {
                if *orbit == top {
                    row.iter().copied().filter(|&j| j == trivial).collect()
                } else if *orbit == bottom {
                    row.iter().copied().filter(|&j| j == sign).collect()
                } else {
                    row.iter().copied().filter(|&j| j != trivial && j != sign).collect()
                }
            })
            .collect();

        let (matching, unique) = unique_perfect_matching(&pinned_adj, labels.len()).ok_or_else(|| {
            Error::AmbiguousAssignment {
                rank: k,
                detail: "no bijection satisfies the constraints".into(),
            }
        })?;
        if !unique {
            return Err(Error::AmbiguousAssignment {
                rank: k,
                detail: "more than one bijection satisfies the constraints".into(),
            });
        }
        let unique_without_axioms = matches!(unique_perfect_matching(&free_adj, labels.len()), Some((_, true)));
        ranks.push(RankAssignment {
            rank: k,
            pairs: labels
                .iter()
                .zip(&matching)
                .map(|(o, &j)| (o.clone(), labels[j].clone()))
                .collect(),
            unique_without_axioms,
        });
    }
    Ok(CorrespondenceMap { ranks })
}

fn find_row(
    table: &CharacterTable,
    value: impl Fn(&Bipartition) -> i64,
) -> Result<usize> {
    let target: Vec<i64> = table.classes.iter().map(|c| value(&c.signature)).collect();
    table
        .values
        .iter()
        .position(|row| *row == target)
        .ok_or_else(|| Error::AmbiguousAssignment {
            rank: table.n,
            detail: "linear character missing from the table".into(),
        })
}

/// Compares the branching matrix `W_n ↓ W_{n-1}` with removable-node
/// incidence: 1 exactly when `Λ'` arises from `Λ` by removing a node.
pub fn verify_restriction(n: usize) -> Result<CheckReport> {
    if n < 2 {
        return Err(Error::RangeError(format!("restriction needs n >= 2, got {n}")));
    }
    let b = crate::hyperoct::restrict_branching(n)?;
    restriction_report(&b)
}

pub fn restriction_report(b: &BranchingMatrix) -> Result<CheckReport> {
    let mut report = CheckReport::new("restriction");
    for (row, label) in b.rows.iter().enumerate() {
        let below: Vec<Bipartition> = removable_nodes(label)?.into_iter().map(|r| r.result).collect();
        for (col, lower) in b.cols.iter().enumerate() {
            let expected = i64::from(below.contains(lower));
            report.compare(format!("{label} -> {lower}"), expected, b.entries[row][col]);
        }
    }
    Ok(report)
}

/// `d_Λ - d_Λ' = 2r - 2` for a node removed from row `r` of `μ⁽¹⁾` and
/// `2r - 1` for one removed from `μ⁽²⁾`.
pub fn d_difference_check(n: usize) -> Result<CheckReport> {
    if n < 2 {
        return Err(Error::RangeError(format!("d-difference needs n >= 2, got {n}")));
    }
    let mut report = CheckReport::new("d-diff");
    for label in bipartitions_of(n) {
        let d = fiber_dim_d(&label, n)? as i64;
        for node in removable_nodes(&label)? {
            let d_prime = fiber_dim_d(&node.result, n - 1)? as i64;
            let r = node.row as i64;
            let expected = match node.component {
                Component::First => 2 * r - 2,
                Component::Second => 2 * r - 1,
            };
            report.compare(format!("{label} -> {}", node.result), expected, d - d_prime);
        }
    }
    Ok(report)
}

/// `Σ_Λ (dim Ṽ_Λ)²` and `|W_n|`.
pub fn sum_squares_check(n: usize) -> (u128, u128) {
    let sum = bipartitions_of(n).iter().map(|l| irrep_dim(l).pow(2)).sum();
    (sum, wn_order(n))
}

/// Compares a correspondence map with the identity assignment.
pub fn determine_report(map: &CorrespondenceMap) -> CheckReport {
    let mut report = CheckReport::new("determine");
    for r in &map.ranks {
        for (orbit, irrep) in &r.pairs {
            report.compare(format!("rank {} {orbit}", r.rank), orbit.to_string(), irrep.to_string());
        }
    }
    report
}

/// Labels grouped by the dimension of their orbit.
pub fn labels_by_orbit_dim(n: usize) -> Result<HashMap<usize, Vec<Bipartition>>> {
    let mut out: HashMap<usize, Vec<Bipartition>> = HashMap::new();
    for l in bipartitions_of(n) {
        out.entry(orbit_dim(&l, n)?).or_default().push(l);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(s: &str) -> Bipartition {
        s.parse().unwrap()
    }

    #[test]
    fn small_tables() {
        let t1 = springer_table(1).unwrap();
        assert_eq!(t1.rows.len(), 2);
        assert_eq!((t1.rows[0].orbit_dim, t1.rows[0].irrep_dim), (2, 1));
        assert_eq!((t1.rows[1].orbit_dim, t1.rows[1].irrep_dim), (0, 1));
        let t2 = springer_table(2).unwrap();
        let dims: Vec<u128> = t2.rows.iter().map(|r| r.irrep_dim).collect();
        let orbits: Vec<usize> = t2.rows.iter().map(|r| r.orbit_dim).collect();
        assert_eq!(dims, vec![1, 2, 1, 1, 1]);
        assert_eq!(orbits, vec![8, 6, 4, 4, 0]);
        for n in 1..=5 {
            let t = springer_table(n).unwrap();
            assert_eq!(t.rows[0].d, 0);
            assert_eq!(t.rows.last().unwrap().d, n * n);
            for r in &t.rows {
                assert_eq!(r.orbit_dim + 2 * r.d, 2 * n * n);
            }
        }
    }

    #[test]
    fn matching_uniqueness() {
        assert_eq!(unique_perfect_matching(&[vec![0], vec![1]], 2), Some((vec![0, 1], true)));
        let (_, unique) = unique_perfect_matching(&[vec![0, 1], vec![0, 1]], 2).unwrap();
        assert!(!unique);
        assert_eq!(unique_perfect_matching(&[vec![0], vec![0]], 2), None);
        let (m, unique) = unique_perfect_matching(&[vec![0, 1], vec![1]], 2).unwrap();
        assert_eq!((m, unique), (vec![0, 1], true));
    }

    #[test]
    fn correspondence_small_ranks() {
        let map = determine_correspondence(3).unwrap();
        assert!(map.is_identity());
        assert_eq!(map.ranks[0].pairs.len(), 2);
        assert_eq!(map.ranks[1].pairs.len(), 5);
        assert_eq!(map.get(2, &bp("1|1")), Some(&bp("1|1")));
        assert!(determine_report(&map).passed());
    }

    #[test]
    fn restriction_and_d_diff() {
        let r = verify_restriction(2).unwrap();
        assert_eq!(r.instances, 10);
        assert!(r.passed());
        let d = d_difference_check(2).unwrap();
        assert!(d.passed());
        assert!(d.instances >= 2);
    }

    #[test]
    fn sum_squares() {
        assert_eq!(sum_squares_check(1), (2, 2));
        assert_eq!(sum_squares_check(2), (8, 8));
        assert_eq!(sum_squares_check(8), (10321920, 10321920));
    }

    #[test]
    fn report_records_mismatches() {
        let mut r = CheckReport::new("demo");
        r.compare("a", 1, 1);
        r.compare("b", 1, 2);
        assert_eq!(r.instances, 2);
        assert_eq!(r.mismatches.len(), 1);
        assert_eq!(
            serde_json::to_string(&r.mismatches[0]).unwrap(),
            r#"{"check":"demo","instance":"b","expected":1,"got":2}"#
        );
    }
}
