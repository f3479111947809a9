//! Brute-force point counts over `F_p` for small ranks: the symplectic
//! group, the exotic nilpotent cone and its orbits, stabilizers, and the
//! conjugacy classes of invertible self-adjoint matrices.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bicomb::{bipartitions_of, closure_leq, Bipartition, Partition};
use crate::classify::PairClassifier;
use crate::error::{Error, Result};
use crate::ffield::FpMatrix;
use crate::symplectic::{
    adjoint, embed_in_a, increment, klyachko_embed, log_map, normal_form_pair, self_adjoint_basis,
    transvection, Flavor, SymplecticSpace,
};

/// `|Sp_{2n}(F_q)| = q^{n²} Π_{i=1..n} (q^{2i} - 1)`.
pub fn sp_group_order(n: usize, q: u64) -> u128 {
    let q = q as u128;
    (1..=n).fold(q.pow((n * n) as u32), |acc, i| acc * (q.pow(2 * i as u32) - 1))
}

fn size_gate(n: usize, p: u64) -> Result<SymplecticSpace> {
    if n == 0 || n > 2 || !(p == 3 || p == 5) {
        return Err(Error::SizeGate(format!(
            "brute-force enumeration needs n <= 2 and p in {{3, 5}} (got n={n}, p={p})"
        )));
    }
    SymplecticSpace::new(n, p)
}

/// Transvections `t_u` for `u` among `e_i, f_i, e_i + e_j, f_i + f_j,
/// e_i + f_j`. They generate `Sp_{2n}(F_p)`; [`SpGroup::generate`] confirms
/// this by comparing the closure with [`sp_group_order`].
pub fn sp_generators(space: &SymplecticSpace) -> Vec<FpMatrix> {
    let n = space.n();
    let m = space.dim();
    let mut dirs: Vec<Vec<u32>> = Vec::new();
    for i in 0..m {
        let mut u = vec![0; m];
        u[i] = 1;
        dirs.push(u);
    }
    for i in 0..n {
        for j in 0..n {
            let mut u = vec![0; m];
            u[i] = 1;
            u[n + j] = 1;
            dirs.push(u);
            if i < j {
                let mut a = vec![0; m];
                a[i] = 1;
                a[j] = 1;
                dirs.push(a);
                let mut b = vec![0; m];
                b[n + i] = 1;
                b[n + j] = 1;
                dirs.push(b);
            }
        }
    }
    dirs.iter().map(|u| transvection(space, u, 1)).collect()
}

/// A product of `steps` random transvections.
pub fn random_symplectic(space: &SymplecticSpace, rng: &mut ChaCha8Rng, steps: usize) -> FpMatrix {
    let p = space.p();
    let mut g = space.identity();
    for _ in 0..steps {
        let u: Vec<u32> = (0..space.dim()).map(|_| rng.gen_range(0..p)).collect();
        let a = rng.gen_range(1..p);
        g = transvection(space, &u, a).mul(&g);
    }
    g
}

fn encode(m: &FpMatrix) -> u64 {
    let p = m.modulus() as u64;
    m.entries().iter().rev().fold(0u64, |acc, &e| acc * p + e as u64)
}

fn decode(space: &SymplecticSpace, mut key: u64) -> FpMatrix {
    let p = space.p() as u64;
    let m = space.dim();
    let entries = (0..m * m)
        .map(|_| {
            let e = (key % p) as u32;
            key /= p;
            e
        })
        .collect();
    FpMatrix::new(space.p(), m, m, entries).expect("square")
}

/// All elements of `Sp_{2n}(F_p)`, stored as base-`p` integer codes.
#[derive(Clone, Debug)]
pub struct SpGroup {
    space: SymplecticSpace,
    codes: Vec<u64>,
}

impl SpGroup {
    /// Breadth-first closure of [`sp_generators`] from the identity.
    pub fn generate(n: usize, p: u64) -> Result<Self> {
        let space = size_gate(n, p)?;
        let gens = sp_generators(&space);
        let id = space.identity();
        let mut seen: HashSet<u64> = HashSet::from([encode(&id)]);
        let mut codes = vec![encode(&id)];
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            for t in &gens {
                let h = t.mul(&g);
                if seen.insert(encode(&h)) {
                    codes.push(encode(&h));
                    queue.push_back(h);
                }
            }
        }
        codes.sort_unstable();
        let expected = sp_group_order(n, p);
        if codes.len() as u128 != expected {
            return Err(Error::SizeMismatch(format!(
                "generator closure has {} elements, expected {expected}",
                codes.len()
            )));
        }
        Ok(SpGroup { space, codes })
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn contains(&self, g: &FpMatrix) -> bool {
        self.codes.binary_search(&encode(g)).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = FpMatrix> + '_ {
        self.codes.iter().map(|&c| decode(&self.space, c))
    }

    pub fn par_iter(&self) -> impl ParallelIterator<Item = FpMatrix> + '_ {
        self.codes.par_iter().map(|&c| decode(&self.space, c))
    }
}

/// `sp_group_elements(n, p)`: every element of `Sp_{2n}(F_p)`.
pub fn sp_group_elements(n: usize, p: u64) -> Result<Vec<FpMatrix>> {
    Ok(SpGroup::generate(n, p)?.iter().collect())
}

/// Self-adjoint matrices in the coefficient order of the self-adjoint basis.
fn self_adjoint_matrices(space: &SymplecticSpace, keep: impl Fn(&FpMatrix) -> bool) -> Vec<FpMatrix> {
    let basis = self_adjoint_basis(space);
    let p = space.p();
    let m = space.dim();
    let mut coeffs = vec![0u32; basis.len()];
    let mut out = Vec::new();
    loop {
        let mut x = FpMatrix::zeros(p, m, m);
        for (b, &c) in basis.iter().zip(&coeffs) {
            if c != 0 {
                x = x.add(&b.scale(c));
            }
        }
        if keep(&x) {
            out.push(x);
        }
        if !increment(&mut coeffs, p) {
            break;
        }
    }
    out
}

fn all_vectors(p: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::with_capacity((p as usize).pow(len as u32));
    let mut v = vec![0u32; len];
    loop {
        out.push(v.clone());
        if !increment(&mut v, p) {
            break;
        }
    }
    out
}

/// Self-adjoint nilpotent `x` (Lie flavor) or self-adjoint unipotent `x`
/// (group flavor), in a fixed order.
pub fn exotic_matrices(n: usize, p: u64, flavor: Flavor) -> Result<Vec<FpMatrix>> {
    let space = size_gate(n, p)?;
    let id = space.identity();
    let top = space.dim() as u64;
    Ok(self_adjoint_matrices(&space, |x| match flavor {
        Flavor::Lie => x.pow(top).is_zero(),
        Flavor::Group => x.sub(&id).pow(top).is_zero(),
    }))
}

/// Every pair `(x, v)` with `x` self-adjoint nilpotent, `x`-major order.
pub fn enumerate_exotic_nilcone(n: usize, p: u64) -> Result<impl Iterator<Item = crate::symplectic::ExoticPair>> {
    let space = size_gate(n, p)?;
    let xs = exotic_matrices(n, p, Flavor::Lie)?;
    let vs = all_vectors(space.p(), space.dim());
    Ok(xs.into_iter().flat_map(move |x| {
        let vs = vs.clone();
        vs.into_iter().map(move |v| {
            crate::symplectic::ExoticPair::new(space, x.clone(), v, Flavor::Lie).expect("enumerated pair is valid")
        })
    }))
}

/// Per-chunk tallies: points per label and per `(cyclic_dim, label)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub labels: BTreeMap<Bipartition, u64>,
    pub strata: BTreeMap<usize, BTreeMap<Bipartition, u64>>,
}

impl Tally {
    fn merge(&mut self, other: &Tally) {
        for (l, c) in &other.labels {
            *self.labels.entry(l.clone()).or_default() += c;
        }
        for (m, inner) in &other.strata {
            let slot = self.strata.entry(*m).or_default();
            for (l, c) in inner {
                *slot.entry(l.clone()).or_default() += c;
            }
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Checkpoint {
    n: usize,
    p: u64,
    flavor: Flavor,
    chunk_size: usize,
    chunks: BTreeMap<usize, Tally>,
}

fn load_checkpoint(path: &Path, n: usize, p: u64, flavor: Flavor, chunk_size: usize) -> Result<BTreeMap<usize, Tally>> {
    if !path.exists() {
        return Ok(BTreeMap::new());
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::Checkpoint(e.to_string()))?;
    let cp: Checkpoint = serde_json::from_str(&text).map_err(|e| Error::Checkpoint(e.to_string()))?;
    if cp.n != n || cp.p != p || cp.flavor != flavor || cp.chunk_size != chunk_size {
        return Err(Error::Checkpoint(format!(
            "checkpoint is for n={}, p={}, {:?}, chunk {}",
            cp.n, cp.p, cp.flavor, cp.chunk_size
        )));
    }
    Ok(cp.chunks)
}

fn save_checkpoint(path: &Path, cp: &Checkpoint) -> Result<()> {
    let text = serde_json::to_string(cp).map_err(|e| Error::Checkpoint(e.to_string()))?;
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, text).map_err(|e| Error::Checkpoint(e.to_string()))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::Checkpoint(e.to_string()))
}

/// Census settings.
#[derive(Clone, Debug)]
pub struct CensusOptions {
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub checkpoint: Option<PathBuf>,
    /// Number of `x` values per chunk.
    pub chunk_size: usize,
    /// Stop after this many newly computed chunks (for exercising resume).
    pub max_new_chunks: Option<usize>,
    pub flavor: Flavor,
    /// Run stabilizer counts and the transitivity check.
    pub orbit_checks: bool,
    /// Apply `(x, v) -> (g x g⁻¹, g v)` before classifying.
    pub conjugate_by: Option<FpMatrix>,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            jobs: None,
            checkpoint: None,
            chunk_size: 16,
            max_new_chunks: None,
            flavor: Flavor::Lie,
            orbit_checks: true,
            conjugate_by: None,
        }
    }
}

/// Orbit-stabilizer and transitivity data for one label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitCheck {
    pub label: Bipartition,
    pub count: u64,
    pub stabilizer: u64,
    /// `|Sp_{2n}(F_p)| / stabilizer`.
    pub predicted: u64,
    /// The points with this label form a single generator orbit.
    pub transitive: bool,
}

impl OrbitCheck {
    pub fn passed(&self) -> bool {
        self.count == self.predicted && self.transitive
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusResult {
    pub n: usize,
    pub p: u64,
    pub flavor: Flavor,
    pub labels: BTreeMap<Bipartition, u64>,
    pub total_points: u64,
    /// Labels met by pairs with `dim span{x^k v} = m`, keyed by `m`.
    pub cyclic_strata: BTreeMap<usize, Vec<Bipartition>>,
    pub orbit_checks: Vec<OrbitCheck>,
    /// `false` when the run stopped early and some chunks are missing.
    pub complete: bool,
}

impl CensusResult {
    pub fn passed(&self) -> bool {
        self.complete && self.orbit_checks.iter().all(OrbitCheck::passed)
    }
}

fn in_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| Error::RangeError(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// Classifies every point of the exotic nilpotent cone (or its unipotent
/// counterpart) and tallies labels.
pub fn orbit_census(n: usize, p: u64, options: &CensusOptions) -> Result<CensusResult> {
    let space = size_gate(n, p)?;
    let flavor = options.flavor;
    let xs = exotic_matrices(n, p, flavor)?;
    let vs = all_vectors(space.p(), space.dim());
    let chunk_size = options.chunk_size.max(1);
    let chunk_count = xs.len().div_ceil(chunk_size);
    let mut done = match &options.checkpoint {
        Some(path) => load_checkpoint(path, n, p, flavor, chunk_size)?,
        None => BTreeMap::new(),
    };
    let mut todo: Vec<usize> = (0..chunk_count).filter(|c| !done.contains_key(c)).collect();
    if let Some(limit) = options.max_new_chunks {
        todo.truncate(limit);
    }
    let conj = match &options.conjugate_by {
        Some(g) => Some((g.clone(), g.inverse()?)),
        None => None,
    };
    let saved = Mutex::new(());
    let fresh: Vec<(usize, Tally)> = in_pool(options.jobs, || {
        todo.par_iter()
            .map(|&chunk| {
                let mut tally = Tally::default();
                for x in &xs[chunk * chunk_size..((chunk + 1) * chunk_size).min(xs.len())] {
                    let x = match &conj {
                        Some((g, gi)) => g.mul(x).mul(gi),
                        None => x.clone(),
                    };
                    let nil = match flavor {
                        Flavor::Lie => x.clone(),
                        Flavor::Group => log_map(&space, &x)?,
                    };
                    let classifier = PairClassifier::new(nil)?;
                    for v in &vs {
                        let v = match &conj {
                            Some((g, _)) => g.mul_vec(v),
                            None => v.clone(),
                        };
                        let label = classifier.label(&v)?;
                        let m = classifier.cyclic_dim(&v);
                        *tally.labels.entry(label.clone()).or_default() += 1;
                        *tally.strata.entry(m).or_default().entry(label).or_default() += 1;
                    }
                }
                if let Some(path) = &options.checkpoint {
                    // serialize writers; the file always holds a consistent snapshot
                    let _guard = saved.lock().expect("lock");
                    let mut chunks = load_checkpoint(path, n, p, flavor, chunk_size)?;
                    chunks.insert(chunk, tally.clone());
                    save_checkpoint(
                        path,
                        &Checkpoint {
                            n,
                            p,
                            flavor,
                            chunk_size,
                            chunks,
                        },
                    )?;
                }
                Ok((chunk, tally))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    done.extend(fresh);
    let complete = done.len() == chunk_count;

    let mut total = Tally::default();
    for t in done.values() {
        total.merge(t);
    }
    let total_points = total.labels.values().sum();
    let cyclic_strata = total
        .strata
        .iter()
        .map(|(m, inner)| (*m, inner.keys().cloned().collect()))
        .collect();
    let orbit_checks = if options.orbit_checks && complete {
        let group = SpGroup::generate(n, p)?;
        let transitive = transitivity(&space, &xs, &vs, flavor)?;
        total
            .labels
            .iter()
            .map(|(label, &count)| {
                let stabilizer = stabilizer_count(&group, label, flavor)?;
                Ok(OrbitCheck {
                    label: label.clone(),
                    count,
                    stabilizer,
                    predicted: (group.len() as u64) / stabilizer,
                    transitive: transitive.get(label).copied().unwrap_or(false),
                })
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    Ok(CensusResult {
        n,
        p,
        flavor,
        labels: total.labels,
        total_points,
        cyclic_strata,
        orbit_checks,
        complete,
    })
}

/// Stabilizer of the normal-form representative of `label`.
fn stabilizer_count(group: &SpGroup, label: &Bipartition, flavor: Flavor) -> Result<u64> {
    let nf = normal_form_pair(label, group.space())?;
    let pair = match flavor {
        Flavor::Lie => nf.pair.to_lie(),
        Flavor::Group => nf.pair,
    };
    Ok(stabilizer_in(group, pair.x(), pair.v()))
}

fn stabilizer_in(group: &SpGroup, x: &FpMatrix, v: &[u32]) -> u64 {
    group
        .par_iter()
        .filter(|g| g.mul(x) == x.mul(g) && g.mul_vec(v) == v)
        .count() as u64
}

/// `|{g ∈ Sp_{2n}(F_p) : g x = x g, g v = v}|` by enumeration.
pub fn stabilizer_census(pair: &crate::symplectic::ExoticPair) -> Result<u64> {
    let s = pair.space();
    let group = SpGroup::generate(s.n(), s.p() as u64)?;
    Ok(stabilizer_in(&group, pair.x(), pair.v()))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len).collect(),
        }
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn vector_index(v: &[u32], p: u32) -> usize {
    v.iter().rev().fold(0usize, |acc, &c| acc * p as usize + c as usize)
}

/// For each label: do its points form one orbit under the generators, with
/// no generator joining points of different labels?
fn transitivity(
    space: &SymplecticSpace,
    xs: &[FpMatrix],
    vs: &[Vec<u32>],
    flavor: Flavor,
) -> Result<BTreeMap<Bipartition, bool>> {
    let p = space.p();
    let x_index: HashMap<u64, usize> = xs.iter().enumerate().map(|(i, x)| (encode(x), i)).collect();
    let nv = vs.len();
    let gens: Vec<(FpMatrix, FpMatrix)> = sp_generators(space)
        .into_iter()
        .map(|g| {
            let gi = g.inverse().expect("invertible");
            (g, gi)
        })
        .collect();
    let mut labels = Vec::with_capacity(xs.len() * nv);
    for x in xs {
        let nil = match flavor {
            Flavor::Lie => x.clone(),
            Flavor::Group => log_map(space, x)?,
        };
        let c = PairClassifier::new(nil)?;
        for v in vs {
            labels.push(c.label(v)?);
        }
    }
    let mut uf = UnionFind::new(labels.len());
    let mut consistent = true;
    for (ix, x) in xs.iter().enumerate() {
        for (g, gi) in &gens {
            let gx = g.mul(x).mul(gi);
            let jx = *x_index.get(&encode(&gx)).ok_or(Error::NotStable)?;
            for (iv, v) in vs.iter().enumerate() {
                let a = ix * nv + iv;
                let b = jx * nv + vector_index(&g.mul_vec(v), p);
                if labels[a] != labels[b] {
                    consistent = false;
                }
                uf.union(a, b);
            }
        }
    }
    let mut roots: BTreeMap<Bipartition, BTreeSet<usize>> = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        let r = uf.find(i);
        roots.entry(l.clone()).or_default().insert(r);
    }
    Ok(roots
        .into_iter()
        .map(|(l, r)| (l, consistent && r.len() == 1))
        .collect())
}

/// Checks that points with `dim span{x^k v} = m` carry exactly the labels
/// with `μ⁽¹⁾_1 = m`. Returns `(m, expected, got)` for each disagreeing
/// stratum.
/// `(m, expected labels, labels found)` for one disagreeing stratum.
pub type StratumMismatch = (usize, Vec<Bipartition>, Vec<Bipartition>);

pub fn strata_mismatches(result: &CensusResult) -> Vec<StratumMismatch> {
    let mut out = Vec::new();
    for m in 0..=result.n {
        let expected: Vec<Bipartition> = bipartitions_of(result.n)
            .into_iter()
            .filter(|l| l.first.part(0) == m)
            .collect();
        let mut got = result.cyclic_strata.get(&m).cloned().unwrap_or_default();
        got.sort();
        let mut exp_sorted = expected.clone();
        exp_sorted.sort();
        if got != exp_sorted {
            out.push((m, exp_sorted, got));
        }
    }
    out
}

/// Labels met by points with `dim span{x^k v} <= m` against
/// `{Λ' <= ((m), (n-m))}`. Returns the disagreeing `m`.
pub fn closure_shadow_mismatches(result: &CensusResult) -> Result<Vec<StratumMismatch>> {
    let n = result.n;
    let mut out = Vec::new();
    for m in 0..=n {
        let bound = Bipartition::new(Partition::row(m), Partition::row(n - m));
        let mut expected = Vec::new();
        for l in bipartitions_of(n) {
            if closure_leq(&l, &bound)? {
                expected.push(l);
            }
        }
        expected.sort();
        let got: BTreeSet<Bipartition> = result
            .cyclic_strata
            .range(..=m)
            .flat_map(|(_, ls)| ls.iter().cloned())
            .collect();
        let got: Vec<Bipartition> = got.into_iter().collect();
        if got != expected {
            out.push((m, expected, got));
        }
    }
    Ok(out)
}

/// `H`-conjugacy classes on invertible self-adjoint matrices against
/// conjugacy classes of `GL_n(F_p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KlyachkoReport {
    pub n: usize,
    pub p: u64,
    pub points: usize,
    pub orbits: usize,
    pub gl_classes: usize,
    /// Every orbit meets the image of `diag(x, 1) -> diag(x, 1) θ(diag(x, 1))⁻¹`.
    pub every_orbit_meets_image: bool,
}

impl KlyachkoReport {
    pub fn passed(&self) -> bool {
        self.orbits == self.gl_classes && self.every_orbit_meets_image
    }
}

/// All of `GL_n(F_p)`.
fn general_linear(n: usize, p: u32) -> Vec<FpMatrix> {
    all_vectors(p, n * n)
        .into_iter()
        .map(|e| FpMatrix::new(p, n, n, e).expect("square"))
        .filter(FpMatrix::is_invertible)
        .collect()
}

/// Conjugacy classes of `GL_n(F_p)` by union-find under conjugation by
/// every element.
pub fn gl_class_count(n: usize, p: u64) -> Result<usize> {
    if n == 0 || n > 2 || p > 7 {
        return Err(Error::SizeGate(format!("GL_n class count needs n <= 2, p <= 7 (got n={n}, p={p})")));
    }
    let p = crate::ffield::check_modulus(p)?;
    let elems = general_linear(n, p);
    let index: HashMap<u64, usize> = elems.iter().enumerate().map(|(i, g)| (encode(g), i)).collect();
    let mut uf = UnionFind::new(elems.len());
    for (i, a) in elems.iter().enumerate() {
        for g in &elems {
            let b = g.mul(a).mul(&g.inverse().expect("invertible"));
            uf.union(i, index[&encode(&b)]);
        }
    }
    Ok((0..elems.len()).filter(|&i| uf.find(i) == i).count())
}

pub fn klyachko_census(n: usize, p: u64) -> Result<KlyachkoReport> {
    let space = size_gate(n, p)?;
    let points = self_adjoint_matrices(&space, FpMatrix::is_invertible);
    let index: HashMap<u64, usize> = points.iter().enumerate().map(|(i, x)| (encode(x), i)).collect();
    let mut uf = UnionFind::new(points.len());
    for g in sp_generators(&space) {
        let gi = g.inverse()?;
        for (i, x) in points.iter().enumerate() {
            let y = g.mul(x).mul(&gi);
            let j = *index.get(&encode(&y)).ok_or(Error::NotStable)?;
            uf.union(i, j);
        }
    }
    let roots: BTreeSet<usize> = (0..points.len()).map(|i| uf.find(i)).collect();
    let mut hit = BTreeSet::new();
    for a in general_linear(n, space.p()) {
        let img = klyachko_embed(&space, &embed_in_a(&space, &a))?;
        debug_assert_eq!(adjoint(&space, &img)?, img);
        let i = *index.get(&encode(&img)).ok_or(Error::NotInGIotaTheta)?;
        hit.insert(uf.find(i));
    }
    Ok(KlyachkoReport {
        n,
        p,
        points: points.len(),
        orbits: roots.len(),
        gl_classes: gl_class_count(n, p)?,
        every_orbit_meets_image: hit == roots,
    })
}

/// Label counts of the Lie-flavor and group-flavor censuses side by side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogCoherence {
    pub n: usize,
    pub p: u64,
    pub lie: BTreeMap<Bipartition, u64>,
    pub group: BTreeMap<Bipartition, u64>,
}

impl LogCoherence {
    pub fn passed(&self) -> bool {
        self.lie == self.group
    }
}

pub fn log_coherence(n: usize, p: u64, jobs: Option<usize>) -> Result<LogCoherence> {
    let base = CensusOptions {
        jobs,
        orbit_checks: false,
        ..CensusOptions::default()
    };
    let lie = orbit_census(n, p, &base)?;
    let group = orbit_census(
        n,
        p,
        &CensusOptions {
            flavor: Flavor::Group,
            ..base
        },
    )?;
    Ok(LogCoherence {
        n,
        p,
        lie: lie.labels,
        group: group.labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::ExoticPair;
    use rand::SeedableRng;

    fn bp(s: &str) -> Bipartition {
        s.parse().unwrap()
    }

    #[test]
    fn group_orders() {
        assert_eq!(sp_group_order(1, 3), 24);
        assert_eq!(sp_group_order(2, 3), 51840);
        assert_eq!(sp_group_order(1, 5), 120);
    }

    #[test]
    fn small_groups() {
        let g = SpGroup::generate(1, 3).unwrap();
        assert_eq!(g.len(), 24);
        let elems: Vec<FpMatrix> = g.iter().collect();
        for a in elems.iter().take(6) {
            assert!(g.contains(&a.inverse().unwrap()));
            for b in elems.iter().rev().take(6) {
                assert!(g.contains(&a.mul(b)));
            }
        }
        assert_eq!(SpGroup::generate(1, 5).unwrap().len(), 120);
        assert!(matches!(SpGroup::generate(3, 3), Err(Error::SizeGate(_))));
        assert!(matches!(SpGroup::generate(1, 7), Err(Error::SizeGate(_))));
    }

    #[test]
    fn nilcone_sizes() {
        assert_eq!(enumerate_exotic_nilcone(1, 3).unwrap().count(), 9);
        assert_eq!(enumerate_exotic_nilcone(1, 5).unwrap().count(), 25);
        let s = SymplecticSpace::new(2, 3).unwrap();
        assert_eq!(self_adjoint_matrices(&s, |_| true).len(), 729);
    }

    #[test]
    fn rank_one_census() {
        let r = orbit_census(1, 3, &CensusOptions::default()).unwrap();
        assert_eq!(r.labels, BTreeMap::from([(bp("1|-"), 8), (bp("-|1"), 1)]));
        assert_eq!(r.total_points, 9);
        assert!(r.passed());
    }

    #[test]
    fn rank_one_stabilizers() {
        let s = SymplecticSpace::new(1, 3).unwrap();
        let zero = ExoticPair::new(s, FpMatrix::zeros(3, 2, 2), vec![0, 0], Flavor::Lie).unwrap();
        assert_eq!(stabilizer_census(&zero).unwrap(), 24);
        let line = ExoticPair::new(s, FpMatrix::zeros(3, 2, 2), vec![1, 0], Flavor::Lie).unwrap();
        assert_eq!(stabilizer_census(&line).unwrap(), 3);
    }

    #[test]
    fn rank_one_klyachko() {
        for (p, classes) in [(3, 2), (5, 4)] {
            let r = klyachko_census(1, p).unwrap();
            assert_eq!(r.orbits, classes);
            assert!(r.passed());
        }
    }

    #[test]
    fn random_elements_are_symplectic() {
        let s = SymplecticSpace::new(2, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = random_symplectic(&s, &mut rng, 12);
        assert!(crate::symplectic::membership(&s, &g, crate::symplectic::Membership::HGroup).unwrap());
    }

    #[test]
    fn checkpoint_resume() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cp.json");
        let partial = CensusOptions {
            checkpoint: Some(path.clone()),
            chunk_size: 1,
            max_new_chunks: Some(1),
            orbit_checks: false,
            ..CensusOptions::default()
        };
        // rank one has a single nilpotent x, so use the unipotent flavor at p = 5
        let first = orbit_census(1, 5, &partial).unwrap();
        assert!(first.complete);
        let resumed = orbit_census(1, 5, &partial).unwrap();
        assert_eq!(first, resumed);
        let mismatched = CensusOptions {
            chunk_size: 2,
            ..partial
        };
        assert!(matches!(orbit_census(1, 5, &mismatched), Err(Error::Checkpoint(_))));
    }
}
