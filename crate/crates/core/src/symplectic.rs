//! The symplectic space `F_p^{2n}` with form `<u, v> = uᵀ J v`, the
//! involution `θ(g) = J⁻¹ (gᵀ)⁻¹ J`, self-adjoint matrices, the log map,
//! the embedding `a -> a θ(a)⁻¹` of `GL_n`, and normal-form representatives
//! of the exotic orbits.

use serde::{Deserialize, Serialize};

use crate::bicomb::{Bipartition, Partition};
use crate::error::{Error, Result};
use crate::ffield::{
    self, add_mod, check_modulus, inv_mod, jordan_nilpotent, mul_mod, FpMatrix,
};

/// `F_p^{2n}` with ordered basis `e_1..e_n, f_1..f_n` and
/// `J = [[0, 1_n], [-1_n, 0]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SymplecticSpace {
    n: usize,
    p: u32,
}

impl SymplecticSpace {
    pub fn new(n: usize, p: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::RangeError("rank n must be at least 1".into()));
        }
        Ok(SymplecticSpace {
            n,
            p: check_modulus(p)?,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn j(&self) -> FpMatrix {
        let n = self.n;
        let p = self.p;
        FpMatrix::from_fn(p, 2 * n, 2 * n, |r, c| {
            if r < n && c == r + n {
                1
            } else if r >= n && c + n == r {
                p - 1
            } else {
                0
            }
        })
    }

    /// `J⁻¹ = -J`.
    pub fn j_inv(&self) -> FpMatrix {
        self.j().neg()
    }

    pub fn identity(&self) -> FpMatrix {
        FpMatrix::identity(self.p, self.dim())
    }

    /// `<u, v> = uᵀ J v`.
    pub fn pairing(&self, u: &[u32], v: &[u32]) -> u32 {
        let n = self.n;
        let p = self.p;
        let mut acc = 0u32;
        for i in 0..n {
            // uᵀ J v = Σ u_i v_{n+i} - u_{n+i} v_i
            acc = add_mod(acc, mul_mod(u[i], v[n + i], p), p);
            acc = add_mod(acc, p - mul_mod(u[n + i], v[i], p), p);
        }
        acc
    }

    /// Unit vector `e_i` (1-based).
    pub fn e(&self, i: usize) -> Vec<u32> {
        unit(self.dim(), i - 1)
    }

    /// Unit vector `f_i` (1-based).
    pub fn f(&self, i: usize) -> Vec<u32> {
        unit(self.dim(), self.n + i - 1)
    }

    fn check_size(&self, m: &FpMatrix) -> Result<()> {
        if m.rows() != self.dim() || m.cols() != self.dim() || m.modulus() != self.p {
            return Err(Error::DimensionMismatch(format!(
                "expected a {0}x{0} matrix over F_{1}",
                self.dim(),
                self.p
            )));
        }
        Ok(())
    }
}

fn unit(len: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; len];
    v[i] = 1;
    v
}

/// `θ(g) = J⁻¹ (gᵀ)⁻¹ J`.
pub fn theta_group(space: &SymplecticSpace, g: &FpMatrix) -> Result<FpMatrix> {
    space.check_size(g)?;
    let inv_t = g.transpose().inverse()?;
    Ok(space.j_inv().mul(&inv_t).mul(&space.j()))
}

/// Symplectic adjoint `x* = J⁻¹ xᵀ J`, characterized by `<xu, v> = <u, x*v>`.
pub fn adjoint(space: &SymplecticSpace, x: &FpMatrix) -> Result<FpMatrix> {
    space.check_size(x)?;
    Ok(space.j_inv().mul(&x.transpose()).mul(&space.j()))
}

/// Subsets of `gl_{2n}` and `GL_{2n}` cut out by `θ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    /// Self-adjoint matrices, `x* = x`.
    GMinusTheta,
    /// Invertible self-adjoint matrices.
    GIotaTheta,
    /// `sp_{2n}`: `x* = -x`.
    SpLie,
    /// `Sp_{2n}`: `xᵀ J x = J`.
    HGroup,
}

pub fn membership(space: &SymplecticSpace, x: &FpMatrix, which: Membership) -> Result<bool> {
    space.check_size(x)?;
    Ok(match which {
        Membership::GMinusTheta => adjoint(space, x)? == *x,
        Membership::GIotaTheta => adjoint(space, x)? == *x && x.is_invertible(),
        Membership::SpLie => adjoint(space, x)? == x.neg(),
        Membership::HGroup => x.transpose().mul(&space.j()).mul(x) == space.j(),
    })
}

/// Kernel of a linear operator on `gl_{2n}`, returned as matrices.
fn operator_kernel(space: &SymplecticSpace, op: impl Fn(&FpMatrix) -> FpMatrix) -> Vec<FpMatrix> {
    let m = space.dim();
    let p = space.p;
    let columns: Vec<Vec<u32>> = (0..m * m)
        .map(|k| {
            let mut e = FpMatrix::zeros(p, m, m);
            e.set(k / m, k % m, 1);
            op(&e).entries().to_vec()
        })
        .collect();
    FpMatrix::from_columns(p, m * m, &columns)
        .kernel_basis()
        .basis()
        .iter()
        .map(|v| FpMatrix::new(p, m, m, v.clone()).expect("square"))
        .collect()
}

/// Basis of the self-adjoint matrices `g^{-θ}` (dimension `2n² - n`).
pub fn self_adjoint_basis(space: &SymplecticSpace) -> Vec<FpMatrix> {
    operator_kernel(space, |x| adjoint(space, x).expect("size").sub(x))
}

/// Basis of `sp_{2n}` (dimension `2n² + n`).
pub fn sp_lie_basis(space: &SymplecticSpace) -> Vec<FpMatrix> {
    operator_kernel(space, |x| adjoint(space, x).expect("size").add(x))
}

/// `p₂(x - 1)` where `p₂(z) = (z + z*)/2` projects onto `g^{-θ}`.
pub fn log_map(space: &SymplecticSpace, x: &FpMatrix) -> Result<FpMatrix> {
    if !membership(space, x, Membership::GIotaTheta)? {
        return Err(Error::NotInGIotaTheta);
    }
    let z = x.sub(&space.identity());
    let half = inv_mod(2, space.p).expect("odd p");
    Ok(z.add(&adjoint(space, &z)?).scale(half))
}

/// `a -> a θ(a)⁻¹` for `a = diag(x, 1_n)`, `x ∈ GL_n`.
pub fn klyachko_embed(space: &SymplecticSpace, a: &FpMatrix) -> Result<FpMatrix> {
    space.check_size(a)?;
    let n = space.n;
    let one = FpMatrix::identity(space.p, n);
    let zero = FpMatrix::zeros(space.p, n, n);
    if a.block(0, n, n) != zero || a.block(n, 0, n) != zero || a.block(n, n, n) != one {
        return Err(Error::NotInA);
    }
    if !a.block(0, 0, n).is_invertible() {
        return Err(Error::NotInA);
    }
    Ok(a.mul(&theta_group(space, a)?.inverse()?))
}

/// Symplectic transvection `w -> w + a<w, u>u`.
pub fn transvection(space: &SymplecticSpace, u: &[u32], a: u32) -> FpMatrix {
    let p = space.p;
    let m = space.dim();
    let ju = space.j().mul_vec(u);
    // <w, u> = wᵀ J u, so the matrix is 1 + a u (J u)ᵀ
    FpMatrix::from_fn(p, m, m, |r, c| {
        let e = mul_mod(a, mul_mod(u[r], ju[c], p), p);
        if r == c { add_mod(e, 1, p) } else { e }
    })
}

/// `diag(x, 1_n)` for `x ∈ gl_n`.
pub fn embed_in_a(space: &SymplecticSpace, x: &FpMatrix) -> FpMatrix {
    let n = space.n;
    FpMatrix::from_blocks(
        x,
        &FpMatrix::zeros(space.p, n, n),
        &FpMatrix::zeros(space.p, n, n),
        &FpMatrix::identity(space.p, n),
    )
}

/// Whether `x` is the nilpotent (Lie) or unipotent (group) member of a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Lie,
    Group,
}

/// A pair `(x, v)` with `x` self-adjoint and nilpotent (Lie flavor) or
/// unipotent (group flavor).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PairRepr", into = "PairRepr")]
pub struct ExoticPair {
    space: SymplecticSpace,
    x: FpMatrix,
    v: Vec<u32>,
    flavor: Flavor,
}

#[derive(Serialize, Deserialize)]
struct PairRepr {
    p: u64,
    n: usize,
    flavor: Flavor,
    x: FpMatrix,
    v: Vec<u64>,
}

impl TryFrom<PairRepr> for ExoticPair {
    type Error = Error;

    fn try_from(r: PairRepr) -> Result<Self> {
        let space = SymplecticSpace::new(r.n, r.p)?;
        if r.v.iter().any(|&e| e >= r.p) {
            return Err(Error::Parse(format!("vector entry outside [0, {})", r.p)));
        }
        ExoticPair::new(space, r.x, r.v.iter().map(|&e| e as u32).collect(), r.flavor)
    }
}

impl From<ExoticPair> for PairRepr {
    fn from(e: ExoticPair) -> Self {
        PairRepr {
            p: e.space.p as u64,
            n: e.space.n,
            flavor: e.flavor,
            x: e.x,
            v: e.v.iter().map(|&c| c as u64).collect(),
        }
    }
}

impl ExoticPair {
    pub fn new(space: SymplecticSpace, x: FpMatrix, v: Vec<u32>, flavor: Flavor) -> Result<Self> {
        space.check_size(&x)?;
        if v.len() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in F^{}",
                v.len(),
                space.dim()
            )));
        }
        if adjoint(&space, &x)? != x {
            return Err(Error::InvalidPair("x is not self-adjoint".into()));
        }
        let nil = match flavor {
            Flavor::Lie => x.clone(),
            Flavor::Group => x.sub(&space.identity()),
        };
        if !nil.pow(space.dim() as u64).is_zero() {
            return Err(Error::InvalidPair(match flavor {
                Flavor::Lie => "x is not nilpotent".into(),
                Flavor::Group => "x is not unipotent".into(),
            }));
        }
        let v = v.into_iter().map(|c| c % space.p).collect();
        Ok(ExoticPair {
            space,
            x,
            v,
            flavor,
        })
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn x(&self) -> &FpMatrix {
        &self.x
    }

    pub fn v(&self) -> &[u32] {
        &self.v
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// The nilpotent self-adjoint matrix attached to the pair: `x` itself,
    /// or `log x` for the group flavor.
    pub fn nilpotent_part(&self) -> FpMatrix {
        match self.flavor {
            Flavor::Lie => self.x.clone(),
            Flavor::Group => log_map(&self.space, &self.x).expect("validated unipotent pair"),
        }
    }

    /// The same point viewed through the log isomorphism.
    pub fn to_lie(&self) -> ExoticPair {
        ExoticPair {
            x: self.nilpotent_part(),
            flavor: Flavor::Lie,
            ..self.clone()
        }
    }

    /// `(g x g⁻¹, g v)`; `g` is assumed symplectic.
    pub fn conjugate_by(&self, g: &FpMatrix, g_inv: &FpMatrix) -> ExoticPair {
        ExoticPair {
            x: g.mul(&self.x).mul(g_inv),
            v: g.mul_vec(&self.v),
            ..self.clone()
        }
    }
}

/// One block of equal parts of `ν = μ⁽¹⁾ + μ⁽²⁾`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NuBlock {
    /// Number of equal parts `a_k`.
    pub size: usize,
    /// Common value `ν_[k]`.
    pub nu: usize,
    /// Common value `μ⁽¹⁾_[k]`.
    pub mu1: usize,
    /// First row `p_k` of the block (1-based).
    pub first_row: usize,
    /// Last row `q_k` of the block (1-based).
    pub last_row: usize,
}

/// Splits `ν` into maximal runs of equal parts.
pub fn nu_blocks(label: &Bipartition) -> Vec<NuBlock> {
    let nu = label.nu();
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < nu.len() {
        let value = nu.part(i);
        let size = nu.parts()[i..].iter().take_while(|&&q| q == value).count();
        blocks.push(NuBlock {
            size,
            nu: value,
            mu1: label.first.part(i),
            first_row: i + 1,
            last_row: i + size,
        });
        i += size;
    }
    blocks
}

/// A normal-form representative of an exotic orbit together with the
/// Jordan bases it was built from.
#[derive(Clone, Debug)]
pub struct NormalFormData {
    pub label: Bipartition,
    pub pair: ExoticPair,
    /// The unipotent `y ∈ A` with `x = y θ(y)⁻¹`.
    pub y: FpMatrix,
    pub nu: Partition,
    pub blocks: Vec<NuBlock>,
    jordan: Vec<Vec<Vec<u32>>>,
    dual: Vec<Vec<Vec<u32>>>,
}

impl NormalFormData {
    /// `v_{i,j}`, 1-based indices.
    pub fn v(&self, i: usize, j: usize) -> &[u32] {
        &self.jordan[i - 1][j - 1]
    }

    /// `v'_{i,j}`, 1-based indices.
    pub fn v_dual(&self, i: usize, j: usize) -> &[u32] {
        &self.dual[i - 1][j - 1]
    }

    pub fn chain_count(&self) -> usize {
        self.jordan.len()
    }
}

/// Builds the normal form `(x, v)` of the orbit labelled `label`: `y ∈ A`
/// unipotent of type `ν = μ⁽¹⁾ + μ⁽²⁾` in a standard Jordan basis `v_{i,j}`
/// of `M_n = <e_1..e_n>`, the dual chains `v'_{i,j}` of `M'_n`, `x = y θ(y)⁻¹`
/// and `v = Σ_k v_{p_k, μ⁽¹⁾_[k]}` over blocks with `μ⁽¹⁾_[k] > 0`.
pub fn normal_form_pair(label: &Bipartition, space: &SymplecticSpace) -> Result<NormalFormData> {
    let n = space.n;
    let p = space.p;
    if label.size() != n {
        return Err(Error::SizeMismatch(format!(
            "label {label} has size {} but n = {n}",
            label.size()
        )));
    }
    let nu = label.nu();
    let y_small = FpMatrix::identity(p, n).add(&jordan_nilpotent(p, nu.parts()));
    let y = embed_in_a(space, &y_small);
    let x = y.mul(&theta_group(space, &y)?.inverse()?);

    let mut jordan = Vec::with_capacity(nu.len());
    let mut offset = 0;
    for &len in nu.parts() {
        jordan.push((1..=len).map(|j| space.e(offset + j)).collect::<Vec<_>>());
        offset += len;
    }

    // v'_{i,j} ∈ M'_n with <v_{k,l}, v'_{i,j}> = δ: invert the Gram matrix of
    // the flattened chain basis against f_1..f_n.
    let flat: Vec<&Vec<u32>> = jordan.iter().flatten().collect();
    let gram = FpMatrix::from_fn(p, n, n, |r, s| space.pairing(flat[r], &space.f(s + 1)));
    let gram_inv = gram.inverse()?;
    let mut dual = Vec::with_capacity(nu.len());
    let mut idx = 0;
    for chain in &jordan {
        let mut d = Vec::with_capacity(chain.len());
        for _ in chain {
            let coeffs = gram_inv.column(idx);
            let mut w = vec![0u32; 2 * n];
            w[n..].copy_from_slice(&coeffs);
            d.push(w);
            idx += 1;
        }
        dual.push(d);
    }

    let blocks = nu_blocks(label);
    let mut v = vec![0u32; 2 * n];
    for b in blocks.iter().filter(|b| b.mu1 > 0) {
        for (slot, &c) in v.iter_mut().zip(&jordan[b.first_row - 1][b.mu1 - 1]) {
            *slot = add_mod(*slot, c, p);
        }
    }
    let pair = ExoticPair::new(*space, x, v, Flavor::Group)?;
    Ok(NormalFormData {
        label: label.clone(),
        pair,
        y,
        nu,
        blocks,
        jordan,
        dual,
    })
}

/// Point counts of the `θ`-fixed and `θ`-anti-fixed parts of the Borel
/// subgroup `B` (upper triangular `b_1`, lower triangular `b_2`), its
/// unipotent radical `U`, and the diagonal torus `T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointCounts {
    pub u_theta: u128,
    pub b_theta: u128,
    pub u_iota_theta: u128,
    pub b_iota_theta: u128,
    pub t_theta: u128,
    pub t_iota_theta: u128,
}

/// Counts `F_p`-points of `U^θ, B^θ, U^{ιθ}, B^{ιθ}, T^θ, T^{ιθ}` by
/// enumerating the diagonal block `b_1` and solving the remaining linear
/// conditions. Limited to `n <= 3`.
pub fn fixed_point_counts(space: &SymplecticSpace) -> Result<FixedPointCounts> {
    let n = space.n;
    let p = space.p;
    if n > 3 || p > 7 {
        return Err(Error::SizeGate(format!("fixed-point counts need n <= 3, p <= 7 (got n={n}, p={p})")));
    }
    let mut counts = FixedPointCounts {
        u_theta: 0,
        b_theta: 0,
        u_iota_theta: 0,
        b_iota_theta: 0,
        t_theta: 0,
        t_iota_theta: 0,
    };
    for b1 in upper_triangular(p, n) {
        let unipotent = (0..n).all(|i| b1.get(i, i) == 1);
        let fixed = count_theta_fixed(space, &b1);
        let anti = count_self_adjoint(space, &b1);
        counts.b_theta += fixed;
        counts.b_iota_theta += anti;
        if unipotent {
            counts.u_theta += fixed;
            counts.u_iota_theta += anti;
        }
    }
    let id = space.identity();
    for diag in diagonals(p, 2 * n) {
        let t = FpMatrix::from_fn(p, 2 * n, 2 * n, |r, c| if r == c { diag[r] } else { 0 });
        let th = theta_group(space, &t)?;
        if th == t {
            counts.t_theta += 1;
        }
        if th.mul(&t) == id {
            counts.t_iota_theta += 1;
        }
    }
    Ok(counts)
}

/// `#{(b_2, c) : [[b_1, c], [0, b_2]] ∈ Sp_{2n}}`. The symplectic condition
/// reads `b_1ᵀ b_2 = 1` and `cᵀ b_2 = b_2ᵀ c`.
fn count_theta_fixed(space: &SymplecticSpace, b1: &FpMatrix) -> u128 {
    let n = space.n;
    let p = space.p;
    let b2 = b1.transpose().inverse().expect("invertible");
    if (0..n).any(|r| (r + 1..n).any(|c| b2.get(r, c) != 0)) {
        return 0;
    }
    let columns: Vec<Vec<u32>> = (0..n * n)
        .map(|k| {
            let mut c = FpMatrix::zeros(p, n, n);
            c.set(k / n, k % n, 1);
            c.transpose().mul(&b2).sub(&b2.transpose().mul(&c)).entries().to_vec()
        })
        .collect();
    (p as u128).pow(ffield::solution_dim(p, n * n, &columns) as u32)
}

/// `#{(b_2, c) : [[b_1, c], [0, b_2]]` self-adjoint`}` with `b_2` lower
/// triangular. The condition is affine in `(b_2, c)`.
fn count_self_adjoint(space: &SymplecticSpace, b1: &FpMatrix) -> u128 {
    let n = space.n;
    let p = space.p;
    let lower: Vec<(usize, usize)> = (0..n).flat_map(|r| (0..=r).map(move |c| (r, c))).collect();
    let unknowns = lower.len() + n * n;
    let build = |u: &[u32]| {
        let mut b2 = FpMatrix::zeros(p, n, n);
        for (k, &(r, c)) in lower.iter().enumerate() {
            b2.set(r, c, u[k]);
        }
        let c = FpMatrix::new(p, n, n, u[lower.len()..].to_vec()).expect("n x n");
        let g = FpMatrix::from_blocks(b1, &c, &FpMatrix::zeros(p, n, n), &b2);
        adjoint(space, &g).expect("size").sub(&g).entries().to_vec()
    };
    let zero = vec![0u32; unknowns];
    let constant = build(&zero);
    let columns: Vec<Vec<u32>> = (0..unknowns)
        .map(|k| {
            let mut u = zero.clone();
            u[k] = 1;
            build(&u)
                .iter()
                .zip(&constant)
                .map(|(&a, &b)| ffield::sub_mod(a, b, p))
                .collect()
        })
        .collect();
    let eqs = constant.len();
    let rank = FpMatrix::from_columns(p, eqs, &columns).rank();
    let mut aug = columns.clone();
    aug.push(constant.iter().map(|&b| ffield::neg_mod(b, p)).collect());
    if FpMatrix::from_columns(p, eqs, &aug).rank() != rank {
        return 0;
    }
    (p as u128).pow((unknowns - rank) as u32)
}

fn upper_triangular(p: u32, n: usize) -> Vec<FpMatrix> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|r| (r..n).map(move |c| (r, c))).collect();
    let mut out = Vec::new();
    let mut digits = vec![0u32; slots.len()];
    loop {
        let diag_ok = slots
            .iter()
            .zip(&digits)
            .all(|(&(r, c), &d)| r != c || d != 0);
        if diag_ok {
            let mut m = FpMatrix::zeros(p, n, n);
            for (&(r, c), &d) in slots.iter().zip(&digits) {
                m.set(r, c, d);
            }
            out.push(m);
        }
        if !increment(&mut digits, p) {
            break;
        }
    }
    out
}

fn diagonals(p: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut digits = vec![1u32; len];
    loop {
        out.push(digits.clone());
        let mut i = 0;
        loop {
            if i == len {
                return out;
            }
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 1;
            i += 1;
        }
    }
}

/// Odometer increment over `F_p^len`; `false` once it wraps to zero.
pub(crate) fn increment(digits: &mut [u32], p: u32) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < p {
            return true;
        }
        *d = 0;
    }
    false
}
