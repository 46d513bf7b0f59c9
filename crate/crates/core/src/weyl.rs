//! Root datum of `GL_n`: weights in the `e_i` basis, roots `e_i - e_j`, the
//! symmetric group acting by `w(e_i) = e_{w(i)}`, standard parabolics and the
//! distinguished characters `theta_G`, `theta_P`, `theta^P`.
//!
//! Indices are 0-based throughout. The simple root `alpha_k` is `e_k - e_{k+1}`
//! for `k` in `0..n-1`.

use std::collections::BTreeSet;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};
use thiserror::Error;

pub type Q = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeylError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("weight has nonzero residue {0}; support is only defined on the root lattice")]
    NonzeroResidue(String),
    #[error("invalid composition {0:?} of {1}")]
    BadComposition(Vec<usize>, usize),
    #[error("simple root index {0} out of range for rank {1}")]
    BadSimple(usize, usize),
    #[error("not a permutation: {0:?}")]
    BadPerm(Vec<usize>),
    #[error("root indices must be distinct and below {1}: {0:?}")]
    BadRoot((usize, usize), usize),
}

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(a: i64, b: i64) -> Q {
    Q::new(BigInt::from(a), BigInt::from(b))
}

/// Integer weight, coefficient of `e_i` in slot `i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(n: usize) -> Self {
        Weight(vec![0; n])
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Weight(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), other.rank());
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        debug_assert_eq!(self.rank(), other.rank());
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * c).collect())
    }

    pub fn to_q(&self) -> RationalWeight {
        RationalWeight(self.0.iter().map(|&a| q(a)).collect())
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for a in &self.0 {
            seq.serialize_element(&a.to_string())?;
        }
        seq.end()
    }
}

/// Weight with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalWeight(pub Vec<Q>);

impl RationalWeight {
    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn sub(&self, other: &RationalWeight) -> RationalWeight {
        RationalWeight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }
}

impl fmt::Display for RationalWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for RationalWeight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for a in &self.0 {
            seq.serialize_element(&a.to_string())?;
        }
        seq.end()
    }
}

/// The root `e_i - e_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Root {
    pub i: usize,
    pub j: usize,
}

impl Root {
    pub fn new(i: usize, j: usize, n: usize) -> Result<Root, WeylError> {
        if i == j || i >= n || j >= n {
            return Err(WeylError::BadRoot((i, j), n));
        }
        Ok(Root { i, j })
    }

    pub fn simple(k: usize) -> Root {
        Root { i: k, j: k + 1 }
    }

    pub fn is_positive(&self) -> bool {
        self.i < self.j
    }

    /// `h(e_i - e_j) = j - i`.
    pub fn height(&self) -> i64 {
        self.j as i64 - self.i as i64
    }

    pub fn to_weight(&self, n: usize) -> Weight {
        let mut v = vec![0; n];
        v[self.i] += 1;
        v[self.j] -= 1;
        Weight(v)
    }

    /// Sum of two roots when it is again a root.
    pub fn plus(&self, other: &Root) -> Option<Root> {
        if self.j == other.i && self.i != other.j {
            Some(Root { i: self.i, j: other.j })
        } else if other.j == self.i && other.i != self.j {
            Some(Root { i: other.i, j: self.j })
        } else {
            None
        }
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}-e{}", self.i + 1, self.j + 1)
    }
}

pub fn positive_roots(n: usize) -> Vec<Root> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(Root { i, j });
        }
    }
    out
}

/// Permutation of `0..n`, acting by `w(e_i) = e_{w(i)}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(pub Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Perm, WeylError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(WeylError::BadPerm(images));
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    /// The transposition `s_{alpha_k}`.
    pub fn simple_reflection(n: usize, k: usize) -> Perm {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(k, k + 1);
        Perm(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn at(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut v = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            v[x] = i;
        }
        Perm(v)
    }

    /// `(w lambda)_{w(i)} = lambda_i`.
    pub fn act(&self, lambda: &Weight) -> Weight {
        let mut v = vec![0; lambda.rank()];
        for (i, &a) in lambda.0.iter().enumerate() {
            v[self.0[i]] = a;
        }
        Weight(v)
    }

    pub fn act_q(&self, lambda: &RationalWeight) -> RationalWeight {
        let mut v = vec![Q::zero(); lambda.rank()];
        for (i, a) in lambda.0.iter().enumerate() {
            v[self.0[i]] = a.clone();
        }
        RationalWeight(v)
    }

    pub fn act_root(&self, r: &Root) -> Root {
        Root { i: self.0[r.i], j: self.0[r.j] }
    }

    /// Image of a set of simple roots, or `None` if some image is not simple.
    pub fn map_simple(&self, simple: &BTreeSet<usize>) -> Option<BTreeSet<usize>> {
        let mut out = BTreeSet::new();
        for &k in simple {
            let a = self.0[k];
            if self.0[k + 1] != a + 1 {
                return None;
            }
            out.insert(a);
        }
        Some(out)
    }

    /// All permutations of `0..n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut cur: Vec<usize> = (0..n).collect();
        let mut out = vec![Perm(cur.clone())];
        while next_permutation(&mut cur) {
            out.push(Perm(cur.clone()));
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", a + 1)?;
        }
        write!(f, "]")
    }
}

pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Standard parabolic subgroup, stored by its simple roots with the block
/// decomposition cached.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StdParabolic {
    n: usize,
    simple: BTreeSet<usize>,
    blocks: Vec<usize>,
}

impl StdParabolic {
    pub fn from_simple(n: usize, simple: BTreeSet<usize>) -> Result<Self, WeylError> {
        if let Some(&k) = simple.iter().find(|&&k| k + 1 >= n) {
            return Err(WeylError::BadSimple(k, n));
        }
        let mut blocks = Vec::new();
        let mut cur = 1;
        for k in 0..n.saturating_sub(1) {
            if simple.contains(&k) {
                cur += 1;
            } else {
                blocks.push(cur);
                cur = 1;
            }
        }
        if n > 0 {
            blocks.push(cur);
        }
        Ok(StdParabolic { n, simple, blocks })
    }

    pub fn from_blocks(blocks: &[usize]) -> Result<Self, WeylError> {
        let n: usize = blocks.iter().sum();
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(WeylError::BadComposition(blocks.to_vec(), n));
        }
        let mut simple = BTreeSet::new();
        let mut start = 0;
        for &b in blocks {
            for k in start..start + b - 1 {
                simple.insert(k);
            }
            start += b;
        }
        Ok(StdParabolic { n, simple, blocks: blocks.to_vec() })
    }

    /// Panics if `n == 0`.
    pub fn borel(n: usize) -> Self {
        Self::from_blocks(&vec![1; n]).expect("n >= 1")
    }

    pub fn full(n: usize) -> Self {
        Self::from_blocks(&[n]).expect("n >= 1")
    }

    /// Every standard parabolic of `GL_n`, ordered by simple-root bitmask.
    pub fn all(n: usize) -> Vec<Self> {
        let r = n.saturating_sub(1);
        (0..1usize << r)
            .map(|mask| {
                let s = (0..r).filter(|k| mask >> k & 1 == 1).collect();
                Self::from_simple(n, s).expect("in range")
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn simple(&self) -> &BTreeSet<usize> {
        &self.simple
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_borel(&self) -> bool {
        self.simple.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.blocks.len() == 1
    }

    /// Start index of each block.
    pub fn block_starts(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.blocks.len());
        let mut s = 0;
        for &b in &self.blocks {
            out.push(s);
            s += b;
        }
        out
    }

    pub fn block_of(&self, i: usize) -> usize {
        let mut s = 0;
        for (b, &len) in self.blocks.iter().enumerate() {
            s += len;
            if i < s {
                return b;
            }
        }
        panic!("index {i} out of range for rank {}", self.n)
    }

    /// `self ⊆ other` as parabolics.
    pub fn is_contained_in(&self, other: &StdParabolic) -> bool {
        self.n == other.n && self.simple.is_subset(&other.simple)
    }

    pub fn is_levi_root(&self, r: &Root) -> bool {
        self.block_of(r.i) == self.block_of(r.j)
    }

    /// `R(P)^+`.
    pub fn levi_positive_roots(&self) -> Vec<Root> {
        positive_roots(self.n).into_iter().filter(|r| self.is_levi_root(r)).collect()
    }

    /// `W(P)`: permutations preserving every block.
    pub fn weyl_group(&self) -> Vec<Perm> {
        let mut out = vec![Vec::<usize>::new()];
        for (start, &len) in self.block_starts().iter().zip(&self.blocks) {
            let locals = Perm::all(len);
            let mut next = Vec::with_capacity(out.len() * locals.len());
            for prefix in &out {
                for l in &locals {
                    let mut v = prefix.clone();
                    v.extend(l.0.iter().map(|x| x + start));
                    next.push(v);
                }
            }
            out = next;
        }
        out.into_iter().map(Perm).collect()
    }

    /// Restriction of `lambda` to `Z_{M_P}`: the vector of block sums.
    pub fn block_sums(&self, lambda: &Weight) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.blocks.len());
        let mut s = 0;
        for &b in &self.blocks {
            out.push(lambda.0[s..s + b].iter().sum());
            s += b;
        }
        out
    }

    pub fn levi_label(&self) -> String {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        parts.join(",")
    }
}

impl fmt::Display for StdParabolic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({})", self.levi_label())
    }
}

/// A shuffle of the blocks of a standard parabolic that keeps the order
/// inside each block. Such a `w` always satisfies `w(S(P)) ⊆ S`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockPerm {
    pub parent: StdParabolic,
    /// `order[k]` is the old block placed in position `k`.
    pub order: Vec<usize>,
    pub perm: Perm,
}

impl BlockPerm {
    pub fn new(parent: &StdParabolic, order: Vec<usize>) -> Result<Self, WeylError> {
        let d = parent.num_blocks();
        let check = Perm::from_images(order.clone())?;
        if check.rank() != d {
            return Err(WeylError::BadPerm(order));
        }
        let starts = parent.block_starts();
        let mut images = vec![0; parent.rank()];
        let mut pos = 0;
        for &b in &order {
            for t in 0..parent.blocks[b] {
                images[starts[b] + t] = pos;
                pos += 1;
            }
        }
        Ok(BlockPerm { parent: parent.clone(), order, perm: Perm(images) })
    }

    pub fn identity(parent: &StdParabolic) -> Self {
        Self::new(parent, (0..parent.num_blocks()).collect()).expect("identity order")
    }

    pub fn all(parent: &StdParabolic) -> Vec<BlockPerm> {
        Perm::all(parent.num_blocks()).into_iter().map(|o| BlockPerm::new(parent, o.0).expect("valid order")).collect()
    }

    /// `^wP`, the standard parabolic with the blocks in the new order.
    pub fn target(&self) -> StdParabolic {
        let sizes: Vec<usize> = self.order.iter().map(|&b| self.parent.blocks[b]).collect();
        StdParabolic::from_blocks(&sizes).expect("nonempty")
    }
}

/// `<lambda, e_i - e_j> = lambda_i - lambda_j`.
pub fn pairing(lambda: &RationalWeight, alpha: &Root) -> Result<Q, WeylError> {
    let n = lambda.rank();
    if alpha.i >= n || alpha.j >= n {
        return Err(WeylError::RankMismatch(n, alpha.i.max(alpha.j) + 1));
    }
    Ok(&lambda.0[alpha.i] - &lambda.0[alpha.j])
}

/// Dominant means weakly decreasing coordinates.
pub fn is_dominant(lambda: &RationalWeight) -> bool {
    lambda.0.windows(2).all(|w| w[0] >= w[1])
}

/// Coordinates on the simple roots (partial sums) and the residue (total sum).
pub fn simple_coords(lambda: &RationalWeight) -> (Vec<Q>, Q) {
    let n = lambda.rank();
    let mut acc = Q::zero();
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    for (k, c) in lambda.0.iter().enumerate() {
        acc += c;
        if k + 1 < n {
            out.push(acc.clone());
        }
    }
    (out, acc)
}

/// Rebuild a weight from simple coordinates and residue.
pub fn from_simple_coords(coords: &[Q], residue: &Q) -> RationalWeight {
    let mut out = Vec::with_capacity(coords.len() + 1);
    let mut prev = Q::zero();
    for c in coords {
        out.push(c - &prev);
        prev = c.clone();
    }
    out.push(residue - &prev);
    RationalWeight(out)
}

/// Simple roots with a nonzero coefficient.
pub fn support(lambda: &RationalWeight) -> Result<BTreeSet<usize>, WeylError> {
    let (coords, residue) = simple_coords(lambda);
    if !residue.is_zero() {
        return Err(WeylError::NonzeroResidue(residue.to_string()));
    }
    Ok(coords.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, _)| k).collect())
}

/// Average of `lambda` over `W(P)`: block-constant with value block sum over block size.
pub fn weyl_average(lambda: &Weight, p: &StdParabolic) -> Result<RationalWeight, WeylError> {
    if lambda.rank() != p.rank() {
        return Err(WeylError::RankMismatch(lambda.rank(), p.rank()));
    }
    Ok(block_average(&p.block_sums(lambda), p))
}

/// The block-constant rational weight with the given block sums.
pub fn block_average(sums: &[i64], p: &StdParabolic) -> RationalWeight {
    let mut out = Vec::with_capacity(p.rank());
    for (&s, &b) in sums.iter().zip(p.blocks()) {
        let v = q_frac(s, b as i64);
        for _ in 0..b {
            out.push(v.clone());
        }
    }
    RationalWeight(out)
}

/// `theta_G = (n-1, ..., 1, 0)`.
pub fn theta_g(n: usize) -> Weight {
    Weight((0..n).rev().map(|x| x as i64).collect())
}

/// Fundamental weight `e_0 + ... + e_k` attached to `alpha_k`.
pub fn lambda_alpha(n: usize, k: usize) -> Weight {
    Weight((0..n).map(|i| i64::from(i <= k)).collect())
}

/// `lambda_{alpha_k, P}`: sum of `e_i` over `i <= k` lying in the block of `k+1`.
pub fn lambda_alpha_p(p: &StdParabolic, k: usize) -> Weight {
    let b = p.block_of(k + 1);
    Weight((0..p.rank()).map(|i| i64::from(i <= k && p.block_of(i) == b)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thetas {
    pub theta_g: Weight,
    pub theta_p: Weight,
    pub theta_upper: Weight,
}

pub fn theta_chars(p: &StdParabolic) -> Thetas {
    let n = p.rank();
    let tg = theta_g(n);
    let mut tp = Weight::zero(n);
    for &k in p.simple() {
        tp = tp.add(&lambda_alpha_p(p, k));
    }
    let upper = tg.sub(&tp);
    Thetas { theta_g: tg, theta_p: tp, theta_upper: upper }
}

/// Sign helper for rationals.
pub fn is_nonneg(x: &Q) -> bool {
    !x.is_negative()
}

pub fn q_one() -> Q {
    Q::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[i64]) -> Weight {
        Weight(v.to_vec())
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(&w(&[1, 0]).to_q(), &Root::simple(0)).unwrap(), q(1));
        assert_eq!(pairing(&theta_g(3).to_q(), &Root::simple(0)).unwrap(), q(1));
        let half = RationalWeight(vec![q_frac(3, 2), q_frac(3, 2), q(0)]);
        assert_eq!(pairing(&half, &Root::simple(0)).unwrap(), q(0));
        assert!(pairing(&w(&[1, 0]).to_q(), &Root { i: 0, j: 2 }).is_err());
    }

    #[test]
    fn dominance_examples() {
        assert!(is_dominant(&w(&[2, 1, 0]).to_q()));
        assert!(is_dominant(&RationalWeight(vec![q_frac(3, 2), q_frac(3, 2), q(0)])));
        assert!(!is_dominant(&w(&[0, 1]).to_q()));
    }

    #[test]
    fn simple_coord_examples() {
        let (c, r) = simple_coords(&w(&[1, -1, 0]).to_q());
        assert_eq!((c, r), (vec![q(1), q(0)], q(0)));
        let (c, r) = simple_coords(&w(&[1, 0, -1]).to_q());
        assert_eq!((c, r), (vec![q(1), q(1)], q(0)));
        let (c, r) = simple_coords(&w(&[1, 1, 1]).to_q());
        assert_eq!((c, r), (vec![q(1), q(2)], q(3)));
    }

    #[test]
    fn support_examples() {
        assert_eq!(support(&w(&[1, 0, -1]).to_q()).unwrap(), BTreeSet::from([0, 1]));
        assert!(support(&Weight::zero(3).to_q()).unwrap().is_empty());
        let half = RationalWeight(vec![q_frac(1, 2), q_frac(-1, 2), q(0)]);
        assert_eq!(support(&half).unwrap(), BTreeSet::from([0]));
        assert!(support(&w(&[1, 1, 1]).to_q()).is_err());
    }

    #[test]
    fn average_examples() {
        let p21 = StdParabolic::from_blocks(&[2, 1]).unwrap();
        assert_eq!(weyl_average(&w(&[3, 0, 0]), &p21).unwrap(), RationalWeight(vec![q_frac(3, 2), q_frac(3, 2), q(0)]));
        assert_eq!(weyl_average(&w(&[2, 1, 0]), &StdParabolic::borel(3)).unwrap(), w(&[2, 1, 0]).to_q());
        assert_eq!(weyl_average(&w(&[1, 1, 1]), &p21).unwrap(), w(&[1, 1, 1]).to_q());
    }

    #[test]
    fn theta_examples() {
        let p = StdParabolic::from_blocks(&[2, 3, 1]).unwrap();
        let t = theta_chars(&p);
        assert_eq!(t.theta_p, w(&[1, 0, 2, 1, 0, 0]));
        assert_eq!(t.theta_upper, w(&[4, 4, 1, 1, 1, 0]));
        let g = theta_chars(&StdParabolic::full(4));
        assert_eq!(g.theta_p, theta_g(4));
        assert_eq!(g.theta_upper, Weight::zero(4));
        let t = theta_chars(&StdParabolic::from_blocks(&[2, 1]).unwrap());
        assert_eq!(t.theta_upper, w(&[1, 1, 0]));
    }

    #[test]
    fn parabolic_blocks_roundtrip() {
        for n in 1..7 {
            for p in StdParabolic::all(n) {
                let again = StdParabolic::from_blocks(p.blocks()).unwrap();
                assert_eq!(again, p);
                assert_eq!(p.blocks().iter().sum::<usize>(), n);
            }
        }
        assert!(StdParabolic::from_blocks(&[2, 0, 1]).is_err());
        assert!(StdParabolic::from_simple(3, BTreeSet::from([2])).is_err());
    }

    #[test]
    fn block_perm_shape() {
        let p = StdParabolic::from_blocks(&[2, 1]).unwrap();
        let s = BlockPerm::new(&p, vec![1, 0]).unwrap();
        assert_eq!(s.perm, Perm(vec![1, 2, 0]));
        assert_eq!(s.target().blocks(), &[1, 2]);
        assert_eq!(s.perm.map_simple(p.simple()), Some(s.target().simple().clone()));
    }
}
