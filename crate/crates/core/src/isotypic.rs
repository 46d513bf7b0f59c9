//! The tensor representation `L⊗` of `GL_n` over `f` embeddings, seen through
//! its diagonal weights, and its isotypic components under the centre of a
//! standard Levi. Provides `P(C)`, `W(C)`, the shift `w·C`, the block
//! decomposition of `w(C)`, and the predicted constituent graph.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::conjugacy::RelClosedSet;
use crate::weyl::{
    block_average, is_dominant, simple_coords, support, theta_chars, theta_g, BlockPerm, Perm, RationalWeight,
    StdParabolic, Weight, WeylError,
};

pub const DEFAULT_MAX_WEIGHTS: u64 = 10_000_000;

pub type WeightMultiset = BTreeMap<Weight, u64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsoError {
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error("tensor representation of dimension {dim} exceeds the cap {cap}")]
    Cap { dim: String, cap: u64 },
    #[error("rank {0} too small, need n >= 2")]
    RankTooSmall(usize),
    #[error("need f >= 1")]
    NoEmbeddings,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("character {0:?} does not occur")]
    NotOccurring(Vec<i64>),
    #[error("internal: {0}")]
    Internal(String),
}

/// Diagonal weights of `L⊗` with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorWeightSystem {
    pub n: usize,
    pub f: usize,
    pub weights: WeightMultiset,
}

impl TensorWeightSystem {
    pub fn dim(&self) -> u64 {
        self.weights.values().sum()
    }
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `(prod_k C(n,k))^f`, or `None` on overflow.
pub fn tensor_dim(n: usize, f: usize) -> Option<u128> {
    let one: u128 = (1..n as u64).map(|k| binom(n as u64, k) as u128).product();
    let mut d: u128 = 1;
    for _ in 0..f {
        d = d.checked_mul(one)?;
    }
    Some(d)
}

fn convolve(a: &WeightMultiset, b: &WeightMultiset) -> WeightMultiset {
    let mut out = WeightMultiset::new();
    for (x, m) in a {
        for (y, k) in b {
            *out.entry(x.add(y)).or_insert(0) += m * k;
        }
    }
    out
}

fn subset_weights(n: usize, k: usize) -> WeightMultiset {
    let mut out = WeightMultiset::new();
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize == k {
            let v = (0..n).map(|i| i64::from(mask >> i & 1 == 1)).collect();
            out.insert(Weight(v), 1);
        }
    }
    out
}

pub fn build_system(n: usize, f: usize) -> Result<TensorWeightSystem, IsoError> {
    build_system_capped(n, f, DEFAULT_MAX_WEIGHTS)
}

/// Weights of `⊗_{embeddings} ⊗_{k=1}^{n-1} Λ^k(Std)`.
pub fn build_system_capped(n: usize, f: usize, cap: u64) -> Result<TensorWeightSystem, IsoError> {
    if n < 2 {
        return Err(IsoError::RankTooSmall(n));
    }
    if f == 0 {
        return Err(IsoError::NoEmbeddings);
    }
    match tensor_dim(n, f) {
        Some(d) if d <= cap as u128 => {}
        Some(d) => return Err(IsoError::Cap { dim: d.to_string(), cap }),
        None => return Err(IsoError::Cap { dim: "overflow".into(), cap }),
    }
    let mut one = WeightMultiset::from([(Weight::zero(n), 1)]);
    for k in 1..n {
        one = convolve(&one, &subset_weights(n, k));
    }
    let mut all = one.clone();
    for _ in 1..f {
        all = convolve(&all, &one);
    }
    Ok(TensorWeightSystem { n, f, weights: all })
}

/// Whether a dominant `mu` occurs, by the criterion: `f theta_G - mu` has
/// nonnegative simple coordinates and residue zero.
pub fn dominant_occurs(n: usize, f: usize, mu: &Weight) -> bool {
    let d = theta_g(n).scale(f as i64).sub(mu);
    let (coords, residue) = simple_coords(&d.to_q());
    residue == crate::weyl::q(0) && coords.iter().all(|c| *c >= crate::weyl::q(0))
}

/// A character of `Z_{M_P}`, recorded by its values on the block scalars.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZChar {
    pub parent: StdParabolic,
    pub blocksums: Vec<i64>,
}

impl ZChar {
    pub fn of(p: &StdParabolic, lambda: &Weight) -> ZChar {
        ZChar { parent: p.clone(), blocksums: p.block_sums(lambda) }
    }

    /// Block-constant representative `lambda'`.
    pub fn average(&self) -> RationalWeight {
        block_average(&self.blocksums, &self.parent)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotypicComponent {
    pub f: usize,
    pub zchar: ZChar,
    pub weights: WeightMultiset,
    pub dim: u64,
}

impl IsotypicComponent {
    pub fn rank(&self) -> usize {
        self.zchar.parent.rank()
    }

    pub fn parabolic(&self) -> &StdParabolic {
        &self.zchar.parent
    }

    /// Any weight of the component.
    pub fn lift(&self) -> &Weight {
        self.weights.keys().next().expect("components are nonempty")
    }
}

/// Isotypic components of `L⊗|_{Z_{M_P}}`, sorted by block sums.
pub fn components(sys: &TensorWeightSystem, p: &StdParabolic) -> Result<Vec<IsotypicComponent>, IsoError> {
    if p.rank() != sys.n {
        return Err(WeylError::RankMismatch(p.rank(), sys.n).into());
    }
    let mut groups: BTreeMap<Vec<i64>, WeightMultiset> = BTreeMap::new();
    for (w, &m) in &sys.weights {
        groups.entry(p.block_sums(w)).or_default().insert(w.clone(), m);
    }
    Ok(groups
        .into_iter()
        .map(|(bs, weights)| {
            let dim = weights.values().sum();
            IsotypicComponent { f: sys.f, zchar: ZChar { parent: p.clone(), blocksums: bs }, weights, dim }
        })
        .collect())
}

/// `P(C)`, `lambda'` and `W(C)` for a component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcInfo {
    pub lambda_prime: RationalWeight,
    pub pc: StdParabolic,
    pub wc: Vec<BlockPerm>,
}

/// `P(C)` and `W(C)` from the block sums of a component of `L⊗` with `f` embeddings.
pub fn parabolic_of_zchar(z: &ZChar, f: usize) -> Result<PcInfo, IsoError> {
    let p = &z.parent;
    let lp = z.average();
    let top = theta_g(p.rank()).scale(f as i64).to_q();
    let mut pc: Option<BTreeSet<usize>> = None;
    let mut wc = Vec::new();
    for w in BlockPerm::all(p) {
        let wl = w.perm.act_q(&lp);
        if !is_dominant(&wl) {
            continue;
        }
        let mut s = support(&top.sub(&wl))?;
        s.extend(w.perm.map_simple(p.simple()).expect("block shuffles keep simple roots simple"));
        match &pc {
            None => pc = Some(s),
            Some(prev) if *prev == s => {}
            Some(prev) => {
                return Err(IsoError::Internal(format!("P(C) depends on w: {prev:?} vs {s:?}")));
            }
        }
        wc.push(w);
    }
    let simple = pc.ok_or_else(|| IsoError::Internal("no block shuffle makes lambda' dominant".into()))?;
    Ok(PcInfo { lambda_prime: lp, pc: StdParabolic::from_simple(p.rank(), simple)?, wc })
}

pub fn parabolic_of(c: &IsotypicComponent) -> Result<PcInfo, IsoError> {
    parabolic_of_zchar(&c.zchar, c.f)
}

/// Block sums of `lambda - f w_C^{-1} theta_G + f (w w_C)^{-1} theta_G` on the parabolic of `C`.
fn shifted_zchar(z: &ZChar, f: usize, w: &Perm, wc: &Perm) -> ZChar {
    let p = &z.parent;
    let tg = theta_g(p.rank()).scale(f as i64);
    let a = wc.inverse().act(&tg);
    let b = w.compose(wc).inverse().act(&tg);
    let delta = p.block_sums(&b.sub(&a));
    ZChar { parent: p.clone(), blocksums: z.blocksums.iter().zip(delta).map(|(x, d)| x + d).collect() }
}

/// Character of `w·C`, for a permutation `w` with `w(S(P(C))) ⊆ S`.
pub fn w_dot_zchar(z: &ZChar, f: usize, w: &Perm) -> Result<ZChar, IsoError> {
    let info = parabolic_of_zchar(z, f)?;
    if w.rank() != z.parent.rank() {
        return Err(WeylError::RankMismatch(w.rank(), z.parent.rank()).into());
    }
    if w.map_simple(info.pc.simple()).is_none() {
        return Err(IsoError::Precondition(format!("w = {w} does not send S(P(C)) into S")));
    }
    let mut result: Option<ZChar> = None;
    for wc in &info.wc {
        let z2 = shifted_zchar(z, f, w, &wc.perm);
        match &result {
            None => result = Some(z2),
            Some(prev) if *prev == z2 => {}
            Some(prev) => {
                return Err(IsoError::Internal(format!(
                    "w·C depends on w_C: {:?} vs {:?}",
                    prev.blocksums, z2.blocksums
                )))
            }
        }
    }
    Ok(result.expect("W(C) is nonempty"))
}

/// The component `w·C`; checks that `P(w·C) = ^w P(C)`.
pub fn w_dot(comps: &[IsotypicComponent], c: &IsotypicComponent, w: &Perm) -> Result<IsotypicComponent, IsoError> {
    let z = w_dot_zchar(&c.zchar, c.f, w)?;
    let out =
        comps.iter().find(|d| d.zchar == z).cloned().ok_or_else(|| IsoError::NotOccurring(z.blocksums.clone()))?;
    let before = parabolic_of(c)?.pc;
    let after = parabolic_of(&out)?.pc;
    let expect = w.map_simple(before.simple()).expect("checked above");
    if after.simple() != &expect {
        return Err(IsoError::Internal(format!("P(w·C) = {after} but ^wP(C) has simple roots {expect:?}")));
    }
    Ok(out)
}

/// Factors of `w(C)` over the blocks of `P(C)`, after removing `f theta^{P(C)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub pc: StdParabolic,
    /// Local parabolic of each block: `^wP` restricted to that block of `P(C)`.
    pub local: Vec<StdParabolic>,
    pub factors: Vec<WeightMultiset>,
    /// Value of `f theta^{P(C)}` on each block.
    pub twist: Vec<i64>,
}

fn outer_product(factors: &[WeightMultiset]) -> WeightMultiset {
    let mut acc = WeightMultiset::from([(Weight(vec![]), 1)]);
    for fac in factors {
        let mut next = WeightMultiset::new();
        for (x, m) in &acc {
            for (y, k) in fac {
                let mut v = x.0.clone();
                v.extend_from_slice(&y.0);
                *next.entry(Weight(v)).or_insert(0) += m * k;
            }
        }
        acc = next;
    }
    acc
}

/// Split `w(C)` into block factors, each an isotypic component of the block system.
pub fn decompose(c: &IsotypicComponent, wc: &BlockPerm) -> Result<Decomposition, IsoError> {
    let info = parabolic_of(c)?;
    if !info.wc.iter().any(|w| w.perm == wc.perm) {
        return Err(IsoError::Precondition(format!("{} is not in W(C)", wc.perm)));
    }
    let n = c.rank();
    let pc = info.pc;
    let shift = theta_chars(&pc).theta_upper.scale(c.f as i64);
    let moved: WeightMultiset = c.weights.iter().map(|(mu, &m)| (wc.perm.act(mu).sub(&shift), m)).collect();
    let wp = wc.target();
    let lam = moved.keys().next().expect("nonempty").clone();

    let mut local = Vec::new();
    let mut factors = Vec::new();
    let mut twist = Vec::new();
    for (&start, &len) in pc.block_starts().iter().zip(pc.blocks()) {
        twist.push(shift.0[start]);
        let simple: BTreeSet<usize> =
            wp.simple().iter().filter(|&&k| k >= start && k + 1 < start + len).map(|k| k - start).collect();
        let lp = StdParabolic::from_simple(len, simple)?;
        let piece = Weight(lam.0[start..start + len].to_vec());
        if len == 1 {
            factors.push(WeightMultiset::from([(Weight(vec![0]), 1)]));
        } else {
            let sys = build_system(len, c.f)?;
            let target = lp.block_sums(&piece);
            let comp = components(&sys, &lp)?
                .into_iter()
                .find(|d| d.zchar.blocksums == target)
                .ok_or_else(|| IsoError::NotOccurring(target.clone()))?;
            factors.push(comp.weights);
        }
        local.push(lp);
    }
    let product = outer_product(&factors);
    if product != moved {
        return Err(IsoError::Internal(format!("factorization failed for component {:?}", c.zchar.blocksums)));
    }
    debug_assert_eq!(product.keys().next().map(|w| w.rank()), Some(n));
    Ok(Decomposition { pc, local, factors, twist })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    /// `P(C) = G`.
    SS,
    /// `P(C) = B`.
    PS,
    /// Any other `P(C)`.
    PI,
}

impl Tag {
    pub fn as_str(&self) -> &'static str {
        match self {
            Tag::SS => "SS",
            Tag::PS => "PS",
            Tag::PI => "PI",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub zchar: ZChar,
    pub dim: u64,
    pub lambda_prime: RationalWeight,
    pub pc: StdParabolic,
    pub blocks: Vec<usize>,
    /// `e_i = n - (n_1 + ... + n_i)`.
    pub twists: Vec<i64>,
    pub tag: Tag,
    pub socle: bool,
    pub cosocle: bool,
}

/// Predicted constituents with the covering relation of the reachability order.
/// An edge `u -> v` means `v` lies in the subrepresentation generated by `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstituentGraph {
    pub n: usize,
    pub f: usize,
    pub shape: RelClosedSet,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(usize, usize)>,
}

pub fn twists_of(blocks: &[usize]) -> Vec<i64> {
    let n: usize = blocks.iter().sum();
    let mut acc = 0;
    blocks
        .iter()
        .map(|b| {
            acc += b;
            (n - acc) as i64
        })
        .collect()
}

pub fn tag_of(pc: &StdParabolic) -> Tag {
    if pc.is_full() {
        Tag::SS
    } else if pc.is_borel() {
        Tag::PS
    } else {
        Tag::PI
    }
}

/// Strict reachability of a DAG given by adjacency lists.
fn reachability(n: usize, adj: &[Vec<usize>]) -> Vec<Vec<bool>> {
    let mut reach = vec![vec![false; n]; n];
    for s in 0..n {
        let mut stack: Vec<usize> = adj[s].clone();
        while let Some(v) = stack.pop() {
            if !reach[s][v] {
                reach[s][v] = true;
                stack.extend(adj[v].iter().copied());
            }
        }
    }
    reach
}

/// Constituent graph for `L⊗` restricted to `M_P N_X`.
pub fn good_lattice(sys: &TensorWeightSystem, x: &RelClosedSet) -> Result<ConstituentGraph, IsoError> {
    let p = x.parabolic();
    let comps = components(sys, p)?;
    let index: BTreeMap<&Vec<i64>, usize> = comps.iter().enumerate().map(|(k, c)| (&c.zchar.blocksums, k)).collect();
    let steps: BTreeSet<Vec<i64>> = x.unipotent_part().iter().map(|r| p.block_sums(&r.to_weight(p.rank()))).collect();

    let nv = comps.len();
    let mut adj = vec![Vec::new(); nv];
    for (u, c) in comps.iter().enumerate() {
        for s in &steps {
            let t: Vec<i64> = c.zchar.blocksums.iter().zip(s).map(|(a, b)| a + b).collect();
            if let Some(&v) = index.get(&t) {
                adj[u].push(v);
            }
        }
        adj[u].sort_unstable();
        adj[u].dedup();
    }
    let reach = reachability(nv, &adj);
    if (0..nv).any(|v| reach[v][v]) {
        return Err(IsoError::Internal("constituent relation has a cycle".into()));
    }
    let mut edges = Vec::new();
    for u in 0..nv {
        for &v in &adj[u] {
            let covered = (0..nv).any(|w| w != v && reach[u][w] && reach[w][v]);
            if !covered {
                edges.push((u, v));
            }
        }
    }
    edges.sort_unstable();

    let mut vertices = Vec::with_capacity(nv);
    for (k, c) in comps.iter().enumerate() {
        let info = parabolic_of(c)?;
        let blocks = info.pc.blocks().to_vec();
        vertices.push(Vertex {
            zchar: c.zchar.clone(),
            dim: c.dim,
            lambda_prime: info.lambda_prime,
            twists: twists_of(&blocks),
            tag: tag_of(&info.pc),
            pc: info.pc,
            blocks,
            socle: !edges.iter().any(|e| e.0 == k),
            cosocle: !edges.iter().any(|e| e.1 == k),
        });
    }
    Ok(ConstituentGraph { n: sys.n, f: sys.f, shape: x.clone(), vertices, edges })
}

impl ConstituentGraph {
    pub fn successors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |e| e.0 == u).map(|e| e.1)
    }

    /// Longest path from each vertex down to a socle vertex.
    pub fn depth(&self) -> Vec<usize> {
        let nv = self.vertices.len();
        let mut memo: Vec<Option<usize>> = vec![None; nv];
        fn go(g: &ConstituentGraph, u: usize, memo: &mut Vec<Option<usize>>) -> usize {
            if let Some(d) = memo[u] {
                return d;
            }
            let d = g.successors(u).map(|v| go(g, v, memo) + 1).max().unwrap_or(0);
            memo[u] = Some(d);
            d
        }
        (0..nv).map(|u| go(self, u, &mut memo)).collect()
    }

    /// The filtration by depth: the `k`-th set collects vertices of depth `<= k`.
    /// Each set is a good subrepresentation and the graded pieces are sums of components.
    pub fn filtration(&self) -> Vec<BTreeSet<usize>> {
        let depth = self.depth();
        let top = depth.iter().copied().max().unwrap_or(0);
        (0..=top).map(|k| (0..depth.len()).filter(|&u| depth[u] <= k).collect()).collect()
    }

    pub fn is_up_closed(&self, set: &BTreeSet<usize>) -> bool {
        self.edges.iter().all(|(u, v)| !set.contains(u) || set.contains(v))
    }

    /// All good subrepresentations (successor-closed vertex sets), or `None`
    /// if there are more than `limit`.
    pub fn up_closed_sets(&self, limit: usize) -> Option<Vec<BTreeSet<usize>>> {
        let nv = self.vertices.len();
        // Antichain-free enumeration: extend sets in a reverse topological order.
        let depth = self.depth();
        let mut order: Vec<usize> = (0..nv).collect();
        order.sort_by_key(|&u| (depth[u], u));
        let mut out = vec![BTreeSet::new()];
        for &u in &order {
            let mut added = Vec::new();
            for s in &out {
                if self.successors(u).all(|v| s.contains(&v)) {
                    let mut t = s.clone();
                    t.insert(u);
                    added.push(t);
                }
            }
            out.extend(added);
            if out.len() > limit {
                return None;
            }
        }
        out.sort();
        Some(out)
    }
}
