//! Closed subsets of `R+` relative to a standard parabolic, their closure
//! operator, the orbit ordering used to build minimal conjugates, and the
//! block shuffles relating two shapes.
//!
//! Everything here is root combinatorics: a shape `(P, X)` stands for the
//! group `M_P N_X`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::weyl::{positive_roots, BlockPerm, Perm, Root, StdParabolic};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShapeError {
    #[error("root {0} is not a positive root of GL_{1}")]
    NotPositive(Root, usize),
    #[error("levi root {0} is missing from X")]
    MissingLevi(Root),
    #[error("not closed: {0} + {1} = {2} is missing")]
    NotClosed(Root, Root, Root),
    #[error("not stable under the levi Weyl group: s_{0} sends {1} to {2}")]
    NotStable(usize, Root, Root),
    #[error("root {0} already lies in X")]
    AlreadyPresent(Root),
    #[error("internal: orbit ordering check failed at {0}")]
    OrderCheck(Root),
}

/// A subset `X ⊆ R+` closed relative to `P`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelClosedSet {
    p: StdParabolic,
    roots: BTreeSet<Root>,
}

impl RelClosedSet {
    pub fn parabolic(&self) -> &StdParabolic {
        &self.p
    }

    pub fn roots(&self) -> &BTreeSet<Root> {
        &self.roots
    }

    pub fn rank(&self) -> usize {
        self.p.rank()
    }

    /// `X \ R(P)+`.
    pub fn unipotent_part(&self) -> BTreeSet<Root> {
        self.roots.iter().filter(|r| !self.p.is_levi_root(r)).copied().collect()
    }

    /// `X = R(P)+`, the shape of `M_P`.
    pub fn levi_only(p: &StdParabolic) -> Self {
        RelClosedSet { p: p.clone(), roots: p.levi_positive_roots().into_iter().collect() }
    }

    /// `X = R+`, the shape of `P` itself.
    pub fn full(p: &StdParabolic) -> Self {
        RelClosedSet { p: p.clone(), roots: positive_roots(p.rank()).into_iter().collect() }
    }

    pub fn contains(&self, r: &Root) -> bool {
        self.roots.contains(r)
    }
}

impl fmt::Display for RelClosedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {{", self.p)?;
        for (k, r) in self.roots.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "}}")
    }
}

fn closure_witness(set: &BTreeSet<Root>) -> Option<(Root, Root, Root)> {
    for a in set {
        for b in set {
            if let Some(s) = a.plus(b) {
                if s.is_positive() && !set.contains(&s) {
                    return Some((*a, *b, s));
                }
            }
        }
    }
    None
}

/// Check the three defining conditions, then full closedness.
pub fn validate(p: &StdParabolic, x: &BTreeSet<Root>) -> Result<RelClosedSet, ShapeError> {
    let n = p.rank();
    for r in x {
        if !r.is_positive() || r.j >= n {
            return Err(ShapeError::NotPositive(*r, n));
        }
    }
    for r in p.levi_positive_roots() {
        if !x.contains(&r) {
            return Err(ShapeError::MissingLevi(r));
        }
    }
    let u: BTreeSet<Root> = x.iter().filter(|r| !p.is_levi_root(r)).copied().collect();
    if let Some((a, b, s)) = closure_witness(&u) {
        return Err(ShapeError::NotClosed(a, b, s));
    }
    // W(P) is generated by the simple reflections of S(P).
    for &k in p.simple() {
        let s = Perm::simple_reflection(n, k);
        for r in &u {
            let img = s.act_root(r);
            if !u.contains(&img) {
                return Err(ShapeError::NotStable(k, *r, img));
            }
        }
    }
    // Closedness relative to P implies closedness.
    if let Some((a, b, s)) = closure_witness(x) {
        return Err(ShapeError::NotClosed(a, b, s));
    }
    Ok(RelClosedSet { p: p.clone(), roots: x.clone() })
}

/// Smallest set closed relative to `P` containing `X` and `alpha`.
pub fn rel_closure(s0: &RelClosedSet, alpha: Root) -> Result<RelClosedSet, ShapeError> {
    let n = s0.rank();
    if !alpha.is_positive() || alpha.j >= n {
        return Err(ShapeError::NotPositive(alpha, n));
    }
    if s0.contains(&alpha) {
        return Err(ShapeError::AlreadyPresent(alpha));
    }
    Ok(close_up(&s0.p, s0.roots.iter().copied().chain([alpha])))
}

fn close_up(p: &StdParabolic, seed: impl IntoIterator<Item = Root>) -> RelClosedSet {
    let n = p.rank();
    let reflections: Vec<Perm> = p.simple().iter().map(|&k| Perm::simple_reflection(n, k)).collect();
    let mut u: BTreeSet<Root> = BTreeSet::new();
    let mut work: Vec<Root> = seed.into_iter().filter(|r| !p.is_levi_root(r)).collect();
    while let Some(r) = work.pop() {
        if !u.insert(r) {
            continue;
        }
        for s in &reflections {
            let img = s.act_root(&r);
            if !u.contains(&img) {
                work.push(img);
            }
        }
        for other in u.iter() {
            if let Some(sum) = r.plus(other) {
                if sum.is_positive() && !u.contains(&sum) {
                    work.push(sum);
                }
            }
        }
    }
    let mut roots: BTreeSet<Root> = p.levi_positive_roots().into_iter().collect();
    roots.extend(u);
    RelClosedSet { p: p.clone(), roots }
}

/// `W(P)`-orbit of a root.
pub fn levi_orbit(p: &StdParabolic, r: &Root) -> BTreeSet<Root> {
    let n = p.rank();
    let refl: Vec<Perm> = p.simple().iter().map(|&k| Perm::simple_reflection(n, k)).collect();
    let mut seen = BTreeSet::from([*r]);
    let mut work = vec![*r];
    while let Some(x) = work.pop() {
        for s in &refl {
            let y = s.act_root(&x);
            if seen.insert(y) {
                work.push(y);
            }
        }
    }
    seen
}

/// Orbit representatives `alpha_1..alpha_m` of `R+ \ X`, each of maximal
/// height in its orbit, ordered by decreasing height (ties lexicographic),
/// such that each `alpha_i` lies outside the relative closure of
/// `X ∪ {alpha_1..alpha_{i-1}}`.
pub fn orderw_decompose(s0: &RelClosedSet) -> Result<Vec<Root>, ShapeError> {
    let p = &s0.p;
    let mut rest: BTreeSet<Root> = positive_roots(p.rank()).into_iter().filter(|r| !s0.contains(r)).collect();
    let mut reps = Vec::new();
    while let Some(&first) = rest.iter().next() {
        let orbit = levi_orbit(p, &first);
        let best = *orbit.iter().max_by(|a, b| a.height().cmp(&b.height()).then(b.cmp(a))).expect("orbit nonempty");
        for r in &orbit {
            rest.remove(r);
        }
        reps.push(best);
    }
    reps.sort_by(|a, b| b.height().cmp(&a.height()).then(a.cmp(b)));

    // Check the incremental property and that each step adds exactly one orbit.
    let mut cur = s0.clone();
    for a in &reps {
        if cur.contains(a) {
            return Err(ShapeError::OrderCheck(*a));
        }
        let next = rel_closure(&cur, *a)?;
        let mut expect = cur.roots.clone();
        expect.extend(levi_orbit(p, a));
        if next.roots != expect {
            return Err(ShapeError::OrderCheck(*a));
        }
        cur = next;
    }
    if cur.roots.len() != p.rank() * p.rank().saturating_sub(1) / 2 {
        return Err(ShapeError::OrderCheck(Root { i: 0, j: 0 }));
    }
    Ok(reps)
}

/// Block shuffles `w` with `w(X \ R(P)+) ⊆ R+`.
pub fn w_set(s0: &RelClosedSet) -> Vec<BlockPerm> {
    let u = s0.unipotent_part();
    BlockPerm::all(&s0.p).into_iter().filter(|w| u.iter().all(|r| w.perm.act_root(r).is_positive())).collect()
}

/// A block shuffle `w ∈ w_set(s1)` with `^w P1 = P2` and `w(X1) = X2`.
pub fn good_equivalent(s1: &RelClosedSet, s2: &RelClosedSet) -> Option<BlockPerm> {
    if s1.rank() != s2.rank() {
        return None;
    }
    w_set(s1).into_iter().find(|w| {
        w.target() == s2.p && s1.roots.iter().map(|r| w.perm.act_root(r)).collect::<BTreeSet<_>>() == s2.roots
    })
}

/// Every shape of rank `n`, by exhaustive search over subsets of `R+ \ R(P)+`.
pub fn all_shapes(n: usize) -> Vec<RelClosedSet> {
    let mut out = Vec::new();
    for p in StdParabolic::all(n) {
        let free: Vec<Root> = positive_roots(n).into_iter().filter(|r| !p.is_levi_root(r)).collect();
        assert!(free.len() < 32, "rank too large for exhaustive shape search");
        for mask in 0u32..1 << free.len() {
            let mut x: BTreeSet<Root> = p.levi_positive_roots().into_iter().collect();
            x.extend(free.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, r)| *r));
            if let Ok(s) = validate(&p, &x) {
                out.push(s);
            }
        }
    }
    out
}
