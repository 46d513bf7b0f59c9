//! Monomial modules over `R = F[y_j, z_j]` killed by every `y_j z_j`, their
//! multiplicities at the `2^f` minimal primes of `R̄ = R/(y_j z_j)`, and
//! characteristic cycles.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::serre::{Gen, MonIdeal};

/// Resource guard for enumerating minimal primes.
pub const MAX_F: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycleError {
    #[error("f = {0} exceeds the limit {MAX_F}")]
    TooLarge(usize),
    #[error("mixed ranks: {0} and {1}")]
    RankMismatch(usize, usize),
    #[error("declared decomposition does not match: {0}")]
    NotADecomposition(String),
}

/// The minimal prime `(y_i : i ∈ J, z_j : j ∉ J)`, stored as the bitmask of
/// `J`. `J = ∅` is `p_0 = (z_0, …, z_{f-1})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MinPrime {
    pub f: usize,
    pub j: u32,
}

impl MinPrime {
    pub fn all(f: usize) -> Result<Vec<MinPrime>, CycleError> {
        if f > MAX_F {
            return Err(CycleError::TooLarge(f));
        }
        Ok((0..1u32 << f).map(|j| MinPrime { f, j }).collect())
    }

    pub fn p0(f: usize) -> MinPrime {
        MinPrime { f, j: 0 }
    }

    pub fn contains_y(&self, j: usize) -> bool {
        self.j >> j & 1 == 1
    }

    pub fn label(&self) -> String {
        let gens: Vec<String> =
            (0..self.f).map(|i| if self.contains_y(i) { format!("y{i}") } else { format!("z{i}") }).collect();
        format!("({})", gens.join(","))
    }
}

/// A monomial `∏ y_j^{a_j} z_j^{b_j}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub y: Vec<u32>,
    pub z: Vec<u32>,
}

impl Monomial {
    pub fn one(f: usize) -> Self {
        Monomial { y: vec![0; f], z: vec![0; f] }
    }

    pub fn y(f: usize, j: usize) -> Self {
        let mut m = Self::one(f);
        m.y[j] = 1;
        m
    }

    pub fn z(f: usize, j: usize) -> Self {
        let mut m = Self::one(f);
        m.z[j] = 1;
        m
    }

    pub fn yz(f: usize, j: usize) -> Self {
        let mut m = Self::one(f);
        m.y[j] = 1;
        m.z[j] = 1;
        m
    }

    pub fn f(&self) -> usize {
        self.y.len()
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.y.iter().zip(&o.y).all(|(a, b)| a <= b) && self.z.iter().zip(&o.z).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial {
            y: self.y.iter().zip(&o.y).map(|(a, b)| a + b).collect(),
            z: self.z.iter().zip(&o.z).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.y.iter().chain(&self.z).sum()
    }

    /// Whether the monomial lies in the prime `q`.
    pub fn in_prime(&self, q: &MinPrime) -> bool {
        (0..self.f()).any(|j| if q.contains_y(j) { self.y[j] > 0 } else { self.z[j] > 0 })
    }

    /// Zero in `R̄`.
    pub fn vanishes_in_rbar(&self) -> bool {
        self.y.iter().zip(&self.z).any(|(a, b)| *a > 0 && *b > 0)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for j in 0..self.f() {
            for (v, e) in [("y", self.y[j]), ("z", self.z[j])] {
                match e {
                    0 => {}
                    1 => parts.push(format!("{v}{j}")),
                    e => parts.push(format!("{v}{j}^{e}")),
                }
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// A monomial ideal of `R` containing every `y_j z_j`, kept as its minimal
/// generating set in sorted order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonomialIdeal {
    f: usize,
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    /// The ideal generated by `gens` and all `y_j z_j`.
    pub fn new(f: usize, gens: impl IntoIterator<Item = Monomial>) -> Self {
        let mut all: Vec<Monomial> = gens.into_iter().collect();
        all.extend((0..f).map(|j| Monomial::yz(f, j)));
        all.sort();
        all.dedup();
        let minimal: Vec<Monomial> =
            all.iter().filter(|m| !all.iter().any(|o| o != *m && o.divides(m))).cloned().collect();
        MonomialIdeal { f, gens: minimal }
    }

    /// `(t_0, …, t_{f-1})`.
    pub fn from_gens(a: &MonIdeal) -> Self {
        let f = a.0.len();
        MonomialIdeal::new(
            f,
            a.0.iter().enumerate().map(|(j, g)| match g {
                Gen::Y => Monomial::y(f, j),
                Gen::Z => Monomial::z(f, j),
                Gen::YZ => Monomial::yz(f, j),
            }),
        )
    }

    pub fn zero(f: usize) -> Self {
        Self::new(f, [])
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    /// Back to the `(t_0, …, t_{f-1})` shape, if the ideal has it.
    pub fn as_gens(&self) -> Option<MonIdeal> {
        let f = self.f;
        let mut out = Vec::with_capacity(f);
        for j in 0..f {
            let g = if self.contains(&Monomial::y(f, j)) {
                Gen::Y
            } else if self.contains(&Monomial::z(f, j)) {
                Gen::Z
            } else {
                Gen::YZ
            };
            out.push(g);
        }
        let t = MonIdeal(out);
        (MonomialIdeal::from_gens(&t) == *self).then_some(t)
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.gens.iter().map(|m| m.to_string()).collect();
        write!(f, "({})", g.join(", "))
    }
}

/// A cyclic piece `χ^{-1} ⊗ R/a`; `chi` is opaque exponent data.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Piece {
    pub chi: Vec<i64>,
    pub ideal: MonomialIdeal,
}

/// A formal direct sum of cyclic pieces with multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MonModule {
    pub pieces: BTreeMap<Piece, u64>,
}

impl MonModule {
    pub fn cyclic(ideal: MonomialIdeal) -> Self {
        Self::from_pieces([(Piece { chi: vec![], ideal }, 1)])
    }

    pub fn from_pieces(it: impl IntoIterator<Item = (Piece, u64)>) -> Self {
        let mut m = MonModule::default();
        for (p, k) in it {
            if k > 0 {
                *m.pieces.entry(p).or_default() += k;
            }
        }
        m
    }

    pub fn direct_sum(&self, o: &MonModule) -> MonModule {
        Self::from_pieces(self.pieces.iter().chain(&o.pieces).map(|(p, k)| (p.clone(), *k)))
    }

    fn rank(&self) -> Result<Option<usize>, CycleError> {
        let mut f = None;
        for p in self.pieces.keys() {
            match f {
                None => f = Some(p.ideal.f),
                Some(g) if g != p.ideal.f => return Err(CycleError::RankMismatch(g, p.ideal.f)),
                _ => {}
            }
        }
        Ok(f)
    }
}

/// `m_q(R/a)`: the localization of `R̄` at a minimal prime is a field, so a
/// cyclic piece contributes 1 exactly when `a ⊆ q`.
pub fn mult_piece(ideal: &MonomialIdeal, q: &MinPrime) -> u64 {
    ideal.gens.iter().all(|g| g.in_prime(q)) as u64
}

pub fn mult_at(m: &MonModule, q: &MinPrime) -> u64 {
    m.pieces.iter().map(|(p, k)| k * mult_piece(&p.ideal, q)).sum()
}

/// `Z(M) = Σ_q m_q(M) q`, indexed by the bitmask of the prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub f: usize,
    pub mult: Vec<u64>,
}

impl Cycle {
    pub fn zero(f: usize) -> Self {
        Cycle { f, mult: vec![0; 1 << f] }
    }

    pub fn total(&self) -> u64 {
        self.mult.iter().sum()
    }

    pub fn at(&self, q: &MinPrime) -> u64 {
        self.mult[q.j as usize]
    }

    pub fn add(&self, o: &Cycle) -> Cycle {
        Cycle { f: self.f, mult: self.mult.iter().zip(&o.mult).map(|(a, b)| a + b).collect() }
    }

    /// Componentwise `≤`.
    pub fn le(&self, o: &Cycle) -> bool {
        self.mult.iter().zip(&o.mult).all(|(a, b)| a <= b)
    }

    /// Nonzero entries as `(prime, multiplicity)`, primes in subset order.
    pub fn support(&self) -> Vec<(MinPrime, u64)> {
        self.mult
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(j, &k)| (MinPrime { f: self.f, j: j as u32 }, k))
            .collect()
    }
}

/// The characteristic cycle. An empty module has rank `f` taken from `f`.
pub fn char_cycle(m: &MonModule, f: usize) -> Result<Cycle, CycleError> {
    if let Some(g) = m.rank()? {
        if g != f {
            return Err(CycleError::RankMismatch(f, g));
        }
    }
    let primes = MinPrime::all(f)?;
    Ok(Cycle { f, mult: primes.iter().map(|q| mult_at(m, q)).collect() })
}

/// `t' = ∏ y_j z_j / t_j` together with its character exponents
/// (`+1` for a `y_j` factor, `-1` for a `z_j` factor).
pub fn dual_generator(a: &MonIdeal) -> (Monomial, Vec<i8>) {
    let f = a.0.len();
    let mut m = Monomial::one(f);
    let mut tw = vec![0; f];
    for (j, g) in a.0.iter().enumerate() {
        match g {
            Gen::Z => {
                m.y[j] = 1;
                tw[j] = 1;
            }
            Gen::Y => {
                m.z[j] = 1;
                tw[j] = -1;
            }
            Gen::YZ => {}
        }
    }
    (m, tw)
}

/// Annihilator in `R̄` of a monomial `m`: a monomial `u` kills `m` iff `um`
/// contains some `y_j z_j`.
pub fn annihilator(m: &Monomial) -> MonomialIdeal {
    let f = m.f();
    let gens = (0..f).flat_map(|j| {
        let mut g = Vec::new();
        if m.y[j] > 0 {
            g.push(Monomial::z(f, j));
        }
        if m.z[j] > 0 {
            g.push(Monomial::y(f, j));
        }
        g
    });
    MonomialIdeal::new(f, gens.collect::<Vec<_>>())
}

/// `Hom_{R̄}(R/a, R̄) = R̄[a] = t'R̄ ≅ R/ann(t')`, returned as a cyclic module
/// with the twist carried by `t'`.
pub fn dual_module(a: &MonIdeal) -> (MonModule, Vec<i8>) {
    let (t, tw) = dual_generator(a);
    let piece = Piece { chi: tw.iter().map(|&x| x as i64).collect(), ideal: annihilator(&t) };
    (MonModule::from_pieces([(piece, 1)]), tw)
}

/// Checks that `m` is the formal sum of `m1` and `m2` and that the cycles add.
pub fn additivity_check(m1: &MonModule, m: &MonModule, m2: &MonModule, f: usize) -> Result<bool, CycleError> {
    if m1.direct_sum(m2) != *m {
        return Err(CycleError::NotADecomposition("M differs from M1 ⊕ M2".into()));
    }
    Ok(char_cycle(m, f)? == char_cycle(m1, f)?.add(&char_cycle(m2, f)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal(g: &[Gen]) -> MonomialIdeal {
        MonomialIdeal::from_gens(&MonIdeal(g.to_vec()))
    }

    #[test]
    fn p0_multiplicity() {
        let f = 2;
        let q = MinPrime::p0(f);
        assert_eq!(mult_piece(&ideal(&[Gen::Y, Gen::Z]), &q), 0);
        assert_eq!(mult_piece(&ideal(&[Gen::YZ, Gen::Z]), &q), 1);
        for q in MinPrime::all(f).unwrap() {
            assert_eq!(mult_piece(&MonomialIdeal::zero(f), &q), 1);
        }
    }

    #[test]
    fn all_z_supported_at_p0() {
        let c = char_cycle(&MonModule::cyclic(ideal(&[Gen::Z, Gen::Z, Gen::Z])), 3).unwrap();
        assert_eq!(c.support(), [(MinPrime::p0(3), 1)]);
    }

    #[test]
    fn dual_shapes() {
        let (m, tw) = dual_module(&MonIdeal(vec![Gen::YZ, Gen::YZ]));
        assert_eq!(tw, [0, 0]);
        assert_eq!(m.pieces.keys().next().unwrap().ideal, MonomialIdeal::zero(2));
        let a = MonIdeal(vec![Gen::Z, Gen::Z]);
        let (t, tw) = dual_generator(&a);
        assert_eq!(t.to_string(), "y0*y1");
        assert_eq!(tw, [1, 1]);
        let (m, _) = dual_module(&a);
        assert_eq!(m.pieces.keys().next().unwrap().ideal.as_gens().unwrap(), a);
    }

    #[test]
    fn two_copies_of_rbar_f1() {
        let m = MonModule::from_pieces([
            (Piece { chi: vec![1], ideal: MonomialIdeal::zero(1) }, 1),
            (Piece { chi: vec![2], ideal: MonomialIdeal::zero(1) }, 1),
        ]);
        assert_eq!(char_cycle(&m, 1).unwrap().total(), 4);
    }
}
