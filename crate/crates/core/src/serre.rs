//! Serre-weight combinatorics for `GL_2` over the unramified extension of
//! degree `f`: the sets `D ⊆ P`, the monomial ideals `a(λ)`, the duality
//! `λ ↦ λ*`, lengths, and the weight-cycling map `δ` with its `J^max` data.
//!
//! Tuples are symbolic: coordinate `j` is an affine form `ε x_j + c` (plus
//! `p` when `ε = -1`), so every identity here is independent of `p`. Numeric
//! values only enter through [`delta_orbits`], which instantiates `x_j = r_j`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Largest `f` accepted; subsets are stored as bitmasks.
pub const MAX_F: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SerreError {
    #[error("f must be in 1..={MAX_F}, got {0}")]
    BadF(usize),
    #[error("index {0} outside 0..{1}")]
    BadIndex(usize, usize),
    #[error("coordinate {j}: form {form} is not in the menu of this kind")]
    NotInMenu { j: usize, form: String },
    #[error("tuple has {got} coordinates, expected {want}")]
    Length { got: usize, want: usize },
    #[error("the cycling map is only defined for semisimple kinds")]
    NonsplitOrbit,
    #[error("not generic: {0}")]
    NotGeneric(String),
    #[error("internal: {0}")]
    Internal(String),
}

/// Shape of the residual representation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Irreducible,
    Split,
    /// Reducible nonsplit with its subset `J_ρ̄`.
    Nonsplit(BTreeSet<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RhoKind {
    kind: Kind,
    f: usize,
}

impl RhoKind {
    pub fn new(kind: Kind, f: usize) -> Result<Self, SerreError> {
        if f == 0 || f > MAX_F {
            return Err(SerreError::BadF(f));
        }
        if let Kind::Nonsplit(j) = &kind {
            if let Some(&bad) = j.iter().find(|&&x| x >= f) {
                return Err(SerreError::BadIndex(bad, f));
            }
        }
        Ok(RhoKind { kind, f })
    }

    pub fn irreducible(f: usize) -> Result<Self, SerreError> {
        Self::new(Kind::Irreducible, f)
    }

    pub fn split(f: usize) -> Result<Self, SerreError> {
        Self::new(Kind::Split, f)
    }

    pub fn nonsplit(f: usize, j: impl IntoIterator<Item = usize>) -> Result<Self, SerreError> {
        Self::new(Kind::Nonsplit(j.into_iter().collect()), f)
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn is_semisimple(&self) -> bool {
        !matches!(self.kind, Kind::Nonsplit(_))
    }

    pub fn is_irreducible(&self) -> bool {
        matches!(self.kind, Kind::Irreducible)
    }

    /// `J_ρ̄` as a bitmask; all of `0..f` for the split kind.
    fn jrho(&self) -> u32 {
        match &self.kind {
            Kind::Nonsplit(j) => to_mask(j.iter().copied()),
            _ => full_mask(self.f),
        }
    }

    /// The semisimplification (split for any reducible kind).
    pub fn semisimplification(&self) -> RhoKind {
        match self.kind {
            Kind::Nonsplit(_) => RhoKind { kind: Kind::Split, f: self.f },
            _ => self.clone(),
        }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            Kind::Irreducible => "irreducible".into(),
            Kind::Split => "split".into(),
            Kind::Nonsplit(j) => format!("nonsplit{:?}", j.iter().collect::<Vec<_>>()),
        }
    }
}

fn full_mask(f: usize) -> u32 {
    if f >= 32 {
        u32::MAX
    } else {
        (1u32 << f) - 1
    }
}

fn to_mask(it: impl IntoIterator<Item = usize>) -> u32 {
    it.into_iter().fold(0, |m, j| m | (1 << j))
}

fn bit(m: u32, j: usize) -> bool {
    m >> j & 1 == 1
}

/// Elements of a bitmask, increasing.
pub fn mask_elems(m: u32, f: usize) -> Vec<usize> {
    (0..f).filter(|&j| bit(m, j)).collect()
}

/// The affine form `ε x + c` if `ε = 1`, `p + c - x` if `ε = -1`.
/// Ordered with the `+x` forms first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    pub eps: i8,
    pub c: i64,
}

impl Ord for Form {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        (-self.eps, self.c).cmp(&(-o.eps, o.c))
    }
}

impl PartialOrd for Form {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Form {
    pub const fn plus(c: i64) -> Self {
        Form { eps: 1, c }
    }

    /// `p + c - x`.
    pub const fn minus(c: i64) -> Self {
        Form { eps: -1, c }
    }

    pub fn eval(&self, p: i64, x: i64) -> i64 {
        if self.eps > 0 {
            x + self.c
        } else {
            p + self.c - x
        }
    }

    fn shifted(self, d: i64) -> Form {
        Form { eps: self.eps, c: self.c + d }
    }

    pub fn render(&self, j: usize) -> String {
        let c = self.c;
        if self.eps > 0 {
            match c {
                0 => format!("x{j}"),
                c if c > 0 => format!("x{j}+{c}"),
                c => format!("x{j}{c}"),
            }
        } else {
            match c {
                0 => format!("p-x{j}"),
                c if c > 0 => format!("p+{c}-x{j}"),
                c => format!("p{c}-x{j}"),
            }
        }
    }
}

/// A tuple `(λ_0, …, λ_{f-1})` of affine forms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SerreTuple(pub Vec<Form>);

impl SerreTuple {
    pub fn f(&self) -> usize {
        self.0.len()
    }

    pub fn eval(&self, p: i64, r: &[i64]) -> Vec<i64> {
        self.0.iter().zip(r).map(|(l, &x)| l.eval(p, x)).collect()
    }

    pub fn rendered(&self) -> Vec<String> {
        self.0.iter().enumerate().map(|(j, l)| l.render(j)).collect()
    }
}

impl fmt::Display for SerreTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.rendered().join(", "))
    }
}

impl Serialize for SerreTuple {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rendered().serialize(s)
    }
}

/// Generator `t_j` of a monomial ideal: `y_j`, `z_j` or `y_j z_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    Y,
    Z,
    YZ,
}

impl Gen {
    pub fn render(&self, j: usize) -> String {
        match self {
            Gen::Y => format!("y{j}"),
            Gen::Z => format!("z{j}"),
            Gen::YZ => format!("y{j}z{j}"),
        }
    }
}

/// The ideal `(t_0, …, t_{f-1})`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonIdeal(pub Vec<Gen>);

impl MonIdeal {
    /// `A = {j : t_j = y_j z_j}` as a bitmask.
    pub fn a_mask(&self) -> u32 {
        to_mask(self.0.iter().enumerate().filter(|(_, g)| **g == Gen::YZ).map(|(j, _)| j))
    }

    pub fn a_set(&self) -> Vec<usize> {
        mask_elems(self.a_mask(), self.0.len())
    }

    pub fn has_y(&self) -> bool {
        self.0.contains(&Gen::Y)
    }

    pub fn rendered(&self) -> Vec<String> {
        self.0.iter().enumerate().map(|(j, g)| g.render(j)).collect()
    }
}

impl fmt::Display for MonIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.rendered().join(", "))
    }
}

impl Serialize for MonIdeal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rendered().serialize(s)
    }
}

// Per-coordinate menus of the ideal table, as (form, generator).
const GENERIC_MENU: [(Form, Gen); 6] = [
    (Form::plus(0), Gen::Z),
    (Form::minus(-3), Gen::Z),
    (Form::plus(2), Gen::Y),
    (Form::minus(-1), Gen::Y),
    (Form::plus(1), Gen::YZ),
    (Form::minus(-2), Gen::YZ),
];

const IRRED_ZERO_MENU: [(Form, Gen); 6] = [
    (Form::plus(-1), Gen::Z),
    (Form::minus(-2), Gen::Z),
    (Form::plus(1), Gen::Y),
    (Form::minus(0), Gen::Y),
    (Form::plus(0), Gen::YZ),
    (Form::minus(-1), Gen::YZ),
];

const OFF_J_MENU: [(Form, Gen); 4] =
    [(Form::plus(0), Gen::YZ), (Form::minus(-1), Gen::YZ), (Form::plus(1), Gen::YZ), (Form::minus(-2), Gen::YZ)];

fn menu(rho: &RhoKind, j: usize) -> &'static [(Form, Gen)] {
    match &rho.kind {
        Kind::Irreducible if j == 0 => &IRRED_ZERO_MENU,
        Kind::Nonsplit(_) if !bit(rho.jrho(), j) => &OFF_J_MENU,
        _ => &GENERIC_MENU,
    }
}

fn gen_at(rho: &RhoKind, j: usize, form: Form) -> Result<Gen, SerreError> {
    menu(rho, j)
        .iter()
        .find(|(l, _)| *l == form)
        .map(|&(_, g)| g)
        .ok_or_else(|| SerreError::NotInMenu { j, form: form.render(j) })
}

fn check_len(rho: &RhoKind, lam: &SerreTuple) -> Result<(), SerreError> {
    if lam.f() != rho.f {
        return Err(SerreError::Length { got: lam.f(), want: rho.f });
    }
    Ok(())
}

/// The ideal `a(λ)`, read coordinatewise off the menu of the kind.
pub fn ideal_of(lam: &SerreTuple, rho: &RhoKind) -> Result<MonIdeal, SerreError> {
    check_len(rho, lam)?;
    lam.0.iter().enumerate().map(|(j, &l)| gen_at(rho, j, l)).collect::<Result<_, _>>().map(MonIdeal)
}

/// The form at coordinate `j` of the `D`-element indexed by `J`.
fn recipe_form(rho: &RhoKind, jset: u32, j: usize) -> Form {
    let f = rho.f;
    let here = bit(jset, j);
    let prev = bit(jset, (j + f - 1) % f);
    let irred0 = rho.is_irreducible() && j == 0;
    let prev = if irred0 { !prev } else { prev };
    let base = match (here, prev) {
        (true, true) => Form::minus(-3),
        (true, false) => Form::minus(-2),
        (false, true) => Form::plus(1),
        (false, false) => Form::plus(0),
    };
    if irred0 {
        // x_0 ↦ x_0 - 1
        base.shifted(-base.eps as i64)
    } else {
        base
    }
}

/// The split (or irreducible) recipe tuple for `J`, ignoring `J_ρ̄`.
fn recipe(rho: &RhoKind, jset: u32) -> SerreTuple {
    SerreTuple((0..rho.f).map(|j| recipe_form(rho, jset, j)).collect())
}

/// An element of `D` together with the subset `J` indexing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DEntry {
    #[serde(rename = "J")]
    pub j: Vec<usize>,
    pub forms: SerreTuple,
    pub ell: usize,
}

/// The set `D` (Serre weights of `ρ̄`), ordered by the bitmask of `J`.
/// For the nonsplit kind this is the split recipe filtered by `J_ρ̄`, so it
/// has `2^{|J_ρ̄|}` elements.
pub fn build_d(rho: &RhoKind) -> Vec<DEntry> {
    let jr = rho.jrho();
    (0..1u32 << rho.f)
        .filter_map(|m| {
            let t = recipe(rho, m);
            let ok = t.0.iter().enumerate().all(|(j, l)| !(*l == Form::plus(1) || *l == Form::minus(-3)) || bit(jr, j));
            ok.then(|| DEntry { j: mask_elems(m, rho.f), ell: length_of(&t), forms: t })
        })
        .collect()
}

/// The `2^f` elements of `P` with no `y_j` generator. Equals `D` for the
/// semisimple kinds; for the nonsplit kind it is the image of `D(ρ̄^ss)`
/// with `p-3-x_j` replaced by `p-1-x_j` off `J_ρ̄`.
pub fn build_pbar(rho: &RhoKind) -> Vec<SerreTuple> {
    let jr = rho.jrho();
    let ss = rho.semisimplification();
    (0..1u32 << rho.f)
        .map(|m| {
            let mut t = recipe(&ss, m);
            for (j, l) in t.0.iter_mut().enumerate() {
                if !bit(jr, j) && *l == Form::minus(-3) {
                    *l = Form::minus(-1);
                }
            }
            t
        })
        .collect()
}

/// An element of `P` with its ideal and `A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PEntry {
    pub forms: SerreTuple,
    pub ideal: MonIdeal,
    #[serde(rename = "A")]
    pub a: Vec<usize>,
}

/// The set `P`: every element of [`build_pbar`] lifted two ways at each
/// `z_j` coordinate (value `v ↦ {v, v+2}`). Sorted by forms.
pub fn build_p(rho: &RhoKind) -> Result<Vec<PEntry>, SerreError> {
    let mut out = Vec::new();
    for base in build_pbar(rho) {
        let ideal = ideal_of(&base, rho)?;
        let zs: Vec<usize> = (0..rho.f).filter(|&j| ideal.0[j] == Gen::Z).collect();
        for sub in 0..1u32 << zs.len() {
            let mut t = base.clone();
            for (k, &j) in zs.iter().enumerate() {
                if bit(sub, k) {
                    t.0[j] = t.0[j].shifted(2);
                }
            }
            let ideal = ideal_of(&t, rho)?;
            out.push(PEntry { a: ideal.a_set(), ideal, forms: t });
        }
    }
    out.sort_by(|a, b| a.forms.cmp(&b.forms));
    let before = out.len();
    out.dedup_by(|a, b| a.forms == b.forms);
    if out.len() != before {
        return Err(SerreError::Internal("two lifts coincide".into()));
    }
    Ok(out)
}

/// The dual tuple `λ*`: `p-3-λ_j`, `p+1-λ_j` or `p-1-λ_j` according as
/// `t_j` is `z_j`, `y_j` or `y_j z_j`.
pub fn dual_tuple(lam: &SerreTuple, rho: &RhoKind) -> Result<SerreTuple, SerreError> {
    let ideal = ideal_of(lam, rho)?;
    Ok(SerreTuple(
        lam.0
            .iter()
            .zip(&ideal.0)
            .map(|(l, g)| {
                let k = match g {
                    Gen::Z => -3,
                    Gen::Y => 1,
                    Gen::YZ => -1,
                };
                Form { eps: -l.eps, c: k - l.c }
            })
            .collect(),
    ))
}

/// Length of an element of `D`: coordinates in `{p-2-x ± 1, x ± 1}`.
pub fn length_of(lam: &SerreTuple) -> usize {
    const S: [Form; 4] = [Form::minus(-1), Form::minus(-3), Form::plus(1), Form::plus(-1)];
    lam.0.iter().filter(|l| S.contains(l)).count()
}

/// Second count of the length: coordinates in `{p-1-x, p-2-x, p-3-x}`.
/// Agrees with [`length_of`] on `D` for semisimple kinds.
pub fn length_reflections(lam: &SerreTuple) -> usize {
    lam.0.iter().filter(|l| l.eps < 0 && (-3..=-1).contains(&l.c)).count()
}

/// `J_{δ(σ)}` from `J_σ`.
pub fn delta_j(rho: &RhoKind, jset: u32) -> u32 {
    let f = rho.f;
    let mut out = 0;
    for j in 0..f {
        let next = (j + 1) % f;
        let mut v = bit(jset, next);
        // in Z/2f the successor of f-1 is f, which lies in J' iff 0 ∉ J
        if rho.is_irreducible() && j == f - 1 {
            v = !v;
        }
        if v {
            out |= 1 << j;
        }
    }
    out
}

/// Checks the genericity window on `r` and returns `Err` with the first
/// violation.
pub fn check_generic(rho: &RhoKind, p: i64, r: &[i64]) -> Result<(), SerreError> {
    let f = rho.f as i64;
    if r.len() != rho.f {
        return Err(SerreError::Length { got: r.len(), want: rho.f });
    }
    if p < 4 * f + 1 {
        return Err(SerreError::NotGeneric(format!("p = {p} < 4f+1")));
    }
    for (j, &rj) in r.iter().enumerate() {
        let (lo, hi) = if rho.is_irreducible() && j == 0 { (2 * f, p - 1 - 2 * f) } else { (2 * f - 1, p - 2 - 2 * f) };
        if rj < lo || rj > hi {
            return Err(SerreError::NotGeneric(format!("r_{j} = {rj} outside [{lo}, {hi}]")));
        }
    }
    Ok(())
}

/// A deterministic generic choice of `r`: the bottom of each window plus `j`,
/// wrapped inside the window.
pub fn default_r(rho: &RhoKind, p: i64) -> Result<Vec<i64>, SerreError> {
    let f = rho.f as i64;
    let r = (0..rho.f)
        .map(|j| {
            let (lo, hi) =
                if rho.is_irreducible() && j == 0 { (2 * f, p - 1 - 2 * f) } else { (2 * f - 1, p - 2 - 2 * f) };
            if hi < lo {
                lo
            } else {
                lo + (j as i64) % (hi - lo + 1)
            }
        })
        .collect::<Vec<_>>();
    check_generic(rho, p, &r)?;
    Ok(r)
}

/// One step `σ_i → σ_{i+1} = δ(σ_i)` of a cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitStep {
    #[serde(rename = "J")]
    pub j: Vec<usize>,
    pub forms: SerreTuple,
    /// `t_j`, the forms evaluated at `r`.
    pub t: Vec<i64>,
    pub jmax: Vec<usize>,
    /// `s_j^{(i+1)}` for every `j`, so `δ(σ_i) = (s_0, …, s_{f-1})`.
    pub s_next: Vec<i64>,
    /// `s_i`: the sum of `s_next` over `J^max(σ_i)`, or `p-1` for a fixed point.
    pub s: i64,
}

/// A cycle `σ_1, …, σ_n` of `δ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaOrbit {
    pub p: i64,
    pub r: Vec<i64>,
    pub steps: Vec<OrbitStep>,
    /// `|J^max|`, constant along the cycle (0 for a fixed point).
    pub m: usize,
}

impl DeltaOrbit {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The `m` used by the `(φ,Γ)`-module: `|J^max|`, or 1 for a fixed point.
    pub fn m_module(&self) -> usize {
        if self.len() == 1 {
            1
        } else {
            self.m
        }
    }

    pub fn s_values(&self) -> Vec<i64> {
        self.steps.iter().map(|s| s.s).collect()
    }
}

/// Partition of `D` into cycles of `δ`, with numeric data at `(p, r)`.
pub fn delta_orbits(rho: &RhoKind, p: i64, r: &[i64]) -> Result<Vec<DeltaOrbit>, SerreError> {
    if !rho.is_semisimple() {
        return Err(SerreError::NonsplitOrbit);
    }
    check_generic(rho, p, r)?;
    let f = rho.f;
    let mut seen = vec![false; 1 << f];
    let mut orbits = Vec::new();
    for start in 0..1u32 << f {
        if seen[start as usize] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut cur = start;
        while !seen[cur as usize] {
            seen[cur as usize] = true;
            cyc.push(cur);
            cur = delta_j(rho, cur);
        }
        if cur != start {
            return Err(SerreError::Internal("δ is not a bijection on subsets".into()));
        }
        let n = cyc.len();
        let mut steps = Vec::with_capacity(n);
        let mut ms = BTreeSet::new();
        for &js in &cyc {
            let forms = recipe(rho, js);
            let t = forms.eval(p, r);
            let jmax = js ^ delta_j(rho, js);
            ms.insert(jmax.count_ones() as usize);
            let s_next: Vec<i64> = (0..f)
                .map(|j| {
                    let prev = bit(jmax, (j + f - 1) % f) as i64;
                    if bit(jmax, j) {
                        p - 2 - t[j] + prev
                    } else {
                        t[j] - prev
                    }
                })
                .collect();
            let s = if n == 1 { p - 1 } else { (0..f).filter(|&j| bit(jmax, j)).map(|j| s_next[j]).sum() };
            steps.push(OrbitStep { j: mask_elems(js, f), forms, t, jmax: mask_elems(jmax, f), s_next, s });
        }
        if ms.len() != 1 {
            return Err(SerreError::Internal("|J^max| varies along a cycle".into()));
        }
        let m = *ms.iter().next().unwrap();
        orbits.push(DeltaOrbit { p, r: r.to_vec(), steps, m });
    }
    Ok(orbits)
}

/// Exponents of `Y_j` producing the next vector of the cycle: `s_j^{(i+1)}`
/// on `J^max(σ_i)`, `p-1` elsewhere.
pub fn xdelta_exponents(step: &OrbitStep, p: i64) -> Vec<i64> {
    (0..step.s_next.len()).map(|j| if step.jmax.contains(&j) { step.s_next[j] } else { p - 1 }).collect()
}
