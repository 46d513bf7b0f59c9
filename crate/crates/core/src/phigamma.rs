//! Tame characters, tensor induction, and finite-precision étale
//! `(φ, Γ)`-modules over `F((X))` attached to `δ`-orbits of Serre weights.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::fq::{binom_mod_p, Elem, Fq, FqError};
use crate::serre::DeltaOrbit;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PgError {
    #[error("characters live over different fields or levels")]
    Mismatch,
    #[error("level must be f or 2f")]
    Level,
    #[error("a single level-2f character must be restricted to K first")]
    Level2f,
    #[error("index {0} out of range")]
    Range(usize),
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("mu_{0} is zero")]
    ZeroMu(usize),
    #[error("invalid orbit data: {0}")]
    Orbit(String),
    #[error(transparent)]
    Field(#[from] FqError),
}

fn pow_u64(p: u64, e: u32) -> u64 {
    p.pow(e)
}

/// `ω_level^exp · unr(g^unram)`: a tame character of `K^×`, `K = Q_{p^f}`,
/// where `g` generates `F_{p^e}^×` and `unr` is the value at `p`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TameChar {
    pub p: u64,
    pub f: u32,
    pub level: u32,
    pub exp: u64,
    pub e: u32,
    pub unram: u64,
}

impl TameChar {
    pub fn new(p: u64, f: u32, level: u32, exp: i64, e: u32, unram: i64) -> Result<Self, PgError> {
        if f == 0 || (level != f && level != 2 * f) || e == 0 {
            return Err(PgError::Level);
        }
        let mut c = TameChar { p, f, level, exp: 0, e, unram: 0 };
        c.exp = exp.rem_euclid(c.modulus() as i64) as u64;
        c.unram = unram.rem_euclid(c.unram_modulus() as i64) as u64;
        Ok(c)
    }

    /// `ω_f^a` over `Q_{p^f}`, trivial unramified part.
    pub fn omega(p: u64, f: u32, a: i64) -> Self {
        TameChar::new(p, f, f, a, 1, 0).expect("level f")
    }

    pub fn trivial(p: u64, f: u32) -> Self {
        TameChar::omega(p, f, 0)
    }

    /// The mod `p` cyclotomic character of `K`, i.e. `ω_f^{(q-1)/(p-1)}`.
    pub fn cyclotomic(p: u64, f: u32) -> Self {
        TameChar::omega(p, f, ((pow_u64(p, f) - 1) / (p - 1)) as i64)
    }

    pub fn modulus(&self) -> u64 {
        pow_u64(self.p, self.level) - 1
    }

    pub fn unram_modulus(&self) -> u64 {
        pow_u64(self.p, self.e) - 1
    }

    fn compatible(&self, o: &TameChar) -> Result<(), PgError> {
        if (self.p, self.f, self.level, self.e) == (o.p, o.f, o.level, o.e) {
            Ok(())
        } else {
            Err(PgError::Mismatch)
        }
    }

    pub fn mul(&self, o: &TameChar) -> Result<TameChar, PgError> {
        self.compatible(o)?;
        Ok(TameChar {
            exp: (self.exp + o.exp) % self.modulus(),
            unram: (self.unram + o.unram) % self.unram_modulus(),
            ..self.clone()
        })
    }

    pub fn pow(&self, k: i64) -> TameChar {
        let m = self.modulus() as i128;
        let u = self.unram_modulus() as i128;
        TameChar {
            exp: (self.exp as i128 * k as i128).rem_euclid(m) as u64,
            unram: (self.unram as i128 * k as i128).rem_euclid(u) as u64,
            ..self.clone()
        }
    }

    /// `χ^σ = χ(σ · σ^{-1})`: the exponent is multiplied by `p`.
    pub fn conj(&self) -> TameChar {
        TameChar { exp: (self.exp as u128 * self.p as u128 % self.modulus() as u128) as u64, ..self.clone() }
    }

    /// Restriction of a level-`2f` character to `K^×`.
    pub fn restrict_to_base(&self) -> TameChar {
        if self.level == self.f {
            return self.clone();
        }
        TameChar { level: self.f, exp: self.exp % (pow_u64(self.p, self.f) - 1), ..self.clone() }
    }

    /// Tensor induction to `G_{Q_p}`: composition with the transfer, i.e.
    /// restriction to `Q_p^×`. `ω_f^a ↦ ω^{a mod (p-1)}`; the value at `p`
    /// is unchanged.
    pub fn tensor_induce(&self) -> Result<TameChar, PgError> {
        if self.level != self.f {
            return Err(PgError::Level2f);
        }
        Ok(TameChar { f: 1, level: 1, exp: self.exp % (self.p - 1), ..self.clone() })
    }

    fn level_name(&self) -> String {
        match self.level {
            1 => "ω".into(),
            l => format!("ω_{l}"),
        }
    }
}

impl fmt::Display for TameChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{} · unr(g^{})", self.level_name(), self.exp, self.unram)
    }
}

/// `δ_G` for `GL_n` over `Q_{p^f}`: `ω^{f((n-1)^2 + … + 1)}`.
pub fn delta_g(p: u64, f: u32, n: u32) -> TameChar {
    let s: u64 = (1..n as u64).map(|j| j * j).sum();
    TameChar::omega(p, 1, ((f as u64 * s) % (p - 1)) as i64)
}

/// `V` of the principal series `Ind(χ_1 ω^{-(n-1)} ⊗ … ⊗ χ_n)`:
/// the tensor induction of `χ_1^{n-1} χ_2^{n-2} ⋯ χ_{n-1}`.
pub fn predict_v_ps(chis: &[TameChar]) -> Result<TameChar, PgError> {
    let first = chis.first().ok_or(PgError::Range(0))?;
    let n = chis.len() as i64;
    let mut acc = TameChar::trivial(first.p, first.f);
    acc.e = first.e;
    for (i, c) in chis.iter().enumerate() {
        acc = acc.mul(&c.pow(n - 1 - i as i64))?;
    }
    acc.tensor_induce()
}

/// `V(SS_i)`: the characters `(⊗_{σ∈I} χ_1^σ) ⊗ (⊗_{σ∉I} χ_2^σ)` of `G_K` over all
/// `I ⊆ Gal(K/Q_p)` with `|I| = f - i`, as a sorted multiset.
pub fn predict_v_ss(chi1: &TameChar, chi2: &TameChar, i: u32) -> Result<Vec<TameChar>, PgError> {
    chi1.compatible(chi2)?;
    let f = chi1.f;
    if i == 0 || i >= f {
        return Err(PgError::Range(i as usize));
    }
    let mut out = Vec::new();
    for mask in 0u32..1 << f {
        if mask.count_ones() != f - i {
            continue;
        }
        let mut acc = TameChar { exp: 0, unram: 0, ..chi1.clone() };
        let (mut c1, mut c2) = (chi1.clone(), chi2.clone());
        for s in 0..f {
            acc = acc.mul(if mask >> s & 1 == 1 { &c1 } else { &c2 })?;
            c1 = c1.conj();
            c2 = c2.conj();
        }
        out.push(acc);
    }
    out.sort();
    Ok(out)
}

/// The `V`-predictions for the `f + 1` constituents of the `GL_2(Q_{p^f})`
/// chain: both principal series and every `SS_i`, in chain order.
pub fn predict_example_chain(chi1: &TameChar, chi2: &TameChar) -> Result<Vec<Vec<TameChar>>, PgError> {
    let f = chi1.f;
    let mut out = vec![vec![chi1.tensor_induce()?]];
    for i in 1..f {
        out.push(predict_v_ss(chi1, chi2, i)?);
    }
    out.push(vec![chi2.tensor_induce()?]);
    Ok(out)
}

/// The integer identity behind the compatibility of `δ_G` with a Levi
/// decomposition into blocks `(n_1, …, n_d)`.
pub fn composition_identity(blocks: &[u64]) -> bool {
    let sq = |k: u64| -> u64 { (1..k).map(|j| j * j).sum() };
    let n: u64 = blocks.iter().sum();
    let mut rhs: u64 = blocks.iter().map(|&b| sq(b)).sum();
    let mut before = 0;
    for &b in blocks {
        let through = before + b;
        rhs += b * (n - through) * (n - 1).saturating_sub(before);
        before = through;
    }
    sq(n) == rhs
}

/// Absolute precision that stands for "exact".
const EXACT: i64 = 1 << 40;

/// `Σ_{k ≥ val} c_k X^k`, known modulo `X^{val + coeffs.len()}`. A zero
/// known modulo `X^A` has empty `coeffs` and `val = A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncLaurent {
    pub val: i64,
    pub coeffs: Vec<Elem>,
}

impl TruncLaurent {
    pub fn zero(abs_prec: i64) -> Self {
        TruncLaurent { val: abs_prec.min(EXACT), coeffs: Vec::new() }
    }

    pub fn exact_zero() -> Self {
        TruncLaurent::zero(EXACT)
    }

    /// `c X^k` with `rel` known coefficients.
    pub fn monomial(c: Elem, k: i64, rel: usize) -> Self {
        let mut coeffs = vec![0; rel];
        if rel > 0 {
            coeffs[0] = c;
        }
        TruncLaurent { val: k, coeffs }.normalized()
    }

    pub fn from_coeffs(val: i64, coeffs: Vec<Elem>) -> Self {
        TruncLaurent { val, coeffs }.normalized()
    }

    fn normalized(mut self) -> Self {
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        self.val += lead as i64;
        self.coeffs.drain(..lead);
        self
    }

    pub fn abs_prec(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    pub fn rel_prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Valuation, or `None` when the element vanishes within precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.val)
    }

    pub fn coeff(&self, k: i64) -> Option<Elem> {
        if k >= self.abs_prec() {
            None
        } else if k < self.val {
            Some(0)
        } else {
            Some(self.coeffs[(k - self.val) as usize])
        }
    }

    pub fn truncate(&self, abs: i64) -> Self {
        if abs >= self.abs_prec() {
            return self.clone();
        }
        if abs <= self.val {
            return TruncLaurent::zero(abs);
        }
        TruncLaurent { val: self.val, coeffs: self.coeffs[..(abs - self.val) as usize].to_vec() }.normalized()
    }

    pub fn add(&self, fq: &Fq, o: &Self) -> Self {
        let abs = self.abs_prec().min(o.abs_prec());
        let lo = self.val.min(o.val).min(abs);
        let coeffs = (lo..abs).map(|k| fq.add(self.coeff(k).unwrap_or(0), o.coeff(k).unwrap_or(0))).collect();
        TruncLaurent { val: lo, coeffs }.normalized()
    }

    pub fn neg(&self, fq: &Fq) -> Self {
        TruncLaurent { val: self.val, coeffs: self.coeffs.iter().map(|&c| fq.neg(c)).collect() }
    }

    pub fn sub(&self, fq: &Fq, o: &Self) -> Self {
        self.add(fq, &o.neg(fq))
    }

    pub fn scale(&self, fq: &Fq, c: Elem) -> Self {
        if c == 0 {
            return TruncLaurent::exact_zero();
        }
        TruncLaurent { val: self.val, coeffs: self.coeffs.iter().map(|&x| fq.mul(c, x)).collect() }
    }

    pub fn mul(&self, fq: &Fq, o: &Self) -> Self {
        match (self.is_zero(), o.is_zero()) {
            (true, true) => return TruncLaurent::zero(self.val.saturating_add(o.val)),
            (true, false) => return TruncLaurent::zero(self.val.saturating_add(o.val)),
            (false, true) => return TruncLaurent::zero(self.val.saturating_add(o.val)),
            _ => {}
        }
        let n = self.rel_prec().min(o.rel_prec());
        let mut c = vec![0; n];
        for (i, &a) in self.coeffs.iter().enumerate().take(n) {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate().take(n - i) {
                c[i + j] = fq.add(c[i + j], fq.mul(a, b));
            }
        }
        TruncLaurent { val: self.val + o.val, coeffs: c }.normalized()
    }

    /// Inverse of an element whose leading coefficient is known.
    pub fn inv(&self, fq: &Fq) -> Result<Self, PgError> {
        if self.is_zero() {
            return Err(PgError::Precision("inverting an element that vanishes within precision".into()));
        }
        let n = self.rel_prec();
        let a0 = fq.inv(self.coeffs[0]).unwrap();
        let mut b = vec![0; n];
        b[0] = a0;
        for k in 1..n {
            let mut s = 0;
            for i in 1..=k {
                s = fq.add(s, fq.mul(self.coeffs[i], b[k - i]));
            }
            b[k] = fq.neg(fq.mul(s, a0));
        }
        Ok(TruncLaurent { val: -self.val, coeffs: b })
    }

    pub fn pow(&self, fq: &Fq, k: i64) -> Result<Self, PgError> {
        let base = if k < 0 { self.inv(fq)? } else { self.clone() };
        let mut acc = TruncLaurent::monomial(1, 0, base.rel_prec().max(1));
        if base.is_zero() && k > 0 {
            return Ok(TruncLaurent::zero(base.val.saturating_mul(k)));
        }
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(fq, &base);
        }
        Ok(acc)
    }

    /// `φ`: `X ↦ X^p`, `F`-linear.
    pub fn phi(&self, fq: &Fq) -> Self {
        let p = fq.p() as i64;
        if self.is_zero() {
            return TruncLaurent::zero(self.val.saturating_mul(p));
        }
        let mut coeffs = vec![0; self.rel_prec() * p as usize - (p as usize - 1)];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * p as usize] = c;
        }
        // the image is known modulo X^{p·abs}
        coeffs.resize(self.rel_prec() * p as usize, 0);
        TruncLaurent { val: self.val * p, coeffs }
    }

    /// `a(X) ↦ a(γ(X))` for `γ(X) = X w(X)` with `w` a unit.
    pub fn substitute(&self, fq: &Fq, gx: &TruncLaurent) -> Result<Self, PgError> {
        if gx.val != 1 {
            return Err(PgError::Precision("substitution needs a series of valuation one".into()));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let n = self.rel_prec();
        let w = TruncLaurent { val: 0, coeffs: gx.coeffs.clone() };
        if w.rel_prec() < n {
            return Err(PgError::Precision("γ(X) known to too few terms".into()));
        }
        let xw = TruncLaurent { val: 1, coeffs: w.coeffs[..n].to_vec() };
        // Horner on b(T) = Σ a_{v+i} T^i at T = X w
        let constant =
            |c: Elem| TruncLaurent { val: 0, coeffs: std::iter::once(c).chain(std::iter::repeat(0)).take(n).collect() };
        let mut acc = constant(self.coeffs[n - 1]);
        for i in (0..n - 1).rev() {
            acc = acc.mul(fq, &xw).add(fq, &constant(self.coeffs[i]));
        }
        let wn = TruncLaurent { val: 0, coeffs: w.coeffs[..n].to_vec() };
        Ok(acc.mul(fq, &wn.pow(fq, self.val)?.mul(fq, &TruncLaurent::monomial(1, self.val, n))))
    }

    /// Equality on the common window of known coefficients.
    pub fn agrees(&self, o: &Self) -> bool {
        let abs = self.abs_prec().min(o.abs_prec());
        let lo = self.val.min(o.val).min(abs);
        (lo..abs).all(|k| self.coeff(k) == o.coeff(k))
    }
}

/// `γ ∈ Z_p^×` known modulo `p^M`, little-endian base-`p` digits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gamma {
    pub digits: Vec<u32>,
}

impl Gamma {
    pub fn from_int(p: u32, value: u64, m: u32) -> Result<Self, PgError> {
        if value % p as u64 == 0 {
            return Err(PgError::Precision("γ must be a p-adic unit".into()));
        }
        let mut v = value % (p as u64).pow(m);
        let digits = (0..m)
            .map(|_| {
                let d = (v % p as u64) as u32;
                v /= p as u64;
                d
            })
            .collect();
        Ok(Gamma { digits })
    }

    pub fn value(&self, p: u32) -> u64 {
        self.digits.iter().rev().fold(0, |a, &d| a * p as u64 + d as u64)
    }

    /// `γ̄ ∈ F_p^×`.
    pub fn reduction(&self) -> u32 {
        self.digits[0]
    }

    /// Largest number of `X`-coefficients of `γ(X)` these digits determine.
    pub fn max_terms(&self, p: u32) -> usize {
        (p as usize).pow(self.digits.len() as u32)
    }
}

/// `1 + p` and the Teichmüller lift of the least primitive root, mod `p^M`.
pub fn default_gammas(p: u32, m: u32) -> Result<Vec<Gamma>, PgError> {
    let pm = (p as u64).pow(m);
    let g = (2..p as u64).find(|&g| (1..p as u64 - 1).all(|k| mod_pow(g, k, p as u64) != 1)).unwrap_or(1);
    let teich = mod_pow(g, (p as u64).pow(m - 1), pm);
    Ok(vec![Gamma::from_int(p, 1 + p as u64, m)?, Gamma::from_int(p, teich, m)?])
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// `γ(X) = (1+X)^γ - 1` to `n` coefficients, from the digits of `γ` (Lucas).
pub fn gamma_x(fq: &Fq, g: &Gamma, n: usize) -> Result<TruncLaurent, PgError> {
    let p = fq.p();
    if n + 1 > g.max_terms(p) {
        return Err(PgError::Precision(format!("γ(X) needs γ modulo a power of p above {}", n)));
    }
    let v = g.value(p);
    let coeffs: Vec<Elem> = (1..=n).map(|k| binom_mod_p(v, k as u64, p as u64) as Elem).collect();
    Ok(TruncLaurent { val: 1, coeffs })
}

pub type Matrix = Vec<Vec<TruncLaurent>>;

#[derive(Clone, Debug, Serialize)]
pub struct GammaAction {
    pub gamma_digits: Vec<u32>,
    pub matrix: Matrix,
}

/// A free `F((X))`-module with a `φ`-matrix and `γ`-matrices. Column `j` of a
/// matrix holds the coordinates of the image of `e_j`.
#[derive(Clone, Debug, Serialize)]
pub struct PhiGammaModule {
    #[serde(skip)]
    pub fq: Fq,
    pub rank: usize,
    /// The `m` of the orbit this module was built from.
    pub m: usize,
    pub phi: Matrix,
    pub gammas: Vec<GammaAction>,
    pub etale: bool,
}

fn mat_mul(fq: &Fq, a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(TruncLaurent::exact_zero(), |acc, k| acc.add(fq, &a[i][k].mul(fq, &b[k][j]))))
                .collect()
        })
        .collect()
}

fn mat_map(m: &Matrix, f: impl Fn(&TruncLaurent) -> Result<TruncLaurent, PgError>) -> Result<Matrix, PgError> {
    m.iter().map(|row| row.iter().map(&f).collect()).collect()
}

fn mat_agrees(a: &Matrix, b: &Matrix) -> bool {
    a.iter().zip(b).all(|(r, s)| r.iter().zip(s).all(|(x, y)| x.agrees(y)))
}

/// Determinant by elimination, pivoting on the least valuation.
pub fn determinant(fq: &Fq, m: &Matrix) -> Result<TruncLaurent, PgError> {
    let n = m.len();
    let mut a = m.clone();
    let window = m.iter().flatten().map(|x| x.rel_prec()).max().unwrap_or(1).max(1);
    let mut det = TruncLaurent::monomial(1, 0, window);
    for c in 0..n {
        let piv = (c..n)
            .filter(|&r| !a[r][c].is_zero())
            .min_by_key(|&r| a[r][c].val)
            .ok_or_else(|| PgError::Precision("singular within precision".into()))?;
        if piv != c {
            a.swap(piv, c);
            det = det.neg(fq);
        }
        det = det.mul(fq, &a[c][c]);
        let inv = a[c][c].inv(fq)?;
        for r in c + 1..n {
            if a[r][c].is_zero() && a[r][c].val >= EXACT {
                continue;
            }
            let factor = a[r][c].mul(fq, &inv);
            for k in c..n {
                let t = factor.mul(fq, &a[c][k]);
                a[r][k] = a[r][k].sub(fq, &t);
            }
        }
    }
    Ok(det)
}

impl PhiGammaModule {
    /// Whether `γ φ = φ γ` on the basis, within precision, for every `γ`.
    pub fn commutes(&self) -> Result<bool, PgError> {
        let fq = &self.fq;
        let n = self.rel_window();
        for ga in &self.gammas {
            let g = Gamma { digits: ga.gamma_digits.clone() };
            let gx = gamma_x(fq, &g, n)?;
            let lhs = mat_mul(fq, &ga.matrix, &mat_map(&self.phi, |x| x.substitute(fq, &gx))?);
            let rhs = mat_mul(fq, &self.phi, &mat_map(&ga.matrix, |x| Ok(x.phi(fq)))?);
            if !mat_agrees(&lhs, &rhs) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn rel_window(&self) -> usize {
        self.phi
            .iter()
            .flatten()
            .chain(self.gammas.iter().flat_map(|g| g.matrix.iter().flatten()))
            .filter(|x| !x.is_zero())
            .map(|x| x.rel_prec())
            .max()
            .unwrap_or(1)
    }

    pub fn phi_determinant(&self) -> Result<TruncLaurent, PgError> {
        determinant(&self.fq, &self.phi)
    }

    /// `φ(e_i) = c X^k e_{target}`, when the `φ`-matrix is monomial.
    pub fn phi_monomial(&self, i: usize) -> Option<(usize, Elem, i64)> {
        let mut hit = None;
        for (r, row) in self.phi.iter().enumerate() {
            let x = &row[i];
            if !x.is_zero() {
                if hit.is_some() || x.coeffs.iter().skip(1).any(|&c| c != 0) {
                    return None;
                }
                hit = Some((r, x.coeffs[0], x.val));
            }
        }
        hit
    }
}

/// Solves for the unique `u_i ∈ 1 + X F[[X]]` making `γ(e_i) = c_i u_i e_i`
/// commute with `φ(e_i) = a_i X^{E_i} e_{i+1}`.
fn solve_gamma(fq: &Fq, exps: &[i64], c: &[Elem], g: &Gamma, n: usize) -> Result<Vec<TruncLaurent>, PgError> {
    let rank = exps.len();
    let gx = gamma_x(fq, g, n)?;
    let gbar = g.reduction() as Elem;
    // (γ̄ X / γ(X)) as a unit series
    let unit = TruncLaurent { val: 0, coeffs: gx.coeffs.clone() }.scale(fq, fq.inv(gbar).unwrap()).inv(fq)?;
    let mut w = Vec::with_capacity(rank);
    for i in 0..rank {
        let next = (i + 1) % rank;
        let k = fq.mul(c[i], fq.inv(fq.mul(c[next], fq.pow(gbar, exps[i]))).unwrap());
        if k != 1 {
            return Err(PgError::Orbit(format!("γ constants are inconsistent at step {i}")));
        }
        w.push(unit.pow(fq, exps[i])?);
    }
    let mut u: Vec<TruncLaurent> = vec![TruncLaurent::monomial(1, 0, n); rank];
    for _ in 0..=n + 1 {
        let before = u.clone();
        for i in 0..rank {
            let next = (i + 1) % rank;
            u[next] = u[i].phi(fq).truncate(n as i64).mul(fq, &w[i]);
        }
        if u == before {
            return Ok(u);
        }
    }
    Err(PgError::Precision("γ fixed point did not stabilize".into()))
}

fn cyclic_module(
    fq: &Fq,
    m: usize,
    mu: &[Elem],
    exps: &[i64],
    consts: &[Vec<Elem>],
    gammas: &[Gamma],
    prec: usize,
) -> Result<PhiGammaModule, PgError> {
    let rank = exps.len();
    let mut phi: Matrix = vec![vec![TruncLaurent::exact_zero(); rank]; rank];
    for i in 0..rank {
        let inv = fq.inv(mu[i]).ok_or(PgError::ZeroMu(i + 1))?;
        phi[(i + 1) % rank][i] = TruncLaurent::monomial(inv, exps[i], prec);
    }
    let mut acts = Vec::new();
    for (g, c) in gammas.iter().zip(consts) {
        let u = solve_gamma(fq, exps, c, g, prec)?;
        let mut mat: Matrix = vec![vec![TruncLaurent::exact_zero(); rank]; rank];
        for i in 0..rank {
            mat[i][i] = u[i].scale(fq, c[i]);
        }
        acts.push(GammaAction { gamma_digits: g.digits.clone(), matrix: mat });
    }
    let mut md = PhiGammaModule { fq: fq.clone(), rank, m, phi, gammas: acts, etale: false };
    md.etale = md.phi_determinant().map(|d| !d.is_zero()).unwrap_or(false);
    Ok(md)
}

/// `μ_i = 1` for `i < n` and `μ_n = ν (∏_{i'} ∏_{J^max(σ_{i'})} (p-1-s_j^{(i'+1)})!)^{-1}`;
/// `μ_1 = ν` for a fixed point.
pub fn default_mu(fq: &Fq, orbit: &DeltaOrbit, nu: Elem) -> Vec<Elem> {
    let n = orbit.len();
    let mut mu = vec![1; n];
    if n == 1 {
        mu[0] = nu;
        return mu;
    }
    let mut prod = 1;
    for st in &orbit.steps {
        for &j in &st.jmax {
            prod = fq.mul(prod, fq.factorial((orbit.p - 1 - st.s_next[j]) as u32));
        }
    }
    mu[n - 1] = fq.mul(nu, fq.inv(prod).unwrap());
    mu
}

/// `k_i` with `χ_i(diag(1, γ)) = γ̄^{k_i}`, from `k_1` and `k_{i+1} = k_i - s_i`.
pub fn chi_exponents(orbit: &DeltaOrbit, k1: i64) -> Vec<i64> {
    let p = orbit.p;
    let mut k = vec![k1.rem_euclid(p - 1)];
    for s in orbit.s_values().iter().take(orbit.len() - 1) {
        let last = *k.last().unwrap();
        k.push((last - s).rem_euclid(p - 1));
    }
    k
}

fn check_orbit_inputs(fq: &Fq, orbit: &DeltaOrbit, mu: &[Elem], chi: &[i64]) -> Result<(), PgError> {
    let n = orbit.len();
    if fq.p() as i64 != orbit.p {
        return Err(PgError::Mismatch);
    }
    if mu.len() != n || chi.len() != n {
        return Err(PgError::Orbit(format!("expected {n} values of μ and χ")));
    }
    if let Some(i) = mu.iter().position(|&x| x == 0) {
        return Err(PgError::ZeroMu(i + 1));
    }
    let s = orbit.s_values();
    for i in 0..n {
        if (chi[i] - s[i] - chi[(i + 1) % n]).rem_euclid(orbit.p - 1) != 0 {
            return Err(PgError::Orbit(format!(
                "χ_{} and χ_{} are not related by s_{}",
                i + 1,
                (i + 1) % n + 1,
                i + 1
            )));
        }
    }
    Ok(())
}

/// The cyclic module `φ(e_i) = μ_i^{-1} X^{s_i} e_{i+1}` with
/// `γ(e_i) ∈ χ_i(diag(1,γ)) γ̄^m (1 + X F[[X]]) e_i`, the units solved uniquely.
pub fn build_md(
    fq: &Fq,
    orbit: &DeltaOrbit,
    mu: &[Elem],
    chi: &[i64],
    gammas: &[Gamma],
    prec: usize,
) -> Result<PhiGammaModule, PgError> {
    check_orbit_inputs(fq, orbit, mu, chi)?;
    let m = orbit.m_module() as i64;
    let consts: Vec<Vec<Elem>> =
        gammas.iter().map(|g| chi.iter().map(|&k| fq.pow(g.reduction() as Elem, k + m)).collect()).collect();
    cyclic_module(fq, m as usize, mu, &orbit.s_values(), &consts, gammas, prec)
}

/// The module before the twist: `φ(x_i^∨) = μ_i^{-1} X^{s_i + (p-1)(f-m)} x_{i+1}^∨`,
/// `γ(x_i^∨) ∈ χ_i γ̄^{-Σ r_j} (1 + X F[[X]]) x_i^∨`.
pub fn build_md_untwisted(
    fq: &Fq,
    orbit: &DeltaOrbit,
    mu: &[Elem],
    chi: &[i64],
    gammas: &[Gamma],
    prec: usize,
) -> Result<PhiGammaModule, PgError> {
    check_orbit_inputs(fq, orbit, mu, chi)?;
    let f = orbit.r.len() as i64;
    let m = orbit.m_module() as i64;
    let p = orbit.p;
    let sum_r: i64 = orbit.r.iter().sum();
    let exps: Vec<i64> = orbit.s_values().iter().map(|s| s + (p - 1) * (f - m)).collect();
    let consts: Vec<Vec<Elem>> =
        gammas.iter().map(|g| chi.iter().map(|&k| fq.pow(g.reduction() as Elem, k - sum_r)).collect()).collect();
    cyclic_module(fq, m as usize, mu, &exps, &consts, gammas, prec)
}

/// Tensor with `N`: `φ(e) = X^{-(p-1)Σ(r_j+1)} e`,
/// `γ(e) = (γ̄X / ((1+X)^γ - 1))^{Σ(r_j+1)} e`, then pass to the basis
/// `e'_i = X^{m + Σ r_j}(x_i^∨ ⊗ e)`.
pub fn twist_n(md: &PhiGammaModule, r: &[i64]) -> Result<PhiGammaModule, PgError> {
    let fq = &md.fq;
    let p = fq.p() as i64;
    let big_r: i64 = r.iter().map(|x| x + 1).sum();
    let shift = md.m as i64 + r.iter().sum::<i64>();
    let window = md.rel_window();
    // φ-matrix: X^{-(p-1)R} from N, X^{(p-1)·shift} from the basis change
    let xk = TruncLaurent::monomial(1, (p - 1) * (shift - big_r), window);
    let phi = mat_map(&md.phi, |x| Ok(x.mul(fq, &xk)))?;
    let mut gammas = Vec::new();
    for ga in &md.gammas {
        let g = Gamma { digits: ga.gamma_digits.clone() };
        let gx = gamma_x(fq, &g, window)?;
        let gbar = g.reduction() as Elem;
        // (γ(X)/X) as a unit; N contributes its (-R)-th power times γ̄^R
        let ratio = TruncLaurent { val: 0, coeffs: gx.coeffs.clone() };
        let factor = ratio.pow(fq, shift - big_r)?.scale(fq, fq.pow(gbar, big_r));
        gammas.push(GammaAction {
            gamma_digits: ga.gamma_digits.clone(),
            matrix: mat_map(&ga.matrix, |x| Ok(x.mul(fq, &factor)))?,
        });
    }
    let mut out = PhiGammaModule { fq: fq.clone(), rank: md.rank, m: md.m, phi, gammas, etale: false };
    out.etale = out.phi_determinant().map(|d| !d.is_zero()).unwrap_or(false);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_f_induces_to_omega() {
        for (p, f) in [(5, 1), (5, 2), (7, 3)] {
            let w = TameChar::omega(p, f, 1);
            assert_eq!(w.tensor_induce().unwrap(), TameChar::omega(p, 1, 1));
        }
    }

    #[test]
    fn composition_small() {
        assert!(composition_identity(&[2, 1]));
        assert!(composition_identity(&[5]));
        assert!(composition_identity(&[1, 1, 1, 1]));
    }

    #[test]
    fn ss_f2() {
        let c1 = TameChar::omega(5, 2, 3);
        let c2 = TameChar::omega(5, 2, 7);
        let v = predict_v_ss(&c1, &c2, 1).unwrap();
        let mut want = vec![c1.mul(&c2.conj()).unwrap(), c1.conj().mul(&c2).unwrap()];
        want.sort();
        assert_eq!(v, want);
    }

    #[test]
    fn laurent_inverse() {
        let fq = Fq::new(5, 1).unwrap();
        let a = TruncLaurent::from_coeffs(-2, vec![2, 1, 3, 0, 4]);
        let b = a.inv(&fq).unwrap();
        let one = a.mul(&fq, &b);
        assert!(one.agrees(&TruncLaurent::monomial(1, 0, 5)));
    }

    #[test]
    fn gamma_x_leading_term() {
        let fq = Fq::new(7, 1).unwrap();
        for g in default_gammas(7, 2).unwrap() {
            let gx = gamma_x(&fq, &g, 20).unwrap();
            assert_eq!(gx.val, 1);
            assert_eq!(gx.coeffs[0], g.reduction());
        }
    }
}
