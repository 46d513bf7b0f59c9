//! Finite fields `F_q`, the group algebra `F[(F_q,+)] ≅ F[Y_0..Y_{f-1}]/(Y_j^p)`,
//! and the one-variable series relating `X` and `Y` in `F[[Z_p]]`.
//!
//! The coefficient field is `F_q` itself with `σ_0` the identity.
//! Field elements are `u32` indices whose base-`p` digits are the
//! coefficients of a polynomial in the generator of `F_q`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub const MAX_Q: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FqError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u32),
    #[error("need f >= 1")]
    ZeroF,
    #[error("q = p^f is too large (limit {MAX_Q})")]
    TooLarge,
    #[error("index {0} out of range {1}")]
    Range(u64, u64),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Elem = u32;

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// `F_q` with log/exp tables for a fixed primitive element.
#[derive(Clone, Debug)]
pub struct Fq {
    p: u32,
    f: u32,
    q: u32,
    /// Low coefficients of the monic modulus of degree `f`.
    modulus: Vec<u32>,
    exp: Vec<Elem>,
    log: Vec<u32>,
}

fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let f = modulus.len();
    let mut prod = vec![0u64; 2 * f];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] += (x * y) as u64;
        }
    }
    for k in (f..2 * f).rev() {
        let c = prod[k] % p as u64;
        prod[k] = 0;
        if c != 0 {
            // x^f = -Σ m_i x^i
            for (i, &m) in modulus.iter().enumerate() {
                prod[k - f + i] += (p as u64 - c) * m as u64;
            }
        }
    }
    prod[..f].iter().map(|&c| (c % p as u64) as u32).collect()
}

impl Fq {
    /// Builds `F_{p^f}` from the lexicographically smallest monic modulus
    /// that admits a primitive element, taking the smallest such element.
    pub fn new(p: u32, f: u32) -> Result<Self, FqError> {
        if p == 2 || !is_prime(p) {
            return Err(FqError::NotOddPrime(p));
        }
        if f == 0 {
            return Err(FqError::ZeroF);
        }
        let q = (p as u64).checked_pow(f).filter(|&q| q <= MAX_Q).ok_or(FqError::TooLarge)? as u32;
        let digits = |mut a: u32| -> Vec<u32> {
            (0..f)
                .map(|_| {
                    let d = a % p;
                    a /= p;
                    d
                })
                .collect()
        };
        let undigits = |d: &[u32]| -> u32 { d.iter().rev().fold(0, |acc, &x| acc * p + x) };
        for code in 0..q {
            let modulus = digits(code);
            for g in 1..q {
                let gd = digits(g);
                let mut exp = Vec::with_capacity(q as usize - 1);
                let mut cur = digits(1);
                let mut ok = true;
                for k in 0..q - 1 {
                    let c = undigits(&cur);
                    if c == 0 || (k > 0 && c == 1) {
                        ok = false;
                        break;
                    }
                    exp.push(c);
                    cur = poly_mul_mod(&cur, &gd, &modulus, p);
                }
                if ok && undigits(&cur) == 1 {
                    let mut log = vec![0; q as usize];
                    for (k, &e) in exp.iter().enumerate() {
                        log[e as usize] = k as u32;
                    }
                    return Ok(Fq { p, f, q, modulus, exp, log });
                }
                if f == 1 {
                    // every modulus x + c gives F_p; only the generator varies
                    continue;
                }
            }
        }
        Err(FqError::Precondition("no primitive element found".into()))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> Elem {
        self.exp.get(1).copied().unwrap_or(1)
    }

    pub fn digits(&self, mut a: Elem) -> Vec<u32> {
        (0..self.f)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, d: &[u32]) -> Elem {
        d.iter().rev().fold(0, |acc, &x| acc * self.p + x % self.p)
    }

    pub fn add(&self, mut a: Elem, mut b: Elem) -> Elem {
        let (p, mut out, mut w) = (self.p, 0, 1);
        for _ in 0..self.f {
            out += (a % p + b % p) % p * w;
            a /= p;
            b /= p;
            w *= p;
        }
        out
    }

    pub fn neg(&self, mut a: Elem) -> Elem {
        let (p, mut out, mut w) = (self.p, 0, 1);
        for _ in 0..self.f {
            out += (p - a % p) % p * w;
            a /= p;
            w *= p;
        }
        out
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        self.exp[((self.log[a as usize] + self.log[b as usize]) % n) as usize]
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        (a != 0).then(|| self.exp[((self.q - 1 - self.log[a as usize]) % (self.q - 1)) as usize])
    }

    /// `a^e` with `0^0 = 1`; negative `e` requires `a ≠ 0`.
    pub fn pow(&self, a: Elem, e: i64) -> Elem {
        if a == 0 {
            return match e {
                0 => 1,
                e if e > 0 => 0,
                _ => panic!("zero to a negative power"),
            };
        }
        let n = (self.q - 1) as i64;
        let k = (self.log[a as usize] as i64 * e.rem_euclid(n)).rem_euclid(n);
        self.exp[k as usize]
    }

    /// The image of an integer in `F_p ⊆ F_q`.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.p as i64) as Elem
    }

    pub fn frob(&self, a: Elem) -> Elem {
        self.pow(a, self.p as i64)
    }

    /// `Tr_{F_q/F_p}`, as an element of `F_p` (an index `< p`).
    pub fn trace(&self, a: Elem) -> Elem {
        let mut s = 0;
        let mut x = a;
        for _ in 0..self.f {
            s = self.add(s, x);
            x = self.frob(x);
        }
        debug_assert!(s < self.p);
        s
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }

    pub fn factorial(&self, n: u32) -> Elem {
        (1..=n).fold(1, |acc, k| self.mul(acc, self.from_int(k as i64)))
    }

    pub fn sign(&self, odd: bool) -> Elem {
        if odd {
            self.neg(1)
        } else {
            1
        }
    }
}

/// `C(n, k) mod p` by Lucas.
pub fn binom_mod_p(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut out = 1u64;
    while k > 0 {
        let (a, b) = (n % p, k % p);
        if b > a {
            return 0;
        }
        let mut c = 1u64;
        for i in 0..b {
            c = c * ((a - i) % p) % p;
        }
        let mut d = 1u64;
        for i in 1..=b {
            d = d * i % p;
        }
        out = out * c % p * pow_mod(d, p - 2, p) % p;
        n /= p;
        k /= p;
    }
    out
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
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

/// `W_m(F_q) = (Z/p^m)[x]/(P̃)` with `P̃` the integer lift of the modulus of `F_q`.
#[derive(Clone, Debug)]
pub struct WittRing<'a> {
    fq: &'a Fq,
    m: u32,
    pm: u64,
}

impl<'a> WittRing<'a> {
    pub fn new(fq: &'a Fq, m: u32) -> Result<Self, FqError> {
        let pm = (fq.p as u64).checked_pow(m).filter(|&x| x < 1 << 28).ok_or(FqError::TooLarge)?;
        Ok(WittRing { fq, m, pm })
    }

    pub fn modulus_pm(&self) -> u64 {
        self.pm
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let f = self.fq.f as usize;
        let pm = self.pm;
        let mut prod = vec![0u64; 2 * f];
        for i in 0..f {
            for j in 0..f {
                prod[i + j] = (prod[i + j] + a[i] * b[j]) % pm;
            }
        }
        for k in (f..2 * f).rev() {
            let c = prod[k];
            prod[k] = 0;
            if c != 0 {
                for (i, &md) in self.fq.modulus.iter().enumerate() {
                    prod[k - f + i] = (prod[k - f + i] + (pm - c) * md as u64) % pm;
                }
            }
        }
        prod.truncate(f);
        prod
    }

    fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let f = self.fq.f as usize;
        let mut r = vec![0u64; f];
        r[0] = 1 % self.pm;
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }

    /// The Teichmüller lift of `a`, mod `p^m`.
    pub fn teichmuller(&self, a: Elem) -> Vec<u64> {
        let mut x: Vec<u64> = self.fq.digits(a).into_iter().map(u64::from).collect();
        for _ in 1..self.m {
            x = self.pow(&x, self.fq.q as u64);
        }
        x
    }

    /// `Tr_{W_m(F_q)/(Z/p^m)}` as the trace of multiplication.
    pub fn trace(&self, a: &[u64]) -> u64 {
        let f = self.fq.f as usize;
        let mut t = 0;
        for k in 0..f {
            let mut xk = vec![0u64; f];
            xk[k] = 1;
            t = (t + self.mul(a, &xk)[k]) % self.pm;
        }
        t
    }
}

/// An element `Σ_a c_a [a]` of `F[(F_q,+)]`, indexed by `a`.
pub type GaElem = Vec<Elem>;

/// The group algebra `F[(F_q,+)]` with `F = F_q`.
pub struct GroupAlgebra<'a> {
    fq: &'a Fq,
}

impl<'a> GroupAlgebra<'a> {
    pub fn new(fq: &'a Fq) -> Self {
        GroupAlgebra { fq }
    }

    pub fn fq(&self) -> &Fq {
        self.fq
    }

    pub fn zero(&self) -> GaElem {
        vec![0; self.fq.q as usize]
    }

    pub fn delta(&self, a: Elem) -> GaElem {
        let mut v = self.zero();
        v[a as usize] = 1;
        v
    }

    pub fn one(&self) -> GaElem {
        self.delta(0)
    }

    pub fn add(&self, x: &GaElem, y: &GaElem) -> GaElem {
        x.iter().zip(y).map(|(&a, &b)| self.fq.add(a, b)).collect()
    }

    pub fn sub(&self, x: &GaElem, y: &GaElem) -> GaElem {
        x.iter().zip(y).map(|(&a, &b)| self.fq.sub(a, b)).collect()
    }

    pub fn scale(&self, c: Elem, x: &GaElem) -> GaElem {
        x.iter().map(|&a| self.fq.mul(c, a)).collect()
    }

    /// Convolution over `(F_q, +)`.
    pub fn mul(&self, x: &GaElem, y: &GaElem) -> GaElem {
        let fq = self.fq;
        let mut out = self.zero();
        for (a, &ca) in x.iter().enumerate().filter(|(_, c)| **c != 0) {
            for (b, &cb) in y.iter().enumerate().filter(|(_, c)| **c != 0) {
                let s = fq.add(a as Elem, b as Elem) as usize;
                out[s] = fq.add(out[s], fq.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, x: &GaElem, e: u32) -> GaElem {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, x))
    }

    /// `Y_i = Σ_{a ≠ 0} a^{-p^i} [a]`.
    pub fn y(&self, i: u32) -> GaElem {
        let e = -(self.fq.p as i64).pow(i);
        let mut v = self.zero();
        for a in 1..self.fq.q {
            v[a as usize] = self.fq.pow(a, e);
        }
        v
    }

    pub fn y_elements(&self) -> Vec<GaElem> {
        (0..self.fq.f).map(|i| self.y(i)).collect()
    }

    /// `θ_i = Σ_λ λ^i [λ]` for `0 ≤ i ≤ q-1`.
    pub fn theta(&self, i: u32) -> Result<GaElem, FqError> {
        if i >= self.fq.q {
            return Err(FqError::Range(i as u64, self.fq.q as u64));
        }
        Ok((0..self.fq.q).map(|l| self.fq.pow(l, i as i64)).collect())
    }

    /// The torus action `[a] ↦ [c a]` of `diag(λ, μ)` with `c = λ μ^{-1}`.
    pub fn torus_act(&self, c: Elem, x: &GaElem) -> GaElem {
        let mut out = self.zero();
        for (a, &ca) in x.iter().enumerate() {
            let b = self.fq.mul(c, a as Elem) as usize;
            out[b] = self.fq.add(out[b], ca);
        }
        out
    }

    /// `Σ_{Tr λ = 0} [λ]`.
    pub fn trace_zero_sum(&self) -> Result<GaElem, FqError> {
        if self.fq.f < 2 {
            return Err(FqError::Precondition("the trace-zero identity needs f > 1".into()));
        }
        Ok((0..self.fq.q).map(|l| (self.fq.trace(l) == 0) as Elem).collect())
    }
}

/// Multi-index `(i_0, …, i_{f-1})` with `0 ≤ i_j < p`, encoded as `Σ i_j p^j`.
pub fn multi_index(fq: &Fq, k: u32) -> Vec<u32> {
    fq.digits(k)
}

/// All monomials `Y^k` (`0 ≤ k_j ≤ p-1`) and the inverse of the change of
/// basis, for expanding group-algebra elements in the `Y`-basis.
pub struct YBasis<'a> {
    ga: &'a GroupAlgebra<'a>,
    mons: Vec<GaElem>,
    inv: Vec<Vec<Elem>>,
}

impl<'a> YBasis<'a> {
    pub fn new(ga: &'a GroupAlgebra<'a>) -> Result<Self, FqError> {
        let fq = ga.fq;
        let (p, q) = (fq.p, fq.q as usize);
        let ys = ga.y_elements();
        let mut mons: Vec<GaElem> = Vec::with_capacity(q);
        mons.push(ga.one());
        for k in 1..q {
            // strip the lowest nonzero digit
            let mut j = 0;
            while (k as u32 / p.pow(j)) % p == 0 {
                j += 1;
            }
            let prev = k - p.pow(j) as usize;
            mons.push(ga.mul(&mons[prev], &ys[j as usize]));
        }
        // Gauss-Jordan on the matrix whose column k is mons[k]
        let mut a: Vec<Vec<Elem>> = (0..q).map(|r| (0..q).map(|c| mons[c][r]).collect()).collect();
        let mut inv: Vec<Vec<Elem>> = (0..q).map(|r| (0..q).map(|c| (r == c) as Elem).collect()).collect();
        for col in 0..q {
            let piv = (col..q)
                .find(|&r| a[r][col] != 0)
                .ok_or_else(|| FqError::Precondition("Y-monomials are not a basis".into()))?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let s = fq.inv(a[col][col]).unwrap();
            for c in 0..q {
                a[col][c] = fq.mul(a[col][c], s);
                inv[col][c] = fq.mul(inv[col][c], s);
            }
            for r in 0..q {
                if r != col && a[r][col] != 0 {
                    let m = a[r][col];
                    for c in 0..q {
                        a[r][c] = fq.sub(a[r][c], fq.mul(m, a[col][c]));
                        inv[r][c] = fq.sub(inv[r][c], fq.mul(m, inv[col][c]));
                    }
                }
            }
        }
        Ok(YBasis { ga, mons, inv })
    }

    pub fn monomial(&self, k: &[u32]) -> &GaElem {
        &self.mons[self.ga.fq.from_digits(k) as usize]
    }

    /// Coefficients in the `Y`-basis, indexed like [`multi_index`].
    pub fn expand(&self, x: &GaElem) -> Vec<Elem> {
        let fq = self.ga.fq;
        self.inv.iter().map(|row| row.iter().zip(x).fold(0, |acc, (&m, &v)| fq.add(acc, fq.mul(m, v)))).collect()
    }

    /// Human-readable expansion, e.g. `2*Y0^2 + Y1`.
    pub fn render(&self, x: &GaElem) -> String {
        let fq = self.ga.fq;
        let terms: Vec<String> = self
            .expand(x)
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| {
                let mon: Vec<String> = fq
                    .digits(k as u32)
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(j, &e)| if e == 1 { format!("Y{j}") } else { format!("Y{j}^{e}") })
                    .collect();
                match (c, mon.is_empty()) {
                    (_, true) => format!("{c}"),
                    (1, false) => mon.join("*"),
                    _ => format!("{c}*{}", mon.join("*")),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// Closed form of `θ_i`: `(-1)^{f-1} (∏ i_j!) Y^{p-1-i}` for `i < q-1`.
pub fn theta_closed_form(basis: &YBasis, i: u32) -> Result<GaElem, FqError> {
    let ga = basis.ga;
    let fq = ga.fq;
    if i >= fq.q - 1 {
        return Err(FqError::Range(i as u64, fq.q as u64 - 1));
    }
    let d = fq.digits(i);
    let c = d.iter().fold(fq.sign((fq.f - 1) % 2 == 1), |acc, &x| fq.mul(acc, fq.factorial(x)));
    let k: Vec<u32> = d.iter().map(|&x| fq.p - 1 - x).collect();
    Ok(ga.scale(c, basis.monomial(&k)))
}

/// Closed form `(-1)^{f-1}(Y^{p-1} + Σ_{|i| = (p-1)(f-1)} Y^i)` of the trace-zero sum.
pub fn trace_zero_closed_form(basis: &YBasis) -> GaElem {
    let ga = basis.ga;
    let fq = ga.fq;
    let target = (fq.p - 1) * (fq.f - 1);
    let mut s = basis.monomial(&vec![fq.p - 1; fq.f as usize]).clone();
    for k in 0..fq.q {
        if fq.digits(k).iter().sum::<u32>() == target {
            s = ga.add(&s, &basis.mons[k as usize]);
        }
    }
    ga.scale(fq.sign((fq.f - 1) % 2 == 1), &s)
}

/// A polynomial in `Y_0..Y_{f-1}` modulo monomials of total degree `≥ cutoff`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncPoly {
    pub f: usize,
    pub cutoff: u32,
    pub terms: BTreeMap<Vec<u32>, Elem>,
}

impl TruncPoly {
    pub fn constant(f: usize, cutoff: u32, c: Elem) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0 && cutoff > 0 {
            terms.insert(vec![0; f], c);
        }
        TruncPoly { f, cutoff, terms }
    }

    pub fn var(f: usize, cutoff: u32, j: usize) -> Self {
        let mut k = vec![0; f];
        k[j] = 1;
        let mut terms = BTreeMap::new();
        if cutoff > 1 {
            terms.insert(k, 1);
        }
        TruncPoly { f, cutoff, terms }
    }

    fn insert(&mut self, fq: &Fq, k: Vec<u32>, c: Elem) {
        if k.iter().sum::<u32>() >= self.cutoff {
            return;
        }
        let e = self.terms.entry(k).or_insert(0);
        *e = fq.add(*e, c);
        self.terms.retain(|_, c| *c != 0);
    }

    pub fn add(&self, fq: &Fq, o: &TruncPoly) -> TruncPoly {
        let mut out = self.clone();
        for (k, &c) in &o.terms {
            out.insert(fq, k.clone(), c);
        }
        out
    }

    pub fn scale(&self, fq: &Fq, c: Elem) -> TruncPoly {
        let mut out = TruncPoly { f: self.f, cutoff: self.cutoff, terms: BTreeMap::new() };
        for (k, &v) in &self.terms {
            out.insert(fq, k.clone(), fq.mul(c, v));
        }
        out
    }

    pub fn sub(&self, fq: &Fq, o: &TruncPoly) -> TruncPoly {
        self.add(fq, &o.scale(fq, fq.neg(1)))
    }

    pub fn mul(&self, fq: &Fq, o: &TruncPoly) -> TruncPoly {
        let mut out = TruncPoly { f: self.f, cutoff: self.cutoff.min(o.cutoff), terms: BTreeMap::new() };
        for (a, &ca) in &self.terms {
            for (b, &cb) in &o.terms {
                let k: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.insert(fq, k, fq.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, fq: &Fq, e: u32) -> TruncPoly {
        (0..e).fold(TruncPoly::constant(self.f, self.cutoff, 1), |acc, _| acc.mul(fq, self))
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(k, c)| {
                let mon: Vec<String> = k
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(j, &e)| if e == 1 { format!("Y{j}") } else { format!("Y{j}^{e}") })
                    .collect();
                if mon.is_empty() {
                    format!("{c}")
                } else if *c == 1 {
                    mon.join("*")
                } else {
                    format!("{c}*{}", mon.join("*"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `(-1)^{f-1} ∏_{j ≠ j0} (Y_j - Y_{j0})^{p-1}`, truncated at degree `f(p-1)`.
pub fn nsum_product(fq: &Fq, j0: usize) -> Result<TruncPoly, FqError> {
    let f = fq.f as usize;
    if j0 >= f {
        return Err(FqError::Range(j0 as u64, f as u64));
    }
    let cutoff = fq.f * (fq.p - 1);
    let mut acc = TruncPoly::constant(f, cutoff, fq.sign((f - 1) % 2 == 1));
    for j in (0..f).filter(|&j| j != j0) {
        let d = TruncPoly::var(f, cutoff, j).sub(fq, &TruncPoly::var(f, cutoff, j0));
        acc = acc.mul(fq, &d.pow(fq, fq.p - 1));
    }
    Ok(acc)
}

/// The finite quotient `G = O_K / (p N_1 + p^2 O_K)` of `N_0/N_1^p`, where
/// `N_1 = ker Tr`. Elements are pairs `(t, a)` with `t ∈ Z/p^2`,
/// `a ∈ F_q`, `t ≡ Tr(a) mod p`, indexed as `a·p + (t - Tr a)/p`.
pub struct NsumQuotient<'a> {
    fq: &'a Fq,
    size: usize,
    elems: Vec<(u64, Elem)>,
    add: Vec<u32>,
}

impl<'a> NsumQuotient<'a> {
    pub fn new(fq: &'a Fq) -> Result<Self, FqError> {
        let p = fq.p as u64;
        if (fq.f as u64) * (p - 1) > p * p {
            return Err(FqError::Precondition("f(p-1) > p^2: the quotient is too coarse".into()));
        }
        let size = fq.q as usize * fq.p as usize;
        let elems: Vec<(u64, Elem)> = (0..size)
            .map(|i| {
                let a = (i / fq.p as usize) as Elem;
                let u = (i % fq.p as usize) as u64;
                (fq.trace(a) as u64 + p * u, a)
            })
            .collect();
        let mut q = NsumQuotient { fq, size, elems, add: Vec::new() };
        let mut add = vec![0u32; size * size];
        for x in 0..size {
            for y in 0..size {
                let (t1, a1) = q.elems[x];
                let (t2, a2) = q.elems[y];
                add[x * size + y] = q.index((t1 + t2) % (p * p), fq.add(a1, a2)) as u32;
            }
        }
        q.add = add;
        Ok(q)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn index(&self, t: u64, a: Elem) -> usize {
        let p = self.fq.p as u64;
        let tr = self.fq.trace(a) as u64;
        debug_assert_eq!(t % p, tr);
        a as usize * p as usize + ((t + p * p - tr) % (p * p) / p) as usize
    }

    pub fn zero(&self) -> GaElem {
        vec![0; self.size]
    }

    pub fn mul(&self, x: &GaElem, y: &GaElem) -> GaElem {
        let fq = self.fq;
        let mut out = self.zero();
        for (a, &ca) in x.iter().enumerate().filter(|(_, c)| **c != 0) {
            for (b, &cb) in y.iter().enumerate().filter(|(_, c)| **c != 0) {
                let s = self.add[a * self.size + b] as usize;
                out[s] = fq.add(out[s], fq.mul(ca, cb));
            }
        }
        out
    }

    /// `Y_i = Σ_{a ≠ 0} a^{-p^i} [ã]` with `ã` the Teichmüller lift.
    pub fn y(&self, i: u32) -> Result<GaElem, FqError> {
        let w = WittRing::new(self.fq, 2)?;
        let e = -(self.fq.p as i64).pow(i);
        let mut v = self.zero();
        for a in 1..self.fq.q {
            let t = w.trace(&w.teichmuller(a));
            let k = self.index(t, a);
            v[k] = self.fq.add(v[k], self.fq.pow(a, e));
        }
        Ok(v)
    }

    /// `Σ_{n ∈ N_1/N_1^p} [n]`: the classes `(0, a)` with `Tr a = 0`.
    pub fn n1_sum(&self) -> GaElem {
        let mut v = self.zero();
        for a in 0..self.fq.q {
            if self.fq.trace(a) == 0 {
                v[self.index(0, a)] = 1;
            }
        }
        v
    }

    /// Lowest total degree of `x` in the augmentation filtration, read off
    /// the monomial basis `A^α B^β` with `A_k = [g_k]-1`, `B = [h]-1`.
    /// Returns `None` for `x = 0`.
    pub fn valuation(&self, x: &GaElem) -> Option<u32> {
        let fq = self.fq;
        let p = fq.p as u64;
        let f = fq.f as usize;
        // pivot digit c with Tr(e_c) ≠ 0; h = (1, e_c / Tr e_c)
        let basis: Vec<Elem> = (0..f).map(|k| fq.p.pow(k as u32)).collect();
        let c = (0..f).find(|&k| fq.trace(basis[k]) != 0)?;
        let ah = fq.mul(basis[c], fq.inv(fq.trace(basis[c])).unwrap());
        let mut coeffs: BTreeMap<(Vec<u32>, u64), Elem> = BTreeMap::new();
        for (i, &cx) in x.iter().enumerate().filter(|(_, c)| **c != 0) {
            let (t, a) = self.elems[i];
            let v = fq.sub(a, fq.mul(fq.from_int(t as i64), ah));
            let d = fq.digits(v);
            // kernel coordinates are the digits away from the pivot
            let n: Vec<u32> = (0..f).filter(|&k| k != c).map(|k| d[k]).collect();
            let mut alpha = vec![0u32; n.len()];
            loop {
                let bin =
                    alpha.iter().zip(&n).fold(1u64, |acc, (&al, &nk)| acc * binom_mod_p(nk as u64, al as u64, p) % p);
                if bin != 0 {
                    for beta in 0..=t {
                        let b = binom_mod_p(t, beta, p);
                        if b != 0 {
                            let e = coeffs.entry((alpha.clone(), beta)).or_insert(0);
                            *e = fq.add(*e, fq.mul(cx, fq.from_int((bin * b) as i64)));
                        }
                    }
                }
                let mut k = 0;
                while k < alpha.len() {
                    alpha[k] += 1;
                    if alpha[k] <= n[k] {
                        break;
                    }
                    alpha[k] = 0;
                    k += 1;
                }
                if k == alpha.len() {
                    break;
                }
            }
        }
        coeffs.iter().filter(|(_, &c)| c != 0).map(|((al, be), _)| al.iter().sum::<u32>() + *be as u32).min()
    }
}

/// Checks `Σ_{N_1/N_1^p} n ≡ (-1)^{f-1} ∏_{j≠j0} (Y_j - Y_{j0})^{p-1}` modulo
/// degree `f(p-1)` inside the finite quotient.
pub fn nsum_check(fq: &Fq, j0: usize) -> Result<bool, FqError> {
    let g = NsumQuotient::new(fq)?;
    let f = fq.f as usize;
    if j0 >= f {
        return Err(FqError::Range(j0 as u64, f as u64));
    }
    let ys: Vec<GaElem> = (0..fq.f).map(|i| g.y(i)).collect::<Result<_, _>>()?;
    let mut prod = g.zero();
    prod[g.index(0, 0)] = fq.sign((f - 1) % 2 == 1);
    for j in (0..f).filter(|&j| j != j0) {
        let d: GaElem = ys[j].iter().zip(&ys[j0]).map(|(&a, &b)| fq.sub(a, b)).collect();
        for _ in 0..fq.p - 1 {
            prod = g.mul(&prod, &d);
        }
    }
    let diff: GaElem = g.n1_sum().iter().zip(&prod).map(|(&a, &b)| fq.sub(a, b)).collect();
    Ok(g.valuation(&diff).is_none_or(|v| v >= fq.f * (fq.p - 1)))
}

/// A power series in one variable over `F_q`, known modulo degree `len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    pub coeffs: Vec<Elem>,
}

impl Series {
    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn mul(&self, fq: &Fq, o: &Series) -> Series {
        let n = self.precision().min(o.precision());
        let mut c = vec![0; n];
        for (i, &a) in self.coeffs.iter().enumerate().take(n).filter(|(_, a)| **a != 0) {
            for (j, &b) in o.coeffs.iter().enumerate().take(n - i) {
                c[i + j] = fq.add(c[i + j], fq.mul(a, b));
            }
        }
        Series { coeffs: c }
    }

    /// `self ∘ g` for `g(0) = 0`.
    pub fn compose(&self, fq: &Fq, g: &Series) -> Series {
        assert_eq!(g.coeffs.first().copied().unwrap_or(0), 0);
        let n = self.precision().min(g.precision());
        let mut out = Series { coeffs: vec![0; n] };
        let mut gp = Series { coeffs: (0..n).map(|i| (i == 0) as Elem).collect() };
        for k in 0..n {
            let c = self.coeffs[k];
            if c != 0 {
                for i in 0..n {
                    out.coeffs[i] = fq.add(out.coeffs[i], fq.mul(c, gp.coeffs[i]));
                }
            }
            gp = gp.mul(fq, g);
        }
        out
    }

    /// Compositional inverse, for `s(0) = 0` and a unit linear term.
    pub fn reverse(&self, fq: &Fq) -> Result<Series, FqError> {
        let n = self.precision();
        let a1 = self.coeffs.get(1).copied().unwrap_or(0);
        let inv = fq.inv(a1).ok_or_else(|| FqError::Precondition("linear term vanishes".into()))?;
        let mut h = Series { coeffs: vec![0; n] };
        if n > 1 {
            h.coeffs[1] = inv;
        }
        for k in 2..n {
            let c = self.compose(fq, &h).coeffs[k];
            h.coeffs[k] = fq.neg(fq.mul(c, inv));
        }
        Ok(h)
    }

    pub fn render(&self, var: &str) -> String {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| match k {
                0 => format!("{c}"),
                1 => format!("{c}*{var}"),
                _ => format!("{c}*{var}^{k}"),
            })
            .collect();
        format!("{} + O({var}^{})", if terms.is_empty() { "0".into() } else { terms.join(" + ") }, self.precision())
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("T"))
    }
}

/// `Σ_a c_a (1+X)^{n_a}` for integers `n_a`, in `F[[X]]` mod `X^prec`.
fn binomial_series(fq: &Fq, terms: &[(Elem, u64)], prec: usize) -> Series {
    let p = fq.p as u64;
    let mut c = vec![0; prec];
    for &(ca, n) in terms {
        for (k, ck) in c.iter_mut().enumerate() {
            let b = binom_mod_p(n, k as u64, p);
            if b != 0 {
                *ck = fq.add(*ck, fq.mul(ca, fq.from_int(b as i64)));
            }
        }
    }
    Series { coeffs: c }
}

/// Smallest `m` with `p^m > n`.
fn digits_needed(p: u64, n: usize) -> u32 {
    let mut m = 1;
    while p.pow(m) <= n as u64 {
        m += 1;
    }
    m
}

/// The series relating `X = [1] - 1` and `Y = Σ_{a ∈ F_p^×} a^{-1}[ã]` in
/// `F[[Z_p]]`, and the image `h(Y_i)` of each `Y_i` under `F[[N_0]] → F[[N_0/N_1]]`.
pub struct XySeries {
    pub y_in_x: Series,
    pub x_in_y: Series,
    /// `h(Y_i)` written in the variable `Y`.
    pub h_y: Vec<Series>,
}

pub fn xy_series(fq: &Fq, prec: usize) -> Result<XySeries, FqError> {
    if prec < 2 {
        return Err(FqError::Precondition("precision must be at least 2".into()));
    }
    let p = fq.p as u64;
    let m = digits_needed(p, prec);
    // Teichmüller in Z/p^m
    let pm = p.pow(m);
    let teich = |a: u64| -> u64 { pow_mod(a, p.pow(m - 1), pm) };
    let terms: Vec<(Elem, u64)> = (1..p).map(|a| (fq.inv(fq.from_int(a as i64)).unwrap(), teich(a))).collect();
    let y_in_x = binomial_series(fq, &terms, prec);
    let x_in_y = y_in_x.reverse(fq)?;
    let w = WittRing::new(fq, m)?;
    let mut h_y = Vec::new();
    for i in 0..fq.f {
        let e = -(p as i64).pow(i);
        let terms: Vec<(Elem, u64)> = (1..fq.q).map(|a| (fq.pow(a, e), w.trace(&w.teichmuller(a)))).collect();
        let hx = binomial_series(fq, &terms, prec);
        h_y.push(hx.compose(fq, &x_in_y));
    }
    Ok(XySeries { y_in_x, x_in_y, h_y })
}

/// One named identity check.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult { name: name.into(), pass, detail: detail.into() }
}

/// Every group-algebra identity for `(p, f)`, each compared against a direct
/// convolution computation. `series_prec` is the `X`/`Y` precision.
pub fn check_suite(p: u32, f: u32, series_prec: usize) -> Result<Vec<CheckResult>, FqError> {
    let fq = Fq::new(p, f)?;
    let ga = GroupAlgebra::new(&fq);
    let basis = YBasis::new(&ga)?;
    let ys = ga.y_elements();
    let mut out = Vec::new();

    let nil = ys.iter().all(|y| ga.pow(y, p) == ga.zero());
    out.push(check("Y_i^p = 0", nil, ""));

    let mut eq_ok = true;
    for c in 1..fq.q() {
        for (i, y) in ys.iter().enumerate() {
            let lhs = ga.torus_act(c, y);
            let rhs = ga.scale(fq.pow(c, (p as i64).pow(i as u32)), y);
            eq_ok &= lhs == rhs;
        }
    }
    out.push(check("torus acts on Y_i by (λ/μ)^{p^i}", eq_ok, ""));

    let mut bad = Vec::new();
    for i in 0..fq.q() - 1 {
        if ga.theta(i)? != theta_closed_form(&basis, i)? {
            bad.push(i);
        }
    }
    out.push(check("theta_i closed form, all i < q-1", bad.is_empty(), format!("failures {bad:?}")));

    let ok = (0..f).all(|i| ga.theta(fq.q() - 1 - p.pow(i)).map(|t| t == ys[i as usize]).unwrap_or(false));
    out.push(check("theta_{q-1-p^i} = Y_i", ok, ""));

    let theta0 = ga.theta(0)?;
    let all_p1 = ga.scale(fq.sign((f - 1) % 2 == 1), basis.monomial(&vec![p - 1; f as usize]));
    out.push(check("sum of all [λ] = ±Y^{p-1}", theta0 == all_p1, ""));

    if f > 1 {
        let ok = ga.trace_zero_sum()? == trace_zero_closed_form(&basis);
        out.push(check("trace-zero sum", ok, basis.render(&ga.trace_zero_sum()?)));
    }

    for j0 in 0..f as usize {
        let ok = nsum_check(&fq, j0)?;
        out.push(check(format!("N_1 sum, j0 = {j0}, mod degree {}", f * (p - 1)), ok, nsum_product(&fq, j0)?.render()));
    }

    let s = xy_series(&fq, series_prec)?;
    let minus_one = fq.neg(1);
    out.push(check("Y = -X mod X^2", s.y_in_x.coeffs[0] == 0 && s.y_in_x.coeffs[1] == minus_one, s.y_in_x.render("X")));
    out.push(check("X = -Y mod Y^2", s.x_in_y.coeffs[0] == 0 && s.x_in_y.coeffs[1] == minus_one, s.x_in_y.render("Y")));
    let id = s.y_in_x.compose(&fq, &s.x_in_y);
    let ident = id.coeffs.iter().enumerate().all(|(k, &c)| c == (k == 1) as Elem);
    out.push(check(format!("X(Y(X)) = X mod X^{series_prec}"), ident, ""));
    let h_ok = s.h_y.iter().all(|h| h.coeffs.iter().take(p as usize).enumerate().all(|(k, &c)| c == (k == 1) as Elem));
    out.push(check("h(Y_i) = Y mod Y^p", h_ok, ""));
    Ok(out)
}
