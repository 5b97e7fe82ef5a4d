//! Finite fields `F_{p^d}` and truncated unramified Witt rings `W_N(F_{p^d})`.
//!
//! Both are realized as `(Z/p^N)[x]/(f)` where `f` is monic of degree `d`.
//! For `N = 1` this is the finite field with modulus `f`. For `N > 1`, `f` is
//! the lift of the residue modulus whose roots are Teichmüller
//! representatives, so the Frobenius lift is `x -> x^p` and acts trivially on
//! the coefficients.

use std::fmt;
use std::sync::Arc;



use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: usize = 12;

/// Largest supported value of `p^N`.
const MAX_MODULUS: u64 = 1 << 60;

/// Ring element: polynomial coefficients, least significant first, each in
/// `[0, p^N)`. Coefficients at index `>= d` are always zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub(crate) [u64; MAX_DEGREE]);

impl Elem {
    pub const ZERO: Elem = Elem([0; MAX_DEGREE]);

    pub fn coeffs(&self, d: usize) -> &[u64] {
        &self.0[..d]
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.0.iter().rposition(|&c| c != 0).unwrap_or(0);
        f.debug_list().entries(&self.0[..=last]).finish()
    }
}

struct RingData {
    p: u64,
    d: usize,
    prec: u32,
    pn: u64,
    /// Non-leading coefficients of the monic modulus.
    modulus: Vec<u64>,
    /// `x^(d+k) mod f` for `k in 0..d-1`.
    reduce_tab: Vec<[u64; MAX_DEGREE]>,
    /// `frob[k][j] = sigma^k(x^j)` for `k in 0..d`.
    frob: Vec<Vec<Elem>>,
}

/// Context for `(Z/p^N)[x]/(f)`. Cheap to clone.
#[derive(Clone)]
pub struct Ring(Arc<RingData>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.d == other.0.d
                && self.0.prec == other.0.prec
                && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_field() {
            write!(f, "F_{}^{}", self.0.p, self.0.d)
        } else {
            write!(f, "W_{}(F_{}^{})", self.0.prec, self.0.p, self.0.d)
        }
    }
}

fn is_odd_prime(p: u64) -> bool {
    p > 2 && p % 2 == 1 && (3..).step_by(2).take_while(|k| k * k <= p).all(|k| p % k != 0)
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m as i128) as u64)
}

fn padic_val(mut c: u64, p: u64, cap: u32) -> u32 {
    if c == 0 {
        return cap;
    }
    let mut v = 0;
    while c % p == 0 {
        c /= p;
        v += 1;
    }
    v
}

// ---------------------------------------------------------------------------
// Polynomials over F_p, used only to pick the residue modulus.

fn poly_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p).expect("nonzero leading coefficient");
    while r.len() > db {
        let c = mulmod(*r.last().unwrap(), lead_inv, p);
        let shift = r.len() - 1 - db;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mulmod(c, bi, p)) % p;
        }
        r.pop();
        r = poly_trim(r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    poly_rem(&poly_trim(out), f, p)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (poly_trim(a.to_vec()), poly_trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^(p^k) mod f` over F_p.
fn x_pow_p_pow(k: usize, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = poly_rem(&[0, 1], f, p);
    for _ in 0..k {
        let base = acc.clone();
        let mut result = vec![1];
        let mut e = p;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                result = poly_mulmod(&result, &b, f, p);
            }
            b = poly_mulmod(&b, &b, f, p);
            e >>= 1;
        }
        acc = result;
    }
    acc
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    let sub_x = |mut g: Vec<u64>| {
        g.resize(g.len().max(2), 0);
        g[1] = (g[1] + p - 1) % p;
        poly_trim(g)
    };
    if !sub_x(x_pow_p_pow(d, f, p)).is_empty() {
        return false;
    }
    let mut primes = Vec::new();
    let mut m = d;
    let mut q = 2;
    while m > 1 {
        if m % q == 0 {
            primes.push(q);
            while m % q == 0 {
                m /= q;
            }
        }
        q += 1;
    }
    primes.into_iter().all(|r| {
        let g = sub_x(x_pow_p_pow(d / r, f, p));
        poly_gcd(f, &g, p).len() == 1
    })
}

/// Lexicographically smallest monic irreducible polynomial of degree `d`
/// with nonzero constant term, as its non-leading coefficients.
fn residue_modulus(p: u64, d: usize) -> Vec<u64> {
    if d == 1 {
        return vec![p - 1];
    }
    let total = p.pow(d as u32);
    for idx in 0..total {
        let mut coeffs = Vec::with_capacity(d + 1);
        let mut t = idx;
        for _ in 0..d {
            coeffs.push(t % p);
            t /= p;
        }
        if coeffs[0] == 0 {
            continue;
        }
        coeffs.push(1);
        if is_irreducible(&coeffs, p) {
            coeffs.pop();
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl RingData {
    fn build(p: u64, d: usize, prec: u32, modulus: Vec<u64>, with_frob: bool) -> RingData {
        let pn = p.pow(prec);
        let mut data = RingData { p, d, prec, pn, modulus, reduce_tab: Vec::new(), frob: Vec::new() };
        // x^d = -sum f_i x^i
        let mut cur = [0u64; MAX_DEGREE];
        for i in 0..d {
            cur[i] = (pn - data.modulus[i] % pn) % pn;
        }
        for _ in 0..d.saturating_sub(1).max(1) {
            data.reduce_tab.push(cur);
            // multiply by x
            let top = cur[d - 1];
            let mut next = [0u64; MAX_DEGREE];
            for i in (1..d).rev() {
                next[i] = cur[i - 1];
            }
            for i in 0..d {
                next[i] = (next[i] + mulmod(top, data.reduce_tab[0][i], pn)) % pn;
            }
            cur = next;
        }
        if with_frob {
            let ring = Ring(Arc::new(RingData {
                p,
                d,
                prec,
                pn,
                modulus: data.modulus.clone(),
                reduce_tab: data.reduce_tab.clone(),
                frob: Vec::new(),
            }));
            let x = ring.gen();
            let xp = ring.pow(x, p);
            let mut images: Vec<Elem> = (0..d).map(|j| ring.pow(xp, j as u64)).collect();
            let identity: Vec<Elem> = (0..d).map(|j| ring.pow(x, j as u64)).collect();
            data.frob.push(identity);
            for _ in 1..d {
                data.frob.push(images.clone());
                images = images.iter().map(|&e| ring.apply_table(e, &data.frob[1])).collect();
            }
        }
        data
    }
}

impl Ring {
    /// The finite field `F_{p^d}`.
    pub fn field(p: u64, d: usize) -> Result<Ring> {
        Ring::witt(p, d, 1)
    }

    /// The truncated Witt ring `W_N(F_{p^d})` with `N = prec`.
    pub fn witt(p: u64, d: usize, prec: u32) -> Result<Ring> {
        if !is_odd_prime(p) {
            return Err(Error::InvalidParams(format!("p = {p} must be an odd prime")));
        }
        if d == 0 || d > MAX_DEGREE {
            return Err(Error::InvalidParams(format!("extension degree {d} outside 1..={MAX_DEGREE}")));
        }
        if prec == 0 {
            return Err(Error::InvalidParams("precision must be at least 1".into()));
        }
        if (prec as f64) * (p as f64).log2() >= 60.0 || p.checked_pow(prec).is_none_or(|v| v >= MAX_MODULUS) {
            return Err(Error::InsufficientPrecision(format!("p^{prec} exceeds the 60-bit coefficient budget")));
        }
        let residue = residue_modulus(p, d);
        if prec == 1 {
            return Ok(Ring(Arc::new(RingData::build(p, d, 1, residue, true))));
        }
        // Teichmüller lift of the residue generator, then its minimal polynomial.
        let naive = Ring(Arc::new(RingData::build(p, d, prec, residue, false)));
        let q = p.pow(d as u32);
        let mut tau = naive.gen();
        for _ in 1..prec {
            tau = naive.pow(tau, q);
        }
        let powers: Vec<Elem> = (0..=d).map(|i| naive.pow(tau, i as u64)).collect();
        let pn = naive.pn();
        // Solve sum_i c_i tau^i = tau^d for c over Z/p^N.
        let mut sys: Vec<Vec<u64>> = (0..d)
            .map(|row| {
                let mut r: Vec<u64> = (0..d).map(|col| powers[col].0[row]).collect();
                r.push(powers[d].0[row]);
                r
            })
            .collect();
        for col in 0..d {
            let piv = (col..d).find(|&r| sys[r][col] % p != 0).expect("powers of a generator form a basis");
            sys.swap(col, piv);
            let inv = inv_mod(sys[col][col], pn).expect("unit pivot");
            for v in sys[col].iter_mut() {
                *v = mulmod(*v, inv, pn);
            }
            for r in 0..d {
                if r != col && sys[r][col] != 0 {
                    let factor = sys[r][col];
                    for c in 0..=d {
                        let sub = mulmod(factor, sys[col][c], pn);
                        sys[r][c] = (sys[r][c] + pn - sub) % pn;
                    }
                }
            }
        }
        let modulus: Vec<u64> = (0..d).map(|i| (pn - sys[i][d]) % pn).collect();
        Ok(Ring(Arc::new(RingData::build(p, d, prec, modulus, true))))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.d
    }

    pub fn precision(&self) -> u32 {
        self.0.prec
    }

    /// `p^N`, the characteristic of the coefficient ring.
    pub fn pn(&self) -> u64 {
        self.0.pn
    }

    pub fn is_field(&self) -> bool {
        self.0.prec == 1
    }

    /// Number of elements of the residue field.
    pub fn residue_size(&self) -> u64 {
        self.0.p.pow(self.0.d as u32)
    }

    /// Non-leading coefficients of the monic modulus.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    /// Residue field of this ring (itself when already a field).
    pub fn residue_field(&self) -> Ring {
        if self.is_field() {
            self.clone()
        } else {
            Ring::field(self.0.p, self.0.d).expect("residue parameters already validated")
        }
    }

    /// Same residue field, different precision.
    pub fn with_precision(&self, prec: u32) -> Result<Ring> {
        if prec == self.0.prec {
            return Ok(self.clone());
        }
        Ring::witt(self.0.p, self.0.d, prec)
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        self.from_int(1)
    }

    /// The polynomial generator `x`.
    pub fn gen(&self) -> Elem {
        if self.0.d == 1 {
            // x = -f_0
            let mut e = Elem::ZERO;
            e.0[0] = (self.0.pn - self.0.modulus[0]) % self.0.pn;
            return e;
        }
        let mut e = Elem::ZERO;
        e.0[1] = 1;
        e
    }

    pub fn from_int(&self, v: i64) -> Elem {
        let mut e = Elem::ZERO;
        e.0[0] = (v as i128).rem_euclid(self.0.pn as i128) as u64;
        e
    }

    /// Element from coefficients (least significant first); reduced mod `p^N`.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Elem> {
        if coeffs.len() > self.0.d {
            return Err(Error::Schema(format!(
                "element has {} coefficients, ring degree is {}",
                coeffs.len(),
                self.0.d
            )));
        }
        let mut e = Elem::ZERO;
        for (i, &c) in coeffs.iter().enumerate() {
            if c >= self.0.pn {
                return Err(Error::Schema(format!("coefficient {c} not below p^N = {}", self.0.pn)));
            }
            e.0[i] = c;
        }
        Ok(e)
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u64> {
        a.0[..self.0.d].to_vec()
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let pn = self.0.pn;
        let mut out = Elem::ZERO;
        for i in 0..self.0.d {
            let s = a.0[i] + b.0[i];
            out.0[i] = if s >= pn { s - pn } else { s };
        }
        out
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let pn = self.0.pn;
        let mut out = Elem::ZERO;
        for i in 0..self.0.d {
            out.0[i] = if a.0[i] == 0 { 0 } else { pn - a.0[i] };
        }
        out
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let d = self.0.d;
        let pn = self.0.pn as u128;
        if d == 1 {
            let mut out = Elem::ZERO;
            out.0[0] = ((a.0[0] as u128 * b.0[0] as u128) % pn) as u64;
            return out;
        }
        let mut conv = [0u128; 2 * MAX_DEGREE - 1];
        for i in 0..d {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..d {
                conv[i + j] += a.0[i] as u128 * b.0[j] as u128;
            }
        }
        let mut out = Elem::ZERO;
        for i in 0..d {
            let mut acc = conv[i] % pn;
            for k in d..(2 * d - 1) {
                let c = conv[k] % pn;
                if c != 0 {
                    acc += c * self.0.reduce_tab[k - d][i] as u128;
                }
            }
            out.0[i] = (acc % pn) as u64;
        }
        out
    }

    /// Multiply by an integer.
    pub fn scale(&self, a: Elem, k: i64) -> Elem {
        let k = (k as i128).rem_euclid(self.0.pn as i128) as u64;
        let mut out = Elem::ZERO;
        for i in 0..self.0.d {
            out.0[i] = mulmod(a.0[i], k, self.0.pn);
        }
        out
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut result = self.one();
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    pub fn is_zero(&self, a: Elem) -> bool {
        a == Elem::ZERO
    }

    /// p-adic valuation; `prec` for zero.
    pub fn valuation(&self, a: Elem) -> u32 {
        (0..self.0.d).map(|i| padic_val(a.0[i], self.0.p, self.0.prec)).min().unwrap_or(self.0.prec)
    }

    pub fn is_unit(&self, a: Elem) -> bool {
        self.valuation(a) == 0
    }

    /// Reduction modulo p into the residue field.
    pub fn reduce(&self, a: Elem) -> Elem {
        let mut out = Elem::ZERO;
        for i in 0..self.0.d {
            out.0[i] = a.0[i] % self.0.p;
        }
        out
    }

    /// Coefficientwise reduction modulo `p^k` (canonical representative).
    pub fn reduce_mod_p_pow(&self, a: Elem, k: u32) -> Elem {
        if k >= self.0.prec {
            return a;
        }
        let m = self.0.p.pow(k);
        let mut out = Elem::ZERO;
        for i in 0..self.0.d {
            out.0[i] = a.0[i] % m;
        }
        out
    }

    /// Lift a residue-field element (or an element of a lower-precision ring
    /// with the same modulus reduction) coefficientwise.
    pub fn lift(&self, a: Elem) -> Elem {
        let mut out = a;
        for i in 0..self.0.d {
            out.0[i] %= self.0.pn;
        }
        out
    }

    /// Multiply by `p^k`.
    pub fn mul_p_pow(&self, a: Elem, k: u32) -> Elem {
        if k >= self.0.prec {
            return Elem::ZERO;
        }
        self.scale(a, self.0.p.pow(k) as i64)
    }

    /// Divide by `p^k`; requires `valuation(a) >= k`. The result is exact
    /// modulo `p^(N-k)`.
    pub fn div_p_pow(&self, a: Elem, k: u32) -> Elem {
        debug_assert!(self.valuation(a) >= k);
        let m = self.0.p.pow(k);
        let mut out = Elem::ZERO;
        for i in 0..self.0.d {
            out.0[i] = a.0[i] / m;
        }
        out
    }

    /// Inverse of a unit.
    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if !self.is_unit(a) {
            return Err(Error::NotInvertible(format!("{a:?} is not a unit")));
        }
        let field = self.residue_field();
        let q = self.residue_size();
        let y0 = field.pow(field.reduce(a), q - 2);
        let mut y = self.lift(y0);
        let two = self.from_int(2);
        let mut correct = 1;
        while correct < self.0.prec {
            y = self.mul(y, self.sub(two, self.mul(a, y)));
            correct *= 2;
        }
        Ok(y)
    }

    fn apply_table(&self, a: Elem, table: &[Elem]) -> Elem {
        let mut out = Elem::ZERO;
        for (j, img) in table.iter().enumerate() {
            if a.0[j] != 0 {
                out = self.add(out, self.scale_u(*img, a.0[j]));
            }
        }
        out
    }

    fn scale_u(&self, a: Elem, k: u64) -> Elem {
        let mut out = Elem::ZERO;
        for i in 0..self.0.d {
            out.0[i] = mulmod(a.0[i], k, self.0.pn);
        }
        out
    }

    /// `sigma^k(a)`; `sigma^d` is the identity.
    pub fn frobenius(&self, a: Elem, k: i64) -> Elem {
        let k = k.rem_euclid(self.0.d as i64) as usize;
        if k == 0 {
            return a;
        }
        self.apply_table(a, &self.0.frob[k])
    }

    /// Uniformly random element.
    pub fn random<R: rand::Rng>(&self, rng: &mut R) -> Elem {
        let mut e = Elem::ZERO;
        for i in 0..self.0.d {
            e.0[i] = rng.gen_range(0..self.0.pn);
        }
        e
    }

    /// Uniformly random unit.
    pub fn random_unit<R: rand::Rng>(&self, rng: &mut R) -> Elem {
        loop {
            let e = self.random(rng);
            if self.is_unit(e) {
                return e;
            }
        }
    }

    /// Total number of elements, if it fits in a u64.
    pub fn size(&self) -> Option<u64> {
        self.0.pn.checked_pow(self.0.d as u32)
    }

    /// Element with the given index in the canonical enumeration
    /// (base-`p^N` digits are the coefficients).
    pub fn element(&self, mut index: u64) -> Elem {
        let mut e = Elem::ZERO;
        for i in 0..self.0.d {
            e.0[i] = index % self.0.pn;
            index /= self.0.pn;
        }
        e
    }

    /// Position of `a` in the canonical enumeration.
    pub fn index_of(&self, a: Elem) -> u64 {
        let mut idx = 0u64;
        for i in (0..self.0.d).rev() {
            idx = idx * self.0.pn + a.0[i];
        }
        idx
    }

    /// Embedding of this field into a larger field of the same
    /// characteristic, determined by a root of this modulus in the target.
    pub fn embedding_into(&self, target: &Ring) -> Result<Embedding> {
        if !self.is_field() || !target.is_field() || self.p() != target.p() {
            return Err(Error::InvalidParams("embeddings are only defined between fields of equal characteristic".into()));
        }
        if target.degree() % self.degree() != 0 {
            return Err(Error::InvalidParams(format!(
                "F_p^{} does not embed in F_p^{}",
                self.degree(),
                target.degree()
            )));
        }
        let image = if self.degree() == 1 {
            target.from_int(self.gen().0[0] as i64)
        } else {
            let size = target.residue_size();
            let mut found = None;
            for idx in 1..size {
                let r = target.element(idx);
                // f(r) = r^d + sum f_i r^i
                let mut acc = target.pow(r, self.degree() as u64);
                let mut rp = target.one();
                for &c in self.modulus() {
                    acc = target.add(acc, target.scale(rp, c as i64));
                    rp = target.mul(rp, r);
                }
                if target.is_zero(acc) {
                    found = Some(r);
                    break;
                }
            }
            found.expect("an irreducible polynomial splits in any extension of its degree")
        };
        let powers = (0..self.degree()).map(|j| target.pow(image, j as u64)).collect();
        Ok(Embedding { source: self.clone(), target: target.clone(), powers })
    }

    /// Integer value of an element lying in the prime ring `Z/p^N`.
    pub fn as_integer(&self, a: Elem) -> Option<u64> {
        a.0[1..].iter().all(|&c| c == 0).then_some(a.0[0])
    }
}

/// Field embedding `F_{p^d} -> F_{p^{d'}}`.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Ring,
    target: Ring,
    powers: Vec<Elem>,
}

impl Embedding {
    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn apply(&self, a: Elem) -> Elem {
        let t = &self.target;
        let mut out = t.zero();
        for (j, img) in self.powers.iter().enumerate() {
            if a.0[j] != 0 {
                out = t.add(out, t.scale(*img, a.0[j] as i64));
            }
        }
        out
    }
}
