//! Truncated unramified Witt rings `W_m(F_{p^r})`.
//!
//! The ring is realised as `(Z/p^m)[x]/(F)` where `F` is the coefficient-wise
//! lift (digits in `0..p`) of the Conway polynomial of `F_{p^r}`. Frobenius is
//! the unique ring automorphism lifting `x -> x^p`; it is computed once by
//! Hensel lifting and cached as a matrix for every power `0..r`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Conway polynomials, coefficients from the constant term upwards (monic
/// leading coefficient included).
const CONWAY: &[(u64, &[u64])] = &[
    (2, &[1, 1]),
    (2, &[1, 1, 1]),
    (2, &[1, 1, 0, 1]),
    (2, &[1, 1, 0, 0, 1]),
    (2, &[1, 0, 1, 0, 0, 1]),
    (2, &[1, 1, 0, 1, 1, 0, 1]),
    (2, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, &[1, 1]),
    (3, &[2, 2, 1]),
    (3, &[1, 2, 0, 1]),
    (3, &[2, 0, 0, 2, 1]),
    (3, &[1, 2, 0, 0, 0, 1]),
    (3, &[2, 2, 1, 0, 2, 0, 1]),
    (5, &[3, 1]),
    (5, &[2, 4, 1]),
    (5, &[3, 3, 0, 1]),
    (5, &[2, 4, 4, 0, 1]),
    (7, &[4, 1]),
    (7, &[3, 6, 1]),
    (7, &[4, 0, 6, 1]),
    (7, &[3, 4, 5, 0, 1]),
];

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `v_p(n)` for a nonzero integer.
pub fn p_valuation(p: u64, n: i64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let mut n = n.unsigned_abs();
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    Some(v)
}

pub(crate) struct RingData {
    pub(crate) p: u64,
    pub(crate) r: usize,
    pub(crate) m: u32,
    pub(crate) modulus: u64,
    /// Monic defining polynomial, length `r + 1`.
    pub(crate) poly: Vec<u64>,
    /// `frob[t]` is the `r x r` matrix (row-major) of `sigma^t` on the power basis.
    pub(crate) frob: Vec<Vec<u64>>,
}

/// Handle on a ring `W_m(F_{p^r})`. Cloning is cheap.
#[derive(Clone)]
pub struct WittRingParams {
    pub(crate) data: Arc<RingData>,
}

impl PartialEq for WittRingParams {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
            || (self.data.p == other.data.p
                && self.data.r == other.data.r
                && self.data.m == other.data.m)
    }
}
impl Eq for WittRingParams {}

impl fmt::Debug for WittRingParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W_{}(F_{}^{})", self.data.m, self.data.p, self.data.r)
    }
}

/// Builds `W_m(F_{p^r})`.
pub fn witt_ring(p: u64, r: usize, m: u32) -> Result<WittRingParams> {
    if !is_prime(p) {
        return Err(Error::NonPrime(p));
    }
    if r == 0 || m == 0 {
        return Err(Error::InvalidDegree(format!("r = {r}, m = {m}")));
    }
    let modulus = (p as u128)
        .checked_pow(m)
        .filter(|&q| q < (1u128 << 62))
        .ok_or_else(|| Error::InvalidDegree(format!("{p}^{m} does not fit in 62 bits")))?
        as u64;
    let residue = residue_polynomial(p, r)?;
    let mut data = RingData {
        p,
        r,
        m,
        modulus,
        poly: residue,
        frob: Vec::new(),
    };
    data.frob = frobenius_matrices(&data);
    Ok(WittRingParams {
        data: Arc::new(data),
    })
}

/// Conway polynomial when tabulated, otherwise the lexicographically smallest
/// monic irreducible polynomial of degree `r` over `F_p`.
fn residue_polynomial(p: u64, r: usize) -> Result<Vec<u64>> {
    if let Some((_, c)) = CONWAY.iter().find(|(q, c)| *q == p && c.len() == r + 1) {
        return Ok(c.to_vec());
    }
    if r == 1 {
        return Ok(vec![0, 1]);
    }
    let total = (p as u128)
        .checked_pow(r as u32)
        .filter(|&t| t <= 1 << 24)
        .ok_or_else(|| Error::InvalidDegree(format!("no residue polynomial for F_{p}^{r}")))?;
    for code in 0..total as u64 {
        let mut poly = Vec::with_capacity(r + 1);
        let mut c = code;
        for _ in 0..r {
            poly.push(c % p);
            c /= p;
        }
        poly.push(1);
        if poly[0] != 0 && fp_poly::is_irreducible(p, &poly) {
            return Ok(poly);
        }
    }
    Err(Error::InvalidDegree(format!("no irreducible polynomial of degree {r} over F_{p}")))
}

/// Dense polynomial arithmetic over `F_p`, used for irreducibility checks.
pub(crate) mod fp_poly {
    fn trim(a: &mut Vec<u64>) {
        while a.len() > 1 && *a.last().unwrap() == 0 {
            a.pop();
        }
    }

    fn inv(p: u64, a: u64) -> u64 {
        super::pow_mod(a, p - 2, p)
    }

    pub fn rem(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut a = a.to_vec();
        trim(&mut a);
        let db = b.len() - 1;
        let lead_inv = inv(p, b[db]);
        while a.len() > db && !(a.len() == 1 && a[0] == 0) {
            let da = a.len() - 1;
            let c = a[da] * lead_inv % p;
            for j in 0..=db {
                a[da - db + j] = (a[da - db + j] + p - c * b[j] % p) % p;
            }
            trim(&mut a);
            if da == 0 {
                break;
            }
        }
        a
    }

    pub fn mulmod(p: u64, a: &[u64], b: &[u64], f: &[u64]) -> Vec<u64> {
        let mut c = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                c[i + j] = (c[i + j] + x * y) % p;
            }
        }
        rem(p, &c, f)
    }

    pub fn gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !(b.len() == 1 && b[0] == 0) {
            let r = rem(p, &a, &b);
            a = b;
            b = r;
        }
        a
    }

    /// `x^(p^k) mod f`.
    pub fn frobenius_power_of_x(p: u64, f: &[u64], k: usize) -> Vec<u64> {
        let mut cur = rem(p, &[0, 1], f);
        for _ in 0..k {
            let mut acc = vec![1u64];
            let mut base = cur.clone();
            let mut e = p;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mulmod(p, &acc, &base, f);
                }
                base = mulmod(p, &base, &base, f);
                e >>= 1;
            }
            cur = acc;
        }
        cur
    }

    /// Rabin's test.
    pub fn is_irreducible(p: u64, f: &[u64]) -> bool {
        let r = f.len() - 1;
        let x = vec![0u64, 1];
        let mut full = frobenius_power_of_x(p, f, r);
        trim(&mut full);
        if rem(p, &sub(p, &full, &x), f) != vec![0] {
            return false;
        }
        let mut q = 2;
        let mut n = r;
        while n > 1 {
            if n.is_multiple_of(q) {
                while n.is_multiple_of(q) {
                    n /= q;
                }
                let h = frobenius_power_of_x(p, f, r / q);
                let g = gcd(p, f, &sub(p, &h, &x));
                if g.len() > 1 {
                    return false;
                }
            }
            q += 1;
        }
        true
    }

    pub fn sub(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut c: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut c);
        c
    }
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, n: u64) -> u64 {
    let mut acc = 1u64 % n;
    a %= n;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * a as u128) % n as u128) as u64;
        }
        a = ((a as u128 * a as u128) % n as u128) as u64;
        e >>= 1;
    }
    acc
}

impl RingData {
    #[inline]
    pub(crate) fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    #[inline]
    pub(crate) fn addmod(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn submod(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    pub(crate) fn reduce_int(&self, v: i64) -> u64 {
        let q = self.modulus as i128;
        ((v as i128 % q + q) % q) as u64
    }

    pub(crate) fn zero(&self) -> Vec<u64> {
        vec![0; self.r]
    }

    pub(crate) fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.r];
        v[0] = 1 % self.modulus;
        v
    }

    pub(crate) fn scalar(&self, c: u64) -> Vec<u64> {
        let mut v = vec![0; self.r];
        v[0] = c % self.modulus;
        v
    }

    pub(crate) fn add_into(&self, out: &mut [u64], a: &[u64]) {
        for (o, &x) in out.iter_mut().zip(a) {
            *o = self.addmod(*o, x);
        }
    }

    pub(crate) fn sub_into(&self, out: &mut [u64], a: &[u64]) {
        for (o, &x) in out.iter_mut().zip(a) {
            *o = self.submod(*o, x);
        }
    }

    pub(crate) fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&x| self.submod(0, x)).collect()
    }

    pub(crate) fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let r = self.r;
        if r == 1 {
            return vec![self.mulmod(a[0], b[0])];
        }
        let mut c = vec![0u64; 2 * r - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                c[i + j] = self.addmod(c[i + j], self.mulmod(x, y));
            }
        }
        for k in (r..2 * r - 1).rev() {
            let t = c[k];
            if t == 0 {
                continue;
            }
            c[k] = 0;
            for j in 0..r {
                c[k - r + j] = self.submod(c[k - r + j], self.mulmod(t, self.poly[j]));
            }
        }
        c.truncate(r);
        c
    }

    /// `out += a * b`.
    pub(crate) fn mul_add_into(&self, out: &mut [u64], a: &[u64], b: &[u64]) {
        let prod = self.mul(a, b);
        self.add_into(out, &prod);
    }

    pub(crate) fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    /// `p`-adic valuation, `None` for zero (i.e. valuation at least `m`).
    pub(crate) fn valuation(&self, a: &[u64]) -> Option<u32> {
        a.iter()
            .filter(|&&x| x != 0)
            .map(|&x| p_valuation(self.p, x as i64).unwrap())
            .min()
    }

    pub(crate) fn pow(&self, a: &[u64], mut e: u128) -> Vec<u64> {
        let mut acc = self.one();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a unit; `None` if `a` is not a unit.
    pub(crate) fn inverse(&self, a: &[u64]) -> Option<Vec<u64>> {
        if self.valuation(a) != Some(0) {
            return None;
        }
        let q = (self.p as u128).pow(self.r as u32);
        // a^(q-2) inverts a modulo p; Newton's iteration lifts it.
        let mut v = self.pow(a, q - 2);
        let two = self.scalar(2);
        let mut prec = 1u32;
        while prec < self.m {
            let av = self.mul(a, &v);
            let mut t = two.clone();
            self.sub_into(&mut t, &av);
            v = self.mul(&v, &t);
            prec *= 2;
        }
        Some(v)
    }

    /// Divides every coordinate by `p^k`; exact when `valuation >= k`, the
    /// quotient is meaningful modulo `p^(m-k)`.
    pub(crate) fn div_p_pow(&self, a: &[u64], k: u32) -> Vec<u64> {
        let d = self.p.pow(k);
        a.iter().map(|&x| x / d).collect()
    }

    pub(crate) fn p_pow(&self, k: u32) -> Vec<u64> {
        if k >= self.m {
            self.zero()
        } else {
            self.scalar(self.p.pow(k))
        }
    }

    /// `sigma^t(a)` for any integer `t`.
    pub(crate) fn frobenius(&self, a: &[u64], t: i64) -> Vec<u64> {
        let r = self.r;
        let t = t.rem_euclid(r as i64) as usize;
        if t == 0 {
            return a.to_vec();
        }
        let mat = &self.frob[t];
        (0..r)
            .map(|i| {
                let mut s = 0u64;
                for k in 0..r {
                    s = self.addmod(s, self.mulmod(mat[i * r + k], a[k]));
                }
                s
            })
            .collect()
    }

    fn eval_poly(&self, poly: &[u64], y: &[u64]) -> Vec<u64> {
        let mut acc = self.zero();
        for &c in poly.iter().rev() {
            acc = self.mul(&acc, y);
            let mut cst = self.zero();
            cst[0] = c % self.modulus;
            self.add_into(&mut acc, &cst);
        }
        acc
    }
}

/// Hensel lift of `x -> x^p`, then the matrices of all powers `sigma^t`,
/// `t = 0..r`.
fn frobenius_matrices(data: &RingData) -> Vec<Vec<u64>> {
    let r = data.r;
    let mut x = data.zero();
    if r == 1 {
        return vec![vec![1 % data.modulus]];
    }
    x[1] = 1;
    let deriv: Vec<u64> = (1..=r)
        .map(|k| data.mulmod(data.poly[k], k as u64 % data.modulus))
        .collect();
    let mut y = data.pow(&x, data.p as u128);
    let mut prec = 1u32;
    while prec < data.m {
        let fy = data.eval_poly(&data.poly, &y);
        let dfy = data.eval_poly(&deriv, &y);
        let inv = data.inverse(&dfy).expect("residue polynomial is separable");
        let corr = data.mul(&fy, &inv);
        data.sub_into(&mut y, &corr);
        prec *= 2;
    }
    let mut mats = Vec::with_capacity(r);
    let mut image = x.clone();
    for _ in 0..r {
        // column k holds image^k
        let mut mat = vec![0u64; r * r];
        let mut pw = data.one();
        for k in 0..r {
            for i in 0..r {
                mat[i * r + k] = pw[i];
            }
            pw = data.mul(&pw, &image);
        }
        mats.push(mat);
        image = data.eval_poly(&image, &y);
    }
    mats
}

impl WittRingParams {
    pub fn p(&self) -> u64 {
        self.data.p
    }
    pub fn r(&self) -> usize {
        self.data.r
    }
    pub fn m(&self) -> u32 {
        self.data.m
    }
    /// `p^m`.
    pub fn modulus(&self) -> u64 {
        self.data.modulus
    }
    /// Number of elements, `p^(m r)`, if it fits.
    pub fn cardinality(&self) -> Option<u128> {
        (self.data.modulus as u128).checked_pow(self.data.r as u32)
    }
    /// Monic residue polynomial (Conway when tabulated), constant term first.
    pub fn residue_polynomial(&self) -> &[u64] {
        &self.data.poly
    }

    pub fn element(&self, coeffs: &[i64]) -> Result<WittElement> {
        if coeffs.len() != self.data.r {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coefficients, got {}",
                self.data.r,
                coeffs.len()
            )));
        }
        Ok(WittElement {
            ring: self.clone(),
            coeffs: coeffs.iter().map(|&c| self.data.reduce_int(c)).collect(),
        })
    }

    pub fn from_int(&self, v: i64) -> WittElement {
        let mut coeffs = self.data.zero();
        coeffs[0] = self.data.reduce_int(v);
        WittElement {
            ring: self.clone(),
            coeffs,
        }
    }

    pub fn zero(&self) -> WittElement {
        self.from_int(0)
    }

    pub fn one(&self) -> WittElement {
        self.from_int(1)
    }

    /// The class of `x`, a lift of a generator of `F_{p^r}` over `F_p`.
    pub fn generator(&self) -> WittElement {
        let mut coeffs = self.data.zero();
        if self.data.r == 1 {
            coeffs[0] = self.data.reduce_int(-(self.data.poly[0] as i64));
        } else {
            coeffs[1] = 1;
        }
        WittElement {
            ring: self.clone(),
            coeffs,
        }
    }

    /// All elements, in coordinate order. Only sensible for tiny rings.
    pub fn elements(&self) -> impl Iterator<Item = WittElement> + '_ {
        let q = self.data.modulus;
        let r = self.data.r;
        let total = self.cardinality().unwrap_or(0);
        (0..total).map(move |mut code| {
            let mut coeffs = Vec::with_capacity(r);
            for _ in 0..r {
                coeffs.push((code % q as u128) as u64);
                code /= q as u128;
            }
            WittElement {
                ring: self.clone(),
                coeffs,
            }
        })
    }

    /// Same residue field, different precision.
    pub fn with_precision(&self, m: u32) -> Result<WittRingParams> {
        witt_ring(self.data.p, self.data.r, m)
    }
}

/// An element of `W_m(F_{p^r})` in the power basis.
#[derive(Clone, PartialEq, Eq)]
pub struct WittElement {
    pub(crate) ring: WittRingParams,
    pub(crate) coeffs: Vec<u64>,
}

impl fmt::Debug for WittElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

impl WittElement {
    pub fn ring(&self) -> &WittRingParams {
        &self.ring
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn frobenius(&self) -> WittElement {
        self.frobenius_pow(1)
    }

    pub fn frobenius_pow(&self, t: i64) -> WittElement {
        WittElement {
            ring: self.ring.clone(),
            coeffs: self.ring.data.frobenius(&self.coeffs, t),
        }
    }

    /// `None` for the zero element.
    pub fn valuation(&self) -> Option<u32> {
        self.ring.data.valuation(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.ring.data.is_zero(&self.coeffs)
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    pub fn inverse(&self) -> Option<WittElement> {
        self.ring.data.inverse(&self.coeffs).map(|coeffs| WittElement {
            ring: self.ring.clone(),
            coeffs,
        })
    }

    pub fn pow(&self, e: u64) -> WittElement {
        WittElement {
            ring: self.ring.clone(),
            coeffs: self.ring.data.pow(&self.coeffs, e as u128),
        }
    }

    /// Reduction to the residue field `F_{p^r}` (as `W_1`).
    pub fn reduce_mod_p(&self) -> Result<WittElement> {
        let k = self.ring.with_precision(1)?;
        Ok(WittElement {
            coeffs: self.coeffs.iter().map(|&c| c % k.data.p).collect(),
            ring: k,
        })
    }
}

impl Add for &WittElement {
    type Output = WittElement;
    fn add(self, rhs: &WittElement) -> WittElement {
        let mut coeffs = self.coeffs.clone();
        self.ring.data.add_into(&mut coeffs, &rhs.coeffs);
        WittElement {
            ring: self.ring.clone(),
            coeffs,
        }
    }
}

impl Sub for &WittElement {
    type Output = WittElement;
    fn sub(self, rhs: &WittElement) -> WittElement {
        let mut coeffs = self.coeffs.clone();
        self.ring.data.sub_into(&mut coeffs, &rhs.coeffs);
        WittElement {
            ring: self.ring.clone(),
            coeffs,
        }
    }
}

impl Mul for &WittElement {
    type Output = WittElement;
    fn mul(self, rhs: &WittElement) -> WittElement {
        WittElement {
            ring: self.ring.clone(),
            coeffs: self.ring.data.mul(&self.coeffs, &rhs.coeffs),
        }
    }
}

impl Neg for &WittElement {
    type Output = WittElement;
    fn neg(self) -> WittElement {
        WittElement {
            ring: self.ring.clone(),
            coeffs: self.ring.data.neg(&self.coeffs),
        }
    }
}
