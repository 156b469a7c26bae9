//! Exact arithmetic in cyclotomic fields Q(e(1/L)).
//!
//! A [`CycNum`] of order `L` stores its value in the power basis
//! `1, z, ..., z^(phi(L)-1)` of `Q(z)`, `z = e(1/L)`, over one common
//! positive denominator. Keeping values reduced makes equality a plain
//! comparison once both sides live in the same field. Mixed-order
//! operands are embedded into the field of order `lcm(L_a, L_b)`.

use std::borrow::Cow;
use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ntheory::{divisors, euler_phi, factorize, kronecker};

/// Power tables are kept only while `order * phi` stays below this many entries.
const TABLE_LIMIT: usize = 1 << 18;

/// Precomputed data for one cyclotomic order.
pub(crate) struct Ctx {
    pub order: u32,
    pub phi: usize,
    /// Nonzero coefficients of the cyclotomic polynomial below the leading term.
    poly: Vec<(usize, i64)>,
    /// `table[j]` holds `z^j` reduced to the power basis, for `0 <= j < order`, when small enough.
    table: Option<Vec<Vec<i64>>>,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl Ctx {
    fn build(order: u32) -> Ctx {
        let full = cyclotomic_poly(order);
        let phi = full.len() - 1;
        let poly: Vec<(usize, i64)> = full[..phi].iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect();
        let l = order as usize;
        let table = (l * phi <= TABLE_LIMIT).then(|| {
            let mut table: Vec<Vec<i64>> = Vec::with_capacity(l.max(1));
            for j in 0..l.max(1) {
                let row = if j < phi {
                    let mut r = vec![0; phi];
                    r[j] = 1;
                    r
                } else {
                    // z * z^(j-1): shift, then fold the z^phi term back using the monic relation.
                    let prev = &table[j - 1];
                    let top = prev[phi - 1];
                    let mut r = vec![0; phi];
                    r[1..phi].copy_from_slice(&prev[..phi - 1]);
                    for &(i, c) in &poly {
                        r[i] -= top * c;
                    }
                    r
                };
                table.push(row);
            }
            table
        });
        let cos = (0..phi).map(|i| (TAU * i as f64 / order as f64).cos()).collect();
        let sin = (0..phi).map(|i| (TAU * i as f64 / order as f64).sin()).collect();
        Ctx { order, phi, poly, table, cos, sin }
    }

    /// Reduced power-basis vector of `z^j`.
    pub fn power(&self, j: i64) -> Cow<'_, [i64]> {
        let j = j.rem_euclid(self.order as i64) as usize;
        match &self.table {
            Some(t) => Cow::Borrowed(&t[j]),
            None => {
                let mut buf = vec![0i128; j + 1];
                buf[j] = 1;
                Cow::Owned(self.divide(buf).into_iter().map(|x| x as i64).collect())
            }
        }
    }

    /// Remainder of a polynomial modulo the cyclotomic polynomial.
    fn divide(&self, mut v: Vec<i128>) -> Vec<i128> {
        let phi = self.phi;
        for d in (phi..v.len()).rev() {
            let c = std::mem::take(&mut v[d]);
            if c != 0 {
                for &(i, p) in &self.poly {
                    v[d - phi + i] -= c * p as i128;
                }
            }
        }
        v.resize(phi, 0);
        v
    }

    /// Folds a coefficient vector of any length (exponents read mod `order`) into the power basis.
    pub fn reduce(&self, buf: &[i128]) -> Vec<i128> {
        let phi = self.phi;
        let Some(table) = &self.table else {
            let l = self.order as usize;
            let mut v = vec![0i128; buf.len().min(l).max(phi)];
            for (j, &c) in buf.iter().enumerate() {
                v[j % l] += c;
            }
            return self.divide(v);
        };
        let mut out = vec![0i128; phi];
        for (j, &c) in buf.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if j < phi {
                out[j] += c;
            } else {
                for (o, &t) in out.iter_mut().zip(&table[j % self.order as usize]) {
                    *o += c * t as i128;
                }
            }
        }
        out
    }

    /// Product of two power-basis vectors, reduced.
    pub fn mul(&self, a: &[i128], b: &[i128]) -> Vec<i128> {
        let phi = self.phi;
        let mut buf = vec![0i128; 2 * phi - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                buf[i + j] += x * y;
            }
        }
        self.reduce(&buf)
    }
}

fn contexts() -> &'static RwLock<HashMap<u32, Arc<Ctx>>> {
    static CTX: OnceLock<RwLock<HashMap<u32, Arc<Ctx>>>> = OnceLock::new();
    CTX.get_or_init(|| RwLock::new(HashMap::new()))
}

pub(crate) fn ctx(order: u32) -> Arc<Ctx> {
    assert!(order >= 1, "cyclotomic order must be positive");
    if let Some(c) = contexts().read().expect("context lock").get(&order) {
        return c.clone();
    }
    let built = Arc::new(Ctx::build(order));
    contexts().write().expect("context lock").entry(order).or_insert(built).clone()
}

/// Coefficients of the L-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_poly(l: u32) -> Vec<i64> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Vec<i64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(p) = cache.read().expect("poly lock").get(&l) {
        return p.clone();
    }
    // x^L - 1 divided by every Phi_d with d a proper divisor of L.
    let mut num = vec![0i64; l as usize + 1];
    num[0] = -1;
    num[l as usize] = 1;
    for d in divisors(l as u64) {
        if d as u32 == l {
            continue;
        }
        num = exact_div_monic(&num, &cyclotomic_poly(d as u32));
    }
    cache.write().expect("poly lock").insert(l, num.clone());
    num
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quo = vec![0i64; num.len() - dn];
    for i in (0..quo.len()).rev() {
        let c = rem[i + dn];
        quo[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "cyclotomic division left a remainder");
    quo
}

/// An exact element of a cyclotomic field.
#[derive(Clone)]
pub struct CycNum {
    order: u32,
    den: i128,
    coeffs: Vec<i128>,
}

impl CycNum {
    fn normalized(order: u32, mut den: i128, mut coeffs: Vec<i128>) -> CycNum {
        assert!(den != 0, "zero denominator");
        if den < 0 {
            den = -den;
            coeffs.iter_mut().for_each(|c| *c = -*c);
        }
        let g = coeffs.iter().fold(den, |g, &c| g.gcd(&c));
        if g > 1 {
            den /= g;
            coeffs.iter_mut().for_each(|c| *c /= g);
        }
        CycNum { order, den, coeffs }
    }

    pub fn zero() -> CycNum {
        CycNum::from_int(0)
    }

    pub fn one() -> CycNum {
        CycNum::from_int(1)
    }

    pub fn from_int(n: i128) -> CycNum {
        CycNum { order: 1, den: 1, coeffs: vec![n] }
    }

    pub fn from_ratio(num: i128, den: i128) -> CycNum {
        CycNum::normalized(1, den, vec![num])
    }

    /// Builds `(1/den) * sum_j c[j] e(j/L)` from coefficients on the group basis.
    pub fn from_group_coeffs(order: u32, den: i128, group: &[i128]) -> CycNum {
        assert_eq!(group.len(), order as usize, "need one coefficient per root of unity");
        let c = ctx(order);
        CycNum::normalized(order, den, c.reduce(group))
    }

    pub(crate) fn from_power_basis(order: u32, den: i128, coeffs: Vec<i128>) -> CycNum {
        debug_assert_eq!(coeffs.len(), ctx(order).phi);
        CycNum::normalized(order, den, coeffs)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub(crate) fn den(&self) -> i128 {
        self.den
    }

    pub(crate) fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The value as a rational num/den when it lies in Q.
    pub fn as_rational(&self) -> Option<(i128, i128)> {
        let r = self.minimized();
        (r.order == 1).then(|| (r.coeffs[0], r.den))
    }

    /// The same value viewed in the field of order `target`, a multiple of `self.order`.
    pub fn embed(&self, target: u32) -> CycNum {
        assert_eq!(target % self.order, 0, "cannot embed order {} into {target}", self.order);
        if target == self.order {
            return self.clone();
        }
        let step = (target / self.order) as i64;
        let c = ctx(target);
        let mut out = vec![0i128; c.phi];
        for (i, &x) in self.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (o, &t) in out.iter_mut().zip(c.power(i as i64 * step).iter()) {
                *o += x * t as i128;
            }
        }
        CycNum { order: target, den: self.den, coeffs: out }
    }

    fn common(a: &CycNum, b: &CycNum) -> (CycNum, CycNum) {
        let l = a.order.lcm(&b.order);
        (a.embed(l), b.embed(l))
    }

    /// Complex conjugation, sending e(j/L) to e(-j/L).
    pub fn conj(&self) -> CycNum {
        let c = ctx(self.order);
        let mut buf = vec![0i128; self.order as usize];
        for (i, &x) in self.coeffs.iter().enumerate() {
            buf[(self.order as usize - i) % self.order as usize] += x;
        }
        CycNum::normalized(self.order, self.den, c.reduce(&buf))
    }

    /// Floating-point value as (re, im); for display and final rounding only.
    pub fn to_complex(&self) -> (f64, f64) {
        let c = ctx(self.order);
        let d = self.den as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, &x) in self.coeffs.iter().enumerate() {
            re += x as f64 * c.cos[i];
            im += x as f64 * c.sin[i];
        }
        (re / d, im / d)
    }

    pub fn abs(&self) -> f64 {
        let (re, im) = self.to_complex();
        re.hypot(im)
    }

    /// Multiplies by the rational num/den.
    pub fn scale(&self, num: i128, den: i128) -> CycNum {
        CycNum::normalized(self.order, self.den * den, self.coeffs.iter().map(|&c| c * num).collect())
    }

    pub fn pow(&self, mut e: u32) -> CycNum {
        let mut base = self.clone();
        let mut acc = CycNum::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Smallest order L' (never 2 mod 4) whose field contains the value.
    pub fn minimal_order(&self) -> u32 {
        if self.is_zero() {
            return 1;
        }
        for d in divisors(self.order as u64) {
            let d = d as u32;
            if d % 4 == 2 {
                continue;
            }
            if d == self.order || self.preimage(d).is_some() {
                return d;
            }
        }
        self.order
    }

    /// The same value at the smallest order it lives in.
    pub fn minimized(&self) -> CycNum {
        self.at_order(self.minimal_order())
    }

    fn at_order(&self, d: u32) -> CycNum {
        if d == self.order {
            return self.clone();
        }
        let coeffs = self.preimage(d).expect("value lies in the subfield");
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<i128> =
            coeffs.iter().map(|c| (c * BigRational::from(den.clone())).to_integer().to_i128().expect("fits")).collect();
        CycNum::normalized(d, den.to_i128().expect("fits"), ints)
    }

    /// Power-basis coordinates at order `d` (a divisor) when the value lies in that subfield.
    fn preimage(&self, d: u32) -> Option<Vec<BigRational>> {
        let big = ctx(self.order);
        let small = ctx(d);
        let step = (self.order / d) as i64;
        let rows = big.phi;
        let cols = small.phi;
        // Augmented system: column i is the embedding of z_d^i.
        let columns: Vec<Vec<i64>> = (0..cols).map(|i| big.power(i as i64 * step).into_owned()).collect();
        let mut m: Vec<Vec<BigRational>> = (0..rows)
            .map(|r| {
                let mut row: Vec<BigRational> =
                    columns.iter().map(|c| BigRational::from(BigInt::from(c[r]))).collect();
                row.push(BigRational::new(BigInt::from(self.coeffs[r]), BigInt::from(self.den)));
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r0 = 0;
        for col in 0..cols {
            let Some(p) = (r0..rows).find(|&r| !m[r][col].is_zero()) else { continue };
            m.swap(r0, p);
            let inv = m[r0][col].recip();
            for x in m[r0].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..rows {
                if r != r0 && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in 0..=cols {
                        let t = &m[r0][c] * &f;
                        m[r][c] -= t;
                    }
                }
            }
            pivots.push((r0, col));
            r0 += 1;
        }
        if m[r0..].iter().any(|row| !row[cols].is_zero()) {
            return None;
        }
        let mut sol = vec![BigRational::zero(); cols];
        for (r, c) in pivots {
            sol[c] = m[r][cols].clone();
        }
        Some(sol)
    }
}

/// The root of unity e(j/L).
pub fn cyc(j: i64, l: u32) -> CycNum {
    let c = ctx(l);
    CycNum { order: l, den: 1, coeffs: c.power(j).iter().map(|&x| x as i128).collect() }
}

/// The positive square root of n as an exact cyclotomic number.
pub fn sqrt_int(n: u64) -> CycNum {
    assert!(n >= 1, "sqrt_int needs n >= 1");
    let mut acc = CycNum::one();
    let mut square_part: i128 = 1;
    for (p, e) in factorize(n) {
        square_part *= (p as i128).pow(e / 2);
        if e % 2 == 1 {
            acc = &acc * &sqrt_prime(p);
        }
    }
    acc.scale(square_part, 1)
}

fn sqrt_prime(p: u64) -> CycNum {
    if p == 2 {
        return &cyc(1, 8) + &cyc(7, 8);
    }
    let pu = p as u32;
    let group: Vec<i128> = (0..p).map(|x| kronecker(x as i64, p as i64) as i128).collect();
    let g = CycNum::from_group_coeffs(pu, 1, &group);
    if p % 4 == 1 {
        g
    } else {
        // The Gauss sum is i*sqrt(p) here.
        &cyc(3, 4) * &g
    }
}

impl PartialEq for CycNum {
    fn eq(&self, other: &CycNum) -> bool {
        if self.order == other.order {
            return self.den == other.den && self.coeffs == other.coeffs;
        }
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        let (a, b) = CycNum::common(self, other);
        a.den == b.den && a.coeffs == b.coeffs
    }
}

impl Eq for CycNum {}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_complex();
        write!(f, "CycNum[{} ~ {re:.6}{im:+.6}i]", self)
    }
}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, o: &CycNum) -> CycNum {
        let (a, b) = CycNum::common(self, o);
        let den = a.den.lcm(&b.den);
        let (fa, fb) = (den / a.den, den / b.den);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| x * fa + y * fb).collect();
        CycNum::normalized(a.order, den, coeffs)
    }
}

impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, o: &CycNum) -> CycNum {
        self + &(-o)
    }
}

impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, o: &CycNum) -> CycNum {
        if self.order == 1 {
            return o.scale(self.coeffs[0], self.den);
        }
        if o.order == 1 {
            return self.scale(o.coeffs[0], o.den);
        }
        let (a, b) = CycNum::common(self, o);
        let c = ctx(a.order);
        CycNum::normalized(a.order, a.den * b.den, c.mul(&a.coeffs, &b.coeffs))
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum { order: self.order, den: self.den, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, o: CycNum) -> CycNum {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, o: &CycNum) -> CycNum {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, o: &CycNum) {
        *self = &*self + o;
    }
}

impl std::iter::Sum for CycNum {
    fn sum<I: Iterator<Item = CycNum>>(iter: I) -> CycNum {
        iter.fold(CycNum::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for CycNum {
    fn product<I: Iterator<Item = CycNum>>(iter: I) -> CycNum {
        iter.fold(CycNum::one(), |a, b| a * b)
    }
}

impl From<i64> for CycNum {
    fn from(n: i64) -> CycNum {
        CycNum::from_int(n as i128)
    }
}

fn fmt_ratio(num: &BigRational) -> String {
    if num.is_integer() {
        num.numer().to_string()
    } else {
        format!("{}/{}", num.numer(), num.denom())
    }
}

/// Renders `c0 + c1*e(1/L) + ...` at the minimal order, e.g. `1 + 2*e(1/3)`.
impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.minimized();
        if m.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (j, &c) in m.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let r = BigRational::new(BigInt::from(c), BigInt::from(m.den));
            let mag = fmt_ratio(&r.abs());
            let sign = if r.is_negative() { "-" } else { "+" };
            if out.is_empty() {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            if j == 0 {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&format!("e({j}/{})", m.order));
            } else {
                out.push_str(&format!("{mag}*e({j}/{})", m.order));
            }
        }
        write!(f, "{out}")
    }
}

/// Euler phi of the order, exposed for sizing decisions.
pub fn field_degree(order: u32) -> u64 {
    euler_phi(order as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &CycNum, re: f64, im: f64) -> bool {
        let (x, y) = a.to_complex();
        (x - re).abs() < 1e-9 && (y - im).abs() < 1e-9
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        // Phi_105 is the first one with a coefficient outside {-1, 0, 1}.
        assert!(cyclotomic_poly(105).contains(&-2));
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(cyc(0, 1), CycNum::one());
        assert_eq!(cyc(1, 2), CycNum::from_int(-1));
        assert_eq!(cyc(1, 3) + cyc(2, 3), CycNum::from_int(-1));
        assert_eq!(cyc(1, 8) * cyc(1, 8), cyc(1, 4));
        assert_eq!(cyc(1, 5).conj(), cyc(4, 5));
        assert_eq!(cyc(-1, 7), cyc(6, 7));
        assert_eq!(cyc(2, 8), cyc(1, 4));
        assert_eq!(cyc(3, 6), CycNum::from_int(-1));
    }

    #[test]
    fn square_roots() {
        assert_eq!(sqrt_int(1), CycNum::one());
        let five: Vec<i128> = (0..5).map(|x| kronecker(x, 5) as i128).collect();
        assert_eq!(sqrt_int(5), CycNum::from_group_coeffs(5, 1, &five));
        assert!(close(&sqrt_int(5), 5f64.sqrt(), 0.0));
        assert_eq!(sqrt_int(2), cyc(1, 8) + cyc(7, 8));
        assert!(close(&sqrt_int(3), 3f64.sqrt(), 0.0));
        assert!(close(&sqrt_int(360), 360f64.sqrt(), 0.0));
        assert_eq!(sqrt_int(9), CycNum::from_int(3));
    }

    #[test]
    fn rendering_uses_minimal_order() {
        assert_eq!(sqrt_int(5).minimal_order(), 5);
        assert_eq!(sqrt_int(5).embed(40).minimal_order(), 5);
        assert_eq!((cyc(1, 3) * CycNum::from_int(2) + CycNum::one()).to_string(), "1 + 2*e(1/3)");
        assert_eq!(CycNum::from_ratio(-3, 6).to_string(), "-1/2");
        assert_eq!(CycNum::zero().to_string(), "0");
        assert_eq!(cyc(1, 8).to_string(), "e(1/8)");
        assert_eq!(sqrt_int(2).as_rational(), None);
        assert_eq!(sqrt_int(4).embed(24).as_rational(), Some((2, 1)));
    }

    #[test]
    fn vanishing_sum_over_units() {
        for (p, k) in [(3u64, 2u32), (3, 3), (5, 2), (7, 2)] {
            let n = p.pow(k);
            for a in 1..n as i64 {
                if a % p as i64 == 0 {
                    continue;
                }
                let s: CycNum = (1..n as i64).filter(|x| x % p as i64 != 0).map(|x| cyc(a * x * x, n as u32)).sum();
                assert!(s.is_zero(), "p^k = {n}, a = {a}");
            }
        }
    }
}
