//! Exact arithmetic in the cyclotomic field Q(ζ_M).
//!
//! Elements are stored as a common positive denominator over integer
//! numerators of the power basis 1, z, .., z^{φ(M)-1}, reduced modulo the
//! cyclotomic polynomial Φ_M.  The representation is canonical, so equality
//! is plain structural equality.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::Error;

/// Static data attached to a cyclotomic order.
struct Field {
    order: u32,
    phi: usize,
    /// Monic Φ_M, lowest degree first.
    cyclo: Vec<i64>,
    /// `pow[k]` holds z^k reduced mod Φ_M, for k in 0..max(M, 2φ-1).
    pow: Vec<Vec<i64>>,
}

fn poly_divexact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let lead = *den.last().unwrap();
    let mut q = vec![0i64; num.len() - dn];
    for k in (0..q.len()).rev() {
        let c = rem[k + dn] / lead;
        q[k] = c;
        for (j, d) in den.iter().enumerate() {
            rem[k + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

fn cyclotomic_poly(m: u32, memo: &mut HashMap<u32, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = memo.get(&m) {
        return p.clone();
    }
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let pd = cyclotomic_poly(d, memo);
            num = poly_divexact(&num, &pd);
        }
    }
    memo.insert(m, num.clone());
    num
}

pub fn euler_phi(m: u32) -> u32 {
    (1..=m).filter(|k| k.gcd(&m) == 1).count() as u32
}

impl Field {
    fn new(order: u32) -> Field {
        let mut memo = HashMap::new();
        let cyclo = cyclotomic_poly(order, &mut memo);
        let phi = cyclo.len() - 1;
        let n = (order as usize).max(2 * phi);
        let mut pow = Vec::with_capacity(n);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..n {
            pow.push(cur.clone());
            // multiply by z
            let top = cur[phi - 1];
            for j in (1..phi).rev() {
                cur[j] = cur[j - 1] - top * cyclo[j];
            }
            cur[0] = -top * cyclo[0];
        }
        Field { order, phi, cyclo, pow }
    }
}

fn field(order: u32) -> &'static Field {
    thread_local! {
        static LAST: std::cell::Cell<Option<&'static Field>> = const { std::cell::Cell::new(None) };
    }
    if let Some(f) = LAST.with(|c| c.get()) {
        if f.order == order {
            return f;
        }
    }
    static CACHE: OnceLock<Mutex<HashMap<u32, &'static Field>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let f = *cache
        .lock()
        .unwrap()
        .entry(order)
        .or_insert_with(|| Box::leak(Box::new(Field::new(order))));
    LAST.with(|c| c.set(Some(f)));
    f
}

/// Degree φ(M) of the field Q(ζ_M).
pub fn degree(order: u32) -> usize {
    field(order).phi
}

/// Coefficients of Φ_M, lowest degree first.
pub fn cyclotomic_coeffs(order: u32) -> Vec<i64> {
    field(order).cyclo.clone()
}

/// An element of Q(ζ_M).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloNum {
    order: u32,
    /// Positive, except for zero where it is 0 so that zeros never allocate.
    den: BigInt,
    /// Empty for zero, otherwise exactly φ(M) entries.
    num: Vec<BigInt>,
}

impl CycloNum {
    pub fn zero(order: u32) -> Self {
        CycloNum { order, den: BigInt::zero(), num: Vec::new() }
    }

    pub fn one(order: u32) -> Self {
        Self::from_int(order, 1)
    }

    pub fn from_int(order: u32, n: i64) -> Self {
        Self::from_bigint(order, BigInt::from(n))
    }

    pub fn from_bigint(order: u32, n: BigInt) -> Self {
        if n.is_zero() {
            return Self::zero(order);
        }
        let phi = degree(order);
        let mut num = vec![BigInt::zero(); phi];
        num[0] = n;
        CycloNum { order, den: BigInt::one(), num }
    }

    pub fn from_rational(order: u32, q: &BigRational) -> Self {
        let phi = degree(order);
        let mut num = vec![BigInt::zero(); phi];
        num[0] = q.numer().clone();
        Self::normalized(order, q.denom().clone(), num)
    }

    /// Builds an element from power-basis coefficients.  The vector may be
    /// longer than φ(M); it is reduced modulo Φ_M.
    pub fn from_coeffs(order: u32, coeffs: &[BigRational]) -> Self {
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let ints: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Self::from_int_poly(order, ints, den)
    }

    fn from_int_poly(order: u32, poly: Vec<BigInt>, den: BigInt) -> Self {
        let f = field(order);
        let mut num = vec![BigInt::zero(); f.phi];
        for (k, c) in poly.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < f.phi {
                num[k] += c;
            } else {
                let p = if k < f.pow.len() { f.pow[k].clone() } else { pow_reduced(f, k) };
                for (j, r) in p.iter().enumerate() {
                    if *r != 0 {
                        num[j] += &c * *r;
                    }
                }
            }
        }
        Self::normalized(order, den, num)
    }

    fn normalized(order: u32, mut den: BigInt, mut num: Vec<BigInt>) -> Self {
        if num.iter().all(|c| c.is_zero()) {
            return Self::zero(order);
        }
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -&*c;
            }
        }
        if !den.is_one() {
            let mut g = den.clone();
            for c in &num {
                if g.is_one() {
                    break;
                }
                if !c.is_zero() {
                    g = g.gcd(c);
                }
            }
            if !g.is_one() {
                den /= &g;
                for c in num.iter_mut() {
                    if !c.is_zero() {
                        *c /= &g;
                    }
                }
            }
        }
        CycloNum { order, den, num }
    }

    /// ζ_M^k for any integer k.
    pub fn root_pow(order: u32, k: i64) -> Self {
        let f = field(order);
        let e = k.rem_euclid(order as i64) as usize;
        let num: Vec<BigInt> = f.pow[e].iter().map(|&c| BigInt::from(c)).collect();
        Self::normalized(order, BigInt::one(), num)
    }

    /// ζ^{num/den} where ζ = ζ_M^{M/l} is the configured primitive l-th root.
    pub fn zeta_pow(order: u32, l: u32, num: i64, den: i64) -> Result<Self, Error> {
        if den <= 0 || l == 0 || order == 0 {
            return Err(Error::Unrepresentable { order, l, den });
        }
        let ld = l as i64 * den;
        if (order as i64) % ld != 0 {
            return Err(Error::Unrepresentable { order, l, den });
        }
        Ok(Self::root_pow(order, num * (order as i64 / ld)))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one()
            && !self.num.is_empty()
            && self.num[0].is_one()
            && self.num[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.num[1..].iter().all(|c| c.is_zero()) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Power-basis coefficients, always of length φ(M).
    pub fn coeffs(&self) -> Vec<BigRational> {
        let phi = degree(self.order);
        if self.is_zero() {
            return vec![BigRational::zero(); phi];
        }
        self.num.iter().map(|c| BigRational::new(c.clone(), self.den.clone())).collect()
    }

    fn check(&self, other: &Self) -> Result<(), Error> {
        if self.order != other.order {
            Err(Error::OrderMismatch(self.order, other.order))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, Error> {
        self.check(other)?;
        Ok(self.add_unchecked(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, Error> {
        self.check(other)?;
        Ok(self.add_unchecked(other, true))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, Error> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self, negate: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { -other.clone() } else { other.clone() };
        }
        if self.den == other.den {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| if negate { a - b } else { a + b })
                .collect();
            return Self::normalized(self.order, self.den.clone(), num);
        }
        let g = self.den.gcd(&other.den);
        let sa = &other.den / &g;
        let sb = &self.den / &g;
        let den = &self.den * &sa;
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| {
                let x = a * &sa;
                let y = b * &sb;
                if negate { x - y } else { x + y }
            })
            .collect();
        Self::normalized(self.order, den, num)
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.order);
        }
        let f = field(self.order);
        let phi = f.phi;
        let mut prod = vec![BigInt::zero(); 2 * phi - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut num: Vec<BigInt> = prod.drain(..phi).collect();
        for (k, c) in prod.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, r) in f.pow[k + phi].iter().enumerate() {
                if *r != 0 {
                    num[j] += &c * *r;
                }
            }
        }
        Self::normalized(self.order, &self.den * &other.den, num)
    }

    /// Multiplication by an integer.
    pub fn scale_int(&self, k: i64) -> Self {
        if k == 0 || self.is_zero() {
            return Self::zero(self.order);
        }
        let num = self.num.iter().map(|c| c * k).collect();
        Self::normalized(self.order, self.den.clone(), num)
    }

    /// Multiplicative inverse, computed by the extended Euclidean algorithm
    /// against Φ_M over Q.
    pub fn inv(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = field(self.order);
        let a: Vec<BigRational> = self.coeffs();
        let m: Vec<BigRational> = f.cyclo.iter().map(|&c| BigRational::from_integer(c.into())).collect();
        // invariant: r_i = s_i * a (mod Φ)
        let (mut r0, mut s0) = (m, vec![]);
        let (mut r1, mut s1) = (trim(a), vec![BigRational::one()]);
        while !(r1.len() == 1) {
            let (q, r) = qpoly_divrem(&r0, &r1);
            let s2 = qpoly_sub(&s0, &qpoly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            if r1.is_empty() {
                return Err(Error::DivisionByZero);
            }
        }
        let c = r1[0].clone();
        let inv: Vec<BigRational> = s1.iter().map(|x| x / &c).collect();
        Ok(Self::from_coeffs(self.order, &inv))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, Error> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self, Error> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Applies the field automorphism ζ_M ↦ ζ_M^k (k coprime to M).
    pub fn galois(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let order = self.order;
        let m = order as i64;
        let mut poly = vec![BigInt::zero(); order as usize];
        for (i, c) in self.num.iter().enumerate() {
            let e = (i as i64 * k).rem_euclid(m) as usize;
            poly[e] += c;
        }
        Self::from_int_poly(order, poly, self.den.clone())
    }

    /// The automorphism ζ_M ↦ ζ_M^{-1}.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Numerical value, for display only.
    pub fn approx(&self) -> (f64, f64) {
        let m = self.order as f64;
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        let (mut re, mut im) = (0.0, 0.0);
        for (k, c) in self.num.iter().enumerate() {
            let c = c.to_f64().unwrap_or(f64::NAN) / den;
            let t = 2.0 * std::f64::consts::PI * k as f64 / m;
            re += c * t.cos();
            im += c * t.sin();
        }
        (re, im)
    }

    pub fn to_json(&self) -> CycloJson {
        CycloJson { order: self.order, coeffs: self.coeffs().iter().map(rat_string).collect() }
    }

    pub fn from_json(j: &CycloJson) -> Result<Self, Error> {
        let coeffs = j.coeffs.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>, _>>()?;
        if coeffs.len() != degree(j.order) {
            return Err(Error::Parse(format!("expected {} coefficients", degree(j.order))));
        }
        Ok(Self::from_coeffs(j.order, &coeffs))
    }
}

fn pow_reduced(f: &Field, k: usize) -> Vec<i64> {
    f.pow[k % f.order as usize].clone()
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn qpoly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut r = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    trim(r)
}

fn qpoly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn qpoly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    let lead = b.last().unwrap();
    while r.len() >= b.len() {
        let k = r.len() - b.len();
        let c = r.last().unwrap() / lead;
        for (j, y) in b.iter().enumerate() {
            r[k + j] -= &c * y;
        }
        q[k] = c;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

pub fn rat_string(q: &BigRational) -> String {
    if q.denom().is_one() { q.numer().to_string() } else { format!("{}/{}", q.numer(), q.denom()) }
}

pub fn parse_rat(s: &str) -> Result<BigRational, Error> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Serialized form `{order, coeffs: ["p/q", ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloJson {
    pub order: u32,
    pub coeffs: Vec<String>,
}

impl Serialize for CycloNum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloNum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = CycloJson::deserialize(d)?;
        CycloNum::from_json(&j).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mag = rat_string(&a);
            match (k, a.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "z^{k}")?,
                (_, false) => write!(f, "{mag}*z^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]_{}", self, self.order)
    }
}

fn same(a: &CycloNum, b: &CycloNum) {
    assert_eq!(a.order, b.order, "cyclotomic order mismatch: {} vs {}", a.order, b.order);
}

impl Add for &CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: &CycloNum) -> CycloNum {
        same(self, rhs);
        self.add_unchecked(rhs, false)
    }
}

impl Sub for &CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: &CycloNum) -> CycloNum {
        same(self, rhs);
        self.add_unchecked(rhs, true)
    }
}

impl Mul for &CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: &CycloNum) -> CycloNum {
        same(self, rhs);
        self.mul_unchecked(rhs)
    }
}

impl Add for CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: CycloNum) -> CycloNum {
        &self + &rhs
    }
}

impl Sub for CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: CycloNum) -> CycloNum {
        &self - &rhs
    }
}

impl Mul for CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: CycloNum) -> CycloNum {
        &self * &rhs
    }
}

impl AddAssign<&CycloNum> for CycloNum {
    fn add_assign(&mut self, rhs: &CycloNum) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&CycloNum> for CycloNum {
    fn sub_assign(&mut self, rhs: &CycloNum) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&CycloNum> for CycloNum {
    fn mul_assign(&mut self, rhs: &CycloNum) {
        *self = &*self * rhs;
    }
}

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(mut self) -> CycloNum {
        for c in self.num.iter_mut() {
            *c = -&*c;
        }
        self
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -self.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(k: i64) -> CycloNum {
        CycloNum::zeta_pow(20, 5, k, 1).unwrap()
    }

    #[test]
    fn phi_of_small_orders() {
        assert_eq!(degree(20), 8);
        assert_eq!(degree(24), 8);
        assert_eq!(degree(2), 1);
        assert_eq!(cyclotomic_coeffs(20), vec![1, 0, -1, 0, 1, 0, -1, 0, 1]);
        assert_eq!(euler_phi(28), 12);
    }

    #[test]
    fn identity_power() {
        assert!(CycloNum::zeta_pow(20, 5, 0, 1).unwrap().is_one());
    }

    #[test]
    fn square_root_of_unity_two() {
        let m = CycloNum::zeta_pow(2, 2, 1, 1).unwrap();
        assert_eq!(m, CycloNum::from_int(2, -1));
    }

    #[test]
    fn zeta_has_order_five() {
        let zeta = z(1);
        for k in 1..5 {
            assert!(!zeta.pow(k).unwrap().is_one());
        }
        assert!(zeta.pow(5).unwrap().is_one());
    }

    #[test]
    fn nontrivial_fifth_roots_sum_to_minus_one() {
        let s = &(&z(1) + &z(2)) + &(&z(3) + &z(4));
        assert_eq!(s, CycloNum::from_int(20, -1));
    }

    #[test]
    fn inverse_of_one_plus_zeta() {
        let x = &CycloNum::one(20) + &z(1);
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
    }

    #[test]
    fn errors() {
        assert!(matches!(CycloNum::zero(20).inv(), Err(Error::DivisionByZero)));
        assert!(matches!(
            CycloNum::one(20).checked_add(&CycloNum::one(24)),
            Err(Error::OrderMismatch(20, 24))
        ));
        let e = CycloNum::zeta_pow(20, 5, 1, 8).unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("unrepresentable exponent") && msg.contains("20") && msg.contains('8'));
    }

    #[test]
    fn fractional_powers() {
        let q = CycloNum::zeta_pow(20, 5, 1, 4).unwrap();
        assert_eq!(q.pow(4).unwrap(), z(1));
        assert_eq!(z(3).conj(), z(-3));
    }

    #[test]
    fn json_roundtrip() {
        let x = &z(1) * &CycloNum::from_rational(20, &BigRational::new(3.into(), 7.into()));
        let s = serde_json::to_string(&x).unwrap();
        assert!(s.contains("\"order\":20"));
        let y: CycloNum = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn elem() -> impl Strategy<Value = CycloNum> {
            (prop::collection::vec(-6i64..6, 8), 1i64..5).prop_map(|(c, d)| {
                let cs: Vec<BigRational> =
                    c.iter().map(|&x| BigRational::new(x.into(), d.into())).collect();
                CycloNum::from_coeffs(20, &cs)
            })
        }

        proptest! {
            #[test]
            fn ring_axioms(a in elem(), b in elem(), c in elem()) {
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert_eq!(&a + &b, &b + &a);
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert!((&a + &(-&a)).is_zero());
            }

            #[test]
            fn inverse(a in elem()) {
                prop_assume!(!a.is_zero());
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }

            #[test]
            fn powers_add(a in -30i64..30, b in -30i64..30) {
                let za = CycloNum::zeta_pow(20, 5, a, 1).unwrap();
                let zb = CycloNum::zeta_pow(20, 5, b, 1).unwrap();
                prop_assert_eq!(&za * &zb, CycloNum::zeta_pow(20, 5, a + b, 1).unwrap());
            }

            #[test]
            fn galois_is_multiplicative(a in elem(), b in elem(), k in prop::sample::select(vec![1i64, 3, 7, 9, 11, 13, 17, 19])) {
                prop_assert_eq!((&a * &b).galois(k), &a.galois(k) * &b.galois(k));
            }
        }
    }
}
