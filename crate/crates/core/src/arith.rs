//! Exact arithmetic: rationals, cyclotomic fields in the power basis, p-integrality
//! and certified signs of totally real cyclotomic numbers.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{a} is not a unit modulo {n}")]
    InvalidUnit { a: i64, n: u32 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("value is not fixed by complex conjugation under embedding {0}")]
    NotReal(i64),
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    let s = s.trim();
    let err = || ArithError::Parse(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| err())?)),
    }
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm_u32(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factors of `n` without multiplicity, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn euler_phi(n: u32) -> usize {
    let mut result = n as u64;
    for p in prime_factors(n as u64) {
        result = result / p * (p - 1);
    }
    result as usize
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Normalized additive p-adic valuation of a non-zero rational.
pub fn p_adic_valuation(x: &Rational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let count = |mut v: BigInt| {
        let mut k = 0i64;
        while (&v % &p).is_zero() {
            v /= &p;
            k += 1;
        }
        k
    };
    Some(count(x.numer().abs()) - count(x.denom().clone()))
}

fn rational_is_p_integral(x: &Rational, p: u64) -> bool {
    !(x.denom() % BigInt::from(p)).is_zero()
}

/// Reduction data for Q(zeta_n) = Q[x]/Phi_n: the power-basis coordinates of x^k for
/// phi(n) <= k < n.
struct CycloField {
    phi: usize,
    high_powers: Vec<Vec<i64>>,
}

fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    // x^n - 1 divided by Phi_d for every proper divisor d.
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let divisor = cyclotomic_polynomial(d);
        poly = divide_monic(&poly, &divisor);
    }
    poly
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quot = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &b) in den.iter().enumerate() {
                rem[i + j] -= c * b;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

fn field(n: u32) -> Arc<CycloField> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().unwrap().get(&n) {
        return f.clone();
    }
    let phi_poly = cyclotomic_polynomial(n);
    let phi = phi_poly.len() - 1;
    let mut high_powers = Vec::new();
    // x^phi = -(lower terms of Phi_n)
    let mut cur: Vec<i64> = phi_poly[..phi].iter().map(|c| -c).collect();
    for _ in phi..(n as usize) {
        high_powers.push(cur.clone());
        // multiply by x
        let top = cur[phi - 1];
        let mut next = vec![0i64; phi];
        next[1..phi].copy_from_slice(&cur[..(phi - 1)]);
        for j in 0..phi {
            next[j] = next[j]
                .checked_sub(top.checked_mul(phi_poly[j]).expect("cyclotomic reduction overflow"))
                .expect("cyclotomic reduction overflow");
        }
        cur = next;
    }
    let f = Arc::new(CycloField { phi, high_powers });
    cache.lock().unwrap().insert(n, f.clone());
    f
}

/// An exact element of Q(zeta_n), stored in the power basis modulo Phi_n.
#[derive(Clone)]
pub struct CycloNumber {
    conductor: u32,
    coeffs: Vec<Rational>,
}

impl CycloNumber {
    pub fn zero(conductor: u32) -> Self {
        assert!(conductor >= 1);
        CycloNumber { conductor, coeffs: vec![Rational::zero(); euler_phi(conductor)] }
    }

    pub fn one(conductor: u32) -> Self {
        Self::from_rational(conductor, Rational::one())
    }

    pub fn from_rational(conductor: u32, q: Rational) -> Self {
        let mut z = Self::zero(conductor);
        z.coeffs[0] = q;
        z
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(1, rat(n))
    }

    pub fn rational(q: Rational) -> Self {
        Self::from_rational(1, q)
    }

    /// zeta_n^k.
    pub fn zeta_pow(conductor: u32, k: i64) -> Self {
        let n = conductor as i64;
        let mut raw = vec![Rational::zero(); conductor as usize];
        raw[k.rem_euclid(n) as usize] = Rational::one();
        Self::reduce(conductor, raw)
    }

    pub fn zeta(conductor: u32) -> Self {
        Self::zeta_pow(conductor, 1)
    }

    /// Builds an element from power-basis coefficients of length phi(n).
    pub fn from_coeffs(conductor: u32, coeffs: Vec<Rational>) -> Self {
        assert_eq!(coeffs.len(), euler_phi(conductor), "coefficient vector must have length phi(n)");
        CycloNumber { conductor, coeffs }
    }

    /// Reduces a polynomial of degree < n in zeta_n.
    fn reduce(conductor: u32, mut raw: Vec<Rational>) -> Self {
        let f = field(conductor);
        debug_assert_eq!(raw.len(), conductor as usize);
        let high = raw.split_off(f.phi);
        for (k, c) in high.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, &r) in f.high_powers[k].iter().enumerate() {
                if r != 0 {
                    raw[j] += &c * BigInt::from(r);
                }
            }
        }
        CycloNumber { conductor, coeffs: raw }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    pub fn is_one(&self) -> bool {
        self.is_rational() && self.coeffs[0].is_one()
    }

    /// Image under Q(zeta_m) -> Q(zeta_n), m | n.
    pub fn lift(&self, n: u32) -> Self {
        if n == self.conductor {
            return self.clone();
        }
        assert!(n.is_multiple_of(self.conductor), "cannot lift conductor {} to {}", self.conductor, n);
        let step = (n / self.conductor) as usize;
        let mut raw = vec![Rational::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[i * step] = c.clone();
        }
        Self::reduce(n, raw)
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        if self.conductor == other.conductor {
            return (self.clone(), other.clone());
        }
        let n = lcm_u32(self.conductor, other.conductor);
        (self.lift(n), other.lift(n))
    }

    fn raw_mul(&self, other: &Self) -> Self {
        let n = self.conductor as usize;
        let mut raw = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    raw[(i + j) % n] += a * b;
                }
            }
        }
        Self::reduce(self.conductor, raw)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CycloNumber { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    pub fn inv(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if let Some(q) = self.to_rational() {
            return Ok(Self::from_rational(self.conductor, q.recip()));
        }
        // Solve (multiplication by self) * y = 1 in the power basis.
        let phi = self.coeffs.len();
        let columns: Vec<CycloNumber> =
            (0..phi).map(|j| self.raw_mul(&Self::zeta_pow(self.conductor, j as i64))).collect();
        let matrix: Vec<Vec<Rational>> =
            (0..phi).map(|i| (0..phi).map(|j| columns[j].coeffs[i].clone()).collect()).collect();
        let mut rhs = vec![Rational::zero(); phi];
        rhs[0] = Rational::one();
        let y = crate::linalg::solve(&matrix, &rhs).ok_or(ArithError::DivisionByZero)?;
        Ok(CycloNumber { conductor: self.conductor, coeffs: y })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.conductor);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Applies zeta_n -> zeta_n^a.
    pub fn galois_act(&self, a: i64) -> Result<Self, ArithError> {
        let n = self.conductor as i64;
        if (a.rem_euclid(n) as u64).gcd(&(n as u64)) != 1 && n > 1 {
            return Err(ArithError::InvalidUnit { a, n: self.conductor });
        }
        let mut raw = vec![Rational::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[(a * i as i64).rem_euclid(n) as usize] += c;
        }
        Ok(Self::reduce(self.conductor, raw))
    }

    /// Complex conjugation (the automorphism zeta -> zeta^{-1}).
    pub fn conj(&self) -> Self {
        self.galois_act(-1).expect("-1 is always a unit")
    }

    /// True iff the value is fixed by complex conjugation under every embedding.
    pub fn is_totally_real(&self) -> bool {
        self.conj() == *self
    }

    /// True iff every coefficient is p-integral. The power basis spans the full ring of
    /// integers Z[zeta_n], so this is integrality at every prime above p.
    pub fn is_p_integral(&self, p: u64) -> Result<bool, ArithError> {
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        Ok(self.coeffs.iter().all(|c| rational_is_p_integral(c, p)))
    }

    /// Non-zero, and both the value and its inverse are p-integral.
    pub fn is_p_unit(&self, p: u64) -> Result<bool, ArithError> {
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        if self.is_zero() {
            return Ok(false);
        }
        Ok(self.is_p_integral(p)? && self.inv()?.is_p_integral(p)?)
    }

    /// Rewrites the value over the smallest conductor whose field contains it.
    pub fn minimize(&self) -> Self {
        if self.is_rational() {
            return Self::from_rational(1, self.coeffs[0].clone());
        }
        let n = self.conductor;
        for m in divisors(n) {
            if m == n {
                break;
            }
            let fixed = (1..n as i64)
                .filter(|a| (*a as u64).gcd(&(n as u64)) == 1 && a.rem_euclid(m as i64) == 1 % m as i64)
                .all(|a| self.galois_act(a).map(|y| y.coeffs == self.coeffs).unwrap_or(false));
            if !fixed {
                continue;
            }
            let phi_m = euler_phi(m);
            let basis: Vec<CycloNumber> = (0..phi_m).map(|i| Self::zeta_pow(m, i as i64).lift(n)).collect();
            let matrix: Vec<Vec<Rational>> = (0..self.coeffs.len())
                .map(|r| basis.iter().map(|b| b.coeffs[r].clone()).collect())
                .collect();
            if let Some(sol) = crate::linalg::solve(&matrix, &self.coeffs) {
                return CycloNumber { conductor: m, coeffs: sol };
            }
        }
        self.clone()
    }

    /// Lexicographic comparison of power-basis coefficients at the common conductor.
    pub fn cmp_lex(&self, other: &Self) -> Ordering {
        let (a, b) = self.common(other);
        a.coeffs.cmp(&b.coeffs)
    }

    /// Certified sign of a totally real value under the embedding zeta_n -> exp(2 pi i a / n).
    pub fn certified_sign(&self, embedding: i64) -> Result<SignCertificate, ArithError> {
        self.certified_sign_from(embedding, 32)
    }

    /// As [`certified_sign`](Self::certified_sign), starting the interval refinement at
    /// `start_bits` of precision.
    pub fn certified_sign_from(&self, embedding: i64, start_bits: u32) -> Result<SignCertificate, ArithError> {
        let n = self.conductor;
        let image = self.galois_act(embedding)?;
        let conj = self.galois_act(-embedding)?;
        if image != conj {
            return Err(ArithError::NotReal(embedding));
        }
        if image.is_zero() {
            return Ok(SignCertificate {
                value: self.clone(),
                embedding,
                sign: Sign::Zero,
                precision_bits: 0,
                lower: Rational::zero(),
                upper: Rational::zero(),
            });
        }
        let mut bits = start_bits.max(8);
        loop {
            let pi = pi_enclosure(bits);
            let mut lo = Rational::zero();
            let mut hi = Rational::zero();
            for (k, c) in image.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (clo, chi) = cos_two_pi_enclosure(k as u64, n as u64, &pi, bits);
                if c.is_positive() {
                    lo += c * &clo;
                    hi += c * &chi;
                } else {
                    lo += c * &chi;
                    hi += c * &clo;
                }
            }
            if lo.is_positive() || hi.is_negative() {
                let sign = if lo.is_positive() { Sign::Positive } else { Sign::Negative };
                return Ok(SignCertificate { value: self.clone(), embedding, sign, precision_bits: bits, lower: lo, upper: hi });
            }
            bits *= 2;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// Sign of a real cyclotomic number together with the rational enclosure
/// `[lower, upper]` that certified it.
#[derive(Debug, Clone)]
pub struct SignCertificate {
    pub value: CycloNumber,
    pub embedding: i64,
    pub sign: Sign,
    pub precision_bits: u32,
    pub lower: Rational,
    pub upper: Rational,
}

fn dyadic_floor(x: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    Rational::new((x * Rational::from_integer(scale.clone())).floor().to_integer(), scale)
}

fn dyadic_ceil(x: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    Rational::new((x * Rational::from_integer(scale.clone())).ceil().to_integer(), scale)
}

/// Enclosure of arctan(1/q) by consecutive partial sums of the alternating series.
fn arctan_inv_enclosure(q: i64, bits: u32) -> (Rational, Rational) {
    let x = ratio(1, q);
    let x2 = &x * &x;
    let eps = Rational::new(BigInt::one(), BigInt::one() << (bits + 8));
    let mut power = x.clone();
    let mut sum = Rational::zero();
    let mut k = 0i64;
    loop {
        let term = &power / rat(2 * k + 1);
        let next = if k % 2 == 0 { &sum + &term } else { &sum - &term };
        let done = term < eps;
        let prev = std::mem::replace(&mut sum, next);
        if done {
            return if prev < sum { (prev, sum) } else { (sum, prev) };
        }
        power = &power * &x2;
        k += 1;
    }
}

fn pi_enclosure(bits: u32) -> (Rational, Rational) {
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    let (a_lo, a_hi) = arctan_inv_enclosure(5, bits);
    let (b_lo, b_hi) = arctan_inv_enclosure(239, bits);
    let lo = rat(16) * a_lo - rat(4) * b_hi;
    let hi = rat(16) * a_hi - rat(4) * b_lo;
    (dyadic_floor(&lo, bits + 4), dyadic_ceil(&hi, bits + 4))
}

/// Enclosure of cos(theta) for rational 0 <= theta < 2 by bracketing partial sums.
fn cos_enclosure(theta: &Rational, bits: u32) -> (Rational, Rational) {
    let t2 = theta * theta;
    let eps = Rational::new(BigInt::one(), BigInt::one() << (bits + 8));
    let mut term = Rational::one();
    let mut sum = Rational::one();
    let mut k = 1i64;
    loop {
        term = &term * &t2 / rat((2 * k - 1) * (2 * k));
        let next = if k % 2 == 1 { &sum - &term } else { &sum + &term };
        let prev = std::mem::replace(&mut sum, next);
        if term < eps {
            let (lo, hi) = if prev < sum { (prev, sum) } else { (sum, prev) };
            return (dyadic_floor(&lo, bits + 4), dyadic_ceil(&hi, bits + 4));
        }
        k += 1;
    }
}

/// Enclosure of cos(2 pi k / n).
fn cos_two_pi_enclosure(k: u64, n: u64, pi: &(Rational, Rational), bits: u32) -> (Rational, Rational) {
    let mut num = k % n;
    if 2 * num > n {
        num = n - num;
    }
    // now k/n in [0, 1/2]
    let (num, den, negate) = if 4 * num > n { (n - 2 * num, 2 * n, true) } else { (num, n, false) };
    if num == 0 {
        return if negate { (rat(-1), rat(-1)) } else { (rat(1), rat(1)) };
    }
    if 4 * num == den {
        return (Rational::zero(), Rational::zero());
    }
    let t = ratio(num as i64, den as i64);
    let theta_lo = rat(2) * &pi.0 * &t;
    let theta_hi = rat(2) * &pi.1 * &t;
    // cos is decreasing on [0, pi/2 + small]
    let lo = cos_enclosure(&theta_hi, bits).0;
    let hi = cos_enclosure(&theta_lo, bits).1;
    if negate {
        (-hi, -lo)
    } else {
        (lo, hi)
    }
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycloNumber {}

impl<'a> Add<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: &'a CycloNumber) -> CycloNumber {
        if self.conductor == rhs.conductor {
            return CycloNumber {
                conductor: self.conductor,
                coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
            };
        }
        let (a, b) = self.common(rhs);
        &a + &b
    }
}

impl<'a> Sub<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: &'a CycloNumber) -> CycloNumber {
        if self.conductor == rhs.conductor {
            return CycloNumber {
                conductor: self.conductor,
                coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
            };
        }
        let (a, b) = self.common(rhs);
        &a - &b
    }
}

impl<'a> Mul<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: &'a CycloNumber) -> CycloNumber {
        if let Some(q) = rhs.to_rational() {
            return self.scale(&q);
        }
        if let Some(q) = self.to_rational() {
            return rhs.scale(&q);
        }
        if self.conductor == rhs.conductor {
            return self.raw_mul(rhs);
        }
        let (a, b) = self.common(rhs);
        a.raw_mul(&b)
    }
}

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycloNumber> for CycloNumber {
            type Output = CycloNumber;
            fn $m(self, rhs: CycloNumber) -> CycloNumber {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CycloNumber> for CycloNumber {
            type Output = CycloNumber;
            fn $m(self, rhs: &'a CycloNumber) -> CycloNumber {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        -&self
    }
}

impl From<Rational> for CycloNumber {
    fn from(q: Rational) -> Self {
        CycloNumber::rational(q)
    }
}

impl From<i64> for CycloNumber {
    fn from(n: i64) -> Self {
        CycloNumber::from_int(n)
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.minimize();
        let mut first = true;
        for (i, c) in m.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z{}", m.conductor)?,
                _ => write!(f, "{c}*z{}^{i}", m.conductor)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNumber({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct CycloJson {
    conductor: u32,
    coeffs: Vec<String>,
}

impl Serialize for CycloNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let m = self.minimize();
        CycloJson { conductor: m.conductor, coeffs: m.coeffs.iter().map(|c| c.to_string()).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = CycloJson::deserialize(d)?;
        if j.conductor == 0 {
            return Err(D::Error::custom("conductor must be positive"));
        }
        let phi = euler_phi(j.conductor);
        if j.coeffs.len() != phi {
            return Err(D::Error::custom(format!("expected {phi} coefficients for conductor {}", j.conductor)));
        }
        let coeffs = j
            .coeffs
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        Ok(CycloNumber { conductor: j.conductor, coeffs })
    }
}

/// Serializes a rational as a "p/q" string.
pub fn rational_to_json(q: &Rational) -> serde_json::Value {
    serde_json::Value::String(q.to_string())
}

pub fn rational_to_i64(q: &Rational) -> Option<i64> {
    q.is_integer().then(|| q.to_integer().to_i64()).flatten()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> CycloNumber {
        CycloNumber::zeta_pow(n, k)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(9), vec![1, 0, 0, 1, 0, 0, 1]);
    }

    #[test]
    fn sum_of_primitive_cube_roots() {
        assert_eq!(&z(3, 1) + &z(3, 2), CycloNumber::from_int(-1));
    }

    #[test]
    fn inverse_of_one_plus_i() {
        let x = &CycloNumber::one(4) + &z(4, 1);
        let expected = (&CycloNumber::one(4) - &z(4, 1)).scale(&ratio(1, 2));
        assert_eq!(x.inv().unwrap(), expected);
        assert!((&x * &expected).is_one());
        assert_eq!(CycloNumber::zero(4).inv(), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn mixed_conductor_arithmetic() {
        // zeta_4 = zeta_12^3 and zeta_3 = zeta_12^4, so zeta_4 * zeta_3 = zeta_12^7
        assert_eq!(&z(4, 1) * &z(3, 1), z(12, 7));
        assert_eq!(z(6, 2), z(3, 1));
        assert_eq!(z(2, 1), CycloNumber::from_int(-1));
    }

    #[test]
    fn galois_action() {
        assert_eq!(z(3, 1).galois_act(2).unwrap(), z(3, 2));
        assert!(matches!(z(6, 1).galois_act(3), Err(ArithError::InvalidUnit { .. })));
        // zeta5 + zeta5^-1 is fixed by conjugation, zeta5 alone is not
        let real = &z(5, 1) + &z(5, 4);
        assert_eq!(real.galois_act(-1).unwrap(), real);
        assert_eq!(real.coeffs(), &[rat(-1), rat(0), rat(-1), rat(-1)]);
        assert_ne!(z(5, 1).galois_act(-1).unwrap(), z(5, 1));
    }

    #[test]
    fn p_integrality() {
        let x = &CycloNumber::rational(ratio(1, 3)) + &z(5, 1);
        assert!(x.is_p_integral(5).unwrap());
        assert!(!x.is_p_integral(3).unwrap());
        assert_eq!(x.is_p_integral(4), Err(ArithError::NotPrime(4)));
        assert!(CycloNumber::from_int(7).is_p_unit(5).unwrap());
        assert!(!CycloNumber::from_int(10).is_p_unit(5).unwrap());
        // 1 - zeta_5 has norm 5: a unit away from 5, not at 5
        let y = &CycloNumber::one(5) - &z(5, 1);
        assert!(y.is_p_unit(7).unwrap());
        assert!(!y.is_p_unit(5).unwrap());
    }

    #[test]
    fn signs() {
        // 2cos(2pi/5) = (sqrt5 - 1)/2 > 0, root of x^2 + x - 1
        let x = &z(5, 1) + &z(5, 4);
        assert!((&(&x * &x) + &x) == CycloNumber::one(1));
        let cert = x.certified_sign(1).unwrap();
        assert_eq!(cert.sign, Sign::Positive);
        assert!(cert.lower > Rational::zero());
        // embedding 2 gives 2cos(4pi/5) < 0
        assert_eq!(x.certified_sign(2).unwrap().sign, Sign::Negative);
        assert_eq!(CycloNumber::zero(5).certified_sign(1).unwrap().sign, Sign::Zero);
        assert_eq!(z(5, 1).certified_sign(1).unwrap_err(), ArithError::NotReal(1));
        // sqrt(2) = zeta8 + zeta8^7
        let s2 = &z(8, 1) + &z(8, 7);
        assert_eq!(s2.certified_sign(1).unwrap().sign, Sign::Positive);
        assert_eq!(s2.certified_sign(3).unwrap().sign, Sign::Negative);
    }

    #[test]
    fn close_to_zero_needs_more_bits() {
        // sqrt(2) - 99/70 ~ -7.2e-5
        let s2 = &z(8, 1) + &z(8, 7);
        let x = &s2 - &CycloNumber::rational(ratio(99, 70));
        let cert = x.certified_sign_from(1, 8).unwrap();
        assert_eq!(cert.sign, Sign::Negative);
        assert!(cert.precision_bits > 8);
        let y = &s2 - &CycloNumber::rational(ratio(140, 99));
        assert_eq!(y.certified_sign_from(1, 8).unwrap().sign, Sign::Positive);
    }

    #[test]
    fn minimize_conductor() {
        let x = z(12, 4);
        let m = x.minimize();
        assert_eq!(m.conductor(), 3);
        assert_eq!(m, x);
        assert_eq!(CycloNumber::from_int(5).lift(60).minimize().conductor(), 1);
        let s2 = &z(8, 1) + &z(8, 7);
        assert_eq!(s2.lift(24).minimize().conductor(), 8);
    }

    #[test]
    fn json_round_trip() {
        let x = &CycloNumber::rational(ratio(1, 3)) + &z(5, 2);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"conductor":5,"coeffs":["1/3","0","1","0"]}"#);
        let y: CycloNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        assert!(serde_json::from_str::<CycloNumber>(r#"{"conductor":5,"coeffs":["1"]}"#).is_err());
    }

    #[test]
    fn valuations() {
        assert_eq!(p_adic_valuation(&ratio(12, 5), 2), Some(2));
        assert_eq!(p_adic_valuation(&ratio(12, 5), 5), Some(-1));
        assert_eq!(p_adic_valuation(&rat(0), 5), None);
    }
}
