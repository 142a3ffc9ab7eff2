//! Exact arithmetic in `Q(ζ)` for a symbolic primitive `r`-th root of unity `ζ`.
//!
//! Elements are kept in the power basis `1, ζ, …, ζ^{φ(r)-1}` as the remainder
//! modulo the cyclotomic polynomial `Φ_r`, so two elements are equal exactly when
//! their coefficient lists are equal. This is what lets hyperplane membership be
//! decided with zero tolerance.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::complex::{DecoratedSubset, YPoint};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycloError {
    #[error("mismatched roots of unity: r={left} vs r={right}")]
    MismatchedOrder { left: u32, right: u32 },
    #[error("r must be at least 2, got {0}")]
    OrderTooSmall(u32),
    #[error("decoration undefined on element {0}")]
    UndefinedDecoration(usize),
    #[error("element {element} outside [1, {n}]")]
    ElementOutOfRange { element: usize, n: usize },
    #[error("coefficient list has length {got}, expected φ(r) = {expected}")]
    BadLength { got: usize, expected: usize },
}

/// An element of `Z_r`, always reduced into `0..r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RootExponent(u32);

impl RootExponent {
    pub const ZERO: RootExponent = RootExponent(0);

    pub fn new(value: i64, r: u32) -> Self {
        RootExponent(value.rem_euclid(i64::from(r)) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    /// Unreduced value, for deserializers that validate against `r` afterwards.
    pub(crate) fn raw(value: u32) -> Self {
        RootExponent(value)
    }

    pub fn add(self, other: RootExponent, r: u32) -> Self {
        RootExponent((self.0 + other.0) % r)
    }

    pub fn sub(self, other: RootExponent, r: u32) -> Self {
        RootExponent((self.0 + r - other.0 % r) % r)
    }

    pub fn neg(self, r: u32) -> Self {
        RootExponent((r - self.0 % r) % r)
    }
}

impl fmt::Display for RootExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Integer polynomial, coefficients from the constant term upward.
pub type IntPoly = Vec<BigInt>;

fn trim(p: &mut IntPoly) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn mul_int(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact quotient of `num` by the monic `den`; panics if the division is not exact.
fn div_exact_monic(num: &[BigInt], den: &[BigInt]) -> IntPoly {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return vec![BigInt::zero()];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        quot[i] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    trim(&mut quot);
    quot
}

/// The `r`-th cyclotomic polynomial `Φ_r`, computed as
/// `(x^r − 1) / ∏_{d | r, d < r} Φ_d`.
pub fn cyclotomic_polynomial(r: u32) -> IntPoly {
    assert!(r >= 1, "cyclotomic_polynomial needs r >= 1");
    let mut num = vec![BigInt::zero(); r as usize + 1];
    num[0] = BigInt::from(-1);
    num[r as usize] = BigInt::one();
    let mut den: IntPoly = vec![BigInt::one()];
    for d in (1..r).filter(|d| r % d == 0) {
        den = mul_int(&den, &cyclotomic_polynomial(d));
    }
    div_exact_monic(&num, &den)
}

/// Precomputed data for one `r`: `Φ_r` and the canonical forms of `ζ^0 … ζ^{r-1}`.
#[derive(Debug)]
pub struct CycloField {
    r: u32,
    modulus: IntPoly,
    powers: Vec<Vec<Rational>>,
}

impl CycloField {
    fn build(r: u32) -> Self {
        let modulus = cyclotomic_polynomial(r);
        let deg = modulus.len() - 1;
        let mut powers = Vec::with_capacity(r as usize);
        let mut cur = vec![rational::zero(); deg];
        cur[0] = rational::one();
        for _ in 0..r {
            powers.push(cur.clone());
            cur = times_x_mod(&cur, &modulus);
        }
        CycloField { r, modulus, powers }
    }

    /// Shared field data for `r`; built once per process.
    pub fn get(r: u32) -> Result<Arc<CycloField>, CycloError> {
        if r < 2 {
            return Err(CycloError::OrderTooSmall(r));
        }
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        Ok(guard
            .entry(r)
            .or_insert_with(|| Arc::new(CycloField::build(r)))
            .clone())
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// `φ(r)`, the dimension of `Q(ζ)` over `Q`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &IntPoly {
        &self.modulus
    }

    pub fn term(&self, magnitude: &Rational, exp: RootExponent) -> CycloNum {
        let coeffs = self.powers[exp.value() as usize % self.r as usize]
            .iter()
            .map(|c| c * magnitude)
            .collect();
        CycloNum { r: self.r, coeffs }
    }

    /// Reduces an arbitrary polynomial in `ζ` (constant term first) modulo `Φ_r`.
    pub fn reduce(&self, poly: &[Rational]) -> CycloNum {
        let deg = self.degree();
        let mut rem: Vec<Rational> = poly.to_vec();
        if rem.len() < deg {
            rem.resize(deg, rational::zero());
        }
        // Φ_r is monic: eliminate the leading term until the degree drops below φ(r).
        for top in (deg..rem.len()).rev() {
            let c = std::mem::replace(&mut rem[top], rational::zero());
            if c.is_zero() {
                continue;
            }
            for (j, m) in self.modulus[..deg].iter().enumerate() {
                let m = Rational::from_integer(m.clone());
                rem[top - deg + j] -= &c * &m;
            }
        }
        rem.truncate(deg);
        CycloNum { r: self.r, coeffs: rem }
    }
}

fn times_x_mod(p: &[Rational], modulus: &[BigInt]) -> Vec<Rational> {
    let deg = p.len();
    let carry = p[deg - 1].clone();
    let mut out = vec![rational::zero(); deg];
    out[1..deg].clone_from_slice(&p[..deg - 1]);
    if !carry.is_zero() {
        for (j, m) in modulus[..deg].iter().enumerate() {
            out[j] -= &carry * Rational::from_integer(m.clone());
        }
    }
    out
}

/// An element `Σ coeffs[i]·ζ^i` of `Q(ζ)` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycloNum {
    r: u32,
    coeffs: Vec<Rational>,
}

impl CycloNum {
    pub fn zero(r: u32) -> Result<Self, CycloError> {
        let f = CycloField::get(r)?;
        Ok(CycloNum {
            r,
            coeffs: vec![rational::zero(); f.degree()],
        })
    }

    pub fn from_rational(q: Rational, r: u32) -> Result<Self, CycloError> {
        let mut z = Self::zero(r)?;
        z.coeffs[0] = q;
        Ok(z)
    }

    /// Canonical representative of `magnitude·ζ^exp`.
    pub fn from_term(magnitude: &Rational, exp: RootExponent, r: u32) -> Result<Self, CycloError> {
        Ok(CycloField::get(r)?.term(magnitude, exp))
    }

    /// `magnitude·ζ^power` for an unreduced exponent, reduced through `Φ_r`.
    pub fn from_power(magnitude: &Rational, power: usize, r: u32) -> Result<Self, CycloError> {
        let f = CycloField::get(r)?;
        let mut poly = vec![rational::zero(); power + 1];
        poly[power] = magnitude.clone();
        Ok(f.reduce(&poly))
    }

    /// Builds from an explicit canonical coefficient list (length `φ(r)`).
    pub fn from_coeffs(r: u32, coeffs: Vec<Rational>) -> Result<Self, CycloError> {
        let f = CycloField::get(r)?;
        if coeffs.len() != f.degree() {
            return Err(CycloError::BadLength {
                got: coeffs.len(),
                expected: f.degree(),
            });
        }
        Ok(CycloNum { r, coeffs })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    fn check(&self, other: &CycloNum) -> Result<(), CycloError> {
        if self.r != other.r {
            return Err(CycloError::MismatchedOrder {
                left: self.r,
                right: other.r,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &CycloNum) -> Result<CycloNum, CycloError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycloNum { r: self.r, coeffs })
    }

    pub fn add_assign(&mut self, other: &CycloNum) -> Result<(), CycloError> {
        self.check(other)?;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        Ok(())
    }

    pub fn neg(&self) -> CycloNum {
        CycloNum {
            r: self.r,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &CycloNum) -> Result<CycloNum, CycloError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &CycloNum) -> Result<CycloNum, CycloError> {
        self.check(other)?;
        let f = CycloField::get(self.r)?;
        let mut prod = vec![rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        Ok(f.reduce(&prod))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value as a rational, if every non-constant coefficient vanishes.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            if !first {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ if a.is_one() => write!(f, "z^{i}")?,
                _ => write!(f, "{a}*z^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CycloJson {
    r: u32,
    coeffs: Vec<[String; 2]>,
}

impl Serialize for CycloNum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycloJson {
            r: self.r,
            coeffs: self.coeffs.iter().map(rational::to_pair).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = CycloJson::deserialize(d)?;
        let coeffs = j
            .coeffs
            .iter()
            .map(rational::from_pair)
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        CycloNum::from_coeffs(j.r, coeffs).map_err(D::Error::custom)
    }
}

/// `Σ_{i∈I} ζ^{a(i)}·x_i`, evaluated exactly with `x_i = |x_i|·ζ^{branch_i}`.
pub fn hyperplane_eval(x: &YPoint, subset: &DecoratedSubset, r: u32) -> Result<CycloNum, CycloError> {
    let field = CycloField::get(r)?;
    let n = x.len();
    let mut acc = CycloNum::zero(r)?;
    for &i in &subset.set {
        if i == 0 || i > n {
            return Err(CycloError::ElementOutOfRange { element: i, n });
        }
        let a = *subset
            .decoration
            .get(&i)
            .ok_or(CycloError::UndefinedDecoration(i))?;
        let c = &x.coords()[i - 1];
        if c.mag.is_zero() {
            continue;
        }
        acc.add_assign(&field.term(&c.mag, a.add(c.branch, r)))?;
    }
    Ok(acc)
}

/// Whether `x` lies on the hyperplane `Σ_{i∈I} ζ^{a(i)}·x_i = δ^n_{|I|}`.
pub fn on_hyperplane(x: &YPoint, subset: &DecoratedSubset, r: u32) -> Result<bool, CycloError> {
    let value = hyperplane_eval(x, subset, r)?;
    let target = crate::complex::delta(x.len(), subset.set.len());
    Ok(value.as_rational().is_some_and(|q| q == target))
}
