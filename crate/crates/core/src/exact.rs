//! Exact counts and densities.
//!
//! Counts are arbitrary-precision integers and densities are rationals `h / N^k`
//! kept with the denominator in factored form. Floats only exist as views.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// Number of homomorphisms `h_H(G)`.
pub type HomCount = BigUint;

/// Homomorphism density `t_H(G) = h_H(G) / N^{|H|}`.
#[derive(Clone, Debug)]
pub struct Density {
    numerator: BigUint,
    base: u64,
    exponent: u32,
}

impl Density {
    pub fn new(numerator: BigUint, base: u64, exponent: u32) -> Self {
        Density {
            numerator,
            base,
            exponent,
        }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    /// `N` of the denominator `N^k`.
    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn denominator(&self) -> BigUint {
        BigUint::from(self.base).pow(self.exponent)
    }

    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.numerator.clone()),
            BigInt::from(self.denominator()),
        )
    }

    /// Correctly rounded binary view of the exact value.
    pub fn to_f64(&self) -> f64 {
        self.to_ratio().to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn pow(&self, s: u32) -> Density {
        Density {
            numerator: self.numerator.pow(s),
            base: self.base,
            exponent: self.exponent * s,
        }
    }
}

impl PartialEq for Density {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Density {}

impl PartialOrd for Density {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Density {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.numerator * other.denominator()).cmp(&(&other.numerator * self.denominator()))
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&ratio_string(&self.to_ratio()))
    }
}

/// `a/b` in lowest terms, always with an explicit denominator.
pub fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `a/b`, `a` or a finite decimal such as `0.25`.
pub fn parse_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().ok()?;
        let b: BigInt = b.trim().parse().ok()?;
        if b.is_zero() {
            return None;
        }
        return Some(BigRational::new(a, b));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit()) || frac.is_empty() {
            return None;
        }
        let digits = format!(
            "{}{}",
            if int_digits.is_empty() {
                "0"
            } else {
                int_digits
            },
            frac
        );
        let mut numer: BigInt = digits.parse().ok()?;
        if neg {
            numer = -numer;
        }
        let denom = BigInt::from(10u32).pow(frac.len() as u32);
        return Some(BigRational::new(numer, denom));
    }
    let a: BigInt = s.parse().ok()?;
    Some(BigRational::from_integer(a))
}

pub fn ratio_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn ratio_of(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn ratio_int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn big(n: impl Into<BigUint>) -> BigUint {
    n.into()
}

/// Nonnegative rational `numerator / denominator` as unsigned parts.
pub(crate) fn ratio_parts(r: &BigRational) -> (BigUint, BigUint) {
    debug_assert!(!r.is_negative());
    (r.numer().magnitude().clone(), r.denom().magnitude().clone())
}

/// `r^e` for a nonnegative integer exponent.
pub fn ratio_pow(r: &BigRational, e: u32) -> BigRational {
    num_traits::pow(r.clone(), e as usize)
}

/// Rational rendered as exact string plus float view.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactValue(pub BigRational);

impl From<BigRational> for ExactValue {
    fn from(r: BigRational) -> Self {
        ExactValue(r)
    }
}

impl From<&Density> for ExactValue {
    fn from(d: &Density) -> Self {
        ExactValue(d.to_ratio())
    }
}

impl Serialize for ExactValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ExactValue", 2)?;
        st.serialize_field("exact", &ratio_string(&self.0))?;
        st.serialize_field("float", &float_view(ratio_f64(&self.0)))?;
        st.end()
    }
}

/// JSON cannot hold NaN or infinities; those render as null.
fn float_view(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// Serializes a big integer as a decimal string.
pub fn serialize_big<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Accumulator type for exact counting kernels: `u128` when the caller has proven
/// no intermediate value can reach 2^127, otherwise `BigUint`.
pub(crate) trait Acc: Clone + Send + Sync + Zero + One + 'static {
    fn from_u64(x: u64) -> Self;
    fn add_ref(&mut self, other: &Self);
    fn mul_ref(&self, other: &Self) -> Self;
    fn into_big(self) -> BigUint;
}

impl Acc for u128 {
    #[inline]
    fn from_u64(x: u64) -> Self {
        x as u128
    }
    #[inline]
    fn add_ref(&mut self, other: &Self) {
        *self += *other;
    }
    #[inline]
    fn mul_ref(&self, other: &Self) -> Self {
        *self * *other
    }
    fn into_big(self) -> BigUint {
        BigUint::from(self)
    }
}

impl Acc for BigUint {
    fn from_u64(x: u64) -> Self {
        BigUint::from(x)
    }
    fn add_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn into_big(self) -> BigUint {
        self
    }
}

/// True when `base^exp < 2^127`, so that `u128` accumulation of anything bounded by
/// `base^exp` cannot overflow.
pub(crate) fn fits_u128(base: u64, exp: u32) -> bool {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        match acc.checked_mul(base as u128) {
            Some(x) if x < (1u128 << 127) => acc = x,
            _ => return false,
        }
    }
    true
}

/// Falling factorial `n (n-1) ... (n-k+1)`.
pub fn falling_factorial(n: u64, k: u32) -> BigUint {
    (0..k as u64).fold(BigUint::one(), |acc, i| {
        if i >= n {
            BigUint::zero()
        } else {
            acc * BigUint::from(n - i)
        }
    })
}

/// Number of length-`len` sequences over a `j`-element set that use every element:
/// `j! · S(len, j)`.
pub fn surjections(len: u32, j: u32) -> BigUint {
    // inclusion-exclusion: sum_i (-1)^i C(j,i) (j-i)^len
    let mut total = BigInt::zero();
    let mut binom = BigInt::one();
    for i in 0..=j {
        let term = &binom * BigInt::from(j - i).pow(len);
        if i % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
        binom = binom * BigInt::from(j - i) / BigInt::from(i + 1);
    }
    total.to_biguint().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_display_reduces() {
        let d = Density::new(BigUint::from(12u32), 4, 2);
        assert_eq!(d.to_string(), "3/4");
        let one = Density::new(BigUint::from(9u32), 3, 2);
        assert_eq!(one.to_string(), "1/1");
    }

    #[test]
    fn density_ordering_across_bases() {
        let a = Density::new(BigUint::from(2u32), 3, 1); // 2/3
        let b = Density::new(BigUint::from(12u32), 4, 2); // 3/4
        assert!(a < b);
        assert_eq!(
            Density::new(BigUint::from(36u32), 9, 2),
            Density::new(BigUint::from(6u32), 3, 2).pow(2)
        );
    }

    #[test]
    fn float_view_is_correctly_rounded() {
        let d = Density::new(BigUint::from(1u32), 3, 40);
        let exact = d.to_ratio();
        let f = d.to_f64();
        // neighbours of f bracket the exact value
        let lo = BigRational::from_float(f64::from_bits(f.to_bits() - 1)).unwrap();
        let hi = BigRational::from_float(f64::from_bits(f.to_bits() + 1)).unwrap();
        assert!(lo < exact && exact < hi);
    }

    #[test]
    fn parse_ratio_forms() {
        assert_eq!(parse_ratio("3/12"), Some(ratio_of(1, 4)));
        assert_eq!(parse_ratio("0.25"), Some(ratio_of(1, 4)));
        assert_eq!(parse_ratio("2"), Some(ratio_int(2)));
        assert_eq!(parse_ratio("1/0"), None);
        assert_eq!(parse_ratio("x"), None);
    }

    #[test]
    fn surjection_numbers() {
        // 3^3 sequences split by support size: 3 + 18 + 6
        assert_eq!(surjections(3, 1), BigUint::from(1u32));
        assert_eq!(surjections(3, 2), BigUint::from(6u32));
        assert_eq!(surjections(3, 3), BigUint::from(6u32));
        assert_eq!(surjections(2, 3), BigUint::zero());
        assert_eq!(surjections(0, 0), BigUint::one());
    }

    #[test]
    fn u128_guard() {
        assert!(fits_u128(2, 126));
        assert!(!fits_u128(2, 127));
        assert!(fits_u128(2000, 11));
        assert!(!fits_u128(2000, 12));
    }
}
