//! Exact scalar fields: prime fields `GF(p)` and the rationals.
//!
//! Everything downstream is generic over [`Field`]. Prime fields carry their
//! modulus as a const parameter so that `zero()`/`one()` need no context; the
//! runtime side of a field lives in [`FieldDescriptor`].

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot enumerate the elements of {0}")]
    UnsupportedEnumeration(FieldDescriptor),
    #[error("cannot parse scalar literal {literal:?}: {reason}")]
    BadLiteral { literal: String, reason: String },
}

/// Runtime description of a ground field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum FieldDescriptor {
    #[serde(rename = "gf")]
    Prime { p: u64 },
    #[serde(rename = "q")]
    Rationals,
}

impl FieldDescriptor {
    pub fn prime(p: u64) -> Result<Self, ScalarError> {
        if is_prime(p) {
            Ok(FieldDescriptor::Prime { p })
        } else {
            Err(ScalarError::NotPrime(p))
        }
    }

    /// 0 for the rationals.
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldDescriptor::Prime { p } => *p,
            FieldDescriptor::Rationals => 0,
        }
    }

    pub fn is_char_two(&self) -> bool {
        self.characteristic() == 2
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldDescriptor::Prime { .. })
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldDescriptor::Prime { p } => Some(*p),
            FieldDescriptor::Rationals => None,
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Prime { p } => write!(f, "GF({p})"),
            FieldDescriptor::Rationals => write!(f, "Q"),
        }
    }
}

pub const fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field.
///
/// The `Ord` instance is the canonical order used to make every enumeration
/// and report deterministic: residues ascending for `GF(p)`, numeric order for
/// the rationals.
pub trait Field:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Eq
    + Ord
    + Hash
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn descriptor() -> FieldDescriptor;

    fn from_i64(v: i64) -> Self;

    fn inverse(&self) -> Result<Self, ScalarError>;

    /// A square root if one exists. Over `GF(p)` the smallest residue is
    /// returned; over the rationals the non-negative root.
    fn sqrt(&self) -> Option<Self>;

    /// Parses `"2"`, `"-1"` or (rationals only) `"1/3"`.
    fn parse_literal(s: &str) -> Result<Self, ScalarError>;

    /// All elements in canonical order, when the field is finite.
    fn elements() -> Option<Vec<Self>> {
        None
    }

    fn div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        Ok(self.clone() * rhs.inverse()?)
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }

    /// `self^e` for a signed exponent; zero to a negative power is an error.
    fn powi(&self, e: i64) -> Result<Self, ScalarError> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inverse()?.pow(e.unsigned_abs()))
        }
    }
}

/// The nonzero elements of a finite field in ascending canonical order.
pub fn enumerate_units<F: Field>() -> Result<Vec<F>, ScalarError> {
    F::elements()
        .map(|all| all.into_iter().filter(|x| !x.is_zero()).collect())
        .ok_or(ScalarError::UnsupportedEnumeration(F::descriptor()))
}

/// Residue class modulo the prime `P`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    const PRIME: () = assert!(is_prime(P as u64), "Fp modulus must be prime");

    pub fn new(v: i64) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::PRIME;
        Fp(v.rem_euclid(P as i64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }
}

impl<const P: u32> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = self.0 + rhs.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp(if self.0 >= rhs.0 { self.0 - rhs.0 } else { self.0 + P - rhs.0 })
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u64 * rhs.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u32> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Fp<P> {
    fn one() -> Self {
        Fp::new(1)
    }
}

impl<const P: u32> Field for Fp<P> {
    fn descriptor() -> FieldDescriptor {
        FieldDescriptor::Prime { p: P as u64 }
    }

    fn from_i64(v: i64) -> Self {
        Fp::new(v)
    }

    fn inverse(&self) -> Result<Self, ScalarError> {
        if self.0 == 0 {
            return Err(ScalarError::DivisionByZero);
        }
        // Fermat: x^(p-2)
        Ok(self.pow(P as u64 - 2))
    }

    fn sqrt(&self) -> Option<Self> {
        (0..P).map(Fp).find(|r| *r * *r == *self)
    }

    fn parse_literal(s: &str) -> Result<Self, ScalarError> {
        let t = s.trim();
        if let Some((num, den)) = t.split_once('/') {
            let n = parse_int(num, s)?;
            let d = parse_int(den, s)?;
            return Fp::new(n).div(&Fp::new(d)).map_err(|_| ScalarError::BadLiteral {
                literal: s.to_string(),
                reason: format!("denominator vanishes mod {P}"),
            });
        }
        Ok(Fp::new(parse_int(t, s)?))
    }

    fn elements() -> Option<Vec<Self>> {
        Some((0..P).map(Fp).collect())
    }
}

fn parse_int(t: &str, literal: &str) -> Result<i64, ScalarError> {
    t.trim().parse::<i64>().map_err(|e| ScalarError::BadLiteral {
        literal: literal.to_string(),
        reason: e.to_string(),
    })
}

/// Exact rationals in lowest terms with positive denominator.
pub type Rational = BigRational;

impl Field for BigRational {
    fn descriptor() -> FieldDescriptor {
        FieldDescriptor::Rationals
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn inverse(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            Err(ScalarError::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }

    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        // reduced form, so the root exists iff both parts are perfect squares
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        (&n * &n == *self.numer() && &d * &d == *self.denom()).then(|| BigRational::new(n, d))
    }

    fn parse_literal(s: &str) -> Result<Self, ScalarError> {
        BigRational::from_str(s.trim()).map_err(|e| ScalarError::BadLiteral {
            literal: s.to_string(),
            reason: e.to_string(),
        })
    }
}

pub type Gf2 = Fp<2>;
pub type Gf3 = Fp<3>;
pub type Gf5 = Fp<5>;
pub type Gf7 = Fp<7>;

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(Gf3::new(2).inverse().unwrap(), Gf3::new(2));
        assert_eq!(q(3, 4).inverse().unwrap(), q(4, 3));
        assert_eq!(Gf7::new(3).inverse().unwrap(), Gf7::new(5));
        assert_eq!(Gf5::zero().inverse(), Err(ScalarError::DivisionByZero));
        assert_eq!(Rational::zero().inverse(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn gf7_inverse_matches_unit_scan() {
        for x in 1..7 {
            let u = (1..7).find(|u| (x * u) % 7 == 1).unwrap();
            assert_eq!(Gf7::new(x).inverse().unwrap(), Gf7::new(u));
        }
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(Gf7::new(2).sqrt(), Some(Gf7::new(3)));
        assert_eq!(Gf7::new(1).sqrt(), Some(Gf7::new(1)));
        assert_eq!(Rational::one().sqrt(), Some(Rational::one()));
        assert_eq!(Gf7::new(3).sqrt(), None);
        assert_eq!(q(9, 4).sqrt(), Some(q(3, 2)));
        assert_eq!(q(2, 1).sqrt(), None);
        assert_eq!(q(-1, 1).sqrt(), None);
    }

    #[test]
    fn sqrt_presence_matches_squaring_image() {
        fn check<const P: u32>() {
            let squares: Vec<Fp<P>> = (0..P).map(|r| Fp::<P>::new(r as i64)).map(|r| r * r).collect();
            for x in Fp::<P>::elements().unwrap() {
                assert_eq!(x.sqrt().is_some(), squares.contains(&x), "GF({P}) x={x}");
                if let Some(r) = x.sqrt() {
                    assert_eq!(r * r, x);
                }
            }
        }
        check::<2>();
        check::<3>();
        check::<5>();
        check::<7>();
        check::<11>();
        check::<13>();
    }

    #[test]
    fn units_enumeration() {
        assert_eq!(enumerate_units::<Gf2>().unwrap(), vec![Gf2::new(1)]);
        assert_eq!(enumerate_units::<Gf3>().unwrap(), vec![Gf3::new(1), Gf3::new(2)]);
        assert_eq!(
            enumerate_units::<Gf5>().unwrap(),
            (1..5).map(Gf5::new).collect::<Vec<_>>()
        );
        assert_eq!(
            enumerate_units::<Rational>(),
            Err(ScalarError::UnsupportedEnumeration(FieldDescriptor::Rationals))
        );
    }

    #[test]
    fn literals() {
        assert_eq!(Gf5::parse_literal("-1").unwrap(), Gf5::new(4));
        assert_eq!(Gf5::parse_literal("1/2").unwrap(), Gf5::new(3));
        assert_eq!(Rational::parse_literal("2/6").unwrap(), q(1, 3));
        assert!(Gf5::parse_literal("1/5").is_err());
        assert!(Gf5::parse_literal("x").is_err());
        assert_eq!(q(-2, 4).to_string(), "-1/2");
    }

    #[test]
    fn descriptor_json() {
        let d: FieldDescriptor = serde_json::from_str(r#"{"type":"gf","p":5}"#).unwrap();
        assert_eq!(d, FieldDescriptor::Prime { p: 5 });
        let d: FieldDescriptor = serde_json::from_str(r#"{"type":"q"}"#).unwrap();
        assert_eq!(d, FieldDescriptor::Rationals);
        assert_eq!(serde_json::to_string(&Gf3::descriptor()).unwrap(), r#"{"type":"gf","p":3}"#);
        assert!(FieldDescriptor::prime(6).is_err());
        assert!(FieldDescriptor::prime(2).unwrap().is_char_two());
    }

    #[test]
    fn unit_inverse_is_involutive() {
        for u in enumerate_units::<Fp<13>>().unwrap() {
            assert_eq!(u.inverse().unwrap().inverse().unwrap(), u);
            assert_eq!(u * u.inverse().unwrap(), Fp::one());
        }
    }

    fn gf11() -> impl Strategy<Value = Fp<11>> {
        (0i64..11).prop_map(Fp::new)
    }

    fn rat() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..20).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn gf_field_axioms(a in gf11(), b in gf11(), c in gf11()) {
            prop_assert_eq!((a + b) + c, a + (b + c));
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!(a - a, Fp::zero());
            prop_assert_eq!(a + (-a), Fp::zero());
            if !a.is_zero() {
                prop_assert_eq!(a * a.inverse().unwrap(), Fp::one());
            }
        }

        #[test]
        fn rational_field_axioms(a in rat(), b in rat(), c in rat()) {
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert!(a.denom().is_positive());
            if !a.is_zero() {
                prop_assert_eq!(a.clone() * a.inverse().unwrap(), Rational::one());
            }
            let sq = a.clone() * a.clone();
            prop_assert_eq!(sq.sqrt(), Some(a.abs()));
        }
    }
}
