//! Coefficient rings: the scalar trait every matrix, complex and algebra
//! element is generic over, its three implementations (Z, Q, F_p), and the
//! runtime ring description used by the CLI.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::RingError;

/// An exact Euclidean coefficient ring.
///
/// Fields are the degenerate case where every nonzero element is a unit and
/// every division is exact. The `Context` carries whatever runtime data is
/// needed to build elements other than zero (the modulus for F_p).
pub trait Coefficient:
    Clone
    + Debug
    + Display
    + PartialEq
    + Eq
    + Send
    + Sync
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    type Context: Clone + Debug + PartialEq + Send + Sync;

    /// True when every nonzero element is invertible.
    const IS_FIELD: bool;

    fn from_integer(ctx: &Self::Context, n: &BigInt) -> Self;

    fn from_i64(ctx: &Self::Context, n: i64) -> Self {
        Self::from_integer(ctx, &BigInt::from(n))
    }

    fn one(ctx: &Self::Context) -> Self {
        Self::from_i64(ctx, 1)
    }

    fn is_unit(&self) -> bool;

    /// Inverse of a unit, `None` otherwise.
    fn unit_inverse(&self) -> Option<Self>;

    /// Euclidean division: `self = q * divisor + r` with `r` of strictly
    /// smaller norm than `divisor` (or zero).
    fn div_rem_euclid(&self, divisor: &Self) -> (Self, Self);

    /// Compares Euclidean norms. Only meaningful for nonzero operands.
    fn cmp_norm(&self, other: &Self) -> Ordering;

    /// Canonical associate: `|x|` over Z, `1` for nonzero field elements.
    fn normalized(&self) -> Self;

    /// Integer value of a normalized non-unit invariant factor. Fields have
    /// no such factors and return `None`.
    fn invariant_factor(&self) -> Option<BigInt>;

    fn gcd(&self, other: &Self) -> Self {
        let mut x = self.clone();
        let mut y = other.clone();
        while !y.is_zero() {
            let (_, r) = x.div_rem_euclid(&y);
            x = y;
            y = r;
        }
        x.normalized()
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }

    fn add_ref(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }

    /// `self -= factor * x`
    fn sub_mul_assign(&mut self, factor: &Self, x: &Self) {
        let prod = factor.mul_ref(x);
        *self = std::mem::replace(self, Self::zero()) - prod;
    }

    fn pow(&self, ctx: &Self::Context, exp: u32) -> Self {
        let mut acc = Self::one(ctx);
        for _ in 0..exp {
            acc = acc.mul_ref(self);
        }
        acc
    }
}

impl Coefficient for BigInt {
    type Context = ();
    const IS_FIELD: bool = false;

    fn from_integer(_: &(), n: &BigInt) -> Self {
        n.clone()
    }

    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }

    fn unit_inverse(&self) -> Option<Self> {
        self.is_unit().then(|| self.clone())
    }

    fn div_rem_euclid(&self, divisor: &Self) -> (Self, Self) {
        self.div_rem(divisor)
    }

    fn cmp_norm(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }

    fn normalized(&self) -> Self {
        self.abs()
    }

    fn invariant_factor(&self) -> Option<BigInt> {
        Some(self.abs())
    }

    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }

    fn sub_mul_assign(&mut self, factor: &Self, x: &Self) {
        *self -= factor * x;
    }

    fn pow(&self, _: &(), exp: u32) -> Self {
        num_traits::pow::Pow::pow(self, exp)
    }
}

impl Coefficient for BigRational {
    type Context = ();
    const IS_FIELD: bool = true;

    fn from_integer(_: &(), n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn is_unit(&self) -> bool {
        !self.is_zero()
    }

    fn unit_inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }

    fn div_rem_euclid(&self, divisor: &Self) -> (Self, Self) {
        (self / divisor, BigRational::zero())
    }

    fn cmp_norm(&self, _: &Self) -> Ordering {
        Ordering::Equal
    }

    fn normalized(&self) -> Self {
        if self.is_zero() {
            BigRational::zero()
        } else {
            <BigRational as num_traits::One>::one()
        }
    }

    fn invariant_factor(&self) -> Option<BigInt> {
        None
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
}

/// An element of the prime field F_p with the modulus carried alongside.
///
/// The zero produced by [`Zero::zero`] has no modulus attached and acts as
/// the zero of every F_p; all other elements are built through a
/// [`PrimeField`] context. Mixing two different moduli panics.
#[derive(Clone, Copy)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

/// Context for [`Fp`]: the prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField(u64);

/// Largest accepted prime; keeps products inside `u64`.
pub const MAX_PRIME: u64 = u32::MAX as u64;

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, RingError> {
        if !(2..=MAX_PRIME).contains(&p) || !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        Ok(PrimeField(p))
    }

    pub fn modulus(&self) -> u64 {
        self.0
    }

    pub fn element(&self, value: u64) -> Fp {
        Fp {
            value: value % self.0,
            modulus: self.0,
        }
    }
}

impl Fp {
    pub fn value(&self) -> u64 {
        self.value
    }

    fn joint_modulus(&self, other: &Fp) -> u64 {
        match (self.modulus, other.modulus) {
            (0, m) | (m, 0) => m,
            (m, n) if m == n => m,
            (m, n) => panic!("mixed moduli {m} and {n}"),
        }
    }

    fn inverse(&self) -> Option<Fp> {
        if self.value == 0 {
            return None;
        }
        let p = self.modulus;
        // Fermat: v^(p-2)
        let mut base = self.value;
        let mut exp = p - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        Some(Fp {
            value: acc,
            modulus: p,
        })
    }
}

impl PartialEq for Fp {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && (self.value == 0 || self.modulus == other.modulus)
    }
}

impl Eq for Fp {}

impl Hash for Fp {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state);
    }
}

impl Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp {
            value: 0,
            modulus: 0,
        }
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let m = self.joint_modulus(&rhs);
        if m == 0 {
            return Fp::zero();
        }
        Fp {
            value: (self.value + rhs.value) % m,
            modulus: m,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self + (-rhs)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        if self.value == 0 {
            self
        } else {
            Fp {
                value: self.modulus - self.value,
                modulus: self.modulus,
            }
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        let m = self.joint_modulus(&rhs);
        if m == 0 {
            return Fp::zero();
        }
        Fp {
            value: self.value * rhs.value % m,
            modulus: m,
        }
    }
}

impl Coefficient for Fp {
    type Context = PrimeField;
    const IS_FIELD: bool = true;

    fn from_integer(ctx: &PrimeField, n: &BigInt) -> Self {
        let r = n.mod_floor(&BigInt::from(ctx.0));
        ctx.element(r.to_u64().expect("residue fits in u64"))
    }

    fn is_unit(&self) -> bool {
        self.value != 0
    }

    fn unit_inverse(&self) -> Option<Self> {
        self.inverse()
    }

    fn div_rem_euclid(&self, divisor: &Self) -> (Self, Self) {
        let inv = divisor.inverse().expect("division by zero in F_p");
        (*self * inv, Fp::zero())
    }

    fn cmp_norm(&self, _: &Self) -> Ordering {
        Ordering::Equal
    }

    fn normalized(&self) -> Self {
        if self.value == 0 {
            Fp::zero()
        } else {
            Fp {
                value: 1,
                modulus: self.modulus,
            }
        }
    }

    fn invariant_factor(&self) -> Option<BigInt> {
        None
    }

    fn mul_ref(&self, other: &Self) -> Self {
        *self * *other
    }

    fn add_ref(&self, other: &Self) -> Self {
        *self + *other
    }
}

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

/// A concrete ring together with its Temperley–Lieb parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct Ring<T: Coefficient> {
    ctx: T::Context,
    parameter: T,
    powers: Vec<T>,
}

const CACHED_POWERS: u32 = 24;

impl<T: Coefficient> Ring<T> {
    pub fn new(ctx: T::Context, parameter: T) -> Self {
        let mut powers = Vec::with_capacity(CACHED_POWERS as usize + 1);
        let mut acc = T::one(&ctx);
        for _ in 0..=CACHED_POWERS {
            powers.push(acc.clone());
            acc = acc.mul_ref(&parameter);
        }
        Ring {
            ctx,
            parameter,
            powers,
        }
    }

    pub fn context(&self) -> &T::Context {
        &self.ctx
    }

    pub fn parameter(&self) -> &T {
        &self.parameter
    }

    pub fn zero(&self) -> T {
        T::zero()
    }

    pub fn one(&self) -> T {
        T::one(&self.ctx)
    }

    pub fn int(&self, n: i64) -> T {
        T::from_i64(&self.ctx, n)
    }

    /// `a^k`, the weight of `k` closed loops.
    pub fn loop_weight(&self, k: u32) -> T {
        match self.powers.get(k as usize) {
            Some(p) => p.clone(),
            None => self.parameter.pow(&self.ctx, k),
        }
    }

    /// `(-1)^k a^loops`
    pub fn signed_loop_weight(&self, negative: bool, loops: u32) -> T {
        let w = self.loop_weight(loops);
        if negative {
            -w
        } else {
            w
        }
    }
}

impl Ring<BigInt> {
    pub fn integers(a: impl Into<BigInt>) -> Self {
        Ring::new((), a.into())
    }
}

impl Ring<BigRational> {
    pub fn rationals(a: BigRational) -> Self {
        Ring::new((), a)
    }
}

impl Ring<Fp> {
    pub fn prime_field(p: u64, a: i64) -> Result<Self, RingError> {
        let field = PrimeField::new(p)?;
        let a = Fp::from_i64(&field, a);
        Ok(Ring::new(field, a))
    }
}

/// Runtime description of a coefficient ring and parameter.
///
/// `Modular` with a prime modulus computes directly over F_p; with a
/// composite modulus results are obtained from the integer computation by
/// universal coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Integers { a: BigInt },
    Rationals { a: BigRational },
    Modular { modulus: u64, a: u64 },
}

impl RingSpec {
    pub fn integers(a: impl Into<BigInt>) -> Self {
        RingSpec::Integers { a: a.into() }
    }

    pub fn rationals(a: BigRational) -> Self {
        RingSpec::Rationals { a }
    }

    pub fn modular(modulus: u64, a: &BigInt) -> Result<Self, RingError> {
        if !(2..=MAX_PRIME).contains(&modulus) {
            return Err(RingError::BadModulus(modulus));
        }
        let a = a
            .mod_floor(&BigInt::from(modulus))
            .to_u64()
            .expect("residue fits");
        Ok(RingSpec::Modular { modulus, a })
    }

    /// Parses `Z`, `Q`, `Fp:<p>` (prime required) or `Zmod:<m>` together
    /// with a parameter literal (`3`, `-1`, `1/2`).
    pub fn parse(ring: &str, parameter: &str) -> Result<Self, RingError> {
        let ring = ring.trim();
        let parameter = parameter.trim();
        let rational = || {
            BigRational::from_str(parameter)
                .map_err(|_| RingError::BadParameter(parameter.to_string()))
        };
        let integer = || {
            BigInt::from_str(parameter).map_err(|_| RingError::BadParameter(parameter.to_string()))
        };
        match ring {
            "Z" => Ok(RingSpec::integers(integer()?)),
            "Q" => Ok(RingSpec::rationals(rational()?)),
            _ => {
                if let Some(p) = ring.strip_prefix("Fp:") {
                    let p: u64 = p.parse().map_err(|_| RingError::UnknownRing(ring.into()))?;
                    PrimeField::new(p)?;
                    RingSpec::modular(p, &integer()?)
                } else if let Some(m) = ring.strip_prefix("Zmod:") {
                    let m: u64 = m.parse().map_err(|_| RingError::UnknownRing(ring.into()))?;
                    RingSpec::modular(m, &integer()?)
                } else {
                    Err(RingError::UnknownRing(ring.into()))
                }
            }
        }
    }

    /// Short ring name: `Z`, `Q`, `F_p` or `Z/m`.
    pub fn ring_name(&self) -> String {
        match self {
            RingSpec::Integers { .. } => "Z".into(),
            RingSpec::Rationals { .. } => "Q".into(),
            RingSpec::Modular { modulus, .. } if is_prime(*modulus) => format!("F_{modulus}"),
            RingSpec::Modular { modulus, .. } => format!("Z/{modulus}"),
        }
    }

    /// Spelling accepted back by [`RingSpec::parse`].
    pub fn ring_arg(&self) -> String {
        match self {
            RingSpec::Integers { .. } => "Z".into(),
            RingSpec::Rationals { .. } => "Q".into(),
            RingSpec::Modular { modulus, .. } if is_prime(*modulus) => format!("Fp:{modulus}"),
            RingSpec::Modular { modulus, .. } => format!("Zmod:{modulus}"),
        }
    }

    pub fn parameter_string(&self) -> String {
        match self {
            RingSpec::Integers { a } => a.to_string(),
            RingSpec::Rationals { a } => a.to_string(),
            RingSpec::Modular { a, .. } => a.to_string(),
        }
    }

    pub fn parameter_is_unit(&self) -> bool {
        match self {
            RingSpec::Integers { a } => a.magnitude().is_one(),
            RingSpec::Rationals { a } => !a.is_zero(),
            RingSpec::Modular { modulus, a } => Integer::gcd(a, modulus) == 1,
        }
    }

    pub fn is_field(&self) -> bool {
        match self {
            RingSpec::Integers { .. } => false,
            RingSpec::Rationals { .. } => true,
            RingSpec::Modular { modulus, .. } => is_prime(*modulus),
        }
    }

    /// Runs `visitor` over the concrete ring. A composite modulus is visited
    /// as the integers with the parameter lifted; callers reduce the result
    /// with [`crate::smith::universal_coefficients`].
    pub fn visit<V: RingVisitor>(&self, visitor: V) -> V::Output {
        match self {
            RingSpec::Integers { a } => visitor.visit(Ring::integers(a.clone())),
            RingSpec::Rationals { a } => visitor.visit(Ring::rationals(a.clone())),
            RingSpec::Modular { modulus, a } => {
                if is_prime(*modulus) {
                    let field = PrimeField(*modulus);
                    let a = field.element(*a);
                    visitor.visit(Ring::new(field, a))
                } else {
                    visitor.visit(Ring::integers(BigInt::from(*a)))
                }
            }
        }
    }

    /// The modulus to reduce integer results by, when the ring is `Z/m`
    /// with `m` composite.
    pub fn composite_modulus(&self) -> Option<u64> {
        match self {
            RingSpec::Modular { modulus, .. } if !is_prime(*modulus) => Some(*modulus),
            _ => None,
        }
    }
}

impl Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (a = {})", self.ring_name(), self.parameter_string())
    }
}

/// Generic callback for [`RingSpec::visit`].
pub trait RingVisitor {
    type Output;
    fn visit<T: Coefficient>(self, ring: Ring<T>) -> Self::Output;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(5).unwrap();
        let two = f.element(2);
        let three = f.element(3);
        assert!((two + three).is_zero());
        assert_eq!(two * three, f.element(1));
        assert_eq!(two.unit_inverse().unwrap(), three);
        assert_eq!(-two, three);
        assert_eq!(Fp::zero() + two, two);
        assert_eq!(Fp::zero(), f.element(0));
    }

    #[test]
    fn composite_modulus_rejected_for_fp() {
        assert!(PrimeField::new(6).is_err());
        assert!(RingSpec::parse("Fp:6", "1").is_err());
        assert!(RingSpec::parse("Zmod:6", "1").is_ok());
    }

    #[test]
    fn parameter_reduced_to_canonical_form() {
        let spec = RingSpec::parse("Fp:3", "-1").unwrap();
        assert_eq!(spec, RingSpec::Modular { modulus: 3, a: 2 });
        let q = RingSpec::parse("Q", "4/6").unwrap();
        assert_eq!(q.parameter_string(), "2/3");
    }

    #[test]
    fn integer_gcd_and_units() {
        let a = BigInt::from(-12);
        let b = BigInt::from(18);
        assert_eq!(Coefficient::gcd(&a, &b), BigInt::from(6));
        assert!(BigInt::from(-1).is_unit());
        assert!(!BigInt::from(2).is_unit());
    }

    #[test]
    fn loop_weights_are_parameter_powers() {
        let ring = Ring::integers(3);
        assert_eq!(ring.loop_weight(0), BigInt::from(1));
        assert_eq!(ring.loop_weight(4), BigInt::from(81));
        assert_eq!(ring.loop_weight(30), num_traits::pow(BigInt::from(3), 30));
        assert_eq!(ring.signed_loop_weight(true, 1), BigInt::from(-3));
    }
}
