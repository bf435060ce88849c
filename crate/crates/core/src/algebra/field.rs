//! Exact scalar fields.
//!
//! Two fields are supported: arbitrary-precision rationals and a prime field
//! `F_p` whose modulus is chosen at run time. Elements of `F_p` carry their
//! modulus; the constants produced by [`Zero::zero`] and [`One::one`] are
//! "unbound" integers that adopt the modulus of whatever they meet.

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::AlgebraError;

/// Default modulus, the Mersenne prime 2^31 - 1.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;
/// Smallest modulus accepted for the prime field.
pub const MIN_PRIME: u64 = 1 << 20;
/// Default seed of the deterministic generator.
pub const DEFAULT_SEED: u64 = 42;

/// Arithmetic required of every scalar the crate computes with.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Multiplicative inverse, `None` for zero.
    fn inverse(&self) -> Option<Self>;
}

/// A field context: produces constants, converts exact input data and draws
/// random elements.
pub trait Field: Clone + Debug + Send + Sync + 'static {
    type Elem: Scalar;

    fn from_i64(&self, n: i64) -> Self::Elem;

    /// Maps an exact rational into the field. Fails for the prime field when
    /// the denominator vanishes modulo `p`.
    fn from_rational(&self, r: &BigRational) -> Result<Self::Elem, AlgebraError>;

    /// Uniform element (the rational field draws integers from a symmetric range).
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        loop {
            let x = self.random(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// Draws a point of the affine line or `None` for the point at infinity,
    /// uniformly over `F ∪ {∞}` (over the rationals, over the sampling range).
    fn random_line_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Self::Elem>;

    fn config(&self) -> FieldConfig;
}

/// Which field a run uses, and the seed of its generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldConfig {
    pub kind: FieldKind,
    pub prime: u64,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldKind {
    Rationals,
    PrimeField,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig {
            kind: FieldKind::PrimeField,
            prime: DEFAULT_PRIME,
            seed: DEFAULT_SEED,
        }
    }
}

impl FieldConfig {
    pub fn rationals(seed: u64) -> Self {
        FieldConfig {
            kind: FieldKind::Rationals,
            prime: DEFAULT_PRIME,
            seed,
        }
    }

    pub fn prime(prime: u64, seed: u64) -> Self {
        FieldConfig {
            kind: FieldKind::PrimeField,
            prime,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), AlgebraError> {
        if self.kind == FieldKind::PrimeField {
            if self.prime < MIN_PRIME {
                return Err(AlgebraError::PrimeTooSmall(self.prime));
            }
            if self.prime >= 1 << 62 || !is_prime(self.prime) {
                return Err(AlgebraError::NotPrime(self.prime));
            }
        }
        Ok(())
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

// ---------------------------------------------------------------------------
// Rationals

/// Arbitrary-precision rational numbers.
pub type Rational = BigRational;

impl Scalar for BigRational {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Half-width of the integer range the rational field samples from.
const RATIONAL_SAMPLE_RADIUS: i64 = 1 << 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RationalField {
    pub seed: u64,
}

impl Field for RationalField {
    type Elem = BigRational;

    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_rational(&self, r: &BigRational) -> Result<BigRational, AlgebraError> {
        Ok(r.clone())
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.gen_range(-RATIONAL_SAMPLE_RADIUS..=RATIONAL_SAMPLE_RADIUS))
    }

    fn random_line_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<BigRational> {
        let k = rng.gen_range(-RATIONAL_SAMPLE_RADIUS..=RATIONAL_SAMPLE_RADIUS + 1);
        (k <= RATIONAL_SAMPLE_RADIUS).then(|| self.from_i64(k))
    }

    fn config(&self) -> FieldConfig {
        FieldConfig::rationals(self.seed)
    }
}

// ---------------------------------------------------------------------------
// Prime field

/// Element of `F_p`.
///
/// `modulus == 0` marks an unbound integer constant whose value is stored as
/// the two's complement bits of an `i64`; it is reduced as soon as it meets a
/// bound element.
#[derive(Clone, Copy)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn new(value: u64, modulus: u64) -> Self {
        debug_assert!(modulus > 0);
        Fp {
            value: value % modulus,
            modulus,
        }
    }

    fn constant(n: i64) -> Self {
        Fp {
            value: n as u64,
            modulus: 0,
        }
    }

    /// Canonical residue in `[0, p)`; unbound constants report their signed value.
    pub fn value(&self) -> i128 {
        if self.modulus == 0 {
            self.value as i64 as i128
        } else {
            self.value as i128
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        (self.modulus != 0).then_some(self.modulus)
    }

    fn reduce_to(self, m: u64) -> u64 {
        if self.modulus == 0 {
            (self.value as i64).rem_euclid(m as i64) as u64
        } else {
            debug_assert_eq!(self.modulus, m, "mixing elements of different prime fields");
            self.value
        }
    }

    /// Common modulus of two operands, 0 if both are unbound.
    fn common(self, other: Fp) -> u64 {
        self.modulus.max(other.modulus)
    }
}

impl Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modulus == 0 {
            write!(f, "{}", self.value as i64)
        } else {
            write!(f, "{} (mod {})", self.value, self.modulus)
        }
    }
}

impl Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl PartialEq for Fp {
    fn eq(&self, other: &Fp) -> bool {
        match self.common(*other) {
            0 => self.value == other.value,
            m => self.reduce_to(m) == other.reduce_to(m),
        }
    }
}

impl Eq for Fp {}

impl Zero for Fp {
    fn zero() -> Self {
        Fp::constant(0)
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp::constant(1)
    }
}

impl Add for Fp {
    type Output = Fp;

    fn add(self, rhs: Fp) -> Fp {
        match self.common(rhs) {
            0 => Fp::constant((self.value as i64).wrapping_add(rhs.value as i64)),
            m => {
                let s = self.reduce_to(m) as u128 + rhs.reduce_to(m) as u128;
                Fp::new((s % m as u128) as u64, m)
            }
        }
    }
}

impl Neg for Fp {
    type Output = Fp;

    fn neg(self) -> Fp {
        match self.modulus {
            0 => Fp::constant((self.value as i64).wrapping_neg()),
            m => Fp::new((m - self.value) % m, m),
        }
    }
}

impl Sub for Fp {
    type Output = Fp;

    fn sub(self, rhs: Fp) -> Fp {
        self + (-rhs)
    }
}

impl Mul for Fp {
    type Output = Fp;

    fn mul(self, rhs: Fp) -> Fp {
        match self.common(rhs) {
            0 => Fp::constant((self.value as i64).wrapping_mul(rhs.value as i64)),
            m => Fp::new(mul_mod(self.reduce_to(m), rhs.reduce_to(m), m), m),
        }
    }
}

impl Div for Fp {
    type Output = Fp;

    fn div(self, rhs: Fp) -> Fp {
        let inv = rhs.inverse().expect("division by zero in F_p");
        self * inv
    }
}

impl Scalar for Fp {
    fn inverse(&self) -> Option<Fp> {
        if self.is_zero() {
            return None;
        }
        match self.modulus {
            0 => match self.value as i64 {
                1 => Some(*self),
                -1 => Some(*self),
                v => panic!("cannot invert the unbound constant {v} outside a prime field"),
            },
            m => Some(Fp::new(pow_mod(self.value, m - 2, m), m)),
        }
    }
}

/// The prime field `F_p` for a run-time prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    prime: u64,
    seed: u64,
}

impl PrimeField {
    pub fn new(prime: u64, seed: u64) -> Result<Self, AlgebraError> {
        FieldConfig::prime(prime, seed).validate()?;
        Ok(PrimeField { prime, seed })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn elem(&self, value: u64) -> Fp {
        Fp::new(value, self.prime)
    }

    fn from_bigint(&self, n: &BigInt) -> Fp {
        let p = BigInt::from(self.prime);
        let r = n.mod_floor(&p);
        let (_, digits) = r.to_u64_digits();
        Fp::new(digits.first().copied().unwrap_or(0), self.prime)
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField {
            prime: DEFAULT_PRIME,
            seed: DEFAULT_SEED,
        }
    }
}

impl Field for PrimeField {
    type Elem = Fp;

    fn from_i64(&self, n: i64) -> Fp {
        Fp::new((n as i128).rem_euclid(self.prime as i128) as u64, self.prime)
    }

    fn from_rational(&self, r: &BigRational) -> Result<Fp, AlgebraError> {
        let num = self.from_bigint(r.numer());
        let den = self.from_bigint(r.denom());
        match den.inverse() {
            Some(inv) => Ok(num * inv),
            None => Err(AlgebraError::DenominatorVanishes {
                value: r.to_string(),
                prime: self.prime,
            }),
        }
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fp {
        Fp::new(rng.gen_range(0..self.prime), self.prime)
    }

    fn random_line_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Fp> {
        let k = rng.gen_range(0..=self.prime);
        (k < self.prime).then(|| Fp::new(k, self.prime))
    }

    fn config(&self) -> FieldConfig {
        FieldConfig::prime(self.prime, self.seed)
    }
}

/// Parses an exact decimal integer or fraction such as `"-3"` or `"2/5"`.
pub fn parse_rational(s: &str) -> Result<BigRational, AlgebraError> {
    let t = s.trim();
    t.parse::<BigRational>()
        .ok()
        .filter(|_| !t.is_empty())
        .ok_or_else(|| AlgebraError::BadNumber(s.to_string()))
}

/// Small integer value of a rational, when it has one.
pub fn rational_to_i64(r: &BigRational) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

/// Sign of a rational as -1, 0 or 1.
pub fn rational_sign(r: &BigRational) -> i32 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => {
            debug_assert!(r.is_positive());
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unbound_constants_adopt_modulus() {
        let f = PrimeField::new(DEFAULT_PRIME, 1).unwrap();
        let x = f.elem(5);
        assert_eq!(x + Fp::one(), f.elem(6));
        assert_eq!(Fp::zero() - Fp::one(), f.from_i64(-1));
        assert_eq!(Fp::one() + Fp::one() + x, f.elem(7));
        assert_eq!((-Fp::one()) * x, f.from_i64(-5));
        assert!(Fp::zero() == f.elem(0));
    }

    #[test]
    fn inverse_multiplies_back() {
        let f = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let x = f.random_nonzero(&mut rng);
            assert_eq!(x * x.inverse().unwrap(), Fp::one());
        }
        assert!(f.elem(0).inverse().is_none());
    }

    #[test]
    fn rational_reduction_mod_p() {
        let f = PrimeField::new(1_048_583, 0).unwrap();
        let half = parse_rational("1/2").unwrap();
        let h = f.from_rational(&half).unwrap();
        assert_eq!(h * f.from_i64(2), Fp::one());
        let neg = parse_rational("-7").unwrap();
        assert_eq!(f.from_rational(&neg).unwrap(), f.from_i64(-7));
        let bad = parse_rational("1/1048583").unwrap();
        assert!(matches!(
            f.from_rational(&bad),
            Err(AlgebraError::DenominatorVanishes { .. })
        ));
    }

    #[test]
    fn prime_validation() {
        assert!(PrimeField::new(DEFAULT_PRIME, 0).is_ok());
        assert!(matches!(PrimeField::new(101, 0), Err(AlgebraError::PrimeTooSmall(101))));
        assert!(matches!(PrimeField::new((1 << 21) + 2, 0), Err(AlgebraError::NotPrime(_))));
        assert!(is_prime(4_294_967_291));
        assert!(!is_prime(4_294_967_297));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert_eq!(rational_to_i64(&parse_rational(" 12 ").unwrap()), Some(12));
        assert_eq!(rational_sign(&parse_rational("-1/3").unwrap()), -1);
    }
}
