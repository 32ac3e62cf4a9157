//! Exact rational arithmetic and residue utilities.
//!
//! Every quantity in this crate is an exact `Rational` (arbitrary-precision
//! numerator over a positive denominator, always in lowest terms) or an
//! integer residue. Floating point never enters any computation.

use num_bigint::BigInt;
use num_rational::Ratio;

use crate::error::Error;

/// Exact rational number. `Ratio` keeps the denominator positive and the
/// fraction reduced, so equality is value equality.
pub type Rational = Ratio<BigInt>;

/// An orientation or sign choice, always `+1` or `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn from_i64(v: i64) -> Result<Sign, Error> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::BadSign(v)),
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// The congruence class of an integer modulo `n`, stored as the unique
/// representative in `[0, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(k: i128, n: u64) -> Result<Residue, Error> {
        if n == 0 {
            return Err(Error::ZeroModulus);
        }
        Ok(Residue {
            value: modu(k, n),
            modulus: n,
        })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

/// Reduces `k` modulo `n` into `[0, n)`. Rejects `n = 0`.
pub fn reduce(k: i128, n: u64) -> Result<u64, Error> {
    Residue::new(k, n).map(|r| r.value())
}

/// Euclidean remainder for callers that have already checked `n >= 1`.
pub(crate) fn modu(k: i128, n: u64) -> u64 {
    debug_assert!(n >= 1);
    k.rem_euclid(n as i128) as u64
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// Multiplicative inverse of `a` modulo `n`, when `gcd(a, n) = 1`.
pub fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    if n == 0 {
        return None;
    }
    let e = num_integer::Integer::extended_gcd(&(a as i128), &(n as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(modu(e.x, n))
}

pub fn rational_int(n: i128) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact fraction `num/den`; rejects a zero denominator.
pub fn rational(num: i128, den: i128) -> Result<Rational, Error> {
    if den == 0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(Rational::new(BigInt::from(num), BigInt::from(den)))
}

/// Greatest integer `<= x`.
pub fn floor_int(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

/// True when `x` is an even nonnegative integer.
pub fn is_even_nonneg_integer(x: &Rational) -> bool {
    use num_traits::Zero;
    x.is_integer() && x.numer() >= &BigInt::zero() && (x.numer() % 2u8) == BigInt::zero()
}

/// Serializes a rational as decimal strings `(numerator, denominator)`.
pub fn rational_to_pair(x: &Rational) -> (String, String) {
    (x.numer().to_string(), x.denom().to_string())
}

pub fn rational_from_pair(num: &str, den: &str) -> Result<Rational, Error> {
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator {num:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator {den:?}")))?;
    use num_traits::Zero;
    if d.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(Rational::new(n, d))
}
