//! Exact rational arithmetic for inequality checks. Floats never decide a
//! comparison; they only appear in report-only bound evaluations.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

pub type Rat = BigRational;

pub fn int(n: u64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: u64) -> Rat {
    Rat::from_integer(int(n))
}

pub fn ratio(num: BigInt, den: BigInt) -> Rat {
    Rat::new(num, den)
}

pub fn pow(base: u64, exp: u32) -> BigInt {
    int(base).pow(exp)
}

/// Exact numerator/denominator pair in lowest terms, for JSON emission.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatParts {
    pub num: String,
    pub den: String,
}

impl From<&Rat> for RatParts {
    fn from(r: &Rat) -> Self {
        RatParts {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

pub fn serialize_rat<S: serde::Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    RatParts::from(r).serialize(s)
}

pub fn to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
