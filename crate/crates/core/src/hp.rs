//! Binary fixed-point reals with 256 fractional bits.
//!
//! Used to re-decide comparisons whose double-precision margin is too thin
//! to trust. Every primitive truncates at most one unit in the last place.

use std::cmp::Ordering;
use std::ops::{Add, Sub};
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};

const FRAC_BITS: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fixed(BigInt);

impl Fixed {
    pub fn zero() -> Self {
        Fixed(BigInt::zero())
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Fixed(n.into() << FRAC_BITS)
    }

    /// `num / den` rounded toward zero.
    pub fn ratio(num: &BigUint, den: &BigUint) -> Self {
        Fixed(BigInt::from_biguint(Sign::Plus, (num << FRAC_BITS) / den))
    }

    pub fn mul_int(&self, k: impl Into<BigInt>) -> Self {
        Fixed(&self.0 * k.into())
    }

    pub fn div_int(&self, k: impl Into<BigInt>) -> Self {
        Fixed(&self.0 / k.into())
    }

    pub fn mul(&self, other: &Fixed) -> Self {
        Fixed((&self.0 * &other.0) >> FRAC_BITS)
    }

    pub fn to_f64(&self) -> f64 {
        let (sign, mag) = self.0.clone().into_parts();
        let bits = mag.bits();
        let shift = bits.saturating_sub(64);
        let top = (mag >> shift).to_u64().unwrap_or(u64::MAX) as f64;
        let v = top * 2f64.powi(shift as i32 - FRAC_BITS as i32);
        if sign == Sign::Minus {
            -v
        } else {
            v
        }
    }

    /// Comparison that refuses to decide when the gap is within `ulps`.
    pub fn cmp_with_slack(&self, other: &Fixed, ulps: u64) -> Option<Ordering> {
        let diff = &self.0 - &other.0;
        if diff.magnitude() <= &BigUint::from(ulps) {
            None
        } else {
            Some(diff.sign().cmp(&Sign::NoSign))
        }
    }
}

impl Add for &Fixed {
    type Output = Fixed;
    fn add(self, rhs: &Fixed) -> Fixed {
        Fixed(&self.0 + &rhs.0)
    }
}

impl Sub for &Fixed {
    type Output = Fixed;
    fn sub(self, rhs: &Fixed) -> Fixed {
        Fixed(&self.0 - &rhs.0)
    }
}

/// 2·atanh(z) for a fixed-point z with |z| ≤ 1/3.
fn two_atanh(z: &Fixed) -> Fixed {
    let z2 = z.mul(z);
    let mut power = z.clone();
    let mut acc = Fixed::zero();
    let mut k = 1u32;
    while !power.0.is_zero() {
        acc = &acc + &power.div_int(k);
        power = power.mul(&z2);
        k += 2;
    }
    acc.mul_int(2)
}

pub fn ln2() -> &'static Fixed {
    static LN2: OnceLock<Fixed> = OnceLock::new();
    LN2.get_or_init(|| two_atanh(&Fixed::ratio(&BigUint::from(1u32), &BigUint::from(3u32))))
}

/// Natural logarithm of a positive integer.
pub fn ln(n: &BigUint) -> Fixed {
    assert!(!n.is_zero(), "logarithm of zero");
    // n = 2^k · x with x in [3/4, 3/2)
    let mut k = n.bits() - 1;
    let pow = BigUint::from(1u32) << k;
    if n * 2u32 >= &pow * 3u32 {
        k += 1;
    }
    let pow = BigUint::from(1u32) << k;
    let (num, negative) = if *n >= pow { (n - &pow, false) } else { (&pow - n, true) };
    let z = Fixed::ratio(&num, &(n + &pow));
    let frac = two_atanh(&z);
    let frac = if negative { Fixed(-frac.0) } else { frac };
    &ln2().mul_int(k) + &frac
}

pub fn ln_u64(n: u64) -> Fixed {
    ln(&BigUint::from(n))
}
