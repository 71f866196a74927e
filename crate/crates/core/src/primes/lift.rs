//! Square roots of -1 modulo prime powers.

use serde::{Deserialize, Serialize};

use super::modular::{inv_mod, is_prime, legendre_symbol, mul_mod, pow_mod};
use crate::error::{Error, Result};

/// Below this modulus the root is found by enumeration.
pub const ENUMERATION_CUTOFF: u64 = 10_000;

fn require_one_mod_four_prime(p: u64) -> Result<()> {
    if p % 4 != 1 || !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not a prime congruent to 1 mod 4")));
    }
    Ok(())
}

/// The smaller of the two square roots of -1 modulo the prime `p ≡ 1 (mod 4)`.
pub fn sqrt_minus_one(p: u64) -> Result<u64> {
    require_one_mod_four_prime(p)?;
    let root = if p <= ENUMERATION_CUTOFF {
        (1..=p / 2)
            .find(|&r| r * r % p == p - 1)
            .expect("a prime 1 mod 4 has a square root of -1")
    } else {
        // c^((p-1)/4) squares to c^((p-1)/2) = -1 for any non-residue c
        let c = (2..p)
            .find(|&c| legendre_symbol(c as i64, p) == Ok(-1))
            .expect("an odd prime has a quadratic non-residue");
        pow_mod(c, (p - 1) / 4, p)
    };
    Ok(root.min(p - root))
}

/// A root `r` of `x^2 + 1 ≡ 0 (mod p^level)` for a prime `p ≡ 1 (mod 4)`.
///
/// The other root modulo `p^level` is `p^level - r`; there are no others.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootLift {
    p: u64,
    level: u32,
    modulus: u64,
    root: u64,
}

impl RootLift {
    /// Level-one root, the canonical smaller one.
    pub fn base(p: u64) -> Result<Self> {
        let root = sqrt_minus_one(p)?;
        Ok(Self { p, level: 1, modulus: p, root })
    }

    /// Validates an externally supplied root.
    pub fn new(p: u64, level: u32, root: u64) -> Result<Self> {
        require_one_mod_four_prime(p)?;
        if level == 0 {
            return Err(Error::invalid("root level must be at least 1"));
        }
        let modulus = checked_power(p, level)
            .ok_or_else(|| Error::invalid(format!("{p}^{level} overflows the modulus range")))?;
        if root == 0 || root >= modulus || mul_mod(root, root, modulus) != modulus - 1 {
            return Err(Error::invalid(format!(
                "{root} is not a square root of -1 modulo {p}^{level}"
            )));
        }
        Ok(Self { p, level, modulus, root })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// `p^level`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn root(&self) -> u64 {
        self.root
    }

    /// `(r, p^level - r)` in increasing order.
    pub fn roots(&self) -> (u64, u64) {
        let other = self.modulus - self.root;
        (self.root.min(other), self.root.max(other))
    }

    /// Lifts to level `j + 1` with `r' = r + p^j y`, where `y` solves
    /// `2 r y ≡ -(r^2 + 1) / p^j (mod p)`.
    pub fn lift(&self) -> Result<Self> {
        let p = self.p;
        let modulus = self
            .modulus
            .checked_mul(p)
            .filter(|&m| m < 1 << 63)
            .ok_or_else(|| Error::invalid(format!("{p}^{} overflows the modulus range", self.level + 1)))?;
        let r = self.root as u128;
        let lambda = ((r * r + 1) / self.modulus as u128 % p as u128) as u64;
        let inv = inv_mod(mul_mod(2, self.root, p), p).expect("2r is a unit mod an odd prime");
        let y = mul_mod((p - lambda) % p, inv, p);
        let root = self.root + self.modulus * y;
        debug_assert_eq!(mul_mod(root, root, modulus), modulus - 1);
        Ok(Self { p, level: self.level + 1, modulus, root })
    }

    /// Lifts repeatedly until the level reaches `level`.
    pub fn lift_to(self, level: u32) -> Result<Self> {
        let mut current = self;
        while current.level < level {
            current = current.lift()?;
        }
        Ok(current)
    }
}

/// Single Hensel step; see [`RootLift::lift`].
pub fn hensel_lift(lift: &RootLift) -> Result<RootLift> {
    lift.lift()
}

pub(crate) fn checked_power(p: u64, level: u32) -> Option<u64> {
    p.checked_pow(level).filter(|&m| m < 1 << 63)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_roots() {
        assert_eq!(sqrt_minus_one(5).unwrap(), 2);
        assert_eq!(sqrt_minus_one(13).unwrap(), 5);
        assert_eq!(sqrt_minus_one(17).unwrap(), 4);
        assert_eq!(sqrt_minus_one(101).unwrap(), 10);
        assert_eq!(sqrt_minus_one(1297).unwrap(), 36);
    }

    #[test]
    fn rejects_bad_moduli() {
        for p in [2, 3, 7, 9, 21, 25, 1] {
            assert!(matches!(sqrt_minus_one(p), Err(Error::InvalidArgument(_))), "p = {p}");
        }
    }

    #[test]
    fn fast_path_agrees_with_enumeration_above_cutoff() {
        for p in [10_009u64, 10_037, 10_069, 65_537, 1_000_033] {
            if p % 4 != 1 || !is_prime(p) {
                continue;
            }
            let r = sqrt_minus_one(p).unwrap();
            assert_eq!(mul_mod(r, r, p), p - 1);
            assert!(r <= p - r);
            let brute = (1..=p / 2).find(|&x| mul_mod(x, x, p) == p - 1).unwrap();
            assert_eq!(r, brute);
        }
    }

    #[test]
    fn lift_examples() {
        let l = RootLift::new(5, 1, 2).unwrap().lift().unwrap();
        assert_eq!((l.level(), l.root()), (2, 7));
        let l = hensel_lift(&RootLift::new(13, 1, 5).unwrap()).unwrap();
        assert_eq!((l.level(), l.root()), (2, 70));
    }

    #[test]
    fn zero_correction_keeps_root() {
        // 239^2 + 1 = 2 * 13^4
        let l = RootLift::new(13, 3, 239).unwrap().lift().unwrap();
        assert_eq!((l.level(), l.root()), (4, 239));
    }

    #[test]
    fn rejects_non_roots() {
        assert!(RootLift::new(5, 1, 1).is_err());
        assert!(RootLift::new(5, 1, 3).is_ok());
        assert!(RootLift::new(5, 0, 2).is_err());
        assert!(RootLift::new(7, 1, 2).is_err());
        assert!(RootLift::new(5, 2, 25).is_err());
    }
}
