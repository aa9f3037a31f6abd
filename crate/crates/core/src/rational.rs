//! Exact rationals over 64-bit numerator/denominator.
//!
//! Overflow in any operation is a hard error, never silent wraparound.

use crate::error::SigError;

/// A rational number in lowest terms with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational {
    num: i64,
    den: i64,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.abs()
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: i64, den: i64) -> Result<Rational, SigError> {
        if den == 0 {
            return Err(SigError::ZeroDenominator);
        }
        if num == i64::MIN || den == i64::MIN {
            // abs()/negation would overflow
            return Err(SigError::Overflow);
        }
        let g = gcd(num, den);
        let (mut num, mut den) = if g == 0 { (0, 1) } else { (num / g, den / g) };
        if den < 0 {
            num = -num;
            den = -den;
        }
        Ok(Rational { num, den })
    }

    pub fn from_int(n: i64) -> Rational {
        Rational { num: n, den: 1 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_positive(&self) -> bool {
        self.num > 0
    }

    pub fn checked_add(self, other: Rational) -> Result<Rational, SigError> {
        // a/b + c/d = (a*(l/b) + c*(l/d)) / l with l = lcm(b, d)
        let g = gcd(self.den, other.den);
        let l = (self.den / g)
            .checked_mul(other.den)
            .ok_or(SigError::Overflow)?;
        let left = self
            .num
            .checked_mul(l / self.den)
            .ok_or(SigError::Overflow)?;
        let right = other
            .num
            .checked_mul(l / other.den)
            .ok_or(SigError::Overflow)?;
        let num = left.checked_add(right).ok_or(SigError::Overflow)?;
        Rational::new(num, l)
    }
}

impl std::fmt::Display for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        let r = Rational::new(2, 4).unwrap();
        assert_eq!((r.num(), r.den()), (1, 2));
        let r = Rational::new(3, -6).unwrap();
        assert_eq!((r.num(), r.den()), (-1, 2));
        let r = Rational::new(0, 5).unwrap();
        assert_eq!((r.num(), r.den()), (0, 1));
    }

    #[test]
    fn addition() {
        let a = Rational::new(1, 4).unwrap();
        let b = Rational::new(1, 4).unwrap();
        assert_eq!(a.checked_add(b).unwrap(), Rational::new(1, 2).unwrap());
        let c = Rational::new(1, 3).unwrap();
        let d = Rational::new(2, 3).unwrap();
        assert_eq!(c.checked_add(d).unwrap(), Rational::ONE);
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(matches!(Rational::new(1, 0), Err(SigError::ZeroDenominator)));
    }

    #[test]
    fn overflow_is_hard_error() {
        let big = Rational::new(i64::MAX, 1).unwrap();
        assert!(matches!(big.checked_add(big), Err(SigError::Overflow)));
        let a = Rational::new(1, i64::MAX).unwrap();
        let b = Rational::new(1, i64::MAX - 1).unwrap();
        assert!(matches!(a.checked_add(b), Err(SigError::Overflow)));
    }
}
