use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Largest supported modulus; products of two residues must fit in `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of the prime field with `modulus` elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn new(value: u64, modulus: u64) -> Self {
        debug_assert!((2..=MAX_MODULUS).contains(&modulus));
        Fp {
            value: value % modulus,
            modulus,
        }
    }

    /// Reduces a signed integer into `[0, p)`.
    pub fn from_i64(value: i64, modulus: u64) -> Self {
        Fp::new(value.rem_euclid(modulus as i64) as u64, modulus)
    }

    pub fn zero(modulus: u64) -> Self {
        Fp::new(0, modulus)
    }

    pub fn one(modulus: u64) -> Self {
        Fp::new(1, modulus)
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let mut base = self;
        let mut acc = Fp::one(self.modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat; `None` for zero.
    pub fn inv(self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow(self.modulus - 2))
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Fp::new(self.value + rhs.value, self.modulus)
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Fp::new(self.value + self.modulus - rhs.value, self.modulus)
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Fp::new(self.value * rhs.value, self.modulus)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp::new(self.modulus - self.value, self.modulus)
    }
}

impl Div for Fp {
    type Output = Fp;
    /// Panics on division by zero.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Fp) -> Fp {
        self * rhs.inv().expect("division by zero in prime field")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(101));
        assert!(!is_prime(91));
    }

    #[test]
    fn inverses_mod_101() {
        for v in 1..101 {
            let x = Fp::new(v, 101);
            assert_eq!(x * x.inv().unwrap(), Fp::one(101));
        }
        assert_eq!(Fp::zero(101).inv(), None);
    }

    #[test]
    fn signed_reduction_and_negation() {
        assert_eq!(Fp::from_i64(-1, 5), Fp::new(4, 5));
        assert_eq!(-Fp::new(0, 7), Fp::zero(7));
        assert_eq!(Fp::new(3, 7) - Fp::new(5, 7), Fp::new(5, 7));
        assert_eq!(Fp::new(3, 7) / Fp::new(5, 7) * Fp::new(5, 7), Fp::new(3, 7));
    }
}
