//! Arithmetic in the prime field GF(p) and the modular binomial
//! coefficients driving divided-power multiplication.
//!
//! The modulus is carried by [`PrimeField`], not by individual values;
//! an element is a plain integer already reduced into `[0, p)`.

use crate::error::{Error, Result};

/// A fully reduced residue, `0 <= value < p`.
pub type FpElement = u32;

/// Context for a fixed odd prime p. Inverses and the Pascal triangle up to
/// row 2p are tabulated once at construction; the arithmetic methods assume
/// reduced operands and never re-validate.
#[derive(Clone, Debug)]
pub struct PrimeField {
    p: u32,
    inv: Vec<u32>,
    // binom[a][b] = C(a, b) mod p for a <= 2p
    binom: Vec<Vec<u32>>,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if p == 2 || !is_prime(p as u64) {
            return Err(Error::NotOddPrime(p as u64));
        }
        let rows = (2 * p + 1) as usize;
        let mut binom: Vec<Vec<u32>> = Vec::with_capacity(rows);
        for a in 0..rows {
            let mut row = vec![0u32; a + 1];
            row[0] = 1;
            row[a] = 1;
            for b in 1..a {
                row[b] = (binom[a - 1][b - 1] + binom[a - 1][b]) % p;
            }
            binom.push(row);
        }
        let mut inv = vec![0u32; p as usize];
        for a in 1..p {
            inv[a as usize] = pow_mod(a, p - 2, p);
        }
        Ok(PrimeField { p, inv, binom })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: FpElement, b: FpElement) -> FpElement {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: FpElement, b: FpElement) -> FpElement {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(&self, a: FpElement, b: FpElement) -> FpElement {
        a * b % self.p
    }

    #[inline]
    pub fn neg(&self, a: FpElement) -> FpElement {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn inv(&self, a: FpElement) -> Result<FpElement> {
        if a == 0 {
            return Err(Error::ZeroInverse(self.p as u64));
        }
        Ok(self.inv[a as usize])
    }

    /// C(a, b) mod p by table lookup; arguments are bounded by 2p.
    pub fn binomial(&self, a: u32, b: u32) -> Result<FpElement> {
        if b > a || a > 2 * self.p {
            return Err(Error::BinomialRange {
                a: a as u64,
                b: b as u64,
                bound: 2 * self.p as u64,
            });
        }
        Ok(self.binom[a as usize][b as usize])
    }
}

fn pow_mod(base: u32, mut exp: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut b = base as u64 % p as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u64;
        }
        b = b * b % p as u64;
        exp >>= 1;
    }
    acc as u32
}

/// C(a, b) mod p via Lucas' theorem on base-p digits. Used as an
/// independent cross-check of the Pascal table in tests.
pub fn binomial_lucas(mut a: u64, mut b: u64, p: u32) -> u32 {
    let p64 = p as u64;
    let mut acc = 1u64;
    while a > 0 || b > 0 {
        let (da, db) = (a % p64, b % p64);
        if db > da {
            return 0;
        }
        acc = acc * small_binom(da, db) % p64;
        a /= p64;
        b /= p64;
    }
    acc as u32
}

fn small_binom(a: u64, b: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..b {
        num *= a - i;
        den *= i + 1;
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact_binom(a: u64, b: u64) -> u128 {
        let mut acc: u128 = 1;
        for i in 0..b {
            acc = acc * (a - i) as u128 / (i + 1) as u128;
        }
        acc
    }

    #[test]
    fn rejects_non_odd_primes() {
        for p in [0u32, 1, 2, 4, 6, 9, 15] {
            assert!(PrimeField::new(p).is_err(), "p = {p}");
        }
        for p in [3u32, 5, 7, 11, 13] {
            assert!(PrimeField::new(p).is_ok());
        }
    }

    #[test]
    fn spot_values() {
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(f5.inv(2).unwrap(), 3);
        assert_eq!(f5.add(4, 4), 3);
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(f7.neg(0), 0);
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(f3.binomial(4, 2).unwrap(), 0); // C(4,2)=6
        assert_eq!(f5.binomial(2, 1).unwrap(), 2);
    }

    #[test]
    fn inverse_of_zero_fails() {
        let f = PrimeField::new(7).unwrap();
        assert!(f.inv(0).is_err());
    }

    #[test]
    fn binomial_range_errors() {
        let f = PrimeField::new(3).unwrap();
        assert!(f.binomial(2, 3).is_err());
        assert!(f.binomial(7, 1).is_err());
    }

    #[test]
    fn field_axioms_exhaustive() {
        for p in [3u32, 5, 7] {
            let f = PrimeField::new(p).unwrap();
            for a in 0..p {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in 0..p {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.sub(f.add(a, b), b), a);
                    for c in 0..p {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn binomial_matches_exact_and_lucas() {
        for p in [3u32, 5, 7, 11, 13] {
            let f = PrimeField::new(p).unwrap();
            for a in 0..=2 * p {
                for b in 0..=a {
                    let exact = (exact_binom(a as u64, b as u64) % p as u128) as u32;
                    assert_eq!(f.binomial(a, b).unwrap(), exact, "C({a},{b}) mod {p}");
                    assert_eq!(binomial_lucas(a as u64, b as u64, p), exact);
                }
            }
        }
    }

    #[test]
    fn truncation_vanishing() {
        // C(i+j, i) = 0 mod p whenever 0 <= i,j < p and i+j >= p; this is
        // what keeps divided-power products inside the truncated basis.
        for p in [3u32, 5, 7] {
            let f = PrimeField::new(p).unwrap();
            for i in 0..p {
                for j in 0..p {
                    if i + j >= p {
                        assert_eq!(f.binomial(i + j, i).unwrap(), 0);
                    }
                }
            }
            for s in 1..p {
                assert_eq!(f.binomial(p - 1 + s, s).unwrap(), 0);
            }
        }
    }
}
