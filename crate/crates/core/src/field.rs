//! Prime field arithmetic and the mixed-radix encoding of `F_p^n`.
//!
//! Points of `F_p^n` are stored as `Vec<u32>` coordinate vectors with every
//! entry in `[0, p)`. Dense tables are indexed little-endian:
//! `index(x) = x_0 + x_1 p + ... + x_{n-1} p^{n-1}`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeField {
    p: u32,
}

impl TryFrom<u32> for PrimeField {
    type Error = Error;

    fn try_from(p: u32) -> Result<Self> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u32 {
    fn from(f: PrimeField) -> u32 {
        f.p
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        // keep products of two residues inside u64 comfortably
        if !is_prime(p) || p >= 1 << 16 {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, self.p as u64 - 2))
        }
    }

    pub fn dot(&self, a: &[u32], b: &[u32]) -> u32 {
        let acc: u64 = a.iter().zip(b).map(|(&x, &y)| x as u64 * y as u64).sum();
        (acc % self.p as u64) as u32
    }

    pub fn add_vec(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(&x, &y)| self.add(x, y)).collect()
    }

    pub fn sub_vec(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(&x, &y)| self.sub(x, y)).collect()
    }

    pub fn scale_vec(&self, c: u32, a: &[u32]) -> Vec<u32> {
        a.iter().map(|&x| self.mul(c, x)).collect()
    }

    /// `omega^k` for `k = 0..p`, with `omega = exp(2 pi i / p)`.
    pub fn roots_of_unity(&self) -> Vec<Complex64> {
        (0..self.p)
            .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / self.p as f64))
            .collect()
    }

    /// Number of points of `F_p^n`, or `None` on overflow.
    pub fn size(&self, n: usize) -> Option<usize> {
        (self.p as usize).checked_pow(n as u32)
    }

    pub fn encode(&self, x: &[u32]) -> usize {
        x.iter()
            .rev()
            .fold(0usize, |acc, &c| acc * self.p as usize + c as usize)
    }

    pub fn decode_into(&self, mut index: usize, out: &mut [u32]) {
        let p = self.p as usize;
        for c in out.iter_mut() {
            *c = (index % p) as u32;
            index /= p;
        }
    }

    pub fn decode(&self, index: usize, n: usize) -> Vec<u32> {
        let mut v = vec![0; n];
        self.decode_into(index, &mut v);
        v
    }

    /// All points of `F_p^n` in index order.
    pub fn points(&self, n: usize) -> Vec<Vec<u32>> {
        let size = self.size(n).expect("ambient space too large");
        (0..size).map(|i| self.decode(i, n)).collect()
    }
}

/// `p^e` as `u128`, saturating.
pub fn pow_u128(p: u32, e: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.saturating_mul(p as u128);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites() {
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(0).is_err());
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(7).is_ok());
    }

    #[test]
    fn inverses() {
        let f = PrimeField::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        assert_eq!(f.inv(0), None);
    }

    #[test]
    fn encoding_is_little_endian() {
        let f = PrimeField::new(3).unwrap();
        assert_eq!(f.encode(&[1, 0]), 1);
        assert_eq!(f.encode(&[0, 1]), 3);
        assert_eq!(f.decode(5, 2), vec![2, 1]);
        for i in 0..27 {
            assert_eq!(f.encode(&f.decode(i, 3)), i);
        }
    }
}
