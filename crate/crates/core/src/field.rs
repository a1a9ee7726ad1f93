//! Prime field arithmetic and the choice of a field containing the needed
//! roots of unity.

use alloc::vec::Vec;

use crate::error::{invalid, Result};

/// The prime field `F_q` together with a fixed element `omega` of exact
/// order `e`. Cocycle values and central characters live in `<omega>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub q: u64,
    pub e: u64,
    pub omega: u64,
}

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

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FieldSpec {
    /// Smallest prime `q >= min_q` with `q = 1 mod e`.
    pub fn new(e: u64, min_q: u64) -> Result<Self> {
        if e == 0 {
            return Err(invalid!("root-of-unity order must be positive"));
        }
        let mut q = (min_q.max(3) - 1) / e * e + 1;
        if q < min_q {
            q += e;
        }
        while !is_prime(q) {
            q += e;
            if q >= 1 << 31 {
                return Err(invalid!("no prime below 2^31 congruent to 1 mod {e}"));
            }
        }
        Self::with_prime(q, e)
    }

    pub fn with_prime(q: u64, e: u64) -> Result<Self> {
        if !is_prime(q) || q >= 1 << 31 {
            return Err(invalid!("{q} is not a prime below 2^31"));
        }
        if !(q - 1).is_multiple_of(e) {
            return Err(invalid!("{q} is not 1 mod {e}"));
        }
        let fs = prime_factors(q - 1);
        let mut g = 2;
        loop {
            if fs.iter().all(|&p| pow_mod(g, (q - 1) / p, q) != 1) {
                break;
            }
            g += 1;
        }
        Ok(FieldSpec { q, e, omega: pow_mod(g, (q - 1) / e, q) })
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }
    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }
    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }
    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.q
    }
    pub fn pow(&self, a: u64, k: u64) -> u64 {
        pow_mod(a, k, self.q)
    }
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a != 0);
        pow_mod(a, self.q - 2, self.q)
    }
    pub fn from_i64(&self, a: i64) -> u64 {
        a.rem_euclid(self.q as i64) as u64
    }
    /// `omega^k`
    pub fn root(&self, k: u64) -> u64 {
        self.pow(self.omega, k % self.e)
    }

    /// Discrete logarithm to base `omega`; `None` if `v` is not in `<omega>`.
    pub fn dlog(&self, v: u64) -> Option<u64> {
        if v == 0 || self.pow(v, self.e) != 1 {
            return None;
        }
        // Pohlig-Hellman over the prime powers of e.
        let mut residues = Vec::new();
        for p in prime_factors(self.e) {
            let mut pk = 1;
            while self.e.is_multiple_of(pk * p) {
                pk *= p;
            }
            let cof = self.e / pk;
            let g = self.pow(self.omega, cof); // order pk
            let h = self.pow(v, cof);
            let gp = self.pow(g, pk / p); // order p
            let mut x = 0u64;
            let mut pi = 1u64;
            while pi < pk {
                let t = self.pow(self.mul(h, self.inv(self.pow(g, x))), pk / (pi * p));
                let mut d = 0;
                let mut acc = 1;
                while acc != t {
                    acc = self.mul(acc, gp);
                    d += 1;
                    if d > p {
                        return None;
                    }
                }
                x += d * pi;
                pi *= p;
            }
            residues.push((x, pk));
        }
        Some(crt(&residues))
    }

    /// Square root of `v` among `1..=bound`, if any (used for degrees).
    pub fn small_sqrt(&self, v: u64, bound: u64) -> Option<u64> {
        (1..=bound).find(|&d| d * d % self.q == v)
    }
}

pub fn pow_mod(mut a: u64, mut k: u64, q: u64) -> u64 {
    let mut r = 1 % q;
    a %= q;
    while k > 0 {
        if k & 1 == 1 {
            r = r * a % q;
        }
        a = a * a % q;
        k >>= 1;
    }
    r
}

fn crt(res: &[(u64, u64)]) -> u64 {
    let mut x: u128 = 0;
    let mut m: u128 = 1;
    for &(r, p) in res {
        let (r, p) = (r as u128, p as u128);
        while x % p != r {
            x += m;
        }
        m *= p;
    }
    x as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn omega_has_exact_order() {
        let f = FieldSpec::new(360, 1 << 20).unwrap();
        assert_eq!((f.q - 1) % 360, 0);
        assert_eq!(f.pow(f.omega, 360), 1);
        for p in [2, 3, 5] {
            assert_ne!(f.pow(f.omega, 360 / p), 1);
        }
    }

    proptest! {
        #[test]
        fn dlog_inverts_root(k in 0u64..216_000) {
            let f = FieldSpec::new(216_000, 1 << 22).unwrap();
            prop_assert_eq!(f.dlog(f.root(k)), Some(k));
        }
    }

    #[test]
    fn dlog_rejects_outside() {
        let f = FieldSpec::new(4, 1000).unwrap();
        let g = (2..f.q).find(|&g| f.pow(g, 4) != 1).unwrap();
        assert_eq!(f.dlog(g), None);
    }
}
