//! Univariate polynomials over `F_q` (coefficients low degree first) and
//! root finding by equal-degree splitting.

use alloc::vec::Vec;

use crate::field::FieldSpec;

fn trim(mut p: Vec<u64>) -> Vec<u64> {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

pub fn rem(f: &FieldSpec, a: &[u64], m: &[u64]) -> Vec<u64> {
    let m = trim(m.to_vec());
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = f.inv(m[dm]);
    while r.len() > dm {
        let c = f.mul(*r.last().unwrap(), lead_inv);
        let shift = r.len() - 1 - dm;
        for i in 0..=dm {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, m[i]));
        }
        r = trim(r);
    }
    r
}

pub fn mul(f: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = alloc::vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x * y) % f.q;
        }
    }
    trim(r)
}

pub fn gcd(f: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    if let Some(&l) = a.last() {
        let inv = f.inv(l);
        for c in a.iter_mut() {
            *c = f.mul(*c, inv);
        }
    }
    a
}

/// `base^k mod m`
pub fn pow_mod(f: &FieldSpec, base: &[u64], mut k: u64, m: &[u64]) -> Vec<u64> {
    let mut r = alloc::vec![1u64];
    let mut b = rem(f, base, m);
    while k > 0 {
        if k & 1 == 1 {
            r = rem(f, &mul(f, &r, &b), m);
        }
        b = rem(f, &mul(f, &b, &b), m);
        k >>= 1;
    }
    r
}

pub fn eval(f: &FieldSpec, p: &[u64], x: u64) -> u64 {
    p.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

/// Distinct roots of `p` in `F_q`, sorted.
pub fn roots(f: &FieldSpec, p: &[u64]) -> Vec<u64> {
    let p = trim(p.to_vec());
    if p.len() <= 1 {
        return Vec::new();
    }
    let xq = pow_mod(f, &[0, 1], f.q, &p);
    let mut xq_minus_x = xq;
    xq_minus_x.resize(xq_minus_x.len().max(2), 0);
    xq_minus_x[1] = f.sub(xq_minus_x[1], 1);
    let g = gcd(f, &p, &xq_minus_x);
    let mut out = Vec::new();
    let mut seed = 0x9e37_79b9_7f4a_7c15u64;
    split(f, &g, &mut out, &mut seed);
    out.sort_unstable();
    out
}

fn split(f: &FieldSpec, g: &[u64], out: &mut Vec<u64>, seed: &mut u64) {
    let d = g.len() - 1;
    if d == 0 {
        return;
    }
    if d == 1 {
        out.push(f.neg(f.mul(g[0], f.inv(g[1]))));
        return;
    }
    loop {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let a = (*seed >> 33) % f.q;
        if eval(f, g, f.neg(a)) == 0 {
            out.push(f.neg(a));
            let (q, _) = div_linear(f, g, f.neg(a));
            split(f, &q, out, seed);
            return;
        }
        let mut h = pow_mod(f, &[a, 1], (f.q - 1) / 2, g);
        if h.is_empty() {
            h.push(0);
        }
        h[0] = f.sub(h[0], 1);
        let c = gcd(f, g, &h);
        let dc = c.len().saturating_sub(1);
        if dc > 0 && dc < d {
            let other = divide(f, g, &c);
            split(f, &c, out, seed);
            split(f, &other, out, seed);
            return;
        }
    }
}

fn div_linear(f: &FieldSpec, g: &[u64], r: u64) -> (Vec<u64>, u64) {
    let n = g.len() - 1;
    let mut q = alloc::vec![0u64; n];
    let mut acc = 0;
    for i in (0..=n).rev() {
        acc = f.add(f.mul(acc, r), g[i]);
        if i > 0 {
            q[i - 1] = acc;
        }
    }
    (q, acc)
}

/// Exact quotient `a / b`.
pub fn divide(f: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let inv = f.inv(b[db]);
    let mut q = alloc::vec![0u64; r.len().saturating_sub(db).max(1)];
    while r.len() > db {
        let c = f.mul(*r.last().unwrap(), inv);
        let shift = r.len() - 1 - db;
        q[shift] = c;
        for i in 0..=db {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, b[i]));
        }
        r = trim(r);
    }
    trim(q)
}
