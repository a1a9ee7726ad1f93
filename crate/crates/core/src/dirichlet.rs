//! Truncated Dirichlet series with exact rational coefficients, and the
//! fixed-point iteration of a functional-equation system.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{inconsistent, invalid, resource, Result};
use crate::funceq::FuncEqSystem;

pub type Q = Ratio<i128>;

/// `sum a_m m^-s` over `1 <= m <= n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DirichletPoly {
    pub n: u64,
    terms: BTreeMap<u64, Q>,
}

impl DirichletPoly {
    pub fn zero(n: u64) -> Self {
        DirichletPoly { n, terms: BTreeMap::new() }
    }

    pub fn one(n: u64) -> Self {
        Self::monomial(n, Q::one(), 1)
    }

    /// `a m^-s`, dropped if `m > n`.
    pub fn monomial(n: u64, a: Q, m: u64) -> Self {
        let mut p = Self::zero(n);
        p.add_term(m, a);
        p
    }

    pub fn from_terms(n: u64, terms: impl IntoIterator<Item = (u64, Q)>) -> Self {
        let mut p = Self::zero(n);
        for (m, a) in terms {
            p.add_term(m, a);
        }
        p
    }

    /// Integer counts `(degree, multiplicity)`.
    pub fn from_counts(n: u64, counts: &[(u64, u64)]) -> Self {
        Self::from_terms(n, counts.iter().map(|&(m, c)| (m, Q::from_integer(c as i128))))
    }

    pub fn add_term(&mut self, m: u64, a: Q) {
        if m == 0 || m > self.n || a.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(Q::zero);
        *e += a;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn coeff(&self, m: u64) -> Q {
        self.terms.get(&m).copied().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, Q)> + '_ {
        self.terms.iter().map(|(&m, &a)| (m, a))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.n != o.n {
            return Err(invalid!("truncations {} and {} differ", self.n, o.n));
        }
        let mut r = self.clone();
        for (m, a) in o.terms() {
            r.add_term(m, a);
        }
        Ok(r)
    }

    pub fn scale(&self, c: Q) -> Self {
        Self::from_terms(self.n, self.terms().map(|(m, a)| (m, a * c)))
    }

    /// Dirichlet convolution, truncated.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.n != o.n {
            return Err(invalid!("truncations {} and {} differ", self.n, o.n));
        }
        let mut r = Self::zero(self.n);
        for (m1, a1) in self.terms() {
            for (m2, a2) in o.terms() {
                match m1.checked_mul(m2) {
                    Some(m) if m <= self.n => r.add_term(m, a1 * a2),
                    _ => break,
                }
            }
        }
        Ok(r)
    }

    /// `f(ks)`: the coefficient at `m` moves to `m^k`.
    pub fn scale_exponent(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(invalid!("exponent scale must be positive"));
        }
        Ok(Self::from_terms(self.n, self.terms().filter_map(|(m, a)| m.checked_pow(k).map(|mk| (mk, a)))))
    }

    pub fn truncate(&self, n: u64) -> Self {
        Self::from_terms(n, self.terms().filter(|&(m, _)| m <= n))
    }

    /// Coefficients as integers, failing on any fractional one.
    pub fn integer_terms(&self) -> Result<Vec<(u64, i128)>> {
        self.terms()
            .map(|(m, a)| {
                if a.is_integer() {
                    Ok((m, a.to_integer()))
                } else {
                    Err(inconsistent!("non-integral coefficient {a} at modulus {m}"))
                }
            })
            .collect()
    }

    /// Numerical value at real `s`.
    pub fn eval(&self, s: f64) -> f64 {
        self.terms().map(|(m, a)| q_to_f64(a) * libm::pow(m as f64, -s)).sum()
    }

    pub fn eval_complex(&self, s: num_complex::Complex64) -> num_complex::Complex64 {
        self.terms().map(|(m, a)| num_complex::Complex64::new(m as f64, 0.0).powc(-s) * q_to_f64(a)).sum()
    }
}

impl core::fmt::Display for DirichletPoly {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, a)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if m == 1 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}^-s")?;
            } else {
                write!(f, "{a}*{m}^-s")?;
            }
        }
        Ok(())
    }
}

pub fn q_to_f64(a: Q) -> f64 {
    *a.numer() as f64 / *a.denom() as f64
}

/// Number of (not necessarily irreducible) representations of each degree up
/// to `n_max`, from the counts `r_n` of irreducible ones:
/// `sum R_n t^n = prod (1 - t^n)^(-r_n)`.
pub fn euler_reps(r: &DirichletPoly, n_max: usize) -> Result<Vec<u128>> {
    let mut out = alloc::vec![0u128; n_max + 1];
    out[0] = 1;
    for (d, a) in r.terms() {
        if !a.is_integer() || a.to_integer() < 0 {
            return Err(invalid!("degree counts must be nonnegative integers"));
        }
        let d = d as usize;
        if d > n_max {
            continue;
        }
        // multiply by (1 - t^d)^-1, r_d times
        for _ in 0..a.to_integer() {
            for j in d..=n_max {
                out[j] = out[j].checked_add(out[j - d]).ok_or_else(|| resource!("representation count overflow"))?;
            }
        }
    }
    Ok(out)
}

/// Sparse series with exact integer coefficients, sorted by modulus.
pub(crate) type IntSeries = Vec<(u64, i128)>;

pub(crate) fn int_mul(a: &IntSeries, b: &IntSeries, n: u64) -> Result<IntSeries> {
    let mut acc: hashbrown::HashMap<u64, i128> = hashbrown::HashMap::new();
    for &(m1, x) in a {
        for &(m2, y) in b {
            let Some(m) = m1.checked_mul(m2).filter(|&m| m <= n) else {
                break;
            };
            let p = x.checked_mul(y).ok_or_else(|| resource!("coefficient overflow"))?;
            let e = acc.entry(m).or_insert(0);
            *e = e.checked_add(p).ok_or_else(|| resource!("coefficient overflow"))?;
        }
    }
    let mut v: IntSeries = acc.into_iter().filter(|&(_, c)| c != 0).collect();
    v.sort_unstable();
    Ok(v)
}

pub(crate) fn int_scale_exponent(a: &IntSeries, k: u32, n: u64) -> IntSeries {
    a.iter().filter_map(|&(m, c)| m.checked_pow(k).filter(|&mk| mk <= n).map(|mk| (mk, c))).collect()
}

/// Integer-valued step of the fixed-point iteration.
pub struct Iteration<'a> {
    sys: &'a FuncEqSystem,
    n: u64,
    denom: i128,
    /// Per target: `(coeff * denom, modulus, monomial index)`.
    rows: Vec<Vec<(i128, u64, usize)>>,
    monos: Vec<Vec<(usize, u32)>>,
}

impl<'a> Iteration<'a> {
    pub fn new(sys: &'a FuncEqSystem, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(invalid!("truncation must be at least 1"));
        }
        let mut denom = 1i128;
        for t in &sys.terms {
            denom = num_integer::lcm(denom, *t.coeff.denom());
        }
        let mut index: BTreeMap<Vec<(usize, u32)>, usize> = BTreeMap::new();
        let mut monos = Vec::new();
        let mut rows = alloc::vec![Vec::new(); sys.num_triples];
        for t in &sys.terms {
            if t.modulus > n {
                continue;
            }
            let mi = *index.entry(t.mono.clone()).or_insert_with(|| {
                monos.push(t.mono.clone());
                monos.len() - 1
            });
            let c = (t.coeff * Q::from_integer(denom)).to_integer();
            rows[t.target].push((c, t.modulus, mi));
        }
        Ok(Iteration { sys, n, denom, rows, monos })
    }

    pub fn seed(&self) -> Vec<IntSeries> {
        let mut z = alloc::vec![Vec::new(); self.sys.num_triples];
        z[self.sys.seed] = alloc::vec![(1, 1)];
        z
    }

    /// `z <- F(z)`.
    pub fn step(&self, z: &[IntSeries]) -> Result<Vec<IntSeries>> {
        let n = self.n;
        let mut scaled: BTreeMap<(usize, u32), IntSeries> = BTreeMap::new();
        let mut prods: Vec<Option<IntSeries>> = alloc::vec![None; self.monos.len()];
        let mut out = Vec::with_capacity(z.len());
        for row in &self.rows {
            let mut acc: BTreeMap<u64, i128> = BTreeMap::new();
            for &(c, modulus, mi) in row {
                if prods[mi].is_none() {
                    let mut p: IntSeries = alloc::vec![(1, 1)];
                    for &(v, k) in &self.monos[mi] {
                        let f = scaled.entry((v, k)).or_insert_with(|| int_scale_exponent(&z[v], k, n));
                        p = int_mul(&p, f, n)?;
                        if p.is_empty() {
                            break;
                        }
                    }
                    prods[mi] = Some(p);
                }
                for &(m, x) in prods[mi].as_ref().unwrap() {
                    let Some(mm) = m.checked_mul(modulus).filter(|&mm| mm <= n) else {
                        break;
                    };
                    let v = x.checked_mul(c).ok_or_else(|| resource!("coefficient overflow"))?;
                    let e = acc.entry(mm).or_insert(0);
                    *e = e.checked_add(v).ok_or_else(|| resource!("coefficient overflow"))?;
                }
            }
            let mut s = Vec::with_capacity(acc.len());
            for (m, x) in acc {
                if x % self.denom != 0 {
                    return Err(inconsistent!("non-integral coefficient {x}/{} at modulus {m}", self.denom));
                }
                if x != 0 {
                    s.push((m, x / self.denom));
                }
            }
            out.push(s);
        }
        Ok(out)
    }

    pub fn to_polys(&self, z: &[IntSeries]) -> Vec<DirichletPoly> {
        z.iter().map(|s| DirichletPoly::from_terms(self.n, s.iter().map(|&(m, c)| (m, Q::from_integer(c))))).collect()
    }
}

/// `zeta_G = sum_Theta z_Theta * zeta_{Theta-dual} * (1/i) i^-s`.
pub fn assemble_row(sys: &FuncEqSystem, z: &[DirichletPoly]) -> Result<DirichletPoly> {
    let n = z.first().map_or(1, |p| p.n);
    let mut out = DirichletPoly::zero(n);
    for r in &sys.row {
        if z[r.entry].is_empty() || r.index > n {
            continue;
        }
        let dual = DirichletPoly::from_counts(n, &r.zeta_dual);
        let w = DirichletPoly::monomial(n, Q::new(1, r.index as i128), r.index);
        out = out.add(&z[r.entry].mul(&dual)?.mul(&w)?)?;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct IterateResult {
    pub per_triple: Vec<DirichletPoly>,
    pub zeta: DirichletPoly,
    pub iterations: usize,
}

pub const ITERATION_CAP: usize = 1000;

/// Iterate from the seed until two successive iterates agree up to `n`.
pub fn iterate_system(sys: &FuncEqSystem, n: u64) -> Result<IterateResult> {
    let it = Iteration::new(sys, n)?;
    let mut z = it.seed();
    for k in 1..=ITERATION_CAP {
        let next = it.step(&z)?;
        for (a, b) in z.iter().zip(&next) {
            if !dominates(b, a) {
                return Err(inconsistent!("iterate {k} is not coefficient-wise non-decreasing"));
            }
        }
        if next == z {
            let per_triple = it.to_polys(&z);
            let zeta = assemble_row(sys, &per_triple)?;
            for (_, c) in zeta.terms() {
                if !c.is_integer() || c < Q::zero() {
                    return Err(inconsistent!("assembled coefficient {c} is not a nonnegative integer"));
                }
            }
            return Ok(IterateResult { per_triple, zeta, iterations: k });
        }
        z = next;
    }
    Err(inconsistent!("iteration did not stabilize within {ITERATION_CAP} steps"))
}

/// First `count + 1` iterates, starting with the seed.
pub fn iterates(sys: &FuncEqSystem, n: u64, count: usize) -> Result<Vec<Vec<DirichletPoly>>> {
    let it = Iteration::new(sys, n)?;
    let mut z = it.seed();
    let mut out = alloc::vec![it.to_polys(&z)];
    for _ in 0..count {
        z = it.step(&z)?;
        out.push(it.to_polys(&z));
    }
    Ok(out)
}

fn dominates(b: &IntSeries, a: &IntSeries) -> bool {
    let mut j = 0;
    for &(m, x) in a {
        while j < b.len() && b[j].0 < m {
            j += 1;
        }
        let y = if j < b.len() && b[j].0 == m { b[j].1 } else { 0 };
        if y < x {
            return false;
        }
    }
    true
}
