//! Numerical evaluation of a functional-equation system at real and complex
//! `s`, continuation of the real solution branch, and location of the
//! abscissa of convergence as the point where that branch folds.

use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::dirichlet::{q_to_f64, DirichletPoly};
use crate::error::{invalid, resource, Result};
use crate::funceq::FuncEqSystem;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    /// Truncation of the Dirichlet polynomials substituted for `z[Theta, k]`, `k >= 2`.
    pub truncation: u64,
    pub newton_tol: f64,
    pub max_iterations: usize,
    /// Initial continuation step.
    pub step: f64,
    pub bisection_tol: f64,
    /// Continuation starts here, warm-started from the series.
    pub s_start: f64,
    /// Give up when the branch survives below this point.
    pub s_min: f64,
    /// Largest relative jump of the solution accepted in one step.
    pub jump_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            truncation: 1_000_000,
            newton_tol: 1e-12,
            max_iterations: 60,
            step: 0.25,
            bisection_tol: 1e-6,
            s_start: 12.0,
            s_min: 0.0,
            jump_tol: 0.5,
        }
    }
}

impl SolverConfig {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        let pos = [self.newton_tol, self.step, self.bisection_tol, self.jump_tol];
        if pos.iter().any(|&x| !(x > 0.0)) || self.truncation == 0 || self.max_iterations == 0 {
            return Err(invalid!("solver tolerances must be positive"));
        }
        if !(self.s_start > self.s_min) {
            return Err(invalid!("continuation start {} is not above {}", self.s_start, self.s_min));
        }
        Ok(())
    }
}

/// The system with every `z[Theta, k]`, `k >= 2`, replaced by a number:
/// `z_t = sum_j c_j prod_{v in mono_j} z_v`.
#[derive(Clone, Debug)]
pub struct ReducedSystem {
    pub rows: Vec<Vec<(Complex64, Vec<usize>)>>,
}

/// Substitute the truncated series for the `k >= 2` variables at `s`.
pub fn evaluate_tail(sys: &FuncEqSystem, polys: &[DirichletPoly], s: Complex64) -> ReducedSystem {
    let mut cache: hashbrown::HashMap<(usize, u32), Complex64> = hashbrown::HashMap::new();
    let mut rows: Vec<Vec<(Complex64, Vec<usize>)>> = alloc::vec![Vec::new(); sys.num_triples];
    for t in &sys.terms {
        let mut c = Complex64::new(t.modulus as f64, 0.0).powc(-s) * q_to_f64(t.coeff);
        let mut mono = Vec::new();
        for &(v, k) in &t.mono {
            if k == 1 {
                mono.push(v);
            } else {
                c *= *cache.entry((v, k)).or_insert_with(|| polys[v].eval_complex(s * k as f64));
            }
        }
        rows[t.target].push((c, mono));
    }
    ReducedSystem { rows }
}

/// `z_Theta(s)` from the truncated series.
pub fn series_values(polys: &[DirichletPoly], s: f64) -> Vec<f64> {
    polys.iter().map(|p| p.eval(s)).collect()
}

/// `zeta_G(s)` from the values `z_Theta(s)`.
pub fn assemble_value(sys: &FuncEqSystem, z: &[f64], s: f64) -> f64 {
    sys.row
        .iter()
        .map(|r| {
            let dual: f64 = r.zeta_dual.iter().map(|&(d, c)| c as f64 * libm::pow(d as f64, -s)).sum();
            z[r.entry] * dual * libm::pow(r.index as f64, -s) / r.index as f64
        })
        .sum()
}

trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn mag(self) -> f64;
    fn from_c(c: Complex64) -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn mag(self) -> f64 {
        libm::fabs(self)
    }
    fn from_c(c: Complex64) -> Self {
        c.re
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn mag(self) -> f64 {
        self.norm()
    }
    fn from_c(c: Complex64) -> Self {
        c
    }
}

/// Residual `z - F(z)` and its Jacobian.
fn residual<T: Scalar>(r: &ReducedSystem, z: &[T]) -> (Vec<T>, Vec<Vec<T>>) {
    let n = z.len();
    let mut res = z.to_vec();
    let mut jac: Vec<Vec<T>> = (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect();
    for (t, row) in r.rows.iter().enumerate() {
        for (c, mono) in row {
            let c = T::from_c(*c);
            let mut p = c;
            for &v in mono {
                p = p * z[v];
            }
            res[t] = res[t] - p;
            for j in 0..mono.len() {
                let mut d = c;
                for (i, &v) in mono.iter().enumerate() {
                    if i != j {
                        d = d * z[v];
                    }
                }
                jac[t][mono[j]] = jac[t][mono[j]] - d;
            }
        }
    }
    (res, jac)
}

/// Solve `a x = b` by Gaussian elimination with partial pivoting.
fn solve<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    let scale = a.iter().flatten().map(|x| x.mag()).fold(0.0, f64::max).max(1.0);
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| a[i][col].mag().partial_cmp(&a[j][col].mag()).unwrap())?;
        if a[p][col].mag() <= 1e-300 * scale {
            return None;
        }
        a.swap(col, p);
        b.swap(col, p);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f.mag() == 0.0 {
                continue;
            }
            for j in col..n {
                let v = a[col][j];
                a[r][j] = a[r][j] - f * v;
            }
            let v = b[col];
            b[r] = b[r] - f * v;
        }
    }
    let mut x = alloc::vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s = s - a[i][j] * x[j];
        }
        x[i] = s / a[i][i];
    }
    Some(x)
}

fn norm_inf<T: Scalar>(v: &[T]) -> f64 {
    v.iter().map(|x| x.mag()).fold(0.0, f64::max)
}

/// Damped Newton iteration for `z = F(z)`.
fn newton<T: Scalar>(r: &ReducedSystem, start: &[T], cfg: &SolverConfig) -> Option<Vec<T>> {
    let mut z = start.to_vec();
    let (mut res, mut jac) = residual(r, &z);
    let mut rn = norm_inf(&res);
    for _ in 0..cfg.max_iterations {
        if rn <= cfg.newton_tol * (1.0 + norm_inf(&z)) {
            return Some(z);
        }
        let dz = solve(jac, res.clone())?;
        let mut lambda = 1.0;
        loop {
            let cand: Vec<T> = z.iter().zip(&dz).map(|(&a, &d)| a - d * T::from_c(Complex64::new(lambda, 0.0))).collect();
            let (r2, j2) = residual(r, &cand);
            let n2 = norm_inf(&r2);
            if n2.is_finite() && (n2 < rn || lambda < 1e-3) {
                z = cand;
                res = r2;
                jac = j2;
                rn = n2;
                break;
            }
            lambda *= 0.5;
        }
        if !rn.is_finite() {
            return None;
        }
    }
    (rn <= cfg.newton_tol * (1.0 + norm_inf(&z))).then_some(z)
}

/// Real solution of the reduced system at real `s` near `warm`.
pub fn solve_at(sys: &FuncEqSystem, polys: &[DirichletPoly], s: f64, warm: &[f64], cfg: &SolverConfig) -> Result<Vec<f64>> {
    let r = evaluate_tail(sys, polys, Complex64::new(s, 0.0));
    let z = newton(&r, warm, cfg).ok_or_else(|| resource!("Newton did not converge at s = {s}; use a smaller continuation step"))?;
    if norm_inf(&z.iter().zip(warm).map(|(a, b)| a - b).collect::<Vec<_>>()) > cfg.jump_tol * (1.0 + norm_inf(warm)) {
        return Err(resource!("Newton left the warm-started branch at s = {s}; use a smaller continuation step"));
    }
    Ok(z)
}

/// Complex solution near `warm`, used to confirm that the real branch turned complex.
pub fn solve_complex_at(
    sys: &FuncEqSystem,
    polys: &[DirichletPoly],
    s: f64,
    warm: &[Complex64],
    cfg: &SolverConfig,
) -> Option<Vec<Complex64>> {
    let r = evaluate_tail(sys, polys, Complex64::new(s, 0.0));
    newton(&r, warm, cfg)
}

/// Smallest singular value of the Jacobian of `z - F(z)` at a real point.
pub fn smallest_singular_value(sys: &FuncEqSystem, polys: &[DirichletPoly], s: f64, z: &[f64]) -> f64 {
    let r = evaluate_tail(sys, polys, Complex64::new(s, 0.0));
    let (_, j) = residual(&r, z);
    let n = z.len();
    let mut ata = alloc::vec![alloc::vec![0.0; n]; n];
    for a in 0..n {
        for b in 0..n {
            ata[a][b] = (0..n).map(|k| j[k][a] * j[k][b]).sum();
        }
    }
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.01 * i as f64).collect();
    let mut lam = 0.0;
    for _ in 0..200 {
        let Some(y) = solve(ata.clone(), x.clone()) else {
            return 0.0;
        };
        let ny = libm::sqrt(y.iter().map(|v| v * v).sum());
        let nx = libm::sqrt(x.iter().map(|v| v * v).sum());
        let l = ny / nx;
        x = y.iter().map(|v| v / ny).collect();
        if libm::fabs(l - lam) <= 1e-12 * l {
            lam = l;
            break;
        }
        lam = l;
    }
    if lam > 0.0 {
        libm::sqrt(1.0 / lam)
    } else {
        0.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AbscissaResult {
    pub sigma: f64,
    pub lo: f64,
    pub hi: f64,
    /// Smallest singular value of the Jacobian at `hi`, where the branch is last real.
    pub smallest_singular_value: f64,
    /// The same at the continuation start, for scale.
    pub start_singular_value: f64,
    /// Whether a complex solution exists just below the bracket.
    pub complex_below: bool,
    pub truncation: u64,
    /// `(s, accepted)` for every continuation attempt.
    pub trace: Vec<(f64, bool)>,
}

/// Follow the real branch from `s_start` down until it ceases to exist and
/// bisect the step to locate the fold.
pub fn abscissa(sys: &FuncEqSystem, polys: &[DirichletPoly], cfg: &SolverConfig) -> Result<AbscissaResult> {
    cfg.validate()?;
    let mut s = cfg.s_start;
    let mut z = solve_at(sys, polys, s, &series_values(polys, s), cfg)?;
    let start_sv = smallest_singular_value(sys, polys, s, &z);
    let mut prev: Option<(f64, Vec<f64>)> = None;
    let mut h = cfg.step;
    let mut trace = alloc::vec![(s, true)];
    let mut lo: Option<f64> = None;
    while lo.is_none_or(|l| s - l > cfg.bisection_tol) {
        let t = s - h;
        if t < cfg.s_min {
            return Err(resource!("no fold above s = {}; trace {:?}", cfg.s_min, trace));
        }
        // linear predictor from the last two accepted points
        let warm: Vec<f64> = match &prev {
            Some((sp, zp)) => z.iter().zip(zp).map(|(&a, &b)| a + (a - b) * h / (sp - s)).collect(),
            None => z.clone(),
        };
        match solve_at(sys, polys, t, &warm, cfg).or_else(|_| solve_at(sys, polys, t, &z, cfg)) {
            Ok(zn) => {
                trace.push((t, true));
                prev = Some((s, core::mem::replace(&mut z, zn)));
                s = t;
            }
            Err(_) => {
                trace.push((t, false));
                lo = Some(t);
            }
        }
        if lo.is_some() {
            h *= 0.5;
        }
    }
    let lo = lo.unwrap();
    let hi = s;
    let warm: Vec<Complex64> =
        z.iter().enumerate().map(|(i, &v)| Complex64::new(v, 1e-3 * (1.0 + libm::fabs(v)) * (1.0 + i as f64 * 0.01))).collect();
    let complex_below = solve_complex_at(sys, polys, lo, &warm, cfg)
        .is_some_and(|w| w.iter().any(|c| libm::fabs(c.im) > 1e-9 * (1.0 + c.norm())));
    Ok(AbscissaResult {
        sigma: 0.5 * (lo + hi),
        lo,
        hi,
        smallest_singular_value: smallest_singular_value(sys, polys, hi, &z),
        start_singular_value: start_sv,
        complex_below,
        truncation: polys.first().map_or(0, |p| p.n),
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branch::{builtin_spec, BranchStructure};
    use crate::dirichlet::iterate_system;
    use crate::funceq::build_system;
    use crate::triples::TripleCatalog;

    fn setup(name: &str, n: u64) -> (FuncEqSystem, Vec<DirichletPoly>) {
        let bs = BranchStructure::new(builtin_spec(name).unwrap()).unwrap();
        let cat = TripleCatalog::build(&bs.b, bs.field().unwrap()).unwrap();
        let sys = build_system(&bs, &cat).unwrap();
        let it = iterate_system(&sys, n).unwrap();
        (sys, it.per_triple)
    }

    #[test]
    fn large_s_is_constant_terms() {
        let (sys, polys) = setup("a5_wreath", 1000);
        let r = evaluate_tail(&sys, &polys, Complex64::new(100.0, 0.0));
        let z = newton(&r, &[0.5], &SolverConfig::default()).unwrap();
        assert!((z[0] - 1.0).abs() < 1e-12);
        let zeta = assemble_value(&sys, &z, 100.0);
        assert!((zeta - 1.0 - 2.0 * 3f64.powf(-100.0)).abs() < 1e-12);
    }

    #[test]
    fn self_consistency() {
        let (sys, polys) = setup("grigorchuk", 1 << 12);
        for s in [30.0, 40.0] {
            let z = series_values(&polys, s);
            let r = evaluate_tail(&sys, &polys, Complex64::new(s, 0.0));
            let (res, _) = residual(&r, &z);
            assert!(norm_inf(&res) < 1e-12, "{s}: {}", norm_inf(&res));
        }
    }

    #[test]
    fn continuation_matches_series() {
        let (sys, polys) = setup("a5_wreath", 1_000_000);
        let cfg = SolverConfig::default();
        let mut s = 20.0;
        let mut z = solve_at(&sys, &polys, s, &series_values(&polys, s), &cfg).unwrap();
        while s > 5.0 {
            s -= 0.5;
            z = solve_at(&sys, &polys, s, &z, &cfg).unwrap();
        }
        let direct = assemble_value(&sys, &series_values(&polys, 5.0), 5.0);
        assert!((assemble_value(&sys, &z, 5.0) - direct).abs() < 1e-6);
        let (gsys, gpolys) = setup("gupta_sidki_3", 59049);
        let g = solve_at(&gsys, &gpolys, 10.0, &series_values(&gpolys, 10.0), &cfg).unwrap();
        let v = assemble_value(&gsys, &g, 10.0);
        assert!((v - assemble_value(&gsys, &series_values(&gpolys, 10.0), 10.0)).abs() < 1e-8);
        assert!((v - 9.0 - 26.0 * 3f64.powf(-10.0)).abs() < 1e-3);
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = SolverConfig { bisection_tol: 0.0, ..Default::default() };
        assert!(cfg.validate().is_err());
        let cfg = SolverConfig { s_start: 1.0, s_min: 2.0, ..Default::default() };
        assert!(cfg.validate().is_err());
    }
}
