//! Dense complex matrices and the spectral machinery the rest of the crate
//! is built on.
//!
//! Everything downstream evaluates matrix functions through diagonalization:
//! f(M) = P·diag(f(λ₁),…,f(λᵣ))·P⁻¹.  Matrices here are small (r ≤ 4 in all
//! supported workloads), dense, and complex; no attempt is made at blocked or
//! sparse kernels.  Eigenvalues come from the characteristic polynomial
//! (Faddeev–LeVerrier) with Durand–Kerner root finding, which is adequate and
//! fully deterministic at these sizes.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Dense square-or-rectangular complex matrix, row-major storage.
///
/// Entries are validated to be finite on every construction path; arithmetic
/// that could produce NaN/Inf is the caller's responsibility to avoid.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                left: format!("{rows}x{cols}"),
                right: format!("{} entries", data.len()),
            });
        }
        for (k, v) in data.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFinite {
                    row: k / cols,
                    col: k % cols,
                });
            }
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn diagonal(values: &[C64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = values[i];
        }
        m
    }

    /// 1x1 matrix holding a single scalar.
    pub fn scalar(v: C64) -> Self {
        Self {
            rows: 1,
            cols: 1,
            data: vec![v],
        }
    }

    pub fn scaled_identity(n: usize, v: C64) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("{}x{}", other.rows, other.cols),
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| v * s).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("{}x{}", other.rows, other.cols),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        Ok(out)
    }

    /// Shift by a multiple of the identity: self + s·I.
    pub fn shift(&self, s: C64) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            out.data[i * self.cols + i] += s;
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols))
            .map(|i| self.data[i * self.cols + i])
            .sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Frobenius distance relative to max(‖a‖, ‖b‖, floor).
    pub fn rel_distance(&self, other: &Self) -> f64 {
        let diff = match self.sub(other) {
            Ok(d) => d.frobenius_norm(),
            Err(_) => return f64::INFINITY,
        };
        diff / self.frobenius_norm().max(other.frobenius_norm()).max(1e-30)
    }

    /// Solve self · X = B by LU with partial pivoting.
    pub fn solve(&self, b: &Self) -> Result<Self> {
        Lu::factor(self, false)?.solve(b)
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.require_square()?;
        Lu::factor(self, false)?.solve(&Self::identity(n))
    }

    fn require_square(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.rows)
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| {
                    let v = self.get(i, j);
                    format!("{:+.6e}{:+.6e}i", v.re, v.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// LU factorization with partial pivoting.
///
/// `perturb_zero_pivots` replaces an exactly/nearly zero pivot by a tiny
/// multiple of the matrix scale, which is what inverse iteration wants when
/// factoring M − λI at an eigenvalue.
struct Lu {
    n: usize,
    lu: Vec<C64>,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(m: &CMatrix, perturb_zero_pivots: bool) -> Result<Self> {
        let n = m.require_square()?;
        let mut lu = m.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = m.max_abs().max(1e-300);
        for k in 0..n {
            let mut piv = k;
            let mut best = lu[k * n + k].norm();
            for i in k + 1..n {
                let v = lu[i * n + k].norm();
                if v > best {
                    best = v;
                    piv = i;
                }
            }
            if piv != k {
                for j in 0..n {
                    lu.swap(k * n + j, piv * n + j);
                }
                perm.swap(k, piv);
            }
            let mut pivot = lu[k * n + k];
            if pivot.norm() < 1e-280 {
                if !perturb_zero_pivots {
                    return Err(Error::SingularValue(format!(
                        "zero pivot at column {k} during LU"
                    )));
                }
                pivot = C64::new(f64::EPSILON * scale, 0.0);
                lu[k * n + k] = pivot;
            }
            for i in k + 1..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                for j in k + 1..n {
                    let sub = factor * lu[k * n + j];
                    lu[i * n + j] -= sub;
                }
            }
        }
        Ok(Self { n, lu, perm })
    }

    fn solve(&self, b: &CMatrix) -> Result<CMatrix> {
        if b.rows != self.n {
            return Err(Error::DimensionMismatch {
                left: format!("{}x{}", self.n, self.n),
                right: format!("{}x{}", b.rows, b.cols),
            });
        }
        let n = self.n;
        let mut x = CMatrix::zeros(n, b.cols);
        for i in 0..n {
            for j in 0..b.cols {
                x.data[i * b.cols + j] = b.data[self.perm[i] * b.cols + j];
            }
        }
        for k in 0..n {
            for i in k + 1..n {
                let f = self.lu[i * n + k];
                for j in 0..b.cols {
                    let sub = f * x.data[k * b.cols + j];
                    x.data[i * b.cols + j] -= sub;
                }
            }
        }
        for k in (0..n).rev() {
            let d = self.lu[k * n + k];
            for j in 0..b.cols {
                let mut s = x.data[k * b.cols + j];
                for i in k + 1..n {
                    s -= self.lu[k * n + i] * x.data[i * b.cols + j];
                }
                x.data[k * b.cols + j] = s / d;
            }
        }
        Ok(x)
    }
}

/// Characteristic polynomial coefficients by Faddeev–LeVerrier.
///
/// Returns c so that p(λ) = λⁿ + c[0]·λⁿ⁻¹ + … + c[n−1].
fn char_poly(m: &CMatrix) -> Result<Vec<C64>> {
    let n = m.require_square()?;
    let mut coeffs = Vec::with_capacity(n);
    let mut mk = m.clone();
    for k in 1..=n {
        let ck = -mk.trace() / (k as f64);
        coeffs.push(ck);
        if k < n {
            mk = m.matmul(&mk.shift(ck))?;
        }
    }
    Ok(coeffs)
}

fn poly_eval(coeffs: &[C64], z: C64) -> C64 {
    let mut p = ONE;
    for &c in coeffs {
        p = p * z + c;
    }
    p
}

/// Horner evaluation with an explicit leading coefficient in `full[0]`.
fn poly_eval_full(full: &[C64], z: C64) -> C64 {
    let mut p = full[0];
    for &c in &full[1..] {
        p = p * z + c;
    }
    p
}

fn poly_derive_full(full: &[C64]) -> Vec<C64> {
    let deg = full.len() - 1;
    (0..deg).map(|i| full[i] * ((deg - i) as f64)).collect()
}

/// Newton-polish a root of the (mult−1)-th derivative of the monic
/// polynomial λⁿ + coeffs·…, where a mult-fold root of p is simple.
fn polish_multiple_root(coeffs: &[C64], z0: C64, mult: usize) -> C64 {
    let mut full = vec![ONE];
    full.extend_from_slice(coeffs);
    for _ in 1..mult {
        full = poly_derive_full(&full);
    }
    if full.len() < 2 {
        return z0;
    }
    let dfull = poly_derive_full(&full);
    let mut z = z0;
    for _ in 0..50 {
        let dp = poly_eval_full(&dfull, z);
        if dp.norm() < 1e-250 {
            break;
        }
        let step = poly_eval_full(&full, z) / dp;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z -= step;
        if step.norm() < 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    // Keep the polish only if it stayed inside the cluster's neighborhood.
    if (z - z0).norm() < 1e-4 * (1.0 + z0.norm()) {
        z
    } else {
        z0
    }
}

/// All roots of λⁿ + c[0]λⁿ⁻¹ + … + c[n−1] by Durand–Kerner iteration.
fn poly_roots(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len();
    if n == 0 {
        return vec![];
    }
    if n == 1 {
        return vec![-coeffs[0]];
    }
    let radius = 1.0 + coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = C64::new(0.4, 0.9);
    let mut z: Vec<C64> = (0..n)
        .map(|k| seed.powu(k as u32 + 1) * radius.min(4.0))
        .collect();
    let scale = radius.max(1.0);
    for _ in 0..400 {
        let mut max_step = 0.0f64;
        for j in 0..n {
            let mut denom = ONE;
            for k in 0..n {
                if k != j {
                    denom *= z[j] - z[k];
                }
            }
            if denom.norm() < 1e-290 {
                denom = C64::new(1e-290, 0.0);
            }
            let step = poly_eval(coeffs, z[j]) / denom;
            z[j] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-15 * scale {
            break;
        }
    }
    // A couple of Newton polish steps sharpen simple roots to machine
    // precision; multiple roots are handled by clustering later.
    let deriv: Vec<C64> = {
        let mut full = vec![ONE];
        full.extend_from_slice(coeffs);
        (0..n).map(|i| full[i] * ((n - i) as f64)).collect()
    };
    for zj in z.iter_mut() {
        for _ in 0..3 {
            let mut dp = deriv[0];
            for &c in &deriv[1..] {
                dp = dp * *zj + c;
            }
            if dp.norm() < 1e-200 {
                break;
            }
            let step = poly_eval(coeffs, *zj) / dp;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            *zj -= step;
            if step.norm() < 1e-16 * scale {
                break;
            }
        }
    }
    z.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    z
}

/// Eigenvalues only, no diagonalizability requirement.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<C64>> {
    Ok(poly_roots(&char_poly(m)?))
}

/// True iff every eigenvalue has strictly positive real part.
///
/// Works for defective matrices too: only the characteristic roots are used.
pub fn is_positive_stable(m: &CMatrix) -> Result<bool> {
    Ok(eigenvalues(m)?.iter().all(|l| l.re > 0.0))
}

/// Diagonalization M = P·diag(eigenvalues)·P⁻¹.
///
/// `transform` holds eigenvectors as columns, ordered to match `eigenvalues`,
/// which are sorted by (Re, Im).
#[derive(Debug, Clone)]
pub struct SpectralForm {
    pub transform: CMatrix,
    pub inverse_transform: CMatrix,
    pub eigenvalues: Vec<C64>,
}

impl SpectralForm {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// P·diag(values)·P⁻¹ for an arbitrary spectrum aligned with this form.
    pub fn recombine(&self, values: &[C64]) -> Result<CMatrix> {
        if values.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: format!("{} eigenvalues", self.dim()),
                right: format!("{} values", values.len()),
            });
        }
        for v in values {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::SingularValue(format!(
                    "non-finite spectral value {v}"
                )));
            }
        }
        let d = CMatrix::diagonal(values);
        self.transform.matmul(&d)?.matmul(&self.inverse_transform)
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        self.recombine(&self.eigenvalues)
    }
}

/// Null-space basis of m within a rank tolerance, by full-pivot elimination.
fn null_space(m: &CMatrix, rank_tol: f64) -> Vec<Vec<C64>> {
    let n = m.rows;
    let mut a = m.data.clone();
    let mut col_of: Vec<usize> = (0..n).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for step in 0..n {
        let mut best = 0.0;
        let mut bi = step;
        let mut bj = step;
        for i in step..n {
            for j in step..n {
                let v = a[i * n + j].norm();
                if v > best {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        }
        if best <= rank_tol {
            break;
        }
        if bi != step {
            for j in 0..n {
                a.swap(step * n + j, bi * n + j);
            }
        }
        if bj != step {
            for i in 0..n {
                a.swap(i * n + step, i * n + bj);
            }
            col_of.swap(step, bj);
        }
        let piv = a[step * n + step];
        for i in step + 1..n {
            let f = a[i * n + step] / piv;
            a[i * n + step] = ZERO;
            for j in step + 1..n {
                let sub = f * a[step * n + j];
                a[i * n + j] -= sub;
            }
        }
        pivots.push((step, step));
    }
    let rank = pivots.len();
    let mut basis = Vec::new();
    for free in rank..n {
        // Solve for pivot variables with permuted free variable = 1.
        let mut xp = vec![ZERO; n];
        xp[free] = ONE;
        for k in (0..rank).rev() {
            let mut s = ZERO;
            for j in k + 1..n {
                s += a[k * n + j] * xp[j];
            }
            xp[k] = -s / a[k * n + k];
        }
        let mut x = vec![ZERO; n];
        for (permuted, original) in col_of.iter().enumerate() {
            x[*original] = xp[permuted];
        }
        let norm = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        for v in x.iter_mut() {
            *v /= norm;
        }
        basis.push(x);
    }
    basis
}

fn normalize_phase(v: &mut [C64]) {
    let mut idx = 0;
    let mut best = 0.0;
    for (k, x) in v.iter().enumerate() {
        if x.norm() > best + 1e-14 {
            best = x.norm();
            idx = k;
        }
    }
    let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 || v[idx].norm() == 0.0 {
        return;
    }
    let phase = v[idx] / v[idx].norm();
    for x in v.iter_mut() {
        *x /= phase * norm;
    }
}

fn try_decompose(
    m: &CMatrix,
    coeffs: &[C64],
    roots: &[C64],
    cluster_tol: f64,
) -> Result<SpectralForm> {
    let n = m.rows;
    let fro = m.frobenius_norm().max(1.0);

    // Greedy clustering over (Re, Im)-sorted roots.
    let mut clusters: Vec<Vec<C64>> = Vec::new();
    for &r in roots {
        match clusters.last_mut() {
            Some(c) if (r - *c.last().unwrap()).norm() <= cluster_tol => c.push(r),
            _ => clusters.push(vec![r]),
        }
    }

    let mut pairs: Vec<(C64, Vec<C64>)> = Vec::new();
    for cluster in &clusters {
        let mut center = cluster.iter().sum::<C64>() / (cluster.len() as f64);
        if cluster.len() > 1 {
            center = polish_multiple_root(coeffs, center, cluster.len());
        }
        let shifted = m.shift(-center);
        let basis = null_space(&shifted, 1e-8 * fro);
        if basis.len() < cluster.len() {
            return Err(Error::NonDiagonalizable(format!(
                "eigenvalue {center} has algebraic multiplicity {} but eigenspace dimension {}",
                cluster.len(),
                basis.len()
            )));
        }
        if cluster.len() == 1 {
            // Inverse iteration with Rayleigh updates polishes simple pairs
            // to machine precision.
            let mut lambda = center;
            let mut v = basis[0].clone();
            for _ in 0..3 {
                let shifted = m.shift(-lambda);
                let lu = Lu::factor(&shifted, true)?;
                let b = CMatrix::new(n, 1, v.clone())?;
                let w = lu.solve(&b)?;
                let norm = w.frobenius_norm();
                if !norm.is_finite() || norm == 0.0 {
                    break;
                }
                v = w.data.iter().map(|&x| x / norm).collect();
                let av = m.matmul(&CMatrix::new(n, 1, v.clone())?)?;
                let num: C64 = v.iter().zip(&av.data).map(|(a, b)| a.conj() * b).sum();
                let den: f64 = v.iter().map(|a| a.norm_sqr()).sum();
                let next = num / den;
                if !next.re.is_finite() || !next.im.is_finite() {
                    break;
                }
                if (next - lambda).norm() < 1e-16 * fro {
                    lambda = next;
                    break;
                }
                lambda = next;
            }
            pairs.push((lambda, v));
        } else {
            for b in basis.into_iter().take(cluster.len()) {
                pairs.push((center, b));
            }
        }
    }

    if pairs.len() != n {
        return Err(Error::NonDiagonalizable(format!(
            "found {} eigenvectors for dimension {}",
            pairs.len(),
            n
        )));
    }

    pairs.sort_by(|a, b| {
        a.0.re
            .partial_cmp(&b.0.re)
            .unwrap()
            .then(a.0.im.partial_cmp(&b.0.im).unwrap())
    });

    let mut transform = CMatrix::zeros(n, n);
    let mut eigs = Vec::with_capacity(n);
    for (j, (lambda, mut v)) in pairs.into_iter().enumerate() {
        normalize_phase(&mut v);
        for i in 0..n {
            transform.set(i, j, v[i]);
        }
        eigs.push(lambda);
    }

    let inverse_transform = transform
        .inverse()
        .map_err(|_| Error::NonDiagonalizable("eigenvector matrix is singular".into()))?;
    let cond = transform.frobenius_norm() * inverse_transform.frobenius_norm();
    if cond > 1e8 {
        return Err(Error::NonDiagonalizable(format!(
            "eigenvector condition number {cond:.2e} exceeds 1e8"
        )));
    }
    let form = SpectralForm {
        transform,
        inverse_transform,
        eigenvalues: eigs,
    };
    let recon = form.to_matrix()?;
    let err = recon.sub(m)?.frobenius_norm();
    if err > 1e-9 * fro {
        return Err(Error::NonDiagonalizable(format!(
            "reconstruction error {err:.2e} exceeds tolerance"
        )));
    }
    Ok(form)
}

/// Diagonalize a square complex matrix.
///
/// Rejects defective matrices and eigenvector bases with Frobenius condition
/// number above 1e8.  Eigenvalue clusters are resolved at width 1e-6·scale
/// first, then 1e-9·scale if the wider pass cannot be completed; genuinely
/// closer distinct eigenvalues are reported as non-diagonalizable.
pub fn spectral_decompose(m: &CMatrix) -> Result<SpectralForm> {
    let coeffs = char_poly(m)?;
    let roots = poly_roots(&coeffs);
    let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
    match try_decompose(m, &coeffs, &roots, 1e-6 * scale) {
        Ok(f) => Ok(f),
        Err(first) => try_decompose(m, &coeffs, &roots, 1e-9 * scale).map_err(|_| first),
    }
}

/// f(M) through the spectral form: P·diag(f(λᵢ))·P⁻¹.
pub fn apply_scalar_function(
    form: &SpectralForm,
    f: impl Fn(C64) -> Result<C64>,
) -> Result<CMatrix> {
    let values: Result<Vec<C64>> = form.eigenvalues.iter().map(|&l| f(l)).collect();
    form.recombine(&values?)
}

/// tᴬ = exp(A·ln t) for real t > 0.
pub fn matrix_power_base(t: f64, a: &CMatrix) -> Result<CMatrix> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveBase(t));
    }
    let form = spectral_decompose(a)?;
    let lnt = t.ln();
    apply_scalar_function(&form, |l| Ok((l * lnt).exp()))
}

/// A commuting family: one shared eigenvector basis, one spectrum per member.
#[derive(Debug, Clone)]
pub struct CommutingFamily {
    pub transform: CMatrix,
    pub inverse_transform: CMatrix,
    pub members: Vec<(String, Vec<C64>)>,
}

impl CommutingFamily {
    pub fn dim(&self) -> usize {
        self.transform.rows()
    }

    pub fn member(&self, idx: usize) -> Result<CMatrix> {
        let (_, eigs) = self
            .members
            .get(idx)
            .ok_or_else(|| Error::InvalidParams(format!("no family member {idx}")))?;
        self.matrix_from_eigenvalues(eigs)
    }

    pub fn matrix_from_eigenvalues(&self, eigs: &[C64]) -> Result<CMatrix> {
        let d = CMatrix::diagonal(eigs);
        self.transform.matmul(&d)?.matmul(&self.inverse_transform)
    }
}

/// Deterministic random commuting family.
///
/// Eigenvalue real parts are drawn from `re_range` with pairwise separation
/// at least 4% of the range width per member; imaginary parts from
/// (−0.25, 0.25).  The shared eigenvector basis is redrawn until its
/// Frobenius condition number is at most 100.
pub fn make_commuting_family(
    seed: u64,
    count: usize,
    r: usize,
    re_range: (f64, f64),
) -> Result<CommutingFamily> {
    if r == 0 || r > 4 {
        return Err(Error::InvalidParams(format!(
            "family dimension {r} outside supported range 1..=4"
        )));
    }
    if !(re_range.1 > re_range.0) {
        return Err(Error::InvalidParams(format!(
            "empty eigenvalue range ({}, {})",
            re_range.0, re_range.1
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let (transform, inverse_transform) = if r == 1 {
        (CMatrix::identity(1), CMatrix::identity(1))
    } else {
        let mut found = None;
        for _ in 0..200 {
            let data: Vec<C64> = (0..r * r)
                .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let p = CMatrix::new(r, r, data)?;
            if let Ok(pinv) = p.inverse() {
                if p.frobenius_norm() * pinv.frobenius_norm() <= 100.0 {
                    found = Some((p, pinv));
                    break;
                }
            }
        }
        found.ok_or_else(|| {
            Error::InvalidParams("could not draw a well-conditioned transform".into())
        })?
    };

    let sep = 0.04 * (re_range.1 - re_range.0);
    let mut members = Vec::with_capacity(count);
    for m in 0..count {
        let mut eigs: Vec<C64> = Vec::with_capacity(r);
        let mut guard = 0;
        while eigs.len() < r {
            let re = rng.gen_range(re_range.0..re_range.1);
            let im = rng.gen_range(-0.25..0.25);
            if eigs.iter().all(|e| (e.re - re).abs() >= sep) {
                eigs.push(C64::new(re, im));
            } else {
                guard += 1;
                if guard > 10_000 {
                    return Err(Error::InvalidParams(
                        "eigenvalue separation unreachable for requested range".into(),
                    ));
                }
            }
        }
        members.push((format!("M{m}"), eigs));
    }

    Ok(CommutingFamily {
        transform,
        inverse_transform,
        members,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn mat(rows: usize, cols: usize, entries: &[(f64, f64)]) -> CMatrix {
        CMatrix::new(
            rows,
            cols,
            entries.iter().map(|&(re, im)| c(re, im)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn rejects_non_finite_entries() {
        let err = CMatrix::new(1, 2, vec![c(1.0, 0.0), c(f64::NAN, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::NonFinite { row: 0, col: 1 }));
    }

    #[test]
    fn matmul_identity_roundtrip() {
        let a = mat(2, 2, &[(1.0, 0.5), (2.0, 0.0), (0.0, -1.0), (3.0, 0.25)]);
        let i = CMatrix::identity(2);
        assert_eq!(a.matmul(&i).unwrap(), a);
        assert_eq!(i.matmul(&a).unwrap(), a);
    }

    #[test]
    fn solve_and_inverse_agree() {
        let a = mat(
            3,
            3,
            &[
                (2.0, 0.0),
                (1.0, 0.3),
                (0.0, 0.0),
                (-1.0, 0.0),
                (3.0, 0.0),
                (0.5, -0.2),
                (0.0, 0.1),
                (0.0, 0.0),
                (1.5, 0.0),
            ],
        );
        let inv = a.inverse().unwrap();
        let recon = a.matmul(&inv).unwrap();
        assert!(recon.rel_distance(&CMatrix::identity(3)) < 1e-13);
    }

    #[test]
    fn singular_matrix_reports_singular_value() {
        let a = mat(2, 2, &[(1.0, 0.0), (2.0, 0.0), (2.0, 0.0), (4.0, 0.0)]);
        assert!(matches!(a.inverse(), Err(Error::SingularValue(_))));
    }

    #[test]
    fn diagonal_matrix_decomposes_exactly() {
        let a = CMatrix::diagonal(&[c(0.7, 0.1), c(1.9, -0.3)]);
        let f = spectral_decompose(&a).unwrap();
        assert!((f.eigenvalues[0] - c(0.7, 0.1)).norm() < 1e-14);
        assert!((f.eigenvalues[1] - c(1.9, -0.3)).norm() < 1e-14);
    }

    #[test]
    fn eigenvalues_sorted_by_re_then_im() {
        let a = CMatrix::diagonal(&[c(2.0, 0.0), c(0.5, 0.5), c(0.5, -0.5)]);
        let f = spectral_decompose(&a).unwrap();
        assert!((f.eigenvalues[0] - c(0.5, -0.5)).norm() < 1e-13);
        assert!((f.eigenvalues[1] - c(0.5, 0.5)).norm() < 1e-13);
        assert!((f.eigenvalues[2] - c(2.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn non_diagonal_matrix_reconstructs() {
        // [[1, 1], [0, 2]] has eigenvalues 1 and 2.
        let a = mat(2, 2, &[(1.0, 0.0), (1.0, 0.0), (0.0, 0.0), (2.0, 0.0)]);
        let f = spectral_decompose(&a).unwrap();
        assert!((f.eigenvalues[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((f.eigenvalues[1] - c(2.0, 0.0)).norm() < 1e-12);
        let recon = f.to_matrix().unwrap();
        assert!(recon.rel_distance(&a) < 1e-12);
    }

    #[test]
    fn repeated_eigenvalue_with_full_eigenspace_is_fine() {
        // 2·I with an extra distinct eigenvalue.
        let a = CMatrix::diagonal(&[c(2.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
        let f = spectral_decompose(&a).unwrap();
        assert_eq!(f.eigenvalues.len(), 3);
        assert!(f.to_matrix().unwrap().rel_distance(&a) < 1e-12);
    }

    #[test]
    fn jordan_block_is_rejected() {
        let a = mat(2, 2, &[(1.0, 0.0), (1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        assert!(matches!(
            spectral_decompose(&a),
            Err(Error::NonDiagonalizable(_))
        ));
    }

    #[test]
    fn positive_stability_works_on_defective_matrices() {
        let good = mat(2, 2, &[(1.0, 0.0), (1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        assert!(is_positive_stable(&good).unwrap());
        let bad = mat(2, 2, &[(-0.5, 0.0), (1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        assert!(!is_positive_stable(&bad).unwrap());
    }

    #[test]
    fn matrix_power_matches_scalar_power() {
        let a = CMatrix::diagonal(&[c(0.5, 0.0), c(1.25, 0.0)]);
        let p = matrix_power_base(2.0, &a).unwrap();
        assert!((p.get(0, 0) - c(2f64.powf(0.5), 0.0)).norm() < 1e-14);
        assert!((p.get(1, 1) - c(2f64.powf(1.25), 0.0)).norm() < 1e-14);
        assert!(matches!(
            matrix_power_base(0.0, &a),
            Err(Error::NonPositiveBase(_))
        ));
    }

    #[test]
    fn matrix_power_on_rotated_matrix() {
        let fam = make_commuting_family(7, 1, 3, (0.6, 2.4)).unwrap();
        let a = fam.member(0).unwrap();
        let p = matrix_power_base(1.7, &a).unwrap();
        // tᴬ·t⁻ᴬ = I
        let pinv = matrix_power_base(1.0 / 1.7, &a).unwrap();
        assert!(p.matmul(&pinv).unwrap().rel_distance(&CMatrix::identity(3)) < 1e-10);
    }

    #[test]
    fn family_members_commute() {
        let fam = make_commuting_family(42, 3, 4, (0.6, 2.4)).unwrap();
        for i in 0..3 {
            for j in i + 1..3 {
                let a = fam.member(i).unwrap();
                let b = fam.member(j).unwrap();
                let ab = a.matmul(&b).unwrap();
                let ba = b.matmul(&a).unwrap();
                let rel = ab.sub(&ba).unwrap().frobenius_norm()
                    / (a.frobenius_norm() * b.frobenius_norm());
                assert!(rel < 1e-9, "commutator too large: {rel:.2e}");
            }
        }
    }

    #[test]
    fn family_generation_is_deterministic() {
        let f1 = make_commuting_family(99, 2, 3, (0.6, 2.4)).unwrap();
        let f2 = make_commuting_family(99, 2, 3, (0.6, 2.4)).unwrap();
        assert_eq!(f1.transform, f2.transform);
        assert_eq!(f1.members, f2.members);
        let f3 = make_commuting_family(100, 2, 3, (0.6, 2.4)).unwrap();
        assert_ne!(f1.members, f3.members);
    }

    #[test]
    fn family_member_decomposes_to_drawn_spectrum() {
        let fam = make_commuting_family(5, 1, 4, (0.6, 2.4)).unwrap();
        let a = fam.member(0).unwrap();
        let f = spectral_decompose(&a).unwrap();
        let mut want = fam.members[0].1.clone();
        want.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        for (got, want) in f.eigenvalues.iter().zip(&want) {
            assert!(
                (got - want).norm() < 1e-10,
                "eigenvalue drift: {got} vs {want}"
            );
        }
    }

    #[test]
    fn apply_scalar_function_exp_on_commuting_pair() {
        let fam = make_commuting_family(11, 2, 2, (0.6, 2.4)).unwrap();
        let a = fam.member(0).unwrap();
        let f = spectral_decompose(&a).unwrap();
        let ea = apply_scalar_function(&f, |l| Ok(l.exp())).unwrap();
        // exp(A) commutes with A
        let lhs = ea.matmul(&a).unwrap();
        let rhs = a.matmul(&ea).unwrap();
        assert!(lhs.rel_distance(&rhs) < 1e-12);
    }
}
