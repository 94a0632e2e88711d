//! Lattice series evaluation of the incomplete Lauricella matrix functions
//! and the hypergeometric kernels used by their integral representations.
//!
//! A parameter bundle is reduced to scalars through one simultaneous
//! diagonalization of all its matrices, each joint eigenvalue tuple is summed
//! independently, and the results are recombined once.  Summation walks the
//! lattice shell by shell (constant m₁+…+mₙ); incomplete Pochhammer symbols
//! are computed directly per total order rather than by forward recurrence,
//! which would be unstable for the lower kind.

pub mod lattice;

pub use lattice::{ilmf_lattice, theta_apply, Lattice};

use crate::error::{Error, Result};
use crate::linalg::{spectral_decompose, CMatrix, C64};
use crate::params::{Evaluation, Family, IlmfParams, Kind, SeriesPolicy};
use crate::special::inc_poch_scalar_pair;

/// Simultaneous diagonalization of a commuting set: one transform, one
/// spectrum per input matrix, aligned by position.
///
/// The transform is found by diagonalizing a fixed-weight linear combination
/// of the inputs, then verified against every member; inputs that do not
/// commute (or do not share an eigenbasis) are rejected.
#[derive(Debug, Clone)]
pub struct JointSpectra {
    pub transform: CMatrix,
    pub inverse_transform: CMatrix,
    pub spectra: Vec<Vec<C64>>,
}

impl JointSpectra {
    pub fn new(mats: &[&CMatrix]) -> Result<Self> {
        if mats.is_empty() {
            return Err(Error::InvalidParams("no matrices to diagonalize".into()));
        }
        let r = mats[0].rows();
        for m in mats {
            if !m.is_square() || m.rows() != r {
                return Err(Error::DimensionMismatch {
                    left: format!("{r}x{r}"),
                    right: format!("{}x{}", m.rows(), m.cols()),
                });
            }
        }
        if r == 1 {
            return Ok(Self {
                transform: CMatrix::identity(1),
                inverse_transform: CMatrix::identity(1),
                spectra: mats.iter().map(|m| vec![m.get(0, 0)]).collect(),
            });
        }

        let weight_sets: [fn(usize) -> f64; 2] = [
            |j| (j as f64 + 2.0).sqrt(),
            |j| (j as f64 + 1.5).powf(1.0 / 3.0) + 0.618 * j as f64,
        ];
        let mut last_err = None;
        for weights in weight_sets {
            let mut combo = CMatrix::zeros(r, r);
            for (j, m) in mats.iter().enumerate() {
                combo = combo.add(&m.scale(C64::new(weights(j), 0.0)))?;
            }
            let form = match spectral_decompose(&combo) {
                Ok(f) => f,
                Err(e) => {
                    last_err = Some(e);
                    continue;
                }
            };
            match Self::project(mats, &form.transform, &form.inverse_transform) {
                Ok(spectra) => {
                    return Ok(Self {
                        transform: form.transform,
                        inverse_transform: form.inverse_transform,
                        spectra,
                    })
                }
                Err(e) => last_err = Some(e),
            }
        }
        Err(last_err.unwrap_or_else(|| Error::NotCommuting("joint diagonalization failed".into())))
    }

    fn project(
        mats: &[&CMatrix],
        transform: &CMatrix,
        inverse_transform: &CMatrix,
    ) -> Result<Vec<Vec<C64>>> {
        let r = transform.rows();
        let mut spectra = Vec::with_capacity(mats.len());
        for m in mats {
            let d = inverse_transform.matmul(m)?.matmul(transform)?;
            let mut off = 0.0f64;
            for i in 0..r {
                for j in 0..r {
                    if i != j {
                        off += d.get(i, j).norm_sqr();
                    }
                }
            }
            let off = off.sqrt();
            if off > 1e-8 * m.frobenius_norm().max(1.0) {
                return Err(Error::NotCommuting(format!(
                    "off-diagonal residue {off:.2e} after joint transform"
                )));
            }
            spectra.push((0..r).map(|i| d.get(i, i)).collect());
        }
        Ok(spectra)
    }

    pub fn dim(&self) -> usize {
        self.transform.rows()
    }

    pub fn recombine(&self, values: &[C64]) -> Result<CMatrix> {
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
}

/// Incomplete (or complete) Pochhammer symbols of one scalar base, tabulated
/// over the total order.
///
/// The lower/upper values are computed independently per order from the
/// incomplete gamma pair at a+M; the complete kind uses the stable ascending
/// product.
pub struct IncSymbols {
    a: C64,
    x: f64,
    kind: Kind,
    vals: Vec<C64>,
}

impl IncSymbols {
    pub fn new(a: C64, x: f64, kind: Kind) -> Self {
        Self {
            a,
            x,
            kind,
            vals: Vec::new(),
        }
    }

    pub fn get(&mut self, m: usize) -> Result<C64> {
        while self.vals.len() <= m {
            let k = self.vals.len();
            let v = match self.kind {
                Kind::Complete => {
                    if k == 0 {
                        C64::new(1.0, 0.0)
                    } else {
                        self.vals[k - 1] * (self.a + (k - 1) as f64)
                    }
                }
                Kind::Lower => inc_poch_scalar_pair(self.a, k, self.x)?.0,
                Kind::Upper => inc_poch_scalar_pair(self.a, k, self.x)?.1,
            };
            self.vals.push(v);
        }
        Ok(self.vals[m])
    }
}

fn check_not_nonpositive_integer(label: &str, l: C64) -> Result<()> {
    if l.im.abs() < 1e-12 && l.re < 0.5 {
        let k = l.re.round();
        if k <= 0.0 && (l.re - k).abs() < 1e-12 {
            return Err(Error::SingularValue(format!(
                "{label} eigenvalue {l} is a non-positive integer"
            )));
        }
    }
    Ok(())
}

/// Scalar lattice sum for one joint-eigenvalue tuple.
struct ShellEngine<'p> {
    family: Family,
    b: Vec<C64>,
    c: Vec<C64>,
    z: Vec<C64>,
    policy: &'p SeriesPolicy,
    sym: IncSymbols,
    ratio: Vec<C64>,
    fac: Vec<Vec<C64>>,
}

struct ShellOutcome {
    value: C64,
    terms: usize,
    tail: f64,
    truncated: bool,
}

impl<'p> ShellEngine<'p> {
    fn new(
        family: Family,
        kind: Kind,
        a: C64,
        x: f64,
        b: Vec<C64>,
        c: Vec<C64>,
        z: Vec<C64>,
        policy: &'p SeriesPolicy,
    ) -> Result<Self> {
        if kind.is_incomplete() && a.re <= 0.0 {
            return Err(Error::NotPositiveStable(format!(
                "incomplete symbol base eigenvalue {a}"
            )));
        }
        for l in &c {
            check_not_nonpositive_integer("C", *l)?;
        }
        let n = z.len();
        let g = policy.z_guard;
        let violated = match family {
            Family::A => z.iter().map(|z| z.norm()).sum::<f64>() > g,
            Family::C => z.iter().map(|z| z.norm().sqrt()).sum::<f64>() > g.sqrt(),
            Family::D => z.iter().map(|z| z.norm()).fold(0.0, f64::max) > g,
        };
        if violated {
            return Err(Error::GuardViolation(format!(
                "family {} argument norms exceed guard {g}",
                family.as_str()
            )));
        }
        Ok(Self {
            family,
            b,
            c,
            z,
            policy,
            sym: IncSymbols::new(a, x, kind),
            ratio: vec![C64::new(1.0, 0.0)],
            fac: vec![vec![C64::new(1.0, 0.0)]; n],
        })
    }

    /// Coupled factor at total order m: the incomplete symbol times the
    /// family's coupled numerator/denominator ratio.
    fn shell_factor(&mut self, m: usize) -> Result<C64> {
        while self.ratio.len() <= m {
            let k = self.ratio.len() - 1;
            let prev = self.ratio[k];
            let next = match self.family {
                Family::A => prev,
                Family::C => prev * (self.b[0] + k as f64),
                Family::D => {
                    let denom = self.c[0] + k as f64;
                    if denom.norm() < 1e-250 {
                        return Err(Error::SingularValue(format!(
                            "(C)_{} vanishes at eigenvalue {}",
                            k + 1,
                            self.c[0]
                        )));
                    }
                    prev / denom
                }
            };
            self.ratio.push(next);
        }
        Ok(self.sym.get(m)? * self.ratio[m])
    }

    /// Per-index factor tables, z-powers and factorials included.
    fn extend_fac(&mut self, upto: usize) -> Result<()> {
        let n = self.z.len();
        for i in 0..n {
            while self.fac[i].len() <= upto {
                let k = self.fac[i].len() - 1;
                let prev = self.fac[i][k];
                let kk = k as f64;
                let next = match self.family {
                    Family::A => {
                        let denom = (self.c[i] + kk) * (kk + 1.0);
                        prev * (self.b[i] + kk) * self.z[i] / denom
                    }
                    Family::C => {
                        let denom = (self.c[i] + kk) * (kk + 1.0);
                        prev * self.z[i] / denom
                    }
                    Family::D => prev * (self.b[i] + kk) * self.z[i] / (kk + 1.0),
                };
                self.fac[i].push(next);
            }
        }
        Ok(())
    }

    fn run(&mut self) -> Result<ShellOutcome> {
        let n = self.z.len();
        let per_index = self.policy.max_order_per_index;
        let max_total = self.policy.max_total_order;
        let mut total = C64::new(0.0, 0.0);
        let mut terms = 0usize;
        let mut below = 0usize;
        let mut last = 0.0f64;
        let mut converged = false;
        let mut buf = vec![0usize; n];
        for m in 0..=max_total {
            if m > n * per_index {
                break;
            }
            self.extend_fac(m.min(per_index))?;
            let factor = self.shell_factor(m)?;
            let mut shell_sum = C64::new(0.0, 0.0);
            let mut count = 0usize;
            compositions(m, per_index, &mut buf, 0, &mut |mm| {
                let mut p = C64::new(1.0, 0.0);
                for (i, &k) in mm.iter().enumerate() {
                    p *= self.fac[i][k];
                }
                shell_sum += p;
                count += 1;
            });
            if count == 0 {
                break;
            }
            let shell_val = factor * shell_sum;
            total += shell_val;
            terms += count;
            last = shell_val.norm();
            if last <= self.policy.tail_tol * total.norm().max(1e-300) {
                below += 1;
                if below >= 2 {
                    converged = true;
                    break;
                }
            } else {
                below = 0;
            }
        }
        if !total.re.is_finite() || !total.im.is_finite() {
            return Err(Error::NoConvergence(
                "series sum overflowed during shell summation".into(),
            ));
        }
        Ok(ShellOutcome {
            value: total,
            terms,
            tail: last,
            truncated: !converged,
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn eval(
        family: Family,
        kind: Kind,
        a: C64,
        x: f64,
        b: Vec<C64>,
        c: Vec<C64>,
        z: Vec<C64>,
        policy: &'p SeriesPolicy,
    ) -> Result<ShellOutcome> {
        Self::new(family, kind, a, x, b, c, z, policy)?.run()
    }
}

/// Visit all (m₁,…,mₙ) with Σmᵢ = total and mᵢ ≤ cap, lexicographically.
fn compositions(total: usize, cap: usize, buf: &mut Vec<usize>, pos: usize, f: &mut impl FnMut(&[usize])) {
    let n = buf.len();
    if pos == n - 1 {
        if total <= cap {
            buf[pos] = total;
            f(buf);
        }
        return;
    }
    for k in 0..=total.min(cap) {
        buf[pos] = k;
        compositions(total - k, cap, buf, pos + 1, f);
    }
}

/// Pull the joint spectra out of a validated parameter bundle in the fixed
/// order A, B₁…, C₁…; returns (joint, a, b-spectra, c-spectra) per slot.
pub(crate) fn joint_for_params(params: &IlmfParams) -> Result<JointSpectra> {
    params.validate()?;
    let mats: Vec<&CMatrix> = params.all_matrices().into_iter().map(|(_, m)| m).collect();
    JointSpectra::new(&mats)
}

/// Evaluate an incomplete Lauricella matrix function by lattice summation.
pub fn ilmf(params: &IlmfParams, policy: &SeriesPolicy) -> Result<Evaluation> {
    let joint = joint_for_params(params)?;
    let x = params.x.unwrap_or(0.0);
    let r = joint.dim();
    let mut values = Vec::with_capacity(r);
    let mut terms = 0usize;
    let mut tail = 0.0f64;
    let mut truncated = false;
    for e in 0..r {
        let a = joint.spectra[0][e];
        let b: Vec<C64> = (0..params.b_list.len())
            .map(|i| joint.spectra[1 + i][e])
            .collect();
        let c: Vec<C64> = (0..params.c_list.len())
            .map(|i| joint.spectra[1 + params.b_list.len() + i][e])
            .collect();
        let out = ShellEngine::eval(
            params.family,
            params.kind,
            a,
            x,
            b,
            c,
            params.z_list.clone(),
            policy,
        )?;
        values.push(out.value);
        terms = terms.max(out.terms);
        tail = tail.max(out.tail);
        truncated |= out.truncated;
    }
    Ok(Evaluation {
        value: joint.recombine(&values)?,
        terms_summed: terms,
        tail_estimate: tail,
        truncated,
    })
}

const KERNEL_MAX_TERMS: usize = 900;

fn kernel_eval(
    joint: &JointSpectra,
    per_slot: impl Fn(usize) -> Result<(C64, usize)>,
) -> Result<Evaluation> {
    let r = joint.dim();
    let mut values = Vec::with_capacity(r);
    let mut terms = 0usize;
    for e in 0..r {
        let (v, t) = per_slot(e)?;
        values.push(v);
        terms = terms.max(t);
    }
    Ok(Evaluation {
        value: joint.recombine(&values)?,
        terms_summed: terms,
        tail_estimate: 0.0,
        truncated: false,
    })
}

/// Scalar ₁F₁(b;c;z) by its ascending series.
pub fn hyp1f1_scalar(b: C64, c: C64, z: C64) -> Result<(C64, usize)> {
    check_not_nonpositive_integer("C", c)?;
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    for m in 0..KERNEL_MAX_TERMS {
        let mm = m as f64;
        term *= (b + mm) * z / ((c + mm) * (mm + 1.0));
        sum += term;
        if term.norm() < 1e-17 * sum.norm().max(1e-300) && m > 3 {
            return Ok((sum, m + 1));
        }
    }
    Err(Error::NoConvergence(format!("1F1(b={b}, c={c}, z={z})")))
}

/// Scalar ₀F₁(;c;z) by its ascending series.
pub fn hyp0f1_scalar(c: C64, z: C64) -> Result<(C64, usize)> {
    check_not_nonpositive_integer("C", c)?;
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    for m in 0..KERNEL_MAX_TERMS {
        let mm = m as f64;
        term *= z / ((c + mm) * (mm + 1.0));
        sum += term;
        if term.norm() < 1e-17 * sum.norm().max(1e-300) && m > 3 {
            return Ok((sum, m + 1));
        }
    }
    Err(Error::NoConvergence(format!("0F1(c={c}, z={z})")))
}

/// Kummer confluent hypergeometric ₁F₁(B;C;z) of commuting matrices.
pub fn hyp1f1(b: &CMatrix, c: &CMatrix, z: C64) -> Result<Evaluation> {
    let joint = JointSpectra::new(&[b, c])?;
    kernel_eval(&joint, |e| {
        hyp1f1_scalar(joint.spectra[0][e], joint.spectra[1][e], z)
    })
}

/// Limit confluent hypergeometric ₀F₁(;C;z).
pub fn hyp0f1(c: &CMatrix, z: C64) -> Result<Evaluation> {
    let joint = JointSpectra::new(&[c])?;
    kernel_eval(&joint, |e| hyp0f1_scalar(joint.spectra[0][e], z))
}

/// Incomplete Gauss hypergeometric:
/// Σₘ sym(A;x)ₘ (B)ₘ (C)⁻¹ₘ zᵐ/m! with the symbol picked by `kind`.
///
/// Radius of convergence is 1 in z; arguments are guarded at |z| ≤ z_guard.
pub fn inc_gauss_2f1(
    kind: Kind,
    a: &CMatrix,
    x: Option<f64>,
    b: &CMatrix,
    c: &CMatrix,
    z: C64,
    policy: &SeriesPolicy,
) -> Result<Evaluation> {
    if z.norm() > policy.z_guard {
        return Err(Error::GuardViolation(format!(
            "|z| = {} exceeds guard {}",
            z.norm(),
            policy.z_guard
        )));
    }
    let params = IlmfParams {
        family: Family::D,
        kind,
        a: a.clone(),
        x,
        b_list: vec![b.clone()],
        c_list: vec![c.clone()],
        z_list: vec![z],
    };
    ilmf(&params, policy)
}

fn multi_guard(z: &[C64], limit: f64) -> Result<()> {
    for zi in z {
        if zi.norm() > limit {
            return Err(Error::GuardViolation(format!(
                "|z_i| = {} exceeds cost guard {limit}",
                zi.norm()
            )));
        }
    }
    Ok(())
}

/// Scalar Humbert Ψ₂-style kernel: Σ_M (b)_M Σ_{|m|=M} Π wᵢ^{mᵢ}/((cᵢ)_{mᵢ} mᵢ!).
pub fn psi2_scalar(b: C64, c: &[C64], w: &[C64]) -> Result<(C64, usize)> {
    for ci in c {
        check_not_nonpositive_integer("C", *ci)?;
    }
    let n = w.len();
    let mut fac: Vec<Vec<C64>> = vec![vec![C64::new(1.0, 0.0)]; n];
    let mut bpoch = C64::new(1.0, 0.0);
    let mut total = C64::new(0.0, 0.0);
    let mut terms = 0usize;
    let mut below = 0usize;
    let mut buf = vec![0usize; n];
    for m in 0..KERNEL_MAX_TERMS {
        for i in 0..n {
            while fac[i].len() <= m {
                let k = fac[i].len() - 1;
                let kk = k as f64;
                let next = fac[i][k] * w[i] / ((c[i] + kk) * (kk + 1.0));
                fac[i].push(next);
            }
        }
        let mut shell = C64::new(0.0, 0.0);
        compositions(m, m, &mut buf, 0, &mut |mm| {
            let mut p = C64::new(1.0, 0.0);
            for (i, &k) in mm.iter().enumerate() {
                p *= fac[i][k];
            }
            shell += p;
            terms += 1;
        });
        let shell_val = bpoch * shell;
        total += shell_val;
        if shell_val.norm() <= 1e-16 * total.norm().max(1e-300) {
            below += 1;
            if below >= 2 {
                return Ok((total, terms));
            }
        } else {
            below = 0;
        }
        bpoch *= b + m as f64;
    }
    Err(Error::NoConvergence(format!("psi2 kernel at b={b}")))
}

/// Scalar Humbert Φ₂-style kernel: Σ_M (c)⁻¹_M Σ_{|m|=M} Π (bᵢ)_{mᵢ} wᵢ^{mᵢ}/mᵢ!.
pub fn phi2_scalar(b: &[C64], c: C64, w: &[C64]) -> Result<(C64, usize)> {
    check_not_nonpositive_integer("C", c)?;
    let n = w.len();
    let mut fac: Vec<Vec<C64>> = vec![vec![C64::new(1.0, 0.0)]; n];
    let mut cpoch_inv = C64::new(1.0, 0.0);
    let mut total = C64::new(0.0, 0.0);
    let mut terms = 0usize;
    let mut below = 0usize;
    let mut buf = vec![0usize; n];
    for m in 0..KERNEL_MAX_TERMS {
        for i in 0..n {
            while fac[i].len() <= m {
                let k = fac[i].len() - 1;
                let kk = k as f64;
                let next = fac[i][k] * (b[i] + kk) * w[i] / (kk + 1.0);
                fac[i].push(next);
            }
        }
        let mut shell = C64::new(0.0, 0.0);
        compositions(m, m, &mut buf, 0, &mut |mm| {
            let mut p = C64::new(1.0, 0.0);
            for (i, &k) in mm.iter().enumerate() {
                p *= fac[i][k];
            }
            shell += p;
            terms += 1;
        });
        let shell_val = cpoch_inv * shell;
        total += shell_val;
        if shell_val.norm() <= 1e-16 * total.norm().max(1e-300) {
            below += 1;
            if below >= 2 {
                return Ok((total, terms));
            }
        } else {
            below = 0;
        }
        cpoch_inv /= c + m as f64;
    }
    Err(Error::NoConvergence(format!("phi2 kernel at c={c}")))
}

/// Scalar incomplete confluent kernel: Σₘ symₘ (c)⁻¹ₘ wᵐ/m! where symₘ is
/// the incomplete Pochhammer table of (a;x) for the requested kind.
pub fn one_g_one_scalar(sym: &mut IncSymbols, c: C64, w: C64) -> Result<(C64, usize)> {
    check_not_nonpositive_integer("C", c)?;
    if w.norm() > 25.0 {
        return Err(Error::GuardViolation(format!(
            "1Γ1 argument |w| = {} exceeds 25",
            w.norm()
        )));
    }
    let mut weight = C64::new(1.0, 0.0);
    let mut total = C64::new(0.0, 0.0);
    let mut below = 0usize;
    for m in 0..160 {
        let term = sym.get(m)? * weight;
        total += term;
        if term.norm() <= 1e-16 * total.norm().max(1e-300) && m > 3 {
            below += 1;
            if below >= 2 {
                return Ok((total, m + 1));
            }
        } else {
            below = 0;
        }
        let mm = m as f64;
        weight *= w / ((c + mm) * (mm + 1.0));
    }
    Err(Error::NoConvergence(format!("1Γ1 kernel at w={w}")))
}

/// Ψ₂-style confluent function of matrix parameters: one coupled numerator
/// B, per-index denominators C_list.
pub fn confluent_psi2(b: &CMatrix, c_list: &[CMatrix], z_list: &[C64]) -> Result<Evaluation> {
    multi_guard(z_list, 10.0)?;
    if c_list.len() != z_list.len() || z_list.is_empty() {
        return Err(Error::InvalidParams(
            "confluent_psi2 needs one C per variable".into(),
        ));
    }
    let mut mats = vec![b];
    mats.extend(c_list.iter());
    let joint = JointSpectra::new(&mats)?;
    kernel_eval(&joint, |e| {
        let c: Vec<C64> = (1..mats.len()).map(|i| joint.spectra[i][e]).collect();
        psi2_scalar(joint.spectra[0][e], &c, z_list)
    })
}

/// Φ₂-style confluent function of matrix parameters: per-index numerators
/// B_list, one coupled denominator C.
pub fn confluent_phi2(b_list: &[CMatrix], c: &CMatrix, z_list: &[C64]) -> Result<Evaluation> {
    multi_guard(z_list, 10.0)?;
    if b_list.len() != z_list.len() || z_list.is_empty() {
        return Err(Error::InvalidParams(
            "confluent_phi2 needs one B per variable".into(),
        ));
    }
    let mut mats: Vec<&CMatrix> = b_list.iter().collect();
    mats.push(c);
    let joint = JointSpectra::new(&mats)?;
    kernel_eval(&joint, |e| {
        let b: Vec<C64> = (0..b_list.len()).map(|i| joint.spectra[i][e]).collect();
        phi2_scalar(&b, joint.spectra[b_list.len()][e], z_list)
    })
}

/// Incomplete confluent function ₁Γ₁[(A;x); C; z] (or its upper/complete
/// variants) of matrix parameters.
pub fn inc_confluent_1g1(
    kind: Kind,
    a: &CMatrix,
    x: Option<f64>,
    c: &CMatrix,
    z: C64,
) -> Result<Evaluation> {
    if kind.is_incomplete() && x.is_none() {
        return Err(Error::InvalidParams("incomplete kind requires x".into()));
    }
    let joint = JointSpectra::new(&[a, c])?;
    if kind.is_incomplete() {
        if let Some(l) = joint.spectra[0].iter().find(|l| l.re <= 0.0) {
            return Err(Error::NotPositiveStable(l.to_string()));
        }
    }
    kernel_eval(&joint, |e| {
        let mut sym = IncSymbols::new(joint.spectra[0][e], x.unwrap_or(0.0), kind);
        one_g_one_scalar(&mut sym, joint.spectra[1][e], z)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::make_commuting_family;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn scalar_params(family: Family, kind: Kind, a: f64, x: Option<f64>, bs: &[f64], cs: &[f64], zs: &[f64]) -> IlmfParams {
        IlmfParams {
            family,
            kind,
            a: CMatrix::scalar(c(a, 0.0)),
            x,
            b_list: bs.iter().map(|&v| CMatrix::scalar(c(v, 0.0))).collect(),
            c_list: cs.iter().map(|&v| CMatrix::scalar(c(v, 0.0))).collect(),
            z_list: zs.iter().map(|&v| c(v, 0.0)).collect(),
        }
    }

    #[test]
    fn hyp1f1_known_value() {
        // ₁F₁(1;2;1) = e − 1
        let v = hyp1f1(
            &CMatrix::scalar(c(1.0, 0.0)),
            &CMatrix::scalar(c(2.0, 0.0)),
            c(1.0, 0.0),
        )
        .unwrap();
        assert!((v.value.get(0, 0).re - (1f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn hyp0f1_is_bessel_in_disguise() {
        // ₀F₁(;1;−z²/4) = J₀(z)
        let v = hyp0f1(&CMatrix::scalar(c(1.0, 0.0)), c(-0.25, 0.0)).unwrap();
        assert!((v.value.get(0, 0).re - 0.7651976865579666).abs() < 1e-13);
    }

    #[test]
    fn complete_gauss_collapse() {
        // ₂F₁(1,1;2;1/2) = 2 ln 2
        let p = scalar_params(Family::D, Kind::Complete, 1.0, None, &[1.0], &[2.0], &[0.5]);
        let v = ilmf(&p, &SeriesPolicy::default()).unwrap();
        assert!((v.value.get(0, 0).re - 2.0 * 2f64.ln()).abs() < 1e-13);
        // |z| right at the guard boundary stops on the per-index cap with a
        // tail just above tail_tol; the flag must say so.
        assert!(v.truncated);
        assert!(v.tail_estimate < 1e-12);
    }

    #[test]
    fn families_collapse_to_same_series_at_one_variable() {
        let policy = SeriesPolicy::default();
        let mk = |family| {
            scalar_params(family, Kind::Lower, 1.3, Some(0.9), &[0.8], &[1.6], &[0.3])
        };
        let va = ilmf(&mk(Family::A), &policy).unwrap().value;
        let vc = ilmf(&mk(Family::C), &policy).unwrap().value;
        let vd = ilmf(&mk(Family::D), &policy).unwrap().value;
        assert!(va.rel_distance(&vc) < 1e-14);
        assert!(va.rel_distance(&vd) < 1e-14);
        let vg = inc_gauss_2f1(
            Kind::Lower,
            &CMatrix::scalar(c(1.3, 0.0)),
            Some(0.9),
            &CMatrix::scalar(c(0.8, 0.0)),
            &CMatrix::scalar(c(1.6, 0.0)),
            c(0.3, 0.0),
            &policy,
        )
        .unwrap()
        .value;
        assert!(va.rel_distance(&vg) < 1e-14);
    }

    #[test]
    fn incomplete_gauss_decomposition() {
        let policy = SeriesPolicy::default();
        let a = CMatrix::scalar(c(1.0, 0.0));
        let b = CMatrix::scalar(c(1.0, 0.0));
        let cc = CMatrix::scalar(c(2.0, 0.0));
        let z = c(0.5, 0.0);
        let lo = inc_gauss_2f1(Kind::Lower, &a, Some(0.7), &b, &cc, z, &policy).unwrap();
        let hi = inc_gauss_2f1(Kind::Upper, &a, Some(0.7), &b, &cc, z, &policy).unwrap();
        let sum = lo.value.add(&hi.value).unwrap();
        assert!((sum.get(0, 0).re - 2.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn guard_violations_per_family() {
        let policy = SeriesPolicy::default();
        let p = scalar_params(Family::A, Kind::Complete, 1.0, None, &[1.0, 1.0], &[2.0, 2.0], &[0.3, 0.3]);
        assert!(matches!(ilmf(&p, &policy), Err(Error::GuardViolation(_))));
        let p = scalar_params(Family::D, Kind::Complete, 1.0, None, &[1.0, 1.0], &[2.0], &[0.6, 0.1]);
        assert!(matches!(ilmf(&p, &policy), Err(Error::GuardViolation(_))));
        // family C guard is on (Σ√|zᵢ|)²
        let p = scalar_params(Family::C, Kind::Complete, 1.0, None, &[1.0], &[2.0, 2.0], &[0.2, 0.2]);
        assert!(matches!(ilmf(&p, &policy), Err(Error::GuardViolation(_))));
        let p = scalar_params(Family::C, Kind::Complete, 1.0, None, &[1.0], &[2.0, 2.0], &[0.05, 0.05]);
        assert!(ilmf(&p, &policy).is_ok());
    }

    #[test]
    fn singular_c_spectrum_is_reported() {
        let p = scalar_params(Family::D, Kind::Complete, 1.0, None, &[1.0], &[-2.0], &[0.1]);
        assert!(matches!(ilmf(&p, &SeriesPolicy::default()), Err(Error::SingularValue(_))));
    }

    #[test]
    fn incomplete_kind_requires_positive_stable_a() {
        let p = scalar_params(Family::A, Kind::Lower, -0.5, Some(1.0), &[1.0], &[2.0], &[0.1]);
        assert!(matches!(
            ilmf(&p, &SeriesPolicy::default()),
            Err(Error::NotPositiveStable(_))
        ));
        // complete kind accepts the same base
        let p = scalar_params(Family::A, Kind::Complete, -0.5, None, &[1.0], &[2.0], &[0.1]);
        assert!(ilmf(&p, &SeriesPolicy::default()).is_ok());
    }

    #[test]
    fn truncation_is_reported_not_hidden() {
        let policy = SeriesPolicy {
            max_total_order: 3,
            max_order_per_index: 3,
            ..SeriesPolicy::default()
        };
        let p = scalar_params(Family::A, Kind::Complete, 2.0, None, &[1.5], &[1.1], &[0.45]);
        let v = ilmf(&p, &policy).unwrap();
        assert!(v.truncated);
        assert!(v.tail_estimate > 0.0);
    }

    #[test]
    fn matrix_evaluation_commutes_with_parameters() {
        let fam = make_commuting_family(77, 5, 2, (0.8, 2.2)).unwrap();
        let p = IlmfParams {
            family: Family::A,
            kind: Kind::Upper,
            a: fam.member(0).unwrap(),
            x: Some(1.1),
            b_list: vec![fam.member(1).unwrap(), fam.member(2).unwrap()],
            c_list: vec![fam.member(3).unwrap(), fam.member(4).unwrap()],
            z_list: vec![c(0.08, 0.02), c(-0.06, 0.03)],
        };
        let v = ilmf(&p, &SeriesPolicy::default()).unwrap();
        let av = p.a.matmul(&v.value).unwrap();
        let va = v.value.matmul(&p.a).unwrap();
        assert!(av.rel_distance(&va) < 1e-11);
        assert!(!v.truncated);
    }

    #[test]
    fn evaluation_is_deterministic() {
        let fam = make_commuting_family(13, 3, 3, (0.7, 2.1)).unwrap();
        let p = IlmfParams {
            family: Family::D,
            kind: Kind::Lower,
            a: fam.member(0).unwrap(),
            x: Some(0.6),
            b_list: vec![fam.member(1).unwrap()],
            c_list: vec![fam.member(2).unwrap()],
            z_list: vec![c(0.07, -0.01)],
        };
        let v1 = ilmf(&p, &SeriesPolicy::default()).unwrap();
        let v2 = ilmf(&p, &SeriesPolicy::default()).unwrap();
        assert_eq!(v1.value, v2.value);
        assert_eq!(v1.terms_summed, v2.terms_summed);
    }

    #[test]
    fn psi2_and_phi2_reduce_to_kummer_at_one_variable() {
        let b = CMatrix::scalar(c(0.9, 0.1));
        let cc = CMatrix::scalar(c(1.7, -0.2));
        let z = c(1.3, 0.4);
        let want = hyp1f1(&b, &cc, z).unwrap().value;
        let psi = confluent_psi2(&b, &[cc.clone()], &[z]).unwrap().value;
        let phi = confluent_phi2(&[b.clone()], &cc, &[z]).unwrap().value;
        assert!(psi.rel_distance(&want) < 1e-13);
        assert!(phi.rel_distance(&want) < 1e-13);
    }

    #[test]
    fn complete_1g1_is_kummer() {
        let a = CMatrix::scalar(c(1.2, 0.0));
        let cc = CMatrix::scalar(c(2.3, 0.0));
        let z = c(3.0, 0.0);
        let got = inc_confluent_1g1(Kind::Complete, &a, None, &cc, z).unwrap().value;
        let want = hyp1f1(&a, &cc, z).unwrap().value;
        assert!(got.rel_distance(&want) < 1e-13);
    }

    #[test]
    fn one_g_one_splits_by_kind() {
        let a = CMatrix::scalar(c(1.4, 0.0));
        let cc = CMatrix::scalar(c(2.0, 0.0));
        let z = c(2.0, 0.0);
        let lo = inc_confluent_1g1(Kind::Lower, &a, Some(0.8), &cc, z).unwrap().value;
        let hi = inc_confluent_1g1(Kind::Upper, &a, Some(0.8), &cc, z).unwrap().value;
        let whole = inc_confluent_1g1(Kind::Complete, &a, None, &cc, z).unwrap().value;
        assert!(lo.add(&hi).unwrap().rel_distance(&whole) < 1e-13);
    }

    #[test]
    fn joint_spectra_rejects_non_commuting_inputs() {
        let a = CMatrix::new(2, 2, vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]).unwrap();
        let b = CMatrix::new(2, 2, vec![c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        assert!(JointSpectra::new(&[&a, &b]).is_err());
    }

    #[test]
    fn joint_spectra_handles_repeated_eigenvalues_in_one_member() {
        // B = I has a repeated spectrum; the combination with A still
        // separates the joint eigenvectors.
        let fam = make_commuting_family(4, 1, 3, (0.6, 2.4)).unwrap();
        let a = fam.member(0).unwrap();
        let b = CMatrix::identity(3);
        let joint = JointSpectra::new(&[&a, &b]).unwrap();
        for e in 0..3 {
            assert!((joint.spectra[1][e] - c(1.0, 0.0)).norm() < 1e-9);
        }
    }
}
