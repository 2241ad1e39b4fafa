// Copyright 2026 The useries Authors
//
// Licensed under the Apache license, version 2.0 (the "license");
// you may not use this file except in compliance with the license.
// You may obtain a copy of the license at
//
//     http://www.apache.org/licenses/license-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the license is distributed on an "as is" basis,
// without warranties or conditions of any kind, either express or implied.
// See the license for the specific language governing permissions and
// limitations under the license.

//! Error estimators for a truncated u-series.
//!
//! Signs follow the convention error = exact − approximate. The energy
//! error splits into an aliasing part (E_T) from the trapezoidal ladder,
//! a part from the dropped wide Gaussians (E_G^up) and a part from the
//! dropped narrow Gaussians (E_G^down).

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::reference::{image_sums, ParticleSystem};
use crate::sog::{ladder_weight, ladder_width, Continuity, SogParams};
use crate::specfun::{
    alpha_m, c_m, erf_real, erfc_real, i_minus_j, integrate_panels, QuadratureConfig,
};
use crate::vec3::Vec3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Largest system accepted by [`spectral_et`].
pub const SPECTRAL_MAX_N: usize = 256;

/// Ladder sums stop once a term drops below this fraction of the running sum.
const LADDER_REL_TOL: f64 = 1e-18;

/// Hard cap on the number of ladder terms in any tail sum.
const LADDER_MAX_TERMS: usize = 4000;

/// Narrow-tail sums stop after this many terms below `l_min`.
const DOWN_MAX_TERMS: i32 = 40;

/// Prefactor of the wide-tail force: −∇ of the wide-tail pair energy.
pub const FG_UP_PREFACTOR: f64 = 4.0;

/// Allowed imaginary residue after pairing ±m.
const REALNESS_TOL: f64 = 1e-10;

/// lim_{r→0} (φ(r) − 1/r) for the tinfoil Coulomb potential of a simple
/// cubic lattice, in units of 1/L.
pub const CUBIC_SELF_CONSTANT: f64 = -2.837_297_479_480_62;

/// Lattice shells |n|² ≤ this enter the Gaussian self-image sums.
const SELF_SHELLS: i64 = 8;

/// Reciprocal shells |n| ≤ this enter the aliasing fluctuation sum.
const FLUCTUATION_SHELLS: i64 = 16;

/// Configuration-level quantities entering the closed-form estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemSummary {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "V")]
    pub v: f64,
    #[serde(rename = "Q")]
    pub q: f64,
    pub over_cutoff_pair_weight: f64,
}

impl SystemSummary {
    /// Summary of `sys` for cutoff `r_c`; pair distances use the minimum image.
    pub fn new(sys: &ParticleSystem, r_c: f64, exec: Execution) -> Self {
        let l = sys.box_length();
        let pos = sys.positions();
        let q = sys.charges();
        let over = exec.sum(pos.len(), |i| {
            let mut s = 0.0;
            for j in 0..pos.len() {
                if j != i && (pos[i] - pos[j]).min_image(l).norm() > r_c {
                    s += q[i] * q[j];
                }
            }
            s
        });
        SystemSummary {
            n: pos.len(),
            v: sys.volume(),
            q: sys.charge_sq_sum(),
            over_cutoff_pair_weight: over,
        }
    }

    /// Summary of an ideal gas: no pair statistics beyond N, V and Q.
    pub fn ideal(n: usize, l: f64, q: f64) -> Self {
        SystemSummary {
            n,
            v: l * l * l,
            q,
            over_cutoff_pair_weight: -q,
        }
    }

    pub fn box_length(&self) -> f64 {
        self.v.cbrt()
    }
}

/// The step function 𝒯(r, r_c) ∈ {0, π/4, π/2}.
pub fn borwein_t(r_ij: f64, r_c: f64) -> f64 {
    if r_ij > r_c {
        FRAC_PI_2
    } else if r_ij == r_c {
        FRAC_PI_4
    } else {
        0.0
    }
}

/// ℬ(x, y) = [∫₀ˣ 4π r⁴ e^{−2r²/y²} dr]^{1/2}.
pub fn b_factor(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::Domain(format!(
            "B(x, y) needs x, y > 0, got ({x}, {y})"
        )));
    }
    let t = x / y;
    let sq = if t < 0.5 {
        // 4π Σ (−2/y²)ⁿ x^{2n+5} / (n! (2n+5))
        let mut term = x.powi(5);
        let mut sum = 0.0;
        for n in 0..60 {
            let add = term / (2 * n + 5) as f64;
            sum += add;
            if add.abs() < 1e-18 * sum.abs() {
                break;
            }
            term *= -2.0 * t * t / (n + 1) as f64;
        }
        4.0 * PI * sum
    } else {
        let y2 = y * y;
        3.0 * (2.0 * PI.powi(3)).sqrt() / 16.0 * y2 * y2 * y * erf_real(2f64.sqrt() * t)
            - (0.75 * x * y2 * y2 * PI + x * x * x * y2 * PI) * (-2.0 * t * t).exp()
    };
    if !(sq >= 0.0) {
        return Err(Error::Domain(format!(
            "negative radicand {sq:e} in B({x}, {y})"
        )));
    }
    Ok(sq.sqrt())
}

/// Σ_{ℓ>M} (e^{−r²/s_ℓ²} − 1)/s_ℓ.
fn wide_tail_shift(r2: f64, p: &SogParams) -> f64 {
    let mut s = p.width(p.m + 1);
    let mut sum = 0.0;
    for _ in 0..LADDER_MAX_TERMS {
        let term = (-r2 / (s * s)).exp_m1() / s;
        sum += term;
        if term.abs() <= LADDER_REL_TOL * sum.abs() {
            break;
        }
        s *= p.b;
    }
    sum
}

/// Σ_{ℓ>M} e^{−r²/s_ℓ²}/s_ℓ³.
fn wide_tail_force(r2: f64, p: &SogParams) -> f64 {
    let mut s = p.width(p.m + 1);
    let mut sum = 0.0;
    for _ in 0..LADDER_MAX_TERMS {
        let term = (-r2 / (s * s)).exp() / (s * s * s);
        sum += term;
        if term <= LADDER_REL_TOL * sum {
            break;
        }
        s *= p.b;
    }
    sum
}

/// Pair kernel of the wide-tail energy: the tail Gaussians minus the
/// correction built from min{r_c/r, 1} and 𝒯(r, r_c).
fn wide_tail_kernel(r: f64, p: &SogParams) -> f64 {
    let lb = p.b.ln();
    let s_m = p.width(p.m);
    let tail_sum = wide_tail_shift(r * r, p) + 1.0 / ((p.b - 1.0) * s_m);
    let a = lb / PI.sqrt() * tail_sum;
    let bracket = if r == 0.0 {
        PI.sqrt()
    } else {
        PI.sqrt() * (p.r_c / r).min(1.0) - 2.0 * p.r_c / (PI.sqrt() * r) * borwein_t(r, p.r_c)
    };
    a - lb / (PI * (p.b - 1.0) * s_m) * bracket
}

/// Energy error from the dropped wide Gaussians ℓ > M.
pub fn eg_up(sys: &ParticleSystem, p: &SogParams, exec: Execution) -> f64 {
    let l = sys.box_length();
    let pos = sys.positions();
    let q = sys.charges();
    exec.sum(pos.len(), |i| {
        let mut s = 0.0;
        for j in 0..pos.len() {
            let r = (pos[i] - pos[j]).min_image(l).norm();
            s += q[i] * q[j] * wide_tail_kernel(r, p);
        }
        s
    })
}

/// Force errors from the dropped wide Gaussians, one vector per particle.
pub fn fg_up(sys: &ParticleSystem, p: &SogParams, exec: Execution) -> Vec<Vec3> {
    let l = sys.box_length();
    let pos = sys.positions();
    let q = sys.charges();
    let pre = FG_UP_PREFACTOR * p.b.ln() / PI.sqrt();
    exec.map(pos.len(), |i| {
        let mut f = Vec3::ZERO;
        for j in 0..pos.len() {
            if j == i {
                continue;
            }
            let d = (pos[i] - pos[j]).min_image(l);
            f += d * (q[j] * wide_tail_force(d.norm2(), p));
        }
        f * (pre * q[i])
    })
}

/// (weight, width) pairs of the narrow Gaussians missing beyond r_c: w_ℓ
/// for ℓ < l_min, plus the (1 − ω) w₀ share for C1.
fn narrow_tail(p: &SogParams) -> Vec<(f64, f64)> {
    let rc2 = p.r_c * p.r_c;
    let mut out = Vec::new();
    let mut total = 0.0;
    for k in 1..=DOWN_MAX_TERMS {
        let l = p.l_min - k;
        let s = p.width(l);
        let a = p.weight(l) * (-rc2 / (s * s)).exp();
        if a == 0.0 {
            break;
        }
        total += a;
        out.push((p.weight(l), s));
        if a <= LADDER_REL_TOL * total {
            break;
        }
    }
    if p.continuity == Continuity::C1 && p.l_min <= 0 && p.m >= 0 {
        out.push(((1.0 - p.omega) * p.weight(0), p.width(0)));
    }
    out
}

/// Image reach for the narrow-tail kernels: far enough for the decay
/// factor to vanish, but never beyond one box length past the cutoff.
fn narrow_reach(p: &SogParams, l: f64) -> f64 {
    let s_max = narrow_tail(p).iter().map(|t| t.1).fold(0.0, f64::max);
    let x = s_max * s_max * 41.5 / (2.0 * p.r_c);
    p.r_c + x.min(l)
}

fn narrow_sums(sys: &ParticleSystem, p: &SogParams, exec: Execution) -> (f64, Vec<Vec3>) {
    let tail = narrow_tail(p);
    if tail.is_empty() {
        return (0.0, vec![Vec3::ZERO; sys.len()]);
    }
    let rc = p.r_c;
    let sums = image_sums(
        sys,
        narrow_reach(p, sys.box_length()),
        1,
        exec,
        |d2, out| {
            let d = d2.sqrt();
            if d <= rc {
                out[0] = (0.0, 0.0);
                return;
            }
            let (mut g, mut gd) = (0.0, 0.0);
            for &(w, s) in &tail {
                let a = w * (-rc * rc / (s * s)).exp();
                let k = 2.0 * rc / (s * s);
                let e = rc * a * (-k * (d - rc)).exp() / d;
                g += e;
                gd += e * (1.0 / d + k) / d;
            }
            out[0] = (g, gd);
        },
    );
    (sums.energies[0], sums.forces.into_iter().next().unwrap())
}

/// Energy error from the dropped narrow Gaussians ℓ < l_min (and the ω
/// adjustment of the ℓ = 0 weight for C1).
pub fn eg_down(sys: &ParticleSystem, p: &SogParams, exec: Execution) -> f64 {
    narrow_sums(sys, p, exec).0
}

/// Force errors from the dropped narrow Gaussians, one vector per particle.
pub fn fg_down(sys: &ParticleSystem, p: &SogParams, exec: Execution) -> Vec<Vec3> {
    narrow_sums(sys, p, exec).1
}

/// Distinct pair distances with weights: the self term (0, Q) and each
/// unordered minimum-image pair (r, 2 q_i q_j).
fn weighted_pairs(sys: &ParticleSystem) -> Vec<(f64, f64)> {
    let l = sys.box_length();
    let pos = sys.positions();
    let q = sys.charges();
    let mut out = vec![(0.0, sys.charge_sq_sum())];
    for i in 0..pos.len() {
        for j in i + 1..pos.len() {
            out.push(((pos[i] - pos[j]).min_image(l).norm(), 2.0 * q[i] * q[j]));
        }
    }
    out
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Aliasing energy error from the Fourier modes |m| ≤ `m_max` of the
/// trapezoidal ladder, for small systems.
///
/// Each mode is (𝒞(m)/π) ∫_{2π/L}^∞ k^{−α} [ℐ − 𝒥(k r_c)] S(k) dk with
/// S(k) = Σ_{ij} q_i q_j sinc(k r_ij). The integral over (0, ∞) equals
/// (π/2) Σ_{ij} q_i q_j r_ij^{α−1} H(r_ij − r_c) in closed form, so only the
/// finite piece below 2π/L goes through quadrature.
pub fn spectral_et(
    sys: &ParticleSystem,
    p: &SogParams,
    quad: &QuadratureConfig,
    m_max: i32,
    exec: Execution,
) -> Result<f64> {
    if sys.len() > SPECTRAL_MAX_N {
        return Err(Error::TooLarge {
            n: sys.len(),
            limit: SPECTRAL_MAX_N,
        });
    }
    if m_max < 1 {
        return Err(Error::Domain(format!("m_max = {m_max} must be at least 1")));
    }
    let pairs = weighted_pairs(sys);
    let k0 = 2.0 * PI / sys.box_length();
    let structure = |k: f64| -> f64 {
        let chunk = 512;
        let n = pairs.len().div_ceil(chunk);
        exec.sum(n, |c| {
            pairs[c * chunk..((c + 1) * chunk).min(pairs.len())]
                .iter()
                .map(|&(r, w)| w * sinc(k * r))
                .sum()
        })
    };
    let mut breaks: Vec<f64> = (0..48).map(|j| k0 * 0.5f64.powi(j)).collect();
    breaks.push(0.0);
    breaks.reverse();
    let mut total = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for m in (-m_max..=m_max).filter(|&m| m != 0) {
        let a = alpha_m(m, p.b);
        let c = c_m(m, p.b, p.sigma)?;
        let direct: Complex64 = pairs
            .iter()
            .filter(|&&(r, _)| r > p.r_c)
            .map(|&(r, w)| (a - 1.0).scale(r.ln()).exp() * (0.5 * w))
            .sum();
        let low = integrate_panels(
            |k| {
                if k == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let ij =
                    i_minus_j(m, p.b, k * p.r_c, quad).unwrap_or(Complex64::new(f64::NAN, 0.0));
                (-a * k.ln()).exp() * ij * structure(k)
            },
            &breaks,
            quad,
        )?;
        if !low.value.re.is_finite() {
            return Err(Error::NonConvergence("low-k spectral integral".into()));
        }
        let v = c * (direct - low.value / PI);
        scale += v.norm();
        total += v;
    }
    if total.im.abs() > REALNESS_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Tolerance(format!(
            "aliasing energy has imaginary residue {:e}",
            total.im
        )));
    }
    Ok(total.re)
}

/// ∫_{r_c}^∞ 4π r² e^{−2r²/s²} dr.
fn gauss_shell2(rc: f64, s: f64) -> f64 {
    let beta = 2.0 / (s * s);
    let e = (-beta * rc * rc).exp();
    4.0 * PI
        * (rc * e / (2.0 * beta) + PI.sqrt() / (4.0 * beta.powf(1.5)) * erfc_real(beta.sqrt() * rc))
}

/// ∫_{r_c}^∞ 4π r² (2r/s²)² e^{−2r²/s²} dr.
fn gauss_shell4(rc: f64, s: f64) -> f64 {
    let beta = 2.0 / (s * s);
    let e = (-beta * rc * rc).exp();
    let i4 = e * (rc.powi(3) / (2.0 * beta) + 3.0 * rc / (4.0 * beta * beta))
        + 3.0 * PI.sqrt() / (8.0 * beta.powf(2.5)) * erfc_real(beta.sqrt() * rc);
    4.0 * PI * 4.0 / s.powi(4) * i4
}

/// Closed-form components of the energy error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormParts {
    pub aliasing: f64,
    pub up: f64,
    pub down: f64,
}

impl ClosedFormParts {
    /// Sum of magnitudes.
    pub fn total(&self) -> f64 {
        self.aliasing.abs() + self.up.abs() + self.down.abs()
    }
}

/// (|n|², multiplicity) for the nonzero integer vectors with |n| ≤ `n_max`.
fn cubic_shells(n_max: i64) -> Vec<(f64, f64)> {
    let mut count = vec![0usize; (n_max * n_max + 1) as usize];
    for a in -n_max..=n_max {
        for b in -n_max..=n_max {
            for c in -n_max..=n_max {
                let n2 = a * a + b * b + c * c;
                if n2 > 0 && n2 <= n_max * n_max {
                    count[n2 as usize] += 1;
                }
            }
        }
    }
    count
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > 0)
        .map(|(n2, &c)| (n2 as f64, c as f64))
        .collect()
}

/// ∫_0^{r_c} 4π r² e^{−r²/s²} dr.
fn gauss_ball(rc: f64, s: f64) -> f64 {
    let x2 = rc * rc / (s * s);
    if x2 > 1.0 {
        return PI.powf(1.5) * s.powi(3) * erf_real(rc / s) - 2.0 * PI * s * s * rc * (-x2).exp();
    }
    let mut term = 1.0;
    let mut sum = 1.0 / 3.0;
    for k in 1..40 {
        term *= -x2 / k as f64;
        let add = term / (2 * k + 3) as f64;
        sum += add;
        if add.abs() < 1e-18 * sum {
            break;
        }
    }
    4.0 * PI * rc.powi(3) * sum
}

/// Periodic self-image value of a unit Gaussian of width s with the k = 0
/// mode removed: Σ_{n≠0} e^{−|n|²L²/s²} − π^{3/2}s³/V.
fn gauss_self_image(s: f64, l: f64, shells: &[(f64, f64)]) -> f64 {
    let v = l * l * l;
    let vol = PI.powf(1.5) * s.powi(3) / v;
    if s < l {
        let t: f64 = shells
            .iter()
            .map(|&(n2, c)| c * (-n2 * l * l / (s * s)).exp())
            .sum();
        t - vol
    } else {
        let k0 = 2.0 * PI / l;
        let t: f64 = shells
            .iter()
            .map(|&(n2, c)| c * (-n2 * k0 * k0 * s * s / 4.0).exp())
            .sum();
        vol * t - 1.0
    }
}

/// Ideal-gas mean of the aliasing energy: (Q/2) times the self-image value
/// of the periodic kernel difference between Coulomb and the complete
/// ladder cut at r_c, with uncorrelated partners spread over the box.
fn aliasing_energy_mean(p: &SogParams, l: f64, q: f64) -> f64 {
    let v = l * l * l;
    let shells = cubic_shells(SELF_SHELLS);
    let lb = p.b.ln();
    let first = ((p.r_c / (50f64.sqrt() * 2f64.sqrt() * p.sigma)).ln() / lb).floor() as i32;
    let mut acc = CUBIC_SELF_CONSTANT / l + 2.0 * PI * p.r_c * p.r_c / v;
    let mut ell = first.min(0);
    for _ in 0..LADDER_MAX_TERMS {
        let w = ladder_weight(ell, p.b, p.sigma);
        let s = ladder_width(ell, p.b, p.sigma);
        acc -= w * (gauss_self_image(s, l, &shells) + gauss_ball(p.r_c, s) / v);
        if s > 10.0 * l && w * p.b / (p.b - 1.0) < LADDER_REL_TOL / l {
            break;
        }
        ell += 1;
    }
    0.5 * q * acc
}

/// Ideal-gas RMS fluctuation of the aliasing energy about its mean, from
/// |ρ(k)|² fluctuating with variance Q² on each reciprocal vector.
fn aliasing_energy_fluctuation(p: &SogParams, l: f64, q: f64, m_max: i32) -> Result<f64> {
    let quad = QuadratureConfig::default();
    let v = l * l * l;
    let k0 = 2.0 * PI / l;
    let modes: Vec<(i32, Complex64, Complex64)> = (-m_max..=m_max)
        .filter(|&m| m != 0)
        .map(|m| Ok((m, alpha_m(m, p.b), c_m(m, p.b, p.sigma)?)))
        .collect::<Result<_>>()?;
    let mut sum = 0.0;
    for (n2, count) in cubic_shells(FLUCTUATION_SHELLS) {
        let k = k0 * n2.sqrt();
        let mut d = Complex64::new(0.0, 0.0);
        for &(m, a, c) in &modes {
            d += c * (-a * k.ln()).exp() * i_minus_j(m, p.b, k * p.r_c, &quad)?;
        }
        let d = 4.0 * PI / (k * k) * d.re;
        sum += count * d * d;
    }
    Ok(q / v * (0.5 * sum).sqrt())
}

/// Ideal-gas RMS of the aliasing energy, mean and fluctuation combined.
pub fn aliasing_energy_rms(p: &SogParams, l: f64, q: f64, m_max: i32) -> Result<f64> {
    if p.r_c > 0.5 * l {
        return Err(Error::Geometry(format!(
            "cutoff {} exceeds half the box edge {l}",
            p.r_c
        )));
    }
    let mean = aliasing_energy_mean(p, l, q);
    let fluct = aliasing_energy_fluctuation(p, l, q, m_max)?;
    Ok(mean.hypot(fluct))
}

/// Closed-form energy error parts under the ideal-gas assumption.
pub fn closed_form_energy_parts(
    s: &SystemSummary,
    p: &SogParams,
    m_max: i32,
) -> Result<ClosedFormParts> {
    if m_max < 1 {
        return Err(Error::Domain(format!("m_max = {m_max} must be at least 1")));
    }
    let aliasing = aliasing_energy_rms(p, s.box_length(), s.q, m_max)?;
    let down: f64 = narrow_tail(p)
        .iter()
        .map(|&(w, width)| 0.5 * s.q * w.abs() * (gauss_shell2(p.r_c, width) / s.v).sqrt())
        .sum();
    let up = p.b.ln() / (PI.sqrt() * (p.b - 1.0) * p.width(p.m)) * s.over_cutoff_pair_weight;
    Ok(ClosedFormParts { aliasing, up, down })
}

/// Closed-form estimate of |U_err|.
pub fn closed_form_energy_error(s: &SystemSummary, p: &SogParams, m_max: i32) -> Result<f64> {
    Ok(closed_form_energy_parts(s, p, m_max)?.total())
}

/// Mean of |Σ_m C(m)(α_m−1) r^{α_m−2}|² over the region r > r_c, times V.
/// Conjugate pairs m, −m contribute the non-oscillating cross terms.
fn aliasing_force_variance(p: &SogParams, m_max: i32) -> Result<f64> {
    let modes: Vec<(Complex64, Complex64)> = (-m_max..=m_max)
        .filter(|&m| m != 0)
        .map(|m| {
            let a = alpha_m(m, p.b);
            Ok((a, (a - 1.0) * c_m(m, p.b, p.sigma)?))
        })
        .collect::<Result<_>>()?;
    let mut total = Complex64::new(0.0, 0.0);
    let mut scale = 0.0;
    for &(am, gm) in &modes {
        for &(an, gn) in &modes {
            let e = am + an - 1.0;
            let v = gm * gn * 4.0 * PI * e.scale(p.r_c.ln()).exp() / (-e);
            scale += v.norm();
            total += v;
        }
    }
    if total.im.abs() > REALNESS_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Tolerance(format!(
            "imaginary residue {:e} in aliasing variance",
            total.im
        )));
    }
    Ok(total.re.max(0.0))
}

/// Closed-form force error parts (RMS per particle) under the ideal-gas assumption.
pub fn closed_form_force_parts(
    s: &SystemSummary,
    p: &SogParams,
    m_max: i32,
) -> Result<ClosedFormParts> {
    if m_max < 1 {
        return Err(Error::Domain(format!("m_max = {m_max} must be at least 1")));
    }
    let pre = s.q / (s.n as f64 * s.v).sqrt();
    let aliasing = pre * aliasing_force_variance(p, m_max)?.sqrt();
    let down: f64 = narrow_tail(p)
        .iter()
        .map(|&(w, width)| pre * w.abs() * gauss_shell4(p.r_c, width).sqrt())
        .sum();
    let s_up = p.width(p.m + 1);
    let up = FG_UP_PREFACTOR * p.b.ln() / PI.sqrt() * pre * b_factor(0.5 * s.box_length(), s_up)?
        / s_up.powi(3);
    Ok(ClosedFormParts { aliasing, up, down })
}

/// Closed-form estimate of the RMS force error per particle.
pub fn closed_form_force_error(s: &SystemSummary, p: &SogParams, m_max: i32) -> Result<f64> {
    Ok(closed_form_force_parts(s, p, m_max)?.total())
}

/// Per-component error estimates for one configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBreakdown {
    #[serde(rename = "E_T")]
    pub e_t: f64,
    /// True when `e_t` comes from [`spectral_et`], false for the closed form.
    pub e_t_spectral: bool,
    #[serde(rename = "E_G_up")]
    pub e_g_up: f64,
    #[serde(rename = "E_G_down")]
    pub e_g_down: f64,
    #[serde(rename = "F_T_scale")]
    pub f_t_scale: f64,
    #[serde(rename = "F_G_up")]
    pub f_g_up: Vec<Vec3>,
    #[serde(rename = "F_G_down")]
    pub f_g_down: Vec<Vec3>,
    pub total_energy_estimate: f64,
    pub closed_form_energy: f64,
    pub closed_form_force: f64,
}

/// Default |m| cutoff for [`spectral_et`].
pub const SPECTRAL_M_MAX: i32 = 3;
/// Default |m| cutoff for the closed forms.
pub const CLOSED_FORM_M_MAX: i32 = 1;

impl ErrorBreakdown {
    /// All estimators for `sys`; E_T falls back to the closed form above
    /// [`SPECTRAL_MAX_N`] particles.
    pub fn compute(
        sys: &ParticleSystem,
        p: &SogParams,
        quad: &QuadratureConfig,
        exec: Execution,
    ) -> Result<Self> {
        let summary = SystemSummary::new(sys, p.r_c, exec);
        let energy = closed_form_energy_parts(&summary, p, CLOSED_FORM_M_MAX)?;
        let force = closed_form_force_parts(&summary, p, CLOSED_FORM_M_MAX)?;
        let (e_t, e_t_spectral) = if sys.len() <= SPECTRAL_MAX_N {
            (spectral_et(sys, p, quad, SPECTRAL_M_MAX, exec)?, true)
        } else {
            (energy.aliasing, false)
        };
        let e_g_up = eg_up(sys, p, exec);
        let (e_g_down, f_g_down) = narrow_sums(sys, p, exec);
        Ok(ErrorBreakdown {
            e_t,
            e_t_spectral,
            e_g_up,
            e_g_down,
            f_t_scale: force.aliasing.abs(),
            f_g_up: fg_up(sys, p, exec),
            f_g_down,
            total_energy_estimate: e_t + e_g_up + e_g_down,
            closed_form_energy: energy.total(),
            closed_form_force: force.total(),
        })
    }

    pub const CSV_HEADER: &'static str =
        "b,sigma,M,l_min,continuity,E_T,E_G_up,E_G_down,dU_est,dF_est";

    pub fn csv_row(&self, p: &SogParams) -> String {
        format!(
            "{},{},{},{},{},{:e},{:e},{:e},{:e},{:e}",
            p.b,
            p.sigma,
            p.m,
            p.l_min,
            p.continuity,
            self.e_t,
            self.e_g_up,
            self.e_g_down,
            self.closed_form_energy,
            self.closed_form_force
        )
    }
}

/// √(Σ_i |v_i|² / N).
pub fn rms(v: &[Vec3]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    (v.iter().map(|x| x.norm2()).sum::<f64>() / v.len() as f64).sqrt()
}
