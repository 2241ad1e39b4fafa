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

//! The u-series decomposition: Gaussian ladder, far and near parts, and the
//! continuity solvers that fix the cutoff and the narrowest-weight factor ω.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Grid density used when bracketing continuity roots.
pub const POINTS_PER_DECADE: usize = 512;
const TANGENT_TOL: f64 = 1e-12;
const OMEGA_WINDOW: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Continuity {
    C0,
    C1,
}

impl std::str::FromStr for Continuity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "c0" => Ok(Continuity::C0),
            "c1" => Ok(Continuity::C1),
            _ => Err(Error::Domain(format!("unknown continuity '{s}'"))),
        }
    }
}

impl std::fmt::Display for Continuity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Continuity::C0 => write!(f, "c0"),
            Continuity::C1 => write!(f, "c1"),
        }
    }
}

/// One Gaussian `w e^{−r²/s²}` of the ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianTerm {
    pub index: i32,
    pub weight: f64,
    pub width: f64,
}

/// w_ℓ = (π/2)^{−1/2} b^{−ℓ} σ^{−1} log b.
pub fn ladder_weight(l: i32, b: f64, sigma: f64) -> f64 {
    (2.0 / PI).sqrt() * b.powi(-l) * b.ln() / sigma
}

/// s_ℓ = √2 b^ℓ σ.
pub fn ladder_width(l: i32, b: f64, sigma: f64) -> f64 {
    2.0_f64.sqrt() * b.powi(l) * sigma
}

fn check_base(b: f64, sigma: f64) -> Result<()> {
    if !(b > 1.0 && b.is_finite()) {
        return Err(Error::Domain(format!(
            "base b = {b} must be finite and exceed 1"
        )));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Domain(format!("sigma = {sigma} must be positive")));
    }
    Ok(())
}

/// Terms ℓ = l_min..=l_max.
pub fn gaussian_terms(b: f64, sigma: f64, l_min: i32, l_max: i32) -> Result<Vec<GaussianTerm>> {
    check_base(b, sigma)?;
    if l_min > l_max {
        return Err(Error::Domain(format!(
            "l_min = {l_min} exceeds l_max = {l_max}"
        )));
    }
    Ok((l_min..=l_max)
        .map(|l| GaussianTerm {
            index: l,
            weight: ladder_weight(l, b, sigma),
            width: ladder_width(l, b, sigma),
        })
        .collect())
}

/// Bilateral series value and a bound on the dropped tails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsaValue {
    pub value: f64,
    pub truncation_bound: f64,
}

/// Σ_{|ℓ| ≤ l_abs_max} w_ℓ e^{−r²/s_ℓ²}.
pub fn bsa_eval(r: f64, b: f64, sigma: f64, l_abs_max: i32) -> BsaValue {
    let t = |l: i32| {
        let s = ladder_width(l, b, sigma);
        ladder_weight(l, b, sigma) * (-(r * r) / (s * s)).exp()
    };
    let mut value = 0.0;
    for l in (-l_abs_max..=l_abs_max).rev() {
        value += t(l);
    }
    let upper = ladder_weight(l_abs_max + 1, b, sigma) * b / (b - 1.0);
    let first = t(-l_abs_max - 1);
    let ratio = if first > 0.0 {
        t(-l_abs_max - 2) / first
    } else {
        0.0
    };
    let lower = if first == 0.0 {
        0.0
    } else if ratio < 1.0 {
        first / (1.0 - ratio)
    } else {
        f64::INFINITY
    };
    BsaValue {
        value,
        truncation_bound: upper + lower,
    }
}

/// 2√2 exp(−π²/(2 log b)), the uniform relative error of the bilateral series.
pub fn bsa_uniform_error_bound(b: f64) -> f64 {
    2.0 * 2.0_f64.sqrt() * (-PI * PI / (2.0 * b.ln())).exp()
}

/// Assumption checks against a box edge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    pub upper_ok: bool,
    pub lower_ok: bool,
    pub narrowest_ok: bool,
    pub min_image_ok: bool,
    pub warnings: Vec<String>,
}

impl Admissibility {
    pub fn all_ok(&self) -> bool {
        self.warnings.is_empty()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ParamsRecord {
    b: f64,
    sigma: f64,
    #[serde(rename = "M")]
    m: i32,
    l_min: i32,
    continuity: Continuity,
    omega: f64,
    r_c: f64,
}

/// A complete u-series decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamsRecord", into = "ParamsRecord")]
pub struct SogParams {
    pub b: f64,
    pub sigma: f64,
    pub m: i32,
    pub l_min: i32,
    pub continuity: Continuity,
    pub omega: f64,
    pub r_c: f64,
    terms: Vec<GaussianTerm>,
}

impl TryFrom<ParamsRecord> for SogParams {
    type Error = Error;
    fn try_from(p: ParamsRecord) -> Result<Self> {
        SogParams::from_parts(p.b, p.sigma, p.m, p.l_min, p.continuity, p.omega, p.r_c)
    }
}

impl From<SogParams> for ParamsRecord {
    fn from(p: SogParams) -> Self {
        ParamsRecord {
            b: p.b,
            sigma: p.sigma,
            m: p.m,
            l_min: p.l_min,
            continuity: p.continuity,
            omega: p.omega,
            r_c: p.r_c,
        }
    }
}

impl SogParams {
    /// Assemble parameters without solving anything.
    pub fn from_parts(
        b: f64,
        sigma: f64,
        m: i32,
        l_min: i32,
        continuity: Continuity,
        omega: f64,
        r_c: f64,
    ) -> Result<Self> {
        let terms = gaussian_terms(b, sigma, l_min, m)?;
        if !(r_c > 0.0 && r_c.is_finite()) {
            return Err(Error::Domain(format!("r_c = {r_c} must be positive")));
        }
        if !omega.is_finite() {
            return Err(Error::Domain("omega must be finite".into()));
        }
        if continuity == Continuity::C0 && omega != 1.0 {
            return Err(Error::Domain(format!("C0 requires omega = 1, got {omega}")));
        }
        Ok(SogParams {
            b,
            sigma,
            m,
            l_min,
            continuity,
            omega,
            r_c,
            terms,
        })
    }

    /// Parameters with a prescribed cutoff. C0 keeps ω = 1; C1 picks ω so the
    /// potential is continuous at `r_c` (the force need not be).
    pub fn with_cutoff(
        b: f64,
        sigma: f64,
        m: i32,
        l_min: i32,
        continuity: Continuity,
        r_c: f64,
    ) -> Result<Self> {
        let mut p = SogParams::from_parts(b, sigma, m, l_min, Continuity::C0, 1.0, r_c)?;
        if continuity == Continuity::C1 {
            p.continuity = Continuity::C1;
            p.omega = omega_for_c0(&p.terms, r_c)?;
        }
        Ok(p)
    }

    /// Ladder terms ℓ = l_min..=M with their bare weights.
    pub fn terms(&self) -> &[GaussianTerm] {
        &self.terms
    }

    /// Weight actually used for a term (ω applied to ℓ = 0).
    pub fn effective_weight(&self, t: &GaussianTerm) -> f64 {
        if t.index == 0 {
            self.omega * t.weight
        } else {
            t.weight
        }
    }

    /// Weight/width pairs as used by the far part.
    pub fn effective_terms(&self) -> Vec<(f64, f64)> {
        self.terms
            .iter()
            .map(|t| (self.effective_weight(t), t.width))
            .collect()
    }

    pub fn far_eval(&self, r: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| self.effective_weight(t) * (-(r * r) / (t.width * t.width)).exp())
            .sum()
    }

    pub fn far_deriv(&self, r: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let s2 = t.width * t.width;
                -2.0 * r / s2 * self.effective_weight(t) * (-(r * r) / s2).exp()
            })
            .sum()
    }

    /// 1/r − F(r) inside the cutoff, zero outside.
    pub fn near_eval(&self, r: f64) -> f64 {
        if r >= self.r_c {
            0.0
        } else {
            1.0 / r - self.far_eval(r)
        }
    }

    /// d/dr of the near part inside the cutoff, zero outside.
    pub fn near_deriv(&self, r: f64) -> f64 {
        if r >= self.r_c {
            0.0
        } else {
            -1.0 / (r * r) - self.far_deriv(r)
        }
    }

    /// r_c F(r_c) − 1.
    pub fn c0_residual(&self) -> f64 {
        self.r_c * self.far_eval(self.r_c) - 1.0
    }

    /// r_c² (−1/r_c² − F′(r_c)).
    pub fn c1_residual(&self) -> f64 {
        -1.0 - self.r_c * self.r_c * self.far_deriv(self.r_c)
    }

    /// Width of the ladder term with index `l` (not necessarily retained).
    pub fn width(&self, l: i32) -> f64 {
        ladder_width(l, self.b, self.sigma)
    }

    /// Weight of the ladder term with index `l` (not necessarily retained).
    pub fn weight(&self, l: i32) -> f64 {
        ladder_weight(l, self.b, self.sigma)
    }

    /// Assumption checks for a box of edge `l`.
    pub fn admissibility(&self, l: f64) -> Admissibility {
        let s_up = self.width(self.m + 1);
        let s_down = self.width(self.l_min - 1);
        let s0 = self.width(0);
        let upper_ok = s_up >= 10.0 * l;
        let lower_ok = s_down < self.r_c;
        let narrowest_ok = self.continuity == Continuity::C0 || s0 < self.r_c;
        let min_image_ok = l >= 2.0 * self.r_c;
        let mut warnings = Vec::new();
        if !upper_ok {
            warnings.push(format!(
                "s_(M+1) = {s_up:.4e} is below 10 L = {:.4e}",
                10.0 * l
            ));
        }
        if !lower_ok {
            warnings.push(format!(
                "s_(l_min-1) = {s_down:.4e} is not below r_c = {}",
                self.r_c
            ));
        }
        if !narrowest_ok {
            warnings.push(format!("s_0 = {s0:.4e} is not below r_c = {}", self.r_c));
        }
        if !min_image_ok {
            warnings.push(format!("L = {l} is below 2 r_c = {}", 2.0 * self.r_c));
        }
        Admissibility {
            upper_ok,
            lower_ok,
            narrowest_ok,
            min_image_ok,
            warnings,
        }
    }
}

fn omega_for_c0(terms: &[GaussianTerm], r: f64) -> Result<f64> {
    let (e0, rest) = split_at_zero(terms, r);
    if e0 == 0.0 {
        return Err(Error::Domain("the l = 0 term is required for C1".into()));
    }
    Ok((1.0 / r - rest) / e0)
}

// (w_0 e^{−r²/s_0²}, Σ_{ℓ≠0} w_ℓ e^{−r²/s_ℓ²})
fn split_at_zero(terms: &[GaussianTerm], r: f64) -> (f64, f64) {
    let mut e0 = 0.0;
    let mut rest = 0.0;
    for t in terms {
        let v = t.weight * (-(r * r) / (t.width * t.width)).exp();
        if t.index == 0 {
            e0 = v;
        } else {
            rest += v;
        }
    }
    (e0, rest)
}

fn split_deriv_at_zero(terms: &[GaussianTerm], r: f64) -> (f64, f64) {
    let mut d0 = 0.0;
    let mut rest = 0.0;
    for t in terms {
        let s2 = t.width * t.width;
        let v = -2.0 * r / s2 * t.weight * (-(r * r) / s2).exp();
        if t.index == 0 {
            d0 = v;
        } else {
            rest += v;
        }
    }
    (d0, rest)
}

fn scan_grid(lo: f64, hi: f64) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let n = ((decades * POINTS_PER_DECADE as f64).ceil() as usize).max(2);
    (0..=n)
        .map(|i| lo * 10f64.powf(decades * i as f64 / n as f64))
        .collect()
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a) <= 1e-15 * m || m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    // pick the endpoint with the smaller residual
    if f(a).abs() <= f(b).abs() {
        a
    } else {
        b
    }
}

// Extremum of f on [a, b] by golden section; `maximize` selects the kind.
fn golden_extremum<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, maximize: bool) -> f64 {
    let g = |x: f64| if maximize { -f(x) } else { f(x) };
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (g(c), g(d));
    for _ in 0..200 {
        if (b - a) <= 1e-14 * (a + b) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = g(d);
        }
    }
    0.5 * (a + b)
}

fn diagnostics<F: Fn(f64) -> f64>(f: &F, grid: &[f64]) -> String {
    let step = (grid.len() / 6).max(1);
    grid.iter()
        .step_by(step)
        .map(|&r| format!("r={r:.4e}: {:.3e}", f(r)))
        .collect::<Vec<_>>()
        .join(", ")
}

/// C0 decomposition: ω = 1 and r_c the smallest positive root of rF(r) − 1.
pub fn solve_c0(b: f64, sigma: f64, m: i32, l_min: i32) -> Result<SogParams> {
    let terms = gaussian_terms(b, sigma, l_min, m)?;
    let g = |r: f64| {
        r * terms
            .iter()
            .map(|t| t.weight * (-(r * r) / (t.width * t.width)).exp())
            .sum::<f64>()
            - 1.0
    };
    let grid = scan_grid(sigma / 100.0, ladder_width(m, b, sigma));
    let mut prev = (grid[0], g(grid[0]));
    for &r in &grid[1..] {
        let v = g(r);
        if (v < 0.0) != (prev.1 < 0.0) || v == 0.0 {
            let rc = if v == 0.0 { r } else { bisect(&g, prev.0, r) };
            return SogParams::from_parts(b, sigma, m, l_min, Continuity::C0, 1.0, rc);
        }
        prev = (r, v);
    }
    Err(Error::NoRoot(format!(
        "rF(r) - 1 has no sign change on ({:.4e}, {:.4e}]; samples: {}",
        grid[0],
        grid[grid.len() - 1],
        diagnostics(&g, &grid)
    )))
}

/// C1 decomposition: (r_c, ω) with rF(r) = 1 and F′(r) = −1/r², ω scaling the
/// ℓ = 0 weight.
///
/// ω is eliminated through the first condition and the remaining scalar
/// residual is scanned upward; both sign changes and tangential touches are
/// accepted, and the smallest root with |ω − 1| < 0.5 is returned.
pub fn solve_c1(b: f64, sigma: f64, m: i32, l_min: i32) -> Result<SogParams> {
    if l_min > 0 || m < 0 {
        return Err(Error::Domain(
            "C1 needs the l = 0 term (l_min <= 0 <= M)".into(),
        ));
    }
    let terms = gaussian_terms(b, sigma, l_min, m)?;
    let omega_of = |r: f64| {
        let (e0, rest) = split_at_zero(&terms, r);
        (1.0 / r - rest) / e0
    };
    let h = |r: f64| {
        let om = omega_of(r);
        let (d0, rest) = split_deriv_at_zero(&terms, r);
        -1.0 - r * r * (om * d0 + rest)
    };
    let accept = |r: f64| {
        let om = omega_of(r);
        om.is_finite() && (om - 1.0).abs() < OMEGA_WINDOW
    };
    let grid = scan_grid(sigma / 100.0, ladder_width(m, b, sigma));
    let hv: Vec<f64> = grid.iter().map(|&r| h(r)).collect();
    let mut root = None;
    for i in 1..grid.len() {
        if !hv[i].is_finite() || !hv[i - 1].is_finite() {
            continue;
        }
        if (hv[i] < 0.0) != (hv[i - 1] < 0.0) || hv[i] == 0.0 {
            let r = if hv[i] == 0.0 {
                grid[i]
            } else {
                bisect(&h, grid[i - 1], grid[i])
            };
            if accept(r) {
                root = Some(r);
                break;
            }
            continue;
        }
        if i + 1 < grid.len() && hv[i + 1].is_finite() {
            let is_max = hv[i] >= hv[i - 1] && hv[i] >= hv[i + 1];
            let is_min = hv[i] <= hv[i - 1] && hv[i] <= hv[i + 1];
            // only extrema that approach zero can hide a pair of roots
            let toward_zero = (is_max && hv[i] < 0.0) || (is_min && hv[i] > 0.0);
            if toward_zero {
                let r_ext = golden_extremum(&h, grid[i - 1], grid[i + 1], is_max);
                let h_ext = h(r_ext);
                let r = if (h_ext < 0.0) != (hv[i - 1] < 0.0) {
                    Some(bisect(&h, grid[i - 1], r_ext))
                } else if h_ext.abs() <= TANGENT_TOL {
                    Some(r_ext)
                } else {
                    None
                };
                if let Some(r) = r {
                    if accept(r) {
                        root = Some(r);
                        break;
                    }
                }
            }
        }
    }
    let Some(rc) = root else {
        return Err(Error::NonConvergence(format!(
            "no C1 root with |omega - 1| < {OMEGA_WINDOW}; residual samples: {}",
            diagnostics(&h, &grid)
        )));
    };
    let omega = omega_of(rc);
    let p = SogParams::from_parts(b, sigma, m, l_min, Continuity::C1, omega, rc)?;
    let (r0, r1) = (p.c0_residual(), p.c1_residual());
    if r0.abs() > 1e-12 || r1.abs() > 1e-12 {
        return Err(Error::NonConvergence(format!(
            "C1 residuals {r0:.3e}, {r1:.3e} at r_c = {rc}"
        )));
    }
    Ok(p)
}

/// Solve for the requested continuity.
pub fn solve(b: f64, sigma: f64, m: i32, l_min: i32, continuity: Continuity) -> Result<SogParams> {
    match continuity {
        Continuity::C0 => solve_c0(b, sigma, m, l_min),
        Continuity::C1 => solve_c1(b, sigma, m, l_min),
    }
}
