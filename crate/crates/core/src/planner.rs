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

//! Tolerance-driven parameter selection and minimal-M search.

use crate::error::{Error, Result};
use crate::estimators::{
    closed_form_energy_error, closed_form_force_error, SystemSummary, CLOSED_FORM_M_MAX,
};
use crate::sog::{solve, Continuity, SogParams};
use serde::{Deserialize, Serialize};
use std::f64::consts::{E, PI};

/// Accepted ratio of predicted force error to ε before a warning.
pub const VALIDATION_SLACK: f64 = 3.0;
/// Ratio beyond which a plan is rejected as infeasible.
pub const INFEASIBLE_RATIO: f64 = 10.0;
/// Ratio s_M/σ of the ladder used to place the continuity root.
const SOLVE_LADDER_SPAN: f64 = 1e15;
const SCALE_PASSES: usize = 4;
/// Largest M tried by [`minimal_m`].
pub const MINIMAL_M_CAP: i32 = 1024;

/// A parameter set chosen for a tolerance, with its predicted errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterPlan {
    pub epsilon: f64,
    pub b: f64,
    pub sigma: f64,
    #[serde(rename = "M")]
    pub m: i32,
    pub r_c: f64,
    pub omega: f64,
    pub continuity: Continuity,
    pub predicted_energy_error: f64,
    pub predicted_force_error: f64,
    pub warnings: Vec<String>,
}

impl ParameterPlan {
    pub fn params(&self) -> Result<SogParams> {
        SogParams::from_parts(
            self.b,
            self.sigma,
            self.m,
            0,
            self.continuity,
            self.omega,
            self.r_c,
        )
    }
}

/// Base from the aliasing rule: b = exp(π²(e − 1)/(2 e p)).
pub fn base_for_tolerance(epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    let p = 1.5 * 1.5f64.ln() + (3.0 * PI.powi(3)).ln() + (2f64.powf(-1.5) / epsilon).ln();
    Ok((PI * PI * (E - 1.0) / (2.0 * E * p)).exp())
}

/// Number of wide terms: M = ⌈log(3/ε) / (3 log b)⌉.
pub fn terms_for_tolerance(epsilon: f64, b: f64) -> Result<i32> {
    check_epsilon(epsilon)?;
    Ok(((3.0 / epsilon).ln() / (3.0 * b.ln())).ceil().max(0.0) as i32)
}

/// Smallest r_c for which the dropped ℓ = −1 term stays near ε/3.
pub fn cutoff_lower_bound(epsilon: f64, p: &SogParams) -> f64 {
    let s = p.width(-1);
    let arg = (3.0 * p.weight(-1) * s * s).ln() + (1.0 / epsilon).ln();
    s * arg.max(0.0).sqrt()
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!(
            "tolerance {epsilon} must lie in (0, 1)"
        )));
    }
    Ok(())
}

/// Width σ that puts the continuity root at `r_c`, solved on a ladder long
/// enough that the wide tail does not mask the root. The far part obeys
/// F(λr; λσ) = F(r; σ)/λ for a fixed index range, so the root scales
/// linearly with σ and one solve at σ = 1 suffices.
pub fn sigma_for_cutoff(b: f64, continuity: Continuity, r_c: f64) -> Result<SogParams> {
    if !(b > 1.0) {
        return Err(Error::Domain(format!("base {b} must exceed 1")));
    }
    let m = (SOLVE_LADDER_SPAN.ln() / b.ln()).ceil() as i32;
    let mut p = solve(b, 1.0, m, 0, continuity)
        .map_err(|e| Error::Infeasible(format!("no continuity root at b = {b}: {e}")))?;
    for _ in 0..SCALE_PASSES {
        if (p.r_c / r_c - 1.0).abs() < 1e-13 {
            break;
        }
        p = solve(b, p.sigma * r_c / p.r_c, m, 0, continuity)?;
    }
    Ok(p)
}

fn plan(
    epsilon: f64,
    l: f64,
    summary: &SystemSummary,
    continuity: Continuity,
) -> Result<ParameterPlan> {
    check_epsilon(epsilon)?;
    if !(l > 0.0) {
        return Err(Error::Domain(format!("box edge {l} must be positive")));
    }
    let b = base_for_tolerance(epsilon)?;
    let m = terms_for_tolerance(epsilon, b)?;
    let r_c = 0.5 * l;
    let long = sigma_for_cutoff(b, continuity, r_c)?;
    let p = SogParams::from_parts(b, long.sigma, m, 0, continuity, long.omega, r_c)?;
    let mut warnings = p.admissibility(l).warnings;
    let bound = cutoff_lower_bound(epsilon, &p);
    if p.r_c < bound {
        warnings.push(format!(
            "r_c = {:.4} is below the narrow-term bound {bound:.4}",
            p.r_c
        ));
    }
    let force = closed_form_force_error(summary, &p, CLOSED_FORM_M_MAX)?;
    let energy = closed_form_energy_error(summary, &p, CLOSED_FORM_M_MAX)?;
    if force > INFEASIBLE_RATIO * epsilon {
        return Err(Error::Infeasible(format!(
            "predicted force error {force:.3e} exceeds {INFEASIBLE_RATIO} x epsilon = {epsilon:e}"
        )));
    }
    if force > VALIDATION_SLACK * epsilon {
        warnings.push(format!(
            "predicted force error {force:.3e} exceeds {VALIDATION_SLACK} x epsilon"
        ));
    }
    Ok(ParameterPlan {
        epsilon,
        b,
        sigma: p.sigma,
        m,
        r_c: p.r_c,
        omega: p.omega,
        continuity,
        predicted_energy_error: energy,
        predicted_force_error: force,
        warnings,
    })
}

/// C0 plan: b and M from the tolerance rules, r_c = L/2, σ from the
/// continuity root.
pub fn plan_c0(epsilon: f64, l: f64, summary: &SystemSummary) -> Result<ParameterPlan> {
    plan(epsilon, l, summary, Continuity::C0)
}

/// C1 plan: b and M as for C0, then (r_c, ω) from the C1 system.
pub fn plan_c1(epsilon: f64, l: f64, summary: &SystemSummary) -> Result<ParameterPlan> {
    plan(epsilon, l, summary, Continuity::C1)
}

/// Smallest M with `measure(params(M)) ≤ target`, where `params(M)` is
/// `template` with M replaced (ω kept). Doubling then bisection; assumes
/// the measure decreases in M down to a floor.
pub fn minimal_m<F>(template: &SogParams, target: f64, mut measure: F) -> Result<i32>
where
    F: FnMut(&SogParams) -> Result<f64>,
{
    let at = |m: i32| {
        SogParams::from_parts(
            template.b,
            template.sigma,
            m,
            template.l_min,
            template.continuity,
            template.omega,
            template.r_c,
        )
    };
    let mut eval = |m: i32| -> Result<f64> { measure(&at(m)?) };
    let first = template.l_min.max(0);
    let mut prev = eval(first)?;
    if prev <= target {
        return Ok(first);
    }
    let mut lo = first;
    let mut hi = first.max(1);
    loop {
        let v = eval(hi)?;
        if v <= target {
            break;
        }
        if hi >= 8 && v >= 0.99 * prev || hi >= MINIMAL_M_CAP {
            return Err(Error::FloorExceedsTarget { floor: v, target });
        }
        prev = v;
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if eval(mid)? <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
