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

//! Exact-versus-approximate error measurement.

use super::ewald::{ewald_energy_forces, EwaldParams};
use super::system::ParticleSystem;
use super::useries::{useries_energy_forces, UseriesTable, DEFAULT_K_TAIL_TOL};
use crate::error::Result;
use crate::estimators::ErrorBreakdown;
use crate::exec::Execution;
use crate::sog::SogParams;
use crate::specfun::QuadratureConfig;
use crate::vec3::Vec3;
use serde::{Deserialize, Serialize};

/// Measured errors of one u-series evaluation against Ewald.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    #[serde(rename = "U_exact")]
    pub u_exact: f64,
    #[serde(rename = "U_approx")]
    pub u_approx: f64,
    pub rel_energy_error: f64,
    pub rel_force_error: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub breakdown: Option<ErrorBreakdown>,
}

impl ErrorReport {
    pub const CSV_HEADER: &'static str =
        "U_exact,U_approx,rel_energy_error,rel_force_error,E_T,E_G_up,E_G_down,dU_est,dF_est";

    pub fn from_values(u_exact: f64, f_exact: &[Vec3], u_approx: f64, f_approx: &[Vec3]) -> Self {
        ErrorReport {
            u_exact,
            u_approx,
            rel_energy_error: relative_energy_error(u_exact, u_approx),
            rel_force_error: relative_force_error(f_exact, f_approx),
            breakdown: None,
        }
    }

    pub fn csv_row(&self) -> String {
        let mut s = format!(
            "{:e},{:e},{:e},{:e}",
            self.u_exact, self.u_approx, self.rel_energy_error, self.rel_force_error
        );
        match &self.breakdown {
            Some(b) => {
                s += &format!(
                    ",{:e},{:e},{:e},{:e},{:e}",
                    b.e_t, b.e_g_up, b.e_g_down, b.closed_form_energy, b.closed_form_force
                )
            }
            None => s += ",,,,,",
        }
        s
    }
}

pub fn relative_energy_error(u_exact: f64, u_approx: f64) -> f64 {
    ((u_exact - u_approx) / u_exact).abs()
}

/// √(Σ|F_exact − F_approx|²) / √(Σ|F_exact|²).
pub fn relative_force_error(f_exact: &[Vec3], f_approx: &[Vec3]) -> f64 {
    let num: f64 = f_exact
        .iter()
        .zip(f_approx)
        .map(|(a, b)| (*a - *b).norm2())
        .sum();
    let den: f64 = f_exact.iter().map(|a| a.norm2()).sum();
    if den == 0.0 {
        return num.sqrt();
    }
    (num / den).sqrt()
}

/// Exact energy and forces from the default Ewald parameters for the box.
pub fn exact_energy_forces(sys: &ParticleSystem, exec: Execution) -> Result<(f64, Vec<Vec3>)> {
    ewald_energy_forces(sys, &EwaldParams::for_box(sys.box_length()), exec)
}

/// Run Ewald and the u-series and compare; optionally attach the estimator
/// breakdown.
pub fn measure_errors(
    sys: &ParticleSystem,
    p: &SogParams,
    with_breakdown: bool,
    exec: Execution,
) -> Result<ErrorReport> {
    let (ue, fe) = exact_energy_forces(sys, exec)?;
    let (ua, fa) = useries_energy_forces(sys, p, DEFAULT_K_TAIL_TOL, exec)?;
    let mut r = ErrorReport::from_values(ue, &fe, ua, &fa);
    if with_breakdown {
        r.breakdown = Some(ErrorBreakdown::compute(
            sys,
            p,
            &QuadratureConfig::default(),
            exec,
        )?);
    }
    Ok(r)
}

/// Reusable measurement context: one Ewald run and one Gaussian table
/// serve many parameter sets sharing b, σ and r_c.
pub struct Measurement {
    pub u_exact: f64,
    pub f_exact: Vec<Vec3>,
    table: UseriesTable,
}

impl Measurement {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        sys: &ParticleSystem,
        b: f64,
        sigma: f64,
        l_lo: i32,
        l_hi: i32,
        r_c: f64,
        exec: Execution,
    ) -> Result<Self> {
        let (u_exact, f_exact) = exact_energy_forces(sys, exec)?;
        Self::with_exact(sys, u_exact, f_exact, b, sigma, l_lo, l_hi, r_c, exec)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn with_exact(
        sys: &ParticleSystem,
        u_exact: f64,
        f_exact: Vec<Vec3>,
        b: f64,
        sigma: f64,
        l_lo: i32,
        l_hi: i32,
        r_c: f64,
        exec: Execution,
    ) -> Result<Self> {
        let table = UseriesTable::build(sys, b, sigma, l_lo, l_hi, r_c, DEFAULT_K_TAIL_TOL, exec)?;
        Ok(Measurement {
            u_exact,
            f_exact,
            table,
        })
    }

    pub fn evaluate(
        &self,
        sys: &ParticleSystem,
        p: &SogParams,
        exec: Execution,
    ) -> Result<(f64, Vec<Vec3>)> {
        self.table.evaluate(sys, p, exec)
    }

    pub fn report(
        &self,
        sys: &ParticleSystem,
        p: &SogParams,
        exec: Execution,
    ) -> Result<ErrorReport> {
        let (u, f) = self.evaluate(sys, p, exec)?;
        Ok(ErrorReport::from_values(self.u_exact, &self.f_exact, u, &f))
    }
}
