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

use super::kspace::{half_space_kvectors, kspace_sums};
use super::realspace::image_sums;
use super::system::ParticleSystem;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::sog::{ladder_width, SogParams};
use crate::vec3::Vec3;
use std::f64::consts::PI;

/// Default relative tail tolerance for the far-part lattice sums.
pub const DEFAULT_K_TAIL_TOL: f64 = 1e-16;

/// Periodic sums of a unit-weight Gaussian e^{−r²/s²}.
#[derive(Debug, Clone)]
pub struct TermSums {
    pub index: i32,
    pub width: f64,
    pub energy: f64,
    pub forces: Vec<Vec3>,
}

/// Far-part sums for a contiguous range of ladder indices.
#[derive(Debug, Clone)]
pub struct FarTable {
    pub b: f64,
    pub sigma: f64,
    pub terms: Vec<TermSums>,
}

/// Minimum-image sums inside a cutoff: Coulomb and each unit Gaussian.
#[derive(Debug, Clone)]
pub struct NearTable {
    pub r_c: f64,
    pub coulomb_energy: f64,
    pub coulomb_forces: Vec<Vec3>,
    pub term_energy: Vec<f64>,
    pub term_forces: Vec<Vec<Vec3>>,
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(Error::Tolerance(format!(
            "tail tolerance {tol:e} must lie in (0, 1e-6]"
        )));
    }
    Ok(())
}

impl FarTable {
    /// Lattice sums for ℓ = l_lo..=l_hi. Widths up to L/2 go through image
    /// sums, wider ones through Fourier space.
    pub fn build(
        sys: &ParticleSystem,
        b: f64,
        sigma: f64,
        l_lo: i32,
        l_hi: i32,
        tail_tol: f64,
        exec: Execution,
    ) -> Result<Self> {
        check_tol(tail_tol)?;
        let widths: Vec<(i32, f64)> = (l_lo..=l_hi)
            .map(|l| (l, ladder_width(l, b, sigma)))
            .collect();
        let l_box = sys.box_length();
        let split = l_box / 2.0;
        let reach = (1.0 / tail_tol).ln().sqrt();
        let narrow: Vec<f64> = widths
            .iter()
            .filter(|w| w.1 <= split)
            .map(|w| w.1)
            .collect();
        let wide: Vec<f64> = widths.iter().filter(|w| w.1 > split).map(|w| w.1).collect();

        let mut terms = Vec::with_capacity(widths.len());
        if !narrow.is_empty() {
            let r2cut: Vec<f64> = narrow.iter().map(|s| (s * reach).powi(2)).collect();
            let inv: Vec<f64> = narrow.iter().map(|s| 1.0 / (s * s)).collect();
            let r_max = narrow.iter().cloned().fold(0.0, f64::max) * reach;
            let sums = image_sums(sys, r_max, narrow.len(), exec, |d2, out| {
                for t in 0..out.len() {
                    out[t] = if d2 < r2cut[t] {
                        let g = (-d2 * inv[t]).exp();
                        (g, 2.0 * inv[t] * g)
                    } else {
                        (0.0, 0.0)
                    };
                }
            });
            for (t, (e, f)) in sums.energies.into_iter().zip(sums.forces).enumerate() {
                let (index, width) = widths[t];
                terms.push(TermSums {
                    index,
                    width,
                    energy: e,
                    forces: f,
                });
            }
        }
        if !wide.is_empty() {
            let k_cut = 2.0 * reach / wide[0];
            let ks = half_space_kvectors(l_box, k_cut);
            let weights: Vec<Vec<f64>> = wide
                .iter()
                .map(|&s| {
                    ks.iter()
                        .map(|k| (1.5 * PI.ln() + 3.0 * s.ln() - k.norm2() * s * s / 4.0).exp())
                        .collect()
                })
                .collect();
            let sums = kspace_sums(sys, &ks, &weights, exec);
            let self_e = 0.5 * sys.charge_sq_sum();
            let off = narrow.len();
            for (t, (e, f)) in sums.energies.into_iter().zip(sums.forces).enumerate() {
                let (index, width) = widths[off + t];
                terms.push(TermSums {
                    index,
                    width,
                    energy: e - self_e,
                    forces: f,
                });
            }
        }
        Ok(FarTable { b, sigma, terms })
    }

    pub fn covers(&self, p: &SogParams) -> bool {
        let (Some(first), Some(last)) = (self.terms.first(), self.terms.last()) else {
            return false;
        };
        self.b == p.b && self.sigma == p.sigma && first.index <= p.l_min && last.index >= p.m
    }
}

impl NearTable {
    /// Pair sums over minimum images closer than `r_c` for the given widths.
    pub fn build(sys: &ParticleSystem, widths: &[f64], r_c: f64, exec: Execution) -> Result<Self> {
        let l = sys.box_length();
        if l < 2.0 * r_c {
            return Err(Error::Geometry(format!(
                "box edge {l} is below 2 r_c = {}",
                2.0 * r_c
            )));
        }
        let pos = sys.positions();
        let q = sys.charges();
        let inv: Vec<f64> = widths.iter().map(|s| 1.0 / (s * s)).collect();
        let nt = widths.len();
        let per: Vec<(f64, Vec3, Vec<f64>, Vec<Vec3>)> = exec.map(pos.len(), |i| {
            let mut ce = 0.0;
            let mut cf = Vec3::ZERO;
            let mut te = vec![0.0; nt];
            let mut tf = vec![Vec3::ZERO; nt];
            for j in 0..pos.len() {
                if j == i {
                    continue;
                }
                let d = (pos[i] - pos[j]).min_image(l);
                let d2 = d.norm2();
                if d2 >= r_c * r_c {
                    continue;
                }
                let qq = q[i] * q[j];
                let r = d2.sqrt();
                ce += 0.5 * qq / r;
                cf += d * (qq / (d2 * r));
                for t in 0..nt {
                    let g = (-d2 * inv[t]).exp();
                    te[t] += 0.5 * qq * g;
                    tf[t] += d * (qq * 2.0 * inv[t] * g);
                }
            }
            (ce, cf, te, tf)
        });
        Ok(NearTable {
            r_c,
            coulomb_energy: per.iter().map(|p| p.0).sum(),
            coulomb_forces: per.iter().map(|p| p.1).collect(),
            term_energy: (0..nt).map(|t| per.iter().map(|p| p.2[t]).sum()).collect(),
            term_forces: (0..nt)
                .map(|t| per.iter().map(|p| p.3[t]).collect())
                .collect(),
        })
    }
}

/// Reusable evaluator: far sums once, near sums per cutoff.
#[derive(Debug, Clone)]
pub struct UseriesTable {
    pub far: FarTable,
    pub near: NearTable,
}

impl UseriesTable {
    pub fn build(
        sys: &ParticleSystem,
        b: f64,
        sigma: f64,
        l_lo: i32,
        l_hi: i32,
        r_c: f64,
        tail_tol: f64,
        exec: Execution,
    ) -> Result<Self> {
        if sys.box_length() < 2.0 * r_c {
            return Err(Error::Geometry(format!(
                "box edge {} is below 2 r_c = {}",
                sys.box_length(),
                2.0 * r_c
            )));
        }
        let far = FarTable::build(sys, b, sigma, l_lo, l_hi, tail_tol, exec)?;
        let widths: Vec<f64> = far.terms.iter().map(|t| t.width).collect();
        let near = NearTable::build(sys, &widths, r_c, exec)?;
        Ok(UseriesTable { far, near })
    }

    /// Energy and forces for `p`; the near part is rebuilt if its cutoff differs.
    pub fn evaluate(
        &self,
        sys: &ParticleSystem,
        p: &SogParams,
        exec: Execution,
    ) -> Result<(f64, Vec<Vec3>)> {
        if !self.far.covers(p) {
            return Err(Error::Domain(
                "parameters fall outside the tabulated ladder".into(),
            ));
        }
        let rebuilt;
        let near = if self.near.r_c == p.r_c {
            &self.near
        } else {
            let widths: Vec<f64> = self.far.terms.iter().map(|t| t.width).collect();
            rebuilt = NearTable::build(sys, &widths, p.r_c, exec)?;
            &rebuilt
        };
        let mut energy = near.coulomb_energy;
        let mut forces = near.coulomb_forces.clone();
        let base = self.far.terms[0].index;
        for t in p.terms() {
            let k = (t.index - base) as usize;
            let c = p.effective_weight(t);
            let full = &self.far.terms[k];
            energy += c * (full.energy - near.term_energy[k]);
            for (f, (a, n)) in forces
                .iter_mut()
                .zip(full.forces.iter().zip(&near.term_forces[k]))
            {
                *f += (*a - *n) * c;
            }
        }
        Ok((energy, forces))
    }
}

/// Energy and forces of the u-series decomposition `p`.
pub fn useries_energy_forces(
    sys: &ParticleSystem,
    p: &SogParams,
    tail_tol: f64,
    exec: Execution,
) -> Result<(f64, Vec<Vec3>)> {
    let table = UseriesTable::build(sys, p.b, p.sigma, p.l_min, p.m, p.r_c, tail_tol, exec)?;
    table.evaluate(sys, p, exec)
}
