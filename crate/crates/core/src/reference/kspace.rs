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

use super::system::ParticleSystem;
use crate::exec::Execution;
use crate::vec3::Vec3;
use num_complex::Complex64;
use std::f64::consts::PI;

/// Nonzero wave vectors with |k| < k_cut, one from each ±k pair.
pub fn half_space_kvectors(l: f64, k_cut: f64) -> Vec<Vec3> {
    let dk = 2.0 * PI / l;
    let n = (k_cut / dk).floor() as i64;
    let mut out = Vec::new();
    for nx in 0..=n {
        for ny in -n..=n {
            for nz in -n..=n {
                let upper = nx > 0 || (nx == 0 && (ny > 0 || (ny == 0 && nz > 0)));
                if !upper {
                    continue;
                }
                let k = Vec3::new(nx as f64 * dk, ny as f64 * dk, nz as f64 * dk);
                if k.norm2() < k_cut * k_cut {
                    out.push(k);
                }
            }
        }
    }
    out
}

/// Energies and forces of several Fourier-space kernels sharing one k set.
pub struct KSums {
    pub energies: Vec<f64>,
    pub forces: Vec<Vec<Vec3>>,
}

/// For each kernel ĝ(k²): U = (1/2V) Σ_{k≠0} ĝ |ρ(k)|² and its forces.
/// `weights[t][j]` is ĝ_t at `kvecs[j]`.
pub fn kspace_sums(
    sys: &ParticleSystem,
    kvecs: &[Vec3],
    weights: &[Vec<f64>],
    exec: Execution,
) -> KSums {
    let pos = sys.positions();
    let q = sys.charges();
    let v = sys.volume();
    let rho: Vec<Complex64> = exec.map(kvecs.len(), |j| {
        let k = kvecs[j];
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, &qi) in pos.iter().zip(q) {
            let (s, c) = k.dot(*p).sin_cos();
            acc += Complex64::new(qi * c, qi * s);
        }
        acc
    });
    let energies = weights
        .iter()
        .map(|w| {
            w.iter()
                .zip(&rho)
                .map(|(g, r)| g * r.norm_sqr())
                .sum::<f64>()
                / v
        })
        .collect();
    let per_particle: Vec<Vec<Vec3>> = exec.map(pos.len(), |i| {
        let mut f = vec![Vec3::ZERO; weights.len()];
        for (j, k) in kvecs.iter().enumerate() {
            let (s, c) = k.dot(pos[i]).sin_cos();
            // Im(conj(ρ) e^{ik·r_i})
            let im = rho[j].re * s - rho[j].im * c;
            let kv = *k * (2.0 * q[i] * im / v);
            for (t, w) in weights.iter().enumerate() {
                f[t] += kv * w[j];
            }
        }
        f
    });
    let forces = (0..weights.len())
        .map(|t| per_particle.iter().map(|f| f[t]).collect())
        .collect();
    KSums { energies, forces }
}
