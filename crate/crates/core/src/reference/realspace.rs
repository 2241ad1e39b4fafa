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

/// Per-channel energy and force sums over periodic images.
pub struct RealSums {
    pub energies: Vec<f64>,
    pub forces: Vec<Vec<Vec3>>,
}

/// ½ Σ_{i,j,n}' q_i q_j g_t(|r_ij + nL|) over images closer than `r_max`.
///
/// `kernel(d², out)` writes `(g_t(d), −g_t′(d)/d)` for every channel t.
pub fn image_sums<K>(
    sys: &ParticleSystem,
    r_max: f64,
    channels: usize,
    exec: Execution,
    kernel: K,
) -> RealSums
where
    K: Fn(f64, &mut [(f64, f64)]) + Sync + Send,
{
    let l = sys.box_length();
    let pos = sys.positions();
    let q = sys.charges();
    let n_img = (r_max / l + 0.87).ceil() as i64;
    let r2max = r_max * r_max;
    let per: Vec<(Vec<f64>, Vec<Vec3>)> = exec.map(pos.len(), |i| {
        let mut e = vec![0.0; channels];
        let mut f = vec![Vec3::ZERO; channels];
        let mut buf = vec![(0.0, 0.0); channels];
        for j in 0..pos.len() {
            let d0 = (pos[i] - pos[j]).min_image(l);
            let qq = q[i] * q[j];
            for nx in -n_img..=n_img {
                for ny in -n_img..=n_img {
                    for nz in -n_img..=n_img {
                        if i == j && nx == 0 && ny == 0 && nz == 0 {
                            continue;
                        }
                        let d = d0 + Vec3::new(nx as f64 * l, ny as f64 * l, nz as f64 * l);
                        let d2 = d.norm2();
                        if d2 >= r2max {
                            continue;
                        }
                        kernel(d2, &mut buf);
                        for t in 0..channels {
                            e[t] += 0.5 * qq * buf[t].0;
                            if i != j {
                                f[t] += d * (qq * buf[t].1);
                            }
                        }
                    }
                }
            }
        }
        (e, f)
    });
    let energies = (0..channels)
        .map(|t| per.iter().map(|p| p.0[t]).sum())
        .collect();
    let forces = (0..channels)
        .map(|t| per.iter().map(|p| p.1[t]).collect())
        .collect();
    RealSums { energies, forces }
}
