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

//! Oracles shared by the integration suites.

#![allow(dead_code)]

use useries_core::reference::ParticleSystem;
use useries_core::sog::SogParams;
use useries_core::Vec3;

const SHELLS: i32 = 60;

pub fn four_charges() -> ParticleSystem {
    let pos = vec![
        Vec3::new(1.3, 2.9, 17.2),
        Vec3::new(8.4, 11.7, 3.3),
        Vec3::new(14.1, 5.5, 9.9),
        Vec3::new(4.8, 16.6, 12.4),
    ];
    ParticleSystem::new(20.0, pos, vec![1.0, -1.0, 0.6, -0.6]).unwrap()
}

fn line_sum(d: f64, l: f64, s: f64) -> f64 {
    (-SHELLS..=SHELLS)
        .map(|n| (-(d + n as f64 * l).powi(2) / (s * s)).exp())
        .sum()
}

// Direct image sum of F + N, with the Gaussian lattice sums factorized per axis.
pub fn brute_force_energy(sys: &ParticleSystem, p: &SogParams) -> f64 {
    let (l, x, q) = (sys.box_length(), sys.positions(), sys.charges());
    let terms = p.effective_terms();
    let mut u = 0.0;
    for i in 0..x.len() {
        for j in 0..x.len() {
            let d = x[j] - x[i];
            let mut far = 0.0;
            for &(w, s) in &terms {
                let lattice =
                    line_sum(d.0[0], l, s) * line_sum(d.0[1], l, s) * line_sum(d.0[2], l, s);
                far += w * if i == j { lattice - 1.0 } else { lattice };
            }
            let near = if i == j {
                0.0
            } else {
                p.near_eval(d.min_image(l).norm())
            };
            u += 0.5 * q[i] * q[j] * (far + near);
        }
    }
    u
}

pub fn max_rel(a: &[Vec3], b: &[Vec3]) -> f64 {
    let scale = b.iter().map(|v| v.norm()).fold(0.0, f64::max);
    a.iter()
        .zip(b)
        .map(|(x, y)| (*x - *y).norm())
        .fold(0.0, f64::max)
        / scale
}

pub fn finite_difference_forces<E: Fn(&ParticleSystem) -> f64>(
    sys: &ParticleSystem,
    energy: E,
) -> Vec<Vec3> {
    let h = 1e-4;
    (0..sys.len())
        .map(|i| {
            let x = sys.positions()[i];
            let mut g = [0.0; 3];
            for (a, ga) in g.iter_mut().enumerate() {
                let mut e = [0.0; 3];
                e[a] = h;
                let step = Vec3(e);
                let up = energy(&sys.with_position(i, x + step));
                let down = energy(&sys.with_position(i, x - step));
                *ga = -(up - down) / (2.0 * h);
            }
            Vec3(g)
        })
        .collect()
}
