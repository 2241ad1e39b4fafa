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

use crate::error::{Error, Result};
use crate::vec3::Vec3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Largest |Σq| accepted as neutral.
pub const NEUTRALITY_TOL: f64 = 1e-12;

/// Point charges in a periodic cube of edge `l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticleSystem {
    l: f64,
    positions: Vec<Vec3>,
    charges: Vec<f64>,
}

impl ParticleSystem {
    /// Validates neutrality and wraps positions into `[0, l)`.
    pub fn new(l: f64, positions: Vec<Vec3>, charges: Vec<f64>) -> Result<Self> {
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::Geometry(format!("box edge {l} must be positive")));
        }
        if positions.len() != charges.len() {
            return Err(Error::Geometry(format!(
                "{} positions but {} charges",
                positions.len(),
                charges.len()
            )));
        }
        if positions.len() < 2 {
            return Err(Error::Geometry(
                "at least two particles are required".into(),
            ));
        }
        if positions.iter().any(|p| p.0.iter().any(|x| !x.is_finite()))
            || charges.iter().any(|q| !q.is_finite())
        {
            return Err(Error::Geometry("non-finite coordinate or charge".into()));
        }
        let total: f64 = charges.iter().sum();
        if total.abs() > NEUTRALITY_TOL {
            return Err(Error::NotNeutral(total));
        }
        let positions = positions.into_iter().map(|p| p.wrap(l)).collect();
        Ok(ParticleSystem {
            l,
            positions,
            charges,
        })
    }

    pub fn len(&self) -> usize {
        self.charges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charges.is_empty()
    }

    pub fn box_length(&self) -> f64 {
        self.l
    }

    pub fn volume(&self) -> f64 {
        self.l * self.l * self.l
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    pub fn charges(&self) -> &[f64] {
        &self.charges
    }

    /// Σ q_i².
    pub fn charge_sq_sum(&self) -> f64 {
        self.charges.iter().map(|q| q * q).sum()
    }

    /// Copy with every position shifted by `d` (then wrapped).
    pub fn translated(&self, d: Vec3) -> ParticleSystem {
        ParticleSystem {
            l: self.l,
            positions: self
                .positions
                .iter()
                .map(|&p| (p + d).wrap(self.l))
                .collect(),
            charges: self.charges.clone(),
        }
    }

    /// Copy with particle `i` moved to `p` (wrapped).
    pub fn with_position(&self, i: usize, p: Vec3) -> ParticleSystem {
        let mut s = self.clone();
        s.positions[i] = p.wrap(self.l);
        s
    }
}

/// Madelung constant of the rock-salt lattice, per ion and referred to the
/// nearest-neighbour distance.
pub const NACL_MADELUNG: f64 = -1.747_564_594_633_182_19;

/// Madelung constant implied by the energy of [`madelung_system`]`(l)`.
pub fn madelung_from_energy(u: f64, l: f64) -> f64 {
    u * l / 8.0
}

/// Eight alternating unit charges on the (L/2)-spaced rock-salt sublattice.
pub fn madelung_system(l: f64) -> Result<ParticleSystem> {
    let h = l / 2.0;
    let mut pos = Vec::with_capacity(8);
    let mut q = Vec::with_capacity(8);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                pos.push(Vec3::new(i as f64 * h, j as f64 * h, k as f64 * h));
                q.push(if (i + j + k) % 2 == 0 { 1.0 } else { -1.0 });
            }
        }
    }
    ParticleSystem::new(l, pos, q)
}

/// N/2 unit cations and N/2 unit anions placed uniformly from a seeded stream.
pub fn random_neutral_system(n: usize, l: f64, seed: u64) -> Result<ParticleSystem> {
    if n % 2 != 0 || n < 2 {
        return Err(Error::Geometry(format!(
            "particle count {n} must be even and at least 2"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pos = (0..n)
        .map(|_| {
            Vec3::new(
                rng.gen::<f64>() * l,
                rng.gen::<f64>() * l,
                rng.gen::<f64>() * l,
            )
        })
        .collect();
    let q = (0..n)
        .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
        .collect();
    ParticleSystem::new(l, pos, q)
}

/// Rock-salt lattice of `n_side³` unit charges (`n_side` even) with each ion
/// displaced uniformly by up to `jitter` times the lattice spacing per axis.
pub fn jittered_lattice_system(
    n_side: usize,
    l: f64,
    jitter: f64,
    seed: u64,
) -> Result<ParticleSystem> {
    if n_side < 2 || n_side % 2 != 0 {
        return Err(Error::Geometry(format!(
            "lattice side {n_side} must be even and at least 2"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = l / n_side as f64;
    let mut pos = Vec::with_capacity(n_side.pow(3));
    let mut q = Vec::with_capacity(n_side.pow(3));
    for i in 0..n_side {
        for j in 0..n_side {
            for k in 0..n_side {
                let mut d = || (rng.gen::<f64>() - 0.5) * 2.0 * jitter * a;
                pos.push(Vec3::new(
                    i as f64 * a + d(),
                    j as f64 * a + d(),
                    k as f64 * a + d(),
                ));
                q.push(if (i + j + k) % 2 == 0 { 1.0 } else { -1.0 });
            }
        }
    }
    ParticleSystem::new(l, pos, q)
}

/// Three-site water geometry: O–H length (Å), H–O–H angle (degrees), charges.
pub const WATER_OH: f64 = 1.0;
pub const WATER_HOH_DEG: f64 = 109.47;
pub const WATER_Q_O: f64 = -0.8476;
pub const WATER_Q_H: f64 = 0.4238;

/// `n_side³` rigid three-site water molecules on a jittered cubic lattice with
/// uniformly random orientations. Intramolecular pairs are not excluded.
pub fn water_like_system(n_side: usize, l: f64, seed: u64) -> Result<ParticleSystem> {
    if n_side == 0 {
        return Err(Error::Geometry(
            "at least one molecule per side is required".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = l / n_side as f64;
    let half = WATER_HOH_DEG.to_radians() / 2.0;
    let h1 = Vec3::new(WATER_OH * half.sin(), 0.0, WATER_OH * half.cos());
    let h2 = Vec3::new(-WATER_OH * half.sin(), 0.0, WATER_OH * half.cos());
    let mut pos = Vec::with_capacity(3 * n_side.pow(3));
    let mut q = Vec::with_capacity(3 * n_side.pow(3));
    for i in 0..n_side {
        for j in 0..n_side {
            for k in 0..n_side {
                let jitter = |r: &mut ChaCha8Rng| (r.gen::<f64>() - 0.5) * 0.5 * a;
                let o = Vec3::new(
                    (i as f64 + 0.5) * a + jitter(&mut rng),
                    (j as f64 + 0.5) * a + jitter(&mut rng),
                    (k as f64 + 0.5) * a + jitter(&mut rng),
                );
                let rot = random_rotation(&mut rng);
                pos.push(o);
                q.push(WATER_Q_O);
                for h in [h1, h2] {
                    pos.push(o + rotate(&rot, h));
                    q.push(WATER_Q_H);
                }
            }
        }
    }
    // the charges above sum to zero only up to rounding
    let total: f64 = q.iter().sum();
    if total.abs() > NEUTRALITY_TOL {
        let n = q.len() as f64;
        q.iter_mut().for_each(|x| *x -= total / n);
    }
    ParticleSystem::new(l, pos, q)
}

// Uniform random rotation as a unit quaternion (w, x, y, z).
fn random_rotation(rng: &mut ChaCha8Rng) -> [f64; 4] {
    let (u1, u2, u3): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
    let tau = 2.0 * std::f64::consts::PI;
    let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
    [
        b * (tau * u3).cos(),
        a * (tau * u2).sin(),
        a * (tau * u2).cos(),
        b * (tau * u3).sin(),
    ]
}

fn rotate(q: &[f64; 4], v: Vec3) -> Vec3 {
    let [w, x, y, z] = *q;
    let t = Vec3::new(
        2.0 * (y * v.0[2] - z * v.0[1]),
        2.0 * (z * v.0[0] - x * v.0[2]),
        2.0 * (x * v.0[1] - y * v.0[0]),
    );
    let ut = Vec3::new(
        y * t.0[2] - z * t.0[1],
        z * t.0[0] - x * t.0[2],
        x * t.0[1] - y * t.0[0],
    );
    v + t * w + ut
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn madelung_layout() {
        let s = madelung_system(40.0).unwrap();
        assert_eq!(s.len(), 8);
        assert_eq!(s.charges().iter().sum::<f64>(), 0.0);
        assert_eq!(s.charge_sq_sum(), 8.0);
        assert_eq!(s.positions()[0], Vec3::ZERO);
        assert_eq!(s.charges()[0], 1.0);
        let k = s
            .positions()
            .iter()
            .position(|p| *p == Vec3::new(20.0, 0.0, 0.0))
            .unwrap();
        assert_eq!(s.charges()[k], -1.0);
    }

    #[test]
    fn random_is_deterministic_and_neutral() {
        let a = random_neutral_system(64, 20.0, 7).unwrap();
        let b = random_neutral_system(64, 20.0, 7).unwrap();
        let c = random_neutral_system(64, 20.0, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.charges().iter().sum::<f64>(), 0.0);
        assert!(a
            .positions()
            .iter()
            .all(|p| p.0.iter().all(|&x| (0.0..20.0).contains(&x))));
        assert!(random_neutral_system(5, 20.0, 1).is_err());
    }

    #[test]
    fn water_geometry() {
        let s = water_like_system(3, 10.0, 5).unwrap();
        assert_eq!(s.len(), 81);
        assert!(s.charges().iter().sum::<f64>().abs() <= NEUTRALITY_TOL);
        for m in 0..27 {
            let o = s.positions()[3 * m];
            let a = (s.positions()[3 * m + 1] - o).min_image(10.0);
            let b = (s.positions()[3 * m + 2] - o).min_image(10.0);
            assert!((a.norm() - WATER_OH).abs() < 1e-12 && (b.norm() - WATER_OH).abs() < 1e-12);
            let ang = (a.dot(b) / (a.norm() * b.norm())).acos().to_degrees();
            assert!((ang - WATER_HOH_DEG).abs() < 1e-9);
        }
        assert_eq!(s, water_like_system(3, 10.0, 5).unwrap());
    }

    #[test]
    fn rejects_charged() {
        let r = ParticleSystem::new(
            10.0,
            vec![Vec3::ZERO, Vec3::new(1.0, 0.0, 0.0)],
            vec![1.0, -0.5],
        );
        assert!(matches!(r, Err(Error::NotNeutral(_))));
    }

    #[test]
    fn wraps_positions() {
        let s = ParticleSystem::new(
            10.0,
            vec![Vec3::new(-1.0, 12.0, 3.0), Vec3::ZERO],
            vec![1.0, -1.0],
        )
        .unwrap();
        assert_eq!(s.positions()[0], Vec3::new(9.0, 2.0, 3.0));
    }
}
