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

//! Ground truth and measurement: particle systems, the Ewald oracle, the
//! u-series evaluator, file formats and error reports.

mod ewald;
mod io;
mod kspace;
mod measure;
mod realspace;
mod system;
mod useries;

pub use ewald::{ewald_energy_forces, EwaldParams, EWALD_TAIL_TOL};
pub use io::{format_system, load_system, parse_system, save_report, save_system};
pub use kspace::{half_space_kvectors, kspace_sums, KSums};
pub use measure::{
    exact_energy_forces, measure_errors, relative_energy_error, relative_force_error, ErrorReport,
    Measurement,
};
pub use realspace::{image_sums, RealSums};
pub use system::{
    jittered_lattice_system, madelung_from_energy, madelung_system, random_neutral_system,
    water_like_system, ParticleSystem, NACL_MADELUNG, NEUTRALITY_TOL, WATER_HOH_DEG, WATER_OH,
    WATER_Q_H, WATER_Q_O,
};
pub use useries::{
    useries_energy_forces, FarTable, NearTable, TermSums, UseriesTable, DEFAULT_K_TAIL_TOL,
};
