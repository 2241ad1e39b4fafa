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

//! Sum-of-Gaussians (u-series) decomposition of the periodic Coulomb kernel.
//!
//! The crate provides the decomposition itself ([`sog`]), an Ewald reference
//! and the u-series evaluator ([`reference`]), component and closed-form
//! error estimators ([`estimators`]), tolerance-driven parameter selection
//! ([`planner`]) and the special functions they rest on ([`specfun`]).

pub mod error;
pub mod exec;
pub mod specfun;
pub mod vec3;

pub use error::{Error, Result};
pub use exec::Execution;
pub use vec3::Vec3;
pub mod estimators;
pub mod planner;
pub mod reference;
pub mod sog;
