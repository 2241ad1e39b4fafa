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

//! Error type shared by every module.

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole of the gamma function at z = {0}")]
    Pole(f64),
    #[error("no root found: {0}")]
    NoRoot(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("system too large for this operation: N = {n} exceeds {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("tolerance violated: {0}")]
    Tolerance(String),
    #[error("system is not charge neutral: total charge {0:e}")]
    NotNeutral(f64),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("infeasible tolerance: {0}")]
    Infeasible(String),
    #[error("error floor {floor:e} exceeds target {target:e}")]
    FloorExceedsTarget { floor: f64, target: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
