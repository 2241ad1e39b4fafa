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

//! Flag definitions shared by the subcommands.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use useries_core::reference::{load_system, random_neutral_system, ParticleSystem};
use useries_core::sog::{solve, Continuity, SogParams};
use useries_core::{Error, Execution, Result};

#[derive(Parser, Debug)]
#[command(
    name = "useries",
    version,
    about = "Sum-of-Gaussians Coulomb decomposition: tuning, evaluation and error sweeps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Choose (b, σ, M, r_c, ω) for a force tolerance.
    Tune(TuneArgs),
    /// Print the Gaussian ladder and the cutoff of a decomposition.
    Decompose(DecomposeArgs),
    /// Compare the u-series against Ewald on one system.
    Eval(EvalArgs),
    /// Measured and estimated errors over a range of M, b or l_min.
    Sweep(SweepArgs),
    /// Madelung constant of the rock-salt cell.
    Madelung(MadelungArgs),
    /// Error estimates without a reference evaluation.
    Estimate(EvalArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ContinuityArg {
    C0,
    C1,
}

impl From<ContinuityArg> for Continuity {
    fn from(c: ContinuityArg) -> Self {
        match c {
            ContinuityArg::C0 => Continuity::C0,
            ContinuityArg::C1 => Continuity::C1,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    #[arg(long)]
    pub b: f64,
    #[arg(long)]
    pub sigma: f64,
    #[arg(long = "M")]
    pub m: i32,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub lmin: i32,
    /// Fix r_c instead of solving the continuity conditions.
    #[arg(long)]
    pub rc: Option<f64>,
    #[arg(long, value_enum, default_value = "c0")]
    pub continuity: ContinuityArg,
}

impl ParamArgs {
    pub fn build(&self) -> Result<SogParams> {
        self.build_with(self.b, self.m, self.lmin)
    }

    pub fn build_with(&self, b: f64, m: i32, l_min: i32) -> Result<SogParams> {
        let c = self.continuity.into();
        match self.rc {
            Some(r_c) => SogParams::with_cutoff(b, self.sigma, m, l_min, c, r_c),
            None => solve(b, self.sigma, m, l_min, c),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct SystemArgs {
    /// XYZQ file.
    #[arg(long, conflicts_with = "gen_random")]
    pub system: Option<PathBuf>,
    /// Random neutral gas of N unit charges in a box of edge L.
    #[arg(long, num_args = 3, value_names = ["N", "L", "SEED"])]
    pub gen_random: Option<Vec<String>>,
}

impl SystemArgs {
    pub fn is_given(&self) -> bool {
        self.system.is_some() || self.gen_random.is_some()
    }

    pub fn load(&self) -> Result<ParticleSystem> {
        if let Some(p) = &self.system {
            return load_system(p);
        }
        match self.gen_random.as_deref() {
            Some([n, l, seed]) => {
                let bad = |what: &str, v: &str| {
                    Error::Domain(format!("--gen-random {what} '{v}' is not valid"))
                };
                let n: usize = n.parse().map_err(|_| bad("N", n))?;
                let l: f64 = l.parse().map_err(|_| bad("L", l))?;
                let seed: u64 = seed.parse().map_err(|_| bad("SEED", seed))?;
                if n == 0 || n % 2 == 1 {
                    return Err(Error::Domain(format!(
                        "--gen-random N must be even and positive, got {n}"
                    )));
                }
                random_neutral_system(n, l, seed)
            }
            _ => Err(Error::Domain(
                "one of --system or --gen-random is required".into(),
            )),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Single-threaded evaluation. Both modes reduce in index order and give
    /// identical bytes.
    #[arg(long, default_value_t = false, action = clap::ArgAction::Set)]
    pub deterministic: bool,
}

impl RunArgs {
    pub fn exec(&self) -> Execution {
        if self.deterministic {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }
}

#[derive(Args, Debug)]
pub struct TuneArgs {
    #[arg(long)]
    pub eps: f64,
    #[arg(long, value_enum, default_value = "c0")]
    pub continuity: ContinuityArg,
    /// Box edge; taken from the system when one is given.
    #[arg(long = "L")]
    pub l: Option<f64>,
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepVar {
    #[value(name = "M")]
    M,
    B,
    Lmin,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long = "var", value_enum)]
    pub variable: SweepVar,
    /// Comma-separated values or start:stop:step ranges.
    #[arg(long, allow_hyphen_values = true)]
    pub values: String,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Args, Debug)]
pub struct MadelungArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long = "L", default_value_t = 40.0)]
    pub l: f64,
    #[command(flatten)]
    pub run: RunArgs,
}

/// Expand "a,b,c" and "start:stop:step" items into a list.
pub fn parse_values(s: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("'{t}' is not a number")))
        };
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [v] => out.push(num(v)?),
            [a, b, step] => {
                let (a, b, step) = (num(a)?, num(b)?, num(step)?);
                if !(step > 0.0) {
                    return Err(Error::Domain(format!(
                        "range step in '{item}' must be positive"
                    )));
                }
                let n = ((b - a) / step + 1e-9).floor();
                if n < 0.0 {
                    return Err(Error::Domain(format!("empty range '{item}'")));
                }
                out.extend((0..=n as usize).map(|k| a + k as f64 * step));
            }
            _ => return Err(Error::Domain(format!("cannot read '{item}'"))),
        }
    }
    if out.is_empty() {
        return Err(Error::Domain("sweep values are empty".into()));
    }
    let up = out.windows(2).all(|w| w[1] > w[0]);
    let down = out.windows(2).all(|w| w[1] < w[0]);
    if !(up || down) {
        return Err(Error::Domain(
            "sweep values must be strictly monotone".into(),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_lists_and_ranges() {
        assert_eq!(parse_values("1,2,5").unwrap(), vec![1.0, 2.0, 5.0]);
        assert_eq!(parse_values("0:6:2").unwrap(), vec![0.0, 2.0, 4.0, 6.0]);
        assert_eq!(
            parse_values("-3:-1:1,4").unwrap(),
            vec![-3.0, -2.0, -1.0, 4.0]
        );
        assert!(parse_values("").is_err());
        assert!(parse_values("1,1").is_err());
        assert!(parse_values("3,1,2").is_err());
        assert!(parse_values("1:2:0").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
