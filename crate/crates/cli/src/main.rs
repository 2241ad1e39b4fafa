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

mod args;
mod commands;

use args::{Cli, Command};
use clap::Parser;
use std::process::ExitCode;
use useries_core::Error;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_)
        | Error::Infeasible(_)
        | Error::FloorExceedsTarget { .. }
        | Error::Parse { .. }
        | Error::NotNeutral(_)
        | Error::Geometry(_)
        | Error::Io(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Tune(a) => commands::tune(a),
        Command::Decompose(a) => commands::decompose(a),
        Command::Eval(a) => commands::eval(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Madelung(a) => commands::madelung(a),
        Command::Estimate(a) => commands::estimate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
