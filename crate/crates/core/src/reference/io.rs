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

//! XYZQ text files and error reports.
//!
//! An XYZQ file holds the particle count, the box edge, then one
//! `x y z q` line per particle.

use super::measure::ErrorReport;
use super::system::ParticleSystem;
use crate::error::{Error, Result};
use crate::vec3::Vec3;
use std::fmt::Write as _;
use std::path::Path;

fn parse_field(tok: Option<&str>, line: usize, what: &str) -> Result<f64> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        msg: format!("missing {what}"),
    })?;
    tok.parse::<f64>().map_err(|_| Error::Parse {
        line,
        msg: format!("cannot parse {what} from {tok:?}"),
    })
}

/// Parse XYZQ text.
pub fn parse_system(text: &str) -> Result<ParticleSystem> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (ln, first) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let n: usize = first.parse().map_err(|_| Error::Parse {
        line: ln,
        msg: format!("expected a particle count, found {first:?}"),
    })?;
    let (ln, second) = lines.next().ok_or(Error::Parse {
        line: 2,
        msg: "missing box edge".into(),
    })?;
    let l = parse_field(Some(second), ln, "box edge")?;
    let mut pos = Vec::with_capacity(n);
    let mut q = Vec::with_capacity(n);
    for (ln, line) in lines {
        if line.is_empty() {
            continue;
        }
        if pos.len() == n {
            return Err(Error::Parse {
                line: ln,
                msg: format!("more than the declared {n} particles"),
            });
        }
        let mut it = line.split_whitespace();
        let x = parse_field(it.next(), ln, "x")?;
        let y = parse_field(it.next(), ln, "y")?;
        let z = parse_field(it.next(), ln, "z")?;
        let c = parse_field(it.next(), ln, "charge")?;
        if it.next().is_some() {
            return Err(Error::Parse {
                line: ln,
                msg: "expected exactly four fields".into(),
            });
        }
        pos.push(Vec3::new(x, y, z));
        q.push(c);
    }
    if pos.len() != n {
        return Err(Error::Parse {
            line: text.lines().count().max(2),
            msg: format!("declared {n} particles, found {}", pos.len()),
        });
    }
    ParticleSystem::new(l, pos, q)
}

/// Format a system as XYZQ text; values round-trip exactly.
pub fn format_system(sys: &ParticleSystem) -> String {
    let mut s = format!("{}\n{}\n", sys.len(), sys.box_length());
    for (p, q) in sys.positions().iter().zip(sys.charges()) {
        let _ = writeln!(s, "{} {} {} {}", p.0[0], p.0[1], p.0[2], q);
    }
    s
}

pub fn load_system(path: impl AsRef<Path>) -> Result<ParticleSystem> {
    parse_system(&std::fs::read_to_string(path)?)
}

pub fn save_system(path: impl AsRef<Path>, sys: &ParticleSystem) -> Result<()> {
    std::fs::write(path, format_system(sys))?;
    Ok(())
}

/// Write a report as JSON when the path ends in `.json`, otherwise as CSV.
pub fn save_report(path: impl AsRef<Path>, report: &ErrorReport) -> Result<()> {
    let path = path.as_ref();
    let body = if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
    {
        serde_json::to_string_pretty(report)? + "\n"
    } else {
        format!("{}\n{}\n", ErrorReport::CSV_HEADER, report.csv_row())
    };
    std::fs::write(path, body)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::{madelung_system, random_neutral_system};

    #[test]
    fn round_trip_is_exact() {
        let sys = random_neutral_system(16, 13.7, 9).unwrap();
        let back = parse_system(&format_system(&sys)).unwrap();
        assert_eq!(back, sys);
    }

    #[test]
    fn madelung_fixture() {
        let mut text = String::from("8\n40\n");
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let q = if (i + j + k) % 2 == 0 { 1 } else { -1 };
                    text += &format!("{} {} {} {q}\n", 20 * i, 20 * j, 20 * k);
                }
            }
        }
        assert_eq!(parse_system(&text).unwrap(), madelung_system(40.0).unwrap());
    }

    #[test]
    fn malformed_line_is_named() {
        let err = parse_system("2\n10\n0 0 0 1\n1 1 x -1\n").unwrap_err();
        match err {
            Error::Parse { line, msg } => {
                assert_eq!(line, 4);
                assert!(msg.contains('z'));
            }
            e => panic!("unexpected {e}"),
        }
        assert!(matches!(
            parse_system("3\n10\n0 0 0 1\n1 1 1 -1\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_system("two\n10\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn charged_file_rejected() {
        assert!(matches!(
            parse_system("2\n10\n0 0 0 1\n1 1 1 -0.5\n"),
            Err(Error::NotNeutral(_))
        ));
    }
}
