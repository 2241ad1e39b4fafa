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

use crate::args::{
    parse_values, DecomposeArgs, EvalArgs, MadelungArgs, RunArgs, SweepArgs, SweepVar, TuneArgs,
};
use std::path::Path;
use useries_core::estimators::{
    closed_form_energy_error, closed_form_force_error, rms, ErrorBreakdown, SystemSummary,
    CLOSED_FORM_M_MAX,
};
use useries_core::planner::{plan_c0, plan_c1};
use useries_core::reference::{
    exact_energy_forces, madelung_from_energy, madelung_system, measure_errors,
    relative_energy_error, relative_force_error, save_report, useries_energy_forces, Measurement,
    DEFAULT_K_TAIL_TOL, NACL_MADELUNG,
};
use useries_core::sog::{Continuity, SogParams};
use useries_core::specfun::QuadratureConfig;
use useries_core::{Error, Result, Vec3};

/// Box edge assumed by `tune` when neither --L nor a system is given.
pub const DEFAULT_TUNE_L: f64 = 20.0;
/// Unit charges per Å³ of the ideal gas assumed by `tune` without a system.
pub const REFERENCE_DENSITY: f64 = 0.064;

fn emit(run: &RunArgs, text: &str) -> Result<()> {
    match &run.out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn wants_csv(run: &RunArgs) -> bool {
    run.out
        .as_deref()
        .and_then(Path::extension)
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

pub fn tune(a: &TuneArgs) -> Result<()> {
    let exec = a.run.exec();
    let (l, summary) = if a.system.is_given() {
        let sys = a.system.load()?;
        let l = sys.box_length();
        if let Some(given) = a.l {
            if (given - l).abs() > 1e-12 * l {
                return Err(Error::Domain(format!(
                    "--L {given} disagrees with the system box {l}"
                )));
            }
        }
        (l, SystemSummary::new(&sys, 0.5 * l, exec))
    } else {
        let l = a.l.unwrap_or(DEFAULT_TUNE_L);
        if !(l > 0.0) {
            return Err(Error::Domain(format!("--L {l} must be positive")));
        }
        let n = (((REFERENCE_DENSITY * l.powi(3)) / 2.0).round() as usize).max(1) * 2;
        (l, SystemSummary::ideal(n, l, n as f64))
    };
    let plan = match Continuity::from(a.continuity) {
        Continuity::C0 => plan_c0(a.eps, l, &summary)?,
        Continuity::C1 => plan_c1(a.eps, l, &summary)?,
    };
    emit(&a.run, &(serde_json::to_string_pretty(&plan)? + "\n"))
}

pub fn decompose(a: &DecomposeArgs) -> Result<()> {
    let p = a.params.build()?;
    let text = if a.json {
        serde_json::to_string_pretty(&p)? + "\n"
    } else {
        let mut s = String::from("b,sigma,M,l_min,continuity,r_c,omega\n");
        s += &format!(
            "{},{},{},{},{},{},{}\n\nl,w_l,s_l\n",
            p.b, p.sigma, p.m, p.l_min, p.continuity, p.r_c, p.omega
        );
        for t in p.terms() {
            s += &format!("{},{:e},{:e}\n", t.index, p.effective_weight(t), t.width);
        }
        s
    };
    emit(&a.run, &text)
}

pub fn eval(a: &EvalArgs) -> Result<()> {
    let exec = a.run.exec();
    let sys = a.system.load()?;
    let p = a.params.build()?;
    let report = measure_errors(&sys, &p, true, exec)?;
    match &a.run.out {
        Some(path) => save_report(path, &report),
        None => {
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(())
        }
    }
}

pub fn estimate(a: &EvalArgs) -> Result<()> {
    let exec = a.run.exec();
    let sys = a.system.load()?;
    let p = a.params.build()?;
    let bd = ErrorBreakdown::compute(&sys, &p, &QuadratureConfig::default(), exec)?;
    let text = if wants_csv(&a.run) {
        format!("{}\n{}\n", ErrorBreakdown::CSV_HEADER, bd.csv_row(&p))
    } else {
        serde_json::to_string_pretty(&bd)? + "\n"
    };
    emit(&a.run, &text)
}

pub const SWEEP_HEADER: &str =
    "value,rel_energy_err,rel_force_err,est_energy_err,est_force_err,error";

struct Exact {
    u: f64,
    f: Vec<Vec3>,
    f_rms: f64,
}

fn sweep_row(
    ex: &Exact,
    p: &SogParams,
    u: f64,
    f: &[Vec3],
    summary: &SystemSummary,
) -> Result<String> {
    let est_u = closed_form_energy_error(summary, p, CLOSED_FORM_M_MAX)? / ex.u.abs();
    let est_f = closed_form_force_error(summary, p, CLOSED_FORM_M_MAX)? / ex.f_rms;
    Ok(format!(
        "{:e},{:e},{:e},{:e}",
        relative_energy_error(ex.u, u),
        relative_force_error(&ex.f, f),
        est_u,
        est_f
    ))
}

fn format_value(var: SweepVar, v: f64) -> String {
    match var {
        SweepVar::B => format!("{v}"),
        _ => format!("{}", v as i32),
    }
}

pub fn sweep(a: &SweepArgs) -> Result<()> {
    let exec = a.run.exec();
    let values = parse_values(&a.values)?;
    if a.variable != SweepVar::B && values.iter().any(|v| v.fract() != 0.0) {
        return Err(Error::Domain(
            "M and l_min sweep values must be integers".into(),
        ));
    }
    let sys = a.system.load()?;
    let (u, f) = exact_energy_forces(&sys, exec)?;
    let ex = Exact {
        f_rms: rms(&f),
        u,
        f,
    };
    let pa = &a.params;
    let ints: Vec<i32> = values.iter().map(|&v| v as i32).collect();
    let mut rows: Vec<Result<String>> = Vec::with_capacity(values.len());
    match a.variable {
        SweepVar::B => {
            let mut cached: Option<(f64, SystemSummary)> = None;
            for &b in &values {
                rows.push((|| {
                    let p = pa.build_with(b, pa.m, pa.lmin)?;
                    if cached.as_ref().is_none_or(|(r, _)| *r != p.r_c) {
                        cached = Some((p.r_c, SystemSummary::new(&sys, p.r_c, exec)));
                    }
                    let (ua, fa) = useries_energy_forces(&sys, &p, DEFAULT_K_TAIL_TOL, exec)?;
                    sweep_row(&ex, &p, ua, &fa, &cached.as_ref().unwrap().1)
                })());
            }
        }
        SweepVar::M | SweepVar::Lmin => {
            let (m_hi, l_lo) = match a.variable {
                SweepVar::M => (*ints.iter().max().unwrap(), pa.lmin),
                _ => (pa.m, *ints.iter().min().unwrap()),
            };
            let r_c = match pa.rc {
                Some(r) => r,
                None => pa.build_with(pa.b, m_hi, pa.lmin)?.r_c,
            };
            let summary = SystemSummary::new(&sys, r_c, exec);
            let meas = Measurement::with_exact(
                &sys,
                ex.u,
                ex.f.clone(),
                pa.b,
                pa.sigma,
                l_lo,
                m_hi,
                r_c,
                exec,
            )?;
            for &v in &ints {
                rows.push((|| {
                    let (m, l_min) = if a.variable == SweepVar::M {
                        (v, pa.lmin)
                    } else {
                        (pa.m, v)
                    };
                    let p = SogParams::with_cutoff(
                        pa.b,
                        pa.sigma,
                        m,
                        l_min,
                        pa.continuity.into(),
                        r_c,
                    )?;
                    let (ua, fa) = meas.evaluate(&sys, &p, exec)?;
                    sweep_row(&ex, &p, ua, &fa, &summary)
                })());
            }
        }
    }
    let mut text = format!("{SWEEP_HEADER}\n");
    let mut failures = 0;
    for (v, row) in values.iter().zip(&rows) {
        match row {
            Ok(r) => text += &format!("{},{r},\n", format_value(a.variable, *v)),
            Err(e) => {
                failures += 1;
                let msg = e.to_string().replace([',', '\n'], ";");
                text += &format!("{},,,,,{msg}\n", format_value(a.variable, *v));
            }
        }
    }
    emit(&a.run, &text)?;
    if failures == rows.len() {
        return Err(Error::NonConvergence("every sweep row failed".into()));
    }
    Ok(())
}

pub const MADELUNG_HEADER: &str =
    "b,sigma,M,l_min,continuity,madelung,rel_error,err_per_ion,est_err_per_ion";

pub fn madelung(a: &MadelungArgs) -> Result<()> {
    let exec = a.run.exec();
    let sys = madelung_system(a.l)?;
    let p = a.params.build()?;
    let (u, _) = useries_energy_forces(&sys, &p, DEFAULT_K_TAIL_TOL, exec)?;
    let bd = ErrorBreakdown::compute(&sys, &p, &QuadratureConfig::default(), exec)?;
    let n = sys.len() as f64;
    let u_exact = NACL_MADELUNG * n / a.l;
    let constant = madelung_from_energy(u, a.l);
    let text = format!(
        "{MADELUNG_HEADER}\n{},{},{},{},{},{:.17e},{:e},{:e},{:e}\n",
        p.b,
        p.sigma,
        p.m,
        p.l_min,
        p.continuity,
        constant,
        relative_energy_error(NACL_MADELUNG, constant),
        (u_exact - u).abs() / n,
        bd.total_energy_estimate.abs().min(u_exact.abs()) / n
    );
    emit(&a.run, &text)
}
