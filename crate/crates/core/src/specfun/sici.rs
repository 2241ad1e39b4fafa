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

//! Sine integral Si(x).

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

/// Si(x) = ∫₀ˣ sin t / t dt.
pub fn si(x: f64) -> f64 {
    if x < 0.0 {
        return -si(-x);
    }
    if x <= 4.0 {
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        let mut k = 0usize;
        loop {
            let n = 2 * k + 1;
            term *= -x2 / ((n + 1) * (n + 2)) as f64;
            let add = term / (n + 2) as f64;
            sum += add;
            if add.abs() < 1e-18 * sum.abs() {
                break;
            }
            k += 1;
        }
        return sum;
    }
    // E1(ix) by modified Lentz continued fraction; Si = π/2 + Im E1(ix)
    let z = Complex64::new(0.0, x);
    let tiny = 1e-300;
    let mut b = z + 1.0;
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 1..1000 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    let e1 = h * Complex64::new(x.cos(), -x.sin());
    FRAC_PI_2 + e1.im
}

/// ∫ₐ^∞ sin t / t dt for a ≥ 0.
pub fn si_tail(a: f64) -> f64 {
    FRAC_PI_2 - si(a)
}
