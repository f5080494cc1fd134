//! Independent fourth-order Runge–Kutta integration of a vertical fall with
//! quadratic drag, `dv/dt = g − k·v²`, `ds/dt = v`, from rest.
//!
//! Kept free of any dependency on the closed-form solution it checks.

#![allow(dead_code)]

#[derive(Debug, Clone, Copy)]
pub struct FallState {
    pub t: f64,
    pub distance: f64,
    pub velocity: f64,
}

/// Drag constant `ρ·C_d·A/(2m)`.
pub fn drag_constant(mass: f64, air_density: f64, cd: f64, area: f64) -> f64 {
    air_density * cd * area / (2.0 * mass)
}

/// Integrates from rest, returning the state at each of `sample_times`
/// (ascending). Steps land exactly on the sample times.
pub fn integrate_fall(g: f64, k: f64, sample_times: &[f64], max_step: f64) -> Vec<FallState> {
    let deriv = |v: f64| g - k * v * v;
    let mut t = 0.0;
    let mut s = 0.0;
    let mut v = 0.0;
    let mut out = Vec::with_capacity(sample_times.len());
    for &target in sample_times {
        while t < target {
            let h = (target - t).min(max_step);
            let k1v = deriv(v);
            let k1s = v;
            let k2v = deriv(v + 0.5 * h * k1v);
            let k2s = v + 0.5 * h * k1v;
            let k3v = deriv(v + 0.5 * h * k2v);
            let k3s = v + 0.5 * h * k2v;
            let k4v = deriv(v + h * k3v);
            let k4s = v + h * k3v;
            v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            s += h / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
            t += h;
            if target - t < 1e-15 {
                t = target;
            }
        }
        out.push(FallState {
            t,
            distance: s,
            velocity: v,
        });
    }
    out
}

/// Composite Simpson quadrature of `f` on `[a, b]` with `n` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = if n % 2 == 1 { n + 1 } else { n };
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let x = a + i as f64 * h;
        sum += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
    }
    sum * h / 3.0
}
