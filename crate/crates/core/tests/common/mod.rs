//! Reference computations written independently of the library code.

#![allow(dead_code)]

/// Five-point Gauss–Legendre on `[a, b]`.
fn gl5(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    const NODES: [f64; 5] = [0.0, -0.538_469_310_105_683_1, 0.538_469_310_105_683_1, -0.906_179_845_938_664, 0.906_179_845_938_664];
    const WEIGHTS: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    half * NODES.iter().zip(WEIGHTS).map(|(t, w)| w * f(mid + half * t)).sum::<f64>()
}

/// Adaptive bisection on five-point Gauss–Legendre until the two halves
/// agree with the whole to `tol` (at most 12 levels deep).
pub fn adaptive_gl(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (left, right) = (gl5(f, a, m), gl5(f, m, b));
        if depth == 0 || (left + right - whole).abs() <= tol {
            left + right
        } else {
            recurse(f, a, m, left, tol, depth - 1) + recurse(f, m, b, right, tol, depth - 1)
        }
    }
    recurse(f, a, b, gl5(f, a, b), tol, 12)
}

/// `(C(x), S(x))` by direct quadrature of `cos(πt²/2)`, `sin(πt²/2)` on
/// panels of width 1/8.
pub fn fresnel_oracle(x: f64) -> (f64, f64) {
    let panels = (x.abs() * 8.0).ceil().max(1.0) as usize;
    let h = x / panels as f64;
    let mut c = 0.0;
    let mut s = 0.0;
    for j in 0..panels {
        let (a, b) = (j as f64 * h, (j + 1) as f64 * h);
        c += adaptive_gl(&|t| (std::f64::consts::FRAC_PI_2 * t * t).cos(), a, b, 1e-15);
        s += adaptive_gl(&|t| (std::f64::consts::FRAC_PI_2 * t * t).sin(), a, b, 1e-15);
    }
    (c, s)
}

/// Golden-section minimization on `[a, b]`.
pub fn golden_section(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, iterations: usize) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iterations {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Local minima of `f` on a uniform scan of `[lo, hi]`, refined by golden
/// section.
pub fn scanned_minima(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).ceil() as usize;
    let xs: Vec<f64> = (0..=n).map(|i| lo + i as f64 * step).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    (1..n)
        .filter(|&i| ys[i] < ys[i - 1] && ys[i] <= ys[i + 1])
        .map(|i| golden_section(f, xs[i - 1], xs[i + 1], 200))
        .collect()
}

/// Relative RMS difference of two equally long series.
pub fn relative_rms(values: &[f64], reference: &[f64]) -> f64 {
    let num: f64 = values.iter().zip(reference).map(|(a, b)| (a - b) * (a - b)).sum();
    let den: f64 = reference.iter().map(|b| b * b).sum();
    (num / den).sqrt()
}

/// Upper `alpha` quantile of the chi-square distribution (Wilson–Hilferty);
/// `z` is the matching standard-normal quantile.
pub fn chi_square_critical(dof: f64, z: f64) -> f64 {
    let k = 2.0 / (9.0 * dof);
    dof * (1.0 - k + z * k.sqrt()).powi(3)
}
