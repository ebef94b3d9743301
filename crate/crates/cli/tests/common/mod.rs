//! Independent reference computations for the acceptance run.

#![allow(dead_code)]

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

/// Adaptive bisection on five-point Gauss–Legendre.
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

/// `(C(x), S(x))` by direct quadrature on panels of width 1/8.
pub fn fresnel_oracle(x: f64) -> (f64, f64) {
    let panels = (x.abs() * 8.0).ceil().max(1.0) as usize;
    let h = x / panels as f64;
    let (mut c, mut s) = (0.0, 0.0);
    for j in 0..panels {
        let (a, b) = (j as f64 * h, (j + 1) as f64 * h);
        c += adaptive_gl(&|t| (std::f64::consts::FRAC_PI_2 * t * t).cos(), a, b, 1e-15);
        s += adaptive_gl(&|t| (std::f64::consts::FRAC_PI_2 * t * t).sin(), a, b, 1e-15);
    }
    (c, s)
}

pub fn relative_rms(values: &[f64], reference: &[f64]) -> f64 {
    let num: f64 = values.iter().zip(reference).map(|(a, b)| (a - b) * (a - b)).sum();
    let den: f64 = reference.iter().map(|b| b * b).sum();
    (num / den).sqrt()
}
