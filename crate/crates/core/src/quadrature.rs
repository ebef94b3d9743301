#![allow(clippy::excessive_precision)]

//! Adaptive Gauss–Kronrod quadrature and bracketed scalar minimization.

use alloc::vec::Vec;

// 15-point Kronrod abscissae on [0, 1] (symmetric), with the embedded 7-point
// Gauss rule on the odd entries.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_INTERVALS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<const N: usize> {
    pub value: [f64; N],
    /// Sum of the accepted per-interval |Kronrod − Gauss| estimates (max over
    /// components).
    pub error: f64,
    pub evaluations: usize,
}

fn kronrod_panel<const N: usize>(
    f: &mut impl FnMut(f64) -> [f64; N],
    a: f64,
    b: f64,
) -> ([f64; N], f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kronrod = [0.0; N];
    let mut gauss = [0.0; N];

    let fc = f(center);
    for c in 0..N {
        kronrod[c] = WGK[7] * fc[c];
        gauss[c] = WG[3] * fc[c];
    }
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let lo = f(center - dx);
        let hi = f(center + dx);
        for c in 0..N {
            let pair = lo[c] + hi[c];
            kronrod[c] += wk * pair;
            if j % 2 == 1 {
                gauss[c] += WG[j / 2] * pair;
            }
        }
    }
    let mut err = 0.0_f64;
    for c in 0..N {
        kronrod[c] *= half;
        gauss[c] *= half;
        err = err.max((kronrod[c] - gauss[c]).abs());
    }
    (kronrod, err)
}

/// Integrates a vector-valued function over `[a, b]` by locally adaptive
/// bisection with a G7–K15 rule.
///
/// An interval is accepted when its error estimate is below its share (by
/// length) of `max(abs_tol, rel_tol·|estimate|)`, where the estimate is the
/// current whole-interval Kronrod value. Components share evaluations, which is
/// the point of integrating them together.
pub fn integrate_n<const N: usize>(
    mut f: impl FnMut(f64) -> [f64; N],
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Integral<N> {
    if a == b {
        return Integral { value: [0.0; N], error: 0.0, evaluations: 0 };
    }
    let (whole, whole_err) = kronrod_panel(&mut f, a, b);
    let mut evaluations = 15;
    let scale = whole.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let budget = abs_tol.max(rel_tol * scale);
    if whole_err <= budget {
        return Integral { value: whole, error: whole_err, evaluations };
    }

    let length = (b - a).abs();
    let mut value = [0.0; N];
    let mut error = 0.0;
    let mut stack: Vec<(f64, f64, [f64; N], f64)> = Vec::with_capacity(64);
    stack.push((a, b, whole, whole_err));
    let mut intervals = 1;

    while let Some((lo, hi, est, err)) = stack.pop() {
        let share = budget * (hi - lo).abs() / length;
        let mid = 0.5 * (lo + hi);
        let splittable = intervals < MAX_INTERVALS && mid != lo && mid != hi;
        if err <= share || !splittable {
            for c in 0..N {
                value[c] += est[c];
            }
            error += err;
            continue;
        }
        let (left, left_err) = kronrod_panel(&mut f, lo, mid);
        let (right, right_err) = kronrod_panel(&mut f, mid, hi);
        evaluations += 30;
        intervals += 1;
        stack.push((mid, hi, right, right_err));
        stack.push((lo, mid, left, left_err));
    }
    Integral { value, error, evaluations }
}

/// Scalar convenience wrapper around [`integrate_n`].
pub fn integrate(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Integral<1> {
    integrate_n(|x| [f(x)], a, b, abs_tol, rel_tol)
}

/// Brent's bracketed minimization on `[a, b]`.
///
/// Returns `(x_min, f(x_min))`. `tol` is the absolute tolerance on `x`.
pub fn minimize_bracketed(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    const GOLDEN: f64 = 0.381_966_011_250_105_1;
    const MAX_ITER: usize = 500;

    let (mut a, mut b) = if a < b { (a, b) } else { (b, a) };
    let mut x = a + GOLDEN * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = f(x);
    let (mut fw, mut fv) = (fx, fx);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;

    for _ in 0..MAX_ITER {
        let xm = 0.5 * (a + b);
        let tol1 = tol + 1e-15 * x.abs();
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            // parabola through x, w, v
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            if p.abs() < (0.5 * q * e).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if xm >= x { tol1 } else { -tol1 };
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { a - x } else { b - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 { x + d } else if d > 0.0 { x + tol1 } else { x - tol1 };
        let fu = f(u);
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    (x, fx)
}
