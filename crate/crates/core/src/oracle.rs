//! Slow, independent reference implementations used by the test suites.
//!
//! Nothing here shares code with the production kernels: quadrature is adaptive
//! Gauss–Kronrod and the mode ODE is integrated by classical fixed-step RK4 in `t`.

use crate::linear::{mode_rhs, ModeIndex, ModeState, PhysParams};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let d = h * XGK[j];
        let sum = f(c - d) + f(c + d);
        kron += WGK[j] * sum;
        // Gauss nodes are the odd Kronrod nodes
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (val, err) = gk15(f, a, b);
    if err <= tol.max(1e-15 * val.abs()) || depth == 0 {
        return val;
    }
    let m = 0.5 * (a + b);
    adaptive(f, a, m, 0.5 * tol, depth - 1) + adaptive(f, m, b, 0.5 * tol, depth - 1)
}

/// `∫_a^b f` by adaptive G7–K15. `breaks` are split points where `f` has kinks.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64], tol: f64) -> f64 {
    let (lo, hi, sign) = if a <= b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut pts: Vec<f64> = std::iter::once(lo)
        .chain(breaks.iter().copied().filter(|&x| x > lo && x < hi))
        .chain(std::iter::once(hi))
        .collect();
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let n = (pts.len() - 1) as f64;
    let total: f64 = pts
        .windows(2)
        .map(|w| adaptive(&f, w[0], w[1], tol / n, 50))
        .sum();
    sign * total
}

/// Result of [`rk4_mode`].
#[derive(Debug, Clone, Copy)]
pub struct Rk4Run {
    pub final_state: ModeState<f64>,
    pub sup_norm: f64,
    pub t_sup: f64,
}

/// Classical RK4 on the full mode system with fixed step `h`.
pub fn rk4_mode(
    mode: &ModeIndex<f64>,
    params: &PhysParams<f64>,
    p_in: ModeState<f64>,
    t_end: f64,
    h: f64,
) -> Rk4Run {
    let n = ((t_end - p_in.t) / h).ceil().max(1.0) as usize;
    let h = (t_end - p_in.t) / n as f64;
    let rhs = |t: f64, p1: f64, p2: f64| mode_rhs(&ModeState::new(p1, p2, t), mode, params);
    let (mut t, mut p1, mut p2) = (p_in.t, p_in.p1, p_in.p2);
    let mut sup = p1.hypot(p2);
    let mut t_sup = t;
    for i in 0..n {
        let k1 = rhs(t, p1, p2);
        let k2 = rhs(t + 0.5 * h, p1 + 0.5 * h * k1.0, p2 + 0.5 * h * k1.1);
        let k3 = rhs(t + 0.5 * h, p1 + 0.5 * h * k2.0, p2 + 0.5 * h * k2.1);
        let k4 = rhs(t + h, p1 + h * k3.0, p2 + h * k3.1);
        p1 += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        p2 += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        t = p_in.t + (i + 1) as f64 * h;
        let norm = p1.hypot(p2);
        if norm > sup {
            sup = norm;
            t_sup = t;
        }
    }
    Rk4Run {
        final_state: ModeState::new(p1, p2, t),
        sup_norm: sup,
        t_sup,
    }
}
