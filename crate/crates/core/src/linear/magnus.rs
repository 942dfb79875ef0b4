use super::{LinearModel, ModeIndex, PhysParams};
use crate::scalar::Real;

/// Row-major 2×2 matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Real> Mat2<T> {
    #[inline]
    pub fn apply(&self, x: (T, T)) -> (T, T) {
        (self.a * x.0 + self.b * x.1, self.c * x.0 + self.d * x.1)
    }
}

/// Matrix exponential of a real 2×2 matrix.
///
/// With `m = tr/2` and `N = M - mI`, `N² = δ²I`, so
/// `exp(M) = e^m (cosh δ · I + sinh δ / δ · N)`. The hyperbolic branch is evaluated as
/// `(e^{m+δ} ± e^{m-δ})/2` so stiff decay does not overflow.
pub fn exp2x2<T: Real>(m: &Mat2<T>) -> Mat2<T> {
    let half = T::lit(0.5);
    let mean = (m.a + m.d) * half;
    let q = (m.a - m.d) * half;
    let delta2 = q * q + m.b * m.c;
    let (ch, sh) = if delta2 > T::zero() {
        let delta = delta2.sqrt();
        if delta < T::lit(1e-4) {
            let em = mean.exp();
            (
                em * delta.cosh(),
                em * (T::one() + delta2 / T::lit(6.0) + delta2 * delta2 / T::lit(120.0)),
            )
        } else {
            let up = (mean + delta).exp();
            let down = (mean - delta).exp();
            ((up + down) * half, (up - down) * half / delta)
        }
    } else {
        let w = (-delta2).sqrt();
        let em = mean.exp();
        let sinc = if w < T::lit(1e-4) {
            T::one() - w * w / T::lit(6.0) + w * w * w * w / T::lit(120.0)
        } else {
            w.sin() / w
        };
        (em * w.cos(), em * sinc)
    };
    Mat2 {
        a: ch + sh * q,
        b: sh * m.b,
        c: sh * m.c,
        d: ch - sh * q,
    }
}

/// Fourth-order Magnus propagator of the mode system over `[ta, tb]`.
///
/// The first Magnus term `∫A` is exact: the shear rate integrates to
/// `½ log((1+s_b²)/(1+s_a²))` and the dissipative rates to `k²(h + (s_b³ - s_a³)/3)`.
/// The commutator term reduces to `(ω/2)·X·∫(2τ - ta - tb)(d - a)(τ) dτ` with
/// `X = [[0,1],[1,0]]`, whose polynomial part is closed-form and whose shear part uses
/// three-point Gauss-Legendre.
pub fn propagator<T: Real>(
    model: LinearModel,
    mode: &ModeIndex<T>,
    params: &PhysParams<T>,
    ta: T,
    tb: T,
) -> Mat2<T> {
    let h = tb - ta;
    let half = T::lit(0.5);
    let three = T::lit(3.0);
    let k = mode.kf();
    let k2 = k * k;
    let sa = mode.s(ta);
    let sb = mode.s(tb);
    let smid = (sa + sb) * half;

    let shear_int = if model.shear() {
        half * ((T::one() + sb * sb) / (T::one() + sa * sa)).ln()
    } else {
        T::zero()
    };
    let quad_int = h + h * (sa * sa + sa * sb + sb * sb) / three;
    let (diss1, diss2) = if model.dissipation() {
        (params.nu * k2 * quad_int, params.kappa * k2 * quad_int)
    } else {
        (T::zero(), T::zero())
    };
    let omega = if model.coupling() {
        params.alpha * k
    } else {
        T::zero()
    };

    let mut commutator = T::zero();
    if omega != T::zero() {
        // polynomial part: ∫ 2u (ν-κ)k² (1 + (s_mid + u)²) du over |u| ≤ h/2
        if model.dissipation() {
            commutator += (params.nu - params.kappa) * k2 * smid * h * h * h / three;
        }
        if model.shear() {
            let node = T::lit(0.6).sqrt() * h * half;
            let w_out = T::lit(5.0 / 9.0) * h * half;
            let sigma = |s: T| s / (T::one() + s * s);
            // integrand 4u σ(s_mid + u); the u = 0 node does not contribute
            commutator += w_out * T::lit(4.0) * node * (sigma(smid + node) - sigma(smid - node));
        }
    }
    let skew = omega * commutator * half;

    exp2x2(&Mat2 {
        a: -shear_int - diss1,
        b: -omega * h + skew,
        c: omega * h + skew,
        d: shear_int - diss2,
    })
}
