//! Time-dependent Fourier weights of the energy method.
//!
//! Each factor solves `-Ṁ/M = rate(t, k, ξ)` with `M(0) = 1` and `M ≡ 1` for `k = 0`. All
//! factors are evaluated through their antiderivatives:
//!
//! | factor   | rate                                              | antiderivative           |
//! |----------|---------------------------------------------------|--------------------------|
//! | `M_L`    | `s/(1+s²)` on `ν^{-1} ≤ s ≤ (c₁κk²)^{-1/3}`       | `½ log(1+s²)` clipped     |
//! | `M₁`     | `C_α(|k| + ν^{1/12}k²)/(k² + (ξ-kt)²)`            | `arctan s`               |
//! | `M_ν`    | `ν^{1/3}/(1 + ν^{2/3}s²)`                          | `arctan(ν^{1/3}s)`       |
//! | `M_κ`    | `κ^{1/3}/(1 + κ^{2/3}s²)`                          | `arctan(κ^{1/3}s)`       |
//! | `M_{ν³}` | `C_α ν/(1 + ν²s²)`                                 | `arctan(νs)`             |
//!
//! with `s = t - ξ/k`.

mod lemmas;

pub use lemmas::{check_lemma_bounds, LemmaCheck, LemmaReport, LemmaSample, LemmaSampler, PinnedConstants};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linear::PhysParams;
use crate::scalar::Real;
use crate::spectral::field::{homogeneous, japanese};

/// Sobolev order and the `α`-dependent constants of the weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightParams<T> {
    pub n: u32,
    pub alpha: T,
    /// `c = (1/200)(1 - 1/(2α))²`.
    pub c: T,
    /// `c₁ = (1/20)(1 - 1/(2α))`.
    pub c1: T,
    /// `C_α = 2 / min(1, α - 1/2)`.
    pub c_alpha: T,
    pub nu: T,
    pub kappa: T,
    /// `L = max(1, νκ^{-1/3})`.
    pub l: T,
}

/// Which radial factor enters `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadialWeight {
    /// `|k, ξ|^N`.
    #[default]
    Homogeneous,
    /// `⟨k, ξ⟩^N = (1 + k² + ξ²)^{N/2}`.
    Inhomogeneous,
}

/// All weight factors at one `(t, k, ξ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightValue<T> {
    pub ml: T,
    pub m1: T,
    pub mkappa: T,
    pub mnu: T,
    pub mnu3: T,
    /// Product `M = M_L M₁ M_κ M_ν M_{ν³}`.
    pub m: T,
    pub a: T,
}

impl<T: Real> WeightParams<T> {
    pub fn new(params: &PhysParams<T>, n: u32) -> Result<Self> {
        if n < 5 {
            return Err(Error::InvalidParameter(format!(
                "Sobolev order N = {n} must be >= 5"
            )));
        }
        if !params.alpha_admissible() {
            return Err(Error::InvalidParameter(format!(
                "alpha = {} must exceed 1/2",
                params.alpha
            )));
        }
        let half = T::lit(0.5);
        let gap = T::one() - T::one() / (T::lit(2.0) * params.alpha);
        Ok(Self {
            n,
            alpha: params.alpha,
            c: gap * gap / T::lit(200.0),
            c1: gap / T::lit(20.0),
            c_alpha: T::lit(2.0) / T::one().min(params.alpha - half),
            nu: params.nu,
            kappa: params.kappa,
            l: params.lipschitz_l(),
        })
    }

    #[inline]
    fn shifts(&self, t: T, k: i64, xi: T) -> (T, T) {
        let s0 = -xi / T::from_int(k);
        (s0, t + s0)
    }

    /// Upper end `(c₁κk²)^{-1/3}` of the `M_L` window.
    #[inline]
    pub fn ml_window_end(&self, k: i64) -> T {
        let kk = T::from_int(k);
        let base = self.c1 * self.kappa * kk * kk;
        if base > T::zero() {
            base.cbrt().recip()
        } else {
            T::infinity()
        }
    }

    #[inline]
    fn nu_inv(&self) -> T {
        if self.nu > T::zero() {
            self.nu.recip()
        } else {
            T::infinity()
        }
    }

    // Defining rates -Ṁ/M.

    pub fn rate_ml(&self, t: T, k: i64, xi: T) -> T {
        if k == 0 {
            return T::zero();
        }
        let s = self.shifts(t, k, xi).1;
        if s >= self.nu_inv() && s <= self.ml_window_end(k) {
            s / (T::one() + s * s)
        } else {
            T::zero()
        }
    }

    pub fn rate_m1(&self, t: T, k: i64, xi: T) -> T {
        if k == 0 {
            return T::zero();
        }
        let kk = T::from_int(k);
        let eta = xi - kk * t;
        self.c_alpha * (kk.abs() + self.nu.powf(T::lit(1.0 / 12.0)) * kk * kk) / (kk * kk + eta * eta)
    }

    pub fn rate_mnu(&self, t: T, k: i64, xi: T) -> T {
        arctan_rate(self.nu.cbrt(), T::one(), k, self.shifts(t, k, xi).1)
    }

    pub fn rate_mkappa(&self, t: T, k: i64, xi: T) -> T {
        arctan_rate(self.kappa.cbrt(), T::one(), k, self.shifts(t, k, xi).1)
    }

    pub fn rate_mnu3(&self, t: T, k: i64, xi: T) -> T {
        arctan_rate(self.nu, self.c_alpha, k, self.shifts(t, k, xi).1)
    }

    // Closed forms.

    /// `M_L(t) = √((1 + a²)/(1 + b²))` over the clipped window `[a, b]`, or 1 if it is empty.
    pub fn eval_ml(&self, t: T, k: i64, xi: T) -> T {
        if k == 0 {
            return T::one();
        }
        let (s0, st) = self.shifts(t, k, xi);
        let lo = self.nu_inv().max(s0);
        let hi = self.ml_window_end(k).min(st);
        if hi > lo {
            ((T::one() + lo * lo) / (T::one() + hi * hi)).sqrt()
        } else {
            T::one()
        }
    }

    pub fn eval_m1(&self, t: T, k: i64, xi: T) -> T {
        if k == 0 {
            return T::one();
        }
        let (s0, st) = self.shifts(t, k, xi);
        let kk = T::from_int(k).abs();
        let amp = self.c_alpha * (kk.recip() + self.nu.powf(T::lit(1.0 / 12.0)));
        (-amp * (st.atan() - s0.atan())).exp()
    }

    pub fn eval_mnu(&self, t: T, k: i64, xi: T) -> T {
        arctan_factor(self.nu.cbrt(), T::one(), k, self.shifts(t, k, xi))
    }

    pub fn eval_mkappa(&self, t: T, k: i64, xi: T) -> T {
        arctan_factor(self.kappa.cbrt(), T::one(), k, self.shifts(t, k, xi))
    }

    pub fn eval_mnu3(&self, t: T, k: i64, xi: T) -> T {
        arctan_factor(self.nu, self.c_alpha, k, self.shifts(t, k, xi))
    }

    /// Cutoff `χ`: 1 for `|t - ξ/k| ≤ ν^{-1}`, 0 beyond `2ν^{-1}`, cubic smoothstep between.
    pub fn eval_chi(&self, t: T, k: i64, xi: T) -> T {
        if k == 0 || self.nu <= T::zero() {
            return T::one();
        }
        let u = self.nu * self.shifts(t, k, xi).1.abs() - T::one();
        if u <= T::zero() {
            T::one()
        } else if u >= T::one() {
            T::zero()
        } else {
            T::one() - u * u * (T::lit(3.0) - T::lit(2.0) * u)
        }
    }

    /// `∂_t χ`, bounded by `1.5ν` in absolute value.
    pub fn chi_dt(&self, t: T, k: i64, xi: T) -> T {
        if k == 0 || self.nu <= T::zero() {
            return T::zero();
        }
        let s = self.shifts(t, k, xi).1;
        let u = self.nu * s.abs() - T::one();
        if u <= T::zero() || u >= T::one() {
            T::zero()
        } else {
            -T::lit(6.0) * u * (T::one() - u) * self.nu * s.signum()
        }
    }

    /// Product of the five factors.
    pub fn eval_m(&self, t: T, k: i64, xi: T) -> T {
        if k == 0 {
            return T::one();
        }
        self.eval_ml(t, k, xi)
            * self.eval_m1(t, k, xi)
            * self.eval_mkappa(t, k, xi)
            * self.eval_mnu(t, k, xi)
            * self.eval_mnu3(t, k, xi)
    }

    /// `A = M · |k, ξ|^N · e^{cκ^{1/3}t·1_{k≠0}}`.
    pub fn eval_a(&self, t: T, k: i64, xi: T) -> T {
        self.eval_a_with(RadialWeight::Homogeneous, t, k, xi)
    }

    pub fn eval_a_with(&self, radial: RadialWeight, t: T, k: i64, xi: T) -> T {
        let n = T::from_u32(self.n).unwrap();
        let r = match radial {
            RadialWeight::Homogeneous => homogeneous(k, xi, n),
            RadialWeight::Inhomogeneous => japanese(k, xi, n),
        };
        if k == 0 {
            return r;
        }
        self.eval_m(t, k, xi) * r * (self.c * self.kappa.cbrt() * t).exp()
    }

    pub fn eval(&self, t: T, k: i64, xi: T) -> WeightValue<T> {
        let ml = self.eval_ml(t, k, xi);
        let m1 = self.eval_m1(t, k, xi);
        let mkappa = self.eval_mkappa(t, k, xi);
        let mnu = self.eval_mnu(t, k, xi);
        let mnu3 = self.eval_mnu3(t, k, xi);
        WeightValue {
            ml,
            m1,
            mkappa,
            mnu,
            mnu3,
            m: ml * m1 * mkappa * mnu * mnu3,
            a: self.eval_a(t, k, xi),
        }
    }
}

#[inline]
fn arctan_rate<T: Real>(scale: T, amp: T, k: i64, s: T) -> T {
    if k == 0 {
        return T::zero();
    }
    let z = scale * s;
    amp * scale / (T::one() + z * z)
}

#[inline]
fn arctan_factor<T: Real>(scale: T, amp: T, k: i64, (s0, st): (T, T)) -> T {
    if k == 0 {
        return T::one();
    }
    (-amp * ((scale * st).atan() - (scale * s0).atan())).exp()
}
