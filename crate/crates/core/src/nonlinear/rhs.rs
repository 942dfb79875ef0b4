use serde::{Deserialize, Serialize};

use super::state::{project_pair, State};
use crate::linear::PhysParams;
use crate::scalar::Real;
use crate::spectral::{GridSpec, MovingFrameSymbols, PhysicalField, SpectralField, Symbol, Transform};

/// Switches for the groups of terms in the right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Terms {
    /// `νΔ_t v`, `κΔ_t b`.
    pub dissipation: bool,
    /// `α∂_x b`, `α∂_x v`.
    pub coupling: bool,
    /// Shear terms `-v₂e₁ + 2∂_xΔ_t^{-1}∇_t v₂` and `b₂e₁`.
    pub lift: bool,
    pub nonlinear: bool,
}

impl Default for Terms {
    fn default() -> Self {
        Self {
            dissipation: true,
            coupling: true,
            lift: true,
            nonlinear: true,
        }
    }
}

impl Terms {
    pub fn linear() -> Self {
        Self {
            nonlinear: false,
            ..Self::default()
        }
    }

    pub fn dissipation_only() -> Self {
        Self {
            dissipation: true,
            coupling: false,
            lift: false,
            nonlinear: false,
        }
    }
}

/// Dealiased quadratic terms before projection.
pub(crate) struct Products<T> {
    /// `b·∇_t b - v·∇_t v`.
    pub nv: [SpectralField<T>; 2],
    /// `b·∇_t v - v·∇_t b`.
    pub nb: [SpectralField<T>; 2],
    /// Energy fraction of the raw products outside the 2/3 band, floored at roundoff scale.
    pub unresolved: T,
    /// `max |∇_t (v, b)|` on the grid.
    pub grad_max: T,
}

/// Right-hand side evaluator with cached transforms.
#[derive(Debug, Clone)]
pub struct Rhs<T: Real> {
    pub params: PhysParams<T>,
    pub terms: Terms,
    transform: Transform<T>,
}

impl<T: Real> Rhs<T> {
    pub fn new(grid: GridSpec<T>, params: PhysParams<T>, terms: Terms) -> Self {
        Self {
            params,
            terms,
            transform: Transform::new(grid),
        }
    }

    pub fn grid(&self) -> &GridSpec<T> {
        self.transform.grid()
    }

    /// Full time derivative and the unresolved fraction of the nonlinear products.
    pub fn eval(&self, state: &State<T>) -> (State<T>, T) {
        let (mut out, frac) = self.explicit(state);
        if self.terms.dissipation {
            let sym = MovingFrameSymbols::new(self.grid(), state.t);
            for (o, (f, c)) in out.fields_mut().into_iter().zip(state.fields().into_iter().zip([
                self.params.nu,
                self.params.nu,
                self.params.kappa,
                self.params.kappa,
            ])) {
                for (i, (x, &y)) in o.coeffs_mut().iter_mut().zip(f.coeffs()).enumerate() {
                    *x -= y * (c * sym.r2[i]);
                }
            }
        }
        (out, frac)
    }

    /// Everything except the diagonal dissipation, which the stepper integrates exactly.
    pub fn explicit(&self, state: &State<T>) -> (State<T>, T) {
        let grid = *self.grid();
        let sym = MovingFrameSymbols::new(&grid, state.t);
        let mut out = State::zeros(grid, state.t);
        let two = T::lit(2.0);
        if self.terms.coupling {
            let a = self.params.alpha;
            for j in 0..2 {
                out.v[j] = sym.apply(&state.b[j], Symbol::Dx).scale(a);
                out.b[j] = sym.apply(&state.v[j], Symbol::Dx).scale(a);
            }
        }
        if self.terms.lift {
            let (v2, b2) = (state.v[1].coeffs(), state.b[1].coeffs());
            let [o1, o2] = &mut out.v;
            let (o1, o2) = (o1.coeffs_mut(), o2.coeffs_mut());
            let ob = out.b[0].coeffs_mut();
            for i in 0..v2.len() {
                let r2 = sym.r2[i];
                let (kk, eta) = (sym.k(i), sym.eta[i]);
                let (c1, c2) = if r2 == T::zero() {
                    (-T::one(), T::zero())
                } else {
                    (two * kk * kk / r2 - T::one(), two * kk * eta / r2)
                };
                o1[i] += v2[i] * c1;
                o2[i] += v2[i] * c2;
                ob[i] += b2[i];
            }
        }
        let mut frac = T::zero();
        if self.terms.nonlinear {
            let mut p = self.products(state);
            frac = p.unresolved;
            {
                let [a, b] = &mut p.nv;
                project_pair(&sym, a, b);
                let [a, b] = &mut p.nb;
                project_pair(&sym, a, b);
            }
            for j in 0..2 {
                out.v[j] = out.v[j].add(&p.nv[j]);
                out.b[j] = out.b[j].add(&p.nb[j]);
            }
        }
        (out, frac)
    }

    pub(crate) fn products(&self, state: &State<T>) -> Products<T> {
        let grid = *self.grid();
        let sym = MovingFrameSymbols::new(&grid, state.t);
        let tr = &self.transform;
        let phys = |f: &SpectralField<T>| tr.inverse(f);
        let grads =
            |f: &SpectralField<T>| [phys(&sym.apply(f, Symbol::Dx)), phys(&sym.apply(f, Symbol::DyT))];
        let fields = state.fields();
        let u: Vec<PhysicalField<T>> = fields.iter().map(|f| phys(&f.dealias())).collect();
        let du: Vec<[PhysicalField<T>; 2]> = fields.iter().map(|f| grads(&f.dealias())).collect();
        let grad_max = du
            .iter()
            .flat_map(|g| g.iter())
            .fold(T::zero(), |m, g| m.max(g.max_abs()));

        let n = grid.len();
        // a·∇_t c for velocity-like a = (u[ia], u[ia+1]) and component c
        let advect = |ia: usize, ic: usize, out: &mut [T], sign: T| {
            let (a1, a2) = (&u[ia].values, &u[ia + 1].values);
            let (gx, gy) = (&du[ic][0].values, &du[ic][1].values);
            for p in 0..n {
                out[p] += sign * (a1[p] * gx[p] + a2[p] * gy[p]);
            }
        };
        let one = T::one();
        let mut raw = Vec::with_capacity(4);
        for j in 0..2 {
            // v-equation components: b·∇b_j - v·∇v_j
            let mut buf = vec![T::zero(); n];
            advect(2, 2 + j, &mut buf, one);
            advect(0, j, &mut buf, -one);
            raw.push(buf);
        }
        for j in 0..2 {
            // b-equation components: b·∇v_j - v·∇b_j
            let mut buf = vec![T::zero(); n];
            advect(2, j, &mut buf, one);
            advect(0, 2 + j, &mut buf, -one);
            raw.push(buf);
        }
        let mut spec: Vec<SpectralField<T>> = raw
            .into_iter()
            .map(|values| {
                tr.forward(&PhysicalField { grid, values })
                    .expect("buffer has the grid size")
            })
            .collect();
        let (mut outside, mut total) = (T::zero(), T::zero());
        for f in &spec {
            let e = f.coeffs().iter().fold(T::zero(), |a, c| a + c.norm_sqr());
            total += e;
            outside += e * f.unresolved_fraction();
        }
        for f in spec.iter_mut() {
            f.dealias_in_place();
            f.symmetrize();
        }
        // products at roundoff level (e.g. a single shear wave) carry no resolution signal
        let umax = u.iter().fold(T::zero(), |m, f| m.max(f.max_abs()));
        let floor = T::lit(1e-8) * umax * grad_max;
        let denom = total.max(floor * floor);
        let unresolved = if denom > T::zero() {
            outside / denom
        } else {
            T::zero()
        };
        let nb1 = spec.pop().unwrap();
        let nb0 = spec.pop().unwrap();
        let nv1 = spec.pop().unwrap();
        let nv0 = spec.pop().unwrap();
        Products {
            nv: [nv0, nv1],
            nb: [nb0, nb1],
            unresolved,
            grad_max,
        }
    }
}

/// `⟨v, b·∇_t b - v·∇_t v⟩ + ⟨b, b·∇_t v - v·∇_t b⟩` and the cubic scale
/// `‖(v, b)‖²_{L²} · max|∇_t(v, b)|` it should be compared against.
pub fn nonlinear_flux<T: Real>(rhs: &Rhs<T>, state: &State<T>) -> (T, T) {
    let p = rhs.products(state);
    let mut flux = T::zero();
    for j in 0..2 {
        flux += state.v[j].dealias().inner(&p.nv[j]) + state.b[j].dealias().inner(&p.nb[j]);
    }
    let n = state.norm_l2();
    (flux, n * n * p.grad_max)
}
