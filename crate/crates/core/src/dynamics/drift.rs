//! Drift matrices of the first- and second-moment equations.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::generator::{
    b_idx, basis_op, bd_idx, position_op, Dissipator, Generator, CD_IDX, C_IDX, DIM,
};
use super::moments::{lookup, pair_of, N_SECOND};
use crate::noise::NoiseRates;
use crate::renorm::ModelCoefficients;
use crate::scalar::{ccast, cplx, lit, Cplx, Real};

/// Rates of the cavity + COM master equation, rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftInputs<T: Real> {
    /// Cavity detuning δ′.
    pub delta: T,
    /// Cavity field decay κ′.
    pub kappa: T,
    /// Mechanical frequencies Ω_j′.
    pub omega: [T; 3],
    /// Couplings g_j′ in `g_j′ c† q_j + h.c.`.
    pub g: [Cplx<T>; 3],
    /// Gas friction γ.
    pub gamma: T,
    /// Position-localization rates Γ_j.
    pub big_gamma: [T; 3],
    /// Incoherent cavity–z coupling Υ, if enabled.
    pub upsilon: Option<Cplx<T>>,
}

impl DriftInputs<f64> {
    /// Collects the rates of a solved model.
    pub fn from_model(mc: &ModelCoefficients, nr: &NoiseRates) -> Self {
        DriftInputs {
            delta: mc.delta_prime,
            kappa: mc.kappa_prime,
            omega: mc.omega_prime,
            g: mc.g_prime,
            gamma: nr.gamma,
            big_gamma: nr.gamma_total,
            upsilon: mc.include_upsilon.then_some(mc.upsilon),
        }
    }
}

impl<T: Real> DriftInputs<T> {
    /// Converts from double precision.
    pub fn from_f64(d: &DriftInputs<f64>) -> Self {
        DriftInputs {
            delta: lit(d.delta),
            kappa: lit(d.kappa),
            omega: d.omega.map(lit),
            g: d.g.map(ccast),
            gamma: lit(d.gamma),
            big_gamma: d.big_gamma.map(lit),
            upsilon: d.upsilon.map(ccast),
        }
    }

    /// The quadratic generator of the master equation.
    pub fn generator(&self) -> Generator<T> {
        let z = cplx(T::zero(), T::zero());
        let mut h = DMatrix::from_element(DIM, DIM, z);
        h[(CD_IDX, C_IDX)] = cplx(self.delta, T::zero());
        for j in 0..3 {
            h[(bd_idx(j), b_idx(j))] = cplx(self.omega[j], T::zero());
            for m in [b_idx(j), bd_idx(j)] {
                h[(CD_IDX, m)] += self.g[j];
                h[(C_IDX, m)] += self.g[j].conj();
            }
        }
        let c = basis_op::<T>(C_IDX);
        let mut dissipators =
            vec![Dissipator { weight: cplx(self.kappa, T::zero()), l1: c, l2: c }];
        for j in 0..3 {
            let q = position_op::<T>(j);
            dissipators.push(Dissipator { weight: cplx(self.big_gamma[j], T::zero()), l1: q, l2: q });
        }
        if let Some(u) = self.upsilon {
            let q = position_op::<T>(2);
            dissipators.push(Dissipator { weight: u, l1: q, l2: c });
            dissipators.push(Dissipator { weight: u.conj(), l1: c, l2: q });
        }
        Generator { hamiltonian: h, dissipators, friction: self.gamma }
    }
}

/// `d⟨v⟩/dt = M0 ⟨v⟩` and `dS/dt = A2 S + d2`.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftModel<T: Real> {
    pub inputs: DriftInputs<T>,
    pub m0: DMatrix<Cplx<T>>,
    pub a2: DMatrix<Cplx<T>>,
    pub d2: DVector<Cplx<T>>,
}

impl<T: Real> DriftModel<T> {
    /// Assembles both drift systems from the rates.
    pub fn build(inputs: DriftInputs<T>) -> Self {
        let gen = inputs.generator();
        let m0 = gen.linear_part();
        let z = cplx(T::zero(), T::zero());
        let mut a2 = DMatrix::from_element(N_SECOND, N_SECOND, z);
        let mut d2 = DVector::from_element(N_SECOND, z);
        for r in 0..N_SECOND {
            let (a, b) = pair_of(r);
            for l in 0..DIM {
                let ma = m0[(a, l)];
                if ma != z {
                    let (i, k) = lookup(l, b);
                    a2[(r, i)] += ma;
                    d2[r] += ma * lit::<T>(k);
                }
                let mb = m0[(b, l)];
                if mb != z {
                    let (i, k) = lookup(a, l);
                    a2[(r, i)] += mb;
                    d2[r] += mb * lit::<T>(k);
                }
            }
            d2[r] += gen.product_constant(a, b);
        }
        DriftModel { inputs, m0, a2, d2 }
    }
}
