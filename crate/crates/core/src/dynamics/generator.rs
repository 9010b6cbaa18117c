//! Heisenberg-picture generator of a quadratic master equation in the mode
//! basis v = (c, c†, b_x, b_x†, b_y, b_y†, b_z, b_z†).
//!
//! Every term is one of three kinds:
//!
//! * a quadratic Hamiltonian `H = Σ h_ij v_i v_j`, entering as `i[H, X]`;
//! * a generalized dissipator `w (2 L₁ μ L₂† − {L₂† L₁, μ})` with linear
//!   `L₁`, `L₂` (covers `2κ D[c]`, `−Γ[q,[q,μ]]` and the Υ term);
//! * gas friction `(γ/4)[q, {p, μ}]`.
//!
//! For each of them the adjoint action on a linear operator is linear, and on
//! a product `AB` it equals `L(A)B + A L(B)` plus a c-number, so first and
//! second moments close.

use nalgebra::DMatrix;

use crate::scalar::{cplx, lit, Cplx, Real};

/// Number of modes.
pub const MODES: usize = 4;
/// Length of the operator basis.
pub const DIM: usize = 2 * MODES;

/// Index of c.
pub const C_IDX: usize = 0;
/// Index of c†.
pub const CD_IDX: usize = 1;

/// Index of b_j.
pub const fn b_idx(axis: usize) -> usize {
    2 + 2 * axis
}

/// Index of b_j†.
pub const fn bd_idx(axis: usize) -> usize {
    3 + 2 * axis
}

/// Index of the adjoint of basis operator `a`.
pub const fn adjoint(a: usize) -> usize {
    a ^ 1
}

/// Commutator `[v_a, v_b]` of basis operators.
pub fn basis_commutator<T: Real>(a: usize, b: usize) -> T {
    if a % 2 == 0 && b == a + 1 {
        T::one()
    } else if a % 2 == 1 && b + 1 == a {
        -T::one()
    } else {
        T::zero()
    }
}

/// Linear combination of basis operators.
pub type LinOp<T> = [Cplx<T>; DIM];

pub fn zero_op<T: Real>() -> LinOp<T> {
    [cplx(T::zero(), T::zero()); DIM]
}

pub fn basis_op<T: Real>(a: usize) -> LinOp<T> {
    let mut o = zero_op();
    o[a] = cplx(T::one(), T::zero());
    o
}

/// `q_j = b_j + b_j†`.
pub fn position_op<T: Real>(axis: usize) -> LinOp<T> {
    let mut o = zero_op();
    o[b_idx(axis)] = cplx(T::one(), T::zero());
    o[bd_idx(axis)] = cplx(T::one(), T::zero());
    o
}

/// `p_j = b_j† − b_j`.
pub fn momentum_op<T: Real>(axis: usize) -> LinOp<T> {
    let mut o = zero_op();
    o[b_idx(axis)] = cplx(-T::one(), T::zero());
    o[bd_idx(axis)] = cplx(T::one(), T::zero());
    o
}

/// Hermitian adjoint of a linear operator.
pub fn dagger<T: Real>(x: &LinOp<T>) -> LinOp<T> {
    let mut o = zero_op();
    for a in 0..DIM {
        o[adjoint(a)] = x[a].conj();
    }
    o
}

/// `[X, Y]`, a c-number for linear operators.
pub fn commutator<T: Real>(x: &LinOp<T>, y: &LinOp<T>) -> Cplx<T> {
    let mut s = cplx(T::zero(), T::zero());
    for a in 0..DIM {
        let partner = adjoint(a);
        let j: T = basis_commutator(a, partner);
        s += x[a] * y[partner] * j;
    }
    s
}

/// `w (2 L₁ μ L₂† − {L₂† L₁, μ})`.
#[derive(Debug, Clone, Copy)]
pub struct Dissipator<T: Real> {
    pub weight: Cplx<T>,
    pub l1: LinOp<T>,
    pub l2: LinOp<T>,
}

/// Quadratic generator: Hamiltonian, dissipators and per-axis friction.
#[derive(Debug, Clone)]
pub struct Generator<T: Real> {
    /// `H = Σ h[i][j] v_i v_j`.
    pub hamiltonian: DMatrix<Cplx<T>>,
    pub dissipators: Vec<Dissipator<T>>,
    /// Friction rate γ applied to every mechanical axis.
    pub friction: T,
}

impl<T: Real> Generator<T> {
    /// Matrix `M` with `L†(v_k) = Σ_l M[k][l] v_l`.
    pub fn linear_part(&self) -> DMatrix<Cplx<T>> {
        let i = cplx(T::zero(), T::one());
        let h = &self.hamiltonian;
        let mut m = DMatrix::from_element(DIM, DIM, cplx(T::zero(), T::zero()));
        for k in 0..DIM {
            // i[H, v_k] = i Σ_ij h_ij (v_i [v_j, v_k] + [v_i, v_k] v_j)
            for l in 0..DIM {
                let mut acc = cplx(T::zero(), T::zero());
                for j in 0..DIM {
                    let jk: T = basis_commutator(j, k);
                    if jk != T::zero() {
                        acc += (h[(l, j)] + h[(j, l)]) * jk;
                    }
                }
                m[(k, l)] += i * acc;
            }
            let vk = basis_op::<T>(k);
            for d in &self.dissipators {
                let l2d = dagger(&d.l2);
                let a = commutator(&vk, &d.l1);
                let b = commutator(&l2d, &vk);
                for l in 0..DIM {
                    m[(k, l)] += d.weight * (a * l2d[l] + b * d.l1[l]);
                }
            }
            if self.friction != T::zero() {
                let half = self.friction * lit::<T>(0.5);
                for axis in 0..3 {
                    let c = commutator(&vk, &position_op(axis));
                    let p = momentum_op::<T>(axis);
                    for l in 0..DIM {
                        m[(k, l)] += p[l] * c * half;
                    }
                }
            }
        }
        m
    }

    /// C-number part of `L†(v_a v_b) − L†(v_a) v_b − v_a L†(v_b)`.
    pub fn product_constant(&self, a: usize, b: usize) -> Cplx<T> {
        let va = basis_op::<T>(a);
        let vb = basis_op::<T>(b);
        let two = lit::<T>(2.0);
        let mut s = cplx(T::zero(), T::zero());
        for d in &self.dissipators {
            let l2d = dagger(&d.l2);
            s += d.weight * commutator(&l2d, &va) * commutator(&vb, &d.l1) * two;
        }
        if self.friction != T::zero() {
            let quarter = self.friction * lit::<T>(0.25);
            for axis in 0..3 {
                let q = position_op::<T>(axis);
                let p = momentum_op::<T>(axis);
                let ca = commutator(&va, &q);
                let cb = commutator(&vb, &q);
                s += (cb * commutator(&p, &va) + ca * commutator(&vb, &p)) * quarter;
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutators_of_basis() {
        let c = basis_op::<f64>(C_IDX);
        let cd = basis_op::<f64>(CD_IDX);
        assert_eq!(commutator(&c, &cd).re, 1.0);
        assert_eq!(commutator(&cd, &c).re, -1.0);
        let q = position_op::<f64>(1);
        let p = momentum_op::<f64>(1);
        // [q, p] = [b + b†, b† − b] = 2
        assert_eq!(commutator(&q, &p).re, 2.0);
    }

    #[test]
    fn lindblad_decay_of_cavity() {
        let kappa = 3.0;
        let c = basis_op::<f64>(C_IDX);
        let g = Generator {
            hamiltonian: DMatrix::from_element(DIM, DIM, cplx(0.0, 0.0)),
            dissipators: vec![Dissipator { weight: cplx(kappa, 0.0), l1: c, l2: c }],
            friction: 0.0,
        };
        let m = g.linear_part();
        assert_eq!(m[(C_IDX, C_IDX)], cplx(-kappa, 0.0));
        assert_eq!(m[(CD_IDX, CD_IDX)], cplx(-kappa, 0.0));
        // no pumping of c†c from a pure loss channel
        assert_eq!(g.product_constant(CD_IDX, C_IDX), cplx(0.0, 0.0));
        // ⟨c c†⟩ = ⟨c†c⟩ + 1 relaxes to 1
        assert_eq!(g.product_constant(C_IDX, CD_IDX), cplx(2.0 * kappa, 0.0));
    }
}
