//! First and second moments of the cavity and COM modes.
//!
//! Second moments are stored once per unordered pair of basis operators, in
//! normal order. The 36 entries, in storage order:
//!
//! | slots  | moments |
//! |--------|---------|
//! | 0–2    | ⟨c†c⟩, ⟨cc⟩, ⟨c†c†⟩ |
//! | 3–11   | ⟨b_k†b_l⟩, k, l ∈ {x, y, z}, row-major |
//! | 12–17  | ⟨b_k b_l⟩, k ≤ l |
//! | 18–23  | ⟨b_k†b_l†⟩, k ≤ l |
//! | 24–26  | ⟨b_k c†⟩ |
//! | 27–29  | ⟨b_k c⟩ |
//! | 30–32  | ⟨b_k† c⟩ |
//! | 33–35  | ⟨b_k† c†⟩ |
//!
//! Any other ordering follows from `⟨v_a v_b⟩ = ⟨v_b v_a⟩ + [v_a, v_b]`.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::generator::{adjoint, b_idx, basis_commutator, bd_idx, CD_IDX, C_IDX, DIM};
use crate::consts::{HBAR, K_B};
use crate::scalar::{cabs, cplx, lit, to_f64, Cplx, Real};

/// Number of stored second moments.
pub const N_SECOND: usize = 36;

struct Table {
    pairs: Vec<(usize, usize)>,
    // slot[a][b] = Some(i) when (a, b) is the stored ordering of pair i
    slot: [[Option<usize>; DIM]; DIM],
}

fn table() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut pairs = vec![(CD_IDX, C_IDX), (C_IDX, C_IDX), (CD_IDX, CD_IDX)];
        for k in 0..3 {
            for l in 0..3 {
                pairs.push((bd_idx(k), b_idx(l)));
            }
        }
        for k in 0..3 {
            for l in k..3 {
                pairs.push((b_idx(k), b_idx(l)));
            }
        }
        for k in 0..3 {
            for l in k..3 {
                pairs.push((bd_idx(k), bd_idx(l)));
            }
        }
        for (op, cav) in [(0, CD_IDX), (0, C_IDX), (1, C_IDX), (1, CD_IDX)] {
            for k in 0..3 {
                let m = if op == 0 { b_idx(k) } else { bd_idx(k) };
                pairs.push((m, cav));
            }
        }
        let mut slot = [[None; DIM]; DIM];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            slot[a][b] = Some(i);
        }
        Table { pairs, slot }
    })
}

/// Stored `(a, b)` ordering of second-moment slot `i`.
pub fn pair_of(i: usize) -> (usize, usize) {
    table().pairs[i]
}

/// Slot and additive constant such that `⟨v_a v_b⟩ = S[slot] + constant`.
pub fn lookup(a: usize, b: usize) -> (usize, f64) {
    let t = table();
    match t.slot[a][b] {
        Some(i) => (i, 0.0),
        None => {
            let i = t.slot[b][a].expect("every unordered pair is stored");
            (i, basis_commutator::<f64>(a, b))
        }
    }
}

const OP_NAMES: [&str; DIM] = ["c", "cd", "bx", "bxd", "by", "byd", "bz", "bzd"];

/// Name of basis operator `a` (`cd` for c†, `bxd` for b_x†, ...).
pub fn op_name(a: usize) -> &'static str {
    OP_NAMES[a]
}

/// Column label of slot `i`, e.g. `bxd*by`.
pub fn slot_name(i: usize) -> String {
    let (a, b) = pair_of(i);
    format!("{}*{}", OP_NAMES[a], OP_NAMES[b])
}

/// Moments at one instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentState<T: Real> {
    /// ⟨v_a⟩ for the eight basis operators.
    pub first: DVector<Cplx<T>>,
    /// Stored second moments, see the module table.
    pub second: DVector<Cplx<T>>,
    pub time: T,
}

impl<T: Real> MomentState<T> {
    /// All moments zero: the joint vacuum of cavity and mechanics.
    pub fn vacuum() -> Self {
        let z = cplx(T::zero(), T::zero());
        MomentState {
            first: DVector::from_element(DIM, z),
            second: DVector::from_element(N_SECOND, z),
            time: T::zero(),
        }
    }

    /// `⟨v_a v_b⟩` for any ordering.
    pub fn pair(&self, a: usize, b: usize) -> Cplx<T> {
        let (i, c) = lookup(a, b);
        self.second[i] + cplx(lit::<T>(c), T::zero())
    }

    /// `⟨b_j† b_j⟩`.
    pub fn occupation(&self, axis: usize) -> T {
        self.pair(bd_idx(axis), b_idx(axis)).re
    }

    /// `⟨c† c⟩`.
    pub fn photon_number(&self) -> T {
        self.pair(CD_IDX, C_IDX).re
    }

    /// `⟨q_j²⟩` with `q_j = b_j + b_j†`.
    pub fn position_variance(&self, axis: usize) -> T {
        let (b, bd) = (b_idx(axis), bd_idx(axis));
        (self.pair(b, b) + self.pair(b, bd) + self.pair(bd, b) + self.pair(bd, bd)).re
    }

    /// Largest violation of `conj⟨v_a v_b⟩ = ⟨v_b† v_a†⟩` and `conj⟨v_a⟩ = ⟨v_a†⟩`,
    /// relative to `max(1, max |moment|)`.
    pub fn hermiticity_violation(&self) -> T {
        let mut worst = T::zero();
        let mut scale = T::one();
        for a in 0..DIM {
            worst = worst.max(cabs(self.first[a].conj() - self.first[adjoint(a)]));
            scale = scale.max(cabs(self.first[a]));
            for b in 0..DIM {
                let ab = self.pair(a, b);
                scale = scale.max(cabs(ab));
                worst = worst.max(cabs(ab.conj() - self.pair(adjoint(b), adjoint(a))));
            }
        }
        worst / scale
    }

    /// Matrix `K_ab = ⟨δv_a† δv_b⟩`, Hermitian and positive semidefinite for
    /// any physical state. This is equivalent to `σ + iΩ/2 ⪰ 0` for the
    /// quadrature covariance matrix.
    pub fn normal_covariance(&self) -> DMatrix<Cplx<T>> {
        DMatrix::from_fn(DIM, DIM, |a, b| {
            self.pair(adjoint(a), b) - self.first[a].conj() * self.first[b]
        })
    }

    /// Smallest eigenvalue of the Hermitian part of [`Self::normal_covariance`].
    pub fn covariance_min_eigenvalue(&self) -> T {
        let k = self.normal_covariance();
        let h = (&k + k.adjoint()) * cplx(lit::<T>(0.5), T::zero());
        let e = SymmetricEigen::new(h);
        e.eigenvalues.iter().fold(lit::<T>(f64::INFINITY), |m, &v| m.min(v))
    }

    /// Converts to another scalar type.
    pub fn cast<U: Real>(&self) -> MomentState<U> {
        let c = |z: &Cplx<T>| cplx(lit::<U>(to_f64(z.re)), lit::<U>(to_f64(z.im)));
        MomentState {
            first: self.first.map(|z| c(&z)),
            second: self.second.map(|z| c(&z)),
            time: lit(to_f64(self.time)),
        }
    }
}

/// Bose occupation `1/(exp(ħΩ/k_B T) − 1)`; zero at `T = 0`.
pub fn bose_occupation(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    1.0 / (HBAR * omega / (K_B * temperature)).exp_m1()
}

/// Mechanics thermal at `temperature`, cavity in vacuum, no correlations.
pub fn thermal_state<T: Real>(temperature: f64, omega: [f64; 3]) -> MomentState<T> {
    let mut s = MomentState::vacuum();
    for j in 0..3 {
        let (i, _) = lookup(bd_idx(j), b_idx(j));
        s.second[i] = cplx(lit(bose_occupation(omega[j], temperature)), T::zero());
    }
    s
}

/// `T_j = ħ Ω_j′ ⟨b_j† b_j⟩ / k_B`, kelvin.
pub fn temperatures<T: Real>(s: &MomentState<T>, omega: [f64; 3]) -> [f64; 3] {
    [0, 1, 2].map(|j| occupation_to_temperature(to_f64(s.occupation(j)), omega[j]))
}

pub fn occupation_to_temperature(n: f64, omega: f64) -> f64 {
    HBAR * omega * n / K_B
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_pair_stored_once() {
        let mut seen = [[false; DIM]; DIM];
        for i in 0..N_SECOND {
            let (a, b) = pair_of(i);
            assert!(!seen[a][b] && !seen[b][a]);
            seen[a][b] = true;
            seen[b][a] = true;
        }
        assert!(seen.iter().all(|r| r.iter().all(|&x| x)));
    }

    #[test]
    fn swapped_lookup_adds_commutator() {
        // ⟨c c†⟩ = ⟨c†c⟩ + 1
        let (i, k) = lookup(C_IDX, CD_IDX);
        assert_eq!(pair_of(i), (CD_IDX, C_IDX));
        assert_eq!(k, 1.0);
    }

    #[test]
    fn vacuum_is_physical() {
        let s = MomentState::<f64>::vacuum();
        assert!(s.covariance_min_eigenvalue() > -1e-12);
        assert_eq!(s.hermiticity_violation(), 0.0);
    }
}
