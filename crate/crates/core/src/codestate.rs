//! Dense state vectors for code states and product-state overlaps.
//!
//! States are un-normalized throughout: the code state has amplitude 1 on
//! every boundary net and 0 elsewhere, and product states carry raw
//! cosh/sinh coefficients. The partition-function identities hold exactly in
//! this convention.
//!
//! Qubit order is the vertex index order: bit `v` of a basis index is qubit
//! `v`. Overlap sums run through the deterministic reduction tree of
//! [`crate::scalar`], with compensated leaves.

use num_complex::Complex;

use crate::colex::Colex2;
use crate::gf2::BitVec;
use crate::pauli::{boundary_group, PauliOp};
use crate::scalar::{sum_terms, Compensated, Real};
use crate::{Error, Result, DENSE_QUBIT_CAP};

/// Dense complex amplitude vector over `2^n` basis states.
#[derive(Clone, Debug)]
pub struct StateVector<T: Real> {
    nqubits: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    pub fn zeros(nqubits: usize) -> Result<Self> {
        if nqubits > DENSE_QUBIT_CAP {
            return Err(Error::CapExceeded {
                what: "dense qubit count",
                value: nqubits,
                cap: DENSE_QUBIT_CAP,
            });
        }
        Ok(Self {
            nqubits,
            amps: vec![Complex::new(T::zero(), T::zero()); 1usize << nqubits],
        })
    }

    pub fn from_amplitudes(nqubits: usize, amps: Vec<Complex<T>>) -> Result<Self> {
        if amps.len() != 1usize << nqubits {
            return Err(Error::LengthMismatch {
                left: amps.len(),
                right: 1usize << nqubits,
            });
        }
        Ok(Self { nqubits, amps })
    }

    pub fn nqubits(&self) -> usize {
        self.nqubits
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.amps
    }

    pub fn amp(&self, basis: usize) -> Complex<T> {
        self.amps[basis]
    }

    pub fn nonzero_count(&self) -> usize {
        self.amps
            .iter()
            .filter(|a| a.re != T::zero() || a.im != T::zero())
            .count()
    }

    pub fn norm_sqr(&self) -> T {
        let mut acc = Compensated::new();
        for a in &self.amps {
            acc.add(Complex::new(a.norm_sqr(), T::zero()));
        }
        acc.value().re
    }

    /// `<self|other>` with conjugation on `self`.
    pub fn inner(&self, other: &StateVector<T>) -> Result<Complex<T>> {
        if self.nqubits != other.nqubits {
            return Err(Error::LengthMismatch {
                left: self.nqubits,
                right: other.nqubits,
            });
        }
        Ok(sum_terms(self.amps.len(), &|b| {
            self.amps[b].conj() * other.amps[b]
        }))
    }
}

/// Product state given by one coefficient pair per qubit.
#[derive(Clone, Debug)]
pub struct ProductState<T: Real> {
    coeffs: Vec<[Complex<T>; 2]>,
}

impl<T: Real> ProductState<T> {
    /// Builds from per-qubit pairs; a qubit with both coefficients zero is
    /// rejected.
    pub fn new(coeffs: Vec<[Complex<T>; 2]>) -> Result<Self> {
        for (v, c) in coeffs.iter().enumerate() {
            if c[0].norm_sqr() == T::zero() && c[1].norm_sqr() == T::zero() {
                return Err(Error::InvalidArgument(format!(
                    "qubit {v} has both coefficients zero"
                )));
            }
        }
        Ok(Self { coeffs })
    }

    /// The uniform `cosh(bj)|0> + sinh(bj)|1>` state on every qubit.
    pub fn cosh_sinh(beta_j: T, nqubits: usize) -> Self {
        let pair = [
            Complex::new(beta_j.cosh(), T::zero()),
            Complex::new(beta_j.sinh(), T::zero()),
        ];
        Self {
            coeffs: vec![pair; nqubits],
        }
    }

    /// Per-qubit `cosh(s_v)|0> + sinh(s_v)|1>` coefficients.
    pub fn cosh_sinh_fields(fields: &[T]) -> Self {
        Self {
            coeffs: fields
                .iter()
                .map(|&s| {
                    [
                        Complex::new(s.cosh(), T::zero()),
                        Complex::new(s.sinh(), T::zero()),
                    ]
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, qubit: usize, value: bool) -> Complex<T> {
        self.coeffs[qubit][usize::from(value)]
    }

    pub fn coeffs(&self) -> &[[Complex<T>; 2]] {
        &self.coeffs
    }

    /// Amplitude of one computational basis state.
    pub fn basis_amplitude(&self, basis: usize) -> Complex<T> {
        let mut p = Complex::new(T::one(), T::zero());
        for (v, pair) in self.coeffs.iter().enumerate() {
            p *= pair[(basis >> v) & 1];
        }
        p
    }
}

/// The code state of a lattice: `prod_f (1 + X_f) |0...0>` over complete
/// faces, i.e. amplitude 1 on every boundary net and 0 elsewhere.
pub fn code_state<T: Real>(lattice: &Colex2) -> Result<StateVector<T>> {
    let n = lattice.vertex_count();
    let mut state = StateVector::zeros(n)?;
    let group = boundary_group(lattice)?;
    let one = Complex::new(T::one(), T::zero());
    group.for_each(|net| {
        let idx = net.to_mask().expect("dense cap keeps n <= 64") as usize;
        state.amps[idx] = one;
    });
    Ok(state)
}

/// Applies a Pauli operator: X bits permute basis states, Z bits flip signs.
pub fn apply_pauli<T: Real>(state: &StateVector<T>, op: &PauliOp) -> Result<StateVector<T>> {
    if op.len() != state.nqubits {
        return Err(Error::LengthMismatch {
            left: op.len(),
            right: state.nqubits,
        });
    }
    let xmask = op.xbits.to_mask()? as usize;
    let zmask = op.zbits.to_mask()? as usize;
    let mut out = StateVector::zeros(state.nqubits)?;
    for b in 0..state.amps.len() {
        let sign = if ((b & zmask).count_ones()) % 2 == 1 {
            -T::one()
        } else {
            T::one()
        };
        out.amps[b ^ xmask] = state.amps[b].scale(sign);
    }
    Ok(out)
}

/// `<state|phi>`: the overlap of a stored state with a product state,
/// conjugating the stored state.
pub fn overlap<T: Real>(state: &StateVector<T>, phi: &ProductState<T>) -> Result<Complex<T>> {
    if phi.len() != state.nqubits {
        return Err(Error::LengthMismatch {
            left: phi.len(),
            right: state.nqubits,
        });
    }
    let zero = Complex::new(T::zero(), T::zero());
    Ok(sum_terms(state.amps.len(), &|b| {
        let a = state.amps[b];
        if a == zero {
            zero
        } else {
            a.conj() * phi.basis_amplitude(b)
        }
    }))
}

/// Overlap of the lattice code state with a product state, evaluated by
/// walking the boundary group instead of building the dense vector:
/// `prod_v c0_v * sum_{nets} prod_{v in net} (c1_v / c0_v)`.
///
/// Requires every `c0_v` to be nonzero; callers hitting that case must use
/// the dense route.
pub fn string_net_overlap<T: Real>(
    lattice: &Colex2,
    phi: &ProductState<T>,
) -> Result<Complex<T>> {
    let n = lattice.vertex_count();
    if phi.len() != n {
        return Err(Error::LengthMismatch {
            left: phi.len(),
            right: n,
        });
    }
    let mut prefactor = Complex::new(T::one(), T::zero());
    let mut ratios = Vec::with_capacity(n);
    for v in 0..n {
        let c0 = phi.coeff(v, false);
        if c0.norm_sqr() == T::zero() {
            return Err(Error::DictionaryDomain(format!(
                "qubit {v} has c0 = 0; the net expansion divides by it"
            )));
        }
        prefactor *= c0;
        ratios.push(phi.coeff(v, true) / c0);
    }
    let group = boundary_group(lattice)?;
    let mut acc = Compensated::new();
    group.for_each(|net: &BitVec| {
        let mut term = Complex::new(T::one(), T::zero());
        for v in net.ones() {
            term *= ratios[v];
        }
        acc.add(term);
    });
    Ok(prefactor * acc.value())
}
