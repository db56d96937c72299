//! The overlap/partition-function identities and sequential measurement.
//!
//! For a bordered lattice with `N` dual sites, the partition function of the
//! three-body model equals `2^N` times the overlap of the code state with
//! the cosh/sinh product state. Generic product states map to complex
//! inhomogeneous couplings through `tanh(bJ_t) = c1_v / c0_v`, with an
//! explicit prefactor making the proportionality an equality:
//!
//! ```text
//! O = prefactor * Z / 2^N,   prefactor = prod_v c0_v / cosh(bJ_v)
//! ```
//!
//! Closed tori are rejected: their code states sum over boundary nets only,
//! while the spin expansion sums over all closed chains, and the two differ
//! by the homology classes.
//!
//! Measurement-based sampling draws outcomes one qubit at a time from exact
//! conditionals of the Born distribution; the realized conditional product
//! always rebuilds the joint probability.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::codestate::{code_state, overlap, ProductState, StateVector};
use crate::colex::{Colex2, DualTriangulation};
use crate::pauli::boundary_group;
use crate::scalar::Real;
use crate::spinmodel::{partition_exact, CouplingSet};
use crate::{Error, Result, SPIN_SITE_CAP};

/// Both sides of an identity and their relative error `|lhs - rhs| / |lhs|`.
#[derive(Clone, Copy, Debug)]
pub struct IdentityCheck<T: Real> {
    pub partition: Complex<T>,
    pub scaled_overlap: Complex<T>,
    pub rel_err: T,
}

impl<T: Real> IdentityCheck<T> {
    pub fn new(partition: Complex<T>, scaled_overlap: Complex<T>) -> Self {
        let denom = partition.norm();
        let rel_err = if denom == T::zero() {
            (partition - scaled_overlap).norm()
        } else {
            (partition - scaled_overlap).norm() / denom
        };
        Self {
            partition,
            scaled_overlap,
            rel_err,
        }
    }
}

fn check_pair(colex: &Colex2, dual: &DualTriangulation) -> Result<()> {
    if dual.triangle_count() != colex.vertex_count()
        || dual.site_count() != colex.face_count()
    {
        return Err(Error::InvalidArgument(
            "dual triangulation does not match the lattice".into(),
        ));
    }
    Ok(())
}

/// Checks `Z(bJ) = 2^N * O(bJ)` on a bordered lattice at a real uniform
/// coupling. The left side enumerates spin configurations, the right side
/// takes the dense code-state overlap. Closed lattices are rejected.
pub fn verify_overlap_identity<T: Real>(
    colex: &Colex2,
    dual: &DualTriangulation,
    beta_j: T,
) -> Result<IdentityCheck<T>> {
    if colex.is_closed() {
        return Err(Error::HomologyObstruction);
    }
    check_pair(colex, dual)?;
    let couplings = CouplingSet::uniform(T::one(), beta_j, dual);
    let partition = partition_exact(dual, &couplings)?;
    let state = code_state::<T>(colex)?;
    let phi = ProductState::cosh_sinh(beta_j, colex.vertex_count());
    let o = overlap(&state, &phi)?;
    let scale = T::from_count(1usize << dual.site_count());
    Ok(IdentityCheck::new(partition, o.scale(scale)))
}

/// Per-triangle complex couplings equivalent to a product state, with the
/// prefactor that turns the proportionality into an equality.
#[derive(Clone, Debug)]
pub struct CouplingDictionary<T: Real> {
    /// `bJ_t` per triangle, with the inverse temperature absorbed.
    pub beta_j: Vec<Complex<T>>,
    /// `prod_v c0_v / cosh(bJ_v)`.
    pub prefactor: Complex<T>,
}

impl<T: Real> CouplingDictionary<T> {
    /// Coupling set at `beta = 1` with zero fields.
    pub fn coupling_set(&self, dual: &DualTriangulation) -> CouplingSet<T> {
        CouplingSet::new(
            T::one(),
            self.beta_j.clone(),
            vec![Complex::new(T::zero(), T::zero()); dual.site_count()],
        )
    }
}

/// Maps a product state to triangle couplings: `bJ_t = atanh(c1_v / c0_v)`
/// on the principal branch, for the vertex `v` dual to triangle `t`.
///
/// Rejected when some `c0_v` vanishes or the ratio sits on the branch
/// points +1/-1; the dense overlap route stays available there.
pub fn couplings_from_product_state<T: Real>(
    phi: &ProductState<T>,
    dual: &DualTriangulation,
) -> Result<CouplingDictionary<T>> {
    if phi.len() != dual.triangle_count() {
        return Err(Error::LengthMismatch {
            left: phi.len(),
            right: dual.triangle_count(),
        });
    }
    let eps = T::from_f(1e-12);
    let mut beta_j = Vec::with_capacity(dual.triangle_count());
    let mut prefactor = Complex::new(T::one(), T::zero());
    for t in 0..dual.triangle_count() {
        let v = dual.triangle_to_vertex(t);
        let c0 = phi.coeff(v, false);
        let c1 = phi.coeff(v, true);
        if c0.norm_sqr() == T::zero() {
            return Err(Error::DictionaryDomain(format!(
                "qubit {v} has c0 = 0, no finite coupling reproduces it"
            )));
        }
        let ratio = c1 / c0;
        let one = Complex::new(T::one(), T::zero());
        if (ratio - one).norm() < eps || (ratio + one).norm() < eps {
            return Err(Error::DictionaryDomain(format!(
                "qubit {v} has c1/c0 at a branch point of atanh"
            )));
        }
        let bj = ratio.atanh();
        prefactor = prefactor * c0 / bj.cosh();
        beta_j.push(bj);
    }
    Ok(CouplingDictionary { beta_j, prefactor })
}

/// Orthonormal single-qubit measurement bases, one pair per qubit.
#[derive(Clone, Debug)]
pub struct MeasurementBasis<T: Real> {
    states: Vec<[[Complex<T>; 2]; 2]>,
}

impl<T: Real> MeasurementBasis<T> {
    /// Validates orthonormality of every pair.
    pub fn new(states: Vec<[[Complex<T>; 2]; 2]>) -> Result<Self> {
        let tol = T::from_f(1e-12);
        for (q, pair) in states.iter().enumerate() {
            let n0 = pair[0][0].norm_sqr() + pair[0][1].norm_sqr();
            let n1 = pair[1][0].norm_sqr() + pair[1][1].norm_sqr();
            let cross = pair[0][0].conj() * pair[1][0] + pair[0][1].conj() * pair[1][1];
            if (n0 - T::one()).abs() > tol || (n1 - T::one()).abs() > tol || cross.norm() > tol
            {
                return Err(Error::NonOrthonormalBasis { qubit: q });
            }
        }
        Ok(Self { states })
    }

    pub fn z(n: usize) -> Self {
        let zero = Complex::new(T::zero(), T::zero());
        let one = Complex::new(T::one(), T::zero());
        Self {
            states: vec![[[one, zero], [zero, one]]; n],
        }
    }

    pub fn x(n: usize) -> Self {
        let s = Complex::new(T::from_f(std::f64::consts::FRAC_1_SQRT_2), T::zero());
        Self {
            states: vec![[[s, s], [s, -s]]; n],
        }
    }

    /// Real rotation of the computational basis by `theta` on every qubit.
    pub fn rotated(theta: T, n: usize) -> Self {
        let c = Complex::new(theta.cos(), T::zero());
        let s = Complex::new(theta.sin(), T::zero());
        Self {
            states: vec![[[c, s], [-s, c]]; n],
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn outcome_state(&self, qubit: usize, outcome: bool) -> [Complex<T>; 2] {
        self.states[qubit][usize::from(outcome)]
    }
}

/// Born distribution over all outcome strings; bit `v` of the index holds
/// the outcome of qubit `v`. Probabilities sum to one.
pub fn mqc_joint<T: Real>(lattice: &Colex2, basis: &MeasurementBasis<T>) -> Result<Vec<T>> {
    let state = code_state::<T>(lattice)?;
    mqc_joint_of_state(&state, basis)
}

/// Same as [`mqc_joint`] for an arbitrary prepared state.
pub fn mqc_joint_of_state<T: Real>(
    state: &StateVector<T>,
    basis: &MeasurementBasis<T>,
) -> Result<Vec<T>> {
    let n = state.nqubits();
    if basis.len() != n {
        return Err(Error::LengthMismatch {
            left: basis.len(),
            right: n,
        });
    }
    let mut amps = state.amplitudes().to_vec();
    for v in 0..n {
        let s0 = basis.outcome_state(v, false);
        let s1 = basis.outcome_state(v, true);
        let bit = 1usize << v;
        for i0 in 0..amps.len() {
            if i0 & bit != 0 {
                continue;
            }
            let i1 = i0 | bit;
            let (a0, a1) = (amps[i0], amps[i1]);
            amps[i0] = s0[0].conj() * a0 + s0[1].conj() * a1;
            amps[i1] = s1[0].conj() * a0 + s1[1].conj() * a1;
        }
    }
    let mut total = T::zero();
    for a in &amps {
        total += a.norm_sqr();
    }
    if total == T::zero() {
        return Err(Error::ImpossibleOutcome);
    }
    Ok(amps.iter().map(|a| a.norm_sqr() / total).collect())
}

/// One full measurement run in a fixed qubit order.
#[derive(Clone, Debug)]
pub struct OutcomeVector {
    /// Qubits in the order they were measured.
    pub order: Vec<usize>,
    /// Outcome of `order[k]` at position `k`.
    pub outcomes: Vec<bool>,
}

impl OutcomeVector {
    /// Basis index with bit `v` holding the outcome of qubit `v`.
    pub fn bits(&self) -> usize {
        let mut b = 0usize;
        for (k, &v) in self.order.iter().enumerate() {
            if self.outcomes[k] {
                b |= 1 << v;
            }
        }
        b
    }

    /// Outcomes by qubit index, qubit 0 first.
    pub fn bitstring(&self) -> String {
        let n = self.order.len();
        let bits = self.bits();
        (0..n)
            .map(|v| if (bits >> v) & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct SampleRecord<T: Real> {
    pub outcome: OutcomeVector,
    /// Conditional probability realized at each step.
    pub conditionals: Vec<T>,
    /// Product of the conditionals: the joint probability of the run.
    pub probability: T,
}

/// Contracts one qubit (at bit position `pos`) against an outcome state.
fn contract_qubit<T: Real>(
    amps: &[Complex<T>],
    pos: usize,
    outcome_state: [Complex<T>; 2],
) -> Vec<Complex<T>> {
    let half = amps.len() / 2;
    let low_mask = (1usize << pos) - 1;
    let mut out = Vec::with_capacity(half);
    for i in 0..half {
        let low = i & low_mask;
        let high = (i >> pos) << (pos + 1);
        let idx0 = high | low;
        let idx1 = idx0 | (1 << pos);
        out.push(outcome_state[0].conj() * amps[idx0] + outcome_state[1].conj() * amps[idx1]);
    }
    out
}

fn norm_sqr_of<T: Real>(amps: &[Complex<T>]) -> T {
    let mut acc = T::zero();
    for a in amps {
        acc += a.norm_sqr();
    }
    acc
}

/// Draws `count` measurement runs by sequential conditional sampling.
///
/// Randomness comes from ChaCha12 seeded with `seed`; run `k` uses stream
/// `k` of the same seed, so a fixed seed reproduces the whole set and runs
/// are independent of each other. Within a step the outcome is 0 when the
/// uniform draw falls below the conditional probability of outcome 0.
pub fn mqc_sample<T: Real>(
    lattice: &Colex2,
    basis: &MeasurementBasis<T>,
    order: &[usize],
    seed: u64,
    count: usize,
) -> Result<Vec<SampleRecord<T>>> {
    let state = code_state::<T>(lattice)?;
    let n = state.nqubits();
    if basis.len() != n {
        return Err(Error::LengthMismatch {
            left: basis.len(),
            right: n,
        });
    }
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..n).collect::<Vec<_>>() {
        return Err(Error::InvalidArgument(
            "measurement order must be a permutation of the qubits".into(),
        ));
    }

    let mut records = Vec::with_capacity(count);
    for traj in 0..count {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(traj as u64);
        let mut amps = state.amplitudes().to_vec();
        let mut remaining: Vec<usize> = (0..n).collect();
        let mut outcomes = Vec::with_capacity(n);
        let mut conditionals = Vec::with_capacity(n);
        for &v in order {
            let pos = remaining
                .binary_search(&v)
                .expect("qubit still unmeasured");
            remaining.remove(pos);
            let psi0 = contract_qubit(&amps, pos, basis.outcome_state(v, false));
            let psi1 = contract_qubit(&amps, pos, basis.outcome_state(v, true));
            let n0 = norm_sqr_of(&psi0);
            let n1 = norm_sqr_of(&psi1);
            let total = n0 + n1;
            if !total.is_finite() || total <= T::zero() {
                return Err(Error::ResampleGuard { qubit: v });
            }
            let p0 = n0 / total;
            let u = T::from_f(rng.random::<f64>());
            let (bit, cond, next) = if u < p0 {
                (false, p0, psi0)
            } else {
                (true, T::one() - p0, psi1)
            };
            if cond <= T::zero() {
                return Err(Error::ResampleGuard { qubit: v });
            }
            outcomes.push(bit);
            conditionals.push(cond);
            amps = next;
        }
        let probability = conditionals
            .iter()
            .fold(T::one(), |acc, &c| acc * c);
        records.push(SampleRecord {
            outcome: OutcomeVector {
                order: order.to_vec(),
                outcomes,
            },
            conditionals,
            probability,
        });
    }
    Ok(records)
}

/// Joint probability of a full outcome string accumulated along a given
/// measurement order, without sampling. Used to check order invariance.
pub fn joint_probability_via_order<T: Real>(
    state: &StateVector<T>,
    basis: &MeasurementBasis<T>,
    order: &[usize],
    outcome_bits: usize,
) -> Result<T> {
    let n = state.nqubits();
    let mut amps = state.amplitudes().to_vec();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut prob = T::one();
    for &v in order {
        let pos = remaining
            .binary_search(&v)
            .map_err(|_| Error::InvalidArgument(format!("qubit {v} repeated in order")))?;
        remaining.remove(pos);
        let bit = (outcome_bits >> v) & 1 == 1;
        let total = norm_sqr_of(&amps);
        if total == T::zero() {
            return Ok(T::zero());
        }
        let next = contract_qubit(&amps, pos, basis.outcome_state(v, bit));
        prob *= norm_sqr_of(&next) / total;
        amps = next;
    }
    Ok(prob)
}

/// The two evaluations of a partially measured overlap.
#[derive(Clone, Debug)]
pub struct PartialMeasurement<T: Real> {
    /// `<psi| P |psi>` from dense contraction of the measured qubits.
    pub dense: T,
    /// The same quantity assembled from complex-coupling partition sums on
    /// the sub-triangulation dual to the measured set, when the coupling
    /// dictionary is defined there.
    pub spin: Option<Complex<T>>,
    /// False when the spin route was skipped (dictionary singularity or a
    /// closed lattice).
    pub dictionary_ok: bool,
}

/// Projects the measured qubits of the code state onto fixed outcomes and
/// returns the squared norm of the remainder, cross-evaluated through the
/// spin mapping restricted to the dual of the measured set.
pub fn partial_measurement_partition<T: Real>(
    colex: &Colex2,
    measured: &[usize],
    outcomes: &[bool],
    basis: &MeasurementBasis<T>,
) -> Result<PartialMeasurement<T>> {
    let n = colex.vertex_count();
    if basis.len() != n {
        return Err(Error::LengthMismatch {
            left: basis.len(),
            right: n,
        });
    }
    if measured.len() != outcomes.len() {
        return Err(Error::LengthMismatch {
            left: measured.len(),
            right: outcomes.len(),
        });
    }
    let mut m_sorted = measured.to_vec();
    m_sorted.sort_unstable();
    m_sorted.dedup();
    if m_sorted.len() != measured.len() || measured.iter().any(|&v| v >= n) {
        return Err(Error::InvalidArgument(
            "measured set must be distinct vertices".into(),
        ));
    }

    // Dense route: contract measured qubits in descending index order so
    // lower positions stay valid.
    let state = code_state::<T>(colex)?;
    let mut pairs: Vec<(usize, bool)> = measured.iter().copied().zip(outcomes.iter().copied()).collect();
    pairs.sort_by_key(|p| std::cmp::Reverse(p.0));
    let mut amps = state.amplitudes().to_vec();
    for &(v, bit) in &pairs {
        amps = contract_qubit(&amps, v, basis.outcome_state(v, bit));
    }
    let dense = norm_sqr_of(&amps);

    let spin = if colex.is_closed() {
        None
    } else {
        spin_route(colex, measured, outcomes, basis)?
    };
    let dictionary_ok = spin.is_some();
    Ok(PartialMeasurement {
        dense,
        spin,
        dictionary_ok,
    })
}

/// Assembles the partial overlap from partition functions on the measured
/// sub-dual. Returns `None` when the dictionary is singular along the way.
fn spin_route<T: Real>(
    colex: &Colex2,
    measured: &[usize],
    outcomes: &[bool],
    basis: &MeasurementBasis<T>,
) -> Result<Option<Complex<T>>> {
    let full_dual = crate::colex::build_dual(colex)?;

    // Sub-triangulation spanned by the measured triangles.
    let mut site_map = std::collections::BTreeMap::new();
    let mut sub_sites = Vec::new();
    let mut sub_triangles = Vec::with_capacity(measured.len());
    for &v in measured {
        let tri = full_dual.triangles()[v];
        let mut mapped = [0usize; 3];
        for (k, &s) in tri.iter().enumerate() {
            let next = site_map.len();
            let id = *site_map.entry(s).or_insert(next);
            if id == sub_sites.len() {
                sub_sites.push(full_dual.site_color(s));
            }
            mapped[k] = id;
        }
        sub_triangles.push(mapped);
    }
    if sub_sites.len() > SPIN_SITE_CAP {
        return Ok(None);
    }
    let sub_dual = DualTriangulation::from_parts(sub_sites, sub_triangles, true)?;

    let outcome_of = |v: usize| {
        let k = measured.iter().position(|&m| m == v).unwrap();
        outcomes[k]
    };

    let group = boundary_group(colex)?;
    let eps = T::from_f(1e-9);
    let mut total = Complex::new(T::zero(), T::zero());
    for net in group.members() {
        // Factor per measured qubit; a vanishing component kills the term.
        let mut base = Complex::new(T::one(), T::zero());
        let mut ratios = Vec::with_capacity(measured.len());
        let mut dead = false;
        for &v in measured {
            let pair = basis.outcome_state(v, outcome_of(v));
            let on = net.0.get(v);
            let c_here = pair[usize::from(on)];
            let c_other = pair[usize::from(!on)];
            if c_here.norm_sqr() == T::zero() {
                dead = true;
                break;
            }
            base *= Complex::new(c_here.norm_sqr(), T::zero());
            ratios.push(c_other / c_here);
        }
        if dead {
            continue;
        }
        // Couplings from the ratios; branch points abort the spin route.
        let one = Complex::new(T::one(), T::zero());
        let mut bj = Vec::with_capacity(ratios.len());
        let mut cosh_prod = Complex::new(T::one(), T::zero());
        for r in &ratios {
            if (*r - one).norm() < eps || (*r + one).norm() < eps {
                return Ok(None);
            }
            let b = r.atanh();
            cosh_prod *= b.cosh();
            bj.push(b);
        }
        let couplings = CouplingSet::new(
            T::one(),
            bj,
            vec![Complex::new(T::zero(), T::zero()); sub_dual.site_count()],
        );
        let z = partition_exact(&sub_dual, &couplings)?;
        let scale = T::from_count(1usize << sub_dual.site_count());
        let chain_sum = z / (cosh_prod.scale(scale));
        total += base * chain_sum;
    }
    Ok(Some(total))
}
