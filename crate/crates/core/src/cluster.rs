//! Bipartite cluster states that prepare code states, and the field
//! identity.
//!
//! The graph puts one qubit on every colex vertex (part `U1`) and one on
//! every retained face (part `U2`, partial faces included on bordered
//! lattices), joining a vertex to the faces keeping it. The cluster state is
//! fixed by `X` conditions on `U1` neighborhoods and `Z` conditions on `U2`
//! neighborhoods; measuring all face qubits in the `Z` basis collapses the
//! vertex register onto a code state, exactly when every outcome is zero.
//!
//! Projecting instead onto cosh/sinh product states on both parts encodes a
//! three-body model with a site field on the dual: couplings ride on vertex
//! qubits and fields on face qubits, and `Z(b, J, h) = 2^N O(b, J, h)` with
//! `N` the face count.
//!
//! Cluster qubit order: vertices first (by index), then faces.

use num_complex::Complex;

use crate::codestate::{overlap, ProductState, StateVector};
use crate::colex::{Colex2, DualTriangulation};
use crate::correspondence::IdentityCheck;
use crate::gf2::{BitVec, Span};
use crate::pauli::PauliOp;
use crate::scalar::{sum_terms, Real};
use crate::spinmodel::{partition_exact, CouplingSet};
use crate::{Error, Result, CHAIN_CAP, DENSE_QUBIT_CAP};

/// Bipartite graph between colex vertices and retained faces.
#[derive(Clone, Debug)]
pub struct ClusterGraph {
    nverts: usize,
    face_members: Vec<Vec<usize>>,
    vertex_faces: Vec<Vec<usize>>,
}

impl ClusterGraph {
    pub fn u1_count(&self) -> usize {
        self.nverts
    }

    pub fn u2_count(&self) -> usize {
        self.face_members.len()
    }

    pub fn qubit_count(&self) -> usize {
        self.nverts + self.face_members.len()
    }

    pub fn edge_count(&self) -> usize {
        self.face_members.iter().map(|m| m.len()).sum()
    }

    /// Qubit index of a face in the combined register.
    pub fn face_qubit(&self, f: usize) -> usize {
        self.nverts + f
    }

    pub fn face_members(&self, f: usize) -> &[usize] {
        &self.face_members[f]
    }

    pub fn vertex_faces(&self, v: usize) -> &[usize] {
        &self.vertex_faces[v]
    }
}

/// Builds the graph: vertex `v` neighbors face `f` iff `f` keeps `v`.
pub fn build_cluster_graph(colex: &Colex2) -> ClusterGraph {
    ClusterGraph {
        nverts: colex.vertex_count(),
        face_members: colex.faces().iter().map(|f| f.verts.clone()).collect(),
        vertex_faces: colex.vertex_faces(),
    }
}

/// The defining stabilizers: `X` on each closed vertex neighborhood, `Z` on
/// each closed face neighborhood.
pub fn cluster_stabilizers(graph: &ClusterGraph) -> Vec<PauliOp> {
    let n = graph.qubit_count();
    let mut gens = Vec::with_capacity(n);
    for v in 0..graph.u1_count() {
        let mut bits = vec![v];
        bits.extend(graph.vertex_faces(v).iter().map(|&f| graph.face_qubit(f)));
        gens.push(PauliOp {
            xbits: BitVec::from_indices(n, &bits),
            zbits: BitVec::zeros(n),
        });
    }
    for f in 0..graph.u2_count() {
        let mut bits = vec![graph.face_qubit(f)];
        bits.extend(graph.face_members(f).iter().copied());
        gens.push(PauliOp {
            xbits: BitVec::zeros(n),
            zbits: BitVec::from_indices(n, &bits),
        });
    }
    gens
}

/// Builds the cluster state by solving the stabilizer conditions over GF(2):
/// the `Z` conditions pin the support to the span of the `X` generators, and
/// every member carries amplitude one.
pub fn cluster_state<T: Real>(graph: &ClusterGraph) -> Result<StateVector<T>> {
    let n = graph.qubit_count();
    if n > DENSE_QUBIT_CAP {
        return Err(Error::CapExceeded {
            what: "cluster qubit count",
            value: n,
            cap: DENSE_QUBIT_CAP,
        });
    }
    let gens = cluster_stabilizers(graph);
    let x_rows: Vec<BitVec> = gens
        .iter()
        .filter(|g| !g.xbits.is_zero())
        .map(|g| g.xbits.clone())
        .collect();
    let span = Span::from_rows(n, &x_rows);
    if span.rank() != graph.u1_count() {
        return Err(Error::InvalidLattice(
            "cluster conditions are inconsistent".into(),
        ));
    }
    // Z conditions must annihilate the whole support; the all-zero seed
    // satisfies them, and commutation carries that across the span.
    for g in &gens {
        if !g.zbits.is_zero() {
            for row in span.basis() {
                if g.zbits.dot(row) {
                    return Err(Error::InvalidLattice(
                        "cluster conditions are inconsistent".into(),
                    ));
                }
            }
        }
    }
    let mut state = StateVector::zeros(n)?;
    let one = Complex::new(T::one(), T::zero());
    span.for_each(|member| {
        let idx = member.to_mask().expect("dense cap keeps n <= 64") as usize;
        state.amplitudes_mut()[idx] = one;
    });
    Ok(state)
}

/// The closed-form double sum: for every vertex subset, amplitude one on the
/// basis state pairing it with its face boundary. Kept independent of the
/// stabilizer construction so the two can be compared.
pub fn closed_form_cluster_state<T: Real>(graph: &ClusterGraph) -> Result<StateVector<T>> {
    let n = graph.qubit_count();
    let nv = graph.u1_count();
    if n > DENSE_QUBIT_CAP {
        return Err(Error::CapExceeded {
            what: "cluster qubit count",
            value: n,
            cap: DENSE_QUBIT_CAP,
        });
    }
    let face_masks: Vec<u64> = (0..graph.u2_count())
        .map(|f| {
            graph
                .face_members(f)
                .iter()
                .fold(0u64, |m, &v| m | (1u64 << v))
        })
        .collect();
    let mut state = StateVector::zeros(n)?;
    let one = Complex::new(T::one(), T::zero());
    for gamma in 0u64..(1u64 << nv) {
        let mut x = 0u64;
        for (f, &mask) in face_masks.iter().enumerate() {
            if (gamma & mask).count_ones() % 2 == 1 {
                x |= 1u64 << f;
            }
        }
        let idx = (gamma | (x << nv)) as usize;
        state.amplitudes_mut()[idx] = one;
    }
    Ok(state)
}

/// Projects the face qubits onto the outcomes `x` and returns the
/// un-normalized vertex-register state. With all outcomes zero this is the
/// code state of the lattice.
pub fn project_faces<T: Real>(
    state: &StateVector<T>,
    x: &[bool],
    graph: &ClusterGraph,
) -> Result<StateVector<T>> {
    if state.nqubits() != graph.qubit_count() {
        return Err(Error::LengthMismatch {
            left: state.nqubits(),
            right: graph.qubit_count(),
        });
    }
    if x.len() != graph.u2_count() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: graph.u2_count(),
        });
    }
    let nv = graph.u1_count();
    let xbits: usize = x
        .iter()
        .enumerate()
        .fold(0, |acc, (f, &b)| if b { acc | (1 << f) } else { acc });
    let offset = xbits << nv;
    let mut out = StateVector::zeros(nv)?;
    let mut any = false;
    for low in 0..(1usize << nv) {
        let a = state.amp(offset | low);
        if a.norm_sqr() != T::zero() {
            any = true;
        }
        out.amplitudes_mut()[low] = a;
    }
    if !any {
        return Err(Error::ImpossibleOutcome);
    }
    Ok(out)
}

/// Real couplings on vertex qubits and fields on face qubits, with a shared
/// inverse temperature.
#[derive(Clone, Debug)]
pub struct FieldSpec<T: Real> {
    pub beta: T,
    pub j: Vec<T>,
    pub h: Vec<T>,
}

impl<T: Real> FieldSpec<T> {
    pub fn uniform(beta: T, j: T, h: T, graph: &ClusterGraph) -> Self {
        Self {
            beta,
            j: vec![j; graph.u1_count()],
            h: vec![h; graph.u2_count()],
        }
    }

    fn check(&self, graph: &ClusterGraph) -> Result<()> {
        if self.j.len() != graph.u1_count() {
            return Err(Error::LengthMismatch {
                left: self.j.len(),
                right: graph.u1_count(),
            });
        }
        if self.h.len() != graph.u2_count() {
            return Err(Error::LengthMismatch {
                left: self.h.len(),
                right: graph.u2_count(),
            });
        }
        if !self.beta.is_finite()
            || !self.j.iter().all(|x| x.is_finite())
            || !self.h.iter().all(|x| x.is_finite())
        {
            return Err(Error::InvalidArgument("non-finite field spec".into()));
        }
        Ok(())
    }

    /// The cosh/sinh product state over the combined register.
    pub fn product_state(&self, graph: &ClusterGraph) -> ProductState<T> {
        let mut fields = Vec::with_capacity(graph.qubit_count());
        fields.extend(self.j.iter().map(|&j| self.beta * j));
        fields.extend(self.h.iter().map(|&h| self.beta * h));
        ProductState::cosh_sinh_fields(&fields)
    }
}

/// Overlap of the cluster state with the field product state, by the
/// tanh-expansion double sum: every vertex subset contributes its coupling
/// weights times the field weights of its face boundary.
pub fn field_overlap<T: Real>(graph: &ClusterGraph, fields: &FieldSpec<T>) -> Result<T> {
    fields.check(graph)?;
    let nv = graph.u1_count();
    if nv > CHAIN_CAP {
        return Err(Error::CapExceeded {
            what: "vertex count for the expansion sum",
            value: nv,
            cap: CHAIN_CAP,
        });
    }
    let mut prefactor = T::one();
    let u_v: Vec<T> = fields
        .j
        .iter()
        .map(|&j| {
            let s = fields.beta * j;
            prefactor *= s.cosh();
            s.tanh()
        })
        .collect();
    let u_f: Vec<T> = fields
        .h
        .iter()
        .map(|&h| {
            let s = fields.beta * h;
            prefactor *= s.cosh();
            s.tanh()
        })
        .collect();
    let face_masks: Vec<u64> = (0..graph.u2_count())
        .map(|f| {
            graph
                .face_members(f)
                .iter()
                .fold(0u64, |m, &v| m | (1u64 << v))
        })
        .collect();
    let sum = sum_terms(1usize << nv, &|gamma| {
        let gamma = gamma as u64;
        let mut term = T::one();
        let mut g = gamma;
        while g != 0 {
            term *= u_v[g.trailing_zeros() as usize];
            g &= g - 1;
        }
        for (f, &mask) in face_masks.iter().enumerate() {
            if (gamma & mask).count_ones() % 2 == 1 {
                term *= u_f[f];
            }
        }
        Complex::new(term, T::zero())
    });
    Ok(prefactor * sum.re)
}

/// The same overlap through the dense route: build the cluster state and
/// contract it against the product state.
pub fn field_overlap_dense<T: Real>(graph: &ClusterGraph, fields: &FieldSpec<T>) -> Result<T> {
    fields.check(graph)?;
    let state = cluster_state::<T>(graph)?;
    let phi = fields.product_state(graph);
    Ok(overlap(&state, &phi)?.re)
}

/// Checks `Z(b, J, h) = 2^N O(b, J, h)` on a bordered lattice: couplings map
/// to triangles through the vertex bijection and fields to sites through the
/// face bijection.
pub fn verify_field_identity<T: Real>(
    colex: &Colex2,
    dual: &DualTriangulation,
    fields: &FieldSpec<T>,
) -> Result<IdentityCheck<T>> {
    if colex.is_closed() {
        return Err(Error::HomologyObstruction);
    }
    if dual.triangle_count() != colex.vertex_count()
        || dual.site_count() != colex.face_count()
    {
        return Err(Error::InvalidArgument(
            "dual triangulation does not match the lattice".into(),
        ));
    }
    let graph = build_cluster_graph(colex);
    fields.check(&graph)?;
    let j: Vec<Complex<T>> = (0..dual.triangle_count())
        .map(|t| Complex::new(fields.j[dual.triangle_to_vertex(t)], T::zero()))
        .collect();
    let h: Vec<Complex<T>> = (0..dual.site_count())
        .map(|s| Complex::new(fields.h[dual.site_to_face(s)], T::zero()))
        .collect();
    let couplings = CouplingSet::new(fields.beta, j, h);
    let partition = partition_exact(dual, &couplings)?;
    let o = field_overlap(&graph, fields)?;
    let scale = T::from_count(1usize << dual.site_count());
    Ok(IdentityCheck::new(
        partition,
        Complex::new(o * scale, T::zero()),
    ))
}
