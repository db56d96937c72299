//! Binary symplectic Pauli algebra, string-nets and the color boundary map.
//!
//! Operators are pairs of bit vectors over the lattice qubits; all stabilizer
//! elements in scope are products of pure X or pure Z monomials with +1
//! phase, so commutation reduces to the symplectic form and no phase
//! bookkeeping is carried.
//!
//! A string-net is a vertex subset. Its color boundary collects the faces
//! meeting it an odd number of times; nets with empty boundary are closed,
//! and nets spanned by complete-face vertex sets are boundaries. The gap
//! between the two on closed surfaces measures the homology of the lattice
//! and, through the stabilizer rank, the number of encoded qubits.

use crate::colex::Colex2;
use crate::gf2::{BitVec, LinearSystem, Span};
use crate::{Error, Result, SPAN_RANK_CAP};

/// Pauli operator in binary symplectic form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliOp {
    pub xbits: BitVec,
    pub zbits: BitVec,
}

impl PauliOp {
    pub fn identity(n: usize) -> Self {
        Self {
            xbits: BitVec::zeros(n),
            zbits: BitVec::zeros(n),
        }
    }

    pub fn len(&self) -> usize {
        self.xbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn weight(&self) -> usize {
        let mut support = self.xbits.clone();
        support.xor_assign(&self.zbits);
        // Sites where both act still count once.
        let mut both = 0;
        for i in self.xbits.ones() {
            if self.zbits.get(i) {
                both += 1;
            }
        }
        support.count_ones() + both
    }

    /// Concatenated `[x|z]` vector, the row format used for rank counts.
    pub fn symplectic_row(&self) -> BitVec {
        let n = self.len();
        let mut row = BitVec::zeros(2 * n);
        for i in self.xbits.ones() {
            row.set(i, true);
        }
        for i in self.zbits.ones() {
            row.set(n + i, true);
        }
        row
    }
}

/// String-net: a formal vertex subset with binary coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StringNet(pub BitVec);

impl StringNet {
    pub fn empty(nverts: usize) -> Self {
        Self(BitVec::zeros(nverts))
    }

    pub fn from_vertices(nverts: usize, verts: &[usize]) -> Self {
        Self(BitVec::from_indices(nverts, verts))
    }

    pub fn weight(&self) -> usize {
        self.0.count_ones()
    }
}

/// Binary chain over faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceChain(pub BitVec);

impl FaceChain {
    pub fn empty(nfaces: usize) -> Self {
        Self(BitVec::zeros(nfaces))
    }

    pub fn from_faces(nfaces: usize, faces: &[usize]) -> Self {
        Self(BitVec::from_indices(nfaces, faces))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceKind {
    X,
    Z,
}

/// Role of a stabilizer generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilizerRole {
    /// X-type operator of a complete face.
    FaceX(usize),
    /// Z-type operator of a complete face.
    FaceZ(usize),
    /// Z-type operator of a partial face, acting on its kept vertices.
    PartialZ(usize),
}

/// Stabilizer generators of a lattice with their roles.
pub struct StabilizerSet {
    pub generators: Vec<(StabilizerRole, PauliOp)>,
    rank: usize,
}

impl StabilizerSet {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// GF(2) rank of the generator set in symplectic form.
    pub fn rank(&self) -> usize {
        self.rank
    }
}

/// Vertex indicator of a face as a string-net (kept vertices for partial
/// faces).
pub fn face_net(lattice: &Colex2, face: usize) -> StringNet {
    StringNet::from_vertices(lattice.vertex_count(), &lattice.faces()[face].verts)
}

/// The X- or Z-type operator of a face, supported on its (kept) vertices.
///
/// X operators exist only on complete faces; a bordered lattice keeps only
/// the Z role of its partial faces.
pub fn face_operator(lattice: &Colex2, face: usize, kind: FaceKind) -> Result<PauliOp> {
    let f = lattice
        .faces()
        .get(face)
        .ok_or_else(|| Error::InvalidArgument(format!("face {face} out of range")))?;
    if f.partial && kind == FaceKind::X {
        return Err(Error::PartialFaceRole { face });
    }
    let bits = BitVec::from_indices(lattice.vertex_count(), &f.verts);
    let n = lattice.vertex_count();
    Ok(match kind {
        FaceKind::X => PauliOp {
            xbits: bits,
            zbits: BitVec::zeros(n),
        },
        FaceKind::Z => PauliOp {
            xbits: BitVec::zeros(n),
            zbits: bits,
        },
    })
}

/// Symplectic commutation test: `<a.x, b.z> + <a.z, b.x> = 0` over GF(2).
pub fn commutes(a: &PauliOp, b: &PauliOp) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(!(a.xbits.dot(&b.zbits) ^ a.zbits.dot(&b.xbits)))
}

/// Color boundary of a net: faces sharing an odd number of vertices with it.
pub fn boundary(net: &StringNet, lattice: &Colex2) -> Result<FaceChain> {
    if net.0.len() != lattice.vertex_count() {
        return Err(Error::LengthMismatch {
            left: net.0.len(),
            right: lattice.vertex_count(),
        });
    }
    let mut chain = BitVec::zeros(lattice.face_count());
    for (fid, face) in lattice.faces().iter().enumerate() {
        let parity = face.verts.iter().filter(|&&v| net.0.get(v)).count() % 2;
        if parity == 1 {
            chain.set(fid, true);
        }
    }
    Ok(FaceChain(chain))
}

/// A net is closed when its boundary vanishes.
pub fn is_closed(net: &StringNet, lattice: &Colex2) -> Result<bool> {
    Ok(boundary(net, lattice)?.is_zero())
}

/// Boundary test: does a face collection `S` with `net = boundary(S)` exist?
///
/// Only complete faces generate boundaries. On success the witness lists one
/// such collection.
pub fn is_boundary(net: &StringNet, lattice: &Colex2) -> Result<(bool, Option<FaceChain>)> {
    if net.0.len() != lattice.vertex_count() {
        return Err(Error::LengthMismatch {
            left: net.0.len(),
            right: lattice.vertex_count(),
        });
    }
    let complete = lattice.complete_face_ids();
    let rows: Vec<BitVec> = complete
        .iter()
        .map(|&f| face_net(lattice, f).0)
        .collect();
    let span = Span::from_rows(lattice.vertex_count(), &rows);
    match span.contains(&net.0) {
        Some(combo) => {
            let mut witness = BitVec::zeros(lattice.face_count());
            for i in combo.ones() {
                witness.set(complete[i], true);
            }
            Ok((true, Some(FaceChain(witness))))
        }
        None => Ok((false, None)),
    }
}

/// Builds the stabilizer set: X and Z operators for complete faces, Z
/// operators for partial faces, with mutual commutation verified.
pub fn stabilizer_set(lattice: &Colex2) -> Result<StabilizerSet> {
    let mut generators = Vec::new();
    for (fid, face) in lattice.faces().iter().enumerate() {
        if face.partial {
            generators.push((
                StabilizerRole::PartialZ(fid),
                face_operator(lattice, fid, FaceKind::Z)?,
            ));
        } else {
            generators.push((
                StabilizerRole::FaceX(fid),
                face_operator(lattice, fid, FaceKind::X)?,
            ));
            generators.push((
                StabilizerRole::FaceZ(fid),
                face_operator(lattice, fid, FaceKind::Z)?,
            ));
        }
    }
    for i in 0..generators.len() {
        for j in i + 1..generators.len() {
            if !commutes(&generators[i].1, &generators[j].1)? {
                return Err(Error::CommutationFailure(i, j));
            }
        }
    }
    let rows: Vec<BitVec> = generators.iter().map(|(_, g)| g.symplectic_row()).collect();
    let rank = Span::from_rows(2 * lattice.vertex_count(), &rows).rank();
    Ok(StabilizerSet { generators, rank })
}

/// Number of encoded qubits: `n - rank` of the stabilizer set. On closed
/// colexes this equals `4 - 2*chi`.
pub fn encoded_qubits(lattice: &Colex2) -> Result<usize> {
    let set = stabilizer_set(lattice)?;
    Ok(lattice.vertex_count() - set.rank())
}

/// The group of boundary string-nets: the GF(2) span of complete-face vertex
/// sets. Iterating the span walks all `2^rank` boundary nets.
pub struct BoundaryGroup {
    complete_faces: Vec<usize>,
    span: Span,
}

impl BoundaryGroup {
    pub fn rank(&self) -> usize {
        self.span.rank()
    }

    pub fn size(&self) -> u64 {
        1u64 << self.rank()
    }

    pub fn nverts(&self) -> usize {
        self.span.ncols()
    }

    /// Visits every boundary net once, starting from the empty net. The
    /// order is fixed by the deterministic basis, so repeated walks agree.
    pub fn for_each(&self, mut f: impl FnMut(&BitVec)) {
        self.span.for_each(|v| f(v));
    }

    pub fn members(&self) -> Vec<StringNet> {
        self.span.members().into_iter().map(StringNet).collect()
    }

    /// Membership with a face-collection witness.
    pub fn contains(&self, net: &StringNet) -> Option<Vec<usize>> {
        self.span.contains(&net.0).map(|combo| {
            combo.ones().map(|i| self.complete_faces[i]).collect()
        })
    }
}

/// Builds the boundary group, enforcing the enumeration cap.
pub fn boundary_group(lattice: &Colex2) -> Result<BoundaryGroup> {
    let complete_faces = lattice.complete_face_ids();
    let rows: Vec<BitVec> = complete_faces
        .iter()
        .map(|&f| face_net(lattice, f).0)
        .collect();
    let span = Span::from_rows(lattice.vertex_count(), &rows);
    if span.rank() > SPAN_RANK_CAP {
        return Err(Error::CapExceeded {
            what: "boundary group rank",
            value: span.rank(),
            cap: SPAN_RANK_CAP,
        });
    }
    Ok(BoundaryGroup {
        complete_faces,
        span,
    })
}

/// Basis of the closed nets: the kernel of the boundary map over all
/// retained faces.
pub fn closed_net_basis(lattice: &Colex2) -> Vec<StringNet> {
    let equations: Vec<(BitVec, bool)> = lattice
        .faces()
        .iter()
        .map(|f| {
            (
                BitVec::from_indices(lattice.vertex_count(), &f.verts),
                false,
            )
        })
        .collect();
    let sys = LinearSystem::new(lattice.vertex_count(), &equations);
    sys.nullspace_basis().into_iter().map(StringNet).collect()
}

/// One net with the prescribed boundary, if the coset is non-empty.
///
/// Solves `boundary(net) = x` over all retained faces; adding closed nets
/// walks the full coset.
pub fn coset_representative(lattice: &Colex2, x: &FaceChain) -> Result<Option<StringNet>> {
    if x.0.len() != lattice.face_count() {
        return Err(Error::LengthMismatch {
            left: x.0.len(),
            right: lattice.face_count(),
        });
    }
    let equations: Vec<(BitVec, bool)> = lattice
        .faces()
        .iter()
        .enumerate()
        .map(|(fid, f)| {
            (
                BitVec::from_indices(lattice.vertex_count(), &f.verts),
                x.0.get(fid),
            )
        })
        .collect();
    let sys = LinearSystem::new(lattice.vertex_count(), &equations);
    Ok(sys.particular_solution().map(StringNet))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colex::{
        build_48_torus, build_bordered, build_hex_torus, hexagon_patch,
        single_triangle_patch,
    };

    #[test]
    fn face_operator_weights() {
        let colex = build_hex_torus(3, 3).unwrap();
        let x = face_operator(&colex, 0, FaceKind::X).unwrap();
        assert_eq!(x.weight(), 6);
        assert!(x.zbits.is_zero());

        let patch = build_bordered(&hexagon_patch()).unwrap();
        let partial = patch.faces().iter().position(|f| f.partial).unwrap();
        let zz = face_operator(&patch, partial, FaceKind::Z).unwrap();
        assert_eq!(zz.weight(), 2);
        assert!(matches!(
            face_operator(&patch, partial, FaceKind::X),
            Err(Error::PartialFaceRole { .. })
        ));
    }

    #[test]
    fn same_face_x_and_z_commute() {
        let colex = build_hex_torus(1, 3).unwrap();
        let x = face_operator(&colex, 0, FaceKind::X).unwrap();
        let z = face_operator(&colex, 0, FaceKind::Z).unwrap();
        assert!(commutes(&x, &z).unwrap());
        assert!(commutes(&PauliOp::identity(6), &x).unwrap());
    }

    #[test]
    fn open_string_anticommutes_at_endpoint() {
        // A single edge of one color is an open string: its X operator must
        // anticommute with the Z operators of the same-color faces at its
        // two endpoints.
        let colex = build_hex_torus(3, 3).unwrap();
        let e = &colex.edges()[0];
        let net = StringNet::from_vertices(colex.vertex_count(), &[e.a, e.b]);
        assert!(!is_closed(&net, &colex).unwrap());
        let chain = boundary(&net, &colex).unwrap();
        let endpoint_faces: Vec<usize> = chain.0.ones().collect();
        assert_eq!(endpoint_faces.len(), 2);
        let x_gamma = PauliOp {
            xbits: net.0.clone(),
            zbits: BitVec::zeros(colex.vertex_count()),
        };
        for f in endpoint_faces {
            assert_eq!(colex.faces()[f].color, e.color);
            let z_f = face_operator(&colex, f, FaceKind::Z).unwrap();
            assert!(!commutes(&x_gamma, &z_f).unwrap());
        }
    }

    #[test]
    fn face_nets_are_closed() {
        let colex = build_48_torus(2, 2).unwrap();
        for fid in 0..colex.face_count() {
            let net = face_net(&colex, fid);
            assert!(is_closed(&net, &colex).unwrap());
        }
        assert!(is_closed(&StringNet::empty(colex.vertex_count()), &colex).unwrap());
    }

    #[test]
    fn single_vertex_boundary_hits_three_faces() {
        let colex = build_hex_torus(3, 3).unwrap();
        let net = StringNet::from_vertices(colex.vertex_count(), &[7]);
        let chain = boundary(&net, &colex).unwrap();
        assert_eq!(chain.0.count_ones(), 3);
        let colors: Vec<_> = chain.0.ones().map(|f| colex.faces()[f].color).collect();
        let mut sorted = colors.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 3);
    }

    #[test]
    fn boundary_witness_rebuilds_net() {
        let colex = build_hex_torus(3, 3).unwrap();
        let mut sum = face_net(&colex, 0).0;
        sum.xor_assign(&face_net(&colex, 1).0);
        let net = StringNet(sum.clone());
        let (ok, witness) = is_boundary(&net, &colex).unwrap();
        assert!(ok);
        let witness = witness.unwrap();
        let mut rebuilt = BitVec::zeros(colex.vertex_count());
        for f in witness.0.ones() {
            rebuilt.xor_assign(&face_net(&colex, f).0);
        }
        assert_eq!(rebuilt, sum);
    }

    #[test]
    fn torus_has_closed_non_boundary_nets() {
        let colex = build_hex_torus(3, 3).unwrap();
        let closed = closed_net_basis(&colex);
        let group = boundary_group(&colex).unwrap();
        // Boundary rank is |F| - 2; the homology gap is 2*h1 = 4.
        assert_eq!(group.rank(), colex.face_count() - 2);
        assert_eq!(closed.len() - group.rank(), 4);
        let nontrivial = closed
            .iter()
            .find(|net| group.contains(net).is_none())
            .expect("some closed net is not a boundary");
        assert!(is_closed(nontrivial, &colex).unwrap());
        let (ok, _) = is_boundary(nontrivial, &colex).unwrap();
        assert!(!ok);
    }

    #[test]
    fn hexagon_patch_all_closed_nets_are_boundaries() {
        let patch = build_bordered(&hexagon_patch()).unwrap();
        let all_six = StringNet::from_vertices(6, &[0, 1, 2, 3, 4, 5]);
        let (ok, witness) = is_boundary(&all_six, &patch).unwrap();
        assert!(ok);
        let w = witness.unwrap();
        assert_eq!(w.0.count_ones(), 1);
        assert!(!patch.faces()[w.0.first_one().unwrap()].partial);
        let group = boundary_group(&patch).unwrap();
        assert_eq!(group.rank(), 1);
        assert_eq!(group.size(), 2);
        assert_eq!(closed_net_basis(&patch).len(), 1);
    }

    #[test]
    fn stabilizer_ranks() {
        let nine = build_hex_torus(3, 3).unwrap();
        let set = stabilizer_set(&nine).unwrap();
        assert_eq!(set.len(), 18);
        assert_eq!(set.rank(), 14);

        let patch = build_bordered(&hexagon_patch()).unwrap();
        let set = stabilizer_set(&patch).unwrap();
        assert_eq!(set.len(), 8);
        assert_eq!(set.rank(), 6);

        let tri = build_bordered(&single_triangle_patch()).unwrap();
        let set = stabilizer_set(&tri).unwrap();
        assert_eq!(set.len(), 3);
        assert_eq!(set.rank(), 1);
        assert!(set
            .generators
            .iter()
            .all(|(_, g)| g.weight() == 1 && g.xbits.is_zero()));
    }

    #[test]
    fn encoded_qubit_counts() {
        for colex in [
            build_hex_torus(1, 3).unwrap(),
            build_hex_torus(3, 3).unwrap(),
            build_48_torus(2, 2).unwrap(),
        ] {
            let k = encoded_qubits(&colex).unwrap();
            let chi = colex.euler_characteristic();
            assert_eq!(k as i64, 4 - 2 * chi);
            assert_eq!(k, 4);
        }
        let patch = build_bordered(&hexagon_patch()).unwrap();
        assert_eq!(encoded_qubits(&patch).unwrap(), 0);
    }

    #[test]
    fn boundary_group_on_nine_face_torus() {
        let colex = build_hex_torus(3, 3).unwrap();
        let group = boundary_group(&colex).unwrap();
        assert_eq!(group.size(), 1 << 7);
        let mut count = 0u64;
        group.for_each(|net| {
            let sn = StringNet(net.clone());
            assert!(is_closed(&sn, &colex).unwrap());
            count += 1;
        });
        assert_eq!(count, 128);
    }

    #[test]
    fn coset_solver_round_trip() {
        let patch = build_bordered(&hexagon_patch()).unwrap();
        // Prescribe the boundary of a single vertex and solve back.
        let net = StringNet::from_vertices(patch.vertex_count(), &[2]);
        let x = boundary(&net, &patch).unwrap();
        let rep = coset_representative(&patch, &x).unwrap().unwrap();
        assert_eq!(boundary(&rep, &patch).unwrap(), x);
    }

    #[test]
    fn coset_can_be_empty() {
        // A single complete face on a closed torus is unreachable: the total
        // parity over each color class obstructs it.
        let colex = build_hex_torus(3, 3).unwrap();
        let x = FaceChain::from_faces(colex.face_count(), &[0]);
        assert!(coset_representative(&colex, &x).unwrap().is_none());
    }

    #[test]
    fn boundary_is_linear() {
        let colex = build_48_torus(2, 2).unwrap();
        let a = StringNet::from_vertices(colex.vertex_count(), &[0, 3, 5]);
        let b = StringNet::from_vertices(colex.vertex_count(), &[1, 3, 8, 11]);
        let mut sum = a.0.clone();
        sum.xor_assign(&b.0);
        let mut chain_sum = boundary(&a, &colex).unwrap().0;
        chain_sum.xor_assign(&boundary(&b, &colex).unwrap().0);
        assert_eq!(boundary(&StringNet(sum), &colex).unwrap().0, chain_sum);
    }
}
