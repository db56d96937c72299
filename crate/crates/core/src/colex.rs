//! 2-colexes, their dual triangulations, and bordered patches.
//!
//! A 2-colex is a trivalent lattice with 3-colorable faces embedded in a
//! surface. Its dual has triangular faces and 3-colorable sites. Bordered
//! colexes arise from finite dual patches: vertices are kept exactly where
//! the patch has triangles, faces keeping all their vertices stay complete,
//! and faces keeping only a subset survive with a reduced vertex set.
//!
//! Builders assign dense 0-based indices in construction order; the JSON
//! serialization uses those indices, so identical inputs produce identical
//! files.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Face and edge colors. The `r < g < b` order is fixed and used whenever a
/// canonical ordering is needed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    Red,
    Green,
    Blue,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::Red, Color::Green, Color::Blue];

    pub fn code(self) -> &'static str {
        match self {
            Color::Red => "r",
            Color::Green => "g",
            Color::Blue => "b",
        }
    }

    pub fn from_code(s: &str) -> Result<Color> {
        match s {
            "r" => Ok(Color::Red),
            "g" => Ok(Color::Green),
            "b" => Ok(Color::Blue),
            other => Err(Error::InvalidArgument(format!("unknown color {other:?}"))),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Color::Red => 0,
            Color::Green => 1,
            Color::Blue => 2,
        }
    }

    /// The color distinct from both arguments. Panics if they coincide.
    pub fn third(a: Color, b: Color) -> Color {
        assert_ne!(a, b, "no third color for a repeated pair");
        Color::ALL[3 - a.index() - b.index()]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub color: Color,
}

/// A face of a colex. For complete faces `verts` is the cyclic boundary
/// order; for partial faces it lists the kept vertices in path order along
/// the original boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub verts: Vec<usize>,
    pub color: Color,
    pub partial: bool,
}

/// A 2-colex, closed or bordered. Bordered instances carry partial faces.
#[derive(Clone, Debug)]
pub struct Colex2 {
    nverts: usize,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    closed: bool,
}

impl Colex2 {
    /// Assembles a colex from raw parts without validation.
    pub fn from_parts(nverts: usize, edges: Vec<Edge>, faces: Vec<Face>, closed: bool) -> Self {
        Self {
            nverts,
            edges,
            faces,
            closed,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.nverts
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn complete_face_ids(&self) -> Vec<usize> {
        self.faces
            .iter()
            .enumerate()
            .filter_map(|(i, f)| (!f.partial).then_some(i))
            .collect()
    }

    /// Face ids incident to each vertex, ascending.
    pub fn vertex_faces(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.nverts];
        for (fid, face) in self.faces.iter().enumerate() {
            for &v in &face.verts {
                out[v].push(fid);
            }
        }
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.nverts as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }
}

/// The lattice dual to a colex: one site per face, one triangle per vertex.
///
/// Triangles store their site triple ordered by color (red, green, blue).
/// `site_to_face` and `triangle_to_vertex` record the duality bijections.
#[derive(Clone, Debug)]
pub struct DualTriangulation {
    site_colors: Vec<Color>,
    triangles: Vec<[usize; 3]>,
    bordered: bool,
    site_to_face: Vec<usize>,
    triangle_to_vertex: Vec<usize>,
}

impl DualTriangulation {
    /// Builds a triangulation from site colors and triangles. Each triangle
    /// must touch one site of each color; triples are re-ordered by color.
    pub fn from_parts(
        site_colors: Vec<Color>,
        triangles: Vec<[usize; 3]>,
        bordered: bool,
    ) -> Result<Self> {
        let n = site_colors.len();
        let mut ordered = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            let mut slot = [usize::MAX; 3];
            for &s in tri {
                if s >= n {
                    return Err(Error::InvalidLattice(format!(
                        "triangle {t} references site {s} out of range"
                    )));
                }
                let c = site_colors[s].index();
                if slot[c] != usize::MAX {
                    return Err(Error::InvalidLattice(format!(
                        "triangle {t} has two sites of color {}",
                        site_colors[s].code()
                    )));
                }
                slot[c] = s;
            }
            if slot.contains(&usize::MAX) {
                return Err(Error::InvalidLattice(format!(
                    "triangle {t} does not touch all three colors"
                )));
            }
            ordered.push(slot);
        }
        let nt = ordered.len();
        Ok(Self {
            site_colors,
            triangles: ordered,
            bordered,
            site_to_face: (0..n).collect(),
            triangle_to_vertex: (0..nt).collect(),
        })
    }

    pub fn site_count(&self) -> usize {
        self.site_colors.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn site_color(&self, s: usize) -> Color {
        self.site_colors[s]
    }

    pub fn site_colors(&self) -> &[Color] {
        &self.site_colors
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn is_bordered(&self) -> bool {
        self.bordered
    }

    pub fn site_to_face(&self, s: usize) -> usize {
        self.site_to_face[s]
    }

    pub fn triangle_to_vertex(&self, t: usize) -> usize {
        self.triangle_to_vertex[t]
    }

    /// Triangle ids incident to each site, ascending.
    pub fn site_triangles(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.site_count()];
        for (t, tri) in self.triangles.iter().enumerate() {
            for &s in tri {
                out[s].push(t);
            }
        }
        out
    }

    /// Distinct site pairs that appear together in a triangle, sorted.
    pub fn dual_edges(&self) -> Vec<(usize, usize)> {
        let mut set = std::collections::BTreeSet::new();
        for tri in &self.triangles {
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let (a, b) = (tri[i].min(tri[j]), tri[i].max(tri[j]));
                set.insert((a, b));
            }
        }
        set.into_iter().collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Validation outcome: counts, topology, and one entry per invariant checked.
#[derive(Clone, Debug, Serialize)]
pub struct LatticeReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_characteristic: i64,
    pub betti1: Option<usize>,
    pub checks: Vec<CheckResult>,
}

impl LatticeReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    fn failure_summary(&self) -> String {
        self.failures()
            .iter()
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

/// Hexagonal 2-colex on a torus.
///
/// Faces live on a rhombic `rows x cols` fundamental domain whose translation
/// vectors are `rows` steps along one triangular axis combined with a shear
/// and `cols` steps along the other. With this identification a proper
/// 3-face-coloring exists exactly when `cols` is a multiple of 3, which
/// admits the minimal 3-face instance (`1 x 3`) and the 9-face instance
/// (`3 x 3`). The constructed coloring is verified before returning.
pub fn build_hex_torus(rows: usize, cols: usize) -> Result<Colex2> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument(
            "rows and cols must be positive".into(),
        ));
    }
    if !cols.is_multiple_of(3) {
        return Err(Error::NotThreeColorable {
            rows,
            cols,
            constraint: "hexagonal torus faces 3-color exactly when cols is a multiple of 3"
                .into(),
        });
    }
    let (r, c) = (rows as i64, cols as i64);
    let cell = |p: i64, q: i64| -> usize {
        let i = p.rem_euclid(r);
        let j = (p + q).rem_euclid(c);
        (i * c + j) as usize
    };
    let va = |p: i64, q: i64| 2 * cell(p, q);
    let vb = |p: i64, q: i64| 2 * cell(p, q) + 1;

    let mut faces = Vec::with_capacity(rows * cols);
    for i in 0..r {
        for j in 0..c {
            let (p, q) = (i, j - i);
            // Corners of the hexagon in cyclic order, alternating the two
            // vertex sublattices.
            let verts = vec![
                va(p, q),
                vb(p, q),
                va(p - 1, q),
                vb(p - 1, q - 1),
                va(p - 1, q - 1),
                vb(p, q - 1),
            ];
            faces.push(Face {
                verts,
                color: Color::ALL[(j % 3) as usize],
                partial: false,
            });
        }
    }
    assemble_closed(2 * rows * cols, faces).map_err(|e| color_failure(rows, cols, e))
}

/// Square-octagon (4-8) 2-colex on a torus.
///
/// One square and one octagon per cell on a `rows x cols` grid, identified
/// periodically. Squares take one color and octagons checkerboard the other
/// two, which works exactly when both dimensions are even.
pub fn build_48_torus(rows: usize, cols: usize) -> Result<Colex2> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument(
            "rows and cols must be positive".into(),
        ));
    }
    if !rows.is_multiple_of(2) || !cols.is_multiple_of(2) {
        return Err(Error::NotThreeColorable {
            rows,
            cols,
            constraint: "square-octagon torus faces 3-color exactly when rows and cols are even"
                .into(),
        });
    }
    let (r, c) = (rows as i64, cols as i64);
    let cell = |m: i64, n: i64| -> usize { (m.rem_euclid(r) * c + n.rem_euclid(c)) as usize };
    let vn = |m: i64, n: i64| 4 * cell(m, n);
    let ve = |m: i64, n: i64| 4 * cell(m, n) + 1;
    let vs = |m: i64, n: i64| 4 * cell(m, n) + 2;
    let vw = |m: i64, n: i64| 4 * cell(m, n) + 3;

    let mut faces = Vec::with_capacity(2 * rows * cols);
    for m in 0..r {
        for n in 0..c {
            faces.push(Face {
                verts: vec![vn(m, n), ve(m, n), vs(m, n), vw(m, n)],
                color: Color::Blue,
                partial: false,
            });
        }
    }
    for m in 0..r {
        for n in 0..c {
            let verts = vec![
                vs(m + 1, n + 1),
                vw(m + 1, n + 1),
                ve(m, n + 1),
                vs(m, n + 1),
                vn(m, n),
                ve(m, n),
                vw(m + 1, n),
                vn(m + 1, n),
            ];
            let color = if (m + n) % 2 == 0 {
                Color::Red
            } else {
                Color::Green
            };
            faces.push(Face {
                verts,
                color,
                partial: false,
            });
        }
    }
    assemble_closed(4 * rows * cols, faces).map_err(|e| color_failure(rows, cols, e))
}

fn color_failure(rows: usize, cols: usize, e: Error) -> Error {
    match e {
        Error::InvalidLattice(detail) => Error::NotThreeColorable {
            rows,
            cols,
            constraint: detail,
        },
        other => other,
    }
}

/// Derives edges from face boundaries and checks the closed-colex incidence.
fn assemble_closed(nverts: usize, faces: Vec<Face>) -> Result<Colex2> {
    let mut border: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (fid, face) in faces.iter().enumerate() {
        let k = face.verts.len();
        for t in 0..k {
            let (u, v) = (face.verts[t], face.verts[(t + 1) % k]);
            if u == v {
                return Err(Error::InvalidLattice(format!(
                    "face {fid} repeats vertex {u} consecutively"
                )));
            }
            border.entry((u.min(v), u.max(v))).or_default().push(fid);
        }
    }
    let mut edges = Vec::with_capacity(border.len());
    for ((a, b), fids) in border {
        if fids.len() != 2 {
            return Err(Error::InvalidLattice(format!(
                "edge ({a},{b}) borders {} faces",
                fids.len()
            )));
        }
        let (ca, cb) = (faces[fids[0]].color, faces[fids[1]].color);
        if ca == cb {
            return Err(Error::InvalidLattice(format!(
                "faces {} and {} share edge ({a},{b}) but both are {}",
                fids[0],
                fids[1],
                ca.code()
            )));
        }
        edges.push(Edge {
            a,
            b,
            color: Color::third(ca, cb),
        });
    }
    let colex = Colex2 {
        nverts,
        edges,
        faces,
        closed: true,
    };
    let report = validate(&colex);
    if !report.all_pass() {
        return Err(Error::InvalidLattice(report.failure_summary()));
    }
    Ok(colex)
}

/// Dual triangulation of a colex: sites are faces with their colors,
/// triangles are vertices with their three incident faces.
///
/// Works for closed and bordered colexes alike; the dual of a hexagonal
/// torus is a triangular lattice and the dual of a 4-8 torus a Union Jack
/// lattice.
pub fn build_dual(colex: &Colex2) -> Result<DualTriangulation> {
    let report = validate(colex);
    if !report.all_pass() {
        return Err(Error::InvalidLattice(report.failure_summary()));
    }
    let vertex_faces = colex.vertex_faces();
    let mut triangles = Vec::with_capacity(colex.vertex_count());
    for faces_at in &vertex_faces {
        let mut slot = [usize::MAX; 3];
        for &f in faces_at {
            slot[colex.faces[f].color.index()] = f;
        }
        triangles.push(slot);
    }
    Ok(DualTriangulation {
        site_colors: colex.faces.iter().map(|f| f.color).collect(),
        triangles,
        bordered: !colex.closed,
        site_to_face: (0..colex.face_count()).collect(),
        triangle_to_vertex: (0..colex.vertex_count()).collect(),
    })
}

/// Fan of triangles around one site: the orderings of its incident
/// triangles, and whether they close into a cycle.
struct SiteFan {
    ordered: Vec<usize>,
    closed: bool,
}

fn site_fan(incident: &[usize], triangles: &[[usize; 3]], site: usize) -> Result<SiteFan> {
    let k = incident.len();
    // Two triangles are fan-adjacent if they share an edge through the site.
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); k];
    for i in 0..k {
        for j in i + 1..k {
            let (ti, tj) = (&triangles[incident[i]], &triangles[incident[j]]);
            let shared = ti.iter().filter(|s| tj.contains(s)).count();
            if shared >= 2 {
                nbrs[i].push(j);
                nbrs[j].push(i);
            }
        }
    }
    if nbrs.iter().any(|n| n.len() > 2) {
        return Err(Error::InvalidLattice(format!(
            "site {site} has a triangle fan with branching"
        )));
    }

    // Components are paths or cycles. Each is ordered deterministically:
    // cycles start at the smallest triangle id and turn toward the smaller
    // neighbor; paths run from their smaller-id endpoint.
    let mut seen = vec![false; k];
    let mut components: Vec<(Vec<usize>, bool)> = Vec::new();
    for start in 0..k {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &y in &nbrs[x] {
                if !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                    stack.push(y);
                }
            }
        }
        let is_cycle = comp.iter().all(|&x| nbrs[x].len() == 2);
        let order = if is_cycle {
            let s0 = *comp.iter().min_by_key(|&&x| incident[x]).unwrap();
            let first = if incident[nbrs[s0][0]] <= incident[nbrs[s0][1]] {
                nbrs[s0][0]
            } else {
                nbrs[s0][1]
            };
            let mut order = vec![s0];
            let (mut prev, mut cur) = (s0, first);
            while cur != s0 {
                order.push(cur);
                let next = nbrs[cur].iter().copied().find(|&y| y != prev).unwrap();
                prev = cur;
                cur = next;
            }
            order
        } else {
            let mut ends: Vec<usize> = comp
                .iter()
                .copied()
                .filter(|&x| nbrs[x].len() <= 1)
                .collect();
            ends.sort_by_key(|&x| incident[x]);
            let mut order = vec![ends[0]];
            let (mut prev, mut cur) = (usize::MAX, ends[0]);
            while let Some(next) = nbrs[cur].iter().copied().find(|&y| y != prev) {
                order.push(next);
                prev = cur;
                cur = next;
            }
            order
        };
        components.push((order, is_cycle));
    }

    let closed = components.len() == 1 && components[0].1;
    let ordered = if closed {
        components[0].0.iter().map(|&x| incident[x]).collect()
    } else {
        let mut paths: Vec<Vec<usize>> = components
            .into_iter()
            .map(|(order, _)| order.iter().map(|&x| incident[x]).collect())
            .collect();
        paths.sort_by_key(|p: &Vec<usize>| *p.iter().min().unwrap());
        paths.concat()
    };
    Ok(SiteFan { ordered, closed })
}

/// Bordered colex from a finite dual patch.
///
/// Kept vertices correspond to the patch triangles. Sites whose triangle fan
/// closes become complete faces; border sites become partial faces listing
/// their kept vertices.
pub fn build_bordered(dual: &DualTriangulation) -> Result<Colex2> {
    if !dual.bordered {
        return Err(Error::ClosedInput);
    }
    if dual.triangle_count() == 0 {
        return Err(Error::DegeneratePatch("patch has no triangles".into()));
    }
    let report = validate_dual(dual);
    if !report.all_pass() {
        return Err(Error::InvalidLattice(report.failure_summary()));
    }

    let site_triangles = dual.site_triangles();
    let mut faces = Vec::with_capacity(dual.site_count());
    for (s, incident) in site_triangles.iter().enumerate() {
        let fan = site_fan(incident, &dual.triangles, s)?;
        faces.push(Face {
            verts: fan.ordered,
            color: dual.site_colors[s],
            partial: !fan.closed,
        });
    }

    // Colex edges join triangles sharing a dual edge; the edge color is the
    // one missing from the shared site pair.
    let mut edges = Vec::new();
    let nt = dual.triangle_count();
    for t1 in 0..nt {
        for t2 in t1 + 1..nt {
            let shared: Vec<usize> = dual.triangles[t1]
                .iter()
                .copied()
                .filter(|s| dual.triangles[t2].contains(s))
                .collect();
            if shared.len() == 2 {
                let color = Color::third(
                    dual.site_colors[shared[0]],
                    dual.site_colors[shared[1]],
                );
                edges.push(Edge {
                    a: t1,
                    b: t2,
                    color,
                });
            }
        }
    }

    let colex = Colex2 {
        nverts: nt,
        edges,
        faces,
        closed: false,
    };
    let report = validate(&colex);
    if !report.all_pass() {
        return Err(Error::InvalidLattice(report.failure_summary()));
    }
    Ok(colex)
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Checks every colex invariant and reports each one individually.
///
/// Failures never abort; they become report entries so callers can inspect
/// broken lattices.
pub fn validate(colex: &Colex2) -> LatticeReport {
    let mut checks = Vec::new();
    let n = colex.vertex_count();

    let indices_ok = colex
        .faces
        .iter()
        .all(|f| f.verts.iter().all(|&v| v < n))
        && colex.edges.iter().all(|e| e.a < n && e.b < n && e.a != e.b);
    checks.push(CheckResult {
        name: "index-range",
        passed: indices_ok,
        detail: if indices_ok {
            "all vertex references in range".into()
        } else {
            "vertex reference out of range or self-edge".into()
        },
    });
    if !indices_ok {
        return LatticeReport {
            vertices: n,
            edges: colex.edge_count(),
            faces: colex.face_count(),
            euler_characteristic: colex.euler_characteristic(),
            betti1: None,
            checks,
        };
    }

    let dup_in_face = colex.faces.iter().enumerate().find(|(_, f)| {
        let mut seen = std::collections::HashSet::new();
        f.verts.iter().any(|&v| !seen.insert(v))
    });
    checks.push(CheckResult {
        name: "face-distinct-vertices",
        passed: dup_in_face.is_none(),
        detail: match dup_in_face {
            None => "no face repeats a vertex".into(),
            Some((fid, _)) => format!("face {fid} repeats a vertex"),
        },
    });

    // Vertex degree from the edge list.
    let mut degree = vec![0usize; n];
    for e in &colex.edges {
        degree[e.a] += 1;
        degree[e.b] += 1;
    }
    let degree_ok = if colex.closed {
        degree.iter().all(|&d| d == 3)
    } else {
        degree.iter().all(|&d| d <= 3)
    };
    checks.push(CheckResult {
        name: "trivalence",
        passed: degree_ok,
        detail: if degree_ok {
            if colex.closed {
                "every vertex has degree 3".into()
            } else {
                "every vertex has degree at most 3".into()
            }
        } else {
            let (v, d) = degree
                .iter()
                .enumerate()
                .find(|(_, &d)| if colex.closed { d != 3 } else { d > 3 })
                .map(|(v, &d)| (v, d))
                .unwrap();
            format!("vertex {v} has degree {d}")
        },
    });

    // Edges derived from face boundaries: cyclic pairs for complete faces,
    // path pairs for partial ones.
    let mut derived: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (fid, face) in colex.faces.iter().enumerate() {
        let k = face.verts.len();
        let pairs = if face.partial { k.saturating_sub(1) } else { k };
        for t in 0..pairs {
            let (u, v) = (face.verts[t], face.verts[(t + 1) % k]);
            if u != v {
                derived.entry((u.min(v), u.max(v))).or_default().push(fid);
            }
        }
    }
    let stored: BTreeMap<(usize, usize), Color> = colex
        .edges
        .iter()
        .map(|e| ((e.a.min(e.b), e.a.max(e.b)), e.color))
        .collect();
    let sets_match = derived.len() == stored.len()
        && derived.keys().all(|k| stored.contains_key(k))
        && stored.len() == colex.edges.len();
    let two_faces = derived.values().all(|f| f.len() == 2);
    checks.push(CheckResult {
        name: "edge-face-incidence",
        passed: sets_match && two_faces,
        detail: if sets_match && two_faces {
            "every edge borders exactly two faces and matches the face boundaries".into()
        } else if !two_faces {
            let ((a, b), fs) = derived.iter().find(|(_, f)| f.len() != 2).unwrap();
            format!("edge ({a},{b}) borders {} faces", fs.len())
        } else {
            "stored edges disagree with face boundaries".into()
        },
    });

    let mut coloring_ok = true;
    let mut coloring_detail = String::from("no two faces sharing an edge have the same color");
    let mut edge_color_ok = true;
    let mut edge_color_detail =
        String::from("every edge carries the color missing from its two faces");
    for ((a, b), fids) in &derived {
        if fids.len() != 2 {
            continue;
        }
        let (ca, cb) = (colex.faces[fids[0]].color, colex.faces[fids[1]].color);
        if ca == cb {
            if coloring_ok {
                coloring_detail =
                    format!("faces {} and {} share edge ({a},{b}); both {}", fids[0], fids[1], ca.code());
            }
            coloring_ok = false;
            continue;
        }
        if let Some(&stored_color) = stored.get(&(*a, *b)) {
            if stored_color != Color::third(ca, cb) {
                if edge_color_ok {
                    edge_color_detail = format!(
                        "edge ({a},{b}) is {} but its faces are {} and {}",
                        stored_color.code(),
                        ca.code(),
                        cb.code()
                    );
                }
                edge_color_ok = false;
            }
        }
    }
    checks.push(CheckResult {
        name: "face-three-coloring",
        passed: coloring_ok,
        detail: coloring_detail,
    });

    // An edge of color c joins, through its endpoints, faces of color c.
    let vertex_faces = colex.vertex_faces();
    if edge_color_ok {
        for e in &colex.edges {
            for v in [e.a, e.b] {
                if !vertex_faces[v]
                    .iter()
                    .any(|&f| colex.faces[f].color == e.color)
                {
                    edge_color_detail = format!(
                        "edge ({},{}) of color {} has endpoint {v} touching no {} face",
                        e.a,
                        e.b,
                        e.color.code(),
                        e.color.code()
                    );
                    edge_color_ok = false;
                    break;
                }
            }
            if !edge_color_ok {
                break;
            }
        }
    }
    checks.push(CheckResult {
        name: "edge-color",
        passed: edge_color_ok,
        detail: edge_color_detail,
    });

    let odd_face = colex
        .faces
        .iter()
        .enumerate()
        .find(|(_, f)| !f.partial && f.verts.len() % 2 != 0);
    checks.push(CheckResult {
        name: "face-even-size",
        passed: odd_face.is_none(),
        detail: match odd_face {
            None => "every complete face has an even number of vertices".into(),
            Some((fid, f)) => format!("complete face {fid} has {} vertices", f.verts.len()),
        },
    });

    let mut membership_ok = true;
    let mut membership_detail =
        String::from("every vertex lies in exactly three faces, one of each color");
    for (v, fs) in vertex_faces.iter().enumerate() {
        let mut colors: Vec<Color> = fs.iter().map(|&f| colex.faces[f].color).collect();
        colors.sort();
        colors.dedup();
        if fs.len() != 3 || colors.len() != 3 {
            membership_detail = format!("vertex {v} lies in {} faces", fs.len());
            membership_ok = false;
            break;
        }
    }
    checks.push(CheckResult {
        name: "vertex-face-membership",
        passed: membership_ok,
        detail: membership_detail,
    });

    let chi = colex.euler_characteristic();
    let betti1 = if colex.closed && chi <= 2 {
        Some((2 - chi) as usize)
    } else {
        None
    };
    LatticeReport {
        vertices: n,
        edges: colex.edge_count(),
        faces: colex.face_count(),
        euler_characteristic: chi,
        betti1,
        checks,
    }
}

/// Validates a dual triangulation. Counts report sites, dual edges and
/// triangles.
pub fn validate_dual(dual: &DualTriangulation) -> LatticeReport {
    let mut checks = Vec::new();
    let n = dual.site_count();

    let indices_ok = dual.triangles.iter().all(|t| t.iter().all(|&s| s < n));
    checks.push(CheckResult {
        name: "index-range",
        passed: indices_ok,
        detail: if indices_ok {
            "all site references in range".into()
        } else {
            "site reference out of range".into()
        },
    });

    let colors_ok = indices_ok
        && dual.triangles.iter().all(|t| {
            let mut cs: Vec<Color> = t.iter().map(|&s| dual.site_colors[s]).collect();
            cs.sort();
            cs.dedup();
            cs.len() == 3
        });
    checks.push(CheckResult {
        name: "triangle-site-colors",
        passed: colors_ok,
        detail: if colors_ok {
            "every triangle touches one site of each color".into()
        } else {
            "a triangle misses a color".into()
        },
    });

    let mut dups = std::collections::HashSet::new();
    let dup_free = dual.triangles.iter().all(|t| {
        let mut s = *t;
        s.sort();
        dups.insert(s)
    });
    checks.push(CheckResult {
        name: "distinct-triangles",
        passed: dup_free,
        detail: if dup_free {
            "no duplicated triangles".into()
        } else {
            "duplicated triangle".into()
        },
    });

    let site_triangles = dual.site_triangles();
    let isolated = site_triangles.iter().position(|t| t.is_empty());
    checks.push(CheckResult {
        name: "no-isolated-sites",
        passed: isolated.is_none(),
        detail: match isolated {
            None => "every site lies in a triangle".into(),
            Some(s) => format!("site {s} lies in no triangle"),
        },
    });

    // Each dual edge may border at most two triangles.
    let mut pair_count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    if indices_ok {
        for tri in &dual.triangles {
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let key = (tri[i].min(tri[j]), tri[i].max(tri[j]));
                *pair_count.entry(key).or_insert(0) += 1;
            }
        }
    }
    let overfull = pair_count.iter().find(|(_, &c)| c > 2);
    checks.push(CheckResult {
        name: "dual-edge-incidence",
        passed: overfull.is_none(),
        detail: match overfull {
            None => "every dual edge borders at most two triangles".into(),
            Some(((a, b), c)) => format!("dual edge ({a},{b}) borders {c} triangles"),
        },
    });

    let bijections_ok = dual.site_to_face.len() == n
        && dual.triangle_to_vertex.len() == dual.triangle_count();
    checks.push(CheckResult {
        name: "duality-bijections",
        passed: bijections_ok,
        detail: "stored site/face and triangle/vertex maps have matching sizes".into(),
    });

    let e = pair_count.len();
    let t = dual.triangle_count();
    LatticeReport {
        vertices: n,
        edges: e,
        faces: t,
        euler_characteristic: n as i64 - e as i64 + t as i64,
        betti1: None,
        checks,
    }
}

// ---------------------------------------------------------------------------
// Canonical patches and tori
// ---------------------------------------------------------------------------

/// Triangulation spanned by the listed triangular-lattice coordinates; all
/// unit triangles whose three corners are present become triangles.
fn triangular_sites(coords: &[(i64, i64)]) -> Result<DualTriangulation> {
    let mut index = std::collections::HashMap::new();
    for (i, &c) in coords.iter().enumerate() {
        if index.insert(c, i).is_some() {
            return Err(Error::DegeneratePatch(format!("repeated site {c:?}")));
        }
    }
    let color = |(p, q): (i64, i64)| Color::ALL[(p + q).rem_euclid(3) as usize];
    let mut triangles = Vec::new();
    for &(p, q) in coords {
        for tri in [
            [(p, q), (p + 1, q), (p + 1, q + 1)],
            [(p, q), (p + 1, q + 1), (p, q + 1)],
        ] {
            if let (Some(&a), Some(&b), Some(&c)) = (
                index.get(&tri[0]),
                index.get(&tri[1]),
                index.get(&tri[2]),
            ) {
                triangles.push([a, b, c]);
            }
        }
    }
    if triangles.is_empty() {
        return Err(Error::DegeneratePatch(
            "site set contains no complete triangle".into(),
        ));
    }
    DualTriangulation::from_parts(coords.iter().map(|&c| color(c)).collect(), triangles, true)
}

/// One interior site surrounded by six triangles: the smallest patch with a
/// complete face. Site 0 is the center; sites 1..=6 form the ring.
pub fn hexagon_patch() -> DualTriangulation {
    triangular_sites(&[(1, 1), (2, 1), (2, 2), (1, 2), (0, 1), (0, 0), (1, 0)])
        .expect("hexagon patch is well formed")
}

/// Three sites, one triangle.
pub fn single_triangle_patch() -> DualTriangulation {
    triangular_sites(&[(0, 0), (1, 0), (1, 1)]).expect("triangle patch is well formed")
}

/// Parallelogram patch of the triangular lattice with `a x b` sites.
pub fn triangular_patch(a: usize, b: usize) -> Result<DualTriangulation> {
    if a < 2 || b < 2 {
        return Err(Error::DegeneratePatch(
            "triangular patch needs at least 2 x 2 sites".into(),
        ));
    }
    let mut coords = Vec::with_capacity(a * b);
    for p in 0..a as i64 {
        for q in 0..b as i64 {
            coords.push((p, q));
        }
    }
    triangular_sites(&coords)
}

/// Union Jack patch covering `sx x sy` unit squares: corner sites on the
/// square grid plus one center site per square, four triangles per square.
pub fn union_jack_patch(sx: usize, sy: usize) -> Result<DualTriangulation> {
    if sx == 0 || sy == 0 {
        return Err(Error::DegeneratePatch(
            "union jack patch needs at least one square".into(),
        ));
    }
    let corner = |x: usize, y: usize| y * (sx + 1) + x;
    let ncorners = (sx + 1) * (sy + 1);
    let center = |x: usize, y: usize| ncorners + y * sx + x;

    let mut colors = Vec::new();
    for y in 0..=sy {
        for x in 0..=sx {
            colors.push(if (x + y) % 2 == 0 {
                Color::Red
            } else {
                Color::Green
            });
        }
    }
    colors.extend(std::iter::repeat_n(Color::Blue, sx * sy));

    let mut triangles = Vec::new();
    for y in 0..sy {
        for x in 0..sx {
            let m = center(x, y);
            triangles.push([m, corner(x, y), corner(x + 1, y)]);
            triangles.push([m, corner(x + 1, y), corner(x + 1, y + 1)]);
            triangles.push([m, corner(x + 1, y + 1), corner(x, y + 1)]);
            triangles.push([m, corner(x, y + 1), corner(x, y)]);
        }
    }
    DualTriangulation::from_parts(colors, triangles, true)
}

/// Triangular lattice on a torus: the dual of the hexagonal torus.
pub fn triangular_torus(rows: usize, cols: usize) -> Result<DualTriangulation> {
    build_dual(&build_hex_torus(rows, cols)?)
}

// ---------------------------------------------------------------------------
// JSON lattice files
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct FaceFile {
    verts: Vec<usize>,
    color: String,
    partial: bool,
}

#[derive(Serialize, Deserialize)]
struct LatticeFile {
    kind: String,
    vertices: usize,
    edges: Vec<(usize, usize, String)>,
    faces: Vec<FaceFile>,
}

/// A lattice loaded from JSON: either a colex (closed or bordered) or a dual
/// triangulation.
pub enum AnyLattice {
    Colex(Colex2),
    Dual(DualTriangulation),
}

/// Serializes a colex. `kind` is `"colex2"` for closed lattices and
/// `"bordered"` otherwise.
pub fn write_colex_json(colex: &Colex2) -> String {
    let file = LatticeFile {
        kind: if colex.closed { "colex2" } else { "bordered" }.into(),
        vertices: colex.vertex_count(),
        edges: colex
            .edges
            .iter()
            .map(|e| (e.a, e.b, e.color.code().to_string()))
            .collect(),
        faces: colex
            .faces
            .iter()
            .map(|f| FaceFile {
                verts: f.verts.clone(),
                color: f.color.code().to_string(),
                partial: f.partial,
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("serialization cannot fail");
    s.push('\n');
    s
}

/// Serializes a dual triangulation in the shared schema: `vertices` counts
/// triangles, `faces` hold one entry per site (its incident triangles,
/// ascending), and `edges` join triangles sharing a dual edge.
pub fn write_dual_json(dual: &DualTriangulation) -> String {
    let site_triangles = dual.site_triangles();
    let mut edges = Vec::new();
    let nt = dual.triangle_count();
    for t1 in 0..nt {
        for t2 in t1 + 1..nt {
            let shared: Vec<usize> = dual.triangles[t1]
                .iter()
                .copied()
                .filter(|s| dual.triangles[t2].contains(s))
                .collect();
            if shared.len() == 2 {
                let color =
                    Color::third(dual.site_colors[shared[0]], dual.site_colors[shared[1]]);
                edges.push((t1, t2, color.code().to_string()));
            }
        }
    }
    let faces = (0..dual.site_count())
        .map(|s| {
            let fan = site_fan(&site_triangles[s], &dual.triangles, s);
            let partial = fan.map(|f| !f.closed).unwrap_or(true);
            FaceFile {
                verts: site_triangles[s].clone(),
                color: dual.site_colors[s].code().to_string(),
                partial,
            }
        })
        .collect();
    let file = LatticeFile {
        kind: "dual".into(),
        vertices: nt,
        edges,
        faces,
    };
    let mut s = serde_json::to_string_pretty(&file).expect("serialization cannot fail");
    s.push('\n');
    s
}

/// Parses a lattice file of any kind.
pub fn read_lattice_json(text: &str) -> Result<AnyLattice> {
    let file: LatticeFile = serde_json::from_str(text)?;
    match file.kind.as_str() {
        "colex2" | "bordered" => {
            let closed = file.kind == "colex2";
            let edges = file
                .edges
                .iter()
                .map(|(a, b, c)| {
                    Ok(Edge {
                        a: *a,
                        b: *b,
                        color: Color::from_code(c)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let faces = file
                .faces
                .iter()
                .map(|f| {
                    Ok(Face {
                        verts: f.verts.clone(),
                        color: Color::from_code(&f.color)?,
                        partial: f.partial,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(AnyLattice::Colex(Colex2 {
                nverts: file.vertices,
                edges,
                faces,
                closed,
            }))
        }
        "dual" => {
            let nt = file.vertices;
            let mut slots: Vec<Vec<usize>> = vec![Vec::new(); nt];
            let mut colors = Vec::with_capacity(file.faces.len());
            for (s, f) in file.faces.iter().enumerate() {
                let color = Color::from_code(&f.color)?;
                colors.push(color);
                for &t in &f.verts {
                    if t >= nt {
                        return Err(Error::InvalidLattice(format!(
                            "site {s} references triangle {t} out of range"
                        )));
                    }
                    slots[t].push(s);
                }
            }
            let mut triangles = Vec::with_capacity(nt);
            for (t, sites) in slots.iter().enumerate() {
                if sites.len() != 3 {
                    return Err(Error::InvalidLattice(format!(
                        "triangle {t} touches {} sites",
                        sites.len()
                    )));
                }
                triangles.push([sites[0], sites[1], sites[2]]);
            }
            let bordered = file.faces.iter().any(|f| f.partial);
            DualTriangulation::from_parts(colors, triangles, bordered).map(AnyLattice::Dual)
        }
        other => Err(Error::InvalidArgument(format!(
            "unknown lattice kind {other:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_hex_torus_counts() {
        let colex = build_hex_torus(1, 3).unwrap();
        assert_eq!(colex.face_count(), 3);
        assert_eq!(colex.vertex_count(), 6);
        assert_eq!(colex.edge_count(), 9);
        let report = validate(&colex);
        assert!(report.all_pass(), "{}", report.failure_summary());
        assert_eq!(report.euler_characteristic, 0);
        assert_eq!(report.betti1, Some(2));
    }

    #[test]
    fn nine_face_hex_torus_counts() {
        let colex = build_hex_torus(3, 3).unwrap();
        assert_eq!(colex.face_count(), 9);
        assert_eq!(colex.vertex_count(), 18);
        assert_eq!(colex.edge_count(), 27);
        assert!(validate(&colex).all_pass());
        assert_eq!(colex.euler_characteristic(), 0);
    }

    #[test]
    fn hex_torus_rejects_bad_dimensions() {
        for (r, c) in [(1, 1), (2, 2), (1, 4), (3, 5), (2, 7)] {
            match build_hex_torus(r, c) {
                Err(Error::NotThreeColorable { constraint, .. }) => {
                    assert!(constraint.contains("multiple of 3"));
                }
                other => panic!("expected rejection for {r}x{c}, got {other:?}"),
            }
        }
    }

    #[test]
    fn smallest_48_torus() {
        let colex = build_48_torus(2, 2).unwrap();
        assert_eq!(colex.face_count(), 8);
        assert_eq!(colex.vertex_count(), 16);
        assert_eq!(colex.edge_count(), 24);
        assert!(validate(&colex).all_pass());
        assert_eq!(colex.euler_characteristic(), 0);
        assert!(colex
            .faces()
            .iter()
            .all(|f| f.verts.len() == 4 || f.verts.len() == 8));
    }

    #[test]
    fn larger_48_torus_euler() {
        let colex = build_48_torus(2, 4).unwrap();
        assert!(validate(&colex).all_pass());
        assert_eq!(colex.euler_characteristic(), 0);
    }

    #[test]
    fn torus_48_rejects_odd_dimensions() {
        for (r, c) in [(1, 2), (2, 3), (3, 3), (3, 5)] {
            assert!(
                matches!(build_48_torus(r, c), Err(Error::NotThreeColorable { .. })),
                "{r}x{c} should be rejected"
            );
        }
    }

    #[test]
    fn dual_of_nine_face_torus() {
        let colex = build_hex_torus(3, 3).unwrap();
        let dual = build_dual(&colex).unwrap();
        assert_eq!(dual.site_count(), 9);
        assert_eq!(dual.triangle_count(), 18);
        assert!(!dual.is_bordered());
        assert!(validate_dual(&dual).all_pass());
        // Triangular lattice: every site sits in six triangles.
        assert!(dual.site_triangles().iter().all(|t| t.len() == 6));
    }

    #[test]
    fn dual_of_minimal_torus_uses_all_sites() {
        let dual = build_dual(&build_hex_torus(1, 3).unwrap()).unwrap();
        assert_eq!(dual.site_count(), 3);
        assert_eq!(dual.triangle_count(), 6);
        for tri in dual.triangles() {
            let mut sites = *tri;
            sites.sort();
            assert_eq!(sites, [0, 1, 2]);
        }
    }

    #[test]
    fn dual_of_48_torus_is_union_jack() {
        let colex = build_48_torus(2, 2).unwrap();
        let dual = build_dual(&colex).unwrap();
        let st = dual.site_triangles();
        // Sites dual to squares sit in 4 triangles, octagon sites in 8.
        for (s, tris) in st.iter().enumerate() {
            let face_size = colex.faces()[dual.site_to_face(s)].verts.len();
            assert_eq!(tris.len(), face_size);
            assert!(tris.len() == 4 || tris.len() == 8);
        }
    }

    #[test]
    fn duality_bijections_are_involutive() {
        let colex = build_hex_torus(3, 3).unwrap();
        let dual = build_dual(&colex).unwrap();
        for t in 0..dual.triangle_count() {
            assert_eq!(dual.triangle_to_vertex(t), t);
        }
        for s in 0..dual.site_count() {
            assert_eq!(dual.site_to_face(s), s);
        }
    }

    #[test]
    fn hexagon_patch_border_construction() {
        let dual = hexagon_patch();
        assert_eq!(dual.site_count(), 7);
        assert_eq!(dual.triangle_count(), 6);
        let colex = build_bordered(&dual).unwrap();
        assert_eq!(colex.vertex_count(), 6);
        let complete: Vec<_> = colex.faces().iter().filter(|f| !f.partial).collect();
        let partial: Vec<_> = colex.faces().iter().filter(|f| f.partial).collect();
        assert_eq!(complete.len(), 1);
        assert_eq!(complete[0].verts.len(), 6);
        assert_eq!(partial.len(), 6);
        assert!(partial.iter().all(|f| f.verts.len() == 2));
        assert!(validate(&colex).all_pass());
    }

    #[test]
    fn single_triangle_border_construction() {
        let dual = single_triangle_patch();
        let colex = build_bordered(&dual).unwrap();
        assert_eq!(colex.vertex_count(), 1);
        assert_eq!(colex.edge_count(), 0);
        assert_eq!(colex.face_count(), 3);
        assert!(colex.faces().iter().all(|f| f.partial && f.verts == [0]));
    }

    #[test]
    fn union_jack_patch_border_construction() {
        let dual = union_jack_patch(1, 1).unwrap();
        assert_eq!(dual.site_count(), 5);
        assert_eq!(dual.triangle_count(), 4);
        let colex = build_bordered(&dual).unwrap();
        assert_eq!(colex.vertex_count(), 4);
        let complete: Vec<_> = colex.faces().iter().filter(|f| !f.partial).collect();
        assert_eq!(complete.len(), 1);
        assert_eq!(complete[0].verts.len(), 4);
    }

    #[test]
    fn kept_vertices_match_triangles() {
        for dual in [
            hexagon_patch(),
            single_triangle_patch(),
            triangular_patch(3, 4).unwrap(),
            union_jack_patch(2, 2).unwrap(),
        ] {
            let colex = build_bordered(&dual).unwrap();
            assert_eq!(colex.vertex_count(), dual.triangle_count());
        }
    }

    #[test]
    fn bordered_rejects_closed_input() {
        let dual = build_dual(&build_hex_torus(1, 3).unwrap()).unwrap();
        assert!(matches!(build_bordered(&dual), Err(Error::ClosedInput)));
    }

    #[test]
    fn empty_patch_rejected() {
        assert!(triangular_sites(&[(0, 0), (5, 5)]).is_err());
        assert!(triangular_patch(1, 5).is_err());
        let empty = DualTriangulation::from_parts(vec![Color::Red], vec![], true).unwrap();
        assert!(matches!(
            build_bordered(&empty),
            Err(Error::DegeneratePatch(_))
        ));
    }

    #[test]
    fn validate_flags_same_color_neighbors() {
        let mut colex = build_hex_torus(1, 3).unwrap();
        colex.faces[1].color = colex.faces[0].color;
        let report = validate(&colex);
        assert!(!report.all_pass());
        assert!(report
            .failures()
            .iter()
            .any(|c| c.name == "face-three-coloring"));
    }

    #[test]
    fn validate_flags_low_degree_vertex() {
        let mut colex = build_hex_torus(1, 3).unwrap();
        colex.edges.pop();
        let report = validate(&colex);
        assert!(!report.all_pass());
        assert!(report.failures().iter().any(|c| c.name == "trivalence"));
    }

    #[test]
    fn edge_color_joins_same_color_faces() {
        for colex in [build_hex_torus(3, 3).unwrap(), build_48_torus(2, 2).unwrap()] {
            let vertex_faces = colex.vertex_faces();
            for e in colex.edges() {
                for v in [e.a, e.b] {
                    assert!(vertex_faces[v]
                        .iter()
                        .any(|&f| colex.faces()[f].color == e.color));
                }
            }
        }
    }

    #[test]
    fn json_round_trip_colex() {
        let colex = build_hex_torus(3, 3).unwrap();
        let text = write_colex_json(&colex);
        assert_eq!(text, write_colex_json(&colex), "serialization is stable");
        match read_lattice_json(&text).unwrap() {
            AnyLattice::Colex(back) => {
                assert_eq!(back.vertex_count(), colex.vertex_count());
                assert_eq!(back.edges(), colex.edges());
                assert_eq!(back.faces(), colex.faces());
                assert!(back.is_closed());
            }
            _ => panic!("expected colex"),
        }
    }

    #[test]
    fn json_round_trip_dual_and_bordered() {
        let dual = hexagon_patch();
        let text = write_dual_json(&dual);
        match read_lattice_json(&text).unwrap() {
            AnyLattice::Dual(back) => {
                assert_eq!(back.site_count(), dual.site_count());
                assert_eq!(back.triangles(), dual.triangles());
                assert!(back.is_bordered());
            }
            _ => panic!("expected dual"),
        }
        let colex = build_bordered(&dual).unwrap();
        let text = write_colex_json(&colex);
        match read_lattice_json(&text).unwrap() {
            AnyLattice::Colex(back) => {
                assert!(!back.is_closed());
                assert_eq!(back.faces(), colex.faces());
            }
            _ => panic!("expected colex"),
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn admissible_hex_tori_validate(rows in 1usize..5, triples in 1usize..4) {
                let cols = 3 * triples;
                let colex = build_hex_torus(rows, cols).unwrap();
                let report = validate(&colex);
                prop_assert!(report.all_pass());
                prop_assert_eq!(report.euler_characteristic, 0);
                prop_assert_eq!(colex.face_count(), rows * cols);
                prop_assert_eq!(colex.vertex_count(), 2 * rows * cols);
                prop_assert_eq!(colex.edge_count(), 3 * rows * cols);
            }

            #[test]
            fn admissible_48_tori_validate(r in 1usize..3, c in 1usize..3) {
                let (rows, cols) = (2 * r, 2 * c);
                let colex = build_48_torus(rows, cols).unwrap();
                let report = validate(&colex);
                prop_assert!(report.all_pass());
                prop_assert_eq!(report.euler_characteristic, 0);
                prop_assert_eq!(colex.face_count(), 2 * rows * cols);
            }
        }
    }

    #[test]
    fn fan_ordering_is_cyclic_for_interior_sites() {
        let dual = hexagon_patch();
        let colex = build_bordered(&dual).unwrap();
        let center = &colex.faces()[0];
        assert!(!center.partial);
        // Consecutive fan triangles share an edge in the colex.
        let is_edge = |u: usize, v: usize| {
            colex
                .edges()
                .iter()
                .any(|e| (e.a == u && e.b == v) || (e.a == v && e.b == u))
        };
        let k = center.verts.len();
        for i in 0..k {
            assert!(is_edge(center.verts[i], center.verts[(i + 1) % k]));
        }
    }
}
