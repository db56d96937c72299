//! Canonical test lattices with fixed indices: byte-identical across runs.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use colorcode::colex::{
    build_48_torus, build_bordered, build_hex_torus, hexagon_patch, single_triangle_patch,
    union_jack_patch, write_colex_json, write_dual_json,
};

/// Writes the golden lattice set into a directory and returns the paths.
///
/// Patches ship in both forms, the dual triangulation and the bordered
/// colex built from it; tori ship as closed colexes.
pub fn emit_goldens(dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("cannot create {}", dir.display()))?;
    let mut written = Vec::new();
    let mut write = |name: &str, text: String| -> Result<()> {
        let path = dir.join(name);
        std::fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
        written.push(path);
        Ok(())
    };

    let hexagon = hexagon_patch();
    write("hexagon_patch.dual.json", write_dual_json(&hexagon))?;
    write(
        "hexagon_patch.bordered.json",
        write_colex_json(&build_bordered(&hexagon)?),
    )?;

    let triangle = single_triangle_patch();
    write("single_triangle.dual.json", write_dual_json(&triangle))?;
    write(
        "single_triangle.bordered.json",
        write_colex_json(&build_bordered(&triangle)?),
    )?;

    let union_jack = union_jack_patch(1, 1)?;
    write("union_jack_patch.dual.json", write_dual_json(&union_jack))?;
    write(
        "union_jack_patch.bordered.json",
        write_colex_json(&build_bordered(&union_jack)?),
    )?;

    write(
        "minimal_torus.colex2.json",
        write_colex_json(&build_hex_torus(1, 3)?),
    )?;
    write(
        "nine_face_torus.colex2.json",
        write_colex_json(&build_hex_torus(3, 3)?),
    )?;
    write(
        "four_eight_torus.colex2.json",
        write_colex_json(&build_48_torus(2, 2)?),
    )?;

    Ok(written)
}
