//! Input file formats: couplings, field specs, measurement bases, product
//! states, and binary state output.

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde_json::Value;

use colorcode::cluster::{ClusterGraph, FieldSpec};
use colorcode::codestate::{ProductState, StateVector};
use colorcode::colex::DualTriangulation;
use colorcode::correspondence::MeasurementBasis;
use colorcode::spinmodel::CouplingSet;

fn as_f64(v: &Value, what: &str) -> Result<f64> {
    v.as_f64().with_context(|| format!("{what} must be a number"))
}

/// Per-triangle or per-site coupling arrays. Accepted forms for `"J"`:
/// a number (uniform), `{"uniform": x}`, an array of numbers (one per
/// entry), or an array of `{"tri": t, "re": .., "im": ..}` records
/// (unlisted entries default to zero). `"h"` works the same with `"site"`
/// keys and defaults to zero when absent.
pub fn parse_couplings(text: &str, dual: &DualTriangulation) -> Result<CouplingSet<f64>> {
    let root: Value = serde_json::from_str(text).context("couplings file is not valid JSON")?;
    let beta = as_f64(
        root.get("beta").context("couplings file needs \"beta\"")?,
        "beta",
    )?;
    let j = parse_entry_array(
        root.get("J").context("couplings file needs \"J\"")?,
        dual.triangle_count(),
        "tri",
    )?;
    let h = match root.get("h") {
        Some(v) => parse_entry_array(v, dual.site_count(), "site")?,
        None => vec![Complex64::new(0.0, 0.0); dual.site_count()],
    };
    Ok(CouplingSet::new(beta, j, h))
}

fn parse_entry_array(v: &Value, len: usize, key: &str) -> Result<Vec<Complex64>> {
    match v {
        Value::Number(_) => Ok(vec![Complex64::new(as_f64(v, key)?, 0.0); len]),
        Value::Object(map) => {
            let u = map
                .get("uniform")
                .with_context(|| format!("object form of \"{key}\" needs \"uniform\""))?;
            Ok(vec![Complex64::new(as_f64(u, "uniform")?, 0.0); len])
        }
        Value::Array(items) => {
            if items.iter().all(|x| x.is_number()) {
                if items.len() != len {
                    bail!("expected {len} values, got {}", items.len());
                }
                return items
                    .iter()
                    .map(|x| Ok(Complex64::new(as_f64(x, key)?, 0.0)))
                    .collect();
            }
            let mut out = vec![Complex64::new(0.0, 0.0); len];
            let mut seen = vec![false; len];
            for item in items {
                let idx = item
                    .get(key)
                    .and_then(Value::as_u64)
                    .with_context(|| format!("entry needs an integer \"{key}\" index"))?
                    as usize;
                if idx >= len {
                    bail!("index {idx} out of range (< {len})");
                }
                if seen[idx] {
                    bail!("index {idx} given twice");
                }
                seen[idx] = true;
                let re = item.get("re").map(|v| as_f64(v, "re")).transpose()?.unwrap_or(0.0);
                let im = item.get("im").map(|v| as_f64(v, "im")).transpose()?.unwrap_or(0.0);
                out[idx] = Complex64::new(re, im);
            }
            Ok(out)
        }
        _ => bail!("unsupported \"{key}\" value"),
    }
}

/// Field spec for the cluster identity: `beta`, per-vertex `J`, per-face
/// `h`; arrays or uniform numbers.
pub fn parse_fields(text: &str, graph: &ClusterGraph) -> Result<FieldSpec<f64>> {
    let root: Value = serde_json::from_str(text).context("fields file is not valid JSON")?;
    let beta = as_f64(
        root.get("beta").context("fields file needs \"beta\"")?,
        "beta",
    )?;
    let j = parse_real_array(
        root.get("J").context("fields file needs \"J\"")?,
        graph.u1_count(),
    )?;
    let h = match root.get("h") {
        Some(v) => parse_real_array(v, graph.u2_count())?,
        None => vec![0.0; graph.u2_count()],
    };
    Ok(FieldSpec { beta, j, h })
}

fn parse_real_array(v: &Value, len: usize) -> Result<Vec<f64>> {
    match v {
        Value::Number(_) => Ok(vec![as_f64(v, "value")?; len]),
        Value::Array(items) => {
            if items.len() != len {
                bail!("expected {len} values, got {}", items.len());
            }
            items.iter().map(|x| as_f64(x, "value")).collect()
        }
        _ => bail!("expected a number or an array of numbers"),
    }
}

fn parse_complex_pair(v: &Value) -> Result<Complex64> {
    let arr = v.as_array().context("complex values are [re, im] pairs")?;
    if arr.len() != 2 {
        bail!("complex values are [re, im] pairs");
    }
    Ok(Complex64::new(as_f64(&arr[0], "re")?, as_f64(&arr[1], "im")?))
}

/// Measurement basis: the strings `"z"` / `"x"`, or a path to a JSON file
/// `{"qubits": [{"m0": [[re,im],[re,im]], "m1": [...]}, ...]}`.
pub fn parse_basis(spec: &str, n: usize) -> Result<MeasurementBasis<f64>> {
    match spec {
        "z" => Ok(MeasurementBasis::z(n)),
        "x" => Ok(MeasurementBasis::x(n)),
        path => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read basis file {path}"))?;
            let root: Value = serde_json::from_str(&text).context("basis file is not valid JSON")?;
            let qubits = root
                .get("qubits")
                .and_then(Value::as_array)
                .context("basis file needs a \"qubits\" array")?;
            if qubits.len() != n {
                bail!("basis file lists {} qubits, lattice has {n}", qubits.len());
            }
            let mut states = Vec::with_capacity(n);
            for (q, entry) in qubits.iter().enumerate() {
                let m0 = entry
                    .get("m0")
                    .and_then(Value::as_array)
                    .with_context(|| format!("qubit {q} needs \"m0\""))?;
                let m1 = entry
                    .get("m1")
                    .and_then(Value::as_array)
                    .with_context(|| format!("qubit {q} needs \"m1\""))?;
                if m0.len() != 2 || m1.len() != 2 {
                    bail!("outcome states are two [re, im] pairs");
                }
                states.push([
                    [parse_complex_pair(&m0[0])?, parse_complex_pair(&m0[1])?],
                    [parse_complex_pair(&m1[0])?, parse_complex_pair(&m1[1])?],
                ]);
            }
            Ok(MeasurementBasis::new(states)?)
        }
    }
}

/// Product-state coefficients: `{"betaJ": x}` for the uniform cosh/sinh
/// state, or `{"coeffs": [[[re,im],[re,im]], ...]}` per qubit.
pub fn parse_product_state(text: &str, n: usize) -> Result<ProductState<f64>> {
    let root: Value = serde_json::from_str(text).context("coeffs file is not valid JSON")?;
    if let Some(bj) = root.get("betaJ") {
        return Ok(ProductState::cosh_sinh(as_f64(bj, "betaJ")?, n));
    }
    let coeffs = root
        .get("coeffs")
        .and_then(Value::as_array)
        .context("coeffs file needs \"betaJ\" or \"coeffs\"")?;
    if coeffs.len() != n {
        bail!("coeffs file lists {} qubits, lattice has {n}", coeffs.len());
    }
    let mut pairs = Vec::with_capacity(n);
    for entry in coeffs {
        let arr = entry.as_array().context("each qubit needs two pairs")?;
        if arr.len() != 2 {
            bail!("each qubit needs two pairs");
        }
        pairs.push([parse_complex_pair(&arr[0])?, parse_complex_pair(&arr[1])?]);
    }
    Ok(ProductState::new(pairs)?)
}

/// Raw little-endian layout: `2^n` amplitudes in basis order, each one
/// `f64` real part then `f64` imaginary part.
pub fn state_to_bytes(state: &StateVector<f64>) -> Vec<u8> {
    let mut out = Vec::with_capacity(state.amplitudes().len() * 16);
    for a in state.amplitudes() {
        out.extend_from_slice(&a.re.to_le_bytes());
        out.extend_from_slice(&a.im.to_le_bytes());
    }
    out
}
