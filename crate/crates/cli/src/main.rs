//! Unified command line for lattice construction, code-state analysis, spin
//! models and the identity checks between them.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when a computed
//! check fails its tolerance (or a lattice fails validation, or an identity
//! is blocked by the homology obstruction on a closed surface).

mod envelope;
mod formats;
mod goldens;

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use colorcode::cluster::{build_cluster_graph, cluster_state, project_faces, verify_field_identity};
use colorcode::codestate::{code_state, overlap, string_net_overlap};
use colorcode::colex::{
    build_48_torus, build_bordered, build_dual, build_hex_torus, read_lattice_json, validate,
    validate_dual, write_colex_json, write_dual_json, AnyLattice, Colex2, DualTriangulation,
};
use colorcode::correspondence::{mqc_joint, mqc_sample, verify_overlap_identity};
use colorcode::pauli::{encoded_qubits, stabilizer_set};
use colorcode::spinmodel::{
    criticality_scan, ground_states, partition_exact, partition_high_t, specific_heat,
    transfer_matrix_free_energy, Sign,
};
use envelope::{complex_value, format_float, render};

#[derive(Parser)]
#[command(name = "colorcode", version, about = "Color-code lattices and their three-body Ising duals")]
struct Cli {
    /// Worker threads for parallel sums (default: all cores). Results are
    /// identical for any thread count.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build, convert and validate lattices.
    #[command(subcommand)]
    Colex(ColexCmd),
    /// Stabilizer code queries and dense code states.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Classical spin-model computations.
    #[command(subcommand)]
    Spin(SpinCmd),
    /// Identity checks between the two sides.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Measurement-based sampling.
    #[command(subcommand)]
    Mqc(MqcCmd),
    /// Cluster-state preparation and projection.
    #[command(subcommand)]
    Cluster(ClusterCmd),
    /// Write the canonical golden lattices.
    Goldens {
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Hex,
    Four8,
}

#[derive(Subcommand)]
enum ColexCmd {
    /// Generate a closed torus lattice.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Dual triangulation of a lattice file.
    Dual {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Bordered colex from a dual patch.
    Border {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Validate a lattice file; exit 0 only if every check passes.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum CodeCmd {
    /// Qubit count, stabilizer rank, encoded qubits and topology.
    Info {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Write the dense code state (little-endian f64 re/im pairs).
    State {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Overlap of the code state with a product state.
    Overlap {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        coeffs: PathBuf,
    },
}

#[derive(Subcommand)]
enum SpinCmd {
    /// Partition function of a coupling set on the dual lattice.
    Z {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        couplings: PathBuf,
        #[arg(long, default_value = "exact")]
        method: String,
    },
    /// Exhaustive ground states of the uniform zero-field model.
    Ground {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        sign: String,
    },
    /// Transfer-matrix free energy and specific heat across strip widths.
    Critical {
        #[arg(long, default_value = "tri")]
        family: String,
        #[arg(long, default_value = "3,6,9")]
        widths: String,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Z = 2^N O at real uniform couplings on a bordered lattice.
    Overlap {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long = "betaJ", default_value = "-2,-1,-0.5,0,0.5,1,2", allow_hyphen_values = true)]
        beta_j: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Z(b,J,h) = 2^N O(b,J,h) with external fields.
    Field {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        fields: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(Subcommand)]
enum MqcCmd {
    /// Full Born distribution over outcome strings.
    Joint {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long, default_value = "z")]
        basis: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sequential conditional sampling.
    Sample {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long, default_value = "z")]
        basis: String,
        #[arg(long = "n-samples")]
        n_samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum ClusterCmd {
    /// Write the dense cluster state of a lattice.
    State {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Project the face qubits onto fixed outcomes.
    Project {
        #[arg(long)]
        lattice: PathBuf,
        /// Face outcomes as a 0/1 string, face 0 first.
        #[arg(long)]
        x: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> std::process::ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes; everything else is a
            // usage error (exit 1).
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return std::process::ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match run(cli.command) {
        Ok(code) => std::process::ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = match e.downcast_ref::<colorcode::Error>() {
                Some(colorcode::Error::HomologyObstruction) => 2,
                Some(colorcode::Error::ImpossibleOutcome) => 2,
                _ => 1,
            };
            std::process::ExitCode::from(code)
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_any(path: &PathBuf) -> Result<AnyLattice> {
    Ok(read_lattice_json(&read_file(path)?)?)
}

/// A colex for stabilizer/state work: colex files load directly, bordered
/// dual patches go through the border construction.
fn load_colex(path: &PathBuf) -> Result<Colex2> {
    match load_any(path)? {
        AnyLattice::Colex(c) => Ok(c),
        AnyLattice::Dual(d) if d.is_bordered() => Ok(build_bordered(&d)?),
        AnyLattice::Dual(_) => {
            bail!("closed dual files carry no face boundaries; pass the colex2 file")
        }
    }
}

/// The colex together with its dual, rebuilt so the bijections line up.
fn load_pair(path: &PathBuf) -> Result<(Colex2, DualTriangulation)> {
    let colex = load_colex(path)?;
    let dual = build_dual(&colex)?;
    Ok((colex, dual))
}

/// A dual triangulation for spin-model work.
fn load_dual(path: &PathBuf) -> Result<DualTriangulation> {
    match load_any(path)? {
        AnyLattice::Dual(d) => Ok(d),
        AnyLattice::Colex(c) => Ok(build_dual(&c)?),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|x| x.trim())
        .filter(|x| !x.is_empty())
        .map(|x| {
            x.parse::<T>()
                .map_err(|_| anyhow::anyhow!("cannot parse {what} entry {x:?}"))
        })
        .collect()
}

fn emit(run: Value, payload: Value, started: Instant) {
    let env = envelope::envelope(run, payload, started.elapsed().as_secs_f64() * 1e3);
    print!("{}", render(&env));
}

fn report_value(report: &colorcode::colex::LatticeReport) -> Value {
    serde_json::to_value(report).expect("report serializes")
}

fn run(command: Command) -> Result<u8> {
    let started = Instant::now();
    match command {
        Command::Colex(cmd) => run_colex(cmd, started),
        Command::Code(cmd) => run_code(cmd, started),
        Command::Spin(cmd) => run_spin(cmd, started),
        Command::Verify(cmd) => run_verify(cmd, started),
        Command::Mqc(cmd) => run_mqc(cmd, started),
        Command::Cluster(cmd) => run_cluster(cmd, started),
        Command::Goldens { out_dir } => {
            let files = goldens::emit_goldens(&out_dir)?;
            let names: Vec<String> = files
                .iter()
                .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
                .collect();
            emit(
                json!({"command": "goldens", "out_dir": out_dir.display().to_string()}),
                json!({"files": names}),
                started,
            );
            Ok(0)
        }
    }
}

fn run_colex(cmd: ColexCmd, started: Instant) -> Result<u8> {
    match cmd {
        ColexCmd::Gen {
            family,
            rows,
            cols,
            out,
        } => {
            let (name, colex) = match family {
                Family::Hex => ("hex", build_hex_torus(rows, cols)?),
                Family::Four8 => ("four8", build_48_torus(rows, cols)?),
            };
            std::fs::write(&out, write_colex_json(&colex))
                .with_context(|| format!("cannot write {}", out.display()))?;
            let report = validate(&colex);
            emit(
                json!({
                    "command": "colex gen",
                    "family": name,
                    "rows": rows,
                    "cols": cols,
                    "out": out.display().to_string(),
                }),
                json!({
                    "edges": colex.edge_count(),
                    "euler_characteristic": colex.euler_characteristic(),
                    "faces": colex.face_count(),
                    "valid": report.all_pass(),
                    "vertices": colex.vertex_count(),
                }),
                started,
            );
            Ok(0)
        }
        ColexCmd::Dual { input, out } => {
            let colex = match load_any(&input)? {
                AnyLattice::Colex(c) => c,
                AnyLattice::Dual(_) => bail!("input is already a dual triangulation"),
            };
            let dual = build_dual(&colex)?;
            std::fs::write(&out, write_dual_json(&dual))
                .with_context(|| format!("cannot write {}", out.display()))?;
            emit(
                json!({
                    "command": "colex dual",
                    "in": input.display().to_string(),
                    "out": out.display().to_string(),
                }),
                json!({
                    "bordered": dual.is_bordered(),
                    "sites": dual.site_count(),
                    "triangles": dual.triangle_count(),
                }),
                started,
            );
            Ok(0)
        }
        ColexCmd::Border { input, out } => {
            let dual = match load_any(&input)? {
                AnyLattice::Dual(d) => d,
                AnyLattice::Colex(_) => bail!("border construction expects a dual patch file"),
            };
            let colex = build_bordered(&dual)?;
            std::fs::write(&out, write_colex_json(&colex))
                .with_context(|| format!("cannot write {}", out.display()))?;
            let partial = colex.faces().iter().filter(|f| f.partial).count();
            emit(
                json!({
                    "command": "colex border",
                    "in": input.display().to_string(),
                    "out": out.display().to_string(),
                }),
                json!({
                    "complete_faces": colex.face_count() - partial,
                    "partial_faces": partial,
                    "vertices": colex.vertex_count(),
                }),
                started,
            );
            Ok(0)
        }
        ColexCmd::Validate { input } => {
            let report = match load_any(&input)? {
                AnyLattice::Colex(c) => validate(&c),
                AnyLattice::Dual(d) => validate_dual(&d),
            };
            let pass = report.all_pass();
            emit(
                json!({"command": "colex validate", "in": input.display().to_string()}),
                report_value(&report),
                started,
            );
            Ok(if pass { 0 } else { 2 })
        }
    }
}

fn run_code(cmd: CodeCmd, started: Instant) -> Result<u8> {
    match cmd {
        CodeCmd::Info { input } => {
            let colex = load_colex(&input)?;
            let set = stabilizer_set(&colex)?;
            let k = encoded_qubits(&colex)?;
            let chi = colex.euler_characteristic();
            emit(
                json!({"command": "code info", "in": input.display().to_string()}),
                json!({
                    "chi": chi,
                    "generators": set.len(),
                    "h1": if colex.is_closed() { Value::from(2 - chi) } else { Value::Null },
                    "k": k,
                    "n": colex.vertex_count(),
                    "rank": set.rank(),
                }),
                started,
            );
            Ok(0)
        }
        CodeCmd::State { input, out } => {
            let colex = load_colex(&input)?;
            let state = code_state::<f64>(&colex)?;
            std::fs::write(&out, formats::state_to_bytes(&state))
                .with_context(|| format!("cannot write {}", out.display()))?;
            emit(
                json!({
                    "command": "code state",
                    "in": input.display().to_string(),
                    "out": out.display().to_string(),
                }),
                json!({
                    "nonzero": state.nonzero_count(),
                    "norm_sqr": state.norm_sqr(),
                    "qubits": state.nqubits(),
                }),
                started,
            );
            Ok(0)
        }
        CodeCmd::Overlap { input, coeffs } => {
            let colex = load_colex(&input)?;
            let phi = formats::parse_product_state(&read_file(&coeffs)?, colex.vertex_count())?;
            let state = code_state::<f64>(&colex)?;
            let dense = overlap(&state, &phi)?;
            let nets = string_net_overlap(&colex, &phi).ok();
            let agreement = nets.map(|n| {
                let denom = dense.norm().max(n.norm()).max(1e-300);
                (dense - n).norm() / denom
            });
            emit(
                json!({
                    "command": "code overlap",
                    "coeffs": coeffs.display().to_string(),
                    "in": input.display().to_string(),
                }),
                json!({
                    "net_route": nets.map(complex_value),
                    "net_route_rel_err": agreement,
                    "overlap": complex_value(dense),
                }),
                started,
            );
            Ok(0)
        }
    }
}

fn run_spin(cmd: SpinCmd, started: Instant) -> Result<u8> {
    match cmd {
        SpinCmd::Z {
            lattice,
            couplings,
            method,
        } => {
            let dual = load_dual(&lattice)?;
            let set = formats::parse_couplings(&read_file(&couplings)?, &dual)?;
            let z = match method.as_str() {
                "exact" => partition_exact(&dual, &set)?,
                "hight" => partition_high_t(&dual, &set)?,
                other => bail!("unknown method {other:?}; use exact or hight"),
            };
            emit(
                json!({
                    "command": "spin z",
                    "couplings": couplings.display().to_string(),
                    "lattice": lattice.display().to_string(),
                    "method": method,
                }),
                json!({
                    "sites": dual.site_count(),
                    "triangles": dual.triangle_count(),
                    "z": complex_value(z),
                }),
                started,
            );
            Ok(0)
        }
        SpinCmd::Ground { lattice, sign } => {
            let dual = load_dual(&lattice)?;
            let sign = Sign::parse(&sign)?;
            let states = ground_states(&dual, sign)?;
            let rendered: Vec<String> = states
                .iter()
                .map(|s| {
                    (0..s.len())
                        .map(|i| if s.spin(i) > 0 { '+' } else { '-' })
                        .collect()
                })
                .collect();
            emit(
                json!({
                    "command": "spin ground",
                    "lattice": lattice.display().to_string(),
                    "sign": format!("{sign:?}"),
                }),
                json!({
                    "count": states.len(),
                    "configs": rendered,
                    "sites": dual.site_count(),
                }),
                started,
            );
            Ok(0)
        }
        SpinCmd::Critical {
            family,
            widths,
            out,
        } => {
            if family != "tri" {
                bail!("only the triangular family has a transfer matrix here");
            }
            let widths: Vec<usize> = parse_list(&widths, "width")?;
            let mut csv = String::from("width,betaJ,free_energy,specific_heat\n");
            for &w in &widths {
                let steps = 30usize;
                for i in 0..=steps {
                    let k = 0.2 + 0.6 * i as f64 / steps as f64;
                    let f = transfer_matrix_free_energy(w, k)?;
                    let c = specific_heat(w, k)?;
                    csv.push_str(&format!(
                        "{w},{},{},{}\n",
                        format_float(k),
                        format_float(f),
                        format_float(c)
                    ));
                }
            }
            std::fs::write(&out, csv)
                .with_context(|| format!("cannot write {}", out.display()))?;
            let report = criticality_scan(&widths)?;
            emit(
                json!({
                    "command": "spin critical",
                    "family": family,
                    "out": out.display().to_string(),
                    "widths": widths,
                }),
                serde_json::to_value(&report)?,
                started,
            );
            Ok(0)
        }
    }
}

fn run_verify(cmd: VerifyCmd, started: Instant) -> Result<u8> {
    match cmd {
        VerifyCmd::Overlap {
            lattice,
            beta_j,
            tol,
        } => {
            let (colex, dual) = load_pair(&lattice)?;
            let values: Vec<f64> = parse_list(&beta_j, "betaJ")?;
            let mut rows = Vec::new();
            let mut worst = 0.0f64;
            for &bj in &values {
                let check = verify_overlap_identity(&colex, &dual, bj)?;
                worst = worst.max(check.rel_err);
                rows.push(json!({
                    "betaJ": bj,
                    "partition": complex_value(check.partition),
                    "rel_err": check.rel_err,
                    "scaled_overlap": complex_value(check.scaled_overlap),
                }));
            }
            let pass = worst <= tol;
            emit(
                json!({
                    "betaJ": values,
                    "command": "verify overlap",
                    "lattice": lattice.display().to_string(),
                    "tol": tol,
                }),
                json!({
                    "checks": rows,
                    "max_rel_err": worst,
                    "pass": pass,
                    "sites": dual.site_count(),
                }),
                started,
            );
            Ok(if pass { 0 } else { 2 })
        }
        VerifyCmd::Field {
            lattice,
            fields,
            tol,
        } => {
            let (colex, dual) = load_pair(&lattice)?;
            let graph = build_cluster_graph(&colex);
            let spec = formats::parse_fields(&read_file(&fields)?, &graph)?;
            let check = verify_field_identity(&colex, &dual, &spec)?;
            let pass = check.rel_err <= tol;
            emit(
                json!({
                    "command": "verify field",
                    "fields": fields.display().to_string(),
                    "lattice": lattice.display().to_string(),
                    "tol": tol,
                }),
                json!({
                    "partition": complex_value(check.partition),
                    "pass": pass,
                    "rel_err": check.rel_err,
                    "scaled_overlap": complex_value(check.scaled_overlap),
                }),
                started,
            );
            Ok(if pass { 0 } else { 2 })
        }
    }
}

fn run_mqc(cmd: MqcCmd, started: Instant) -> Result<u8> {
    match cmd {
        MqcCmd::Joint {
            lattice,
            basis,
            out,
        } => {
            let colex = load_colex(&lattice)?;
            let n = colex.vertex_count();
            let b = formats::parse_basis(&basis, n)?;
            let probs = mqc_joint(&colex, &b)?;
            if let Some(path) = &out {
                let mut csv = String::from("outcome_bits,probability\n");
                for (m, p) in probs.iter().enumerate() {
                    let bits: String = (0..n)
                        .map(|v| if (m >> v) & 1 == 1 { '1' } else { '0' })
                        .collect();
                    csv.push_str(&format!("{bits},{}\n", format_float(*p)));
                }
                std::fs::write(path, csv)
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            let total: f64 = probs.iter().sum();
            let table = if n <= 12 {
                Value::from(probs.clone())
            } else {
                Value::Null
            };
            emit(
                json!({
                    "basis": basis,
                    "command": "mqc joint",
                    "lattice": lattice.display().to_string(),
                    "out": out.as_ref().map(|p| p.display().to_string()),
                }),
                json!({
                    "outcomes": probs.len(),
                    "qubits": n,
                    "table": table,
                    "total": total,
                }),
                started,
            );
            Ok(0)
        }
        MqcCmd::Sample {
            lattice,
            basis,
            n_samples,
            seed,
            out,
        } => {
            let colex = load_colex(&lattice)?;
            let n = colex.vertex_count();
            let b = formats::parse_basis(&basis, n)?;
            let order: Vec<usize> = (0..n).collect();
            let records = mqc_sample(&colex, &b, &order, seed, n_samples)?;
            let mut csv = String::from("sample_index,outcome_bits,probability\n");
            for (i, rec) in records.iter().enumerate() {
                csv.push_str(&format!(
                    "{i},{},{}\n",
                    rec.outcome.bitstring(),
                    format_float(rec.probability)
                ));
            }
            std::fs::write(&out, csv)
                .with_context(|| format!("cannot write {}", out.display()))?;
            let distinct: std::collections::BTreeSet<usize> =
                records.iter().map(|r| r.outcome.bits()).collect();
            emit(
                json!({
                    "basis": basis,
                    "command": "mqc sample",
                    "lattice": lattice.display().to_string(),
                    "n_samples": n_samples,
                    "out": out.display().to_string(),
                    "seed": seed,
                }),
                json!({
                    "distinct_outcomes": distinct.len(),
                    "qubits": n,
                    "samples": records.len(),
                }),
                started,
            );
            Ok(0)
        }
    }
}

fn run_cluster(cmd: ClusterCmd, started: Instant) -> Result<u8> {
    match cmd {
        ClusterCmd::State { lattice, out } => {
            let colex = load_colex(&lattice)?;
            let graph = build_cluster_graph(&colex);
            let state = cluster_state::<f64>(&graph)?;
            std::fs::write(&out, formats::state_to_bytes(&state))
                .with_context(|| format!("cannot write {}", out.display()))?;
            emit(
                json!({
                    "command": "cluster state",
                    "lattice": lattice.display().to_string(),
                    "out": out.display().to_string(),
                }),
                json!({
                    "edges": graph.edge_count(),
                    "face_qubits": graph.u2_count(),
                    "nonzero": state.nonzero_count(),
                    "qubits": graph.qubit_count(),
                    "vertex_qubits": graph.u1_count(),
                }),
                started,
            );
            Ok(0)
        }
        ClusterCmd::Project { lattice, x, out } => {
            let colex = load_colex(&lattice)?;
            let graph = build_cluster_graph(&colex);
            if x.len() != graph.u2_count() {
                bail!(
                    "outcome string has {} bits, lattice has {} faces",
                    x.len(),
                    graph.u2_count()
                );
            }
            let outcomes: Vec<bool> = x
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => bail!("outcome string must be 0/1, found {other:?}"),
                })
                .collect::<Result<_>>()?;
            let state = cluster_state::<f64>(&graph)?;
            let projected = project_faces(&state, &outcomes, &graph)?;
            if let Some(path) = &out {
                std::fs::write(path, formats::state_to_bytes(&projected))
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            emit(
                json!({
                    "command": "cluster project",
                    "lattice": lattice.display().to_string(),
                    "out": out.as_ref().map(|p| p.display().to_string()),
                    "x": x,
                }),
                json!({
                    "nonzero": projected.nonzero_count(),
                    "norm_sqr": projected.norm_sqr(),
                    "qubits": projected.nqubits(),
                }),
                started,
            );
            Ok(0)
        }
    }
}
