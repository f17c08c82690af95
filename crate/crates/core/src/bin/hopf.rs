//! Batch CLI: classification, normalization, charts, Picard and automorphism
//! queries, and the seeded verification harness. Payloads are JSON (via
//! `--in PATH` or stdin), reports are JSON (stdout or `--json-out PATH`).
//!
//! Exit codes: 0 success / all properties pass, 1 validation error,
//! 2 property failure (the report carries a counterexample).

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::json;

use hopf_core::autgroup;
use hopf_core::contraction::{classify, Contraction};
use hopf_core::cx;
use hopf_core::error::Error;
use hopf_core::flows;
use hopf_core::picard;
use hopf_core::polymap::PolyMap;
use hopf_core::realstruct::{self, Parity, RealStructureSpec};
use hopf_core::sampling;
use hopf_core::topology;
use hopf_core::verify;

#[derive(Parser)]
#[command(
    name = "hopf",
    about = "Real structures on primary Hopf surfaces",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct IoArgs {
    /// Input payload path (defaults to stdin)
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Report path (defaults to stdout)
    #[arg(long = "json-out")]
    json_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Detect the Wehler class of a polynomial contraction
    Classify {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Which Real structures exist on H_f
    Existence {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Normalize a Real-structure lift to its canonical model
    Normalize {
        #[command(flatten)]
        io: IoArgs,
        /// Residual tolerance for the conjugation identity
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Evaluate the 1-parameter flow f^t
    Flow {
        #[command(flatten)]
        io: IoArgs,
    },
    /// The k-th root f^{1/k}
    Root {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Build (and optionally verify) the equivariant model chart
    Chart {
        #[command(flatten)]
        io: IoArgs,
        /// Verify equivariance on this many seeded sample points
        #[arg(long)]
        samples: Option<usize>,
        /// RNG seed for the verification samples
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Equivariance tolerance
        #[arg(long)]
        tol: Option<f64>,
    },
    /// The real locus H^s
    Locus {
        #[command(flatten)]
        io: IoArgs,
    },
    /// The quotient `H / <s>`
    Quotient {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Picard-group queries
    Picard {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Automorphism-group queries
    Aut {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Run a seeded verification suite
    Verify {
        /// polymap | contractions | flows | realstruct | topology | picard | autgroup | all
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override each property's default sample count
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long = "json-out")]
        json_out: Option<PathBuf>,
    },
}

// --------------------------------------------------------------------------
// payload schemas

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassifyPayload {
    map: PolyMap,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ContractionPayload {
    contraction: Contraction,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NormalizePayload {
    contraction: Contraction,
    lift: PolyMap,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FlowPayload {
    contraction: Contraction,
    t: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RootPayload {
    contraction: Contraction,
    k: u32,
}

/// Either a parity (canonical structure) or an explicit lift.
#[derive(Deserialize)]
#[serde(untagged)]
enum StructureSelector {
    Canonical { parity: Parity },
    Lift { lift: PolyMap },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StructurePayload {
    contraction: Contraction,
    structure: StructureSelector,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuotientPayload {
    contraction: Contraction,
    structure: StructureSelector,
    /// Optional point of the V_- plane to push through beta
    beta: Option<[f64; 2]>,
}

#[derive(Deserialize)]
#[serde(tag = "query", rename_all = "snake_case", deny_unknown_fields)]
enum PicardPayload {
    Involution {
        #[serde(with = "cx::pair")]
        zeta: Complex64,
    },
    LineBundle {
        parity: Parity,
        #[serde(with = "cx::pair")]
        zeta: Complex64,
    },
    Group {
        parity: Parity,
    },
    Verify {
        contraction: Contraction,
        structure: StructureSelector,
        zeta: f64,
        #[serde(with = "cx::pair")]
        nu: Complex64,
    },
}

#[derive(Deserialize)]
#[serde(tag = "query", rename_all = "snake_case", deny_unknown_fields)]
enum AutPayload {
    Group {
        contraction: Contraction,
        structure: StructureSelector,
    },
    CanonicalRep {
        contraction: Contraction,
        element: PolyMap,
    },
    Membership {
        contraction: Contraction,
        element: PolyMap,
    },
    Spinc {
        matrix: [[f64; 2]; 4],
        #[serde(default)]
        contraction: Option<Contraction>,
    },
    AhFamily {
        contraction: Contraction,
    },
}

// --------------------------------------------------------------------------

fn resolve_structure(f: &Contraction, sel: StructureSelector) -> Result<RealStructureSpec, Error> {
    match sel {
        StructureSelector::Canonical { parity } => realstruct::canonical_structure(f, parity),
        StructureSelector::Lift { lift } => {
            let (_, spec) = realstruct::normalize_any(f, &lift)?;
            Ok(spec)
        }
    }
}

fn read_input(io: &IoArgs) -> Result<String, String> {
    match &io.input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display())),
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| format!("cannot read stdin: {e}"))?;
            Ok(buf)
        }
    }
}

/// Parses a payload, reporting schema violations with JSON-pointer paths.
fn parse_payload<T: serde::de::DeserializeOwned>(raw: &str) -> Result<T, serde_json::Value> {
    let de = &mut serde_json::Deserializer::from_str(raw);
    serde_path_to_error::deserialize(de).map_err(|e| {
        json!({
            "error": {
                "kind": "schema",
                "path": format!("/{}", e.path().to_string().replace('.', "/")),
                "message": e.inner().to_string(),
            }
        })
    })
}

fn emit(io_out: &Option<PathBuf>, report: &serde_json::Value) -> Result<(), String> {
    let text = serde_json::to_string_pretty(report).expect("report serializes") + "\n";
    match io_out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write report: {e}")),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn error_report(err: &Error) -> serde_json::Value {
    json!({ "error": { "kind": "operation", "message": err.to_string() } })
}

enum Outcome {
    Ok(serde_json::Value),
    Invalid(serde_json::Value),
    PropertyFailure(serde_json::Value),
}

macro_rules! try_payload {
    ($io:expr, $ty:ty) => {
        match read_input($io) {
            Ok(raw) => match parse_payload::<$ty>(&raw) {
                Ok(p) => p,
                Err(e) => return Outcome::Invalid(e),
            },
            Err(msg) => {
                return Outcome::Invalid(json!({ "error": { "kind": "io", "message": msg } }))
            }
        }
    };
}

fn classify_cmd(io: &IoArgs) -> Outcome {
    let payload = try_payload!(io, ClassifyPayload);
    match classify(&payload.map) {
        Ok(f) => {
            let flags = f.structural_flags();
            Outcome::Ok(json!({ "contraction": f, "flags": flags }))
        }
        Err(e) => Outcome::Invalid(error_report(&e)),
    }
}

fn existence_cmd(io: &IoArgs) -> Outcome {
    let payload = try_payload!(io, ContractionPayload);
    let flags = realstruct::existence(&payload.contraction);
    Outcome::Ok(json!({ "existence": flags }))
}

fn normalize_cmd(io: &IoArgs, tol: Option<f64>) -> Outcome {
    let payload = try_payload!(io, NormalizePayload);
    let f = payload.contraction;
    let tol = tol.unwrap_or(realstruct::NORMALIZE_TOL);
    match realstruct::normalize_any(&f, &payload.lift) {
        Ok((psi, spec)) => {
            let canonical = realstruct::canonical_structure(&f, spec.parity)
                .expect("canonical structure exists when normalization succeeded");
            // residual of psi o s0 o psi^{-1} against the deck-reduced lift
            let reduced = f
                .polymap()
                .power(-spec.deck_power.div_euclid(2))
                .and_then(|m| m.compose(&payload.lift));
            let residual = match (reduced, psi.invert()) {
                (Ok(reduced), Ok(psi_inv)) => psi
                    .compose(&canonical.lift)
                    .and_then(|m| m.compose(&psi_inv))
                    .map(|m| m.relative_difference(&reduced))
                    .unwrap_or(f64::INFINITY),
                _ => f64::INFINITY,
            };
            let report = json!({
                "psi": psi,
                "structure": {
                    "parity": spec.parity,
                    "deck_power": spec.deck_power,
                    "model": spec.model,
                },
                "residual": residual,
                "tolerance": tol,
            });
            if residual <= tol {
                Outcome::Ok(report)
            } else {
                Outcome::PropertyFailure(report)
            }
        }
        Err(e) => Outcome::Invalid(error_report(&e)),
    }
}

fn flow_cmd(io: &IoArgs) -> Outcome {
    let payload = try_payload!(io, FlowPayload);
    if payload.t.abs() > 64.0 {
        eprintln!(
            "warning: |t| = {} is large; flow coefficients may overflow the f64 range",
            payload.t.abs()
        );
    }
    match flows::flow(&payload.contraction, payload.t) {
        Ok(m) => Outcome::Ok(json!({ "map": m })),
        Err(e) => Outcome::Invalid(error_report(&e)),
    }
}

fn root_cmd(io: &IoArgs) -> Outcome {
    let payload = try_payload!(io, RootPayload);
    match flows::kth_root(&payload.contraction, payload.k) {
        Ok(m) => Outcome::Ok(json!({ "map": m })),
        Err(e) => Outcome::Invalid(error_report(&e)),
    }
}

fn chart_cmd(io: &IoArgs, samples: Option<usize>, seed: u64, tol: Option<f64>) -> Outcome {
    let payload = try_payload!(io, StructurePayload);
    let f = payload.contraction;
    let s = match resolve_structure(&f, payload.structure) {
        Ok(s) => s,
        Err(e) => return Outcome::Invalid(error_report(&e)),
    };
    let chart = match topology::build_chart(&f, &s) {
        Ok(c) => c,
        Err(e) => return Outcome::Invalid(error_report(&e)),
    };
    let tol = tol.unwrap_or(topology::CHART_TOL);
    let mut report = json!({
        "model": chart.model,
        "route": chart.route,
        "forward": chart.forward,
        "backward": chart.backward,
    });
    if let Some(n) = samples {
        let mut rng = sampling::rng_from_seed(seed);
        let points: Vec<_> = (0..n).map(|_| sampling::w_point(&mut rng)).collect();
        match topology::chart_equivariance_residual(&s, &chart, &points) {
            Ok(residual) => {
                report["verification"] = json!({
                    "property": "chart_equivariance",
                    "samples": n,
                    "seed": seed,
                    "max_residual": residual,
                    "tolerance": tol,
                    "pass": residual <= tol,
                });
                if residual > tol {
                    return Outcome::PropertyFailure(report);
                }
            }
            Err(e) => return Outcome::Invalid(error_report(&e)),
        }
    }
    Outcome::Ok(report)
}

fn locus_cmd(io: &IoArgs) -> Outcome {
    let payload = try_payload!(io, StructurePayload);
    let f = payload.contraction;
    match resolve_structure(&f, payload.structure) {
        Ok(s) => {
            let locus = topology::real_locus(&f, &s);
            Outcome::Ok(json!({
                "locus": locus.kind,
                "elliptic_parameter": locus.elliptic_parameter.map(|a| [a.re, a.im]),
            }))
        }
        Err(e) => Outcome::Invalid(error_report(&e)),
    }
}

fn quotient_cmd(io: &IoArgs) -> Outcome {
    let payload = try_payload!(io, QuotientPayload);
    let f = payload.contraction;
    match resolve_structure(&f, payload.structure) {
        Ok(s) => {
            let q = topology::quotient_descriptor(&f, &s);
            let mut report = json!({ "quotient": q });
            if let Some([x, y]) = payload.beta {
                let (bx, by) = topology::beta(x, y);
                report["beta"] = json!([bx, by]);
            }
            Outcome::Ok(report)
        }
        Err(e) => Outcome::Invalid(error_report(&e)),
    }
}

fn picard_cmd(io: &IoArgs, seed: u64, samples: Option<usize>) -> Outcome {
    let payload = try_payload!(io, PicardPayload);
    match payload {
        PicardPayload::Involution { zeta } => match picard::pic_involution(zeta) {
            Ok(out) => Outcome::Ok(json!({ "zeta_bar": [out.re, out.im] })),
            Err(e) => Outcome::Invalid(error_report(&e)),
        },
        PicardPayload::LineBundle { parity, zeta } => {
            match picard::real_structures_on_line_bundle(parity, zeta) {
                Ok(datum) => Outcome::Ok(json!({ "datum": datum })),
                Err(e) => Outcome::Invalid(error_report(&e)),
            }
        }
        PicardPayload::Group { parity } => {
            Outcome::Ok(json!({ "group": picard::pic_real_group(parity) }))
        }
        PicardPayload::Verify {
            contraction,
            structure,
            zeta,
            nu,
        } => {
            let s = match resolve_structure(&contraction, structure) {
                Ok(s) => s,
                Err(e) => return Outcome::Invalid(error_report(&e)),
            };
            let mut rng = sampling::rng_from_seed(seed);
            let n = samples.unwrap_or(16);
            match picard::verify_bundle_involution(&contraction, &s, zeta, nu, n, &mut rng) {
                Ok(involutive) => Outcome::Ok(json!({
                    "involutive": involutive,
                    "samples": n,
                    "seed": seed,
                })),
                Err(e) => Outcome::Invalid(error_report(&e)),
            }
        }
    }
}

fn aut_cmd(io: &IoArgs) -> Outcome {
    let payload = try_payload!(io, AutPayload);
    match payload {
        AutPayload::Group {
            contraction,
            structure,
        } => {
            let s = match resolve_structure(&contraction, structure) {
                Ok(s) => s,
                Err(e) => return Outcome::Invalid(error_report(&e)),
            };
            match autgroup::real_automorphism_group(&contraction, &s) {
                Ok(d) => Outcome::Ok(json!({ "group": d })),
                Err(e) => Outcome::Invalid(error_report(&e)),
            }
        }
        AutPayload::CanonicalRep {
            contraction,
            element,
        } => {
            let result = autgroup::commutant_element(&contraction, &element)
                .and_then(|g| autgroup::canonical_rep(&contraction, &g));
            match result {
                Ok(rep) => Outcome::Ok(json!({ "canonical": rep })),
                Err(e) => Outcome::Invalid(error_report(&e)),
            }
        }
        AutPayload::Membership {
            contraction,
            element,
        } => {
            let result = autgroup::commutant_element(&contraction, &element)
                .and_then(|g| autgroup::membership_even(&contraction, &g));
            match result {
                Ok(member) => Outcome::Ok(json!({ "member": member })),
                Err(e) => Outcome::Invalid(error_report(&e)),
            }
        }
        AutPayload::Spinc {
            matrix,
            contraction,
        } => {
            let m = [
                Complex64::new(matrix[0][0], matrix[0][1]),
                Complex64::new(matrix[1][0], matrix[1][1]),
                Complex64::new(matrix[2][0], matrix[2][1]),
                Complex64::new(matrix[3][0], matrix[3][1]),
            ];
            match autgroup::spinc_witness(&m) {
                Ok((rho, su2)) => {
                    let mut report = json!({
                        "circle_part": rho,
                        "su2_part": su2.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>(),
                    });
                    if let Some(Contraction::Iv { alpha }) = contraction {
                        let coord = autgroup::spinc_circle_coordinate(rho, alpha);
                        report["circle_coordinate"] = json!([coord.re, coord.im]);
                    }
                    Outcome::Ok(report)
                }
                Err(e) => Outcome::Invalid(error_report(&e)),
            }
        }
        AutPayload::AhFamily { contraction } => {
            match realstruct::list_antiholomorphic_family(&contraction) {
                Ok(fam) => Outcome::Ok(json!({ "family": fam })),
                Err(e) => Outcome::Invalid(error_report(&e)),
            }
        }
    }
}

fn verify_cmd(suite: &str, seed: u64, samples: Option<usize>) -> Outcome {
    let opts = verify::Options { seed, samples };
    match verify::run_suite(suite, &opts) {
        Ok(report) => {
            let value = serde_json::to_value(&report).expect("report serializes");
            if report.pass {
                Outcome::Ok(value)
            } else {
                Outcome::PropertyFailure(value)
            }
        }
        Err(e) => Outcome::Invalid(error_report(&e)),
    }
}

fn run_command(cmd: &Cmd) -> (Option<PathBuf>, Outcome) {
    match cmd {
        Cmd::Classify { io } => (io.json_out.clone(), classify_cmd(io)),
        Cmd::Existence { io } => (io.json_out.clone(), existence_cmd(io)),
        Cmd::Normalize { io, tol } => (io.json_out.clone(), normalize_cmd(io, *tol)),
        Cmd::Flow { io } => (io.json_out.clone(), flow_cmd(io)),
        Cmd::Root { io } => (io.json_out.clone(), root_cmd(io)),
        Cmd::Chart {
            io,
            samples,
            seed,
            tol,
        } => (io.json_out.clone(), chart_cmd(io, *samples, *seed, *tol)),
        Cmd::Locus { io } => (io.json_out.clone(), locus_cmd(io)),
        Cmd::Quotient { io } => (io.json_out.clone(), quotient_cmd(io)),
        Cmd::Picard { io, seed, samples } => (io.json_out.clone(), picard_cmd(io, *seed, *samples)),
        Cmd::Aut { io } => (io.json_out.clone(), aut_cmd(io)),
        Cmd::Verify {
            suite,
            seed,
            samples,
            json_out,
        } => (json_out.clone(), verify_cmd(suite, *seed, *samples)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out_path, outcome) = run_command(&cli.cmd);
    let (report, code) = match outcome {
        Outcome::Ok(r) => (r, ExitCode::SUCCESS),
        Outcome::Invalid(r) => (r, ExitCode::from(1)),
        Outcome::PropertyFailure(r) => (r, ExitCode::from(2)),
    };
    if let Err(msg) = emit(&out_path, &report) {
        eprintln!("{msg}");
        return ExitCode::from(1);
    }
    code
}
