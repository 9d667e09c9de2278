//! `hpsig`: validate simplicial Poincare duality data and compute signature
//! invariants. Every command prints a single JSON report to stdout.
//! Exit codes: 0 success, 1 domain error (with a machine-readable error
//! object), 2 I/O or usage error.

use clap::{Args, Parser, Subcommand};
use hpsig_core::coeff::{CharacterFamily, IntVecCocycle};
use hpsig_core::covers::CoverComplex;
use hpsig_core::io::{
    build_cover_from_files, cocycle_as_vectors, CocycleFile, ComplexFile, GroupFile,
};
use hpsig_core::poincare::{hp_complex_certified, validate_hp, AxiomReport};
use hpsig_core::signature::{
    bordism_check, cup_oracle_signature, multisignature, multisignature_consistency,
    signature_complex,
};
use hpsig_core::simplicial::{orientation_reverse, OrientedSimplicialComplex};
use hpsig_core::{Error, ScalarMode};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "hpsig", version, about = "simplicial signature toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Args)]
struct CoverArgs {
    /// Flat edge cocycle file (list of [v, w, value])
    #[arg(long)]
    cover: Option<PathBuf>,
    /// Group file (elements, table, optional irreps)
    #[arg(long)]
    group: Option<PathBuf>,
}

#[derive(Clone, Args)]
struct ModeArg {
    /// Scalar mode: exact | cyclotomic | float (default: chosen per input)
    #[arg(long)]
    mode: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the duality axioms on a complex (optionally twisted by a cover)
    Validate {
        complex: PathBuf,
        #[command(flatten)]
        cover: CoverArgs,
        #[command(flatten)]
        mode: ModeArg,
    },
    /// Signature of a closed oriented complex; with a cover, the
    /// multi-signature
    Signature {
        complex: PathBuf,
        #[command(flatten)]
        cover: CoverArgs,
        #[command(flatten)]
        mode: ModeArg,
        /// Also run the cup-product oracle (dimension 4k only)
        #[arg(long)]
        oracle: bool,
        /// Compute with the reversed orientation
        #[arg(long)]
        reverse: bool,
    },
    /// Per-irrep signatures of a cover, with the trace and the total-space
    /// consistency identity when the group is small
    Multisig {
        complex: PathBuf,
        #[arg(long)]
        cover: PathBuf,
        #[arg(long)]
        group: PathBuf,
        #[command(flatten)]
        mode: ModeArg,
    },
    /// Evaluate twisted boundary matrices of a Z^n cover over the character
    /// torus: per-sample homology ranks and signatures
    Family {
        complex: PathBuf,
        #[arg(long)]
        cover: PathBuf,
        #[arg(long, default_value_t = 64)]
        samples_per_circle: usize,
        /// Also write the rows as CSV to this path
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Signature of a staircase product against the product formula
    Product {
        left: PathBuf,
        right: PathBuf,
        /// Allow large products (computed by the sparse middle-degree path)
        #[arg(long)]
        stretch: bool,
    },
    /// Barycentric subdivision; writes the subdivided complex when --out is
    /// given and can re-check the signature
    Subdivide {
        complex: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        check_signature: bool,
    },
    /// Double a complex with boundary along its boundary
    Double {
        complex: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Signature of the induced boundary (bordism vanishing)
    Bordism {
        complex: PathBuf,
        #[command(flatten)]
        cover: CoverArgs,
        #[command(flatten)]
        mode: ModeArg,
    },
    /// Run the controlled-operator property suite
    ControlledCheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(cli.command, started) {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(err)) => {
            let report = json!({
                "error": { "kind": err.kind(), "message": err.to_string() }
            });
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

enum Failure {
    Domain(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type CmdResult = Result<Value, Failure>;

fn read_file(path: &Path) -> Result<(String, String), Failure> {
    let bytes = std::fs::read(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    let hash = fnv1a(&bytes);
    let text = String::from_utf8(bytes)
        .map_err(|e| Failure::Io(format!("{} is not UTF-8: {e}", path.display())))?;
    Ok((text, hash))
}

fn fnv1a(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("fnv1a:{h:016x}")
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Io(format!("malformed {what}: {e}")))
}

fn load_complex(path: &Path, inputs: &mut Value) -> Result<OrientedSimplicialComplex, Failure> {
    let (text, hash) = read_file(path)?;
    inputs[path_key(path)] = json!({ "path": path.display().to_string(), "hash": hash });
    let file: ComplexFile = parse_json(&text, "complex file")?;
    Ok(file.to_complex()?)
}

fn path_key(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| path.display().to_string())
}

fn load_cover(
    complex_path: &Path,
    cover_path: &Path,
    group_path: &Path,
    inputs: &mut Value,
) -> Result<CoverComplex, Failure> {
    let (ctext, chash) = read_file(complex_path)?;
    let (gtext, ghash) = read_file(group_path)?;
    let (ytext, yhash) = read_file(cover_path)?;
    inputs[path_key(complex_path)] =
        json!({ "path": complex_path.display().to_string(), "hash": chash });
    inputs[path_key(group_path)] =
        json!({ "path": group_path.display().to_string(), "hash": ghash });
    inputs[path_key(cover_path)] =
        json!({ "path": cover_path.display().to_string(), "hash": yhash });
    let complex: ComplexFile = parse_json(&ctext, "complex file")?;
    let group: GroupFile = parse_json(&gtext, "group file")?;
    let cocycle: CocycleFile = parse_json(&ytext, "cocycle file")?;
    Ok(build_cover_from_files(&complex, &group, &cocycle)?)
}

/// Cyclotomic when every irrep is a character of order dividing 12, else
/// float.
fn auto_cover_mode(cover: &CoverComplex) -> ScalarMode {
    let all_cyclotomic = cover.group().irreps.iter().all(|r| match r {
        hpsig_core::group::Irrep::Character { order, .. } => 12 % order == 0,
        hpsig_core::group::Irrep::MatrixRep { .. } => false,
    });
    if all_cyclotomic {
        ScalarMode::Cyclotomic
    } else {
        ScalarMode::Float
    }
}

fn parse_mode(arg: &Option<String>, default: ScalarMode) -> Result<ScalarMode, Failure> {
    match arg {
        None => Ok(default),
        Some(s) => Ok(s.parse::<ScalarMode>()?),
    }
}

fn axiom_json(report: &AxiomReport) -> Value {
    json!({
        "axiom_i": report.axiom_i,
        "axiom_ii": report.axiom_ii,
        "axiom_iii": report.axiom_iii,
        "pass": report.all_pass(),
        "homology_ranks": report.homology_ranks,
    })
}

fn residual_json(report: &AxiomReport) -> Value {
    json!({
        "symmetry": report.symmetry_residual,
        "chain_relation": report.chain_relation_residual,
        "raw_chain_relation": report.raw_chain_relation_residual,
        "harmonic_min_ratio": report.harmonic_min_ratio,
    })
}

fn finish(
    command: &str,
    inputs: Value,
    mode: Option<ScalarMode>,
    seed: Option<u64>,
    results: Value,
    residuals: Value,
    started: Instant,
) -> Value {
    json!({
        "command": command,
        "inputs": inputs,
        "mode": mode.map(|m| m.to_string()),
        "seed": seed,
        "results": results,
        "residuals": residuals,
        "wall_time_ms": started.elapsed().as_millis() as u64,
    })
}

fn run(cmd: Command, started: Instant) -> CmdResult {
    match cmd {
        Command::Validate {
            complex,
            cover,
            mode,
        } => {
            let mut inputs = json!({});
            match (&cover.cover, &cover.group) {
                (Some(cpath), Some(gpath)) => {
                    let cov = load_cover(&complex, cpath, gpath, &mut inputs)?;
                    let m = parse_mode(&mode.mode, auto_cover_mode(&cov))?;
                    let cert = cov.base().certify_manifold();
                    let cycle = cert.fundamental_cycle.clone().ok_or(Error::NotClosedOriented(
                        "base is not a closed oriented manifold".into(),
                    ))?;
                    let report = validate_cover(&cov, &cycle, m)?;
                    let results = json!({
                        "certificate": certificate_json(&cert),
                        "per_irrep": report.iter().map(|(label, r)| {
                            json!({ "irrep": label, "axioms": axiom_json(r) })
                        }).collect::<Vec<_>>(),
                        "pass": report.iter().all(|(_, r)| r.all_pass()),
                    });
                    let worst = report
                        .iter()
                        .map(|(_, r)| residual_json(r))
                        .collect::<Vec<_>>();
                    Ok(finish(
                        "validate",
                        inputs,
                        Some(m),
                        None,
                        results,
                        json!(worst),
                        started,
                    ))
                }
                (None, None) => {
                    let k = load_complex(&complex, &mut inputs)?;
                    let m = parse_mode(&mode.mode, ScalarMode::Exact)?;
                    let cert = k.certify_manifold();
                    let report = match m {
                        ScalarMode::Exact => {
                            let (hp, _) = hp_complex_certified::<hpsig_core::Rational>(&k)?;
                            validate_hp(&hp, true)?
                        }
                        ScalarMode::Cyclotomic => {
                            let (hp, _) = hp_complex_certified::<hpsig_core::Cyclotomic>(&k)?;
                            validate_hp(&hp, true)?
                        }
                        ScalarMode::Float => {
                            let (hp, _) = hp_complex_certified::<hpsig_core::C64>(&k)?;
                            validate_hp(&hp, true)?
                        }
                    };
                    let results = json!({
                        "certificate": certificate_json(&cert),
                        "axioms": axiom_json(&report),
                    });
                    let residuals = residual_json(&report);
                    Ok(finish(
                        "validate",
                        inputs,
                        Some(m),
                        None,
                        results,
                        residuals,
                        started,
                    ))
                }
                _ => Err(Failure::Io(
                    "--cover and --group must be given together".into(),
                )),
            }
        }

        Command::Signature {
            complex,
            cover,
            mode,
            oracle,
            reverse,
        } => {
            let mut inputs = json!({});
            match (&cover.cover, &cover.group) {
                (Some(cpath), Some(gpath)) => {
                    let cov = load_cover(&complex, cpath, gpath, &mut inputs)?;
                    let m = parse_mode(&mode.mode, auto_cover_mode(&cov))?;
                    let ms = multisignature(&cov, m)?;
                    let results = json!({
                        "multisignature": ms.entries.iter().map(|e| {
                            json!({ "irrep": e.label, "dim": e.dim, "signature": e.signature })
                        }).collect::<Vec<_>>(),
                        "trace": ms.trace_value().to_string(),
                    });
                    Ok(finish(
                        "signature",
                        inputs,
                        Some(m),
                        None,
                        results,
                        json!({}),
                        started,
                    ))
                }
                (None, None) => {
                    let k = load_complex(&complex, &mut inputs)?;
                    let m = parse_mode(&mode.mode, ScalarMode::Exact)?;
                    let (hp, cycle) = hp_complex_certified::<hpsig_core::Rational>(&k)?;
                    let axioms = validate_hp(&hp, true)?;
                    let cycle = if reverse {
                        orientation_reverse(&cycle)
                    } else {
                        cycle
                    };
                    let out = match m {
                        ScalarMode::Exact => {
                            let hp = hpsig_core::poincare::hp_complex_untwisted::<
                                hpsig_core::Rational,
                            >(&k, &cycle)?;
                            signature_complex(&hp)?
                        }
                        ScalarMode::Cyclotomic => {
                            let hp = hpsig_core::poincare::hp_complex_untwisted::<
                                hpsig_core::Cyclotomic,
                            >(&k, &cycle)?;
                            signature_complex(&hp)?
                        }
                        ScalarMode::Float => {
                            let hp =
                                hpsig_core::poincare::hp_complex_untwisted::<hpsig_core::C64>(
                                    &k, &cycle,
                                )?;
                            signature_complex(&hp)?
                        }
                    };
                    let oracle_value = if oracle {
                        Some(cup_oracle_signature(&k, &cycle)?)
                    } else {
                        None
                    };
                    let results = json!({
                        "signature": out.signature,
                        "odd_dimension": out.odd_dimension,
                        "middle_rank": out.middle_rank,
                        "axioms": if axioms.all_pass() { "pass" } else { "fail" },
                        "cup_oracle": oracle_value,
                        "reversed": reverse,
                    });
                    Ok(finish(
                        "signature",
                        inputs,
                        Some(m),
                        None,
                        results,
                        residual_json(&axioms),
                        started,
                    ))
                }
                _ => Err(Failure::Io(
                    "--cover and --group must be given together".into(),
                )),
            }
        }

        Command::Multisig {
            complex,
            cover,
            group,
            mode,
        } => {
            let mut inputs = json!({});
            let cov = load_cover(&complex, &cover, &group, &mut inputs)?;
            let m = parse_mode(&mode.mode, auto_cover_mode(&cov))?;
            let ms = multisignature(&cov, m)?;
            let consistency = if cov.group().group.order() <= 4 {
                Some(multisignature_consistency(&cov, &ms)?)
            } else {
                None
            };
            let results = json!({
                "multisignature": ms.entries.iter().map(|e| {
                    json!({ "irrep": e.label, "dim": e.dim, "signature": e.signature })
                }).collect::<Vec<_>>(),
                "trace": ms.trace_value().to_string(),
                "group_order": ms.group_order,
                "total_space_consistency": consistency,
            });
            Ok(finish(
                "multisig",
                inputs,
                Some(m),
                None,
                results,
                json!({}),
                started,
            ))
        }

        Command::Family {
            complex,
            cover,
            samples_per_circle,
            csv,
        } => {
            let mut inputs = json!({});
            let k = load_complex(&complex, &mut inputs)?;
            let (ytext, yhash) = read_file(&cover)?;
            inputs[path_key(&cover)] =
                json!({ "path": cover.display().to_string(), "hash": yhash });
            let file: CocycleFile = parse_json(&ytext, "cocycle file")?;
            let entries = cocycle_as_vectors(&file)?;
            let rank = entries
                .first()
                .map(|(_, _, v)| v.len())
                .ok_or(Error::EmptyInput)?;
            let cocycle = IntVecCocycle::build(&k, rank, &entries)?;
            let family = CharacterFamily::uniform(rank, samples_per_circle);
            let samples = hpsig_core::coeff::evaluate_family(&k, &cocycle, &family)?;
            let mut csv_text = String::from("theta,ranks,signature\n");
            let rows: Vec<Value> = samples
                .iter()
                .map(|s| {
                    let theta: Vec<String> = s.theta.iter().map(|t| format!("{t:.6}")).collect();
                    let ranks: Vec<String> =
                        s.homology_ranks.iter().map(|r| r.to_string()).collect();
                    csv_text.push_str(&format!(
                        "{},{},{}\n",
                        theta.join(";"),
                        ranks.join(";"),
                        s.signature
                    ));
                    json!({
                        "theta": s.theta,
                        "homology_ranks": s.homology_ranks,
                        "signature": s.signature,
                    })
                })
                .collect();
            if let Some(path) = csv {
                std::fs::write(&path, &csv_text)
                    .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
            }
            let signatures: std::collections::BTreeSet<i64> =
                samples.iter().map(|s| s.signature).collect();
            let results = json!({
                "samples_per_circle": samples_per_circle,
                "rank": rank,
                "rows": rows,
                "distinct_signatures": signatures,
            });
            Ok(finish(
                "family",
                inputs,
                Some(ScalarMode::Float),
                None,
                results,
                json!({}),
                started,
            ))
        }

        Command::Product {
            left,
            right,
            stretch,
        } => {
            let mut inputs = json!({});
            let k = load_complex(&left, &mut inputs)?;
            let l = load_complex(&right, &mut inputs)?;
            let facets = k.facets().len()
                * l.facets().len()
                * hpsig_core::simplicial::binomial(k.dim() + l.dim(), k.dim());
            if facets > 20_000 && !stretch {
                return Err(Failure::Io(format!(
                    "product has {facets} facets; pass --stretch to run it"
                )));
            }
            let report = hpsig_core::products::verify_product_signature(&k, &l)?;
            let results = json!({
                "dim_left": report.dim_left,
                "dim_right": report.dim_right,
                "sig_left": report.sig_left,
                "sig_right": report.sig_right,
                "epsilon": report.epsilon,
                "product_dim": report.product_dim,
                "product_facets": report.product_facets,
                "sig_product": report.sig_product,
                "product_odd_dimensional": report.product_odd,
                "expected": report.expected,
                "matches": report.matches,
                "sparse_path": report.sparse_path,
            });
            Ok(finish(
                "product",
                inputs,
                Some(if report.sparse_path {
                    ScalarMode::Float
                } else {
                    ScalarMode::Exact
                }),
                None,
                results,
                json!({}),
                started,
            ))
        }

        Command::Subdivide {
            complex,
            out,
            check_signature,
        } => {
            let mut inputs = json!({});
            let k = load_complex(&complex, &mut inputs)?;
            let (sd, maps) = k.barycentric_subdivision();
            let mut results = json!({
                "f_vector": k.f_vector(),
                "subdivided_f_vector": sd.f_vector(),
                "euler_characteristic": sd.euler_characteristic(),
            });
            if check_signature {
                let cert = k.certify_manifold();
                let cycle = cert.fundamental_cycle.ok_or(Error::NotClosedOriented(
                    "signature check needs a closed oriented complex".into(),
                ))?;
                let sd_cycle = k.subdivide_cycle(&sd, &maps, &cycle)?;
                let before = hpsig_core::signature::signature_with_cycle(&k, &cycle)?;
                let after = hpsig_core::signature::signature_with_cycle(&sd, &sd_cycle)?;
                results["signature_before"] = json!(before.signature);
                results["signature_after"] = json!(after.signature);
                results["signature_preserved"] = json!(before.signature == after.signature);
            }
            if let Some(path) = out {
                let file = ComplexFile::from_complex("barycentric subdivision", &sd);
                std::fs::write(&path, serde_json::to_string_pretty(&file).unwrap())
                    .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
                results["written"] = json!(path.display().to_string());
            }
            Ok(finish(
                "subdivide",
                inputs,
                Some(ScalarMode::Exact),
                None,
                results,
                json!({}),
                started,
            ))
        }

        Command::Double { complex, out } => {
            let mut inputs = json!({});
            let k = load_complex(&complex, &mut inputs)?;
            let dbl = k.double_along_boundary()?;
            let cert = dbl.certify_manifold();
            let mut results = json!({
                "f_vector": dbl.f_vector(),
                "euler_characteristic": dbl.euler_characteristic(),
                "certificate": certificate_json(&cert),
            });
            if let Some(path) = out {
                let file = ComplexFile::from_complex("double", &dbl);
                std::fs::write(&path, serde_json::to_string_pretty(&file).unwrap())
                    .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
                results["written"] = json!(path.display().to_string());
            }
            Ok(finish(
                "double",
                inputs,
                Some(ScalarMode::Exact),
                None,
                results,
                json!({}),
                started,
            ))
        }

        Command::Bordism {
            complex,
            cover,
            mode,
        } => {
            let mut inputs = json!({});
            match (&cover.cover, &cover.group) {
                (Some(cpath), Some(gpath)) => {
                    let cov = load_cover(&complex, cpath, gpath, &mut inputs)?;
                    let m = parse_mode(&mode.mode, auto_cover_mode(&cov))?;
                    let k = cov.base().clone();
                    let report = bordism_check(&k, Some((&cov, m)))?;
                    Ok(finish(
                        "bordism",
                        inputs,
                        Some(m),
                        None,
                        bordism_json(&report),
                        json!({}),
                        started,
                    ))
                }
                (None, None) => {
                    let k = load_complex(&complex, &mut inputs)?;
                    let report = bordism_check(&k, None)?;
                    Ok(finish(
                        "bordism",
                        inputs,
                        Some(ScalarMode::Exact),
                        None,
                        bordism_json(&report),
                        json!({}),
                        started,
                    ))
                }
                _ => Err(Failure::Io(
                    "--cover and --group must be given together".into(),
                )),
            }
        }

        Command::ControlledCheck { seed, trials } => {
            let report = hpsig_core::controlled::run_property_suite(seed, trials)?;
            let results = json!({
                "trials": report.trials,
                "subadditivity_failures": report.subadditivity_failures,
                "adjoint_invariance_failures": report.adjoint_invariance_failures,
                "idempotent_laws": report.idempotent_ok,
                "ideal_closure_laws": report.ideal_closure_ok,
                "eventual_equality_congruence": report.congruence_ok,
                "simplicial_matrices_controlled": report.simplicial_controlled_ok,
                "max_simplicial_propagation": report.max_simplicial_propagation,
                "pass": report.all_pass(),
            });
            Ok(finish(
                "controlled-check",
                json!({}),
                None,
                Some(seed),
                results,
                json!({}),
                started,
            ))
        }
    }
}

fn certificate_json(cert: &hpsig_core::simplicial::ManifoldCertificate) -> Value {
    json!({
        "is_pseudomanifold": cert.is_pseudomanifold,
        "is_closed": cert.is_closed,
        "is_orientable": cert.is_orientable,
        "link_checks_passed": cert.link_checks_passed,
        "has_fundamental_cycle": cert.fundamental_cycle.is_some(),
    })
}

fn bordism_json(report: &hpsig_core::signature::BordismReport) -> Value {
    json!({
        "boundary_dim": report.boundary_dim,
        "odd_dimension": report.odd_dimension,
        "signature": report.signature,
        "is_zero": report.is_zero,
        "boundary_facets": report.boundary_facets,
        "multisignature": report.multisignature.as_ref().map(|ms| {
            ms.entries.iter().map(|e| {
                json!({ "irrep": e.label, "dim": e.dim, "signature": e.signature })
            }).collect::<Vec<_>>()
        }),
    })
}

fn validate_cover(
    cov: &CoverComplex,
    cycle: &hpsig_core::simplicial::FundamentalCycle,
    mode: ScalarMode,
) -> Result<Vec<(String, AxiomReport)>, Error> {
    let mut out = Vec::new();
    for (idx, irrep) in cov.group().irreps.iter().enumerate() {
        let transport = hpsig_core::covers::CoverTransport { cover: cov, irrep: idx };
        let report = match mode {
            ScalarMode::Exact => {
                let hp = hpsig_core::poincare::hp_complex::<hpsig_core::Rational, _>(
                    cov.base(),
                    cycle,
                    &transport,
                )?;
                validate_hp(&hp, true)?
            }
            ScalarMode::Cyclotomic => {
                let hp = hpsig_core::poincare::hp_complex::<hpsig_core::Cyclotomic, _>(
                    cov.base(),
                    cycle,
                    &transport,
                )?;
                validate_hp(&hp, true)?
            }
            ScalarMode::Float => {
                let hp = hpsig_core::poincare::hp_complex::<hpsig_core::C64, _>(
                    cov.base(),
                    cycle,
                    &transport,
                )?;
                validate_hp(&hp, true)?
            }
        };
        out.push((irrep.label().to_string(), report));
    }
    Ok(out)
}
