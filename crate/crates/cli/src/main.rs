//! `newtonaj`: exact Newton-diagram invariants from the command line.
//!
//! Input is the support of a power series, given inline with `--expr` or
//! as a schema-1 JSON file with `--input`. Every numeric output is an
//! exact integer or rational string.

mod expr;
mod input;
mod output;
mod render;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use input::InputSpec;
use newton_aj::diagram::NewtonDiagram;
use newton_aj::kn::KNElement;
use newton_aj::{jacobian, tri, Int, Rat};
use num_traits::One;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "newtonaj",
    version,
    about = "Newton diagrams, alternating Jacobian polygons and Łojasiewicz exponents, in exact arithmetic"
)]
struct Cli {
    /// Inline power-series expression, e.g. "x^2 + y^3 + z^5".
    #[arg(long, global = true)]
    expr: Option<String>,

    /// JSON input file ({"schema":1,"variables":[...],"support":[[...]],"nondegenerate":true}).
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Pin the variable (coordinate) order for --expr, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    vars: Option<Vec<String>>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Unsupported: coefficients are carried but never used, and this tool
    /// does not verify nondegeneracy.
    #[arg(long = "require-coefficients", global = true)]
    require_coefficients: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Faces, coordinate facets, primitive normals and maximal axial numbers.
    Diagram,
    /// Alternating Jacobian polygon AJ^(level+1); level defaults to n.
    Aj {
        #[arg(long)]
        level: Option<usize>,
    },
    /// Jacobian polygon J^(level+1); level defaults to n.
    Jac {
        #[arg(long)]
        level: Option<usize>,
    },
    /// Łojasiewicz exponent with the Morse exception.
    Loj {
        /// Also run the Newton-number route and the consistency checks.
        #[arg(long)]
        check: bool,
    },
    /// Newton number of Γ₋ (or of s_α(Γ)₋ with --alpha); --signed gives
    /// Kouchnirenko's alternating sum instead of the unsigned one.
    Nn {
        #[arg(long, conflicts_with = "unsigned")]
        signed: bool,
        /// The default; spelled out for symmetry with --signed.
        #[arg(long)]
        unsigned: bool,
        #[arg(long)]
        alpha: Option<String>,
    },
    /// The faces of the subdiagram s_α(Γ).
    Salpha {
        #[arg(long)]
        alpha: String,
    },
    /// Generate the default triangulation, or validate one from a file.
    Tri {
        /// Generate the default (pulling) triangulation. This is the
        /// default action when no file is given.
        #[arg(long)]
        generate: bool,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Relative combinatorial Newton polyhedron CN(T/cell).
    Cn {
        /// Index into the triangulation's cell list.
        #[arg(long, conflicts_with = "empty")]
        cell: Option<usize>,
        /// Use the formal empty cell.
        #[arg(long)]
        empty: bool,
        /// Triangulation file; the default triangulation otherwise.
        #[arg(long)]
        triangulation: Option<PathBuf>,
    },
    /// Evidence report for the two Łojasiewicz-exponent conjectures.
    Conjecture {
        #[arg(long)]
        triangulation: Option<PathBuf>,
    },
    /// The exceptional-facet based prediction and whether it matches.
    Bko,
    /// Consistency checks on the computed polygons (exit 3 on violation).
    Props,
    /// Render the virtual polygon of AJ^(level+1) as SVG.
    Render {
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        level: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load_input(cli: &Cli) -> Result<InputSpec> {
    if cli.require_coefficients {
        bail!(
            "--require-coefficients is unsupported: coefficients are accepted and echoed \
             but never used; nondegeneracy is an input assertion, not something this tool checks"
        );
    }
    match (&cli.expr, &cli.input) {
        (Some(_), Some(_)) => bail!("give exactly one of --expr or --input"),
        (Some(e), None) => InputSpec::from_expression(e, cli.vars.clone()),
        (None, Some(path)) => {
            if cli.vars.is_some() {
                bail!("--vars only applies to --expr; JSON input fixes the order itself");
            }
            InputSpec::from_json_file(path)
        }
        (None, None) => bail!("an input is required: --expr or --input"),
    }
}

fn level_or_top(diagram: &NewtonDiagram, level: Option<usize>) -> Result<usize> {
    let n = diagram.n();
    let level = level.unwrap_or(n);
    if level > n {
        bail!("level {level} out of range 0..={n}");
    }
    Ok(level)
}

fn load_triangulation(
    diagram: &NewtonDiagram,
    path: &Option<PathBuf>,
) -> Result<tri::Triangulation> {
    match path {
        Some(p) => {
            let cells = input::read_triangulation(p)?;
            tri::validate(diagram, &cells).map_err(|e| anyhow!("{e}"))
        }
        None => Ok(tri::default_triangulation(diagram)),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let started = Instant::now();
    let spec = load_input(&cli)?;
    let support = spec.to_support_set()?;
    let diagram = NewtonDiagram::new(support).map_err(|e| anyhow!("{e}"))?;

    let mut exit = ExitCode::SUCCESS;
    let (name, result): (&str, Value) = match &cli.cmd {
        Cmd::Diagram => ("diagram", output::diagram_json(&diagram)),
        Cmd::Aj { level } => {
            let level = level_or_top(&diagram, *level)?;
            let a = jacobian::aj(&diagram, level).map_err(|e| anyhow!("{e}"))?;
            ("aj", output::polygon_summary(level, &a))
        }
        Cmd::Jac { level } => {
            let level = level_or_top(&diagram, *level)?;
            let j = jacobian::jacobian_polygon(&diagram, level).map_err(|e| anyhow!("{e}"))?;
            ("jac", output::polygon_summary(level, &j))
        }
        Cmd::Loj { check } => {
            let loj = jacobian::lojasiewicz(&diagram);
            let mut obj = json!({
                "loj": output::rat_str(&loj.value),
                "morse_exception": loj.morse_exception,
                "witness_facet": loj.witness_facet.as_ref().map(output::face_json),
            });
            if *check {
                let via_nu = jacobian::lojasiewicz_via_newton_numbers(&diagram);
                let report = jacobian::property_report(&diagram);
                let consistent = via_nu == loj.value && report.ok;
                obj["newton_number_route"] = json!(output::rat_str(&via_nu));
                obj["checks"] = checks_json(&report);
                obj["consistent"] = json!(consistent);
                if !consistent {
                    exit = ExitCode::from(3);
                }
            }
            ("loj", obj)
        }
        Cmd::Nn {
            signed,
            unsigned: _,
            alpha,
        } => {
            let (region, alpha_echo) = match alpha {
                Some(a) => {
                    let a = input::parse_alpha(a)?;
                    let faces = diagram.s_alpha(&a);
                    (
                        diagram.gamma_minus_region(&faces),
                        Some(output::rat_str(&a)),
                    )
                }
                None => (diagram.gamma_minus(), None),
            };
            if *signed {
                let nu = diagram.newton_number_signed(&region);
                let mut obj = json!({
                    "signed": true,
                    "alpha": alpha_echo,
                    "nu": output::rat_str(&nu),
                });
                // Over the full convenient diagram this is the Milnor number.
                if alpha.is_none() {
                    if let Ok(mu) = diagram.milnor_number_kouchnirenko() {
                        obj["mu"] = json!(mu.to_string());
                    }
                }
                ("nn", obj)
            } else {
                let nu = diagram.newton_number_unsigned(&region);
                (
                    "nn",
                    json!({
                        "signed": false,
                        "alpha": alpha_echo,
                        "nu": output::rat_str(&nu),
                    }),
                )
            }
        }
        Cmd::Salpha { alpha } => {
            let a = input::parse_alpha(alpha)?;
            let faces = diagram.s_alpha(&a);
            let list: Vec<Value> = faces
                .iter()
                .map(|&i| {
                    let mut f = output::face_json(diagram.face(i));
                    f["min_axial_over_cone"] =
                        json!(output::rat_str(&diagram.min_axial_over_cone(i)));
                    f
                })
                .collect();
            (
                "salpha",
                json!({ "alpha": output::rat_str(&a), "faces": list }),
            )
        }
        Cmd::Tri { generate, file } => {
            if *generate && file.is_some() {
                bail!("--generate and --file are mutually exclusive");
            }
            let t = load_triangulation(&diagram, file)?;
            ("tri", triangulation_json(&t))
        }
        Cmd::Cn {
            cell,
            empty,
            triangulation,
        } => {
            let t = load_triangulation(&diagram, triangulation)?;
            let (base, echo) = match (cell, empty) {
                (Some(idx), false) => {
                    let c = t
                        .cells()
                        .get(*idx)
                        .ok_or_else(|| anyhow!("cell index {idx} out of range"))?;
                    (Some(c.clone()), json!(idx))
                }
                (None, true) => (None, json!("empty")),
                _ => bail!("give exactly one of --cell or --empty"),
            };
            let value = tri::cn(&t, base.as_ref()).map_err(|e| anyhow!("{e}"))?;
            (
                "cn",
                json!({
                    "cell": echo,
                    "cn": output::kn_json(&value),
                    "degree": output::degree_json(&value.degree()),
                }),
            )
        }
        Cmd::Conjecture { triangulation } => {
            let t = load_triangulation(&diagram, triangulation)?;
            let rep = tri::conjecture_report(&diagram, &t);
            ("conjecture", conjecture_json(&diagram, &rep))
        }
        Cmd::Bko => {
            let loj = jacobian::lojasiewicz(&diagram);
            let mut facets = Vec::new();
            let mut predicted: Option<Rat> = None;
            for &fi in diagram.coordinate_facet_indices() {
                let face = diagram.face(fi);
                if face.dim() != diagram.n() {
                    continue;
                }
                let exceptional =
                    tri::bko_exceptional(&diagram, face).map_err(|e| anyhow!("{e}"))?;
                let m = face.maximal_axial().expect("facet");
                if !exceptional {
                    let candidate = &m - Rat::one();
                    predicted = Some(match predicted {
                        None => candidate,
                        Some(p) => p.max(candidate),
                    });
                }
                let mut f = output::face_json(face);
                f["exceptional"] = json!(exceptional);
                facets.push(f);
            }
            (
                "bko",
                json!({
                    "loj": output::rat_str(&loj.value),
                    "morse_exception": loj.morse_exception,
                    "facets": facets,
                    "predicted": predicted.as_ref().map(output::rat_str),
                    "matches": predicted.as_ref().map(|p| *p == loj.value),
                }),
            )
        }
        Cmd::Props => {
            let report = jacobian::property_report(&diagram);
            if !report.ok {
                exit = ExitCode::from(3);
            }
            (
                "props",
                json!({
                    "ok": report.ok,
                    "aj": output::kn_json(&report.aj_top),
                    "checks": checks_json(&report),
                }),
            )
        }
        Cmd::Render { out, level } => {
            let level = level_or_top(&diagram, *level)?;
            let a: KNElement<Int> = jacobian::aj(&diagram, level).map_err(|e| anyhow!("{e}"))?;
            let verts = a.virtual_vertices().map_err(|e| anyhow!("{e}"))?;
            let svg = render::render_svg(&verts);
            std::fs::write(out, svg)
                .with_context(|| format!("writing SVG to {}", out.display()))?;
            (
                "render",
                json!({
                    "out": out.display().to_string(),
                    "level": level,
                    "vertices": verts.iter().map(output::rat_pair_json).collect::<Vec<_>>(),
                }),
            )
        }
    };

    let canonical = expr::print_expression(&expr::ParsedSupport {
        variables: spec.variables.clone(),
        support: spec.support.clone(),
        coefficients: spec
            .coefficients
            .clone()
            .unwrap_or_else(|| vec![Rat::one(); spec.support.len()]),
    });
    let envelope = json!({
        "schema": 1,
        "version": env!("CARGO_PKG_VERSION"),
        "command": name,
        "input": spec.to_json(),
        "expression": canonical,
        "result": result,
        "elapsed_ms": u64::try_from(started.elapsed().as_millis()).unwrap_or(u64::MAX),
    });
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&envelope)?),
        Format::Text => {
            println!("command: {name}");
            print!("{}", output::to_text(&envelope["result"]));
        }
    }
    Ok(exit)
}

fn checks_json(report: &jacobian::PropertyReport) -> Value {
    Value::Array(
        report
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "passed": c.passed,
                    "details": c.details,
                })
            })
            .collect(),
    )
}

fn triangulation_json(t: &tri::Triangulation) -> Value {
    let cells: Vec<Value> = t
        .maximal_cells()
        .map(|c| {
            Value::Array(
                c.vertices()
                    .iter()
                    .map(|v| output::point_json(v))
                    .collect(),
            )
        })
        .collect();
    let all_cells: Vec<Value> = t
        .cells()
        .iter()
        .map(|c| {
            Value::Array(
                c.vertices()
                    .iter()
                    .map(|v| output::point_json(v))
                    .collect(),
            )
        })
        .collect();
    json!({
        "valid": true,
        "cells": cells,
        "all_cells": all_cells,
        "coordinate_cells": t.coordinate_cells().len(),
    })
}

fn conjecture_json(diagram: &NewtonDiagram, rep: &tri::ConjectureReport) -> Value {
    json!({
        "loj": output::rat_str(&rep.loj),
        "morse_exception": rep.morse_exception,
        "nonexceptional_facets": rep
            .nonexceptional_facets
            .iter()
            .map(|&fi| output::face_json(diagram.face(fi)))
            .collect::<Vec<_>>(),
        "bko_predicted": rep.bko_predicted.as_ref().map(output::rat_str),
        "bko_matches": rep.bko_matches,
        "conjecture_a_deg": rep.conj_a_deg.as_ref().map(output::rat_str),
        "conjecture_a_deg_matches": rep.conj_a_deg_matches,
        "conjecture_a_facet": rep.conj_a_facet.as_ref().map(output::rat_str),
        "conjecture_a_facet_matches": rep.conj_a_facet_matches,
    })
}
