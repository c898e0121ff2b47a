use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use toric_conic::io::{resolution_value, shape_value};
use toric_conic::{
    parse_input, render_svg_2d, AnalysisOptions, CeilingVector, Error, NccrVerdict, Result, SvgWindow, ToricAlgebra,
    Window,
};

#[derive(Parser)]
#[command(name = "toric-conic", version, about = "Conic modules, cells and resolutions over toric algebras")]
struct Cli {
    /// Cone description as JSON; reads stdin when omitted.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report: classes, cells, pdims, verdicts, acyclicity, Frobenius.
    Analyze {
        /// Cube radius for acyclicity windows (default: per-pair heuristic).
        #[arg(long)]
        window: Option<i64>,
        #[arg(long)]
        no_acyclicity: bool,
        /// Partial support to test, e.g. `A0,A1`; may repeat.
        #[arg(long = "support")]
        supports: Vec<String>,
    },
    /// Canonical representatives of the conic module classes.
    Chambers,
    /// Open cells of a chamber.
    Cells(ClassArg),
    /// The conic complex of a chamber.
    Complex(ClassArg),
    /// Resolution of a simple over the endomorphism ring of a partial sum.
    Resolution {
        #[arg(long)]
        support: String,
        #[command(flatten)]
        class: ClassArg,
    },
    /// Verify acyclicity for every ordered class pair.
    Acyclicity {
        /// Cube radius; the per-pair default is used when omitted.
        #[arg(long)]
        window: Option<i64>,
    },
    /// Crepant resolution verdict for the complete sum or a partial support.
    Nccr {
        #[arg(long)]
        support: Option<String>,
    },
    /// Summands of R^{1/q}.
    Frobenius {
        #[arg(long, conflicts_with = "minimal")]
        q: Option<u64>,
        /// Use the smallest q whose summands cover every class (the default).
        #[arg(long)]
        minimal: bool,
        /// Also report the global dimension bound in characteristic p.
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Render the chamber decomposition of a rank-two cone.
    Svg {
        /// `x0,x1,y0,y1`
        #[arg(long, default_value = "-2,2,-2,2", allow_hyphen_values = true)]
        window: String,
    },
}

#[derive(Args)]
struct ClassArg {
    /// Class label (`A1`), class index, or ceiling vector (`0,0,-1,0`).
    #[arg(allow_hyphen_values = true)]
    class: String,
}

fn read_input(path: &Option<PathBuf>) -> Result<toric_conic::ConeInput> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::Input(format!("{}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Input(format!("stdin: {e}")))?;
            s
        }
    };
    parse_input(&text)
}

fn parse_ints(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|x| {
            x.trim().parse::<i64>().map_err(|_| Error::Input(format!("`{s}` is not a comma-separated integer list")))
        })
        .collect()
}

fn class_index(alg: &ToricAlgebra, s: &str) -> Result<usize> {
    let n = alg.enumerate_classes().len();
    let idx = s.strip_prefix('A').unwrap_or(s);
    if let Ok(i) = idx.parse::<usize>() {
        return if i < n { Ok(i) } else { Err(Error::InvalidIndex { index: i, len: n }) };
    }
    alg.class_index(&CeilingVector::from_i64(&parse_ints(s)?))
}

/// A label or index names the canonical representative; a vector is taken as given.
fn chamber(alg: &ToricAlgebra, s: &str) -> Result<CeilingVector> {
    if s.contains(',') {
        let c = CeilingVector::from_i64(&parse_ints(s)?);
        alg.require_feasible(&c)?;
        Ok(c)
    } else {
        Ok(alg.enumerate_classes()[class_index(alg, s)?].clone())
    }
}

fn support(alg: &ToricAlgebra, s: &str) -> Result<Vec<CeilingVector>> {
    s.split(',').map(|x| class_index(alg, x.trim()).map(|i| alg.enumerate_classes()[i].clone())).collect()
}

fn support_indices(alg: &ToricAlgebra, s: &str) -> Result<Vec<usize>> {
    s.split(',').map(|x| class_index(alg, x.trim())).collect()
}

fn shape_text(v: &Value) -> String {
    let terms: Vec<String> = v
        .as_array()
        .into_iter()
        .flatten()
        .map(|t| {
            let parts: Vec<String> = t
                .as_object()
                .into_iter()
                .flatten()
                .map(|(k, n)| if n == 1 { k.clone() } else { format!("{k}^{n}") })
                .collect();
            if parts.is_empty() {
                "0".into()
            } else {
                parts.join("+")
            }
        })
        .collect();
    terms.join(" <- ")
}

fn verdict_text(v: &NccrVerdict) -> String {
    match v {
        NccrVerdict::Nccr => "NCCR".into(),
        NccrVerdict::NotNccr { witness, pdim } => format!("not an NCCR: simple at {witness} has pdim {pdim}"),
        NccrVerdict::Inconclusive { reasons } => format!("inconclusive: {}", reasons.join("; ")),
    }
}

fn run(cli: Cli) -> Result<(Value, String)> {
    let input = read_input(&cli.input)?;
    let alg = ToricAlgebra::new(input.to_cone()?)?;
    let classes = alg.enumerate_classes();
    Ok(match cli.command {
        Command::Analyze { window, no_acyclicity, supports } => {
            let options = AnalysisOptions {
                acyclicity: !no_acyclicity,
                window_radius: window,
                supports: supports.iter().map(|s| support_indices(&alg, s)).collect::<Result<_>>()?,
                ..AnalysisOptions::default()
            };
            let report = toric_conic::io::analyze_algebra(&alg, input.labels.as_deref(), &options)?;
            let text = report.to_json();
            (serde_json::to_value(&report).expect("report serialises"), text)
        }
        Command::Chambers => {
            let rows: Vec<Value> = classes
                .iter()
                .enumerate()
                .map(|(k, c)| json!({"label": alg.class_label(k), "ceiling": c, "degree": alg.degree(c).to_string()}))
                .collect();
            let text = classes
                .iter()
                .enumerate()
                .map(|(k, c)| format!("{}\t{c}\tdegree {}", alg.class_label(k), alg.degree(c)))
                .collect::<Vec<_>>()
                .join("\n");
            (json!({"classes": rows, "grid_oracle": alg.grid_oracle_class_count()}), text)
        }
        Command::Cells(a) => {
            let c = chamber(&alg, &a.class)?;
            let cells = alg.enumerate_cells(&c)?;
            let rows: Vec<Value> = cells
                .iter()
                .map(|x| json!({"omega": x.omega, "codim": x.codim, "open_conic": alg.open_conic(x)}))
                .collect();
            let mut text = format!("chamber {c}, census {:?}", alg.cell_census(&c)?);
            for x in &cells {
                text += &format!("\ncodim {}\tomega {:?}\topen conic {}", x.codim, x.omega, alg.open_conic(x));
            }
            (json!({"chamber": c, "cells": rows}), text)
        }
        Command::Complex(a) => {
            let c = chamber(&alg, &a.class)?;
            let k = alg.conic_complex(&c)?;
            let shape = shape_value(&alg, &k.to_module_complex().class_shape(&alg));
            let maps: Vec<Vec<Vec<String>>> = k
                .differentials
                .iter()
                .map(|m| m.rows().map(|r| r.iter().map(|x| x.to_string()).collect()).collect())
                .collect();
            let mut text = format!("chamber {c}\nshape {}", shape_text(&shape));
            for (i, m) in k.differentials.iter().enumerate() {
                text += &format!("\nd{}: degree {} -> {}\n{m}", i + 1, i + 1, i);
            }
            (json!({"chamber": c, "shape": shape, "differentials": maps}), text)
        }
        Command::Resolution { support: s, class } => {
            let sup = support(&alg, &s)?;
            let c = chamber(&alg, &class.class)?;
            let r = alg.resolution(&sup, &c)?;
            let v = resolution_value(&alg, &r);
            let text = format!(
                "chamber {c} ({})\nspliced {}\nshape {}\nminimal {}\npdim {}\nverified {}",
                alg.class_label(r.class),
                r.spliced,
                shape_text(&v["shape"]),
                shape_text(&v["minimal_shape"]),
                r.pdim,
                r.verified()
            );
            (v, text)
        }
        Command::Acyclicity { window } => {
            let reports = match window {
                None => alg.verify_acyclicity_all(None)?,
                Some(r) => {
                    let w = Window::cube(alg.rank(), r);
                    let mut out = Vec::new();
                    for c in classes {
                        for c2 in classes {
                            out.push(alg.verify_acyclicity(c, c2, &w)?);
                        }
                    }
                    out
                }
            };
            let violations: usize = reports.iter().map(|r| r.violations.len()).sum();
            let mut text = String::new();
            for r in &reports {
                text += &format!(
                    "{} vs {}: {} points, {} violations\n",
                    r.chamber,
                    r.other,
                    r.points_checked,
                    r.violations.len()
                );
            }
            text += &format!("total violations {violations}");
            let v = json!({"pairs": reports, "violations": violations, "passed": violations == 0});
            if violations > 0 {
                eprintln!("{text}");
                return Err(Error::Invariant(format!("{violations} acyclicity violations")));
            }
            (v, text)
        }
        Command::Nccr { support: s } => {
            let sup = s.as_deref().map(|s| support(&alg, s)).transpose()?;
            let v = alg.nccr_verdict(sup.as_deref())?;
            (serde_json::to_value(&v).expect("verdict serialises"), verdict_text(&v))
        }
        Command::Frobenius { q, minimal: _, prime } => {
            let qmin = alg.minimal_complete_q()?;
            let q = q.unwrap_or(qmin);
            let dec = alg.decompose_root(q)?;
            let mult: serde_json::Map<String, Value> =
                dec.multiplicities.iter().map(|(k, v)| (alg.class_label(*k), Value::from(*v))).collect();
            let mut text = format!(
                "q = {q} (minimal complete q = {qmin})\n{}",
                mult.iter().map(|(k, v)| format!("{k}: {v}")).collect::<Vec<_>>().join("\n")
            );
            let mut v = json!({"q": q, "minimal_complete_q": qmin, "decomposition": mult, "total": dec.total()});
            if let Some(p) = prime {
                let r = alg.dmodule_report(p)?;
                text += &format!("\n{}", r.text);
                v["dmodule"] = serde_json::to_value(&r).expect("report serialises");
            }
            (v, text)
        }
        Command::Svg { window } => {
            let w = match parse_ints(&window)?.as_slice() {
                [x0, x1, y0, y1] => SvgWindow::new(*x0, *x1, *y0, *y1),
                _ => return Err(Error::Input("--window takes x0,x1,y0,y1".into())),
            };
            let r = render_svg_2d(&alg, &w)?;
            (json!({"svg": r.svg, "tiles": r.tiles.len()}), r.svg)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let as_json = cli.json;
    match run(cli) {
        Ok((v, text)) => {
            if as_json {
                println!("{}", serde_json::to_string_pretty(&v).expect("value serialises"));
            } else {
                println!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
