//! `aztec`: command-line access to contours, castles, matchings and the
//! cluster-variable oracle. Every verb prints JSON on stdout.

mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use aztec_core::castle::{build_castle, Castle};
use aztec_core::contour::{classify_region, tuple_for_point};
use aztec_core::matchings::{
    cap_from_env, count, minimal_matching_bruteforce, minimal_matching_descent, permanent_count,
    twist_lattice, weighted_sum, weighted_sum_framed,
};
use aztec_core::minmatch::{check_lemmas, construct_minimal};
use aztec_core::prism::{cluster_var_at_point, tau_word_to_point};
use aztec_core::render::render_castle;
use aztec_core::tiling::STEP;
use aztec_core::Error;

#[derive(Parser)]
#[command(name = "aztec", version, about = "Aztec castles of the dP3 lattice")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Clone, Copy)]
struct Point {
    #[arg(allow_negative_numbers = true)]
    i: i64,
    #[arg(allow_negative_numbers = true)]
    j: i64,
    #[arg(allow_negative_numbers = true)]
    k: i64,
}

#[derive(Subcommand)]
enum Verb {
    /// Side lengths, signs and region of the contour.
    Contour {
        #[command(flatten)]
        p: Point,
    },
    /// The castle graph (trimmed unless --untrimmed).
    Castle {
        #[command(flatten)]
        p: Point,
        #[arg(long)]
        untrimmed: bool,
        /// Print vertices, edges and faces as well as the counts.
        #[arg(long)]
        full: bool,
    },
    /// Perfect matchings of the trimmed castle.
    Matchings {
        #[command(flatten)]
        p: Point,
        #[arg(long, group = "what")]
        count: bool,
        #[arg(long, group = "what")]
        sum: bool,
        #[arg(long, group = "what")]
        framed_sum: bool,
        /// Graphviz text of the twist lattice.
        #[arg(long, group = "what")]
        lattice_dot: bool,
    },
    /// The minimal matching built from the sector division.
    Minmatch {
        #[command(flatten)]
        p: Point,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Compare with the lattice minimum and check the local lemmas.
        #[arg(long)]
        verify: bool,
    },
    /// A tau word carrying some cluster label to the point.
    TauWord {
        #[command(flatten)]
        p: Point,
    },
    /// The cluster variable at the point.
    ClusterVar {
        #[command(flatten)]
        p: Point,
        /// Principal coefficients.
        #[arg(long)]
        framed: bool,
    },
    /// Oracle checks on every point with max(|i|,|j|,|k|) <= max.
    Verify {
        #[arg(long, default_value_t = 1)]
        max: i64,
        /// Skip the framed comparison.
        #[arg(long)]
        unframed_only: bool,
    },
    /// SVG of the castle with its minimal matching and sectors.
    Render {
        #[command(flatten)]
        p: Point,
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Draw the graph only.
        #[arg(long)]
        bare: bool,
    },
}

fn trimmed(p: Point) -> Result<Castle> {
    Ok(build_castle(p.i, p.j, p.k)?.trim_dangling())
}

fn point_json(p: Point) -> Value {
    json!([p.i, p.j, p.k])
}

fn run(cli: Cli) -> Result<(Value, bool)> {
    let cap = cap_from_env();
    let out = match cli.verb {
        Verb::Contour { p } => {
            let c = tuple_for_point(p.i, p.j, p.k);
            let r = classify_region(p.i, p.j, p.k);
            json!({
                "point": point_json(p),
                "sides": c.sides,
                "signs": c.signs.to_string(),
                "region": r.to_string(),
                "orbit": r.orbit.map(|o| format!("{o:?}")),
                "self_intersecting": r.self_intersecting,
                "corners": c.corners[..6].iter().map(|q| [q.u / STEP, q.v / STEP]).collect::<Vec<_>>(),
            })
        }
        Verb::Castle { p, untrimmed, full } => {
            let raw = build_castle(p.i, p.j, p.k)?;
            let c = if untrimmed { raw } else { raw.trim_dangling() };
            let part = c.face_partition();
            let mut v = json!({
                "point": point_json(p),
                "trimmed": c.trimmed,
                "vertices": c.vertices.len(),
                "white": c.num_white(),
                "black": c.num_black(),
                "edges": c.edges.len(),
                "kites": c.faces.len(),
                "interior_faces": part.interior.len(),
                "boundary_faces": part.boundary.len(),
                "forced_edges": c.forced.len(),
            });
            if full {
                v["graph"] = c.to_json();
            }
            v
        }
        Verb::Matchings {
            p,
            count: _,
            sum,
            framed_sum,
            lattice_dot,
        } => {
            let c = trimmed(p)?;
            if sum {
                json!({ "point": point_json(p), "sum": weighted_sum(&c, cap)?.to_string() })
            } else if framed_sum {
                json!({ "point": point_json(p), "framed_sum": weighted_sum_framed(&c, cap)?.to_string() })
            } else if lattice_dot {
                let l = twist_lattice(&c, cap)?;
                json!({
                    "point": point_json(p),
                    "graded": l.is_graded_with_bounds(),
                    "dot": l.to_dot(),
                })
            } else {
                json!({
                    "point": point_json(p),
                    "count": count(&c, cap)?,
                    "permanent": permanent_count(&c).map(|n| n.to_string()),
                })
            }
        }
        Verb::Minmatch { p, svg, verify } => {
            let c = trimmed(p)?;
            let built = construct_minimal(&c)?;
            let mut v = json!({
                "point": point_json(p),
                "signs": built.sectors.signs.to_string(),
                "edges": built.matching.edges.iter().map(|&e| {
                    let (w, b) = c.edge_points(e);
                    [[w.u, w.v], [b.u, b.v]]
                }).collect::<Vec<_>>(),
            });
            if let Some(path) = svg {
                let text = render_castle(&c, Some(&built.matching), Some(&built.sectors));
                std::fs::write(&path, text)
                    .with_context(|| format!("writing {}", path.display()))?;
                v["svg"] = json!(path.display().to_string());
            }
            if verify {
                let lemmas = check_lemmas(&c, &built);
                // above the cap, twist down to the minimum instead of enumerating
                let (reference, how) = match minimal_matching_bruteforce(&c, cap) {
                    Err(Error::TooLarge { .. }) => (minimal_matching_descent(&c)?, "descent"),
                    other => (other?, "enumeration"),
                };
                let equal = reference == built.matching;
                let ok = equal && lemmas.all_hold();
                v["equals_reference"] = json!(equal);
                v["reference"] = json!(how);
                v["lemmas"] = serde_json::to_value(&lemmas)?;
                return Ok((v, ok));
            }
            v
        }
        Verb::TauWord { p } => {
            let (word, label) = tau_word_to_point([p.i, p.j, p.k]);
            json!({ "point": point_json(p), "word": word, "label": label })
        }
        Verb::ClusterVar { p, framed } => {
            let z = cluster_var_at_point([p.i, p.j, p.k], framed)?;
            json!({ "point": point_json(p), "framed": framed, "value": z.to_string() })
        }
        Verb::Verify { max, unframed_only } => {
            let report = verify::run(max, !unframed_only, cap);
            let ok = report.failed() == 0;
            return Ok((serde_json::to_value(&report)?, ok));
        }
        Verb::Render { p, out, bare } => {
            let c = trimmed(p)?;
            let text = if bare {
                render_castle(&c, None, None)
            } else {
                let built = construct_minimal(&c)?;
                render_castle(&c, Some(&built.matching), Some(&built.sectors))
            };
            match out {
                Some(path) => {
                    std::fs::write(&path, text)
                        .with_context(|| format!("writing {}", path.display()))?;
                    json!({ "point": point_json(p), "svg": path.display().to_string() })
                }
                None => json!({ "point": point_json(p), "svg_text": text }),
            }
        }
    };
    Ok((out, true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((v, ok)) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&v).expect("json values serialize")
            );
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
