//! Command-line front end for `toric-faces`.
//!
//! Exit codes: 0 on success, 1 when a check fails, 2 on usage or input
//! errors. Input paths of the form `corpus:NAME` read a bundled example.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use toric_faces::complexes::{check_upper_links, order_complex, reduced_betti, verify_wedge_prediction, Claim};
use toric_faces::gkm::{enumerate_faces_with, validate, validate_connection, FaceEnumeration, DEFAULT_CAP};
use toric_faces::io::{
    flats_to_json, graph_to_dot, json_string, parse_graph, parse_graph_unchecked, parse_matroid, parse_poset,
    poset_to_dot, poset_to_json, write_connection, write_poset,
};
use toric_faces::matroid::{flats_lattice_with, independence_degree};
use toric_faces::reconstruct::{local_lattice_mismatches, reconstruct_face_poset, verify_galois};
use toric_faces::strategy::{connection_rules, face_filters, flat_enumerators, StrategyConfig};
use toric_faces::{corpus, GkmGraph, GradedPoset};

#[derive(Debug, Parser)]
#[command(
    name = "toric-faces",
    version,
    about = "Lattices of flats, locally geometric posets and GKM-graph faces"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// JSON file with default strategy names and cap.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Weight systems and their lattices of flats.
    #[command(subcommand)]
    Matroid(MatroidCmd),
    /// Graded posets.
    #[command(subcommand)]
    Poset(PosetCmd),
    /// GKM-graphs.
    #[command(subcommand)]
    Gkm(GkmCmd),
}

#[derive(Debug, Args)]
struct Format {
    #[arg(long, conflicts_with = "dot")]
    json: bool,
    #[arg(long)]
    dot: bool,
}

#[derive(Debug, Args)]
struct FlatOpts {
    /// Flat enumerator.
    #[arg(long)]
    strategy: Option<String>,
}

#[derive(Debug, Args)]
struct FaceOpts {
    /// Limit on candidate subgraphs.
    #[arg(long)]
    cap: Option<usize>,
    /// Connection rule.
    #[arg(long)]
    rule: Option<String>,
}

#[derive(Debug, Subcommand)]
enum MatroidCmd {
    /// List the flats.
    Flats {
        file: String,
        #[command(flatten)]
        flats: FlatOpts,
        #[command(flatten)]
        format: Format,
    },
    /// Check the lattice of flats.
    Check {
        file: String,
        #[command(flatten)]
        flats: FlatOpts,
        #[command(flatten)]
        format: Format,
    },
    /// Check the wedge-of-spheres predictions.
    Wedge {
        file: String,
        #[command(flatten)]
        format: Format,
    },
}

#[derive(Debug, Subcommand)]
enum PosetCmd {
    /// Structural predicates.
    Check {
        file: String,
        /// Also check coherence with weight 1 on every atom.
        #[arg(long)]
        gkm_coherent: bool,
        #[command(flatten)]
        format: Format,
    },
    /// Double the bottom element.
    Compactify {
        file: String,
        #[command(flatten)]
        format: Format,
    },
    /// Remove the bottom element.
    Projectivize {
        file: String,
        #[command(flatten)]
        format: Format,
    },
    /// Identify the tops of two geometric lattices.
    Glue {
        left: String,
        right: String,
        #[command(flatten)]
        format: Format,
    },
    /// Reduced homology of the order complex and of upper links.
    Homology {
        file: String,
        #[command(flatten)]
        format: Format,
    },
}

#[derive(Debug, Subcommand)]
enum GkmCmd {
    /// Check the GKM axioms and any declared connection.
    Validate {
        file: String,
        #[command(flatten)]
        format: Format,
    },
    /// All faces.
    Faces {
        file: String,
        #[command(flatten)]
        opts: FaceOpts,
        #[command(flatten)]
        format: Format,
    },
    /// Totally geodesic faces.
    TgFaces {
        file: String,
        #[command(flatten)]
        opts: FaceOpts,
        #[command(flatten)]
        format: Format,
    },
    /// Print and check the connection chosen by a rule.
    Connection {
        file: String,
        /// Connection rule.
        #[arg(long)]
        rule: Option<String>,
        #[command(flatten)]
        format: Format,
    },
    /// Reconstruct the face poset.
    Reconstruct {
        file: String,
        /// Face mode.
        #[arg(long)]
        mode: Option<String>,
        #[command(flatten)]
        opts: FaceOpts,
        /// Check the Galois insertion laws.
        #[arg(long)]
        verify_galois: bool,
        #[command(flatten)]
        format: Format,
    },
}

/// Exit code and the two output streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Input(String),
    Check(String),
}

struct Report {
    out: String,
    failed: bool,
}

impl Report {
    fn ok(out: String) -> Self {
        Report { out, failed: false }
    }
}

type CmdResult = Result<Report, Failure>;

type ConnectionFor<'a> = dyn Fn(&GkmGraph, &Option<String>) -> Result<toric_faces::Connection, Failure> + 'a;

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let config = match &cli.config {
        None => StrategyConfig::default(),
        Some(path) => match std::fs::read_to_string(path)
            .map_err(|e| e.to_string())
            .and_then(|t| StrategyConfig::from_json(&t).map_err(|e| e.to_string()))
        {
            Ok(c) => c,
            Err(e) => return input_error(format!("{}: {e}", path.display())),
        },
    };
    let result = match cli.jobs {
        None => dispatch(cli.command, &config),
        Some(0) => return input_error("--jobs must be at least 1".into()),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command, &config)),
            Err(e) => return input_error(e.to_string()),
        },
    };
    match result {
        Ok(r) => Outcome {
            code: i32::from(r.failed),
            stdout: r.out,
            stderr: String::new(),
        },
        Err(Failure::Input(msg)) => input_error(msg),
        Err(Failure::Check(msg)) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

fn input_error(msg: String) -> Outcome {
    Outcome {
        code: 2,
        stdout: String::new(),
        stderr: format!("error: {msg}\n"),
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if let Some(name) = path.strip_prefix("corpus:") {
        return corpus::get(name).map(str::to_string).ok_or_else(|| {
            Failure::Input(format!(
                "no bundled file `{name}`; available: {}",
                corpus::names().collect::<Vec<_>>().join(", ")
            ))
        });
    }
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn load<T, E: std::fmt::Display>(path: &str, parse: impl Fn(&str) -> Result<T, E>) -> Result<T, Failure> {
    let text = read_input(path)?;
    parse(&text).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn check<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Check(e.to_string())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn dispatch(command: Command, config: &StrategyConfig) -> CmdResult {
    match command {
        Command::Matroid(c) => matroid(c, config),
        Command::Poset(c) => poset(c),
        Command::Gkm(c) => gkm(c, config),
    }
}

fn emit_poset(p: &GradedPoset, format: &Format) -> String {
    if format.json {
        json_string(&poset_to_json(p))
    } else if format.dot {
        poset_to_dot(p)
    } else {
        write_poset(p)
    }
}

fn matroid(cmd: MatroidCmd, config: &StrategyConfig) -> CmdResult {
    let enumerator = |opts: &FlatOpts| {
        flat_enumerators()
            .resolve(opts.strategy.as_deref().or(config.flats.as_deref()))
            .map_err(input)
    };
    match cmd {
        MatroidCmd::Flats { file, flats, format } => {
            let ws = load(&file, parse_matroid)?;
            let lattice = flats_lattice_with(&ws, enumerator(&flats)?.as_ref());
            if format.json {
                return Ok(Report::ok(json_string(&flats_to_json(lattice.flats()))));
            }
            if format.dot {
                return Ok(Report::ok(poset_to_dot(lattice.poset())));
            }
            let mut out = format!("{} flats\n", lattice.flats().len());
            let width = lattice.flats().iter().map(|f| f.id().len()).max().unwrap_or(1);
            for f in lattice.flats() {
                writeln!(
                    out,
                    "{:<width$}  rank {}  multiplicity {}  {}",
                    f.id(),
                    f.rank(),
                    f.multiplicity(),
                    f
                )
                .unwrap();
            }
            Ok(Report::ok(out))
        }
        MatroidCmd::Check { file, flats, format } => {
            let ws = load(&file, parse_matroid)?;
            let lattice = flats_lattice_with(&ws, enumerator(&flats)?.as_ref());
            let p = lattice.poset();
            if format.dot {
                return Ok(Report::ok(poset_to_dot(p)));
            }
            let geometric = p.is_geometric_lattice().map_err(check)?;
            let upper = (0..p.len()).find(|&s| !matches!(p.upper_ideal(s).is_geometric_lattice(), Ok(Ok(()))));
            let mult = p.drk().expect("flats carry multiplicities").to_vec();
            let coherent = p.check_coherent(|a| Some(mult[a])).map_err(check)?;
            let (bottom, top) = (p.bottom().unwrap(), p.top().unwrap());
            let mobius = p.mobius(bottom, top).map_err(check)?;
            let failed = geometric.is_err() || upper.is_some() || coherent.is_err();
            let out = if format.json {
                json_string(&json!({
                    "weights": ws.len(),
                    "rank": ws.rank(),
                    "independence_degree": independence_degree(&ws),
                    "flats": lattice.flats().len(),
                    "geometric_lattice": geometric.is_ok(),
                    "upper_ideals_geometric": upper.is_none(),
                    "multiplicity_coherent": coherent.is_ok(),
                    "mobius": mobius,
                }))
            } else {
                let mut out = String::new();
                writeln!(out, "weights: {}", ws.len()).unwrap();
                writeln!(out, "rank: {}", ws.rank()).unwrap();
                writeln!(out, "independence degree: {}", independence_degree(&ws)).unwrap();
                writeln!(out, "flats: {}", lattice.flats().len()).unwrap();
                match &geometric {
                    Ok(()) => writeln!(out, "geometric lattice: pass").unwrap(),
                    Err(v) => writeln!(out, "geometric lattice: fail: {v}").unwrap(),
                }
                match upper {
                    None => writeln!(out, "upper ideals geometric: pass").unwrap(),
                    Some(s) => writeln!(out, "upper ideals geometric: fail at `{}`", p.id(s)).unwrap(),
                }
                match &coherent {
                    Ok(d) => writeln!(out, "multiplicity coherence: pass (drk of top {})", d[top]).unwrap(),
                    Err(v) => writeln!(out, "multiplicity coherence: fail: {v}").unwrap(),
                }
                writeln!(out, "mobius(bottom, top): {mobius}").unwrap();
                out
            };
            Ok(Report { out, failed })
        }
        MatroidCmd::Wedge { file, format } => {
            let ws = load(&file, parse_matroid)?;
            let r = verify_wedge_prediction(&ws).map_err(check)?;
            if format.dot {
                return Ok(Report::ok(poset_to_dot(toric_faces::flats_lattice(&ws).poset())));
            }
            let claim_json = |c: &Claim| match c {
                Claim::Skipped(why) => json!({ "status": "skipped", "reason": why }),
                Claim::Checked {
                    degree,
                    expected,
                    betti,
                    pass,
                } => json!({
                    "status": verdict(*pass),
                    "degree": degree,
                    "expected": expected,
                    "reduced_betti": betti.values(),
                }),
            };
            let claim_text = |c: &Claim| match c {
                Claim::Skipped(why) => format!("skipped ({why})"),
                Claim::Checked {
                    degree,
                    expected,
                    betti,
                    pass,
                } => format!(
                    "{} (degree {degree}, expected {expected}, reduced betti {betti})",
                    verdict(*pass)
                ),
            };
            let h: Vec<String> = r.h_vector.iter().map(i64::to_string).collect();
            let out = if format.json {
                json_string(&json!({
                    "rank": r.rank,
                    "mobius": r.mobius,
                    "h_vector": r.h_vector,
                    "flats": claim_json(&r.flats),
                    "independence": claim_json(&r.independence),
                }))
            } else {
                format!(
                    "rank: {}\nmobius: {}\nh-vector: ({})\nproper part of flats: {}\nindependence complex: {}\n",
                    r.rank,
                    r.mobius,
                    h.join(","),
                    claim_text(&r.flats),
                    claim_text(&r.independence)
                )
            };
            Ok(Report {
                out,
                failed: !r.passed(),
            })
        }
    }
}

fn poset(cmd: PosetCmd) -> CmdResult {
    match cmd {
        PosetCmd::Check {
            file,
            gkm_coherent,
            format,
        } => {
            let p = load(&file, parse_poset)?;
            if format.dot {
                return Ok(Report::ok(poset_to_dot(&p)));
            }
            let graded = p.is_graded().map(|r| r.iter().copied().max().unwrap_or(0));
            let lattice = p.is_lattice();
            let geometric = match p.is_geometric_lattice() {
                Ok(v) => v.map_err(|e| e.to_string()),
                Err(e) => Err(e.to_string()),
            };
            let local = p.is_locally_geometric();
            let coherence = if gkm_coherent {
                Some(match p.check_gkm_coherent() {
                    Ok(Ok(d)) => Ok(d),
                    Ok(Err(v)) => Err(v.to_string()),
                    Err(e) => Err(e.to_string()),
                })
            } else {
                None
            };
            let failed = local.is_err() || matches!(coherence, Some(Err(_)));
            let out = if format.json {
                let mut j = json!({
                    "elements": p.len(),
                    "graded": graded.is_ok(),
                    "lattice": lattice.is_ok(),
                    "geometric_lattice": geometric.is_ok(),
                    "locally_geometric": local.is_ok(),
                });
                if let Ok(k) = &local {
                    j["rank"] = json!(k);
                }
                if let Some(c) = &coherence {
                    j["gkm_coherent"] = json!(c.is_ok());
                    if let Err(v) = c {
                        j["violation"] = json!(v);
                    }
                }
                json_string(&j)
            } else {
                let mut out = format!("elements: {}\n", p.len());
                let yes_no = |r: Result<String, String>| match r {
                    Ok(s) => format!("yes{s}"),
                    Err(s) => format!("no: {s}"),
                };
                writeln!(
                    out,
                    "graded: {}",
                    yes_no(graded.map(|k| format!(" (rank {k})")).map_err(|v| v.to_string()))
                )
                .unwrap();
                writeln!(
                    out,
                    "lattice: {}",
                    yes_no(lattice.map(|_| String::new()).map_err(|v| v.to_string()))
                )
                .unwrap();
                writeln!(out, "geometric lattice: {}", yes_no(geometric.map(|_| String::new()))).unwrap();
                writeln!(
                    out,
                    "locally geometric: {}",
                    yes_no(local.map(|k| format!(" (rank {k})")).map_err(|v| v.to_string()))
                )
                .unwrap();
                match &coherence {
                    None => {}
                    Some(Ok(d)) => {
                        writeln!(out, "gkm-coherent: pass (drk of top {})", p.top().map_or(0, |t| d[t])).unwrap()
                    }
                    Some(Err(v)) => writeln!(out, "gkm-coherent: fail: {v}").unwrap(),
                }
                out
            };
            Ok(Report { out, failed })
        }
        PosetCmd::Compactify { file, format } => {
            let p = load(&file, parse_poset)?;
            Ok(Report::ok(emit_poset(&p.compactify().map_err(check)?, &format)))
        }
        PosetCmd::Projectivize { file, format } => {
            let p = load(&file, parse_poset)?;
            Ok(Report::ok(emit_poset(&p.projectivize().map_err(check)?, &format)))
        }
        PosetCmd::Glue { left, right, format } => {
            let a = load(&left, parse_poset)?;
            let b = load(&right, parse_poset)?;
            Ok(Report::ok(emit_poset(&a.glue_top(&b).map_err(check)?, &format)))
        }
        PosetCmd::Homology { file, format } => {
            let p = load(&file, parse_poset)?;
            if format.dot {
                return Ok(Report::ok(poset_to_dot(&p)));
            }
            let oc = order_complex(&p);
            let c = oc.to_simplicial();
            let betti = reduced_betti(&c).map_err(check)?;
            let links = p.is_locally_geometric().ok().map(|_| check_upper_links(&p));
            let failed = matches!(links, Some(Err(_)));
            let out = if format.json {
                let mut j = json!({
                    "maximal_chains": oc.maximal_chains().len(),
                    "dimension": c.dim(),
                    "reduced_betti": betti.values(),
                });
                j["upper_links"] = match &links {
                    None => json!("skipped"),
                    Some(Ok(())) => json!("pass"),
                    Some(Err(f)) => json!(f.to_string()),
                };
                json_string(&j)
            } else {
                let mut out = format!(
                    "maximal chains: {}\ndimension: {}\nreduced betti: {betti}\n",
                    oc.maximal_chains().len(),
                    c.dim()
                );
                match &links {
                    None => writeln!(out, "upper links: skipped (not locally geometric)").unwrap(),
                    Some(Ok(())) => writeln!(out, "upper links: pass").unwrap(),
                    Some(Err(f)) => writeln!(out, "upper links: fail: {f}").unwrap(),
                }
                out
            };
            Ok(Report { out, failed })
        }
    }
}

fn face_table(g: &GkmGraph, e: &FaceEnumeration) -> String {
    let ids: Vec<String> = e.faces.iter().map(|f| f.subgraph.id(g)).collect();
    let width = ids.iter().map(String::len).max().unwrap_or(0).max(4);
    let mut out = format!("{} faces ({} candidate subgraphs)\n", e.faces.len(), e.candidates);
    writeln!(out, "{:<width$}  rank  degree  vertices", "face").unwrap();
    for (f, id) in e.faces.iter().zip(&ids) {
        writeln!(
            out,
            "{:<width$}  {:>4}  {:>6}  {}",
            id,
            f.rank,
            f.degree,
            f.subgraph.vertex_label(g)
        )
        .unwrap();
    }
    out
}

fn faces_json(g: &GkmGraph, e: &FaceEnumeration) -> Value {
    json!({
        "candidates": e.candidates,
        "faces": e.faces.iter().map(|f| json!({
            "id": f.subgraph.id(g),
            "rank": f.rank,
            "degree": f.degree,
            "vertices": f.subgraph.vertices().iter().map(|&v| g.vertex(v)).collect::<Vec<_>>(),
            "edges": f.subgraph.edges().iter().map(|&x| g.edge(x).id()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "poset": poset_to_json(&e.poset),
    })
}

fn gkm(cmd: GkmCmd, config: &StrategyConfig) -> CmdResult {
    let cap = |opts: &FaceOpts| opts.cap.or(config.cap).unwrap_or(DEFAULT_CAP);
    let rule_name = |rule: &Option<String>| rule.clone().or_else(|| config.connection.clone());
    let connection = |g: &GkmGraph, rule: &Option<String>| {
        let r = connection_rules().resolve(rule_name(rule).as_deref()).map_err(input)?;
        r.connection(g).map_err(check)
    };
    match cmd {
        GkmCmd::Validate { file, format } => {
            let g = load(&file, parse_graph_unchecked)?;
            if format.dot {
                return Ok(Report::ok(graph_to_dot(&g)));
            }
            let summary = validate(&g);
            let declared = g.declared_connection().map(|c| validate_connection(&g, c));
            let failed = summary.is_err() || matches!(declared, Some(Err(_)));
            let out = if format.json {
                let mut j = json!({ "valid": summary.is_ok() });
                match &summary {
                    Ok(s) => {
                        j["dimension"] = json!(s.dimension);
                        j["rank"] = json!(s.rank);
                    }
                    Err(v) => j["violations"] = json!(v.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
                }
                j["connection"] = match &declared {
                    None => json!("none"),
                    Some(Ok(())) => json!("valid"),
                    Some(Err(v)) => json!(v.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
                };
                json_string(&j)
            } else {
                let mut out = String::new();
                match &summary {
                    Ok(s) => writeln!(out, "valid: {s}").unwrap(),
                    Err(v) => {
                        writeln!(out, "invalid: {} violation(s)", v.len()).unwrap();
                        for x in v {
                            writeln!(out, "  {x}").unwrap();
                        }
                    }
                }
                match &declared {
                    None => writeln!(out, "declared connection: none").unwrap(),
                    Some(Ok(())) => writeln!(out, "declared connection: valid").unwrap(),
                    Some(Err(v)) => {
                        writeln!(out, "declared connection: invalid: {} violation(s)", v.len()).unwrap();
                        for x in v {
                            writeln!(out, "  {x}").unwrap();
                        }
                    }
                }
                out
            };
            Ok(Report { out, failed })
        }
        GkmCmd::Faces { file, opts, format } => faces(
            &load(&file, parse_graph)?,
            "faces",
            &opts,
            &format,
            cap(&opts),
            &connection,
        ),
        GkmCmd::TgFaces { file, opts, format } => faces(
            &load(&file, parse_graph)?,
            "totally-geodesic",
            &opts,
            &format,
            cap(&opts),
            &connection,
        ),
        GkmCmd::Connection { file, rule, format } => {
            let g = load(&file, parse_graph)?;
            if format.dot {
                return Ok(Report::ok(graph_to_dot(&g)));
            }
            let name = connection_rules()
                .resolve(rule_name(&rule).as_deref())
                .map_err(input)?
                .name_owned();
            let c = connection(&g, &rule)?;
            let table = write_connection(&g, &c);
            let out = if format.json {
                let entries: Vec<Value> = c
                    .entries(&g)
                    .into_iter()
                    .map(|(edge, at, image, via)| json!({ "edge": edge, "at": at, "image": image, "via": via }))
                    .collect();
                json_string(&json!({ "rule": name, "entries": entries, "valid": true }))
            } else {
                format!("rule: {name}\n{table}valid: pass\n")
            };
            Ok(Report::ok(out))
        }
        GkmCmd::Reconstruct {
            file,
            mode,
            opts,
            verify_galois: galois,
            format,
        } => {
            let g = load(&file, parse_graph)?;
            let filter = face_filters()
                .resolve(mode.as_deref().or(config.mode.as_deref()))
                .map_err(input)?;
            connection_rules()
                .resolve(rule_name(&opts.rule).as_deref())
                .map_err(input)?;
            let conn = if filter.needs_connection() {
                Some(connection(&g, &opts.rule)?)
            } else {
                None
            };
            let report = reconstruct_face_poset(&g, filter.as_ref(), conn.as_ref(), cap(&opts)).map_err(check)?;
            if format.dot {
                return Ok(Report::ok(poset_to_dot(&report.faces)));
            }
            let local = report.faces.is_locally_geometric();
            let mismatches = local_lattice_mismatches(&g, &report).map_err(check)?;
            let links = check_upper_links(&report.faces);
            let coherent = match report.faces.check_gkm_coherent() {
                Ok(Ok(d)) => d.iter().zip(&report.drk).all(|(a, &b)| *a == b as u64),
                _ => false,
            };
            let galois_report = if galois && report.diagnostics.is_empty() {
                Some(verify_galois(&g, &report).map_err(check)?)
            } else {
                None
            };
            let galois_ok = galois_report.as_ref().is_none_or(|r| r.passed());
            let failed = !report.diagnostics.is_empty()
                || local.is_err()
                || !mismatches.is_empty()
                || links.is_err()
                || !coherent
                || !galois_ok;
            let out = if format.json {
                let mut j = json!({
                    "mode": report.mode,
                    "faces": report.subgraphs.iter().enumerate().map(|(i, h)| json!({
                        "id": h.id(&g),
                        "rank": report.rank[i],
                        "drk": report.drk[i],
                        "com": report.com(i),
                        "vertices": h.vertices().iter().map(|&v| g.vertex(v)).collect::<Vec<_>>(),
                    })).collect::<Vec<_>>(),
                    "poset": poset_to_json(&report.faces),
                    "diagnostics": report.diagnostics.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                    "locally_geometric": local.is_ok(),
                    "local_lattices": mismatches.is_empty(),
                    "upper_links": links.is_ok(),
                    "gkm_coherent": coherent,
                });
                if galois {
                    j["galois"] = match &galois_report {
                        Some(r) => json!({
                            "pass": r.passed(),
                            "faces_checked": r.faces_checked,
                            "survivors_checked": r.survivors_checked,
                            "failures": r.failures.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                        }),
                        None => json!("skipped"),
                    };
                }
                json_string(&j)
            } else {
                let mut out = format!("mode: {}\nfaces: {}\n", report.mode, report.len());
                out.push_str(&report.table(&g));
                if report.diagnostics.is_empty() {
                    writeln!(out, "diagnostics: none").unwrap();
                } else {
                    writeln!(out, "diagnostics: {}", report.diagnostics.len()).unwrap();
                    for d in &report.diagnostics {
                        writeln!(out, "  {d}").unwrap();
                    }
                }
                match &local {
                    Ok(k) => writeln!(out, "locally geometric: pass (rank {k})").unwrap(),
                    Err(v) => writeln!(out, "locally geometric: fail: {v}").unwrap(),
                }
                if mismatches.is_empty() {
                    writeln!(out, "local lattices: pass").unwrap();
                } else {
                    writeln!(out, "local lattices: fail at {}", mismatches.join(", ")).unwrap();
                }
                match &links {
                    Ok(()) => writeln!(out, "upper links: pass").unwrap(),
                    Err(f) => writeln!(out, "upper links: fail: {f}").unwrap(),
                }
                writeln!(out, "gkm-coherent: {}", verdict(coherent)).unwrap();
                if galois {
                    match &galois_report {
                        Some(r) if r.passed() => writeln!(
                            out,
                            "galois: pass ({} faces, {} survivors)",
                            r.faces_checked, r.survivors_checked
                        )
                        .unwrap(),
                        Some(r) => {
                            writeln!(out, "galois: fail").unwrap();
                            for f in &r.failures {
                                writeln!(out, "  {f}").unwrap();
                            }
                        }
                        None => writeln!(out, "galois: skipped (diagnostics present)").unwrap(),
                    }
                }
                out
            };
            Ok(Report { out, failed })
        }
    }
}

fn faces(
    g: &GkmGraph,
    mode: &str,
    opts: &FaceOpts,
    format: &Format,
    cap: usize,
    connection: &ConnectionFor<'_>,
) -> CmdResult {
    let filter = face_filters().get(mode).map_err(input)?;
    connection_rules().resolve(opts.rule.as_deref()).map_err(input)?;
    let conn = if filter.needs_connection() {
        Some(connection(g, &opts.rule)?)
    } else {
        None
    };
    let e = enumerate_faces_with(g, filter.as_ref(), conn.as_ref(), cap).map_err(check)?;
    let out = if format.json {
        json_string(&faces_json(g, &e))
    } else if format.dot {
        poset_to_dot(&e.poset)
    } else {
        face_table(g, &e)
    };
    Ok(Report::ok(out))
}

trait NameOwned {
    fn name_owned(&self) -> String;
}

impl<T: toric_faces::strategy::Named + ?Sized> NameOwned for std::sync::Arc<T> {
    fn name_owned(&self) -> String {
        let name = self.as_ref().name();
        name.to_string()
    }
}
