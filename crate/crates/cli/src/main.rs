//! `cayrs`: command line access to linkage analyses.
//!
//! Results go to stdout as JSON (or CSV with `--format csv`). Errors are
//! printed to stdout as a JSON object with an `error` field and summarized
//! on stderr. Exit status is 1 for domain errors and 2 for bad input.

use std::io::Write;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use cayrs_core::{
    parse_literal, Analysis, Error, LinkageSpec, Realization, RealizationType, TdLinkage, Tolerances, Uniform,
    VertexPair,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "cayrs", version, about = "Cayley configuration spaces of 1-dof planar linkages")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args)]
struct Input {
    /// Linkage file (JSON).
    file: PathBuf,
    /// Base non-edge `u,v`, overriding the file.
    #[arg(long, value_name = "U,V")]
    base: Option<String>,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args)]
struct TolArgs {
    /// Relative collinearity tolerance.
    #[arg(long)]
    tol_geom: Option<f64>,
    /// Relative tolerance for merging interval endpoints.
    #[arg(long)]
    tol_endpoint: Option<f64>,
}

#[derive(Clone, Copy, Default, PartialEq, ValueEnum)]
enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Verb {
    /// Construction steps, low complexity and the complete Cayley vector.
    Check(Input),
    /// Cayley configuration space.
    Ccs {
        #[command(flatten)]
        input: Input,
        /// Only the oriented space of this realization type.
        #[arg(long = "type", allow_hyphen_values = true)]
        rtype: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Connected components of the realization space.
    Components {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        component: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Realization for a literal `L:signs`.
    Realize {
        #[command(flatten)]
        input: Input,
        #[arg(allow_hyphen_values = true)]
        literal: String,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Continuous motions between two realizations.
    Path {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
    },
    /// Closest sampled realizations of the components holding two realizations.
    Closest {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        /// Samples per leg.
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// Cayley curve of a component projected on three non-edges.
    Curve3d {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0)]
        component: usize,
        #[arg(long, num_args = 3, required = true, value_name = "U,V")]
        nonedges: Vec<String>,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Curves traced by vertices along a component.
    Trace {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0)]
        component: usize,
        #[arg(long, required = true)]
        vertex: Vec<String>,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[command(flatten)]
        tol: TolArgs,
    },
}

enum Failure {
    Input(String, String),
    Core(Error, Option<Box<TdLinkage>>),
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure::Input("InvalidArguments".into(), message.into())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e, None)
    }
}

type Outcome<T = String> = Result<T, Failure>;

fn tolerances(args: &TolArgs) -> Outcome<Tolerances> {
    let mut tol = Tolerances::default();
    for (value, slot, flag) in
        [(args.tol_geom, &mut tol.geom, "--tol-geom"), (args.tol_endpoint, &mut tol.endpoint, "--tol-endpoint")]
    {
        if let Some(v) = value {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Failure::usage(format!("{flag} must be positive, got {v}")));
            }
            *slot = v;
        }
    }
    if let Ok(cap) = std::env::var("CAYRS_MAX_TYPES") {
        tol.max_types = cap
            .trim()
            .parse()
            .ok()
            .filter(|c| *c > 0)
            .ok_or_else(|| Failure::usage(format!("CAYRS_MAX_TYPES must be a positive integer, got {cap:?}")))?;
    }
    Ok(tol)
}

fn split_pair(text: &str) -> Outcome<(&str, &str)> {
    text.split_once(',')
        .map(|(u, v)| (u.trim(), v.trim()))
        .ok_or_else(|| Failure::usage(format!("expected a vertex pair u,v, got {text:?}")))
}

fn load(input: &Input) -> Outcome<(TdLinkage, Tolerances)> {
    let tol = tolerances(&input.tol)?;
    let text = std::fs::read_to_string(&input.file)
        .map_err(|e| Failure::Input("Io".into(), format!("{}: {e}", input.file.display())))?;
    let spec = LinkageSpec::from_json(&text)?;
    let base = input.base.as_deref().map(split_pair).transpose()?;
    Ok((TdLinkage::with_base(&spec, base, &tol)?, tol))
}

fn analyze(input: &Input) -> Outcome<Analysis> {
    let (linkage, tol) = load(input)?;
    let keep = linkage.clone();
    Analysis::new(linkage, &tol).map_err(|e| Failure::Core(e, Some(Box::new(keep))))
}

/// Attaches the linkage to errors so payloads can name vertices.
fn within<T>(a: &Analysis, r: cayrs_core::Result<T>) -> Outcome<T> {
    r.map_err(|e| Failure::Core(e, Some(Box::new(a.linkage.clone()))))
}

fn realize_literal(a: &Analysis, text: &str) -> Outcome<Realization> {
    let (length, rtype) = parse_literal(text)?;
    within(a, a.realize(length, &rtype))
}

fn sampler(samples: usize) -> Outcome<Uniform> {
    if samples < 2 {
        return Err(Failure::usage(format!("--samples must be at least 2, got {samples}")));
    }
    Ok(Uniform { per_leg: samples })
}

fn pretty(value: &Value) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("json value serializes");
    out.push('\n');
    out
}

fn ccs(input: &Input, rtype: Option<&str>, format: Format) -> Outcome {
    let a = analyze(input)?;
    let Some(rtype) = rtype else {
        return Ok(match format {
            Format::Json => pretty(&a.ccs.to_json()),
            Format::Csv => {
                let mut out = String::from("lower,upper\n");
                for (lo, hi) in &a.ccs.non_oriented {
                    out.push_str(&format!("{lo},{hi}\n"));
                }
                out
            }
        });
    };
    let rtype = RealizationType::parse(rtype)?;
    if rtype.len() != a.linkage.step_count() {
        return Err(Error::TypeLength { expected: a.linkage.step_count(), got: rtype.len() }.into());
    }
    let space = a.ccs.space_of(&rtype).map(|s| &a.ccs.oriented[s]);
    let intervals: Vec<(f64, f64)> =
        space.map(|s| s.intervals.iter().map(|i| (i.lower, i.upper)).collect()).unwrap_or_default();
    Ok(match format {
        Format::Json => pretty(&json!({ "type": rtype.to_string(), "intervals": intervals })),
        Format::Csv => {
            let mut out = String::from("type,lower,upper\n");
            for (lo, hi) in intervals {
                out.push_str(&format!("{rtype},{lo},{hi}\n"));
            }
            out
        }
    })
}

fn components(input: &Input, only: Option<usize>, format: Format) -> Outcome {
    let a = analyze(input)?;
    let indices: Vec<usize> = match only {
        Some(i) => {
            within(&a, a.component(i))?;
            vec![i]
        }
        None => (0..a.components().len()).collect(),
    };
    Ok(match format {
        Format::Json => {
            let list: Vec<Value> = indices
                .iter()
                .map(|&i| {
                    let mut out = a.components()[i].summary();
                    out["index"] = i.into();
                    out
                })
                .collect();
            pretty(&Value::Array(list))
        }
        Format::Csv => {
            let mut out = String::from("component,leg,type,lower,upper\n");
            for &i in &indices {
                for (k, leg) in a.components()[i].legs.iter().enumerate() {
                    out.push_str(&format!("{i},{k},{},{},{}\n", leg.rtype, leg.lower, leg.upper));
                }
            }
            out
        }
    })
}

fn realize(input: &Input, literal: &str, format: Format) -> Outcome {
    let (linkage, tol) = load(input)?;
    let (length, rtype) = parse_literal(literal)?;
    let r = cayrs_core::realize(&linkage, length, &rtype, &tol)
        .map_err(|e| Failure::Core(e, Some(Box::new(linkage.clone()))))?;
    Ok(match format {
        Format::Json => pretty(&r.to_json(&linkage)),
        Format::Csv => {
            let mut out = String::from("vertex,x,y\n");
            for (name, p) in cayrs_core::restore_decorations(&linkage, &r) {
                out.push_str(&format!("{name},{},{}\n", p.x, p.y));
            }
            out
        }
    })
}

fn path(input: &Input, from: &str, to: &str) -> Outcome {
    let a = analyze(input)?;
    let (r1, r2) = (realize_literal(&a, from)?, realize_literal(&a, to)?);
    let paths = within(&a, a.find_path(&r1, &r2))?;
    Ok(pretty(&json!({ "paths": paths.iter().map(|p| p.to_json()).collect::<Vec<_>>() })))
}

fn closest(input: &Input, from: &str, to: &str, samples: usize) -> Outcome {
    let sampler = sampler(samples)?;
    let a = analyze(input)?;
    let (r1, r2) = (realize_literal(&a, from)?, realize_literal(&a, to)?);
    let (i, j) = (within(&a, a.component_index(&r1))?, within(&a, a.component_index(&r2))?);
    let nearest = within(&a, a.nearest_realizations(&a.components()[i], &a.components()[j], &sampler))?;
    let mut out = nearest.to_json(&a.linkage);
    out["components"] = json!([i, j]);
    out["indices"] = json!([nearest.indices.0, nearest.indices.1]);
    Ok(pretty(&out))
}

fn curve3d(input: &Input, component: usize, nonedges: &[String], samples: usize, format: Format) -> Outcome {
    let sampler = sampler(samples)?;
    let a = analyze(input)?;
    let c = within(&a, a.component(component))?;
    let mut pairs = [VertexPair::new(0, 1); 3];
    for (slot, text) in pairs.iter_mut().zip(nonedges) {
        let (u, v) = split_pair(text)?;
        *slot = within(&a, a.linkage.pair_by_names(u, v))?;
    }
    let curve = within(&a, a.curve_3d(c, pairs, &sampler))?;
    Ok(match format {
        Format::Json => pretty(&serde_json::to_value(&curve).expect("curve serializes")),
        Format::Csv => curve.to_csv(),
    })
}

fn trace(input: &Input, component: usize, vertices: &[String], samples: usize, format: Format) -> Outcome {
    let sampler = sampler(samples)?;
    if format == Format::Csv && vertices.len() != 1 {
        return Err(Failure::usage("--format csv traces exactly one --vertex"));
    }
    let a = analyze(input)?;
    let c = within(&a, a.component(component))?;
    let names: Vec<&str> = vertices.iter().map(String::as_str).collect();
    let curves = within(&a, a.traced_curves(c, &names, &sampler))?;
    Ok(match format {
        Format::Json => pretty(&serde_json::to_value(&curves).expect("curves serialize")),
        Format::Csv => curves.values().map(|c| c.to_csv()).collect(),
    })
}

fn serve(port: u16, tol: &TolArgs) -> Outcome {
    let tol = tolerances(tol)?;
    let addr = SocketAddr::from(([127, 0, 0, 1], port));
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Input("Io".into(), e.to_string()))?;
    eprintln!("listening on http://{addr}");
    let state = cayrs_service::AppState::new(tol, cayrs_service::DEFAULT_CAPACITY);
    runtime.block_on(cayrs_service::serve(addr, state)).map_err(|e| Failure::Input("Io".into(), e.to_string()))?;
    Ok(String::new())
}

fn run(verb: &Verb) -> Outcome {
    match verb {
        Verb::Check(input) => {
            let (linkage, tol) = load(input)?;
            Ok(pretty(&linkage.summary(&tol)))
        }
        Verb::Ccs { input, rtype, format } => ccs(input, rtype.as_deref(), *format),
        Verb::Components { input, component, format } => components(input, *component, *format),
        Verb::Realize { input, literal, format } => realize(input, literal, *format),
        Verb::Path { input, from, to } => path(input, from, to),
        Verb::Closest { input, from, to, samples } => closest(input, from, to, *samples),
        Verb::Curve3d { input, component, nonedges, samples, format } => {
            curve3d(input, *component, nonedges, *samples, *format)
        }
        Verb::Trace { input, component, vertex, samples, format } => {
            trace(input, *component, vertex, *samples, *format)
        }
        Verb::Serve { port, tol } => serve(*port, tol),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (body, code) = match run(&cli.verb) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            return match stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()) {
                Ok(()) => ExitCode::SUCCESS,
                Err(_) => ExitCode::from(2),
            };
        }
        Err(Failure::Input(name, message)) => (json!({ "error": name, "message": message }), 2),
        Err(Failure::Core(e, linkage)) => (e.to_json(linkage.as_deref()), if e.is_input_error() { 2 } else { 1 }),
    };
    eprintln!("error: {}", body["message"].as_str().unwrap_or_default());
    print!("{}", pretty(&body));
    ExitCode::from(code)
}
