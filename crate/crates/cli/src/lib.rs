//! `blowup-atlas`: verify, classify, connect and visualize planar blowups.

pub mod bundle;
pub mod serve;

use blowup_core::certify::Options;
use blowup_core::rational::{format_rational, parse_rational};
use blowup_core::{Point, Rational};
use blowup_deform::{connect_blowups, DeformError, PipelineOptions};
use blowup_geometry::{implicit, implicitize, limit_arcs, TorusParams};
use blowup_model::{
    classify, exceptional_fibers, is_regular, sign_distribution, superfluous_points, BlowupSpec, Fiber, ModelError,
};
use bundle::{build_bundle, default_torus, frame_times, FamilyInput};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "blowup-atlas", version, about = "Planar blowups: certificates, isotopies and torus pictures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct TorusArgs {
    /// Tube radius; defaults to |cx| + |cy| + R of the input disk.
    #[arg(long)]
    pub rho: Option<String>,
    /// Core radius; defaults to 2·rho.
    #[arg(long)]
    pub r: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the declared center against the zero set of the pair.
    Verify {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        max_depth: Option<u32>,
    },
    /// Decide whether two blowups over the same center are isomorphic.
    Classify {
        #[arg(long, num_args = 1, required = true)]
        spec: Vec<PathBuf>,
    },
    /// Build a certified isotopy between two isomorphic blowups.
    Connect {
        #[arg(long, num_args = 1, required = true)]
        spec: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        max_depth: Option<u32>,
    },
    /// Limit arcs over the center points.
    Limits {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        family: Option<PathBuf>,
        /// Comma-separated times, e.g. `0,1/2,1`.
        #[arg(long, value_delimiter = ',')]
        t: Vec<String>,
        #[arg(long)]
        csv: bool,
    },
    /// Mesh one frame and write OBJ, mesh JSON and a one-frame bundle.
    Mesh {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long, default_value = "0")]
        t: String,
        #[command(flatten)]
        torus: TorusArgs,
        #[arg(long, default_value_t = 6)]
        resolution: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Mesh a family at evenly spaced times.
    Animate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long, default_value_t = 11)]
        frames: usize,
        #[command(flatten)]
        torus: TorusArgs,
        #[arg(long, default_value_t = 5)]
        resolution: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Implicit equation of the torus picture in u, v, w.
    Implicitize {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        torus: TorusArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serve a directory of bundles over HTTP.
    Serve {
        #[arg(long)]
        bundles: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Wall-clock cap for POST /compute, in milliseconds.
        #[arg(long, default_value_t = 10_000)]
        budget_ms: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Verification(String),
    Classification(String),
    Synthesis(String),
    Io(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Classification(_) => 2,
            Failure::Synthesis(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Classification(m) | Failure::Synthesis(m) | Failure::Io(m) => m,
        }
    }
}

type Outcome = Result<(), Failure>;

fn io<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Io(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Outcome {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn print(out: &mut dyn Write, v: &serde_json::Value) -> Outcome {
    writeln!(out, "{}", serde_json::to_string_pretty(v).map_err(io)?).map_err(io)
}

pub fn parse_spec(text: &str) -> Result<BlowupSpec, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Io(format!("spec: {e}")))
}

fn certify_opts(max_depth: Option<u32>) -> Options {
    let mut o = Options::default();
    if let Some(d) = max_depth {
        o.max_depth = d;
    }
    o
}

/// Reads and verifies a spec; a center mismatch prints the zero-set report.
fn load_spec(path: &Path, max_depth: Option<u32>, out: &mut dyn Write) -> Result<BlowupSpec, Failure> {
    let spec = parse_spec(&read(path)?)?;
    match spec.verify_with(&certify_opts(max_depth)) {
        Ok(s) => Ok(s),
        Err(ModelError::CenterMismatch(report)) => {
            print(out, &json!({ "spec": path.display().to_string(), "verified": false, "report": report }))?;
            Err(Failure::Verification(format!("{}: center does not match the zero set", path.display())))
        }
        Err(e) => Err(Failure::Verification(format!("{}: {e}", path.display()))),
    }
}

fn load_family(path: &Path) -> Result<FamilyInput, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Io(format!("family: {e}")))
}

fn rational_arg(s: &str) -> Result<Rational, Failure> {
    parse_rational(s).ok_or_else(|| Failure::Io(format!("not a rational number: {s}")))
}

fn torus_params(spec: &BlowupSpec, a: &TorusArgs) -> Result<TorusParams, Failure> {
    let (drho, _) = default_torus(spec);
    let rho = a.rho.as_deref().map(rational_arg).transpose()?.unwrap_or(drho);
    let r = a.r.as_deref().map(rational_arg).transpose()?.unwrap_or_else(|| &rho * Rational::from_integer(2.into()));
    let tp = TorusParams::new(rho, r).map_err(|e| Failure::Io(e.to_string()))?;
    tp.check_disk(&spec.disk).map_err(|e| Failure::Io(e.to_string()))?;
    Ok(tp)
}

fn point_json(p: &Point) -> serde_json::Value {
    json!([format_rational(&p.0), format_rational(&p.1)])
}

fn cmd_verify(spec: &Path, max_depth: Option<u32>, out: &mut dyn Write) -> Outcome {
    let s = load_spec(spec, max_depth, out)?;
    let regular = is_regular(&s);
    let superfluous: Vec<_> = superfluous_points(&s).map_err(io)?.iter().map(point_json).collect();
    let fibers: Vec<_> = exceptional_fibers(&s)
        .map_err(io)?
        .fibers
        .iter()
        .map(|(p, f)| match f {
            Fiber::FullFiber => json!({ "point": point_json(p), "fiber": "full" }),
            Fiber::SinglePoint(q) => json!({ "point": point_json(p), "fiber": q }),
        })
        .collect();
    let signs = if regular {
        let d = sign_distribution(&s).map_err(io)?;
        json!(d.entries.iter().map(|(p, v)| json!({ "point": point_json(p), "sign": v })).collect::<Vec<_>>())
    } else {
        serde_json::Value::Null
    };
    print(
        out,
        &json!({ "spec": spec.display().to_string(), "verified": true, "regular": regular,
                 "superfluous": superfluous, "fibers": fibers, "signs": signs }),
    )
}

fn two_specs(specs: &[PathBuf]) -> Result<(&Path, &Path), Failure> {
    match specs {
        [a, b] => Ok((a, b)),
        _ => Err(Failure::Io("expected exactly two --spec arguments".into())),
    }
}

fn sign_table(s: &BlowupSpec) -> Result<serde_json::Value, Failure> {
    let d = sign_distribution(s).map_err(|e| Failure::Classification(e.to_string()))?;
    Ok(json!(d.entries.iter().map(|(p, v)| json!({ "point": point_json(p), "sign": v })).collect::<Vec<_>>()))
}

fn cmd_classify(specs: &[PathBuf], out: &mut dyn Write) -> Outcome {
    let (a, b) = two_specs(specs)?;
    let (sa, sb) = (load_spec(a, None, out)?, load_spec(b, None, out)?);
    let iso = classify(&sa, &sb).map_err(|e| Failure::Classification(e.to_string()))?;
    print(
        out,
        &json!({ "isomorphic": iso, "verdict": if iso { "isomorphic" } else { "not isomorphic" },
                 "signs_a": sign_table(&sa)?, "signs_b": sign_table(&sb)? }),
    )
}

fn cmd_connect(specs: &[PathBuf], dest: Option<&Path>, max_depth: Option<u32>, out: &mut dyn Write) -> Outcome {
    let (a, b) = two_specs(specs)?;
    let (sa, sb) = (load_spec(a, max_depth, out)?, load_spec(b, max_depth, out)?);
    let opts = PipelineOptions { certify: certify_opts(max_depth), ..Default::default() };
    let fam = connect_blowups(&sa, &sb, &opts).map_err(|e| match e {
        DeformError::NotIsomorphic | DeformError::Model(_) => Failure::Classification(e.to_string()),
        e => Failure::Synthesis(e.to_string()),
    })?;
    let text = serde_json::to_string_pretty(&fam).map_err(io)?;
    match dest {
        Some(p) => {
            write_file(p, &text)?;
            print(out, &json!({ "family": p.display().to_string(), "provenance": fam.provenance }))
        }
        None => writeln!(out, "{text}").map_err(io),
    }
}

fn times(args: &[String]) -> Result<Vec<Rational>, Failure> {
    if args.is_empty() {
        return Ok(vec![Rational::from_integer(0.into())]);
    }
    args.iter().map(|s| rational_arg(s)).collect()
}

fn cmd_limits(spec: &Path, family: Option<&Path>, t: &[String], csv: bool, out: &mut dyn Write) -> Outcome {
    let s = load_spec(spec, None, out)?;
    let fam = family.map(load_family).transpose()?;
    let mut rows = Vec::new();
    for t in times(t)? {
        let pair = match &fam {
            Some(f) => f.pair_at(&s, &t),
            None => s.pair(),
        };
        for p in &s.center {
            match limit_arcs(&pair, p) {
                Ok(arc) => rows.push(json!({ "t": format_rational(&t), "point": point_json(p), "tau": arc.tau,
                                             "beta_ranges": arc.beta_ranges, "angular_length": arc.angular_length })),
                Err(e) => rows.push(json!({ "t": format_rational(&t), "point": point_json(p), "error": e.to_string() })),
            }
        }
    }
    if !csv {
        return print(out, &json!(rows));
    }
    writeln!(out, "t,x,y,beta_lo,beta_hi,angular_length").map_err(io)?;
    for r in &rows {
        let pt = &r["point"];
        let (t, x, y) = (r["t"].as_str().unwrap_or(""), pt[0].as_str().unwrap_or(""), pt[1].as_str().unwrap_or(""));
        match r["beta_ranges"].as_array() {
            Some(ranges) => {
                for b in ranges {
                    writeln!(out, "{t},{x},{y},{},{},{}", b[0], b[1], r["angular_length"]).map_err(io)?;
                }
            }
            None => writeln!(out, "{t},{x},{y},,,").map_err(io)?,
        }
    }
    Ok(())
}

fn frame_error(e: blowup_geometry::GeometryError) -> Failure {
    Failure::Io(e.to_string())
}

#[allow(clippy::too_many_arguments)]
fn cmd_mesh(
    spec: &Path,
    family: Option<&Path>,
    t: &str,
    torus: &TorusArgs,
    resolution: u32,
    dest: &Path,
    frames: Option<usize>,
    out: &mut dyn Write,
) -> Outcome {
    let s = load_spec(spec, None, out)?;
    let fam = family.map(load_family).transpose()?;
    let tp = torus_params(&s, torus)?;
    let ts = match frames {
        Some(n) => frame_times(n),
        None => vec![rational_arg(t)?],
    };
    let mut certs = vec![format!("center verified: {}", spec.display())];
    if let Some(f) = family {
        certs.push(format!("family: {}", f.display()));
    }
    let b = build_bundle(&s, fam.as_ref(), &ts, &tp, resolution, certs).map_err(frame_error)?;
    std::fs::create_dir_all(dest).map_err(io)?;
    let mut written = Vec::new();
    for (k, f) in b.frames.iter().enumerate() {
        let name = if frames.is_some() { format!("frame-{k:03}") } else { "mesh".to_string() };
        write_file(&dest.join(format!("{name}.obj")), &f.mesh.to_obj())?;
        write_file(&dest.join(format!("{name}.json")), &serde_json::to_string(&f.mesh).map_err(io)?)?;
        written.push(name);
    }
    write_file(&dest.join("bundle.json"), &serde_json::to_string(&b).map_err(io)?)?;
    print(out, &json!({ "out": dest.display().to_string(), "frames": written,
                        "triangles": b.frames.iter().map(|f| f.mesh.triangles.len()).collect::<Vec<_>>() }))
}

fn cmd_implicitize(spec: &Path, torus: &TorusArgs, dest: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let s = load_spec(spec, None, out)?;
    let tp = torus_params(&s, torus)?;
    let f = implicitize(&s.pair(), &tp).map_err(|e| Failure::Synthesis(e.to_string()))?;
    let text = implicit::to_text(&f);
    match dest {
        Some(p) => write_file(p, &format!("{text}\n")),
        None => writeln!(out, "{text}").map_err(io),
    }
}

/// Runs one command; the return value is the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let r = match cli.command {
        Command::Verify { spec, max_depth } => cmd_verify(&spec, max_depth, out),
        Command::Classify { spec } => cmd_classify(&spec, out),
        Command::Connect { spec, out: dest, max_depth } => cmd_connect(&spec, dest.as_deref(), max_depth, out),
        Command::Limits { spec, family, t, csv } => cmd_limits(&spec, family.as_deref(), &t, csv, out),
        Command::Mesh { spec, family, t, torus, resolution, out: dest } => {
            cmd_mesh(&spec, family.as_deref(), &t, &torus, resolution, &dest, None, out)
        }
        Command::Animate { spec, family, frames, torus, resolution, out: dest } => {
            cmd_mesh(&spec, family.as_deref(), "0", &torus, resolution, &dest, Some(frames), out)
        }
        Command::Implicitize { spec, torus, out: dest } => cmd_implicitize(&spec, &torus, dest.as_deref(), out),
        Command::Serve { bundles, port, budget_ms } => serve::serve_blocking(&bundles, port, budget_ms).map_err(io),
    };
    match r {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

/// Worker cap from `BLOWUP_ATLAS_THREADS`.
pub fn thread_cap() -> Option<usize> {
    std::env::var("BLOWUP_ATLAS_THREADS").ok()?.parse().ok().filter(|n| *n > 0)
}
