//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a verified property fails or a load
//! cannot be resolved, 2 on any input error. Errors are reported on stderr as
//! `{"error": kind, "message": text}`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::catalog::{make_example, DesarguesVariant, ExampleSpec};
use crate::error::{Error, Result};
use crate::framework::{
    affine_span_dim, framework_to_value, parse_framework, parse_load, parse_velocity_field,
    Framework, Geometry, VelocityField,
};
use crate::linalg::TolerancePolicy;
use crate::pogorelov::{central_project, fit_disk, pogorelov_transport, Direction};
use crate::projective::{apply_projective, transport_load, transport_motion, ProjectiveMap};
use crate::rigidity::{analyze_kinematics, analyze_statics, resolve_load};
use crate::verify::{run, Property, VerifyPlan};

#[derive(Parser, Debug)]
#[command(
    name = "infrig",
    version,
    about = "Infinitesimal rigidity of bar-joint frameworks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Numeric {
    /// Relative singular-value cutoff for floating rank decisions.
    #[arg(long, default_value_t = TolerancePolicy::DEFAULT_REL_EPSILON)]
    tolerance: f64,
    /// Decide ranks in exact rational arithmetic.
    #[arg(long)]
    exact: bool,
}

impl Numeric {
    fn policy(self) -> Result<TolerancePolicy> {
        if self.exact {
            Ok(TolerancePolicy::exact())
        } else {
            TolerancePolicy::with_rel_epsilon(self.tolerance)
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Motions, trivial motions and degrees of freedom of a framework.
    Analyze {
        framework: PathBuf,
        #[command(flatten)]
        numeric: Numeric,
        /// Also write the singular values of the rigidity matrix as CSV.
        #[arg(long, value_name = "PATH")]
        sv_csv: Option<PathBuf>,
    },
    /// Find a stress resolving a load.
    Resolve {
        framework: PathBuf,
        load: PathBuf,
        #[command(flatten)]
        numeric: Numeric,
    },
    /// Apply a projective map, optionally transporting a motion and a load.
    Transform {
        framework: PathBuf,
        map: PathBuf,
        #[arg(long, value_name = "PATH")]
        field: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        load: Option<PathBuf>,
    },
    /// Central projection onto the hyperboloid or sphere, with velocity transport.
    Pogorelov {
        framework: PathBuf,
        /// hyperbolic or spherical; implied by --direction when omitted.
        #[arg(long)]
        target: Option<Geometry>,
        /// Recentre and scale into the disk of this radius first.
        #[arg(long, value_name = "R")]
        fit_disk: Option<f64>,
        /// Velocity field to transport.
        #[arg(long, value_name = "PATH")]
        field: Option<PathBuf>,
        /// to-hyperbolic, from-hyperbolic, to-spherical or from-spherical.
        #[arg(long)]
        direction: Option<Direction>,
    },
    /// Generate an example framework.
    Catalog(CatalogArgs),
    /// Check a property on seeded random instances.
    Verify {
        #[arg(long)]
        property: Property,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Relative singular-value cutoff for floating rank decisions.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Allowed relative residual of transported motions and loads.
        #[arg(long)]
        residual_tolerance: Option<f64>,
        /// Allowed relative gap for closed forms and round trips.
        #[arg(long)]
        closed_form_tolerance: Option<f64>,
        /// Write each failing instance here as framework JSON.
        #[arg(long, value_name = "DIR")]
        dump_dir: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct CatalogArgs {
    /// simplex, cycle, twisted_octahedron, liebmann_octahedron, desargues or bipartite_quadric.
    id: String,
    #[arg(long)]
    dimension: Option<usize>,
    #[arg(long)]
    vertices: Option<usize>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    height: Option<f64>,
    /// Twist of the top face in degrees.
    #[arg(long, allow_negative_numbers = true)]
    twist: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    /// concurrent, parallel or generic.
    #[arg(long)]
    variant: Option<String>,
    /// Shorthand for --variant concurrent / generic.
    #[arg(long)]
    concurrent: Option<bool>,
    #[arg(long)]
    white: Option<usize>,
    #[arg(long)]
    black: Option<usize>,
    /// Comma-separated semi-axes of the quadric.
    #[arg(long, value_delimiter = ',')]
    semi_axes: Option<Vec<f64>>,
}

enum Outcome {
    Success,
    Violation,
}

fn read(path: &Path) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v)?)?;
    Ok(())
}

fn unused(id: &str, flag: &str, given: bool) -> Result<()> {
    if given {
        return Err(Error::InvalidParameters(format!(
            "--{flag} does not apply to {id}"
        )));
    }
    Ok(())
}

fn catalog_spec(a: &CatalogArgs) -> Result<ExampleSpec> {
    let mut spec = ExampleSpec::default_for(&a.id)?;
    let id = a.id.as_str();
    let variant = match (&a.variant, a.concurrent) {
        (Some(_), Some(_)) => {
            return Err(Error::InvalidParameters(
                "give either --variant or --concurrent".into(),
            ))
        }
        (Some(v), None) => Some(
            serde_json::from_value::<DesarguesVariant>(json!(v))
                .map_err(|_| Error::InvalidParameters(format!("unknown variant '{v}'")))?,
        ),
        (None, Some(true)) => Some(DesarguesVariant::Concurrent),
        (None, Some(false)) => Some(DesarguesVariant::Generic),
        (None, None) => None,
    };
    match &mut spec {
        ExampleSpec::Simplex { dimension } => {
            *dimension = a.dimension.unwrap_or(*dimension);
        }
        ExampleSpec::Cycle { vertices, radius } => {
            *vertices = a.vertices.unwrap_or(*vertices);
            *radius = a.radius.unwrap_or(*radius);
        }
        ExampleSpec::TwistedOctahedron {
            radius,
            height,
            twist_degrees,
        } => {
            *radius = a.radius.unwrap_or(*radius);
            *height = a.height.unwrap_or(*height);
            *twist_degrees = a.twist.unwrap_or(*twist_degrees);
        }
        ExampleSpec::LiebmannOctahedron { t } => {
            *t = a.t.unwrap_or(*t);
        }
        ExampleSpec::Desargues { variant: v } => {
            *v = variant.unwrap_or(*v);
        }
        ExampleSpec::BipartiteQuadric {
            white,
            black,
            semi_axes,
        } => {
            *white = a.white.unwrap_or(*white);
            *black = a.black.unwrap_or(*black);
            if let Some(axes) = &a.semi_axes {
                *semi_axes = axes.clone();
            }
        }
    }
    let uses = |ids: &[&str]| ids.contains(&id);
    unused(
        id,
        "dimension",
        a.dimension.is_some() && !uses(&["simplex"]),
    )?;
    unused(id, "vertices", a.vertices.is_some() && !uses(&["cycle"]))?;
    unused(
        id,
        "radius",
        a.radius.is_some() && !uses(&["cycle", "twisted_octahedron"]),
    )?;
    unused(
        id,
        "height",
        a.height.is_some() && !uses(&["twisted_octahedron"]),
    )?;
    unused(
        id,
        "twist",
        a.twist.is_some() && !uses(&["twisted_octahedron"]),
    )?;
    unused(id, "t", a.t.is_some() && !uses(&["liebmann_octahedron"]))?;
    unused(id, "variant", variant.is_some() && !uses(&["desargues"]))?;
    unused(
        id,
        "white",
        a.white.is_some() && !uses(&["bipartite_quadric"]),
    )?;
    unused(
        id,
        "black",
        a.black.is_some() && !uses(&["bipartite_quadric"]),
    )?;
    unused(
        id,
        "semi-axes",
        a.semi_axes.is_some() && !uses(&["bipartite_quadric"]),
    )?;
    Ok(spec)
}

fn analyze(
    out: &mut dyn Write,
    path: &Path,
    numeric: Numeric,
    sv_csv: Option<&Path>,
) -> Result<Outcome> {
    let fw = parse_framework(&read(path)?)?;
    let policy = numeric.policy()?;
    let report = analyze_kinematics(&fw, policy)?;
    let mut v = report.to_json();
    v["mode"] = json!(if policy.is_exact() {
        "exact"
    } else {
        "floating"
    });
    if fw.geometry() == Geometry::Euclidean && affine_span_dim(&fw, policy)? == fw.dimension() {
        v["statics"] = analyze_statics(&fw, policy)?.to_json();
    }
    if let Some(p) = sv_csv {
        let mut csv = String::from("index,singular_value\n");
        for (i, s) in report.singular_values.iter().enumerate() {
            csv.push_str(&format!("{i},{s:e}\n"));
        }
        fs::write(p, csv)?;
    }
    emit(out, &v)?;
    Ok(Outcome::Success)
}

fn resolve(
    out: &mut dyn Write,
    fw_path: &Path,
    load_path: &Path,
    numeric: Numeric,
) -> Result<Outcome> {
    let fw = parse_framework(&read(fw_path)?)?;
    let load = parse_load(&read(load_path)?)?;
    let r = resolve_load(&fw, &load, numeric.policy()?)?;
    emit(out, &r.to_json())?;
    Ok(if r.is_resolved() {
        Outcome::Success
    } else {
        Outcome::Violation
    })
}

fn rows(v: &[Vec<f64>]) -> Value {
    json!(v)
}

fn transform(
    out: &mut dyn Write,
    fw_path: &Path,
    map_path: &Path,
    field: Option<&Path>,
    load: Option<&Path>,
) -> Result<Outcome> {
    let fw = parse_framework(&read(fw_path)?)?;
    let phi = ProjectiveMap::from_json(&read(map_path)?)?;
    let image = apply_projective(&phi, &fw)?;
    if field.is_none() && load.is_none() {
        emit(out, &framework_to_value(&image))?;
        return Ok(Outcome::Success);
    }
    let mut v = json!({"framework": framework_to_value(&image)});
    if let Some(p) = field {
        let q = parse_velocity_field(&read(p)?)?;
        v["field"] = rows(&transport_motion(&phi, &fw, &q)?.vectors);
    }
    if let Some(p) = load {
        let f = parse_load(&read(p)?)?;
        v["load"] = rows(&transport_load(&phi, &fw, &f)?.forces);
    }
    emit(out, &v)?;
    Ok(Outcome::Success)
}

fn pogorelov(
    out: &mut dyn Write,
    path: &Path,
    target: Option<Geometry>,
    radius: Option<f64>,
    field: Option<&Path>,
    direction: Option<Direction>,
) -> Result<Outcome> {
    let mut fw: Framework = parse_framework(&read(path)?)?;
    let target = match (target, direction) {
        (Some(t), Some(d)) if d.target() != t => {
            return Err(Error::InvalidParameters(format!(
                "--direction leads to {} but --target is {t}",
                d.target()
            )))
        }
        (Some(t), _) => t,
        (None, Some(d)) => d.target(),
        (None, None) => {
            return Err(Error::InvalidParameters(
                "give --target or --direction".into(),
            ));
        }
    };
    if let Some(r) = radius {
        fw = fit_disk(&fw, r)?;
    }
    let projected = central_project(&fw, target)?;
    let Some(field) = field else {
        emit(out, &framework_to_value(&projected))?;
        return Ok(Outcome::Success);
    };
    let direction = direction.unwrap_or(if target == Geometry::Hyperbolic {
        Direction::ToHyperbolic
    } else {
        Direction::ToSpherical
    });
    let q: VelocityField = parse_velocity_field(&read(field)?)?;
    let moved = pogorelov_transport(&fw, &q, direction)?;
    let mut v = json!({
        "framework": framework_to_value(&projected),
        "direction": direction,
        "field": rows(&moved.vectors),
    });
    if radius.is_some() {
        v["euclidean"] = framework_to_value(&fw);
    }
    emit(out, &v)?;
    Ok(Outcome::Success)
}

#[allow(clippy::too_many_arguments)]
fn verify(
    out: &mut dyn Write,
    property: Property,
    trials: usize,
    seed: u64,
    tolerance: Option<f64>,
    residual: Option<f64>,
    closed_form: Option<f64>,
    dump_dir: Option<&Path>,
) -> Result<Outcome> {
    let mut plan = VerifyPlan::new(property, trials, seed)?;
    if let Some(t) = tolerance {
        plan.rel_epsilon = TolerancePolicy::with_rel_epsilon(t)?.rel_epsilon;
    }
    for (slot, given) in [
        (&mut plan.residual_tolerance, residual),
        (&mut plan.closed_form_tolerance, closed_form),
    ] {
        if let Some(t) = given {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::InvalidParameters(format!(
                    "tolerance must be positive, got {t}"
                )));
            }
            *slot = t;
        }
    }
    let report = run(&plan);
    if let Some(dir) = dump_dir {
        fs::create_dir_all(dir)?;
        for o in report.failures() {
            if let Some(fw) = &o.instance {
                let name = format!("{}-seed{}-trial{}.json", property, seed, o.index);
                let mut doc = framework_to_value(fw);
                doc["trial"] = o.metrics.clone();
                fs::write(dir.join(name), serde_json::to_string_pretty(&doc)? + "\n")?;
            }
        }
    }
    emit(out, &report.to_json())?;
    Ok(if report.all_passed() {
        Outcome::Success
    } else {
        Outcome::Violation
    })
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<Outcome> {
    match cli.command {
        Command::Analyze {
            framework,
            numeric,
            sv_csv,
        } => analyze(out, &framework, numeric, sv_csv.as_deref()),
        Command::Resolve {
            framework,
            load,
            numeric,
        } => resolve(out, &framework, &load, numeric),
        Command::Transform {
            framework,
            map,
            field,
            load,
        } => transform(out, &framework, &map, field.as_deref(), load.as_deref()),
        Command::Pogorelov {
            framework,
            target,
            fit_disk,
            field,
            direction,
        } => pogorelov(
            out,
            &framework,
            target,
            fit_disk,
            field.as_deref(),
            direction,
        ),
        Command::Catalog(args) => {
            let entry = make_example(&catalog_spec(&args)?)?;
            emit(out, &entry.to_json())?;
            Ok(Outcome::Success)
        }
        Command::Verify {
            property,
            trials,
            seed,
            tolerance,
            residual_tolerance,
            closed_form_tolerance,
            dump_dir,
        } => verify(
            out,
            property,
            trials,
            seed,
            tolerance,
            residual_tolerance,
            closed_form_tolerance,
            dump_dir.as_deref(),
        ),
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the process exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(Outcome::Success) => 0,
        Ok(Outcome::Violation) => 1,
        Err(e) => {
            let diag = json!({"error": e.kind(), "message": e.to_string()});
            let _ = writeln!(err, "{diag}");
            2
        }
    }
}
