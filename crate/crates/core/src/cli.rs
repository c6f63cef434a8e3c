//! The `slicenorm` command line. [`run`] does all the work and returns the
//! exit code: 0 pass, 1 check failure, 2 usage or input error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{validate_well_defined, GridSpec};
use crate::io::{read_sampled, write_sampled, write_slice, Format, Provenance, VERSION};
use crate::norm::{
    conjugate_exponent, extremal_function, norm_lower_bound_search, ratio, serialize_exponent, slice_lp_norm,
    upper_bound_constant, lp_norm, SearchConfig,
};
use crate::projection::{corollary_ab_many, project, slice_kernel, Route};
use crate::quaternion::{ImaginaryUnit, Quaternion};
use crate::slice::{slice_defect, SliceFunction};
use crate::verify::{default_tolerance, run_verify, sig9, VerifyConfig, TOLERANCES};

#[derive(Debug, Parser)]
#[command(name = "slicenorm", version, about = "Projection onto slice functions on the quaternionic unit sphere, and its L^p norms")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Polar nodes of the sphere rule
    #[arg(long, global = true, default_value_t = GridSpec::DEFAULT_N_POLAR)]
    pub n_polar: usize,
    /// Azimuthal nodes of the sphere rule
    #[arg(long, global = true, default_value_t = GridSpec::DEFAULT_N_AZIMUTH)]
    pub n_azimuth: usize,
    /// Nodes on the circle
    #[arg(long = "nt", global = true, default_value_t = GridSpec::DEFAULT_N_T)]
    pub n_t: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Machine-readable output on stdout
    #[arg(long, global = true)]
    pub json: bool,
    /// Tolerance override, repeatable
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE", value_parser = parse_tol)]
    pub tol: Vec<(String, f64)>,
    /// Output file (.json for JSON, otherwise CSV)
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Run the verification suite and print the table of checks
    Verify {
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Project a sampled boundary function onto slice functions.
    /// The grid comes from the input file.
    Project {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = RouteArg::Boundary)]
        route: RouteArg,
        /// Radius for the interior route
        #[arg(short, long)]
        r: Option<f64>,
        /// Project even if the input is not well defined
        #[arg(long)]
        force: bool,
    },
    /// Bound, search or extremal ratio for the L^p norm of the projection
    Norm {
        /// Exponent, a number >= 1 or `inf`
        p: String,
        #[arg(value_enum, default_value_t = NormMode::Bound)]
        mode: NormMode,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Evaluate the interior kernel K(r e^{It}, e^{Js})
    KernelEval {
        r: f64,
        /// `i`, `j`, `k` or `x,y,z`
        #[arg(allow_hyphen_values = true)]
        i: String,
        #[arg(allow_hyphen_values = true)]
        t: f64,
        #[arg(allow_hyphen_values = true)]
        j: String,
        #[arg(allow_hyphen_values = true)]
        s: f64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Random restarts of the lower-bound search
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Iterations per restart
    #[arg(long)]
    pub iters: Option<usize>,
}

impl SearchArgs {
    fn config(&self, seed: u64) -> SearchConfig {
        let d = SearchConfig::default();
        SearchConfig { restarts: self.restarts.unwrap_or(d.restarts), iters: self.iters.unwrap_or(d.iters), seed, ..d }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RouteArg {
    Fourier,
    Boundary,
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NormMode {
    Bound,
    Search,
    Extremal,
}

fn parse_tol(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("tolerance `{k}`: `{v}` is not a number"))?;
    Ok((k.trim().to_string(), v))
}

fn parse_exponent(s: &str) -> Result<f64> {
    let p = match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" => f64::INFINITY,
        other => other.parse::<f64>().map_err(|_| Error::InvalidExponent(format!("`{s}` is neither a number nor `inf`")))?,
    };
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(format!("p = {s} must be >= 1")));
    }
    Ok(p)
}

/// Failure of a command: a failed check or a usage problem.
enum Failure {
    Check(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::IllDefined { .. } => Failure::Check(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(Failure::Check(msg)) => {
            let _ = writeln!(err, "slicenorm: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "slicenorm: {msg}");
            2
        }
    }
}

fn tolerances(common: &Common) -> std::result::Result<BTreeMap<String, f64>, Failure> {
    let mut map = BTreeMap::new();
    for (k, v) in &common.tol {
        if default_tolerance(k).is_none() {
            let keys: Vec<&str> = TOLERANCES.iter().map(|t| t.0).collect();
            return Err(Failure::Usage(format!("unknown tolerance `{k}`; known: {}", keys.join(", "))));
        }
        if !(v.is_finite() && *v >= 0.0) {
            return Err(Failure::Usage(format!("tolerance `{k}` must be a finite number >= 0")));
        }
        map.insert(k.clone(), *v);
    }
    Ok(map)
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let common = &cli.common;
    let tols = tolerances(common)?;
    let spec = GridSpec::new(common.n_polar, common.n_azimuth, common.n_t);
    match &cli.command {
        Command::Verify { search } => cmd_verify(common, spec, tols, search, out),
        Command::Project { input, route, r, force } => cmd_project(common, &tols, input, *route, *r, *force, out, err),
        Command::Norm { p, mode, search } => cmd_norm(common, spec, p, *mode, search, out),
        Command::KernelEval { r, i, t, j, s } => cmd_kernel(common, *r, i, *t, j, *s, out),
    }
}

fn write_text(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn cmd_verify(common: &Common, spec: GridSpec, tols: BTreeMap<String, f64>, search: &SearchArgs, out: &mut dyn Write) -> CmdResult {
    let cfg = VerifyConfig { grid: spec, seed: common.seed, tolerances: tols, search: search.config(0), ..Default::default() };
    let report = run_verify(&cfg)?;
    let table = report.to_table();
    let json = report.to_json()?;
    out.write_all(if common.json { json.as_bytes() } else { table.as_bytes() })?;
    if common.json {
        writeln!(out)?;
    }
    if let Some(path) = &common.output {
        match Format::from_path(path) {
            Format::Json => write_text(path, &(json + "\n"))?,
            Format::Csv => write_text(path, &report_csv(&report))?,
        }
    }
    Ok(if report.all_pass { 0 } else { 1 })
}

fn report_csv(report: &crate::verify::VerifyReport) -> String {
    let mut s = format!(
        "# slicenorm {}\n# seed: {}\n# grid: {}x{}x{}\ncheck,relation,expected,computed,tolerance,pass\n",
        report.version, report.seed, report.grid.n_polar, report.grid.n_azimuth, report.grid.n_t
    );
    for c in &report.checks {
        let rel = serde_json::to_value(c.relation).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
        s.push_str(&format!("\"{}\",{},{:?},{:?},{:?},{}\n", c.name, rel, c.expected, c.computed, c.tolerance, c.pass));
    }
    s
}

#[derive(Serialize)]
struct ProjectSummary {
    version: &'static str,
    seed: u64,
    grid: GridSpec,
    input: String,
    output: String,
    route: RouteArg,
    radius: Option<f64>,
    forced: bool,
    well_defined_defect: f64,
    slice_defect_before: f64,
    slice_defect_after: f64,
    l2_input: f64,
    l2_output: f64,
}

fn default_output(input: &Path, route: RouteArg) -> PathBuf {
    let stem = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    let ext = input.extension().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "csv".into());
    let route = match route {
        RouteArg::Fourier => "fourier",
        RouteArg::Boundary => "boundary",
        RouteArg::Interior => "interior",
    };
    input.with_file_name(format!("{stem}.{route}.{ext}"))
}

#[allow(clippy::too_many_arguments)]
fn cmd_project(
    common: &Common,
    tols: &BTreeMap<String, f64>,
    input: &Path,
    route: RouteArg,
    r: Option<f64>,
    force: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let radius = match (route, r) {
        (RouteArg::Interior, Some(r)) => Some(r),
        (RouteArg::Interior, None) => return Err(Failure::Usage("the interior route needs a radius, e.g. --r 0.9".into())),
        (_, Some(_)) => return Err(Failure::Usage("--r only applies to the interior route".into())),
        (_, None) => None,
    };
    let phi = read_sampled(input).map_err(|e| Failure::Usage(format!("{}: {e}", input.display())))?;
    let grid = phi.grid().clone();
    let check = validate_well_defined(&phi)?;
    let tol = tols.get("well_defined").copied().or_else(|| default_tolerance("well_defined")).unwrap_or(0.0);
    if let Err(e) = check.ensure(tol) {
        if !force {
            return Err(Failure::Check(format!("{e}; rerun with --force to project anyway")));
        }
        writeln!(err, "slicenorm: warning: {e}; projecting anyway (--force)")?;
    }

    let projected: SliceFunction = match (route, radius) {
        (RouteArg::Fourier, _) => project(&phi, Route::Fourier),
        (RouteArg::Boundary, _) => project(&phi, Route::Boundary),
        (RouteArg::Interior, Some(r)) => {
            let circle = grid.circle();
            let ts: Vec<f64> = (0..grid.n_t()).map(|k| circle.node(k)).collect();
            let (a, b) = corollary_ab_many(&phi, r, &ts)?.into_iter().unzip();
            SliceFunction::new(a, b)?
        }
        (RouteArg::Interior, None) => unreachable!("radius checked above"),
    };

    let output = common.output.clone().unwrap_or_else(|| default_output(input, route));
    let spec = grid.spec();
    let mut prov = Provenance::with_seed(common.seed)
        .note("grid", serde_json::to_string(&spec).map_err(Error::from)?)
        .note("route", format!("{route:?}").to_lowercase());
    if let Some(r) = radius {
        prov = prov.note("radius", format!("{r:?}"));
    }
    write_slice(&output, &projected, &prov).map_err(|e| Failure::Usage(format!("{}: {e}", output.display())))?;

    let sampled = projected.sample(grid.clone())?;
    let summary = ProjectSummary {
        version: VERSION,
        seed: common.seed,
        grid: spec,
        input: input.display().to_string(),
        output: output.display().to_string(),
        route,
        radius,
        forced: force,
        well_defined_defect: check.defect,
        slice_defect_before: slice_defect(&phi),
        slice_defect_after: slice_defect(&sampled),
        l2_input: lp_norm(&phi, 2.0)?,
        l2_output: slice_lp_norm(&projected, &grid, 2.0)?,
    };
    if common.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&summary).map_err(Error::from)?)?;
    } else {
        let rows: Vec<(&str, String)> = vec![
            ("version", VERSION.to_string()),
            ("grid", format!("{}x{}x{}", spec.n_polar, spec.n_azimuth, spec.n_t)),
            ("seed", common.seed.to_string()),
            ("route", format!("{route:?}").to_lowercase()),
            ("radius", radius.map(sig9).unwrap_or_else(|| "-".into())),
            ("output", summary.output.clone()),
            ("well-definedness defect", sig9(summary.well_defined_defect)),
            ("slice defect before", sig9(summary.slice_defect_before)),
            ("slice defect after", sig9(summary.slice_defect_after)),
            ("L2 norm input", sig9(summary.l2_input)),
            ("L2 norm output", sig9(summary.l2_output)),
        ];
        for (k, v) in rows {
            writeln!(out, "{k:<24}{v}")?;
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct NormOutput {
    version: &'static str,
    seed: u64,
    grid: GridSpec,
    mode: NormMode,
    #[serde(serialize_with = "serialize_exponent")]
    p: f64,
    #[serde(serialize_with = "serialize_exponent")]
    q: f64,
    upper_bound: f64,
    lower_bound: Option<f64>,
    restarts: Option<usize>,
    iters: Option<usize>,
    iterations: Option<Vec<f64>>,
    extremal_axis: Option<[f64; 3]>,
    witness_file: Option<String>,
}

fn cmd_norm(common: &Common, spec: GridSpec, p: &str, mode: NormMode, search: &SearchArgs, out: &mut dyn Write) -> CmdResult {
    let p = parse_exponent(p)?;
    let q = conjugate_exponent(p);
    let mut report = NormOutput {
        version: VERSION,
        seed: common.seed,
        grid: spec,
        mode,
        p,
        q,
        upper_bound: upper_bound_constant(p)?,
        lower_bound: None,
        restarts: None,
        iters: None,
        iterations: None,
        extremal_axis: None,
        witness_file: None,
    };
    match mode {
        NormMode::Bound => {}
        NormMode::Search => {
            if p == 1.0 || p.is_infinite() {
                return Err(Failure::Usage(
                    "search needs 1 < p < inf; the norms at p = 1 and p = inf coincide by duality, \
                     use `norm inf extremal` for the endpoint"
                        .into(),
                ));
            }
            let cfg = search.config(common.seed);
            let found = norm_lower_bound_search(p, Arc::new(spec.build()?), &cfg)?;
            if let Some(path) = &common.output {
                let witness = witness_path(path);
                let prov = Provenance::with_seed(common.seed)
                    .note("witness for p", format!("{p:?}"))
                    .note("ratio", format!("{:?}", found.lower_bound));
                write_sampled(&witness, &found.witness, &prov).map_err(|e| Failure::Usage(format!("{}: {e}", witness.display())))?;
                report.witness_file = Some(witness.display().to_string());
            }
            report.lower_bound = Some(found.lower_bound);
            report.restarts = Some(cfg.restarts);
            report.iters = Some(cfg.iters);
            report.iterations = Some(found.iterations);
        }
        NormMode::Extremal => {
            let i0 = crate::testfns::random_quaternions(1, common.seed)[0];
            let i0 = ImaginaryUnit::from_quaternion(i0).unwrap_or(ImaginaryUnit::K);
            let grid = Arc::new(spec.build()?.with_pole(i0));
            let phi = extremal_function(&i0, grid)?;
            report.lower_bound = Some(ratio(&phi, p)?);
            report.extremal_axis = Some(i0.coords());
        }
    }
    let json = serde_json::to_string_pretty(&report).map_err(Error::from)? + "\n";
    if common.json {
        out.write_all(json.as_bytes())?;
    } else {
        let show_p = |x: f64| if x.is_infinite() { "inf".to_string() } else { sig9(x) };
        writeln!(out, "slicenorm {VERSION} norm  grid {}x{}x{}  seed {}", spec.n_polar, spec.n_azimuth, spec.n_t, common.seed)?;
        writeln!(out, "p            {}", show_p(p))?;
        writeln!(out, "q            {}", show_p(q))?;
        writeln!(out, "upper bound  {}", sig9(report.upper_bound))?;
        if let Some(lb) = report.lower_bound {
            writeln!(out, "lower bound  {}", sig9(lb))?;
        }
        if let Some(w) = &report.witness_file {
            writeln!(out, "witness      {w}")?;
        }
    }
    if let Some(path) = &common.output {
        write_text(path, &json)?;
    }
    Ok(0)
}

fn witness_path(report: &Path) -> PathBuf {
    let stem = report.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "norm".into());
    report.with_file_name(format!("{stem}.witness.csv"))
}

#[derive(Serialize)]
struct KernelOutput {
    version: &'static str,
    r: f64,
    i: [f64; 3],
    t: f64,
    j: [f64; 3],
    s: f64,
    value: [f64; 4],
}

fn cmd_kernel(common: &Common, r: f64, i: &str, t: f64, j: &str, s: f64, out: &mut dyn Write) -> CmdResult {
    let i: ImaginaryUnit = i.parse()?;
    let j: ImaginaryUnit = j.parse()?;
    let k: Quaternion = slice_kernel(r, &i, t, &j, s)?;
    if common.json {
        let rep = KernelOutput { version: VERSION, r, i: i.coords(), t, j: j.coords(), s, value: k.components() };
        writeln!(out, "{}", serde_json::to_string_pretty(&rep).map_err(Error::from)?)?;
    } else {
        let c = k.components();
        writeln!(out, "{} {} {} {}", sig9(c[0]), sig9(c[1]), sig9(c[2]), sig9(c[3]))?;
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("slicenorm").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!(parse_exponent("inf").unwrap(), f64::INFINITY);
        assert_eq!(parse_exponent("2.5").unwrap(), 2.5);
        assert!(parse_exponent("0.5").is_err());
        assert!(parse_exponent("abc").is_err());
    }

    #[test]
    fn norm_bounds() {
        let (code, out, _) = call(&["norm", "inf", "bound"]);
        assert_eq!(code, 0);
        assert!(out.contains("upper bound  1.33333333"), "{out}");
        let (_, out, _) = call(&["norm", "4", "bound"]);
        assert!(out.contains("upper bound  1.36346324"), "{out}");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["norm", "inf", "search"]).0, 2);
        assert_eq!(call(&["norm", "1", "search"]).0, 2);
        assert_eq!(call(&["norm", "0.5"]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["verify", "--tol", "nonsense=1"]).0, 2);
        assert_eq!(call(&["verify", "--tol", "sferica"]).0, 2);
        assert_eq!(call(&["kernel-eval", "1.5", "i", "0", "i", "0"]).0, 2);
        assert_eq!(call(&["project", "/nonexistent/file.csv"]).0, 2);
    }

    #[test]
    fn kernel_eval_prints_nine_digits() {
        let (code, out, _) = call(&["kernel-eval", "0.5", "i", "0.3", "-k", "-1.2"]);
        assert_eq!(code, 0);
        let k = slice_kernel(0.5, &ImaginaryUnit::I, 0.3, &-ImaginaryUnit::K, -1.2).unwrap();
        let want: Vec<String> = k.components().iter().map(|&c| sig9(c)).collect();
        assert_eq!(out.trim(), want.join(" "));
    }
}
