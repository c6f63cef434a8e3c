//! The verification suite: every closed-form constant, operator law and
//! route comparison the library promises, as a table of checks.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{validate_well_defined, BoundaryGrid, GridSpec, SampledFunction, SphereRule};
use crate::norm::{
    conjugate_exponent, extremal_function, inner_product, lp_norm, norm_lower_bound_search, ratio, sphere_moment,
    slice_lp_norm, sphere_moment_quadrature, sphere_moment_with, upper_bound_constant, NormReport, SearchConfig,
};
use crate::projection::{corollary_ab, energy_identity_many, project_boundary, project_fourier, project_interior_many};
use crate::quaternion::ImaginaryUnit;
use crate::slice::{poisson_extend, slice_defect, SliceFunction};
use crate::testfns::{rng, RandomPolynomial, RandomSlice};

/// Tolerance keys, defaults and what they bound. Overridable by key.
pub const TOLERANCES: &[(&str, f64, &str)] = &[
    ("sphere_constant", 1e-6, "plain Gauss-Legendre rule, mean of |1 - iJ| against 4/3"),
    ("moment_aligned", 1e-6, "aligned rule, mean of |1 - IJ| against 4/3"),
    ("moment_independence", 1e-10, "spread of the mean of |1 - IJ| over random I"),
    ("moment_family", 1e-8, "moments of |1 - IJ|^q against 2^{q+1}/(q+2)"),
    ("upper_bound_identity", 1e-12, "upper bound constant against moment(q)^{1/q}"),
    ("extremal_ratio", 1e-5, "ratio of the extremal function at p = inf against 4/3"),
    ("search_p2", 1e-6, "search lower bound at p = 2 against 1"),
    ("ratio_p2_max", 1e-9, "largest ratio at p = 2 above 1"),
    ("idempotence", 1e-11, "L2 distance between projecting twice and once"),
    ("self_adjoint", 1e-10, "asymmetry of the pairing under projection"),
    ("slice_fixed", 1e-11, "L2 distance between a projected slice function and itself"),
    ("output_defect", 1e-11, "slice defect of projected functions"),
    ("route_agreement", 1e-10, "Fourier against boundary route, relative L2"),
    ("interior_agreement", 1e-8, "interior kernel against Poisson extension, relative sup"),
    ("corollary_ab", 1e-10, "A + I B against the interior kernel, relative sup"),
    ("energy_identity", 1e-10, "sphere energy of the projection against the moments"),
    ("duality_gap", 2e-2, "search lower bounds at conjugate exponents"),
    ("upper_bound_slack", 5e-6, "search lower bounds above the upper bound constant"),
    ("witness_reproduction", 1e-12, "witness ratio against the reported lower bound"),
    ("ill_defined", 1e-12, "axis field: defect 2, Fourier route 0, boundary route I"),
    ("well_defined", 1e-9, "largest antipodal mismatch accepted in an input file"),
];

pub fn default_tolerance(key: &str) -> Option<f64> {
    TOLERANCES.iter().find(|(k, _, _)| *k == key).map(|(_, v, _)| *v)
}

/// How `computed` is compared with `expected`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `|computed - expected| <= tolerance`
    Within,
    /// `computed <= expected + tolerance`
    AtMost,
    /// `computed > expected + tolerance`
    Above,
}

impl Relation {
    fn holds(self, computed: f64, expected: f64, tol: f64) -> bool {
        match self {
            Relation::Within => (computed - expected).abs() <= tol,
            Relation::AtMost => computed <= expected + tol,
            Relation::Above => computed > expected + tol,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Relation::Within => "~",
            Relation::AtMost => "<=",
            Relation::Above => ">",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub key: String,
    pub name: String,
    pub relation: Relation,
    pub expected: f64,
    pub computed: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub grid: GridSpec,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    /// Random functions for the operator laws and route agreement.
    pub n_random: usize,
    /// Random functions for the energy identity (8 angles each).
    pub n_energy: usize,
    pub search: SearchConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            grid: GridSpec::default(),
            seed: 0,
            tolerances: BTreeMap::new(),
            n_random: 50,
            n_energy: 20,
            search: SearchConfig::default(),
        }
    }
}

impl VerifyConfig {
    /// Rejects unknown tolerance keys and non-positive or non-finite values.
    pub fn validate(&self) -> Result<()> {
        for (k, v) in &self.tolerances {
            if default_tolerance(k).is_none() {
                let keys: Vec<&str> = TOLERANCES.iter().map(|t| t.0).collect();
                return Err(Error::InvalidArgument(format!("unknown tolerance `{k}`; known: {}", keys.join(", "))));
            }
            if !(v.is_finite() && *v >= 0.0) {
                return Err(Error::InvalidArgument(format!("tolerance `{k}` must be a finite number >= 0, got {v}")));
            }
        }
        Ok(())
    }

    pub fn tolerance(&self, key: &str) -> f64 {
        self.tolerances.get(key).copied().or_else(|| default_tolerance(key)).expect("known tolerance key")
    }

    fn sub_seed(&self, stream: u64, k: u64) -> u64 {
        self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (stream << 40) ^ k
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub version: &'static str,
    pub grid: GridSpec,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub all_pass: bool,
}

/// `x` with 9 significant digits.
pub fn sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    // the exponent after rounding to 9 digits, so 0.9999999999 reads as 1.00000000
    let sci = format!("{x:.8e}");
    let mag: i32 = sci.rsplit_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    if (-4..9).contains(&mag) {
        format!("{:.*}", (8 - mag) as usize, x)
    } else {
        sci
    }
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_table(&self) -> String {
        let mut rows = vec![[
            "check".to_string(),
            "expected".to_string(),
            "computed".to_string(),
            "tolerance".to_string(),
            "result".to_string(),
        ]];
        for c in &self.checks {
            rows.push([
                c.name.clone(),
                format!("{} {}", c.relation.symbol(), sig9(c.expected)),
                sig9(c.computed),
                sig9(c.tolerance),
                if c.pass { "PASS" } else { "FAIL" }.to_string(),
            ]);
        }
        let widths: Vec<usize> = (0..5).map(|i| rows.iter().map(|r| r[i].chars().count()).max().unwrap_or(0)).collect();
        let mut out = format!(
            "slicenorm {} verify  grid {}x{}x{}  seed {}\n",
            self.version, self.grid.n_polar, self.grid.n_azimuth, self.grid.n_t, self.seed
        );
        for row in rows {
            let cells: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            out.push_str(cells.join("  ").trim_end());
            out.push('\n');
        }
        let failed = self.failures().count();
        out.push_str(&format!("{} checks, {} failed\n", self.checks.len(), failed));
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

struct Table<'a> {
    cfg: &'a VerifyConfig,
    checks: Vec<Check>,
}

impl Table<'_> {
    fn push(&mut self, key: &str, name: impl Into<String>, relation: Relation, expected: f64, computed: f64) {
        let tolerance = self.cfg.tolerance(key);
        self.push_with(key, name, relation, expected, computed, tolerance);
    }

    fn push_with(&mut self, key: &str, name: impl Into<String>, relation: Relation, expected: f64, computed: f64, tolerance: f64) {
        let pass = relation.holds(computed, expected, tolerance);
        self.checks.push(Check { key: key.into(), name: name.into(), relation, expected, computed, tolerance, pass });
    }
}

fn random_unit(r: &mut impl rand::Rng) -> ImaginaryUnit {
    loop {
        let q = crate::testfns::gaussian_quaternion(r);
        if let Ok(i) = ImaginaryUnit::new(q.x, q.y, q.z) {
            break i;
        }
    }
}

/// Runs the whole suite.
pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    let grid = Arc::new(cfg.grid.build()?);
    let mut t = Table { cfg, checks: Vec::new() };

    sphere_constants(cfg, &mut t)?;
    let max_ratio_p2 = operator_laws(cfg, &grid, &mut t)?;
    endpoints(cfg, &grid, max_ratio_p2, &mut t)?;
    interior(cfg, &grid, &mut t)?;
    energy(cfg, &grid, &mut t)?;
    searches(cfg, &grid, &mut t)?;
    ill_defined(cfg, &grid, &mut t)?;

    let all_pass = t.checks.iter().all(|c| c.pass);
    Ok(VerifyReport { version: crate::io::VERSION, grid: cfg.grid, seed: cfg.seed, checks: t.checks, all_pass })
}

fn sphere_constants(cfg: &VerifyConfig, t: &mut Table) -> Result<()> {
    let (np, na) = (cfg.grid.n_polar, cfg.grid.n_azimuth);
    let i = ImaginaryUnit::I;
    let plain = SphereRule::gauss_legendre(np, na)?;
    t.push("sphere_constant", "sferica 4/3", Relation::Within, 4.0 / 3.0, sphere_moment_with(&plain, &i, 1.0));
    t.push("moment_aligned", "mean |1-IJ| aligned rule", Relation::Within, 4.0 / 3.0, sphere_moment_quadrature(1.0, &i, np, na)?);

    let mut r = rng(cfg.sub_seed(1, 0));
    let values = (0..10)
        .map(|_| sphere_moment_quadrature(1.0, &random_unit(&mut r), np, na))
        .collect::<Result<Vec<_>>>()?;
    let spread = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - values.iter().cloned().fold(f64::INFINITY, f64::min);
    t.push("moment_independence", "mean |1-IJ| spread over 10 random I", Relation::Within, 0.0, spread);

    for q in [0.5, 1.0, 2.0, 3.0, 5.0] {
        t.push("moment_family", format!("moment q={q}"), Relation::Within, sphere_moment(q)?, sphere_moment_quadrature(q, &i, np, na)?);
    }
    for p in [2.0, 2.5, 3.0, 4.0, 8.0] {
        let q = conjugate_exponent(p);
        let via_moment = sphere_moment_quadrature(q, &i, np, na)?.powf(1.0 / q);
        t.push("upper_bound_identity", format!("upper bound p={p} via moment"), Relation::Within, upper_bound_constant(p)?, via_moment);
    }
    Ok(())
}

/// Idempotence, self-adjointness, fixed points, output defect and route
/// agreement over the random set. Returns the largest ratio at p = 2.
fn operator_laws(cfg: &VerifyConfig, grid: &Arc<BoundaryGrid>, t: &mut Table) -> Result<f64> {
    let mut idem = 0.0f64;
    let mut adjoint = 0.0f64;
    let mut fixed = 0.0f64;
    let mut defect = 0.0f64;
    let mut routes = 0.0f64;
    let mut max_ratio = 0.0f64;
    // ψ for function k is function k + 1, so each projection is computed once
    let draw = |k: u64| -> Result<(SampledFunction, SliceFunction, SampledFunction)> {
        let phi = RandomPolynomial::new(3, cfg.sub_seed(2, k)).sample(grid.clone());
        let proj = project_boundary(&phi);
        let sampled = proj.sample(grid.clone())?;
        Ok((phi, proj, sampled))
    };
    let mut next = draw(0)?;
    for k in 0..cfg.n_random as u64 {
        let (phi, p_phi, p_phi_s) = next;
        next = draw(k + 1)?;
        let (psi, _, p_psi_s) = &next;
        let twice = project_boundary(&p_phi_s);
        idem = idem.max(slice_lp_norm(&twice.sub(&p_phi)?, grid, 2.0)?);
        let lhs = inner_product(&p_phi_s, psi)?;
        let rhs = inner_product(&phi, p_psi_s)?;
        adjoint = adjoint.max((lhs - rhs).norm());
        defect = defect.max(slice_defect(&p_phi_s));
        let phi_norm = lp_norm(&phi, 2.0)?;
        max_ratio = max_ratio.max(slice_lp_norm(&p_phi, grid, 2.0)? / phi_norm);
        let fourier = project_fourier(&phi);
        routes = routes.max(slice_lp_norm(&fourier.sub(&p_phi)?, grid, 2.0)? / phi_norm);

        let f = RandomSlice::new(grid.n_t() / 4, cfg.sub_seed(4, k)).to_slice_function(grid.circle());
        let f_s = f.sample(grid.clone())?;
        fixed = fixed.max(slice_lp_norm(&project_boundary(&f_s).sub(&f)?, grid, 2.0)?);
    }
    let n = cfg.n_random;
    t.push("idempotence", format!("idempotence, max over {n}"), Relation::Within, 0.0, idem);
    t.push("self_adjoint", format!("self-adjointness, max over {n}"), Relation::Within, 0.0, adjoint);
    t.push("slice_fixed", format!("slice fixed points, max over {n}"), Relation::Within, 0.0, fixed);
    t.push("output_defect", format!("output slice defect, max over {n}"), Relation::Within, 0.0, defect);
    t.push("route_agreement", format!("Fourier vs boundary route, max over {n}"), Relation::Within, 0.0, routes);
    Ok(max_ratio)
}

fn endpoints(cfg: &VerifyConfig, grid: &Arc<BoundaryGrid>, max_ratio_p2: f64, t: &mut Table) -> Result<()> {
    let i0 = random_unit(&mut rng(cfg.sub_seed(5, 0)));
    let aligned = Arc::new(grid.with_pole(i0));
    let phi = extremal_function(&i0, aligned)?;
    t.push("extremal_ratio", "extremal ratio p=inf", Relation::Within, 4.0 / 3.0, ratio(&phi, f64::INFINITY)?);
    let search = norm_lower_bound_search(2.0, grid.clone(), &search_config(cfg, 6))?;
    t.push("search_p2", "search lower bound p=2", Relation::Within, 1.0, search.lower_bound);
    t.push("ratio_p2_max", "largest ratio p=2 over random set", Relation::AtMost, 1.0, max_ratio_p2.max(search.lower_bound));
    let slack = cfg.tolerance("upper_bound_slack");
    t.push_with("upper_bound_slack", "search p=2 below upper bound", Relation::AtMost, upper_bound_constant(2.0)?, search.lower_bound, slack);
    Ok(())
}

fn interior(cfg: &VerifyConfig, grid: &Arc<BoundaryGrid>, t: &mut Table) -> Result<()> {
    let r = 0.99;
    let mut gen = rng(cfg.sub_seed(7, 0));
    let points: Vec<(ImaginaryUnit, f64)> =
        (0..4).map(|_| (random_unit(&mut gen), rand::Rng::random_range(&mut gen, 0.0..std::f64::consts::TAU))).collect();
    let mut worst = 0.0f64;
    let mut worst_ab = 0.0f64;
    for k in 0..2 {
        let phi = RandomPolynomial::new(3, cfg.sub_seed(2, k)).sample(grid.clone());
        let sup = phi.max_abs();
        let boundary = project_boundary(&phi);
        let values = project_interior_many(&phi, r, &points)?;
        for ((i, tt), v) in points.iter().zip(&values) {
            worst = worst.max((*v - poisson_extend(&boundary, r, i, *tt)?).norm() / sup);
            let (a, b) = corollary_ab(&phi, r, *tt)?;
            worst_ab = worst_ab.max((a + i.as_quaternion() * b - *v).norm() / sup);
        }
    }
    t.push("interior_agreement", "interior kernel vs Poisson extension r=0.99", Relation::Within, 0.0, worst);
    t.push("corollary_ab", "A + I B vs interior kernel r=0.99", Relation::Within, 0.0, worst_ab);
    Ok(())
}

fn energy(cfg: &VerifyConfig, grid: &Arc<BoundaryGrid>, t: &mut Table) -> Result<()> {
    let ts: Vec<f64> = (0..8).map(|j| 0.1 + std::f64::consts::TAU * j as f64 / 8.0).collect();
    let mut worst = 0.0f64;
    for k in 0..cfg.n_energy as u64 {
        let phi = RandomPolynomial::new(3, cfg.sub_seed(8, k)).sample(grid.clone());
        for (lhs, rhs) in energy_identity_many(&phi, &ts) {
            worst = worst.max((lhs - rhs).abs());
        }
    }
    t.push("energy_identity", format!("energy identity, {} functions x 8 angles", cfg.n_energy), Relation::Within, 0.0, worst);
    Ok(())
}

fn search_config(cfg: &VerifyConfig, stream: u64) -> SearchConfig {
    SearchConfig { seed: cfg.sub_seed(stream, 0), ..cfg.search.clone() }
}

fn searches(cfg: &VerifyConfig, grid: &Arc<BoundaryGrid>, t: &mut Table) -> Result<()> {
    let run = |p: f64, stream: u64| -> Result<NormReport> { norm_lower_bound_search(p, grid.clone(), &search_config(cfg, stream)) };
    let slack = cfg.tolerance("upper_bound_slack");
    for (idx, p) in [3.0, 4.0].into_iter().enumerate() {
        let q = conjugate_exponent(p);
        let rp = run(p, 9 + 2 * idx as u64)?;
        let rq = run(q, 10 + 2 * idx as u64)?;
        t.push("duality_gap", format!("duality gap p={p} vs q={}", sig9(q)), Relation::Within, 0.0, crate::norm::duality_gap(p, &rp, &rq)?);
        t.push_with("upper_bound_slack", format!("search p={p} below upper bound"), Relation::AtMost, rp.upper_bound, rp.lower_bound, slack);
        if p == 4.0 {
            t.push_with("p4_above_one", "search p=4 lower bound above 1", Relation::Above, 1.0, rp.lower_bound, 0.0);
            t.push_with("p4_below_bound", "search p=4 lower bound at most 1.363462", Relation::AtMost, 1.363462, rp.lower_bound, 0.0);
            t.push("witness_reproduction", "search p=4 witness re-evaluated", Relation::Within, rp.lower_bound, ratio(&rp.witness, p)?);
        }
    }
    Ok(())
}

fn ill_defined(cfg: &VerifyConfig, grid: &Arc<BoundaryGrid>, t: &mut Table) -> Result<()> {
    let phi = SampledFunction::sample(grid.clone(), &|j: &ImaginaryUnit, _t: f64| j.as_quaternion());
    let report = validate_well_defined(&phi)?;
    t.push("ill_defined", "axis field well-definedness defect", Relation::Within, 2.0, report.defect);
    let fourier = project_fourier(&phi);
    let fourier_max = fourier.a().iter().chain(fourier.b()).map(|v| v.norm()).fold(0.0, f64::max);
    t.push("ill_defined", "axis field Fourier route", Relation::Within, 0.0, fourier_max);
    let boundary = project_boundary(&phi);
    let nodes = grid.sphere().nodes();
    let mut worst = 0.0f64;
    for i in nodes.iter().step_by(7) {
        for k in 0..grid.n_t() {
            worst = worst.max((boundary.at_node(i, k) - i.as_quaternion()).norm());
        }
    }
    t.push("ill_defined", "axis field boundary route vs I", Relation::Within, 0.0, worst);
    let refused = report.ensure(cfg.tolerance("well_defined")).is_err();
    t.push_with("ill_defined", "axis field refused as input", Relation::Within, 1.0, if refused { 1.0 } else { 0.0 }, 0.0);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sig9(4.0 / 3.0), "1.33333333");
        assert_eq!(sig9(1.3634632397609991), "1.36346324");
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(1e-12), "1.00000000e-12");
        assert_eq!(sig9(-2.5e-3), "-0.00250000000");
        assert_eq!(sig9(123456.0), "123456.000");
        assert_eq!(sig9(0.9999999999999998), "1.00000000");
        assert_eq!(sig9(-0.099999999999), "-0.100000000");
    }

    #[test]
    fn relations() {
        assert!(Relation::Within.holds(1.0, 1.0 + 1e-7, 1e-6));
        assert!(!Relation::Within.holds(1.0, 1.1, 1e-6));
        assert!(Relation::AtMost.holds(1.0, 1.0, 0.0));
        assert!(!Relation::Above.holds(1.0, 1.0, 0.0));
        assert!(!Relation::Within.holds(f64::NAN, 0.0, 1.0));
    }

    #[test]
    fn tolerance_overrides() {
        let mut cfg = VerifyConfig::default();
        assert_eq!(cfg.tolerance("sphere_constant"), 1e-6);
        cfg.tolerances.insert("sphere_constant".into(), 1e-3);
        assert_eq!(cfg.tolerance("sphere_constant"), 1e-3);
        assert!(cfg.validate().is_ok());
        cfg.tolerances.insert("nonsense".into(), 1.0);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn small_suite_runs_and_coarse_sphere_fails() {
        let cfg = VerifyConfig {
            grid: GridSpec::new(4, 8, 16),
            n_random: 2,
            n_energy: 1,
            search: SearchConfig { restarts: 1, iters: 2, seed: 0, start_degree: 3 },
            ..Default::default()
        };
        let report = run_verify(&cfg).unwrap();
        let sferica = report.checks.iter().find(|c| c.name == "sferica 4/3").unwrap();
        assert!(!sferica.pass);
        assert!(!report.all_pass);
        assert!(report.to_table().contains("FAIL"));
        let json: serde_json::Value = serde_json::from_str(&report.to_json().unwrap()).unwrap();
        assert_eq!(json["checks"].as_array().unwrap().len(), report.checks.len());
    }
}
