//! Convergence studies over refinement levels `N = M` for the benchmark
//! problems, rendered as CSV tables.
//!
//! Column sets by mode (`<quantity>_<norm>`):
//!
//! - weighted, one `ρ`: `u` (`U − U_ρ`), with `postprocess` also `u_post`
//!   (`U − Ũ_ρ`);
//! - weighted, two `ρ`: `u_rho1`, `u_rho2`, `rho_diff` (`U_ρ1 − U_ρ2`), with
//!   `postprocess` also `u_post_rho1`, `u_post_rho2`;
//! - transformed: `v` (`V − V_h`), `u_lift` (`U − E_ρV_h`), `lift_vs_weighted`
//!   (`E_ρV_h − U_h`);
//! - transformed with `postprocess`: `v`, `v_post` (`V − Ṽ`), `u_lift_post`
//!   (`U − E_ρṼ`), `u_post` (`U − Ũ_h`).
//!
//! Every quantity carries its own time weights: the `l2` column of a
//! weighted-scheme error `U − U_ρ`, `U_ρ1 − U_ρ2` or `U − Ũ_ρ` is the
//! `‖·‖_ρ` norm, all others are unweighted. The `linf` column is the plain
//! `sup_t ‖M0^{1/2}·‖`, except for lifts `U − E_ρ(·)` where it is measured as
//! `sup_t e^{-ρt}‖M0^{1/2}·‖`. `q` (discrete Radau norm) and `jump` (weighted
//! jump sum) exist only for raw dG errors.

use std::fmt::{self, Write as _};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::analysis::{
    energy_audit, eoc, jump_error_sum, postprocessed_energy_audit, q_norm_error, sup_m0_error, weighted_l2_error,
    ConvergenceReport, EnergyAudit, ErrorReport, NormEvaluator,
};
use crate::error::{config_err, Error, Result};
use crate::evolution::{lift_exponential, march_with_cache, DiscreteSolution, ExactField, TimeField, TimeMesh, Variant};
use crate::postprocess::postprocess;
use crate::problems::{build_discrete_problem, DiscreteProblem, ExampleId, ExampleSpec};
use crate::quadrature::{RuleCache, MAX_DEGREE};

/// Error norm of a column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    L2,
    Linf,
    Q,
    Jump,
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormKind::L2 => "l2",
            NormKind::Linf => "linf",
            NormKind::Q => "q",
            NormKind::Jump => "jump",
        })
    }
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "l2" => Ok(NormKind::L2),
            "linf" => Ok(NormKind::Linf),
            "q" => Ok(NormKind::Q),
            "jump" | "jumps" => Ok(NormKind::Jump),
            other => config_err(format!("unknown norm '{other}' (expected l2|linf|q|jump)")),
        }
    }
}

/// Named choice of the time degree relative to `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QPreset {
    /// Balanced dG rates.
    #[serde(rename = "k-1")]
    KMinus1,
    /// Balanced post-processed rates.
    #[serde(rename = "k-2")]
    KMinus2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QSetting {
    Degree(usize),
    Preset(QPreset),
}

impl FromStr for QSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "k-1" => Ok(QSetting::Preset(QPreset::KMinus1)),
            "k-2" => Ok(QSetting::Preset(QPreset::KMinus2)),
            other => other
                .parse()
                .map(QSetting::Degree)
                .map_err(|_| Error::Config(format!("invalid time degree '{other}' (integer, k-1 or k-2)"))),
        }
    }
}

impl fmt::Display for QSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QSetting::Degree(q) => write!(f, "{q}"),
            QSetting::Preset(QPreset::KMinus1) => f.write_str("k-1"),
            QSetting::Preset(QPreset::KMinus2) => f.write_str("k-2"),
        }
    }
}

/// One convergence study. `N` is both the spatial level and the number of
/// time slabs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StudyConfig {
    pub example: ExampleId,
    pub variant: Variant,
    /// One or two values (weighted), exactly one (transformed).
    pub rho: Vec<f64>,
    pub k: usize,
    /// Defaults to `k-1`, or `k-2` when post-processing.
    pub q: Option<QSetting>,
    pub levels: Vec<usize>,
    pub postprocess: bool,
    pub norms: Vec<NormKind>,
    pub t_end: f64,
    /// Interior sampling points per slab for `linf`.
    pub time_samples: usize,
    /// Gauss points per slab for `l2`; defaults to `q + 5`.
    pub time_points: Option<usize>,
    /// Levels whose slab system exceeds this many unknowns are recorded as
    /// infeasible instead of being attempted.
    pub max_unknowns: Option<usize>,
    /// Only used by randomized spot checks; echoed for provenance.
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            example: ExampleId::One,
            variant: Variant::Weighted,
            rho: vec![1.0],
            k: 1,
            q: None,
            levels: Vec::new(),
            postprocess: false,
            norms: vec![NormKind::L2],
            t_end: 1.0,
            time_samples: 10,
            time_points: None,
            max_unknowns: None,
            seed: 0,
            out: None,
        }
    }
}

impl StudyConfig {
    pub fn resolved_q(&self) -> Result<usize> {
        let setting = self.q.unwrap_or(QSetting::Preset(if self.postprocess {
            QPreset::KMinus2
        } else {
            QPreset::KMinus1
        }));
        let q = match setting {
            QSetting::Degree(q) => Some(q),
            QSetting::Preset(QPreset::KMinus1) => self.k.checked_sub(1),
            QSetting::Preset(QPreset::KMinus2) => self.k.checked_sub(2),
        };
        match q {
            Some(q) if q <= MAX_DEGREE => Ok(q),
            Some(q) => config_err(format!("time degree {q} exceeds {MAX_DEGREE}")),
            None => config_err(format!("time degree {setting} is negative for k = {}", self.k)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels.is_empty() {
            return config_err("no levels given");
        }
        if self.levels.windows(2).any(|w| w[0] >= w[1]) {
            return config_err("levels must be strictly ascending");
        }
        if self.k == 0 {
            return config_err("spatial degree k must be at least 1");
        }
        let q = self.resolved_q()?;
        let spec = ExampleSpec::new(self.example);
        for &n in &self.levels {
            spec.check_level(n)?;
        }
        if self.rho.iter().any(|r| !r.is_finite() || *r <= spec.rho0) {
            return config_err(format!("rho must be finite and above {}", spec.rho0));
        }
        match (self.variant, self.rho.len()) {
            (Variant::Weighted, 1 | 2) | (Variant::Transformed, 1) => {}
            (v, n) => return config_err(format!("{v} study takes {} rho values, got {n}", if v == Variant::Weighted { "one or two" } else { "one" })),
        }
        if self.norms.is_empty() {
            return config_err("no norms selected");
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return config_err("t_end must be positive");
        }
        if self.time_samples < 8 {
            return config_err("time_samples must be at least 8");
        }
        if let Some(p) = self.time_points {
            if p < q + 3 {
                return config_err(format!("time_points must be at least q + 3 = {}", q + 3));
            }
        }
        Ok(())
    }

    fn time_points(&self, q: usize) -> usize {
        self.time_points.unwrap_or(q + 5)
    }

    /// `key = value` lines describing the full configuration.
    pub fn echo(&self) -> Vec<String> {
        let list = |v: &[String]| format!("[{}]", v.join(", "));
        let mut out = vec![
            format!("example = {}", self.example),
            format!("variant = \"{}\"", self.variant),
            format!("rho = {}", list(&self.rho.iter().map(|r| format!("{r:?}")).collect::<Vec<_>>())),
            format!("k = {}", self.k),
        ];
        match self.q {
            Some(QSetting::Degree(q)) => out.push(format!("q = {q}")),
            Some(s) => out.push(format!("q = \"{s}\"")),
            None => {}
        }
        if let Ok(q) = self.resolved_q() {
            out.push(format!("# resolved q = {q}"));
        }
        out.push(format!("levels = {}", list(&self.levels.iter().map(usize::to_string).collect::<Vec<_>>())));
        out.push(format!("postprocess = {}", self.postprocess));
        out.push(format!("norms = {}", list(&self.norms.iter().map(|n| format!("\"{n}\"")).collect::<Vec<_>>())));
        out.push(format!("t_end = {:?}", self.t_end));
        out.push(format!("time_samples = {}", self.time_samples));
        if let Some(p) = self.time_points {
            out.push(format!("time_points = {p}"));
        }
        if let Some(m) = self.max_unknowns {
            out.push(format!("max_unknowns = {m}"));
        }
        out.push(format!("seed = {}", self.seed));
        if let Some(o) = &self.out {
            out.push(format!("out = {:?}", o.display().to_string()));
        }
        out
    }
}

/// Quantity names and whether `q`/`jump` norms apply, in column order.
fn quantity_plan(config: &StudyConfig) -> Vec<(String, bool)> {
    let mut plan = Vec::new();
    match config.variant {
        Variant::Weighted if config.rho.len() == 1 => {
            plan.push(("u".to_string(), true));
            if config.postprocess {
                plan.push(("u_post".to_string(), false));
            }
        }
        Variant::Weighted => {
            plan.push(("u_rho1".to_string(), true));
            plan.push(("u_rho2".to_string(), true));
            plan.push(("rho_diff".to_string(), false));
            if config.postprocess {
                plan.push(("u_post_rho1".to_string(), false));
                plan.push(("u_post_rho2".to_string(), false));
            }
        }
        Variant::Transformed if config.postprocess => {
            for name in ["v", "v_post", "u_lift_post", "u_post"] {
                plan.push((name.to_string(), name == "v"));
            }
        }
        Variant::Transformed => {
            for name in ["v", "u_lift", "lift_vs_weighted"] {
                plan.push((name.to_string(), name == "v"));
            }
        }
    }
    plan
}

/// Column names (`<quantity>_<norm>`) of a study, grouped by norm.
pub fn study_columns(config: &StudyConfig) -> Vec<String> {
    let plan = quantity_plan(config);
    let mut cols = Vec::new();
    for norm in &config.norms {
        for (name, raw) in &plan {
            if matches!(norm, NormKind::L2 | NormKind::Linf) || *raw {
                cols.push(format!("{name}_{norm}"));
            }
        }
    }
    cols
}

struct Quantity<'a> {
    name: &'static str,
    a: &'a dyn TimeField,
    b: &'a dyn TimeField,
    l2_rho: f64,
    sup_rho: f64,
    q_rho: Option<f64>,
    jump: Option<(&'a DiscreteSolution, f64)>,
}

struct LevelContext<'a> {
    config: &'a StudyConfig,
    dp: &'a DiscreteProblem,
    ev: &'a NormEvaluator,
    q: usize,
    cache: &'a RuleCache,
}

impl LevelContext<'_> {
    fn measure(&self, x: &Quantity<'_>) -> Result<ErrorReport> {
        let c = self.config;
        let mut r = ErrorReport {
            rho: x.l2_rho,
            n: self.dp.n,
            m: x.a.time_mesh().n_slabs(),
            k: self.dp.k,
            q: self.q,
            variant: c.variant.to_string(),
            ..ErrorReport::default()
        };
        for norm in &c.norms {
            match norm {
                NormKind::L2 => {
                    let e = weighted_l2_error(self.ev, x.a, x.b, x.l2_rho, c.time_points(self.q));
                    if x.l2_rho > 0.0 {
                        r.weighted_l2 = Some(e);
                    } else {
                        r.unweighted_l2 = Some(e);
                    }
                }
                NormKind::Linf => r.sup_m0 = Some(sup_m0_error(self.ev, x.a, x.b, x.sup_rho, c.time_samples)),
                NormKind::Q => {
                    if let Some(rho) = x.q_rho {
                        r.q_norm = Some(q_norm_error(self.ev, x.a, x.b, rho, self.q, self.cache)?);
                    }
                }
                NormKind::Jump => {
                    if let Some((sol, rho)) = x.jump {
                        r.jump_sum = Some(jump_error_sum(sol, &self.dp.problem.m0, rho));
                    }
                }
            }
        }
        Ok(r)
    }
}

fn column_value(report: &ErrorReport, norm: NormKind) -> Option<f64> {
    match norm {
        NormKind::L2 => report.weighted_l2.or(report.unweighted_l2),
        NormKind::Linf => report.sup_m0,
        NormKind::Q => report.q_norm,
        NormKind::Jump => report.jump_sum,
    }
}

/// Builds and marches one level with the configured scheme (first `ρ`).
pub fn solve_level(config: &StudyConfig, n: usize, cache: &RuleCache) -> Result<(DiscreteProblem, DiscreteSolution)> {
    let q = config.resolved_q()?;
    let dp = build_level(config, n, q)?;
    let mesh = TimeMesh::uniform(config.t_end, n)?;
    let sol = march_with_cache(&dp.problem, &mesh, q, config.rho[0], config.variant, cache)?;
    Ok((dp, sol))
}

fn build_level(config: &StudyConfig, n: usize, q: usize) -> Result<DiscreteProblem> {
    let dp = build_discrete_problem(&ExampleSpec::new(config.example), n, config.k)?;
    if let Some(max) = config.max_unknowns {
        let size = (q + 1) * dp.problem.n_dofs();
        if size > max {
            return config_err(format!("level N={n} needs {size} unknowns per slab (limit {max})"));
        }
    }
    Ok(dp)
}

fn run_level(config: &StudyConfig, n: usize, q: usize, cache: &RuleCache) -> Result<Vec<(String, ErrorReport)>> {
    let dp = build_level(config, n, q)?;
    let mesh = TimeMesh::uniform(config.t_end, n)?;
    let ev = dp.norm_evaluator();
    let ctx = LevelContext { config, dp: &dp, ev: &ev, q, cache };
    let march = |variant, rho| march_with_cache(&dp.problem, &mesh, q, rho, variant, cache);
    let exact_u = ExactField::new(dp.spec.exact.clone(), mesh.clone(), 0.0);
    let mut out = Vec::new();
    let mut record = |x: Quantity<'_>| -> Result<()> {
        out.push((x.name.to_string(), ctx.measure(&x)?));
        Ok(())
    };
    match config.variant {
        Variant::Weighted => {
            let sols = config.rho.iter().map(|&r| march(Variant::Weighted, r)).collect::<Result<Vec<_>>>()?;
            let posts: Vec<_> = if config.postprocess { sols.iter().map(postprocess).collect() } else { Vec::new() };
            let two = sols.len() == 2;
            let names = if two { ["u_rho1", "u_rho2"] } else { ["u", ""] };
            let post_names = if two { ["u_post_rho1", "u_post_rho2"] } else { ["u_post", ""] };
            for (i, sol) in sols.iter().enumerate() {
                let rho = config.rho[i];
                let x = Quantity {
                    name: names[i],
                    a: &exact_u,
                    b: sol,
                    l2_rho: rho,
                    sup_rho: 0.0,
                    q_rho: Some(rho),
                    jump: Some((sol, rho)),
                };
                record(x)?;
            }
            if two {
                let rho2 = config.rho[1];
                let x = Quantity {
                    name: "rho_diff",
                    a: &sols[0],
                    b: &sols[1],
                    l2_rho: rho2,
                    sup_rho: 0.0,
                    q_rho: None,
                    jump: None,
                };
                record(x)?;
            }
            for (i, pp) in posts.iter().enumerate() {
                let rho = config.rho[i];
                let x = Quantity {
                    name: post_names[i],
                    a: &exact_u,
                    b: pp,
                    l2_rho: rho,
                    sup_rho: 0.0,
                    q_rho: None,
                    jump: None,
                };
                record(x)?;
            }
        }
        Variant::Transformed => {
            let rho = config.rho[0];
            let v = march(Variant::Transformed, rho)?;
            let u_h = march(Variant::Weighted, rho)?;
            let exact_v = ExactField::new(dp.spec.exact.clone(), mesh.clone(), rho);
            record(Quantity {
                name: "v",
                a: &exact_v,
                b: &v,
                l2_rho: 0.0,
                sup_rho: 0.0,
                q_rho: Some(0.0),
                jump: Some((&v, 0.0)),
            })?;
            if config.postprocess {
                let pv = postprocess(&v);
                let lifted = lift_exponential(&pv, rho);
                let pu = postprocess(&u_h);
                let plain = |name, a, b, l2_rho, sup_rho| Quantity { name, a, b, l2_rho, sup_rho, q_rho: None, jump: None };
                record(plain("v_post", &exact_v, &pv, 0.0, 0.0))?;
                record(plain("u_lift_post", &exact_u, &lifted, 0.0, rho))?;
                record(plain("u_post", &exact_u, &pu, rho, 0.0))?;
            } else {
                let lifted = lift_exponential(&v, rho);
                let plain = |name, a, b, l2_rho, sup_rho| Quantity { name, a, b, l2_rho, sup_rho, q_rho: None, jump: None };
                record(plain("u_lift", &exact_u, &lifted, 0.0, rho))?;
                record(plain("lift_vs_weighted", &lifted, &u_h, 0.0, 0.0))?;
            }
        }
    }
    Ok(out)
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".into())
}

/// Result of [`run_study`].
#[derive(Debug, Clone, Serialize)]
pub struct StudyOutput {
    pub config: StudyConfig,
    pub q: usize,
    pub report: ConvergenceReport,
    /// Wall time per level in seconds (not part of the CSV).
    pub seconds: Vec<f64>,
}

impl StudyOutput {
    /// CSV with `#` metadata header, columns `k,q,N,err_<name>,rate_<name>,…`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("# convergence study\n");
        for line in self.config.echo() {
            let _ = writeln!(s, "# {}", line.trim_start_matches("# "));
        }
        let r = &self.report;
        let mut header = vec!["k".to_string(), "q".into(), "N".into()];
        for c in &r.columns {
            header.push(format!("err_{c}"));
            header.push(format!("rate_{c}"));
        }
        let _ = writeln!(s, "{}", header.join(","));
        let rates: Vec<Vec<Option<f64>>> = r.columns.iter().map(|c| r.rates(c).unwrap_or_default()).collect();
        for (i, level) in r.levels.iter().enumerate() {
            let mut row = vec![self.config.k.to_string(), self.q.to_string(), level.to_string()];
            for (c, col_rates) in rates.iter().enumerate() {
                row.push(r.errors[i][c].map(|e| format!("{e:.6e}")).unwrap_or_default());
                row.push(col_rates.get(i).copied().flatten().map(|x| format!("{x:.3}")).unwrap_or_default());
            }
            let _ = writeln!(s, "{}", row.join(","));
        }
        for (level, note) in r.levels.iter().zip(&r.notes) {
            if let Some(reason) = note {
                let _ = writeln!(s, "# failed N={level}: {reason}");
            }
        }
        s
    }
}

/// Runs every level, recording failed levels and continuing.
pub fn run_study(config: &StudyConfig) -> Result<StudyOutput> {
    config.validate()?;
    let q = config.resolved_q()?;
    let columns = study_columns(config);
    let mut report = ConvergenceReport::new(columns.clone());
    let cache = RuleCache::new();
    let mut seconds = Vec::new();
    for &n in &config.levels {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(|| run_level(config, n, q, &cache)))
            .unwrap_or_else(|p| Err(Error::Evaluation(format!("level panicked: {}", panic_message(p)))));
        match result {
            Ok(reports) => {
                let errors = columns
                    .iter()
                    .map(|col| {
                        let (name, norm) = col.rsplit_once('_').expect("column has a norm suffix");
                        let norm: NormKind = norm.parse().expect("known norm");
                        reports.iter().find(|(q, _)| q == name).and_then(|(_, r)| column_value(r, norm))
                    })
                    .collect();
                report.push(n, errors, reports);
            }
            Err(e) => report.push_failure(n, e.to_string()),
        }
        seconds.push(start.elapsed().as_secs_f64());
    }
    let out = StudyOutput { config: config.clone(), q, report, seconds };
    if let Some(path) = &config.out {
        std::fs::write(path, out.to_csv())?;
    }
    Ok(out)
}

/// Energy balances of one level.
#[derive(Debug, Clone, Serialize)]
pub struct EnergyLevel {
    pub n: usize,
    pub audit: EnergyAudit,
    /// Balance of the post-processed solution (transformed scheme only).
    pub post_audit: Option<EnergyAudit>,
    /// `Σ ε_m |⟦U⟧_m|²_{M0}` with the scheme's own weight.
    pub jump_sum: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyStudy {
    pub config: StudyConfig,
    pub q: usize,
    pub levels: Vec<EnergyLevel>,
}

impl EnergyStudy {
    pub fn max_relative_gap(&self) -> f64 {
        self.levels.iter().map(|l| l.audit.max_relative_gap()).fold(0.0, f64::max)
    }

    /// Rates of the jump sums under refinement.
    pub fn jump_rates(&self) -> Vec<Option<f64>> {
        eoc(&self.levels.iter().map(|l| l.jump_sum).collect::<Vec<_>>())
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("# energy audit\n");
        for line in self.config.echo() {
            let _ = writeln!(s, "# {}", line.trim_start_matches("# "));
        }
        let _ = writeln!(s, "kind,N,t,energy,dissipation,operator,source,initial,lhs,rhs,rel_gap");
        for l in &self.levels {
            let audits = std::iter::once(("dg", &l.audit)).chain(l.post_audit.iter().map(|a| ("post", a)));
            for (kind, a) in audits {
                for r in &a.rows {
                    let _ = writeln!(
                        s,
                        "{kind},{},{:.6},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.3e}",
                        l.n,
                        r.t,
                        r.energy,
                        r.dissipation,
                        r.operator_term,
                        r.source_term,
                        r.initial,
                        r.lhs,
                        r.rhs,
                        r.relative_gap()
                    );
                }
            }
        }
        let rates = self.jump_rates();
        for (i, l) in self.levels.iter().enumerate() {
            let rate = if i == 0 { None } else { rates[i - 1] };
            let _ = writeln!(
                s,
                "# jump_sum N={} {:.6e}{}",
                l.n,
                l.jump_sum,
                rate.map(|r| format!(" rate {r:.3}")).unwrap_or_default()
            );
        }
        s
    }
}

/// Energy audits of the configured scheme (first `ρ`) at every level.
pub fn run_energy_audit(config: &StudyConfig) -> Result<EnergyStudy> {
    config.validate()?;
    let q = config.resolved_q()?;
    let cache = RuleCache::new();
    let mut levels = Vec::new();
    for &n in &config.levels {
        let (dp, sol) = solve_level(config, n, &cache)?;
        let audit = energy_audit(&sol, &dp.problem)?;
        let post_audit = if config.variant == Variant::Transformed {
            Some(postprocessed_energy_audit(&postprocess(&sol), &dp.problem, sol.rho())?)
        } else {
            None
        };
        let weight = if config.variant == Variant::Weighted { sol.rho() } else { 0.0 };
        let jump_sum = jump_error_sum(&sol, &dp.problem.m0, weight);
        levels.push(EnergyLevel { n, audit, post_audit, jump_sum });
    }
    let study = EnergyStudy { config: config.clone(), q, levels };
    if let Some(path) = &config.out {
        std::fs::write(path, study.to_csv())?;
    }
    Ok(study)
}
