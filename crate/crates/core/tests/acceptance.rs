//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! `cargo test -p stdg --test acceptance` runs everything (tens of minutes in
//! release-like builds, the 2D runs dominate). Criterion numbers given as
//! arguments restrict the run, e.g. `cargo test --test acceptance -- 1 6`.

use std::sync::Arc;
use std::time::Instant;

use nalgebra::DMatrix;
use stdg::analysis::{q_norm_error, weighted_l2_error};
use stdg::evolution::{march, EvolutionaryProblem, RhsFn, TimeMesh, Variant};
use stdg::fem::CsrMatrix;
use stdg::postprocess::{collocation_residual, postprocess};
use stdg::problems::{build_discrete_problem, ExampleId, ExampleSpec};
use stdg::quadrature::{build_weighted_radau, exp_moments};
use stdg::study::{run_energy_audit, run_study, NormKind, QSetting, StudyConfig, StudyOutput};
use stdg::RuleCache;

/// Collected failures of one criterion.
#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    count: usize,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn fail(&mut self, what: String) {
        self.count += 1;
        self.failures.push(what);
    }
}

/// One printed column: errors per level (`None` where the table has no
/// entry) and the printed rates.
struct Column {
    name: &'static str,
    values: &'static [Option<f64>],
    rates: &'static [Option<f64>],
}

struct Block {
    k: usize,
    q: usize,
    levels: &'static [usize],
    columns: &'static [Column],
}

const fn col(name: &'static str, values: &'static [Option<f64>], rates: &'static [Option<f64>]) -> Column {
    Column { name, values, rates }
}

fn config(example: ExampleId, variant: Variant, rho: &[f64], k: usize, q: usize, levels: &[usize]) -> StudyConfig {
    StudyConfig {
        example,
        variant,
        rho: rho.to_vec(),
        k,
        q: Some(QSetting::Degree(q)),
        levels: levels.to_vec(),
        ..StudyConfig::default()
    }
}

fn study(checks: &mut Checks, cfg: &StudyConfig) -> Option<StudyOutput> {
    let start = Instant::now();
    match run_study(cfg) {
        Ok(out) => {
            eprintln!(
                "    example {} {} k/q={}/{} levels {:?}: {:.1} s",
                cfg.example,
                cfg.variant,
                cfg.k,
                out.q,
                cfg.levels,
                start.elapsed().as_secs_f64()
            );
            for (n, note) in out.report.levels.iter().zip(&out.report.notes) {
                if let Some(reason) = note {
                    checks.fail(format!("k={} N={n} failed: {reason}", cfg.k));
                }
            }
            Some(out)
        }
        Err(e) => {
            checks.fail(format!("k={} study failed: {e}", cfg.k));
            None
        }
    }
}

/// Values within `vtol` relative, rates within `rtol` of the printed ones.
fn compare_block(checks: &mut Checks, out: &StudyOutput, block: &Block, vtol: f64, rtol: f64) {
    let report = &out.report;
    for c in block.columns {
        let Some(values) = report.column(c.name) else {
            checks.fail(format!("missing column {}", c.name));
            continue;
        };
        let rates = report.rates(c.name).unwrap_or_default();
        for (i, &n) in block.levels.iter().enumerate() {
            let got = values.get(i).copied().flatten();
            if let Some(want) = c.values[i] {
                match got {
                    Some(g) => checks.check((g - want).abs() <= vtol * want, || {
                        format!("{}/{} N={n} {}: {g:.4e} vs {want:.3e}", block.k, block.q, c.name)
                    }),
                    None => checks.fail(format!("{}/{} N={n} {}: no value", block.k, block.q, c.name)),
                }
            }
            if let Some(want) = c.rates.get(i).copied().flatten() {
                match rates.get(i).copied().flatten() {
                    Some(r) => checks.check((r - want).abs() <= rtol, || {
                        format!("{}/{} N={n} rate {}: {r:.3} vs {want:.2}", block.k, block.q, c.name)
                    }),
                    None => checks.fail(format!("{}/{} N={n} rate {}: none", block.k, block.q, c.name)),
                }
            }
        }
    }
}

/// Rates at every refinement within `tol` of `target` (or at least
/// `target - tol` when `at_least`).
fn check_rates(checks: &mut Checks, out: &StudyOutput, name: &str, target: f64, tol: f64, at_least: bool) {
    let Some(rates) = out.report.rates(name) else {
        checks.fail(format!("missing column {name}"));
        return;
    };
    for (r, n) in rates.iter().zip(&out.report.levels).skip(1) {
        match r {
            Some(r) => {
                let ok = if at_least { *r >= target - tol } else { (r - target).abs() <= tol };
                checks.check(ok, || format!("k={} N={n} rate {name}: {r:.3} vs {target}", out.config.k));
            }
            None => checks.fail(format!("k={} N={n} rate {name}: none", out.config.k)),
        }
    }
}

fn criterion_1(checks: &mut Checks) {
    for q in 0..=5 {
        for sigma in [0.0, 0.01, 0.5, 2.0] {
            let rule = match build_weighted_radau(q, sigma) {
                Ok(r) => r,
                Err(e) => {
                    checks.fail(format!("q={q} σ={sigma}: {e}"));
                    continue;
                }
            };
            let mu = exp_moments(sigma, 2 * q);
            for (d, &exact) in mu.iter().enumerate() {
                let got = rule.apply(|s| s.powi(d as i32));
                checks.check((got - exact).abs() <= 1e-12 * exact.abs(), || {
                    format!("q={q} σ={sigma} degree {d}: {got:e} vs {exact:e}")
                });
            }
            checks.check(*rule.nodes().last().unwrap() == 1.0, || format!("q={q} σ={sigma}: last node not 1"));
        }
    }
    let r = build_weighted_radau(1, 0.0).unwrap();
    let expected = [(1.0 / 3.0, 0.75), (1.0, 0.25)];
    for ((&x, &w), (ex, ew)) in r.nodes().iter().zip(r.weights()).zip(expected) {
        checks.check((x - ex).abs() < 1e-14 && (w - ew).abs() < 1e-14, || format!("classical Radau: ({x}, {w})"));
    }
}

const N3: &[usize] = &[192, 384, 768];

const WEIGHTED_1D: &[Block] = &[
    Block {
        k: 1,
        q: 0,
        levels: N3,
        columns: &[
            col("u_rho1_l2", &[Some(5.462e-3), Some(2.730e-3), Some(1.364e-3)], &[None, Some(1.00), Some(1.00)]),
            col("u_rho2_l2", &[Some(3.347e-3), Some(1.675e-3), Some(8.376e-4)], &[None, Some(1.00), Some(1.00)]),
            col("rho_diff_l2", &[Some(2.475e-3), Some(1.238e-3), Some(6.192e-4)], &[None, Some(1.00), Some(1.00)]),
        ],
    },
    Block {
        k: 2,
        q: 1,
        levels: N3,
        columns: &[
            col("u_rho1_l2", &[Some(1.660e-5), Some(4.150e-6), Some(1.037e-6)], &[None, Some(2.00), Some(2.00)]),
            col("u_rho2_l2", &[Some(8.703e-6), Some(2.176e-6), Some(5.440e-7)], &[None, Some(2.00), Some(2.00)]),
            col("rho_diff_l2", &[Some(1.139e-8), Some(1.424e-9), Some(1.780e-10)], &[None, Some(3.00), Some(3.00)]),
        ],
    },
    Block {
        k: 3,
        q: 2,
        levels: &[96, 192, 384, 768],
        columns: &[
            col(
                "u_rho1_l2",
                &[Some(2.233e-8), Some(2.113e-9), Some(2.384e-10), Some(2.893e-11)],
                &[None, Some(3.40), Some(3.15), Some(3.04)],
            ),
            col(
                "u_rho2_l2",
                &[Some(1.291e-8), Some(1.319e-9), Some(1.543e-10), Some(1.894e-11)],
                &[None, Some(3.29), Some(3.10), Some(3.03)],
            ),
            col(
                "rho_diff_l2",
                &[Some(7.652e-11), Some(4.783e-12), Some(3.002e-13), Some(8.106e-14)],
                &[None, Some(4.00), Some(3.99), Some(1.89)],
            ),
        ],
    },
];

fn criterion_2(checks: &mut Checks) {
    for block in WEIGHTED_1D {
        let cfg = config(ExampleId::One, Variant::Weighted, &[1.0, 2.0], block.k, block.q, block.levels);
        if let Some(out) = study(checks, &cfg) {
            compare_block(checks, &out, block, 0.10, 0.10);
        }
    }
}

const TRANSFORMED_1D: &[Block] = &[
    Block {
        k: 1,
        q: 0,
        levels: N3,
        columns: &[
            col("v_l2", &[Some(1.319e-2), Some(6.601e-3), Some(3.302e-3)], &[None, Some(1.00), Some(1.00)]),
            col("u_lift_l2", &[Some(2.691e-2), Some(1.348e-2), Some(6.747e-3)], &[None, Some(1.00), Some(1.00)]),
            col("lift_vs_weighted_l2", &[Some(2.798e-2), Some(1.402e-2), Some(7.014e-3)], &[None, Some(1.00), Some(1.00)]),
        ],
    },
    Block {
        k: 2,
        q: 1,
        levels: N3,
        columns: &[
            col("v_l2", &[Some(1.728e-5), Some(4.321e-6), Some(1.080e-6)], &[None, Some(2.00), Some(2.00)]),
            col("u_lift_l2", &[Some(4.550e-5), Some(1.138e-5), Some(2.846e-6)], &[None, Some(2.00), Some(2.00)]),
            col("lift_vs_weighted_l2", &[Some(3.283e-5), Some(8.221e-6), Some(2.057e-6)], &[None, Some(2.00), Some(2.00)]),
        ],
    },
    Block {
        k: 3,
        q: 2,
        levels: N3,
        columns: &[
            col("v_l2", &[Some(1.317e-8), Some(1.645e-9), Some(2.056e-10)], &[None, Some(3.00), Some(3.00)]),
            col("u_lift_l2", &[Some(2.620e-8), Some(3.271e-9), Some(4.089e-10)], &[None, Some(3.00), Some(3.00)]),
            col("lift_vs_weighted_l2", &[Some(2.549e-8), Some(3.191e-9), Some(3.991e-10)], &[None, Some(3.00), Some(3.00)]),
        ],
    },
];

fn criterion_3(checks: &mut Checks) {
    for block in TRANSFORMED_1D {
        let cfg = config(ExampleId::One, Variant::Transformed, &[2.0], block.k, block.q, block.levels);
        if let Some(out) = study(checks, &cfg) {
            compare_block(checks, &out, block, 0.10, 0.10);
        }
    }
}

/// Post-processed errors: L² columns followed by the L∞(M0) columns.
const POSTPROCESSED_1D: &[Block] = &[
    Block {
        k: 3,
        q: 1,
        levels: N3,
        columns: &[
            col("v_l2", &[Some(1.521e-5), Some(3.803e-6), Some(9.508e-7)], &[]),
            col("v_post_l2", &[Some(2.467e-8), Some(3.086e-9), Some(3.859e-10)], &[]),
            col("u_lift_post_l2", &[Some(4.854e-8), Some(6.065e-9), Some(7.581e-10)], &[]),
            col("u_post_l2", &[Some(9.174e-9), Some(1.148e-9), Some(1.436e-10)], &[]),
            col("v_linf", &[Some(2.999e-5), Some(7.530e-6), Some(1.887e-6)], &[]),
            col("v_post_linf", &[Some(5.830e-8), Some(7.326e-9), Some(9.183e-10)], &[]),
            col("u_lift_post_linf", &[Some(5.830e-8), Some(7.326e-9), Some(9.183e-10)], &[]),
            col("u_post_linf", &[Some(1.002e-7), Some(1.253e-8), Some(1.567e-9)], &[]),
        ],
    },
    Block {
        k: 4,
        q: 2,
        levels: N3,
        columns: &[
            col("v_l2", &[Some(1.316e-8), Some(1.645e-9), Some(2.056e-10)], &[]),
            col("v_post_l2", &[Some(6.342e-11), Some(3.964e-12), Some(2.621e-13)], &[]),
            col("u_lift_post_l2", &[Some(2.475e-10), Some(1.547e-11), Some(1.022e-12)], &[]),
            col("u_post_l2", &[Some(6.149e-11), Some(3.851e-12), Some(2.543e-13)], &[]),
            col("v_linf", &[Some(3.979e-8), Some(4.992e-9), Some(6.252e-10)], &[]),
            col("v_post_linf", &[Some(6.713e-11), Some(4.196e-12), Some(2.674e-13)], &[]),
            col("u_lift_post_linf", &[Some(6.713e-11), Some(4.196e-12), Some(2.674e-13)], &[]),
            col("u_post_linf", &[Some(4.570e-10), Some(2.858e-11), Some(1.838e-12)], &[]),
        ],
    },
];

const POST_COLUMNS: &[&str] =
    &["v_post_l2", "u_lift_post_l2", "u_post_l2", "v_post_linf", "u_lift_post_linf", "u_post_linf"];

fn criterion_4(checks: &mut Checks) {
    for block in POSTPROCESSED_1D {
        let mut cfg = config(ExampleId::One, Variant::Transformed, &[2.0], block.k, block.q, block.levels);
        cfg.postprocess = true;
        cfg.norms = vec![NormKind::L2, NormKind::Linf];
        if let Some(out) = study(checks, &cfg) {
            compare_block(checks, &out, block, 0.10, f64::INFINITY);
            for name in POST_COLUMNS {
                check_rates(checks, &out, name, (block.q + 2) as f64, 0.15, false);
            }
        }
    }
}

const N2D: &[usize] = &[16, 32, 64];

const BLOCKS_2D: &[(Variant, Block)] = &[
    (
        Variant::Weighted,
        Block {
            k: 1,
            q: 0,
            levels: N2D,
            columns: &[
                col("u_rho1_l2", &[Some(3.614e-2), Some(1.789e-2), Some(8.902e-3)], &[None, Some(1.01), Some(1.01)]),
                col("u_rho2_l2", &[Some(1.935e-2), Some(9.583e-3), Some(4.771e-3)], &[None, Some(1.01), Some(1.01)]),
                col("rho_diff_l2", &[Some(7.863e-3), Some(3.926e-3), Some(1.965e-3)], &[None, Some(1.00), Some(1.00)]),
            ],
        },
    ),
    (
        Variant::Weighted,
        Block {
            k: 2,
            q: 1,
            levels: N2D,
            columns: &[
                col("u_rho1_l2", &[None, Some(1.051e-4), Some(2.626e-5)], &[None, None, Some(2.00)]),
                col("u_rho2_l2", &[None, Some(6.583e-5), Some(1.646e-5)], &[None, None, Some(2.00)]),
                col("rho_diff_l2", &[None, Some(1.299e-6), Some(1.622e-7)], &[None, None, Some(3.00)]),
            ],
        },
    ),
    (
        Variant::Transformed,
        Block {
            k: 1,
            q: 0,
            levels: N2D,
            columns: &[
                col("v_l2", &[Some(2.637e-2), Some(1.322e-2), Some(6.621e-3)], &[None, Some(1.00), Some(1.00)]),
                col("u_lift_l2", &[Some(4.900e-2), Some(2.471e-2), Some(1.241e-2)], &[None, Some(0.99), Some(0.99)]),
                col("lift_vs_weighted_l2", &[Some(2.641e-2), Some(1.294e-2), Some(6.399e-3)], &[None, Some(1.03), Some(1.02)]),
            ],
        },
    ),
    (
        Variant::Transformed,
        Block {
            k: 2,
            q: 1,
            levels: N2D,
            columns: &[
                col("v_l2", &[Some(2.617e-4), Some(6.562e-5), Some(1.643e-5)], &[None, Some(2.00), Some(2.00)]),
                col("u_lift_l2", &[Some(4.758e-4), Some(1.193e-4), Some(2.988e-5)], &[None, Some(2.00), Some(2.00)]),
                col("lift_vs_weighted_l2", &[Some(6.818e-4), Some(1.716e-4), Some(4.304e-5)], &[None, Some(1.99), Some(2.00)]),
            ],
        },
    ),
];

fn criterion_5(checks: &mut Checks) {
    for (variant, block) in BLOCKS_2D {
        let rho: &[f64] = if *variant == Variant::Weighted { &[1.0, 2.0] } else { &[1.0] };
        let cfg = config(ExampleId::Two, *variant, rho, block.k, block.q, block.levels);
        if let Some(out) = study(checks, &cfg) {
            compare_block(checks, &out, block, 0.15, 0.15);
        }
    }
    // higher degrees at reduced levels: rates only
    let coarse = [8, 16, 32];
    let cfg = config(ExampleId::Two, Variant::Weighted, &[1.0, 2.0], 3, 2, &coarse);
    if let Some(out) = study(checks, &cfg) {
        check_rates(checks, &out, "u_rho1_l2", 3.0, 0.2, false);
        check_rates(checks, &out, "u_rho2_l2", 3.0, 0.2, false);
        check_rates(checks, &out, "rho_diff_l2", 3.0, 0.2, true);
    }
    let cfg = config(ExampleId::Two, Variant::Transformed, &[1.0], 3, 2, &coarse);
    if let Some(out) = study(checks, &cfg) {
        for name in ["v_l2", "u_lift_l2", "lift_vs_weighted_l2"] {
            check_rates(checks, &out, name, 3.0, 0.2, false);
        }
    }
    for (k, q) in [(3, 1), (4, 2)] {
        let mut cfg = config(ExampleId::Two, Variant::Transformed, &[1.0], k, q, &coarse);
        cfg.postprocess = true;
        cfg.norms = vec![NormKind::L2, NormKind::Linf];
        if let Some(out) = study(checks, &cfg) {
            check_rates(checks, &out, "v_l2", (q + 1) as f64, 0.2, false);
            check_rates(checks, &out, "v_linf", (q + 1) as f64, 0.2, false);
            for name in POST_COLUMNS {
                check_rates(checks, &out, name, (q + 2) as f64, 0.2, false);
            }
        }
    }
}

fn criterion_6(checks: &mut Checks) {
    for q in 0..=2 {
        for (variant, rho) in [(Variant::Weighted, 1.0), (Variant::Transformed, 2.0)] {
            let cfg = config(ExampleId::One, variant, &[rho], q + 1, q, &[24, 48, 96]);
            match run_energy_audit(&cfg) {
                Ok(audit) => {
                    let gap = audit.max_relative_gap();
                    checks.check(gap <= 1e-10, || format!("q={q} {variant}: energy gap {gap:.2e}"));
                    for r in audit.jump_rates().into_iter().skip(1) {
                        let target = (2 * q + 1) as f64;
                        match r {
                            Some(r) => checks.check((r - target).abs() <= 0.3, || {
                                format!("q={q} {variant}: jump-sum rate {r:.3} vs {target}")
                            }),
                            None => checks.fail(format!("q={q} {variant}: no jump-sum rate")),
                        }
                    }
                }
                Err(e) => checks.fail(format!("q={q} {variant}: {e}")),
            }
        }
    }
}

fn criterion_7(checks: &mut Checks) {
    let cases = [(ExampleId::One, 48, 3, 1, 2.0), (ExampleId::One, 48, 4, 2, 2.0), (ExampleId::Two, 4, 2, 1, 1.0)];
    for (id, n, k, q, rho) in cases {
        let dp = match build_discrete_problem(&ExampleSpec::new(id), n, k) {
            Ok(dp) => dp,
            Err(e) => {
                checks.fail(format!("example {id}: {e}"));
                continue;
            }
        };
        let mesh = TimeMesh::uniform(1.0, n).unwrap();
        let sol = match march(&dp.problem, &mesh, q, rho, Variant::Transformed) {
            Ok(s) => s,
            Err(e) => {
                checks.fail(format!("example {id}: {e}"));
                continue;
            }
        };
        let pp = postprocess(&sol);
        let residual = collocation_residual(&pp, &dp.problem, rho).relative();
        let defect = pp.max_continuity_defect();
        checks.check(residual <= 1e-10, || format!("example {id} k/q={k}/{q}: collocation residual {residual:.2e}"));
        checks.check(defect <= 1e-12, || format!("example {id} k/q={k}/{q}: continuity defect {defect:.2e}"));
    }
}

fn skew_defect(a: &CsrMatrix) -> f64 {
    a.linear_combination(1.0, &a.transpose(), 1.0).max_abs() / a.max_abs().max(1.0)
}

fn dense(a: &CsrMatrix) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(a.nrows(), a.ncols());
    for (r, c, v) in a.triplets() {
        d[(r, c)] += v;
    }
    d
}

/// Small system with `M0` singular on one unknown.
fn reproduction_problem(q: usize, variant: Variant, rho: f64) -> (EvolutionaryProblem, impl Fn(f64) -> Vec<f64>) {
    let m0 = CsrMatrix::from_triplets(3, 3, &[(0, 0, 1.0), (1, 1, 2.0)]);
    let m1 = CsrMatrix::from_triplets(3, 3, &[(1, 1, 0.5), (2, 2, 1.0)]);
    let a = CsrMatrix::from_triplets(3, 3, &[(0, 1, 1.5), (1, 0, -1.5), (0, 2, -1.0), (2, 0, 1.0)]);
    let poly = move |t: f64| -> (Vec<f64>, Vec<f64>) {
        let p: Vec<f64> = (0..3)
            .map(|c| (0..=q).map(|j| (c + j + 1) as f64 * 0.3f64.powi(j as i32) * t.powi(j as i32)).sum())
            .collect();
        let dp: Vec<f64> = (0..3)
            .map(|c| (1..=q).map(|j| (c + j + 1) as f64 * 0.3f64.powi(j as i32) * j as f64 * t.powi(j as i32 - 1)).sum())
            .collect();
        (p, dp)
    };
    let shift = if variant == Variant::Transformed { rho } else { 0.0 };
    let l = m0.linear_combination(shift, &m1, 1.0).linear_combination(1.0, &a, 1.0);
    let (m0c, lc) = (m0.clone(), l.clone());
    let rhs: RhsFn = Arc::new(move |t| {
        let (p, dp) = poly(t);
        let mut f = m0c.mul_vec(&dp);
        f.iter_mut().zip(lc.mul_vec(&p)).for_each(|(a, b)| *a += b);
        // the transformed scheme is fed e^{-ρt} F
        let scale = if variant == Variant::Transformed { (rho * t).exp() } else { 1.0 };
        f.iter().map(|v| v * scale).collect()
    });
    let x0 = poly(0.0).0;
    (EvolutionaryProblem::new(m0, m1, a, rhs, x0, 0.0).unwrap(), move |t| poly(t).0)
}

fn criterion_8(checks: &mut Checks) {
    for (id, n, k) in [(ExampleId::One, 48, 2), (ExampleId::One, 192, 3), (ExampleId::Two, 4, 2), (ExampleId::Two, 16, 1)] {
        let dp = build_discrete_problem(&ExampleSpec::new(id), n, k).unwrap();
        let p = &dp.problem;
        let s = skew_defect(&p.a);
        checks.check(s <= 1e-12, || format!("example {id} N={n}: skew defect {s:.2e}"));
        if p.n_dofs() <= 2000 {
            for rho in [0.5, 1.0, 2.0] {
                let shifted = dense(&p.m0.linear_combination(rho, &p.m1, 1.0));
                let sym = (&shifted - shifted.transpose()).amax();
                checks.check(sym <= 1e-12 * shifted.amax(), || format!("example {id}: ρM0+M1 not symmetric"));
                checks.check(shifted.cholesky().is_some(), || format!("example {id} N={n} ρ={rho}: ρM0+M1 not PD"));
            }
        }
    }
    let mesh = TimeMesh::from_points(vec![0.0, 0.1, 0.25, 0.3, 0.6, 1.0]).unwrap();
    for q in 0..=4 {
        for (variant, rho) in [(Variant::Weighted, 0.0), (Variant::Weighted, 1.5), (Variant::Transformed, 2.0)] {
            let (p, exact) = reproduction_problem(q, variant, rho);
            let sol = march(&p, &mesh, q, rho, variant).unwrap();
            let mut err: f64 = 0.0;
            for m in 0..mesh.n_slabs() {
                for (i, &s) in sol.rule(m).nodes().iter().enumerate() {
                    let e = exact(mesh.time(m, s));
                    for (a, b) in sol.nodal(m)[i].iter().zip(&e) {
                        err = err.max((a - b).abs() / (1.0 + b.abs()));
                    }
                }
            }
            checks.check(err <= 1e-12, || format!("q={q} {variant} ρ={rho}: polynomial reproduction error {err:.2e}"));
        }
    }
    let dp = build_discrete_problem(&ExampleSpec::new(ExampleId::One), 24, 2).unwrap();
    let eval = dp.norm_evaluator();
    let mesh = TimeMesh::uniform(1.0, 24).unwrap();
    let cache = RuleCache::new();
    let p = &dp.problem;
    let n = p.n_dofs();
    let zero =
        EvolutionaryProblem::new(p.m0.clone(), p.m1.clone(), p.a.clone(), Arc::new(move |_| vec![0.0; n]), vec![0.0; n], 0.0)
            .unwrap();
    for q in 0..=3 {
        let a = march(p, &mesh, q, 1.0, Variant::Weighted).unwrap();
        let b = march(&zero, &mesh, q, 1.0, Variant::Weighted).unwrap();
        for rho in [0.0, 1.0, 3.0] {
            let qn = q_norm_error(&eval, &a, &b, rho, q, &cache).unwrap();
            let l2 = weighted_l2_error(&eval, &a, &b, rho, 24);
            checks.check((qn - l2).abs() <= 1e-12 * l2, || format!("q={q} ρ={rho}: q-norm {qn:e} vs L² {l2:e}"));
        }
    }
}

const CRITERIA: [(&str, fn(&mut Checks)); 8] = [
    ("weighted Radau exactness", criterion_1),
    ("Example 1 weighted, two rho", criterion_2),
    ("Example 1 transformed, rho = 2", criterion_3),
    ("Example 1 post-processing, L2 and Linf", criterion_4),
    ("Example 2 convergence", criterion_5),
    ("discrete energy identity and jump decay", criterion_6),
    ("collocation form of the post-processed solution", criterion_7),
    ("structural invariants", criterion_8),
];

fn main() {
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (title, run)) in CRITERIA.iter().enumerate() {
        let id = i + 1;
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let mut checks = Checks::default();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(&mut checks)));
        if outcome.is_err() {
            checks.fail("panicked".into());
        }
        let secs = start.elapsed().as_secs_f64();
        let verdict = if checks.failures.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "{verdict} criterion {id}: {title} ({} of {} checks failed, {secs:.1} s)",
            checks.failures.len(),
            checks.count
        );
        for f in &checks.failures {
            println!("    {f}");
        }
        if !checks.failures.is_empty() {
            failed += 1;
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
