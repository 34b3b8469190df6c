//! Benchmark problems with known exact solutions.

mod example1;
mod example2;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use example1::Example1;
pub use example2::Example2;

use crate::analysis::NormEvaluator;
use crate::error::{config_err, Error, Result};
use crate::evolution::{EvolutionaryProblem, ExactSolution, RhsFn};
use crate::fem::{
    assemble_load, build_interval_mesh, build_rect_trimesh, BlockOperator, CompositeSpace, FeSpace, Indicator, Mesh,
    Region, SpaceKind, SpaceSampler,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum ExampleId {
    One,
    Two,
}

impl TryFrom<u8> for ExampleId {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            _ => Err(format!("unknown example {v} (expected 1 or 2)")),
        }
    }
}

impl From<ExampleId> for u8 {
    fn from(id: ExampleId) -> u8 {
        match id {
            ExampleId::One => 1,
            ExampleId::Two => 2,
        }
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u8::from(*self))
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .parse::<u8>()
            .map_err(|_| Error::Parse(format!("unknown example '{s}'")))
            .and_then(|v| Self::try_from(v).map_err(Error::Parse))
    }
}

type PointFn = Arc<dyn Fn(usize, f64, [f64; 2], [f64; 2]) -> [f64; 2] + Send + Sync>;

/// Problem data of one benchmark.
#[derive(Clone)]
pub struct ExampleSpec {
    pub id: ExampleId,
    pub dim: usize,
    /// Any positive number works for both examples.
    pub rho0: f64,
    pub m0: [Indicator; 2],
    pub m1: [Indicator; 2],
    pub exact: Arc<dyn ExactSolution>,
    /// Right-hand side `(f, g)` by component, `(component, t, x, hint)`.
    pub rhs: PointFn,
}

impl fmt::Debug for ExampleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExampleSpec").field("id", &self.id).field("dim", &self.dim).finish_non_exhaustive()
    }
}

impl ExampleSpec {
    pub fn new(id: ExampleId) -> Self {
        match id {
            ExampleId::One => example1(),
            ExampleId::Two => example2(),
        }
    }

    /// Checks that level `n` resolves the subdomain interfaces.
    pub fn check_level(&self, n: usize) -> Result<()> {
        match self.id {
            ExampleId::One if n == 0 || n % 6 != 0 => {
                config_err(format!("example 1 needs N divisible by 6 (got {n})"))
            }
            ExampleId::Two if n == 0 => config_err("example 2 needs N >= 1"),
            _ => Ok(()),
        }
    }

    /// Mesh width of level `n`: `3π/n` for example 1, `1/n` for example 2
    /// (whose square is split into `2n × 2n` cells).
    pub fn mesh_width(&self, n: usize) -> f64 {
        match self.id {
            ExampleId::One => 3.0 * std::f64::consts::PI / n as f64,
            ExampleId::Two => 1.0 / n as f64,
        }
    }

    fn mesh(&self, n: usize) -> Result<Mesh> {
        self.check_level(n)?;
        Ok(match self.id {
            ExampleId::One => Mesh::from(
                build_interval_mesh(Example1::LEFT, Example1::RIGHT, n)?
                    .with_regions(|x| if x < 0.0 { Region::Hyperbolic } else { Region::Parabolic }),
            ),
            ExampleId::Two => Mesh::from(build_rect_trimesh(2 * n)?),
        })
    }

    fn space(&self, n: usize, k: usize) -> Result<CompositeSpace> {
        if k == 0 {
            return config_err("spatial degree k must be at least 1");
        }
        let mesh = Arc::new(self.mesh(n)?);
        let u = FeSpace::new(mesh.clone(), SpaceKind::Lagrange { k, dirichlet: true })?;
        let v = match self.id {
            ExampleId::One => FeSpace::new(mesh, SpaceKind::Lagrange { k, dirichlet: false })?,
            ExampleId::Two => FeSpace::new(mesh, SpaceKind::RaviartThomas { order: k - 1 })?,
        };
        Ok(CompositeSpace::new(vec![u, v]))
    }
}

/// Mixed hyperbolic/parabolic problem in 1D:
/// `M0 = diag(1, 𝟙_hyp)`, `M1 = diag(0, 𝟙_par)`, `A = [[0, ∂x], [∂x°, 0]]`.
pub fn example1() -> ExampleSpec {
    ExampleSpec {
        id: ExampleId::One,
        dim: 1,
        rho0: 0.0,
        m0: [Indicator::One, Indicator::Region(Region::Hyperbolic)],
        m1: [Indicator::Zero, Indicator::Region(Region::Parabolic)],
        exact: Arc::new(Example1),
        rhs: Arc::new(|c, t, x, hint| match c {
            0 => [Example1::f(t, x[0], hint[0]), 0.0],
            _ => [Example1::g(t, x[0], hint[0]), 0.0],
        }),
    }
}

/// Mixed hyperbolic/elliptic problem in 2D:
/// `M0 = 𝟙_hyp`, `M1 = 𝟙_ell` on both fields, `A = [[0, div], [grad°, 0]]`.
pub fn example2() -> ExampleSpec {
    let hyp = Indicator::Region(Region::Hyperbolic);
    let ell = Indicator::Region(Region::Elliptic);
    ExampleSpec {
        id: ExampleId::Two,
        dim: 2,
        rho0: 0.0,
        m0: [hyp, hyp],
        m1: [ell, ell],
        exact: Arc::new(Example2),
        rhs: Arc::new(|c, t, x, hint| match c {
            0 => [Example2::f(t, x, hint), 0.0],
            _ => Example2::g(t, x, hint),
        }),
    }
}

/// An example discretized in space.
#[derive(Debug, Clone)]
pub struct DiscreteProblem {
    pub spec: ExampleSpec,
    pub n: usize,
    pub k: usize,
    pub operator: BlockOperator,
    pub problem: EvolutionaryProblem,
}

impl DiscreteProblem {
    pub fn space(&self) -> &CompositeSpace {
        &self.operator.space
    }

    /// Canonical interpolant of the exact solution at time `t`.
    pub fn interpolate_exact(&self, t: f64) -> Result<Vec<f64>> {
        interpolate(self.space(), self.spec.exact.as_ref(), t)
    }

    /// Error evaluator with cell quadrature of order `2k + 2`.
    pub fn norm_evaluator(&self) -> NormEvaluator {
        NormEvaluator::new(
            self.space().clone(),
            self.operator.m0_indicators.clone(),
            Some(self.spec.exact.clone()),
            2 * self.k + 2,
        )
    }
}

fn interpolate(space: &CompositeSpace, exact: &dyn ExactSolution, t: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(space.n_dofs());
    for (c, comp) in space.components().iter().enumerate() {
        out.extend(comp.interpolate(&|x, hint| exact.value(c, t, x, hint))?);
    }
    Ok(out)
}

/// Assembles `M0`, `M1`, `A`, the load evaluator and `x0` for level `N`
/// (see [`ExampleSpec::mesh_width`]) and spatial degree `k`.
pub fn build_discrete_problem(spec: &ExampleSpec, n: usize, k: usize) -> Result<DiscreteProblem> {
    let space = spec.space(n, k)?;
    let operator = BlockOperator::two_field(space.clone(), spec.m0, spec.m1)?;
    let samplers: Arc<Vec<SpaceSampler>> =
        Arc::new(space.components().iter().map(|c| SpaceSampler::new(c, 2 * k + 2)).collect());
    let load_space = space.clone();
    let data = spec.rhs.clone();
    let rhs: RhsFn = Arc::new(move |t| {
        let mut out = Vec::with_capacity(load_space.n_dofs());
        for (c, comp) in load_space.components().iter().enumerate() {
            out.extend(assemble_load(comp, &samplers[c], &|x, hint| data(c, t, x, hint)));
        }
        out
    });
    let x0 = interpolate(&space, spec.exact.as_ref(), 0.0)?;
    let problem = EvolutionaryProblem::new(
        operator.m0.clone(),
        operator.m1.clone(),
        operator.a.clone(),
        rhs,
        x0,
        spec.rho0,
    )?;
    Ok(DiscreteProblem { spec: spec.clone(), n, k, operator, problem })
}
