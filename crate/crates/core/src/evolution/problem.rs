use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{config_err, Error, Result};
use crate::fem::CsrMatrix;

/// Time-dependent load vector `t ↦ F(t)` in the composite dof space.
pub type RhsFn = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

/// Pointwise exact solution, component by component. `hint` is a point in
/// the interior of the cell containing `x` and selects the smooth piece.
pub trait ExactSolution: Send + Sync {
    fn value(&self, component: usize, t: f64, x: [f64; 2], hint: [f64; 2]) -> [f64; 2];
}

/// `(∂t M0 + M1 + A) U = F` on the discrete level.
#[derive(Clone)]
pub struct EvolutionaryProblem {
    pub m0: CsrMatrix,
    pub m1: CsrMatrix,
    pub a: CsrMatrix,
    pub rhs: RhsFn,
    pub x0: Vec<f64>,
    pub rho0: f64,
}

impl fmt::Debug for EvolutionaryProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EvolutionaryProblem")
            .field("n_dofs", &self.n_dofs())
            .field("rho0", &self.rho0)
            .finish_non_exhaustive()
    }
}

impl EvolutionaryProblem {
    pub fn new(m0: CsrMatrix, m1: CsrMatrix, a: CsrMatrix, rhs: RhsFn, x0: Vec<f64>, rho0: f64) -> Result<Self> {
        let n = m0.nrows();
        for (name, m) in [("M0", &m0), ("M1", &m1), ("A", &a)] {
            if m.nrows() != n || m.ncols() != n {
                return config_err(format!("{name} is {}x{}, expected {n}x{n}", m.nrows(), m.ncols()));
            }
        }
        if x0.len() != n {
            return config_err(format!("initial value has length {}, expected {n}", x0.len()));
        }
        if x0.iter().any(|v| !v.is_finite()) {
            return Err(Error::Evaluation("initial value is not finite".into()));
        }
        Ok(Self { m0, m1, a, rhs, x0, rho0 })
    }

    pub fn n_dofs(&self) -> usize {
        self.m0.nrows()
    }

    pub fn eval_rhs(&self, t: f64) -> Vec<f64> {
        (self.rhs)(t)
    }
}

/// Which discrete scheme is marched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Exponentially weighted Radau quadrature, operator `M1 + A`.
    Weighted,
    /// Unknown `V = e^{-ρt} U`, classical Radau quadrature, operator
    /// `ρM0 + M1 + A` and load `e^{-ρt} F`.
    Transformed,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Weighted => "weighted",
            Variant::Transformed => "transformed",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "weighted" => Ok(Variant::Weighted),
            "transformed" => Ok(Variant::Transformed),
            other => config_err(format!("unknown variant '{other}' (expected weighted|transformed)")),
        }
    }
}

/// `0 = t_0 < t_1 < ... < t_M = T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeMesh {
    points: Vec<f64>,
}

impl TimeMesh {
    pub fn uniform(t_end: f64, m: usize) -> Result<Self> {
        if m == 0 {
            return config_err("time mesh needs at least one slab");
        }
        if !(t_end > 0.0) {
            return config_err(format!("final time must be positive, got {t_end}"));
        }
        let mut points: Vec<f64> = (0..=m).map(|i| t_end * i as f64 / m as f64).collect();
        points[m] = t_end;
        Ok(Self { points })
    }

    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if points.len() < 2 || points[0] != 0.0 {
            return config_err("time mesh must start at 0 and contain at least one slab");
        }
        if points.windows(2).any(|w| !(w[1] > w[0])) {
            return config_err("time mesh points must be strictly increasing");
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn n_slabs(&self) -> usize {
        self.points.len() - 1
    }

    pub fn t_end(&self) -> f64 {
        *self.points.last().unwrap()
    }

    /// Left endpoint of slab `m` (0-based).
    pub fn t_left(&self, m: usize) -> f64 {
        self.points[m]
    }

    pub fn tau(&self, m: usize) -> f64 {
        self.points[m + 1] - self.points[m]
    }

    pub fn time(&self, m: usize, s: f64) -> f64 {
        self.points[m] + s * self.tau(m)
    }

    /// Largest ratio `τ_m / τ_{m-1}`.
    pub fn max_growth(&self) -> f64 {
        (1..self.n_slabs()).map(|m| self.tau(m) / self.tau(m - 1)).fold(1.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_mesh() {
        let m = TimeMesh::uniform(1.0, 4).unwrap();
        assert_eq!(m.points(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(m.n_slabs(), 4);
        assert_eq!(m.time(1, 0.5), 0.375);
        assert_eq!(m.max_growth(), 1.0);
        assert!(TimeMesh::uniform(1.0, 0).is_err());
        assert!(TimeMesh::from_points(vec![0.0, 0.5, 0.5]).is_err());
        let g = TimeMesh::from_points(vec![0.0, 0.1, 0.3]).unwrap();
        assert!((g.max_growth() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("Weighted".parse::<Variant>().unwrap(), Variant::Weighted);
        assert_eq!(Variant::Transformed.to_string(), "transformed");
        assert!("other".parse::<Variant>().is_err());
    }

    #[test]
    fn problem_dimension_checks() {
        let i = CsrMatrix::from_triplets(1, 1, &[(0, 0, 1.0)]);
        let rhs: RhsFn = Arc::new(|_| vec![0.0]);
        assert!(EvolutionaryProblem::new(i.clone(), i.clone(), i.clone(), rhs.clone(), vec![1.0], 0.0).is_ok());
        assert!(EvolutionaryProblem::new(i.clone(), i.clone(), i.clone(), rhs.clone(), vec![1.0, 2.0], 0.0).is_err());
        assert!(EvolutionaryProblem::new(i.clone(), i.clone(), i, rhs, vec![f64::NAN], 0.0).is_err());
    }
}
