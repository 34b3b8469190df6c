use std::io::{BufRead, Write};
use std::sync::Arc;

use super::problem::{TimeMesh, Variant};
use crate::error::{config_err, Error, Result};
use crate::poly::LagrangeBasis;
use crate::quadrature::{RuleCache, WeightedRadauRule};

/// Slabwise polynomial in time with values in the composite dof space,
/// stored as nodal vectors at the slab's Radau points.
///
/// Slabs are indexed from 0: slab `m` is `(t_m, t_{m+1}]`.
#[derive(Debug, Clone)]
pub struct DiscreteSolution {
    q: usize,
    rho: f64,
    variant: Variant,
    mesh: TimeMesh,
    rules: Vec<Arc<WeightedRadauRule>>,
    bases: Vec<LagrangeBasis>,
    values: Vec<Vec<Vec<f64>>>,
    x0: Vec<f64>,
}

impl DiscreteSolution {
    pub fn new(
        q: usize,
        rho: f64,
        variant: Variant,
        mesh: TimeMesh,
        rules: Vec<Arc<WeightedRadauRule>>,
        values: Vec<Vec<Vec<f64>>>,
        x0: Vec<f64>,
    ) -> Result<Self> {
        let m = mesh.n_slabs();
        if rules.len() != m || values.len() != m {
            return config_err("one rule and one set of nodal values per slab required");
        }
        let n = x0.len();
        for (rule, nodal) in rules.iter().zip(&values) {
            if rule.degree() != q || nodal.len() != q + 1 || nodal.iter().any(|v| v.len() != n) {
                return config_err("nodal values do not match degree or dof count");
            }
        }
        let bases = rules.iter().map(|r| LagrangeBasis::new(r.nodes())).collect();
        Ok(Self { q, rho, variant, mesh, rules, bases, values, x0 })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn time_mesh(&self) -> &TimeMesh {
        &self.mesh
    }

    pub fn x0(&self) -> &[f64] {
        &self.x0
    }

    pub fn n_dofs(&self) -> usize {
        self.x0.len()
    }

    pub fn rule(&self, m: usize) -> &WeightedRadauRule {
        &self.rules[m]
    }

    /// Nodal vectors `U_{m,i}` of slab `m`.
    pub fn nodal(&self, m: usize) -> &[Vec<f64>] {
        &self.values[m]
    }

    fn combine(&self, m: usize, coeffs: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n_dofs()];
        for (c, u) in coeffs.iter().zip(&self.values[m]) {
            if *c != 0.0 {
                out.iter_mut().zip(u).for_each(|(o, v)| *o += c * v);
            }
        }
        out
    }

    /// Value at `t = t_m + s τ_m`, `s ∈ [0, 1]`; `s = 0` gives the right limit.
    pub fn eval(&self, m: usize, s: f64) -> Vec<f64> {
        self.combine(m, &self.bases[m].values(s))
    }

    /// Time derivative at `t = t_m + s τ_m`.
    pub fn eval_derivative(&self, m: usize, s: f64) -> Vec<f64> {
        let tau = self.mesh.tau(m);
        let d: Vec<f64> = self.bases[m].derivatives(s).iter().map(|v| v / tau).collect();
        self.combine(m, &d)
    }

    /// `U(t_{m+1}^-)`, the last nodal value since `s_q = 1`.
    pub fn left_limit(&self, m: usize) -> &[f64] {
        &self.values[m][self.q]
    }

    /// `U(t_m^+)`.
    pub fn right_limit(&self, m: usize) -> Vec<f64> {
        self.eval(m, 0.0)
    }

    /// State entering slab `m`: `x0` for the first slab.
    pub fn state_before(&self, m: usize) -> &[f64] {
        if m == 0 {
            &self.x0
        } else {
            self.left_limit(m - 1)
        }
    }

    /// `⟦U⟧_m = U(t_m^+) − U(t_m^-)` with `U(t_0^-) = x0`.
    pub fn jump(&self, m: usize) -> Vec<f64> {
        let mut j = self.right_limit(m);
        j.iter_mut().zip(self.state_before(m)).for_each(|(a, b)| *a -= b);
        j
    }

    /// Writes a plain-text checkpoint.
    ///
    /// Layout: `#`-prefixed `key=value` header lines (`q`, `rho`, `variant`,
    /// `n_dofs`, `times`), then one CSV row `slab,node,v_0,...` per stored
    /// vector. Row `0,0` holds `x0`; slabs are numbered from 1 in the file.
    pub fn write_checkpoint(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "# stdg solution checkpoint")?;
        writeln!(w, "# q={}", self.q)?;
        writeln!(w, "# rho={}", self.rho)?;
        writeln!(w, "# variant={}", self.variant)?;
        writeln!(w, "# n_dofs={}", self.n_dofs())?;
        let times: Vec<String> = self.mesh.points().iter().map(|t| t.to_string()).collect();
        writeln!(w, "# times={}", times.join(" "))?;
        let row = |w: &mut dyn Write, slab: usize, node: usize, v: &[f64]| -> std::io::Result<()> {
            write!(w, "{slab},{node}")?;
            for x in v {
                write!(w, ",{x}")?;
            }
            writeln!(w)
        };
        row(&mut w, 0, 0, &self.x0)?;
        for (m, nodal) in self.values.iter().enumerate() {
            for (i, v) in nodal.iter().enumerate() {
                row(&mut w, m + 1, i, v)?;
            }
        }
        Ok(())
    }

    /// Reads a checkpoint written by [`write_checkpoint`](Self::write_checkpoint);
    /// quadrature rules are rebuilt from `q`, `rho` and the variant.
    pub fn read_checkpoint(r: impl BufRead, cache: &RuleCache) -> Result<Self> {
        let parse_err = |msg: String| Error::Parse(msg);
        let (mut q, mut rho, mut variant, mut n_dofs, mut times) = (None, None, None, None, None);
        let mut rows: Vec<(usize, usize, Vec<f64>)> = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(header) = line.strip_prefix('#') {
                if let Some((k, v)) = header.trim().split_once('=') {
                    let v = v.trim();
                    match k.trim() {
                        "q" => q = Some(v.parse::<usize>().map_err(|e| parse_err(format!("q: {e}")))?),
                        "rho" => rho = Some(v.parse::<f64>().map_err(|e| parse_err(format!("rho: {e}")))?),
                        "variant" => variant = Some(v.parse::<Variant>()?),
                        "n_dofs" => n_dofs = Some(v.parse::<usize>().map_err(|e| parse_err(format!("n_dofs: {e}")))?),
                        "times" => {
                            let t: std::result::Result<Vec<f64>, _> = v.split_whitespace().map(str::parse).collect();
                            times = Some(t.map_err(|e| parse_err(format!("times: {e}")))?);
                        }
                        _ => {}
                    }
                }
                continue;
            }
            let mut fields = line.split(',');
            let mut next_index = || -> Result<usize> {
                fields
                    .next()
                    .ok_or_else(|| parse_err(format!("line {}: missing index", lineno + 1)))?
                    .trim()
                    .parse()
                    .map_err(|e| parse_err(format!("line {}: {e}", lineno + 1)))
            };
            let slab = next_index()?;
            let node = next_index()?;
            let values: std::result::Result<Vec<f64>, _> = fields.map(|f| f.trim().parse::<f64>()).collect();
            rows.push((slab, node, values.map_err(|e| parse_err(format!("line {}: {e}", lineno + 1)))?));
        }
        let missing = |k: &str| parse_err(format!("checkpoint header lacks '{k}'"));
        let q = q.ok_or_else(|| missing("q"))?;
        let rho = rho.ok_or_else(|| missing("rho"))?;
        let variant = variant.ok_or_else(|| missing("variant"))?;
        let n_dofs = n_dofs.ok_or_else(|| missing("n_dofs"))?;
        let mesh = TimeMesh::from_points(times.ok_or_else(|| missing("times"))?)?;
        let n_slabs = mesh.n_slabs();
        let mut x0 = None;
        let mut values = vec![vec![Vec::new(); q + 1]; n_slabs];
        for (slab, node, v) in rows {
            if v.len() != n_dofs {
                return Err(parse_err(format!("row {slab},{node} has {} values, expected {n_dofs}", v.len())));
            }
            if slab == 0 {
                x0 = Some(v);
            } else if slab <= n_slabs && node <= q {
                values[slab - 1][node] = v;
            } else {
                return Err(parse_err(format!("row index {slab},{node} out of range")));
            }
        }
        let x0 = x0.ok_or_else(|| parse_err("checkpoint lacks the initial value row".into()))?;
        let rules = (0..n_slabs)
            .map(|m| {
                let sigma = if variant == Variant::Weighted { rho * mesh.tau(m) } else { 0.0 };
                cache.get(q, sigma)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(q, rho, variant, mesh, rules, values, x0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> DiscreteSolution {
        let cache = RuleCache::new();
        let mesh = TimeMesh::uniform(1.0, 2).unwrap();
        let rules = vec![cache.get(1, 0.0).unwrap(), cache.get(1, 0.0).unwrap()];
        // slab 0: u(t) = t (nodes 1/6, 1/2), slab 1: constant 2
        let values = vec![vec![vec![1.0 / 6.0], vec![0.5]], vec![vec![2.0], vec![2.0]]];
        DiscreteSolution::new(1, 0.0, Variant::Transformed, mesh, rules, values, vec![0.25]).unwrap()
    }

    #[test]
    fn limits_and_jumps() {
        let s = sample();
        assert!((s.right_limit(0)[0]).abs() < 1e-15);
        assert_eq!(s.left_limit(0)[0], 0.5);
        assert!((s.jump(0)[0] + 0.25).abs() < 1e-15);
        assert!((s.jump(1)[0] - 1.5).abs() < 1e-15);
        assert!((s.eval(0, 0.5)[0] - 0.25).abs() < 1e-15);
        assert!((s.eval_derivative(0, 0.3)[0] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn checkpoint_round_trip() {
        let s = sample();
        let mut buf = Vec::new();
        s.write_checkpoint(&mut buf).unwrap();
        let back = DiscreteSolution::read_checkpoint(buf.as_slice(), &RuleCache::new()).unwrap();
        assert_eq!(back.nodal(0), s.nodal(0));
        assert_eq!(back.nodal(1), s.nodal(1));
        assert_eq!(back.x0(), s.x0());
        assert_eq!(back.variant(), s.variant());
        assert!(DiscreteSolution::read_checkpoint("# q=1\n".as_bytes(), &RuleCache::new()).is_err());
    }
}
