//! 2D coupled hyperbolic/elliptic problem on `(−1, 1)²` with an `H(div)`
//! flux: hyperbolic for `x < 0`, elliptic for `x > 0`.

use std::f64::consts::FRAC_PI_2;

use crate::evolution::ExactSolution;

#[derive(Debug, Clone, Copy, Default)]
pub struct Example2;

/// Quadrant `(x ≥ 0, y ≥ 0)` of the hint, left-closed.
fn quadrant(hint: [f64; 2]) -> (bool, bool) {
    (hint[0] >= 0.0, hint[1] >= 0.0)
}

/// `a(x)` and `a'(x)`.
fn a(x: f64, right: bool) -> (f64, f64) {
    if right {
        (1.0 - x, -1.0)
    } else {
        ((FRAC_PI_2 * x).cos(), -FRAC_PI_2 * (FRAC_PI_2 * x).sin())
    }
}

/// `b(y) = 1 − |y|` and its derivative.
fn b(y: f64, top: bool) -> (f64, f64) {
    if top {
        (1.0 - y, -1.0)
    } else {
        (1.0 + y, 1.0)
    }
}

/// Spatial profile `w` of the flux and its divergence.
fn w(x: f64, y: f64, q: (bool, bool)) -> ([f64; 2], f64) {
    match q {
        (false, false) => (
            [(FRAC_PI_2 * x).cos() * y, (FRAC_PI_2 * y).sin()],
            -FRAC_PI_2 * (FRAC_PI_2 * x).sin() * y + FRAC_PI_2 * (FRAC_PI_2 * y).cos(),
        ),
        (false, true) => ([x + y, -y * y], 1.0 - 2.0 * y),
        (true, false) => ([x * x + y, 0.0], 2.0 * x),
        (true, true) => ([y * (1.0 + x), 0.0], y),
    }
}

impl Example2 {
    pub fn u(t: f64, x: [f64; 2], hint: [f64; 2]) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        let q = quadrant(hint);
        (t.exp() - 1.0) * a(x[0], q.0).0 * b(x[1], q.1).0
    }

    pub fn v(t: f64, x: [f64; 2], hint: [f64; 2]) -> [f64; 2] {
        if t < 0.0 {
            return [0.0; 2];
        }
        let s = t.exp() - t - 1.0;
        let (p, _) = w(x[0], x[1], quadrant(hint));
        [s * p[0], s * p[1]]
    }

    /// `f = 𝟙_hyp ∂t u + 𝟙_ell u + div v`.
    pub fn f(t: f64, x: [f64; 2], hint: [f64; 2]) -> f64 {
        let q = quadrant(hint);
        let ab = a(x[0], q.0).0 * b(x[1], q.1).0;
        let time = if q.0 { t.exp() - 1.0 } else { t.exp() };
        time * ab + (t.exp() - t - 1.0) * w(x[0], x[1], q).1
    }

    /// `g = 𝟙_hyp ∂t v + 𝟙_ell v + ∇u`.
    pub fn g(t: f64, x: [f64; 2], hint: [f64; 2]) -> [f64; 2] {
        let q = quadrant(hint);
        let ((av, ad), (bv, bd)) = (a(x[0], q.0), b(x[1], q.1));
        let (p, _) = w(x[0], x[1], q);
        let time = if q.0 { t.exp() - t - 1.0 } else { t.exp() - 1.0 };
        let e1 = t.exp() - 1.0;
        [time * p[0] + e1 * ad * bv, time * p[1] + e1 * av * bd]
    }
}

impl ExactSolution for Example2 {
    fn value(&self, component: usize, t: f64, x: [f64; 2], hint: [f64; 2]) -> [f64; 2] {
        match component {
            0 => [Self::u(t, x, hint), 0.0],
            _ => Self::v(t, x, hint),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn point_values_and_boundary() {
        let u = Example2::u(1.0, [-0.5, 0.0], [-0.5, 0.0]);
        assert!((u - 1.2151).abs() < 1e-4, "{u}");
        for s in [-0.9, -0.3, 0.2, 0.8] {
            for p in [[s, -1.0], [s, 1.0], [-1.0, s], [1.0, s]] {
                assert!(Example2::u(0.6, p, p).abs() < 1e-15);
            }
        }
        assert_eq!(Example2::v(0.0, [0.3, 0.3], [0.3, 0.3]), [0.0; 2]);
    }

    #[test]
    fn normal_component_is_continuous() {
        let x = [0.0, -0.5];
        let from_left = Example2::v(1.0, x, [-0.1, -0.5])[0];
        let from_right = Example2::v(1.0, x, [0.1, -0.5])[0];
        let s = 1f64.exp() - 2.0;
        assert!((from_left + 0.5 * s).abs() < 1e-15 && (from_right + 0.5 * s).abs() < 1e-15);
        for r in [-0.9, -0.4, 0.3, 0.7] {
            let p = [0.0, r];
            assert!((Example2::v(1.0, p, [-0.1, r])[0] - Example2::v(1.0, p, [0.1, r])[0]).abs() < 1e-15);
            let p = [r, 0.0];
            assert!((Example2::v(1.0, p, [r, -0.1])[1] - Example2::v(1.0, p, [r, 0.1])[1]).abs() < 1e-15);
        }
    }

    fn interior(x: f64) -> bool {
        x.abs() > 1e-3 && (x.abs() - 1.0).abs() > 1e-3
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn residual_matches_rhs(t in 0.01f64..1.5, x in -0.999f64..0.999, y in -0.999f64..0.999) {
            prop_assume!(interior(x) && interior(y));
            let p = [x, y];
            let h = 1e-5;
            let at = |dx: f64, dy: f64| [x + dx, y + dy];
            let du_dt = (Example2::u(t + h, p, p) - Example2::u(t - h, p, p)) / (2.0 * h);
            let dv_dt = {
                let (a, b) = (Example2::v(t + h, p, p), Example2::v(t - h, p, p));
                [(a[0] - b[0]) / (2.0 * h), (a[1] - b[1]) / (2.0 * h)]
            };
            let div = (Example2::v(t, at(h, 0.0), p)[0] - Example2::v(t, at(-h, 0.0), p)[0]
                + Example2::v(t, at(0.0, h), p)[1] - Example2::v(t, at(0.0, -h), p)[1]) / (2.0 * h);
            let grad = [
                (Example2::u(t, at(h, 0.0), p) - Example2::u(t, at(-h, 0.0), p)) / (2.0 * h),
                (Example2::u(t, at(0.0, h), p) - Example2::u(t, at(0.0, -h), p)) / (2.0 * h),
            ];
            let (hyp, ell) = if x < 0.0 { (1.0, 0.0) } else { (0.0, 1.0) };
            let f = hyp * du_dt + ell * Example2::u(t, p, p) + div;
            let v = Example2::v(t, p, p);
            let g = [hyp * dv_dt[0] + ell * v[0] + grad[0], hyp * dv_dt[1] + ell * v[1] + grad[1]];
            let tol = |a: f64| 1e-6 * a.abs().max(1.0);
            prop_assert!((f - Example2::f(t, p, p)).abs() < tol(f));
            let ge = Example2::g(t, p, p);
            prop_assert!((g[0] - ge[0]).abs() < tol(g[0]) && (g[1] - ge[1]).abs() < tol(g[1]));
        }
    }
}
