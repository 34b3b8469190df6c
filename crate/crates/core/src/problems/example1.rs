//! 1D coupled hyperbolic/parabolic problem on `(−3π/2, 3π/2)`: hyperbolic
//! for `x < 0`, parabolic for `x > 0`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::evolution::ExactSolution;

/// Smooth pieces in `x`, left-closed: `[−3π/2, 0)`, `[0, π/2)`, `[π/2, π)`, `[π, 3π/2]`.
fn piece(x: f64) -> usize {
    if x < 0.0 {
        0
    } else if x < FRAC_PI_2 {
        1
    } else if x < PI {
        2
    } else {
        3
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Example1;

impl Example1 {
    pub const LEFT: f64 = -1.5 * PI;
    pub const RIGHT: f64 = 1.5 * PI;

    pub fn u(t: f64, x: f64, hint: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        let sign = if piece(hint) < 2 { -1.0 } else { 1.0 };
        sign * (t.exp() - 1.0) * x.cos()
    }

    pub fn v(t: f64, x: f64, hint: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        match piece(hint) {
            0 => -(t.exp() - t - 1.0) * x.sin(),
            1 | 2 => x,
            _ => 2.0 * PI - x,
        }
    }

    /// `f = ∂t u + ∂x v`.
    pub fn f(t: f64, x: f64, hint: f64) -> f64 {
        let (et, c) = (t.exp(), x.cos());
        match piece(hint) {
            0 => -et * c - (et - t - 1.0) * c,
            1 => -et * c + 1.0,
            2 => et * c + 1.0,
            _ => et * c - 1.0,
        }
    }

    /// `g = 𝟙_hyp ∂t v + 𝟙_par v + ∂x u`.
    pub fn g(t: f64, x: f64, hint: f64) -> f64 {
        let (e1, s) = (t.exp() - 1.0, x.sin());
        match piece(hint) {
            0 => 0.0,
            1 => x + e1 * s,
            2 => x - e1 * s,
            _ => 2.0 * PI - x - e1 * s,
        }
    }
}

impl ExactSolution for Example1 {
    fn value(&self, component: usize, t: f64, x: [f64; 2], hint: [f64; 2]) -> [f64; 2] {
        match component {
            0 => [Self::u(t, x[0], hint[0]), 0.0],
            _ => [Self::v(t, x[0], hint[0]), 0.0],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const E1: f64 = std::f64::consts::E - 1.0;

    #[test]
    fn point_values() {
        // cos π = −1 on the positive branch
        assert!((Example1::u(1.0, PI, PI) + E1).abs() < 1e-14);
        assert!((Example1::v(1.0, FRAC_PI_2, FRAC_PI_2) - FRAC_PI_2).abs() < 1e-15);
        for x in [-4.0, -1.0, 0.5, 2.0, 4.0] {
            assert_eq!(Example1::u(0.0, x, x), 0.0);
        }
        assert!(Example1::u(0.7, Example1::LEFT, Example1::LEFT).abs() < 1e-15);
        assert!(Example1::u(0.7, Example1::RIGHT, Example1::RIGHT).abs() < 1e-15);
    }

    #[test]
    fn continuous_across_pieces() {
        for b in [0.0, FRAC_PI_2, PI] {
            let (l, r) = (b - 1e-9, b);
            for t in [0.2, 1.0] {
                assert!((Example1::u(t, b, l) - Example1::u(t, b, r)).abs() < 1e-14);
                assert!((Example1::v(t, b, l) - Example1::v(t, b, r)).abs() < 1e-14);
            }
        }
    }

    fn interior(x: f64) -> bool {
        [Example1::LEFT, 0.0, FRAC_PI_2, PI, Example1::RIGHT].iter().all(|b| (x - b).abs() > 1e-3)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn residual_matches_rhs(t in 0.01f64..1.5, x in -4.71f64..4.71) {
            prop_assume!(interior(x));
            let h = 1e-5;
            let dt = |w: fn(f64, f64, f64) -> f64| (w(t + h, x, x) - w(t - h, x, x)) / (2.0 * h);
            let dx = |w: fn(f64, f64, f64) -> f64| (w(t, x + h, x) - w(t, x - h, x)) / (2.0 * h);
            let f = dt(Example1::u) + dx(Example1::v);
            let (hyp, par) = if x < 0.0 { (1.0, 0.0) } else { (0.0, 1.0) };
            let g = hyp * dt(Example1::v) + par * Example1::v(t, x, x) + dx(Example1::u);
            let tol = |a: f64| 1e-6 * a.abs().max(1.0);
            prop_assert!((f - Example1::f(t, x, x)).abs() < tol(f));
            prop_assert!((g - Example1::g(t, x, x)).abs() < tol(g));
        }
    }
}
