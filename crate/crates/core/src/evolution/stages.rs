//! Stage-decoupled slab solver for two-field systems.
//!
//! Dividing slab row `i` by `W_i` turns the slab system into
//! `(B ⊗ M0 + I ⊗ L) U = R̃` with the small matrix `B = W⁻¹K`. A real
//! eigen-decomposition `B = V Λ V⁻¹` (`Λ` with `1×1` blocks `a` and `2×2`
//! blocks `[[a, b], [−b, a]]`) splits it into independent systems
//! `(aM0 + L) y = z` and
//!
//! ```text
//! [ aM0 + L    bM0   ] [y1]   [z1]
//! [ −bM0     aM0 + L ] [y2] = [z2].
//! ```
//!
//! When the unknowns split into two classes such that `A` only couples
//! across them while `M0`, `M1` never do (e.g. `u` and the flux `v`), negating
//! the rows of one class makes each of these systems symmetric
//! quasi-definite. Those factor by sparse `LDLᵀ` under any symmetric
//! ordering, so AMD can be used; this needs far less memory than a pivoted
//! LU of the coupled system.

use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::cholesky::ldlt::factor::LdltRegularization;
use faer::sparse::linalg::cholesky::{factorize_symbolic_cholesky, LdltRef, SymbolicCholesky, SymmetricOrdering};
use faer::sparse::{SparseColMat, Triplet};
use faer::{Conj, Mat, Par, Side};
use nalgebra::DMatrix;

use crate::fem::CsrMatrix;

/// Two-colouring of the unknowns: `A` edges join different classes, `M0` and
/// `M1` edges equal ones. `None` if no such colouring exists.
pub fn field_classes(m0: &CsrMatrix, m1: &CsrMatrix, a: &CsrMatrix) -> Option<Vec<bool>> {
    let n = m0.nrows();
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
    for (mat, flip) in [(m0, false), (m1, false), (a, true)] {
        for (r, c, v) in mat.triplets() {
            if v == 0.0 {
                continue;
            }
            if r == c {
                if flip {
                    return None;
                }
                continue;
            }
            adj[r].push((c, flip));
            adj[c].push((r, flip));
        }
    }
    let mut colour: Vec<Option<bool>> = vec![None; n];
    let mut stack = Vec::new();
    for root in 0..n {
        if colour[root].is_some() {
            continue;
        }
        colour[root] = Some(false);
        stack.push(root);
        while let Some(r) = stack.pop() {
            let cr = colour[r].unwrap();
            for &(c, flip) in &adj[r] {
                let want = cr ^ flip;
                match colour[c] {
                    None => {
                        colour[c] = Some(want);
                        stack.push(c);
                    }
                    Some(have) if have != want => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(colour.into_iter().map(Option::unwrap).collect())
}

/// Refinement steps after each split solve.
const REFINEMENT_STEPS: usize = 2;

/// One diagonal block of `Λ`.
#[derive(Debug, Clone, Copy)]
enum StageBlock {
    Real { col: usize, a: f64 },
    Pair { col: usize, a: f64, b: f64 },
}

/// Real block diagonalization of `B`, or `None` if `B` is defective, badly
/// conditioned or has an eigenvalue with non-positive real part.
fn real_block_form(b: &DMatrix<f64>) -> Option<(DMatrix<f64>, DMatrix<f64>, Vec<StageBlock>)> {
    let n = b.nrows();
    let m = Mat::<f64>::from_fn(n, n, |i, j| b[(i, j)]);
    let evd = m.eigen().ok()?;
    let (u, s) = (evd.U(), evd.S().column_vector());
    let scale = (0..n).map(|i| s[i].norm()).fold(0.0, f64::max);
    let mut v = DMatrix::zeros(n, n);
    let mut blocks = Vec::new();
    let mut col = 0;
    for k in 0..n {
        let lam = s[k];
        if lam.re <= 0.0 {
            return None;
        }
        if lam.im.abs() <= 1e-12 * scale {
            for i in 0..n {
                v[(i, col)] = u[(i, k)].re;
            }
            blocks.push(StageBlock::Real { col, a: lam.re });
            col += 1;
        } else if lam.im > 0.0 {
            for i in 0..n {
                v[(i, col)] = u[(i, k)].re;
                v[(i, col + 1)] = u[(i, k)].im;
            }
            blocks.push(StageBlock::Pair { col, a: lam.re, b: lam.im });
            col += 2;
        }
    }
    if col != n {
        return None;
    }
    let vinv = v.clone().try_inverse()?;
    let cond = v.norm() * vinv.norm();
    if !cond.is_finite() || cond > 1e6 {
        return None;
    }
    Some((v, vinv, blocks))
}

/// `LDLᵀ` factor of one sign-flipped stage block.
struct StageFactor {
    block: StageBlock,
    symbolic: SymbolicCholesky<usize>,
    values: Vec<f64>,
    /// Row signs applied before the symmetric solve.
    signs: Vec<f64>,
}

/// Factorized stage-decoupled slab operator.
pub struct SplitSlab {
    n: usize,
    /// `W_i`, the mapped weights the rows were divided by.
    weights: Vec<f64>,
    /// Unsplit operator parts, for residuals during refinement.
    k: DMatrix<f64>,
    m0: CsrMatrix,
    l: CsrMatrix,
    v: DMatrix<f64>,
    vinv: DMatrix<f64>,
    factors: Vec<StageFactor>,
}

impl std::fmt::Debug for SplitSlab {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SplitSlab").field("n", &self.n).field("stages", &self.weights.len()).finish_non_exhaustive()
    }
}

fn factor_block(
    block: StageBlock,
    m0: &CsrMatrix,
    l: &CsrMatrix,
    classes: &[bool],
) -> Option<StageFactor> {
    let n = m0.nrows();
    let (copies, a, b) = match block {
        StageBlock::Real { a, .. } => (1, a, 0.0),
        StageBlock::Pair { a, b, .. } => (2, a, b),
    };
    let size = copies * n;
    let signs: Vec<f64> = (0..size)
        .map(|g| {
            let (copy, r) = (g / n, g % n);
            if classes[r] ^ (copy == 1) {
                -1.0
            } else {
                1.0
            }
        })
        .collect();
    let mut trip = Vec::with_capacity(copies * (m0.nnz() + l.nnz()) + (copies - 1) * 2 * m0.nnz());
    let mut lower = |r: usize, c: usize, v: f64| {
        if r >= c {
            trip.push(Triplet::new(r, c, signs[r] * v));
        }
    };
    for copy in 0..copies {
        let o = copy * n;
        for (r, c, v) in m0.triplets() {
            lower(o + r, o + c, a * v);
        }
        for (r, c, v) in l.triplets() {
            lower(o + r, o + c, v);
        }
    }
    if copies == 2 {
        for (r, c, v) in m0.triplets() {
            lower(r, n + c, b * v);
            lower(n + r, c, -b * v);
        }
    }
    let mat = SparseColMat::<usize, f64>::try_new_from_triplets(size, size, &trip).ok()?;
    let symbolic =
        factorize_symbolic_cholesky(mat.symbolic(), Side::Lower, SymmetricOrdering::Amd, Default::default()).ok()?;
    let mut values = vec![0.0; symbolic.len_val()];
    let mut mem = MemBuffer::try_new(symbolic.factorize_numeric_ldlt_scratch::<f64>(Par::Seq, Default::default())).ok()?;
    symbolic
        .factorize_numeric_ldlt(
            &mut values,
            mat.as_ref(),
            Side::Lower,
            LdltRegularization::default(),
            Par::Seq,
            MemStack::new(&mut mem),
            Default::default(),
        )
        .ok()?;
    if values.iter().any(|v| !v.is_finite()) {
        return None;
    }
    Some(StageFactor { block, symbolic, values, signs })
}

impl SplitSlab {
    /// `k` is the unit-interval matrix `K`, `weights` the mapped `W_i`.
    /// `None` when the splitting does not apply; callers fall back to LU.
    pub fn factorize(
        k: &DMatrix<f64>,
        weights: &[f64],
        m0: &CsrMatrix,
        l: &CsrMatrix,
        classes: &[bool],
    ) -> Option<Self> {
        let q1 = weights.len();
        let b = DMatrix::from_fn(q1, q1, |i, j| k[(i, j)] / weights[i]);
        let (v, vinv, blocks) = real_block_form(&b)?;
        let factors = blocks.into_iter().map(|blk| factor_block(blk, m0, l, classes)).collect::<Option<Vec<_>>>()?;
        Some(Self { n: m0.nrows(), weights: weights.to_vec(), k: k.clone(), m0: m0.clone(), l: l.clone(), v, vinv, factors })
    }

    /// Solves `(K ⊗ M0 + W ⊗ L) U = R` for the stacked right-hand side `R`.
    ///
    /// The change of basis by `V` is not backward stable, so each solve is
    /// followed by steps of iterative refinement against the unsplit operator.
    pub fn solve(&self, rhs: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let mut u = self.solve_split(rhs);
        for _ in 0..REFINEMENT_STEPS {
            let r = self.residual(rhs, &u);
            let du = self.solve_split(&r);
            for (ui, di) in u.iter_mut().zip(&du) {
                ui.iter_mut().zip(di).for_each(|(a, b)| *a += b);
            }
        }
        u
    }

    /// `R − (K ⊗ M0 + W ⊗ L) U`.
    fn residual(&self, rhs: &[Vec<f64>], u: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let m0u: Vec<Vec<f64>> = u.iter().map(|x| self.m0.mul_vec(x)).collect();
        rhs.iter()
            .enumerate()
            .map(|(i, ri)| {
                let mut r = ri.clone();
                let lu = self.l.mul_vec(&u[i]);
                r.iter_mut().zip(&lu).for_each(|(a, b)| *a -= self.weights[i] * b);
                for (j, mj) in m0u.iter().enumerate() {
                    let c = self.k[(i, j)];
                    if c != 0.0 {
                        r.iter_mut().zip(mj).for_each(|(a, b)| *a -= c * b);
                    }
                }
                r
            })
            .collect()
    }

    fn solve_split(&self, rhs: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let (n, q1) = (self.n, self.weights.len());
        // z = (V⁻¹ ⊗ I) W⁻¹ R
        let mut z = vec![vec![0.0; n]; q1];
        for (i, zi) in z.iter_mut().enumerate() {
            for (j, rj) in rhs.iter().enumerate() {
                let c = self.vinv[(i, j)] / self.weights[j];
                if c != 0.0 {
                    zi.iter_mut().zip(rj).for_each(|(a, b)| *a += c * b);
                }
            }
        }
        let mut y = vec![Vec::new(); q1];
        for f in &self.factors {
            let (col, copies) = match f.block {
                StageBlock::Real { col, .. } => (col, 1),
                StageBlock::Pair { col, .. } => (col, 2),
            };
            let size = copies * n;
            let mut x = Mat::<f64>::from_fn(size, 1, |g, _| f.signs[g] * z[col + g / n][g % n]);
            let mut mem = MemBuffer::new(f.symbolic.solve_in_place_scratch::<f64>(1, Par::Seq));
            LdltRef::new(&f.symbolic, &f.values).solve_in_place_with_conj(
                Conj::No,
                x.as_mut(),
                Par::Seq,
                MemStack::new(&mut mem),
            );
            for c in 0..copies {
                y[col + c] = (0..n).map(|r| x[(c * n + r, 0)]).collect();
            }
        }
        // U = (V ⊗ I) y
        (0..q1)
            .map(|i| {
                let mut u = vec![0.0; n];
                for (j, yj) in y.iter().enumerate() {
                    let c = self.v[(i, j)];
                    if c != 0.0 {
                        u.iter_mut().zip(yj).for_each(|(a, b)| *a += c * b);
                    }
                }
                u
            })
            .collect()
    }
}
