//! The derivation algebra of a 2-step algebra, computed as the nullspace of
//! the Leibniz system, together with its block splitting and the structural
//! checks (minimality, ideal and triangularity properties) built on it.
//!
//! Every 2-step algebra of type `(p,q)` carries the diagonal derivation
//! `D = diag(I_v, 2 I_z)` and the `pq`-dimensional abelian ideal of maps
//! `v -> z` vanishing on `z`, so `dim Der >= 1 + pq` always. The algebra is
//! called minimal when equality holds and the block-diagonal part is exactly
//! the line through `D`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::algebra::TwoStepAlgebra;
use crate::error::Result;
use crate::kernel::{self, SubspaceBasis};
use crate::mat::{vecops, Mat};
use crate::scalar::{Real, Scalar};

#[derive(Debug, Clone)]
pub struct DerivationBasis<T: Scalar> {
    p: usize,
    q: usize,
    /// Basis of `Der(n)` in `n^2`-space (row-major matrices).
    pub basis: SubspaceBasis<T>,
    /// Span of the strictly-lower `v -> z` components of the basis.
    pub vz_part: SubspaceBasis<T>,
    /// Span of the `gl(v) + gl(z)` block-diagonal components.
    pub blockdiag_part: SubspaceBasis<T>,
    /// Whether the graded splitting was verified: the `z -> v` block of
    /// every basis vector vanishes and both components of every basis
    /// vector pass the Leibniz test on their own. Holds for genuine
    /// type-`(p,q)` algebras; degenerate structure tensors may fail it.
    pub split_graded: bool,
    /// Verdict of [`is_minimal_der`], cached at construction.
    pub minimal: bool,
    pub max_leibniz_residual: f64,
}

impl<T: Scalar> DerivationBasis<T> {
    pub fn dim(&self) -> usize {
        self.basis.rank()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.p + self.q
    }

    /// Basis vectors reshaped to `n x n` matrices.
    pub fn matrices(&self) -> Vec<Mat<T>> {
        let n = self.n();
        self.basis.vectors().iter().map(|v| Mat::from_vec(n, n, v.clone())).collect()
    }
}

/// The diagonal derivation `D = diag(I_q, 2 I_p)` in the adapted basis.
pub fn one_two_derivation<T: Scalar>(p: usize, q: usize) -> Mat<T> {
    let n = p + q;
    let mut d = Mat::<T>::zeros(n, n);
    for i in 0..q {
        d.set(i, i, T::one());
    }
    for i in q..n {
        d.set(i, i, T::from_int(2));
    }
    d
}

/// Elementary `v -> z` map `z_a <- e_i`, always a derivation.
pub fn elementary_vz<T: Scalar>(p: usize, q: usize, a: usize, i: usize) -> Mat<T> {
    let n = p + q;
    let mut m = Mat::<T>::zeros(n, n);
    m.set(q + a, i, T::one());
    m
}

/// Worst Leibniz defect of `e` over all adapted basis pairs:
/// `max_{i<j} | e[b_i,b_j] - [e b_i, b_j] - [b_i, e b_j] |`.
pub fn leibniz_residual<T: Scalar>(a: &TwoStepAlgebra<T>, e: &Mat<T>) -> f64 {
    let n = a.n();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let w = a.bracket_basis(i, j);
            let ew = e.matvec(&w);
            let ei: Vec<T> = (0..n).map(|r| e.at(r, i).clone()).collect();
            let ej: Vec<T> = (0..n).map(|r| e.at(r, j).clone()).collect();
            let bj: Vec<T> = {
                let mut v = vec![T::zero(); n];
                v[j] = T::one();
                v
            };
            let bi: Vec<T> = {
                let mut v = vec![T::zero(); n];
                v[i] = T::one();
                v
            };
            let t1 = a.bracket(&ei, &bj).expect("dims fixed");
            let t2 = a.bracket(&bi, &ej).expect("dims fixed");
            let defect: Vec<T> = (0..n)
                .map(|r| ew[r].clone() - t1[r].clone() - t2[r].clone())
                .collect();
            worst = worst.max(vecops::norm_f64(&defect));
        }
    }
    worst
}

fn leibniz_system<T: Scalar>(a: &TwoStepAlgebra<T>) -> Mat<T> {
    let n = a.n();
    // bracket table for all ordered basis pairs
    let mut bb = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            bb[i][j] = a.bracket_basis(i, j);
        }
    }
    let pair_count = n * (n - 1) / 2;
    let mut rows = Vec::with_capacity(pair_count * n);
    for i in 0..n {
        for j in (i + 1)..n {
            for r in 0..n {
                let mut row = vec![T::zero(); n * n];
                // E [b_i, b_j] contributes E[r][c] * w_c
                for c in 0..n {
                    let w = bb[i][j][c].clone();
                    if !w.is_zero() {
                        row[r * n + c] = row[r * n + c].clone() + w;
                    }
                }
                // -[E b_i, b_j] contributes -E[c][i] * [b_c, b_j]_r
                for c in 0..n {
                    let v = bb[c][j][r].clone();
                    if !v.is_zero() {
                        row[c * n + i] = row[c * n + i].clone() - v;
                    }
                }
                // -[b_i, E b_j] contributes -E[c][j] * [b_i, b_c]_r
                for c in 0..n {
                    let v = bb[i][c][r].clone();
                    if !v.is_zero() {
                        row[c * n + j] = row[c * n + j].clone() - v;
                    }
                }
                rows.push(row);
            }
        }
    }
    Mat::from_rows(rows)
}

fn blockdiag_component<T: Scalar>(e: &Mat<T>, p: usize, q: usize) -> Mat<T> {
    let n = p + q;
    let mut out = Mat::<T>::zeros(n, n);
    out.set_block(0, 0, &e.block(0, 0, q, q));
    out.set_block(q, q, &e.block(q, q, p, p));
    out
}

fn vz_component<T: Scalar>(e: &Mat<T>, p: usize, q: usize) -> Mat<T> {
    let n = p + q;
    let mut out = Mat::<T>::zeros(n, n);
    out.set_block(q, 0, &e.block(q, 0, p, q));
    out
}

/// Computes `Der(n)` as the nullspace of the Leibniz system and splits it
/// into its block-diagonal and `v -> z` parts. The splitting is verified
/// vector by vector rather than assumed.
pub fn derivation_algebra<T: Scalar>(a: &TwoStepAlgebra<T>, tol: f64) -> Result<DerivationBasis<T>> {
    let (p, q) = (a.p(), a.q());
    let n = a.n();
    let sys = leibniz_system(a);
    let basis = kernel::nullspace(&sys, tol);

    let scale = 1.0 + a.structure_norm();
    let split_tol = 1e-9 * scale;
    let mut split_graded = true;
    let mut max_res: f64 = 0.0;
    let mut bd_rows = Vec::new();
    let mut vz_rows = Vec::new();
    for v in basis.vectors() {
        let e = Mat::from_vec(n, n, v.clone());
        max_res = max_res.max(leibniz_residual(a, &e));
        // the z -> v block must vanish for a graded derivation
        let zv = e.block(0, q, q, p);
        if zv.frob() > split_tol {
            split_graded = false;
        }
        let bd = blockdiag_component(&e, p, q);
        let vz = vz_component(&e, p, q);
        if leibniz_residual(a, &bd) > split_tol || leibniz_residual(a, &vz) > split_tol {
            split_graded = false;
        }
        bd_rows.push(bd.vectorize());
        vz_rows.push(vz.vectorize());
    }
    let blockdiag_part = SubspaceBasis::from_spanning(n * n, &bd_rows, tol);
    let vz_part = SubspaceBasis::from_spanning(n * n, &vz_rows, tol);

    let mut out = DerivationBasis {
        p,
        q,
        basis,
        vz_part,
        blockdiag_part,
        split_graded,
        minimal: false,
        max_leibniz_residual: max_res,
    };
    out.minimal = is_minimal_der(&out, tol.max(1e-9));
    Ok(out)
}

/// Minimality: `dim Der = 1 + pq`, the block-diagonal part is exactly the
/// line through `D = diag(I_v, 2 I_z)` and the `v -> z` part is full.
pub fn is_minimal_der<T: Scalar>(d: &DerivationBasis<T>, tol: f64) -> bool {
    let (p, q) = (d.p, d.q);
    let n = d.n();
    if !d.split_graded {
        return false;
    }
    if d.dim() != 1 + p * q || d.vz_part.rank() != p * q || d.blockdiag_part.rank() != 1 {
        return false;
    }
    let d_line = SubspaceBasis::from_spanning(
        n * n,
        &[one_two_derivation::<T>(p, q).vectorize()],
        tol,
    );
    d.blockdiag_part.equal(&d_line, tol).unwrap_or(false)
}

/// Result of the ideal / triangularity structure checks.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdealCheckReport {
    /// `R(D) + Der_{v->z}` is closed under brackets.
    pub subalg_ok: bool,
    /// `[Der(n), R(D) + Der_{v->z}]` lands back in `R(D) + Der_{v->z}`.
    pub ideal_in_der_ok: bool,
    /// For minimal derivation algebras: `[T, Der(n)] <= Der(n)` for random
    /// block-lower-triangular `T` (blocks ordered `v` then `z`). `None` when
    /// the derivation algebra is not minimal, where the property is not
    /// claimed.
    pub ideal_in_borel_ok: Option<bool>,
    pub max_residual: f64,
}

fn commutator<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> Mat<T> {
    a.matmul(b).sub(&b.matmul(a))
}

/// Verifies the bracket structure around `R(D) + Der_{v->z}` by projection
/// residuals, plus (for minimal algebras) the ideal property inside the
/// block-lower-triangular algebra, sampled with `trials` random `T`.
pub fn check_ideal_structure<T: Real>(
    a: &TwoStepAlgebra<T>,
    d: &DerivationBasis<T>,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<IdealCheckReport> {
    let (p, q) = (a.p(), a.q());
    let n = a.n();

    let mut small: Vec<Mat<T>> = vec![one_two_derivation(p, q)];
    for alpha in 0..p {
        for i in 0..q {
            small.push(elementary_vz(p, q, alpha, i));
        }
    }
    let small_rows: Vec<Vec<T>> = small.iter().map(|m| m.vectorize()).collect();
    let small_span = SubspaceBasis::from_spanning(n * n, &small_rows, 1e-12);

    let mut max_residual: f64 = 0.0;
    let mut check_member = |span: &SubspaceBasis<T>, m: &Mat<T>| -> Result<bool> {
        let (_, res) = span.project(&m.vectorize())?;
        max_residual = max_residual.max(res);
        Ok(res <= tol * m.frob().max(1.0))
    };

    let mut subalg_ok = true;
    for x in &small {
        for y in &small {
            if !check_member(&small_span, &commutator(x, y))? {
                subalg_ok = false;
            }
        }
    }

    let der_mats = d.matrices();
    let mut ideal_in_der_ok = true;
    for e in &der_mats {
        for s in &small {
            if !check_member(&small_span, &commutator(e, s))? {
                ideal_in_der_ok = false;
            }
        }
    }

    let ideal_in_borel_ok = if d.minimal {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ok = true;
        for _ in 0..trials {
            // block-lower-triangular in the (v, z) block order
            let t = Mat::from_fn(n, n, |r, c| {
                if r < q && c >= q {
                    T::zero()
                } else {
                    T::from_f64(rng.sample::<f64, _>(StandardNormal))
                }
            });
            for e in &der_mats {
                if !check_member(&d.basis, &commutator(&t, e))? {
                    ok = false;
                }
            }
        }
        Some(ok)
    } else {
        None
    };

    Ok(IdealCheckReport { subalg_ok, ideal_in_der_ok, ideal_in_borel_ok, max_residual })
}
