//! Dense complex linear algebra kernels used across the crate.
//!
//! Matrices here are small (tens of rows/columns), so everything is built on
//! one robust primitive: a one-sided Jacobi SVD for complex matrices. Rank
//! analysis, pseudo-inverses and minimum-norm least squares all derive from
//! it, which keeps the numerics in a single well-tested place.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CVec = Array1<Complex64>;
pub type CMat = Array2<Complex64>;

/// `exp(j * theta)`.
#[inline]
pub fn cis(theta: f64) -> Complex64 {
    Complex64::new(theta.cos(), theta.sin())
}

/// Conjugate transpose.
pub fn hermitian(a: &CMat) -> CMat {
    a.t().mapv(|z| z.conj())
}

/// Frobenius norm.
pub fn fro_norm(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Inner product `<a, b> = sum conj(a_i) b_i`.
pub fn inner(a: &CVec, b: &CVec) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn ensure_finite_vec(v: &CVec, context: &'static str) -> Result<()> {
    if v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { context })
    }
}

pub fn ensure_finite_mat(a: &CMat, context: &'static str) -> Result<()> {
    if a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { context })
    }
}

/// Thin singular value decomposition `A = U diag(sigma) V^H`.
///
/// `u` is m x k, `v` is n x k with k = min(m, n); `sigma` is sorted
/// descending. Columns of `u` belonging to zero singular values are zero.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMat,
    pub sigma: Vec<f64>,
    pub v: CMat,
}

impl Svd {
    /// Largest singular value (0 for an empty or zero matrix).
    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values above `rcond * sigma_max`.
    pub fn rank(&self, rcond: f64) -> usize {
        let cutoff = rcond * self.sigma_max();
        self.sigma.iter().filter(|&&s| s > cutoff).count()
    }
}

/// Default relative cutoff for rank decisions, LAPACK-style.
pub fn default_rcond(m: usize, n: usize) -> f64 {
    m.max(n) as f64 * f64::EPSILON
}

/// One-sided Jacobi SVD. Accurate to machine precision for the small
/// matrices used here; cost is O(m n^2) per sweep.
pub fn svd(a: &CMat) -> Svd {
    let (m, n) = a.dim();
    if m < n {
        // Factor the conjugate transpose and swap the roles of U and V.
        let t = svd(&hermitian(a));
        return Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        };
    }

    let mut g = a.clone(); // columns converge to U * Sigma
    let mut v = CMat::eye(n);

    let tol = 1e-14;
    let max_sweeps = 64;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let gp = g.column(p);
                let gq = g.column(q);
                let app: f64 = gp.iter().map(|z| z.norm_sqr()).sum();
                let aqq: f64 = gq.iter().map(|z| z.norm_sqr()).sum();
                let apq: Complex64 = gp.iter().zip(gq.iter()).map(|(x, y)| x.conj() * y).sum();
                let off = apq.norm();
                if off <= tol * (app * aqq).sqrt() || off == 0.0 {
                    continue;
                }
                rotated = true;

                // Unitary 2x2 rotation diagonalizing [[app, apq], [apq*, aqq]].
                let phase = apq / off;
                let tau = (aqq - app) / (2.0 * off);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;

                for i in 0..m {
                    let gip = g[(i, p)];
                    let giq = g[(i, q)];
                    g[(i, p)] = cs * gip - sn * phase.conj() * giq;
                    g[(i, q)] = sn * phase * gip + cs * giq;
                }
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = cs * vip - sn * phase.conj() * viq;
                    v[(i, q)] = sn * phase * vip + cs * viq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    // Column norms are the singular values; sort descending.
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n)
        .map(|j| g.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let mut u = CMat::zeros((m, n));
    let mut vv = CMat::zeros((n, n));
    let mut sigma = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        let s = norms[src];
        sigma.push(s);
        if s > 0.0 {
            for i in 0..m {
                u[(i, dst)] = g[(i, src)] / s;
            }
        }
        for i in 0..n {
            vv[(i, dst)] = v[(i, src)];
        }
    }

    Svd { u, sigma, v: vv }
}

/// Singular values of `a`, descending.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    svd(a).sigma
}

/// Solution of `a x = b` in the least-squares sense, picking the minimum-norm
/// solution when the system is under-determined. Returns the solution and the
/// numerical rank used.
pub fn min_norm_solve(a: &CMat, b: &CVec, rcond: f64) -> Result<(CVec, usize)> {
    let (m, n) = a.dim();
    if b.len() != m {
        return Err(Error::DimensionMismatch {
            context: "min_norm_solve right-hand side",
            expected: m,
            got: b.len(),
        });
    }
    let dec = svd(a);
    let rank = dec.rank(rcond);
    let mut x = CVec::zeros(n);
    for k in 0..rank {
        let uk = dec.u.column(k);
        let coeff: Complex64 = uk
            .iter()
            .zip(b.iter())
            .map(|(u, y)| u.conj() * y)
            .sum::<Complex64>()
            / dec.sigma[k];
        for i in 0..n {
            x[i] += coeff * dec.v[(i, k)];
        }
    }
    Ok((x, rank))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_mat(rng: &mut ChaCha8Rng, m: usize, n: usize) -> CMat {
        CMat::from_shape_fn((m, n), |_| {
            c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        })
    }

    fn reconstruct(dec: &Svd) -> CMat {
        let (m, k) = dec.u.dim();
        let n = dec.v.nrows();
        let mut out = CMat::zeros((m, n));
        for t in 0..k {
            for i in 0..m {
                for j in 0..n {
                    out[(i, j)] += dec.u[(i, t)] * dec.sigma[t] * dec.v[(j, t)].conj();
                }
            }
        }
        out
    }

    #[test]
    fn svd_diagonal_real() {
        let a = array![[c(3.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(5.0, 0.0)],];
        let s = singular_values(&a);
        assert!((s[0] - 5.0).abs() < 1e-12);
        assert!((s[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn svd_rank_one_outer_product() {
        let u = array![c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)];
        let v = array![c(0.5, 0.5), c(1.0, -1.0)];
        let mut a = CMat::zeros((3, 2));
        for i in 0..3 {
            for j in 0..2 {
                a[(i, j)] = u[i] * v[j];
            }
        }
        let s = singular_values(&a);
        let expected = vec_norm(&u) * vec_norm(&v);
        assert!((s[0] - expected).abs() < 1e-12 * expected);
        assert!(s[1] < 1e-13 * expected);
    }

    #[test]
    fn svd_reconstructs_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(m, n) in &[(4usize, 4usize), (6, 3), (3, 6), (9, 9), (16, 5)] {
            let a = random_mat(&mut rng, m, n);
            let dec = svd(&a);
            let diff = &a - &reconstruct(&dec);
            assert!(
                fro_norm(&diff) < 1e-12 * fro_norm(&a).max(1.0),
                "reconstruction failed for {}x{}",
                m,
                n
            );
        }
    }

    #[test]
    fn svd_factors_are_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_mat(&mut rng, 8, 5);
        let dec = svd(&a);
        let utu = hermitian(&dec.u).dot(&dec.u);
        let vtv = hermitian(&dec.v).dot(&dec.v);
        for i in 0..5 {
            for j in 0..5 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((utu[(i, j)] - expect).norm() < 1e-12);
                assert!((vtv[(i, j)] - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn min_norm_solve_square_system() {
        let a = array![[c(2.0, 0.0), c(0.0, 1.0)], [c(0.0, -1.0), c(1.0, 0.0)],];
        let x_true = array![c(1.0, 1.0), c(-0.5, 2.0)];
        let b = a.dot(&x_true);
        let (x, rank) = min_norm_solve(&a, &b, default_rcond(2, 2)).unwrap();
        assert_eq!(rank, 2);
        for i in 0..2 {
            assert!((x[i] - x_true[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn min_norm_solve_underdetermined_picks_smallest() {
        // One equation, three unknowns: x must be along the conjugate row.
        let a = array![[c(1.0, 0.0), c(0.0, 1.0), c(1.0, -1.0)]];
        let b = array![c(2.0, 0.0)];
        let (x, rank) = min_norm_solve(&a, &b, 1e-12).unwrap();
        assert_eq!(rank, 1);
        let ax: Complex64 = a.row(0).iter().zip(x.iter()).map(|(r, v)| r * v).sum();
        assert!((ax - b[0]).norm() < 1e-12);
        // Minimum-norm solutions live in the conjugated row space.
        let dir: CVec =
            array![c(1.0, 0.0), c(0.0, 1.0), c(1.0, -1.0)].mapv(|z: Complex64| z.conj());
        let proj = inner(&dir, &x) / inner(&dir, &dir);
        for i in 0..3 {
            assert!((x[i] - proj * dir[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn min_norm_solve_overdetermined_residual_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let a = random_mat(&mut rng, 7, 3);
        let b = CVec::from_shape_fn(7, |_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
        let (x, _) = min_norm_solve(&a, &b, default_rcond(7, 3)).unwrap();
        let r = &b - &a.dot(&x);
        // Least-squares residual is orthogonal to the column space.
        let atr = hermitian(&a).dot(&r);
        for z in atr.iter() {
            assert!(z.norm() < 1e-12);
        }
    }

    #[test]
    fn zero_matrix_has_zero_singular_values() {
        let a = CMat::zeros((3, 2));
        let s = singular_values(&a);
        assert!(s.iter().all(|&x| x == 0.0));
        assert_eq!(svd(&a).rank(1e-12), 0);
    }
}
