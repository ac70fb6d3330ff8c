//! Dense symmetric eigenvalues and the discretized Schmidt decomposition.
//!
//! Singular values of the sampled kernel are obtained from the eigenvalues of
//! its Gram matrix on the smaller side (Householder tridiagonalization
//! followed by implicit-shift QL, values only). Everything is deterministic:
//! no pivoting heuristics depend on memory layout or threading.

use super::NumericsError;
use num_complex::Complex64;
use rayon::prelude::*;

/// Schmidt probabilities and the Schmidt number of a discretized kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum {
    /// Normalized probabilities `lambda_n = sigma_n^2 dx dy / sum`, sorted
    /// non-increasing; they sum to 1.
    pub probabilities: Vec<f64>,
    /// Schmidt number `K = 1 / sum lambda_n^2`.
    pub k: f64,
}

/// Eigenvalues of a dense symmetric matrix (row-major, destroyed), sorted
/// descending.
pub fn symmetric_eigenvalues(a: &mut [f64], n: usize) -> Result<Vec<f64>, NumericsError> {
    if a.len() != n * n {
        return Err(NumericsError::InvalidInput("matrix buffer size mismatch"));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let (mut d, mut e) = tridiagonalize(a, n);
    ql_implicit(&mut d, &mut e)?;
    d.sort_by(|x, y| y.partial_cmp(x).unwrap());
    Ok(d)
}

/// Householder reduction to tridiagonal form, values only (EISPACK tred1
/// lineage). Returns (diagonal, subdiagonal with e[0] = 0).
fn tridiagonalize(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += a[i * n + k].abs();
            }
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let mut f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                f = 0.0;
                for j in 0..=l {
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j * n + k] * a[i * n + k];
                    }
                    for k in (j + 1)..=l {
                        g += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    f += e[j] * a[i * n + j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let fj = a[i * n + j];
                    let gj = e[j] - hh * fj;
                    e[j] = gj;
                    for k in 0..=j {
                        a[j * n + k] -= fj * e[k] + gj * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        let _ = h;
    }
    let d = (0..n).map(|k| a[k * n + k]).collect();
    (d, e)
}

/// Implicit-shift QL on a symmetric tridiagonal matrix, values only.
fn ql_implicit(d: &mut [f64], e: &mut [f64]) -> Result<(), NumericsError> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(NumericsError::NonConvergence {
                    intervals: iter,
                    error: e[l].abs(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                f = (d[i] - g) * s + 2.0 * c * b;
                p = s * f;
                d[i + 1] = g + p;
                g = c * f - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Gram matrix over the smaller side of a real row-major `m x n` kernel.
fn gram_real(values: &[f64], m: usize, n: usize) -> (Vec<f64>, usize) {
    let (rows_outer, transpose) = if m <= n { (m, false) } else { (n, true) };
    let mut g = vec![0.0; rows_outer * rows_outer];
    let chunks: Vec<(usize, Vec<f64>)> = (0..rows_outer)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![0.0; rows_outer];
            for j in i..rows_outer {
                let mut acc = 0.0;
                if !transpose {
                    let (ri, rj) = (&values[i * n..(i + 1) * n], &values[j * n..(j + 1) * n]);
                    for k in 0..n {
                        acc += ri[k] * rj[k];
                    }
                } else {
                    for k in 0..m {
                        acc += values[k * n + i] * values[k * n + j];
                    }
                }
                row[j] = acc;
            }
            (i, row)
        })
        .collect();
    for (i, row) in chunks {
        for j in i..rows_outer {
            g[i * rows_outer + j] = row[j];
            g[j * rows_outer + i] = row[j];
        }
    }
    (g, rows_outer)
}

/// Hermitian Gram of a complex kernel, embedded as the real symmetric
/// matrix [[X, -Y], [Y, X]] whose spectrum is that of the Gram, doubled.
fn gram_complex_embedded(values: &[Complex64], m: usize, n: usize) -> (Vec<f64>, usize) {
    let (rows_outer, transpose) = if m <= n { (m, false) } else { (n, true) };
    let s = rows_outer;
    let mut g = vec![0.0; 4 * s * s];
    for i in 0..s {
        for j in 0..s {
            let mut acc = Complex64::new(0.0, 0.0);
            if !transpose {
                for k in 0..n {
                    acc += values[i * n + k] * values[j * n + k].conj();
                }
            } else {
                for k in 0..m {
                    acc += values[k * n + i].conj() * values[k * n + j];
                }
            }
            g[i * 2 * s + j] = acc.re;
            g[(i + s) * 2 * s + (j + s)] = acc.re;
            g[i * 2 * s + (j + s)] = -acc.im;
            g[(i + s) * 2 * s + j] = acc.im;
        }
    }
    (g, 2 * s)
}

/// Schmidt spectrum of a discretized two-variable kernel.
///
/// `values` is row-major `nrows x ncols` with grid steps `dx` (first index)
/// and `dy` (second). Probabilities are cell-area weighted so the Schmidt
/// number converges under grid refinement.
pub fn svd_schmidt(
    values: &[Complex64],
    nrows: usize,
    ncols: usize,
    dx: f64,
    dy: f64,
) -> Result<SchmidtSpectrum, NumericsError> {
    if values.len() != nrows * ncols || nrows == 0 || ncols == 0 {
        return Err(NumericsError::InvalidInput("kernel dimensions mismatch"));
    }
    if !(dx > 0.0 && dy > 0.0) {
        return Err(NumericsError::InvalidInput("grid steps must be positive"));
    }
    if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(NumericsError::InvalidInput("kernel has non-finite entries"));
    }
    let peak = values.iter().map(|v| v.norm_sqr()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(NumericsError::ZeroKernel);
    }

    let real_only = values.iter().all(|v| v.im == 0.0);
    let (eigs, doubled) = if real_only {
        let reals: Vec<f64> = values.iter().map(|v| v.re).collect();
        let (mut g, s) = gram_real(&reals, nrows, ncols);
        (symmetric_eigenvalues(&mut g, s)?, false)
    } else {
        let (mut g, s) = gram_complex_embedded(values, nrows, ncols);
        (symmetric_eigenvalues(&mut g, s)?, true)
    };
    // Eigenvalues of the Gram are sigma^2; embedding doubles each.
    let mut sig2: Vec<f64> = if doubled {
        eigs.iter().step_by(2).map(|&x| x.max(0.0)).collect()
    } else {
        eigs.iter().map(|&x| x.max(0.0)).collect()
    };
    sig2.sort_by(|x, y| y.partial_cmp(x).unwrap());

    let cell = dx * dy;
    let total: f64 = sig2.iter().map(|s| s * cell).sum();
    if total <= 0.0 {
        return Err(NumericsError::ZeroKernel);
    }
    let probabilities: Vec<f64> = sig2.iter().map(|s| s * cell / total).collect();
    let inv_purity: f64 = probabilities.iter().map(|p| p * p).sum();
    Ok(SchmidtSpectrum {
        probabilities,
        k: 1.0 / inv_purity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eigs_of(rows: &[&[f64]]) -> Vec<f64> {
        let n = rows.len();
        let mut a: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        symmetric_eigenvalues(&mut a, n).unwrap()
    }

    #[test]
    fn small_matrices_match_closed_forms() {
        let e = eigs_of(&[&[2.0, 1.0], &[1.0, 2.0]]);
        assert!((e[0] - 3.0).abs() < 1e-12 && (e[1] - 1.0).abs() < 1e-12);
        // Diagonal stays put.
        let e = eigs_of(&[&[5.0, 0.0, 0.0], &[0.0, -1.0, 0.0], &[0.0, 0.0, 2.0]]);
        assert!((e[0] - 5.0).abs() < 1e-12);
        assert!((e[1] - 2.0).abs() < 1e-12);
        assert!((e[2] + 1.0).abs() < 1e-12);
        // 3x3 with known spectrum {6, 3, 0} (rank-2 plus shift):
        let e = eigs_of(&[&[4.0, 1.0, 1.0], &[1.0, 4.0, 1.0], &[1.0, 1.0, 4.0]]);
        assert!((e[0] - 6.0).abs() < 1e-12);
        assert!((e[1] - 3.0).abs() < 1e-12);
        assert!((e[2] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn identity_two_by_two_schmidt() {
        let m = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ];
        let s = svd_schmidt(&m, 2, 2, 1.0, 1.0).unwrap();
        assert!((s.k - 2.0).abs() < 1e-12);
        assert!((s.probabilities[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rank_one_kernel_has_unit_schmidt_number() {
        let nx = 41;
        let ny = 57;
        let f = |x: f64| (-x * x).exp();
        let g = |y: f64| 1.0 / (1.0 + y * y);
        let mut m = Vec::with_capacity(nx * ny);
        for i in 0..nx {
            let x = -2.0 + 4.0 * i as f64 / (nx - 1) as f64;
            for j in 0..ny {
                let y = -3.0 + 6.0 * j as f64 / (ny - 1) as f64;
                m.push(Complex64::new(f(x) * g(y), 0.0));
            }
        }
        let s = svd_schmidt(&m, nx, ny, 0.1, 0.1).unwrap();
        assert!((s.k - 1.0).abs() < 1e-10, "K = {}", s.k);
    }

    #[test]
    fn complex_kernel_matches_real_embedding() {
        // A rank-1 complex kernel must still give K = 1.
        let nx = 23;
        let ny = 31;
        let mut m = Vec::with_capacity(nx * ny);
        for i in 0..nx {
            let x = i as f64 / 5.0;
            for j in 0..ny {
                let y = j as f64 / 7.0;
                let fx = Complex64::from_polar((-0.3 * x * x).exp(), 1.3 * x);
                let gy = Complex64::from_polar((-0.1 * y * y).exp(), -0.8 * y);
                m.push(fx * gy);
            }
        }
        let s = svd_schmidt(&m, nx, ny, 0.2, 0.14).unwrap();
        assert!((s.k - 1.0).abs() < 1e-9, "K = {}", s.k);
    }

    #[test]
    fn zero_kernel_is_rejected() {
        let m = vec![Complex64::new(0.0, 0.0); 12];
        assert!(matches!(
            svd_schmidt(&m, 3, 4, 1.0, 1.0),
            Err(NumericsError::ZeroKernel)
        ));
    }

    proptest! {
        #[test]
        fn trace_and_frobenius_are_preserved(seed in 0u64..1000) {
            // Deterministic pseudo-random symmetric matrix.
            let n = 12;
            let mut a = vec![0.0; n * n];
            let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
            };
            for i in 0..n {
                for j in 0..=i {
                    let v = next();
                    a[i * n + j] = v;
                    a[j * n + i] = v;
                }
            }
            let trace: f64 = (0..n).map(|i| a[i * n + i]).sum();
            let frob: f64 = a.iter().map(|x| x * x).sum();
            let eigs = symmetric_eigenvalues(&mut a.clone(), n).unwrap();
            let tsum: f64 = eigs.iter().sum();
            let fsum: f64 = eigs.iter().map(|x| x * x).sum();
            prop_assert!((tsum - trace).abs() < 1e-9);
            prop_assert!((fsum - frob).abs() / frob.max(1e-12) < 1e-9);
        }

        #[test]
        fn schmidt_number_invariances(scale_re in 0.1f64..10.0, scale_im in -3.0f64..3.0) {
            // K >= 1; invariant under global complex rescaling and transpose.
            let nx = 17;
            let ny = 13;
            let mut m = Vec::with_capacity(nx * ny);
            for i in 0..nx {
                for j in 0..ny {
                    let x = i as f64 / 4.0 - 2.0;
                    let y = j as f64 / 3.0 - 2.0;
                    m.push(Complex64::new((-(x + y) * (x + y) / 2.0).exp(), 0.0) * (-(x - y) * (x - y) / 5.0).exp());
                }
            }
            let base = svd_schmidt(&m, nx, ny, 0.25, 1.0 / 3.0).unwrap();
            prop_assert!(base.k >= 1.0 - 1e-12);
            let z = Complex64::new(scale_re, scale_im);
            let scaled: Vec<Complex64> = m.iter().map(|v| v * z).collect();
            let s = svd_schmidt(&scaled, nx, ny, 0.25, 1.0 / 3.0).unwrap();
            prop_assert!((s.k - base.k).abs() / base.k < 1e-9);
            let mut t = vec![Complex64::new(0.0, 0.0); nx * ny];
            for i in 0..nx {
                for j in 0..ny {
                    t[j * nx + i] = m[i * ny + j];
                }
            }
            let st = svd_schmidt(&t, ny, nx, 1.0 / 3.0, 0.25).unwrap();
            prop_assert!((st.k - base.k).abs() / base.k < 1e-9);
        }
    }
}
