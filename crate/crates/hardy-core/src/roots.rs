//! Polynomial root finding: companion-matrix eigenvalues via shifted QR on
//! the complex Hessenberg form, Newton polishing against the original
//! coefficients, and clustering of nearby roots into multiplicities.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::poly::{Poly, PolyError, RootSet};
use crate::tol;

const MAX_QR_SWEEPS_PER_EIGENVALUE: usize = 60;

pub(crate) fn all_roots(p: &Poly) -> Result<RootSet, PolyError> {
    let n = p.degree();
    debug_assert!(n >= 1);

    let lead = p.leading();
    let monic: Vec<Complex64> = p.coeffs()[..n].iter().map(|&c| c / lead).collect();

    let mut raw = if n == 1 {
        alloc::vec![-monic[0]]
    } else if n == 2 {
        quadratic_roots(monic[0], monic[1])
    } else {
        let mut h = companion(&monic);
        balance(&mut h, n);
        hessenberg_qr_eigenvalues(&mut h, n)?
    };

    let dp = p.derivative();
    for r in raw.iter_mut() {
        *r = newton_polish(p, &dp, *r);
    }

    let clusters = merge_clusters(&raw);
    let mut roots: Vec<(Complex64, usize)> = Vec::with_capacity(clusters.len());
    for (centroid, mult) in clusters {
        let refined = if mult >= 2 {
            // A multiplicity-k root is a simple root of the (k-1)-th
            // derivative; polishing there restores full accuracy.
            let mut d = p.clone();
            for _ in 0..mult - 1 {
                d = d.derivative();
            }
            let ddp = d.derivative();
            let polished = newton_polish(&d, &ddp, centroid);
            if (polished - centroid).norm() <= 10.0 * tol::MULTIPLICITY_MERGE_REL * (1.0 + centroid.norm())
            {
                polished
            } else {
                centroid
            }
        } else {
            centroid
        };
        roots.push((refined, mult));
    }

    roots.sort_by(|a, b| {
        a.0.re
            .partial_cmp(&b.0.re)
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(a.0.im.partial_cmp(&b.0.im).unwrap_or(core::cmp::Ordering::Equal))
    });

    let residual = roots
        .iter()
        .map(|&(r, _)| p.eval(r).norm())
        .fold(0.0_f64, f64::max);

    Ok(RootSet {
        roots,
        residual,
        warnings: Vec::new(),
    })
}

fn quadratic_roots(c0: Complex64, c1: Complex64) -> Vec<Complex64> {
    // z^2 + c1 z + c0, solved with the cancellation-free variant.
    let half = c1 * -0.5;
    let disc = (half * half - c0).sqrt();
    let r1 = if (half + disc).norm() >= (half - disc).norm() {
        half + disc
    } else {
        half - disc
    };
    if r1.norm() == 0.0 {
        return alloc::vec![r1, r1];
    }
    alloc::vec![r1, c0 / r1]
}

fn companion(monic_low: &[Complex64]) -> Vec<Complex64> {
    let n = monic_low.len();
    let mut h = alloc::vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n - 1 {
        h[(j + 1) * n + j] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        h[i * n + (n - 1)] = -monic_low[i];
    }
    h
}

/// Parlett–Reinsch balancing with radix-2 scaling; reduces the norm spread
/// the QR iteration has to work across. Accuracy lost here is restored by the
/// Newton polish.
fn balance(h: &mut [Complex64], n: usize) {
    let radix: f64 = 2.0;
    for _ in 0..32 {
        let mut converged = true;
        for i in 0..n {
            let mut row = 0.0;
            let mut col = 0.0;
            for j in 0..n {
                if j != i {
                    row += h[i * n + j].norm();
                    col += h[j * n + i].norm();
                }
            }
            if row == 0.0 || col == 0.0 {
                continue;
            }
            let mut f = 1.0;
            let s = row + col;
            while col < row / radix {
                col *= radix * radix;
                row /= radix * radix;
                f *= radix;
            }
            while col >= row * radix {
                col /= radix * radix;
                row *= radix * radix;
                f /= radix;
            }
            if (row + col) < 0.95 * s && f != 1.0 {
                converged = false;
                for j in 0..n {
                    h[i * n + j] /= f;
                    h[j * n + i] *= f;
                }
            }
        }
        if converged {
            break;
        }
    }
}

/// Givens pair (c real, s complex) with `c^2 + |s|^2 = 1` such that the
/// rotation [[c, s], [-conj(s), c]] annihilates `g` against `f`.
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    let fn_ = f.norm();
    let gn = g.norm();
    if gn == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if fn_ == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let d = (fn_ * fn_ + gn * gn).sqrt();
    (fn_ / d, f * g.conj() / (d * fn_))
}

fn eig2x2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let m = (a + d) * 0.5;
    let det = a * d - b * c;
    let q = (m * m - det).sqrt();
    let l1 = if (m + q).norm() >= (m - q).norm() { m + q } else { m - q };
    if l1.norm() == 0.0 {
        (l1, l1)
    } else {
        (l1, det / l1)
    }
}

/// Explicit single-shift QR with Wilkinson shifts and deflation on an upper
/// Hessenberg matrix; returns eigenvalues.
fn hessenberg_qr_eigenvalues(h: &mut [Complex64], n: usize) -> Result<Vec<Complex64>, PolyError> {
    let eps = f64::EPSILON;
    let mut eigs: Vec<Complex64> = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut iter = 0usize;

    loop {
        // Deflate negligible subdiagonals.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[lo * n + (lo - 1)].norm();
            let local = h[(lo - 1) * n + (lo - 1)].norm() + h[lo * n + lo].norm();
            if sub <= eps * local.max(f64::MIN_POSITIVE) {
                h[lo * n + (lo - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }

        if lo == hi {
            eigs.push(h[hi * n + hi]);
            if hi == 0 {
                break;
            }
            hi -= 1;
            iter = 0;
            continue;
        }
        if hi - lo == 1 {
            let (l1, l2) = eig2x2(
                h[lo * n + lo],
                h[lo * n + hi],
                h[hi * n + lo],
                h[hi * n + hi],
            );
            eigs.push(l1);
            eigs.push(l2);
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            iter = 0;
            continue;
        }

        iter += 1;
        if iter > MAX_QR_SWEEPS_PER_EIGENVALUE {
            return Err(PolyError::RootsNotConverged {
                residual: h[hi * n + (hi - 1)].norm(),
            });
        }

        let mut shift = {
            let (l1, l2) = eig2x2(
                h[(hi - 1) * n + (hi - 1)],
                h[(hi - 1) * n + hi],
                h[hi * n + (hi - 1)],
                h[hi * n + hi],
            );
            let d = h[hi * n + hi];
            if (l1 - d).norm() <= (l2 - d).norm() {
                l1
            } else {
                l2
            }
        };
        if iter.is_multiple_of(12) {
            // Exceptional shift to break symmetry-induced stalls.
            let s = h[hi * n + (hi - 1)].norm();
            shift = h[hi * n + hi] + Complex64::new(1.5 * s, 0.75 * s);
        }

        for k in lo..=hi {
            h[k * n + k] -= shift;
        }

        // R = G_{hi-1} ... G_lo (H - shift I): row rotations.
        let mut rotations: Vec<(f64, Complex64)> = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(h[k * n + k], h[(k + 1) * n + k]);
            for j in 0..n {
                let a = h[k * n + j];
                let b = h[(k + 1) * n + j];
                h[k * n + j] = a * c + b * s;
                h[(k + 1) * n + j] = -a * s.conj() + b * c;
            }
            rotations.push((c, s));
        }
        // H' = R Q + shift I with Q = G_lo^H ... G_{hi-1}^H: column rotations.
        for (idx, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + idx;
            for i in 0..n {
                let a = h[i * n + k];
                let b = h[i * n + (k + 1)];
                h[i * n + k] = a * c + b * s.conj();
                h[i * n + (k + 1)] = -a * s + b * c;
            }
        }
        for k in lo..=hi {
            h[k * n + k] += shift;
        }
    }

    Ok(eigs)
}

fn newton_polish(p: &Poly, dp: &Poly, start: Complex64) -> Complex64 {
    let mut z = start;
    let mut best = start;
    let mut best_res = p.eval(start).norm();
    for _ in 0..24 {
        let f = p.eval(z);
        let fr = f.norm();
        if fr < best_res {
            best_res = fr;
            best = z;
        }
        if fr == 0.0 {
            return z;
        }
        let fp = dp.eval(z);
        if fp.norm() * (1.0 + z.norm()) < 1e-3 * fr {
            break; // derivative too small: multiple root, handled by clustering
        }
        let step = f / fp;
        z -= step;
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            let fr = p.eval(z).norm();
            if fr < best_res {
                best = z;
            }
            return best;
        }
    }
    best
}

#[allow(clippy::needless_range_loop)] // pairwise index loop over one slice
fn merge_clusters(roots: &[Complex64]) -> Vec<(Complex64, usize)> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            let scale = 1.0 + 0.5 * (roots[i].norm() + roots[j].norm());
            if (roots[i] - roots[j]).norm() <= tol::MULTIPLICITY_MERGE_REL * scale {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut sums: Vec<(Complex64, usize)> = alloc::vec![(Complex64::new(0.0, 0.0), 0); n];
    for i in 0..n {
        let r = find(&mut parent, i);
        sums[r].0 += roots[i];
        sums[r].1 += 1;
    }
    sums.into_iter()
        .filter(|&(_, k)| k > 0)
        .map(|(s, k)| (s / (k as f64), k))
        .collect()
}
