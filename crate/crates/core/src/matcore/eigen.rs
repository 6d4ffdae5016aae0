use super::{CMatrix, Unitary, C64};
use crate::error::{Error, Result};
use crate::tolerances::Tolerances;

const MAX_SWEEPS: usize = 100;
const PHASE_FIX_FLOOR: f64 = 1e-10;

/// Eigenvalues with an orthonormal eigenbasis stored as the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub values: Vec<C64>,
    pub vectors: CMatrix,
}

impl EigenSystem {
    /// `V · diag(f(λ)) · V*`.
    pub fn map_values(&self, mut f: impl FnMut(C64) -> C64) -> CMatrix {
        let n = self.vectors.dim();
        let fv: Vec<C64> = self.values.iter().map(|&z| f(z)).collect();
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for (k, &w) in fv.iter().enumerate() {
                    if w.re == 0.0 && w.im == 0.0 {
                        continue;
                    }
                    acc += self.vectors.get(i, k) * w * self.vectors.get(j, k).conj();
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map_values(|z| z)
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }
}

/// Cyclic complex Jacobi on a matrix assumed Hermitian (only the upper
/// triangle and real diagonal are trusted). Returns ascending eigenvalues and,
/// when requested, eigenvectors as columns.
pub(crate) fn jacobi_eigh(h: &CMatrix, want_vectors: bool) -> (Vec<f64>, Option<CMatrix>) {
    let n = h.dim();
    let mut a: Vec<C64> = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        a[i * n + i] = C64::new(h.get(i, i).re, 0.0);
        for j in i + 1..n {
            let z = (h.get(i, j) + h.get(j, i).conj()) * 0.5;
            a[i * n + j] = z;
            a[j * n + i] = z.conj();
        }
    }
    // rows of `zt` are eigenvectors
    let mut zt: Vec<C64> = if want_vectors {
        let mut z = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            z[i * n + i] = C64::new(1.0, 0.0);
        }
        z
    } else {
        Vec::new()
    };

    let frob: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * frob || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let b = apq.norm();
                if b == 0.0 {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                if b <= 1e-18 * (app.abs() + aqq.abs()) {
                    a[p * n + q] = C64::new(0.0, 0.0);
                    a[q * n + p] = C64::new(0.0, 0.0);
                    continue;
                }
                let phase = (apq / b).conj();
                let theta = (aqq - app) / (2.0 * b);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // V = [[c, s], [-s·phase, c·phase]] on the (p, q) plane
                let vqp = phase * (-s);
                let vqq = phase * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    let nkp = akp * c + akq * vqp;
                    let nkq = akp * s + akq * vqq;
                    a[k * n + p] = nkp;
                    a[k * n + q] = nkq;
                    a[p * n + k] = nkp.conj();
                    a[q * n + k] = nkq.conj();
                }
                a[p * n + p] = C64::new(app - t * b, 0.0);
                a[q * n + q] = C64::new(aqq + t * b, 0.0);
                a[p * n + q] = C64::new(0.0, 0.0);
                a[q * n + p] = C64::new(0.0, 0.0);
                if want_vectors {
                    let (head, tail) = zt.split_at_mut(q * n);
                    let zp = &mut head[p * n..(p + 1) * n];
                    let zq = &mut tail[..n];
                    for (x, y) in zp.iter_mut().zip(zq.iter_mut()) {
                        let xp = *x;
                        let xq = *y;
                        *x = xp * c + xq * vqp;
                        *y = xp * s + xq * vqq;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let values: Vec<f64> = order.iter().map(|&i| a[i * n + i].re).collect();
    let vectors = want_vectors.then(|| {
        let mut v = CMatrix::zeros(n);
        for (col, &src) in order.iter().enumerate() {
            let row = &zt[src * n..(src + 1) * n];
            let phase = phase_fix(row);
            for (i, &z) in row.iter().enumerate() {
                v.set(i, col, z * phase);
            }
        }
        v
    });
    (values, vectors)
}

/// Unit scalar that makes the first non-negligible coordinate real positive.
fn phase_fix(v: &[C64]) -> C64 {
    v.iter()
        .find(|z| z.norm() > PHASE_FIX_FLOOR)
        .map(|z| z.conj() / z.norm())
        .unwrap_or(C64::new(1.0, 0.0))
}

/// Hermitian eigendecomposition: real eigenvalues in ascending order.
pub fn herm_eig(h: &CMatrix, tol: &Tolerances) -> Result<EigenSystem> {
    let defect = h.hermiticity_defect();
    if defect > tol.hermiticity {
        return Err(Error::NotHermitian {
            defect,
            tol: tol.hermiticity,
        });
    }
    let (values, vectors) = jacobi_eigh(h, true);
    Ok(EigenSystem {
        values: values.into_iter().map(|x| C64::new(x, 0.0)).collect(),
        vectors: vectors.expect("vectors requested"),
    })
}

/// Eigendecomposition of a unitary through the commuting Hermitian pair
/// `H = (w + w*)/2`, `K = (w - w*)/2i`: diagonalise `H`, then split each
/// degenerate `H`-cluster with the compression of `K`.
///
/// Eigenvalues are ordered by real part, then by imaginary part within a cluster.
pub fn unitary_eig(w: &Unitary, tol: &Tolerances) -> Result<EigenSystem> {
    let m = w.matrix();
    if w.utol() > tol.unitarity {
        let defect = m.unitarity_defect();
        if defect > tol.unitarity {
            return Err(Error::NotUnitary {
                defect,
                tol: tol.unitarity,
            });
        }
    }
    let n = m.dim();
    let adj = m.adjoint();
    let h = (m + &adj).scale_real(0.5);
    let k = (m - &adj).scale(C64::new(0.0, -0.5));
    let (hvals, hvecs) = jacobi_eigh(&h, true);
    let mut vectors = hvecs.expect("vectors requested");

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && hvals[end] - hvals[end - 1] <= tol.cluster {
            end += 1;
        }
        if end - start > 1 {
            refine_cluster(&mut vectors, &k, start, end);
        }
        start = end;
    }

    let values = (0..n)
        .map(|j| {
            let v = vectors.column(j);
            let mut acc = C64::new(0.0, 0.0);
            for r in 0..n {
                let mut row = C64::new(0.0, 0.0);
                for (c, vc) in v.iter().enumerate() {
                    row += m.get(r, c) * vc;
                }
                acc += v[r].conj() * row;
            }
            acc
        })
        .collect();
    Ok(EigenSystem { values, vectors })
}

fn refine_cluster(vectors: &mut CMatrix, k: &CMatrix, start: usize, end: usize) {
    let n = vectors.dim();
    let m = end - start;
    // K V_c, then V_c* K V_c
    let kv: Vec<Vec<C64>> = (start..end)
        .map(|c| {
            (0..n)
                .map(|r| (0..n).map(|s| k.get(r, s) * vectors.get(s, c)).sum())
                .collect()
        })
        .collect();
    let compressed = CMatrix::from_fn(m, |a, b| {
        (0..n)
            .map(|r| vectors.get(r, start + a).conj() * kv[b][r])
            .sum()
    });
    let (_, rot) = jacobi_eigh(&compressed, true);
    let rot = rot.expect("vectors requested");
    let old: Vec<Vec<C64>> = (start..end).map(|c| vectors.column(c)).collect();
    for col in 0..m {
        let mut v: Vec<C64> = (0..n)
            .map(|r| (0..m).map(|a| old[a][r] * rot.get(a, col)).sum())
            .collect();
        let phase = phase_fix(&v);
        v.iter_mut().for_each(|z| *z *= phase);
        for (r, z) in v.into_iter().enumerate() {
            vectors.set(r, start + col, z);
        }
    }
}
