//! Generator bases of `sl_n` and their structure constants.
//!
//! For `n = 2` the basis is the Pauli triple. For larger `n` it is the
//! unnormalised Gell-Mann family: `E_jk + E_kj`, `-i(E_jk - E_kj)` for each
//! `j < k`, then `diag(1, …, 1, -l, 0, …)` for `l = 1..n-1`, so every entry
//! stays in ℚ(i). The trace form `g_rs = tr(λ_r λ_s)` is diagonal but not
//! uniform, so index raising always goes through the explicit metric.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct SlBasis {
    pub n: usize,
    pub generators: Vec<Matrix>,
    pub labels: Vec<String>,
    /// `structure[r][s][t] = C^r_{st}` with `[λ_s, λ_t] = C^r_{st} λ_r`.
    pub structure: Vec<Vec<Vec<Scalar>>>,
    /// `g_rs = tr(λ_r λ_s)`
    pub metric: Matrix,
    pub metric_inv: Matrix,
}

impl SlBasis {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn c(&self, r: usize, s: usize, t: usize) -> &Scalar {
        &self.structure[r][s][t]
    }

    /// `λ^r = g^{rs} λ_s`
    pub fn raised(&self, r: usize) -> Matrix {
        let mut out = Matrix::zeros(self.n, self.n);
        for s in 0..self.rank() {
            let g = self.metric_inv.get(r, s);
            if !g.is_zero() {
                out = out.add(&self.generators[s].scale(g));
            }
        }
        out
    }
}

fn trace(m: &Matrix) -> Scalar {
    (0..m.rows()).map(|i| m.get(i, i).clone()).sum()
}

pub fn sl_basis(n: usize) -> Result<SlBasis> {
    if n < 2 {
        return Err(Error::Unsupported("sl_n needs n >= 2".into()));
    }
    let mut generators = Vec::new();
    let mut labels = Vec::new();
    let pauli = n == 2;
    for j in 0..n {
        for k in j + 1..n {
            let mut sym = Matrix::zeros(n, n);
            sym.set(j, k, Scalar::one());
            sym.set(k, j, Scalar::one());
            let mut anti = Matrix::zeros(n, n);
            anti.set(j, k, -Scalar::i());
            anti.set(k, j, Scalar::i());
            generators.push(sym);
            generators.push(anti);
            if pauli {
                labels.push("sigma1".to_string());
                labels.push("sigma2".to_string());
            } else {
                labels.push(format!("S{}{}", j + 1, k + 1));
                labels.push(format!("A{}{}", j + 1, k + 1));
            }
        }
    }
    for l in 1..n {
        let mut h = Matrix::zeros(n, n);
        for i in 0..l {
            h.set(i, i, Scalar::one());
        }
        h.set(l, l, Scalar::from_int(-(l as i64)));
        generators.push(h);
        labels.push(if pauli { "sigma3".to_string() } else { format!("H{l}") });
    }
    let rank = generators.len();
    let mut metric = Matrix::zeros(rank, rank);
    for r in 0..rank {
        for s in 0..rank {
            metric.set(r, s, trace(&generators[r].mul(&generators[s])));
        }
    }
    let metric_inv = metric.inverse().ok_or_else(|| Error::Unsupported("degenerate trace form".into()))?;
    // C^r_st = g^{rp} tr(λ_p [λ_s, λ_t])
    let mut structure = vec![vec![vec![Scalar::zero(); rank]; rank]; rank];
    for s in 0..rank {
        for t in 0..rank {
            let br = generators[s].mul(&generators[t]).sub(&generators[t].mul(&generators[s]));
            let proj: Vec<Scalar> = generators.iter().map(|p| trace(&p.mul(&br))).collect();
            for (r, row) in structure.iter_mut().enumerate() {
                row[s][t] = (0..rank).map(|p| metric_inv.get(r, p) * &proj[p]).sum();
            }
        }
    }
    Ok(SlBasis { n, generators, labels, structure, metric, metric_inv })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_structure_constants() {
        let b = sl_basis(2).unwrap();
        assert_eq!(b.rank(), 3);
        let two_i = Scalar::complex((0, 1), (2, 1));
        // [σ1, σ2] = 2i σ3 and cyclic
        assert_eq!(b.c(2, 0, 1), &two_i);
        assert_eq!(b.c(0, 1, 2), &two_i);
        assert_eq!(b.c(1, 2, 0), &two_i);
        assert_eq!(b.c(2, 1, 0), &-two_i);
        assert_eq!(b.metric, Matrix::identity(3).scale(&Scalar::from_int(2)));
    }

    #[test]
    fn brackets_expand_exactly() {
        for n in [2, 3] {
            let b = sl_basis(n).unwrap();
            assert_eq!(b.rank(), n * n - 1);
            for s in 0..b.rank() {
                for t in 0..b.rank() {
                    let lhs = b.generators[s].mul(&b.generators[t]).sub(&b.generators[t].mul(&b.generators[s]));
                    let mut rhs = Matrix::zeros(n, n);
                    for r in 0..b.rank() {
                        rhs = rhs.add(&b.generators[r].scale(b.c(r, s, t)));
                    }
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
