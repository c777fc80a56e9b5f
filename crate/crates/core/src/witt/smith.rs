//! Elementary divisors over the local ring `W_m(F_{p^r})`.

use super::matrix::WittMatrix;
use crate::error::{Error, Result};

/// Result of a local Smith reduction `P * A * Q = D`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Exponents `e_i` with `D_ii = p^{e_i} * unit`, in pivot order (non-decreasing).
    pub exponents: Vec<u32>,
    pub d: WittMatrix,
    pub p: WittMatrix,
    pub q: WittMatrix,
}

/// Elementary-divisor exponents of a square matrix, sorted ascending.
pub fn elementary_divisors(a: &WittMatrix) -> Result<Vec<u32>> {
    Ok(reduce(a, false)?.exponents)
}

/// Smith reduction keeping the row and column transforms.
pub fn smith_form(a: &WittMatrix) -> Result<SmithForm> {
    reduce(a, true)
}

fn reduce(a: &WittMatrix, track: bool) -> Result<SmithForm> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("Smith form of a non-square matrix".into()));
    }
    let ring = a.ring().clone();
    let data = ring.data.clone();
    let n = a.rows();
    let mut d = a.clone();
    let mut p = WittMatrix::identity(&ring, n);
    let mut q = WittMatrix::identity(&ring, n);
    let mut exponents = Vec::with_capacity(n);

    for k in 0..n {
        // Pivot: entry of least valuation in the trailing block.
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..n {
            for j in k..n {
                if let Some(v) = data.valuation(d.entry(i, j)) {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
                if matches!(best, Some((0, _, _))) {
                    break;
                }
            }
            if matches!(best, Some((0, _, _))) {
                break;
            }
        }
        let Some((v, pi, pj)) = best else {
            return Err(Error::PrecisionExhausted { m: ring.m() });
        };
        swap_rows(&mut d, k, pi);
        swap_cols(&mut d, k, pj);
        if track {
            swap_rows(&mut p, k, pi);
            swap_cols(&mut q, k, pj);
        }
        let pivot = d.entry(k, k).to_vec();
        let unit_inv = data
            .inverse(&data.div_p_pow(&pivot, v))
            .expect("pivot quotient is a unit");

        for i in k + 1..n {
            let e = d.entry(i, k).to_vec();
            if data.is_zero(&e) {
                continue;
            }
            let f = data.mul(&data.div_p_pow(&e, v), &unit_inv);
            row_axpy(&mut d, i, k, &f, k);
            if track {
                row_axpy(&mut p, i, k, &f, 0);
            }
        }
        for j in k + 1..n {
            let e = d.entry(k, j).to_vec();
            if data.is_zero(&e) {
                continue;
            }
            let f = data.mul(&data.div_p_pow(&e, v), &unit_inv);
            col_axpy(&mut d, j, k, &f, k);
            if track {
                col_axpy(&mut q, j, k, &f, 0);
            }
        }
        exponents.push(v);
    }
    Ok(SmithForm { exponents, d, p, q })
}

fn swap_rows(a: &mut WittMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    for c in 0..a.cols() {
        let x = a.entry(i, c).to_vec();
        let y = a.entry(j, c).to_vec();
        a.entry_mut(i, c).copy_from_slice(&y);
        a.entry_mut(j, c).copy_from_slice(&x);
    }
}

fn swap_cols(a: &mut WittMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    for r in 0..a.rows() {
        let x = a.entry(r, i).to_vec();
        let y = a.entry(r, j).to_vec();
        a.entry_mut(r, i).copy_from_slice(&y);
        a.entry_mut(r, j).copy_from_slice(&x);
    }
}

/// `row_i -= f * row_k`, touching columns from `start` on.
fn row_axpy(a: &mut WittMatrix, i: usize, k: usize, f: &[u64], start: usize) {
    let data = a.ring().data.clone();
    for c in start..a.cols() {
        let t = data.mul(f, a.entry(k, c));
        data.sub_into(a.entry_mut(i, c), &t);
    }
}

/// `col_j -= f * col_k`, touching rows from `start` on.
fn col_axpy(a: &mut WittMatrix, j: usize, k: usize, f: &[u64], start: usize) {
    let data = a.ring().data.clone();
    for r in start..a.rows() {
        let t = data.mul(f, a.entry(r, k));
        data.sub_into(a.entry_mut(r, j), &t);
    }
}

/// `p * A^{-1}`, defined when every elementary divisor exponent is at most 1.
pub fn p_times_inverse(a: &WittMatrix) -> Result<WittMatrix> {
    let sf = smith_form(a)?;
    let ring = a.ring();
    let data = ring.data.clone();
    let n = a.rows();
    // P A Q = D  =>  p A^{-1} = Q (p D^{-1}) P.
    let mut pd = WittMatrix::zeros(ring, n, n);
    for i in 0..n {
        let e = sf.exponents[i];
        if e > 1 {
            return Err(Error::InvalidCrystal(format!(
                "elementary divisor p^{e} leaves p * A^-1 non-integral"
            )));
        }
        let u = data.div_p_pow(sf.d.entry(i, i), e);
        let inv = data.inverse(&u).expect("unit");
        let val = data.mul(&inv, &data.p_pow(1 - e));
        pd.entry_mut(i, i).copy_from_slice(&val);
    }
    sf.q.mul(&pd)?.mul(&sf.p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witt::ring::witt_ring;

    #[test]
    fn diagonal_powers() {
        let w = witt_ring(3, 1, 3).unwrap();
        let a = WittMatrix::diag_p_powers(&w, &[2, 0, 1]);
        assert_eq!(elementary_divisors(&a).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn antidiagonal() {
        let w = witt_ring(2, 1, 4).unwrap();
        let a = WittMatrix::from_ints(&w, &[vec![0, 2], vec![1, 0]]).unwrap();
        assert_eq!(elementary_divisors(&a).unwrap(), vec![0, 1]);
    }

    #[test]
    fn mixed_entries() {
        // [[p, p], [p, p + p^2]] has divisors p, p^2.
        let w = witt_ring(5, 2, 4).unwrap();
        let a = WittMatrix::from_ints(&w, &[vec![5, 5], vec![5, 30]]).unwrap();
        assert_eq!(elementary_divisors(&a).unwrap(), vec![1, 2]);
    }

    #[test]
    fn singular_matrix_exhausts_precision() {
        let w = witt_ring(2, 1, 3).unwrap();
        let a = WittMatrix::from_ints(&w, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(elementary_divisors(&a), Err(Error::PrecisionExhausted { m: 3 }));
    }

    #[test]
    fn transforms_reproduce_diagonal() {
        let w = witt_ring(3, 2, 3).unwrap();
        let a = WittMatrix::from_coeffs(
            &w,
            &[
                vec![vec![3, 0], vec![1, 2], vec![0, 3]],
                vec![vec![0, 1], vec![3, 3], vec![6, 0]],
                vec![vec![1, 1], vec![0, 0], vec![3, 9]],
            ],
        )
        .unwrap();
        let sf = smith_form(&a).unwrap();
        assert_eq!(sf.p.mul(&a).unwrap().mul(&sf.q).unwrap(), sf.d);
    }

    #[test]
    fn p_inverse_of_dieudonne_matrix() {
        let w = witt_ring(2, 2, 4).unwrap();
        let a = WittMatrix::from_coeffs(&w, &[vec![vec![0, 2], vec![1, 0]], vec![vec![2, 2], vec![3, 1]]]).unwrap();
        let b = p_times_inverse(&a).unwrap();
        let two = WittMatrix::identity(&w, 2).scale(&w.from_int(2));
        assert_eq!(a.mul(&b).unwrap(), two);
        assert_eq!(b.mul(&a).unwrap(), two);
    }
}
