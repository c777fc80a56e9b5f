//! Division-free characteristic polynomials (Berkowitz).

use super::matrix::WittMatrix;
use super::ring::RingData;

/// Coefficients `[c_0, ..., c_d]` of `det(X - A) = sum c_k X^{d-k}`, `c_0 = 1`.
pub fn charpoly(a: &WittMatrix) -> Vec<Vec<u64>> {
    assert!(a.is_square());
    let data = a.ring().data.clone();
    let n = a.rows();
    if n == 0 {
        return vec![data.one()];
    }
    // Start from the 1x1 trailing block and grow leftwards/upwards.
    let mut poly: Vec<Vec<u64>> = vec![data.one(), data.neg(a.entry(n - 1, n - 1))];
    for k in (0..n - 1).rev() {
        // Block: rows/cols k..n. Split as [[a_kk, R], [C, M]].
        let size = n - k - 1;
        let r: Vec<Vec<u64>> = (0..size).map(|j| a.entry(k, k + 1 + j).to_vec()).collect();
        let mut col: Vec<Vec<u64>> = (0..size).map(|i| a.entry(k + 1 + i, k).to_vec()).collect();
        // Toeplitz column t = [1, -a_kk, -R C, -R M C, ..., -R M^{size-1} C].
        let mut t = Vec::with_capacity(size + 2);
        t.push(data.one());
        t.push(data.neg(a.entry(k, k)));
        for step in 0..size {
            t.push(data.neg(&dot(&data, &r, &col)));
            if step + 1 < size {
                col = mat_vec(&data, a, k + 1, &col);
            }
        }
        // New poly = T * poly, T is (size+2) x (size+1) lower-triangular Toeplitz.
        let mut next = vec![data.zero(); size + 2];
        for i in 0..size + 2 {
            for j in 0..=i.min(size) {
                let prod = data.mul(&t[i - j], &poly[j]);
                data.add_into(&mut next[i], &prod);
            }
        }
        poly = next;
    }
    poly
}

fn dot(data: &RingData, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<u64> {
    let mut acc = data.zero();
    for (x, y) in a.iter().zip(b) {
        data.mul_add_into(&mut acc, x, y);
    }
    acc
}

/// Trailing block `M = A[off.., off..]` times `v`.
fn mat_vec(data: &RingData, a: &WittMatrix, off: usize, v: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = a.rows();
    (off..n)
        .map(|i| {
            let mut acc = data.zero();
            for (j, x) in v.iter().enumerate() {
                data.mul_add_into(&mut acc, a.entry(i, off + j), x);
            }
            acc
        })
        .collect()
}
