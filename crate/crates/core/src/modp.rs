//! Semilinear algebra modulo `p`: Hasse-Witt invariants, the Verschiebung
//! and the map `X -> phi X theta` on endomorphisms.
//!
//! Images are computed after writing every `F_q`-vector in `F_p`
//! coordinates, so all ranks below are `F_p`-ranks divided by `r`.

use crate::error::{Error, Result};
use crate::types::{circular_decomposition, MonomialCrystal, PDivTypeMultiset};
use crate::witt::{p_times_inverse, witt_ring, SemilinearMap, WittMatrix, WittRingParams};

/// `phi(x) = A sigma(x)` and `theta(x) = B sigma^{-1}(x)` on `F_q^d`.
#[derive(Clone, Debug)]
pub struct ModpCrystal {
    phi: WittMatrix,
    theta: Option<WittMatrix>,
}

impl ModpCrystal {
    pub fn new(phi: WittMatrix, theta: Option<WittMatrix>) -> Result<Self> {
        if phi.ring().m() != 1 {
            return Err(Error::InvalidDegree(format!("expected precision 1, got {}", phi.ring().m())));
        }
        if !phi.is_square() {
            return Err(Error::DimensionMismatch("phi is not square".into()));
        }
        if let Some(b) = &theta {
            if b.ring() != phi.ring() {
                return Err(Error::RingMismatch);
            }
            if b.rows() != phi.rows() || b.cols() != phi.cols() {
                return Err(Error::DimensionMismatch("theta and phi differ in size".into()));
            }
        }
        Ok(ModpCrystal { phi, theta })
    }

    /// Reduction of a `sigma`-linear lift; the Verschiebung is recovered as
    /// `sigma^{-1}(p A^{-1})`, which needs precision at least 2.
    pub fn from_lift(map: &SemilinearMap) -> Result<Self> {
        if map.twist() != 1 {
            return Err(Error::InvalidDegree(format!("expected a sigma-linear lift, twist {}", map.twist())));
        }
        let a = map.matrix();
        let theta = if a.ring().m() >= 2 {
            Some(p_times_inverse(a)?.frobenius_pow(-1).reduce_precision(1)?)
        } else {
            None
        };
        ModpCrystal::new(a.reduce_precision(1)?, theta)
    }

    /// Monomial Dieudonne crystal over `F_{p^r}`.
    pub fn from_monomial(mc: &MonomialCrystal, p: u64, r: usize) -> Result<Self> {
        if let Some(b) = (0..mc.len()).find(|&b| !(0..=1).contains(&mc.exponents()[b])) {
            return Err(Error::InvalidCrystal(format!("exponent outside [0, 1] at label {b}")));
        }
        let ring = witt_ring(p, r, 2)?;
        ModpCrystal::from_lift(&mc.to_semilinear_map(&ring)?)
    }

    pub fn ring(&self) -> &WittRingParams {
        self.phi.ring()
    }
    pub fn rank(&self) -> usize {
        self.phi.rows()
    }
    pub fn phi(&self) -> &WittMatrix {
        &self.phi
    }
    pub fn theta(&self) -> Option<&WittMatrix> {
        self.theta.as_ref()
    }

    fn theta_or_err(&self) -> Result<&WittMatrix> {
        self.theta.as_ref().ok_or(Error::MissingVerschiebung)
    }

    /// `phi^t = sigma(B)^T`, `theta^t = sigma^{-1}(A)^T`.
    pub fn dual(&self) -> Result<ModpCrystal> {
        let b = self.theta_or_err()?;
        ModpCrystal::new(b.frobenius_pow(1).transpose(), Some(self.phi.frobenius_pow(-1).transpose()))
    }

    /// Dimension of `Ker phi`, the dimension of the p-divisible group.
    pub fn dimension(&self) -> usize {
        self.rank() - fq_rank(&self.phi)
    }

    /// `dim_k` of the stable image of `phi`.
    pub fn hasse_witt(&self) -> usize {
        self.hasse_witt_with_steps().0
    }

    /// Stable image dimension and the number of iterations needed.
    pub fn hasse_witt_with_steps(&self) -> (usize, usize) {
        let data = &self.ring().data;
        let r = data.r;
        let d = self.rank();
        let (dim, steps) = stable_image(data.p, d * r, |v| {
            let x = from_fp(v, r);
            let y = mat_vec(&self.phi, &x.iter().map(|c| data.frobenius(c, 1)).collect::<Vec<_>>());
            to_fp(&y)
        });
        (dim / r, steps)
    }

    /// `Psi(X) = A sigma(X) sigma(B)`, i.e. `phi . X . theta`.
    pub fn fshw_map_gl(&self, x: &WittMatrix) -> Result<WittMatrix> {
        let b = self.theta_or_err()?;
        self.phi.mul(&x.frobenius_pow(1))?.mul(&b.frobenius_pow(1))
    }

    /// Stable image dimension of `Psi` on all of `End(M)`.
    pub fn gl_fshw_invariant(&self) -> Result<usize> {
        let d = self.rank();
        let all: Vec<(usize, usize)> = (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).collect();
        self.fshw_on_entries(&all).map(|(dim, _)| dim)
    }

    /// Stable image of `Psi` on the block-diagonal endomorphisms, where
    /// `blocks[i]` names the block of basis vector `i`.
    pub fn block_fshw_invariant(&self, blocks: &[usize]) -> Result<usize> {
        let d = self.rank();
        if blocks.len() != d {
            return Err(Error::DimensionMismatch(format!("{} block labels for rank {d}", blocks.len())));
        }
        let entries: Vec<(usize, usize)> = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .filter(|&(i, j)| blocks[i] == blocks[j])
            .collect();
        self.fshw_on_entries(&entries).map(|(dim, _)| dim)
    }

    /// Returns the stable dimension over `k` and the iteration count.
    pub fn fshw_on_entries(&self, entries: &[(usize, usize)]) -> Result<(usize, usize)> {
        self.theta_or_err()?;
        let data = &self.ring().data;
        let r = data.r;
        let d = self.rank();
        let ring = self.ring().clone();
        let mut pos = vec![usize::MAX; d * d];
        for (k, &(i, j)) in entries.iter().enumerate() {
            pos[i * d + j] = k;
        }
        let mut escaped = false;
        let (dim, steps) = stable_image(data.p, entries.len() * r, |v| {
            let coords = from_fp(v, r);
            let mut x = WittMatrix::zeros(&ring, d, d);
            for (&(i, j), c) in entries.iter().zip(&coords) {
                x.entry_mut(i, j).copy_from_slice(c);
            }
            let y = self.fshw_map_gl(&x).expect("sizes agree");
            let mut out = vec![data.zero(); entries.len()];
            for i in 0..d {
                for j in 0..d {
                    let c = y.entry(i, j);
                    if pos[i * d + j] == usize::MAX {
                        escaped |= c.iter().any(|&t| t != 0);
                    } else {
                        out[pos[i * d + j]] = c.to_vec();
                    }
                }
            }
            to_fp(&out)
        });
        if escaped {
            return Err(Error::DimensionMismatch("Psi does not preserve the chosen entries".into()));
        }
        Ok((dim / r, steps))
    }

    /// Dimensions of `w(M)` for every word `w` in `F` (image under `phi`)
    /// and `V^{-1}` (preimage under `theta`) of length `1..=len`, shortest
    /// first; within a length, words are ordered with `F < V^{-1}` read
    /// from the outermost letter. The list adds over direct sums.
    pub fn canonical_filtration_dims(&self, len: usize) -> Result<Vec<usize>> {
        let theta = self.theta_or_err()?;
        let data = &self.ring().data;
        let (p, r) = (data.p, data.r);
        let n = self.rank() * r;
        let f_cols = fp_columns(n, r, |x| mat_vec(&self.phi, &x.iter().map(|c| data.frobenius(c, 1)).collect::<Vec<_>>()));
        let v_cols = fp_columns(n, r, |x| mat_vec(theta, &x.iter().map(|c| data.frobenius(c, -1)).collect::<Vec<_>>()));
        let whole: Vec<Vec<u64>> = (0..n).map(|i| unit(n, i)).collect();
        let mut layer = vec![whole];
        let mut dims = Vec::new();
        for _ in 0..len {
            let mut next = Vec::with_capacity(layer.len() * 2);
            for w in &layer {
                let img = fp_echelon(p, w.iter().map(|v| apply_cols(p, &f_cols, v)).collect());
                let pre = fp_preimage(p, &v_cols, w);
                dims.push(img.len() / r);
                dims.push(pre.len() / r);
                next.push(img);
                next.push(pre);
            }
            layer = next;
        }
        Ok(dims)
    }

    /// `I(D) = d'(d - d')` with `d'` the dimension.
    pub fn is_ordinary(&self) -> Result<bool> {
        let dp = self.dimension();
        Ok(self.gl_fshw_invariant()? == dp * (self.rank() - dp))
    }

    /// Transport by an invertible `u`: `phi' = u A sigma(u)^{-1}`,
    /// `theta' = u B sigma^{-1}(u)^{-1}`.
    pub fn conjugate(&self, u: &WittMatrix) -> Result<ModpCrystal> {
        let inv = fq_inverse(u).ok_or_else(|| Error::InvalidCrystal("conjugating matrix is singular".into()))?;
        let phi = u.mul(&self.phi)?.mul(&inv.frobenius_pow(1))?;
        let theta = match &self.theta {
            Some(b) => Some(u.mul(b)?.mul(&inv.frobenius_pow(-1))?),
            None => None,
        };
        ModpCrystal::new(phi, theta)
    }
}

/// Cyclic decomposition of a filtered monomial Dieudonne crystal.
pub fn classify_cyclic(mc: &MonomialCrystal) -> Result<PDivTypeMultiset> {
    if mc.filtration().is_none() {
        return Err(Error::InvalidCrystal("classification needs a Hodge filtration".into()));
    }
    if let Some(b) = (0..mc.len()).find(|&b| !(0..=1).contains(&mc.exponents()[b])) {
        return Err(Error::InvalidCrystal(format!("exponent outside [0, 1] at label {b}")));
    }
    Ok(circular_decomposition(mc))
}

/// Reads a monomial crystal off a matrix with one entry `p^e u` per
/// column, `u` a unit and `e` in `{0, 1}`, on distinct rows.
pub fn monomial_from_matrix(map: &SemilinearMap) -> Result<MonomialCrystal> {
    if map.twist() != 1 {
        return Err(Error::NotMonomial(format!("twist {} is not sigma-linear", map.twist())));
    }
    let a = map.matrix();
    let data = &a.ring().data;
    let d = a.rows();
    let mut step = Vec::with_capacity(d);
    let mut exp = Vec::with_capacity(d);
    let mut hit = vec![false; d];
    for j in 0..d {
        let nonzero: Vec<usize> = (0..d).filter(|&i| !data.is_zero(a.entry(i, j))).collect();
        let [i] = nonzero[..] else {
            return Err(Error::NotMonomial(format!("column {j} has {} nonzero entries", nonzero.len())));
        };
        let v = data.valuation(a.entry(i, j)).expect("nonzero");
        if v > 1 || hit[i] {
            return Err(Error::NotMonomial(format!("column {j} is not a Dieudonne monomial column")));
        }
        hit[i] = true;
        step.push(i);
        exp.push(i64::from(v));
    }
    MonomialCrystal::new(step, exp.clone())?.with_filtration(exp)
}

fn mat_vec(a: &WittMatrix, x: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let data = &a.ring().data;
    (0..a.rows())
        .map(|i| {
            let mut acc = data.zero();
            for (j, c) in x.iter().enumerate() {
                data.mul_add_into(&mut acc, a.entry(i, j), c);
            }
            acc
        })
        .collect()
}

fn to_fp(v: &[Vec<u64>]) -> Vec<u64> {
    v.iter().flatten().copied().collect()
}

fn from_fp(v: &[u64], r: usize) -> Vec<Vec<u64>> {
    v.chunks(r).map(<[u64]>::to_vec).collect()
}

fn unit(n: usize, i: usize) -> Vec<u64> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

/// Images of the `F_p` basis vectors under an additive map of `F_q^d`.
fn fp_columns(n: usize, r: usize, f: impl Fn(&[Vec<u64>]) -> Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    (0..n).map(|i| to_fp(&f(&from_fp(&unit(n, i), r)))).collect()
}

fn apply_cols(p: u64, cols: &[Vec<u64>], v: &[u64]) -> Vec<u64> {
    let mut out = vec![0; cols.first().map_or(0, Vec::len)];
    for (c, &x) in cols.iter().zip(v) {
        if x != 0 {
            for (o, &y) in out.iter_mut().zip(c) {
                *o = (*o + x * y) % p;
            }
        }
    }
    out
}

/// `{x : T x in W}` for `T` given by its columns and `W` in echelon form.
fn fp_preimage(p: u64, cols: &[Vec<u64>], w: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = cols.len();
    let pivots: Vec<usize> = w.iter().map(|row| row.iter().position(|&x| x != 0).unwrap()).collect();
    // Rows (T e_i mod W | e_i); the rows whose left half vanishes after
    // reduction span the preimage.
    let rows: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut v = cols[i].clone();
            for (row, &c) in w.iter().zip(&pivots) {
                let f = v[c];
                if f != 0 {
                    for (x, &y) in v.iter_mut().zip(row) {
                        *x = (*x + p - f * y % p) % p;
                    }
                }
            }
            v.extend(unit(n, i));
            v
        })
        .collect();
    let width = cols.first().map_or(0, Vec::len);
    fp_echelon(p, rows)
        .into_iter()
        .filter(|row| row[..width].iter().all(|&x| x == 0))
        .map(|row| row[width..].to_vec())
        .collect()
}

/// Row-reduces `rows` over `F_p` in place and returns the echelon basis.
pub fn fp_echelon(p: u64, mut rows: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = inv_mod(rows[rank][col], p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[col] != 0 {
                let f = row[col];
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let (mut base, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Iterates an additive map on `F_p^dim` until the image stops shrinking.
/// Returns the stable dimension and the number of applications.
pub fn stable_image(p: u64, dim: usize, mut f: impl FnMut(&[u64]) -> Vec<u64>) -> (usize, usize) {
    let mut basis: Vec<Vec<u64>> = (0..dim)
        .map(|i| {
            let mut e = vec![0; dim];
            e[i] = 1;
            e
        })
        .collect();
    let mut steps = 0;
    loop {
        let image = fp_echelon(p, basis.iter().map(|v| f(v)).collect());
        steps += 1;
        if image.len() == basis.len() {
            return (image.len(), steps);
        }
        basis = image;
    }
}

/// Rank over `F_q` of a precision-1 matrix.
pub fn fq_rank(a: &WittMatrix) -> usize {
    let data = &a.ring().data;
    let r = data.r;
    let x = a.ring().generator();
    let mut rows = Vec::new();
    for j in 0..a.cols() {
        let mut col: Vec<Vec<u64>> = (0..a.rows()).map(|i| a.entry(i, j).to_vec()).collect();
        for _ in 0..r {
            rows.push(to_fp(&col));
            col = col.iter().map(|c| data.mul(c, x.coeffs())).collect();
        }
    }
    fp_echelon(data.p, rows).len() / r
}

/// Gauss-Jordan inverse over `F_q`.
pub fn fq_inverse(a: &WittMatrix) -> Option<WittMatrix> {
    let data = a.ring().data.clone();
    let n = a.rows();
    let mut m: Vec<Vec<Vec<u64>>> = (0..n)
        .map(|i| {
            let mut row: Vec<Vec<u64>> = (0..n).map(|j| a.entry(i, j).to_vec()).collect();
            row.extend((0..n).map(|j| if i == j { data.one() } else { data.zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| !data.is_zero(&m[i][col]))?;
        m.swap(col, piv);
        let inv = data.inverse(&m[col][col])?;
        m[col] = m[col].iter().map(|c| data.mul(c, &inv)).collect();
        let pivot = m[col].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != col && !data.is_zero(&row[col]) {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    data.sub_into(x, &data.mul(&f, y));
                }
            }
        }
    }
    let mut out = WittMatrix::zeros(a.ring(), n, n);
    for (i, row) in m.iter().enumerate() {
        for j in 0..n {
            out.entry_mut(i, j).copy_from_slice(&row[n + j]);
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, r: usize) -> WittRingParams {
        witt_ring(p, r, 1).unwrap()
    }

    #[test]
    fn invertible_and_nilpotent() {
        let w = ring(3, 2);
        let id = ModpCrystal::new(WittMatrix::identity(&w, 3), None).unwrap();
        assert_eq!(id.hasse_witt(), 3);
        let nil = WittMatrix::from_ints(&w, &[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]).unwrap();
        let c = ModpCrystal::new(nil, None).unwrap();
        assert_eq!(c.hasse_witt_with_steps(), (0, 4));
        assert_eq!(c.gl_fshw_invariant(), Err(Error::MissingVerschiebung));
    }

    #[test]
    fn ordinary_split_crystal() {
        // One etale line, two multiplicative lines.
        let mc = MonomialCrystal::new(vec![0, 1, 2], vec![0, 1, 1]).unwrap();
        let c = ModpCrystal::from_monomial(&mc, 5, 1).unwrap();
        assert_eq!(c.dimension(), 2);
        assert_eq!(c.hasse_witt(), 1);
        assert_eq!(c.dual().unwrap().hasse_witt(), 2);
        assert_eq!(c.gl_fshw_invariant().unwrap(), 2);
        assert!(c.is_ordinary().unwrap());
    }

    #[test]
    fn supersingular_rank_two() {
        let mc = MonomialCrystal::new(vec![1, 0], vec![1, 0]).unwrap();
        let c = ModpCrystal::from_monomial(&mc, 2, 1).unwrap();
        assert_eq!(c.hasse_witt(), 0);
        assert_eq!(c.gl_fshw_invariant().unwrap(), 0);
        assert!(!c.is_ordinary().unwrap());
    }

    #[test]
    fn classify_reads_monomial_matrices() {
        let w = witt_ring(3, 1, 2).unwrap();
        let mc = MonomialCrystal::new(vec![1, 2, 3, 0], vec![1, 0, 1, 0]).unwrap();
        let map = mc.to_semilinear_map(&w).unwrap();
        let back = monomial_from_matrix(&map).unwrap();
        let t = classify_cyclic(&back).unwrap();
        assert_eq!(t.count(&[1, 0]), 2);
        let full = WittMatrix::from_ints(&w, &[vec![1, 1], vec![0, 3]]).unwrap();
        let err = monomial_from_matrix(&SemilinearMap::new(full, 1).unwrap());
        assert!(matches!(err, Err(Error::NotMonomial(_))));
        assert!(classify_cyclic(&mc).is_err());
    }

    #[test]
    fn inverse_over_extension() {
        let w = ring(2, 3);
        let g = w.generator();
        let mut u = WittMatrix::identity(&w, 2);
        u.set(0, 1, &g);
        u.set(1, 0, &g);
        let inv = fq_inverse(&u).unwrap();
        assert_eq!(u.mul(&inv).unwrap(), WittMatrix::identity(&w, 2));
        assert_eq!(fq_rank(&u), 2);
    }
}
