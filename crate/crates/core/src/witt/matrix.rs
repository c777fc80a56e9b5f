use std::fmt;

use serde::{Deserialize, Serialize};

use super::ring::{witt_ring, WittElement, WittRingParams};
use crate::error::{Error, Result};

/// Dense matrix over `W_m(F_{p^r})`.
#[derive(Clone, PartialEq, Eq)]
pub struct WittMatrix {
    ring: WittRingParams,
    rows: usize,
    cols: usize,
    /// Row-major, `r` coordinates per entry.
    data: Vec<u64>,
}

impl fmt::Debug for WittMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:?} {}x{}", self.ring, self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<_> = (0..self.cols).map(|j| self.entry(i, j).to_vec()).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl WittMatrix {
    pub fn zeros(ring: &WittRingParams, rows: usize, cols: usize) -> Self {
        WittMatrix {
            ring: ring.clone(),
            rows,
            cols,
            data: vec![0; rows * cols * ring.r()],
        }
    }

    pub fn identity(ring: &WittRingParams, d: usize) -> Self {
        let mut m = Self::zeros(ring, d, d);
        for i in 0..d {
            m.set_int(i, i, 1);
        }
        m
    }

    /// Diagonal matrix `diag(p^e_1, ..., p^e_d)`.
    pub fn diag_p_powers(ring: &WittRingParams, exps: &[u32]) -> Self {
        let mut m = Self::zeros(ring, exps.len(), exps.len());
        for (i, &e) in exps.iter().enumerate() {
            let v = ring.data.p_pow(e);
            m.entry_mut(i, i).copy_from_slice(&v);
        }
        m
    }

    /// Matrix of a monomial map: column `j` is `p^exps[j] * e_{perm[j]}`.
    pub fn monomial(ring: &WittRingParams, perm: &[usize], exps: &[u32]) -> Result<Self> {
        if perm.len() != exps.len() {
            return Err(Error::DimensionMismatch("permutation and exponent lengths differ".into()));
        }
        let d = perm.len();
        let mut m = Self::zeros(ring, d, d);
        for j in 0..d {
            if perm[j] >= d {
                return Err(Error::DimensionMismatch(format!("target {} out of range", perm[j])));
            }
            let v = ring.data.p_pow(exps[j]);
            m.entry_mut(perm[j], j).copy_from_slice(&v);
        }
        Ok(m)
    }

    /// Integer matrix reduced into the ring (entries land in `Z/p^m`).
    pub fn from_ints(ring: &WittRingParams, rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        let c = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(ring, n, c);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for (j, &v) in row.iter().enumerate() {
                m.set_int(i, j, v);
            }
        }
        Ok(m)
    }

    /// Entries given by their power-basis coordinates.
    pub fn from_coeffs(ring: &WittRingParams, rows: &[Vec<Vec<i64>>]) -> Result<Self> {
        let n = rows.len();
        let c = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(ring, n, c);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for (j, e) in row.iter().enumerate() {
                let el = ring.element(e)?;
                m.entry_mut(i, j).copy_from_slice(el.coeffs());
            }
        }
        Ok(m)
    }

    pub fn ring(&self) -> &WittRingParams {
        &self.ring
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub(crate) fn entry(&self, i: usize, j: usize) -> &[u64] {
        let r = self.ring.r();
        let o = (i * self.cols + j) * r;
        &self.data[o..o + r]
    }

    #[inline]
    pub(crate) fn entry_mut(&mut self, i: usize, j: usize) -> &mut [u64] {
        let r = self.ring.r();
        let o = (i * self.cols + j) * r;
        &mut self.data[o..o + r]
    }

    pub fn get(&self, i: usize, j: usize) -> WittElement {
        WittElement {
            ring: self.ring.clone(),
            coeffs: self.entry(i, j).to_vec(),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: &WittElement) {
        self.entry_mut(i, j).copy_from_slice(v.coeffs());
    }

    pub fn set_int(&mut self, i: usize, j: usize, v: i64) {
        let e = self.ring.from_int(v);
        self.set(i, j, &e);
    }

    /// Coordinates of every entry, for serialization.
    pub fn to_coeffs(&self) -> Vec<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.entry(i, j).iter().map(|&c| c as i64).collect())
                    .collect()
            })
            .collect()
    }

    pub fn mul(&self, rhs: &WittMatrix) -> Result<WittMatrix> {
        if self.ring != rhs.ring {
            return Err(Error::RingMismatch);
        }
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let ring = &self.ring.data;
        let mut out = WittMatrix::zeros(&self.ring, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entry(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                let a = a.to_vec();
                for j in 0..rhs.cols {
                    let b = rhs.entry(k, j);
                    if ring.is_zero(b) {
                        continue;
                    }
                    let prod = ring.mul(&a, b);
                    ring.add_into(out.entry_mut(i, j), &prod);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &WittMatrix) -> Result<WittMatrix> {
        if self.ring != rhs.ring || self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch("addition of unequal shapes".into()));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let b = rhs.entry(i, j).to_vec();
                self.ring.data.add_into(out.entry_mut(i, j), &b);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &WittElement) -> WittMatrix {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.ring.data.mul(self.entry(i, j), c.coeffs());
                out.entry_mut(i, j).copy_from_slice(&v);
            }
        }
        out
    }

    /// Entry-wise `sigma^t`.
    pub fn frobenius_pow(&self, t: i64) -> WittMatrix {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.ring.data.frobenius(self.entry(i, j), t);
                out.entry_mut(i, j).copy_from_slice(&v);
            }
        }
        out
    }

    pub fn transpose(&self) -> WittMatrix {
        let mut out = WittMatrix::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entry_mut(j, i).copy_from_slice(self.entry(i, j));
            }
        }
        out
    }

    /// Same coordinates read in `W_{m'}` for `m' <= m`.
    pub fn reduce_precision(&self, m: u32) -> Result<WittMatrix> {
        if m > self.ring.m() {
            return Err(Error::InvalidDegree(format!(
                "cannot raise precision from {} to {m}",
                self.ring.m()
            )));
        }
        let ring = witt_ring(self.ring.p(), self.ring.r(), m)?;
        let q = ring.modulus();
        Ok(WittMatrix {
            data: self.data.iter().map(|&c| c % q).collect(),
            ring,
            rows: self.rows,
            cols: self.cols,
        })
    }

    /// Same coordinates read in `W_{m'}` for any `m'` (lifting digit-wise).
    pub fn with_ring(&self, ring: &WittRingParams) -> Result<WittMatrix> {
        if ring.p() != self.ring.p() || ring.r() != self.ring.r() {
            return Err(Error::RingMismatch);
        }
        let q = ring.modulus();
        Ok(WittMatrix {
            data: self.data.iter().map(|&c| c % q).collect(),
            ring: ring.clone(),
            rows: self.rows,
            cols: self.cols,
        })
    }

    /// Kronecker product `self (x) rhs`.
    pub fn kronecker(&self, rhs: &WittMatrix) -> Result<WittMatrix> {
        if self.ring != rhs.ring {
            return Err(Error::RingMismatch);
        }
        let ring = &self.ring.data;
        let mut out = WittMatrix::zeros(&self.ring, self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.entry(i, j).to_vec();
                if ring.is_zero(&a) {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        let v = ring.mul(&a, rhs.entry(k, l));
                        out.entry_mut(i * rhs.rows + k, j * rhs.cols + l).copy_from_slice(&v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&c| c == 0)
    }

    /// Minimum valuation over all entries, `None` if the matrix vanishes.
    pub fn min_valuation(&self) -> Option<u32> {
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .filter_map(|(i, j)| self.ring.data.valuation(self.entry(i, j)))
            .min()
    }
}

/// A `sigma^t`-linear map `x -> A * sigma^t(x)` on `W_m(F_{p^r})^d`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SemilinearMap {
    matrix: WittMatrix,
    twist: i64,
}

impl SemilinearMap {
    pub fn new(matrix: WittMatrix, twist: i64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "semilinear map needs a square matrix, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(SemilinearMap { matrix, twist })
    }

    pub fn matrix(&self) -> &WittMatrix {
        &self.matrix
    }
    pub fn twist(&self) -> i64 {
        self.twist
    }
    pub fn ring(&self) -> &WittRingParams {
        self.matrix.ring()
    }
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `(A, t) o (B, s) = (A sigma^t(B), t + s)`.
    pub fn compose(&self, other: &SemilinearMap) -> Result<SemilinearMap> {
        let b = other.matrix.frobenius_pow(self.twist);
        Ok(SemilinearMap {
            matrix: self.matrix.mul(&b)?,
            twist: self.twist + other.twist,
        })
    }

    /// `f^n`, matrix `A sigma^t(A) ... sigma^((n-1)t)(A)`.
    pub fn pow(&self, n: u32) -> SemilinearMap {
        let mut acc = SemilinearMap {
            matrix: WittMatrix::identity(self.ring(), self.dim()),
            twist: 0,
        };
        for _ in 0..n {
            acc = acc.compose(self).expect("shapes agree");
        }
        acc
    }

    /// Applies the map to a column vector.
    pub fn apply(&self, v: &[WittElement]) -> Result<Vec<WittElement>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch("vector length".into()));
        }
        let ring = self.ring();
        let sv: Vec<_> = v.iter().map(|x| x.frobenius_pow(self.twist)).collect();
        Ok((0..self.dim())
            .map(|i| {
                let mut acc = ring.zero();
                for (j, x) in sv.iter().enumerate() {
                    acc = &acc + &(&self.matrix.get(i, j) * x);
                }
                acc
            })
            .collect())
    }

    /// Smallest `k >= 1` with `sigma^(k t) = id` on the residue field.
    pub fn linearization_order(&self) -> u32 {
        let r = self.ring().r() as i64;
        let g = num_integer::gcd(self.twist.rem_euclid(r), r);
        (r / g.max(1)) as u32
    }

    /// Serializable form.
    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            p: self.ring().p(),
            r: self.ring().r(),
            m: self.ring().m(),
            twist: self.twist,
            entries: self.matrix.to_coeffs(),
        }
    }

    pub fn from_json(j: &MatrixJson) -> Result<Self> {
        let ring = witt_ring(j.p, j.r, j.m)?;
        let matrix = WittMatrix::from_coeffs(&ring, &j.entries)?;
        SemilinearMap::new(matrix, j.twist)
    }
}

/// JSON layout of a semilinear map: `entries[i][j]` lists the power-basis
/// coordinates `[c0, ..., c_{r-1}]` of the `(i, j)` entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub p: u64,
    pub r: usize,
    pub m: u32,
    #[serde(default = "default_twist")]
    pub twist: i64,
    pub entries: Vec<Vec<Vec<i64>>>,
}

fn default_twist() -> i64 {
    1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_is_associative() {
        let w = witt_ring(3, 2, 3).unwrap();
        let a = WittMatrix::from_coeffs(&w, &[vec![vec![1, 2], vec![0, 3]], vec![vec![5, 1], vec![2, 2]]]).unwrap();
        let b = WittMatrix::from_coeffs(&w, &[vec![vec![0, 1], vec![1, 1]], vec![vec![3, 0], vec![7, 4]]]).unwrap();
        let c = WittMatrix::from_coeffs(&w, &[vec![vec![2, 2], vec![1, 0]], vec![vec![0, 5], vec![1, 8]]]).unwrap();
        let f = SemilinearMap::new(a, 1).unwrap();
        let g = SemilinearMap::new(b, 1).unwrap();
        let h = SemilinearMap::new(c, 0).unwrap();
        let lhs = f.compose(&g).unwrap().compose(&h).unwrap();
        let rhs = f.compose(&g.compose(&h).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn power_matches_repeated_application() {
        let w = witt_ring(2, 2, 4).unwrap();
        let a = WittMatrix::from_coeffs(&w, &[vec![vec![1, 1], vec![2, 0]], vec![vec![0, 1], vec![3, 1]]]).unwrap();
        let f = SemilinearMap::new(a, 1).unwrap();
        let v = vec![w.element(&[1, 3]).unwrap(), w.element(&[2, 1]).unwrap()];
        let f3 = f.pow(3);
        assert_eq!(f3.twist(), 3);
        let direct = f.apply(&f.apply(&f.apply(&v).unwrap()).unwrap()).unwrap();
        assert_eq!(f3.apply(&v).unwrap(), direct);
    }

    #[test]
    fn json_round_trip() {
        let w = witt_ring(5, 1, 3).unwrap();
        let a = WittMatrix::from_ints(&w, &[vec![0, 5], vec![1, 0]]).unwrap();
        let f = SemilinearMap::new(a, 1).unwrap();
        let j = f.to_json();
        assert_eq!(SemilinearMap::from_json(&j).unwrap(), f);
    }

    #[test]
    fn rejects_non_square() {
        let w = witt_ring(2, 1, 2).unwrap();
        let a = WittMatrix::zeros(&w, 2, 3);
        assert!(SemilinearMap::new(a, 1).is_err());
    }
}
