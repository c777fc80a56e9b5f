//! Orbit decomposition of the positive unipotent part and its duality data.

use std::collections::BTreeSet;

use num_rational::Ratio;
use serde::Serialize;

use super::spec::ShimuraType;
use crate::witt::{p_valuation, Slope};

/// One summand `u_j`: a Frobenius orbit of root labels in `Phi^+(E)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitPiece {
    /// Root indices forming one `tau`-orbit.
    pub roots: Vec<usize>,
    /// Root coordinates, same order as `roots`.
    pub coords: Vec<Vec<i64>>,
    /// `sum_{x in E} c_x`, constant on the orbit.
    pub a: i64,
    /// 2 when two roots of the orbit add to a root.
    pub kind: u8,
    /// For kind 2, the piece holding those sums.
    pub partner: Option<usize>,
    /// Label indices in the adjoint crystal, in Frobenius order.
    pub labels: Vec<usize>,
    pub word: Vec<i64>,
    #[serde(serialize_with = "crate::witt::serialize_slope")]
    pub slope: Slope,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitDecomposition {
    pub pieces: Vec<OrbitPiece>,
    /// `(j1, j2, j3)` with `j1 <= j2` and a root of `j1` plus a root of `j2`
    /// landing in `j3`.
    pub j3: Vec<(usize, usize, usize)>,
}

impl OrbitDecomposition {
    pub fn len(&self) -> usize {
        self.pieces.len()
    }
    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }
    /// Index of the piece containing a root.
    pub fn piece_of(&self, root: usize) -> Option<usize> {
        self.pieces.iter().position(|p| p.roots.contains(&root))
    }
    /// Sizes `(singletons, pairs)` of the root orbits, the common case.
    pub fn orbit_size_counts(&self) -> (usize, usize) {
        let one = self.pieces.iter().filter(|p| p.roots.len() == 1).count();
        let two = self.pieces.iter().filter(|p| p.roots.len() == 2).count();
        (one, two)
    }
}

/// Splits `Phi^+(E)` into `tau`-orbits, orders them by descending `a` and
/// records which pairs of pieces bracket into a third.
pub fn minimal_decomposition(t: &ShimuraType) -> OrbitDecomposition {
    let rs = t.root_system();
    let (big, _) = t.epsilon_sets();
    let tau = t.tau().root_permutation(rs);
    let crystal = t.adjoint_crystal();
    let orbits = crystal.orbits();

    let mut seen = BTreeSet::new();
    let mut raw = Vec::new();
    for a in t.positive_roots_of_e() {
        if seen.contains(&a) {
            continue;
        }
        let mut roots = vec![a];
        let mut x = tau[a];
        while x != a {
            roots.push(x);
            x = tau[x];
        }
        seen.extend(roots.iter().copied());
        roots.sort_unstable();
        let weight: i64 = big.iter().map(|&node| rs.coefficient(a, node)).sum();
        let start = t.root_label(a, 0);
        let orbit = orbits.iter().find(|o| o.members.contains(&start)).expect("label lies on an orbit");
        let mut coords: Vec<Vec<i64>> = roots.iter().map(|&r| rs.root(r).to_vec()).collect();
        coords.sort();
        raw.push(OrbitPiece {
            roots,
            coords,
            a: weight,
            kind: 1,
            partner: None,
            labels: orbit.members.clone(),
            word: orbit.word.clone(),
            slope: Ratio::new(orbit.word.iter().sum(), orbit.word.len() as i64),
        });
    }
    raw.sort_by(|x, y| y.a.cmp(&x.a).then_with(|| x.coords.cmp(&y.coords)));

    let mut root_piece = vec![usize::MAX; rs.num_roots()];
    for (j, p) in raw.iter().enumerate() {
        for &r in &p.roots {
            root_piece[r] = j;
        }
    }
    let mut j3 = BTreeSet::new();
    for j1 in 0..raw.len() {
        for j2 in j1..raw.len() {
            for &x in &raw[j1].roots {
                for &y in &raw[j2].roots {
                    if let Some(s) = rs.sum_index(x, y) {
                        let j = root_piece[s];
                        debug_assert!(j != usize::MAX, "sums of E-positive roots stay E-positive");
                        j3.insert((j1, j2, j));
                    }
                }
            }
        }
    }
    for &(j1, j2, j) in &j3 {
        if j1 == j2 {
            raw[j1].kind = 2;
            raw[j1].partner = Some(j);
        }
    }
    OrbitDecomposition {
        pieces: raw,
        j3: j3.into_iter().collect(),
    }
}

/// `n_j = v_p` of the Killing pairing `(e_alpha, e_{-alpha})` for each piece.
pub fn duality_exponents(t: &ShimuraType, p: u64) -> Vec<u32> {
    let rs = t.root_system();
    minimal_decomposition(t)
        .pieces
        .iter()
        .map(|piece| p_valuation(p, rs.killing_pairing(piece.roots[0])).expect("Killing pairing is nonzero"))
        .collect()
}
