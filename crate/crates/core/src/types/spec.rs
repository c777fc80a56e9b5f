//! Shimura types `(X, l, n, tau, eta)` and the invariants read off them.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::monomial::{circular_decomposition, MonomialCrystal, PDivTypeMultiset};
use crate::error::{Error, Result};
use crate::roots::{build_root_system, DiagramAutomorphism, LieType, RootSystem};
use crate::witt::{NewtonPolygon, Slope};

/// Unvalidated type data as it appears in JSON.
///
/// `eta[i]` is the minuscule node hit on factor `i + 1` (0 for none), in
/// fixed Bourbaki coordinates; `tau` is applied once when the Frobenius
/// wraps from factor `n` back to factor 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShimuraTypeSpec {
    pub lie_type: String,
    pub rank: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Vec<usize>>,
    pub eta: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
}

impl ShimuraTypeSpec {
    pub fn new(lie_type: &str, rank: usize, tau: Option<Vec<usize>>, eta: Vec<usize>) -> Self {
        ShimuraTypeSpec {
            lie_type: lie_type.to_string(),
            rank,
            n: eta.len(),
            tau,
            eta,
            p: None,
        }
    }
}

/// A validated type, normalized so that `eta_1 != 0`.
#[derive(Clone, Debug)]
pub struct ShimuraType {
    rs: Arc<RootSystem>,
    n: usize,
    tau: DiagramAutomorphism,
    e: usize,
    eta: Vec<usize>,
    rotation: usize,
    tau_roots: Vec<usize>,
}

/// Checks and normalizes a spec.
pub fn validate(spec: &ShimuraTypeSpec) -> Result<ShimuraType> {
    let lie_type = LieType::parse(&spec.lie_type, spec.rank)?;
    let rs = build_root_system(lie_type, spec.rank)?;
    ShimuraType::from_parts(Arc::new(rs), spec.tau.clone(), spec.eta.clone(), spec.n)
}

fn allowed_order(rs: &RootSystem, e: usize) -> bool {
    match e {
        1 => true,
        2 => matches!(rs.lie_type(), LieType::A if rs.rank() >= 2)
            || matches!(rs.lie_type(), LieType::D | LieType::E6),
        3 => rs.lie_type() == LieType::D && rs.rank() == 4,
        _ => false,
    }
}

impl ShimuraType {
    pub fn from_parts(rs: Arc<RootSystem>, tau: Option<Vec<usize>>, eta: Vec<usize>, n: usize) -> Result<Self> {
        if n == 0 || eta.len() != n {
            return Err(Error::DimensionMismatch(format!("n = {n} but {} eta entries", eta.len())));
        }
        let tau = match tau {
            Some(perm) => DiagramAutomorphism::new(&rs, perm)?,
            None => DiagramAutomorphism::identity(rs.rank()),
        };
        let e = tau.order();
        if !allowed_order(&rs, e) {
            return Err(Error::IllegalAutomorphismOrder { order: e, lie_type: rs.name() });
        }
        let minuscule = rs.minuscule_nodes();
        for &x in &eta {
            if x != 0 && !minuscule.contains(&x) {
                return Err(Error::IllegalEtaNode { node: x, lie_type: rs.name() });
            }
        }
        if eta.iter().all(|&x| x == 0) {
            return Err(Error::EmptyI1);
        }
        let tau_roots = tau.root_permutation(&rs);
        let mut t = ShimuraType {
            rs,
            n,
            tau,
            e,
            eta,
            rotation: 0,
            tau_roots,
        };
        while t.eta[0] == 0 {
            t = t.rotated();
        }
        Ok(t)
    }

    /// Re-indexes so that factor 2 becomes factor 1. The wrapped entry is
    /// conjugated by `tau^{-1}` so the crystal is unchanged up to relabeling.
    pub fn rotated(&self) -> ShimuraType {
        let inv = self.tau.power(self.e - 1);
        let mut eta: Vec<usize> = self.eta[1..].to_vec();
        let first = self.eta[0];
        eta.push(if first == 0 { 0 } else { inv.node(first) });
        ShimuraType {
            eta,
            rotation: self.rotation + 1,
            ..self.clone()
        }
    }

    /// Lexicographically least `eta` over all rotations with `eta_1 != 0`.
    pub fn canonical(&self) -> ShimuraType {
        let mut best = self.clone();
        let mut cur = self.clone();
        for _ in 0..self.e * self.n {
            cur = cur.rotated();
            if cur.eta[0] != 0 && cur.eta < best.eta {
                best = cur.clone();
            }
        }
        best.rotation = 0;
        best
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }
    pub fn root_system_arc(&self) -> Arc<RootSystem> {
        self.rs.clone()
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn e(&self) -> usize {
        self.e
    }
    pub fn tau(&self) -> &DiagramAutomorphism {
        &self.tau
    }
    pub fn eta(&self) -> &[usize] {
        &self.eta
    }
    /// Number of single-step rotations applied during normalization.
    pub fn rotation(&self) -> usize {
        self.rotation
    }

    pub fn to_spec(&self) -> ShimuraTypeSpec {
        ShimuraTypeSpec {
            lie_type: self.rs.lie_type().to_string(),
            rank: self.rs.rank(),
            n: self.n,
            tau: (!self.tau.is_identity()).then(|| self.tau.images().to_vec()),
            eta: self.eta.clone(),
            p: None,
        }
    }

    /// The `e n`-tuple: block `s` lists `tau^s(eta_i)`.
    pub fn en_tuple(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.e * self.n);
        for s in 0..self.e {
            let t = self.tau.power(s);
            out.extend(self.eta.iter().map(|&x| if x == 0 { 0 } else { t.node(x) }));
        }
        out
    }

    /// Factors (1-based) with a non-trivial cocharacter.
    pub fn i1(&self) -> Vec<usize> {
        (1..=self.n).filter(|&i| self.eta[i - 1] != 0).collect()
    }

    /// `|I_1| / n`.
    pub fn delta(&self) -> Slope {
        Ratio::new(self.i1().len() as i64, self.n as i64)
    }

    /// The node set `E` and its reduction `E~` (extremes only for type A).
    pub fn epsilon_sets(&self) -> (BTreeSet<usize>, BTreeSet<usize>) {
        let big: BTreeSet<usize> = self.en_tuple().into_iter().filter(|&x| x != 0).collect();
        let small = if self.rs.lie_type() == LieType::A {
            [*big.first().unwrap(), *big.last().unwrap()].into_iter().collect()
        } else {
            big.clone()
        };
        (big, small)
    }

    pub fn nilpotency_classes(&self) -> (usize, usize) {
        let (a, b) = self.epsilon_sets();
        (a.len(), b.len())
    }

    /// `n` times the number of positive roots positive at every node of `E~`.
    pub fn fshw_invariant(&self) -> usize {
        let (_, small) = self.epsilon_sets();
        self.n * self.rs.intersect_nilradicals(&small).expect("nodes are valid").len()
    }

    fn exponent(&self, root: usize, factor: usize) -> i64 {
        match self.eta[factor] {
            0 => 0,
            x => self.rs.coefficient(root, x),
        }
    }

    /// Label index of `(root, factor)` in the adjoint crystal (0-based factor).
    pub fn root_label(&self, root: usize, factor: usize) -> usize {
        factor * self.rs.num_roots() + root
    }

    /// Inverse of [`ShimuraType::root_label`]; `None` for Cartan labels.
    pub fn label_root(&self, label: usize) -> Option<(usize, usize)> {
        let nr = self.rs.num_roots();
        (label < self.n * nr).then(|| (label % nr, label / nr))
    }

    /// Root labels `(alpha, i)` stepping to `(alpha, i+1)` and wrapping
    /// through `tau`, followed by `n l` Cartan labels of exponent 0.
    pub fn adjoint_crystal(&self) -> MonomialCrystal {
        let nr = self.rs.num_roots();
        let l = self.rs.rank();
        let n = self.n;
        let total = n * (nr + l);
        let mut step = Vec::with_capacity(total);
        let mut exp = Vec::with_capacity(total);
        let mut labels = Vec::with_capacity(total);
        for i in 0..n {
            for a in 0..nr {
                step.push(if i + 1 < n {
                    self.root_label(a, i + 1)
                } else {
                    self.root_label(self.tau_roots[a], 0)
                });
                exp.push(self.exponent(a, i));
                labels.push(format!("{:?}_{}", self.rs.root(a), i + 1));
            }
        }
        let base = n * nr;
        for i in 0..n {
            for j in 1..=l {
                step.push(if i + 1 < n {
                    base + (i + 1) * l + (j - 1)
                } else {
                    base + self.tau.node(j) - 1
                });
                exp.push(0);
                labels.push(format!("h{j}_{}", i + 1));
            }
        }
        MonomialCrystal::new(step, exp)
            .and_then(|c| c.with_labels(labels))
            .expect("adjoint crystal is well formed")
    }

    pub fn adjoint_newton_polygon(&self) -> NewtonPolygon {
        self.adjoint_crystal().newton_polygon()
    }

    /// Positive roots with a positive coefficient at some node of `E`.
    pub fn positive_roots_of_e(&self) -> Vec<usize> {
        let (big, _) = self.epsilon_sets();
        (0..self.rs.num_positive())
            .filter(|&a| big.iter().any(|&x| self.rs.coefficient(a, x) >= 1))
            .collect()
    }

    /// Labels `(alpha, i)` with `alpha` in `Phi^+(E)`.
    pub fn positive_labels(&self) -> Vec<usize> {
        let roots = self.positive_roots_of_e();
        let mut out = Vec::with_capacity(roots.len() * self.n);
        for i in 0..self.n {
            out.extend(roots.iter().map(|&a| self.root_label(a, i)));
        }
        out
    }

    pub fn positive_crystal(&self) -> MonomialCrystal {
        self.adjoint_crystal()
            .restrict(&self.positive_labels())
            .expect("Phi^+(E) labels are stable")
    }

    /// Isomorphism type of the positive p-divisible group.
    pub fn positive_pdiv_type(&self) -> PDivTypeMultiset {
        circular_decomposition(&self.positive_crystal())
    }

    /// Mirror of the positive type: negated roots, complemented words.
    pub fn negative_pdiv_type(&self) -> PDivTypeMultiset {
        let labels: Vec<usize> = self
            .positive_labels()
            .into_iter()
            .map(|b| {
                let (a, i) = self.label_root(b).unwrap();
                self.root_label(self.rs.negate(a), i)
            })
            .collect();
        let neg = self.adjoint_crystal().restrict(&labels).expect("negated labels are stable");
        circular_decomposition(&neg.complement(0).complement(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn spec(t: &str, l: usize, tau: Option<Vec<usize>>, eta: Vec<usize>) -> Result<ShimuraType> {
        validate(&ShimuraTypeSpec::new(t, l, tau, eta))
    }

    fn r(a: i64, b: i64) -> Slope {
        Ratio::new(a, b)
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(spec("C", 3, None, vec![2]), Err(Error::IllegalEtaNode { node: 2, .. })));
        assert_eq!(spec("A", 2, None, vec![0, 0]).unwrap_err(), Error::EmptyI1);
        assert!(matches!(spec("E8", 8, None, vec![1]), Err(Error::UnsupportedType(_))));
        assert!(spec("B", 3, Some(vec![3, 2, 1]), vec![1]).is_err());
        assert!(spec("D", 4, Some(vec![3, 2, 4, 1]), vec![1]).is_ok());
    }

    #[test]
    fn rotation_puts_nonzero_first() {
        let t = spec("A", 2, Some(vec![2, 1]), vec![0, 1]).unwrap();
        assert_eq!(t.eta(), &[1, 0]);
        let t = spec("A", 3, Some(vec![3, 2, 1]), vec![0, 1]).unwrap();
        assert_eq!(t.eta(), &[1, 0]);
        // Rotation twice wraps eta_1 through tau^{-1}.
        let t = spec("A", 3, Some(vec![3, 2, 1]), vec![1, 2]).unwrap();
        assert_eq!(t.rotated().eta(), &[2, 3]);
        assert_eq!(t.adjoint_newton_polygon(), t.rotated().adjoint_newton_polygon());
    }

    #[test]
    fn en_tuple_of_twisted_a2() {
        let t = spec("A", 2, Some(vec![2, 1]), vec![1]).unwrap();
        assert_eq!(t.e(), 2);
        assert_eq!(t.en_tuple(), vec![1, 2]);
        let (big, small) = t.epsilon_sets();
        assert_eq!(big, [1, 2].into_iter().collect());
        assert_eq!(small, big);
    }

    #[test]
    fn twisted_a2_orbits() {
        let t = spec("A", 2, Some(vec![2, 1]), vec![1]).unwrap();
        let c = t.adjoint_crystal();
        assert_eq!(c.len(), 8);
        assert_eq!(
            t.adjoint_newton_polygon(),
            NewtonPolygon::new(vec![(r(-1, 1), 1), (r(-1, 2), 2), (r(0, 1), 2), (r(1, 2), 2), (r(1, 1), 1)])
        );
        let a12 = t.root_system().index_of(&[1, 1]).unwrap();
        let orbit = c.orbits().into_iter().find(|o| o.members.contains(&t.root_label(a12, 0))).unwrap();
        assert_eq!(orbit.word, vec![1]);
    }

    #[test]
    fn delta_values() {
        assert_eq!(spec("A", 3, None, vec![1, 2, 3]).unwrap().delta(), Slope::one());
        assert_eq!(spec("A", 1, None, vec![1, 0, 0, 0]).unwrap().delta(), r(1, 4));
    }

    #[test]
    fn fshw_matches_extreme_slope() {
        let t = spec("A", 3, None, vec![1, 2, 3]).unwrap();
        assert_eq!(t.fshw_invariant(), 3);
        assert_eq!(t.nilpotency_classes(), (3, 2));
        assert_eq!(t.adjoint_newton_polygon().multiplicity(-t.delta()), 3);
        let d = spec("D", 4, Some(vec![1, 2, 4, 3]), vec![3]).unwrap();
        assert_eq!(d.fshw_invariant(), 3);
        assert_eq!(spec("A", 1, None, vec![1]).unwrap().fshw_invariant(), 1);
    }

    #[test]
    fn canonical_form_is_rotation_invariant() {
        let t = spec("A", 4, None, vec![1, 3, 2, 4]).unwrap();
        let c = t.canonical();
        for k in 0..4 {
            let mut u = t.clone();
            for _ in 0..k {
                u = u.rotated();
            }
            if u.eta()[0] != 0 {
                assert_eq!(u.canonical().eta(), c.eta());
            }
        }
    }

    #[test]
    fn negative_type_is_dual_of_positive() {
        let t = spec("A", 3, None, vec![1, 2, 3]).unwrap();
        assert_eq!(t.negative_pdiv_type(), t.positive_pdiv_type().dual());
    }
}
