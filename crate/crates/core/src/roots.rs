//! Reduced root systems of types A-E7 in Bourbaki numbering, their Weyl
//! groups and diagram automorphisms, and nilradical bookkeeping.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LieType {
    A,
    B,
    C,
    D,
    E6,
    E7,
}

impl LieType {
    /// Parses `"A"`..`"D"`, `"E6"`, `"E7"`; `"E"` needs the rank to decide.
    pub fn parse(name: &str, rank: usize) -> Result<LieType> {
        match name.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(LieType::A),
            "B" => Ok(LieType::B),
            "C" => Ok(LieType::C),
            "D" => Ok(LieType::D),
            "E6" => Ok(LieType::E6),
            "E7" => Ok(LieType::E7),
            "E" if rank == 6 => Ok(LieType::E6),
            "E" if rank == 7 => Ok(LieType::E7),
            _ => Err(Error::UnsupportedType(name.trim().to_string())),
        }
    }

    pub fn letter(self) -> &'static str {
        match self {
            LieType::A => "A",
            LieType::B => "B",
            LieType::C => "C",
            LieType::D => "D",
            LieType::E6 | LieType::E7 => "E",
        }
    }
}

impl FromStr for LieType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        LieType::parse(s, 0)
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LieType::E6 => "E6",
            LieType::E7 => "E7",
            other => other.letter(),
        };
        f.write_str(s)
    }
}

/// Root system in simple-root coordinates.
///
/// Indices `0..N` are the positive roots sorted by height, `N..2N` their
/// negatives in the same order.
#[derive(Clone)]
pub struct RootSystem {
    lie_type: LieType,
    rank: usize,
    /// Symmetric form on simple roots, scaled to be integral.
    form: Vec<Vec<i64>>,
    roots: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
}

impl fmt::Debug for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootSystem({}{}, {} roots)", self.lie_type.letter(), self.rank, self.roots.len())
    }
}

fn symmetric_form(ty: LieType, l: usize) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; l]; l];
    let edge = |g: &mut Vec<Vec<i64>>, a: usize, b: usize, v: i64| {
        g[a - 1][b - 1] = v;
        g[b - 1][a - 1] = v;
    };
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = 2;
    }
    match ty {
        LieType::A => {
            for i in 1..l {
                edge(&mut g, i, i + 1, -1);
            }
        }
        LieType::B => {
            for i in 1..l {
                edge(&mut g, i, i + 1, -1);
            }
            g[l - 1][l - 1] = 1;
        }
        LieType::C => {
            for i in 1..l.saturating_sub(1) {
                edge(&mut g, i, i + 1, -1);
            }
            g[l - 1][l - 1] = 4;
            edge(&mut g, l - 1, l, -2);
        }
        LieType::D => {
            for i in 1..l - 1 {
                edge(&mut g, i, i + 1, -1);
            }
            edge(&mut g, l - 2, l, -1);
        }
        LieType::E6 | LieType::E7 => {
            edge(&mut g, 1, 3, -1);
            edge(&mut g, 2, 4, -1);
            for i in 3..l {
                edge(&mut g, i, i + 1, -1);
            }
        }
    }
    g
}

/// Builds the root system of `(lie_type, rank)`.
pub fn build_root_system(lie_type: LieType, rank: usize) -> Result<RootSystem> {
    let ok = match lie_type {
        LieType::A | LieType::B => rank >= 1,
        LieType::C => rank >= 3,
        LieType::D => rank >= 4,
        LieType::E6 => rank == 6,
        LieType::E7 => rank == 7,
    };
    if !ok {
        return Err(Error::UnsupportedType(format!("{}{rank}", lie_type.letter())));
    }
    let form = symmetric_form(lie_type, rank);
    let l = rank;

    // Grow positive roots by height using alpha_i-strings.
    let mut positive: Vec<Vec<i64>> = Vec::new();
    let mut known: HashSet<Vec<i64>> = HashSet::new();
    let mut layer: Vec<Vec<i64>> = (0..l)
        .map(|i| {
            let mut v = vec![0; l];
            v[i] = 1;
            v
        })
        .collect();
    while !layer.is_empty() {
        layer.sort();
        for v in &layer {
            known.insert(v.clone());
        }
        let mut next: BTreeSet<Vec<i64>> = BTreeSet::new();
        for beta in &layer {
            for i in 0..l {
                let mut down = beta.clone();
                let mut r = 0;
                loop {
                    down[i] -= 1;
                    if known.contains(&down) {
                        r += 1;
                    } else {
                        break;
                    }
                }
                let pairing: i64 = (0..l).map(|j| beta[j] * form[j][i]).sum::<i64>() * 2 / form[i][i];
                let q = r - pairing;
                if q > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    next.insert(up);
                }
            }
        }
        positive.append(&mut layer);
        layer = next.into_iter().collect();
    }

    let mut roots = positive.clone();
    roots.extend(positive.iter().map(|v| v.iter().map(|c| -c).collect::<Vec<_>>()));
    let index = roots.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
    Ok(RootSystem {
        lie_type,
        rank,
        form,
        roots,
        index,
    })
}

impl RootSystem {
    pub fn lie_type(&self) -> LieType {
        self.lie_type
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn name(&self) -> String {
        format!("{}{}", self.lie_type.letter(), self.rank)
    }

    /// All roots, positives first.
    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }
    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }
    pub fn num_positive(&self) -> usize {
        self.roots.len() / 2
    }
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.roots[..self.num_positive()]
    }
    pub fn root(&self, idx: usize) -> &[i64] {
        &self.roots[idx]
    }
    pub fn is_positive(&self, idx: usize) -> bool {
        idx < self.num_positive()
    }
    pub fn index_of(&self, coords: &[i64]) -> Option<usize> {
        self.index.get(coords).copied()
    }
    pub fn negate(&self, idx: usize) -> usize {
        let n = self.num_positive();
        if idx < n {
            idx + n
        } else {
            idx - n
        }
    }
    /// Index of the simple root `alpha_node` (1-based node).
    pub fn simple_root(&self, node: usize) -> usize {
        let mut v = vec![0; self.rank];
        v[node - 1] = 1;
        self.index[&v]
    }
    pub fn height(&self, idx: usize) -> i64 {
        self.roots[idx].iter().sum()
    }
    /// Coefficient of `alpha_node` in the root (1-based node).
    pub fn coefficient(&self, idx: usize, node: usize) -> i64 {
        self.roots[idx][node - 1]
    }
    pub fn highest_root(&self) -> &[i64] {
        &self.roots[self.num_positive() - 1]
    }
    pub fn form(&self) -> &[Vec<i64>] {
        &self.form
    }

    pub fn inner(&self, a: &[i64], b: &[i64]) -> i64 {
        a.iter()
            .zip(&self.form)
            .filter(|(&ai, _)| ai != 0)
            .map(|(&ai, row)| ai * row.iter().zip(b).map(|(f, bj)| f * bj).sum::<i64>())
            .sum()
    }

    /// Squared length in the integral normalization of the form.
    pub fn length2(&self, idx: usize) -> i64 {
        let v = &self.roots[idx];
        self.inner(v, v)
    }

    /// `<beta, alpha^vee> = 2 (beta, alpha) / (alpha, alpha)`.
    pub fn cartan_pairing(&self, beta: usize, alpha: usize) -> i64 {
        2 * self.inner(&self.roots[beta], &self.roots[alpha]) / self.length2(alpha)
    }

    /// Index of `a + b` when it is a root.
    pub fn sum_index(&self, a: usize, b: usize) -> Option<usize> {
        let v: Vec<i64> = self.roots[a].iter().zip(&self.roots[b]).map(|(x, y)| x + y).collect();
        self.index_of(&v)
    }

    fn check_node(&self, node: usize) -> Result<()> {
        if node == 0 || node > self.rank {
            Err(Error::NodeOutOfRange { node, rank: self.rank })
        } else {
            Ok(())
        }
    }

    /// Simple reflection `s_node` as a permutation of root indices.
    pub fn reflection_table(&self, node: usize) -> Vec<usize> {
        let a = self.simple_root(node);
        (0..self.num_roots())
            .map(|b| {
                let c = self.cartan_pairing(b, a);
                let mut v = self.roots[b].clone();
                v[node - 1] -= c;
                self.index[&v]
            })
            .collect()
    }

    /// Nodes whose coefficient in the highest root is 1.
    pub fn minuscule_nodes(&self) -> BTreeSet<usize> {
        self.highest_root()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 1)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Positive roots with positive `alpha_x` coefficient.
    pub fn nilradical_roots(&self, x: usize) -> Result<Vec<usize>> {
        self.check_node(x)?;
        Ok((0..self.num_positive()).filter(|&i| self.coefficient(i, x) >= 1).collect())
    }

    /// Positive roots whose coefficient is positive at every node listed.
    pub fn intersect_nilradicals(&self, nodes: &BTreeSet<usize>) -> Result<Vec<usize>> {
        for &x in nodes {
            self.check_node(x)?;
        }
        if nodes.is_empty() {
            return Err(Error::InvalidCrystal("empty node set".into()));
        }
        Ok((0..self.num_positive())
            .filter(|&i| nodes.iter().all(|&x| self.coefficient(i, x) >= 1))
            .collect())
    }

    /// Dimension of the projection of `w(n_y)` onto `n_x` along the
    /// parabolic `p_x`: the number of roots of `w(n_y)` with negative
    /// `alpha_x` coefficient, where `n_y` is spanned by negated nilradical roots.
    pub fn projection_dim(&self, x: usize, w: &WeylElement, y: usize) -> Result<usize> {
        self.check_node(x)?;
        let ny = self.nilradical_roots(y)?;
        Ok(ny
            .into_iter()
            .map(|a| w.apply(self, self.negate(a)))
            .filter(|&b| self.coefficient(b, x) <= -1)
            .count())
    }

    /// `Tr(ad e_alpha ad e_{-alpha})` on the Chevalley lattice.
    ///
    /// On `g_beta` with `beta != +-alpha` the composite acts by `r (q + 1)`
    /// where `beta - r alpha, ..., beta + q alpha` is the alpha-string; the
    /// Cartan part and `g_alpha` contribute 2 each, `g_{-alpha}` nothing.
    pub fn killing_pairing(&self, alpha: usize) -> i64 {
        let a = &self.roots[alpha];
        let neg = self.negate(alpha);
        let mut total = 4;
        for b in 0..self.num_roots() {
            if b == alpha || b == neg {
                continue;
            }
            let beta = &self.roots[b];
            let step = |k: i64| -> bool {
                let v: Vec<i64> = beta.iter().zip(a).map(|(x, y)| x + k * y).collect();
                self.index.contains_key(&v)
            };
            let mut r = 0;
            while step(-(r + 1)) {
                r += 1;
            }
            let mut q = 0;
            while step(q + 1) {
                q += 1;
            }
            total += r * (q + 1);
        }
        total
    }

    /// Epsilon coordinates for B, C, D (standard realization).
    pub fn to_epsilon(&self, coords: &[i64]) -> Option<Vec<i64>> {
        let l = self.rank;
        let c = |i: usize| if i == 0 { 0 } else { coords[i - 1] };
        match self.lie_type {
            LieType::B => Some((1..=l).map(|i| c(i) - c(i - 1)).collect()),
            LieType::C => Some(
                (1..=l)
                    .map(|i| if i == l { 2 * c(l) - c(l - 1) } else { c(i) - c(i - 1) })
                    .collect(),
            ),
            LieType::D => Some(
                (1..=l)
                    .map(|i| {
                        if i == l - 1 {
                            c(l - 1) + c(l) - c(l - 2)
                        } else if i == l {
                            c(l) - c(l - 1)
                        } else {
                            c(i) - c(i - 1)
                        }
                    })
                    .collect(),
            ),
            _ => None,
        }
    }

    /// Inverse of [`RootSystem::to_epsilon`]; `None` if not integral.
    pub fn from_epsilon(&self, eps: &[i64]) -> Option<Vec<i64>> {
        let l = self.rank;
        let mut c = vec![0i64; l];
        let mut acc = 0;
        match self.lie_type {
            LieType::B => {
                for i in 0..l {
                    acc += eps[i];
                    c[i] = acc;
                }
            }
            LieType::C => {
                for i in 0..l - 1 {
                    acc += eps[i];
                    c[i] = acc;
                }
                let t = eps[l - 1] + acc;
                if t % 2 != 0 {
                    return None;
                }
                c[l - 1] = t / 2;
            }
            LieType::D => {
                for i in 0..l - 2 {
                    acc += eps[i];
                    c[i] = acc;
                }
                let s = eps[l - 2] + acc;
                if (s + eps[l - 1]) % 2 != 0 {
                    return None;
                }
                c[l - 1] = (s + eps[l - 1]) / 2;
                c[l - 2] = (s - eps[l - 1]) / 2;
            }
            _ => return None,
        }
        Some(c)
    }

    /// Diagram automorphisms: the identity plus the classical symmetries.
    pub fn diagram_automorphisms(&self) -> Vec<DiagramAutomorphism> {
        let l = self.rank;
        let id: Vec<usize> = (1..=l).collect();
        let mut perms = vec![id.clone()];
        match self.lie_type {
            LieType::A if l >= 2 => perms.push((1..=l).rev().collect()),
            LieType::D if l == 4 => {
                for p in [[1, 2, 4, 3], [3, 2, 1, 4], [4, 2, 3, 1], [3, 2, 4, 1], [4, 2, 1, 3]] {
                    perms.push(p.to_vec());
                }
            }
            LieType::D => {
                let mut p = id.clone();
                p.swap(l - 2, l - 1);
                perms.push(p);
            }
            LieType::E6 => perms.push(vec![6, 2, 5, 4, 3, 1]),
            _ => {}
        }
        perms
            .into_iter()
            .map(|p| DiagramAutomorphism::new(self, p).expect("classical symmetry"))
            .collect()
    }
}

/// Permutation of the nodes preserving the Dynkin diagram.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiagramAutomorphism {
    /// `perm[i - 1]` is the image of node `i`.
    perm: Vec<usize>,
}

impl DiagramAutomorphism {
    pub fn new(rs: &RootSystem, perm: Vec<usize>) -> Result<Self> {
        let l = rs.rank();
        let mut seen = vec![false; l + 1];
        if perm.len() != l {
            return Err(Error::InvalidAutomorphism(format!("expected {l} images, got {}", perm.len())));
        }
        for &x in &perm {
            if x == 0 || x > l || seen[x] {
                return Err(Error::InvalidAutomorphism(format!("{perm:?} is not a permutation of 1..{l}")));
            }
            seen[x] = true;
        }
        let f = rs.form();
        for i in 0..l {
            for j in 0..l {
                if f[perm[i] - 1][perm[j] - 1] != f[i][j] {
                    return Err(Error::InvalidAutomorphism(format!("{perm:?} does not preserve the diagram")));
                }
            }
        }
        Ok(DiagramAutomorphism { perm })
    }

    pub fn identity(rank: usize) -> Self {
        DiagramAutomorphism {
            perm: (1..=rank).collect(),
        }
    }

    pub fn images(&self) -> &[usize] {
        &self.perm
    }

    pub fn node(&self, x: usize) -> usize {
        self.perm[x - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &x)| x == i + 1)
    }

    pub fn order(&self) -> usize {
        let mut k = 1;
        let mut cur = self.clone();
        while !cur.is_identity() {
            cur = cur.compose(self);
            k += 1;
        }
        k
    }

    /// `self o other`.
    pub fn compose(&self, other: &DiagramAutomorphism) -> DiagramAutomorphism {
        DiagramAutomorphism {
            perm: other.perm.iter().map(|&x| self.perm[x - 1]).collect(),
        }
    }

    pub fn power(&self, k: usize) -> DiagramAutomorphism {
        let mut cur = DiagramAutomorphism::identity(self.perm.len());
        for _ in 0..k {
            cur = cur.compose(self);
        }
        cur
    }

    /// Image of a root given in simple coordinates.
    pub fn apply_coords(&self, coords: &[i64]) -> Vec<i64> {
        let mut out = vec![0; coords.len()];
        for (i, &c) in coords.iter().enumerate() {
            out[self.perm[i] - 1] = c;
        }
        out
    }

    /// Action on root indices.
    pub fn root_permutation(&self, rs: &RootSystem) -> Vec<usize> {
        (0..rs.num_roots())
            .map(|i| rs.index_of(&self.apply_coords(rs.root(i))).expect("automorphism permutes roots"))
            .collect()
    }
}

/// Weyl group element, recorded by the images of the simple roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    images: Vec<u16>,
}

impl WeylElement {
    pub fn identity(rs: &RootSystem) -> Self {
        WeylElement {
            images: (1..=rs.rank()).map(|i| rs.simple_root(i) as u16).collect(),
        }
    }

    /// Product of simple reflections `s_{word[0]} ... s_{word[k-1]}`.
    pub fn from_word(rs: &RootSystem, word: &[usize]) -> Result<Self> {
        let mut w = WeylElement::identity(rs);
        for &i in word.iter().rev() {
            rs.check_node(i)?;
            let t = rs.reflection_table(i);
            w = w.left_multiply(&t);
        }
        Ok(w)
    }

    fn left_multiply(&self, table: &[usize]) -> WeylElement {
        WeylElement {
            images: self.images.iter().map(|&b| table[b as usize] as u16).collect(),
        }
    }

    pub fn simple_images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&b| b as usize)
    }

    /// Coordinates of `w(beta)` by linearity.
    pub fn apply_coords(&self, rs: &RootSystem, coords: &[i64]) -> Vec<i64> {
        let mut out = vec![0; rs.rank()];
        for (i, &c) in coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, x) in out.iter_mut().zip(rs.root(self.images[i] as usize)) {
                *o += c * x;
            }
        }
        out
    }

    pub fn apply(&self, rs: &RootSystem, idx: usize) -> usize {
        rs.index_of(&self.apply_coords(rs, rs.root(idx))).expect("Weyl elements permute roots")
    }

    /// `self o other`.
    pub fn compose(&self, rs: &RootSystem, other: &WeylElement) -> WeylElement {
        WeylElement {
            images: other.images.iter().map(|&b| self.apply(rs, b as usize) as u16).collect(),
        }
    }

    /// Number of positive roots sent to negative roots.
    pub fn length(&self, rs: &RootSystem) -> usize {
        (0..rs.num_positive()).filter(|&i| !rs.is_positive(self.apply(rs, i))).count()
    }
}

/// `|W|` from the degrees of the basic invariants.
pub fn weyl_group_order(lie_type: LieType, rank: usize) -> u64 {
    let l = rank as u64;
    let degrees: Vec<u64> = match lie_type {
        LieType::A => (2..=l + 1).collect(),
        LieType::B | LieType::C => (1..=l).map(|i| 2 * i).collect(),
        LieType::D => (1..l).map(|i| 2 * i).chain(std::iter::once(l)).collect(),
        LieType::E6 => vec![2, 5, 6, 8, 9, 12],
        LieType::E7 => vec![2, 6, 8, 10, 12, 14, 18],
    };
    degrees.iter().product()
}

pub const DEFAULT_WEYL_BOUND: u64 = 1_000_000;

/// All Weyl group elements, by breadth-first closure under simple reflections.
pub fn weyl_elements(rs: &RootSystem, bound: u64) -> Result<Vec<WeylElement>> {
    let order = weyl_group_order(rs.lie_type(), rs.rank());
    if order > bound {
        return Err(Error::EnumerationBoundExceeded { order, bound });
    }
    let tables: Vec<Vec<usize>> = (1..=rs.rank()).map(|i| rs.reflection_table(i)).collect();
    let start = WeylElement::identity(rs);
    let mut seen: HashSet<WeylElement> = HashSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(w) = queue.pop_front() {
        for t in &tables {
            let v = w.left_multiply(t);
            if seen.insert(v.clone()) {
                queue.push_back(v);
            }
        }
        out.push(w);
    }
    Ok(out)
}
