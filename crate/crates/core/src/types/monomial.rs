//! Monomial crystals: a basis permuted by Frobenius with `p`-power weights.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::witt::{word_slope, NewtonPolygon, SemilinearMap, Slope, WittMatrix, WittRingParams};

/// `phi(b) = p^{exp(b)} step(b)` on a finite basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCrystal")]
pub struct MonomialCrystal {
    step: Vec<usize>,
    exp: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    filt: Option<Vec<i64>>,
    /// Optional level grading: `(period, level of each label)`; the step
    /// raises the level by one modulo the period.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    grading: Option<(usize, Vec<usize>)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    labels: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCrystal {
    step: Vec<usize>,
    exp: Vec<i64>,
    #[serde(default)]
    filt: Option<Vec<i64>>,
    #[serde(default)]
    grading: Option<(usize, Vec<usize>)>,
    #[serde(default)]
    labels: Vec<String>,
}

impl TryFrom<RawCrystal> for MonomialCrystal {
    type Error = Error;
    fn try_from(raw: RawCrystal) -> Result<Self> {
        let mut c = MonomialCrystal::new(raw.step, raw.exp)?;
        if let Some(f) = raw.filt {
            c = c.with_filtration(f)?;
        }
        if let Some((period, levels)) = raw.grading {
            c = c.with_grading(period, levels)?;
        }
        if !raw.labels.is_empty() {
            c = c.with_labels(raw.labels)?;
        }
        Ok(c)
    }
}

/// One Frobenius orbit, listed in step order from its smallest label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub members: Vec<usize>,
    pub word: Vec<i64>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.members.len()
    }
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
    pub fn slope(&self) -> Slope {
        word_slope(&self.word)
    }
}

impl MonomialCrystal {
    pub fn new(step: Vec<usize>, exp: Vec<i64>) -> Result<Self> {
        if step.len() != exp.len() {
            return Err(Error::InvalidCrystal(format!(
                "{} step targets but {} exponents",
                step.len(),
                exp.len()
            )));
        }
        let mut hit = vec![false; step.len()];
        for &t in &step {
            if t >= step.len() || hit[t] {
                return Err(Error::InvalidCrystal("step is not a permutation".into()));
            }
            hit[t] = true;
        }
        Ok(MonomialCrystal {
            step,
            exp,
            filt: None,
            grading: None,
            labels: Vec::new(),
        })
    }

    /// A single cycle `0 -> 1 -> ... -> L-1 -> 0` carrying `word`.
    pub fn cycle(word: &[i64]) -> Self {
        let l = word.len();
        MonomialCrystal::new((0..l).map(|i| (i + 1) % l).collect(), word.to_vec()).expect("cycle")
    }

    /// Attaches Hodge filtration weights; for a monomial Dieudonne module
    /// the weight of a basis vector is its exponent.
    pub fn with_filtration(mut self, filt: Vec<i64>) -> Result<Self> {
        if filt.len() != self.len() {
            return Err(Error::InvalidCrystal("filtration length".into()));
        }
        if let Some(b) = (0..self.len()).find(|&b| filt[b] != self.exp[b]) {
            return Err(Error::InvalidCrystal(format!(
                "label {b} has exponent {} but filtration weight {}",
                self.exp[b], filt[b]
            )));
        }
        self.filt = Some(filt);
        Ok(self)
    }

    pub fn with_grading(mut self, period: usize, levels: Vec<usize>) -> Result<Self> {
        if levels.len() != self.len() || period == 0 {
            return Err(Error::InvalidCrystal("grading length".into()));
        }
        for b in 0..self.len() {
            if levels[b] >= period || levels[self.step[b]] != (levels[b] + 1) % period {
                return Err(Error::InvalidCrystal(format!("step at label {b} does not raise the level")));
            }
        }
        self.grading = Some((period, levels));
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::InvalidCrystal("label count".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.step.len()
    }
    pub fn is_empty(&self) -> bool {
        self.step.is_empty()
    }
    pub fn step(&self) -> &[usize] {
        &self.step
    }
    pub fn exponents(&self) -> &[i64] {
        &self.exp
    }
    pub fn filtration(&self) -> Option<&[i64]> {
        self.filt.as_deref()
    }
    pub fn grading(&self) -> Option<(usize, &[usize])> {
        self.grading.as_ref().map(|(p, l)| (*p, l.as_slice()))
    }
    pub fn label(&self, b: usize) -> String {
        self.labels.get(b).cloned().unwrap_or_else(|| format!("e{b}"))
    }

    pub fn orbits(&self) -> Vec<Orbit> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut members = Vec::new();
            let mut word = Vec::new();
            let mut b = start;
            while !seen[b] {
                seen[b] = true;
                members.push(b);
                word.push(self.exp[b]);
                b = self.step[b];
            }
            out.push(Orbit { members, word });
        }
        out
    }

    /// Newton polygon by the orbit formula: each orbit of length `L` and
    /// exponent sum `s` contributes slope `s/L` with multiplicity `L`.
    pub fn newton_polygon(&self) -> NewtonPolygon {
        NewtonPolygon::new(self.orbits().iter().map(|o| (o.slope(), o.len() as u32)))
    }

    /// Hodge polygon: the exponents themselves.
    pub fn hodge_polygon(&self) -> NewtonPolygon {
        NewtonPolygon::from_integers(self.exp.iter().copied())
    }

    /// Number of labels lying on orbits of total exponent zero.
    pub fn slope_zero_multiplicity(&self) -> usize {
        self.orbits()
            .iter()
            .filter(|o| o.word.iter().sum::<i64>() == 0)
            .map(|o| o.len())
            .sum()
    }

    /// Restriction to a step-stable subset of labels.
    pub fn restrict(&self, subset: &[usize]) -> Result<MonomialCrystal> {
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &b) in subset.iter().enumerate() {
            pos[b] = i;
        }
        let mut step = Vec::with_capacity(subset.len());
        for &b in subset {
            let t = pos[self.step[b]];
            if t == usize::MAX {
                return Err(Error::InvalidCrystal(format!("subset not stable at label {b}")));
            }
            step.push(t);
        }
        let exp = subset.iter().map(|&b| self.exp[b]).collect();
        let mut out = MonomialCrystal::new(step, exp)?;
        if let Some(f) = &self.filt {
            out.filt = Some(subset.iter().map(|&b| f[b]).collect());
        }
        if let Some((period, levels)) = &self.grading {
            out.grading = Some((*period, subset.iter().map(|&b| levels[b]).collect()));
        }
        if !self.labels.is_empty() {
            out.labels = subset.iter().map(|&b| self.labels[b].clone()).collect();
        }
        Ok(out)
    }

    /// Exponents replaced by `shift - exp` (dual up to a Tate twist).
    pub fn complement(&self, shift: i64) -> MonomialCrystal {
        let mut out = self.clone();
        out.exp = self.exp.iter().map(|e| shift - e).collect();
        out.filt = self.filt.as_ref().map(|_| out.exp.clone());
        out
    }

    /// Monomial `sigma`-linear lift: column `b` is `p^{exp(b)} e_{step(b)}`.
    pub fn to_semilinear_map(&self, ring: &WittRingParams) -> Result<SemilinearMap> {
        if let Some(b) = (0..self.len()).find(|&b| self.exp[b] < 0) {
            return Err(Error::InvalidCrystal(format!("negative exponent at label {b}")));
        }
        let exps: Vec<u32> = self.exp.iter().map(|&e| e as u32).collect();
        SemilinearMap::new(WittMatrix::monomial(ring, &self.step, &exps)?, 1)
    }
}

/// Smallest period `d | len` of a cyclic word.
pub fn minimal_period(word: &[i64]) -> usize {
    let l = word.len();
    (1..=l)
        .find(|&d| l.is_multiple_of(d) && (0..l).all(|i| word[i] == word[(i + d) % l]))
        .unwrap_or(l)
}

pub fn is_aperiodic(word: &[i64]) -> bool {
    !word.is_empty() && minimal_period(word) == word.len()
}

/// Lexicographically greatest rotation, used as the canonical representative.
pub fn canonical_rotation(word: &[i64]) -> Vec<i64> {
    let l = word.len();
    (0..l)
        .map(|s| (0..l).map(|i| word[(i + s) % l]).collect::<Vec<_>>())
        .max()
        .unwrap_or_default()
}

/// Circular indecomposable: an aperiodic exponent word up to rotation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CircularIndecomposable {
    word: Vec<i64>,
}

impl CircularIndecomposable {
    pub fn new(word: &[i64]) -> Result<Self> {
        if !is_aperiodic(word) {
            return Err(Error::InvalidCrystal(format!("word {word:?} is periodic")));
        }
        Ok(CircularIndecomposable {
            word: canonical_rotation(word),
        })
    }

    pub fn word(&self) -> &[i64] {
        &self.word
    }
    pub fn rank(&self) -> usize {
        self.word.len()
    }
    /// Sum of the word; the dimension when the word is 0/1-valued.
    pub fn dimension(&self) -> i64 {
        self.word.iter().sum()
    }
    pub fn slope(&self) -> Slope {
        word_slope(&self.word)
    }

    fn is_binary(&self) -> bool {
        self.word.iter().all(|&c| c == 0 || c == 1)
    }

    /// `mu`, `et`, `D_{1/3}`, `D_{2,4}`, or `D[1,1,0,1,0]` when the rank and
    /// dimension do not pin down the word.
    pub fn name(&self) -> String {
        let w = &self.word;
        if !self.is_binary() {
            return format!("C{w:?}");
        }
        let d = w.len() as i64;
        let s = self.dimension();
        match (d, s) {
            (1, 1) => "mu".into(),
            (1, 0) => "et".into(),
            _ if s == 1 || s == d - 1 => format!("D_{{{s}/{d}}}"),
            _ if aperiodic_necklaces(d as u64, s as u64) == 1 => format!("D_{{{s},{d}}}"),
            _ => {
                let bits: String = w.iter().map(|c| c.to_string()).collect();
                format!("D[{bits}]")
            }
        }
    }
}

impl fmt::Debug for CircularIndecomposable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn mobius(mut n: u64) -> i64 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Number of aperiodic binary necklaces with `d` beads, `s` of them set.
pub fn aperiodic_necklaces(d: u64, s: u64) -> u64 {
    let g = num_integer::gcd(d, s);
    let total: i64 = (1..=g)
        .filter(|k| g.is_multiple_of(*k))
        .map(|k| mobius(k) * binomial(d / k, s / k) as i64)
        .sum();
    (total / d as i64) as u64
}

/// Multiset of circular indecomposables.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct PDivTypeMultiset {
    parts: BTreeMap<CircularIndecomposable, usize>,
}

impl PDivTypeMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, c: CircularIndecomposable, copies: usize) {
        if copies > 0 {
            *self.parts.entry(c).or_default() += copies;
        }
    }

    pub fn from_words(words: &[(&[i64], usize)]) -> Result<Self> {
        let mut out = Self::new();
        for (w, k) in words {
            out.insert(CircularIndecomposable::new(w)?, *k);
        }
        Ok(out)
    }

    pub fn parts(&self) -> impl Iterator<Item = (&CircularIndecomposable, usize)> {
        self.parts.iter().map(|(c, &k)| (c, k))
    }

    pub fn count(&self, word: &[i64]) -> usize {
        CircularIndecomposable::new(word)
            .ok()
            .and_then(|c| self.parts.get(&c).copied())
            .unwrap_or(0)
    }

    /// Copies of the indecomposables with the given name.
    pub fn count_named(&self, name: &str) -> usize {
        self.parts.iter().filter(|(c, _)| c.name() == name).map(|(_, &k)| k).sum()
    }

    pub fn height(&self) -> usize {
        self.parts.iter().map(|(c, k)| c.rank() * k).sum()
    }

    pub fn dimension(&self) -> i64 {
        self.parts.iter().map(|(c, &k)| c.dimension() * k as i64).sum()
    }

    pub fn newton_polygon(&self) -> NewtonPolygon {
        NewtonPolygon::new(self.parts.iter().map(|(c, &k)| (c.slope(), (c.rank() * k) as u32)))
    }

    /// Word complement `1 - w` on every part.
    pub fn dual(&self) -> PDivTypeMultiset {
        let mut out = Self::new();
        for (c, &k) in &self.parts {
            let w: Vec<i64> = c.word.iter().map(|x| 1 - x).collect();
            out.insert(CircularIndecomposable::new(&w).expect("complement stays aperiodic"), k);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.parts.values().sum()
    }
    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

impl fmt::Display for PDivTypeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("0");
        }
        // Larger slopes first, matching the usual way of writing these sums.
        let mut items: Vec<_> = self.parts.iter().collect();
        items.sort_by(|a, b| b.0.slope().cmp(&a.0.slope()).then(b.0.cmp(a.0)));
        for (i, (c, k)) in items.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if **k == 1 {
                write!(f, "{}", c.name())?;
            } else {
                write!(f, "{}^{}", c.name(), k)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PDivTypeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Per orbit of length `L` whose word has minimal period `d`, `L/d` copies
/// of the rank-`d` aperiodic word.
pub fn circular_decomposition(mc: &MonomialCrystal) -> PDivTypeMultiset {
    let mut out = PDivTypeMultiset::new();
    for o in mc.orbits() {
        let d = minimal_period(&o.word);
        let c = CircularIndecomposable::new(&o.word[..d]).expect("prefix of minimal period is aperiodic");
        out.insert(c, o.len() / d);
    }
    out
}

/// Serializable view of a multiset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartJson {
    pub name: String,
    pub word: Vec<i64>,
    pub slope: String,
    pub copies: usize,
}

impl PDivTypeMultiset {
    pub fn to_json(&self) -> Vec<PartJson> {
        let mut items: Vec<_> = self.parts.iter().collect();
        items.sort_by(|a, b| b.0.slope().cmp(&a.0.slope()).then(b.0.cmp(a.0)));
        items
            .into_iter()
            .map(|(c, &k)| PartJson {
                name: c.name(),
                word: c.word.clone(),
                slope: crate::witt::format_slope(&c.slope()),
                copies: k,
            })
            .collect()
    }
}
