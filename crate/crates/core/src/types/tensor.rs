//! Tensor products of monomial crystals and p-ranks of weight crystals.

use std::collections::BTreeMap;

use super::monomial::{binomial, MonomialCrystal};
use crate::error::{Error, Result};

/// A graded crystal whose Frobenius only moves the level: label
/// `s * fiber + b` steps to `((s + 1) mod period) * fiber + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedFactor {
    fiber: usize,
    period: usize,
    exp: Vec<i64>,
}

impl GradedFactor {
    pub fn new(fiber: usize, period: usize, exp: impl Fn(usize, usize) -> i64) -> Self {
        assert!(fiber > 0 && period > 0);
        let mut e = Vec::with_capacity(fiber * period);
        for s in 0..period {
            e.extend((0..fiber).map(|b| exp(b, s)));
        }
        GradedFactor { fiber, period, exp: e }
    }

    pub fn fiber(&self) -> usize {
        self.fiber
    }
    pub fn period(&self) -> usize {
        self.period
    }
    pub fn exponent(&self, b: usize, s: usize) -> i64 {
        self.exp[s * self.fiber + b]
    }

    /// Total exponent collected by fiber element `b` over one period.
    pub fn fiber_weight(&self, b: usize) -> i64 {
        (0..self.period).map(|s| self.exponent(b, s)).sum()
    }

    pub fn to_crystal(&self) -> MonomialCrystal {
        let (f, l) = (self.fiber, self.period);
        let step = (0..f * l).map(|x| ((x / f + 1) % l) * f + x % f).collect();
        let levels = (0..f * l).map(|x| x / f).collect();
        MonomialCrystal::new(step, self.exp.clone())
            .and_then(|c| c.with_grading(l, levels))
            .expect("graded factor is well formed")
    }
}

/// Tensor product. Graded factors of a common period pair up level by
/// level; ungraded factors form the full product. Mixing the two, or
/// graded factors whose steps do not raise the level by one, is rejected.
pub fn tensor_crystal(factors: &[MonomialCrystal]) -> Result<MonomialCrystal> {
    let Some(first) = factors.first() else {
        return MonomialCrystal::new(vec![0], vec![0]);
    };
    match first.grading() {
        None => {
            if factors.iter().any(|f| f.grading().is_some()) {
                return Err(Error::IncompatibleSteps("graded and ungraded factors".into()));
            }
            let mut acc = first.clone();
            for f in &factors[1..] {
                acc = full_product(&acc, f);
            }
            Ok(acc)
        }
        Some((period, _)) => {
            let mut fibers: Vec<Vec<Vec<usize>>> = Vec::with_capacity(factors.len());
            for f in factors {
                let Some((l, levels)) = f.grading() else {
                    return Err(Error::IncompatibleSteps("graded and ungraded factors".into()));
                };
                if l != period {
                    return Err(Error::IncompatibleSteps(format!("periods {period} and {l}")));
                }
                if let Some(b) = (0..f.len()).find(|&b| levels[f.step()[b]] != (levels[b] + 1) % l) {
                    return Err(Error::IncompatibleSteps(format!("label {b} does not raise the level")));
                }
                let mut by_level = vec![Vec::new(); l];
                for (b, &s) in levels.iter().enumerate() {
                    by_level[s].push(b);
                }
                fibers.push(by_level);
            }
            Ok(graded_product(factors, &fibers, period))
        }
    }
}

fn full_product(a: &MonomialCrystal, b: &MonomialCrystal) -> MonomialCrystal {
    let nb = b.len();
    let mut step = Vec::with_capacity(a.len() * nb);
    let mut exp = Vec::with_capacity(a.len() * nb);
    for x in 0..a.len() {
        for y in 0..nb {
            step.push(a.step()[x] * nb + b.step()[y]);
            exp.push(a.exponents()[x] + b.exponents()[y]);
        }
    }
    MonomialCrystal::new(step, exp).expect("product of permutations")
}

fn graded_product(factors: &[MonomialCrystal], fibers: &[Vec<Vec<usize>>], period: usize) -> MonomialCrystal {
    // Enumerate tuples level by level, then index them to build the step.
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    let mut level_of = Vec::new();
    for s in 0..period {
        let mut current: Vec<Vec<usize>> = vec![Vec::new()];
        for by_level in fibers {
            let mut next = Vec::with_capacity(current.len() * by_level[s].len());
            for t in &current {
                for &b in &by_level[s] {
                    let mut u = t.clone();
                    u.push(b);
                    next.push(u);
                }
            }
            current = next;
        }
        level_of.extend(std::iter::repeat_n(s, current.len()));
        tuples.extend(current);
    }
    let index: BTreeMap<&[usize], usize> = tuples.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
    let mut step = Vec::with_capacity(tuples.len());
    let mut exp = Vec::with_capacity(tuples.len());
    for t in &tuples {
        let image: Vec<usize> = t.iter().zip(factors).map(|(&b, f)| f.step()[b]).collect();
        step.push(index[image.as_slice()]);
        exp.push(t.iter().zip(factors).map(|(&b, f)| f.exponents()[b]).sum());
    }
    MonomialCrystal::new(step, exp)
        .and_then(|c| c.with_grading(period, level_of))
        .expect("fiber product is well formed")
}

/// Number of fiber tuples whose orbit has slope 0, by convolving the
/// per-factor histograms of [`GradedFactor::fiber_weight`].
pub fn graded_p_rank(factors: &[GradedFactor]) -> Result<u128> {
    if let Some(f) = factors.iter().find(|f| f.period != factors[0].period) {
        return Err(Error::IncompatibleSteps(format!("periods {} and {}", factors[0].period, f.period)));
    }
    let mut dist: BTreeMap<i64, u128> = [(0, 1)].into_iter().collect();
    for f in factors {
        let mut hist: BTreeMap<i64, u128> = BTreeMap::new();
        for b in 0..f.fiber {
            *hist.entry(f.fiber_weight(b)).or_default() += 1;
        }
        let mut next = BTreeMap::new();
        for (&x, &cx) in &dist {
            for (&y, &cy) in &hist {
                *next.entry(x + y).or_default() += cx * cy;
            }
        }
        dist = next;
    }
    Ok(dist.get(&0).copied().unwrap_or(0))
}

/// `n` copies of the standard `A_1` crystal with period `q`; factor
/// `i < q` carries exponent 1 on the second basis vector at level `i`.
pub fn a1_tensor_factors(n: usize, q: usize) -> Vec<GradedFactor> {
    assert!(1 <= q && q <= n);
    (0..n)
        .map(|i| GradedFactor::new(2, q, move |b, s| i64::from(i < q && s == i && b == 1)))
        .collect()
}

/// `p`-rank `r / 2^{q-1}` with `r = 2^{n-1}`.
pub fn a1_tensor_formula(n: usize, q: usize) -> u128 {
    (1u128 << (n - 1)) >> (q - 1)
}

/// All `k`-subsets of `0..size` as bitmasks, in increasing order.
pub fn subsets(size: usize, k: usize) -> Vec<u64> {
    (0..1u64 << size).filter(|m| m.count_ones() as usize == k).collect()
}

/// `n` copies of `wedge^{m+1}` of the standard `2m+2` representation with
/// period `q = 2 q0`. Factor `i < q0` picks up exponent 1 at level `i` when
/// the subset contains the first vector, and at level `i + q0` when it
/// misses the last one.
pub fn wedge_tensor_factors(m: usize, n: usize, q0: usize) -> Vec<GradedFactor> {
    assert!(1 <= q0 && q0 <= n);
    let dim = 2 * m + 2;
    let sets = subsets(dim, m + 1);
    (0..n)
        .map(|i| {
            let sets = sets.clone();
            GradedFactor::new(sets.len(), 2 * q0, move |b, s| {
                let set = sets[b];
                if i >= q0 {
                    0
                } else if s == i {
                    i64::from(set & 1 == 1)
                } else if s == i + q0 {
                    i64::from(set >> (dim - 1) & 1 == 0)
                } else {
                    0
                }
            })
        })
        .collect()
}

/// `C(2m, m)^{q0} C(2m+2, m+1)^{n-q0}`.
pub fn wedge_tensor_formula(m: usize, n: usize, q0: usize) -> u128 {
    let a = binomial(2 * m as u64, m as u64) as u128;
    let b = binomial(2 * m as u64 + 2, m as u64 + 1) as u128;
    a.pow(q0 as u32) * b.pow((n - q0) as u32)
}

/// Slope-0 labels of an explicit crystal divided by its grading period.
pub fn explicit_p_rank(mc: &MonomialCrystal) -> usize {
    let period = mc.grading().map_or(1, |(l, _)| l);
    mc.slope_zero_multiplicity() / period
}
