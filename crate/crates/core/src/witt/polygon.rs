use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::charpoly::charpoly;
use super::matrix::SemilinearMap;
use super::smith::elementary_divisors;
use crate::error::{Error, Result};

pub type Slope = Ratio<i64>;

/// Multiset of rational slopes, stored sorted with positive multiplicities.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct NewtonPolygon {
    slopes: Vec<(Slope, u32)>,
}

impl NewtonPolygon {
    pub fn new<I: IntoIterator<Item = (Slope, u32)>>(parts: I) -> Self {
        let mut map: BTreeMap<Slope, u32> = BTreeMap::new();
        for (s, k) in parts {
            if k > 0 {
                *map.entry(s).or_default() += k;
            }
        }
        NewtonPolygon {
            slopes: map.into_iter().collect(),
        }
    }

    /// One slope per basis vector.
    pub fn from_slopes<I: IntoIterator<Item = Slope>>(slopes: I) -> Self {
        Self::new(slopes.into_iter().map(|s| (s, 1)))
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(values: I) -> Self {
        Self::from_slopes(values.into_iter().map(Slope::from_integer))
    }

    pub fn slopes(&self) -> &[(Slope, u32)] {
        &self.slopes
    }

    pub fn rank(&self) -> u32 {
        self.slopes.iter().map(|&(_, k)| k).sum()
    }

    pub fn multiplicity(&self, s: Slope) -> u32 {
        self.slopes.iter().find(|&&(t, _)| t == s).map_or(0, |&(_, k)| k)
    }

    pub fn min_slope(&self) -> Option<Slope> {
        self.slopes.first().map(|&(s, _)| s)
    }

    pub fn max_slope(&self) -> Option<Slope> {
        self.slopes.last().map(|&(s, _)| s)
    }

    /// Total `sum(mult * slope)`, the height of the right endpoint.
    pub fn total(&self) -> Slope {
        self.slopes
            .iter()
            .fold(Slope::zero(), |acc, &(s, k)| acc + s * k as i64)
    }

    /// Vertices `(x, y)` of the polygon starting at the origin.
    pub fn vertices(&self) -> Vec<(u32, Slope)> {
        let mut out = vec![(0, Slope::zero())];
        let (mut x, mut y) = (0u32, Slope::zero());
        for &(s, k) in &self.slopes {
            x += k;
            y += s * k as i64;
            out.push((x, y));
        }
        out
    }

    /// Height of the polygon above abscissa `x` (linear between vertices).
    pub fn height_at(&self, x: u32) -> Slope {
        let mut y = Slope::zero();
        let mut left = x;
        for &(s, k) in &self.slopes {
            let step = left.min(k);
            y += s * step as i64;
            left -= step;
            if left == 0 {
                break;
            }
        }
        y
    }

    /// Every vertex has integral ordinate.
    pub fn has_integral_breakpoints(&self) -> bool {
        self.vertices().iter().all(|(_, y)| y.is_integer())
    }

    /// True when `self` lies on or above `other` and both share endpoints.
    pub fn lies_on_or_above(&self, other: &NewtonPolygon) -> bool {
        let n = self.rank();
        if n != other.rank() || self.total() != other.total() {
            return false;
        }
        (0..=n).all(|x| self.height_at(x) >= other.height_at(x))
    }

    /// Multiplies every slope by `c`.
    pub fn scale(&self, c: Slope) -> NewtonPolygon {
        NewtonPolygon::new(self.slopes.iter().map(|&(s, k)| (s * c, k)))
    }

    pub fn negate(&self) -> NewtonPolygon {
        self.scale(-Slope::one())
    }

    /// Invariant under `s -> -s`.
    pub fn is_symmetric(&self) -> bool {
        *self == self.negate()
    }

    /// Multiset union.
    pub fn union(&self, other: &NewtonPolygon) -> NewtonPolygon {
        NewtonPolygon::new(self.slopes.iter().chain(other.slopes.iter()).copied())
    }

    /// Least common multiple of the slope denominators.
    pub fn denominator_lcm(&self) -> i64 {
        self.slopes.iter().fold(1, |acc, (s, _)| acc.lcm(s.denom()))
    }

    /// ASCII plot: columns are abscissae, rows are ordinates scaled by the
    /// slope denominator lcm and shifted so the minimum sits on the bottom row.
    pub fn render_ascii(&self) -> String {
        let n = self.rank() as usize;
        if n == 0 {
            return String::from("(empty polygon)\n");
        }
        let scale = self.denominator_lcm();
        let ys: Vec<i64> = (0..=n as u32)
            .map(|x| (self.height_at(x) * scale).to_integer())
            .collect();
        let lo = *ys.iter().min().unwrap();
        let hi = *ys.iter().max().unwrap();
        let vertex_x: Vec<u32> = self.vertices().iter().map(|&(x, _)| x).collect();
        let mut out = String::new();
        for level in (lo..=hi).rev() {
            out.push_str(&format!("{:>6} |", format_scaled(level, scale)));
            for (x, &y) in ys.iter().enumerate() {
                let c = if y == level {
                    if vertex_x.contains(&(x as u32)) {
                        '*'
                    } else {
                        'o'
                    }
                } else {
                    ' '
                };
                out.push(' ');
                out.push(c);
            }
            out.push('\n');
        }
        out.push_str("       +");
        out.push_str(&"--".repeat(n + 1));
        out.push('\n');
        out.push_str("        ");
        for x in 0..=n {
            out.push_str(&format!("{:>2}", x % 100));
        }
        out.push('\n');
        out
    }
}

fn format_scaled(level: i64, scale: i64) -> String {
    let r = Ratio::new(level, scale);
    format_slope(&r)
}

/// `"1/2"`, `"-3"`, `"0"`.
pub fn format_slope(s: &Slope) -> String {
    if s.is_integer() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// Serde helper writing a slope as a fraction string.
pub fn serialize_slope<S: Serializer>(s: &Slope, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&format_slope(s))
}

pub fn parse_slope(text: &str) -> Option<Slope> {
    let text = text.trim();
    match text.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().ok()?;
            let b: i64 = b.trim().parse().ok()?;
            (b != 0).then(|| Ratio::new(a, b))
        }
        None => text.parse().ok().map(Slope::from_integer),
    }
}

impl fmt::Debug for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (s, k)) in self.slopes.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", format_slope(s), k)?;
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SlopeEntry {
    slope: String,
    multiplicity: u32,
}

impl Serialize for NewtonPolygon {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<SlopeEntry> = self
            .slopes
            .iter()
            .map(|(s, k)| SlopeEntry {
                slope: format_slope(s),
                multiplicity: *k,
            })
            .collect();
        v.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for NewtonPolygon {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<SlopeEntry>::deserialize(de)?;
        let mut parts = Vec::with_capacity(v.len());
        for e in v {
            let s = parse_slope(&e.slope)
                .ok_or_else(|| serde::de::Error::custom(format!("bad slope {:?}", e.slope)))?;
            parts.push((s, e.multiplicity));
        }
        Ok(NewtonPolygon::new(parts))
    }
}

/// Hodge polygon: the elementary-divisor exponents of the matrix.
pub fn hodge_polygon(f: &SemilinearMap) -> Result<NewtonPolygon> {
    let e = elementary_divisors(f.matrix())?;
    Ok(NewtonPolygon::from_integers(e.into_iter().map(i64::from)))
}

/// Exact Newton polygon of `x -> A sigma^t(x)`.
///
/// With `k` the order of `sigma^t` on the residue field, `f^k` is linear and
/// its slopes are `k` times those of `f`. They are read off the lower convex
/// hull of `(i, v(c_i))` for the characteristic polynomial of `f^k`.
/// Coefficients that vanish modulo `p^m` are certified harmless when they
/// lie on or above the hull at height `m`; otherwise the required precision
/// is reported.
pub fn newton_polygon(f: &SemilinearMap) -> Result<NewtonPolygon> {
    let d = f.dim();
    if d == 0 {
        return Ok(NewtonPolygon::default());
    }
    let ring = f.ring();
    let m = ring.m();
    let hodge_total: u32 = elementary_divisors(f.matrix())?.iter().sum();
    let k = f.linearization_order();
    let b = f.pow(k);
    let coeffs = charpoly(b.matrix());
    let vals: Vec<Option<u32>> = coeffs.iter().map(|c| ring.data.valuation(c)).collect();

    let det_v = match vals[d] {
        Some(v) => v,
        None => {
            return Err(Error::NewtonPrecisionExceeded {
                m,
                required_m: k * hodge_total + 1,
            })
        }
    };
    debug_assert_eq!(det_v, k * hodge_total);

    let points: Vec<(i64, i64)> = vals
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (i as i64, v as i64)))
        .collect();
    let hull = lower_hull(&points);

    // Unknown coefficients have valuation >= m > det_v >= hull height, so
    // they never cut below the hull; still, check it explicitly.
    for (i, v) in vals.iter().enumerate() {
        if v.is_none() {
            let h = hull_height(&hull, i as i64);
            if h > Slope::from_integer(m as i64) {
                return Err(Error::NewtonPrecisionExceeded {
                    m,
                    required_m: det_v + 1,
                });
            }
        }
    }

    let kk = Slope::from_integer(k as i64);
    let parts = hull.windows(2).map(|w| {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        (Ratio::new(y1 - y0, x1 - x0) / kk, (x1 - x0) as u32)
    });
    Ok(NewtonPolygon::new(parts))
}

/// Lower convex hull of points sorted by abscissa.
fn lower_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in points {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // Drop b if it lies on or above segment a-p.
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

fn hull_height(hull: &[(i64, i64)], x: i64) -> Slope {
    for w in hull.windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        if x0 <= x && x <= x1 {
            return Slope::from_integer(y0) + Ratio::new((y1 - y0) * (x - x0), x1 - x0);
        }
    }
    Slope::from_integer(hull.last().map_or(0, |p| p.1))
}

/// The sequence `(1/i) * Hodge(f^i)` for `i = 1..=count`.
pub fn katz_sequence(f: &SemilinearMap, count: u32) -> Result<Vec<NewtonPolygon>> {
    let mut out = Vec::with_capacity(count as usize);
    let mut g = f.clone();
    for i in 1..=count {
        out.push(hodge_polygon(&g)?.scale(Ratio::new(1, i as i64)));
        if i < count {
            g = g.compose(f)?;
        }
    }
    Ok(out)
}

/// Slope of a single exponent word `sum(w) / len(w)`.
pub fn word_slope(word: &[i64]) -> Slope {
    Ratio::new(word.iter().sum(), word.len() as i64)
}
