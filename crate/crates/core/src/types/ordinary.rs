//! Ordinariness of block-cyclic `GL` crystals against their type.

use num_rational::Ratio;
use serde::Serialize;

use super::spec::ShimuraType;
use crate::error::{Error, Result};
use crate::witt::NewtonPolygon;

/// Adjoint polygon of a module made of `n` cyclically permuted blocks.
///
/// Each block sees slope `lambda` with multiplicity `m_lambda / n`; the
/// adjoint slopes are the differences `lambda - mu`, weighted by
/// `n a_lambda a_mu`, with the `n` central directions removed at 0.
pub fn gl_block_adjoint_polygon(module: &NewtonPolygon, n: usize) -> Result<NewtonPolygon> {
    let n32 = n as u32;
    let mut blocks = Vec::new();
    for &(s, m) in module.slopes() {
        if m % n32 != 0 {
            return Err(Error::DimensionMismatch(format!("slope multiplicity {m} not divisible by {n}")));
        }
        blocks.push((s, m / n32));
    }
    let mut parts = Vec::new();
    let mut zero = 0u32;
    for &(l, a) in &blocks {
        for &(mu, b) in &blocks {
            let mult = n32 * a * b;
            if l == mu {
                zero += mult;
            } else {
                parts.push((l - mu, mult));
            }
        }
    }
    parts.push((Ratio::from_integer(0), zero - n32));
    Ok(NewtonPolygon::new(parts))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrdinaryVerdict {
    pub ordinary: bool,
    pub adjoint: NewtonPolygon,
    pub expected: NewtonPolygon,
}

/// A block-cyclic crystal is Sh-ordinary exactly when its adjoint polygon
/// matches the one of the type.
pub fn sh_ordinary_verdict(module: &NewtonPolygon, t: &ShimuraType) -> Result<OrdinaryVerdict> {
    let adjoint = gl_block_adjoint_polygon(module, t.n())?;
    let expected = t.adjoint_newton_polygon();
    if adjoint.rank() != expected.rank() {
        return Err(Error::DimensionMismatch(format!(
            "adjoint rank {} against type rank {}",
            adjoint.rank(),
            expected.rank()
        )));
    }
    Ok(OrdinaryVerdict {
        ordinary: adjoint == expected,
        adjoint,
        expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::spec::{validate, ShimuraTypeSpec};

    #[test]
    fn untwisted_and_twisted_fixture() {
        let t = validate(&ShimuraTypeSpec::new("A", 3, None, vec![1, 2, 3])).unwrap();
        let third = |k| Ratio::new(k, 3);
        let good = NewtonPolygon::new((0..4).map(|k| (third(k), 3)));
        assert!(sh_ordinary_verdict(&good, &t).unwrap().ordinary);
        let bad = NewtonPolygon::new([(third(0), 3), (Ratio::new(1, 2), 6), (third(3), 3)]);
        assert!(!sh_ordinary_verdict(&bad, &t).unwrap().ordinary);
        let odd = NewtonPolygon::new([(third(0), 2), (third(3), 2)]);
        assert!(sh_ordinary_verdict(&odd, &t).is_err());
    }
}
