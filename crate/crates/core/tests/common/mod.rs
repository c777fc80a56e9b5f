#![allow(dead_code)]

use std::sync::Arc;

use crystal_forge::roots::{build_root_system, LieType};
use crystal_forge::types::{MonomialCrystal, ShimuraType};
use crystal_forge::witt::{SemilinearMap, WittMatrix, WittRingParams};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// A valid type of the given root system with random `n`, `tau` and `eta`.
pub fn random_type(rng: &mut ChaCha8Rng, lie_type: LieType, rank: usize) -> ShimuraType {
    let rs = Arc::new(build_root_system(lie_type, rank).unwrap());
    let max_n = if rs.num_roots() > 100 { 2 } else { 4 };
    let minuscule: Vec<usize> = rs.minuscule_nodes().into_iter().collect();
    let autos = rs.diagram_automorphisms();
    loop {
        let n = rng.gen_range(1..=max_n);
        let tau = autos.choose(rng).unwrap().images().to_vec();
        let eta: Vec<usize> = (0..n)
            .map(|_| if rng.gen_bool(0.3) { 0 } else { *minuscule.choose(rng).unwrap() })
            .collect();
        if let Ok(t) = ShimuraType::from_parts(rs.clone(), Some(tau), eta, n) {
            return t;
        }
    }
}

pub fn random_element(rng: &mut ChaCha8Rng, ring: &WittRingParams) -> crystal_forge::witt::WittElement {
    let q = ring.modulus() as i64;
    let coeffs: Vec<i64> = (0..ring.r()).map(|_| rng.gen_range(0..q)).collect();
    ring.element(&coeffs).unwrap()
}

/// Product of a random unit lower and a random unit upper triangular matrix.
pub fn random_invertible(rng: &mut ChaCha8Rng, ring: &WittRingParams, d: usize) -> WittMatrix {
    let mut l = WittMatrix::identity(ring, d);
    let mut u = WittMatrix::identity(ring, d);
    for i in 0..d {
        for j in 0..i {
            l.set(i, j, &random_element(rng, ring));
            u.set(j, i, &random_element(rng, ring));
        }
    }
    l.mul(&u).unwrap()
}

/// `U diag(p^e) V` with `e` in `{0, 1}`: a random Dieudonne lift.
pub fn random_dieudonne(rng: &mut ChaCha8Rng, ring: &WittRingParams, d: usize) -> (SemilinearMap, Vec<u32>) {
    let exps: Vec<u32> = (0..d).map(|_| rng.gen_range(0..=1)).collect();
    let a = random_invertible(rng, ring, d)
        .mul(&WittMatrix::diag_p_powers(ring, &exps))
        .unwrap()
        .mul(&random_invertible(rng, ring, d))
        .unwrap();
    (SemilinearMap::new(a, 1).unwrap(), exps)
}

/// Random permutation with exponents drawn from `0..=max_exp`.
pub fn random_monomial(rng: &mut ChaCha8Rng, d: usize, max_exp: i64) -> MonomialCrystal {
    let mut step: Vec<usize> = (0..d).collect();
    step.shuffle(rng);
    let exps = (0..d).map(|_| rng.gen_range(0..=max_exp)).collect();
    MonomialCrystal::new(step, exps).unwrap()
}

pub use checks::*;

mod checks {
    use std::collections::BTreeMap;

    use crystal_forge::modp::{fq_inverse, ModpCrystal};
    use crystal_forge::types::monomial::{aperiodic_necklaces, canonical_rotation, is_aperiodic};
    use crystal_forge::types::{circular_decomposition, MonomialCrystal, ShimuraType};
    use crystal_forge::witt::{hodge_polygon, newton_polygon, witt_ring, Slope};
    use num_traits::{One, Zero};

    macro_rules! ensure {
        ($cond:expr, $($msg:tt)+) => {
            if !$cond {
                return Err(format!($($msg)+));
            }
        };
    }

    /// Symmetry, support, FSHW and duality checks on one type.
    pub fn type_invariants(t: &ShimuraType) -> Result<(), String> {
        let spec = t.to_spec();
        let np = t.adjoint_newton_polygon();
        let delta = t.delta();
        ensure!(np.is_symmetric(), "{spec:?}: asymmetric {np}");
        ensure!(np.max_slope() == Some(delta), "{spec:?}: max slope of {np} is not {delta}");
        ensure!(np.min_slope() == Some(-delta), "{spec:?}: min slope of {np} is not -{delta}");
        ensure!(
            t.fshw_invariant() as u32 == np.multiplicity(-delta),
            "{spec:?}: FSHW {} against multiplicity {}",
            t.fshw_invariant(),
            np.multiplicity(-delta)
        );
        let ne = (t.n() * t.e()) as i64;
        for &(s, _) in np.slopes() {
            ensure!(ne % s.denom() == 0, "{spec:?}: slope {s} with n e = {ne}");
        }
        let rs = t.root_system();
        ensure!(
            np.multiplicity(Slope::zero()) as usize >= t.n() * rs.rank(),
            "{spec:?}: fewer zero slopes than Cartan labels"
        );
        ensure!(np.rank() as usize == t.n() * (rs.num_roots() + rs.rank()), "{spec:?}: wrong rank");

        let pos = t.positive_pdiv_type();
        ensure!(pos.height() == t.n() * t.positive_roots_of_e().len(), "{spec:?}: positive height");
        ensure!(t.negative_pdiv_type() == pos.dual(), "{spec:?}: negative type is not the dual");
        let slopes = pos.newton_polygon();
        ensure!(slopes.min_slope().unwrap() > Slope::zero(), "{spec:?}: positive type has slope 0");
        ensure!(slopes.max_slope().unwrap() <= Slope::one(), "{spec:?}: positive type above 1");

        let canon = t.canonical();
        let mut u = t.clone();
        for _ in 0..t.n() * t.e() {
            u = u.rotated();
            ensure!(u.adjoint_newton_polygon() == np, "{spec:?}: rotation changed the polygon");
            if u.eta()[0] != 0 {
                ensure!(u.canonical().eta() == canon.eta(), "{spec:?}: canonical form not rotation invariant");
            }
        }
        Ok(())
    }

    /// Mod-`p` identities on a random Dieudonne lift of rank `d` over `F_{p^r}`.
    pub fn modp_invariants(seed: u64, p: u64, r: usize, d: usize) -> Result<(), String> {
        let mut rng = super::rng(seed);
        let ring = witt_ring(p, r, (r * d + 1) as u32).unwrap();
        let (lift, exps) = super::random_dieudonne(&mut rng, &ring, d);
        let c = ModpCrystal::from_lift(&lift).map_err(|e| e.to_string())?;
        let tag = format!("seed {seed} p {p} r {r} d {d}");
        ensure!(c.dimension() as u32 == exps.iter().sum::<u32>(), "{tag}: dimension");

        let (hw, steps) = c.hasse_witt_with_steps();
        ensure!(steps <= d + 1, "{tag}: phi took {steps} iterations");
        let dual = c.dual().unwrap();
        let entries: Vec<(usize, usize)> = (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).collect();
        let (ifs, psi_steps) = c.fshw_on_entries(&entries).unwrap();
        ensure!(psi_steps <= d * d + 1, "{tag}: Psi took {psi_steps} iterations");
        ensure!(ifs == hw * dual.hasse_witt(), "{tag}: I = {ifs}, HW = {hw}, HW dual = {}", dual.hasse_witt());
        ensure!(c.is_ordinary().unwrap() == (hw == d - c.dimension()), "{tag}: ordinary verdicts disagree");

        let np = newton_polygon(&lift).map_err(|e| e.to_string())?;
        ensure!(np.multiplicity(Slope::zero()) as usize == hw, "{tag}: slope 0 of {np} against HW {hw}");
        let hp = hodge_polygon(&lift).unwrap();
        ensure!(np.lies_on_or_above(&hp), "{tag}: newton {np} below hodge {hp}");
        ensure!(np.total() == hp.total(), "{tag}: endpoints differ");

        let field = witt_ring(p, r, 1).unwrap();
        let u = super::random_invertible(&mut rng, &field, d);
        ensure!(fq_inverse(&u).is_some(), "{tag}: singular conjugator");
        let moved = c.conjugate(&u).unwrap();
        ensure!(moved.hasse_witt() == hw, "{tag}: HW moved under conjugation");
        ensure!(moved.gl_fshw_invariant().unwrap() == ifs, "{tag}: I moved under conjugation");
        Ok(())
    }

    /// Orbit-formula Newton and Hodge polygons against the Witt-vector
    /// computation at precision 4.
    pub fn monomial_polygons(seed: u64, p: u64, d: usize) -> Result<(), String> {
        let mut rng = super::rng(seed);
        let mut mc = super::random_monomial(&mut rng, d, 2);
        while mc.exponents().iter().sum::<i64>() > 3 {
            mc = super::random_monomial(&mut rng, d, 2);
        }
        let ring = witt_ring(p, 1, 4).unwrap();
        let map = mc.to_semilinear_map(&ring).unwrap();
        let np = newton_polygon(&map).map_err(|e| e.to_string())?;
        ensure!(np == mc.newton_polygon(), "{mc:?}: charpoly {np} against orbits {}", mc.newton_polygon());
        ensure!(hodge_polygon(&map).unwrap() == mc.hodge_polygon(), "{mc:?}: hodge differs");
        Ok(())
    }

    /// Rank, dimension and slopes survive circular decomposition, and
    /// recomposing the parts decomposes the same way.
    pub fn decomposition_conserves(seed: u64, d: usize) -> Result<(), String> {
        let mut rng = super::rng(seed);
        let mc = super::random_monomial(&mut rng, d, 1);
        let ty = circular_decomposition(&mc);
        ensure!(ty.height() == d, "{mc:?}: height");
        ensure!(ty.newton_polygon() == mc.newton_polygon(), "{mc:?}: slopes");
        ensure!(ty.dimension() == mc.exponents().iter().sum::<i64>(), "{mc:?}: dimension");
        let mut step = Vec::new();
        let mut exps = Vec::new();
        for (c, k) in ty.parts() {
            ensure!(is_aperiodic(c.word()), "{mc:?}: periodic part");
            for _ in 0..k {
                let base = step.len();
                let w = c.word();
                step.extend((0..w.len()).map(|i| base + (i + 1) % w.len()));
                exps.extend_from_slice(w);
            }
        }
        let again = circular_decomposition(&MonomialCrystal::new(step, exps).unwrap());
        ensure!(again == ty, "{mc:?}: recomposition differs");
        Ok(())
    }

    /// Binary aperiodic words of length `d`, one per rotation class.
    pub fn aperiodic_words(d: usize) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = (0..1u32 << d)
            .map(|m| (0..d).map(|i| i64::from(m >> i & 1 == 1)).collect::<Vec<i64>>())
            .filter(|w| is_aperiodic(w))
            .map(|w| canonical_rotation(&w))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    fn signature(word: &[i64], len: usize) -> Vec<usize> {
        let c = ModpCrystal::from_monomial(&MonomialCrystal::cycle(word), 2, 1).unwrap();
        c.canonical_filtration_dims(len).unwrap()
    }

    fn sums_of_two_or_more(d: usize, table: &BTreeMap<usize, Vec<Vec<usize>>>) -> Vec<Vec<usize>> {
        fn go(
            rest: usize,
            parts: usize,
            min: (usize, usize),
            acc: Vec<usize>,
            table: &BTreeMap<usize, Vec<Vec<usize>>>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if rest == 0 {
                if parts >= 2 {
                    out.push(acc);
                }
                return;
            }
            for size in min.0..=rest {
                let start = if size == min.0 { min.1 } else { 0 };
                for (i, s) in table[&size].iter().enumerate().skip(start) {
                    let next = acc.iter().zip(s).map(|(x, y)| x + y).collect();
                    go(rest - size, parts + 1, (size, i), next, table, out);
                }
            }
        }
        let mut out = Vec::new();
        go(d, 0, (1, 0), vec![0; table[&1][0].len()], table, &mut out);
        out
    }

    /// For every aperiodic word of length at most `max`, no direct sum of
    /// two or more smaller circular pieces has the same canonical filtration
    /// dimensions, and distinct words are told apart. Returns the number of
    /// words checked.
    pub fn non_refinability(max: usize) -> Result<usize, String> {
        let mut table = BTreeMap::new();
        let mut words = BTreeMap::new();
        for d in 1..=max {
            let ws = aperiodic_words(d);
            let count: u64 = (0..=d as u64).map(|s| aperiodic_necklaces(d as u64, s)).sum();
            ensure!(ws.len() as u64 == count, "necklace count at length {d}");
            table.insert(d, ws.iter().map(|w| signature(w, max)).collect::<Vec<_>>());
            words.insert(d, ws);
        }
        let mut checked = words[&1].len();
        for d in 2..=max {
            let splits = sums_of_two_or_more(d, &table);
            for (w, sig) in words[&d].iter().zip(&table[&d]) {
                ensure!(!splits.contains(sig), "{w:?} looks like a sum of smaller pieces");
                checked += 1;
            }
            for (i, a) in table[&d].iter().enumerate() {
                for b in &table[&d][i + 1..] {
                    ensure!(a != b, "two aperiodic words of length {d} share a signature");
                }
            }
        }
        Ok(checked)
    }
}
