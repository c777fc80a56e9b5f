//! One line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;

use crystal_forge::catalog::{d_duality_readings, three_block_crystal, twisted_d, A4_ETA_TYPES};
use crystal_forge::modp::ModpCrystal;
use crystal_forge::roots::{build_root_system, weyl_elements, LieType, DEFAULT_WEYL_BOUND};
use crystal_forge::types::count::{count_nu, count_nu_formula, twist_has_no_zero_slope, twisted_a1_crystal};
use crystal_forge::types::tensor::{
    a1_tensor_factors, a1_tensor_formula, explicit_p_rank, wedge_tensor_factors, wedge_tensor_formula,
};
use crystal_forge::types::{
    duality_exponents, graded_p_rank, sh_ordinary_verdict, tensor_crystal, validate, GradedFactor,
    PDivTypeMultiset, ShimuraType, ShimuraTypeSpec,
};
use crystal_forge::witt::{newton_polygon, p_valuation, witt_ring, NewtonPolygon};
use crystal_forge::Error;
use num_rational::Ratio;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn spec(t: &str, l: usize, tau: Option<Vec<usize>>, eta: Vec<usize>) -> ShimuraType {
    validate(&ShimuraTypeSpec::new(t, l, tau, eta)).expect("valid spec")
}

fn words(parts: &[(&[i64], usize)]) -> PDivTypeMultiset {
    PDivTypeMultiset::from_words(parts).expect("aperiodic words")
}

/// Newton polygon of the Witt-vector lift, raising precision until the
/// hull is certified.
fn lifted_newton(twisted: bool) -> Result<NewtonPolygon, String> {
    let crystal = three_block_crystal(twisted);
    let mut m = 7;
    loop {
        let ring = witt_ring(3, 1, m).map_err(|e| e.to_string())?;
        let map = crystal.to_semilinear_map(&ring).map_err(|e| e.to_string())?;
        match newton_polygon(&map) {
            Ok(np) => return Ok(np),
            Err(Error::NewtonPrecisionExceeded { required_m, .. }) if required_m > m => m = required_m,
            Err(e) => return Err(e.to_string()),
        }
    }
}

fn three_block_example() -> Outcome {
    let t = spec("A", 3, None, vec![1, 2, 3]);
    let third = |k| Ratio::new(k, 3);
    let plain = NewtonPolygon::new((0..4).map(|k| (third(k), 3)));
    let twisted = NewtonPolygon::new([(third(0), 3), (Ratio::new(1, 2), 6), (third(3), 3)]);
    let blocks: Vec<usize> = (0..12).map(|b| b / 4).collect();
    for (tw, expected, ordinary) in [(false, &plain, true), (true, &twisted, false)] {
        let np = lifted_newton(tw)?;
        ensure!(&np == expected, "twisted={tw}: lift gives {np}, expected {expected}");
        let orbits = three_block_crystal(tw).newton_polygon();
        ensure!(&orbits == expected, "twisted={tw}: orbits give {orbits}");
        let modp = ModpCrystal::from_monomial(&three_block_crystal(tw), 3, 1).map_err(|e| e.to_string())?;
        let fshw = modp.block_fshw_invariant(&blocks).map_err(|e| e.to_string())?;
        ensure!(fshw == 3, "twisted={tw}: FSHW invariant {fshw}");
        let verdict = sh_ordinary_verdict(&np, &t).map_err(|e| e.to_string())?;
        ensure!(verdict.ordinary == ordinary, "twisted={tw}: verdict {}", verdict.ordinary);
    }
    ensure!(t.fshw_invariant() == 3, "type-level FSHW {}", t.fshw_invariant());
    Ok(format!("slopes {plain} and {twisted}, FSHW 3 twice, verdicts ordinary / not ordinary"))
}

fn pdiv_types() -> Outcome {
    for l in 4..=8 {
        let got = twisted_d(l).positive_pdiv_type();
        let want = words(&[(&[1], (l - 2) * (l - 1) / 2), (&[1, 0], l - 1)]);
        ensure!(got == want, "twisted D_{l}: {got}, expected {want}");
    }
    for eta in [vec![1, 2, 3], vec![1, 3, 2]] {
        let got = spec("A", 3, None, eta.clone()).positive_pdiv_type();
        let want = words(&[(&[1], 3), (&[1, 1, 0], 2), (&[1, 0, 0], 3)]);
        ensure!(got == want && got.dimension() == 10, "A_3 eta {eta:?}: {got}");
    }
    for (eta, m1, m2) in A4_ETA_TYPES {
        let got = spec("A", 4, None, eta.to_vec()).positive_pdiv_type();
        let want = words(&[(&[1], 4), (&[1, 1, 1, 0], 2), (&[1, 1, 0, 0], m1), (&[1, 0], m2), (&[1, 0, 0, 0], 4)]);
        ensure!(got == want && got.dimension() == 20, "A_4 eta {eta:?}: {got}");
    }
    let got = spec("A", 2, Some(vec![2, 1]), vec![1]).positive_pdiv_type();
    ensure!(got == words(&[(&[1], 1), (&[1, 0], 1)]), "twisted A_2: {got}");
    Ok("twisted D_4..D_8, A_3, six A_4 eta-types, twisted A_2".into())
}

fn sign_counts() -> Outcome {
    for n in 1..=20 {
        let (formula, oracle) = count_nu(n);
        ensure!(formula == oracle, "n = {n}: formula {formula}, oracle {oracle}");
    }
    for n in 1..=10 {
        for w in 0..1u64 << n {
            let orbits = twisted_a1_crystal(n, w).slope_zero_multiplicity() == 0;
            ensure!(orbits == twist_has_no_zero_slope(n, w), "n = {n}, w = {w:b}: orbit criterion differs");
        }
    }
    let small = [(2, 1), (3, 4), (6, 22)];
    for (n, v) in small {
        ensure!(count_nu_formula(n) == v, "N({n}) = {}", count_nu_formula(n));
    }
    Ok("n <= 20 agree, N(2)=1, N(3)=4, N(6)=22".into())
}

fn weyl_scan() -> Outcome {
    let cases = [
        (LieType::A, 2),
        (LieType::A, 3),
        (LieType::A, 4),
        (LieType::B, 3),
        (LieType::C, 3),
        (LieType::D, 4),
        (LieType::E6, 6),
    ];
    let mut pairs = 0;
    for (ty, l) in cases {
        let rs = build_root_system(ty, l).map_err(|e| e.to_string())?;
        let ws = weyl_elements(&rs, DEFAULT_WEYL_BOUND).map_err(|e| e.to_string())?;
        let nodes = rs.minuscule_nodes();
        for &x in &nodes {
            for &y in &nodes {
                let bound = rs.intersect_nilradicals(&BTreeSet::from([x, y])).unwrap().len();
                let mut best = 0;
                for w in &ws {
                    let d = rs.projection_dim(x, w, y).unwrap();
                    ensure!(d <= bound, "{}: ({x}, {y}) reaches {d} above {bound}", rs.name());
                    best = best.max(d);
                }
                let at_one = rs.projection_dim(x, &ws[0], y).unwrap();
                ensure!(best == bound && at_one == bound, "{}: ({x}, {y}) max {best}, identity {at_one}, expected {bound}", rs.name());
                pairs += 1;
            }
        }
    }
    for l in [4, 5] {
        let rs = build_root_system(LieType::D, l).unwrap();
        let ws = weyl_elements(&rs, DEFAULT_WEYL_BOUND).unwrap();
        let pair = rs.intersect_nilradicals(&BTreeSet::from([1, l - 1])).unwrap();
        let best = ws
            .iter()
            .map(|w| pair.iter().filter(|&&a| rs.coefficient(w.apply(&rs, rs.negate(a)), l) <= -1).count())
            .max()
            .unwrap();
        let triple = rs.intersect_nilradicals(&BTreeSet::from([1, l - 1, l])).unwrap().len();
        ensure!(best == l - 2 && triple == l - 2, "D_{l}: triple scan {best}, intersection {triple}");
    }
    let e6 = build_root_system(LieType::E6, 6).unwrap();
    let v = e6.intersect_nilradicals(&BTreeSet::from([1, 6])).unwrap().len();
    ensure!(v == 8, "E6 pair {{1, 6}}: {v}");
    Ok(format!("{pairs} minuscule pairs exhaustive, D_4/D_5 triples l-2, E6 pair 8"))
}

fn invariant_suites() -> Outcome {
    let families: [(LieType, &[usize]); 6] = [
        (LieType::A, &[1, 2, 3, 4, 5]),
        (LieType::B, &[2, 3, 4]),
        (LieType::C, &[3, 4]),
        (LieType::D, &[4, 5, 6]),
        (LieType::E6, &[6]),
        (LieType::E7, &[7]),
    ];
    let mut rng = common::rng(0x5eed);
    for (ty, ranks) in families {
        for k in 0..200 {
            let t = common::random_type(&mut rng, ty, ranks[k % ranks.len()]);
            common::type_invariants(&t)?;
        }
    }
    for p in [2, 3, 5] {
        for k in 0..50u64 {
            common::modp_invariants(1000 * p + k, p, 1 + (k % 2) as usize, 2 + (k % 3) as usize)?;
        }
    }
    for k in 0..100u64 {
        common::monomial_polygons(k, [2, 3, 5][(k % 3) as usize], 1 + (k % 6) as usize)?;
        common::decomposition_conserves(k, 1 + (k % 12) as usize)?;
    }
    let words = common::non_refinability(8)?;
    Ok(format!("1200 types, 150 mod-p crystals, 100 monomial lifts, {words} aperiodic words"))
}

/// Weight-zero fiber tuples by direct odometer enumeration.
fn odometer_p_rank(factors: &[GradedFactor]) -> u128 {
    let weights: Vec<Vec<i64>> = factors.iter().map(|f| (0..f.fiber()).map(|b| f.fiber_weight(b)).collect()).collect();
    let mut digits = vec![0usize; factors.len()];
    let mut count = 0u128;
    'outer: loop {
        if digits.iter().zip(&weights).all(|(&b, w)| w[b] == 0) {
            count += 1;
        }
        for (d, w) in digits.iter_mut().zip(&weights) {
            *d += 1;
            if *d < w.len() {
                continue 'outer;
            }
            *d = 0;
        }
        return count;
    }
}

fn explicit(factors: &[GradedFactor]) -> Result<u128, String> {
    let crystals: Vec<_> = factors.iter().map(GradedFactor::to_crystal).collect();
    let t = tensor_crystal(&crystals).map_err(|e| e.to_string())?;
    Ok(explicit_p_rank(&t) as u128)
}

fn tensor_ranks() -> Outcome {
    for q in 1..=6 {
        for n in q..=q + 2 {
            let f = a1_tensor_factors(n, q);
            let want = a1_tensor_formula(n, q);
            let (conv, odo) = (graded_p_rank(&f).map_err(|e| e.to_string())?, odometer_p_rank(&f));
            ensure!(conv == want && odo == want, "A_1 n={n} q={q}: {conv}/{odo}, expected {want}");
            if n <= 4 {
                ensure!(explicit(&f)? == want, "A_1 n={n} q={q}: explicit tensor differs");
            }
        }
    }
    for m in 1..=3 {
        for n in 1..=4 {
            for q0 in 1..=n {
                let f = wedge_tensor_factors(m, n, q0);
                let want = wedge_tensor_formula(m, n, q0);
                let (conv, odo) = (graded_p_rank(&f).map_err(|e| e.to_string())?, odometer_p_rank(&f));
                ensure!(conv == want && odo == want, "wedge m={m} n={n} q0={q0}: {conv}/{odo}, expected {want}");
                if m == 1 && n <= 2 {
                    ensure!(explicit(&f)? == want, "wedge m={m} n={n} q0={q0}: explicit tensor differs");
                }
            }
        }
    }
    Ok("A_1 q <= 6 and wedge m <= 3, n <= 4 by convolution and odometer".into())
}

fn duality() -> Outcome {
    for l in 1..=8 {
        let t = spec("A", l, None, vec![1]);
        for p in [2, 3, 5, 7] {
            let want = p_valuation(p, 2 * (l as i64 + 1)).unwrap();
            let got = duality_exponents(&t, p);
            ensure!(got.iter().all(|&v| v == want), "A_{l} p={p}: {got:?}, expected {want}");
        }
    }
    let mut disputed = Vec::new();
    for l in 4..=8 {
        for p in [2, 3, 5, 7] {
            let r = d_duality_readings(l, p).map_err(|e| e.to_string())?;
            let got = duality_exponents(&twisted_d(l), p);
            ensure!(got.iter().all(|&v| v == r.oracle), "D_{l} p={p}: pieces disagree with the oracle");
            if r.oracle != r.literal {
                disputed.push(format!("D_{l}/p={p}: oracle {} literal {} alternative {}", r.oracle, r.literal, r.alternative));
            }
        }
    }
    println!("       D_l readings where the oracle departs from v_p(4(l-2)): {}", disputed.join("; "));
    Ok(format!("A_l for l <= 8 match v_p(2(l+1)); {} D_l cases reported", disputed.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("three-block example", three_block_example),
        ("p-divisible types", pdiv_types),
        ("sign-twist counts", sign_counts),
        ("Weyl projection scan", weyl_scan),
        ("invariant suites", invariant_suites),
        ("tensor p-ranks", tensor_ranks),
        ("duality exponents", duality),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("[PASS] {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
