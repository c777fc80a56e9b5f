use crystal_forge::types::{minimal_decomposition, validate, PDivTypeMultiset, ShimuraType, ShimuraTypeSpec};
use num_rational::Ratio;

fn spec(t: &str, l: usize, tau: Option<Vec<usize>>, eta: Vec<usize>) -> ShimuraType {
    validate(&ShimuraTypeSpec::new(t, l, tau, eta)).unwrap()
}

fn d_twisted(l: usize) -> ShimuraType {
    let mut tau: Vec<usize> = (1..=l).collect();
    tau.swap(l - 2, l - 1);
    spec("D", l, Some(tau), vec![l - 1])
}

fn expect(parts: &[(&[i64], usize)]) -> PDivTypeMultiset {
    PDivTypeMultiset::from_words(parts).unwrap()
}

#[test]
fn twisted_d_positive_type() {
    for l in 4..=8 {
        let t = d_twisted(l);
        let (big, small) = t.epsilon_sets();
        assert_eq!(big, [l - 1, l].into_iter().collect());
        assert_eq!(small, big);
        assert_eq!(t.nilpotency_classes(), (2, 2));
        let got = t.positive_pdiv_type();
        assert_eq!(got, expect(&[(&[1], (l - 2) * (l - 1) / 2), (&[1, 0], l - 1)]), "l = {l}");
    }
    assert_eq!(d_twisted(4).fshw_invariant(), 3);
}

#[test]
fn a3_positive_type() {
    for eta in [vec![1, 2, 3], vec![1, 3, 2]] {
        let t = spec("A", 3, None, eta);
        let got = t.positive_pdiv_type();
        assert_eq!(got, expect(&[(&[1], 3), (&[1, 1, 0], 2), (&[1, 0, 0], 3)]));
        assert_eq!(got.dimension(), 10);
        assert_eq!(got.height(), 18);
    }
}

#[test]
fn a4_positive_types_by_eta() {
    let cases: [([usize; 4], usize, usize); 6] = [
        ([1, 2, 3, 4], 3, 0),
        ([1, 4, 3, 2], 3, 0),
        ([1, 2, 4, 3], 2, 2),
        ([1, 3, 4, 2], 2, 2),
        ([1, 3, 2, 4], 1, 4),
        ([1, 4, 2, 3], 1, 4),
    ];
    for (eta, m1, m2) in cases {
        let t = spec("A", 4, None, eta.to_vec());
        let got = t.positive_pdiv_type();
        assert_eq!(got.count(&[1]), 4, "{eta:?}");
        assert_eq!(got.count(&[1, 1, 1, 0]), 2, "{eta:?}");
        assert_eq!(got.count(&[1, 0, 0, 0]), 4, "{eta:?}");
        assert_eq!(got.count(&[1, 1, 0, 0]), m1, "{eta:?}");
        assert_eq!(got.count(&[1, 0]), m2, "{eta:?}");
        assert_eq!(got.dimension(), 20);
    }
}

#[test]
fn twisted_a2_type() {
    let t = spec("A", 2, Some(vec![2, 1]), vec![1]);
    assert_eq!(t.en_tuple(), vec![1, 2]);
    assert_eq!(t.delta(), Ratio::from_integer(1));
    assert_eq!(t.positive_pdiv_type(), expect(&[(&[1], 1), (&[1, 0], 1)]));
}

#[test]
fn a3_fixture_invariants() {
    let t = spec("A", 3, None, vec![1, 2, 3]);
    assert_eq!(t.fshw_invariant(), 3);
    let np = t.adjoint_newton_polygon();
    assert_eq!(np.multiplicity(Ratio::from_integer(1)), 3);
    assert_eq!(np.multiplicity(Ratio::from_integer(-1)), 3);
    let d = minimal_decomposition(&t);
    assert_eq!(d.len(), 6);
    assert_eq!(d.pieces[0].a, 3);
}
