use num::{Signed, Zero};
use proptest::prelude::*;
use ssindex::operators::{node_admitted, witness_search, BasicSequence, Operator, SearchConfig};
use ssindex::rational::{int, ratio};
use ssindex::spaces::{self, Magnitude};
use ssindex::{schreier, FiniteSet, NormDescriptor, Ordinal, RationalVector, Q};

fn descriptors() -> Vec<NormDescriptor> {
    [
        "l1",
        "l2",
        "linf",
        "schreier(1)",
        "schreier(w)",
        "tsirelson(1,1/2)",
        "tsirelson(2,1/3)",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect()
}

fn rational() -> impl Strategy<Value = Q> {
    (-10i64..=10, 1i64..=4).prop_map(|(p, q)| ratio(p, q))
}

fn vector() -> impl Strategy<Value = RationalVector> {
    prop::collection::btree_map(1u32..=12, rational(), 0..=8)
        .prop_map(|m| RationalVector::from_pairs(m).unwrap())
}

fn ordinal() -> impl Strategy<Value = Ordinal> {
    prop::sample::select(vec![
        "0",
        "1",
        "2",
        "3",
        "w",
        "w+1",
        "w*2",
        "w^2",
        "w^w",
        "w^2*3+w+5",
    ])
    .prop_map(|s| s.parse().unwrap())
}

fn set() -> impl Strategy<Value = FiniteSet> {
    prop::collection::btree_set(1u32..=14, 0..=6)
        .prop_map(|s| FiniteSet::new(s.into_iter().collect()).unwrap())
}

fn sq(m: &Magnitude) -> Q {
    m.square()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_axioms(x in vector(), y in vector(), c in rational()) {
        for d in descriptors() {
            let nx = spaces::norm(&d, &x);
            prop_assert_eq!(nx.is_zero(), x.is_zero());
            // homogeneity on squares: ‖cx‖² = c²‖x‖²
            prop_assert_eq!(sq(&spaces::norm(&d, &x.scale(&c))), &c * &c * sq(&nx));
            let ny = spaces::norm(&d, &y);
            let nxy = spaces::norm(&d, &x.add(&y));
            match (&nx, &ny, &nxy) {
                (Magnitude::Exact(a), Magnitude::Exact(b), Magnitude::Exact(s)) => prop_assert!(*s <= a + b),
                _ => {
                    // ‖x+y‖² ≤ ‖x‖² + ‖y‖² + 2‖x‖‖y‖, with ‖x‖‖y‖ = sqrt(‖x‖²‖y‖²)
                    let slack = sq(&nxy) - sq(&nx) - sq(&ny);
                    prop_assert!(!slack.is_positive() || &slack * &slack <= int(4) * sq(&nx) * sq(&ny));
                }
            }
        }
    }

    #[test]
    fn lattice_norms_are_unconditional_and_sandwiched(x in vector(), shrink in prop::collection::vec(0i64..=3, 12)) {
        let y = RationalVector::from_pairs(x.iter().map(|(i, q)| (i, q * ratio(shrink[i as usize - 1], 3)))).unwrap();
        for d in descriptors().into_iter().filter(|d| matches!(d, NormDescriptor::Schreier(_) | NormDescriptor::Tsirelson(_))) {
            let nx = spaces::norm_exact(&d, &x).unwrap();
            prop_assert!(spaces::norm_exact(&d, &y).unwrap() <= nx);
            prop_assert!(nx <= x.l1());
            prop_assert!(x.linf() <= nx);
            prop_assert_eq!(spaces::norm_exact(&d, &x.abs()).unwrap(), nx);
        }
    }

    #[test]
    fn dual_witnesses_reproduce_the_norm(x in vector()) {
        for d in descriptors().into_iter().filter(|d| !matches!(d, NormDescriptor::L1 | NormDescriptor::L2 | NormDescriptor::Linf)) {
            let w = spaces::dual_witness(&d, &x).unwrap();
            prop_assert!(w.is_admissible(&d));
            let n = spaces::norm_exact(&d, &x).unwrap();
            prop_assert_eq!(w.evaluate(&d, &x).unwrap(), n.clone());
            let h = spaces::norming_functional(&d, &x).unwrap();
            prop_assert_eq!(h.dot(&x), n);
        }
    }

    #[test]
    fn tsirelson_values_are_fixed_points(x in vector(), cuts in prop::collection::vec(1u32..=12, 1..=4)) {
        let d: NormDescriptor = "tsirelson(1,1/2)".parse().unwrap();
        let n = spaces::norm_exact(&d, &x).unwrap();
        let mut bounds: Vec<u32> = cuts;
        bounds.sort_unstable();
        bounds.dedup();
        bounds.push(13);
        if bounds.len() - 1 <= bounds[0] as usize {
            let mut sum = Q::zero();
            for w in bounds.windows(2) {
                sum += spaces::norm_exact(&d, &x.restrict(w[0], w[1] - 1)).unwrap();
            }
            prop_assert!(ratio(1, 2) * sum <= n);
        }
    }

    #[test]
    fn families_are_hereditary_and_spreading(xi in ordinal(), f in set(), drop in 0usize..6, shift in prop::collection::vec(0u32..3, 6)) {
        if schreier::member(&xi, &f) {
            let mut sub = f.clone().into_vec();
            if !sub.is_empty() {
                sub.remove(drop % sub.len());
            }
            prop_assert!(schreier::member(&xi, &FiniteSet::new(sub).unwrap()));
            let mut acc = 0;
            let spread: Vec<u32> = f.iter().enumerate().map(|(i, e)| { acc += shift[i]; e + acc }).collect();
            prop_assert!(schreier::member(&xi, &FiniteSet::new(spread).unwrap()));
            prop_assert!(schreier::member(&xi.successor(), &f));
        }
    }

    #[test]
    fn literals_round_trip(xi in ordinal(), f in set(), x in vector(), other in ordinal()) {
        prop_assert_eq!(xi.to_string().parse::<Ordinal>().unwrap(), xi.clone());
        prop_assert_eq!(f.to_string().parse::<FiniteSet>().unwrap(), f);
        prop_assert_eq!(x.to_string().parse::<RationalVector>().unwrap(), x);
        let sum = xi.add(&other);
        prop_assert_eq!(sum.to_string().parse::<Ordinal>().unwrap(), sum.clone());
        prop_assert!(sum >= other);
        for d in descriptors() {
            prop_assert_eq!(d.to_string().parse::<NormDescriptor>().unwrap(), d);
        }
    }

    #[test]
    fn operators_act_linearly(x in vector(), y in vector(), c in rational()) {
        let ops = [
            Operator::diagonal("l1".parse().unwrap(), "1/i").unwrap(),
            Operator::diagonal("linf".parse().unwrap(), "(i-3)^2/(i+1)").unwrap(),
            Operator::from_spec("domain l1\ncodomain l2\naction identity").unwrap(),
        ];
        for t in &ops {
            let lhs = t.apply(&x.scale(&c).add(&y)).unwrap();
            let rhs = t.apply(&x).unwrap().scale(&c).add(&t.apply(&y).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn diagonal_admission_is_the_closed_form(node in prop::collection::btree_set(1u32..=8, 1..=3), m in 1u32..=6, shift in 0u32..=3) {
        let rule = format!("1/(i+{shift})");
        let t = Operator::diagonal("l1".parse().unwrap(), &rule).unwrap();
        let seq = BasicSequence::unit_vectors(&t.domain, 8).unwrap();
        let node: Vec<u32> = node.into_iter().collect();
        let least = node.iter().map(|&l| ratio(1, (l + shift) as i64)).min().unwrap();
        let closed = least >= ratio(1, m as i64);
        prop_assert_eq!(node_admitted(&t, m, &seq, &node).unwrap(), closed);
        if closed {
            prop_assert!(node_admitted(&t, m + 1, &seq, &node).unwrap());
        }
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn certificates_persist_up_the_hierarchy(shift in 0u32..=4, eps in 1i64..=6) {
        let t = Operator::diagonal("l1".parse().unwrap(), &format!("(i+{shift})/(i*i)")).unwrap();
        let seq = BasicSequence::unit_vectors(&t.domain, 6).unwrap();
        let config = SearchConfig::default();
        let epsilon = ratio(1, eps);
        let mut previous: Option<bool> = None;
        for xi in ["0", "1", "2"] {
            let out = witness_search(&t, &xi.parse().unwrap(), &epsilon, &seq, &config).unwrap();
            prop_assert!(out.exhaustive);
            if let Some(c) = &out.certificate {
                prop_assert!(c.verify(&t, &seq).unwrap());
            }
            if previous == Some(true) {
                prop_assert!(out.success());
            }
            previous = Some(out.success());
        }
    }
}
