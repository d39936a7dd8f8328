use num_traits::Zero;
use proptest::prelude::*;

use hyperspaces::element::{Carrier, Element, FiniteSet, Rational};
use hyperspaces::format::{parse_structure, serialize_structure, StructureDoc};
use hyperspaces::hyperspace::{
    find_representation, is_linearly_dependent, linear_combination, CoefficientPool, HyperVectorSpace, StarOp,
};
use hyperspaces::hyperstructures::{check_hypergroup, Hypergroup};
use hyperspaces::inner::{check_cauchy_schwarz, gram_schmidt, is_orthogonal_set, InnerProduct};
use hyperspaces::search::{enumerate_hypergroups, hypergroup_key, SearchKind, SearchSpec};
use hyperspaces::setalg::HyperOp;
use hyperspaces::violation::CheckOptions;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn small_vec(d: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-2i64..=2, d)
}

fn ratio_vec(d: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-9i64..=9, 1i64..=5).prop_map(|(n, d)| Rational::new(n.into(), d.into())), d)
}

fn det2(u: &[i64], v: &[i64]) -> i64 {
    u[0] * v[1] - u[1] * v[0]
}

fn table_hypergroup(n: usize, masks: &[u32]) -> Hypergroup {
    let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let carrier = Carrier::atoms(&names).unwrap();
    let elems = carrier.elements().unwrap().to_vec();
    let cells: Vec<FiniteSet> =
        masks.iter().map(|m| (0..n).filter(|k| m & (1 << k) != 0).map(|k| elems[k].clone()).collect()).collect();
    Hypergroup::new(HyperOp::table(carrier, cells).unwrap(), false)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // With coordinates and coefficients in [-2, 2], a pair in Q^2 has a pool
    // relation exactly when its determinant vanishes.
    #[test]
    fn pair_dependence_matches_determinant(u in small_vec(2), v in small_vec(2)) {
        let w = HyperVectorSpace::rational(2, StarOp::scale());
        let pool = CoefficientPool::new(&w, (-2..=2).map(Element::int)).unwrap();
        let vs = [Element::vector(u.clone()), Element::vector(v.clone())];
        let d = is_linearly_dependent(&w, &vs, &pool).unwrap();
        prop_assert_eq!(d.dependent, det2(&u, &v) == 0);
        if let Some(c) = d.witness {
            let c: Vec<i64> = c.iter().map(|e| e.as_rational().unwrap().to_integer().try_into().unwrap()).collect();
            prop_assert!(c.iter().any(|x| *x != 0));
            prop_assert_eq!(c[0] * u[0] + c[1] * v[0], 0);
            prop_assert_eq!(c[0] * u[1] + c[1] * v[1], 0);
        }
    }

    // A representation found by the bounded search reproduces the target classically.
    #[test]
    fn representations_replay(vs in prop::collection::vec(small_vec(2), 1..=3), t in small_vec(2)) {
        let w = HyperVectorSpace::rational(2, StarOp::scale());
        let pool = CoefficientPool::new(&w, (-2..=2).map(Element::int)).unwrap();
        let elems: Vec<Element> = vs.iter().map(|v| Element::vector(v.clone())).collect();
        if let Some(c) = find_representation(&w, &elems, &Element::vector(t.clone()), &pool).unwrap() {
            let mut acc = [q(0), q(0)];
            for (ci, v) in c.iter().zip(&vs) {
                let ci = ci.as_rational().unwrap();
                acc[0] += ci * q(v[0]);
                acc[1] += ci * q(v[1]);
            }
            prop_assert_eq!(acc.to_vec(), vec![q(t[0]), q(t[1])]);
            let combo = linear_combination(&w, &c, &elems).unwrap();
            prop_assert!(combo.contains(&Element::vector(t)));
        }
    }

    #[test]
    fn cauchy_schwarz_holds_for_dot(a in ratio_vec(3), b in ratio_vec(3)) {
        let ip = InnerProduct::dot();
        let pairs = [(Element::Vector(a), Element::Vector(b))];
        prop_assert!(check_cauchy_schwarz(&ip, &pairs, &CheckOptions::default()).unwrap().is_empty());
    }

    // Output of Gram-Schmidt on independent input is orthogonal and each
    // output differs from its input by a combination of earlier outputs.
    #[test]
    fn gram_schmidt_outputs_are_orthogonal(a in ratio_vec(3), b in ratio_vec(3), c in ratio_vec(3)) {
        let det = &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
            + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0]);
        prop_assume!(!det.is_zero());
        let w = HyperVectorSpace::rational(3, StarOp::scale());
        let ip = InnerProduct::dot();
        let input = [Element::Vector(a.clone()), Element::Vector(b), Element::Vector(c)];
        let gs = gram_schmidt(&w, &ip, &input).unwrap();
        prop_assert!(is_orthogonal_set(&ip, &gs.vectors).unwrap());
        prop_assert_eq!(&gs.vectors[0], &input[0]);
        for st in &gs.steps {
            prop_assert_eq!(st.candidates.len(), 1);
            prop_assert_eq!(st.candidates.first().unwrap(), &st.chosen);
        }
    }

    // Structure files round-trip for arbitrary tables, hypergroup or not.
    #[test]
    fn hypergroup_tables_round_trip(n in 1usize..=3, seed in prop::collection::vec(1u32..8, 9)) {
        let masks: Vec<u32> = seed.iter().take(n * n).map(|m| m & ((1 << n) - 1)).map(|m| if m == 0 { 1 } else { m }).collect();
        let doc = StructureDoc::from_hypergroup(&table_hypergroup(n, &masks)).unwrap();
        let text = serialize_structure(&doc);
        prop_assert_eq!(parse_structure(&text).unwrap(), doc);
    }

    // Parsing is total: arbitrary text yields a document or a located error.
    #[test]
    fn parse_never_panics(text in "[a-z0-9 {}(),=+*./#\n-]{0,200}") {
        match parse_structure(&text) {
            Ok(_) | Err(hyperspaces::Error::Parse { .. }) => {}
            Err(e) => prop_assert!(false, "non-parse error {e}"),
        }
    }

    // Canonical keys do not depend on labels outside the fixed zero.
    #[test]
    fn census_keys_are_relabeling_invariant(idx in 0usize..8, perm in Just([0usize, 2, 1])) {
        let out = enumerate_hypergroups(&SearchSpec::new(SearchKind::Hypergroup, 3).commutative(true).zero(0)).unwrap();
        let e = &out.entries[idx % out.entries.len()];
        let mut relabeled = vec![0u32; 9];
        for i in 0..3 {
            for j in 0..3 {
                let m = e.add[i * 3 + j];
                let pm = (0..3).filter(|k| m & (1 << k) != 0).fold(0, |acc, k| acc | (1 << perm[k]));
                relabeled[perm[i] * 3 + perm[j]] = pm;
            }
        }
        prop_assert_eq!(hypergroup_key(3, &relabeled, &[0]).0, e.key.clone());
        prop_assert!(check_hypergroup(&table_hypergroup(3, &relabeled), &CheckOptions::default()).unwrap().is_hypergroup);
    }
}

#[test]
fn catalog_entries_replay() {
    for kind in [SearchKind::Hypergroup, SearchKind::Hyperfield] {
        let spec = SearchSpec::new(kind, 2).commutative(true).zero(0);
        let out = match kind {
            SearchKind::Hypergroup => enumerate_hypergroups(&spec).unwrap(),
            _ => hyperspaces::search::enumerate_hyperfields(&spec).unwrap(),
        };
        assert!(!out.entries.is_empty());
        for e in &out.entries {
            assert!(e.replay().unwrap(), "{}", e.key);
        }
    }
}
