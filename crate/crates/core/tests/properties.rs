use proptest::prelude::*;
use rand::Rng;

use rhobisim::engine::{check_rho_bisim, check_rho_bisim_with, greatest_rho_bisim, refine, CheckOptions, Witness};
use rhobisim::linalg::{dot, rat, Rational};
use rhobisim::linear::{check_linear_bisim, greatest_linear_bisim, linear_refine, SubspaceRelation};
use rhobisim::logics::Logic;
use rhobisim::models::{parse_model, Model, SetCoalgebra};
use rhobisim::oracle::{oracle_check, random_kripke_pair, random_lts_pair, random_wa, random_wa_pair, seeded};
use rhobisim::relations::Relation;
use rhobisim::zoo::{check_precocongruence, check_t_bisim};

fn random_relation(rng: &mut impl Rng, n1: usize, n2: usize) -> Relation {
    let p = [0.2, 0.5, 0.8][rng.gen_range(0..3)];
    let mut r = Relation::empty(n1, n2);
    for i in 0..n1 {
        for j in 0..n2 {
            if rng.gen_bool(p) {
                r.insert(i, j);
            }
        }
    }
    r
}

fn set_logics() -> Vec<Logic> {
    let mut v: Vec<Logic> = ["trace", "hm", "pml", "kripke"].iter().map(|n| Logic::by_name(n).unwrap()).collect();
    v.push(Logic::diamond_only());
    v
}

fn rats(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&i| rat(i)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn models_round_trip(seed in any::<u64>(), n1 in 0usize..5, n2 in 0usize..5, labels in 1usize..3) {
        let mut rng = seeded(seed);
        let (l1, l2) = random_lts_pair(&mut rng, n1, n2, labels);
        let (k1, _) = random_kripke_pair(&mut rng, n1, n2, labels);
        let w = random_wa(&mut rng, n1.max(1), labels);
        for m in [Model::Lts(l1), Model::Lts(l2), Model::Kripke(k1), Model::Wa(w)] {
            let text = m.to_json();
            let back = parse_model(&text).unwrap();
            prop_assert_eq!(&back, &m);
            prop_assert_eq!(back.to_json(), text);
        }
    }

    #[test]
    fn successors_are_pure(seed in any::<u64>(), n in 1usize..6) {
        let (m, _) = random_lts_pair(&mut seeded(seed), n, 1, 2);
        for x in 0..n {
            for a in 0..2 {
                prop_assert_eq!(m.successors(x, a), m.successors(x, a));
            }
        }
    }

    #[test]
    fn step_vector_is_linear(seed in any::<u64>(), x in proptest::collection::vec(-5i64..6, 3), y in proptest::collection::vec(-5i64..6, 3), r in -4i64..5, d in 1i64..5) {
        let w = random_wa(&mut seeded(seed), 3, 2);
        let (x, y) = (rats(&x), rats(&y));
        let s = Rational::new(r.into(), d.into());
        for a in 0..2 {
            let xy: Vec<Rational> = x.iter().zip(&y).map(|(p, q)| p + q).collect();
            let sum: Vec<Rational> = w.step_vector(&x, a).unwrap().iter().zip(w.step_vector(&y, a).unwrap()).map(|(p, q)| p + q).collect();
            prop_assert_eq!(w.step_vector(&xy, a).unwrap(), sum);
            let sx: Vec<Rational> = x.iter().map(|v| v * &s).collect();
            let scaled: Vec<Rational> = w.step_vector(&x, a).unwrap().iter().map(|v| v * &s).collect();
            prop_assert_eq!(w.step_vector(&sx, a).unwrap(), scaled);
        }
    }

    #[test]
    fn check_is_post_fixpoint(seed in any::<u64>(), n1 in 1usize..5, n2 in 1usize..5) {
        let mut rng = seeded(seed);
        let labels = rng.gen_range(1..=2);
        let (m1, m2) = random_lts_pair(&mut rng, n1, n2, labels);
        for logic in set_logics() {
            for _ in 0..8 {
                let b = random_relation(&mut rng, n1, n2);
                let pass = check_rho_bisim(&logic, &m1, &m2, &b).unwrap().verdict;
                prop_assert_eq!(pass, b.is_subset(&refine(&logic, &m1, &m2, &b).unwrap()));
                prop_assert_eq!(pass, oracle_check(&logic, &m1, &m2, &b).unwrap());
            }
        }
    }

    #[test]
    fn witnesses_are_genuine(seed in any::<u64>(), n1 in 1usize..5, n2 in 1usize..5) {
        let mut rng = seeded(seed);
        let (m1, m2) = random_kripke_pair(&mut rng, n1, n2, 1);
        for logic in set_logics() {
            let b = random_relation(&mut rng, n1, n2);
            let r = check_rho_bisim(&logic, &m1, &m2, &b).unwrap();
            prop_assert_eq!(r.verdict, r.witness.is_none());
            let Some(Witness::Set { pair, lifting, coherent }) = r.witness else { continue };
            prop_assert!(b.contains(pair.0, pair.1));
            let l = logic.lifting_by_name(&lifting, m1.labels(), m1.props()).unwrap();
            let (left, right) = match &coherent {
                Some(c) => {
                    prop_assert!(b.is_coherent(&c.left, &c.right));
                    (l.holds_at(&m1, pair.0, Some(&c.left)), l.holds_at(&m2, pair.1, Some(&c.right)))
                }
                None => (l.holds_at(&m1, pair.0, None), l.holds_at(&m2, pair.1, None)),
            };
            prop_assert_ne!(left, right);
        }
    }

    #[test]
    fn coinciding_logics(seed in any::<u64>(), n1 in 1usize..5, n2 in 1usize..5) {
        let mut rng = seeded(seed);
        let (m1, m2) = random_lts_pair(&mut rng, n1, n2, 2);
        let trace = Logic::by_name("trace").unwrap();
        let hm = Logic::by_name("hm").unwrap();
        let pml = Logic::by_name("pml").unwrap();
        let dia = Logic::diamond_only();
        for _ in 0..8 {
            let b = random_relation(&mut rng, n1, n2);
            let v = |l: &Logic| check_rho_bisim(l, &m1, &m2, &b).unwrap().verdict;
            prop_assert_eq!(v(&trace), v(&hm));
            prop_assert_eq!(v(&pml), v(&dia));
        }
    }

    #[test]
    fn generator_mode_matches_brute_force(seed in any::<u64>(), n1 in 1usize..5, n2 in 1usize..5) {
        let mut rng = seeded(seed);
        let (m1, m2) = random_lts_pair(&mut rng, n1, n2, 2);
        for name in ["trace", "hm", "kripke"] {
            let logic = Logic::by_name(name).unwrap();
            let b = random_relation(&mut rng, n1, n2);
            prop_assert_eq!(
                check_rho_bisim_with(&logic, &m1, &m2, &b, &CheckOptions::generators()).unwrap().verdict,
                check_rho_bisim(&logic, &m1, &m2, &b).unwrap().verdict
            );
        }
    }

    #[test]
    fn t_bisimulations_and_precocongruences_pass(seed in any::<u64>(), n1 in 1usize..4, n2 in 1usize..4) {
        let mut rng = seeded(seed);
        let (m1, m2) = random_lts_pair(&mut rng, n1, n2, 1);
        let (g, _) = greatest_rho_bisim(&Logic::by_name("hm").unwrap(), &m1, &m2).unwrap();
        for b in [g, random_relation(&mut rng, n1, n2)] {
            if check_t_bisim(&m1, &m2, &b).unwrap() || check_precocongruence(&m1, &m2, &b).unwrap() {
                for logic in set_logics() {
                    prop_assert!(check_rho_bisim(&logic, &m1, &m2, &b).unwrap().verdict);
                }
            }
        }
    }

    #[test]
    fn linear_closed_subspaces_pass(seed in any::<u64>(), d1 in 1usize..4, d2 in 1usize..4, labels in 1usize..3) {
        let (w1, w2) = random_wa_pair(&mut seeded(seed), d1, d2, labels);
        let hm = Logic::by_name("linear-hm").unwrap();
        let tr = Logic::by_name("linear-trace").unwrap();
        let (g, _) = greatest_linear_bisim(&hm, &w1, &w2).unwrap();
        prop_assert!(check_linear_bisim(&hm, &w1, &w2, &g).unwrap().verdict);
        prop_assert!(check_linear_bisim(&hm, &w1, &w2, &SubspaceRelation::zero(d1, d2)).unwrap().verdict);
        // every single gfp vector generates a closed subspace under repeated steps
        for v in g.basis().rows() {
            let mut rows = vec![v.clone()];
            let mut frontier = vec![v.clone()];
            while let Some(u) = frontier.pop() {
                let (x1, x2) = g.split(&u);
                for a in 0..labels {
                    let mut next = w1.step_vector(x1, a).unwrap();
                    next.extend(w2.step_vector(x2, a).unwrap());
                    let span = SubspaceRelation::span(d1, d2, rows.clone()).unwrap();
                    if !span.contains(&next) {
                        rows.push(next.clone());
                        frontier.push(next);
                    }
                }
            }
            let c = SubspaceRelation::span(d1, d2, rows).unwrap();
            prop_assert!(c.is_subspace_of(&g));
            prop_assert!(c.is_subspace_of(&linear_refine(&w1, &w2, &c).unwrap()));
            prop_assert!(check_linear_bisim(&hm, &w1, &w2, &c).unwrap().verdict);
        }
        let full = SubspaceRelation::full(d1, d2);
        for b in [g.clone(), full] {
            prop_assert_eq!(
                check_linear_bisim(&hm, &w1, &w2, &b).unwrap().verdict,
                check_linear_bisim(&tr, &w1, &w2, &b).unwrap().verdict
            );
        }
    }

    #[test]
    fn linear_witnesses_are_genuine(seed in any::<u64>(), d1 in 1usize..4, d2 in 1usize..4) {
        let (w1, w2) = random_wa_pair(&mut seeded(seed), d1, d2, 2);
        let hm = Logic::by_name("linear-hm").unwrap();
        let b = SubspaceRelation::full(d1, d2);
        let r = check_linear_bisim(&hm, &w1, &w2, &b).unwrap();
        prop_assert_eq!(r.verdict, r.witness.is_none());
        if let Some(Witness::Linear { vector, lifting, dual_pair }) = r.witness {
            let (x1, x2) = vector.split_at(d1);
            match dual_pair {
                None => {
                    prop_assert_eq!(lifting.as_str(), "p");
                    prop_assert_ne!(dot(w1.output(), x1), dot(w2.output(), x2));
                }
                Some(g) => {
                    let a = w1.label_index(lifting.trim_start_matches('<').trim_end_matches('>')).unwrap();
                    let (g1, g2) = g.split_at(d1);
                    prop_assert_ne!(
                        dot(g1, &w1.step_vector(x1, a).unwrap()),
                        dot(g2, &w2.step_vector(x2, a).unwrap())
                    );
                }
            }
        }
    }
}
