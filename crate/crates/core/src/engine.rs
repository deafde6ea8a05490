//! ρ-bisimulations between set-based coalgebras.
//!
//! A relation `B` is a ρ-bisimulation when, for every `(x1, x2) ∈ B`, every
//! lifting `λ` and every `B`-coherent pair `(a1, a2)`,
//! `γ1(x1) ∈ λ(a1)` iff `γ2(x2) ∈ λ(a2)`. The operator [`refine`] collects the
//! state pairs whose behaviours pass this test; its post-fixpoints are the
//! ρ-bisimulations and its greatest fixpoint is ρ-bisimilarity.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Rational;
use crate::logics::{set_theory_kernel, Domain, Lifting, Logic};
use crate::models::{check_same_alphabet, Behaviour, SetCoalgebra};
use crate::relations::{coherent_generators, coherent_pairs_bounded, CoherentPair, Relation, DEFAULT_COHERENT_BOUND};

/// How the coherent predicate arguments are produced.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoherentMode {
    /// Every coherent pair, bounded by [`CheckOptions::bound`].
    #[default]
    BruteForce,
    /// Only the principal coherent pairs. Sound for join-preserving
    /// signatures, refused otherwise.
    Generators,
    /// Brute force within the bound, generators beyond it.
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    pub mode: CoherentMode,
    pub bound: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            mode: CoherentMode::BruteForce,
            bound: DEFAULT_COHERENT_BOUND,
        }
    }
}

impl CheckOptions {
    pub fn generators() -> Self {
        CheckOptions {
            mode: CoherentMode::Generators,
            ..Self::default()
        }
    }
}

/// A violation of the bisimulation condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Set {
        pair: (usize, usize),
        lifting: String,
        coherent: Option<CoherentPair>,
    },
    Linear {
        /// The basis vector `(x1, x2)` of the relation that fails.
        vector: Vec<Rational>,
        lifting: String,
        /// The dual pair `(h1 | h2)` separating the successors, if any.
        dual_pair: Option<Vec<Rational>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BisimReport {
    pub verdict: bool,
    pub witness: Option<Witness>,
    pub iterations: usize,
}

impl BisimReport {
    pub(crate) fn pass(iterations: usize) -> Self {
        BisimReport {
            verdict: true,
            witness: None,
            iterations,
        }
    }

    pub(crate) fn fail(witness: Witness) -> Self {
        BisimReport {
            verdict: false,
            witness: Some(witness),
            iterations: 0,
        }
    }
}

pub(crate) fn set_liftings(logic: &Logic, m1: &dyn SetCoalgebra, m2: &dyn SetCoalgebra) -> Result<Vec<Lifting>> {
    if logic.domain() != Domain::Sets {
        return Err(Error::BaseMismatch {
            logic: logic.name().to_string(),
            model: m1.kind(),
        });
    }
    check_same_alphabet(m1, m2)?;
    Ok(logic.liftings(m1.labels(), m1.props()))
}

fn check_shape(b: &Relation, m1: &dyn SetCoalgebra, m2: &dyn SetCoalgebra) -> Result<()> {
    let expected = (m1.num_states(), m2.num_states());
    if b.shape() != expected {
        return Err(Error::ShapeMismatch {
            expected,
            found: b.shape(),
        });
    }
    Ok(())
}

/// The coherent predicate arguments the check quantifies over.
pub fn coherent_arguments(logic: &Logic, b: &Relation, opts: &CheckOptions) -> Result<Vec<CoherentPair>> {
    let (n1, n2) = b.shape();
    let generators = || {
        if !logic.is_join_preserving() {
            return Err(Error::NotJoinPreserving(logic.name().to_string()));
        }
        let mut g = coherent_generators(b);
        g.sort();
        g.dedup();
        Ok(g)
    };
    match opts.mode {
        CoherentMode::BruteForce => coherent_pairs_bounded(b, opts.bound),
        CoherentMode::Generators => generators(),
        CoherentMode::Auto if n1 + n2 <= opts.bound => coherent_pairs_bounded(b, opts.bound),
        CoherentMode::Auto => generators(),
    }
}

/// First `(lifting, argument index)` on which the two behaviours disagree.
fn first_violation(liftings: &[Lifting], t1: &Behaviour, t2: &Behaviour, args: &[CoherentPair]) -> Option<(Lifting, Option<usize>)> {
    for &l in liftings {
        if l.arity() == 0 {
            if l.contains(t1, None) != l.contains(t2, None) {
                return Some((l, None));
            }
            continue;
        }
        for (k, p) in args.iter().enumerate() {
            if l.contains(t1, Some(&p.left)) != l.contains(t2, Some(&p.right)) {
                return Some((l, Some(k)));
            }
        }
    }
    None
}

fn behaviours(m: &dyn SetCoalgebra) -> Vec<Behaviour> {
    (0..m.num_states()).map(|x| m.behaviour(x)).collect()
}

pub fn check_rho_bisim(logic: &Logic, m1: &dyn SetCoalgebra, m2: &dyn SetCoalgebra, b: &Relation) -> Result<BisimReport> {
    check_rho_bisim_with(logic, m1, m2, b, &CheckOptions::default())
}

/// Checks the bisimulation condition on every pair of `b`. On failure the
/// witness is the first violation in scan order: state pairs, then
/// liftings, then coherent pairs.
pub fn check_rho_bisim_with(
    logic: &Logic,
    m1: &dyn SetCoalgebra,
    m2: &dyn SetCoalgebra,
    b: &Relation,
    opts: &CheckOptions,
) -> Result<BisimReport> {
    let liftings = set_liftings(logic, m1, m2)?;
    check_shape(b, m1, m2)?;
    if b.is_empty() {
        return Ok(BisimReport::pass(0));
    }
    let args = coherent_arguments(logic, b, opts)?;
    let (t1, t2) = (behaviours(m1), behaviours(m2));
    let pairs: Vec<(usize, usize)> = b.pairs().collect();
    let found = pairs.par_iter().find_map_first(|&(i, j)| {
        first_violation(&liftings, &t1[i], &t2[j], &args).map(|v| (i, j, v))
    });
    Ok(match found {
        None => BisimReport::pass(0),
        Some((i, j, (l, k))) => BisimReport::fail(Witness::Set {
            pair: (i, j),
            lifting: l.name(m1.labels(), m1.props()),
            coherent: k.map(|k| args[k].clone()),
        }),
    })
}

/// The lifted relation between one-step behaviours, restricted to the
/// behaviours that actually occur as `γ1(x1)` and `γ2(x2)`.
#[derive(Clone, Debug)]
pub struct LiftedRelation {
    /// Distinct behaviours of `X1`, in order of first occurrence.
    pub left: Vec<Behaviour>,
    pub right: Vec<Behaviour>,
    /// Index into `left` of `γ1(x1)` for each state.
    pub left_of_state: Vec<usize>,
    pub right_of_state: Vec<usize>,
    related: FixedBitSet,
}

impl LiftedRelation {
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.related.contains(i * self.right.len() + j)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.right.len();
        self.related.ones().map(move |k| (k / w, k % w))
    }

    /// Whether `(γ1(x1), γ2(x2))` is in the lifted relation.
    pub fn relates_states(&self, x1: usize, x2: usize) -> bool {
        self.contains(self.left_of_state[x1], self.right_of_state[x2])
    }
}

fn distinct_behaviours(m: &dyn SetCoalgebra) -> (Vec<Behaviour>, Vec<usize>) {
    let mut index = HashMap::new();
    let mut distinct = Vec::new();
    let of_state = (0..m.num_states())
        .map(|x| {
            let t = m.behaviour(x);
            *index.entry(t.clone()).or_insert_with(|| {
                distinct.push(t);
                distinct.len() - 1
            })
        })
        .collect();
    (distinct, of_state)
}

pub fn lift_relation(logic: &Logic, m1: &dyn SetCoalgebra, m2: &dyn SetCoalgebra, b: &Relation) -> Result<LiftedRelation> {
    lift_relation_with(logic, m1, m2, b, &CheckOptions::default())
}

pub fn lift_relation_with(
    logic: &Logic,
    m1: &dyn SetCoalgebra,
    m2: &dyn SetCoalgebra,
    b: &Relation,
    opts: &CheckOptions,
) -> Result<LiftedRelation> {
    let liftings = set_liftings(logic, m1, m2)?;
    check_shape(b, m1, m2)?;
    let args = coherent_arguments(logic, b, opts)?;
    let (left, left_of_state) = distinct_behaviours(m1);
    let (right, right_of_state) = distinct_behaviours(m2);
    let w = right.len();
    let cells: Vec<bool> = (0..left.len() * w)
        .into_par_iter()
        .map(|k| first_violation(&liftings, &left[k / w], &right[k % w], &args).is_none())
        .collect();
    let mut related = FixedBitSet::with_capacity(left.len() * w);
    for (k, ok) in cells.into_iter().enumerate() {
        related.set(k, ok);
    }
    Ok(LiftedRelation {
        left,
        right,
        left_of_state,
        right_of_state,
        related,
    })
}

/// One application of the monotone operator: the state pairs whose
/// behaviours are related by the lifting of `b`.
pub fn refine(logic: &Logic, m1: &dyn SetCoalgebra, m2: &dyn SetCoalgebra, b: &Relation) -> Result<Relation> {
    refine_with(logic, m1, m2, b, &CheckOptions::default())
}

pub fn refine_with(
    logic: &Logic,
    m1: &dyn SetCoalgebra,
    m2: &dyn SetCoalgebra,
    b: &Relation,
    opts: &CheckOptions,
) -> Result<Relation> {
    let lifted = lift_relation_with(logic, m1, m2, b, opts)?;
    let (n1, n2) = (m1.num_states(), m2.num_states());
    let mut out = Relation::empty(n1, n2);
    for x1 in 0..n1 {
        for x2 in 0..n2 {
            if lifted.relates_states(x1, x2) {
                out.insert(x1, x2);
            }
        }
    }
    Ok(out)
}

pub fn greatest_rho_bisim(logic: &Logic, m1: &dyn SetCoalgebra, m2: &dyn SetCoalgebra) -> Result<(Relation, BisimReport)> {
    greatest_rho_bisim_with(logic, m1, m2, &CheckOptions::default())
}

/// Iterates [`refine`] from the total relation until it stabilises. The
/// report's `iterations` counts applications of the operator, at most
/// `n1·n2 + 1`.
pub fn greatest_rho_bisim_with(
    logic: &Logic,
    m1: &dyn SetCoalgebra,
    m2: &dyn SetCoalgebra,
    opts: &CheckOptions,
) -> Result<(Relation, BisimReport)> {
    let mut current = Relation::total(m1.num_states(), m2.num_states());
    let mut iterations = 0;
    loop {
        let next = refine_with(logic, m1, m2, &current, opts)?;
        iterations += 1;
        if next == current {
            return Ok((current, BisimReport::pass(iterations)));
        }
        // refine is monotone, so from the top element the sequence descends.
        debug_assert!(next.is_subset(&current));
        current = next;
    }
}

/// Whether every pair of `b` is logically equivalent under `logic`.
pub fn check_adequacy(logic: &Logic, m1: &dyn SetCoalgebra, m2: &dyn SetCoalgebra, b: &Relation) -> Result<bool> {
    Ok(b.is_subset(&set_theory_kernel(logic, m1, m2)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Lts;
    use crate::relations::{is_full, compose, join};

    fn lts(n: usize, edges: &[(usize, usize, usize)]) -> Lts {
        Lts::from_edges(n, &["a"], edges).unwrap()
    }

    /// P: p0 -a-> p1, p1 -b-> p2, p1 -c-> p3
    /// Q: q0 -a-> q1, q1 -b-> q3, q0 -a-> q2, q2 -c-> q4
    fn trace_counterexample() -> (Lts, Lts) {
        let labels = ["a", "b", "c"];
        let p = Lts::from_edges(4, &labels, &[(0, 0, 1), (1, 1, 2), (1, 2, 3)]).unwrap();
        let q = Lts::from_edges(5, &labels, &[(0, 0, 1), (1, 1, 3), (0, 0, 2), (2, 2, 4)]).unwrap();
        (p, q)
    }

    #[test]
    fn identity_and_bottom_pass() {
        let m = lts(3, &[(0, 0, 1), (1, 0, 2), (2, 0, 0), (0, 0, 2)]);
        for name in ["trace", "hm", "pml", "kripke"] {
            let logic = Logic::by_name(name).unwrap();
            assert!(check_rho_bisim(&logic, &m, &m, &Relation::identity(3)).unwrap().verdict);
            assert!(check_rho_bisim(&logic, &m, &m, &Relation::empty(3, 3)).unwrap().verdict);
        }
    }

    #[test]
    fn trace_counterexample_fails_with_witness() {
        let (p, q) = trace_counterexample();
        let trace = Logic::by_name("trace").unwrap();
        let b = Relation::from_pairs(4, 5, &[(0, 0)]).unwrap();
        let r = check_rho_bisim(&trace, &p, &q, &b).unwrap();
        assert!(!r.verdict);
        let Some(Witness::Set { pair, lifting, coherent: Some(c) }) = r.witness else {
            panic!("expected a set witness")
        };
        assert_eq!(pair, (0, 0));
        assert_eq!(lifting, "<a>");
        // the witness is a genuine violation
        assert!(b.is_coherent(&c.left, &c.right));
        let d = Lifting::Diamond(0);
        assert_ne!(d.contains(&p.behaviour(0), Some(&c.left)), d.contains(&q.behaviour(0), Some(&c.right)));
    }

    #[test]
    fn lift_relation_examples() {
        let trace = Logic::by_name("trace").unwrap();
        // B empty: only nullary constraints, T holds everywhere
        let m1 = lts(2, &[(0, 0, 1)]);
        let m2 = lts(1, &[]);
        let l = lift_relation(&trace, &m1, &m2, &Relation::empty(2, 1)).unwrap();
        // with B empty, (X1, ∅) is coherent and separates <a>
        assert!(!l.relates_states(0, 0));
        assert!(l.relates_states(1, 0));
        let l = lift_relation(&trace, &m1, &m2, &Relation::total(2, 1)).unwrap();
        assert!(!l.relates_states(0, 0));
        let id = lift_relation(&trace, &m1, &m1, &Relation::identity(2)).unwrap();
        assert!(id.relates_states(0, 0) && id.relates_states(1, 1));
    }

    #[test]
    fn refine_examples() {
        let hm = Logic::by_name("hm").unwrap();
        let loop1 = lts(1, &[(0, 0, 0)]);
        assert_eq!(refine(&hm, &loop1, &loop1, &Relation::total(1, 1)).unwrap(), Relation::total(1, 1));
        let m1 = lts(2, &[(0, 0, 1)]);
        let m2 = lts(1, &[]);
        let r = refine(&hm, &m1, &m2, &Relation::total(2, 1)).unwrap();
        assert_eq!(r.pairs().collect::<Vec<_>>(), vec![(1, 0)]);
    }

    /// Brute force: union of all relations that pass the check.
    fn brute_force_max(logic: &Logic, m1: &Lts, m2: &Lts) -> Relation {
        let (n1, n2) = (m1.num_states(), m2.num_states());
        let mut acc = Relation::empty(n1, n2);
        for mask in 0..1u64 << (n1 * n2) {
            let b = Relation::from_mask(n1, n2, mask);
            if check_rho_bisim(logic, m1, m2, &b).unwrap().verdict {
                acc.union_with(&b);
            }
        }
        acc
    }

    #[test]
    fn gfp_small_example() {
        let hm = Logic::by_name("hm").unwrap();
        let m1 = lts(2, &[(0, 0, 1)]);
        let m2 = lts(3, &[(0, 0, 1), (0, 0, 2)]);
        let expected = Relation::from_pairs(2, 3, &[(0, 0), (1, 1), (1, 2)]).unwrap();
        assert_eq!(brute_force_max(&hm, &m1, &m2), expected);
        let (g, rep) = greatest_rho_bisim(&hm, &m1, &m2).unwrap();
        assert_eq!(g, expected);
        assert!(rep.verdict && rep.iterations <= 7);
        assert!(check_adequacy(&hm, &m1, &m2, &g).unwrap());
    }

    #[test]
    fn gfp_trace_counterexample() {
        let (p, q) = trace_counterexample();
        let trace = Logic::by_name("trace").unwrap();
        let (g, _) = greatest_rho_bisim(&trace, &p, &q).unwrap();
        assert!(!g.contains(0, 0));
        let same = greatest_rho_bisim(&trace, &p, &p).unwrap().0;
        assert!(Relation::identity(4).is_subset(&same));
    }

    #[test]
    fn generator_mode_agrees_and_refuses_boxes() {
        let hm = Logic::by_name("hm").unwrap();
        let m1 = lts(3, &[(0, 0, 1), (1, 0, 2), (0, 0, 2)]);
        let m2 = lts(3, &[(0, 0, 1), (1, 0, 1), (2, 0, 0)]);
        for mask in 0..1u64 << 9 {
            let b = Relation::from_mask(3, 3, mask);
            let brute = check_rho_bisim(&hm, &m1, &m2, &b).unwrap().verdict;
            let gens = check_rho_bisim_with(&hm, &m1, &m2, &b, &CheckOptions::generators()).unwrap().verdict;
            assert_eq!(brute, gens, "{b:?}");
        }
        let pml = Logic::by_name("pml").unwrap();
        let err = check_rho_bisim_with(&pml, &m1, &m2, &Relation::identity(3), &CheckOptions::generators()).unwrap_err();
        assert!(matches!(err, Error::NotJoinPreserving(_)));
    }

    #[test]
    fn post_fixpoint_join_and_full_composition() {
        let hm = Logic::by_name("hm").unwrap();
        let m1 = lts(2, &[(0, 0, 1), (1, 0, 1)]);
        let m2 = lts(3, &[(0, 0, 1), (1, 0, 2), (2, 0, 2)]);
        let mut passing = Vec::new();
        for mask in 0..1u64 << 6 {
            let b = Relation::from_mask(2, 3, mask);
            let ok = check_rho_bisim(&hm, &m1, &m2, &b).unwrap().verdict;
            assert_eq!(ok, b.is_subset(&refine(&hm, &m1, &m2, &b).unwrap()));
            if ok {
                passing.push(b);
            }
        }
        let all = join(2, 3, &passing).unwrap();
        assert!(check_rho_bisim(&hm, &m1, &m2, &all).unwrap().verdict);
        let back: Vec<_> = passing.iter().map(Relation::converse).collect();
        for b in passing.iter().filter(|b| is_full(b)) {
            for c in back.iter().filter(|c| is_full(c)) {
                let comp = compose(b, c).unwrap();
                assert!(check_rho_bisim(&hm, &m1, &m1, &comp).unwrap().verdict);
            }
        }
    }

    #[test]
    fn shape_errors() {
        let hm = Logic::by_name("hm").unwrap();
        let m = lts(2, &[]);
        assert!(matches!(
            check_rho_bisim(&hm, &m, &m, &Relation::empty(2, 3)),
            Err(Error::ShapeMismatch { .. })
        ));
        let other = Lts::from_edges(2, &["b"], &[]).unwrap();
        assert!(matches!(
            check_rho_bisim(&hm, &m, &other, &Relation::empty(2, 2)),
            Err(Error::LabelMismatch { .. })
        ));
    }
}
