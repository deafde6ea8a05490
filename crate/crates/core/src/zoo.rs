//! Classical notions of equivalence for set-based systems and how they
//! compare with ρ-bisimulations: T-bisimulations, precocongruences,
//! behavioural equivalence, logic translations and Hennessy-Milner checks.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{check_rho_bisim, greatest_rho_bisim};
use crate::error::{Error, Result};
use crate::linear::greatest_linear_bisim;
use crate::logics::{theory_kernel, Formula, Kernel, Logic};
use crate::models::{check_same_alphabet, Model, SetCoalgebra};
use crate::relations::Relation;

fn check_shape(m1: &dyn SetCoalgebra, m2: &dyn SetCoalgebra, b: &Relation) -> Result<()> {
    check_same_alphabet(m1, m2)?;
    let expected = (m1.num_states(), m2.num_states());
    if b.shape() != expected {
        return Err(Error::ShapeMismatch {
            expected,
            found: b.shape(),
        });
    }
    Ok(())
}

fn same_props(m1: &dyn SetCoalgebra, x1: usize, m2: &dyn SetCoalgebra, x2: usize) -> bool {
    (0..m1.props().len()).all(|p| m1.prop_holds(x1, p) == m2.prop_holds(x2, p))
}

/// Back-and-forth on one pair, against relation `r`.
fn back_and_forth(m1: &dyn SetCoalgebra, m2: &dyn SetCoalgebra, r: &Relation, x1: usize, x2: usize) -> bool {
    same_props(m1, x1, m2, x2)
        && (0..m1.labels().len()).all(|a| {
            let (s1, s2) = (m1.successors(x1, a), m2.successors(x2, a));
            s1.ones().all(|y1| s2.ones().any(|y2| r.contains(y1, y2)))
                && s2.ones().all(|y2| s1.ones().any(|y1| r.contains(y1, y2)))
        })
}

/// Whether `b` is a bisimulation in the classical sense: the projections
/// extend to coalgebra morphisms out of `b`.
pub fn check_t_bisim(m1: &dyn SetCoalgebra, m2: &dyn SetCoalgebra, b: &Relation) -> Result<bool> {
    check_shape(m1, m2, b)?;
    Ok(b.pairs().all(|(x1, x2)| back_and_forth(m1, m2, b, x1, x2)))
}

/// Largest T-bisimulation, by deleting pairs that fail back-and-forth.
pub fn greatest_t_bisim(m1: &dyn SetCoalgebra, m2: &dyn SetCoalgebra) -> Result<Relation> {
    check_same_alphabet(m1, m2)?;
    let mut r = Relation::total(m1.num_states(), m2.num_states());
    loop {
        let bad: Vec<(usize, usize)> = r.pairs().filter(|&(x1, x2)| !back_and_forth(m1, m2, &r, x1, x2)).collect();
        if bad.is_empty() {
            return Ok(r);
        }
        for (x1, x2) in bad {
            r.remove(x1, x2);
        }
    }
}

/// The quotient of `X1 ⊎ X2` by the equivalence generated by a relation.
/// States of `X2` are numbered from `n1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pushout {
    /// Classes in order of their least member, each sorted ascending.
    pub classes: Vec<Vec<usize>>,
    /// Class id of every state of the union.
    pub class_of: Vec<usize>,
}

impl Pushout {
    pub fn of(b: &Relation) -> Pushout {
        let (n1, n2) = b.shape();
        let mut parent: Vec<usize> = (0..n1 + n2).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (i, j) in b.pairs() {
            let (a, c) = (find(&mut parent, i), find(&mut parent, n1 + j));
            if a != c {
                parent[a.max(c)] = a.min(c);
            }
        }
        let mut ids = HashMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut class_of = Vec::with_capacity(n1 + n2);
        for x in 0..n1 + n2 {
            let root = find(&mut parent, x);
            let id = *ids.entry(root).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[id].push(x);
            class_of.push(id);
        }
        Pushout { classes, class_of }
    }

    /// `q(x1)` and `q(x2)` for the two injections.
    pub fn left(&self, x1: usize) -> usize {
        self.class_of[x1]
    }

    pub fn right(&self, n1: usize, x2: usize) -> usize {
        self.class_of[n1 + x2]
    }
}

/// `(props, a ↦ q[γ(x)(a)])` for a state of the union.
type QuotientBehaviour = (Vec<bool>, Vec<BTreeSet<usize>>);

fn quotient_behaviour(m: &dyn SetCoalgebra, x: usize, q: impl Fn(usize) -> usize) -> QuotientBehaviour {
    (
        (0..m.props().len()).map(|p| m.prop_holds(x, p)).collect(),
        (0..m.labels().len())
            .map(|a| m.successors(x, a).ones().map(&q).collect())
            .collect(),
    )
}

/// Whether the pushout of `b` carries a coalgebra structure making both
/// quotient maps morphisms: states in one class must have equal quotient
/// behaviours.
pub fn check_precocongruence(m1: &dyn SetCoalgebra, m2: &dyn SetCoalgebra, b: &Relation) -> Result<bool> {
    check_shape(m1, m2, b)?;
    let n1 = m1.num_states();
    let po = Pushout::of(b);
    let beh = |x: usize| {
        if x < n1 {
            quotient_behaviour(m1, x, |y| po.left(y))
        } else {
            quotient_behaviour(m2, x - n1, |y| po.right(n1, y))
        }
    };
    Ok(po.classes.iter().all(|class| {
        let first = beh(class[0]);
        class[1..].iter().all(|&x| beh(x) == first)
    }))
}

/// Greatest behavioural equivalence, by signature refinement on the union:
/// each round a state's new block is determined by its old block, its
/// propositions and the set of blocks reached per label.
pub fn behavioural_equivalence(m1: &dyn SetCoalgebra, m2: &dyn SetCoalgebra) -> Result<Relation> {
    check_same_alphabet(m1, m2)?;
    let (n1, n2) = (m1.num_states(), m2.num_states());
    let mut block = vec![0usize; n1 + n2];
    let mut count = 1;
    loop {
        let mut ids: HashMap<(usize, QuotientBehaviour), usize> = HashMap::new();
        let next: Vec<usize> = (0..n1 + n2)
            .map(|x| {
                let sig = if x < n1 {
                    quotient_behaviour(m1, x, |y| block[y])
                } else {
                    quotient_behaviour(m2, x - n1, |y| block[n1 + y])
                };
                let fresh = ids.len();
                *ids.entry((block[x], sig)).or_insert(fresh)
            })
            .collect();
        block = next;
        if ids.len() == count {
            break;
        }
        count = ids.len();
    }
    let mut r = Relation::empty(n1, n2);
    for i in 0..n1 {
        for j in 0..n2 {
            if block[i] == block[n1 + j] {
                r.insert(i, j);
            }
        }
    }
    Ok(r)
}

/// Embeds a trace formula into Hennessy-Milner syntax: `T ↦ T`,
/// `<a>φ ↦ <a>τ(φ)`.
pub fn translate_formula(phi: &Formula) -> Result<Formula> {
    match phi {
        Formula::Top => Ok(Formula::Top),
        Formula::Dia(a, f) => Ok(Formula::Dia(a.clone(), Box::new(translate_formula(f)?))),
        other => Err(Error::IllFormedFormula {
            logic: "trace".into(),
            formula: other.to_string(),
        }),
    }
}

/// Relations on which two logics disagree about being a ρ-bisimulation.
#[derive(Clone, Debug, Serialize)]
pub struct Discrepancy {
    pub logics: (String, String),
    pub relation: Vec<(usize, usize)>,
    pub verdicts: (bool, bool),
}

#[derive(Clone, Debug, Serialize)]
pub struct TranslationReport {
    pub relations_checked: usize,
    pub exhaustive: bool,
    pub trace_hm_equal: bool,
    pub pml_diamond_equal: bool,
    pub passing: usize,
    pub discrepancies: Vec<Discrepancy>,
}

impl TranslationReport {
    pub fn equal(&self) -> bool {
        self.trace_hm_equal && self.pml_diamond_equal
    }
}

/// Relations examined exhaustively up to this many state pairs.
pub const EXHAUSTIVE_PAIRS: usize = 12;
/// Sample size above [`EXHAUSTIVE_PAIRS`].
pub const SAMPLED_RELATIONS: usize = 512;

/// Compares which relations are ρ-bisimulations for trace versus hm logic,
/// and for pml versus the diamond-only signature: every relation when
/// `n1·n2 ≤ 12`, otherwise a fixed pseudo-random sample.
pub fn check_translation_invariance(m1: &dyn SetCoalgebra, m2: &dyn SetCoalgebra) -> Result<TranslationReport> {
    check_same_alphabet(m1, m2)?;
    let (n1, n2) = (m1.num_states(), m2.num_states());
    let cells = n1 * n2;
    let exhaustive = cells <= EXHAUSTIVE_PAIRS;
    let relations: Vec<Relation> = if exhaustive {
        (0..1u64 << cells).map(|m| Relation::from_mask(n1, n2, m)).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        (0..SAMPLED_RELATIONS)
            .map(|_| {
                let mut r = Relation::empty(n1, n2);
                for i in 0..n1 {
                    for j in 0..n2 {
                        if rng.gen_bool(0.3) {
                            r.insert(i, j);
                        }
                    }
                }
                r
            })
            .collect()
    };
    let named = |n: &str| Logic::by_name(n).expect("builtin");
    let pairs = [
        (named("trace"), named("hm")),
        (named("pml"), Logic::diamond_only()),
    ];
    let results: Vec<Result<(bool, Vec<Discrepancy>)>> = relations
        .par_iter()
        .map(|b| {
            let mut found = Vec::new();
            let mut passes = false;
            for (l1, l2) in &pairs {
                let v1 = check_rho_bisim(l1, m1, m2, b)?.verdict;
                let v2 = check_rho_bisim(l2, m1, m2, b)?.verdict;
                passes |= v1;
                if v1 != v2 {
                    found.push(Discrepancy {
                        logics: (l1.name().into(), l2.name().into()),
                        relation: b.pairs().collect(),
                        verdicts: (v1, v2),
                    });
                }
            }
            Ok((passes, found))
        })
        .collect();
    let mut discrepancies = Vec::new();
    let mut passing = 0;
    for r in results {
        let (p, d) = r?;
        passing += p as usize;
        discrepancies.extend(d);
    }
    Ok(TranslationReport {
        relations_checked: relations.len(),
        exhaustive,
        trace_hm_equal: !discrepancies.iter().any(|d| d.logics.0 == "trace"),
        pml_diamond_equal: !discrepancies.iter().any(|d| d.logics.0 == "pml"),
        passing,
        discrepancies,
    })
}

/// What the comparison theorems predict for a logic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    /// Logical equivalence and ρ-bisimilarity coincide.
    Coincide,
    /// Logical equivalence may be strictly coarser.
    KernelMayBeLarger,
    /// No claim is made.
    NoClaim,
}

impl Expectation {
    pub fn for_logic(logic: &Logic) -> Expectation {
        match logic.name() {
            "hm" | "kripke" | "linear-hm" | "linear-trace" => Expectation::Coincide,
            "trace" => Expectation::KernelMayBeLarger,
            _ => Expectation::NoClaim,
        }
    }
}

#[derive(Clone, Debug)]
pub struct HmReport {
    pub logic: String,
    pub expectation: Expectation,
    pub kernel: Kernel,
    pub gfp: Kernel,
    pub coincide: bool,
    /// Logically equivalent pairs that are not ρ-bisimilar (set systems).
    pub separating: Vec<(usize, usize)>,
}

impl HmReport {
    /// Whether the outcome is consistent with the expectation.
    pub fn as_expected(&self) -> bool {
        match self.expectation {
            Expectation::Coincide => self.coincide,
            Expectation::KernelMayBeLarger | Expectation::NoClaim => true,
        }
    }
}

/// Compares logical equivalence with ρ-bisimilarity on one instance.
pub fn hennessy_milner_check(logic: &Logic, m1: &Model, m2: &Model) -> Result<HmReport> {
    let kernel = theory_kernel(logic, m1, m2)?;
    let gfp = match (m1, m2) {
        (Model::Wa(w1), Model::Wa(w2)) => Kernel::Linear(greatest_linear_bisim(logic, w1, w2)?.0),
        _ => {
            let (s1, s2) = (m1.as_set().expect("set model"), m2.as_set().expect("set model"));
            Kernel::Set(greatest_rho_bisim(logic, s1, s2)?.0)
        }
    };
    let separating = match (&kernel, &gfp) {
        (Kernel::Set(k), Kernel::Set(g)) => k.pairs().filter(|&(i, j)| !g.contains(i, j)).collect(),
        _ => vec![],
    };
    Ok(HmReport {
        logic: logic.name().into(),
        expectation: Expectation::for_logic(logic),
        coincide: kernel == gfp,
        kernel,
        gfp,
        separating,
    })
}

/// How two relations compare under inclusion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Inclusion {
    Equal,
    Subset,
    Superset,
    Incomparable,
}

impl Inclusion {
    pub fn of(a: &Relation, b: &Relation) -> Inclusion {
        match (a.is_subset(b), b.is_subset(a)) {
            (true, true) => Inclusion::Equal,
            (true, false) => Inclusion::Subset,
            (false, true) => Inclusion::Superset,
            (false, false) => Inclusion::Incomparable,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Inclusion::Equal => "=",
            Inclusion::Subset => "⊊",
            Inclusion::Superset => "⊋",
            Inclusion::Incomparable => "#",
        }
    }
}

/// The five relations compared by the `compare` command.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub relations: Vec<(&'static str, Relation)>,
    /// `table[i][j]` compares relation `i` with relation `j`.
    pub table: Vec<Vec<Inclusion>>,
    /// Whether each relation passes its defining check.
    pub checks: Vec<(&'static str, bool)>,
}

/// Greatest T-bisimulation, greatest precocongruence, behavioural
/// equivalence, logical equivalence and ρ-bisimilarity for `logic`.
///
/// The greatest precocongruence is reported as the behavioural equivalence
/// restricted to `X1 × X2`, which is a precocongruence (checked) and
/// contains every other one.
pub fn compare(logic: &Logic, m1: &dyn SetCoalgebra, m2: &dyn SetCoalgebra) -> Result<Comparison> {
    let t = greatest_t_bisim(m1, m2)?;
    let beh = behavioural_equivalence(m1, m2)?;
    let kernel = crate::logics::set_theory_kernel(logic, m1, m2)?;
    let (gfp, _) = greatest_rho_bisim(logic, m1, m2)?;
    let checks = vec![
        ("t-bisimulation", check_t_bisim(m1, m2, &t)?),
        ("precocongruence", check_precocongruence(m1, m2, &beh)?),
        ("rho-bisimulation", check_rho_bisim(logic, m1, m2, &gfp)?.verdict),
    ];
    let relations = vec![
        ("t-bisimilarity", t),
        ("precocongruence", beh.clone()),
        ("behavioural-equivalence", beh),
        ("theory-kernel", kernel),
        ("rho-bisimilarity", gfp),
    ];
    let table = relations
        .iter()
        .map(|(_, a)| relations.iter().map(|(_, b)| Inclusion::of(a, b)).collect())
        .collect();
    Ok(Comparison {
        relations,
        table,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logics::{enumerate_formulas, eval_set_formula};
    use crate::models::Lts;

    fn pq() -> (Lts, Lts) {
        let labels = ["a", "b", "c"];
        let p = Lts::from_edges(4, &labels, &[(0, 0, 1), (1, 1, 2), (1, 2, 3)]).unwrap();
        let q = Lts::from_edges(5, &labels, &[(0, 0, 1), (1, 1, 3), (0, 0, 2), (2, 2, 4)]).unwrap();
        (p, q)
    }

    fn small() -> (Lts, Lts) {
        (
            Lts::from_edges(2, &["a"], &[(0, 0, 1)]).unwrap(),
            Lts::from_edges(3, &["a"], &[(0, 0, 1), (0, 0, 2)]).unwrap(),
        )
    }

    #[test]
    fn t_bisim_examples() {
        let (p, _) = pq();
        assert!(check_t_bisim(&p, &p, &Relation::identity(4)).unwrap());
        let m1 = Lts::from_edges(2, &["a"], &[(0, 0, 1)]).unwrap();
        let m2 = Lts::from_edges(1, &["a"], &[]).unwrap();
        assert!(!check_t_bisim(&m1, &m2, &Relation::from_pairs(2, 1, &[(0, 0)]).unwrap()).unwrap());
        let (s1, s2) = small();
        let hm = Logic::by_name("hm").unwrap();
        let (g, _) = greatest_rho_bisim(&hm, &s1, &s2).unwrap();
        assert!(check_t_bisim(&s1, &s2, &g).unwrap());
    }

    #[test]
    fn precocongruence_examples() {
        let (p, q) = pq();
        assert!(check_precocongruence(&p, &p, &Relation::identity(4)).unwrap());
        let b = Relation::from_pairs(4, 5, &[(0, 0)]).unwrap();
        assert!(!check_precocongruence(&p, &q, &b).unwrap());
        let po = Pushout::of(&b);
        // p1 and q1, q2 land in different classes
        assert_ne!(po.left(1), po.right(4, 1));
        assert_ne!(po.left(1), po.right(4, 2));
        assert_eq!(po.left(0), po.right(4, 0));
    }

    #[test]
    fn behavioural_equivalence_examples() {
        let (p, q) = pq();
        assert!(Relation::identity(4).is_subset(&behavioural_equivalence(&p, &p).unwrap()));
        assert!(!behavioural_equivalence(&p, &q).unwrap().contains(0, 0));
        let (s1, s2) = small();
        let expected = Relation::from_pairs(2, 3, &[(0, 0), (1, 1), (1, 2)]).unwrap();
        assert_eq!(behavioural_equivalence(&s1, &s2).unwrap(), expected);
        assert_eq!(greatest_t_bisim(&s1, &s2).unwrap(), expected);
    }

    #[test]
    fn translation_examples() {
        assert_eq!(translate_formula(&Formula::Top).unwrap(), Formula::Top);
        let f = Formula::trace(&["a", "b"]);
        assert_eq!(translate_formula(&f).unwrap(), f);
        assert!(translate_formula(&Formula::not(Formula::Top)).is_err());
    }

    #[test]
    fn translation_preserves_semantics() {
        let m = Lts::from_edges(4, &["a", "b"], &[(0, 0, 1), (1, 1, 2), (2, 0, 0), (3, 1, 3), (0, 1, 3)]).unwrap();
        let trace = Logic::by_name("trace").unwrap();
        let hm = Logic::by_name("hm").unwrap();
        let labels: Vec<String> = vec!["a".into(), "b".into()];
        for f in enumerate_formulas(&trace, &labels, &[], 4).unwrap() {
            let g = translate_formula(&f).unwrap();
            assert_eq!(eval_set_formula(&trace, &m, &f).unwrap(), eval_set_formula(&hm, &m, &g).unwrap());
        }
    }

    #[test]
    fn translation_invariance_small() {
        let (s1, s2) = small();
        let r = check_translation_invariance(&s1, &s2).unwrap();
        assert!(r.exhaustive && r.equal());
        assert_eq!(r.relations_checked, 64);
        let e = Lts::from_edges(0, &["a"], &[]).unwrap();
        let r = check_translation_invariance(&e, &e).unwrap();
        assert!(r.equal() && r.relations_checked == 1);
    }

    #[test]
    fn hennessy_milner_reports() {
        let (p, q) = pq();
        let (mp, mq) = (Model::Lts(p), Model::Lts(q));
        let hm = hennessy_milner_check(&Logic::by_name("hm").unwrap(), &mp, &mq).unwrap();
        assert!(hm.coincide && hm.as_expected());
        assert!(!hm.kernel.as_set().unwrap().contains(0, 0));
        let tr = hennessy_milner_check(&Logic::by_name("trace").unwrap(), &mp, &mq).unwrap();
        assert!(!tr.coincide);
        assert!(tr.separating.contains(&(0, 0)));
    }

    #[test]
    fn comparison_on_counterexample() {
        let (p, q) = pq();
        let c = compare(&Logic::by_name("hm").unwrap(), &p, &q).unwrap();
        assert!(c.table.iter().flatten().all(|&i| i == Inclusion::Equal));
        assert!(c.relations.iter().all(|(_, r)| !r.contains(0, 0)));
        assert!(c.checks.iter().all(|&(_, ok)| ok));
        let c = compare(&Logic::by_name("trace").unwrap(), &p, &q).unwrap();
        assert_eq!(c.table[3][4], Inclusion::Superset);
    }
}
