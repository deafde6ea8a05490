//! Logical equivalence between the states of two systems, computed by exact
//! decision procedures rather than by truncating formulas at some depth.

use std::collections::{HashMap, HashSet, VecDeque};

use super::{Base, Domain, Lifting, Logic, Modality};
use crate::error::{Error, Result};
use crate::linear::{observability_kernel, SubspaceRelation};
use crate::models::{check_same_alphabet, check_same_labels, Model, SetCoalgebra, StateSet, WeightedAutomaton};
use crate::relations::Relation;

/// Logical equivalence as a relation or, for automata, a subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kernel {
    Set(Relation),
    Linear(SubspaceRelation),
}

impl Kernel {
    pub fn as_set(&self) -> Option<&Relation> {
        match self {
            Kernel::Set(r) => Some(r),
            Kernel::Linear(_) => None,
        }
    }

    pub fn as_linear(&self) -> Option<&SubspaceRelation> {
        match self {
            Kernel::Linear(s) => Some(s),
            Kernel::Set(_) => None,
        }
    }
}

/// `X1 ⊎ X2` as one system; states of the right summand are shifted by `n1`.
pub(crate) struct DisjointUnion {
    n1: usize,
    names: Vec<String>,
    labels: Vec<String>,
    props: Vec<String>,
    succ: Vec<Vec<StateSet>>,
    valuation: Vec<Vec<bool>>,
}

impl DisjointUnion {
    pub(crate) fn new(m1: &dyn SetCoalgebra, m2: &dyn SetCoalgebra) -> Result<Self> {
        check_same_alphabet(m1, m2)?;
        let (n1, n2) = (m1.num_states(), m2.num_states());
        let n = n1 + n2;
        let mut succ = Vec::with_capacity(n);
        let mut valuation = Vec::with_capacity(n);
        for (m, offset) in [(m1, 0), (m2, n1)] {
            for x in 0..m.num_states() {
                succ.push(
                    (0..m.labels().len())
                        .map(|a| {
                            let mut s = StateSet::with_capacity(n);
                            for y in m.successors(x, a).ones() {
                                s.insert(y + offset);
                            }
                            s
                        })
                        .collect(),
                );
                valuation.push((0..m.props().len()).map(|p| m.prop_holds(x, p)).collect());
            }
        }
        let names = m1
            .state_names()
            .iter()
            .map(|s| format!("1:{s}"))
            .chain(m2.state_names().iter().map(|s| format!("2:{s}")))
            .collect();
        Ok(DisjointUnion {
            n1,
            names,
            labels: m1.labels().to_vec(),
            props: m1.props().to_vec(),
            succ,
            valuation,
        })
    }

    /// Restricts an equivalence, given as block ids on the union, to `X1 × X2`.
    pub(crate) fn restrict(&self, block: &[usize]) -> Relation {
        let n2 = block.len() - self.n1;
        let mut r = Relation::empty(self.n1, n2);
        for i in 0..self.n1 {
            for j in 0..n2 {
                if block[i] == block[self.n1 + j] {
                    r.insert(i, j);
                }
            }
        }
        r
    }
}

impl SetCoalgebra for DisjointUnion {
    fn num_states(&self) -> usize {
        self.succ.len()
    }
    fn state_names(&self) -> &[String] {
        &self.names
    }
    fn labels(&self) -> &[String] {
        &self.labels
    }
    fn props(&self) -> &[String] {
        &self.props
    }
    fn successors(&self, x: usize, a: usize) -> &StateSet {
        &self.succ[x][a]
    }
    fn prop_holds(&self, x: usize, p: usize) -> bool {
        self.valuation[x][p]
    }
    fn kind(&self) -> &'static str {
        "disjoint union"
    }
}

/// Splits every block by membership in `s`. Returns whether any block split.
fn split_by(block: &mut [usize], s: &StateSet) -> bool {
    let mut fresh = HashMap::new();
    let before = block.iter().collect::<HashSet<_>>().len();
    for (x, b) in block.iter_mut().enumerate() {
        let next = fresh.len();
        *b = *fresh.entry((*b, s.contains(x))).or_insert(next);
    }
    fresh.len() > before
}

fn blocks_as_sets(block: &[usize]) -> Vec<StateSet> {
    let count = block.iter().max().map_or(0, |m| m + 1);
    let mut sets = vec![StateSet::with_capacity(block.len()); count];
    for (x, &b) in block.iter().enumerate() {
        sets[b].insert(x);
    }
    sets
}

/// Coarsest partition of the union stable under the logic's liftings: the
/// nullary liftings split first, then every unary lifting applied to every
/// block, until nothing splits.
fn refine_partition(u: &DisjointUnion, liftings: &[Lifting]) -> Vec<usize> {
    let mut block = vec![0; u.num_states()];
    for l in liftings.iter().filter(|l| l.arity() == 0) {
        split_by(&mut block, &l.preimage(u, None));
    }
    let unary: Vec<Lifting> = liftings.iter().copied().filter(|l| l.arity() == 1).collect();
    loop {
        let mut changed = false;
        for c in blocks_as_sets(&block) {
            for l in &unary {
                changed |= split_by(&mut block, &l.preimage(u, Some(&c)));
            }
        }
        if !changed {
            return block;
        }
    }
}

/// Whether `x1` and `x2` have the same trace language, by exploring the
/// subset-construction product of the two systems from `({x1}, {x2})`.
/// Every state accepts, so the languages differ exactly when some word
/// leads to an empty subset on one side only.
pub fn trace_equivalent(m1: &dyn SetCoalgebra, m2: &dyn SetCoalgebra, x1: usize, x2: usize) -> Result<bool> {
    check_same_alphabet(m1, m2)?;
    let singleton = |m: &dyn SetCoalgebra, x: usize| {
        let mut s = StateSet::with_capacity(m.num_states());
        s.insert(x);
        s
    };
    let post = |m: &dyn SetCoalgebra, s: &StateSet, a: usize| {
        let mut out = StateSet::with_capacity(m.num_states());
        for x in s.ones() {
            out.union_with(m.successors(x, a));
        }
        out
    };
    let start = (singleton(m1, x1), singleton(m2, x2));
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some((s1, s2)) = queue.pop_front() {
        for a in 0..m1.labels().len() {
            let t1 = post(m1, &s1, a);
            let t2 = post(m2, &s2, a);
            match (t1.is_clear(), t2.is_clear()) {
                (true, true) => {}
                (false, false) => {
                    if seen.insert((t1.clone(), t2.clone())) {
                        queue.push_back((t1, t2));
                    }
                }
                _ => return Ok(false),
            }
        }
    }
    Ok(true)
}

/// Logical equivalence for a set-based logic, restricted to `X1 × X2`.
pub fn set_theory_kernel(logic: &Logic, m1: &dyn SetCoalgebra, m2: &dyn SetCoalgebra) -> Result<Relation> {
    if logic.domain() != Domain::Sets {
        return Err(Error::BaseMismatch {
            logic: logic.name().to_string(),
            model: m1.kind(),
        });
    }
    let u = DisjointUnion::new(m1, m2)?;
    let (n1, n2) = (m1.num_states(), m2.num_states());
    if logic.base() == Base::Set {
        // Without connectives the formulas are the words over the unary
        // liftings applied to the constants; with no constant there are none.
        if !logic.modalities().contains(&Modality::Top) {
            return Ok(Relation::total(n1, n2));
        }
        let mut r = Relation::empty(n1, n2);
        for i in 0..n1 {
            for j in 0..n2 {
                if trace_equivalent(m1, m2, i, j)? {
                    r.insert(i, j);
                }
            }
        }
        return Ok(r);
    }
    let block = refine_partition(&u, &logic.liftings(m1.labels(), m1.props()));
    Ok(u.restrict(&block))
}

pub fn linear_theory_kernel(logic: &Logic, w1: &WeightedAutomaton, w2: &WeightedAutomaton) -> Result<SubspaceRelation> {
    if logic.domain() != Domain::VectorSpaces {
        return Err(Error::BaseMismatch {
            logic: logic.name().to_string(),
            model: "wa",
        });
    }
    check_same_labels(w1, w2)?;
    observability_kernel(w1, w2)
}

pub fn theory_kernel(logic: &Logic, m1: &Model, m2: &Model) -> Result<Kernel> {
    match (m1, m2) {
        (Model::Wa(w1), Model::Wa(w2)) => Ok(Kernel::Linear(linear_theory_kernel(logic, w1, w2)?)),
        _ => match (m1.as_set(), m2.as_set()) {
            (Some(s1), Some(s2)) => Ok(Kernel::Set(set_theory_kernel(logic, s1, s2)?)),
            _ => Err(Error::BaseMismatch {
                logic: logic.name().to_string(),
                model: "mixed models",
            }),
        },
    }
}
