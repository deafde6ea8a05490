//! Finite coalgebras: labelled transition systems, Kripke models and linear
//! weighted automata.
//!
//! States, labels and propositions are canonicalised to dense indices in
//! declaration order when a model is built. All set-valued outputs use
//! [`StateSet`] bitsets, which iterate in ascending index order.

pub mod format;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Rational};

pub use format::{parse_model, validate_model, RawModel, Scalar};

pub type StateSet = FixedBitSet;

/// Name of the single accessibility relation of a [`KripkeModel`], used as
/// its label when the model is read as a multi-relational frame.
pub const KRIPKE_LABEL: &str = "R";

/// A one-step behaviour `γ(x)`: the successor set per label together with the
/// atomic propositions true at the state.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Behaviour {
    pub succ: Vec<StateSet>,
    pub props: FixedBitSet,
}

/// Read access shared by the `Set`-based system types.
pub trait SetCoalgebra: Sync {
    fn num_states(&self) -> usize;
    fn state_names(&self) -> &[String];
    fn labels(&self) -> &[String];
    fn props(&self) -> &[String];
    /// `γ(x)(a)`; total, empty when `x` has no `a`-transition.
    fn successors(&self, x: usize, a: usize) -> &StateSet;
    fn prop_holds(&self, x: usize, p: usize) -> bool;
    fn kind(&self) -> &'static str;

    fn behaviour(&self, x: usize) -> Behaviour {
        let succ = (0..self.labels().len())
            .map(|a| self.successors(x, a).clone())
            .collect();
        let mut props = FixedBitSet::with_capacity(self.props().len());
        for p in 0..self.props().len() {
            props.set(p, self.prop_holds(x, p));
        }
        Behaviour { succ, props }
    }

    fn label_index(&self, name: &str) -> Option<usize> {
        self.labels().iter().position(|l| l == name)
    }

    fn prop_index(&self, name: &str) -> Option<usize> {
        self.props().iter().position(|p| p == name)
    }
}

fn index_names(kind: &'static str, names: &[String]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(Error::DuplicateId {
                kind,
                id: n.clone(),
            });
        }
    }
    Ok(())
}

fn lookup(names: &[String], name: &str) -> Option<usize> {
    names.iter().position(|n| n == name)
}

/// A labelled transition system, a coalgebra for `Pow(-)^A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lts {
    states: Vec<String>,
    labels: Vec<String>,
    succ: Vec<Vec<StateSet>>,
}

impl Lts {
    /// Builds an LTS from named states, labels and `(from, label, to)` edges.
    pub fn new<S: AsRef<str>>(states: &[S], labels: &[S], edges: &[(S, S, S)]) -> Result<Self> {
        let states: Vec<String> = states.iter().map(|s| s.as_ref().to_string()).collect();
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        index_names("state", &states)?;
        index_names("label", &labels)?;
        let mut lts = Lts::empty_with(states, labels);
        for (from, label, to) in edges {
            let (from, label, to) = (from.as_ref(), label.as_ref(), to.as_ref());
            let f = lookup(&lts.states, from).ok_or_else(|| Error::UnknownState(from.into()))?;
            let a = lookup(&lts.labels, label).ok_or_else(|| Error::UnknownLabel(label.into()))?;
            let t = lookup(&lts.states, to).ok_or_else(|| Error::DanglingSuccessor {
                from: from.into(),
                label: label.into(),
                to: to.into(),
            })?;
            lts.succ[f][a].insert(t);
        }
        Ok(lts)
    }

    /// Builds an LTS over states `x0..x{n-1}` from index triples.
    pub fn from_edges(n: usize, labels: &[&str], edges: &[(usize, usize, usize)]) -> Result<Self> {
        let states = (0..n).map(|i| format!("x{i}")).collect();
        let labels: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        index_names("label", &labels)?;
        let mut lts = Lts::empty_with(states, labels);
        for &(f, a, t) in edges {
            if f >= n {
                return Err(Error::StateOutOfRange { index: f, size: n });
            }
            if a >= lts.labels.len() {
                return Err(Error::UnknownLabel(a.to_string()));
            }
            if t >= n {
                return Err(Error::DanglingSuccessor {
                    from: format!("x{f}"),
                    label: lts.labels[a].clone(),
                    to: format!("x{t}"),
                });
            }
            lts.succ[f][a].insert(t);
        }
        Ok(lts)
    }

    fn empty_with(states: Vec<String>, labels: Vec<String>) -> Self {
        let n = states.len();
        let succ = vec![vec![StateSet::with_capacity(n); labels.len()]; n];
        Lts {
            states,
            labels,
            succ,
        }
    }

    /// All edges as index triples in `(from, label, to)` order.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (x, per_label) in self.succ.iter().enumerate() {
            for (a, set) in per_label.iter().enumerate() {
                out.extend(set.ones().map(|y| (x, a, y)));
            }
        }
        out
    }

    /// Same system with labels permuted into `order` (which must be a
    /// permutation of the current labels).
    pub fn with_label_order(&self, order: &[String]) -> Result<Self> {
        let perm = permutation(&self.labels, order)?;
        let succ = self
            .succ
            .iter()
            .map(|row| perm.iter().map(|&i| row[i].clone()).collect())
            .collect();
        Ok(Lts {
            states: self.states.clone(),
            labels: order.to_vec(),
            succ,
        })
    }
}

fn permutation(current: &[String], order: &[String]) -> Result<Vec<usize>> {
    let mismatch = || Error::LabelMismatch {
        left: order.to_vec(),
        right: current.to_vec(),
    };
    if current.len() != order.len() {
        return Err(mismatch());
    }
    order
        .iter()
        .map(|l| lookup(current, l).ok_or_else(mismatch))
        .collect()
}

impl SetCoalgebra for Lts {
    fn num_states(&self) -> usize {
        self.states.len()
    }
    fn state_names(&self) -> &[String] {
        &self.states
    }
    fn labels(&self) -> &[String] {
        &self.labels
    }
    fn props(&self) -> &[String] {
        &[]
    }
    fn successors(&self, x: usize, a: usize) -> &StateSet {
        &self.succ[x][a]
    }
    fn prop_holds(&self, _x: usize, _p: usize) -> bool {
        false
    }
    fn kind(&self) -> &'static str {
        "lts"
    }
}

/// A Kripke model `(X, R, V)`, a coalgebra for `Pow(-) x Pow(P0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    states: Vec<String>,
    labels: Vec<String>,
    relation: Vec<StateSet>,
    props: Vec<String>,
    valuation: Vec<FixedBitSet>,
}

impl KripkeModel {
    /// `valuation` lists, per state name, the propositions true there;
    /// unlisted states satisfy none.
    pub fn new<S: AsRef<str>>(
        states: &[S],
        relation: &[(S, S)],
        props: &[S],
        valuation: &[(S, Vec<S>)],
    ) -> Result<Self> {
        let states: Vec<String> = states.iter().map(|s| s.as_ref().to_string()).collect();
        let props: Vec<String> = props.iter().map(|s| s.as_ref().to_string()).collect();
        index_names("state", &states)?;
        index_names("proposition", &props)?;
        let n = states.len();
        let mut rel = vec![StateSet::with_capacity(n); n];
        for (from, to) in relation {
            let (from, to) = (from.as_ref(), to.as_ref());
            let f = lookup(&states, from).ok_or_else(|| Error::UnknownState(from.into()))?;
            let t = lookup(&states, to).ok_or_else(|| Error::DanglingSuccessor {
                from: from.into(),
                label: KRIPKE_LABEL.into(),
                to: to.into(),
            })?;
            rel[f].insert(t);
        }
        let mut val = vec![FixedBitSet::with_capacity(props.len()); n];
        for (s, ps) in valuation {
            let x = lookup(&states, s.as_ref()).ok_or_else(|| Error::UnknownState(s.as_ref().into()))?;
            for p in ps {
                let i = lookup(&props, p.as_ref()).ok_or_else(|| Error::UnknownProp(p.as_ref().into()))?;
                val[x].insert(i);
            }
        }
        Ok(KripkeModel {
            states,
            labels: vec![KRIPKE_LABEL.to_string()],
            relation: rel,
            props,
            valuation: val,
        })
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.relation
            .iter()
            .enumerate()
            .flat_map(|(x, s)| s.ones().map(move |y| (x, y)))
            .collect()
    }

    pub fn true_props(&self, x: usize) -> impl Iterator<Item = &str> + '_ {
        self.valuation[x].ones().map(|p| self.props[p].as_str())
    }
}

impl SetCoalgebra for KripkeModel {
    fn num_states(&self) -> usize {
        self.states.len()
    }
    fn state_names(&self) -> &[String] {
        &self.states
    }
    fn labels(&self) -> &[String] {
        &self.labels
    }
    fn props(&self) -> &[String] {
        &self.props
    }
    fn successors(&self, x: usize, _a: usize) -> &StateSet {
        &self.relation[x]
    }
    fn prop_holds(&self, x: usize, p: usize) -> bool {
        self.valuation[x].contains(p)
    }
    fn kind(&self) -> &'static str {
        "kripke"
    }
}

/// A linear weighted automaton over the rationals: `γ(x) = (o·x, a ↦ M_a·x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedAutomaton {
    dim: usize,
    labels: Vec<String>,
    output: Vec<Rational>,
    matrices: Vec<Matrix>,
}

impl WeightedAutomaton {
    pub fn new(output: Vec<Rational>, transitions: Vec<(String, Matrix)>) -> Result<Self> {
        let dim = output.len();
        let mut labels = Vec::with_capacity(transitions.len());
        let mut matrices = Vec::with_capacity(transitions.len());
        for (label, m) in transitions {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::NonSquareMatrix {
                    label,
                    rows: m.nrows(),
                    cols: m.ncols(),
                    dim,
                });
            }
            labels.push(label);
            matrices.push(m);
        }
        index_names("label", &labels)?;
        Ok(WeightedAutomaton {
            dim,
            labels,
            output,
            matrices,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn output(&self) -> &[Rational] {
        &self.output
    }

    pub fn matrix(&self, a: usize) -> &Matrix {
        &self.matrices[a]
    }

    pub fn label_index(&self, name: &str) -> Option<usize> {
        lookup(&self.labels, name)
    }

    /// `M_a · x`.
    pub fn step_vector(&self, x: &[Rational], a: usize) -> Result<Vec<Rational>> {
        self.matrices[a].mul_vec(x)
    }

    pub fn with_label_order(&self, order: &[String]) -> Result<Self> {
        let perm = permutation(&self.labels, order)?;
        Ok(WeightedAutomaton {
            dim: self.dim,
            labels: order.to_vec(),
            output: self.output.clone(),
            matrices: perm.iter().map(|&i| self.matrices[i].clone()).collect(),
        })
    }
}

/// Any validated model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Model {
    Lts(Lts),
    Kripke(KripkeModel),
    Wa(WeightedAutomaton),
}

impl Model {
    pub fn as_set(&self) -> Option<&dyn SetCoalgebra> {
        match self {
            Model::Lts(m) => Some(m),
            Model::Kripke(m) => Some(m),
            Model::Wa(_) => None,
        }
    }

    pub fn as_wa(&self) -> Option<&WeightedAutomaton> {
        match self {
            Model::Wa(w) => Some(w),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Model::Lts(_) => "lts",
            Model::Kripke(_) => "kripke",
            Model::Wa(_) => "wa",
        }
    }

    pub fn labels(&self) -> &[String] {
        match self {
            Model::Lts(m) => m.labels(),
            Model::Kripke(m) => SetCoalgebra::labels(m),
            Model::Wa(w) => w.labels(),
        }
    }

    /// Number of states, or the dimension for automata.
    pub fn size(&self) -> usize {
        match self {
            Model::Lts(m) => m.num_states(),
            Model::Kripke(m) => m.num_states(),
            Model::Wa(w) => w.dim(),
        }
    }

    pub fn with_label_order(&self, order: &[String]) -> Result<Self> {
        Ok(match self {
            Model::Lts(m) => Model::Lts(m.with_label_order(order)?),
            Model::Kripke(m) => {
                permutation(SetCoalgebra::labels(m), order)?;
                Model::Kripke(m.clone())
            }
            Model::Wa(w) => Model::Wa(w.with_label_order(order)?),
        })
    }
}

/// Errors unless the two alphabets (labels, and propositions where present)
/// coincide exactly.
pub fn check_same_alphabet(m1: &dyn SetCoalgebra, m2: &dyn SetCoalgebra) -> Result<()> {
    if m1.labels() != m2.labels() || m1.props() != m2.props() {
        let mut left = m1.labels().to_vec();
        left.extend(m1.props().iter().cloned());
        let mut right = m2.labels().to_vec();
        right.extend(m2.props().iter().cloned());
        return Err(Error::LabelMismatch { left, right });
    }
    Ok(())
}

pub fn check_same_labels(w1: &WeightedAutomaton, w2: &WeightedAutomaton) -> Result<()> {
    if w1.labels() != w2.labels() {
        return Err(Error::LabelMismatch {
            left: w1.labels().to_vec(),
            right: w2.labels().to_vec(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn set(bits: &[usize], n: usize) -> StateSet {
        let mut s = StateSet::with_capacity(n);
        for &b in bits {
            s.insert(b);
        }
        s
    }

    #[test]
    fn successors_are_total() {
        let m = Lts::new(&["x0", "x1"], &["a"], &[("x0", "a", "x1")]).unwrap();
        assert_eq!(m.successors(0, 0), &set(&[1], 2));
        assert_eq!(m.successors(1, 0), &set(&[], 2));
        assert_eq!(m.successors(0, 0), m.successors(0, 0));

        let m = Lts::new(&["x0", "x1"], &["a"], &[("x0", "a", "x0"), ("x0", "a", "x1")]).unwrap();
        assert_eq!(m.successors(0, 0), &set(&[0, 1], 2));
    }

    #[test]
    fn rejects_dangling_and_duplicates() {
        let err = Lts::new(&["x0", "x1"], &["a"], &[("x0", "a", "x9")]).unwrap_err();
        assert!(err.to_string().contains("dangling successor"));
        assert!(matches!(
            Lts::new(&["x0", "x0"], &["a"], &[]),
            Err(Error::DuplicateId { .. })
        ));
    }

    #[test]
    fn step_vector_examples() {
        let id = WeightedAutomaton::new(vec![rat(0), rat(0)], vec![("a".into(), Matrix::identity(2))]).unwrap();
        assert_eq!(id.step_vector(&[rat(1), rat(0)], 0).unwrap(), vec![rat(1), rat(0)]);

        let shift = WeightedAutomaton::new(
            vec![rat(0), rat(0)],
            vec![("a".into(), Matrix::from_i64(&[&[0, 1], &[0, 0]]))],
        )
        .unwrap();
        assert_eq!(shift.step_vector(&[rat(0), rat(1)], 0).unwrap(), vec![rat(1), rat(0)]);

        let scalar = WeightedAutomaton::new(vec![rat(1)], vec![("a".into(), Matrix::from_i64(&[&[2]]))]).unwrap();
        assert_eq!(scalar.step_vector(&[rat(3)], 0).unwrap(), vec![rat(6)]);
        assert!(matches!(
            scalar.step_vector(&[rat(3), rat(1)], 0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn non_square_matrix_rejected() {
        let m = Matrix::from_i64(&[&[1, 0, 0], &[0, 1, 0]]);
        let err = WeightedAutomaton::new(vec![rat(1), rat(1)], vec![("a".into(), m)]).unwrap_err();
        assert!(err.to_string().contains("non-square matrix"));
    }

    #[test]
    fn kripke_behaviour_includes_valuation() {
        let k = KripkeModel::new(
            &["w0", "w1"],
            &[("w0", "w1")],
            &["p", "q"],
            &[("w1", vec!["q"])],
        )
        .unwrap();
        let b = k.behaviour(0);
        assert_eq!(b.succ, vec![set(&[1], 2)]);
        assert_eq!(b.props.ones().count(), 0);
        assert!(k.prop_holds(1, 1));
        assert_eq!(k.true_props(1).collect::<Vec<_>>(), vec!["q"]);
    }

    #[test]
    fn empty_models_are_legal() {
        let m = Lts::new::<&str>(&[], &["a"], &[]).unwrap();
        assert_eq!(m.num_states(), 0);
    }

    #[test]
    fn label_reordering() {
        let m = Lts::from_edges(2, &["a", "b"], &[(0, 1, 1)]).unwrap();
        let r = m.with_label_order(&["b".into(), "a".into()]).unwrap();
        assert!(r.successors(0, 0).contains(1));
        assert!(m.with_label_order(&["c".into(), "a".into()]).is_err());
    }
}
