//! Modal signatures given by predicate liftings, their one-step semantics on
//! concrete behaviours, formulas and their evaluation, and theory kernels.

mod enumerate;
mod eval;
mod formula;
mod kernel;

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::linalg::{dot, Rational};
use crate::models::{Behaviour, Model, StateSet, WeightedAutomaton};

pub use enumerate::{enumerate_formulas, enumerate_formulas_over};
pub use eval::{eval_formula, eval_linear_formula, eval_set_formula};
pub use formula::{parse_formula, Formula};
pub use kernel::{linear_theory_kernel, set_theory_kernel, theory_kernel, trace_equivalent, Kernel};

/// The propositional base a logic's formulas are built over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Base {
    /// No connectives beyond the liftings themselves.
    Set,
    Boolean,
    /// Distributive lattices: meets and joins, no negation.
    Lattice,
    /// Vector-space operations over the rationals.
    Linear,
}

/// Which kind of system the logic talks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    /// LTSs and Kripke models.
    Sets,
    /// Linear weighted automata.
    VectorSpaces,
}

/// A family of predicate liftings, instantiated per label or proposition
/// once the alphabet of the systems is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Modality {
    Top,
    Diamond,
    Box,
    Prop,
    Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Connective {
    Top,
    Bot,
    And,
    Or,
    Not,
    Zero,
    Add,
    Scale,
}

/// A concrete predicate lifting over a fixed alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lifting {
    /// The constant modality: every behaviour.
    Top,
    /// `<a>U`: behaviours with an `a`-successor in `U`.
    Diamond(usize),
    /// `[a]U`: behaviours whose `a`-successors all lie in `U`.
    Box(usize),
    /// Nullary lifting for an atomic proposition.
    Prop(usize),
    /// The linear output `(r, t) ↦ r`.
    Output,
}

impl Lifting {
    pub fn arity(self) -> usize {
        match self {
            Lifting::Diamond(_) | Lifting::Box(_) => 1,
            Lifting::Top | Lifting::Prop(_) | Lifting::Output => 0,
        }
    }

    /// Whether `U ↦ λ(U)` preserves all joins (including the empty one), or
    /// the lifting is nullary.
    pub fn is_join_preserving(self) -> bool {
        !matches!(self, Lifting::Box(_))
    }

    pub fn name(self, labels: &[String], props: &[String]) -> String {
        match self {
            Lifting::Top => "T".into(),
            Lifting::Diamond(a) => format!("<{}>", labels[a]),
            Lifting::Box(a) => format!("[{}]", labels[a]),
            Lifting::Prop(p) => props[p].clone(),
            Lifting::Output => "p".into(),
        }
    }

    /// Set semantics: whether the behaviour `t` lies in `λ(args)`.
    ///
    /// Panics on `Output`, which only has a linear reading.
    pub fn contains(self, t: &Behaviour, arg: Option<&StateSet>) -> bool {
        match self {
            Lifting::Top => true,
            Lifting::Diamond(a) => !t.succ[a].is_disjoint(arg.expect("unary lifting")),
            Lifting::Box(a) => t.succ[a].is_subset(arg.expect("unary lifting")),
            Lifting::Prop(p) => t.props.contains(p),
            Lifting::Output => panic!("the output lifting has no set semantics"),
        }
    }

    /// Linear semantics at the vector `x`: `o·x` for the output and
    /// `m(M_a x)` for the diamond with argument functional `m`.
    pub fn linear_value(self, w: &WeightedAutomaton, x: &[Rational], arg: Option<&[Rational]>) -> Result<Rational> {
        match self {
            Lifting::Output => Ok(dot(w.output(), x)),
            Lifting::Diamond(a) => {
                let y = w.step_vector(x, a)?;
                let m = arg.expect("unary lifting");
                if m.len() != y.len() {
                    return Err(Error::DimensionMismatch {
                        expected: y.len(),
                        found: m.len(),
                    });
                }
                Ok(dot(m, &y))
            }
            other => panic!("lifting {other:?} has no linear semantics"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Logic {
    name: &'static str,
    base: Base,
    domain: Domain,
    modalities: Vec<Modality>,
    connectives: Vec<Connective>,
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name)
    }
}

pub const LOGIC_NAMES: [&str; 6] = ["trace", "hm", "pml", "kripke", "linear-trace", "linear-hm"];

/// The six catalogued logics.
pub fn builtin_logics() -> Vec<Logic> {
    use Connective as C;
    use Modality as M;
    vec![
        Logic {
            name: "trace",
            base: Base::Set,
            domain: Domain::Sets,
            modalities: vec![M::Top, M::Diamond],
            connectives: vec![],
        },
        Logic {
            name: "hm",
            base: Base::Boolean,
            domain: Domain::Sets,
            modalities: vec![M::Top, M::Diamond],
            connectives: vec![C::Top, C::Bot, C::And, C::Or, C::Not],
        },
        Logic {
            name: "pml",
            base: Base::Lattice,
            domain: Domain::Sets,
            modalities: vec![M::Box, M::Diamond],
            connectives: vec![C::Top, C::Bot, C::And, C::Or],
        },
        Logic {
            name: "kripke",
            base: Base::Boolean,
            domain: Domain::Sets,
            modalities: vec![M::Prop, M::Diamond],
            connectives: vec![C::Top, C::Bot, C::And, C::Or, C::Not],
        },
        Logic {
            name: "linear-trace",
            base: Base::Set,
            domain: Domain::VectorSpaces,
            modalities: vec![M::Output, M::Diamond],
            connectives: vec![],
        },
        Logic {
            name: "linear-hm",
            base: Base::Linear,
            domain: Domain::VectorSpaces,
            modalities: vec![M::Output, M::Diamond],
            connectives: vec![C::Zero, C::Add, C::Scale],
        },
    ]
}

impl Logic {
    pub fn by_name(name: &str) -> Result<Logic> {
        builtin_logics()
            .into_iter()
            .find(|l| l.name == name)
            .ok_or_else(|| Error::UnknownLogic(name.to_string()))
    }

    /// The signature with only the diamonds (one per label).
    pub fn diamond_only() -> Logic {
        Logic {
            name: "diamond",
            base: Base::Set,
            domain: Domain::Sets,
            modalities: vec![Modality::Diamond],
            connectives: vec![],
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn modalities(&self) -> &[Modality] {
        &self.modalities
    }

    pub fn connectives(&self) -> &[Connective] {
        &self.connectives
    }

    pub fn admits(&self, c: Connective) -> bool {
        self.connectives.contains(&c)
    }

    /// Instantiates the modalities over an alphabet: nullary liftings first,
    /// then unary ones grouped by modality and ordered by label.
    pub fn liftings(&self, labels: &[String], props: &[String]) -> Vec<Lifting> {
        let mut out = Vec::new();
        for m in &self.modalities {
            match m {
                Modality::Top => out.push(Lifting::Top),
                Modality::Output => out.push(Lifting::Output),
                Modality::Prop => out.extend((0..props.len()).map(Lifting::Prop)),
                _ => {}
            }
        }
        for m in &self.modalities {
            match m {
                Modality::Diamond => out.extend((0..labels.len()).map(Lifting::Diamond)),
                Modality::Box => out.extend((0..labels.len()).map(Lifting::Box)),
                _ => {}
            }
        }
        out
    }

    pub fn is_join_preserving(&self) -> bool {
        !self.modalities.contains(&Modality::Box)
    }

    /// Resolves a lifting by its display name: `T`, `<a>`, `[a]`, `dia` and
    /// `box` (single-label alphabets), a proposition name, or `p`.
    pub fn lifting_by_name(&self, name: &str, labels: &[String], props: &[String]) -> Result<Lifting> {
        let unknown = || Error::UnknownLifting {
            logic: self.name.to_string(),
            lifting: name.to_string(),
        };
        let label = |l: &str| labels.iter().position(|x| x == l);
        let candidate = if name == "T" {
            Some(Lifting::Top)
        } else if name == "p" && self.modalities.contains(&Modality::Output) {
            Some(Lifting::Output)
        } else if let Some(l) = name.strip_prefix('<').and_then(|s| s.strip_suffix('>')) {
            label(l).map(Lifting::Diamond)
        } else if let Some(l) = name.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            label(l).map(Lifting::Box)
        } else if name == "dia" && labels.len() == 1 {
            Some(Lifting::Diamond(0))
        } else if name == "box" && labels.len() == 1 {
            Some(Lifting::Box(0))
        } else {
            props.iter().position(|p| p == name).map(Lifting::Prop)
        };
        candidate
            .filter(|l| self.liftings(labels, props).contains(l))
            .ok_or_else(unknown)
    }

    fn check_model(&self, model: &Model) -> Result<()> {
        let ok = match self.domain {
            Domain::Sets => model.as_set().is_some(),
            Domain::VectorSpaces => model.as_wa().is_some(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::BaseMismatch {
                logic: self.name.to_string(),
                model: model.kind(),
            })
        }
    }
}

/// A predicate on a model: a subset of states, or a linear functional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Predicate {
    Set(StateSet),
    Linear(Vec<Rational>),
}

/// Where a lifting is evaluated: a state of a set system or a vector of an
/// automaton's state space.
#[derive(Clone, Copy, Debug)]
pub enum Point<'a> {
    State(usize),
    Vector(&'a [Rational]),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Bool(bool),
    Scalar(Rational),
}

/// Evaluates the named lifting of `logic` at a point of `model`: for set
/// systems whether `γ(x) ∈ λ(args)`, for automata the scalar `λ(args)(γ(x))`.
pub fn eval_lifting(logic: &Logic, lifting: &str, model: &Model, point: Point<'_>, args: &[Predicate]) -> Result<Value> {
    logic.check_model(model)?;
    let (labels, props): (&[String], &[String]) = match model.as_set() {
        Some(m) => (m.labels(), m.props()),
        None => (model.labels(), &[]),
    };
    let l = logic.lifting_by_name(lifting, labels, props)?;
    if args.len() != l.arity() {
        return Err(Error::ArityMismatch {
            lifting: lifting.to_string(),
            expected: l.arity(),
            found: args.len(),
        });
    }
    match (model, point) {
        (Model::Wa(w), Point::Vector(x)) => {
            if x.len() != w.dim() {
                return Err(Error::DimensionMismatch {
                    expected: w.dim(),
                    found: x.len(),
                });
            }
            let arg = match args.first() {
                None => None,
                Some(Predicate::Linear(m)) => Some(m.as_slice()),
                Some(Predicate::Set(_)) => {
                    return Err(Error::BaseMismatch {
                        logic: logic.name.to_string(),
                        model: "set predicate",
                    })
                }
            };
            Ok(Value::Scalar(l.linear_value(w, x, arg)?))
        }
        (_, Point::State(x)) => {
            let m = model.as_set().expect("checked by check_model");
            if x >= m.num_states() {
                return Err(Error::StateOutOfRange {
                    index: x,
                    size: m.num_states(),
                });
            }
            let arg = match args.first() {
                None => None,
                Some(Predicate::Set(s)) => {
                    if s.len() != m.num_states() {
                        return Err(Error::DimensionMismatch {
                            expected: m.num_states(),
                            found: s.len(),
                        });
                    }
                    Some(s)
                }
                Some(Predicate::Linear(_)) => {
                    return Err(Error::BaseMismatch {
                        logic: logic.name.to_string(),
                        model: "linear predicate",
                    })
                }
            };
            Ok(Value::Bool(l.contains(&m.behaviour(x), arg)))
        }
        _ => Err(Error::BaseMismatch {
            logic: logic.name.to_string(),
            model: "mismatched point",
        }),
    }
}

pub(crate) fn full_set(n: usize) -> StateSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.insert_range(..);
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, Matrix};
    use crate::models::{Lts, SetCoalgebra};
    use proptest::prelude::*;

    fn set(bits: &[usize], n: usize) -> StateSet {
        let mut s = StateSet::with_capacity(n);
        bits.iter().for_each(|&b| s.insert(b));
        s
    }

    #[test]
    fn catalogue() {
        let names: Vec<_> = builtin_logics().iter().map(|l| l.name()).collect();
        assert_eq!(names, LOGIC_NAMES);
        let labels = vec!["a".to_string(), "b".to_string()];
        let trace = Logic::by_name("trace").unwrap();
        assert_eq!(
            trace.liftings(&labels, &[]),
            vec![Lifting::Top, Lifting::Diamond(0), Lifting::Diamond(1)]
        );
        let hm = Logic::by_name("hm").unwrap();
        assert_eq!(hm.liftings(&labels, &[]), trace.liftings(&labels, &[]));
        assert_eq!(hm.base(), Base::Boolean);
        let lhm = Logic::by_name("linear-hm").unwrap();
        assert_eq!(lhm.liftings(&labels[..1], &[]), vec![Lifting::Output, Lifting::Diamond(0)]);
        assert!(lhm.admits(Connective::Add) && lhm.admits(Connective::Scale) && lhm.admits(Connective::Zero));
        assert!(Logic::by_name("ctl").is_err());
    }

    #[test]
    fn lifting_examples() {
        let m = Model::Lts(Lts::from_edges(3, &["a"], &[(0, 0, 1)]).unwrap());
        let trace = Logic::by_name("trace").unwrap();
        let u = Predicate::Set(set(&[1], 3));
        let e = Predicate::Set(set(&[], 3));
        assert_eq!(eval_lifting(&trace, "<a>", &m, Point::State(0), &[u]).unwrap(), Value::Bool(true));
        assert_eq!(eval_lifting(&trace, "<a>", &m, Point::State(0), &[e]).unwrap(), Value::Bool(false));

        let pml = Logic::by_name("pml").unwrap();
        let a12 = Predicate::Set(set(&[1, 2], 3));
        let a2 = Predicate::Set(set(&[2], 3));
        assert_eq!(eval_lifting(&pml, "box", &m, Point::State(0), &[a12]).unwrap(), Value::Bool(true));
        assert_eq!(eval_lifting(&pml, "[a]", &m, Point::State(0), &[a2]).unwrap(), Value::Bool(false));

        let w = Model::Wa(WeightedAutomaton::new(vec![rat(1), rat(2)], vec![("a".into(), Matrix::identity(2))]).unwrap());
        let lin = Logic::by_name("linear-trace").unwrap();
        let x = [rat(3), rat(1)];
        assert_eq!(eval_lifting(&lin, "p", &w, Point::Vector(&x), &[]).unwrap(), Value::Scalar(rat(5)));
    }

    #[test]
    fn lifting_errors() {
        let m = Model::Lts(Lts::from_edges(2, &["a"], &[(0, 0, 1)]).unwrap());
        let trace = Logic::by_name("trace").unwrap();
        assert!(matches!(
            eval_lifting(&trace, "<z>", &m, Point::State(0), &[]),
            Err(Error::UnknownLifting { .. })
        ));
        assert!(matches!(
            eval_lifting(&trace, "<a>", &m, Point::State(0), &[]),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(matches!(
            eval_lifting(&trace, "[a]", &m, Point::State(0), &[Predicate::Set(set(&[], 2))]),
            Err(Error::UnknownLifting { .. })
        ));
        let lin = Logic::by_name("linear-hm").unwrap();
        assert!(matches!(
            eval_lifting(&lin, "p", &m, Point::State(0), &[]),
            Err(Error::BaseMismatch { .. })
        ));
    }

    fn arb_lts() -> impl Strategy<Value = Lts> {
        (1usize..5).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0usize..2, 0..n), 0..10)
                .prop_map(move |edges| Lts::from_edges(n, &["a", "b"], &edges).unwrap())
        })
    }

    fn arb_subset(n: usize) -> impl Strategy<Value = StateSet> {
        proptest::collection::vec(any::<bool>(), n).prop_map(|bits| {
            let mut s = StateSet::with_capacity(bits.len());
            for (i, b) in bits.into_iter().enumerate() {
                s.set(i, b);
            }
            s
        })
    }

    proptest! {
        #[test]
        fn diamond_preserves_joins((m, u, v) in arb_lts().prop_flat_map(|m| {
            let n = m.num_states();
            (Just(m), arb_subset(n), arb_subset(n))
        })) {
            let n = m.num_states();
            for x in 0..n {
                let t = m.behaviour(x);
                for a in 0..2 {
                    let d = Lifting::Diamond(a);
                    let mut uv = u.clone();
                    uv.union_with(&v);
                    prop_assert_eq!(d.contains(&t, Some(&uv)), d.contains(&t, Some(&u)) || d.contains(&t, Some(&v)));
                    prop_assert!(!d.contains(&t, Some(&set(&[], n))));
                    // box/diamond duality
                    let mut cu = u.clone();
                    cu.toggle_range(..);
                    prop_assert_eq!(Lifting::Box(a).contains(&t, Some(&u)), !d.contains(&t, Some(&cu)));
                }
            }
        }

        #[test]
        fn linear_diamond_is_additive(entries in proptest::collection::vec(-3i64..4, 4), m1 in proptest::collection::vec(-3i64..4, 2), m2 in proptest::collection::vec(-3i64..4, 2), x in proptest::collection::vec(-3i64..4, 2)) {
            let mat = Matrix::from_i64(&[&entries[..2], &entries[2..]]);
            let w = WeightedAutomaton::new(vec![rat(1), rat(0)], vec![("a".into(), mat)]).unwrap();
            let r = |v: &[i64]| v.iter().map(|&i| rat(i)).collect::<Vec<_>>();
            let (m1, m2, x) = (r(&m1), r(&m2), r(&x));
            let sum: Vec<_> = m1.iter().zip(&m2).map(|(a, b)| a + b).collect();
            let d = Lifting::Diamond(0);
            prop_assert_eq!(
                d.linear_value(&w, &x, Some(&sum)).unwrap(),
                d.linear_value(&w, &x, Some(&m1)).unwrap() + d.linear_value(&w, &x, Some(&m2)).unwrap()
            );
        }
    }
}
