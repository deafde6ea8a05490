use num_traits::Zero;

use super::{full_set, Domain, Formula, Lifting, Logic, Predicate};
use crate::error::{Error, Result};
use crate::linalg::Rational;
use crate::models::{Model, SetCoalgebra, StateSet, WeightedAutomaton};

fn resolve_label(labels: &[String], label: &Option<String>) -> Result<usize> {
    match label {
        Some(l) => labels
            .iter()
            .position(|x| x == l)
            .ok_or_else(|| Error::UnknownLabel(l.clone())),
        None if labels.len() == 1 => Ok(0),
        None => Err(Error::UnknownLabel("dia/box on a multi-label system".into())),
    }
}

impl Lifting {
    /// `x ∈ γ*(λ(arg))`, i.e. `γ(x) ∈ λ(arg)`, read straight off the model.
    pub fn holds_at(self, m: &dyn SetCoalgebra, x: usize, arg: Option<&StateSet>) -> bool {
        match self {
            Lifting::Top => true,
            Lifting::Diamond(a) => !m.successors(x, a).is_disjoint(arg.expect("unary lifting")),
            Lifting::Box(a) => m.successors(x, a).is_subset(arg.expect("unary lifting")),
            Lifting::Prop(p) => m.prop_holds(x, p),
            Lifting::Output => panic!("the output lifting has no set semantics"),
        }
    }

    /// The complex-algebra image `γ*(λ(arg))` as a subset of states.
    pub fn preimage(self, m: &dyn SetCoalgebra, arg: Option<&StateSet>) -> StateSet {
        let n = m.num_states();
        let mut out = StateSet::with_capacity(n);
        for x in 0..n {
            out.set(x, self.holds_at(m, x, arg));
        }
        out
    }
}

/// `⟦φ⟧` on a set system, by recursion through the complex algebra.
pub fn eval_set_formula(logic: &Logic, m: &dyn SetCoalgebra, phi: &Formula) -> Result<StateSet> {
    if logic.domain() != Domain::Sets {
        return Err(Error::BaseMismatch {
            logic: logic.name().to_string(),
            model: m.kind(),
        });
    }
    phi.check(logic)?;
    set_sem(m, phi)
}

fn set_sem(m: &dyn SetCoalgebra, phi: &Formula) -> Result<StateSet> {
    let n = m.num_states();
    Ok(match phi {
        Formula::Top => full_set(n),
        Formula::Bot => StateSet::with_capacity(n),
        Formula::Atom(name) => {
            let p = m.prop_index(name).ok_or_else(|| Error::UnknownProp(name.clone()))?;
            Lifting::Prop(p).preimage(m, None)
        }
        Formula::Dia(l, g) => {
            let a = resolve_label(m.labels(), l)?;
            Lifting::Diamond(a).preimage(m, Some(&set_sem(m, g)?))
        }
        Formula::Box(l, g) => {
            let a = resolve_label(m.labels(), l)?;
            Lifting::Box(a).preimage(m, Some(&set_sem(m, g)?))
        }
        Formula::Not(g) => {
            let mut s = set_sem(m, g)?;
            s.toggle_range(..);
            s
        }
        Formula::And(a, b) => {
            let mut s = set_sem(m, a)?;
            s.intersect_with(&set_sem(m, b)?);
            s
        }
        Formula::Or(a, b) => {
            let mut s = set_sem(m, a)?;
            s.union_with(&set_sem(m, b)?);
            s
        }
        Formula::Zero | Formula::Add(..) | Formula::Scale(..) => unreachable!("rejected by the well-formedness check"),
    })
}

/// `⟦φ⟧` on an automaton, as a row functional.
pub fn eval_linear_formula(logic: &Logic, w: &WeightedAutomaton, phi: &Formula) -> Result<Vec<Rational>> {
    if logic.domain() != Domain::VectorSpaces {
        return Err(Error::BaseMismatch {
            logic: logic.name().to_string(),
            model: "wa",
        });
    }
    phi.check(logic)?;
    linear_sem(w, phi)
}

fn linear_sem(w: &WeightedAutomaton, phi: &Formula) -> Result<Vec<Rational>> {
    Ok(match phi {
        Formula::Atom(_) => w.output().to_vec(),
        Formula::Zero => vec![Rational::zero(); w.dim()],
        Formula::Add(a, b) => {
            let x = linear_sem(w, a)?;
            let y = linear_sem(w, b)?;
            x.into_iter().zip(y).map(|(a, b)| a + b).collect()
        }
        Formula::Scale(r, g) => linear_sem(w, g)?.into_iter().map(|v| v * r).collect(),
        Formula::Dia(l, g) => {
            let a = resolve_label(w.labels(), l)?;
            // ⟦<a>φ⟧(x) = ⟦φ⟧(M_a x)
            w.matrix(a).vec_mul(&linear_sem(w, g)?)?
        }
        _ => unreachable!("rejected by the well-formedness check"),
    })
}

pub fn eval_formula(logic: &Logic, model: &Model, phi: &Formula) -> Result<Predicate> {
    match model {
        Model::Wa(w) => Ok(Predicate::Linear(eval_linear_formula(logic, w, phi)?)),
        other => Ok(Predicate::Set(eval_set_formula(
            logic,
            other.as_set().expect("set model"),
            phi,
        )?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, Matrix};
    use crate::logics::parse_formula;
    use crate::models::{KripkeModel, Lts};

    #[test]
    fn diamond_top_on_two_states() {
        let m = Lts::from_edges(2, &["a"], &[(0, 0, 1)]).unwrap();
        let hm = Logic::by_name("hm").unwrap();
        let s = eval_set_formula(&hm, &m, &parse_formula("<a>T").unwrap()).unwrap();
        // brute force: x satisfies <a>T iff some edge leaves x with label a
        let expect: Vec<usize> = (0..2).filter(|&x| m.edges().iter().any(|e| e.0 == x && e.1 == 0)).collect();
        assert_eq!(s.ones().collect::<Vec<_>>(), expect);
        assert_eq!(expect, vec![0]);
        let top = eval_set_formula(&hm, &m, &Formula::Top).unwrap();
        assert_eq!(top.ones().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn linear_diamond_output() {
        let w = WeightedAutomaton::new(vec![rat(2)], vec![("a".into(), Matrix::from_i64(&[&[3]]))]).unwrap();
        let lin = Logic::by_name("linear-hm").unwrap();
        let row = eval_linear_formula(&lin, &w, &parse_formula("<a>p").unwrap()).unwrap();
        // oracle: o · M_a
        let oracle = w.matrix(0).vec_mul(w.output()).unwrap();
        assert_eq!(row, oracle);
        assert_eq!(row, vec![rat(6)]);
        let comb = eval_linear_formula(&lin, &w, &parse_formula("2 * p + <a>p + 0").unwrap()).unwrap();
        assert_eq!(comb, vec![rat(10)]);
    }

    #[test]
    fn kripke_props_and_modal_box() {
        let k = KripkeModel::new(
            &["w0", "w1", "w2"],
            &[("w0", "w1"), ("w0", "w2"), ("w1", "w2")],
            &["p"],
            &[("w1", vec!["p"]), ("w2", vec!["p"])],
        )
        .unwrap();
        let kl = Logic::by_name("kripke").unwrap();
        let s = eval_set_formula(&kl, &k, &parse_formula("dia p & !p").unwrap()).unwrap();
        assert_eq!(s.ones().collect::<Vec<_>>(), vec![0]);
        let pml = Logic::by_name("pml").unwrap();
        let s = eval_set_formula(&pml, &k, &parse_formula("box F").unwrap()).unwrap();
        assert_eq!(s.ones().collect::<Vec<_>>(), vec![2]);
        assert!(eval_set_formula(&kl, &k, &parse_formula("q").unwrap()).is_err());
    }

    #[test]
    fn base_mismatch() {
        let m = Model::Lts(Lts::from_edges(1, &["a"], &[]).unwrap());
        let lin = Logic::by_name("linear-hm").unwrap();
        assert!(matches!(eval_formula(&lin, &m, &Formula::atom("p")), Err(Error::BaseMismatch { .. })));
        let hm = Logic::by_name("hm").unwrap();
        assert!(matches!(
            eval_formula(&hm, &m, &parse_formula("2 * T").unwrap()),
            Err(Error::IllFormedFormula { .. })
        ));
    }
}
