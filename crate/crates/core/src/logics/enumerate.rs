//! Finite enumerations of formulas.
//!
//! [`enumerate_formulas`] works syntactically over an alphabet, normalising
//! the propositional layer so that the list stays finite: boolean layers are
//! written as disjunctions of minterms over the modal generators, lattice
//! layers as joins of meets. [`enumerate_formulas_over`] instead keeps one
//! formula per extension on a pair of concrete models.

use std::collections::{HashMap, VecDeque};

use super::kernel::DisjointUnion;
use super::{Base, Domain, Formula, Lifting, Logic, Modality};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::models::{check_same_labels, Model, SetCoalgebra, StateSet};

/// At most this many generators per propositional layer (2^2^4 boolean
/// functions, 168 monotone ones).
const MAX_GENERATORS: usize = 4;

fn conj(fs: Vec<Formula>) -> Formula {
    fs.into_iter().reduce(Formula::and).unwrap_or(Formula::Top)
}

fn disj(fs: Vec<Formula>) -> Formula {
    fs.into_iter().reduce(Formula::or).unwrap_or(Formula::Bot)
}

/// The `2^n` complete conjunctions over `gens`, indexed by the bitmask of
/// positive literals.
fn minterms(gens: &[Formula]) -> Vec<Formula> {
    (0..1usize << gens.len())
        .map(|mask| {
            conj(
                gens.iter()
                    .enumerate()
                    .map(|(i, g)| if mask >> i & 1 == 1 { g.clone() } else { Formula::not(g.clone()) })
                    .collect(),
            )
        })
        .collect()
}

fn check_generators(n: usize) -> Result<()> {
    if n > MAX_GENERATORS {
        return Err(Error::BoundExceeded {
            what: "generators per formula layer",
            size: n,
            bound: MAX_GENERATORS,
        });
    }
    Ok(())
}

/// Every boolean function of `gens`, as a disjunction of minterms.
fn boolean_functions(gens: &[Formula]) -> Vec<Formula> {
    let terms = minterms(gens);
    (0..1u64 << terms.len())
        .map(|f| {
            if f == (1u64 << terms.len()) - 1 {
                Formula::Top
            } else {
                disj((0..terms.len()).filter(|t| f >> t & 1 == 1).map(|t| terms[t].clone()).collect())
            }
        })
        .collect()
}

/// Every monotone function of `gens`, as a join over an antichain of meets.
fn monotone_functions(gens: &[Formula]) -> Vec<Formula> {
    let subsets = 1usize << gens.len();
    let mut out = Vec::new();
    for family in 0..1u64 << subsets {
        let members: Vec<usize> = (0..subsets).filter(|s| family >> s & 1 == 1).collect();
        let antichain = members
            .iter()
            .all(|&s| members.iter().all(|&t| s == t || s & t != s));
        if !antichain {
            continue;
        }
        out.push(disj(
            members
                .iter()
                .map(|&s| conj((0..gens.len()).filter(|i| s >> i & 1 == 1).map(|i| gens[i].clone()).collect()))
                .collect(),
        ));
    }
    out
}

/// Words of length at most `depth` in length-lexicographic order.
fn words(labels: &[String], depth: usize) -> Vec<Vec<String>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<String>> = vec![vec![]];
    for _ in 0..depth {
        layer = layer
            .iter()
            .flat_map(|w| {
                labels.iter().map(move |a| {
                    let mut v = w.clone();
                    v.push(a.clone());
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// All formulas of modal depth at most `depth` over the alphabet, up to the
/// normalisation of the propositional layer. Linear logics yield the word
/// observables `<w> p`, which span every formula.
pub fn enumerate_formulas(logic: &Logic, labels: &[String], props: &[String], depth: usize) -> Result<Vec<Formula>> {
    if logic.domain() == Domain::VectorSpaces {
        return Ok(words(labels, depth)
            .into_iter()
            .map(|w| w.iter().rev().fold(Formula::atom("p"), |f, a| Formula::dia(a, f)))
            .collect());
    }
    let has = |m| logic.modalities().contains(&m);
    match logic.base() {
        Base::Set if has(Modality::Top) => Ok(words(labels, depth).iter().map(|w| Formula::trace(w)).collect()),
        Base::Set => Ok(vec![]),
        Base::Boolean => {
            let atoms: Vec<Formula> = if has(Modality::Prop) {
                props.iter().map(|p| Formula::atom(p)).collect()
            } else {
                vec![]
            };
            let mut gens = atoms.clone();
            for _ in 0..depth {
                check_generators(gens.len())?;
                let mut next = atoms.clone();
                for a in labels {
                    next.extend(minterms(&gens).into_iter().map(|m| Formula::dia(a, m)));
                }
                gens = next;
            }
            check_generators(gens.len())?;
            Ok(boolean_functions(&gens))
        }
        Base::Lattice => {
            let mut layer = vec![Formula::Bot, Formula::Top];
            for _ in 0..depth {
                let mut gens = Vec::new();
                for a in labels {
                    for f in &layer {
                        // [a]T = T and <a>F = F
                        if has(Modality::Box) && *f != Formula::Top {
                            gens.push(Formula::boxed(a, f.clone()));
                        }
                        if has(Modality::Diamond) && *f != Formula::Bot {
                            gens.push(Formula::dia(a, f.clone()));
                        }
                    }
                }
                check_generators(gens.len())?;
                layer = monotone_functions(&gens);
            }
            Ok(layer)
        }
        Base::Linear => unreachable!("linear bases live over vector spaces"),
    }
}

/// Formulas with pairwise distinct extensions on `X1 ⊎ X2`, found by
/// applying liftings and connectives to what is already known, at most
/// `depth` modal rounds deep. Stops early once a round adds nothing, in
/// which case every formula of the logic is equivalent on both models to
/// one in the list. For automata the list is a basis of word observables.
pub fn enumerate_formulas_over(logic: &Logic, depth: usize, m1: &Model, m2: &Model) -> Result<Vec<Formula>> {
    let mismatch = || Error::BaseMismatch {
        logic: logic.name().to_string(),
        model: m1.kind(),
    };
    match logic.domain() {
        Domain::Sets => {
            let (Some(s1), Some(s2)) = (m1.as_set(), m2.as_set()) else {
                return Err(mismatch());
            };
            Ok(SemanticClosure::run(logic, &DisjointUnion::new(s1, s2)?, depth))
        }
        Domain::VectorSpaces => {
            let (Some(w1), Some(w2)) = (m1.as_wa(), m2.as_wa()) else {
                return Err(mismatch());
            };
            check_same_labels(w1, w2)?;
            let n1 = w1.dim();
            let mut start = w1.output().to_vec();
            start.extend_from_slice(w2.output());
            let mut span = Matrix::empty(n1 + w2.dim());
            let mut pivots = Vec::new();
            let mut out = Vec::new();
            let mut queue = VecDeque::from([(start, Formula::atom("p"), 0usize)]);
            while let Some((r, f, d)) = queue.pop_front() {
                if span.rref_contains(&pivots, &r) {
                    continue;
                }
                span.push_row(r.clone());
                pivots = span.rref_in_place();
                if d < depth {
                    let (r1, r2) = r.split_at(n1);
                    for (a, label) in w1.labels().iter().enumerate() {
                        let mut next = w1.matrix(a).vec_mul(r1)?;
                        next.extend(w2.matrix(a).vec_mul(r2)?);
                        queue.push_back((next, Formula::dia(label, f.clone()), d + 1));
                    }
                }
                out.push(f);
            }
            Ok(out)
        }
    }
}

struct SemanticClosure {
    known: Vec<(StateSet, Formula)>,
    index: HashMap<StateSet, usize>,
}

impl SemanticClosure {
    fn run(logic: &Logic, u: &DisjointUnion, depth: usize) -> Vec<Formula> {
        let n = u.num_states();
        let mut c = SemanticClosure {
            known: Vec::new(),
            index: HashMap::new(),
        };
        let mut top = StateSet::with_capacity(n);
        top.insert_range(..);
        let has = |m| logic.modalities().contains(&m);
        if has(Modality::Top) || logic.admits(super::Connective::Top) {
            c.add(top, Formula::Top);
        }
        if logic.admits(super::Connective::Bot) {
            c.add(StateSet::with_capacity(n), Formula::Bot);
        }
        let liftings = logic.liftings(u.labels(), u.props());
        for l in liftings.iter().filter(|l| l.arity() == 0 && **l != Lifting::Top) {
            if let Lifting::Prop(p) = l {
                c.add(l.preimage(u, None), Formula::atom(&u.props()[*p]));
            }
        }
        c.close(logic, 0);
        let unary: Vec<Lifting> = liftings.into_iter().filter(|l| l.arity() == 1).collect();
        for _ in 0..depth {
            let before = c.known.len();
            for i in 0..before {
                let (ext, f) = c.known[i].clone();
                for l in &unary {
                    let g = match *l {
                        Lifting::Diamond(a) => Formula::dia(&u.labels()[a], f.clone()),
                        Lifting::Box(a) => Formula::boxed(&u.labels()[a], f.clone()),
                        _ => unreachable!(),
                    };
                    c.add(l.preimage(u, Some(&ext)), g);
                }
            }
            if c.known.len() == before {
                break;
            }
            c.close(logic, before);
        }
        c.known.into_iter().map(|(_, f)| f).collect()
    }

    fn add(&mut self, ext: StateSet, f: Formula) -> bool {
        if self.index.contains_key(&ext) {
            return false;
        }
        self.index.insert(ext.clone(), self.known.len());
        self.known.push((ext, f));
        true
    }

    /// Closes under the logic's propositional connectives; `from` marks the
    /// first entry not yet combined with the others.
    fn close(&mut self, logic: &Logic, mut from: usize) {
        use super::Connective as C;
        let (not, and, or) = (logic.admits(C::Not), logic.admits(C::And), logic.admits(C::Or));
        while from < self.known.len() {
            let end = self.known.len();
            for i in from..end {
                let (e, f) = self.known[i].clone();
                if not {
                    let mut x = e.clone();
                    x.toggle_range(..);
                    self.add(x, Formula::not(f.clone()));
                }
                for j in 0..end {
                    let (e2, f2) = self.known[j].clone();
                    if and {
                        let mut x = e.clone();
                        x.intersect_with(&e2);
                        self.add(x, Formula::and(f.clone(), f2.clone()));
                    }
                    if or {
                        let mut x = e.clone();
                        x.union_with(&e2);
                        self.add(x, Formula::or(f.clone(), f2));
                    }
                }
            }
            from = end;
        }
    }
}
