//! Linear ρ-bisimulations between weighted automata over the rationals.
//!
//! Relations are subspaces of `X1 ⊕ X2`, kept as reduced echelon bases so that
//! equality of subspaces is equality of values.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::engine::{BisimReport, Witness};
use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix, Rational};
use crate::logics::{Domain, Lifting, Logic};
use crate::models::format::Scalar;
use crate::models::{check_same_labels, WeightedAutomaton};

/// A subspace of `X1 ⊕ X2`; basis rows have length `n1 + n2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubspaceRelation {
    n1: usize,
    n2: usize,
    basis: Matrix,
}

impl SubspaceRelation {
    /// The span of `rows`, reduced to canonical form.
    pub fn span(n1: usize, n2: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let mut basis = Matrix::from_rows(n1 + n2, rows)?;
        basis.rref_in_place();
        Ok(SubspaceRelation { n1, n2, basis })
    }

    /// Wraps rows already in reduced echelon form, without reducing them.
    pub(crate) fn from_canonical(n1: usize, n2: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        Ok(SubspaceRelation {
            n1,
            n2,
            basis: Matrix::from_rows(n1 + n2, rows)?,
        })
    }

    pub fn zero(n1: usize, n2: usize) -> Self {
        SubspaceRelation {
            n1,
            n2,
            basis: Matrix::empty(n1 + n2),
        }
    }

    pub fn full(n1: usize, n2: usize) -> Self {
        SubspaceRelation {
            n1,
            n2,
            basis: Matrix::identity(n1 + n2),
        }
    }

    /// `{(x, x)}` inside `X ⊕ X`.
    pub fn diagonal(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                let mut v = vec![Rational::zero(); 2 * n];
                v[i] = Rational::from_integer(1.into());
                v[n + i] = Rational::from_integer(1.into());
                v
            })
            .collect();
        Self::span(n, n, rows).expect("well-shaped rows")
    }

    /// `{v | g·v = 0 for every row g}`.
    pub fn from_annihilator(n1: usize, n2: usize, g: &Matrix) -> Self {
        assert_eq!(g.ncols(), n1 + n2);
        SubspaceRelation {
            n1,
            n2,
            basis: g.null_space(),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    /// Dimension of the subspace.
    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        if v.len() != self.n1 + self.n2 {
            return false;
        }
        let pivots: Vec<usize> = self
            .basis
            .rows()
            .iter()
            .map(|r| r.iter().position(|x| !x.is_zero()).expect("nonzero basis row"))
            .collect();
        self.basis.rref_contains(&pivots, v)
    }

    pub fn contains_pair(&self, x1: &[Rational], x2: &[Rational]) -> bool {
        let mut v = x1.to_vec();
        v.extend_from_slice(x2);
        self.contains(&v)
    }

    pub fn is_subspace_of(&self, other: &SubspaceRelation) -> bool {
        self.dims() == other.dims() && self.basis.rows().iter().all(|r| other.contains(r))
    }

    /// The sum `B + B'`, the join of subspace relations.
    pub fn sum(&self, other: &SubspaceRelation) -> Result<SubspaceRelation> {
        self.same_dims(other)?;
        let mut basis = self.basis.stack(&other.basis);
        basis.rref_in_place();
        Ok(SubspaceRelation { basis, ..*self })
    }

    pub fn intersection(&self, other: &SubspaceRelation) -> Result<SubspaceRelation> {
        self.same_dims(other)?;
        let g = self.annihilator().stack(&other.annihilator());
        Ok(Self::from_annihilator(self.n1, self.n2, &g))
    }

    /// Canonical basis of the functionals vanishing on the subspace.
    pub fn annihilator(&self) -> Matrix {
        self.basis.null_space()
    }

    fn same_dims(&self, other: &SubspaceRelation) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::ShapeMismatch {
                expected: self.dims(),
                found: other.dims(),
            });
        }
        Ok(())
    }

    pub fn split<'a>(&self, v: &'a [Rational]) -> (&'a [Rational], &'a [Rational]) {
        v.split_at(self.n1)
    }

    pub fn to_file(&self) -> SubspaceFile {
        SubspaceFile(
            self.basis
                .rows()
                .iter()
                .map(|r| r.iter().map(Scalar::from_rational).collect())
                .collect(),
        )
    }
}

/// On-disk form: a JSON list of rational rows of length `n1 + n2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubspaceFile(pub Vec<Vec<Scalar>>);

impl SubspaceFile {
    pub fn to_relation(&self, n1: usize, n2: usize) -> Result<SubspaceRelation> {
        let rows = self
            .0
            .iter()
            .map(|r| r.iter().map(Scalar::to_rational).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        SubspaceRelation::span(n1, n2, rows)
    }
}

/// Pairs `(h1, h2)` of functionals with `h1(x1) = h2(x2)` on the relation,
/// each row stored as `h1 | h2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPairBasis {
    n1: usize,
    n2: usize,
    pairs: Matrix,
}

impl DualPairBasis {
    pub fn pairs(&self) -> &Matrix {
        &self.pairs
    }

    pub fn rank(&self) -> usize {
        self.pairs.nrows()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[Rational], &[Rational])> + '_ {
        self.pairs.rows().iter().map(|r| r.split_at(self.n1))
    }

    /// `{(x1, x2) | h1·x1 = h2·x2 for all pairs}`: annihilating again.
    pub fn relation(&self) -> SubspaceRelation {
        SubspaceRelation::from_annihilator(self.n1, self.n2, &flip_right(self.n1, &self.pairs))
    }
}

/// Negates the right-hand block of every row: `(g1 | g2) ↦ (g1 | -g2)`.
fn flip_right(n1: usize, m: &Matrix) -> Matrix {
    let rows = m
        .rows()
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .map(|(i, v)| if i < n1 { v.clone() } else { -v.clone() })
                .collect()
        })
        .collect();
    Matrix::from_rows(m.ncols(), rows).expect("same width")
}

pub fn dual_pairs(b: &SubspaceRelation) -> DualPairBasis {
    let mut pairs = flip_right(b.n1, &b.annihilator());
    pairs.rref_in_place();
    DualPairBasis {
        n1: b.n1,
        n2: b.n2,
        pairs,
    }
}

fn check_linear_inputs(logic: &Logic, w1: &WeightedAutomaton, w2: &WeightedAutomaton) -> Result<Vec<Lifting>> {
    if logic.domain() != Domain::VectorSpaces {
        return Err(Error::BaseMismatch {
            logic: logic.name().to_string(),
            model: "wa",
        });
    }
    check_same_labels(w1, w2)?;
    Ok(logic.liftings(w1.labels(), &[]))
}

/// Checks the output condition and the dual-pair transition condition on
/// every basis vector of `b`.
pub fn check_linear_bisim(
    logic: &Logic,
    w1: &WeightedAutomaton,
    w2: &WeightedAutomaton,
    b: &SubspaceRelation,
) -> Result<BisimReport> {
    let liftings = check_linear_inputs(logic, w1, w2)?;
    if b.dims() != (w1.dim(), w2.dim()) {
        return Err(Error::ShapeMismatch {
            expected: (w1.dim(), w2.dim()),
            found: b.dims(),
        });
    }
    let duals = dual_pairs(b);
    for v in b.basis().rows() {
        let (x1, x2) = b.split(v);
        for &l in &liftings {
            match l {
                Lifting::Output => {
                    if dot(w1.output(), x1) != dot(w2.output(), x2) {
                        return Ok(BisimReport::fail(Witness::Linear {
                            vector: v.clone(),
                            lifting: "p".into(),
                            dual_pair: None,
                        }));
                    }
                }
                Lifting::Diamond(a) => {
                    let y1 = w1.step_vector(x1, a)?;
                    let y2 = w2.step_vector(x2, a)?;
                    for (row, (h1, h2)) in duals.pairs().rows().iter().zip(duals.iter()) {
                        if dot(h1, &y1) != dot(h2, &y2) {
                            return Ok(BisimReport::fail(Witness::Linear {
                                vector: v.clone(),
                                lifting: l.name(w1.labels(), &[]),
                                dual_pair: Some(row.clone()),
                            }));
                        }
                    }
                }
                _ => unreachable!("linear logics only have output and diamonds"),
            }
        }
    }
    Ok(BisimReport::pass(0))
}

/// `(o1 | -o2)`.
fn output_constraint(w1: &WeightedAutomaton, w2: &WeightedAutomaton) -> Vec<Rational> {
    let mut row = w1.output().to_vec();
    row.extend(w2.output().iter().map(|v| -v.clone()));
    row
}

/// One application of the operator
/// `B ↦ {(x1, x2) | o1·x1 = o2·x2, (M_a x1, M_a x2) ∈ B for all a}`.
pub fn linear_refine(w1: &WeightedAutomaton, w2: &WeightedAutomaton, b: &SubspaceRelation) -> Result<SubspaceRelation> {
    check_same_labels(w1, w2)?;
    let (n1, n2) = (w1.dim(), w2.dim());
    let mut g = Matrix::empty(n1 + n2);
    g.push_row(output_constraint(w1, w2));
    let ann = b.annihilator();
    for a in 0..w1.labels().len() {
        for row in ann.rows() {
            let (g1, g2) = row.split_at(n1);
            let mut r = w1.matrix(a).vec_mul(g1)?;
            r.extend(w2.matrix(a).vec_mul(g2)?);
            g.push_row(r);
        }
    }
    Ok(SubspaceRelation::from_annihilator(n1, n2, &g))
}

/// Iterates [`linear_refine`] from the full space. The sequence of
/// dimensions strictly decreases until it stops, so there are at most
/// `n1 + n2 + 1` rounds.
pub fn greatest_linear_bisim(
    logic: &Logic,
    w1: &WeightedAutomaton,
    w2: &WeightedAutomaton,
) -> Result<(SubspaceRelation, BisimReport)> {
    check_linear_inputs(logic, w1, w2)?;
    let mut current = SubspaceRelation::full(w1.dim(), w2.dim());
    let mut iterations = 0;
    loop {
        let next = linear_refine(w1, w2, &current)?;
        iterations += 1;
        if next == current {
            return Ok((current, BisimReport::pass(iterations)));
        }
        current = next;
    }
}

/// `{(x1, x2) | o1 M_w x1 = o2 M_w x2 for every word w}`. Explores the
/// paired observables `(o1 M_w | o2 M_w)` breadth-first, pruning any that
/// already lie in the span found so far.
pub fn observability_kernel(w1: &WeightedAutomaton, w2: &WeightedAutomaton) -> Result<SubspaceRelation> {
    check_same_labels(w1, w2)?;
    let (n1, n2) = (w1.dim(), w2.dim());
    let mut start = w1.output().to_vec();
    start.extend_from_slice(w2.output());
    let mut span = Matrix::empty(n1 + n2);
    let mut pivots = Vec::new();
    let mut queue = std::collections::VecDeque::from([start]);
    let mut observables = Matrix::empty(n1 + n2);
    while let Some(r) = queue.pop_front() {
        if span.rref_contains(&pivots, &r) {
            continue;
        }
        span.push_row(r.clone());
        pivots = span.rref_in_place();
        let (r1, r2) = r.split_at(n1);
        for a in 0..w1.labels().len() {
            let mut next = w1.matrix(a).vec_mul(r1)?;
            next.extend(w2.matrix(a).vec_mul(r2)?);
            queue.push_back(next);
        }
        observables.push_row(r);
    }
    Ok(SubspaceRelation::from_annihilator(n1, n2, &flip_right(n1, &observables)))
}
