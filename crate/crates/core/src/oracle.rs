//! Brute-force reference implementations and seeded instance generators.
//!
//! The oracles deliberately share no evaluation code with the engines they
//! certify: models are flattened to successor bitmasks, coherent pairs are
//! found by filtering every candidate pair of subsets, lifting semantics are
//! restated on masks, and the linear oracle has its own elimination routine.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::engine::greatest_rho_bisim;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Rational};
use crate::linear::{greatest_linear_bisim, observability_kernel, SubspaceRelation};
use crate::logics::{set_theory_kernel, Lifting, Logic};
use crate::models::{check_same_alphabet, check_same_labels, KripkeModel, Lts, SetCoalgebra, WeightedAutomaton};
use crate::relations::Relation;
use crate::zoo::{behavioural_equivalence, greatest_t_bisim};

/// Largest `n1·n2` for [`enumerate_relations`].
pub const RELATION_ENUMERATION_BOUND: usize = 16;
/// Largest `n1·n2` for [`oracle_greatest_bisim`].
pub const ORACLE_BISIM_BOUND: usize = 12;
/// Largest dimension for [`oracle_linear_gfp`].
pub const ORACLE_LINEAR_DIM: usize = 6;

/// All `2^(n1·n2)` relations, ordered by bitmask (pair `(i, j)` is bit
/// `i·n2 + j`).
pub fn enumerate_relations(n1: usize, n2: usize) -> Result<impl Iterator<Item = Relation>> {
    if n1 * n2 > RELATION_ENUMERATION_BOUND {
        return Err(Error::BoundExceeded {
            what: "relation enumeration",
            size: n1 * n2,
            bound: RELATION_ENUMERATION_BOUND,
        });
    }
    Ok((0..1u64 << (n1 * n2)).map(move |m| Relation::from_mask(n1, n2, m)))
}

/// A model flattened to bitmasks.
struct Flat {
    n: usize,
    /// `succ[x][a]`
    succ: Vec<Vec<u64>>,
    /// `props[x]`
    props: Vec<u64>,
}

impl Flat {
    fn of(m: &dyn SetCoalgebra) -> Flat {
        let n = m.num_states();
        let succ = (0..n)
            .map(|x| {
                (0..m.labels().len())
                    .map(|a| m.successors(x, a).ones().fold(0u64, |acc, y| acc | 1 << y))
                    .collect()
            })
            .collect();
        let props = (0..n)
            .map(|x| (0..m.props().len()).filter(|&p| m.prop_holds(x, p)).fold(0u64, |acc, p| acc | 1 << p))
            .collect();
        Flat { n, succ, props }
    }
}

/// `γ(x) ∈ λ(u)` restated on masks.
fn holds(l: Lifting, m: &Flat, x: usize, u: u64) -> bool {
    match l {
        Lifting::Top => true,
        Lifting::Diamond(a) => m.succ[x][a] & u != 0,
        Lifting::Box(a) => m.succ[x][a] & !u == 0,
        Lifting::Prop(p) => m.props[x] >> p & 1 == 1,
        Lifting::Output => unreachable!("set logics only"),
    }
}

fn pairs_of(mask: u64, n2: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..64).filter(move |k| mask >> k & 1 == 1).map(move |k| (k / n2, k % n2))
}

/// Whether the relation with bitmask `b` passes the bisimulation condition,
/// quantifying over every coherent pair found by filtering all candidates.
fn passes(liftings: &[Lifting], f1: &Flat, f2: &Flat, b: u64) -> bool {
    let n2 = f2.n;
    let rel: Vec<(usize, usize)> = pairs_of(b, n2).collect();
    let coherent: Vec<(u64, u64)> = (0..1u64 << f1.n)
        .flat_map(|a1| (0..1u64 << n2).map(move |a2| (a1, a2)))
        .filter(|&(a1, a2)| rel.iter().all(|&(i, j)| (a1 >> i & 1) == (a2 >> j & 1)))
        .collect();
    rel.iter().all(|&(i, j)| {
        liftings.iter().all(|&l| {
            if l.arity() == 0 {
                holds(l, f1, i, 0) == holds(l, f2, j, 0)
            } else {
                coherent.iter().all(|&(a1, a2)| holds(l, f1, i, a1) == holds(l, f2, j, a2))
            }
        })
    })
}

/// The union of every relation that passes the bisimulation condition.
pub fn oracle_greatest_bisim(logic: &Logic, m1: &dyn SetCoalgebra, m2: &dyn SetCoalgebra) -> Result<Relation> {
    check_same_alphabet(m1, m2)?;
    let (n1, n2) = (m1.num_states(), m2.num_states());
    if n1 * n2 > ORACLE_BISIM_BOUND {
        return Err(Error::BoundExceeded {
            what: "oracle relation enumeration",
            size: n1 * n2,
            bound: ORACLE_BISIM_BOUND,
        });
    }
    let liftings = logic.liftings(m1.labels(), m1.props());
    let (f1, f2) = (Flat::of(m1), Flat::of(m2));
    let union = (0..1u64 << (n1 * n2))
        .into_par_iter()
        .filter(|&b| passes(&liftings, &f1, &f2, b))
        .reduce(|| 0, |x, y| x | y);
    Ok(Relation::from_mask(n1, n2, union))
}

/// Whether the relation passes, by the oracle's own route.
pub fn oracle_check(logic: &Logic, m1: &dyn SetCoalgebra, m2: &dyn SetCoalgebra, b: &Relation) -> Result<bool> {
    check_same_alphabet(m1, m2)?;
    let (n1, n2) = b.shape();
    if n1 * n2 > 64 || n1 > 20 || n2 > 20 {
        return Err(Error::BoundExceeded {
            what: "oracle check",
            size: n1 * n2,
            bound: 64,
        });
    }
    let mask = b.pairs().fold(0u64, |acc, (i, j)| acc | 1 << (i * n2 + j));
    Ok(passes(&logic.liftings(m1.labels(), m1.props()), &Flat::of(m1), &Flat::of(m2), mask))
}

/// Reduced row echelon form, written out again for the oracle.
fn oracle_rref(mut rows: Vec<Vec<Rational>>, cols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut top = 0;
    for c in 0..cols {
        let Some(p) = (top..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(top, p);
        let lead = rows[top][c].clone();
        rows[top] = rows[top].iter().map(|v| v / &lead).collect();
        for i in 0..rows.len() {
            if i != top && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot_row = rows[top].clone();
                for (v, p) in rows[i].iter_mut().zip(pivot_row) {
                    *v -= &f * p;
                }
            }
        }
        pivots.push(c);
        top += 1;
    }
    rows.truncate(top);
    (rows, pivots)
}

/// `{(x1, x2) | o1 M_w x1 = o2 M_w x2}` over every word of length at most
/// `n1 + n2`, with no early stopping.
pub fn oracle_linear_gfp(w1: &WeightedAutomaton, w2: &WeightedAutomaton) -> Result<SubspaceRelation> {
    check_same_labels(w1, w2)?;
    let (n1, n2) = (w1.dim(), w2.dim());
    if n1.max(n2) > ORACLE_LINEAR_DIM {
        return Err(Error::BoundExceeded {
            what: "oracle dimension",
            size: n1.max(n2),
            bound: ORACLE_LINEAR_DIM,
        });
    }
    let row_times = |r: &[Rational], m: &Matrix| -> Vec<Rational> {
        (0..m.ncols())
            .map(|j| (0..m.nrows()).fold(Rational::zero(), |acc, i| acc + &r[i] * m.get(i, j)))
            .collect()
    };
    let mut layer = vec![(w1.output().to_vec(), w2.output().to_vec())];
    let mut constraints = Vec::new();
    for len in 0..=n1 + n2 {
        for (r1, r2) in &layer {
            let mut row = r1.clone();
            row.extend(r2.iter().map(|v| -v.clone()));
            constraints.push(row);
        }
        if len == n1 + n2 {
            break;
        }
        layer = layer
            .iter()
            .flat_map(|(r1, r2)| {
                (0..w1.labels().len()).map(move |a| (row_times(r1, w1.matrix(a)), row_times(r2, w2.matrix(a))))
            })
            .collect();
    }
    let cols = n1 + n2;
    let (reduced, pivots) = oracle_rref(constraints, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let kernel: Vec<Vec<Rational>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &p) in reduced.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect();
    let (basis, _) = oracle_rref(kernel, cols);
    SubspaceRelation::from_canonical(n1, n2, basis)
}

/// The kind of system a family generates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Lts,
    Kripke,
    Wa,
}

/// A seeded family of instance pairs: `kind:N1xN2@COUNT`, optionally
/// followed by `/L` for the number of labels (or propositions for Kripke
/// models), e.g. `lts:3x3@50` or `wa:2x2@50/2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceFamily {
    pub kind: FamilyKind,
    pub n1: usize,
    pub n2: usize,
    pub labels: usize,
    pub count: u64,
}

impl Default for InstanceFamily {
    fn default() -> Self {
        "lts:3x3@50".parse().expect("valid default")
    }
}

impl fmt::Display for InstanceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            FamilyKind::Lts => "lts",
            FamilyKind::Kripke => "kripke",
            FamilyKind::Wa => "wa",
        };
        write!(f, "{kind}:{}x{}@{}/{}", self.n1, self.n2, self.count, self.labels)
    }
}

impl FromStr for InstanceFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Usage(format!("malformed instance family `{s}` (expected e.g. lts:3x3@50)"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let kind = match kind {
            "lts" => FamilyKind::Lts,
            "kripke" => FamilyKind::Kripke,
            "wa" => FamilyKind::Wa,
            _ => return Err(bad()),
        };
        let (rest, labels) = match rest.split_once('/') {
            Some((r, l)) => (r, l.parse().map_err(|_| bad())?),
            None => (rest, 1),
        };
        let (dims, count) = rest.split_once('@').ok_or_else(bad)?;
        let (n1, n2) = dims.split_once('x').ok_or_else(bad)?;
        let fam = InstanceFamily {
            kind,
            n1: n1.parse().map_err(|_| bad())?,
            n2: n2.parse().map_err(|_| bad())?,
            labels,
            count: count.parse().map_err(|_| bad())?,
        };
        if fam.labels == 0 || fam.labels > 4 || fam.count == 0 {
            return Err(bad());
        }
        Ok(fam)
    }
}

pub(crate) const LABEL_NAMES: [&str; 4] = ["a", "b", "c", "d"];
const PROP_NAMES: [&str; 4] = ["p", "q", "r", "s"];

/// A uniformly random LTS: each possible edge present with probability
/// `density`.
pub fn random_lts(rng: &mut impl Rng, n: usize, labels: usize, density: f64) -> Lts {
    let mut edges = Vec::new();
    for x in 0..n {
        for a in 0..labels {
            for y in 0..n {
                if rng.gen_bool(density) {
                    edges.push((x, a, y));
                }
            }
        }
    }
    Lts::from_edges(n, &LABEL_NAMES[..labels], &edges).expect("generated edges are in range")
}

/// An LTS on `n ≥ base.n` states bisimilar to `base`: the extra states copy
/// the outgoing edges of random originals, and some edges are redirected to
/// copies of their targets.
fn expand_lts(rng: &mut impl Rng, base: &Lts, n: usize) -> (Lts, Vec<usize>) {
    let k = base.num_states();
    let origin: Vec<usize> = (0..n).map(|x| if x < k { x } else { rng.gen_range(0..k) }).collect();
    let copies: Vec<Vec<usize>> = (0..k).map(|o| (0..n).filter(|&x| origin[x] == o).collect()).collect();
    let mut edges = Vec::new();
    for (x, &o) in origin.iter().enumerate() {
        for (s, a, t) in base.edges() {
            if s == o {
                edges.push((x, a, *copies[t].choose(rng).expect("originals are their own copies")));
            }
        }
    }
    let labels: Vec<&str> = base.labels().iter().map(String::as_str).collect();
    (Lts::from_edges(n, &labels, &edges).expect("in range"), origin)
}

fn perturb_lts(rng: &mut impl Rng, m: &Lts) -> Lts {
    let n = m.num_states();
    let mut edges = m.edges();
    if n == 0 {
        return m.clone();
    }
    let e = (rng.gen_range(0..n), rng.gen_range(0..m.labels().len()), rng.gen_range(0..n));
    match edges.iter().position(|&x| x == e) {
        Some(i) => {
            edges.remove(i);
        }
        None => edges.push(e),
    }
    let labels: Vec<&str> = m.labels().iter().map(String::as_str).collect();
    Lts::from_edges(n, &labels, &edges).expect("in range")
}

/// A pair of LTSs: unrelated random systems, or two expansions of a common
/// smaller system, possibly with one edge toggled.
pub fn random_lts_pair(rng: &mut impl Rng, n1: usize, n2: usize, labels: usize) -> (Lts, Lts) {
    let (m1, m2, _) = lts_pair_with_origins(rng, n1, n2, labels);
    (m1, m2)
}

/// Size of the common base and the base state each state copies.
type Origins = (usize, Vec<usize>, Vec<usize>);

/// Also returns the origins for related pairs.
fn lts_pair_with_origins(
    rng: &mut impl Rng,
    n1: usize,
    n2: usize,
    labels: usize,
) -> (Lts, Lts, Option<Origins>) {
    let density = [0.2, 0.35, 0.5][rng.gen_range(0..3)];
    if rng.gen_bool(0.5) || n1.min(n2) == 0 {
        return (random_lts(rng, n1, labels, density), random_lts(rng, n2, labels, density), None);
    }
    let k = rng.gen_range(1..=n1.min(n2));
    let base = random_lts(rng, k, labels, density);
    let (m1, o1) = expand_lts(rng, &base, n1);
    let (mut m2, o2) = expand_lts(rng, &base, n2);
    if rng.gen_bool(0.5) {
        m2 = perturb_lts(rng, &m2);
    }
    (m1, m2, Some((k, o1, o2)))
}

fn lts_to_kripke(m: &Lts, props: usize, valuation: &[Vec<&'static str>]) -> KripkeModel {
    let names: Vec<String> = (0..m.num_states()).map(|i| format!("w{i}")).collect();
    let rel: Vec<(&str, &str)> = m
        .edges()
        .into_iter()
        .map(|(s, _, t)| (names[s].as_str(), names[t].as_str()))
        .collect();
    let valuation: Vec<(&str, Vec<&str>)> = names
        .iter()
        .zip(valuation)
        .map(|(w, v)| (w.as_str(), v.clone()))
        .collect();
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    KripkeModel::new(&name_refs, &rel, &PROP_NAMES[..props], &valuation).expect("generated model is valid")
}

/// A pair of Kripke models over one relation; valuations are random, and
/// copied along the expansion for related pairs.
pub fn random_kripke_pair(rng: &mut impl Rng, n1: usize, n2: usize, props: usize) -> (KripkeModel, KripkeModel) {
    let (m1, m2, origins) = lts_pair_with_origins(rng, n1, n2, 1);
    let mut random_val = |n: usize| -> Vec<Vec<&'static str>> {
        (0..n)
            .map(|_| PROP_NAMES[..props].iter().copied().filter(|_| rng.gen_bool(0.5)).collect())
            .collect()
    };
    let (v1, v2) = match origins {
        Some((k, o1, o2)) => {
            let base = random_val(k);
            (
                o1.iter().map(|&o| base[o].clone()).collect(),
                o2.iter().map(|&o| base[o].clone()).collect(),
            )
        }
        None => (random_val(n1), random_val(n2)),
    };
    (lts_to_kripke(&m1, props, &v1), lts_to_kripke(&m2, props, &v2))
}

fn small_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Vec<Vec<Rational>> {
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        Rational::zero()
                    } else {
                        Rational::from_integer(rng.gen_range(-2i64..=2).into())
                    }
                })
                .collect()
        })
        .collect()
}

pub fn random_wa(rng: &mut impl Rng, dim: usize, labels: usize) -> WeightedAutomaton {
    let output = small_matrix(rng, 1, dim).remove(0);
    let mats = (0..labels)
        .map(|a| {
            (
                LABEL_NAMES[a].to_string(),
                Matrix::from_rows(dim, small_matrix(rng, dim, dim)).expect("square"),
            )
        })
        .collect();
    WeightedAutomaton::new(output, mats).expect("square matrices")
}

/// `base` embedded into a larger automaton `[[M, C], [0, N]]` with output
/// `(o, o')`, then with coordinates permuted.
fn embed_wa(rng: &mut impl Rng, base: &WeightedAutomaton, dim: usize) -> WeightedAutomaton {
    let k = base.dim();
    let mut perm: Vec<usize> = (0..dim).collect();
    perm.shuffle(rng);
    let extra = small_matrix(rng, 1, dim - k).remove(0);
    let mut output = vec![Rational::zero(); dim];
    for i in 0..dim {
        output[perm[i]] = if i < k { base.output()[i].clone() } else { extra[i - k].clone() };
    }
    let mats = (0..base.labels().len())
        .map(|a| {
            let fill = small_matrix(rng, dim, dim);
            let mut m = vec![vec![Rational::zero(); dim]; dim];
            for i in 0..dim {
                for j in 0..dim {
                    let v = if i < k && j < k {
                        base.matrix(a).get(i, j).clone()
                    } else if i >= k && j < k {
                        Rational::zero()
                    } else {
                        fill[i][j].clone()
                    };
                    m[perm[i]][perm[j]] = v;
                }
            }
            (base.labels()[a].clone(), Matrix::from_rows(dim, m).expect("square"))
        })
        .collect();
    WeightedAutomaton::new(output, mats).expect("square")
}

/// A pair of automata: unrelated, or two embeddings of a common smaller
/// automaton.
pub fn random_wa_pair(rng: &mut impl Rng, d1: usize, d2: usize, labels: usize) -> (WeightedAutomaton, WeightedAutomaton) {
    if rng.gen_bool(0.5) || d1.min(d2) == 0 {
        return (random_wa(rng, d1, labels), random_wa(rng, d2, labels));
    }
    let k = rng.gen_range(1..=d1.min(d2));
    let base = random_wa(rng, k, labels);
    (embed_wa(rng, &base, d1), embed_wa(rng, &base, d2))
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One disagreement between an engine and an oracle.
#[derive(Clone, Debug, Serialize)]
pub struct OracleMismatch {
    pub seed: u64,
    pub check: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub family: String,
    pub instances: u64,
    pub checks: u64,
    pub mismatches: Vec<OracleMismatch>,
}

impl OracleReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn set_suite(m1: &dyn SetCoalgebra, m2: &dyn SetCoalgebra, logics: &[&str]) -> Result<Vec<(String, bool)>> {
    let mut out = Vec::new();
    for &name in logics {
        let logic = Logic::by_name(name)?;
        let (g, _) = greatest_rho_bisim(&logic, m1, m2)?;
        out.push((format!("{name}: gfp = oracle"), g == oracle_greatest_bisim(&logic, m1, m2)?));
        let k = set_theory_kernel(&logic, m1, m2)?;
        out.push((format!("{name}: gfp within kernel"), g.is_subset(&k)));
        // hm ignores valuations, so it only sees the whole structure of an LTS
        if name == "kripke" || (name == "hm" && m1.props().is_empty()) {
            out.push((format!("{name}: kernel = gfp"), k == g));
            out.push((format!("{name}: behavioural equivalence = gfp"), behavioural_equivalence(m1, m2)? == g));
            out.push((format!("{name}: t-bisimilarity = gfp"), greatest_t_bisim(m1, m2)? == g));
        }
    }
    Ok(out)
}

/// Runs the engine-versus-oracle suite over a family. Instance `i` uses
/// seed `i`.
pub fn run_oracle_suite(family: &InstanceFamily) -> Result<OracleReport> {
    let (n1, n2) = (family.n1, family.n2);
    match family.kind {
        FamilyKind::Lts | FamilyKind::Kripke if n1 * n2 > ORACLE_BISIM_BOUND => {
            return Err(Error::BoundExceeded {
                what: "oracle relation enumeration",
                size: n1 * n2,
                bound: ORACLE_BISIM_BOUND,
            })
        }
        FamilyKind::Wa if n1.max(n2) > ORACLE_LINEAR_DIM => {
            return Err(Error::BoundExceeded {
                what: "oracle dimension",
                size: n1.max(n2),
                bound: ORACLE_LINEAR_DIM,
            })
        }
        _ => {}
    }
    #[allow(clippy::type_complexity)]
    let per_seed: Vec<Result<(u64, Vec<(String, bool)>)>> = (0..family.count)
        .into_par_iter()
        .map(|seed| {
            let mut rng = seeded(seed);
            let results = match family.kind {
                FamilyKind::Lts => {
                    let (m1, m2) = random_lts_pair(&mut rng, n1, n2, family.labels);
                    set_suite(&m1, &m2, &["trace", "hm", "pml", "kripke"])?
                }
                FamilyKind::Kripke => {
                    let (m1, m2) = random_kripke_pair(&mut rng, n1, n2, family.labels);
                    set_suite(&m1, &m2, &["trace", "hm", "pml", "kripke"])?
                }
                FamilyKind::Wa => {
                    let (w1, w2) = random_wa_pair(&mut rng, n1, n2, family.labels);
                    let mut out = Vec::new();
                    let oracle = oracle_linear_gfp(&w1, &w2)?;
                    let obs = observability_kernel(&w1, &w2)?;
                    for name in ["linear-trace", "linear-hm"] {
                        let (g, _) = greatest_linear_bisim(&Logic::by_name(name)?, &w1, &w2)?;
                        out.push((format!("{name}: gfp = oracle"), g == oracle));
                        out.push((format!("{name}: gfp = observability kernel"), g == obs));
                    }
                    out
                }
            };
            Ok((seed, results))
        })
        .collect();
    let mut report = OracleReport {
        family: family.to_string(),
        instances: family.count,
        checks: 0,
        mismatches: Vec::new(),
    };
    for r in per_seed {
        let (seed, results) = r?;
        for (check, ok) in results {
            report.checks += 1;
            if !ok {
                report.mismatches.push(OracleMismatch { seed, check });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::check_rho_bisim;

    #[test]
    fn relation_counts() {
        assert_eq!(enumerate_relations(1, 1).unwrap().count(), 2);
        assert_eq!(enumerate_relations(2, 1).unwrap().count(), 4);
        assert_eq!(enumerate_relations(2, 2).unwrap().count(), 16);
        assert!(enumerate_relations(4, 5).is_err());
    }

    #[test]
    fn oracle_examples() {
        let hm = Logic::by_name("hm").unwrap();
        let m1 = Lts::from_edges(2, &["a"], &[(0, 0, 1)]).unwrap();
        let m2 = Lts::from_edges(3, &["a"], &[(0, 0, 1), (0, 0, 2)]).unwrap();
        assert_eq!(
            oracle_greatest_bisim(&hm, &m1, &m2).unwrap(),
            Relation::from_pairs(2, 3, &[(0, 0), (1, 1), (1, 2)]).unwrap()
        );
        let dead = Lts::from_edges(1, &["a"], &[]).unwrap();
        assert_eq!(oracle_greatest_bisim(&hm, &dead, &dead).unwrap(), Relation::total(1, 1));
    }

    #[test]
    fn oracle_check_agrees_with_engine() {
        let mut rng = seeded(7);
        for _ in 0..10 {
            let (m1, m2) = random_lts_pair(&mut rng, 2, 3, 2);
            for name in ["trace", "pml", "kripke"] {
                let logic = Logic::by_name(name).unwrap();
                for b in enumerate_relations(2, 3).unwrap() {
                    assert_eq!(
                        oracle_check(&logic, &m1, &m2, &b).unwrap(),
                        check_rho_bisim(&logic, &m1, &m2, &b).unwrap().verdict
                    );
                }
            }
        }
    }

    #[test]
    fn linear_oracle_examples() {
        let w = |o: &[i64], m: &[&[i64]]| {
            WeightedAutomaton::new(
                o.iter().map(|&v| Rational::from_integer(v.into())).collect(),
                vec![("a".into(), Matrix::from_i64(m))],
            )
            .unwrap()
        };
        let w1 = w(&[1], &[&[0]]);
        let w2 = w(&[1, 0], &[&[0, 1], &[0, 0]]);
        let one = Rational::one();
        let zero = Rational::zero();
        let expected = SubspaceRelation::span(1, 2, vec![vec![one.clone(), one, zero]]).unwrap();
        assert_eq!(oracle_linear_gfp(&w1, &w2).unwrap(), expected);
        let z = w(&[0, 0], &[&[0, 0], &[0, 0]]);
        assert_eq!(oracle_linear_gfp(&z, &z).unwrap(), SubspaceRelation::full(2, 2));
        let d = oracle_linear_gfp(&w2, &w2).unwrap();
        assert!(SubspaceRelation::diagonal(2).is_subspace_of(&d));
    }

    #[test]
    fn family_specs() {
        let f: InstanceFamily = "lts:3x3@50".parse().unwrap();
        assert_eq!((f.n1, f.n2, f.count, f.labels), (3, 3, 50, 1));
        assert_eq!(f, InstanceFamily::default());
        let w: InstanceFamily = "wa:2x2@50/2".parse().unwrap();
        assert_eq!(w.kind, FamilyKind::Wa);
        for bad in ["", "lts", "lts:3@5", "x:1x1@1", "lts:1x1@0", "lts:axb@3"] {
            assert!(bad.parse::<InstanceFamily>().is_err(), "{bad}");
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = random_lts_pair(&mut seeded(3), 3, 4, 2);
        let b = random_lts_pair(&mut seeded(3), 3, 4, 2);
        assert_eq!(a, b);
        let a = random_wa_pair(&mut seeded(3), 3, 2, 2);
        let b = random_wa_pair(&mut seeded(3), 3, 2, 2);
        assert_eq!(a, b);
    }

    #[test]
    fn expansions_are_bisimilar() {
        let hm = Logic::by_name("hm").unwrap();
        for seed in 0..20 {
            let mut rng = seeded(seed);
            let base = random_lts(&mut rng, 2, 2, 0.4);
            let (big, _) = expand_lts(&mut rng, &base, 4);
            let g = greatest_rho_bisim(&hm, &base, &big).unwrap().0;
            assert!((0..4).all(|x| (0..2).any(|i| g.contains(i, x))));
        }
    }

    #[test]
    fn small_suites_pass() {
        for spec in ["lts:2x3@10/2", "kripke:3x3@10/1", "wa:2x3@10/2"] {
            let r = run_oracle_suite(&spec.parse().unwrap()).unwrap();
            assert!(r.ok(), "{spec}: {:?}", r.mismatches);
        }
        assert!(run_oracle_suite(&"lts:4x4@1".parse().unwrap()).is_err());
    }
}
