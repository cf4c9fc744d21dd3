//! Membership of a form in the module generated by a list of forms.
//!
//! A target `phi` of degree `p` is written as `sum_j a_j ^ g_j` where each
//! multiplier `a_j` ranges over forms of degree `p - deg g_j` with scalar
//! coefficients. The unknown coefficients are solved by Gauss-Jordan
//! elimination over the scalar field. Pivots are taken on the first monomial
//! in canonical order and free unknowns are set to zero, so results are
//! deterministic.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::coeff::Scalar;

use super::form::{Basis, Form, GenId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanResult {
    /// Normal form of the target modulo the span; zero iff the target is a
    /// member.
    pub remainder: Form,
    /// One multiplier per generator, in the order given.
    pub multipliers: Vec<Form>,
}

impl SpanResult {
    pub fn is_member(&self) -> bool {
        self.remainder.is_zero()
    }
}

struct Pivot {
    column: Vec<GenId>,
    vector: Form,
    combination: BTreeMap<usize, Scalar>,
}

/// Reduced echelon basis of the degree-`p` part of the span of `generators`.
pub struct SpanSolver {
    basis: Arc<Basis>,
    target_degree: u32,
    generators: Vec<Form>,
    labels: Vec<(usize, Vec<GenId>)>,
    pivots: Vec<Pivot>,
}

impl SpanSolver {
    pub fn new(basis: &Arc<Basis>, generators: &[Form], target_degree: u32) -> Self {
        let mut labels = Vec::new();
        let mut vectors = Vec::new();
        for (j, g) in generators.iter().enumerate() {
            if g.is_zero() || g.degree() > target_degree {
                continue;
            }
            for mono in basis.monomials_of_degree(target_degree - g.degree()) {
                let m = Form::monomial(basis, mono.clone(), Scalar::one());
                let v = m.wedge(g);
                if !v.is_zero() {
                    labels.push((j, mono));
                    vectors.push(v);
                }
            }
        }
        let mut solver = SpanSolver {
            basis: basis.clone(),
            target_degree,
            generators: generators.to_vec(),
            labels,
            pivots: Vec::new(),
        };
        for (k, v) in vectors.into_iter().enumerate() {
            solver.insert(v, BTreeMap::from([(k, Scalar::one())]));
        }
        solver
    }

    fn reduce(&self, mut v: Form, mut comb: BTreeMap<usize, Scalar>) -> (Form, BTreeMap<usize, Scalar>) {
        for p in &self.pivots {
            let c = v.coeff(&p.column);
            if c.is_zero() {
                continue;
            }
            v = &v - &p.vector.scale(&c);
            for (k, s) in &p.combination {
                let entry = comb.remove(k).unwrap_or_default();
                let updated = &entry - &(&c * s);
                if !updated.is_zero() {
                    comb.insert(*k, updated);
                }
            }
        }
        (v, comb)
    }

    fn insert(&mut self, v: Form, comb: BTreeMap<usize, Scalar>) {
        let (v, comb) = self.reduce(v, comb);
        let Some((column, lead)) = v.terms().next().map(|(m, c)| (m.to_vec(), c.clone())) else {
            return;
        };
        let inv = lead.inv().expect("nonzero pivot");
        let vector = v.scale(&inv);
        let combination: BTreeMap<usize, Scalar> = comb.into_iter().map(|(k, s)| (k, &s * &inv)).collect();
        // keep earlier pivots reduced against the new column
        for p in &mut self.pivots {
            let c = p.vector.coeff(&column);
            if c.is_zero() {
                continue;
            }
            p.vector = &p.vector - &vector.scale(&c);
            for (k, s) in &combination {
                let entry = p.combination.remove(k).unwrap_or_default();
                let updated = &entry - &(&c * s);
                if !updated.is_zero() {
                    p.combination.insert(*k, updated);
                }
            }
        }
        self.pivots.push(Pivot { column, vector, combination });
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn solve(&self, target: &Form) -> SpanResult {
        assert!(
            target.is_zero() || target.degree() == self.target_degree,
            "target degree {} does not match solver degree {}",
            target.degree(),
            self.target_degree
        );
        let (remainder, comb) = self.reduce(target.clone(), BTreeMap::new());
        let mut multipliers: Vec<Form> = self
            .generators
            .iter()
            .map(|g| Form::zero(&self.basis, self.target_degree.saturating_sub(g.degree())))
            .collect();
        for (k, s) in comb {
            // reduce() accumulated -coefficients; flip the sign back
            let (j, mono) = &self.labels[k];
            let term = Form::monomial(&self.basis, mono.clone(), -&s);
            multipliers[*j] = &multipliers[*j] + &term;
        }
        SpanResult { remainder, multipliers }
    }
}

/// Re-expand `sum_j a_j ^ g_j`.
pub fn expand(multipliers: &[Form], generators: &[Form], basis: &Arc<Basis>, degree: u32) -> Form {
    multipliers
        .iter()
        .zip(generators)
        .fold(Form::zero(basis, degree), |acc, (a, g)| &acc + &a.wedge(g))
}
