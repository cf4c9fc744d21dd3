use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::coeff::{Scalar, Symbol};
use crate::forms::{expand, Basis, DerivationContext, Form, SpanSolver};

/// Algebraic ideal generated by forms on a coordinate chart.
#[derive(Debug, Clone)]
pub struct ExteriorIdeal {
    ctx: DerivationContext,
    coordinates: Vec<String>,
    names: Vec<String>,
    generators: Vec<Form>,
    params: Vec<String>,
    closure: OnceLock<Result<ClosureWitness, ClosureFailure>>,
}

impl PartialEq for ExteriorIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.coordinates == other.coordinates
            && self.names == other.names
            && self.generators == other.generators
            && self.params == other.params
    }
}

impl ExteriorIdeal {
    pub fn new(coordinates: &[&str]) -> Self {
        ExteriorIdeal {
            ctx: DerivationContext::coordinates(coordinates),
            coordinates: coordinates.iter().map(|c| c.to_string()).collect(),
            names: Vec::new(),
            generators: Vec::new(),
            params: Vec::new(),
            closure: OnceLock::new(),
        }
    }

    pub fn with_param(mut self, name: &str) -> Self {
        if !self.params.iter().any(|p| p == name) {
            self.params.push(name.to_string());
        }
        self
    }

    /// Appends a generator. Panics if the form belongs to another context.
    pub fn with_generator(mut self, name: &str, form: Form) -> Self {
        assert!(form.basis() == self.ctx.basis(), "generator `{name}` is not in the ideal's context");
        self.names.push(name.to_string());
        self.generators.push(form);
        self.closure = OnceLock::new();
        self
    }

    pub fn ctx(&self) -> &DerivationContext {
        &self.ctx
    }

    pub fn basis(&self) -> &Arc<Basis> {
        self.ctx.basis()
    }

    pub fn coordinates(&self) -> &[String] {
        &self.coordinates
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generators(&self) -> &[Form] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Option<&Form> {
        self.names.iter().position(|n| n == name).map(|i| &self.generators[i])
    }

    /// `d(coordinate)`.
    pub fn d(&self, coordinate: &str) -> Form {
        self.ctx.gen(&format!("d{coordinate}"))
    }

    /// Substitute a parameter value into every generator.
    pub fn bind(&self, param: &str, value: &Scalar) -> Result<ExteriorIdeal, crate::coeff::CoeffError> {
        let map = [(Symbol::named(param), value.clone())].into_iter().collect();
        let mut out = ExteriorIdeal::new(&self.coordinates.iter().map(String::as_str).collect::<Vec<_>>());
        out.params = self.params.iter().filter(|p| *p != param).cloned().collect();
        for (n, g) in self.names.iter().zip(&self.generators) {
            out.names.push(n.clone());
            out.generators.push(g.try_map_coeffs(|c| c.substitute(&map))?);
        }
        Ok(out)
    }

    /// Cached result of [`closure_check`].
    pub fn closure(&self) -> &Result<ClosureWitness, ClosureFailure> {
        self.closure.get_or_init(|| compute_closure(self))
    }
}

/// `phi = sum_j multipliers[j] ^ xi_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipWitness {
    pub names: Vec<String>,
    pub multipliers: Vec<Form>,
}

impl MembershipWitness {
    pub fn expand(&self, ideal: &ExteriorIdeal, degree: u32) -> Form {
        expand(&self.multipliers, ideal.generators(), ideal.basis(), degree)
    }

    /// Nonzero multipliers by generator name.
    pub fn support(&self) -> impl Iterator<Item = (&str, &Form)> {
        self.names.iter().zip(&self.multipliers).filter(|(_, m)| !m.is_zero()).map(|(n, m)| (n.as_str(), m))
    }

    pub fn multiplier(&self, name: &str) -> Option<&Form> {
        self.names.iter().position(|n| n == name).map(|i| &self.multipliers[i])
    }
}

impl fmt::Display for MembershipWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for (n, m) in self.support() {
            if any {
                f.write_str(" + ")?;
            }
            any = true;
            if m.degree() == 0 {
                write!(f, "({m})*{n}")?;
            } else {
                write!(f, "({m})^{n}")?;
            }
        }
        if !any {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Membership outcome with the normal-form residual.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub witness: MembershipWitness,
    pub residual: Form,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        self.residual.is_zero()
    }
}

pub fn membership(phi: &Form, ideal: &ExteriorIdeal) -> Membership {
    let solver = SpanSolver::new(ideal.basis(), ideal.generators(), phi.degree());
    let res = solver.solve(phi);
    Membership {
        witness: MembershipWitness { names: ideal.names.clone(), multipliers: res.multipliers },
        residual: res.remainder,
    }
}

/// Multipliers expressing `phi` in the ideal, or `None`.
pub fn ideal_membership(phi: &Form, ideal: &ExteriorIdeal) -> Option<MembershipWitness> {
    let m = membership(phi, ideal);
    m.is_member().then_some(m.witness)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureWitness {
    /// `(name, d(xi), witness)` per generator.
    pub entries: Vec<(String, Form, MembershipWitness)>,
}

impl ClosureWitness {
    pub fn get(&self, name: &str) -> Option<&MembershipWitness> {
        self.entries.iter().find(|(n, _, _)| n == name).map(|(_, _, w)| w)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureFailure {
    pub generator: String,
    pub differential: Form,
    pub residual: Form,
}

impl fmt::Display for ClosureFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d({}) = {} is not in the ideal; residual {}", self.generator, self.differential, self.residual)
    }
}

pub fn closure_check(ideal: &ExteriorIdeal) -> Result<ClosureWitness, ClosureFailure> {
    ideal.closure().clone()
}

fn compute_closure(ideal: &ExteriorIdeal) -> Result<ClosureWitness, ClosureFailure> {
    let mut entries = Vec::new();
    for (name, g) in ideal.names.iter().zip(&ideal.generators) {
        let dg = ideal.ctx.d(g);
        let m = membership(&dg, ideal);
        if !m.is_member() {
            return Err(ClosureFailure { generator: name.clone(), differential: dg, residual: m.residual });
        }
        entries.push((name.clone(), dg, m.witness));
    }
    Ok(ClosureWitness { entries })
}
