use std::collections::BTreeMap;
use std::sync::Arc;

use crate::coeff::{Scalar, Symbol};
use crate::jet::{self, Direction};

use super::form::{Basis, Form, GenId};
use super::FormError;

/// How `d` acts on scalar coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScalarDifferential {
    /// Listed symbols have the given one-form differentials; all others are
    /// constants.
    Symbols(BTreeMap<Symbol, Form>),
    /// Coefficients are jet expressions: `d f = D_x f dx + D_t f dt`.
    Jet { dx: GenId, dt: GenId },
}

/// Declared generators together with the rule table for `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationContext {
    basis: Arc<Basis>,
    rules: Vec<Form>,
    scalars: ScalarDifferential,
}

/// Residuals `d(d(g))` for every generator and differentiated symbol.
#[derive(Debug, Clone)]
pub struct DdReport {
    pub residuals: Vec<(String, Form)>,
}

impl DdReport {
    pub fn passed(&self) -> bool {
        self.residuals.iter().all(|(_, r)| r.is_zero())
    }

    pub fn failures(&self) -> impl Iterator<Item = &(String, Form)> {
        self.residuals.iter().filter(|(_, r)| !r.is_zero())
    }
}

impl DerivationContext {
    /// A context in which every generator is closed.
    pub fn new(basis: Arc<Basis>, scalars: ScalarDifferential) -> Self {
        let rules = basis.ids().map(|g| Form::zero(&basis, basis.degree(g) + 1)).collect();
        DerivationContext { basis, rules, scalars }
    }

    /// Coordinate chart: each name `c` is a symbol with `d c = dc`.
    pub fn coordinates(names: &[&str]) -> Self {
        let mut b = Basis::builder();
        let ids: Vec<_> = names.iter().map(|n| b.generator(&format!("d{n}"), 1)).collect();
        let basis = b.build();
        let map = names
            .iter()
            .zip(ids)
            .map(|(n, g)| (Symbol::named(*n), Form::generator(&basis, g)))
            .collect();
        DerivationContext::new(basis, ScalarDifferential::Symbols(map))
    }

    /// The (x, t) plane with jet-valued coefficients.
    pub fn jet_plane() -> Self {
        let mut b = Basis::builder();
        let dx = b.generator("dx", 1);
        let dt = b.generator("dt", 1);
        DerivationContext::new(b.build(), ScalarDifferential::Jet { dx, dt })
    }

    pub fn with_rule(mut self, g: GenId, d: Form) -> Result<Self, FormError> {
        if d.basis() != &self.basis {
            return Err(FormError::BasisMismatch);
        }
        let want = self.basis.degree(g) + 1;
        if !d.is_zero() && d.degree() != want {
            return Err(FormError::DegreeMismatch { expected: want, found: d.degree() });
        }
        self.rules[g as usize] = if d.is_zero() { Form::zero(&self.basis, want) } else { d };
        Ok(self)
    }

    /// Reject rule tables for which `d∘d` does not vanish.
    pub fn validated(self) -> Result<Self, FormError> {
        let report = self.check_dd_zero();
        let failure = report.failures().next().cloned();
        match failure {
            Some((name, residual)) => Err(FormError::DdNonzero { generator: name, residual: residual.to_string() }),
            None => Ok(self),
        }
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn scalars(&self) -> &ScalarDifferential {
        &self.scalars
    }

    pub fn rule(&self, g: GenId) -> &Form {
        &self.rules[g as usize]
    }

    pub fn generator(&self, name: &str) -> Option<Form> {
        self.basis.id(name).map(|g| Form::generator(&self.basis, g))
    }

    pub fn gen(&self, name: &str) -> Form {
        self.generator(name).unwrap_or_else(|| panic!("unknown generator `{name}`"))
    }

    pub fn scalar(&self, s: Scalar) -> Form {
        Form::scalar(&self.basis, s)
    }

    pub fn zero(&self, degree: u32) -> Form {
        Form::zero(&self.basis, degree)
    }

    /// Differential of a scalar coefficient.
    pub fn d_scalar(&self, s: &Scalar) -> Form {
        match &self.scalars {
            ScalarDifferential::Jet { dx, dt } => {
                let fx = Form::generator(&self.basis, *dx).scale(&jet::total_derivative(s, Direction::X));
                let ft = Form::generator(&self.basis, *dt).scale(&jet::total_derivative(s, Direction::T));
                &fx + &ft
            }
            ScalarDifferential::Symbols(map) => {
                let mut out = Form::zero(&self.basis, 1);
                for sym in s.symbols() {
                    let (base, factor) = match sym.exp_arg() {
                        Some(arg) => (arg, Scalar::symbol(sym.clone())),
                        None => (&sym, Scalar::one()),
                    };
                    let Some(dsym) = map.get(base) else { continue };
                    let coeff = &s.partial(&sym) * &factor;
                    out = &out + &dsym.scale(&coeff);
                }
                out
            }
        }
    }

    /// Exterior derivative with the graded Leibniz rule.
    pub fn d(&self, f: &Form) -> Form {
        assert!(f.basis() == &self.basis, "form over another basis");
        let mut out = Form::zero(&self.basis, f.degree() + 1);
        for (mono, c) in f.terms() {
            let mono_form = Form::monomial(&self.basis, mono.to_vec(), Scalar::one());
            out = &out + &self.d_scalar(c).wedge(&mono_form);
            out = &out + &self.d_monomial(mono).scale(c);
        }
        out
    }

    fn d_monomial(&self, mono: &[GenId]) -> Form {
        let degree = mono.iter().map(|g| self.basis.degree(*g)).sum::<u32>() + 1;
        let mut out = Form::zero(&self.basis, degree);
        let mut before = 0;
        for (k, g) in mono.iter().enumerate() {
            let rule = &self.rules[*g as usize];
            if !rule.is_zero() {
                let prefix = Form::monomial(&self.basis, mono[..k].to_vec(), Scalar::one());
                let suffix = Form::monomial(&self.basis, mono[k + 1..].to_vec(), Scalar::one());
                let mut term = prefix.wedge(rule).wedge(&suffix);
                if before % 2 == 1 {
                    term = -term;
                }
                out = &out + &term;
            }
            before += self.basis.degree(*g);
        }
        out
    }

    /// `d(d(g))` for every generator and every differentiated symbol.
    pub fn check_dd_zero(&self) -> DdReport {
        let mut residuals = Vec::new();
        for g in self.basis.ids() {
            residuals.push((self.basis.name(g).to_string(), self.d(&self.rules[g as usize])));
        }
        match &self.scalars {
            ScalarDifferential::Symbols(map) => {
                for (s, ds) in map {
                    residuals.push((s.to_string(), self.d(ds)));
                }
            }
            ScalarDifferential::Jet { .. } => {
                for probe in [jet::x_symbol(), jet::t_symbol(), Symbol::jet("u", 0, 0), Symbol::jet("u", 2, 1)] {
                    let probe_expr = Scalar::symbol(probe.clone());
                    residuals.push((probe.to_string(), self.d(&self.d_scalar(&probe_expr))));
                }
            }
        }
        DdReport { residuals }
    }
}
