//! Jet-space calculus in one space and one time variable.
//!
//! Dependent variables are jet symbols `u`, `u_x`, `u_xx`, ...; the
//! independent variables are the plain symbols `x` and `t`. Time derivatives
//! only appear transiently and are removed by [`reduce_mod_evolution`].

use std::collections::BTreeMap;

use thiserror::Error;

use crate::coeff::{CoeffError, Scalar, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("no evolution law for `{0}`")]
    UncoveredTimeDerivative(String),
    #[error("expression depends non-polynomially on `{0}`")]
    NonPolynomial(String),
    #[error("expression still contains the time derivative `{0}`")]
    TimeDerivativePresent(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    X,
    T,
}

pub fn x_symbol() -> Symbol {
    Symbol::named("x")
}

pub fn t_symbol() -> Symbol {
    Symbol::named("t")
}

pub fn dependent(var: &str) -> Scalar {
    Scalar::symbol(Symbol::jet(var, 0, 0))
}

/// The jet symbol of `var` differentiated `x` times in x.
pub fn jet(var: &str, x: u32) -> Scalar {
    Scalar::symbol(Symbol::jet(var, x, 0))
}

/// Total derivative `D_x` or `D_t`.
pub fn total_derivative(e: &Scalar, dir: Direction) -> Scalar {
    e.derivation(|s| match (s.as_jet(), s.name(), dir) {
        (Some((v, x, t)), _, Direction::X) => Scalar::symbol(Symbol::jet(v, x + 1, t)),
        (Some((v, x, t)), _, Direction::T) => Scalar::symbol(Symbol::jet(v, x, t + 1)),
        (None, Some("x"), Direction::X) | (None, Some("t"), Direction::T) => Scalar::one(),
        _ => Scalar::zero(),
    })
}

pub fn total_derivative_n(e: &Scalar, dir: Direction, n: u32) -> Scalar {
    (0..n).fold(e.clone(), |acc, _| total_derivative(&acc, dir))
}

/// Highest total derivative order of any jet symbol in `e`.
pub fn jet_order(e: &Scalar) -> u32 {
    e.symbols()
        .iter()
        .filter_map(|s| s.exp_arg().unwrap_or(s).as_jet().map(|(_, x, t)| x + t))
        .max()
        .unwrap_or(0)
}

/// Jet symbols in `e` carrying at least one t-derivative.
pub fn time_derivatives(e: &Scalar) -> Vec<Symbol> {
    e.symbols()
        .into_iter()
        .map(|s| s.exp_arg().cloned().unwrap_or(s))
        .filter(|s| s.as_jet().is_some_and(|(_, _, t)| t > 0))
        .collect()
}

/// Evolution laws `u_t = rhs(u, u_x, ...)` for each dependent variable.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EvolutionSystem {
    laws: BTreeMap<String, Scalar>,
}

impl EvolutionSystem {
    pub fn new() -> Self {
        EvolutionSystem::default()
    }

    pub fn with(mut self, var: &str, rhs: Scalar) -> Result<Self, JetError> {
        self.insert(var, rhs)?;
        Ok(self)
    }

    pub fn insert(&mut self, var: &str, rhs: Scalar) -> Result<(), JetError> {
        if let Some(s) = time_derivatives(&rhs).first() {
            return Err(JetError::TimeDerivativePresent(s.to_string()));
        }
        self.laws.insert(var.to_string(), rhs);
        Ok(())
    }

    pub fn law(&self, var: &str) -> Option<&Scalar> {
        self.laws.get(var)
    }

    pub fn laws(&self) -> impl Iterator<Item = (&str, &Scalar)> {
        self.laws.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn is_empty(&self) -> bool {
        self.laws.is_empty()
    }

    /// Value of `var` differentiated `x` times in x and `t` times in t on
    /// solutions, free of time derivatives.
    fn jet_value(
        &self,
        var: &str,
        x: u32,
        t: u32,
        cache: &mut BTreeMap<(String, u32, u32), Scalar>,
    ) -> Result<Scalar, JetError> {
        if t == 0 {
            return Ok(Scalar::symbol(Symbol::jet(var, x, 0)));
        }
        let key = (var.to_string(), x, t);
        if let Some(v) = cache.get(&key) {
            return Ok(v.clone());
        }
        let value = if x > 0 {
            let lower = self.jet_value(var, x - 1, t, cache)?;
            total_derivative(&lower, Direction::X)
        } else if t == 1 {
            self.laws
                .get(var)
                .cloned()
                .ok_or_else(|| JetError::UncoveredTimeDerivative(Symbol::jet(var, 0, 1).to_string()))?
        } else {
            let lower = self.jet_value(var, 0, t - 1, cache)?;
            self.reduce_with(&total_derivative(&lower, Direction::T), cache)?
        };
        cache.insert(key, value.clone());
        Ok(value)
    }

    fn reduce_with(
        &self,
        e: &Scalar,
        cache: &mut BTreeMap<(String, u32, u32), Scalar>,
    ) -> Result<Scalar, JetError> {
        let tds = time_derivatives(e);
        if tds.is_empty() {
            return Ok(e.clone());
        }
        let mut bindings = BTreeMap::new();
        for s in tds {
            let (v, x, t) = s.as_jet().expect("jet symbol");
            let value = self.jet_value(v, x, t, cache)?;
            bindings.insert(s, value);
        }
        Ok(e.substitute(&bindings)?)
    }
}

/// Eliminate every time derivative using the D_x-prolongation of `sys`.
pub fn reduce_mod_evolution(e: &Scalar, sys: &EvolutionSystem) -> Result<Scalar, JetError> {
    sys.reduce_with(e, &mut BTreeMap::new())
}

fn check_polynomial(e: &Scalar) -> Result<(), JetError> {
    if let Some(s) = time_derivatives(e).first() {
        return Err(JetError::TimeDerivativePresent(s.to_string()));
    }
    if let Some(s) = e.denominator().symbols().into_iter().find(|s| s.exp_arg().unwrap_or(s).is_jet()) {
        return Err(JetError::NonPolynomial(s.to_string()));
    }
    if let Some(s) = e.numerator().symbols().into_iter().find(|s| s.exp_arg().is_some_and(|a| a.is_jet())) {
        return Err(JetError::NonPolynomial(s.to_string()));
    }
    Ok(())
}

/// Variational derivative `sum_k (-D_x)^k de/du_{kx}`.
pub fn euler_operator(e: &Scalar, var: &str) -> Result<Scalar, JetError> {
    check_polynomial(e)?;
    let max = e
        .symbols()
        .iter()
        .filter_map(|s| s.as_jet().filter(|(v, _, _)| *v == var).map(|(_, x, _)| x))
        .max();
    let Some(max) = max else { return Ok(Scalar::zero()) };
    let mut out = Scalar::zero();
    for k in 0..=max {
        let partial = e.partial(&Symbol::jet(var, k, 0));
        if partial.is_zero() {
            continue;
        }
        let mut term = total_derivative_n(&partial, Direction::X, k);
        if k % 2 == 1 {
            term = -term;
        }
        out = &out + &term;
    }
    Ok(out)
}

/// Outcome of the total-derivative test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TotalDerivativeCertificate {
    /// Every variational derivative vanishes.
    Exact,
    /// The first variable (in the given order) with a nonzero variational
    /// derivative, and that derivative.
    Witness { var: String, variational_derivative: Scalar },
}

impl TotalDerivativeCertificate {
    pub fn holds(&self) -> bool {
        matches!(self, TotalDerivativeCertificate::Exact)
    }
}

pub fn is_total_x_derivative(e: &Scalar, vars: &[&str]) -> Result<TotalDerivativeCertificate, JetError> {
    for v in vars {
        let ev = euler_operator(e, v)?;
        if !ev.is_zero() {
            return Ok(TotalDerivativeCertificate::Witness {
                var: v.to_string(),
                variational_derivative: ev,
            });
        }
    }
    Ok(TotalDerivativeCertificate::Exact)
}
