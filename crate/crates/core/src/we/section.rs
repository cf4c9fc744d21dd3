use std::collections::BTreeMap;

use crate::coeff::{Scalar, Symbol};
use crate::forms::{pullback, DerivationContext, Form};
use crate::jet::{self, Direction};

use super::{ExteriorIdeal, WeError};

/// One generator restricted to a section `(x, t) -> (x, t, u_3(x, t), ...)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionEquation {
    pub generator: String,
    /// Coefficient of the pulled-back form before eliminations.
    pub raw: Scalar,
    pub reduced: Scalar,
    /// Named equation recognised in `reduced`.
    pub label: Option<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionResult {
    pub equations: Vec<SectionEquation>,
    /// Eliminations with every earlier one substituted into the right side.
    pub eliminations: Vec<(String, Scalar)>,
}

impl SectionResult {
    /// Equations that survive the eliminations.
    pub fn pdes(&self) -> impl Iterator<Item = &SectionEquation> {
        self.equations.iter().filter(|e| !e.reduced.is_zero())
    }
}

/// Coordinate scalar to jet expression: every non-independent coordinate
/// becomes a dependent variable.
pub fn coordinates_to_jets(e: &Scalar, ideal: &ExteriorIdeal, independent: [&str; 2]) -> Result<Scalar, WeError> {
    let map: BTreeMap<Symbol, Scalar> = ideal
        .coordinates()
        .iter()
        .filter(|c| !independent.contains(&c.as_str()))
        .map(|c| (Symbol::named(c.as_str()), jet::dependent(c)))
        .collect();
    Ok(e.substitute(&map)?)
}

/// Pull a form on the chart back to the jet plane.
pub fn pull_to_plane(
    form: &Form,
    ideal: &ExteriorIdeal,
    plane: &DerivationContext,
    independent: [&str; 2],
) -> Result<Form, WeError> {
    let dx = plane.gen("dx");
    let dt = plane.gen("dt");
    let images: Vec<Form> = ideal
        .coordinates()
        .iter()
        .map(|c| {
            if c == independent[0] {
                dx.clone()
            } else if c == independent[1] {
                dt.clone()
            } else {
                let v = jet::dependent(c);
                &dx.scale(&jet::total_derivative(&v, Direction::X)) + &dt.scale(&jet::total_derivative(&v, Direction::T))
            }
        })
        .collect();
    pullback(form, plane.basis(), &images, |c| coordinates_to_jets(c, ideal, independent))
}

/// Replace `var` and all its jets by the corresponding total derivatives of
/// `rhs`.
pub fn eliminate(e: &Scalar, var: &str, rhs: &Scalar) -> Result<Scalar, WeError> {
    let mut map = BTreeMap::new();
    for s in e.symbols() {
        let s = s.exp_arg().cloned().unwrap_or(s);
        if let Some((v, x, t)) = s.as_jet() {
            if v == var {
                let img = jet::total_derivative_n(&jet::total_derivative_n(rhs, Direction::X, x), Direction::T, t);
                map.insert(s.clone(), img);
            }
        }
    }
    if map.is_empty() {
        return Ok(e.clone());
    }
    Ok(e.substitute(&map)?)
}

fn mentions(e: &Scalar, var: &str) -> bool {
    e.symbols().iter().any(|s| s.exp_arg().unwrap_or(s).as_jet().is_some_and(|(v, _, _)| v == var))
}

/// Restrict every generator to a section over `(x, t)` and apply the
/// eliminations in order.
pub fn section(ideal: &ExteriorIdeal, eliminations: &[(String, Scalar)]) -> Result<SectionResult, WeError> {
    section_over(ideal, ["x", "t"], eliminations)
}

pub fn section_over(
    ideal: &ExteriorIdeal,
    independent: [&str; 2],
    eliminations: &[(String, Scalar)],
) -> Result<SectionResult, WeError> {
    let mut resolved: Vec<(String, Scalar)> = Vec::new();
    for (var, rhs) in eliminations {
        let mut r = rhs.clone();
        for (v, e) in &resolved {
            r = eliminate(&r, v, e)?;
        }
        if mentions(&r, var) {
            return Err(WeError::CyclicElimination(var.clone()));
        }
        resolved.push((var.clone(), r));
    }

    let plane = DerivationContext::jet_plane();
    let mut equations = Vec::new();
    for (name, g) in ideal.names().iter().zip(ideal.generators()) {
        let pulled = pull_to_plane(g, ideal, &plane, independent)?;
        let coeffs: Vec<Scalar> = if pulled.is_zero() {
            vec![Scalar::zero()]
        } else {
            pulled.terms().map(|(_, c)| c.clone()).collect()
        };
        for (k, raw) in coeffs.into_iter().enumerate() {
            let mut reduced = raw.clone();
            for (v, e) in &resolved {
                reduced = eliminate(&reduced, v, e)?;
            }
            let generator = if k == 0 { name.clone() } else { format!("{name}[{k}]") };
            let label = recognize(&reduced);
            equations.push(SectionEquation { generator, raw, reduced, label });
        }
    }
    Ok(SectionResult { equations, eliminations: resolved })
}

/// `m_t + u m_x + b m u_x` with `m = u - u_xx`.
pub fn b_family(var: &str, b: &Scalar) -> Scalar {
    let u = jet::dependent(var);
    let m = &u - &jet::jet(var, 2);
    let mt = jet::total_derivative(&m, Direction::T);
    let mx = jet::total_derivative(&m, Direction::X);
    &(&mt + &(&u * &mx)) + &(&(b * &m) * &jet::jet(var, 1))
}

const NAMED: [(i64, &str); 2] = [(2, "Camassa-Holm"), (3, "Degasperis-Procesi")];

/// Name of the equation when it is a constant multiple of a known member of
/// the b-family.
pub fn recognize(eq: &Scalar) -> Option<&'static str> {
    if eq.is_zero() {
        return None;
    }
    let vars: Vec<String> =
        eq.symbols().iter().filter_map(|s| s.as_jet().map(|(v, _, _)| v.to_string())).collect();
    for var in vars {
        for (b, name) in NAMED {
            let template = b_family(&var, &Scalar::int(b));
            if let Ok(ratio) = eq.checked_div(&template) {
                if ratio.is_constant() {
                    return Some(name);
                }
            }
        }
    }
    None
}
