use crate::coeff::{LaurentInEta, Scalar, Symbol};
use crate::forms::{DerivationContext, Form, MatrixForm};
use crate::jet::{self, EvolutionSystem};

use super::gauge::curvature;
use super::Su2Error;

/// Connection data on the (x, t) plane:
/// `omega3 = eta dx + A dt`, `omega1 + i omega2 = r dx + C dt`,
/// `omega1 - i omega2 = q dx + B dt`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AknsSpec {
    pub name: String,
    pub r: Scalar,
    pub q: Scalar,
    pub a: LaurentInEta,
    pub b: LaurentInEta,
    pub c: LaurentInEta,
    pub eta: Symbol,
}

impl AknsSpec {
    pub fn new(name: &str, r: Scalar, q: Scalar, a: LaurentInEta, b: LaurentInEta, c: LaurentInEta) -> Self {
        AknsSpec { name: name.to_string(), r, q, a, b, c, eta: Symbol::named("eta") }
    }

    pub fn eta(&self) -> Scalar {
        Scalar::symbol(self.eta.clone())
    }

    pub fn a(&self) -> Scalar {
        self.a.to_scalar(&self.eta)
    }

    pub fn b(&self) -> Scalar {
        self.b.to_scalar(&self.eta)
    }

    pub fn c(&self) -> Scalar {
        self.c.to_scalar(&self.eta)
    }

    pub fn check(&self) -> Result<(), Su2Error> {
        for (label, e) in [("r", &self.r), ("q", &self.q)] {
            if e.contains_symbol(&self.eta) {
                return Err(Su2Error::InvalidSpec(format!("{label} depends on the spectral parameter")));
            }
        }
        Ok(())
    }

    /// `[omega1, omega2, omega3]` over `ctx`, which must be the jet plane.
    pub fn omegas(&self, ctx: &DerivationContext) -> [Form; 3] {
        let dx = ctx.gen("dx");
        let dt = ctx.gen("dt");
        let plus = &dx.scale(&self.r) + &dt.scale(&self.c());
        let minus = &dx.scale(&self.q) + &dt.scale(&self.b());
        let half = Scalar::ratio(1, 2);
        let w1 = (&plus + &minus).scale(&half);
        // (plus - minus) / 2i
        let w2 = (&plus - &minus).scale(&(&Scalar::i() * &Scalar::ratio(-1, 2)));
        let w3 = &dx.scale(&self.eta()) + &dt.scale(&self.a());
        [w1, w2, w3]
    }

    pub fn omega_matrix(&self, ctx: &DerivationContext) -> MatrixForm {
        MatrixForm::pauli_compose(&self.omegas(ctx))
    }
}

/// KdV-family example: `r = -1`, `C = -4 eta^2 - 2q`,
/// `A = 4 eta^3 + 2 q eta + q_x`, `B = 4 q eta^2 + 2 q_x eta + q_xx + 2 q^2`.
/// `Theta = 0` is then equivalent to `q_t = q_xxx + 6 q q_x`.
pub fn kdv_spec() -> AknsSpec {
    let q = jet::dependent("q");
    let (qx, qxx) = (jet::jet("q", 1), jet::jet("q", 2));
    let n = Scalar::int;
    let a = LaurentInEta::from_coeffs([(3, n(4)), (1, &n(2) * &q), (0, qx.clone())]);
    let b = LaurentInEta::from_coeffs([(2, &n(4) * &q), (1, &n(2) * &qx), (0, &qxx + &(&n(2) * &(&q * &q)))]);
    let c = LaurentInEta::from_coeffs([(2, n(-4)), (0, &n(-2) * &q)]);
    AknsSpec::new("kdv", n(-1), q, a, b, c)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaComponents {
    /// `theta1, theta2, theta3` as multiples of `dx^dt`.
    pub forms: [Form; 3],
    /// Their `dx^dt` coefficients.
    pub coefficients: [Scalar; 3],
    /// Coefficient of `theta1 + i theta2`.
    pub plus: Scalar,
    /// Coefficient of `theta1 - i theta2`.
    pub minus: Scalar,
}

impl ThetaComponents {
    pub fn third(&self) -> &Scalar {
        &self.coefficients[2]
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Scalar::is_zero)
    }
}

pub fn theta_components(spec: &AknsSpec) -> ThetaComponents {
    let ctx = DerivationContext::jet_plane();
    let theta = curvature(&ctx, &spec.omega_matrix(&ctx));
    let forms = theta.pauli_decompose().expect("curvature of an su(2) connection is traceless");
    let area = ctx.gen("dx").wedge(&ctx.gen("dt"));
    let mono: Vec<_> = area.terms().next().map(|(m, _)| m.to_vec()).expect("dx^dt is nonzero");
    let coefficients = [forms[0].coeff(&mono), forms[1].coeff(&mono), forms[2].coeff(&mono)];
    let i2 = &Scalar::i() * &coefficients[1];
    let plus = &coefficients[0] + &i2;
    let minus = &coefficients[0] - &i2;
    ThetaComponents { forms, coefficients, plus, minus }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractedPde {
    pub system: EvolutionSystem,
    /// One line per nonzero equation after matching powers of the spectral
    /// parameter.
    pub trace: Vec<String>,
}

/// Read the evolution system off `Theta = 0` by matching powers of eta.
pub fn extract_pde(spec: &AknsSpec, theta: &ThetaComponents) -> Result<ExtractedPde, Su2Error> {
    let mut system = EvolutionSystem::new();
    let mut trace = Vec::new();
    let labelled = [("theta1 + i theta2", &theta.plus), ("theta1 - i theta2", &theta.minus), ("theta3", theta.third())];
    for (label, e) in labelled {
        let series = LaurentInEta::from_scalar(e, &spec.eta)?;
        for (k, coeff) in series.terms() {
            let (var, rhs) = solve_for_time_derivative(coeff).map_err(|why| {
                Su2Error::Extraction(format!("{label} at eta^{k}: {why} ({coeff} = 0)"))
            })?;
            trace.push(format!("{label} [eta^{k}]: {var}_t = {rhs}"));
            if let Some(prev) = system.law(&var) {
                if prev != &rhs {
                    return Err(Su2Error::Extraction(format!(
                        "conflicting laws for {var}_t: {prev} and {rhs}"
                    )));
                }
                continue;
            }
            system.insert(&var, rhs)?;
        }
    }
    Ok(ExtractedPde { system, trace })
}

fn solve_for_time_derivative(e: &Scalar) -> Result<(String, Scalar), String> {
    let ts = jet::time_derivatives(e);
    let [sym] = ts.as_slice() else {
        return Err(if ts.is_empty() {
            "no time derivative".to_string()
        } else {
            "several time derivatives".to_string()
        });
    };
    let Some((var, 0, 1)) = sym.as_jet() else {
        return Err(format!("unsupported time derivative {sym}"));
    };
    let c = e.partial(sym);
    if c.contains_symbol(sym) || c.is_zero() {
        return Err(format!("not linear in {sym}"));
    }
    let rest = e - &(&c * &Scalar::symbol(sym.clone()));
    let rhs = (-rest).checked_div(&c).map_err(|err| err.to_string())?;
    Ok((var.to_string(), rhs))
}
