use std::collections::BTreeMap;

use crate::coeff::{Scalar, Symbol};
use crate::forms::{levi_civita, Basis, DerivationContext, Form, GenId, MatrixForm, ScalarDifferential};

/// Free differential graded algebra for the SU(2) prolongation:
/// one-forms `omega_l`, two-forms `theta_l` and the pseudopotentials
/// `y1, y2, y5..y8` with primitive differentials.
///
/// The rules are
/// `d omega_l = theta_l + i eps_lmn omega_m ^ omega_n` and
/// `d theta_l = 2i eps_mnl omega_m ^ theta_n`; construction certifies
/// `d∘d = 0` on every generator.
#[derive(Debug, Clone)]
pub struct Su2Context {
    ctx: DerivationContext,
    omega: [GenId; 3],
    theta: [GenId; 3],
}

pub const PSEUDOPOTENTIALS: [&str; 6] = ["y1", "y2", "y5", "y6", "y7", "y8"];

impl Default for Su2Context {
    fn default() -> Self {
        Su2Context::new()
    }
}

impl Su2Context {
    pub fn new() -> Self {
        Su2Context::with_functions(&[])
    }

    /// Adds extra degree-0 functions (for example gauge parameters) whose
    /// differentials are fresh closed one-forms.
    pub fn with_functions(extra: &[&str]) -> Self {
        let (ctx, omega, theta) = build(extra, true);
        let ctx = ctx.validated().expect("SU(2) rule table satisfies d∘d = 0");
        Su2Context { ctx, omega, theta }
    }

    /// The rule table with the structure term of `d omega_1` dropped; used as
    /// a negative control for `check_dd_zero`.
    pub fn corrupted_context() -> DerivationContext {
        build(&[], false).0
    }

    pub fn ctx(&self) -> &DerivationContext {
        &self.ctx
    }

    /// `omega_l` for `l` in 1..=3.
    pub fn omega(&self, l: usize) -> Form {
        Form::generator(self.ctx.basis(), self.omega[l - 1])
    }

    /// `theta_l` for `l` in 1..=3.
    pub fn theta(&self, l: usize) -> Form {
        Form::generator(self.ctx.basis(), self.theta[l - 1])
    }

    /// `y_k`; `y3 = y2/y1` and `y4 = y1/y2` are abbreviations.
    pub fn y(&self, k: usize) -> Scalar {
        match k {
            3 => Scalar::named("y2").checked_div(&Scalar::named("y1")).expect("y1 is a unit"),
            4 => Scalar::named("y1").checked_div(&Scalar::named("y2")).expect("y2 is a unit"),
            _ => Scalar::named(&format!("y{k}")),
        }
    }

    pub fn dy(&self, k: usize) -> Form {
        self.ctx.gen(&format!("dy{k}"))
    }

    pub fn scalar(&self, s: Scalar) -> Form {
        self.ctx.scalar(s)
    }

    /// `omega_1 + i omega_2`.
    pub fn omega_plus(&self) -> Form {
        &self.omega(1) + &self.omega(2).scale(&Scalar::i())
    }

    /// `omega_1 - i omega_2`.
    pub fn omega_minus(&self) -> Form {
        &self.omega(1) - &self.omega(2).scale(&Scalar::i())
    }

    pub fn theta_plus(&self) -> Form {
        &self.theta(1) + &self.theta(2).scale(&Scalar::i())
    }

    pub fn theta_minus(&self) -> Form {
        &self.theta(1) - &self.theta(2).scale(&Scalar::i())
    }

    pub fn omega_matrix(&self) -> MatrixForm {
        MatrixForm::pauli_compose(&[self.omega(1), self.omega(2), self.omega(3)])
    }

    pub fn theta_matrix(&self) -> MatrixForm {
        MatrixForm::pauli_compose(&[self.theta(1), self.theta(2), self.theta(3)])
    }
}

fn build(extra: &[&str], with_structure: bool) -> (DerivationContext, [GenId; 3], [GenId; 3]) {
    let mut b = Basis::builder();
    let omega = [b.generator("omega1", 1), b.generator("omega2", 1), b.generator("omega3", 1)];
    let dys: Vec<GenId> = PSEUDOPOTENTIALS.iter().map(|y| b.generator(&format!("d{y}"), 1)).collect();
    let extras: Vec<GenId> = extra.iter().map(|f| b.generator(&format!("d{f}"), 1)).collect();
    let theta = [b.generator("theta1", 2), b.generator("theta2", 2), b.generator("theta3", 2)];
    let basis = b.build();

    let mut map = BTreeMap::new();
    for (name, g) in PSEUDOPOTENTIALS.iter().copied().zip(dys).chain(extra.iter().copied().zip(extras)) {
        map.insert(Symbol::named(name), Form::generator(&basis, g));
    }
    let mut ctx = DerivationContext::new(basis.clone(), ScalarDifferential::Symbols(map));

    let w = |l: usize| Form::generator(&basis, omega[l]);
    let th = |l: usize| Form::generator(&basis, theta[l]);
    let two_i = Scalar::i().scale(&crate::coeff::GaussRat::from_int(2));
    for l in 0..3 {
        let mut d_omega = th(l);
        let mut d_theta = Form::zero(&basis, 3);
        for m in 0..3 {
            for n in 0..3 {
                let e = levi_civita(l, m, n);
                if e != 0 && (with_structure || l != 0) {
                    d_omega = &d_omega + &w(m).wedge(&w(n)).scale(&Scalar::i().scale(&crate::coeff::GaussRat::from_int(e)));
                }
                let e2 = levi_civita(m, n, l);
                if e2 != 0 {
                    d_theta = &d_theta + &w(m).wedge(&th(n)).scale(&two_i.scale(&crate::coeff::GaussRat::from_int(e2)));
                }
            }
        }
        ctx = ctx.with_rule(omega[l], d_omega).expect("degree 2");
        ctx = ctx.with_rule(theta[l], d_theta).expect("degree 3");
    }
    (ctx, omega, theta)
}
