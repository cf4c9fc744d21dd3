use std::fmt;

use crate::coeff::Scalar;
use crate::forms::{expand, Form, SpanSolver};

use super::context::Su2Context;

/// The ten forms built on top of the SU(2) connection.
#[derive(Debug, Clone)]
pub struct Su2Forms {
    /// `xi[0]` is `xi1`.
    pub xi: [Form; 8],
    pub beta: [Form; 2],
}

impl Su2Forms {
    pub fn xi(&self, k: usize) -> &Form {
        &self.xi[k - 1]
    }

    pub fn beta(&self, k: usize) -> &Form {
        &self.beta[k - 1]
    }
}

pub fn build_forms(s: &Su2Context) -> Su2Forms {
    let y = |k| s.y(k);
    let wp = s.omega_plus();
    let wm = s.omega_minus();
    let w3 = s.omega(3);
    let two = Scalar::int(2);

    let xi1 = &(&s.dy(1) - &w3.scale(&y(1))) - &wm.scale(&y(2));
    let xi2 = &(&s.dy(2) - &wp.scale(&y(1))) + &w3.scale(&y(2));
    let xi3 = &(&(&s.ctx().d_scalar(&y(3)) - &wp) + &w3.scale(&(&two * &y(3)))) + &wm.scale(&(&y(3) * &y(3)));
    let xi4 = &(&(&s.ctx().d_scalar(&y(4)) - &wm) - &w3.scale(&(&two * &y(4)))) + &wp.scale(&(&y(4) * &y(4)));
    let xi5 = &(&s.dy(5) + &w3.scale(&two)) + &wm.scale(&(&two * &y(3)));
    let xi6 = &(&s.dy(6) - &w3.scale(&two)) + &wp.scale(&(&two * &y(4)));
    let e5 = Scalar::exp(&s.y(5)).expect("y5 is a symbol");
    let e6 = Scalar::exp(&s.y(6)).expect("y6 is a symbol");
    let xi7 = &s.dy(7) - &wm.scale(&e5);
    let xi8 = &s.dy(8) - &wp.scale(&e6);
    let beta1 = &w3.scale(&Scalar::int(-2)) - &wm.scale(&(&two * &y(3)));
    let beta2 = &w3.scale(&two) - &wp.scale(&(&two * &y(4)));
    Su2Forms { xi: [xi1, xi2, xi3, xi4, xi5, xi6, xi7, xi8], beta: [beta1, beta2] }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Su2Identity {
    Xi1,
    Xi2,
    XiMatrix,
    Xi3,
    Xi4,
    Xi5,
    Xi6,
    Xi7,
    Xi8,
    Bianchi,
}

impl Su2Identity {
    pub const ALL: [Su2Identity; 10] = [
        Su2Identity::Xi1,
        Su2Identity::Xi2,
        Su2Identity::XiMatrix,
        Su2Identity::Xi3,
        Su2Identity::Xi4,
        Su2Identity::Xi5,
        Su2Identity::Xi6,
        Su2Identity::Xi7,
        Su2Identity::Xi8,
        Su2Identity::Bianchi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Su2Identity::Xi1 => "xi1",
            Su2Identity::Xi2 => "xi2",
            Su2Identity::XiMatrix => "xi-matrix",
            Su2Identity::Xi3 => "xi3",
            Su2Identity::Xi4 => "xi4",
            Su2Identity::Xi5 => "xi5",
            Su2Identity::Xi6 => "xi6",
            Su2Identity::Xi7 => "xi7",
            Su2Identity::Xi8 => "xi8",
            Su2Identity::Bianchi => "bianchi",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Su2Identity::ALL.into_iter().find(|i| i.name() == name)
    }

    /// The identity as stated, in plain text.
    pub fn statement(self) -> &'static str {
        match self {
            Su2Identity::Xi1 => "d(xi1) = -y2(theta1 - i theta2) - y1 theta3 + omega3^xi1 + (omega1 - i omega2)^xi2",
            Su2Identity::Xi2 => "d(xi2) = -y1(theta1 + i theta2) + y2 theta3 + (omega1 + i omega2)^xi1 - omega3^xi2",
            Su2Identity::XiMatrix => "d(xi_i) = -Theta_ij y_j - Omega_ij ^ xi_j, i = 1, 2",
            Su2Identity::Xi3 => {
                "d(xi3) = -(theta1 + i theta2) + y3^2 (theta1 - i theta2) + 2 y3 theta3 - 2(omega3 + y3(omega1 - i omega2))^xi3"
            }
            Su2Identity::Xi4 => {
                "d(xi4) = -(theta1 - i theta2) + y4^2 (theta1 + i theta2) - 2 y4 theta4 + 2(omega3 - y4(omega1 + i omega2))^xi4"
            }
            Su2Identity::Xi5 => "d(xi5) = 2 y3 (theta1 - i theta2) + 2 theta3 + 2 xi3^(omega1 - i omega2)",
            Su2Identity::Xi6 => "d(xi6) = 2 y4 (theta1 + i theta2) - 2 theta3 + 2 xi4^(omega1 + i omega2)",
            Su2Identity::Xi7 => "d(xi7) = -e^y5 (theta1 - i theta2 + xi5^(omega1 - i omega2))",
            Su2Identity::Xi8 => "d(xi8) = -e^y6 (theta1 + i theta2 + xi6^(omega1 + i omega2))",
            Su2Identity::Bianchi => "d(Theta) = Omega^Theta - Theta^Omega",
        }
    }
}

impl fmt::Display for Su2Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `target = sum_j multipliers[j] ^ generators[j] + remainder`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub generators: Vec<String>,
    pub multipliers: Vec<Form>,
    pub remainder: Form,
    /// Re-expanding the multipliers reproduces the target exactly.
    pub reexpands: bool,
}

impl Decomposition {
    pub fn is_member(&self) -> bool {
        self.remainder.is_zero()
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (g, m) in self.generators.iter().zip(&self.multipliers) {
            if m.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if m.degree() == 0 {
                write!(f, "({m})*{g}")?;
            } else {
                write!(f, "({m})^{g}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        if !self.remainder.is_zero() {
            write!(f, " + [remainder {}]", self.remainder)?;
        }
        Ok(())
    }
}

/// Decompose `target` over the given generators, degree by degree.
pub fn decompose(target: &Form, generators: &[(String, Form)]) -> Decomposition {
    let basis = target.basis();
    let forms: Vec<Form> = generators.iter().map(|(_, g)| g.clone()).collect();
    let solver = SpanSolver::new(basis, &forms, target.degree());
    let res = solver.solve(target);
    let back = &expand(&res.multipliers, &forms, basis, target.degree()) + &res.remainder;
    Decomposition {
        generators: generators.iter().map(|(n, _)| n.clone()).collect(),
        multipliers: res.multipliers,
        remainder: res.remainder,
        reexpands: back == *target,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityComponent {
    pub label: String,
    /// The left side differentiated through the rule table.
    pub lhs: Form,
    /// The right side as printed; `None` when it mentions a generator that
    /// does not exist.
    pub printed: Option<Form>,
    pub residual: Option<Form>,
    pub decomposition: Decomposition,
}

/// An alternative reading of the right side tried when the printed one
/// fails or cannot be evaluated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correction {
    pub description: String,
    pub residuals: Vec<Form>,
}

impl Correction {
    pub fn holds(&self) -> bool {
        self.residuals.iter().all(Form::is_zero)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityStatus {
    /// The printed right side matches exactly.
    Verified,
    /// The printed right side fails; a listed correction holds and the
    /// engine decomposition lies in the ring.
    Corrected,
    Failed,
}

impl IdentityStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            IdentityStatus::Verified => "verified",
            IdentityStatus::Corrected => "corrected",
            IdentityStatus::Failed => "failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub identity: Su2Identity,
    pub components: Vec<IdentityComponent>,
    pub corrections: Vec<Correction>,
    pub status: IdentityStatus,
    pub notes: Vec<String>,
}

impl IdentityReport {
    /// Every printed component evaluates and has zero residual.
    pub fn printed_holds(&self) -> bool {
        self.components.iter().all(|c| c.residual.as_ref().is_some_and(Form::is_zero))
    }

    /// The engine decomposition of every component lies in the ring and
    /// re-expands exactly.
    pub fn decomposition_holds(&self) -> bool {
        self.components.iter().all(|c| c.decomposition.is_member() && c.decomposition.reexpands)
    }
}

struct Ring<'a> {
    s: &'a Su2Context,
    f: &'a Su2Forms,
}

impl Ring<'_> {
    fn thetas(&self) -> Vec<(String, Form)> {
        (1..=3).map(|l| (format!("theta{l}"), self.s.theta(l))).collect()
    }

    fn with_xis(&self, ks: &[usize]) -> Vec<(String, Form)> {
        let mut g = self.thetas();
        g.extend(ks.iter().map(|&k| (format!("xi{k}"), self.f.xi(k).clone())));
        g
    }
}

fn component(label: &str, lhs: Form, printed: Option<Form>, ring: &[(String, Form)]) -> IdentityComponent {
    let residual = printed.as_ref().map(|p| &lhs - p);
    let decomposition = decompose(&lhs, ring);
    IdentityComponent { label: label.to_string(), lhs, printed, residual, decomposition }
}

pub fn verify_identity(s: &Su2Context, id: Su2Identity) -> IdentityReport {
    let f = build_forms(s);
    let ring = Ring { s, f: &f };
    let d = |form: &Form| s.ctx().d(form);
    let sc = |v: i64| Scalar::int(v);
    let y = |k| s.y(k);
    let (wp, wm, w3) = (s.omega_plus(), s.omega_minus(), s.omega(3));
    let (tp, tm, t3) = (s.theta_plus(), s.theta_minus(), s.theta(3));

    let mut corrections = Vec::new();
    let mut notes = Vec::new();
    let components = match id {
        Su2Identity::Xi1 => {
            let rhs = &(&(&tm.scale(&-y(2)) - &t3.scale(&y(1))) + &w3.wedge(f.xi(1))) + &wm.wedge(f.xi(2));
            vec![component("d(xi1)", d(f.xi(1)), Some(rhs), &ring.with_xis(&[1, 2]))]
        }
        Su2Identity::Xi2 => {
            let rhs = &(&(&tp.scale(&-y(1)) + &t3.scale(&y(2))) + &wp.wedge(f.xi(1))) - &w3.wedge(f.xi(2));
            vec![component("d(xi2)", d(f.xi(2)), Some(rhs), &ring.with_xis(&[1, 2]))]
        }
        Su2Identity::XiMatrix => {
            let omega = s.omega_matrix();
            let theta = s.theta_matrix();
            let ys = [y(1), y(2)];
            let matrix_rhs = |sign: i64| -> Vec<Form> {
                (0..2)
                    .map(|i| {
                        (0..2).fold(s.ctx().zero(2), |acc, j| {
                            let t = theta.entry(i, j).scale(&-ys[j].clone());
                            let w = omega.entry(i, j).wedge(f.xi(j + 1)).scale(&sc(sign));
                            &(&acc + &t) + &w
                        })
                    })
                    .collect()
            };
            let printed = matrix_rhs(-1);
            let comps: Vec<IdentityComponent> = printed
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    component(&format!("d(xi{})", i + 1), d(f.xi(i + 1)), Some(p.clone()), &ring.with_xis(&[1, 2]))
                })
                .collect();
            let flipped = matrix_rhs(1);
            corrections.push(Correction {
                description: "connection term with + sign: d(xi_i) = -Theta_ij y_j + Omega_ij ^ xi_j".into(),
                residuals: comps.iter().zip(&flipped).map(|(c, r)| &c.lhs - r).collect(),
            });
            comps
        }
        Su2Identity::Xi3 => {
            let conn = (&w3 + &wm.scale(&y(3))).scale(&sc(-2));
            let rhs = &(&(&(-&tp) + &tm.scale(&(&y(3) * &y(3)))) + &t3.scale(&(&sc(2) * &y(3)))) + &conn.wedge(f.xi(3));
            let c = component("d(xi3)", d(f.xi(3)), Some(rhs), &ring.with_xis(&[3]));
            let beta_form = &decomposed_theta_part(&c.lhs, s, f.xi(3)) + &f.beta(1).wedge(f.xi(3));
            notes.push(beta_note(1, &c.lhs, &beta_form));
            vec![c]
        }
        Su2Identity::Xi4 => {
            let conn = (&w3 - &wp.scale(&y(4))).scale(&sc(2));
            let lhs = d(f.xi(4));
            let base = &(&(-&tm) + &tp.scale(&(&y(4) * &y(4)))) + &conn.wedge(f.xi(4));
            for l in 1..=3 {
                let rhs = &base - &s.theta(l).scale(&(&sc(2) * &y(4)));
                corrections.push(Correction {
                    description: format!("theta4 read as theta{l}"),
                    residuals: vec![&lhs - &rhs],
                });
            }
            notes.push("the printed right side contains theta4, which is not a generator".into());
            let c = component("d(xi4)", lhs, None, &ring.with_xis(&[4]));
            let beta_form = &decomposed_theta_part(&c.lhs, s, f.xi(4)) + &f.beta(2).wedge(f.xi(4));
            notes.push(beta_note(2, &c.lhs, &beta_form));
            vec![c]
        }
        Su2Identity::Xi5 => {
            let rhs = &(&tm.scale(&(&sc(2) * &y(3))) + &t3.scale(&sc(2))) + &f.xi(3).wedge(&wm).scale(&sc(2));
            vec![component("d(xi5)", d(f.xi(5)), Some(rhs), &ring.with_xis(&[3]))]
        }
        Su2Identity::Xi6 => {
            let rhs = &(&tp.scale(&(&sc(2) * &y(4))) - &t3.scale(&sc(2))) + &f.xi(4).wedge(&wp).scale(&sc(2));
            vec![component("d(xi6)", d(f.xi(6)), Some(rhs), &ring.with_xis(&[4]))]
        }
        Su2Identity::Xi7 => {
            let e5 = Scalar::exp(&y(5)).expect("symbol");
            let rhs = (&tm + &f.xi(5).wedge(&wm)).scale(&-e5);
            vec![component("d(xi7)", d(f.xi(7)), Some(rhs), &ring.with_xis(&[5]))]
        }
        Su2Identity::Xi8 => {
            let e6 = Scalar::exp(&y(6)).expect("symbol");
            let rhs = (&tp + &f.xi(6).wedge(&wp)).scale(&-e6);
            vec![component("d(xi8)", d(f.xi(8)), Some(rhs), &ring.with_xis(&[6]))]
        }
        Su2Identity::Bianchi => {
            let omega = s.omega_matrix();
            let theta = s.theta_matrix();
            let lhs = theta.d(s.ctx());
            let rhs = omega.wedge(&theta).sub(&theta.wedge(&omega));
            let thetas = ring.thetas();
            let mut out = Vec::new();
            for i in 0..2 {
                for j in 0..2 {
                    out.push(component(
                        &format!("d(Theta_{}{})", i + 1, j + 1),
                        lhs.entry(i, j).clone(),
                        Some(rhs.entry(i, j).clone()),
                        &thetas,
                    ));
                }
            }
            out
        }
    };

    let mut report = IdentityReport { identity: id, components, corrections, status: IdentityStatus::Failed, notes };
    let holding: Vec<&str> =
        report.corrections.iter().filter(|c| c.holds()).map(|c| c.description.as_str()).collect();
    if !report.printed_holds() && !holding.is_empty() {
        let line = format!("holds with {}", holding.join("; "));
        report.notes.push(line);
    }
    report.status = if report.printed_holds() {
        IdentityStatus::Verified
    } else if !holding.is_empty() && report.decomposition_holds() {
        IdentityStatus::Corrected
    } else {
        IdentityStatus::Failed
    };
    report
}

pub fn verify_all(s: &Su2Context) -> Vec<IdentityReport> {
    Su2Identity::ALL.into_iter().map(|id| verify_identity(s, id)).collect()
}

// theta part of d(xi) with beta ^ xi removed
fn decomposed_theta_part(lhs: &Form, s: &Su2Context, xi: &Form) -> Form {
    let gens: Vec<(String, Form)> =
        (1..=3).map(|l| (format!("theta{l}"), s.theta(l))).chain([("xi".to_string(), xi.clone())]).collect();
    let dec = decompose(lhs, &gens);
    expand(&dec.multipliers[..3], &gens.iter().take(3).map(|(_, g)| g.clone()).collect::<Vec<_>>(), lhs.basis(), 2)
}

fn beta_note(k: usize, lhs: &Form, with_beta: &Form) -> String {
    if lhs == with_beta {
        format!("d(xi{}) = beta{k}^xi{} + theta terms", k + 2, k + 2)
    } else {
        format!("d(xi{}) is not beta{k}^xi{} plus theta terms", k + 2, k + 2)
    }
}
