//! Exterior ideals on coordinate charts, closure with multiplier witnesses,
//! sectioning onto solutions, and linear prolongation connections.

mod connection;
mod family;
mod ideal;
mod section;

pub use connection::{
    commutator, is_zero_matrix, prolongation_residual, zero_curvature_matrix, zero_curvature_residual,
    ConnectionData, Matrix, ProlongationEntry, ProlongationReport,
};
pub use family::{b_family_ideal, camassa_holm_connection, COORDINATES};
pub use ideal::{
    closure_check, ideal_membership, membership, ClosureFailure, ClosureWitness, ExteriorIdeal, Membership,
    MembershipWitness,
};
pub use section::{
    b_family, coordinates_to_jets, eliminate, pull_to_plane, recognize, section, section_over, SectionEquation,
    SectionResult,
};

use thiserror::Error;

use crate::coeff::CoeffError;
use crate::jet::JetError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeError {
    #[error("elimination of `{0}` refers back to itself")]
    CyclicElimination(String),
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Scalar;
    use crate::jet::{self, dependent, jet, EvolutionSystem};
    use crate::su2::{extract_pde, kdv_spec, theta_components};

    fn named(s: &str) -> Scalar {
        Scalar::named(s)
    }

    #[test]
    fn dxi1_witness() {
        let ideal = b_family_ideal();
        let phi = ideal.d("x").wedge(ideal.generator("xi2").unwrap());
        let w = ideal_membership(&phi, &ideal).unwrap();
        let support: Vec<_> = w.support().map(|(n, m)| (n.to_string(), m.clone())).collect();
        assert_eq!(support, vec![("xi2".to_string(), ideal.d("x"))]);
    }

    #[test]
    fn zero_is_member_with_empty_witness() {
        let ideal = b_family_ideal();
        let w = ideal_membership(&ideal.ctx().zero(3), &ideal).unwrap();
        assert_eq!(w.support().count(), 0);
    }

    #[test]
    fn du_dp_is_not_member() {
        let ideal = b_family_ideal();
        let phi = ideal.d("u").wedge(&ideal.d("p"));
        assert!(ideal_membership(&phi, &ideal).is_none());
        // brute force: the only 2-form multiples are scalar combinations of
        // the generators, and du^dp appears in none of them
        let mono: Vec<_> = phi.terms().next().unwrap().0.to_vec();
        assert!(ideal.generators().iter().all(|g| g.coeff(&mono).is_zero()));
    }

    #[test]
    fn b_family_ideal_is_closed() {
        let ideal = b_family_ideal();
        let w = closure_check(&ideal).unwrap();
        for (name, dg, wit) in &w.entries {
            assert_eq!(&wit.expand(&ideal, 3), dg, "{name}");
        }
        // d(xi3) = (beta - 1) du^dq^dt
        let (du, dq, dt) = (ideal.d("u"), ideal.d("q"), ideal.d("t"));
        let expect = du.wedge(&dq).wedge(&dt).scale(&(&named("beta") - &Scalar::one()));
        assert_eq!(ideal.ctx().d(ideal.generator("xi3").unwrap()), expect);
    }

    #[test]
    fn dxi2_multiplier_reexpansion() {
        let ideal = b_family_ideal();
        let dx = ideal.d("x");
        let (xi1, xi3) = (ideal.generator("xi1").unwrap(), ideal.generator("xi3").unwrap());
        let (u, q, beta) = (named("u"), named("q"), named("beta"));
        let inv_u = u.inv().unwrap();
        let one_beta = &Scalar::one() + &beta;
        let dxi2 = ideal.ctx().d(ideal.generator("xi2").unwrap());
        // (1/u) dx ^ (-xi3 + ((1 + beta) u - beta q) xi1)
        let c = &(&one_beta * &u) - &(&beta * &q);
        let good = dx.wedge(&(&(-xi3) + &xi1.scale(&c))).scale(&inv_u);
        assert_eq!(good, dxi2);
        // the same shape with u((1 + beta) u - q) on xi1 differs by a multiple of xi1
        let c2 = &u * &(&(&one_beta * &u) - &q);
        let other = dx.wedge(&(&(-xi3) + &xi1.scale(&c2))).scale(&inv_u);
        assert_ne!(other, dxi2);
        assert!(ideal_membership(&(&other - &dxi2), &ideal).is_some());
    }

    #[test]
    fn trivial_closed_ideal() {
        let base = ExteriorIdeal::new(&["x", "t", "u"]);
        let g = base.d("u").wedge(&base.d("t"));
        let ideal = base.with_generator("xi", g);
        assert!(closure_check(&ideal).is_ok());
    }

    fn with_xi3(xi3: crate::forms::Form) -> ExteriorIdeal {
        let ideal = b_family_ideal();
        let mut out = ExteriorIdeal::new(&COORDINATES).with_param("beta");
        for n in ["xi1", "xi2"] {
            out = out.with_generator(n, ideal.generator(n).unwrap().clone());
        }
        out.with_generator("xi3", xi3)
    }

    #[test]
    fn dropping_a_closed_term_keeps_closure() {
        // d(u du^dt) = 0, so removing it cannot change any differential
        let ideal = b_family_ideal();
        let term = ideal.d("u").wedge(&ideal.d("t")).scale(&named("u"));
        assert!(ideal.ctx().d(&term).is_zero());
        let bad = with_xi3(ideal.generator("xi3").unwrap() - &term);
        let w = closure_check(&bad).unwrap();
        for (name, dg, wit) in &w.entries {
            assert_eq!(&wit.expand(&bad, 3), dg, "{name}");
        }
    }

    #[test]
    fn corrupted_xi3_is_not_closed() {
        let ideal = b_family_ideal();
        let dqdx = ideal.d("q").wedge(&ideal.d("x"));
        let xi3 = &(ideal.generator("xi3").unwrap() - &dqdx) + &dqdx.scale(&named("p"));
        let err = closure_check(&with_xi3(xi3)).unwrap_err();
        assert_eq!(err.generator, "xi3");
        let expect = ideal.d("x").wedge(&ideal.d("p")).wedge(&ideal.d("q"));
        assert_eq!(err.residual, expect);
        // by hand: dx^dp^dq is outside the span of the degree-3 ideal
        assert!(ideal_membership(&expect, &ideal).is_none());
    }

    fn chain() -> Vec<(String, Scalar)> {
        vec![("p".into(), jet("u", 1)), ("q".into(), jet("p", 1))]
    }

    #[test]
    fn section_reproduces_the_b_family() {
        let s = section(&b_family_ideal(), &chain()).unwrap();
        let raw: Vec<_> = s.equations.iter().map(|e| e.raw.clone()).collect();
        assert_eq!(raw[0], &jet("u", 1) - &dependent("p"));
        assert_eq!(raw[1], &jet("p", 1) - &dependent("q"));
        let u = dependent("u");
        let (ux, uxx, uxxx) = (jet("u", 1), jet("u", 2), jet("u", 3));
        let ut = Scalar::symbol(crate::coeff::Symbol::jet("u", 0, 1));
        let uxxt = Scalar::symbol(crate::coeff::Symbol::jet("u", 2, 1));
        let beta = named("beta");
        let expect = &(&(&(&(&ut - &uxxt) + &(&u * &ux)) - &(&u * &uxxx)) + &(&beta * &(&u * &ux)))
            - &(&beta * &(&uxx * &ux));
        let pdes: Vec<_> = s.pdes().collect();
        assert_eq!(pdes.len(), 1);
        assert_eq!(pdes[0].reduced, expect);
        assert_eq!(pdes[0].label, None);
        assert_eq!(s.eliminations[1].1, jet("u", 2));
    }

    #[test]
    fn named_members() {
        for (b, name) in [(2, "Camassa-Holm"), (3, "Degasperis-Procesi")] {
            let ideal = b_family_ideal().bind("beta", &Scalar::int(b)).unwrap();
            let s = section(&ideal, &chain()).unwrap();
            assert_eq!(s.pdes().next().unwrap().label, Some(name));
        }
        let ideal = b_family_ideal().bind("beta", &Scalar::int(5)).unwrap();
        assert_eq!(section(&ideal, &chain()).unwrap().pdes().next().unwrap().label, None);
    }

    #[test]
    fn cyclic_chain_is_rejected() {
        let bad = vec![("p".into(), jet("q", 1)), ("q".into(), jet("p", 1))];
        assert_eq!(section(&b_family_ideal(), &bad), Err(WeError::CyclicElimination("q".into())));
    }

    #[test]
    fn trivial_connections() {
        let ideal = b_family_ideal();
        assert!(prolongation_residual(&ConnectionData::zero(2), &ideal).unwrap().holds());
        let c = |v: i64| Scalar::int(v);
        let a = vec![vec![c(1), c(2)], vec![c(2), c(1)]];
        let b = vec![vec![c(3), c(1)], vec![c(1), c(3)]];
        let conn = ConnectionData::new(a, b).unwrap();
        assert!(prolongation_residual(&conn, &ideal).unwrap().holds());
        let sys = EvolutionSystem::new();
        assert!(is_zero_matrix(&zero_curvature_residual(&conn, &sys).unwrap()));
        assert!(is_zero_matrix(&zero_curvature_residual(&ConnectionData::zero(3), &sys).unwrap()));
    }

    #[test]
    fn camassa_holm_prolongation() {
        let ideal = b_family_ideal().bind("beta", &Scalar::int(2)).unwrap();
        let report = prolongation_residual(&camassa_holm_connection(), &ideal).unwrap();
        assert!(report.holds(), "{:?}", report.entries.iter().map(|e| e.membership.residual.to_string()).collect::<Vec<_>>());
        assert!(report.entries.iter().any(|e| e.membership.witness.support().count() > 0));
        let symbolic = prolongation_residual(&camassa_holm_connection(), &b_family_ideal()).unwrap();
        assert!(!symbolic.holds());
    }

    #[test]
    fn camassa_holm_lax_pair_on_sections() {
        // sectioned connection: zero curvature is a multiple of the equation
        let ideal = b_family_ideal().bind("beta", &Scalar::int(2)).unwrap();
        let s = section(&ideal, &chain()).unwrap();
        let eq = s.pdes().next().unwrap().reduced.clone();
        let conn = camassa_holm_connection()
            .try_map(|e| {
                let mut v = coordinates_to_jets(e, &ideal, ["x", "t"])?;
                for (var, rhs) in &s.eliminations {
                    v = eliminate(&v, var, rhs)?;
                }
                Ok::<_, WeError>(v)
            })
            .unwrap();
        for row in zero_curvature_matrix(&conn) {
            for e in row {
                let ratio = e.checked_div(&eq).unwrap();
                assert!(jet::time_derivatives(&ratio).is_empty(), "{ratio}");
            }
        }
    }

    #[test]
    fn akns_lax_pair_is_minus_theta() {
        let spec = kdv_spec();
        let th = theta_components(&spec);
        let conn = ConnectionData::from_akns(&spec);
        let m = zero_curvature_matrix(&conn);
        let (t11, t12, t21) = (th.third().clone(), th.minus.clone(), th.plus.clone());
        assert_eq!(m[0][0], -t11.clone());
        assert_eq!(m[0][1], -t12);
        assert_eq!(m[1][0], -t21);
        assert_eq!(m[1][1], t11);
        let sys = extract_pde(&spec, &th).unwrap().system;
        assert!(is_zero_matrix(&zero_curvature_residual(&conn, &sys).unwrap()));
    }
}
