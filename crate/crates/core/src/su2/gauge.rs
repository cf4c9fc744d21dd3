use crate::forms::{DerivationContext, Mat2, MatrixForm};

use super::Su2Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugeResult {
    pub omega: MatrixForm,
    /// `d Omega' - Omega' ^ Omega'`.
    pub theta_direct: MatrixForm,
    /// `Q Theta Q^-1`.
    pub theta_conjugated: MatrixForm,
    pub residual: MatrixForm,
}

/// Curvature `d Omega - Omega ^ Omega`.
pub fn curvature(ctx: &DerivationContext, omega: &MatrixForm) -> MatrixForm {
    omega.d(ctx).sub(&omega.wedge(omega))
}

/// `Omega -> Q Omega Q^-1 + dQ Q^-1` for a unimodular scalar matrix `Q`.
pub fn gauge_transform(ctx: &DerivationContext, omega: &MatrixForm, q: &Mat2) -> Result<GaugeResult, Su2Error> {
    let det = q.det();
    if !det.is_one() {
        return Err(Su2Error::NotUnimodular(det.to_string()));
    }
    let q_inv = q.adjugate();
    let dq = MatrixForm::d_of_scalars(q, ctx);
    let omega_prime = omega.left_mul(q).right_mul(&q_inv).add(&dq.right_mul(&q_inv));
    let theta_direct = curvature(ctx, &omega_prime);
    let theta_conjugated = curvature(ctx, omega).left_mul(q).right_mul(&q_inv);
    let residual = theta_direct.sub(&theta_conjugated);
    Ok(GaugeResult { omega: omega_prime, theta_direct, theta_conjugated, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Scalar;
    use crate::su2::Su2Context;

    #[test]
    fn identity_gauge_is_trivial() {
        let s = Su2Context::new();
        let r = gauge_transform(s.ctx(), &s.omega_matrix(), &Mat2::identity()).unwrap();
        assert_eq!(r.omega, s.omega_matrix());
        assert!(r.residual.is_zero());
    }

    #[test]
    fn shear_and_scaling_are_covariant() {
        let s = Su2Context::with_functions(&["f", "g"]);
        let f = Scalar::named("f");
        let g = Scalar::named("g");
        let shear = Mat2([[Scalar::one(), f], [Scalar::zero(), Scalar::one()]]);
        let scale = Mat2([[g.clone(), Scalar::zero()], [Scalar::zero(), g.inv().unwrap()]]);
        for q in [shear, scale] {
            let r = gauge_transform(s.ctx(), &s.omega_matrix(), &q).unwrap();
            assert!(r.residual.is_zero(), "{}", r.residual);
            assert!(!r.theta_direct.is_zero());
        }
    }

    #[test]
    fn rejects_non_unimodular() {
        let s = Su2Context::new();
        let q = Mat2([[Scalar::int(2), Scalar::zero()], [Scalar::zero(), Scalar::one()]]);
        assert!(matches!(gauge_transform(s.ctx(), &s.omega_matrix(), &q), Err(Su2Error::NotUnimodular(_))));
    }
}
