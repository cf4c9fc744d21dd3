use crate::coeff::Scalar;
use crate::forms::{DerivationContext, Form};
use crate::jet::{reduce_mod_evolution, EvolutionSystem};

use super::Su2Error;

/// Frame `alpha1 = omega2 + omega3`, `alpha2 = -2 omega1`, connection
/// `omega = omega2 - omega3`, and the curvature `K` defined by
/// `d omega = -K alpha1 ^ alpha2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceData {
    pub alpha1: Form,
    pub alpha2: Form,
    pub omega: Form,
    pub curvature: Scalar,
    /// `d alpha1 - omega ^ alpha2`, `d alpha2 + omega ^ alpha1` and
    /// `d omega + K alpha1 ^ alpha2`.
    pub residuals: [Form; 3],
}

/// Surface data of one-forms on the (x, t) plane. Coefficients are reduced
/// modulo `shell` when given.
pub fn surface_data(
    ctx: &DerivationContext,
    omegas: &[Form; 3],
    shell: Option<&EvolutionSystem>,
) -> Result<SurfaceData, Su2Error> {
    if let Some(bad) = omegas.iter().find(|w| !w.is_zero() && w.degree() != 1) {
        return Err(Su2Error::InvalidSpec(format!("expected one-forms, found degree {}", bad.degree())));
    }
    let reduce = |f: Form| -> Result<Form, Su2Error> {
        match shell {
            Some(sys) => Ok(f.try_map_coeffs(|c| reduce_mod_evolution(c, sys))?),
            None => Ok(f),
        }
    };
    let [w1, w2, w3] = omegas;
    let alpha1 = w2 + w3;
    let alpha2 = w1.scale(&Scalar::int(-2));
    let omega = w2 - w3;
    let area = reduce(alpha1.wedge(&alpha2))?;
    let d_omega = reduce(ctx.d(&omega))?;
    let Some((mono, lead)) = area.terms().next() else {
        return Err(Su2Error::Degenerate);
    };
    let curvature = (-d_omega.coeff(mono)).checked_div(lead)?;
    let gauss = reduce(&d_omega + &area.scale(&curvature))?;
    if !gauss.is_zero() {
        return Err(Su2Error::InvalidSpec(format!("d(omega) is not proportional to alpha1^alpha2: {gauss}")));
    }
    let r1 = reduce(&ctx.d(&alpha1) - &omega.wedge(&alpha2))?;
    let r2 = reduce(&ctx.d(&alpha2) + &omega.wedge(&alpha1))?;
    Ok(SurfaceData { alpha1, alpha2, omega, curvature, residuals: [r1, r2, gauss] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::{dependent, total_derivative, Direction};
    use crate::su2::{extract_pde, kdv_spec, theta_components};

    #[test]
    fn flat_connection_part() {
        let ctx = DerivationContext::jet_plane();
        let (dx, dt) = (ctx.gen("dx"), ctx.gen("dt"));
        let w2 = &dx.scale(&dependent("u")) + &dt;
        let s = surface_data(&ctx, &[dt.clone(), w2.clone(), w2], None).unwrap();
        assert!(s.omega.is_zero());
        assert!(s.curvature.is_zero());
    }

    #[test]
    fn zero_frame_is_degenerate() {
        let ctx = DerivationContext::jet_plane();
        let z = ctx.zero(1);
        assert!(matches!(surface_data(&ctx, &[z.clone(), z.clone(), z], None), Err(Su2Error::Degenerate)));
    }

    #[test]
    fn kdv_curvature_matches_component_formula() {
        let spec = kdv_spec();
        let sys = extract_pde(&spec, &theta_components(&spec)).unwrap().system;
        let ctx = DerivationContext::jet_plane();
        let omegas = spec.omegas(&ctx);
        let s = surface_data(&ctx, &omegas, Some(&sys)).unwrap();

        // K = -[(b2 - b3)_x - (a2 - a3)_t] / [(a2 + a3)(-2 b1) - (b2 + b3)(-2 a1)]
        // for omega_l = a_l dx + b_l dt
        let dx_dt = |f: &Form| {
            let x = f.coeff(&[ctx.basis().id("dx").unwrap()]);
            let t = f.coeff(&[ctx.basis().id("dt").unwrap()]);
            (x, t)
        };
        let [(a1, b1), (a2, b2), (a3, b3)] = [dx_dt(&omegas[0]), dx_dt(&omegas[1]), dx_dt(&omegas[2])];
        let curl = &total_derivative(&(&b2 - &b3), Direction::X) - &total_derivative(&(&a2 - &a3), Direction::T);
        let m2 = Scalar::int(-2);
        let area = &(&(&a2 + &a3) * &(&m2 * &b1)) - &(&(&b2 + &b3) * &(&m2 * &a1));
        let k = (-reduce_mod_evolution(&curl, &sys).unwrap()).checked_div(&area).unwrap();
        assert_eq!(s.curvature, k);
        assert_eq!(s.curvature, Scalar::i());
        assert!(s.residuals[2].is_zero());
    }
}
