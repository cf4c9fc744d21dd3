//! Conserved densities from the Riccati expansion of the projective
//! pseudopotential.
//!
//! With `y3 = sum_n eta^-n W_n`, the x-part of `xi3 = 0` gives
//! `W_1 = r` and `W_{n,x} + 2 W_{n+1} + q sum_{k=1}^{n-1} W_{n-k} W_k = 0`.
//! The one-form `-beta1 / 2` then yields densities `I_n = q W_n` and currents
//! `J_n`, the `eta^-n` coefficient of `A + B y3`.

use thiserror::Error;

use crate::coeff::{LaurentInEta, Scalar};
use crate::jet::{
    self, is_total_x_derivative, reduce_mod_evolution, Direction, EvolutionSystem, JetError,
    TotalDerivativeCertificate,
};
use crate::su2::AknsSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConservationError {
    #[error("truncation order must be at least 1")]
    ZeroOrder,
    #[error(transparent)]
    Jet(#[from] JetError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensitySequence {
    pub spec: String,
    q: Scalar,
    w: Vec<Scalar>,
}

impl DensitySequence {
    /// `W_n`, `n >= 1`; `W_0 = 0`.
    pub fn w(&self, n: usize) -> Scalar {
        if n == 0 {
            Scalar::zero()
        } else {
            self.w[n - 1].clone()
        }
    }

    pub fn order(&self) -> usize {
        self.w.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Scalar> {
        self.w.iter()
    }

    /// `W_{n,x} + 2 W_{n+1} + q sum_{k=1}^{n-1} W_{n-k} W_k`, for `n < order`.
    pub fn residual(&self, n: usize) -> Scalar {
        assert!(n >= 1 && n < self.order(), "residual index out of range");
        recursion_lhs(&self.q, &self.w[..n], &self.w(n + 1))
    }
}

fn quadratic_sum(q: &Scalar, w: &[Scalar]) -> Scalar {
    // q sum_{k=1}^{n-1} W_{n-k} W_k with n = w.len()
    let n = w.len();
    let sum = (1..n).fold(Scalar::zero(), |acc, k| &acc + &(&w[n - k - 1] * &w[k - 1]));
    q * &sum
}

fn recursion_lhs(q: &Scalar, w: &[Scalar], next: &Scalar) -> Scalar {
    let wn = w.last().expect("nonempty");
    let wx = jet::total_derivative(wn, Direction::X);
    &(&wx + &(&Scalar::int(2) * next)) + &quadratic_sum(q, w)
}

/// `W_n` from the recursion seeded with `W_1 = r`.
pub fn recursion_densities(spec: &AknsSpec, order: usize) -> Result<DensitySequence, ConservationError> {
    seeded(spec, spec.r.clone(), order)
}

/// Coefficients of the formal solution `y3 = sum_n eta^-n W_n` of
/// `(y3)_x - r + 2 eta y3 + q y3^2 = 0`.
///
/// Matching `eta^0` gives `W_1 = r/2`; higher orders follow the same
/// recursion as [`recursion_densities`].
pub fn riccati_densities(spec: &AknsSpec, order: usize) -> Result<DensitySequence, ConservationError> {
    seeded(spec, &spec.r * &Scalar::ratio(1, 2), order)
}

fn seeded(spec: &AknsSpec, first: Scalar, order: usize) -> Result<DensitySequence, ConservationError> {
    if order == 0 {
        return Err(ConservationError::ZeroOrder);
    }
    let mut w = vec![first];
    let neg_half = Scalar::ratio(-1, 2);
    while w.len() < order {
        let wx = jet::total_derivative(w.last().unwrap(), Direction::X);
        let next = &(&wx + &quadratic_sum(&spec.q, &w)) * &neg_half;
        w.push(next);
    }
    Ok(DensitySequence { spec: spec.name.clone(), q: spec.q.clone(), w })
}

/// `(y)_x - r + 2 eta y + q y^2` for the truncated series `y`, keeping the
/// powers `eta^0 .. eta^-(order-1)` that the truncation determines.
pub fn riccati_residual(spec: &AknsSpec, seq: &DensitySequence) -> LaurentInEta {
    let y = riccati_series(seq);
    let yx = y.map(|c| jet::total_derivative(c, Direction::X));
    let two_eta = LaurentInEta::monomial(1, Scalar::int(2));
    let full = yx
        .add(&LaurentInEta::constant(-&spec.r))
        .add(&two_eta.mul(&y))
        .add(&LaurentInEta::constant(spec.q.clone()).mul(&y.mul(&y)));
    let lowest = 1 - seq.order() as i32;
    LaurentInEta::from_coeffs(full.terms().filter(|(k, _)| *k >= lowest).map(|(k, c)| (k, c.clone())))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConservedPair {
    pub n: usize,
    pub density: Scalar,
    pub current: Scalar,
    /// Contributions to `J_n` by power of eta.
    pub trace: Vec<String>,
}

/// Pairs `(I_n, J_n)` for `1 <= n <= order` from the Riccati expansion.
pub fn conserved_pairs(spec: &AknsSpec, order: usize) -> Result<Vec<ConservedPair>, ConservationError> {
    let seq = riccati_densities(spec, order + current_lift(spec))?;
    conserved_pairs_from(spec, &seq, order)
}

/// Extra `W_n` needed beyond `order` to read off `J_order`.
pub fn current_lift(spec: &AknsSpec) -> usize {
    spec.b.max_power().unwrap_or(0).max(0) as usize
}

/// Pairs built from a given sequence, which must reach
/// `order + current_lift(spec)`.
pub fn conserved_pairs_from(
    spec: &AknsSpec,
    seq: &DensitySequence,
    order: usize,
) -> Result<Vec<ConservedPair>, ConservationError> {
    if order == 0 {
        return Err(ConservationError::ZeroOrder);
    }
    assert!(seq.order() >= order + current_lift(spec), "density sequence too short");
    let mut out = Vec::new();
    for n in 1..=order {
        let mut trace = Vec::new();
        let mut current = spec.a.coeff(-(n as i32));
        if !current.is_zero() {
            trace.push(format!("A[eta^-{n}] = {current}"));
        }
        // eta^k * eta^-m W_m contributes to eta^-n when m = n + k
        for (k, bk) in spec.b.terms() {
            let m = n as i64 + k as i64;
            if m < 1 || m as usize > seq.order() {
                continue;
            }
            let term = bk * &seq.w(m as usize);
            trace.push(format!("B[eta^{k}] * W_{m}"));
            current = &current + &term;
        }
        out.push(ConservedPair { n, density: &spec.q * &seq.w(n), current, trace });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConservationCertificate {
    /// `D_t I - D_x J` after eliminating time derivatives.
    pub defect: Scalar,
    pub status: TotalDerivativeCertificate,
    /// Highest jet order in the defect before the Euler test.
    pub peak_order: u32,
    pub trace: Vec<String>,
}

impl ConservationCertificate {
    pub fn certified(&self) -> bool {
        self.status.holds()
    }

    /// Exact flux: the defect vanishes identically.
    pub fn exact(&self) -> bool {
        self.defect.is_zero()
    }

    /// Counterexample to the balance: the variational derivative when the
    /// defect is not a total x-derivative, else the defect itself when it is
    /// nonzero.
    pub fn witness(&self) -> Option<Scalar> {
        match &self.status {
            TotalDerivativeCertificate::Witness { variational_derivative, .. } => Some(variational_derivative.clone()),
            TotalDerivativeCertificate::Exact if !self.defect.is_zero() => Some(self.defect.clone()),
            TotalDerivativeCertificate::Exact => None,
        }
    }
}

/// Certify that `D_t I - D_x J` is a total x-derivative on solutions of `sys`.
pub fn verify_conservation(
    pair: &ConservedPair,
    sys: &EvolutionSystem,
) -> Result<ConservationCertificate, ConservationError> {
    let dt = reduce_mod_evolution(&jet::total_derivative(&pair.density, Direction::T), sys)?;
    let defect = &dt - &jet::total_derivative(&pair.current, Direction::X);
    let peak_order = jet::jet_order(&defect);
    let mut vars: Vec<String> = sys.laws().map(|(v, _)| v.to_string()).collect();
    for s in defect.symbols() {
        if let Some((v, _, _)) = s.as_jet() {
            if !vars.iter().any(|x| x == v) {
                vars.push(v.to_string());
            }
        }
    }
    let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
    let status = is_total_x_derivative(&defect, &refs)?;
    Ok(ConservationCertificate { defect, status, peak_order, trace: pair.trace.clone() })
}

/// Densities of the AKNS data with `r -> lambda r`, `q -> q / lambda`, divided by
/// the unscaled ones. `None` where the unscaled density vanishes.
pub fn scaling_ratios(spec: &AknsSpec, lambda: &Scalar, order: usize) -> Result<Vec<Option<Scalar>>, ConservationError> {
    let mut scaled = spec.clone();
    scaled.r = &spec.r * lambda;
    scaled.q = spec.q.checked_div(lambda).map_err(JetError::from)?;
    let base = conserved_pairs_densities(spec, order)?;
    let moved = conserved_pairs_densities(&scaled, order)?;
    Ok(base
        .iter()
        .zip(&moved)
        .map(|(a, b)| if a.is_zero() { None } else { Some(b.checked_div(a).expect("nonzero")) })
        .collect())
}

fn conserved_pairs_densities(spec: &AknsSpec, order: usize) -> Result<Vec<Scalar>, ConservationError> {
    let seq = recursion_densities(spec, order)?;
    Ok((1..=order).map(|n| &spec.q * &seq.w(n)).collect())
}

/// Truncated `y3 = sum_{n=1}^{order} eta^-n W_n`.
pub fn riccati_series(seq: &DensitySequence) -> LaurentInEta {
    LaurentInEta::from_coeffs(seq.iter().enumerate().map(|(k, w)| (-(k as i32) - 1, w.clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::{dependent, jet};
    use crate::su2::kdv_spec;

    fn generic() -> AknsSpec {
        let z = LaurentInEta::zero;
        AknsSpec::new("generic", dependent("r"), dependent("q"), z(), z(), z())
    }

    #[test]
    fn first_densities() {
        let seq = recursion_densities(&generic(), 3).unwrap();
        let (r, q) = (dependent("r"), dependent("q"));
        assert_eq!(seq.w(1), r);
        assert_eq!(seq.w(2), &jet("r", 1) * &Scalar::ratio(-1, 2));
        let w3 = &(&jet("r", 2) * &Scalar::ratio(1, 4)) - &(&(&q * &(&r * &r)) * &Scalar::ratio(1, 2));
        assert_eq!(seq.w(3), w3);
    }

    #[test]
    fn recursion_substitutes_back_to_zero() {
        let seq = recursion_densities(&generic(), 9).unwrap();
        for n in 1..9 {
            assert!(seq.residual(n).is_zero(), "n = {n}");
        }
    }

    #[test]
    fn zero_order_is_rejected() {
        assert_eq!(recursion_densities(&generic(), 0), Err(ConservationError::ZeroOrder));
    }

    #[test]
    fn no_current_without_eta_tail() {
        let mut spec = generic();
        spec.a = LaurentInEta::constant(dependent("q"));
        for p in conserved_pairs(&spec, 4).unwrap() {
            assert!(p.current.is_zero());
            assert_eq!(p.density, &spec.q * &riccati_densities(&spec, 4).unwrap().w(p.n));
        }
    }

    #[test]
    fn linear_flux_is_exact() {
        let sys = EvolutionSystem::new().with("u", jet("u", 3)).unwrap();
        let pair = ConservedPair { n: 1, density: dependent("u"), current: jet("u", 2), trace: vec![] };
        let c = verify_conservation(&pair, &sys).unwrap();
        assert!(c.certified() && c.exact());
    }

    #[test]
    fn quadratic_flux_by_parts() {
        let sys = EvolutionSystem::new().with("u", jet("u", 3)).unwrap();
        let u = dependent("u");
        let current = &(&Scalar::int(2) * &(&u * &jet("u", 2))) - &(&jet("u", 1) * &jet("u", 1));
        let pair = ConservedPair { n: 2, density: &u * &u, current: current.clone(), trace: vec![] };
        assert!(verify_conservation(&pair, &sys).unwrap().exact());

        // a perturbed current only shifts the defect by a total derivative
        let ux2 = &jet("u", 1) * &jet("u", 1);
        let bad = ConservedPair { current: &current + &ux2, ..pair };
        let c = verify_conservation(&bad, &sys).unwrap();
        assert!(c.certified() && !c.exact());
        assert_eq!(c.witness(), Some(-jet::total_derivative(&ux2, Direction::X)));

        // an undifferentiated u_x^2 in the balance is caught by the Euler test
        match is_total_x_derivative(&(&c.defect + &ux2), &["u"]).unwrap() {
            TotalDerivativeCertificate::Witness { var, variational_derivative } => {
                assert_eq!(var, "u");
                assert_eq!(variational_derivative, &jet("u", 2) * &Scalar::int(-2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn kdv_pairs_are_conserved() {
        let spec = kdv_spec();
        let sys = crate::su2::extract_pde(&spec, &crate::su2::theta_components(&spec)).unwrap().system;
        for p in conserved_pairs(&spec, 5).unwrap() {
            let c = verify_conservation(&p, &sys).unwrap();
            assert!(c.certified(), "n = {}: {:?}", p.n, c.status);
            assert!(c.exact(), "n = {}", p.n);
        }
    }

    #[test]
    fn riccati_seed_solves_the_x_equation() {
        let spec = generic();
        let seq = riccati_densities(&spec, 6).unwrap();
        assert!(riccati_residual(&spec, &seq).is_zero());
        let printed = recursion_densities(&spec, 6).unwrap();
        let res = riccati_residual(&spec, &printed);
        assert_eq!(res.coeff(0), spec.r);
    }

    #[test]
    fn printed_seed_breaks_fifth_kdv_density() {
        let spec = kdv_spec();
        let sys = crate::su2::extract_pde(&spec, &crate::su2::theta_components(&spec)).unwrap().system;
        let seq = recursion_densities(&spec, 5 + current_lift(&spec)).unwrap();
        let pairs = conserved_pairs_from(&spec, &seq, 5).unwrap();
        let c = verify_conservation(&pairs[4], &sys).unwrap();
        let w = &(&jet("q", 1) * &jet("q", 2)) * &Scalar::ratio(9, 2);
        assert_eq!(c.witness(), Some(w));
    }

    #[test]
    fn scaling_leaves_densities_invariant() {
        let ratios = scaling_ratios(&generic(), &Scalar::named("lambda"), 6).unwrap();
        for r in ratios.into_iter().flatten() {
            assert!(r.is_one());
        }
    }
}
