use std::collections::BTreeMap;
use std::fmt;

use super::scalar::Scalar;
use super::symbol::Symbol;
use super::CoeffError;

/// A finite Laurent polynomial in the spectral parameter with scalar
/// coefficients that do not involve the parameter.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentInEta {
    coeffs: BTreeMap<i32, Scalar>,
}

impl LaurentInEta {
    pub fn zero() -> Self {
        LaurentInEta::default()
    }

    pub fn constant(c: Scalar) -> Self {
        LaurentInEta::monomial(0, c)
    }

    pub fn monomial(power: i32, c: Scalar) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(power, c);
        }
        LaurentInEta { coeffs }
    }

    pub fn from_coeffs(it: impl IntoIterator<Item = (i32, Scalar)>) -> Self {
        let mut out = LaurentInEta::zero();
        for (k, c) in it {
            out.add_at(k, c);
        }
        out
    }

    /// Split a scalar into powers of `eta`. The denominator may only involve
    /// `eta` through a single power.
    pub fn from_scalar(e: &Scalar, eta: &Symbol) -> Result<Self, CoeffError> {
        let den_parts = e.denominator().to_univariate(eta);
        let (shift, den) = match den_parts.len() {
            1 => {
                let (k, d) = den_parts.into_iter().next().expect("one part");
                (k as i32, d)
            }
            _ => return Err(CoeffError::NotLaurent(e.to_string())),
        };
        let den = Scalar::from_poly(den);
        let mut out = LaurentInEta::zero();
        for (k, c) in e.numerator().to_univariate(eta) {
            out.add_at(k as i32 - shift, Scalar::from_poly(c).checked_div(&den)?);
        }
        Ok(out)
    }

    pub fn to_scalar(&self, eta: &Symbol) -> Scalar {
        let eta = Scalar::symbol(eta.clone());
        self.coeffs.iter().fold(Scalar::zero(), |acc, (k, c)| {
            &acc + &(c * &eta.pow(*k as i64).expect("eta is nonzero"))
        })
    }

    fn add_at(&mut self, k: i32, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let sum = match self.coeffs.remove(&k) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(k, sum);
        }
    }

    pub fn coeff(&self, k: i32) -> Scalar {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Scalar)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_power(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn min_power(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_at(*k, c.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = LaurentInEta::zero();
        for (a, ca) in &self.coeffs {
            for (b, cb) in &rhs.coeffs {
                out.add_at(a + b, ca * cb);
            }
        }
        out
    }

    pub fn map(&self, mut f: impl FnMut(&Scalar) -> Scalar) -> Self {
        LaurentInEta::from_coeffs(self.coeffs.iter().map(|(k, c)| (*k, f(c))))
    }

    pub fn try_map<E>(&self, mut f: impl FnMut(&Scalar) -> Result<Scalar, E>) -> Result<Self, E> {
        let mut out = LaurentInEta::zero();
        for (k, c) in &self.coeffs {
            out.add_at(*k, f(c)?);
        }
        Ok(out)
    }
}

impl fmt::Debug for LaurentInEta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.coeffs.iter()).finish()
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_and_rebuild() {
        let eta = Symbol::named("eta");
        let e_eta = Scalar::symbol(eta.clone());
        let q = Scalar::named("q");
        let e = &(&e_eta.pow(2).unwrap() * &q) + &q.checked_div(&e_eta).unwrap();
        let l = LaurentInEta::from_scalar(&e, &eta).unwrap();
        assert_eq!(l.coeff(2), q);
        assert_eq!(l.coeff(-1), q);
        assert_eq!(l.coeff(0), Scalar::zero());
        assert_eq!(l.to_scalar(&eta), e);
    }

    #[test]
    fn non_laurent_is_rejected() {
        let eta = Symbol::named("eta");
        let e = Scalar::one().checked_div(&(&Scalar::symbol(eta.clone()) + &Scalar::one())).unwrap();
        assert!(LaurentInEta::from_scalar(&e, &eta).is_err());
    }

    #[test]
    fn product_matches_dense() {
        let eta = Symbol::named("eta");
        let a = LaurentInEta::from_coeffs([(1, Scalar::named("a")), (-1, Scalar::named("b"))]);
        let b = LaurentInEta::from_coeffs([(2, Scalar::named("c")), (0, Scalar::one())]);
        let dense = &a.to_scalar(&eta) * &b.to_scalar(&eta);
        assert_eq!(a.mul(&b).to_scalar(&eta), dense);
    }
}
