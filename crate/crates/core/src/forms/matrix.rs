use std::fmt;
use std::sync::Arc;

use crate::coeff::Scalar;

use super::context::DerivationContext;
use super::form::{Basis, Form};
use super::FormError;

/// Totally antisymmetric symbol on `{0, 1, 2}`.
pub const fn levi_civita(l: usize, m: usize, n: usize) -> i64 {
    match (l, m, n) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

/// A 2×2 matrix of scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2(pub [[Scalar; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        Mat2([[Scalar::one(), Scalar::zero()], [Scalar::zero(), Scalar::one()]])
    }

    pub fn det(&self) -> Scalar {
        let m = &self.0;
        &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0])
    }

    /// Inverse of a unimodular matrix: the adjugate.
    pub fn adjugate(&self) -> Mat2 {
        let m = &self.0;
        Mat2([[m[1][1].clone(), -&m[0][1]], [-&m[1][0], m[0][0].clone()]])
    }
}

/// A 2×2 matrix of forms of one common degree.
#[derive(Clone, PartialEq, Eq)]
pub struct MatrixForm {
    entries: [[Form; 2]; 2],
}

impl MatrixForm {
    pub fn new(entries: [[Form; 2]; 2]) -> Result<Self, FormError> {
        let degs: Vec<u32> = entries.iter().flatten().filter(|f| !f.is_zero()).map(Form::degree).collect();
        if let Some(d) = degs.first() {
            if let Some(bad) = degs.iter().find(|x| *x != d) {
                return Err(FormError::DegreeMismatch { expected: *d, found: *bad });
            }
        }
        Ok(MatrixForm { entries })
    }

    pub fn zero(basis: &Arc<Basis>, degree: u32) -> Self {
        let z = Form::zero(basis, degree);
        MatrixForm { entries: [[z.clone(), z.clone()], [z.clone(), z]] }
    }

    /// `sum_l f_l sigma_l` for the three Pauli matrices.
    pub fn pauli_compose(components: &[Form; 3]) -> Self {
        let [a, b, c] = components;
        let ib = b.scale(&Scalar::i());
        MatrixForm {
            entries: [[c.clone(), a - &ib], [a + &ib, -c]],
        }
    }

    /// Components along `sigma_1, sigma_2, sigma_3` of a traceless matrix.
    pub fn pauli_decompose(&self) -> Result<[Form; 3], FormError> {
        if !self.trace().is_zero() {
            return Err(FormError::NotTraceless(self.trace().to_string()));
        }
        let e = &self.entries;
        let half = Scalar::ratio(1, 2);
        let first = (&e[0][1] + &e[1][0]).scale(&half);
        // 1/(2i) = -i/2
        let second = (&e[1][0] - &e[0][1]).scale(&(&Scalar::i() * &Scalar::ratio(-1, 2)));
        Ok([first, second, e[0][0].clone()])
    }

    pub fn entry(&self, i: usize, j: usize) -> &Form {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[[Form; 2]; 2] {
        &self.entries
    }

    pub fn trace(&self) -> Form {
        &self.entries[0][0] + &self.entries[1][1]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Form::is_zero)
    }

    fn map(&self, f: impl Fn(&Form) -> Form) -> MatrixForm {
        let e = &self.entries;
        MatrixForm { entries: [[f(&e[0][0]), f(&e[0][1])], [f(&e[1][0]), f(&e[1][1])]] }
    }

    fn zip(&self, other: &MatrixForm, f: impl Fn(&Form, &Form) -> Form) -> MatrixForm {
        let (a, b) = (&self.entries, &other.entries);
        MatrixForm {
            entries: [
                [f(&a[0][0], &b[0][0]), f(&a[0][1], &b[0][1])],
                [f(&a[1][0], &b[1][0]), f(&a[1][1], &b[1][1])],
            ],
        }
    }

    pub fn add(&self, other: &MatrixForm) -> MatrixForm {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &MatrixForm) -> MatrixForm {
        self.zip(other, |a, b| a - b)
    }

    /// Matrix product with entries multiplied by the wedge product.
    pub fn wedge(&self, other: &MatrixForm) -> MatrixForm {
        let (a, b) = (&self.entries, &other.entries);
        let entry = |i: usize, j: usize| &a[i][0].wedge(&b[0][j]) + &a[i][1].wedge(&b[1][j]);
        MatrixForm { entries: [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]] }
    }

    pub fn d(&self, ctx: &DerivationContext) -> MatrixForm {
        self.map(|f| ctx.d(f))
    }

    /// `q * self` for a scalar matrix `q`.
    pub fn left_mul(&self, q: &Mat2) -> MatrixForm {
        let (a, m) = (&self.entries, &q.0);
        let entry = |i: usize, j: usize| &a[0][j].scale(&m[i][0]) + &a[1][j].scale(&m[i][1]);
        MatrixForm { entries: [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]] }
    }

    /// `self * q` for a scalar matrix `q`.
    pub fn right_mul(&self, q: &Mat2) -> MatrixForm {
        let (a, m) = (&self.entries, &q.0);
        let entry = |i: usize, j: usize| &a[i][0].scale(&m[0][j]) + &a[i][1].scale(&m[1][j]);
        MatrixForm { entries: [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]] }
    }

    /// Entrywise differential of a scalar matrix.
    pub fn d_of_scalars(q: &Mat2, ctx: &DerivationContext) -> MatrixForm {
        let m = &q.0;
        MatrixForm {
            entries: [
                [ctx.d_scalar(&m[0][0]), ctx.d_scalar(&m[0][1])],
                [ctx.d_scalar(&m[1][0]), ctx.d_scalar(&m[1][1])],
            ],
        }
    }
}

impl fmt::Display for MatrixForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.entries;
        write!(f, "[[{}, {}], [{}, {}]]", e[0][0], e[0][1], e[1][0], e[1][1])
    }
}

impl fmt::Debug for MatrixForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::DerivationContext;

    fn three_forms() -> (DerivationContext, [Form; 3]) {
        let ctx = DerivationContext::coordinates(&["a", "b", "c"]);
        let w = [ctx.gen("da"), ctx.gen("db"), ctx.gen("dc")];
        (ctx, w)
    }

    #[test]
    fn decompose_inverts_compose() {
        let (_, w) = three_forms();
        let m = MatrixForm::pauli_compose(&w);
        assert_eq!(m.pauli_decompose().unwrap(), w);
    }

    #[test]
    fn compose_layout() {
        let (_, w) = three_forms();
        let m = MatrixForm::pauli_compose(&w);
        let i = Scalar::i();
        assert_eq!(m.entry(0, 0), &w[2]);
        assert_eq!(m.entry(0, 1), &(&w[0] - &w[1].scale(&i)));
        assert_eq!(m.entry(1, 0), &(&w[0] + &w[1].scale(&i)));
    }

    #[test]
    fn zero_matrix_decomposes_to_zero() {
        let (ctx, _) = three_forms();
        let z = MatrixForm::zero(ctx.basis(), 1);
        assert!(z.pauli_decompose().unwrap().iter().all(Form::is_zero));
    }

    #[test]
    fn non_traceless_is_rejected() {
        let (ctx, w) = three_forms();
        let z = ctx.zero(1);
        let m = MatrixForm::new([[w[0].clone(), z.clone()], [z, w[0].clone()]]).unwrap();
        assert!(matches!(m.pauli_decompose(), Err(FormError::NotTraceless(_))));
    }

    #[test]
    fn omega_wedge_omega_matches_structure_constants() {
        // Omega^Omega = i eps_{mnl} w_m^w_n sigma_l
        let (_, w) = three_forms();
        let omega = MatrixForm::pauli_compose(&w);
        let lhs = omega.wedge(&omega);
        let comps: [Form; 3] = std::array::from_fn(|l| {
            let mut acc = w[0].wedge(&w[0]);
            for m in 0..3 {
                for n in 0..3 {
                    let e = levi_civita(m, n, l);
                    if e != 0 {
                        acc = &acc + &w[m].wedge(&w[n]).scale(&(&Scalar::i() * &Scalar::int(e)));
                    }
                }
            }
            acc
        });
        assert_eq!(lhs, MatrixForm::pauli_compose(&comps));
    }

    #[test]
    fn unimodular_inverse() {
        let f = Scalar::named("f");
        let q = Mat2([[Scalar::one(), f], [Scalar::zero(), Scalar::one()]]);
        assert!(q.det().is_one());
        let inv = q.adjugate();
        let one = &(&q.0[0][0] * &inv.0[0][1]) + &(&q.0[0][1] * &inv.0[1][1]);
        assert!(one.is_zero());
    }
}
