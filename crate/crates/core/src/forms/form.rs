use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::coeff::{CoeffError, Scalar};

pub type GenId = u16;

/// Names and degrees of the graded generators, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Basis {
    names: Vec<String>,
    degrees: Vec<u32>,
}

impl Basis {
    pub fn builder() -> BasisBuilder {
        BasisBuilder::default()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, g: GenId) -> &str {
        &self.names[g as usize]
    }

    pub fn degree(&self, g: GenId) -> u32 {
        self.degrees[g as usize]
    }

    pub fn id(&self, name: &str) -> Option<GenId> {
        self.names.iter().position(|n| n == name).map(|k| k as GenId)
    }

    pub fn ids(&self) -> impl Iterator<Item = GenId> {
        (0..self.names.len()).map(|k| k as GenId)
    }

    /// All wedge monomials of total degree `degree`, in canonical order.
    pub fn monomials_of_degree(&self, degree: u32) -> Vec<Vec<GenId>> {
        fn go(b: &Basis, start: usize, left: u32, cur: &mut Vec<GenId>, out: &mut Vec<Vec<GenId>>) {
            if left == 0 {
                out.push(cur.clone());
                return;
            }
            for g in start..b.len() {
                let deg = b.degrees[g];
                if deg == 0 || deg > left {
                    continue;
                }
                cur.push(g as GenId);
                // odd generators square to zero, even ones may repeat
                let next = if deg % 2 == 1 { g + 1 } else { g };
                go(b, next, left - deg, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(self, 0, degree, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    /// Sort a word of generators into canonical order, returning the sign
    /// picked up by graded commutation, or `None` if the word vanishes.
    pub fn canonicalize(&self, word: &mut [GenId]) -> Option<bool> {
        let mut negative = false;
        for k in 1..word.len() {
            let mut j = k;
            while j > 0 && word[j - 1] > word[j] {
                if self.degree(word[j - 1]) % 2 == 1 && self.degree(word[j]) % 2 == 1 {
                    negative = !negative;
                }
                word.swap(j - 1, j);
                j -= 1;
            }
        }
        for w in word.windows(2) {
            if w[0] == w[1] && self.degree(w[0]) % 2 == 1 {
                return None;
            }
        }
        Some(negative)
    }
}

#[derive(Debug, Default)]
pub struct BasisBuilder {
    basis: Basis,
}

impl BasisBuilder {
    /// Declare a generator; redeclaring a name returns the existing id.
    pub fn generator(&mut self, name: &str, degree: u32) -> GenId {
        assert!(degree >= 1, "degree-0 objects are scalars, not generators");
        if let Some(id) = self.basis.id(name) {
            assert_eq!(self.basis.degree(id), degree, "generator `{name}` redeclared with another degree");
            return id;
        }
        self.basis.names.push(name.to_string());
        self.basis.degrees.push(degree);
        (self.basis.names.len() - 1) as GenId
    }

    pub fn build(self) -> Arc<Basis> {
        Arc::new(self.basis)
    }
}

/// A homogeneous exterior form: scalar coefficients on canonical wedge
/// monomials of the basis generators.
#[derive(Clone)]
pub struct Form {
    basis: Arc<Basis>,
    degree: u32,
    terms: BTreeMap<Vec<GenId>, Scalar>,
}

impl Form {
    pub fn zero(basis: &Arc<Basis>, degree: u32) -> Self {
        Form { basis: basis.clone(), degree, terms: BTreeMap::new() }
    }

    pub fn scalar(basis: &Arc<Basis>, s: Scalar) -> Self {
        Form::monomial(basis, Vec::new(), s)
    }

    pub fn generator(basis: &Arc<Basis>, g: GenId) -> Self {
        Form::monomial(basis, vec![g], Scalar::one())
    }

    /// `c * g1 ^ g2 ^ ...` for an arbitrary (possibly unsorted) word.
    pub fn monomial(basis: &Arc<Basis>, mut word: Vec<GenId>, c: Scalar) -> Self {
        let degree = word.iter().map(|g| basis.degree(*g)).sum();
        let mut out = Form::zero(basis, degree);
        match basis.canonicalize(&mut word) {
            Some(neg) if !c.is_zero() => {
                out.terms.insert(word, if neg { -c } else { c });
            }
            _ => {}
        }
        out
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[GenId], &Scalar)> {
        self.terms.iter().map(|(m, c)| (m.as_slice(), c))
    }

    pub fn coeff(&self, mono: &[GenId]) -> Scalar {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    /// The coefficient of a degree-0 form.
    pub fn as_scalar(&self) -> Option<Scalar> {
        (self.degree == 0).then(|| self.coeff(&[]))
    }

    fn same_basis(&self, other: &Form) -> bool {
        Arc::ptr_eq(&self.basis, &other.basis) || self.basis == other.basis
    }

    fn add_term(&mut self, mono: Vec<GenId>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&mono) {
            Some(old) => {
                let sum = &old + &c;
                if !sum.is_zero() {
                    self.terms.insert(mono, sum);
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    /// Sum of two forms; zero forms adopt the other operand's degree.
    pub fn try_add(&self, other: &Form) -> Option<Form> {
        assert!(self.same_basis(other), "forms over different bases");
        if other.is_zero() {
            return Some(self.clone());
        }
        if self.is_zero() {
            return Some(other.clone());
        }
        if self.degree != other.degree {
            return None;
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Some(out)
    }

    pub fn scale(&self, s: &Scalar) -> Form {
        let mut out = Form::zero(&self.basis, self.degree);
        if s.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    pub fn wedge(&self, other: &Form) -> Form {
        assert!(self.same_basis(other), "forms over different bases");
        let mut out = Form::zero(&self.basis, self.degree + other.degree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut word = Vec::with_capacity(ma.len() + mb.len());
                word.extend_from_slice(ma);
                word.extend_from_slice(mb);
                if let Some(neg) = self.basis.canonicalize(&mut word) {
                    let c = ca * cb;
                    out.add_term(word, if neg { -c } else { c });
                }
            }
        }
        out
    }

    pub fn try_map_coeffs<E>(&self, mut f: impl FnMut(&Scalar) -> Result<Scalar, E>) -> Result<Form, E> {
        let mut out = Form::zero(&self.basis, self.degree);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&Scalar) -> Scalar) -> Form {
        self.try_map_coeffs(|c| Ok::<_, CoeffError>(f(c))).expect("infallible")
    }
}

impl PartialEq for Form {
    fn eq(&self, other: &Self) -> bool {
        self.same_basis(other)
            && self.terms == other.terms
            && (self.degree == other.degree || self.terms.is_empty())
    }
}

impl Eq for Form {}

impl Add for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        self.try_add(rhs)
            .unwrap_or_else(|| panic!("adding forms of degree {} and {}", self.degree, rhs.degree))
    }
}

impl Sub for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        self + &(-rhs)
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        self.scale(&Scalar::int(-1))
    }
}

impl Mul<&Scalar> for &Form {
    type Output = Form;
    fn mul(self, rhs: &Scalar) -> Form {
        self.scale(rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Form {
            type Output = Form;
            fn $m(self, rhs: Form) -> Form {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Form> for Form {
            type Output = Form;
            fn $m(self, rhs: &Form) -> Form {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);

impl Neg for Form {
    type Output = Form;
    fn neg(self) -> Form {
        -&self
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (mono, c)) in self.terms.iter().enumerate() {
            let word = mono.iter().map(|g| self.basis.name(*g)).collect::<Vec<_>>().join("^");
            let cs = c.to_string();
            let (neg, mag) = if c.needs_parens_as_factor() {
                (false, format!("({cs})"))
            } else if let Some(rest) = cs.strip_prefix('-') {
                (true, rest.to_string())
            } else {
                (false, cs)
            };
            let body = if word.is_empty() {
                mag
            } else if mag == "1" {
                word
            } else {
                format!("{mag}*{word}")
            };
            match (k, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[{}]({})", self.degree, self)
    }
}
