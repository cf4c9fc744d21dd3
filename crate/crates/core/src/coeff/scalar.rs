use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{ToPrimitive, Zero};

use super::gauss::GaussRat;
use super::poly::{Monomial, Poly};
use super::symbol::{Symbol, SymbolKind};
use super::CoeffError;

/// An exact scalar: a reduced quotient of polynomials over the Gaussian
/// rationals.
///
/// Values are canonical at all times: numerator and denominator are coprime
/// and the denominator's leading coefficient is 1. Structural equality is
/// therefore mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Scalar::constant(GaussRat::one())
    }

    pub fn i() -> Self {
        Scalar::constant(GaussRat::i())
    }

    pub fn int(n: i64) -> Self {
        Scalar::constant(GaussRat::from_int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::constant(GaussRat::from_ratio(n, d))
    }

    pub fn constant(c: GaussRat) -> Self {
        Scalar { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn symbol(s: Symbol) -> Self {
        Scalar { num: Poly::var(s), den: Poly::one() }
    }

    pub fn named(name: &str) -> Self {
        Scalar::symbol(Symbol::named(name))
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar { num: p, den: Poly::one() }
    }

    /// Reduce `num / den` to canonical form.
    pub fn from_parts(num: Poly, den: Poly) -> Result<Self, CoeffError> {
        if den.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Scalar::zero());
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        Ok(Scalar::monic_den(num, den))
    }

    fn monic_den(num: Poly, den: Poly) -> Self {
        let lc = den.leading().expect("nonzero denominator").1.clone();
        if lc.is_one() {
            Scalar { num, den }
        } else {
            let inv = lc.inv().expect("nonzero");
            Scalar { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    /// Canonical form. Scalars are kept canonical by every constructor, so
    /// this is the identity on values.
    pub fn normalize(&self) -> Scalar {
        self.clone()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<GaussRat> {
        if self.num.is_zero() {
            return Some(GaussRat::zero());
        }
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n * &d.inv().expect("nonzero"))
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut s = self.num.symbols();
        s.extend(self.den.symbols());
        s
    }

    pub fn contains_symbol(&self, s: &Symbol) -> bool {
        self.num.contains_symbol(s) || self.den.contains_symbol(s)
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, CoeffError> {
        if rhs.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        let inv = Scalar { num: rhs.den.clone(), den: rhs.num.clone() };
        let inv = Scalar::monic_den(inv.num, inv.den);
        Ok(self * &inv)
    }

    pub fn inv(&self) -> Result<Scalar, CoeffError> {
        Scalar::one().checked_div(self)
    }

    pub fn pow(&self, e: i64) -> Result<Scalar, CoeffError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs() as u32;
        if e == 0 {
            return Ok(Scalar::one());
        }
        Ok(Scalar { num: base.num.pow(e), den: base.den.pow(e) })
    }

    pub fn scale(&self, c: &GaussRat) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Partial derivative with respect to `s`, treating every other symbol
    /// (including exponential atoms) as independent.
    pub fn partial(&self, s: &Symbol) -> Scalar {
        if !self.contains_symbol(s) {
            return Scalar::zero();
        }
        let dn = self.num.partial(s);
        if self.den.is_one() {
            return Scalar::from_poly(dn);
        }
        let dd = self.den.partial(s);
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Scalar::from_parts(num, self.den.pow(2)).expect("nonzero denominator")
    }

    /// Apply the derivation determined by its action on symbols:
    /// `D(e) = sum_s de/ds * delta(s)`. Exponential atoms follow the chain
    /// rule `D(exp(s)) = exp(s) * D(s)`.
    pub fn derivation<F>(&self, mut delta: F) -> Scalar
    where
        F: FnMut(&Symbol) -> Scalar,
    {
        let mut out = Scalar::zero();
        for s in self.symbols() {
            let ds = match s.exp_arg() {
                Some(arg) => &Scalar::symbol(s.clone()) * &delta(arg),
                None => delta(&s),
            };
            if ds.is_zero() {
                continue;
            }
            out = &out + &(&self.partial(&s) * &ds);
        }
        out
    }

    /// Simultaneous substitution of symbols. Exponential atoms whose argument
    /// is rebound are rebuilt with [`Scalar::exp`].
    pub fn substitute(&self, bindings: &BTreeMap<Symbol, Scalar>) -> Result<Scalar, CoeffError> {
        check_acyclic(bindings)?;
        self.substitute_unchecked(bindings)
    }

    /// Simultaneous renaming of symbols; unlike [`Scalar::substitute`] the map
    /// may permute symbols among themselves.
    pub fn rename(&self, perm: &BTreeMap<Symbol, Symbol>) -> Scalar {
        let bindings = perm.iter().map(|(a, b)| (a.clone(), Scalar::symbol(b.clone()))).collect();
        self.substitute_unchecked(&bindings).expect("renaming preserves nonzero denominators")
    }

    pub(crate) fn substitute_unchecked(&self, bindings: &BTreeMap<Symbol, Scalar>) -> Result<Scalar, CoeffError> {
        let syms = self.symbols();
        let touched = syms.iter().any(|s| {
            bindings.contains_key(s) || s.exp_arg().is_some_and(|a| bindings.contains_key(a))
        });
        if !touched {
            return Ok(self.clone());
        }
        let mut images: BTreeMap<Symbol, Scalar> = BTreeMap::new();
        for s in &syms {
            let img = if let Some(b) = bindings.get(s) {
                b.clone()
            } else if let Some(b) = s.exp_arg().and_then(|a| bindings.get(a)) {
                Scalar::exp(b)?
            } else {
                continue;
            };
            images.insert(s.clone(), img);
        }
        let num = eval_poly(&self.num, &images)?;
        let den = eval_poly(&self.den, &images)?;
        if den.is_zero() {
            return Err(CoeffError::ZeroDenominator);
        }
        num.checked_div(&den)
    }

    /// `exp(arg)` for an argument that is an integer combination of symbols,
    /// expressed through exponential atoms.
    pub fn exp(arg: &Scalar) -> Result<Scalar, CoeffError> {
        let bad = || CoeffError::UnsupportedExponential(arg.to_string());
        if !arg.is_polynomial() {
            return Err(bad());
        }
        let mut out = Scalar::one();
        for (m, c) in arg.num.terms() {
            let k = c.as_integer().ok_or_else(bad)?;
            let k = k.to_i64().ok_or_else(bad)?;
            if m.is_one() {
                return Err(bad());
            }
            let [(s, 1)] = m.powers() else { return Err(bad()) };
            if !matches!(s.kind(), SymbolKind::Named(_) | SymbolKind::Jet { .. }) {
                return Err(bad());
            }
            out = &out * &Scalar::symbol(Symbol::exp_of(s)).pow(k)?;
        }
        Ok(out)
    }

    /// True when the printed form needs parentheses as a factor.
    pub fn needs_parens_as_factor(&self) -> bool {
        if self.num.num_terms() > 1 {
            return true;
        }
        match self.num.as_monomial() {
            Some((_, c)) => !c.re().is_zero() && !c.im().is_zero(),
            None => false,
        }
    }
}

fn check_acyclic(bindings: &BTreeMap<Symbol, Scalar>) -> Result<(), CoeffError> {
    // depth-first search over the "image mentions bound symbol" relation
    fn visit(
        s: &Symbol,
        bindings: &BTreeMap<Symbol, Scalar>,
        state: &mut BTreeMap<Symbol, u8>,
    ) -> Result<(), CoeffError> {
        match state.get(s) {
            Some(1) => return Err(CoeffError::CyclicSubstitution(s.to_string())),
            Some(_) => return Ok(()),
            None => {}
        }
        state.insert(s.clone(), 1);
        if let Some(img) = bindings.get(s) {
            for t in img.symbols() {
                let t = t.exp_arg().cloned().unwrap_or(t);
                if bindings.contains_key(&t) {
                    visit(&t, bindings, state)?;
                }
            }
        }
        state.insert(s.clone(), 2);
        Ok(())
    }
    let mut state = BTreeMap::new();
    for s in bindings.keys() {
        visit(s, bindings, &mut state)?;
    }
    Ok(())
}

fn eval_poly(p: &Poly, images: &BTreeMap<Symbol, Scalar>) -> Result<Scalar, CoeffError> {
    let mut kept = Poly::zero();
    let mut out = Scalar::zero();
    for (m, c) in p.terms() {
        let mut rest = Vec::new();
        let mut factor = Scalar::constant(c.clone());
        for (s, e) in m.powers() {
            match images.get(s) {
                Some(img) => factor = &factor * &img.pow(*e as i64)?,
                None => rest.push((s.clone(), *e)),
            }
        }
        if factor.is_polynomial() && factor.num.as_constant().is_some() {
            kept = &kept + &Poly::term(factor.num.as_constant().unwrap().clone(), Monomial::from_powers(rest));
        } else {
            let mono = Scalar::from_poly(Poly::term(GaussRat::one(), Monomial::from_powers(rest)));
            out = &out + &(&factor * &mono);
        }
    }
    Ok(&out + &Scalar::from_poly(kept))
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let num = &self.num + &rhs.num;
            if self.den.is_one() {
                return Scalar { num, den: Poly::one() };
            }
            return Scalar::from_parts(num, self.den.clone()).expect("nonzero");
        }
        // Henrici: with g = gcd(b, d), only g can share factors with the sum.
        let g = self.den.gcd(&rhs.den);
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &d1) + &(&rhs.num * &b1);
        if num.is_zero() {
            return Scalar::zero();
        }
        let h = num.gcd(&g);
        let num = num.div_exact(&h).expect("gcd divides");
        let den = &(&b1 * &d1) * &g.div_exact(&h).expect("gcd divides");
        Scalar::monic_den(num, den)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar { num: &self.num * &rhs.num, den: Poly::one() };
        }
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let a = self.num.div_exact(&g1).expect("gcd divides");
        let d = rhs.den.div_exact(&g1).expect("gcd divides");
        let c = rhs.num.div_exact(&g2).expect("gcd divides");
        let b = self.den.div_exact(&g2).expect("gcd divides");
        Scalar::monic_den(&a * &c, &b * &d)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<Symbol> for Scalar {
    fn from(s: Symbol) -> Self {
        Scalar::symbol(s)
    }
}

fn fmt_monomial(m: &Monomial) -> String {
    m.powers()
        .iter()
        .map(|(s, e)| if *e == 1 { s.to_string() } else { format!("{s}**{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

/// Print in descending monomial order using the input syntax.
pub(crate) fn fmt_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative() && (c.re().is_zero() || c.im().is_zero());
        let mag = if neg { -c } else { c.clone() };
        let body = if m.is_one() {
            mag.to_string()
        } else if mag.is_one() {
            fmt_monomial(m)
        } else {
            format!("{}*{}", mag, fmt_monomial(m))
        };
        match (k, neg) {
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (0, false) => out.push_str(&body),
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
        }
    }
    out
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = fmt_poly(&self.num);
        if self.den.is_one() {
            return f.write_str(&num);
        }
        let num = if self.num.num_terms() > 1 || num.starts_with('(') {
            format!("({num})")
        } else {
            num
        };
        let den_simple = match self.den.as_monomial() {
            Some((m, c)) => c.is_one() && m.powers().len() == 1,
            None => false,
        };
        let den = fmt_poly(&self.den);
        if den_simple {
            write!(f, "{num}/{den}")
        } else {
            write!(f, "{num}/({den})")
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: &str) -> Scalar {
        Scalar::named(n)
    }

    #[test]
    fn i_squared_plus_one_is_zero() {
        let i = Scalar::i();
        assert!((&(&i * &i) + &Scalar::one()).is_zero());
    }

    #[test]
    fn gcd_cancellation() {
        let e = (&s("y1") * &s("y2")).checked_div(&s("y1")).unwrap();
        assert_eq!(e, s("y2"));
    }

    #[test]
    fn inverse_exponentials_cancel() {
        let y5 = s("y5");
        let a = Scalar::exp(&y5).unwrap();
        let b = Scalar::exp(&-&y5).unwrap();
        assert!((&a * &b).is_one());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let z = &s("x") - &s("x");
        assert_eq!(s("y").checked_div(&z), Err(CoeffError::DivisionByZero));
    }

    #[test]
    fn substitute_examples() {
        let y3 = Symbol::named("y3");
        let e = Scalar::symbol(y3.clone()).pow(2).unwrap();
        let b = BTreeMap::from([(y3, s("y2").checked_div(&s("y1")).unwrap())]);
        let expect = s("y2").pow(2).unwrap().checked_div(&s("y1").pow(2).unwrap()).unwrap();
        assert_eq!(e.substitute(&b).unwrap(), expect);

        let qr = &s("q") * &s("r");
        let b = BTreeMap::from([(Symbol::named("q"), Scalar::zero())]);
        assert!(qr.substitute(&b).unwrap().is_zero());
    }

    #[test]
    fn substitute_zero_denominator() {
        let e = Scalar::one().checked_div(&s("x")).unwrap();
        let b = BTreeMap::from([(Symbol::named("x"), Scalar::zero())]);
        assert_eq!(e.substitute(&b), Err(CoeffError::ZeroDenominator));
    }

    #[test]
    fn substitute_rejects_cycles() {
        let b = BTreeMap::from([
            (Symbol::named("a"), s("b")),
            (Symbol::named("b"), &s("a") + &Scalar::one()),
        ]);
        assert!(matches!(s("a").substitute(&b), Err(CoeffError::CyclicSubstitution(_))));
    }

    #[test]
    fn exp_substitution_rebuilds_atoms() {
        let y = Symbol::named("y");
        let e = Scalar::exp(&s("y")).unwrap();
        let b = BTreeMap::from([(y, &s("a") - &s("b"))]);
        let expect = Scalar::exp(&s("a")).unwrap().checked_div(&Scalar::exp(&s("b")).unwrap()).unwrap();
        assert_eq!(e.substitute(&b).unwrap(), expect);
    }

    #[test]
    fn derivation_chain_rule_on_exp() {
        let e = Scalar::exp(&s("y")).unwrap();
        let d = e.derivation(|sym| if sym.name() == Some("y") { Scalar::one() } else { Scalar::zero() });
        assert_eq!(d, e);
    }

    #[test]
    fn denominator_is_monic() {
        let e = Scalar::one().checked_div(&Scalar::int(2).mul(&s("x"))).unwrap();
        assert!(e.denominator().leading().unwrap().1.is_one());
        assert_eq!(e.to_string(), "1/2/x");
    }

    #[test]
    fn display() {
        let e = (&s("y2") * &s("y2")).checked_div(&(&s("y1") + &s("y2"))).unwrap();
        assert_eq!(e.to_string(), "y2**2/(y1 + y2)");
        let e = &(&Scalar::i() * &s("a")) - &Scalar::int(3);
        assert_eq!(e.to_string(), "i*a - 3");
    }
}
