//! Multivariate gcd over the Gaussian rationals by recursive primitive
//! pseudo-remainder sequences.

use super::poly::{Monomial, Poly};
use super::symbol::Symbol;

pub(crate) fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }
    if let Some((m, _)) = a.as_monomial() {
        return monomial_gcd(m, b);
    }
    if let Some((m, _)) = b.as_monomial() {
        return monomial_gcd(m, a);
    }
    let sa = a.symbols();
    let sb = b.symbols();
    if let Some(v) = sa.difference(&sb).next() {
        return gcd_with_coefficients(b, a, v);
    }
    if let Some(v) = sb.difference(&sa).next() {
        return gcd_with_coefficients(a, b, v);
    }
    let v = sa.iter().next().expect("non-constant").clone();

    let ca = content(a, &v);
    let cb = content(b, &v);
    let c = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");

    let (mut f, mut g) = if pa.degree_in(&v) >= pb.degree_in(&v) { (pa, pb) } else { (pb, pa) };
    let h = loop {
        if g.is_zero() {
            break primitive_part(&f, &v);
        }
        if g.degree_in(&v) == 0 {
            break Poly::one();
        }
        let r = pseudo_remainder(&f, &g, &v);
        f = g;
        g = if r.is_zero() { r } else { primitive_part(&r, &v) };
    };
    (&c * &h).monic()
}

/// gcd of `p` with every coefficient of `q` viewed as a polynomial in `v`,
/// where `p` does not involve `v`.
fn gcd_with_coefficients(p: &Poly, q: &Poly, v: &Symbol) -> Poly {
    let mut g = p.clone();
    for coeff in q.to_univariate(v).values() {
        g = gcd(&g, coeff);
        if g.is_one() {
            break;
        }
    }
    g.monic()
}

fn monomial_gcd(m: &Monomial, p: &Poly) -> Poly {
    let mut g = m.clone();
    for (k, _) in p.terms() {
        g = g.gcd(k);
        if g.is_one() {
            break;
        }
    }
    Poly::term(super::gauss::GaussRat::one(), g)
}

fn content(p: &Poly, v: &Symbol) -> Poly {
    let mut g = Poly::zero();
    for coeff in p.to_univariate(v).values() {
        g = gcd(&g, coeff);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_part(p: &Poly, v: &Symbol) -> Poly {
    let c = content(p, v);
    p.div_exact(&c).expect("content divides")
}

fn pseudo_remainder(f: &Poly, g: &Poly, v: &Symbol) -> Poly {
    let dg = g.degree_in(v);
    let ug = g.to_univariate(v);
    let lcg = ug.get(&dg).expect("leading coefficient").clone();
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(v) >= dg {
        let dr = r.degree_in(v);
        let lcr = r.to_univariate(v).remove(&dr).expect("leading coefficient");
        let shift = Poly::term(super::gauss::GaussRat::one(), Monomial::from_powers(vec![(v.clone(), dr - dg)]));
        r = &(&lcg * &r) - &(&(&lcr * &shift) * g);
    }
    r
}
