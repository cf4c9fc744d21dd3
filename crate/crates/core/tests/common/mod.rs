//! Random instances shared by the property and acceptance suites.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use prolong::coeff::{GaussRat, Scalar, Symbol};
use prolong::dsl::{BinOp, Expr, ExprKind, Pos};
use prolong::forms::{DerivationContext, Form};
use prolong::jet;

pub const CHART: [&str; 5] = ["x", "t", "u", "p", "q"];

pub fn chart() -> DerivationContext {
    DerivationContext::coordinates(&CHART)
}

fn small_constant<R: Rng>(rng: &mut R) -> GaussRat {
    let re = BigRational::new(rng.gen_range(-4i64..=4).into(), rng.gen_range(1i64..=3).into());
    let im = if rng.gen_bool(0.2) { rng.gen_range(-2i64..=2) } else { 0 };
    GaussRat::new(re, BigRational::from_integer(im.into()))
}

/// Polynomial with up to three terms of degree at most two in `atoms`.
pub fn poly<R: Rng>(rng: &mut R, atoms: &[Scalar]) -> Scalar {
    let mut out = Scalar::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let mut term = Scalar::constant(small_constant(rng));
        for _ in 0..rng.gen_range(0..=2) {
            term = &term * atoms.choose(rng).expect("atoms");
        }
        out = &out + &term;
    }
    out
}

/// Polynomial, sometimes divided by a shifted atom.
pub fn scalar<R: Rng>(rng: &mut R, atoms: &[Scalar]) -> Scalar {
    let p = poly(rng, atoms);
    if rng.gen_bool(0.3) {
        let den = &Scalar::int(rng.gen_range(1..=3)) + atoms.choose(rng).expect("atoms");
        p.checked_div(&den).expect("nonzero")
    } else {
        p
    }
}

pub fn named_atoms(names: &[&str]) -> Vec<Scalar> {
    names.iter().map(|n| Scalar::named(n)).collect()
}

/// Form of the given degree with random coefficients over `atoms`.
pub fn form<R: Rng>(rng: &mut R, ctx: &DerivationContext, degree: u32, atoms: &[Scalar]) -> Form {
    let monos = ctx.basis().monomials_of_degree(degree);
    let mut out = ctx.zero(degree);
    if monos.is_empty() {
        return out;
    }
    for _ in 0..rng.gen_range(1..=3) {
        let m = monos.choose(rng).expect("monomials").clone();
        out = &out + &Form::monomial(ctx.basis(), m, scalar(rng, atoms));
    }
    out
}

/// Jet polynomial in `u` and `v` up to third x-order, with explicit `x`.
/// Polynomial on the jet space; `mixed` adds the t-derivative u_xt.
pub fn jet_poly<R: Rng>(rng: &mut R, mixed: bool) -> Scalar {
    let mut atoms = vec![Scalar::named("x")];
    for v in ["u", "v"] {
        for k in 0..=3 {
            atoms.push(jet::jet(v, k));
        }
    }
    if mixed {
        atoms.push(Scalar::symbol(Symbol::jet("u", 1, 1)));
    }
    poly(rng, &atoms)
}

const NAMES: [&str; 6] = ["a", "b", "c", "u_x", "dx", "omega1"];

/// Random syntax tree; positions are dummies.
pub fn expr<R: Rng>(rng: &mut R, depth: u32) -> Expr {
    let p = Pos::default();
    let leaf = depth == 0 || rng.gen_bool(0.3);
    let kind = if leaf {
        match rng.gen_range(0..3) {
            0 => ExprKind::Int(BigInt::from(rng.gen_range(0u32..20))),
            1 => ExprKind::Imag,
            _ => ExprKind::Ident(NAMES.choose(rng).unwrap().to_string()),
        }
    } else {
        let sub = |rng: &mut R| Box::new(expr(rng, depth - 1));
        match rng.gen_range(0..9) {
            0 => ExprKind::Neg(sub(rng)),
            1 => ExprKind::Pow(sub(rng), rng.gen_range(-3i64..=5)),
            2 => ExprKind::D(sub(rng)),
            3 => ExprKind::Exp(sub(rng)),
            4 => {
                let rows = rng.gen_range(1..=2);
                let cols = rng.gen_range(1..=2);
                ExprKind::Matrix((0..rows).map(|_| (0..cols).map(|_| expr(rng, depth - 1)).collect()).collect())
            }
            _ => {
                let op = *[BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Wedge].choose(rng).unwrap();
                ExprKind::Bin(op, sub(rng), sub(rng))
            }
        }
    };
    Expr::new(kind, p)
}

pub fn sign(p: u32, q: u32) -> Scalar {
    if (p * q) % 2 == 0 {
        Scalar::one()
    } else {
        Scalar::int(-1)
    }
}
