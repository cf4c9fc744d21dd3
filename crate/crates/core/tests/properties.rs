mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use prolong::coeff::{Scalar, Symbol};
use prolong::dsl::{load, parse, parse_expr, Value};
use prolong::forms::{DerivationContext, MatrixForm};
use prolong::jet::{self, Direction, EvolutionSystem};
use prolong::su2::Su2Context;
use prolong::we::{b_family_ideal, ideal_membership};

use common::*;

fn config() -> Config {
    Config { cases: 512, rng_seed: RngSeed::Fixed(0x5eed_0001), failure_persistence: None, ..Config::default() }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn su2_atoms() -> Vec<Scalar> {
    named_atoms(&["y1", "y2", "y5"])
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn scalar_field_axioms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let atoms = named_atoms(&["a", "b", "c"]);
        let (a, b, c) = (scalar(&mut r, &atoms), scalar(&mut r, &atoms), scalar(&mut r, &atoms));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn wedge_graded_commutative_and_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let su2 = Su2Context::new();
        let chart = chart();
        let chart_atoms = named_atoms(&CHART);
        for (ctx, atoms) in [(&chart, &chart_atoms), (su2.ctx(), &su2_atoms())] {
            let (p, q, s) = (r.gen_range(0..=2), r.gen_range(0..=2), r.gen_range(0..=1));
            let (a, b, c) = (form(&mut r, ctx, p, atoms), form(&mut r, ctx, q, atoms), form(&mut r, ctx, s, atoms));
            prop_assert_eq!(a.wedge(&b), b.wedge(&a).scale(&sign(p, q)));
            prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
        }
    }

    #[test]
    fn graded_leibniz(seed in any::<u64>()) {
        let mut r = rng(seed);
        let su2 = Su2Context::new();
        let chart = chart();
        let chart_atoms = named_atoms(&CHART);
        for (ctx, atoms) in [(&chart, &chart_atoms), (su2.ctx(), &su2_atoms())] {
            let (p, q) = (r.gen_range(0..=2), r.gen_range(0..=2));
            let (a, b) = (form(&mut r, ctx, p, atoms), form(&mut r, ctx, q, atoms));
            let lhs = ctx.d(&a.wedge(&b));
            let rhs = &ctx.d(&a).wedge(&b) + &a.wedge(&ctx.d(&b)).scale(&sign(p, 1));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn d_squared_vanishes(seed in any::<u64>()) {
        let mut r = rng(seed);
        let su2 = Su2Context::new();
        let chart = chart();
        let chart_atoms = named_atoms(&CHART);
        for (ctx, atoms) in [(&chart, &chart_atoms), (su2.ctx(), &su2_atoms())] {
            let deg = r.gen_range(0..=2);
            let a = form(&mut r, ctx, deg, atoms);
            prop_assert!(ctx.d(&ctx.d(&a)).is_zero());
        }
        let plane = DerivationContext::jet_plane();
        let f = jet_poly(&mut r, true);
        let g = jet_poly(&mut r, true);
        let one_form = &plane.gen("dx").scale(&f) + &plane.gen("dt").scale(&g);
        prop_assert!(plane.d(&plane.d(&plane.scalar(f))).is_zero());
        prop_assert!(plane.d(&plane.d(&one_form)).is_zero());
    }

    #[test]
    fn euler_annihilates_total_derivatives(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = jet_poly(&mut r, false);
        let dx = jet::total_derivative(&f, Direction::X);
        for v in ["u", "v"] {
            prop_assert!(jet::euler_operator(&dx, v).unwrap().is_zero());
        }
    }

    #[test]
    fn total_derivatives_commute(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = jet_poly(&mut r, true);
        let xt = jet::total_derivative(&jet::total_derivative(&f, Direction::X), Direction::T);
        let tx = jet::total_derivative(&jet::total_derivative(&f, Direction::T), Direction::X);
        prop_assert_eq!(xt, tx);
    }

    #[test]
    fn reduction_is_idempotent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let u = jet::dependent("u");
        let sys = EvolutionSystem::new()
            .with("u", &jet::jet("u", 3) + &(&u * &jet::jet("u", 1)))
            .unwrap()
            .with("v", &jet::jet("v", 2) * &u)
            .unwrap();
        let f = jet::total_derivative(&jet_poly(&mut r, true), Direction::T);
        let once = jet::reduce_mod_evolution(&f, &sys).unwrap();
        prop_assert!(jet::time_derivatives(&once).is_empty());
        prop_assert_eq!(jet::reduce_mod_evolution(&once, &sys).unwrap(), once);
    }

    #[test]
    fn pauli_decomposition_inverts_composition(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = Su2Context::new();
        let deg = r.gen_range(0..=2);
        let comps = [0, 1, 2].map(|_| form(&mut r, s.ctx(), deg, &su2_atoms()));
        let m = MatrixForm::pauli_compose(&comps);
        prop_assert!(m.trace().is_zero());
        prop_assert_eq!(m.pauli_decompose().unwrap(), comps);
    }

    #[test]
    fn ideal_contains_random_combinations(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ideal = b_family_ideal().bind("beta", &Scalar::int(r.gen_range(-3..=3))).unwrap();
        let atoms = named_atoms(&["u", "p", "q"]);
        let mut phi = ideal.ctx().zero(3);
        for g in ideal.generators() {
            phi = &phi + &form(&mut r, ideal.ctx(), 1, &atoms).wedge(g);
        }
        let w = ideal_membership(&phi, &ideal);
        prop_assert!(w.is_some());
        prop_assert_eq!(w.unwrap().expand(&ideal, 3), phi);
    }

    #[test]
    fn syntax_tree_roundtrip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let e = expr(&mut r, 4);
        let printed = e.to_string();
        let back = parse_expr(&printed).unwrap();
        prop_assert_eq!(&back, &e, "{}", printed);
        prop_assert_eq!(back.to_string(), printed);
    }

    #[test]
    fn printed_scalars_reparse(seed in any::<u64>()) {
        let mut r = rng(seed);
        let atoms = named_atoms(&["a", "b", "c"]);
        let s = scalar(&mut r, &atoms);
        let m = load(&format!("param a, b, c\nlet z = {s}\n"), &BTreeMap::new()).unwrap();
        prop_assert_eq!(m.get("z").unwrap().as_scalar().unwrap(), s);
    }

    #[test]
    fn printed_forms_reparse(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ctx = chart();
        let deg = r.gen_range(0..=3);
        let f = form(&mut r, &ctx, deg, &named_atoms(&CHART));
        let m = load(&format!("coordinates x, t, u, p, q\nlet z = {f}\n"), &BTreeMap::new()).unwrap();
        match m.get("z").unwrap() {
            Value::Form(g) => prop_assert_eq!(g, &f),
            Value::Scalar(c) => prop_assert_eq!(ctx.scalar(c.clone()), f),
        }
    }

    #[test]
    fn parser_never_panics(src in "[a-z0-9 +*/^()\\[\\],:=#_\\n-]{0,60}") {
        let _ = parse(&src);
        let _ = load(&src, &BTreeMap::new());
    }

    #[test]
    fn model_statements_never_panic(seed in any::<u64>()) {
        let mut r = rng(seed);
        let heads = ["coordinates x, t, u", "param a", "let z = ", "eliminate u = ", "rule d(u) = ", "generator w : 1"];
        let mut src = String::new();
        for _ in 0..r.gen_range(1..5) {
            let h = heads[r.gen_range(0..heads.len())];
            src.push_str(h);
            if h.ends_with("= ") {
                src.push_str(&expr(&mut r, 3).to_string());
            }
            src.push('\n');
        }
        let _ = load(&src, &BTreeMap::new());
    }
}

#[test]
fn jets_print_in_input_syntax() {
    // a symbol prints the way the parser reads it
    let s = Scalar::symbol(Symbol::jet("u", 2, 1));
    let m = load("independent x, t\ndependent u\nlet z = u_xxt\n", &BTreeMap::new()).unwrap();
    assert_eq!(m.get("z").unwrap().as_scalar().unwrap(), s);
}
