//! Acceptance driver. Runs without the libtest harness so every criterion
//! prints its own line. Exit status is nonzero if a criterion fails that is
//! not on the documented red list, or if a listed one turns green.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use prolong::coeff::{Scalar, Symbol};
use prolong::dsl::{fixture, load, parse_expr, Model};
use prolong::forms::{DerivationContext, Mat2};
use prolong::jet::{self, dependent, Direction};
use prolong::su2::{
    extract_pde, gauge_transform, kdv_spec, theta_components, verify_identity, AknsSpec, IdentityStatus,
    Su2Context, Su2Identity,
};
use prolong::conservation::{
    conserved_pairs, conserved_pairs_from, current_lift, recursion_densities, verify_conservation, ConservedPair,
};
use prolong::we::{
    b_family_ideal, closure_check, ideal_membership, is_zero_matrix, section, zero_curvature_matrix,
    zero_curvature_residual, ConnectionData,
};

use common::*;

/// Criteria expected red, with the reason. Each has a ledger entry.
const KNOWN_RED: [(u32, &str); 1] = [(
    1,
    "the printed matrix form of dxi carries -Omega^xi; the explicit component identities and the engine both give +Omega^xi",
)];

struct Outcome {
    pass: bool,
    lines: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { pass: true, lines: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        self.lines.push(format!("{} {what}", if ok { "ok  " } else { "FAIL" }));
        self.pass &= ok;
    }

    fn note(&mut self, what: impl Into<String>) {
        self.lines.push(format!("     {}", what.into()));
    }
}

fn model(name: &str) -> Model {
    load(fixture(name).expect("bundled"), &BTreeMap::new()).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn int(n: i64) -> Scalar {
    Scalar::int(n)
}

fn jt(v: &str, x: u32, t: u32) -> Scalar {
    Scalar::symbol(Symbol::jet(v, x, t))
}

fn su2_identities() -> Outcome {
    let mut o = Outcome::new();
    let s = Su2Context::new();
    for id in Su2Identity::ALL {
        let r = verify_identity(&s, id);
        if id == Su2Identity::Xi4 {
            // the printed right side mentions a nonexistent theta4
            let noted = r.notes.iter().any(|n| n.contains("theta4"));
            o.check(
                r.decomposition_holds() && r.status == IdentityStatus::Corrected && noted,
                format!("{id}: certified against the engine decomposition, theta4 discrepancy noted"),
            );
            continue;
        }
        let printed = r.printed_holds();
        o.check(printed, format!("{id}: printed residual is zero"));
        if !printed {
            for c in &r.components {
                if let Some(res) = &c.residual {
                    if !res.is_zero() {
                        o.note(format!("{}: residual {res}", c.label));
                    }
                }
            }
            for c in r.corrections.iter().filter(|c| c.holds()) {
                o.note(format!("holds instead: {}", c.description));
            }
        }
    }
    o
}

fn gauge() -> Outcome {
    let mut o = Outcome::new();
    let s = Su2Context::with_functions(&["f", "g"]);
    let (f, g) = (Scalar::named("f"), Scalar::named("g"));
    let shear = Mat2([[Scalar::one(), f], [Scalar::zero(), Scalar::one()]]);
    let scale = Mat2([[g.clone(), Scalar::zero()], [Scalar::zero(), g.inv().unwrap()]]);
    for (name, q) in [("[[1,f],[0,1]]", shear), ("[[g,0],[0,1/g]]", scale)] {
        let r = gauge_transform(s.ctx(), &s.omega_matrix(), &q).unwrap();
        o.check(r.residual.is_zero() && !r.theta_direct.is_zero(), format!("Q = {name}: Theta' - Q Theta Q^-1 = 0"));
    }
    o
}

fn dd_zero() -> Outcome {
    let mut o = Outcome::new();
    let s = Su2Context::new();
    o.check(s.ctx().check_dd_zero().passed(), "su2 free algebra");
    let mut contexts: Vec<(String, DerivationContext)> = vec![
        ("jet plane".into(), DerivationContext::jet_plane()),
        ("chart x, t, u, p, q".into(), chart()),
        ("b-family ideal".into(), b_family_ideal().ctx().clone()),
    ];
    for name in ["su2", "akns", "kdv", "ch", "ch_corrupt"] {
        contexts.push((format!("fixture {name}"), model(name).ctx));
    }
    for (name, ctx) in contexts {
        o.check(ctx.check_dd_zero().passed(), name);
    }
    let bad = Su2Context::corrupted_context().check_dd_zero();
    o.check(!bad.passed(), "corrupted rule table is rejected");
    for (g, r) in bad.failures() {
        o.note(format!("d(d {g}) = {r}"));
    }
    o
}

fn generic_spec() -> AknsSpec {
    model("akns").akns.into_iter().next().expect("akns block")
}

fn recursion() -> Outcome {
    let mut o = Outcome::new();
    let spec = generic_spec();
    let (r, q) = (dependent("r"), dependent("q"));
    let seq = recursion_densities(&spec, 9).unwrap();
    let rx = jet::jet("r", 1);
    let rxx = jet::jet("r", 2);
    let w3 = &(&rxx * &Scalar::ratio(1, 4)) - &(&(&q * &(&r * &r)) * &Scalar::ratio(1, 2));
    o.check(seq.w(1) == r, format!("W1 = {}", seq.w(1)));
    o.check(seq.w(2) == &rx * &Scalar::ratio(-1, 2), format!("W2 = {}", seq.w(2)));
    o.check(seq.w(3) == w3, format!("W3 = {}", seq.w(3)));
    // substitute back: W_{n,x} + 2 W_{n+1} + q sum W_{n-k} W_k
    let mut all = true;
    for n in 1..=8 {
        let mut sum = Scalar::zero();
        for k in 1..n {
            sum = &sum + &(&seq.w(n - k) * &seq.w(k));
        }
        let lhs = &(&jet::total_derivative(&seq.w(n), Direction::X) + &(&int(2) * &seq.w(n + 1))) + &(&q * &sum);
        all &= lhs.is_zero() && seq.residual(n).is_zero();
    }
    o.check(all, "recursion residual vanishes for n <= 8");
    o
}

fn conservation() -> Outcome {
    let mut o = Outcome::new();
    let spec = model("kdv").akns.into_iter().next().expect("akns block");
    o.check(spec == kdv_spec(), "bundled KdV-family spec loads");
    let pde = extract_pde(&spec, &theta_components(&spec)).unwrap();
    let q = dependent("q");
    let kdv = &jet::jet("q", 3) + &(&int(6) * &(&q * &jet::jet("q", 1)));
    o.check(pde.system.law("q") == Some(&kdv), "extracted q_t = q_xxx + 6 q q_x");
    let pairs = conserved_pairs(&spec, 5).unwrap();
    for p in &pairs {
        let c = verify_conservation(p, &pde.system).unwrap();
        o.check(c.certified(), format!("n = {}: D_t(q W_n) - D_x J_n passes the Euler test", p.n));
    }
    o.note("densities use the Riccati-consistent seed W1 = r/2");
    // negative control: a perturbed current breaks the balance
    let p3 = &pairs[2];
    let bump = &jet::jet("q", 1) * &jet::jet("q", 1);
    let bad = ConservedPair { current: &p3.current + &bump, ..p3.clone() };
    let c = verify_conservation(&bad, &pde.system).unwrap();
    let w = c.witness();
    o.check(!c.exact() && w.as_ref().is_some_and(|w| !w.is_zero()), "perturbed J_3 fails");
    if let Some(w) = w {
        o.note(format!("witness {w}"));
    }
    // the printed seed, for the record
    let printed = recursion_densities(&spec, 5 + current_lift(&spec)).unwrap();
    if let Some(p) = conserved_pairs_from(&spec, &printed, 5).unwrap().last() {
        let c = verify_conservation(p, &pde.system).unwrap();
        if let Some(w) = c.witness().filter(|_| !c.certified()) {
            o.note(format!("printed seed W1 = r at n = 5: not conserved, Euler witness {w}"));
        }
    }
    o
}

fn closure() -> Outcome {
    let mut o = Outcome::new();
    let ideal = b_family_ideal();
    let w = closure_check(&ideal);
    o.check(w.is_ok(), "closure with symbolic beta");
    let Ok(w) = w else { return o };
    let dxi2 = ideal.ctx().d(ideal.generator("xi2").unwrap());
    let ours = w.get("xi2").expect("witness for xi2");
    let expanded = ours.expand(&ideal, 2);
    o.check(expanded == dxi2, "engine witness re-expands to d(xi2)");
    // printed multiplier: (1/u) dx ^ (-xi3 + u((1 + beta) u - q) xi1)
    let (u, q, beta) = (Scalar::named("u"), Scalar::named("q"), Scalar::named("beta"));
    let dx = ideal.d("x");
    let (xi1, xi3) = (ideal.generator("xi1").unwrap(), ideal.generator("xi3").unwrap());
    let c = &u * &(&(&(&Scalar::one() + &beta) * &u) - &q);
    let printed = dx.wedge(&(&(-xi3) + &xi1.scale(&c))).scale(&u.inv().unwrap());
    o.check(ideal_membership(&(&printed - &expanded), &ideal).is_some(), "printed multiplier agrees up to the ideal");
    for (g, m) in ours.support() {
        o.note(format!("{g}: {m}"));
    }
    o
}

fn sectioning() -> Outcome {
    let mut o = Outcome::new();
    let m = model("ch");
    let ideal = &m.ideals[0].1;
    let s = section(ideal, &m.eliminations).unwrap();
    let u = dependent("u");
    o.check(s.equations[0].raw == &jet::jet("u", 1) - &dependent("p"), "p = u_x");
    o.check(s.equations[1].raw == &jet::jet("p", 1) - &dependent("q"), "q = p_x");
    let beta = Scalar::named("beta");
    let (ux, uxx, uxxx) = (jet::jet("u", 1), jet::jet("u", 2), jet::jet("u", 3));
    // u_t - u_xxt + (beta + 1) u u_x - beta u_x u_xx - u u_xxx
    let bfam = |b: &Scalar| {
        let lin = &jt("u", 0, 1) - &jt("u", 2, 1);
        let conv = &(&(b + &Scalar::one()) * &(&u * &ux)) - &(b * &(&ux * &uxx));
        &(&lin + &conv) - &(&u * &uxxx)
    };
    let pdes: Vec<_> = s.pdes().collect();
    o.check(pdes.len() == 1 && pdes[0].reduced == bfam(&beta), format!("b-family: {} = 0", pdes[0].reduced));
    for (b, label) in [(2, "Camassa-Holm"), (3, "Degasperis-Procesi")] {
        let bound = ideal.bind("beta", &int(b)).unwrap();
        let s = section(&bound, &m.eliminations).unwrap();
        let e = s.pdes().next().unwrap();
        o.check(e.reduced == bfam(&int(b)) && e.label == Some(label), format!("beta = {b}: {label}"));
    }
    o
}

fn lax() -> Outcome {
    let mut o = Outcome::new();
    let spec = model("kdv").akns.into_iter().next().expect("akns block");
    let th = theta_components(&spec);
    let sys = extract_pde(&spec, &th).unwrap().system;
    let conn = ConnectionData::from_akns(&spec);
    o.check(is_zero_matrix(&zero_curvature_residual(&conn, &sys).unwrap()), "zero curvature on the extracted PDE");
    let m = zero_curvature_matrix(&conn);
    let agree = m[0][0] == -th.third().clone()
        && m[0][1] == -th.minus.clone()
        && m[1][0] == -th.plus.clone()
        && m[1][1] == th.third().clone();
    o.check(agree, "zero-curvature matrix is -Theta entrywise");
    let reduced: Vec<_> =
        [&th.plus, &th.minus, th.third()].into_iter().map(|e| jet::reduce_mod_evolution(e, &sys).unwrap()).collect();
    o.check(reduced.iter().all(Scalar::is_zero), "theta components vanish on the same PDE");
    o
}

const SEED: u64 = 0xacce_0009;
const INSTANCES: usize = 500;

fn count(name: &str, o: &mut Outcome, mut f: impl FnMut(&mut ChaCha8Rng) -> bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ name.len() as u64);
    let failures = (0..INSTANCES).filter(|_| !f(&mut rng)).count();
    o.check(failures == 0, format!("{name}: {INSTANCES} instances, {failures} failures"));
}

fn properties() -> Outcome {
    let mut o = Outcome::new();
    let ctx = chart();
    let atoms = named_atoms(&CHART);
    count("wedge antisymmetry", &mut o, |r| {
        let (p, q) = (r.gen_range(0..=2), r.gen_range(0..=2));
        let (a, b) = (form(r, &ctx, p, &atoms), form(r, &ctx, q, &atoms));
        a.wedge(&b) == b.wedge(&a).scale(&sign(p, q))
    });
    count("graded Leibniz", &mut o, |r| {
        let (p, q) = (r.gen_range(0..=2), r.gen_range(0..=2));
        let (a, b) = (form(r, &ctx, p, &atoms), form(r, &ctx, q, &atoms));
        ctx.d(&a.wedge(&b)) == &ctx.d(&a).wedge(&b) + &a.wedge(&ctx.d(&b)).scale(&sign(p, 1))
    });
    count("d∘d = 0", &mut o, |r| {
        let p = r.gen_range(0..=2);
        ctx.d(&ctx.d(&form(r, &ctx, p, &atoms))).is_zero()
    });
    count("euler∘D_x = 0", &mut o, |r| {
        let dx = jet::total_derivative(&jet_poly(r, false), Direction::X);
        ["u", "v"].iter().all(|v| jet::euler_operator(&dx, v).is_ok_and(|e| e.is_zero()))
    });
    count("parse/print roundtrip", &mut o, |r| {
        let e = expr(r, 4);
        let printed = e.to_string();
        parse_expr(&printed).is_ok_and(|back| back == e && back.to_string() == printed)
    });
    o
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 9] = [
        (1, "su2 identity suite", su2_identities),
        (2, "gauge covariance", gauge),
        (3, "d^2 = 0 certification", dd_zero),
        (4, "conservation recursion", recursion),
        (5, "conservation certification", conservation),
        (6, "closure of the b-family ideal", closure),
        (7, "sectioning", sectioning),
        (8, "Lax consistency", lax),
        (9, "property suites", properties),
    ];
    let mut unexpected = 0;
    let mut green = 0;
    for (n, title, run) in criteria {
        let out = run();
        let red = KNOWN_RED.iter().find(|(k, _)| *k == n);
        println!("criterion {n} [{}] {title}", if out.pass { "PASS" } else { "FAIL" });
        for l in &out.lines {
            println!("    {l}");
        }
        match (out.pass, red) {
            (true, None) => green += 1,
            (false, Some((_, why))) => println!("    known red: {why}"),
            (true, Some(_)) => {
                println!("    listed as known red but passes; update KNOWN_RED");
                unexpected += 1;
            }
            (false, None) => unexpected += 1,
        }
    }
    println!("{green}/9 criteria pass, {} known red, {unexpected} unexpected", KNOWN_RED.len());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
