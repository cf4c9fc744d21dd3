use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::coeff::{Scalar, Symbol};
use crate::conservation::{conserved_pairs, conserved_pairs_from, current_lift, recursion_densities, riccati_densities, riccati_residual, verify_conservation};
use crate::forms::{pullback, DerivationContext, Form, Mat2};
use crate::jet::{self, EvolutionSystem};
use crate::su2::{
    build_forms, extract_pde, gauge_transform, surface_data, theta_components, verify_identity, AknsSpec,
    IdentityStatus, Su2Context, Su2Identity,
};
use crate::we::{
    coordinates_to_jets, eliminate, membership, prolongation_residual, section, zero_curvature_matrix,
    zero_curvature_residual, ConnectionData, ExteriorIdeal, Matrix, WeError,
};

use super::report::{Item, Report, Status};
use super::{fixture, load, Model, FIXTURES};

#[derive(Debug, Parser)]
#[command(name = "prolong", version, about = "Exact checks for prolongation structures")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Also write the report as JSON to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Value for the parameter `beta`, e.g. 2 or -1/3.
    #[arg(long, global = true, value_name = "RATIONAL")]
    beta: Option<String>,
    /// Truncation order for density and conservation commands.
    #[arg(long, global = true, value_name = "N")]
    order: Option<usize>,
    /// Use a bundled model file instead of a path.
    #[arg(long, global = true, value_name = "NAME")]
    fixture: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Check the SU(2) form identities.
    VerifySu2 {
        /// One identity, e.g. xi3 or bianchi.
        name: Option<String>,
        #[arg(long)]
        all: bool,
    },
    /// Gauge covariance of the curvature under two unimodular matrices.
    Gauge,
    /// Curvature components of an AKNS block and the evolution law they impose.
    Theta { file: Option<String> },
    /// Conserved densities W_n from the recursion.
    Densities { file: Option<String> },
    /// Certify the conservation laws on the extracted evolution law.
    Conserve { file: Option<String> },
    /// Closure of an ideal under d, with multiplier witnesses.
    Closure { file: Option<String> },
    /// Restrict an ideal to sections and apply the eliminations.
    Section { file: Option<String> },
    /// Prolongation of a connection over an ideal.
    Prolong { file: Option<String> },
    /// Zero-curvature consistency of a connection.
    Laxcheck { file: Option<String> },
    /// Frame, connection and curvature of the associated surface.
    Surface { file: Option<String> },
}

/// Failure that is not a check result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

/// Run the command line; returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let start = Instant::now();
    let echo = args.iter().skip(1).cloned().collect();
    match execute(&cli, echo) {
        Ok(report) => {
            let _ = write!(out, "{report}");
            let _ = writeln!(err, "wall time: {:.1} ms", start.elapsed().as_secs_f64() * 1e3);
            if let Some(path) = &cli.json {
                if let Err(e) = std::fs::write(path, report.to_json() + "\n") {
                    let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            if report.passed {
                0
            } else {
                1
            }
        }
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

/// Run a parsed command line without printing.
pub fn report_for<I, S>(args: I) -> Result<Report, UsageError>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = Cli::try_parse_from(&args)?;
    execute(&cli, args.into_iter().skip(1).collect())
}

fn parse_rational(s: &str) -> Result<Scalar, UsageError> {
    let bad = || UsageError(format!("`{s}` is not a rational number"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<i64>().map_err(|_| bad())?, d.trim().parse::<i64>().map_err(|_| bad())?),
        None => (s.trim().parse::<i64>().map_err(|_| bad())?, 1),
    };
    if d == 0 {
        return Err(bad());
    }
    Ok(Scalar::ratio(n, d))
}

/// Text of the model: `--fixture`, a path, a bundled file with the same
/// stem, or the command's default fixture.
fn source(cli: &Cli, file: Option<&str>, default: &str) -> Result<(String, String), UsageError> {
    if let Some(name) = &cli.fixture {
        let text = fixture(name).ok_or_else(|| {
            let names: Vec<_> = FIXTURES.iter().map(|(n, _)| *n).collect();
            UsageError(format!("no bundled fixture `{name}` (have {})", names.join(", ")))
        })?;
        return Ok((name.clone(), text.to_string()));
    }
    let Some(path) = file else {
        return Ok((default.to_string(), fixture(default).expect("bundled").to_string()));
    };
    match std::fs::read_to_string(path) {
        Ok(text) => Ok((path.to_string(), text)),
        Err(e) => {
            let stem = Path::new(path).file_stem().and_then(|s| s.to_str()).unwrap_or("");
            match fixture(stem) {
                Some(text) => Ok((path.to_string(), text.to_string())),
                None => Err(UsageError(format!("cannot read {path}: {e}"))),
            }
        }
    }
}

fn model(cli: &Cli, file: Option<&str>, default: &str, bind_beta: bool) -> Result<Model, UsageError> {
    let (label, text) = source(cli, file, default)?;
    let mut bind = BTreeMap::new();
    if let Some(b) = &cli.beta {
        if bind_beta {
            bind.insert("beta".to_string(), parse_rational(b)?);
        }
    }
    load(&text, &bind).map_err(|e| UsageError(format!("{label}:{e}")))
}

fn order(cli: &Cli, m: &Model) -> Result<usize, UsageError> {
    let n = match (cli.order, m.default_value("order")) {
        (Some(n), _) => n,
        (None, Some(v)) => v
            .as_constant()
            .and_then(|c| c.as_integer())
            .and_then(|n| usize::try_from(n).ok())
            .ok_or_else(|| UsageError("default order must be a positive integer".into()))?,
        (None, None) => 5,
    };
    if n == 0 {
        return Err(UsageError("--order must be at least 1".into()));
    }
    Ok(n)
}

fn first_akns(m: &Model) -> Result<&AknsSpec, UsageError> {
    m.akns.first().ok_or_else(|| UsageError("the model has no akns block".into()))
}

fn first_ideal(m: &Model) -> Result<&(String, ExteriorIdeal), UsageError> {
    m.ideals.first().ok_or_else(|| UsageError("the model has no ideal block".into()))
}

/// The declared evolution laws, or the ones read off the curvature.
fn shell(m: &Model, spec: &AknsSpec) -> Result<Option<EvolutionSystem>, UsageError> {
    if !m.evolution.is_empty() {
        return Ok(Some(m.evolution.clone()));
    }
    Ok(extract_pde(spec, &theta_components(spec)).ok().map(|p| p.system))
}

fn laws(sys: &EvolutionSystem) -> String {
    sys.laws().map(|(v, rhs)| format!("{v}_t = {rhs}")).collect::<Vec<_>>().join("; ")
}

fn execute(cli: &Cli, command: Vec<String>) -> Result<Report, UsageError> {
    let mut r = Report::new(command);
    match &cli.cmd {
        Cmd::VerifySu2 { name, all } => verify_su2(cli, &mut r, name.as_deref(), *all)?,
        Cmd::Gauge => gauge(&mut r)?,
        Cmd::Theta { file } => theta(&model(cli, file.as_deref(), "kdv", true)?, &mut r)?,
        Cmd::Densities { file } => {
            let m = model(cli, file.as_deref(), "kdv", true)?;
            densities(&m, order(cli, &m)?, &mut r)?
        }
        Cmd::Conserve { file } => {
            let m = model(cli, file.as_deref(), "kdv", true)?;
            conserve(&m, order(cli, &m)?, &mut r)?
        }
        Cmd::Closure { file } => closure(&model(cli, file.as_deref(), "ch", true)?, &mut r)?,
        Cmd::Section { file } => section_cmd(&model(cli, file.as_deref(), "ch", true)?, &mut r)?,
        Cmd::Prolong { file } => prolong(&model(cli, file.as_deref(), "ch", true)?, &mut r)?,
        Cmd::Laxcheck { file } => laxcheck(&model(cli, file.as_deref(), "kdv", true)?, &mut r)?,
        Cmd::Surface { file } => surface(&model(cli, file.as_deref(), "kdv", true)?, &mut r)?,
    }
    Ok(r)
}

fn verify_su2(cli: &Cli, r: &mut Report, name: Option<&str>, all: bool) -> Result<(), UsageError> {
    let ids: Vec<Su2Identity> = match (name, all) {
        (None, true) => Su2Identity::ALL.to_vec(),
        (Some(n), false) => vec![Su2Identity::from_name(n).ok_or_else(|| {
            let names: Vec<_> = Su2Identity::ALL.iter().map(|i| i.name()).collect();
            UsageError(format!("unknown identity `{n}` (have {})", names.join(", ")))
        })?],
        _ => return Err(UsageError("give one identity name or --all".into())),
    };
    let s = Su2Context::new();
    for id in ids {
        let rep = verify_identity(&s, id);
        let status = match rep.status {
            IdentityStatus::Verified => Status::Verified,
            IdentityStatus::Corrected => Status::Corrected,
            IdentityStatus::Failed => Status::Failed,
        };
        let mut item = Item::new(id.name(), status).field("statement", id.statement());
        for c in &rep.components {
            let printed = match &c.residual {
                Some(res) => res.to_string(),
                None => "not evaluable".into(),
            };
            item = item
                .field(format!("{} lhs", c.label), &c.lhs)
                .field(format!("{} printed residual", c.label), printed)
                .field(format!("{} decomposition", c.label), &c.decomposition);
        }
        for cor in rep.corrections.iter().filter(|c| c.holds()) {
            item = item.field("correction", &cor.description);
        }
        for n in &rep.notes {
            item = item.field("note", n);
        }
        r.push(item);
    }
    if cli.fixture.is_some() {
        let m = model(cli, None, "su2", false)?;
        r.push(fixture_agreement(&s, &m));
    }
    Ok(())
}

/// Compare the model's `xi1..xi8` with the built-in forms, matching
/// generators by name.
fn fixture_agreement(s: &Su2Context, m: &Model) -> Item {
    let dd = m.ctx.check_dd_zero();
    let target = s.ctx().basis();
    let images: Option<Vec<Form>> =
        m.ctx.basis().ids().map(|g| s.ctx().generator(m.ctx.basis().name(g))).collect();
    let mut item = Item::new("fixture", Status::Verified).field("d∘d", if dd.passed() { "0" } else { "nonzero" });
    let mut ok = dd.passed();
    let forms = build_forms(s);
    match images {
        Some(images) => {
            for k in 1..=8 {
                let name = format!("xi{k}");
                let same = match m.get(&name).map(|v| (v.degree(), v)) {
                    Some((1, super::Value::Form(f))) => {
                        pullback(f, target, &images, |c| Ok::<_, ()>(c.clone())).ok().as_ref() == Some(forms.xi(k))
                    }
                    _ => false,
                };
                ok &= same;
                item = item.field(name, if same { "matches" } else { "differs" });
            }
        }
        None => {
            ok = false;
            item = item.field("generators", "do not match the built-in context");
        }
    }
    if !ok {
        item.status = Status::Failed;
    }
    item
}

fn gauge(r: &mut Report) -> Result<(), UsageError> {
    let s = Su2Context::with_functions(&["f", "g"]);
    let (f, g) = (Scalar::named("f"), Scalar::named("g"));
    let shear = Mat2([[Scalar::one(), f], [Scalar::zero(), Scalar::one()]]);
    let diag = Mat2([[g.clone(), Scalar::zero()], [Scalar::zero(), g.inv()?]]);
    for (name, q) in [("Q = [[1, f], [0, 1]]", shear), ("Q = [[g, 0], [0, 1/g]]", diag)] {
        let res = gauge_transform(s.ctx(), &s.omega_matrix(), &q)?;
        let status = if res.residual.is_zero() { Status::Verified } else { Status::Residual };
        r.push(
            Item::new(name, status)
                .field("Omega'", &res.omega)
                .field("Theta' - Q Theta Q^-1", &res.residual),
        );
    }
    Ok(())
}

fn theta(m: &Model, r: &mut Report) -> Result<(), UsageError> {
    let spec = first_akns(m)?;
    let th = theta_components(spec);
    r.push(
        Item::new(format!("{} curvature", spec.name), Status::Info)
            .field("theta1 + i theta2", &th.plus)
            .field("theta1 - i theta2", &th.minus)
            .field("theta3", th.third()),
    );
    match extract_pde(spec, &th) {
        Ok(p) => {
            let mut item = Item::new("evolution", Status::Verified).field("system", laws(&p.system));
            for t in &p.trace {
                item = item.field("step", t);
            }
            r.push(item);
        }
        Err(e) => r.push(Item::new("evolution", Status::Failed).field("error", e)),
    }
    Ok(())
}

fn densities(m: &Model, n: usize, r: &mut Report) -> Result<(), UsageError> {
    let spec = first_akns(m)?;
    let eta = Symbol::named("eta");
    for (label, seq) in [("recursion", recursion_densities(spec, n + 1)?), ("riccati", riccati_densities(spec, n + 1)?)] {
        let recursion_ok = (1..=n).all(|k| seq.residual(k).is_zero());
        let mut item = Item::new(label, if recursion_ok { Status::Verified } else { Status::Residual });
        for k in 1..=n {
            r.peak(jet::jet_order(&seq.w(k)));
            item = item.field(format!("W{k}"), seq.w(k));
        }
        let ric = riccati_residual(spec, &seq);
        item = item.field("riccati residual", ric.to_scalar(&eta));
        r.push(item);
    }
    Ok(())
}

fn conserve(m: &Model, n: usize, r: &mut Report) -> Result<(), UsageError> {
    let spec = first_akns(m)?;
    let Some(sys) = shell(m, spec)? else {
        r.push(Item::new("evolution", Status::Failed).field("error", "no evolution law available"));
        return Ok(());
    };
    r.push(Item::new("evolution", Status::Info).field("system", laws(&sys)));
    for pair in conserved_pairs(spec, n)? {
        let cert = verify_conservation(&pair, &sys)?;
        r.peak(cert.peak_order.max(jet::jet_order(&pair.density)).max(jet::jet_order(&pair.current)));
        let status = if cert.certified() { Status::Verified } else { Status::Residual };
        let mut item = Item::new(format!("n = {}", pair.n), status)
            .field("density", &pair.density)
            .field("current", &pair.current)
            .field("defect", &cert.defect);
        if let Some(w) = cert.witness().filter(|_| !cert.certified()) {
            item = item.field("witness", w);
        }
        r.push(item);
    }
    // the recursion seeded with W1 = r, for comparison
    let seq = recursion_densities(spec, n + current_lift(spec))?;
    let mut item = Item::new("seed W1 = r", Status::Info);
    for pair in conserved_pairs_from(spec, &seq, n)? {
        let cert = verify_conservation(&pair, &sys)?;
        let v = match cert.witness().filter(|_| !cert.certified()) {
            Some(w) => format!("not conserved, witness {w}"),
            None => "conserved".into(),
        };
        item = item.field(format!("n = {}", pair.n), v);
    }
    r.push(item);
    Ok(())
}

fn closure(m: &Model, r: &mut Report) -> Result<(), UsageError> {
    let (name, ideal) = first_ideal(m)?;
    let dd = ideal.ctx().check_dd_zero();
    r.push(Item::new("d∘d", if dd.passed() { Status::Verified } else { Status::Residual }));
    for (g, form) in ideal.names().iter().zip(ideal.generators()) {
        let dg = ideal.ctx().d(form);
        let mem = membership(&dg, ideal);
        let item = Item::new(format!("{name}.{g}"), if mem.is_member() { Status::Verified } else { Status::Residual })
            .field(format!("d({g})"), &dg);
        r.push(if mem.is_member() { item.field("witness", &mem.witness) } else { item.field("residual", &mem.residual) });
    }
    Ok(())
}

fn section_cmd(m: &Model, r: &mut Report) -> Result<(), UsageError> {
    let (_, ideal) = first_ideal(m)?;
    let res = section(ideal, &m.eliminations)?;
    for (v, e) in &res.eliminations {
        r.push(Item::new(format!("eliminate {v}"), Status::Info).field("value", e));
    }
    for eq in &res.equations {
        let mut item = Item::new(&eq.generator, Status::Info).field("pullback", &eq.raw).field("equation", &eq.reduced);
        if let Some(l) = eq.label {
            item = item.field("label", l);
        }
        r.peak(jet::jet_order(&eq.reduced));
        r.push(item);
    }
    Ok(())
}

fn prolong(m: &Model, r: &mut Report) -> Result<(), UsageError> {
    let (_, ideal) = first_ideal(m)?;
    let (cname, conn) = m.connections.first().ok_or_else(|| UsageError("the model has no connection block".into()))?;
    let rep = prolongation_residual(conn, ideal)?;
    for e in &rep.entries {
        let name = format!("{cname}[{},{}]", e.row + 1, e.col + 1);
        let item = Item::new(name, if e.membership.is_member() { Status::Verified } else { Status::Residual })
            .field("form", &e.form);
        r.push(if e.membership.is_member() {
            item.field("witness", &e.membership.witness)
        } else {
            item.field("residual", &e.membership.residual)
        });
    }
    Ok(())
}

fn matrix_item(name: &str, status: Status, key: &str, mat: &Matrix) -> Item {
    let mut item = Item::new(name, status);
    for (i, row) in mat.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            item = item.field(format!("{key}[{},{}]", i + 1, j + 1), e);
        }
    }
    item
}

fn laxcheck(m: &Model, r: &mut Report) -> Result<(), UsageError> {
    if let Some(spec) = m.akns.first() {
        let conn = match m.connections.first() {
            Some((_, c)) => c.clone(),
            None => ConnectionData::from_akns(spec),
        };
        let Some(sys) = shell(m, spec)? else {
            r.push(Item::new("evolution", Status::Failed).field("error", "no evolution law available"));
            return Ok(());
        };
        r.push(Item::new("evolution", Status::Info).field("system", laws(&sys)));
        let res = zero_curvature_residual(&conn, &sys)?;
        let zero = res.iter().flatten().all(Scalar::is_zero);
        r.push(matrix_item("zero curvature on shell", if zero { Status::Verified } else { Status::Residual }, "R", &res));
        if m.connections.is_empty() {
            let th = theta_components(spec);
            let zc = zero_curvature_matrix(&conn);
            let expect = [[-th.third().clone(), -th.minus.clone()], [-th.plus.clone(), th.third().clone()]];
            let agree = zc.iter().zip(&expect).all(|(a, b)| a.iter().zip(b).all(|(x, y)| x == y));
            let status = if agree { Status::Verified } else { Status::Failed };
            r.push(Item::new("agrees with -Theta", status).field("zero curvature off shell", format!("{zc:?}")));
        }
        return Ok(());
    }
    let (_, ideal) = first_ideal(m)?;
    let (_, conn) = m.connections.first().ok_or_else(|| UsageError("the model has no connection block".into()))?;
    let res = section(ideal, &m.eliminations)?;
    let pdes: Vec<_> = res.pdes().collect();
    let [eq] = pdes.as_slice() else {
        return Err(UsageError(format!("expected one equation after sectioning, found {}", pdes.len())));
    };
    r.push(Item::new("equation", Status::Info).field("equation", &eq.reduced));
    let on_jets = conn.try_map(|e| {
        let mut v = coordinates_to_jets(e, ideal, ["x", "t"])?;
        for (var, rhs) in &res.eliminations {
            v = eliminate(&v, var, rhs)?;
        }
        Ok::<_, WeError>(v)
    })?;
    let zc = zero_curvature_matrix(&on_jets);
    let mut item = Item::new("zero curvature is a multiple of the equation", Status::Verified);
    for (i, row) in zc.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let ratio = e.checked_div(&eq.reduced)?;
            let ok = jet::time_derivatives(&ratio).is_empty();
            if !ok {
                item.status = Status::Residual;
            }
            item = item.field(format!("R[{},{}] / equation", i + 1, j + 1), ratio);
        }
    }
    r.push(item);
    Ok(())
}

fn surface(m: &Model, r: &mut Report) -> Result<(), UsageError> {
    let spec = first_akns(m)?;
    let sys = shell(m, spec)?;
    let ctx = DerivationContext::jet_plane();
    let data = surface_data(&ctx, &spec.omegas(&ctx), sys.as_ref())?;
    let gauss = if data.residuals[2].is_zero() { Status::Verified } else { Status::Residual };
    r.push(
        Item::new("surface", gauss)
            .field("alpha1", &data.alpha1)
            .field("alpha2", &data.alpha2)
            .field("omega", &data.omega)
            .field("K", &data.curvature)
            .field("d alpha1 - omega ^ alpha2", &data.residuals[0])
            .field("d alpha2 + omega ^ alpha1", &data.residuals[1])
            .field("d omega + K alpha1 ^ alpha2", &data.residuals[2]),
    );
    Ok(())
}
