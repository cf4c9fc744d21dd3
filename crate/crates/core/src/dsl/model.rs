use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::coeff::{GaussRat, LaurentInEta, Scalar, Symbol};
use crate::forms::{Basis, DerivationContext, Form, ScalarDifferential};
use crate::jet::{self, EvolutionSystem};
use crate::su2::AknsSpec;
use crate::we::{ConnectionData, ExteriorIdeal};

use super::ast::{BinOp, Binding, Expr, ExprKind, ModelFile, StmtKind};
use super::{parse, DslError, Pos};

const RESERVED: [&str; 4] = ["i", "d", "exp", "end"];

/// Value of an expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Scalar(Scalar),
    Form(Form),
}

impl Value {
    pub fn degree(&self) -> u32 {
        match self {
            Value::Scalar(_) => 0,
            Value::Form(f) => f.degree(),
        }
    }

    pub fn as_scalar(&self) -> Option<Scalar> {
        match self {
            Value::Scalar(s) => Some(s.clone()),
            Value::Form(f) => f.as_scalar(),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Scalar(s) => write!(f, "{s}"),
            Value::Form(g) => write!(f, "{g}"),
        }
    }
}

/// What the scalar symbols of a model denote.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Chart {
    /// Coordinates with `d c = dc`.
    Coordinates(Vec<String>),
    /// Jet variables over `(x, t)`; forms live on the plane.
    Jet { dependent: Vec<String> },
    /// Only abstract generators.
    Free,
}

/// A parsed file with every reference resolved.
#[derive(Debug, Clone)]
pub struct Model {
    pub file: ModelFile,
    pub chart: Chart,
    pub ctx: DerivationContext,
    pub params: Vec<String>,
    pub lets: Vec<(String, Value)>,
    pub ideals: Vec<(String, ExteriorIdeal)>,
    pub eliminations: Vec<(String, Scalar)>,
    pub akns: Vec<AknsSpec>,
    pub connections: Vec<(String, ConnectionData)>,
    pub evolution: EvolutionSystem,
    pub defaults: Vec<(String, Scalar)>,
}

impl Model {
    pub fn get(&self, name: &str) -> Option<&Value> {
        self.lets.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn default_value(&self, key: &str) -> Option<&Scalar> {
        self.defaults.iter().find(|(n, _)| n == key).map(|(_, v)| v)
    }
}

/// Parse and resolve `src`; `bind` fixes parameter values.
pub fn load(src: &str, bind: &BTreeMap<String, Scalar>) -> Result<Model, DslError> {
    elaborate(&parse(src)?, bind)
}

pub fn elaborate(file: &ModelFile, bind: &BTreeMap<String, Scalar>) -> Result<Model, DslError> {
    let decl = Declarations::collect(file)?;
    let (ctx, chart) = decl.context();
    let mut e = Elaborator {
        decl,
        bind,
        ctx,
        visible: BTreeSet::new(),
        lets: Vec::new(),
        ruled: BTreeSet::new(),
        local: BTreeMap::new(),
    };
    let mut model = Model {
        file: file.clone(),
        chart: chart.clone(),
        ctx: e.ctx.clone(),
        params: e.decl.params.clone(),
        lets: Vec::new(),
        ideals: Vec::new(),
        eliminations: Vec::new(),
        akns: Vec::new(),
        connections: Vec::new(),
        evolution: EvolutionSystem::new(),
        defaults: Vec::new(),
    };
    for stmt in &file.stmts {
        match &stmt.kind {
            StmtKind::Coordinates(v) | StmtKind::Dependent(v) | StmtKind::Param(v) => {
                e.visible.extend(v.iter().cloned());
            }
            StmtKind::Independent(x, t) => {
                e.visible.insert(x.clone());
                e.visible.insert(t.clone());
            }
            StmtKind::Generator { name, .. } => {
                e.visible.insert(name.clone());
            }
            StmtKind::Rule { name, rhs } => e.rule(name, rhs, stmt.pos)?,
            StmtKind::Let(b) => {
                e.fresh(&b.name, b.pos)?;
                let v = e.eval(&b.value)?;
                e.lets.push((b.name.clone(), v));
            }
            StmtKind::Ideal { name, generators } => {
                let ideal = e.ideal(generators, stmt.pos)?;
                model.ideals.push((name.clone(), ideal));
            }
            StmtKind::Eliminate(b) => {
                let rhs = e.eliminate(b)?;
                model.eliminations.push((b.name.clone(), rhs));
            }
            StmtKind::Akns { name, fields } => model.akns.push(e.akns(name, fields, stmt.pos)?),
            StmtKind::Connection { name, fields } => {
                model.connections.push((name.clone(), e.connection(fields, stmt.pos)?));
            }
            StmtKind::Evolution(b) => {
                let Chart::Jet { dependent } = &chart else {
                    return Err(DslError::model(b.pos, "evolution laws need `independent x, t`"));
                };
                if !dependent.contains(&b.name) {
                    return Err(DslError::unknown(b.pos, &b.name));
                }
                let rhs = e.scalar(&b.value)?;
                model.evolution.insert(&b.name, rhs).map_err(|err| DslError::engine(b.pos, err))?;
            }
            StmtKind::Default(b) => {
                let v = e.scalar(&b.value)?;
                if !v.is_constant() {
                    return Err(DslError::model(b.value.pos, "default values must be constants"));
                }
                model.defaults.push((b.name.clone(), v));
            }
        }
    }
    model.ctx = e.ctx;
    model.lets = e.lets;
    Ok(model)
}

struct Declarations {
    coordinates: Option<Vec<String>>,
    independent: Option<(String, String)>,
    dependent: Vec<String>,
    params: Vec<String>,
    generators: Vec<(String, u32)>,
}

impl Declarations {
    fn collect(file: &ModelFile) -> Result<Self, DslError> {
        let mut d = Declarations {
            coordinates: None,
            independent: None,
            dependent: Vec::new(),
            params: Vec::new(),
            generators: Vec::new(),
        };
        let mut seen: BTreeSet<String> = BTreeSet::new();
        let mut claim = |n: &str, pos: Pos| -> Result<(), DslError> {
            if RESERVED.contains(&n) {
                return Err(DslError::model(pos, format!("`{n}` is reserved")));
            }
            if !seen.insert(n.to_string()) {
                return Err(DslError::model(pos, format!("`{n}` is declared twice")));
            }
            Ok(())
        };
        for stmt in &file.stmts {
            let pos = stmt.pos;
            match &stmt.kind {
                StmtKind::Coordinates(v) => {
                    if d.coordinates.is_some() || d.independent.is_some() {
                        return Err(DslError::model(pos, "only one chart declaration is allowed"));
                    }
                    for n in v {
                        claim(n, pos)?;
                    }
                    d.coordinates = Some(v.clone());
                }
                StmtKind::Independent(x, t) => {
                    if d.coordinates.is_some() || d.independent.is_some() {
                        return Err(DslError::model(pos, "only one chart declaration is allowed"));
                    }
                    if x != "x" || t != "t" {
                        return Err(DslError::model(pos, "the independent variables must be `x, t`"));
                    }
                    claim(x, pos)?;
                    claim(t, pos)?;
                    d.independent = Some((x.clone(), t.clone()));
                }
                StmtKind::Dependent(v) => {
                    for n in v {
                        claim(n, pos)?;
                        d.dependent.push(n.clone());
                    }
                }
                StmtKind::Param(v) => {
                    for n in v {
                        claim(n, pos)?;
                        d.params.push(n.clone());
                    }
                }
                StmtKind::Generator { name, degree } => {
                    claim(name, pos)?;
                    d.generators.push((name.clone(), *degree));
                }
                _ => {}
            }
        }
        if !d.dependent.is_empty() && d.independent.is_none() {
            let pos = file.stmts.iter().find(|s| matches!(s.kind, StmtKind::Dependent(_))).map(|s| s.pos);
            return Err(DslError::model(pos.unwrap_or_default(), "dependent variables need `independent x, t`"));
        }
        let mut differentials = BTreeSet::new();
        for c in d.chart_differentials() {
            differentials.insert(format!("d{c}"));
        }
        for stmt in &file.stmts {
            if let StmtKind::Generator { name, .. } = &stmt.kind {
                if differentials.contains(name) {
                    return Err(DslError::model(stmt.pos, format!("`{name}` clashes with a coordinate differential")));
                }
            }
        }
        Ok(d)
    }

    fn chart_differentials(&self) -> Vec<String> {
        match (&self.coordinates, &self.independent) {
            (Some(c), _) => c.clone(),
            (None, Some((x, t))) => vec![x.clone(), t.clone()],
            _ => Vec::new(),
        }
    }

    fn context(&self) -> (DerivationContext, Chart) {
        let mut b = Basis::builder();
        let diffs: Vec<_> = self.chart_differentials().iter().map(|c| b.generator(&format!("d{c}"), 1)).collect();
        for (n, deg) in &self.generators {
            b.generator(n, *deg);
        }
        let basis = b.build();
        match (&self.coordinates, &self.independent) {
            (Some(coords), _) => {
                let map = coords
                    .iter()
                    .zip(&diffs)
                    .map(|(c, g)| (Symbol::named(c.as_str()), Form::generator(&basis, *g)))
                    .collect();
                (DerivationContext::new(basis, ScalarDifferential::Symbols(map)), Chart::Coordinates(coords.clone()))
            }
            (None, Some(_)) => (
                DerivationContext::new(basis, ScalarDifferential::Jet { dx: diffs[0], dt: diffs[1] }),
                Chart::Jet { dependent: self.dependent.clone() },
            ),
            _ => (DerivationContext::new(basis, ScalarDifferential::Symbols(BTreeMap::new())), Chart::Free),
        }
    }

    fn is_coordinate(&self, n: &str) -> bool {
        self.coordinates.as_ref().is_some_and(|c| c.iter().any(|c| c == n))
    }

    fn is_independent(&self, n: &str) -> bool {
        self.independent.as_ref().is_some_and(|(x, t)| x == n || t == n)
    }
}

struct Elaborator<'a> {
    decl: Declarations,
    bind: &'a BTreeMap<String, Scalar>,
    ctx: DerivationContext,
    visible: BTreeSet<String>,
    lets: Vec<(String, Value)>,
    ruled: BTreeSet<String>,
    local: BTreeMap<String, Scalar>,
}

fn integer(n: &BigInt) -> Scalar {
    Scalar::constant(GaussRat::from_rational(BigRational::from_integer(n.clone())))
}

/// Split `u_xxt` into `("u", 2, 1)`.
fn split_jet(name: &str) -> Option<(&str, u32, u32)> {
    let (base, suffix) = name.rsplit_once('_')?;
    if base.is_empty() || suffix.is_empty() {
        return None;
    }
    let nx = suffix.chars().take_while(|c| *c == 'x').count();
    let rest = &suffix[nx..];
    if !rest.chars().all(|c| c == 't') {
        return None;
    }
    Some((base, nx as u32, rest.len() as u32))
}

impl Elaborator<'_> {
    fn fresh(&self, name: &str, pos: Pos) -> Result<(), DslError> {
        if RESERVED.contains(&name) {
            return Err(DslError::model(pos, format!("`{name}` is reserved")));
        }
        if self.visible.contains(name) || self.lets.iter().any(|(n, _)| n == name) {
            return Err(DslError::model(pos, format!("`{name}` is already defined")));
        }
        Ok(())
    }

    fn visible(&self, n: &str) -> bool {
        self.visible.contains(n)
    }

    fn resolve(&self, n: &str, pos: Pos) -> Result<Value, DslError> {
        if let Some(s) = self.local.get(n) {
            return Ok(Value::Scalar(s.clone()));
        }
        if let Some((_, v)) = self.lets.iter().rev().find(|(m, _)| m == n) {
            return Ok(v.clone());
        }
        if self.visible(n) {
            if self.decl.params.iter().any(|p| p == n) {
                return Ok(Value::Scalar(self.bind.get(n).cloned().unwrap_or_else(|| Scalar::named(n))));
            }
            if self.decl.is_coordinate(n) || self.decl.is_independent(n) {
                return Ok(Value::Scalar(Scalar::named(n)));
            }
            if self.decl.dependent.iter().any(|d| d == n) {
                return Ok(Value::Scalar(jet::dependent(n)));
            }
            if let Some(g) = self.ctx.generator(n) {
                return Ok(Value::Form(g));
            }
        }
        if let Some((base, x, t)) = split_jet(n) {
            let jet_base = self.decl.dependent.iter().any(|d| d == base)
                || (self.decl.is_coordinate(base) && base != "x" && base != "t");
            if jet_base && self.visible(base) {
                return Ok(Value::Scalar(Scalar::symbol(Symbol::jet(base, x, t))));
            }
        }
        if let Some(c) = n.strip_prefix('d') {
            if self.visible(c) && self.decl.chart_differentials().iter().any(|d| d == c) {
                return Ok(Value::Form(self.ctx.gen(n)));
            }
        }
        Err(DslError::unknown(pos, n))
    }

    fn to_form(&self, v: Value) -> Form {
        match v {
            Value::Scalar(s) => self.ctx.scalar(s),
            Value::Form(f) => f,
        }
    }

    fn scalar(&mut self, e: &Expr) -> Result<Scalar, DslError> {
        let v = self.eval(e)?;
        v.as_scalar().ok_or_else(|| DslError::model(e.pos, format!("expected a scalar, found a {}-form", v.degree())))
    }

    fn eval(&mut self, e: &Expr) -> Result<Value, DslError> {
        let pos = e.pos;
        let engine = |err: crate::coeff::CoeffError| DslError::engine(pos, err);
        Ok(match &e.kind {
            ExprKind::Int(n) => Value::Scalar(integer(n)),
            ExprKind::Imag => Value::Scalar(Scalar::i()),
            ExprKind::Ident(n) => self.resolve(n, pos)?,
            ExprKind::Neg(a) => match self.eval(a)? {
                Value::Scalar(s) => Value::Scalar(-s),
                Value::Form(f) => Value::Form(-f),
            },
            ExprKind::Bin(op, a, b) => {
                let (l, r) = (self.eval(a)?, self.eval(b)?);
                match (op, l, r) {
                    (BinOp::Add, Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x + &y),
                    (BinOp::Sub, Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x - &y),
                    (BinOp::Mul | BinOp::Wedge, Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x * &y),
                    (BinOp::Add | BinOp::Sub, l, r) => {
                        let (dl, dr) = (l.degree(), r.degree());
                        let (l, mut r) = (self.to_form(l), self.to_form(r));
                        if *op == BinOp::Sub {
                            r = -r;
                        }
                        Value::Form(l.try_add(&r).ok_or(DslError::degree(pos, dl, dr))?)
                    }
                    (BinOp::Mul, Value::Scalar(s), Value::Form(f)) | (BinOp::Mul, Value::Form(f), Value::Scalar(s)) => {
                        Value::Form(f.scale(&s))
                    }
                    (BinOp::Mul, Value::Form(f), Value::Form(g)) => {
                        if f.degree() > 0 && g.degree() > 0 {
                            return Err(DslError::model(pos, "`*` multiplies by scalars; use `^` between forms"));
                        }
                        Value::Form(f.wedge(&g))
                    }
                    (BinOp::Wedge, l, r) => Value::Form(self.to_form(l).wedge(&self.to_form(r))),
                    (BinOp::Div, l, r) => {
                        let den = r
                            .as_scalar()
                            .ok_or_else(|| DslError::model(pos, "division by a form of positive degree"))?;
                        if den.is_zero() {
                            return Err(DslError::model(pos, "division by zero"));
                        }
                        match l {
                            Value::Scalar(s) => Value::Scalar(s.checked_div(&den).map_err(engine)?),
                            Value::Form(f) => Value::Form(f.scale(&den.inv().map_err(engine)?)),
                        }
                    }
                }
            }
            ExprKind::Pow(b, n) => {
                let s = self.scalar(b)?;
                if s.is_zero() && *n < 0 {
                    return Err(DslError::model(pos, "division by zero"));
                }
                Value::Scalar(s.pow(*n).map_err(engine)?)
            }
            ExprKind::D(a) => match self.eval(a)? {
                Value::Scalar(s) => Value::Form(self.ctx.d_scalar(&s)),
                Value::Form(f) => Value::Form(self.ctx.d(&f)),
            },
            ExprKind::Exp(a) => {
                let s = self.scalar(a)?;
                Value::Scalar(Scalar::exp(&s).map_err(engine)?)
            }
            ExprKind::Matrix(_) => return Err(DslError::model(pos, "a matrix is only allowed in a connection block")),
        })
    }

    fn rule(&mut self, name: &str, rhs: &Expr, pos: Pos) -> Result<(), DslError> {
        let g = match self.ctx.basis().id(name) {
            Some(g) if self.visible(name) && self.decl.generators.iter().any(|(n, _)| n == name) => g,
            _ => return Err(DslError::unknown(pos, name)),
        };
        if !self.ruled.insert(name.to_string()) {
            return Err(DslError::model(pos, format!("`d({name})` is given twice")));
        }
        let v = self.eval(rhs)?;
        let want = self.ctx.basis().degree(g) + 1;
        let f = self.to_form(v);
        if !f.is_zero() && f.degree() != want {
            return Err(DslError::degree(rhs.pos, want, f.degree()));
        }
        self.ctx = self.ctx.clone().with_rule(g, f).map_err(|err| DslError::engine(rhs.pos, err))?;
        Ok(())
    }

    fn ideal(&mut self, generators: &[Binding], pos: Pos) -> Result<ExteriorIdeal, DslError> {
        let Some(coords) = self.decl.coordinates.clone() else {
            return Err(DslError::model(pos, "an ideal needs a `coordinates` chart"));
        };
        let names: Vec<&str> = coords.iter().map(String::as_str).collect();
        let mut ideal = ExteriorIdeal::new(&names);
        if ideal.basis() != self.ctx.basis() {
            return Err(DslError::model(pos, "an ideal cannot mix coordinates with abstract generators"));
        }
        for p in &self.decl.params {
            if !self.bind.contains_key(p) && self.visible(p) {
                ideal = ideal.with_param(p);
            }
        }
        let mut seen = BTreeSet::new();
        for b in generators {
            if !seen.insert(b.name.clone()) {
                return Err(DslError::model(b.pos, format!("`{}` is listed twice", b.name)));
            }
            let f = self.eval(&b.value)?;
            if f.degree() == 0 {
                return Err(DslError::model(b.value.pos, "ideal generators must be forms of positive degree"));
            }
            let f = self.to_form(f);
            // the ideal owns an equal copy of the basis
            let f = rebase(&f, ideal.basis());
            ideal = ideal.with_generator(&b.name, f);
        }
        Ok(ideal)
    }

    fn jets_of_coordinates(&self, s: &Scalar, pos: Pos) -> Result<Scalar, DslError> {
        let map: BTreeMap<Symbol, Scalar> = self
            .decl
            .coordinates
            .iter()
            .flatten()
            .filter(|c| c.as_str() != "x" && c.as_str() != "t")
            .map(|c| (Symbol::named(c.as_str()), jet::dependent(c)))
            .collect();
        s.substitute(&map).map_err(|err| DslError::engine(pos, err))
    }

    fn eliminate(&mut self, b: &Binding) -> Result<Scalar, DslError> {
        let ok = (self.decl.is_coordinate(&b.name) && b.name != "x" && b.name != "t")
            || self.decl.dependent.contains(&b.name);
        if !ok || !self.visible(&b.name) {
            return Err(DslError::unknown(b.pos, &b.name));
        }
        let rhs = self.scalar(&b.value)?;
        self.jets_of_coordinates(&rhs, b.value.pos)
    }

    fn akns(&mut self, name: &str, fields: &[Binding], pos: Pos) -> Result<AknsSpec, DslError> {
        if !matches!(self.decl.independent, Some(_)) {
            return Err(DslError::model(pos, "an akns block needs `independent x, t`"));
        }
        let eta = Symbol::named("eta");
        self.local.insert("eta".into(), self.bind.get("eta").cloned().unwrap_or_else(|| Scalar::symbol(eta.clone())));
        let mut got: BTreeMap<&str, (Scalar, Pos)> = BTreeMap::new();
        let r = (|| {
            for b in fields {
                let key = match b.name.as_str() {
                    k @ ("r" | "q" | "A" | "B" | "C") => k,
                    other => return Err(DslError::model(b.pos, format!("unknown akns field `{other}`"))),
                };
                if got.contains_key(key) {
                    return Err(DslError::model(b.pos, format!("field `{key}` is given twice")));
                }
                let v = self.scalar(&b.value)?;
                got.insert(key, (v, b.value.pos));
            }
            Ok(())
        })();
        self.local.clear();
        r?;
        let mut take = |k: &str| {
            got.remove(k).ok_or_else(|| DslError::model(pos, format!("akns block `{name}` is missing `{k}`")))
        };
        let (r, _) = take("r")?;
        let (q, _) = take("q")?;
        let mut laurent = |k: &str| -> Result<LaurentInEta, DslError> {
            let (s, p) = take(k)?;
            LaurentInEta::from_scalar(&s, &eta).map_err(|err| DslError::engine(p, err))
        };
        let (a, b, c) = (laurent("A")?, laurent("B")?, laurent("C")?);
        let spec = AknsSpec::new(name, r, q, a, b, c);
        spec.check().map_err(|err| DslError::engine(pos, err))?;
        Ok(spec)
    }

    fn connection(&mut self, fields: &[Binding], pos: Pos) -> Result<ConnectionData, DslError> {
        let mut f = None;
        let mut g = None;
        for b in fields {
            let slot = match b.name.as_str() {
                "F" => &mut f,
                "G" => &mut g,
                other => return Err(DslError::model(b.pos, format!("unknown connection field `{other}`"))),
            };
            if slot.is_some() {
                return Err(DslError::model(b.pos, format!("field `{}` is given twice", b.name)));
            }
            let ExprKind::Matrix(rows) = &b.value.kind else {
                return Err(DslError::model(b.value.pos, "expected a matrix `[[..], ..]`"));
            };
            let mut m = Vec::new();
            for row in rows {
                let mut out = Vec::new();
                for e in row {
                    out.push(self.scalar(e)?);
                }
                m.push(out);
            }
            *slot = Some(m);
        }
        let (Some(f), Some(g)) = (f, g) else {
            return Err(DslError::model(pos, "a connection needs both `F` and `G`"));
        };
        ConnectionData::new(f, g).map_err(|err| DslError::engine(pos, err))
    }
}

fn rebase(f: &Form, basis: &std::sync::Arc<Basis>) -> Form {
    let mut out = Form::zero(basis, f.degree());
    for (mono, c) in f.terms() {
        out = &out + &Form::monomial(basis, mono.to_vec(), c.clone());
    }
    out
}
