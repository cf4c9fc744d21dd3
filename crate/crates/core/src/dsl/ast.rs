use std::fmt;

use num_bigint::BigInt;

use super::Pos;

/// Expression node; equality ignores source positions.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Expr {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Wedge,
}

impl BinOp {
    fn prec(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div | BinOp::Wedge => 2,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => " + ",
            BinOp::Sub => " - ",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Wedge => " ^ ",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Int(BigInt),
    Imag,
    Ident(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    D(Box<Expr>),
    Exp(Box<Expr>),
    Matrix(Vec<Vec<Expr>>),
}

impl Expr {
    pub fn new(kind: ExprKind, pos: Pos) -> Self {
        Expr { kind, pos }
    }

    fn prec(&self) -> u8 {
        match &self.kind {
            ExprKind::Bin(op, _, _) => op.prec(),
            ExprKind::Neg(_) => 3,
            ExprKind::Pow(..) => 4,
            _ => 5,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            f.write_str("(")?;
            self.write(f, 0)?;
            return f.write_str(")");
        }
        match &self.kind {
            ExprKind::Int(n) => write!(f, "{n}"),
            ExprKind::Imag => f.write_str("i"),
            ExprKind::Ident(n) => f.write_str(n),
            ExprKind::Neg(e) => {
                f.write_str("-")?;
                e.write(f, 3)
            }
            ExprKind::Bin(op, l, r) => {
                l.write(f, op.prec())?;
                f.write_str(op.symbol())?;
                r.write(f, op.prec() + 1)
            }
            ExprKind::Pow(b, e) => {
                b.write(f, 5)?;
                write!(f, "**{e}")
            }
            ExprKind::D(e) => {
                f.write_str("d(")?;
                e.write(f, 0)?;
                f.write_str(")")
            }
            ExprKind::Exp(e) => {
                f.write_str("exp(")?;
                e.write(f, 0)?;
                f.write_str(")")
            }
            ExprKind::Matrix(rows) => {
                f.write_str("[")?;
                for (i, row) in rows.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str("[")?;
                    for (j, e) in row.iter().enumerate() {
                        if j > 0 {
                            f.write_str(", ")?;
                        }
                        e.write(f, 0)?;
                    }
                    f.write_str("]")?;
                }
                f.write_str("]")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

/// `name = value` inside a block.
#[derive(Debug, Clone)]
pub struct Binding {
    pub name: String,
    pub value: Expr,
    pub pos: Pos,
}

impl PartialEq for Binding {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.value == other.value
    }
}

impl Eq for Binding {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    Coordinates(Vec<String>),
    Independent(String, String),
    Dependent(Vec<String>),
    Param(Vec<String>),
    Generator { name: String, degree: u32 },
    Rule { name: String, rhs: Expr },
    Let(Binding),
    Ideal { name: String, generators: Vec<Binding> },
    Eliminate(Binding),
    Akns { name: String, fields: Vec<Binding> },
    Connection { name: String, fields: Vec<Binding> },
    Evolution(Binding),
    Default(Binding),
}

#[derive(Debug, Clone)]
pub struct Stmt {
    pub kind: StmtKind,
    pub pos: Pos,
}

impl PartialEq for Stmt {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Stmt {}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModelFile {
    pub stmts: Vec<Stmt>,
}

fn block(f: &mut fmt::Formatter<'_>, head: &str, name: &str, items: &[Binding]) -> fmt::Result {
    writeln!(f, "{head} {name}")?;
    for b in items {
        writeln!(f, "  {} = {}", b.name, b.value)?;
    }
    f.write_str("end")
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            StmtKind::Coordinates(v) => write!(f, "coordinates {}", v.join(", ")),
            StmtKind::Independent(x, t) => write!(f, "independent {x}, {t}"),
            StmtKind::Dependent(v) => write!(f, "dependent {}", v.join(", ")),
            StmtKind::Param(v) => write!(f, "param {}", v.join(", ")),
            StmtKind::Generator { name, degree } => write!(f, "generator {name} : {degree}"),
            StmtKind::Rule { name, rhs } => write!(f, "rule d({name}) = {rhs}"),
            StmtKind::Let(b) => write!(f, "let {} = {}", b.name, b.value),
            StmtKind::Ideal { name, generators } => block(f, "ideal", name, generators),
            StmtKind::Eliminate(b) => write!(f, "eliminate {} = {}", b.name, b.value),
            StmtKind::Akns { name, fields } => block(f, "akns", name, fields),
            StmtKind::Connection { name, fields } => block(f, "connection", name, fields),
            StmtKind::Evolution(b) => write!(f, "evolution {}_t = {}", b.name, b.value),
            StmtKind::Default(b) => write!(f, "default {} = {}", b.name, b.value),
        }
    }
}

/// Canonical text: one statement per line, comments dropped.
impl fmt::Display for ModelFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stmts {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
