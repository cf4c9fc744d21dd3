use num_traits::ToPrimitive;

use super::ast::{BinOp, Binding, Expr, ExprKind, ModelFile, Stmt, StmtKind};
use super::lexer::{tokenize, Tok, Token};
use super::{DslError, Pos};

/// Largest exponent accepted after `**`.
pub const MAX_EXPONENT: i64 = 64;

const MAX_DEPTH: usize = 200;

pub fn parse(src: &str) -> Result<ModelFile, DslError> {
    let mut p = Parser { toks: tokenize(src)?, at: 0, depth: 0 };
    let mut stmts = Vec::new();
    loop {
        p.skip_newlines();
        if p.peek() == &Tok::Eof {
            break;
        }
        stmts.push(p.stmt()?);
    }
    Ok(ModelFile { stmts })
}

/// A single expression (used for command-line values and tests).
pub fn parse_expr(src: &str) -> Result<Expr, DslError> {
    let mut p = Parser { toks: tokenize(src)?, at: 0, depth: 0 };
    let e = p.expr()?;
    p.skip_newlines();
    p.expect(&Tok::Eof)?;
    Ok(e)
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].pos
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.next();
            true
        } else {
            false
        }
    }

    fn unexpected<T>(&self, what: &str) -> Result<T, DslError> {
        Err(DslError::syntax(self.pos(), format!("expected {what}, found {}", self.peek())))
    }

    fn expect(&mut self, t: &Tok) -> Result<(), DslError> {
        if self.eat(t) {
            Ok(())
        } else {
            self.unexpected(&t.to_string())
        }
    }

    fn skip_newlines(&mut self) {
        while self.eat(&Tok::Newline) {}
    }

    fn end_of_line(&mut self) -> Result<(), DslError> {
        match self.peek() {
            Tok::Newline => {
                self.next();
                Ok(())
            }
            Tok::Eof => Ok(()),
            _ => self.unexpected("end of line"),
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), DslError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(n) => {
                self.next();
                Ok((n, pos))
            }
            _ => self.unexpected("a name"),
        }
    }

    fn ident_list(&mut self) -> Result<Vec<String>, DslError> {
        let mut v = vec![self.ident()?.0];
        while self.eat(&Tok::Comma) {
            v.push(self.ident()?.0);
        }
        Ok(v)
    }

    fn binding(&mut self) -> Result<Binding, DslError> {
        let (name, pos) = self.ident()?;
        self.expect(&Tok::Eq)?;
        let value = self.expr()?;
        Ok(Binding { name, value, pos })
    }

    fn block(&mut self) -> Result<(String, Vec<Binding>), DslError> {
        let (name, _) = self.ident()?;
        self.end_of_line()?;
        let mut items = Vec::new();
        loop {
            self.skip_newlines();
            if let Tok::Ident(k) = self.peek() {
                if k == "end" {
                    self.next();
                    self.end_of_line()?;
                    return Ok((name, items));
                }
            }
            if self.peek() == &Tok::Eof {
                return self.unexpected("`end`");
            }
            items.push(self.binding()?);
            self.end_of_line()?;
        }
    }

    fn stmt(&mut self) -> Result<Stmt, DslError> {
        let (head, pos) = self.ident()?;
        let kind = match head.as_str() {
            "coordinates" => StmtKind::Coordinates(self.ident_list()?),
            "independent" => {
                let x = self.ident()?.0;
                self.expect(&Tok::Comma)?;
                StmtKind::Independent(x, self.ident()?.0)
            }
            "dependent" => StmtKind::Dependent(self.ident_list()?),
            "param" => StmtKind::Param(self.ident_list()?),
            "generator" => {
                let name = self.ident()?.0;
                self.expect(&Tok::Colon)?;
                let dpos = self.pos();
                let degree = match self.next().tok {
                    Tok::Int(n) => n.to_u32().filter(|d| *d <= 16),
                    _ => None,
                };
                let degree = degree.ok_or_else(|| DslError::syntax(dpos, "expected a degree between 0 and 16"))?;
                StmtKind::Generator { name, degree }
            }
            "rule" => {
                match self.ident()? {
                    (d, _) if d == "d" => {}
                    (_, p) => return Err(DslError::syntax(p, "expected `d(` after `rule`")),
                }
                self.expect(&Tok::LParen)?;
                let name = self.ident()?.0;
                self.expect(&Tok::RParen)?;
                self.expect(&Tok::Eq)?;
                StmtKind::Rule { name, rhs: self.expr()? }
            }
            "let" => StmtKind::Let(self.binding()?),
            "eliminate" => StmtKind::Eliminate(self.binding()?),
            "default" => StmtKind::Default(self.binding()?),
            "evolution" => {
                let mut b = self.binding()?;
                match b.name.strip_suffix("_t") {
                    Some(v) if !v.is_empty() => b.name = v.to_string(),
                    _ => return Err(DslError::syntax(b.pos, "evolution needs a left side of the form `u_t`")),
                }
                StmtKind::Evolution(b)
            }
            "ideal" | "akns" | "connection" => {
                let (name, items) = self.block()?;
                let kind = match head.as_str() {
                    "ideal" => StmtKind::Ideal { name, generators: items },
                    "akns" => StmtKind::Akns { name, fields: items },
                    _ => StmtKind::Connection { name, fields: items },
                };
                return Ok(Stmt { kind, pos });
            }
            other => return Err(DslError::syntax(pos, format!("unknown statement `{other}`"))),
        };
        self.end_of_line()?;
        Ok(Stmt { kind, pos })
    }

    pub fn expr(&mut self) -> Result<Expr, DslError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(DslError::syntax(self.pos(), "expression nested too deeply"));
        }
        let r = self.sum();
        self.depth -= 1;
        r
    }

    fn sum(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            let pos = self.next().pos;
            let rhs = self.operand(op)?;
            lhs = Expr::new(ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)), pos);
        }
    }

    fn product(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                Tok::Caret => BinOp::Wedge,
                _ => return Ok(lhs),
            };
            let pos = self.next().pos;
            let rhs = self.operand(op)?;
            lhs = Expr::new(ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)), pos);
        }
    }

    fn operand(&mut self, op: BinOp) -> Result<Expr, DslError> {
        let sym = match op {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Wedge => "^",
        };
        if matches!(self.peek(), Tok::Newline | Tok::Eof | Tok::RParen | Tok::RBracket | Tok::Comma) {
            return Err(DslError::syntax(self.pos(), format!("dangling `{sym}`: expected an operand")));
        }
        if matches!(op, BinOp::Add | BinOp::Sub) {
            self.product()
        } else {
            self.unary()
        }
    }

    fn unary(&mut self) -> Result<Expr, DslError> {
        if self.peek() == &Tok::Minus {
            let pos = self.next().pos;
            self.depth += 1;
            if self.depth > MAX_DEPTH {
                return Err(DslError::syntax(pos, "expression nested too deeply"));
            }
            let e = self.unary();
            self.depth -= 1;
            return Ok(Expr::new(ExprKind::Neg(Box::new(e?)), pos));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, DslError> {
        let base = self.atom()?;
        if self.peek() != &Tok::StarStar {
            return Ok(base);
        }
        let pos = self.next().pos;
        let neg = self.eat(&Tok::Minus);
        let epos = self.pos();
        let n = match self.next().tok {
            Tok::Int(n) => n.to_i64().filter(|n| *n <= MAX_EXPONENT),
            _ => return Err(DslError::syntax(epos, "expected an integer exponent after `**`")),
        };
        let n = n.ok_or_else(|| DslError::syntax(epos, format!("exponent larger than {MAX_EXPONENT}")))?;
        Ok(Expr::new(ExprKind::Pow(Box::new(base), if neg { -n } else { n }), pos))
    }

    fn call(&mut self) -> Result<Expr, DslError> {
        self.expect(&Tok::LParen)?;
        let e = self.expr()?;
        self.expect(&Tok::RParen)?;
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, DslError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                Ok(Expr::new(ExprKind::Int(n), pos))
            }
            Tok::Ident(n) => {
                self.next();
                let followed_by_paren = self.peek() == &Tok::LParen;
                let kind = match n.as_str() {
                    "i" => ExprKind::Imag,
                    "d" if followed_by_paren => ExprKind::D(Box::new(self.call()?)),
                    "exp" if followed_by_paren => ExprKind::Exp(Box::new(self.call()?)),
                    _ => ExprKind::Ident(n),
                };
                Ok(Expr::new(kind, pos))
            }
            Tok::LParen => {
                self.next();
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            Tok::LBracket => {
                self.next();
                let mut rows = Vec::new();
                loop {
                    self.expect(&Tok::LBracket)?;
                    let mut row = vec![self.expr()?];
                    while self.eat(&Tok::Comma) {
                        row.push(self.expr()?);
                    }
                    self.expect(&Tok::RBracket)?;
                    rows.push(row);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(&Tok::RBracket)?;
                Ok(Expr::new(ExprKind::Matrix(rows), pos))
            }
            _ => self.unexpected("an expression"),
        }
    }
}
