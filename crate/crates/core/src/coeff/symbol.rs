use std::fmt;
use std::sync::Arc;

/// A degree-0 symbol appearing in scalar coefficients.
///
/// Symbols are totally ordered by their structure: plain names sort
/// alphabetically, jet symbols by `(variable, x-order, t-order)` and
/// exponential atoms by their argument. The order drives the monomial order
/// of every polynomial, so printed output is reproducible.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<SymbolKind>);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    Named(String),
    /// `var` differentiated `x` times in x and `t` times in t.
    Jet { var: String, x: u32, t: u32 },
    /// The atom `exp(s)`; `s` is always a plain or jet symbol.
    Exp(Symbol),
}

impl Symbol {
    pub fn named(name: impl Into<String>) -> Self {
        Symbol(Arc::new(SymbolKind::Named(name.into())))
    }

    pub fn jet(var: impl Into<String>, x: u32, t: u32) -> Self {
        Symbol(Arc::new(SymbolKind::Jet { var: var.into(), x, t }))
    }

    pub fn exp_of(arg: &Symbol) -> Self {
        assert!(!matches!(arg.kind(), SymbolKind::Exp(_)), "nested exponential atom");
        Symbol(Arc::new(SymbolKind::Exp(arg.clone())))
    }

    pub fn kind(&self) -> &SymbolKind {
        &self.0
    }

    pub fn name(&self) -> Option<&str> {
        match self.kind() {
            SymbolKind::Named(n) => Some(n),
            _ => None,
        }
    }

    /// `(var, x, t)` for jet symbols.
    pub fn as_jet(&self) -> Option<(&str, u32, u32)> {
        match self.kind() {
            SymbolKind::Jet { var, x, t } => Some((var, *x, *t)),
            _ => None,
        }
    }

    pub fn exp_arg(&self) -> Option<&Symbol> {
        match self.kind() {
            SymbolKind::Exp(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_jet(&self) -> bool {
        self.as_jet().is_some()
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            SymbolKind::Named(n) => f.write_str(n),
            SymbolKind::Jet { var, x, t } => {
                f.write_str(var)?;
                if x + t > 0 {
                    f.write_str("_")?;
                    for _ in 0..*x {
                        f.write_str("x")?;
                    }
                    for _ in 0..*t {
                        f.write_str("t")?;
                    }
                }
                Ok(())
            }
            SymbolKind::Exp(s) => write!(f, "exp({s})"),
        }
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jet_order_is_by_variable_then_count() {
        let mut syms = vec![
            Symbol::jet("u", 2, 0),
            Symbol::jet("q", 1, 0),
            Symbol::jet("u", 0, 0),
            Symbol::jet("u", 1, 0),
        ];
        syms.sort();
        let names: Vec<_> = syms.iter().map(|s| s.to_string()).collect();
        assert_eq!(names, ["q_x", "u", "u_x", "u_xx"]);
    }

    #[test]
    fn display() {
        assert_eq!(Symbol::jet("u", 1, 1).to_string(), "u_xt");
        assert_eq!(Symbol::exp_of(&Symbol::named("y5")).to_string(), "exp(y5)");
    }
}
