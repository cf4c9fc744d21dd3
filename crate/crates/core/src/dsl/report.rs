use std::fmt;

use serde::Serialize;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    /// The stated form fails, a corrected reading holds.
    Corrected,
    /// A check left a nonzero remainder.
    Residual,
    Failed,
    /// Computed output, nothing to check.
    Info,
}

impl Status {
    pub fn is_failure(self) -> bool {
        matches!(self, Status::Residual | Status::Failed)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::Corrected => "corrected",
            Status::Residual => "residual",
            Status::Failed => "failed",
            Status::Info => "info",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Field {
    pub key: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Item {
    pub name: String,
    pub status: Status,
    pub fields: Vec<Field>,
}

impl Item {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        Item { name: name.into(), status, fields: Vec::new() }
    }

    pub fn field(mut self, key: impl Into<String>, value: impl fmt::Display) -> Self {
        self.fields.push(Field { key: key.into(), value: value.to_string() });
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|f| f.key == key).map(|f| f.value.as_str())
    }
}

/// Outcome of one command. Timing is kept out so that reruns are
/// byte-identical.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: Vec<String>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub peak_jet_order: Option<u32>,
    pub items: Vec<Item>,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report { schema: SCHEMA, command, passed: true, peak_jet_order: None, items: Vec::new() }
    }

    pub fn push(&mut self, item: Item) {
        if item.status.is_failure() {
            self.passed = false;
        }
        self.items.push(item);
    }

    pub fn peak(&mut self, order: u32) {
        self.peak_jet_order = Some(self.peak_jet_order.map_or(order, |p| p.max(order)));
    }

    pub fn item(&self, name: &str) -> Option<&Item> {
        self.items.iter().find(|i| i.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "$ prolong {}", self.command.join(" "))?;
        for item in &self.items {
            writeln!(f, "[{}] {}", item.status.as_str(), item.name)?;
            for fld in &item.fields {
                writeln!(f, "    {}: {}", fld.key, fld.value)?;
            }
        }
        if let Some(p) = self.peak_jet_order {
            writeln!(f, "peak jet order: {p}")?;
        }
        writeln!(f, "result: {}", if self.passed { "pass" } else { "FAIL" })
    }
}
