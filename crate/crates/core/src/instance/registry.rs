use std::collections::BTreeMap;
use std::path::Path;

use super::InstanceError;

/// Known optimal tour costs by instance name.
///
/// Text format: one `name cost` pair per line, whitespace separated;
/// blank lines and anything after `#` are ignored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OptimaRegistry {
    optima: BTreeMap<String, i64>,
}

impl OptimaRegistry {
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let mut optima = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let malformed = |message: &str| InstanceError::MalformedRegistry {
                line: idx + 1,
                message: message.to_string(),
            };
            let mut fields = line.split_whitespace();
            let name = fields.next().ok_or_else(|| malformed("missing name"))?;
            let cost: i64 = fields
                .next()
                .ok_or_else(|| malformed("missing cost"))?
                .parse()
                .map_err(|_| malformed("cost is not an integer"))?;
            if fields.next().is_some() {
                return Err(malformed("trailing fields"));
            }
            if cost <= 0 {
                return Err(malformed("optimal cost must be positive"));
            }
            optima.insert(name.to_string(), cost);
        }
        Ok(Self { optima })
    }

    pub fn load(path: &Path) -> std::io::Result<Result<Self, InstanceError>> {
        Ok(Self::parse(&std::fs::read_to_string(path)?))
    }

    pub fn insert(&mut self, name: impl Into<String>, cost: i64) {
        self.optima.insert(name.into(), cost);
    }

    pub fn get(&self, name: &str) -> Option<i64> {
        self.optima.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.optima.len()
    }

    pub fn is_empty(&self) -> bool {
        self.optima.is_empty()
    }
}
