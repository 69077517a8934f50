//! Shared helpers for the per-cluster JSONL side files (embeddings, scores).

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::de::{self, DeserializeOwned, Deserializer, Visitor};
use serde::Deserialize;

use crate::error::{Error, Result};

/// A float that also accepts string spellings (`"NaN"`, `"inf"`, `"0.5"`), so
/// non-finite values reach validation instead of failing as a parse error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LooseFloat(pub f64);

impl<'de> Deserialize<'de> for LooseFloat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct LooseVisitor;

        impl Visitor<'_> for LooseVisitor {
            type Value = LooseFloat;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a number or a numeric string")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<LooseFloat, E> {
                Ok(LooseFloat(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<LooseFloat, E> {
                Ok(LooseFloat(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<LooseFloat, E> {
                Ok(LooseFloat(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<LooseFloat, E> {
                v.trim()
                    .parse::<f64>()
                    .map(LooseFloat)
                    .map_err(|_| E::invalid_value(de::Unexpected::Str(v), &self))
            }
        }

        deserializer.deserialize_any(LooseVisitor)
    }
}

pub(crate) fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let value = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: idx + 1,
            message: format!("{}: {e}", path.display()),
        })?;
        out.push(value);
    }
    Ok(out)
}
