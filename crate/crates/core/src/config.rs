//! Flat `key = value` configuration blocks.
//!
//! Blank lines and lines starting with `#` are ignored. Keys are trimmed and
//! must be unique within a block.

use std::collections::BTreeMap;

use crate::{Error, Result};

pub fn parse_flat(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::domain("config", format!("line {}: expected `key = value`, got `{line}`", lineno + 1))
        })?;
        let key = k.trim().to_string();
        if key.is_empty() {
            return Err(Error::domain("config", format!("line {}: empty key", lineno + 1)));
        }
        if map.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(Error::domain("config", format!("duplicate key `{key}`")));
        }
    }
    Ok(map)
}

pub fn write_flat<'a>(entries: impl IntoIterator<Item = (&'a str, String)>) -> String {
    let mut out = String::new();
    for (k, v) in entries {
        out.push_str(k);
        out.push_str(" = ");
        out.push_str(&v);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_skips_comments() {
        let m = parse_flat("# hello\nkind = fr\n\n params=1,0.2 \n").unwrap();
        assert_eq!(m["kind"], "fr");
        assert_eq!(m["params"], "1,0.2");
    }

    #[test]
    fn rejects_duplicates_and_garbage() {
        assert!(parse_flat("a = 1\na = 2").is_err());
        assert!(parse_flat("no equals sign").is_err());
    }

    #[test]
    fn round_trip() {
        let text = write_flat([("seed", "7".to_string()), ("model", "iid".to_string())]);
        let m = parse_flat(&text).unwrap();
        assert_eq!(m["seed"], "7");
        assert_eq!(m["model"], "iid");
    }
}
