//! Element and set arguments, including the built-in names.

use fgroup::cogen::{obstructed_pair, obstructed_triple};
use fgroup::{BinaryWord, Element};

pub const BUILTINS: [&str; 4] = ["@paper-triple", "@paper-pair", "@x0", "@x1"];

fn builtin_set(name: &str) -> Option<Vec<Element>> {
    match name {
        "@paper-triple" => Some(obstructed_triple()),
        "@paper-pair" => Some(obstructed_pair()),
        "@x0" => Some(vec![Element::x0()]),
        "@x1" => Some(vec![Element::x1()]),
        _ => None,
    }
}

fn unknown(name: &str) -> String {
    format!(
        "unknown built-in {name:?}; expected one of {}",
        BUILTINS.join(", ")
    )
}

/// One element: an expression or `@x0` / `@x1`.
pub fn element(text: &str) -> Result<Element, String> {
    let text = text.trim();
    if text.starts_with('@') {
        return match builtin_set(text) {
            Some(mut set) if set.len() == 1 => Ok(set.remove(0)),
            Some(_) => Err(format!("{text} names a set, not a single element")),
            None => Err(unknown(text)),
        };
    }
    fgroup::parse(text).map_err(|e| format!("{text:?}: {e}"))
}

/// A `;`-separated list; built-in sets expand in place.
pub fn set(text: &str) -> Result<Vec<Element>, String> {
    let mut out = Vec::new();
    for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        if item.starts_with('@') {
            out.extend(builtin_set(item).ok_or_else(|| unknown(item))?);
        } else {
            let e = fgroup::parse(item)
                .map_err(|e| format!("element {} ({item:?}): {e}", out.len() + 1))?;
            out.push(e);
        }
    }
    if out.is_empty() {
        return Err("the set is empty".into());
    }
    Ok(out)
}

pub fn word(text: &str) -> Result<BinaryWord, String> {
    text.parse().map_err(|e| format!("{text:?}: {e}"))
}
