//! Number formatting and caption placeholder substitution.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::{Noun, Terminology};

/// A typed value computed for a slide.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FactValue {
    Int(i64),
    Real(f64),
    Text(String),
}

impl FactValue {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            FactValue::Int(i) => Some(*i as f64),
            FactValue::Real(r) => Some(*r),
            FactValue::Text(_) => None,
        }
    }

    pub fn render(&self) -> String {
        match self {
            FactValue::Int(i) => group_thousands(*i as i128),
            FactValue::Real(r) => format_real(*r),
            FactValue::Text(t) => t.clone(),
        }
    }
}

impl From<usize> for FactValue {
    fn from(v: usize) -> Self {
        FactValue::Int(v as i64)
    }
}

impl From<f64> for FactValue {
    fn from(v: f64) -> Self {
        FactValue::Real(v)
    }
}

impl From<String> for FactValue {
    fn from(v: String) -> Self {
        FactValue::Text(v)
    }
}

impl From<&str> for FactValue {
    fn from(v: &str) -> Self {
        FactValue::Text(v.to_string())
    }
}

pub fn group_thousands(v: i128) -> String {
    let digits = v.unsigned_abs().to_string();
    let mut out = String::with_capacity(digits.len() + digits.len() / 3 + 1);
    if v < 0 {
        out.push('-');
    }
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

/// Three significant digits; whole numbers print without decimals.
pub fn format_real(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == v.trunc() && v.abs() < 1e15 {
        return group_thousands(v as i128);
    }
    let magnitude = v.abs().log10().floor() as i32;
    if magnitude >= 2 {
        let scale = 10f64.powi(magnitude - 2);
        return group_thousands(((v / scale).round() * scale) as i128);
    }
    let decimals = (2 - magnitude) as usize;
    let s = format!("{v:.decimals$}");
    // rounding can carry into a new digit (9.995 -> 10.00)
    let rounded: f64 = s.parse().unwrap_or(v);
    if rounded != 0.0 && rounded.abs().log10().floor() as i32 > magnitude {
        let decimals = (1 - magnitude).max(0) as usize;
        return if decimals == 0 { group_thousands(rounded as i128) } else { format!("{rounded:.decimals$}") };
    }
    s
}

pub fn ordinal(n: usize) -> String {
    let suffix = match (n % 10, n % 100) {
        (_, 11..=13) => "th",
        (1, _) => "st",
        (2, _) => "nd",
        (3, _) => "rd",
        _ => "th",
    };
    format!("{n}{suffix}")
}

/// "a", "a and b", "a, b and c".
pub fn join_and(items: &[String]) -> String {
    match items {
        [] => String::new(),
        [one] => one.clone(),
        [init @ .., last] => format!("{} and {}", init.join(", "), last),
    }
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateError(pub String);

/// Substitutes `{name}` placeholders. Supported names: any key of `values`;
/// `{nodeNoun}` / `{nodeNouns}` (and link, weight, subgraph); `{linkNoun:key}`
/// for the form agreeing with the count in `values[key]`; `{rank}` (ordinal)
/// and `{rankPrefix}` (empty for rank 1, otherwise "2nd "); `{s:key}` for a
/// plural "s" unless `values[key]` is 1; `{key?one|many}` to pick a word by
/// that count.
pub fn render_template(
    template: &str,
    values: &BTreeMap<String, FactValue>,
    terms: &Terminology,
    rank: usize,
) -> Result<String, TemplateError> {
    let mut out = String::with_capacity(template.len() + 16);
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        let close = after
            .find('}')
            .ok_or_else(|| TemplateError(format!("unclosed placeholder in {template:?}")))?;
        let name = &after[..close];
        out.push_str(&resolve(name, values, terms, rank)?);
        rest = &after[close + 1..];
    }
    if rest.contains('}') {
        return Err(TemplateError(format!("stray '}}' in {template:?}")));
    }
    out.push_str(rest);
    Ok(out)
}

pub fn render_title(
    template: &str,
    values: &BTreeMap<String, FactValue>,
    terms: &Terminology,
    rank: usize,
) -> Result<String, TemplateError> {
    let rendered = render_template(template, values, terms, rank)?;
    // values such as node labels keep their own case
    let leading_value = template
        .strip_prefix('{')
        .and_then(|t| t.split_once('}'))
        .is_some_and(|(name, _)| values.contains_key(name));
    Ok(if leading_value { rendered } else { capitalize(&rendered) })
}

fn noun<'t>(terms: &'t Terminology, base: &str) -> Option<&'t Noun> {
    match base {
        "node" => Some(&terms.node),
        "link" => Some(&terms.link),
        "weight" => Some(&terms.weight),
        "subgraph" => Some(&terms.subgraph),
        _ => None,
    }
}

fn resolve(
    name: &str,
    values: &BTreeMap<String, FactValue>,
    terms: &Terminology,
    rank: usize,
) -> Result<String, TemplateError> {
    let missing = || TemplateError(format!("unknown placeholder {{{name}}}"));
    if let Some(v) = values.get(name) {
        return Ok(v.render());
    }
    if let Some((key, forms)) = name.split_once('?') {
        let (one, many) = forms.split_once('|').ok_or_else(missing)?;
        let count = values.get(key).and_then(FactValue::as_f64).ok_or_else(missing)?;
        return Ok(if count == 1.0 { one } else { many }.to_string());
    }
    match name {
        "rank" => return Ok(ordinal(rank)),
        "rankPrefix" => return Ok(if rank <= 1 { String::new() } else { format!("{} ", ordinal(rank)) }),
        _ => {}
    }
    let (head, count_key) = match name.split_once(':') {
        Some((h, k)) => (h, Some(k)),
        None => (name, None),
    };
    let (base, plural) = if let Some(b) = head.strip_suffix("Nouns") {
        (b, true)
    } else if let Some(b) = head.strip_suffix("Noun") {
        (b, false)
    } else if head == "s" {
        let key = count_key.ok_or_else(missing)?;
        let count = values.get(key).and_then(FactValue::as_f64).ok_or_else(missing)?;
        return Ok(if count == 1.0 { String::new() } else { "s".to_string() });
    } else {
        return Err(missing());
    };
    let n = noun(terms, base).ok_or_else(missing)?;
    match count_key {
        Some(key) => {
            let count = values.get(key).and_then(FactValue::as_f64).ok_or_else(missing)?;
            Ok(n.for_count(count).to_string())
        }
        None => Ok(if plural { n.plural.clone() } else { n.singular.clone() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thousands() {
        assert_eq!(group_thousands(11216), "11,216");
        assert_eq!(group_thousands(0), "0");
        assert_eq!(group_thousands(999), "999");
        assert_eq!(group_thousands(1_000_000), "1,000,000");
        assert_eq!(group_thousands(-4500), "-4,500");
    }

    #[test]
    fn three_significant_digits() {
        assert_eq!(format_real(0.123456), "0.123");
        assert_eq!(format_real(12.345), "12.3");
        assert_eq!(format_real(1234.5), "1,230");
        assert_eq!(format_real(0.5), "0.500");
        assert_eq!(format_real(7.0), "7");
        assert_eq!(format_real(0.0), "0");
        assert_eq!(format_real(9.9951), "10.0");
        assert_eq!(format_real(-0.0421), "-0.0421");
    }

    #[test]
    fn ordinals() {
        let got: Vec<String> = [1, 2, 3, 4, 11, 12, 13, 21, 22, 101].iter().map(|&n| ordinal(n)).collect();
        assert_eq!(got, ["1st", "2nd", "3rd", "4th", "11th", "12th", "13th", "21st", "22nd", "101st"]);
    }

    #[test]
    fn templates() {
        let terms = Terminology::default();
        let mut v = BTreeMap::new();
        v.insert("value".to_string(), FactValue::Int(11216));
        let s = render_template("This network has {value} {linkNoun:value}.", &v, &terms, 1).unwrap();
        assert_eq!(s, "This network has 11,216 links.");
        v.insert("value".to_string(), FactValue::Int(1));
        let s = render_template("This network has {value} {linkNoun:value}.", &v, &terms, 1).unwrap();
        assert_eq!(s, "This network has 1 link.");
        let s = render_title("{rankPrefix}strongest {linkNoun}", &v, &terms, 2).unwrap();
        assert_eq!(s, "2nd strongest link");
        let s = render_title("{rankPrefix}strongest {linkNoun}", &v, &terms, 1).unwrap();
        assert_eq!(s, "Strongest link");
        let s = render_template("{value} step{s:value}", &v, &terms, 1).unwrap();
        assert_eq!(s, "1 step");
        let s = render_template("{value?is|are}", &v, &terms, 1).unwrap();
        assert_eq!(s, "is");
        v.insert("node".to_string(), FactValue::from("colombo"));
        let s = render_title("{node} is here", &v, &terms, 1).unwrap();
        assert_eq!(s, "colombo is here");
        assert!(render_template("{nope}", &v, &terms, 1).is_err());
        assert!(render_template("{value", &v, &terms, 1).is_err());
    }
}
