//! Text forms for polynomials over F_p.
//!
//! Pretty form lists terms in ascending degree: `1 + X^2 + X^5`, `2*X^3`, `0`.
//! The parser is lenient: it also accepts `2X^3`, `X^{13}`, `x`, any term order,
//! repeated terms (summed), `-` signs, and the compact digit form `c0 c1 ... c_d`.

use crate::field::FieldError;

pub fn format_poly(c: &[u32]) -> String {
    let mut terms = Vec::new();
    for (i, &v) in c.iter().enumerate() {
        if v == 0 {
            continue;
        }
        let t = match (i, v) {
            (0, _) => v.to_string(),
            (1, 1) => "X".to_string(),
            (1, _) => format!("{v}*X"),
            (_, 1) => format!("X^{i}"),
            _ => format!("{v}*X^{i}"),
        };
        terms.push(t);
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn err(input: &str, reason: impl Into<String>) -> FieldError {
    FieldError::Parse { input: input.to_string(), reason: reason.into() }
}

/// Parses either the pretty or the compact form; returns ascending coefficients.
pub fn parse_poly(p: u32, s: &str) -> Result<Vec<u32>, FieldError> {
    let tokens: Vec<&str> = s.split_whitespace().collect();
    if tokens.len() > 1 && tokens.iter().all(|t| t.chars().all(|c| c.is_ascii_digit())) {
        return parse_compact(p, s);
    }
    let cleaned: String = s
        .chars()
        .filter(|c| !c.is_whitespace() && *c != '{' && *c != '}')
        .collect();
    if cleaned.is_empty() {
        return Err(err(s, "empty input"));
    }
    let mut coeffs: Vec<u32> = Vec::new();
    let mut term = String::new();
    let mut negative = false;
    let flush = |term: &mut String, negative: bool, coeffs: &mut Vec<u32>| -> Result<(), FieldError> {
        if term.is_empty() {
            return Err(err(s, "empty term"));
        }
        let (c, e) = parse_term(p, term).ok_or_else(|| err(s, format!("bad term {term:?}")))?;
        let c = if negative { (p - c) % p } else { c };
        if coeffs.len() <= e {
            coeffs.resize(e + 1, 0);
        }
        coeffs[e] = ((coeffs[e] as u64 + c as u64) % p as u64) as u32;
        term.clear();
        Ok(())
    };
    let mut prev: Option<char> = None;
    for ch in cleaned.chars() {
        if (ch == '+' || ch == '-') && prev != Some('^') {
            if !term.is_empty() {
                flush(&mut term, negative, &mut coeffs)?;
            } else if prev.is_some() && ch == '+' {
                return Err(err(s, "empty term"));
            }
            negative = ch == '-';
        } else {
            term.push(ch);
        }
        prev = Some(ch);
    }
    flush(&mut term, negative, &mut coeffs)?;
    while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
        coeffs.pop();
    }
    if coeffs.iter().all(|&c| c == 0) {
        coeffs.clear();
    }
    Ok(coeffs)
}

fn parse_term(p: u32, t: &str) -> Option<(u32, usize)> {
    let Some(pos) = t.find(['X', 'x']) else {
        return Some((parse_coeff(p, t)?, 0));
    };
    let head = t[..pos].trim_end_matches('*');
    let c = if head.is_empty() { 1 } else { parse_coeff(p, head)? };
    let tail = &t[pos + 1..];
    let e = if tail.is_empty() {
        1
    } else {
        let tail = tail.strip_prefix('^').or_else(|| tail.strip_prefix("**"))?;
        tail.parse::<usize>().ok()?
    };
    Some((c, e))
}

fn parse_coeff(p: u32, s: &str) -> Option<u32> {
    let v: u64 = s.parse().ok()?;
    Some((v % p as u64) as u32)
}

/// Compact form: whitespace-separated ascending digits, each in `0..p`.
pub fn parse_compact(p: u32, s: &str) -> Result<Vec<u32>, FieldError> {
    let mut out = Vec::new();
    for tok in s.split_whitespace() {
        let v: u32 = tok.parse().map_err(|_| err(s, format!("bad digit {tok:?}")))?;
        if v >= p {
            return Err(err(s, format!("digit {v} out of range for F_{p}")));
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err(err(s, "empty input"));
    }
    Ok(out)
}
