// Copyright 2026 The mapsin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Line-oriented N-Triples subset: `<s> <p> <o> .` or `<s> <p> "lit"[suffix] .`
//! with `#` comment lines. Blank nodes are not supported.

use std::io::{self, Write};

use super::{Term, Triple};

/// Parses one line. Blank and comment lines yield `Ok(None)`.
pub fn parse_line(line: &str) -> Result<Option<Triple>, String> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let mut rest = trimmed;
    let subject = next_term(&mut rest)?;
    let predicate = next_term(&mut rest)?;
    let object = next_term(&mut rest)?;
    let rest = rest.trim_start();
    if rest != "." && !rest.starts_with(". #") && !rest.starts_with(".#") {
        return Err(if rest.is_empty() {
            "missing terminating ` .`".to_string()
        } else {
            format!("unexpected trailing input `{rest}`")
        });
    }
    Triple::new(subject, predicate, object)
        .map(Some)
        .map_err(|e| e.to_string())
}

fn next_term(rest: &mut &str) -> Result<Term, String> {
    let s = rest.trim_start();
    match s.chars().next() {
        Some('<') => {
            let end = s.find('>').ok_or("unterminated IRI")?;
            let iri = &s[1..end];
            *rest = &s[end + 1..];
            Term::new_iri(iri).map_err(|e| e.to_string())
        }
        Some('"') => {
            let mut value = String::new();
            let mut chars = s.char_indices().skip(1);
            let close = loop {
                match chars.next() {
                    None => return Err("unterminated literal".to_string()),
                    Some((i, '"')) => break i,
                    Some((_, '\\')) => match chars.next() {
                        Some((_, 'n')) => value.push('\n'),
                        Some((_, 'r')) => value.push('\r'),
                        Some((_, 't')) => value.push('\t'),
                        Some((_, c @ ('"' | '\\' | '\''))) => value.push(c),
                        Some((i, c @ ('u' | 'U'))) => {
                            let n = if c == 'u' { 4 } else { 8 };
                            let hex = s.get(i + 1..i + 1 + n).ok_or("bad unicode escape")?;
                            let cp = u32::from_str_radix(hex, 16)
                                .ok()
                                .and_then(char::from_u32)
                                .ok_or("bad unicode escape")?;
                            value.push(cp);
                            for _ in 0..n {
                                chars.next();
                            }
                        }
                        _ => return Err("bad escape in literal".to_string()),
                    },
                    Some((_, c)) => value.push(c),
                }
            };
            let after = &s[close + 1..];
            if let Some(dt) = after.strip_prefix("^^<") {
                let end = dt.find('>').ok_or("unterminated datatype IRI")?;
                *rest = &dt[end + 1..];
                Ok(Term::typed_literal(&value, &dt[..end]))
            } else if let Some(lang) = after.strip_prefix('@') {
                let end = lang
                    .find(|c: char| !(c.is_ascii_alphanumeric() || c == '-'))
                    .unwrap_or(lang.len());
                if end == 0 {
                    return Err("empty language tag".to_string());
                }
                *rest = &lang[end..];
                Ok(Term::lang_literal(&value, &lang[..end]))
            } else {
                *rest = after;
                Ok(Term::literal(&value))
            }
        }
        Some('_') => Err("blank nodes are not supported".to_string()),
        Some(_) => Err("expected `<iri>` or `\"literal\"`".to_string()),
        None => Err("expected a term".to_string()),
    }
}

/// One N-Triples line without the trailing newline.
pub fn format_triple(t: &Triple) -> String {
    t.to_string()
}

pub fn write_ntriples<'a>(
    out: &mut impl Write,
    triples: impl IntoIterator<Item = &'a Triple>,
) -> io::Result<()> {
    for t in triples {
        writeln!(out, "{t}")?;
    }
    Ok(())
}
