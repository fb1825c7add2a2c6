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

use std::fmt;
use std::sync::Arc;

use super::RdfError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermKind {
    Iri,
    Literal,
}

/// An RDF term. Equality is purely lexical: two terms are equal iff they have
/// the same kind and the same lexical form.
///
/// A literal's lexical form is its canonical quoted spelling including any
/// datatype or language suffix, e.g. `"2011"` or `"Journal 1 (1940)"^^<xsd:string>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    kind: TermKind,
    lexical: Arc<str>,
}

impl Term {
    /// Builds an IRI, rejecting empty or whitespace-containing input.
    pub fn new_iri(iri: &str) -> Result<Term, RdfError> {
        if iri.is_empty() || iri.chars().any(char::is_whitespace) {
            return Err(RdfError::InvalidTerm(format!("invalid IRI `{iri}`")));
        }
        Ok(Term {
            kind: TermKind::Iri,
            lexical: Arc::from(iri),
        })
    }

    /// Builds an IRI.
    ///
    /// # Panics
    ///
    /// If `iri` is empty or contains whitespace. Use [`Term::new_iri`] for
    /// untrusted input.
    pub fn iri(iri: &str) -> Term {
        Term::new_iri(iri).expect("valid IRI")
    }

    /// Plain literal with no datatype or language tag.
    pub fn literal(value: &str) -> Term {
        Term::literal_with_suffix(value, "")
    }

    pub fn typed_literal(value: &str, datatype: &str) -> Term {
        Term::literal_with_suffix(value, &format!("^^<{datatype}>"))
    }

    pub fn lang_literal(value: &str, lang: &str) -> Term {
        Term::literal_with_suffix(value, &format!("@{lang}"))
    }

    fn literal_with_suffix(value: &str, suffix: &str) -> Term {
        let mut lexical = String::with_capacity(value.len() + suffix.len() + 2);
        lexical.push('"');
        for c in value.chars() {
            match c {
                '"' => lexical.push_str("\\\""),
                '\\' => lexical.push_str("\\\\"),
                '\n' => lexical.push_str("\\n"),
                '\r' => lexical.push_str("\\r"),
                c => lexical.push(c),
            }
        }
        lexical.push('"');
        lexical.push_str(suffix);
        Term {
            kind: TermKind::Literal,
            lexical: Arc::from(lexical),
        }
    }

    pub fn kind(&self) -> TermKind {
        self.kind
    }

    pub fn is_iri(&self) -> bool {
        self.kind == TermKind::Iri
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    /// The unescaped text between the quotes of a literal.
    pub fn literal_value(&self) -> Option<String> {
        if self.kind != TermKind::Literal {
            return None;
        }
        let mut out = String::new();
        let mut chars = self.lexical.chars().skip(1);
        while let Some(c) = chars.next() {
            match c {
                '"' => return Some(out),
                '\\' => match chars.next()? {
                    'n' => out.push('\n'),
                    'r' => out.push('\r'),
                    other => out.push(other),
                },
                c => out.push(c),
            }
        }
        None
    }

    /// Byte encoding used for row keys, column qualifiers and cell values.
    ///
    /// A kind tag is followed by the lexical bytes with 0x00 and 0x01 escaped
    /// as 0x01 0x02 and 0x01 0x03, so an encoded term never contains 0x00 and
    /// 0x00 can delimit compound keys.
    pub fn encode(&self) -> Vec<u8> {
        let bytes = self.lexical.as_bytes();
        let mut out = Vec::with_capacity(bytes.len() + 1);
        out.push(match self.kind {
            TermKind::Iri => b'I',
            TermKind::Literal => b'L',
        });
        for &b in bytes {
            match b {
                0x00 => out.extend_from_slice(&[0x01, 0x02]),
                0x01 => out.extend_from_slice(&[0x01, 0x03]),
                b => out.push(b),
            }
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Term, RdfError> {
        let malformed = |why: &str| RdfError::MalformedEncoding(why.to_string());
        let (&tag, rest) = bytes
            .split_first()
            .ok_or_else(|| malformed("empty term encoding"))?;
        let kind = match tag {
            b'I' => TermKind::Iri,
            b'L' => TermKind::Literal,
            _ => return Err(malformed("unknown term kind tag")),
        };
        let mut raw = Vec::with_capacity(rest.len());
        let mut iter = rest.iter();
        while let Some(&b) = iter.next() {
            match b {
                0x00 => return Err(malformed("unescaped 0x00 in term encoding")),
                0x01 => match iter.next() {
                    Some(0x02) => raw.push(0x00),
                    Some(0x03) => raw.push(0x01),
                    _ => return Err(malformed("bad escape sequence")),
                },
                b => raw.push(b),
            }
        }
        let lexical = String::from_utf8(raw).map_err(|_| malformed("term is not UTF-8"))?;
        if lexical.is_empty() {
            return Err(malformed("empty lexical form"));
        }
        Ok(Term {
            kind,
            lexical: Arc::from(lexical),
        })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TermKind::Iri => write!(f, "<{}>", self.lexical),
            TermKind::Literal => f.write_str(&self.lexical),
        }
    }
}

/// An RDF statement. Subject and predicate are always IRIs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Triple, RdfError> {
        if !subject.is_iri() || !predicate.is_iri() {
            return Err(RdfError::InvalidTerm(
                "subject and predicate must be IRIs".to_string(),
            ));
        }
        Ok(Triple {
            subject,
            predicate,
            object,
        })
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}
