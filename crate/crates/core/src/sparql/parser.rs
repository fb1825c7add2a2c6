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

//! Parser for the supported SPARQL subset:
//!
//! ```text
//! Query    := Prefix* 'SELECT' ('*' | Var+) 'WHERE'? '{' Block '}'
//! Prefix   := 'PREFIX' PNAME_NS IRIREF
//! Block    := (Triples | Filter) separated by '.'
//! Triples  := Term Term Term ((';' Term Term) | (',' Term))*
//! Filter   := 'FILTER' '(' Var '=' Constant ')'  |  'FILTER' '(' Constant '=' Var ')'
//! ```
//!
//! Terms are `<iri>`, `prefix:local`, bare names (taken as IRIs verbatim, so
//! `title` is the IRI `title`), quoted literals with an optional `@lang` or
//! `^^datatype`, integers, and `a`. Prefixed names whose prefix was not
//! declared are kept verbatim as IRIs (`rdf:type`).
//!
//! Every equality FILTER is folded into the patterns by substituting its
//! constant for the variable.

use std::collections::HashMap;

use super::{BasicGraphPattern, PatternTerm, Projection, SparqlError, TriplePattern, Variable};
use crate::rdf::Term;

const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
const XSD_DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";

/// Keywords of constructs outside the supported subset, with the name reported.
const UNSUPPORTED: &[(&str, &str)] = &[
    ("OPTIONAL", "OPTIONAL"),
    ("UNION", "UNION"),
    ("MINUS", "MINUS"),
    ("GRAPH", "GRAPH"),
    ("SERVICE", "SERVICE"),
    ("BIND", "BIND"),
    ("VALUES", "VALUES"),
    ("ORDER", "ORDER BY"),
    ("GROUP", "GROUP BY"),
    ("HAVING", "HAVING"),
    ("LIMIT", "LIMIT"),
    ("OFFSET", "OFFSET"),
    ("DISTINCT", "DISTINCT"),
    ("REDUCED", "REDUCED"),
    ("FROM", "FROM"),
    ("NAMED", "FROM NAMED"),
    ("BASE", "BASE"),
    ("ASK", "ASK"),
    ("CONSTRUCT", "CONSTRUCT"),
    ("DESCRIBE", "DESCRIBE"),
];

#[derive(Debug, Clone, PartialEq)]
enum Datatype {
    Iri(String),
    PName(String, String),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Var(String),
    Iri(String),
    PName(String, String),
    Word(String),
    Literal {
        value: String,
        lang: Option<String>,
        datatype: Option<Datatype>,
    },
    Number(String),
    Punct(char),
    Op(String),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn position(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.chars().count(), |nl| {
        before[nl + 1..].chars().count()
    }) + 1;
    (line, column)
}

fn syntax(src: &str, offset: usize, message: impl Into<String>) -> SparqlError {
    let (line, column) = position(src, offset);
    SparqlError::Syntax {
        message: message.into(),
        line,
        column,
    }
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

fn tokenize(src: &str) -> Result<Vec<Token>, SparqlError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let at = |i: usize| chars.get(i).map(|&(_, c)| c);
    let off = |i: usize| chars.get(i).map_or(src.len(), |&(o, _)| o);
    while i < chars.len() {
        let c = chars[i].1;
        let start = off(i);
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i].1 != '\n' {
                i += 1;
            }
            continue;
        }
        match c {
            '?' | '$' => {
                let mut j = i + 1;
                while at(j).is_some_and(|c| c.is_alphanumeric() || c == '_') {
                    j += 1;
                }
                if j == i + 1 {
                    return Err(syntax(src, start, "expected variable name"));
                }
                out.push(Token {
                    tok: Tok::Var(src[off(i + 1)..off(j)].to_string()),
                    offset: start,
                });
                i = j;
            }
            '<' => {
                // An IRI runs to the next '>' without whitespace; otherwise
                // this is a comparison operator.
                let mut j = i + 1;
                while at(j).is_some_and(|c| c != '>' && !c.is_whitespace() && c != '<') {
                    j += 1;
                }
                if at(j) == Some('>') && j > i + 1 {
                    out.push(Token {
                        tok: Tok::Iri(src[off(i + 1)..off(j)].to_string()),
                        offset: start,
                    });
                    i = j + 1;
                } else {
                    let op = if at(i + 1) == Some('=') { "<=" } else { "<" };
                    out.push(Token {
                        tok: Tok::Op(op.to_string()),
                        offset: start,
                    });
                    i += op.len();
                }
            }
            '"' | '\'' => {
                let quote = c;
                let mut j = i + 1;
                let mut value = String::new();
                loop {
                    match at(j) {
                        None => return Err(syntax(src, start, "unterminated string literal")),
                        Some(c) if c == quote => break,
                        Some('\\') => {
                            let esc =
                                at(j + 1).ok_or_else(|| syntax(src, off(j), "dangling escape"))?;
                            j += 2;
                            match esc {
                                't' => value.push('\t'),
                                'n' => value.push('\n'),
                                'r' => value.push('\r'),
                                'b' => value.push('\u{8}'),
                                'f' => value.push('\u{c}'),
                                '"' | '\'' | '\\' => value.push(esc),
                                'u' | 'U' => {
                                    let n = if esc == 'u' { 4 } else { 8 };
                                    let hex: String = (0..n).filter_map(|k| at(j + k)).collect();
                                    let cp = u32::from_str_radix(&hex, 16)
                                        .ok()
                                        .filter(|_| hex.len() == n)
                                        .and_then(char::from_u32)
                                        .ok_or_else(|| syntax(src, off(j), "bad unicode escape"))?;
                                    value.push(cp);
                                    j += n;
                                }
                                _ => return Err(syntax(src, off(j - 2), "unknown escape")),
                            }
                        }
                        Some('\n') => return Err(syntax(src, off(j), "newline in string literal")),
                        Some(c) => {
                            value.push(c);
                            j += 1;
                        }
                    }
                }
                j += 1;
                let mut lang = None;
                let mut datatype = None;
                if at(j) == Some('@') {
                    let mut k = j + 1;
                    while at(k).is_some_and(|c| c.is_ascii_alphanumeric() || c == '-') {
                        k += 1;
                    }
                    if k == j + 1 {
                        return Err(syntax(src, off(j), "empty language tag"));
                    }
                    lang = Some(src[off(j + 1)..off(k)].to_string());
                    j = k;
                } else if at(j) == Some('^') && at(j + 1) == Some('^') {
                    let k = j + 2;
                    if at(k) == Some('<') {
                        let mut e = k + 1;
                        while at(e).is_some_and(|c| c != '>' && !c.is_whitespace()) {
                            e += 1;
                        }
                        if at(e) != Some('>') {
                            return Err(syntax(src, off(k), "unterminated datatype IRI"));
                        }
                        datatype = Some(Datatype::Iri(src[off(k + 1)..off(e)].to_string()));
                        j = e + 1;
                    } else {
                        let mut e = k;
                        while at(e).is_some_and(|c| is_name_char(c) || c == ':') {
                            e += 1;
                        }
                        let name = &src[off(k)..off(e)];
                        let (p, l) = name
                            .split_once(':')
                            .ok_or_else(|| syntax(src, off(k), "expected datatype after ^^"))?;
                        datatype = Some(Datatype::PName(p.to_string(), l.to_string()));
                        j = e;
                    }
                }
                out.push(Token {
                    tok: Tok::Literal {
                        value,
                        lang,
                        datatype,
                    },
                    offset: start,
                });
                i = j;
            }
            '{' | '}' | '(' | ')' | '*' | ',' | ';' | '.' => {
                out.push(Token {
                    tok: Tok::Punct(c),
                    offset: start,
                });
                i += 1;
            }
            '=' => {
                out.push(Token {
                    tok: Tok::Punct('='),
                    offset: start,
                });
                i += 1;
            }
            '!' | '>' | '&' | '|' | '+' | '/' => {
                let two: String = [Some(c), at(i + 1)].iter().flatten().collect();
                let op = if ["!=", ">=", "&&", "||"].contains(&two.as_str()) {
                    two
                } else {
                    c.to_string()
                };
                i += op.chars().count();
                out.push(Token {
                    tok: Tok::Op(op),
                    offset: start,
                });
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while at(j).is_some_and(|c| c.is_ascii_digit()) {
                    j += 1;
                }
                if at(j) == Some('.') && at(j + 1).is_some_and(|c| c.is_ascii_digit()) {
                    j += 1;
                    while at(j).is_some_and(|c| c.is_ascii_digit()) {
                        j += 1;
                    }
                }
                out.push(Token {
                    tok: Tok::Number(src[start..off(j)].to_string()),
                    offset: start,
                });
                i = j;
            }
            c if is_name_char(c) || c == ':' => {
                let mut j = i;
                loop {
                    match at(j) {
                        Some(c) if is_name_char(c) || c == ':' => j += 1,
                        // Dots are allowed inside names but never at the end.
                        Some('.') if at(j + 1).is_some_and(|c| is_name_char(c) || c == ':') => {
                            j += 1
                        }
                        _ => break,
                    }
                }
                let text = &src[start..off(j)];
                let tok = match text.split_once(':') {
                    Some((p, l)) => Tok::PName(p.to_string(), l.to_string()),
                    None => Tok::Word(text.to_string()),
                };
                out.push(Token { tok, offset: start });
                i = j;
            }
            other => {
                return Err(syntax(
                    src,
                    start,
                    format!("unexpected character `{other}`"),
                ))
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<Token>,
    pos: usize,
    prefixes: HashMap<String, String>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map_or(self.src.len(), |t| t.offset)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn error(&self, message: impl Into<String>) -> SparqlError {
        syntax(self.src, self.offset(), message)
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(w)) if w.eq_ignore_ascii_case(kw))
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), SparqlError> {
        if self.is_keyword(kw) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {kw}")))
        }
    }

    fn expect_punct(&mut self, c: char) -> Result<(), SparqlError> {
        if self.peek() == Some(&Tok::Punct(c)) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn resolve_pname(&self, prefix: &str, local: &str) -> Result<Term, SparqlError> {
        let iri = match self.prefixes.get(prefix) {
            Some(ns) => format!("{ns}{local}"),
            None => format!("{prefix}:{local}"),
        };
        Term::new_iri(&iri).map_err(|e| self.error(e.to_string()))
    }

    /// Converts the token just consumed (at `self.pos - 1`) into a pattern term.
    fn term(&mut self, predicate_position: bool) -> Result<PatternTerm, SparqlError> {
        let tok = self
            .next()
            .ok_or_else(|| self.error("unexpected end of query"))?;
        self.pos -= 1;
        let t = match tok {
            Tok::Var(name) => PatternTerm::Var(Variable::new(&name)),
            Tok::Iri(iri) => {
                PatternTerm::Term(Term::new_iri(&iri).map_err(|e| self.error(e.to_string()))?)
            }
            Tok::PName(p, l) => PatternTerm::Term(self.resolve_pname(&p, &l)?),
            Tok::Word(w) if w == "a" && predicate_position => {
                PatternTerm::Term(self.resolve_pname("rdf", "type")?)
            }
            Tok::Word(w) => {
                PatternTerm::Term(Term::new_iri(&w).map_err(|e| self.error(e.to_string()))?)
            }
            Tok::Literal {
                value,
                lang,
                datatype,
            } => PatternTerm::Term(match (lang, datatype) {
                (Some(l), _) => Term::lang_literal(&value, &l),
                (None, Some(Datatype::Iri(dt))) => Term::typed_literal(&value, &dt),
                (None, Some(Datatype::PName(p, l))) => {
                    Term::typed_literal(&value, self.resolve_pname(&p, &l)?.lexical())
                }
                (None, None) => Term::literal(&value),
            }),
            Tok::Number(n) => {
                let dt = if n.contains('.') {
                    XSD_DECIMAL
                } else {
                    XSD_INTEGER
                };
                PatternTerm::Term(Term::typed_literal(&n, dt))
            }
            other => return Err(self.error(format!("expected a term, found {}", describe(&other)))),
        };
        self.pos += 1;
        Ok(t)
    }

    fn filter(&mut self) -> Result<(Variable, Term), SparqlError> {
        let non_equality =
            || SparqlError::UnsupportedConstruct("FILTER (non-equality)".to_string());
        self.expect_punct('(')?;
        if matches!(self.peek(), Some(Tok::Word(_)))
            && self.tokens.get(self.pos + 1).map(|t| &t.tok) == Some(&Tok::Punct('('))
        {
            return Err(non_equality());
        }
        let lhs = self.term(false).map_err(|_| non_equality())?;
        match self.peek() {
            Some(Tok::Punct('=')) => self.pos += 1,
            _ => return Err(non_equality()),
        }
        let rhs = self.term(false).map_err(|_| non_equality())?;
        if self.peek() != Some(&Tok::Punct(')')) {
            return Err(non_equality());
        }
        self.pos += 1;
        match (lhs, rhs) {
            (PatternTerm::Var(v), PatternTerm::Term(t))
            | (PatternTerm::Term(t), PatternTerm::Var(v)) => Ok((v, t)),
            (PatternTerm::Var(_), PatternTerm::Var(_)) => Err(SparqlError::UnsupportedConstruct(
                "FILTER (variable = variable)".to_string(),
            )),
            _ => Err(SparqlError::UnsupportedConstruct(
                "FILTER (constant = constant)".to_string(),
            )),
        }
    }

    fn parse(mut self) -> Result<BasicGraphPattern, SparqlError> {
        for t in &self.tokens {
            if let Tok::Word(w) = &t.tok {
                if let Some((_, name)) = UNSUPPORTED
                    .iter()
                    .find(|(kw, _)| w.eq_ignore_ascii_case(kw))
                {
                    return Err(SparqlError::UnsupportedConstruct(name.to_string()));
                }
            }
        }

        while self.is_keyword("PREFIX") {
            self.pos += 1;
            let prefix = match self.next() {
                Some(Tok::PName(p, l)) if l.is_empty() => p,
                _ => {
                    self.pos -= 1;
                    return Err(self.error("expected prefix name such as `ex:`"));
                }
            };
            let ns = match self.next() {
                Some(Tok::Iri(iri)) => iri,
                _ => {
                    self.pos -= 1;
                    return Err(self.error("expected namespace IRI"));
                }
            };
            self.prefixes.insert(prefix, ns);
        }

        self.expect_keyword("SELECT")?;
        let projection = if self.peek() == Some(&Tok::Punct('*')) {
            self.pos += 1;
            Projection::All
        } else {
            let mut vars = Vec::new();
            while let Some(Tok::Var(name)) = self.peek() {
                vars.push(Variable::new(name));
                self.pos += 1;
            }
            if vars.is_empty() {
                return Err(self.error("expected `*` or projected variables"));
            }
            Projection::Vars(vars)
        };
        if self.is_keyword("WHERE") {
            self.pos += 1;
        }
        self.expect_punct('{')?;

        let mut patterns = Vec::new();
        let mut filters = Vec::new();
        loop {
            match self.peek() {
                None => return Err(self.error("unexpected end of query, expected `}`")),
                Some(Tok::Punct('}')) => {
                    self.pos += 1;
                    break;
                }
                Some(Tok::Punct('.')) => self.pos += 1,
                Some(Tok::Punct('{')) => {
                    return Err(SparqlError::UnsupportedConstruct(
                        "nested group pattern".to_string(),
                    ))
                }
                Some(Tok::Word(w)) if w.eq_ignore_ascii_case("FILTER") => {
                    self.pos += 1;
                    filters.push(self.filter()?);
                }
                Some(_) => {
                    let subject = self.term(false)?;
                    loop {
                        let predicate = self.term(true)?;
                        loop {
                            let object = self.term(false)?;
                            patterns.push(TriplePattern {
                                subject: subject.clone(),
                                predicate: predicate.clone(),
                                object,
                            });
                            if self.peek() == Some(&Tok::Punct(',')) {
                                self.pos += 1;
                            } else {
                                break;
                            }
                        }
                        if self.peek() == Some(&Tok::Punct(';')) {
                            self.pos += 1;
                            if matches!(self.peek(), Some(Tok::Punct('.' | '}'))) {
                                break;
                            }
                        } else {
                            break;
                        }
                    }
                    match self.peek() {
                        Some(Tok::Punct('.' | '}')) => {}
                        Some(Tok::Word(w)) if w.eq_ignore_ascii_case("FILTER") => {}
                        _ => return Err(self.error("expected `.` or `}` after triple pattern")),
                    }
                }
            }
        }
        if self.pos < self.tokens.len() {
            return Err(self.error("unexpected input after the WHERE block"));
        }
        if patterns.is_empty() {
            return Err(SparqlError::EmptyPattern);
        }

        let mut fixed: Vec<(Variable, Term)> = Vec::new();
        for (var, term) in filters {
            if let Some((_, existing)) = fixed.iter().find(|(v, _)| *v == var) {
                if *existing != term {
                    return Err(SparqlError::UnsupportedConstruct(
                        "conflicting FILTER equalities".to_string(),
                    ));
                }
                continue;
            }
            let binding = super::SolutionMapping::from_pairs([(var.clone(), term.clone())])
                .expect("single binding");
            for p in &mut patterns {
                *p = p.substitute(&binding);
            }
            fixed.push((var, term));
        }
        BasicGraphPattern::with_fixed(patterns, projection, fixed)
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Punct(c) => format!("`{c}`"),
        Tok::Op(op) => format!("`{op}`"),
        Tok::Word(w) => format!("`{w}`"),
        _ => "a term".to_string(),
    }
}

/// Parses query text into a basic graph pattern.
pub fn parse_query(text: &str) -> Result<BasicGraphPattern, SparqlError> {
    Parser {
        src: text,
        tokens: tokenize(text)?,
        pos: 0,
        prefixes: HashMap::new(),
    }
    .parse()
}

#[cfg(test)]
mod tests {
    use super::*;

    const ARTICLE_QUERY: &str = "SELECT * WHERE {\n  ?article title ?title .\n  ?article author ?author .\n  ?article year ?year\n}";

    #[test]
    fn article_query_has_three_patterns_sharing_article() {
        let bgp = parse_query(ARTICLE_QUERY).unwrap();
        assert_eq!(bgp.patterns().len(), 3);
        let article = Variable::new("article");
        assert!(bgp
            .patterns()
            .iter()
            .all(|p| p.subject == PatternTerm::Var(article.clone())));
        assert_eq!(
            bgp.patterns()[0].predicate,
            PatternTerm::Term(Term::iri("title"))
        );
        assert_eq!(bgp.projection(), &Projection::All);
    }

    #[test]
    fn filter_equality_is_folded() {
        let q = "SELECT ?article WHERE {\n  ?article rdf:type bench:Article.\n  ?article ?property ?value\n  FILTER (?property=swrc:pages)\n}";
        let bgp = parse_query(q).unwrap();
        assert_eq!(bgp.patterns().len(), 2);
        assert_eq!(
            bgp.patterns()[1].predicate,
            PatternTerm::Term(Term::iri("swrc:pages"))
        );
        assert_eq!(
            bgp.patterns()[0].predicate,
            PatternTerm::Term(Term::iri("rdf:type"))
        );
        assert_eq!(bgp.fixed().len(), 1);
    }

    #[test]
    fn optional_is_unsupported() {
        assert_eq!(
            parse_query("SELECT ?x WHERE { ?x OPTIONAL ... }"),
            Err(SparqlError::UnsupportedConstruct("OPTIONAL".into()))
        );
        assert_eq!(
            parse_query("SELECT ?x WHERE { ?x <p> ?y } ORDER BY ?x"),
            Err(SparqlError::UnsupportedConstruct("ORDER BY".into()))
        );
        assert_eq!(
            parse_query("SELECT ?x WHERE { { ?x <p> ?y } UNION { ?x <q> ?y } }"),
            Err(SparqlError::UnsupportedConstruct("UNION".into()))
        );
        assert_eq!(
            parse_query("SELECT ?x WHERE { ?x <p> ?y FILTER(?y > 3) }"),
            Err(SparqlError::UnsupportedConstruct(
                "FILTER (non-equality)".into()
            ))
        );
        assert_eq!(
            parse_query("SELECT ?x WHERE { ?x <p> ?y FILTER(regex(?y, \"a\")) }"),
            Err(SparqlError::UnsupportedConstruct(
                "FILTER (non-equality)".into()
            ))
        );
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_query("SELECT ?x WHERE {\n  ?x <p> \n}") {
            Err(SparqlError::Syntax { line, column, .. }) => {
                assert_eq!((line, column), (3, 1));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_query("SELECT WHERE { ?x <p> ?y }"),
            Err(SparqlError::Syntax { .. })
        ));
        assert!(matches!(
            parse_query("SELECT * WHERE { ?x <p> \"open }"),
            Err(SparqlError::Syntax { .. })
        ));
    }

    #[test]
    fn prefixes_expand_and_literals_keep_suffixes() {
        let q = r#"PREFIX ub: <http://lehigh.edu/ub#>
SELECT ?X WHERE {
  ?X a ub:GraduateStudent .
  ?journal dc:title "Journal 1 (1940)"^^xsd:string .
  ?X ub:age 42 .
  ?X ub:name "Ann"@en
}"#;
        let bgp = parse_query(q).unwrap();
        let p = bgp.patterns();
        assert_eq!(p[0].predicate, PatternTerm::Term(Term::iri("rdf:type")));
        assert_eq!(
            p[0].object,
            PatternTerm::Term(Term::iri("http://lehigh.edu/ub#GraduateStudent"))
        );
        assert_eq!(
            p[1].object,
            PatternTerm::Term(Term::typed_literal("Journal 1 (1940)", "xsd:string"))
        );
        assert_eq!(
            p[2].object,
            PatternTerm::Term(Term::typed_literal("42", XSD_INTEGER))
        );
        assert_eq!(
            p[3].object,
            PatternTerm::Term(Term::lang_literal("Ann", "en"))
        );
    }

    #[test]
    fn predicate_object_lists() {
        let bgp = parse_query("SELECT * { ?x <p> ?a, ?b ; <q> ?c . }").unwrap();
        assert_eq!(bgp.patterns().len(), 3);
    }

    #[test]
    fn print_parse_fixpoint() {
        let queries = [
            ARTICLE_QUERY,
            "SELECT ?article WHERE { ?article rdf:type bench:Article. ?article ?property ?value FILTER (?property=swrc:pages) }",
            "SELECT ?yr WHERE { ?journal rdf:type bench:Journal. ?journal dc:title \"Journal 1 (1940)\"^^xsd:string. ?journal dcterms:issued ?yr }",
            "SELECT ?s WHERE { ?s <p> \"tab\\there \\\"quoted\\\"\"@en-gb }",
        ];
        for q in queries {
            let once = parse_query(q).unwrap();
            let twice = parse_query(&once.to_string()).unwrap();
            assert_eq!(once, twice, "{q}");
        }
    }
}
