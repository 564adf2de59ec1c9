//! Text format for presentations.
//!
//! ```text
//! # the group U
//! gens a, b, c;
//! rels a^4, b^4, c^4, (a*b)^2, [a,c^-1]*b^2;
//! ```
//!
//! `[p, q]` expands to `p^-1 q^-1 p q`. Brackets may nest.

use crate::error::ParseError;
use crate::word::{letter, Presentation, Word};

/// Structured word expression, before expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Gen(usize),
    Product(Vec<Expr>),
    Power(Box<Expr>, i64),
    Commutator(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn gen(i: usize) -> Self {
        Expr::Gen(i)
    }

    pub fn pow(self, n: i64) -> Self {
        Expr::Power(Box::new(self), n)
    }

    pub fn comm(p: Expr, q: Expr) -> Self {
        Expr::Commutator(Box::new(p), Box::new(q))
    }

    pub fn inv(self) -> Self {
        self.pow(-1)
    }
}

/// Flattens an expression to a freely reduced word.
pub fn expand(expr: &Expr) -> Word {
    match expr {
        Expr::Gen(i) => Word::from_letters(vec![letter(*i, true)]),
        Expr::Product(terms) => terms
            .iter()
            .fold(Word::empty(), |acc, t| acc.mul(&expand(t))),
        Expr::Power(base, n) => expand(base).pow(*n),
        Expr::Commutator(p, q) => Word::commutator(&expand(p), &expand(q)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Name(String),
    Int(i64),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let line_no = li + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_alphabetic() {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                if i < chars.len() && !chars[i].is_ascii() && chars[i].is_alphanumeric() {
                    return Err(syntax(line_no, i + 1, "non-ASCII character in name"));
                }
                out.push(Token {
                    tok: Tok::Name(chars[start..i].iter().collect()),
                    line: line_no,
                    column,
                });
                continue;
            }
            if c.is_ascii_digit()
                || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()))
            {
                let start = i;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let v = s
                    .parse::<i64>()
                    .map_err(|_| syntax(line_no, column, &format!("integer {s} out of range")))?;
                out.push(Token {
                    tok: Tok::Int(v),
                    line: line_no,
                    column,
                });
                continue;
            }
            if "*^()[],;".contains(c) {
                out.push(Token {
                    tok: Tok::Sym(c),
                    line: line_no,
                    column,
                });
                i += 1;
                continue;
            }
            return Err(syntax(
                line_no,
                column,
                &format!("unexpected character {c:?}"),
            ));
        }
    }
    Ok(out)
}

fn syntax(line: usize, column: usize, message: &str) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.to_string(),
    }
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    names: &'a [String],
    end: (usize, usize),
}

impl<'a> Parser<'a> {
    fn new(toks: Vec<Token>, names: &'a [String], text: &str) -> Self {
        let lines = text.lines().count().max(1);
        let last_len = text.lines().last().map(|l| l.chars().count()).unwrap_or(0);
        Parser {
            toks,
            pos: 0,
            names,
            end: (lines, last_len + 1),
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map(|t| (t.line, t.column)).unwrap_or(self.end)
    }

    fn err(&self, message: &str) -> ParseError {
        let (l, c) = self.here();
        syntax(l, c, message)
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if matches!(self.peek(), Some(Token { tok: Tok::Sym(s), .. }) if *s == c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        while self.eat_sym('*') {
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Expr::Product(terms)
        })
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let atom = self.atom()?;
        if self.eat_sym('^') {
            match self.peek().cloned() {
                Some(Token {
                    tok: Tok::Int(n), ..
                }) => {
                    self.pos += 1;
                    Ok(atom.pow(n))
                }
                _ => Err(self.err("expected integer exponent")),
            }
        } else {
            Ok(atom)
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| self.err("unexpected end of input"))?;
        match tok.tok {
            Tok::Name(name) => {
                self.pos += 1;
                let idx = self.names.iter().position(|n| *n == name).ok_or(
                    ParseError::UnknownGenerator {
                        line: tok.line,
                        column: tok.column,
                        name,
                    },
                )?;
                Ok(Expr::Gen(idx))
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Sym('[') => {
                self.pos += 1;
                let p = self.expr()?;
                self.expect_sym(',')?;
                let q = self.expr()?;
                self.expect_sym(']')?;
                Ok(Expr::comm(p, q))
            }
            _ => Err(self.err("expected generator, '(' or '['")),
        }
    }

    fn expr_list(&mut self) -> Result<Vec<Expr>, ParseError> {
        let mut out = vec![self.expr()?];
        while self.eat_sym(',') {
            out.push(self.expr()?);
        }
        Ok(out)
    }
}

/// Parses a presentation file.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let toks = lex(text)?;
    let mut names: Vec<String> = Vec::new();
    let mut rel_exprs: Vec<(Expr, (usize, usize))> = Vec::new();
    let mut pos = 0;
    while pos < toks.len() {
        let t = &toks[pos];
        match &t.tok {
            Tok::Name(k) if k == "gens" => {
                pos += 1;
                loop {
                    match toks.get(pos) {
                        Some(Token {
                            tok: Tok::Name(n),
                            line,
                            column,
                        }) => {
                            if names.contains(n) {
                                return Err(syntax(
                                    *line,
                                    *column,
                                    &format!("duplicate generator {n:?}"),
                                ));
                            }
                            names.push(n.clone());
                            pos += 1;
                        }
                        Some(t) => return Err(syntax(t.line, t.column, "expected generator name")),
                        None => {
                            return Err(syntax(t.line, t.column, "unterminated gens statement"))
                        }
                    }
                    match toks.get(pos) {
                        Some(Token {
                            tok: Tok::Sym(','), ..
                        }) => pos += 1,
                        Some(Token {
                            tok: Tok::Sym(';'), ..
                        }) => {
                            pos += 1;
                            break;
                        }
                        Some(t) => return Err(syntax(t.line, t.column, "expected ',' or ';'")),
                        None => return Err(syntax(t.line, t.column, "missing ';'")),
                    }
                }
            }
            Tok::Name(k) if k == "rels" => {
                let start = (t.line, t.column);
                // relator expressions run to the next ';'
                let end = toks[pos..]
                    .iter()
                    .position(|t| t.tok == Tok::Sym(';'))
                    .map(|e| pos + e)
                    .ok_or_else(|| syntax(start.0, start.1, "missing ';' after rels"))?;
                let mut p = Parser {
                    toks: toks[pos + 1..end].to_vec(),
                    pos: 0,
                    names: &names,
                    end: (toks[end].line, toks[end].column),
                };
                if p.toks.is_empty() {
                    return Err(syntax(start.0, start.1, "empty rels statement"));
                }
                for e in p.expr_list()? {
                    rel_exprs.push((e, start));
                }
                if p.pos != p.toks.len() {
                    return Err(p.err("expected ',' or ';'"));
                }
                pos = end + 1;
            }
            _ => return Err(syntax(t.line, t.column, "expected 'gens' or 'rels'")),
        }
    }
    let mut relators = Vec::with_capacity(rel_exprs.len());
    for (i, (e, (line, column))) in rel_exprs.iter().enumerate() {
        let w = expand(e).cyclic_reduce();
        if w.is_empty() {
            return Err(syntax(
                *line,
                *column,
                &format!("relator {} is empty after reduction", i + 1),
            ));
        }
        relators.push(w);
    }
    Ok(Presentation::new(names, relators)?)
}

/// Parses a single word expression over the given generator names.
pub fn parse_word(text: &str, names: &[String]) -> Result<Word, ParseError> {
    let words = parse_word_list(text, names)?;
    if words.len() != 1 {
        return Err(syntax(1, 1, "expected a single word"));
    }
    Ok(words.into_iter().next().unwrap())
}

/// Parses a comma-separated list of word expressions. Empty input gives an empty list.
pub fn parse_word_list(text: &str, names: &[String]) -> Result<Vec<Word>, ParseError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Ok(Vec::new());
    }
    let mut p = Parser::new(toks, names, text);
    let exprs = p.expr_list()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(exprs.iter().map(expand).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_expansion() {
        let p = parse_presentation("gens a,b,c; rels (a*b)^2;").unwrap();
        assert_eq!(p.relators()[0].letters(), &[1, 2, 1, 2]);
    }

    #[test]
    fn commutator_convention() {
        // generator order a, c, b: a=1, c=2, b=3
        let p = parse_presentation("gens a,c,b; rels [a,c^-1]*b^2;").unwrap();
        assert_eq!(p.relators()[0].letters(), &[-1, 2, 1, -2, 3, 3]);
    }

    #[test]
    fn empty_relator_rejected() {
        let e = parse_presentation("gens a; rels a^4*a^-4;").unwrap_err();
        assert!(
            matches!(e, ParseError::Syntax { ref message, .. } if message.contains("empty")),
            "{e}"
        );
    }

    #[test]
    fn zero_power_is_empty_word() {
        let names = vec!["p".to_string()];
        assert!(parse_word("p^0", &names).unwrap().is_empty());
        let p = parse_presentation("gens a,b; rels a^0*b;").unwrap();
        assert_eq!(p.relators()[0].letters(), &[2]);
    }

    #[test]
    fn syntax_errors_carry_position() {
        let e = parse_presentation("gens a;\nrels a*;").unwrap_err();
        match e {
            ParseError::Syntax { line, column, .. } => assert_eq!((line, column), (2, 8)),
            other => panic!("{other:?}"),
        }
        let e = parse_presentation("gens a;\n  rels a*q;").unwrap_err();
        assert_eq!(
            e,
            ParseError::UnknownGenerator {
                line: 2,
                column: 10,
                name: "q".into()
            }
        );
        assert!(parse_presentation("gens a rels a;").is_err());
        assert!(parse_presentation("gens a; rels (a;").is_err());
        assert!(parse_presentation("gens \u{e9};").is_err());
    }

    #[test]
    fn comments_and_nested_commutators() {
        let text = "# comment\ngens a, b; # trailing\nrels [[a,b],a];\n";
        let p = parse_presentation(text).unwrap();
        let (a, b) = (Word::generator(0), Word::generator(1));
        let want = Word::commutator(&Word::commutator(&a, &b), &a).cyclic_reduce();
        assert_eq!(p.relators()[0], want);
    }

    #[test]
    fn lattice_word_x() {
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let x = parse_word("(a*c^-1)^4", &names).unwrap();
        assert_eq!(x.letters(), &[1, -3, 1, -3, 1, -3, 1, -3]);
        let list = parse_word_list("(a*c^-1)^4,(c^-1*a)^4", &names).unwrap();
        assert_eq!(list.len(), 2);
        assert!(parse_word_list("  ", &names).unwrap().is_empty());
    }

    #[test]
    fn expand_commutator_tree() {
        let e = Expr::comm(Expr::gen(0), Expr::gen(2).inv());
        assert_eq!(expand(&e).letters(), &[-1, 3, 1, -3]);
        assert!(expand(&Expr::gen(1).pow(0)).is_empty());
    }
}
