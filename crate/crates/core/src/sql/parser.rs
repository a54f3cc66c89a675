// Copyright 2026 The ESC Engine Authors
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

//! Tokenizer and recursive-descent parser for the SELECT subset.
//!
//! ```text
//! query      := SELECT projection FROM table (',' table)* [WHERE expr] [';']
//! projection := '*' | COUNT '(' '*' ')' | column (',' column)*
//! table      := ident [[AS] ident]
//! expr       := and (OR and)*
//! and        := unary (AND unary)*
//! unary      := NOT unary | '(' expr ')' | predicate
//! predicate  := operand cmp operand
//!             | operand [NOT] BETWEEN operand AND operand
//!             | operand [NOT] BETWEEN '(' operand ',' operand ')'
//! operand    := column | literal | ident '(' operand (',' operand)* ')'
//! ```

use super::ast::{
    AstQuery, CmpOp, ColumnName, Expr, Ident, Literal, Operand, Projection, Span, TableRef,
};
use super::SqlError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Number(String),
    Str(String),
    Op(CmpOp),
    LParen,
    RParen,
    Comma,
    Dot,
    Star,
    Minus,
    Semicolon,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: Span,
}

fn tokenize(sql: &str) -> Result<Vec<Token>, SqlError> {
    let chars: Vec<char> = sql.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for k in 0..n {
            if chars[*i + k] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        }
        *i += n;
    };
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, column: col };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1);
            }
            continue;
        }
        let (tok, len) = if c.is_ascii_alphabetic() || c == '_' {
            let len = chars[i..]
                .iter()
                .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                .count();
            let word: String = chars[i..i + len].iter().collect();
            (Tok::Word(word.to_ascii_lowercase()), len)
        } else if c.is_ascii_digit()
            || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()))
        {
            let mut len = chars[i..].iter().take_while(|c| c.is_ascii_digit()).count();
            if chars.get(i + len) == Some(&'.') {
                len += 1;
                len += chars[i + len..]
                    .iter()
                    .take_while(|c| c.is_ascii_digit())
                    .count();
            }
            if chars
                .get(i + len)
                .is_some_and(|c| c.is_ascii_alphabetic() || *c == '_')
            {
                return Err(SqlError::Syntax {
                    message: "malformed number".into(),
                    span,
                });
            }
            (Tok::Number(chars[i..i + len].iter().collect()), len)
        } else if c == '\'' {
            let mut value = String::new();
            let mut j = i + 1;
            loop {
                match chars.get(j) {
                    None => {
                        return Err(SqlError::Syntax {
                            message: "unterminated string literal".into(),
                            span,
                        })
                    }
                    Some('\'') if chars.get(j + 1) == Some(&'\'') => {
                        value.push('\'');
                        j += 2;
                    }
                    Some('\'') => break,
                    Some(ch) => {
                        value.push(*ch);
                        j += 1;
                    }
                }
            }
            (Tok::Str(value), j + 1 - i)
        } else {
            let next = chars.get(i + 1).copied();
            match (c, next) {
                ('<', Some('=')) => (Tok::Op(CmpOp::LtEq), 2),
                ('>', Some('=')) => (Tok::Op(CmpOp::GtEq), 2),
                ('<', Some('>')) | ('!', Some('=')) => (Tok::Op(CmpOp::NotEq), 2),
                ('<', _) => (Tok::Op(CmpOp::Lt), 1),
                ('>', _) => (Tok::Op(CmpOp::Gt), 1),
                ('=', _) => (Tok::Op(CmpOp::Eq), 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                (',', _) => (Tok::Comma, 1),
                ('.', _) => (Tok::Dot, 1),
                ('*', _) => (Tok::Star, 1),
                ('-', _) => (Tok::Minus, 1),
                (';', _) => (Tok::Semicolon, 1),
                _ => {
                    return Err(SqlError::Syntax {
                        message: format!("unexpected character {c:?}"),
                        span,
                    })
                }
            }
        };
        tokens.push(Token { tok, span });
        advance(&mut i, &mut line, &mut col, len);
    }
    tokens.push(Token {
        tok: Tok::Eof,
        span: Span { line, column: col },
    });
    Ok(tokens)
}

const RESERVED: &[&str] = &[
    "select", "from", "where", "and", "or", "not", "between", "as",
];

/// Words that start constructs outside the grammar, with the name reported.
fn unsupported(word: &str) -> Option<&'static str> {
    Some(match word {
        "group" => "GROUP BY",
        "order" => "ORDER BY",
        "having" => "HAVING",
        "limit" => "LIMIT",
        "offset" => "OFFSET",
        "join" | "inner" | "left" | "right" | "full" | "outer" | "cross" | "natural" => "JOIN",
        "union" | "intersect" | "except" => "set operation",
        "distinct" => "DISTINCT",
        "in" => "IN",
        "like" => "LIKE",
        "is" => "IS NULL",
        "exists" => "EXISTS",
        "case" => "CASE",
        "with" => "WITH",
        "insert" | "update" | "delete" | "create" | "drop" | "alter" => "non-SELECT statement",
        "sum" | "avg" | "min" | "max" => "aggregate other than COUNT(*)",
        _ => return None,
    })
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

/// Parses one SELECT statement.
pub fn parse(sql: &str) -> Result<AstQuery, SqlError> {
    let mut parser = Parser {
        tokens: tokenize(sql)?,
        pos: 0,
    };
    let query = parser.query()?;
    if parser.peek() == &Tok::Semicolon {
        parser.pos += 1;
    }
    match parser.peek().clone() {
        Tok::Eof => Ok(query),
        Tok::Word(w) => Err(parser.unsupported_or_syntax(&w)),
        other => Err(parser.syntax(format!(
            "unexpected {} after end of query",
            describe(&other)
        ))),
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Word(w) => format!("'{w}'"),
        Tok::Number(n) => format!("number {n}"),
        Tok::Str(s) => format!("string '{s}'"),
        Tok::Op(op) => format!("'{op}'"),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::Comma => "','".into(),
        Tok::Dot => "'.'".into(),
        Tok::Star => "'*'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Semicolon => "';'".into(),
        Tok::Eof => "end of input".into(),
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax(&self, message: String) -> SqlError {
        SqlError::Syntax {
            message,
            span: self.span(),
        }
    }

    fn unsupported_or_syntax(&self, word: &str) -> SqlError {
        match unsupported(word) {
            Some(name) => SqlError::UnsupportedConstruct {
                construct: name.to_string(),
                span: self.span(),
            },
            None => self.syntax(format!("unexpected '{word}'")),
        }
    }

    fn is_word(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Word(w) if w == word)
    }

    fn eat_word(&mut self, word: &str) -> bool {
        if self.is_word(word) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_word(&mut self, word: &str) -> Result<(), SqlError> {
        if self.eat_word(word) {
            return Ok(());
        }
        match self.peek().clone() {
            Tok::Word(w) if unsupported(&w).is_some() => Err(self.unsupported_or_syntax(&w)),
            other => Err(self.syntax(format!(
                "expected {}, found {}",
                word.to_ascii_uppercase(),
                describe(&other)
            ))),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Span, SqlError> {
        if *self.peek() == tok {
            Ok(self.next().span)
        } else {
            Err(self.syntax(format!(
                "expected {}, found {}",
                describe(&tok),
                describe(self.peek())
            )))
        }
    }

    fn ident(&mut self) -> Result<Ident, SqlError> {
        match self.peek().clone() {
            Tok::Word(w) if RESERVED.contains(&w.as_str()) => {
                Err(self.syntax(format!("expected identifier, found keyword '{w}'")))
            }
            Tok::Word(w) if unsupported(&w).is_some() => Err(self.unsupported_or_syntax(&w)),
            Tok::Word(w) => {
                let span = self.next().span;
                Ok(Ident { value: w, span })
            }
            other => Err(self.syntax(format!("expected identifier, found {}", describe(&other)))),
        }
    }

    fn query(&mut self) -> Result<AstQuery, SqlError> {
        if let Tok::Word(w) = self.peek().clone() {
            if w != "select" {
                return Err(self.unsupported_or_syntax(&w));
            }
        }
        self.expect_word("select")?;
        if self.is_word("distinct") {
            return Err(self.unsupported_or_syntax("distinct"));
        }
        let projection = self.projection()?;
        self.expect_word("from")?;
        let mut tables = vec![self.table_ref()?];
        while *self.peek() == Tok::Comma {
            self.next();
            tables.push(self.table_ref()?);
        }
        let selection = if self.eat_word("where") {
            Some(self.expr()?)
        } else {
            None
        };
        Ok(AstQuery {
            projection,
            tables,
            selection,
        })
    }

    fn projection(&mut self) -> Result<Projection, SqlError> {
        if *self.peek() == Tok::Star {
            self.next();
            return Ok(Projection::Star);
        }
        if self.is_word("count") && *self.peek_at(1) == Tok::LParen {
            self.next();
            self.next();
            if *self.peek() != Tok::Star {
                return Err(SqlError::UnsupportedConstruct {
                    construct: "COUNT over an expression".into(),
                    span: self.span(),
                });
            }
            self.next();
            self.expect(Tok::RParen)?;
            return Ok(Projection::CountStar);
        }
        let mut columns = vec![self.column()?];
        while *self.peek() == Tok::Comma {
            self.next();
            columns.push(self.column()?);
        }
        Ok(Projection::Columns(columns))
    }

    fn column(&mut self) -> Result<ColumnName, SqlError> {
        if let Tok::Word(w) = self.peek().clone() {
            if unsupported(&w).is_some() && *self.peek_at(1) == Tok::LParen {
                return Err(self.unsupported_or_syntax(&w));
            }
        }
        let first = self.ident()?;
        if *self.peek() == Tok::Dot {
            self.next();
            let name = self.ident()?;
            Ok(ColumnName {
                qualifier: Some(first),
                name,
            })
        } else {
            Ok(ColumnName {
                qualifier: None,
                name: first,
            })
        }
    }

    fn table_ref(&mut self) -> Result<TableRef, SqlError> {
        if *self.peek() == Tok::LParen {
            return Err(SqlError::UnsupportedConstruct {
                construct: "subquery".into(),
                span: self.span(),
            });
        }
        let name = self.ident()?;
        let alias = if self.eat_word("as") {
            Some(self.ident()?)
        } else {
            match self.peek() {
                Tok::Word(w) if !RESERVED.contains(&w.as_str()) && unsupported(w).is_none() => {
                    Some(self.ident()?)
                }
                _ => None,
            }
        };
        Ok(TableRef { name, alias })
    }

    fn expr(&mut self) -> Result<Expr, SqlError> {
        let mut left = self.and_expr()?;
        while self.eat_word("or") {
            let right = self.and_expr()?;
            left = Expr::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn and_expr(&mut self) -> Result<Expr, SqlError> {
        let mut left = self.unary()?;
        while self.eat_word("and") {
            let right = self.unary()?;
            left = Expr::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Expr, SqlError> {
        if self.eat_word("not") {
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        if *self.peek() == Tok::LParen {
            if matches!(self.peek_at(1), Tok::Word(w) if w == "select") {
                return Err(SqlError::UnsupportedConstruct {
                    construct: "subquery".into(),
                    span: self.span(),
                });
            }
            self.next();
            let inner = self.expr()?;
            self.expect(Tok::RParen)?;
            return Ok(inner);
        }
        self.predicate()
    }

    fn predicate(&mut self) -> Result<Expr, SqlError> {
        let left = self.operand()?;
        let negated = self.eat_word("not");
        if self.eat_word("between") {
            let (low, high) = if *self.peek() == Tok::LParen {
                self.next();
                let low = self.operand()?;
                self.expect(Tok::Comma)?;
                let high = self.operand()?;
                self.expect(Tok::RParen)?;
                (low, high)
            } else {
                let low = self.operand()?;
                self.expect_word("and")?;
                (low, self.operand()?)
            };
            let between = Expr::Between {
                operand: left,
                low,
                high,
            };
            return Ok(if negated {
                Expr::Not(Box::new(between))
            } else {
                between
            });
        }
        if negated {
            return match self.peek().clone() {
                Tok::Word(w) => Err(self.unsupported_or_syntax(&w)),
                other => Err(self.syntax(format!(
                    "expected BETWEEN after NOT, found {}",
                    describe(&other)
                ))),
            };
        }
        match self.peek().clone() {
            Tok::Op(op) => {
                self.next();
                let right = self.operand()?;
                Ok(Expr::Compare { left, op, right })
            }
            Tok::Word(w) if unsupported(&w).is_some() => Err(self.unsupported_or_syntax(&w)),
            other => Err(self.syntax(format!(
                "expected comparison operator, found {}",
                describe(&other)
            ))),
        }
    }

    fn operand(&mut self) -> Result<Operand, SqlError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Number(n) => {
                self.next();
                Ok(Operand::Literal {
                    value: Literal::Number(n),
                    span,
                })
            }
            Tok::Minus => {
                self.next();
                match self.peek().clone() {
                    Tok::Number(n) => {
                        self.next();
                        Ok(Operand::Literal {
                            value: Literal::Number(format!("-{n}")),
                            span,
                        })
                    }
                    other => Err(self.syntax(format!(
                        "expected number after '-', found {}",
                        describe(&other)
                    ))),
                }
            }
            Tok::Str(s) => {
                self.next();
                Ok(Operand::Literal {
                    value: Literal::String(s),
                    span,
                })
            }
            Tok::Word(w) if w == "date" && matches!(self.peek_at(1), Tok::Str(_)) => {
                self.next();
                let Tok::Str(s) = self.next().tok else {
                    unreachable!("checked by peek")
                };
                Ok(Operand::Literal {
                    value: Literal::Date(s),
                    span,
                })
            }
            Tok::LParen => Err(
                if matches!(self.peek_at(1), Tok::Word(w) if w == "select") {
                    SqlError::UnsupportedConstruct {
                        construct: "subquery".into(),
                        span,
                    }
                } else {
                    self.syntax("expected column, literal or function call, found '('".into())
                },
            ),
            Tok::Word(w) if *self.peek_at(1) == Tok::LParen => {
                if unsupported(&w).is_some() || w == "count" {
                    return Err(SqlError::UnsupportedConstruct {
                        construct: format!("{} in predicate", w.to_ascii_uppercase()),
                        span,
                    });
                }
                let name = self.ident()?;
                self.next();
                let mut args = Vec::new();
                if *self.peek() != Tok::RParen {
                    args.push(self.operand()?);
                    while *self.peek() == Tok::Comma {
                        self.next();
                        args.push(self.operand()?);
                    }
                }
                self.expect(Tok::RParen)?;
                Ok(Operand::Call { name, args })
            }
            Tok::Word(_) => Ok(Operand::Column(self.column()?)),
            other => Err(self.syntax(format!(
                "expected column, literal or function call, found {}",
                describe(&other)
            ))),
        }
    }
}
