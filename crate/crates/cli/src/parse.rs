//! Parsing of command-line values: field entries, Gram matrices, and
//! `W(C)` expressions.

use anyhow::{anyhow, bail, Context, Result};
use wittring::{FieldElement, FiniteField, Pic2Group, PicElement, SquareClass, WittClass, WittContext};

/// Splits on `sep` outside parentheses.
pub fn split_top(text: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(text[start..i].trim());
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(text[start..].trim());
    parts
}

/// An integer (reduced mod p) or a coefficient tuple `(c0,c1,...)`.
pub fn parse_entry(field: &FiniteField, text: &str) -> Result<FieldElement> {
    let text = text.trim();
    if let Some(inner) = text.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        let coeffs = inner
            .split(',')
            .map(|c| c.trim().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .with_context(|| format!("bad coefficient tuple {text:?}"))?;
        return Ok(field.from_coeffs(&coeffs)?);
    }
    let v: i64 = text.parse().with_context(|| format!("bad field entry {text:?}"))?;
    Ok(field.int(v))
}

pub fn parse_diag(field: &FiniteField, text: &str) -> Result<Vec<FieldElement>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    split_top(text, ',')
        .into_iter()
        .map(|e| parse_entry(field, e))
        .collect()
}

/// Row-major rows separated by `;`, entries by `,`.
pub fn parse_gram(field: &FiniteField, text: &str) -> Result<(usize, Vec<FieldElement>)> {
    let rows: Vec<Vec<FieldElement>> = split_top(text, ';')
        .into_iter()
        .filter(|r| !r.is_empty())
        .map(|r| parse_diag(field, r))
        .collect::<Result<_>>()?;
    let n = rows.len();
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        bail!("Gram matrix row {i} has {} entries, expected {n}", r.len());
    }
    Ok((n, rows.into_iter().flatten().collect()))
}

/// Recursive-descent evaluator for `W(C)` expressions:
///
/// ```text
/// expr   := term (('+' | '-') term)*
/// term   := unary ('*' unary)*
/// unary  := '-' unary | atom
/// atom   := '0' | '(' expr ')' | '<' letter (',' letter)* '>'
/// letter := ['-'] ('1' | 's') [':' bits]
/// ```
///
/// `<1, -s:01>` is the orthogonal sum of `<1>` and `<-(L_s)>` with `L = 01`.
pub struct ExprParser<'a> {
    chars: Vec<char>,
    pos: usize,
    context: WittContext,
    group: Pic2Group,
    source: &'a str,
}

impl<'a> ExprParser<'a> {
    pub fn new(source: &'a str, context: WittContext, group: Pic2Group) -> Self {
        ExprParser {
            chars: source.chars().collect(),
            pos: 0,
            context,
            group,
            source,
        }
    }

    pub fn evaluate(mut self) -> Result<WittClass> {
        let v = self.expr()?;
        self.skip_ws();
        if self.pos != self.chars.len() {
            bail!(
                "unexpected {:?} at offset {} in {:?}",
                self.chars[self.pos],
                self.pos,
                self.source
            );
        }
        Ok(v)
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            other => Err(anyhow!("expected {c:?} at offset {}, found {other:?}", self.pos)),
        }
    }

    fn expr(&mut self) -> Result<WittClass> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' {
                acc.try_add(rhs)?
            } else {
                acc.try_sub(rhs)?
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<WittClass> {
        let mut acc = self.unary()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = acc.try_mul(self.unary()?)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<WittClass> {
        if self.peek() == Some('-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<WittClass> {
        match self.peek() {
            Some('0') => {
                self.pos += 1;
                Ok(WittClass::zero(self.context, self.group))
            }
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some('<') => {
                self.pos += 1;
                let mut acc = WittClass::zero(self.context, self.group);
                loop {
                    acc = acc.try_add(self.letter()?)?;
                    match self.peek() {
                        Some(',') => self.pos += 1,
                        _ => break,
                    }
                }
                self.expect('>')?;
                Ok(acc)
            }
            other => Err(anyhow!("unexpected {other:?} at offset {}", self.pos)),
        }
    }

    fn letter(&mut self) -> Result<WittClass> {
        let negate = if self.peek() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let u = match self.peek() {
            Some('1') => SquareClass::One,
            Some('s') => SquareClass::NonSquare,
            other => bail!("expected square class 1 or s at offset {}, found {other:?}", self.pos),
        };
        self.pos += 1;
        let pic = if self.peek() == Some(':') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.chars.get(self.pos).is_some_and(|c| *c == '0' || *c == '1') {
                self.pos += 1;
            }
            let bits: String = self.chars[start..self.pos].iter().collect();
            let pic = PicElement::parse_bits(&bits)?;
            if pic.rank() != self.group.rank() {
                bail!(
                    "line bundle {bits:?} has rank {}, expected {}",
                    pic.rank(),
                    self.group.rank()
                );
            }
            pic
        } else {
            self.group.identity()
        };
        let u = if negate { self.context.sigma() * u } else { u };
        Ok(WittClass::odd(self.context, u, pic))
    }
}
