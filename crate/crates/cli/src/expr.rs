//! Real-number expressions: decimal literals, `pi`, `lambda`,
//! `sqrt(<integer>)`, `+ - * /` and parentheses.

use rug::float::Constant;
use rug::Float;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "at offset {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(String),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            out.push((start, Token::Number(chars[start..i].iter().collect())));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Token::Ident(chars[start..i].iter().collect())));
        } else if "+-*/()".contains(c) {
            out.push((i, Token::Op(c)));
            i += 1;
        } else {
            return Err(ParseError {
                position: i,
                message: format!("unexpected character '{c}'"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    bits: u32,
    lambda: &'a Float,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.offset(),
            message: message.into(),
        })
    }

    fn expect(&mut self, op: char) -> Result<(), ParseError> {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(format!("expected '{op}'"))
        }
    }

    fn expr(&mut self) -> Result<Float, ParseError> {
        let mut acc = self.term()?;
        while let Some(Token::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Float, ParseError> {
        let mut acc = self.unary()?;
        while let Some(Token::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let at = self.offset();
            let rhs = self.unary()?;
            if op == '/' && rhs.is_zero() {
                return Err(ParseError {
                    position: at,
                    message: "division by zero".into(),
                });
            }
            acc = if op == '*' { acc * rhs } else { acc / rhs };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Float, ParseError> {
        match self.peek() {
            Some(Token::Op('-')) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Token::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Float, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return self.fail("unexpected end of expression");
        };
        match tok {
            Token::Number(s) => {
                let parsed = Float::parse(&s).map_err(|e| ParseError {
                    position: self.offset(),
                    message: format!("bad number '{s}': {e}"),
                })?;
                self.pos += 1;
                Ok(Float::with_val(self.bits, parsed))
            }
            Token::Op('(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Token::Ident(name) => match name.as_str() {
                "pi" => {
                    self.pos += 1;
                    Ok(Float::with_val(self.bits, Constant::Pi))
                }
                "lambda" => {
                    self.pos += 1;
                    Ok(Float::with_val(self.bits, self.lambda))
                }
                "sqrt" => {
                    self.pos += 1;
                    self.expect('(')?;
                    let at = self.offset();
                    let Some(Token::Number(n)) = self.peek().cloned() else {
                        return self.fail("sqrt takes a non-negative integer");
                    };
                    let n: u64 = n.parse().map_err(|_| ParseError {
                        position: at,
                        message: format!("sqrt takes a non-negative integer, got '{n}'"),
                    })?;
                    self.pos += 1;
                    self.expect(')')?;
                    Ok(Float::with_val(self.bits, n).sqrt())
                }
                other => self.fail(format!("unknown name '{other}'")),
            },
            Token::Op(c) => self.fail(format!("unexpected '{c}'")),
        }
    }
}

/// Evaluates `src` at `bits` of precision with `lambda` bound to `λ_q`.
pub fn evaluate(src: &str, lambda: &Float, bits: u32) -> Result<Float, ParseError> {
    let tokens = tokenize(src)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        end: src.len(),
        bits,
        lambda,
    };
    let v = p.expr()?;
    if p.pos != p.tokens.len() {
        return p.fail("trailing input");
    }
    Ok(v)
}
