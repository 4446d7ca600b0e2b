//! Parser for the presentation language:
//!
//! ```text
//! presentation := base (";" step)*
//! base         := "P2" | "F(" nat ")"
//! step         := "blowup" ("generic" | "onZ")
//! ```
//!
//! Whitespace is insignificant and `#` starts a comment running to the end
//! of the line.

use crate::error::{Error, Result};
use crate::lattice::BaseKind;

use super::{BlowupStep, Locus, SurfacePresentation};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Nat(String),
    LParen,
    RParen,
    Semi,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Nat(n) => format!("number `{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        match c {
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump(&mut chars);
                }
            }
            c if c.is_whitespace() => {
                bump(&mut chars);
            }
            '(' | ')' | ';' => {
                bump(&mut chars);
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    _ => Tok::Semi,
                };
                out.push(Spanned {
                    tok,
                    line: l,
                    column: col,
                });
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                    s.push(bump(&mut chars));
                }
                out.push(Spanned {
                    tok: Tok::Nat(s),
                    line: l,
                    column: col,
                });
            }
            c if c.is_ascii_alphabetic() => {
                let mut s = String::new();
                while chars
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
                {
                    s.push(bump(&mut chars));
                }
                out.push(Spanned {
                    tok: Tok::Word(s),
                    line: l,
                    column: col,
                });
            }
            other => {
                return Err(Error::Syntax {
                    line: l,
                    column: col,
                    message: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error<T>(at: &Spanned, message: String) -> Result<T> {
        Err(Error::Syntax {
            line: at.line,
            column: at.column,
            message,
        })
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Spanned> {
        let t = self.next();
        if t.tok == want {
            Ok(t)
        } else {
            Self::error(&t, format!("expected {what}, found {}", t.tok.describe()))
        }
    }

    fn base(&mut self) -> Result<BaseKind> {
        let t = self.next();
        match &t.tok {
            Tok::Word(w) if w == "P2" => Ok(BaseKind::P2),
            Tok::Word(w) if w == "F" => {
                self.expect(Tok::LParen, "`(` after `F`")?;
                let n = self.next();
                let value = match &n.tok {
                    Tok::Nat(digits) => digits.parse::<u32>().or_else(|_| {
                        Self::error(&n, format!("Hirzebruch index {digits} is too large"))
                    })?,
                    other => {
                        return Self::error(
                            &n,
                            format!("expected a Hirzebruch index, found {}", other.describe()),
                        )
                    }
                };
                self.expect(Tok::RParen, "`)`")?;
                Ok(BaseKind::Hirzebruch(value))
            }
            other => Self::error(
                &t,
                format!("expected a base `P2` or `F(n)`, found {}", other.describe()),
            ),
        }
    }

    fn step(&mut self) -> Result<(BlowupStep, Spanned)> {
        let kw = self.next();
        if kw.tok != Tok::Word("blowup".into()) {
            return Self::error(
                &kw,
                format!("expected `blowup`, found {}", kw.tok.describe()),
            );
        }
        let t = self.next();
        let locus = match &t.tok {
            Tok::Word(w) if w == "generic" => Locus::OffZ,
            Tok::Word(w) if w == "onZ" => Locus::OnZ,
            other => {
                return Self::error(
                    &t,
                    format!("expected `generic` or `onZ`, found {}", other.describe()),
                )
            }
        };
        Ok((BlowupStep { locus }, t))
    }
}

pub fn parse_presentation(text: &str) -> Result<SurfacePresentation> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let base = p.base()?;
    let mut steps = Vec::new();
    loop {
        let t = p.next();
        match &t.tok {
            Tok::Eof => break,
            Tok::Semi => {
                let (step, at) = p.step()?;
                if base == BaseKind::P2 && steps.is_empty() && step.locus == Locus::OnZ {
                    return Parser::error(
                        &at,
                        "`onZ` needs a section Z; the first blow-up of P2 must be `generic`".into(),
                    );
                }
                steps.push(step);
            }
            other => {
                return Parser::error(
                    &t,
                    format!("expected `;` or end of input, found {}", other.describe()),
                )
            }
        }
    }
    debug_assert_eq!(p.peek().tok, Tok::Eof);
    SurfacePresentation::new(base, steps)
}
