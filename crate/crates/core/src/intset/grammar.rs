//! Textual set-spec grammar.
//!
//! ```text
//! spec  := "empty" | "all" | "nonneg"
//!        | "single:" INT
//!        | "mod(" M "," R ")"            {M z + R : z in Z}
//!        | "modnn(" M "," R ")"          {M z + R : z >= 0}
//!        | "gap(" GEN ")"                see `GapGenerator`'s literal syntax
//!        | "union(" spec ("," spec)* ")"
//!        | "diff(" spec "," spec ")"
//!        | "affine(" D "," C "," spec ")"   D * spec + C, D != 0
//! ```
//!
//! Whitespace between tokens is ignored. `Display` prints the normalized
//! form, which parses back to an identical tree.

use std::fmt;

use super::SetSpec;
use crate::error::{Error, Result};
use crate::gapset::GapGenerator;

pub fn parse_spec(input: &str) -> Result<SetSpec> {
    let mut p = Parser { src: input, pos: 0 };
    let spec = p.spec()?;
    p.skip_ws();
    if p.pos != input.len() {
        return Err(p.error("trailing input"));
    }
    Ok(spec)
}

impl std::str::FromStr for SetSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_spec(s)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse { offset: self.pos, message: message.into() }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected {token:?}")))
        }
    }

    fn ident(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let len = self.rest().bytes().take_while(u8::is_ascii_lowercase).count();
        if len == 0 {
            return Err(self.error("expected a constructor name"));
        }
        let id = &self.rest()[..len];
        self.pos += len;
        Ok(id)
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let bytes = self.rest().as_bytes();
        let sign = usize::from(matches!(bytes.first(), Some(b'-' | b'+')));
        let digits = bytes[sign..].iter().take_while(|b| b.is_ascii_digit()).count();
        if digits == 0 {
            return Err(self.error("expected an integer"));
        }
        let text = &self.rest()[..sign + digits];
        let v = text.parse().map_err(|_| self.error(format!("integer {text} out of range")))?;
        self.pos += sign + digits;
        Ok(v)
    }

    /// Raw text up to the parenthesis that closes the one just consumed.
    fn balanced_body(&mut self) -> Result<&'a str> {
        let start = self.pos;
        let mut depth = 0usize;
        for (i, ch) in self.rest().char_indices() {
            match ch {
                '(' | '[' => depth += 1,
                ']' => depth = depth.saturating_sub(1),
                ')' if depth == 0 => {
                    self.pos = start + i;
                    return Ok(&self.src[start..start + i]);
                }
                ')' => depth -= 1,
                _ => {}
            }
        }
        Err(self.error("unbalanced parentheses"))
    }

    fn spec(&mut self) -> Result<SetSpec> {
        let at = self.pos;
        let malformed = |e: Error| match e {
            Error::MalformedSpec(m) => Error::Parse { offset: at, message: m },
            other => other,
        };
        match self.ident()? {
            "empty" => Ok(SetSpec::Empty),
            "all" => Ok(SetSpec::integers()),
            "nonneg" => Ok(SetSpec::nonneg()),
            "single" => {
                self.expect(":")?;
                Ok(SetSpec::Singleton(self.int()?))
            }
            name @ ("mod" | "modnn") => {
                self.expect("(")?;
                let m = self.int()?;
                self.expect(",")?;
                let r = self.int()?;
                self.expect(")")?;
                if name == "mod" {
                    SetSpec::mod_class(m, r).map_err(malformed)
                } else {
                    SetSpec::mod_class_nonneg(m, r).map_err(malformed)
                }
            }
            "gap" => {
                self.expect("(")?;
                let body_at = self.pos;
                let body = self.balanced_body()?;
                let generator: GapGenerator = body.parse().map_err(|e| match e {
                    Error::Parse { message, .. } => Error::Parse { offset: body_at, message },
                    Error::InvalidParameter(message) => Error::Parse { offset: body_at, message },
                    other => other,
                })?;
                self.expect(")")?;
                Ok(SetSpec::GapTail(generator))
            }
            "union" => {
                self.expect("(")?;
                let mut parts = vec![self.spec()?];
                while self.eat(",") {
                    parts.push(self.spec()?);
                }
                self.expect(")")?;
                Ok(SetSpec::union(parts))
            }
            "diff" => {
                self.expect("(")?;
                let a = self.spec()?;
                self.expect(",")?;
                let b = self.spec()?;
                self.expect(")")?;
                Ok(SetSpec::diff(a, b))
            }
            "affine" => {
                self.expect("(")?;
                let d = self.int()?;
                self.expect(",")?;
                let c = self.int()?;
                self.expect(",")?;
                let inner = self.spec()?;
                self.expect(")")?;
                SetSpec::shift_scale(inner, c, d).map_err(malformed)
            }
            other => Err(Error::Parse { offset: at, message: format!("unknown constructor {other:?}") }),
        }
    }
}

impl fmt::Display for SetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetSpec::Empty => write!(f, "empty"),
            SetSpec::Singleton(a) => write!(f, "single:{a}"),
            SetSpec::ModClass { m: 1, r: 0 } => write!(f, "all"),
            SetSpec::ModClass { m, r } => write!(f, "mod({m},{r})"),
            SetSpec::ModClassNonneg { m: 1, r: 0 } => write!(f, "nonneg"),
            SetSpec::ModClassNonneg { m, r } => write!(f, "modnn({m},{r})"),
            SetSpec::GapTail(g) => write!(f, "gap({g})"),
            SetSpec::Union(parts) => {
                write!(f, "union(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            SetSpec::Diff(a, b) => write!(f, "diff({a}, {b})"),
            SetSpec::ShiftScale { inner, c, d } => write!(f, "affine({d},{c}, {inner})"),
        }
    }
}
