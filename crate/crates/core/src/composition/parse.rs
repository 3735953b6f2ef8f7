//! Parser for composition spec files.
//!
//! ```text
//! spec      := qline (stepsline | pline wordline)
//! qline     := "q" "=" signed-int
//! pline     := "p" "=" signed-int
//! stepsline := "steps" "=" pair+          pair  := "(" signed-int "," signed-int ")"
//! wordline  := "word" "=" token+          token := ("S" | "T") signed-int?
//! ```
//!
//! One assignment per line, `#` starts a comment, blank lines are ignored.
//! A bare `T` means `T_0 = (1, 0)` and a bare `S` means `S_1 = (p, 1)`.

use super::{AffineStep, Composition};
use crate::error::{Error, Result};

struct Cursor<'a> {
    line: usize,
    // 1-based column of `rest[0]` in the source line
    column: usize,
    rest: &'a str,
}

impl<'a> Cursor<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::parse(self.line, self.column, message)
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest.trim_start();
        self.column += self.rest[..self.rest.len() - trimmed.len()].chars().count();
        self.rest = trimmed;
    }

    fn bump(&mut self, n: usize) {
        self.column += self.rest[..n].chars().count();
        self.rest = &self.rest[n..];
    }

    fn peek(&self) -> Option<char> {
        self.rest.chars().next()
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.rest.is_empty()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump(c.len_utf8());
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn starts_int(&self) -> bool {
        let mut chars = self.rest.chars();
        match chars.next() {
            Some('+' | '-') => chars.next().is_some_and(|c| c.is_ascii_digit()),
            Some(c) => c.is_ascii_digit(),
            None => false,
        }
    }

    fn signed_int(&mut self) -> Result<i64> {
        self.skip_ws();
        if !self.starts_int() {
            return Err(self.err("expected an integer"));
        }
        let sign_len = usize::from(self.rest.starts_with(['+', '-']));
        let digits = self.rest[sign_len..]
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.rest.len() - sign_len);
        let text = &self.rest[..sign_len + digits];
        let value = text
            .parse::<i64>()
            .map_err(|_| self.err(format!("integer {text} is out of range")))?;
        self.bump(text.len());
        Ok(value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Key {
    Q,
    P,
    Steps,
    Word,
}

struct Assignment<'a> {
    key: Key,
    value: Cursor<'a>,
    line: usize,
}

fn assignments(text: &str) -> Result<Vec<Assignment<'_>>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        let mut cur = Cursor {
            line,
            column: 1,
            rest: body,
        };
        if cur.at_end() {
            continue;
        }
        let key_len = cur
            .rest
            .find(|c: char| !c.is_ascii_alphabetic())
            .unwrap_or(cur.rest.len());
        let key = match &cur.rest[..key_len] {
            "q" => Key::Q,
            "p" => Key::P,
            "steps" => Key::Steps,
            "word" => Key::Word,
            "" => return Err(cur.err("expected a key (q, p, steps or word)")),
            other => return Err(cur.err(format!("unknown key '{other}'"))),
        };
        cur.bump(key_len);
        cur.expect('=')?;
        out.push(Assignment {
            key,
            value: cur,
            line,
        });
    }
    Ok(out)
}

fn single_int(mut value: Cursor<'_>) -> Result<i64> {
    let v = value.signed_int()?;
    if !value.at_end() {
        return Err(value.err("unexpected trailing input"));
    }
    Ok(v)
}

fn pairs(mut value: Cursor<'_>) -> Result<Vec<AffineStep>> {
    let mut steps = Vec::new();
    while !value.at_end() {
        value.expect('(')?;
        let p = value.signed_int()?;
        value.expect(',')?;
        let k = value.signed_int()?;
        value.expect(')')?;
        steps.push(AffineStep::new(p, k));
    }
    if steps.is_empty() {
        return Err(value.err("expected at least one (p,k) pair"));
    }
    Ok(steps)
}

fn word(mut value: Cursor<'_>, p: i64) -> Result<Vec<AffineStep>> {
    let mut steps = Vec::new();
    while !value.at_end() {
        let letter = value.peek().expect("not at end");
        let (mult, default_k) = match letter {
            'T' => (1, 0),
            'S' => (p, 1),
            _ => return Err(value.err(format!("expected 'S' or 'T', found '{letter}'"))),
        };
        value.bump(1);
        let k = if value.starts_int() {
            value.signed_int()?
        } else {
            default_k
        };
        steps.push(AffineStep::new(mult, k));
    }
    if steps.is_empty() {
        return Err(value.err("expected at least one S/T token"));
    }
    Ok(steps)
}

/// Parses the spec text into a validated [`Composition`].
pub fn parse_spec(text: &str) -> Result<Composition> {
    let mut items = assignments(text)?.into_iter();
    let eof_line = text.lines().count().max(1);

    let q = match items.next() {
        Some(a) if a.key == Key::Q => single_int(a.value)?,
        Some(a) => return Err(Error::parse(a.line, 1, "the first assignment must be q")),
        None => return Err(Error::parse(eof_line, 1, "missing q assignment")),
    };
    let steps = match items.next() {
        Some(a) if a.key == Key::Steps => pairs(a.value)?,
        Some(a) if a.key == Key::P => {
            let p = single_int(a.value)?;
            match items.next() {
                Some(w) if w.key == Key::Word => word(w.value, p)?,
                Some(w) => return Err(Error::parse(w.line, 1, "expected word after p")),
                None => return Err(Error::parse(eof_line, 1, "missing word assignment")),
            }
        }
        Some(a) => return Err(Error::parse(a.line, 1, "expected steps or p after q")),
        None => return Err(Error::parse(eof_line, 1, "missing steps (or p and word)")),
    };
    if let Some(extra) = items.next() {
        return Err(Error::parse(extra.line, 1, "unexpected assignment after the composition"));
    }
    Composition::new(q, steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn steps(c: &Composition) -> Vec<(i64, i64)> {
        c.steps().iter().map(|s| (s.p, s.k)).collect()
    }

    fn parse_err(text: &str) -> (usize, usize) {
        match parse_spec(text) {
            Err(Error::Parse { line, column, .. }) => (line, column),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn steps_form() {
        let c = parse_spec("q=3\nsteps=(-5,-2) (2,1) (7,6) (-1,-3)").unwrap();
        assert_eq!(c.q(), 3);
        assert_eq!(steps(&c), vec![(-5, -2), (2, 1), (7, 6), (-1, -3)]);
    }

    #[test]
    fn word_form_with_subscripts() {
        let c = parse_spec("q=2\np=11\nword=T0 T0 T0 T0 S5 T0 S3").unwrap();
        assert_eq!(
            steps(&c),
            vec![(1, 0), (1, 0), (1, 0), (1, 0), (11, 5), (1, 0), (11, 3)]
        );
    }

    #[test]
    fn bare_letters_use_classic_shifts() {
        let c = parse_spec("q=2\np=3\nword=T S").unwrap();
        assert_eq!(steps(&c), vec![(1, 0), (3, 1)]);
        let c = parse_spec("q=2\np=3\nword=TTTSSSTSSSS").unwrap();
        assert_eq!(c.len(), 11);
        let c = parse_spec("q=2\np=3\nword=S-3T+2").unwrap();
        assert_eq!(steps(&c), vec![(3, -3), (1, 2)]);
    }

    #[test]
    fn comments_whitespace_and_blank_lines() {
        let text = "# four-step example\n\n  q = 3   # denominator\nsteps = ( -5 , -2 )(2,1)\n";
        let c = parse_spec(text).unwrap();
        assert_eq!(steps(&c), vec![(-5, -2), (2, 1)]);
    }

    #[test]
    fn error_positions() {
        assert_eq!(parse_err("q=3\nsteps=(1,2) (3;4)"), (2, 15));
        assert_eq!(parse_err("q=x"), (1, 3));
        assert_eq!(parse_err("r=3"), (1, 1));
        assert_eq!(parse_err("q=2\np=3\nword=T X"), (3, 8));
        assert_eq!(parse_err("steps=(1,0)"), (1, 1));
        assert_eq!(parse_err("q=2"), (1, 1));
        assert_eq!(parse_err("q=2\np=3"), (2, 1));
        assert_eq!(parse_err("q=2\nsteps=(1,0)\nq=3"), (3, 1));
        assert_eq!(parse_err("q=2 3"), (1, 5));
        assert_eq!(parse_err("q=99999999999999999999"), (1, 3));
        assert_eq!(parse_err("q=2\nsteps="), (2, 7));
    }

    #[test]
    fn validation_errors_are_not_parse_errors() {
        assert!(matches!(parse_spec("q=2\nsteps=(2,1)"), Err(Error::Validation(_))));
        assert!(matches!(parse_spec("q=0\nsteps=(1,1)"), Err(Error::Validation(_))));
        assert!(matches!(parse_spec("q=3\nsteps=(0,1)"), Err(Error::Validation(_))));
        assert!(matches!(parse_spec("q=2\np=4\nword=T S"), Err(Error::Validation(_))));
    }
}
