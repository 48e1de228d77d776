//! Identity strings.
//!
//! A side is a sequence of factors. A factor is a letter or a parenthesized
//! group, optionally followed by a decimal exponent (`x2` is `xx`, `(xy)3`
//! is `xyxyxy`, `^k` is also accepted). A letter is one ASCII letter, with an
//! optional `_<digits>` index: `x_1` is the indexed letter `x1`. Whitespace
//! is ignored and `1` alone is the empty word. Whole sides may instead name a
//! fixture: `w<n>`, `w<n>p` or `pH:<file>`.

use std::path::Path;

use anyhow::{bail, Context, Result};
use brandt_core::finmon::Identity;
use brandt_core::hypergraph::Hypergraph;
use brandt_core::identities::p_word;
use brandt_core::words::{w_n, w_n_prime, NameTable, Word};

pub fn parse_identity(s: &str, names: &mut NameTable) -> Result<Identity> {
    let Some((l, r)) = s.split_once('=') else {
        bail!(brandt_core::Error::Parse(format!(
            "identity {s:?} has no '='"
        )));
    };
    if r.contains('=') {
        bail!(brandt_core::Error::Parse(format!(
            "identity {s:?} has more than one '='"
        )));
    }
    Ok(Identity::new(parse_side(l, names)?, parse_side(r, names)?))
}

/// A side of an identity, or a standalone word.
pub fn parse_side(s: &str, names: &mut NameTable) -> Result<Word> {
    let t = s.trim();
    if let Some(path) = t.strip_prefix("pH:") {
        let h =
            Hypergraph::load_json(Path::new(path)).with_context(|| format!("loading {path}"))?;
        return Ok(p_word(&h)?);
    }
    if let Some(rest) = t.strip_prefix('w') {
        let (digits, prime) = match rest.strip_suffix('p') {
            Some(d) => (d, true),
            None => (rest, false),
        };
        if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
            let n: u32 = digits
                .parse()
                .map_err(|_| perr(format!("bad fixture {t:?}")))?;
            return Ok(if prime { w_n_prime(n)? } else { w_n(n)? });
        }
    }
    let chars: Vec<char> = t.chars().filter(|c| !c.is_whitespace()).collect();
    if chars.is_empty() {
        bail!(perr(format!("empty side in {s:?}")));
    }
    if chars == ['1'] {
        return Ok(Word::empty());
    }
    let mut p = Parser {
        chars,
        at: 0,
        names,
    };
    let w = p.sequence()?;
    if p.at != p.chars.len() {
        bail!(perr(format!("unexpected {:?} in {t:?}", p.chars[p.at])));
    }
    Ok(w)
}

fn perr(m: String) -> brandt_core::Error {
    brandt_core::Error::Parse(m)
}

struct Parser<'a> {
    chars: Vec<char>,
    at: usize,
    names: &'a mut NameTable,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).copied()
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.at;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.at += 1;
        }
        (self.at > start).then(|| self.chars[start..self.at].iter().collect())
    }

    fn sequence(&mut self) -> Result<Word> {
        let mut out = Word::empty();
        while let Some(c) = self.peek() {
            if c == ')' {
                break;
            }
            let base = if c == '(' {
                self.at += 1;
                let inner = self.sequence()?;
                if self.peek() != Some(')') {
                    bail!(perr("unclosed '('".into()));
                }
                self.at += 1;
                inner
            } else if c.is_ascii_alphabetic() {
                self.at += 1;
                let mut name = c.to_string();
                if self.peek() == Some('_') {
                    self.at += 1;
                    let Some(d) = self.digits() else {
                        bail!(perr(format!("index expected after {c}_")));
                    };
                    name.push_str(&d);
                }
                Word::new(vec![self.names.letter(&name)])
            } else {
                bail!(perr(format!("unexpected {c:?}")));
            };
            if self.peek() == Some('^') {
                self.at += 1;
            }
            let k = match self.digits() {
                Some(d) => match d.parse::<usize>() {
                    Ok(k) if k > 0 => k,
                    _ => bail!(perr(format!("bad exponent {d}"))),
                },
                None => 1,
            };
            out.extend_from(&base.pow(k));
        }
        Ok(out)
    }
}
