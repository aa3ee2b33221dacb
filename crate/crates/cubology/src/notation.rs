//! Move words: parsing, printing, and the catalogue of named moves.
//!
//! Grammar (ASCII, no subscripts):
//!
//! ```text
//! word   := term+
//! term   := atom suffix*
//! atom   := FACE | 'C' FACE DIGITS? | '(' word ')' | '[' word ',' word ']'
//! suffix := '\'' | INT(>= 2)
//! FACE   := U | D | L | R | F | B
//! ```
//!
//! `CF` is the circle-1 slice of F and `CF2` the circle-2 slice: digits after
//! a `C` token bind to the slice index, so powers of slice moves need
//! parentheses (`(CF)2`). Whitespace separates terms; atoms and their
//! suffixes are contiguous.

use thiserror::Error;

use crate::geometry::{Face, Gen};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NotationError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: &'static str },
    #[error("unknown token {found:?} at byte {offset}")]
    UnknownToken { offset: usize, found: char },
    #[error("unknown named move {0:?}")]
    UnknownName(String),
    #[error("named move {name:?} is not applicable to n={n}")]
    NotApplicable { name: String, n: u32 },
}

/// Abstract move-word expression tree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MoveWord {
    Gen(Gen),
    Inverse(Box<MoveWord>),
    Power(Box<MoveWord>, u32),
    Sequence(Vec<MoveWord>),
    Commutator(Box<MoveWord>, Box<MoveWord>),
}

impl MoveWord {
    /// Number of generator applications after full expansion.
    pub fn expanded_len(&self) -> u64 {
        match self {
            MoveWord::Gen(_) => 1,
            MoveWord::Inverse(w) => w.expanded_len(),
            MoveWord::Power(w, e) => w.expanded_len() * u64::from(*e),
            MoveWord::Sequence(ws) => ws.iter().map(MoveWord::expanded_len).sum(),
            MoveWord::Commutator(a, b) => 2 * (a.expanded_len() + b.expanded_len()),
        }
    }

    /// Largest slice index used anywhere in the word (0 if none).
    pub fn max_slice(&self) -> u8 {
        match self {
            MoveWord::Gen(Gen::Slice(_, k)) => *k,
            MoveWord::Gen(Gen::Face(_)) => 0,
            MoveWord::Inverse(w) | MoveWord::Power(w, _) => w.max_slice(),
            MoveWord::Sequence(ws) => ws.iter().map(MoveWord::max_slice).max().unwrap_or(0),
            MoveWord::Commutator(a, b) => a.max_slice().max(b.max_slice()),
        }
    }
}

impl std::fmt::Display for MoveWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&render(self))
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn syntax(&self, message: &'static str) -> NotationError {
        NotationError::Syntax {
            offset: self.pos,
            message,
        }
    }

    /// Parse digits at the cursor (no whitespace skipping).
    fn digits(&mut self) -> Option<(u32, usize)> {
        let start = self.pos;
        let mut value: u32 = 0;
        while let Some(b @ b'0'..=b'9') = self.peek() {
            value = value.saturating_mul(10).saturating_add(u32::from(b - b'0'));
            self.pos += 1;
        }
        (self.pos > start).then_some((value, start))
    }

    fn parse_word(&mut self) -> Result<MoveWord, NotationError> {
        let mut terms = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(b')') | Some(b']') | Some(b',') => break,
                _ => terms.push(self.parse_term()?),
            }
        }
        match terms.len() {
            0 => Err(self.syntax("expected a move")),
            1 => Ok(terms.pop().unwrap()),
            _ => Ok(MoveWord::Sequence(terms)),
        }
    }

    fn parse_term(&mut self) -> Result<MoveWord, NotationError> {
        let mut word = self.parse_atom()?;
        // suffixes bind only when contiguous with the atom
        loop {
            match self.peek() {
                Some(b'\'') => {
                    self.pos += 1;
                    word = MoveWord::Inverse(Box::new(word));
                }
                Some(b'0'..=b'9') => {
                    let (value, start) = self.digits().unwrap();
                    if value < 2 {
                        return Err(NotationError::Syntax {
                            offset: start,
                            message: "power must be at least 2",
                        });
                    }
                    word = MoveWord::Power(Box::new(word), value);
                }
                _ => return Ok(word),
            }
        }
    }

    fn parse_atom(&mut self) -> Result<MoveWord, NotationError> {
        self.skip_ws();
        let Some(b) = self.peek() else {
            return Err(self.syntax("expected a move"));
        };
        match b {
            b'U' | b'D' | b'L' | b'R' | b'F' | b'B' => {
                self.pos += 1;
                Ok(MoveWord::Gen(Gen::Face(Face::from_letter(b as char).unwrap())))
            }
            b'C' => {
                self.pos += 1;
                let Some(f) = self.peek().and_then(|c| Face::from_letter(c as char)) else {
                    return Err(self.syntax("expected a face letter after C"));
                };
                self.pos += 1;
                let k = match self.digits() {
                    Some((0, start)) => {
                        return Err(NotationError::Syntax {
                            offset: start,
                            message: "slice index must be at least 1",
                        })
                    }
                    Some((v, start)) if v > 255 => {
                        return Err(NotationError::Syntax {
                            offset: start,
                            message: "slice index too large",
                        })
                    }
                    Some((v, _)) => v as u8,
                    None => 1,
                };
                Ok(MoveWord::Gen(Gen::Slice(f, k)))
            }
            b'(' => {
                self.pos += 1;
                let word = self.parse_word()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected )"));
                }
                self.pos += 1;
                Ok(word)
            }
            b'[' => {
                self.pos += 1;
                let left = self.parse_word()?;
                self.skip_ws();
                if self.peek() != Some(b',') {
                    return Err(self.syntax("expected , in commutator"));
                }
                self.pos += 1;
                let right = self.parse_word()?;
                self.skip_ws();
                if self.peek() != Some(b']') {
                    return Err(self.syntax("expected ]"));
                }
                self.pos += 1;
                Ok(MoveWord::Commutator(Box::new(left), Box::new(right)))
            }
            _ => Err(NotationError::UnknownToken {
                offset: self.pos,
                found: b as char,
            }),
        }
    }
}

pub fn parse(text: &str) -> Result<MoveWord, NotationError> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let word = p.parse_word()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(word)
}

/// Canonical text form; `parse(render(w))` is structurally `w`.
pub fn render(word: &MoveWord) -> String {
    match word {
        MoveWord::Sequence(ws) => ws
            .iter()
            .map(render_term)
            .collect::<Vec<_>>()
            .join(" "),
        w => render_term(w),
    }
}

fn render_term(word: &MoveWord) -> String {
    match word {
        MoveWord::Gen(g) => g.to_string(),
        MoveWord::Inverse(w) => format!("{}'", render_suffixable(w, false)),
        MoveWord::Power(w, e) => format!("{}{e}", render_suffixable(w, true)),
        MoveWord::Sequence(_) => format!("({})", render(word)),
        MoveWord::Commutator(a, b) => format!("[{},{}]", render(a), render(b)),
    }
}

/// Render `w` so a suffix can be appended. A power suffix must not merge
/// with trailing digits or with a slice generator's index.
fn render_suffixable(word: &MoveWord, power: bool) -> String {
    let s = render_term(word);
    let needs_parens = match word {
        MoveWord::Sequence(_) => true,
        MoveWord::Gen(Gen::Slice(..)) if power => true,
        _ => power && s.ends_with(|c: char| c.is_ascii_digit()),
    };
    if needs_parens {
        format!("({s})")
    } else {
        s
    }
}

fn slice_token(face: char, k: u8) -> String {
    if k == 1 {
        format!("C{face}")
    } else {
        format!("C{face}{k}")
    }
}

/// The circle-k center-corner 3-cycle `[[C_{F,k}, C_{D,k}], U']`.
pub fn z_family(k: u8) -> String {
    format!("[[{},{}],U']", slice_token('F', k), slice_token('D', k))
}

/// The circle-k wing 3-cycle `[C_{L,k}', [L, U']]`.
pub fn e_family(k: u8) -> String {
    format!("[{}',[L,U']]", slice_token('L', k))
}

/// The circle-k center-edge 3-cycle `[[C_{R,k}', C_{D,k}'], U]`.
pub fn w_family(k: u8) -> String {
    format!("[[{}',{}'],U]", slice_token('R', k), slice_token('D', k))
}

/// The cross-depth center-edge 3-cycle `[[C_{F,i}, C_{D,j}], U']`, i ≠ j.
pub fn p_family(i: u8, j: u8) -> String {
    format!("[[{},{}],U']", slice_token('F', i), slice_token('D', j))
}

/// The wing-pair transposition word at circle k (15 generator applications
/// before expansion of the squares).
pub fn m_family(k: u8) -> String {
    let cr = slice_token('R', k);
    let cl = slice_token('L', k);
    format!(
        "({cr})2 B2 D2 {cl}' D2 {cr} D2 {cr}' D2 F2 {cr}' F2 {cl} B2 ({cr})2"
    )
}

fn circle_count(n: u32) -> u8 {
    if n % 2 == 1 {
        ((n - 3) / 2) as u8
    } else {
        (n / 2 - 1) as u8
    }
}

/// Look up a named move and resolve it for cube size `n`.
///
/// Catalogue: `z`, `e`, `w` (circle 1), their indexed forms `z1`, `z2`, ...,
/// `e1`, `e2`, ..., `w1`, ..., the cross-depth cycle `p`, the wing-pair
/// transposition `m`, and its circle-2 analogue `n2`.
pub fn named_move(name: &str, n: u32) -> Result<MoveWord, NotationError> {
    let circles = if n >= 3 { circle_count(n) } else { 0 };
    let not_applicable = || NotationError::NotApplicable {
        name: name.to_string(),
        n,
    };
    let indexed = |rest: &str| -> Option<u8> {
        if rest.is_empty() {
            Some(1)
        } else {
            rest.parse().ok()
        }
    };
    let (text, needed) = match name {
        "p" => (p_family(1, 2), 2),
        "m" => (m_family(1), 1),
        "n2" => (m_family(2), 2),
        _ => {
            let (family, rest) = name.split_at(1);
            let k = indexed(rest).ok_or_else(|| NotationError::UnknownName(name.to_string()))?;
            if k == 0 {
                return Err(NotationError::UnknownName(name.to_string()));
            }
            let text = match family {
                "z" => z_family(k),
                "e" => e_family(k),
                "w" => w_family(k),
                _ => return Err(NotationError::UnknownName(name.to_string())),
            };
            (text, k)
        }
    };
    if needed > circles {
        return Err(not_applicable());
    }
    Ok(parse(&text).expect("catalogue words are well-formed"))
}

/// Names applicable to size `n`, in catalogue order.
pub fn catalog(n: u32) -> Vec<&'static str> {
    let circles = if n >= 3 { circle_count(n) } else { 0 };
    let mut names = Vec::new();
    if circles >= 1 {
        names.extend(["z", "e", "w", "m"]);
    }
    if circles >= 2 {
        names.extend(["z1", "z2", "e1", "e2", "p", "n2"]);
    }
    names
}
