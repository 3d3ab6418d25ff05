//! Words over a finite alphabet of generators and their inverses.
//!
//! Letters are nonzero signed 1-based indices: `i` is generator `i`, `-i` its
//! inverse. The text form (`a` = generator 1, `A` = its inverse, ...) is sugar
//! only; serialized words are always signed-index arrays.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("letter 0 at position {position} is not a generator index")]
    ZeroLetter { position: usize },
    #[error("letter {letter} at position {position} exceeds generator count {rank}")]
    OutOfRange {
        letter: i32,
        position: usize,
        rank: usize,
    },
    #[error("character {0:?} is not a generator letter")]
    BadChar(char),
}

/// Serializes as a signed-index array; deserializes from either that or the
/// text form.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(#[serde(deserialize_with = "letters_or_text")] Vec<i32>);

fn letters_or_text<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<i32>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Input {
        Letters(Vec<i32>),
        Text(String),
    }
    match Input::deserialize(d)? {
        Input::Letters(v) => Ok(v),
        Input::Text(t) => Word::parse_text(&t)
            .map(Word::into_letters)
            .map_err(serde::de::Error::custom),
    }
}

impl Word {
    pub fn new(letters: Vec<i32>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: i32) -> Self {
        Word(vec![l])
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<i32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks every letter against an alphabet of `rank` generators.
    pub fn validate(&self, rank: usize) -> Result<(), WordError> {
        for (position, &letter) in self.0.iter().enumerate() {
            if letter == 0 {
                return Err(WordError::ZeroLetter { position });
            }
            if letter.unsigned_abs() as usize > rank {
                return Err(WordError::OutOfRange {
                    letter,
                    position,
                    rank,
                });
            }
        }
        Ok(())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, n: usize) -> Word {
        Word(self.0.repeat(n))
    }

    /// Free reduction without alphabet validation.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<i32> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != -w[1])
    }

    /// Freely and cyclically reduces.
    pub fn cyclically_reduced(&self) -> Word {
        let w = self.reduced().0;
        let mut lo = 0;
        let mut hi = w.len();
        while hi - lo >= 2 && w[lo] == -w[hi - 1] {
            lo += 1;
            hi -= 1;
        }
        Word(w[lo..hi].to_vec())
    }

    /// All cyclic rotations, starting with the word itself.
    pub fn rotations(&self) -> impl Iterator<Item = Word> + '_ {
        let n = self.0.len();
        (0..n.max(1)).map(move |k| {
            if n == 0 {
                Word::empty()
            } else {
                let mut v = self.0[k..].to_vec();
                v.extend_from_slice(&self.0[..k]);
                Word(v)
            }
        })
    }

    pub fn occurrences(&self, generator: i32) -> usize {
        self.0.iter().filter(|l| l.abs() == generator).count()
    }

    /// Replaces every occurrence of generator `g` (1-based) by `image`.
    pub fn substitute(&self, g: i32, image: &Word) -> Word {
        let inv = image.inverse();
        let mut out = Vec::with_capacity(self.len());
        for &l in &self.0 {
            if l == g {
                out.extend_from_slice(&image.0);
            } else if l == -g {
                out.extend_from_slice(&inv.0);
            } else {
                out.push(l);
            }
        }
        Word(out).reduced()
    }

    /// Applies a letter map: generator `i` goes to `images[i - 1]`.
    pub fn map_letters(&self, images: &[Word]) -> Word {
        let mut out = Vec::new();
        for &l in &self.0 {
            let img = &images[l.unsigned_abs() as usize - 1];
            if l > 0 {
                out.extend_from_slice(&img.0);
            } else {
                out.extend(img.0.iter().rev().map(|x| -x));
            }
        }
        Word(out).reduced()
    }

    /// Uniform length in `0..=max_len`, uniform letters.
    pub fn random(rng: &mut impl rand::Rng, rank: usize, max_len: usize) -> Word {
        if rank == 0 {
            return Word::empty();
        }
        let len = rng.gen_range(0..=max_len);
        Word(
            (0..len)
                .map(|_| {
                    let g = rng.gen_range(1..=rank as i32);
                    if rng.gen_bool(0.5) {
                        g
                    } else {
                        -g
                    }
                })
                .collect(),
        )
    }

    /// Parses the single-letter text form: `a..z` are generators 1..26,
    /// uppercase letters their inverses. `1` and the empty string are the
    /// empty word; whitespace is ignored.
    pub fn parse_text(text: &str) -> Result<Word, WordError> {
        let t = text.trim();
        if t == "1" {
            return Ok(Word::empty());
        }
        let mut v = Vec::with_capacity(t.len());
        for c in t.chars() {
            if c.is_whitespace() {
                continue;
            }
            if c.is_ascii_lowercase() {
                v.push((c as u8 - b'a') as i32 + 1);
            } else if c.is_ascii_uppercase() {
                v.push(-((c as u8 - b'A') as i32 + 1));
            } else {
                return Err(WordError::BadChar(c));
            }
        }
        Ok(Word(v))
    }

    /// Text form; falls back to `g12`/`G12` tokens joined by `.` for
    /// generators beyond `z`.
    pub fn to_text(&self) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        if self.0.iter().all(|l| l.unsigned_abs() <= 26) {
            self.0
                .iter()
                .map(|&l| {
                    let base = if l > 0 { b'a' } else { b'A' };
                    (base + (l.unsigned_abs() as u8 - 1)) as char
                })
                .collect()
        } else {
            self.0
                .iter()
                .map(|&l| {
                    if l > 0 {
                        format!("g{l}")
                    } else {
                        format!("G{}", -l)
                    }
                })
                .collect::<Vec<_>>()
                .join(".")
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl From<Vec<i32>> for Word {
    fn from(v: Vec<i32>) -> Self {
        Word(v)
    }
}

/// Validates `w` over `rank` generators and returns its free reduction.
pub fn free_reduce(w: &Word, rank: usize) -> Result<Word, WordError> {
    w.validate(rank)?;
    Ok(w.reduced())
}
