use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::word::{Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("generator name {0:?} appears twice")]
    DuplicateGenerator(String),
    #[error("relator {index}: {source}")]
    BadRelator {
        index: usize,
        #[source]
        source: WordError,
    },
}

/// Generators plus relator words. Relators are stored freely reduced and
/// nonempty; construction drops relators that reduce to the empty word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPresentation", into = "RawPresentation")]
pub struct Presentation {
    generator_names: Vec<String>,
    relators: Vec<Word>,
}

#[derive(Serialize, Deserialize)]
struct RawPresentation {
    generators: Vec<String>,
    #[serde(default)]
    relators: Vec<Word>,
}

impl TryFrom<RawPresentation> for Presentation {
    type Error = PresentationError;
    fn try_from(raw: RawPresentation) -> Result<Self, Self::Error> {
        Presentation::new(raw.generators, raw.relators)
    }
}

impl From<Presentation> for RawPresentation {
    fn from(p: Presentation) -> Self {
        RawPresentation {
            generators: p.generator_names,
            relators: p.relators,
        }
    }
}

impl Presentation {
    pub fn new(generator_names: Vec<String>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        let mut seen = HashSet::new();
        for name in &generator_names {
            if !seen.insert(name.as_str()) {
                return Err(PresentationError::DuplicateGenerator(name.clone()));
            }
        }
        let rank = generator_names.len();
        let mut out = Vec::with_capacity(relators.len());
        for (index, r) in relators.iter().enumerate() {
            r.validate(rank)
                .map_err(|source| PresentationError::BadRelator { index, source })?;
            let red = r.reduced();
            if !red.is_empty() {
                out.push(red);
            }
        }
        Ok(Presentation {
            generator_names,
            relators: out,
        })
    }

    /// Names `a, b, c, ...` for `rank` generators.
    pub fn with_letters(rank: usize, relators: Vec<Word>) -> Result<Self, PresentationError> {
        let names = (0..rank).map(default_name).collect();
        Presentation::new(names, relators)
    }

    /// Parses relators in the single-letter text form.
    pub fn from_text(rank: usize, relators: &[&str]) -> Result<Self, PresentationError> {
        let mut words = Vec::new();
        for (index, r) in relators.iter().enumerate() {
            words.push(
                Word::parse_text(r).map_err(|source| PresentationError::BadRelator { index, source })?,
            );
        }
        Presentation::with_letters(rank, words)
    }

    pub fn rank(&self) -> usize {
        self.generator_names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generator_names.iter().position(|n| n == name)
    }

    /// GAP-style plain text: `F := FreeGroup("x","y");; G := F / [ x^2, y^3 ];;`
    pub fn to_gap(&self) -> String {
        let mut s = String::new();
        let names: Vec<String> = self.generator_names.iter().map(|n| format!("\"{n}\"")).collect();
        let _ = writeln!(s, "F := FreeGroup({});;", names.join(", "));
        for (i, n) in self.generator_names.iter().enumerate() {
            let _ = writeln!(s, "{n} := F.{};;", i + 1);
        }
        let rels: Vec<String> = self.relators.iter().map(|r| self.gap_word(r)).collect();
        let _ = writeln!(s, "G := F / [ {} ];;", rels.join(", "));
        s
    }

    fn gap_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "One(F)".to_string();
        }
        // run-length encode into x^k factors
        let mut parts = Vec::new();
        let letters = w.letters();
        let mut i = 0;
        while i < letters.len() {
            let g = letters[i];
            let mut j = i;
            while j < letters.len() && letters[j] == g {
                j += 1;
            }
            let exp = (j - i) as i64 * g.signum() as i64;
            let name = &self.generator_names[g.unsigned_abs() as usize - 1];
            if exp == 1 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{name}^{exp}"));
            }
            i = j;
        }
        parts.join("*")
    }
}

pub(crate) fn default_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("g{}", i + 1)
    }
}
