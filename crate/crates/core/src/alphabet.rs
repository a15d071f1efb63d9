//! Integer-coded symbols and the explicit symbol table that maps them to
//! printable characters.
//!
//! Code `0` is reserved for the label of the source state (printed `#`) and is
//! smaller than every real symbol. Real symbols are numbered `1..=sigma` in the
//! order the table lists them, so symbol order is table order.

use std::fmt;

use thiserror::Error;

/// A symbol code. Ordering is the integer order of the codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u16);

impl Symbol {
    /// Label of the source state. Never labels a real transition.
    pub const SOURCE: Symbol = Symbol(0);

    pub fn code(self) -> u16 {
        self.0
    }

    pub fn is_source(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("character {0:?} appears twice in the alphabet")]
    Duplicate(char),
    #[error("character {0:?} cannot be used as a symbol")]
    Reserved(char),
    #[error("character {0:?} is not in the alphabet")]
    Unknown(char),
}

/// Symbol table: `chars[i]` is the display character of `Symbol(i + 1)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    chars: Vec<u8>,
    codes: [u16; 256],
}

impl Alphabet {
    /// Builds a table whose symbol order is the order of `chars`.
    ///
    /// Whitespace, control characters and `#` are rejected because the text
    /// formats use them as separators or markers.
    pub fn new(chars: &[u8]) -> Result<Self, AlphabetError> {
        let mut codes = [0u16; 256];
        for (i, &c) in chars.iter().enumerate() {
            if c == b'#' || !c.is_ascii_graphic() {
                return Err(AlphabetError::Reserved(c as char));
            }
            if codes[c as usize] != 0 {
                return Err(AlphabetError::Duplicate(c as char));
            }
            codes[c as usize] = (i + 1) as u16;
        }
        Ok(Alphabet {
            chars: chars.to_vec(),
            codes,
        })
    }

    /// `A < C < G < T`.
    pub fn dna() -> Self {
        Alphabet::new(b"ACGT").expect("static alphabet")
    }

    /// Generic mode: the distinct bytes of `text`, in byte order.
    pub fn from_bytes(text: &[u8]) -> Result<Self, AlphabetError> {
        let mut seen = [false; 256];
        for &c in text {
            seen[c as usize] = true;
        }
        let chars: Vec<u8> = (0..=255u8).filter(|&c| seen[c as usize]).collect();
        Alphabet::new(&chars)
    }

    /// Number of real symbols (sigma).
    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn chars(&self) -> &[u8] {
        &self.chars
    }

    pub fn symbol(&self, c: u8) -> Option<Symbol> {
        match self.codes[c as usize] {
            0 => None,
            code => Some(Symbol(code)),
        }
    }

    /// Display character of `s`; `#` for the source label.
    pub fn char_of(&self, s: Symbol) -> Option<u8> {
        if s.is_source() {
            return Some(b'#');
        }
        self.chars.get(s.0 as usize - 1).copied()
    }

    pub fn contains(&self, s: Symbol) -> bool {
        !s.is_source() && (s.0 as usize) <= self.chars.len()
    }

    /// All real symbols in increasing order.
    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (1..=self.chars.len() as u16).map(Symbol)
    }

    pub fn encode(&self, text: &[u8]) -> Result<Vec<Symbol>, AlphabetError> {
        text.iter()
            .map(|&c| self.symbol(c).ok_or(AlphabetError::Unknown(c as char)))
            .collect()
    }

    pub fn decode(&self, word: &[Symbol]) -> String {
        word.iter()
            .map(|&s| self.char_of(s).map(char::from).unwrap_or('?'))
            .collect()
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({:?})", String::from_utf8_lossy(&self.chars))
    }
}
