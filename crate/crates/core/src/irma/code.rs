use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Lengths of the technical, directional, anatomical and biological axes.
pub const AXIS_LENGTHS: [usize; 4] = [4, 3, 3, 3];
pub const CODE_LEN: usize = 13;

/// 13-character hierarchical IRMA code, `TTTT-DDD-AAA-BBB`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IrmaCode([u8; CODE_LEN]);

impl IrmaCode {
    pub fn parse(s: &str) -> Result<Self> {
        let raw: Vec<char> = s.chars().collect();
        let flat: Vec<char> = raw.iter().copied().filter(|&c| c != '-').collect();
        if flat.len() != CODE_LEN {
            return Err(Error::BadLength(s.to_owned()));
        }
        if flat.len() != raw.len() {
            let well_placed = raw.len() == 16
                && raw
                    .iter()
                    .enumerate()
                    .all(|(i, &c)| matches!(i, 4 | 8 | 12) == (c == '-'));
            if !well_placed {
                return Err(Error::MisplacedHyphen(s.to_owned()));
            }
        }
        let mut bytes = [0u8; CODE_LEN];
        for (slot, c) in bytes.iter_mut().zip(flat) {
            if !(c.is_ascii_digit() || c.is_ascii_lowercase()) {
                return Err(Error::BadCharacter {
                    code: s.to_owned(),
                    ch: c,
                });
            }
            *slot = c as u8;
        }
        Ok(Self(bytes))
    }

    /// Flat 13-character form.
    pub fn raw(&self) -> &str {
        std::str::from_utf8(&self.0).expect("ascii")
    }

    pub fn chars(&self) -> &[u8; CODE_LEN] {
        &self.0
    }

    /// Axis strings T, D, A, B.
    pub fn axes(&self) -> [&str; 4] {
        let r = self.raw();
        [&r[0..4], &r[4..7], &r[7..10], &r[10..13]]
    }

    /// Canonical hyphenated form.
    pub fn hyphenated(&self) -> String {
        self.axes().join("-")
    }
}

impl FromStr for IrmaCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for IrmaCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.hyphenated())
    }
}

pub fn parse_irma(s: &str) -> Result<IrmaCode> {
    IrmaCode::parse(s)
}
