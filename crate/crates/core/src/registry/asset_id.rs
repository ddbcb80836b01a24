use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

const ALPHABET: &[u8; 36] = b"0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";
pub const BODY_LEN: usize = 8;
const MAX_DRAWS: usize = 10_000;

/// Nine base-36 characters: an 8-character body plus a check character
/// equal to the body's digit sum mod 36.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AssetId(String);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AssetIdError {
    #[error("asset id {0:?} must have 9 characters")]
    Length(String),
    #[error("asset id {0:?} contains a non base-36 character")]
    Alphabet(String),
    #[error("asset id {id:?} has check character {found}, expected {expected}")]
    Check { id: String, expected: char, found: char },
}

fn digit_value(c: char) -> Option<u32> {
    c.to_digit(36)
}

fn digit_char(v: u32) -> char {
    ALPHABET[v as usize] as char
}

/// Check character for an 8-character body, or `None` if the body is malformed.
pub fn check_char(body: &str) -> Option<char> {
    if body.chars().count() != BODY_LEN {
        return None;
    }
    let sum = body.chars().map(digit_value).sum::<Option<u32>>()?;
    Some(digit_char(sum % 36))
}

impl AssetId {
    /// Appends the check character to `body`.
    pub fn from_body(body: &str) -> Result<Self, AssetIdError> {
        let upper = body.to_ascii_uppercase();
        if upper.chars().count() != BODY_LEN {
            return Err(AssetIdError::Length(body.to_string()));
        }
        let check = check_char(&upper).ok_or_else(|| AssetIdError::Alphabet(body.to_string()))?;
        Ok(Self(format!("{upper}{check}")))
    }

    pub fn parse(text: &str) -> Result<Self, AssetIdError> {
        let upper = text.to_ascii_uppercase();
        if upper.chars().count() != BODY_LEN + 1 {
            return Err(AssetIdError::Length(text.to_string()));
        }
        let (body, last) = upper.split_at(BODY_LEN);
        let found = last.chars().next().unwrap_or_default();
        if digit_value(found).is_none() {
            return Err(AssetIdError::Alphabet(text.to_string()));
        }
        let expected = check_char(body).ok_or_else(|| AssetIdError::Alphabet(text.to_string()))?;
        if expected != found {
            return Err(AssetIdError::Check {
                id: text.to_string(),
                expected,
                found,
            });
        }
        Ok(Self(upper))
    }

    pub fn verify(text: &str) -> bool {
        Self::parse(text).is_ok()
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Draws a random id, re-drawing while `taken` reports a collision.
    pub fn mint<R: Rng + ?Sized>(rng: &mut R, taken: impl Fn(&AssetId) -> bool) -> Option<Self> {
        (0..MAX_DRAWS).find_map(|_| {
            let body: String = (0..BODY_LEN).map(|_| digit_char(rng.gen_range(0..36))).collect();
            let id = Self::from_body(&body).expect("generated body is well-formed");
            (!taken(&id)).then_some(id)
        })
    }
}

impl fmt::Display for AssetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for AssetId {
    type Err = AssetIdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl Serialize for AssetId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for AssetId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Self::parse(&s).map_err(serde::de::Error::custom)
    }
}
