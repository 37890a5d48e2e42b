//! Arrangement files: JSON with exact constants written as `"p/q"`.

use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use subtori_core::arrangement::{Arrangement, AtomSpec, Character, UnityRoot};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomEntry {
    pub characters: Vec<Vec<i64>>,
    pub constants: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub ambient_rank: usize,
    pub atoms: Vec<AtomEntry>,
}

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("atoms[{atom}].constants[{index}] = {value:?}: {reason}")]
    Constant {
        atom: usize,
        index: usize,
        value: String,
        reason: String,
    },
    #[error("atoms[{atom}]: {source}")]
    Atom {
        atom: usize,
        source: subtori_core::Error,
    },
    #[error("{0}")]
    Arrangement(subtori_core::Error),
}

/// Parses `"p/q"` (reduced, `0 ≤ p < q`) or `"0"`.
pub fn parse_root(s: &str) -> std::result::Result<UnityRoot, String> {
    let s = s.trim();
    if s == "0" {
        return Ok(UnityRoot::one());
    }
    let (p, q) = s.split_once('/').ok_or("expected \"p/q\" or \"0\"")?;
    let p: BigInt = p
        .trim()
        .parse()
        .map_err(|_| "numerator is not an integer")?;
    let q: BigInt = q
        .trim()
        .parse()
        .map_err(|_| "denominator is not an integer")?;
    if !q.is_positive() {
        return Err("denominator must be positive".into());
    }
    if p.is_negative() || p >= q {
        return Err("need 0 <= p < q".into());
    }
    if !num_integer::Integer::gcd(&p, &q).is_one() {
        return Err("fraction is not reduced".into());
    }
    Ok(UnityRoot::from_rational(num_rational::BigRational::new(
        p, q,
    )))
}

pub fn format_root(r: &UnityRoot) -> String {
    if r.value().is_zero() {
        "0".into()
    } else {
        r.to_string()
    }
}

impl ArrangementFile {
    /// Atom specifications, checking constants and each atom on its own.
    pub fn specs(&self) -> Result<Vec<AtomSpec>, ParseError> {
        let mut out = Vec::new();
        for (i, atom) in self.atoms.iter().enumerate() {
            let constants = atom
                .constants
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    parse_root(c).map_err(|reason| ParseError::Constant {
                        atom: i,
                        index: j,
                        value: c.clone(),
                        reason,
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let spec = AtomSpec::new(
                atom.characters
                    .iter()
                    .map(|c| Character::from_i64(c))
                    .collect(),
                constants,
            );
            subtori_core::arrangement::validate_atom(self.ambient_rank, &spec)
                .map_err(|source| ParseError::Atom { atom: i, source })?;
            out.push(spec);
        }
        Ok(out)
    }

    pub fn arrangement(&self) -> Result<Arrangement, ParseError> {
        Arrangement::new(self.ambient_rank, self.specs()?).map_err(|e| match e {
            subtori_core::Error::Atom { atom, source } => ParseError::Atom {
                atom,
                source: *source,
            },
            e => ParseError::Arrangement(e),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("arrangement files always serialize")
    }
}

/// Parses and validates an arrangement document.
pub fn parse_input(text: &str) -> Result<ArrangementFile, ParseError> {
    let file: ArrangementFile = serde_json::from_str(text).map_err(|e| ParseError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    file.arrangement()?;
    Ok(file)
}

pub fn read_input(path: &Path) -> Result<ArrangementFile, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| ParseError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_input(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots() {
        assert_eq!(parse_root("0"), Ok(UnityRoot::one()));
        assert_eq!(parse_root("1/2"), Ok(UnityRoot::new(1, 2)));
        assert!(parse_root("2/4").is_err());
        assert!(parse_root("3/2").is_err());
        assert!(parse_root("1").is_err());
        assert!(parse_root("-1/2").is_err());
        assert_eq!(format_root(&UnityRoot::new(2, 3)), "2/3");
        assert_eq!(format_root(&UnityRoot::one()), "0");
    }

    #[test]
    fn documents() {
        let f =
            parse_input(r#"{"ambient_rank":1,"atoms":[{"characters":[[2]],"constants":["0"]}]}"#)
                .unwrap();
        assert_eq!(f.atoms.len(), 1);
        assert_eq!(parse_input(&f.to_json()).unwrap(), f);

        let e =
            parse_input(r#"{"ambient_rank":1,"atoms":[{"characters":[[1]],"constants":["2/4"]}]}"#)
                .unwrap_err();
        assert!(matches!(
            e,
            ParseError::Constant {
                atom: 0,
                index: 0,
                ..
            }
        ));

        let e = parse_input(r#"{"ambient_rank":2,"atoms":[{"characters":[[1,0]],"constants":["0"]},{"characters":[[0,0]],"constants":["0"]}]}"#)
            .unwrap_err();
        assert_eq!(
            e,
            ParseError::Atom {
                atom: 1,
                source: subtori_core::Error::ZeroCharacter
            }
        );

        let e = parse_input("{\"ambient_rank\": 1,\n \"atoms\": [}").unwrap_err();
        assert!(matches!(e, ParseError::Json { line: 2, .. }));
    }
}
