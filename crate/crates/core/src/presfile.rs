//! Line-oriented presentation file format:
//!
//! ```text
//! generators: x1 x2 x3
//! relator: [x1,x2]
//! gamma: x1
//! target: 0 0 1 0
//! eta: 1 0
//! seed: 7
//! budget: 500
//! ```
//!
//! `#` starts a comment; blank lines are ignored. A `.json` file with the
//! same fields is accepted as a structured alternative.

use crate::homology::Presentation;
use crate::liegrp::Quat;
use crate::words::{parse_word, Word, WordError};
use serde::Deserialize;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Word {
        line: usize,
        #[source]
        source: WordError,
    },
    #[error("missing 'generators:' line")]
    MissingGenerators,
    #[error("duplicate generator name '{0}'")]
    DuplicateGenerator(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Parsed presentation file, before semantic interpretation.
#[derive(Debug, Clone)]
pub struct PresentationFile {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
    pub gammas: Vec<Word>,
    pub targets: Vec<Quat>,
    pub eta: Option<Vec<u8>>,
    pub seed: Option<u64>,
    pub budget: Option<usize>,
}

impl PresentationFile {
    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn presentation(&self) -> Result<Presentation, WordError> {
        Presentation::new(self.generator_count(), self.relators.clone())
    }
}

#[derive(Deserialize)]
struct JsonFile {
    generators: Vec<String>,
    #[serde(default)]
    relators: Vec<String>,
    #[serde(default)]
    gammas: Vec<String>,
    #[serde(default)]
    targets: Vec<[f64; 4]>,
    #[serde(default)]
    eta: Option<Vec<u8>>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    budget: Option<usize>,
}

/// Parses from text, dispatching on the extension of `path` (`.json` for
/// the structured alternative, line format otherwise).
pub fn parse_str(text: &str, path: &Path) -> Result<PresentationFile, FileError> {
    if path.extension().map(|e| e == "json").unwrap_or(false) {
        parse_json(text)
    } else {
        parse_lines(text)
    }
}

fn parse_json(text: &str) -> Result<PresentationFile, FileError> {
    let raw: JsonFile = serde_json::from_str(text)?;
    let n = raw.generators.len();
    check_unique(&raw.generators)?;
    let parse_all = |items: &[String]| -> Result<Vec<Word>, FileError> {
        items
            .iter()
            .map(|t| parse_word(t, n).map_err(|source| FileError::Word { line: 0, source }))
            .collect()
    };
    Ok(PresentationFile {
        relators: parse_all(&raw.relators)?,
        gammas: parse_all(&raw.gammas)?,
        targets: raw
            .targets
            .iter()
            .map(|t| Quat::new(t[0], t[1], t[2], t[3]).normalize())
            .collect(),
        generators: raw.generators,
        eta: raw.eta,
        seed: raw.seed,
        budget: raw.budget,
    })
}

fn check_unique(names: &[String]) -> Result<(), FileError> {
    let mut seen = std::collections::HashSet::new();
    for name in names {
        if !seen.insert(name) {
            return Err(FileError::DuplicateGenerator(name.clone()));
        }
    }
    Ok(())
}

fn parse_lines(text: &str) -> Result<PresentationFile, FileError> {
    let mut generators: Option<Vec<String>> = None;
    let mut relator_lines: Vec<(usize, String)> = vec![];
    let mut gamma_lines: Vec<(usize, String)> = vec![];
    let mut targets = vec![];
    let mut eta = None;
    let mut seed = None;
    let mut budget = None;

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            return Err(FileError::Format {
                line: line_no,
                msg: "expected 'key: value'".into(),
            });
        };
        let value = value.trim();
        match key.trim() {
            "generators" => {
                let names: Vec<String> =
                    value.split_whitespace().map(|s| s.to_string()).collect();
                if names.is_empty() {
                    return Err(FileError::Format {
                        line: line_no,
                        msg: "empty generator list".into(),
                    });
                }
                check_unique(&names)?;
                generators = Some(names);
            }
            "relator" => relator_lines.push((line_no, value.to_string())),
            "gamma" => gamma_lines.push((line_no, value.to_string())),
            "target" => {
                let parts: Result<Vec<f64>, _> =
                    value.split_whitespace().map(|s| s.parse()).collect();
                let parts = parts.map_err(|_| FileError::Format {
                    line: line_no,
                    msg: "target must be four reals".into(),
                })?;
                if parts.len() != 4 {
                    return Err(FileError::Format {
                        line: line_no,
                        msg: format!("target must be four reals, got {}", parts.len()),
                    });
                }
                targets.push(Quat::new(parts[0], parts[1], parts[2], parts[3]).normalize());
            }
            "eta" => {
                let parts: Result<Vec<u8>, _> =
                    value.split_whitespace().map(|s| s.parse()).collect();
                eta = Some(parts.map_err(|_| FileError::Format {
                    line: line_no,
                    msg: "eta must be a 0/1 vector".into(),
                })?);
            }
            "seed" => {
                seed = Some(value.parse().map_err(|_| FileError::Format {
                    line: line_no,
                    msg: "seed must be a 64-bit unsigned integer".into(),
                })?);
            }
            "budget" => {
                budget = Some(value.parse().map_err(|_| FileError::Format {
                    line: line_no,
                    msg: "budget must be a positive integer".into(),
                })?);
            }
            other => {
                return Err(FileError::Format {
                    line: line_no,
                    msg: format!("unknown key '{other}'"),
                });
            }
        }
    }

    let generators = generators.ok_or(FileError::MissingGenerators)?;
    let n = generators.len();
    let parse_all = |items: Vec<(usize, String)>| -> Result<Vec<Word>, FileError> {
        items
            .into_iter()
            .map(|(line, t)| {
                parse_word(&t, n).map_err(|source| FileError::Word { line, source })
            })
            .collect()
    };
    Ok(PresentationFile {
        generators,
        relators: parse_all(relator_lines)?,
        gammas: parse_all(gamma_lines)?,
        targets,
        eta,
        seed,
        budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_file() {
        let text = "\
# the two-torsion example
generators: x1 x2 x3
relator: [x1,x2]
relator: x3^3
gamma: x1
target: 0 0 1 0
eta: 1 0
seed: 9
";
        let f = parse_str(text, Path::new("t.grp")).unwrap();
        assert_eq!(f.generator_count(), 3);
        assert_eq!(f.relators.len(), 2);
        assert_eq!(f.gammas.len(), 1);
        assert_eq!(f.targets.len(), 1);
        assert_eq!(f.eta, Some(vec![1, 0]));
        assert_eq!(f.seed, Some(9));
    }

    #[test]
    fn rejects_bad_word_with_line() {
        let text = "generators: x1\nrelator: x2\n";
        match parse_str(text, Path::new("t.grp")) {
            Err(FileError::Word { line: 2, .. }) => {}
            other => panic!("expected word error on line 2, got {other:?}"),
        }
    }

    #[test]
    fn rejects_duplicate_generators() {
        let text = "generators: a a\n";
        assert!(matches!(
            parse_str(text, Path::new("t.grp")),
            Err(FileError::DuplicateGenerator(_))
        ));
    }

    #[test]
    fn json_alternative() {
        let text = r#"{"generators": ["x1", "x2"], "relators": ["[x1,x2]"]}"#;
        let f = parse_str(text, Path::new("t.json")).unwrap();
        assert_eq!(f.relators.len(), 1);
    }
}
