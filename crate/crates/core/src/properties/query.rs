use std::fmt;

use thiserror::Error;

use crate::syntax::{parse_action, BraneAction, MembraneId};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PropertyQuery {
    /// The capability never sits on membrane `membrane`.
    NeverOn { action: BraneAction, membrane: MembraneId },
    /// `inner` never occurs inside `outer`.
    NeverInside { inner: MembraneId, outer: MembraneId },
    /// `first` and `second` never occur together inside `within`.
    NeverTogether {
        first: MembraneId,
        second: MembraneId,
        within: MembraneId,
    },
}

impl PropertyQuery {
    /// The membrane whose contents the query constrains.
    pub fn subject(&self) -> &MembraneId {
        match self {
            PropertyQuery::NeverOn { membrane, .. } => membrane,
            PropertyQuery::NeverInside { outer, .. } => outer,
            PropertyQuery::NeverTogether { within, .. } => within,
        }
    }
}

/// Prints in query-file syntax.
impl fmt::Display for PropertyQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertyQuery::NeverOn { action, membrane } => write!(f, "never-on {action} {membrane}"),
            PropertyQuery::NeverInside { inner, outer } => write!(f, "never-inside {inner} {outer}"),
            PropertyQuery::NeverTogether { first, second, within } => {
                write!(f, "never-together {first} {second} {within}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct QueryParseError {
    pub line: usize,
    pub message: String,
}

/// One query per line; blank lines and `#` comments are skipped. The action
/// of `never-on` is everything between the keyword and the last word, so it
/// may contain spaces.
pub fn parse_queries(text: &str) -> Result<Vec<PropertyQuery>, QueryParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| QueryParseError { line: i + 1, message };
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let words: Vec<&str> = rest.split_whitespace().collect();
        let id = |s: &str| MembraneId::new(s);
        let q = match kw {
            "never-on" => {
                let (act, label) = rest
                    .rsplit_once(char::is_whitespace)
                    .ok_or_else(|| err("never-on takes an action and a label".into()))?;
                let action = parse_action(act.trim()).map_err(|e| err(e.to_string()))?;
                PropertyQuery::NeverOn {
                    action,
                    membrane: id(label),
                }
            }
            "never-inside" => match words[..] {
                [a, b] => PropertyQuery::NeverInside {
                    inner: id(a),
                    outer: id(b),
                },
                _ => return Err(err("never-inside takes two labels".into())),
            },
            "never-together" => match words[..] {
                [a, b, c] => PropertyQuery::NeverTogether {
                    first: id(a),
                    second: id(b),
                    within: id(c),
                },
                _ => return Err(err("never-together takes three labels".into())),
            },
            other => return Err(err(format!("unknown query `{other}`"))),
        };
        out.push(q);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        let qs =
            parse_queries("# spatial\nnever-on cobud(o, 0) P\n\nnever-inside A B\nnever-together A B C  # trailing\n")
                .unwrap();
        assert_eq!(qs.len(), 3);
        assert_eq!(qs[0].to_string(), "never-on cobud(o, 0) P");
        assert_eq!(qs[2].subject().as_str(), "C");
        for q in &qs {
            assert_eq!(parse_queries(&q.to_string()).unwrap(), vec![q.clone()]);
        }
    }

    #[test]
    fn reports_line_numbers() {
        let e = parse_queries("never-inside A B\nnever-inside A\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse_queries("sometimes A").is_err());
        assert!(parse_queries("never-on mate( P").is_err());
    }
}
