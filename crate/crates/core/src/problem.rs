//! JSON problem files: a quadratic space, optionally an isometry, reflection
//! words and extra vectors. Entries are field-element literals given as
//! strings or integers.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Field, FieldElement};
use crate::isometry::{Isometry, ReflectionWord};
use crate::linalg::{Matrix, Vector};
use crate::quadspace::QuadraticSpace;

/// How a failure maps onto the process exit code.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProblemError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal invariant failure: {0}")]
    Internal(String),
}

impl ProblemError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ProblemError::Parse(_) => 2,
            ProblemError::Precondition(_) => 3,
            ProblemError::Internal(_) => 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Literal {
    Int(i64),
    Text(String),
}

impl Literal {
    fn parse(&self, field: Field) -> Result<FieldElement, ProblemError> {
        match self {
            Literal::Int(n) => Ok(field.from_int(*n)),
            Literal::Text(s) => field.parse_element(s).map_err(|e| ProblemError::Parse(e.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub field: String,
    pub dim: usize,
    pub q_upper: Vec<Vec<Literal>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Vec<Vec<Literal>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reflection_words: Vec<Vec<Vec<Literal>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub vectors: Vec<Vec<Literal>>,
}

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<ProblemFile, ProblemError> {
        serde_json::from_str(text).map_err(|e| ProblemError::Parse(e.to_string()))
    }
}

/// A parsed problem file.
#[derive(Clone, Debug)]
pub struct Problem {
    pub space: Arc<QuadraticSpace>,
    pub tau: Option<Isometry>,
    pub words: Vec<ReflectionWord>,
    pub vectors: Vec<Vector>,
}

fn parse_vector(field: Field, n: usize, row: &[Literal]) -> Result<Vector, ProblemError> {
    if row.len() != n {
        return Err(ProblemError::Parse(format!("expected {n} entries, got {}", row.len())));
    }
    row.iter().map(|x| x.parse(field)).collect()
}

fn parse_matrix(field: Field, n: usize, rows: &[Vec<Literal>], what: &str) -> Result<Matrix, ProblemError> {
    if rows.len() != n {
        return Err(ProblemError::Parse(format!("{what}: expected {n} rows, got {}", rows.len())));
    }
    let rows: Vec<Vector> = rows.iter().map(|r| parse_vector(field, n, r)).collect::<Result<_, _>>()?;
    Ok(Matrix::from_rows(field, n, &rows))
}

fn strings(v: &[FieldElement]) -> Vec<Literal> {
    v.iter().map(|x| Literal::Text(x.to_string())).collect()
}

impl Problem {
    pub fn parse(file: &ProblemFile) -> Result<Problem, ProblemError> {
        let field: Field = file.field.parse().map_err(|e: crate::field::FieldError| ProblemError::Parse(e.to_string()))?;
        let n = file.dim;
        let q = parse_matrix(field, n, &file.q_upper, "q_upper")?;
        let space = Arc::new(QuadraticSpace::new(&q).map_err(|e| ProblemError::Precondition(e.to_string()))?);
        let tau = match &file.tau {
            Some(rows) => {
                let m = parse_matrix(field, n, rows, "tau")?;
                Some(Isometry::new(space.clone(), m).map_err(|e| ProblemError::Precondition(e.to_string()))?)
            }
            None => None,
        };
        let mut words = Vec::new();
        for word in &file.reflection_words {
            let factors = word.iter().map(|u| parse_vector(field, n, u)).collect::<Result<Vec<_>, _>>()?;
            words.push(ReflectionWord::new(space.clone(), factors).map_err(|e| ProblemError::Precondition(e.to_string()))?);
        }
        let vectors = file.vectors.iter().map(|v| parse_vector(field, n, v)).collect::<Result<_, _>>()?;
        Ok(Problem { space, tau, words, vectors })
    }

    pub fn from_json(text: &str) -> Result<Problem, ProblemError> {
        Problem::parse(&ProblemFile::from_json(text)?)
    }

    pub fn require_tau(&self) -> Result<&Isometry, ProblemError> {
        self.tau.as_ref().ok_or_else(|| ProblemError::Precondition("the problem file has no tau".into()))
    }

    /// The problem with every entry in canonical form: `q` folded into its
    /// upper triangle, elements as reduced literals.
    pub fn canonical(&self) -> ProblemFile {
        let rows = |m: &Matrix| m.row_vectors().iter().map(|r| strings(r)).collect();
        ProblemFile {
            field: self.space.field().to_string(),
            dim: self.space.dim(),
            q_upper: rows(self.space.qmat()),
            tau: self.tau.as_ref().map(|t| rows(t.matrix())),
            reflection_words: self.words.iter().map(|w| w.factors().iter().map(|u| strings(u)).collect()).collect(),
            vectors: self.vectors.iter().map(|v| strings(v)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const H4F2: &str = r#"{
        "field": "gf(2)", "dim": 4,
        "q_upper": [[0,1,0,0],[0,0,0,0],[0,0,0,1],[0,0,0,0]],
        "tau": [[1,0,0,1],[0,1,0,0],[0,1,1,0],[0,0,0,1]]
    }"#;

    #[test]
    fn parses_h4f2() {
        let p = Problem::from_json(H4F2).unwrap();
        assert_eq!(*p.require_tau().unwrap(), crate::fixtures::h4f2_tau());
        let again = Problem::parse(&p.canonical()).unwrap();
        assert_eq!(again.canonical(), p.canonical());
    }

    #[test]
    fn function_field_literals() {
        let text = r#"{"field": "gf2(t)", "dim": 2, "q_upper": [["t", 1], [0, 0]],
                       "reflection_words": [[["1", "0"]]]}"#;
        let p = Problem::from_json(text).unwrap();
        assert_eq!(p.words[0].spinor_norm().representative.to_string(), "t");
        assert!(p.tau.is_none());
    }

    #[test]
    fn error_kinds() {
        assert_eq!(Problem::from_json("{").unwrap_err().exit_code(), 2);
        let bad_tau = H4F2.replace("[0,1,1,0]", "[0,1,0,0]");
        assert_eq!(Problem::from_json(&bad_tau).unwrap_err().exit_code(), 3);
        let degenerate = r#"{"field": "gf(2)", "dim": 2, "q_upper": [[1,0],[0,0]]}"#;
        assert_eq!(Problem::from_json(degenerate).unwrap_err().exit_code(), 3);
        let short = r#"{"field": "gf(2)", "dim": 2, "q_upper": [[0,1]]}"#;
        assert_eq!(Problem::from_json(short).unwrap_err().exit_code(), 2);
    }
}
