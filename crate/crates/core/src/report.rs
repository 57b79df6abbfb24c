//! JSON reports for the command-line tool. Keys come out sorted and every
//! report echoes the canonical problem so it can be fed back in.

use serde_json::{json, Value};

use crate::clifford::{
    explicit_matrix_iso, involution_type, natural_involution, pfister_invariant, phi_subalgebra,
    transpose_iso_criterion, CliffordError,
};
use crate::decompose::{decompose, DecomposeError};
use crate::field::FieldElement;
use crate::linalg::Vector;
use crate::oracle::{enumerate_orthogonal_group, exhaustive_verify, OracleError};
use crate::problem::{Problem, ProblemError};
use crate::wallform::WallForm;

fn strs(v: &[FieldElement]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn vectors(vs: &[Vector]) -> Vec<Vec<String>> {
    vs.iter().map(|v| strs(v)).collect()
}

fn with_problem(p: &Problem, mut report: Value) -> Value {
    report["problem"] = serde_json::to_value(p.canonical()).expect("problem files serialize");
    report
}

pub fn analyze(p: &Problem) -> Result<Value, ProblemError> {
    let tau = p.require_tau()?;
    let wf = WallForm::new(tau);
    let c = wf.classify();
    let spinor_norms: Vec<Value> = p
        .words
        .iter()
        .map(|w| {
            let class = w.spinor_norm();
            json!({ "norm": class.representative.to_string(), "trivial": class.is_trivial() })
        })
        .collect();
    let report = json!({
        "wall_gram": wf.gram().to_strings(),
        "residual_basis": vectors(wf.residual_basis()),
        "alternating": c.alternating,
        "symmetric": c.symmetric,
        "antisymmetric": c.antisymmetric,
        "nondegenerate": wf.is_nondegenerate(),
        "residual_dim": wf.dim(),
        "fixed_dim": tau.fixed_space().dim(),
        "unipotency_index": tau.unipotency_index(),
        "spinor_norms": spinor_norms,
    });
    Ok(with_problem(p, report))
}

fn decompose_error(e: DecomposeError) -> ProblemError {
    match e {
        DecomposeError::ValidationFailed(s) => ProblemError::Internal(s),
        other => ProblemError::Precondition(other.to_string()),
    }
}

/// The report and whether the decomposition validated.
pub fn decomposition(p: &Problem) -> Result<(Value, bool), ProblemError> {
    let tau = p.require_tau()?;
    let d = decompose(tau).map_err(decompose_error)?;
    let valid = d.validate().is_ok() && d.reassemble() == *tau.matrix();
    let blocks: Vec<Value> =
        d.blocks.iter().map(|b| json!({ "kind": b.kind(), "vectors": vectors(&b.vectors()) })).collect();
    let report = json!({
        "W_basis": vectors(&d.w.basis_vectors()),
        "blocks": blocks,
        "m": d.m(),
        "s": d.s,
        "alternating": d.alternating,
        "valid": valid,
    });
    Ok((with_problem(p, report), valid))
}

fn clifford_error(e: CliffordError) -> ProblemError {
    match e {
        CliffordError::TheoremViolated(s) => ProblemError::Internal(s),
        other => ProblemError::Precondition(other.to_string()),
    }
}

pub fn clifford(p: &Problem) -> Result<Value, ProblemError> {
    let tau = p.require_tau()?;
    let j = natural_involution(tau).map_err(clifford_error)?;
    let residual_fixed = tau.residual_space() == tau.fixed_space();
    let mut report = json!({
        "involution_type": involution_type(&j).as_str(),
        "residual_equals_fixed": residual_fixed,
        "phi_dim": null,
        "phi_generator_squares": null,
        "pfister": null,
        "pfister_trivial": null,
        "transpose_iso": null,
        "explicit_iso": null,
    });
    if residual_fixed {
        let phi = phi_subalgebra(tau).map_err(clifford_error)?;
        if !phi.checks.all() {
            return Err(ProblemError::Internal(format!("Φ-subalgebra checks failed: {:?}", phi.checks)));
        }
        let pf = pfister_invariant(tau).map_err(clifford_error)?;
        let criterion = transpose_iso_criterion(tau).map_err(clifford_error)?;
        report["phi_dim"] = json!(phi.dim());
        report["phi_generator_squares"] = json!(strs(&phi.generator_squares));
        report["pfister"] = json!(pf.generator_strings());
        report["pfister_trivial"] = json!(pf.is_trivial());
        report["transpose_iso"] = json!(criterion.holds());
        if criterion.holds() && tau.space().field().is_finite() {
            let iso = explicit_matrix_iso(tau).map_err(clifford_error)?;
            if !iso.verified() {
                return Err(ProblemError::Internal("explicit isomorphism failed verification".into()));
            }
            report["explicit_iso"] = json!({ "degree": iso.degree, "verified": true });
        }
    }
    Ok(with_problem(p, report))
}

fn oracle_error(e: OracleError) -> ProblemError {
    match e {
        OracleError::UnknownTheorem(_) => ProblemError::Parse(e.to_string()),
        OracleError::TooLarge(_) => ProblemError::Precondition(e.to_string()),
    }
}

/// The report and whether every check passed.
pub fn verify(p: &Problem, theorem: &str) -> Result<(Value, bool), ProblemError> {
    let report = exhaustive_verify(theorem, &p.space).map_err(oracle_error)?;
    let passed = report.passed();
    let value = serde_json::to_value(&report).expect("reports serialize");
    Ok((with_problem(p, value), passed))
}

pub fn enumerate(p: &Problem) -> Result<Value, ProblemError> {
    let g = enumerate_orthogonal_group(&p.space).map_err(oracle_error)?;
    let elems = g.isometries();
    let report = json!({
        "order": g.order(),
        "method": g.method(),
        "unipotent2_count": elems.iter().filter(|t| t.is_unipotent2()).count(),
        "involution_count": elems.iter().filter(|t| t.is_involution() && !t.is_identity()).count(),
    });
    Ok(with_problem(p, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h4f2() -> Problem {
        Problem::from_json(
            r#"{"field": "gf(2)", "dim": 4, "q_upper": [[0,1,0,0],[0,0,0,0],[0,0,0,1],[0,0,0,0]],
                "tau": [[1,0,0,1],[0,1,0,0],[0,1,1,0],[0,0,0,1]]}"#,
        )
        .unwrap()
    }

    fn r2t() -> Problem {
        Problem::from_json(
            r#"{"field": "gf2(t)", "dim": 2, "q_upper": [["t",1],[0,0]], "tau": [[1,"1/t"],[0,1]],
                "reflection_words": [[["1","0"]]]}"#,
        )
        .unwrap()
    }

    #[test]
    fn analyze_reports() {
        let a = analyze(&h4f2()).unwrap();
        assert_eq!(a["alternating"], true);
        assert_eq!((a["residual_dim"].as_u64(), a["fixed_dim"].as_u64()), (Some(2), Some(2)));
        let r = analyze(&r2t()).unwrap();
        assert_eq!(r["wall_gram"], json!([["t"]]));
        assert_eq!(r["spinor_norms"][0], json!({"norm": "t", "trivial": false}));
    }

    #[test]
    fn clifford_reports() {
        let c = clifford(&h4f2()).unwrap();
        assert_eq!(c["transpose_iso"], true);
        assert_eq!(c["pfister"], json!(["1", "1"]));
        let c = clifford(&r2t()).unwrap();
        assert_eq!(c["pfister"], json!(["t"]));
        assert_eq!(c["transpose_iso"], false);
    }

    #[test]
    fn decomposition_and_enumeration() {
        let (d, valid) = decomposition(&h4f2()).unwrap();
        assert!(valid);
        assert_eq!(d["blocks"][0]["kind"], "interchange");
        let e = enumerate(&h4f2()).unwrap();
        assert_eq!(e["order"], 72);
        assert_eq!(e["method"], "exhaustive-matrix-scan");
        assert_eq!(verify(&h4f2(), "nope").unwrap_err().exit_code(), 2);
    }
}
