//! Instance checks of the conjugation theorem on one module.

use crate::error::Result;
use crate::group::{is_in_breve_u_within, ExtendedElement};
use crate::matrix::Matrix;
use crate::module::HermitianModule;
use crate::pipeline::{mvw_conjugator, FLOAT_RESIDUAL_TOLERANCE};
use crate::samples::{exact_group_samples, float_group_samples, module_nilpotent_frame};
use crate::scalar::{Rational, Scalar};
use crate::twist::build_twist_isomorphism;

/// Outcome of the conjugator on one random element.
#[derive(Clone, Debug)]
pub struct TrialRecord<T> {
    pub x: Matrix<T>,
    /// Description of how `x` was drawn.
    pub sample: String,
    pub conjugator: Option<ExtendedElement<T>>,
    /// `‖g x g⁻¹ − x⁻¹‖_∞`, when a conjugator was found.
    pub residual: Option<f64>,
    pub error: Option<String>,
    pub stage_log: Vec<String>,
}

impl<T> TrialRecord<T> {
    pub fn passed(&self) -> bool {
        self.conjugator.is_some() && self.error.is_none()
    }
}

/// A product of two form-reversing elements and whether it preserves the form.
#[derive(Clone, Debug, PartialEq)]
pub struct CosetCheck {
    pub label: String,
    pub in_unitary_group: bool,
}

#[derive(Clone, Debug)]
pub struct TheoremReport<T> {
    /// A form-reversing element, showing that the extension is proper.
    pub witness: Option<ExtendedElement<T>>,
    pub witness_error: Option<String>,
    pub trials: Vec<TrialRecord<T>>,
    pub coset_checks: Vec<CosetCheck>,
}

impl<T> TheoremReport<T> {
    pub fn passed(&self) -> bool {
        self.witness.is_some()
            && self.trials.iter().all(TrialRecord::passed)
            && self.coset_checks.iter().all(|c| c.in_unitary_group)
    }
}

fn to_rational<T: Scalar>(m: &Matrix<T>) -> Matrix<Rational> {
    m.map(|x| x.to_rational().expect("finite entry"))
}

fn from_rational<T: Scalar>(m: &Matrix<Rational>) -> Matrix<T> {
    m.map(T::from_rational)
}

/// `trials` random elements: exact-eligible samples for the exact backend,
/// Cayley-random elements otherwise.
fn draw<T: Scalar>(e: &HermitianModule<T>, trials: usize, seed: u64) -> Result<Vec<(String, Matrix<T>)>> {
    if trials == 0 {
        return Ok(Vec::new());
    }
    if T::EXACT {
        let exact = e.map_matrices(to_rational);
        let frame = module_nilpotent_frame(&exact)?;
        let samples = exact_group_samples(&exact, frame.as_ref(), trials, seed)?;
        Ok(samples.into_iter().map(|(kind, x)| (kind.to_string(), from_rational(&x))).collect())
    } else {
        let samples = float_group_samples(e, trials, seed)?;
        Ok(samples.into_iter().map(|x| ("cayley random".to_string(), x)).collect())
    }
}

fn membership_tolerance<T: Scalar>() -> f64 {
    if T::EXACT {
        0.0
    } else {
        FLOAT_RESIDUAL_TOLERANCE
    }
}

/// Index-two witness, `trials` conjugator runs and coset products.
/// Deterministic in `seed`.
pub fn verify_theorem<T: Scalar>(e: &HermitianModule<T>, trials: usize, seed: u64) -> Result<TheoremReport<T>> {
    e.ensure_valid()?;
    let tol = membership_tolerance::<T>();
    let (witness, witness_error) = match build_twist_isomorphism(e) {
        Ok(w) => (Some(w), None),
        Err(err) => (None, Some(err.to_string())),
    };
    let mut records = Vec::new();
    for (sample, x) in draw(e, trials, seed)? {
        let record = match mvw_conjugator(e, &x) {
            Ok(c) => TrialRecord {
                x,
                sample,
                conjugator: Some(c.element),
                residual: Some(c.residual),
                error: None,
                stage_log: c.stage_log,
            },
            Err(err) => TrialRecord {
                x,
                sample,
                conjugator: None,
                residual: None,
                error: Some(err.to_string()),
                stage_log: Vec::new(),
            },
        };
        records.push(record);
    }
    let mut coset_checks = Vec::new();
    if let Some(w) = &witness {
        let mut check = |label: String, y: &ExtendedElement<T>| -> Result<()> {
            let product = w.compose(y);
            coset_checks.push(CosetCheck { label, in_unitary_group: is_in_breve_u_within(e, &product, tol)? });
            Ok(())
        };
        check("witness · witness".into(), w)?;
        for (k, r) in records.iter().enumerate() {
            if let Some(g) = &r.conjugator {
                check(format!("witness · conjugator {k}"), g)?;
            }
        }
    }
    Ok(TheoremReport { witness, witness_error, trials: records, coset_checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FactorKind;
    use crate::standard::{standard_module, Params};

    #[test]
    fn no_trials_gives_only_the_witness() {
        let e = standard_module::<Rational>(FactorKind::RId, 1, Params::Signature(1, 1)).unwrap();
        let report = verify_theorem(&e, 0, 1).unwrap();
        assert!(report.witness.is_some());
        assert!(report.trials.is_empty());
        assert_eq!(report.coset_checks.len(), 1);
        assert!(report.passed());
    }

    #[test]
    fn exact_sp11_residuals_vanish() {
        let e = standard_module::<Rational>(FactorKind::RId, 1, Params::Signature(1, 1)).unwrap();
        let report = verify_theorem(&e, 8, 5).unwrap();
        assert!(report.passed());
        assert!(report.trials.iter().all(|t| t.residual == Some(0.0)));
    }

    #[test]
    fn float_compact_model() {
        let e = standard_module::<f64>(FactorKind::RId, -1, Params::Rank(1)).unwrap();
        let report = verify_theorem(&e, 10, 2).unwrap();
        assert!(report.passed());
    }
}
