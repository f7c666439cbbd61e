use std::fmt;

use num_traits::Zero;

use super::curvilinear::{curvilinear_sweep_with, SweepConfig, SweepReport};
use super::{normal_cone, obstruction_complex, ConePresentation, ObstructionComplex};
use crate::error::{Error, Result};
use crate::groebner::{groebner_basis, radical_membership, MonomialOrder};
use crate::poly::{evaluate, jacobian_at, KuranishiModel, Monomial, Polynomial, Rational};

/// A map `F -> O`, `(a_1..a_n) -> sum σ_i a_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cosection {
    pub components: Vec<Polynomial>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DescentCertificate {
    /// `sum σ_i f_i = 0` identically.
    KillsSection,
    /// `σ · (∂f_i/∂x_j) ≡ 0 mod I` column by column.
    KillsJacobianModIdeal,
}

impl fmt::Display for DescentCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DescentCertificate::KillsSection => "σ∘s = 0",
            DescentCertificate::KillsJacobianModIdeal => "σ∘ds ≡ 0 mod I",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosectionReport {
    pub certificate: DescentCertificate,
    pub sigma_at_point: Vec<Rational>,
    /// (a) `σ_p ∘ ds_p = 0`.
    pub descends: bool,
    /// (b) `σ_p` lies in the radical of the cone fiber ideal.
    pub vanishes_on_cone: bool,
    /// (c) `σ_p` kills every swept class.
    pub kills_classes: bool,
    pub classes_checked: usize,
}

impl CosectionReport {
    pub fn all_pass(&self) -> bool {
        self.descends && self.vanishes_on_cone && self.kills_classes
    }
}

impl Cosection {
    pub fn new(components: Vec<Polynomial>) -> Self {
        Cosection { components }
    }

    /// Checks that `σ` descends to the obstruction sheaf.
    pub fn certify(&self, model: &KuranishiModel) -> Result<DescentCertificate> {
        let n = model.ngens();
        let m = model.nvars();
        if self.components.len() != n {
            return Err(Error::DimensionMismatch { what: "cosection", expected: n, found: self.components.len() });
        }
        let pairing =
            self.components.iter().zip(&model.generators).fold(Polynomial::zero(m), |acc, (s, f)| &acc + &(s * f));
        if pairing.is_zero() {
            return Ok(DescentCertificate::KillsSection);
        }
        let ideal = groebner_basis(&model.generators, m, MonomialOrder::GRevLex);
        for j in 0..m {
            let column = self
                .components
                .iter()
                .zip(&model.generators)
                .fold(Polynomial::zero(m), |acc, (s, f)| &acc + &(s * &f.derivative(j)));
            if !ideal.contains(&column) {
                return Err(Error::InvalidInput(format!(
                    "not a cosection: σ∘s ≠ 0 and σ∘ds is nonzero modulo I in column {}",
                    j + 1
                )));
            }
        }
        Ok(DescentCertificate::KillsJacobianModIdeal)
    }
}

pub fn cosection_check(model: &KuranishiModel, sigma: &Cosection, config: &SweepConfig) -> Result<CosectionReport> {
    sigma.certify(model)?;
    let cone = normal_cone(model)?;
    let complex = obstruction_complex(model)?;
    let sweep = curvilinear_sweep_with(model, config, &cone, &complex)?;
    cosection_check_with(model, sigma, &cone, &complex, &sweep)
}

pub fn cosection_check_with(
    model: &KuranishiModel,
    sigma: &Cosection,
    cone: &ConePresentation,
    _complex: &ObstructionComplex,
    sweep: &SweepReport,
) -> Result<CosectionReport> {
    let certificate = sigma.certify(model)?;
    let n = model.ngens();
    let sigma_at_point =
        sigma.components.iter().map(|s| evaluate(s, &model.point)).collect::<Result<Vec<Rational>>>()?;
    let ds = jacobian_at(model);
    let descends = (0..ds.cols())
        .all(|j| sigma_at_point.iter().enumerate().map(|(i, s)| s * ds.get(i, j)).sum::<Rational>().is_zero());
    let form =
        Polynomial::from_terms(n, sigma_at_point.iter().enumerate().map(|(i, c)| (Monomial::var(n, i), c.clone())));
    let vanishes_on_cone = form.is_zero() || radical_membership(&form, &cone.fiber_ideal, n);
    let kills_classes =
        sweep.classes.iter().all(|c| c.raw.iter().zip(&sigma_at_point).map(|(a, b)| a * b).sum::<Rational>().is_zero());
    Ok(CosectionReport {
        certificate,
        sigma_at_point,
        descends,
        vanishes_on_cone,
        kills_classes,
        classes_checked: sweep.classes.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, q, PointedModel};

    fn setup(vars: &[&str], gens: &[&str], sigma: &[&str]) -> (PointedModel, Cosection) {
        let model = PointedModel::at_origin(vars, gens).unwrap();
        let comps = sigma.iter().map(|s| parse_polynomial(s, &model.variables).unwrap()).collect();
        (model, Cosection::new(comps))
    }

    #[test]
    fn cosection_on_reducible_presentation() {
        let (m, s) = setup(&["x", "y"], &["y*x", "y*(x - 1)"], &["x - 1", "-x"]);
        let r = cosection_check(&m, &s, &SweepConfig::default()).unwrap();
        assert_eq!(r.certificate, DescentCertificate::KillsSection);
        assert_eq!(r.sigma_at_point, vec![q(-1), q(0)]);
        assert!(r.all_pass());
    }

    #[test]
    fn cosection_on_zero_component() {
        let (m, s) = setup(&["x", "y"], &["x*y", "0"], &["0", "1"]);
        let r = cosection_check(&m, &s, &SweepConfig::default()).unwrap();
        assert!(r.all_pass());
    }

    #[test]
    fn non_cosection_is_rejected() {
        let (m, s) = setup(&["x", "y"], &["x*y"], &["1"]);
        assert!(matches!(cosection_check(&m, &s, &SweepConfig::default()), Err(Error::InvalidInput(_))));
    }
}
