//! Kuranishi-model geometry at a point: the obstruction complex, the normal
//! cone and its fiber, curvilinear obstruction classes and cosections.

mod cosection;
mod curvilinear;

pub use cosection::{cosection_check, cosection_check_with, Cosection, CosectionReport, DescentCertificate};
pub use curvilinear::{
    curvilinear_obstruction, curvilinear_sweep, curvilinear_sweep_with, jet_names, small_extension_obstruction,
    CurvilinearOutcome, ObstructionClass, SmallExtensionClass, SweepConfig, SweepReport,
};

use num_traits::Zero;

use crate::dg::{cotangent_fiber, resolve_through};
use crate::error::{Error, Result};
use crate::groebner::{eliminate, groebner_basis, MonomialOrder};
use crate::linalg::{homology_basis, Matrix};
use crate::poly::{jacobian_at, KuranishiModel, Polynomial, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionComplex {
    /// `ds_p : Q^m -> Q^n`, the Jacobian at the point.
    pub ds: Matrix,
    /// `δ : Q^n -> Q^k`, dual to the linearized degree-two differential.
    pub delta: Matrix,
    /// Basis of `ker δ / im ds_p`.
    pub t2_basis: Vec<Vec<Rational>>,
}

impl ObstructionComplex {
    pub fn t2_dim(&self) -> usize {
        self.t2_basis.len()
    }

    /// Whether `v ∈ Q^n` lies in `ker δ`.
    pub fn in_kernel(&self, v: &[Rational]) -> bool {
        self.delta.rows() == 0 || self.delta.apply(v).iter().all(Zero::is_zero)
    }
}

pub fn obstruction_complex(model: &KuranishiModel) -> Result<ObstructionComplex> {
    model.check_on_locus()?;
    let n = model.ngens();
    let ds = jacobian_at(model);
    let res = resolve_through(model, 2)?;
    let fiber = cotangent_fiber(&res, 2)?;
    let delta = fiber.boundaries[1].transpose();
    if delta.rows() > 0 && !delta.mul(&ds).is_zero() {
        return Err(Error::Internal("δ ∘ ds_p is not zero".into()));
    }
    let t2_basis = homology_basis(&ds, &delta, n);
    Ok(ObstructionComplex { ds, delta, t2_basis })
}

/// The normal cone `C ⊂ M × A^n` and its fiber over the point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConePresentation {
    /// Variable names: the ambient variables followed by `Y1..Yn`.
    pub names: Vec<String>,
    pub ambient: usize,
    /// Reduced grevlex basis of the cone ideal in `Q[x, Y]`.
    pub cone_ideal: Vec<Polynomial>,
    /// Reduced grevlex basis of the fiber ideal in `Q[Y]`.
    pub fiber_ideal: Vec<Polynomial>,
}

impl ConePresentation {
    pub fn fiber_names(&self) -> &[String] {
        &self.names[self.ambient..]
    }

    /// Whether the point `v ∈ Q^n` lies on the fiber cone.
    pub fn fiber_contains_point(&self, v: &[Rational]) -> Result<bool> {
        for g in &self.fiber_ideal {
            if !crate::poly::evaluate(g, v)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn fiber_variable_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("Y{i}")).collect()
}

/// Rees-kernel presentation: eliminate `t` from `(Y_i - t f_i)`, add `I`,
/// then substitute `x = p`.
pub fn normal_cone(model: &KuranishiModel) -> Result<ConePresentation> {
    model.check_on_locus()?;
    let m = model.nvars();
    let n = model.ngens();
    let total = m + n + 1;
    let x_map: Vec<usize> = (0..m).collect();
    let t = Polynomial::var(total, m + n);
    let mut rees: Vec<Polynomial> = model
        .generators
        .iter()
        .enumerate()
        .map(|(i, f)| &Polynomial::var(total, m + i) - &(&t * &f.embed(total, &x_map)))
        .collect();
    if rees.is_empty() {
        rees.push(Polynomial::zero(total));
    }
    let kernel = eliminate(&rees, total, &[m + n]);
    let xy = m + n;
    let keep: Vec<usize> = (0..xy).collect();
    // drop the (unused) t slot
    let mut cone: Vec<Polynomial> = kernel.iter().map(|g| shrink(g, xy)).collect();
    cone.extend(model.generators.iter().map(|f| f.embed(xy, &keep[..m])));
    let cone_ideal = groebner_basis(&cone, xy, MonomialOrder::GRevLex).generators;

    let mut images: Vec<Polynomial> = model.point.iter().map(|c| Polynomial::constant(n, c.clone())).collect();
    images.extend((0..n).map(|i| Polynomial::var(n, i)));
    let fiber: Vec<Polynomial> = cone_ideal.iter().map(|g| g.substitute(&images)).collect();
    let fiber_ideal = groebner_basis(&fiber, n, MonomialOrder::GRevLex).generators;

    let mut names = model.variables.clone();
    names.extend(fiber_variable_names(n));
    Ok(ConePresentation { names, ambient: m, cone_ideal, fiber_ideal })
}

/// Drops trailing variables that do not occur.
fn shrink(g: &Polynomial, nvars: usize) -> Polynomial {
    Polynomial::from_terms(
        nvars,
        g.terms().map(|(mono, c)| {
            debug_assert!(mono.exps()[nvars..].iter().all(|&e| e == 0));
            (crate::poly::Monomial::new(mono.exps()[..nvars].to_vec()), c.clone())
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PointedModel;

    fn model(vars: &[&str], gens: &[&str]) -> PointedModel {
        PointedModel::at_origin(vars, gens).unwrap()
    }

    fn show(ps: &[Polynomial], names: &[String]) -> Vec<String> {
        ps.iter().map(|p| p.to_string_with(names)).collect()
    }

    #[test]
    fn obstruction_complex_examples() {
        let c = obstruction_complex(&model(&["x", "y"], &["x*y"])).unwrap();
        assert!(c.ds.is_zero() && c.delta.rows() == 0);
        assert_eq!(c.t2_dim(), 1);
        let c = obstruction_complex(&model(&["x", "y"], &["y - x^2"])).unwrap();
        assert_eq!(c.ds.rank(), 1);
        assert_eq!(c.t2_dim(), 0);
        let c = obstruction_complex(&model(&["x", "y"], &["x^2", "x*y", "y^2"])).unwrap();
        assert!(c.ds.is_zero());
        assert_eq!((c.delta.rows(), c.delta.cols()), (2, 3));
        assert!(c.delta.is_zero());
        assert_eq!(c.t2_dim(), 3);
    }

    #[test]
    fn normal_cone_examples() {
        let c = normal_cone(&model(&["x", "y"], &["x*y"])).unwrap();
        assert_eq!(show(&c.cone_ideal, &c.names), vec!["x*y"]);
        assert!(c.fiber_ideal.is_empty());

        let c = normal_cone(&model(&["x", "y"], &["y*x", "y*(x - 1)"])).unwrap();
        let names = c.names.clone();
        let cone = crate::groebner::groebner_basis(&c.cone_ideal, 4, MonomialOrder::GRevLex);
        let p = |s: &str| crate::poly::parse_polynomial(s, &names).unwrap();
        assert!(cone.contains(&p("(x - 1)*Y1 - x*Y2")));
        assert!(cone.contains(&p("y")));
        assert_eq!(show(&c.fiber_ideal, c.fiber_names()), vec!["Y1"]);

        let c = normal_cone(&model(&["x"], &["x"])).unwrap();
        assert!(c.fiber_ideal.is_empty());
    }
}
