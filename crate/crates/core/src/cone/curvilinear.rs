use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{normal_cone, obstruction_complex, ConePresentation, ObstructionComplex};
use crate::error::{Error, Result};
use crate::groebner::radical_membership;
use crate::linalg::{reduce_modulo, Matrix};
use crate::poly::{jacobian_at, shift_generators, KuranishiModel, Monomial, Polynomial, Rational};

/// Coefficient of `t^k` in a polynomial in one variable.
fn coefficient(p: &Polynomial, k: u32) -> Rational {
    p.coeff(&Monomial::new(vec![k]))
}

fn truncate(p: &Polynomial, n: u32) -> Polynomial {
    Polynomial::from_terms(1, p.terms().filter(|(m, _)| m.degree() < n).map(|(m, c)| (m.clone(), c.clone())))
}

fn t_power(c: &Rational, n: u32) -> Polynomial {
    Polynomial::term(Monomial::new(vec![n]), c.clone())
}

pub fn jet_names() -> Vec<String> {
    vec!["t".to_string()]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionClass {
    pub order: u32,
    /// `t^order` coefficients of `f(γ)`, a vector in `F|_p`.
    pub raw: Vec<Rational>,
    /// Canonical representative of `raw` modulo `im ds_p`.
    pub class: Vec<Rational>,
    pub jet: Vec<Polynomial>,
}

impl ObstructionClass {
    pub fn is_zero(&self) -> bool {
        self.class.iter().all(Zero::is_zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurvilinearOutcome {
    Obstructed(ObstructionClass),
    /// The class vanishes; `extension` agrees with the jet below `t^order`
    /// and satisfies the equations modulo `t^(order + 1)`.
    Extends {
        class: ObstructionClass,
        extension: Vec<Polynomial>,
    },
}

impl CurvilinearOutcome {
    pub fn class(&self) -> &ObstructionClass {
        match self {
            CurvilinearOutcome::Obstructed(c) => c,
            CurvilinearOutcome::Extends { class, .. } => class,
        }
    }

    pub fn extends(&self) -> bool {
        matches!(self, CurvilinearOutcome::Extends { .. })
    }
}

/// Obstruction to lifting a jet `Q[t]/t^n -> S` to `Q[t]/t^(n+1)`.
pub fn curvilinear_obstruction(model: &KuranishiModel, jet: &[Polynomial], n: u32) -> Result<CurvilinearOutcome> {
    model.check_on_locus()?;
    let m = model.nvars();
    if jet.len() != m {
        return Err(Error::DimensionMismatch { what: "jet", expected: m, found: jet.len() });
    }
    if n == 0 {
        return Err(Error::InvalidInput("jet order must be positive".into()));
    }
    if let Some(p) = jet.iter().find(|p| p.nvars() != 1) {
        return Err(Error::DimensionMismatch { what: "jet ring", expected: 1, found: p.nvars() });
    }
    let jet: Vec<Polynomial> = jet.iter().map(|p| truncate(p, n)).collect();
    for (i, (p, c)) in jet.iter().zip(&model.point).enumerate() {
        if &p.constant_term() != c {
            return Err(Error::InvalidInput(format!("jet component {} does not start at the point", i + 1)));
        }
    }
    let local: Vec<Polynomial> =
        jet.iter().zip(&model.point).map(|(p, c)| p - &Polynomial::constant(1, c.clone())).collect();
    let shifted = shift_generators(&model.generators, &model.point);
    let mut raw = Vec::with_capacity(shifted.len());
    for (i, g) in shifted.iter().enumerate() {
        let v = if m == 0 { Polynomial::constant(1, g.constant_term()) } else { g.substitute(&local) };
        if let Some(k) = (0..n).find(|&k| !coefficient(&v, k).is_zero()) {
            return Err(Error::InvalidInput(format!(
                "jet is not on the locus to order {n}: generator {} has a nonzero t^{k} term",
                i + 1
            )));
        }
        raw.push(coefficient(&v, n));
    }
    let ds = jacobian_at(model);
    let image = if m == 0 || ds.rows() == 0 { Vec::new() } else { ds.column_space() };
    let class = reduce_modulo(&raw, &image);
    let oc = ObstructionClass { order: n, raw: raw.clone(), class, jet: jet.clone() };
    if !oc.is_zero() {
        return Ok(CurvilinearOutcome::Obstructed(oc));
    }
    let neg: Vec<Rational> = raw.iter().map(|c| -c.clone()).collect();
    let w = if ds.rows() == 0 {
        vec![Rational::zero(); m]
    } else {
        ds.solve(&neg).ok_or_else(|| Error::Internal("zero class without a correction".into()))?
    };
    let extension = jet.iter().zip(&w).map(|(p, c)| p + &t_power(c, n)).collect();
    Ok(CurvilinearOutcome::Extends { class: oc, extension })
}

/// The same obstruction, read as a class tensored with the ideal `(t^n)` of
/// the small extension `Q[t]/t^(n+1) -> Q[t]/t^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallExtensionClass {
    pub outcome: CurvilinearOutcome,
    pub power: u32,
}

impl fmt::Display for SmallExtensionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            CurvilinearOutcome::Extends { .. } => write!(f, "extends"),
            CurvilinearOutcome::Obstructed(c) => {
                let parts: Vec<String> = c.class.iter().map(|x| x.to_string()).collect();
                if parts.len() == 1 {
                    write!(f, "{} ⊗ t^{}", parts[0], self.power)
                } else {
                    write!(f, "({}) ⊗ t^{}", parts.join(", "), self.power)
                }
            }
        }
    }
}

pub fn small_extension_obstruction(model: &KuranishiModel, jet: &[Polynomial], n: u32) -> Result<SmallExtensionClass> {
    Ok(SmallExtensionClass { outcome: curvilinear_obstruction(model, jet, n)?, power: n })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    /// Highest `n` for which order-`n` classes are computed (at least 2).
    pub max_order: u32,
    /// First-order directions use coefficients `-grid..=grid` on a basis of `T^1`.
    pub grid: i64,
    pub seed: Option<u64>,
    pub random_samples: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { max_order: 3, grid: 1, seed: None, random_samples: 0 }
    }
}

const MAX_SWEEP_JETS: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    /// Distinct classes by `(order, raw)`, sorted.
    pub classes: Vec<ObstructionClass>,
    pub jets_examined: usize,
    pub all_in_cone: bool,
    pub all_in_kernel: bool,
    /// Whether the linear span of the classes contains the cone fiber.
    pub spans_cone: bool,
}

impl SweepReport {
    pub fn obstructed(&self) -> impl Iterator<Item = &ObstructionClass> {
        self.classes.iter().filter(|c| !c.is_zero())
    }
}

fn grid_points(r: usize, g: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-g..=g).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

fn combine(basis: &[Vec<Rational>], coeffs: &[i64], m: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); m];
    for (b, &c) in basis.iter().zip(coeffs) {
        if c != 0 {
            let c = Rational::from_integer(c.into());
            for (x, y) in v.iter_mut().zip(b) {
                *x += &c * y;
            }
        }
    }
    v
}

pub fn curvilinear_sweep(model: &KuranishiModel, config: &SweepConfig) -> Result<SweepReport> {
    let cone = normal_cone(model)?;
    let complex = obstruction_complex(model)?;
    curvilinear_sweep_with(model, config, &cone, &complex)
}

pub fn curvilinear_sweep_with(
    model: &KuranishiModel,
    config: &SweepConfig,
    cone: &ConePresentation,
    complex: &ObstructionComplex,
) -> Result<SweepReport> {
    if config.max_order < 2 {
        return Err(Error::InvalidInput("sweep order must be at least 2".into()));
    }
    model.check_on_locus()?;
    let m = model.nvars();
    let n = model.ngens();
    let ds = jacobian_at(model);
    let tangent: Vec<Vec<Rational>> = if ds.rows() == 0 { Matrix::identity(m).to_rows() } else { ds.nullspace() };

    let mut directions: Vec<Vec<i64>> = grid_points(tangent.len(), config.grid);
    if let Some(seed) = config.seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..config.random_samples {
            directions.push((0..tangent.len()).map(|_| rng.gen_range(-3..=3)).collect());
        }
    }
    if directions.len() > MAX_SWEEP_JETS {
        return Err(Error::ResourceLimit(format!("sweep would start from {} directions", directions.len())));
    }

    let mut frontier: Vec<Vec<Polynomial>> = directions
        .iter()
        .map(|coeffs| {
            let v = combine(&tangent, coeffs, m);
            model.point.iter().zip(&v).map(|(p, c)| &Polynomial::constant(1, p.clone()) + &t_power(c, 1)).collect()
        })
        .collect();
    let mut seen: BTreeSet<(u32, Vec<Rational>)> = BTreeSet::new();
    let mut classes = Vec::new();
    let mut jets_examined = 0;
    for order in 2..=config.max_order {
        let mut next: Vec<Vec<Polynomial>> = Vec::new();
        let mut next_seen: BTreeSet<Vec<Polynomial>> = BTreeSet::new();
        for jet in &frontier {
            jets_examined += 1;
            let outcome = curvilinear_obstruction(model, jet, order)?;
            let c = outcome.class().clone();
            if seen.insert((order, c.raw.clone())) {
                classes.push(c);
            }
            if let CurvilinearOutcome::Extends { extension, .. } = outcome {
                if order == config.max_order {
                    continue;
                }
                let mut variants = vec![extension.clone()];
                for k in &tangent {
                    variants.push(extension.iter().zip(k).map(|(p, c)| p + &t_power(c, order)).collect());
                }
                for v in variants {
                    if next_seen.insert(v.clone()) {
                        next.push(v);
                    }
                }
            }
        }
        if next.len() > MAX_SWEEP_JETS {
            return Err(Error::ResourceLimit(format!("sweep frontier grew to {} jets", next.len())));
        }
        frontier = next;
    }
    classes.sort_by(|a, b| (a.order, &a.raw).cmp(&(b.order, &b.raw)));

    let mut all_in_cone = true;
    let mut all_in_kernel = true;
    for c in &classes {
        all_in_cone &= cone.fiber_contains_point(&c.raw)?;
        all_in_kernel &= complex.in_kernel(&c.raw);
    }

    let nonzero: Vec<Vec<Rational>> =
        classes.iter().filter(|c| c.raw.iter().any(|x| !x.is_zero())).map(|c| c.raw.clone()).collect();
    let annihilators =
        if nonzero.is_empty() { Matrix::identity(n).to_rows() } else { Matrix::from_rows(nonzero, n).nullspace() };
    let spans_cone = annihilators.iter().all(|l| {
        let form = Polynomial::from_terms(n, l.iter().enumerate().map(|(i, c)| (Monomial::var(n, i), c.clone())));
        radical_membership(&form, &cone.fiber_ideal, n)
    });

    Ok(SweepReport { classes, jets_examined, all_in_cone, all_in_kernel, spans_cone })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, q, PointedModel};

    fn model(vars: &[&str], gens: &[&str]) -> PointedModel {
        PointedModel::at_origin(vars, gens).unwrap()
    }

    fn jet(parts: &[&str]) -> Vec<Polynomial> {
        parts.iter().map(|s| parse_polynomial(s, &jet_names()).unwrap()).collect()
    }

    #[test]
    fn node_jets() {
        let node = model(&["x", "y"], &["x*y"]);
        match curvilinear_obstruction(&node, &jet(&["t", "t"]), 2).unwrap() {
            CurvilinearOutcome::Obstructed(c) => assert_eq!(c.class, vec![q(1)]),
            other => panic!("expected an obstruction, got {other:?}"),
        }
        assert!(curvilinear_obstruction(&node, &jet(&["t", "0"]), 2).unwrap().extends());
        let s = small_extension_obstruction(&node, &jet(&["t", "t"]), 2).unwrap();
        assert_eq!(s.to_string(), "1 ⊗ t^2");
        assert!(small_extension_obstruction(&node, &jet(&["t", "0"]), 3).unwrap().outcome.extends());
    }

    #[test]
    fn smooth_jets_extend() {
        let parabola = model(&["x", "y"], &["y - x^2"]);
        let out = curvilinear_obstruction(&parabola, &jet(&["t", "0"]), 2).unwrap();
        let CurvilinearOutcome::Extends { extension, .. } = out else { panic!("smooth jets extend") };
        // the lift satisfies the equation to the next order
        assert!(curvilinear_obstruction(&parabola, &extension, 3).is_ok());
        assert_eq!(extension[1].to_string_with(&jet_names()), "t^2");
    }

    #[test]
    fn off_locus_jet_is_rejected() {
        let node = model(&["x", "y"], &["x*y"]);
        assert!(matches!(curvilinear_obstruction(&node, &jet(&["1 + t", "t"]), 2), Err(Error::InvalidInput(_))));
        assert!(matches!(curvilinear_obstruction(&node, &jet(&["t", "t"]), 3), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn node_sweep() {
        let r = curvilinear_sweep(&model(&["x", "y"], &["x*y"]), &SweepConfig { max_order: 2, ..Default::default() })
            .unwrap();
        let values: BTreeSet<Rational> = r.classes.iter().map(|c| c.class[0].clone()).collect();
        assert_eq!(values, [q(-1), q(0), q(1)].into_iter().collect());
        assert!(r.all_in_cone && r.all_in_kernel && r.spans_cone);
    }

    #[test]
    fn smooth_sweep_is_trivial() {
        let r = curvilinear_sweep(&model(&["x", "y"], &["y - x^2"]), &SweepConfig::default()).unwrap();
        assert!(r.classes.iter().all(ObstructionClass::is_zero));
        assert!(r.all_in_cone);
    }

    #[test]
    fn reducible_presentation_sweep() {
        let r = curvilinear_sweep(&model(&["x", "y"], &["y*x", "y*(x - 1)"]), &SweepConfig::default()).unwrap();
        assert!(r.all_in_cone && r.all_in_kernel);
        assert!(r.classes.iter().all(|c| c.raw[0].is_zero()));
    }
}
