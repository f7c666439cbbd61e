use num_traits::Zero;

use super::{Monomial, Polynomial, Rational};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// An affine scheme `S = V(f_1..f_n)` together with a rational point `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedModel {
    pub variables: Vec<String>,
    pub generators: Vec<Polynomial>,
    pub point: Vec<Rational>,
}

/// The zero locus of a section `s = (f_1..f_n)` of the trivial bundle of
/// rank `n` over affine space, with a point on it. Same data as a
/// [`PointedModel`]; the generators are read as section components.
pub type KuranishiModel = PointedModel;

impl PointedModel {
    /// Builds a model, checking ring sizes. Whether the point lies on the
    /// locus is checked by [`PointedModel::check_on_locus`].
    pub fn new(variables: Vec<String>, generators: Vec<Polynomial>, point: Vec<Rational>) -> Result<Self> {
        let m = variables.len();
        if point.len() != m {
            return Err(Error::DimensionMismatch { what: "point", expected: m, found: point.len() });
        }
        for g in &generators {
            if g.nvars() != m {
                return Err(Error::DimensionMismatch { what: "generator ring", expected: m, found: g.nvars() });
            }
        }
        Ok(PointedModel { variables, generators, point })
    }

    /// Model at the origin, parsing generators from text.
    pub fn at_origin(variables: &[&str], generators: &[&str]) -> Result<Self> {
        let vars: Vec<String> = variables.iter().map(|s| s.to_string()).collect();
        let gens = generators
            .iter()
            .map(|g| super::parse_polynomial(g, &vars).map_err(Error::from))
            .collect::<Result<Vec<_>>>()?;
        let point = vec![Rational::zero(); vars.len()];
        PointedModel::new(vars, gens, point)
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn is_at_origin(&self) -> bool {
        self.point.iter().all(Zero::is_zero)
    }

    pub fn check_on_locus(&self) -> Result<()> {
        for (i, g) in self.generators.iter().enumerate() {
            let v = evaluate(g, &self.point)?;
            if !v.is_zero() {
                return Err(Error::PointNotOnLocus { generator: i, value: v.to_string() });
            }
        }
        Ok(())
    }

    /// Same model with one more generator appended.
    pub fn with_generator(&self, g: Polynomial) -> Self {
        let mut out = self.clone();
        out.generators.push(g);
        out
    }
}

pub fn evaluate(f: &Polynomial, point: &[Rational]) -> Result<Rational> {
    if point.len() != f.nvars() {
        return Err(Error::DimensionMismatch { what: "point", expected: f.nvars(), found: point.len() });
    }
    let mut acc = Rational::zero();
    for (m, c) in f.terms() {
        let mut t = c.clone();
        for (x, &e) in point.iter().zip(m.exps()) {
            if e > 0 {
                t *= num_traits::pow(x.clone(), e as usize);
            }
        }
        acc += t;
    }
    Ok(acc)
}

/// Substitutes `x_i -> x_i + p_i` so that the point moves to the origin.
pub fn translate_to_origin(model: &PointedModel) -> Result<PointedModel> {
    model.check_on_locus()?;
    let m = model.nvars();
    if model.is_at_origin() {
        return Ok(model.clone());
    }
    let generators = shift_generators(&model.generators, &model.point);
    Ok(PointedModel { variables: model.variables.clone(), generators, point: vec![Rational::zero(); m] })
}

/// Substitutes `x_i -> x_i + shift_i` in every generator.
pub fn shift_generators(generators: &[Polynomial], shift: &[Rational]) -> Vec<Polynomial> {
    let m = shift.len();
    let images: Vec<Polynomial> =
        (0..m).map(|i| &Polynomial::var(m, i) + &Polynomial::constant(m, shift[i].clone())).collect();
    generators.iter().map(|g| g.substitute(&images)).collect()
}

/// `n x m` matrix of first partials at the model's point.
pub fn jacobian_at(model: &PointedModel) -> Matrix {
    let m = model.nvars();
    let n = model.ngens();
    let mut jac = Matrix::zeros(n, m);
    for (i, f) in model.generators.iter().enumerate() {
        for j in 0..m {
            let d = f.derivative(j);
            let v = evaluate(&d, &model.point).expect("ring sizes checked at construction");
            jac.set(i, j, v);
        }
    }
    jac
}

/// Linear part of `f` at the origin as a coefficient row.
pub(crate) fn linear_row(f: &Polynomial) -> Vec<Rational> {
    let m = f.nvars();
    (0..m).map(|j| f.coeff(&Monomial::var(m, j))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, q, q2};
    use proptest::prelude::*;

    fn xy() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn evaluate_examples() {
        let n = xy();
        let p = |s| parse_polynomial(s, &n).unwrap();
        assert_eq!(evaluate(&p("x*y"), &[q(0), q(0)]).unwrap(), q(0));
        assert_eq!(evaluate(&p("x^2 + y"), &[q(1), q(2)]).unwrap(), q(3));
        assert_eq!(evaluate(&p("2/3*x"), &[q2(3, 2), q(0)]).unwrap(), q(1));
        assert!(matches!(evaluate(&p("x"), &[q(1)]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn translate_examples() {
        let n = xy();
        let m = PointedModel::new(n.clone(), vec![parse_polynomial("y - x^2", &n).unwrap()], vec![q(1), q(1)]).unwrap();
        let t = translate_to_origin(&m).unwrap();
        assert_eq!(t.generators[0].to_string_with(&n), "-x^2 - 2*x + y");
        assert!(t.is_at_origin());

        let node = PointedModel::at_origin(&["x", "y"], &["x*y"]).unwrap();
        assert_eq!(translate_to_origin(&node).unwrap(), node);

        let off = PointedModel::at_origin(&["x", "y"], &["x - 1"]).unwrap();
        assert!(matches!(translate_to_origin(&off), Err(Error::PointNotOnLocus { generator: 0, .. })));
    }

    #[test]
    fn jacobian_examples() {
        let j = jacobian_at(&PointedModel::at_origin(&["x", "y"], &["x*y"]).unwrap());
        assert!(j.is_zero() && j.rows() == 1 && j.cols() == 2);
        let j = jacobian_at(&PointedModel::at_origin(&["x", "y"], &["y - x^2"]).unwrap());
        assert_eq!(j.row(0), vec![q(0), q(1)]);
        let j = jacobian_at(&PointedModel::at_origin(&["x", "y"], &["x^2", "x*y", "y^2"]).unwrap());
        assert!(j.is_zero() && j.rows() == 3);
    }

    fn small_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(((0u32..3, 0u32..3), -4i64..5), 0..5).prop_map(|ts| {
            Polynomial::from_terms(2, ts.into_iter().map(|((a, b), c)| (Monomial::new(vec![a, b]), q(c))))
        })
    }

    proptest! {
        #[test]
        fn evaluate_is_a_ring_homomorphism(f in small_poly(), g in small_poly(), a in -3i64..4, b in 1i64..4) {
            let pt = vec![q2(a, b), q(b - a)];
            let ef = evaluate(&f, &pt).unwrap();
            let eg = evaluate(&g, &pt).unwrap();
            prop_assert_eq!(evaluate(&(&f * &g), &pt).unwrap(), &ef * &eg);
            prop_assert_eq!(evaluate(&(&f + &g), &pt).unwrap(), ef + eg);
        }

        #[test]
        fn translation_round_trip(f in small_poly(), a in -3i64..4, b in -3i64..4) {
            let names = xy();
            let p = vec![q(a), q(b)];
            let g = &f - &Polynomial::constant(2, evaluate(&f, &p).unwrap());
            let m = PointedModel::new(names, vec![g.clone()], p.clone()).unwrap();
            let t = translate_to_origin(&m).unwrap();
            let back: Vec<Rational> = p.iter().map(|x| -x.clone()).collect();
            prop_assert_eq!(&shift_generators(&t.generators, &back)[0], &g);
        }

        #[test]
        fn jacobian_of_linear_form_is_its_row(a in -5i64..6, b in -5i64..6, c in -5i64..6) {
            let f = Polynomial::from_terms(3, vec![
                (Monomial::var(3, 0), q(a)), (Monomial::var(3, 1), q(b)), (Monomial::var(3, 2), q(c)),
            ]);
            let m = PointedModel::new(vec!["x".into(), "y".into(), "z".into()], vec![f], vec![q(0), q(0), q(0)]).unwrap();
            prop_assert_eq!(jacobian_at(&m).row(0), vec![q(a), q(b), q(c)]);
        }
    }
}
