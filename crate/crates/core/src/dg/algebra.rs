//! Free graded-commutative algebras `R<X>` over `R = Q[x]`: odd generators
//! are exterior, even ones polynomial. Elements are finite sums of
//! polynomial coefficients times monomials in the adjoined generators.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::poly::{ModuleElement, Polynomial, Rational};

/// A monomial in adjoined generators: `(index, exponent)` pairs, sorted by
/// index, exponents positive (and 1 for odd generators).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct DgMonomial(Vec<(usize, u32)>);

impl DgMonomial {
    pub fn one() -> Self {
        DgMonomial(Vec::new())
    }

    pub fn generator(i: usize) -> Self {
        DgMonomial(vec![(i, 1)])
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self, degrees: &[u32]) -> u32 {
        self.0.iter().map(|&(i, e)| degrees[i] * e).sum()
    }

    /// Word length (number of generator factors with multiplicity).
    pub fn length(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    /// Product with the Koszul sign, or `None` if an odd generator repeats.
    pub fn mul(&self, other: &DgMonomial, degrees: &[u32]) -> Option<(bool, DgMonomial)> {
        let odd = |i: usize| degrees[i] % 2 == 1;
        let mut negative = false;
        for &(b, _) in &other.0 {
            if odd(b) {
                let passes = self.0.iter().filter(|&&(a, _)| odd(a) && a > b).count();
                if passes % 2 == 1 {
                    negative = !negative;
                }
            }
        }
        let mut merged: BTreeMap<usize, u32> = self.0.iter().copied().collect();
        for &(b, e) in &other.0 {
            let slot = merged.entry(b).or_insert(0);
            *slot += e;
            if odd(b) && *slot > 1 {
                return None;
            }
        }
        Some((negative, DgMonomial(merged.into_iter().collect())))
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        DgMonoDisplay(self, names)
    }
}

struct DgMonoDisplay<'a>(&'a DgMonomial, &'a [String]);

impl fmt::Display for DgMonoDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
             .0
            .iter()
            .map(|&(i, e)| if e == 1 { self.1[i].clone() } else { format!("{}^{}", self.1[i], e) })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DgElement {
    nvars: usize,
    terms: BTreeMap<DgMonomial, Polynomial>,
}

impl DgElement {
    pub fn zero(nvars: usize) -> Self {
        DgElement { nvars, terms: BTreeMap::new() }
    }

    pub fn scalar(c: Polynomial) -> Self {
        let mut e = DgElement::zero(c.nvars());
        e.add_term(DgMonomial::one(), c);
        e
    }

    pub fn generator(nvars: usize, i: usize) -> Self {
        let mut e = DgElement::zero(nvars);
        e.add_term(DgMonomial::generator(i), Polynomial::one(nvars));
        e
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DgMonomial, &Polynomial)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &DgMonomial) -> Polynomial {
        self.terms.get(m).cloned().unwrap_or_else(|| Polynomial::zero(self.nvars))
    }

    pub fn add_term(&mut self, m: DgMonomial, c: Polynomial) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(|| Polynomial::zero(c.nvars()));
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &DgElement) -> DgElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Polynomial) -> DgElement {
        let mut out = DgElement::zero(self.nvars);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> DgElement {
        self.scale(&Polynomial::constant(self.nvars, c.clone()))
    }

    pub fn mul(&self, other: &DgElement, degrees: &[u32]) -> DgElement {
        let mut out = DgElement::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((neg, m)) = ma.mul(mb, degrees) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -&c } else { c });
                }
            }
        }
        out
    }

    /// Coordinates with respect to a list of monomials (a free-module basis).
    pub fn to_module(&self, basis: &BTreeMap<DgMonomial, usize>) -> ModuleElement {
        let mut comps = vec![Polynomial::zero(self.nvars); basis.len()];
        for (m, c) in &self.terms {
            let i = *basis.get(m).expect("element outside the given homogeneous basis");
            comps[i] = c.clone();
        }
        ModuleElement::new(comps)
    }

    pub fn from_module(v: &ModuleElement, basis: &[DgMonomial], nvars: usize) -> DgElement {
        let mut out = DgElement::zero(nvars);
        for (c, m) in v.components().iter().zip(basis) {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn to_string_with(&self, vars: &[String], gens: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                if m.is_one() {
                    format!("({})", c.to_string_with(vars))
                } else if is_one(c) {
                    m.display(gens).to_string()
                } else {
                    format!("({})*{}", c.to_string_with(vars), m.display(gens))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn is_one(c: &Polynomial) -> bool {
    c.len() == 1 && c.constant_term().is_one()
}

/// Differential of a monomial by the graded Leibniz rule,
/// `d(ab) = d(a) b + (-1)^{|a|} a d(b)`.
pub fn d_monomial(m: &DgMonomial, degrees: &[u32], differentials: &[DgElement], nvars: usize) -> DgElement {
    let mut out = DgElement::zero(nvars);
    let factors = m.factors();
    for (k, &(g, e)) in factors.iter().enumerate() {
        let prefix = DgMonomial(factors[..k].to_vec());
        let suffix = DgMonomial(factors[k + 1..].to_vec());
        let sign_neg = prefix.degree(degrees) % 2 == 1;
        let mut left = DgElement::zero(nvars);
        let mut lower = prefix.clone();
        if e > 1 {
            lower = prefix.mul(&DgMonomial(vec![(g, e - 1)]), degrees).expect("even power").1;
        }
        let mult = Rational::from_integer(e.into());
        left.add_term(lower, Polynomial::constant(nvars, if sign_neg { -mult } else { mult }));
        let mut right = DgElement::zero(nvars);
        right.add_term(suffix, Polynomial::one(nvars));
        let term = left.mul(&differentials[g], degrees).mul(&right, degrees);
        out = out.add(&term);
    }
    out
}

pub fn differential(x: &DgElement, degrees: &[u32], differentials: &[DgElement]) -> DgElement {
    let mut out = DgElement::zero(x.nvars());
    for (m, c) in x.terms() {
        out = out.add(&d_monomial(m, degrees, differentials, x.nvars()).scale(c));
    }
    out
}

/// All monomials of homological degree `target`, in canonical order.
pub fn monomials_of_degree(degrees: &[u32], target: u32) -> Vec<DgMonomial> {
    fn rec(degrees: &[u32], i: usize, left: u32, cur: &mut Vec<(usize, u32)>, out: &mut Vec<DgMonomial>) {
        if left == 0 {
            out.push(DgMonomial(cur.clone()));
            return;
        }
        if i == degrees.len() {
            return;
        }
        let d = degrees[i];
        rec(degrees, i + 1, left, cur, out);
        if d == 0 {
            return;
        }
        let max = if d % 2 == 1 { 1 } else { left / d };
        for e in 1..=max {
            if e * d > left {
                break;
            }
            cur.push((i, e));
            rec(degrees, i + 1, left - e * d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(degrees, 0, target, &mut Vec::new(), &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exterior_and_polynomial_products() {
        // generators: e0 (deg 1), e1 (deg 1), s (deg 2)
        let deg = [1, 1, 2];
        let e0 = DgMonomial::generator(0);
        let e1 = DgMonomial::generator(1);
        let s = DgMonomial::generator(2);
        assert_eq!(e0.mul(&e0, &deg), None);
        let (neg, m) = e1.mul(&e0, &deg).unwrap();
        assert!(neg);
        assert_eq!(m, DgMonomial(vec![(0, 1), (1, 1)]));
        let (neg, m) = s.mul(&s, &deg).unwrap();
        assert!(!neg);
        assert_eq!(m, DgMonomial(vec![(2, 2)]));
        let (neg, _) = s.mul(&e0, &deg).unwrap();
        assert!(!neg);
    }

    #[test]
    fn monomial_enumeration() {
        let deg = [1, 1, 1, 2];
        let m2 = monomials_of_degree(&deg, 2);
        // e_i e_j (3) + s (1)
        assert_eq!(m2.len(), 4);
        let m4 = monomials_of_degree(&deg, 4);
        // e_i e_j s (3) + s^2 (1)
        assert_eq!(m4.len(), 4);
        assert_eq!(monomials_of_degree(&deg, 0), vec![DgMonomial::one()]);
    }
}
