//! Minimal model at the origin, truncated at word length two.
//!
//! Every generator differential is split into a linear part (a combination
//! of single generators or variables with constant coefficients) and a
//! quadratic part (products of two such symbols). Linear parts are then
//! cancelled pairwise by Gaussian elimination; what survives has zero
//! linear differential and its quadratic differential carries the bracket.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::resolution::DgResolution;
use crate::error::{Error, Result};
use crate::poly::{evaluate, Rational};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QuadraticDifferential {
    pub linear: BTreeMap<usize, Rational>,
    /// Keys `(a, b)` with `a <= b`, read as the product `v_a v_b`.
    pub quadratic: BTreeMap<(usize, usize), Rational>,
}

/// Symbols are the variables `0..m` (degree 0) followed by the adjoined
/// generators of the resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalModel {
    pub names: Vec<String>,
    pub degrees: Vec<u32>,
    pub alive: Vec<bool>,
    pub differentials: Vec<QuadraticDifferential>,
    pub top_degree: u32,
}

fn add_linear(map: &mut BTreeMap<usize, Rational>, a: usize, c: Rational) {
    if c.is_zero() {
        return;
    }
    let slot = map.entry(a).or_insert_with(Rational::zero);
    *slot += c;
    if slot.is_zero() {
        map.remove(&a);
    }
}

/// Adds `c * v_a v_b` in graded-symmetric normal form.
fn add_quadratic(map: &mut BTreeMap<(usize, usize), Rational>, degrees: &[u32], a: usize, b: usize, c: Rational) {
    if c.is_zero() || (a == b && degrees[a] % 2 == 1) {
        return;
    }
    let (key, c) = if a <= b {
        ((a, b), c)
    } else if (degrees[a] * degrees[b]) % 2 == 1 {
        ((b, a), -c)
    } else {
        ((b, a), c)
    };
    let slot = map.entry(key).or_insert_with(Rational::zero);
    *slot += c;
    if slot.is_zero() {
        map.remove(&key);
    }
}

impl MinimalModel {
    pub fn nvars(&self) -> usize {
        self.degrees.iter().take_while(|&&d| d == 0).count()
    }

    pub fn alive_of_degree(&self, d: u32) -> Vec<usize> {
        (0..self.degrees.len()).filter(|&i| self.alive[i] && self.degrees[i] == d).collect()
    }

    /// Surviving symbols per degree `0..top_degree`; entry `k` matches `dim T^{k+1}`.
    pub fn counts(&self) -> Vec<usize> {
        (0..self.top_degree).map(|d| self.alive_of_degree(d).len()).collect()
    }

    pub fn is_minimal(&self) -> bool {
        (0..self.degrees.len()).all(|i| !self.alive[i] || self.differentials[i].linear.is_empty())
    }

    /// Quadratic coefficient of `v_a v_b` in `d(v_w)`, symmetrized so that
    /// `d(v_w) = 1/2 sum_{a,b} C^w_{ab} v_a v_b`.
    pub fn structure_constant(&self, w: usize, a: usize, b: usize) -> Rational {
        let q = &self.differentials[w].quadratic;
        let get = |k: (usize, usize)| q.get(&k).cloned().unwrap_or_else(Rational::zero);
        if a == b {
            get((a, a)) * Rational::from_integer(2.into())
        } else if a < b {
            get((a, b))
        } else if (self.degrees[a] * self.degrees[b]) % 2 == 1 {
            -get((b, a))
        } else {
            get((b, a))
        }
    }

    fn cancel(&mut self, z: usize, y: usize) {
        let dz = self.differentials[z].clone();
        let a = dz.linear[&y].clone();
        // y = -(1/a) (sum_{w != y} a_w w + quad(z)), truncated at length two
        let subst_lin: Vec<(usize, Rational)> =
            dz.linear.iter().filter(|(w, _)| **w != y).map(|(w, c)| (*w, -(c / &a))).collect();
        let subst_quad: Vec<((usize, usize), Rational)> =
            dz.quadratic.iter().filter(|((p, r), _)| *p != y && *r != y).map(|(k, c)| (*k, -(c / &a))).collect();
        let degrees = self.degrees.clone();
        for e in 0..self.differentials.len() {
            if !self.alive[e] || e == z || e == y {
                continue;
            }
            let old = std::mem::take(&mut self.differentials[e]);
            let mut new = QuadraticDifferential::default();
            for (w, c) in old.linear {
                if w == z {
                    continue;
                }
                if w == y {
                    for (v, s) in &subst_lin {
                        add_linear(&mut new.linear, *v, &c * s);
                    }
                    for ((p, r), s) in &subst_quad {
                        add_quadratic(&mut new.quadratic, &degrees, *p, *r, &c * s);
                    }
                } else {
                    add_linear(&mut new.linear, w, c);
                }
            }
            for ((p, r), c) in old.quadratic {
                if p == z || r == z {
                    continue;
                }
                let left: Vec<(usize, Rational)> =
                    if p == y { subst_lin.clone() } else { vec![(p, Rational::from_integer(1.into()))] };
                let right: Vec<(usize, Rational)> =
                    if r == y { subst_lin.clone() } else { vec![(r, Rational::from_integer(1.into()))] };
                for (u, s) in &left {
                    for (v, t) in &right {
                        add_quadratic(&mut new.quadratic, &degrees, *u, *v, &c * s * t);
                    }
                }
            }
            self.differentials[e] = new;
        }
        self.alive[z] = false;
        self.alive[y] = false;
        self.differentials[z] = QuadraticDifferential::default();
        self.differentials[y] = QuadraticDifferential::default();
    }
}

/// Weight-two minimal model of a resolution at the origin. Survivors in
/// degrees below the resolution's top degree are exact.
pub fn minimize_at_origin(res: &DgResolution) -> Result<MinimalModel> {
    let m = res.nvars();
    let origin = vec![Rational::zero(); m];
    let mut names = res.variables.clone();
    names.extend(res.names());
    let mut degrees = vec![0u32; m];
    degrees.extend(res.degrees());
    let n = degrees.len();
    let mut differentials = vec![QuadraticDifferential::default(); n];

    for (g, gen) in res.generators.iter().enumerate() {
        let qd = &mut differentials[m + g];
        for (mono, c) in gen.differential.terms() {
            match mono.factors() {
                [] => {
                    for (t, v) in c.terms() {
                        let ex = t.exps();
                        match t.degree() {
                            1 => add_linear(&mut qd.linear, ex.iter().position(|&e| e == 1).unwrap(), v.clone()),
                            2 => {
                                let vars: Vec<usize> = ex
                                    .iter()
                                    .enumerate()
                                    .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
                                    .collect();
                                add_quadratic(&mut qd.quadratic, &degrees, vars[0], vars[1], v.clone());
                            }
                            _ => {}
                        }
                    }
                }
                [(y, 1)] => {
                    add_linear(&mut qd.linear, m + y, evaluate(c, &origin)?);
                    for (t, v) in c.terms() {
                        if t.degree() == 1 {
                            let i = t.exps().iter().position(|&e| e == 1).unwrap();
                            add_quadratic(&mut qd.quadratic, &degrees, i, m + y, v.clone());
                        }
                    }
                }
                [(y, 2)] => add_quadratic(&mut qd.quadratic, &degrees, m + y, m + y, evaluate(c, &origin)?),
                [(y, 1), (z, 1)] => add_quadratic(&mut qd.quadratic, &degrees, m + y, m + z, evaluate(c, &origin)?),
                _ => {}
            }
        }
    }

    let mut model =
        MinimalModel { names, degrees, alive: vec![true; n], differentials, top_degree: res.verified_through + 1 };
    let mut order: Vec<usize> = (m..n).collect();
    order.sort_by_key(|&i| (model.degrees[i], i));
    for _ in 0..=n {
        let pivot = order.iter().copied().find(|&z| model.alive[z] && !model.differentials[z].linear.is_empty());
        let Some(z) = pivot else {
            return Ok(model);
        };
        let y = *model.differentials[z].linear.keys().next_back().unwrap();
        model.cancel(z, y);
    }
    Err(Error::Internal("minimal model reduction did not converge".into()))
}
