//! Higher tangent spaces `T^i`, singularity classification and the graded
//! Lie bracket read off a minimal model.

use std::fmt;

use num_traits::{One, Zero};

use crate::dg::{cotangent_fiber, minimize_at_origin, resolve_through_within, Budget, MinimalModel};
use crate::error::{Error, Result};
use crate::groebner::{eliminate, groebner_basis, ideal_syzygies, MonomialOrder};
use crate::linalg::{homology_basis, Matrix};
use crate::poly::{jacobian_at, translate_to_origin, Monomial, PointedModel, Polynomial, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentTable {
    /// `dims[i - 1] = dim T^i` for `i = 1..=window`.
    pub dims: Vec<usize>,
    /// Basis of `T^i` as vectors in the degree `i - 1` space of the fiber.
    pub bases: Vec<Vec<Vec<Rational>>>,
    /// Names of the coordinates those vectors live in.
    pub coordinates: Vec<Vec<String>>,
    pub window: u32,
    /// Generator counts of the resolution by degree `0..=window`.
    pub resolution_counts: Vec<usize>,
}

impl TangentTable {
    /// `dim T^i`, or `None` outside the window.
    pub fn dim(&self, i: usize) -> Option<usize> {
        if i == 0 {
            return None;
        }
        self.dims.get(i - 1).copied()
    }
}

pub fn tangent_dims(model: &PointedModel, n: u32) -> Result<TangentTable> {
    tangent_dims_within(model, n, &Budget::default())
}

pub fn tangent_dims_within(model: &PointedModel, n: u32, budget: &Budget) -> Result<TangentTable> {
    let res = resolve_through_within(model, n, budget)?;
    let fiber = cotangent_fiber(&res, n)?;
    let dims_all = fiber.dims();
    let mut bases = Vec::new();
    for k in 0..n as usize {
        let incoming = &fiber.boundaries[k];
        let outgoing = if k == 0 { Matrix::zeros(0, dims_all[0]) } else { fiber.boundaries[k - 1].clone() };
        bases.push(homology_basis(incoming, &outgoing, dims_all[k]));
    }
    let dims = fiber.homology_dims();
    debug_assert!(bases.iter().zip(&dims).all(|(b, d)| b.len() == *d));
    Ok(TangentTable {
        dims,
        bases,
        coordinates: fiber.spaces[..n as usize].to_vec(),
        window: n,
        resolution_counts: res.counts(n),
    })
}

/// `m - rank J(p)`.
pub fn zariski_tangent(model: &PointedModel) -> usize {
    model.nvars() - jacobian_at(model).rank()
}

/// Krull dimension of the local ring at the point, via the tangent cone.
pub fn local_dimension(model: &PointedModel) -> Result<usize> {
    let model = translate_to_origin(model)?;
    let m = model.nvars();
    let gens: Vec<&Polynomial> = model.generators.iter().filter(|g| !g.is_zero()).collect();
    if gens.is_empty() {
        return Ok(m);
    }
    let cone = tangent_cone(&gens, m);
    let gb = groebner_basis(&cone, m, MonomialOrder::GRevLex);
    if gb.is_unit() {
        return Err(Error::Internal("tangent cone ideal is the unit ideal".into()));
    }
    Ok(dimension_from_leading(&gb.leading_monomials(), m))
}

/// Leading-form ideal at the origin: saturate `I(s x)` by `s`, then set `s = 0`.
fn tangent_cone(gens: &[&Polynomial], m: usize) -> Vec<Polynomial> {
    // ring Q[x_1..x_m, s, w]
    let total = m + 2;
    let s = Polynomial::var(total, m);
    let w = Polynomial::var(total, m + 1);
    let map: Vec<usize> = (0..m).collect();
    let mut images: Vec<Polynomial> = (0..m).map(|i| &Polynomial::var(total, i) * &s).collect();
    images.push(s.clone());
    images.push(w.clone());
    let mut ideal: Vec<Polynomial> = gens.iter().map(|g| g.embed(total, &map).substitute(&images)).collect();
    ideal.push(&Polynomial::one(total) - &(&s * &w));
    eliminate(&ideal, total, &[m + 1])
        .iter()
        .map(|g| {
            let terms = g
                .terms()
                .filter(|(mono, _)| mono.exps()[m] == 0 && mono.exps()[m + 1] == 0)
                .map(|(mono, c)| (Monomial::new(mono.exps()[..m].to_vec()), c.clone()));
            Polynomial::from_terms(m, terms)
        })
        .filter(|h| !h.is_zero())
        .collect()
}

/// Size of a largest set of variables containing no leading monomial's support.
fn dimension_from_leading(leading: &[Monomial], m: usize) -> usize {
    let supports: Vec<u64> = leading
        .iter()
        .map(|l| l.exps().iter().enumerate().filter(|(_, &e)| e > 0).fold(0u64, |acc, (i, _)| acc | (1 << i)))
        .collect();
    let mut best = 0;
    for set in 0u64..(1u64 << m) {
        let size = set.count_ones() as usize;
        if size > best && supports.iter().all(|&s| s & !set != 0) {
            best = size;
        }
    }
    best
}

/// Minimal number of local generators of the ideal at the point.
pub fn local_generator_count(model: &PointedModel) -> Result<usize> {
    let model = translate_to_origin(model)?;
    let n = model.ngens();
    let m = model.nvars();
    if n == 0 {
        return Ok(0);
    }
    let origin = vec![Rational::zero(); m];
    let rows: Vec<Vec<Rational>> = ideal_syzygies(&model.generators, m).iter().map(|s| s.evaluate(&origin)).collect();
    let rank = if rows.is_empty() { 0 } else { Matrix::from_rows(rows, n).rank() };
    Ok(n - rank)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SingularityKind {
    Smooth,
    Lci,
    General,
}

impl fmt::Display for SingularityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SingularityKind::Smooth => "smooth",
            SingularityKind::Lci => "lci",
            SingularityKind::General => "general",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityClass {
    pub kind: SingularityKind,
    pub certificate: String,
}

pub fn classify(model: &PointedModel, n: u32) -> Result<SingularityClass> {
    let table = tangent_dims(model, n)?;
    classify_with(model, &table)
}

/// Classification given an already computed table (window at least 3).
pub fn classify_with(model: &PointedModel, table: &TangentTable) -> Result<SingularityClass> {
    if table.window < 3 {
        return Err(Error::InvalidInput("classification needs a window of at least 3".into()));
    }
    let t2 = table.dims[1];
    if t2 == 0 {
        return Ok(SingularityClass { kind: SingularityKind::Smooth, certificate: "T^2 = 0".into() });
    }
    let mu = local_generator_count(model)?;
    let codim = model.nvars() - local_dimension(model)?;
    let higher: Vec<(usize, usize)> = (3..=table.window as usize).map(|i| (i, table.dims[i - 1])).collect();
    if mu == codim {
        if let Some((i, d)) = higher.iter().find(|(_, d)| *d != 0) {
            return Err(Error::Internal(format!("μ = codim = {codim} but T^{i} = {d}")));
        }
        Ok(SingularityClass { kind: SingularityKind::Lci, certificate: format!("μ = {mu} = codim") })
    } else {
        let Some((i, d)) = higher.iter().find(|(_, d)| *d != 0) else {
            return Err(Error::Internal(format!(
                "μ = {mu} ≠ codim = {codim} but T^i = 0 for 3 ≤ i ≤ {}",
                table.window
            )));
        };
        Ok(SingularityClass {
            kind: SingularityKind::General,
            certificate: format!("T^{i} = {d} ≠ 0 and μ = {mu} > codim = {codim}"),
        })
    }
}

/// Graded Lie algebra on `T^1..T^window`, with `T^i` spanned by the
/// minimal-model symbols of degree `i - 1`.
///
/// `[u_a, u_b] = (-1)^{|a|} sum_w C^w_{ab} u_w`, where `|a|` is the
/// homological degree and `C^w_{ab}` the symmetrized quadratic coefficient
/// of `d(v_w)`. This satisfies `[a, b] = -(-1)^{ij} [b, a]` on `T^i x T^j`.
#[derive(Clone, Debug)]
pub struct TangentLie {
    pub model: MinimalModel,
    pub window: u32,
}

/// Structure constants `table[a][b][w]` of `T^i x T^j -> T^{i+j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketTable {
    pub i: u32,
    pub j: u32,
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub target: Vec<String>,
    pub constants: Vec<Vec<Vec<Rational>>>,
}

impl TangentLie {
    pub fn new(model: &PointedModel, n: u32) -> Result<Self> {
        Self::within(model, n, &Budget::default())
    }

    pub fn within(model: &PointedModel, n: u32, budget: &Budget) -> Result<Self> {
        let res = resolve_through_within(model, n, budget)?;
        let mm = minimize_at_origin(&res)?;
        if !mm.is_minimal() {
            return Err(Error::Internal("minimal model has a nonzero linear differential".into()));
        }
        Ok(TangentLie { model: mm, window: n })
    }

    /// Symbol indices spanning `T^i`.
    pub fn basis(&self, i: u32) -> Vec<usize> {
        if i == 0 || i > self.window {
            return Vec::new();
        }
        self.model.alive_of_degree(i - 1)
    }

    pub fn dims(&self) -> Vec<usize> {
        (1..=self.window).map(|i| self.basis(i).len()).collect()
    }

    pub fn bracket_table(&self, i: u32, j: u32) -> Result<BracketTable> {
        if i == 0 || j == 0 || i + j > self.window {
            return Err(Error::InvalidInput(format!("bracket T^{i} x T^{j} is outside the window {}", self.window)));
        }
        let (bi, bj, bt) = (self.basis(i), self.basis(j), self.basis(i + j));
        let sign = if (i - 1) % 2 == 1 { -Rational::one() } else { Rational::one() };
        let constants = bi
            .iter()
            .map(|&a| {
                bj.iter()
                    .map(|&b| bt.iter().map(|&w| &sign * self.model.structure_constant(w, a, b)).collect())
                    .collect()
            })
            .collect();
        let names = |b: &[usize]| b.iter().map(|&k| self.model.names[k].clone()).collect();
        Ok(BracketTable { i, j, left: names(&bi), right: names(&bj), target: names(&bt), constants })
    }

    /// Bracket of coordinate vectors `u ∈ T^i`, `v ∈ T^j`.
    pub fn bracket(&self, i: u32, u: &[Rational], j: u32, v: &[Rational]) -> Result<Vec<Rational>> {
        let t = self.bracket_table(i, j)?;
        let mut out = vec![Rational::zero(); t.target.len()];
        for (a, ua) in u.iter().enumerate() {
            if ua.is_zero() {
                continue;
            }
            for (b, vb) in v.iter().enumerate() {
                if vb.is_zero() {
                    continue;
                }
                for (w, c) in t.constants[a][b].iter().enumerate() {
                    out[w] += ua * vb * c;
                }
            }
        }
        Ok(out)
    }

    /// `[a, b] + (-1)^{ij} [b, a] = 0` on all basis pairs with `i + j ≤ window`.
    pub fn check_antisymmetry(&self) -> Result<bool> {
        for i in 1..self.window {
            for j in 1..=self.window - i {
                let a = self.bracket_table(i, j)?;
                let b = self.bracket_table(j, i)?;
                let sign = if (i * j) % 2 == 1 { -Rational::one() } else { Rational::one() };
                for x in 0..a.left.len() {
                    for y in 0..a.right.len() {
                        for w in 0..a.target.len() {
                            if a.constants[x][y][w] != -(&sign * &b.constants[y][x][w]) {
                                return Ok(false);
                            }
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// Graded Jacobi `(-1)^{ik}[a,[b,c]] + (-1)^{ji}[b,[c,a]] + (-1)^{kj}[c,[a,b]] = 0`
    /// on basis triples with `i + j + k ≤ window`.
    pub fn check_jacobi(&self) -> Result<bool> {
        let unit = |n: usize, k: usize| -> Vec<Rational> {
            (0..n).map(|t| if t == k { Rational::one() } else { Rational::zero() }).collect()
        };
        let sgn = |e: u32| if e % 2 == 1 { -Rational::one() } else { Rational::one() };
        let w = self.window;
        for i in 1..=w {
            for j in 1..=w {
                for k in 1..=w {
                    if i + j + k > w {
                        continue;
                    }
                    let (ni, nj, nk) = (self.basis(i).len(), self.basis(j).len(), self.basis(k).len());
                    for a in 0..ni {
                        for b in 0..nj {
                            for c in 0..nk {
                                let (ua, ub, uc) = (unit(ni, a), unit(nj, b), unit(nk, c));
                                let t1 = self.bracket(i, &ua, j + k, &self.bracket(j, &ub, k, &uc)?)?;
                                let t2 = self.bracket(j, &ub, k + i, &self.bracket(k, &uc, i, &ua)?)?;
                                let t3 = self.bracket(k, &uc, i + j, &self.bracket(i, &ua, j, &ub)?)?;
                                let (s1, s2, s3) = (sgn(i * k), sgn(j * i), sgn(k * j));
                                let ok = t1
                                    .iter()
                                    .zip(&t2)
                                    .zip(&t3)
                                    .all(|((x, y), z)| (&s1 * x + &s2 * y + &s3 * z).is_zero());
                                if !ok {
                                    return Ok(false);
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Bracket `T^i x T^j -> T^{i+j}` for a model, computed with a window of `n`.
pub fn lie_bracket(model: &PointedModel, i: u32, j: u32, n: u32) -> Result<BracketTable> {
    TangentLie::new(model, n)?.bracket_table(i, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q;

    fn model(vars: &[&str], gens: &[&str]) -> PointedModel {
        PointedModel::at_origin(vars, gens).unwrap()
    }

    #[test]
    fn dims_examples() {
        let xy = ["x", "y"];
        assert_eq!(tangent_dims(&model(&xy, &["y - x^2"]), 4).unwrap().dims, vec![1, 0, 0, 0]);
        assert_eq!(tangent_dims(&model(&xy, &["x*y"]), 4).unwrap().dims, vec![2, 1, 0, 0]);
        assert_eq!(tangent_dims(&model(&xy, &["x^2", "x*y", "y^2"]), 4).unwrap().dims, vec![2, 3, 2, 3]);
        assert_eq!(tangent_dims(&model(&xy, &["y^2 - x^3"]), 4).unwrap().dims, vec![2, 1, 0, 0]);
    }

    #[test]
    fn zariski_examples() {
        assert_eq!(zariski_tangent(&model(&["x", "y"], &["x*y"])), 2);
        assert_eq!(zariski_tangent(&model(&["x", "y"], &["y - x^2"])), 1);
        assert_eq!(zariski_tangent(&model(&["x", "y", "z"], &[])), 3);
    }

    #[test]
    fn local_dimension_examples() {
        assert_eq!(local_dimension(&model(&["x", "y"], &["x*y"])).unwrap(), 1);
        assert_eq!(local_dimension(&model(&["x", "y"], &["x^2", "x*y", "y^2"])).unwrap(), 0);
        assert_eq!(local_dimension(&model(&["x", "y", "z"], &[])).unwrap(), 3);
        assert_eq!(local_dimension(&model(&["x", "y", "z"], &["x*y", "y*z", "x*z"])).unwrap(), 1);
        // the component x = 1 does not pass through the origin
        assert_eq!(local_dimension(&model(&["x", "y"], &["x*(x - 1)", "y*(x - 1)"])).unwrap(), 0);
    }

    #[test]
    fn classify_examples() {
        let xy = ["x", "y"];
        let c = classify(&model(&xy, &["y - x^2"]), 3).unwrap();
        assert_eq!(c.kind, SingularityKind::Smooth);
        let c = classify(&model(&xy, &["x*y"]), 3).unwrap();
        assert_eq!(c.kind, SingularityKind::Lci);
        assert_eq!(c.certificate, "μ = 1 = codim");
        let c = classify(&model(&xy, &["x^2", "x*y", "y^2"]), 3).unwrap();
        assert_eq!(c.kind, SingularityKind::General);
        assert_eq!(c.certificate, "T^3 = 2 ≠ 0 and μ = 3 > codim = 2");
    }

    #[test]
    fn hessian_brackets() {
        let t = lie_bracket(&model(&["x", "y"], &["x*y"]), 1, 1, 2).unwrap();
        assert_eq!(t.constants[0][1], vec![q(1)]);
        assert_eq!(t.constants[1][0], vec![q(1)]);
        assert_eq!(t.constants[0][0], vec![q(0)]);
        let t = lie_bracket(&model(&["x", "y"], &["x^2 + y^3"]), 1, 1, 2).unwrap();
        assert_eq!(t.constants[0][0], vec![q(2)]);
        assert_eq!(t.constants[1][1], vec![q(0)]);
        let t = lie_bracket(&model(&["x", "y"], &["y - x^2"]), 1, 1, 2).unwrap();
        assert!(t.target.is_empty());
    }

    #[test]
    fn bracket_axioms_on_examples() {
        for gens in [vec!["x^2", "x*y", "y^2"], vec!["x*y"], vec!["x*y", "y*z", "x*z"]] {
            let vars: &[&str] = if gens.len() == 3 && gens[1] == "y*z" { &["x", "y", "z"] } else { &["x", "y"] };
            let lie = TangentLie::new(&model(vars, &gens), 4).unwrap();
            assert!(lie.check_antisymmetry().unwrap(), "{gens:?}");
            assert!(lie.check_jacobi().unwrap(), "{gens:?}");
        }
    }
}
