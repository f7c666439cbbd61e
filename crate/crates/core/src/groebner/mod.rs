//! Ideal and submodule computations: reduced Gröbner bases, normal forms,
//! syzygies, elimination and radical membership.

mod engine;

use std::cmp::Ordering;

use num_traits::One;

use engine::{SVector, Term, TermOrder};

use crate::poly::{grevlex_cmp, Monomial, Polynomial, Rational};

pub use crate::poly::ModuleElement;

/// Monomial orders; all are total and multiplicative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    #[default]
    GRevLex,
    Lex,
    /// Block order: grevlex on the first `block` variables, ties broken by
    /// grevlex on the rest. Eliminates the first `block` variables.
    Elimination {
        block: usize,
    },
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match *self {
            MonomialOrder::GRevLex => grevlex_cmp(a, b),
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Elimination { block } => {
                grevlex_cmp(&a[..block], &b[..block]).then_with(|| grevlex_cmp(&a[block..], &b[block..]))
            }
        }
    }
}

fn poly_to_svector(f: &Polynomial, pos: usize, order: &TermOrder) -> Vec<Term> {
    let _ = order;
    f.terms().map(|(m, c)| Term { pos, mono: m.clone(), coeff: c.clone() }).collect()
}

fn element_to_svector(e: &ModuleElement, order: &TermOrder) -> SVector {
    let mut terms = Vec::new();
    for (pos, c) in e.components().iter().enumerate() {
        terms.extend(poly_to_svector(c, pos, order));
    }
    SVector::from_terms(terms, order)
}

fn svector_to_element(v: &SVector, rank: usize, nvars: usize) -> ModuleElement {
    let mut comps = vec![Polynomial::zero(nvars); rank];
    for t in &v.terms {
        comps[t.pos].add_term(t.mono.clone(), t.coeff.clone());
    }
    ModuleElement::new(comps)
}

fn svector_to_poly(v: &SVector, nvars: usize) -> Polynomial {
    Polynomial::from_terms(nvars, v.terms.iter().map(|t| (t.mono.clone(), t.coeff.clone())))
}

/// Reduced Gröbner basis of an ideal.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    pub generators: Vec<Polynomial>,
    pub order: MonomialOrder,
    pub reduced: bool,
    nvars: usize,
    internal: Vec<SVector>,
}

pub fn groebner_basis(generators: &[Polynomial], nvars: usize, order: MonomialOrder) -> GroebnerBasis {
    let to = TermOrder { mono: order };
    let gens: Vec<SVector> = generators
        .iter()
        .map(|g| {
            assert_eq!(g.nvars(), nvars, "generator ring mismatch");
            SVector::from_terms(poly_to_svector(g, 0, &to), &to)
        })
        .collect();
    let internal = engine::buchberger(gens, &to, true);
    GroebnerBasis {
        generators: internal.iter().map(|v| svector_to_poly(v, nvars)).collect(),
        order,
        reduced: true,
        nvars,
        internal,
    }
}

impl GroebnerBasis {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        let to = TermOrder { mono: self.order };
        let v = SVector::from_terms(poly_to_svector(f, 0, &to), &to);
        svector_to_poly(&engine::reduce(&v, &self.internal, &to), self.nvars)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.internal.len() == 1 && self.internal[0].terms.len() == 1 && self.internal[0].terms[0].mono.is_one()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.internal.is_empty()
    }

    /// Leading monomials under this basis' order.
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.internal.iter().map(|v| v.leading().unwrap().mono.clone()).collect()
    }

    /// Re-checks the Buchberger criterion on the stored basis.
    pub fn verify(&self) -> bool {
        engine::is_groebner(&self.internal, &TermOrder { mono: self.order })
    }
}

/// Reduced Gröbner basis of a submodule of `R^rank`, position-over-term.
#[derive(Clone, Debug)]
pub struct ModuleBasis {
    pub elements: Vec<ModuleElement>,
    pub rank: usize,
    pub order: MonomialOrder,
    nvars: usize,
    internal: Vec<SVector>,
}

pub fn module_groebner_basis(gens: &[ModuleElement], rank: usize, nvars: usize, order: MonomialOrder) -> ModuleBasis {
    let to = TermOrder { mono: order };
    let vs: Vec<SVector> = gens
        .iter()
        .map(|g| {
            assert_eq!(g.rank(), rank, "module rank mismatch");
            element_to_svector(g, &to)
        })
        .collect();
    let internal = engine::buchberger(vs, &to, rank == 1);
    ModuleBasis {
        elements: internal.iter().map(|v| svector_to_element(v, rank, nvars)).collect(),
        rank,
        order,
        nvars,
        internal,
    }
}

impl ModuleBasis {
    pub fn normal_form(&self, e: &ModuleElement) -> ModuleElement {
        let to = TermOrder { mono: self.order };
        let v = element_to_svector(e, &to);
        svector_to_element(&engine::reduce(&v, &self.internal, &to), self.rank, self.nvars)
    }

    pub fn contains(&self, e: &ModuleElement) -> bool {
        let to = TermOrder { mono: self.order };
        engine::reduce(&element_to_svector(e, &to), &self.internal, &to).is_zero()
    }

    pub fn len(&self) -> usize {
        self.internal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.internal.is_empty()
    }

    pub fn verify(&self) -> bool {
        engine::is_groebner(&self.internal, &TermOrder { mono: self.order })
    }
}

/// Generators of `{a : sum a_i * gens_i = 0}` for elements of `R^rank`.
///
/// Each `gens_i` is stacked over the unit vector `e_i` in `R^(rank + k)`;
/// under position-over-term the basis vectors with zero top block are
/// exactly a generating set of the syzygy module.
pub fn syzygies(gens: &[ModuleElement], rank: usize, nvars: usize) -> Vec<ModuleElement> {
    let k = gens.len();
    if k == 0 {
        return Vec::new();
    }
    let to = TermOrder { mono: MonomialOrder::GRevLex };
    let stacked: Vec<SVector> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut terms = Vec::new();
            for (pos, c) in g.components().iter().enumerate() {
                terms.extend(poly_to_svector(c, pos, &to));
            }
            terms.push(Term { pos: rank + i, mono: Monomial::one(nvars), coeff: Rational::one() });
            SVector::from_terms(terms, &to)
        })
        .collect();
    let basis = engine::buchberger(stacked, &to, false);
    let out: Vec<ModuleElement> = basis
        .iter()
        .filter(|v| v.leading().unwrap().pos >= rank)
        .map(|v| {
            let mut comps = vec![Polynomial::zero(nvars); k];
            for t in &v.terms {
                debug_assert!(t.pos >= rank);
                comps[t.pos - rank].add_term(t.mono.clone(), t.coeff.clone());
            }
            ModuleElement::new(comps)
        })
        .collect();
    out
}

/// Syzygies of a list of polynomials (rank-one case).
pub fn ideal_syzygies(gens: &[Polynomial], nvars: usize) -> Vec<ModuleElement> {
    let elems: Vec<ModuleElement> = gens.iter().map(|g| ModuleElement::new(vec![g.clone()])).collect();
    syzygies(&elems, 1, nvars)
}

/// Generators (a reduced grevlex basis) of `ideal ∩ Q[x_i : i ∉ block]`.
pub fn eliminate(gens: &[Polynomial], nvars: usize, block: &[usize]) -> Vec<Polynomial> {
    if block.is_empty() {
        return groebner_basis(gens, nvars, MonomialOrder::GRevLex).generators;
    }
    // permutation placing the block first, the rest in original order
    let mut perm: Vec<usize> = block.to_vec();
    perm.extend((0..nvars).filter(|i| !block.contains(i)));
    let mut to_new = vec![0; nvars];
    for (new, &old) in perm.iter().enumerate() {
        to_new[old] = new;
    }
    let moved: Vec<Polynomial> = gens.iter().map(|g| g.embed(nvars, &to_new)).collect();
    let gb = groebner_basis(&moved, nvars, MonomialOrder::Elimination { block: block.len() });
    let kept: Vec<Polynomial> = gb
        .generators
        .iter()
        .filter(|g| g.terms().all(|(m, _)| m.exps()[..block.len()].iter().all(|&e| e == 0)))
        .map(|g| g.embed(nvars, &perm))
        .collect();
    // sort the survivors into grevlex order
    groebner_basis(&kept, nvars, MonomialOrder::GRevLex).generators
}

/// Whether `f` lies in the radical of the ideal, via `1 ∈ I + (1 - z f)`.
pub fn radical_membership(f: &Polynomial, gens: &[Polynomial], nvars: usize) -> bool {
    let ext = nvars + 1;
    let map: Vec<usize> = (0..nvars).collect();
    let mut lifted: Vec<Polynomial> = gens.iter().map(|g| g.embed(ext, &map)).collect();
    let z = Polynomial::var(ext, nvars);
    let fz = &z * &f.embed(ext, &map);
    lifted.push(&Polynomial::one(ext) - &fz);
    groebner_basis(&lifted, ext, MonomialOrder::GRevLex).is_unit()
}
