use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use super::algebra::{d_monomial, differential, monomials_of_degree, DgElement, DgMonomial};
use crate::error::{Error, Result};
use crate::groebner::{module_groebner_basis, syzygies, MonomialOrder};
use crate::poly::{translate_to_origin, ModuleElement, PointedModel, Polynomial};

pub const DEFAULT_GENERATOR_CAP: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgGenerator {
    pub name: String,
    pub degree: u32,
    pub differential: DgElement,
}

/// Limits on resolution size and wall-clock time.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub max_generators: usize,
    pub deadline: Option<Instant>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_generators: DEFAULT_GENERATOR_CAP, deadline: None }
    }
}

impl Budget {
    pub fn with_seconds(max_generators: usize, seconds: Option<f64>) -> Self {
        Budget { max_generators, deadline: seconds.map(|s| Instant::now() + Duration::from_secs_f64(s)) }
    }

    pub fn check_time(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::ResourceLimit("time budget exhausted".into())),
            _ => Ok(()),
        }
    }
}

/// A semi-free resolution `B -> R/I` with `R = Q[x_1..x_m]`. Adjoined
/// generators (degree ≥ 1) are indexed from 0 and stored in degree order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgResolution {
    pub variables: Vec<String>,
    pub ideal: Vec<Polynomial>,
    pub generators: Vec<DgGenerator>,
    pub verified_through: u32,
}

impl DgResolution {
    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.generators.iter().map(|g| g.degree).collect()
    }

    pub fn differentials(&self) -> Vec<DgElement> {
        self.generators.iter().map(|g| g.differential.clone()).collect()
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn max_degree(&self) -> u32 {
        self.generators.iter().map(|g| g.degree).max().unwrap_or(0)
    }

    /// Generator counts for degrees `0..=n`, degree 0 being the variables.
    pub fn counts(&self, n: u32) -> Vec<usize> {
        let mut out = vec![0; n as usize + 1];
        out[0] = self.nvars();
        for g in &self.generators {
            if g.degree <= n {
                out[g.degree as usize] += 1;
            }
        }
        out
    }

    pub fn d(&self, x: &DgElement) -> DgElement {
        differential(x, &self.degrees(), &self.differentials())
    }

    /// `d(d(g)) = 0` for every generator.
    pub fn check_d_squared(&self) -> bool {
        let degs = self.degrees();
        let diffs = self.differentials();
        self.generators.iter().all(|g| differential(&g.differential, &degs, &diffs).is_zero())
    }

    /// Lines `name : degree : differential`.
    pub fn dump(&self) -> String {
        let names = self.names();
        let mut out = String::new();
        for g in &self.generators {
            out.push_str(&format!(
                "{} : {} : {}\n",
                g.name,
                g.degree,
                g.differential.to_string_with(&self.variables, &names)
            ));
        }
        out
    }

    fn basis(&self, j: u32) -> Vec<DgMonomial> {
        monomials_of_degree(&self.degrees(), j)
    }

    /// Columns of `d : B_j -> B_{j-1}` as module elements, with both bases.
    fn boundary_columns(&self, j: u32) -> (Vec<DgMonomial>, Vec<DgMonomial>, Vec<ModuleElement>) {
        let degs = self.degrees();
        let diffs = self.differentials();
        let src = self.basis(j);
        let tgt = self.basis(j - 1);
        let index: BTreeMap<DgMonomial, usize> = tgt.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let cols = src.iter().map(|m| d_monomial(m, &degs, &diffs, self.nvars()).to_module(&index)).collect();
        (src, tgt, cols)
    }

    /// Cycle generators in degree `j` (as elements) and boundary generators
    /// (images of degree `j+1` monomials), both in the basis of `B_j`.
    fn cycles_and_boundaries(&self, j: u32) -> (Vec<DgMonomial>, Vec<ModuleElement>, Vec<ModuleElement>) {
        let m = self.nvars();
        let (src, tgt, cols) = self.boundary_columns(j);
        let cycles = if src.is_empty() { Vec::new() } else { syzygies(&cols, tgt.len(), m) };
        let (_, _, bcols) = self.boundary_columns(j + 1);
        (src, cycles, bcols)
    }

    /// Every degree-`j` cycle of a syzygy generating set is a boundary.
    pub fn certify_acyclic(&self, j: u32) -> bool {
        if j == 0 {
            return true;
        }
        let (src, cycles, bounds) = self.cycles_and_boundaries(j);
        if cycles.is_empty() {
            return true;
        }
        let gb = module_groebner_basis(&bounds, src.len(), self.nvars(), MonomialOrder::GRevLex);
        cycles.iter().all(|c| gb.contains(c))
    }
}

fn generator_name(degree: u32, k: usize) -> String {
    match degree {
        1 => format!("e{k}"),
        d => format!("z{d}_{k}"),
    }
}

/// Koszul dg-algebra on the generators of the (translated) model.
pub fn koszul_stage(model: &PointedModel) -> Result<DgResolution> {
    let model = translate_to_origin(model)?;
    let generators = model
        .generators
        .iter()
        .enumerate()
        .map(|(i, f)| DgGenerator {
            name: generator_name(1, i + 1),
            degree: 1,
            differential: DgElement::scalar(f.clone()),
        })
        .collect();
    Ok(DgResolution {
        variables: model.variables.clone(),
        ideal: model.generators.clone(),
        generators,
        verified_through: 0,
    })
}

fn cycle_key(c: &ModuleElement) -> (u32, usize, usize) {
    let deg = c.components().iter().filter_map(|p| p.total_degree()).max().unwrap_or(0);
    let nonzero = c.components().iter().filter(|p| !p.is_zero()).count();
    let terms = c.components().iter().map(|p| p.len()).sum();
    (deg, nonzero, terms)
}

/// Adjoins degree-`j+1` generators killing a generating set of `H_j`.
pub fn kill_cycles(res: &DgResolution, j: u32) -> Result<DgResolution> {
    kill_cycles_within(res, j, &Budget::default())
}

pub fn kill_cycles_within(res: &DgResolution, j: u32, budget: &Budget) -> Result<DgResolution> {
    if j == 0 || res.verified_through + 1 < j {
        return Err(Error::InvalidInput(format!(
            "cannot kill cycles in degree {j}: resolution verified through {}",
            res.verified_through
        )));
    }
    budget.check_time()?;
    let m = res.nvars();
    let (src, mut cycles, bounds) = res.cycles_and_boundaries(j);
    let rank = src.len();
    cycles.sort_by_key(cycle_key);

    let mut kept: Vec<ModuleElement> = Vec::new();
    let mut span = bounds.clone();
    let mut gb = module_groebner_basis(&span, rank, m, MonomialOrder::GRevLex);
    for c in &cycles {
        budget.check_time()?;
        if !gb.contains(c) {
            kept.push(c.clone());
            span.push(c.clone());
            gb = module_groebner_basis(&span, rank, m, MonomialOrder::GRevLex);
        }
    }
    // backward pass: drop generators made redundant by later ones
    let mut k = kept.len();
    while k > 0 {
        k -= 1;
        let mut rest = bounds.clone();
        rest.extend(kept.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, c)| c.clone()));
        if module_groebner_basis(&rest, rank, m, MonomialOrder::GRevLex).contains(&kept[k]) {
            kept.remove(k);
        }
    }

    let mut out = res.clone();
    let existing = res.generators.iter().filter(|g| g.degree == j + 1).count();
    for (i, c) in kept.iter().enumerate() {
        out.generators.push(DgGenerator {
            name: generator_name(j + 1, existing + i + 1),
            degree: j + 1,
            differential: DgElement::from_module(c, &src, m),
        });
    }
    if out.generators.len() > budget.max_generators {
        return Err(Error::ResourceLimit(format!("resolution needs more than {} generators", budget.max_generators)));
    }
    if !out.check_d_squared() {
        return Err(Error::Internal(format!("d^2 != 0 after killing degree {j} cycles")));
    }
    if !out.certify_acyclic(j) {
        return Err(Error::Internal(format!("acyclicity certificate failed in degree {j}")));
    }
    out.verified_through = j;
    Ok(out)
}

/// Koszul stage, then cycle killing in degrees `1..n`.
pub fn resolve_through(model: &PointedModel, n: u32) -> Result<DgResolution> {
    resolve_through_within(model, n, &Budget::default())
}

pub fn resolve_through_within(model: &PointedModel, n: u32, budget: &Budget) -> Result<DgResolution> {
    if n == 0 {
        return Err(Error::InvalidInput("resolution depth must be at least 1".into()));
    }
    let mut res = koszul_stage(model)?;
    if res.generators.len() > budget.max_generators {
        return Err(Error::ResourceLimit(format!("resolution needs more than {} generators", budget.max_generators)));
    }
    for j in 1..n {
        res = kill_cycles_within(&res, j, budget)?;
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(vars: &[&str], gens: &[&str]) -> PointedModel {
        PointedModel::at_origin(vars, gens).unwrap()
    }

    #[test]
    fn koszul_examples() {
        let r = koszul_stage(&model(&["x", "y"], &["x*y"])).unwrap();
        assert_eq!(r.dump(), "e1 : 1 : (x*y)\n");
        let r = koszul_stage(&model(&["x", "y"], &[])).unwrap();
        assert!(r.generators.is_empty());
        let r = koszul_stage(&model(&["x", "y"], &["x^2", "x*y", "y^2"])).unwrap();
        assert_eq!(r.counts(1), vec![2, 3]);
    }

    #[test]
    fn node_needs_no_new_generators() {
        let r = kill_cycles(&koszul_stage(&model(&["x", "y"], &["x*y"])).unwrap(), 1).unwrap();
        assert_eq!(r.generators.len(), 1);
        let r = resolve_through(&model(&["x", "y"], &["x*y"]), 4).unwrap();
        assert_eq!(r.counts(4), vec![2, 1, 0, 0, 0]);
        assert_eq!(r.verified_through, 3);
    }

    #[test]
    fn fat_point_cycles() {
        let m = model(&["x", "y"], &["x^2", "x*y", "y^2"]);
        let r = kill_cycles(&koszul_stage(&m).unwrap(), 1).unwrap();
        let new: Vec<_> = r.generators.iter().filter(|g| g.degree == 2).collect();
        assert_eq!(new.len(), 2);
        let names = r.names();
        let mut diffs: Vec<String> = new.iter().map(|g| g.differential.to_string_with(&r.variables, &names)).collect();
        diffs.sort();
        assert_eq!(diffs, vec!["(y)*e1 + (-x)*e2", "(y)*e2 + (-x)*e3"]);
        let r = resolve_through(&m, 3).unwrap();
        assert_eq!(r.counts(3)[..3], [2, 3, 2]);
        assert!(r.check_d_squared());
    }

    #[test]
    fn regular_sequence_is_acyclic() {
        let r = resolve_through(&model(&["x", "y", "z"], &["x", "y"]), 4).unwrap();
        assert_eq!(r.counts(4), vec![3, 2, 0, 0, 0]);
    }

    #[test]
    fn generator_cap_is_enforced() {
        let m = model(&["x", "y"], &["x^2", "x*y", "y^2"]);
        let budget = Budget { max_generators: 4, deadline: None };
        assert!(matches!(resolve_through_within(&m, 3, &budget), Err(Error::ResourceLimit(_))));
    }
}
