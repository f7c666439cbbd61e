use num_traits::Zero;

use super::resolution::DgResolution;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{linear_row, Rational};

/// The complex `L ⊗ k(p)` truncated at degree `n`: `spaces[j]` names the
/// basis of degree `j` (differentials `dx_i` in degree 0), and
/// `boundaries[j - 1]` is the matrix of `V_j -> V_{j-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearizedCotangentFiber {
    pub spaces: Vec<Vec<String>>,
    pub boundaries: Vec<Matrix>,
}

impl LinearizedCotangentFiber {
    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(Vec::len).collect()
    }

    pub fn top_degree(&self) -> usize {
        self.spaces.len() - 1
    }

    fn rank_of(&self, j: usize) -> usize {
        if j == 0 || j > self.boundaries.len() {
            0
        } else {
            self.boundaries[j - 1].rank()
        }
    }

    /// Homology dimensions in degrees `0..top`; entry `k` is `dim T^{k+1}`.
    pub fn homology_dims(&self) -> Vec<usize> {
        (0..self.top_degree()).map(|k| self.spaces[k].len() - self.rank_of(k) - self.rank_of(k + 1)).collect()
    }

    pub fn composes_to_zero(&self) -> bool {
        self.boundaries.windows(2).all(|w| w[0].mul(&w[1]).is_zero())
    }
}

/// Linear part at the origin of every generator differential through degree `n`.
pub fn cotangent_fiber(res: &DgResolution, n: u32) -> Result<LinearizedCotangentFiber> {
    if n == 0 || res.verified_through + 1 < n {
        return Err(Error::InvalidInput(format!(
            "cotangent fiber through degree {n} needs a resolution verified through {}",
            n.saturating_sub(1)
        )));
    }
    let m = res.nvars();
    let zero_point = vec![Rational::zero(); m];
    let mut spaces: Vec<Vec<String>> = vec![res.variables.iter().map(|v| format!("d{v}")).collect()];
    // position of each generator inside its degree's basis
    let mut slot = vec![0usize; res.generators.len()];
    for d in 1..=n {
        let mut names = Vec::new();
        for (i, g) in res.generators.iter().enumerate() {
            if g.degree == d {
                slot[i] = names.len();
                names.push(g.name.clone());
            }
        }
        spaces.push(names);
    }
    let mut boundaries = Vec::new();
    for d in 1..=n {
        let mut mat = Matrix::zeros(spaces[d as usize - 1].len(), spaces[d as usize].len());
        for (i, g) in res.generators.iter().enumerate() {
            if g.degree != d {
                continue;
            }
            for (mono, c) in g.differential.terms() {
                if mono.is_one() {
                    for (r, v) in linear_row(c).into_iter().enumerate() {
                        mat.set(r, slot[i], v);
                    }
                } else if let [(y, 1)] = mono.factors() {
                    let v = crate::poly::evaluate(c, &zero_point)?;
                    mat.set(slot[*y], slot[i], v);
                }
            }
        }
        boundaries.push(mat);
    }
    let fiber = LinearizedCotangentFiber { spaces, boundaries };
    if !fiber.composes_to_zero() {
        return Err(Error::Internal("linearized boundaries do not compose to zero".into()));
    }
    Ok(fiber)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::resolve_through;
    use crate::poly::{q, PointedModel};

    fn fiber(vars: &[&str], gens: &[&str], n: u32) -> LinearizedCotangentFiber {
        let r = resolve_through(&PointedModel::at_origin(vars, gens).unwrap(), n).unwrap();
        cotangent_fiber(&r, n).unwrap()
    }

    #[test]
    fn node_fiber_is_zero_map() {
        let f = fiber(&["x", "y"], &["x*y"], 1);
        assert_eq!(f.dims(), vec![2, 1]);
        assert!(f.boundaries[0].is_zero());
    }

    #[test]
    fn parabola_fiber_map() {
        let f = fiber(&["x", "y"], &["y - x^2"], 1);
        assert_eq!(f.boundaries[0].column(0), vec![q(0), q(1)]);
        assert_eq!(f.boundaries[0].rank(), 1);
    }

    #[test]
    fn smooth_line() {
        let f = fiber(&["x"], &[], 1);
        assert_eq!(f.dims(), vec![1, 0]);
        assert_eq!(f.homology_dims(), vec![1]);
    }

    #[test]
    fn fat_point_homology() {
        let f = fiber(&["x", "y"], &["x^2", "x*y", "y^2"], 4);
        assert_eq!(f.homology_dims(), vec![2, 3, 2, 3]);
    }
}
