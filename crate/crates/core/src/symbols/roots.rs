//! Polynomial roots from companion-matrix eigenvalues, with multiplicity
//! recovery by clustering.

use nalgebra::{DMatrix, Schur};

use super::CoefficientSeries;
use crate::error::{Error, Result};
use crate::C64;

/// Roots closer than this are treated as one multiple root. A root of
/// multiplicity m is perturbed by roughly eps^(1/m) in the eigenvalues, so
/// this comfortably covers m ≤ 3.
pub const DEFAULT_CLUSTER_RADIUS: f64 = 1e-4;

/// A root together with the number of eigenvalues merged into it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClusteredRoot {
    pub value: C64,
    pub multiplicity: u32,
}

/// All roots of `p`, repeated according to multiplicity.
///
/// Fails if the Schur iteration does not converge; the error carries the
/// residual of the best available eigenvalue estimate.
pub fn polynomial_roots(p: &CoefficientSeries) -> Result<Vec<C64>> {
    let Some(deg) = p.degree() else {
        return Err(Error::InvalidSymbol("roots of the zero polynomial".into()));
    };
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = p.coeff(deg);
    let mut companion = DMatrix::<C64>::zeros(deg, deg);
    for i in 1..deg {
        companion[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..deg {
        companion[(i, deg - 1)] = -p.coeff(i) / lead;
    }
    let schur = Schur::try_new(companion.clone(), f64::EPSILON, 10_000).ok_or_else(|| {
        Error::RootFinding {
            residual: relative_residual(p, &companion.diagonal().iter().copied().collect::<Vec<_>>()),
        }
    })?;
    let (_, t) = schur.unpack();
    let roots: Vec<C64> = (0..deg).map(|i| t[(i, i)]).collect();
    let residual = relative_residual(p, &roots);
    if !residual.is_finite() || residual > 1e-6 {
        return Err(Error::RootFinding { residual });
    }
    Ok(roots)
}

/// `max |p(r)| / Σ|cₖ||r|ᵏ` over the given points.
pub fn relative_residual(p: &CoefficientSeries, roots: &[C64]) -> f64 {
    roots
        .iter()
        .map(|&r| {
            let scale: f64 = p
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| c.norm() * r.norm().powi(k as i32))
                .sum();
            p.eval(r).norm() / scale.max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max)
}

/// Single-linkage clustering of roots within `radius`; each cluster is
/// replaced by its centroid, which is far more accurate than the individual
/// perturbed members of a multiple root.
pub fn cluster_roots(roots: &[C64], radius: f64) -> Vec<ClusteredRoot> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut j = i;
        while parent[j] != r {
            let next = parent[j];
            parent[j] = r;
            j = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (roots[i] - roots[j]).norm() <= radius {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj] = ri;
                }
            }
        }
    }
    let mut clusters: Vec<(usize, C64, u32)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match clusters.iter_mut().find(|(root, _, _)| *root == r) {
            Some(entry) => {
                entry.1 += roots[i];
                entry.2 += 1;
            }
            None => clusters.push((r, roots[i], 1)),
        }
    }
    clusters
        .into_iter()
        .map(|(_, sum, m)| ClusteredRoot {
            value: sum / m as f64,
            multiplicity: m,
        })
        .collect()
}

/// Clustered roots of `p` whose modulus is within `tol` of 1.
pub fn circle_roots(p: &CoefficientSeries, tol: f64, radius: f64) -> Result<Vec<ClusteredRoot>> {
    let roots = polynomial_roots(p)?;
    Ok(cluster_roots(&roots, radius)
        .into_iter()
        .filter(|r| (r.value.norm() - 1.0).abs() <= tol)
        .collect())
}
