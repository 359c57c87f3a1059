//! Dense linear-algebra helpers shared by the model modules.

use faer::{c64, Mat, MatRef, Side};

use crate::error::Result;
use crate::lattice::HermitianOperator;

/// `exp(-i t H)` by spectral decomposition.
///
/// The Hamiltonian is split into its decoupled blocks (connected components of
/// the hopping graph) and each block is diagonalised on its own. For the
/// dimerised drive Hamiltonians every block is 2x2, which makes the
/// exponential of a chain with thousands of sites cheap; a fully connected
/// Hamiltonian is a single block.
pub fn propagator(h: &HermitianOperator, t: f64) -> Result<Mat<c64>> {
    let n = h.dim();
    let m = h.matrix();
    let mut out = Mat::<c64>::zeros(n, n);
    for block in coupled_blocks(m) {
        let size = block.len();
        let sub = Mat::<c64>::from_fn(size, size, |a, b| m[(block[a], block[b])]);
        let evd = sub.self_adjoint_eigen(Side::Lower)?;
        let vecs = evd.U();
        let phases = evd.S().column_vector().iter().map(|e| c64::cis(-t * e.re)).collect::<Vec<_>>();
        let scaled = Mat::<c64>::from_fn(size, size, |a, l| vecs[(a, l)] * phases[l]);
        let exp_block = &scaled * vecs.adjoint();
        for (a, &ia) in block.iter().enumerate() {
            for (b, &ib) in block.iter().enumerate() {
                out[(ia, ib)] = exp_block[(a, b)];
            }
        }
    }
    Ok(out)
}

/// Index sets of the connected components of the nonzero pattern of `m`,
/// ordered by smallest index.
fn coupled_blocks(m: MatRef<'_, c64>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for j in 0..n {
        for i in 0..j {
            if m[(i, j)] != c64::new(0.0, 0.0) || m[(j, i)] != c64::new(0.0, 0.0) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[root]].push(i);
    }
    blocks
}

/// `max |A^dagger A - 1|`.
pub fn unitarity_error(a: MatRef<'_, c64>) -> f64 {
    let gram = a.adjoint() * a;
    let mut worst = 0.0_f64;
    for j in 0..gram.ncols() {
        for i in 0..gram.nrows() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - c64::new(target, 0.0)).norm());
        }
    }
    worst
}

pub fn normalize(v: &mut [c64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|z| *z /= norm);
    }
}

/// Inverse participation ratio `sum |psi_i|^4` of a normalised vector.
pub fn ipr(v: &[c64]) -> f64 {
    v.iter().map(|z| z.norm_sqr().powi(2)).sum()
}

/// Probability per lattice site, summing the orbitals of each site.
pub fn site_weights(v: &[c64], orbitals_per_site: usize) -> Vec<f64> {
    v.chunks(orbitals_per_site)
        .map(|site| site.iter().map(|z| z.norm_sqr()).sum())
        .collect()
}

/// Weight on the outer tenth of the chain, `ceil(L/20)` sites at each end.
pub fn edge_weight(v: &[c64], orbitals_per_site: usize) -> f64 {
    let weights = site_weights(v, orbitals_per_site);
    let n = weights.len();
    let per_end = n.div_ceil(20).min(n / 2);
    weights[..per_end].iter().sum::<f64>() + weights[n - per_end..].iter().sum::<f64>()
}

/// An orthonormal basis vector of a subspace that diagonalises the position
/// operator within that subspace.
#[derive(Clone, Debug)]
pub struct LocalizedState {
    /// Expectation value of the site index.
    pub center: f64,
    pub vector: Vec<c64>,
}

/// Rotates a set of (possibly degenerate, possibly non-orthogonal) vectors
/// into maximally localised orthonormal combinations, sorted by centre.
///
/// Near-degenerate boundary states at distant positions come out of an
/// eigensolver in arbitrary superpositions; diagonalising the projected
/// position operator separates them again.
pub fn localize(vectors: &[Vec<c64>], orbitals_per_site: usize) -> Result<Vec<LocalizedState>> {
    let basis = orthonormalize(vectors);
    let k = basis.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let dim = basis[0].len();
    let position: Vec<f64> = (0..dim).map(|i| (i / orbitals_per_site) as f64).collect();
    let projected = Mat::<c64>::from_fn(k, k, |a, b| {
        (0..dim)
            .map(|i| basis[a][i].conj() * basis[b][i] * position[i])
            .sum::<c64>()
    });
    // symmetrise away roundoff before the Hermitian solver sees it
    let projected = Mat::<c64>::from_fn(k, k, |a, b| (projected[(a, b)] + projected[(b, a)].conj()) * 0.5);
    let evd = projected.self_adjoint_eigen(Side::Lower)?;
    let rot = evd.U();
    let centers = evd.S();
    let states = (0..k)
        .map(|l| {
            let mut vector: Vec<c64> = (0..dim)
                .map(|i| (0..k).map(|a| basis[a][i] * rot[(a, l)]).sum())
                .collect();
            normalize(&mut vector);
            LocalizedState { center: centers.column_vector()[l].re, vector }
        })
        .collect();
    Ok(states)
}

/// Modified Gram-Schmidt, dropping vectors that are numerically dependent.
fn orthonormalize(vectors: &[Vec<c64>]) -> Vec<Vec<c64>> {
    let mut basis: Vec<Vec<c64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let overlap: c64 = q.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
                w.iter_mut().zip(q).for_each(|(x, y)| *x -= overlap * y);
            }
        }
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            w.iter_mut().for_each(|z| *z /= norm);
            basis.push(w);
        }
    }
    basis
}

/// Rayleigh quotient `<v|H|v>` for a normalised `v`.
pub fn expectation(h: &HermitianOperator, v: &[c64]) -> f64 {
    let m = h.matrix();
    let n = v.len();
    let mut acc = c64::new(0.0, 0.0);
    for j in 0..n {
        if v[j] == c64::new(0.0, 0.0) {
            continue;
        }
        for i in 0..n {
            acc += v[i].conj() * m[(i, j)] * v[j];
        }
    }
    acc.re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{nearest_neighbour_chain, BoundaryCondition};

    #[test]
    fn propagator_of_dense_block_matches_dimer_closed_form() {
        // a single bond with hopping t: exp(-i s H) = cos(st) - i sin(st) sigma_x
        let h = nearest_neighbour_chain(2, &[0.7], BoundaryCondition::Open).unwrap();
        let u = propagator(&h, 1.3).unwrap();
        let (c, s) = ((1.3f64 * 0.7).cos(), (1.3f64 * 0.7).sin());
        assert!((u[(0, 0)] - c64::new(c, 0.0)).norm() < 1e-14);
        assert!((u[(0, 1)] - c64::new(0.0, -s)).norm() < 1e-14);
        assert!(unitarity_error(u.as_ref()) < 1e-14);
    }

    #[test]
    fn isolated_sites_propagate_trivially() {
        let h = nearest_neighbour_chain(4, &[0.0, 1.0, 0.0], BoundaryCondition::Open).unwrap();
        let u = propagator(&h, 0.4).unwrap();
        assert!((u[(0, 0)] - c64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((u[(3, 3)] - c64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(u[(0, 1)], c64::new(0.0, 0.0));
    }

    #[test]
    fn localize_separates_superposed_end_states() {
        let n = 10;
        let mut left = vec![c64::new(0.0, 0.0); n];
        let mut right = vec![c64::new(0.0, 0.0); n];
        left[0] = c64::new(1.0, 0.0);
        right[n - 1] = c64::new(1.0, 0.0);
        let plus: Vec<c64> = left.iter().zip(&right).map(|(a, b)| a + b).collect();
        let minus: Vec<c64> = left.iter().zip(&right).map(|(a, b)| a - b).collect();
        let states = localize(&[plus, minus], 1).unwrap();
        assert_eq!(states.len(), 2);
        assert!(states[0].center.abs() < 1e-12);
        assert!((states[1].center - (n - 1) as f64).abs() < 1e-12);
        assert!((states[0].vector[0].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn edge_weight_counts_five_percent_per_end() {
        let n = 40;
        let mut v = vec![c64::new(0.0, 0.0); n];
        v[1] = c64::new(1.0, 0.0);
        assert!((edge_weight(&v, 1) - 1.0).abs() < 1e-15);
        v[1] = c64::new(0.0, 0.0);
        v[2] = c64::new(1.0, 0.0);
        assert_eq!(edge_weight(&v, 1), 0.0);
        assert!((ipr(&v) - 1.0).abs() < 1e-15);
    }
}
