//! Brute-force reconstruction by a direct least-squares solve.
//!
//! Each Manhattan sample gives one equation of the inverse DFT restricted to
//! the bins of the discrete Manhattan region. Only intended for tiny grids.

use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;

use crate::error::{Error, Result};
use crate::freq::region_mask;
use crate::grid::{Domain, Grid};
use crate::lattice::Collection;
use crate::sampler::SampleSet;

/// Largest grid (in points) the oracle accepts.
pub const ORACLE_MAX_POINTS: usize = 4096;

/// Relative residual above which samples are declared inconsistent.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

/// Inverse-DFT rows at the sample coordinates, columns at the region bins.
pub struct LinearSystem {
    extents: Vec<usize>,
    bins: Vec<Vec<usize>>,
    matrix: DMatrix<Complex64>,
}

impl LinearSystem {
    pub fn build(collection: &Collection, coords: &[Vec<i64>]) -> Result<Self> {
        let extents = collection.params().require_extents()?.to_vec();
        let points: usize = extents.iter().product();
        if points > ORACLE_MAX_POINTS {
            return Err(Error::SizeGuard {
                points,
                limit: ORACLE_MAX_POINTS,
            });
        }
        let bins: Vec<Vec<usize>> = region_mask(collection)?.indices().collect();
        let norm = 1.0 / points as f64;
        let matrix = DMatrix::from_fn(coords.len(), bins.len(), |r, c| {
            let phase: f64 = coords[r]
                .iter()
                .zip(&bins[c])
                .zip(&extents)
                .map(|((&t, &u), &n)| ((u as i64 * t).rem_euclid(n as i64)) as f64 / n as f64)
                .sum();
            Complex64::from_polar(norm, 2.0 * std::f64::consts::PI * phase)
        });
        Ok(Self { extents, bins, matrix })
    }

    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    /// Numerical rank from the singular values.
    pub fn rank(&self) -> usize {
        let sv = self.matrix.clone().singular_values();
        let max = sv.iter().copied().fold(0.0, f64::max);
        let tol = max * f64::EPSILON * self.rows().max(self.cols()) as f64;
        sv.iter().filter(|&&s| s > tol).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
}

impl RankReport {
    pub fn full_column_rank(&self) -> bool {
        self.rank == self.cols
    }
}

fn coords(ss: &SampleSet) -> Vec<Vec<i64>> {
    ss.samples().iter().map(|s| s.coord.clone()).collect()
}

/// Solve for the region's spectrum from the samples and invert it.
pub fn solve_reconstruct(ss: &SampleSet) -> Result<Grid> {
    let system = LinearSystem::build(ss.collection(), &coords(ss))?;
    let rhs = DVector::from_iterator(
        ss.len(),
        ss.samples().iter().map(|s| Complex64::new(s.value, 0.0)),
    );
    let rhs_norm = rhs.norm();
    let mut spectrum = Grid::zeros(&system.extents, Domain::Spectral);
    if rhs_norm == 0.0 {
        return Ok(spectrum.idft());
    }
    let svd = system.matrix.clone().svd(true, true);
    let max_sv = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let solution = svd
        .solve(&rhs, max_sv * 1e-12)
        .map_err(|e| Error::NumericalFailure(e.to_string()))?;
    let residual = (&system.matrix * &solution - &rhs).norm();
    let limit = RESIDUAL_TOLERANCE * rhs_norm;
    if residual > limit {
        return Err(Error::InconsistentSamples { residual, limit });
    }
    for (bin, value) in system.bins.iter().zip(solution.iter()) {
        spectrum.set(bin, *value);
    }
    spectrum.idft().into_real_checked(1e-9)
}

/// Size and numerical rank of the oracle system for a sample set.
pub fn rank_report(ss: &SampleSet) -> Result<RankReport> {
    rank_report_for(ss.collection(), &coords(ss))
}

/// Rank report for arbitrary sample coordinates (duplicates allowed).
pub fn rank_report_for(collection: &Collection, coords: &[Vec<i64>]) -> Result<RankReport> {
    let system = LinearSystem::build(collection, coords)?;
    Ok(RankReport {
        rows: system.rows(),
        cols: system.cols(),
        rank: system.rank(),
    })
}
