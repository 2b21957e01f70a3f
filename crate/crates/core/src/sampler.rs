//! Manhattan sample extraction and `K_b`-scaled comb grids.

use num::complex::Complex64;
use num::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::grid::{Domain, Grid};
use crate::lattice::{lattice_contains, BiStep, Collection, ManhattanParams};

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub coord: Vec<i64>,
    pub value: f64,
}

/// Raw image values on the Manhattan grid inside `[0, T)`, in lexicographic
/// coordinate order.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    collection: Collection,
    samples: Vec<Sample>,
}

impl SampleSet {
    /// Build from explicit samples, validating every coordinate.
    pub fn new(collection: Collection, mut samples: Vec<Sample>) -> Result<Self> {
        let extents = collection.params().require_extents()?.to_vec();
        for s in &samples {
            if s.coord.len() != extents.len() {
                return Err(Error::Dimension(format!(
                    "sample {:?} has {} coordinates, expected {}",
                    s.coord,
                    s.coord.len(),
                    extents.len()
                )));
            }
            let inside = s
                .coord
                .iter()
                .zip(&extents)
                .all(|(&t, &n)| t >= 0 && (t as usize) < n);
            if !inside || !collection.contains(&s.coord) {
                return Err(Error::Domain(format!(
                    "sample coordinate {:?} is not a Manhattan point inside the support",
                    s.coord
                )));
            }
        }
        samples.sort_by(|a, b| a.coord.cmp(&b.coord));
        if samples.windows(2).any(|w| w[0].coord == w[1].coord) {
            return Err(Error::Domain("duplicate sample coordinates".into()));
        }
        Ok(Self { collection, samples })
    }

    pub fn collection(&self) -> &Collection {
        &self.collection
    }

    pub fn params(&self) -> &ManhattanParams {
        self.collection.params()
    }

    pub fn extents(&self) -> &[usize] {
        self.params().extents().expect("sample sets always carry extents")
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Expected sample count: points per fundamental cell times the number of cells.
    pub fn expected_len(collection: &Collection) -> Result<usize> {
        let params = collection.params();
        let extents = params.require_extents()?;
        let zero = BiStep::zero(params.dims())?;
        let cells: usize = params
            .int_steps(&zero)?
            .iter()
            .zip(extents)
            .map(|(s, t)| t / s)
            .product();
        let per_cell = collection
            .fundamental_cell_count()
            .to_usize()
            .ok_or_else(|| Error::Domain("cell count overflows usize".into()))?;
        Ok(per_cell * cells)
    }
}

/// Collect all Manhattan-grid values of a real image.
pub fn extract_samples(image: &Grid, collection: &Collection) -> Result<SampleSet> {
    let extents = collection.params().require_extents()?;
    image.check_extents(extents)?;
    let samples = image
        .indices()
        .zip(image.data())
        .filter_map(|(idx, v)| {
            let coord: Vec<i64> = idx.iter().map(|&i| i as i64).collect();
            collection.contains(&coord).then_some(Sample { coord, value: v.re })
        })
        .collect();
    Ok(SampleSet {
        collection: collection.clone(),
        samples,
    })
}

/// Spatial grid that is `K_b` times the source on `L_b` and zero elsewhere.
#[derive(Clone, Debug)]
pub struct CombGrid {
    pub grid: Grid,
    pub b: BiStep,
    pub scale: f64,
}

fn comb_scale(params: &ManhattanParams, b: &BiStep) -> f64 {
    params
        .comb_scale(b)
        .to_f64()
        .expect("comb scale is a finite rational")
}

/// Comb of the samples on `L_b`; `b` must lie in the closure of the collection.
pub fn comb_from_samples(ss: &SampleSet, b: &BiStep) -> Result<CombGrid> {
    let params = ss.params();
    params.check_bistep(b)?;
    let closure = ss.collection().closure();
    if !closure.contains_member(b) {
        return Err(Error::MissingSamples(format!(
            "lattice {b} is not in the closure {closure} of the sampled collection"
        )));
    }
    let steps = params.int_steps(b)?;
    let extents = ss.extents();
    let expected: usize = extents.iter().zip(&steps).map(|(t, s)| t / s).product();
    let scale = comb_scale(params, b);
    let mut grid = Grid::zeros(extents, Domain::Spatial);
    let mut found = 0;
    for s in ss.samples() {
        if lattice_contains(params, b, &s.coord) {
            let idx: Vec<usize> = s.coord.iter().map(|&t| t as usize).collect();
            grid.set(&idx, Complex64::new(scale * s.value, 0.0));
            found += 1;
        }
    }
    if found != expected {
        return Err(Error::MissingSamples(format!(
            "lattice {b} needs {expected} samples, the set holds {found}"
        )));
    }
    Ok(CombGrid { grid, b: *b, scale })
}

/// Comb of an arbitrary spatial grid on `L_b`.
pub fn comb_from_grid(image: &Grid, params: &ManhattanParams, b: &BiStep) -> Result<CombGrid> {
    image.check_extents(params.require_extents()?)?;
    let steps = params.int_steps(b)?;
    let scale = comb_scale(params, b);
    let mut grid = image.clone();
    for (v, idx) in grid.data_mut().iter_mut().zip(image.indices()) {
        let on = idx.iter().zip(&steps).all(|(t, s)| t % s == 0);
        *v = if on { *v * scale } else { Complex64::zero() };
    }
    Ok(CombGrid { grid, b: *b, scale })
}
