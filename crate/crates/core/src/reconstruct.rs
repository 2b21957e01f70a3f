//! Onion-peeling reconstruction.
//!
//! Atoms of the closure are recovered from the highest weight down. For each
//! atom `b` the samples on `L_b` are combed, the combs of all components
//! already recovered at strictly higher weight are subtracted, and the DFT of
//! the difference is restricted to `Ã^b`. Atoms of equal weight never alias
//! onto each other, so their relative order does not matter.

use num::complex::Complex64;
use num::ToPrimitive;

use crate::error::{Error, Result};
use crate::freq::{atom_mask, region_mask, FreqMask};
use crate::grid::{Domain, Grid};
use crate::lattice::{BiStep, Collection, ManhattanParams};
use crate::sampler::{comb_from_grid, comb_from_samples, SampleSet};

/// Largest tolerated `max |imag| / max |real|` when returning a real image.
pub const REALNESS_TOLERANCE: f64 = 1e-9;

/// Sweep order over the closure together with each atom's mask.
#[derive(Clone, Debug)]
pub struct ReconstructionPlan {
    params: ManhattanParams,
    order: Vec<BiStep>,
    masks: Vec<FreqMask>,
}

impl ReconstructionPlan {
    /// Canonical sweep: weight descending, ties by mask ascending.
    pub fn new(collection: &Collection) -> Result<Self> {
        let closure = collection.closure();
        Self::with_order(collection, closure.members().to_vec())
    }

    /// Custom sweep; it must cover the closure exactly with non-increasing weight.
    pub fn with_order(collection: &Collection, order: Vec<BiStep>) -> Result<Self> {
        let params = collection.params().clone();
        params.require_extents()?;
        let closure = collection.closure();
        let mut sorted = order.clone();
        sorted.sort_by(BiStep::canonical_cmp);
        sorted.dedup();
        if sorted != closure.members() || sorted.len() != order.len() {
            return Err(Error::Domain(format!(
                "sweep must cover the closure {closure} exactly once"
            )));
        }
        if order.windows(2).any(|w| w[0].weight() < w[1].weight()) {
            return Err(Error::Domain("sweep weights must be non-increasing".into()));
        }
        let masks = order
            .iter()
            .map(|b| atom_mask(b, &params))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { params, order, masks })
    }

    pub fn order(&self) -> &[BiStep] {
        &self.order
    }

    pub fn masks(&self) -> &[FreqMask] {
        &self.masks
    }

    pub fn params(&self) -> &ManhattanParams {
        &self.params
    }
}

/// One recovered atom: its spectrum `X^b` and spatial component `x^b`.
#[derive(Clone, Debug)]
pub struct Component {
    pub b: BiStep,
    pub spectrum: Grid,
    pub spatial: Grid,
    /// DFT of the combed higher-weight components that was subtracted.
    pub subtracted: Grid,
}

#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub components: Vec<Component>,
    /// Sum of all component spectra.
    pub spectrum: Grid,
}

impl Reconstruction {
    pub fn component(&self, b: &BiStep) -> Option<&Component> {
        self.components.iter().find(|c| &c.b == b)
    }

    /// Inverse transform of the total spectrum, checked for realness.
    pub fn image(&self) -> Result<Grid> {
        self.spectrum.idft().into_real_checked(REALNESS_TOLERANCE)
    }
}

/// Run the sweep and keep every intermediate component.
pub fn onion_peel(ss: &SampleSet, plan: &ReconstructionPlan) -> Result<Reconstruction> {
    if ss.params() != plan.params() {
        return Err(Error::Domain(
            "sample set parameters do not match the reconstruction plan".into(),
        ));
    }
    let extents = ss.extents().to_vec();
    let mut components: Vec<Component> = Vec::with_capacity(plan.order().len());
    for (b, mask) in plan.order().iter().zip(plan.masks()) {
        let mut higher = Grid::zeros(&extents, Domain::Spatial);
        for c in components.iter().filter(|c| c.b.weight() > b.weight()) {
            higher.add_assign(&c.spatial)?;
        }
        let subtracted = comb_from_grid(&higher, ss.params(), b)?.grid.dft();
        let mut dealiased = comb_from_samples(ss, b)?.grid.dft();
        dealiased.sub_assign(&subtracted)?;
        let spectrum = dealiased.apply_mask(mask)?;
        let spatial = spectrum.idft();
        components.push(Component {
            b: *b,
            spectrum,
            spatial,
            subtracted,
        });
    }
    let mut spectrum = Grid::zeros(&extents, Domain::Spectral);
    for c in &components {
        spectrum.add_assign(&c.spectrum)?;
    }
    Ok(Reconstruction { components, spectrum })
}

/// Recover the full image from Manhattan samples.
pub fn reconstruct(ss: &SampleSet) -> Result<Grid> {
    let plan = ReconstructionPlan::new(ss.collection())?;
    onion_peel(ss, &plan)?.image()
}

/// The dedicated two-dimensional procedure for `B = {(1,0), (0,1)}`,
/// subtracting the vertical-lattice aliases of the horizontal highpass band
/// from the vertical spectrum inside the coarse Nyquist region.
pub fn reconstruct_2d_fast(ss: &SampleSet) -> Result<Grid> {
    let params = ss.params();
    let minimal = ss.collection().minimal();
    let is_pair = params.dims() == 2 && minimal.to_string() == "10,01";
    if !is_pair {
        return Err(Error::Unsupported(format!(
            "two-dimensional procedure needs B = {{10,01}}, got {} in {} dims",
            ss.collection(),
            params.dims()
        )));
    }
    let vertical = BiStep::from_mask(0b10, 2)?;
    let horizontal = BiStep::from_mask(0b01, 2)?;
    let coarse = BiStep::zero(2)?;

    let spec_v = comb_from_samples(ss, &vertical)?.grid.dft();
    let spec_h = comb_from_samples(ss, &horizontal)?.grid.dft();
    let band_v = atom_mask(&vertical, params)?;
    let band_h = atom_mask(&horizontal, params)?;
    let nyq_c = atom_mask(&coarse, params)?;

    let highpass_h = spec_h.apply_mask(&band_h)?.idft();
    let alias = comb_from_grid(&highpass_h, params, &vertical)?.grid.dft();

    let mut spectrum = Grid::zeros(ss.extents(), Domain::Spectral);
    for (off, x) in spectrum.data_mut().iter_mut().enumerate() {
        *x = if band_v.kept()[off] {
            spec_v.data()[off]
        } else if band_h.kept()[off] {
            spec_h.data()[off]
        } else if nyq_c.kept()[off] {
            spec_v.data()[off] - alias.data()[off]
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    spectrum.idft().into_real_checked(REALNESS_TOLERANCE)
}

/// Zero all DFT coefficients outside the discrete Manhattan region.
pub fn bandlimit(image: &Grid, collection: &Collection) -> Result<Grid> {
    let mask = region_mask(collection)?;
    image.check_extents(mask.extents())?;
    Ok(image.dft().apply_mask(&mask)?.idft().into_real())
}

/// Centered `log10(|X| + 1e-12)` map of an image's spectrum.
pub fn spectrum_report(image: &Grid) -> Grid {
    let spectrum = match image.domain() {
        Domain::Spatial => image.dft(),
        Domain::Spectral => image.clone(),
    };
    let half: Vec<i64> = spectrum.extents().iter().map(|&t| (t / 2) as i64).collect();
    let mut out = spectrum.cyclic_shift(&half);
    for v in out.data_mut() {
        *v = Complex64::new((v.norm() + 1e-12).log10(), 0.0);
    }
    out
}

/// Ideal continuous-space interpolation filter `h^b` for atom `A^b`.
#[derive(Clone, Debug)]
pub struct SpatialFilter {
    pub b: BiStep,
    /// Band centers `c_i = (1/(2λ_i) + 1/(2k_iλ_i)) / 2`.
    pub centers: Vec<f64>,
    /// Band widths `w_i(b)`.
    pub widths: Vec<f64>,
}

impl SpatialFilter {
    pub fn new(b: BiStep, params: &ManhattanParams) -> Result<Self> {
        params.check_bistep(&b)?;
        let mut centers = Vec::with_capacity(params.dims());
        let mut widths = Vec::with_capacity(params.dims());
        for i in 0..params.dims() {
            let lambda = params.lambda()[i].to_f64().expect("finite lambda");
            let k = params.k()[i] as f64;
            let dense = 1.0 / (2.0 * lambda);
            let low = 1.0 / (2.0 * k * lambda);
            centers.push((dense + low) / 2.0);
            widths.push(if b.bit(i) { dense - low } else { 2.0 * low });
        }
        Ok(Self { b, centers, widths })
    }

    /// `h^b(t) = Π w_i sinc(w_i t_i) · Π_{b_i=1} 2cos(2π c_i t_i)`.
    pub fn eval(&self, t: &[f64]) -> f64 {
        let mut h = 1.0;
        for (i, &ti) in t.iter().enumerate() {
            let w = self.widths[i];
            h *= w * sinc(w * ti);
            if self.b.bit(i) {
                h *= 2.0 * (2.0 * std::f64::consts::PI * self.centers[i] * ti).cos();
            }
        }
        h
    }

    /// `h^b(0)`.
    pub fn origin_value(&self) -> f64 {
        let twos = 2f64.powi(self.b.weight() as i32);
        self.widths.iter().product::<f64>() * twos
    }
}

pub fn spatial_filter_eval(f: &SpatialFilter, t: &[f64]) -> f64 {
    f.eval(t)
}

/// Normalized sinc, `sin(πx)/(πx)`.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}
