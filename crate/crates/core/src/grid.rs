//! Dense d-dimensional complex tensors and the separable DFT.
//!
//! The forward transform is unnormalized,
//! `X[u] = Σ_t x[t] exp(-j2π Σ_i u_i t_i / T_i)`, and the inverse carries
//! the `1/Π T_i` factor.

use num::complex::Complex64;
use num::Zero;
use rustfft::{FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::freq::FreqMask;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Spatial,
    Spectral,
}

/// Row-major complex tensor; the last dimension varies fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    extents: Vec<usize>,
    data: Vec<Complex64>,
    domain: Domain,
}

impl Grid {
    pub fn zeros(extents: &[usize], domain: Domain) -> Self {
        let len = extents.iter().product();
        Self {
            extents: extents.to_vec(),
            data: vec![Complex64::zero(); len],
            domain,
        }
    }

    pub fn from_complex(extents: &[usize], data: Vec<Complex64>, domain: Domain) -> Result<Self> {
        let len: usize = extents.iter().product();
        if extents.is_empty() || extents.contains(&0) {
            return Err(Error::Dimension(format!("invalid extents {extents:?}")));
        }
        if data.len() != len {
            return Err(Error::Dimension(format!(
                "data length {} does not match extents {extents:?} ({len})",
                data.len()
            )));
        }
        Ok(Self {
            extents: extents.to_vec(),
            data,
            domain,
        })
    }

    /// A real spatial image.
    pub fn from_real(extents: &[usize], data: &[f64]) -> Result<Self> {
        Self::from_complex(
            extents,
            data.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            Domain::Spatial,
        )
    }

    pub fn from_fn(extents: &[usize], domain: Domain, mut f: impl FnMut(&[usize]) -> Complex64) -> Self {
        let mut g = Self::zeros(extents, domain);
        let mut idx = vec![0; extents.len()];
        for v in g.data.iter_mut() {
            *v = f(&idx);
            increment(&mut idx, extents);
        }
        g
    }

    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    pub fn dims(&self) -> usize {
        self.extents.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.data.iter().map(|c| c.re).collect()
    }

    /// Row-major offset of a multi-index.
    pub fn offset(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(&self.extents)
            .fold(0, |acc, (&i, &t)| acc * t + i)
    }

    pub fn get(&self, idx: &[usize]) -> Complex64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: Complex64) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    /// Iterate over all multi-indices in row-major order.
    pub fn indices(&self) -> IndexIter {
        IndexIter::new(&self.extents)
    }

    pub fn check_extents(&self, other: &[usize]) -> Result<()> {
        if self.extents != other {
            return Err(Error::Dimension(format!(
                "extents {:?} do not match {other:?}",
                self.extents
            )));
        }
        Ok(())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest `|a - b|` over all entries.
    pub fn max_abs_diff(&self, other: &Grid) -> Result<f64> {
        self.check_extents(&other.extents)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Max-norm error relative to `reference`'s max-norm.
    pub fn rel_max_error(&self, reference: &Grid) -> Result<f64> {
        let diff = self.max_abs_diff(reference)?;
        let scale = reference.max_abs();
        Ok(if scale == 0.0 { diff } else { diff / scale })
    }

    pub fn scale(&mut self, s: f64) {
        self.data.iter_mut().for_each(|v| *v *= s);
    }

    pub fn add_assign(&mut self, other: &Grid) -> Result<()> {
        self.check_extents(&other.extents)?;
        self.data
            .iter_mut()
            .zip(&other.data)
            .for_each(|(a, b)| *a += b);
        Ok(())
    }

    pub fn sub_assign(&mut self, other: &Grid) -> Result<()> {
        self.check_extents(&other.extents)?;
        self.data
            .iter_mut()
            .zip(&other.data)
            .for_each(|(a, b)| *a -= b);
        Ok(())
    }

    /// Cyclic shift: `out[u] = self[(u - shift) mod T]`.
    pub fn cyclic_shift(&self, shift: &[i64]) -> Grid {
        let mut out = Grid::zeros(&self.extents, self.domain);
        let mut dst = vec![0; self.dims()];
        for (src_off, idx) in self.indices().enumerate() {
            for (i, (&u, &t)) in idx.iter().zip(&self.extents).enumerate() {
                dst[i] = (u as i64 + shift[i]).rem_euclid(t as i64) as usize;
            }
            let o = out.offset(&dst);
            out.data[o] = self.data[src_off];
        }
        out
    }

    /// Unnormalized forward DFT.
    pub fn dft(&self) -> Grid {
        debug_assert_eq!(self.domain, Domain::Spatial, "dft expects a spatial grid");
        let mut out = self.clone();
        out.transform(FftDirection::Forward);
        out.domain = Domain::Spectral;
        out
    }

    /// Inverse DFT with `1/Π T_i` normalization.
    pub fn idft(&self) -> Grid {
        debug_assert_eq!(self.domain, Domain::Spectral, "idft expects a spectral grid");
        let mut out = self.clone();
        out.transform(FftDirection::Inverse);
        out.scale(1.0 / self.len() as f64);
        out.domain = Domain::Spatial;
        out
    }

    fn transform(&mut self, direction: FftDirection) {
        let mut planner = FftPlanner::<f64>::new();
        let total = self.len();
        for axis in 0..self.dims() {
            let n = self.extents[axis];
            if n == 1 {
                continue;
            }
            let stride: usize = self.extents[axis + 1..].iter().product();
            let fft = planner.plan_fft(n, direction);
            let mut line = vec![Complex64::zero(); n];
            let mut scratch = vec![Complex64::zero(); fft.get_inplace_scratch_len()];
            let block = n * stride;
            for base in (0..total).step_by(block) {
                for inner in 0..stride {
                    let start = base + inner;
                    for (j, v) in line.iter_mut().enumerate() {
                        *v = self.data[start + j * stride];
                    }
                    fft.process_with_scratch(&mut line, &mut scratch);
                    for (j, v) in line.iter().enumerate() {
                        self.data[start + j * stride] = *v;
                    }
                }
            }
        }
    }

    /// Zero every entry outside the mask.
    pub fn apply_mask(&self, mask: &FreqMask) -> Result<Grid> {
        self.check_extents(mask.extents())?;
        let mut out = self.clone();
        out.data
            .iter_mut()
            .zip(mask.kept())
            .filter(|(_, &keep)| !keep)
            .for_each(|(v, _)| *v = Complex64::zero());
        Ok(out)
    }

    /// Drop imaginary parts after checking they are negligible:
    /// `max |imag| <= rel_tol * max |real|`.
    pub fn into_real_checked(self, rel_tol: f64) -> Result<Grid> {
        let max_re = self.data.iter().map(|c| c.re.abs()).fold(0.0, f64::max);
        let max_im = self.data.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        if max_im > rel_tol * max_re {
            return Err(Error::NumericalFailure(format!(
                "imaginary residue {max_im:.3e} exceeds {rel_tol:.0e} x max real part {max_re:.3e}"
            )));
        }
        Ok(self.into_real())
    }

    /// Drop imaginary parts unconditionally.
    pub fn into_real(mut self) -> Grid {
        self.data.iter_mut().for_each(|c| c.im = 0.0);
        self
    }
}

/// Row-major multi-index iterator.
pub struct IndexIter {
    extents: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl IndexIter {
    pub fn new(extents: &[usize]) -> Self {
        let empty = extents.is_empty() || extents.contains(&0);
        Self {
            extents: extents.to_vec(),
            next: if empty { None } else { Some(vec![0; extents.len()]) },
        }
    }
}

impl Iterator for IndexIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.next.take()?;
        let mut nxt = cur.clone();
        if increment(&mut nxt, &self.extents) {
            self.next = Some(nxt);
        }
        Some(cur)
    }
}

/// Advance a row-major index; false once it wraps around.
fn increment(idx: &mut [usize], extents: &[usize]) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < extents[i] {
            return true;
        }
        idx[i] = 0;
    }
    false
}
