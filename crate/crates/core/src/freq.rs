//! Frequency-side geometry: Manhattan atoms, their volumes, the discrete
//! DFT-index masks, and replica-overlap predicates.
//!
//! The continuous atom `A^b` is lowpass (`|u_i| < 1/(2 k_i λ_i)`) in every
//! dimension with `b_i = 0` and highpass inside the dense band
//! (`1/(2 k_i λ_i) <= |u_i| < 1/(2 λ_i)`) where `b_i = 1`. The discrete atoms
//! follow the same pattern with the DFT Nyquist sets
//! `{u : u < T/(2α)} ∪ {u : u > T - T/(2α)}`, so the bin exactly at
//! `T/(2α)` never belongs to any atom.

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::grid::IndexIter;
use crate::lattice::{BiStep, Collection, ManhattanParams};

/// One Manhattan atom at fixed parameters.
#[derive(Clone, Debug)]
pub struct AtomSpec {
    pub b: BiStep,
    pub params: ManhattanParams,
}

impl AtomSpec {
    pub fn new(b: BiStep, params: ManhattanParams) -> Result<Self> {
        params.check_bistep(&b)?;
        Ok(Self { b, params })
    }

    /// Lowpass half-width `1/(2 k_i λ_i)`.
    pub fn low_half_width(&self, i: usize) -> BigRational {
        let zero = BiStep::zero(self.params.dims()).expect("valid dims");
        (BigRational::from_integer(BigInt::from(2)) * self.params.step(&zero, i)).recip()
    }

    /// Dense half-width `1/(2 λ_i)`.
    pub fn dense_half_width(&self, i: usize) -> BigRational {
        (BigRational::from_integer(BigInt::from(2)) * &self.params.lambda()[i]).recip()
    }

    /// Exact volume: `Π_{b_i=1} 2(1/(2λ_i) - 1/(2k_iλ_i)) · Π_{b_i=0} 1/(k_iλ_i)`.
    pub fn volume(&self) -> BigRational {
        let two = BigRational::from_integer(BigInt::from(2));
        (0..self.params.dims()).fold(BigRational::one(), |acc, i| {
            let len = if self.b.bit(i) {
                &two * (self.dense_half_width(i) - self.low_half_width(i))
            } else {
                &two * self.low_half_width(i)
            };
            acc * len
        })
    }
}

pub fn atom_volume(a: &AtomSpec) -> BigRational {
    a.volume()
}

/// Volume of the Manhattan region `M(B)`, summed over the atoms of the closure.
pub fn manhattan_region_volume(c: &Collection) -> BigRational {
    c.closure()
        .members()
        .iter()
        .map(|b| AtomSpec { b: *b, params: c.params().clone() }.volume())
        .fold(BigRational::zero(), |acc, v| acc + v)
}

/// Boolean tensor over DFT indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreqMask {
    extents: Vec<usize>,
    kept: Vec<bool>,
}

impl FreqMask {
    pub fn empty(extents: &[usize]) -> Self {
        Self {
            extents: extents.to_vec(),
            kept: vec![false; extents.iter().product()],
        }
    }

    pub fn full(extents: &[usize]) -> Self {
        Self {
            extents: extents.to_vec(),
            kept: vec![true; extents.iter().product()],
        }
    }

    /// Tensor product of per-dimension index sets.
    pub fn from_axes(axes: &[Vec<bool>]) -> Self {
        let extents: Vec<usize> = axes.iter().map(Vec::len).collect();
        let kept = IndexIter::new(&extents)
            .map(|idx| idx.iter().zip(axes).all(|(&u, axis)| axis[u]))
            .collect();
        Self { extents, kept }
    }

    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    pub fn kept(&self) -> &[bool] {
        &self.kept
    }

    pub fn count(&self) -> usize {
        self.kept.iter().filter(|&&k| k).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.kept.iter().any(|&k| k)
    }

    pub fn contains(&self, idx: &[usize]) -> bool {
        let off = idx
            .iter()
            .zip(&self.extents)
            .fold(0, |acc, (&i, &t)| acc * t + i);
        self.kept[off]
    }

    fn check(&self, other: &FreqMask) -> Result<()> {
        if self.extents != other.extents {
            return Err(Error::Dimension(format!(
                "mask extents {:?} vs {:?}",
                self.extents, other.extents
            )));
        }
        Ok(())
    }

    fn zip_with(&self, other: &FreqMask, f: impl Fn(bool, bool) -> bool) -> Result<FreqMask> {
        self.check(other)?;
        Ok(FreqMask {
            extents: self.extents.clone(),
            kept: self.kept.iter().zip(&other.kept).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn union(&self, other: &FreqMask) -> Result<FreqMask> {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &FreqMask) -> Result<FreqMask> {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn is_disjoint(&self, other: &FreqMask) -> Result<bool> {
        Ok(self.intersection(other)?.is_empty())
    }

    pub fn is_subset_of(&self, other: &FreqMask) -> Result<bool> {
        self.check(other)?;
        Ok(self.kept.iter().zip(&other.kept).all(|(&a, &b)| !a || b))
    }

    /// `out[u] = self[(u - shift) mod T]`.
    pub fn cyclic_shift(&self, shift: &[i64]) -> FreqMask {
        let mut out = FreqMask::empty(&self.extents);
        let mut dst = vec![0usize; self.extents.len()];
        for (src, idx) in IndexIter::new(&self.extents).enumerate() {
            if !self.kept[src] {
                continue;
            }
            for i in 0..idx.len() {
                let t = self.extents[i] as i64;
                dst[i] = (idx[i] as i64 + shift[i]).rem_euclid(t) as usize;
            }
            let off = dst
                .iter()
                .zip(&self.extents)
                .fold(0, |acc, (&i, &t)| acc * t + i);
            out.kept[off] = true;
        }
        out
    }

    /// Kept indices in row-major order.
    pub fn indices(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        IndexIter::new(&self.extents)
            .zip(&self.kept)
            .filter(|(_, &k)| k)
            .map(|(idx, _)| idx)
    }
}

/// Per-dimension discrete Nyquist set for lattice step `alpha` on `T` bins:
/// `0 <= u < T/(2α)` or `T - T/(2α) < u <= T - 1`.
pub fn nyquist_axis(t: usize, alpha: usize) -> Result<Vec<bool>> {
    if alpha == 0 || !t.is_multiple_of(alpha) {
        return Err(Error::Domain(format!(
            "lattice step {alpha} does not divide extent {t}"
        )));
    }
    Ok((0..t)
        .map(|u| 2 * alpha * u < t || (u > 0 && 2 * alpha * (t - u) < t))
        .collect())
}

/// Discrete Nyquist region of the rectangular lattice with the given steps.
pub fn nyquist_mask(extents: &[usize], alpha_steps: &[usize]) -> Result<FreqMask> {
    if extents.len() != alpha_steps.len() {
        return Err(Error::Dimension(format!(
            "{} extents but {} steps",
            extents.len(),
            alpha_steps.len()
        )));
    }
    let axes = extents
        .iter()
        .zip(alpha_steps)
        .map(|(&t, &a)| nyquist_axis(t, a))
        .collect::<Result<Vec<_>>>()?;
    Ok(FreqMask::from_axes(&axes))
}

/// Per-dimension index sets of the discrete atom `Ã^b`.
fn atom_axes(b: &BiStep, params: &ManhattanParams) -> Result<Vec<Vec<bool>>> {
    params.check_bistep(b)?;
    let extents = params.require_extents()?;
    let lambda = params.int_lambda()?;
    (0..params.dims())
        .map(|i| {
            let l = lambda[i] as usize;
            let low = nyquist_axis(extents[i], l * params.k()[i] as usize)?;
            if !b.bit(i) {
                return Ok(low);
            }
            let dense = nyquist_axis(extents[i], l)?;
            Ok(dense.iter().zip(&low).map(|(&d, &lo)| d && !lo).collect())
        })
        .collect()
}

/// Discrete atom `Ã^b`: `Low_i` where `b_i = 0`, `Dense_i \ Low_i` where `b_i = 1`.
pub fn atom_mask(b: &BiStep, params: &ManhattanParams) -> Result<FreqMask> {
    Ok(FreqMask::from_axes(&atom_axes(b, params)?))
}

/// Discrete Manhattan region: the union of the atoms of the closure.
pub fn region_mask(c: &Collection) -> Result<FreqMask> {
    let extents = c.params().require_extents()?;
    c.closure()
        .members()
        .iter()
        .try_fold(FreqMask::empty(extents), |acc, b| {
            acc.union(&atom_mask(b, c.params())?)
        })
}

/// Sufficient condition for every nonzero replica of `A^{b'}` under `L_s` to
/// miss `A^b`.
pub fn guaranteed_disjoint(s: &BiStep, b: &BiStep, b_prime: &BiStep) -> Result<bool> {
    let both_in_s = b.is_subset_of(s)? && b_prime.is_subset_of(s)?;
    let differ_on_dense = !b.xor(b_prime)?.intersection(s)?.is_zero();
    let same_level = b == s && b_prime.weight() <= s.weight();
    Ok(both_in_s || differ_on_dense || same_level)
}

/// Nonzero reciprocal-lattice offsets of `L_s` in DFT index units: every
/// combination of multiples of `T_i/α_{s,i}` modulo `T_i`, except zero.
pub fn replica_offsets(s: &BiStep, params: &ManhattanParams) -> Result<Vec<Vec<i64>>> {
    let extents = params.require_extents()?;
    let steps = params.int_steps(s)?;
    Ok(IndexIter::new(&steps)
        .filter(|r| r.iter().any(|&x| x != 0))
        .map(|r| {
            r.iter()
                .enumerate()
                .map(|(i, &ri)| (ri * extents[i] / steps[i]) as i64)
                .collect()
        })
        .collect())
}

/// Brute-force check whether some nonzero `L_s` replica of `Ã^{b'}`
/// intersects `Ã^b`.
pub fn replica_overlap_oracle(
    s: &BiStep,
    b: &BiStep,
    b_prime: &BiStep,
    params: &ManhattanParams,
) -> Result<bool> {
    let target = atom_mask(b, params)?;
    let source = atom_mask(b_prime, params)?;
    for shift in replica_offsets(s, params)? {
        if !source.cyclic_shift(&shift).is_disjoint(&target)? {
            return Ok(true);
        }
    }
    Ok(false)
}
