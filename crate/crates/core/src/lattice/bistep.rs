use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported dimension.
pub const MAX_DIMS: usize = 16;

/// Indicator vector selecting a dense (`true`) or coarse (`false`) step in
/// every dimension of a bi-step lattice.
///
/// Bits are stored as a mask where bit `i` is dimension `i` (zero-based).
/// The text form writes dimension 1 first, so `"100"` has only the first
/// dimension dense.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct BiStep {
    mask: u16,
    dims: u8,
}

impl BiStep {
    pub fn from_mask(mask: u32, dims: usize) -> Result<Self> {
        if dims == 0 || dims > MAX_DIMS {
            return Err(Error::Dimension(format!(
                "bi-step dimension must be in 1..={MAX_DIMS}, got {dims}"
            )));
        }
        if dims < 32 && mask >> dims != 0 {
            return Err(Error::Dimension(format!(
                "mask {mask:#b} has bits beyond dimension {dims}"
            )));
        }
        Ok(Self {
            mask: mask as u16,
            dims: dims as u8,
        })
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let mask = bits
            .iter()
            .enumerate()
            .fold(0u32, |m, (i, &b)| if b { m | (1 << i) } else { m });
        Self::from_mask(mask, bits.len())
    }

    /// The all-coarse vector `0`.
    pub fn zero(dims: usize) -> Result<Self> {
        Self::from_mask(0, dims)
    }

    /// The all-dense vector `1`.
    pub fn ones(dims: usize) -> Result<Self> {
        Self::from_mask(full_mask(dims), dims)
    }

    /// Unit vector `e_i` (zero-based `i`).
    pub fn unit(i: usize, dims: usize) -> Result<Self> {
        if i >= dims {
            return Err(Error::Dimension(format!("unit index {i} >= {dims}")));
        }
        Self::from_mask(1 << i, dims)
    }

    pub fn mask(&self) -> u32 {
        u32::from(self.mask)
    }

    pub fn dims(&self) -> usize {
        usize::from(self.dims)
    }

    pub fn bit(&self, i: usize) -> bool {
        self.mask >> i & 1 == 1
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.dims()).map(|i| self.bit(i)).collect()
    }

    pub fn weight(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn is_zero(&self) -> bool {
        self.mask == 0
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::Dimension(format!(
                "bi-step lengths differ: {} vs {}",
                self.dims, other.dims
            )));
        }
        Ok(())
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(Self {
            mask: self.mask | other.mask,
            dims: self.dims,
        })
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(Self {
            mask: self.mask & other.mask,
            dims: self.dims,
        })
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(Self {
            mask: self.mask ^ other.mask,
            dims: self.dims,
        })
    }

    pub fn complement(&self) -> Self {
        Self {
            mask: !self.mask & full_mask(self.dims()) as u16,
            dims: self.dims,
        }
    }

    /// `self ⊂ other` in the non-strict sense: every dense dimension of
    /// `self` is dense in `other`.
    pub fn is_subset_of(&self, other: &Self) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.mask & other.mask == self.mask)
    }

    /// All `b' ⊂ self`, including `self` and `0`.
    pub fn subsets(&self) -> impl Iterator<Item = BiStep> + '_ {
        let full = self.mask;
        let mut next = Some(full);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == 0 { None } else { Some((cur - 1) & full) };
            Some(BiStep {
                mask: cur,
                dims: self.dims,
            })
        })
    }

    /// Every bi-step vector of the given dimension.
    pub fn all(dims: usize) -> Result<Vec<BiStep>> {
        let ones = Self::ones(dims)?;
        let mut v: Vec<_> = ones.subsets().collect();
        v.sort_by(BiStep::canonical_cmp);
        Ok(v)
    }

    /// Weight descending, then mask ascending.
    pub fn canonical_cmp(a: &BiStep, b: &BiStep) -> Ordering {
        b.weight()
            .cmp(&a.weight())
            .then_with(|| a.mask.cmp(&b.mask))
    }
}

pub(crate) fn full_mask(dims: usize) -> u32 {
    if dims >= 32 {
        u32::MAX
    } else {
        (1u32 << dims) - 1
    }
}

/// Result of [`bistep_algebra`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BiStepAlgebra {
    pub union: BiStep,
    pub intersection: BiStep,
    pub xor: BiStep,
    pub complement_of_a: BiStep,
    pub a_subset_b: bool,
    pub weight_a: u32,
}

pub fn bistep_algebra(a: &BiStep, b: &BiStep) -> Result<BiStepAlgebra> {
    Ok(BiStepAlgebra {
        union: a.union(b)?,
        intersection: a.intersection(b)?,
        xor: a.xor(b)?,
        complement_of_a: a.complement(),
        a_subset_b: a.is_subset_of(b)?,
        weight_a: a.weight(),
    })
}

impl fmt::Display for BiStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dims() {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BiStep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let token = s.trim();
        if token.is_empty() {
            return Err(Error::Parse("empty bi-step token".into()));
        }
        let bits = token
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!(
                    "invalid bi-step token `{token}`: expected only 0 and 1"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        if bits.len() > MAX_DIMS {
            return Err(Error::Parse(format!(
                "bi-step token `{token}` longer than {MAX_DIMS}"
            )));
        }
        BiStep::from_bits(&bits)
    }
}
