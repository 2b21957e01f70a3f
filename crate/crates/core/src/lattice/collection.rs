use std::collections::BTreeSet;
use std::fmt;

use num::{BigInt, BigRational, BigUint, One, Zero};

use super::bistep::BiStep;
use super::params::{is_multiple, ManhattanParams};
use crate::error::{Error, Result};

/// An M-collection: a non-empty set of bi-step vectors generating the
/// Manhattan set `M(B)`, the union of their lattices.
///
/// Members are deduplicated and kept in canonical order (weight descending,
/// then mask ascending).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collection {
    params: ManhattanParams,
    members: Vec<BiStep>,
}

impl Collection {
    pub fn new(params: ManhattanParams, members: impl IntoIterator<Item = BiStep>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for b in members {
            params.check_bistep(&b)?;
            set.insert(b.mask());
        }
        if set.is_empty() {
            return Err(Error::Domain("collection must be non-empty".into()));
        }
        let d = params.dims();
        let mut members = set
            .into_iter()
            .map(|m| BiStep::from_mask(m, d))
            .collect::<Result<Vec<_>>>()?;
        members.sort_by(BiStep::canonical_cmp);
        Ok(Self { params, members })
    }

    /// Parse the comma-separated bit-string form, e.g. `"100,010,001"`.
    pub fn parse(params: ManhattanParams, text: &str) -> Result<Self> {
        let members = parse_members(text)?;
        if let Some(b) = members.iter().find(|b| b.dims() != params.dims()) {
            return Err(Error::Parse(format!(
                "collection token `{b}` has {} bits, expected {}",
                b.dims(),
                params.dims()
            )));
        }
        Self::new(params, members)
    }

    pub fn params(&self) -> &ManhattanParams {
        &self.params
    }

    pub fn members(&self) -> &[BiStep] {
        &self.members
    }

    pub fn dims(&self) -> usize {
        self.params.dims()
    }

    pub fn contains_member(&self, b: &BiStep) -> bool {
        self.members.contains(b)
    }

    /// Same members, different parameters.
    pub fn with_params(&self, params: ManhattanParams) -> Result<Self> {
        Self::new(params, self.members.iter().copied())
    }

    /// `B̄`: every bi-step vector that is a subset of some member.
    pub fn closure(&self) -> Self {
        let all = self.members.iter().flat_map(|b| b.subsets().collect::<Vec<_>>());
        Self::new(self.params.clone(), all).expect("closure of a valid collection")
    }

    /// The unique smallest collection generating the same Manhattan set.
    pub fn minimal(&self) -> Self {
        let kept = self.members.iter().copied().filter(|b| {
            !self
                .members
                .iter()
                .any(|o| o != b && b.mask() & o.mask() == b.mask())
        });
        Self::new(self.params.clone(), kept).expect("minimal form of a valid collection")
    }

    /// Membership of an integer point in `M(B)`.
    pub fn contains(&self, t: &[i64]) -> bool {
        self.members
            .iter()
            .any(|b| lattice_contains(&self.params, b, t))
    }

    /// Exact sampling density of `M(B)` in samples per unit volume.
    pub fn density(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.fundamental_cell_count()))
            / self.params.cell_volume()
    }

    /// Number of `M(B)` points in one fundamental cell.
    pub fn fundamental_cell_count(&self) -> BigUint {
        let k = self.params.k();
        self.closure()
            .members
            .iter()
            .map(|b| {
                (0..self.dims())
                    .filter(|&i| b.bit(i))
                    .fold(BigUint::one(), |acc, i| acc * BigUint::from(k[i] - 1))
            })
            .fold(BigUint::zero(), |acc, n| acc + n)
    }
}

impl fmt::Display for Collection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Parse comma-separated bit strings, reporting the offending token on error.
pub fn parse_members(text: &str) -> Result<Vec<BiStep>> {
    let members = text
        .split(',')
        .map(|tok| {
            tok.parse::<BiStep>()
                .map_err(|_| Error::Parse(format!("invalid collection token `{}`", tok.trim())))
        })
        .collect::<Result<Vec<_>>>()?;
    let d = members[0].dims();
    if let Some(b) = members.iter().find(|b| b.dims() != d) {
        return Err(Error::Parse(format!(
            "collection token `{b}` has {} bits, expected {d}",
            b.dims()
        )));
    }
    Ok(members)
}

/// Membership of an integer point in the bi-step lattice `L_b`.
pub fn lattice_contains(params: &ManhattanParams, b: &BiStep, t: &[i64]) -> bool {
    b.dims() == params.dims()
        && t.len() == params.dims()
        && t
            .iter()
            .enumerate()
            .all(|(i, &ti)| is_multiple(ti, &params.step(b, i)))
}

/// `L_{b1} ∩ L_{b2} = L_{b1 ∧ b2}`.
pub fn lattice_intersection(b1: &BiStep, b2: &BiStep) -> Result<BiStep> {
    b1.intersection(b2)
}

/// The `V_b` cell containing a dense-lattice point: dimension `i` is set
/// exactly when `t_i` is not a multiple of `k_i λ_i`.
pub fn v_class(params: &ManhattanParams, t: &[i64]) -> Result<BiStep> {
    if t.len() != params.dims() {
        return Err(Error::Dimension(format!(
            "point has {} coordinates, params have {}",
            t.len(),
            params.dims()
        )));
    }
    let ones = BiStep::ones(params.dims())?;
    let zero = BiStep::zero(params.dims())?;
    let mut bits = Vec::with_capacity(t.len());
    for (i, &ti) in t.iter().enumerate() {
        if !is_multiple(ti, &params.step(&ones, i)) {
            return Err(Error::Domain(format!(
                "coordinate t[{}] = {ti} is not on the dense lattice",
                i + 1
            )));
        }
        bits.push(!is_multiple(ti, &params.step(&zero, i)));
    }
    BiStep::from_bits(&bits)
}
