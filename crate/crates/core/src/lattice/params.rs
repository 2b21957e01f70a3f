use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use super::bistep::{BiStep, MAX_DIMS};
use crate::error::{Error, Result};

/// Dense spacings, sampling factors and (for discrete images) support extents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManhattanParams {
    lambda: Vec<BigRational>,
    k: Vec<u64>,
    extents: Option<Vec<usize>>,
}

impl ManhattanParams {
    pub fn new(lambda: Vec<BigRational>, k: Vec<u64>, extents: Option<Vec<usize>>) -> Result<Self> {
        let d = k.len();
        if d == 0 || d > MAX_DIMS {
            return Err(Error::Dimension(format!(
                "dimension must be in 1..={MAX_DIMS}, got {d}"
            )));
        }
        if lambda.len() != d {
            return Err(Error::Dimension(format!(
                "lambda has {} entries, k has {d}",
                lambda.len()
            )));
        }
        if let Some((i, ki)) = k.iter().enumerate().find(|(_, &ki)| ki < 2) {
            return Err(Error::Domain(format!(
                "sampling factor k[{}] = {ki} must be an integer greater than 1",
                i + 1
            )));
        }
        if let Some(i) = lambda.iter().position(|l| !l.is_positive()) {
            return Err(Error::Domain(format!(
                "dense spacing lambda[{}] must be positive",
                i + 1
            )));
        }
        let params = Self { lambda, k, extents: None };
        match extents {
            Some(t) => params.with_extents(t),
            None => Ok(params),
        }
    }

    /// Integer-spaced parameters, the usual discrete-space setting.
    pub fn discrete(lambda: &[u64], k: &[u64], extents: Option<&[usize]>) -> Result<Self> {
        let lambda = lambda
            .iter()
            .map(|&l| BigRational::from_integer(BigInt::from(l)))
            .collect();
        Self::new(lambda, k.to_vec(), extents.map(<[usize]>::to_vec))
    }

    /// Attach support extents, checking that every `T_i` is a positive
    /// multiple of `k_i λ_i` with integer `λ_i`.
    pub fn with_extents(&self, extents: Vec<usize>) -> Result<Self> {
        if extents.len() != self.dims() {
            return Err(Error::Dimension(format!(
                "extents have {} entries, params have {}",
                extents.len(),
                self.dims()
            )));
        }
        let lambda = self.int_lambda()?;
        for (i, &t) in extents.iter().enumerate() {
            let coarse = lambda[i] as usize * self.k[i] as usize;
            if t == 0 || t % coarse != 0 {
                return Err(Error::Domain(format!(
                    "extent T[{}] = {t} must be a positive multiple of k*lambda = {coarse}",
                    i + 1
                )));
            }
        }
        Ok(Self {
            lambda: self.lambda.clone(),
            k: self.k.clone(),
            extents: Some(extents),
        })
    }

    pub fn without_extents(&self) -> Self {
        Self {
            extents: None,
            ..self.clone()
        }
    }

    pub fn dims(&self) -> usize {
        self.k.len()
    }

    pub fn lambda(&self) -> &[BigRational] {
        &self.lambda
    }

    pub fn k(&self) -> &[u64] {
        &self.k
    }

    pub fn extents(&self) -> Option<&[usize]> {
        self.extents.as_deref()
    }

    /// Extents, or a domain error when the parameters are continuous-only.
    pub fn require_extents(&self) -> Result<&[usize]> {
        self.extents()
            .ok_or_else(|| Error::Domain("operation needs support extents T".into()))
    }

    /// `λ` as integers; fails when any spacing is fractional.
    pub fn int_lambda(&self) -> Result<Vec<u64>> {
        self.lambda
            .iter()
            .enumerate()
            .map(|(i, l)| {
                if l.is_integer() {
                    l.to_integer().to_u64().ok_or_else(|| {
                        Error::Domain(format!("lambda[{}] does not fit in u64", i + 1))
                    })
                } else {
                    Err(Error::Domain(format!(
                        "lambda[{}] = {l} must be an integer for discrete images",
                        i + 1
                    )))
                }
            })
            .collect()
    }

    /// Spacing of `L_b` along dimension `i`: `λ_i` if dense, `k_i λ_i` if coarse.
    pub fn step(&self, b: &BiStep, i: usize) -> BigRational {
        if b.bit(i) {
            self.lambda[i].clone()
        } else {
            &self.lambda[i] * BigInt::from(self.k[i])
        }
    }

    /// Integer lattice steps of `L_b`, for the discrete regime.
    pub fn int_steps(&self, b: &BiStep) -> Result<Vec<usize>> {
        self.check_bistep(b)?;
        let lambda = self.int_lambda()?;
        Ok((0..self.dims())
            .map(|i| {
                let l = lambda[i] as usize;
                if b.bit(i) {
                    l
                } else {
                    l * self.k[i] as usize
                }
            })
            .collect())
    }

    /// Comb scale `K_b`: the product of the steps of `L_b`.
    pub fn comb_scale(&self, b: &BiStep) -> BigRational {
        (0..self.dims()).fold(BigRational::one(), |acc, i| acc * self.step(b, i))
    }

    /// Volume `Π k_i λ_i` of the fundamental cell.
    pub fn cell_volume(&self) -> BigRational {
        (0..self.dims()).fold(BigRational::one(), |acc, i| {
            acc * &self.lambda[i] * BigInt::from(self.k[i])
        })
    }

    pub fn check_bistep(&self, b: &BiStep) -> Result<()> {
        if b.dims() != self.dims() {
            return Err(Error::Dimension(format!(
                "bi-step {b} has {} dims, params have {}",
                b.dims(),
                self.dims()
            )));
        }
        Ok(())
    }
}

/// True when the integer `t` is a multiple of the positive rational `step`.
pub(crate) fn is_multiple(t: i64, step: &BigRational) -> bool {
    // t = m p/q  <=>  p | t q
    let tq = BigInt::from(t) * step.denom();
    (tq % step.numer()).is_zero()
}
