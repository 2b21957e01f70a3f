#![allow(dead_code)]

use manhattan::{Collection, Grid, ManhattanParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform noise in [-1, 1).
pub fn random_image(extents: &[usize], seed: u64) -> Grid {
    let mut r = rng(seed);
    let n: usize = extents.iter().product();
    let data: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
    Grid::from_real(extents, &data).unwrap()
}

pub fn params(lambda: &[u64], k: &[u64], extents: &[usize]) -> ManhattanParams {
    ManhattanParams::discrete(lambda, k, Some(extents)).unwrap()
}

pub fn collection(lambda: &[u64], k: &[u64], extents: &[usize], text: &str) -> Collection {
    Collection::parse(params(lambda, k, extents), text).unwrap()
}

/// All integer points of `[0, n)^d`.
pub fn window(d: usize, n: i64) -> impl Iterator<Item = Vec<i64>> {
    let total = (n as usize).pow(d as u32);
    (0..total).map(move |mut idx| {
        let mut t = vec![0; d];
        for ti in t.iter_mut().rev() {
            *ti = (idx % n as usize) as i64;
            idx /= n as usize;
        }
        t
    })
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm_all(values: impl IntoIterator<Item = u64>) -> u64 {
    values.into_iter().fold(1, |acc, v| acc / gcd(acc, v) * v)
}
