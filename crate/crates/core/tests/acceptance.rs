//! Acceptance criteria. Run with
//! `cargo test -p manhattan-core --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::{collection, lcm_all, random_image, rng, window};
use manhattan::freq::{
    atom_mask, guaranteed_disjoint, manhattan_region_volume, nyquist_mask, replica_overlap_oracle,
    FreqMask,
};
use manhattan::grid::IndexIter;
use manhattan::lattice::{lattice_contains, v_class};
use manhattan::oracle::{rank_report, solve_reconstruct, ORACLE_MAX_POINTS};
use manhattan::reconstruct::{
    bandlimit, onion_peel, reconstruct, reconstruct_2d_fast, ReconstructionPlan,
};
use manhattan::sampler::{comb_from_samples, extract_samples, SampleSet};
use manhattan::{BiStep, Collection, Domain, Grid, ManhattanParams};
use num::{BigInt, BigRational, ToPrimitive};
use rand::Rng;

const RECON_TOL: f64 = 1e-9;
const ORACLE_TOL: f64 = 1e-8;

type Outcome = Result<String, String>;

struct Config {
    lambda: Vec<u64>,
    k: Vec<u64>,
    extents: Vec<usize>,
    members: &'static str,
}

impl Config {
    fn new(lambda: &[u64], k: &[u64], extents: &[usize], members: &'static str) -> Self {
        Self {
            lambda: lambda.to_vec(),
            k: k.to_vec(),
            extents: extents.to_vec(),
            members,
        }
    }

    fn collection(&self) -> Collection {
        collection(&self.lambda, &self.k, &self.extents, self.members)
    }

    fn label(&self) -> String {
        format!(
            "T={:?} k={:?} λ={:?} B={{{}}}",
            self.extents, self.k, self.lambda, self.members
        )
    }
}

/// bandlimit → sample → reconstruct over several seeds; returns the worst
/// relative max error and the elapsed time.
fn round_trips(cfg: &Config, seeds: std::ops::Range<u64>) -> (f64, Duration) {
    let c = cfg.collection();
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for seed in seeds {
        let x = bandlimit(&random_image(&cfg.extents, seed), &c).unwrap();
        let ss = extract_samples(&x, &c).unwrap();
        let y = reconstruct(&ss).unwrap();
        worst = worst.max(y.rel_max_error(&x).unwrap());
    }
    (worst, start.elapsed())
}

fn check_round_trips(cfg: &Config, images: u64, time_limit: Option<Duration>) -> Outcome {
    let (err, elapsed) = round_trips(cfg, 0..images);
    let mut line = format!(
        "{}: {images} images, worst rel err {err:.2e}, {:.3}s",
        cfg.label(),
        elapsed.as_secs_f64()
    );
    if err > RECON_TOL {
        return Err(format!("{line} (tolerance {RECON_TOL:.0e})"));
    }
    if let Some(limit) = time_limit {
        line.push_str(&format!(" (limit {:.0}s)", limit.as_secs_f64()));
        if elapsed >= limit {
            return Err(line);
        }
    }
    Ok(line)
}

fn fig5_configs() -> Vec<Config> {
    vec![
        Config::new(&[1, 1], &[4, 4], &[256, 256], "10,01"),
        Config::new(&[1, 1], &[8, 8], &[256, 256], "10,01"),
        Config::new(&[2, 2], &[8, 8], &[256, 256], "10,01"),
    ]
}

fn criterion1_configs() -> Vec<Config> {
    let mut v = vec![Config::new(&[1, 1], &[5, 3], &[40, 24], "10,01")];
    v.extend(fig5_configs());
    v
}

fn criterion2_configs() -> Vec<Config> {
    ["100,010,001", "110,101,011", "110,001"]
        .into_iter()
        .map(|m| Config::new(&[1, 1, 1], &[3, 3, 3], &[12, 12, 12], m))
        .collect()
}

fn all_ok(lines: Vec<Outcome>) -> Outcome {
    let failed: Vec<_> = lines.iter().filter_map(|l| l.as_ref().err()).cloned().collect();
    if failed.is_empty() {
        Ok(lines.into_iter().map(Result::unwrap).collect::<Vec<_>>().join("; "))
    } else {
        Err(failed.join("; "))
    }
}

fn criterion_1() -> Outcome {
    let mut lines = vec![check_round_trips(
        &criterion1_configs()[0],
        20,
        Some(Duration::from_secs(1)),
    )];
    for cfg in fig5_configs() {
        lines.push(check_round_trips(&cfg, 3, None));
    }
    all_ok(lines)
}

fn criterion_2() -> Outcome {
    all_ok(
        criterion2_configs()
            .iter()
            .map(|cfg| check_round_trips(cfg, 5, Some(Duration::from_secs(5))))
            .collect(),
    )
}

fn criterion_3() -> Outcome {
    let cfg = Config::new(&[1; 4], &[2; 4], &[6; 4], "1000,0100,0010,0001");
    check_round_trips(&cfg, 3, None)
}

fn random_rational(r: &mut impl Rng) -> BigRational {
    BigRational::new(r.random_range(1i64..=8).into(), r.random_range(1i64..=8).into())
}

fn criterion_4() -> Outcome {
    let p3 = ManhattanParams::discrete(&[1, 1, 1], &[3, 3, 3], None).unwrap();
    let mut failures = Vec::new();
    for (members, num) in [("100,010,001", 7), ("110,001", 11), ("110,101,011", 19)] {
        let got = Collection::parse(p3.clone(), members).unwrap().density();
        if got != BigRational::new(num.into(), 27.into()) {
            failures.push(format!("{{{members}}} gave {got}"));
        }
    }
    let mut r = rng(4);
    for _ in 0..50 {
        let k = [r.random_range(2u64..=12), r.random_range(2u64..=12)];
        let lambda = [random_rational(&mut r), random_rational(&mut r)];
        let p = ManhattanParams::new(lambda.to_vec(), k.to_vec(), None).unwrap();
        let got = Collection::parse(p, "10,01").unwrap().density();
        let expected = BigRational::from_integer(BigInt::from(k[0] + k[1] - 1))
            / (BigRational::from_integer(BigInt::from(k[0] * k[1])) * &lambda[0] * &lambda[1]);
        if got != expected {
            failures.push(format!("k={k:?} λ=({}, {}): {got} != {expected}", lambda[0], lambda[1]));
        }
    }
    if failures.is_empty() {
        Ok("Table I rows 7/27, 11/27, 19/27 exact; 50 random 2D configs exact".into())
    } else {
        Err(failures.join("; "))
    }
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let mut mismatches = 0;
    for _ in 0..100 {
        let d = r.random_range(1usize..=4);
        let k: Vec<u64> = (0..d).map(|_| r.random_range(2u64..=7)).collect();
        let lambda = (0..d).map(|_| random_rational(&mut r)).collect();
        let p = ManhattanParams::new(lambda, k, None).unwrap();
        let n = r.random_range(1usize..=4);
        let members = (0..n).map(|_| BiStep::from_mask(r.random_range(0u32..(1 << d)), d).unwrap());
        let c = Collection::new(p, members).unwrap();
        if manhattan_region_volume(&c) != c.density() {
            mismatches += 1;
        }
    }
    if mismatches == 0 {
        Ok("region volume == density exactly for 100 random configs".into())
    } else {
        Err(format!("{mismatches} of 100 configs differ"))
    }
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    for _ in 0..50 {
        let d = r.random_range(1usize..=3);
        let lambda: Vec<u64> = (0..d).map(|_| r.random_range(1u64..=2)).collect();
        let k: Vec<u64> = (0..d).map(|_| r.random_range(2u64..=5)).collect();
        let t: Vec<usize> = (0..d)
            .map(|i| (lambda[i] * k[i]) as usize * r.random_range(1usize..=3))
            .collect();
        let p = ManhattanParams::discrete(&lambda, &k, Some(&t)).unwrap();
        let n = r.random_range(1usize..=4);
        let members = (0..n).map(|_| BiStep::from_mask(r.random_range(0u32..(1 << d)), d).unwrap());
        let c = Collection::new(p, members).unwrap();
        let ss = extract_samples(&Grid::zeros(&t, Domain::Spatial), &c).unwrap();
        let cells: usize = (0..d).map(|i| t[i] / (k[i] * lambda[i]) as usize).product();
        let expected = c.fundamental_cell_count().to_usize().unwrap() * cells;
        if ss.len() != expected || SampleSet::expected_len(&c).unwrap() != expected {
            return Err(format!("{c} T={t:?}: {} samples, expected {expected}", ss.len()));
        }
    }
    Ok("sample count == cell count × cells for 50 random configs".into())
}

fn criterion_7() -> Outcome {
    let mut checked = 0;
    let mut guaranteed = 0;
    let mut violations = Vec::new();
    for k in [vec![2u64, 3], vec![2, 2, 3]] {
        let d = k.len();
        let t: Vec<usize> = k.iter().map(|&ki| 4 * ki as usize).collect();
        let p = ManhattanParams::discrete(&vec![1; d], &k, Some(&t)).unwrap();
        let all = BiStep::all(d).unwrap();
        for s in &all {
            for b in &all {
                for bp in &all {
                    checked += 1;
                    if guaranteed_disjoint(s, b, bp).unwrap() {
                        guaranteed += 1;
                        if replica_overlap_oracle(s, b, bp, &p).unwrap() {
                            violations.push(format!("s={s} b={b} b'={bp}"));
                        }
                    }
                }
            }
        }
    }
    let line = format!("{checked} triples, {guaranteed} guaranteed disjoint, {} violations", violations.len());
    if violations.is_empty() {
        Ok(line)
    } else {
        Err(format!("{line}: {}", violations.join(", ")))
    }
}

fn replica_subtraction(p: &ManhattanParams, b: &BiStep, higher: &[&Grid]) -> Grid {
    let extents = p.require_extents().unwrap().to_vec();
    let lambda = p.int_lambda().unwrap();
    let counts: Vec<usize> = (0..p.dims())
        .map(|i| if b.bit(i) { 1 } else { 2 * p.k()[i] as usize - 1 })
        .collect();
    let shifts: BTreeSet<Vec<i64>> = IndexIter::new(&counts)
        .map(|idx| {
            (0..p.dims())
                .map(|i| {
                    if b.bit(i) {
                        return 0;
                    }
                    let n = idx[i] as i64 - (p.k()[i] as i64 - 1);
                    let step = (extents[i] / (p.k()[i] * lambda[i]) as usize) as i64;
                    (n * step).rem_euclid(extents[i] as i64)
                })
                .collect()
        })
        .collect();
    let mut out = Grid::zeros(&extents, Domain::Spectral);
    for shift in shifts {
        for spec in higher {
            out.add_assign(&spec.cyclic_shift(&shift)).unwrap();
        }
    }
    out
}

fn criterion_8() -> Outcome {
    let mut worst_fast: f64 = 0.0;
    for cfg in criterion1_configs() {
        let c = cfg.collection();
        for seed in 0..3 {
            let x = bandlimit(&random_image(&cfg.extents, 100 + seed), &c).unwrap();
            let ss = extract_samples(&x, &c).unwrap();
            let fast = reconstruct_2d_fast(&ss).unwrap();
            let onion = reconstruct(&ss).unwrap();
            worst_fast = worst_fast.max(fast.rel_max_error(&onion).unwrap());
        }
    }
    let mut worst_replica: f64 = 0.0;
    for (lambda, k) in [([1u64, 1], [4u64, 4]), ([1, 2], [2, 2])] {
        let c = collection(&lambda, &k, &[16, 16], "10,01");
        let x = bandlimit(&random_image(&[16, 16], 8), &c).unwrap();
        let ss = extract_samples(&x, &c).unwrap();
        let rec = onion_peel(&ss, &ReconstructionPlan::new(&c).unwrap()).unwrap();
        let scale = x.dft().max_abs();
        for comp in &rec.components {
            let mask = atom_mask(&comp.b, c.params()).unwrap();
            let higher: Vec<&Grid> = rec
                .components
                .iter()
                .filter(|o| o.b.weight() > comp.b.weight())
                .map(|o| &o.spectrum)
                .collect();
            let oracle = replica_subtraction(c.params(), &comp.b, &higher).apply_mask(&mask).unwrap();
            let engine = comp.subtracted.apply_mask(&mask).unwrap();
            worst_replica = worst_replica.max(engine.max_abs_diff(&oracle).unwrap() / scale);
        }
    }
    let line = format!(
        "2D procedure vs onion peeling worst rel diff {worst_fast:.2e}; replica-sum subtraction worst rel diff {worst_replica:.2e}"
    );
    if worst_fast <= RECON_TOL && worst_replica <= RECON_TOL {
        Ok(line)
    } else {
        Err(line)
    }
}

fn criterion_9() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for cfg in [
        Config::new(&[1, 1], &[2, 2], &[8, 8], "10,01"),
        Config::new(&[1, 1, 1], &[2, 2, 2], &[4, 4, 4], "100,010,001"),
    ] {
        let c = cfg.collection();
        let x = bandlimit(&random_image(&cfg.extents, 9), &c).unwrap();
        let ss = extract_samples(&x, &c).unwrap();
        let diff = solve_reconstruct(&ss)
            .unwrap()
            .max_abs_diff(&reconstruct(&ss).unwrap())
            .unwrap();
        ok &= diff <= ORACLE_TOL;
        parts.push(format!("oracle vs engine {} diff {diff:.2e}", cfg.label()));
    }
    for cfg in criterion1_configs().iter().chain(&criterion2_configs()) {
        if cfg.extents.iter().product::<usize>() > ORACLE_MAX_POINTS {
            continue;
        }
        let c = cfg.collection();
        let ss = extract_samples(&Grid::zeros(&cfg.extents, Domain::Spatial), &c).unwrap();
        let r = rank_report(&ss).unwrap();
        ok &= r.full_column_rank();
        parts.push(format!("{}: rows {} cols {} rank {}", cfg.label(), r.rows, r.cols, r.rank));
    }
    let line = parts.join("; ");
    if ok {
        Ok(line)
    } else {
        Err(line)
    }
}

fn criterion_10() -> Outcome {
    let mut configs = 0;
    for d in 1..=3usize {
        let ks: Vec<Vec<u64>> = IndexIter::new(&vec![3; d])
            .map(|idx| idx.iter().map(|&i| i as u64 + 2).collect())
            .collect();
        for k in ks {
            configs += 1;
            let t: Vec<usize> = k.iter().map(|&ki| 4 * ki as usize).collect();
            let p = ManhattanParams::discrete(&vec![1; d], &k, Some(&t)).unwrap();
            let masks: Vec<(BiStep, FreqMask)> = BiStep::all(d)
                .unwrap()
                .into_iter()
                .map(|b| (b, atom_mask(&b, &p).unwrap()))
                .collect();
            for (i, (bi, mi)) in masks.iter().enumerate() {
                for (bj, mj) in &masks[i + 1..] {
                    if !mi.is_disjoint(mj).unwrap() {
                        return Err(format!("k={k:?}: atoms {bi} and {bj} overlap"));
                    }
                }
            }
            let union = masks
                .iter()
                .fold(FreqMask::empty(&t), |acc, (_, m)| acc.union(m).unwrap());
            if union != nyquist_mask(&t, &vec![1; d]).unwrap() {
                return Err(format!("k={k:?}: atom union differs from dense Nyquist mask"));
            }

            let n = 2 * lcm_all(k.iter().copied()) as i64;
            let all = BiStep::all(d).unwrap();
            for pt in window(d, n) {
                let class = v_class(&p, &pt).unwrap();
                for b in &all {
                    if lattice_contains(&p, b, &pt) != class.is_subset_of(b).unwrap() {
                        return Err(format!("k={k:?}: V-partition fails at {pt:?} for {b}"));
                    }
                }
            }
        }
    }
    Ok(format!(
        "{configs} configs: atoms disjoint, union = dense Nyquist mask; V_b partition exact on periodic windows"
    ))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 perfect reconstruction 2D", criterion_1),
        ("2 perfect reconstruction 3D", criterion_2),
        ("3 perfect reconstruction 4D smoke", criterion_3),
        ("4 density / Table I", criterion_4),
        ("5 Landau identity", criterion_5),
        ("6 sample counting", criterion_6),
        ("7 overlap predicate soundness", criterion_7),
        ("8 procedure cross-validation", criterion_8),
        ("9 brute-force oracle and rank", criterion_9),
        ("10 partition laws", criterion_10),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(detail) => {
                println!("FAIL  criterion {name}: {detail}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn comb_helpers_cover_closure() {
    // sanity: every closure member of the acceptance collections can be combed
    for cfg in criterion2_configs() {
        let c = cfg.collection();
        let ss = extract_samples(&random_image(&cfg.extents, 1), &c).unwrap();
        for b in c.closure().members() {
            assert!(comb_from_samples(&ss, b).is_ok());
        }
    }
}
