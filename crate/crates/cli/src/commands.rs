use std::fs;
use std::io::BufWriter;
use std::path::Path;

use anyhow::{bail, Context, Result};
use log::{debug, info};
use manhattan::formats::{
    read_image, read_mhs1, write_mask_mht1, write_mask_pgm, write_mhs1, write_mht1, write_pgm,
    write_pgm_scaled, Dtype,
};
use manhattan::freq::{atom_mask, manhattan_region_volume, region_mask, AtomSpec};
use manhattan::oracle::solve_reconstruct;
use manhattan::reconstruct::{bandlimit, reconstruct, reconstruct_2d_fast, spectrum_report};
use manhattan::sampler::extract_samples;
use manhattan::{BiStep, Collection, Grid, ManhattanParams};
use num::{BigRational, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::args::{
    FilterArgs, Format, GenerateArgs, Kind, MaskArgs, Method, ParamArgs, ReconstructArgs,
    SampleArgs, SpectrumArgs,
};

/// Command-line level failures, mapped to exit codes in `main`.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Verification(String),
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    CliError::Usage(msg.into()).into()
}

fn parse_list<T: std::str::FromStr>(text: &str, flag: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<T>()
                .map_err(|_| usage(format!("invalid value `{}` in {flag}", tok.trim())))
        })
        .collect()
}

fn build_params(args: &ParamArgs, extents: Option<Vec<usize>>) -> Result<Collection> {
    let k: Vec<u64> = parse_list(&args.k, "--k")?;
    let d = args.dims.unwrap_or(k.len());
    if k.len() != d {
        bail!(usage(format!("--k lists {} factors but --dims is {d}", k.len())));
    }
    let lambda: Vec<BigRational> = match &args.lambda {
        Some(text) => parse_list(text, "--lambda")?,
        None => vec![BigRational::from_integer(1.into()); d],
    };
    if lambda.len() != d {
        bail!(usage(format!("--lambda lists {} spacings but --dims is {d}", lambda.len())));
    }
    let params = ManhattanParams::new(lambda, k, None)?;
    let params = match extents {
        Some(t) => params.with_extents(t)?,
        None => params,
    };
    Ok(Collection::parse(params, &args.collection)?)
}

fn output_format(path: &Path, explicit: Option<Format>) -> Format {
    explicit.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
        Some("pgm") => Format::Pgm,
        Some("mhs") | Some("mhs1") => Format::Mhs1,
        _ => Format::Mht1,
    })
}

fn load_image(path: &Path) -> Result<Grid> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let grid = read_image(&bytes)?;
    debug!("read {} with extents {:?}", path.display(), grid.extents());
    Ok(grid)
}

fn save_image(path: &Path, grid: &Grid, format: Format, rescale: bool) -> Result<()> {
    let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let w = BufWriter::new(file);
    match format {
        Format::Pgm if rescale => write_pgm_scaled(w, grid)?,
        Format::Pgm => write_pgm(w, grid)?,
        Format::Mht1 => write_mht1(w, grid, Dtype::Real)?,
        Format::Mhs1 => bail!(usage("images cannot be written as MHS1")),
    }
    info!("wrote {}", path.display());
    Ok(())
}

fn decimal(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn info(args: &ParamArgs) -> Result<()> {
    let c = build_params(args, None)?;
    let closure = c.closure();
    let density = c.density();
    let volume = manhattan_region_volume(&c);
    println!("collection:   {c}");
    println!("closure:      {closure} ({} members)", closure.members().len());
    println!("minimal:      {}", c.minimal());
    println!("density:      {density} ≈ {:.10}", decimal(&density));
    println!("cell count:   {} samples per fundamental cell", c.fundamental_cell_count());
    println!("atom volumes:");
    for b in closure.members() {
        let v = AtomSpec::new(*b, c.params().clone())?.volume();
        println!("  {b}  {v} ≈ {:.10}", decimal(&v));
    }
    let verdict = if volume == density { "holds" } else { "FAILS" };
    println!("region volume: {volume}; Landau identity {verdict}");
    if volume != density {
        bail!(CliError::Verification("region volume differs from density".into()));
    }
    Ok(())
}

pub fn generate(args: &GenerateArgs) -> Result<()> {
    let extents: Vec<usize> = parse_list(&args.size, "--size")?;
    if extents.is_empty() || extents.contains(&0) {
        bail!(usage("--size needs positive extents"));
    }
    let n: usize = extents.iter().product();
    let data: Vec<f64> = match args.kind {
        Kind::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            (0..n).map(|_| rng.random_range(0.0..255.0)).collect()
        }
        Kind::Constant => vec![args.value; n],
        Kind::Impulse => {
            let mut v = vec![0.0; n];
            v[0] = 1.0;
            v
        }
    };
    let grid = Grid::from_real(&extents, &data)?;
    save_image(&args.output, &grid, output_format(&args.output, args.format), false)
}

pub fn bandlimit_cmd(args: &FilterArgs) -> Result<()> {
    let image = load_image(&args.input)?;
    let c = build_params(&args.params, Some(image.extents().to_vec()))?;
    let filtered = bandlimit(&image, &c)?;
    save_image(&args.output, &filtered, output_format(&args.output, args.format), false)
}

pub fn sample(args: &SampleArgs) -> Result<()> {
    let image = load_image(&args.input)?;
    let c = build_params(&args.params, Some(image.extents().to_vec()))?;
    let ss = extract_samples(&image, &c)?;
    let file = fs::File::create(&args.samples)
        .with_context(|| format!("creating {}", args.samples.display()))?;
    write_mhs1(BufWriter::new(file), &ss)?;
    info!("wrote {} samples to {}", ss.len(), args.samples.display());
    Ok(())
}

pub fn reconstruct_cmd(args: &ReconstructArgs) -> Result<()> {
    let file = fs::File::open(&args.samples)
        .with_context(|| format!("reading {}", args.samples.display()))?;
    let ss = read_mhs1(std::io::BufReader::new(file))?;
    info!("read {} samples, collection {}", ss.len(), ss.collection());
    let image = match args.method {
        Method::Onion => reconstruct(&ss)?,
        Method::Fast => reconstruct_2d_fast(&ss)?,
        Method::Oracle => solve_reconstruct(&ss)?,
    };
    save_image(&args.output, &image, output_format(&args.output, args.format), false)?;
    if let Some(reference) = &args.reference {
        let expected = load_image(reference)?;
        let err = image.rel_max_error(&expected)?;
        let verdict = if err <= args.tolerance { "PASS" } else { "FAIL" };
        println!(
            "{verdict} reconstruction rel max error {err:.3e} (tolerance {:.0e})",
            args.tolerance
        );
        if err > args.tolerance {
            bail!(CliError::Verification(format!(
                "reconstruction error {err:.3e} exceeds {:.0e}",
                args.tolerance
            )));
        }
    }
    Ok(())
}

pub fn spectrum(args: &SpectrumArgs) -> Result<()> {
    let image = load_image(&args.input)?;
    let map = spectrum_report(&image);
    save_image(&args.output, &map, output_format(&args.output, args.format), true)
}

pub fn mask(args: &MaskArgs) -> Result<()> {
    let extents: Vec<usize> = parse_list(&args.size, "--size")?;
    let c = build_params(&args.params, Some(extents))?;
    let mask = match &args.atom {
        Some(text) => {
            let b: BiStep = text.parse()?;
            atom_mask(&b, c.params())?
        }
        None => region_mask(&c)?,
    };
    let file = fs::File::create(&args.output)
        .with_context(|| format!("creating {}", args.output.display()))?;
    let w = BufWriter::new(file);
    match output_format(&args.output, args.format) {
        Format::Pgm => write_mask_pgm(w, &mask)?,
        Format::Mht1 => write_mask_mht1(w, &mask)?,
        Format::Mhs1 => bail!(usage("masks cannot be written as MHS1")),
    }
    info!("wrote mask with {} kept bins", mask.count());
    Ok(())
}
