use std::path::PathBuf;
use std::process::ExitCode;

use bsa::analysis::{run_analysis, AnalysisConfig, AnalysisMethod};
use bsa::equi::{generate_equi, EquiConfig};
use bsa::io::{curve_csv, manifold_kind, write_text, DatasetFile};
use bsa::signature::{hyperbolic_preset, signature_map, sphere_preset, Grid};
use bsa::triads::ingest_triads;
use bsa::{Error, Result};
use bsa_core::barycentric::{CriticalClass, RankTolerance, ReferenceConfiguration};
use bsa_core::flags::DEFAULT_BUDGET;
use bsa_core::{hyperbolic, Manifold};
use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DVector;

#[derive(Parser)]
#[command(name = "bsa", version, about = "Barycentric subspace analysis on spheres, hyperbolic and Euclidean spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset.
    Generate {
        #[command(subcommand)]
        what: Generate,
    },
    /// Convert external data to a dataset file.
    Ingest {
        #[command(subcommand)]
        what: Ingest,
    },
    /// Run FBS, k-PBS, k-BSA or the Euclidean PCA flag on a dataset.
    Analyze {
        dataset: PathBuf,
        #[arg(long, default_value = "bsa")]
        method: AnalysisMethod,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Expected manifold kind of the dataset.
        #[arg(long)]
        manifold: Option<Kind>,
        #[arg(long)]
        out: PathBuf,
        /// Per-level variance curve CSV.
        #[arg(long)]
        curve: Option<PathBuf>,
        #[arg(long)]
        serial: bool,
    },
    /// Critical point signature map of three reference points on S^2 or H^2.
    Signature {
        #[arg(long, default_value = "sphere")]
        manifold: Kind,
        /// Named configuration (sphere: axes, spread, cluster; hyperbolic: triangle, skewed, wide).
        #[arg(long)]
        config: Option<String>,
        /// Reference points `a,b,c;d,e,f;g,h,i` (embedding coordinates on the
        /// sphere, Weierstrass coordinates on the hyperbolic plane).
        #[arg(long)]
        refs: Option<String>,
        /// Relative rank tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Half width of the Weierstrass box on the hyperbolic plane.
        #[arg(long, default_value_t = 10.0)]
        half_width: f64,
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        cols: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Euclidean PCA flag with direct and closed-form AUV.
    PcaFlag {
        dataset: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum Generate {
    /// Noisy samples of an equilateral spherical triangle.
    Equi {
        #[arg(long, default_value_t = 30)]
        n_points: usize,
        #[arg(long, default_value_t = 6)]
        ambient_dim: usize,
        /// Side length in degrees.
        #[arg(long, default_value_t = 90.0)]
        side_deg: f64,
        #[arg(long, default_value_t = 10.0)]
        sigma_deg: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum Ingest {
    /// Planar landmark triads to Kendall shapes on S^2.
    Triads {
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Sphere,
    Hyperbolic,
    Euclidean,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Sphere => "sphere",
            Kind::Hyperbolic => "hyperbolic",
            Kind::Euclidean => "euclidean",
        }
    }
}

fn parse_refs(text: &str, kind: Kind) -> Result<ReferenceConfiguration> {
    let mut pts = Vec::new();
    for (i, chunk) in text.split(';').enumerate() {
        let vals = chunk
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::Invalid(format!("reference {}: {e}", i + 1)))?;
        let p = match (kind, vals.len()) {
            (Kind::Sphere, 3) => Manifold::Sphere(2).project(DVector::from_vec(vals))?,
            (Kind::Hyperbolic, 2) => Manifold::Hyperbolic(2).project(hyperbolic::from_weierstrass(&vals))?,
            _ => return Err(Error::Invalid(format!("reference {} has the wrong number of coordinates", i + 1))),
        };
        pts.push(p);
    }
    Ok(ReferenceConfiguration::new(pts)?)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { what: Generate::Equi { n_points, ambient_dim, side_deg, sigma_deg, seed, out } } => {
            let cfg = EquiConfig {
                n_points,
                ambient_dim,
                side: side_deg.to_radians(),
                sigma: sigma_deg.to_radians(),
                seed,
            };
            generate_equi(&cfg)?.save(&out)?;
        }
        Command::Ingest { what: Ingest::Triads { input, out } } => {
            ingest_triads(&input)?.save(&out)?;
        }
        Command::Analyze { dataset, method, k, budget, seed, manifold, out, curve, serial } => {
            let data = DatasetFile::load(&dataset)?;
            if let Some(kind) = manifold {
                if kind.name() != manifold_kind(data.manifold) {
                    return Err(Error::Invalid(format!(
                        "dataset is on a {} manifold, expected {}",
                        manifold_kind(data.manifold),
                        kind.name()
                    )));
                }
            }
            let cfg = AnalysisConfig { method, k, budget, seed, parallel: !serial };
            let (result, file) = run_analysis(&data, &cfg)?;
            file.save(&out)?;
            if let Some(curve) = curve {
                write_text(&curve, &curve_csv(&result))?;
            }
            println!("{} k={} auv={:.6e} references={:?}", file.method, k, file.auv, file.reference_indices);
        }
        Command::Signature { manifold, config, refs, tol, half_width, rows, cols, out } => {
            let cfg = match (refs, manifold) {
                (Some(r), _) => parse_refs(&r, manifold)?,
                (None, Kind::Sphere) => sphere_preset(config.as_deref().unwrap_or("axes"))?,
                (None, Kind::Hyperbolic) => hyperbolic_preset(config.as_deref().unwrap_or("skewed"))?,
                (None, Kind::Euclidean) => return Err(Error::Invalid("signature maps need the sphere or hyperbolic plane".into())),
            };
            let grid = match manifold {
                Kind::Sphere => Grid::Sphere { rows: rows.unwrap_or(100), cols: cols.unwrap_or(200) },
                _ => Grid::Weierstrass { half_width, rows: rows.unwrap_or(100), cols: cols.unwrap_or(200) },
            };
            let tol = RankTolerance { rel: tol, ..RankTolerance::default() };
            let map = signature_map(&cfg, grid, tol, true)?;
            write_text(&out, &map.to_csv())?;
            println!(
                "indices={:?} local_min={} saddle={} degenerate={} local_min_components={} unverified_minima={}",
                map.indices(),
                map.count(CriticalClass::LocalMin),
                map.count(CriticalClass::Saddle),
                map.count(CriticalClass::Degenerate),
                map.components(CriticalClass::LocalMin),
                map.unverified_minima()
            );
        }
        Command::PcaFlag { dataset, k, out } => {
            let data = DatasetFile::load(&dataset)?;
            let (_, file) = run_analysis(&data, &AnalysisConfig::new(AnalysisMethod::PcaFlag, k))?;
            file.save(&out)?;
            let p = file.pca.as_ref().expect("pca summary");
            println!("direct_auv={:.16e} closed_form_auv={:.16e}", p.direct_auv, p.closed_form_auv);
            if p.degenerate_spectrum {
                eprintln!("warning: repeated covariance eigenvalues, the PCA flag is not unique");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
