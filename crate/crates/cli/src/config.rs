//! Command-line surface. The parsed subcommand is the job configuration and
//! is echoed verbatim in every report.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use poincare::verify::{Mode, DEFAULT_SEED};
use poincare::{BBox, Point};
use serde::Serialize;

use crate::args::{
    parse_bbox, parse_number_list, parse_point, parse_positive, parse_query, parse_spacings,
    NumberList, QueryPoint,
};

#[derive(Debug, Parser)]
#[command(
    name = "poincare",
    version,
    about = "Hyperbolic metric densities, Poincaré capacity and submultiplicativity checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub job: JobConfig,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum JobConfig {
    /// Density λ_Ω at points, from a closed form or a grid solve.
    Density(DensityArgs),
    /// Poincaré capacity of a compact set.
    Pcap(PcapArgs),
    /// Check λ₁λ₂ ≥ λ_∪λ_∩, the weak 1/√2 form, or capacity submultiplicativity.
    Verify(VerifyArgs),
    /// λ_Ω/λ_U along a radial approach to a boundary point of U.
    BoundaryRatio(BoundaryRatioArgs),
    /// Curvature residual and its convergence order for a catalog metric.
    CurvatureCheck(CurvatureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Oracle,
    Pde,
    Mixed,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Oracle => Mode::Oracle,
            ModeArg::Pde => Mode::Pde,
            ModeArg::Mixed => Mode::Mixed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartArg {
    Identity,
    Inversion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    /// λ₁λ₂ ≥ λ_∪λ_∩ on the intersection.
    Theorem,
    /// Product-metric curvature ≥ −2 and ratio ≥ 1/√2.
    Weak,
    /// pcap(K₁∪K₂)·pcap(K₁∩K₂) ≤ pcap(K₁)·pcap(K₂).
    Capacity,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Output {
    /// Write the JSON report here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DensityArgs {
    /// Region file (JSON).
    #[arg(long, conflicts_with = "catalog", required_unless_present = "catalog")]
    pub region: Option<PathBuf>,
    /// Catalog tag such as `disk:0,0,2`, evaluated in closed form.
    #[arg(long)]
    pub catalog: Option<String>,
    /// Query point `x,y` or `inf`; repeatable.
    #[arg(long, required = true, value_parser = parse_query, allow_hyphen_values = true)]
    pub point: Vec<QueryPoint>,
    /// Grid spacing for a single solve.
    #[arg(long, default_value = "1/64", value_parser = parse_positive)]
    pub h: f64,
    /// Spacings for refinement and extrapolation, coarse to fine; replaces --h.
    #[arg(long, value_parser = parse_spacings)]
    pub levels: Option<NumberList>,
    /// Where region densities come from.
    #[arg(long, value_enum, default_value = "pde")]
    pub mode: ModeArg,
    /// Solve chart; defaults to inversion for unbounded regions.
    #[arg(long, value_enum)]
    pub chart: Option<ChartArg>,
    /// Inversion center `x,y`.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub center: Option<Point>,
    /// Solve window `xmin,xmax,ymin,ymax` in chart coordinates.
    #[arg(long, value_parser = parse_bbox, allow_hyphen_values = true)]
    pub bbox: Option<BBox>,
    /// Write the solved field as CSV.
    #[arg(long)]
    pub dump_field: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PcapArgs {
    /// Compact set file (JSON).
    #[arg(long)]
    pub compact: PathBuf,
    /// Chart spacings, coarse to fine.
    #[arg(long, default_value = "1/16,1/32,1/64", value_parser = parse_spacings)]
    pub levels: NumberList,
    /// Chart window `xmin,xmax,ymin,ymax`; chosen from K by default.
    #[arg(long, value_parser = parse_bbox, allow_hyphen_values = true)]
    pub bbox: Option<BBox>,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "theorem")]
    pub check: CheckKind,
    /// First region file (theorem and weak checks).
    #[arg(long, required_unless_present = "compact1")]
    pub region1: Option<PathBuf>,
    #[arg(long, required_unless_present = "compact2")]
    pub region2: Option<PathBuf>,
    /// First compact set file (capacity check).
    #[arg(long, conflicts_with = "region1")]
    pub compact1: Option<PathBuf>,
    #[arg(long, conflicts_with = "region2")]
    pub compact2: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "mixed")]
    pub mode: ModeArg,
    /// Shared grid spacing for pde solves.
    #[arg(long, default_value = "1/64", value_parser = parse_positive)]
    pub h: f64,
    /// Capacity spacings, coarse to fine.
    #[arg(long, default_value = "1/16,1/32,1/64", value_parser = parse_spacings)]
    pub levels: NumberList,
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
    #[arg(long, default_value = "5e-3", value_parser = parse_positive)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Shared solve window.
    #[arg(long, value_parser = parse_bbox, allow_hyphen_values = true)]
    pub bbox: Option<BBox>,
    /// Sampling window for unbounded regions.
    #[arg(long, value_parser = parse_bbox, allow_hyphen_values = true)]
    pub window: Option<BBox>,
    /// Directory for CSV dumps of the solved fields.
    #[arg(long)]
    pub dump_field: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BoundaryRatioArgs {
    /// The larger region Ω.
    #[arg(long)]
    pub omega: PathBuf,
    /// The smaller region U ⊆ Ω.
    #[arg(long)]
    pub u: PathBuf,
    /// Boundary point ξ of U.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub xi: Point,
    /// Approach along the ray from ξ toward this point.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub toward: Point,
    #[arg(long, default_value = "1e-1,1e-2,1e-3", value_parser = parse_number_list)]
    pub distances: NumberList,
    #[arg(long, value_enum, default_value = "mixed")]
    pub mode: ModeArg,
    #[arg(long, default_value = "1/64", value_parser = parse_positive)]
    pub h: f64,
    #[arg(long, value_parser = parse_bbox, allow_hyphen_values = true)]
    pub bbox: Option<BBox>,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CurvatureArgs {
    /// Catalog tag.
    #[arg(long)]
    pub catalog: String,
    /// Stencil spacings, coarse to fine.
    #[arg(long, default_value = "1e-2,5e-3,2.5e-3", value_parser = parse_spacings)]
    pub levels: NumberList,
    /// Explicit sample point `x,y`; repeatable.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub point: Vec<Point>,
    /// Number of random samples drawn from --window when no points are given.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, value_parser = parse_bbox, allow_hyphen_values = true, required_unless_present = "point")]
    pub window: Option<BBox>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: Output,
}

impl JobConfig {
    pub fn output(&self) -> Option<&PathBuf> {
        match self {
            JobConfig::Density(a) => a.out.output.as_ref(),
            JobConfig::Pcap(a) => a.out.output.as_ref(),
            JobConfig::Verify(a) => a.out.output.as_ref(),
            JobConfig::BoundaryRatio(a) => a.out.output.as_ref(),
            JobConfig::CurvatureCheck(a) => a.out.output.as_ref(),
        }
    }
}
