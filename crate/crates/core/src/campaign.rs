//! Verification campaigns: every family × function × random simplex, with
//! an aggregate verdict. Output is deterministic for a fixed seed; cases run
//! in parallel but are reported in configuration order.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{run_family, BoundReport, Family, IntegratorConfig, Status};
use crate::catalog::standard_catalog;
use crate::error::{HhError, Result};
use crate::functions::{FunctionDescriptor, FunctionSpec};
use crate::simplex::{random_simplex, SimplexDescriptor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = HhError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(HhError::InvalidParameter(format!("unknown format {other:?}"))),
        }
    }
}

fn all_families() -> Vec<Family> {
    Family::ALL.to_vec()
}

/// Campaign configuration, also the JSON config file format.
///
/// An empty `function_catalog` means the standard random catalog for each
/// dimension. Explicit descriptors whose dimension differs from `n` are
/// skipped for that `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    #[serde(default = "all_families")]
    pub families: Vec<Family>,
    pub dimensions: Vec<usize>,
    pub simplices_per_dim: usize,
    #[serde(default)]
    pub function_catalog: Vec<FunctionDescriptor>,
    pub mc_samples: usize,
    pub seed: u64,
    #[serde(default)]
    pub output_path: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            families: all_families(),
            dimensions: vec![1, 2, 3, 4],
            simplices_per_dim: 25,
            function_catalog: Vec::new(),
            mc_samples: 20_000,
            seed: 0,
            output_path: None,
            format: OutputFormat::Json,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if self.simplices_per_dim < 1 {
            return Err(HhError::InvalidConfig("simplices_per_dim must be at least 1".into()));
        }
        if self.mc_samples < 100 {
            return Err(HhError::InvalidConfig("mc_samples must be at least 100".into()));
        }
        if self.dimensions.is_empty() || self.dimensions.contains(&0) {
            return Err(HhError::InvalidConfig("dimensions must be non-empty and all >= 1".into()));
        }
        if self.families.is_empty() {
            return Err(HhError::InvalidConfig("no families selected".into()));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// One (simplex, function, family) evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub dim: usize,
    pub simplex_index: usize,
    pub simplex: SimplexDescriptor,
    pub function: String,
    pub class: String,
    pub positive: bool,
    pub report: BoundReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub total: usize,
    pub holds: usize,
    pub violated: usize,
    pub inconclusive: usize,
    /// Violations among cases whose hypotheses hold; must be zero.
    pub positive_violated: usize,
    /// Violations among negative controls; expected to be positive.
    pub control_violated: usize,
    /// Smallest margin over positive-class cases.
    pub worst_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub seed: u64,
    pub aggregate: Aggregate,
    pub cases: Vec<CaseRecord>,
}

impl CampaignReport {
    /// 0 when no positive-class case is violated, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.aggregate.positive_violated == 0 {
            0
        } else {
            2
        }
    }

    pub fn summary(&self) -> String {
        let a = &self.aggregate;
        format!(
            "{} cases: {} holds, {} violated ({} positive-class, {} controls), {} inconclusive; worst positive margin {:.3e}",
            a.total, a.holds, a.violated, a.positive_violated, a.control_violated, a.inconclusive, a.worst_margin
        )
    }
}

fn derive_seed(seed: u64, dim: usize, index: usize) -> u64 {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for v in [dim as u64, index as u64] {
        h = (h ^ v).wrapping_mul(0x1000_0000_01b3).rotate_left(23);
    }
    h
}

fn catalog_for(config: &CampaignConfig, n: usize) -> Result<Vec<FunctionSpec>> {
    if config.function_catalog.is_empty() {
        return Ok(standard_catalog(n, config.seed));
    }
    let mut out = Vec::new();
    for desc in &config.function_catalog {
        let f = desc.build()?;
        if f.accepts_dim(n) {
            out.push(f);
        }
    }
    Ok(out)
}

pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignReport> {
    config.validate()?;
    let mut jobs = Vec::new();
    for &n in &config.dimensions {
        let catalog = catalog_for(config, n)?;
        for index in 0..config.simplices_per_dim {
            jobs.push((n, index, catalog.clone()));
        }
    }

    let per_simplex: Vec<Result<Vec<CaseRecord>>> = jobs
        .into_par_iter()
        .map(|(n, index, catalog)| {
            let case_seed = derive_seed(config.seed, n, index);
            let simplex = random_simplex(n, case_seed)?;
            let integrator = IntegratorConfig {
                mc_samples: config.mc_samples,
                seed: case_seed,
                prefer_exact: true,
            };
            let mut records = Vec::new();
            for f in &catalog {
                for &family in &config.families {
                    if !family.accepts(f.class()) {
                        continue;
                    }
                    let report = run_family(family, f, &simplex, &integrator)?;
                    records.push(CaseRecord {
                        dim: n,
                        simplex_index: index,
                        simplex: simplex.descriptor(),
                        function: f.label(),
                        class: f.class().to_string(),
                        positive: f.class().is_positive(),
                        report,
                    });
                }
            }
            Ok(records)
        })
        .collect();

    let mut cases = Vec::new();
    for chunk in per_simplex {
        cases.extend(chunk?);
    }

    let mut agg = Aggregate {
        total: cases.len(),
        holds: 0,
        violated: 0,
        inconclusive: 0,
        positive_violated: 0,
        control_violated: 0,
        worst_margin: f64::INFINITY,
    };
    for case in &cases {
        match case.report.status {
            Status::Holds => agg.holds += 1,
            Status::Inconclusive => agg.inconclusive += 1,
            Status::Violated => {
                agg.violated += 1;
                if case.positive {
                    agg.positive_violated += 1;
                } else {
                    agg.control_violated += 1;
                }
            }
        }
        if case.positive {
            agg.worst_margin = agg.worst_margin.min(case.report.worst_margin());
        }
    }
    if !agg.worst_margin.is_finite() {
        agg.worst_margin = 0.0;
    }

    Ok(CampaignReport {
        seed: config.seed,
        aggregate: agg,
        cases,
    })
}

#[derive(Serialize)]
struct CsvRow<'a> {
    dim: usize,
    simplex_index: usize,
    function: &'a str,
    class: &'a str,
    family: &'a str,
    lower: f64,
    middle: f64,
    kind: &'a str,
    std_error: f64,
    upper: f64,
    margin_lower: f64,
    margin_upper: f64,
    status: String,
    guard: f64,
}

/// Writes the report as pretty JSON or as one CSV row per case.
pub fn write_report<W: Write>(report: &CampaignReport, format: OutputFormat, out: W) -> Result<()> {
    match format {
        OutputFormat::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, report)?;
            writeln!(out)?;
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for c in &report.cases {
                let r = &c.report;
                w.serialize(CsvRow {
                    dim: c.dim,
                    simplex_index: c.simplex_index,
                    function: &c.function,
                    class: &c.class,
                    family: r.family.name(),
                    lower: r.lower,
                    middle: r.middle.value,
                    kind: if r.middle.is_exact() { "exact" } else { "monte_carlo" },
                    std_error: r.middle.std_error,
                    upper: r.upper,
                    margin_lower: r.margin_lower,
                    margin_upper: r.margin_upper,
                    status: r.status.to_string(),
                    guard: r.guard,
                })?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> CampaignConfig {
        CampaignConfig {
            dimensions: vec![1, 2],
            simplices_per_dim: 2,
            mc_samples: 2000,
            seed: 5,
            ..CampaignConfig::default()
        }
    }

    #[test]
    fn validation() {
        assert!(small().validate().is_ok());
        let bad = CampaignConfig { mc_samples: 10, ..small() };
        assert!(bad.validate().is_err());
        let bad = CampaignConfig { dimensions: vec![0], ..small() };
        assert!(bad.validate().is_err());
        let bad = CampaignConfig { simplices_per_dim: 0, ..small() };
        assert!(run_campaign(&bad).is_err());
    }

    #[test]
    fn config_json_defaults() {
        let cfg = CampaignConfig::from_json(r#"{"dimensions":[2],"simplices_per_dim":3,"mc_samples":500,"seed":1}"#).unwrap();
        assert_eq!(cfg.families.len(), 5);
        assert_eq!(cfg.format, OutputFormat::Json);
        assert!(cfg.function_catalog.is_empty());
    }

    #[test]
    fn small_campaign_is_deterministic_and_clean() {
        let a = run_campaign(&small()).unwrap();
        let b = run_campaign(&small()).unwrap();
        let mut ja = Vec::new();
        let mut jb = Vec::new();
        write_report(&a, OutputFormat::Json, &mut ja).unwrap();
        write_report(&b, OutputFormat::Json, &mut jb).unwrap();
        assert_eq!(ja, jb);
        assert_eq!(a.aggregate.positive_violated, 0, "{}", a.summary());
        assert!(a.aggregate.control_violated > 0);
        assert_eq!(a.exit_code(), 0);
    }

    #[test]
    fn explicit_catalog_skips_other_dimensions() {
        let cfg = CampaignConfig {
            function_catalog: vec![FunctionDescriptor::QuadraticForm { q: vec![vec![1.0]] }],
            families: vec![Family::Classical],
            ..small()
        };
        let report = run_campaign(&cfg).unwrap();
        assert_eq!(report.cases.len(), 2);
        assert!(report.cases.iter().all(|c| c.dim == 1));
    }

    #[test]
    fn csv_output_has_one_row_per_case() {
        let report = run_campaign(&CampaignConfig {
            dimensions: vec![1],
            simplices_per_dim: 1,
            ..small()
        })
        .unwrap();
        let mut buf = Vec::new();
        write_report(&report, OutputFormat::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), report.cases.len() + 1);
        assert!(text.starts_with("dim,simplex_index,function,class,family,"));
    }
}
