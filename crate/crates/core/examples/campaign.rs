//! A small verification campaign over every family and catalog.

use hh_simplex::campaign::write_report;
use hh_simplex::prelude::*;

fn main() -> hh_simplex::Result<()> {
    let cfg = CampaignConfig {
        dimensions: vec![1, 2, 3],
        simplices_per_dim: 4,
        mc_samples: 5_000,
        seed: 2024,
        ..CampaignConfig::default()
    };
    let report = run_campaign(&cfg)?;
    println!("{}", report.summary());

    let worst = report
        .cases
        .iter()
        .filter(|c| c.positive)
        .min_by(|a, b| a.report.worst_margin().total_cmp(&b.report.worst_margin()))
        .expect("non-empty campaign");
    println!("tightest case: n={} {} ({}), margin {:.3e}", worst.dim, worst.function, worst.report.family, worst.report.worst_margin());

    let mut csv = Vec::new();
    write_report(&report, OutputFormat::Csv, &mut csv)?;
    let text = String::from_utf8(csv).expect("csv is utf-8");
    for line in text.lines().take(4) {
        println!("{line}");
    }
    std::process::exit(report.exit_code());
}
