//! Seeded correlation campaign between P-complete and Q-complete families.

use isecode::correlation::{default_rhos, patterns, run_campaign, CampaignConfig};
use isecode::SpaceParams;

fn main() -> isecode::Result<()> {
    for (s, n) in [(2, 4), (3, 3), (3, 4)] {
        let size = SpaceParams::new(s, n)?.size();
        for (p, q) in patterns(s) {
            let report = run_campaign(&CampaignConfig {
                s,
                n,
                p,
                q,
                trials: 500,
                first_seed: 0,
                rhos: default_rhos(size),
            })?;
            let strict = report.trials.iter().filter(|t| t.slack > 0).count();
            println!(
                "s={s} n={n} P={p} Q={q}: {} violations, {strict} strict of {}, min slack {:?}",
                report.violations,
                report.trials.len(),
                report.min_slack
            );
        }
    }
    Ok(())
}
