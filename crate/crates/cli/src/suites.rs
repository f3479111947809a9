//! `verify` suites. Table-level suites print a `CheckReport`; the census
//! suites print their result and send the mismatch report to stderr.

use std::path::PathBuf;

use anyhow::bail;
use exotic_core::bicomb::bipartitions_of;
use exotic_core::census::{
    closure_shadow_mismatches, klyachko_census, log_coherence, orbit_census, random_symplectic,
    strata_mismatches, CensusOptions,
};
use exotic_core::classify::{parabolic_applies, parabolic_expected, Stabilizers};
use exotic_core::springer::{
    d_difference_check, determine_correspondence, determine_report, sum_squares_check, verify_restriction,
};
use exotic_core::symplectic::normal_form_pair;
use exotic_core::{CheckReport, NodeCase, SymplecticSpace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{json, Suite};

pub struct SuiteConfig {
    pub suite: Suite,
    pub n: usize,
    pub p: u64,
    pub jobs: Option<usize>,
    pub checkpoint: Option<PathBuf>,
    pub seed: Option<u64>,
    pub domain_only: bool,
    pub inject_mismatch: bool,
}

fn name(suite: Suite) -> &'static str {
    match suite {
        Suite::Restriction => "restriction",
        Suite::DDiff => "d-diff",
        Suite::SumSquares => "sum-squares",
        Suite::Determine => "determine",
        Suite::Census => "census",
        Suite::Klyachko => "klyachko",
        Suite::Parabolic => "parabolic",
        Suite::Log => "log",
    }
}

/// Returns the text for stdout and whether every check passed.
pub fn run(cfg: &SuiteConfig) -> anyhow::Result<(String, bool)> {
    let (primary, mut report) = match cfg.suite {
        Suite::Restriction | Suite::DDiff if cfg.n < 2 => bail!("--suite {} needs --n >= 2", name(cfg.suite)),
        Suite::Restriction => (None, verify_restriction(cfg.n)?),
        Suite::DDiff => (None, d_difference_check(cfg.n)?),
        Suite::SumSquares => {
            let mut r = CheckReport::new("sum-squares");
            let (sum, order) = sum_squares_check(cfg.n);
            r.compare(format!("n={}", cfg.n), order.to_string(), sum.to_string());
            (None, r)
        }
        Suite::Determine => (None, determine(cfg.n)),
        Suite::Census => census(cfg)?,
        Suite::Klyachko => klyachko(cfg)?,
        Suite::Log => log(cfg)?,
        Suite::Parabolic => (None, parabolic(cfg)?),
    };
    if cfg.inject_mismatch {
        report.compare("injected", 0, 1);
    }
    let passed = report.passed();
    match primary {
        None => Ok((json(&report)?, passed)),
        Some(out) => {
            if !passed {
                eprint!("{}", json(&report)?);
            }
            Ok((out, passed))
        }
    }
}

fn determine(n: usize) -> CheckReport {
    match determine_correspondence(n) {
        Ok(map) => determine_report(&map),
        Err(e) => {
            let mut r = CheckReport::new("determine");
            r.compare(format!("ranks 1..={n}"), "unique assignment".to_string(), e.to_string());
            r
        }
    }
}

fn census(cfg: &SuiteConfig) -> anyhow::Result<(Option<String>, CheckReport)> {
    let conjugate_by = match cfg.seed {
        Some(seed) => {
            let space = SymplecticSpace::new(cfg.n, cfg.p)?;
            Some(random_symplectic(&space, &mut ChaCha8Rng::seed_from_u64(seed), 20))
        }
        None => None,
    };
    let options = CensusOptions {
        jobs: cfg.jobs,
        checkpoint: cfg.checkpoint.clone(),
        conjugate_by,
        ..CensusOptions::default()
    };
    let result = orbit_census(cfg.n, cfg.p, &options)?;
    let mut r = CheckReport::new("census");
    let found: Vec<String> = result.labels.keys().map(ToString::to_string).collect();
    let expected: Vec<String> = bipartitions_of(cfg.n).iter().map(ToString::to_string).collect();
    r.compare("labels", expected, found);
    r.compare("complete", true, result.complete);
    for c in &result.orbit_checks {
        r.compare(format!("{} count", c.label), c.predicted, c.count);
        r.compare(format!("{} transitive", c.label), true, c.transitive);
    }
    for (m, want, got) in strata_mismatches(&result) {
        r.compare(format!("stratum {m}"), labels(&want), labels(&got));
    }
    for (m, want, got) in closure_shadow_mismatches(&result)? {
        r.compare(format!("closure shadow {m}"), labels(&want), labels(&got));
    }
    Ok((Some(json(&result)?), r))
}

fn labels(ls: &[exotic_core::Bipartition]) -> Vec<String> {
    ls.iter().map(ToString::to_string).collect()
}

fn klyachko(cfg: &SuiteConfig) -> anyhow::Result<(Option<String>, CheckReport)> {
    let k = klyachko_census(cfg.n, cfg.p)?;
    let mut r = CheckReport::new("klyachko");
    r.compare("orbits vs GL classes", k.gl_classes, k.orbits);
    r.compare("every orbit meets the image", true, k.every_orbit_meets_image);
    Ok((Some(json(&k)?), r))
}

fn log(cfg: &SuiteConfig) -> anyhow::Result<(Option<String>, CheckReport)> {
    let l = log_coherence(cfg.n, cfg.p, cfg.jobs)?;
    let mut r = CheckReport::new("log");
    for (label, count) in &l.lie {
        r.compare(label.to_string(), Some(*count), l.group.get(label).copied());
    }
    for label in l.group.keys().filter(|k| !l.lie.contains_key(*k)) {
        r.compare(label.to_string(), None, l.group.get(label).copied());
    }
    Ok((Some(json(&l)?), r))
}

fn parabolic(cfg: &SuiteConfig) -> anyhow::Result<CheckReport> {
    let st = Stabilizers::new(SymplecticSpace::new(cfg.n, cfg.p)?);
    let mut r = CheckReport::new("parabolic");
    for l in bipartitions_of(cfg.n) {
        let nf = normal_form_pair(&l, st.space())?;
        let z = st.stabilizer_dim(&nf.pair, true);
        for i in 1..=nf.blocks.len() {
            for case in [NodeCase::INode, NodeCase::IiNode] {
                if cfg.domain_only && !parabolic_applies(&nf, i, case)? {
                    continue;
                }
                let got = st.parabolic_stabilizer_dim(&nf, i, case)? as i64;
                r.compare(format!("{l} i={i} {case:?}"), parabolic_expected(z, &nf, i, case)?, got);
            }
        }
    }
    Ok(r)
}
