//! Enumeration and verification campaigns.
//!
//! A theorem campaign enumerates every sum of `r` parabolic line bundles of
//! parabolic degree `d` within a degree window, adds seeded gauge-twisted
//! copies, and compares the Hom_par certificate with an independent
//! semistability oracle. An identity campaign samples linearized bundles on
//! the cover and checks each identity of the correspondence exactly.
//! Disagreements are recorded as data, never raised as errors.

mod campaign;
mod enumerate;
mod gauge;
pub mod identities;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::Rational;
use crate::io::ParabolicDoc;
use crate::parabolic::ParLineData;
use crate::raynaud::{Mode, RaynaudRequest};

pub use campaign::{find_min_counterexample, run_counterexample_campaign, run_identity_campaign, run_theorem_campaign, Witness};
pub use enumerate::{enumerate_line_sums, enumerate_representatives, Instance};
pub use gauge::random_automorphism;

pub const DEFAULT_DEGREE_WINDOW: u32 = 3;
pub const DEFAULT_GAUGE_SAMPLES: u32 = 20;
pub const DEFAULT_IDENTITY_SAMPLE_SIZE: u32 = 500;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub r: u32,
    #[serde(rename = "N")]
    pub n: u32,
    pub d: Rational,
    pub mode: Mode,
    pub degree_window: u32,
    pub gauge_samples: u32,
    pub seed: u64,
    pub identity_sample_size: u32,
}

impl CampaignConfig {
    /// Defaults for the window, gauge and sample sizes; seed 0.
    pub fn new(r: u32, d: Rational, n: u32, mode: Mode) -> Result<Self> {
        let cfg = CampaignConfig {
            r,
            n,
            d,
            mode,
            degree_window: DEFAULT_DEGREE_WINDOW,
            gauge_samples: DEFAULT_GAUGE_SAMPLES,
            seed: 0,
            identity_sample_size: DEFAULT_IDENTITY_SAMPLE_SIZE,
        };
        cfg.request()?;
        Ok(cfg)
    }

    pub fn with_window(mut self, w: u32) -> Self {
        self.degree_window = w;
        self
    }

    pub fn with_gauge_samples(mut self, g: u32) -> Self {
        self.gauge_samples = g;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_identity_sample_size(mut self, s: u32) -> Self {
        self.identity_sample_size = s;
        self
    }

    pub fn request(&self) -> Result<RaynaudRequest> {
        RaynaudRequest::new(self.r, self.d.clone(), self.n, self.mode)
    }

    /// `floor(d / r)`, the center of the degree window.
    pub fn center_degree(&self) -> Result<i64> {
        (&self.d / Rational::from_int(self.r as i64))
            .floor_i64()
            .ok_or_else(|| Error::domain("slope does not fit in 64 bits"))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityTally {
    pub checked: u64,
    pub failed: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

impl IdentityTally {
    /// Failure descriptions kept per identity.
    const MAX_WITNESSES: usize = 10;

    pub fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < Self::MAX_WITNESSES {
                self.failures.push(describe());
            }
        }
    }

    pub fn merge(&mut self, other: IdentityTally) {
        self.checked += other.checked;
        self.failed += other.failed;
        let room = Self::MAX_WITNESSES.saturating_sub(self.failures.len());
        self.failures.extend(other.failures.into_iter().take(room));
    }

    pub fn is_clean(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub bundle: ParabolicDoc,
    /// Certificate verdict: `true` when `Hom_par(R, E) = 0`.
    pub criterion: bool,
    /// Oracle verdict: `true` when `E` is semistable.
    pub oracle: bool,
    pub hom_par_dim: usize,
    /// Summands of the line-sum representative.
    pub summands: Vec<ParLineData>,
    /// Index of the gauge-twisted copy, absent for the representative.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge_copy: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Outcome of a campaign. Contains no timing data, so identical inputs give
/// byte-identical JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub campaign: String,
    pub config: CampaignConfig,
    pub checked: u64,
    pub agreements: u64,
    pub disagreements: Vec<Disagreement>,
    pub identities: BTreeMap<String, IdentityTally>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub seed: u64,
}

impl VerificationReport {
    pub fn new(campaign: impl Into<String>, config: &CampaignConfig) -> Self {
        VerificationReport {
            campaign: campaign.into(),
            config: config.clone(),
            checked: 0,
            agreements: 0,
            disagreements: Vec::new(),
            identities: BTreeMap::new(),
            notes: Vec::new(),
            seed: config.seed,
        }
    }

    pub fn identity_mut(&mut self, name: &str) -> &mut IdentityTally {
        self.identities.entry(name.to_string()).or_default()
    }

    pub fn identity_failures(&self) -> u64 {
        self.identities.values().map(|t| t.failed).sum()
    }

    /// No disagreements and no identity failures.
    pub fn is_clean(&self) -> bool {
        self.disagreements.is_empty() && self.identity_failures() == 0
    }

    pub fn to_json(&self) -> String {
        crate::io::to_json(self)
    }
}
