use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mode::Mode;
use crate::ENGINE_VERSION;

/// One census over a window. `first_index`/`index_count` name the units that
/// were classified: Gram indices for lattice censuses, grid offsets for the
/// short-interval census over t.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub command: String,
    pub mode: Mode,
    pub t: f64,
    pub u: f64,
    pub tau: f64,
    pub first_index: u64,
    pub index_count: u64,
    pub total: u64,
    pub hits: u64,
    pub misses: u64,
    pub uncertain: u64,
    pub fraction: f64,
    /// Main term with ln T.
    pub predicted_main_term: f64,
    /// Same main term with ln(T/2π).
    pub predicted_main_term_ln_t2pi: f64,
    pub ratio: f64,
    pub ratio_ln_t2pi: f64,
    pub anchor: String,
    pub params: String,
    pub overrides: String,
    pub warnings: String,
    pub engine: String,
}

pub(crate) struct ReportHeader {
    pub command: &'static str,
    pub mode: Mode,
    pub t: f64,
    pub u: f64,
    pub tau: f64,
    pub anchor: &'static str,
    pub params: String,
    pub overrides: Vec<String>,
    pub warnings: Vec<String>,
}

impl CensusReport {
    pub(crate) fn build(
        h: ReportHeader,
        first_index: u64,
        index_count: u64,
        counts: Tally,
        predicted: (f64, f64),
    ) -> CensusReport {
        let mut r = CensusReport {
            command: h.command.to_string(),
            mode: h.mode,
            t: h.t,
            u: h.u,
            tau: h.tau,
            first_index,
            index_count,
            total: counts.total(),
            hits: counts.hits,
            misses: counts.misses,
            uncertain: counts.uncertain,
            fraction: 0.0,
            predicted_main_term: predicted.0,
            predicted_main_term_ln_t2pi: predicted.1,
            ratio: 0.0,
            ratio_ln_t2pi: 0.0,
            anchor: h.anchor.to_string(),
            params: h.params,
            overrides: h.overrides.join(";"),
            warnings: h.warnings.join(";"),
            engine: ENGINE_VERSION.to_string(),
        };
        r.refresh();
        r
    }

    fn refresh(&mut self) {
        self.fraction = if self.total > 0 {
            self.hits as f64 / self.total as f64
        } else {
            0.0
        };
        self.ratio = ratio(self.hits as f64, self.predicted_main_term);
        self.ratio_ln_t2pi = ratio(self.hits as f64, self.predicted_main_term_ln_t2pi);
    }

    pub fn warning_list(&self) -> Vec<&str> {
        self.warnings.split(';').filter(|s| !s.is_empty()).collect()
    }

    /// Combine reports over adjacent, disjoint index ranges of one window.
    pub fn merge(&self, other: &CensusReport) -> Result<CensusReport> {
        let same = self.command == other.command
            && self.mode == other.mode
            && self.t == other.t
            && self.u == other.u
            && self.tau == other.tau
            && self.params == other.params
            && self.overrides == other.overrides
            && self.predicted_main_term == other.predicted_main_term;
        if !same {
            return Err(Error::validation(format!(
                "cannot merge {} reports with different windows or parameters",
                self.command
            )));
        }
        let (a, b) = if self.first_index <= other.first_index {
            (self, other)
        } else {
            (other, self)
        };
        if a.first_index + a.index_count != b.first_index {
            return Err(Error::validation(format!(
                "index ranges [{}, +{}) and [{}, +{}) are not adjacent",
                a.first_index, a.index_count, b.first_index, b.index_count
            )));
        }
        let mut warnings = a.warning_list();
        for w in b.warning_list() {
            if !warnings.contains(&w) {
                warnings.push(w);
            }
        }
        let mut r = CensusReport {
            index_count: a.index_count + b.index_count,
            first_index: a.first_index,
            total: a.total + b.total,
            hits: a.hits + b.hits,
            misses: a.misses + b.misses,
            uncertain: a.uncertain + b.uncertain,
            warnings: warnings.join(";"),
            ..a.clone()
        };
        r.refresh();
        Ok(r)
    }
}

pub(crate) fn ratio(x: f64, predicted: f64) -> f64 {
    if predicted == 0.0 {
        if x == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        x / predicted
    }
}

/// Outcome of classifying one unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Hit,
    Miss,
    Uncertain,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub hits: u64,
    pub misses: u64,
    pub uncertain: u64,
}

impl Tally {
    pub fn total(&self) -> u64 {
        self.hits + self.misses + self.uncertain
    }

    pub fn add(&mut self, o: Outcome) {
        match o {
            Outcome::Hit => self.hits += 1,
            Outcome::Miss => self.misses += 1,
            Outcome::Uncertain => self.uncertain += 1,
        }
    }
}

impl FromIterator<Outcome> for Tally {
    fn from_iter<I: IntoIterator<Item = Outcome>>(it: I) -> Self {
        let mut t = Tally::default();
        it.into_iter().for_each(|o| t.add(o));
        t
    }
}

/// Discrete second moments of Z over a lattice window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub command: String,
    pub mode: Mode,
    pub t: f64,
    pub u: f64,
    pub m: u32,
    pub tau: f64,
    pub first_index: u64,
    pub index_count: u64,
    pub j_bar: f64,
    /// N̄ with the phase θ₁ in K̄; `None` when that variant was not requested.
    pub n_bar_theta1: Option<f64>,
    /// N̄ with the full θ in K̄.
    pub n_bar_theta_full: Option<f64>,
    /// J̄/(M U ln²T), with M replaced by 1 when M = 0.
    pub normalized_j: f64,
    pub normalized_n_theta1: Option<f64>,
    pub normalized_n_theta_full: Option<f64>,
    pub uncertain_samples: u64,
    pub anchor: String,
    pub overrides: String,
    pub warnings: String,
    pub engine: String,
}

impl MomentReport {
    pub(crate) fn normalizer(t: f64, u: f64, m: u32) -> f64 {
        (m.max(1) as f64) * u * t.ln().powi(2)
    }

    /// Combine reports over adjacent index ranges of one window. J̄ and N̄
    /// are plain sums over ν, so the merge is exact up to rounding.
    pub fn merge(&self, other: &MomentReport) -> Result<MomentReport> {
        let same = self.command == other.command
            && self.t == other.t
            && self.u == other.u
            && self.m == other.m
            && self.tau == other.tau
            && self.overrides == other.overrides
            && self.n_bar_theta1.is_some() == other.n_bar_theta1.is_some()
            && self.n_bar_theta_full.is_some() == other.n_bar_theta_full.is_some();
        if !same {
            return Err(Error::validation("cannot merge moment reports with different windows"));
        }
        let (a, b) = if self.first_index <= other.first_index {
            (self, other)
        } else {
            (other, self)
        };
        if a.first_index + a.index_count != b.first_index {
            return Err(Error::validation("moment report index ranges are not adjacent"));
        }
        let norm = Self::normalizer(a.t, a.u, a.m);
        let add = |x: Option<f64>, y: Option<f64>| x.zip(y).map(|(x, y)| x + y);
        let n1 = add(a.n_bar_theta1, b.n_bar_theta1);
        let nf = add(a.n_bar_theta_full, b.n_bar_theta_full);
        Ok(MomentReport {
            index_count: a.index_count + b.index_count,
            j_bar: a.j_bar + b.j_bar,
            n_bar_theta1: n1,
            n_bar_theta_full: nf,
            normalized_j: (a.j_bar + b.j_bar) / norm,
            normalized_n_theta1: n1.map(|n| n / norm),
            normalized_n_theta_full: nf.map(|n| n / norm),
            uncertain_samples: a.uncertain_samples + b.uncertain_samples,
            ..a.clone()
        })
    }
}
