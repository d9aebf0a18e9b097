//! Run configuration: defaults, then an optional `key = value` file, then
//! command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use ratball_core::classify::{Congruence, FamilyForm, SweepRange, DEFAULT_NODE_BUDGET};
use ratball_core::lattice::SearchBudget;

pub const OUT_DIR_ENV: &str = "RATBALL_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "ratball-out";

pub const KEYS: &[&str] = &[
    "p1", "k1", "p2", "k2", "N", "congruence", "budget", "workers", "out_dir", "family_form", "timing",
];

/// Every setting is optional so that layers can be merged.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunConfig {
    pub p1: Option<Vec<u64>>,
    pub k1: Option<Vec<u64>>,
    pub p2: Option<Vec<u64>>,
    pub k2: Option<Vec<u64>>,
    pub big_n: Option<Vec<i64>>,
    pub congruence: Option<Congruence>,
    pub budget: Option<SearchBudget>,
    pub workers: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub family_form: Option<FamilyForm>,
    pub timing: Option<bool>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig> {
        let mut c = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {}: expected key = value", lineno + 1);
            };
            c.set(key.trim(), value.trim()).with_context(|| format!("line {}", lineno + 1))?;
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        RunConfig::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "p1" => self.p1 = Some(parse_list(value)?),
            "k1" => self.k1 = Some(parse_list(value)?),
            "p2" => self.p2 = Some(parse_list(value)?),
            "k2" => self.k2 = Some(parse_list(value)?),
            "N" => self.big_n = Some(parse_list(value)?),
            "congruence" => self.congruence = Some(parse_congruence(value)?),
            "budget" => self.budget = Some(parse_budget(value)?),
            "workers" => self.workers = Some(parse_workers(value)?),
            "out_dir" => self.out_dir = Some(PathBuf::from(value)),
            "family_form" => self.family_form = Some(parse_family_form(value)?),
            "timing" => {
                self.timing = Some(value.parse().with_context(|| format!("timing must be true or false, got {:?}", value))?)
            }
            _ => bail!("unknown key {:?} (known: {})", key, KEYS.join(", ")),
        }
        Ok(())
    }

    /// Values set in `over` win.
    pub fn overlay(self, over: RunConfig) -> RunConfig {
        RunConfig {
            p1: over.p1.or(self.p1),
            k1: over.k1.or(self.k1),
            p2: over.p2.or(self.p2),
            k2: over.k2.or(self.k2),
            big_n: over.big_n.or(self.big_n),
            congruence: over.congruence.or(self.congruence),
            budget: over.budget.or(self.budget),
            workers: over.workers.or(self.workers),
            out_dir: over.out_dir.or(self.out_dir),
            family_form: over.family_form.or(self.family_form),
            timing: over.timing.or(self.timing),
        }
    }

    pub fn range(&self) -> Result<SweepRange> {
        let d = SweepRange::default();
        let r = SweepRange {
            p1: self.p1.clone().unwrap_or(d.p1),
            k1: self.k1.clone().unwrap_or(d.k1),
            p2: self.p2.clone().unwrap_or(d.p2),
            k2: self.k2.clone().unwrap_or(d.k2),
            big_n: self.big_n.clone().unwrap_or(d.big_n),
            congruence: self.congruence.unwrap_or(d.congruence),
        };
        if r.p1.iter().chain(&r.p2).any(|&p| p < 2) {
            bail!("p1 and p2 must be at least 2");
        }
        if r.k1.iter().chain(&r.k2).any(|&k| k < 1) {
            bail!("k1 and k2 must be at least 1");
        }
        Ok(r)
    }

    pub fn budget(&self) -> SearchBudget {
        self.budget.unwrap_or(SearchBudget::nodes(DEFAULT_NODE_BUDGET))
    }

    pub fn workers(&self) -> usize {
        self.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }

    /// Flag or file, then the environment, then the built-in default.
    pub fn out_dir(&self) -> PathBuf {
        self.out_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
    }

    pub fn family_form(&self) -> FamilyForm {
        self.family_form.unwrap_or_default()
    }

    pub fn timing(&self) -> bool {
        self.timing.unwrap_or(false)
    }
}

const MAX_RANGE: i64 = 1_000_000;

/// Comma separated integers and inclusive ranges `a-b`; empty for none.
pub fn parse_list<T>(s: &str) -> Result<Vec<T>>
where
    T: TryFrom<i64> + Ord,
{
    let mut out: Vec<i64> = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        // a leading minus belongs to the first number
        let cut = part.char_indices().skip(1).find(|&(_, c)| c == '-').map(|(i, _)| i);
        match cut {
            Some(i) => {
                let lo = num(&part[..i])?;
                let hi = num(&part[i + 1..])?;
                if lo > hi {
                    bail!("empty range {:?}", part);
                }
                if hi - lo > MAX_RANGE {
                    bail!("range {:?} is too long", part);
                }
                out.extend(lo..=hi);
            }
            None => out.push(num(part)?),
        }
    }
    let mut vals = out
        .into_iter()
        .map(|x| T::try_from(x).ok().with_context(|| format!("{} is out of range", x)))
        .collect::<Result<Vec<T>>>()?;
    vals.sort();
    vals.dedup();
    Ok(vals)
}

fn num(s: &str) -> Result<i64> {
    s.trim().parse().ok().with_context(|| format!("bad number {:?}", s))
}

pub fn parse_congruence(s: &str) -> Result<Congruence> {
    Ok(match s {
        "both" => Congruence::Both,
        "minus" | "-1" => Congruence::MinusOne,
        "plus" | "+1" | "1" => Congruence::PlusOne,
        _ => bail!("congruence must be both, minus or plus, got {:?}", s),
    })
}

pub fn parse_budget(s: &str) -> Result<SearchBudget> {
    if s == "unlimited" {
        return Ok(SearchBudget::unlimited());
    }
    let n: u64 = s.parse().ok().with_context(|| format!("budget must be a node count or unlimited, got {:?}", s))?;
    Ok(SearchBudget::nodes(n))
}

pub fn parse_workers(s: &str) -> Result<usize> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => bail!("workers must be a positive integer, got {:?}", s),
    }
}

pub fn parse_family_form(s: &str) -> Result<FamilyForm> {
    Ok(match s {
        "printed" => FamilyForm::Printed,
        "derived" => FamilyForm::Derived,
        _ => bail!("family form must be printed or derived, got {:?}", s),
    })
}
