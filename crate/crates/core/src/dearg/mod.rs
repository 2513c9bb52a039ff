//! Dead argument elimination over erased environments.
//!
//! A mask has one bit per argument position; `true` marks an argument that
//! is removed. Constant masks cover the leading lambdas of the body, or the
//! lambdas of a fixpoint when the body is one. Constructor applications
//! always lose their parameters, and constructor arguments are removed when
//! their erased type is `□` and no match ever reads them.

mod analysis;
mod transform;

use std::collections::BTreeMap;
use std::fmt::Write;

use thiserror::Error;

use crate::ast::Kername;

pub use analysis::{
    analyze_usage, analyze_usage_with, check_masks, is_expanded, valid_masks, AnalysisOptions,
};
pub use transform::{
    dearg, dearg_cst, dearg_env, dearg_env_annotated, dearg_mib, dearg_type_params, dearg_value,
    run_dearg, DeargOutput,
};

pub type Mask = Vec<bool>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeargError {
    #[error("`{0}` is not applied to all of the arguments its mask removes")]
    NotExpanded(Kername),
    #[error("invalid masks: {0}")]
    InvalidMasks(String),
}

pub type DeargResult<T> = Result<T, DeargError>;

/// Mask without its trailing `false` bits.
pub fn trim(mask: &[bool]) -> &[bool] {
    let n = mask.iter().rposition(|b| *b).map_or(0, |i| i + 1);
    &mask[..n]
}

/// Keep the elements of `items` whose mask bit is unset; positions past the
/// end of the mask are kept.
pub fn filter_by<T: Clone>(mask: &[bool], items: &[T]) -> Vec<T> {
    items
        .iter()
        .enumerate()
        .filter(|(i, _)| !mask.get(*i).copied().unwrap_or(false))
        .map(|(_, x)| x.clone())
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MibMask {
    /// Parameters that are logical; removed from the erased type.
    pub param_mask: Mask,
    /// Number of parameters every constructor application drops.
    pub npars: usize,
    pub ctor_masks: Vec<Mask>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IndMasks(pub BTreeMap<Kername, MibMask>);

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstMasks(pub BTreeMap<Kername, Mask>);

impl IndMasks {
    pub fn get(&self, k: &Kername) -> Option<&MibMask> {
        self.0.get(k)
    }

    /// Full term-level mask of constructor `c`: parameters, then arguments.
    pub fn ctor_app_mask(&self, ind: &Kername, c: usize) -> Option<Mask> {
        let m = self.0.get(ind)?;
        let mut out = vec![true; m.npars];
        out.extend(m.ctor_masks.get(c).cloned().unwrap_or_default());
        Some(out)
    }
}

impl ConstMasks {
    pub fn get(&self, k: &Kername) -> Option<&Mask> {
        self.0.get(k)
    }
}

fn bits(m: &[bool]) -> String {
    m.iter().map(|b| if *b { '1' } else { '0' }).collect()
}

/// Text form: one line per name with the mask as a 0/1 string. Constructor
/// lines name the inductive and the constructor index.
pub fn write_masks(im: &IndMasks, cm: &ConstMasks) -> String {
    let mut s = String::new();
    for (k, m) in &cm.0 {
        writeln!(s, "const {k} {}", bits(m)).unwrap();
    }
    for (k, m) in &im.0 {
        writeln!(s, "params {k} {} {}", m.npars, bits(&m.param_mask)).unwrap();
        for (i, cmask) in m.ctor_masks.iter().enumerate() {
            writeln!(s, "ctor {k} {i} {}", bits(cmask)).unwrap();
        }
    }
    s
}

pub fn parse_masks(text: &str) -> DeargResult<(IndMasks, ConstMasks)> {
    let bad = |l: &str| DeargError::InvalidMasks(format!("cannot parse mask line `{l}`"));
    let parse_bits = |s: &str| -> Option<Mask> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect()
    };
    let mut im = IndMasks::default();
    let mut cm = ConstMasks::default();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let f: Vec<&str> = line.split_whitespace().collect();
        let name = |i: usize| -> DeargResult<Kername> {
            f.get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad(line))
        };
        match f.first().copied() {
            Some("const") => {
                let m = f
                    .get(2)
                    .map_or(Some(vec![]), |s| parse_bits(s))
                    .ok_or_else(|| bad(line))?;
                cm.0.insert(name(1)?, m);
            }
            Some("params") => {
                let npars = f
                    .get(2)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| bad(line))?;
                let pm = f
                    .get(3)
                    .map_or(Some(vec![]), |s| parse_bits(s))
                    .ok_or_else(|| bad(line))?;
                let e = im.0.entry(name(1)?).or_default();
                e.npars = npars;
                e.param_mask = pm;
            }
            Some("ctor") => {
                let idx: usize = f
                    .get(2)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| bad(line))?;
                let m = f
                    .get(3)
                    .map_or(Some(vec![]), |s| parse_bits(s))
                    .ok_or_else(|| bad(line))?;
                let e = im.0.entry(name(1)?).or_default();
                if e.ctor_masks.len() <= idx {
                    e.ctor_masks.resize(idx + 1, vec![]);
                }
                e.ctor_masks[idx] = m;
            }
            _ => return Err(bad(line)),
        }
    }
    Ok((im, cm))
}

#[cfg(test)]
mod tests;
