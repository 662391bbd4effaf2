//! Hierarchical IRMA code error.
//!
//! For each axis, position `i` (1-based) contributes `(1/b_i)·(1/i)·η_i`
//! where `b_i` is the number of labels seen at that position and
//! `η_i = 1` for a wrong character. With propagation on, a wrong
//! character also makes every deeper position of the same axis wrong.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

use super::code::{IrmaCode, AXIS_LENGTHS, CODE_LEN};

/// Number of distinct labels per code position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphabetTable {
    counts: Vec<usize>,
}

impl AlphabetTable {
    pub fn from_counts(counts: Vec<usize>) -> Result<Self> {
        if let Some(p) = counts.iter().position(|&b| b == 0) {
            return Err(Error::InvalidParameter(format!(
                "position {} has no labels",
                p + 1
            )));
        }
        Ok(Self { counts })
    }

    /// `b` at 1-based global position `pos`.
    pub fn branching(&self, pos: usize) -> Result<usize> {
        pos.checked_sub(1)
            .and_then(|i| self.counts.get(i))
            .copied()
            .ok_or(Error::PositionNotInTable(pos))
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }
}

pub fn build_alphabets<'a>(codes: impl IntoIterator<Item = &'a IrmaCode>) -> Result<AlphabetTable> {
    let mut sets: Vec<BTreeSet<u8>> = vec![BTreeSet::new(); CODE_LEN];
    let mut any = false;
    for code in codes {
        any = true;
        for (set, &c) in sets.iter_mut().zip(code.chars()) {
            set.insert(c);
        }
    }
    if !any {
        return Err(Error::EmptyInput);
    }
    AlphabetTable::from_counts(sets.iter().map(BTreeSet::len).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositionNumbering {
    /// `i` restarts at 1 in each axis.
    AxisLocal,
    /// `i` runs 1..=13 across the whole code.
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ErrorOptions {
    pub propagate: bool,
    pub normalize: bool,
    pub numbering: PositionNumbering,
}

impl Default for ErrorOptions {
    fn default() -> Self {
        Self {
            propagate: true,
            normalize: true,
            numbering: PositionNumbering::AxisLocal,
        }
    }
}

fn weighted_sum(
    table: &AlphabetTable,
    opts: &ErrorOptions,
    wrong: impl Fn(usize) -> bool,
) -> Result<f64> {
    let mut total = 0.0;
    let mut start = 0;
    for len in AXIS_LENGTHS {
        let mut failed = false;
        for local in 0..len {
            let global = start + local;
            let eta = if opts.propagate {
                failed |= wrong(global);
                failed
            } else {
                wrong(global)
            };
            if eta {
                let i = match opts.numbering {
                    PositionNumbering::AxisLocal => local + 1,
                    PositionNumbering::Global => global + 1,
                };
                let b = table.branching(global + 1)?;
                total += 1.0 / (b as f64 * i as f64);
            }
        }
        start += len;
    }
    Ok(total)
}

/// Error of a code in which every position is wrong.
pub fn max_error(table: &AlphabetTable, opts: &ErrorOptions) -> Result<f64> {
    weighted_sum(table, opts, |_| true)
}

pub fn irma_error_with(
    truth: &IrmaCode,
    retrieved: &IrmaCode,
    table: &AlphabetTable,
    opts: &ErrorOptions,
) -> Result<f64> {
    let (t, r) = (truth.chars(), retrieved.chars());
    let raw = weighted_sum(table, opts, |p| t[p] != r[p])?;
    if opts.normalize && raw > 0.0 {
        Ok(raw / max_error(table, opts)?)
    } else {
        Ok(raw)
    }
}

/// Error with propagation and axis-local numbering.
pub fn irma_error(
    truth: &IrmaCode,
    retrieved: &IrmaCode,
    table: &AlphabetTable,
    normalize: bool,
) -> Result<f64> {
    let opts = ErrorOptions {
        normalize,
        ..ErrorOptions::default()
    };
    irma_error_with(truth, retrieved, table, &opts)
}

/// Sum of per-pair errors, accumulated in input order.
pub fn total_error(
    pairs: &[(IrmaCode, IrmaCode)],
    table: &AlphabetTable,
    opts: &ErrorOptions,
) -> Result<f64> {
    pairs.iter().try_fold(0.0, |acc, (t, r)| {
        Ok(acc + irma_error_with(t, r, table, opts)?)
    })
}
