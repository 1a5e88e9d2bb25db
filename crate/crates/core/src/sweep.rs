//! Exhaustive verification sweeps over the rounded family `D(l)_m`.
//!
//! Work is cut into blocks in a fixed order. Blocks may run on a thread
//! pool, but their results are merged in block order, so reports do not
//! depend on the number of threads.

use std::fmt::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::blowup::BlowupChain;
use crate::divisor::{classify_residue, closed_form_intersection, IntegralDivisor, QDivisor};
use crate::error::{Error, Result};
use crate::filtration::coefficient_cross_check;
use crate::scalar::{int, ExactInt};

const M_BLOCK: u64 = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckSet {
    pub closed_form: bool,
    pub antinef: bool,
    pub pullback: bool,
    pub positivity: bool,
    pub bridge: bool,
}

impl CheckSet {
    pub fn all() -> Self {
        CheckSet {
            closed_form: true,
            antinef: true,
            pullback: true,
            positivity: true,
            bridge: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub l_max: usize,
    pub m_max: u64,
    /// Largest curve index for the coefficient-stabilisation check.
    pub n_max: usize,
    /// Largest multiplier for the coefficient-stabilisation check.
    pub bridge_m_max: u64,
    pub checks: CheckSet,
    pub jobs: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            l_max: 12,
            m_max: 4096,
            n_max: 10,
            bridge_m_max: 512,
            checks: CheckSet::all(),
            jobs: 1,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.l_max == 0 {
            return Err(Error::LevelOutOfRange { level: 0, max: 0 });
        }
        if self.m_max == 0 || self.bridge_m_max == 0 {
            return Err(Error::NonPositiveMultiplier);
        }
        if self.n_max == 0 {
            return Err(Error::CurveOutOfRange { index: 0, level: 0 });
        }
        Ok(())
    }

    /// Whether `i64` holds every intermediate value: coefficients of
    /// `m F(l)` have numerators up to `m (2^l - 1)`.
    pub fn fits_machine_ints(&self) -> bool {
        let bits_m = 64 - self.m_max.leading_zeros() as usize;
        self.l_max + bits_m + 2 < 62
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub total: u64,
    pub passed: u64,
    pub failed: u64,
    pub first_counterexample: Option<String>,
}

impl CheckSummary {
    pub fn new(name: &str) -> Self {
        CheckSummary {
            name: name.to_string(),
            total: 0,
            passed: 0,
            failed: 0,
            first_counterexample: None,
        }
    }

    pub fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_counterexample.is_none() {
                self.first_counterexample = Some(describe());
            }
        }
    }

    fn merge(&mut self, other: CheckSummary) {
        self.total += other.total;
        self.passed += other.passed;
        self.failed += other.failed;
        if self.first_counterexample.is_none() {
            self.first_counterexample = other.first_counterexample;
        }
    }
}

/// One cell of the closed-form comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub l: usize,
    pub m: u64,
    pub n: usize,
    pub matrix_value: i64,
    pub closed_form_value: i64,
    pub agree: bool,
}

pub const ROW_HEADER: &str = "l\tm\tn\tmatrix_value\tclosed_form_value\tagree";

impl SweepRow {
    pub fn tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            self.l, self.m, self.n, self.matrix_value, self.closed_form_value, self.agree
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub checks: Vec<CheckSummary>,
    pub witnesses: Vec<String>,
    #[serde(skip)]
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn total(&self) -> u64 {
        self.checks.iter().map(|c| c.total).sum()
    }

    pub fn failed(&self) -> u64 {
        self.checks.iter().map(|c| c.failed).sum()
    }

    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Copy, Debug)]
enum Block {
    ClosedForm { l: usize, m_lo: u64, m_hi: u64 },
    Antinef { l: usize, m_lo: u64, m_hi: u64 },
    Pullback { a: usize },
    Positivity { l: usize },
    NonVacuity { n: usize },
    Bridge { n: usize },
}

struct BlockResult {
    name: &'static str,
    summary: CheckSummary,
    rows: Vec<SweepRow>,
    witnesses: Vec<String>,
}

impl BlockResult {
    fn new(name: &'static str) -> Self {
        BlockResult {
            name,
            summary: CheckSummary::new(name),
            rows: Vec::new(),
            witnesses: Vec::new(),
        }
    }
}

fn to_i64<T: ExactInt>(v: &T) -> i64 {
    v.to_i64().expect("intersection number fits in i64")
}

fn m_blocks(m_max: u64) -> impl Iterator<Item = (u64, u64)> {
    (0..m_max.div_ceil(M_BLOCK)).map(move |b| (b * M_BLOCK + 1, ((b + 1) * M_BLOCK).min(m_max)))
}

fn plan(cfg: &SweepConfig) -> Vec<Block> {
    let mut blocks = Vec::new();
    if cfg.checks.closed_form {
        for l in 2..=cfg.l_max {
            for (m_lo, m_hi) in m_blocks(cfg.m_max) {
                blocks.push(Block::ClosedForm { l, m_lo, m_hi });
            }
        }
    }
    if cfg.checks.antinef {
        for l in 1..=cfg.l_max {
            for (m_lo, m_hi) in m_blocks(cfg.m_max) {
                blocks.push(Block::Antinef { l, m_lo, m_hi });
            }
        }
    }
    if cfg.checks.pullback {
        for a in 2..cfg.l_max {
            blocks.push(Block::Pullback { a });
        }
    }
    if cfg.checks.positivity {
        for l in 1..=cfg.l_max {
            blocks.push(Block::Positivity { l });
        }
        for n in 1..cfg.l_max {
            blocks.push(Block::NonVacuity { n });
        }
    }
    if cfg.checks.bridge {
        for n in 1..=cfg.n_max {
            blocks.push(Block::Bridge { n });
        }
    }
    blocks
}

fn run_block<T: ExactInt>(block: Block, cfg: &SweepConfig) -> Result<BlockResult> {
    match block {
        Block::ClosedForm { l, m_lo, m_hi } => {
            let mut out = BlockResult::new("closed_form");
            let form = BlowupChain::paper(l)?.full_form::<T>();
            let f = QDivisor::<T>::paper(l)?;
            for m in m_lo..=m_hi {
                let mt = int::<T>(m);
                let values = f.ceil_multiple(&mt)?.negated_intersections(&form)?;
                for (i, v) in values.iter().enumerate() {
                    let n = i + 1;
                    let closed = closed_form_intersection(&mt, n, l)?;
                    let cased = classify_residue(&mt, n, l)?.value;
                    let agree = *v == closed && closed == cased;
                    let row = SweepRow {
                        l,
                        m,
                        n,
                        matrix_value: to_i64(v),
                        closed_form_value: to_i64(&closed),
                        agree,
                    };
                    out.summary.record(agree, || {
                        format!(
                            "l={l} m={m} n={n}: matrix {v}, floor form {closed}, residue case {cased}"
                        )
                    });
                    out.rows.push(row);
                }
            }
            Ok(out)
        }
        Block::Antinef { l, m_lo, m_hi } => {
            let mut out = BlockResult::new("antinef");
            let form = BlowupChain::paper(l)?.full_form::<T>();
            let f = QDivisor::<T>::paper(l)?;
            for m in m_lo..=m_hi {
                let d = f.ceil_multiple(&int::<T>(m))?;
                let ok = d.is_antinef(&form)?;
                out.summary
                    .record(ok, || format!("l={l} m={m}: -D(l)_m not nef, D = {d}"));
            }
            Ok(out)
        }
        Block::Pullback { a } => {
            let mut out = BlockResult::new("pullback");
            let chain = BlowupChain::paper(cfg.l_max)?;
            let m_top = if a > 63 {
                cfg.m_max
            } else {
                ((1u64 << (a - 1)) - 1).min(cfg.m_max)
            };
            let fa = QDivisor::<T>::paper(a)?;
            for b in a + 1..=cfg.l_max {
                let map = chain.pullback_map(a, b)?;
                let fb = QDivisor::<T>::paper(b)?;
                for m in 1..=m_top {
                    let mt = int::<T>(m);
                    let pulled = fa.ceil_multiple(&mt)?.pullback(&map)?;
                    let direct = fb.ceil_multiple(&mt)?;
                    let ok = pulled == direct;
                    out.summary.record(ok, || {
                        format!("a={a} b={b} m={m}: pullback {pulled} != {direct}")
                    });
                }
            }
            Ok(out)
        }
        Block::Positivity { l } => {
            let mut out = BlockResult::new("positivity");
            let form = BlowupChain::paper(l)?.full_form::<T>();
            let f = QDivisor::<T>::paper(l)?;
            for n in 1..=l {
                if n >= 63 || (1u64 << n) >= cfg.m_max {
                    continue;
                }
                for m in (1u64 << n) + 1..=cfg.m_max {
                    let d = f.ceil_multiple(&int::<T>(m))?;
                    let v = -d.intersect_curve(n, &form)?;
                    out.summary.record(v.is_positive(), || {
                        format!("l={l} n={n} m={m}: (-D . E_n) = {v}")
                    });
                }
            }
            Ok(out)
        }
        Block::NonVacuity { n } => {
            let mut out = BlockResult::new("positivity_nonvacuous");
            let m_top = if n >= 63 {
                cfg.m_max
            } else {
                (1u64 << n).min(cfg.m_max)
            };
            let mut found = None;
            'search: for l in n.max(2)..=cfg.l_max {
                let form = BlowupChain::paper(l)?.full_form::<T>();
                let f = QDivisor::<T>::paper(l)?;
                for m in 1..=m_top {
                    let v = -f.ceil_multiple(&int::<T>(m))?.intersect_curve(n, &form)?;
                    if v.is_zero() {
                        found = Some((l, m));
                        break 'search;
                    }
                }
            }
            out.summary.record(found.is_some(), || {
                format!(
                    "n={n}: no m <= 2^n with (-D(l)_m . E_n) = 0 for l <= {}",
                    cfg.l_max
                )
            });
            if let Some((l, m)) = found {
                out.witnesses
                    .push(format!("zero_intersection\tn={n}\tl={l}\tm={m}"));
            }
            Ok(out)
        }
        Block::Bridge { n } => {
            let mut out = BlockResult::new("coefficient_bridge");
            for m in 1..=cfg.bridge_m_max {
                let c = coefficient_cross_check(n, m)?;
                out.summary.record(c.consistent, || {
                    format!(
                        "n={n} m={m}: expected {}, coefficients {:?}, pulled back {:?} at levels {:?}",
                        c.expected, c.coefficients, c.pulled_back, c.levels
                    )
                });
            }
            Ok(out)
        }
    }
}

/// Runs the sweep with scalar type `T` on `cfg.jobs` threads.
pub fn run_sweep_with<T: ExactInt>(cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let blocks = plan(cfg);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .expect("thread pool");
    let results: Vec<Result<BlockResult>> =
        pool.install(|| blocks.par_iter().map(|b| run_block::<T>(*b, cfg)).collect());

    let mut checks: Vec<CheckSummary> = Vec::new();
    let mut rows = Vec::new();
    let mut witnesses = Vec::new();
    for r in results {
        let r = r?;
        match checks.iter_mut().find(|c| c.name == r.name) {
            Some(c) => c.merge(r.summary),
            None => checks.push(r.summary),
        }
        rows.extend(r.rows);
        witnesses.extend(r.witnesses);
    }
    Ok(SweepReport {
        checks,
        witnesses,
        rows,
    })
}

/// Runs the sweep on machine integers when the bounds allow it, otherwise
/// on big integers. Both give the same report.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    if cfg.fits_machine_ints() {
        run_sweep_with::<i64>(cfg)
    } else {
        run_sweep_with::<BigInt>(cfg)
    }
}

/// `-ceil(m F)` nef test for an arbitrary rational family on a given chain.
pub fn family_antinef_sweep<T: ExactInt>(
    family: &QDivisor<T>,
    chain: &BlowupChain,
    m_max: u64,
) -> Result<(CheckSummary, Vec<String>)> {
    if m_max == 0 {
        return Err(Error::NonPositiveMultiplier);
    }
    let form = chain.intersection_form::<T>(family.level())?;
    let mut summary = CheckSummary::new("family_antinef");
    let mut rows = Vec::new();
    for m in 1..=m_max {
        let d: IntegralDivisor<T> = family.ceil_multiple(&int::<T>(m))?;
        let values = d.negated_intersections(&form)?;
        let bad = values.iter().position(|v| v.is_negative());
        summary.record(bad.is_none(), || {
            let n = bad.unwrap_or(0) + 1;
            format!("m={m} n={n}: (-D . E_n) = {}", values[n - 1])
        });
        let mut line = format!("{m}");
        for v in &values {
            let _ = write!(line, "\t{v}");
        }
        rows.push(line);
    }
    Ok((summary, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(l_max: usize, m_max: u64) -> SweepConfig {
        SweepConfig {
            l_max,
            m_max,
            n_max: 3,
            bridge_m_max: 16,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn small_sweep_counts() {
        let r = run_sweep(&small(3, 8)).unwrap();
        assert_eq!(r.failed(), 0);
        // (2 + 3) curves times 8 multipliers
        assert_eq!(r.check("closed_form").unwrap().total, 40);
        assert_eq!(r.rows.len(), 40);
        // levels 1..=3 times 8 multipliers
        assert_eq!(r.check("antinef").unwrap().total, 24);
        // a = 2, b = 3, m = 1
        assert_eq!(r.check("pullback").unwrap().total, 1);
        // n = 1: m = 3..=8 at l = 1, 2, 3; n = 2: m = 5..=8 at l = 2, 3; n = 3: none
        assert_eq!(r.check("positivity").unwrap().total, 3 * 6 + 2 * 4);
        assert_eq!(r.check("positivity_nonvacuous").unwrap().total, 2);
        assert_eq!(r.check("coefficient_bridge").unwrap().total, 3 * 16);
        assert_eq!(r.witnesses.len(), 2);
    }

    #[test]
    fn machine_and_big_ints_agree() {
        let cfg = small(5, 40);
        assert!(cfg.fits_machine_ints());
        let a = run_sweep_with::<i64>(&cfg).unwrap();
        let b = run_sweep_with::<BigInt>(&cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn thread_count_does_not_change_report() {
        let mut cfg = small(6, 1100);
        let one = run_sweep(&cfg).unwrap();
        cfg.jobs = 4;
        let four = run_sweep(&cfg).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn rejects_zero_bounds() {
        assert!(run_sweep(&small(0, 8)).is_err());
        assert!(run_sweep(&small(3, 0)).is_err());
    }

    #[test]
    fn family_sweeps() {
        let chain = BlowupChain::paper(2).unwrap();
        let ones = QDivisor::<i64>::new(vec![1.into(), 1.into()]).unwrap();
        let (s, rows) = family_antinef_sweep(&ones, &chain, 10).unwrap();
        assert_eq!((s.total, s.failed), (10, 0));
        assert_eq!(rows[2], "3\t3\t0");
        let bad = QDivisor::<i64>::new(vec![1.into(), 0.into()]).unwrap();
        let (s, _) = family_antinef_sweep(&bad, &chain, 10).unwrap();
        assert_eq!(s.failed, 10);
        assert_eq!(
            s.first_counterexample.as_deref(),
            Some("m=1 n=2: (-D . E_n) = -1")
        );
    }
}
