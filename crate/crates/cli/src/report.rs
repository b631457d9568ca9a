//! CSV output for benchmarks, bound tables and energy traces.

use std::io::{self, Write};

use nakagami_core::bounds::{crlb, crlb_modified, normalized};
use nakagami_core::hmrf::TraceEntry;
use nakagami_core::montecarlo::BenchResult;
use nakagami_core::BoundQuery;

pub const BENCH_HEADER: &str =
    "m_true,estimator,mean_m_hat,variance,normalized_variance,failures,crlb_block,crlb_total,crlb_modified_total";
pub const BOUNDS_HEADER: &str = "m,crlb,crlb_modified,normalized_crlb,normalized_crlb_modified";
pub const TRACE_HEADER: &str = "iteration,phase,energy";

pub fn write_bench_csv<W: Write>(result: &BenchResult, mut out: W) -> io::Result<()> {
    writeln!(out, "{BENCH_HEADER}")?;
    for r in &result.rows {
        writeln!(
            out,
            "{},{},{:.12e},{:.12e},{:.12e},{},{:.12e},{:.12e},{:.12e}",
            r.m_true,
            r.estimator,
            r.mean_m_hat,
            r.variance,
            r.normalized_variance,
            r.failures,
            r.crlb_block,
            r.crlb_total,
            r.crlb_modified_total
        )?;
    }
    out.flush()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsRow {
    pub m: f64,
    pub crlb: f64,
    pub crlb_modified: f64,
}

pub fn bounds_table(m_grid: &[f64], n: u64) -> nakagami_core::Result<Vec<BoundsRow>> {
    m_grid
        .iter()
        .map(|&m| {
            let q = BoundQuery::new(m, n)?;
            Ok(BoundsRow { m, crlb: crlb(q)?, crlb_modified: crlb_modified(q)? })
        })
        .collect()
}

pub fn write_bounds_csv<W: Write>(rows: &[BoundsRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{BOUNDS_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{:.12e},{:.12e},{:.12e},{:.12e}",
            r.m,
            r.crlb,
            r.crlb_modified,
            normalized(r.crlb, r.m),
            normalized(r.crlb_modified, r.m)
        )?;
    }
    out.flush()
}

pub fn write_trace_csv<W: Write>(trace: &[TraceEntry], mut out: W) -> io::Result<()> {
    writeln!(out, "{TRACE_HEADER}")?;
    for t in trace {
        writeln!(out, "{},{},{:.12e}", t.iteration, t.phase.name(), t.energy)?;
    }
    out.flush()
}
