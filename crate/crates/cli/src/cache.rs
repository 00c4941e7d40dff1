//! On-disk cache for nonresidue tables.
//!
//! One file per `(p, limit)` pair, human-inspectable and diff-friendly:
//! a header line `nrlab-table 1 <p> <limit> <count>` followed by the
//! ascending nonresidues, newline-delimited decimal.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use nrlab_core::residues::{nonresidue_table, NonresidueTable};
use nrlab_core::OddPrime;

const MAGIC: &str = "nrlab-table";
const VERSION: u32 = 1;

pub fn cache_path(dir: &Path, p: u64, limit: u64) -> PathBuf {
    dir.join(format!("table_p{p}_limit{limit}.txt"))
}

pub fn encode(table: &NonresidueTable) -> String {
    let mut out = String::with_capacity(table.nonresidues.len() * 8 + 64);
    out.push_str(&format!(
        "{MAGIC} {VERSION} {} {} {}\n",
        table.p.value(),
        table.limit,
        table.nonresidues.len()
    ));
    for n in &table.nonresidues {
        out.push_str(&format!("{n}\n"));
    }
    out
}

pub fn decode(text: &str) -> anyhow::Result<NonresidueTable> {
    let mut lines = text.lines();
    let header = lines.next().context("empty cache file")?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 5 || fields[0] != MAGIC {
        bail!("malformed cache header: {header:?}");
    }
    let version: u32 = fields[1].parse()?;
    if version != VERSION {
        bail!("unsupported cache format version {version}");
    }
    let p_value: u64 = fields[2].parse()?;
    let limit: u64 = fields[3].parse()?;
    let count: usize = fields[4].parse()?;
    let p = OddPrime::new(p_value).map_err(|e| anyhow::anyhow!("{e}"))?;

    let mut nonresidues = Vec::with_capacity(count);
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        nonresidues.push(line.parse::<u64>()?);
    }
    if nonresidues.len() != count {
        bail!(
            "cache count mismatch: header says {count}, file has {}",
            nonresidues.len()
        );
    }
    if nonresidues.windows(2).any(|w| w[0] >= w[1]) {
        bail!("cache entries not strictly ascending");
    }
    // counts are derivable: zeros are the multiples of p
    let nonresidue_count = nonresidues.len() as u64;
    let residue_count = limit - limit / p_value - nonresidue_count;
    Ok(NonresidueTable {
        p,
        limit,
        nonresidues,
        residue_count,
        nonresidue_count,
    })
}

/// Loads the table from cache, or computes and stores it.
pub fn load_or_compute(dir: &Path, p: &OddPrime, limit: u64) -> anyhow::Result<(NonresidueTable, bool)> {
    let path = cache_path(dir, p.value(), limit);
    if path.exists() {
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("reading {}", path.display()))?;
        let table = decode(&text).with_context(|| format!("parsing {}", path.display()))?;
        if table.p.value() != p.value() || table.limit != limit {
            bail!("cache file {} holds a different (p, limit)", path.display());
        }
        return Ok((table, true));
    }
    let table = nonresidue_table(p, limit);
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    std::fs::write(&path, encode(&table)).with_context(|| format!("writing {}", path.display()))?;
    Ok((table, false))
}
