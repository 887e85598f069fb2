//! CSV emission: `#` comment block, one header row, then records.

use std::io::Write;

use anyhow::Result;
use serde::Serialize;

use crate::config::Config;

pub fn comment_block(experiment: &str, cfg: &Config) -> String {
    let mut out = format!(
        "# {} {} {}\n# effective configuration:\n",
        env!("CARGO_PKG_NAME"),
        env!("CARGO_PKG_VERSION"),
        experiment
    );
    for line in cfg.to_toml().lines() {
        if line.is_empty() {
            out.push_str("#\n");
        } else {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
    }
    out
}

pub fn write_table<W: Write, R: Serialize>(mut out: W, comments: &str, rows: &[R]) -> Result<()> {
    out.write_all(comments.as_bytes())?;
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
