//! Artifact writing: the body goes to `--out` (or stdout) via a temporary
//! file and rename; a `<out>.meta.json` sidecar carries the resolved config,
//! provenance and timestamp so that bodies stay byte-identical across runs.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    {
        let mut f = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

/// Serializes rows as CSV with one header row.
pub fn csv_body<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Pretty JSON with a trailing newline.
pub fn json_body<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

/// Writes the body and, for file outputs, its metadata sidecar.
pub fn emit<C: Serialize>(out: Option<&Path>, body: &str, config: &C, summary: Value) -> Result<()> {
    let Some(path) = out else {
        print!("{body}");
        return Ok(());
    };
    write_atomic(path, body.as_bytes())?;
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let meta = json!({
        "config": config,
        "provenance": {
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "build": option_env!("AWTC_BUILD_ID").unwrap_or(concat!("v", env!("CARGO_PKG_VERSION"))),
        },
        "timestamp_unix": timestamp,
        "summary": summary,
    });
    write_atomic(&sidecar_path(path), json_body(&meta)?.as_bytes())
}
