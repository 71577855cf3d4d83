//! Plain-text key=value configuration files.
//!
//! Every line is either `key=value` (injected as `--key value`) or a bare
//! `key` (injected as `--key`). Keys already present on the command line
//! are skipped, so flags always win. `#` starts a comment.

use qld_core::{Error, Result};

/// Expands `--config FILE` occurrences in `args` into their flag lists.
pub fn expand_args(args: Vec<String>) -> Result<Vec<String>> {
    let mut out = Vec::with_capacity(args.len());
    let mut config_paths = Vec::new();
    let mut iter = args.into_iter();
    while let Some(arg) = iter.next() {
        if arg == "--config" {
            let path = iter
                .next()
                .ok_or_else(|| Error::InvalidParameter("--config requires a file path".into()))?;
            config_paths.push(path);
        } else if let Some(path) = arg.strip_prefix("--config=") {
            config_paths.push(path.to_string());
        } else {
            out.push(arg);
        }
    }
    for path in config_paths {
        let text = std::fs::read_to_string(&path)?;
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = match line.split_once('=') {
                Some((k, v)) => (k.trim(), Some(v.trim())),
                None => (line, None),
            };
            if key.is_empty() || key.starts_with('-') {
                return Err(Error::Format(format!("bad config line {line:?} in {path}")));
            }
            let flag = format!("--{key}");
            let already = out
                .iter()
                .any(|a| a == &flag || a.starts_with(&format!("{flag}=")));
            if already {
                continue;
            }
            out.push(flag);
            if let Some(v) = value {
                out.push(v.to_string());
            }
        }
    }
    Ok(out)
}
