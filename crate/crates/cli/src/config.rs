//! `key = value` configuration files.
//!
//! Plain keys set global flags (`beta = golden`); dotted keys set a flag of
//! one subcommand (`entropy.alpha-grid = 0:0.5:0.05`). Flags given on the
//! command line always win. The value `true` sets a switch, `false` omits it.

use std::path::{Path, PathBuf};

use crate::output::CliError;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "BETADIM_CONFIG";

/// Global flags that take a value.
pub const GLOBAL_KEYS: &[&str] =
    &["beta", "depth", "guard-band", "max-precision-bits", "format", "seed", "threads", "config"];

pub fn parse(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", i + 1)))?;
        let key = key.trim().to_string();
        if key.is_empty() {
            return Err(CliError::Usage(format!("config line {}: empty key", i + 1)));
        }
        if !key.contains('.') && !GLOBAL_KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("config line {}: unknown global key {key:?}", i + 1)));
        }
        entries.push((key, value.trim().to_string()));
    }
    Ok(entries)
}

/// The `--config` argument if present, else the environment default.
pub fn locate(args: &[String]) -> Option<PathBuf> {
    for (i, a) in args.iter().enumerate() {
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(v));
        }
        if a == "--config" {
            return args.get(i + 1).map(PathBuf::from);
        }
    }
    std::env::var_os(CONFIG_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

pub fn load(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse(&text)
}

fn subcommand(args: &[String]) -> Option<&str> {
    let mut i = 1;
    while i < args.len() {
        let a = args[i].as_str();
        if let Some(flag) = a.strip_prefix("--") {
            if !flag.contains('=') && GLOBAL_KEYS.contains(&flag) {
                i += 1;
            }
        } else if !a.starts_with('-') {
            return Some(a);
        }
        i += 1;
    }
    None
}

fn has_flag(args: &[String], flag: &str) -> bool {
    let long = format!("--{flag}");
    let eq = format!("--{flag}=");
    args.iter().any(|a| *a == long || a.starts_with(&eq))
}

/// Adds config entries missing from `args`.
pub fn merge(mut args: Vec<String>, entries: &[(String, String)]) -> Vec<String> {
    let command = subcommand(&args).map(str::to_string);
    let mut globals = Vec::new();
    for (key, value) in entries {
        match key.split_once('.') {
            None => {
                if key != "config" && !has_flag(&args, key) {
                    globals.push(format!("--{key}={value}"));
                }
            }
            Some((cmd, flag)) => {
                if command.as_deref() != Some(cmd) || has_flag(&args, flag) {
                    continue;
                }
                match value.as_str() {
                    "true" => args.push(format!("--{flag}")),
                    "false" => {}
                    _ => args.push(format!("--{flag}={value}")),
                }
            }
        }
    }
    args.splice(1..1, globals);
    args
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_comments_and_blank_lines() {
        let e = parse("# header\nbeta = golden  # trailing\n\ncount.n=12\n").unwrap();
        assert_eq!(e, vec![("beta".into(), "golden".into()), ("count.n".into(), "12".into())]);
        assert!(parse("beta golden").is_err());
        assert!(parse("colour = red").is_err());
    }

    #[test]
    fn flags_override_config() {
        let e = parse("beta = golden\nseed = 4\ncount.n = 12\ncount.full = true\nexpand.n = 3").unwrap();
        let merged = merge(strings(&["betadim", "--seed", "9", "count", "--sum", "2"]), &e);
        assert_eq!(merged, strings(&["betadim", "--beta=golden", "--seed", "9", "count", "--sum", "2", "--n=12", "--full"]));
    }

    #[test]
    fn finds_subcommand_after_valued_globals() {
        assert_eq!(subcommand(&strings(&["b", "--beta", "2", "--format=json", "lambda"])), Some("lambda"));
        assert_eq!(subcommand(&strings(&["b", "--beta", "2"])), None);
    }
}
