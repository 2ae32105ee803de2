//! Optional TOML defaults merged into the argument vector.

use std::ffi::OsString;

use crate::error::CliError;

/// Commands taking a second-level subcommand.
const NESTED: [&str; 2] = ["verify", "report"];
/// Global flags that consume the next token.
const GLOBAL_VALUED: [&str; 5] = ["--threads", "--seed", "--out", "--format", "--config"];

fn config_path(argv: &[OsString]) -> Result<Option<OsString>, CliError> {
    for (i, a) in argv.iter().enumerate() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return argv.get(i + 1).cloned().map(Some).ok_or_else(|| CliError::usage("--config needs a path"));
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Ok(Some(p.into()));
        }
    }
    Ok(None)
}

fn render_value(key: &str, v: &toml::Value) -> Result<String, CliError> {
    Ok(match v {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        toml::Value::Float(f) => f.to_string(),
        toml::Value::Array(items) => items.iter().map(|x| render_value(key, x)).collect::<Result<Vec<_>, _>>()?.join(","),
        _ => return Err(CliError::usage(format!("config key {key}: unsupported value {v}"))),
    })
}

/// Index of the first subcommand token, skipping global flag values.
fn command_position(argv: &[OsString]) -> Option<usize> {
    let mut i = 1;
    while i < argv.len() {
        let s = argv[i].to_string_lossy();
        if !s.starts_with('-') {
            return Some(i);
        }
        i += if GLOBAL_VALUED.contains(&s.as_ref()) { 2 } else { 1 };
    }
    None
}

/// Flags given explicitly on the command line.
fn explicit_flags(argv: &[OsString]) -> Vec<String> {
    argv.iter()
        .filter_map(|a| a.to_str()?.strip_prefix("--").map(|f| f.split('=').next().unwrap_or(f).to_string()))
        .collect()
}

/// Inserts `--key value` for each config entry not given on the command
/// line, right after the subcommand tokens.
pub fn merge_config(argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&argv)? else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.to_string_lossy())))?;
    let table: toml::Table = text.parse().map_err(|e| CliError::usage(format!("config {}: {e}", path.to_string_lossy())))?;
    let Some(cmd_at) = command_position(&argv) else {
        return Ok(argv);
    };
    let nested = NESTED.contains(&argv[cmd_at].to_string_lossy().as_ref());
    let insert_at = if nested { (cmd_at + 2).min(argv.len()) } else { cmd_at + 1 };
    let given = explicit_flags(&argv);
    let mut extra = Vec::new();
    for (key, value) in &table {
        if key == "config" {
            return Err(CliError::usage("config files cannot nest"));
        }
        if given.iter().any(|g| g == key) {
            continue;
        }
        extra.push(OsString::from(format!("--{key}")));
        extra.push(OsString::from(render_value(key, value)?));
    }
    let mut out = argv;
    out.splice(insert_at..insert_at, extra);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn args(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn no_config_is_identity() {
        let a = args(&["cubelab", "qdecomp", "--q", "720"]);
        assert_eq!(merge_config(a.clone()).unwrap(), a);
    }

    #[test]
    fn config_fills_missing_flags_only() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "q = [6, 8]\nu = 1\nP = 4.5\nseed = 7").unwrap();
        let path = f.path().to_str().unwrap();
        let merged = merge_config(args(&["cubelab", "--config", path, "verify", "poisson", "--q", "3"])).unwrap();
        let text: Vec<String> = merged.iter().map(|a| a.to_string_lossy().into_owned()).collect();
        assert_eq!(&text[..5], &["cubelab", "--config", path, "verify", "poisson"]);
        assert!(text.windows(2).any(|w| w == ["--u", "1"]));
        assert!(text.windows(2).any(|w| w == ["--P", "4.5"]));
        assert!(text.windows(2).any(|w| w == ["--seed", "7"]));
        assert!(!text.iter().any(|t| t == "6,8"));
    }

    #[test]
    fn bad_config_is_usage_error() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "q = = 1").unwrap();
        let err = merge_config(args(&["cubelab", "qdecomp", "--config", f.path().to_str().unwrap()])).unwrap_err();
        assert_eq!(err.code, 2);
        let missing = merge_config(args(&["cubelab", "qdecomp", "--config", "/nonexistent/x.toml"])).unwrap_err();
        assert_eq!(missing.code, 2);
    }
}
