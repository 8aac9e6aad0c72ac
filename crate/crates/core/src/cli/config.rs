//! `key = value` configuration files. Flags given on the command line win.

use std::ffi::OsString;
use std::path::Path;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError(pub String);

/// Parse one `key = value` pair per line. Blank lines and lines starting
/// with `#` are skipped.
pub fn parse(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| ConfigError(format!("line {}: expected key = value", i + 1)))?;
        let k = k.trim().replace('_', "-");
        if k.is_empty() {
            return Err(ConfigError(format!("line {}: empty key", i + 1)));
        }
        out.push((k, v.trim().to_string()));
    }
    Ok(out)
}

fn flag_name(arg: &OsString) -> Option<String> {
    let s = arg.to_str()?;
    let body = s.strip_prefix("--")?;
    Some(body.split('=').next().unwrap_or(body).to_string())
}

/// Find `--config PATH` or `--config=PATH` in the raw arguments.
pub fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

/// Append file entries as flags unless the same flag is already present.
pub fn merge(args: &mut Vec<OsString>, entries: &[(String, String)]) {
    let present: Vec<String> = args.iter().filter_map(flag_name).collect();
    for (k, v) in entries {
        if k == "config" || present.iter().any(|p| p == k) {
            continue;
        }
        match v.as_str() {
            "true" => args.push(format!("--{k}").into()),
            "false" => {}
            _ => args.push(format!("--{k}={v}").into()),
        }
    }
}

pub fn load(path: &Path) -> Result<Vec<(String, String)>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_merges() {
        let e = parse("# scan\ncount = 5\n a_lo=1.5\nverbose = true\n").unwrap();
        assert_eq!(e[1], ("a-lo".into(), "1.5".into()));
        let mut args: Vec<OsString> = ["fairtent", "scan", "--count", "7"].iter().map(Into::into).collect();
        merge(&mut args, &e);
        let s: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
        assert_eq!(s, ["fairtent", "scan", "--count", "7", "--a-lo=1.5", "--verbose"]);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse("no equals sign").is_err());
    }
}
