//! `--config FILE` support: `key = value` lines become `--key value` flags unless
//! the same flag is already on the command line.

use std::ffi::OsString;

use crate::error::CliError;

pub fn parse(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Invalid(format!("config line {}: expected key = value", i + 1)))?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() {
            return Err(CliError::Invalid(format!("config line {}: empty key", i + 1)));
        }
        pairs.push((key, value.trim().trim_matches('"').to_string()));
    }
    Ok(pairs)
}

fn flag_present(args: &[OsString], key: &str) -> bool {
    let long = format!("--{key}");
    let with_eq = format!("--{key}=");
    args.iter().any(|a| a.to_str().is_some_and(|s| s == long || s.starts_with(&with_eq)))
}

/// Removes `--config` from `args` and appends the file's settings that the
/// command line does not already set.
pub fn expand_args(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let mut out = Vec::with_capacity(args.len());
    let mut path = None;
    let mut iter = args.into_iter();
    while let Some(a) = iter.next() {
        match a.to_str() {
            Some("--config") => {
                let p = iter.next().ok_or_else(|| CliError::Invalid("--config needs a file path".into()))?;
                path = Some(p);
            }
            Some(s) if s.starts_with("--config=") => path = Some(OsString::from(&s["--config=".len()..])),
            _ => out.push(a),
        }
    }
    let Some(path) = path else { return Ok(out) };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::io(format!("reading config file {}", path.to_string_lossy()), e))?;
    let mut extra = Vec::new();
    for (key, value) in parse(&text)? {
        if !flag_present(&out, &key) {
            extra.push(OsString::from(format!("--{key}={value}")));
        }
    }
    out.extend(extra);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_pairs_and_comments() {
        let p = parse("# comment\ntheta = 0.5\n\nseed=7\ntail_tol = 1e-12\n").unwrap();
        assert_eq!(
            p,
            vec![
                ("theta".to_string(), "0.5".to_string()),
                ("seed".to_string(), "7".to_string()),
                ("tail-tol".to_string(), "1e-12".to_string()),
            ]
        );
        assert!(parse("theta 0.5").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "theta = 0.3\nseed = 9\n").unwrap();
        let args = expand_args(os(&["fadeq", "simulate", "--theta", "0.5", "--config", path.to_str().unwrap()])).unwrap();
        assert_eq!(args, os(&["fadeq", "simulate", "--theta", "0.5", "--seed=9"]));
    }

    #[test]
    fn missing_file_is_io_error() {
        let e = expand_args(os(&["fadeq", "--config", "/nonexistent/x.conf"])).unwrap_err();
        assert_eq!(e.exit_code(), 3);
    }
}
