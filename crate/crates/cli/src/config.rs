//! `--config FILE`: a JSON object of long flag names and values, spliced
//! into the argument list right after the subcommand so that flags given
//! on the command line win.

use std::ffi::OsString;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::Value;

use crate::exit::ConfigError;

const SUBCOMMANDS: [&str; 5] = ["sample", "solve", "evaluate", "vss", "sweep"];

/// Removes `--config FILE` / `--config=FILE` from `args` and returns it.
fn take_config(args: &mut Vec<OsString>) -> Result<Option<OsString>> {
    let mut k = 0;
    while k < args.len() {
        let a = args[k].to_string_lossy().into_owned();
        if a == "--config" {
            if k + 1 >= args.len() {
                return Err(ConfigError("--config needs a file".into()).into());
            }
            args.remove(k);
            return Ok(Some(args.remove(k)));
        }
        if let Some(path) = a.strip_prefix("--config=") {
            args.remove(k);
            return Ok(Some(path.into()));
        }
        k += 1;
    }
    Ok(None)
}

fn flags_from(doc: &Value) -> Result<Vec<OsString>> {
    let Value::Object(map) = doc else {
        return Err(ConfigError("config file must hold a JSON object".into()).into());
    };
    let mut out = Vec::new();
    for (key, value) in map {
        let flag = format!("--{key}");
        let scalar = |v: &Value| -> Result<String> {
            match v {
                Value::String(s) => Ok(s.clone()),
                Value::Number(n) => Ok(n.to_string()),
                _ => Err(ConfigError(format!("config key {key:?}: unsupported value {v}")).into()),
            }
        };
        match value {
            Value::Bool(true) => out.push(flag.into()),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                let joined = items.iter().map(scalar).collect::<Result<Vec<_>>>()?.join(",");
                out.extend([flag.into(), joined.into()]);
            }
            v => out.extend([flag.into(), scalar(v)?.into()]),
        }
    }
    Ok(out)
}

/// Expands `--config` in a raw argument list.
pub fn expand(mut args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = take_config(&mut args)? else {
        return Ok(args);
    };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let doc: Value = serde_json::from_str(&text)
        .map_err(|e| ConfigError(format!("config {}: {e}", path.display())))?;
    let flags = flags_from(&doc)?;
    let Some(at) = args.iter().position(|a| SUBCOMMANDS.iter().any(|s| a == s)) else {
        return Err(ConfigError("--config given without a subcommand".into()).into());
    };
    args.splice(at + 1..at + 1, flags);
    Ok(args)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: &[OsString]) -> Vec<String> {
        v.iter().map(|s| s.to_string_lossy().into_owned()).collect()
    }

    #[test]
    fn flags() {
        let doc = serde_json::json!({"method": "f-sgbd", "group-size": 4, "sequential": true, "gap": null, "values": [0, 0.5, 1]});
        let f = strings(&flags_from(&doc).unwrap());
        assert_eq!(f, ["--group-size", "4", "--method", "f-sgbd", "--sequential", "--values", "0,0.5,1"]);
        assert!(flags_from(&serde_json::json!([1])).is_err());
    }

    #[test]
    fn config_is_spliced_after_subcommand() {
        let dir = std::env::temp_dir().join(format!("chemosched-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.json");
        std::fs::write(&path, r#"{"method": "exact"}"#).unwrap();
        let args: Vec<OsString> = ["chemosched", "solve", "--config", path.to_str().unwrap(), "--method", "mvp"]
            .iter()
            .map(Into::into)
            .collect();
        let out = strings(&expand(args).unwrap());
        assert_eq!(out, ["chemosched", "solve", "--method", "exact", "--method", "mvp"]);
        std::fs::remove_dir_all(dir).unwrap();
    }
}
