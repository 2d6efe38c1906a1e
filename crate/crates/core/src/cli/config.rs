//! `key = value` config files merged under command-line flags.

use std::path::Path;

pub const COMMANDS: [&str; 6] = ["gate", "duplex", "telex", "capacity", "sweep", "figures"];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| format!("line {}: expected key = value", no + 1))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(format!("line {}: empty key", no + 1));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

fn has_flag(args: &[String], key: &str) -> bool {
    let flag = format!("--{key}");
    let eq = format!("--{key}=");
    args.iter().any(|a| *a == flag || a.starts_with(&eq))
}

/// Inserts config-file entries after the subcommand for every key the
/// command line does not already set.
pub fn merge(args: Vec<String>) -> Result<Vec<String>, String> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(Path::new(&path)).map_err(|e| format!("cannot read config `{path}`: {e}"))?;
    let entries = parse(&text)?;
    let mut args = args;
    let mut pos = args.iter().position(|a| COMMANDS.contains(&a.as_str()));
    if pos.is_none() {
        if let Some((_, cmd)) = entries.iter().find(|(k, _)| k == "command") {
            args.insert(1.min(args.len()), cmd.clone());
            pos = Some(1.min(args.len() - 1));
        }
    }
    let Some(pos) = pos else {
        return Ok(args);
    };
    let mut extra = Vec::new();
    for (key, value) in entries {
        if key == "command" || key == "config" || has_flag(&args, &key) {
            continue;
        }
        match value.as_str() {
            "true" => extra.push(format!("--{key}")),
            "false" => {}
            _ => extra.push(format!("--{key}={value}")),
        }
    }
    args.splice(pos + 1..pos + 1, extra);
    Ok(args)
}
