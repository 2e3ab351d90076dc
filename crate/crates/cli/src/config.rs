//! `key = value` config files.
//!
//! Entries are turned into `--key=value` arguments appended to the command
//! line, skipping any key already given there, so flags always win over the
//! file and the file wins over built-in defaults.

use std::ffi::OsString;
use std::path::Path;

use clap::parser::ValueSource;
use clap::{ArgAction, ArgMatches, Command};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

pub fn parse(text: &str) -> Result<Vec<Entry>, CliError> {
    let mut out: Vec<Entry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (k, v) = body
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("config line {line}: expected `key = value`")))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(CliError::usage(format!("config line {line}: empty key")));
        }
        if out.iter().any(|e| e.key == key) {
            return Err(CliError::usage(format!("config line {line}: duplicate key `{key}`")));
        }
        out.push(Entry {
            key,
            value: v.trim().to_string(),
            line,
        });
    }
    Ok(out)
}

/// Value of `--config`, if any, scanned before clap runs.
pub fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

/// Subcommand names on the command line, outermost first.
fn subcommand_path(root: &Command, args: &[OsString]) -> Vec<String> {
    let mut path = Vec::new();
    let mut cmd = root;
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            it.next();
            continue;
        }
        if s.starts_with('-') {
            continue;
        }
        match cmd.find_subcommand(s.as_ref()) {
            Some(sub) => {
                path.push(sub.get_name().to_string());
                cmd = sub;
                if !cmd.has_subcommands() {
                    break;
                }
            }
            None => break,
        }
    }
    path
}

fn leaf<'a>(root: &'a Command, path: &[String]) -> &'a Command {
    path.iter()
        .fold(root, |c, name| c.find_subcommand(name).expect("path built from this command"))
}

fn given_on_command_line(args: &[OsString], long: &str, short: Option<char>) -> bool {
    args.iter().skip(1).any(|a| {
        let s = a.to_string_lossy();
        let long_flag = format!("--{long}");
        if s == long_flag || s.starts_with(&format!("{long_flag}=")) {
            return true;
        }
        match short {
            Some(c) => !s.starts_with("--") && s.starts_with(&format!("-{c}")),
            None => false,
        }
    })
}

/// Appends config entries to `args`. Returns the injected long names.
pub fn inject(root: &Command, args: &mut Vec<OsString>, entries: &[Entry]) -> Result<Vec<String>, CliError> {
    let path = subcommand_path(root, args);
    if path.is_empty() {
        // let clap report the missing subcommand
        return Ok(Vec::new());
    }
    let cmd = leaf(root, &path);
    let mut injected = Vec::new();
    let mut extra = Vec::new();
    for e in entries {
        let arg = cmd
            .get_arguments()
            .chain(root.get_arguments())
            .find(|a| a.get_long() == Some(e.key.as_str()));
        let Some(arg) = arg else {
            return Err(CliError::usage(format!(
                "config line {}: unknown key `{}` for `{}`",
                e.line,
                e.key,
                path.join(" ")
            )));
        };
        if e.key == "config" {
            return Err(CliError::usage(format!("config line {}: nested config files are not supported", e.line)));
        }
        if given_on_command_line(args, &e.key, arg.get_short()) {
            continue;
        }
        if matches!(arg.get_action(), ArgAction::SetTrue) {
            match e.value.as_str() {
                "true" => extra.push(OsString::from(format!("--{}", e.key))),
                "false" => {}
                v => {
                    return Err(CliError::usage(format!(
                        "config line {}: `{}` takes true or false, got `{v}`",
                        e.line, e.key
                    )))
                }
            }
        } else {
            extra.push(OsString::from(format!("--{}={}", e.key, e.value)));
        }
        injected.push(e.key.clone());
    }
    // after the subcommand path, before any `--`
    let at = args.iter().position(|a| a == "--").unwrap_or(args.len());
    args.splice(at..at, extra);
    Ok(injected)
}

/// `key = value (source)` for every argument of the leaf subcommand.
pub fn describe(root: &Command, matches: &ArgMatches, injected: &[String]) -> String {
    let mut path = Vec::new();
    let mut m = matches;
    while let Some((name, sub)) = m.subcommand() {
        path.push(name.to_string());
        m = sub;
    }
    let cmd = leaf(root, &path);
    let mut out = format!("command: {}\n", path.join(" "));
    for arg in cmd.get_arguments() {
        let id = arg.get_id().as_str();
        let Some(long) = arg.get_long() else { continue };
        if matches!(id, "help" | "version" | "config" | "verbose") {
            continue;
        }
        let value = match m.get_raw(id) {
            Some(vals) => vals.map(|v| v.to_string_lossy().into_owned()).collect::<Vec<_>>().join(","),
            None => continue,
        };
        let source = if injected.iter().any(|k| k == long) {
            "config"
        } else {
            match m.value_source(id) {
                Some(ValueSource::CommandLine) => "flag",
                Some(ValueSource::EnvVariable) => "env",
                _ => "default",
            }
        };
        if matches!(arg.get_action(), ArgAction::SetTrue) && source == "default" {
            continue;
        }
        out.push_str(&format!("  {long} = {value} ({source})\n"));
    }
    out
}

pub fn read(path: &Path) -> Result<Vec<Entry>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read config {}: {e}", path.display())))?;
    parse(&text)
}
