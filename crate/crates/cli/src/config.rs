//! `--config` files: plain `key = value` lines naming long flags.
//!
//! Values fill in any flag of the chosen subcommand that was not given on the
//! command line. Keys that belong only to other subcommands are ignored; keys
//! no subcommand knows are an error.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::path::Path;

use clap::parser::ValueSource;
use clap::{ArgMatches, CommandFactory};

use crate::args::Cli;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigEntry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

/// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_config(text: &str) -> Result<Vec<ConfigEntry>, String> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key = value", i + 1))?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() {
            return Err(format!("config line {}: empty key", i + 1));
        }
        entries.push(ConfigEntry {
            key,
            value: value.trim().to_string(),
            line: i + 1,
        });
    }
    Ok(entries)
}

/// Returns `argv` extended with `--key value` for every config entry the
/// command line left unset.
pub fn merge_config(argv: Vec<OsString>) -> Result<Vec<OsString>, String> {
    // tolerant pass: required flags may still be coming from the file
    let matches = match Cli::command()
        .ignore_errors(true)
        .try_get_matches_from(argv.clone())
    {
        Ok(m) => m,
        // let the real parse report it
        Err(_) => return Ok(argv),
    };
    let Some((sub_name, sub_matches)) = matches.subcommand() else {
        return Ok(argv);
    };
    let Some(path) = sub_matches.get_one::<std::path::PathBuf>("config") else {
        return Ok(argv);
    };
    let entries = read_config(path)?;

    let root = Cli::command();
    let known: BTreeSet<String> = root
        .get_subcommands()
        .flat_map(|s| {
            s.get_arguments()
                .filter_map(|a| a.get_long().map(str::to_string))
        })
        .collect();
    let sub = root
        .find_subcommand(sub_name)
        .expect("subcommand came from this parser");

    let mut merged = argv;
    for entry in entries {
        if !known.contains(&entry.key) {
            return Err(format!(
                "config line {}: unknown key `{}`",
                entry.line, entry.key
            ));
        }
        if entry.key == "config" {
            continue;
        }
        let Some(arg) = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(entry.key.as_str()))
        else {
            continue;
        };
        if given_on_command_line(sub_matches, arg.get_id().as_str()) {
            continue;
        }
        let flag = format!("--{}", entry.key);
        if arg.get_action().takes_values() {
            merged.push(flag.into());
            merged.push(entry.value.into());
        } else {
            match entry.value.as_str() {
                "true" => merged.push(flag.into()),
                "false" => {}
                other => {
                    return Err(format!(
                        "config line {}: `{}` expects true or false, got `{other}`",
                        entry.line, entry.key
                    ))
                }
            }
        }
    }
    Ok(merged)
}

fn read_config(path: &Path) -> Result<Vec<ConfigEntry>, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    parse_config(&text)
}

fn given_on_command_line(matches: &ArgMatches, id: &str) -> bool {
    matches!(matches.value_source(id), Some(ValueSource::CommandLine))
}
