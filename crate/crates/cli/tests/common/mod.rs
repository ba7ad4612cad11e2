#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

pub fn gspace<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_gspace"))
        .args(args)
        .output()
        .expect("gspace binary runs")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

/// Drops timestamp lines, which are the only intended difference between reruns.
pub fn without_timestamp(text: &str) -> String {
    text.lines()
        .filter(|l| !l.contains("timestamp"))
        .map(|l| format!("{l}\n"))
        .collect()
}

/// Non-comment lines of a CSV document.
pub fn data_lines(text: &str) -> Vec<&str> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .collect()
}

/// Parses the numeric rows under a CSV header into columns by header name.
pub fn column(text: &str, name: &str) -> Vec<f64> {
    let lines = data_lines(text);
    let header: Vec<&str> = lines[0].split(',').collect();
    let idx = header
        .iter()
        .position(|h| *h == name)
        .expect("column present");
    lines[1..]
        .iter()
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

pub fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// All files of a directory as (name, content without timestamps), sorted by name.
pub fn snapshot_dir(dir: &Path) -> Vec<(String, String)> {
    let mut files: Vec<(String, String)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                without_timestamp(&read(&e.path())),
            )
        })
        .collect();
    files.sort();
    files
}
