use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use shiftconj_core::codec::{make_rho, BLOCK};
use shiftconj_core::alphabet::parse_word_lines;
use shiftconj_core::group::{self, claim1_witness, GroupElement};
use shiftconj_core::subshift::{self, act_on_r, ForbiddenSet};
use shiftconj_core::{parse_word, BinaryWord, Error, Result};

use crate::verify::OutputArgs;

pub fn read_input(file: Option<&Path>) -> Result<String> {
    let text = match file {
        Some(path) => fs::read_to_string(path),
        None => {
            let mut buf = String::new();
            io::stdin().read_to_string(&mut buf).map(|_| buf)
        }
    };
    text.map_err(|e| {
        let name = file.map_or("standard input".to_string(), |p| p.display().to_string());
        Error::Precondition(format!("cannot read {name}: {e}"))
    })
}

pub fn read_forbidden(file: Option<&Path>) -> Result<ForbiddenSet> {
    match file {
        Some(path) => ForbiddenSet::parse(&read_input(Some(path))?),
        None => Ok(ForbiddenSet::empty()),
    }
}

fn emit(lines: impl IntoIterator<Item = String>) -> Result<bool> {
    let mut out = io::stdout().lock();
    for line in lines {
        if writeln!(out, "{line}").is_err() {
            break;
        }
    }
    Ok(true)
}

pub fn encode(file: Option<&Path>) -> Result<bool> {
    let rho = make_rho();
    let words = parse_word_lines(&read_input(file)?)?;
    emit(words.into_iter().map(|(_, w)| rho.encode(&w).to_string()).collect::<Vec<_>>())
}

pub fn decode(file: Option<&Path>, phase: Option<usize>) -> Result<bool> {
    if let Some(p) = phase.filter(|&p| p >= BLOCK) {
        return Err(Error::Precondition(format!("phase {p} outside 0..{BLOCK}")));
    }
    let rho = make_rho();
    let mut lines = Vec::new();
    for (k, line) in read_input(file)?.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with("//") {
            continue;
        }
        let y: BinaryWord = line.parse().map_err(|e: Error| Error::Line { line: k + 1, message: e.to_string() })?;
        for d in rho.decode(&y) {
            if phase.is_none_or(|p| p == d.phase.value()) {
                lines.push(format!("{} [{}] {} {}", d.phase, d.word, d.lead, d.trail));
            }
        }
    }
    emit(lines)
}

pub fn language(len: usize, forbidden: Option<&Path>) -> Result<bool> {
    let r = read_forbidden(forbidden)?;
    emit(subshift::language(&r, len)?.into_iter().map(|w| w.to_string()).collect::<Vec<_>>())
}

pub fn act(gamma: &str, forbidden: Option<&Path>) -> Result<bool> {
    let g: GroupElement = gamma.parse()?;
    let r = ForbiddenSet::parse(&read_input(forbidden)?)?;
    emit(act_on_r(&g, &r).members().map(|w| w.to_string()).collect::<Vec<_>>())
}

pub fn witness(gamma: &str, prefix: &str) -> Result<bool> {
    let g: GroupElement = gamma.parse()?;
    let v = claim1_witness(&g, &parse_word(prefix)?)?;
    let image = group::act(&g, &v)?;
    emit([v.to_string(), image.to_string()])
}

pub fn sync_window(out: &OutputArgs) -> Result<bool> {
    let sync = make_rho().sync_window();
    let lines = if out.json {
        vec![serde_json::json!({
            "length": sync.length,
            "certificate": sync.certificate.to_string(),
            "source": sync.source.to_string(),
            "offset": sync.offset,
            "words": sync.words,
        })
        .to_string()]
    } else {
        vec![
            format!("length {}", sync.length),
            format!("certificate {}", sync.certificate),
            format!("source [{}] offset {}", sync.source, sync.offset),
        ]
    };
    emit(lines)
}
