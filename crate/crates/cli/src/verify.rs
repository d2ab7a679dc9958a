use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, ValueEnum};
use serde::Serialize;

use shiftconj_core::blockcode::{
    find_noncommuting_witness, verify_commutation, verify_star_consistency_with, verify_star_involution,
    verify_windowed_involution,
};
use shiftconj_core::codec::{make_rho, RhoTable};
use shiftconj_core::group::{moved_words, verify_action_homomorphism, verify_freeness, verify_group_axioms, GroupElement};
use shiftconj_core::subshift::{verify_equivariance_with, ForbiddenSet};
use shiftconj_core::{parse_word, Error, Exec, Report, Result};

use crate::commands::read_forbidden;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Eq3,
    Involution,
    Commutation,
    Noncommutation,
    Star,
    Freeness,
    Equivariance,
    Suffix,
    Intertwining,
    HInverse,
    Correspondence,
    Sync,
}

#[derive(Args)]
pub struct OutputArgs {
    /// Emit one JSON object per line instead of plain text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Run only these suites (repeatable; default: all, in audit order).
    #[arg(long, value_enum)]
    suite: Vec<Suite>,
    /// Cap on every word-length bound.
    #[arg(long)]
    max_len: Option<usize>,
    /// Total factor length bound for the freeness sweep.
    #[arg(long, default_value_t = 6)]
    max_norm: usize,
    /// Use this forbidden set instead of the default suite of four.
    #[arg(long)]
    forbidden: Option<PathBuf>,
    /// Seed for the random forbidden set and the h-inverse samples.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Number of random words for the h-inverse check.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Flip one bit of the substitution table, given as SYMBOL:BIT.
    #[arg(long, hide = true)]
    corrupt_rho: Option<String>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Serialize)]
struct Line<'a> {
    #[serde(flatten)]
    report: &'a Report,
    duration_ms: u128,
}

struct Audit {
    max_len: Option<usize>,
    max_norm: usize,
    seed: u64,
    samples: usize,
    rho: RhoTable,
    suite_r: Vec<ForbiddenSet>,
}

impl Audit {
    fn bound(&self, default: usize) -> usize {
        self.max_len.map_or(default, |cap| cap.min(default))
    }

    fn run(&self, suite: Suite) -> Result<Vec<Report>> {
        let exec = Exec::default();
        let gens = 1..=6u8;
        let mut out = Vec::new();
        match suite {
            Suite::Eq3 => out.push(self.rho.check_unique_readability()),
            Suite::Involution => {
                for i in gens {
                    out.push(verify_star_involution(exec, i, self.bound(6))?);
                    out.push(verify_windowed_involution(exec, i, self.bound(6))?);
                }
            }
            Suite::Commutation => {
                for i in 1..=3 {
                    for j in 4..=6 {
                        out.push(verify_commutation(exec, i, j, self.bound(5))?);
                    }
                }
                out.push(verify_group_axioms(exec, 4));
                out.push(verify_action_homomorphism(exec, 3, self.bound(3)));
            }
            Suite::Noncommutation => {
                for member in [1, 4] {
                    let name = format!("noncommutation triple of {member}");
                    out.push(match find_noncommuting_witness(member, self.bound(4))? {
                        Some((i, k, w)) => Report::pass(name, 1, format!("f*{i} f*{k} != f*{k} f*{i} on [{w}]")),
                        None => Report::fail(name, 0, format!("no witness up to length {}", self.bound(4))),
                    });
                }
            }
            Suite::Star => {
                for i in gens {
                    out.push(verify_star_consistency_with(exec, i, self.bound(4))?);
                }
            }
            Suite::Freeness => {
                out.push(verify_freeness(exec, self.max_norm));
                for i in gens {
                    let name = format!("moved-words g{i}");
                    let words = moved_words(&GroupElement::generator(i)?, 50)?;
                    let distinct: std::collections::BTreeSet<_> = words.iter().collect();
                    out.push(if distinct.len() >= 50 {
                        Report::pass(name, 50, "50 distinct moved words")
                    } else {
                        Report::fail(name, 50, format!("only {} distinct moved words", distinct.len()))
                    });
                }
            }
            Suite::Equivariance => {
                for r in &self.suite_r {
                    for i in gens.clone() {
                        out.push(verify_equivariance_with(exec, i, r, self.bound(6))?);
                    }
                }
            }
            Suite::Suffix => {
                out.push(self.rho.check_suffix_agreement());
                out.push(self.rho.check_prefix_discrimination());
                out.push(self.rho.check_leading_uniqueness());
            }
            Suite::Intertwining => {
                for i in gens {
                    out.push(self.rho.verify_intertwining_with(exec, i, self.bound(5).max(2))?);
                }
                for i in [1, 4] {
                    out.push(self.rho.verify_shift_equivariance(exec, i, self.bound(4).max(3))?);
                }
                out.push(self.rho.verify_round_trip(exec, self.bound(5)));
            }
            Suite::HInverse => {
                for i in gens {
                    out.push(self.rho.verify_h_inverse(i, self.samples, self.seed)?);
                }
            }
            Suite::Correspondence => {
                for r in &self.suite_r {
                    out.push(self.rho.verify_forbidden_correspondence_with(exec, r, self.bound(3))?);
                }
            }
            Suite::Sync => {
                let sync = self.rho.sync_window_with(exec, 4);
                let certified = self.rho.phases(&sync.certificate).len() >= 2;
                let name = "sync-window";
                out.push(if sync.length <= 43 && certified {
                    Report::pass(
                        name,
                        sync.words,
                        format!("L = {}, certificate {} from [{}] at offset {}", sync.length, sync.certificate, sync.source, sync.offset),
                    )
                } else {
                    Report::fail(name, sync.words, format!("L = {}, certificate {} has {} phases", sync.length, sync.certificate, self.rho.phases(&sync.certificate).len()))
                });
                out.push(self.rho.check_phase_uniqueness(exec, sync.length, 4));
                out.push(self.rho.check_phase_uniqueness(exec, 43, 4));
            }
        }
        Ok(out)
    }
}

fn corrupted(spec: &str) -> Result<RhoTable> {
    let bad = || Error::Precondition(format!("--corrupt-rho expects SYMBOL:BIT, got `{spec}`"));
    let (sym, bit) = spec.rsplit_once(':').ok_or_else(bad)?;
    let sym = parse_word(sym)?;
    let [s] = sym.as_slice() else { return Err(bad()) };
    let bit: usize = bit.parse().map_err(|_| bad())?;
    make_rho().with_flipped_bit(*s, bit)
}

pub fn run(args: &VerifyArgs) -> Result<bool> {
    let rho = match &args.corrupt_rho {
        Some(spec) => corrupted(spec)?,
        None => make_rho(),
    };
    let suite_r = match &args.forbidden {
        Some(path) => vec![read_forbidden(Some(path))?],
        None => vec![
            ForbiddenSet::empty(),
            ForbiddenSet::new([parse_word("a1")?])?,
            ForbiddenSet::new([parse_word("a2 a1 a2")?])?,
            ForbiddenSet::random(args.seed, 3),
        ],
    };
    if args.samples == 0 {
        return Err(Error::Precondition("--samples must be at least 1".into()));
    }
    let audit = Audit { max_len: args.max_len, max_norm: args.max_norm, seed: args.seed, samples: args.samples, rho, suite_r };
    let suites: Vec<Suite> = if args.suite.is_empty() {
        Suite::value_variants().to_vec()
    } else {
        Suite::value_variants().iter().copied().filter(|s| args.suite.contains(s)).collect()
    };

    let mut all_pass = true;
    let mut stdout = io::stdout().lock();
    for suite in suites {
        let start = Instant::now();
        let reports = audit.run(suite)?;
        let ms = start.elapsed().as_millis();
        for report in &reports {
            all_pass &= report.status != shiftconj_core::Status::Fail;
            let line = if args.out.json {
                serde_json::to_string(&Line { report, duration_ms: ms }).expect("reports serialize")
            } else {
                format!("{report} [{} checked, {} skipped]", report.checked, report.skipped)
            };
            let _ = writeln!(stdout, "{line}");
        }
    }
    Ok(all_pass)
}
