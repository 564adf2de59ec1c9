//! The `chiral` command line tool.
//!
//! Exit codes: 0 success, 1 bad input (usage, file or parse errors),
//! 2 coset cap exhausted under `--require-complete`, 3 a verification failed.

use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use chiral::families::{
    corollary_orders, member_triple, verify_conjugation_action, verify_members, AxiomMode,
    FamilyId, MemberOptions, MemberReport, FAMILY_CAP,
};
use chiral::perm::DEFAULT_INTERSECTION_CAP;
use chiral::polytope::{
    build_coset_geometry_with, standard_stabilizers, verify_axioms, AxiomOptions, EXHAUSTIVE_LIMIT,
};
use chiral::{enumerate, parse_presentation, parse_word_list, EnumerationConfig, Strategy};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_PARTIAL: i32 = 2;
pub const EXIT_FAILED: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "chiral",
    version,
    about = "Coset enumeration and chiral 4-polytope verification"
)]
#[command(
    after_help = "Exit codes: 0 success, 1 bad input, 2 cap exhausted (--require-complete), 3 verification failed"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum StrategyArg {
    Hlt,
    Felsch,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Hlt => Strategy::Hlt,
            StrategyArg::Felsch => Strategy::Felsch,
        }
    }
}

fn config(strategy: StrategyArg, cap: usize) -> EnumerationConfig {
    match strategy {
        StrategyArg::Hlt => EnumerationConfig::hlt(cap),
        StrategyArg::Felsch => EnumerationConfig::felsch(cap),
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate cosets of a subgroup in a presented group.
    Enumerate {
        /// Presentation file (`gens ...; rels ...;`).
        file: PathBuf,
        /// Comma-separated subgroup generators; empty for the trivial subgroup.
        #[arg(long, default_value = "")]
        subgroup: String,
        #[arg(long, default_value_t = EnumerationConfig::DEFAULT_CAP)]
        max_cosets: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::Hlt)]
        strategy: StrategyArg,
        /// Exit with code 2 if the enumeration does not complete.
        #[arg(long)]
        require_complete: bool,
        /// Print the standardized coset table.
        #[arg(long)]
        dump: bool,
    },
    /// Verify members of a family.
    Verify {
        #[arg(long)]
        family: FamilyId,
        /// A single value or an inclusive range such as `1..4`.
        #[arg(long, default_value = "1..8")]
        m: String,
        /// Write the JSON report here (`-` for standard output).
        #[arg(long)]
        json: Option<PathBuf>,
        /// Check the polytope axioms for every member.
        #[arg(long, conflicts_with = "no_axioms")]
        axioms: bool,
        /// Skip the axioms even for m = 1.
        #[arg(long)]
        no_axioms: bool,
        /// Check only every n-th section; allows groups above the exhaustive limit.
        #[arg(long)]
        sample_stride: Option<usize>,
        #[arg(long, default_value_t = FAMILY_CAP)]
        max_cosets: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::Felsch)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = DEFAULT_INTERSECTION_CAP)]
        intersection_cap: u128,
        /// Worker threads (0 = one per processor).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Leave timings out of the JSON report, making it reproducible byte for byte.
        #[arg(long)]
        no_timings: bool,
    },
    /// Prove the conjugation relations in U by partial enumeration.
    Conjugation {
        #[arg(long)]
        family: FamilyId,
        #[arg(long, default_value_t = EnumerationConfig::DEFAULT_CAP)]
        max_cosets: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::Felsch)]
        strategy: StrategyArg,
    },
    /// Build the coset geometry of one member and check the axioms.
    Polytope {
        #[arg(long)]
        family: FamilyId,
        #[arg(long, default_value_t = 1)]
        m: u64,
        /// Print the incidence dump.
        #[arg(long)]
        dump: bool,
        #[arg(long)]
        sample_stride: Option<usize>,
        #[arg(long, default_value_t = FAMILY_CAP)]
        max_cosets: usize,
    },
    /// Orders 2^n of the members with m = 2^k.
    Corollary {
        #[arg(long, default_value_t = 2)]
        k_max: u32,
        #[arg(long, default_value_t = FAMILY_CAP)]
        max_cosets: usize,
    },
}

/// Settings echoed into a verification report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub family: FamilyId,
    pub m_first: u64,
    pub m_last: u64,
    pub strategy: StrategyArg,
    pub max_cosets: usize,
    pub intersection_cap: u128,
    pub axioms: AxiomMode,
    pub sample_stride: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberJson {
    pub schema_version: u32,
    #[serde(flatten)]
    pub report: MemberReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: RunConfig,
    pub members: Vec<MemberJson>,
    pub pass: bool,
}

/// Parses `3`, `1..4` or `1..=4` (both range forms inclusive).
pub fn parse_m_range(s: &str) -> Result<RangeInclusive<u64>, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| format!("bad m value {t:?}"))
    };
    let (lo, hi) = match s.split_once("..") {
        None => {
            let v = num(s)?;
            (v, v)
        }
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
    };
    if lo < 1 || hi < lo {
        return Err(format!("empty or invalid m range {s:?}"));
    }
    Ok(lo..=hi)
}

/// Runs the tool on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn io<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    match cmd {
        Command::Enumerate {
            file,
            subgroup,
            max_cosets,
            strategy,
            require_complete,
            dump,
        } => {
            let text = fs::read_to_string(&file).map_err(|e| format!("{}: {e}", file.display()))?;
            let p = parse_presentation(&text).map_err(|e| format!("{}: {e}", file.display()))?;
            let h = parse_word_list(&subgroup, &p.names()).map_err(|e| format!("subgroup: {e}"))?;
            let t = enumerate(&p, &h, &config(strategy, max_cosets)).map_err(io)?;
            let s = t.stats();
            if t.is_complete() {
                writeln!(out, "index {}", t.degree()).map_err(io)?;
                writeln!(
                    err,
                    "defined {} cosets, max live {}, coincidences {}",
                    s.defined, s.max_live, s.coincidences
                )
                .map_err(io)?;
                if dump {
                    write!(out, "{}", t.standardize().map_err(io)?.dump()).map_err(io)?;
                }
                Ok(EXIT_OK)
            } else {
                writeln!(
                    out,
                    "Partial: cap {max_cosets} reached with {} live cosets",
                    t.degree()
                )
                .map_err(io)?;
                if dump {
                    write!(out, "{}", t.dump()).map_err(io)?;
                }
                Ok(if require_complete {
                    EXIT_PARTIAL
                } else {
                    EXIT_OK
                })
            }
        }
        Command::Verify {
            family,
            m,
            json,
            axioms,
            no_axioms,
            sample_stride,
            max_cosets,
            strategy,
            intersection_cap,
            jobs,
            no_timings,
        } => {
            let range = parse_m_range(&m)?;
            let axiom_mode = if axioms {
                AxiomMode::Always
            } else if no_axioms {
                AxiomMode::Never
            } else {
                AxiomMode::Auto
            };
            let opts = MemberOptions {
                enumeration: config(strategy, max_cosets),
                intersection_cap,
                axioms: axiom_mode,
                axiom_options: AxiomOptions { sample_stride },
            };
            let members: Vec<(FamilyId, u64)> = range.clone().map(|m| (family, m)).collect();
            writeln!(
                err,
                "verifying {} member(s) of family {family}",
                members.len()
            )
            .map_err(io)?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(io)?;
            let mut reports = pool
                .install(|| verify_members(&members, &opts))
                .map_err(io)?;
            if no_timings {
                for r in &mut reports {
                    r.timings_ms.clear();
                }
            }
            for r in &reports {
                writeln!(out, "{}", member_line(r)).map_err(io)?;
            }
            let pass = reports.iter().all(|r| r.passed);
            writeln!(
                out,
                "{}",
                if pass {
                    "all members passed"
                } else {
                    "some members FAILED"
                }
            )
            .map_err(io)?;
            let report = RunReport {
                schema_version: SCHEMA_VERSION,
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                config: RunConfig {
                    family,
                    m_first: *range.start(),
                    m_last: *range.end(),
                    strategy,
                    max_cosets,
                    intersection_cap,
                    axioms: axiom_mode,
                    sample_stride,
                },
                members: reports
                    .into_iter()
                    .map(|report| MemberJson {
                        schema_version: SCHEMA_VERSION,
                        report,
                    })
                    .collect(),
                pass,
            };
            if let Some(path) = json {
                let text = serde_json::to_string_pretty(&report).map_err(io)? + "\n";
                if path.as_os_str() == "-" {
                    write!(out, "{text}").map_err(io)?;
                } else {
                    fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?;
                }
            }
            Ok(if pass { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Conjugation {
            family,
            max_cosets,
            strategy,
        } => {
            let rows = verify_conjugation_action(family, &config(strategy, max_cosets));
            let width = rows.iter().map(|r| r.relation.len()).max().unwrap_or(0);
            for r in &rows {
                let status = if r.verified {
                    "verified"
                } else {
                    "unverified within cap"
                };
                writeln!(
                    out,
                    "{:width$}  {status:21}  cosets {}",
                    r.relation, r.cosets_used
                )
                .map_err(io)?;
            }
            Ok(if rows.iter().all(|r| r.verified) {
                EXIT_OK
            } else {
                EXIT_FAILED
            })
        }
        Command::Polytope {
            family,
            m,
            dump,
            sample_stride,
            max_cosets,
        } => {
            let t = member_triple(family, m, &EnumerationConfig::felsch(max_cosets)).map_err(io)?;
            let limit = if sample_stride.is_some() {
                u128::MAX
            } else {
                EXHAUSTIVE_LIMIT
            };
            let g = build_coset_geometry_with(&t, &standard_stabilizers(), limit).map_err(io)?;
            let r = verify_axioms(&g, t.schlafli(), &AxiomOptions { sample_stride });
            let fc = r.face_counts;
            writeln!(out, "group order {}  type {}", t.order(), t.schlafli()).map_err(io)?;
            writeln!(
                out,
                "faces {} {} {} {}  flags {}",
                fc[0], fc[1], fc[2], fc[3], r.flag_count
            )
            .map_err(io)?;
            let ok = |b: bool| if b { "ok" } else { "FAIL" };
            writeln!(
                out,
                "P1 {}  P2 {}  P3 {}  P4 {}{}",
                ok(r.p1_ok),
                ok(r.p2_ok),
                ok(r.p3_ok),
                ok(r.p4_ok),
                if r.sampled { "  (sampled)" } else { "" }
            )
            .map_err(io)?;
            let pair = |p: Option<(u64, u64)>| {
                p.map_or("not equivelar".to_string(), |(x, y)| format!("{{{x},{y}}}"))
            };
            writeln!(
                out,
                "facets {}  vertex-figures {}",
                pair(r.facet_section_type),
                pair(r.vertex_figure_type)
            )
            .map_err(io)?;
            if dump {
                write!(out, "{}", g.dump()).map_err(io)?;
            }
            Ok(if r.all_ok() { EXIT_OK } else { EXIT_FAILED })
        }
        Command::Corollary { k_max, max_cosets } => {
            let rows =
                corollary_orders(k_max, &EnumerationConfig::felsch(max_cosets)).map_err(io)?;
            for r in &rows {
                let mark = if r.matches { "ok" } else { "MISMATCH" };
                writeln!(
                    out,
                    "n={:<3} {} m={:<3} order {:<8} 2^n {:<8} {mark}",
                    r.n,
                    r.family,
                    r.m,
                    r.order,
                    1u64 << r.n
                )
                .map_err(io)?;
            }
            Ok(if rows.iter().all(|r| r.matches) {
                EXIT_OK
            } else {
                EXIT_FAILED
            })
        }
    }
}

fn member_line(r: &MemberReport) -> String {
    let opt = |b: Option<bool>| match b {
        Some(true) => "yes",
        Some(false) => "NO",
        None => "-",
    };
    let mut s = format!(
        "{} m={} order {} (expected {})",
        r.family,
        r.m,
        r.order.map_or("-".into(), |o| o.to_string()),
        r.expected_order
    );
    if let Some(k) = r.schlafli {
        s += &format!(" type {{{},{},{}}}", k[0], k[1], k[2]);
    }
    s += &format!(" solvable {}", opt(r.solvable));
    s += &format!(" intersection {}", opt(r.intersection_condition));
    s += &format!(" quotient {}", opt(r.quotient_criterion));
    s += &format!(
        " verdict {}",
        r.verdict.map_or("-".into(), |v| format!("{v:?}"))
    );
    if let (Some(w), Some(o)) = (&r.witness, r.witness_order) {
        s += &format!(" witness {w} (order {o})");
    }
    if let Some(a) = &r.axioms {
        s += &format!(
            " flags {} axioms {}",
            r.flags.unwrap_or(0),
            if a.all_ok() { "ok" } else { "FAIL" }
        );
    }
    if r.passed {
        s += "  PASS";
    } else {
        let stages: Vec<&str> = r.failures.iter().map(|f| f.stage.as_str()).collect();
        s += &format!("  FAIL [{}]", stages.join(", "));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m_ranges() {
        assert_eq!(parse_m_range("3").unwrap(), 3..=3);
        assert_eq!(parse_m_range("1..4").unwrap(), 1..=4);
        assert_eq!(parse_m_range("2..=5").unwrap(), 2..=5);
        assert!(parse_m_range("0..2").is_err());
        assert!(parse_m_range("4..1").is_err());
        assert!(parse_m_range("x").is_err());
    }
}
