//! Command implementations behind the `twistkit` binary.
//!
//! Exit codes: 0 success or relation holds, 10 relation (or a verification
//! check) fails, 20 search truncated by its pair budget, 30 any other error,
//! 31 two internal decision procedures disagreed.

pub mod config;
pub mod verify;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use serde_json::json;

use twistkit_core::catalog::{self, LoadedGroup};
use twistkit_core::chartab::{frobenius_schur_indicator, quadratic_character_indices, TableJson};
use twistkit_core::cyclo::field_of_values;
use twistkit_core::twists::{self, Relation, RepSpec, RepSpecJson, SearchMode, TwistContext};
use twistkit_core::weil::{self, WeilPolynomial};

use crate::config::Settings;

pub const EXIT_OK: i32 = 0;
pub const EXIT_RELATION_FAILS: i32 = 10;
pub const EXIT_TRUNCATED: i32 = 20;
pub const EXIT_ERROR: i32 = 30;
pub const EXIT_ORACLE_DISAGREEMENT: i32 = 31;

/// Maps an error to its exit code.
pub fn exit_code_for(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<twistkit_core::Error>() {
        Some(twistkit_core::Error::OracleDisagreement(_)) => EXIT_ORACLE_DISAGREEMENT,
        _ => EXIT_ERROR,
    }
}

/// Where a group comes from.
#[derive(Clone, Debug)]
pub enum GroupSource {
    Builtin(String),
    File(PathBuf),
    Remote(String),
}

pub fn load_group(source: &GroupSource, settings: &Settings) -> Result<LoadedGroup> {
    let record = match source {
        GroupSource::Builtin(name) => catalog::builtin(name)?,
        GroupSource::File(path) => catalog::load_group_file(path)
            .with_context(|| format!("reading group file {}", path.display()))?,
        GroupSource::Remote(label) => catalog::fetch_remote_group(label, &settings.remote)?,
    };
    Ok(catalog::load(&record, settings.max_group_order)?)
}

fn class_labels(group: &twistkit_core::groups::GroupData) -> Vec<String> {
    let mut seen = std::collections::HashMap::new();
    group
        .classes()
        .iter()
        .map(|c| {
            let n = seen.entry(c.element_order).or_insert(0u8);
            let label = format!("{}{}", c.element_order, (b'a' + *n) as char);
            *n += 1;
            label
        })
        .collect()
}

pub fn cmd_group_info(out: &mut dyn Write, loaded: &LoadedGroup, as_json: bool) -> Result<i32> {
    let g = &loaded.group;
    let labels = class_labels(g);
    let squares = g.power_map(2);
    if as_json {
        let classes: Vec<_> = g
            .classes()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                json!({
                    "label": labels[i],
                    "size": c.size(),
                    "order": c.element_order,
                    "representative": g.element(c.representative),
                    "square": squares[i],
                })
            })
            .collect();
        let v = json!({
            "group": g.name(),
            "order": g.order(),
            "degree": g.degree(),
            "exponent": g.exponent(),
            "abelianization": g.abelianization(),
            "classes": classes,
            "annotations": loaded.record.annotations,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
        return Ok(EXIT_OK);
    }
    writeln!(out, "group {}", g.name())?;
    writeln!(out, "order {}", g.order())?;
    writeln!(out, "degree {}", g.degree())?;
    writeln!(out, "exponent {}", g.exponent())?;
    writeln!(out, "abelianization {:?}", g.abelianization())?;
    writeln!(out, "classes {}", g.num_classes())?;
    for (i, c) in g.classes().iter().enumerate() {
        writeln!(
            out,
            "  {:<4} size {:>5}  square {:<4} rep {}",
            labels[i],
            c.size(),
            labels[squares[i]],
            g.element(c.representative)
        )?;
    }
    if let Some(id) = &loaded.record.annotations.gap_id {
        writeln!(out, "small group id (annotation, unverified) {id}")?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_chartab(out: &mut dyn Write, loaded: &LoadedGroup, as_json: bool) -> Result<i32> {
    let table = &loaded.table;
    if as_json {
        writeln!(out, "{}", serde_json::to_string_pretty(&table.to_json())?)?;
        return Ok(EXIT_OK);
    }
    let g = table.group();
    let labels = class_labels(g);
    let quadratic = quadratic_character_indices(table);
    let cells: Vec<Vec<String>> = table
        .irreducibles()
        .iter()
        .map(|chi| {
            chi.values()
                .iter()
                .map(|v| Ok(v.descend()?.to_string()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let width: Vec<usize> = (0..g.num_classes())
        .map(|c| {
            cells
                .iter()
                .map(|row| row[c].len())
                .chain([labels[c].len(), g.classes()[c].size().to_string().len()])
                .max()
                .unwrap_or(1)
        })
        .collect();
    let mut header = format!("{:<6}", "");
    let mut sizes = format!("{:<6}", "size");
    for c in 0..g.num_classes() {
        header.push_str(&format!("  {:>w$}", labels[c], w = width[c]));
        sizes.push_str(&format!("  {:>w$}", g.classes()[c].size(), w = width[c]));
    }
    writeln!(out, "{}  (order {})", g.name(), g.order())?;
    writeln!(out, "{header}")?;
    writeln!(out, "{sizes}")?;
    for (i, row) in cells.iter().enumerate() {
        let mut line = format!("{:<6}", format!("X.{i}"));
        for (c, cell) in row.iter().enumerate() {
            line.push_str(&format!("  {:>w$}", cell, w = width[c]));
        }
        let chi = table.irreducible(i);
        let mut flags = Vec::new();
        if table.is_faithful(i) {
            flags.push("faithful".to_string());
        }
        if quadratic.contains(&i) {
            flags.push("quadratic".to_string());
        }
        let field = field_of_values(chi.values())?;
        if field.rational {
            flags.push("rational".to_string());
        } else if field.in_gaussian_rationals {
            flags.push("Q(i)-rational character".to_string());
        }
        flags.push(format!("indicator {}", frobenius_schur_indicator(chi)?));
        writeln!(out, "{line}    [{}]", flags.join(", "))?;
    }
    Ok(EXIT_OK)
}

/// Accepts `1,0,2` or a JSON spec `{"group": ..., "mults": [...]}`.
pub fn parse_rep(ctx: &Arc<TwistContext>, text: &str) -> Result<RepSpec> {
    let text = text.trim();
    if text.starts_with('{') {
        let json: RepSpecJson = serde_json::from_str(text).context("parsing representation JSON")?;
        return Ok(RepSpec::from_json(ctx, &json)?);
    }
    let mults = text
        .split(',')
        .map(|t| t.trim().parse::<u32>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .with_context(|| format!("parsing multiplicities {text:?}"))?;
    Ok(RepSpec::new(ctx, mults)?)
}

pub fn parse_relations(arg: &str) -> Result<Vec<Relation>> {
    Ok(match arg {
        "q" => vec![Relation::Quadratic],
        "pq" => vec![Relation::Polyquadratic],
        "lq" => vec![Relation::LocallyQuadratic],
        "lpq" => vec![Relation::LocallyPolyquadratic],
        "all" => vec![
            Relation::Quadratic,
            Relation::Polyquadratic,
            Relation::LocallyQuadratic,
            Relation::LocallyPolyquadratic,
        ],
        other => bail!("unknown relation {other:?}; expected q, pq, lq, lpq or all"),
    })
}

pub fn cmd_twist_check(
    out: &mut dyn Write,
    loaded: LoadedGroup,
    a: &str,
    b: &str,
    relations: &[Relation],
) -> Result<i32> {
    let ctx = TwistContext::new(loaded.table)?;
    let a = parse_rep(&ctx, a)?;
    let b = parse_rep(&ctx, b)?;
    let mut all_hold = true;
    for &rel in relations {
        let v = twists::decide(rel, &a, &b)?;
        if !twists::verify_witness(&v, &a, &b)? {
            return Err(twistkit_core::Error::OracleDisagreement(format!(
                "{rel:?} witness failed to re-verify"
            ))
            .into());
        }
        all_hold &= v.holds;
        writeln!(out, "{}", serde_json::to_string(&v)?)?;
    }
    Ok(if all_hold { EXIT_OK } else { EXIT_RELATION_FAILS })
}

pub fn parse_mode(arg: &str) -> Result<SearchMode> {
    match arg {
        "lq-not-q" => Ok(SearchMode::LqNotQ),
        "lpq-not-pq" => Ok(SearchMode::LpqNotPq),
        other => bail!("unknown mode {other:?}; expected lq-not-q or lpq-not-pq"),
    }
}

pub fn cmd_search(
    out: &mut dyn Write,
    loaded: LoadedGroup,
    degree: u64,
    mode: SearchMode,
    budget: usize,
) -> Result<i32> {
    let name = loaded.group.name().to_string();
    let ctx = TwistContext::new(loaded.table)?;
    let res = twists::search_counterexamples(&ctx, degree, mode, budget)?;
    for (a, b) in &res.pairs {
        writeln!(
            out,
            "{}",
            json!({
                "a": RepSpecJson { group: name.clone(), mults: a.clone() },
                "b": RepSpecJson { group: name.clone(), mults: b.clone() },
            })
        )?;
    }
    writeln!(
        out,
        "{}",
        json!({
            "summary": {
                "group": name,
                "degree": degree,
                "mode": res.mode,
                "pairs_examined": res.examined,
                "found": res.pairs.len(),
                "truncated": res.truncated,
                "exhaustive": !res.truncated,
            }
        })
    )?;
    Ok(if res.truncated { EXIT_TRUNCATED } else { EXIT_OK })
}

pub fn parse_coeffs(text: &str) -> Result<Vec<i128>> {
    text.split(',')
        .map(|t| t.trim().parse::<i128>().with_context(|| format!("bad coefficient {t:?}")))
        .collect()
}

pub fn cmd_weil_basechange(out: &mut dyn Write, p: &WeilPolynomial, k: u32) -> Result<i32> {
    let b = weil::base_change(p, k)?;
    writeln!(out, "{}", serde_json::to_string(&b)?)?;
    Ok(EXIT_OK)
}

/// Reads polynomial lines from a path, or standard input for `-`.
pub fn read_input(path: &std::path::Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

/// Classifies consecutive lines pairwise: (1, 2), (3, 4), ...
pub fn cmd_weil_classify(out: &mut dyn Write, text: &str) -> Result<i32> {
    let polys = weil::parse_polynomial_lines(text)?;
    if polys.len() % 2 != 0 {
        bail!("expected an even number of polynomials, found {}", polys.len());
    }
    for pair in polys.chunks(2) {
        let c = weil::classify_pair(&pair[0], &pair[1])?;
        writeln!(out, "{}", serde_json::to_string(&c)?)?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_weil_trace_zero(out: &mut dyn Write, max_q: u64) -> Result<i32> {
    let sweep = weil::trace_zero_sweep(max_q)?;
    for f in &sweep.falsifications {
        writeln!(out, "{}", serde_json::to_string(f)?)?;
    }
    writeln!(
        out,
        "{}",
        json!({ "summary": {
            "max_q": sweep.max_q,
            "configurations": sweep.configurations,
            "hypothesis_met": sweep.hypothesis_met,
            "falsifications": sweep.falsifications.len(),
        }})
    )?;
    Ok(if sweep.falsifications.is_empty() { EXIT_OK } else { EXIT_RELATION_FAILS })
}

pub fn cmd_weil_phi(out: &mut dyn Write) -> Result<i32> {
    let report = weil::supersingular_phi()?;
    for e in &report.entries {
        writeln!(out, "{}", serde_json::to_string(e)?)?;
    }
    writeln!(
        out,
        "{}",
        json!({ "summary": {
            "injective": report.injective,
            "matches_printed": report.matches,
            "discrepancies": report.discrepancies.iter().map(|d| json!({
                "source": d.source.to_string(),
                "computed": d.image.to_string(),
                "printed": d.printed.to_string(),
            })).collect::<Vec<_>>(),
            "printed_not_attained": report.printed_not_attained.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        }})
    )?;
    Ok(if report.injective { EXIT_OK } else { EXIT_RELATION_FAILS })
}

pub fn cmd_verify(out: &mut dyn Write, settings: &Settings, as_json: bool, timings: bool) -> Result<i32> {
    let (report, times) = verify::run_all(settings.max_group_order)?;
    let code = report.exit_code();
    if as_json {
        let report = if timings {
            verify::with_timings(report, &times)
        } else {
            report
        };
        writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    } else {
        write!(out, "{}", verify::with_timings(report, &times).to_text())?;
    }
    Ok(code)
}

/// Reimports an exported table, as a round-trip check for external tools.
pub fn import_table(loaded: &LoadedGroup, text: &str) -> Result<twistkit_core::chartab::CharacterTable> {
    let json: TableJson = serde_json::from_str(text)?;
    Ok(twistkit_core::chartab::CharacterTable::from_json(&loaded.group, &json)?)
}
