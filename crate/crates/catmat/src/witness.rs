//! Reading and writing witness files: a line-based text format carrying a
//! complete finite category (hom sizes, identities, full composition table).
//!
//! Writers emit a fixed canonical ordering so identical categories give
//! byte-identical files. Readers accept the records in any order but demand
//! a total table with no duplicates. Lines starting with `#` are comments.

use std::fmt::Write as _;

use thiserror::Error;

use crate::category::{CategoryError, FinCategory, MorphId, Table};

pub const WITNESS_MAGIC: &str = "catmat-witness v1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("first line must be `{WITNESS_MAGIC}`")]
    BadMagic,
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: duplicate {what}")]
    Duplicate { line: usize, what: String },
    #[error("missing {0}")]
    Missing(String),
    #[error(transparent)]
    Category(#[from] CategoryError),
}

/// Serializes a category in canonical order. `comments` become `#` lines
/// right after the magic header.
pub fn write_witness(c: &FinCategory, comments: &[String]) -> String {
    let n = c.n();
    let mut out = String::new();
    let _ = writeln!(out, "{WITNESS_MAGIC}");
    for comment in comments {
        let _ = writeln!(out, "# {comment}");
    }
    let _ = writeln!(out, "objects {n}");
    for i in 1..=n {
        for j in 1..=n {
            let _ = writeln!(out, "hom {i} {j} {}", c.hom_size(i, j));
        }
    }
    for i in 1..=n {
        let _ = writeln!(out, "id {i} {}", c.identity(i).local);
    }
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                for f in 1..=c.hom_size(i, j) {
                    for g in 1..=c.hom_size(j, k) {
                        let r = c.compose(MorphId::new(j, k, g), MorphId::new(i, j, f));
                        let _ = writeln!(out, "comp {i} {j} {k} {f} {g} {}", r.local);
                    }
                }
            }
        }
    }
    out
}

/// Parses a witness file. Structural problems (bad header, duplicates,
/// missing records, unknown pairs) are errors; law violations are not
/// checked here — run `verify` on the result.
pub fn parse_witness(text: &str) -> Result<FinCategory, WitnessError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(idx, line)| (idx + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'));

    match lines.next() {
        Some((_, line)) if line == WITNESS_MAGIC => {}
        _ => return Err(WitnessError::BadMagic),
    }

    let malformed = |line: usize, message: &str| WitnessError::Malformed {
        line,
        message: message.to_string(),
    };

    // Records may come in any order, so split and number them first and
    // locate the unique `objects` line before interpreting the rest.
    let mut records: Vec<(usize, &str, Vec<usize>)> = Vec::new();
    for (lineno, line) in lines {
        let mut words = line.split_whitespace();
        let keyword = words.next().unwrap();
        let args: Vec<usize> = words
            .map(|w| {
                w.parse::<usize>()
                    .map_err(|_| malformed(lineno, &format!("invalid number `{w}`")))
            })
            .collect::<Result<_, _>>()?;
        records.push((lineno, keyword, args));
    }

    let mut n: Option<usize> = None;
    for (lineno, keyword, args) in &records {
        if *keyword != "objects" {
            continue;
        }
        if n.is_some() {
            return Err(WitnessError::Duplicate {
                line: *lineno,
                what: "objects line".to_string(),
            });
        }
        match args.as_slice() {
            [count] if *count >= 1 => n = Some(*count),
            _ => return Err(malformed(*lineno, "expected `objects <n>` with n >= 1")),
        }
    }
    let n = n.ok_or_else(|| WitnessError::Missing("objects line".to_string()))?;

    let mut sizes: Vec<Option<usize>> = vec![None; n * n];
    let mut ids: Vec<Option<(usize, u32)>> = vec![None; n];
    // (line, i, j, k, f, g, result), validated against sizes once all are known.
    let mut comps: Vec<(usize, usize, usize, usize, usize, usize, u32)> = Vec::new();

    for (lineno, keyword, args) in records {
        match keyword {
            "objects" => {}
            "hom" => {
                match args.as_slice() {
                    [i, j, count]
                        if (1..=n).contains(i) && (1..=n).contains(j) && *count >= 1 =>
                    {
                        let slot = &mut sizes[(i - 1) * n + (j - 1)];
                        if slot.is_some() {
                            return Err(WitnessError::Duplicate {
                                line: lineno,
                                what: format!("hom {i} {j}"),
                            });
                        }
                        *slot = Some(*count);
                    }
                    _ => return Err(malformed(lineno, "expected `hom <i> <j> <count>`")),
                }
            }
            "id" => {
                match args.as_slice() {
                    [i, local] if (1..=n).contains(i) && (1..=u32::MAX as usize).contains(local) => {
                        let slot = &mut ids[i - 1];
                        if slot.is_some() {
                            return Err(WitnessError::Duplicate {
                                line: lineno,
                                what: format!("id {i}"),
                            });
                        }
                        *slot = Some((lineno, *local as u32));
                    }
                    _ => return Err(malformed(lineno, "expected `id <i> <local>`")),
                }
            }
            "comp" => {
                match args.as_slice() {
                    [i, j, k, f, g, result]
                        if (1..=n).contains(i)
                            && (1..=n).contains(j)
                            && (1..=n).contains(k)
                            && *f >= 1
                            && *g >= 1
                            && (1..=u32::MAX as usize).contains(result) =>
                    {
                        comps.push((lineno, *i, *j, *k, *f, *g, *result as u32));
                    }
                    _ => {
                        return Err(malformed(
                            lineno,
                            "expected `comp <i> <j> <k> <f> <g> <result>` with positive locals",
                        ))
                    }
                }
            }
            other => return Err(malformed(lineno, &format!("unknown record `{other}`"))),
        }
    }

    let mut size_vec = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            size_vec.push(
                sizes[(i - 1) * n + (j - 1)]
                    .ok_or_else(|| WitnessError::Missing(format!("hom {i} {j}")))?,
            );
        }
    }
    let mut id_vec = Vec::with_capacity(n);
    for i in 1..=n {
        let (lineno, id) = ids[i - 1].ok_or_else(|| WitnessError::Missing(format!("id {i}")))?;
        if id as usize > size_vec[(i - 1) * n + (i - 1)] {
            return Err(WitnessError::Malformed {
                line: lineno,
                message: format!("id {i}: local {id} exceeds hom({i},{i})"),
            });
        }
        id_vec.push(id);
    }

    let mut table = Table::new(n, &size_vec)?;
    let size = |i: usize, j: usize| size_vec[(i - 1) * n + (j - 1)];
    let mut seen = 0u64;
    for (lineno, i, j, k, f, g, result) in comps {
        if f > size(i, j) || g > size(j, k) {
            return Err(WitnessError::Malformed {
                line: lineno,
                message: format!("comp {i} {j} {k} {f} {g}: no such composable pair"),
            });
        }
        if table.get(i, j, k, f, g) != 0 {
            return Err(WitnessError::Duplicate {
                line: lineno,
                what: format!("comp {i} {j} {k} {f} {g}"),
            });
        }
        // An out-of-range result is kept: it surfaces as a closure
        // violation under verify rather than a parse failure.
        table.set(i, j, k, f, g, result);
        seen += 1;
    }
    let mut expected = 0u64;
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                expected += (size(i, j) * size(j, k)) as u64;
            }
        }
    }
    if seen != expected {
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    for f in 1..=size(i, j) {
                        for g in 1..=size(j, k) {
                            if table.get(i, j, k, f, g) == 0 {
                                return Err(WitnessError::Missing(format!(
                                    "comp {i} {j} {k} {f} {g}"
                                )));
                            }
                        }
                    }
                }
            }
        }
    }

    Ok(FinCategory::from_table(table, id_vec))
}
