//! Line-oriented instance files.
//!
//! ```text
//! # comment
//! field gf 5
//! rows 3
//! cols 3
//! rowblock 0 : 0 1
//! rowblock 1 : 2
//! colblock 0 : 0 1
//! colblock 1 : 2
//! require rows : 1 1
//! require cols : 1 1
//! matrix
//! 1 2 0
//! 2 4 1
//! 0 1 3
//! ```
//!
//! Block numbers run consecutively from 0; a block line with nothing after
//! the colon declares an empty block. Rational entries may be written `a/b`.

use std::fmt::Write as _;

use super::FormatError;
use crate::field::{FieldSpec, Scalar};
use crate::matrix::{Axis, ExactMatrix};
use crate::theorem::{BlockInstance, TheoremError};

/// Version of the instance file format.
pub const INSTANCE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (pos, ch) in body
        .char_indices()
        .chain(std::iter::once((body.len(), ' ')))
    {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(pos),
            (true, Some(s)) => {
                out.push(Token {
                    text: &body[s..pos],
                    column: body[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn err(line: usize, column: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_count(line: usize, tok: Token<'_>, what: &str) -> Result<usize, FormatError> {
    tok.text.parse().map_err(|_| {
        err(
            line,
            tok.column,
            format!(
                "expected a nonnegative integer {what}, found {:?}",
                tok.text
            ),
        )
    })
}

#[derive(Default)]
struct Header {
    field: Option<FieldSpec>,
    rows: Option<usize>,
    cols: Option<usize>,
    row_blocks: Vec<Vec<usize>>,
    col_blocks: Vec<Vec<usize>>,
    row_quotas: Option<(usize, Vec<usize>)>,
    col_quotas: Option<(usize, Vec<usize>)>,
    matrix: Option<Vec<Scalar>>,
}

fn set_once<T>(
    slot: &mut Option<T>,
    value: T,
    line: usize,
    column: usize,
    name: &str,
) -> Result<(), FormatError> {
    if slot.is_some() {
        return Err(err(line, column, format!("duplicate `{name}` line")));
    }
    *slot = Some(value);
    Ok(())
}

/// Parses and validates an instance file.
pub fn parse_instance(text: &str) -> Result<BlockInstance, FormatError> {
    let mut h = Header::default();
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut last_line = 0;

    while let Some((ln, raw)) = lines.next() {
        last_line = ln;
        let toks = tokenize(raw);
        let Some(&head) = toks.first() else { continue };
        let rest = &toks[1..];
        let end_column = raw.split('#').next().unwrap_or("").chars().count() + 1;
        let need = |k: usize| -> Result<Token<'_>, FormatError> {
            rest.get(k).copied().ok_or_else(|| {
                err(
                    ln,
                    end_column,
                    format!("`{}` line is incomplete", head.text),
                )
            })
        };
        match head.text {
            "field" => {
                let first = need(0)?;
                let descriptor: Vec<&str> = rest.iter().map(|t| t.text).collect();
                let field = FieldSpec::parse(&descriptor.join(" "))
                    .map_err(|e| err(ln, first.column, e.to_string()))?;
                set_once(&mut h.field, field, ln, head.column, "field")?;
            }
            "rows" | "cols" => {
                let tok = need(0)?;
                if let Some(extra) = rest.get(1) {
                    return Err(err(ln, extra.column, "unexpected token"));
                }
                let n = parse_count(ln, tok, "dimension")?;
                let slot = if head.text == "rows" {
                    &mut h.rows
                } else {
                    &mut h.cols
                };
                set_once(slot, n, ln, head.column, head.text)?;
            }
            "rowblock" | "colblock" => {
                let blocks = if head.text == "rowblock" {
                    &mut h.row_blocks
                } else {
                    &mut h.col_blocks
                };
                let k_tok = need(0)?;
                let k = parse_count(ln, k_tok, "block number")?;
                if k != blocks.len() {
                    return Err(err(
                        ln,
                        k_tok.column,
                        format!("expected block number {}, found {k}", blocks.len()),
                    ));
                }
                let colon = need(1)?;
                if colon.text != ":" {
                    return Err(err(
                        ln,
                        colon.column,
                        format!("expected `:`, found {:?}", colon.text),
                    ));
                }
                let members = rest[2..]
                    .iter()
                    .map(|&t| parse_count(ln, t, "index"))
                    .collect::<Result<Vec<_>, _>>()?;
                blocks.push(members);
            }
            "require" => {
                let side = need(0)?;
                let colon = need(1)?;
                if colon.text != ":" {
                    return Err(err(
                        ln,
                        colon.column,
                        format!("expected `:`, found {:?}", colon.text),
                    ));
                }
                let quotas = rest[2..]
                    .iter()
                    .map(|&t| parse_count(ln, t, "quota"))
                    .collect::<Result<Vec<_>, _>>()?;
                let slot = match side.text {
                    "rows" => &mut h.row_quotas,
                    "cols" => &mut h.col_quotas,
                    other => {
                        return Err(err(
                            ln,
                            side.column,
                            format!("expected `rows` or `cols`, found {other:?}"),
                        ));
                    }
                };
                set_once(slot, (ln, quotas), ln, head.column, "require")?;
            }
            "matrix" => {
                if let Some(extra) = rest.first() {
                    return Err(err(ln, extra.column, "unexpected token after `matrix`"));
                }
                let (Some(field), Some(n_rows), Some(n_cols)) = (h.field, h.rows, h.cols) else {
                    return Err(err(
                        ln,
                        head.column,
                        "`field`, `rows` and `cols` must precede `matrix`",
                    ));
                };
                if h.matrix.is_some() {
                    return Err(err(ln, head.column, "duplicate `matrix` section"));
                }
                let mut entries = Vec::with_capacity(n_rows * n_cols);
                let mut read = 0;
                while read < n_rows {
                    let Some((ln, raw)) = lines.next() else {
                        return Err(err(
                            last_line + 1,
                            1,
                            format!("matrix has {read} rows, expected {n_rows}"),
                        ));
                    };
                    last_line = ln;
                    let toks = tokenize(raw);
                    if toks.is_empty() {
                        continue;
                    }
                    if toks.len() != n_cols {
                        let column = toks.get(n_cols).map_or(1, |t| t.column);
                        return Err(err(
                            ln,
                            column,
                            format!("matrix row has {} entries, expected {n_cols}", toks.len()),
                        ));
                    }
                    for t in toks {
                        entries.push(
                            Scalar::parse(field, t.text)
                                .map_err(|e| err(ln, t.column, e.to_string()))?,
                        );
                    }
                    read += 1;
                }
                h.matrix = Some(entries);
            }
            other => return Err(err(ln, head.column, format!("unknown directive {other:?}"))),
        }
    }

    let eof = last_line + 1;
    let missing = |what: &str| err(eof, 1, format!("missing `{what}`"));
    let field = h.field.ok_or_else(|| missing("field"))?;
    let n_rows = h.rows.ok_or_else(|| missing("rows"))?;
    let n_cols = h.cols.ok_or_else(|| missing("cols"))?;
    let entries = h.matrix.ok_or_else(|| missing("matrix"))?;
    let (row_line, row_quotas) = h.row_quotas.ok_or_else(|| missing("require rows"))?;
    let (col_line, col_quotas) = h.col_quotas.ok_or_else(|| missing("require cols"))?;
    for (ln, quotas, blocks, name) in [
        (row_line, &row_quotas, &h.row_blocks, "row"),
        (col_line, &col_quotas, &h.col_blocks, "column"),
    ] {
        if quotas.len() != blocks.len() {
            return Err(err(
                ln,
                1,
                format!(
                    "{} {name} quotas for {} {name} blocks",
                    quotas.len(),
                    blocks.len()
                ),
            ));
        }
    }
    let matrix = ExactMatrix::new(field, n_rows, n_cols, entries).map_err(TheoremError::from)?;
    Ok(BlockInstance::new(
        matrix,
        h.row_blocks,
        h.col_blocks,
        row_quotas,
        col_quotas,
    )?)
}

fn join(values: &[usize]) -> String {
    values.iter().map(|v| format!(" {v}")).collect()
}

/// Renders an instance in the file format accepted by [`parse_instance`].
pub fn write_instance(inst: &BlockInstance) -> String {
    let g = inst.matrix();
    let mut out = String::new();
    writeln!(out, "field {}", g.field()).unwrap();
    writeln!(out, "rows {}", g.n_rows()).unwrap();
    writeln!(out, "cols {}", g.n_cols()).unwrap();
    for (axis, blocks) in [
        (Axis::Row, inst.row_blocks()),
        (Axis::Column, inst.col_blocks()),
    ] {
        let name = if axis == Axis::Row {
            "rowblock"
        } else {
            "colblock"
        };
        for (k, block) in blocks.iter().enumerate() {
            writeln!(out, "{name} {k} :{}", join(block)).unwrap();
        }
    }
    writeln!(out, "require rows :{}", join(inst.row_quotas())).unwrap();
    writeln!(out, "require cols :{}", join(inst.col_quotas())).unwrap();
    out.push_str("matrix\n");
    out.push_str(&g.to_string());
    out
}
