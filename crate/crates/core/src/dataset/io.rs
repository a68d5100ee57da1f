use std::io::{BufRead, Write};

use super::placeholder::TemplatePair;
use super::{DatasetError, DatasetRecord, Targets};
use crate::cnl::PropositionKind;

/// Reads one JSON record per line; blank lines are skipped.
pub fn read_records(reader: impl BufRead) -> Result<Vec<DatasetRecord>, DatasetError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| DatasetError::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line).map_err(|e| DatasetError::Format {
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(rec);
    }
    Ok(out)
}

pub fn write_records(
    mut writer: impl Write,
    records: &[DatasetRecord],
) -> Result<(), DatasetError> {
    for r in records {
        let line = serde_json::to_string(r).map_err(|e| DatasetError::Io(e.to_string()))?;
        writeln!(writer, "{line}").map_err(|e| DatasetError::Io(e.to_string()))?;
    }
    Ok(())
}

/// Parses a template file:
///
/// ```text
/// # comment
/// [definition-const-compound]
/// CNL: A noun_1 is identified by an noun_2.
/// NL: Each noun_1 has an noun_2.
/// ```
///
/// Every `CNL:` line must be followed by its `NL:` line. Each pair is
/// validated and belongs to the latest category header.
pub fn parse_templates(text: &str) -> Result<Vec<TemplatePair>, DatasetError> {
    let mut out = Vec::new();
    let mut category: Option<PropositionKind> = None;
    let mut pending: Option<(usize, String)> = None;
    let err = |line: usize, message: &str| DatasetError::Format {
        line,
        message: message.to_string(),
    };
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(label) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            if pending.is_some() {
                return Err(err(n, "CNL line without NL line"));
            }
            category = Some(
                PropositionKind::from_label(label.trim())
                    .ok_or_else(|| err(n, &format!("unknown category '{label}'")))?,
            );
        } else if let Some(cnl) = line.strip_prefix("CNL:") {
            if pending.is_some() {
                return Err(err(n, "CNL line without NL line"));
            }
            pending = Some((n, cnl.trim().to_string()));
        } else if let Some(nl) = line.strip_prefix("NL:") {
            let (_, cnl) = pending
                .take()
                .ok_or_else(|| err(n, "NL line without CNL line"))?;
            let category = category.ok_or_else(|| err(n, "template before any category header"))?;
            let pair = TemplatePair::new(cnl, nl.trim(), category);
            pair.validate().map_err(|e| err(n, &e.to_string()))?;
            out.push(pair);
        } else {
            return Err(err(n, "expected a [category], CNL: or NL: line"));
        }
    }
    if let Some((n, _)) = pending {
        return Err(err(n, "CNL line without NL line"));
    }
    Ok(out)
}

/// Inverse of [`parse_templates`].
pub fn render_templates(templates: &[TemplatePair]) -> String {
    let mut out = String::new();
    let mut current = None;
    for t in templates {
        if current != Some(t.category) {
            if current.is_some() {
                out.push('\n');
            }
            out.push_str(&format!("[{}]\n", t.category));
            current = Some(t.category);
        }
        out.push_str(&format!("CNL: {}\nNL: {}\n", t.cnl, t.nl));
    }
    out
}

/// Reads generation targets: a TOML table of category label to count.
pub fn parse_targets(text: &str) -> Result<Targets, DatasetError> {
    toml::from_str(text).map_err(|e| DatasetError::Format {
        line: e
            .span()
            .map_or(0, |s| text[..s.start].lines().count().max(1)),
        message: e.message().to_string(),
    })
}
