//! CSV and plain-text ingestion.
//!
//! Two CSV schemas (UTF-8, comma-separated, LF or CRLF, header mandatory):
//!
//! * ratings: `unit_id,rating_a,rating_b[,group,subgroup]`, ratings given
//!   as labels from the category ladder (default A-D);
//! * group kappas: `label,parent,m,kappa_linear,kappa_vqr`, kappas numeric
//!   or `na`.
//!
//! Numbers use decimal points; decimal commas are rejected with a pointed
//! message rather than guessed at. Plain-text grids (disagreement weights,
//! joint distributions) are whitespace-separated, one row per line.

use std::io::Read;

use crate::categories::{CategorySet, RatingPair};
use crate::dataset::GroupRecord;
use crate::error::{Error, Result};
use crate::sim::JointDistribution;
use crate::weights::WeightScheme;

/// Pairs for one (group, subgroup) cell of a ratings file.
#[derive(Debug, Clone, PartialEq)]
pub struct RatingsGroup {
    pub group: Option<String>,
    pub subgroup: Option<String>,
    pub pairs: Vec<RatingPair>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatingsFile {
    pub cats: CategorySet,
    pub groups: Vec<RatingsGroup>,
}

impl RatingsFile {
    pub fn total_pairs(&self) -> usize {
        self.groups.iter().map(|g| g.pairs.len()).sum()
    }
}

fn parse_err(line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn record_line(record: &csv::StringRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

/// Parse a ratings CSV against a category ladder (default A-D).
/// Pairs are grouped by (group, subgroup) in order of first appearance;
/// duplicate unit ids within a group are rejected.
pub fn parse_ratings_csv<R: Read>(reader: R, ladder: Option<CategorySet>) -> Result<RatingsFile> {
    let cats = ladder.unwrap_or_else(CategorySet::vqr_default);
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    let cols: Vec<&str> = headers.iter().map(str::trim).collect();
    let with_groups = match cols.as_slice() {
        ["unit_id", "rating_a", "rating_b"] => false,
        ["unit_id", "rating_a", "rating_b", "group", "subgroup"] => true,
        _ => {
            return Err(parse_err(
                1,
                format!(
                    "expected header 'unit_id,rating_a,rating_b[,group,subgroup]', got '{}'",
                    cols.join(",")
                ),
            ))
        }
    };

    let mut groups: Vec<RatingsGroup> = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e
                .position()
                .map(|p| p.line())
                .unwrap_or(0);
            parse_err(line, e.to_string())
        })?;
        let line = record_line(&record);
        let unit_id = record.get(0).unwrap_or("").trim().to_string();
        if unit_id.is_empty() {
            return Err(parse_err(line, "empty unit_id"));
        }
        let mut indices = [0usize; 2];
        for (slot, col) in [(0usize, 1usize), (1, 2)] {
            let label = record.get(col).unwrap_or("").trim();
            indices[slot] = cats.index_of(label).ok_or_else(|| {
                parse_err(line, format!("unknown rating '{label}'"))
            })?;
        }
        let (group, subgroup) = if with_groups {
            let g = record.get(3).unwrap_or("").trim();
            let s = record.get(4).unwrap_or("").trim();
            (
                (!g.is_empty()).then(|| g.to_string()),
                (!s.is_empty()).then(|| s.to_string()),
            )
        } else {
            (None, None)
        };
        let slot = match groups
            .iter_mut()
            .position(|g| g.group == group && g.subgroup == subgroup)
        {
            Some(i) => &mut groups[i],
            None => {
                groups.push(RatingsGroup {
                    group,
                    subgroup,
                    pairs: Vec::new(),
                });
                groups.last_mut().unwrap()
            }
        };
        if slot.pairs.iter().any(|p| p.unit_id == unit_id) {
            return Err(parse_err(line, format!("duplicate unit_id '{unit_id}'")));
        }
        slot
            .pairs
            .push(RatingPair::new(unit_id, indices[0], indices[1]));
    }
    if groups.is_empty() {
        return Err(Error::NoObservations);
    }
    Ok(RatingsFile { cats, groups })
}

fn parse_kappa_field(field: &str, line: u64, column: &str) -> Result<Option<f64>> {
    let field = field.trim();
    if field.eq_ignore_ascii_case("na") {
        return Ok(None);
    }
    if field.contains(',') {
        return Err(parse_err(
            line,
            format!("{column}: decimal comma in '{field}' (use decimal points)"),
        ));
    }
    field
        .parse::<f64>()
        .map(Some)
        .map_err(|_| parse_err(line, format!("{column}: malformed number '{field}'")))
}

/// Parse a group-kappa CSV into records ("na" kappas become `None`).
pub fn parse_kappa_csv<R: Read>(reader: R) -> Result<Vec<GroupRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    let cols: Vec<&str> = headers.iter().map(str::trim).collect();
    if cols != ["label", "parent", "m", "kappa_linear", "kappa_vqr"] {
        return Err(parse_err(
            1,
            format!(
                "expected header 'label,parent,m,kappa_linear,kappa_vqr', got '{}'",
                cols.join(",")
            ),
        ));
    }
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            parse_err(line, e.to_string())
        })?;
        let line = record_line(&record);
        let label = record.get(0).unwrap_or("").trim().to_string();
        if label.is_empty() {
            return Err(parse_err(line, "empty label"));
        }
        let parent = record.get(1).unwrap_or("").trim();
        let parent = (!parent.is_empty()).then(|| parent.to_string());
        let m_field = record.get(2).unwrap_or("").trim();
        let m: u64 = m_field
            .parse()
            .map_err(|_| parse_err(line, format!("m: malformed integer '{m_field}'")))?;
        if m < 1 {
            return Err(parse_err(line, "m must be >= 1"));
        }
        let kappa_linear = parse_kappa_field(record.get(3).unwrap_or(""), line, "kappa_linear")?;
        let kappa_vqr = parse_kappa_field(record.get(4).unwrap_or(""), line, "kappa_vqr")?;
        for kappa in [kappa_linear, kappa_vqr].into_iter().flatten() {
            if !kappa.is_finite() || kappa > 1.0 {
                return Err(parse_err(line, format!("kappa {kappa} exceeds 1")));
            }
        }
        out.push(GroupRecord {
            label,
            parent,
            m,
            kappa_linear,
            kappa_vqr,
        });
    }
    if out.is_empty() {
        return Err(Error::NoObservations);
    }
    Ok(out)
}

fn kappa_field(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v}"),
        None => "na".to_string(),
    }
}

/// Serialize group records back to the kappa-CSV schema. Numbers use the
/// shortest round-trip representation, so parse(write(x)) == x bit for bit.
pub fn write_kappa_csv<W: std::io::Write>(records: &[GroupRecord], writer: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["label", "parent", "m", "kappa_linear", "kappa_vqr"])
        .map_err(|e| parse_err(0, e.to_string()))?;
    for r in records {
        wtr.write_record([
            r.label.as_str(),
            r.parent.as_deref().unwrap_or(""),
            &r.m.to_string(),
            &kappa_field(r.kappa_linear),
            &kappa_field(r.kappa_vqr),
        ])
        .map_err(|e| parse_err(0, e.to_string()))?;
    }
    wtr.flush()?;
    Ok(())
}

fn parse_float_grid(text: &str, what: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for tok in line.split_whitespace() {
            if tok.contains(',') {
                return Err(parse_err(
                    (i + 1) as u64,
                    format!("{what}: decimal comma in '{tok}' (use decimal points)"),
                ));
            }
            let v: f64 = tok.parse().map_err(|_| {
                parse_err((i + 1) as u64, format!("{what}: malformed number '{tok}'"))
            })?;
            row.push(v);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Parse a k x k disagreement-weight grid (whitespace-separated rows).
pub fn parse_weight_matrix(text: &str) -> Result<WeightScheme> {
    let rows = parse_float_grid(text, "weights")?;
    WeightScheme::from_disagreement("file", &rows)
}

/// Parse a k x k joint-probability grid (whitespace-separated rows).
pub fn parse_joint(text: &str) -> Result<JointDistribution> {
    let rows = parse_float_grid(text, "joint")?;
    JointDistribution::new(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::load_embedded;

    #[test]
    fn ratings_basic() {
        let csv = "unit_id,rating_a,rating_b\nu1,A,A\nu2,B,C\n";
        let file = parse_ratings_csv(csv.as_bytes(), None).unwrap();
        assert_eq!(file.groups.len(), 1);
        let pairs = &file.groups[0].pairs;
        assert_eq!(pairs[0], RatingPair::new("u1", 0, 0));
        assert_eq!(pairs[1], RatingPair::new("u2", 1, 2));
    }

    #[test]
    fn ratings_unknown_label_reports_line() {
        let csv = "unit_id,rating_a,rating_b\nu1,A,A\nu2,E,B\n";
        let err = parse_ratings_csv(csv.as_bytes(), None).unwrap_err().to_string();
        assert_eq!(err, "line 3: unknown rating 'E'");
    }

    #[test]
    fn ratings_duplicate_unit_within_group() {
        let csv = "unit_id,rating_a,rating_b,group,subgroup\nu1,A,A,g1,\nu1,B,B,g1,\n";
        let err = parse_ratings_csv(csv.as_bytes(), None).unwrap_err().to_string();
        assert!(err.contains("duplicate unit_id 'u1'"), "{err}");
        // same unit id in different groups is allowed
        let csv = "unit_id,rating_a,rating_b,group,subgroup\nu1,A,A,g1,\nu1,B,B,g2,\n";
        let file = parse_ratings_csv(csv.as_bytes(), None).unwrap();
        assert_eq!(file.groups.len(), 2);
    }

    #[test]
    fn ratings_grouping_preserves_first_appearance_order() {
        let csv = "unit_id,rating_a,rating_b,group,subgroup\n\
                   u1,A,A,g2,s1\nu2,A,B,g1,\nu3,B,B,g2,s1\n";
        let file = parse_ratings_csv(csv.as_bytes(), None).unwrap();
        assert_eq!(file.groups.len(), 2);
        assert_eq!(file.groups[0].group.as_deref(), Some("g2"));
        assert_eq!(file.groups[0].pairs.len(), 2);
        assert_eq!(file.groups[1].group.as_deref(), Some("g1"));
    }

    #[test]
    fn ratings_bad_header() {
        let err = parse_ratings_csv("id,a,b\nu1,A,A\n".as_bytes(), None)
            .unwrap_err()
            .to_string();
        assert!(err.starts_with("line 1:"), "{err}");
    }

    #[test]
    fn kappa_csv_round_trips_embedded_bit_for_bit() {
        let records = load_embedded().all_records();
        let mut buf = Vec::new();
        write_kappa_csv(&records, &mut buf).unwrap();
        let parsed = parse_kappa_csv(buf.as_slice()).unwrap();
        assert_eq!(parsed, records);
    }

    #[test]
    fn kappa_csv_errors() {
        let header = "label,parent,m,kappa_linear,kappa_vqr\n";
        let err = parse_kappa_csv(format!("{header}X,,0,0.5,0.5\n").as_bytes())
            .unwrap_err()
            .to_string();
        assert_eq!(err, "line 2: m must be >= 1");

        let parsed = parse_kappa_csv(format!("{header}Y,,100,na,na\n").as_bytes()).unwrap();
        assert!(!parsed[0].available());

        let err = parse_kappa_csv(format!("{header}Z,,10,\"0,54\",0.5\n").as_bytes())
            .unwrap_err()
            .to_string();
        assert!(err.contains("decimal comma"), "{err}");

        let err = parse_kappa_csv(format!("{header}Z,,10,abc,0.5\n").as_bytes())
            .unwrap_err()
            .to_string();
        assert!(err.contains("malformed number 'abc'"), "{err}");
    }

    #[test]
    fn weight_and_joint_grids() {
        let w = parse_weight_matrix("0 0.5 1\n0.5 0 0.5\n1 0.5 0\n").unwrap();
        assert_eq!(w.k(), 3);
        assert_eq!(w.disagreement(0, 2), 1.0);
        assert!(parse_weight_matrix("0 0,5\n0.5 0\n").is_err());

        let j = parse_joint("0.25 0.25\n0.25 0.25\n").unwrap();
        assert_eq!(j.k(), 2);
        assert!(parse_joint("0.9 0.3\n0.1 0.1\n").is_err());
    }
}
