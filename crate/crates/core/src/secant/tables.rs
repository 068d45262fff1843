//! Exact-integer tables of the bounds `h̄` for Veronese, Grassmannian and
//! Segre–Veronese varieties.
//!
//! Each row is recomputed from its closed formula and compared with the
//! reference value printed for it. Mismatches are reported in the
//! `discrepancy` field and never corrected.

use crate::error::{Error, Result};
use crate::poly::binomial;
use serde::Serialize;

/// `N = C(n+d, d) - 1` and the smallest integer `h >= (d(N+1) - n)/d`.
pub fn ver_bound(n: u64, d: u64) -> Result<(u64, u64)> {
    if d < 2 || n < 1 {
        return Err(Error::InvalidInput(format!("ver_bound needs d > 1 and n >= 1, got n={n}, d={d}")));
    }
    let count = binomial(n.checked_add(d).ok_or(Error::Overflow("ver_bound"))?, d)?;
    let numerator = (d as u128)
        .checked_mul(count as u128)
        .ok_or(Error::Overflow("ver_bound"))?
        - n as u128;
    let h_bar = numerator.div_ceil(d as u128);
    Ok((count - 1, u64::try_from(h_bar).map_err(|_| Error::Overflow("ver_bound"))?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Rc2Entry {
    pub k: u64,
    pub h_bar: u64,
    /// `(N + n + 2)/(n + 1) <= h̄ < N - n + 1`.
    pub constraint_ok: bool,
}

/// Every `k` with `0 < k < n` and `(k + 1) | N`, with `h̄ = N/(k + 1)`.
pub fn rc2_search(big_n: u64, n: u64) -> Result<Vec<Rc2Entry>> {
    if n < 1 || big_n <= n {
        return Err(Error::InvalidInput(format!("rc2_search needs N > n >= 1, got N={big_n}, n={n}")));
    }
    Ok((1..n)
        .filter(|k| big_n.is_multiple_of(k + 1))
        .map(|k| {
            let h_bar = big_n / (k + 1);
            let lower = (big_n as u128 + n as u128 + 2) <= h_bar as u128 * (n as u128 + 1);
            let upper = h_bar < big_n - n + 1;
            Rc2Entry {
                k,
                h_bar,
                constraint_ok: lower && upper,
            }
        })
        .collect())
}

/// Values printed for a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReferenceRow {
    pub dim: u64,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub k: u64,
    pub h_bar: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    Grassmann { r: u64, n: u64 },
    SegreVeronese { n: u64, m: u64, a: u64, b: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    #[serde(flatten)]
    pub family: Family,
    pub dim: u64,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub k: Option<u64>,
    pub h_bar: Option<u64>,
    pub constraint_ok: bool,
    pub reference: ReferenceRow,
    pub discrepancy: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerReference {
    pub n: u64,
    pub d: u64,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub h_bar: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerRow {
    pub d: u64,
    pub n: u64,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub h_bar: u64,
    pub reference: VerReference,
    pub discrepancy: Option<String>,
}

pub const VER_REFERENCE: [VerReference; 3] = [
    VerReference { n: 100, d: 3, big_n: 176_850, h_bar: 176_818 },
    VerReference { n: 150, d: 3, big_n: 585_275, h_bar: 585_226 },
    VerReference { n: 200, d: 4, big_n: 70_058_750, h_bar: 70_058_701 },
];

pub const GRASSMANN_REFERENCE: [(u64, u64, ReferenceRow); 5] = [
    (1, 4, ReferenceRow { dim: 6, big_n: 9, k: 2, h_bar: 3 }),
    (1, 5, ReferenceRow { dim: 8, big_n: 14, k: 6, h_bar: 3 }),
    (2, 6, ReferenceRow { dim: 12, big_n: 34, k: 1, h_bar: 17 }),
    (2, 7, ReferenceRow { dim: 15, big_n: 55, k: 10, h_bar: 5 }),
    (3, 8, ReferenceRow { dim: 20, big_n: 125, k: 4, h_bar: 25 }),
];

pub const SEGRE_VERONESE_REFERENCE: [([u64; 4], ReferenceRow); 5] = [
    ([2, 3, 1, 3], ReferenceRow { dim: 5, big_n: 39, k: 2, h_bar: 13 }),
    ([4, 4, 2, 3], ReferenceRow { dim: 8, big_n: 524, k: 3, h_bar: 131 }),
    ([4, 4, 3, 3], ReferenceRow { dim: 8, big_n: 1224, k: 3, h_bar: 153 }),
    ([5, 5, 3, 3], ReferenceRow { dim: 10, big_n: 3135, k: 4, h_bar: 627 }),
    ([5, 5, 3, 4], ReferenceRow { dim: 10, big_n: 7055, k: 4, h_bar: 1411 }),
];

pub fn table_ver(rows: &[VerReference]) -> Result<Vec<VerRow>> {
    rows.iter()
        .map(|r| {
            let (big_n, h_bar) = ver_bound(r.n, r.d)?;
            let mut notes = Vec::new();
            if big_n != r.big_n {
                notes.push(format!("N: formula gives {big_n}, reference {}", r.big_n));
            }
            if h_bar != r.h_bar {
                notes.push(format!("h_bar: formula gives {h_bar}, reference {}", r.h_bar));
            }
            Ok(VerRow {
                d: r.d,
                n: r.n,
                big_n,
                h_bar,
                reference: *r,
                discrepancy: join(notes),
            })
        })
        .collect()
}

fn join(notes: Vec<String>) -> Option<String> {
    (!notes.is_empty()).then(|| notes.join("; "))
}

fn build_row(family: Family, dim: u64, big_n: u64, swapped_n: Option<u64>, reference: ReferenceRow) -> Result<TableRow> {
    let entries = rc2_search(big_n, dim)?;
    let admissible = entries.iter().filter(|e| e.constraint_ok).min_by_key(|e| e.h_bar).copied();
    let matching = entries
        .iter()
        .find(|e| e.k == reference.k && e.h_bar == reference.h_bar)
        .copied();
    let chosen = matching.or(admissible);

    let mut notes = Vec::new();
    if dim != reference.dim {
        notes.push(format!("dim: formula gives {dim}, reference {}", reference.dim));
    }
    if big_n != reference.big_n {
        let mut note = format!("N: formula gives {big_n}, reference {}", reference.big_n);
        if swapped_n == Some(reference.big_n) {
            note.push_str(" (the value with a and b interchanged)");
        }
        notes.push(note);
    }
    let product = (reference.k + 1) * reference.h_bar;
    if product != reference.big_n {
        notes.push(format!(
            "reference pair k={}, h_bar={} has (k+1)*h_bar = {product}, not N = {}",
            reference.k, reference.h_bar, reference.big_n
        ));
    } else if big_n != reference.big_n {
        notes.push(format!(
            "reference pair k={}, h_bar={} is consistent with the reference N",
            reference.k, reference.h_bar
        ));
    }
    match (matching, admissible) {
        (Some(e), _) if !e.constraint_ok => notes.push("reference pair fails the constraint".into()),
        (None, Some(e)) => notes.push(format!("smallest admissible pair from the formula: k={}, h_bar={}", e.k, e.h_bar)),
        (None, None) => notes.push(format!("no admissible k for N = {big_n}, n = {dim}")),
        _ => {}
    }

    Ok(TableRow {
        family,
        dim,
        big_n,
        k: chosen.map(|e| e.k),
        h_bar: chosen.map(|e| e.h_bar),
        constraint_ok: chosen.is_some_and(|e| e.constraint_ok),
        reference,
        discrepancy: join(notes),
    })
}

/// Rows for `G(r, n)`: `dim = (r+1)(n-r)`, `N = C(n+1, r+1) - 1`.
pub fn table_grassmann(rows: &[(u64, u64, ReferenceRow)]) -> Result<Vec<TableRow>> {
    rows.iter()
        .map(|&(r, n, reference)| {
            if r >= n {
                return Err(Error::InvalidInput(format!("Grassmannian needs r < n, got r={r}, n={n}")));
            }
            let dim = (r + 1) * (n - r);
            let big_n = binomial(n + 1, r + 1)? - 1;
            build_row(Family::Grassmann { r, n }, dim, big_n, None, reference)
        })
        .collect()
}

/// Rows for `SV_{a,b}^{n,m}`: `dim = n + m`, `N = C(a+n, n) C(b+m, m) - 1`.
pub fn table_segre_veronese(rows: &[([u64; 4], ReferenceRow)]) -> Result<Vec<TableRow>> {
    rows.iter()
        .map(|&([n, m, a, b], reference)| {
            let count = |a: u64, b: u64| -> Result<u64> {
                binomial(a + n, n)?
                    .checked_mul(binomial(b + m, m)?)
                    .map(|c| c - 1)
                    .ok_or(Error::Overflow("Segre-Veronese N"))
            };
            let big_n = count(a, b)?;
            let swapped = count(b, a)?;
            build_row(Family::SegreVeronese { n, m, a, b }, n + m, big_n, Some(swapped), reference)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    Ver,
    Grassmann,
    SegreVeronese,
}

impl TableKind {
    pub const ALL: [TableKind; 3] = [TableKind::Ver, TableKind::Grassmann, TableKind::SegreVeronese];

    pub fn schema(&self) -> &'static str {
        match self {
            TableKind::Ver => "waringlab/ver-bound/v1",
            TableKind::Grassmann => "waringlab/grassmann-rc2/v1",
            TableKind::SegreVeronese => "waringlab/segre-veronese-rc2/v1",
        }
    }
}

#[derive(Serialize)]
struct Document<'a, R> {
    schema: &'static str,
    rows: &'a [R],
}

fn opt(v: Option<u64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_bytes(header: &[&str], records: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidInput(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for r in records {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidInput(format!("csv: {e}")))
}

/// Reference table rendered as pretty JSON `{ "schema": ..., "rows": [...] }`.
pub fn table_json(kind: TableKind) -> Result<String> {
    let text = match kind {
        TableKind::Ver => serde_json::to_string_pretty(&Document {
            schema: kind.schema(),
            rows: &table_ver(&VER_REFERENCE)?,
        }),
        TableKind::Grassmann => serde_json::to_string_pretty(&Document {
            schema: kind.schema(),
            rows: &table_grassmann(&GRASSMANN_REFERENCE)?,
        }),
        TableKind::SegreVeronese => serde_json::to_string_pretty(&Document {
            schema: kind.schema(),
            rows: &table_segre_veronese(&SEGRE_VERONESE_REFERENCE)?,
        }),
    };
    text.map_err(|e| Error::InvalidInput(format!("json: {e}")))
}

/// Reference table rendered as CSV; the first column holds the schema name.
pub fn table_csv(kind: TableKind) -> Result<String> {
    let schema = kind.schema().to_string();
    match kind {
        TableKind::Ver => {
            let rows = table_ver(&VER_REFERENCE)?;
            csv_bytes(
                &["schema", "d", "n", "N", "h_bar", "ref_N", "ref_h_bar", "discrepancy"],
                rows.iter()
                    .map(|r| {
                        vec![
                            schema.clone(),
                            r.d.to_string(),
                            r.n.to_string(),
                            r.big_n.to_string(),
                            r.h_bar.to_string(),
                            r.reference.big_n.to_string(),
                            r.reference.h_bar.to_string(),
                            r.discrepancy.clone().unwrap_or_default(),
                        ]
                    })
                    .collect(),
            )
        }
        TableKind::Grassmann | TableKind::SegreVeronese => {
            let (inputs, rows): (&[&str], _) = if kind == TableKind::Grassmann {
                (&["r", "n"], table_grassmann(&GRASSMANN_REFERENCE)?)
            } else {
                (&["n", "m", "a", "b"], table_segre_veronese(&SEGRE_VERONESE_REFERENCE)?)
            };
            let mut header = vec!["schema"];
            header.extend_from_slice(inputs);
            header.extend_from_slice(&[
                "dim", "N", "k", "h_bar", "constraint_ok", "ref_dim", "ref_N", "ref_k", "ref_h_bar", "discrepancy",
            ]);
            let records = rows
                .iter()
                .map(|r| {
                    let mut rec = vec![schema.clone()];
                    match r.family {
                        Family::Grassmann { r, n } => rec.extend([r.to_string(), n.to_string()]),
                        Family::SegreVeronese { n, m, a, b } => {
                            rec.extend([n, m, a, b].iter().map(|x| x.to_string()))
                        }
                    }
                    rec.extend([
                        r.dim.to_string(),
                        r.big_n.to_string(),
                        opt(r.k),
                        opt(r.h_bar),
                        r.constraint_ok.to_string(),
                        r.reference.dim.to_string(),
                        r.reference.big_n.to_string(),
                        r.reference.k.to_string(),
                        r.reference.h_bar.to_string(),
                        r.discrepancy.clone().unwrap_or_default(),
                    ]);
                    rec
                })
                .collect();
            csv_bytes(&header, records)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Oracle: `C(n+d, d)` by Pascal's rule and `h̄` by linear search.
    fn brute_ver(n: u64, d: u64) -> (u64, u64) {
        let mut row = vec![1u128];
        for _ in 0..(n + d) {
            let mut next = vec![1u128; row.len() + 1];
            for i in 1..row.len() {
                next[i] = row[i - 1] + row[i];
            }
            row = next;
        }
        let count = row[d as usize];
        let mut h = count - (n as u128) / (d as u128) - 1;
        while (h * d as u128) < d as u128 * count - n as u128 {
            h += 1;
        }
        ((count - 1) as u64, h as u64)
    }

    #[test]
    fn ver_reference_rows() {
        assert_eq!(ver_bound(100, 3).unwrap(), (176_850, 176_818));
        assert_eq!(ver_bound(150, 3).unwrap(), (585_275, 585_226));
        assert_eq!(ver_bound(200, 4).unwrap(), (70_058_750, 70_058_701));
        for r in table_ver(&VER_REFERENCE).unwrap() {
            assert!(r.discrepancy.is_none());
        }
        assert!(ver_bound(3, 1).is_err());
    }

    #[test]
    fn rc2_examples() {
        let has = |big_n, n, k, h_bar| rc2_search(big_n, n).unwrap().iter().any(|e| e.k == k && e.h_bar == h_bar);
        assert!(rc2_search(9, 6).unwrap().contains(&Rc2Entry { k: 2, h_bar: 3, constraint_ok: true }));
        assert!(rc2_search(125, 20).unwrap().contains(&Rc2Entry { k: 4, h_bar: 25, constraint_ok: true }));
        assert!(has(55, 5, 4, 11));
        assert!(rc2_search(59, 5).unwrap().is_empty());
    }

    #[test]
    fn grassmann_rows() {
        let rows = table_grassmann(&GRASSMANN_REFERENCE).unwrap();
        let flagged: Vec<_> = rows.iter().filter(|r| r.discrepancy.is_some()).map(|r| r.family).collect();
        assert_eq!(flagged, vec![Family::Grassmann { r: 1, n: 5 }]);
        for r in rows.iter().filter(|r| r.discrepancy.is_none()) {
            assert_eq!((r.dim, r.big_n, r.k, r.h_bar), (r.reference.dim, r.reference.big_n, Some(r.reference.k), Some(r.reference.h_bar)));
            assert!(r.constraint_ok);
            assert_eq!((r.k.unwrap() + 1) * r.h_bar.unwrap(), r.big_n);
        }
        let g15 = &rows[1];
        assert_eq!((g15.dim, g15.big_n, g15.k), (8, 14, None));
    }

    #[test]
    fn segre_veronese_rows() {
        let rows = table_segre_veronese(&SEGRE_VERONESE_REFERENCE).unwrap();
        assert_eq!((rows[1].dim, rows[1].big_n, rows[1].k, rows[1].h_bar), (8, 524, Some(3), Some(131)));
        assert_eq!((rows[4].big_n, rows[4].k, rows[4].h_bar), (7055, Some(4), Some(1411)));
        assert_eq!(rows[0].big_n, 59);
        let note = rows[0].discrepancy.as_deref().unwrap();
        assert!(note.contains("interchanged"), "{note}");
        assert_eq!((rows[2].k, rows[2].h_bar), (Some(7), Some(153)));
        assert!(rows[2].discrepancy.is_some());
        for i in [1, 3, 4] {
            assert!(rows[i].discrepancy.is_none());
        }
    }

    #[test]
    fn output_is_deterministic() {
        for kind in TableKind::ALL {
            assert_eq!(table_json(kind).unwrap(), table_json(kind).unwrap());
            assert_eq!(table_csv(kind).unwrap(), table_csv(kind).unwrap());
            assert!(table_json(kind).unwrap().contains(kind.schema()));
        }
        let csv = table_csv(TableKind::Ver).unwrap();
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.contains("70058750,70058701"));
    }

    proptest! {
        #[test]
        fn ver_bound_matches_brute_force(n in 1u64..40, d in 2u64..7) {
            prop_assert_eq!(ver_bound(n, d).unwrap(), brute_ver(n, d));
        }

        #[test]
        fn rc2_entries_are_consistent(big_n in 2u64..5000, n in 1u64..60) {
            prop_assume!(big_n > n);
            for e in rc2_search(big_n, n).unwrap() {
                prop_assert!(e.k > 0 && e.k < n);
                prop_assert_eq!(e.h_bar * (e.k + 1), big_n);
                let lower = (big_n + n + 2) as f64 / (n + 1) as f64 <= e.h_bar as f64 + 1e-12;
                let upper = (e.h_bar as i64) < big_n as i64 - n as i64 + 1;
                prop_assert_eq!(e.constraint_ok, lower && upper);
            }
        }
    }
}
