//! Tolerant parser for MATPOWER M-file cases.
//!
//! Extracts `baseMVA` plus the bus, generator, and branch tables; ignores
//! everything else (gencost, comments, MATLAB syntax). Out-of-service
//! branches are dropped and parallel branches merge by parallel reactance.

use std::collections::HashMap;

use super::{Branch, Bus, BusKind, CaseData};
use crate::error::{Error, Result};

// column counts we actually need
const BUS_MIN_COLS: usize = 8; // bus_i, type, Pd, Qd, Gs, Bs, area, Vm
const GEN_MIN_COLS: usize = 8; // bus, Pg, Qg, Qmax, Qmin, Vg, mBase, status
const BRANCH_MIN_COLS: usize = 4; // fbus, tbus, r, x (status optional)

pub fn parse_matpower(text: &str) -> Result<CaseData> {
    let mut name = String::new();
    let mut base_mva = 100.0;
    let mut bus_rows: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut gen_rows: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut branch_rows: Vec<(usize, Vec<f64>)> = Vec::new();

    let mut section: Option<&str> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim().to_string();
        if line.is_empty() {
            continue;
        }

        if section.is_none() {
            if let Some(rest) = line.strip_prefix("function") {
                if let Some(eq) = rest.find('=') {
                    name = rest[eq + 1..].trim().trim_end_matches(';').to_string();
                }
                continue;
            }
            if let Some(value) = assignment_value(&line, "mpc.baseMVA") {
                base_mva = value
                    .trim_end_matches(';')
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(line_no, "invalid baseMVA"))?;
                continue;
            }
            for (key, target) in
                [("mpc.bus", "bus"), ("mpc.gencost", "skip"), ("mpc.gen", "gen"), ("mpc.branch", "branch")]
            {
                if line.starts_with(key)
                    && line[key.len()..].trim_start().starts_with('=')
                    && line.contains('[')
                {
                    section = Some(target);
                    break;
                }
            }
            // rows may start on the same line as the opening bracket
            if let Some(sec) = section {
                if let Some(pos) = line.find('[') {
                    let tail = line[pos + 1..].trim().to_string();
                    if !tail.is_empty() {
                        section = consume_rows(
                            sec,
                            &tail,
                            line_no,
                            &mut bus_rows,
                            &mut gen_rows,
                            &mut branch_rows,
                        )?;
                    }
                }
            }
            continue;
        }

        let sec = section.unwrap();
        section = consume_rows(sec, &line, line_no, &mut bus_rows, &mut gen_rows, &mut branch_rows)?;
    }

    if bus_rows.is_empty() {
        return Err(parse_err(0, "no bus table found"));
    }
    if branch_rows.is_empty() {
        return Err(parse_err(0, "no branch table found"));
    }

    // bus table: id, type, Pd, Vm
    let mut buses = Vec::with_capacity(bus_rows.len());
    let mut by_id: HashMap<usize, usize> = HashMap::new();
    for (line_no, row) in &bus_rows {
        if row.len() < BUS_MIN_COLS {
            return Err(parse_err(*line_no, "bus row has too few columns"));
        }
        let id = row[0] as usize;
        let kind = match row[1] as i64 {
            2 | 3 => BusKind::Generator,
            _ => BusKind::Load,
        };
        if by_id.insert(id, buses.len()).is_some() {
            return Err(parse_err(*line_no, &format!("duplicate bus id {id}")));
        }
        buses.push(Bus { id, vm: row[7], p_nom: -row[2] / base_mva, kind });
    }

    // generator table: add injections, override voltage setpoints
    for (line_no, row) in &gen_rows {
        if row.len() < GEN_MIN_COLS {
            return Err(parse_err(*line_no, "gen row has too few columns"));
        }
        let bus = row[0] as usize;
        let status = row[7];
        if status <= 0.0 {
            continue;
        }
        let slot = by_id
            .get(&bus)
            .ok_or_else(|| parse_err(*line_no, &format!("generator at unknown bus {bus}")))?;
        buses[*slot].p_nom += row[1] / base_mva;
        if row[5] > 0.0 {
            buses[*slot].vm = row[5];
        }
    }

    // branch table: drop out-of-service, merge parallels
    let mut merged: HashMap<(usize, usize), f64> = HashMap::new();
    let mut order: Vec<(usize, usize)> = Vec::new();
    for (line_no, row) in &branch_rows {
        if row.len() < BRANCH_MIN_COLS {
            return Err(parse_err(*line_no, "branch row has too few columns"));
        }
        let from = row[0] as usize;
        let to = row[1] as usize;
        if row.len() > 10 && row[10] <= 0.0 {
            continue;
        }
        if !by_id.contains_key(&from) || !by_id.contains_key(&to) {
            return Err(parse_err(
                *line_no,
                &format!("branch ({from}, {to}) references an unknown bus"),
            ));
        }
        let x = row[3];
        if x == 0.0 {
            return Err(parse_err(*line_no, &format!("branch ({from}, {to}) has zero reactance")));
        }
        let key = if from < to { (from, to) } else { (to, from) };
        match merged.entry(key) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                // parallel combination of reactances
                let combined = 1.0 / (1.0 / *e.get() + 1.0 / x);
                e.insert(combined);
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(x);
                order.push(key);
            }
        }
    }
    let branches = order
        .into_iter()
        .map(|key| Branch { from: key.0, to: key.1, x: merged[&key] })
        .collect();

    Ok(CaseData { name, buses, branches, base_mva })
}

/// Feed one line of table rows into the right bucket. Returns the new
/// section state (None once `];` closes the table).
fn consume_rows<'a>(
    section: &'a str,
    line: &str,
    line_no: usize,
    bus: &mut Vec<(usize, Vec<f64>)>,
    gen: &mut Vec<(usize, Vec<f64>)>,
    branch: &mut Vec<(usize, Vec<f64>)>,
) -> Result<Option<&'a str>> {
    let (body, closes) = match line.find(']') {
        Some(pos) => (&line[..pos], true),
        None => (line, false),
    };
    for row_text in body.split(';') {
        let row_text = row_text.trim();
        if row_text.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for token in row_text.split_whitespace() {
            let value: f64 = token
                .parse()
                .map_err(|_| parse_err(line_no, &format!("invalid number '{token}'")))?;
            row.push(value);
        }
        match section {
            "bus" => bus.push((line_no, row)),
            "gen" => gen.push((line_no, row)),
            "branch" => branch.push((line_no, row)),
            _ => {} // gencost and friends
        }
    }
    Ok(if closes { None } else { Some(section) })
}

fn strip_comment(line: &str) -> &str {
    match line.find('%') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

fn assignment_value<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    let rest = line.strip_prefix(key)?.trim_start();
    rest.strip_prefix('=').map(str::trim)
}

fn parse_err(line: usize, message: &str) -> Error {
    Error::Parse { line, message: message.to_string() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_inline_and_multiline_tables() {
        let text = "\nmpc.baseMVA = 10;\nmpc.bus = [ 1 3 0 0 0 0 1 1.0 0 0 1 1.1 0.9; 2 1 5 0 0 0 1 0.98 0 0 1 1.1 0.9 ];\nmpc.gen = [\n 1 5 0 0 0 1.02 10 1 10 0;\n];\nmpc.branch = [\n 1 2 0.01 0.2 0 0 0 0 0 0 1 -360 360;\n];\n";
        let case = parse_matpower(text).unwrap();
        assert_eq!(case.base_mva, 10.0);
        assert_eq!(case.buses.len(), 2);
        assert!((case.buses[0].vm - 1.02).abs() < 1e-15); // gen setpoint wins
        assert!((case.buses[0].p_nom - 0.5).abs() < 1e-15);
        assert!((case.buses[1].p_nom + 0.5).abs() < 1e-15);
        assert_eq!(case.branches.len(), 1);
        assert_eq!(case.buses[0].kind, BusKind::Generator);
        assert_eq!(case.buses[1].kind, BusKind::Load);
    }

    #[test]
    fn drops_out_of_service_and_merges_parallel_branches() {
        let text = "\nmpc.baseMVA = 100;\nmpc.bus = [\n 1 3 0 0 0 0 1 1 0 0 1 1.1 0.9;\n 2 1 0 0 0 0 1 1 0 0 1 1.1 0.9;\n 3 1 0 0 0 0 1 1 0 0 1 1.1 0.9;\n];\nmpc.gen = [ 1 0 0 0 0 1 100 1 10 0 ];\nmpc.branch = [\n 1 2 0 0.2 0 0 0 0 0 0 1 -360 360;\n 2 1 0 0.2 0 0 0 0 0 0 1 -360 360;\n 2 3 0 0.1 0 0 0 0 0 0 1 -360 360;\n 1 3 0 9.9 0 0 0 0 0 0 0 -360 360;\n];\n";
        let case = parse_matpower(text).unwrap();
        // parallel pair 1-2 merges to 0.1; out-of-service 1-3 dropped
        assert_eq!(case.branches.len(), 2);
        assert!((case.branches[0].x - 0.1).abs() < 1e-15);
        assert_eq!((case.branches[0].from, case.branches[0].to), (1, 2));
    }

    #[test]
    fn reports_line_numbers_on_bad_tokens() {
        let text = "mpc.bus = [\n 1 3 0 0 0 0 1 oops 0 0 1 1.1 0.9;\n];\nmpc.branch = [ 1 1 0 0.1 ];";
        match parse_matpower(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn gencost_section_is_ignored() {
        let text = "\nmpc.baseMVA = 1;\nmpc.bus = [ 1 3 0 0 0 0 1 1 0 0 1 1.1 0.9; 2 1 1 0 0 0 1 1 0 0 1 1.1 0.9 ];\nmpc.gen = [ 1 1 0 0 0 1 1 1 10 0 ];\nmpc.gencost = [\n 2 0 0 3 0.11 5 150;\n];\nmpc.branch = [ 1 2 0 0.5 0 ];\n";
        let case = parse_matpower(text).unwrap();
        assert_eq!(case.buses.len(), 2);
        assert_eq!(case.branches.len(), 1);
    }
}
