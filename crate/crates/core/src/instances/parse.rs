use std::collections::{BTreeMap, BTreeSet};

use super::{Item, Literal, ProblemInstance, ProblemKind};
use crate::error::ParseError;

fn int<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T, ParseError> {
    tok.parse().map_err(|_| ParseError::Syntax { line, msg: format!("expected an integer, found `{tok}`") })
}

/// Reads DIMACS CNF. Comment lines start with `c`; a `%` line ends input.
pub fn parse_dimacs_cnf(text: &str) -> Result<ProblemInstance, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut open_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('c') {
            continue;
        }
        if s.starts_with('%') {
            break;
        }
        if s.starts_with('p') {
            if header.is_some() {
                return Err(ParseError::Header { line, msg: "second problem line".into() });
            }
            let toks: Vec<&str> = s.split_whitespace().collect();
            if toks.len() != 4 || toks[0] != "p" || toks[1] != "cnf" {
                return Err(ParseError::Header { line, msg: format!("expected `p cnf <vars> <clauses>`, found `{s}`") });
            }
            let n = toks[2].parse().map_err(|_| ParseError::Header { line, msg: "bad variable count".into() })?;
            let m = toks[3].parse().map_err(|_| ParseError::Header { line, msg: "bad clause count".into() })?;
            header = Some((n, m));
            continue;
        }
        let Some((n, _)) = header else {
            return Err(ParseError::Header { line, msg: "clause before problem line".into() });
        };
        for tok in s.split_whitespace() {
            let v: i64 = int(tok, line)?;
            if v == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            if v.unsigned_abs() as usize > n {
                return Err(ParseError::IndexOutOfRange { line, index: v, limit: n });
            }
            if current.is_empty() {
                open_line = line;
            }
            let var = v.unsigned_abs() as usize - 1;
            current.push(if v < 0 { Literal::neg(var) } else { Literal::pos(var) });
        }
    }
    let Some((n, m)) = header else {
        return Err(ParseError::Header { line: text.lines().count().max(1), msg: "missing problem line".into() });
    };
    if !current.is_empty() {
        return Err(ParseError::UnterminatedClause { line: open_line });
    }
    let mut inst = ProblemInstance::sat(n, clauses);
    let got = match &inst.payload {
        super::Payload::Clauses(c) => c.len(),
        _ => unreachable!(),
    };
    if got != m {
        inst.warnings.push(format!("header declares {m} clauses, found {got}"));
    }
    Ok(inst)
}

fn strip_comment(raw: &str) -> &str {
    raw.split('#').next().unwrap_or("").trim()
}

/// Reads a whitespace edge list. The first line is `n k1` for kinds that
/// take a critical size and `n` otherwise; a missing `k1` is left for the
/// caller to supply.
pub fn parse_edge_list(text: &str, kind: ProblemKind) -> Result<ProblemInstance, ParseError> {
    if !(kind.is_graph() || kind == ProblemKind::Dsp) {
        return Err(ParseError::WrongFormat { kind: kind.name() });
    }
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, strip_comment(l))).filter(|(_, l)| !l.is_empty());
    let (hline, head) = lines.next().ok_or(ParseError::Header { line: 1, msg: "missing vertex count".into() })?;
    let toks: Vec<&str> = head.split_whitespace().collect();
    if toks.is_empty() || toks.len() > 2 {
        return Err(ParseError::Header { line: hline, msg: format!("expected `n [k1]`, found `{head}`") });
    }
    let n: usize = toks[0].parse().map_err(|_| ParseError::Header { line: hline, msg: "bad vertex count".into() })?;
    let k1: Option<u64> = match toks.get(1) {
        Some(t) => Some(t.parse().map_err(|_| ParseError::Header { line: hline, msg: "bad k1".into() })?),
        None => None,
    };
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    for (line, s) in lines {
        let toks: Vec<&str> = s.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(ParseError::Syntax { line, msg: format!("expected `u v`, found `{s}`") });
        }
        let u: i64 = int(toks[0], line)?;
        let v: i64 = int(toks[1], line)?;
        for x in [u, v] {
            if x < 0 || x as usize >= n {
                return Err(ParseError::IndexOutOfRange { line, index: x, limit: n });
            }
        }
        let (u, v) = (u as usize, v as usize);
        if u == v {
            return Err(ParseError::SelfLoop { line, vertex: u });
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(ParseError::DuplicateEdge { line, u, v });
        }
        edges.push((u, v));
    }
    Ok(ProblemInstance::graph(kind, n, edges, k1))
}

/// Reads the line-oriented set-system format.
///
/// ```text
/// k1 = 2
/// a: 0 1        # element a lies in subsets 0 and 1
/// set 2: a b    # subset 2 holds elements a and b
/// ```
///
/// For KSP/NPP every other line is `item: weight value` (NPP also accepts
/// `item: value`). For HSP a line lists the elements of one subset; for DSP
/// a vertex followed by its neighbours.
pub fn parse_set_system(text: &str, kind: ProblemKind) -> Result<ProblemInstance, ParseError> {
    let mut k1 = None;
    let mut k2 = None;
    let mut declared_n: Option<usize> = None;
    let mut direct: Vec<(usize, String, Vec<i64>)> = Vec::new();
    let mut by_set: BTreeMap<usize, (usize, Vec<String>)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = strip_comment(raw);
        if s.is_empty() {
            continue;
        }
        if let Some((key, val)) = s.split_once('=') {
            let val: u64 = int(val.trim(), line)?;
            match key.trim() {
                "k1" => k1 = Some(val),
                "k2" => k2 = Some(val),
                "n" => declared_n = Some(val as usize),
                other => return Err(ParseError::Header { line, msg: format!("unknown parameter `{other}`") }),
            }
            continue;
        }
        let Some((label, rest)) = s.split_once(':') else {
            return Err(ParseError::Syntax { line, msg: format!("expected `label: ...`, found `{s}`") });
        };
        let label = label.trim();
        let toks: Vec<&str> = rest.split_whitespace().collect();
        if let Some(idx) = label.strip_prefix("set ") {
            let idx: usize = int(idx.trim(), line)?;
            if toks.is_empty() {
                return Err(ParseError::EmptySubset { line });
            }
            let entry = by_set.entry(idx).or_insert((line, Vec::new()));
            entry.1.extend(toks.iter().map(|t| t.to_string()));
        } else {
            let vals = toks.iter().map(|t| int::<i64>(t, line)).collect::<Result<Vec<_>, _>>()?;
            direct.push((line, label.to_string(), vals));
        }
    }

    match kind {
        ProblemKind::Ksp | ProblemKind::Npp => {
            if !by_set.is_empty() {
                return Err(ParseError::Syntax { line: by_set.values().next().unwrap().0, msg: "`set` lines are not items".into() });
            }
            let mut items = Vec::new();
            for (line, _, vals) in direct {
                let (w, v) = match (kind, vals.as_slice()) {
                    (_, [w, v]) => (*w, *v),
                    (ProblemKind::Npp, [v]) => (*v, *v),
                    _ => return Err(ParseError::Syntax { line, msg: "expected `item: weight value`".into() }),
                };
                if w < 0 || v < 0 {
                    return Err(ParseError::Syntax { line, msg: "weights and values must be nonnegative".into() });
                }
                items.push(Item { weight: w as u64, value: v as u64 });
            }
            Ok(ProblemInstance::items(kind, items, k1, k2))
        }
        ProblemKind::Scp | ProblemKind::Ecp | ProblemKind::Hsp | ProblemKind::Dsp => {
            let mut sets: Vec<Vec<usize>> = Vec::new();
            let mut warnings = Vec::new();
            let mut max_index: Option<usize> = None;
            for (line, label, vals) in &direct {
                let mut vs = Vec::new();
                for &v in vals {
                    if v < 0 || declared_n.is_some_and(|n| v as usize >= n) {
                        return Err(ParseError::IndexOutOfRange { line: *line, index: v, limit: declared_n.unwrap_or(0) });
                    }
                    vs.push(v as usize);
                    max_index = max_index.max(Some(v as usize));
                }
                if vs.is_empty() {
                    if kind == ProblemKind::Hsp {
                        return Err(ParseError::EmptySubset { line: *line });
                    }
                    warnings.push(format!("`{label}` is covered by no subset"));
                }
                if kind == ProblemKind::Dsp {
                    let Ok(me) = label.parse::<usize>() else {
                        return Err(ParseError::Syntax { line: *line, msg: "DSP lines are `vertex: neighbours`".into() });
                    };
                    max_index = max_index.max(Some(me));
                    vs.insert(0, me);
                }
                sets.push(vs);
            }
            if !by_set.is_empty() {
                if kind == ProblemKind::Hsp || kind == ProblemKind::Dsp {
                    return Err(ParseError::WrongFormat { kind: kind.name() });
                }
                let mut element_order: Vec<String> = Vec::new();
                let mut members: BTreeMap<String, Vec<usize>> = BTreeMap::new();
                for (&idx, (_, elems)) in &by_set {
                    if declared_n.is_some_and(|n| idx >= n) {
                        return Err(ParseError::IndexOutOfRange { line: by_set[&idx].0, index: idx as i64, limit: declared_n.unwrap() });
                    }
                    max_index = max_index.max(Some(idx));
                    for e in elems {
                        if !members.contains_key(e) {
                            element_order.push(e.clone());
                        }
                        let m = members.entry(e.clone()).or_default();
                        if !m.contains(&idx) {
                            m.push(idx);
                        }
                    }
                }
                sets.extend(element_order.iter().map(|e| members[e].clone()));
            }
            let n = declared_n.unwrap_or(max_index.map_or(0, |m| m + 1));
            let mut inst = ProblemInstance::sets(kind, n, sets, k1);
            inst.warnings = warnings;
            Ok(inst)
        }
        _ => Err(ParseError::WrongFormat { kind: kind.name() }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::Payload;

    #[test]
    fn dimacs_basic() {
        let inst = parse_dimacs_cnf("c hi\np cnf 2 1\n1 -2 0\n").unwrap();
        assert_eq!(inst.n_variables, 2);
        assert_eq!(inst.payload, Payload::Clauses(vec![vec![Literal::pos(0), Literal::neg(1)]]));
        let empty = parse_dimacs_cnf("p cnf 1 0").unwrap();
        assert_eq!(empty.payload, Payload::Clauses(vec![]));
    }

    #[test]
    fn dimacs_errors_are_distinct() {
        assert!(matches!(parse_dimacs_cnf("p cnf 2 1\n3 0"), Err(ParseError::IndexOutOfRange { line: 2, index: 3, .. })));
        assert!(matches!(parse_dimacs_cnf("p cnf 2 1\n1 2"), Err(ParseError::UnterminatedClause { line: 2 })));
        assert!(matches!(parse_dimacs_cnf("p dnf 2 1\n1 0"), Err(ParseError::Header { line: 1, .. })));
    }

    #[test]
    fn clause_may_span_lines() {
        let inst = parse_dimacs_cnf("p cnf 3 1\n1 2\n3 0\n%\n0\n").unwrap();
        assert_eq!(inst.payload, Payload::Clauses(vec![vec![Literal::pos(0), Literal::pos(1), Literal::pos(2)]]));
    }

    #[test]
    fn edge_list() {
        let inst = parse_edge_list("3 2\n0 1\n1 2\n", ProblemKind::Mis).unwrap();
        assert_eq!(inst.k1, Some(2));
        assert_eq!(inst.payload, Payload::Graph { vertices: 3, edges: vec![(0, 1), (1, 2)] });
        assert!(matches!(parse_edge_list("2 1\n0 0", ProblemKind::Mcp), Err(ParseError::SelfLoop { line: 2, .. })));
        assert!(matches!(parse_edge_list("2 1\n0 1\n1 0", ProblemKind::Mcp), Err(ParseError::DuplicateEdge { line: 3, .. })));
        assert!(matches!(parse_edge_list("2 1\n0 2", ProblemKind::Mcp), Err(ParseError::IndexOutOfRange { .. })));
        assert!(matches!(parse_edge_list("2", ProblemKind::Sat), Err(ParseError::WrongFormat { .. })));
    }

    #[test]
    fn set_lines_are_inverted() {
        let inst = parse_set_system("k1 = 1\nset 0: a\nset 1: a b\n", ProblemKind::Scp).unwrap();
        assert_eq!(inst.n_variables, 2);
        assert_eq!(inst.payload, Payload::Sets(vec![vec![0, 1], vec![1]]));
        assert!(matches!(parse_set_system("set 0:\n", ProblemKind::Scp), Err(ParseError::EmptySubset { line: 1 })));
    }

    #[test]
    fn uncovered_element_warns() {
        let inst = parse_set_system("n = 2\na: 0 1\nb:\n", ProblemKind::Ecp).unwrap();
        assert_eq!(inst.warnings.len(), 1);
    }

    #[test]
    fn knapsack_items() {
        let inst = parse_set_system("k1 = 2\nk2 = 3\nx: 2 3\n", ProblemKind::Ksp).unwrap();
        assert_eq!(inst.payload, Payload::Items(vec![Item { weight: 2, value: 3 }]));
        assert_eq!((inst.k1, inst.k2), (Some(2), Some(3)));
        let none = parse_set_system("k1 = 2\nk2 = 3\n", ProblemKind::Ksp).unwrap();
        assert_eq!(none.n_variables, 0);
    }
}
