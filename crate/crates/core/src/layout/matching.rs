use std::collections::HashSet;

use crate::instances::Hypergraph;

/// Greedy maximal matching in ascending edge order.
pub fn greedy_maximal_matching(h: &Hypergraph) -> Vec<usize> {
    let all: Vec<usize> = (0..h.edges.len()).collect();
    greedy(&h.edges, &all, None)
}

fn greedy(edges: &[Vec<usize>], candidates: &[usize], cap: Option<usize>) -> Vec<usize> {
    let mut used = HashSet::new();
    let mut chosen = Vec::new();
    for &e in candidates {
        if cap.is_some_and(|c| chosen.len() >= c) {
            break;
        }
        if edges[e].iter().all(|v| !used.contains(v)) {
            used.extend(edges[e].iter().copied());
            chosen.push(e);
        }
    }
    chosen
}

/// Repeated maximal matchings on the residual edge set until it is empty.
/// With `cap`, each matching stops at that many edges.
pub fn partition_units(h: &Hypergraph, cap: Option<usize>) -> Vec<Vec<usize>> {
    let mut residual: Vec<usize> = (0..h.edges.len()).collect();
    let mut out = Vec::new();
    while !residual.is_empty() {
        let m = greedy(&h.edges, &residual, cap.map(|c| c.max(1)));
        let taken: HashSet<usize> = m.iter().copied().collect();
        residual.retain(|e| !taken.contains(e));
        out.push(m);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hg(edges: &[&[usize]]) -> Hypergraph {
        let n = edges.iter().flat_map(|e| e.iter()).max().map_or(0, |m| m + 1);
        Hypergraph::new(n, edges.iter().map(|e| e.to_vec()).collect())
    }

    #[test]
    fn path_matching() {
        assert_eq!(greedy_maximal_matching(&hg(&[&[0, 1], &[1, 2], &[2, 3]])), vec![0, 2]);
        assert!(greedy_maximal_matching(&hg(&[])).is_empty());
    }

    #[test]
    fn star_needs_one_layer_per_edge() {
        let h = hg(&[&[0, 1], &[0, 2], &[0, 3], &[0, 4], &[0, 5]]);
        assert_eq!(partition_units(&h, None).len(), 5);
    }

    #[test]
    fn perfect_matching_is_one_layer() {
        assert_eq!(partition_units(&hg(&[&[0, 1], &[2, 3], &[4, 5]]), None), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn cap_limits_matching_size() {
        let p = partition_units(&hg(&[&[0], &[1], &[2], &[3], &[4]]), Some(2));
        assert_eq!(p, vec![vec![0, 1], vec![2, 3], vec![4]]);
    }
}
