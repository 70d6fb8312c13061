//! Dimension of a monomial ideal: the largest set of variables containing
//! no leading monomial's support, found as the complement of a minimum
//! hitting set of the supports.

use crate::polycore::Monomial;

/// Size of a maximum independent subset of `vars` for the monomial ideal
/// generated by `leading`. Every support must lie inside `vars`.
pub(crate) fn independent_dimension(leading: &[Monomial], vars: &[usize]) -> usize {
    let mut edges: Vec<Vec<usize>> = leading.iter().map(|m| m.support()).collect();
    edges.sort_by_key(|e| e.len());
    edges.dedup();
    // keep only inclusion-minimal supports
    let mut minimal: Vec<Vec<usize>> = Vec::new();
    for e in edges {
        if !minimal.iter().any(|f| f.iter().all(|v| e.binary_search(v).is_ok())) {
            minimal.push(e);
        }
    }
    let width = vars.iter().copied().max().map_or(0, |v| v + 1);
    let mut chosen = vec![false; width.max(minimal.iter().flatten().max().map_or(0, |v| v + 1))];
    let mut best = vars.len();
    search(&minimal, &mut chosen, 0, &mut best);
    vars.len() - best
}

fn search(edges: &[Vec<usize>], chosen: &mut [bool], size: usize, best: &mut usize) {
    if size >= *best {
        return;
    }
    // lower bound: greedily pick pairwise disjoint uncovered edges
    let uncovered: Vec<&Vec<usize>> = edges.iter().filter(|e| !e.iter().any(|&v| chosen[v])).collect();
    if uncovered.is_empty() {
        *best = size;
        return;
    }
    let mut used = vec![false; chosen.len()];
    let mut bound = 0;
    for e in &uncovered {
        if e.iter().all(|&v| !used[v]) {
            bound += 1;
            for &v in e.iter() {
                used[v] = true;
            }
        }
    }
    if size + bound >= *best {
        return;
    }
    let pick = uncovered.iter().min_by_key(|e| e.len()).expect("nonempty");
    for &v in pick.iter() {
        chosen[v] = true;
        search(edges, chosen, size + 1, best);
        chosen[v] = false;
    }
}

/// Exhaustive search over all subsets; used to cross-check small cases.
pub fn brute_force_dimension(leading: &[Monomial], n: usize) -> usize {
    assert!(n <= 20, "brute force limited to 20 variables");
    let supports: Vec<u32> = leading
        .iter()
        .map(|m| m.support().iter().fold(0u32, |acc, &v| acc | (1 << v)))
        .collect();
    (0u32..(1 << n))
        .filter(|s| supports.iter().all(|m| m & !s != 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}
