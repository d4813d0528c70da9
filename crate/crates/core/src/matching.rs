//! Maximum bipartite matching by augmenting paths (Kuhn's algorithm).
//!
//! Left vertices are processed in index order and each adjacency list is
//! scanned in the order given, so the result is deterministic.

/// Returns `matched[l] = Some(r)` for a maximum matching.
pub(crate) fn maximum_matching(n_right: usize, adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    let mut right_owner: Vec<Option<usize>> = vec![None; n_right];
    for l in 0..adj.len() {
        let mut visited = vec![false; n_right];
        augment(l, adj, &mut visited, &mut right_owner);
    }
    let mut matched = vec![None; adj.len()];
    for (r, owner) in right_owner.iter().enumerate() {
        if let Some(l) = owner {
            matched[*l] = Some(r);
        }
    }
    matched
}

fn augment(
    l: usize,
    adj: &[Vec<usize>],
    visited: &mut [bool],
    right_owner: &mut [Option<usize>],
) -> bool {
    for &r in &adj[l] {
        if visited[r] {
            continue;
        }
        visited[r] = true;
        let free = match right_owner[r] {
            None => true,
            Some(other) => augment(other, adj, visited, right_owner),
        };
        if free {
            right_owner[r] = Some(l);
            return true;
        }
    }
    false
}
