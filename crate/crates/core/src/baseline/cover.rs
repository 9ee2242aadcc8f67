//! König's theorem on an explicit edge list.

use crate::instance::Vertex;

const NONE: usize = usize::MAX;

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
    }
    adj
}

/// Kuhn's augmenting-path matching; returns the mate of every left vertex.
fn kuhn(n: usize, adj: &[Vec<usize>]) -> (Vec<usize>, Vec<usize>) {
    let mut mate_l = vec![NONE; n];
    let mut mate_r = vec![NONE; n];
    let mut seen = vec![0usize; n];
    for root in 0..n {
        let stamp = root + 1;
        // explicit stack of (left vertex, next neighbour index)
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        let mut via: Vec<usize> = Vec::new();
        let mut found = false;
        while let Some(&mut (u, ref mut i)) = stack.last_mut() {
            if *i == adj[u].len() {
                stack.pop();
                via.pop();
                continue;
            }
            let v = adj[u][*i];
            *i += 1;
            if seen[v] == stamp {
                continue;
            }
            seen[v] = stamp;
            via.push(v);
            if mate_r[v] == NONE {
                found = true;
                break;
            }
            stack.push((mate_r[v], 0));
        }
        if found {
            for (&(u, _), &v) in stack.iter().zip(&via) {
                mate_l[u] = v;
                mate_r[v] = u;
            }
        }
    }
    (mate_l, mate_r)
}

pub fn max_matching_size(n: usize, edges: &[(usize, usize)]) -> usize {
    let (mate_l, _) = kuhn(n, &adjacency(n, edges));
    mate_l.iter().filter(|&&v| v != NONE).count()
}

/// Minimum vertex cover of the bipartite graph on `V0 ∪ V1` with the given edges.
pub fn min_vertex_cover(n: usize, edges: &[(usize, usize)]) -> Vec<Vertex> {
    let adj = adjacency(n, edges);
    let (mate_l, mate_r) = kuhn(n, &adj);
    let mut reach_l = vec![false; n];
    let mut reach_r = vec![false; n];
    let mut queue: Vec<usize> = (0..n).filter(|&u| mate_l[u] == NONE).collect();
    for &u in &queue {
        reach_l[u] = true;
    }
    while let Some(u) = queue.pop() {
        for &v in &adj[u] {
            if mate_l[u] == v || reach_r[v] {
                continue;
            }
            reach_r[v] = true;
            let w = mate_r[v];
            if w != NONE && !reach_l[w] {
                reach_l[w] = true;
                queue.push(w);
            }
        }
    }
    let mut cover = Vec::new();
    for u in 0..n {
        if !reach_l[u] && mate_l[u] != NONE {
            cover.push(Vertex::left(u));
        }
    }
    for v in 0..n {
        if reach_r[v] {
            cover.push(Vertex::right(v));
        }
    }
    cover
}
