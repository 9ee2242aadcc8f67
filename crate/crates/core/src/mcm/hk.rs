//! Hopcroft–Karp on explicit adjacency lists.

const NONE: u32 = u32::MAX;
const INF: u32 = u32::MAX;

/// Maximum matching of the bipartite graph `0..nl × 0..nr`.
///
/// Returns the mate of every left vertex. `init` seeds the search with an
/// existing matching.
pub(crate) fn hopcroft_karp(nl: usize, nr: usize, adj: &[Vec<u32>], init: Option<&[u32]>) -> Vec<u32> {
    let mut mate_l = vec![NONE; nl];
    let mut mate_r = vec![NONE; nr];
    if let Some(init) = init {
        for (u, &v) in init.iter().enumerate() {
            if v != NONE {
                mate_l[u] = v;
                mate_r[v as usize] = u as u32;
            }
        }
    }
    let mut dist = vec![INF; nl];
    let mut queue = Vec::with_capacity(nl);
    let mut it = vec![0usize; nl];
    let mut stack: Vec<(u32, u32)> = Vec::new();
    loop {
        queue.clear();
        for u in 0..nl {
            if mate_l[u] == NONE {
                dist[u] = 0;
                queue.push(u as u32);
            } else {
                dist[u] = INF;
            }
        }
        let mut found = false;
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head] as usize;
            head += 1;
            for &v in &adj[u] {
                let w = mate_r[v as usize];
                if w == NONE {
                    found = true;
                } else if dist[w as usize] == INF {
                    dist[w as usize] = dist[u] + 1;
                    queue.push(w);
                }
            }
        }
        if !found {
            break;
        }
        it.iter_mut().for_each(|x| *x = 0);
        for root in 0..nl {
            if mate_l[root] != NONE {
                continue;
            }
            stack.clear();
            stack.push((root as u32, NONE));
            while let Some(&(u, _)) = stack.last() {
                let u = u as usize;
                if it[u] == adj[u].len() {
                    dist[u] = INF;
                    stack.pop();
                    continue;
                }
                let v = adj[u][it[u]];
                it[u] += 1;
                let w = mate_r[v as usize];
                if w == NONE {
                    stack.last_mut().unwrap().1 = v;
                    for &(a, b) in &stack {
                        mate_l[a as usize] = b;
                        mate_r[b as usize] = a;
                    }
                    break;
                }
                if dist[w as usize] == dist[u].wrapping_add(1) {
                    stack.last_mut().unwrap().1 = v;
                    stack.push((w, NONE));
                }
            }
        }
    }
    mate_l
}
