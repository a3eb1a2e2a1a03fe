use std::collections::VecDeque;

use super::Graph;

/// Two-colouring of a bipartite graph: `color[v]` is 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub color: Vec<u8>,
}

impl Bipartition {
    /// Sizes of colour classes 0 and 1.
    pub fn class_sizes(&self) -> (usize, usize) {
        let ones = self.color.iter().filter(|&&c| c == 1).count();
        (self.color.len() - ones, ones)
    }
}

/// BFS 2-colouring, one component at a time starting from its lowest index
/// (coloured 0). Returns `None` if some edge joins equal colours.
pub fn is_bipartite(g: &Graph) -> Option<Bipartition> {
    let n = g.vertex_count();
    let mut color: Vec<Option<u8>> = vec![None; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        if color[s].is_some() {
            continue;
        }
        color[s] = Some(0);
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let cu = color[u]?;
            for &(w, _) in g.neighbors(u) {
                match color[w] {
                    None => {
                        color[w] = Some(1 - cu);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == cu => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(Bipartition {
        color: color.into_iter().map(|c| c.unwrap_or(0)).collect(),
    })
}
