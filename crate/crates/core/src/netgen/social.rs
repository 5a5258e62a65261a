use rand::seq::index::sample;
use rand::Rng;

use super::AdjacencyGraph;
use crate::error::{Error, Result};

/// Grows a clustered "social" network one vertex at a time.
///
/// Each new vertex picks `m_r = ⌈z + 0.05 + f1·v⌉` initial contacts uniformly
/// among the existing vertices, then for every initial contact
/// `m_s = round(n + 0.05 + f2·q)` of that contact's neighbors as secondary
/// contacts (`z, v, q ~ U[0,1]`, `n ~ U{0,1,2,3}`, ties rounded to even).
/// Requests larger than what exists are clamped. Secondary contacts are drawn
/// without replacement and never repeat an already chosen contact.
pub fn gen_social<R: Rng + ?Sized>(size: usize, f1: f64, f2: f64, rng: &mut R) -> Result<AdjacencyGraph> {
    if size < 2 {
        return Err(Error::invalid("size", "social networks need L >= 2"));
    }
    if !(f1 >= 0.0 && f1.is_finite()) {
        return Err(Error::invalid("f1", "must be a finite nonnegative real"));
    }
    if !(f2 >= 0.0 && f2.is_finite()) {
        return Err(Error::invalid("f2", "must be a finite nonnegative real"));
    }
    let mut graph = AdjacencyGraph::empty(size);
    let mut contacts: Vec<usize> = Vec::new();
    for new in 1..size {
        let z: f64 = rng.random();
        let v: f64 = rng.random();
        let initial_count = ((z + 0.05 + f1 * v).ceil() as usize).clamp(1, new);
        let initial: Vec<usize> = sample(rng, new, initial_count).into_vec();

        contacts.clear();
        contacts.extend_from_slice(&initial);
        for &contact in &initial {
            let n = rng.random_range(0..4u32) as f64;
            let q: f64 = rng.random();
            let wanted = (n + 0.05 + f2 * q).round_ties_even() as usize;
            let candidates: Vec<usize> = graph
                .neighbors(contact)
                .iter()
                .copied()
                .filter(|u| !contacts.contains(u))
                .collect();
            let take = wanted.min(candidates.len());
            if take == 0 {
                continue;
            }
            for idx in sample(rng, candidates.len(), take) {
                contacts.push(candidates[idx]);
            }
        }
        for &u in &contacts {
            graph.add_edge(new, u);
        }
    }
    Ok(graph)
}
