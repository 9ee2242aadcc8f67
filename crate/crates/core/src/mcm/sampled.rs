//! Random-probe matching under a hard probe budget.

use rand::seq::SliceRandom;
use rand::Rng as _;

use super::{CallProbes, EdgeView};
use crate::oracle::ExplicitMatching;
use crate::seed::Rng;

/// Random-order greedy matching followed by length-3 augmentation attempts.
pub(crate) fn sampled_matching(
    view: &dyn EdgeView,
    left: &[usize],
    right: &[usize],
    call: &mut CallProbes,
    rng: &mut Rng,
) -> ExplicitMatching {
    let n = view.n();
    let mut m = ExplicitMatching::empty(n);
    if left.is_empty() || right.is_empty() {
        return m;
    }
    let mut order: Vec<usize> = left.to_vec();
    order.shuffle(rng);
    let per_vertex = (call.budget / (2 * left.len() as u64)).max(1);

    for &u in &order {
        let mut tries = 0u64;
        let mut attempts = 0u64;
        while tries < per_vertex && attempts < 4 * per_vertex {
            attempts += 1;
            let v = right[rng.gen_range(0..right.len())];
            if m.mate_of_right(v).is_some() {
                continue;
            }
            tries += 1;
            match call.probe(view, u, v) {
                None => return m,
                Some(true) => {
                    m.link(u, v);
                    break;
                }
                Some(false) => {}
            }
        }
    }

    for _pass in 0..per_vertex {
        if call.exhausted() {
            break;
        }
        let mut progress = false;
        order.shuffle(rng);
        for &u in &order {
            if m.mate_of_left(u).is_some() {
                continue;
            }
            let v = right[rng.gen_range(0..right.len())];
            match call.probe(view, u, v) {
                None => return m,
                Some(false) => continue,
                Some(true) => {}
            }
            match m.mate_of_right(v) {
                None => {
                    m.link(u, v);
                    progress = true;
                }
                Some(w) => {
                    let Some(v2) = (0..4)
                        .map(|_| right[rng.gen_range(0..right.len())])
                        .find(|&x| m.mate_of_right(x).is_none())
                    else {
                        continue;
                    };
                    match call.probe(view, w, v2) {
                        None => return m,
                        Some(true) => {
                            m.unlink_left(w);
                            m.link(w, v2);
                            m.link(u, v);
                            progress = true;
                        }
                        Some(false) => {}
                    }
                }
            }
        }
        if !progress && m.len() == left.len().min(right.len()) {
            break;
        }
    }
    m
}
