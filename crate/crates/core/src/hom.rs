use std::sync::Arc;

use crate::elemset::ElemSet;
use crate::error::{CatError, Result};
use crate::morphism::Morphism;
use crate::object::Obj;

/// All structure- and basepoint-preserving maps `a → b`, sorted
/// lexicographically by table.
pub fn enumerate_hom(a: &Obj, b: &Obj) -> Result<Vec<Morphism>> {
    if a.kind() != b.kind() {
        return Err(CatError::BackendMismatch {
            left: a.kind(),
            right: b.kind(),
        });
    }
    let mut tables = if a.is_group() {
        group_homs(a, b)
    } else {
        pointed_maps(a.size(), b.size())
    };
    tables.sort_unstable();
    Ok(tables
        .into_iter()
        .map(|t| Morphism::new_unchecked(Arc::clone(a), Arc::clone(b), t))
        .collect())
}

fn pointed_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    loop {
        out.push(cur.clone());
        // odometer over positions 1..n
        let mut i = n;
        loop {
            if i <= 1 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < m {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Greedy generating set: walk the elements in canonical order and keep each
/// one not already generated by the previous picks.
pub fn greedy_generators(g: &Obj) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = ElemSet::from_iter_in(g.size(), [0]);
    for x in 1..g.size() {
        if !span.contains(x) {
            gens.push(x);
            span = crate::subobject::generated(g, &gens);
        }
    }
    gens
}

fn group_homs(a: &Obj, b: &Obj) -> Vec<Vec<usize>> {
    let gens = greedy_generators(a);
    // candidate images: order must divide the generator's order
    let b_orders: Vec<usize> = (0..b.size()).map(|y| b.element_order(y)).collect();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let og = a.element_order(g);
            (0..b.size()).filter(|&y| og.is_multiple_of(b_orders[y])).collect()
        })
        .collect();
    let mut out = Vec::new();
    if gens.is_empty() {
        out.push(vec![0; a.size()]);
        return out;
    }
    let mut choice = vec![0usize; gens.len()];
    let mut map = vec![usize::MAX; a.size()];
    let mut queue = Vec::with_capacity(a.size());
    'outer: loop {
        if let Some(t) = try_extend(a, b, &gens, &candidates, &choice, &mut map, &mut queue) {
            out.push(t);
        }
        let mut i = gens.len();
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < candidates[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
    out
}

/// Extends generator images along the right Cayley graph. Consistency on
/// every edge `x → x·g` makes the map a homomorphism.
fn try_extend(
    a: &Obj,
    b: &Obj,
    gens: &[usize],
    candidates: &[Vec<usize>],
    choice: &[usize],
    map: &mut [usize],
    queue: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    map.fill(usize::MAX);
    map[0] = 0;
    queue.clear();
    queue.push(0);
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (k, &g) in gens.iter().enumerate() {
            let img_g = candidates[k][choice[k]];
            let y = a.op(x, g);
            let want = b.op(map[x], img_g);
            if map[y] == usize::MAX {
                map[y] = want;
                queue.push(y);
            } else if map[y] != want {
                return None;
            }
        }
    }
    Some(map.to_vec())
}
