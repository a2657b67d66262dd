//! Exact worst-case expected time to leave a region of a state graph.

use num_traits::{One, Zero};

use super::CertError;
use crate::exploration::{NodeKind, StateGraph};
use crate::rational::Rational;

/// Nodes of `region` from which some scheduler stays inside the region
/// with positive probability forever.
pub fn trapped_nodes(g: &StateGraph, region: &[bool]) -> Vec<bool> {
    let n = g.len();
    // Greatest set where some scheduler never leaves the region.
    let mut z: Vec<bool> = region.to_vec();
    loop {
        let mut changed = false;
        for s in 0..n {
            if !z[s] {
                continue;
            }
            let keep = match g.kind(s) {
                NodeKind::Terminal => false,
                NodeKind::Det(a) => z[*a],
                NodeKind::Nondet(a, b) => z[*a] || z[*b],
                NodeKind::Prob(_, a, b) => z[*a] && z[*b],
            };
            if !keep {
                z[s] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    // Region nodes that can reach that set with positive probability.
    let mut bad = z;
    loop {
        let mut changed = false;
        for s in 0..n {
            if bad[s] || !region[s] {
                continue;
            }
            if g.successors(s).iter().any(|&t| bad[t]) {
                bad[s] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    bad
}

fn tarjan(n: usize, adj: &[Vec<usize>], active: &[bool]) -> Vec<Vec<usize>> {
    // Iterative Tarjan; components come out sinks first.
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0usize;
    for root in 0..n {
        if !active[root] || index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&(v, i)) = call.last() {
            if i < adj[v].len() {
                let w = adj[v][i];
                call.last_mut().expect("non-empty").1 += 1;
                if !active[w] {
                    continue;
                }
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(p, _)) = call.last() {
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// Solves `A x = b` exactly; `None` when singular.
fn gauss(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = Rational::one() / &a[col][col];
        for c in col..n {
            a[col][c] = &a[col][c] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in col..n {
                if !a[col][c].is_zero() {
                    let delta = &factor * &a[col][c];
                    a[r][c] -= delta;
                }
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    Some(b)
}

/// Expected steps to leave `region` under a fixed memoryless policy
/// (`choice[s]` picks the left successor at nondeterministic nodes).
fn evaluate(g: &StateGraph, region: &[bool], choice: &[bool]) -> Result<Vec<Rational>, CertError> {
    let n = g.len();
    let succ: Vec<Vec<(usize, Rational)>> = (0..n)
        .map(|s| {
            if !region[s] {
                return Vec::new();
            }
            match g.kind(s) {
                NodeKind::Terminal => Vec::new(),
                NodeKind::Det(a) => vec![(*a, Rational::one())],
                NodeKind::Nondet(a, b) => vec![(if choice[s] { *a } else { *b }, Rational::one())],
                NodeKind::Prob(p, a, b) => vec![(*a, p.clone()), (*b, Rational::one() - p)],
            }
        })
        .collect();
    let adj: Vec<Vec<usize>> = succ.iter().map(|v| v.iter().map(|(t, _)| *t).collect()).collect();
    let mut val = vec![Rational::zero(); n];
    for comp in tarjan(n, &adj, region) {
        let pos: std::collections::HashMap<usize, usize> = comp.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let m = comp.len();
        let mut a = vec![vec![Rational::zero(); m]; m];
        let mut b = vec![Rational::one(); m];
        for (i, &s) in comp.iter().enumerate() {
            if matches!(g.kind(s), NodeKind::Terminal) {
                // A terminal node inside the region never leaves it.
                return Err(CertError::NotExitBounded(g.key(s).to_string()));
            }
            a[i][i] += Rational::one();
            for (t, w) in &succ[s] {
                match pos.get(t) {
                    Some(&j) => a[i][j] -= w,
                    None => b[i] += w * &val[*t],
                }
            }
        }
        let x = gauss(a, b).ok_or_else(|| CertError::NotExitBounded(g.key(comp[0]).to_string()))?;
        for (i, &s) in comp.iter().enumerate() {
            val[s] = x[i].clone();
        }
    }
    Ok(val)
}

/// Worst case over schedulers of the expected number of steps to leave
/// `region`; 0 outside. Fails when some scheduler can stay forever.
pub fn worst_case_exit_time(g: &StateGraph, region: &[bool]) -> Result<Vec<Rational>, CertError> {
    let trapped = trapped_nodes(g, region);
    if let Some(s) = (0..g.len()).find(|&s| trapped[s]) {
        return Err(CertError::NotExitBounded(g.key(s).to_string()));
    }
    let mut choice = vec![true; g.len()];
    loop {
        let val = evaluate(g, region, &choice)?;
        let mut changed = false;
        for s in 0..g.len() {
            if !region[s] {
                continue;
            }
            if let NodeKind::Nondet(a, b) = g.kind(s) {
                let better_left = val[*a] > val[*b];
                let better_right = val[*b] > val[*a];
                if (choice[s] && better_right) || (!choice[s] && better_left) {
                    choice[s] = !choice[s];
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(val);
        }
    }
}
