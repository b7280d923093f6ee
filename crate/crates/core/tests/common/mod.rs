//! Small reference computations that do not go through the library's own
//! tally or search code.
#![allow(dead_code)]

use cordial::{GraphShape, Labeling};

pub fn add(moduli: &[u64], a: &[u64], b: &[u64]) -> Vec<u64> {
    moduli
        .iter()
        .zip(a.iter().zip(b))
        .map(|(m, (x, y))| (x + y) % m)
        .collect()
}

/// Mixed-radix index, last coordinate fastest.
pub fn index(moduli: &[u64], e: &[u64]) -> usize {
    moduli
        .iter()
        .zip(e)
        .fold(0, |acc, (&m, &x)| acc * m as usize + x as usize)
}

pub fn element(moduli: &[u64], mut i: usize) -> Vec<u64> {
    let mut out = vec![0; moduli.len()];
    for (slot, &m) in out.iter_mut().zip(moduli).rev() {
        *slot = (i % m as usize) as u64;
        i /= m as usize;
    }
    out
}

pub fn edge_list(shape: &GraphShape) -> Vec<(usize, usize)> {
    match shape {
        GraphShape::Path(n) => (1..*n).map(|i| (i - 1, i)).collect(),
        GraphShape::Cycles(ls) => {
            let mut out = Vec::new();
            let mut base = 0;
            for &l in ls {
                for i in 0..l {
                    out.push((base + i, base + (i + 1) % l));
                }
                base += l;
            }
            out
        }
    }
}

/// Vertex and edge class counts.
pub fn tally(
    moduli: &[u64],
    labels: &[Vec<u64>],
    edges: &[(usize, usize)],
) -> (Vec<usize>, Vec<usize>) {
    let n: u64 = moduli.iter().product();
    let mut v = vec![0; n as usize];
    let mut e = vec![0; n as usize];
    for l in labels {
        v[index(moduli, l)] += 1;
    }
    for &(a, b) in edges {
        e[index(moduli, &add(moduli, &labels[a], &labels[b]))] += 1;
    }
    (v, e)
}

pub fn balanced(c: &[usize]) -> bool {
    c.iter().max().unwrap() - c.iter().min().unwrap() <= 1
}

pub fn cordial_by_tally(moduli: &[u64], labels: &[Vec<u64>], shape: &GraphShape) -> bool {
    let (v, e) = tally(moduli, labels, &edge_list(shape));
    balanced(&v) && balanced(&e)
}

pub fn residues(lab: &Labeling) -> Vec<Vec<u64>> {
    lab.labels().iter().map(|e| e.residues().to_vec()).collect()
}

/// Independent check of a library labeling.
pub fn oracle_accepts(lab: &Labeling) -> bool {
    cordial_by_tally(lab.group().moduli(), &residues(lab), lab.shape())
}

/// Tries every labeling; only for tiny instances.
pub fn brute_force_exists(moduli: &[u64], shape: &GraphShape) -> bool {
    let n: usize = moduli.iter().product::<u64>() as usize;
    let verts = shape.vertex_count();
    let edges = edge_list(shape);
    let mut code = vec![0usize; verts];
    loop {
        let labels: Vec<Vec<u64>> = code.iter().map(|&i| element(moduli, i)).collect();
        let (v, e) = tally(moduli, &labels, &edges);
        if balanced(&v) && balanced(&e) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == verts {
                return false;
            }
            code[i] += 1;
            if code[i] < n {
                break;
            }
            code[i] = 0;
            i += 1;
        }
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}
