//! Exterior algebra `Λ(V)` on a fixed basis, truncated at a top degree.
//! Degree-`p` basis elements are strictly increasing index tuples in
//! lexicographic order.

use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct Exterior {
    n: usize,
    basis: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for k in start..n {
            cur.push(k);
            rec(k + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, p, &mut Vec::new(), &mut out);
    out
}

impl Exterior {
    pub fn new(n: usize, top: usize) -> Self {
        let basis: Vec<Vec<Vec<usize>>> = (0..=top).map(|p| subsets(n, p)).collect();
        let index = basis.iter().map(|b| b.iter().enumerate().map(|(k, s)| (s.clone(), k)).collect()).collect();
        Exterior { n, basis, index }
    }

    pub fn generators(&self) -> usize {
        self.n
    }

    pub fn top(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn dim(&self, p: usize) -> usize {
        self.basis.get(p).map_or(0, Vec::len)
    }

    pub fn element(&self, p: usize, k: usize) -> &[usize] {
        &self.basis[p][k]
    }

    pub fn index_of(&self, indices: &[usize]) -> Option<usize> {
        self.index.get(indices.len())?.get(indices).copied()
    }

    /// `e_I ∧ e_J = sign · e_K`, or `None` when the product vanishes or
    /// exceeds the top degree.
    pub fn wedge(&self, p: usize, i: usize, q: usize, j: usize) -> Option<(i64, usize)> {
        if p + q > self.top() {
            return None;
        }
        let mut word: Vec<usize> = self.basis[p][i].iter().chain(&self.basis[q][j]).copied().collect();
        let mut sign = 1;
        // bubble sort, counting transpositions
        for a in 0..word.len() {
            for b in 0..word.len() - 1 - a {
                if word[b] == word[b + 1] {
                    return None;
                }
                if word[b] > word[b + 1] {
                    word.swap(b, b + 1);
                    sign = -sign;
                }
            }
        }
        if word.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((sign, self.index[p + q][&word]))
    }

    /// Label like `θ1θ3` for a degree-`p` basis element.
    pub fn label(&self, p: usize, k: usize, symbol: &str) -> String {
        self.basis[p][k].iter().map(|r| format!("{symbol}{}", r + 1)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions_are_binomial() {
        let e = Exterior::new(3, 3);
        assert_eq!((0..=3).map(|p| e.dim(p)).collect::<Vec<_>>(), vec![1, 3, 3, 1]);
        let e = Exterior::new(8, 3);
        assert_eq!(e.dim(3), 56);
    }

    #[test]
    fn wedge_signs() {
        let e = Exterior::new(3, 3);
        let i1 = e.index_of(&[1]).unwrap();
        let i0 = e.index_of(&[0]).unwrap();
        let i01 = e.index_of(&[0, 1]).unwrap();
        assert_eq!(e.wedge(1, i0, 1, i1), Some((1, i01)));
        assert_eq!(e.wedge(1, i1, 1, i0), Some((-1, i01)));
        assert_eq!(e.wedge(1, i0, 1, i0), None);
        let i2 = e.index_of(&[2]).unwrap();
        // θ3 ∧ θ1θ2 = θ1θ2θ3
        assert_eq!(e.wedge(1, i2, 2, i01), Some((1, 0)));
    }
}
