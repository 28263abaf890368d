//! Coset enumeration over the trivial subgroup (HLT strategy with
//! coincidence processing). The closed table is the right regular action of
//! the presented group on itself.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::group_core::words::Letter;

const NONE: u32 = u32::MAX;

pub struct CosetTable {
    width: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    queue: Vec<u32>,
    limit: usize,
}

#[inline]
fn column((g, inv): Letter) -> usize {
    2 * g + inv as usize
}

#[inline]
fn inverse_column(c: usize) -> usize {
    c ^ 1
}

impl CosetTable {
    fn new(generators: usize, limit: usize) -> Self {
        let width = 2 * generators;
        CosetTable {
            width,
            table: vec![NONE; width],
            parent: vec![0],
            queue: Vec::new(),
            limit,
        }
    }

    fn len(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    fn get(&self, coset: u32, col: usize) -> u32 {
        self.table[coset as usize * self.width + col]
    }

    #[inline]
    fn set(&mut self, coset: u32, col: usize, value: u32) {
        self.table[coset as usize * self.width + col] = value;
    }

    fn is_live(&self, coset: u32) -> bool {
        self.parent[coset as usize] == coset
    }

    fn define(&mut self, coset: u32, col: usize) -> Result<()> {
        if self.len() >= self.limit {
            return Err(Error::EnumerationLimit { limit: self.limit });
        }
        let fresh = self.len() as u32;
        self.parent.push(fresh);
        self.table.extend(std::iter::repeat_n(NONE, self.width));
        self.set(coset, col, fresh);
        self.set(fresh, inverse_column(col), coset);
        Ok(())
    }

    fn rep(&mut self, mut k: u32) -> u32 {
        let mut root = k;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[k as usize] != root {
            let next = self.parent[k as usize];
            self.parent[k as usize] = root;
            k = next;
        }
        root
    }

    fn merge(&mut self, k: u32, l: u32) {
        let a = self.rep(k);
        let b = self.rep(l);
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.parent[hi as usize] = lo;
            self.queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let gamma = self.queue[i];
            i += 1;
            for col in 0..self.width {
                let delta = self.get(gamma, col);
                if delta == NONE {
                    continue;
                }
                let inv = inverse_column(col);
                self.set(delta, inv, NONE);
                let mu = self.rep(gamma);
                let nu = self.rep(delta);
                let mu_x = self.get(mu, col);
                if mu_x != NONE {
                    self.merge(nu, mu_x);
                } else {
                    let nu_inv = self.get(nu, inv);
                    if nu_inv != NONE {
                        self.merge(mu, nu_inv);
                    } else {
                        self.set(mu, col, nu);
                        self.set(nu, inv, mu);
                    }
                }
            }
        }
    }

    fn scan_and_fill(&mut self, alpha: u32, word: &[usize]) -> Result<()> {
        let mut f = alpha;
        let mut b = alpha;
        let mut i = 0;
        let mut j = word.len();
        loop {
            while i < j && self.get(f, word[i]) != NONE {
                f = self.get(f, word[i]);
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i && self.get(b, inverse_column(word[j - 1])) != NONE {
                b = self.get(b, inverse_column(word[j - 1]));
                j -= 1;
            }
            if j < i + 1 {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.set(f, word[i], b);
                self.set(b, inverse_column(word[i]), f);
                return Ok(());
            }
            self.define(f, word[i])?;
        }
    }

    /// Compacts live cosets in definition order and derives the full
    /// multiplication table. Returns `(order, table, generator elements)`.
    pub fn into_group_table(mut self) -> (usize, Vec<usize>, Vec<usize>) {
        let coset_count = self.len() as u32;
        let mut new_index = vec![usize::MAX; self.len()];
        let mut live = Vec::new();
        for c in 0..coset_count {
            if self.is_live(c) {
                new_index[c as usize] = live.len();
                live.push(c);
            }
        }
        let n = live.len();
        let width = self.width;
        let mut action = vec![0usize; n * width];
        for (i, &c) in live.iter().enumerate() {
            for col in 0..width {
                let t = self.get(c, col);
                let t = self.rep(t);
                action[i * width + col] = new_index[t as usize];
            }
        }

        // spanning tree: each element reached as parent * generator letter
        let mut tree: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut order_seen = vec![0usize];
        let mut visited = vec![false; n];
        visited[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for col in 0..width {
                let y = action[x * width + col];
                if !visited[y] {
                    visited[y] = true;
                    tree[y] = Some((x, col));
                    order_seen.push(y);
                    queue.push_back(y);
                }
            }
        }

        let mut mul = vec![0usize; n * n];
        for a in 0..n {
            mul[a * n] = a;
            for &b in order_seen.iter().skip(1) {
                let (p, col) = tree[b].unwrap();
                let ap = mul[a * n + p];
                mul[a * n + b] = action[ap * width + col];
            }
        }
        let gens = (0..width / 2).map(|g| action[2 * g]).collect();
        (n, mul, gens)
    }
}

/// Enumerates cosets of the trivial subgroup. Fails if the working table
/// exceeds `limit` cosets or the closed table has more than `max_order`
/// elements.
pub fn enumerate(
    generators: usize,
    relators: &[Vec<Letter>],
    limit: usize,
    max_order: usize,
) -> Result<CosetTable> {
    let words: Vec<Vec<usize>> = relators
        .iter()
        .map(|r| r.iter().map(|&l| column(l)).collect::<Vec<_>>())
        .filter(|w| !w.is_empty())
        .collect();
    let mut ct = CosetTable::new(generators, limit);
    let width = ct.width;
    let mut alpha = 0u32;
    while (alpha as usize) < ct.len() {
        if ct.is_live(alpha) {
            for w in &words {
                ct.scan_and_fill(alpha, w)?;
                if !ct.is_live(alpha) {
                    break;
                }
            }
            if ct.is_live(alpha) {
                for col in 0..width {
                    if ct.get(alpha, col) == NONE {
                        ct.define(alpha, col)?;
                    }
                }
            }
        }
        alpha += 1;
    }
    let live = (0..ct.len() as u32).filter(|&c| ct.is_live(c)).count();
    if live > max_order {
        return Err(Error::OrderCap {
            order: live,
            cap: max_order,
        });
    }
    Ok(ct)
}
