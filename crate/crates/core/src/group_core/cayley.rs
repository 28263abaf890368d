use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group_core::ElementSet;

/// Largest group order handled anywhere in the crate.
pub const MAX_ORDER: usize = 512;

/// Largest table accepted by [`CayleyGroup::from_table`]; unit groups of
/// residue rings with up to 4096 elements can have 2048 units.
pub const MAX_TABLE_ORDER: usize = 2048;

/// A named generator, stored as its element index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub element: usize,
}

/// A finite 2-group stored as a full multiplication table.
///
/// Element `0` is always the identity. Orders, the center and the conjugacy
/// classes are computed once at construction; the value is immutable after
/// that.
#[derive(Clone)]
pub struct CayleyGroup {
    order: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    generators: Vec<Generator>,
    labels: Option<Vec<String>>,
    words: Option<Vec<Vec<usize>>>,
    orders: Vec<u32>,
    center: Vec<usize>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<u32>,
}

impl fmt::Debug for CayleyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CayleyGroup")
            .field("order", &self.order)
            .field("generators", &self.generators)
            .finish_non_exhaustive()
    }
}

impl CayleyGroup {
    /// Builds a group from a row-major multiplication table.
    ///
    /// Validates that the table is a Latin square with identity at index 0,
    /// that the order is a power of two, and that the operation is
    /// associative. Associativity is checked with Light's test over a
    /// generating set, which is a complete check: the elements that associate
    /// in the middle position form a closed subset containing the generators.
    pub fn from_table(order: usize, mul: Vec<usize>, generators: Vec<Generator>) -> Result<Self> {
        if order == 0 || !order.is_power_of_two() {
            return Err(Error::InvalidTable(format!("order {order} is not a power of 2")));
        }
        if order > MAX_TABLE_ORDER {
            return Err(Error::OrderCap { order, cap: MAX_TABLE_ORDER });
        }
        if mul.len() != order * order {
            return Err(Error::InvalidTable("table has the wrong number of entries".into()));
        }
        if mul.iter().any(|&x| x >= order) {
            return Err(Error::InvalidTable("table entry out of range".into()));
        }
        let mul: Vec<u16> = mul.into_iter().map(|x| x as u16).collect();
        for x in 0..order {
            if mul[x] as usize != x || mul[x * order] as usize != x {
                return Err(Error::InvalidTable("element 0 is not a two-sided identity".into()));
            }
        }
        let mut seen = vec![0u32; order];
        for r in 0..order {
            for c in 0..order {
                let v = mul[r * order + c] as usize;
                if seen[v] == (r as u32) + 1 {
                    return Err(Error::InvalidTable(format!("row {r} repeats an entry")));
                }
                seen[v] = (r as u32) + 1;
            }
        }
        for v in seen.iter_mut() {
            *v = 0;
        }
        for c in 0..order {
            for r in 0..order {
                let v = mul[r * order + c] as usize;
                if seen[v] == (c as u32) + 1 {
                    return Err(Error::InvalidTable(format!("column {c} repeats an entry")));
                }
                seen[v] = (c as u32) + 1;
            }
        }
        let mut inv = vec![0u16; order];
        for x in 0..order {
            let y = (0..order)
                .find(|&y| mul[x * order + y] == 0)
                .ok_or_else(|| Error::InvalidTable("missing inverse".into()))?;
            if mul[y * order + x] != 0 {
                return Err(Error::InvalidTable("left and right inverses differ".into()));
            }
            inv[x] = y as u16;
        }
        for g in &generators {
            if g.element >= order {
                return Err(Error::InvalidTable(format!("generator {} out of range", g.name)));
            }
        }

        let mut group = CayleyGroup {
            order,
            mul,
            inv,
            generators,
            labels: None,
            words: None,
            orders: Vec::new(),
            center: Vec::new(),
            classes: Vec::new(),
            class_of: Vec::new(),
        };

        let check_set: Vec<usize> = if group.generators.is_empty() {
            group.magma_generating_set()
        } else {
            let gens: Vec<usize> = group.generators.iter().map(|g| g.element).collect();
            if group.magma_closure(&gens).len() != order {
                return Err(Error::InvalidTable("declared generators do not generate the group".into()));
            }
            gens
        };
        for &a in &check_set {
            for x in 0..order {
                let xa = group.mul(x, a);
                for y in 0..order {
                    if group.mul(xa, y) != group.mul(x, group.mul(a, y)) {
                        return Err(Error::InvalidTable(format!(
                            "operation is not associative at ({x}, {a}, {y})"
                        )));
                    }
                }
            }
        }

        group.orders = (0..order).map(|x| group.compute_order(x)).collect();
        group.center = (0..order)
            .filter(|&z| (0..order).all(|x| group.mul(z, x) == group.mul(x, z)))
            .collect();
        group.compute_classes();
        if !group.generators.is_empty() {
            group.compute_words();
        }
        Ok(group)
    }

    /// Elements reachable from `gens` by repeated right multiplication.
    fn magma_closure(&self, gens: &[usize]) -> ElementSet {
        let mut set = ElementSet::new(self.order);
        let mut queue = VecDeque::new();
        set.insert(0);
        queue.push_back(0usize);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        set
    }

    fn magma_generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut reached = self.magma_closure(&gens);
        for x in 0..self.order {
            if !reached.contains(x) {
                gens.push(x);
                reached = self.magma_closure(&gens);
            }
        }
        gens
    }

    fn compute_order(&self, x: usize) -> u32 {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    fn compute_classes(&mut self) {
        let n = self.order;
        let mut class_of = vec![u32::MAX; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if class_of[x] != u32::MAX {
                continue;
            }
            let id = classes.len() as u32;
            let mut class = Vec::new();
            for g in 0..n {
                let c = self.mul(self.mul(self.inv(g), x), g);
                if class_of[c] == u32::MAX {
                    class_of[c] = id;
                    class.push(c);
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    /// Shortlex words over the positive generators, found by breadth-first
    /// search with right multiplication.
    fn compute_words(&mut self) {
        let n = self.order;
        let mut words: Vec<Option<Vec<usize>>> = vec![None; n];
        words[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (gi, g) in self.generators.iter().enumerate() {
                let y = self.mul(x, g.element);
                if words[y].is_none() {
                    let mut w = words[x].clone().unwrap();
                    w.push(gi);
                    words[y] = Some(w);
                    queue.push_back(y);
                }
            }
        }
        let words: Vec<Vec<usize>> = words.into_iter().map(|w| w.unwrap()).collect();
        let labels = words.iter().map(|w| self.render_word(w)).collect();
        self.words = Some(words);
        self.labels = Some(labels);
    }

    fn render_word(&self, word: &[usize]) -> String {
        if word.is_empty() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < word.len() {
            let mut j = i;
            while j < word.len() && word[j] == word[i] {
                j += 1;
            }
            let name = &self.generators[word[i]].name;
            if j - i == 1 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{name}^{}", j - i));
            }
            i = j;
        }
        parts.join("*")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// log2 of the order.
    pub fn rank(&self) -> u32 {
        self.order.trailing_zeros()
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `a^k` for any integer `k`.
    pub fn pow(&self, a: usize, k: i64) -> usize {
        let ord = self.orders[a] as i64;
        let e = k.rem_euclid(ord);
        let mut result = 0;
        let mut base = a;
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    /// The commutator `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(self.inv(ba), ab)
    }

    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn table_row(&self, a: usize) -> &[u16] {
        &self.mul[a * self.order..(a + 1) * self.order]
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator_elements(&self) -> Vec<usize> {
        self.generators.iter().map(|g| g.element).collect()
    }

    pub fn generator_by_name(&self, name: &str) -> Option<usize> {
        self.generators.iter().find(|g| g.name == name).map(|g| g.element)
    }

    pub fn has_labels(&self) -> bool {
        self.labels.is_some()
    }

    /// Generator word for `x`, or `e<index>` for unlabelled groups.
    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => format!("e{x}"),
        }
    }

    /// The generator-index word chosen for `x`.
    pub fn word(&self, x: usize) -> Option<&[usize]> {
        self.words.as_ref().map(|w| w[x].as_slice())
    }

    pub fn element_orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn center(&self) -> &[usize] {
        &self.center
    }

    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_index(&self, x: usize) -> usize {
        self.class_of[x] as usize
    }

    pub fn is_abelian(&self) -> bool {
        self.center.len() == self.order
    }

    pub fn exponent(&self) -> u32 {
        self.orders.iter().copied().max().unwrap_or(1)
    }

    pub fn element_order(&self, x: usize) -> u32 {
        self.orders[x]
    }

    pub fn centralizer(&self, x: usize) -> Vec<usize> {
        (0..self.order)
            .filter(|&g| self.mul(g, x) == self.mul(x, g))
            .collect()
    }

    /// Subgroup generated by `gens`.
    pub fn subgroup(&self, gens: &[usize]) -> ElementSet {
        self.magma_closure(gens)
    }

    pub fn cyclic_subgroup(&self, x: usize) -> ElementSet {
        self.magma_closure(&[x])
    }

    /// Rebuilds the same table with a different list of named generators.
    pub fn with_generators(&self, generators: Vec<Generator>) -> Result<Self> {
        let mul = self.mul.iter().map(|&x| x as usize).collect();
        CayleyGroup::from_table(self.order, mul, generators)
    }

    /// Raw table entries, row-major.
    pub fn table(&self) -> Vec<usize> {
        self.mul.iter().map(|&x| x as usize).collect()
    }
}
