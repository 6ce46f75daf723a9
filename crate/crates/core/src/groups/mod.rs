//! Finite groups given by multiplication tables, with exact character
//! tables.

pub(crate) mod chartable;
pub mod cyclo;

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Deserialize;
use thiserror::Error;

use crate::coxeter::GroupTable;

pub use chartable::{
    character_table, character_table_with_limit, restrict_mult, unit_mult, CharacterTable, DEFAULT_ORDER_LIMIT,
};
pub use cyclo::Cyclo;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("invalid permutation generators: {0}")]
    InvalidPermutation(String),
    #[error("unknown group name `{0}`")]
    UnknownName(String),
    #[error("group order {order} exceeds the limit {limit}")]
    LimitExceeded { order: usize, limit: usize },
    #[error("character table computation failed: {0}")]
    CharacterTable(String),
    #[error("{0} is not a subgroup")]
    NotSubgroup(String),
    #[error("restriction multiplicity {0} is not a nonnegative integer")]
    NonIntegralMultiplicity(String),
    #[error("bad group input: {0}")]
    Input(String),
    #[error("group of order {0} is not finite or not fully enumerated")]
    NotFinite(usize),
}

/// A conjugacy class: representative and members, in increasing id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Class {
    pub rep: usize,
    pub elements: Vec<usize>,
}

impl Class {
    pub fn size(&self) -> usize {
        self.elements.len()
    }
}

/// Group on `0..order` with `0` the identity.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    mult: Vec<u32>,
    inv: Vec<u32>,
    elem_order: Vec<u32>,
    classes: Vec<Class>,
    class_of: Vec<usize>,
    perms: Option<Vec<Vec<usize>>>,
}

impl FiniteGroup {
    /// Validates identity, inverses and associativity (Light's test on a
    /// generating set).
    pub fn from_table(name: &str, table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::InvalidTable("empty".into()));
        }
        let mut mult = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::InvalidTable(format!("row {i} has length {}", row.len())));
            }
            for &v in row {
                if v >= n {
                    return Err(GroupError::InvalidTable(format!("entry {v} out of range")));
                }
                mult.push(v as u32);
            }
        }
        for i in 0..n {
            if mult[i] as usize != i || mult[i * n] as usize != i {
                return Err(GroupError::InvalidTable("0 is not the identity".into()));
            }
        }
        let mut inv = vec![u32::MAX; n];
        for i in 0..n {
            let row = &mult[i * n..(i + 1) * n];
            let mut seen = vec![false; n];
            for &v in row {
                if std::mem::replace(&mut seen[v as usize], true) {
                    return Err(GroupError::InvalidTable(format!("row {i} is not a permutation")));
                }
            }
            let j = row.iter().position(|&v| v == 0).unwrap();
            if mult[j * n + i] != 0 {
                return Err(GroupError::InvalidTable(format!("{i} has no two-sided inverse")));
            }
            inv[i] = j as u32;
        }
        let g = Self::assemble(name, n, mult, inv, None);
        g.check_associative()?;
        Ok(g)
    }

    fn assemble(
        name: &str,
        n: usize,
        mult: Vec<u32>,
        inv: Vec<u32>,
        perms: Option<Vec<Vec<usize>>>,
    ) -> Self {
        let mut g = Self {
            name: name.to_string(),
            order: n,
            mult,
            inv,
            elem_order: Vec::new(),
            classes: Vec::new(),
            class_of: Vec::new(),
            perms,
        };
        g.elem_order = (0..n)
            .map(|x| {
                let (mut y, mut k) = (x, 1);
                while y != 0 {
                    y = g.mul(y, x);
                    k += 1;
                }
                k
            })
            .collect();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let mut elements: Vec<usize> = (0..n).map(|h| g.conj(h, x)).collect();
            elements.sort_unstable();
            elements.dedup();
            for &y in &elements {
                class_of[y] = classes.len();
            }
            classes.push(Class { rep: x, elements });
        }
        g.classes = classes;
        g.class_of = class_of;
        g
    }

    fn check_associative(&self) -> Result<(), GroupError> {
        for &a in &self.generating_set() {
            for x in 0..self.order {
                let xa = self.mul(x, a);
                for y in 0..self.order {
                    if self.mul(xa, y) != self.mul(x, self.mul(a, y)) {
                        return Err(GroupError::InvalidTable(format!(
                            "not associative at ({x}, {a}, {y})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// A generating set, greedily chosen in id order.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut inside = vec![false; self.order];
        inside[0] = true;
        for x in 0..self.order {
            if inside[x] {
                continue;
            }
            gens.push(x);
            let mut queue: VecDeque<usize> = (0..self.order).filter(|&y| inside[y]).collect();
            while let Some(y) = queue.pop_front() {
                for &s in &gens {
                    let z = self.mul(y, s);
                    if !inside[z] {
                        inside[z] = true;
                        queue.push_back(z);
                    }
                }
            }
        }
        gens
    }

    /// Closure of permutations of `0..k`. Products compose right to left:
    /// `(pq)(i) = p(q(i))`.
    pub fn from_permutations(name: &str, gens: &[Vec<usize>]) -> Result<Self, GroupError> {
        let k = gens.first().map_or(0, Vec::len);
        for g in gens {
            let mut s = g.clone();
            s.sort_unstable();
            if g.len() != k || s != (0..k).collect::<Vec<_>>() {
                return Err(GroupError::InvalidPermutation(format!("{g:?}")));
            }
        }
        let id: Vec<usize> = (0..k).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let p: Vec<usize> = elems[i].iter().map(|&j| g[j]).collect();
                if !index.contains_key(&p) {
                    if elems.len() >= chartable::DEFAULT_ORDER_LIMIT {
                        return Err(GroupError::LimitExceeded {
                            order: elems.len() + 1,
                            limit: chartable::DEFAULT_ORDER_LIMIT,
                        });
                    }
                    index.insert(p.clone(), elems.len());
                    elems.push(p);
                }
            }
            i += 1;
        }
        let n = elems.len();
        let mut mult = vec![0u32; n * n];
        let mut inv = vec![0u32; n];
        for (a, p) in elems.iter().enumerate() {
            for (b, q) in elems.iter().enumerate() {
                let pq: Vec<usize> = q.iter().map(|&j| p[j]).collect();
                let c = index[&pq];
                mult[a * n + b] = c as u32;
                if c == 0 {
                    inv[a] = b as u32;
                }
            }
        }
        Ok(Self::assemble(name, n, mult, inv, Some(elems)))
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::from_table(&format!("C{n}"), table).expect("cyclic table")
    }

    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        let mut gens = Vec::new();
        if n >= 2 {
            let mut t: Vec<usize> = (0..n).collect();
            t.swap(0, 1);
            gens.push(t);
            gens.push((0..n).map(|i| (i + 1) % n).collect());
        } else {
            gens.push((0..n).collect());
        }
        Self::from_permutations(&format!("S{n}"), &gens)
    }

    /// Dihedral group of order `2m`.
    pub fn dihedral(m: usize) -> Result<Self, GroupError> {
        let rot: Vec<usize> = (0..m).map(|i| (i + 1) % m).collect();
        let refl: Vec<usize> = (0..m).map(|i| (m - i) % m).collect();
        Self::from_permutations(&format!("D{m}"), &[rot, refl])
    }

    /// Quaternion group `{+-1, +-i, +-j, +-k}`.
    pub fn quaternion() -> Self {
        // Element 2u + s is (-1)^s times unit u in (1, i, j, k).
        const UNIT: [[(usize, usize); 4]; 4] = [
            [(0, 0), (1, 0), (2, 0), (3, 0)],
            [(1, 0), (0, 1), (3, 0), (2, 1)],
            [(2, 0), (3, 1), (0, 1), (1, 0)],
            [(3, 0), (2, 0), (1, 1), (0, 1)],
        ];
        let table = (0..8)
            .map(|a| {
                (0..8)
                    .map(|b| {
                        let (u, s) = UNIT[a / 2][b / 2];
                        2 * u + (s + a % 2 + b % 2) % 2
                    })
                    .collect()
            })
            .collect();
        Self::from_table("Q8", table).expect("quaternion table")
    }

    pub fn direct_product(a: &Self, b: &Self) -> Self {
        let (n, m) = (a.order, b.order);
        let table = (0..n * m)
            .map(|x| {
                (0..n * m)
                    .map(|y| a.mul(x / m, y / m) * m + b.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        Self::from_table(&format!("{}x{}", a.name, b.name), table).expect("product table")
    }

    /// Names such as `S4`, `C2^3`, `S3xC2`, `Q8`, `D4` (dihedral of order 8).
    pub fn named(name: &str) -> Result<Self, GroupError> {
        let unknown = || GroupError::UnknownName(name.to_string());
        let mut parts = name.split('x').map(str::trim);
        let first = parts.next().ok_or_else(unknown)?;
        let mut g = Self::named_factor(first).ok_or_else(unknown)?;
        for p in parts {
            let h = Self::named_factor(p).ok_or_else(unknown)?;
            g = Self::direct_product(&g, &h);
        }
        g.name = name.to_string();
        Ok(g)
    }

    fn named_factor(s: &str) -> Option<Self> {
        if s == "Q8" {
            return Some(Self::quaternion());
        }
        let (base, pow) = match s.split_once('^') {
            Some((b, p)) => (b, p.parse::<u32>().ok()?),
            None => (s, 1),
        };
        let num = |t: &str| t.parse::<usize>().ok().filter(|&k| k >= 1);
        let g = match base.as_bytes().first()? {
            b'C' => Self::cyclic(num(&base[1..])?),
            b'S' => Self::symmetric(num(&base[1..])?).ok()?,
            b'D' => Self::dihedral(num(&base[1..])?).ok()?,
            _ => return None,
        };
        let mut out = g.clone();
        for _ in 1..pow {
            out = Self::direct_product(&out, &g);
        }
        out.name = s.to_string();
        Some(out)
    }

    /// JSON input: `{"table": [[..]]}` or `{"generators": [[..]]}`, with an
    /// optional `"name"`.
    pub fn from_json(text: &str) -> Result<Self, GroupError> {
        #[derive(Deserialize)]
        struct Input {
            name: Option<String>,
            table: Option<Vec<Vec<usize>>>,
            generators: Option<Vec<Vec<usize>>>,
        }
        let inp: Input = serde_json::from_str(text).map_err(|e| GroupError::Input(e.to_string()))?;
        let name = inp.name.unwrap_or_else(|| "G".into());
        match (inp.table, inp.generators) {
            (Some(t), None) => Self::from_table(&name, t),
            (None, Some(g)) => Self::from_permutations(&name, &g),
            _ => Err(GroupError::Input("give exactly one of `table` and `generators`".into())),
        }
    }

    /// A finite Coxeter group as an abstract group.
    pub fn from_coxeter(table: &GroupTable) -> Result<Self, GroupError> {
        if !table.is_complete() {
            return Err(GroupError::NotFinite(table.len()));
        }
        let n = table.len();
        let mut mult = Vec::with_capacity(n * n);
        for x in table.ids() {
            for y in table.ids() {
                mult.push(table.mul(x, y).expect("complete table").0);
            }
        }
        let inv = table.ids().map(|x| table.inverse(x).0).collect();
        Ok(Self::assemble(&format!("W({})", table.rank()), n, mult, inv, None))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mult[x * self.order + y] as usize
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inv[x] as usize
    }

    pub fn pow(&self, x: usize, k: u64) -> usize {
        let k = k % u64::from(self.elem_order[x]);
        (0..k).fold(0, |acc, _| self.mul(acc, x))
    }

    /// `h x h^-1`.
    pub fn conj(&self, h: usize, x: usize) -> usize {
        self.mul(self.mul(h, x), self.inv(h))
    }

    pub fn commute(&self, x: usize, y: usize) -> bool {
        self.mul(x, y) == self.mul(y, x)
    }

    pub fn elem_order(&self, x: usize) -> u32 {
        self.elem_order[x]
    }

    pub fn exponent(&self) -> u32 {
        use num_integer::Integer;
        self.elem_order.iter().fold(1, |a, &b| a.lcm(&b))
    }

    pub fn classes(&self) -> &[Class] {
        &self.classes
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn permutations(&self) -> Option<&[Vec<usize>]> {
        self.perms.as_deref()
    }

    pub fn centralizer(&self, x: usize) -> Vec<usize> {
        (0..self.order).filter(|&h| self.commute(h, x)).collect()
    }

    /// All `s` with `s^2 = x`.
    pub fn square_roots(&self, x: usize) -> Vec<usize> {
        (0..self.order).filter(|&s| self.mul(s, s) == x).collect()
    }

    /// Pairs of commuting elements.
    pub fn commuting_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.order)
            .flat_map(|g| (0..self.order).filter(move |&h| self.commute(g, h)).map(move |h| (g, h)))
            .collect()
    }

    /// The subgroup on `elements` as a group in its own right.
    pub fn subgroup(&self, elements: &[usize]) -> Result<Subgroup, GroupError> {
        let mut embed: Vec<usize> = elements.to_vec();
        embed.sort_unstable();
        embed.dedup();
        if embed.first() != Some(&0) {
            return Err(GroupError::NotSubgroup(format!("{elements:?}")));
        }
        let local: BTreeMap<usize, usize> = embed.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let n = embed.len();
        let mut mult = Vec::with_capacity(n * n);
        for &a in &embed {
            for &b in &embed {
                let c = local
                    .get(&self.mul(a, b))
                    .ok_or_else(|| GroupError::NotSubgroup(format!("{elements:?}")))?;
                mult.push(*c as u32);
            }
        }
        let inv = embed.iter().map(|&a| local[&self.inv(a)] as u32).collect();
        let group = Self::assemble(&format!("{}<{}>", self.name, n), n, mult, inv, None);
        Ok(Subgroup { group, embed })
    }
}

/// A subgroup with its embedding `local id -> parent id`.
#[derive(Debug, Clone)]
pub struct Subgroup {
    pub group: FiniteGroup,
    pub embed: Vec<usize>,
}

impl Subgroup {
    pub fn local(&self, parent: usize) -> Option<usize> {
        self.embed.binary_search(&parent).ok()
    }
}

/// Conjugacy classes and centralizer orders, in class order.
pub fn conjugacy_data(g: &FiniteGroup) -> Vec<(Class, Vec<usize>)> {
    g.classes()
        .iter()
        .map(|c| (c.clone(), g.centralizer(c.rep)))
        .collect()
}

#[cfg(test)]
mod tests;
