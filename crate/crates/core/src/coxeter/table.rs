use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{CoxeterError, CoxeterSystem};

/// Index of an element in a [`GroupTable`]. Ids are assigned in
/// (length, shortlex) order, so the identity is always `ElemId(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ElemId(pub u32);

impl ElemId {
    pub const IDENTITY: ElemId = ElemId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub id: ElemId,
    pub length: usize,
    pub word: Vec<u8>,
}

#[derive(Debug, Clone, Copy)]
pub struct EnumLimits {
    pub max_elements: usize,
}

impl Default for EnumLimits {
    fn default() -> Self {
        Self {
            max_elements: 2_000_000,
        }
    }
}

/// Range of ids sharing one length.
pub type Layer = std::ops::Range<usize>;

const NONE: u32 = u32::MAX;

/// Right-multiplication state of one irreducible component.
enum Component {
    /// Columns `w(alpha_j)` in the root lattice of a generalized Cartan matrix.
    Cartan {
        gens: Vec<usize>,
        cartan: Vec<i64>,
        offset: usize,
    },
    /// Non-crystallographic dihedral group: `(first letter + 1, length)`,
    /// with the longest element stored as `(0, m)`.
    Dihedral { m: i64, offset: usize },
}

struct Realization {
    comps: Vec<Component>,
    /// generator -> (component, local index)
    locate: Vec<(usize, usize)>,
    size: usize,
}

impl Realization {
    fn new(sys: &CoxeterSystem) -> Result<Self, CoxeterError> {
        let mat = sys.matrix();
        let mut comps = Vec::new();
        let mut locate = vec![(0, 0); mat.rank()];
        let mut offset = 0;
        for gens in mat.components() {
            let k = gens.len();
            for (local, &g) in gens.iter().enumerate() {
                locate[g] = (comps.len(), local);
            }
            let crystallographic = gens.iter().all(|&i| {
                gens.iter()
                    .all(|&j| matches!(mat.get(i, j), None | Some(1 | 2 | 3 | 4 | 6)))
            });
            if crystallographic {
                let mut cartan = vec![0i64; k * k];
                for a in 0..k {
                    for b in 0..k {
                        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                        let on_low_side = a == lo;
                        cartan[a * k + b] = match mat.get(gens[lo], gens[hi]) {
                            _ if a == b => 2,
                            Some(2) => 0,
                            Some(3) => -1,
                            Some(4) => {
                                if on_low_side {
                                    -1
                                } else {
                                    -2
                                }
                            }
                            Some(6) => {
                                if on_low_side {
                                    -1
                                } else {
                                    -3
                                }
                            }
                            None => -2,
                            Some(_) => unreachable!(),
                        };
                    }
                }
                comps.push(Component::Cartan {
                    gens,
                    cartan,
                    offset,
                });
                offset += k * k;
            } else if k == 2 {
                let m = mat.get(gens[0], gens[1]).expect("infinite orders are crystallographic");
                comps.push(Component::Dihedral {
                    m: m as i64,
                    offset,
                });
                offset += 2;
            } else {
                return Err(CoxeterError::Unsupported(sys.name().to_string()));
            }
        }
        Ok(Self {
            comps,
            locate,
            size: offset,
        })
    }

    fn identity(&self) -> Vec<i64> {
        let mut s = vec![0i64; self.size];
        for c in &self.comps {
            if let Component::Cartan { gens, offset, .. } = c {
                let k = gens.len();
                for j in 0..k {
                    s[offset + j * k + j] = 1;
                }
            }
        }
        s
    }

    fn has_right_descent(&self, state: &[i64], g: usize) -> bool {
        let (ci, i) = self.locate[g];
        match &self.comps[ci] {
            Component::Cartan { gens, offset, .. } => {
                let k = gens.len();
                let col = &state[offset + i * k..offset + (i + 1) * k];
                col.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0)
            }
            Component::Dihedral { m, offset, .. } => {
                let (first, len) = (state[*offset], state[offset + 1]);
                if len == *m {
                    return true;
                }
                if len == 0 {
                    return false;
                }
                // Alternating word starting at `first - 1`; its last letter.
                let last = if len % 2 == 1 { first - 1 } else { 2 - first };
                last == i as i64
            }
        }
    }

    fn right_mul(&self, state: &[i64], g: usize) -> Vec<i64> {
        let mut s = state.to_vec();
        let (ci, i) = self.locate[g];
        match &self.comps[ci] {
            Component::Cartan {
                gens,
                cartan,
                offset,
            } => {
                let k = gens.len();
                let col_i: Vec<i64> = state[offset + i * k..offset + (i + 1) * k].to_vec();
                for j in 0..k {
                    let a = cartan[i * k + j];
                    if a != 0 {
                        for r in 0..k {
                            s[offset + j * k + r] -= a * col_i[r];
                        }
                    }
                }
            }
            Component::Dihedral { m, offset, .. } => {
                let (first, len) = (state[*offset], state[offset + 1]);
                let descent = self.has_right_descent(state, g);
                let (nf, nl) = if len == 0 {
                    (i as i64 + 1, 1)
                } else if len == *m {
                    // Drop the last letter of the word for w0 that ends in s_i.
                    let start_if_ends_i = if m % 2 == 1 { i as i64 } else { 1 - i as i64 };
                    (start_if_ends_i + 1, m - 1)
                } else if descent {
                    if len == 1 {
                        (0, 0)
                    } else {
                        (first, len - 1)
                    }
                } else if len + 1 == *m {
                    (0, *m)
                } else {
                    (first, len + 1)
                };
                s[*offset] = nf;
                s[offset + 1] = nl;
            }
        }
        s
    }
}

/// Elements of `W` (or of a length ball in `W`) with multiplication tables.
#[derive(Debug, Clone)]
pub struct GroupTable {
    rank: usize,
    bound: Option<usize>,
    words: Vec<Vec<u8>>,
    lengths: Vec<u32>,
    layers: Vec<usize>,
    right: Vec<u32>,
    left: Vec<u32>,
    inverse: Vec<u32>,
    star: Vec<u32>,
    star_gens: Vec<usize>,
    right_desc: Vec<u64>,
    left_desc: Vec<u64>,
    lookup: HashMap<Vec<u8>, u32>,
}

impl GroupTable {
    pub(super) fn enumerate(
        sys: &CoxeterSystem,
        bound: Option<usize>,
        limits: EnumLimits,
    ) -> Result<Self, CoxeterError> {
        let rank = sys.rank();
        assert!(rank <= 64, "rank above 64 is not supported");
        let real = Realization::new(sys)?;
        let mut index: HashMap<Vec<i64>, u32> = HashMap::new();
        let mut states: Vec<Vec<i64>> = vec![real.identity()];
        let mut words: Vec<Vec<u8>> = vec![Vec::new()];
        let mut right: Vec<u32> = Vec::new();
        let mut right_desc: Vec<u64> = Vec::new();
        let mut layers = vec![0usize, 1];
        index.insert(states[0].clone(), 0);

        let mut cur = 0usize;
        while cur < states.len() {
            let len = words[cur].len();
            if cur == layers[layers.len() - 1] {
                layers.push(states.len());
            }
            let mut mask = 0u64;
            for g in 0..rank {
                let next = real.right_mul(&states[cur], g);
                let id = if real.has_right_descent(&states[cur], g) {
                    mask |= 1 << g;
                    *index.get(&next).expect("shorter element already enumerated")
                } else if bound.is_some_and(|b| len >= b) {
                    NONE
                } else if let Some(&id) = index.get(&next) {
                    id
                } else {
                    let id = states.len();
                    if id >= limits.max_elements {
                        return Err(CoxeterError::LimitExceeded(limits.max_elements));
                    }
                    let mut w = words[cur].clone();
                    w.push(g as u8);
                    index.insert(next.clone(), id as u32);
                    states.push(next);
                    words.push(w);
                    id as u32
                };
                right.push(id);
            }
            right_desc.push(mask);
            cur += 1;
        }
        // The loop pushes one boundary too many once the last layer closes.
        while layers.len() >= 2 && layers[layers.len() - 1] == layers[layers.len() - 2] {
            layers.pop();
        }
        drop(index);
        drop(states);

        let n = words.len();
        let lengths: Vec<u32> = words.iter().map(|w| w.len() as u32).collect();
        let eval = |word: &mut dyn Iterator<Item = usize>| -> u32 {
            let mut x = 0u32;
            for g in word {
                x = right[x as usize * rank + g];
                debug_assert_ne!(x, NONE);
            }
            x
        };
        let inverse: Vec<u32> = words
            .iter()
            .map(|w| eval(&mut w.iter().rev().map(|&g| g as usize)))
            .collect();
        let star: Vec<u32> = words
            .iter()
            .map(|w| eval(&mut w.iter().map(|&g| sys.star().apply(g as usize))))
            .collect();
        let mut left = vec![NONE; n * rank];
        let mut left_desc = vec![0u64; n];
        for x in 0..n {
            let xi = inverse[x] as usize;
            left_desc[x] = right_desc[xi];
            for g in 0..rank {
                let y = right[xi * rank + g];
                if y != NONE {
                    left[x * rank + g] = inverse[y as usize];
                }
            }
        }
        let lookup = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as u32))
            .collect();
        Ok(Self {
            rank,
            bound,
            words,
            lengths,
            layers,
            right,
            left,
            inverse,
            star,
            star_gens: sys.star().as_slice().to_vec(),
            right_desc,
            left_desc,
            lookup,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// `None` for a full enumeration.
    pub fn bound(&self) -> Option<usize> {
        self.bound
    }

    /// True when the table is closed under multiplication.
    pub fn is_complete(&self) -> bool {
        self.right.iter().all(|&x| x != NONE)
    }

    pub fn identity(&self) -> ElemId {
        ElemId::IDENTITY
    }

    pub fn ids(&self) -> impl DoubleEndedIterator<Item = ElemId> + ExactSizeIterator {
        (0..self.len() as u32).map(ElemId)
    }

    /// Ids of length `k`.
    pub fn layer(&self, k: usize) -> Layer {
        if k + 1 < self.layers.len() {
            self.layers[k]..self.layers[k + 1]
        } else {
            self.len()..self.len()
        }
    }

    pub fn max_length(&self) -> usize {
        self.layers.len().saturating_sub(2)
    }

    pub fn length(&self, x: ElemId) -> usize {
        self.lengths[x.index()] as usize
    }

    /// Shortlex-least reduced word, as 0-based generator indices.
    pub fn word(&self, x: ElemId) -> &[u8] {
        &self.words[x.index()]
    }

    pub fn element(&self, x: ElemId) -> Element {
        Element {
            id: x,
            length: self.length(x),
            word: self.word(x).to_vec(),
        }
    }

    pub fn format(&self, x: ElemId) -> String {
        format_word(self.word(x), self.rank)
    }

    pub fn generator(&self, g: usize) -> ElemId {
        ElemId(self.right[g])
    }

    /// `x s_g`, or `None` if it leaves the ball.
    pub fn right_mul(&self, x: ElemId, g: usize) -> Option<ElemId> {
        let y = self.right[x.index() * self.rank + g];
        (y != NONE).then_some(ElemId(y))
    }

    /// `s_g x`, or `None` if it leaves the ball.
    pub fn left_mul(&self, g: usize, x: ElemId) -> Option<ElemId> {
        let y = self.left[x.index() * self.rank + g];
        (y != NONE).then_some(ElemId(y))
    }

    pub fn inverse(&self, x: ElemId) -> ElemId {
        ElemId(self.inverse[x.index()])
    }

    pub fn star(&self, x: ElemId) -> ElemId {
        ElemId(self.star[x.index()])
    }

    /// Image of generator `g` under the star.
    pub fn star_gen(&self, g: usize) -> usize {
        self.star_gens[g]
    }

    /// `l(x s_g) < l(x)`.
    pub fn has_right_descent(&self, x: ElemId, g: usize) -> bool {
        self.right_desc[x.index()] >> g & 1 == 1
    }

    /// `l(s_g x) < l(x)`.
    pub fn has_left_descent(&self, g: usize, x: ElemId) -> bool {
        self.left_desc[x.index()] >> g & 1 == 1
    }

    pub fn right_descents(&self, x: ElemId) -> u64 {
        self.right_desc[x.index()]
    }

    pub fn left_descents(&self, x: ElemId) -> u64 {
        self.left_desc[x.index()]
    }

    /// Product of the generators in `word`, if it stays inside the ball.
    pub fn eval_word(&self, word: &[u8]) -> Option<ElemId> {
        word.iter()
            .try_fold(self.identity(), |x, &g| self.right_mul(x, g as usize))
    }

    /// Looks up an element by its shortlex-least reduced word.
    pub fn by_word(&self, word: &[u8]) -> Option<ElemId> {
        self.lookup.get(word).map(|&i| ElemId(i))
    }

    /// `x y`, if it lies in the table.
    pub fn mul(&self, x: ElemId, y: ElemId) -> Option<ElemId> {
        self.word(y)
            .iter()
            .try_fold(x, |acc, &g| self.right_mul(acc, g as usize))
    }

    /// The longest element of a complete finite table.
    pub fn longest(&self) -> Option<ElemId> {
        if !self.is_complete() {
            return None;
        }
        Some(ElemId(self.len() as u32 - 1))
    }

    /// `{ w : w* = w^-1 }` in id order.
    pub fn twisted_involutions(&self) -> Vec<ElemId> {
        self.ids()
            .filter(|&x| self.star(x) == self.inverse(x))
            .collect()
    }
}

/// Renders a word with 1-based letters: `121`, or `1.10.2` when the rank
/// needs more than one digit. The empty word is `e`.
pub fn format_word(word: &[u8], rank: usize) -> String {
    if word.is_empty() {
        return "e".to_string();
    }
    let letters = word.iter().map(|&g| (g as usize + 1).to_string());
    if rank >= 10 {
        letters.collect::<Vec<_>>().join(".")
    } else {
        letters.collect()
    }
}

/// Inverse of [`format_word`].
pub fn parse_word(s: &str, rank: usize) -> Option<Vec<u8>> {
    let s = s.trim();
    if s == "e" || s.is_empty() {
        return Some(Vec::new());
    }
    let parts: Vec<&str> = if s.contains('.') || rank >= 10 {
        s.split('.').collect()
    } else {
        s.split("").filter(|t| !t.is_empty()).collect()
    };
    parts
        .into_iter()
        .map(|t| {
            let v: usize = t.parse().ok()?;
            (1..=rank).contains(&v).then(|| (v - 1) as u8)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(t: &str, bound: Option<usize>) -> GroupTable {
        CoxeterSystem::from_type(t).unwrap().enumerate(bound).unwrap()
    }

    #[test]
    fn orders() {
        for (t, n) in [
            ("A1", 2),
            ("A2", 6),
            ("B2", 8),
            ("G2", 12),
            ("A3", 24),
            ("B3", 48),
            ("D4", 192),
            ("F4", 1152),
            ("I2(5)", 10),
            ("I2(7)", 14),
            ("A2xA1", 12),
            ("E6", 51840),
        ] {
            let tb = table(t, None);
            assert_eq!(tb.len(), n, "{t}");
            assert!(tb.is_complete());
        }
    }

    #[test]
    fn affine_ball_sizes() {
        // A1~: one element of length 0, two of each positive length.
        assert_eq!(table("A1~", Some(5)).len(), 11);
        // A2~: 1 + 3 + 6 + 12 + ... (3k elements of length k).
        let t = table("A2~", Some(4));
        let counts: Vec<usize> = (0..=4).map(|k| t.layer(k).len()).collect();
        assert_eq!(counts, vec![1, 3, 6, 9, 12]);
    }

    #[test]
    fn shortlex_words_and_longest() {
        let t = table("A2", None);
        let words: Vec<String> = t.ids().map(|x| t.format(x)).collect();
        assert_eq!(words, vec!["e", "1", "2", "12", "21", "121"]);
        let w0 = t.longest().unwrap();
        assert_eq!(t.format(w0), "121");
        assert_eq!(t.inverse(t.by_word(&[0, 1]).unwrap()), t.by_word(&[1, 0]).unwrap());
        let g2 = table("G2", None);
        assert_eq!(g2.length(g2.longest().unwrap()), 6);
        let i5 = table("I2(5)", None);
        assert_eq!(i5.format(i5.longest().unwrap()), "12121");
        // s1 s2 s1 s2 s1 = s2 s1 s2 s1 s2 in I2(5).
        assert_eq!(i5.eval_word(&[1, 0, 1, 0, 1]), i5.longest());
    }

    #[test]
    fn braid_relations_hold() {
        for t in ["B2", "G2", "I2(5)", "A3", "B3"] {
            let tb = table(t, None);
            let sys = CoxeterSystem::from_type(t).unwrap();
            for i in 0..tb.rank() {
                for j in 0..tb.rank() {
                    let m = sys.matrix().get(i, j).unwrap() as usize;
                    let word: Vec<u8> = (0..2 * m)
                        .map(|k| if k % 2 == 0 { i as u8 } else { j as u8 })
                        .collect();
                    assert_eq!(tb.eval_word(&word), Some(tb.identity()), "{t} {i} {j}");
                }
            }
        }
    }

    #[test]
    fn twisted_involutions_a2() {
        let t = table("A2", None);
        let names: Vec<String> = t
            .twisted_involutions()
            .into_iter()
            .map(|x| t.format(x))
            .collect();
        assert_eq!(names, vec!["e", "1", "2", "121"]);
        let swapped = CoxeterSystem::from_type("A2")
            .unwrap()
            .with_star(vec![1, 0])
            .unwrap()
            .enumerate(None)
            .unwrap();
        let names: Vec<String> = swapped
            .twisted_involutions()
            .into_iter()
            .map(|x| swapped.format(x))
            .collect();
        assert_eq!(names, vec!["e", "12", "21", "121"]);
    }

    #[test]
    fn left_and_right_descents_agree() {
        let t = table("B3", None);
        for x in t.ids() {
            for g in 0..3 {
                let r = t.right_mul(x, g).unwrap();
                assert_eq!(t.has_right_descent(x, g), t.length(r) < t.length(x));
                let l = t.left_mul(g, x).unwrap();
                assert_eq!(t.has_left_descent(g, x), t.length(l) < t.length(x));
                assert_eq!(t.mul(t.generator(g), x), Some(l));
            }
        }
    }

    #[test]
    fn ball_edges_are_none() {
        let t = table("A1~", Some(3));
        let top = ElemId(t.len() as u32 - 1);
        assert_eq!(t.length(top), 3);
        let asc = (0..2).find(|&g| !t.has_right_descent(top, g)).unwrap();
        assert_eq!(t.right_mul(top, asc), None);
        assert!(!t.is_complete());
        assert_eq!(t.longest(), None);
    }

    #[test]
    fn word_format_roundtrip() {
        assert_eq!(format_word(&[], 3), "e");
        assert_eq!(format_word(&[0, 1, 0], 2), "121");
        assert_eq!(format_word(&[0, 10], 11), "1.11");
        assert_eq!(parse_word("121", 2), Some(vec![0, 1, 0]));
        assert_eq!(parse_word("1.11", 11), Some(vec![0, 10]));
        assert_eq!(parse_word("3", 2), None);
    }
}
