//! Finite posets (at most 64 elements), linear extensions, order ideals, the
//! order polynomial, and the staircase, chain, antichain and zigzag families.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Element = usize;
/// A set of elements as a bitmask over element indices.
pub type Mask = u64;

pub const MAX_ELEMENTS: usize = 64;

fn bit(x: Element) -> Mask {
    1u64 << x
}

fn members(mask: Mask) -> impl Iterator<Item = Element> {
    (0..MAX_ELEMENTS).filter(move |&x| mask & bit(x) != 0)
}

/// Left-to-right orders of the covers at every element of a drawn Hasse diagram,
/// plus the left-to-right orders of the minimal and maximal elements (the
/// covers of the added bottom and top).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub up: Vec<Vec<Element>>,
    pub down: Vec<Vec<Element>>,
    pub bottom: Vec<Element>,
    pub top: Vec<Element>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    covers: Vec<(Element, Element)>,
    upper: Vec<Vec<Element>>,
    lower: Vec<Vec<Element>>,
    /// `strictly_below[x]`: elements `< x`.
    strictly_below: Vec<Mask>,
    embedding: Option<Embedding>,
}

impl Poset {
    /// Builds a poset from its cover relation, rejecting cycles, duplicates and
    /// covers implied by transitivity.
    pub fn new(labels: Vec<String>, covers: Vec<(Element, Element)>) -> Result<Self> {
        let n = labels.len();
        if n > MAX_ELEMENTS {
            return Err(Error::input(format!("posets are limited to {MAX_ELEMENTS} elements")));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::input(format!("duplicate element label {l:?}")));
            }
        }
        let mut cover_set = std::collections::HashSet::new();
        for &(a, b) in &covers {
            if a >= n || b >= n {
                return Err(Error::input(format!("cover ({a},{b}) out of range")));
            }
            if a == b {
                return Err(Error::input(format!("cover ({a},{a}) is a loop")));
            }
            if !cover_set.insert((a, b)) {
                return Err(Error::input(format!("cover ({}, {}) listed twice", labels[a], labels[b])));
            }
        }
        let below = transitive_below(n, &covers).ok_or_else(|| Error::input("cover relation has a cycle"))?;
        for &(a, b) in &covers {
            // a <. b is redundant if some c with a < c < b exists
            let between = below[b] & !bit(a);
            if members(between).any(|c| below[c] & bit(a) != 0) {
                return Err(Error::input(format!("cover ({}, {}) is implied by transitivity", labels[a], labels[b])));
            }
        }
        let mut upper = vec![Vec::new(); n];
        let mut lower = vec![Vec::new(); n];
        for &(a, b) in &covers {
            upper[a].push(b);
            lower[b].push(a);
        }
        for v in upper.iter_mut().chain(lower.iter_mut()) {
            v.sort_unstable();
        }
        Ok(Poset { labels, covers, upper, lower, strictly_below: below, embedding: None })
    }

    /// Builds a poset from any generating set of relations `a < b`.
    pub fn from_relations(labels: Vec<String>, relations: &[(Element, Element)]) -> Result<Self> {
        let n = labels.len();
        if n > MAX_ELEMENTS {
            return Err(Error::input(format!("posets are limited to {MAX_ELEMENTS} elements")));
        }
        if let Some(&(a, b)) = relations.iter().find(|&&(a, b)| a >= n || b >= n || a == b) {
            return Err(Error::input(format!("relation ({a},{b}) is out of range or reflexive")));
        }
        let below = transitive_below(n, relations).ok_or_else(|| Error::input("relations contain a cycle"))?;
        let mut covers = Vec::new();
        for b in 0..n {
            for a in members(below[b]) {
                let between = below[b] & !bit(a);
                if !members(between).any(|c| below[c] & bit(a) != 0) {
                    covers.push((a, b));
                }
            }
        }
        covers.sort_unstable();
        Poset::new(labels, covers)
    }

    /// Attaches a drawing after checking that every order lists exactly the
    /// relevant covers.
    pub fn with_embedding(mut self, emb: Embedding) -> Result<Self> {
        let n = self.len();
        if emb.up.len() != n || emb.down.len() != n {
            return Err(Error::input("embedding must give orders for every element"));
        }
        for x in 0..n {
            check_same_set(&emb.up[x], &self.upper[x], || format!("upper covers of {}", self.labels[x]))?;
            check_same_set(&emb.down[x], &self.lower[x], || format!("lower covers of {}", self.labels[x]))?;
        }
        check_same_set(&emb.bottom, &self.minimal_elements(), || "minimal elements".into())?;
        check_same_set(&emb.top, &self.maximal_elements(), || "maximal elements".into())?;
        self.embedding = Some(emb);
        Ok(self)
    }

    /// The drawing with every order sorted by element index.
    pub fn index_embedding(&self) -> Embedding {
        Embedding {
            up: self.upper.clone(),
            down: self.lower.clone(),
            bottom: self.minimal_elements(),
            top: self.maximal_elements(),
        }
    }

    pub fn embedding(&self) -> Option<&Embedding> {
        self.embedding.as_ref()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: Element) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<Element> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn covers(&self) -> &[(Element, Element)] {
        &self.covers
    }

    pub fn upper_covers(&self, x: Element) -> &[Element] {
        &self.upper[x]
    }

    pub fn lower_covers(&self, x: Element) -> &[Element] {
        &self.lower[x]
    }

    pub fn less(&self, x: Element, y: Element) -> bool {
        self.strictly_below[y] & bit(x) != 0
    }

    pub fn leq(&self, x: Element, y: Element) -> bool {
        x == y || self.less(x, y)
    }

    pub fn minimal_elements(&self) -> Vec<Element> {
        (0..self.len()).filter(|&x| self.lower[x].is_empty()).collect()
    }

    pub fn maximal_elements(&self) -> Vec<Element> {
        (0..self.len()).filter(|&x| self.upper[x].is_empty()).collect()
    }

    pub fn full_mask(&self) -> Mask {
        if self.len() == MAX_ELEMENTS {
            u64::MAX
        } else {
            bit(self.len()) - 1
        }
    }

    pub fn is_order_ideal(&self, mask: Mask) -> bool {
        members(mask).all(|x| self.strictly_below[x] & !mask == 0)
    }

    pub fn is_linear_extension(&self, ext: &[Element]) -> bool {
        if ext.len() != self.len() {
            return false;
        }
        let mut placed: Mask = 0;
        for &x in ext {
            if x >= self.len() || placed & bit(x) != 0 || self.strictly_below[x] & !placed != 0 {
                return false;
            }
            placed |= bit(x);
        }
        true
    }

    /// True iff `x < y` implies `values[x] <= values[y]`.
    pub fn is_order_preserving<T: PartialOrd>(&self, values: &[T]) -> bool {
        values.len() == self.len() && self.covers.iter().all(|&(a, b)| values[a] <= values[b])
    }

    /// Same poset under new labels.
    pub fn relabeled(&self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::input("relabeling must keep the element count"));
        }
        let mut p = Poset::new(labels, self.covers.clone())?;
        p.embedding = self.embedding.clone();
        Ok(p)
    }
}

fn check_same_set(order: &[Element], expected: &[Element], what: impl Fn() -> String) -> Result<()> {
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    let mut exp = expected.to_vec();
    exp.sort_unstable();
    if sorted != exp {
        return Err(Error::input(format!("embedding order for {} must list exactly {exp:?}", what())));
    }
    Ok(())
}

/// Strict down-sets of the transitive closure, or `None` on a cycle.
fn transitive_below(n: usize, relations: &[(Element, Element)]) -> Option<Vec<Mask>> {
    let mut below = vec![0u64; n];
    for &(a, b) in relations {
        below[b] |= bit(a);
    }
    // Warshall on bitmasks
    for k in 0..n {
        for x in 0..n {
            if below[x] & bit(k) != 0 {
                below[x] |= below[k];
            }
        }
    }
    (0..n).all(|x| below[x] & bit(x) == 0).then_some(below)
}

/// All linear extensions, lexicographic in element index.
pub fn linear_extensions(p: &Poset) -> Vec<Vec<Element>> {
    fn rec(p: &Poset, placed: Mask, cur: &mut Vec<Element>, out: &mut Vec<Vec<Element>>) {
        if cur.len() == p.len() {
            out.push(cur.clone());
            return;
        }
        for x in 0..p.len() {
            if placed & bit(x) == 0 && p.strictly_below[x] & !placed == 0 {
                cur.push(x);
                rec(p, placed | bit(x), cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(p, 0, &mut Vec::new(), &mut out);
    out
}

/// `e(P)` by counting maximal chains in the lattice of order ideals.
pub fn count_linear_extensions(p: &Poset) -> BigUint {
    fn rec(p: &Poset, ideal: Mask, memo: &mut HashMap<Mask, BigUint>) -> BigUint {
        if ideal == p.full_mask() {
            return BigUint::one();
        }
        if let Some(v) = memo.get(&ideal) {
            return v.clone();
        }
        let mut total = BigUint::zero();
        for x in 0..p.len() {
            if ideal & bit(x) == 0 && p.strictly_below[x] & !ideal == 0 {
                total += rec(p, ideal | bit(x), memo);
            }
        }
        memo.insert(ideal, total.clone());
        total
    }
    rec(p, 0, &mut HashMap::new())
}

/// All order ideals as bitmasks, ascending.
pub fn order_ideal_masks(p: &Poset) -> Vec<Mask> {
    // Decide elements in a linear extension order so that every lower element
    // has been decided first.
    let order = first_linear_extension(p);
    fn rec(p: &Poset, order: &[Element], k: usize, ideal: Mask, out: &mut Vec<Mask>) {
        if k == order.len() {
            out.push(ideal);
            return;
        }
        let x = order[k];
        rec(p, order, k + 1, ideal, out);
        if p.strictly_below[x] & !ideal == 0 {
            rec(p, order, k + 1, ideal | bit(x), out);
        }
    }
    let mut out = Vec::new();
    rec(p, &order, 0, 0, &mut out);
    out.sort_unstable();
    out
}

/// All order ideals as sorted element lists, lexicographic.
pub fn order_ideals(p: &Poset) -> Vec<Vec<Element>> {
    let mut v: Vec<Vec<Element>> = order_ideal_masks(p).into_iter().map(|m| members(m).collect()).collect();
    v.sort();
    v
}

pub fn mask_elements(mask: Mask) -> Vec<Element> {
    members(mask).collect()
}

pub fn first_linear_extension(p: &Poset) -> Vec<Element> {
    let mut placed: Mask = 0;
    let mut out = Vec::with_capacity(p.len());
    while out.len() < p.len() {
        let x = (0..p.len())
            .find(|&x| placed & bit(x) == 0 && p.strictly_below[x] & !placed == 0)
            .expect("acyclic poset has a minimal element");
        placed |= bit(x);
        out.push(x);
    }
    out
}

/// `Ω(P, m)`: order-preserving maps `P -> {1..m}`, counted as multichains of
/// `m - 1` nested order ideals.
pub fn order_polynomial(p: &Poset, m: u64) -> BigUint {
    if m == 0 {
        return if p.is_empty() { BigUint::one() } else { BigUint::zero() };
    }
    let ideals = order_ideal_masks(p);
    // chains[k] = number of multichains I_1 ⊆ ... ⊆ I_{step} ⊆ ideals[k]
    let mut chains = vec![BigUint::one(); ideals.len()];
    for _ in 1..m {
        chains = ideals
            .iter()
            .map(|&i| ideals.iter().zip(&chains).filter(|(&j, _)| j & !i == 0).map(|(_, c)| c.clone()).sum())
            .collect();
    }
    let top = ideals.iter().position(|&i| i == p.full_mask()).expect("whole poset is an ideal");
    chains[top].clone()
}

/// `Ω(P, m)` by trying all `m^|P|` maps; for cross-checks on small posets.
pub fn order_polynomial_brute_force(p: &Poset, m: u64) -> BigUint {
    if m == 0 {
        return if p.is_empty() { BigUint::one() } else { BigUint::zero() };
    }
    let n = p.len();
    let mut values = vec![1u64; n];
    let mut count = BigUint::zero();
    loop {
        if p.is_order_preserving(&values) {
            count += 1u32;
        }
        let mut k = 0;
        loop {
            if k == n {
                return count;
            }
            values[k] += 1;
            if values[k] <= m {
                break;
            }
            values[k] = 1;
            k += 1;
        }
    }
}

/// `binom(n,2)! / (1^{n-1} 3^{n-2} ... (2n-3)^1)`, the number of standard
/// Young tableaux of the staircase shape `(n-1, ..., 1)`.
pub fn staircase_syt_count(n: usize) -> BigUint {
    let cells = n * n.saturating_sub(1) / 2;
    let numerator: BigUint = (1..=cells as u64).map(BigUint::from).product();
    let mut denominator = BigUint::one();
    for k in 1..n {
        for _ in 0..(n - k) {
            denominator *= BigUint::from(2 * k as u64 - 1);
        }
    }
    assert!((&numerator % &denominator).is_zero(), "hook product divides the factorial");
    numerator / denominator
}

pub fn chain(k: usize) -> Poset {
    let labels = (1..=k).map(|i| format!("c{i}")).collect();
    let covers = (1..k).map(|i| (i - 1, i)).collect();
    with_index_embedding(Poset::new(labels, covers).expect("chain is a poset"))
}

pub fn antichain(k: usize) -> Poset {
    let labels = (1..=k).map(|i| format!("a{i}")).collect();
    with_index_embedding(Poset::new(labels, Vec::new()).expect("antichain is a poset"))
}

/// The fence `z1 < z2 > z3 < z4 > ...` with `k` elements.
pub fn zigzag(k: usize) -> Poset {
    let labels = (1..=k).map(|i| format!("z{i}")).collect();
    let covers = (1..k).map(|i| if i % 2 == 1 { (i - 1, i) } else { (i, i - 1) }).collect();
    with_index_embedding(Poset::new(labels, covers).expect("zigzag is a poset"))
}

fn with_index_embedding(p: Poset) -> Poset {
    let emb = p.index_embedding();
    p.with_embedding(emb).expect("index embedding is consistent")
}

/// The staircase `(k-1, ..., 1)`.
pub fn staircase_partition(k: usize) -> Vec<usize> {
    (1..k).rev().collect()
}

/// Checks `λ ⊆ (n-1, ..., 1)` and strips trailing zeros.
pub fn validate_partition(n: usize, lambda: &[usize]) -> Result<Vec<usize>> {
    let mut lam = lambda.to_vec();
    while lam.last() == Some(&0) {
        lam.pop();
    }
    if lam.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::input(format!("partition {lambda:?} is not weakly decreasing")));
    }
    for (i, &part) in lam.iter().enumerate() {
        let row = i + 1;
        if row >= n || part > n - row {
            return Err(Error::input(format!("partition {lambda:?} does not fit inside the staircase of size {n}")));
        }
    }
    Ok(lam)
}

/// Every partition contained in `(n-1, ..., 1)`, in lexicographic order.
pub fn partitions_in_staircase(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, row: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if row >= n {
            return;
        }
        for part in 1..=max.min(n - row) {
            cur.push(part);
            rec(n, row + 1, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, 1, n.saturating_sub(1), &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Cells `(i, j)`, `1 <= i < j <= n`, of the staircase outside `λ`, in row-major order.
pub fn skew_cells(n: usize, lambda: &[usize]) -> Result<Vec<(usize, usize)>> {
    let lam = validate_partition(n, lambda)?;
    let mut cells = Vec::new();
    for i in 1..n {
        let removed = lam.get(i - 1).copied().unwrap_or(0);
        for j in i + 1..=n - removed {
            cells.push((i, j));
        }
    }
    Ok(cells)
}

pub fn cell_label(i: usize, j: usize) -> String {
    format!("p{i},{j}")
}

/// The poset on the cells of the staircase minus `λ` with `p_ij <= p_i'j'` iff
/// `i >= i'` and `j <= j'`, drawn on the rotated grid (position `i + j`).
pub fn skew_star(n: usize, lambda: &[usize]) -> Result<Poset> {
    let cells = skew_cells(n, lambda)?;
    let index: HashMap<(usize, usize), Element> = cells.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let mut relations = Vec::new();
    for (a, &(i, j)) in cells.iter().enumerate() {
        for (b, &(i2, j2)) in cells.iter().enumerate() {
            if a != b && i >= i2 && j <= j2 {
                relations.push((a, b));
            }
        }
    }
    let labels = cells.iter().map(|&(i, j)| cell_label(i, j)).collect();
    let p = Poset::from_relations(labels, &relations)?;
    let get = |i: usize, j: usize| index.get(&(i, j)).copied();
    let mut up = vec![Vec::new(); cells.len()];
    let mut down = vec![Vec::new(); cells.len()];
    for (k, &(i, j)) in cells.iter().enumerate() {
        // moving up the drawing: (i-1, j) goes left, (i, j+1) goes right
        up[k] = [i.checked_sub(1).and_then(|i1| get(i1, j)), get(i, j + 1)].into_iter().flatten().collect();
        down[k] = [get(i, j - 1), get(i + 1, j)].into_iter().flatten().collect();
    }
    let x_pos = |e: &Element| cells[*e].0 + cells[*e].1;
    let mut bottom = p.minimal_elements();
    bottom.sort_by_key(x_pos);
    let mut top = p.maximal_elements();
    top.sort_by_key(x_pos);
    p.with_embedding(Embedding { up, down, bottom, top })
}

pub fn staircase_star(n: usize) -> Poset {
    skew_star(n, &[]).expect("empty partition fits")
}

/// Per-element invariants used to prune the isomorphism search.
type Signature = (usize, usize, usize, usize);

/// Structure-preserving bijection `p -> q` if one exists (labels ignored).
pub fn find_isomorphism(p: &Poset, q: &Poset) -> Option<Vec<Element>> {
    let n = p.len();
    if n != q.len() || p.covers().len() != q.covers().len() {
        return None;
    }
    let sig = |r: &Poset, x: Element| {
        (
            r.upper_covers(x).len(),
            r.lower_covers(x).len(),
            (0..r.len()).filter(|&y| r.less(x, y)).count(),
            (0..r.len()).filter(|&y| r.less(y, x)).count(),
        )
    };
    let order = first_linear_extension(p);
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        p: &Poset,
        q: &Poset,
        order: &[Element],
        k: usize,
        map: &mut Vec<Element>,
        used: &mut Vec<bool>,
        sig: &dyn Fn(&Poset, Element) -> Signature,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let x = order[k];
        for y in 0..q.len() {
            if used[y] || sig(p, x) != sig(q, y) {
                continue;
            }
            // relations with already mapped elements must match
            let ok = order[..k].iter().all(|&z| p.less(z, x) == q.less(map[z], y) && p.less(x, z) == q.less(y, map[z]));
            if ok {
                map[x] = y;
                used[y] = true;
                if rec(p, q, order, k + 1, map, used, sig) {
                    return true;
                }
                used[y] = false;
            }
        }
        false
    }
    rec(p, q, &order, 0, &mut map, &mut used, &sig).then_some(map)
}

/// Poset file: `{"elements": [...], "covers": [[lo, hi], ...], "embedding": {...}}`.
/// The embedding maps each label to `{"up": [...], "down": [...]}` left to
/// right; the reserved keys `_bottom` (`up`) and `_top` (`down`) order the
/// minimal and maximal elements.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PosetFile {
    pub elements: Vec<String>,
    pub covers: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<BTreeMap<String, CoverOrders>>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct CoverOrders {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub up: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub down: Option<Vec<String>>,
}

pub const BOTTOM_KEY: &str = "_bottom";
pub const TOP_KEY: &str = "_top";

impl PosetFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::input(format!("poset JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("poset file serializes")
    }

    pub fn from_poset(p: &Poset) -> Self {
        let name = |x: &Element| p.label(*x).to_string();
        let names = |v: &[Element]| v.iter().map(name).collect::<Vec<_>>();
        let embedding = p.embedding().map(|emb| {
            let mut m: BTreeMap<String, CoverOrders> = (0..p.len())
                .map(|x| {
                    (
                        p.label(x).to_string(),
                        CoverOrders { up: Some(names(&emb.up[x])), down: Some(names(&emb.down[x])) },
                    )
                })
                .collect();
            m.insert(BOTTOM_KEY.into(), CoverOrders { up: Some(names(&emb.bottom)), down: None });
            m.insert(TOP_KEY.into(), CoverOrders { up: None, down: Some(names(&emb.top)) });
            m
        });
        PosetFile {
            elements: p.labels().to_vec(),
            covers: p.covers().iter().map(|&(a, b)| [name(&a), name(&b)]).collect(),
            embedding,
        }
    }

    /// Builds the poset; a missing embedding block leaves it undrawn, while
    /// missing entries inside a present block default to index order.
    pub fn poset(&self) -> Result<Poset> {
        let labels = self.elements.clone();
        let find =
            |l: &str| labels.iter().position(|x| x == l).ok_or_else(|| Error::input(format!("unknown element {l:?}")));
        let covers = self.covers.iter().map(|[a, b]| Ok((find(a)?, find(b)?))).collect::<Result<Vec<_>>>()?;
        let p = Poset::new(labels.clone(), covers)?;
        let Some(block) = &self.embedding else { return Ok(p) };
        let mut emb = p.index_embedding();
        let resolve = |v: &[String]| v.iter().map(|l| find(l)).collect::<Result<Vec<_>>>();
        for (key, orders) in block {
            match key.as_str() {
                BOTTOM_KEY => {
                    if let Some(v) = &orders.up {
                        emb.bottom = resolve(v)?;
                    }
                }
                TOP_KEY => {
                    if let Some(v) = &orders.down {
                        emb.top = resolve(v)?;
                    }
                }
                label => {
                    let x = find(label)?;
                    if let Some(v) = &orders.up {
                        emb.up[x] = resolve(v)?;
                    }
                    if let Some(v) = &orders.down {
                        emb.down[x] = resolve(v)?;
                    }
                }
            }
        }
        p.with_embedding(emb)
    }
}
