//! Table-backed finite groups and homomorphisms between them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Largest order for which associativity is checked over every triple.
/// Bigger tables are checked on a fixed-seed random sample of triples.
pub const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 256;

const SAMPLED_ASSOCIATIVITY_TRIPLES: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("multiplication table is empty")]
    Empty,
    #[error("multiplication table is not square: row {row} has {len} entries, expected {order}")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("table entry {a}*{b} = {value} is out of range for a group of order {order}")]
    OutOfRange {
        a: usize,
        b: usize,
        value: usize,
        order: usize,
    },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {element} has no two-sided inverse")]
    NoInverse { element: usize },
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("map has {len} entries but the domain has order {expected}")]
    MapLength { len: usize, expected: usize },
    #[error("map sends {element} to {value}, outside a codomain of order {order}")]
    MapOutOfRange { element: usize, value: usize, order: usize },
    #[error("not a homomorphism: f({a}*{b}) != f({a})*f({b})")]
    NotHomomorphism { a: usize, b: usize },
}

/// A finite group stored as a closed multiplication table over the indices
/// `0..order`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// The table as nested rows, the inverse of [`build_group`].
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Cyclic group of order `n` (addition mod `n`).
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group needs positive order");
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect::<Vec<Vec<_>>>();
        build_group(&table).expect("cyclic table is a group")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Restricts the table to `elements`, which must be closed under the
    /// product. Index `i` of the result corresponds to `elements[i]`.
    pub fn subgroup(&self, elements: &[usize]) -> Result<FiniteGroup, GroupError> {
        let mut position = vec![usize::MAX; self.order];
        for (i, &e) in elements.iter().enumerate() {
            position[e] = i;
        }
        let mut rows = Vec::with_capacity(elements.len());
        for (i, &a) in elements.iter().enumerate() {
            let mut row = Vec::with_capacity(elements.len());
            for (j, &b) in elements.iter().enumerate() {
                let p = position[self.mul(a, b)];
                if p == usize::MAX {
                    return Err(GroupError::OutOfRange {
                        a: i,
                        b: j,
                        value: self.mul(a, b),
                        order: elements.len(),
                    });
                }
                row.push(p);
            }
            rows.push(row);
        }
        build_group(&rows)
    }
}

/// Validates a multiplication table and computes its identity and inverses.
///
/// Associativity is checked over every triple up to
/// [`EXHAUSTIVE_ASSOCIATIVITY_LIMIT`]; larger tables are checked on a
/// fixed-seed sample of triples.
pub fn build_group(table: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
    let order = table.len();
    if order == 0 {
        return Err(GroupError::Empty);
    }
    let mut flat = Vec::with_capacity(order * order);
    for (row, entries) in table.iter().enumerate() {
        if entries.len() != order {
            return Err(GroupError::NotSquare {
                row,
                len: entries.len(),
                order,
            });
        }
        for (col, &value) in entries.iter().enumerate() {
            if value >= order {
                return Err(GroupError::OutOfRange {
                    a: row,
                    b: col,
                    value,
                    order,
                });
            }
        }
        flat.extend_from_slice(entries);
    }
    let mul = |a: usize, b: usize| flat[a * order + b];

    let identity = (0..order)
        .find(|&e| (0..order).all(|x| mul(e, x) == x && mul(x, e) == x))
        .ok_or(GroupError::NoIdentity)?;

    let mut inverses = Vec::with_capacity(order);
    for a in 0..order {
        let inv = (0..order)
            .find(|&b| mul(a, b) == identity && mul(b, a) == identity)
            .ok_or(GroupError::NoInverse { element: a })?;
        inverses.push(inv);
    }

    if order <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
        for a in 0..order {
            for b in 0..order {
                let ab = mul(a, b);
                for c in 0..order {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..SAMPLED_ASSOCIATIVITY_TRIPLES {
            let (a, b, c) = (
                rng.random_range(0..order),
                rng.random_range(0..order),
                rng.random_range(0..order),
            );
            if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                return Err(GroupError::NotAssociative { a, b, c });
            }
        }
    }

    Ok(FiniteGroup {
        order,
        table: flat,
        identity,
        inverses,
    })
}

/// A group homomorphism stored as an index array.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupHom {
    dom_order: usize,
    cod_order: usize,
    map: Vec<usize>,
}

impl GroupHom {
    /// Checks `map(a*b) = map(a)*map(b)` on every pair.
    pub fn new(dom: &FiniteGroup, cod: &FiniteGroup, map: Vec<usize>) -> Result<Self, GroupError> {
        if map.len() != dom.order() {
            return Err(GroupError::MapLength {
                len: map.len(),
                expected: dom.order(),
            });
        }
        if let Some((element, &value)) = map.iter().enumerate().find(|(_, &v)| v >= cod.order()) {
            return Err(GroupError::MapOutOfRange {
                element,
                value,
                order: cod.order(),
            });
        }
        for a in dom.elements() {
            for b in dom.elements() {
                if map[dom.mul(a, b)] != cod.mul(map[a], map[b]) {
                    return Err(GroupError::NotHomomorphism { a, b });
                }
            }
        }
        Ok(Self {
            dom_order: dom.order(),
            cod_order: cod.order(),
            map,
        })
    }

    pub fn identity(group: &FiniteGroup) -> Self {
        Self {
            dom_order: group.order(),
            cod_order: group.order(),
            map: group.elements().collect(),
        }
    }

    /// The homomorphism sending everything to the identity of `cod`.
    pub fn trivial(dom: &FiniteGroup, cod: &FiniteGroup) -> Self {
        Self {
            dom_order: dom.order(),
            cod_order: cod.order(),
            map: vec![cod.identity(); dom.order()],
        }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn dom_order(&self) -> usize {
        self.dom_order
    }

    pub fn cod_order(&self) -> usize {
        self.cod_order
    }

    pub fn is_bijective(&self) -> bool {
        if self.dom_order != self.cod_order {
            return false;
        }
        let mut seen = vec![false; self.cod_order];
        self.map.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }
}
