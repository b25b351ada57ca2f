use std::sync::OnceLock;

/// Highest model order supported by the cached index tables.
pub const MAX_ORDER: usize = 40;

const NONE: usize = usize::MAX;

/// Velocity-space multi-index alpha = (a1, a2, a3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub [usize; 3]);

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex([0, 0, 0]);

    pub fn new(a1: usize, a2: usize, a3: usize) -> Self {
        MultiIndex([a1, a2, a3])
    }

    /// Unit index e_d (d = 0, 1, 2).
    pub fn unit(d: usize) -> Self {
        let mut a = [0; 3];
        a[d] = 1;
        MultiIndex(a)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn plus(self, other: MultiIndex) -> Self {
        MultiIndex([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }

    /// alpha! = a1! a2! a3!
    pub fn factorial(&self) -> f64 {
        self.0
            .iter()
            .map(|&a| (1..=a).map(|k| k as f64).product::<f64>())
            .product()
    }
}

/// Number of multi-indices with |alpha| <= order, i.e. C(order+3, 3).
pub fn basis_size(order: usize) -> usize {
    (order + 1) * (order + 2) * (order + 3) / 6
}

/// Index table for all alpha with |alpha| <= order.
///
/// Multi-indices are stored graded by degree; within one degree a larger
/// a1 comes first, then a larger a2. Since the ordering does not depend on
/// `order`, the table of order m is a prefix of the table of any order M > m.
#[derive(Debug)]
pub struct MomentBasis {
    order: usize,
    indices: Vec<MultiIndex>,
    lookup: Vec<usize>,
    lower: [Vec<usize>; 3],
    upper: [Vec<usize>; 3],
    lines: [Lines; 3],
}

/// Index sets {alpha + k e_d : k = 0, 1, ...} for every alpha with alpha_d = 0,
/// stored back to back: line j is `idx[start[j]..start[j + 1]]`.
#[derive(Debug, Default)]
pub(crate) struct Lines {
    pub idx: Vec<usize>,
    pub start: Vec<usize>,
}

impl MomentBasis {
    fn build(order: usize) -> Self {
        let mut indices = Vec::with_capacity(basis_size(order));
        for n in 0..=order {
            for a1 in (0..=n).rev() {
                for a2 in (0..=n - a1).rev() {
                    indices.push(MultiIndex::new(a1, a2, n - a1 - a2));
                }
            }
        }
        let side = order + 1;
        let mut lookup = vec![NONE; side * side * side];
        for (i, a) in indices.iter().enumerate() {
            lookup[(a.0[0] * side + a.0[1]) * side + a.0[2]] = i;
        }
        let find = |a: [usize; 3]| -> usize {
            if a.iter().sum::<usize>() > order {
                NONE
            } else {
                lookup[(a[0] * side + a[1]) * side + a[2]]
            }
        };
        let mut lower: [Vec<usize>; 3] = Default::default();
        let mut upper: [Vec<usize>; 3] = Default::default();
        for d in 0..3 {
            lower[d] = indices
                .iter()
                .map(|a| {
                    if a.0[d] == 0 {
                        NONE
                    } else {
                        let mut b = a.0;
                        b[d] -= 1;
                        find(b)
                    }
                })
                .collect();
            upper[d] = indices
                .iter()
                .map(|a| {
                    let mut b = a.0;
                    b[d] += 1;
                    find(b)
                })
                .collect();
        }
        let lines = std::array::from_fn(|d| {
            let mut l = Lines::default();
            for (i, a) in indices.iter().enumerate() {
                if a.0[d] != 0 {
                    continue;
                }
                l.start.push(l.idx.len());
                let mut j = i;
                while j != NONE {
                    l.idx.push(j);
                    j = upper[d][j];
                }
            }
            l.start.push(l.idx.len());
            l
        });
        MomentBasis {
            order,
            indices,
            lookup,
            lower,
            upper,
            lines,
        }
    }

    /// Shared table for `order` (built on first use).
    pub fn of(order: usize) -> &'static MomentBasis {
        static TABLES: OnceLock<Vec<OnceLock<MomentBasis>>> = OnceLock::new();
        assert!(order <= MAX_ORDER, "order {order} exceeds MAX_ORDER");
        let tables = TABLES.get_or_init(|| (0..=MAX_ORDER).map(|_| OnceLock::new()).collect());
        tables[order].get_or_init(|| MomentBasis::build(order))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn multi_index(&self, i: usize) -> MultiIndex {
        self.indices[i]
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn index_of(&self, a: MultiIndex) -> Option<usize> {
        if a.degree() > self.order {
            return None;
        }
        let side = self.order + 1;
        let i = self.lookup[(a.0[0] * side + a.0[1]) * side + a.0[2]];
        (i != NONE).then_some(i)
    }

    /// Position of alpha - e_d, if it exists.
    #[inline]
    pub fn lower(&self, d: usize, i: usize) -> Option<usize> {
        let j = self.lower[d][i];
        (j != NONE).then_some(j)
    }

    /// Position of alpha + e_d, if it is still within the order.
    #[inline]
    pub fn upper(&self, d: usize, i: usize) -> Option<usize> {
        let j = self.upper[d][i];
        (j != NONE).then_some(j)
    }

    #[inline]
    pub(crate) fn lower_raw(&self, d: usize) -> &[usize] {
        &self.lower[d]
    }

    #[inline]
    pub(crate) fn lines(&self, d: usize) -> &Lines {
        &self.lines[d]
    }

    pub(crate) fn upper_raw(&self, d: usize) -> &[usize] {
        &self.upper[d]
    }
}

/// Positions of the low-order coefficients that carry macroscopic meaning.
pub(crate) mod slots {
    use super::{MomentBasis, MultiIndex};

    pub fn e(d: usize) -> usize {
        1 + d
    }

    pub fn pair(i: usize, j: usize) -> usize {
        MomentBasis::of(2)
            .index_of(MultiIndex::unit(i).plus(MultiIndex::unit(j)))
            .unwrap()
    }

    pub fn triple(i: usize, j: usize, k: usize) -> usize {
        MomentBasis::of(3)
            .index_of(
                MultiIndex::unit(i)
                    .plus(MultiIndex::unit(j))
                    .plus(MultiIndex::unit(k)),
            )
            .unwrap()
    }
}
