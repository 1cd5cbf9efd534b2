//! Exhaustive search for finite mobi algebras on `{0, .., n-1}`.
//!
//! Constants are placed first; A1-A5 then force a large part of the table
//! (`p(a,0,b) = a`, `p(b,1,a) = a`, `p(a,b,a) = a`, `p(0,a,1) = a`,
//! `p(1,1/2,0) = 1/2`). The free entries are filled by backtracking,
//! keeping every row `p(a,1/2,-)` injective (A6) and rejecting any
//! partial table that already violates an instance of A7 or A8.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::MobiAlgebra;
use crate::carrier::{Carrier, Element};
use crate::error::EvalError;

pub const MAX_SIZE: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search size must be between 1 and {MAX_SIZE}, got {0}")]
    SizeOutOfRange(usize),
}

/// A complete operation table; `table[a*n*n + b*n + c] = p(a, b, c)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FiniteModel {
    pub size: usize,
    pub zero: usize,
    pub half: usize,
    pub one: usize,
    pub table: Vec<usize>,
}

impl FiniteModel {
    /// Tabulate `p` on `{0, .., n-1}`.
    pub fn from_fn(
        size: usize,
        (zero, half, one): (usize, usize, usize),
        p: impl Fn(usize, usize, usize) -> usize,
    ) -> Self {
        let table = (0..size)
            .cartesian_product(0..size)
            .cartesian_product(0..size)
            .map(|((a, b), c)| p(a, b, c))
            .collect();
        FiniteModel {
            size,
            zero,
            half,
            one,
            table,
        }
    }

    pub fn p(&self, a: usize, b: usize, c: usize) -> usize {
        let n = self.size;
        self.table[a * n * n + b * n + c]
    }

    /// The algebra on `Zmod(n)` residues whose operation is this table. The
    /// residue structure is only used as a carrier of labels.
    pub fn to_algebra(&self) -> MobiAlgebra {
        let n = self.size as u64;
        let model = self.clone();
        let label = move |e: &Element| -> Result<usize, EvalError> {
            let (v, m) = e.as_residue()?;
            if m != n {
                return Err(EvalError::Shape(format!("{e} is not a label below {n}")));
            }
            Ok(v as usize)
        };
        MobiAlgebra::new(
            format!("finite-model({})", self.size),
            Carrier::ModularInt(n),
            move |a, b, c| {
                let v = model.p(label(a)?, label(b)?, label(c)?);
                Ok(Element::residue(v as u64, n))
            },
            Element::residue(self.zero as u64, n),
            Element::residue(self.half as u64, n),
            Element::residue(self.one as u64, n),
        )
        .expect("labels are residues")
    }

    fn relabel(&self, perm: &[usize]) -> FiniteModel {
        let n = self.size;
        let mut table = vec![0; n * n * n];
        for ((a, b), c) in (0..n).cartesian_product(0..n).cartesian_product(0..n) {
            table[perm[a] * n * n + perm[b] * n + perm[c]] = perm[self.p(a, b, c)];
        }
        FiniteModel {
            size: n,
            zero: perm[self.zero],
            half: perm[self.half],
            one: perm[self.one],
            table,
        }
    }

    /// Representative of the isomorphism class: the least relabeling,
    /// ordered by `(zero, one, half, table)`. With distinct constants this
    /// puts 0 at 0, 1 at 1 and 1/2 at 2.
    pub fn canonical(&self) -> FiniteModel {
        (0..self.size)
            .permutations(self.size)
            .map(|perm| self.relabel(&perm))
            .min_by(|x, y| {
                (x.zero, x.one, x.half, &x.table).cmp(&(y.zero, y.one, y.half, &y.table))
            })
            .expect("at least one permutation")
    }

    pub fn is_isomorphic(&self, other: &FiniteModel) -> bool {
        self.size == other.size && self.canonical() == other.canonical()
    }
}

struct Partial {
    n: usize,
    cells: Vec<Option<usize>>,
}

impl Partial {
    fn get(&self, a: usize, b: usize, c: usize) -> Option<usize> {
        self.cells[(a * self.n + b) * self.n + c]
    }

    fn force(&mut self, a: usize, b: usize, c: usize, v: usize) -> bool {
        let i = (a * self.n + b) * self.n + c;
        match self.cells[i] {
            Some(old) => old == v,
            None => {
                self.cells[i] = Some(v);
                true
            }
        }
    }

    fn row_injective(&self, a: usize, half: usize) -> bool {
        let mut seen = vec![false; self.n];
        for c in 0..self.n {
            if let Some(v) = self.get(a, half, c) {
                if seen[v] {
                    return false;
                }
                seen[v] = true;
            }
        }
        true
    }

    /// No fully evaluable instance of A7 or A8 is violated.
    fn consistent(&self, half: usize) -> bool {
        let n = self.n;
        let r = 0..n;
        // A7: p(a, p(b1,b2,b3), c) = p(p(a,b1,c), b2, p(a,b3,c))
        for (a, c, b1, b2, b3) in
            itertools::iproduct!(r.clone(), r.clone(), r.clone(), r.clone(), r.clone())
        {
            let lhs = self.get(b1, b2, b3).and_then(|m| self.get(a, m, c));
            let rhs = match (self.get(a, b1, c), self.get(a, b3, c)) {
                (Some(u), Some(w)) => self.get(u, b2, w),
                _ => None,
            };
            if let (Some(l), Some(r)) = (lhs, rhs) {
                if l != r {
                    return false;
                }
            }
        }
        // A8: p(p(a1,b,c1), 1/2, p(a2,b,c2)) = p(p(a1,1/2,a2), b, p(c1,1/2,c2))
        for (a1, a2, b, c1, c2) in
            itertools::iproduct!(r.clone(), r.clone(), r.clone(), r.clone(), r.clone())
        {
            let lhs = match (self.get(a1, b, c1), self.get(a2, b, c2)) {
                (Some(u), Some(w)) => self.get(u, half, w),
                _ => None,
            };
            let rhs = match (self.get(a1, half, a2), self.get(c1, half, c2)) {
                (Some(u), Some(w)) => self.get(u, b, w),
                _ => None,
            };
            if let (Some(l), Some(r)) = (lhs, rhs) {
                if l != r {
                    return false;
                }
            }
        }
        true
    }
}

fn forced(n: usize, zero: usize, half: usize, one: usize) -> Option<Partial> {
    let mut t = Partial {
        n,
        cells: vec![None; n * n * n],
    };
    for (a, b) in (0..n).cartesian_product(0..n) {
        let ok = t.force(a, zero, b, a) // A4
            && t.force(b, one, a, a) // A5
            && t.force(a, b, a, a) // A3
            && t.force(zero, a, one, a); // A2
        if !ok {
            return None;
        }
    }
    if !t.force(one, half, zero, half) {
        return None; // A1
    }
    ((0..n).all(|a| t.row_injective(a, half)) && t.consistent(half)).then_some(t)
}

fn fill(t: &mut Partial, free: &[usize], half: usize, found: &mut Vec<Vec<usize>>, limit: usize) {
    if found.len() >= limit {
        return;
    }
    let Some((&cell, rest)) = free.split_first() else {
        found.push(t.cells.iter().map(|c| c.expect("complete")).collect());
        return;
    };
    let n = t.n;
    let (a, b) = (cell / (n * n), (cell / n) % n);
    for v in 0..n {
        t.cells[cell] = Some(v);
        if (b != half || t.row_injective(a, half)) && t.consistent(half) {
            fill(t, rest, half, found, limit);
        }
    }
    t.cells[cell] = None;
}

/// All algebras of size `n` up to isomorphism, at most `limit` of them, in
/// canonical form and sorted.
pub fn search_finite(
    n: usize,
    require_distinct_constants: bool,
    limit: Option<usize>,
) -> Result<Vec<FiniteModel>, SearchError> {
    if !(1..=MAX_SIZE).contains(&n) {
        return Err(SearchError::SizeOutOfRange(n));
    }
    let limit = limit.unwrap_or(usize::MAX);
    let mut classes = BTreeSet::new();
    for (zero, half, one) in itertools::iproduct!(0..n, 0..n, 0..n) {
        if require_distinct_constants && (zero == half || half == one || zero == one) {
            continue;
        }
        let Some(mut t) = forced(n, zero, half, one) else {
            continue;
        };
        let free: Vec<usize> = (0..t.cells.len())
            .filter(|&i| t.cells[i].is_none())
            .collect();
        let mut tables = Vec::new();
        fill(&mut t, &free, half, &mut tables, usize::MAX);
        for table in tables {
            let model = FiniteModel {
                size: n,
                zero,
                half,
                one,
                table,
            };
            classes.insert(model.canonical());
        }
        if classes.len() >= limit {
            break;
        }
    }
    Ok(classes.into_iter().take(limit).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::check_algebra;
    use crate::check::{all_pass, Strategy};

    fn z3() -> FiniteModel {
        FiniteModel::from_fn(3, (0, 2, 1), |a, b, c| (a + b * c + 2 * b * a) % 3)
    }

    #[test]
    fn singleton() {
        let models = search_finite(1, false, None).unwrap();
        assert_eq!(
            models,
            vec![FiniteModel::from_fn(1, (0, 0, 0), |_, _, _| 0)]
        );
        assert!(search_finite(1, true, None).unwrap().is_empty());
    }

    #[test]
    fn two_elements_with_distinct_constants_is_impossible() {
        assert!(search_finite(2, true, None).unwrap().is_empty());
    }

    #[test]
    fn three_elements_contain_z3() {
        let models = search_finite(3, true, None).unwrap();
        assert!(models.contains(&z3()), "{models:?}");
        for m in &models {
            assert!(all_pass(&check_algebra(
                &m.to_algebra(),
                Strategy::Exhaustive
            )));
        }
    }

    #[test]
    fn z3_table_matches_catalog() {
        let catalog = crate::catalog::zmod_algebra(3).unwrap();
        let model = z3().to_algebra();
        for e in Carrier::ModularInt(3)
            .enumerate()
            .unwrap()
            .iter()
            .combinations_with_replacement(3)
        {
            assert_eq!(
                model.p(e[0], e[1], e[2]).unwrap(),
                catalog.p(e[0], e[1], e[2]).unwrap()
            );
        }
    }

    #[test]
    fn bounds_and_limit() {
        assert_eq!(
            search_finite(0, false, None),
            Err(SearchError::SizeOutOfRange(0))
        );
        assert_eq!(
            search_finite(5, false, None),
            Err(SearchError::SizeOutOfRange(5))
        );
        assert!(search_finite(3, false, Some(1)).unwrap().len() <= 1);
    }

    #[test]
    fn canonical_form_is_invariant() {
        let m = z3();
        assert_eq!(m.relabel(&[2, 0, 1]).canonical(), m.canonical());
        assert!(m.is_isomorphic(&m.relabel(&[1, 2, 0])));
    }
}
