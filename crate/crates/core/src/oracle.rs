//! Brute-force certifiers that share only the field and linear-algebra
//! layers with the decomposition pipeline.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::{spin, Matrix, Subspace};
use crate::perm::{parse_generators, Permutation};

/// Largest group the fixture generator will enumerate.
pub const GROUP_ORDER_CAP: usize = 10_000;

/// Largest module (counted in vectors) the exhaustive simplicity test will enumerate.
pub const ENUMERATION_CAP: u128 = 6561;

/// Dimension of the unital algebra generated by `gens`, computed by
/// repeatedly multiplying the whole current basis by itself until the span
/// stops growing.
pub fn oracle_dim(field: FieldSpec, n: usize, gens: &[Matrix]) -> usize {
    let mut elems: Vec<Matrix> = vec![Matrix::identity(field, n)];
    elems.extend(gens.iter().cloned());
    let flat: Vec<_> = elems.iter().map(|m| m.entries().to_vec()).collect();
    let mut span = Subspace::span(field, n * n, &flat);
    loop {
        let basis: Vec<Matrix> =
            span.basis().iter().map(|v| Matrix::from_flat(field, n, v.clone())).collect();
        let mut all: Vec<_> = span.basis().to_vec();
        for a in &basis {
            for b in &basis {
                all.push(a.mul(b).entries().to_vec());
            }
        }
        let next = Subspace::span(field, n * n, &all);
        if next.dim() == span.dim() {
            return span.dim();
        }
        span = next;
    }
}

/// True iff every nonzero vector spins to the whole module.
pub fn exhaustive_simplicity(field: FieldSpec, actions: &[Matrix], dim: usize) -> Result<bool> {
    let p = match field {
        FieldSpec::Prime(p) => p,
        FieldSpec::Rational => {
            return Err(Error::Input("exhaustive simplicity needs a finite field".into()));
        }
    };
    let count = (p as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
    if count > ENUMERATION_CAP {
        return Err(Error::TooLargeToEnumerate(count));
    }
    for idx in 1..count {
        let mut t = idx;
        let v: Vec<_> = (0..dim)
            .map(|_| {
                let c = (t % p as u128) as i64;
                t /= p as u128;
                field.from_i64(c)
            })
            .collect();
        if spin(field, dim, &[v], actions).dim() != dim {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Group algebra of a permutation group with its permutation module.
#[derive(Clone, Debug)]
pub struct GroupFixture {
    pub order: usize,
    pub elements: Vec<Permutation>,
    /// Left regular representation of each generator.
    pub faithful: Vec<Matrix>,
    /// Permutation matrix of each generator.
    pub module: Vec<Matrix>,
}

/// Enumerates the group generated by `gens` (at most [`GROUP_ORDER_CAP`]
/// elements) and returns regular and permutation representations.
pub fn perm_group_fixture(field: FieldSpec, gens: &[Permutation], degree: usize) -> Result<GroupFixture> {
    for g in gens {
        if g.degree() != degree {
            return Err(Error::InvalidPermutation(format!(
                "generator of degree {} on {degree} points",
                g.degree()
            )));
        }
    }
    let id = Permutation::identity(degree);
    let mut elements = vec![id.clone()];
    let mut index: HashMap<Permutation, usize> = HashMap::from([(id, 0)]);
    let mut head = 0;
    while head < elements.len() {
        for g in gens {
            let h = g.compose(&elements[head]);
            if !index.contains_key(&h) {
                if elements.len() == GROUP_ORDER_CAP {
                    return Err(Error::GroupTooLarge(GROUP_ORDER_CAP));
                }
                index.insert(h.clone(), elements.len());
                elements.push(h);
            }
        }
        head += 1;
    }
    let order = elements.len();
    let faithful = gens
        .iter()
        .map(|g| {
            let mut m = Matrix::zeros(field, order, order);
            for (col, h) in elements.iter().enumerate() {
                m.set(index[&g.compose(h)], col, field.one());
            }
            m
        })
        .collect();
    let module = gens.iter().map(|g| g.matrix(field)).collect();
    Ok(GroupFixture { order, elements, faithful, module })
}

/// [`perm_group_fixture`] for generators in cycle notation. The degree is
/// the largest point mentioned, and at least 1.
pub fn perm_group_fixture_from_text(field: FieldSpec, text: &str) -> Result<GroupFixture> {
    let cycles = parse_generators(text)?;
    let degree = cycles.iter().flatten().flatten().map(|p| p + 1).max().unwrap_or(1);
    let gens = cycles
        .iter()
        .map(|c| Permutation::from_cycles(degree, c))
        .collect::<Result<Vec<_>>>()?;
    perm_group_fixture(field, &gens, degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;

    const Q: FieldSpec = FieldSpec::Rational;

    fn cyc(n: usize, c: &[usize]) -> Permutation {
        Permutation::from_cycles(n, &[c.to_vec()]).unwrap()
    }

    #[test]
    fn d8_fixture() {
        let fx = perm_group_fixture(Q, &[cyc(4, &[0, 1, 2, 3]), cyc(4, &[0, 2])], 4).unwrap();
        assert_eq!(fx.order, 8);
        assert_eq!(fx.faithful[0].rows(), 8);
        assert_eq!(fx.module[0].rows(), 4);
        assert_eq!(oracle_dim(Q, 8, &fx.faithful), 8);
        // passes the homomorphism check
        Algebra::build(Q, vec!["r".into(), "s".into()], fx.faithful, fx.module).unwrap();
    }

    #[test]
    fn trivial_and_symmetric() {
        let fx = perm_group_fixture(Q, &[Permutation::identity(1)], 1).unwrap();
        assert_eq!(fx.order, 1);
        assert_eq!(fx.faithful[0], Matrix::identity(Q, 1));
        let s4 = perm_group_fixture(Q, &[cyc(4, &[0, 1, 2, 3]), cyc(4, &[0, 1])], 4).unwrap();
        assert_eq!(s4.order, 24);
        assert_eq!(oracle_dim(Q, 24, &s4.faithful), 24);
    }

    #[test]
    fn from_text() {
        let d8 = perm_group_fixture_from_text(Q, "(1,2,3,4)(1,3)").unwrap();
        assert_eq!((d8.order, d8.module[0].rows()), (8, 4));
        let trivial = perm_group_fixture_from_text(Q, "()").unwrap();
        assert_eq!((trivial.order, trivial.module[0].rows()), (1, 1));
        assert!(perm_group_fixture_from_text(Q, "(1,2").is_err());
    }

    #[test]
    fn group_too_large() {
        // S8 has order 40320
        let gens = [cyc(8, &[0, 1, 2, 3, 4, 5, 6, 7]), cyc(8, &[0, 1])];
        assert_eq!(perm_group_fixture(Q, &gens, 8).unwrap_err(), Error::GroupTooLarge(GROUP_ORDER_CAP));
    }

    #[test]
    fn oracle_dim_examples() {
        assert_eq!(oracle_dim(Q, 3, &[Matrix::identity(Q, 3)]), 1);
        let units: Vec<Matrix> =
            (0..2).flat_map(|i| (0..2).map(move |j| Matrix::unit(Q, 2, i, j))).collect();
        assert_eq!(oracle_dim(Q, 2, &units), 4);
    }

    #[test]
    fn exhaustive_examples() {
        let f2 = FieldSpec::prime(2).unwrap();
        assert!(exhaustive_simplicity(f2, &[Matrix::identity(f2, 1)], 1).unwrap());
        assert!(!exhaustive_simplicity(f2, &[Matrix::identity(f2, 2)], 2).unwrap());
        let f3 = FieldSpec::prime(3).unwrap();
        assert!(matches!(
            exhaustive_simplicity(f3, &[Matrix::identity(f3, 9)], 9),
            Err(Error::TooLargeToEnumerate(_))
        ));
        // x^2 + x + 1 is irreducible over GF(2): its companion matrix acts simply
        let c = Matrix::from_i64(f2, &[&[0, 1], &[1, 1]]);
        assert!(exhaustive_simplicity(f2, &[c], 2).unwrap());
    }
}
