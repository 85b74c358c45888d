//! Permutations on {0, …, n-1} and cycle-notation parsing.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::Matrix;

/// `images[i]` is the image of point `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Product of zero-based cycles, applied right to left.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut acc = Permutation::identity(n);
        for cycle in cycles.iter().rev() {
            let mut images: Vec<usize> = (0..n).collect();
            for (k, &p) in cycle.iter().enumerate() {
                if p >= n {
                    return Err(Error::InvalidPermutation(format!("point {} exceeds degree {n}", p + 1)));
                }
                if cycle[..k].contains(&p) {
                    return Err(Error::InvalidPermutation(format!("point {} repeated in a cycle", p + 1)));
                }
                images[p] = cycle[(k + 1) % cycle.len()];
            }
            acc = Permutation { images }.compose(&acc);
        }
        Ok(acc)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Permutation matrix with `P e_i = e_{π(i)}`.
    pub fn matrix(&self, field: FieldSpec) -> Matrix {
        let n = self.degree();
        let mut m = Matrix::zeros(field, n, n);
        for (i, &j) in self.images.iter().enumerate() {
            m.set(j, i, field.one());
        }
        m
    }
}

/// Parses a generator list in cycle notation with one-based points.
///
/// Each parenthesised cycle is one generator: `(1,2,3,4)(1,3)` gives the
/// two generators (1 2 3 4) and (1 3). A generator that is a product of
/// several cycles is written in brackets: `[(1,2)(3,4)]`. Points may be
/// separated by commas or whitespace, generators optionally by commas or
/// semicolons. `()` is the identity. Returns zero-based cycle lists.
pub fn parse_generators(text: &str) -> Result<Vec<Vec<Vec<usize>>>> {
    let err = |msg: &str| Error::InvalidPermutation(format!("{msg} in {text:?}"));
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let mut gens = Vec::new();

    fn skip(chars: &[char], pos: &mut usize, extra: &[char]) {
        while *pos < chars.len() && (chars[*pos].is_whitespace() || extra.contains(&chars[*pos])) {
            *pos += 1;
        }
    }

    fn cycle(chars: &[char], pos: &mut usize) -> std::result::Result<Vec<usize>, String> {
        debug_assert_eq!(chars[*pos], '(');
        *pos += 1;
        let close = chars[*pos..].iter().position(|&c| c == ')').ok_or("unclosed cycle")?;
        let body: String = chars[*pos..*pos + close].iter().collect();
        *pos += close + 1;
        let mut pts = Vec::new();
        for tok in body.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let p: usize = tok.parse().map_err(|_| format!("bad point {tok:?}"))?;
            if p == 0 {
                return Err("points are numbered from 1".into());
            }
            if pts.contains(&(p - 1)) {
                return Err(format!("point {p} repeated in a cycle"));
            }
            pts.push(p - 1);
        }
        Ok(pts)
    }

    skip(&chars, &mut pos, &[',', ';']);
    while pos < chars.len() {
        match chars[pos] {
            '(' => gens.push(vec![cycle(&chars, &mut pos).map_err(|m| err(&m))?]),
            '[' => {
                pos += 1;
                let mut cycles = Vec::new();
                loop {
                    skip(&chars, &mut pos, &[]);
                    match chars.get(pos) {
                        Some('(') => cycles.push(cycle(&chars, &mut pos).map_err(|m| err(&m))?),
                        Some(']') => {
                            pos += 1;
                            break;
                        }
                        _ => return Err(err("expected '(' or ']'")),
                    }
                }
                gens.push(cycles);
            }
            c => return Err(err(&format!("unexpected character {c:?}"))),
        }
        skip(&chars, &mut pos, &[',', ';']);
    }
    if gens.is_empty() {
        return Err(err("no generators"));
    }
    Ok(gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_order() {
        let a = Permutation::from_cycles(3, &[vec![0, 1]]).unwrap();
        let b = Permutation::from_cycles(3, &[vec![1, 2]]).unwrap();
        // (a∘b)(1) = a(2) = 2
        assert_eq!(a.compose(&b).apply(1), 2);
        let q = FieldSpec::Rational;
        assert_eq!(a.compose(&b).matrix(q), a.matrix(q).mul(&b.matrix(q)));
    }

    #[test]
    fn parse_variants() {
        let a = parse_generators("(1,2,3,4)(1,3)").unwrap();
        assert_eq!(a, vec![vec![vec![0, 1, 2, 3]], vec![vec![0, 2]]]);
        assert_eq!(parse_generators("(1 2 3 4), (1 3)").unwrap(), a);
        assert_eq!(parse_generators(" (1,2,3,4);(1,3) ").unwrap(), a);
        let b = parse_generators("[(1,2)(3,4)] (1,3)").unwrap();
        assert_eq!(b, vec![vec![vec![0, 1], vec![2, 3]], vec![vec![0, 2]]]);
        assert_eq!(parse_generators("()").unwrap(), vec![vec![Vec::<usize>::new()]]);
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "(1,2", "(0,1)", "(1,1)", "(a,b)", "1,2", "[(1,2)"] {
            assert!(parse_generators(bad).is_err(), "{bad:?} accepted");
        }
    }
}
