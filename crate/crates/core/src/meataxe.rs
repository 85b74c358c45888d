//! Randomised search for simple submodules with Norton's irreducibility
//! certificate, and the commutant test for split simples.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::is_scalar_action;
use crate::error::{Error, Result};
use crate::factor::irreducible_factors;
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{kernel, spin, Matrix, Subspace, Vector, Word};
use crate::poly::{charpoly, Poly};

/// Default number of random algebra elements tried per search.
pub const DEFAULT_BUDGET: usize = 32;

/// Data proving a module simple, in coordinates on the module itself.
///
/// `theta` is the combination `theta_words` of the generator actions.
/// `factor(theta)` has nullity `deg factor`, and both the kernel vector and
/// the transposed kernel vector spin to everything.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NortonWitness {
    pub theta_words: Vec<Word>,
    pub theta: Matrix,
    pub factor: Poly,
    pub nullity: usize,
    pub kernel_vector: Vector,
    pub dual_vector: Vector,
}

impl NortonWitness {
    /// Re-derives every claim of the certificate against `actions`.
    pub fn recheck(&self, actions: &[Matrix]) -> bool {
        let Some(n) = actions.first().map(Matrix::rows) else {
            return false;
        };
        let field = actions[0].field();
        let theta = self
            .theta_words
            .iter()
            .fold(Matrix::zeros(field, n, n), |acc, w| acc.add(&w.evaluate(actions, n)));
        if theta != self.theta {
            return false;
        }
        let ft = self.factor.eval_matrix(&theta);
        let nullity = kernel(&ft).len();
        let transposed: Vec<Matrix> = actions.iter().map(Matrix::transpose).collect();
        nullity == self.nullity
            && Some(nullity) == self.factor.degree()
            && self.kernel_vector.iter().any(|s| !s.is_zero())
            && self.dual_vector.iter().any(|s| !s.is_zero())
            && ft.mul_vec(&self.kernel_vector).iter().all(Scalar::is_zero)
            && ft.transpose().mul_vec(&self.dual_vector).iter().all(Scalar::is_zero)
            && spin(field, n, &[self.kernel_vector.clone()], actions).dim() == n
            && spin(field, n, &[self.dual_vector.clone()], &transposed).dim() == n
    }
}

/// A simple submodule N of M.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleSubmodule {
    /// RREF basis of N inside M.
    pub subspace: Subspace,
    /// Generator actions in coordinates over `subspace.basis()`.
    pub generator_actions: Vec<Matrix>,
    /// `None` only for one-dimensional N, which is trivially simple.
    pub witness: Option<NortonWitness>,
}

impl SimpleSubmodule {
    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    /// Invariance under the full actions and a fresh check of the certificate.
    pub fn recheck(&self, actions: &[Matrix]) -> bool {
        let invariant = actions
            .iter()
            .all(|g| self.subspace.basis().iter().all(|b| self.subspace.contains(&g.mul_vec(b))));
        let certified = match &self.witness {
            Some(w) => w.recheck(&self.generator_actions),
            None => self.dim() == 1,
        };
        invariant && certified && restrict(actions, &self.subspace) == self.generator_actions
    }
}

/// Commutant of a simple module.
#[derive(Clone, Debug)]
pub struct EndoRingInfo {
    pub dim_over_k: usize,
    pub basis: Vec<Matrix>,
}

/// Matrices of `actions` restricted to the invariant subspace `sub`, in
/// coordinates over its RREF basis.
pub fn restrict(actions: &[Matrix], sub: &Subspace) -> Vec<Matrix> {
    actions
        .iter()
        .map(|g| {
            let cols: Vec<Vector> = sub
                .basis()
                .iter()
                .map(|b| sub.coordinates(&g.mul_vec(b)).expect("subspace is invariant"))
                .collect();
            Matrix::from_columns(sub.field(), sub.dim(), &cols)
        })
        .collect()
}

fn random_scalar(field: FieldSpec, rng: &mut ChaCha8Rng) -> Scalar {
    match field {
        FieldSpec::Rational => field.from_i64(rng.gen_range(-3..=3)),
        FieldSpec::Prime(p) => field.from_i64(rng.gen_range(0..p) as i64),
    }
}

fn random_combination(field: FieldSpec, vs: &[Vector], rng: &mut ChaCha8Rng) -> Vector {
    let len = vs[0].len();
    loop {
        let mut acc = vec![field.zero(); len];
        for v in vs {
            let c = random_scalar(field, rng);
            if c.is_zero() {
                continue;
            }
            for (a, b) in acc.iter_mut().zip(v) {
                *a = &*a + &(&c * b);
            }
        }
        if acc.iter().any(|s| !s.is_zero()) {
            return acc;
        }
    }
}

/// A random combination of at most `2 · dim` words in the generators.
fn random_element(actions: &[Matrix], rng: &mut ChaCha8Rng) -> (Vec<Word>, Matrix) {
    let field = actions[0].field();
    let n = actions[0].rows();
    let mut words: Vec<(Vec<usize>, Matrix)> =
        actions.iter().enumerate().map(|(i, g)| (vec![i], g.clone())).collect();
    while words.len() < 2 * n {
        let a = rng.gen_range(0..words.len());
        let b = rng.gen_range(0..words.len());
        let mut letters = words[a].0.clone();
        letters.extend_from_slice(&words[b].0);
        let m = words[a].1.mul(&words[b].1);
        words.push((letters, m));
    }
    let mut terms = Vec::new();
    let mut theta = Matrix::zeros(field, n, n);
    for (letters, m) in words {
        let c = random_scalar(field, rng);
        if c.is_zero() {
            continue;
        }
        theta = theta.add(&m.scale(&c));
        terms.push(Word { letters, coeff: c });
    }
    (terms, theta)
}

/// Subspace of M spanned by the combinations `coords` of `sub`'s basis.
fn embed(sub: &Subspace, coords: &Subspace) -> Subspace {
    let field = sub.field();
    let vs: Vec<Vector> = coords
        .basis()
        .iter()
        .map(|c| {
            let mut v = vec![field.zero(); sub.ambient()];
            for (k, b) in c.iter().zip(sub.basis()) {
                if k.is_zero() {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(b) {
                    *x = &*x + &(k * y);
                }
            }
            v
        })
        .collect();
    Subspace::span(field, sub.ambient(), &vs)
}

/// Descends from the invariant subspace `start` to a simple submodule,
/// spending one unit of `budget` per random element.
pub fn find_simple(
    actions: &[Matrix],
    start: Subspace,
    rng: &mut ChaCha8Rng,
    budget: &mut usize,
) -> Option<SimpleSubmodule> {
    let field = start.field();
    let mut sub = start;
    'descend: loop {
        let k = sub.dim();
        if k == 0 {
            return None;
        }
        let restricted = restrict(actions, &sub);
        if k == 1 {
            return Some(SimpleSubmodule { subspace: sub, generator_actions: restricted, witness: None });
        }
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        let (theta_words, theta) = random_element(&restricted, rng);
        for f in irreducible_factors(&charpoly(&theta)) {
            let ft = f.eval_matrix(&theta);
            let ker = kernel(&ft);
            let v = random_combination(field, &ker, rng);
            let s = spin(field, k, &[v.clone()], &restricted);
            if s.dim() < k {
                sub = embed(&sub, &s);
                continue 'descend;
            }
            if Some(ker.len()) != f.degree() {
                continue;
            }
            let transposed: Vec<Matrix> = restricted.iter().map(Matrix::transpose).collect();
            let w = random_combination(field, &kernel(&ft.transpose()), rng);
            let dual = spin(field, k, &[w.clone()], &transposed);
            if dual.dim() < k {
                let rows = Matrix::from_rows(field, dual.basis().to_vec()).expect("equal lengths");
                let ann = Subspace::span(field, k, &kernel(&rows));
                sub = embed(&sub, &ann);
                continue 'descend;
            }
            let witness = NortonWitness {
                theta_words,
                theta,
                nullity: ker.len(),
                factor: f,
                kernel_vector: v,
                dual_vector: w,
            };
            return Some(SimpleSubmodule { subspace: sub, generator_actions: restricted, witness: Some(witness) });
        }
    }
}

fn cmp_scalar(a: &Scalar, b: &Scalar) -> Ordering {
    match (a, b) {
        (Scalar::Rational(x), Scalar::Rational(y)) => x.cmp(y),
        (Scalar::Prime(x), Scalar::Prime(y)) => x.value().cmp(&y.value()),
        _ => panic!("scalars from different fields"),
    }
}

/// Larger dimension first, then the lexicographically smaller RREF basis.
fn preference(a: &SimpleSubmodule, b: &SimpleSubmodule) -> Ordering {
    b.dim().cmp(&a.dim()).then_with(|| {
        for (u, v) in a.subspace.basis().iter().zip(b.subspace.basis()) {
            for (x, y) in u.iter().zip(v) {
                let c = cmp_scalar(x, y);
                if c != Ordering::Equal {
                    return c;
                }
            }
        }
        Ordering::Equal
    })
}

/// A simple submodule of dimension at least 2, if one turns up within
/// `budget` random elements.
pub fn simple_submodule(actions: &[Matrix], seed: u64, budget: usize) -> Option<SimpleSubmodule> {
    simple_submodule_where(actions, seed, budget, |_| true)
}

/// As [`simple_submodule`], considering only candidates accepted by `keep`.
pub fn simple_submodule_where(
    actions: &[Matrix],
    seed: u64,
    budget: usize,
    keep: impl Fn(&SimpleSubmodule) -> bool,
) -> Option<SimpleSubmodule> {
    let m = actions.first()?.rows();
    if m < 2 || is_scalar_action(actions) {
        return None;
    }
    let field = actions[0].field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut remaining = budget;
    let mut best: Option<SimpleSubmodule> = None;
    while remaining > 0 {
        let Some(s) = find_simple(actions, Subspace::full(field, m), &mut rng, &mut remaining) else {
            break;
        };
        if s.dim() < 2 || !keep(&s) {
            continue;
        }
        let full = s.dim() == m;
        if best.as_ref().map_or(true, |b| preference(&s, b) == Ordering::Less) {
            best = Some(s);
        }
        if full {
            break;
        }
    }
    best
}

/// Basis of all matrices commuting with every restricted action.
pub fn commutant(actions: &[Matrix], n: usize, field: FieldSpec) -> EndoRingInfo {
    let mut system = Matrix::zeros(field, actions.len() * n * n, n * n);
    for (gi, g) in actions.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                let row = gi * n * n + i * n + j;
                for k in 0..n {
                    // (Xg)_{ij} - (gX)_{ij}
                    let a = system.get(row, i * n + k) + g.get(k, j);
                    system.set(row, i * n + k, a);
                    let b = system.get(row, k * n + j) - g.get(i, k);
                    system.set(row, k * n + j, b);
                }
            }
        }
    }
    let basis: Vec<Matrix> = kernel(&system).into_iter().map(|v| Matrix::from_flat(field, n, v)).collect();
    EndoRingInfo { dim_over_k: basis.len(), basis }
}

/// End_A(N), required to be K itself.
pub fn endo_ring(n: &SimpleSubmodule) -> Result<EndoRingInfo> {
    let info = commutant(&n.generator_actions, n.dim(), n.subspace.field());
    if info.dim_over_k > 1 {
        return Err(Error::NonSplitSimple(info.dim_over_k));
    }
    Ok(info)
}
