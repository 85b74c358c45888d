//! The black-box algebra: generators given by a faithful matrix
//! representation together with their action on a module M.
//!
//! Elements carry both images, so products and sums never need to go back
//! through coordinates. Equality is always decided on the faithful matrix.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{algebra_closure, kernel, Closure, Matrix, Subspace, Vector, Word};

/// A formal K-combination of words over the generator labels in scope.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Expr {
    pub terms: Vec<Word>,
}

impl Expr {
    pub fn word(w: Word) -> Self {
        Expr { terms: vec![w] }
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms.iter().map(|w| w.render(names)).collect::<Vec<_>>().join(" + ")
    }

    pub fn evaluate(&self, gens: &[Matrix], field: FieldSpec, n: usize) -> Matrix {
        self.terms
            .iter()
            .fold(Matrix::zeros(field, n, n), |acc, w| acc.add(&w.evaluate(gens, n)))
    }
}

/// An element of A, stored through its faithful image `rep` and its module image `action`.
#[derive(Clone)]
pub struct AlgebraElement {
    rep: Matrix,
    action: Matrix,
    expr: Option<Expr>,
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgebraElement").field("rep", &self.rep).field("action", &self.action).finish()
    }
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.rep == other.rep
    }
}

impl Eq for AlgebraElement {}

impl AlgebraElement {
    pub fn new(rep: Matrix, action: Matrix) -> Self {
        AlgebraElement { rep, action, expr: None }
    }

    pub fn with_expr(mut self, expr: Expr) -> Self {
        self.expr = Some(expr);
        self
    }

    pub fn one(field: FieldSpec, faithful_dim: usize, module_dim: usize) -> Self {
        AlgebraElement::new(Matrix::identity(field, faithful_dim), Matrix::identity(field, module_dim))
            .with_expr(Expr::word(Word::identity(field)))
    }

    pub fn scalar(field: FieldSpec, faithful_dim: usize, module_dim: usize, s: Scalar) -> Self {
        AlgebraElement::new(
            Matrix::scalar(field, faithful_dim, s.clone()),
            Matrix::scalar(field, module_dim, s),
        )
    }

    pub fn rep(&self) -> &Matrix {
        &self.rep
    }

    pub fn action(&self) -> &Matrix {
        &self.action
    }

    pub fn expr(&self) -> Option<&Expr> {
        self.expr.as_ref()
    }

    pub fn field(&self) -> FieldSpec {
        self.rep.field()
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn mul(&self, other: &AlgebraElement) -> AlgebraElement {
        let expr = match (&self.expr, &other.expr) {
            (Some(a), Some(b)) if a.terms.len() * b.terms.len() <= 64 => {
                let mut terms = Vec::new();
                for x in &a.terms {
                    for y in &b.terms {
                        let mut letters = x.letters.clone();
                        letters.extend_from_slice(&y.letters);
                        terms.push(Word { letters, coeff: &x.coeff * &y.coeff });
                    }
                }
                Some(Expr { terms })
            }
            _ => None,
        };
        AlgebraElement { rep: self.rep.mul(&other.rep), action: self.action.mul(&other.action), expr }
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let expr = match (&self.expr, &other.expr) {
            (Some(a), Some(b)) => {
                let mut terms = a.terms.clone();
                terms.extend(b.terms.iter().cloned());
                Some(Expr { terms })
            }
            _ => None,
        };
        AlgebraElement { rep: self.rep.add(&other.rep), action: self.action.add(&other.action), expr }
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> AlgebraElement {
        let expr = self.expr.as_ref().map(|e| Expr {
            terms: e
                .terms
                .iter()
                .map(|w| Word { letters: w.letters.clone(), coeff: &w.coeff * s })
                .collect(),
        });
        AlgebraElement { rep: self.rep.scale(s), action: self.action.scale(s), expr }
    }

    pub fn neg(&self) -> AlgebraElement {
        self.scale(&-self.field().one())
    }

    /// Inverse in A. A unital subalgebra of a matrix algebra contains the
    /// inverses of its invertible elements, so the faithful inverse decides.
    pub fn inverse(&self) -> Option<AlgebraElement> {
        let rep = self.rep.inverse()?;
        let action = self.action.inverse()?;
        Some(AlgebraElement { rep, action, expr: None })
    }

    /// Module action on a vector of M.
    pub fn apply(&self, x: &[Scalar]) -> Vector {
        self.action.mul_vec(x)
    }

    /// `Some(λ)` with `self = λ·other` (on the faithful image), when `other` is nonzero.
    pub fn scalar_ratio(&self, other: &AlgebraElement) -> Option<Scalar> {
        let pos = other.rep.entries().iter().position(|s| !s.is_zero())?;
        let lambda = self.rep.entries()[pos].checked_div(&other.rep.entries()[pos]).ok()?;
        (other.rep.scale(&lambda) == self.rep).then_some(lambda)
    }

    /// `Some(λ)` when this element is λ·1.
    pub fn scalar_value(&self) -> Option<Scalar> {
        self.rep.scalar_value()
    }
}

/// The finite-dimensional algebra A = K⟨S⟩ together with its module M.
#[derive(Clone, Debug)]
pub struct Algebra {
    field: FieldSpec,
    names: Vec<String>,
    generators: Vec<AlgebraElement>,
    closure: Closure,
    module_basis: Vec<Matrix>,
    faithful_dim: usize,
    module_dim: usize,
}

impl Algebra {
    /// Builds the algebra from raw generator images and validates it.
    pub fn build(
        field: FieldSpec,
        names: Vec<String>,
        faithful: Vec<Matrix>,
        module: Vec<Matrix>,
    ) -> Result<Algebra> {
        if faithful.len() != module.len() || names.len() != faithful.len() {
            return Err(Error::InconsistentDims(format!(
                "{} names, {} faithful matrices, {} module matrices",
                names.len(),
                faithful.len(),
                module.len()
            )));
        }
        if faithful.is_empty() {
            return Err(Error::InconsistentDims("no generators".into()));
        }
        let d = faithful[0].rows();
        let m = module[0].rows();
        for (i, (f, a)) in faithful.iter().zip(&module).enumerate() {
            if f.rows() != d || f.cols() != d {
                return Err(Error::InconsistentDims(format!(
                    "faithful matrix of {} is {}x{}, expected {d}x{d}",
                    names[i],
                    f.rows(),
                    f.cols()
                )));
            }
            if a.rows() != m || a.cols() != m {
                return Err(Error::InconsistentDims(format!(
                    "module matrix of {} is {}x{}, expected {m}x{m}",
                    names[i],
                    a.rows(),
                    a.cols()
                )));
            }
            if f.field() != field || a.field() != field {
                return Err(Error::MixedFields);
            }
        }
        let generators = faithful
            .into_iter()
            .zip(module)
            .enumerate()
            .map(|(i, (f, a))| AlgebraElement::new(f, a).with_expr(Expr::word(Word::letter(field, i))))
            .collect();
        let alg = Algebra::from_elements(field, names, generators, d, m)?;
        if let FieldSpec::Prime(p) = field {
            let needed = alg.dim().max(d);
            if (p as u128) <= needed as u128 {
                return Err(Error::FieldTooSmall { p, needed });
            }
        }
        alg.check_homomorphism()?;
        Ok(alg)
    }

    /// The subalgebra generated by `generators`, which are already known to
    /// carry consistent faithful and module images.
    pub fn from_elements(
        field: FieldSpec,
        names: Vec<String>,
        generators: Vec<AlgebraElement>,
        faithful_dim: usize,
        module_dim: usize,
    ) -> Result<Algebra> {
        let reps: Vec<Matrix> = generators.iter().map(|g| g.rep.clone()).collect();
        let actions: Vec<Matrix> = generators.iter().map(|g| g.action.clone()).collect();
        let closure = algebra_closure(field, faithful_dim, &reps)?;
        let module_basis = closure.words.iter().map(|w| w.evaluate(&actions, module_dim)).collect();
        Ok(Algebra { field, names, generators, closure, module_basis, faithful_dim, module_dim })
    }

    /// Verifies that the linear map basis_i ↦ module_basis_i intertwines left
    /// multiplication by every generator. Since the basis is spanned by
    /// words, this proves the module action factors through A.
    pub fn check_homomorphism(&self) -> Result<()> {
        for (gi, g) in self.generators.iter().enumerate() {
            for (j, b) in self.closure.basis.iter().enumerate() {
                let prod = g.rep.mul(b);
                let coords = self.coords(&prod).ok_or(Error::NotInAlgebra)?;
                let image = self.action_from_coords(&coords);
                if image != g.action.mul(&self.module_basis[j]) {
                    return Err(Error::NotAHomomorphism(format!(
                        "generator {} times basis word {}",
                        self.names[gi],
                        self.closure.words[j].render(&self.names)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generators(&self) -> &[AlgebraElement] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.closure.dim()
    }

    pub fn faithful_dim(&self) -> usize {
        self.faithful_dim
    }

    pub fn module_dim(&self) -> usize {
        self.module_dim
    }

    pub fn closure(&self) -> &Closure {
        &self.closure
    }

    pub fn words(&self) -> &[Word] {
        &self.closure.words
    }

    pub fn generator_actions(&self) -> Vec<Matrix> {
        self.generators.iter().map(|g| g.action.clone()).collect()
    }

    pub fn one(&self) -> AlgebraElement {
        AlgebraElement::one(self.field, self.faithful_dim, self.module_dim)
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement::scalar(self.field, self.faithful_dim, self.module_dim, self.field.zero())
    }

    pub fn scalar(&self, s: Scalar) -> AlgebraElement {
        AlgebraElement::scalar(self.field, self.faithful_dim, self.module_dim, s)
    }

    pub fn basis_element(&self, i: usize) -> AlgebraElement {
        AlgebraElement::new(self.closure.basis[i].clone(), self.module_basis[i].clone())
            .with_expr(Expr::word(self.closure.words[i].clone()))
    }

    /// Coordinates of a faithful matrix over the algebra basis.
    pub fn coords(&self, rep: &Matrix) -> Option<Vector> {
        self.closure.express(rep)
    }

    pub fn element_coords(&self, a: &AlgebraElement) -> Result<Vector> {
        self.coords(&a.rep).ok_or(Error::NotInAlgebra)
    }

    pub fn contains(&self, a: &AlgebraElement) -> bool {
        self.closure.contains(&a.rep)
    }

    fn action_from_coords(&self, c: &[Scalar]) -> Matrix {
        let m = self.module_dim;
        c.iter()
            .zip(&self.module_basis)
            .filter(|(k, _)| !k.is_zero())
            .fold(Matrix::zeros(self.field, m, m), |acc, (k, b)| acc.add(&b.scale(k)))
    }

    pub fn element_from_coords(&self, c: &[Scalar]) -> AlgebraElement {
        let d = self.faithful_dim;
        let rep = c
            .iter()
            .zip(&self.closure.basis)
            .filter(|(k, _)| !k.is_zero())
            .fold(Matrix::zeros(self.field, d, d), |acc, (k, b)| acc.add(&b.scale(k)));
        AlgebraElement::new(rep, self.action_from_coords(c))
    }

    /// Evaluates a word combination in this algebra's generators.
    pub fn evaluate(&self, expr: &Expr) -> AlgebraElement {
        let mut acc = self.zero();
        for w in &expr.terms {
            let t = w.letters.iter().fold(self.one(), |t, &l| t.mul(&self.generators[l]));
            acc = acc.add(&t.scale(&w.coeff));
        }
        acc.with_expr(expr.clone())
    }

    /// The element as a K-combination of basis words in this algebra's generators.
    pub fn express(&self, a: &AlgebraElement) -> Option<Expr> {
        let c = self.coords(&a.rep)?;
        let terms = c
            .iter()
            .zip(&self.closure.words)
            .filter(|(k, _)| !k.is_zero())
            .map(|(k, w)| Word { letters: w.letters.clone(), coeff: k.clone() })
            .collect();
        Some(Expr { terms })
    }

    /// Ann_A(x) as a subspace of coordinate vectors over the algebra basis.
    pub fn annihilator(&self, x: &[Scalar]) -> Subspace {
        let cols: Vec<Vector> = self.module_basis.iter().map(|b| b.mul_vec(x)).collect();
        let eval = Matrix::from_columns(self.field, self.module_dim, &cols);
        Subspace::span(self.field, self.dim(), &kernel(&eval))
    }

    /// Jacobson radical via the trace form of the faithful representation.
    pub fn radical(&self) -> Result<Radical> {
        let n = self.dim();
        let basis = &self.closure.basis;
        let mut gram = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in i..n {
                let t = basis[i].mul(&basis[j]).trace();
                gram.set(i, j, t.clone());
                gram.set(j, i, t);
            }
        }
        let subspace = Subspace::span(self.field, n, &kernel(&gram));
        let mut power_dims = vec![subspace.dim()];
        let mut power = subspace.clone();
        let radical_elems: Vec<AlgebraElement> =
            subspace.basis().iter().map(|c| self.element_from_coords(c)).collect();
        while power.dim() > 0 {
            if power_dims.len() > subspace.dim() + 1 {
                return Err(Error::RadicalNotNilpotent);
            }
            let mut prods = Vec::new();
            for a in power.basis() {
                let a = self.element_from_coords(a);
                for b in &radical_elems {
                    prods.push(self.element_coords(&a.mul(b))?);
                }
            }
            power = Subspace::span(self.field, n, &prods);
            power_dims.push(power.dim());
        }
        Ok(Radical { subspace, power_dims })
    }
}

/// J(A) in algebra coordinates, with the dimensions of J, J², … ending in 0
/// as a nilpotency certificate.
#[derive(Clone, Debug)]
pub struct Radical {
    pub subspace: Subspace,
    pub power_dims: Vec<usize>,
}

impl Radical {
    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    pub fn nilpotency_index(&self) -> usize {
        self.power_dims.len() - 1
    }

    pub fn contains(&self, coords: &[Scalar]) -> bool {
        self.subspace.contains(coords)
    }
}

/// True iff every action matrix is a scalar multiple of the identity.
pub fn is_scalar_action(actions: &[Matrix]) -> bool {
    actions.iter().all(|a| a.scalar_value().is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::perm_group_fixture;
    use crate::perm::Permutation;

    const Q: FieldSpec = FieldSpec::Rational;

    fn d8() -> Algebra {
        let r = Permutation::from_cycles(4, &[vec![0, 1, 2, 3]]).unwrap();
        let s = Permutation::from_cycles(4, &[vec![0, 2]]).unwrap();
        let fx = perm_group_fixture(Q, &[r, s], 4).unwrap();
        let v = vec![
            Matrix::from_i64(Q, &[&[0, -1], &[1, 0]]),
            Matrix::from_i64(Q, &[&[1, 0], &[0, -1]]),
        ];
        Algebra::build(Q, vec!["r".into(), "s".into()], fx.faithful, v).unwrap()
    }

    fn upper_triangular_2() -> Algebra {
        let gens = vec![
            Matrix::unit(Q, 2, 0, 0),
            Matrix::unit(Q, 2, 0, 1),
            Matrix::unit(Q, 2, 1, 1),
        ];
        Algebra::build(Q, vec!["e11".into(), "e12".into(), "e22".into()], gens.clone(), gens).unwrap()
    }

    #[test]
    fn d8_dimension() {
        assert_eq!(d8().dim(), 8);
    }

    #[test]
    fn trivial_algebra() {
        let a = Algebra::build(Q, vec!["one".into()], vec![Matrix::identity(Q, 1)], vec![Matrix::identity(Q, 1)])
            .unwrap();
        assert_eq!(a.dim(), 1);
        assert_eq!(a.radical().unwrap().dim(), 0);
    }

    #[test]
    fn mismatched_generator_counts() {
        let e = Algebra::build(Q, vec!["a".into()], vec![Matrix::identity(Q, 2)], vec![]).unwrap_err();
        assert!(matches!(e, Error::InconsistentDims(_)));
        let e = Algebra::build(
            Q,
            vec!["a".into()],
            vec![Matrix::identity(Q, 2)],
            vec![Matrix::zeros(Q, 2, 3)],
        )
        .unwrap_err();
        assert!(matches!(e, Error::InconsistentDims(_)));
    }

    #[test]
    fn rejects_non_homomorphism() {
        // faithful: a nilpotent Jordan block, module: the identity
        let e = Algebra::build(
            Q,
            vec!["n".into()],
            vec![Matrix::from_i64(Q, &[&[0, 1], &[0, 0]])],
            vec![Matrix::identity(Q, 1)],
        )
        .unwrap_err();
        assert!(matches!(e, Error::NotAHomomorphism(_)));
    }

    #[test]
    fn small_prime_rejected() {
        let f = FieldSpec::prime(3).unwrap();
        let g = Matrix::from_i64(f, &[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]);
        let e = Algebra::build(f, vec!["c".into()], vec![g.clone()], vec![g]).unwrap_err();
        assert!(matches!(e, Error::FieldTooSmall { p: 3, needed: 3 }));
    }

    #[test]
    fn annihilator_examples() {
        let a = d8();
        assert_eq!(a.annihilator(&[Q.zero(), Q.zero()]).dim(), 8);
        let ann = a.annihilator(&[Q.one(), Q.zero()]);
        assert_eq!(ann.dim(), 6);
        for c in ann.basis() {
            assert!(a.element_from_coords(c).apply(&[Q.one(), Q.zero()]).iter().all(Scalar::is_zero));
        }
        // faithful simple module: M_2 acting on Q^2 from the D8 2-dim image
        let v = a.generator_actions();
        let m2 = Algebra::build(Q, vec!["r".into(), "s".into()], v.clone(), v).unwrap();
        assert_eq!(m2.dim(), 4);
        assert_eq!(m2.annihilator(&[Q.one(), Q.zero()]).dim(), 2);
    }

    #[test]
    fn radical_examples() {
        assert_eq!(d8().radical().unwrap().dim(), 0);
        let ut = upper_triangular_2();
        assert_eq!(ut.dim(), 3);
        let rad = ut.radical().unwrap();
        assert_eq!(rad.dim(), 1);
        let j = ut.element_from_coords(&rad.subspace.basis()[0]);
        assert!(j.scalar_ratio(&ut.generators()[1]).is_some());
        assert_eq!(rad.power_dims, vec![1, 0]);
        assert_eq!(rad.nilpotency_index(), 1);
    }

    #[test]
    fn radical_is_an_ideal() {
        let f = Q;
        let gens: Vec<Matrix> = [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2)]
            .iter()
            .map(|&(i, j)| Matrix::unit(f, 3, i, j))
            .collect();
        let names = (0..gens.len()).map(|i| format!("g{i}")).collect();
        let a = Algebra::build(f, names, gens.clone(), gens).unwrap();
        assert_eq!(a.dim(), 6);
        let rad = a.radical().unwrap();
        assert_eq!(rad.dim(), 3);
        assert_eq!(rad.power_dims, vec![3, 1, 0]);
        for c in rad.subspace.basis() {
            let z = a.element_from_coords(c);
            for g in a.generators() {
                assert!(rad.contains(&a.element_coords(&g.mul(&z)).unwrap()));
                assert!(rad.contains(&a.element_coords(&z.mul(g)).unwrap()));
            }
        }
    }

    #[test]
    fn scalar_action_examples() {
        let two = Matrix::scalar(Q, 3, Q.from_i64(2));
        let four = Matrix::scalar(Q, 3, Q.from_i64(4));
        assert!(is_scalar_action(&[two, four]));
        assert!(!is_scalar_action(&[Matrix::from_i64(Q, &[&[1, 0], &[0, -1]])]));
        assert!(is_scalar_action(&[]));
    }

    #[test]
    fn express_round_trip() {
        let a = d8();
        let x = a.generators()[0].mul(&a.generators()[1]).add(&a.one());
        let e = a.express(&x).unwrap();
        let reps: Vec<Matrix> = a.generators().iter().map(|g| g.rep().clone()).collect();
        assert_eq!(&e.evaluate(&reps, Q, 8), x.rep());
    }
}
