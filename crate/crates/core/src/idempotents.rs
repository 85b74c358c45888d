//! Matrix units in the image of A on a split simple N, an exact frame of
//! A/J(A) and its lift to A.

use num_bigint::BigInt;

use crate::algebra::{Algebra, AlgebraElement, Expr, Radical};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::{algebra_closure, kernel, spin_tracked, Matrix, SpanIndex, Subspace, Vector, Word};

/// The basis n_i = w_i · x of N = Ax obtained by spinning x, with x first.
#[derive(Clone, Debug)]
pub struct CyclicBasis {
    pub x: Vector,
    pub vectors: Vec<Vector>,
    pub words: Vec<Word>,
    index: SpanIndex,
}

impl CyclicBasis {
    pub fn new(x: &[Scalar], actions: &[Matrix]) -> Self {
        let spun = spin_tracked(x, actions);
        let field = actions.first().map_or_else(|| x[0].field(), Matrix::field);
        let (index, _) = SpanIndex::from_vectors(field, x.len(), &spun.vectors);
        CyclicBasis { x: x.to_vec(), vectors: spun.vectors, words: spun.words, index }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Coordinates over `vectors`, or `None` outside Ax.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vector> {
        self.index.express(v)
    }

    /// The matrix of `action` on Ax in this basis.
    pub fn restrict(&self, action: &Matrix) -> Matrix {
        let cols: Vec<Vector> = self
            .vectors
            .iter()
            .map(|v| self.coords(&action.mul_vec(v)).expect("Ax is invariant"))
            .collect();
        Matrix::from_columns(action.field(), self.dim(), &cols)
    }
}

/// Pairwise orthogonal idempotents e_1..e_n lifting E_11..E_nn, their
/// complement e0, and the Pierce units e_{i1}, e_{1i}.
#[derive(Clone, Debug)]
pub struct Frame {
    pub e: Vec<AlgebraElement>,
    pub e0: AlgebraElement,
    pub units_col: Vec<AlgebraElement>,
    pub units_row: Vec<AlgebraElement>,
}

/// Outcome of the frame invariant checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrameChecks {
    pub orthogonal_idempotents: bool,
    pub sums_to_one: bool,
    pub diagonal_images: bool,
    pub unit_images: bool,
}

impl FrameChecks {
    pub fn all(&self) -> bool {
        self.orthogonal_idempotents && self.sums_to_one && self.diagonal_images && self.unit_images
    }
}

impl Frame {
    pub fn n(&self) -> usize {
        self.e.len()
    }

    pub fn check(&self, basis: &CyclicBasis) -> FrameChecks {
        let n = self.n();
        let field = self.e0.field();
        let mut all = vec![self.e0.clone()];
        all.extend(self.e.iter().cloned());
        let zero = self.e0.sub(&self.e0);
        let orthogonal_idempotents = all.iter().enumerate().all(|(i, a)| {
            all.iter()
                .enumerate()
                .all(|(j, b)| a.mul(b) == if i == j { a.clone() } else { zero.clone() })
        });
        let one = all.iter().skip(1).fold(self.e0.clone(), |acc, e| acc.add(e));
        let sums_to_one = one.rep() == &Matrix::identity(field, one.rep().rows())
            && one.action() == &Matrix::identity(field, one.action().rows());
        let diagonal_images =
            (0..n).all(|i| basis.restrict(self.e[i].action()) == Matrix::unit(field, n, i, i));
        let unit_images = (0..n).all(|i| {
            basis.restrict(self.units_col[i].action()) == Matrix::unit(field, n, i, 0)
                && basis.restrict(self.units_row[i].action()) == Matrix::unit(field, n, 0, i)
        });
        FrameChecks { orthogonal_idempotents, sums_to_one, diagonal_images, unit_images }
    }
}

/// Expressions in the generators for every matrix unit E_ij of the image
/// of A in End(N), given the generator actions on N.
pub fn matrix_units_in_image(restricted: &[Matrix], n: usize) -> Result<Vec<Vec<Expr>>> {
    let field = restricted.first().map_or(crate::FieldSpec::Rational, Matrix::field);
    let closure = algebra_closure(field, n, restricted)?;
    if closure.dim() < n * n {
        return Err(Error::ImageNotFull { found: closure.dim(), expected: n * n });
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let c = closure.express(&Matrix::unit(field, n, i, j)).expect("closure is all of M_n");
            let terms = c
                .iter()
                .zip(&closure.words)
                .filter(|(k, _)| !k.is_zero())
                .map(|(k, w)| Word { letters: w.letters.clone(), coeff: k.clone() })
                .collect();
            row.push(Expr { terms });
        }
        out.push(row);
    }
    Ok(out)
}

/// Kernel of ρ_N as a subspace of algebra coordinates.
fn kernel_on(alg: &Algebra, basis: &CyclicBasis) -> Subspace {
    let cols: Vec<Vector> = (0..alg.dim())
        .map(|k| basis.restrict(alg.basis_element(k).action()).entries().to_vec())
        .collect();
    let n = basis.dim();
    let m = Matrix::from_columns(alg.field(), n * n, &cols);
    Subspace::span(alg.field(), alg.dim(), &kernel(&m))
}

/// The identity u of the ideal I = ker(Ā → End N) in Ā = A/J, as a
/// representative in A.
pub fn ideal_identity(alg: &Algebra, rad: &Radical, basis: &CyclicBasis) -> Result<AlgebraElement> {
    let field = alg.field();
    let ker = kernel_on(alg, basis);
    let gens: Vec<AlgebraElement> = ker.basis().iter().map(|c| alg.element_from_coords(c)).collect();
    let r = gens.len();
    if r == 0 {
        return Ok(alg.zero());
    }
    let modj = |a: &AlgebraElement| -> Result<Vector> { Ok(rad.subspace.reduce(&alg.element_coords(a)?)) };
    let d = alg.dim();
    // unknowns λ_l with u = Σ λ_l k_l; equations u·k_j ≡ k_j and k_j·u ≡ k_j mod J
    let mut cols: Vec<Vector> = vec![Vec::with_capacity(2 * r * d); r];
    let mut rhs: Vector = Vec::with_capacity(2 * r * d);
    for kj in &gens {
        let target = modj(kj)?;
        for side in 0..2 {
            for (l, kl) in gens.iter().enumerate() {
                let prod = if side == 0 { kl.mul(kj) } else { kj.mul(kl) };
                cols[l].extend(modj(&prod)?);
            }
            rhs.extend(target.iter().cloned());
        }
    }
    let system = Matrix::from_columns(field, rhs.len(), &cols);
    let lambda = crate::linalg::solve(&system, &rhs)?.ok_or(Error::NoIdealIdentity)?;
    Ok(gens.iter().zip(&lambda).filter(|(_, c)| !c.is_zero()).fold(alg.zero(), |acc, (k, c)| acc.add(&k.scale(c))))
}

/// Corrects preimages of the diagonal units E_ii to idempotents modulo J.
pub fn frame_mod_radical(
    alg: &Algebra,
    rad: &Radical,
    basis: &CyclicBasis,
    diagonal: &[AlgebraElement],
) -> Result<Vec<AlgebraElement>> {
    let u = ideal_identity(alg, rad, basis)?;
    let w = alg.one().sub(&u);
    Ok(diagonal.iter().map(|a| w.mul(a).mul(&w)).collect())
}

fn binomial(n: usize, k: usize) -> BigInt {
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// An exact idempotent ê with ê − e ∈ J, given e² − e ∈ J.
pub fn lift_idempotent(alg: &Algebra, e: &AlgebraElement, rad: &Radical) -> Result<AlgebraElement> {
    let field = alg.field();
    let defect = e.mul(e).sub(e);
    if !rad.contains(&alg.element_coords(&defect)?) {
        return Err(Error::NotNilpotentDefect);
    }
    // smallest n with defect^n = 0
    let mut n = 1;
    let mut power = defect.clone();
    while !power.is_zero() {
        if n > rad.dim() + 1 {
            return Err(Error::NotNilpotentDefect);
        }
        power = power.mul(&defect);
        n += 1;
    }
    let one = alg.one();
    let f = one.sub(e);
    // Σ_{j<n} C(2n-1, j) e^{2n-1-j} (1-e)^j
    let mut epow = vec![one.clone()];
    for k in 1..2 * n {
        epow.push(epow[k - 1].mul(e));
    }
    let mut fpow = one.clone();
    let mut hat = alg.zero();
    for j in 0..n {
        let c = field.from_bigint(&binomial(2 * n - 1, j));
        hat = hat.add(&epow[2 * n - 1 - j].mul(&fpow).scale(&c));
        fpow = fpow.mul(&f);
    }
    let rounds = (usize::BITS - (n - 1).leading_zeros()) as usize + 2;
    let two = field.from_i64(2);
    let three = field.from_i64(3);
    for _ in 0..=rounds {
        let sq = hat.mul(&hat);
        if sq == hat {
            break;
        }
        hat = sq.scale(&three).sub(&sq.mul(&hat).scale(&two));
    }
    if hat.mul(&hat) != hat || !rad.contains(&alg.element_coords(&hat.sub(e))?) {
        return Err(Error::LiftDiverged);
    }
    Ok(hat)
}

/// Lifts the matrix units of End(N) to a frame of A.
pub fn lift_frame(alg: &Algebra, rad: &Radical, basis: &CyclicBasis) -> Result<Frame> {
    let n = basis.dim();
    let restricted: Vec<Matrix> = alg.generators().iter().map(|g| basis.restrict(g.action())).collect();
    let units = matrix_units_in_image(&restricted, n)?;
    let diagonal: Vec<AlgebraElement> = (0..n).map(|i| alg.evaluate(&units[i][i])).collect();
    let candidates = frame_mod_radical(alg, rad, basis, &diagonal)?;
    let one = alg.one();
    let mut rest = one.clone();
    let mut e: Vec<AlgebraElement> = Vec::with_capacity(n);
    for c in &candidates {
        let c = rest.mul(c).mul(&rest);
        let hat = lift_idempotent(alg, &c, rad)?;
        rest = rest.sub(&hat);
        e.push(hat);
    }
    let mut units_col = vec![e[0].clone()];
    let mut units_row = vec![e[0].clone()];
    for i in 1..n {
        units_col.push(e[i].mul(&alg.evaluate(&units[i][0])).mul(&e[0]));
        units_row.push(e[0].mul(&alg.evaluate(&units[0][i])).mul(&e[i]));
    }
    Ok(Frame { e, e0: rest, units_col, units_row })
}
