//! Transversal, section and generator set U for one level, the surjection
//! onto A, rewriting into transversal-times-U form, and the recursion.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::algebra::{is_scalar_action, Algebra, AlgebraElement, Expr, Radical};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::idempotents::{lift_frame, CyclicBasis, Frame, FrameChecks};
use crate::linalg::{Matrix, Subspace, Vector};
use crate::meataxe::{commutant, endo_ring, simple_submodule_where, SimpleSubmodule, DEFAULT_BUDGET};
use crate::oracle::oracle_dim;

/// How τ(n_i) is chosen for the spin basis n_i of N = Ax.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransversalStrategy {
    /// The word in the level generators that produced n_i while spinning x.
    #[default]
    SpinWords,
    /// The lifted matrix unit e_{i1}, with τ(x) = 1.
    Frame,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyMode {
    #[default]
    Full,
    /// Skips the surjectivity rank and the chain containment.
    Fast,
}

#[derive(Clone, Debug)]
pub struct DecomposeConfig {
    pub seed: u64,
    pub max_levels: usize,
    pub budget: usize,
    pub transversal: TransversalStrategy,
    pub verify: VerifyMode,
    /// Compute dim A_ℓ with the oracle closure.
    pub terminal_dim: bool,
    pub section_retries: usize,
}

impl Default for DecomposeConfig {
    fn default() -> Self {
        DecomposeConfig {
            seed: 0,
            max_levels: 16,
            budget: DEFAULT_BUDGET,
            transversal: TransversalStrategy::default(),
            verify: VerifyMode::default(),
            terminal_dim: true,
            section_retries: 3,
        }
    }
}

/// A linear map τ: N → A with τ(m)·x = m and τ(x) = 1, stored by its values
/// on the spin basis of N.
#[derive(Clone, Debug)]
pub struct Transversal {
    pub strategy: TransversalStrategy,
    pub basis: CyclicBasis,
    /// τ(n_i); this list is T and starts with 1.
    pub images: Vec<AlgebraElement>,
}

impl Transversal {
    pub fn x(&self) -> &Vector {
        &self.basis.x
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn coords(&self, m: &[Scalar]) -> Option<Vector> {
        self.basis.coords(m)
    }

    pub fn tau(&self, m: &[Scalar]) -> Option<AlgebraElement> {
        let c = self.coords(m)?;
        Some(self.combine(&c))
    }

    fn combine(&self, c: &[Scalar]) -> AlgebraElement {
        let zero = self.images[0].sub(&self.images[0]);
        c.iter()
            .zip(&self.images)
            .filter(|(k, _)| !k.is_zero())
            .fold(zero, |acc, (k, t)| acc.add(&t.scale(k)))
    }

    /// τ(x) = 1 and τ(n_i)·x = n_i for every basis vector.
    pub fn check(&self) -> bool {
        let one = &self.images[0];
        let is_one = one.scalar_value().is_some_and(|s| s.is_one());
        is_one && self.images.iter().zip(&self.basis.vectors).all(|(t, n)| &t.apply(self.x()) == n)
    }
}

pub fn build_transversal(
    alg: &Algebra,
    basis: CyclicBasis,
    frame: &Frame,
    strategy: TransversalStrategy,
) -> Result<Transversal> {
    if frame.e[0].apply(&basis.x) != basis.x {
        return Err(Error::DegenerateBasePoint);
    }
    let images = match strategy {
        TransversalStrategy::SpinWords => {
            basis.words.iter().map(|w| alg.evaluate(&Expr::word(w.clone()))).collect()
        }
        TransversalStrategy::Frame => {
            let mut v = vec![alg.one()];
            v.extend(frame.units_col.iter().skip(1).cloned());
            v
        }
    };
    let tr = Transversal { strategy, basis, images };
    if !tr.check() {
        return Err(Error::VerificationFailed { level: 0, check: "transversal".into() });
    }
    Ok(tr)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SectionStrategy {
    InvertedTransversal,
    IdempotentCompletion,
}

/// σ(st), its inverse, and the defect α(st) = σ(st)⁻¹ − τ(stx).
#[derive(Clone, Debug)]
pub struct SectionValue {
    pub sigma: AlgebraElement,
    pub sigma_inv: AlgebraElement,
    pub defect: AlgebraElement,
    pub strategy: SectionStrategy,
}

/// One product st with s ∈ S and t ∈ T.
#[derive(Clone, Debug)]
pub struct SectionEntry {
    pub s: usize,
    pub t: usize,
    pub st: AlgebraElement,
    /// Coordinates of stx over the spin basis, that is, of τ(stx) over T.
    pub tau_coords: Vector,
    /// `None` exactly when stx = 0.
    pub value: Option<SectionValue>,
}

fn completion(alg: &Algebra, frame: &Frame, c: &[Scalar]) -> AlgebraElement {
    let base = alg.one().sub(&frame.e[0]);
    c.iter()
        .zip(&frame.units_col)
        .filter(|(k, _)| !k.is_zero())
        .fold(base, |acc, (k, u)| acc.add(&u.scale(k)))
}

fn section_value(
    alg: &Algebra,
    tr: &Transversal,
    frame: &Frame,
    y: &[Scalar],
    c: &[Scalar],
) -> Option<(AlgebraElement, AlgebraElement, SectionStrategy)> {
    let tau = tr.combine(c);
    if let Some(inv) = tau.inverse() {
        return Some((inv, tau, SectionStrategy::InvertedTransversal));
    }
    let g = if !c[0].is_zero() {
        completion(alg, frame, c)
    } else {
        let i = c.iter().position(|k| !k.is_zero())?;
        let p = alg
            .one()
            .sub(&frame.e[0])
            .sub(&frame.e[i])
            .add(&frame.units_row[i])
            .add(&frame.units_col[i]);
        let py = p.apply(y);
        let cp = tr.coords(&py)?;
        p.inverse()?.mul(&completion(alg, frame, &cp))
    };
    let sigma = g.inverse()?;
    Some((sigma, g, SectionStrategy::IdempotentCompletion))
}

pub fn build_section(
    alg: &Algebra,
    tr: &Transversal,
    frame: &Frame,
    level: usize,
) -> Result<Vec<SectionEntry>> {
    let x = tr.x();
    let mut out = Vec::new();
    for (si, s) in alg.generators().iter().enumerate() {
        for (ti, t) in tr.images.iter().enumerate() {
            let st = s.mul(t);
            let y = st.apply(x);
            let c = tr.coords(&y).ok_or(Error::VerificationFailed {
                level,
                check: "stx outside Ax".into(),
            })?;
            let value = if c.iter().all(Scalar::is_zero) {
                None
            } else {
                let (sigma, sigma_inv, strategy) =
                    section_value(alg, tr, frame, &y, &c).ok_or(Error::SectionSingular { s: si, t: ti })?;
                let defect = sigma_inv.sub(&tr.combine(&c));
                if defect.apply(x).iter().any(|v| !v.is_zero()) {
                    return Err(Error::SectionSingular { s: si, t: ti });
                }
                Some(SectionValue { sigma, sigma_inv, defect, strategy })
            };
            out.push(SectionEntry { s: si, t: ti, st, tau_coords: c, value });
        }
    }
    Ok(out)
}

/// Where an element of U came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Provenance {
    Unit,
    SigmaSt { s: usize, t: usize },
    Defect { s: usize, t: usize },
    AnnihilatingSt { s: usize, t: usize },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Unit => write!(f, "1"),
            Provenance::SigmaSt { s, t } => write!(f, "sigma(s{s} t{t}) s{s} t{t}"),
            Provenance::Defect { s, t } => write!(f, "sigma(s{s} t{t})^-1 - tau(s{s} t{t} x)"),
            Provenance::AnnihilatingSt { s, t } => write!(f, "s{s} t{t}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct UElement {
    pub element: AlgebraElement,
    pub provenance: Provenance,
}

/// U before and after pruning, with each raw element written as a scalar
/// multiple of a kept one.
#[derive(Clone, Debug)]
pub struct FssGenerators {
    pub raw: Vec<UElement>,
    pub kept: Vec<UElement>,
    /// `map[i] = Some((k, μ))` when `raw[i] = μ · kept[k]`, `None` when `raw[i] = 0`.
    pub map: Vec<Option<(usize, Scalar)>>,
    lookup: HashMap<Provenance, usize>,
}

impl FssGenerators {
    /// Kept index and scale of the raw element with this provenance.
    pub fn find(&self, p: &Provenance) -> Option<(usize, Scalar)> {
        self.map[*self.lookup.get(p)?].clone()
    }

    pub fn elements(&self) -> Vec<AlgebraElement> {
        self.kept.iter().map(|u| u.element.clone()).collect()
    }
}

pub fn fss_generators(alg: &Algebra, section: &[SectionEntry]) -> FssGenerators {
    let mut raw = vec![UElement { element: alg.one(), provenance: Provenance::Unit }];
    for e in section {
        if let Some(v) = &e.value {
            raw.push(UElement {
                element: v.sigma.mul(&e.st),
                provenance: Provenance::SigmaSt { s: e.s, t: e.t },
            });
        }
    }
    for e in section {
        if let Some(v) = &e.value {
            raw.push(UElement { element: v.defect.clone(), provenance: Provenance::Defect { s: e.s, t: e.t } });
        }
    }
    for e in section {
        if e.value.is_none() {
            raw.push(UElement { element: e.st.clone(), provenance: Provenance::AnnihilatingSt { s: e.s, t: e.t } });
        }
    }
    let mut kept: Vec<UElement> = Vec::new();
    let mut map = Vec::with_capacity(raw.len());
    for u in &raw {
        if u.element.is_zero() {
            map.push(None);
            continue;
        }
        match kept.iter().enumerate().find_map(|(k, v)| u.element.scalar_ratio(&v.element).map(|m| (k, m))) {
            Some(hit) => map.push(Some(hit)),
            None => {
                map.push(Some((kept.len(), alg.field().one())));
                kept.push(u.clone());
            }
        }
    }
    let lookup = raw.iter().enumerate().map(|(i, u)| (u.provenance, i)).collect();
    FssGenerators { raw, kept, map, lookup }
}

/// True iff span{τ(n_i)·b_j} is all of A, for b_j a basis of K⟨U⟩.
pub fn gamma_surjective(alg: &Algebra, tr: &Transversal, u_alg: &Algebra) -> bool {
    let d = alg.faithful_dim();
    let mut prods = Vec::new();
    for t in &tr.images {
        for b in &u_alg.closure().basis {
            prods.push(t.rep().mul(b).entries().to_vec());
        }
    }
    Subspace::span(alg.field(), d * d, &prods).dim() == alg.dim()
}

/// Outcome of the per-level invariant suite. Checks skipped in fast mode are `None`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelChecks {
    pub gamma_surjective: Option<bool>,
    pub u_membership: bool,
    pub section_identity: bool,
    pub section_defect: bool,
    pub chain_containment: Option<bool>,
    pub transversal: bool,
    pub frame_idempotents: bool,
    pub frame_sum: bool,
    pub frame_images: bool,
}

impl LevelChecks {
    pub fn all(&self) -> bool {
        self.gamma_surjective != Some(false)
            && self.chain_containment != Some(false)
            && self.u_membership
            && self.section_identity
            && self.section_defect
            && self.transversal
            && self.frame_idempotents
            && self.frame_sum
            && self.frame_images
    }

    /// Name of the first failing check.
    pub fn first_failure(&self) -> Option<&'static str> {
        [
            (self.gamma_surjective != Some(false), "gamma_surjective"),
            (self.u_membership, "u_membership"),
            (self.section_identity, "section_identity"),
            (self.section_defect, "section_defect"),
            (self.chain_containment != Some(false), "chain_containment"),
            (self.transversal, "transversal"),
            (self.frame_idempotents, "frame_idempotents"),
            (self.frame_sum, "frame_sum"),
            (self.frame_images, "frame_images"),
        ]
        .into_iter()
        .find(|(ok, _)| !ok)
        .map(|(_, name)| name)
    }
}

fn is_multiple_of(v: &[Scalar], x: &[Scalar]) -> bool {
    let Some(p) = x.iter().position(|s| !s.is_zero()) else {
        return v.iter().all(Scalar::is_zero);
    };
    let lambda = v[p].checked_div(&x[p]).expect("nonzero pivot");
    v.iter().zip(x).all(|(a, b)| *a == &lambda * b)
}

/// One step of the chain: A_i = K⟨S_i⟩ acting on M, its split simple N = A_i x,
/// and the data that maps N ⊗ K⟨U⟩ onto A_i.
#[derive(Clone, Debug)]
pub struct FssLevel {
    pub index: usize,
    pub algebra: Algebra,
    pub simple: SimpleSubmodule,
    pub radical_dim: usize,
    pub radical_power_dims: Vec<usize>,
    pub frame: Frame,
    pub frame_checks: FrameChecks,
    pub transversal: Transversal,
    pub section: Vec<SectionEntry>,
    pub u: FssGenerators,
    pub u_algebra_dim: usize,
    pub checks: LevelChecks,
}

impl FssLevel {
    pub fn cyclic_dim(&self) -> usize {
        self.transversal.dim()
    }

    pub fn x(&self) -> &Vector {
        self.transversal.x()
    }

    pub fn entry(&self, s: usize, t: usize) -> &SectionEntry {
        &self.section[s * self.transversal.dim() + t]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    /// Every generator acts on M as a scalar.
    ScalarAction,
    /// No split simple submodule of dimension at least 2 turned up within budget.
    NoProgress,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub levels: Vec<FssLevel>,
    pub terminal: Algebra,
    pub stop: StopReason,
    pub cyclic_dims: Vec<usize>,
    pub terminal_dim: Option<usize>,
    pub seed: u64,
}

/// Π dim M_i · dim A_ℓ, or the product of the cyclic dimensions alone when
/// dim A_ℓ is unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    Exact(BigUint),
    Parameterized { cyclic_product: BigUint },
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Exact(b) => write!(f, "{b}"),
            Bound::Parameterized { cyclic_product } => write!(f, "{cyclic_product}*dim(A_terminal)"),
        }
    }
}

pub fn dimension_bound(cyclic_dims: &[usize], terminal_dim: Option<usize>) -> Bound {
    let product = cyclic_dims.iter().fold(BigUint::from(1u32), |acc, &d| acc * BigUint::from(d));
    match terminal_dim {
        Some(t) => Bound::Exact(product * BigUint::from(t)),
        None => Bound::Parameterized { cyclic_product: product },
    }
}

impl Decomposition {
    pub fn bound(&self) -> Bound {
        dimension_bound(&self.cyclic_dims, self.terminal_dim)
    }
}

fn level_seed(seed: u64, level: usize, attempt: usize) -> u64 {
    seed ^ (level as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (attempt as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F)
}

fn build_level(
    index: usize,
    alg: Algebra,
    simple: SimpleSubmodule,
    rad: Radical,
    config: &DecomposeConfig,
) -> Result<(FssLevel, Algebra)> {
    endo_ring(&simple)?;
    let x = simple.subspace.basis()[0].clone();
    let basis = CyclicBasis::new(&x, &alg.generator_actions());
    if basis.dim() != simple.dim() {
        return Err(Error::VerificationFailed { level: index, check: "Ax differs from N".into() });
    }
    let frame = lift_frame(&alg, &rad, &basis)?;
    let frame_checks = frame.check(&basis);
    let transversal = build_transversal(&alg, basis, &frame, config.transversal)?;
    let section = build_section(&alg, &transversal, &frame, index)?;
    let u = fss_generators(&alg, &section);
    let names = (0..u.kept.len()).map(|k| format!("u{}_{k}", index + 1)).collect();
    let next = Algebra::from_elements(alg.field(), names, u.elements(), alg.faithful_dim(), alg.module_dim())?;

    let x = transversal.x();
    let full = config.verify == VerifyMode::Full;
    let u_membership = (0..next.dim()).all(|j| is_multiple_of(&next.basis_element(j).apply(x), x));
    let section_identity = section.iter().all(|e| match &e.value {
        Some(v) => &v.sigma.mul(&e.st).apply(x) == x,
        None => true,
    });
    let section_defect = section.iter().all(|e| match &e.value {
        Some(v) => {
            v.defect.apply(x).iter().all(Scalar::is_zero)
                && v.sigma.mul(&v.sigma_inv).scalar_value().is_some_and(|s| s.is_one())
        }
        None => e.st.apply(x).iter().all(Scalar::is_zero),
    });
    let checks = LevelChecks {
        gamma_surjective: full.then(|| gamma_surjective(&alg, &transversal, &next)),
        u_membership,
        section_identity,
        section_defect,
        chain_containment: full.then(|| next.closure().basis.iter().all(|b| alg.closure().contains(b))),
        transversal: transversal.check(),
        frame_idempotents: frame_checks.orthogonal_idempotents,
        frame_sum: frame_checks.sums_to_one,
        frame_images: frame_checks.diagonal_images && frame_checks.unit_images,
    };
    if let Some(check) = checks.first_failure() {
        return Err(Error::VerificationFailed { level: index, check: check.into() });
    }
    let level = FssLevel {
        index,
        u_algebra_dim: next.dim(),
        radical_dim: rad.dim(),
        radical_power_dims: rad.power_dims.clone(),
        algebra: alg,
        simple,
        frame,
        frame_checks,
        transversal,
        section,
        u,
        checks,
    };
    Ok((level, next))
}

/// Runs the recursion A_0 > A_1 > ⋯ until the generators act as scalars
/// or no split simple of dimension at least 2 can be found.
pub fn decompose(alg: &Algebra, config: &DecomposeConfig) -> Result<Decomposition> {
    let mut current = alg.clone();
    let mut levels = Vec::new();
    let stop = loop {
        let actions = current.generator_actions();
        if is_scalar_action(&actions) {
            break StopReason::ScalarAction;
        }
        let index = levels.len();
        let mut attempt = 0;
        let built = loop {
            let seed = level_seed(config.seed, index, attempt);
            let split = |s: &SimpleSubmodule| commutant(&s.generator_actions, s.dim(), s.subspace.field()).dim_over_k == 1;
            let Some(simple) = simple_submodule_where(&actions, seed, config.budget, split) else {
                break None;
            };
            if index == config.max_levels {
                return Err(Error::MaxDepthExceeded(config.max_levels));
            }
            let rad = current.radical()?;
            match build_level(index, current.clone(), simple, rad, config) {
                Err(Error::SectionSingular { .. }) if attempt < config.section_retries => attempt += 1,
                other => break Some(other?),
            }
        };
        let Some((level, next)) = built else {
            break StopReason::NoProgress;
        };
        levels.push(level);
        current = next;
    };
    let cyclic_dims = levels.iter().map(FssLevel::cyclic_dim).collect();
    let terminal_dim = config.terminal_dim.then(|| {
        let reps: Vec<Matrix> = current.generators().iter().map(|g| g.rep().clone()).collect();
        oracle_dim(current.field(), current.faithful_dim(), &reps)
    });
    Ok(Decomposition { levels, terminal: current, stop, cyclic_dims, terminal_dim, seed: config.seed })
}

/// `coeff · T[t] · U[us[0]] · U[us[1]] ⋯` with U the kept generators of the level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: Scalar,
    pub t: usize,
    pub us: Vec<usize>,
}

/// Rewrites a combination of words in the level generators S into
/// monomials t·u₁⋯u_k with t ∈ T and u_i ∈ U.
pub fn rewrite(expr: &Expr, level: &FssLevel, term_cap: usize) -> Result<Vec<Monomial>> {
    type Key = (Vec<usize>, usize, Vec<usize>);
    let mut terms: BTreeMap<Key, Scalar> = BTreeMap::new();
    let add = |map: &mut BTreeMap<Key, Scalar>, key: Key, c: Scalar| {
        let entry = map.entry(key).or_insert_with(|| c.field().zero());
        *entry = &*entry + &c;
    };
    for w in &expr.terms {
        add(&mut terms, (w.letters.clone(), 0, Vec::new()), w.coeff.clone());
    }
    let prepend = |k: usize, us: &[usize]| -> Vec<usize> {
        // kept generator 0 is the unit
        let mut v = if k == 0 { Vec::new() } else { vec![k] };
        v.extend_from_slice(us);
        v
    };
    while terms.keys().any(|(rest, _, _)| !rest.is_empty()) {
        let mut next = BTreeMap::new();
        for ((rest, t, us), c) in terms {
            if c.is_zero() {
                continue;
            }
            let Some((&s, head)) = rest.split_last() else {
                add(&mut next, (rest, t, us), c);
                continue;
            };
            let entry = level.entry(s, t);
            match &entry.value {
                None => {
                    if let Some((k, mu)) = level.u.find(&Provenance::AnnihilatingSt { s, t }) {
                        add(&mut next, (head.to_vec(), 0, prepend(k, &us)), &c * &mu);
                    }
                }
                Some(_) => {
                    let (ku, mu) = level.u.find(&Provenance::SigmaSt { s, t }).expect("σ(st)st is a unit");
                    let tail = prepend(ku, &us);
                    let cu = &c * &mu;
                    for (k, lambda) in entry.tau_coords.iter().enumerate() {
                        if !lambda.is_zero() {
                            add(&mut next, (head.to_vec(), k, tail.clone()), &cu * lambda);
                        }
                    }
                    if let Some((ka, ma)) = level.u.find(&Provenance::Defect { s, t }) {
                        add(&mut next, (head.to_vec(), 0, prepend(ka, &tail)), &cu * &ma);
                    }
                }
            }
            if next.len() > term_cap {
                return Err(Error::TermBlowup(term_cap));
            }
        }
        terms = next;
    }
    Ok(terms
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((_, t, us), coeff)| Monomial { coeff, t, us })
        .collect())
}

/// Faithful image of a sum of monomials.
pub fn evaluate_monomials(level: &FssLevel, monos: &[Monomial]) -> Matrix {
    let alg = &level.algebra;
    let d = alg.faithful_dim();
    monos.iter().fold(Matrix::zeros(alg.field(), d, d), |acc, m| {
        let mut p = level.transversal.images[m.t].rep().clone();
        for &k in &m.us {
            p = p.mul(level.u.kept[k].element.rep());
        }
        acc.add(&p.scale(&m.coeff))
    })
}
