//! Factorization into distinct monic irreducibles.
//!
//! Over GF(p): square-free decomposition, distinct-degree splitting and
//! Cantor-Zassenhaus equal-degree splitting. Over Q: the primitive integer
//! polynomial is factored modulo a good prime, Hensel-lifted, and true
//! factors are recombined from subsets of the lifted modular factors.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{is_prime, FieldSpec, Scalar};
use crate::poly::Poly;

/// Distinct monic irreducible factors of `f`, sorted by degree and then by
/// coefficients. Multiplicities are discarded.
pub fn irreducible_factors(f: &Poly) -> Vec<Poly> {
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let field = f.field();
    let mut out = match field {
        FieldSpec::Prime(p) => {
            let fp = FpPoly::from_poly(f, p).monic();
            factor_mod_p(&fp)
                .into_iter()
                .map(|g| g.to_poly(field))
                .collect::<Vec<_>>()
        }
        FieldSpec::Rational => factor_over_q(f),
    };
    out.sort_by(|a, b| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| canonical_key(a).cmp(&canonical_key(b)))
    });
    out.dedup();
    out
}

fn canonical_key(p: &Poly) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

// ---------------------------------------------------------------------------
// GF(p)

#[derive(Clone, Debug, PartialEq, Eq)]
struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    crate::field::pow_mod(a, p - 2, p)
}

impl FpPoly {
    fn new(p: u64, mut c: Vec<u64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    fn from_poly(f: &Poly, p: u64) -> Self {
        let c = f
            .coeffs()
            .iter()
            .map(|s| match s {
                Scalar::Prime(r) => r.value(),
                Scalar::Rational(_) => unreachable!("rational coefficient in GF(p) polynomial"),
            })
            .collect();
        FpPoly::new(p, c)
    }

    fn from_ints(c: &[BigInt], p: u64) -> Self {
        let m = BigInt::from(p);
        FpPoly::new(p, c.iter().map(|x| x.mod_floor(&m).to_u64().unwrap()).collect())
    }

    fn to_poly(&self, field: FieldSpec) -> Poly {
        Poly::new(field, self.c.iter().map(|&x| field.from_i64(x as i64)).collect())
    }

    fn one(p: u64) -> Self {
        FpPoly { p, c: vec![1] }
    }

    fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    fn is_one(&self) -> bool {
        self.c == [1]
    }

    fn monic(&self) -> Self {
        match self.c.last() {
            None => self.clone(),
            Some(&lc) => {
                let inv = inv_mod(lc, self.p);
                FpPoly::new(self.p, self.c.iter().map(|&x| mulmod(x, inv, self.p)).collect())
            }
        }
    }

    fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| {
                let a = *self.c.get(i).unwrap_or(&0) as u128;
                let b = *o.c.get(i).unwrap_or(&0) as u128;
                ((a + b) % self.p as u128) as u64
            })
            .collect();
        FpPoly::new(self.p, c)
    }

    fn neg(&self) -> Self {
        FpPoly::new(self.p, self.c.iter().map(|&x| if x == 0 { 0 } else { self.p - x }).collect())
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return FpPoly::new(self.p, Vec::new());
        }
        let mut c = vec![0u128; self.c.len() + o.c.len() - 1];
        let p = self.p as u128;
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = (c[i + j] + a as u128 * b as u128) % p;
            }
        }
        FpPoly::new(self.p, c.into_iter().map(|x| x as u64).collect())
    }

    fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.deg().expect("division by zero polynomial");
        let inv = inv_mod(*d.c.last().unwrap(), self.p);
        let mut r = self.c.clone();
        let Some(sd) = self.deg() else {
            return (FpPoly::new(self.p, vec![]), FpPoly::new(self.p, vec![]));
        };
        if sd < dd {
            return (FpPoly::new(self.p, vec![]), self.clone());
        }
        let mut q = vec![0u64; sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let c = mulmod(r[k + dd], inv, self.p);
            if c == 0 {
                continue;
            }
            for (j, &dj) in d.c.iter().enumerate() {
                let s = mulmod(c, dj, self.p);
                r[k + j] = (r[k + j] + self.p - s) % self.p;
            }
            q[k] = c;
        }
        (FpPoly::new(self.p, q), FpPoly::new(self.p, r))
    }

    fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    fn quo(&self, d: &Self) -> Self {
        self.div_rem(d).0
    }

    fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// (g, s, t) with s·self + t·o = g = gcd, g monic.
    fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let zero = FpPoly::new(p, vec![]);
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (FpPoly::one(p), zero.clone());
        let (mut t0, mut t1) = (zero, FpPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        let lc = *r0.c.last().expect("nonzero gcd");
        let inv = FpPoly::new(p, vec![inv_mod(lc, p)]);
        (r0.mul(&inv), s0.mul(&inv), t0.mul(&inv))
    }

    fn derivative(&self) -> Self {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &x)| mulmod(x, (i as u64) % self.p, self.p))
            .collect();
        FpPoly::new(self.p, c)
    }

    fn pow_mod(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = FpPoly::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }
}

/// Square-free decomposition over GF(p); returns the square-free parts.
fn squarefree_parts(f: &FpPoly) -> Vec<FpPoly> {
    let p = f.p;
    let mut out = Vec::new();
    if f.deg().unwrap_or(0) == 0 {
        return out;
    }
    let mut c = f.gcd(&f.derivative());
    let mut w = f.quo(&c);
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.quo(&y);
        if !fac.is_one() {
            out.push(fac.monic());
        }
        w = y;
        c = c.quo(&w);
    }
    if !c.is_one() && c.deg().unwrap_or(0) > 0 {
        // c is a polynomial in x^p; take the p-th root coefficientwise
        let root = FpPoly::new(p, c.c.iter().step_by(p as usize).copied().collect());
        out.extend(squarefree_parts(&root));
    }
    out
}

fn distinct_degree(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = FpPoly::x(p);
    let mut h = x.rem(&rest);
    let mut d = 1;
    let pb = BigUint::from(p);
    while rest.deg().unwrap_or(0) >= 2 * d {
        h = h.pow_mod(&pb, &rest);
        let g = rest.gcd(&h.sub(&x));
        if !g.is_one() {
            rest = rest.quo(&g);
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.deg().unwrap_or(0) > 0 {
        let deg = rest.deg().unwrap();
        out.push((rest.monic(), deg));
    }
    out
}

fn equal_degree(f: &FpPoly, d: usize, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    let n = f.deg().unwrap();
    if n == d {
        return vec![f.monic()];
    }
    let p = f.p;
    loop {
        let a = FpPoly::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.deg().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(d-1))
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            acc
        } else {
            let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
            a.pow_mod(&e, f).sub(&FpPoly::one(p))
        };
        let g = f.gcd(&b);
        let gd = g.deg().unwrap_or(0);
        if gd > 0 && gd < n {
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&f.quo(&g), d, rng));
            return out;
        }
    }
}

fn factor_mod_p(f: &FpPoly) -> Vec<FpPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ f.p);
    let mut out = Vec::new();
    for part in squarefree_parts(f) {
        for (g, d) in distinct_degree(&part) {
            out.extend(equal_degree(&g, d, &mut rng));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Q

type ZPoly = Vec<BigInt>;

fn z_trim(mut c: ZPoly) -> ZPoly {
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    c
}

fn z_mul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    z_trim(c)
}

/// Exact division by a monic divisor; `None` if the remainder is nonzero.
fn z_div_monic(a: &ZPoly, d: &ZPoly) -> Option<ZPoly> {
    let dd = d.len() - 1;
    if a.len() < d.len() {
        return if a.is_empty() { Some(Vec::new()) } else { None };
    }
    let mut r = a.clone();
    let mut q = vec![BigInt::zero(); a.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in d.iter().enumerate() {
            r[k + j] -= &c * dj;
        }
        q[k] = c;
    }
    if r.iter().all(Zero::is_zero) {
        Some(z_trim(q))
    } else {
        None
    }
}

fn symmetric_mod(c: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m / 2;
    z_trim(
        c.iter()
            .map(|x| {
                let r = x.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn fp_to_z(f: &FpPoly) -> ZPoly {
    f.c.iter().map(|&x| BigInt::from(x)).collect()
}

/// Lifts g ≡ a·b (mod p), a monic and coprime to b, to g ≡ a·b (mod p^k).
fn hensel_lift(g: &ZPoly, a: &FpPoly, b: &FpPoly, k: u32) -> ZPoly {
    let p = a.p;
    let (_, s, t) = a.ext_gcd(b);
    let mut az = fp_to_z(a);
    let mut bz = fp_to_z(b);
    let mut pj = BigInt::from(p);
    for _ in 1..k {
        let ab = z_mul(&az, &bz);
        let n = g.len().max(ab.len());
        let e: ZPoly = (0..n)
            .map(|i| {
                let gi = g.get(i).cloned().unwrap_or_default();
                let abi = ab.get(i).cloned().unwrap_or_default();
                (gi - abi) / &pj
            })
            .collect();
        let e = FpPoly::from_ints(&e, p);
        let te = t.mul(&e);
        let (q, da) = te.div_rem(a);
        let db = s.mul(&e).add(&q.mul(b));
        let da = fp_to_z(&da);
        let db = fp_to_z(&db);
        for (i, x) in da.iter().enumerate() {
            if i < az.len() {
                az[i] += &pj * x;
            }
        }
        bz.resize(bz.len().max(db.len()), BigInt::zero());
        for (i, x) in db.iter().enumerate() {
            bz[i] += &pj * x;
        }
        pj *= p;
        az = az.iter().map(|x| x.mod_floor(&pj)).collect();
        bz = z_trim(bz.iter().map(|x| x.mod_floor(&pj)).collect());
    }
    az
}

fn factor_over_q(f: &Poly) -> Vec<Poly> {
    let field = FieldSpec::Rational;
    // square-free part over Q, made monic
    let f = f.monic();
    let sq = f.div_rem(&f.gcd(&f.derivative())).0.monic();
    // clear denominators: F(y) = D^n sq(y / D) is monic with integer coefficients
    let n = sq.degree().unwrap();
    let mut den = BigInt::one();
    for c in sq.coeffs() {
        den = den.lcm(c.as_rational().unwrap().denom());
    }
    let monic_int: ZPoly = sq
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let scaled = c.as_rational().unwrap() * BigRational::from_integer(den.pow((n - i) as u32));
            debug_assert!(scaled.is_integer());
            scaled.to_integer()
        })
        .collect();
    let factors = zassenhaus(&monic_int);
    // undo the scaling: G(y) | F(y) gives g(x) = G(D x) / D^deg
    factors
        .into_iter()
        .map(|g| {
            let d = g.len() - 1;
            let coeffs = g
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let q = BigRational::new(c.clone(), den.pow((d - i) as u32));
                    Scalar::Rational(q)
                })
                .collect();
            Poly::new(field, coeffs).monic()
        })
        .collect()
}

/// Factors a monic square-free integer polynomial over Z.
fn zassenhaus(f: &ZPoly) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.clone()];
    }
    let mut p = 3u64;
    let modular = loop {
        if is_prime(p) {
            let fp = FpPoly::from_ints(f, p);
            if fp.deg() == Some(n) && fp.gcd(&fp.derivative()).is_one() {
                break factor_mod_p(&fp);
            }
        }
        p += 2;
    };
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    // Mignotte-style bound on coefficients of any factor
    let norm: BigInt = f.iter().map(|c| c.abs()).sum();
    let bound = (BigInt::one() << n) * norm;
    let mut k = 1u32;
    let mut pk = BigInt::from(p);
    while pk <= &bound * 2 {
        pk *= p;
        k += 1;
    }
    let fp = FpPoly::from_ints(f, p);
    let mut lifted: Vec<ZPoly> = modular
        .iter()
        .map(|a| {
            let b = fp.quo(a);
            hensel_lift(f, a, &b, k)
        })
        .collect();

    let mut result = Vec::new();
    let mut rest = f.clone();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = false;
        for subset in combinations(lifted.len(), size) {
            let prod = subset
                .iter()
                .fold(vec![BigInt::one()], |acc, &i| z_mul(&acc, &lifted[i]));
            let cand = symmetric_mod(&prod, &pk);
            if let Some(q) = z_div_monic(&rest, &cand) {
                result.push(cand);
                rest = q;
                let mut idx = subset.clone();
                idx.sort_unstable_by(|a, b| b.cmp(a));
                for i in idx {
                    lifted.remove(i);
                }
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if rest.len() > 1 {
        result.push(rest);
    }
    result
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    const Q: FieldSpec = FieldSpec::Rational;

    fn product(fs: &[Poly], field: FieldSpec) -> Poly {
        fs.iter().fold(Poly::one(field), |acc, f| acc.mul(f))
    }

    /// Brute-force irreducibility over a small prime field: no monic factor
    /// of degree 1..=deg/2 divides.
    fn brute_irreducible(f: &Poly, p: u64) -> bool {
        let field = f.field();
        let n = f.degree().unwrap();
        for d in 1..=n / 2 {
            let count = p.pow(d as u32);
            for idx in 0..count {
                let mut c = Vec::new();
                let mut t = idx;
                for _ in 0..d {
                    c.push(field.from_i64((t % p) as i64));
                    t /= p;
                }
                c.push(field.one());
                let g = Poly::new(field, c);
                if f.rem(&g).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn factors_over_small_primes_are_irreducible_and_complete() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for p in [2u64, 3, 5, 7] {
            let field = FieldSpec::prime(p).unwrap();
            for _ in 0..40 {
                let n = rng.gen_range(1..=7);
                let mut c: Vec<Scalar> = (0..n).map(|_| field.from_i64(rng.gen_range(0..p as i64))).collect();
                c.push(field.one());
                let f = Poly::new(field, c);
                let fs = irreducible_factors(&f);
                for g in &fs {
                    assert!(brute_irreducible(g, p), "{g:?} reducible");
                    assert!(f.rem(g).is_zero());
                }
                // every root of f's radical is accounted for: f divides prod^n
                let prod = product(&fs, field);
                let mut power = Poly::one(field);
                for _ in 0..n {
                    power = power.mul(&prod);
                }
                assert!(power.rem(&f).is_zero());
            }
        }
    }

    #[test]
    fn squarefree_parts_handle_pth_powers() {
        let field = FieldSpec::prime(3).unwrap();
        // (x+1)^3 (x^2+1) = x^3+1 times x^2+1 over GF(3)
        let f = Poly::from_i64(field, &[1, 0, 0, 1]).mul(&Poly::from_i64(field, &[1, 0, 1]));
        let fs = irreducible_factors(&f);
        assert_eq!(fs, vec![Poly::from_i64(field, &[1, 1]), Poly::from_i64(field, &[1, 0, 1])]);
    }

    #[test]
    fn rational_factorizations() {
        // x^4 - 1 = (x-1)(x+1)(x^2+1)
        let fs = irreducible_factors(&Poly::from_i64(Q, &[-1, 0, 0, 0, 1]));
        assert_eq!(
            fs,
            vec![
                Poly::from_i64(Q, &[-1, 1]),
                Poly::from_i64(Q, &[1, 1]),
                Poly::from_i64(Q, &[1, 0, 1])
            ]
        );
        // x^4 + 1 is irreducible over Q but splits modulo every prime
        let f = Poly::from_i64(Q, &[1, 0, 0, 0, 1]);
        assert_eq!(irreducible_factors(&f), vec![f.clone()]);
        // (x^2 - 2)^2 (x^3 - x - 1) (2x - 1)
        let f = Poly::from_i64(Q, &[-2, 0, 1])
            .mul(&Poly::from_i64(Q, &[-2, 0, 1]))
            .mul(&Poly::from_i64(Q, &[-1, -1, 0, 1]))
            .mul(&Poly::from_i64(Q, &[-1, 2]));
        let fs = irreducible_factors(&f);
        let half = Q.parse("-1/2").unwrap();
        assert_eq!(
            fs,
            vec![
                Poly::new(Q, vec![half, Q.one()]),
                Poly::from_i64(Q, &[-2, 0, 1]),
                Poly::from_i64(Q, &[-1, -1, 0, 1])
            ]
        );
    }

    #[test]
    fn rational_products_of_random_factors() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..25 {
            let k = rng.gen_range(1..=4);
            let mut parts = Vec::new();
            for _ in 0..k {
                let d = rng.gen_range(1..=3);
                let mut c: Vec<i64> = (0..d).map(|_| rng.gen_range(-5..=5)).collect();
                c.push(1);
                parts.push(Poly::from_i64(Q, &c));
            }
            let f = product(&parts, Q);
            let fs = irreducible_factors(&f);
            for g in &fs {
                assert!(f.rem(g).is_zero());
            }
            // each random part is a product of the returned factors (up to multiplicity)
            for part in &parts {
                let mut r = part.clone();
                for g in &fs {
                    while r.degree().unwrap_or(0) > 0 && r.rem(g).is_zero() {
                        r = r.div_rem(g).0;
                    }
                }
                assert_eq!(r.degree(), Some(0), "{part:?} not covered by {fs:?}");
            }
            // irreducibility: distinct factors are pairwise coprime and none of degree ≥ 2 has a rational root
            for (i, a) in fs.iter().enumerate() {
                for b in &fs[i + 1..] {
                    assert_eq!(a.gcd(b), Poly::one(Q));
                }
            }
        }
    }
}
