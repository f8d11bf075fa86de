//! The chain-level coproduct of the symmetric-product complex.
//!
//! The coproduct is an algebra map determined on generators by
//!
//! ```text
//! lambda(e_i)     = e_i (x) 1 + 1 (x) e_i
//! lambda(D_j)     = D_j (x) 1 + Q(w_j) + 1 (x) D_j
//! lambda(SP^s D)  = (1/s!) (lambda D)^s
//! ```
//!
//! where Q(w) is the quadratic part of the attaching word w = x_1^eps_1
//! ... x_L^eps_L: the sum over ordered letter pairs s < t of (eps_s e_{i_s})
//! (x) (eps_t e_{i_t}), plus e_{i_t} (x) e_{i_t} for every inverse letter.
//! The tensor square carries the Koszul product (u (x) v)(u' (x) v') =
//! (-1)^{deg v deg u'} uu' (x) vv'.  Divided powers are computed
//! incrementally: lambda(SP^{s-1} D) lambda(D) = s lambda(SP^s D), so each
//! step divides by s and the division must come out exact over Z.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use num::bigint::BigInt;
use num::traits::{One, Zero};
use num::Integer;

use crate::error::{Error, Result};
use crate::presentation::ComplexPresentation;
use crate::spchain::{boundary, mul_terms, Chain, SpMonomial};

/// An element of the tensor square of the chain algebra.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TensorChain {
    terms: BTreeMap<(SpMonomial, SpMonomial), BigInt>,
}

impl TensorChain {
    pub fn zero() -> Self {
        TensorChain::default()
    }

    /// The unit 1 (x) 1.
    pub fn one() -> Self {
        Self::from_pair(SpMonomial::one(), SpMonomial::one(), BigInt::one())
    }

    pub fn from_pair(u: SpMonomial, v: SpMonomial, coeff: BigInt) -> Self {
        let mut t = TensorChain::zero();
        t.add_term(u, v, coeff);
        t
    }

    pub fn add_term(&mut self, u: SpMonomial, v: SpMonomial, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry((u, v));
        match entry {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, u: &SpMonomial, v: &SpMonomial) -> BigInt {
        self.terms
            .get(&(u.clone(), v.clone()))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(SpMonomial, SpMonomial), &BigInt)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &TensorChain) -> TensorChain {
        let mut out = self.clone();
        for ((u, v), c) in other.iter() {
            out.add_term(u.clone(), v.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &TensorChain) -> TensorChain {
        let mut out = self.clone();
        for ((u, v), c) in other.iter() {
            out.add_term(u.clone(), v.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> TensorChain {
        let mut out = TensorChain::zero();
        for ((u, v), c) in self.iter() {
            out.add_term(u.clone(), v.clone(), c * k);
        }
        out
    }

    /// Koszul product of tensor factors.
    pub fn mul(&self, other: &TensorChain) -> TensorChain {
        let mut out = TensorChain::zero();
        for ((u1, v1), c1) in self.iter() {
            for ((u2, v2), c2) in other.iter() {
                let Some((cu, u)) = mul_terms(u1, u2) else {
                    continue;
                };
                let Some((cv, v)) = mul_terms(v1, v2) else {
                    continue;
                };
                let sign = if (v1.degree() * u2.degree()) % 2 == 0 {
                    BigInt::one()
                } else {
                    -BigInt::one()
                };
                out.add_term(u, v, c1 * c2 * cu * cv * sign);
            }
        }
        out
    }

    /// Exact division of every coefficient; fails loudly otherwise.
    pub fn div_exact(&self, k: &BigInt, what: &str) -> Result<TensorChain> {
        let mut out = TensorChain::zero();
        for ((u, v), c) in self.iter() {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return Err(Error::InexactDivision(format!(
                    "{what}: coefficient {c} of {u} (x) {v} is not divisible by {k}"
                )));
            }
            out.add_term(u.clone(), v.clone(), q);
        }
        Ok(out)
    }

    pub fn reduce_mod(&self, m: u64) -> TensorChain {
        let modulus = BigInt::from(m);
        let mut out = TensorChain::zero();
        for ((u, v), c) in self.iter() {
            out.add_term(u.clone(), v.clone(), c.mod_floor(&modulus));
        }
        out
    }

    /// Keep only terms with both factors of filtration <= n.
    pub fn truncate_filtration(&self, n: usize) -> TensorChain {
        let mut out = TensorChain::zero();
        for ((u, v), c) in self.iter() {
            if u.filtration() <= n && v.filtration() <= n {
                out.add_term(u.clone(), v.clone(), c.clone());
            }
        }
        out
    }

    /// Tensor-square boundary: del u (x) v + (-1)^{deg u} u (x) del v.
    pub fn boundary(&self, p: &ComplexPresentation) -> TensorChain {
        let mut out = TensorChain::zero();
        for ((u, v), c) in self.iter() {
            for (bu, bc) in boundary(u, p).iter() {
                out.add_term(bu.clone(), v.clone(), bc * c);
            }
            let sign = if u.degree() % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            for (bv, bc) in boundary(v, p).iter() {
                out.add_term(u.clone(), bv.clone(), bc * c * &sign);
            }
        }
        out
    }

    /// Both counit slots: sum of terms with 1 in the left (resp. right)
    /// factor, as plain chains.
    pub fn counit_left(&self) -> Chain {
        let mut out = Chain::zero();
        for ((u, v), c) in self.iter() {
            if u.is_one() {
                out.add_term(v.clone(), c.clone());
            }
        }
        out
    }

    pub fn counit_right(&self) -> Chain {
        let mut out = Chain::zero();
        for ((u, v), c) in self.iter() {
            if v.is_one() {
                out.add_term(u.clone(), c.clone());
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> = self
            .iter()
            .map(|((u, v), c)| {
                serde_json::json!({
                    "coef": c.to_string(),
                    "left": u.to_string(),
                    "right": v.to_string(),
                })
            })
            .collect();
        serde_json::Value::Array(terms)
    }
}

impl fmt::Display for TensorChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, ((u, v), c)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{u} (x) {v}")?;
            } else if (-c).is_one() {
                write!(f, "-{u} (x) {v}")?;
            } else {
                write!(f, "{c}·{u} (x) {v}")?;
            }
        }
        Ok(())
    }
}

/// Computes and caches coproducts of the divided-power generators.
pub struct DiagonalEngine {
    presentation: ComplexPresentation,
    memo: Mutex<HashMap<(u32, u32), TensorChain>>,
}

impl DiagonalEngine {
    pub fn new(p: &ComplexPresentation) -> Self {
        DiagonalEngine {
            presentation: p.clone(),
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn presentation(&self) -> &ComplexPresentation {
        &self.presentation
    }

    /// Quadratic part Q(w) of the attaching word of a cell.
    pub fn quadratic_part(&self, cell: usize) -> TensorChain {
        let word = self.presentation.word(cell);
        let letters: Vec<(u32, i64)> = word
            .letters
            .iter()
            .map(|l| (l.circle as u32, l.sign()))
            .collect();
        let mut q = TensorChain::zero();
        for s in 0..letters.len() {
            for t in (s + 1)..letters.len() {
                let (is, es) = letters[s];
                let (it, et) = letters[t];
                q.add_term(
                    SpMonomial::circle(is),
                    SpMonomial::circle(it),
                    BigInt::from(es * et),
                );
            }
        }
        for &(i, e) in &letters {
            if e < 0 {
                q.add_term(SpMonomial::circle(i), SpMonomial::circle(i), BigInt::one());
            }
        }
        q
    }

    /// Coproduct of SP^s(D_cell); s = 0 gives the unit.
    pub fn generator_diagonal(&self, cell: usize, s: u32) -> Result<TensorChain> {
        if s == 0 {
            return Ok(TensorChain::one());
        }
        if let Some(hit) = self.memo.lock().unwrap().get(&(cell as u32, s)) {
            return Ok(hit.clone());
        }
        let result = if s == 1 {
            let d = SpMonomial::divided(cell as u32, 1);
            TensorChain::from_pair(d.clone(), SpMonomial::one(), BigInt::one())
                .add(&self.quadratic_part(cell))
                .add(&TensorChain::from_pair(SpMonomial::one(), d, BigInt::one()))
        } else {
            // lambda(SP^{s-1} D) * lambda(D) = s * lambda(SP^s D).
            let prev = self.generator_diagonal(cell, s - 1)?;
            let step = self.generator_diagonal(cell, 1)?;
            prev.mul(&step).div_exact(
                &BigInt::from(s),
                &format!("coproduct of SP{}(D{})", s, cell + 1),
            )?
        };
        self.memo
            .lock()
            .unwrap()
            .insert((cell as u32, s), result.clone());
        Ok(result)
    }

    /// Coproduct of a basis monomial: the ordered product of the coproducts
    /// of its factors.
    pub fn monomial_diagonal(&self, m: &SpMonomial) -> Result<TensorChain> {
        let mut acc = TensorChain::one();
        for &i in m.exterior() {
            let e = SpMonomial::circle(i);
            let lam = TensorChain::from_pair(e.clone(), SpMonomial::one(), BigInt::one())
                .add(&TensorChain::from_pair(SpMonomial::one(), e, BigInt::one()));
            acc = acc.mul(&lam);
        }
        for &(cell, s) in m.powers() {
            acc = acc.mul(&self.generator_diagonal(cell as usize, s)?);
        }
        Ok(acc)
    }

    pub fn chain_diagonal(&self, c: &Chain) -> Result<TensorChain> {
        let mut acc = TensorChain::zero();
        for (m, coeff) in c.iter() {
            acc = acc.add(&self.monomial_diagonal(m)?.scale(coeff));
        }
        Ok(acc)
    }

    /// Coproduct landing in the tensor square of the n-th symmetric
    /// product: terms with a factor of filtration above n are dropped.
    /// The boundary preserves filtration, so this is still a chain map.
    pub fn diagonal_in(&self, c: &Chain, n: usize) -> Result<TensorChain> {
        Ok(self.chain_diagonal(c)?.truncate_filtration(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::NamedComplex;
    use crate::spchain::{binomial, boundary_chain, enumerate_basis, multiply};

    fn power_word(m: u32) -> ComplexPresentation {
        NamedComplex::LensAttach(m).build().unwrap()
    }

    fn e(i: u32) -> SpMonomial {
        SpMonomial::circle(i)
    }

    fn sp(cell: u32, s: u32) -> SpMonomial {
        SpMonomial::divided(cell, s)
    }

    fn one() -> SpMonomial {
        SpMonomial::one()
    }

    #[test]
    fn quadratic_part_of_torus_word() {
        let p = NamedComplex::OrientableSurface(1).build().unwrap();
        let eng = DiagonalEngine::new(&p);
        let q = eng.quadratic_part(0);
        let mut want = TensorChain::zero();
        want.add_term(e(0), e(1), BigInt::from(1));
        want.add_term(e(1), e(0), BigInt::from(-1));
        assert_eq!(q, want);
    }

    #[test]
    fn quadratic_part_of_power_word() {
        for m in [2u32, 3, 5, 6] {
            let p = power_word(m);
            let eng = DiagonalEngine::new(&p);
            let q = eng.quadratic_part(0);
            let mut want = TensorChain::zero();
            want.add_term(e(0), e(0), binomial(m as u64, 2));
            assert_eq!(q, want, "m={m}");
        }
        // Modulo m = 2k the coefficient C(2k, 2) = k(2k-1) reduces to k.
        for k in [1u64, 2, 3] {
            let m = 2 * k;
            let p = power_word(m as u32);
            let eng = DiagonalEngine::new(&p);
            let q = eng.quadratic_part(0).reduce_mod(m);
            assert_eq!(q.coeff(&e(0), &e(0)), BigInt::from(k), "k={k}");
        }
    }

    #[test]
    fn quadratic_part_of_nonorientable_word() {
        // Word a1 a1 a2 a2 a3 a3: within each pair one e_i (x) e_i, across
        // pairs coefficient 4.
        let p = NamedComplex::NonorientableSurface(3).build().unwrap();
        let eng = DiagonalEngine::new(&p);
        let q = eng.quadratic_part(0);
        for i in 0..3 {
            assert_eq!(q.coeff(&e(i), &e(i)), BigInt::from(1));
        }
        for i in 0..3 {
            for j in (i + 1)..3 {
                assert_eq!(q.coeff(&e(i), &e(j)), BigInt::from(4));
                assert_eq!(q.coeff(&e(j), &e(i)), BigInt::from(0));
            }
        }
        assert_eq!(q.len(), 6);
    }

    #[test]
    fn diagonal_of_exterior_product() {
        let p = NamedComplex::OrientableSurface(1).build().unwrap();
        let eng = DiagonalEngine::new(&p);
        let m = SpMonomial::new(vec![0, 1], vec![]);
        let lam = eng.monomial_diagonal(&m).unwrap();
        let mut want = TensorChain::zero();
        want.add_term(m.clone(), one(), BigInt::from(1));
        want.add_term(e(0), e(1), BigInt::from(1));
        want.add_term(e(1), e(0), BigInt::from(-1));
        want.add_term(one(), m.clone(), BigInt::from(1));
        assert_eq!(lam, want);
    }

    #[test]
    fn sp2_diagonal_of_power_word() {
        // For w = a^m: lambda(SP^2 D) = SP2D (x) 1 + q eD (x) e + D (x) D
        // + q e (x) eD + 1 (x) SP2D with q = C(m, 2), exactly over Z.
        for m in [2u32, 3, 4] {
            let p = power_word(m);
            let eng = DiagonalEngine::new(&p);
            let lam = eng.generator_diagonal(0, 2).unwrap();
            let q = binomial(m as u64, 2);
            let ed = SpMonomial::new(vec![0], vec![(0, 1)]);
            let mut want = TensorChain::zero();
            want.add_term(sp(0, 2), one(), BigInt::one());
            want.add_term(ed.clone(), e(0), q.clone());
            want.add_term(sp(0, 1), sp(0, 1), BigInt::one());
            want.add_term(e(0), ed.clone(), q.clone());
            want.add_term(one(), sp(0, 2), BigInt::one());
            assert_eq!(lam, want, "m={m}");
        }
    }

    #[test]
    fn sp2_diagonal_of_torus() {
        let p = NamedComplex::OrientableSurface(1).build().unwrap();
        let eng = DiagonalEngine::new(&p);
        let lam = eng.generator_diagonal(0, 2).unwrap();
        let e1d = SpMonomial::new(vec![0], vec![(0, 1)]);
        let e2d = SpMonomial::new(vec![1], vec![(0, 1)]);
        let e12 = SpMonomial::new(vec![0, 1], vec![]);
        let mut want = TensorChain::zero();
        want.add_term(sp(0, 2), one(), BigInt::from(1));
        want.add_term(one(), sp(0, 2), BigInt::from(1));
        want.add_term(sp(0, 1), sp(0, 1), BigInt::from(1));
        want.add_term(e1d.clone(), e(1), BigInt::from(1));
        want.add_term(e2d.clone(), e(0), BigInt::from(-1));
        want.add_term(e(0), e2d.clone(), BigInt::from(1));
        want.add_term(e(1), e1d.clone(), BigInt::from(-1));
        want.add_term(e12.clone(), e12.clone(), BigInt::from(-1));
        assert_eq!(lam, want);
    }

    #[test]
    fn diagonal_is_an_algebra_map() {
        let p = NamedComplex::NonorientableSurface(2).build().unwrap();
        let eng = DiagonalEngine::new(&p);
        let monos = [
            e(0),
            e(1),
            sp(0, 1),
            sp(0, 2),
            SpMonomial::new(vec![0], vec![(0, 1)]),
        ];
        for x in &monos {
            for y in &monos {
                let xy = multiply(x, y);
                let via_product = eng.chain_diagonal(&xy).unwrap();
                let via_factors = eng
                    .monomial_diagonal(x)
                    .unwrap()
                    .mul(&eng.monomial_diagonal(y).unwrap());
                assert_eq!(via_product, via_factors, "x={x} y={y}");
            }
        }
    }

    #[test]
    fn diagonal_is_a_chain_map() {
        let samples = [
            NamedComplex::OrientableSurface(1).build().unwrap(),
            NamedComplex::NonorientableSurface(2).build().unwrap(),
            NamedComplex::LensAttach(4).build().unwrap(),
        ];
        for p in &samples {
            let eng = DiagonalEngine::new(p);
            for m in enumerate_basis(p, 3, None) {
                let left = eng.monomial_diagonal(&m).unwrap().boundary(p);
                let right = eng
                    .chain_diagonal(&boundary_chain(&Chain::from_monomial(m.clone()), p))
                    .unwrap();
                assert_eq!(left, right, "monomial {m}");
            }
        }
    }

    #[test]
    fn truncated_diagonal_is_still_a_chain_map() {
        let p = NamedComplex::NonorientableSurface(2).build().unwrap();
        let eng = DiagonalEngine::new(&p);
        let n = 2;
        for m in enumerate_basis(&p, n, None) {
            let c = Chain::from_monomial(m.clone());
            let left = eng.diagonal_in(&c, n).unwrap().boundary(&p);
            let right = eng.diagonal_in(&boundary_chain(&c, &p), n).unwrap();
            assert_eq!(left, right, "monomial {m}");
        }
    }

    #[test]
    fn truncation_drops_overflow_terms() {
        // lambda(SP^2 D) for a^m has the filtration-2 factor eD against e;
        // in SP^1 both SP2D and eD overflow.
        let p = power_word(3);
        let eng = DiagonalEngine::new(&p);
        let c = Chain::from_monomial(sp(0, 2));
        let full = eng.chain_diagonal(&c).unwrap();
        assert_eq!(full.len(), 5);
        let trunc = eng.diagonal_in(&c, 1).unwrap();
        assert_eq!(trunc.len(), 1);
        assert_eq!(trunc.coeff(&sp(0, 1), &sp(0, 1)), BigInt::one());
    }

    #[test]
    fn counit_identities() {
        let p = NamedComplex::NonorientableSurface(2).build().unwrap();
        let eng = DiagonalEngine::new(&p);
        for m in enumerate_basis(&p, 3, None) {
            let lam = eng.monomial_diagonal(&m).unwrap();
            let expect = Chain::from_monomial(m.clone());
            assert_eq!(lam.counit_left(), expect, "left counit at {m}");
            assert_eq!(lam.counit_right(), expect, "right counit at {m}");
        }
    }

    #[test]
    fn coassociativity_on_generators() {
        // (lambda (x) 1) lambda = (1 (x) lambda) lambda, exactly over Z.
        type Triple = BTreeMap<(SpMonomial, SpMonomial, SpMonomial), BigInt>;
        fn add(acc: &mut Triple, key: (SpMonomial, SpMonomial, SpMonomial), c: BigInt) {
            *acc.entry(key).or_insert_with(BigInt::zero) += c;
        }
        let samples = [
            NamedComplex::OrientableSurface(1).build().unwrap(),
            NamedComplex::NonorientableSurface(2).build().unwrap(),
            NamedComplex::LensAttach(3).build().unwrap(),
        ];
        for p in &samples {
            let eng = DiagonalEngine::new(p);
            let mut targets = vec![e(0), sp(0, 1), sp(0, 2), sp(0, 3)];
            targets.push(SpMonomial::new(vec![0], vec![(0, 1)]));
            for m in targets {
                let lam = eng.monomial_diagonal(&m).unwrap();
                let mut left: Triple = BTreeMap::new();
                let mut right: Triple = BTreeMap::new();
                for ((u, v), c) in lam.iter() {
                    for ((a, b), c2) in eng.monomial_diagonal(u).unwrap().iter() {
                        add(&mut left, (a.clone(), b.clone(), v.clone()), c * c2);
                    }
                    for ((a, b), c2) in eng.monomial_diagonal(v).unwrap().iter() {
                        add(&mut right, (u.clone(), a.clone(), b.clone()), c * c2);
                    }
                }
                left.retain(|_, c| !c.is_zero());
                right.retain(|_, c| !c.is_zero());
                assert_eq!(left, right, "monomial {m}");
            }
        }
    }

    #[test]
    fn divided_power_division_is_exact_up_to_four() {
        let samples = [
            NamedComplex::OrientableSurface(2).build().unwrap(),
            NamedComplex::NonorientableSurface(3).build().unwrap(),
            NamedComplex::LensAttach(6).build().unwrap(),
            NamedComplex::SphereTwoCells.build().unwrap(),
        ];
        for p in &samples {
            let eng = DiagonalEngine::new(p);
            for cell in 0..p.cell_count() {
                for s in 1..=4 {
                    let lam = eng.generator_diagonal(cell, s);
                    assert!(lam.is_ok(), "cell {cell} s={s}: {:?}", lam.err());
                }
            }
        }
    }

    #[test]
    fn tensor_product_koszul_sign() {
        // (1 (x) e1)(e2 (x) 1) = -e2 (x) e1.
        let a = TensorChain::from_pair(one(), e(0), BigInt::one());
        let b = TensorChain::from_pair(e(1), one(), BigInt::one());
        let ab = a.mul(&b);
        assert_eq!(ab.coeff(&e(1), &e(0)), BigInt::from(-1));
        // Even factors commute freely: (1 (x) D)(D (x) 1) = D (x) D.
        let a = TensorChain::from_pair(one(), sp(0, 1), BigInt::one());
        let b = TensorChain::from_pair(sp(0, 1), one(), BigInt::one());
        assert_eq!(a.mul(&b).coeff(&sp(0, 1), &sp(0, 1)), BigInt::one());
    }

    #[test]
    fn display_formats() {
        let mut t = TensorChain::zero();
        t.add_term(e(0), one(), BigInt::from(2));
        assert_eq!(t.to_string(), "2·e1 (x) 1");
        assert_eq!(TensorChain::zero().to_string(), "0");
    }
}
