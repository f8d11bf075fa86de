//! The minimal multiplicative chain complex of the n-th symmetric product.
//!
//! For a complex with circles e_1..e_k and two-cells D_1..D_r, the chains of
//! the n-th symmetric product have a basis of monomials
//!
//! ```text
//! e_{i_1} * ... * e_{i_t} * SP^{s_1}(D_{j_1}) * ... * SP^{s_l}(D_{j_l})
//! ```
//!
//! with i_1 < ... < i_t, distinct cells j, and filtration t + sum s <= n.
//! The e_i are exterior generators of degree 1; SP^s(D_j) has degree 2s and
//! the divided-power rule SP^s(D) * SP^t(D) = C(s+t, t) SP^{s+t}(D).  The
//! boundary sends SP^s(D) to (boundary word of D) * SP^{s-1}(D) and extends
//! as a graded derivation.  The empty monomial is the degree-0 basis element.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num::bigint::BigInt;
use num::traits::{One, Zero};

use crate::error::Result;
use crate::exactlinalg::SparseMatrix;
use crate::presentation::ComplexPresentation;

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 1..=k {
        acc = acc * BigInt::from(n - k + i) / BigInt::from(i);
    }
    acc
}

/// Exact factorial.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

/// A basis monomial of the symmetric-product chain complex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpMonomial {
    /// Strictly increasing 0-based circle indices (the exterior part).
    exterior: Vec<u32>,
    /// (0-based cell index, exponent >= 1), strictly increasing by cell.
    powers: Vec<(u32, u32)>,
}

impl SpMonomial {
    pub fn one() -> Self {
        SpMonomial {
            exterior: vec![],
            powers: vec![],
        }
    }

    pub fn circle(i: u32) -> Self {
        SpMonomial {
            exterior: vec![i],
            powers: vec![],
        }
    }

    pub fn divided(cell: u32, s: u32) -> Self {
        assert!(s >= 1, "divided power exponent must be positive");
        SpMonomial {
            exterior: vec![],
            powers: vec![(cell, s)],
        }
    }

    pub fn new(exterior: Vec<u32>, powers: Vec<(u32, u32)>) -> Self {
        debug_assert!(exterior.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(powers.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(powers.iter().all(|&(_, s)| s >= 1));
        SpMonomial { exterior, powers }
    }

    pub fn exterior(&self) -> &[u32] {
        &self.exterior
    }

    pub fn powers(&self) -> &[(u32, u32)] {
        &self.powers
    }

    pub fn is_one(&self) -> bool {
        self.exterior.is_empty() && self.powers.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.exterior.len() + 2 * self.powers.iter().map(|&(_, s)| s as usize).sum::<usize>()
    }

    /// Number of points of the symmetric product the cell actually moves.
    pub fn filtration(&self) -> usize {
        self.exterior.len() + self.powers.iter().map(|&(_, s)| s as usize).sum::<usize>()
    }

    /// Self with the exponent of `cell` lowered by one.
    fn lower_power(&self, cell: u32) -> SpMonomial {
        let mut powers = Vec::with_capacity(self.powers.len());
        for &(c, s) in &self.powers {
            if c == cell {
                if s > 1 {
                    powers.push((c, s - 1));
                }
            } else {
                powers.push((c, s));
            }
        }
        SpMonomial {
            exterior: self.exterior.clone(),
            powers,
        }
    }
}

/// Basis order: degree, then filtration, then the exterior and divided parts
/// lexicographically.
impl Ord for SpMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.filtration().cmp(&other.filtration()))
            .then_with(|| self.exterior.cmp(&other.exterior))
            .then_with(|| self.powers.cmp(&other.powers))
    }
}

impl PartialOrd for SpMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SpMonomial {
    /// `e1*e3*SP2(D1)*SP1(D2)`; the empty monomial prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for &i in &self.exterior {
            if !first {
                write!(f, "*")?;
            }
            write!(f, "e{}", i + 1)?;
            first = false;
        }
        for &(c, s) in &self.powers {
            if !first {
                write!(f, "*")?;
            }
            write!(f, "SP{}(D{})", s, c + 1)?;
            first = false;
        }
        Ok(())
    }
}

/// Sign of merging two strictly increasing sequences: parity of the number
/// of pairs (x in a, y in b) with x > y.
fn merge_sign(a: &[u32], b: &[u32]) -> i8 {
    let mut inversions = 0usize;
    let mut bi = 0usize;
    for &x in a {
        // All y in b with y < x contribute; both lists are sorted.
        while bi < b.len() && b[bi] < x {
            bi += 1;
        }
        inversions += bi;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Product of two monomials: None when a circle repeats, otherwise the
/// merged monomial with its Koszul sign and divided-power binomial factor.
pub fn mul_terms(x: &SpMonomial, y: &SpMonomial) -> Option<(BigInt, SpMonomial)> {
    // Exterior parts must be disjoint.
    {
        let (mut i, mut j) = (0, 0);
        while i < x.exterior.len() && j < y.exterior.len() {
            match x.exterior[i].cmp(&y.exterior[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return None,
            }
        }
    }
    let sign = merge_sign(&x.exterior, &y.exterior);
    let mut exterior = Vec::with_capacity(x.exterior.len() + y.exterior.len());
    exterior.extend_from_slice(&x.exterior);
    exterior.extend_from_slice(&y.exterior);
    exterior.sort_unstable();

    let mut coeff = BigInt::from(sign);
    let mut powers: Vec<(u32, u32)> = Vec::with_capacity(x.powers.len() + y.powers.len());
    let (mut i, mut j) = (0, 0);
    while i < x.powers.len() || j < y.powers.len() {
        let take_x = match (x.powers.get(i), y.powers.get(j)) {
            (Some(&(cx, _)), Some(&(cy, _))) => {
                if cx == cy {
                    let (s, t) = (x.powers[i].1, y.powers[j].1);
                    coeff *= binomial((s + t) as u64, t as u64);
                    powers.push((cx, s + t));
                    i += 1;
                    j += 1;
                    continue;
                }
                cx < cy
            }
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => break,
        };
        if take_x {
            powers.push(x.powers[i]);
            i += 1;
        } else {
            powers.push(y.powers[j]);
            j += 1;
        }
    }
    Some((coeff, SpMonomial { exterior, powers }))
}

/// An integer chain: a finite sum of monomials with BigInt coefficients.
/// All chain arithmetic is over Z; reduction into Z/m happens explicitly.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Chain {
    terms: BTreeMap<SpMonomial, BigInt>,
}

impl Chain {
    pub fn zero() -> Self {
        Chain::default()
    }

    pub fn from_monomial(m: SpMonomial) -> Self {
        let mut c = Chain::zero();
        c.add_term(m, BigInt::one());
        c
    }

    pub fn add_term(&mut self, m: SpMonomial, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
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

    pub fn coeff(&self, m: &SpMonomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SpMonomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Chain) -> Chain {
        let mut out = self.clone();
        for (m, c) in other.iter() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Chain) -> Chain {
        let mut out = self.clone();
        for (m, c) in other.iter() {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Chain {
        let mut out = Chain::zero();
        for (m, c) in self.iter() {
            out.add_term(m.clone(), c * k);
        }
        out
    }

    /// Coefficients reduced into 0..m; zero terms dropped.  The modulus need
    /// not be prime: chain-level identities are checked modulo word degrees.
    pub fn reduce_mod(&self, m: u64) -> Chain {
        let modulus = BigInt::from(m);
        let mut out = Chain::zero();
        for (mono, c) in self.iter() {
            out.add_term(mono.clone(), c.mod_floor_big(&modulus));
        }
        out
    }

    /// Gcd of all coefficients; zero for the zero chain.
    pub fn content(&self) -> BigInt {
        use num::Integer;
        let mut g = BigInt::zero();
        for (_, c) in self.iter() {
            g = g.gcd(c);
        }
        g
    }

    /// Chain product, extending the monomial product bilinearly.
    pub fn mul(&self, other: &Chain) -> Chain {
        let mut out = Chain::zero();
        for (mx, cx) in self.iter() {
            for (my, cy) in other.iter() {
                if let Some((k, m)) = mul_terms(mx, my) {
                    out.add_term(m, cx * cy * k);
                }
            }
        }
        out
    }

    /// JSON term list: `[{"coef": "...", "monomial": "..."}]` in basis order.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<_> = self
            .iter()
            .map(|(m, c)| serde_json::json!({"coef": c.to_string(), "monomial": m.to_string()}))
            .collect();
        serde_json::Value::Array(terms)
    }
}

trait ModFloorExt {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt;
}

impl ModFloorExt for BigInt {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt {
        use num::Integer;
        self.mod_floor(m)
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{m}")?;
            } else if (-c).is_one() {
                write!(f, "-{m}")?;
            } else {
                write!(f, "{c}·{m}")?;
            }
        }
        Ok(())
    }
}

/// Product of two monomials as a chain (zero or a single signed term).
pub fn multiply(x: &SpMonomial, y: &SpMonomial) -> Chain {
    let mut out = Chain::zero();
    if let Some((c, m)) = mul_terms(x, y) {
        out.add_term(m, c);
    }
    out
}

/// Boundary of a basis monomial.  Each divided factor SP^s(D_j) contributes
/// (abelianized word of D_j) * SP^{s-1}(D_j) spliced into the monomial, with
/// the derivation sign (-1)^t for passing over the t exterior generators.
pub fn boundary(x: &SpMonomial, p: &ComplexPresentation) -> Chain {
    let t = x.exterior().len();
    let dsign = if t % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    let mut out = Chain::zero();
    for &(cell, _) in x.powers() {
        let lowered = x.lower_power(cell);
        for (i, m) in p.abelianized_word(cell as usize).into_iter().enumerate() {
            if m == 0 {
                continue;
            }
            if let Some((sgn, mono)) = mul_terms(&lowered, &SpMonomial::circle(i as u32)) {
                out.add_term(mono, &dsign * BigInt::from(m) * sgn);
            }
        }
    }
    out
}

/// Boundary extended linearly to chains.
pub fn boundary_chain(c: &Chain, p: &ComplexPresentation) -> Chain {
    let mut out = Chain::zero();
    for (m, coeff) in c.iter() {
        for (bm, bc) in boundary(m, p).iter() {
            out.add_term(bm.clone(), bc * coeff);
        }
    }
    out
}

/// All basis monomials of filtration <= n, optionally restricted to one
/// degree, in basis order (degree, filtration, lexicographic).
pub fn enumerate_basis(
    p: &ComplexPresentation,
    n: usize,
    degree: Option<usize>,
) -> Vec<SpMonomial> {
    let mut out = Vec::new();
    let k = p.circle_count();
    let r = p.cell_count();

    // Choose the exterior subset, then distribute remaining filtration over
    // the cells.
    let mut subset: Vec<u32> = Vec::new();
    fn assign_powers(
        cell: usize,
        r: usize,
        budget: usize,
        subset: &[u32],
        powers: &mut Vec<(u32, u32)>,
        degree: Option<usize>,
        out: &mut Vec<SpMonomial>,
    ) {
        if cell == r {
            let m = SpMonomial::new(subset.to_vec(), powers.clone());
            if degree.map_or(true, |d| m.degree() == d) {
                out.push(m);
            }
            return;
        }
        for s in 0..=budget {
            if s > 0 {
                powers.push((cell as u32, s as u32));
            }
            assign_powers(cell + 1, r, budget - s, subset, powers, degree, out);
            if s > 0 {
                powers.pop();
            }
        }
    }
    fn choose_subset(
        next: usize,
        k: usize,
        n: usize,
        r: usize,
        subset: &mut Vec<u32>,
        degree: Option<usize>,
        out: &mut Vec<SpMonomial>,
    ) {
        if subset.len() <= n {
            let budget = n - subset.len();
            // Degree pruning: the exterior part alone contributes its length;
            // divided powers add an even amount between 0 and 2*budget.
            let viable = degree.map_or(true, |d| {
                d >= subset.len() && (d - subset.len()) % 2 == 0 && (d - subset.len()) / 2 <= budget
            });
            if viable {
                let mut powers = Vec::new();
                assign_powers(0, r, budget, subset, &mut powers, degree, out);
            }
        }
        if subset.len() == n {
            return;
        }
        for i in next..k {
            subset.push(i as u32);
            choose_subset(i + 1, k, n, r, subset, degree, out);
            subset.pop();
        }
    }
    choose_subset(0, k, n, r, &mut subset, degree, &mut out);
    out.sort();
    out
}

/// Basis of the chain complex indexed by degree, with reverse lookup.
/// `Full(n)` holds all monomials of filtration <= n; `Filtration(s)` holds
/// the monomials of filtration exactly s, which form a subcomplex of the
/// associated graded since the boundary preserves filtration.
pub struct SpBasis {
    by_degree: Vec<Vec<SpMonomial>>,
    index: HashMap<SpMonomial, (usize, usize)>,
}

impl SpBasis {
    pub fn full(p: &ComplexPresentation, n: usize) -> Self {
        Self::from_monomials(enumerate_basis(p, n, None), 2 * n)
    }

    /// The filtration-s slice: basis of the relative chain complex of the
    /// pair (SP^s, SP^{s-1}).
    pub fn filtration_slice(p: &ComplexPresentation, s: usize) -> Self {
        let monos = enumerate_basis(p, s, None)
            .into_iter()
            .filter(|m| m.filtration() == s)
            .collect();
        Self::from_monomials(monos, 2 * s)
    }

    fn from_monomials(monos: Vec<SpMonomial>, max_degree: usize) -> Self {
        let mut by_degree = vec![Vec::new(); max_degree + 1];
        for m in monos {
            by_degree[m.degree()].push(m);
        }
        for v in &mut by_degree {
            v.sort();
        }
        let mut index = HashMap::new();
        for (d, v) in by_degree.iter().enumerate() {
            for (i, m) in v.iter().enumerate() {
                index.insert(m.clone(), (d, i));
            }
        }
        SpBasis { by_degree, index }
    }

    pub fn max_degree(&self) -> usize {
        self.by_degree.len() - 1
    }

    pub fn degree(&self, d: usize) -> &[SpMonomial] {
        self.by_degree.get(d).map_or(&[], |v| v.as_slice())
    }

    pub fn dim(&self, d: usize) -> usize {
        self.degree(d).len()
    }

    pub fn index_of(&self, m: &SpMonomial) -> Option<(usize, usize)> {
        self.index.get(m).copied()
    }

    /// Matrix of the boundary from degree d to degree d-1 over this basis:
    /// rows are degree d-1 monomials, columns degree d monomials.
    pub fn boundary_matrix(&self, p: &ComplexPresentation, d: usize) -> SparseMatrix<BigInt> {
        let cols = self.degree(d);
        let rows = if d == 0 { &[] } else { self.degree(d - 1) };
        let mut m = SparseMatrix::new(rows.len(), cols.len());
        for (j, mono) in cols.iter().enumerate() {
            for (bm, bc) in boundary(mono, p).iter() {
                let (bd, bi) = self.index_of(bm).expect("boundary stays inside the basis");
                debug_assert_eq!(bd, d - 1);
                m.add_to(bi, j, bc.clone());
            }
        }
        m
    }

    /// Chain as a coordinate vector in degree d; None if a term is missing
    /// from the basis or has the wrong degree.
    pub fn vector_of(&self, c: &Chain, d: usize) -> Option<Vec<BigInt>> {
        let mut v = vec![BigInt::zero(); self.dim(d)];
        for (m, coeff) in c.iter() {
            let (md, mi) = self.index_of(m)?;
            if md != d {
                return None;
            }
            v[mi] = coeff.clone();
        }
        Some(v)
    }
}

/// Matrix of the boundary C_d -> C_{d-1} of the n-th symmetric product.
pub fn boundary_matrix(
    p: &ComplexPresentation,
    n: usize,
    d: usize,
) -> Result<SparseMatrix<BigInt>> {
    let basis = SpBasis::full(p, n);
    Ok(basis.boundary_matrix(p, d))
}
