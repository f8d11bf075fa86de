//! Homology of the symmetric-product chain complex.
//!
//! Integral homology is computed from Smith normal forms of the boundary
//! matrices; field coefficients use exact rank computations.  The boundary
//! preserves the number-of-points filtration, so the complex splits as a
//! direct sum of filtration blocks; `bigraded_homology` computes the blocks
//! and `splitting_check` confirms they add up to the total.  The module also
//! carries the small algebra of finitely generated abelian groups (direct
//! sum, tensor, Tor) used to state the wedge-decomposition and stable-limit
//! predictions.

use std::collections::BTreeSet;
use std::fmt;

use num::bigint::{BigInt, BigUint};
use num::traits::{One, Zero};
use num::Integer;

use crate::error::Result;
use crate::exactlinalg::{
    field_rank_kernel, smith_normal_form, PrimeField, Rationals, SparseMatrix,
};
use crate::presentation::{moore_decomposition, ComplexPresentation, HomologyShape};
use crate::spchain::SpBasis;
use crate::Coefficients;

/// Prime-power factors of m (elementary divisors of Z/m), ascending.
/// m = 0 and m = 1 yield no factors.
pub fn prime_power_split(m: &BigUint) -> Vec<BigUint> {
    let mut out = Vec::new();
    let mut m = m.clone();
    if m <= BigUint::one() {
        return out;
    }
    let mut p = BigUint::from(2u32);
    while &p * &p <= m {
        if (&m % &p).is_zero() {
            let mut q = BigUint::one();
            while (&m % &p).is_zero() {
                m /= &p;
                q *= &p;
            }
            out.push(q);
        }
        p += 1u32;
    }
    if m > BigUint::one() {
        out.push(m);
    }
    out.sort();
    out
}

/// Distinct primes dividing m.
pub fn prime_divisors(m: &BigUint) -> Vec<BigUint> {
    let mut out = Vec::new();
    let mut m = m.clone();
    let mut p = BigUint::from(2u32);
    while &p * &p <= m {
        if (&m % &p).is_zero() {
            out.push(p.clone());
            while (&m % &p).is_zero() {
                m /= &p;
            }
        }
        p += 1u32;
    }
    if m > BigUint::one() {
        out.push(m);
    }
    out
}

/// A finitely generated abelian group in the normal form
/// Z^free + sum of Z/q with q the prime-power elementary divisors, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AbGroup {
    pub free: usize,
    pub torsion: Vec<BigUint>,
}

impl AbGroup {
    pub fn zero() -> Self {
        AbGroup::default()
    }

    pub fn free(rank: usize) -> Self {
        AbGroup {
            free: rank,
            torsion: vec![],
        }
    }

    /// Z/m, split into elementary divisors (so Z/6 becomes Z/2 + Z/3).
    pub fn cyclic(m: &BigUint) -> Self {
        AbGroup {
            free: 0,
            torsion: prime_power_split(m),
        }
    }

    /// Normal form from arbitrary torsion coefficients.
    pub fn from_parts(free: usize, torsion: &[BigUint]) -> Self {
        let mut t = Vec::new();
        for m in torsion {
            t.extend(prime_power_split(m));
        }
        t.sort();
        AbGroup { free, torsion: t }
    }

    pub fn is_zero(&self) -> bool {
        self.free == 0 && self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &AbGroup) -> AbGroup {
        let mut torsion = self.torsion.clone();
        torsion.extend(other.torsion.iter().cloned());
        torsion.sort();
        AbGroup {
            free: self.free + other.free,
            torsion,
        }
    }

    /// Tensor product: Z/a (x) Z/b = Z/gcd(a, b), free parts multiply.
    pub fn tensor(&self, other: &AbGroup) -> AbGroup {
        let mut torsion = Vec::new();
        for t in &self.torsion {
            for _ in 0..other.free {
                torsion.push(t.clone());
            }
        }
        for s in &other.torsion {
            for _ in 0..self.free {
                torsion.push(s.clone());
            }
        }
        for t in &self.torsion {
            for s in &other.torsion {
                let g = t.gcd(s);
                if g > BigUint::one() {
                    torsion.push(g);
                }
            }
        }
        torsion.sort();
        AbGroup {
            free: self.free * other.free,
            torsion,
        }
    }

    /// Tor: vanishes against free parts, Tor(Z/a, Z/b) = Z/gcd(a, b).
    pub fn tor(&self, other: &AbGroup) -> AbGroup {
        let mut torsion = Vec::new();
        for t in &self.torsion {
            for s in &other.torsion {
                let g = t.gcd(s);
                if g > BigUint::one() {
                    torsion.push(g);
                }
            }
        }
        torsion.sort();
        AbGroup { free: 0, torsion }
    }

    pub fn torsion_primes(&self) -> BTreeSet<BigUint> {
        self.torsion
            .iter()
            .flat_map(|t| prime_divisors(t))
            .collect()
    }
}

impl AbGroup {
    /// Rendering with the free part written over `symbol` (`Z`, `Q`, `F2`):
    /// field homology prints as a power of the field, not of Z.
    pub fn render_over(&self, symbol: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        match self.free {
            0 => {}
            1 => parts.push(symbol.to_string()),
            r => parts.push(format!("{symbol}^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let mut j = i;
            while j < self.torsion.len() && self.torsion[j] == self.torsion[i] {
                j += 1;
            }
            let q = &self.torsion[i];
            if j - i == 1 {
                parts.push(format!("Z/{q}"));
            } else {
                parts.push(format!("(Z/{q})^{}", j - i));
            }
            i = j;
        }
        parts.join(" + ")
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_over("Z"))
    }
}

/// A homology group in a fixed degree.  Over a field the torsion list is
/// empty and `free_rank` is the dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroup {
    pub degree: usize,
    pub free_rank: usize,
    /// Prime-power elementary divisors, ascending.
    pub torsion: Vec<BigUint>,
}

impl HomologyGroup {
    pub fn new(degree: usize, group: AbGroup) -> Self {
        HomologyGroup {
            degree,
            free_rank: group.free,
            torsion: group.torsion,
        }
    }

    pub fn group(&self) -> AbGroup {
        AbGroup {
            free: self.free_rank,
            torsion: self.torsion.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "degree": self.degree,
            "free_rank": self.free_rank,
            "torsion": self.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.group())
    }
}

fn homology_of_basis(
    p: &ComplexPresentation,
    basis: &SpBasis,
    coeff: Coefficients,
) -> Result<Vec<HomologyGroup>> {
    let maxd = basis.max_degree();
    let mats: Vec<SparseMatrix<BigInt>> = (0..=maxd + 1)
        .map(|d| basis.boundary_matrix(p, d))
        .collect();
    let mut out = Vec::with_capacity(maxd + 1);
    match coeff {
        Coefficients::Integers => {
            let snf: Vec<_> = mats.iter().map(smith_normal_form).collect();
            for d in 0..=maxd {
                let dim = basis.dim(d);
                let rank_in = snf[d + 1].rank();
                let rank_out = snf[d].rank();
                let free = dim - rank_out - rank_in;
                let torsion: Vec<BigUint> = snf[d + 1]
                    .torsion_factors()
                    .iter()
                    .map(|f| f.magnitude().clone())
                    .collect();
                out.push(HomologyGroup::new(d, AbGroup::from_parts(free, &torsion)));
            }
        }
        Coefficients::Rationals => {
            let ranks: Vec<usize> = mats
                .iter()
                .map(|m| field_rank_kernel(&Rationals, m).rank)
                .collect();
            for d in 0..=maxd {
                let dim = basis.dim(d);
                out.push(HomologyGroup::new(
                    d,
                    AbGroup::free(dim - ranks[d] - ranks[d + 1]),
                ));
            }
        }
        Coefficients::Mod(q) => {
            coeff.require_field()?;
            let field = PrimeField::new(q)?;
            let ranks: Vec<usize> = mats
                .iter()
                .map(|m| field_rank_kernel(&field, m).rank)
                .collect();
            for d in 0..=maxd {
                let dim = basis.dim(d);
                out.push(HomologyGroup::new(
                    d,
                    AbGroup::free(dim - ranks[d] - ranks[d + 1]),
                ));
            }
        }
    }
    Ok(out)
}

/// Homology of the n-th symmetric product in degrees 0..=2n.
pub fn homology(
    p: &ComplexPresentation,
    n: usize,
    coeff: Coefficients,
) -> Result<Vec<HomologyGroup>> {
    let basis = SpBasis::full(p, n);
    homology_of_basis(p, &basis, coeff)
}

/// Homology of the filtration-s block (the monomials moving exactly s
/// points), degrees 0..=2s.
pub fn block_homology(
    p: &ComplexPresentation,
    s: usize,
    coeff: Coefficients,
) -> Result<Vec<HomologyGroup>> {
    let basis = SpBasis::filtration_slice(p, s);
    homology_of_basis(p, &basis, coeff)
}

/// The bigraded table: blocks[s][d] for 0 <= s <= n, 0 <= d <= 2s.
#[derive(Debug, Clone)]
pub struct BigradedHomology {
    pub n: usize,
    pub blocks: Vec<Vec<HomologyGroup>>,
}

impl BigradedHomology {
    pub fn group(&self, s: usize, d: usize) -> Option<&HomologyGroup> {
        self.blocks.get(s).and_then(|b| b.get(d))
    }

    /// Text table: rows are degrees, columns filtrations.
    pub fn render(&self) -> String {
        self.render_over(Coefficients::Integers)
    }

    /// As `render`, with free parts written over the coefficient symbol.
    pub fn render_over(&self, coeff: Coefficients) -> String {
        let symbol = coeff.to_string();
        let mut cells = vec![vec![String::new(); self.n + 1]; 2 * self.n + 1];
        for (s, block) in self.blocks.iter().enumerate() {
            for g in block {
                cells[g.degree][s] = g.group().render_over(&symbol);
            }
        }
        for row in &mut cells {
            for c in row.iter_mut() {
                if c.is_empty() || c == "0" {
                    *c = ".".to_string();
                }
            }
        }
        let mut widths = vec![0usize; self.n + 1];
        for row in &cells {
            for (s, c) in row.iter().enumerate() {
                widths[s] = widths[s].max(c.len()).max(format!("s={s}").len());
            }
        }
        let mut out = String::new();
        out.push_str("deg |");
        for s in 0..=self.n {
            out.push_str(&format!(" {:>w$}", format!("s={s}"), w = widths[s]));
        }
        out.push('\n');
        out.push_str(&"-".repeat(5 + widths.iter().map(|w| w + 1).sum::<usize>()));
        out.push('\n');
        for d in (0..=2 * self.n).rev() {
            out.push_str(&format!("{d:>3} |"));
            for s in 0..=self.n {
                out.push_str(&format!(" {:>w$}", cells[d][s], w = widths[s]));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let blocks: Vec<serde_json::Value> = self
            .blocks
            .iter()
            .enumerate()
            .map(|(s, b)| {
                serde_json::json!({
                    "filtration": s,
                    "groups": b.iter().filter(|g| !g.is_zero()).map(|g| g.to_json()).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({"n": self.n, "blocks": blocks})
    }
}

/// Bigraded homology of the n-th symmetric product.
pub fn bigraded_homology(
    p: &ComplexPresentation,
    n: usize,
    coeff: Coefficients,
) -> Result<BigradedHomology> {
    let mut blocks = Vec::with_capacity(n + 1);
    for s in 0..=n {
        blocks.push(block_homology(p, s, coeff)?);
    }
    Ok(BigradedHomology { n, blocks })
}

/// One line per degree: `H_2 = Z + Z/2`.
pub fn betti_table(groups: &[HomologyGroup]) -> String {
    betti_table_over(groups, Coefficients::Integers)
}

/// As `betti_table`, writing free parts over the coefficient symbol, so
/// mod-p homology reads `H_1 = F2^2` rather than `Z^2`.
pub fn betti_table_over(groups: &[HomologyGroup], coeff: Coefficients) -> String {
    let symbol = coeff.to_string();
    let mut out = String::new();
    for g in groups {
        out.push_str(&format!(
            "H_{} = {}\n",
            g.degree,
            g.group().render_over(&symbol)
        ));
    }
    out
}

/// Direct sum of graded groups, aligned by degree.
fn graded_sum(a: &[AbGroup], b: &[AbGroup]) -> Vec<AbGroup> {
    let len = a.len().max(b.len());
    let zero = AbGroup::zero();
    (0..len)
        .map(|d| {
            a.get(d)
                .unwrap_or(&zero)
                .direct_sum(b.get(d).unwrap_or(&zero))
        })
        .collect()
}

/// Graded tensor product; `with_tor` adds the degree-shifted Tor terms of
/// the Kuenneth formula.
fn graded_tensor(a: &[AbGroup], b: &[AbGroup], with_tor: bool) -> Vec<AbGroup> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let len = a.len() + b.len() - 1 + usize::from(with_tor);
    let mut out = vec![AbGroup::zero(); len];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].direct_sum(&x.tensor(y));
            if with_tor {
                out[i + j + 1] = out[i + j + 1].direct_sum(&x.tor(y));
            }
        }
    }
    out
}

fn trim_graded(mut g: Vec<AbGroup>) -> Vec<AbGroup> {
    while g.last().map_or(false, |x| x.is_zero()) {
        g.pop();
    }
    g
}

/// The wedge pieces of a complex, read off its homology shape: one circle
/// per free rank in degree 1, one 2-sphere per free rank in degree 2, and
/// one m-attached piece per torsion coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WedgePiece {
    Circle,
    TwoSphere,
    Torsion(BigUint),
}

pub fn wedge_pieces(shape: &HomologyShape) -> Vec<WedgePiece> {
    let mut pieces = Vec::new();
    for _ in 0..shape.free_rank_deg1 {
        pieces.push(WedgePiece::Circle);
    }
    for _ in 0..shape.free_rank_deg2 {
        pieces.push(WedgePiece::TwoSphere);
    }
    for m in &shape.torsion_coefficients {
        pieces.push(WedgePiece::Torsion(m.clone()));
    }
    pieces
}

/// Homology of the filtration-i block of one wedge piece.
///
/// For a circle the block vanishes once i >= 2; for a 2-sphere it is Z in
/// degree 2i; for an m-attached piece it is Z/m in degree 2i - 1.
fn piece_block(piece: &WedgePiece, i: usize) -> Vec<AbGroup> {
    if i == 0 {
        return vec![AbGroup::free(1)];
    }
    match piece {
        WedgePiece::Circle => {
            if i == 1 {
                let mut g = vec![AbGroup::zero(); 2];
                g[1] = AbGroup::free(1);
                g
            } else {
                vec![]
            }
        }
        WedgePiece::TwoSphere => {
            let mut g = vec![AbGroup::zero(); 2 * i + 1];
            g[2 * i] = AbGroup::free(1);
            g
        }
        WedgePiece::Torsion(m) => {
            let mut g = vec![AbGroup::zero(); 2 * i];
            g[2 * i - 1] = AbGroup::cyclic(m);
            g
        }
    }
}

/// Outcome of comparing a computed graded group against a predicted one.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub ok: bool,
    pub lhs: Vec<HomologyGroup>,
    pub rhs: Vec<HomologyGroup>,
    pub mismatches: Vec<String>,
}

fn compare_graded(lhs: &[AbGroup], rhs: &[AbGroup]) -> Vec<String> {
    let len = lhs.len().max(rhs.len());
    let zero = AbGroup::zero();
    let mut mismatches = Vec::new();
    for d in 0..len {
        let l = lhs.get(d).unwrap_or(&zero);
        let r = rhs.get(d).unwrap_or(&zero);
        if l != r {
            mismatches.push(format!("degree {d}: computed {l}, predicted {r}"));
        }
    }
    mismatches
}

fn to_homology_groups(g: &[AbGroup]) -> Vec<HomologyGroup> {
    g.iter()
        .enumerate()
        .map(|(d, a)| HomologyGroup::new(d, a.clone()))
        .collect()
}

/// Compare the homology of the filtration-n block with the direct sum over
/// all ways of spreading n over the wedge pieces of the tensor product of
/// the pieces' blocks.
pub fn decomposition_check(p: &ComplexPresentation, n: usize) -> Result<ComparisonReport> {
    let lhs: Vec<AbGroup> = block_homology(p, n, Coefficients::Integers)?
        .iter()
        .map(|g| g.group())
        .collect();

    let shape = moore_decomposition(p);
    let pieces = wedge_pieces(&shape);
    let mut rhs = vec![AbGroup::zero()];
    let mut assignment = vec![0usize; pieces.len()];
    fn spread(
        idx: usize,
        remaining: usize,
        pieces: &[WedgePiece],
        assignment: &mut Vec<usize>,
        acc: &mut Vec<AbGroup>,
    ) {
        if idx == pieces.len() {
            if remaining != 0 {
                return;
            }
            let mut term = vec![AbGroup::free(1)];
            for (piece, &i) in pieces.iter().zip(assignment.iter()) {
                term = graded_tensor(&term, &piece_block(piece, i), false);
                if term.is_empty() {
                    return;
                }
            }
            *acc = graded_sum(acc, &term);
            return;
        }
        for i in 0..=remaining {
            assignment[idx] = i;
            spread(idx + 1, remaining - i, pieces, assignment, acc);
        }
        assignment[idx] = 0;
    }
    if n == 0 {
        rhs = vec![AbGroup::free(1)];
    } else if pieces.is_empty() {
        rhs = vec![];
    } else {
        let mut acc = vec![];
        spread(0, n, &pieces, &mut assignment, &mut acc);
        rhs = acc;
    }
    // Degree 0 belongs to the basepoint component only when n = 0; the
    // block complex for n >= 1 has no degree-0 part, and neither does any
    // composition with every piece in positive filtration.  Compositions
    // that leave a piece at filtration 0 contribute its unit.
    let lhs = trim_graded(lhs);
    let rhs = trim_graded(rhs);
    let mismatches = compare_graded(&lhs, &rhs);
    Ok(ComparisonReport {
        ok: mismatches.is_empty(),
        lhs: to_homology_groups(&lhs),
        rhs: to_homology_groups(&rhs),
        mismatches,
    })
}

/// Homology of the infinite symmetric product through `max_degree`, via the
/// product of Eilenberg-MacLane spaces attached to the homology shape:
/// a circle factor per free rank in degree 1, a CP^infinity factor per free
/// rank in degree 2, and an infinite lens factor per torsion coefficient.
pub fn stable_prediction(shape: &HomologyShape, max_degree: usize) -> Vec<HomologyGroup> {
    let len = max_degree + 1;
    let circle: Vec<AbGroup> = vec![AbGroup::free(1), AbGroup::free(1)];
    let mut cp_inf = vec![AbGroup::zero(); len];
    for d in (0..len).step_by(2) {
        cp_inf[d] = AbGroup::free(1);
    }
    let mut acc = vec![AbGroup::free(1)];
    for _ in 0..shape.free_rank_deg1 {
        acc = graded_tensor(&acc, &circle, true);
        acc.truncate(len);
    }
    for _ in 0..shape.free_rank_deg2 {
        acc = graded_tensor(&acc, &cp_inf, true);
        acc.truncate(len);
    }
    for m in &shape.torsion_coefficients {
        let mut lens = vec![AbGroup::zero(); len];
        lens[0] = AbGroup::free(1);
        for d in (1..len).step_by(2) {
            lens[d] = AbGroup::cyclic(m);
        }
        acc = graded_tensor(&acc, &lens, true);
        acc.truncate(len);
    }
    acc.resize(len, AbGroup::zero());
    to_homology_groups(&acc)
}

/// Result of a stability scan: the limiting groups plus any degree where
/// H_i still moved inside the window.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub max_degree: usize,
    pub ok: bool,
    pub stable: Vec<HomologyGroup>,
    pub failures: Vec<String>,
}

/// H_i of the n-th symmetric product no longer depends on n once n >= i.
/// Checks the window i <= n <= max_degree + 1 and returns the limit groups.
pub fn stability_check(
    p: &ComplexPresentation,
    max_degree: usize,
    coeff: Coefficients,
) -> Result<StabilityReport> {
    let nmax = max_degree + 1;
    let mut per_n: Vec<Vec<HomologyGroup>> = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        per_n.push(homology(p, n, coeff)?);
    }
    let mut failures = Vec::new();
    let mut stable = Vec::with_capacity(max_degree + 1);
    for i in 0..=max_degree {
        let limit = per_n[nmax]
            .get(i)
            .cloned()
            .unwrap_or(HomologyGroup::new(i, AbGroup::zero()));
        for n in i.max(1)..=nmax {
            let here = per_n[n]
                .get(i)
                .cloned()
                .unwrap_or(HomologyGroup::new(i, AbGroup::zero()));
            if here != limit {
                failures.push(format!(
                    "H_{i} changed between n={n} ({}) and n={nmax} ({})",
                    here.group(),
                    limit.group()
                ));
            }
        }
        stable.push(limit);
    }
    Ok(StabilityReport {
        max_degree,
        ok: failures.is_empty(),
        stable,
        failures,
    })
}

/// Compare the stable groups against the Eilenberg-MacLane prediction.
pub fn stable_limit_check(p: &ComplexPresentation, max_degree: usize) -> Result<ComparisonReport> {
    let report = stability_check(p, max_degree, Coefficients::Integers)?;
    let shape = moore_decomposition(p);
    let predicted = stable_prediction(&shape, max_degree);
    let lhs: Vec<AbGroup> = report.stable.iter().map(|g| g.group()).collect();
    let rhs: Vec<AbGroup> = predicted.iter().map(|g| g.group()).collect();
    let mut mismatches = compare_graded(&lhs, &rhs);
    if !report.ok {
        mismatches.extend(report.failures);
    }
    Ok(ComparisonReport {
        ok: mismatches.is_empty(),
        lhs: report.stable,
        rhs: predicted,
        mismatches,
    })
}

/// The filtration blocks add up to the homology of the whole complex.
pub fn splitting_check(
    p: &ComplexPresentation,
    n: usize,
    coeff: Coefficients,
) -> Result<ComparisonReport> {
    let total: Vec<AbGroup> = homology(p, n, coeff)?.iter().map(|g| g.group()).collect();
    let mut sum: Vec<AbGroup> = vec![];
    for s in 0..=n {
        let block: Vec<AbGroup> = block_homology(p, s, coeff)?
            .iter()
            .map(|g| g.group())
            .collect();
        sum = graded_sum(&sum, &block);
    }
    let total = trim_graded(total);
    let sum = trim_graded(sum);
    let mismatches = compare_graded(&total, &sum);
    Ok(ComparisonReport {
        ok: mismatches.is_empty(),
        lhs: to_homology_groups(&total),
        rhs: to_homology_groups(&sum),
        mismatches,
    })
}

/// Every prime in the torsion of the symmetric-product homology divides a
/// torsion coefficient of the underlying complex.
#[derive(Debug, Clone)]
pub struct TorsionPrimeReport {
    pub ok: bool,
    pub homology_primes: Vec<BigUint>,
    pub allowed_primes: Vec<BigUint>,
}

pub fn torsion_prime_check(p: &ComplexPresentation, n: usize) -> Result<TorsionPrimeReport> {
    let groups = homology(p, n, Coefficients::Integers)?;
    let mut homology_primes: BTreeSet<BigUint> = BTreeSet::new();
    for g in &groups {
        homology_primes.extend(g.group().torsion_primes());
    }
    let shape = moore_decomposition(p);
    let mut allowed: BTreeSet<BigUint> = BTreeSet::new();
    for m in &shape.torsion_coefficients {
        allowed.extend(prime_divisors(m));
    }
    let ok = homology_primes.iter().all(|q| allowed.contains(q));
    Ok(TorsionPrimeReport {
        ok,
        homology_primes: homology_primes.into_iter().collect(),
        allowed_primes: allowed.into_iter().collect(),
    })
}

/// Dimensions over F_q predicted by the universal coefficient theorem from
/// integral homology: free rank plus q-torsion in this and the previous
/// degree.
pub fn uct_field_dims(integral: &[HomologyGroup], q: u64) -> Vec<usize> {
    let qq = BigUint::from(q);
    let torsion_count =
        |g: &HomologyGroup| g.torsion.iter().filter(|t| (*t % &qq).is_zero()).count();
    integral
        .iter()
        .enumerate()
        .map(|(d, g)| {
            let below = if d == 0 {
                0
            } else {
                torsion_count(&integral[d - 1])
            };
            g.free_rank + torsion_count(g) + below
        })
        .collect()
}

/// Rational Betti numbers predicted from integral homology.
pub fn rational_betti(integral: &[HomologyGroup]) -> Vec<usize> {
    integral.iter().map(|g| g.free_rank).collect()
}
