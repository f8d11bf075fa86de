//! Randomized invariants for the algebraic layers: monomial algebra,
//! boundary, presentations, abelian-group arithmetic, and Smith forms.

use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};
use num::BigUint;
use proptest::prelude::*;

use spx_core::exactlinalg::{smith_normal_form, Field, PrimeField, SparseMatrix};
use spx_core::homology::AbGroup;
use spx_core::presentation::{parse_presentation, AttachingWord, ComplexPresentation, Letter};
use spx_core::spchain::{boundary, boundary_chain, multiply, Chain, SpMonomial};

fn arb_word(circles: usize) -> impl Strategy<Value = AttachingWord> {
    proptest::collection::vec((0..circles, any::<bool>()), 0..=6).prop_map(|letters| {
        AttachingWord::new(
            letters
                .into_iter()
                .map(|(circle, inverse)| Letter { circle, inverse })
                .collect(),
        )
    })
}

fn presentation_with(circles: usize, cells: usize) -> impl Strategy<Value = ComplexPresentation> {
    proptest::collection::vec(arb_word(circles), cells..=cells).prop_map(move |words| {
        let names: Vec<String> = (0..circles).map(|i| format!("c{}", i + 1)).collect();
        let cells: Vec<(String, AttachingWord)> = words
            .into_iter()
            .enumerate()
            .map(|(i, w)| (format!("D{}", i + 1), w))
            .collect();
        ComplexPresentation::new(names, cells).expect("names are distinct")
    })
}

fn arb_presentation() -> impl Strategy<Value = ComplexPresentation> {
    (1..=4usize, 0..=3usize).prop_flat_map(|(k, r)| presentation_with(k, r))
}

/// Monomials over at most `circles` circles and `cells` cells, with divided
/// powers up to three: well beyond the exhaustive sweeps elsewhere.
fn arb_monomial(circles: u32, cells: u32) -> impl Strategy<Value = SpMonomial> {
    (
        proptest::collection::btree_set(0..circles, 0..=circles as usize),
        proptest::collection::btree_map(0..cells, 1u32..=3, 0..=cells as usize),
    )
        .prop_map(|(ext, pows)| {
            SpMonomial::new(ext.into_iter().collect(), pows.into_iter().collect())
        })
}

fn chain_mul_right(c: &Chain, y: &SpMonomial) -> Chain {
    let mut out = Chain::zero();
    for (m, coeff) in c.iter() {
        for (m2, c2) in multiply(m, y).iter() {
            out.add_term(m2.clone(), coeff * c2);
        }
    }
    out
}

fn chain_mul_left(x: &SpMonomial, c: &Chain) -> Chain {
    let mut out = Chain::zero();
    for (m, coeff) in c.iter() {
        for (m2, c2) in multiply(x, m).iter() {
            out.add_term(m2.clone(), coeff * c2);
        }
    }
    out
}

/// Rank of a small integer matrix by fraction-free elimination (Bareiss),
/// independent of the library's linear algebra.
fn bareiss_rank(mut a: Vec<Vec<i128>>) -> usize {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut rank = 0usize;
    let mut prev = 1i128;
    let mut row = 0usize;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(pivot) = (row..rows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(row, pivot);
        for r in (row + 1)..rows {
            for c in (col + 1)..cols {
                // Sylvester's identity keeps this division exact.
                a[r][c] = (a[row][col] * a[r][c] - a[r][col] * a[row][c]) / prev;
            }
            a[r][col] = 0;
        }
        prev = a[row][col];
        rank += 1;
        row += 1;
    }
    rank
}

fn det_i128(a: &[Vec<i128>]) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return a[0][0];
    }
    let mut det = 0i128;
    for (j, lead) in a[0].iter().enumerate() {
        if *lead == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> = a[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        det += sign * lead * det_i128(&minor);
    }
    det
}

fn arb_abgroup() -> impl Strategy<Value = AbGroup> {
    (
        0..=3usize,
        proptest::collection::vec(
            proptest::sample::select(vec![2u64, 3, 4, 5, 6, 8, 9, 12]),
            0..=3,
        ),
    )
        .prop_map(|(rank, torsion)| {
            let torsion: Vec<BigUint> = torsion.into_iter().map(BigUint::from).collect();
            AbGroup::from_parts(rank, &torsion)
        })
}

proptest! {
    #[test]
    fn parse_render_roundtrip(p in arb_presentation()) {
        let text = p.render();
        let q = parse_presentation(&text).unwrap();
        prop_assert_eq!(&p, &q);
        prop_assert_eq!(text, q.render());
    }

    #[test]
    fn abelianization_counts_signed_letters(p in arb_presentation()) {
        for cell in 0..p.cell_count() {
            let mut counts = vec![0i64; p.circle_count()];
            for l in &p.word(cell).letters {
                counts[l.circle] += l.sign();
            }
            prop_assert_eq!(p.abelianized_word(cell), counts);
        }
    }

    #[test]
    fn product_is_graded_commutative(
        x in arb_monomial(4, 3),
        y in arb_monomial(4, 3),
    ) {
        let xy = multiply(&x, &y);
        let sign = if (x.degree() * y.degree()) % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        prop_assert_eq!(xy, multiply(&y, &x).scale(&sign));
    }

    #[test]
    fn product_is_associative(
        x in arb_monomial(3, 2),
        y in arb_monomial(3, 2),
        z in arb_monomial(3, 2),
    ) {
        let lhs = chain_mul_right(&multiply(&x, &y), &z);
        let rhs = chain_mul_left(&x, &multiply(&y, &z));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn product_adds_degrees_and_filtrations(
        x in arb_monomial(4, 3),
        y in arb_monomial(4, 3),
    ) {
        for (m, c) in multiply(&x, &y).iter() {
            prop_assert!(!c.is_zero());
            prop_assert_eq!(m.degree(), x.degree() + y.degree());
            prop_assert_eq!(m.filtration(), x.filtration() + y.filtration());
        }
    }

    #[test]
    fn unit_monomial_is_neutral(x in arb_monomial(4, 3)) {
        let unit = SpMonomial::one();
        prop_assert_eq!(multiply(&x, &unit), Chain::from_monomial(x.clone()));
        prop_assert_eq!(multiply(&unit, &x), Chain::from_monomial(x));
    }

    #[test]
    fn boundary_squares_to_zero(
        p in presentation_with(4, 3),
        x in arb_monomial(4, 3),
    ) {
        prop_assert!(boundary_chain(&boundary(&x, &p), &p).is_zero());
    }

    #[test]
    fn boundary_preserves_filtration_and_drops_degree(
        p in presentation_with(4, 3),
        x in arb_monomial(4, 3),
    ) {
        for (m, _) in boundary(&x, &p).iter() {
            prop_assert_eq!(m.degree() + 1, x.degree());
            prop_assert_eq!(m.filtration(), x.filtration());
        }
    }

    #[test]
    fn boundary_is_a_derivation(
        p in presentation_with(3, 2),
        x in arb_monomial(3, 2),
        y in arb_monomial(3, 2),
    ) {
        let lhs = boundary_chain(&multiply(&x, &y), &p);
        let sign = if x.degree() % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        let rhs = chain_mul_right(&boundary(&x, &p), &y)
            .add(&chain_mul_left(&x, &boundary(&y, &p)).scale(&sign));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn abgroup_tensor_is_symmetric(a in arb_abgroup(), b in arb_abgroup()) {
        prop_assert_eq!(a.tensor(&b), b.tensor(&a));
    }

    #[test]
    fn abgroup_tor_is_symmetric(a in arb_abgroup(), b in arb_abgroup()) {
        prop_assert_eq!(a.tor(&b), b.tor(&a));
    }

    #[test]
    fn abgroup_tensor_unit_and_tor_free(a in arb_abgroup(), r in 0..=3usize) {
        prop_assert_eq!(a.tensor(&AbGroup::free(1)), a.clone());
        prop_assert!(a.tor(&AbGroup::free(r)).is_zero());
    }

    #[test]
    fn abgroup_tensor_distributes_over_sum(
        a in arb_abgroup(),
        b in arb_abgroup(),
        c in arb_abgroup(),
    ) {
        let lhs = a.direct_sum(&b).tensor(&c);
        let rhs = a.tensor(&c).direct_sum(&b.tensor(&c));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn smith_form_divisibility_and_rank(
        entries in proptest::collection::vec(-9i64..=9, 16..=16),
    ) {
        let mut m = SparseMatrix::<BigInt>::new(4, 4);
        let mut dense = vec![vec![0i128; 4]; 4];
        for (i, &v) in entries.iter().enumerate() {
            let (r, c) = (i / 4, i % 4);
            dense[r][c] = v as i128;
            m.set(r, c, BigInt::from(v));
        }
        let snf = smith_normal_form(&m);
        for w in snf.invariant_factors.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero(), "{} does not divide {}", w[0], w[1]);
        }
        for d in &snf.invariant_factors {
            prop_assert!(d > &BigInt::zero());
        }
        prop_assert_eq!(snf.rank(), bareiss_rank(dense.clone()));
        let det = det_i128(&dense);
        if det != 0 {
            let product = snf
                .invariant_factors
                .iter()
                .fold(BigInt::one(), |acc, d| acc * d);
            prop_assert_eq!(product, BigInt::from(det).abs());
        }
    }

    #[test]
    fn prime_field_from_int_is_a_homomorphism(
        p in proptest::sample::select(vec![2u64, 3, 5, 7, 11]),
        a in -200i64..=200,
        b in -200i64..=200,
    ) {
        let f = PrimeField::new(p).unwrap();
        let (x, y) = (BigInt::from(a), BigInt::from(b));
        let fx = f.from_int(&x);
        let fy = f.from_int(&y);
        prop_assert_eq!(f.add(&fx, &fy), f.from_int(&(&x + &y)));
        prop_assert_eq!(f.mul(&fx, &fy), f.from_int(&(&x * &y)));
        if !f.is_zero(&fx) {
            let inv = f.inv(&fx);
            prop_assert!(f.is_one(&f.mul(&fx, &inv)));
        }
    }
}
