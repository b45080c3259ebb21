//! Linear algebra over a finite chain ring.
//!
//! Everything here is written against [`ChainRing`], so the same routines
//! serve `Z/p^r` (module bookkeeping in coordinates) and the Galois ring
//! itself (rank of the parity-check matrix, encoding).
//!
//! Pivoting always selects an entry of minimum `p`-valuation in the active
//! submatrix, ties broken by lowest row then lowest column. Over a chain ring
//! such a pivot divides every other entry, so elimination never needs gcds.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::matrix::{col_sub_mul, row_sub_mul, scale_row, Matrix};
use crate::ring::ChainRing;

/// A Smith normal form `D = S * A * T` with `S`, `T` invertible and the
/// nonzero diagonal entries of `D` equal to `p^{j_1}, p^{j_2}, ...` with
/// nondecreasing exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf<E> {
    pub s: Matrix<E>,
    pub d: Matrix<E>,
    pub t: Matrix<E>,
}

impl<E: Clone> Snf<E> {
    pub fn diagonal(&self) -> Vec<E> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }
}

fn find_pivot<R: ChainRing>(ring: &R, a: &Matrix<R::Elem>, k: usize) -> Option<(usize, usize, u32)> {
    let mut best: Option<(usize, usize, u32)> = None;
    for i in k..a.rows() {
        for j in k..a.cols() {
            if let Some(v) = ring.valuation(&a[(i, j)]) {
                if best.map_or(true, |(_, _, bv)| v < bv) {
                    best = Some((i, j, v));
                    if v == 0 {
                        return best;
                    }
                }
            }
        }
    }
    best
}

/// Diagonalizes `a` in place. Row operations are mirrored on `left` (any
/// matrix with `a.rows()` rows), column operations on `right` (any matrix with
/// `a.cols()` columns). Returns the diagonal valuations of the nonzero pivots.
fn diagonalize<R: ChainRing>(
    ring: &R,
    a: &mut Matrix<R::Elem>,
    mut left: Option<&mut Matrix<R::Elem>>,
    mut right: Option<&mut Matrix<R::Elem>>,
) -> Vec<u32> {
    let mut vals = Vec::new();
    let steps = a.rows().min(a.cols());
    for k in 0..steps {
        let Some((pi, pj, v)) = find_pivot(ring, a, k) else {
            break;
        };
        a.swap_rows(k, pi);
        a.swap_cols(k, pj);
        if let Some(l) = left.as_deref_mut() {
            l.swap_rows(k, pi);
        }
        if let Some(r) = right.as_deref_mut() {
            r.swap_cols(k, pj);
        }
        let (_, unit) = ring.valuation_decompose(&a[(k, k)]).expect("pivot is nonzero");
        if unit != ring.one() {
            let inv = ring.inverse(&unit).expect("unit part is invertible");
            scale_row(ring, a, k, &inv);
            if let Some(l) = left.as_deref_mut() {
                scale_row(ring, l, k, &inv);
            }
        }
        for i in k + 1..a.rows() {
            if ring.is_zero(&a[(i, k)]) {
                continue;
            }
            let c = ring.div_p_power(&a[(i, k)], v);
            row_sub_mul(ring, a, i, &c, k, k);
            if let Some(l) = left.as_deref_mut() {
                row_sub_mul(ring, l, i, &c, k, 0);
            }
        }
        for j in k + 1..a.cols() {
            if ring.is_zero(&a[(k, j)]) {
                continue;
            }
            let c = ring.div_p_power(&a[(k, j)], v);
            // column k is zero outside row k by now
            a[(k, j)] = ring.zero();
            if let Some(r) = right.as_deref_mut() {
                col_sub_mul(ring, r, j, &c, k);
            }
        }
        vals.push(v);
    }
    vals
}

pub fn snf<R: ChainRing>(ring: &R, a: &Matrix<R::Elem>) -> Snf<R::Elem> {
    let mut d = a.clone();
    let mut s = Matrix::identity(ring, a.rows());
    let mut t = Matrix::identity(ring, a.cols());
    diagonalize(ring, &mut d, Some(&mut s), Some(&mut t));
    Snf { s, d, t }
}

/// Valuations of the nonzero Smith diagonal, nondecreasing.
pub fn snf_valuations<R: ChainRing>(ring: &R, a: &Matrix<R::Elem>) -> Vec<u32> {
    let mut d = a.clone();
    diagonalize(ring, &mut d, None, None)
}

/// `(rank, free rank)`: counts of nonzero and of unit Smith diagonal entries.
pub fn rank_profile<R: ChainRing>(ring: &R, a: &Matrix<R::Elem>) -> (usize, usize) {
    let vals = snf_valuations(ring, a);
    (vals.len(), vals.iter().filter(|&&v| v == 0).count())
}

pub fn rank<R: ChainRing>(ring: &R, a: &Matrix<R::Elem>) -> usize {
    rank_profile(ring, a).0
}

pub fn free_rank<R: ChainRing>(ring: &R, a: &Matrix<R::Elem>) -> usize {
    rank_profile(ring, a).1
}

/// Rows generating `{x : x * A = 0}`.
pub fn left_kernel<R: ChainRing>(ring: &R, a: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    let mut d = a.clone();
    let mut s = Matrix::identity(ring, a.rows());
    let vals = diagonalize(ring, &mut d, Some(&mut s), None);
    let r = ring.nilpotency();
    let mut out = Matrix::zeros(ring, 0, a.rows());
    for (i, &v) in vals.iter().enumerate() {
        if v > 0 {
            let ann = ring.p_power(r - v);
            let row: Vec<_> = s.row(i).iter().map(|x| ring.mul(&ann, x)).collect();
            out.push_row(&row);
        }
    }
    for i in vals.len()..a.rows() {
        out.push_row(s.row(i));
    }
    out
}

/// The unique `x` with `A x = y`, for `A` of full free column rank.
pub fn solve_unique<R: ChainRing>(
    ring: &R,
    a: &Matrix<R::Elem>,
    y: &[R::Elem],
) -> Result<Vec<R::Elem>> {
    let rhs = Matrix::from_vec(y.len(), 1, y.to_vec())?;
    Ok(solve_unique_columns(ring, a, &rhs)?.column(0))
}

/// Solves `A X = Y` column by column with a single diagonalization of `A`:
/// `S A T = D` with unit pivots gives `X = T (S Y)[..cols]`, and the system is
/// inconsistent exactly when a row of `S Y` past the rank is nonzero.
pub fn solve_unique_columns<R: ChainRing>(
    ring: &R,
    a: &Matrix<R::Elem>,
    y: &Matrix<R::Elem>,
) -> Result<Matrix<R::Elem>> {
    if y.rows() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side with {} rows for {} equations",
            y.rows(),
            a.rows()
        )));
    }
    let n = a.cols();
    if a.rows() < n {
        return Err(Error::PreconditionViolated("fewer equations than unknowns".into()));
    }
    let mut d = a.clone();
    let mut sy = y.clone();
    let mut t = Matrix::identity(ring, n);
    let vals = diagonalize(ring, &mut d, Some(&mut sy), Some(&mut t));
    if vals.len() < n || vals.iter().any(|&v| v != 0) {
        return Err(Error::PreconditionViolated(
            "matrix does not have full free column rank".into(),
        ));
    }
    if sy.select_rows(n..a.rows()).entries().iter().any(|x| !ring.is_zero(x)) {
        return Err(Error::Inconsistent);
    }
    t.mul(ring, &sy.select_rows(0..n))
}

/// Howell-style canonical row form: echelon rows whose pivots are exact
/// powers `p^v`, entries above each pivot reduced to canonical residues
/// modulo that pivot, and every row annihilator folded back in so that two
/// matrices have the same form exactly when their row spans agree.
///
/// Zero rows are dropped; the output may have more rows than the rank.
pub fn howell_form<R: ChainRing>(ring: &R, a: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    let cols = a.cols();
    let r = ring.nilpotency();
    let nonzero = |row: &[R::Elem]| row.iter().any(|x| !ring.is_zero(x));
    let mut work: Vec<Vec<R::Elem>> =
        a.row_iter().filter(|row| nonzero(row)).map(|row| row.to_vec()).collect();
    let mut echelon: Vec<(usize, u32, Vec<R::Elem>)> = Vec::new();

    for c in 0..cols {
        if work.is_empty() {
            break;
        }
        let mut best: Option<(usize, u32)> = None;
        for (i, row) in work.iter().enumerate() {
            if let Some(v) = ring.valuation(&row[c]) {
                if best.map_or(true, |(_, bv)| v < bv) {
                    best = Some((i, v));
                    if v == 0 {
                        break;
                    }
                }
            }
        }
        let Some((idx, v)) = best else {
            continue;
        };
        let mut pivot = work.remove(idx);
        let (_, unit) = ring.valuation_decompose(&pivot[c]).expect("pivot is nonzero");
        if unit != ring.one() {
            let inv = ring.inverse(&unit).expect("unit part is invertible");
            for x in pivot[c..].iter_mut() {
                *x = ring.mul(&inv, x);
            }
        }
        for row in work.iter_mut() {
            if ring.is_zero(&row[c]) {
                continue;
            }
            let k = ring.div_p_power(&row[c], v);
            for j in c..cols {
                row[j] = ring.sub_mul(&row[j], &k, &pivot[j]);
            }
        }
        work.retain(|row| nonzero(row));
        if v > 0 {
            let ann = ring.p_power(r - v);
            let extra: Vec<_> = pivot.iter().map(|x| ring.mul(&ann, x)).collect();
            if nonzero(&extra) {
                work.push(extra);
            }
        }
        echelon.push((c, v, pivot));
    }

    for k in 1..echelon.len() {
        let (ck, vk) = (echelon[k].0, echelon[k].1);
        let (head, tail) = echelon.split_at_mut(k);
        let pivot_row = &tail[0].2;
        for (_, _, row) in head.iter_mut() {
            let (quot, _) = ring.reduce_mod_p_power(&row[ck], vk);
            if ring.is_zero(&quot) {
                continue;
            }
            for j in ck..cols {
                row[j] = ring.sub_mul(&row[j], &quot, &pivot_row[j]);
            }
        }
    }

    let mut out = Matrix::zeros(ring, 0, cols);
    for (_, _, row) in &echelon {
        out.push_row(row);
    }
    out
}

/// Number of `a x b` matrices over `Z/p^r` with free rank and rank both `a`:
/// `q^{ab} prod_{i<a} (1 - p^{i-b})`, evaluated exactly as
/// `p^{(r-1)ab} prod_{i<a} (p^b - p^i)`.
///
/// Defined for `a < b`; `a == b` follows the same product and is accepted.
pub fn count_full_free_rank(p: u64, r: u32, a: u32, b: u32) -> Result<BigUint> {
    if a > b {
        return Err(Error::PreconditionViolated(format!("need a <= b, got a={a}, b={b}")));
    }
    let p = BigUint::from(p);
    let mut total = p.pow((r - 1) * a * b);
    for i in 0..a {
        total *= p.pow(b) - p.pow(i);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zq::{ChainRingParams, ZqElem};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn z(p: u64, r: u32) -> ChainRingParams {
        ChainRingParams::new(p, r).unwrap()
    }

    fn mat(ring: &ChainRingParams, rows: usize, cols: usize, v: &[u64]) -> Matrix<ZqElem> {
        Matrix::from_vec(rows, cols, v.iter().map(|&x| ring.elem(x)).collect()).unwrap()
    }

    fn random_matrix(ring: &ChainRingParams, rng: &mut impl Rng, rows: usize, cols: usize) -> Matrix<ZqElem> {
        Matrix::from_fn(rows, cols, |_, _| ring.random(rng))
    }

    /// Enumerates the row span over `Z_q` as a sorted set of vectors.
    fn span_set(ring: &ChainRingParams, a: &Matrix<ZqElem>) -> std::collections::BTreeSet<Vec<u64>> {
        let q = ring.q();
        let mut set = std::collections::BTreeSet::new();
        let combos = q.pow(a.rows() as u32);
        for mut idx in 0..combos {
            let mut acc = vec![ZqElem::ZERO; a.cols()];
            for i in 0..a.rows() {
                let c = ring.elem(idx % q);
                idx /= q;
                for (o, &x) in acc.iter_mut().zip(a.row(i)) {
                    *o = ring.add(*o, ring.mul(c, x));
                }
            }
            set.insert(acc.iter().map(|x| x.value()).collect());
        }
        set
    }

    #[test]
    fn snf_examples() {
        let z4 = z(2, 2);
        let id = Matrix::identity(&z4, 3);
        assert_eq!(snf(&z4, &id).d, id);

        let a = mat(&z4, 2, 2, &[2, 1, 0, 2]);
        let res = snf(&z4, &a);
        assert_eq!(res.diagonal(), vec![ZqElem::ONE, ZqElem::ZERO]);
        assert_eq!(res.s.mul(&z4, &a).unwrap().mul(&z4, &res.t).unwrap(), res.d);
        assert_eq!(rank_profile(&z4, &a), (1, 1));
        assert_eq!(span_set(&z4, &a).len(), 4);

        let single = mat(&z4, 1, 1, &[2]);
        assert_eq!(snf(&z4, &single).d, single);
    }

    #[test]
    fn rank_examples() {
        let z4 = z(2, 2);
        assert_eq!(rank_profile(&z4, &Matrix::zeros(&z4, 3, 2)), (0, 0));
        assert_eq!(rank_profile(&z4, &mat(&z4, 2, 2, &[2, 0, 0, 2])), (2, 0));
    }

    #[test]
    fn left_kernel_examples() {
        let z4 = z(2, 2);
        let inv = mat(&z4, 2, 2, &[1, 1, 0, 1]);
        assert_eq!(left_kernel(&z4, &inv).rows(), 0);
        let k = left_kernel(&z4, &mat(&z4, 1, 1, &[2]));
        assert_eq!(k, mat(&z4, 1, 1, &[2]));
    }

    #[test]
    fn left_kernel_matches_enumeration() {
        let z4 = z(2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let rows = rng.gen_range(1..=2);
            let cols = rng.gen_range(1..=2);
            let a = random_matrix(&z4, &mut rng, rows, cols);
            let kernel = left_kernel(&z4, &a);
            for row in kernel.row_iter() {
                assert!(a.left_mul_vec(&z4, row).iter().all(|x| x.value() == 0));
            }
            // exhaustive count of x with xA = 0
            let mut count = 0;
            for idx in 0..4u64.pow(rows as u32) {
                let x: Vec<_> = (0..rows).map(|i| z4.elem(idx >> (2 * i))).collect();
                if a.left_mul_vec(&z4, &x).iter().all(|v| v.value() == 0) {
                    count += 1;
                }
            }
            let generated = if kernel.rows() == 0 { 1 } else { span_set(&z4, &kernel).len() };
            assert_eq!(generated, count, "{a:?}");
        }
    }

    #[test]
    fn solve_examples() {
        let z9 = z(3, 2);
        let id = Matrix::identity(&z9, 3);
        let y = vec![z9.elem(4), z9.elem(7), z9.elem(0)];
        assert_eq!(solve_unique(&z9, &id, &y).unwrap(), y);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut planted = 0;
        while planted < 100 {
            let a = random_matrix(&z9, &mut rng, 6, 3);
            if free_rank(&z9, &a) != 3 {
                assert!(matches!(
                    solve_unique(&z9, &a, &vec![ZqElem::ZERO; 6]),
                    Err(Error::PreconditionViolated(_))
                ));
                continue;
            }
            planted += 1;
            let x: Vec<_> = (0..3).map(|_| z9.random(&mut rng)).collect();
            let y = a.mul_vec(&z9, &x);
            assert_eq!(solve_unique(&z9, &a, &y).unwrap(), x);
            // a left-kernel row witnesses some y outside the column span
            let kernel = left_kernel(&z9, &a);
            let w = kernel.row(0);
            let j = w.iter().position(|c| z9.is_unit(*c));
            if let Some(j) = j {
                let mut bad = y.clone();
                bad[j] = z9.add(bad[j], ZqElem::ONE);
                assert_eq!(solve_unique(&z9, &a, &bad), Err(Error::Inconsistent));
            }
        }
    }

    #[test]
    fn count_full_free_rank_examples() {
        assert_eq!(count_full_free_rank(2, 2, 1, 2).unwrap(), BigUint::from(12u32));
        assert_eq!(count_full_free_rank(2, 2, 2, 3).unwrap(), BigUint::from(2688u32));
        assert_eq!(count_full_free_rank(2, 1, 1, 1).unwrap(), BigUint::from(1u32));
        assert!(count_full_free_rank(2, 2, 3, 2).is_err());
    }

    #[test]
    fn howell_form_is_canonical_on_small_spans() {
        let z4 = z(2, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut by_span = std::collections::BTreeMap::new();
        for _ in 0..400 {
            let rows = rng.gen_range(1..=3);
            let a = random_matrix(&z4, &mut rng, rows, 2);
            let h = howell_form(&z4, &a);
            let span = span_set(&z4, &a);
            let h_span = if h.rows() == 0 {
                std::iter::once(vec![0, 0]).collect()
            } else {
                span_set(&z4, &h)
            };
            assert_eq!(span, h_span);
            let key: Vec<u64> = h.entries().iter().map(|x| x.value()).collect();
            if let Some(prev) = by_span.insert(span, key.clone()) {
                assert_eq!(prev, key);
            }
        }
    }

    fn check_snf(ring: &ChainRingParams, a: &Matrix<ZqElem>) -> std::result::Result<(), TestCaseError> {
        let res = snf(ring, a);
        let prod = res.s.mul(ring, a).unwrap().mul(ring, &res.t).unwrap();
        prop_assert_eq!(&prod, &res.d);
        for i in 0..res.d.rows() {
            for j in 0..res.d.cols() {
                if i != j {
                    prop_assert!(res.d[(i, j)].value() == 0);
                }
            }
        }
        let vals: Vec<_> = res.diagonal().iter().filter_map(|&x| ring.valuation(x)).collect();
        for (k, &v) in vals.iter().enumerate() {
            prop_assert_eq!(res.d[(k, k)], ring.p_power(v));
        }
        prop_assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(rank_profile(ring, &res.s).1, res.s.rows());
        prop_assert_eq!(rank_profile(ring, &res.t).1, res.t.rows());
        Ok(())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn snf_identity_holds(
            (p, r) in prop::sample::select(vec![(2u64, 2u32), (2, 3), (3, 2)]),
            rows in 1usize..=6,
            cols in 1usize..=6,
            seed in any::<u64>(),
        ) {
            let ring = z(p, r);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(&ring, &mut rng, rows, cols);
            check_snf(&ring, &a)?;
        }

        #[test]
        fn rank_invariant_under_invertible_transforms(seed in any::<u64>(), rows in 1usize..=5, cols in 1usize..=5) {
            let ring = z(2, 3);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(&ring, &mut rng, rows, cols);
            let u = loop {
                let u = random_matrix(&ring, &mut rng, rows, rows);
                if free_rank(&ring, &u) == rows { break u; }
            };
            let v = loop {
                let v = random_matrix(&ring, &mut rng, cols, cols);
                if free_rank(&ring, &v) == cols { break v; }
            };
            let b = u.mul(&ring, &a).unwrap().mul(&ring, &v).unwrap();
            prop_assert_eq!(rank_profile(&ring, &a), rank_profile(&ring, &b));
            let mut swapped = a.clone();
            swapped.swap_rows(0, rows - 1);
            swapped.swap_cols(0, cols - 1);
            prop_assert_eq!(rank_profile(&ring, &a), rank_profile(&ring, &swapped));
        }

        #[test]
        fn howell_form_is_span_invariant(seed in any::<u64>(), rows in 1usize..=4, cols in 1usize..=4) {
            let ring = z(3, 2);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(&ring, &mut rng, rows, cols);
            let h = howell_form(&ring, &a);
            // appending a combination of existing rows and reversing the order leaves the form unchanged
            let coeffs: Vec<_> = (0..rows).map(|_| ring.random(&mut rng)).collect();
            let extra = a.left_mul_vec(&ring, &coeffs);
            let mut b = Matrix::zeros(&ring, 0, cols);
            b.push_row(&extra);
            for i in (0..rows).rev() {
                b.push_row(a.row(i));
            }
            prop_assert_eq!(howell_form(&ring, &b), h);
        }
    }
}
