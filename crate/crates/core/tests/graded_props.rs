mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use dglift::graded::{Complex, Field, GradedSpace, GradedVector, Matrix, Scalar};
use dglift::Error;
use proptest::prelude::*;
use rand::Rng;

/// Complex in degrees −1..=1 with dimensions ≤ 3; `d⁰` is random and `d⁻¹`
/// maps into its kernel.
fn random_complex_of(field: Field, r: &mut Rand) -> Complex {
    let dims: BTreeMap<i32, usize> = (-1..=1).map(|j| (j, r.gen_range(0..=3))).collect();
    let labels = dims
        .iter()
        .map(|(&j, &n)| (j, (0..n).map(|i| format!("e{}_{i}", j + 1)).collect()))
        .collect();
    let space = GradedSpace::new(field, labels).unwrap();
    let random_matrix = |rows: usize, cols: usize, r: &mut Rand| {
        let mut m = Matrix::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, scalar(field, r));
            }
        }
        m
    };
    let d0 = random_matrix(dims[&1], dims[&0], r);
    let kernel = d0.kernel();
    let mut dm1 = Matrix::zeros(field, dims[&0], dims[&-1]);
    for j in 0..dims[&-1] {
        let mut col = vec![field.zero(); dims[&0]];
        for k in &kernel {
            let c = scalar(field, r);
            for (x, y) in col.iter_mut().zip(k) {
                *x = &*x + &(&c * y);
            }
        }
        for (i, x) in col.into_iter().enumerate() {
            dm1.set(i, j, x);
        }
    }
    let mut blocks = BTreeMap::new();
    for (j, m) in [(-1, dm1), (0, d0)] {
        if m.rows() > 0 && m.cols() > 0 {
            blocks.insert(j, m);
        }
    }
    Complex::new(space, blocks).unwrap()
}

fn apply(m: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    m.mul_vec(v).unwrap()
}

fn brute_force_dim(c: &Complex, j: i32) -> usize {
    let field = c.field();
    let Field::Prime(p) = field else { unreachable!() };
    let n = c.space().dim(j);
    let kernel = all_vectors(field, n)
        .into_iter()
        .filter(|v| apply(&c.d_matrix(j), v).iter().all(Scalar::is_zero))
        .count();
    let image: BTreeSet<Vec<u64>> = all_vectors(field, c.space().dim(j - 1))
        .into_iter()
        .map(|w| {
            apply(&c.d_matrix(j - 1), &w)
                .iter()
                .map(|x| match x {
                    Scalar::Fp { value, .. } => *value,
                    _ => unreachable!(),
                })
                .collect()
        })
        .collect();
    let ratio = kernel / image.len();
    let mut dim = 0;
    let mut k = 1;
    while k < ratio {
        k *= p as usize;
        dim += 1;
    }
    assert_eq!(k, ratio);
    dim
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn d_squares_to_zero(seed in any::<u64>(), f in 0usize..3) {
        let field = [F2, F3, Q][f];
        let c = random_complex_of(field, &mut rng(seed));
        prop_assert!(c.d_squared_defects().is_empty());
        for j in -2..=1 {
            let dd = c.d_matrix(j + 1).mul(&c.d_matrix(j)).unwrap();
            prop_assert!(dd.is_zero());
        }
    }

    #[test]
    fn solved_coboundaries_reproduce_their_target(seed in any::<u64>(), f in 0usize..3) {
        let field = [F2, F3, Q][f];
        let mut r = rng(seed);
        let c = random_complex_of(field, &mut r);
        for j in -1..=1 {
            let x: Vec<Scalar> = (0..c.space().dim(j - 1)).map(|_| scalar(field, &mut r)).collect();
            let y = GradedVector { degree: j, coords: apply(&c.d_matrix(j - 1), &x) };
            let solved = c.solve_coboundary(&y).unwrap();
            prop_assert_eq!(c.d(&solved).unwrap(), y);
        }
    }

    #[test]
    fn class_vanishes_exactly_when_a_primitive_exists(seed in any::<u64>(), f in 0usize..2) {
        let field = [F2, F3][f];
        let mut r = rng(seed);
        let c = random_complex_of(field, &mut r);
        for j in -1..=1 {
            let h = c.cohomology(j);
            for z in c.d_matrix(j).kernel().into_iter().chain(std::iter::once(vec![field.zero(); c.space().dim(j)])) {
                let mut y = GradedVector { degree: j, coords: z };
                // random cocycle: the kernel vector plus a coboundary
                let w: Vec<Scalar> = (0..c.space().dim(j - 1)).map(|_| scalar(field, &mut r)).collect();
                let b = GradedVector { degree: j, coords: apply(&c.d_matrix(j - 1), &w) };
                y.axpy(&field.one(), &b).unwrap();
                let exact = c.solve_coboundary(&y).is_ok();
                let zero_class = h.class_of(&y).unwrap().iter().all(Scalar::is_zero);
                prop_assert_eq!(exact, zero_class);
                if !exact {
                    prop_assert_eq!(c.solve_coboundary(&y), Err(Error::NotCoboundary));
                }
            }
        }
    }

    #[test]
    fn cohomology_dimension_matches_enumeration(seed in any::<u64>(), f in 0usize..2) {
        let field = [F2, F3][f];
        let c = random_complex_of(field, &mut rng(seed));
        for j in -1..=1 {
            prop_assert_eq!(c.cohomology(j).dim(), brute_force_dim(&c, j));
        }
    }

    #[test]
    fn representatives_have_their_own_coordinates(seed in any::<u64>(), f in 0usize..3) {
        let field = [F2, F3, Q][f];
        let mut r = rng(seed);
        let c = random_complex_of(field, &mut r);
        for j in -1..=1 {
            let h = c.cohomology(j);
            let coords: Vec<Scalar> = (0..h.dim()).map(|_| scalar(field, &mut r)).collect();
            let z = h.representative_of(&coords).unwrap();
            prop_assert_eq!(h.class_of(&z).unwrap(), coords);
        }
    }
}
