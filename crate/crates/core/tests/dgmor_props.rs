mod common;

use std::sync::Arc;

use common::*;
use dglift::ainf::{AInfFunctor, DgTarget};
use dglift::dgcat::DgPresentation;
use dglift::dgmor::{pack_transformation, project_functor, unpack_transformation, DgMor, MorArrow, MorObject, Side};
use dglift::graded::Field;
use proptest::prelude::*;
use rand::Rng;

fn setting(field: Field, r: &mut Rand) -> (Arc<DgPresentation>, DgMor, Vec<MorObject>) {
    let spec = if r.gen_bool(0.3) { deep_target(field, r) } else { random_target(field, 12, r) };
    let b = Arc::new(spec.build());
    let q = DgMor::new(b.clone());
    let k = b.num_objects();
    let objects = (0..3)
        .map(|_| {
            let (s, t) = (r.gen_range(0..k), r.gen_range(0..k));
            q.object(random_cycle(&b, s, t, 0, r)).unwrap()
        })
        .collect();
    (b, q, objects)
}

fn arrow(b: &DgPresentation, q: &DgMor, x: &MorObject, y: &MorObject, n: i32, r: &mut Rand) -> MorArrow {
    q.arrow(
        x,
        y,
        random_morphism(b, x.a, y.a, n, r),
        random_morphism(b, x.b, y.b, n, r),
        random_morphism(b, x.a, y.b, n - 1, r),
    )
    .unwrap()
}

fn sum(q: &DgMor, terms: &[(i64, MorArrow)]) -> MorArrow {
    let field = q.base().field();
    let mut acc = q.zero_arrow(&terms[0].1.source, &terms[0].1.target, terms[0].1.degree);
    for (c, x) in terms {
        q.axpy(&mut acc, &field.sign(*c), x).unwrap();
    }
    acc
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn hom_differential_squares_to_zero(seed in any::<u64>(), f in 0usize..3) {
        let field = [F2, F3, Q][f];
        let mut r = rng(seed);
        let (_, q, objs) = setting(field, &mut r);
        for x in &objs {
            for y in &objs {
                let hom = q.hom(x, y).unwrap();
                prop_assert!(hom.d_squared_defects().is_empty());
            }
        }
    }

    #[test]
    fn mu1_and_mu2_satisfy_the_ainf_relations(seed in any::<u64>(), f in 0usize..3) {
        let field = [F2, F3, Q][f];
        let mut r = rng(seed);
        let (b, q, o) = setting(field, &mut r);
        let (n1, n2, n3) = (r.gen_range(-1..=1), r.gen_range(-1..=1), r.gen_range(-1..=1));
        let a1 = arrow(&b, &q, &o[0], &o[1], n1, &mut r);
        let a2 = arrow(&b, &q, &o[1], &o[2], n2, &mut r);
        let a3 = arrow(&b, &q, &o[2], &o[0], n3, &mut r);
        prop_assert!(q.to_vector(&q.mu1(&q.mu1(&a1))).is_zero());
        // μ¹μ²(a2, a1) + (−1)^{|a1|−1} μ²(μ¹a2, a1) + μ²(a2, μ¹a1) = 0
        let r2 = sum(&q, &[
            (0, q.mu1(&q.mu2(&a2, &a1).unwrap())),
            ((n1 - 1) as i64, q.mu2(&q.mu1(&a2), &a1).unwrap()),
            (0, q.mu2(&a2, &q.mu1(&a1)).unwrap()),
        ]);
        prop_assert!(q.to_vector(&r2).is_zero());
        // μ²(a3, μ²(a2, a1)) + (−1)^{|a1|−1} μ²(μ²(a3, a2), a1) = 0
        let r3 = sum(&q, &[
            (0, q.mu2(&a3, &q.mu2(&a2, &a1).unwrap()).unwrap()),
            ((n1 - 1) as i64, q.mu2(&q.mu2(&a3, &a2).unwrap(), &a1).unwrap()),
        ]);
        prop_assert!(q.to_vector(&r3).is_zero());
        // identity arrows are strict units for μ²
        let id = q.identity_arrow(&o[1]);
        let sign = field.sign(n1 as i64);
        prop_assert_eq!(q.mu2(&id, &a1).unwrap(), {
            let mut x = q.zero_arrow(&a1.source, &a1.target, n1);
            q.axpy(&mut x, &sign, &a1).unwrap();
            x
        });
    }

    #[test]
    fn source_and_target_projections_are_dg_functors(seed in any::<u64>(), f in 0usize..3) {
        let field = [F2, F3, Q][f];
        let mut r = rng(seed);
        let (b, q, o) = setting(field, &mut r);
        let (n1, n2) = (r.gen_range(-1..=1), r.gen_range(-1..=1));
        let a1 = arrow(&b, &q, &o[0], &o[1], n1, &mut r);
        let a2 = arrow(&b, &q, &o[1], &o[2], n2, &mut r);
        let da = q.d(&a1);
        let comp = q.compose(&a2, &a1).unwrap();
        for side in [Side::Source, Side::Target] {
            prop_assert_eq!(da.part(side), &b.d(a1.part(side)));
            prop_assert_eq!(comp.part(side), &b.compose(a2.part(side), a1.part(side)).unwrap());
            let id = q.identity_arrow(&o[0]);
            prop_assert_eq!(id.part(side), &b.identity(o[0].part(side)));
        }
        // the plain d is a derivation for the plain composition
        let lhs = q.d(&comp);
        let rhs = sum(&q, &[
            (0, q.compose(&q.d(&a2), &a1).unwrap()),
            (n2 as i64, q.compose(&a2, &q.d(&a1)).unwrap()),
        ]);
        prop_assert_eq!(lhs, rhs);
        prop_assert!(q.to_vector(&q.d(&q.d(&a1))).is_zero());
    }

    #[test]
    fn pack_and_unpack_are_inverse(seed in any::<u64>(), f in 0usize..3) {
        let field = [F2, F3, Q][f];
        let mut r = rng(seed);
        let b = Arc::new(random_target(field, 16, &mut r).build());
        let e = Arc::new(random_linear(field, &mut r));
        let ff = some_functor(&e, &b, &mut r);
        let gg = some_functor(&e, &b, &mut r);
        let h = random_prenat(&ff, &gg, 0, ff.max_degree(), &mut r);
        let phi = pack_transformation(&h).unwrap();
        prop_assert_eq!(&unpack_transformation(&phi).unwrap(), &h);
        prop_assert_eq!(pack_transformation(&unpack_transformation(&phi).unwrap()).unwrap(), phi.clone());
        prop_assert_eq!(project_functor(&phi, Side::Source).unwrap(), ff);
        prop_assert_eq!(project_functor(&phi, Side::Target).unwrap(), gg);
        let _: &AInfFunctor<DgMor> = &phi;
    }
}
