mod common;

use hopf_galois::exact::{Matrix, Scalar};
use hopf_galois::galois::{AlgElement, GaloisContext, Mode};
use hopf_galois::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn element(n: usize) -> impl Strategy<Value = AlgElement> {
    prop::collection::vec(-4i64..=4, n).prop_map(|v| AlgElement::from_i64(&v))
}

#[test]
fn field_power_basis_products() {
    let ctx = common::field();
    assert_eq!(ctx.mode(), Mode::Field);
    let theta = ctx.basis_element(1);
    assert_eq!(ctx.mul(&theta, &theta), ctx.basis_element(2));
    let t5 = ctx.mul(&ctx.basis_element(2), &ctx.basis_element(3));
    assert_eq!(t5, ctx.basis_element(5));
    // theta has degree 6, so 1, theta, ..., theta^5 are the basis and theta^6
    // is a combination of them with the first coordinate nonzero
    let t6 = ctx.mul(&theta, &ctx.basis_element(5));
    assert!(!t6.coords()[0].is_zero());
}

#[test]
fn dual_generator_matches_full_system() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, ctx) in common::contexts() {
        for _ in 0..8 {
            let x = ctx.random_element(&mut rng, 3);
            let oracle = common::dual_by_full_system(&ctx, &x);
            match ctx.dual_generator(&x) {
                Ok(xhat) => assert_eq!(Some(xhat), oracle, "{name}"),
                Err(Error::Singular(_)) => assert_eq!(oracle, None, "{name}"),
                Err(e) => panic!("{name}: {e}"),
            }
        }
        let x = common::small_generator(&ctx);
        assert_eq!(
            Some(ctx.dual_generator(&x).unwrap()),
            common::dual_by_full_system(&ctx, &x),
            "{name}"
        );
    }
}

#[test]
fn dual_generator_rejects_non_generators() {
    for (name, ctx) in common::contexts() {
        if ctx.dim() == 1 {
            continue;
        }
        assert!(
            matches!(ctx.dual_generator(ctx.one()), Err(Error::Singular(_))),
            "{name}"
        );
    }
}

#[test]
fn corrupted_field_context_is_rejected() {
    let text = std::fs::read_to_string(common::fixture_path("s3_field")).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    doc["mult"][1][1][2] = serde_json::json!("2");
    let err = GaloisContext::from_json(&doc.to_string())
        .err()
        .expect("corrupt table accepted");
    assert!(matches!(err, Error::InvalidContext(_)), "{err}");

    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let key = doc["auto"]
        .as_object()
        .unwrap()
        .keys()
        .nth(1)
        .unwrap()
        .clone();
    doc["auto"][&key][0][0] = serde_json::json!("5");
    assert!(GaloisContext::from_json(&doc.to_string()).is_err());
}

#[test]
fn context_round_trips_through_json() {
    for (name, ctx) in common::contexts() {
        let text = serde_json::to_string(&ctx.to_doc()).unwrap();
        let back = GaloisContext::from_json(&text).unwrap();
        assert_eq!(
            serde_json::to_string(&back.to_doc()).unwrap(),
            text,
            "{name}"
        );
    }
}

fn check_trace_invariance(ctx: &GaloisContext, x: &AlgElement) {
    let t = ctx.trace(x);
    for s in ctx.group().elements() {
        assert_eq!(ctx.trace(&ctx.act(s, x)), t);
    }
    assert_eq!(ctx.trace_by_orbit_sum(x).unwrap(), t);
}

fn check_act_homomorphism(ctx: &GaloisContext, x: &AlgElement, y: &AlgElement) {
    let g = ctx.group();
    for s in g.elements() {
        assert_eq!(
            ctx.act(s, &ctx.mul(x, y)),
            ctx.mul(&ctx.act(s, x), &ctx.act(s, y))
        );
        assert_eq!(ctx.act(s, &(x + y)), &ctx.act(s, x) + &ctx.act(s, y));
        for t in g.elements() {
            assert_eq!(ctx.act(s, &ctx.act(t, x)), ctx.act(g.mul(s, t), x));
        }
    }
}

fn check_duality_equivariance(ctx: &GaloisContext, x: &AlgElement) {
    let Ok(xhat) = ctx.dual_generator(x) else {
        return;
    };
    let g = ctx.group();
    for s in g.elements() {
        let sx = ctx.act(s, x);
        let sxhat = ctx.dual_generator(&sx).unwrap();
        assert_eq!(sxhat, ctx.act(s, &xhat));
        for t in g.elements() {
            let want = if s == t {
                Scalar::one()
            } else {
                Scalar::zero()
            };
            assert_eq!(
                ctx.trace(&ctx.mul(&ctx.act(s, &xhat), &ctx.act(t, x))),
                want
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn split_trace_invariance(x in element(8)) {
        let ctx = GaloisContext::split(&hopf_galois::groups::FiniteGroup::dihedral(4));
        check_trace_invariance(&ctx, &x);
    }

    #[test]
    fn field_trace_invariance(x in element(6)) {
        check_trace_invariance(&common::field(), &x);
    }

    #[test]
    fn trace_form_is_symmetric(x in element(6), y in element(6)) {
        let ctx = common::field();
        prop_assert_eq!(ctx.trace(&ctx.mul(&x, &y)), ctx.trace(&ctx.mul(&y, &x)));
        let s3 = GaloisContext::split(&hopf_galois::groups::FiniteGroup::symmetric3());
        prop_assert_eq!(s3.trace(&s3.mul(&x, &y)), s3.trace(&s3.mul(&y, &x)));
    }

    #[test]
    fn field_act_is_a_ring_homomorphism(x in element(6), y in element(6)) {
        check_act_homomorphism(&common::field(), &x, &y);
    }

    #[test]
    fn split_act_is_a_ring_homomorphism(x in element(6), y in element(6)) {
        let ctx = GaloisContext::split(&hopf_galois::groups::FiniteGroup::symmetric3());
        check_act_homomorphism(&ctx, &x, &y);
    }

    #[test]
    fn duality_is_equivariant(x in element(6)) {
        check_duality_equivariance(&common::field(), &x);
        check_duality_equivariance(&GaloisContext::split(&hopf_galois::groups::FiniteGroup::symmetric3()), &x);
    }

    #[test]
    fn inverses_in_the_field(x in element(6)) {
        let ctx = common::field();
        match ctx.inverse(&x) {
            Some(y) => prop_assert_eq!(&ctx.mul(&x, &y), ctx.one()),
            None => prop_assert!(x.is_zero()),
        }
    }
}

#[test]
fn fixed_subspace_is_one_dimensional() {
    for (name, ctx) in common::contexts() {
        let n = ctx.dim();
        let mut rows = Vec::new();
        for s in ctx.group().elements() {
            rows.extend(
                ctx.automorphism(s)
                    .sub(&Matrix::identity(n))
                    .unwrap()
                    .to_rows(),
            );
        }
        assert_eq!(n - Matrix::from_rows(rows).unwrap().rank(), 1, "{name}");
        for s in ctx.group().elements() {
            assert_eq!(&ctx.act(s, ctx.one()), ctx.one(), "{name}");
        }
    }
}
