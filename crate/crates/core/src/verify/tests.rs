use super::*;
use crate::testutil::{a2, ids, point};

fn r(n: u128, d: u128) -> Rat {
    Rat::from_counts(n, d)
}

#[test]
fn green_worked_instances() {
    let ctx = point(2, 2);
    let [s] = ids(&ctx, ["S"]);
    assert_eq!(green_sides(&ctx, s, s, s, s).unwrap(), (r(3, 2), r(3, 2)));
    let z = IsoClassId::ZERO;
    assert_eq!(green_sides(&ctx, z, z, z, z).unwrap(), (r(1, 1), r(1, 1)));
    let report = green_check(&ctx, 2).unwrap();
    assert!(report.passed, "{:?}", report.failures);
    assert!(matches!(green_check(&ctx, 3), Err(Error::Bound(_))));
}

#[test]
fn green_on_a2() {
    let ctx = a2(2, vec![3, 3]);
    let report = green_check(&ctx, 3).unwrap();
    assert!(report.instances > 100);
    assert!(report.passed, "{:?}", report.failures);
}

#[test]
fn consistency_examples() {
    let ctx = point(2, 2);
    let [s, ss] = ids(&ctx, ["S", "S^2"]);
    assert_eq!(ctx.hall_number(s, s, ss).unwrap(), 3);
    assert_eq!(ctx.injection_count(s, ss, s).unwrap(), 3);
    let ctx = a2(2, vec![2, 2]);
    let [s1, s2] = ids(&ctx, ["S1", "S2"]);
    let t = ctx.table();
    let total: u128 = t.ids_with_dims(&[1, 1]).iter().map(|&c| ctx.ext_count_with_middle(s1, s2, c).unwrap()).sum();
    assert_eq!(total, 2);
    let report = consistency_suite(&ctx, (-2, 2)).unwrap();
    assert!(report.passed, "{:?}", report.failures);
    assert!(report.instances > 10_000);
}

#[test]
fn failures_are_recorded() {
    let report = run("demo", json!({}), vec![1u32, 2, 3], |&i| Ok(compare(|| json!(i), r(i as u128, 1), r(2, 1)))).unwrap();
    assert!(!report.passed);
    assert_eq!(report.instances, 3);
    assert_eq!(report.failures.iter().map(|f| f.instance.clone()).collect::<Vec<_>>(), vec![json!(1), json!(3)]);
    assert_eq!(report.failures[0].lhs, "1/1");
    let err = run("demo", json!({}), vec![1u32, 2], |&i| {
        if i == 2 {
            Err(Error::Resource("guard".into()))
        } else {
            Ok(None)
        }
    });
    assert!(matches!(err, Err(Error::Resource(_))));
}

#[test]
fn seeded_suites_pass_and_are_reproducible() {
    let ctx = a2(2, vec![3, 3]);
    let mut p = SampleParams::new(&ctx, 20, 7);
    p.gen_caps = vec![1, 1];
    let a = algebra_suite(&ctx, &p).unwrap();
    assert!(a.passed, "{:?}", a.failures);
    let b = algebra_suite(&ctx, &p).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn guard_surfaces_as_error() {
    let ctx = a2(2, vec![3, 3]);
    let mut p = SampleParams::new(&ctx, 5, 1);
    p.step_guard = 1;
    assert!(matches!(confluence_suite(&ctx, Mode::Mh, &p), Err(Error::Resource(_))));
}

