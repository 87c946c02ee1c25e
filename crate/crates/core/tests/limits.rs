//! Universal properties of the finite limits and colimits, checked by exhaustive search
//! over natural maps between small fixtures.

use cubical::cset::{
    coequalizer, coproduct, enumerate_natural_maps, equalizer, product, pullback, pushout, to_terminal, CSetMor,
};
use cubical::fixtures::{boundary_interval, circle, interval, point};

#[test]
fn product_pairing_is_the_unique_cone_map() {
    let (x, y) = (interval(2), boundary_interval(2));
    let p = product(&x, &y).unwrap();
    assert!(p.object.validate().passed());
    assert_eq!(p.object.sizes(), vec![4, 6, 8]);
    let w = interval(2);
    for f in enumerate_natural_maps(&w, &x).unwrap() {
        for g in enumerate_natural_maps(&w, &y).unwrap() {
            let h = p.pairing(&f, &g).unwrap();
            assert!(h.then(&p.first).unwrap().same_as(&f));
            assert!(h.then(&p.second).unwrap().same_as(&g));
            let cones: Vec<CSetMor> = enumerate_natural_maps(&w, &p.object)
                .unwrap()
                .into_iter()
                .filter(|k| k.then(&p.first).unwrap().same_as(&f) && k.then(&p.second).unwrap().same_as(&g))
                .collect();
            assert_eq!(cones.len(), 1);
        }
    }
}

#[test]
fn coproduct_copairing() {
    let parts = [interval(2), point(2)];
    let s = coproduct(&parts).unwrap();
    assert_eq!(s.object.sizes(), vec![3, 4, 5]);
    let w = circle(2);
    for f in enumerate_natural_maps(&parts[0], &w).unwrap() {
        for g in enumerate_natural_maps(&parts[1], &w).unwrap() {
            let h = s.copairing(&[f.clone(), g.clone()]).unwrap();
            assert!(s.injections[0].then(&h).unwrap().same_as(&f));
            assert!(s.injections[1].then(&h).unwrap().same_as(&g));
        }
    }
}

#[test]
fn pullback_of_the_endpoints() {
    // ∂I ×_I ∂I along the endpoint inclusion is ∂I again
    let d = boundary_interval(2);
    let ends = CSetMor::from_fn(d.clone(), interval(2), |_, x| x).unwrap();
    let pb = pullback(&ends, &ends).unwrap();
    assert_eq!(pb.object.sizes(), vec![2, 2, 2]);
    let id = CSetMor::identity(d.clone());
    let diag = pb.mediate(&id, &id).unwrap();
    assert!(diag.then(&pb.first).unwrap().same_as(&id));
    assert!(diag.is_bijective());
}

#[test]
fn equalizer_and_coequalizer_of_the_endpoints() {
    let one = point(2);
    let i = interval(2);
    let end = |e: usize| CSetMor::from_fn(one.clone(), i.clone(), move |_, _| e).unwrap();
    let eq = equalizer(&end(0), &end(1)).unwrap();
    assert_eq!(eq.object.sizes(), vec![0, 0, 0]);
    let q = coequalizer(&end(0), &end(1)).unwrap();
    assert_eq!(q.object.sizes(), circle(2).sizes());
    assert!(q.projection.check_naturality().passed());
    // maps out of the circle are exactly the maps out of I that identify the ends
    let target = circle(2);
    let through: Vec<CSetMor> = enumerate_natural_maps(&i, &target)
        .unwrap()
        .into_iter()
        .filter(|h| end(0).then(h).unwrap().same_as(&end(1).then(h).unwrap()))
        .collect();
    let direct = enumerate_natural_maps(&q.object, &target).unwrap();
    assert_eq!(through.len(), direct.len());
    for h in &through {
        let m = q.mediate(h).unwrap();
        assert!(q.projection.then(&m).unwrap().same_as(h));
    }
}

#[test]
fn pushout_glues_two_intervals() {
    let one = point(2);
    let i = interval(2);
    let start = CSetMor::from_fn(one.clone(), i.clone(), |_, _| 0).unwrap();
    let finish = CSetMor::from_fn(one.clone(), i.clone(), |_, _| 1).unwrap();
    let po = pushout(&finish, &start).unwrap();
    // two intervals sharing one endpoint
    assert_eq!(po.object.sizes()[0], 3);
    assert!(po.object.validate().passed());
    let bang = to_terminal(i.clone());
    let m = po.mediate(&bang, &bang).unwrap();
    assert!(po.left.then(&m).unwrap().same_as(&bang));
}
