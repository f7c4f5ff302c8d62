use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spaceform_core::groups::{Action, FiniteGroup, GroupSpec};

fn build(spec: GroupSpec) -> FiniteGroup {
    FiniteGroup::build(&spec).unwrap()
}

fn families() -> Vec<GroupSpec> {
    let mut v = vec![GroupSpec::Q8, GroupSpec::Q16];
    for n in 1..=3 {
        v.push(GroupSpec::TStar(n));
        v.push(GroupSpec::OStar(n));
    }
    v
}

#[test]
fn presentations_hold_with_exact_orders() {
    for spec in families() {
        let g = build(spec.clone());
        let report = g.verify_presentation();
        assert!(report.passed(), "{spec}: {report:?}");
        assert_eq!(report.enumerated_order, g.order() as u64);
    }
    assert_eq!(build(GroupSpec::TStar(3)).verify_presentation().relations.len(), 5);
    assert_eq!(build(GroupSpec::OStar(1)).verify_presentation().relations.len(), 8);
    assert_eq!(build(GroupSpec::TStar(3)).order(), 216);
}

#[test]
fn group_axioms_exhaustive() {
    let mut specs = families();
    specs.push(GroupSpec::semidirect(GroupSpec::Cyclic(4), Action::new(5, 2, 1, 1)));
    specs.push(GroupSpec::semidirect(
        GroupSpec::direct(GroupSpec::Cyclic(5), GroupSpec::TStar(1)),
        Action::new(7, 1, 2, 1),
    ));
    specs.push(GroupSpec::direct(GroupSpec::Cyclic(5), GroupSpec::OStar(1)));
    for spec in specs {
        let g = build(spec.clone());
        if g.order() <= 500 {
            g.check_group_axioms().unwrap_or_else(|e| panic!("{spec}: {e}"));
        }
    }
}

#[test]
fn associativity_sampled_on_large_groups() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for spec in [
        GroupSpec::OStar(4),
        GroupSpec::semidirect(
            GroupSpec::direct(GroupSpec::Cyclic(5), GroupSpec::OStar(2)),
            Action::new(11, 1, 1, 10),
        ),
    ] {
        let g = build(spec);
        let n = g.order();
        let triples: Vec<_> = (0..20_000)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
            .collect();
        g.check_associativity_on(&triples).unwrap();
        for &(a, _, _) in &triples[..2000] {
            assert_eq!(g.mul(a, g.inv(a)), 0);
        }
    }
}

#[test]
fn centers_and_abelianizations() {
    for n in 1..=3u32 {
        let t = build(GroupSpec::TStar(n));
        let mut expected = vec![2u64];
        if n > 1 {
            expected = vec![2 * 3u64.pow(n - 1)];
        }
        assert_eq!(t.center().1.factors(), expected.as_slice(), "Z(T*({n}))");
        assert_eq!(t.abelianization().factors(), &[3u64.pow(n)]);
        let o = build(GroupSpec::OStar(n));
        assert_eq!(o.center().1.factors(), &[2]);
        assert_eq!(o.abelianization().factors(), &[2]);
    }
}

#[test]
fn octahedral_subgroups() {
    for n in 1..=3 {
        let o = build(GroupSpec::OStar(n));
        let (x, p, q, r) = (
            o.generator("X").unwrap(),
            o.generator("P").unwrap(),
            o.generator("Q").unwrap(),
            o.generator("R").unwrap(),
        );
        assert_eq!(o.generated_subgroup(&[p, q, r]).len(), 16);
        let rp = o.mul(r, p);
        assert_eq!(o.pow(rp, 4), o.pow(r, 2));
        let t = o.generated_subgroup(&[x, p, q]);
        assert_eq!(t.len() * 2, o.order());
        // The index-2 subgroup multiplies exactly like T*(n) under X, P, Q.
        let tn = build(GroupSpec::TStar(n));
        let (tx, tp, tq) = (
            tn.generator("X").unwrap(),
            tn.generator("P").unwrap(),
            tn.generator("Q").unwrap(),
        );
        let mut map = vec![usize::MAX; tn.order()];
        map[0] = 0;
        let mut stack = vec![0];
        while let Some(e) = stack.pop() {
            for (tg, og) in [(tx, x), (tp, p), (tq, q)] {
                let f = tn.mul(e, tg);
                let img = o.mul(map[e], og);
                if map[f] == usize::MAX {
                    map[f] = img;
                    stack.push(f);
                } else {
                    assert_eq!(map[f], img);
                }
            }
        }
        let mut image = map.clone();
        image.sort_unstable();
        image.dedup();
        assert_eq!(image, t);
    }
}

#[test]
fn element_orders() {
    for n in 1..=3 {
        let o = build(GroupSpec::OStar(n));
        assert_eq!(o.order_of(o.generator("R").unwrap()), 4);
        let t = build(GroupSpec::TStar(n));
        assert_eq!(t.order_of(t.generator("X").unwrap()), 3u64.pow(n));
        assert_eq!(t.element_order(&t.identity()).unwrap(), 1);
    }
}

#[test]
fn abelian_groups_are_their_own_abelianization() {
    for m in 1..=50u64 {
        let c = build(GroupSpec::Cyclic(m));
        let expected: Vec<u64> = if m == 1 { vec![] } else { vec![m] };
        assert_eq!(c.abelianization().factors(), expected.as_slice());
        assert_eq!(c.center().0.len() as u64, m);
    }
    let d = build(GroupSpec::direct(GroupSpec::Cyclic(6), GroupSpec::Cyclic(4)));
    assert_eq!(d.abelianization().factors(), &[2, 12]);
}

#[test]
fn semidirect_structure() {
    // Z/5 x| Z/4 with faithful action: derived subgroup Z/5, abelianization Z/4.
    let g = build(GroupSpec::semidirect(GroupSpec::Cyclic(4), Action::new(5, 2, 1, 1)));
    assert_eq!(g.derived_subgroup().len(), 5);
    assert_eq!(g.abelianization().factors(), &[4]);
    assert_eq!(g.center().0.len(), 1);
    assert!(g.verify_presentation().passed());
}
