use ratball_core::cabling::*;
use ratball_core::classify::*;
use ratball_core::lattice::*;
use ratball_core::plumbing::gram_matrix;

fn spec(p1: u64, a1: u64, p2: u64, a2: u64, n: i64) -> SurgerySpec {
    SurgerySpec::new(CableTower::new(vec![(p1, a1), (p2, a2)]).unwrap(), n).unwrap()
}

#[test]
fn desk_audit_is_perfect_with_derived_family() {
    let rows = sweep(&SweepRange::default(), &ClassifyOptions::default()).unwrap();
    assert!(rows.len() > 900);
    assert!(rows.windows(2).all(|w| w[0].key() < w[1].key()));
    let passes: Vec<_> = rows.iter().filter(|r| r.verdict.passes()).map(SweepRow::key).collect();
    assert_eq!(
        passes,
        [
            (2, 3, 2, 17, 36),
            (2, 3, 3, 26, 81),
            (2, 7, 2, 31, 64),
            (2, 7, 3, 47, 144),
            (3, 4, 2, 31, 64),
            (3, 4, 3, 47, 144),
        ]
    );
    for r in &rows {
        if let Verdict::ObstructionPasses(m) = &r.verdict {
            let s = spec(r.p1, r.a1, r.p2, r.a2, r.n);
            let g = gram_matrix(&reduced_plumbing(&s).unwrap().plumbing.tree);
            assert_eq!(verify_embedding(&g, m), Ok(true));
            assert_eq!(Some(g.dim()), r.rank);
        }
    }
    let rep = theorem_audit(&rows, FamilyPredicate::new(FamilyForm::Derived));
    assert!(rep.is_perfect(), "{:?}", rep.disagreements);
    assert_eq!(rep.agreements, rows.len());

    let printed = theorem_audit(&rows, FamilyPredicate::new(FamilyForm::Printed));
    assert!(!printed.is_perfect());
    assert!(printed.disagreements.iter().any(|d| d.tuple == (2, 3, 2, 17, 36) && !d.predicted_pass));
}

#[test]
fn family_members_have_verified_rediscovered_witnesses() {
    let fam = FamilyPredicate::new(FamilyForm::Derived);
    let mut seen = 0;
    for (p1, p2) in [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (2, 5)] {
        for s in fam.members(p1, p2) {
            let w = known_witness(&s).expect("members have witnesses");
            let g = gram_matrix(&reduced_plumbing(&s).unwrap().plumbing.tree);
            assert_eq!(verify_embedding(&g, &w), Ok(true), "{}", s);
            assert_eq!(w.rank(), g.dim());
            let v = classify_one(&s, SearchBudget::nodes(DEFAULT_NODE_BUDGET)).unwrap();
            assert!(v.passes(), "{} gave {}", s, v);
            seen += 1;
        }
    }
    assert!(seen >= 6);
    assert!(fam.members(3, 2).contains(&spec(3, 4, 2, 31, 64)));
    assert_eq!(known_witness(&spec(2, 3, 2, 13, 28)), None);
}

#[test]
fn algebraic_only_tuples_fail() {
    for (p1, a1, p2, a2) in [(2, 3, 2, 13), (2, 3, 3, 19), (2, 3, 3, 20), (3, 4, 2, 25), (2, 5, 2, 21)] {
        let knot = CableTower::new(vec![(p1, a1), (p2, a2)]).unwrap();
        assert_eq!(classify_tower(&knot), TowerClass::AlgebraicOnly, "{}", knot);
        for big_n in 2..=6 {
            let s = SurgerySpec::new(knot.clone(), big_n + (p2 * a2) as i64).unwrap();
            assert_eq!(classify_one(&s, SearchBudget::unlimited()), Ok(Verdict::ObstructionFails), "{}", s);
        }
    }
}

#[test]
fn negative_n_never_searches() {
    for (s, big_n) in [(spec(2, 3, 2, 17, 33), -1), (spec(2, 7, 2, 31, 1), -61), (spec(3, 4, 3, 47, 140), -1)] {
        assert_eq!(s.big_n(), big_n);
        let c = classify_with(&s, &ClassifyOptions::default()).unwrap();
        assert_eq!(c.verdict, Verdict::NoNegativeDefiniteForm);
        assert_eq!((c.rank, c.nodes), (None, 0));
    }
    assert_eq!(classify_one(&spec(2, 3, 2, 17, 34), SearchBudget::unlimited()), Ok(Verdict::ReducibleBoundary));
    assert_eq!(classify_one(&spec(2, 3, 2, 17, 35), SearchBudget::unlimited()), Ok(Verdict::OutOfScope));
}

#[test]
fn construction_paths_agree() {
    let range = SweepRange { k2: (1..=12).collect(), ..SweepRange::default() };
    for path in [ConstructionPath::ClosedForm, ConstructionPath::Both] {
        let opts = ClassifyOptions { path, ..ClassifyOptions::default() };
        let a = sweep(&range, &opts).unwrap();
        let b = sweep(&range, &ClassifyOptions::default()).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn out_of_family_specs_are_rejected() {
    assert!(classify_one(&spec(3, 5, 2, 31, 64), SearchBudget::unlimited()).is_err());
    let three = CableTower::new(vec![(2, 3), (2, 13), (2, 53)]).unwrap();
    assert!(classify_one(&SurgerySpec::new(three, 110).unwrap(), SearchBudget::unlimited()).is_err());
}
