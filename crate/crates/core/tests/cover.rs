use proptest::prelude::*;

use weylkit::axioms::{certify, Certified, Level, Limits};
use weylkit::cover::{
    coverings_isomorphic, deck_transformations, is_covering_weyl, lift_gallery, local_covering,
    quotient_by_chamber_free_action, universal_cover, CoverError, WeylMorphism, DEFAULT_COVER_CAP,
};
use weylkit::fixtures;
use weylkit::homotopy::FundamentalGroupoid;
use weylkit::weyl::{ChamberId, Gallery, WeylData};

fn cert(d: &WeylData) -> Certified {
    certify(d, Level::Building, &Limits::default())
}

fn fiber_sizes(up: &WeylData, down: &WeylData, p: &WeylMorphism) -> Vec<usize> {
    let mut n = vec![0; down.n_chambers()];
    for x in up.chambers() {
        n[p.chamber_map[x.idx()].idx()] += 1;
    }
    n
}

#[test]
fn quotient_towers_compose_to_coverings() {
    for (name, d, actions) in fixtures::building_actions() {
        let c = cert(&d);
        for (aname, a) in actions {
            let (q, pi) = quotient_by_chamber_free_action(&d, &a, &c.index).unwrap();
            let qc = cert(&q);
            is_covering_weyl(&d, &q, &pi, &c.index, &qc.index).unwrap();
            // quotient and building certify alike below the building level
            assert_eq!(qc.report.level.min(Level::Weyl), c.report.level.min(Level::Weyl), "{name}/{aname}");
            assert!(fiber_sizes(&d, &q, &pi).iter().all(|&n| n == a.group.order()));
            let u = universal_cover(&q, &qc.index, ChamberId(0), None, DEFAULT_COVER_CAP).unwrap();
            let uc = cert(&u.data);
            assert_eq!(uc.report.level, Level::Building);
            assert_eq!(u.data.n_chambers(), fiber_sizes(&u.data, &q, &u.projection)[0] * q.n_chambers());
            // the cover of the quotient is the building over the quotient
            let lambda = coverings_isomorphic(&u.data, &u.projection, &d, &pi, &c.index)
                .unwrap_or_else(|| panic!("{name}/{aname}: cover and building differ"));
            assert_eq!(lambda.then(&pi), u.projection);
            is_covering_weyl(&u.data, &d, &lambda, &uc.index, &c.index).unwrap();
            let deck = deck_transformations(&d, &q, &pi, &c.index).unwrap();
            assert_eq!(deck.len(), a.group.order());
        }
    }
}

#[test]
fn one_chamber_covers_are_regular() {
    for m in 2..=6u32 {
        let d = fixtures::thin_one_chamber(m);
        let c = cert(&d);
        let u = universal_cover(&d, &c.index, ChamberId(0), None, DEFAULT_COVER_CAP).unwrap();
        let uc = cert(&u.data);
        let deck = deck_transformations(&u.data, &d, &u.projection, &uc.index).unwrap();
        let orbit: std::collections::HashSet<ChamberId> = deck.iter().map(|f| f.chamber_map[0]).collect();
        assert_eq!(orbit.len(), u.data.n_chambers());
        assert_eq!(uc.report.level, Level::Building);
        assert_eq!(c.report.level, Level::Weyl);
    }
}

#[test]
fn truncated_covers_of_infinite_type() {
    let d = fixtures::thin_one_chamber_infinite();
    let c = cert(&d);
    assert!(c.report.partial);
    assert!(matches!(
        universal_cover(&d, &c.index, ChamberId(0), None, 1000),
        Err(CoverError::CapExceeded(_))
    ));
    for r in 1..6 {
        let u = universal_cover(&d, &c.index, ChamberId(0), Some(r), 1000).unwrap();
        assert_eq!(u.data.n_chambers(), 2 * r + 1);
        assert_eq!(u.boundary.len(), 2);
        assert!(!u.complete);
    }
}

#[test]
fn local_coverings_of_residues() {
    let d = fixtures::cube();
    let c = cert(&d);
    let a = &fixtures::building_actions()[2].2[0].1;
    let (q, pi) = quotient_by_chamber_free_action(&d, a, &c.index).unwrap();
    assert_eq!(q.n_chambers(), 1);
    let lc = local_covering(&d, &q, &pi, &[0, 1], ChamberId(0));
    assert_eq!(lc.upstairs.data.n_chambers(), 4);
    assert_eq!(lc.downstairs.data.n_chambers(), 1);
}

fn random_gallery(d: &WeylData, start: ChamberId, steps: &[usize]) -> Gallery {
    let mut g = Gallery::trivial(start);
    for &s in steps {
        let star = d.star(d.end(&g));
        g.edges.push(star[s % star.len()]);
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Lifts of homotopic galleries from one chamber are homotopic upstairs.
    #[test]
    fn homotopy_lifting(k in 0usize..4, steps in proptest::collection::vec(0usize..6, 0..10), up in 0usize..64) {
        let d = match k {
            0 => fixtures::thin_one_chamber(3),
            1 => fixtures::thin_one_chamber(5),
            2 => fixtures::hexagon(),
            _ => fixtures::fano(),
        };
        let c = cert(&d);
        let fg = FundamentalGroupoid::new(&c).unwrap();
        let u = universal_cover(&d, &c.index, ChamberId(0), None, DEFAULT_COVER_CAP).unwrap();
        let uc = cert(&u.data);
        let ufg = FundamentalGroupoid::new(&uc).unwrap();
        let g = random_gallery(&d, ChamberId(0), &steps);
        let geo = fg.homotopy().reduce_to_geodesic(&g).unwrap();
        let above: Vec<ChamberId> = u.data.chambers().filter(|y| u.projection.chamber_map[y.idx()] == ChamberId(0)).collect();
        let y = above[up % above.len()];
        let lg = lift_gallery(&u.data, &u.projection, y, &g).unwrap();
        let lgeo = lift_gallery(&u.data, &u.projection, y, &geo).unwrap();
        prop_assert_eq!(u.data.end(&lg), u.data.end(&lgeo));
        prop_assert!(ufg.homotopic(&lg, &lgeo).unwrap());
        let sizes = fiber_sizes(&u.data, &d, &u.projection);
        prop_assert_eq!(sizes.iter().min(), sizes.iter().max());
    }
}
