use weylkit::axioms::{certify, Level, Limits};
use weylkit::cover::quotient_by_chamber_free_action;
use weylkit::fixtures;
use weylkit::io;

const GOLDEN: &str = include_str!("golden/one_chamber_i2_3.canonical.json");

#[test]
fn hexagon_modulo_regular_action_matches_golden() {
    let (_, h, actions) = fixtures::building_actions().into_iter().next().unwrap();
    let (_, a) = &actions[0];
    assert_eq!(a.group.order(), 6);
    let c = certify(&h, Level::Building, &Limits::default());
    let (q, _) = quotient_by_chamber_free_action(&h, a, &c.index).unwrap();
    let (q, _, _) = q.canonicalize();
    assert_eq!(io::to_pretty(&io::weyl_data_to_json(&q)), GOLDEN);
}

#[test]
fn golden_round_trips() {
    let d = io::parse_weyl_data(GOLDEN).unwrap();
    assert_eq!(io::to_pretty(&io::weyl_data_to_json(&d)), GOLDEN);
    let (c, _, _) = fixtures::thin_one_chamber(3).canonicalize();
    assert_eq!(io::to_pretty(&io::weyl_data_to_json(&c)), GOLDEN);
}

#[test]
fn serialization_is_deterministic() {
    for d in [fixtures::fano(), fixtures::cube(), fixtures::doubled_suite()] {
        let a = io::to_pretty(&io::weyl_data_to_json(&d));
        let back = io::parse_weyl_data(&a).unwrap();
        assert_eq!(io::to_pretty(&io::weyl_data_to_json(&back)), a);
        assert_eq!(io::to_pretty(&io::weyl_data_to_json(&d.clone())), a);
    }
}
