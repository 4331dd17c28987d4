use std::collections::HashSet;

use proptest::prelude::*;

use weylkit::groupoid::{
    covering_at_subgroup, coverings_isomorphic, deck_group, is_covering, FiniteGroupoid, GroupTable,
};

fn perm_group(gens: &[Vec<usize>]) -> GroupTable {
    let n = gens[0].len();
    let id: Vec<usize> = (0..n).collect();
    let mut elems = vec![id.clone()];
    let mut seen = HashSet::from([id]);
    let mut k = 0;
    while k < elems.len() {
        for g in gens {
            let x: Vec<usize> = elems[k].iter().map(|&i| g[i]).collect();
            if seen.insert(x.clone()) {
                elems.push(x);
            }
        }
        k += 1;
    }
    // a then b
    let pos = |p: &Vec<usize>| elems.iter().position(|q| q == p).unwrap();
    let mul = elems
        .iter()
        .map(|a| elems.iter().map(|b| pos(&a.iter().map(|&i| b[i]).collect())).collect())
        .collect();
    GroupTable::new(mul).unwrap()
}

fn s3() -> GroupTable {
    perm_group(&[vec![1, 0, 2], vec![0, 2, 1]])
}

fn d4() -> GroupTable {
    perm_group(&[vec![1, 2, 3, 0], vec![3, 2, 1, 0]])
}

fn klein() -> GroupTable {
    perm_group(&[vec![1, 0, 3, 2], vec![2, 3, 0, 1]])
}

fn groupoids() -> Vec<FiniteGroupoid> {
    vec![
        FiniteGroupoid::product(&s3(), 1),
        FiniteGroupoid::product(&s3(), 3),
        FiniteGroupoid::product(&d4(), 2),
        FiniteGroupoid::product(&klein(), 2),
        FiniteGroupoid::product(&GroupTable::cyclic(6), 1),
        FiniteGroupoid::product(&GroupTable::cyclic(4), 2),
        FiniteGroupoid::pair(4),
    ]
}

fn normalizer_index(t: &GroupTable, h: &[usize]) -> usize {
    let hs: HashSet<usize> = h.iter().copied().collect();
    let n = (0..t.order())
        .filter(|&g| t.conjugate(h, g).into_iter().collect::<HashSet<_>>() == hs)
        .count();
    n / h.len()
}

#[test]
fn coverings_classify_subgroups_up_to_conjugacy() {
    for g in groupoids() {
        assert!(g.n_arrows() <= 64);
        let (loops, table) = g.local_group(0);
        let classes = table.subgroups_up_to_conjugacy();
        let mut covers = Vec::new();
        for h in &classes {
            let arrows: Vec<usize> = h.iter().map(|&i| loops[i]).collect();
            let (c, p) = covering_at_subgroup(&g, 0, &arrows).unwrap();
            is_covering(&c, &g, &p).unwrap();
            assert!(c.is_connected());
            assert_eq!(c.n_vertices(), g.n_vertices() * table.order() / h.len());
            covers.push((c, p, h.clone()));
        }
        for (i, (a, pa, _)) in covers.iter().enumerate() {
            for (j, (b, pb, _)) in covers.iter().enumerate() {
                assert_eq!(coverings_isomorphic(a, pa, b, pb).is_some(), i == j);
            }
        }
        // conjugate subgroups give isomorphic coverings
        for h in table.subgroups() {
            let arrows: Vec<usize> = h.iter().map(|&i| loops[i]).collect();
            let (c, p) = covering_at_subgroup(&g, 0, &arrows).unwrap();
            let hits = covers.iter().filter(|(b, pb, _)| coverings_isomorphic(&c, &p, b, pb).is_some()).count();
            assert_eq!(hits, 1);
        }
    }
}

#[test]
fn injective_on_vertices_iff_isomorphism() {
    for g in groupoids() {
        let (loops, table) = g.local_group(0);
        for h in table.subgroups() {
            let arrows: Vec<usize> = h.iter().map(|&i| loops[i]).collect();
            let (c, p) = covering_at_subgroup(&g, 0, &arrows).unwrap();
            let vs: HashSet<usize> = p.vertex_map.iter().copied().collect();
            let injective = vs.len() == c.n_vertices();
            let arrows_bijective = p.arrow_map.iter().collect::<HashSet<_>>().len() == g.n_arrows()
                && c.n_arrows() == g.n_arrows();
            assert_eq!(injective, arrows_bijective);
            assert_eq!(injective, h.len() == table.order());
        }
    }
}

#[test]
fn deck_group_is_the_normalizer_quotient_and_regular_on_fibers_of_normal_coverings() {
    for g in groupoids() {
        let (loops, table) = g.local_group(0);
        for h in table.subgroups() {
            let arrows: Vec<usize> = h.iter().map(|&i| loops[i]).collect();
            let (c, p) = covering_at_subgroup(&g, 0, &arrows).unwrap();
            let deck = deck_group(&c, &g, &p).unwrap();
            assert_eq!(deck.len(), normalizer_index(&table, &h));
            let normal = (0..table.order()).all(|x| {
                table.conjugate(&h, x).into_iter().collect::<HashSet<_>>() == h.iter().copied().collect()
            });
            let fiber: Vec<usize> = (0..c.n_vertices()).filter(|&y| p.vertex_map[y] == p.vertex_map[0]).collect();
            let orbit: HashSet<usize> = deck.iter().map(|d| d.vertex_map[0]).collect();
            assert_eq!(orbit.len(), deck.len());
            if normal {
                assert_eq!(orbit, fiber.iter().copied().collect());
            }
            for f in &deck {
                assert_eq!(f.then(&p), p);
            }
        }
    }
}

proptest! {
    #[test]
    fn coverings_by_random_subgroups(k in 0usize..7, gens in proptest::collection::vec(0usize..64, 0..3)) {
        let g = &groupoids()[k];
        let (loops, table) = g.local_group(0);
        let gens: Vec<usize> = gens.into_iter().map(|x| x % table.order()).collect();
        let h = table.closure(&gens);
        prop_assert!(table.is_subgroup(&h));
        let arrows: Vec<usize> = h.iter().map(|&i| loops[i]).collect();
        let (c, p) = covering_at_subgroup(g, 0, &arrows).unwrap();
        prop_assert!(is_covering(&c, g, &p).is_ok());
        let (cl, ct) = c.local_group(0);
        prop_assert_eq!(ct.order(), h.len());
        // the local group upstairs maps onto H
        let img: HashSet<usize> = cl.iter().map(|&a| p.arrow_map[a]).collect();
        prop_assert_eq!(img, arrows.iter().copied().collect::<HashSet<_>>());
        // fibers all have the same size
        let mut sizes: Vec<usize> = (0..g.n_vertices())
            .map(|x| (0..c.n_vertices()).filter(|&y| p.vertex_map[y] == x).count())
            .collect();
        sizes.dedup();
        prop_assert_eq!(sizes.len(), 1);
    }
}
