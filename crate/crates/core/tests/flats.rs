mod common;

use common::{oracle_flats, rational_rank, rows_strategy, weight_system};
use proptest::prelude::*;
use toric_faces::matroid::{
    closure, flats_lattice_with, independence_complex, independence_degree, ClosureBfs, SubsetScan,
};
use toric_faces::strategy::{flat_enumerators, Named};
use toric_faces::{all_flats, flats_lattice};

fn as_pairs(ws: &toric_faces::WeightSystem) -> Vec<(usize, Vec<usize>)> {
    all_flats(ws).iter().map(|f| (f.rank(), f.members().to_vec())).collect()
}

#[test]
fn fixed_systems_match_oracle() {
    let systems: Vec<(usize, Vec<Vec<i64>>)> = vec![
        (2, vec![vec![1, 0], vec![0, 1]]),
        (2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]),
        (2, vec![vec![1, 0], vec![2, 0], vec![0, 1]]),
        (
            3,
            vec![
                vec![1, 0, 0],
                vec![0, 1, 0],
                vec![0, 0, 1],
                vec![1, 1, 0],
                vec![0, 1, 1],
                vec![1, 1, 1],
            ],
        ),
        (
            4,
            vec![
                vec![1, -1, 0, 0],
                vec![1, 0, -1, 0],
                vec![1, 0, 0, -1],
                vec![0, 1, -1, 0],
                vec![0, 1, 0, -1],
                vec![0, 0, 1, -1],
            ],
        ),
    ];
    for (k, rows) in systems {
        assert_eq!(as_pairs(&weight_system(k, &rows)), oracle_flats(&rows));
    }
}

#[test]
fn braid_arrangement_a3_has_15_flats() {
    let rows = vec![
        vec![1, -1, 0, 0],
        vec![1, 0, -1, 0],
        vec![1, 0, 0, -1],
        vec![0, 1, -1, 0],
        vec![0, 1, 0, -1],
        vec![0, 0, 1, -1],
    ];
    let lattice = flats_lattice(&weight_system(4, &rows));
    assert_eq!(lattice.flats().len(), 15);
    let p = lattice.poset();
    assert_eq!(p.mobius(p.bottom().unwrap(), p.top().unwrap()).unwrap(), -6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumerators_agree_with_oracle((k, rows) in rows_strategy(7, 4)) {
        let ws = weight_system(k, &rows);
        let expected = oracle_flats(&rows);
        for name in flat_enumerators().names() {
            let e = flat_enumerators().get(name).unwrap();
            let mut got: Vec<(usize, Vec<usize>)> = e.enumerate(&ws).iter().map(|f| (f.rank(), f.members().to_vec())).collect();
            got.sort();
            prop_assert_eq!(&got, &expected, "enumerator {}", name);
        }
    }

    #[test]
    fn closure_is_a_closure_operator((k, rows) in rows_strategy(7, 4), a in any::<u8>(), b in any::<u8>()) {
        let ws = weight_system(k, &rows);
        let n = rows.len();
        let set = |m: u8| -> Vec<usize> { (0..n).filter(|i| m >> i & 1 == 1).collect() };
        let (sa, sb) = (set(a), set(a | b));
        let ca = closure(&ws, &sa).unwrap();
        let cb = closure(&ws, &sb).unwrap();
        prop_assert!(sa.iter().all(|&i| ca.contains(i)));
        prop_assert!(ca.is_subset(&cb));
        prop_assert_eq!(closure(&ws, ca.members()).unwrap(), ca.clone());
        prop_assert_eq!(ca.rank(), rational_rank(&common::pick(&rows, &sa)));
    }

    #[test]
    fn lattice_axioms_hold((k, rows) in rows_strategy(7, 4)) {
        let ws = weight_system(k, &rows);
        let lattice = flats_lattice(&ws);
        let p = lattice.poset();
        let flats = lattice.flats();
        for i in 0..flats.len() {
            for j in 0..flats.len() {
                let meet: Vec<usize> = flats[i].members().iter().copied().filter(|&m| flats[j].contains(m)).collect();
                let m = p.meet(i, j).unwrap();
                prop_assert_eq!(flats[m].members(), &meet[..]);
                let mut union = flats[i].members().to_vec();
                union.extend_from_slice(flats[j].members());
                let join = p.join(i, j).unwrap();
                prop_assert_eq!(&flats[join], &closure(&ws, &union).unwrap());
                prop_assert!(flats[join].rank() + flats[m].rank() <= flats[i].rank() + flats[j].rank());
            }
            let atoms: Vec<usize> = (0..flats.len()).filter(|&a| flats[a].rank() == 1 && flats[a].is_subset(&flats[i])).collect();
            if !atoms.is_empty() {
                prop_assert_eq!(p.join_all(&atoms), Some(i));
            }
            let atom_mult: usize = atoms.iter().map(|&a| flats[a].multiplicity()).sum();
            prop_assert_eq!(atom_mult, flats[i].multiplicity());
        }
    }

    #[test]
    fn independence_complex_is_pure((k, rows) in rows_strategy(7, 4)) {
        let ws = weight_system(k, &rows);
        let c = independence_complex(&ws);
        let r = rational_rank(&rows);
        prop_assert!(c.facets().iter().all(|f| f.len() == r));
        prop_assert!(c.facets().iter().all(|f| rational_rank(&common::pick(&rows, f)) == r));
        let d = independence_degree(&ws);
        prop_assert!(d <= rows.len());
        if d < rows.len() {
            prop_assert!(d < r + 1);
        }
    }
}

#[test]
fn lattice_strategies_build_equal_posets() {
    let ws = weight_system(
        3,
        &[
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![1, 1, 0],
            vec![0, 0, 1],
            vec![2, 0, 0],
        ],
    );
    let a = flats_lattice_with(&ws, &ClosureBfs);
    let b = flats_lattice_with(&ws, &SubsetScan);
    assert_eq!(a.poset(), b.poset());
    assert_eq!(ClosureBfs.name(), "closure-bfs");
}
