//! Acceptance suite. Each test covers one numbered criterion, checks it at
//! full strength against an independent oracle where one is specified, and
//! prints a single `[criterion N] PASS` line (visible with
//! `cargo test --test acceptance -- --nocapture`).

mod common;

use common::*;
use glrack::algebra::{
    coset_gl_rack, enumerate_gl_structures, homogeneous_representation, is_gl_isomorphism,
    FiniteGLRack, FiniteRack, StructureMode,
};
use glrack::diagram::{
    classical_invariants, insert_stabilization, moves::random_moves, trefoil, unknot,
    unknot_balanced, unknot_stabilized, FrontDiagram,
};
use glrack::homology::{
    boundary_matrix, cocycle_space_2, full_boundary_matrix, legendrian_homology, tuple_classes,
    Cocycle2,
};
use glrack::perm::{all_perms, Perm};
use glrack::presentation::{
    abelianization, collapse_ud, count_colorings, env_of_gl_rack, env_of_presentation,
    gl_presentation,
};
use glrack::snf::{rank_mod_prime, AbGroup};
use glrack::statesum::{cohomologous_invariance_check, state_sum, state_sum_equal};
use glrack::Caps;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn gl_racks_up_to_4() -> &'static Vec<FiniteGLRack> {
    static CACHE: OnceLock<Vec<FiniteGLRack>> = OnceLock::new();
    CACHE.get_or_init(|| all_gl_racks_up_to(4))
}

fn gl_racks_up_to_3() -> Vec<&'static FiniteGLRack> {
    gl_racks_up_to_4().iter().filter(|r| r.order() <= 3).collect()
}

fn z4_sigma2() -> FiniteGLRack {
    let rack = FiniteRack::permutation_rack(&Perm(vec![2, 3, 0, 1]));
    FiniteGLRack::new(rack, Perm(vec![1, 2, 3, 0]), Perm(vec![1, 2, 3, 0])).unwrap()
}

fn z9_family() -> FiniteGLRack {
    let sigma = Perm((0..9).map(|x| (x + 3) % 9).collect());
    let u = Perm((0..9).map(|x| (x + 1) % 9).collect());
    let d = Perm((0..9).map(|x| (x + 5) % 9).collect());
    FiniteGLRack::new(FiniteRack::permutation_rack(&sigma), u, d).unwrap()
}

fn trivial_gl(rack: FiniteRack) -> FiniteGLRack {
    FiniteGLRack::trivial_structure(rack).unwrap()
}

#[test]
fn criterion_01_axiom_consequences_all_orders_up_to_4() {
    let mut structures = 0usize;
    for gl in gl_racks_up_to_4() {
        let n = gl.order();
        structures += 1;
        // u and d are automorphisms of the underlying rack
        for map in [gl.u(), gl.d()] {
            for x in 0..n {
                for y in 0..n {
                    assert_eq!(map.apply(gl.op(x, y)), gl.op(map.apply(x), map.apply(y)));
                }
            }
        }
        // ud = du, and both undo themselves against the inner action
        let ud = gl.u().compose(gl.d());
        let du = gl.d().compose(gl.u());
        assert_eq!(ud, du);
        for x in 0..n {
            assert_eq!(gl.op(ud.apply(x), x), x);
            assert_eq!(gl.op(du.apply(x), x), x);
        }
    }
    println!("[criterion 1] PASS — structure-map consequences on {structures} GL-racks of order <= 4");
}

#[test]
fn criterion_02_permutation_rack_structures_up_to_order_5() {
    let caps = Caps::default();
    let mut racks_checked = 0usize;
    for n in 1..=5usize {
        for sigma in all_perms(n) {
            racks_checked += 1;
            let rack = FiniteRack::permutation_rack(&sigma);
            let enumerated = enumerate_gl_structures(&rack, StructureMode::All, &caps).unwrap();
            // brute-force oracle over all permutation pairs, no pruning
            let mut oracle = Vec::new();
            for u in all_perms(n) {
                for d in all_perms(n) {
                    if is_gl_structure(&rack, &u, &d) {
                        oracle.push((u.clone(), d));
                    }
                }
            }
            assert_eq!(enumerated, oracle, "set equality for sigma {sigma:?}");

            let id = Perm::identity(n);
            let inv = sigma.inverse();
            assert!(enumerated.contains(&(id.clone(), inv.clone())));
            assert!(enumerated.contains(&(inv, id)));
            let cubic = sigma.compose(&sigma).compose(&sigma).is_identity();
            assert_eq!(enumerated.contains(&(sigma.clone(), sigma.clone())), cubic);

            let cycle_lengths = {
                // single transposition: exactly one 2-cycle, rest fixed
                let mut moved: Vec<usize> =
                    (0..n).filter(|&x| sigma.apply(x) != x).collect();
                moved.sort();
                moved.len() == 2 && sigma.apply(moved[0]) == moved[1]
            };
            if cycle_lengths {
                let ueqd = enumerate_gl_structures(&rack, StructureMode::UEqualsD, &caps).unwrap();
                assert!(ueqd.is_empty(), "transposition rack admits no u = d structure");
            }
        }
    }
    println!("[criterion 2] PASS — enumeration matches the pair oracle on {racks_checked} permutation racks");
}

#[test]
fn criterion_03_distinguishing_unknots_by_coloring() {
    let z4 = z4_sigma2();
    assert_eq!(count_colorings(&unknot(), &z4), 0);
    assert_eq!(count_colorings(&unknot_stabilized(2).unwrap(), &z4), 4);
    println!("[criterion 3] PASS — counts 0 and 4 split the two-cusp and four-cusp unknots");
}

#[test]
fn criterion_04_distinguishing_balanced_from_stabilized() {
    let z9 = z9_family();
    assert_eq!(count_colorings(&unknot_balanced(3).unwrap(), &z9), 9);
    assert_eq!(count_colorings(&unknot_stabilized(3).unwrap(), &z9), 0);
    println!("[criterion 4] PASS — counts 9 and 0 split U(3,3) from U(1,5)");
}

#[test]
fn criterion_05_classical_invariants() {
    let tb_r = |d: &FrontDiagram| {
        let (_, tb, r) = classical_invariants(d);
        (tb, r)
    };
    assert_eq!(tb_r(&unknot()), (-1, 0));
    for m in 1..=4i64 {
        assert_eq!(tb_r(&unknot_stabilized(m as usize).unwrap()), (-m, 1 - m));
        assert_eq!(tb_r(&unknot_balanced(m as usize).unwrap()), (-m, 0));
    }
    assert_eq!(tb_r(&trefoil()), (1, 0));
    println!("[criterion 5] PASS — (tb, r) exact on the standard family and the trefoil");
}

#[test]
fn criterion_06_move_invariance_with_negative_control() {
    let diagrams: Vec<FrontDiagram> = vec![
        unknot(),
        unknot_stabilized(2).unwrap(),
        unknot_balanced(2).unwrap(),
        trefoil(),
    ];
    let racks = vec![
        trivial_gl(FiniteRack::dihedral_quandle(3)),
        z4_sigma2(),
        trivial_gl(FiniteRack::alexander_gf4()),
    ];
    let gf4 = trivial_gl(FiniteRack::alexander_gf4());
    let phi2 = cocycle_space_2(&gf4, 2)
        .unwrap()
        .into_iter()
        .find(|phi| {
            let s = state_sum(&trefoil(), &gf4, phi).unwrap();
            s.multiplicity(1) > 0
        })
        .expect("an enhancing cocycle over Z_2");
    let t3 = trivial_gl(FiniteRack::trivial_quandle(3));
    let phi3 = cocycle_space_2(&t3, 3).unwrap().into_iter().next().expect("cocycle over Z_3");
    let weighted: Vec<(&FiniteGLRack, &Cocycle2)> = vec![(&gf4, &phi2), (&t3, &phi3)];

    let mut runs = 0usize;
    for d in &diagrams {
        let base_colorings: Vec<u64> = racks.iter().map(|r| count_colorings(d, r)).collect();
        let base_sums: Vec<_> =
            weighted.iter().map(|(r, phi)| state_sum(d, r, phi).unwrap()).collect();
        let (_, tb, r) = classical_invariants(d);
        for seed in 0..50u64 {
            runs += 1;
            let moved = random_moves(d, 50, seed);
            assert_eq!(moved.components(), d.components(), "seed {seed} on {d}");
            let (_, tb2, r2) = classical_invariants(&moved);
            assert_eq!((tb2, r2), (tb, r), "seed {seed} on {d}");
            for (rack, base) in racks.iter().zip(&base_colorings) {
                assert_eq!(count_colorings(&moved, rack), *base, "seed {seed} on {d}");
            }
            for ((rack, phi), base) in weighted.iter().zip(&base_sums) {
                let sum = state_sum(&moved, rack, phi).unwrap();
                assert!(state_sum_equal(&sum, base).unwrap(), "seed {seed} on {d}");
            }
        }
        // negative control: a stabilization is not a move
        let stabilized = insert_stabilization(d, 1, 1, true).unwrap();
        let (_, tb3, _) = classical_invariants(&stabilized);
        assert_eq!(tb3, tb - 1, "stabilization drops tb by one");
    }
    println!("[criterion 6] PASS — {runs} seeded 50-move runs preserve counts, tb, r, and state sums");
}

#[test]
fn criterion_07_homology_correctness() {
    let caps = Caps::default();
    let mut racks_checked = 0usize;
    for gl in gl_racks_up_to_3() {
        racks_checked += 1;
        // boundary squares to zero through degree 4
        for n in 2..=4usize {
            let a = boundary_matrix(gl, n - 1, &caps).unwrap();
            let b = boundary_matrix(gl, n, &caps).unwrap();
            assert!(a.matmul(&b).unwrap().is_zero(), "quotient ∂∂ at degree {n}");
        }
        // generator closure: boundaries of substitution differences and of
        // adjacent-equal tuples project to zero in the quotient basis
        for n in 2..=4usize {
            let full = full_boundary_matrix(gl, n, &caps).unwrap();
            let top = tuple_classes(gl, n, &caps).unwrap();
            let bottom = tuple_classes(gl, n - 1, &caps).unwrap();
            let project = |col: usize| -> Vec<i128> {
                let mut proj = vec![0i128; bottom.basis.len()];
                for row in 0..full.rows {
                    let v = full.at(row, col);
                    if v != 0 {
                        if let Some(pos) = bottom.basis_index[bottom.class_of[row]] {
                            proj[pos] += v;
                        }
                    }
                }
                proj
            };
            let total = gl.order().pow(n as u32);
            for rank in 0..total {
                let t = top.unrank(rank);
                for i in 0..n {
                    for map in [gl.u(), gl.d()] {
                        let mut sub = t.clone();
                        sub[i] = map.apply(t[i]);
                        let sub_rank = top.tuple_rank(&sub);
                        assert_eq!(
                            project(rank),
                            project(sub_rank),
                            "substitution difference has nonzero boundary image"
                        );
                    }
                }
                if t.windows(2).any(|w| w[0] == w[1]) {
                    assert!(
                        project(rank).iter().all(|&v| v == 0),
                        "adjacent-equal tuple has nonzero boundary image"
                    );
                }
            }
        }
        // the class-basis model agrees with the explicit-span model
        for n in 1..=3usize {
            let fast = legendrian_homology(gl, n, &caps).unwrap();
            let slow = explicit_span_homology(gl, n);
            assert_eq!(fast, slow, "order {} degree {n}", gl.order());
        }
    }
    // trivial quandles: zero boundaries force free homology of the
    // non-degenerate tuple count, m(m-1)^(n-1)
    for m in 1..=3usize {
        let gl = trivial_gl(FiniteRack::trivial_quandle(m));
        for n in 1..=3usize {
            let tuples = (0..m.pow(n as u32))
                .filter(|&rank| {
                    let t = tuple_classes(&gl, n, &caps).unwrap().unrank(rank);
                    t.windows(2).all(|w| w[0] != w[1])
                })
                .count();
            assert_eq!(tuples, m * (m - 1).pow(n as u32 - 1));
            assert!(boundary_matrix(&gl, n, &caps).unwrap().is_zero());
            assert_eq!(legendrian_homology(&gl, n, &caps).unwrap(), AbGroup::free(tuples));
        }
        assert!(quandle_vs_legendrian_homology_agree(
            &FiniteRack::trivial_quandle(m),
            3
        ));
    }
    // and the direct quandle model agrees on a connected quandle too
    assert!(quandle_vs_legendrian_homology_agree(&FiniteRack::dihedral_quandle(3), 3));
    println!("[criterion 7] PASS — boundary laws, generator closure, and dual-path homology on {racks_checked} GL-racks of order <= 3");
}

#[test]
fn criterion_08_cocycle_solver_equals_cochain_kernel() {
    let caps = Caps::default();
    let mut checked = 0usize;
    for gl in gl_racks_up_to_3() {
        let delta = boundary_matrix(gl, 3, &caps).unwrap().transpose();
        let index = tuple_classes(gl, 2, &caps).unwrap();
        for p in [2u64, 3] {
            checked += 1;
            let basis = cocycle_space_2(gl, p).unwrap();
            let dim = delta.cols - rank_mod_prime(&delta, p);
            assert_eq!(basis.len(), dim, "dimension over Z_{p} for order {}", gl.order());
            // membership: every solver cocycle is killed by the coboundary
            for phi in &basis {
                for row in 0..delta.rows {
                    let mut acc: i128 = 0;
                    for col in 0..delta.cols {
                        let class = index.basis[col];
                        let rep = index.unrank(index.class_reps[class]);
                        acc += delta.at(row, col) * phi.value(rep[0], rep[1]) as i128;
                    }
                    assert_eq!(acc.rem_euclid(p as i128), 0, "cocycle escapes ker δ²");
                }
            }
        }
    }
    assert!(cocycle_space_2(&z4_sigma2(), 2).unwrap().is_empty(), "only the zero cocycle");
    println!("[criterion 8] PASS — solver equals ker δ² in {checked} rack/modulus cases");
}

#[test]
fn criterion_09_state_sums() {
    // crossingless diagrams concentrate at t^0
    for d in [unknot(), unknot_stabilized(2).unwrap(), unknot_balanced(3).unwrap()] {
        let rack = trivial_gl(FiniteRack::trivial_quandle(3));
        let phi = Cocycle2::zero(3, 2);
        let sum = state_sum(&d, &rack, &phi).unwrap();
        assert_eq!(sum.multiplicity(0), count_colorings(&d, &rack));
        assert_eq!(sum.total_multiplicity(), sum.multiplicity(0));
    }
    // trefoil with the dihedral quandle and zero cocycle
    let r3 = trivial_gl(FiniteRack::dihedral_quandle(3));
    let sum = state_sum(&trefoil(), &r3, &Cocycle2::zero(3, 3)).unwrap();
    assert_eq!(sum.to_string(), "9");

    // 100 random coboundary perturbations preserve the sum exactly
    let gf4 = trivial_gl(FiniteRack::alexander_gf4());
    let phi2 = cocycle_space_2(&gf4, 2).unwrap().into_iter().next().unwrap();
    let phi3 = cocycle_space_2(&r3, 3).unwrap().into_iter().next().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    for i in 0..100 {
        if i % 2 == 0 {
            let lambda: Vec<i64> = (0..4).map(|_| rng.gen_range(0..2)).collect();
            assert!(cohomologous_invariance_check(&trefoil(), &gf4, &phi2, &lambda).unwrap());
        } else {
            let lambda: Vec<i64> = (0..3).map(|_| rng.gen_range(0..3)).collect();
            assert!(cohomologous_invariance_check(&trefoil(), &r3, &phi3, &lambda).unwrap());
        }
    }

    // classical specialization on the trefoil: the Legendrian sum with a
    // trivial structure equals the plain quandle cocycle state sum
    for phi in cocycle_space_2(&gf4, 2).unwrap() {
        let legendrian = state_sum(&trefoil(), &gf4, &phi).unwrap();
        let classical = classical_quandle_state_sum(&trefoil(), &FiniteRack::alexander_gf4(), &phi);
        assert!(state_sum_equal(&legendrian, &classical).unwrap());
    }
    let zero3 = Cocycle2::zero(3, 3);
    let classical = classical_quandle_state_sum(&trefoil(), &FiniteRack::dihedral_quandle(3), &zero3);
    assert!(state_sum_equal(&sum, &classical).unwrap());
    println!("[criterion 9] PASS — baseline sums, 100 coboundary perturbations, classical specialization");
}

#[test]
fn criterion_10_enveloping_groups() {
    // the stabilized unknots give the infinite cyclic group
    for m in 1..=4usize {
        let p = gl_presentation(&unknot_stabilized(m).unwrap());
        let env = collapse_ud(&env_of_presentation(&p));
        assert!(env.is_free());
        assert_eq!(abelianization(&env).unwrap(), AbGroup::free(1));
    }
    // two-element trivial rack with the flip structure: rank 1 against
    // rank 2 for its underlying rack
    let flip = Perm(vec![1, 0]);
    let t2_flip =
        FiniteGLRack::new(FiniteRack::trivial_quandle(2), flip.clone(), flip).unwrap();
    let with_structure = abelianization(&collapse_ud(&env_of_gl_rack(&t2_flip))).unwrap();
    assert_eq!(with_structure, AbGroup::free(1));
    let t2_plain = trivial_gl(FiniteRack::trivial_quandle(2));
    let without = abelianization(&collapse_ud(&env_of_gl_rack(&t2_plain))).unwrap();
    assert_eq!(without, AbGroup::free(2));

    // on every GL-rack of order <= 4: the abelianization is torsion-free of
    // rank the number of orbits under u, d and all inner maps together,
    // and that rank never exceeds the number of plain <u,d>-orbits. For a
    // permutation structure (σ, σ) the rank is therefore the number of
    // σ-orbits, which equals the rack order only when σ is the identity.
    let mut checked = 0usize;
    for gl in gl_racks_up_to_4() {
        checked += 1;
        let ab = abelianization(&collapse_ud(&env_of_gl_rack(gl))).unwrap();
        assert!(ab.torsion.is_empty(), "enveloping abelianization has torsion");
        let n = gl.order();
        let mut generators = vec![gl.u().clone(), gl.d().clone()];
        let ud_orbits = glrack::algebra::orbits(n, &generators).len();
        for y in 0..n {
            generators.push(gl.inner_automorphism(y).unwrap());
        }
        let full_orbits = glrack::algebra::orbits(n, &generators).len();
        assert_eq!(ab.rank, full_orbits, "rank is the orbit count of <u, d, inner>");
        assert!(ab.rank <= ud_orbits, "rank exceeds the <u,d>-orbit count");
    }
    println!("[criterion 10] PASS — envelope ranks match orbit counts on {checked} GL-racks of order <= 4");
}

#[test]
fn criterion_11_homogeneous_representation() {
    let caps = Caps::default();
    let mut checked = 0usize;
    for gl in gl_racks_up_to_4() {
        checked += 1;
        let (data, iso) = homogeneous_representation(gl, &caps).unwrap();
        // the six coset conditions verify and the construction succeeds
        data.validate().unwrap();
        let (coset, _) = coset_gl_rack(&data).unwrap();
        assert!(
            is_gl_isomorphism(&coset, gl, &iso),
            "orbit map fails on order {}",
            gl.order()
        );
    }
    println!("[criterion 11] PASS — coset model reconstructs all {checked} GL-racks of order <= 4");
}
