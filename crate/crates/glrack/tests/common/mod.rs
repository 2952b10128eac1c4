//! Oracles shared by the integration suites. Everything here recomputes
//! results along routes independent of the code paths under test: raw
//! axiom checks without pruning, exhaustive enumerations, the explicit-span
//! homology model, and a direct classical quandle state sum.

use glrack::algebra::{validate_rack, FiniteGLRack, FiniteRack};
use glrack::diagram::{trace, FrontDiagram};
use glrack::homology::{
    degenerate_generators, full_boundary_matrix, legendrian_homology, Cocycle2,
};
use glrack::perm::{all_perms, Perm};
use glrack::presentation::{gl_presentation, underlying_quandle_presentation};
use glrack::snf::{
    column_span_basis, homology_invariants, kernel_basis, quotient_invariants, solve_matrix,
    AbGroup, IntMat,
};
use glrack::statesum::GroupRingElement;
use glrack::Caps;

/// Plain six-axiom check with early exit; deliberately free of the
/// column-commutation pruning used by the library enumerator.
pub fn is_gl_structure(rack: &FiniteRack, u: &Perm, d: &Perm) -> bool {
    let n = rack.order();
    for x in 0..n {
        let xx = rack.op(x, x);
        if u.apply(d.apply(xx)) != x || d.apply(u.apply(xx)) != x {
            return false;
        }
    }
    for x in 0..n {
        for y in 0..n {
            if u.apply(rack.op(x, y)) != rack.op(u.apply(x), y) {
                return false;
            }
            if d.apply(rack.op(x, y)) != rack.op(d.apply(x), y) {
                return false;
            }
            if rack.op(x, u.apply(y)) != rack.op(x, y) {
                return false;
            }
            if rack.op(x, d.apply(y)) != rack.op(x, y) {
                return false;
            }
        }
    }
    true
}

/// All racks of one order, by filtering column-permutation tables through
/// the two rack axioms.
pub fn all_racks(n: usize) -> Vec<FiniteRack> {
    let perms = all_perms(n);
    let mut column_choice = vec![0usize; n];
    let mut out = Vec::new();
    loop {
        let table: Vec<Vec<usize>> = (0..n)
            .map(|x| (0..n).map(|y| perms[column_choice[y]].apply(x)).collect())
            .collect();
        if validate_rack(&table).unwrap().ok {
            out.push(FiniteRack::from_table(table).unwrap());
        }
        // odometer over column choices
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            column_choice[i] += 1;
            if column_choice[i] < perms.len() {
                break;
            }
            column_choice[i] = 0;
            i += 1;
        }
    }
}

/// Every GL-rack with order in `1..=max_order`.
pub fn all_gl_racks_up_to(max_order: usize) -> Vec<FiniteGLRack> {
    let caps = Caps::default();
    let mut out = Vec::new();
    for n in 1..=max_order {
        for rack in all_racks(n) {
            for (u, d) in
                glrack::algebra::enumerate_gl_structures(&rack, glrack::algebra::StructureMode::All, &caps)
                    .unwrap()
            {
                out.push(FiniteGLRack::new(rack.clone(), u, d).unwrap());
            }
        }
    }
    out
}

/// Homology of the quotient complex computed through the explicit span of
/// the degenerate subgroup inside the full chain groups, with torsion
/// bookkeeping. Independent of the union-find class model.
pub fn explicit_span_homology(r: &FiniteGLRack, degree: usize) -> AbGroup {
    let caps = Caps::default();
    let n = r.order();
    let dim = n.pow(degree as u32);
    let boundary_out = full_boundary_matrix(r, degree, &caps).unwrap();
    let boundary_in = full_boundary_matrix(r, degree + 1, &caps).unwrap();
    let deg_here = degenerate_generators(r, degree, &caps).unwrap();
    let deg_below = if degree >= 2 {
        degenerate_generators(r, degree - 1, &caps).unwrap()
    } else {
        IntMat::zeros(0, 0)
    };
    // cycles of the quotient: x with ∂x in the degenerate span below
    let cycle_basis = if degree == 1 {
        IntMat::identity(dim)
    } else {
        let block = boundary_out.hstack(&deg_below);
        let ker = kernel_basis(&block).unwrap();
        let mut proj = IntMat::zeros(dim, ker.cols);
        for j in 0..ker.cols {
            for i in 0..dim {
                proj.set(i, j, ker.at(i, j));
            }
        }
        column_span_basis(&proj).unwrap()
    };
    // boundaries of the quotient: images of the degree+1 chains plus the
    // degenerate span in this degree
    let relations = boundary_in.hstack(&deg_here);
    let coords = solve_matrix(&cycle_basis, &relations)
        .unwrap()
        .expect("boundaries and degeneracies are cycles of the quotient");
    quotient_invariants(cycle_basis.cols, &coords).unwrap()
}

/// Direct quandle homology of the subcomplex-free CJKLS-style model: chain
/// groups free on tuples with no adjacent equal pair, boundary projected by
/// dropping the others. Valid for quandles; used against the Legendrian
/// machinery on trivial structures.
pub fn direct_quandle_homology(rack: &FiniteRack, degree: usize) -> AbGroup {
    fn tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (0..n).map(move |x| {
                        let mut t2 = t.clone();
                        t2.push(x);
                        t2
                    })
                })
                .collect();
        }
        out
    }
    let n = rack.order();
    let basis = |len: usize| -> Vec<Vec<usize>> {
        tuples(n, len).into_iter().filter(|t| t.windows(2).all(|w| w[0] != w[1])).collect()
    };
    let matrix = |len: usize| -> IntMat {
        let top = basis(len);
        if len <= 1 {
            return IntMat::zeros(0, top.len());
        }
        let bottom = basis(len - 1);
        let pos = |t: &[usize]| bottom.iter().position(|b| b == t);
        let mut m = IntMat::zeros(bottom.len(), top.len());
        for (col, t) in top.iter().enumerate() {
            for i in 0..len {
                let sign: i128 = if i % 2 == 0 { -1 } else { 1 };
                let dropped: Vec<usize> =
                    t.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
                let mut starred = dropped.clone();
                for entry in starred.iter_mut().take(i) {
                    *entry = rack.op(*entry, t[i]);
                }
                if let Some(row) = pos(&dropped) {
                    m.set(row, col, m.at(row, col) + sign);
                }
                if let Some(row) = pos(&starred) {
                    m.set(row, col, m.at(row, col) - sign);
                }
            }
        }
        m
    };
    homology_invariants(&matrix(degree), &matrix(degree + 1)).unwrap()
}

/// Wrapper tying the direct quandle model to a trivial-structure GL-rack.
pub fn quandle_vs_legendrian_homology_agree(rack: &FiniteRack, max_degree: usize) -> bool {
    let gl = FiniteGLRack::trivial_structure(rack.clone()).unwrap();
    (1..=max_degree).all(|deg| {
        legendrian_homology(&gl, deg, &Caps::default()).unwrap()
            == direct_quandle_homology(rack, deg)
    })
}

/// Classical quandle cocycle state sum on the underlying topological
/// diagram: arcs are segments merged across cusps and over-passes, the
/// colorings are enumerated exhaustively over arcs, and each crossing
/// contributes `±φ` on arc colors.
pub fn classical_quandle_state_sum(
    d: &FrontDiagram,
    quandle: &FiniteRack,
    phi: &Cocycle2,
) -> GroupRingElement {
    let p = gl_presentation(d);
    let q = underlying_quandle_presentation(&p);
    let map = trace(d);
    let n = quandle.order();
    let m = phi.modulus as i64;
    let mut sum = GroupRingElement::new(phi.modulus);
    let total = n.pow(q.generators as u32);
    for code in 0..total {
        let mut colors = Vec::with_capacity(q.generators);
        let mut c = code;
        for _ in 0..q.generators {
            colors.push(c % n);
            c /= n;
        }
        let ok = q.relations.iter().all(|&(x, sign, y, z)| {
            let v = if sign >= 0 {
                quandle.op(colors[x], colors[y])
            } else {
                quandle.op_inv(colors[x], colors[y])
            };
            v == colors[z]
        });
        if !ok {
            continue;
        }
        let mut w = 0i64;
        for x in &map.crossings {
            let or_in_seg = if map.segments[x.under_in].rightward {
                x.under_in
            } else {
                x.under_out
            };
            let a = colors[q.class_of[or_in_seg]];
            let y = colors[q.class_of[x.over_in]];
            let contribution = if x.sign >= 0 {
                phi.value(a, y)
            } else {
                -phi.value(quandle.op_inv(a, y), y)
            };
            w = (w + contribution).rem_euclid(m);
        }
        sum.add_term(w as u64, 1);
    }
    sum
}
