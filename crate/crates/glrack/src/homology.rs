//! Legendrian (co)homology of finite GL-racks.
//!
//! The chain group in degree n is free abelian on n-tuples; the degenerate
//! part is spanned by single-coordinate `u`/`d` substitution differences
//! together with tuples carrying an adjacent equal pair. Because those
//! generators are basis differences and basis elements, the quotient is
//! again free abelian, on the ⟨u,d⟩-substitution classes that contain no
//! adjacent-equal tuple. That is the representation used here: a class
//! index with a degenerate flag per class, and boundary matrices on the
//! surviving class bases. It makes the quotient torsion-free by
//! construction; the explicit-span route through the full chain groups is
//! kept available (`full_boundary_matrix`, `degenerate_generators`) so the
//! two models can be compared on small racks.
//!
//! Degrees are n ≥ 1 throughout; boundaries vanish for n ≤ 1.

use crate::algebra::FiniteGLRack;
use crate::snf::{
    homology_invariants, homology_invariants_mod, kernel_mod_basis, AbGroup, IntMat,
};
use crate::{Caps, Error, Result};
use std::collections::HashMap;

fn rank_of(order: usize, tuple: &[usize]) -> usize {
    let mut rank = 0;
    for &x in tuple.iter().rev() {
        rank = rank * order + x;
    }
    rank
}

fn unrank_of(order: usize, degree: usize, mut rank: usize) -> Vec<usize> {
    let mut t = Vec::with_capacity(degree);
    for _ in 0..degree {
        t.push(rank % order);
        rank /= order;
    }
    t
}

fn checked_power(base: usize, exp: usize, cap: usize) -> Result<usize> {
    let mut total = 1usize;
    for _ in 0..exp {
        total = total
            .checked_mul(base)
            .filter(|&t| t <= cap)
            .ok_or_else(|| Error::Cap(format!("{base}^{exp} tuples exceed cap {cap}")))?;
    }
    Ok(total)
}

/// ⟨u,d⟩-substitution classes of n-tuples with degeneracy flags.
#[derive(Debug, Clone)]
pub struct TupleClassIndex {
    pub degree: usize,
    pub rack_order: usize,
    /// tuple rank → class id.
    pub class_of: Vec<usize>,
    /// class id → least member rank.
    pub class_reps: Vec<usize>,
    /// class id → some member has an adjacent equal pair.
    pub degenerate: Vec<bool>,
    /// non-degenerate class ids, ascending.
    pub basis: Vec<usize>,
    /// class id → position in `basis`.
    pub basis_index: Vec<Option<usize>>,
}

impl TupleClassIndex {
    pub fn tuple_rank(&self, tuple: &[usize]) -> usize {
        rank_of(self.rack_order, tuple)
    }

    pub fn unrank(&self, rank: usize) -> Vec<usize> {
        unrank_of(self.rack_order, self.degree, rank)
    }

    pub fn class_count(&self) -> usize {
        self.class_reps.len()
    }

    /// Basis position of the class of `tuple`, `None` when degenerate.
    pub fn basis_pos(&self, tuple: &[usize]) -> Option<usize> {
        self.basis_index[self.class_of[self.tuple_rank(tuple)]]
    }
}

fn uf_find(parent: &mut Vec<usize>, x: usize) -> usize {
    if parent[x] != x {
        let root = uf_find(parent, parent[x]);
        parent[x] = root;
    }
    parent[x]
}

/// Classes of `X^n` under coordinatewise `u`/`d` substitution, flagged
/// degenerate when any member has an adjacent equal pair.
pub fn tuple_classes(r: &FiniteGLRack, degree: usize, caps: &Caps) -> Result<TupleClassIndex> {
    if degree == 0 {
        return Err(Error::Format("degree must be at least 1".into()));
    }
    let n = r.order();
    let total = checked_power(n, degree, caps.tuple_count)?;
    let mut parent: Vec<usize> = (0..total).collect();
    let mut stride = 1usize;
    for _coord in 0..degree {
        for rank in 0..total {
            let digit = rank / stride % n;
            for map in [r.u(), r.d()] {
                let image = map.apply(digit);
                let sub_rank = if image >= digit {
                    rank + (image - digit) * stride
                } else {
                    rank - (digit - image) * stride
                };
                let ra = uf_find(&mut parent, rank);
                let rb = uf_find(&mut parent, sub_rank);
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        stride *= n;
    }
    let mut class_of = vec![usize::MAX; total];
    let mut class_reps = Vec::new();
    let mut root_to_class: HashMap<usize, usize> = HashMap::new();
    for rank in 0..total {
        let root = uf_find(&mut parent, rank);
        let id = *root_to_class.entry(root).or_insert_with(|| {
            class_reps.push(rank);
            class_reps.len() - 1
        });
        class_of[rank] = id;
    }
    let mut degenerate = vec![false; class_reps.len()];
    if degree >= 2 {
        for rank in 0..total {
            let t = unrank_of(n, degree, rank);
            if t.windows(2).any(|w| w[0] == w[1]) {
                degenerate[class_of[rank]] = true;
            }
        }
    }
    let basis: Vec<usize> = (0..class_reps.len()).filter(|&c| !degenerate[c]).collect();
    let mut basis_index = vec![None; class_reps.len()];
    for (pos, &c) in basis.iter().enumerate() {
        basis_index[c] = Some(pos);
    }
    Ok(TupleClassIndex {
        degree,
        rack_order: n,
        class_of,
        class_reps,
        degenerate,
        basis,
        basis_index,
    })
}

/// Signed boundary terms of one n-tuple in the full chain group:
/// `∂(x₁,…,xₙ) = Σᵢ (−1)ⁱ [(…,x̂ᵢ,…) − (x₁∗xᵢ,…,x_{i−1}∗xᵢ,x̂ᵢ,…)]`.
fn boundary_terms(r: &FiniteGLRack, t: &[usize]) -> Vec<(i128, Vec<usize>)> {
    let n = t.len();
    if n <= 1 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let sign: i128 = if i % 2 == 0 { -1 } else { 1 }; // (−1)^(i+1) for 1-based i
        let dropped: Vec<usize> =
            t.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
        let mut starred = dropped.clone();
        for entry in starred.iter_mut().take(i) {
            *entry = r.op(*entry, t[i]);
        }
        out.push((sign, dropped));
        out.push((-sign, starred));
    }
    out
}

/// Boundary matrix `∂_n` on the non-degenerate class bases, rows indexed by
/// degree n−1 and columns by degree n. For n = 1 the matrix has no rows.
pub fn boundary_matrix(r: &FiniteGLRack, degree: usize, caps: &Caps) -> Result<IntMat> {
    let top = tuple_classes(r, degree, caps)?;
    if degree == 1 {
        return Ok(IntMat::zeros(0, top.basis.len()));
    }
    let bottom = tuple_classes(r, degree - 1, caps)?;
    let mut m = IntMat::zeros(bottom.basis.len(), top.basis.len());
    for (col, &class) in top.basis.iter().enumerate() {
        let rep = top.unrank(top.class_reps[class]);
        for (coeff, term) in boundary_terms(r, &rep) {
            if let Some(row) = bottom.basis_pos(&term) {
                m.set(row, col, m.at(row, col) + coeff);
            }
        }
    }
    Ok(m)
}

/// Boundary matrix on the full tuple bases, without the quotient.
pub fn full_boundary_matrix(r: &FiniteGLRack, degree: usize, caps: &Caps) -> Result<IntMat> {
    let n = r.order();
    let cols = checked_power(n, degree, caps.tuple_count)?;
    if degree == 1 {
        return Ok(IntMat::zeros(0, cols));
    }
    let rows = checked_power(n, degree - 1, caps.tuple_count)?;
    let mut m = IntMat::zeros(rows, cols);
    for rank in 0..cols {
        let t = unrank_of(n, degree, rank);
        for (coeff, term) in boundary_terms(r, &t) {
            let row = rank_of(n, &term);
            m.set(row, rank, m.at(row, rank) + coeff);
        }
    }
    Ok(m)
}

/// Generators of the degenerate subgroup inside the full degree-n chain
/// group, as columns: `u`- and `d`-substitution differences plus
/// adjacent-equal tuples.
pub fn degenerate_generators(r: &FiniteGLRack, degree: usize, caps: &Caps) -> Result<IntMat> {
    let n = r.order();
    let total = checked_power(n, degree, caps.tuple_count)?;
    let mut cols: Vec<Vec<(usize, i128)>> = Vec::new();
    for rank in 0..total {
        let t = unrank_of(n, degree, rank);
        for i in 0..degree {
            for map in [r.u(), r.d()] {
                let mut sub = t.clone();
                sub[i] = map.apply(t[i]);
                let sub_rank = rank_of(n, &sub);
                if sub_rank != rank {
                    cols.push(vec![(rank, 1), (sub_rank, -1)]);
                }
            }
        }
        if t.windows(2).any(|w| w[0] == w[1]) {
            cols.push(vec![(rank, 1)]);
        }
    }
    let mut m = IntMat::zeros(total, cols.len());
    for (j, col) in cols.iter().enumerate() {
        for &(row, v) in col {
            m.set(row, j, v);
        }
    }
    Ok(m)
}

/// `H_n` of the quotient complex with integer coefficients, as invariant
/// factors plus free rank.
pub fn legendrian_homology(r: &FiniteGLRack, degree: usize, caps: &Caps) -> Result<AbGroup> {
    let out = boundary_matrix(r, degree, caps)?;
    let inn = boundary_matrix(r, degree + 1, caps)?;
    homology_invariants(&out, &inn)
}

/// `H^n` of the dualized quotient complex; `modulus = 0` means integer
/// coefficients.
pub fn legendrian_cohomology(
    r: &FiniteGLRack,
    degree: usize,
    modulus: u64,
    caps: &Caps,
) -> Result<AbGroup> {
    let delta_out = boundary_matrix(r, degree + 1, caps)?.transpose();
    let delta_in = boundary_matrix(r, degree, caps)?.transpose();
    if modulus == 0 {
        homology_invariants(&delta_out, &delta_in)
    } else if modulus == 1 {
        Ok(AbGroup { torsion: Vec::new(), rank: 0 })
    } else {
        homology_invariants_mod(&delta_out, &delta_in, modulus)
    }
}

// ---------------------------------------------------------------------------
// 2-cocycles
// ---------------------------------------------------------------------------

/// A Legendrian 2-cochain with values in `Z_modulus`, stored as a full
/// value table (degenerate classes carry 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle2 {
    pub modulus: u64,
    /// `values[x][y]` in `0..modulus`.
    pub values: Vec<Vec<i64>>,
}

impl Cocycle2 {
    pub fn zero(order: usize, modulus: u64) -> Cocycle2 {
        Cocycle2 { modulus, values: vec![vec![0; order]; order] }
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, x: usize, y: usize) -> i64 {
        self.values[x][y]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|row| row.iter().all(|&v| v == 0))
    }

    /// Pointwise sum mod the common modulus.
    pub fn add(&self, other: &Cocycle2) -> Result<Cocycle2> {
        if self.modulus != other.modulus || self.order() != other.order() {
            return Err(Error::Domain("cocycle modulus or order mismatch".into()));
        }
        let m = self.modulus as i64;
        let values = (0..self.order())
            .map(|x| {
                (0..self.order())
                    .map(|y| (self.values[x][y] + other.values[x][y]).rem_euclid(m))
                    .collect()
            })
            .collect();
        Ok(Cocycle2 { modulus: self.modulus, values })
    }
}

/// Checks the six Legendrian 2-cocycle conditions; failures name the
/// condition and a witness. Written additively: condition (2) is
/// `φ(x,x) = 0` and (1) is
/// `φ(x₁,x₃) + φ(x₁∗x₃, x₂∗x₃) = φ(x₁∗x₂, x₃) + φ(x₁,x₂)`.
pub fn validate_cocycle_2(r: &FiniteGLRack, phi: &Cocycle2) -> Result<()> {
    let n = r.order();
    if phi.order() != n {
        return Err(Error::Format("cocycle table order disagrees with the rack".into()));
    }
    if phi.modulus < 1 {
        return Err(Error::Format("cocycle modulus must be at least 1".into()));
    }
    let m = phi.modulus as i64;
    for row in &phi.values {
        for &v in row {
            if v < 0 || v >= m {
                return Err(Error::Format(format!("cocycle value {v} outside 0..{m}")));
            }
        }
    }
    let val = |x: usize, y: usize| phi.value(x, y);
    for x in 0..n {
        if val(x, x) % m != 0 {
            return Err(Error::Domain(format!("cocycle condition (2) fails at x={x}")));
        }
    }
    for x1 in 0..n {
        for x2 in 0..n {
            if (val(x1, x2) - val(r.u().apply(x1), x2)) % m != 0 {
                return Err(Error::Domain(format!("cocycle condition (3) fails at ({x1},{x2})")));
            }
            if (val(x1, x2) - val(x1, r.u().apply(x2))) % m != 0 {
                return Err(Error::Domain(format!("cocycle condition (4) fails at ({x1},{x2})")));
            }
            if (val(x1, x2) - val(r.d().apply(x1), x2)) % m != 0 {
                return Err(Error::Domain(format!("cocycle condition (5) fails at ({x1},{x2})")));
            }
            if (val(x1, x2) - val(x1, r.d().apply(x2))) % m != 0 {
                return Err(Error::Domain(format!("cocycle condition (6) fails at ({x1},{x2})")));
            }
        }
    }
    for x1 in 0..n {
        for x2 in 0..n {
            for x3 in 0..n {
                let lhs = val(x1, x3) + val(r.op(x1, x3), r.op(x2, x3));
                let rhs = val(r.op(x1, x2), x3) + val(x1, x2);
                if (lhs - rhs) % m != 0 {
                    return Err(Error::Domain(format!(
                        "cocycle condition (1) fails at ({x1},{x2},{x3})"
                    )));
                }
            }
        }
    }
    Ok(())
}

fn cocycle_from_class_values(
    r: &FiniteGLRack,
    index: &TupleClassIndex,
    class_values: &[i64],
    modulus: u64,
) -> Cocycle2 {
    let n = r.order();
    let mut phi = Cocycle2::zero(n, modulus);
    for x in 0..n {
        for y in 0..n {
            if let Some(pos) = index.basis_pos(&[x, y]) {
                phi.values[x][y] = class_values[pos].rem_euclid(modulus as i64);
            }
        }
    }
    phi
}

/// Generating set of `Z²_L(X; Z_m)`: one variable per non-degenerate pair
/// class, with the square condition (1) as the linear system — conditions
/// (2)–(6) are absorbed by the class quotient. For prime moduli the result
/// is a basis.
pub fn cocycle_space_2(r: &FiniteGLRack, modulus: u64) -> Result<Vec<Cocycle2>> {
    if modulus < 2 {
        return Err(Error::Format("cocycle modulus must be at least 2".into()));
    }
    let caps = Caps::default();
    let index = tuple_classes(r, 2, &caps)?;
    let n = r.order();
    let vars = index.basis.len();
    let mut rows: Vec<Vec<i128>> = Vec::new();
    for x1 in 0..n {
        for x2 in 0..n {
            for x3 in 0..n {
                let mut row = vec![0i128; vars];
                {
                    let mut add = |pair: [usize; 2], c: i128| {
                        if let Some(pos) = index.basis_pos(&pair) {
                            row[pos] += c;
                        }
                    };
                    add([x1, x3], 1);
                    add([r.op(x1, x3), r.op(x2, x3)], 1);
                    add([r.op(x1, x2), x3], -1);
                    add([x1, x2], -1);
                }
                if row.iter().any(|&c| c != 0) {
                    rows.push(row);
                }
            }
        }
    }
    let m = if rows.is_empty() { IntMat::zeros(0, vars) } else { IntMat::from_rows(rows) };
    let kernel = kernel_mod_basis(&m, modulus)?;
    let mut out = Vec::new();
    for j in 0..kernel.cols {
        let class_values: Vec<i64> =
            (0..vars).map(|i| (kernel.at(i, j).rem_euclid(modulus as i128)) as i64).collect();
        if class_values.iter().all(|&v| v == 0) {
            continue;
        }
        let phi = cocycle_from_class_values(r, &index, &class_values, modulus);
        debug_assert!(validate_cocycle_2(r, &phi).is_ok());
        if !out.contains(&phi) {
            out.push(phi);
        }
    }
    Ok(out)
}

/// Generating set of `B²_L(X; Z_m)`: coboundaries `δλ(x,y) = λ(x) − λ(x∗y)`
/// of the degree-1 class cochains.
pub fn coboundary_space_2(r: &FiniteGLRack, modulus: u64) -> Result<Vec<Cocycle2>> {
    if modulus < 2 {
        return Err(Error::Format("cocycle modulus must be at least 2".into()));
    }
    let caps = Caps::default();
    let deg1 = tuple_classes(r, 1, &caps)?;
    let mut out = Vec::new();
    for &class in &deg1.basis {
        let lambda: Vec<i64> =
            (0..r.order()).map(|x| (deg1.class_of[x] == class) as i64).collect();
        let phi = coboundary_of(r, &lambda, modulus)?;
        if !phi.is_zero() && !out.contains(&phi) {
            out.push(phi);
        }
    }
    Ok(out)
}

/// The coboundary of an arbitrary degree-1 class cochain `lambda` (values
/// per element; must be constant on ⟨u,d⟩ classes).
pub fn coboundary_of(r: &FiniteGLRack, lambda: &[i64], modulus: u64) -> Result<Cocycle2> {
    let n = r.order();
    if lambda.len() != n {
        return Err(Error::Format("cochain length disagrees with the rack".into()));
    }
    let caps = Caps::default();
    let deg1 = tuple_classes(r, 1, &caps)?;
    for x in 0..n {
        let rep = deg1.class_reps[deg1.class_of[x]];
        if lambda[x] != lambda[rep] {
            return Err(Error::Domain(format!(
                "cochain is not constant on the substitution class of {x}"
            )));
        }
    }
    let m = modulus as i64;
    let deg2 = tuple_classes(r, 2, &caps)?;
    let mut phi = Cocycle2::zero(n, modulus);
    for x in 0..n {
        for y in 0..n {
            if deg2.basis_pos(&[x, y]).is_some() {
                phi.values[x][y] = (lambda[x] - lambda[r.op(x, y)]).rem_euclid(m);
            }
        }
    }
    validate_cocycle_2(r, &phi)?;
    Ok(phi)
}

// ---------------------------------------------------------------------------
// cocycle text format
// ---------------------------------------------------------------------------

/// Serializes a cocycle as one `x y value` line per non-degenerate class
/// representative.
pub fn format_cocycle(r: &FiniteGLRack, phi: &Cocycle2) -> Result<String> {
    let index = tuple_classes(r, 2, &Caps::default())?;
    let mut out = String::from("cocycle\n");
    out.push_str(&format!("coeff: {}\n", phi.modulus));
    for &class in &index.basis {
        let rep = index.unrank(index.class_reps[class]);
        out.push_str(&format!("{} {} {}\n", rep[0], rep[1], phi.value(rep[0], rep[1])));
    }
    Ok(out)
}

/// Parses the cocycle format against a rack; values are assigned to whole
/// substitution classes and the result is validated.
pub fn parse_cocycle(text: &str, r: &FiniteGLRack) -> Result<Cocycle2> {
    let index = tuple_classes(r, 2, &Caps::default())?;
    let n = r.order();
    let mut header_seen = false;
    let mut modulus: Option<u64> = None;
    let mut class_values: Vec<Option<i64>> = vec![None; index.basis.len()];
    for (lineno, raw) in text.lines().enumerate() {
        let ln = lineno + 1;
        let line = match raw.find('#') {
            Some(p) => raw[..p].trim(),
            None => raw.trim(),
        };
        if line.is_empty() {
            continue;
        }
        if !header_seen {
            if line != "cocycle" {
                return Err(Error::Format(format!("line {ln}: expected `cocycle` header")));
            }
            header_seen = true;
            continue;
        }
        if modulus.is_none() {
            let m = line
                .strip_prefix("coeff:")
                .map(str::trim)
                .and_then(|s| s.parse::<u64>().ok())
                .ok_or_else(|| Error::Format(format!("line {ln}: expected `coeff: m`")))?;
            modulus = Some(m);
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(Error::Format(format!("line {ln}: expected `x y value`")));
        }
        let x: usize = parts[0]
            .parse()
            .map_err(|_| Error::Format(format!("line {ln}: bad element {:?}", parts[0])))?;
        let y: usize = parts[1]
            .parse()
            .map_err(|_| Error::Format(format!("line {ln}: bad element {:?}", parts[1])))?;
        let v: i64 = parts[2]
            .parse()
            .map_err(|_| Error::Format(format!("line {ln}: bad value {:?}", parts[2])))?;
        if x >= n || y >= n {
            return Err(Error::Format(format!("line {ln}: pair ({x},{y}) out of range")));
        }
        match index.basis_pos(&[x, y]) {
            Some(pos) => class_values[pos] = Some(v),
            None => {
                if v != 0 {
                    return Err(Error::Domain(format!(
                        "line {ln}: degenerate pair ({x},{y}) must have value 0"
                    )));
                }
            }
        }
    }
    let modulus = modulus.ok_or_else(|| Error::Format("missing `coeff:` line".into()))?;
    let values: Vec<i64> = class_values.into_iter().map(|v| v.unwrap_or(0)).collect();
    let phi = cocycle_from_class_values(r, &index, &values, modulus);
    validate_cocycle_2(r, &phi)?;
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FiniteGLRack, FiniteRack};
    use crate::perm::Perm;
    use crate::snf::{in_span_mod_prime, rank_mod_prime, solve_matrix};

    fn t(n: usize) -> FiniteGLRack {
        FiniteGLRack::trivial_structure(FiniteRack::trivial_quandle(n)).unwrap()
    }

    fn flip_rack() -> FiniteGLRack {
        // {0,1} with x∗y = flip(x), u = id, d = flip
        let rack = FiniteRack::permutation_rack(&Perm(vec![1, 0]));
        FiniteGLRack::new(rack, Perm::identity(2), Perm(vec![1, 0])).unwrap()
    }

    fn z4_sigma2() -> FiniteGLRack {
        let rack = FiniteRack::permutation_rack(&Perm(vec![2, 3, 0, 1]));
        FiniteGLRack::new(rack, Perm(vec![1, 2, 3, 0]), Perm(vec![1, 2, 3, 0])).unwrap()
    }

    #[test]
    fn classes_of_trivial_structure_are_singletons() {
        let caps = Caps::default();
        let idx = tuple_classes(&t(2), 2, &caps).unwrap();
        assert_eq!(idx.class_count(), 4);
        assert_eq!(idx.basis.len(), 2);
        assert!(idx.basis_pos(&[0, 0]).is_none());
        assert!(idx.basis_pos(&[1, 1]).is_none());
        assert!(idx.basis_pos(&[0, 1]).is_some());
    }

    #[test]
    fn flip_rack_classes() {
        let caps = Caps::default();
        let idx1 = tuple_classes(&flip_rack(), 1, &caps).unwrap();
        assert_eq!(idx1.class_count(), 1);
        assert_eq!(idx1.basis.len(), 1);
        let idx2 = tuple_classes(&flip_rack(), 2, &caps).unwrap();
        assert_eq!(idx2.class_count(), 1);
        assert!(idx2.basis.is_empty(), "the single class contains (0,0)");
    }

    #[test]
    fn tuple_cap_respected() {
        let caps = Caps { search_order: 8, tuple_count: 10 };
        assert!(matches!(tuple_classes(&t(4), 2, &caps), Err(Error::Cap(_))));
    }

    #[test]
    fn boundary_zero_in_degree_one_and_for_trivial_quandles() {
        let caps = Caps::default();
        let m = boundary_matrix(&t(3), 1, &caps).unwrap();
        assert_eq!((m.rows, m.cols), (0, 3));
        for n in 2..=4 {
            let m = boundary_matrix(&t(3), n, &caps).unwrap();
            assert!(m.is_zero(), "trivial quandle boundaries vanish");
        }
        let m = boundary_matrix(&flip_rack(), 2, &caps).unwrap();
        assert_eq!(m.cols, 0);
    }

    #[test]
    fn boundary_squares_to_zero_on_full_and_quotient() {
        let caps = Caps::default();
        for r in [t(2), t(3), flip_rack(), z4_sigma2()] {
            for n in 2..=4 {
                let a = boundary_matrix(&r, n, &caps).unwrap();
                let b = boundary_matrix(&r, n + 1, &caps).unwrap();
                assert!(a.matmul(&b).unwrap().is_zero(), "quotient ∂∂ = 0");
                let fa = full_boundary_matrix(&r, n, &caps).unwrap();
                let fb = full_boundary_matrix(&r, n + 1, &caps).unwrap();
                assert!(fa.matmul(&fb).unwrap().is_zero(), "full ∂∂ = 0");
            }
        }
    }

    #[test]
    fn degenerate_generators_closed_under_boundary() {
        // ∂ of every degenerate generator lies in the degenerate span below
        let caps = Caps::default();
        for r in [t(2), flip_rack(), z4_sigma2()] {
            for n in 2..=3 {
                let gens = degenerate_generators(&r, n, &caps).unwrap();
                let lower = degenerate_generators(&r, n - 1, &caps).unwrap();
                let bnd = full_boundary_matrix(&r, n, &caps).unwrap();
                let image = bnd.matmul(&gens).unwrap();
                if lower.cols == 0 {
                    assert!(image.is_zero());
                } else {
                    assert!(
                        solve_matrix(&lower, &image).unwrap().is_some(),
                        "closure fails for order {} degree {n}",
                        r.order()
                    );
                }
            }
        }
    }

    #[test]
    fn representative_independence_of_quotient_boundary() {
        let caps = Caps::default();
        for r in [flip_rack(), z4_sigma2()] {
            for n in 2..=3usize {
                let top = tuple_classes(&r, n, &caps).unwrap();
                let bottom = tuple_classes(&r, n - 1, &caps).unwrap();
                let total = r.order().pow(n as u32);
                let mut per_class: Vec<Option<Vec<i128>>> = vec![None; top.class_count()];
                for rank in 0..total {
                    let tuple = top.unrank(rank);
                    let mut proj = vec![0i128; bottom.basis.len()];
                    for (c, term) in boundary_terms(&r, &tuple) {
                        if let Some(pos) = bottom.basis_pos(&term) {
                            proj[pos] += c;
                        }
                    }
                    let class = top.class_of[rank];
                    match &per_class[class] {
                        None => per_class[class] = Some(proj),
                        Some(prev) => assert_eq!(prev, &proj, "class representative mattered"),
                    }
                }
            }
        }
    }

    #[test]
    fn homology_examples() {
        let caps = Caps::default();
        assert_eq!(legendrian_homology(&t(1), 1, &caps).unwrap(), AbGroup::free(1));
        assert_eq!(legendrian_homology(&t(2), 2, &caps).unwrap(), AbGroup::free(2));
        assert_eq!(legendrian_homology(&flip_rack(), 1, &caps).unwrap(), AbGroup::free(1));
    }

    #[test]
    fn trivial_quandle_homology_ranks() {
        let caps = Caps::default();
        for m in 1..=3usize {
            for n in 1..=3usize {
                let h = legendrian_homology(&t(m), n, &caps).unwrap();
                let expected = m * (m - 1).pow(n as u32 - 1);
                assert_eq!(h, AbGroup::free(expected), "T_{m} degree {n}");
            }
        }
    }

    #[test]
    fn cohomology_examples() {
        let caps = Caps::default();
        assert_eq!(legendrian_cohomology(&t(1), 1, 0, &caps).unwrap(), AbGroup::free(1));
        assert_eq!(
            legendrian_cohomology(&t(2), 2, 2, &caps).unwrap(),
            AbGroup { torsion: vec![2, 2], rank: 0 }
        );
        assert!(legendrian_cohomology(&flip_rack(), 2, 3, &caps).unwrap().is_trivial());
    }

    #[test]
    fn cocycle_space_examples() {
        let basis = cocycle_space_2(&t(2), 2).unwrap();
        assert_eq!(basis.len(), 2);
        for phi in &basis {
            validate_cocycle_2(&t(2), phi).unwrap();
        }
        assert!(cocycle_space_2(&z4_sigma2(), 2).unwrap().is_empty());
        let flip2 = {
            let flip = Perm(vec![1, 0]);
            FiniteGLRack::new(FiniteRack::trivial_quandle(2), flip.clone(), flip).unwrap()
        };
        assert!(cocycle_space_2(&flip2, 2).unwrap().is_empty());
    }

    #[test]
    fn cocycle_space_matches_cochain_kernel() {
        let caps = Caps::default();
        for r in [t(2), t(3), flip_rack(), z4_sigma2()] {
            for p in [2u64, 3] {
                let basis = cocycle_space_2(&r, p).unwrap();
                let delta = boundary_matrix(&r, 3, &caps).unwrap().transpose();
                let dim = delta.cols - rank_mod_prime(&delta, p);
                assert_eq!(basis.len(), dim, "order {} mod {p}", r.order());
            }
        }
    }

    #[test]
    fn coboundaries_are_cocycles_and_in_the_span() {
        for r in [t(2), t(3), flip_rack()] {
            for p in [2u64, 3] {
                let cocycles = cocycle_space_2(&r, p).unwrap();
                let cobs = coboundary_space_2(&r, p).unwrap();
                if cocycles.is_empty() {
                    assert!(cobs.is_empty());
                    continue;
                }
                let caps = Caps::default();
                let index = tuple_classes(&r, 2, &caps).unwrap();
                let to_vec = |phi: &Cocycle2| -> Vec<i128> {
                    index
                        .basis
                        .iter()
                        .map(|&c| {
                            let rep = index.unrank(index.class_reps[c]);
                            phi.value(rep[0], rep[1]) as i128
                        })
                        .collect()
                };
                let vecs: Vec<Vec<i128>> = cocycles.iter().map(&to_vec).collect();
                let rows = vecs[0].len();
                let mut mat = IntMat::zeros(rows, vecs.len());
                for (j, col) in vecs.into_iter().enumerate() {
                    for (i, v) in col.into_iter().enumerate() {
                        mat.set(i, j, v);
                    }
                }
                for cob in &cobs {
                    validate_cocycle_2(&r, cob).unwrap();
                    assert!(in_span_mod_prime(&mat, &to_vec(cob), p));
                }
            }
        }
    }

    #[test]
    fn coboundary_of_rejects_non_class_cochains() {
        let r = flip_rack(); // 0 ~ 1 via d
        assert!(coboundary_of(&r, &[0, 1], 2).is_err());
        assert!(coboundary_of(&r, &[1, 1], 2).is_ok());
    }

    #[test]
    fn cocycle_validation_names_conditions() {
        let r = t(2);
        let mut phi = Cocycle2::zero(2, 2);
        phi.values[0][0] = 1;
        let err = validate_cocycle_2(&r, &phi).unwrap_err();
        assert!(err.to_string().contains("condition (2)"));

        let z4 = z4_sigma2();
        let mut phi = Cocycle2::zero(4, 2);
        phi.values[0][1] = 1;
        let err = validate_cocycle_2(&z4, &phi).unwrap_err();
        assert!(err.to_string().contains("condition ("), "{err}");
    }

    #[test]
    fn cocycle_file_roundtrip() {
        let r = t(2);
        for phi in cocycle_space_2(&r, 3).unwrap() {
            let text = format_cocycle(&r, &phi).unwrap();
            let back = parse_cocycle(&text, &r).unwrap();
            assert_eq!(phi, back);
        }
        let bad = "cocycle\ncoeff: 2\n0 0 1\n";
        assert!(parse_cocycle(bad, &r).is_err());
    }
}
