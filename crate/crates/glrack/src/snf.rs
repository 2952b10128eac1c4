//! Exact integer matrices and Smith normal form.
//!
//! Everything here is exact `i128` arithmetic with overflow checks; pivots
//! are chosen by smallest absolute value to limit entry growth. On top of
//! the factorization sit the lattice routines the rest of the crate needs:
//! kernel bases, integer solving, column-span bases and invariant factors
//! of quotients.

use crate::{Error, Result};

fn gcd128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or_else(|| Error::Cap("i128 overflow in exact arithmetic".into()))
}

fn add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or_else(|| Error::Cap("i128 overflow in exact arithmetic".into()))
}

/// Dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<i128>,
}

impl std::fmt::Debug for IntMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> IntMat {
        IntMat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> IntMat {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i128>>) -> IntMat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> i128 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i128) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn col(&self, j: usize) -> Vec<i128> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.at(r, c));
            }
        }
        t
    }

    pub fn hstack(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.rows, other.rows);
        let mut m = IntMat::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.at(r, c));
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.at(r, c));
            }
        }
        m
    }

    pub fn matmul(&self, other: &IntMat) -> Result<IntMat> {
        assert_eq!(self.cols, other.rows);
        let mut m = IntMat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = add(m.at(r, c), mul(a, other.at(k, c))?)?;
                    m.set(r, c, v);
                }
            }
        }
        Ok(m)
    }

    pub fn mul_vec(&self, v: &[i128]) -> Result<Vec<i128>> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![0; self.rows];
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[r] = add(out[r], mul(self.at(r, c), v[c])?)?;
            }
        }
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn row_add(&mut self, dst: usize, src: usize, q: i128) -> Result<()> {
        for c in 0..self.cols {
            let v = add(self.at(dst, c), mul(q, self.at(src, c))?)?;
            self.set(dst, c, v);
        }
        Ok(())
    }

    /// col[dst] += q * col[src]
    fn col_add(&mut self, dst: usize, src: usize, q: i128) -> Result<()> {
        for r in 0..self.rows {
            let v = add(self.at(r, dst), mul(q, self.at(r, src))?)?;
            self.set(r, dst, v);
        }
        Ok(())
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = self.at(r, c);
            self.set(r, c, -v);
        }
    }

    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = self.at(r, c);
            self.set(r, c, -v);
        }
    }
}

/// Smith normal form `u * m * v = d` with `u`, `v` unimodular and the
/// diagonal of `d` non-negative with each entry dividing the next.
pub struct Snf {
    pub d: IntMat,
    pub u: IntMat,
    pub u_inv: IntMat,
    pub v: IntMat,
}

impl Snf {
    /// Positive diagonal entries (the invariant factors of the column span).
    pub fn diagonal(&self) -> Vec<i128> {
        let n = self.d.rows.min(self.d.cols);
        (0..n).map(|i| self.d.at(i, i)).filter(|&x| x != 0).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().len()
    }
}

struct Reducer {
    a: IntMat,
    u: IntMat,
    u_inv: IntMat,
    v: IntMat,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    /// row[i] -= q * row[t]
    fn row_sub(&mut self, i: usize, t: usize, q: i128) -> Result<()> {
        self.a.row_add(i, t, -q)?;
        self.u.row_add(i, t, -q)?;
        self.u_inv.col_add(t, i, q)
    }

    /// col[j] -= q * col[t]
    fn col_sub(&mut self, j: usize, t: usize, q: i128) -> Result<()> {
        self.a.col_add(j, t, -q)?;
        self.v.col_add(j, t, -q)
    }

    fn smallest_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(i128, usize, usize)> = None;
        for i in t..self.a.rows {
            for j in t..self.a.cols {
                let v = self.a.at(i, j).abs();
                if v != 0 && best.map_or(true, |(b, _, _)| v < b) {
                    best = Some((v, i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    /// Diagonalizes the trailing submatrix starting at `start`.
    fn eliminate_from(&mut self, start: usize) -> Result<()> {
        let mut t = start;
        while t < self.a.rows.min(self.a.cols) {
            let Some((pi, pj)) = self.smallest_pivot(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut clean = true;
                for i in t + 1..self.a.rows {
                    if self.a.at(i, t) != 0 {
                        let q = self.a.at(i, t).div_euclid(self.a.at(t, t));
                        self.row_sub(i, t, q)?;
                        if self.a.at(i, t) != 0 {
                            // remainder is a strictly smaller pivot candidate
                            self.swap_rows(t, i);
                            clean = false;
                        }
                    }
                }
                for j in t + 1..self.a.cols {
                    if self.a.at(t, j) != 0 {
                        let q = self.a.at(t, j).div_euclid(self.a.at(t, t));
                        self.col_sub(j, t, q)?;
                        if self.a.at(t, j) != 0 {
                            self.swap_cols(t, j);
                            clean = false;
                        }
                    }
                }
                if clean {
                    break;
                }
            }
            if self.a.at(t, t) < 0 {
                self.a.negate_row(t);
                self.u.negate_row(t);
                self.u_inv.negate_col(t);
            }
            t += 1;
        }
        Ok(())
    }
}

pub fn smith(m: &IntMat) -> Result<Snf> {
    let mut r = Reducer {
        a: m.clone(),
        u: IntMat::identity(m.rows),
        u_inv: IntMat::identity(m.rows),
        v: IntMat::identity(m.cols),
    };
    r.eliminate_from(0)?;
    // enforce the divisibility chain d_i | d_{i+1}
    loop {
        let n = r.a.rows.min(r.a.cols);
        let mut disturbed = None;
        for i in 0..n.saturating_sub(1) {
            let (a, b) = (r.a.at(i, i), r.a.at(i + 1, i + 1));
            if a != 0 && b % a != 0 {
                // pull d_{i+1} into column i and re-reduce from i
                r.a.col_add(i, i + 1, 1)?;
                r.v.col_add(i, i + 1, 1)?;
                disturbed = Some(i);
                break;
            }
        }
        match disturbed {
            Some(i) => r.eliminate_from(i)?,
            None => break,
        }
    }
    Ok(Snf { d: r.a, u: r.u, u_inv: r.u_inv, v: r.v })
}

/// Columns form a basis of the integer kernel `{x : m x = 0}`. The kernel of
/// an integer matrix is a saturated sublattice, so coordinates of any kernel
/// vector in this basis are integral.
pub fn kernel_basis(m: &IntMat) -> Result<IntMat> {
    let snf = smith(m)?;
    let r = snf.rank();
    let mut k = IntMat::zeros(m.cols, m.cols - r);
    for (out, j) in (r..m.cols).enumerate() {
        for i in 0..m.cols {
            k.set(i, out, snf.v.at(i, j));
        }
    }
    Ok(k)
}

/// Columns form a basis of the lattice spanned by the columns of `m`.
pub fn column_span_basis(m: &IntMat) -> Result<IntMat> {
    let snf = smith(m)?;
    let r = snf.rank();
    let mut b = IntMat::zeros(m.rows, r);
    for j in 0..r {
        let d = snf.d.at(j, j);
        for i in 0..m.rows {
            b.set(i, j, mul(snf.u_inv.at(i, j), d)?);
        }
    }
    Ok(b)
}

/// Integer solution `x` of `a x = b` for every column of `b`, or `None` when
/// some column has no integral solution.
pub fn solve_matrix(a: &IntMat, b: &IntMat) -> Result<Option<IntMat>> {
    assert_eq!(a.rows, b.rows);
    let snf = smith(a)?;
    let r = snf.rank();
    let c = snf.u.matmul(b)?;
    let mut y = IntMat::zeros(a.cols, b.cols);
    for j in 0..b.cols {
        for i in 0..a.rows {
            let ci = c.at(i, j);
            if i < r {
                let d = snf.d.at(i, i);
                if ci % d != 0 {
                    return Ok(None);
                }
                if i < a.cols {
                    y.set(i, j, ci / d);
                }
            } else if ci != 0 {
                return Ok(None);
            }
        }
    }
    Ok(Some(snf.v.matmul(&y)?))
}

/// Isomorphism class of a finitely generated abelian group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbGroup {
    /// Invariant factors `d_1 | d_2 | …`, each at least 2.
    pub torsion: Vec<u64>,
    /// Free rank.
    pub rank: usize,
}

impl AbGroup {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn free(rank: usize) -> AbGroup {
        AbGroup { torsion: Vec::new(), rank }
    }
}

impl std::fmt::Display for AbGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Invariants of `Z^ambient / colspan(relations)`.
pub fn quotient_invariants(ambient: usize, relations: &IntMat) -> Result<AbGroup> {
    assert_eq!(relations.rows, ambient);
    let snf = smith(relations)?;
    let diag = snf.diagonal();
    let torsion: Vec<u64> = diag.iter().filter(|&&d| d > 1).map(|&d| d as u64).collect();
    Ok(AbGroup { torsion, rank: ambient - diag.len() })
}

/// Homology `ker(boundary_out) / im(boundary_in)` of one spot in a complex
/// of free abelian groups; `boundary_out` maps the middle group outward and
/// `boundary_in` maps into it.
pub fn homology_invariants(boundary_out: &IntMat, boundary_in: &IntMat) -> Result<AbGroup> {
    assert_eq!(boundary_out.cols, boundary_in.rows);
    let k = kernel_basis(boundary_out)?;
    let coords = solve_matrix(&k, boundary_in)?
        .ok_or_else(|| Error::Domain("image does not lie in kernel: not a chain complex".into()))?;
    quotient_invariants(k.cols, &coords)
}

/// Full-rank basis of the lattice `{x in Z^cols : m x = 0 (mod modulus)}`.
pub fn kernel_mod_basis(m: &IntMat, modulus: u64) -> Result<IntMat> {
    assert!(modulus >= 1);
    let snf = smith(m)?;
    let r = snf.rank();
    let mm = modulus as i128;
    let mut k = IntMat::zeros(m.cols, m.cols);
    for j in 0..m.cols {
        let scale = if j < r { mm / gcd128(snf.d.at(j, j), mm) } else { 1 };
        for i in 0..m.cols {
            k.set(i, j, mul(snf.v.at(i, j), scale)?);
        }
    }
    Ok(k)
}

/// Homology of a complex of `Z/modulus`-modules obtained by reducing free
/// integer chain groups: `ker(out mod m) / im(in mod m)`.
pub fn homology_invariants_mod(
    boundary_out: &IntMat,
    boundary_in: &IntMat,
    modulus: u64,
) -> Result<AbGroup> {
    assert_eq!(boundary_out.cols, boundary_in.rows);
    let n = boundary_out.cols;
    let k = kernel_mod_basis(boundary_out, modulus)?;
    let mut scaled_id = IntMat::identity(n);
    for i in 0..n {
        scaled_id.set(i, i, modulus as i128);
    }
    let targets = boundary_in.hstack(&scaled_id);
    let coords = solve_matrix(&k, &targets)?
        .ok_or_else(|| Error::Domain("image does not lie in mod-m kernel".into()))?;
    quotient_invariants(n, &coords)
}

/// Rank of `m` over the prime field `F_p`.
pub fn rank_mod_prime(m: &IntMat, p: u64) -> usize {
    let mut a: Vec<Vec<i64>> = (0..m.rows)
        .map(|r| (0..m.cols).map(|c| (m.at(r, c).rem_euclid(p as i128)) as i64).collect())
        .collect();
    let p = p as i64;
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(pivot) = (rank..m.rows).find(|&r| a[r][col] % p != 0) else { continue };
        a.swap(rank, pivot);
        let inv = mod_inverse(a[rank][col], p);
        for c in col..m.cols {
            a[rank][c] = a[rank][c] * inv % p;
        }
        for r in 0..m.rows {
            if r != rank && a[r][col] % p != 0 {
                let f = a[r][col];
                for c in col..m.cols {
                    a[r][c] = (a[r][c] - f * a[rank][c]).rem_euclid(p);
                }
            }
        }
        rank += 1;
        if rank == m.rows {
            break;
        }
    }
    rank
}

/// Is `v` in the `F_p`-span of the columns of `basis`?
pub fn in_span_mod_prime(basis: &IntMat, v: &[i128], p: u64) -> bool {
    assert_eq!(basis.rows, v.len());
    let mut aug = IntMat::zeros(basis.rows, basis.cols + 1);
    for r in 0..basis.rows {
        for c in 0..basis.cols {
            aug.set(r, c, basis.at(r, c));
        }
        aug.set(r, basis.cols, v[r]);
    }
    rank_mod_prime(&aug, p) == rank_mod_prime(basis, p)
}

fn mod_inverse(a: i64, p: i64) -> i64 {
    // p prime; Fermat
    let mut result = 1i64;
    let mut base = a.rem_euclid(p);
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn minor_gcd_oracle(m: &IntMat) -> Vec<i128> {
        // d_k = gcd(k-minors) / gcd((k-1)-minors), exact for small matrices
        use itertools::Itertools;
        let n = m.rows.min(m.cols);
        let mut gcds = vec![1i128];
        for k in 1..=n {
            let mut g = 0i128;
            for rows in (0..m.rows).combinations(k) {
                for cols in (0..m.cols).combinations(k) {
                    g = gcd128(g, det_minor(m, &rows, &cols));
                }
            }
            gcds.push(g);
            if g == 0 {
                break;
            }
        }
        let mut out = Vec::new();
        for k in 1..gcds.len() {
            if gcds[k] == 0 {
                break;
            }
            out.push(gcds[k] / gcds[k - 1]);
        }
        out
    }

    fn det_minor(m: &IntMat, rows: &[usize], cols: &[usize]) -> i128 {
        let k = rows.len();
        if k == 1 {
            return m.at(rows[0], cols[0]);
        }
        let mut det = 0i128;
        let mut sign = 1i128;
        for (i, &r) in rows.iter().enumerate() {
            let sub_rows: Vec<usize> = rows.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
            det += sign * m.at(r, cols[0]) * det_minor(m, &sub_rows, &cols[1..]);
            sign = -sign;
        }
        det
    }

    fn check_snf(m: &IntMat) {
        let snf = smith(m).unwrap();
        let umv = snf.u.matmul(m).unwrap().matmul(&snf.v).unwrap();
        assert_eq!(umv, snf.d, "u*m*v != d");
        assert_eq!(snf.u.matmul(&snf.u_inv).unwrap(), IntMat::identity(m.rows));
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            assert_eq!(w[1] % w[0], 0, "divisibility chain broken: {diag:?}");
        }
        // off-diagonal zero
        for r in 0..snf.d.rows {
            for c in 0..snf.d.cols {
                if r != c {
                    assert_eq!(snf.d.at(r, c), 0);
                }
            }
        }
        assert_eq!(diag, minor_gcd_oracle(m), "diagonal disagrees with minor-gcd oracle");
    }

    #[test]
    fn snf_identity() {
        let snf = smith(&IntMat::identity(2)).unwrap();
        assert_eq!(snf.diagonal(), vec![1, 1]);
    }

    #[test]
    fn snf_frozen_example() {
        let m = IntMat::from_rows(vec![vec![2, 4], vec![6, 8]]);
        check_snf(&m);
        assert_eq!(smith(&m).unwrap().diagonal(), vec![2, 4]);
    }

    #[test]
    fn snf_zero_matrix() {
        let m = IntMat::zeros(3, 2);
        assert_eq!(smith(&m).unwrap().diagonal(), Vec::<i128>::new());
        let k = kernel_basis(&m).unwrap();
        assert_eq!(k.cols, 2);
    }

    #[test]
    fn kernel_and_solve() {
        let m = IntMat::from_rows(vec![vec![1, 2, 3], vec![2, 4, 6]]);
        let k = kernel_basis(&m).unwrap();
        assert_eq!(k.cols, 2);
        assert!(m.matmul(&k).unwrap().is_zero());
        let b = IntMat::from_rows(vec![vec![6], vec![12]]);
        let x = solve_matrix(&m, &b).unwrap().unwrap();
        assert_eq!(m.matmul(&x).unwrap(), b);
        let bad = IntMat::from_rows(vec![vec![1], vec![0]]);
        assert!(solve_matrix(&m, &bad).unwrap().is_none());
    }

    #[test]
    fn quotient_examples() {
        // Z^2 / <(2,0)> = Z + Z/2
        let rel = IntMat::from_rows(vec![vec![2], vec![0]]);
        let g = quotient_invariants(2, &rel).unwrap();
        assert_eq!(g, AbGroup { torsion: vec![2], rank: 1 });
        assert_eq!(g.to_string(), "Z + Z/2");
    }

    #[test]
    fn span_basis_spans() {
        let m = IntMat::from_rows(vec![vec![2, 4], vec![0, 0], vec![2, 0]]);
        let b = column_span_basis(&m).unwrap();
        // every original column solvable in the basis, basis columns solvable in m-span
        assert!(solve_matrix(&b, &m).unwrap().is_some());
    }

    #[test]
    fn mod_kernel_contains_scaled_lattice() {
        let m = IntMat::from_rows(vec![vec![2, 0], vec![0, 3]]);
        let k = kernel_mod_basis(&m, 6).unwrap();
        // (3, 0) and (0, 2) satisfy m x = 0 mod 6
        let t = IntMat::from_rows(vec![vec![3, 0], vec![0, 2]]);
        assert!(solve_matrix(&k, &t).unwrap().is_some());
        // (1, 0) does not: 2 != 0 mod 6
        let bad = IntMat::from_rows(vec![vec![1], vec![0]]);
        assert!(solve_matrix(&k, &bad).unwrap().is_none());
    }

    #[test]
    fn prime_rank() {
        let m = IntMat::from_rows(vec![vec![2, 1], vec![0, 3]]);
        assert_eq!(rank_mod_prime(&m, 2), 1);
        assert_eq!(rank_mod_prime(&m, 3), 1);
        assert_eq!(rank_mod_prime(&m, 5), 2);
    }

    proptest! {
        #[test]
        fn snf_agrees_with_minor_gcds(rows in 1usize..4, cols in 1usize..4,
                                      entries in proptest::collection::vec(-6i128..=6, 9)) {
            let m = IntMat {
                rows, cols,
                data: entries.into_iter().take(rows * cols).collect::<Vec<_>>(),
            };
            prop_assume!(m.data.len() == rows * cols);
            check_snf(&m);
        }
    }
}
