//! Free GL-rack words, diagram presentations, colorings, and enveloping
//! groups.
//!
//! Words are expression trees over generators with nodes `∗`, `∗⁻¹`, `u`,
//! `d`. `normal_form` rewrites a word into the left-associated shape
//! `u^k d^l ((x₁ ∗^{ε} x₂) ∗^{ε} …)` by pushing `u`/`d` outward, erasing
//! them in right operands, re-associating, and cancelling `ud(x ∗ x)`
//! pairs. This is a normalization, not a decision procedure for word
//! equality: evaluation into finite GL-racks is the refutation tool.

use crate::algebra::FiniteGLRack;
use crate::diagram::{trace, CuspTag, FrontDiagram};
use crate::snf::{quotient_invariants, AbGroup, IntMat};
use crate::{Error, Result};
use std::collections::HashMap;

// ---------------------------------------------------------------------------
// words in the free GL-rack
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GlWord {
    Gen(usize),
    U(Box<GlWord>),
    D(Box<GlWord>),
    Star { lhs: Box<GlWord>, rhs: Box<GlWord>, sign: i8 },
}

impl GlWord {
    pub fn gen(g: usize) -> GlWord {
        GlWord::Gen(g)
    }

    pub fn u(w: GlWord) -> GlWord {
        GlWord::U(Box::new(w))
    }

    pub fn d(w: GlWord) -> GlWord {
        GlWord::D(Box::new(w))
    }

    pub fn star(lhs: GlWord, rhs: GlWord) -> GlWord {
        GlWord::Star { lhs: Box::new(lhs), rhs: Box::new(rhs), sign: 1 }
    }

    pub fn star_inv(lhs: GlWord, rhs: GlWord) -> GlWord {
        GlWord::Star { lhs: Box::new(lhs), rhs: Box::new(rhs), sign: -1 }
    }
}

impl std::fmt::Display for GlWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GlWord::Gen(g) => write!(f, "x{g}"),
            GlWord::U(w) => write!(f, "u({w})"),
            GlWord::D(w) => write!(f, "d({w})"),
            GlWord::Star { lhs, rhs, sign } => {
                let op = if *sign >= 0 { "*" } else { "*^-1" };
                write!(f, "({lhs} {op} {rhs})")
            }
        }
    }
}

/// The left-associated view `u^k d^l (x₁ ∗^{ε₁} x₂ ∗^{ε₂} … ∗ x_r)`; the
/// sign attached to the first spine entry is ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub u_pow: i64,
    pub d_pow: i64,
    pub spine: Vec<(usize, i8)>,
}

impl NormalForm {
    pub fn as_word(&self) -> GlWord {
        let mut w = GlWord::gen(self.spine[0].0);
        for &(g, s) in &self.spine[1..] {
            w = GlWord::Star { lhs: Box::new(w), rhs: Box::new(GlWord::gen(g)), sign: s };
        }
        for _ in 0..self.d_pow {
            w = GlWord::d(w);
        }
        for _ in 0..self.u_pow {
            w = GlWord::u(w);
        }
        w
    }
}

/// `left ∗^{sign} (right spine)`, re-associating with the rack identity
/// `x ∗ (w ∗^{δ} z) = ((x ∗^{-δ} z) ∗ w) ∗^{δ} z`.
fn star_spine(mut acc: NormalForm, right: &[(usize, i8)], sign: i8) -> NormalForm {
    if right.len() == 1 {
        acc.spine.push((right[0].0, sign));
        return acc;
    }
    let (z, dz) = *right.last().expect("nonempty spine");
    acc.spine.push((z, -dz));
    acc = star_spine(acc, &right[..right.len() - 1], sign);
    acc.spine.push((z, dz));
    acc
}

/// Rewrites into the left-associated outer-`u^k d^l` shape.
pub fn normal_form(w: &GlWord) -> NormalForm {
    let mut nf = match w {
        GlWord::Gen(g) => NormalForm { u_pow: 0, d_pow: 0, spine: vec![(*g, 1)] },
        GlWord::U(inner) => {
            let mut nf = normal_form(inner);
            nf.u_pow += 1;
            nf
        }
        GlWord::D(inner) => {
            let mut nf = normal_form(inner);
            nf.d_pow += 1;
            nf
        }
        GlWord::Star { lhs, rhs, sign } => {
            let left = normal_form(lhs);
            // u/d powers of the right operand are erased by (L3)/(L3')
            let right = normal_form(rhs);
            star_spine(left, &right.spine, *sign)
        }
    };
    // ud(x ∗ x) → x, including under a tail: ud((x ∗ x) ∗ w) = (ud(x ∗ x)) ∗ w
    while nf.u_pow >= 1
        && nf.d_pow >= 1
        && nf.spine.len() >= 2
        && nf.spine[1] == (nf.spine[0].0, 1)
    {
        nf.u_pow -= 1;
        nf.d_pow -= 1;
        nf.spine.remove(1);
    }
    nf
}

/// Homomorphic evaluation in a finite GL-rack.
pub fn evaluate_word(
    w: &GlWord,
    rack: &FiniteGLRack,
    assignment: &HashMap<usize, usize>,
) -> Result<usize> {
    match w {
        GlWord::Gen(g) => assignment
            .get(g)
            .copied()
            .ok_or_else(|| Error::Domain(format!("generator x{g} is unassigned"))),
        GlWord::U(inner) => Ok(rack.u().apply(evaluate_word(inner, rack, assignment)?)),
        GlWord::D(inner) => Ok(rack.d().apply(evaluate_word(inner, rack, assignment)?)),
        GlWord::Star { lhs, rhs, sign } => {
            let a = evaluate_word(lhs, rack, assignment)?;
            let b = evaluate_word(rhs, rack, assignment)?;
            Ok(if *sign >= 0 { rack.op(a, b) } else { rack.op_inv(a, b) })
        }
    }
}

/// Evaluation of a normal form (handles negative structure powers).
pub fn evaluate_normal_form(
    nf: &NormalForm,
    rack: &FiniteGLRack,
    assignment: &HashMap<usize, usize>,
) -> Result<usize> {
    let lookup = |g: usize| {
        assignment
            .get(&g)
            .copied()
            .ok_or_else(|| Error::Domain(format!("generator x{g} is unassigned")))
    };
    let mut v = lookup(nf.spine[0].0)?;
    for &(g, s) in &nf.spine[1..] {
        let b = lookup(g)?;
        v = if s >= 0 { rack.op(v, b) } else { rack.op_inv(v, b) };
    }
    v = rack.d().pow(nf.d_pow).apply(v);
    v = rack.u().pow(nf.u_pow).apply(v);
    Ok(v)
}

// ---------------------------------------------------------------------------
// presentations of diagrams
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelKind {
    /// `z = x ∗^{sign} y` with x the orientation-incoming under segment.
    Crossing { event: usize, sign: i8 },
    /// `out = u(in)`.
    CuspUp { event: usize },
    /// `out = d(in)`.
    CuspDown { event: usize },
    /// The over-strand keeps its color across a crossing.
    OverPass { event: usize },
}

#[derive(Debug, Clone)]
pub struct Relation {
    pub lhs: GlWord,
    pub rhs: GlWord,
    pub kind: RelKind,
}

/// One generator per segment, a starred relation plus an over-pass
/// identification per crossing, and a `u`/`d` relation per cusp.
#[derive(Debug, Clone)]
pub struct GlPresentation {
    pub generators: usize,
    pub relations: Vec<Relation>,
}

pub fn gl_presentation(diagram: &FrontDiagram) -> GlPresentation {
    let map = trace(diagram);
    let mut relations = Vec::new();
    for c in &map.cusps {
        let (lhs, rhs, kind) = match c.tag {
            CuspTag::Up => (
                GlWord::gen(c.outgoing),
                GlWord::u(GlWord::gen(c.incoming)),
                RelKind::CuspUp { event: c.event },
            ),
            CuspTag::Down => (
                GlWord::gen(c.outgoing),
                GlWord::d(GlWord::gen(c.incoming)),
                RelKind::CuspDown { event: c.event },
            ),
        };
        relations.push(Relation { lhs, rhs, kind });
    }
    for x in &map.crossings {
        let under_rightward = map.segments[x.under_in].rightward;
        let (inc, out) = if under_rightward {
            (x.under_in, x.under_out)
        } else {
            (x.under_out, x.under_in)
        };
        relations.push(Relation {
            lhs: GlWord::gen(out),
            rhs: GlWord::Star {
                lhs: Box::new(GlWord::gen(inc)),
                rhs: Box::new(GlWord::gen(x.over_in)),
                sign: x.sign,
            },
            kind: RelKind::Crossing { event: x.event, sign: x.sign },
        });
        relations.push(Relation {
            lhs: GlWord::gen(x.over_out),
            rhs: GlWord::gen(x.over_in),
            kind: RelKind::OverPass { event: x.event },
        });
    }
    relations.sort_by_key(|r| match r.kind {
        RelKind::Crossing { event, .. }
        | RelKind::CuspUp { event }
        | RelKind::CuspDown { event }
        | RelKind::OverPass { event } => event,
    });
    GlPresentation { generators: map.segments.len(), relations }
}

// ---------------------------------------------------------------------------
// colorings
// ---------------------------------------------------------------------------

/// Per-event coloring actions, shared by the counting scan and the state
/// sum.
#[derive(Debug, Clone, Copy)]
pub(crate) enum ScanStep {
    /// Left cusp; `up` is its tag.
    Open { up: bool },
    /// Right cusp; `up` is its tag.
    Close { up: bool },
    Cross { sign: i8, under_rightward: bool },
}

pub(crate) fn scan_plan(diagram: &FrontDiagram) -> Vec<ScanStep> {
    let map = trace(diagram);
    let mut plan = vec![None; diagram.events().len()];
    for c in &map.cusps {
        let up = c.tag == CuspTag::Up;
        plan[c.event] = Some(match c.side {
            crate::diagram::CuspSide::Left => ScanStep::Open { up },
            crate::diagram::CuspSide::Right => ScanStep::Close { up },
        });
    }
    for x in &map.crossings {
        plan[x.event] = Some(ScanStep::Cross {
            sign: x.sign,
            under_rightward: map.segments[x.under_in].rightward,
        });
    }
    plan.into_iter().map(|s| s.expect("every event planned")).collect()
}

/// Upper-branch color at a left cusp from the lower-branch color.
pub(crate) fn open_upper(rack: &FiniteGLRack, lower: usize, up: bool) -> usize {
    if up {
        rack.u().apply(lower)
    } else {
        rack.d().inverse().apply(lower)
    }
}

/// Right-cusp consistency.
pub(crate) fn close_ok(rack: &FiniteGLRack, lower: usize, upper: usize, up: bool) -> bool {
    if up {
        upper == rack.u().apply(lower)
    } else {
        lower == rack.d().apply(upper)
    }
}

/// Scan-right under color at a crossing from the scan-left colors.
pub(crate) fn cross_out(
    rack: &FiniteGLRack,
    under_left: usize,
    over: usize,
    sign: i8,
    under_rightward: bool,
) -> usize {
    let s = if under_rightward { sign } else { -sign };
    if s >= 0 {
        rack.op(under_left, over)
    } else {
        rack.op_inv(under_left, over)
    }
}

/// Number of colorings of the diagram by the GL-rack. Left cusps branch
/// over the rack, crossings propagate, right cusps filter; states with
/// equal active-color vectors are merged, so the cost is bounded by the
/// diagram width rather than the number of left cusps.
pub fn count_colorings(diagram: &FrontDiagram, rack: &FiniteGLRack) -> u64 {
    let plan = scan_plan(diagram);
    let n = rack.order();
    let mut states: HashMap<Vec<u8>, u64> = HashMap::new();
    states.insert(Vec::new(), 1);
    for (idx, step) in plan.iter().enumerate() {
        let i = diagram.events()[idx].level - 1;
        let mut next: HashMap<Vec<u8>, u64> = HashMap::with_capacity(states.len());
        match *step {
            ScanStep::Open { up } => {
                for (vec, cnt) in &states {
                    for c in 0..n {
                        let mut v = vec.clone();
                        v.insert(i, c as u8);
                        v.insert(i + 1, open_upper(rack, c, up) as u8);
                        *next.entry(v).or_insert(0) += cnt;
                    }
                }
            }
            ScanStep::Close { up } => {
                for (vec, cnt) in &states {
                    if close_ok(rack, vec[i] as usize, vec[i + 1] as usize, up) {
                        let mut v = vec.clone();
                        v.drain(i..i + 2);
                        *next.entry(v).or_insert(0) += cnt;
                    }
                }
            }
            ScanStep::Cross { sign, under_rightward } => {
                for (vec, cnt) in &states {
                    let a = vec[i] as usize;
                    let y = vec[i + 1] as usize;
                    let mut v = vec.clone();
                    v[i] = y as u8;
                    v[i + 1] = cross_out(rack, a, y, sign, under_rightward) as u8;
                    *next.entry(v).or_insert(0) += cnt;
                }
            }
        }
        states = next;
    }
    states.get(&Vec::new()).copied().unwrap_or(0)
}

/// All colorings as full segment-color assignments, by enumerating one
/// seed per left cusp and propagating. Errors out when the seed space
/// exceeds `cap`.
pub fn colorings_listed(
    diagram: &FrontDiagram,
    rack: &FiniteGLRack,
    cap: usize,
) -> Result<Vec<Vec<usize>>> {
    let map = trace(diagram);
    let n = rack.order();
    let left_cusps =
        map.cusps.iter().filter(|c| c.side == crate::diagram::CuspSide::Left).count();
    let mut total: usize = 1;
    for _ in 0..left_cusps {
        total = total
            .checked_mul(n)
            .filter(|&t| t <= cap)
            .ok_or_else(|| Error::Cap(format!("coloring seed space exceeds cap {cap}")))?;
    }
    let events = diagram.events();
    let mut cusp_at: Vec<Option<&crate::diagram::Cusp>> = vec![None; events.len()];
    for c in &map.cusps {
        cusp_at[c.event] = Some(c);
    }
    let mut crossing_at: Vec<Option<&crate::diagram::Crossing>> = vec![None; events.len()];
    for x in &map.crossings {
        crossing_at[x.event] = Some(x);
    }
    let mut out = Vec::new();
    for seed in 0..total {
        let mut digits = seed;
        let mut colors: Vec<usize> = vec![usize::MAX; map.segments.len()];
        let mut ok = true;
        for event in 0..events.len() {
            if let Some(c) = cusp_at[event] {
                match c.side {
                    crate::diagram::CuspSide::Left => {
                        let lower = digits % n;
                        digits /= n;
                        colors[c.lower] = lower;
                        colors[c.upper] = open_upper(rack, lower, c.tag == CuspTag::Up);
                    }
                    crate::diagram::CuspSide::Right => {
                        if !close_ok(rack, colors[c.lower], colors[c.upper], c.tag == CuspTag::Up)
                        {
                            ok = false;
                            break;
                        }
                    }
                }
            } else {
                let x = crossing_at[event].expect("crossing event");
                colors[x.over_out] = colors[x.over_in];
                colors[x.under_out] = cross_out(
                    rack,
                    colors[x.under_in],
                    colors[x.over_in],
                    x.sign,
                    map.segments[x.under_in].rightward,
                );
            }
        }
        if ok {
            out.push(colors);
        }
    }
    Ok(out)
}

/// Componentwise coloring counts against a list of racks: equal profiles
/// are a necessary condition for Legendrian equivalence.
pub fn coloring_profile(diagram: &FrontDiagram, racks: &[FiniteGLRack]) -> Vec<u64> {
    racks.iter().map(|r| count_colorings(diagram, r)).collect()
}

// ---------------------------------------------------------------------------
// underlying topological diagram
// ---------------------------------------------------------------------------

/// Quandle presentation with `u`, `d` erased: cusp and over-pass relations
/// become generator identifications, crossings keep their starred shape.
#[derive(Debug, Clone)]
pub struct QuandlePresentation {
    /// Number of arc classes.
    pub generators: usize,
    /// Segment → arc class.
    pub class_of: Vec<usize>,
    /// `(x, sign, y, z)` meaning `z = x ∗^{sign} y` on classes.
    pub relations: Vec<(usize, i8, usize, usize)>,
}

fn uf_find(parent: &mut Vec<usize>, x: usize) -> usize {
    if parent[x] != x {
        let r = uf_find(parent, parent[x]);
        parent[x] = r;
    }
    parent[x]
}

pub fn underlying_quandle_presentation(p: &GlPresentation) -> QuandlePresentation {
    let mut parent: Vec<usize> = (0..p.generators).collect();
    let gen_of = |w: &GlWord| -> usize {
        match w {
            GlWord::Gen(g) => *g,
            GlWord::U(inner) | GlWord::D(inner) => match inner.as_ref() {
                GlWord::Gen(g) => *g,
                _ => unreachable!("cusp relations are generator-to-generator"),
            },
            _ => unreachable!("identification expected"),
        }
    };
    for rel in &p.relations {
        match rel.kind {
            RelKind::CuspUp { .. } | RelKind::CuspDown { .. } | RelKind::OverPass { .. } => {
                let a = uf_find(&mut parent, gen_of(&rel.lhs));
                let b = uf_find(&mut parent, gen_of(&rel.rhs));
                let (lo, hi) = (a.min(b), a.max(b));
                parent[hi] = lo;
            }
            RelKind::Crossing { .. } => {}
        }
    }
    let mut class_index: HashMap<usize, usize> = HashMap::new();
    let mut class_of = vec![0; p.generators];
    for g in 0..p.generators {
        let root = uf_find(&mut parent, g);
        let next = class_index.len();
        class_of[g] = *class_index.entry(root).or_insert(next);
    }
    let mut relations = Vec::new();
    for rel in &p.relations {
        if let RelKind::Crossing { sign, .. } = rel.kind {
            let GlWord::Star { lhs, rhs, .. } = &rel.rhs else { unreachable!() };
            let (GlWord::Gen(x), GlWord::Gen(y), GlWord::Gen(z)) =
                (lhs.as_ref(), rhs.as_ref(), &rel.lhs)
            else {
                unreachable!()
            };
            relations.push((class_of[*x], sign, class_of[*y], class_of[*z]));
        }
    }
    QuandlePresentation { generators: class_index.len(), class_of, relations }
}

// ---------------------------------------------------------------------------
// enveloping groups
// ---------------------------------------------------------------------------

/// A group presentation: relators are words `(generator, ±1)*`, kept
/// freely reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: usize,
    pub relators: Vec<Vec<(usize, i32)>>,
}

fn free_reduce(word: &[(usize, i32)]) -> Vec<(usize, i32)> {
    let mut out: Vec<(usize, i32)> = Vec::with_capacity(word.len());
    for &(g, e) in word {
        if e == 0 {
            continue;
        }
        if let Some(&(h, f)) = out.last() {
            if h == g && f == -e {
                out.pop();
                continue;
            }
        }
        out.push((g, e));
    }
    out
}

impl GroupPresentation {
    fn push_relator(&mut self, word: Vec<(usize, i32)>) {
        let reduced = free_reduce(&word);
        if !reduced.is_empty() {
            self.relators.push(reduced);
        }
    }

    /// No relators survive: free of rank `generators`.
    pub fn is_free(&self) -> bool {
        self.relators.is_empty()
    }
}

/// Enveloping group of a finite GL-rack: one generator per element,
/// conjugation relators `e_y⁻¹ e_x e_y e_{x∗y}⁻¹`, and identifications
/// along `u` and `d`.
pub fn env_of_gl_rack(r: &FiniteGLRack) -> GroupPresentation {
    let n = r.order();
    let mut p = GroupPresentation { generators: n, relators: Vec::new() };
    for x in 0..n {
        for y in 0..n {
            p.push_relator(vec![(y, -1), (x, 1), (y, 1), (r.op(x, y), -1)]);
        }
        p.push_relator(vec![(r.u().apply(x), 1), (x, -1)]);
        p.push_relator(vec![(r.d().apply(x), 1), (x, -1)]);
    }
    p
}

/// Enveloping group of a diagram presentation: crossing relations become
/// conjugation relators, cusp and over-pass relations become
/// identifications.
pub fn env_of_presentation(p: &GlPresentation) -> GroupPresentation {
    let mut out = GroupPresentation { generators: p.generators, relators: Vec::new() };
    for rel in &p.relations {
        match rel.kind {
            RelKind::Crossing { sign, .. } => {
                let GlWord::Star { lhs, rhs, .. } = &rel.rhs else { unreachable!() };
                let (GlWord::Gen(x), GlWord::Gen(y), GlWord::Gen(z)) =
                    (lhs.as_ref(), rhs.as_ref(), &rel.lhs)
                else {
                    unreachable!()
                };
                let e = sign as i32;
                out.push_relator(vec![(*y, -e), (*x, 1), (*y, e), (*z, -1)]);
            }
            RelKind::CuspUp { .. } | RelKind::CuspDown { .. } | RelKind::OverPass { .. } => {
                let a = match &rel.lhs {
                    GlWord::Gen(g) => *g,
                    _ => unreachable!(),
                };
                let b = match &rel.rhs {
                    GlWord::Gen(g) => *g,
                    GlWord::U(inner) | GlWord::D(inner) => match inner.as_ref() {
                        GlWord::Gen(g) => *g,
                        _ => unreachable!(),
                    },
                    _ => unreachable!(),
                };
                out.push_relator(vec![(a, 1), (b, -1)]);
            }
        }
    }
    out
}

/// Eliminates identification relators (words that reduce to `g h⁻¹`) by
/// union-find, rewrites the remaining relators through class
/// representatives, and repeats to a fixpoint. The group is unchanged up to
/// isomorphism.
pub fn collapse_ud(p: &GroupPresentation) -> GroupPresentation {
    let mut parent: Vec<usize> = (0..p.generators).collect();
    let mut relators: Vec<Vec<(usize, i32)>> = p.relators.clone();
    loop {
        let mut merged = false;
        let mut kept = Vec::new();
        for rel in relators {
            let rewritten: Vec<(usize, i32)> =
                rel.iter().map(|&(g, e)| (uf_find(&mut parent, g), e)).collect();
            let reduced = free_reduce(&rewritten);
            match reduced.as_slice() {
                [] => {}
                [(a, ea), (b, eb)] if a != b && ea + eb == 0 && ea.abs() == 1 => {
                    let ra = uf_find(&mut parent, *a);
                    let rb = uf_find(&mut parent, *b);
                    parent[ra.max(rb)] = ra.min(rb);
                    merged = true;
                }
                _ => kept.push(reduced),
            }
        }
        relators = kept;
        if !merged {
            break;
        }
    }
    let mut class_index: HashMap<usize, usize> = HashMap::new();
    for g in 0..p.generators {
        let root = uf_find(&mut parent, g);
        let next = class_index.len();
        class_index.entry(root).or_insert(next);
    }
    let mut out = GroupPresentation { generators: class_index.len(), relators: Vec::new() };
    for rel in relators {
        let rewritten: Vec<(usize, i32)> =
            rel.iter().map(|&(g, e)| (class_index[&uf_find(&mut parent, g)], e)).collect();
        out.push_relator(rewritten);
    }
    out
}

/// Invariant factors and free rank of the abelianization, by Smith normal
/// form of the relator exponent matrix.
pub fn abelianization(p: &GroupPresentation) -> Result<AbGroup> {
    let mut m = IntMat::zeros(p.generators, p.relators.len());
    for (j, rel) in p.relators.iter().enumerate() {
        for &(g, e) in rel {
            m.set(g, j, m.at(g, j) + e as i128);
        }
    }
    quotient_invariants(p.generators, &m)
}
