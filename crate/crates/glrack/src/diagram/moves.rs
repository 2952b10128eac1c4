//! Legendrian Reidemeister moves as event-word rewrites.
//!
//! Every move rewrites a short window of the word. LR1 inserts or deletes a
//! kink (cusp pair plus one crossing), the LR2 family slides a cusp through
//! a neighboring strand (one cusp event ↔ two crossings and a shifted
//! cusp), LR3 is the braid relation on adjacent crossings, and far
//! commutation swaps adjacent events whose strand supports are disjoint,
//! adjusting levels by ±2 when commuting across a cusp.
//!
//! Orientation signs name components by discovery order, which a rewrite
//! can permute, so `apply_move` re-anchors each component's sign at a cusp
//! event outside the rewritten window.

use super::{trace, Event, EventKind, FrontDiagram};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveKind {
    /// Kink `L(i+1) X(i) R(i+1)` on a strand at level i.
    Lr1a,
    /// Kink `L(i) X(i+1) R(i)` on a strand at level i.
    Lr1b,
    /// `R(i) ↔ X(i+1) X(i) R(i+1)`: a strand above the right cusp passes
    /// over it.
    Lr2RightOver,
    /// `R(i) ↔ X(i-1) X(i) R(i-1)`: a strand below the right cusp passes
    /// under it.
    Lr2RightUnder,
    /// `L(i) ↔ L(i-1) X(i) X(i-1)`: a strand below the left cusp passes
    /// over its branches.
    Lr2LeftOver,
    /// `L(i) ↔ L(i+1) X(i) X(i+1)`: a strand at the cusp's level passes
    /// under its branches.
    Lr2LeftUnder,
    /// Braid relation `X(i) X(i+1) X(i) ↔ X(i+1) X(i) X(i+1)`.
    Lr3,
    /// Swap two adjacent events with disjoint supports.
    FarCommute,
}

/// One move application site. For LR1 with `insert`, `pos` is a word gap
/// and `level` the strand the kink is hung on; otherwise `pos` is the index
/// of the first rewritten event and `level` the parameter `i` of the
/// pattern. LR3 and FarCommute ignore `insert` (they are self-inverse).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MoveInstance {
    pub kind: MoveKind,
    pub pos: usize,
    pub level: usize,
    pub insert: bool,
}

impl MoveInstance {
    /// The move undoing this one at the same site.
    pub fn inverted(&self) -> MoveInstance {
        MoveInstance { insert: !self.insert, ..*self }
    }
}

/// LR2 windows: (single contracted event, expanded triple) per kind.
fn lr2_forms(kind: MoveKind, i: usize) -> Option<(Event, [Event; 3])> {
    let some = |e, t| Some((e, t));
    match kind {
        MoveKind::Lr2RightOver => some(
            Event::right(i),
            [Event::crossing(i + 1), Event::crossing(i), Event::right(i + 1)],
        ),
        MoveKind::Lr2RightUnder => {
            if i < 2 {
                return None;
            }
            some(Event::right(i), [Event::crossing(i - 1), Event::crossing(i), Event::right(i - 1)])
        }
        MoveKind::Lr2LeftOver => {
            if i < 2 {
                return None;
            }
            some(Event::left(i), [Event::left(i - 1), Event::crossing(i), Event::crossing(i - 1)])
        }
        MoveKind::Lr2LeftUnder => some(
            Event::left(i),
            [Event::left(i + 1), Event::crossing(i), Event::crossing(i + 1)],
        ),
        _ => None,
    }
}

fn lr1_triple(kind: MoveKind, i: usize) -> [Event; 3] {
    match kind {
        MoveKind::Lr1a => [Event::left(i + 1), Event::crossing(i), Event::right(i + 1)],
        MoveKind::Lr1b => [Event::left(i), Event::crossing(i + 1), Event::right(i)],
        _ => unreachable!("lr1_triple on non-LR1 kind"),
    }
}

/// Far commutation of the adjacent pair `(a, b)` (b's level is read in the
/// frame after a). Returns the swapped pair or `None` when the supports
/// interact.
fn commute_pair(a: Event, b: Event) -> Option<(Event, Event)> {
    use EventKind::*;
    let (ka, i) = (a.kind, a.level);
    let (kb, j) = (b.kind, b.level);
    let ev = |k, l| Event { kind: k, level: l };
    match (ka, kb) {
        (LeftCusp, LeftCusp) => {
            if j <= i {
                Some((ev(LeftCusp, j), ev(LeftCusp, i + 2)))
            } else if j >= i + 2 {
                Some((ev(LeftCusp, j - 2), ev(LeftCusp, i)))
            } else {
                None
            }
        }
        (LeftCusp, Crossing) => {
            if j + 1 < i {
                Some((ev(Crossing, j), ev(LeftCusp, i)))
            } else if j >= i + 2 {
                Some((ev(Crossing, j - 2), ev(LeftCusp, i)))
            } else {
                None
            }
        }
        (LeftCusp, RightCusp) => {
            if j + 1 < i {
                Some((ev(RightCusp, j), ev(LeftCusp, i - 2)))
            } else if j >= i + 2 {
                Some((ev(RightCusp, j - 2), ev(LeftCusp, i)))
            } else {
                None
            }
        }
        (Crossing, LeftCusp) => {
            if j <= i {
                Some((ev(LeftCusp, j), ev(Crossing, i + 2)))
            } else if j >= i + 2 {
                Some((ev(LeftCusp, j), ev(Crossing, i)))
            } else {
                None
            }
        }
        (Crossing, Crossing) => {
            if j + 1 < i || j > i + 1 {
                Some((ev(Crossing, j), ev(Crossing, i)))
            } else {
                None
            }
        }
        (Crossing, RightCusp) => {
            if j + 1 < i {
                Some((ev(RightCusp, j), ev(Crossing, i - 2)))
            } else if j >= i + 2 {
                Some((ev(RightCusp, j), ev(Crossing, i)))
            } else {
                None
            }
        }
        (RightCusp, LeftCusp) => {
            if j < i {
                Some((ev(LeftCusp, j), ev(RightCusp, i + 2)))
            } else {
                Some((ev(LeftCusp, j + 2), ev(RightCusp, i)))
            }
        }
        (RightCusp, Crossing) => {
            if j + 1 < i {
                Some((ev(Crossing, j), ev(RightCusp, i)))
            } else if j >= i {
                Some((ev(Crossing, j + 2), ev(RightCusp, i)))
            } else {
                None
            }
        }
        (RightCusp, RightCusp) => {
            if j + 1 < i {
                Some((ev(RightCusp, j), ev(RightCusp, i - 2)))
            } else if j >= i {
                Some((ev(RightCusp, j + 2), ev(RightCusp, i)))
            } else {
                None
            }
        }
    }
}

/// Rewrites the event word only; orientation handling lives in
/// `apply_move`. Returns the new word and the rewritten window's widths
/// (old, new).
fn rewrite_word(
    events: &[Event],
    m: &MoveInstance,
) -> Result<(Vec<Event>, usize, usize)> {
    let fail = |msg: String| Err(Error::Domain(format!("move not applicable: {msg}")));
    let mut out = events.to_vec();
    match m.kind {
        MoveKind::Lr1a | MoveKind::Lr1b => {
            let triple = lr1_triple(m.kind, m.level);
            if m.insert {
                if m.pos > events.len() {
                    return fail(format!("gap {} out of range", m.pos));
                }
                out.splice(m.pos..m.pos, triple);
                Ok((out, 0, 3))
            } else {
                if m.pos + 3 > events.len() || events[m.pos..m.pos + 3] != triple {
                    return fail(format!("no {:?} kink at {}", m.kind, m.pos));
                }
                out.splice(m.pos..m.pos + 3, []);
                Ok((out, 3, 0))
            }
        }
        MoveKind::Lr2RightOver
        | MoveKind::Lr2RightUnder
        | MoveKind::Lr2LeftOver
        | MoveKind::Lr2LeftUnder => {
            let Some((single, triple)) = lr2_forms(m.kind, m.level) else {
                return fail(format!("{:?} undefined at level {}", m.kind, m.level));
            };
            if m.insert {
                if m.pos >= events.len() || events[m.pos] != single {
                    return fail(format!("expected {single} at {}", m.pos));
                }
                out.splice(m.pos..m.pos + 1, triple);
                Ok((out, 1, 3))
            } else {
                if m.pos + 3 > events.len() || events[m.pos..m.pos + 3] != triple {
                    return fail(format!("no {:?} window at {}", m.kind, m.pos));
                }
                out.splice(m.pos..m.pos + 3, [single]);
                Ok((out, 3, 1))
            }
        }
        MoveKind::Lr3 => {
            let i = m.level;
            let a = [Event::crossing(i), Event::crossing(i + 1), Event::crossing(i)];
            let b = [Event::crossing(i + 1), Event::crossing(i), Event::crossing(i + 1)];
            if m.pos + 3 > events.len() {
                return fail(format!("no braid window at {}", m.pos));
            }
            let window = &events[m.pos..m.pos + 3];
            let replacement = if window == a {
                b
            } else if window == b {
                a
            } else {
                return fail(format!("no braid pattern at level {i}, position {}", m.pos));
            };
            out[m.pos..m.pos + 3].copy_from_slice(&replacement);
            Ok((out, 3, 3))
        }
        MoveKind::FarCommute => {
            if m.pos + 2 > events.len() {
                return fail(format!("no adjacent pair at {}", m.pos));
            }
            let Some((b2, a2)) = commute_pair(events[m.pos], events[m.pos + 1]) else {
                return fail(format!(
                    "events {} and {} do not commute",
                    events[m.pos],
                    events[m.pos + 1]
                ));
            };
            out[m.pos] = b2;
            out[m.pos + 1] = a2;
            Ok((out, 2, 2))
        }
    }
}

/// Re-derives the orientation vector of `new_events` so that every
/// component keeps the orientation it had in `old`. Components are anchored
/// at cusp events outside the rewritten window `[pos, pos+old_w)`.
fn transport_orientations(
    old: &FrontDiagram,
    new_events: &[Event],
    pos: usize,
    old_w: usize,
    new_w: usize,
) -> Result<Vec<bool>> {
    let old_map = trace(old);
    let plus = FrontDiagram::new(new_events.to_vec(), None)?;
    let new_map = trace(&plus);
    if new_map.components != old_map.components {
        return Err(Error::Domain("move changed the component count".into()));
    }
    let mut signs = vec![None; new_map.components];
    for cusp in &old_map.cusps {
        if cusp.event >= pos && cusp.event < pos + old_w {
            continue;
        }
        let new_event = if cusp.event < pos { cusp.event } else { cusp.event - old_w + new_w };
        let new_cusp = new_map
            .cusps
            .iter()
            .find(|c| c.event == new_event)
            .ok_or_else(|| Error::Domain("cusp anchor lost across the move".into()))?;
        let new_comp = new_map.segments[new_cusp.lower].component;
        // flipping a component's orientation swaps incoming/outgoing at each
        // of its cusps, so agreement of "incoming == lower" between the old
        // actual traversal and the new all-plus trace pins the new sign
        let sign = (cusp.incoming == cusp.lower) == (new_cusp.incoming == new_cusp.lower);
        if let Some(prev) = signs[new_comp] {
            if prev != sign {
                return Err(Error::Domain("inconsistent orientation transport".into()));
            }
        }
        signs[new_comp] = Some(sign);
    }
    signs
        .into_iter()
        .collect::<Option<Vec<bool>>>()
        .ok_or_else(|| Error::Domain("a component has no cusp anchor outside the move".into()))
}

/// Applies one catalogued move; the result is a valid diagram with the same
/// components carrying the same orientations.
pub fn apply_move(diagram: &FrontDiagram, m: &MoveInstance) -> Result<FrontDiagram> {
    let (events, old_w, new_w) = rewrite_word(diagram.events(), m)?;
    super::validate_scan(&events)
        .map_err(|e| Error::Domain(format!("move not applicable: {e}")))?;
    let orientations = transport_orientations(diagram, &events, m.pos, old_w, new_w)?;
    FrontDiagram::new(events, Some(orientations))
}

/// Every applicable move at every site, in a deterministic order.
pub fn applicable_moves(diagram: &FrontDiagram) -> Vec<MoveInstance> {
    let events = diagram.events();
    let mut out = Vec::new();
    // kink insertions: every gap, every strand level
    for pos in 0..=events.len() {
        let k = diagram.strands_at_gap(pos);
        for level in 1..=k {
            for kind in [MoveKind::Lr1a, MoveKind::Lr1b] {
                out.push(MoveInstance { kind, pos, level, insert: true });
            }
        }
    }
    // pattern-matched rewrites
    for pos in 0..events.len() {
        for kind in [MoveKind::Lr1a, MoveKind::Lr1b] {
            if events[pos].kind == EventKind::LeftCusp {
                let level = match kind {
                    MoveKind::Lr1a => events[pos].level.saturating_sub(1),
                    _ => events[pos].level,
                };
                if level >= 1 {
                    let m = MoveInstance { kind, pos, level, insert: false };
                    if pos + 3 <= events.len() && events[pos..pos + 3] == lr1_triple(kind, level) {
                        out.push(m);
                    }
                }
            }
        }
        for kind in [
            MoveKind::Lr2RightOver,
            MoveKind::Lr2RightUnder,
            MoveKind::Lr2LeftOver,
            MoveKind::Lr2LeftUnder,
        ] {
            let level = events[pos].level;
            if let Some((single, _)) = lr2_forms(kind, level) {
                if events[pos] == single {
                    // expansion also needs the passive strand to exist
                    let k = diagram.strands_at_gap(pos);
                    let needed = match kind {
                        MoveKind::Lr2RightOver => level + 2,
                        MoveKind::Lr2RightUnder => level + 1,
                        MoveKind::Lr2LeftOver => level - 1,
                        MoveKind::Lr2LeftUnder => level,
                        _ => unreachable!(),
                    };
                    if k >= needed {
                        out.push(MoveInstance { kind, pos, level, insert: true });
                    }
                }
            }
            // contraction: the window starts with the triple's first event
            for i in 1..=level + 2 {
                if let Some((_, triple)) = lr2_forms(kind, i) {
                    if pos + 3 <= events.len() && events[pos..pos + 3] == triple {
                        out.push(MoveInstance { kind, pos, level: i, insert: false });
                    }
                }
            }
        }
        if events[pos].kind == EventKind::Crossing {
            let i = events[pos].level;
            for level in [i, i.saturating_sub(1)] {
                if level >= 1 {
                    let m = MoveInstance { kind: MoveKind::Lr3, pos, level, insert: true };
                    if rewrite_word(events, &m).is_ok() {
                        out.push(m);
                    }
                }
            }
        }
        if pos + 2 <= events.len() && commute_pair(events[pos], events[pos + 1]).is_some() {
            out.push(MoveInstance { kind: MoveKind::FarCommute, pos, level: 0, insert: true });
        }
    }
    out.sort_by_key(|m| (m.pos, m.kind as usize, m.level, m.insert));
    out.dedup();
    // scan validity of the rewritten word decides applicability; every
    // component keeps a cusp anchor outside the window, so orientation
    // transport cannot fail on a scan-valid rewrite
    out.retain(|m| {
        rewrite_word(diagram.events(), m)
            .map(|(events, _, _)| super::validate_scan(&events).is_ok())
            .unwrap_or(false)
    });
    out
}

/// Event-count threshold beyond which the random walk stops drawing
/// growing moves.
const GROWTH_GUARD: usize = 48;

/// Applies `count` pseudo-random catalogued moves, deterministically in the
/// seed. Growth is kept in check by preferring non-expanding moves once the
/// word gets long.
pub fn random_moves(diagram: &FrontDiagram, count: usize, seed: u64) -> FrontDiagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = diagram.clone();
    for _ in 0..count {
        let mut moves = applicable_moves(&d);
        if d.events().len() > GROWTH_GUARD {
            let shrinking: Vec<MoveInstance> = moves
                .iter()
                .copied()
                .filter(|m| match m.kind {
                    MoveKind::Lr1a | MoveKind::Lr1b => !m.insert,
                    MoveKind::Lr2RightOver
                    | MoveKind::Lr2RightUnder
                    | MoveKind::Lr2LeftOver
                    | MoveKind::Lr2LeftUnder => !m.insert,
                    MoveKind::Lr3 | MoveKind::FarCommute => true,
                })
                .collect();
            if !shrinking.is_empty() {
                moves = shrinking;
            }
        }
        if moves.is_empty() {
            break;
        }
        let pick = rng.gen_range(0..moves.len());
        d = apply_move(&d, &moves[pick]).expect("enumerated moves apply");
    }
    d
}
