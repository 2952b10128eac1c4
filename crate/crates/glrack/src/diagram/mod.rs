//! Front diagrams of oriented Legendrian links as Morse event words.
//!
//! A diagram is a left-to-right word of events at integer levels
//! (1 = bottom): `L(i)` opens a left cusp at levels `i, i+1`, `R(i)` closes
//! a right cusp at levels `i, i+1`, and `X(i)` crosses the strands at
//! levels `i` and `i+1`. At a crossing the strand descending from level
//! `i+1` to level `i` has the lower slope and is therefore the over-strand,
//! so the word carries no over/under data.
//!
//! Orientation is one sign per component in discovery order; `+` directs
//! the component's first-discovered segment rightward.

pub mod moves;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    LeftCusp,
    RightCusp,
    Crossing,
}

/// One Morse event at a 1-based level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Event {
    pub kind: EventKind,
    pub level: usize,
}

impl Event {
    pub fn left(level: usize) -> Event {
        Event { kind: EventKind::LeftCusp, level }
    }

    pub fn right(level: usize) -> Event {
        Event { kind: EventKind::RightCusp, level }
    }

    pub fn crossing(level: usize) -> Event {
        Event { kind: EventKind::Crossing, level }
    }
}

impl std::fmt::Display for Event {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let c = match self.kind {
            EventKind::LeftCusp => 'L',
            EventKind::RightCusp => 'R',
            EventKind::Crossing => 'X',
        };
        write!(f, "{c}{}", self.level)
    }
}

/// An oriented front diagram: a scan-valid event word plus one sign per
/// component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontDiagram {
    events: Vec<Event>,
    /// `true` = `+`: first-discovered segment of the component is rightward.
    orientations: Vec<bool>,
}

/// Checks the scanning rule; errors name the offending event index.
fn validate_scan(events: &[Event]) -> Result<()> {
    let mut k = 0usize;
    for (idx, e) in events.iter().enumerate() {
        match e.kind {
            EventKind::LeftCusp => {
                if e.level == 0 || e.level > k + 1 {
                    return Err(Error::Format(format!(
                        "event {idx} ({e}): left cusp level must be in 1..={}",
                        k + 1
                    )));
                }
                k += 2;
            }
            EventKind::Crossing => {
                if e.level == 0 || k < 2 || e.level > k - 1 {
                    return Err(Error::Format(format!(
                        "event {idx} ({e}): crossing level must be in 1..={}",
                        k.saturating_sub(1)
                    )));
                }
            }
            EventKind::RightCusp => {
                if e.level == 0 || k < 2 || e.level > k - 1 {
                    return Err(Error::Format(format!(
                        "event {idx} ({e}): right cusp level must be in 1..={}",
                        k.saturating_sub(1)
                    )));
                }
                k -= 2;
            }
        }
    }
    if k != 0 {
        return Err(Error::Format(format!("{k} strands left open at the end of the word")));
    }
    Ok(())
}

impl FrontDiagram {
    /// Builds a diagram; `orientations = None` defaults to all `+`.
    pub fn new(events: Vec<Event>, orientations: Option<Vec<bool>>) -> Result<FrontDiagram> {
        validate_scan(&events)?;
        let components = count_components(&events);
        let orientations = match orientations {
            None => vec![true; components],
            Some(o) => {
                if o.len() != components {
                    return Err(Error::Format(format!(
                        "{} orientation signs for {components} components",
                        o.len()
                    )));
                }
                o
            }
        };
        Ok(FrontDiagram { events, orientations })
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn orientations(&self) -> &[bool] {
        &self.orientations
    }

    pub fn components(&self) -> usize {
        self.orientations.len()
    }

    /// Maximum number of simultaneously active strands.
    pub fn width(&self) -> usize {
        let mut k = 0usize;
        let mut w = 0;
        for e in &self.events {
            match e.kind {
                EventKind::LeftCusp => k += 2,
                EventKind::RightCusp => k -= 2,
                EventKind::Crossing => {}
            }
            w = w.max(k);
        }
        w
    }

    /// Active strand count in the gap before event `pos` (so `pos == len`
    /// is the final gap).
    pub fn strands_at_gap(&self, pos: usize) -> usize {
        let mut k = 0usize;
        for e in &self.events[..pos] {
            match e.kind {
                EventKind::LeftCusp => k += 2,
                EventKind::RightCusp => k -= 2,
                EventKind::Crossing => {}
            }
        }
        k
    }
}

impl std::fmt::Display for FrontDiagram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let words: Vec<String> = self.events.iter().map(|e| e.to_string()).collect();
        writeln!(f, "front: {}", words.join(" "))?;
        let signs: Vec<&str> =
            self.orientations.iter().map(|&o| if o { "+" } else { "-" }).collect();
        write!(f, "orient: {}", signs.join(" "))
    }
}

/// Parses the diagram text format: comment lines with `#`, a `front:` line
/// of `[LRX]<level>` events, and an optional `orient:` line of `+`/`-`.
pub fn parse_diagram(text: &str) -> Result<FrontDiagram> {
    let mut events: Option<Vec<Event>> = None;
    let mut orient: Option<Vec<bool>> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let ln = lineno + 1;
        let line = match raw.find('#') {
            Some(p) => raw[..p].trim(),
            None => raw.trim(),
        };
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("front:") {
            let mut evs = Vec::new();
            for (col, tok) in rest.split_whitespace().enumerate() {
                let kind = match tok.chars().next() {
                    Some('L') => EventKind::LeftCusp,
                    Some('R') => EventKind::RightCusp,
                    Some('X') => EventKind::Crossing,
                    _ => {
                        return Err(Error::Format(format!(
                            "line {ln}, token {}: expected L/R/X event, got {tok:?}",
                            col + 1
                        )))
                    }
                };
                let level: usize = tok[1..].parse().map_err(|_| {
                    Error::Format(format!("line {ln}, token {}: bad level in {tok:?}", col + 1))
                })?;
                evs.push(Event { kind, level });
            }
            events = Some(evs);
        } else if let Some(rest) = line.strip_prefix("orient:") {
            let mut signs = Vec::new();
            for tok in rest.split_whitespace() {
                match tok {
                    "+" => signs.push(true),
                    "-" => signs.push(false),
                    _ => {
                        return Err(Error::Format(format!(
                            "line {ln}: orientation sign must be + or -, got {tok:?}"
                        )))
                    }
                }
            }
            orient = Some(signs);
        } else {
            return Err(Error::Format(format!("line {ln}: unexpected content {line:?}")));
        }
    }
    let events = events.ok_or_else(|| Error::Format("missing `front:` line".into()))?;
    FrontDiagram::new(events, orient)
}

// ---------------------------------------------------------------------------
// strand tracing
// ---------------------------------------------------------------------------

/// A maximal arc between consecutive events; always runs from its creation
/// (left) end to its termination (right) end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub component: usize,
    /// Directed left-to-right under the component's orientation.
    pub rightward: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing {
    pub event: usize,
    pub under_in: usize,
    pub under_out: usize,
    pub over_in: usize,
    pub over_out: usize,
    /// `det(v_over, v_under) > 0`, which here means the two strands share a
    /// scan direction.
    pub sign: i8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CuspSide {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CuspTag {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cusp {
    pub event: usize,
    pub side: CuspSide,
    pub lower: usize,
    pub upper: usize,
    pub incoming: usize,
    pub outgoing: usize,
    /// Up when the outgoing branch is the upper one.
    pub tag: CuspTag,
}

/// The traced diagram: segments with directions, crossings with signs, and
/// tagged cusps.
#[derive(Debug, Clone)]
pub struct StrandMap {
    pub segments: Vec<Segment>,
    pub crossings: Vec<Crossing>,
    pub cusps: Vec<Cusp>,
    pub components: usize,
}

#[derive(Debug, Clone, Copy)]
enum End {
    Left,
    Right,
}

struct Skeleton {
    segment_count: usize,
    /// (event index, side, lower segment, upper segment)
    cusps: Vec<(usize, CuspSide, usize, usize)>,
    /// (event index, under_in, under_out, over_in, over_out)
    crossings: Vec<(usize, usize, usize, usize, usize)>,
    /// per segment: the (segment, end) connected at each of its two ends
    links_left: Vec<(usize, End)>,
    links_right: Vec<(usize, End)>,
}

fn build_skeleton(events: &[Event]) -> Skeleton {
    let mut active: Vec<usize> = Vec::new();
    let mut segment_count = 0usize;
    let mut cusps = Vec::new();
    let mut crossings = Vec::new();
    let mut links_left: Vec<(usize, End)> = Vec::new();
    let mut links_right: Vec<(usize, End)> = Vec::new();
    let dummy = (usize::MAX, End::Left);
    let mut fresh = |links_left: &mut Vec<(usize, End)>, links_right: &mut Vec<(usize, End)>| {
        links_left.push(dummy);
        links_right.push(dummy);
        segment_count += 1;
        segment_count - 1
    };
    for (idx, e) in events.iter().enumerate() {
        let i = e.level - 1;
        match e.kind {
            EventKind::LeftCusp => {
                let lo = fresh(&mut links_left, &mut links_right);
                let hi = fresh(&mut links_left, &mut links_right);
                links_left[lo] = (hi, End::Left);
                links_left[hi] = (lo, End::Left);
                cusps.push((idx, CuspSide::Left, lo, hi));
                active.insert(i, lo);
                active.insert(i + 1, hi);
            }
            EventKind::Crossing => {
                let under_in = active[i];
                let over_in = active[i + 1];
                let over_out = fresh(&mut links_left, &mut links_right);
                let under_out = fresh(&mut links_left, &mut links_right);
                links_right[under_in] = (under_out, End::Left);
                links_left[under_out] = (under_in, End::Right);
                links_right[over_in] = (over_out, End::Left);
                links_left[over_out] = (over_in, End::Right);
                crossings.push((idx, under_in, under_out, over_in, over_out));
                active[i] = over_out;
                active[i + 1] = under_out;
            }
            EventKind::RightCusp => {
                let lo = active[i];
                let hi = active[i + 1];
                links_right[lo] = (hi, End::Right);
                links_right[hi] = (lo, End::Right);
                cusps.push((idx, CuspSide::Right, lo, hi));
                active.remove(i + 1);
                active.remove(i);
            }
        }
    }
    debug_assert!(active.is_empty());
    Skeleton { segment_count, cusps, crossings, links_left, links_right }
}

fn count_components(events: &[Event]) -> usize {
    let sk = build_skeleton(events);
    let mut seen = vec![false; sk.segment_count];
    let mut components = 0;
    for start in 0..sk.segment_count {
        if seen[start] {
            continue;
        }
        components += 1;
        // walk the 2-regular connection graph
        let mut seg = start;
        let mut moving_right = true;
        loop {
            seen[seg] = true;
            let (next, end) = if moving_right { sk.links_right[seg] } else { sk.links_left[seg] };
            seg = next;
            moving_right = matches!(end, End::Left);
            if seg == start && moving_right {
                break;
            }
        }
    }
    components
}

/// Traces segments, components, directions, cusp tags and crossing signs.
pub fn trace(diagram: &FrontDiagram) -> StrandMap {
    let sk = build_skeleton(&diagram.events);
    let mut component = vec![usize::MAX; sk.segment_count];
    let mut rightward = vec![true; sk.segment_count];
    let mut components = 0usize;
    for start in 0..sk.segment_count {
        if component[start] != usize::MAX {
            continue;
        }
        let comp = components;
        components += 1;
        let positive = diagram.orientations[comp];
        let mut seg = start;
        let mut moving_right = true;
        loop {
            component[seg] = comp;
            rightward[seg] = moving_right == positive;
            let (next, end) = if moving_right { sk.links_right[seg] } else { sk.links_left[seg] };
            seg = next;
            moving_right = matches!(end, End::Left);
            if seg == start && moving_right {
                break;
            }
        }
    }
    let segments: Vec<Segment> = (0..sk.segment_count)
        .map(|s| Segment { component: component[s], rightward: rightward[s] })
        .collect();
    let cusps: Vec<Cusp> = sk
        .cusps
        .iter()
        .map(|&(event, side, lower, upper)| {
            // at a right cusp the rightward branch flows in; at a left cusp
            // the leftward branch does
            let lower_in = match side {
                CuspSide::Right => rightward[lower],
                CuspSide::Left => !rightward[lower],
            };
            let (incoming, outgoing) = if lower_in { (lower, upper) } else { (upper, lower) };
            let tag = if outgoing == upper { CuspTag::Up } else { CuspTag::Down };
            Cusp { event, side, lower, upper, incoming, outgoing, tag }
        })
        .collect();
    let crossings: Vec<Crossing> = sk
        .crossings
        .iter()
        .map(|&(event, under_in, under_out, over_in, over_out)| {
            let sign = if rightward[under_in] == rightward[over_in] { 1 } else { -1 };
            Crossing { event, under_in, under_out, over_in, over_out, sign }
        })
        .collect();
    StrandMap { segments, crossings, cusps, components }
}

/// Per-crossing signs in event order.
pub fn crossing_signs(diagram: &FrontDiagram) -> Vec<i8> {
    trace(diagram).crossings.iter().map(|c| c.sign).collect()
}

/// Per-cusp tags in event order.
pub fn classify_cusps(diagram: &FrontDiagram) -> Vec<Cusp> {
    trace(diagram).cusps
}

/// `(writhe, tb, r)`: writhe is the signed crossing count, `tb` subtracts
/// half the cusp count, and `r` is half of (down cusps − up cusps).
pub fn classical_invariants(diagram: &FrontDiagram) -> (i64, i64, i64) {
    let map = trace(diagram);
    let writhe: i64 = map.crossings.iter().map(|c| c.sign as i64).sum();
    let cusps = map.cusps.len() as i64;
    debug_assert_eq!(cusps % 2, 0);
    let down = map.cusps.iter().filter(|c| c.tag == CuspTag::Down).count() as i64;
    let up = cusps - down;
    debug_assert_eq!((down - up) % 2, 0);
    (writhe, writhe - cusps / 2, (down - up) / 2)
}

// ---------------------------------------------------------------------------
// standard diagrams
// ---------------------------------------------------------------------------

/// The two-cusp unknot `L1 R1`.
pub fn unknot() -> FrontDiagram {
    FrontDiagram::new(vec![Event::left(1), Event::right(1)], None).expect("valid word")
}

/// The Legendrian unknot with 2m cusps, one down and 2m−1 up, so
/// `(tb, r) = (−m, 1−m)`.
pub fn unknot_stabilized(m: usize) -> Result<FrontDiagram> {
    if m == 0 {
        return Err(Error::Format("m must be at least 1".into()));
    }
    let mut events = vec![Event::left(1)];
    for _ in 0..m - 1 {
        events.push(Event::left(2));
        events.push(Event::right(1));
    }
    events.push(Event::right(1));
    FrontDiagram::new(events, None)
}

/// The 2m-cusp diagram with m up cusps followed by m down cusps along the
/// traversal, so `(tb, r) = (−m, 0)`. For odd m this is the standard
/// balanced unknot; `(−m, 0)` is not realizable by a knot when m is even
/// (tb + r is odd for knots), so even m yields the split union of the odd
/// case with a two-cusp unknot.
pub fn unknot_balanced(m: usize) -> Result<FrontDiagram> {
    if m == 0 {
        return Err(Error::Format("m must be at least 1".into()));
    }
    if m % 2 == 0 {
        let mut events = unknot_balanced(m - 1)?.events;
        events.push(Event::left(1));
        events.push(Event::right(1));
        return FrontDiagram::new(events, None);
    }
    let mut events = vec![Event::left(1)];
    for _ in 0..(m - 1) / 2 {
        events.push(Event::left(2));
        events.push(Event::right(1));
    }
    for _ in 0..(m - 1) / 2 {
        events.push(Event::left(3));
        events.push(Event::right(2));
    }
    events.push(Event::right(1));
    FrontDiagram::new(events, None)
}

/// The maximal-tb right trefoil word `L1 L3 X2 X2 X2 R3 R1`.
pub fn trefoil() -> FrontDiagram {
    FrontDiagram::new(
        vec![
            Event::left(1),
            Event::left(3),
            Event::crossing(2),
            Event::crossing(2),
            Event::crossing(2),
            Event::right(3),
            Event::right(1),
        ],
        None,
    )
    .expect("valid word")
}

/// Named standard diagrams: `U(1,2m-1)`, `U(m,m)` and `trefoil`.
pub fn standard_diagram(name: &str, m: usize) -> Result<FrontDiagram> {
    match name {
        "U(1,2m-1)" => unknot_stabilized(m),
        "U(m,m)" => unknot_balanced(m),
        "trefoil" => Ok(trefoil()),
        other => Err(Error::Format(format!("unknown standard diagram {other:?}"))),
    }
}

/// Inserts a stabilization zigzag on the strand at `level` in gap `pos`.
/// This is not a Legendrian Reidemeister move: it lowers tb by one and
/// shifts r by ±1.
pub fn insert_stabilization(
    diagram: &FrontDiagram,
    pos: usize,
    level: usize,
    down_zigzag: bool,
) -> Result<FrontDiagram> {
    if pos > diagram.events.len() {
        return Err(Error::Format(format!("gap {pos} out of range")));
    }
    let k = diagram.strands_at_gap(pos);
    if level == 0 || level > k {
        return Err(Error::Domain(format!("no strand at level {level} in gap {pos}")));
    }
    let mut events = diagram.events.clone();
    let pair = if down_zigzag {
        [Event::left(level), Event::right(level + 1)]
    } else {
        [Event::left(level + 1), Event::right(level)]
    };
    events.splice(pos..pos, pair);
    // component count is unchanged, and so is discovery order: the zigzag
    // splices into an existing strand
    FrontDiagram::new(events, Some(diagram.orientations.clone()))
}
