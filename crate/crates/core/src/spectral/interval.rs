//! The algebra of finite unions of left-open right-closed intervals.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A left-open right-closed piece `(lower, upper]` of the real line.
///
/// `lower` may be `-inf` and `upper` may be `+inf`; in the latter case the
/// piece is the open ray `(lower, inf)`. The whole line is `(-inf, inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lower: f64,
    upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() {
            return Err(Error::InvalidInterval("NaN endpoint".into()));
        }
        if lower == f64::INFINITY || upper == f64::NEG_INFINITY {
            return Err(Error::InvalidInterval(format!("({lower}, {upper}]")));
        }
        if lower >= upper {
            return Err(Error::InvalidInterval(format!(
                "degenerate interval ({lower}, {upper}]"
            )));
        }
        Ok(Interval { lower, upper })
    }

    /// `(a, b]`.
    pub fn left_open(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidInterval("endpoints must be real".into()));
        }
        Interval::new(a, b)
    }

    /// `(a, inf)`.
    pub fn ray_up(a: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::InvalidInterval("endpoint must be real".into()));
        }
        Interval::new(a, f64::INFINITY)
    }

    /// `(-inf, b]`.
    pub fn ray_down(b: f64) -> Result<Self> {
        if !b.is_finite() {
            return Err(Error::InvalidInterval("endpoint must be real".into()));
        }
        Interval::new(f64::NEG_INFINITY, b)
    }

    pub fn whole_line() -> Self {
        Interval {
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
        }
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn contains(&self, t: f64) -> bool {
        self.lower < t && t <= self.upper && t.is_finite()
    }

    fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lower = self.lower.max(other.lower);
        let upper = self.upper.min(other.upper);
        (lower < upper).then_some(Interval { lower, upper })
    }
}

/// A member of the interval algebra, kept as sorted, disjoint, maximally
/// merged pieces.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalSet {
    pieces: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { pieces: Vec::new() }
    }

    pub fn whole_line() -> Self {
        IntervalSet {
            pieces: vec![Interval::whole_line()],
        }
    }

    pub fn single(piece: Interval) -> Self {
        IntervalSet {
            pieces: vec![piece],
        }
    }

    /// Canonicalises an arbitrary list of (possibly overlapping) pieces.
    pub fn from_pieces<I: IntoIterator<Item = Interval>>(pieces: I) -> Self {
        let mut pieces: Vec<Interval> = pieces.into_iter().collect();
        pieces.sort_by(|a, b| a.lower.total_cmp(&b.lower));
        let mut merged: Vec<Interval> = Vec::with_capacity(pieces.len());
        for p in pieces {
            match merged.last_mut() {
                // (a, b] and (c, d] with c <= b are contiguous or overlapping.
                Some(last) if p.lower <= last.upper => last.upper = last.upper.max(p.upper),
                _ => merged.push(p),
            }
        }
        IntervalSet { pieces: merged }
    }

    pub fn pieces(&self) -> &[Interval] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.pieces.iter().any(|p| p.contains(t))
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::from_pieces(self.pieces.iter().chain(&other.pieces).copied())
    }

    pub fn intersection(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        for a in &self.pieces {
            for b in &other.pieces {
                if let Some(c) = a.intersect(b) {
                    out.push(c);
                }
            }
        }
        IntervalSet::from_pieces(out)
    }

    pub fn complement(&self) -> IntervalSet {
        let mut out = Vec::new();
        let mut cursor = f64::NEG_INFINITY;
        for p in &self.pieces {
            if cursor < p.lower {
                out.push(Interval {
                    lower: cursor,
                    upper: p.lower,
                });
            }
            cursor = p.upper;
        }
        if cursor < f64::INFINITY {
            out.push(Interval {
                lower: cursor,
                upper: f64::INFINITY,
            });
        }
        IntervalSet { pieces: out }
    }

    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        self.intersection(&other.complement())
    }

    pub fn is_disjoint(&self, other: &IntervalSet) -> bool {
        self.intersection(other).is_empty()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum PieceJson {
    LeftOpenRightClosed { a: f64, b: f64 },
    RayUp { a: f64 },
    RayDown { b: f64 },
}

impl Serialize for IntervalSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // The wire form has no whole-line kind; it is written as two rays
        // meeting at 0, which canonicalise back into one piece.
        let mut out = Vec::with_capacity(self.pieces.len() + 1);
        for p in &self.pieces {
            match (p.lower.is_finite(), p.upper.is_finite()) {
                (true, true) => out.push(PieceJson::LeftOpenRightClosed {
                    a: p.lower,
                    b: p.upper,
                }),
                (true, false) => out.push(PieceJson::RayUp { a: p.lower }),
                (false, true) => out.push(PieceJson::RayDown { b: p.upper }),
                (false, false) => {
                    out.push(PieceJson::RayDown { b: 0.0 });
                    out.push(PieceJson::RayUp { a: 0.0 });
                }
            }
        }
        out.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntervalSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = Vec::<PieceJson>::deserialize(d)?;
        let pieces = raw
            .into_iter()
            .map(|p| match p {
                PieceJson::LeftOpenRightClosed { a, b } => Interval::left_open(a, b),
                PieceJson::RayUp { a } => Interval::ray_up(a),
                PieceJson::RayDown { b } => Interval::ray_down(b),
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(IntervalSet::from_pieces(pieces))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn loc(a: f64, b: f64) -> Interval {
        Interval::left_open(a, b).unwrap()
    }

    #[test]
    fn degenerate_intervals_are_rejected() {
        assert!(Interval::left_open(1.0, 1.0).is_err());
        assert!(Interval::left_open(2.0, 1.0).is_err());
        assert!(Interval::left_open(f64::NAN, 1.0).is_err());
        assert!(Interval::ray_up(f64::INFINITY).is_err());
    }

    #[test]
    fn adjacent_pieces_merge() {
        let s = IntervalSet::from_pieces([loc(1.0, 2.0), loc(0.0, 1.0), loc(5.0, 6.0)]);
        assert_eq!(s.pieces(), &[loc(0.0, 2.0), loc(5.0, 6.0)]);
        let line = IntervalSet::from_pieces([Interval::ray_down(3.0).unwrap(), Interval::ray_up(3.0).unwrap()]);
        assert_eq!(line, IntervalSet::whole_line());
    }

    #[test]
    fn endpoint_membership_is_left_open_right_closed() {
        let s = IntervalSet::single(loc(1.0, 2.0));
        assert!(!s.contains(1.0));
        assert!(s.contains(2.0));
        assert!(s.complement().contains(1.0));
        assert!(!s.complement().contains(2.0));
    }

    #[test]
    fn json_form() {
        let s = IntervalSet::from_pieces([
            Interval::ray_down(-1.0).unwrap(),
            loc(0.0, 1.5),
            Interval::ray_up(4.0).unwrap(),
        ]);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(
            text,
            r#"[{"kind":"ray_down","b":-1.0},{"kind":"left_open_right_closed","a":0.0,"b":1.5},{"kind":"ray_up","a":4.0}]"#
        );
        assert_eq!(serde_json::from_str::<IntervalSet>(&text).unwrap(), s);
        let whole = serde_json::to_string(&IntervalSet::whole_line()).unwrap();
        assert_eq!(serde_json::from_str::<IntervalSet>(&whole).unwrap(), IntervalSet::whole_line());
    }

    fn piece() -> impl Strategy<Value = Interval> {
        (-8i32..8, 1i32..6, 0u8..3).prop_map(|(a, w, kind)| match kind {
            0 => loc(a as f64 / 2.0, (a + w) as f64 / 2.0),
            1 => Interval::ray_up(a as f64 / 2.0).unwrap(),
            _ => Interval::ray_down(a as f64 / 2.0).unwrap(),
        })
    }

    fn set() -> impl Strategy<Value = IntervalSet> {
        prop::collection::vec(piece(), 0..5).prop_map(IntervalSet::from_pieces)
    }

    proptest! {
        #[test]
        fn boolean_operations_match_membership(s in set(), t in set(), probe in -40i32..40) {
            let x = probe as f64 / 4.0;
            prop_assert_eq!(s.union(&t).contains(x), s.contains(x) || t.contains(x));
            prop_assert_eq!(s.intersection(&t).contains(x), s.contains(x) && t.contains(x));
            prop_assert_eq!(s.complement().contains(x), !s.contains(x));
            prop_assert_eq!(s.complement().complement(), s.clone());
            for w in s.pieces().windows(2) {
                prop_assert!(w[0].upper() < w[1].lower());
            }
        }
    }
}
