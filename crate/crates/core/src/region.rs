//! Axis-aligned regions of the complex plane and certified membership tests.

use std::fmt;

use rug::Float;

use crate::ball::RealBall;
use crate::complex::ComplexBall;

#[derive(Clone, Debug)]
pub struct Edge {
    pub value: RealBall,
    pub closed: bool,
}

impl Edge {
    pub fn closed(value: RealBall) -> Self {
        Edge { value, closed: true }
    }

    pub fn open(value: RealBall) -> Self {
        Edge { value, closed: false }
    }
}

/// Rectangle `[sigma_lo, sigma_hi] x [t_lo, t_hi]`; a missing edge is unbounded.
///
/// When `mirrored` is set the region is the union of the rectangle and its
/// complex conjugate.
#[derive(Clone, Debug)]
pub struct Region {
    pub sigma_lo: Option<Edge>,
    pub sigma_hi: Option<Edge>,
    pub t_lo: Option<Edge>,
    pub t_hi: Option<Edge>,
    pub mirrored: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Containment {
    Inside,
    Outside,
    Uncertain,
}

impl Containment {
    fn and(self, other: Containment) -> Containment {
        use Containment::*;
        match (self, other) {
            (Outside, _) | (_, Outside) => Outside,
            (Inside, Inside) => Inside,
            _ => Uncertain,
        }
    }

    fn or(self, other: Containment) -> Containment {
        use Containment::*;
        match (self, other) {
            (Inside, _) | (_, Inside) => Inside,
            (Outside, Outside) => Outside,
            _ => Uncertain,
        }
    }
}

fn ball(prec: u32, v: f64) -> RealBall {
    RealBall::from_f64(prec, v)
}

impl Region {
    /// The whole plane.
    pub fn plane() -> Self {
        Region {
            sigma_lo: None,
            sigma_hi: None,
            t_lo: None,
            t_hi: None,
            mirrored: false,
        }
    }

    pub fn sigma_ge(mut self, v: RealBall) -> Self {
        self.sigma_lo = Some(Edge::closed(v));
        self
    }

    pub fn sigma_gt(mut self, v: RealBall) -> Self {
        self.sigma_lo = Some(Edge::open(v));
        self
    }

    pub fn sigma_le(mut self, v: RealBall) -> Self {
        self.sigma_hi = Some(Edge::closed(v));
        self
    }

    pub fn sigma_lt(mut self, v: RealBall) -> Self {
        self.sigma_hi = Some(Edge::open(v));
        self
    }

    pub fn t_ge(mut self, v: RealBall) -> Self {
        self.t_lo = Some(Edge::closed(v));
        self
    }

    pub fn t_gt(mut self, v: RealBall) -> Self {
        self.t_lo = Some(Edge::open(v));
        self
    }

    pub fn t_le(mut self, v: RealBall) -> Self {
        self.t_hi = Some(Edge::closed(v));
        self
    }

    pub fn t_lt(mut self, v: RealBall) -> Self {
        self.t_hi = Some(Edge::open(v));
        self
    }

    pub fn mirrored(mut self) -> Self {
        self.mirrored = true;
        self
    }

    /// Closed strip `a <= sigma <= b`, any `t`.
    pub fn strip(a: f64, b: f64) -> Self {
        Region::plane().sigma_ge(ball(64, a)).sigma_le(ball(64, b))
    }

    /// Checks the edge ordering invariants.
    pub fn is_valid(&self) -> bool {
        fn ordered(lo: &Option<Edge>, hi: &Option<Edge>) -> bool {
            match (lo, hi) {
                (Some(l), Some(h)) => {
                    if l.closed && h.closed {
                        l.value.lo() <= h.value.hi()
                    } else {
                        l.value.lo() < h.value.hi()
                    }
                }
                _ => true,
            }
        }
        ordered(&self.sigma_lo, &self.sigma_hi) && ordered(&self.t_lo, &self.t_hi)
    }

    fn rect_contains(&self, s: &ComplexBall) -> Containment {
        let mut c = Containment::Inside;
        if let Some(e) = &self.sigma_lo {
            c = c.and(above(&s.re, e));
        }
        if let Some(e) = &self.sigma_hi {
            c = c.and(below(&s.re, e));
        }
        if let Some(e) = &self.t_lo {
            c = c.and(above(&s.im, e));
        }
        if let Some(e) = &self.t_hi {
            c = c.and(below(&s.im, e));
        }
        c
    }

    pub fn contains(&self, s: &ComplexBall) -> Containment {
        let direct = self.rect_contains(s);
        if !self.mirrored {
            return direct;
        }
        let mirrored = self.rect_contains(&s.conj());
        if direct == Containment::Uncertain && mirrored == Containment::Uncertain {
            return Containment::Uncertain;
        }
        direct.or(mirrored)
    }
}

/// Position of `x` relative to a lower edge.
fn above(x: &RealBall, e: &Edge) -> Containment {
    let (xl, xh) = (x.lo(), x.hi());
    let (el, eh) = (e.value.lo(), e.value.hi());
    let inside = if e.closed { xl >= eh } else { xl > eh };
    let outside = if e.closed { xh < el } else { xh <= el && e.value.is_exact() || xh < el };
    classify(inside, outside)
}

/// Position of `x` relative to an upper edge.
fn below(x: &RealBall, e: &Edge) -> Containment {
    let (xl, xh) = (x.lo(), x.hi());
    let (el, eh) = (e.value.lo(), e.value.hi());
    let inside = if e.closed { xh <= el } else { xh < el };
    let outside = if e.closed { xl > eh } else { xl >= eh && e.value.is_exact() || xl > eh };
    classify(inside, outside)
}

fn classify(inside: bool, outside: bool) -> Containment {
    if inside {
        Containment::Inside
    } else if outside {
        Containment::Outside
    } else {
        Containment::Uncertain
    }
}

pub fn region_contains(r: &Region, s: &ComplexBall) -> Containment {
    r.contains(s)
}

fn fmt_edge(e: &Edge) -> String {
    let v = e.value.mid().to_f64();
    let rounded = Float::with_val(64, v);
    if e.value.is_exact() && &rounded == e.value.mid() {
        format!("{}", v)
    } else {
        format!("{:.6}", v)
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let axis = |name: &str, lo: &Option<Edge>, hi: &Option<Edge>| -> String {
            match (lo, hi) {
                (None, None) => format!("{name} any"),
                (Some(l), None) => {
                    format!("{name} {} {}", if l.closed { ">=" } else { ">" }, fmt_edge(l))
                }
                (None, Some(h)) => {
                    format!("{name} {} {}", if h.closed { "<=" } else { "<" }, fmt_edge(h))
                }
                (Some(l), Some(h)) => format!(
                    "{} {} {} {} {}",
                    fmt_edge(l),
                    if l.closed { "<=" } else { "<" },
                    name,
                    if h.closed { "<=" } else { "<" },
                    fmt_edge(h)
                ),
            }
        };
        write!(
            f,
            "{}, {}",
            axis("sigma", &self.sigma_lo, &self.sigma_hi),
            axis("t", &self.t_lo, &self.t_hi)
        )?;
        if self.mirrored {
            write!(f, " (and conjugates)")?;
        }
        Ok(())
    }
}
