//! Planar pictures of the chamber decomposition.

use std::fmt::Write as _;

use num_traits::{One, Signed, ToPrimitive, Zero};
use sha2::{Digest, Sha256};

use crate::chambers::{CeilingVector, ToricAlgebra};
use crate::error::{Error, Result};
use crate::ratgeom::{dot_q, rat_vec, Int, Rat, Relation};

/// `x0 <= x <= x1`, `y0 <= y <= y1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SvgWindow {
    pub x0: Rat,
    pub x1: Rat,
    pub y0: Rat,
    pub y1: Rat,
}

impl SvgWindow {
    pub fn square(lo: i64, hi: i64) -> Self {
        Self::new(lo, hi, lo, hi)
    }

    pub fn new(x0: i64, x1: i64, y0: i64, y1: i64) -> Self {
        let r = |v: i64| Rat::from_integer(Int::from(v));
        SvgWindow { x0: r(x0), x1: r(x1), y0: r(y0), y1: r(y1) }
    }
}

/// One filled chamber piece.
#[derive(Clone, Debug)]
pub struct SvgTile {
    pub chamber: CeilingVector,
    pub class: usize,
    pub color: String,
    pub polygon: Vec<[Rat; 2]>,
    /// Interior point of the chamber inside the window.
    pub witness: Vec<Rat>,
}

#[derive(Clone, Debug)]
pub struct SvgRender {
    pub svg: String,
    pub tiles: Vec<SvgTile>,
}

/// Deterministic pastel colour from the canonical ceiling vector.
pub fn class_color(canonical: &CeilingVector) -> String {
    let h = Sha256::digest(canonical.to_string().as_bytes());
    format!("#{:02x}{:02x}{:02x}", 96 + h[0] / 2, 96 + h[1] / 2, 96 + h[2] / 2)
}

/// Keeps the part of a convex polygon where `a . p <= b`.
fn clip(poly: &[[Rat; 2]], a: &[Rat; 2], b: &Rat) -> Vec<[Rat; 2]> {
    let val = |p: &[Rat; 2]| &a[0] * &p[0] + &a[1] * &p[1] - b;
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let (p, q) = (&poly[i], &poly[(i + 1) % poly.len()]);
        let (vp, vq) = (val(p), val(q));
        if !vp.is_positive() {
            out.push(p.clone());
        }
        if (vp.is_negative() && vq.is_positive()) || (vp.is_positive() && vq.is_negative()) {
            let t = &vp / (&vp - &vq);
            out.push([&p[0] + &t * (&q[0] - &p[0]), &p[1] + &t * (&q[1] - &p[1])]);
        }
    }
    out.dedup();
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

fn area2(poly: &[[Rat; 2]]) -> Rat {
    let mut s = Rat::zero();
    for i in 0..poly.len() {
        let (p, q) = (&poly[i], &poly[(i + 1) % poly.len()]);
        s += &p[0] * &q[1] - &q[0] * &p[1];
    }
    s.abs()
}

fn fmt(x: &Rat) -> String {
    let v = x.to_f64().unwrap_or(0.0);
    let s = format!("{v:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

/// Range of ceilings `ceil(<x, n>)` over the window corners.
fn ceiling_range(n: &[Int], w: &SvgWindow) -> (Int, Int) {
    let corners = [[&w.x0, &w.y0], [&w.x0, &w.y1], [&w.x1, &w.y0], [&w.x1, &w.y1]];
    let vals: Vec<Rat> = corners.iter().map(|c| dot_q(&[c[0].clone(), c[1].clone()], n)).collect();
    let lo = vals.iter().min().unwrap().ceil().to_integer();
    let hi = vals.iter().max().unwrap().ceil().to_integer();
    (lo, hi)
}

pub fn render_svg_2d(alg: &ToricAlgebra, w: &SvgWindow) -> Result<SvgRender> {
    if alg.rank() != 2 {
        return Err(Error::Unsupported(format!("SVG rendering needs rank 2, got {}", alg.rank())));
    }
    if w.x0 >= w.x1 || w.y0 >= w.y1 {
        return Err(Error::Input("window must have positive width and height".into()));
    }
    let normals = alg.cone().normals();
    let ranges: Vec<(Int, Int)> = normals.iter().map(|n| ceiling_range(n, w)).collect();
    let rect = vec![
        [w.x0.clone(), w.y0.clone()],
        [w.x1.clone(), w.y0.clone()],
        [w.x1.clone(), w.y1.clone()],
        [w.x0.clone(), w.y1.clone()],
    ];

    // Depth-first over ceiling choices, clipping as we go.
    let mut tiles = Vec::new();
    let mut stack: Vec<(Vec<Int>, Vec<[Rat; 2]>)> = vec![(Vec::new(), rect)];
    while let Some((prefix, poly)) = stack.pop() {
        let i = prefix.len();
        if i == normals.len() {
            let c = CeilingVector(prefix);
            let mut sys = alg.chamber_system(&c);
            sys.push(vec![Rat::one(), Rat::zero()], Relation::Lt, w.x1.clone());
            sys.push(vec![-Rat::one(), Rat::zero()], Relation::Lt, -w.x0.clone());
            sys.push(vec![Rat::zero(), Rat::one()], Relation::Lt, w.y1.clone());
            sys.push(vec![Rat::zero(), -Rat::one()], Relation::Lt, -w.y0.clone());
            let witness =
                sys.find_point().ok_or_else(|| Error::Invariant(format!("tile {c} has no interior point")))?;
            let canonical = alg.canonical_class(&c)?;
            let class = alg.class_index(&c)?;
            tiles.push(SvgTile { color: class_color(&canonical), chamber: c, class, polygon: poly, witness });
            continue;
        }
        let a = rat_vec(&normals[i]);
        let a2 = [a[0].clone(), a[1].clone()];
        let neg = [-a[0].clone(), -a[1].clone()];
        let (lo, hi) = &ranges[i];
        let mut k = hi.clone();
        while &k >= lo {
            let upper = clip(&poly, &a2, &Rat::from_integer(k.clone()));
            let piece = clip(&upper, &neg, &-Rat::from_integer(&k - Int::one()));
            if piece.len() >= 3 && !area2(&piece).is_zero() {
                let mut p = prefix.clone();
                p.push(k.clone());
                stack.push((p, piece));
            }
            k -= 1;
        }
    }
    tiles.sort_by(|a, b| a.chamber.cmp(&b.chamber));

    let width = &w.x1 - &w.x0;
    let height = &w.y1 - &w.y0;
    let stroke = fmt(&(width.clone().max(height.clone()) / Rat::from_integer(Int::from(200))));
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="400" height="{}" viewBox="{} {} {} {}">"#,
        fmt(&(Rat::from_integer(Int::from(400)) * &height / &width)),
        fmt(&w.x0),
        fmt(&-w.y1.clone()),
        fmt(&width),
        fmt(&height)
    );
    let _ = writeln!(s, r#"<g id="chambers" stroke="none">"#);
    for t in &tiles {
        let pts: Vec<String> = t.polygon.iter().map(|p| format!("{},{}", fmt(&p[0]), fmt(&-p[1].clone()))).collect();
        let _ = writeln!(
            s,
            r#"<polygon points="{}" fill="{}" data-chamber="{}" data-class="A{}"/>"#,
            pts.join(" "),
            t.color,
            t.chamber,
            t.class
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r##"<g id="hyperplanes" stroke="#333333" stroke-width="{stroke}">"##);
    for (n, (lo, hi)) in normals.iter().zip(&ranges) {
        let a = rat_vec(n);
        let mut k = lo.clone() - Int::one();
        while &k <= hi {
            if let Some((p, q)) = segment(&a, &Rat::from_integer(k.clone()), w) {
                let _ = writeln!(
                    s,
                    r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                    fmt(&p[0]),
                    fmt(&-p[1].clone()),
                    fmt(&q[0]),
                    fmt(&-q[1].clone())
                );
            }
            k += 1;
        }
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r##"<g id="lattice" fill="#000000">"##);
    let (xl, xh) = (w.x0.ceil().to_integer(), w.x1.floor().to_integer());
    let (yl, yh) = (w.y0.ceil().to_integer(), w.y1.floor().to_integer());
    let r = fmt(&(width.max(height) / Rat::from_integer(Int::from(80))));
    let mut x = xl;
    while x <= xh {
        let mut y = yl.clone();
        while y <= yh {
            let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="{r}"/>"#, x, -&y);
            y += 1;
        }
        x += 1;
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    Ok(SvgRender { svg: s, tiles })
}

/// Intersection of the line `a . p = k` with the window, if it is a proper segment.
fn segment(a: &[Rat], k: &Rat, w: &SvgWindow) -> Option<([Rat; 2], [Rat; 2])> {
    let mut pts: Vec<[Rat; 2]> = Vec::new();
    for x in [&w.x0, &w.x1] {
        if !a[1].is_zero() {
            let y = (k - &a[0] * x) / &a[1];
            if y >= w.y0 && y <= w.y1 {
                pts.push([x.clone(), y]);
            }
        }
    }
    for y in [&w.y0, &w.y1] {
        if !a[0].is_zero() {
            let x = (k - &a[1] * y) / &a[0];
            if x >= w.x0 && x <= w.x1 {
                pts.push([x, y.clone()]);
            }
        }
    }
    pts.sort();
    pts.dedup();
    if pts.len() < 2 {
        return None;
    }
    Some((pts[0].clone(), pts[pts.len() - 1].clone()))
}
