//! CSV and SVG writers for traced curves.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use crate::geometry::events::FeatureEvent;
use crate::geometry::{SampledCurve, Vec2, FOCUS, MIRROR_FOCUS};

pub const CSV_HEADER: &str = "t,x,y,ux,uy";

/// 17 significant digits.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `t, x, y, ux, uy` rows. `preamble` lines are emitted as `#`
/// comments before the header.
pub fn write_csv<W: Write>(mut w: W, curve: &SampledCurve, preamble: &str) -> io::Result<()> {
    for line in preamble.lines() {
        writeln!(w, "# {line}")?;
    }
    writeln!(w, "{CSV_HEADER}")?;
    for s in &curve.samples {
        writeln!(
            w,
            "{},{},{},{},{}",
            num(s.t()),
            num(s.p().x),
            num(s.p().y),
            num(s.u().x),
            num(s.u().y)
        )?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CsvRow {
    pub t: f64,
    pub p: Vec2,
    pub u: Vec2,
}

pub fn read_csv<R: BufRead>(r: R) -> io::Result<Vec<CsvRow>> {
    let bad = |m: String| io::Error::new(io::ErrorKind::InvalidData, m);
    let mut rows = Vec::new();
    let mut header = false;
    for (n, line) in r.lines().enumerate() {
        let line = line?;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        if !header {
            if line.trim() != CSV_HEADER {
                return Err(bad(format!("line {}: expected header {CSV_HEADER}", n + 1)));
            }
            header = true;
            continue;
        }
        let v = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| bad(format!("line {}: {e}", n + 1)))?;
        let [t, x, y, ux, uy] = v[..] else {
            return Err(bad(format!("line {}: expected 5 fields", n + 1)));
        };
        rows.push(CsvRow {
            t,
            p: Vec2::new(x, y),
            u: Vec2::new(ux, uy),
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circle {
    pub center: Vec2,
    pub radius: f64,
}

/// The circle centred on the curve at `t` through the focus.
pub fn focus_circle(curve: &SampledCurve, t: f64) -> Option<Circle> {
    let p = curve.model.eval(t).ok()?.point.p();
    Some(Circle {
        center: p,
        radius: p.dist(FOCUS),
    })
}

/// `n` focus circles at evenly spaced parameters across the curve's domain.
pub fn focus_circles(curve: &SampledCurve, n: usize) -> Vec<Circle> {
    let Some((lo, hi)) = curve.domain() else {
        return Vec::new();
    };
    (0..n)
        .filter_map(|i| {
            let t = lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
            focus_circle(curve, t)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SvgOptions {
    pub width: f64,
    pub height: f64,
    /// `(x_min, x_max, y_min, y_max)`. Fitted to the curves when `None`.
    pub viewport: Option<(f64, f64, f64, f64)>,
    pub curve_colors: Vec<String>,
    pub circle_color: String,
    pub marker_color: String,
    pub stroke_width: f64,
    /// Text placed in the `<desc>` element.
    pub description: String,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            width: 800.0,
            height: 800.0,
            viewport: None,
            curve_colors: vec!["#1f4e9c".into(), "#b2182b".into(), "#4d9221".into()],
            circle_color: "#999999".into(),
            marker_color: "#d95f02".into(),
            stroke_width: 1.2,
            description: String::new(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Scene<'a> {
    pub curves: Vec<&'a SampledCurve>,
    pub circles: Vec<Circle>,
    pub events: Vec<FeatureEvent>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn fit(curves: &[&SampledCurve]) -> (f64, f64, f64, f64) {
    let mut b = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for p in curves
        .iter()
        .flat_map(|c| c.positions())
        .chain([FOCUS, MIRROR_FOCUS])
    {
        b = (b.0.min(p.x), b.1.max(p.x), b.2.min(p.y), b.3.max(p.y));
    }
    let pad = 0.05 * (b.1 - b.0).max(b.3 - b.2).max(1e-9);
    (b.0 - pad, b.1 + pad, b.2 - pad, b.3 + pad)
}

/// SVG 1.1 document. Curves break at gaps and where they leave the viewport
/// by more than its size.
pub fn render_svg(scene: &Scene<'_>, opts: &SvgOptions) -> String {
    let (x0, x1, y0, y1) = opts.viewport.unwrap_or_else(|| fit(&scene.curves));
    let scale = (opts.width / (x1 - x0)).min(opts.height / (y1 - y0));
    let map = |p: Vec2| ((p.x - x0) * scale, (y1 - p.y) * scale);
    let far = |p: Vec2| {
        let (dx, dy) = (x1 - x0, y1 - y0);
        p.x < x0 - dx || p.x > x1 + dx || p.y < y0 - dy || p.y > y1 + dy
    };
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{:.0}" height="{:.0}" viewBox="0 0 {:.0} {:.0}">"#,
        opts.width, opts.height, opts.width, opts.height
    );
    if !opts.description.is_empty() {
        let _ = writeln!(s, "<desc>{}</desc>", escape(&opts.description));
    }
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    // Axes.
    let (ax0, ay) = map(Vec2::new(x0, 0.0));
    let (ax1, _) = map(Vec2::new(x1, 0.0));
    let (bx, by0) = map(Vec2::new(0.0, y1));
    let (_, by1) = map(Vec2::new(0.0, y0));
    let _ = writeln!(
        s,
        r##"<g stroke="#cccccc" stroke-width="0.8"><line x1="{ax0:.2}" y1="{ay:.2}" x2="{ax1:.2}" y2="{ay:.2}"/><line x1="{bx:.2}" y1="{by0:.2}" x2="{bx:.2}" y2="{by1:.2}"/></g>"##
    );
    for c in &scene.circles {
        let (cx, cy) = map(c.center);
        let _ = writeln!(
            s,
            r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{:.2}" fill="none" stroke="{}" stroke-width="0.6"/>"#,
            c.radius * scale,
            opts.circle_color
        );
    }
    for (k, curve) in scene.curves.iter().enumerate() {
        let color = &opts.curve_colors[k % opts.curve_colors.len().max(1)];
        let mut run: Vec<(f64, f64)> = Vec::new();
        let flush = |run: &mut Vec<(f64, f64)>, s: &mut String| {
            if run.len() >= 2 {
                let pts: Vec<String> = run.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                let _ = writeln!(
                    s,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="{}" points="{}"/>"#,
                    opts.stroke_width,
                    pts.join(" ")
                );
            }
            run.clear();
        };
        for (i, fp) in curve.samples.iter().enumerate() {
            if far(fp.p()) {
                flush(&mut run, &mut s);
                continue;
            }
            run.push(map(fp.p()));
            if i + 1 < curve.samples.len() && !curve.segment_ok(i) {
                flush(&mut run, &mut s);
            }
        }
        flush(&mut run, &mut s);
    }
    for e in &scene.events {
        if far(e.location) {
            continue;
        }
        let (cx, cy) = map(e.location);
        let _ = writeln!(
            s,
            r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="3" fill="{}"><title>{:?} t={}</title></circle>"#,
            opts.marker_color,
            e.kind,
            e.t()
        );
    }
    for (f, label) in [(FOCUS, "(0,1)"), (MIRROR_FOCUS, "(0,-1)")] {
        let (cx, cy) = map(f);
        let _ = writeln!(
            s,
            r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="3.5" fill="black"><title>{label}</title></circle>"#
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{trace, RefineOptions, SeedKind};

    fn curve() -> SampledCurve {
        trace(
            SeedKind::Parabola,
            (-0.1, 0.1),
            51,
            3,
            &RefineOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let c = curve();
        let mut buf = Vec::new();
        write_csv(&mut buf, &c, "iterations = 3").unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# iterations = 3\nt,x,y,ux,uy\n"));
        let rows = read_csv(buf.as_slice()).unwrap();
        assert_eq!(rows.len(), c.len());
        for (r, s) in rows.iter().zip(&c.samples) {
            assert_eq!(r.t, s.t());
            assert_eq!(r.p, s.p());
            assert_eq!(r.u, s.u());
        }
    }

    #[test]
    fn csv_uses_seventeen_digits() {
        assert_eq!(num(1.0 / 3.0), "3.3333333333333331e-1");
        assert_eq!(num(0.0), "0.0000000000000000e0");
    }

    #[test]
    fn csv_rejects_garbage() {
        assert!(read_csv("x,y\n1,2\n".as_bytes()).is_err());
        assert!(read_csv("t,x,y,ux,uy\n1,2,3\n".as_bytes()).is_err());
        assert!(read_csv("t,x,y,ux,uy\n1,2,3,a,5\n".as_bytes()).is_err());
    }

    #[test]
    fn circles_pass_through_focus() {
        let c = curve();
        let cs = focus_circles(&c, 12);
        assert_eq!(cs.len(), 12);
        for k in cs {
            assert!((k.center.dist(FOCUS) - k.radius).abs() < 1e-12);
        }
    }

    #[test]
    fn svg_is_deterministic_and_well_formed() {
        let c = curve();
        let scene = Scene {
            curves: vec![&c],
            circles: focus_circles(&c, 3),
            events: Vec::new(),
        };
        let opts = SvgOptions {
            description: "a < b".into(),
            ..SvgOptions::default()
        };
        let a = render_svg(&scene, &opts);
        assert_eq!(a, render_svg(&scene, &opts));
        assert!(a.contains("<desc>a &lt; b</desc>"));
        assert!(a.contains("<polyline"));
        assert_eq!(a.matches("<circle").count(), 3 + 2);
        assert!(a.trim_end().ends_with("</svg>"));
    }
}
