//! Minimal SVG emitters. Every marker carries its data values verbatim in
//! `data-x` / `data-y`, so a figure can be checked against its CSV.

use std::fmt::Write;

#[derive(Debug, Clone)]
pub struct SvgPoint {
    pub x: String,
    pub y: String,
    /// Iteration index, used for colour.
    pub n: usize,
}

#[derive(Debug, Clone)]
pub struct SvgScatter {
    pub size: f64,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub points: Vec<SvgPoint>,
    pub radius: f64,
    pub title: String,
}

fn num(s: &str) -> f64 {
    s.parse().unwrap_or(f64::NAN)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Range covering the central 96% of the finite values, padded by 5%.
pub fn robust_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut v: Vec<f64> = values.filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return (-1.0, 1.0);
    }
    v.sort_by(|a, b| a.total_cmp(b));
    let lo = v[(v.len() as f64 * 0.02) as usize];
    let hi = v[((v.len() as f64 * 0.98) as usize).min(v.len() - 1)];
    let pad = if hi > lo { 0.05 * (hi - lo) } else { 1.0 };
    (lo - pad, hi + pad)
}

impl SvgScatter {
    pub fn new(title: &str, points: Vec<SvgPoint>) -> Self {
        let x_range = robust_range(points.iter().map(|p| num(&p.x)));
        let y_range = robust_range(points.iter().map(|p| num(&p.y)));
        SvgScatter { size: 512.0, x_range, y_range, points, radius: 0.8, title: title.to_string() }
    }

    fn to_px(&self, x: f64, y: f64) -> (f64, f64) {
        let sx = (x - self.x_range.0) / (self.x_range.1 - self.x_range.0) * self.size;
        let sy = self.size - (y - self.y_range.0) / (self.y_range.1 - self.y_range.0) * self.size;
        // far-away points are kept in the file but land outside the viewport
        let clamp = |c: f64| if c.is_finite() { c.clamp(-10.0 * self.size, 11.0 * self.size) } else { -10.0 * self.size };
        (clamp(sx), clamp(sy))
    }

    pub fn render(&self) -> String {
        let max_n = self.points.iter().map(|p| p.n).max().unwrap_or(0).max(1) as f64;
        let mut s = header(self.size, &self.title);
        for p in &self.points {
            let (cx, cy) = self.to_px(num(&p.x), num(&p.y));
            let hue = 240.0 * (1.0 - p.n as f64 / max_n);
            writeln!(
                s,
                r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{}" fill="hsl({hue:.0},80%,40%)" data-n="{}" data-x="{}" data-y="{}"/>"#,
                self.radius,
                p.n,
                escape(&p.x),
                escape(&p.y)
            )
            .expect("write to string");
        }
        s.push_str("</svg>\n");
        s
    }
}

fn header(size: f64, title: &str) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n<title>{}</title>\n<rect width=\"{size}\" height=\"{size}\" fill=\"white\"/>\n",
        escape(title)
    )
}

/// One polyline per series over a shared x axis, plus a dashed line at `y = reference`.
pub fn line_chart(title: &str, series: &[(String, Vec<(String, String)>)], reference: f64) -> String {
    let size = 512.0;
    let margin = 40.0;
    let all: Vec<(f64, f64)> = series.iter().flat_map(|(_, pts)| pts.iter().map(|(x, y)| (num(x), num(y)))).collect();
    let fold = |f: fn(&(f64, f64)) -> f64| {
        all.iter().map(f).filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    };
    let (mut x0, mut x1) = fold(|p| p.0);
    let (_, y_max) = fold(|p| p.1);
    if x1.partial_cmp(&x0) != Some(std::cmp::Ordering::Greater) {
        (x0, x1) = (x0 - 1.0, x0 + 1.0);
    }
    let y1 = if y_max.is_finite() { y_max.max(reference) * 1.1 } else { reference * 1.1 };
    let px = |x: f64| margin + (x - x0) / (x1 - x0) * (size - 2.0 * margin);
    let py = |y: f64| size - margin - y / y1 * (size - 2.0 * margin);
    let palette = ["#1b6ac9", "#c9361b", "#2a9d3a", "#8a3ac9", "#c98a1b"];

    let mut s = header(size, title);
    let ry = py(reference);
    writeln!(
        s,
        r#"<line x1="{margin}" y1="{ry:.2}" x2="{:.2}" y2="{ry:.2}" stroke="gray" stroke-dasharray="4 3" data-y="{reference}"/>"#,
        size - margin
    )
    .expect("write to string");
    for (i, (name, pts)) in series.iter().enumerate() {
        let colour = palette[i % palette.len()];
        let path: Vec<String> = pts.iter().map(|(x, y)| format!("{:.2},{:.2}", px(num(x)), py(num(y)))).collect();
        writeln!(s, r#"<polyline fill="none" stroke="{colour}" points="{}" data-series="{}"/>"#, path.join(" "), escape(name))
            .expect("write to string");
        for (x, y) in pts {
            writeln!(
                s,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2" fill="{colour}" data-series="{}" data-x="{}" data-y="{}"/>"#,
                px(num(x)),
                py(num(y)),
                escape(name),
                escape(x),
                escape(y)
            )
            .expect("write to string");
        }
        writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="12" fill="{colour}">{}</text>"#,
            margin + 5.0,
            margin + 15.0 * (i as f64 + 1.0),
            escape(name)
        )
        .expect("write to string");
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scatter_keeps_every_point() {
        let pts = (0..10).map(|i| SvgPoint { x: i.to_string(), y: (i * i).to_string(), n: i }).collect();
        let svg = SvgScatter::new("t", pts).render();
        assert_eq!(svg.matches("<circle").count(), 10);
        assert!(svg.contains(r#"data-x="3" data-y="9""#));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn chart_has_reference_line() {
        let svg = line_chart("c", &[("a".into(), vec![("1".into(), "0.5".into()), ("2".into(), "0.7".into())])], 1.0);
        assert!(svg.contains(r#"stroke-dasharray="4 3" data-y="1""#));
        assert_eq!(svg.matches("<circle").count(), 2);
    }

    #[test]
    fn robust_range_ignores_outliers() {
        let mut v: Vec<f64> = (0..100).map(|i| i as f64 / 100.0).collect();
        v.push(1e300);
        v.push(f64::INFINITY);
        let (lo, hi) = robust_range(v.into_iter());
        assert!(lo < 0.05 && hi < 2.0);
    }
}
