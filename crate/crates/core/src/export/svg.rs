use std::f64::consts::PI;
use std::fmt::Write;

use crate::error::Result;
use crate::shift::enumerate_arcs;
use crate::slopes::SlopeSet;

/// Fan opening angle, symmetric about the downward vertical.
const SPREAD: f64 = 2.0 * PI / 3.0;

/// SVG 1.1 picture of the depth-`depth` arcs of the fan, one polyline each.
///
/// The top of the fan is the origin. Vertex `k` of an arc sits at radius
/// `x_1·k/depth`, where `x_1` is the arc's largest first coordinate, and at
/// the angle of the centre of the length-`k` prefix of its word, with words
/// ranked lexicographically. Sibling arcs therefore branch apart level by level.
pub fn render_fan_svg(omega: &SlopeSet, depth: usize, cap: usize) -> Result<String> {
    let arcs = enumerate_arcs(omega, depth, cap)?;
    let m = omega.len() as f64;
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"-1.05 -0.05 2.1 1.1\" width=\"840\" height=\"440\">\n",
    );
    out.push_str("<g fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"0.003\">\n");
    for arc in &arcs {
        let x1 = arc.maxima[0].to_f64();
        let mut pts = vec!["0.000000,0.000000".to_string()];
        let (mut lo, mut width) = (0.0f64, 1.0f64);
        for (k, &w) in arc.word.iter().enumerate() {
            width /= m;
            lo += w as f64 * width;
            let t = lo + width / 2.0;
            let theta = PI / 2.0 + SPREAD * (0.5 - t);
            let r = x1 * (k + 1) as f64 / depth as f64;
            pts.push(format!("{:.6},{:.6}", r * theta.cos(), r * theta.sin()));
        }
        let word: Vec<String> = arc.word.iter().map(ToString::to_string).collect();
        writeln!(
            out,
            "<polyline data-word=\"{}\" points=\"{}\"/>",
            word.join(" "),
            pts.join(" ")
        )
        .expect("write to string");
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}
