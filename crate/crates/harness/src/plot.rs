//! Minimal SVG line plot for concurrence curves. Lossless with respect to
//! the CSV data: every sample becomes one polyline point, no resampling.

/// One labeled curve (t, C(t)).
pub struct Curve {
    pub label: String,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 50.0;

const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

fn fmt(x: f64) -> String {
    // fixed decimals keep the file deterministic and compact
    format!("{x:.3}")
}

/// Render curves of concurrence against time (t in units of 1/ω₀,
/// concurrence on [0, 1]).
pub fn concurrence_svg(curves: &[Curve]) -> String {
    let t_max = curves
        .iter()
        .filter_map(|c| c.times.last().copied())
        .fold(0.0_f64, f64::max)
        .max(1e-12);
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x = |t: f64| MARGIN_LEFT + t / t_max * plot_w;
    let y = |c: f64| MARGIN_TOP + (1.0 - c.clamp(0.0, 1.0)) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // axes
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        fmt(MARGIN_LEFT),
        fmt(MARGIN_TOP),
        fmt(MARGIN_LEFT),
        fmt(MARGIN_TOP + plot_h)
    ));
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        fmt(MARGIN_LEFT),
        fmt(MARGIN_TOP + plot_h),
        fmt(MARGIN_LEFT + plot_w),
        fmt(MARGIN_TOP + plot_h)
    ));
    // y ticks at 0, 0.5, 1
    for c in [0.0, 0.5, 1.0] {
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{c}</text>\n",
            fmt(MARGIN_LEFT - 6.0),
            fmt(y(c) + 4.0)
        ));
    }
    // x ticks at 0, t_max/2, t_max
    for t in [0.0, 0.5 * t_max, t_max] {
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
            fmt(x(t)),
            fmt(MARGIN_TOP + plot_h + 18.0),
            fmt(t)
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">t  [1/&#969;&#8320;]</text>\n",
        fmt(MARGIN_LEFT + 0.5 * plot_w),
        fmt(HEIGHT - 10.0)
    ));
    svg.push_str(&format!(
        "<text x=\"15\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\" \
         transform=\"rotate(-90 15 {})\">C(t)</text>\n",
        fmt(MARGIN_TOP + 0.5 * plot_h),
        fmt(MARGIN_TOP + 0.5 * plot_h)
    ));

    for (idx, curve) in curves.iter().enumerate() {
        let color = COLORS[idx % COLORS.len()];
        let points: Vec<String> = curve
            .times
            .iter()
            .zip(&curve.values)
            .map(|(&t, &c)| format!("{},{}", fmt(x(t)), fmt(y(c))))
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            points.join(" ")
        ));
        // legend
        let ly = MARGIN_TOP + 16.0 + 18.0 * idx as f64;
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            fmt(MARGIN_LEFT + plot_w - 150.0),
            fmt(ly),
            fmt(MARGIN_LEFT + plot_w - 120.0),
            fmt(ly)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\">{}</text>\n",
            fmt(MARGIN_LEFT + plot_w - 112.0),
            fmt(ly + 4.0),
            curve.label
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svg_contains_one_point_per_sample() {
        let curve = Curve {
            label: "markov".into(),
            times: (0..50).map(|k| k as f64 * 0.1).collect(),
            values: (0..50).map(|k| (k as f64 * 0.05).sin().abs()).collect(),
        };
        let svg = concurrence_svg(&[curve]);
        let points_attr = svg
            .split("points=\"")
            .nth(1)
            .unwrap()
            .split('"')
            .next()
            .unwrap();
        assert_eq!(points_attr.split(' ').count(), 50);
        assert!(svg.contains("markov"));
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn svg_is_deterministic() {
        let make = || Curve {
            label: "x".into(),
            times: vec![0.0, 1.0, 2.0],
            values: vec![1.0, 0.4, 0.7],
        };
        assert_eq!(concurrence_svg(&[make()]), concurrence_svg(&[make()]));
    }
}
