use std::io::Write;

use super::FrontierPoint;
use crate::dynamics::csv_err;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct FrontierReport {
    /// Indices (into the input) of points on the upper hull, ordered by `a`.
    pub hull: Vec<usize>,
    /// Indices of points strictly below the hull.
    pub dominated: Vec<usize>,
}

impl FrontierReport {
    pub fn on_hull(&self, i: usize) -> bool {
        self.hull.contains(&i)
    }
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Upper convex hull of the `(a, b)` points.
///
/// Hull vertices come from a monotone chain; every point is then compared
/// against the piecewise-linear envelope so that points lying on a hull
/// edge (collinear) count as on the frontier.
pub fn roc_frontier(points: &[FrontierPoint]) -> FrontierReport {
    let xy: Vec<(f64, f64)> = points.iter().map(|p| (p.load_per_cost, p.return_per_cost)).collect();
    let mut order: Vec<usize> = (0..xy.len()).collect();
    order.sort_by(|&i, &j| xy[i].0.total_cmp(&xy[j].0).then(xy[j].1.total_cmp(&xy[i].1)));
    // best b per distinct a
    order.dedup_by(|later, earlier| xy[*later].0 == xy[*earlier].0);

    let mut chain: Vec<(f64, f64)> = Vec::new();
    for &i in &order {
        let p = xy[i];
        while chain.len() >= 2 && cross(chain[chain.len() - 2], chain[chain.len() - 1], p) >= 0.0 {
            chain.pop();
        }
        chain.push(p);
    }

    let envelope = |a: f64| -> f64 {
        if chain.len() == 1 {
            return chain[0].1;
        }
        let k = chain.windows(2).position(|w| a <= w[1].0).unwrap_or(chain.len() - 2);
        let (p, q) = (chain[k], chain[k + 1]);
        p.1 + (q.1 - p.1) * (a - p.0) / (q.0 - p.0)
    };

    let mut hull = Vec::new();
    let mut dominated = Vec::new();
    for (i, &(a, b)) in xy.iter().enumerate() {
        let e = envelope(a);
        if b < e - 1e-12 * e.abs().max(1.0) {
            dominated.push(i);
        } else {
            hull.push(i);
        }
    }
    hull.sort_by(|&i, &j| xy[i].0.total_cmp(&xy[j].0).then(i.cmp(&j)));
    FrontierReport { hull, dominated }
}

/// CSV with header `type,a,b,on_hull`.
pub fn write_frontier_csv<W: Write>(points: &[FrontierPoint], report: &FrontierReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["type", "a", "b", "on_hull"]).map_err(csv_err)?;
    for (i, p) in points.iter().enumerate() {
        w.write_record([
            p.source_type.to_string(),
            p.load_per_cost.to_string(),
            p.return_per_cost.to_string(),
            report.on_hull(i).to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
