use crate::analytic::MetricPoint;
use crate::error::{Error, Result};

/// Points not weakly dominated in (energy, age) minimization, sorted by
/// energy ascending. Among points with identical coordinates only the first
/// in input order survives.
pub fn pareto_front(points: &[MetricPoint]) -> Result<Vec<MetricPoint>> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    // stable: ties keep input order
    order.sort_by(|&a, &b| {
        let (pa, pb) = (&points[a], &points[b]);
        pa.avg_energy
            .total_cmp(&pb.avg_energy)
            .then(pa.avg_aoi.total_cmp(&pb.avg_aoi))
    });
    let mut best_aoi = f64::INFINITY;
    let mut front = Vec::new();
    for i in order {
        let pt = &points[i];
        if pt.avg_aoi < best_aoi {
            best_aoi = pt.avg_aoi;
            front.push(pt.clone());
        }
    }
    Ok(front)
}
