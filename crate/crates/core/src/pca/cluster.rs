//! k-means on the PC1/PC2 score plane.
//!
//! Initialization is a farthest-point traversal starting from the row with
//! the lexicographically smallest id; the seed only decides between exactly
//! equidistant candidates. Lloyd iterations run until the assignment stops
//! changing or [`MAX_ITERATIONS`] is reached.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{PcaError, PcaResult};

pub const MAX_ITERATIONS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterMember {
    pub kol_id: String,
    pub cluster: usize,
    pub pc1: f64,
    pub pc2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterAssignment {
    pub k: usize,
    pub seed: u64,
    /// In score-row order.
    pub members: Vec<ClusterMember>,
    pub centroids: Vec<[f64; 2]>,
    pub iterations: usize,
    pub converged: bool,
    /// Within-cluster sum of squares after each assignment step.
    pub inertia_history: Vec<f64>,
}

impl ClusterAssignment {
    pub fn cluster_of(&self, kol_id: &str) -> Option<usize> {
        self.members
            .iter()
            .find(|m| m.kol_id == kol_id)
            .map(|m| m.cluster)
    }

    /// Member ids per cluster index.
    pub fn groups(&self) -> Vec<Vec<&str>> {
        let mut groups = vec![Vec::new(); self.k];
        for m in &self.members {
            groups[m.cluster].push(m.kol_id.as_str());
        }
        groups
    }

    pub fn inertia(&self) -> f64 {
        self.inertia_history.last().copied().unwrap_or(0.0)
    }
}

pub fn cluster_scores(result: &PcaResult, k: usize, seed: u64) -> Result<ClusterAssignment, PcaError> {
    if result.scores.cols() < 2 {
        return Err(PcaError::TooFewComponents);
    }
    cluster_points(&result.row_ids, &result.plane(), k, seed)
}

pub fn cluster_points(
    ids: &[String],
    points: &[[f64; 2]],
    k: usize,
    seed: u64,
) -> Result<ClusterAssignment, PcaError> {
    assert_eq!(ids.len(), points.len(), "one id per point");
    let n = points.len();
    if k == 0 {
        return Err(PcaError::InvalidK);
    }
    if k > n {
        return Err(PcaError::KTooLarge { k, n });
    }

    let mut centroids = farthest_point_init(ids, points, k, seed);
    let mut labels: Vec<usize> = Vec::new();
    let mut inertia_history = Vec::new();
    let mut iterations = 0;
    let mut converged = false;

    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let mut next = assign(points, &centroids);
        repair_empty(points, &mut next, &mut centroids);
        inertia_history.push(inertia(points, &next, &centroids));
        if next == labels {
            converged = true;
            break;
        }
        labels = next;
        centroids = means(points, &labels, k);
    }

    let members = ids
        .iter()
        .zip(points)
        .zip(&labels)
        .map(|((id, p), &cluster)| ClusterMember {
            kol_id: id.clone(),
            cluster,
            pc1: p[0],
            pc2: p[1],
        })
        .collect();
    Ok(ClusterAssignment {
        k,
        seed,
        members,
        centroids,
        iterations,
        converged,
        inertia_history,
    })
}

fn dist2(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

fn farthest_point_init(ids: &[String], points: &[[f64; 2]], k: usize, seed: u64) -> Vec<[f64; 2]> {
    let n = points.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = (0..n).min_by(|&a, &b| ids[a].cmp(&ids[b]).then(a.cmp(&b))).unwrap();

    let mut chosen = vec![false; n];
    chosen[start] = true;
    let mut centroids = vec![points[start]];
    let mut nearest: Vec<f64> = points.iter().map(|p| dist2(p, &points[start])).collect();

    while centroids.len() < k {
        let far = (0..n)
            .filter(|&i| !chosen[i])
            .map(|i| nearest[i])
            .fold(f64::NEG_INFINITY, f64::max);
        let mut candidates: Vec<usize> = (0..n).filter(|&i| !chosen[i] && nearest[i] == far).collect();
        candidates.sort_by(|&a, &b| ids[a].cmp(&ids[b]).then(a.cmp(&b)));
        let pick = if candidates.len() == 1 {
            candidates[0]
        } else {
            candidates[rng.gen_range(0..candidates.len())]
        };
        chosen[pick] = true;
        centroids.push(points[pick]);
        for i in 0..n {
            nearest[i] = nearest[i].min(dist2(&points[i], &points[pick]));
        }
    }
    centroids
}

/// Nearest centroid per point; ties go to the lower cluster index.
fn assign(points: &[[f64; 2]], centroids: &[[f64; 2]]) -> Vec<usize> {
    points
        .iter()
        .map(|p| {
            let mut best = 0;
            let mut best_d = dist2(p, &centroids[0]);
            for (c, centroid) in centroids.iter().enumerate().skip(1) {
                let d = dist2(p, centroid);
                if d < best_d {
                    best = c;
                    best_d = d;
                }
            }
            best
        })
        .collect()
}

/// Gives every empty cluster the point farthest from its own centroid,
/// taken from a cluster that has more than one member.
fn repair_empty(points: &[[f64; 2]], labels: &mut [usize], centroids: &mut [[f64; 2]]) {
    let k = centroids.len();
    for c in 0..k {
        let mut sizes = vec![0usize; k];
        for &l in labels.iter() {
            sizes[l] += 1;
        }
        if sizes[c] > 0 {
            continue;
        }
        let donor = (0..points.len())
            .filter(|&i| sizes[labels[i]] > 1)
            .max_by(|&a, &b| {
                let da = dist2(&points[a], &centroids[labels[a]]);
                let db = dist2(&points[b], &centroids[labels[b]]);
                da.total_cmp(&db).then(b.cmp(&a))
            })
            .expect("k <= n leaves a cluster with spare members");
        labels[donor] = c;
        centroids[c] = points[donor];
    }
}

fn means(points: &[[f64; 2]], labels: &[usize], k: usize) -> Vec<[f64; 2]> {
    let mut sums = vec![[0.0, 0.0]; k];
    let mut counts = vec![0usize; k];
    for (p, &l) in points.iter().zip(labels) {
        sums[l][0] += p[0];
        sums[l][1] += p[1];
        counts[l] += 1;
    }
    sums.iter()
        .zip(&counts)
        .map(|(s, &c)| [s[0] / c as f64, s[1] / c as f64])
        .collect()
}

fn inertia(points: &[[f64; 2]], labels: &[usize], centroids: &[[f64; 2]]) -> f64 {
    points
        .iter()
        .zip(labels)
        .map(|(p, &l)| dist2(p, &centroids[l]))
        .sum()
}
