use super::{BvpError, Mesh, SolverOptions};

/// Normalised residual below which two neighbouring intervals may be merged.
pub const COARSEN_THRESHOLD: f64 = 0.01;

/// Refines and coarsens a mesh from normalised interval residuals (1.0 = at tolerance).
///
/// Intervals above tolerance are split at their midpoint. A pair of adjacent
/// intervals that are both below `COARSEN_THRESHOLD` and untouched by refinement
/// lose their shared node, unless that node is pinned.
pub fn adapt_mesh(mesh: &Mesh, residuals: &[f64], options: &SolverOptions, pinned: &[f64]) -> Result<Mesh, BvpError> {
    let intervals = mesh.intervals();
    if residuals.len() != intervals {
        return Err(BvpError::DimensionMismatch { expected: intervals, found: residuals.len() });
    }
    let nodes = mesh.nodes();
    let split: Vec<bool> = residuals.iter().map(|&r| !(r <= 1.0)).collect();
    let mut drop_node = vec![false; nodes.len()];

    let mut i = 0;
    while i + 1 < intervals {
        let shared = nodes[i + 1];
        if !split[i]
            && !split[i + 1]
            && residuals[i] < COARSEN_THRESHOLD
            && residuals[i + 1] < COARSEN_THRESHOLD
            && !mesh.is_pinned_node(shared, pinned)
        {
            drop_node[i + 1] = true;
            i += 2;
        } else {
            i += 1;
        }
    }

    let mut out = Vec::with_capacity(nodes.len() + split.iter().filter(|s| **s).count());
    for k in 0..intervals {
        if !drop_node[k] {
            out.push(nodes[k]);
        }
        if split[k] {
            let mid = 0.5 * (nodes[k] + nodes[k + 1]);
            if mid > nodes[k] && mid < nodes[k + 1] {
                out.push(mid);
            }
        }
    }
    out.push(mesh.b());

    if out.len() > options.max_nodes {
        return Err(BvpError::MeshOverflow { required: out.len(), max_nodes: options.max_nodes });
    }
    Mesh::new(out)
}
