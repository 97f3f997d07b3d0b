use super::BvpError;

/// Strictly increasing set of nodes covering `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    nodes: Vec<f64>,
}

impl Mesh {
    pub fn new(nodes: Vec<f64>) -> Result<Self, BvpError> {
        if nodes.len() < 2 {
            return Err(BvpError::InvalidMesh("a mesh needs at least two nodes".into()));
        }
        if nodes.iter().any(|x| !x.is_finite()) {
            return Err(BvpError::InvalidMesh("mesh nodes must be finite".into()));
        }
        if let Some(w) = nodes.windows(2).find(|w| w[1] <= w[0]) {
            return Err(BvpError::InvalidMesh(format!(
                "nodes are not strictly increasing ({} followed by {})",
                w[0], w[1]
            )));
        }
        Ok(Self { nodes })
    }

    /// `count` equally spaced nodes on `[a, b]`.
    pub fn uniform(a: f64, b: f64, count: usize) -> Result<Self, BvpError> {
        if count < 2 || !(b > a) {
            return Err(BvpError::InvalidMesh(format!(
                "cannot build a uniform mesh of {count} nodes on [{a}, {b}]"
            )));
        }
        let h = (b - a) / (count - 1) as f64;
        let mut nodes: Vec<f64> = (0..count).map(|i| a + h * i as f64).collect();
        nodes[count - 1] = b;
        Self::new(nodes)
    }

    /// Uniform mesh with the pinned coordinates inserted as extra nodes.
    pub fn uniform_with_pinned(a: f64, b: f64, count: usize, pinned: &[f64]) -> Result<Self, BvpError> {
        let base = Self::uniform(a, b, count)?;
        base.with_pinned(pinned)
    }

    /// Inserts every pinned coordinate in `(a, b)` that is not already a node.
    pub fn with_pinned(&self, pinned: &[f64]) -> Result<Self, BvpError> {
        let mut nodes = self.nodes.clone();
        for &p in pinned {
            if p <= self.a() || p >= self.b() {
                continue;
            }
            let pos = nodes.partition_point(|&x| x < p);
            if nodes[pos] != p {
                nodes.insert(pos, p);
            }
        }
        Self::new(nodes)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn a(&self) -> f64 {
        self.nodes[0]
    }

    pub fn b(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn intervals(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a() && x <= self.b()
    }

    /// Index of the interval `[x_i, x_{i+1})` holding `x`; the last interval is closed.
    pub fn locate(&self, x: f64) -> usize {
        let i = self.nodes.partition_point(|&n| n <= x);
        i.saturating_sub(1).min(self.intervals() - 1)
    }

    /// Number of nodes falling inside `[lo, hi]`.
    pub fn count_in(&self, lo: f64, hi: f64) -> usize {
        self.nodes.iter().filter(|&&x| x >= lo && x <= hi).count()
    }

    pub fn is_pinned_node(&self, x: f64, pinned: &[f64]) -> bool {
        pinned.iter().any(|&p| p == x)
    }

    /// Splits every interval in half.
    pub fn bisected(&self) -> Self {
        let mut nodes = Vec::with_capacity(2 * self.nodes.len() - 1);
        for w in self.nodes.windows(2) {
            nodes.push(w[0]);
            nodes.push(0.5 * (w[0] + w[1]));
        }
        nodes.push(self.b());
        Self { nodes }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_monotone_nodes() {
        assert!(Mesh::new(vec![0.0, 0.5, 0.5, 1.0]).is_err());
        assert!(Mesh::new(vec![0.0]).is_err());
        assert!(Mesh::new(vec![0.0, f64::NAN]).is_err());
    }

    #[test]
    fn pinned_nodes_are_inserted_once() {
        let m = Mesh::uniform_with_pinned(0.0, 1.0, 5, &[0.25, 0.3, 1.0]).unwrap();
        assert_eq!(m.nodes(), &[0.0, 0.25, 0.3, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn locate_uses_half_open_intervals() {
        let m = Mesh::uniform(0.0, 1.0, 5).unwrap();
        assert_eq!(m.locate(0.0), 0);
        assert_eq!(m.locate(0.25), 1);
        assert_eq!(m.locate(0.2499), 0);
        assert_eq!(m.locate(1.0), 3);
    }

    #[test]
    fn bisection_doubles_intervals() {
        let m = Mesh::uniform(-1.0, 1.0, 3).unwrap().bisected();
        assert_eq!(m.nodes(), &[-1.0, -0.5, 0.0, 0.5, 1.0]);
    }
}
