use super::{BvpError, Mesh, OdeSystem};

/// C¹ piecewise-cubic solution of a collocation solve.
///
/// On every interval the cubic interpolates the nodal values and slopes at both
/// ends, which makes it the three-point Lobatto IIIA collocation polynomial of
/// that interval. Coefficients are stored in the local variable `s = x - x_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct CollocationSolution {
    mesh: Mesh,
    dim: usize,
    values: Vec<f64>,
    slopes: Vec<f64>,
    coeffs: Vec<[f64; 4]>,
}

impl CollocationSolution {
    /// Builds the interpolant from nodal values and slopes, both stored node-major.
    pub fn from_nodal(mesh: Mesh, dim: usize, values: Vec<f64>, slopes: Vec<f64>) -> Result<Self, BvpError> {
        let expected = mesh.len() * dim;
        if dim == 0 || values.len() != expected || slopes.len() != expected {
            return Err(BvpError::DimensionMismatch {
                expected,
                found: values.len().min(slopes.len()),
            });
        }
        let mut coeffs = Vec::with_capacity(mesh.intervals() * dim);
        for (i, w) in mesh.nodes().windows(2).enumerate() {
            let h = w[1] - w[0];
            for c in 0..dim {
                let y0 = values[i * dim + c];
                let y1 = values[(i + 1) * dim + c];
                let f0 = slopes[i * dim + c];
                let f1 = slopes[(i + 1) * dim + c];
                let secant = (y1 - y0) / h;
                coeffs.push([y0, f0, (3.0 * secant - 2.0 * f0 - f1) / h, (f0 + f1 - 2.0 * secant) / (h * h)]);
            }
        }
        Ok(Self { mesh, dim, values, slopes, coeffs })
    }

    /// Nodal values `y_i` with slopes `f(x_i, y_i)` taken from the system.
    pub fn from_values<S: OdeSystem + ?Sized>(mesh: Mesh, system: &S, values: Vec<f64>) -> Result<Self, BvpError> {
        let dim = system.dimension();
        if values.len() != mesh.len() * dim {
            return Err(BvpError::DimensionMismatch { expected: mesh.len() * dim, found: values.len() });
        }
        let mut slopes = vec![0.0; values.len()];
        for (i, &x) in mesh.nodes().iter().enumerate() {
            system.rhs(x, &values[i * dim..(i + 1) * dim], &mut slopes[i * dim..(i + 1) * dim]);
        }
        Self::from_nodal(mesh, dim, values, slopes)
    }

    /// Hermite interpolant of a known function and its derivative.
    pub fn from_fn<F>(mesh: Mesh, dim: usize, mut f: F) -> Result<Self, BvpError>
    where
        F: FnMut(f64, &mut [f64], &mut [f64]),
    {
        let n = mesh.len();
        let mut values = vec![0.0; n * dim];
        let mut slopes = vec![0.0; n * dim];
        for (i, &x) in mesh.nodes().iter().enumerate() {
            let (v, s) = (&mut values[i * dim..(i + 1) * dim], &mut slopes[i * dim..(i + 1) * dim]);
            f(x, v, s);
        }
        Self::from_nodal(mesh, dim, values, slopes)
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// Node-major nodal values.
    pub fn nodal_values(&self) -> &[f64] {
        &self.values
    }

    pub fn nodal_slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn node_value(&self, node: usize) -> &[f64] {
        &self.values[node * self.dim..(node + 1) * self.dim]
    }

    /// Value and first derivative at `x`.
    pub fn evaluate(&self, x: f64) -> Result<(Vec<f64>, Vec<f64>), BvpError> {
        let mut value = vec![0.0; self.dim];
        let mut deriv = vec![0.0; self.dim];
        self.evaluate_into(x, &mut value, &mut deriv)?;
        Ok((value, deriv))
    }

    pub fn evaluate_into(&self, x: f64, value: &mut [f64], deriv: &mut [f64]) -> Result<(), BvpError> {
        if !self.mesh.contains(x) {
            return Err(BvpError::OutOfDomain { x, a: self.mesh.a(), b: self.mesh.b() });
        }
        let i = self.mesh.locate(x);
        let nodes = self.mesh.nodes();
        let node = if x == nodes[i] {
            Some(i)
        } else if x == nodes[i + 1] {
            Some(i + 1)
        } else {
            None
        };
        match node {
            Some(k) => {
                value.copy_from_slice(&self.values[k * self.dim..(k + 1) * self.dim]);
                deriv.copy_from_slice(&self.slopes[k * self.dim..(k + 1) * self.dim]);
            }
            None => self.evaluate_polynomial(i, x, value, deriv),
        }
        Ok(())
    }

    /// Evaluates the cubic of interval `interval` at `x` (which may lie outside it).
    pub fn evaluate_on_interval(&self, interval: usize, x: f64) -> (Vec<f64>, Vec<f64>) {
        let mut value = vec![0.0; self.dim];
        let mut deriv = vec![0.0; self.dim];
        self.evaluate_polynomial(interval, x, &mut value, &mut deriv);
        (value, deriv)
    }

    #[inline]
    pub(crate) fn evaluate_polynomial(&self, interval: usize, x: f64, value: &mut [f64], deriv: &mut [f64]) {
        let s = x - self.mesh.nodes()[interval];
        for c in 0..self.dim {
            let [c0, c1, c2, c3] = self.coeffs[interval * self.dim + c];
            value[c] = c0 + s * (c1 + s * (c2 + s * c3));
            deriv[c] = c1 + s * (2.0 * c2 + s * 3.0 * c3);
        }
    }

    /// Mutable access to one interval's cubic coefficients, component by component.
    pub fn interval_coefficients_mut(&mut self, interval: usize) -> &mut [[f64; 4]] {
        &mut self.coeffs[interval * self.dim..(interval + 1) * self.dim]
    }

    /// Samples one component at the given points.
    pub fn sample_component(&self, component: usize, xs: &[f64]) -> Result<(Vec<f64>, Vec<f64>), BvpError> {
        let mut vals = Vec::with_capacity(xs.len());
        let mut ders = Vec::with_capacity(xs.len());
        let mut v = vec![0.0; self.dim];
        let mut d = vec![0.0; self.dim];
        for &x in xs {
            self.evaluate_into(x, &mut v, &mut d)?;
            vals.push(v[component]);
            ders.push(d[component]);
        }
        Ok((vals, ders))
    }

    /// Nodal values of this solution re-sampled on another mesh of the same interval.
    pub fn values_on(&self, mesh: &Mesh) -> Result<Vec<f64>, BvpError> {
        let mut out = vec![0.0; mesh.len() * self.dim];
        let mut d = vec![0.0; self.dim];
        for (i, &x) in mesh.nodes().iter().enumerate() {
            self.evaluate_into(x, &mut out[i * self.dim..(i + 1) * self.dim], &mut d)?;
        }
        Ok(out)
    }
}
