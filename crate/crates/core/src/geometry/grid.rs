use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::circle::CircleGrid;
use super::sphere::{PolarScheme, SphereRule};
use crate::error::{Error, Result};
use crate::quaternion::{ImaginaryUnit, Quaternion};
use crate::sum::QuatSum;

/// Self-describing grid parameters, written next to every sampled function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_polar: usize,
    pub n_azimuth: usize,
    pub n_t: usize,
    pub scheme: PolarScheme,
    pub pole: [f64; 3],
}

impl GridSpec {
    pub const DEFAULT_N_POLAR: usize = 48;
    pub const DEFAULT_N_AZIMUTH: usize = 96;
    pub const DEFAULT_N_T: usize = 256;

    pub fn new(n_polar: usize, n_azimuth: usize, n_t: usize) -> Self {
        Self { n_polar, n_azimuth, n_t, scheme: PolarScheme::GaussLegendre, pole: [0.0, 0.0, 1.0] }
    }

    pub fn with_pole(mut self, pole: ImaginaryUnit) -> Self {
        self.pole = pole.coords();
        self
    }

    pub fn build(&self) -> Result<BoundaryGrid> {
        let pole = ImaginaryUnit::new(self.pole[0], self.pole[1], self.pole[2])?;
        let sphere = SphereRule::build(self.n_polar, self.n_azimuth, self.scheme, pole)?;
        Ok(BoundaryGrid::new(sphere, CircleGrid::new(self.n_t)?))
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::new(Self::DEFAULT_N_POLAR, Self::DEFAULT_N_AZIMUTH, Self::DEFAULT_N_T)
    }
}

/// Product of a sphere rule and a circle grid: the measure `dσ(I) dt/(2π)`.
#[derive(Clone, Debug)]
pub struct BoundaryGrid {
    sphere: SphereRule,
    circle: CircleGrid,
}

impl BoundaryGrid {
    pub fn new(sphere: SphereRule, circle: CircleGrid) -> Self {
        Self { sphere, circle }
    }

    /// Gauss–Legendre sphere rule with pole `k` times the uniform circle grid.
    pub fn standard(n_polar: usize, n_azimuth: usize, n_t: usize) -> Result<Self> {
        GridSpec::new(n_polar, n_azimuth, n_t).build()
    }

    /// Same grid with the sphere rule's pole moved to `pole`.
    pub fn with_pole(&self, pole: ImaginaryUnit) -> Self {
        Self { sphere: self.sphere.with_pole(pole), circle: self.circle.clone() }
    }

    pub fn sphere(&self) -> &SphereRule {
        &self.sphere
    }

    pub fn circle(&self) -> &CircleGrid {
        &self.circle
    }

    pub fn n_nodes(&self) -> usize {
        self.sphere.len()
    }

    pub fn n_t(&self) -> usize {
        self.circle.len()
    }

    pub fn len(&self) -> usize {
        self.sphere.len() * self.circle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, node: usize, t_idx: usize) -> usize {
        node * self.circle.len() + t_idx
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec {
            n_polar: self.sphere.n_polar(),
            n_azimuth: self.sphere.n_azimuth(),
            n_t: self.circle.len(),
            scheme: self.sphere.scheme(),
            pole: self.sphere.pole().coords(),
        }
    }

    /// `e^{Jt}` at a grid point, from the reflection-exact tables.
    #[inline]
    pub fn point(&self, node: usize, t_idx: usize) -> Quaternion {
        let j = self.sphere.nodes()[node];
        let s = self.circle.sin_at(t_idx);
        Quaternion::new(self.circle.cos_at(t_idx), j.x() * s, j.y() * s, j.z() * s)
    }

    /// Index pair representing the same boundary point: `(-J, 2π - t)`.
    pub fn mirror(&self, node: usize, t_idx: usize) -> Result<(usize, usize)> {
        let anti = self.sphere.antipode().ok_or(Error::NotAntipodal)?;
        Ok((anti[node], self.circle.reflect(t_idx)))
    }
}

/// A quaternion-valued function on the boundary, given through its
/// parametrization `(I, t) ↦ f(e^{It})`.
pub trait BoundaryFunction: Sync {
    fn value(&self, axis: &ImaginaryUnit, t: f64) -> Quaternion;
}

impl<F> BoundaryFunction for F
where
    F: Fn(&ImaginaryUnit, f64) -> Quaternion + Sync,
{
    fn value(&self, axis: &ImaginaryUnit, t: f64) -> Quaternion {
        self(axis, t)
    }
}

/// Values of a function on every `(sphere node, circle node)` pair.
#[derive(Clone, Debug)]
pub struct SampledFunction {
    grid: Arc<BoundaryGrid>,
    values: Vec<Quaternion>,
}

impl SampledFunction {
    pub fn from_values(grid: Arc<BoundaryGrid>, values: Vec<Quaternion>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Arc<BoundaryGrid>) -> Self {
        let values = vec![Quaternion::ZERO; grid.len()];
        Self { grid, values }
    }

    /// Samples `f(J, t_k)` at every grid point.
    pub fn sample<F: BoundaryFunction + ?Sized>(grid: Arc<BoundaryGrid>, f: &F) -> Self {
        let n_t = grid.n_t();
        let values = (0..grid.len())
            .into_par_iter()
            .map(|idx| {
                let (node, k) = (idx / n_t, idx % n_t);
                f.value(&grid.sphere().nodes()[node], grid.circle().node(k))
            })
            .collect();
        Self { grid, values }
    }

    /// Samples a function of the boundary point `q = e^{Jt}` itself. The result
    /// is well defined on the boundary by construction, bit for bit.
    pub fn from_point_fn<F>(grid: Arc<BoundaryGrid>, f: F) -> Self
    where
        F: Fn(Quaternion) -> Quaternion + Sync,
    {
        let n_t = grid.n_t();
        let values = (0..grid.len())
            .into_par_iter()
            .map(|idx| f(grid.point(idx / n_t, idx % n_t)))
            .collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<BoundaryGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Quaternion] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Quaternion] {
        &mut self.values
    }

    #[inline]
    pub fn at(&self, node: usize, t_idx: usize) -> Quaternion {
        self.values[self.grid.index(node, t_idx)]
    }

    /// Samples along the slice of one sphere node.
    pub fn slice(&self, node: usize) -> &[Quaternion] {
        let n_t = self.grid.n_t();
        &self.values[node * n_t..(node + 1) * n_t]
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || self.grid.spec() == other.grid.spec()
    }

    pub fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn map<F: Fn(Quaternion) -> Quaternion + Sync>(&self, f: F) -> Self {
        Self { grid: self.grid.clone(), values: self.values.par_iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_with<F>(&self, other: &Self, f: F) -> Result<Self>
    where
        F: Fn(Quaternion, Quaternion) -> Quaternion + Sync,
    {
        self.check_same_grid(other)?;
        let values = self.values.par_iter().zip(other.values.par_iter()).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { grid: self.grid.clone(), values })
    }

    /// `φ · q` (right scalar multiplication).
    pub fn right_mul(&self, q: Quaternion) -> Self {
        self.map(|v| v * q)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `∫ φ dΣ` by the product rule.
    pub fn integrate(&self) -> Quaternion {
        integrate_boundary(self)
    }

    /// Moments at one circle node: `(∫ φ(e^{Jt}) dσ(J), ∫ J φ(e^{Jt}) dσ(J))`.
    pub fn sphere_moments_at(&self, t_idx: usize) -> (Quaternion, Quaternion) {
        let rule = self.grid.sphere();
        let mut m0 = QuatSum::default();
        let mut m1 = QuatSum::default();
        for (node, (j, &w)) in rule.nodes().iter().zip(rule.weights()).enumerate() {
            let v = self.at(node, t_idx) * w;
            m0.add(v);
            m1.add(j.as_quaternion() * v);
        }
        (m0.value(), m1.value())
    }

    /// Sphere moments for every circle node. Each block of circle nodes is
    /// swept node by node, so every sum still runs in sphere-node order.
    pub fn sphere_moments(&self) -> (Vec<Quaternion>, Vec<Quaternion>) {
        const BLOCK: usize = 16;
        let n_t = self.grid.n_t();
        let rule = self.grid.sphere();
        let blocks: Vec<(Vec<Quaternion>, Vec<Quaternion>)> = (0..n_t)
            .step_by(BLOCK)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|start| {
                let end = (start + BLOCK).min(n_t);
                let mut m0 = vec![QuatSum::default(); end - start];
                let mut m1 = vec![QuatSum::default(); end - start];
                for (node, (j, &w)) in rule.nodes().iter().zip(rule.weights()).enumerate() {
                    let jq = j.as_quaternion();
                    let row = &self.slice(node)[start..end];
                    for (i, v) in row.iter().enumerate() {
                        let v = *v * w;
                        m0[i].add(v);
                        m1[i].add(jq * v);
                    }
                }
                (m0.iter().map(QuatSum::value).collect(), m1.iter().map(QuatSum::value).collect())
            })
            .collect();
        let mut m0 = Vec::with_capacity(n_t);
        let mut m1 = Vec::with_capacity(n_t);
        for (a, b) in blocks {
            m0.extend(a);
            m1.extend(b);
        }
        (m0, m1)
    }
}

/// `∫ φ dΣ`: circle trapezoid per node, then the sphere rule, in fixed order.
pub fn integrate_boundary(phi: &SampledFunction) -> Quaternion {
    let grid = phi.grid();
    let rule = grid.sphere();
    let n_t = grid.n_t() as f64;
    let per_node: Vec<Quaternion> = (0..grid.n_nodes())
        .into_par_iter()
        .map(|node| crate::sum::qsum(phi.slice(node).iter().copied()) / n_t)
        .collect();
    let mut acc = QuatSum::default();
    for (v, &w) in per_node.iter().zip(rule.weights()) {
        acc.add(*v * w);
    }
    acc.value()
}

/// Outcome of [`validate_well_defined`]: the largest mismatch between the two
/// parametrizations `(J, t)` and `(-J, 2π - t)` of a boundary point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WellDefinedness {
    pub defect: f64,
    pub node: usize,
    pub t_idx: usize,
    pub pair_node: usize,
    pub pair_t_idx: usize,
}

impl WellDefinedness {
    pub fn ensure(&self, tol: f64) -> Result<()> {
        if self.defect <= tol {
            Ok(())
        } else {
            Err(Error::IllDefined {
                defect: self.defect,
                node: self.node,
                t_idx: self.t_idx,
                pair_node: self.pair_node,
                pair_t_idx: self.pair_t_idx,
            })
        }
    }
}

/// `max |φ(J, t) - φ(-J, 2π - t)|` over the grid, with the worst pair.
pub fn validate_well_defined(phi: &SampledFunction) -> Result<WellDefinedness> {
    let grid = phi.grid();
    let anti = grid.sphere().antipode().ok_or(Error::NotAntipodal)?;
    let n_t = grid.n_t();
    let worst = (0..grid.n_nodes())
        .into_par_iter()
        .map(|node| {
            let mut best = WellDefinedness { defect: 0.0, node, t_idx: 0, pair_node: anti[node], pair_t_idx: 0 };
            for k in 0..n_t {
                let r = grid.circle().reflect(k);
                let d = (phi.at(node, k) - phi.at(anti[node], r)).norm();
                if d > best.defect {
                    best = WellDefinedness { defect: d, node, t_idx: k, pair_node: anti[node], pair_t_idx: r };
                }
            }
            best
        })
        .reduce_with(|a, b| if b.defect > a.defect || (b.defect == a.defect && b.node < a.node) { b } else { a })
        .expect("non-empty grid");
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn small_grid() -> Arc<BoundaryGrid> {
        Arc::new(BoundaryGrid::standard(8, 16, 32).unwrap())
    }

    fn sgn(x: f64) -> f64 {
        if x.abs() < 1e-12 {
            0.0
        } else {
            x.signum()
        }
    }

    #[test]
    fn product_weights_and_examples() {
        let grid = Arc::new(BoundaryGrid::standard(48, 96, 256).unwrap());
        let one = SampledFunction::sample(grid.clone(), &|_: &ImaginaryUnit, _t: f64| Quaternion::ONE);
        assert!((one.integrate() - Quaternion::ONE).norm() < 1e-14);
        let cos = SampledFunction::sample(grid.clone(), &|_: &ImaginaryUnit, t: f64| Quaternion::real(t.cos()));
        assert!(cos.integrate().norm() < 1e-15);
        let cos2 = SampledFunction::from_point_fn(grid, |q| Quaternion::real(q.w * q.w));
        assert!((cos2.integrate().w - 0.5).abs() < 1e-12);
    }

    #[test]
    fn right_linearity_of_integral() {
        let grid = small_grid();
        let f = SampledFunction::from_point_fn(grid, |q| q * q + Quaternion::new(0.0, q.x * q.z, 1.0, q.w));
        let q0 = Quaternion::new(0.3, -1.2, 0.4, 2.0);
        let lhs = f.right_mul(q0).integrate();
        let rhs = f.integrate() * q0;
        assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn point_functions_are_well_defined_exactly() {
        let grid = small_grid();
        let f = SampledFunction::from_point_fn(grid, |q| q * q * Quaternion::J + Quaternion::real(q.x * q.y));
        assert_eq!(validate_well_defined(&f).unwrap().defect, 0.0);
    }

    #[test]
    fn axis_field_has_defect_two() {
        let grid = small_grid();
        let f = SampledFunction::sample(grid, &|j: &ImaginaryUnit, _t: f64| j.as_quaternion());
        let report = validate_well_defined(&f).unwrap();
        assert!((report.defect - 2.0).abs() < 1e-15);
        assert!(report.ensure(1e-9).is_err());
    }

    #[test]
    fn odd_axis_field_is_well_defined() {
        let grid = small_grid();
        let f = SampledFunction::sample(grid, &|j: &ImaginaryUnit, t: f64| j.as_quaternion() * sgn(t.sin()));
        assert!(validate_well_defined(&f).unwrap().defect < 1e-15);
    }

    #[test]
    fn graded_rules_cannot_be_validated() {
        let sphere = SphereRule::graded(6, 8, 3, ImaginaryUnit::K).unwrap();
        let grid = Arc::new(BoundaryGrid::new(sphere, CircleGrid::new(8).unwrap()));
        let f = SampledFunction::zeros(grid);
        assert!(matches!(validate_well_defined(&f), Err(Error::NotAntipodal)));
    }

    #[test]
    fn moments_of_axis_field() {
        let grid = small_grid();
        let f = SampledFunction::sample(grid.clone(), &|j: &ImaginaryUnit, t: f64| j.as_quaternion() * sgn(t.sin()));
        let k = grid.circle().nearest(FRAC_PI_2);
        let (m0, m1) = f.sphere_moments_at(k);
        assert!(m0.norm() < 1e-15);
        assert!((m1 + Quaternion::ONE).norm() < 1e-14);
    }
}
