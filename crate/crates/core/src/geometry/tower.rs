use serde::{Deserialize, Serialize};

use crate::algebra::{ExactMatrix, Rational};

use super::GeometryError;

/// `X = P^{n_1} x ... x P^{n_m}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbientSpace {
    factor_dims: Vec<usize>,
}

impl AmbientSpace {
    pub fn new(factor_dims: Vec<usize>) -> Result<Self, GeometryError> {
        if factor_dims.is_empty() {
            return Err(GeometryError::EmptyAmbient);
        }
        if factor_dims.contains(&0) {
            return Err(GeometryError::ZeroDimensionalFactor);
        }
        Ok(AmbientSpace { factor_dims })
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn num_factors(&self) -> usize {
        self.factor_dims.len()
    }

    /// `dim X = sum n_k`.
    pub fn dim(&self) -> usize {
        self.factor_dims.iter().sum()
    }

    /// Factor owning global affine coordinate `c` and its position inside that factor.
    pub fn affine_slot(&self, c: usize) -> Option<(usize, usize)> {
        let mut rest = c;
        for (k, &n) in self.factor_dims.iter().enumerate() {
            if rest < n {
                return Some((k, rest));
            }
            rest -= n;
        }
        None
    }

    /// First global affine index of factor `k`.
    pub fn affine_offset(&self, k: usize) -> usize {
        self.factor_dims[..k].iter().sum()
    }
}

/// A product of linear subspaces, one per factor, each cut out by linear forms.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearCenter {
    equations: Vec<Vec<Vec<Rational>>>,
    factor_dims: Vec<usize>,
}

impl LinearCenter {
    pub fn equations(&self) -> &[Vec<Vec<Rational>>] {
        &self.equations
    }

    /// Equations of factor `k`.
    pub fn factor_equations(&self, k: usize) -> &[Vec<Rational>] {
        &self.equations[k]
    }

    /// Projective dimension of the subspace in factor `k`.
    pub fn factor_dim(&self, k: usize) -> usize {
        self.factor_dims[k]
    }

    pub fn dim(&self) -> usize {
        self.factor_dims.iter().sum()
    }

    pub fn is_point(&self) -> bool {
        self.dim() == 0
    }

    /// Spanning vectors of the subspace in factor `k` (a kernel basis of its equations).
    pub fn factor_span(&self, k: usize, n_k: usize) -> Vec<Vec<Rational>> {
        ExactMatrix::from_rows(n_k + 1, self.equations[k].clone()).kernel_basis()
    }

    /// Homogeneous coordinates of a point center, normalized so the first
    /// nonzero coordinate of every factor is 1.
    pub fn point_coords(&self, ambient: &AmbientSpace) -> Option<Vec<Vec<Rational>>> {
        if !self.is_point() {
            return None;
        }
        Some(
            ambient
                .factor_dims()
                .iter()
                .enumerate()
                .map(|(k, &n)| {
                    let v = self.factor_span(k, n).pop().expect("one-dimensional span");
                    normalize_first_nonzero(v)
                })
                .collect(),
        )
    }
}

/// Scales a nonzero vector so its first nonzero entry is 1.
pub fn normalize_first_nonzero(v: Vec<Rational>) -> Vec<Rational> {
    use num_traits::Zero;
    match v.iter().find(|x| !x.is_zero()) {
        None => v,
        Some(p) => {
            let inv = p.recip();
            v.into_iter().map(|x| x * inv.clone()).collect()
        }
    }
}

/// A point on the exceptional divisor over a point-like parent, given in the
/// affine chart where global coordinate `chart` is the divisor coordinate.
/// `direction` holds the values of `z_j / z_chart` for the other coordinates,
/// in increasing order of `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct InfinitesimalCenter {
    pub parent: usize,
    pub chart: usize,
    pub direction: Vec<Rational>,
}

impl InfinitesimalCenter {
    /// Direction value for global coordinate `j != chart`.
    pub fn direction_at(&self, j: usize) -> &Rational {
        assert_ne!(j, self.chart);
        &self.direction[if j < self.chart { j } else { j - 1 }]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CenterKind {
    Linear(LinearCenter),
    Infinitesimal(InfinitesimalCenter),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Center {
    pub index: usize,
    pub kind: CenterKind,
    /// 0 for linear centers, parent level + 1 otherwise.
    pub level: usize,
    /// Number of strict ancestors.
    pub m: usize,
    pub children: Vec<usize>,
}

impl Center {
    pub fn parent(&self) -> Option<usize> {
        match &self.kind {
            CenterKind::Linear(_) => None,
            CenterKind::Infinitesimal(inf) => Some(inf.parent),
        }
    }

    pub fn as_linear(&self) -> Option<&LinearCenter> {
        match &self.kind {
            CenterKind::Linear(l) => Some(l),
            CenterKind::Infinitesimal(_) => None,
        }
    }

    pub fn as_infinitesimal(&self) -> Option<&InfinitesimalCenter> {
        match &self.kind {
            CenterKind::Infinitesimal(i) => Some(i),
            CenterKind::Linear(_) => None,
        }
    }

    pub fn is_point_like(&self) -> bool {
        match &self.kind {
            CenterKind::Linear(l) => l.is_point(),
            CenterKind::Infinitesimal(_) => true,
        }
    }
}

/// Input description of a center.
#[derive(Clone, Debug, PartialEq)]
pub enum CenterSpec {
    /// Per factor, linear forms (coefficient vectors of length `n_k + 1`);
    /// an empty list keeps the whole factor.
    Linear { equations: Vec<Vec<Vec<Rational>>> },
    /// A point, given by homogeneous coordinates per factor.
    Point { coords: Vec<Vec<Rational>> },
    Infinitesimal {
        parent: usize,
        chart: usize,
        direction: Vec<Rational>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TowerSpec {
    pub ambient: Vec<usize>,
    pub centers: Vec<CenterSpec>,
}

/// The ambient space with its ordered blowup centers.
#[derive(Clone, Debug, PartialEq)]
pub struct BlowupTower {
    ambient: AmbientSpace,
    centers: Vec<Center>,
}

/// Linear forms cutting out the point `coords` (the 2x2 minors against its pivot).
fn point_equations(ambient: &AmbientSpace, coords: &[Vec<Rational>]) -> Result<Vec<Vec<Vec<Rational>>>, GeometryError> {
    use num_traits::Zero;
    if coords.len() != ambient.num_factors() {
        return Err(GeometryError::FactorOutOfRange {
            given: coords.len(),
            factors: ambient.num_factors(),
        });
    }
    coords
        .iter()
        .zip(ambient.factor_dims())
        .enumerate()
        .map(|(k, (q, &n))| {
            if q.len() != n + 1 {
                return Err(GeometryError::BadFormLength { factor: k, expected: n + 1, got: q.len() });
            }
            let piv = q.iter().position(|x| !x.is_zero()).ok_or(GeometryError::ZeroPoint { factor: k })?;
            Ok((0..=n)
                .filter(|&j| j != piv)
                .map(|j| {
                    let mut row = vec![Rational::zero(); n + 1];
                    row[j] = q[piv].clone();
                    row[piv] = -q[j].clone();
                    row
                })
                .collect())
        })
        .collect()
}

fn linear_center(ambient: &AmbientSpace, equations: Vec<Vec<Vec<Rational>>>) -> Result<LinearCenter, GeometryError> {
    if equations.len() > ambient.num_factors() {
        return Err(GeometryError::FactorOutOfRange {
            given: equations.len(),
            factors: ambient.num_factors(),
        });
    }
    let mut equations = equations;
    equations.resize(ambient.num_factors(), Vec::new());
    let mut factor_dims = Vec::with_capacity(equations.len());
    for (k, (eqs, &n)) in equations.iter().zip(ambient.factor_dims()).enumerate() {
        if let Some(bad) = eqs.iter().find(|e| e.len() != n + 1) {
            return Err(GeometryError::BadFormLength { factor: k, expected: n + 1, got: bad.len() });
        }
        let rank = ExactMatrix::from_rows(n + 1, eqs.clone()).rank();
        if rank > n {
            return Err(GeometryError::EmptyCenter { factor: k });
        }
        factor_dims.push(n - rank);
    }
    Ok(LinearCenter { equations, factor_dims })
}

/// Validates a tower description: builds linear centers, checks parent
/// references, and derives levels, `m_i` and the child adjacency.
pub fn build_tower(spec: &TowerSpec) -> Result<BlowupTower, GeometryError> {
    let ambient = AmbientSpace::new(spec.ambient.clone())?;
    let n = spec.centers.len();
    let parents: Vec<Option<usize>> = spec
        .centers
        .iter()
        .map(|c| match c {
            CenterSpec::Infinitesimal { parent, .. } => Some(*parent),
            _ => None,
        })
        .collect();

    for (i, p) in parents.iter().enumerate() {
        if let Some(p) = *p {
            if p >= n {
                return Err(GeometryError::ParentOutOfRange { center: i, parent: p });
            }
        }
    }
    // cycles before ordering, so a loop is reported as such
    for start in 0..n {
        let mut seen = vec![false; n];
        let mut cur = Some(start);
        while let Some(c) = cur {
            if seen[c] {
                return Err(GeometryError::CyclicParent { center: start });
            }
            seen[c] = true;
            cur = parents[c];
        }
    }
    for (i, p) in parents.iter().enumerate() {
        if let Some(p) = *p {
            if p > i {
                return Err(GeometryError::ParentAfterChild { center: i, parent: p });
            }
        }
    }

    let dim = ambient.dim();
    let mut centers: Vec<Center> = Vec::with_capacity(n);
    for (i, cs) in spec.centers.iter().enumerate() {
        let (kind, level) = match cs {
            CenterSpec::Linear { equations } => {
                let l = linear_center(&ambient, equations.clone())?;
                if l.dim() == dim {
                    return Err(GeometryError::WholeSpaceCenter { center: i });
                }
                (CenterKind::Linear(l), 0)
            }
            CenterSpec::Point { coords } => {
                let eqs = point_equations(&ambient, coords)?;
                (CenterKind::Linear(linear_center(&ambient, eqs)?), 0)
            }
            CenterSpec::Infinitesimal { parent, chart, direction } => {
                let parent_center = &centers[*parent];
                if !parent_center.is_point_like() {
                    return Err(GeometryError::ParentNotPoint { center: i, parent: *parent });
                }
                if *chart >= dim {
                    return Err(GeometryError::ChartOutOfRange { center: i, chart: *chart, dim });
                }
                if direction.len() + 1 != dim {
                    return Err(GeometryError::DirectionLength {
                        center: i,
                        expected: dim - 1,
                        got: direction.len(),
                    });
                }
                (
                    CenterKind::Infinitesimal(InfinitesimalCenter {
                        parent: *parent,
                        chart: *chart,
                        direction: direction.clone(),
                    }),
                    parent_center.level + 1,
                )
            }
        };
        if let Some(p) = parents[i] {
            centers[p].children.push(i);
        }
        centers.push(Center { index: i, kind, level, m: level, children: Vec::new() });
    }
    Ok(BlowupTower { ambient, centers })
}

impl BlowupTower {
    pub fn ambient(&self) -> &AmbientSpace {
        &self.ambient
    }

    pub fn centers(&self) -> &[Center] {
        &self.centers
    }

    pub fn center(&self, i: usize) -> &Center {
        &self.centers[i]
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn m_values(&self) -> Vec<usize> {
        self.centers.iter().map(|c| c.m).collect()
    }

    /// Level-0 ancestor of center `i` (itself for linear centers).
    pub fn root(&self, i: usize) -> usize {
        let mut c = i;
        while let Some(p) = self.centers[c].parent() {
            c = p;
        }
        c
    }

    /// Infinitesimal centers from just below the root down to `i`.
    pub fn chain(&self, i: usize) -> Vec<&InfinitesimalCenter> {
        let mut out = Vec::new();
        let mut c = i;
        while let Some(inf) = self.centers[c].as_infinitesimal() {
            out.push(inf);
            c = inf.parent;
        }
        out.reverse();
        out
    }

    /// Strict ancestors of `i`, nearest first.
    pub fn ancestors(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut c = i;
        while let Some(p) = self.centers[c].parent() {
            out.push(p);
            c = p;
        }
        out
    }

    /// Dimension of the center in its own blowup stage.
    pub fn center_dim(&self, i: usize) -> usize {
        match &self.centers[i].kind {
            CenterKind::Linear(l) => l.dim(),
            CenterKind::Infinitesimal(_) => 0,
        }
    }

    /// Codimension in its blowup stage; an infinitesimal point has codimension `dim X`.
    pub fn center_codim(&self, i: usize) -> usize {
        self.ambient.dim() - self.center_dim(i)
    }

    /// Whether the images of two level-0 linear centers in `X` meet.
    pub fn linear_centers_meet(&self, a: usize, b: usize) -> Option<bool> {
        let (la, lb) = (self.centers[a].as_linear()?, self.centers[b].as_linear()?);
        Some(self.ambient.factor_dims().iter().enumerate().all(|(k, &n)| {
            let rows: Vec<Vec<Rational>> = la
                .factor_equations(k)
                .iter()
                .chain(lb.factor_equations(k))
                .cloned()
                .collect();
            ExactMatrix::from_rows(n + 1, rows).rank() <= n
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::parse_rational;

    fn r(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn point(coords: &[&[&str]]) -> CenterSpec {
        CenterSpec::Point {
            coords: coords.iter().map(|f| f.iter().map(|x| r(x)).collect()).collect(),
        }
    }

    #[test]
    fn three_points_in_p2() {
        let t = build_tower(&TowerSpec {
            ambient: vec![2],
            centers: vec![
                point(&[&["1", "0", "0"]]),
                point(&[&["0", "1", "0"]]),
                point(&[&["0", "0", "1"]]),
            ],
        })
        .unwrap();
        assert_eq!(t.m_values(), vec![0, 0, 0]);
        assert!(t.centers().iter().all(|c| c.is_point_like()));
        assert_eq!(t.linear_centers_meet(0, 1), Some(false));
        assert_eq!(t.linear_centers_meet(0, 0), Some(true));
    }

    #[test]
    fn infinitesimal_point_over_p3_point() {
        let t = build_tower(&TowerSpec {
            ambient: vec![3],
            centers: vec![
                point(&[&["1", "0", "0", "0"]]),
                CenterSpec::Infinitesimal { parent: 0, chart: 0, direction: vec![r("1"), r("2")] },
            ],
        })
        .unwrap();
        assert_eq!(t.m_values(), vec![0, 1]);
        assert_eq!(t.center(0).children, vec![1]);
        assert_eq!(t.center_codim(1), 3);
        assert_eq!(t.root(1), 0);
        assert_eq!(t.center(1).as_infinitesimal().unwrap().direction_at(2), &r("2"));
    }

    #[test]
    fn infinitesimal_over_line_rejected() {
        let line = CenterSpec::Linear {
            equations: vec![vec![vec![r("0"), r("0"), r("1"), r("0")], vec![r("0"), r("0"), r("0"), r("1")]]],
        };
        let err = build_tower(&TowerSpec {
            ambient: vec![3],
            centers: vec![line, CenterSpec::Infinitesimal { parent: 0, chart: 0, direction: vec![r("0"), r("0")] }],
        })
        .unwrap_err();
        assert_eq!(err, GeometryError::ParentNotPoint { center: 1, parent: 0 });
    }

    #[test]
    fn cyclic_and_out_of_range_parents() {
        let inf = |p| CenterSpec::Infinitesimal { parent: p, chart: 0, direction: vec![r("0")] };
        let err = build_tower(&TowerSpec { ambient: vec![2], centers: vec![inf(1), inf(0)] }).unwrap_err();
        assert!(matches!(err, GeometryError::CyclicParent { .. }));
        let err = build_tower(&TowerSpec { ambient: vec![2], centers: vec![inf(0)] }).unwrap_err();
        assert!(matches!(err, GeometryError::CyclicParent { center: 0 }));
        let err = build_tower(&TowerSpec { ambient: vec![2], centers: vec![inf(4)] }).unwrap_err();
        assert!(matches!(err, GeometryError::ParentOutOfRange { .. }));
    }

    #[test]
    fn factor_index_checks() {
        let err = build_tower(&TowerSpec {
            ambient: vec![1],
            centers: vec![point(&[&["1", "0"], &["1", "0"]])],
        })
        .unwrap_err();
        assert!(matches!(err, GeometryError::FactorOutOfRange { .. }));
        let err = build_tower(&TowerSpec {
            ambient: vec![1],
            centers: vec![CenterSpec::Linear { equations: vec![vec![vec![r("1"), r("0")], vec![r("0"), r("1")]]] }],
        })
        .unwrap_err();
        assert!(matches!(err, GeometryError::EmptyCenter { factor: 0 }));
    }

    #[test]
    fn point_coordinates_round_trip() {
        let t = build_tower(&TowerSpec {
            ambient: vec![1, 2],
            centers: vec![point(&[&["0", "3"], &["2", "4", "6"]])],
        })
        .unwrap();
        let l = t.center(0).as_linear().unwrap();
        assert_eq!(
            l.point_coords(t.ambient()).unwrap(),
            vec![vec![r("0"), r("1")], vec![r("1"), r("2"), r("3")]]
        );
    }
}
