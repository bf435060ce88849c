//! Contact orders of a morphism with the centers of a tower.

use crate::algebra::{gcd_forms, Field, HomPoly, Order, P1Point, Rational, Scalar, TruncatedSeries, UniPoly};
use crate::geometry::{BlowupTower, CenterKind, CurveClass, LinearCenter};

use super::{MorphismError, MorphismP1};

/// Contact of `f` with center `center` at the domain point `point`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContactRecord<S> {
    pub point: P1Point<S>,
    pub center: usize,
    pub order: Order,
}

pub(crate) fn lift_vec<F: Field>(field: &F, v: &[Rational]) -> Result<Vec<F::Elem>, MorphismError> {
    v.iter().map(|x| field.from_rational(x).map_err(MorphismError::from)).collect()
}

/// `sum_j L_j f_j`.
pub(crate) fn compose_form<S: Scalar>(l: &[S], comps: &[HomPoly<S>]) -> HomPoly<S> {
    let d = comps[0].degree();
    l.iter()
        .zip(comps)
        .filter(|(c, _)| !c.is_zero())
        .fold(HomPoly::zero(d), |acc, (c, f)| acc.add(&f.scale(c)))
}

/// The compositions `L o f_k` for every equation of a linear center.
fn center_compositions<F: Field>(
    field: &F,
    f: &MorphismP1<F::Elem>,
    center: &LinearCenter,
) -> Result<Vec<HomPoly<F::Elem>>, MorphismError> {
    let mut out = Vec::new();
    for (k, eqs) in center.equations().iter().enumerate() {
        for l in eqs {
            out.push(compose_form(&lift_vec(field, l)?, f.factor(k)));
        }
    }
    Ok(out)
}

/// Minimum over the center's equations of the order of `L o f` at `p`.
pub fn linear_contact_order<F: Field>(
    field: &F,
    f: &MorphismP1<F::Elem>,
    p: &P1Point<F::Elem>,
    center: &LinearCenter,
) -> Result<Order, MorphismError> {
    Ok(center_compositions(field, f, center)?
        .iter()
        .map(|g| g.valuation_at(p))
        .min()
        .unwrap_or(Order::Infinite))
}

/// Order of contact at `p` with the point `q` (homogeneous coordinates per
/// factor), through the minors `q_piv f_j - q_j f_piv`.
pub fn point_contact_order<S: Scalar>(f: &MorphismP1<S>, p: &P1Point<S>, q: &[Vec<S>]) -> Order {
    let mut best = Order::Infinite;
    for (k, qk) in q.iter().enumerate() {
        let piv = qk.iter().position(|x| !x.is_zero()).expect("nonzero point");
        let comps = f.factor(k);
        for j in (0..qk.len()).filter(|&j| j != piv) {
            let minor = comps[j].scale(&qk[piv]).sub(&comps[piv].scale(&qk[j]));
            best = best.min(minor.valuation_at(p));
        }
    }
    best
}

/// Normalized coordinates of a point center, converted into the field.
pub(crate) fn root_point<F: Field>(
    field: &F,
    tower: &BlowupTower,
    root: usize,
) -> Result<Vec<Vec<F::Elem>>, MorphismError> {
    let l = tower.center(root).as_linear().expect("roots are linear");
    let q = l.point_coords(tower.ambient()).ok_or(MorphismError::NotPointLike(root))?;
    q.iter().map(|qk| lift_vec(field, qk)).collect()
}

/// Pivot (first nonzero coordinate) of every factor of a normalized point.
pub(crate) fn pivots<S: Scalar>(q: &[Vec<S>]) -> Vec<usize> {
    q.iter().map(|qk| qk.iter().position(|x| !x.is_zero()).expect("nonzero point")).collect()
}

/// Affine coordinates at `q` along `f` near `p`: for each factor and each
/// non-pivot index `j`, the series `f_j / f_piv - q_j` to `order` terms.
/// `None` when `f(p)` leaves the chart of `q`.
fn affine_germ<S: Scalar>(
    f: &MorphismP1<S>,
    p: &P1Point<S>,
    q: &[Vec<S>],
    order: usize,
) -> Option<Vec<TruncatedSeries<S>>> {
    let mut out = Vec::new();
    for ((qk, comps), piv) in q.iter().zip(f.factors()).zip(pivots(q)) {
        let den = comps[piv].expand_at(p, order);
        if !den.is_unit() {
            return None;
        }
        for j in (0..qk.len()).filter(|&j| j != piv) {
            let mut z = comps[j].expand_at(p, order).invert_multiply(&den).expect("unit");
            z = z.sub(&TruncatedSeries::one(order).scale(&qk[j]));
            out.push(z);
        }
    }
    Some(out)
}

fn mark_subtree(tower: &BlowupTower, i: usize, value: Order, out: &mut [Order]) {
    out[i] = value;
    for &c in &tower.center(i).children {
        mark_subtree(tower, c, value, out);
    }
}

/// Walks the germ down the infinitesimal centers below `center`; `coords`
/// are local coordinates at the center's point, all vanishing at `p`.
fn descend_series<F: Field>(
    field: &F,
    tower: &BlowupTower,
    center: usize,
    coords: Vec<TruncatedSeries<F::Elem>>,
    out: &mut [Order],
) -> Result<(), MorphismError> {
    let vals: Vec<Option<usize>> = coords.iter().map(|z| z.valuation()).collect();
    let Some(mu) = vals.iter().flatten().min().copied() else {
        mark_subtree(tower, center, Order::Infinite, out);
        return Ok(());
    };
    out[center] = Order::Finite(mu);
    for &child in &tower.center(center).children {
        let inf = tower.center(child).as_infinitesimal().expect("children are infinitesimal");
        if vals[inf.chart] != Some(mu) {
            continue;
        }
        let zc = coords[inf.chart].shift_down(mu);
        let mut next = Vec::with_capacity(coords.len());
        let mut passes = true;
        for (j, z) in coords.iter().enumerate() {
            if j == inf.chart {
                next.push(z.clone());
                continue;
            }
            let w = field.from_rational(inf.direction_at(j))?;
            let y = z.shift_down(mu).invert_multiply(&zc)?;
            let y = y.sub(&TruncatedSeries::one(y.order()).scale(&w));
            passes &= y.valuation() != Some(0);
            next.push(y);
        }
        if passes {
            descend_series(field, tower, child, next, out)?;
        }
    }
    Ok(())
}

/// Contact order of `f` at `p` with every center of the tower. Infinitesimal
/// centers are reached by lifting the germ of `f` at `p` through the charts.
pub fn contacts_at<F: Field>(
    field: &F,
    f: &MorphismP1<F::Elem>,
    tower: &BlowupTower,
    p: &P1Point<F::Elem>,
) -> Result<Vec<Order>, MorphismError> {
    let mut out = vec![Order::Finite(0); tower.len()];
    let max_deg = f.degrees().into_iter().max().unwrap_or(0);
    for c in tower.centers() {
        let CenterKind::Linear(l) = &c.kind else { continue };
        if !l.is_point() || c.children.is_empty() {
            out[c.index] = linear_contact_order(field, f, p, l)?;
            continue;
        }
        let depth = subtree_depth(tower, c.index);
        let order = (depth + 2) * max_deg + 2;
        let q = root_point(field, tower, c.index)?;
        match affine_germ(f, p, &q, order) {
            Some(z) if z.iter().all(|s| s.valuation() != Some(0)) => {
                descend_series(field, tower, c.index, z, &mut out)?
            }
            _ => {}
        }
    }
    Ok(out)
}

fn subtree_depth(tower: &BlowupTower, i: usize) -> usize {
    tower.center(i).children.iter().map(|&c| 1 + subtree_depth(tower, c)).max().unwrap_or(0)
}

/// Contact of `f` at `p` with center `i` (linear or infinitesimal).
pub fn contact_order<F: Field>(
    field: &F,
    f: &MorphismP1<F::Elem>,
    p: &P1Point<F::Elem>,
    tower: &BlowupTower,
    i: usize,
) -> Result<ContactRecord<F::Elem>, MorphismError> {
    let order = match &tower.center(i).kind {
        CenterKind::Linear(l) => linear_contact_order(field, f, p, l)?,
        CenterKind::Infinitesimal(_) => contacts_at(field, f, tower, p)?[i],
    };
    Ok(ContactRecord { point: p.clone(), center: i, order })
}

// ---------------------------------------------------------------------------
// Global route: rational functions in the affine parameter and a refinement of
// the places where the germs pass through a center.

#[derive(Clone, Debug)]
struct RatFn<S> {
    num: UniPoly<S>,
    den: UniPoly<S>,
}

impl<S: Scalar> RatFn<S> {
    fn reduced(num: UniPoly<S>, den: UniPoly<S>) -> Self {
        if num.is_zero() {
            return RatFn { num, den: UniPoly::one() };
        }
        let g = num.gcd(&den);
        RatFn { num: num.div_exact(&g).unwrap(), den: den.div_exact(&g).unwrap() }
    }

    /// Valuation at every root of the squarefree `place`; `None` for zero.
    fn valuation(&self, place: &UniPoly<S>) -> Option<i64> {
        let n = self.num.multiplicity(place)? as i64;
        Some(n - self.den.multiplicity(place).unwrap() as i64)
    }
}

/// Splits a squarefree `place` into pieces on whose roots `poly` has constant multiplicity.
fn split_place<S: Scalar>(place: &UniPoly<S>, poly: &UniPoly<S>) -> Vec<UniPoly<S>> {
    if poly.is_zero() {
        return vec![place.clone()];
    }
    let mut pieces = Vec::new();
    let mut rest = place.clone();
    let mut p = poly.clone();
    while !rest.is_constant() {
        let g = rest.gcd(&p);
        let outside = rest.div_exact(&g).unwrap();
        if !outside.is_constant() {
            pieces.push(outside.monic());
        }
        if g.is_constant() {
            break;
        }
        p = p.div_exact(&g).unwrap();
        rest = g;
    }
    pieces
}

fn refine<S: Scalar>(place: &UniPoly<S>, polys: &[&UniPoly<S>]) -> Vec<UniPoly<S>> {
    polys.iter().fold(vec![place.clone()], |pieces, poly| {
        pieces.iter().flat_map(|b| split_place(b, poly)).collect()
    })
}

fn descend_global<F: Field>(
    field: &F,
    tower: &BlowupTower,
    center: usize,
    coords: &[RatFn<F::Elem>],
    place: &UniPoly<F::Elem>,
    acc: &mut [i64],
) -> Result<(), MorphismError> {
    let polys: Vec<&UniPoly<F::Elem>> = coords.iter().flat_map(|z| [&z.num, &z.den]).collect();
    for b in refine(place, &polys) {
        let vals: Vec<Option<i64>> = coords.iter().map(|z| z.valuation(&b)).collect();
        if vals.iter().flatten().any(|&v| v <= 0) {
            continue;
        }
        let Some(mu) = vals.iter().flatten().min().copied() else {
            return Err(MorphismError::ImageInsideCenter(center));
        };
        acc[center] += mu * b.degree().unwrap() as i64;
        for &child in &tower.center(center).children {
            let inf = tower.center(child).as_infinitesimal().expect("children are infinitesimal");
            if vals[inf.chart] != Some(mu) {
                continue;
            }
            let zc = &coords[inf.chart];
            let mut next = Vec::with_capacity(coords.len());
            for (j, z) in coords.iter().enumerate() {
                if j == inf.chart {
                    next.push(zc.clone());
                    continue;
                }
                // z_j / z_c - w_j
                let w = field.from_rational(inf.direction_at(j))?;
                let num = z.num.mul(&zc.den).sub(&zc.num.mul(&z.den).scale(&w));
                next.push(RatFn::reduced(num, z.den.mul(&zc.num)));
            }
            descend_global(field, tower, child, &next, &b, acc)?;
        }
    }
    Ok(())
}

/// Contacts with the centers below a point center, summed over the finite
/// domain points `[1 : u]`.
fn finite_tree_contacts<F: Field>(
    field: &F,
    f: &MorphismP1<F::Elem>,
    tower: &BlowupTower,
    root: usize,
    acc: &mut [i64],
) -> Result<(), MorphismError> {
    let q = root_point(field, tower, root)?;
    let mut coords = Vec::new();
    for ((qk, comps), piv) in q.iter().zip(f.factors()).zip(pivots(&q)) {
        let den = comps[piv].dehomogenize();
        for j in (0..qk.len()).filter(|&j| j != piv) {
            let num = comps[j].dehomogenize().sub(&den.scale(&qk[j]));
            coords.push(RatFn::reduced(num, den.clone()));
        }
    }
    let g = coords.iter().fold(UniPoly::zero(), |acc, z| acc.gcd(&z.num));
    if g.is_zero() {
        return Err(MorphismError::ImageInsideCenter(root));
    }
    if g.is_constant() {
        return Ok(());
    }
    descend_global(field, tower, root, &coords, &g.radical(), acc)
}

/// Degrees of `f` and its total contact with every center.
///
/// Linear centers use the degree of the gcd of the center's equations along
/// `f`. Trees of infinitesimal centers are summed over the finite domain
/// points by refining the places where the germs pass through each center,
/// and at `[0:1]` by lifting the germ there.
pub fn pushforward_and_multiplicities<F: Field>(
    field: &F,
    f: &MorphismP1<F::Elem>,
    tower: &BlowupTower,
) -> Result<CurveClass, MorphismError> {
    if f.dims() != tower.ambient().factor_dims() {
        return Err(MorphismError::Shape("morphism and tower have different ambient spaces".into()));
    }
    f.require_valid()?;
    let mut e = vec![0i64; tower.len()];
    for c in tower.centers() {
        let CenterKind::Linear(l) = &c.kind else { continue };
        let comps = center_compositions(field, f, l)?;
        let g = gcd_forms(&comps).map_err(|_| MorphismError::ImageInsideCenter(c.index))?;
        e[c.index] = g.degree() as i64;
        if !c.children.is_empty() {
            let mut acc = vec![0i64; tower.len()];
            finite_tree_contacts(field, f, tower, c.index, &mut acc)?;
            let at_infinity = contacts_at(field, f, tower, &P1Point::infinity())?;
            let mut stack = c.children.clone();
            while let Some(i) = stack.pop() {
                let inf = at_infinity[i].finite().ok_or(MorphismError::ImageInsideCenter(i))?;
                e[i] = acc[i] + inf as i64;
                stack.extend(&tower.center(i).children);
            }
        }
    }
    Ok(CurveClass::new(f.degrees().iter().map(|&d| d as i64).collect(), e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::parse_rational;
    use crate::algebra::RationalField;
    use crate::geometry::{build_tower, CenterSpec, TowerSpec};

    type Q = Rational;

    fn q(x: i64) -> Q {
        RationalField::default().from_i64(x)
    }

    fn form(c: &[i64]) -> HomPoly<Q> {
        HomPoly::new(c.iter().map(|&x| q(x)).collect())
    }

    fn map(factors: &[&[&[i64]]]) -> MorphismP1<Q> {
        MorphismP1::new(factors.iter().map(|f| f.iter().map(|c| form(c)).collect()).collect()).unwrap()
    }

    fn pt(c: &[i64]) -> CenterSpec {
        CenterSpec::Point { coords: vec![c.iter().map(|&x| q(x)).collect()] }
    }

    fn inf(parent: usize, chart: usize, dir: &[&str]) -> CenterSpec {
        CenterSpec::Infinitesimal {
            parent,
            chart,
            direction: dir.iter().map(|s| parse_rational(s).unwrap()).collect(),
        }
    }

    fn tower(ambient: &[usize], centers: Vec<CenterSpec>) -> BlowupTower {
        build_tower(&TowerSpec { ambient: ambient.to_vec(), centers }).unwrap()
    }

    const F: RationalField = RationalField { seed: 0 };

    #[test]
    fn contact_examples() {
        let t = tower(&[2], vec![pt(&[1, 0, 0])]);
        let origin = P1Point::affine(q(0));
        let conic = map(&[&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]]);
        assert_eq!(contact_order(&F, &conic, &origin, &t, 0).unwrap().order, Order::Finite(1));
        // (s^2, t^2, t^2): both minors have valuation 2
        let cusp = map(&[&[&[1, 0, 0], &[0, 0, 1], &[0, 0, 1]]]);
        assert_eq!(contact_order(&F, &cusp, &origin, &t, 0).unwrap().order, Order::Finite(2));
        // the line x_1 = x_2 = 0 contains the constant curve at [1:0:0]
        let line = tower(
            &[2],
            vec![CenterSpec::Linear { equations: vec![vec![vec![q(0), q(1), q(0)]]] }],
        );
        let inside = map(&[&[&[1, 0], &[0, 0], &[0, 1]]]);
        assert_eq!(contact_order(&F, &inside, &origin, &line, 0).unwrap().order, Order::Infinite);
        assert_eq!(point_contact_order(&cusp, &origin, &[vec![q(1), q(0), q(0)]]), Order::Finite(2));
    }

    #[test]
    fn pushforward_examples() {
        let id = map(&[&[&[1, 0], &[0, 1]]]);
        let c = pushforward_and_multiplicities(&F, &id, &tower(&[1], vec![])).unwrap();
        assert_eq!(c, CurveClass::new(vec![1], vec![]));

        let conic = map(&[&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]]);
        let c = pushforward_and_multiplicities(&F, &conic, &tower(&[2], vec![pt(&[1, 0, 0])])).unwrap();
        assert_eq!(c, CurveClass::new(vec![2], vec![1]));

        // x_0 = 0 avoids both points
        let avoid = map(&[&[&[0, 0], &[1, 0], &[0, 1]]]);
        let t = tower(&[2], vec![pt(&[1, 0, 0]), pt(&[1, 1, 1])]);
        assert_eq!(pushforward_and_multiplicities(&F, &avoid, &t).unwrap().e_total, vec![0, 0]);

        let constant = map(&[&[&[1], &[0], &[0]]]);
        assert_eq!(
            pushforward_and_multiplicities(&F, &constant, &tower(&[2], vec![pt(&[1, 0, 0])])),
            Err(MorphismError::ImageInsideCenter(0))
        );
    }

    #[test]
    fn infinitesimal_contacts_follow_tangent_direction() {
        // conic (s^2, st, t^2) has tangent direction x_2/x_1 -> 0 at [1:0:0]
        let conic = map(&[&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]]);
        let through = tower(&[2], vec![pt(&[1, 0, 0]), inf(0, 0, &["0"])]);
        let other = tower(&[2], vec![pt(&[1, 0, 0]), inf(0, 0, &["5"])]);
        let c = pushforward_and_multiplicities(&F, &conic, &through).unwrap();
        assert_eq!(c.e_total, vec![1, 1]);
        let c = pushforward_and_multiplicities(&F, &conic, &other).unwrap();
        assert_eq!(c.e_total, vec![1, 0]);
        // chart 1 = the x_2 direction; the conic's tangent is not there
        let wrong_chart = tower(&[2], vec![pt(&[1, 0, 0]), inf(0, 1, &["0"])]);
        assert_eq!(pushforward_and_multiplicities(&F, &conic, &wrong_chart).unwrap().e_total, vec![1, 0]);
    }

    #[test]
    fn depth_two_chain_against_series_route() {
        // (s^3, s^2 t, t^3 + 2 s t^2) near u = 0: z = (u, u^3 + 2u^2);
        // y = z_2/z_1 = 2u + u^2 -> passes direction 0, then y/u = 2 + u.
        let f = map(&[&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 2, 1]]]);
        let t = tower(&[2], vec![pt(&[1, 0, 0]), inf(0, 0, &["0"]), inf(1, 0, &["2"])]);
        let c = pushforward_and_multiplicities(&F, &f, &t).unwrap();
        let at0 = contacts_at(&F, &f, &t, &P1Point::affine(q(0))).unwrap();
        assert_eq!(at0, vec![Order::Finite(1); 3]);
        assert_eq!(c.e_total, vec![1, 1, 1]);
    }

    #[test]
    fn infinity_is_counted() {
        // conic swapped so the tangency to direction 0 sits at [0:1]
        let conic = map(&[&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]]);
        let t = tower(&[2], vec![pt(&[1, 0, 0]), inf(0, 0, &["0"])]);
        assert_eq!(pushforward_and_multiplicities(&F, &conic, &t).unwrap().e_total, vec![1, 1]);
    }

    #[test]
    fn nonrational_places_are_summed() {
        // (s^4, s^2 (s^2 + t^2), (s^2 + t^2)^2): in the chart z = (1 + u^2, (1 + u^2)^2)
        // meets [1:0:0] at u = ±i only, tangent to direction 0 there
        let f = map(&[&[&[1, 0, 0, 0, 0], &[1, 0, 1, 0, 0], &[1, 0, 2, 0, 1]]]);
        let t = tower(&[2], vec![pt(&[1, 0, 0]), inf(0, 0, &["0"])]);
        assert_eq!(pushforward_and_multiplicities(&F, &f, &t).unwrap().e_total, vec![2, 2]);
    }
}
