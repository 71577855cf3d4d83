//! Polynomial reconstruction: given points in F x F, a degree bound and an
//! agreement target t with t^2 > (#points) * degree, list every polynomial
//! of bounded degree through at least t points.
//!
//! The interpolation route builds a bivariate polynomial vanishing with
//! multiplicity at every point and reads candidates off its y-roots
//! (recursive shift-and-divide). A brute-force enumerator over all
//! coefficient vectors is kept alongside as an independent oracle for the
//! small fields where it is feasible.

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::poly::UniPoly;

/// Cap on field order for reconstruction instances.
pub const GS_FIELD_CAP: u64 = 256;
/// Cap on the enumeration size of the brute-force oracle.
pub const BRUTE_FORCE_CAP: u64 = 1 << 22;
const MAX_MULTIPLICITY: usize = 32;
// Keeps the elimination below ~10^8 field operations.
const MAX_CONSTRAINT_ROWS: usize = 400;

#[derive(Clone, Debug)]
pub struct ReconstructionInstance {
    pub field: Field,
    /// Deduplicated, sorted by (x, y) index; repeated abscissae with
    /// different ordinates are expected.
    points: Vec<(FieldElement, FieldElement)>,
    pub degree_bound: usize,
    pub agreement: usize,
    /// Interpolation multiplicity override; chosen automatically when None.
    pub multiplicity: Option<usize>,
}

impl ReconstructionInstance {
    pub fn new(
        field: Field,
        points: Vec<(FieldElement, FieldElement)>,
        degree_bound: usize,
        agreement: usize,
        multiplicity: Option<usize>,
    ) -> Result<ReconstructionInstance> {
        if field.order() > GS_FIELD_CAP {
            return Err(Error::CapExceeded {
                size: field.order(),
                cap: GS_FIELD_CAP,
            });
        }
        if points.is_empty() {
            return Err(Error::InvalidParameter("empty point set".into()));
        }
        for &(x, y) in &points {
            if !field.contains(&x) || !field.contains(&y) {
                return Err(Error::InvalidParameter("point outside the field".into()));
            }
        }
        let mut points = points;
        points.sort_by_key(|&(x, y)| (x.index(), y.index()));
        points.dedup();
        let m = points.len();
        if agreement == 0 || agreement * agreement <= m * degree_bound {
            return Err(Error::GsInapplicable {
                agreement,
                points: m,
                degree: degree_bound,
            });
        }
        Ok(ReconstructionInstance {
            field,
            points,
            degree_bound,
            agreement,
            multiplicity,
        })
    }

    pub fn points(&self) -> &[(FieldElement, FieldElement)] {
        &self.points
    }

    /// Number of instance points the polynomial passes through.
    pub fn agreement_count(&self, poly: &UniPoly) -> usize {
        self.points
            .iter()
            .filter(|&&(x, y)| poly.eval(x, &self.field) == y)
            .count()
    }

    /// t^2 - (#points) * degree, the strict-inequality margin.
    pub fn applicability_margin(&self) -> i64 {
        self.agreement as i64 * self.agreement as i64
            - self.points.len() as i64 * self.degree_bound as i64
    }
}

/// Bivariate polynomial as y-power coefficients over F[x].
#[derive(Clone, Debug)]
struct BiPoly {
    ycoeffs: Vec<UniPoly>,
}

impl BiPoly {
    fn trim(&mut self) {
        while self.ycoeffs.last().is_some_and(UniPoly::is_zero) {
            self.ycoeffs.pop();
        }
    }

    fn is_zero(&self) -> bool {
        self.ycoeffs.is_empty()
    }

    /// Smallest power of x dividing every coefficient.
    fn x_valuation(&self) -> usize {
        self.ycoeffs
            .iter()
            .filter(|c| !c.is_zero())
            .map(UniPoly::x_valuation)
            .min()
            .unwrap_or(0)
    }

    fn shift_down_x(&self, a: usize) -> BiPoly {
        let mut out = BiPoly {
            ycoeffs: self
                .ycoeffs
                .iter()
                .map(|c| {
                    if c.is_zero() {
                        UniPoly::zero()
                    } else {
                        c.shift_down(a)
                    }
                })
                .collect(),
        };
        out.trim();
        out
    }

    /// Q(0, y) as a univariate polynomial in y.
    fn at_x_zero(&self, field: &Field) -> UniPoly {
        UniPoly::new(self.ycoeffs.iter().map(|c| c.coeff(0, field)).collect())
    }

    /// Q(x, x*y + gamma).
    fn substitute_shift(&self, gamma: FieldElement, field: &Field) -> BiPoly {
        let deg_y = self.ycoeffs.len();
        let binom = binomial_table(deg_y, field);
        let mut out = vec![UniPoly::zero(); deg_y];
        let mut gamma_pow = vec![field.one()];
        for _ in 1..deg_y {
            gamma_pow.push(field.mul(*gamma_pow.last().expect("nonempty"), gamma));
        }
        for (j_src, src) in self.ycoeffs.iter().enumerate() {
            if src.is_zero() {
                continue;
            }
            for j in 0..=j_src {
                let factor = field.mul(binom[j_src][j], gamma_pow[j_src - j]);
                if factor.is_zero() {
                    continue;
                }
                let term = src.scale(factor, field).shift_up(j, field);
                out[j] = out[j].add(&term, field);
            }
        }
        let mut out = BiPoly { ycoeffs: out };
        out.trim();
        out
    }

    /// Q(x, p(x)).
    fn eval_poly(&self, p: &UniPoly, field: &Field) -> UniPoly {
        let mut acc = UniPoly::zero();
        for c in self.ycoeffs.iter().rev() {
            acc = acc.mul(p, field).add(c, field);
        }
        acc
    }
}

/// Pascal's triangle in the field (binomials reduced mod p).
fn binomial_table(rows: usize, field: &Field) -> Vec<Vec<FieldElement>> {
    let p = field.characteristic();
    let mut ints = vec![vec![0u64; rows.max(1)]; rows.max(1)];
    for i in 0..rows.max(1) {
        ints[i][0] = 1;
        for j in 1..=i {
            ints[i][j] = (ints[i - 1][j - 1] + if j < i { ints[i - 1][j] } else { 0 }) % p;
        }
    }
    ints.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| field.element(v % p).expect("reduced"))
                .collect()
        })
        .collect()
}

/// Monomials x^i y^j with i + degree*j <= weighted_cap, j outer, i inner.
fn monomials(weighted_cap: usize, degree: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 0..=weighted_cap / degree {
        for i in 0..=weighted_cap - degree * j {
            out.push((i, j));
        }
    }
    out
}

fn monomial_count(weighted_cap: usize, degree: usize) -> usize {
    (0..=weighted_cap / degree)
        .map(|j| weighted_cap - degree * j + 1)
        .sum()
}

/// Smallest multiplicity whose interpolation system is underdetermined at
/// weighted degree s*t - 1.
fn choose_multiplicity(
    num_points: usize,
    degree: usize,
    agreement: usize,
    forced: Option<usize>,
) -> Result<(usize, usize)> {
    let feasible = |s: usize| {
        let cap = s * agreement - 1;
        let constraints = num_points * s * (s + 1) / 2;
        constraints <= MAX_CONSTRAINT_ROWS && monomial_count(cap, degree) > constraints
    };
    if let Some(s) = forced {
        if s == 0 || !feasible(s) {
            return Err(Error::InvalidParameter(format!(
                "multiplicity {s} does not make the interpolation solvable"
            )));
        }
        return Ok((s, s * agreement - 1));
    }
    for s in 1..=MAX_MULTIPLICITY {
        if feasible(s) {
            return Ok((s, s * agreement - 1));
        }
    }
    Err(Error::GsMultiplicityOverflow(MAX_MULTIPLICITY))
}

/// One nonzero kernel vector of the constraint matrix (rows < columns).
fn kernel_vector(
    mut rows: Vec<Vec<FieldElement>>,
    cols: usize,
    field: &Field,
) -> Option<Vec<FieldElement>> {
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = field.inv(rows[rank][col]).expect("pivot nonzero");
        for c in col..cols {
            rows[rank][c] = field.mul(rows[rank][c], inv);
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col];
                for c in col..cols {
                    let sub = field.mul(factor, rows[rank][c]);
                    rows[r][c] = field.sub(rows[r][c], sub);
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }
    let free = (0..cols).find(|&c| pivot_of_col[c].is_none())?;
    let mut vec = vec![field.zero(); cols];
    vec[free] = field.one();
    for col in 0..cols {
        if let Some(r) = pivot_of_col[col] {
            // Row r reads: x_col + rows[r][free] * x_free = 0.
            vec[col] = field.neg(rows[r][free]);
        }
    }
    Some(vec)
}

/// All polynomials of degree <= degree_bound through at least `agreement`
/// instance points, via interpolation and root finding; canonical
/// (coefficient-vector index) order.
pub fn gs_reconstruct(inst: &ReconstructionInstance) -> Result<Vec<UniPoly>> {
    let field = &inst.field;
    if inst.agreement > inst.points.len() {
        // Nothing can pass more points than exist.
        return Ok(Vec::new());
    }
    if inst.degree_bound == 0 {
        // Constants: weighted degree degenerates, enumerate directly.
        let polys = field
            .elements()
            .map(UniPoly::constant)
            .filter(|p| inst.agreement_count(p) >= inst.agreement)
            .collect();
        return Ok(polys);
    }
    let (mult, weighted_cap) = choose_multiplicity(
        inst.points.len(),
        inst.degree_bound,
        inst.agreement,
        inst.multiplicity,
    )?;
    let monoms = monomials(weighted_cap, inst.degree_bound);
    let binom = binomial_table(weighted_cap + 1, field);

    let mut rows = Vec::with_capacity(inst.points.len() * mult * (mult + 1) / 2);
    for &(a, b) in &inst.points {
        let mut a_pow = vec![field.one()];
        let mut b_pow = vec![field.one()];
        for _ in 0..weighted_cap {
            a_pow.push(field.mul(*a_pow.last().expect("nonempty"), a));
            b_pow.push(field.mul(*b_pow.last().expect("nonempty"), b));
        }
        for u in 0..mult {
            for v in 0..mult - u {
                let row = monoms
                    .iter()
                    .map(|&(i, j)| {
                        if i < u || j < v {
                            field.zero()
                        } else {
                            let c = field.mul(binom[i][u], binom[j][v]);
                            field.mul(c, field.mul(a_pow[i - u], b_pow[j - v]))
                        }
                    })
                    .collect();
                rows.push(row);
            }
        }
    }
    let coeffs =
        kernel_vector(rows, monoms.len(), field).expect("monomial count exceeds constraint count");

    let y_deg = monoms.iter().map(|&(_, j)| j).max().unwrap_or(0);
    let mut ycoeffs = vec![Vec::new(); y_deg + 1];
    for (idx, &(i, j)) in monoms.iter().enumerate() {
        if ycoeffs[j].len() <= i {
            ycoeffs[j].resize(i + 1, field.zero());
        }
        ycoeffs[j][i] = coeffs[idx];
    }
    let mut q_poly = BiPoly {
        ycoeffs: ycoeffs.into_iter().map(UniPoly::new).collect(),
    };
    q_poly.trim();
    debug_assert!(!q_poly.is_zero());

    let mut found: Vec<Vec<FieldElement>> = Vec::new();
    let mut prefix = Vec::new();
    extract_roots(&q_poly, inst.degree_bound, field, &mut prefix, &mut found);

    let mut polys: Vec<UniPoly> = found
        .into_iter()
        .map(UniPoly::new)
        .inspect(|p| debug_assert!(q_poly.eval_poly(p, field).is_zero()))
        .filter(|p| inst.agreement_count(p) >= inst.agreement)
        .collect();
    sort_canonical(&mut polys, inst.degree_bound);
    polys.dedup();
    Ok(polys)
}

/// Depth-first y-root extraction: peel one candidate coefficient per
/// level via roots of Q(0, y), then recurse on Q(x, x*y + gamma) with
/// common x powers stripped.
fn extract_roots(
    q_poly: &BiPoly,
    degree_bound: usize,
    field: &Field,
    prefix: &mut Vec<FieldElement>,
    out: &mut Vec<Vec<FieldElement>>,
) {
    if prefix.len() > degree_bound {
        if q_poly.ycoeffs.first().is_none_or(UniPoly::is_zero) {
            out.push(prefix.clone());
        }
        return;
    }
    let stripped = q_poly.shift_down_x(q_poly.x_valuation());
    let at_zero = stripped.at_x_zero(field);
    debug_assert!(!at_zero.is_zero(), "stripped polynomial has a unit x power");
    for gamma in at_zero.roots(field) {
        prefix.push(gamma);
        extract_roots(
            &stripped.substitute_shift(gamma, field),
            degree_bound,
            field,
            prefix,
            out,
        );
        prefix.pop();
    }
}

fn sort_canonical(polys: &mut [UniPoly], degree_bound: usize) {
    polys.sort_by_key(|p| {
        p.coeff_indices(degree_bound + 1)
            .expect("degree within bound")
    });
}

/// Independent oracle: enumerate every coefficient vector of length
/// degree_bound + 1 and count agreement directly.
pub fn reconstruct_bruteforce(inst: &ReconstructionInstance) -> Result<Vec<UniPoly>> {
    let field = &inst.field;
    let size = (field.order() as u128).pow(inst.degree_bound as u32 + 1);
    if size > BRUTE_FORCE_CAP as u128 {
        return Err(Error::CapExceeded {
            size: size as u64,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let mut out = Vec::new();
    for k in 0..size as u64 {
        let mut coeffs = Vec::with_capacity(inst.degree_bound + 1);
        let mut rest = k;
        for _ in 0..=inst.degree_bound {
            coeffs.push(rest % field.order());
            rest /= field.order();
        }
        let poly = UniPoly::from_indices(field, &coeffs)?;
        if inst.agreement_count(&poly) >= inst.agreement {
            out.push(poly);
        }
    }
    sort_canonical(&mut out, inst.degree_bound);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use rand::Rng;

    fn make_points(field: &Field, pts: &[(u64, u64)]) -> Vec<(FieldElement, FieldElement)> {
        pts.iter()
            .map(|&(x, y)| (field.element(x).unwrap(), field.element(y).unwrap()))
            .collect()
    }

    #[test]
    fn unique_interpolant_with_full_agreement() {
        let f5 = Field::new(5, 1).unwrap();
        let pts = make_points(&f5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]); // y = x + 1
        let inst = ReconstructionInstance::new(f5.clone(), pts, 1, 5, None).unwrap();
        let out = gs_reconstruct(&inst).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].coeff_indices(2).unwrap(), vec![1, 1]);
    }

    #[test]
    fn worked_f5_example_matches_enumeration() {
        // Oracle (integer arithmetic, no library calls): lines a + b x
        // through >= 3 of the five points.
        let pts = [(0u64, 1u64), (1, 2), (2, 3), (3, 0), (4, 4)];
        let mut expect = Vec::new();
        for a in 0..5u64 {
            for b in 0..5u64 {
                let hits = pts.iter().filter(|&&(x, y)| (a + b * x) % 5 == y).count();
                if hits >= 3 {
                    expect.push(vec![a, b]);
                }
            }
        }
        assert_eq!(expect, vec![vec![1, 1], vec![3, 4]]);

        let f5 = Field::new(5, 1).unwrap();
        let inst =
            ReconstructionInstance::new(f5.clone(), make_points(&f5, &pts), 1, 3, None).unwrap();
        let got: Vec<Vec<u64>> = gs_reconstruct(&inst)
            .unwrap()
            .iter()
            .map(|p| p.coeff_indices(2).unwrap())
            .collect();
        assert_eq!(got, expect);
        let brute: Vec<Vec<u64>> = reconstruct_bruteforce(&inst)
            .unwrap()
            .iter()
            .map(|p| p.coeff_indices(2).unwrap())
            .collect();
        assert_eq!(brute, expect);
    }

    #[test]
    fn applicability_is_strict() {
        let f5 = Field::new(5, 1).unwrap();
        let pts = make_points(&f5, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        // t^2 = 4 = (#points) * degree exactly.
        assert!(matches!(
            ReconstructionInstance::new(f5, pts, 1, 2, None),
            Err(Error::GsInapplicable { .. })
        ));
    }

    #[test]
    fn empty_point_set_rejected() {
        let f5 = Field::new(5, 1).unwrap();
        assert!(ReconstructionInstance::new(f5, Vec::new(), 1, 1, None).is_err());
    }

    #[test]
    fn matches_brute_force_on_random_instances() {
        let mut rng = substream(1234, 0);
        for trial in 0..60u64 {
            let (p, m) = [
                (2u64, 1usize),
                (3, 1),
                (5, 1),
                (7, 1),
                (2, 2),
                (3, 2),
                (13, 1),
            ][(trial % 7) as usize];
            let field = Field::new(p, m).unwrap();
            let q = field.order();
            let degree = 1 + (rng.random_range(0..3u64).min(q - 1)) as usize;
            let num_points = rng.random_range(degree as u64 + 1..=2 * q).min(q * q);
            let mut pts = Vec::new();
            while (pts.len() as u64) < num_points {
                let x = rng.random_range(0..q);
                let y = rng.random_range(0..q);
                if !pts.contains(&(x, y)) {
                    pts.push((x, y));
                }
            }
            let min_t = ((pts.len() * degree) as f64).sqrt() as usize + 1;
            let mut t = min_t.max(1);
            // Keep the interpolation system small.
            while choose_multiplicity(pts.len(), degree, t, None)
                .map(|(s, _)| s > 6)
                .unwrap_or(true)
                && t < pts.len()
            {
                t += 1;
            }
            let inst = match ReconstructionInstance::new(
                field.clone(),
                make_points(&field, &pts),
                degree,
                t,
                None,
            ) {
                Ok(i) => i,
                Err(_) => continue,
            };
            let got = gs_reconstruct(&inst).unwrap();
            let brute = reconstruct_bruteforce(&inst).unwrap();
            assert_eq!(
                got, brute,
                "mismatch at trial {trial}: q={q} deg={degree} t={t} pts={pts:?}"
            );
        }
    }

    #[test]
    fn repeated_abscissae_are_supported() {
        let f7 = Field::new(7, 1).unwrap();
        // Two candidate values on some abscissae; the line y = 2x + 1
        // passes through one of each pair.
        let pts = make_points(
            &f7,
            &[(0, 1), (0, 3), (1, 3), (1, 5), (2, 5), (3, 0), (4, 2)],
        );
        let inst = ReconstructionInstance::new(f7.clone(), pts, 1, 5, None).unwrap();
        let out = gs_reconstruct(&inst).unwrap();
        let brute = reconstruct_bruteforce(&inst).unwrap();
        assert_eq!(out, brute);
        assert!(out
            .iter()
            .any(|p| p.coeff_indices(2).unwrap() == vec![1, 2]));
    }

    #[test]
    fn forced_multiplicity_checked() {
        let f5 = Field::new(5, 1).unwrap();
        let pts = make_points(&f5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let inst = ReconstructionInstance::new(f5.clone(), pts.clone(), 1, 5, Some(2)).unwrap();
        let out = gs_reconstruct(&inst).unwrap();
        assert_eq!(out.len(), 1);
        let bad = ReconstructionInstance::new(f5, pts, 1, 5, Some(0)).unwrap();
        assert!(gs_reconstruct(&bad).is_err());
    }
}
