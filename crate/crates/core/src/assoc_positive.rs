//! The positive root system associated to a Carter decomposition
//! `s = s1 s2`: spectral planes and lines of `s`, the strata of roots they
//! cut out, and the per-stratum positivity rule.

use crate::exact_scalar::{int, Field, Rational, RealCyclotomic};
use crate::linalg::{dot, gram_schmidt, inverse, kernel, solve, Mat};
use crate::root_system::{Root, RootDatum};
use crate::weyl::{from_carter, rotation_spectrum, CarterElement, CarterPair, RotationSpectrum, WeylElement};
use crate::AtlasError;
use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

type Rc = RealCyclotomic;

/// A rotation plane of `s` spanned by `a_u`, `b_u`; the vectors are
/// coordinate vectors in the simple-root basis of `h*`.
#[derive(Clone, Debug)]
pub struct Plane {
    pub turn: Rational,
    /// Eigenvalue `cos(π·turn)` of `I - M`.
    pub lambda: Rc,
    pub u: Vec<Rc>,
    pub a: Vec<Rc>,
    pub b: Vec<Rc>,
}

/// A line of the `-1` eigenspace lying in the `-1` eigenspace of `s1`
/// (`second_set == false`) or of `s2`.
#[derive(Clone, Debug)]
pub struct Line {
    pub vector: Vec<Rational>,
    pub second_set: bool,
}

#[derive(Clone, Debug)]
pub enum InvariantSubspace {
    Fixed { basis: Vec<Vec<Rational>> },
    Line(Line),
    Plane(Plane),
}

/// Index 0 is the fixed space, then the lines, then the planes by
/// ascending eigenvalue.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub spectrum: RotationSpectrum,
    pub subspaces: Vec<InvariantSubspace>,
}

/// Order among planes with equal eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TieOrder {
    #[default]
    Lex,
    ReverseLex,
}

fn rc_int(n: i64) -> Rc {
    Rc::from_int(n)
}

fn cmp_rc(x: &Rc, y: &Rc) -> Ordering {
    (x - y).sign_of().cmp(&0)
}

fn cmp_lex(u: &[Rc], v: &[Rc]) -> Ordering {
    u.iter()
        .zip(v)
        .map(|(x, y)| cmp_rc(x, y))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
}

fn sqrt_int(n: i64) -> Result<Rc, AtlasError> {
    Rc::sqrt_small(n as u64).ok_or_else(|| AtlasError::Inconsistent(format!("no exact square root of {n}")))
}

fn to_rat_mat(m: &WeylElement) -> Mat<Rational> {
    m.rational_matrix()
}

pub fn spectral_decomposition(datum: &RootDatum, pair: &CarterPair) -> Result<SpectralDecomposition, AtlasError> {
    let elem = from_carter(datum, pair)?;
    spectral_decomposition_with(datum, pair, &elem, TieOrder::Lex)
}

pub fn spectral_decomposition_with(
    datum: &RootDatum,
    pair: &CarterPair,
    elem: &CarterElement,
    tie: TieOrder,
) -> Result<SpectralDecomposition, AtlasError> {
    let l = datum.rank();
    let n = pair.first_set.len();
    let gammas = pair.gammas();
    let lp = gammas.len();
    let spectrum = rotation_spectrum(&elem.s);
    if spectrum.fixed_dim != l - lp {
        return Err(AtlasError::Inconsistent(format!(
            "fixed space has dimension {} but the pair has {lp} roots",
            spectrum.fixed_dim
        )));
    }
    // h0 = ker(s - 1)
    let mut s_minus = to_rat_mat(&elem.s);
    for (i, row) in s_minus.iter_mut().enumerate() {
        row[i] -= int(1);
    }
    let h0 = kernel(&s_minus, l);

    // M_ij = (γ_i, γ_j) / (|γ_i| |γ_j|), f_i = γ_i / |γ_i|
    let norms: Vec<i64> = gammas.iter().map(|g| datum.pairing(g, g)).collect();
    let mut m: Mat<Rc> = vec![vec![rc_int(0); lp]; lp];
    for i in 0..lp {
        for j in 0..lp {
            let num = datum.pairing(&gammas[i], &gammas[j]);
            if num != 0 {
                m[i][j] = rc_int(num) / sqrt_int(norms[i] * norms[j])?;
            }
        }
    }
    let inv_norm: Vec<Rc> = norms
        .iter()
        .map(|&x| sqrt_int(x).map(|s| s.inverse()))
        .collect::<Result<_, _>>()?;
    let f: Vec<Vec<Rc>> = gammas
        .iter()
        .zip(&inv_norm)
        .map(|(g, s)| g.iter().map(|&c| rc_int(c) * s).collect())
        .collect();
    let subspaces_planes = if lp > 0 {
        let minv = inverse(&m).ok_or_else(|| AtlasError::Inconsistent("M is singular".into()))?;
        let fhat: Vec<Vec<Rc>> = (0..lp)
            .map(|i| {
                (0..l)
                    .map(|c| {
                        (0..lp).fold(rc_int(0), |acc, j| {
                            if minv[i][j].is_zero() || f[j][c].is_zero() {
                                acc
                            } else {
                                acc + &minv[i][j] * &f[j][c]
                            }
                        })
                    })
                    .collect()
            })
            .collect();
        let mut turns: Vec<(Rational, usize)> = vec![];
        for t in &spectrum.planes {
            match turns.last_mut() {
                Some((x, k)) if x == t => *k += 1,
                _ => turns.push((t.clone(), 1)),
            }
        }
        let mut groups = vec![];
        for (turn, mult) in turns {
            let lambda = Rc::cos_turn(&(turn.clone() / int(2)));
            // ker((I - M) - λI)
            let a: Mat<Rc> = (0..lp)
                .map(|i| {
                    (0..lp)
                        .map(|j| {
                            let id = if i == j { rc_int(1) - &lambda } else { rc_int(0) };
                            id - &m[i][j]
                        })
                        .collect()
                })
                .collect();
            let ker = kernel(&a, lp);
            if ker.len() != mult {
                return Err(AtlasError::Inconsistent(format!(
                    "eigenspace for turn {turn} has dimension {} instead of {mult}",
                    ker.len()
                )));
            }
            let mut us = gram_schmidt(&ker, |x, y| dot(x, y));
            us.sort_by(|x, y| cmp_lex(x, y));
            if tie == TieOrder::ReverseLex {
                us.reverse();
            }
            let mut planes = vec![];
            for u in us {
                let comb = |range: std::ops::Range<usize>| -> Vec<Rc> {
                    (0..l)
                        .map(|c| {
                            range.clone().fold(rc_int(0), |acc, i| {
                                if u[i].is_zero() || fhat[i][c].is_zero() {
                                    acc
                                } else {
                                    acc + &u[i] * &fhat[i][c]
                                }
                            })
                        })
                        .collect()
                };
                planes.push(Plane {
                    turn: turn.clone(),
                    lambda: lambda.clone(),
                    a: comb(0..n),
                    b: comb(n..lp),
                    u,
                });
            }
            groups.push(planes);
        }
        // ascending λ is descending turn; ties keep their order
        groups.into_iter().rev().flatten().collect()
    } else {
        vec![]
    };

    // -1 lines: K1 = {s v = -v, s1 v = -v}, K2 likewise with s2
    let lines_of = |factor: &WeylElement| -> Vec<Vec<Rational>> {
        let mut stacked = to_rat_mat(&elem.s);
        for (i, row) in stacked.iter_mut().enumerate() {
            row[i] += int(1);
        }
        let mut f = to_rat_mat(factor);
        for (i, row) in f.iter_mut().enumerate() {
            row[i] += int(1);
        }
        stacked.extend(f);
        let k = kernel(&stacked, l);
        gram_schmidt(&k, |x, y| rational_pairing(datum, x, y))
    };
    let k1 = lines_of(&elem.s1);
    let k2 = lines_of(&elem.s2);
    if k1.len() + k2.len() != spectrum.minus_one_dim {
        return Err(AtlasError::Inconsistent(format!(
            "-1 eigenspace of dimension {} splits as {} + {}",
            spectrum.minus_one_dim,
            k1.len(),
            k2.len()
        )));
    }
    let mut lines: Vec<InvariantSubspace> = k1
        .into_iter()
        .map(|v| Line {
            vector: v,
            second_set: false,
        })
        .chain(k2.into_iter().map(|v| Line {
            vector: v,
            second_set: true,
        }))
        .map(InvariantSubspace::Line)
        .collect();
    // processing runs from the highest index down, K1 first
    lines.reverse();

    let mut subspaces = vec![InvariantSubspace::Fixed { basis: h0 }];
    subspaces.extend(lines);
    subspaces.extend(subspaces_planes.into_iter().map(InvariantSubspace::Plane));
    Ok(SpectralDecomposition { spectrum, subspaces })
}

/// `(x, y)` for rational coordinate vectors.
pub fn rational_pairing(datum: &RootDatum, x: &[Rational], y: &[Rational]) -> Rational {
    let l = datum.rank();
    let mut s = int(0);
    for i in 0..l {
        if x[i] == int(0) {
            continue;
        }
        for j in 0..l {
            if datum.form[i][j] != 0 && y[j] != int(0) {
                s += &x[i] * int(datum.form[i][j]) * &y[j];
            }
        }
    }
    s
}

fn rc_pairing_root(datum: &RootDatum, alpha: &[i64], v: &[Rc]) -> Rc {
    let row = datum.form_row(alpha);
    row.iter().zip(v).fold(rc_int(0), |acc, (&c, x)| {
        if c == 0 || x.is_zero() {
            acc
        } else {
            acc + rc_int(c) * x
        }
    })
}

fn rc_pairing(datum: &RootDatum, x: &[Rc], y: &[Rc]) -> Rc {
    let l = datum.rank();
    let mut s = rc_int(0);
    for i in 0..l {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..l {
            if datum.form[i][j] != 0 && !y[j].is_zero() {
                s = s + &x[i] * &y[j] * rc_int(datum.form[i][j]);
            }
        }
    }
    s
}

fn apply_rc(w: &WeylElement, v: &[Rc]) -> Vec<Rc> {
    w.matrix
        .iter()
        .map(|row| {
            row.iter().zip(v).fold(rc_int(0), |acc, (&c, x)| {
                if c == 0 || x.is_zero() {
                    acc
                } else {
                    acc + rc_int(c) * x
                }
            })
        })
        .collect()
}

/// Element deciding positivity on one stratum.
#[derive(Clone, Debug)]
pub enum GenericElement {
    Plane(Vec<Rc>),
    Line(Vec<Rational>),
    /// The fixed stratum uses the standard positive system.
    Standard,
}

impl GenericElement {
    pub fn sign_on(&self, datum: &RootDatum, alpha: &[i64]) -> i32 {
        match self {
            GenericElement::Plane(x) => rc_pairing_root(datum, alpha, x).sign_of(),
            GenericElement::Line(v) => {
                let a: Vec<Rational> = alpha.iter().map(|&c| int(c)).collect();
                Field::sign(&rational_pairing(datum, &a, v))
            }
            GenericElement::Standard => match datum.index_of(alpha) {
                Some((_, s)) => s,
                None => 0,
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct Stratum {
    /// Index into [`SpectralDecomposition::subspaces`].
    pub subspace: usize,
    pub roots: Vec<Root>,
    pub generic: GenericElement,
}

#[derive(Clone, Debug)]
pub struct AssociatedSystem {
    /// Ordered by standard root index, then sign.
    pub positive_roots: Vec<Root>,
    /// Simple roots in the standard Dynkin labeling.
    pub simple_roots: Vec<Root>,
    /// In processing order; the fixed stratum (subspace 0) is last.
    pub strata: Vec<Stratum>,
    /// `renumbering[i]` is the standard label (0-based) of the `i`-th simple
    /// root in discovery order.
    pub renumbering: Vec<usize>,
    pub adjusted_gammas: CarterPair,
    pub fixed_roots: Vec<Root>,
}

impl AssociatedSystem {
    pub fn fixed_stratum(&self) -> &Stratum {
        self.strata.last().expect("fixed stratum")
    }

    pub fn is_positive(&self, r: &[i64]) -> bool {
        self.positive_roots.iter().any(|p| p.as_slice() == r)
    }

    /// Coordinates of `v` in the basis of the associated simple roots.
    pub fn simple_coords(&self, v: &[i64]) -> Option<Root> {
        let l = self.simple_roots.len();
        let a: Mat<Rational> = (0..l)
            .map(|i| (0..l).map(|j| int(self.simple_roots[j][i])).collect())
            .collect();
        let b: Vec<Rational> = v.iter().map(|&c| int(c)).collect();
        let x = solve(&a, &b)?;
        x.iter()
            .map(|q| if q.is_integer() { num_traits::ToPrimitive::to_i64(&q.to_integer()) } else { None })
            .collect()
    }

    /// Standard indices of the adjusted γ's re-expressed in the associated
    /// simple basis.
    pub fn renumbered_gamma_indices(&self, datum: &RootDatum) -> (Vec<usize>, Vec<usize>) {
        let idx = |g: &Root| {
            self.simple_coords(g)
                .and_then(|c| datum.index_of(&c))
                .map_or(0, |(i, _)| i)
        };
        (
            self.adjusted_gammas.first_set.iter().map(idx).collect(),
            self.adjusted_gammas.second_set.iter().map(idx).collect(),
        )
    }

    /// Standard labels (1-based) of the simple roots of the fixed subsystem.
    pub fn fixed_simple_indices(&self) -> Vec<usize> {
        let fixed: HashSet<&Root> = self.fixed_roots.iter().collect();
        self.simple_roots
            .iter()
            .enumerate()
            .filter(|(_, r)| fixed.contains(r))
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn fixed_simple_roots(&self) -> Vec<Root> {
        let fixed: HashSet<&Root> = self.fixed_roots.iter().collect();
        self.simple_roots
            .iter()
            .filter(|r| fixed.contains(r))
            .cloned()
            .collect()
    }
}

/// Plane projections inner product `p_x^T adj(G) p_y`, a positive multiple
/// of the inner product of the orthogonal projections of `x`, `y`.
struct PlaneGeometry {
    adj: [[Rc; 2]; 2],
}

impl PlaneGeometry {
    fn new(datum: &RootDatum, a: &[Rc], b: &[Rc]) -> Self {
        let aa = rc_pairing(datum, a, a);
        let ab = rc_pairing(datum, a, b);
        let bb = rc_pairing(datum, b, b);
        PlaneGeometry {
            adj: [[bb, -&ab], [-ab, aa]],
        }
    }

    fn ip(&self, p: &[Rc; 2], q: &[Rc; 2]) -> Rc {
        let mut s = rc_int(0);
        for i in 0..2 {
            for j in 0..2 {
                if !p[i].is_zero() && !q[j].is_zero() && !self.adj[i][j].is_zero() {
                    s = s + &p[i] * &self.adj[i][j] * &q[j];
                }
            }
        }
        s
    }
}

fn half(v: &[Rc; 2]) -> u8 {
    let y = v[1].sign_of();
    if y > 0 || (y == 0 && v[0].sign_of() > 0) {
        0
    } else {
        1
    }
}

fn cross(u: &[Rc; 2], v: &[Rc; 2]) -> Rc {
    &u[0] * &v[1] - &u[1] * &v[0]
}

fn angle_cmp(u: &[Rc; 2], v: &[Rc; 2]) -> Ordering {
    half(u)
        .cmp(&half(v))
        .then_with(|| 0.cmp(&cross(u, v).sign_of()))
}

/// Interior points of the open sectors cut out by the lines
/// `{c : p·c = 0}`, in counter-clockwise order, together with the index of
/// the sector containing the direction `(1, 1)`.
fn sectors(ps: &[[Rc; 2]]) -> (Vec<[Rc; 2]>, usize) {
    let mut rays: Vec<[Rc; 2]> = vec![];
    for p in ps {
        let r = [-&p[1], p[0].clone()];
        for r in [r.clone(), [-&r[0], -&r[1]]] {
            let dup = rays
                .iter()
                .any(|q| cross(q, &r).is_zero() && (&q[0] * &r[0] + &q[1] * &r[1]).sign_of() > 0);
            if !dup {
                rays.push(r);
            }
        }
    }
    rays.sort_by(angle_cmp);
    let k = rays.len();
    let interior: Vec<[Rc; 2]> = (0..k)
        .map(|j| {
            let (r, s) = (&rays[j], &rays[(j + 1) % k]);
            if cross(r, s).sign_of() > 0 {
                [&r[0] + &s[0], &r[1] + &s[1]]
            } else {
                [-&r[1], r[0].clone()]
            }
        })
        .collect();
    let one = [rc_int(1), rc_int(1)];
    let start = rays
        .iter()
        .rposition(|r| angle_cmp(r, &one) != Ordering::Greater)
        .unwrap_or(k - 1);
    (interior, start)
}

pub fn build_positive_system(
    datum: &RootDatum,
    spec: &SpectralDecomposition,
    pair: &CarterPair,
    elem: &CarterElement,
) -> Result<AssociatedSystem, AtlasError> {
    let l = datum.rank();
    let n = pair.first_set.len();
    let gammas = pair.gammas();
    let lp = gammas.len();
    let all = datum.all_roots();
    let mut remaining: Vec<bool> = vec![true; all.len()];
    let root_pos: HashMap<&Root, usize> = all.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let mut sign = vec![1i64; lp];
    let adjusted = |sign: &[i64], k: usize| -> Root { gammas[k].iter().map(|&c| c * sign[k]).collect() };
    let mut positive = vec![false; all.len()];
    let mut strata = vec![];
    let order = elem.s.order();
    let s_powers: Vec<WeylElement> = (0..order).map(|c| elem.s.power(c)).collect();

    for (idx, sub) in spec.subspaces.iter().enumerate().rev() {
        match sub {
            InvariantSubspace::Plane(pl) => {
                let mut d = vec![];
                let mut p: HashMap<usize, [Rc; 2]> = HashMap::new();
                for (i, r) in all.iter().enumerate() {
                    if !remaining[i] {
                        continue;
                    }
                    let pa = rc_pairing_root(datum, r, &pl.a);
                    let pb = rc_pairing_root(datum, r, &pl.b);
                    if !pa.is_zero() || !pb.is_zero() {
                        d.push(i);
                        p.insert(i, [pa, pb]);
                    }
                }
                if d.is_empty() {
                    continue;
                }
                for &i in &d {
                    remaining[i] = false;
                }
                let geo = PlaneGeometry::new(datum, &pl.a, &pl.b);
                let in_d: Vec<usize> = (0..lp).filter(|&k| p.contains_key(&root_pos[&gammas[k]])).collect();
                let proj = |sign: &[i64], k: usize| -> [Rc; 2] {
                    let q = &p[&root_pos[&gammas[k]]];
                    let s = rc_int(sign[k]);
                    [&q[0] * &s, &q[1] * &s]
                };
                let mut heads = vec![];
                for set in [0..n, n..lp] {
                    let ks: Vec<usize> = in_d.iter().copied().filter(|k| set.contains(k)).collect();
                    if let Some(&k0) = ks.first() {
                        let r0 = proj(&sign, k0);
                        for &k in &ks[1..] {
                            if geo.ip(&proj(&sign, k), &r0).sign_of() < 0 {
                                sign[k] = -sign[k];
                            }
                        }
                        heads.push((k0, ks));
                    }
                }
                if heads.len() == 2 {
                    let v1 = proj(&sign, heads[0].0);
                    let v2 = proj(&sign, heads[1].0);
                    if geo.ip(&v1, &v2).sign_of() > 0 {
                        for &k in &heads[1].1 {
                            sign[k] = -sign[k];
                        }
                    }
                }
                let ps: Vec<[Rc; 2]> = d.iter().map(|i| p[i].clone()).collect();
                let (interior, start) = sectors(&ps);
                let to_vec = |c: &[Rc; 2]| -> Vec<Rc> {
                    (0..l)
                        .map(|j| &c[0] * &pl.a[j] + &c[1] * &pl.b[j])
                        .collect()
                };
                let admissible = |x: &[Rc]| in_d.iter().all(|&k| rc_pairing_root(datum, &adjusted(&sign, k), x).sign_of() > 0);
                let x0 = to_vec(&interior[start]);
                let mut chosen = None;
                for w in &s_powers {
                    let x = apply_rc(w, &x0);
                    if admissible(&x) {
                        chosen = Some(x);
                        break;
                    }
                }
                if chosen.is_none() {
                    let k = interior.len();
                    chosen = (0..k)
                        .map(|j| to_vec(&interior[(start + j) % k]))
                        .find(|x| admissible(x));
                }
                let x = chosen.ok_or_else(|| AtlasError::NoSector(format!("plane with turn {}", pl.turn)))?;
                let mut roots = vec![];
                for &i in &d {
                    let sg = rc_pairing_root(datum, &all[i], &x).sign_of();
                    if sg == 0 {
                        return Err(AtlasError::NoSector("generic element is orthogonal to a root".into()));
                    }
                    positive[i] = sg > 0;
                    roots.push(all[i].clone());
                }
                strata.push(Stratum {
                    subspace: idx,
                    roots,
                    generic: GenericElement::Plane(x),
                });
            }
            InvariantSubspace::Line(line) => {
                let v = &line.vector;
                let pr = |r: &[i64]| -> Rational {
                    let a: Vec<Rational> = r.iter().map(|&c| int(c)).collect();
                    rational_pairing(datum, &a, v)
                };
                let d: Vec<usize> = (0..all.len())
                    .filter(|&i| remaining[i] && pr(&all[i]) != int(0))
                    .collect();
                if d.is_empty() {
                    continue;
                }
                for &i in &d {
                    remaining[i] = false;
                }
                for k in 0..lp {
                    if d.contains(&root_pos[&gammas[k]]) && Field::sign(&pr(&adjusted(&sign, k))) < 0 {
                        sign[k] = -sign[k];
                    }
                }
                let mut roots = vec![];
                for &i in &d {
                    positive[i] = Field::sign(&pr(&all[i])) > 0;
                    roots.push(all[i].clone());
                }
                strata.push(Stratum {
                    subspace: idx,
                    roots,
                    generic: GenericElement::Line(v.clone()),
                });
            }
            InvariantSubspace::Fixed { .. } => {
                let mut roots = vec![];
                for i in 0..all.len() {
                    if remaining[i] {
                        positive[i] = i < datum.positive_roots.len();
                        roots.push(all[i].clone());
                    }
                }
                strata.push(Stratum {
                    subspace: 0,
                    roots,
                    generic: GenericElement::Standard,
                });
            }
        }
    }

    let positive_roots: Vec<Root> = all
        .iter()
        .enumerate()
        .filter(|(i, _)| positive[*i])
        .map(|(_, r)| r.clone())
        .collect();
    if positive_roots.len() != datum.positive_roots.len() {
        return Err(AtlasError::Inconsistent(format!(
            "{} positive roots instead of {}",
            positive_roots.len(),
            datum.positive_roots.len()
        )));
    }
    let pos_set: HashSet<&Root> = positive_roots.iter().collect();
    let adjusted_gammas = CarterPair {
        first_set: (0..n).map(|k| adjusted(&sign, k)).collect(),
        second_set: (n..lp).map(|k| adjusted(&sign, k)).collect(),
    };
    if let Some(g) = adjusted_gammas.gammas().iter().find(|g| !pos_set.contains(g)) {
        return Err(AtlasError::Inconsistent(format!("adjusted γ {g:?} is not positive")));
    }
    let simple: Vec<Root> = positive_roots
        .iter()
        .filter(|a| {
            !positive_roots.iter().any(|b| {
                let d: Root = a.iter().zip(b.iter()).map(|(x, y)| x - y).collect();
                pos_set.contains(&d)
            })
        })
        .cloned()
        .collect();
    if simple.len() != l {
        return Err(AtlasError::Inconsistent(format!("{} simple roots instead of {l}", simple.len())));
    }
    let renumbering = match_cartan(datum, &simple)
        .ok_or_else(|| AtlasError::Inconsistent("simple roots do not match the Cartan matrix".into()))?;
    let mut simple_roots = vec![vec![]; l];
    for (i, &k) in renumbering.iter().enumerate() {
        simple_roots[k] = simple[i].clone();
    }
    let fixed_roots = strata.last().map(|s: &Stratum| s.roots.clone()).unwrap_or_default();
    Ok(AssociatedSystem {
        positive_roots,
        simple_roots,
        strata,
        renumbering,
        adjusted_gammas,
        fixed_roots,
    })
}

/// The lexicographically first assignment of standard labels to the given
/// simple roots under which the Cartan matrices agree.
fn match_cartan(datum: &RootDatum, simple: &[Root]) -> Option<Vec<usize>> {
    let l = simple.len();
    let c: Vec<Vec<i64>> = simple
        .iter()
        .map(|a| simple.iter().map(|b| datum.coroot_pairing(b, a)).collect())
        .collect();
    // c[i][j] = <α_j, α_i^∨> = a_ij for the standard basis
    let target = &datum.cartan;
    // assign[k] = which simple root carries standard label k
    fn go(k: usize, assign: &mut Vec<usize>, used: &mut [bool], c: &[Vec<i64>], t: &[Vec<i64>]) -> bool {
        let l = used.len();
        if k == l {
            return true;
        }
        for cand in 0..l {
            if used[cand] {
                continue;
            }
            let ok = (0..k).all(|j| c[assign[j]][cand] == t[j][k] && c[cand][assign[j]] == t[k][j]);
            if ok {
                used[cand] = true;
                assign.push(cand);
                if go(k + 1, assign, used, c, t) {
                    return true;
                }
                assign.pop();
                used[cand] = false;
            }
        }
        false
    }
    let mut assign = vec![];
    let mut used = vec![false; l];
    if !go(0, &mut assign, &mut used, &c, target) {
        return None;
    }
    let mut renum = vec![0; l];
    for (k, &i) in assign.iter().enumerate() {
        renum[i] = k;
    }
    Some(renum)
}

/// The full pipeline for one pair.
pub fn associated_system(datum: &RootDatum, pair: &CarterPair) -> Result<(CarterElement, SpectralDecomposition, AssociatedSystem), AtlasError> {
    associated_system_with(datum, pair, TieOrder::Lex)
}

pub fn associated_system_with(
    datum: &RootDatum,
    pair: &CarterPair,
    tie: TieOrder,
) -> Result<(CarterElement, SpectralDecomposition, AssociatedSystem), AtlasError> {
    let elem = from_carter(datum, pair)?;
    let spec = spectral_decomposition_with(datum, pair, &elem, tie)?;
    let assoc = build_positive_system(datum, &spec, pair, &elem)?;
    Ok((elem, spec, assoc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_scalar::rat;
    use crate::root_system::{Family, TypeLabel};

    fn datum(f: Family, r: usize) -> RootDatum {
        RootDatum::new(TypeLabel::new(f, r).unwrap()).unwrap()
    }

    #[test]
    fn a2_coxeter_plane() {
        let d = datum(Family::A, 2);
        let pair = CarterPair::from_indices(&d, &[1], &[2]).unwrap();
        let spec = spectral_decomposition(&d, &pair).unwrap();
        assert_eq!(spec.subspaces.len(), 2);
        match &spec.subspaces[1] {
            InvariantSubspace::Plane(p) => {
                assert_eq!(p.turn, rat(1, 3));
                assert_eq!(p.lambda.to_rational(), Some(rat(1, 2)));
            }
            other => panic!("expected a plane, got {other:?}"),
        }
    }

    #[test]
    fn reflection_line() {
        let d = datum(Family::A, 3);
        let pair = CarterPair::from_indices(&d, &[2], &[]).unwrap();
        let (_, spec, assoc) = associated_system(&d, &pair).unwrap();
        assert!(matches!(&spec.subspaces[0], InvariantSubspace::Fixed { basis } if basis.len() == 2));
        assert!(matches!(&spec.subspaces[1], InvariantSubspace::Line(_)));
        assert_eq!(assoc.fixed_roots.len(), 2);
    }

    #[test]
    fn identity_gives_standard_system() {
        let d = datum(Family::E, 6);
        let (_, _, assoc) = associated_system(&d, &CarterPair::empty()).unwrap();
        assert_eq!(assoc.positive_roots, d.positive_roots);
        assert_eq!(assoc.strata.len(), 1);
        assert_eq!(assoc.simple_roots, (0..6).map(|i| d.simple_root(i)).collect::<Vec<_>>());
    }

    #[test]
    fn a1_reflection() {
        let d = datum(Family::A, 1);
        let pair = CarterPair::from_indices(&d, &[1], &[]).unwrap();
        let (_, _, assoc) = associated_system(&d, &pair).unwrap();
        assert_eq!(assoc.positive_roots, vec![vec![1]]);
        assert!(assoc.fixed_roots.is_empty());
    }

    #[test]
    fn g2_a1_class() {
        let d = datum(Family::G, 2);
        let pair = CarterPair::from_indices(&d, &[6], &[]).unwrap();
        let (_, _, assoc) = associated_system(&d, &pair).unwrap();
        assert_eq!(assoc.fixed_roots.len(), 2);
        assert_eq!(assoc.fixed_simple_indices(), vec![1]);
    }

    #[test]
    fn f4_d4a1_planes() {
        let d = datum(Family::F, 4);
        let pair = CarterPair::from_indices(&d, &[16, 2], &[5, 11]).unwrap();
        let spec = spectral_decomposition(&d, &pair).unwrap();
        assert_eq!(spec.spectrum.fixed_dim, 0);
        assert_eq!(spec.spectrum.planes, vec![rat(1, 4), rat(1, 4)]);
    }
}
