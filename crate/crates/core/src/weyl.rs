//! Weyl group elements as integer matrices on `h*`, Carter decompositions
//! `s = s1 s2`, lengths, rotation spectra, and classical representatives.

use crate::exact_scalar::{cyclotomic_polynomial, int, Rational};
use crate::linalg::{charpoly, rank, Mat};
use crate::root_system::{Family, Root, RootDatum, TypeLabel};
use crate::AtlasError;
use num_integer::Integer;
use num_traits::Zero;
use std::collections::HashSet;
use std::fmt;

/// Two sets of mutually orthogonal roots `(γ_1..γ_n | γ_{n+1}..γ_l')`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CarterPair {
    pub first_set: Vec<Root>,
    pub second_set: Vec<Root>,
}

impl CarterPair {
    pub fn empty() -> Self {
        CarterPair {
            first_set: vec![],
            second_set: vec![],
        }
    }

    pub fn gammas(&self) -> Vec<Root> {
        self.first_set
            .iter()
            .chain(&self.second_set)
            .cloned()
            .collect()
    }

    pub fn len(&self) -> usize {
        self.first_set.len() + self.second_set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Builds a pair from 1-based positive-root indices.
    pub fn from_indices(datum: &RootDatum, s1: &[usize], s2: &[usize]) -> Result<Self, AtlasError> {
        let get = |i: &usize| {
            datum
                .root(*i)
                .cloned()
                .ok_or_else(|| AtlasError::InvalidPair(format!("root index {i} out of range")))
        };
        Ok(CarterPair {
            first_set: s1.iter().map(get).collect::<Result<_, _>>()?,
            second_set: s2.iter().map(get).collect::<Result<_, _>>()?,
        })
    }
}

/// An element of `W` acting on coordinate vectors in the simple-root basis:
/// the image of `v` is `matrix · v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    pub matrix: Vec<Vec<i64>>,
}

impl WeylElement {
    pub fn identity(l: usize) -> Self {
        WeylElement {
            matrix: (0..l)
                .map(|i| (0..l).map(|j| i64::from(i == j)).collect())
                .collect(),
        }
    }

    pub fn reflection(datum: &RootDatum, a: &[i64]) -> Self {
        let l = datum.rank();
        let cols: Vec<Root> = (0..l).map(|j| datum.reflect(a, &datum.simple_root(j))).collect();
        WeylElement {
            matrix: (0..l).map(|i| (0..l).map(|j| cols[j][i]).collect()).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, v: &[i64]) -> Root {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let l = self.rank();
        WeylElement {
            matrix: (0..l)
                .map(|i| {
                    (0..l)
                        .map(|j| (0..l).map(|k| self.matrix[i][k] * other.matrix[k][j]).sum())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == WeylElement::identity(self.rank())
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.compose(self);
            k += 1;
            assert!(k <= 10_000, "element of infinite order");
        }
        k
    }

    pub fn power(&self, e: usize) -> WeylElement {
        let mut p = WeylElement::identity(self.rank());
        for _ in 0..e {
            p = p.compose(self);
        }
        p
    }

    pub fn rational_matrix(&self) -> Mat<Rational> {
        self.matrix
            .iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }
}

/// `s = s1 s2` together with its two involutive factors.
#[derive(Clone, Debug)]
pub struct CarterElement {
    pub s: WeylElement,
    pub s1: WeylElement,
    pub s2: WeylElement,
}

fn product_of_reflections(datum: &RootDatum, roots: &[Root]) -> WeylElement {
    roots.iter().fold(WeylElement::identity(datum.rank()), |acc, r| {
        acc.compose(&WeylElement::reflection(datum, r))
    })
}

/// Checks the pair invariants and returns `s = s1 s2`, `s1`, `s2`.
pub fn from_carter(datum: &RootDatum, pair: &CarterPair) -> Result<CarterElement, AtlasError> {
    for set in [&pair.first_set, &pair.second_set] {
        for (i, a) in set.iter().enumerate() {
            if !datum.is_root(a) {
                return Err(AtlasError::InvalidPair(format!("{a:?} is not a root")));
            }
            for b in &set[i + 1..] {
                if datum.pairing(a, b) != 0 {
                    return Err(AtlasError::InvalidPair(format!("{a:?} and {b:?} are not orthogonal")));
                }
            }
        }
    }
    let g: Mat<Rational> = pair
        .gammas()
        .iter()
        .map(|r| r.iter().map(|&x| int(x)).collect())
        .collect();
    if !g.is_empty() && rank(&g) != g.len() {
        return Err(AtlasError::InvalidPair("roots are linearly dependent".into()));
    }
    let s1 = product_of_reflections(datum, &pair.first_set);
    let s2 = product_of_reflections(datum, &pair.second_set);
    Ok(CarterElement {
        s: s1.compose(&s2),
        s1,
        s2,
    })
}

/// `l(w)` relative to the given positive system, and the roots fixed by `w`.
pub fn length_and_fixed(datum: &RootDatum, w: &WeylElement, positive: &[Root]) -> (usize, Vec<Root>) {
    let pos: HashSet<&Root> = positive.iter().collect();
    let length = positive
        .iter()
        .filter(|a| !pos.contains(&w.apply(a)))
        .count();
    let fixed = datum
        .all_roots()
        .into_iter()
        .filter(|a| &w.apply(a) == a)
        .collect();
    (length, fixed)
}

/// Eigenvalue data of a finite-order orthogonal transformation: the
/// characteristic polynomial is
/// `(x-1)^fixed_dim (x+1)^minus_one_dim Π (x^2 - 2cos(2πr)x + 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationSpectrum {
    pub fixed_dim: usize,
    pub minus_one_dim: usize,
    /// Turns `r ∈ (0, 1/2)`, ascending, with multiplicity.
    pub planes: Vec<Rational>,
}

fn poly_divides_exact(p: &[Rational], m: &[Rational]) -> Option<Vec<Rational>> {
    let dm = m.len() - 1;
    if p.len() <= dm {
        return None;
    }
    let mut r = p.to_vec();
    let mut q = vec![int(0); p.len() - dm];
    for i in (0..q.len()).rev() {
        let c = r[i + dm].clone() / &m[dm];
        if !c.is_zero() {
            for (j, mj) in m.iter().enumerate() {
                r[i + j] -= &c * mj;
            }
        }
        q[i] = c;
    }
    if r.iter().all(|x| x.is_zero()) {
        Some(q)
    } else {
        None
    }
}

pub fn rotation_spectrum(w: &WeylElement) -> RotationSpectrum {
    let order = w.order();
    let mut p = charpoly(&w.rational_matrix());
    let mut spec = RotationSpectrum {
        fixed_dim: 0,
        minus_one_dim: 0,
        planes: vec![],
    };
    for m in (1..=order).filter(|m| order % m == 0) {
        let phi: Vec<Rational> = cyclotomic_polynomial(m as u64)
            .into_iter()
            .map(Rational::from_integer)
            .collect();
        while let Some(q) = poly_divides_exact(&p, &phi) {
            p = q;
            match m {
                1 => spec.fixed_dim += 1,
                2 => spec.minus_one_dim += 1,
                _ => {
                    for k in (1..m).filter(|&k| 2 * k < m && k.gcd(&m) == 1) {
                        spec.planes.push(Rational::new(k.into(), m.into()));
                    }
                }
            }
        }
    }
    debug_assert_eq!(p.len(), 1);
    spec.planes.sort();
    spec
}

/// A class of a classical Weyl group: a partition of `n+1` for `A_n`, or a
/// pair `(λ, μ)` for `B_n, C_n, D_n` where the parts of `λ` are even
/// (`λ_i/2` are negative cycle lengths) and the parts of `μ` come in equal
/// pairs (each pair is one positive cycle).  `twisted` selects the second
/// `W(D_n)` class when `λ` is empty and every part of `μ` is even.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassSpec {
    Partition(Vec<usize>),
    Pair {
        lambda: Vec<usize>,
        mu: Vec<usize>,
        twisted: bool,
    },
}

fn sorted_desc(v: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = v.iter().copied().filter(|&x| x > 0).collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

impl ClassSpec {
    pub fn pair(lambda: &[usize], mu: &[usize]) -> Self {
        ClassSpec::Pair {
            lambda: sorted_desc(lambda),
            mu: sorted_desc(mu),
            twisted: false,
        }
    }

    /// Parses `4,1` (type A) or `2,2|1,1` (types B/C/D); a trailing `'`
    /// selects the twisted `D_n` class.
    pub fn parse(s: &str) -> Result<Self, AtlasError> {
        let parts = |t: &str| -> Result<Vec<usize>, AtlasError> {
            let t = t.trim();
            if t.is_empty() {
                return Ok(vec![]);
            }
            t.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<usize>()
                        .map_err(|_| AtlasError::Parse(format!("bad part `{x}` in `{s}`")))
                })
                .collect()
        };
        let (body, twisted) = match s.trim().strip_suffix('\'') {
            Some(b) => (b, true),
            None => (s.trim(), false),
        };
        match body.split_once('|') {
            Some((l, m)) => Ok(ClassSpec::Pair {
                lambda: sorted_desc(&parts(l)?),
                mu: sorted_desc(&parts(m)?),
                twisted,
            }),
            None if !twisted => Ok(ClassSpec::Partition(sorted_desc(&parts(body)?))),
            None => Err(AtlasError::Parse(format!("twist marker needs a pair in `{s}`"))),
        }
    }

    /// Checks admissibility for the type.
    pub fn validate(&self, label: TypeLabel) -> Result<(), AtlasError> {
        let bad = |m: String| Err(AtlasError::Domain(m));
        let n = label.rank;
        match (label.family, self) {
            (Family::A, ClassSpec::Partition(p)) => {
                if p.iter().sum::<usize>() != n + 1 {
                    return bad(format!("partition {p:?} is not a partition of {}", n + 1));
                }
                Ok(())
            }
            (Family::B | Family::C | Family::D, ClassSpec::Pair { lambda, mu, twisted }) => {
                if lambda.iter().sum::<usize>() + mu.iter().sum::<usize>() != 2 * n {
                    return bad(format!("parts of {self} do not sum to {}", 2 * n));
                }
                if lambda.iter().any(|x| x % 2 == 1) {
                    return bad(format!("λ has an odd part in {self}"));
                }
                if mu.chunks(2).any(|c| c.len() != 2 || c[0] != c[1]) {
                    return bad(format!("μ parts are not paired in {self}"));
                }
                if label.family == Family::D {
                    if lambda.len() % 2 == 1 {
                        return bad(format!("λ needs an even number of parts in {self}"));
                    }
                    if *twisted && !self.is_degenerate_d() {
                        return bad(format!("{self} has no twisted companion"));
                    }
                } else if *twisted {
                    return bad("twisted classes exist only in type D".into());
                }
                Ok(())
            }
            _ => bad(format!("class {self} does not fit type {label}")),
        }
    }

    pub fn is_degenerate_d(&self) -> bool {
        match self {
            ClassSpec::Pair { lambda, mu, .. } => lambda.is_empty() && mu.iter().all(|x| x % 2 == 0),
            _ => false,
        }
    }

    /// The expected signed cycle type, in the order returned by
    /// [`signed_cycle_type`].
    pub fn cycle_type(&self) -> Vec<i64> {
        let mut v: Vec<i64> = match self {
            ClassSpec::Partition(p) => p.iter().map(|&x| x as i64).collect(),
            ClassSpec::Pair { lambda, mu, .. } => lambda
                .iter()
                .map(|&x| -((x / 2) as i64))
                .chain(mu.chunks(2).map(|c| c[0] as i64))
                .collect(),
        };
        sort_cycles(&mut v);
        v
    }
}

impl fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            ClassSpec::Partition(p) => write!(f, "{}", j(p)),
            ClassSpec::Pair { lambda, mu, twisted } => {
                write!(f, "{}|{}{}", j(lambda), j(mu), if *twisted { "'" } else { "" })
            }
        }
    }
}

fn sort_cycles(v: &mut [i64]) {
    v.sort_by(|a, b| b.abs().cmp(&a.abs()).then_with(|| b.cmp(a)));
}

/// Coordinates of a root of a classical system in the standard
/// `ε`-realization (length `n+1` for `A_n`, `n` otherwise).
pub fn eps_coords(datum: &RootDatum, r: &[i64]) -> Vec<i64> {
    let n = datum.rank();
    let family = datum.label.family;
    let dim = if family == Family::A { n + 1 } else { n };
    let mut e = vec![0i64; dim];
    for (i, &c) in r.iter().enumerate() {
        if i + 1 < n || family == Family::A {
            e[i] += c;
            e[i + 1] -= c;
        } else {
            match family {
                Family::B => e[n - 1] += c,
                Family::C => e[n - 1] += 2 * c,
                Family::D => {
                    e[n - 2] += c;
                    e[n - 1] += c;
                }
                _ => panic!("eps_coords on an exceptional type"),
            }
        }
    }
    e
}

/// Inverse of [`eps_coords`]; `None` if the vector is not in the root
/// lattice.
pub fn from_eps(datum: &RootDatum, e: &[i64]) -> Option<Root> {
    let n = datum.rank();
    let family = datum.label.family;
    let partial: Vec<i64> = e
        .iter()
        .scan(0i64, |s, x| {
            *s += x;
            Some(*s)
        })
        .collect();
    let mut c: Vec<i64> = partial[..n].to_vec();
    match family {
        Family::A => {
            if partial[n] != 0 {
                return None;
            }
        }
        Family::B => {}
        Family::C => {
            if partial[n - 1] % 2 != 0 {
                return None;
            }
            c[n - 1] = partial[n - 1] / 2;
        }
        Family::D => {
            let t = partial[n - 2] - e[n - 1];
            if partial[n - 1] % 2 != 0 || t % 2 != 0 {
                return None;
            }
            c[n - 1] = partial[n - 1] / 2;
            c[n - 2] = t / 2;
        }
        _ => return None,
    }
    Some(c)
}

fn eps_root(datum: &RootDatum, e: &[i64]) -> Root {
    let r = from_eps(datum, e).expect("vector outside the root lattice");
    debug_assert!(datum.is_root(&r), "{e:?} is not a root");
    r
}

/// Action of `w` on the `ε`-basis of a classical realization, as a signed
/// permutation: entry `j` is `±(k+1)` when `w(ε_{j+1}) = ±ε_{k+1}`.
pub fn signed_permutation(datum: &RootDatum, w: &WeylElement) -> Result<Vec<i64>, AtlasError> {
    let n = datum.rank();
    let family = datum.label.family;
    let dim = if family == Family::A { n + 1 } else { n };
    // images of ε_i - ε_j and ε_i + ε_j determine the signed image of ε_i
    let image = |e: &[i64]| -> Result<Vec<i64>, AtlasError> {
        let r = from_eps(datum, e).ok_or(AtlasError::NotSignedPermutation)?;
        Ok(eps_coords(datum, &w.apply(&r)))
    };
    let unit = |i: usize, s: i64, j: usize, t: i64| {
        let mut v = vec![0i64; dim];
        v[i] += s;
        v[j] += t;
        v
    };
    let mut out = vec![0i64; dim];
    for i in 0..dim {
        if family == Family::A {
            // σ(i) is the common positive index of the images of ε_i - ε_j
            let mut cands: Option<HashSet<usize>> = None;
            for j in (0..dim).filter(|&j| j != i) {
                let im = image(&unit(i, 1, j, -1))?;
                let pos: HashSet<usize> = (0..dim).filter(|&k| im[k] == 1).collect();
                cands = Some(match cands {
                    None => pos,
                    Some(c) => c.intersection(&pos).copied().collect(),
                });
            }
            let c = cands.unwrap_or_default();
            if c.len() != 1 {
                return Err(AtlasError::NotSignedPermutation);
            }
            out[i] = *c.iter().next().unwrap() as i64 + 1;
        } else {
            let j = if i + 1 < dim { i + 1 } else { i - 1 };
            let a = image(&unit(i, 1, j, -1))?;
            let b = image(&unit(i, 1, j, 1))?;
            // 2 w(ε_i) = w(ε_i - ε_j) + w(ε_i + ε_j)
            let v: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            let nz: Vec<usize> = (0..dim).filter(|&k| v[k] != 0).collect();
            if nz.len() != 1 || v[nz[0]].abs() != 2 {
                return Err(AtlasError::NotSignedPermutation);
            }
            out[i] = v[nz[0]].signum() * (nz[0] as i64 + 1);
        }
    }
    Ok(out)
}

/// Signed cycle type of a signed permutation (as returned by
/// [`signed_permutation`]): cycle lengths, negated for negative cycles,
/// sorted by decreasing length with positive cycles first on ties.
pub fn signed_cycle_type_of(perm: &[i64]) -> Result<Vec<i64>, AtlasError> {
    let n = perm.len();
    let mut targets: Vec<usize> = perm.iter().map(|&x| x.unsigned_abs() as usize).collect();
    if targets.iter().any(|&t| t == 0 || t > n) {
        return Err(AtlasError::NotSignedPermutation);
    }
    let mut check = targets.clone();
    check.sort_unstable();
    if check != (1..=n).collect::<Vec<_>>() {
        return Err(AtlasError::NotSignedPermutation);
    }
    for t in targets.iter_mut() {
        *t -= 1;
    }
    let mut seen = vec![false; n];
    let mut out = vec![];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut len = 0i64;
        let mut sign = 1i64;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            sign *= perm[i].signum();
            i = targets[i];
            len += 1;
        }
        out.push(sign * len);
    }
    sort_cycles(&mut out);
    Ok(out)
}

/// Signed cycle type of `w` in the `ε`-realization of a classical system
/// (ordinary cycle type for type `A`).
pub fn signed_cycle_type(datum: &RootDatum, w: &WeylElement) -> Result<Vec<i64>, AtlasError> {
    signed_cycle_type_of(&signed_permutation(datum, w)?)
}

/// The diagram automorphism of `D_n` exchanging `α_{n-1}` and `α_n`
/// (the sign change of `ε_n`).
pub fn d_diagram_automorphism(r: &[i64]) -> Root {
    let mut r = r.to_vec();
    let n = r.len();
    r.swap(n - 2, n - 1);
    r
}

/// A Carter pair for the given classical class: blocks on consecutive
/// coordinate ranges in non-increasing part order, each block a bipartite
/// product of reflections colored by global coordinate parity.
pub fn classical_representative(label: TypeLabel, spec: &ClassSpec) -> Result<CarterPair, AtlasError> {
    spec.validate(label)?;
    let datum = RootDatum::new(label)?;
    let dim = if label.family == Family::A {
        label.rank + 1
    } else {
        label.rank
    };
    let mut pair = CarterPair::empty();
    let mut push = |pos: usize, e: Vec<i64>| {
        let r = eps_root(&datum, &e);
        if pos % 2 == 1 {
            pair.first_set.push(r);
        } else {
            pair.second_set.push(r);
        }
    };
    let diff = |i: usize| {
        let mut v = vec![0i64; dim];
        v[i - 1] = 1;
        v[i] = -1;
        v
    };
    let chain = |push: &mut dyn FnMut(usize, Vec<i64>), p: usize, k: usize| {
        for i in 1..k {
            push(p + i, diff(p + i));
        }
    };
    match spec {
        ClassSpec::Partition(parts) => {
            let mut p = 0;
            for &k in parts {
                chain(&mut push, p, k);
                p += k;
            }
        }
        ClassSpec::Pair { lambda, mu, twisted } => {
            enum Block {
                Neg(Vec<usize>),
                Pos(usize),
            }
            // blocks in non-increasing order of the part value; λ first on ties
            let mut items: Vec<(usize, u8, usize)> = lambda.iter().map(|&x| (x, 0, x / 2)).collect();
            items.extend(mu.chunks(2).map(|c| (c[0], 1, c[0])));
            items.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            let mut blocks: Vec<Block> = vec![];
            let negs: Vec<usize> = items.iter().filter(|x| x.1 == 0).map(|x| x.2).collect();
            let mut neg_iter = negs.chunks(match label.family {
                Family::C => 1,
                _ => 2,
            });
            for it in &items {
                if it.1 == 1 {
                    blocks.push(Block::Pos(it.2));
                } else if let Some(group) = neg_iter.next() {
                    blocks.push(Block::Neg(group.to_vec()));
                }
            }
            let mut p = 0;
            for b in blocks {
                match b {
                    Block::Pos(k) => {
                        chain(&mut push, p, k);
                        p += k;
                    }
                    Block::Neg(g) if g.len() == 1 => {
                        let k = g[0];
                        chain(&mut push, p, k);
                        let mut v = vec![0i64; dim];
                        v[p + k - 1] = if label.family == Family::C { 2 } else { 1 };
                        push(p + k, v);
                        p += k;
                    }
                    Block::Neg(g) => {
                        let (i, j) = (g[0], g[1]);
                        chain(&mut push, p, i + j);
                        let mut v = vec![0i64; dim];
                        v[p + i - 1] = 1;
                        v[p + i] = 1;
                        push(p + i, v);
                        p += i + j;
                    }
                }
            }
            if *twisted {
                for r in pair.first_set.iter_mut().chain(pair.second_set.iter_mut()) {
                    *r = d_diagram_automorphism(r);
                }
            }
        }
    }
    Ok(pair)
}

/// One line of a Carter representative file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarterEntry {
    pub name: String,
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
}

/// Parses `class_name ; s1 = i,i,... ; s2 = i,i,...` lines.
pub fn parse_carter_file(text: &str) -> Result<Vec<CarterEntry>, AtlasError> {
    let mut out = vec![];
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let err = |m: &str| AtlasError::Data(format!("carter file line {}: {m}", n + 1));
        let fields: Vec<&str> = line.split(';').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(err("expected three `;`-separated fields"));
        }
        let list = |f: &str, key: &str| -> Result<Vec<usize>, AtlasError> {
            let rest = f
                .strip_prefix(key)
                .and_then(|r| r.trim_start().strip_prefix('='))
                .ok_or_else(|| err(&format!("missing `{key} =`")))?;
            rest.split(',')
                .map(str::trim)
                .filter(|x| !x.is_empty())
                .map(|x| x.parse().map_err(|_| err(&format!("bad index `{x}`"))))
                .collect()
        };
        out.push(CarterEntry {
            name: fields[0].to_string(),
            s1: list(fields[1], "s1")?,
            s2: list(fields[2], "s2")?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_scalar::rat;

    fn datum(f: Family, r: usize) -> RootDatum {
        RootDatum::new(TypeLabel::new(f, r).unwrap()).unwrap()
    }

    #[test]
    fn carter_examples() {
        let a1 = datum(Family::A, 1);
        let e = from_carter(&a1, &CarterPair::from_indices(&a1, &[1], &[]).unwrap()).unwrap();
        assert_eq!(e.s.matrix, vec![vec![-1]]);
        let a2 = datum(Family::A, 2);
        let e = from_carter(&a2, &CarterPair::from_indices(&a2, &[1], &[2]).unwrap()).unwrap();
        assert_eq!(e.s.order(), 3);
        let g2 = datum(Family::G, 2);
        let e = from_carter(&g2, &CarterPair::from_indices(&g2, &[1], &[2]).unwrap()).unwrap();
        assert_eq!(e.s.order(), 6);
        assert_eq!(e.s1.compose(&e.s1), WeylElement::identity(2));
        let bad = CarterPair::from_indices(&a2, &[1, 2], &[]).unwrap();
        assert!(from_carter(&a2, &bad).is_err());
    }

    #[test]
    fn lengths() {
        let a2 = datum(Family::A, 2);
        let id = WeylElement::identity(2);
        let (l, f) = length_and_fixed(&a2, &id, &a2.positive_roots);
        assert_eq!((l, f.len()), (0, 6));
        let w0 = WeylElement {
            matrix: vec![vec![0, -1], vec![-1, 0]],
        };
        let (l, f) = length_and_fixed(&a2, &w0, &a2.positive_roots);
        assert_eq!((l, f.len()), (3, 0));
    }

    #[test]
    fn spectra() {
        let a2 = datum(Family::A, 2);
        let e = from_carter(&a2, &CarterPair::from_indices(&a2, &[1], &[2]).unwrap()).unwrap();
        let sp = rotation_spectrum(&e.s);
        assert_eq!((sp.fixed_dim, sp.minus_one_dim), (0, 0));
        assert_eq!(sp.planes, vec![rat(1, 3)]);
        let e6 = datum(Family::E, 6);
        let r = WeylElement::reflection(&e6, &e6.positive_roots[10]);
        let sp = rotation_spectrum(&r);
        assert_eq!((sp.fixed_dim, sp.minus_one_dim, sp.planes.len()), (5, 1, 0));
        assert_eq!(rotation_spectrum(&WeylElement::identity(4)).fixed_dim, 4);
    }

    #[test]
    fn eps_roundtrip() {
        for (f, r) in [(Family::A, 4), (Family::B, 4), (Family::C, 4), (Family::D, 5)] {
            let d = datum(f, r);
            for root in d.all_roots() {
                assert_eq!(from_eps(&d, &eps_coords(&d, &root)), Some(root));
            }
        }
    }

    #[test]
    fn representative_examples() {
        let a3 = TypeLabel::new(Family::A, 3).unwrap();
        let p = classical_representative(a3, &ClassSpec::Partition(vec![4])).unwrap();
        assert_eq!(p.first_set, vec![vec![1, 0, 0], vec![0, 0, 1]]);
        assert_eq!(p.second_set, vec![vec![0, 1, 0]]);
        let c2 = TypeLabel::new(Family::C, 2).unwrap();
        let p = classical_representative(c2, &ClassSpec::pair(&[2, 2], &[])).unwrap();
        let d = RootDatum::new(c2).unwrap();
        assert_eq!(p.first_set, vec![from_eps(&d, &[2, 0]).unwrap()]);
        assert_eq!(p.second_set, vec![from_eps(&d, &[0, 2]).unwrap()]);
        let e = from_carter(&d, &p).unwrap();
        assert_eq!(signed_cycle_type(&d, &e.s).unwrap(), vec![-1, -1]);
        let d4 = TypeLabel::new(Family::D, 4).unwrap();
        let p = classical_representative(d4, &ClassSpec::pair(&[], &[1; 8])).unwrap();
        assert!(p.is_empty());
    }

    #[test]
    fn representatives_have_requested_cycle_type() {
        for (f, n) in [(Family::B, 5), (Family::C, 5), (Family::D, 5), (Family::D, 4)] {
            let label = TypeLabel::new(f, n).unwrap();
            let d = RootDatum::new(label).unwrap();
            for a in 0..=n {
                for lam in crate::weyl::tests::partitions(a) {
                    for half_mu in crate::weyl::tests::partitions(n - a) {
                        let lambda: Vec<usize> = lam.iter().map(|x| 2 * x).collect();
                        let mu: Vec<usize> = half_mu.iter().flat_map(|&x| [x, x]).collect();
                        let spec = ClassSpec::pair(&lambda, &mu);
                        if spec.validate(label).is_err() {
                            continue;
                        }
                        let p = classical_representative(label, &spec).unwrap();
                        let e = from_carter(&d, &p).unwrap();
                        assert_eq!(signed_cycle_type(&d, &e.s).unwrap(), spec.cycle_type(), "{f:?}{n} {spec}");
                    }
                }
            }
        }
    }

    pub(crate) fn partitions(n: usize) -> Vec<Vec<usize>> {
        fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if n == 0 {
                out.push(cur.clone());
                return;
            }
            for k in (1..=n.min(max)).rev() {
                cur.push(k);
                go(n - k, k, cur, out);
                cur.pop();
            }
        }
        let mut out = vec![];
        go(n, n, &mut vec![], &mut out);
        out
    }

    #[test]
    fn signed_cycles() {
        assert_eq!(signed_cycle_type_of(&[1, 2, 3]).unwrap(), vec![1, 1, 1]);
        assert_eq!(signed_cycle_type_of(&[2, 1, 3]).unwrap(), vec![2, 1]);
        assert_eq!(signed_cycle_type_of(&[-1, -2]).unwrap(), vec![-1, -1]);
        assert!(signed_cycle_type_of(&[1, 1]).is_err());
    }

    #[test]
    fn carter_file() {
        let e = parse_carter_file("A1 ; s1 = 6 ; s2 = \n~A1 ; s1 = 6 ; s2 = 1\n").unwrap();
        assert_eq!(e[1].s1, vec![6]);
        assert_eq!(e[1].s2, vec![1]);
        assert!(e[0].s2.is_empty());
    }
}
