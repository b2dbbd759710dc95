//! Table rows for conjugacy classes: `l(s)`, the fixed subsystem,
//! `dim Σ_s`, and the invariants `d` and `q`; plus closed-form oracles for
//! single-cycle elements and block diagrams of classical types.

use crate::assoc_positive::{associated_system_with, AssociatedSystem, TieOrder};
use crate::exact_scalar::{int, rat, Rational, RealCyclotomic as Rc};
use crate::linalg::{hermite_rows, inverse, kernel, mat_mul, smith_diagonal, Mat};
use crate::root_system::{classify_gram, Family, Root, RootDatum, TypeLabel};
use crate::strata_classical::{weyl_class_blocks, Block};
use crate::weyl::{length_and_fixed, CarterPair, ClassSpec, WeylElement};
use crate::AtlasError;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;
use std::collections::HashSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceReport {
    pub class_name: String,
    pub dim_h0: usize,
    pub n_fixed_roots: usize,
    pub fixed_type: String,
    pub fixed_simple_indices: Vec<usize>,
    pub length: usize,
    pub dim_sigma: usize,
    pub d_lower: u64,
    pub d_upper: u64,
    pub q: Option<u64>,
}

pub fn slice_report(
    datum: &RootDatum,
    class_name: &str,
    assoc: &AssociatedSystem,
    w: &WeylElement,
    pair: &CarterPair,
) -> Result<SliceReport, AtlasError> {
    let (length, fixed) = length_and_fixed(datum, w, &assoc.positive_roots);
    let dim_h0 = datum.rank() - pair.len();
    let fixed_simple = assoc.fixed_simple_roots();
    let fixed_type = datum.classify_subsystem(&fixed_simple)?.type_string;
    let (d_lower, d_upper) = compute_d(datum, assoc)?;
    let q = compute_q(datum, assoc)?;
    Ok(SliceReport {
        class_name: class_name.to_string(),
        dim_h0,
        n_fixed_roots: fixed.len(),
        fixed_type,
        fixed_simple_indices: assoc.fixed_simple_indices(),
        length,
        dim_sigma: length + fixed.len() + dim_h0,
        d_lower,
        d_upper,
        q,
    })
}

/// Runs the whole pipeline on a pair.
pub fn report_for_pair(datum: &RootDatum, class_name: &str, pair: &CarterPair) -> Result<SliceReport, AtlasError> {
    report_for_pair_with(datum, class_name, pair, TieOrder::Lex).map(|(r, _)| r)
}

pub fn report_for_pair_with(
    datum: &RootDatum,
    class_name: &str,
    pair: &CarterPair,
    tie: TieOrder,
) -> Result<(SliceReport, AssociatedSystem), AtlasError> {
    let (elem, _, assoc) = associated_system_with(datum, pair, tie)?;
    let r = slice_report(datum, class_name, &assoc, &elem.s, pair)?;
    Ok((r, assoc))
}

fn lcm_denominators<'a>(xs: impl Iterator<Item = &'a Rational>) -> u64 {
    xs.fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()))
        .to_u64()
        .expect("denominator overflow")
}

/// The matrix `p_ij = (1/d_j) Σ_{p,q} ε_pq (γ_p, γ_q)(α_i, γ_p*)(α_j, γ_q*)`
/// with `ε_pq = -1` for `p < q`, `1` for `p > q`, over the associated
/// simple roots and adjusted γ's.
pub fn p_matrix(datum: &RootDatum, assoc: &AssociatedSystem) -> Result<Mat<Rational>, AtlasError> {
    let l = datum.rank();
    let g: Vec<Root> = assoc.adjusted_gammas.gammas();
    let lp = g.len();
    if lp == 0 {
        return Ok(vec![vec![int(0); l]; l]);
    }
    let gram: Mat<Rational> = g
        .iter()
        .map(|a| g.iter().map(|b| int(datum.pairing(a, b))).collect())
        .collect();
    let gi = inverse(&gram).ok_or_else(|| AtlasError::InvalidPair("γ's are linearly dependent".into()))?;
    // a[i][p] = (α_i, γ_p*), γ_p* = Σ_q gi[p][q] γ_q
    let a: Mat<Rational> = assoc
        .simple_roots
        .iter()
        .map(|al| {
            let ag: Vec<Rational> = g.iter().map(|gq| int(datum.pairing(al, gq))).collect();
            (0..lp)
                .map(|p| (0..lp).map(|q| &gi[p][q] * &ag[q]).sum())
                .collect()
        })
        .collect();
    let mut out = vec![vec![int(0); l]; l];
    for i in 0..l {
        for j in 0..l {
            let mut tot = int(0);
            for p in 0..lp {
                for q in 0..lp {
                    if p == q || gram[p][q] == int(0) {
                        continue;
                    }
                    let e = if p < q { int(-1) } else { int(1) };
                    tot += e * &gram[p][q] * &a[i][p] * &a[j][q];
                }
            }
            out[i][j] = tot / int(datum.symmetrizers[j]);
        }
    }
    Ok(out)
}

/// `(d_lower, d_upper)`: lcm of the denominators of `p_ij` over `i < j`
/// and over `i > j`.
pub fn compute_d(datum: &RootDatum, assoc: &AssociatedSystem) -> Result<(u64, u64), AtlasError> {
    let p = p_matrix(datum, assoc)?;
    let l = datum.rank();
    let lower = lcm_denominators((0..l).flat_map(|i| (i + 1..l).map(move |j| (i, j))).map(|(i, j)| &p[i][j]));
    let upper = lcm_denominators((0..l).flat_map(|i| (0..i).map(move |j| (i, j))).map(|(i, j)| &p[i][j]));
    Ok((lower, upper))
}

/// The integer matrix `G_kj = Y_j(γ_k) = d_j c_kj`, where `c_kj` are the
/// coordinates of the adjusted `γ_k` in the associated simple basis.
pub fn y_matrix(datum: &RootDatum, assoc: &AssociatedSystem) -> Result<Vec<Vec<i64>>, AtlasError> {
    assoc
        .adjusted_gammas
        .gammas()
        .iter()
        .map(|g| {
            let c = assoc
                .simple_coords(g)
                .ok_or_else(|| AtlasError::Inconsistent(format!("γ {g:?} has non-integral coordinates")))?;
            Ok(c.iter().zip(&datum.symmetrizers).map(|(x, d)| x * d).collect())
        })
        .collect()
}

/// The exponent of the odd part of `{x : Y_j(Σ x_k γ_k) ∈ Z for all j} / Z^{l'}`,
/// i.e. the lcm of the odd denominators of all nontrivial solutions with
/// `|x_k| < 1`; `None` when there are none.
pub fn compute_q(datum: &RootDatum, assoc: &AssociatedSystem) -> Result<Option<u64>, AtlasError> {
    let g = y_matrix(datum, assoc)?;
    Ok(q_from_y(&g))
}

pub fn q_from_y(g: &[Vec<i64>]) -> Option<u64> {
    if g.is_empty() {
        return None;
    }
    let m: Vec<Vec<i128>> = g.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let diag = smith_diagonal(&m);
    let q = diag.iter().fold(1u64, |acc, &d| {
        let mut d = d as u64;
        while d % 2 == 0 {
            d /= 2;
        }
        acc.lcm(&d)
    });
    (q > 1).then_some(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CycleSign {
    Positive,
    Negative,
}

/// Type string of a rank-`m` system of the family, normalized to its
/// canonical name (`B1 = A1`, `C2 = B2`, `D3 = A3`, ...).
pub fn normalized_type(family: Family, m: usize) -> String {
    match (family, m) {
        (_, 0) => String::new(),
        (Family::B | Family::C, 1) => "A1".into(),
        (Family::C, 2) => "B2".into(),
        (Family::D, 1) => String::new(),
        (Family::D, 2) => "2A1".into(),
        (Family::D, 3) => "A3".into(),
        (f, m) => format!("{}{m}", f.letter()),
    }
}

/// Closed forms for `(l(s), Δ_0^s)` when `s` has a single nontrivial cycle.
/// `n` is the dimension of the `ε`-space (`Δ = A_{n-1}` for type A).  A
/// positive cycle has length `k` with `1 < k ≤ n`; a negative one has length
/// `k/2` with `k` even and `k/2 ≤ n`.
pub fn single_cycle_oracle(family: Family, n: usize, k: usize, sign: CycleSign) -> Result<(usize, String), AtlasError> {
    let out_of_scope = || AtlasError::Domain(format!("{}{n}: cycle k={k} {sign:?} is outside the closed forms", family.letter()));
    match sign {
        CycleSign::Positive => {
            if k < 2 || k > n {
                return Err(out_of_scope());
            }
            let even = (k % 2 == 0) as usize;
            match family {
                Family::A => Ok((2 * n - k - 1, normalized_type(Family::A, (n - k).saturating_sub(1)))),
                Family::B | Family::C => Ok((4 * n - 2 * k + even, normalized_type(family, n - k))),
                Family::D => Ok((4 * n - 2 * k - 2 + even, normalized_type(Family::D, n - k))),
                _ => Err(out_of_scope()),
            }
        }
        CycleSign::Negative => {
            if k < 2 || k % 2 == 1 || k / 2 > n {
                return Err(out_of_scope());
            }
            match family {
                Family::B | Family::C => Ok((2 * n - k / 2, normalized_type(family, n - k / 2))),
                Family::D => Ok((2 * n - k / 2 - 1, normalized_type(Family::D, n - k / 2))),
                _ => Err(out_of_scope()),
            }
        }
    }
}

/// The roots of a classical system in `ε`-coordinates.
pub fn eps_roots(family: Family, n: usize) -> Vec<Vec<i64>> {
    let mut out = vec![];
    let unit = |i: usize, c: i64| {
        let mut v = vec![0i64; n];
        v[i] = c;
        v
    };
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut v = vec![0i64; n];
            v[i] = 1;
            v[j] = -1;
            out.push(v);
            if family != Family::A && i < j {
                for s in [1, -1] {
                    let mut w = vec![0i64; n];
                    w[i] = s;
                    w[j] = s;
                    out.push(w);
                }
            }
        }
        match family {
            Family::B => out.extend([unit(i, 1), unit(i, -1)]),
            Family::C => out.extend([unit(i, 2), unit(i, -2)]),
            _ => {}
        }
    }
    out
}

fn signed_cycle_matrix(n: usize, k: usize, sign: CycleSign) -> Vec<Vec<i64>> {
    let len = if sign == CycleSign::Positive { k } else { k / 2 };
    let mut s = vec![vec![0i64; n]; n];
    for (j, row) in s.iter_mut().enumerate().skip(len) {
        row[j] = 1;
    }
    for j in 0..len {
        if j + 1 < len {
            s[j + 1][j] = 1;
        } else {
            s[0][j] = if sign == CycleSign::Positive { 1 } else { -1 };
        }
    }
    s
}

/// `(l(s), Δ_0^s)` for a single-cycle element by direct construction in the
/// `ε`-space: rotation planes of `s` are taken in order of increasing turn,
/// then the `-1` line; each root is decided by the first of these it
/// projects onto nontrivially, using a generic vector of that subspace.
/// Fixed roots are ordered by the functional `ε_i ↦ n + 1 - i`.
pub fn single_cycle_direct(family: Family, n: usize, k: usize, sign: CycleSign) -> Result<(usize, String), AtlasError> {
    let len = if sign == CycleSign::Positive { k } else { k / 2 };
    if k < 2 || len > n || (sign == CycleSign::Negative && (k % 2 == 1 || family == Family::A)) {
        return Err(AtlasError::Domain(format!("no single-cycle element k={k} {sign:?} in rank {n}")));
    }
    let s = signed_cycle_matrix(n, k, sign);
    let act = |v: &[i64]| -> Vec<i64> { s.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect() };
    let sr: Mat<Rc> = s.iter().map(|r| r.iter().map(|&x| Rc::from_int(x)).collect()).collect();
    let s2 = mat_mul(&sr, &sr);
    let mut subspaces: Vec<Vec<Vec<Rc>>> = vec![];
    let mut turns: Vec<Rational> = (1..k).map(|p| rat(p as i64, 2 * k as i64)).collect();
    turns.sort();
    turns.dedup();
    for t in &turns {
        let c = Rc::cos_turn(t);
        let two_c = &c + &c;
        let m: Mat<Rc> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let id = if i == j { Rc::from_int(1) } else { Rc::from_int(0) };
                        &(&s2[i][j] - &(&two_c * &sr[i][j])) + &id
                    })
                    .collect()
            })
            .collect();
        let ker = kernel(&m, n);
        if !ker.is_empty() {
            subspaces.push(ker);
        }
    }
    let plus_i: Mat<Rc> = (0..n)
        .map(|i| (0..n).map(|j| &sr[i][j] + &Rc::from_int((i == j) as i64)).collect())
        .collect();
    let ker = kernel(&plus_i, n);
    if !ker.is_empty() {
        subspaces.push(ker);
    }
    let pair = |a: &[i64], x: &[Rc]| -> Rc {
        a.iter()
            .zip(x)
            .filter(|(c, _)| **c != 0)
            .fold(Rc::from_int(0), |acc, (&c, xi)| &acc + &(&Rc::from_int(c) * xi))
    };
    let roots = eps_roots(family, n);
    let (fixed, moved): (Vec<Vec<i64>>, Vec<Vec<i64>>) = roots.iter().cloned().partition(|r| act(r) == *r);
    let mut strata: Vec<Vec<Vec<i64>>> = vec![vec![]; subspaces.len()];
    for r in &moved {
        let i = subspaces
            .iter()
            .position(|b| b.iter().any(|e| !pair(r, e).is_zero()))
            .ok_or_else(|| AtlasError::Inconsistent(format!("root {r:?} is orthogonal to every moved subspace")))?;
        strata[i].push(r.clone());
    }
    let mut positive: HashSet<Vec<i64>> = HashSet::new();
    for (basis, members) in subspaces.iter().zip(&strata) {
        if members.is_empty() {
            continue;
        }
        let x = (0..)
            .map(|t: i64| {
                let mut x = basis[0].clone();
                let mut w = Rc::from_int(1);
                for b in &basis[1..] {
                    w = &w * &Rc::from_int(t);
                    for (xi, bi) in x.iter_mut().zip(b) {
                        *xi = &*xi + &(&w * bi);
                    }
                }
                x
            })
            .find(|x| members.iter().all(|r| !pair(r, x).is_zero()))
            .expect("a generic vector exists");
        positive.extend(members.iter().filter(|r| pair(r, &x).sign_of() > 0).cloned());
    }
    let length = positive.iter().filter(|r| !positive.contains(&act(r))).count();
    let height = |r: &[i64]| -> i64 { r.iter().enumerate().map(|(i, &c)| c * (n - i) as i64).sum() };
    let fixed_pos: Vec<&Vec<i64>> = fixed.iter().filter(|r| height(r) > 0).collect();
    let fixed_set: HashSet<&Vec<i64>> = fixed_pos.iter().copied().collect();
    let simple: Vec<&Vec<i64>> = fixed_pos
        .iter()
        .copied()
        .filter(|r| {
            !fixed_pos.iter().any(|a| {
                let b: Vec<i64> = r.iter().zip(a.iter()).map(|(x, y)| x - y).collect();
                fixed_set.contains(&b)
            })
        })
        .collect();
    let gram: Vec<Vec<i64>> = simple
        .iter()
        .map(|a| simple.iter().map(|b| a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()).collect())
        .collect();
    Ok((length, classify_gram(&gram)?.type_string))
}

/// The length predicted by applying the single-cycle closed forms to the
/// cycles of the class one at a time, in non-increasing order of part
/// size, each on the rank left over by the cycles before it.  Pairs of
/// trivial cycles contribute nothing.
pub fn telescoped_length(label: TypeLabel, spec: &ClassSpec) -> Result<usize, AtlasError> {
    spec.validate(label)?;
    let family = label.family;
    match spec {
        ClassSpec::Partition(p) => {
            let mut left = label.rank + 1;
            let mut total = 0;
            for &x in p {
                if x > 1 {
                    total += single_cycle_oracle(Family::A, left, x, CycleSign::Positive)?.0;
                }
                left -= x;
            }
            Ok(total)
        }
        ClassSpec::Pair { lambda, mu, .. } => {
            let mut items: Vec<(usize, CycleSign)> = lambda.iter().map(|&x| (x, CycleSign::Negative)).collect();
            items.extend(mu.chunks(2).map(|c| (c[0], CycleSign::Positive)));
            items.sort_by(|a, b| b.0.cmp(&a.0).then((a.1 == CycleSign::Positive).cmp(&(b.1 == CycleSign::Positive))));
            let mut left = label.rank;
            let mut total = 0;
            for (x, sign) in items {
                let used = if sign == CycleSign::Positive { x } else { x / 2 };
                if !(sign == CycleSign::Positive && x == 1) {
                    total += single_cycle_oracle(family, left, x, sign)?.0;
                }
                left -= used;
            }
            Ok(total)
        }
    }
}

/// `d_ij(A_k)` for an A block outside the special cases.
fn d_a_generic(k: usize) -> u64 {
    if k % 2 == 0 {
        k as u64 + 1
    } else {
        (k as u64 - 1) / 2 + 1
    }
}

/// `d_ij(A_n)` in `B_l` or `C_l` when the smallest orbit is an A block and
/// no root is fixed, as `(i < j, i > j)`.
fn d_a_bc(family: Family, n: usize) -> (u64, u64) {
    let n = n as u64;
    if n % 2 == 0 {
        (n + 1, n + 1)
    } else if n % 4 == 1 {
        ((n - 1) / 2 + 1, (n - 1) / 2 + 1)
    } else {
        let p = (n + 1) / 4;
        if family == Family::B {
            (p, 2 * p)
        } else {
            (2 * p, p)
        }
    }
}

/// `d_ij(A_{l-1})` when it is the only nontrivial block of `D_l`.
fn d_a_d(l: usize) -> u64 {
    let l = l as u64;
    if l % 2 == 1 {
        l
    } else if l % 4 == 0 {
        l / 4
    } else {
        l / 2
    }
}

/// Whether the element of the class fixes some root.
pub fn fixes_a_root(family: Family, spec: &ClassSpec) -> bool {
    match spec {
        ClassSpec::Partition(p) => p.iter().filter(|&&x| x == 1).count() >= 2,
        ClassSpec::Pair { mu, .. } => {
            let pairs: Vec<usize> = mu.chunks(2).map(|c| c[0]).collect();
            let ones = pairs.iter().filter(|&&x| x == 1).count();
            let twos = pairs.iter().any(|&x| x == 2);
            match family {
                Family::D => twos || ones >= 2,
                _ => twos || ones >= 1,
            }
        }
    }
}

/// The block formulas for `(d_lower, d_upper)`: per-block values combined by
/// lcm.  In types B and C the special A-block values apply when every
/// smallest orbit of `s` on `±ε_i` lies in an A block and `s` fixes no
/// root.  Returns `None` when that rule applies to a class with more than
/// one A block, where the formulas do not say which block takes the
/// special value.
pub fn block_d_oracle(label: TypeLabel, spec: &ClassSpec) -> Result<Option<(u64, u64)>, AtlasError> {
    spec.validate(label)?;
    let blocks = weyl_class_blocks(label, spec)?;
    let a_blocks: Vec<usize> = blocks
        .iter()
        .filter_map(|b| if let Block::A(k) = b { Some(*k) } else { None })
        .collect();
    let generic = || {
        let d = a_blocks.iter().fold(1u64, |acc, &k| acc.lcm(&d_a_generic(k)));
        Some((d, d))
    };
    match (label.family, spec) {
        (Family::A, ClassSpec::Partition(p)) => {
            if p.len() == 1 {
                Ok(Some((1, 1)))
            } else {
                Ok(generic())
            }
        }
        (Family::D, ClassSpec::Pair { lambda, mu, .. }) => {
            if lambda.is_empty() && mu.len() == 2 && mu[0] == label.rank {
                let d = d_a_d(label.rank);
                Ok(Some((d, d)))
            } else {
                Ok(generic())
            }
        }
        (Family::B | Family::C, ClassSpec::Pair { lambda, mu, .. }) => {
            let smallest_mu = mu.iter().min();
            let smallest_lambda = lambda.iter().min();
            let smallest_is_a = match (smallest_mu, smallest_lambda) {
                (Some(m), Some(l)) => m < l,
                (Some(_), None) => true,
                _ => false,
            };
            if smallest_is_a && !fixes_a_root(label.family, spec) {
                if a_blocks.len() > 1 {
                    return Ok(None);
                }
                Ok(Some(d_a_bc(label.family, a_blocks[0])))
            } else {
                Ok(generic())
            }
        }
        _ => Err(AtlasError::Domain(format!("class {spec} does not fit type {label}"))),
    }
}

/// Whether `Y_j(Σ m_k γ_k) = m p_j` has a solution with integers `p_j` and
/// `|m_k| < m` not all zero, by exhaustive search over residues `m_k mod m`.
/// The constraints are first brought to echelon form by unimodular
/// recombination, so each one is checked as soon as its last variable is
/// assigned.
pub fn bounded_solution_exists(g: &[Vec<i64>], m: i64) -> bool {
    let lp = g.len();
    if lp == 0 || m < 2 {
        return false;
    }
    let cols = g[0].len();
    let constraints: Vec<Vec<i128>> = (0..cols).map(|j| (0..lp).map(|k| g[k][j] as i128).collect()).collect();
    let h = hermite_rows(&constraints);
    // checks[k]: constraints whose leading variable is k
    let mut checks: Vec<Vec<&Vec<i128>>> = vec![vec![]; lp];
    for row in &h {
        if let Some(p) = row.iter().position(|&x| x != 0) {
            checks[p].push(row);
        }
    }
    let m = m as i128;
    fn go(k: usize, x: &mut Vec<i128>, checks: &[Vec<&Vec<i128>>], m: i128) -> bool {
        for v in 0..m {
            x[k] = v;
            let ok = checks[k]
                .iter()
                .all(|row| row.iter().zip(x.iter()).skip(k).map(|(a, b)| a * b).sum::<i128>().rem_euclid(m) == 0);
            if !ok {
                continue;
            }
            if k == 0 {
                if x.iter().any(|&c| c != 0) {
                    return true;
                }
            } else if go(k - 1, x, checks, m) {
                return true;
            }
        }
        false
    }
    let mut x = vec![0i128; lp];
    go(lp - 1, &mut x, &checks, m)
}
