//! Partition combinatorics for the classical types: marked partitions,
//! symbols, the maps `f_1`, `F`, `Φ^W`, `Ψ^W`, `π^G`, block diagrams of
//! Weyl group classes, and centralizer dimensions.

use crate::root_system::{Family, TypeLabel};
use crate::weyl::ClassSpec;
use crate::AtlasError;
use std::collections::BTreeMap;
use std::fmt;

/// A partition with positive parts stored in non-increasing order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Sorts the parts and drops zeros.
    pub fn new(parts: &[usize]) -> Self {
        let mut parts: Vec<usize> = parts.iter().copied().filter(|&x| x > 0).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `l_k`, the number of parts equal to `k`.
    pub fn multiplicity(&self, k: usize) -> usize {
        self.parts.iter().filter(|&&x| x == k).count()
    }

    /// Distinct part values, largest first.
    pub fn values(&self) -> Vec<usize> {
        let mut v = self.parts.clone();
        v.dedup();
        v
    }

    pub fn dual(&self) -> Partition {
        let m = self.parts.first().copied().unwrap_or(0);
        Partition {
            parts: (1..=m).map(|i| self.parts.iter().filter(|&&x| x >= i).count()).collect(),
        }
    }

    /// The `i`-th part of the dual partition, 1-based; zero past the end.
    pub fn dual_part(&self, i: usize) -> usize {
        self.parts.iter().filter(|&&x| x >= i).count()
    }

    pub fn union(&self, other: &Partition) -> Partition {
        let mut v = self.parts.clone();
        v.extend(&other.parts);
        Partition::new(&v)
    }

    /// The parts in non-decreasing order with `zeros` leading zeros.
    pub fn ascending_padded(&self, zeros: usize) -> Vec<usize> {
        let mut v = vec![0; zeros];
        v.extend(self.parts.iter().rev());
        v
    }

    /// Every part `k` with `pred(k)` has even multiplicity.
    fn even_multiplicity_where(&self, pred: impl Fn(usize) -> bool) -> bool {
        self.values().iter().all(|&k| !pred(k) || self.multiplicity(k) % 2 == 0)
    }

    /// Membership in `T_m`: odd parts have even multiplicity.
    pub fn in_t(&self) -> bool {
        self.even_multiplicity_where(|k| k % 2 == 1)
    }

    /// Membership in `Q_m`: even parts have even multiplicity.
    pub fn in_q(&self) -> bool {
        self.even_multiplicity_where(|k| k % 2 == 0)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

pub fn dual_partition(p: &Partition) -> Partition {
    p.dual()
}

/// All partitions of `n`, in reverse lexicographic order.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition { parts: cur.clone() });
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

/// `T_m`: partitions of `m` whose odd parts have even multiplicity.
pub fn t_partitions(m: usize) -> Vec<Partition> {
    partitions(m).into_iter().filter(Partition::in_t).collect()
}

/// `Q_m`: partitions of `m` whose even parts have even multiplicity.
pub fn q_partitions(m: usize) -> Vec<Partition> {
    partitions(m).into_iter().filter(Partition::in_q).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mark {
    Zero,
    One,
    Omega,
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mark::Zero => "0",
            Mark::One => "1",
            Mark::Omega => "ω",
        })
    }
}

/// A partition of `2n` in `T_2n` with a mark on every part value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedPartition {
    pub partition: Partition,
    pub marks: BTreeMap<usize, Mark>,
}

impl MarkedPartition {
    /// Marks even values with `even(k)` and odd values with `ω`.
    pub fn with_even_marks(partition: Partition, even: impl Fn(usize) -> Mark) -> Self {
        let marks = partition
            .values()
            .into_iter()
            .map(|k| (k, if k % 2 == 1 { Mark::Omega } else { even(k) }))
            .collect();
        MarkedPartition { partition, marks }
    }

    /// The mark of `k`; value `0` is always marked `1`.
    pub fn mark(&self, k: usize) -> Mark {
        if k == 0 {
            return Mark::One;
        }
        self.marks[&k]
    }

    /// Checks that the partition lies in `T_2n` and the marks follow the
    /// rules `ω` on odd values, `1` on even values of odd multiplicity, and
    /// `0` or `1` on even values of even multiplicity.
    pub fn validate(&self) -> Result<(), AtlasError> {
        if !self.partition.in_t() {
            return Err(AtlasError::Domain(format!("{} has an odd part of odd multiplicity", self.partition)));
        }
        let values = self.partition.values();
        if self.marks.len() != values.len() || values.iter().any(|k| !self.marks.contains_key(k)) {
            return Err(AtlasError::Domain(format!("marks of {self} do not match its part values")));
        }
        for &k in &values {
            let ok = match (k % 2, self.partition.multiplicity(k) % 2, self.marks[&k]) {
                (1, _, m) => m == Mark::Omega,
                (0, 1, m) => m == Mark::One,
                (_, _, m) => m != Mark::Omega,
            };
            if !ok {
                return Err(AtlasError::Domain(format!("mark on {k} is inadmissible in {self}")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for MarkedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.marks.iter().rev().map(|(k, m)| format!("{k}:{m}")).collect();
        write!(f, "{} [{}]", self.partition, s.join(" "))
    }
}

/// `T²_2n`: every admissible marking of every partition in `T_2n`.
pub fn marked_t2(two_n: usize) -> Vec<MarkedPartition> {
    let mut out = vec![];
    for p in t_partitions(two_n) {
        let free: Vec<usize> = p
            .values()
            .into_iter()
            .filter(|&k| k % 2 == 0 && p.multiplicity(k) % 2 == 0)
            .collect();
        for bits in 0..1u32 << free.len() {
            out.push(MarkedPartition::with_even_marks(p.clone(), |k| {
                match free.iter().position(|&x| x == k) {
                    Some(i) if bits >> i & 1 == 0 => Mark::Zero,
                    _ => Mark::One,
                }
            }));
        }
    }
    out
}

/// The subset of `T²_2n` whose partitions have an even number of parts.
pub fn marked_t2_tilde(two_n: usize) -> Vec<MarkedPartition> {
    marked_t2(two_n)
        .into_iter()
        .filter(|m| m.partition.len() % 2 == 0)
        .collect()
}

/// A pair `(λ, μ)` indexing a class of `W(B_n)`, `W(C_n)` or `W(D_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairPartition {
    pub lambda: Partition,
    pub mu: Partition,
}

impl PairPartition {
    pub fn new(lambda: &[usize], mu: &[usize]) -> Self {
        PairPartition {
            lambda: Partition::new(lambda),
            mu: Partition::new(mu),
        }
    }

    pub fn to_spec(&self) -> ClassSpec {
        ClassSpec::pair(self.lambda.parts(), self.mu.parts())
    }

    pub fn from_spec(spec: &ClassSpec) -> Result<Self, AtlasError> {
        match spec {
            ClassSpec::Pair { lambda, mu, .. } => Ok(PairPartition::new(lambda, mu)),
            ClassSpec::Partition(_) => Err(AtlasError::Domain(format!("{spec} is not a pair of partitions"))),
        }
    }

    /// Membership in `A¹_2n` (types B, C) or `A⁰_2n` (type D).
    pub fn validate(&self, family: Family, n: usize) -> Result<(), AtlasError> {
        let label = TypeLabel { family, rank: n };
        self.to_spec().validate(label)
    }
}

impl fmt::Display for PairPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lambda, self.mu)
    }
}

/// `A¹_2n` for B/C, `A⁰_2n` for D.
pub fn pair_partitions(family: Family, n: usize) -> Vec<PairPartition> {
    let mut out = vec![];
    for a in 0..=n {
        for half_lambda in partitions(a) {
            if family == Family::D && half_lambda.len() % 2 == 1 {
                continue;
            }
            for half_mu in partitions(n - a) {
                let lambda: Vec<usize> = half_lambda.parts().iter().map(|x| 2 * x).collect();
                let mu: Vec<usize> = half_mu.parts().iter().flat_map(|&x| [x, x]).collect();
                out.push(PairPartition::new(&lambda, &mu));
            }
        }
    }
    out
}

/// Every conjugacy class of the Weyl group of a classical type.  In type D
/// a pair with empty `λ` and all parts of `μ` even yields two classes.
pub fn weyl_classes(label: TypeLabel) -> Vec<ClassSpec> {
    match label.family {
        Family::A => partitions(label.rank + 1)
            .into_iter()
            .map(|p| ClassSpec::Partition(p.parts))
            .collect(),
        Family::B | Family::C => pair_partitions(label.family, label.rank)
            .iter()
            .map(PairPartition::to_spec)
            .collect(),
        Family::D => {
            let mut out = vec![];
            for p in pair_partitions(Family::D, label.rank) {
                let spec = p.to_spec();
                let degenerate = spec.is_degenerate_d();
                out.push(spec.clone());
                if degenerate {
                    if let ClassSpec::Pair { lambda, mu, .. } = spec {
                        out.push(ClassSpec::Pair { lambda, mu, twisted: true });
                    }
                }
            }
            out
        }
        _ => vec![],
    }
}

/// The unipotent-side label of a class: a partition for type A, a marked
/// partition for types B, C, D.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassDatum {
    Partition(Partition),
    Marked(MarkedPartition),
}

impl fmt::Display for ClassDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassDatum::Partition(p) => p.fmt(f),
            ClassDatum::Marked(m) => m.fmt(f),
        }
    }
}

/// A class in the image of `Ψ^W` together with its preimage datum.  For
/// degenerate type D pairs both classes are listed, with `degenerate` set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialClass {
    pub datum: ClassDatum,
    pub spec: ClassSpec,
    pub degenerate: bool,
}

pub fn special_classes(label: TypeLabel) -> Vec<SpecialClass> {
    let n = label.rank;
    match label.family {
        Family::A => partitions(n + 1)
            .into_iter()
            .map(|p| SpecialClass {
                spec: ClassSpec::Partition(p.parts.clone()),
                datum: ClassDatum::Partition(p),
                degenerate: false,
            })
            .collect(),
        Family::B | Family::C | Family::D => {
            let marked = if label.family == Family::D {
                marked_t2_tilde(2 * n)
            } else {
                marked_t2(2 * n)
            };
            let mut out = vec![];
            for m in marked {
                let spec = psi_w(&m).to_spec();
                let degenerate = label.family == Family::D && spec.is_degenerate_d();
                let twins = if degenerate { vec![false, true] } else { vec![false] };
                for twisted in twins {
                    let spec = match &spec {
                        ClassSpec::Pair { lambda, mu, .. } => ClassSpec::Pair {
                            lambda: lambda.clone(),
                            mu: mu.clone(),
                            twisted,
                        },
                        other => other.clone(),
                    };
                    out.push(SpecialClass {
                        datum: ClassDatum::Marked(m.clone()),
                        spec,
                        degenerate,
                    });
                }
            }
            out
        }
        _ => vec![],
    }
}

/// `Φ^W(λ, μ) = (ν, ε)`: `ν = λ ∪ μ`, even values marked `1` when they
/// occur in `λ` and `0` otherwise.
pub fn phi_w(pair: &PairPartition) -> MarkedPartition {
    let nu = pair.lambda.union(&pair.mu);
    MarkedPartition::with_even_marks(nu, |k| {
        if pair.lambda.multiplicity(k) > 0 {
            Mark::One
        } else {
            Mark::Zero
        }
    })
}

/// `Ψ^W(ν, ε)`: the preimage under `Φ^W` with the fewest parts in `μ`.
pub fn psi_w(m: &MarkedPartition) -> PairPartition {
    let mut lambda = vec![];
    let mut mu = vec![];
    for k in m.partition.values() {
        let l = m.partition.multiplicity(k);
        let to_mu = k % 2 == 1 || (l >= 2 && l % 2 == 0 && m.mark(k) == Mark::Zero);
        let target = if to_mu { &mut mu } else { &mut lambda };
        target.extend(std::iter::repeat(k).take(l));
    }
    PairPartition::new(&lambda, &mu)
}

fn check_family(family: Family) -> Result<(), AtlasError> {
    match family {
        Family::B | Family::C | Family::D => Ok(()),
        _ => Err(AtlasError::Domain(format!("type {} has no symbols here", family.letter()))),
    }
}

/// `π^G(λ)` for `λ ∈ T_2n` (C), `Q_2n+1` (B) or `Q_2n` (D).
pub fn pi_g(family: Family, lambda: &Partition) -> Result<MarkedPartition, AtlasError> {
    check_family(family)?;
    if family == Family::C {
        if !lambda.in_t() {
            return Err(AtlasError::Domain(format!("{lambda} is not in T")));
        }
        return Ok(MarkedPartition::with_even_marks(lambda.clone(), |_| Mark::One));
    }
    if !lambda.in_q() {
        return Err(AtlasError::Domain(format!("{lambda} is not in Q")));
    }
    // B lowers odd parts at odd positions; D lowers them at even positions.
    let lower_parity = if family == Family::B { 1 } else { 0 };
    let asc = lambda.ascending_padded(0);
    let at = |i: usize| if i == 0 { 0 } else { asc[i - 1] };
    let rises_before = |i: usize| at(i - 1) < at(i);
    let rises_after = |i: usize| i < asc.len() && at(i) < at(i + 1);
    let mut nu = vec![];
    let mut zero_marked = vec![];
    for i in 1..=asc.len() {
        let x = at(i);
        let v = if x % 2 == 1 && i % 2 == lower_parity && rises_before(i) {
            x - 1
        } else if x % 2 == 1 && i % 2 != lower_parity && rises_after(i) {
            x + 1
        } else {
            x
        };
        nu.push(v);
        if x % 2 == 0 && i % 2 != lower_parity && rises_before(i) {
            zero_marked.push(x);
        }
    }
    let nu = Partition::new(&nu);
    Ok(MarkedPartition::with_even_marks(nu, |k| {
        if zero_marked.contains(&k) {
            Mark::Zero
        } else {
            Mark::One
        }
    }))
}

/// The image of `π^G` as stated: marks are `1` on even values for C; for B
/// and D, `ε(k) ≠ 0` whenever `ν*_k` is odd, and `ν*_{i-1} = ν*_i` for
/// every even `i ≤ ν_1` with `ν*_i` even.  This reading does not match the
/// map (B2: `(2,1,1)` with `ε(2) = 1` satisfies it but is not an image);
/// see [`in_pi_g_image`].
pub fn in_stated_pi_g_image(family: Family, m: &MarkedPartition) -> bool {
    pi_g_image_test(family, m, 0)
}

/// The image of `π^G` as found by enumeration: the stated conditions with
/// the dual-part parity in the second one flipped, i.e. `ν*_{i-1} = ν*_i`
/// for every even `i` with `ν*_i` odd.
pub fn in_pi_g_image(family: Family, m: &MarkedPartition) -> bool {
    pi_g_image_test(family, m, 1)
}

fn pi_g_image_test(family: Family, m: &MarkedPartition, parity: usize) -> bool {
    if family == Family::C {
        return m.marks.values().all(|&x| x != Mark::Zero);
    }
    let nu = &m.partition;
    let marks_ok = nu.values().into_iter().all(|k| nu.dual_part(k) % 2 == 0 || m.mark(k) != Mark::Zero);
    let top = nu.parts().first().copied().unwrap_or(0);
    let dual_ok = (2..=top)
        .step_by(2)
        .all(|i| nu.dual_part(i) % 2 != parity || nu.dual_part(i - 1) == nu.dual_part(i));
    marks_ok && dual_ok
}

/// A pair of rows `(c_1, c_3, ...), (c_2, c_4, ...)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolPair {
    pub odd_row: Vec<i64>,
    pub even_row: Vec<i64>,
}

impl SymbolPair {
    fn from_sequence(c: &[i64]) -> Self {
        SymbolPair {
            odd_row: c.iter().step_by(2).copied().collect(),
            even_row: c.iter().skip(1).step_by(2).copied().collect(),
        }
    }

    /// `c_1, c_2, ...` interleaved back into one sequence.
    pub fn sequence(&self) -> Vec<i64> {
        let mut out = vec![];
        for i in 0..self.odd_row.len().max(self.even_row.len()) {
            out.extend(self.odd_row.get(i));
            out.extend(self.even_row.get(i));
        }
        out
    }

    pub fn sum(&self) -> i64 {
        self.odd_row.iter().chain(&self.even_row).sum()
    }

    fn rows_ok(&self, n: usize) -> bool {
        let nondecreasing = |r: &[i64]| r.windows(2).all(|w| w[0] <= w[1]);
        self.sum() == n as i64
            && self.odd_row.iter().chain(&self.even_row).all(|&x| x >= 0)
            && nondecreasing(&self.odd_row)
            && nondecreasing(&self.even_row)
    }

    /// Membership in `X_{n,1}`: the odd row is one entry longer.
    pub fn in_x(&self, n: usize) -> bool {
        self.odd_row.len() == self.even_row.len() + 1 && self.rows_ok(n)
    }

    /// Membership in `Y_{n,0}`: rows of equal length.
    pub fn in_y(&self, n: usize) -> bool {
        self.odd_row.len() == self.even_row.len() && self.rows_ok(n)
    }

    /// `c_i ≤ c_{i+1} + odd_slack` for odd `i` and `c_i ≤ c_{i+1} + even_slack`
    /// for even `i`.
    pub fn satisfies(&self, odd_slack: i64, even_slack: i64) -> bool {
        let c = self.sequence();
        (0..c.len().saturating_sub(1)).all(|j| {
            let slack = if j % 2 == 0 { odd_slack } else { even_slack };
            c[j] <= c[j + 1] + slack
        })
    }
}

impl fmt::Display for SymbolPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |r: &[i64]| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "(({}),({}))", j(&self.odd_row), j(&self.even_row))
    }
}

/// Leading zeros so that the sequence starts with `0` and has odd length.
fn c_padding(len: usize) -> usize {
    if len % 2 == 0 {
        1
    } else {
        2
    }
}

/// `2(i-1) - 4[(i-1)/2]` for 1-based `i`: `0` at odd positions, `2` at even.
fn d_offset(i: usize) -> i64 {
    if i % 2 == 1 {
        0
    } else {
        2
    }
}

/// `i - 1 - 2[(i-1)/2]` for 1-based `i`: `0` at odd positions, `1` at even.
fn b_offset(i: usize) -> i64 {
    (1 - i % 2) as i64
}

fn pair_at(seq: &[usize], i: usize) -> Result<usize, AtlasError> {
    match (seq.get(i - 1), seq.get(i)) {
        (Some(a), Some(b)) if a == b => Ok(*a),
        _ => Err(AtlasError::Domain(format!("position {i} of {seq:?} does not start a pair"))),
    }
}

/// `f_1(λ)`.
pub fn symbol_f1(family: Family, lambda: &Partition) -> Result<SymbolPair, AtlasError> {
    check_family(family)?;
    let mut c = vec![];
    if family == Family::C {
        if !lambda.in_t() {
            return Err(AtlasError::Domain(format!("{lambda} is not in T")));
        }
        let seq = lambda.ascending_padded(c_padding(lambda.len()));
        let mut i = 1;
        while i <= seq.len() {
            let x = seq[i - 1];
            if x % 2 == 0 {
                c.push((x / 2) as i64);
                i += 1;
            } else {
                pair_at(&seq, i)?;
                c.push(((x + 1) / 2) as i64);
                c.push(((x - 1) / 2) as i64);
                i += 2;
            }
        }
    } else {
        if !lambda.in_q() {
            return Err(AtlasError::Domain(format!("{lambda} is not in Q")));
        }
        let seq = lambda.ascending_padded(0);
        let mut i = 1;
        while i <= seq.len() {
            let x = seq[i - 1];
            if x % 2 == 1 {
                c.push(((x - 1) / 2) as i64 + b_offset(i));
                i += 1;
            } else {
                pair_at(&seq, i)?;
                c.push((x / 2) as i64);
                c.push((x / 2) as i64);
                i += 2;
            }
        }
    }
    Ok(SymbolPair::from_sequence(&c))
}

/// `F(λ, ε)` for B/C and `F̃(λ, ε)` for D.
pub fn symbol_f(family: Family, m: &MarkedPartition) -> Result<SymbolPair, AtlasError> {
    check_family(family)?;
    m.validate()?;
    let lambda = &m.partition;
    let mut c = vec![];
    if family == Family::D {
        if lambda.len() % 2 == 1 {
            return Err(AtlasError::Domain(format!("{lambda} has an odd number of parts")));
        }
        let seq = lambda.ascending_padded(0);
        let mut i = 1;
        while i <= seq.len() {
            let x = seq[i - 1];
            let h = x as i64;
            if x % 2 == 0 && m.mark(x) == Mark::One {
                c.push((h - 2) / 2 + d_offset(i));
                i += 1;
            } else if x % 2 == 1 {
                pair_at(&seq, i)?;
                c.push((h - 1) / 2 + d_offset(i));
                c.push((h - 3) / 2 + d_offset(i + 1));
                i += 2;
            } else {
                pair_at(&seq, i)?;
                c.push(h / 2 + d_offset(i));
                c.push(h / 2 + d_offset(i));
                i += 2;
            }
        }
    } else {
        let seq = lambda.ascending_padded(c_padding(lambda.len()));
        let mut i = 1;
        while i <= seq.len() {
            let x = seq[i - 1];
            let h = x as i64;
            if x % 2 == 0 && m.mark(x) == Mark::One {
                c.push(h / 2);
                i += 1;
            } else if x % 2 == 1 {
                pair_at(&seq, i)?;
                c.push((h + 1) / 2);
                c.push((h - 1) / 2);
                i += 2;
            } else {
                pair_at(&seq, i)?;
                c.push((h + 2) / 2);
                c.push((h - 2) / 2);
                i += 2;
            }
        }
    }
    Ok(SymbolPair::from_sequence(&c))
}

/// `dim Z_G(g)` for `g` in the stratum of the datum, `n` the rank.
pub fn dim_centralizer(family: Family, n: usize, datum: &ClassDatum) -> Result<usize, AtlasError> {
    let weighted = |p: &Partition| -> usize { p.parts().iter().enumerate().map(|(i, &x)| i * x).sum() };
    match (family, datum) {
        (Family::A, ClassDatum::Partition(p)) => {
            if p.size() != n + 1 {
                return Err(AtlasError::Domain(format!("{p} is not a partition of {}", n + 1)));
            }
            Ok(n + 2 * weighted(p))
        }
        (Family::B | Family::C | Family::D, ClassDatum::Marked(m)) => {
            m.validate()?;
            let nu = &m.partition;
            if nu.size() != 2 * n {
                return Err(AtlasError::Domain(format!("{nu} is not a partition of {}", 2 * n)));
            }
            let odd = nu.parts().iter().filter(|&&x| x % 2 == 1).count();
            let even_with = |mk: Mark| nu.parts().iter().filter(|&&x| x % 2 == 0 && m.mark(x) == mk).count();
            let base = (n + weighted(nu)) as i64;
            let v = if family == Family::D {
                if nu.len() % 2 == 1 {
                    return Err(AtlasError::Domain(format!("{nu} has an odd number of parts")));
                }
                base - (odd / 2) as i64 - even_with(Mark::One) as i64
            } else {
                base + (odd / 2) as i64 + even_with(Mark::Zero) as i64
            };
            Ok(v as usize)
        }
        _ => Err(AtlasError::Domain(format!("{datum} does not fit type {}", family.letter()))),
    }
}

/// One summand of a block diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Block {
    A(usize),
    B(usize),
    C(usize),
    /// `D_k(a_j)`; `D_k(a_0)` is `D_k`.
    D(usize, usize),
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Block::A(k) => write!(f, "A{k}"),
            Block::B(k) => write!(f, "B{k}"),
            Block::C(k) => write!(f, "C{k}"),
            Block::D(k, 0) => write!(f, "D{k}"),
            Block::D(k, a) => write!(f, "D{k}(a{a})"),
        }
    }
}

/// The block diagram of a class.
pub fn weyl_class_blocks(label: TypeLabel, spec: &ClassSpec) -> Result<Vec<Block>, AtlasError> {
    spec.validate(label)?;
    match spec {
        ClassSpec::Partition(p) => Ok(p.iter().map(|&x| Block::A(x - 1)).collect()),
        ClassSpec::Pair { lambda, mu, .. } => {
            let a_blocks = |asc: bool| -> Vec<Block> {
                let mut v: Vec<Block> = mu.chunks(2).map(|c| Block::A(c[0] - 1)).collect();
                if asc {
                    v.reverse();
                }
                v
            };
            let mut out = vec![];
            match label.family {
                Family::C => {
                    out.extend(lambda.iter().rev().map(|&x| Block::C(x / 2)));
                    out.extend(a_blocks(true));
                }
                _ => {
                    out.extend(a_blocks(false));
                    for c in lambda.chunks(2) {
                        match *c {
                            [a, b] => out.push(Block::D((a + b) / 2, b / 2 - 1)),
                            [a] => out.push(Block::B(a / 2)),
                            _ => unreachable!(),
                        }
                    }
                }
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(v: &[usize]) -> Partition {
        Partition::new(v)
    }

    fn label(f: Family, n: usize) -> TypeLabel {
        TypeLabel { family: f, rank: n }
    }

    #[test]
    fn duals() {
        assert_eq!(part(&[2, 1, 1]).dual(), part(&[3, 1]));
        assert_eq!(part(&[5]).dual(), part(&[1, 1, 1, 1, 1]));
        for n in 0..=12 {
            for p in partitions(n) {
                assert_eq!(p.dual().dual(), p);
            }
        }
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=8).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn class_counts() {
        // |classes of W(B_n)| = Σ p(a) p(n-a); W(D_n) classes from the two-row count
        let bc: Vec<usize> = (1..=6).map(|n| weyl_classes(label(Family::C, n)).len()).collect();
        assert_eq!(bc, vec![2, 5, 10, 20, 36, 65]);
        let d: Vec<usize> = (2..=6).map(|n| weyl_classes(label(Family::D, n)).len()).collect();
        assert_eq!(d, vec![4, 5, 13, 18, 37]);
    }

    #[test]
    fn f1_examples() {
        let s = symbol_f1(Family::C, &part(&[2, 1, 1])).unwrap();
        assert_eq!(s, SymbolPair { odd_row: vec![0, 1, 1], even_row: vec![0, 0] });
        assert!(s.in_x(2) && s.satisfies(1, 1));
        let z = symbol_f1(Family::C, &part(&[])).unwrap();
        assert_eq!(z.sum(), 0);
        let b = symbol_f1(Family::B, &part(&[1, 1, 1])).unwrap();
        assert_eq!(b.sequence(), vec![0, 1, 0]);
        assert!(b.in_x(1) && b.satisfies(0, 2));
        assert!(symbol_f1(Family::C, &part(&[3])).is_err());
    }

    #[test]
    fn f_examples() {
        let d = MarkedPartition::with_even_marks(part(&[1, 1]), |_| Mark::One);
        let s = symbol_f(Family::D, &d).unwrap();
        assert_eq!(s, SymbolPair { odd_row: vec![0], even_row: vec![1] });
        assert!(s.in_y(1));
        let id = MarkedPartition::with_even_marks(part(&[]), |_| Mark::One);
        assert_eq!(symbol_f(Family::C, &id).unwrap().sum(), 0);
    }

    #[test]
    fn phi_psi_examples() {
        let m = phi_w(&PairPartition::new(&[2], &[1, 1]));
        assert_eq!(m.partition, part(&[2, 1, 1]));
        assert_eq!((m.mark(2), m.mark(1)), (Mark::One, Mark::Omega));
        assert_eq!(phi_w(&PairPartition::new(&[2], &[])).mark(2), Mark::One);
        let z = phi_w(&PairPartition::new(&[], &[2, 2]));
        assert_eq!(z.mark(2), Mark::Zero);
        assert_eq!(psi_w(&z), PairPartition::new(&[], &[2, 2]));
        let one = MarkedPartition::with_even_marks(part(&[2]), |_| Mark::One);
        assert_eq!(psi_w(&one), PairPartition::new(&[2], &[]));
        let odd = MarkedPartition::with_even_marks(part(&[1, 1]), |_| Mark::One);
        assert_eq!(psi_w(&odd), PairPartition::new(&[], &[1, 1]));
    }

    #[test]
    fn pi_g_examples() {
        let c = pi_g(Family::C, &part(&[2, 2])).unwrap();
        assert_eq!(c.mark(2), Mark::One);
        assert_eq!(pi_g(Family::C, &part(&[1, 1])).unwrap().mark(1), Mark::Omega);
        let b = pi_g(Family::B, &part(&[3, 1, 1])).unwrap();
        assert_eq!(b.partition, part(&[2, 2]));
        assert_eq!(b.mark(2), Mark::One);
        let z = pi_g(Family::B, &part(&[2, 2, 1])).unwrap();
        assert_eq!(z.mark(2), Mark::Zero);
        assert_eq!(pi_g(Family::B, &part(&[1, 1, 1])).unwrap().partition, part(&[1, 1]));
    }

    #[test]
    fn dim_examples() {
        let a = |p: &[usize]| dim_centralizer(Family::A, p.iter().sum::<usize>() - 1, &ClassDatum::Partition(part(p))).unwrap();
        assert_eq!(a(&[1, 1, 1, 1]), 15);
        assert_eq!(a(&[2, 1, 1]), 9);
        let m = MarkedPartition::with_even_marks(part(&[2, 2]), |_| Mark::One);
        assert_eq!(dim_centralizer(Family::C, 2, &ClassDatum::Marked(m)).unwrap(), 4);
        for n in 1..=6 {
            let id = MarkedPartition::with_even_marks(part(&vec![1; 2 * n]), |_| Mark::One);
            let id = ClassDatum::Marked(id);
            assert_eq!(dim_centralizer(Family::C, n, &id).unwrap(), 2 * n * n + n);
            assert_eq!(dim_centralizer(Family::D, n, &id).unwrap(), 2 * n * n - n);
        }
    }

    #[test]
    fn block_examples() {
        let s = |t: &str| ClassSpec::parse(t).unwrap();
        let show = |b: Vec<Block>| b.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        assert_eq!(show(weyl_class_blocks(label(Family::A, 3), &s("3,1")).unwrap()), ["A2", "A0"]);
        assert_eq!(show(weyl_class_blocks(label(Family::C, 2), &s("2|1,1")).unwrap()), ["C1", "A0"]);
        assert_eq!(show(weyl_class_blocks(label(Family::B, 3), &s("4,2|")).unwrap()), ["D3"]);
        assert_eq!(show(weyl_class_blocks(label(Family::B, 5), &s("4,4,2|")).unwrap()), ["D4(a1)", "B1"]);
    }

    #[test]
    fn phi_after_psi_is_identity() {
        for two_n in (0..=12).step_by(2) {
            for m in marked_t2(two_n) {
                m.validate().unwrap();
                assert_eq!(phi_w(&psi_w(&m)), m, "{m}");
            }
        }
    }

    #[test]
    fn pi_g_injective_with_enumerated_image() {
        for n in 0..=6 {
            let cases = [
                (Family::C, t_partitions(2 * n), marked_t2(2 * n)),
                (Family::B, q_partitions(2 * n + 1), marked_t2(2 * n)),
                (Family::D, q_partitions(2 * n), marked_t2_tilde(2 * n)),
            ];
            for (f, domain, target) in cases {
                let mut image: Vec<MarkedPartition> = domain.iter().map(|l| pi_g(f, l).unwrap()).collect();
                image.sort();
                let before = image.len();
                image.dedup();
                assert_eq!(image.len(), before, "{f:?}{n} not injective");
                let mut found: Vec<MarkedPartition> =
                    target.iter().filter(|m| in_pi_g_image(f, m)).cloned().collect();
                found.sort();
                assert_eq!(image, found, "{f:?}{n}");
            }
        }
    }

    #[test]
    fn stated_pi_g_image_is_off() {
        let extra = MarkedPartition::with_even_marks(part(&[2, 1, 1]), |_| Mark::One);
        assert!(in_stated_pi_g_image(Family::B, &extra));
        assert!(!in_pi_g_image(Family::B, &extra));
        let hit = pi_g(Family::D, &part(&[3, 1, 1, 1])).unwrap();
        assert_eq!(hit.partition, part(&[2, 2, 1, 1]));
        assert!(!in_stated_pi_g_image(Family::D, &hit));
        for n in 0..=6 {
            for m in marked_t2(2 * n) {
                assert_eq!(in_stated_pi_g_image(Family::C, &m), in_pi_g_image(Family::C, &m));
            }
        }
    }

    #[test]
    fn symbol_images() {
        for n in 0..=6 {
            for l in t_partitions(2 * n) {
                let s = symbol_f1(Family::C, &l).unwrap();
                assert!(s.in_x(n) && s.satisfies(1, 1), "C f1 {l} -> {s}");
                let f = symbol_f(Family::C, &pi_g(Family::C, &l).unwrap()).unwrap();
                assert_eq!(f, s);
            }
            for l in q_partitions(2 * n + 1) {
                let s = symbol_f1(Family::B, &l).unwrap();
                assert!(s.in_x(n) && s.satisfies(0, 2), "B f1 {l} -> {s}");
            }
            for l in q_partitions(2 * n) {
                let s = symbol_f1(Family::D, &l).unwrap();
                assert!(s.in_y(n) && s.satisfies(0, 2), "D f1 {l} -> {s}");
            }
            for m in marked_t2(2 * n) {
                let s = symbol_f(Family::C, &m).unwrap();
                assert!(s.in_x(n) && s.satisfies(2, 2), "F {m} -> {s}");
            }
            for m in marked_t2_tilde(2 * n) {
                let s = symbol_f(Family::D, &m).unwrap();
                assert!(s.in_y(n) && s.satisfies(0, 4), "F~ {m} -> {s}");
            }
        }
    }
}
