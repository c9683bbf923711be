//! Finite groups as Cayley tables.
//!
//! Elements are indices `0..order`. Built-in constructors put the identity at
//! index 0. Irrep dimensions are read off from eigenvalue multiplicities of a
//! random self-adjoint element of the group algebra L(G).

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{eigvalsh, CMatrix, RandomSource, C64, ONE};

/// Above this order associativity is sampled instead of checked exhaustively.
const EXHAUSTIVE_ASSOC_LIMIT: usize = 24;
const SAMPLED_ASSOC_TRIPLES: usize = 10_000;
const IRREP_CLUSTER_TOL: f64 = 1e-7;
const IRREP_MAX_ATTEMPTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    name: String,
    cayley: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Vec<String>,
}

/// Built-in group constructors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupKind {
    Cyclic(usize),
    /// Dihedral group of order 2n.
    Dihedral(usize),
    Symmetric(usize),
    Quaternion,
    /// Z_d^l ⋊ Z_l with Z_l acting by cyclic shift.
    SemidirectShift(usize, usize),
    FromCayley(Vec<Vec<usize>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrrepProfile {
    /// Irrep dimensions, ascending.
    pub dims: Vec<usize>,
    pub d_max: usize,
}

impl IrrepProfile {
    pub fn burnside_sum(&self) -> usize {
        self.dims.iter().map(|d| d * d).sum()
    }
}

pub fn construct_group(kind: GroupKind) -> Result<FiniteGroup> {
    match kind {
        GroupKind::Cyclic(n) => cyclic(n),
        GroupKind::Dihedral(n) => dihedral(n),
        GroupKind::Symmetric(n) => symmetric(n),
        GroupKind::Quaternion => quaternion(),
        GroupKind::SemidirectShift(d, l) => semidirect_shift(d, l),
        GroupKind::FromCayley(t) => FiniteGroup::from_cayley("custom", t, None),
    }
}

pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidGroup("cyclic group needs n >= 1".into()));
    }
    let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    let labels = (0..n).map(|a| a.to_string()).collect();
    FiniteGroup::from_cayley(&format!("Z{n}"), table, Some(labels))
}

/// Dihedral group of order 2n, elements r^a s^b stored at index a + n·b.
pub fn dihedral(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::InvalidGroup("dihedral group needs n >= 1".into()));
    }
    let idx = |a: usize, b: usize| a % n + n * (b % 2);
    let mut table = vec![vec![0; 2 * n]; 2 * n];
    for (x, row) in table.iter_mut().enumerate() {
        let (a, b) = (x % n, x / n);
        for (y, entry) in row.iter_mut().enumerate() {
            let (c, d) = (y % n, y / n);
            // (r^a s^b)(r^c s^d) = r^{a ± c} s^{b+d}
            let rot = if b == 0 { a + c } else { a + n - c };
            *entry = idx(rot, b + d);
        }
    }
    let labels = (0..2 * n)
        .map(|x| {
            let (a, b) = (x % n, x / n);
            match (a, b) {
                (0, 0) => "e".to_string(),
                (a, 0) => format!("r^{a}"),
                (0, _) => "s".to_string(),
                (a, _) => format!("r^{a}s"),
            }
        })
        .collect();
    FiniteGroup::from_cayley(&format!("D{}", 2 * n), table, Some(labels))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    // lexicographic order, identity first
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
        p.swap(i, j);
        p[i + 1..].reverse();
    }
    out
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut parts = Vec::new();
    for s in 0..p.len() {
        if seen[s] || p[s] == s {
            seen[s] = true;
            continue;
        }
        let mut cyc = vec![s + 1];
        seen[s] = true;
        let mut x = p[s];
        while x != s {
            cyc.push(x + 1);
            seen[x] = true;
            x = p[x];
        }
        parts.push(format!(
            "({})",
            cyc.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
        ));
    }
    if parts.is_empty() {
        "e".into()
    } else {
        parts.concat()
    }
}

/// Symmetric group S_n for n ≤ 5, composition (στ)(i) = σ(τ(i)).
pub fn symmetric(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > 5 {
        return Err(Error::InvalidGroup(format!(
            "symmetric group S{n} unsupported (need 1 <= n <= 5)"
        )));
    }
    let perms = permutations(n);
    let index: BTreeMap<Vec<usize>, usize> =
        perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    let table = perms
        .iter()
        .map(|s| {
            perms
                .iter()
                .map(|t| index[&t.iter().map(|&i| s[i]).collect::<Vec<_>>()])
                .collect()
        })
        .collect();
    let labels = perms.iter().map(|p| cycle_notation(p)).collect();
    FiniteGroup::from_cayley(&format!("S{n}"), table, Some(labels))
}

/// Quaternion group {±1, ±i, ±j, ±k}.
pub fn quaternion() -> Result<FiniteGroup> {
    // unit u ∈ {1,i,j,k} = 0..4, sign bit; element index = 2u + sign
    let unit_mul = |a: usize, b: usize| -> (usize, bool) {
        // returns (unit, negative)
        match (a, b) {
            (0, x) | (x, 0) => (x, false),
            (x, y) if x == y => (0, true),
            (1, 2) => (3, false),
            (2, 3) => (1, false),
            (3, 1) => (2, false),
            (2, 1) => (3, true),
            (3, 2) => (1, true),
            (1, 3) => (2, true),
            _ => unreachable!(),
        }
    };
    let table = (0..8)
        .map(|x| {
            (0..8)
                .map(|y| {
                    let (u, neg) = unit_mul(x / 2, y / 2);
                    let sign = (x % 2) ^ (y % 2) ^ usize::from(neg);
                    2 * u + sign
                })
                .collect()
        })
        .collect();
    let names = ["1", "i", "j", "k"];
    let labels = (0..8)
        .map(|x| format!("{}{}", if x % 2 == 1 { "-" } else { "" }, names[x / 2]))
        .collect();
    FiniteGroup::from_cayley("Q8", table, Some(labels))
}

/// Z_d^l ⋊ Z_l, element (v, s) at index s·d^l + Σ v_i d^i.
pub fn semidirect_shift(d: usize, l: usize) -> Result<FiniteGroup> {
    if d == 0 || l == 0 {
        return Err(Error::InvalidGroup("semidirect product needs d, l >= 1".into()));
    }
    let base = d.checked_pow(l as u32).filter(|&b| b * l <= 512).ok_or_else(|| {
        Error::InvalidGroup(format!("Z{d}^{l} x| Z{l} is too large"))
    })?;
    let order = base * l;
    let digits = |mut v: usize| -> Vec<usize> {
        (0..l)
            .map(|_| {
                let x = v % d;
                v /= d;
                x
            })
            .collect()
    };
    let encode = |v: &[usize]| v.iter().rev().fold(0, |acc, &x| acc * d + x);
    let table = (0..order)
        .map(|x| {
            let (v, s) = (digits(x % base), x / base);
            (0..order)
                .map(|y| {
                    let (w, t) = (digits(y % base), y / base);
                    // (v,s)(w,t) = (v + shift^s(w), s + t)
                    let sum: Vec<usize> =
                        (0..l).map(|i| (v[i] + w[(i + l - s) % l]) % d).collect();
                    ((s + t) % l) * base + encode(&sum)
                })
                .collect()
        })
        .collect();
    let labels = (0..order)
        .map(|x| {
            let v = digits(x % base);
            format!(
                "({};{})",
                v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","),
                x / base
            )
        })
        .collect();
    FiniteGroup::from_cayley(&format!("Z{d}^{l}x|Z{l}"), table, Some(labels))
}

impl FiniteGroup {
    /// Validates a Cayley table and derives identity and inverses.
    pub fn from_cayley(
        name: &str,
        table: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
    ) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty Cayley table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {i} has length {}", row.len())));
            }
            let mut seen = vec![false; n];
            for &x in row {
                if x >= n || seen[x] {
                    return Err(Error::InvalidGroup(format!("row {i} is not a permutation")));
                }
                seen[x] = true;
            }
        }
        for j in 0..n {
            let mut seen = vec![false; n];
            for row in &table {
                if seen[row[j]] {
                    return Err(Error::InvalidGroup(format!("column {j} is not a permutation")));
                }
                seen[row[j]] = true;
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let inverse: Vec<usize> = (0..n)
            .map(|g| (0..n).find(|&h| table[g][h] == identity).unwrap())
            .collect();
        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            if table[table[a][b]][c] != table[a][table[b][c]] {
                Err(Error::InvalidGroup(format!("associativity fails on ({a}, {b}, {c})")))
            } else {
                Ok(())
            }
        };
        if n <= EXHAUSTIVE_ASSOC_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = RandomSource::new(n as u64);
            for _ in 0..SAMPLED_ASSOC_TRIPLES {
                let (a, b, c) = (rng.below(n), rng.below(n), rng.below(n));
                check(a, b, c)?;
            }
        }
        let labels = match labels {
            Some(l) if l.len() == n => l,
            Some(_) => return Err(Error::InvalidGroup("label count mismatch".into())),
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        Ok(FiniteGroup {
            name: name.to_string(),
            cayley: table,
            identity,
            inverse,
            labels,
        })
    }

    /// Reads a table: first line n, then n lines of n 0-based indices.
    pub fn from_cayley_text(text: &str) -> Result<FiniteGroup> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::InvalidGroup("empty table file".into()))?
            .parse()
            .map_err(|_| Error::InvalidGroup("first line must be the order".into()))?;
        let mut table = Vec::with_capacity(n);
        for (i, line) in lines.enumerate() {
            let row: std::result::Result<Vec<usize>, _> =
                line.split_whitespace().map(str::parse).collect();
            table.push(row.map_err(|_| Error::InvalidGroup(format!("bad entry on row {i}")))?);
        }
        if table.len() != n {
            return Err(Error::InvalidGroup(format!(
                "expected {n} rows, found {}",
                table.len()
            )));
        }
        FiniteGroup::from_cayley("custom", table, None)
    }

    pub fn from_cayley_file(path: &Path) -> Result<FiniteGroup> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(e.to_string()))?;
        Self::from_cayley_text(&text)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.cayley.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cayley[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn cayley(&self) -> &[Vec<usize>] {
        &self.cayley
    }

    /// g h g⁻¹
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Conjugacy classes by brute force, each sorted, ordered by first element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let mut cls: Vec<usize> = (0..n).map(|g| self.conjugate(g, x)).collect();
            cls.sort_unstable();
            cls.dedup();
            for &y in &cls {
                class_of[y] = classes.len();
            }
            classes.push(cls);
        }
        classes
    }

    /// Left regular λ(g): e_h ↦ e_{gh}.
    pub fn left_regular(&self, g: usize) -> CMatrix {
        let n = self.order();
        let mut m = CMatrix::zeros(n, n);
        for h in 0..n {
            m[(self.mul(g, h), h)] = ONE;
        }
        m
    }

    /// Right regular r(g): e_h ↦ e_{hg⁻¹}.
    pub fn right_regular(&self, g: usize) -> CMatrix {
        let n = self.order();
        let gi = self.inv(g);
        let mut m = CMatrix::zeros(n, n);
        for h in 0..n {
            m[(self.mul(h, gi), h)] = ONE;
        }
        m
    }

    /// Conjugation W_g: e_h ↦ e_{ghg⁻¹}.
    pub fn conjugation(&self, g: usize) -> CMatrix {
        let n = self.order();
        let mut m = CMatrix::zeros(n, n);
        for h in 0..n {
            m[(self.conjugate(g, h), h)] = ONE;
        }
        m
    }
}

/// (λ(g), r(g), W_g) for one element.
pub fn regular_representations(g: &FiniteGroup, elem: usize) -> Result<(CMatrix, CMatrix, CMatrix)> {
    if elem >= g.order() {
        return Err(Error::InvalidParameter(format!(
            "element {elem} out of range for group of order {}",
            g.order()
        )));
    }
    Ok((g.left_regular(elem), g.right_regular(elem), g.conjugation(elem)))
}

/// Random self-adjoint Σ c(g) λ(g) with c(g⁻¹) = conj(c(g)).
pub fn random_selfadjoint_element(g: &FiniteGroup, rng: &mut RandomSource) -> CMatrix {
    let n = g.order();
    let mut coeff = vec![C64::new(0.0, 0.0); n];
    for x in 0..n {
        let xi = g.inv(x);
        if xi < x {
            continue;
        }
        if xi == x {
            coeff[x] = C64::new(rng.gaussian(), 0.0);
        } else {
            let z = rng.complex_gaussian();
            coeff[x] = z;
            coeff[xi] = z.conj();
        }
    }
    let mut m = CMatrix::zeros(n, n);
    for (x, &c) in coeff.iter().enumerate() {
        for h in 0..n {
            m[(g.mul(x, h), h)] += c;
        }
    }
    m
}

/// Groups sorted eigenvalues into clusters of nearly equal values and returns
/// the cluster sizes in order.
pub fn cluster_sizes(sorted: &[f64], tol: f64) -> Vec<usize> {
    let mut sizes = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && (sorted[j - 1] - sorted[j]).abs() <= tol {
            j += 1;
        }
        sizes.push(j - i);
        i = j;
    }
    sizes
}

/// Irrep dimensions from eigenvalue multiplicities in the regular representation.
pub fn irrep_dimensions(g: &FiniteGroup, rng: &mut RandomSource) -> Result<IrrepProfile> {
    let n = g.order();
    for _ in 0..IRREP_MAX_ATTEMPTS {
        let a = random_selfadjoint_element(g, rng);
        let vals = eigvalsh(&a)?;
        let sizes = cluster_sizes(&vals, IRREP_CLUSTER_TOL);
        let mut count: BTreeMap<usize, usize> = BTreeMap::new();
        for s in sizes {
            *count.entry(s).or_default() += 1;
        }
        // an irrep of dimension s contributes s clusters of size s
        if count.iter().any(|(&s, &c)| c % s != 0) {
            continue;
        }
        let mut dims = Vec::new();
        for (&s, &c) in &count {
            dims.extend(std::iter::repeat_n(s, c / s));
        }
        let profile = IrrepProfile {
            d_max: dims.iter().copied().max().unwrap_or(1),
            dims,
        };
        if profile.burnside_sum() == n {
            return Ok(profile);
        }
    }
    Err(Error::IrrepFailure(IRREP_MAX_ATTEMPTS))
}

/// Parses group names such as `Z6`, `D8` (order 8), `S3`, `Q8`,
/// `semidirect:2:3` or `file:path/to/table.txt`.
pub fn parse_group(name: &str) -> Result<FiniteGroup> {
    let s = name.trim();
    let bad = || Error::InvalidGroup(format!("unrecognised group '{name}'"));
    if let Some(path) = s.strip_prefix("file:") {
        return FiniteGroup::from_cayley_file(Path::new(path));
    }
    if let Some(rest) = s.strip_prefix("semidirect:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 2 {
            return Err(bad());
        }
        let d = parts[0].parse().map_err(|_| bad())?;
        let l = parts[1].parse().map_err(|_| bad())?;
        return semidirect_shift(d, l);
    }
    if s.eq_ignore_ascii_case("q8") {
        return quaternion();
    }
    let (head, num) = s.split_at(1);
    let k: usize = num.parse().map_err(|_| bad())?;
    match head {
        "Z" | "z" | "C" | "c" => cyclic(k),
        "D" | "d" => {
            if k < 2 || k % 2 != 0 {
                return Err(Error::InvalidGroup(format!(
                    "dihedral names give the order, which must be even: '{name}'"
                )));
            }
            dihedral(k / 2)
        }
        "S" | "s" => symmetric(k),
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_four() {
        let g = cyclic(4).unwrap();
        assert_eq!(g.order(), 4);
        assert!(g.is_abelian());
        assert_eq!(g.identity(), 0);
        assert_eq!(g.inv(1), 3);
    }

    #[test]
    fn dihedral_order_and_commutativity() {
        let g = dihedral(4).unwrap();
        assert_eq!(g.order(), 8);
        assert!(!g.is_abelian());
        assert_eq!(g.label(0), "e");
    }

    #[test]
    fn symmetric_three_has_three_classes() {
        let g = symmetric(3).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.conjugacy_classes().len(), 3);
        assert_eq!(g.label(0), "e");
        assert!(symmetric(6).is_err());
    }

    #[test]
    fn quaternion_relations() {
        let g = quaternion().unwrap();
        let (i, j, k, minus_one) = (2, 4, 6, 1);
        assert_eq!(g.mul(i, i), minus_one);
        assert_eq!(g.mul(i, j), k);
        assert_eq!(g.mul(j, i), k + 1);
        assert_eq!(g.mul(g.mul(i, j), k), minus_one);
    }

    #[test]
    fn semidirect_order() {
        let g = semidirect_shift(2, 3).unwrap();
        assert_eq!(g.order(), 24);
        assert!(!g.is_abelian());
        assert_eq!(g.identity(), 0);
    }

    #[test]
    fn invalid_tables_rejected() {
        assert!(FiniteGroup::from_cayley("x", vec![vec![0, 1], vec![0, 1]], None).is_err());
        // Latin square without an identity-compatible associative law
        let t = vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]];
        assert!(FiniteGroup::from_cayley("x", t, None).is_err());
    }

    #[test]
    fn cayley_text_roundtrip() {
        let g = FiniteGroup::from_cayley_text("3\n0 1 2\n1 2 0\n2 0 1\n").unwrap();
        assert_eq!(g.order(), 3);
        assert!(FiniteGroup::from_cayley_text("3\n0 1 2\n1 2 0\n").is_err());
    }

    #[test]
    fn z2_left_regular_is_pauli_x() {
        let g = cyclic(2).unwrap();
        let (l, _, _) = regular_representations(&g, 1).unwrap();
        let x = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(l, x);
        let (l0, r0, w0) = regular_representations(&g, 0).unwrap();
        assert_eq!(l0, CMatrix::identity(2));
        assert_eq!(r0, CMatrix::identity(2));
        assert_eq!(w0, CMatrix::identity(2));
    }

    #[test]
    fn s3_left_and_right_commute() {
        let g = symmetric(3).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                let c = g.left_regular(a).commutator(&g.right_regular(b));
                assert_eq!(c.max_abs(), 0.0);
            }
        }
    }

    #[test]
    fn regular_representations_are_homomorphisms() {
        let g = dihedral(3).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                let ab = g.mul(a, b);
                assert_eq!(g.left_regular(a).matmul(&g.left_regular(b)), g.left_regular(ab));
                assert_eq!(g.right_regular(a).matmul(&g.right_regular(b)), g.right_regular(ab));
                assert_eq!(g.conjugation(a).matmul(&g.conjugation(b)), g.conjugation(ab));
            }
        }
    }

    #[test]
    fn irreps_of_small_groups() {
        let mut rng = RandomSource::new(1);
        let p = irrep_dimensions(&cyclic(6).unwrap(), &mut rng).unwrap();
        assert_eq!(p.dims, vec![1; 6]);
        assert_eq!(p.d_max, 1);
        let p = irrep_dimensions(&symmetric(4).unwrap(), &mut rng).unwrap();
        assert_eq!(p.dims, vec![1, 1, 2, 3, 3]);
        for n in 3..=8 {
            let p = irrep_dimensions(&dihedral(n).unwrap(), &mut rng).unwrap();
            assert_eq!(p.d_max, 2, "dihedral({n})");
        }
    }

    #[test]
    fn parse_names() {
        assert_eq!(parse_group("Z5").unwrap().order(), 5);
        assert_eq!(parse_group("D8").unwrap().order(), 8);
        assert_eq!(parse_group("S3").unwrap().order(), 6);
        assert_eq!(parse_group("Q8").unwrap().order(), 8);
        assert_eq!(parse_group("semidirect:3:2").unwrap().order(), 18);
        assert!(parse_group("D7").is_err());
        assert!(parse_group("X4").is_err());
    }

    #[test]
    fn cluster_sizes_groups_close_values() {
        assert_eq!(cluster_sizes(&[3.0, 3.0 + 1e-9, 1.0, 0.0, -1e-8], 1e-7), vec![2, 1, 2]);
    }
}
