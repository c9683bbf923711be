//! Concrete channel families, both as direct Kraus constructions and as
//! [`VNChannelSpec`]s.

use std::f64::consts::PI;
use std::fmt;

use super::channel::{check_unit_interval, make_labelled, Channel};
use super::subalgebra::{block_structure, SubalgebraSpec};
use super::symbol::{
    group_algebra_element, random_diagonal, random_full_matrix, random_group_algebra,
    random_group_algebra_diagonal, SymbolAlgebra, SymbolDensity,
};
use super::vn::{pivoted_cholesky, vn_channel, VNChannelSpec};
use crate::error::{Error, Result};
use crate::groups::{irrep_dimensions, FiniteGroup};
use crate::matcore::{eigvalsh, kron, kron_all, CMatrix, RandomSource, C64, ONE, ZERO};

/// Schur-multiplier channel ρ ↦ [c(g⁻¹g′)] ∘ ρ on M_{|G|}.
pub fn group_schur(g: &FiniteGroup, coeffs: &[C64]) -> Result<Channel> {
    let n = g.order();
    if coeffs.len() != n {
        return Err(Error::InvalidParameter("one coefficient per group element".into()));
    }
    let mult = CMatrix::from_fn(n, n, |a, b| coeffs[g.mul(g.inv(a), b)]);
    if (0..n).any(|a| (mult[(a, a)] - ONE).norm() > 1e-10) {
        return Err(Error::InvalidParameter("multiplier needs unit diagonal".into()));
    }
    if mult.hermitian_defect() > 1e-10 {
        return Err(Error::InvalidParameter("multiplier is not self-adjoint".into()));
    }
    let min = eigvalsh(&mult)?.last().copied().unwrap_or(0.0);
    if min < -1e-9 {
        return Err(Error::InvalidParameter(format!(
            "multiplier is not positive (eigenvalue {min:.3e})"
        )));
    }
    let l = pivoted_cholesky(&mult)?;
    let kraus = (0..l.cols())
        .map(|a| CMatrix::diag_complex(&l.col(a)))
        .collect();
    make_labelled(kraus, &format!("schur({})", g.name()))
}

/// θ_f(ρ) = (1/|G|) Σ f(g) λ(g) ρ λ(g)* with Σ f(g) = |G|.
pub fn group_random_unitary(g: &FiniteGroup, weights: &[f64]) -> Result<Channel> {
    let n = g.order();
    check_weights(weights, n, n as f64)?;
    let kraus = (0..n)
        .map(|x| g.left_regular(x).scale_real((weights[x] / n as f64).sqrt()))
        .collect();
    make_labelled(kraus, &format!("random_unitary({})", g.name()))
}

fn check_weights(w: &[f64], len: usize, total: f64) -> Result<()> {
    if w.len() != len {
        return Err(Error::InvalidParameter(format!("expected {len} weights, got {}", w.len())));
    }
    if w.iter().any(|&x| x < 0.0 || !x.is_finite()) {
        return Err(Error::InvalidParameter("weights must be non-negative".into()));
    }
    let s: f64 = w.iter().sum();
    if (s - total).abs() > 1e-8 * total.max(1.0) {
        return Err(Error::InvalidParameter(format!("weights sum to {s}, expected {total}")));
    }
    Ok(())
}

/// Shift X e_k = e_{k+1}.
pub fn shift_matrix(n: usize) -> CMatrix {
    let mut x = CMatrix::zeros(n, n);
    for k in 0..n {
        x[((k + 1) % n, k)] = ONE;
    }
    x
}

/// Clock Z e_k = exp(2πik/n) e_k.
pub fn clock_matrix(n: usize) -> CMatrix {
    CMatrix::diag_complex(
        &(0..n)
            .map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
            .collect::<Vec<_>>(),
    )
}

/// Weyl operators X^i Z^j indexed by i·n + j.
pub fn weyl_operators(n: usize) -> Vec<CMatrix> {
    let x = shift_matrix(n);
    let z = clock_matrix(n);
    let mut xp = CMatrix::identity(n);
    let mut out = Vec::with_capacity(n * n);
    for _ in 0..n {
        let mut zp = CMatrix::identity(n);
        for _ in 0..n {
            out.push(xp.matmul(&zp));
            zp = zp.matmul(&z);
        }
        xp = xp.matmul(&x);
    }
    out
}

/// θ_f(ρ) = (1/n²) Σ f_ij XⁱZʲ ρ (XⁱZʲ)†, weights indexed i·n + j.
pub fn pauli(n: usize, weights: &[f64]) -> Result<Channel> {
    if n == 0 {
        return Err(Error::InvalidParameter("Pauli dimension must be positive".into()));
    }
    check_weights(weights, n * n, (n * n) as f64)?;
    let kraus = weyl_operators(n)
        .into_iter()
        .zip(weights)
        .map(|(w, &f)| w.scale_real((f / (n * n) as f64).sqrt()))
        .collect();
    make_labelled(kraus, &format!("pauli(n={n})"))
}

/// Jordan–Wigner generators C₁..C_{2k} on 2^k dimensions.
pub fn clifford_generators(k: usize) -> Vec<CMatrix> {
    let x = CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    let y = CMatrix::from_vec(2, 2, vec![ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO]).unwrap();
    let z = CMatrix::diag_real(&[1.0, -1.0]);
    let id = CMatrix::identity(2);
    let mut out = Vec::with_capacity(2 * k);
    for j in 0..k {
        for p in [&x, &y] {
            let factors: Vec<CMatrix> = (0..k)
                .map(|t| match t.cmp(&j) {
                    std::cmp::Ordering::Less => z.clone(),
                    std::cmp::Ordering::Equal => p.clone(),
                    std::cmp::Ordering::Greater => id.clone(),
                })
                .collect();
            out.push(kron_all(&factors));
        }
    }
    out
}

/// Ordered products C_A for every subset A ⊆ [2k], indexed by bitmask.
pub fn clifford_products(k: usize) -> Vec<CMatrix> {
    let gens = clifford_generators(k);
    let d = 1usize << k;
    (0..1usize << (2 * k))
        .map(|mask| {
            let mut c = CMatrix::identity(d);
            for (i, g) in gens.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    c = c.matmul(g);
                }
            }
            c
        })
        .collect()
}

/// (1/4^k) Σ_A f(A) C_A ρ C_A†, weights indexed by subset bitmask.
pub fn clifford(k: usize, weights: &[f64]) -> Result<Channel> {
    if k == 0 || k > 4 {
        return Err(Error::InvalidParameter("Clifford k must be in 1..=4".into()));
    }
    let total = (1usize << (2 * k)) as f64;
    check_weights(weights, 1 << (2 * k), total)?;
    let kraus = clifford_products(k)
        .into_iter()
        .zip(weights)
        .map(|(c, &f)| c.scale_real((f / total).sqrt()))
        .collect();
    make_labelled(kraus, &format!("clifford(k={k})"))
}

/// Depolarizing D_q(ρ) = qρ + (1−q) tr(ρ) I/d, realised as a Pauli channel.
pub fn depolarizing(d: usize, q: f64) -> Result<Channel> {
    check_unit_interval(q, "depolarizing parameter")?;
    if d < 1 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    let mut w = vec![1.0 - q; d * d];
    w[0] = q * (d * d) as f64 + (1.0 - q);
    Ok(pauli(d, &w)?.with_label(format!("depolarizing(d={d},q={q})")))
}

/// Which symbol algebra the crossed-product channel uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossedCase {
    /// N = L(G) ⊗ ℓ∞(G), yᵢ = λ(h) ⊗ e_gg
    Local,
    /// N = M_{|G|}, yᵢ = e_{hg,g}
    Charge,
}

impl fmt::Display for CrossedCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrossedCase::Local => write!(f, "local"),
            CrossedCase::Charge => write!(f, "charge"),
        }
    }
}

/// A_g = λ(g) ⊗ W_g on ℓ₂(G) ⊗ ℓ₂(G).
pub fn crossed_a(g: &FiniteGroup, x: usize) -> CMatrix {
    kron(&g.left_regular(x), &g.conjugation(x))
}

/// B_h = 1 ⊗ e_hh.
pub fn crossed_b(g: &FiniteGroup, h: usize) -> CMatrix {
    let n = g.order();
    kron(&CMatrix::identity(n), &CMatrix::unit(n, n, h, h))
}

/// Permutation e_g ⊗ e_h ↦ e_{g⁻¹} ⊗ e_{g⁻¹hg}; with complex conjugation it
/// implements the antiunitary J exchanging M′ and M.
fn crossed_j_permutation(g: &FiniteGroup) -> CMatrix {
    let n = g.order();
    let mut p = CMatrix::zeros(n * n, n * n);
    for a in 0..n {
        for b in 0..n {
            let ai = g.inv(a);
            let c = g.mul(g.mul(ai, b), a);
            p[(ai * n + c, a * n + b)] = ONE;
        }
    }
    p
}

fn tau_orthonormal_diagonal(n: usize) -> Vec<CMatrix> {
    let s = (n as f64).sqrt();
    (0..n).map(|i| CMatrix::unit(n, n, i, i).scale_real(s)).collect()
}

fn tau_orthonormal_full(n: usize) -> Vec<CMatrix> {
    let s = (n as f64).sqrt();
    (0..n * n)
        .map(|k| CMatrix::unit(n, n, k / n, k % n).scale_real(s))
        .collect()
}

fn scaled(ms: &[CMatrix], s: f64) -> Vec<CMatrix> {
    ms.iter().map(|m| m.scale_real(s)).collect()
}

/// The families realised as VN-channels.
#[derive(Debug, Clone)]
pub enum Family {
    /// Schur multipliers from L(G): xₕ = e_hh, yₕ = λ(h).
    Schur(FiniteGroup),
    /// Random unitaries from ℓ∞(G): x_g = λ(g), y_g = e_gg.
    RandomUnitary(FiniteGroup),
    /// Generalized Pauli on C^n.
    Pauli(usize),
    /// Clifford-algebra channel on 2^k dimensions.
    Clifford(usize),
    /// Crossed product ℓ∞(G) ⋊ G on ℓ₂(G) ⊗ ℓ₂(G).
    Crossed(FiniteGroup, CrossedCase),
    /// x = e_{gh,h}, y = e_{g,gh}: Schur multiplication by f after group averaging.
    NonUnital(FiniteGroup),
}

impl Family {
    pub fn name(&self) -> String {
        match self {
            Family::Schur(g) => format!("schur({})", g.name()),
            Family::RandomUnitary(g) => format!("group-random-unitary({})", g.name()),
            Family::Pauli(n) => format!("pauli(n={n})"),
            Family::Clifford(k) => format!("clifford(k={k})"),
            Family::Crossed(g, c) => format!("crossed-{c}({})", g.name()),
            Family::NonUnital(g) => format!("nonunital({})", g.name()),
        }
    }

    /// Builds and validates the spec. The random source is only used to read
    /// off block structures from generic eigenvalue multiplicities.
    pub fn spec(&self, rng: &mut RandomSource) -> Result<VNChannelSpec> {
        let spec = match self {
            Family::Schur(g) => schur_spec(g),
            Family::RandomUnitary(g) => random_unitary_spec(g, rng)?,
            Family::Pauli(n) => pauli_spec(*n)?,
            Family::Clifford(k) => clifford_spec(*k)?,
            Family::Crossed(g, case) => crossed_spec(g, *case, rng)?,
            Family::NonUnital(g) => nonunital_spec(g),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn symbol_algebra(&self) -> SymbolAlgebra {
        match self {
            Family::Schur(g) => SymbolAlgebra::GroupAlgebra(g.order()),
            Family::RandomUnitary(g) => SymbolAlgebra::Diagonal(g.order()),
            Family::Pauli(n) => SymbolAlgebra::Diagonal(n * n),
            Family::Clifford(k) => SymbolAlgebra::Diagonal(1 << (2 * k)),
            Family::Crossed(g, CrossedCase::Local) => SymbolAlgebra::GroupAlgebraDiagonal(g.order()),
            Family::Crossed(g, CrossedCase::Charge) | Family::NonUnital(g) => {
                SymbolAlgebra::FullMatrix(g.order())
            }
        }
    }

    pub fn random_density(&self, rng: &mut RandomSource) -> SymbolDensity {
        match self {
            Family::Schur(g) => random_group_algebra(g, rng),
            Family::Crossed(g, CrossedCase::Local) => random_group_algebra_diagonal(g, rng),
            _ => match self.symbol_algebra() {
                SymbolAlgebra::Diagonal(n) => random_diagonal(n, rng),
                SymbolAlgebra::FullMatrix(n) => random_full_matrix(n, rng),
                _ => unreachable!("covered above"),
            },
        }
    }

    pub fn uniform_density(&self) -> SymbolDensity {
        SymbolDensity::one(self.symbol_algebra())
    }

    /// Most concentrated density: a point mass, or a rank-one projection
    /// scaled to τ = 1.
    pub fn point_density(&self) -> SymbolDensity {
        let alg = self.symbol_algebra();
        let d = alg.matrix_dim();
        match self {
            Family::Schur(g) => {
                SymbolDensity::group_algebra(g, &vec![ONE; g.order()]).expect("|G|·projection")
            }
            Family::Crossed(g, CrossedCase::Local) => {
                let n = g.order();
                let mut blocks = vec![vec![ZERO; n]; n];
                blocks[0] = vec![C64::new(n as f64, 0.0); n];
                SymbolDensity::group_algebra_diagonal(g, &blocks).expect("point density")
            }
            _ => {
                let m = CMatrix::unit(d, d, 0, 0).scale_real(d as f64);
                SymbolDensity::new(alg, m).expect("point density")
            }
        }
    }

    /// Densities given as real vectors (diagonal families) or, for Schur,
    /// as group-algebra coefficients.
    pub fn density_from_vector(&self, v: &[f64]) -> Result<SymbolDensity> {
        match self {
            Family::Schur(g) => SymbolDensity::group_algebra(
                g,
                &v.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>(),
            ),
            _ => match self.symbol_algebra() {
                SymbolAlgebra::Diagonal(n) => {
                    if v.len() != n {
                        return Err(Error::InvalidDensity(format!("expected {n} weights")));
                    }
                    SymbolDensity::diagonal(v)
                }
                SymbolAlgebra::FullMatrix(n) => {
                    if v.len() != n * n {
                        return Err(Error::InvalidDensity(format!("expected {} entries", n * n)));
                    }
                    SymbolDensity::full_matrix(CMatrix::from_fn(n, n, |i, j| {
                        C64::new(v[i * n + j], 0.0)
                    }))
                }
                _ => Err(Error::InvalidDensity(
                    "explicit densities are not supported for this family".into(),
                )),
            },
        }
    }

    /// Direct construction of θ_f where one exists independently of the
    /// VN constructor.
    pub fn direct_channel(&self, f: &SymbolDensity) -> Result<Option<Channel>> {
        Ok(match self {
            Family::Schur(g) => Some(group_schur(g, &f.group_coefficients(g)?)?),
            Family::RandomUnitary(g) => Some(group_random_unitary(g, &diag_weights(f))?),
            Family::Pauli(n) => Some(pauli(*n, &diag_weights(f))?),
            Family::Clifford(k) => Some(clifford(*k, &diag_weights(f))?),
            Family::NonUnital(g) => Some(nonunital_twirl_schur(g, f)?),
            Family::Crossed(..) => None,
        })
    }

    /// θ_f through the VN constructor.
    pub fn channel(&self, f: &SymbolDensity, rng: &mut RandomSource) -> Result<Channel> {
        vn_channel(&self.spec(rng)?, f)
    }
}

fn diag_weights(f: &SymbolDensity) -> Vec<f64> {
    f.matrix().diagonal().iter().map(|z| z.re).collect()
}

fn schur_spec(g: &FiniteGroup) -> VNChannelSpec {
    let n = g.order();
    let units: Vec<CMatrix> = (0..n).map(|h| CMatrix::unit(n, n, h, h)).collect();
    VNChannelSpec {
        label: Family::Schur(g.clone()).name(),
        xs: units.clone(),
        ys: (0..n).map(|h| g.left_regular(h)).collect(),
        symbol: SymbolAlgebra::GroupAlgebra(n),
        symbol_basis: (0..n).map(|h| g.left_regular(h)).collect(),
        subalgebra: SubalgebraSpec::diagonal(n),
        algebra_basis: units.clone(),
        commutant_basis: units.clone(),
        expectation_kraus: units,
    }
}

fn random_unitary_spec(g: &FiniteGroup, rng: &mut RandomSource) -> Result<VNChannelSpec> {
    let n = g.order();
    let s = 1.0 / (n as f64).sqrt();
    let profile = irrep_dimensions(g, rng)?;
    let lambdas: Vec<CMatrix> = (0..n).map(|x| g.left_regular(x)).collect();
    let commutant = scaled(&lambdas, s);
    Ok(VNChannelSpec {
        label: Family::RandomUnitary(g.clone()).name(),
        xs: lambdas,
        ys: (0..n).map(|x| CMatrix::unit(n, n, x, x)).collect(),
        symbol: SymbolAlgebra::Diagonal(n),
        symbol_basis: tau_orthonormal_diagonal(n),
        subalgebra: SubalgebraSpec::new(profile.dims.iter().map(|&d| (d, d)).collect())?,
        algebra_basis: (0..n).map(|x| g.right_regular(x).scale_real(s)).collect(),
        commutant_basis: commutant.clone(),
        expectation_kraus: commutant,
    })
}

/// Spec for channels x_i = unitary basis of M_m, y_i = e_ii, M = C·1.
fn scalar_spec(label: String, unitaries: Vec<CMatrix>) -> Result<VNChannelSpec> {
    let m = unitaries[0].rows();
    let k = unitaries.len();
    if k != m * m {
        return Err(Error::InvalidParameter("need m² unitaries".into()));
    }
    let sm = (m as f64).sqrt();
    Ok(VNChannelSpec {
        label,
        ys: (0..k).map(|i| CMatrix::unit(k, k, i, i)).collect(),
        symbol: SymbolAlgebra::Diagonal(k),
        symbol_basis: tau_orthonormal_diagonal(k),
        subalgebra: SubalgebraSpec::scalars(m),
        algebra_basis: vec![CMatrix::identity(m).scale_real(1.0 / sm)],
        commutant_basis: scaled(&unitaries, 1.0 / sm),
        expectation_kraus: scaled(&unitaries, 1.0 / m as f64),
        xs: unitaries,
    })
}

fn pauli_spec(n: usize) -> Result<VNChannelSpec> {
    if n == 0 {
        return Err(Error::InvalidParameter("Pauli dimension must be positive".into()));
    }
    scalar_spec(Family::Pauli(n).name(), weyl_operators(n))
}

fn clifford_spec(k: usize) -> Result<VNChannelSpec> {
    if k == 0 || k > 4 {
        return Err(Error::InvalidParameter("Clifford k must be in 1..=4".into()));
    }
    scalar_spec(Family::Clifford(k).name(), clifford_products(k))
}

fn crossed_spec(g: &FiniteGroup, case: CrossedCase, rng: &mut RandomSource) -> Result<VNChannelSpec> {
    let n = g.order();
    let sn = (n as f64).sqrt();
    let mut xs = Vec::with_capacity(n * n);
    let mut ys = Vec::with_capacity(n * n);
    for x in 0..n {
        let a = crossed_a(g, x);
        for h in 0..n {
            xs.push(a.matmul(&crossed_b(g, h)));
            ys.push(match case {
                CrossedCase::Local => kron(&g.left_regular(h), &CMatrix::unit(n, n, x, x)),
                CrossedCase::Charge => CMatrix::unit(n, n, g.mul(h, x), x),
            });
        }
    }
    let (symbol, symbol_basis) = match case {
        CrossedCase::Local => (
            SymbolAlgebra::GroupAlgebraDiagonal(n),
            (0..n)
                .flat_map(|h| (0..n).map(move |x| (h, x)))
                .map(|(h, x)| kron(&g.left_regular(h), &CMatrix::unit(n, n, x, x).scale_real(sn)))
                .collect(),
        ),
        CrossedCase::Charge => (SymbolAlgebra::FullMatrix(n), tau_orthonormal_full(n)),
    };
    let commutant = scaled(&xs, 1.0 / sn);
    let p = crossed_j_permutation(g);
    let pt = p.transpose();
    let algebra_basis: Vec<CMatrix> = commutant
        .iter()
        .map(|e| p.matmul(&e.conj()).matmul(&pt))
        .collect();
    let subalgebra = block_structure(&algebra_basis, &commutant, rng)?;
    Ok(VNChannelSpec {
        label: Family::Crossed(g.clone(), case).name(),
        xs,
        ys,
        symbol,
        symbol_basis,
        subalgebra,
        algebra_basis,
        commutant_basis: commutant.clone(),
        expectation_kraus: commutant,
    })
}

fn nonunital_spec(g: &FiniteGroup) -> VNChannelSpec {
    let n = g.order();
    let sn = (n as f64).sqrt();
    let mut xs = Vec::with_capacity(n * n);
    let mut ys = Vec::with_capacity(n * n);
    for x in 0..n {
        for h in 0..n {
            let xh = g.mul(x, h);
            xs.push(CMatrix::unit(n, n, xh, h));
            ys.push(CMatrix::unit(n, n, x, xh));
        }
    }
    let units: Vec<CMatrix> = (0..n * n).map(|k| CMatrix::unit(n, n, k / n, k % n)).collect();
    VNChannelSpec {
        label: Family::NonUnital(g.clone()).name(),
        xs,
        ys,
        symbol: SymbolAlgebra::FullMatrix(n),
        symbol_basis: tau_orthonormal_full(n),
        subalgebra: SubalgebraSpec::scalars(n),
        algebra_basis: vec![CMatrix::identity(n).scale_real(1.0 / sn)],
        expectation_kraus: scaled(&units, 1.0 / sn),
        commutant_basis: units,
    }
}

/// Crossed-product channel through the VN constructor.
pub fn crossed_product(
    g: &FiniteGroup,
    f: &SymbolDensity,
    case: CrossedCase,
    rng: &mut RandomSource,
) -> Result<Channel> {
    Family::Crossed(g.clone(), case).channel(f, rng)
}

/// θ_f(ρ) = f ∘ ((1/|G|) Σ_g λ(g) ρ λ(g)*), with f a density in (M_{|G|}, tr/|G|).
pub fn nonunital_twirl_schur(g: &FiniteGroup, f: &SymbolDensity) -> Result<Channel> {
    let n = g.order();
    if f.algebra() != &SymbolAlgebra::FullMatrix(n) {
        return Err(Error::InvalidDensity("need a full-matrix density on |G| dims".into()));
    }
    // Schur multiplication by f has Kraus diag(L_{·a}) with f = LL†
    let l = pivoted_cholesky(f.matrix())?;
    let s = 1.0 / (n as f64).sqrt();
    let mut kraus = Vec::with_capacity(l.cols() * n);
    for a in 0..l.cols() {
        let d = CMatrix::diag_complex(&l.col(a));
        for x in 0..n {
            kraus.push(d.matmul(&g.left_regular(x)).scale_real(s));
        }
    }
    make_labelled(kraus, &format!("nonunital({})", g.name()))
}

/// Random group-algebra coefficients with a PSD multiplier and c(e) = 1.
pub fn random_schur_coefficients(g: &FiniteGroup, rng: &mut RandomSource) -> Vec<C64> {
    random_group_algebra(g, rng)
        .group_coefficients(g)
        .expect("group-algebra density")
}

/// Σ c(g) λ(g) for coefficient vectors, re-exported for callers building
/// group-algebra densities by hand.
pub fn group_element(g: &FiniteGroup, coeffs: &[C64]) -> CMatrix {
    group_algebra_element(g, coeffs)
}
