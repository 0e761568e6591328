//! Numerical ledger of the cone threefold over `T`.
//!
//! For an ample `A` on `T` whose pullback has unit-fraction coefficients
//! along the contracted curves, `π: X → S` is a generalised `P¹`-bundle with
//! sections `S^±`, `f: X → Y` contracts the surfaces `R_C = π^{-1}(C)_red`,
//! and `g: Y → Z` contracts `T^-`. Threefold cycles are kept as names; their
//! intersection numbers are computed from the lattice of `S`, the lattice of
//! `R_C ≅ P¹ × P¹`, and the resolution chains, and compared with closed
//! forms wherever both are available.

pub mod kvv;
pub mod resolution;

use serde::Serialize;

pub use kvv::{kvv_schedule, KvvState, KvvTrace};
pub use resolution::{dual_graph, hirzebruch_jung, ResolutionRecord, SliceResolution};

use crate::cohom::TContext;
use crate::contract::SingularityClass;
use crate::error::{Error, Result};
use crate::km_surface::{exc, gamma};
use crate::qlattice::{ClassVector, IntersectionLattice, NamedDivisor, Rat};

/// `Σ_{i≤q} E_i^T - E_{q+1}^T`.
pub fn plt_divisor(q: usize) -> NamedDivisor {
    let mut a = NamedDivisor::from_terms((1..=q).map(|i| (exc(i), Rat::one())));
    a.add_term(exc(q + 1), Rat::int(-1));
    a
}

/// `Σ_{i≤3q} E_i^T - Σ_{3q<j≤4q} E_j^T`.
pub fn bad_fano_divisor(q: usize) -> NamedDivisor {
    let mut a = NamedDivisor::from_terms((1..=3 * q).map(|i| (exc(i), Rat::one())));
    for j in 3 * q + 1..=4 * q {
        a.add_term(exc(j), Rat::int(-1));
    }
    a
}

/// Checks `q ≥ 2`, `d ≥ q + 2` and `(q - 1) | (2d - 4)`.
pub fn check_plt_parameters(d: usize, q: usize) -> Result<()> {
    if q < 2 {
        return Err(Error::InvalidParameters(format!("q = {q} must be at least 2")));
    }
    if d < q + 2 {
        return Err(Error::InvalidParameters(format!(
            "d = {d} must be at least q + 2 = {}",
            q + 2
        )));
    }
    if !(2 * d - 4).is_multiple_of(q - 1) {
        return Err(Error::InvalidParameters(format!(
            "q - 1 = {} does not divide 2d - 4 = {}",
            q - 1,
            2 * d - 4
        )));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct ConeInput {
    ctx: TContext,
    a: NamedDivisor,
}

impl ConeInput {
    /// `a` must be an integral ample divisor on `T`.
    pub fn new(ctx: TContext, a: NamedDivisor) -> Result<Self> {
        if let Some((curve, coeff)) = a.terms().find(|(_, c)| !c.is_integer()) {
            return Err(Error::NonIntegralDivisor {
                curve: curve.to_string(),
                coeff: coeff.clone(),
            });
        }
        if !ctx.psi.is_ample_rho1(&a)? {
            return Err(Error::NotAmple);
        }
        Ok(ConeInput { ctx, a })
    }

    pub fn n_plt(d: usize, q: usize) -> Result<Self> {
        check_plt_parameters(d, q)?;
        Self::new(TContext::new(d)?, plt_divisor(q))
    }

    pub fn n_bad_fano(q: usize) -> Result<Self> {
        if q < 1 {
            return Err(Error::InvalidParameters("q must be at least 1".into()));
        }
        Self::new(TContext::new(4 * q + 2)?, bad_fano_divisor(q))
    }

    pub fn ctx(&self) -> &TContext {
        &self.ctx
    }

    pub fn divisor(&self) -> &NamedDivisor {
        &self.a
    }

    pub fn d(&self) -> usize {
        self.ctx.d()
    }
}

/// `m_C` for every contracted curve, in contraction order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicityTable {
    pub entries: Vec<(String, u64)>,
}

impl MultiplicityTable {
    pub fn get(&self, curve: &str) -> Option<u64> {
        self.entries.iter().find(|(c, _)| c == curve).map(|(_, m)| *m)
    }
}

/// Reads `m_C` off the fractional parts of `ψ*A`: `0` gives `m_C = 1`,
/// `1/m` gives `m_C = m`, anything else violates the assumption.
pub fn validate_assumption_a(input: &ConeInput) -> Result<MultiplicityTable> {
    let pulled = input.ctx.psi.pullback(&input.a)?;
    let mut entries = Vec::new();
    for c in input.ctx.psi.contracted() {
        let frac = pulled.coeff(c).fract();
        let m = if frac.is_zero() {
            1
        } else if *frac.numer() == 1.into() {
            frac.denom().try_into().map_err(|_| Error::AssumptionViolated {
                curve: c.clone(),
                fraction: frac.clone(),
            })?
        } else {
            return Err(Error::AssumptionViolated {
                curve: c.clone(),
                fraction: frac,
            });
        };
        entries.push((c.clone(), m));
    }
    Ok(MultiplicityTable { entries })
}

/// Intersection numbers along one `R_C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveLedger {
    pub curve: String,
    pub self_intersection: Rat,
    pub m: u64,
    /// `π*C = m R_C`.
    pub pullback_multiplicity: u64,
    /// `(C^± in R_C)²`.
    pub section_square_in_rc: Rat,
    pub s_plus_dot_c_plus: Rat,
    pub s_minus_dot_c_minus: Rat,
    pub s_minus_dot_c_plus: Rat,
    pub kx_dot_c_plus: Rat,
    pub kx_dot_c_minus: Rat,
    /// `c_C` in `K_X + Σ c_C R_C = f*K_Y`.
    pub crepant_coefficient: Rat,
    /// `a(R_C, Y) = -c_C`.
    pub discrepancy_over_y: Rat,
}

/// Intersection numbers of the section curves `E_i^± = E_i^X ∩ S^±`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionLedger {
    pub i: usize,
    pub j: usize,
    pub psi_a_dot_e_j: Rat,
    pub s_plus_dot_e_plus_j: Rat,
    pub s_minus_dot_e_minus_j: Rat,
    pub kx_dot_e_plus_i: Rat,
    pub kx_dot_e_minus_i: Rat,
    /// `(Σ c_C R_C) · E_i^±`.
    pub exceptional_dot_e_i: Rat,
    pub ky_dot_f_e_plus_i: Rat,
    pub ky_dot_f_e_minus_i: Rat,
    pub ey_i_dot_f_e_plus_j: Rat,
    pub ey_i_dot_f_e_minus_j: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PltCoefficient {
    pub i: usize,
    pub psi_a_dot_e_i: Rat,
    /// `b` in `K_Y + E_i^Y + b T^- = g*(K_Z + E_i^Z)`.
    pub b: Rat,
    pub surface_class: SingularityClass,
    pub plt: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjunctionCheck {
    pub cycle: String,
    /// `(K_X + S^+ + S^-) · cycle` from the ledger.
    pub canonical_lhs: Rat,
    /// `(K_S + Σ (m_C - 1)/m_C C) · π_*cycle` on `S`.
    pub canonical_rhs: Rat,
    /// `(S^+ - S^-) · cycle` from the ledger.
    pub normal_lhs: Rat,
    /// `ψ*A · π_*cycle` on `S`.
    pub normal_rhs: Rat,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjunctionReport {
    pub checks: Vec<AdjunctionCheck>,
}

impl AdjunctionReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&AdjunctionCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PicardChain {
    pub rho_s: usize,
    pub rho_t: usize,
    pub rho_x: usize,
    pub rho_y: usize,
    pub rho_z: usize,
}

#[derive(Clone, Debug)]
pub struct ConeModel {
    input: ConeInput,
    m: MultiplicityTable,
    pullback: NamedDivisor,
    /// `R_C ≅ P¹ × P¹` with basis (fibre over `C`, section).
    rc_lattice: IntersectionLattice,
    different: NamedDivisor,
    different_class: ClassVector,
    pullback_class: ClassVector,
    curves: Vec<CurveLedger>,
    indices: Vec<IndexNumbers>,
}

fn rc_lattice() -> IntersectionLattice {
    let gram = vec![vec![Rat::zero(), Rat::one()], vec![Rat::one(), Rat::zero()]];
    IntersectionLattice::new(
        vec!["fibre".into(), "section".into()],
        gram,
        ClassVector::from_ints(&[-2, -2]),
        Rat::one(),
    )
    .expect("fixed lattice")
}

fn expect_eq(what: String, computed: Rat, expected: Rat) -> Result<Rat> {
    if computed != expected {
        return Err(Error::ClosedFormMismatch {
            what,
            computed: computed.to_string(),
            expected: expected.to_string(),
        });
    }
    Ok(computed)
}

impl ConeModel {
    pub fn new(input: ConeInput) -> Result<Self> {
        let m = validate_assumption_a(&input)?;
        let pullback = input.ctx.psi.pullback(&input.a)?;
        let mut different = input.ctx.surface.anticanonical_divisor().scale(&Rat::int(-1));
        for (c, mc) in &m.entries {
            different.add_term(c.as_str(), Rat::new(*mc as i64 - 1, *mc as i64));
        }
        let source = input.ctx.psi.source();
        let different_class = source.class_of(&different)?;
        let pullback_class = source.class_of(&pullback)?;
        let mut model = ConeModel {
            input,
            m,
            pullback,
            rc_lattice: rc_lattice(),
            different,
            different_class,
            pullback_class,
            curves: Vec::new(),
            indices: Vec::new(),
        };
        model.curves = model
            .m
            .entries
            .iter()
            .map(|(c, _)| curve_numbers(&model, c))
            .collect::<Result<_>>()?;
        model.indices = (1..=model.d())
            .map(|i| index_numbers(&model, i))
            .collect::<Result<_>>()?;
        Ok(model)
    }

    pub fn input(&self) -> &ConeInput {
        &self.input
    }

    pub fn d(&self) -> usize {
        self.input.d()
    }

    pub fn multiplicities(&self) -> &MultiplicityTable {
        &self.m
    }

    /// `ψ*A` on `S`.
    pub fn pullback(&self) -> &NamedDivisor {
        &self.pullback
    }

    fn source(&self) -> &crate::km_surface::LatticeSurface {
        self.input.ctx.psi.source()
    }

    fn m_of(&self, curve: &str) -> Result<u64> {
        self.m.get(curve).ok_or_else(|| Error::NotContracted(curve.to_string()))
    }

    /// `K_S + Σ (m_C - 1)/m_C C`.
    pub fn different(&self) -> &NamedDivisor {
        &self.different
    }

    /// `(K_S + Σ (m_C - 1)/m_C C) · curve`.
    fn different_dot(&self, curve: &str) -> Result<Rat> {
        let source = self.source();
        source
            .lattice
            .intersect(&self.different_class, source.curve_class(curve)?)
    }

    /// `ψ*A · curve`.
    fn pullback_dot(&self, curve: &str) -> Result<Rat> {
        let source = self.source();
        source
            .lattice
            .intersect(&self.pullback_class, source.curve_class(curve)?)
    }

    pub fn curve_ledgers(&self) -> &[CurveLedger] {
        &self.curves
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.d() {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: self.d(),
            });
        }
        Ok(())
    }
}

/// The numbers along `R_C`, derived on `R_C ≅ P¹ × P¹`.
///
/// `C^+` and `C^-` are disjoint sections, so both have the section class.
/// `(m_C S^±)|_{R_C} = C^±`, and adjunction for `K_X + S^+ + S^-` gives
/// `m_C K_X|_{R_C} + C^+ + C^- ≡ deg(M)·fibre` with
/// `deg M = m_C (K_S + (m_C - 1)/m_C C) · C`.
pub fn cone_curve_numbers(model: &ConeModel, curve: &str) -> Result<CurveLedger> {
    model.m_of(curve)?;
    model
        .curves
        .iter()
        .find(|l| l.curve == curve)
        .cloned()
        .ok_or_else(|| Error::NotContracted(curve.to_string()))
}

fn curve_numbers(model: &ConeModel, curve: &str) -> Result<CurveLedger> {
    let m = model.m_of(curve)?;
    let mi = m as i64;
    let mr = Rat::int(mi);
    let source = model.source();
    let c2 = source.curves_dot(curve, curve)?;

    let rc = &model.rc_lattice;
    let fibre = ClassVector::from_ints(&[1, 0]);
    let c_plus = ClassVector::from_ints(&[0, 1]);
    let c_minus = ClassVector::from_ints(&[0, 1]);
    let section_square = rc.square(&c_plus)?;
    let s_plus_dot_c_plus = &rc.intersect(&c_plus, &c_plus)? / &mr;
    let s_minus_dot_c_minus = &rc.intersect(&c_minus, &c_minus)? / &mr;
    let s_minus_dot_c_plus = &rc.intersect(&c_minus, &c_plus)? / &mr;

    let deg_m = &mr * &model.different_dot(curve)?;
    let m_kx = &(&fibre.scale(&deg_m) - &c_plus) - &c_minus;
    let kx_dot_c_plus = &rc.intersect(&m_kx, &c_plus)? / &mr;
    let kx_dot_c_minus = &rc.intersect(&m_kx, &c_minus)? / &mr;

    // f contracts C^+, and R_C · C^+ = (π*C / m) · C^+ = C²/m.
    let rc_dot_c_plus = &c2 / &mr;
    let crepant = -(&kx_dot_c_plus / &rc_dot_c_plus);

    let closed_kx = &(&(-&c2) - &Rat::int(2 * mi)) / &mr;
    let kx_dot_c_plus = expect_eq(format!("K_X . {curve}^+"), kx_dot_c_plus, closed_kx.clone())?;
    let kx_dot_c_minus = expect_eq(format!("K_X . {curve}^-"), kx_dot_c_minus, closed_kx)?;
    let closed_c = &(&(-&c2) - &Rat::int(2 * mi)) / &(-&c2);
    let crepant = expect_eq(format!("crepant coefficient of R_{curve}"), crepant, closed_c)?;

    Ok(CurveLedger {
        curve: curve.to_string(),
        self_intersection: c2,
        m,
        pullback_multiplicity: m,
        section_square_in_rc: section_square,
        s_plus_dot_c_plus,
        s_minus_dot_c_minus,
        s_minus_dot_c_plus,
        kx_dot_c_plus,
        kx_dot_c_minus,
        discrepancy_over_y: -&crepant,
        crepant_coefficient: crepant,
    })
}

/// `c_C` for every contracted curve.
pub fn crepant_pullback_fy(model: &ConeModel) -> Result<Vec<(String, Rat)>> {
    Ok(model
        .curves
        .iter()
        .map(|l| (l.curve.clone(), l.crepant_coefficient.clone()))
        .collect())
}

fn unit_fraction_sum(ms: &[u64]) -> Rat {
    ms.iter().map(|&m| Rat::new(m as i64 - 1, m as i64)).sum()
}

/// Numbers that depend on a single index `i`.
#[derive(Clone, Debug)]
struct IndexNumbers {
    psi_a_dot_e: Rat,
    kx_dot_e_plus: Rat,
    kx_dot_e_minus: Rat,
    exceptional_dot_e: Rat,
    ky_dot_f_e_plus: Rat,
    ky_dot_f_e_minus: Rat,
    /// Class of `ψ*E_i^T` on `S`.
    e_pullback: ClassVector,
}

fn index_numbers(model: &ConeModel, i: usize) -> Result<IndexNumbers> {
    let source = model.source();
    let psi = &model.input.ctx.psi;
    let e_i = NamedDivisor::curve(exc(i));
    let psi_a_dot_e_i = model.pullback_dot(&exc(i))?;

    // S^± restricts to ±ψ*A on S^± ≅ S, and S^∓ is disjoint from E_i^±.
    let s_plus_dot_e_plus_i = psi_a_dot_e_i.clone();
    let s_minus_dot_e_minus_i = -&psi_a_dot_e_i;

    let different_dot = model.different_dot(&exc(i))?;
    let kx_dot_e_plus_i = &different_dot - &s_plus_dot_e_plus_i;
    let kx_dot_e_minus_i = &different_dot - &s_minus_dot_e_minus_i;

    let ms = [
        model.m_of(gamma())?,
        model.m_of(&crate::km_surface::ell(i))?,
        model.m_of(&crate::km_surface::ell_prime(i))?,
    ];
    let closed_base = &unit_fraction_sum(&ms) - &Rat::one();
    let kx_dot_e_plus_i = expect_eq(format!("K_X . E_{i}^+"), kx_dot_e_plus_i, &closed_base - &psi_a_dot_e_i)?;
    let kx_dot_e_minus_i = expect_eq(
        format!("K_X . E_{i}^-"),
        kx_dot_e_minus_i,
        &closed_base + &psi_a_dot_e_i,
    )?;

    // R_C · E_i^± = (C · E_i)/m_C.
    let mut exceptional = Rat::zero();
    for ledger in &model.curves {
        let dot = source.curves_dot(&ledger.curve, &exc(i))?;
        exceptional += &(&(&ledger.crepant_coefficient * &dot) / &Rat::int(ledger.m as i64));
    }
    let gamma_sq = -Rat::int(model.input.ctx.gamma_neg_square());
    let m_gamma = Rat::int(ms[0] as i64);
    let printed_gamma = &(&(-&gamma_sq) - &(&Rat::int(2) * &m_gamma)) / &(&(-&gamma_sq) * &m_gamma);
    let printed_ell: Rat = ms[1..].iter().map(|&m| Rat::new(1 - m as i64, m as i64)).sum();
    let exceptional = expect_eq(
        format!("(Σ c_C R_C) . E_{i}"),
        exceptional,
        &printed_gamma + &printed_ell,
    )?;

    let ky_dot_f_e_plus_i = &kx_dot_e_plus_i + &exceptional;
    let ky_dot_f_e_minus_i = &kx_dot_e_minus_i + &exceptional;
    let gamma_only = &(&Rat::new(ms[0] as i64 - 1, ms[0] as i64) - &Rat::one()) + &printed_gamma;
    let ky_dot_f_e_plus_i = expect_eq(
        format!("K_Y . f(E_{i}^+)"),
        ky_dot_f_e_plus_i,
        &gamma_only - &psi_a_dot_e_i,
    )?;
    let ky_dot_f_e_minus_i = expect_eq(
        format!("K_Y . f(E_{i}^-)"),
        ky_dot_f_e_minus_i,
        &gamma_only + &psi_a_dot_e_i,
    )?;

    // f*E_i^Y = π*ψ*E_i^T.
    let e_pullback = source.class_of(&psi.pullback(&e_i)?)?;

    Ok(IndexNumbers {
        psi_a_dot_e: psi_a_dot_e_i,
        kx_dot_e_plus: kx_dot_e_plus_i,
        kx_dot_e_minus: kx_dot_e_minus_i,
        exceptional_dot_e: exceptional,
        ky_dot_f_e_plus: ky_dot_f_e_plus_i,
        ky_dot_f_e_minus: ky_dot_f_e_minus_i,
        e_pullback,
    })
}

pub fn section_numbers(model: &ConeModel, i: usize, j: usize) -> Result<SectionLedger> {
    model.check_index(i)?;
    model.check_index(j)?;
    let ni = &model.indices[i - 1];
    let nj = &model.indices[j - 1];
    let source = model.source();

    // π_*E_j^± = E_j.
    let ey = source.lattice.intersect(&ni.e_pullback, source.curve_class(&exc(j))?)?;
    let unit = Rat::new(1, model.input.ctx.gamma_neg_square());
    let ey = expect_eq(format!("E_{i}^Y . f(E_{j}^±)"), ey, unit)?;

    Ok(SectionLedger {
        i,
        j,
        psi_a_dot_e_j: nj.psi_a_dot_e.clone(),
        s_plus_dot_e_plus_j: nj.psi_a_dot_e.clone(),
        s_minus_dot_e_minus_j: -&nj.psi_a_dot_e,
        kx_dot_e_plus_i: ni.kx_dot_e_plus.clone(),
        kx_dot_e_minus_i: ni.kx_dot_e_minus.clone(),
        exceptional_dot_e_i: ni.exceptional_dot_e.clone(),
        ky_dot_f_e_plus_i: ni.ky_dot_f_e_plus.clone(),
        ky_dot_f_e_minus_i: ni.ky_dot_f_e_minus.clone(),
        ey_i_dot_f_e_plus_j: ey.clone(),
        ey_i_dot_f_e_minus_j: ey,
    })
}

/// `b` from `(K_Y + E_i^Y + b T^-) · f(E_i^-) = 0`, since `g` contracts
/// `T^- ⊃ f(E_i^-)`.
pub fn plt_coefficient_b(model: &ConeModel, i: usize) -> Result<PltCoefficient> {
    let s = section_numbers(model, i, i)?;
    let psi_a_dot_e_i = s.psi_a_dot_e_j.clone();
    if psi_a_dot_e_i.is_zero() {
        return Err(Error::DivisionByZero(format!("ψ*A . E_{i} = 0")));
    }
    let t_minus_dot = s.s_minus_dot_e_minus_j.clone();
    let b = -(&(&s.ky_dot_f_e_minus_i + &s.ey_i_dot_f_e_minus_j) / &t_minus_dot);
    let unit = Rat::new(1, model.input.ctx.gamma_neg_square());
    let b = expect_eq(
        format!("plt coefficient along T^- for E_{i}"),
        b,
        &(&psi_a_dot_e_i - &unit) / &psi_a_dot_e_i,
    )?;
    let surface_class = model.input.ctx.psi.classify_singularities(&NamedDivisor::zero())?.class;
    let plt = b < Rat::one() && surface_class.is_klt();
    Ok(PltCoefficient {
        i,
        psi_a_dot_e_i,
        b,
        surface_class,
        plt,
    })
}

/// Slice resolutions over every `R_C` with `m_C ≥ 2`.
pub fn resolution_ledger(model: &ConeModel) -> Result<Vec<ResolutionRecord>> {
    model
        .m
        .entries
        .iter()
        .filter(|(_, m)| *m >= 2)
        .map(|(c, m)| ResolutionRecord::for_curve(c, *m))
        .collect()
}

/// Both sides of the adjunction and normal-bundle identities on every
/// `E_i^±` and every `C^+`, one side from the ledger and the other from `S`.
pub fn adjunction_consistency(model: &ConeModel) -> Result<AdjunctionReport> {
    let mut checks = Vec::new();
    for i in 1..=model.d() {
        let s = section_numbers(model, i, i)?;
        let canonical_rhs = model.different_dot(&exc(i))?;
        let normal_rhs = model.pullback_dot(&exc(i))?;
        for (sign, kx, s_own, s_other_plus, s_other_minus) in [
            (
                "+",
                &s.kx_dot_e_plus_i,
                &s.s_plus_dot_e_plus_j,
                &s.s_plus_dot_e_plus_j,
                &Rat::zero(),
            ),
            (
                "-",
                &s.kx_dot_e_minus_i,
                &s.s_minus_dot_e_minus_j,
                &Rat::zero(),
                &s.s_minus_dot_e_minus_j,
            ),
        ] {
            let canonical_lhs = kx + s_own;
            let normal_lhs = s_other_plus - s_other_minus;
            let passed = canonical_lhs == canonical_rhs && normal_lhs == normal_rhs;
            checks.push(AdjunctionCheck {
                cycle: format!("E_{i}^{sign}"),
                canonical_lhs,
                canonical_rhs: canonical_rhs.clone(),
                normal_lhs,
                normal_rhs: normal_rhs.clone(),
                passed,
            });
        }
    }
    for l in &model.curves {
        let c = &l.curve;
        let canonical_lhs = &(&l.kx_dot_c_plus + &l.s_plus_dot_c_plus) + &l.s_minus_dot_c_plus;
        let canonical_rhs = model.different_dot(c)?;
        let normal_lhs = &l.s_plus_dot_c_plus - &l.s_minus_dot_c_plus;
        let normal_rhs = model.pullback_dot(c)?;
        let passed = canonical_lhs == canonical_rhs && normal_lhs == normal_rhs;
        checks.push(AdjunctionCheck {
            cycle: format!("{c}^+"),
            canonical_lhs,
            canonical_rhs,
            normal_lhs,
            normal_rhs,
            passed,
        });
    }
    Ok(AdjunctionReport { checks })
}

/// `ρ(X) = ρ(S) + 1`; `f` contracts the `R_C`; `g` contracts `T^-`.
pub fn picard_chain(model: &ConeModel) -> Result<PicardChain> {
    let psi = &model.input.ctx.psi;
    let rho_s = psi.source().rank();
    let rho_t = psi.picard_rank_after();
    let rho_x = rho_s + 1;
    let rho_y = rho_x - psi.contracted().len();
    let rho_z = rho_y - 1;
    if rho_y != rho_t + 1 || rho_z != rho_t {
        return Err(Error::InvalidParameters(format!(
            "inconsistent Picard chain ({rho_s}, {rho_t}, {rho_x}, {rho_y}, {rho_z})"
        )));
    }
    Ok(PicardChain {
        rho_s,
        rho_t,
        rho_x,
        rho_y,
        rho_z,
    })
}
