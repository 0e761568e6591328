//! Birational contractions of negative definite curve configurations on a
//! lattice surface.
//!
//! Divisors on the target are written through the names of their proper
//! transforms on the source, so `E_1` read on the target means `ψ_*E_1`.
//! Pullback is the numerical one: the unique extension by contracted curves
//! that is orthogonal to every contracted curve.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::km_surface::{fibre, KmSurface, LatticeSurface};
use crate::qlattice::{linalg, ClassVector, NamedDivisor, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contraction {
    source: LatticeSurface,
    contracted: Vec<String>,
    contracted_classes: Vec<ClassVector>,
    /// Inverse of the Gram block of the contracted curves.
    block_inverse: Vec<Vec<Rat>>,
    /// An anticanonical divisor on the target when the target is known to
    /// have Picard rank one with `-K` ample.
    rank_one_anticanonical: Option<NamedDivisor>,
}

/// `K_source = ψ*K_target + Σ a_C C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyTable {
    pub entries: Vec<(String, Rat)>,
}

impl DiscrepancyTable {
    pub fn get(&self, curve: &str) -> Option<&Rat> {
        self.entries.iter().find(|(c, _)| c == curve).map(|(_, a)| a)
    }

    pub fn min(&self) -> Option<&Rat> {
        self.entries.iter().map(|(_, a)| a).min()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SingularityClass {
    Terminal,
    Canonical,
    Klt,
    Plt,
    Lc,
    NotLc,
}

impl SingularityClass {
    /// Terminal and canonical pairs with zero round-down are klt as well.
    pub fn is_klt(self) -> bool {
        matches!(self, Self::Terminal | Self::Canonical | Self::Klt)
    }

    pub fn is_plt(self) -> bool {
        self.is_klt() || self == Self::Plt
    }

    pub fn is_lc(self) -> bool {
        self != Self::NotLc
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularityReport {
    pub class: SingularityClass,
    pub min_discrepancy: Rat,
    pub discrepancies: DiscrepancyTable,
    pub criterion: String,
}

pub const MINIMAL_RESOLUTION_CRITERION: &str = "minimal-resolution criterion";

impl Contraction {
    /// Contract the named curves of `source`. The curves must be registered,
    /// have pairwise distinct classes, and span a negative definite block.
    pub fn new(source: LatticeSurface, contracted: Vec<String>) -> Result<Self> {
        let mut classes = Vec::with_capacity(contracted.len());
        for name in &contracted {
            let class = source.curve_class(name)?.clone();
            if classes.contains(&class) {
                return Err(Error::InvalidParameters(format!(
                    "contracted curve {name} repeats a class"
                )));
            }
            classes.push(class);
        }
        let block_inverse = if classes.is_empty() {
            Vec::new()
        } else {
            if !source.lattice.is_negative_definite(&classes)? {
                return Err(Error::InvalidParameters(
                    "contracted curves are not negative definite".into(),
                ));
            }
            let gram = source.lattice.restricted_gram(&classes)?;
            invert(&gram)?
        };
        Ok(Contraction {
            source,
            contracted,
            contracted_classes: classes,
            block_inverse,
            rank_one_anticanonical: None,
        })
    }

    /// The contraction `ψ: S → T` of `Γ, ℓ_i, ℓ'_i`. The target has Picard
    /// rank one and `-K_T = ψ_*(Γ + F) = F`.
    pub fn km(s: &KmSurface) -> Result<Self> {
        let mut ctr = Self::new(s.surface.clone(), s.contracted_curves())?;
        if ctr.picard_rank_after() != 1 {
            return Err(Error::InvalidParameters("target Picard rank is not one".into()));
        }
        let minus_k = ctr.pushforward(&s.anticanonical_divisor());
        debug_assert_eq!(minus_k, NamedDivisor::curve(fibre()));
        ctr.rank_one_anticanonical = Some(minus_k);
        if !ctr
            .target_intersect(
                ctr.rank_one_anticanonical.as_ref().unwrap(),
                ctr.rank_one_anticanonical.as_ref().unwrap(),
            )?
            .is_positive()
        {
            return Err(Error::InvalidParameters("-K_T is not big".into()));
        }
        Ok(ctr)
    }

    pub fn source(&self) -> &LatticeSurface {
        &self.source
    }

    pub fn contracted(&self) -> &[String] {
        &self.contracted
    }

    pub fn is_contracted(&self, name: &str) -> bool {
        self.contracted.iter().any(|c| c == name)
    }

    pub fn is_rank_one_fano(&self) -> bool {
        self.rank_one_anticanonical.is_some()
    }

    /// Coefficients `x` such that `v + Σ x_C C` is orthogonal to every
    /// contracted curve.
    fn orthogonal_correction(&self, v: &ClassVector) -> Result<Vec<Rat>> {
        let lattice = &self.source.lattice;
        let rhs: Vec<Rat> = self
            .contracted_classes
            .iter()
            .map(|c| lattice.intersect(v, c))
            .collect::<Result<_>>()?;
        Ok(self
            .block_inverse
            .iter()
            .map(|row| {
                -row.iter()
                    .zip(&rhs)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum::<Rat>()
            })
            .collect())
    }

    fn check_target_divisor(&self, d: &NamedDivisor) -> Result<()> {
        for (name, _) in d.terms() {
            if self.is_contracted(name.as_str()) {
                return Err(Error::ContractedCurve(name.to_string()));
            }
            if !self.source.registry.contains(name.as_str()) {
                return Err(Error::UnknownCurve(name.to_string()));
            }
        }
        Ok(())
    }

    pub fn pullback(&self, d: &NamedDivisor) -> Result<NamedDivisor> {
        self.check_target_divisor(d)?;
        let class = self.source.class_of(d)?;
        let x = self.orthogonal_correction(&class)?;
        let mut out = d.clone();
        for (name, coeff) in self.contracted.iter().zip(x) {
            out.add_term(name.as_str(), coeff);
        }
        Ok(out)
    }

    /// Drop the contracted curves.
    pub fn pushforward(&self, d: &NamedDivisor) -> NamedDivisor {
        d.restrict(|n| !self.is_contracted(n))
    }

    pub fn relative_canonical(&self) -> Result<DiscrepancyTable> {
        let x = self.orthogonal_correction(self.source.lattice.canonical())?;
        Ok(DiscrepancyTable {
            entries: self.contracted.iter().cloned().zip(x.into_iter().map(|v| -v)).collect(),
        })
    }

    /// Classify the pair `(target, boundary)` from the discrepancies of the
    /// curves contracted by this map.
    pub fn classify_singularities(&self, boundary: &NamedDivisor) -> Result<SingularityReport> {
        for (name, c) in boundary.terms() {
            if c.is_negative() || *c > Rat::one() {
                return Err(Error::BoundaryOutOfRange {
                    curve: name.to_string(),
                    coeff: c.clone(),
                });
            }
        }
        let pulled = self.pullback(boundary)?;
        let base = self.relative_canonical()?;
        let entries: Vec<(String, Rat)> = base
            .entries
            .iter()
            .map(|(c, a)| (c.clone(), a - &pulled.coeff(c)))
            .collect();
        let table = DiscrepancyTable { entries };
        let min = table.min().cloned().unwrap_or_else(Rat::one);
        let floor_nonzero = boundary.terms().any(|(_, c)| *c == Rat::one());
        let minus_one = Rat::int(-1);
        let class = if min < minus_one {
            SingularityClass::NotLc
        } else if min == minus_one {
            SingularityClass::Lc
        } else if floor_nonzero {
            SingularityClass::Plt
        } else if min.is_positive() {
            SingularityClass::Terminal
        } else if !min.is_negative() {
            SingularityClass::Canonical
        } else {
            SingularityClass::Klt
        };
        Ok(SingularityReport {
            class,
            min_discrepancy: min,
            discrepancies: table,
            criterion: MINIMAL_RESOLUTION_CRITERION.to_string(),
        })
    }

    /// `ψ*D1 · ψ*D2`.
    pub fn target_intersect(&self, d1: &NamedDivisor, d2: &NamedDivisor) -> Result<Rat> {
        let p1 = self.pullback(d1)?;
        let p2 = self.pullback(d2)?;
        self.source.intersect(&p1, &p2)
    }

    /// `-K_T` as a divisor on the target.
    pub fn target_anticanonical(&self) -> Result<&NamedDivisor> {
        self.rank_one_anticanonical.as_ref().ok_or(Error::NotRankOneFano)
    }

    pub fn target_canonical(&self) -> Result<NamedDivisor> {
        Ok(self.target_anticanonical()?.scale(&Rat::int(-1)))
    }

    /// `D · (-K_T)`.
    pub fn target_degree(&self, d: &NamedDivisor) -> Result<Rat> {
        let minus_k = self.target_anticanonical()?;
        self.target_intersect(d, minus_k)
    }

    /// Ampleness on a Picard rank one target with ample `-K`.
    pub fn is_ample_rho1(&self, d: &NamedDivisor) -> Result<bool> {
        Ok(self.target_degree(d)?.is_positive())
    }

    /// Numerically trivial on the target: the pullback class vanishes.
    pub fn is_numerically_trivial(&self, d: &NamedDivisor) -> Result<bool> {
        Ok(self.source.class_of(&self.pullback(d)?)?.is_zero())
    }

    pub fn picard_rank_after(&self) -> usize {
        self.source.rank() - self.contracted.len()
    }
}

fn invert(m: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>> {
    linalg::inverse(&m.to_vec()).ok_or(Error::SingularBlock)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::km_surface::{build_km_surface, BlowupPlan};

    fn psi(d: usize) -> Contraction {
        Contraction::km(&build_km_surface(d).unwrap()).unwrap()
    }

    #[test]
    fn pullback_rejects_contracted_curves() {
        let c = psi(5);
        let err = c.pullback(&NamedDivisor::curve("Gamma")).unwrap_err();
        assert_eq!(err, Error::ContractedCurve("Gamma".into()));
    }

    #[test]
    fn pullback_of_zero() {
        assert!(psi(4).pullback(&NamedDivisor::zero()).unwrap().is_zero());
    }

    #[test]
    fn pushforward_of_gamma_is_zero() {
        assert!(psi(5).pushforward(&NamedDivisor::curve("Gamma")).is_zero());
    }

    #[test]
    fn blow_down_of_minus_one_curve_is_terminal() {
        let s = BlowupPlan::new()
            .plane_curve("L", 1)
            .blow_up("e", Some("E"), [("L", 1)])
            .replay()
            .unwrap();
        let c = Contraction::new(s, vec!["E".into()]).unwrap();
        let report = c.classify_singularities(&NamedDivisor::zero()).unwrap();
        assert_eq!(report.class, SingularityClass::Terminal);
        assert_eq!(report.min_discrepancy, Rat::one());
        assert_eq!(c.picard_rank_after(), 1);
        assert!(!c.is_rank_one_fano());
        assert_eq!(
            c.is_ample_rho1(&NamedDivisor::curve("L")).unwrap_err(),
            Error::NotRankOneFano
        );
    }

    #[test]
    fn contraction_of_nothing_keeps_rank() {
        let s = build_km_surface(3).unwrap();
        let c = Contraction::new(s.surface.clone(), vec![]).unwrap();
        assert_eq!(c.picard_rank_after(), s.picard_rank());
        let d = NamedDivisor::curve("E_1");
        assert_eq!(c.pullback(&d).unwrap(), d);
    }

    #[test]
    fn non_negative_definite_is_refused() {
        let s = build_km_surface(3).unwrap();
        assert!(Contraction::new(s.surface, vec!["F".into()]).is_err());
    }

    #[test]
    fn boundary_range_checked() {
        let c = psi(5);
        let b = NamedDivisor::term(Rat::new(3, 2), "E_5");
        assert!(matches!(
            c.classify_singularities(&b),
            Err(Error::BoundaryOutOfRange { .. })
        ));
    }
}
