//! Picard lattices of iterated blow-ups of the plane, and the Keel–McKernan
//! surfaces built from a strange conic.
//!
//! The geometry of the characteristic two construction only enters through
//! which named curves pass through each blown-up point; the lattice itself is
//! the orthogonal extension `<1> ⊕ <-1>^k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qlattice::{ClassVector, CurveRegistry, IntersectionLattice, NamedDivisor, Rat};

/// A smooth projective surface described by its intersection lattice and a
/// registry of named curves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSurface {
    pub lattice: IntersectionLattice,
    pub registry: CurveRegistry,
}

impl LatticeSurface {
    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn class_of(&self, d: &NamedDivisor) -> Result<ClassVector> {
        self.registry.class_of(self.rank(), d)
    }

    pub fn curve_class(&self, name: &str) -> Result<&ClassVector> {
        self.registry.class(name)
    }

    pub fn intersect(&self, d1: &NamedDivisor, d2: &NamedDivisor) -> Result<Rat> {
        self.lattice.intersect(&self.class_of(d1)?, &self.class_of(d2)?)
    }

    pub fn curves_dot(&self, a: &str, b: &str) -> Result<Rat> {
        self.lattice.intersect(self.registry.class(a)?, self.registry.class(b)?)
    }

    /// `K · D` for a named divisor.
    pub fn canonical_dot(&self, d: &NamedDivisor) -> Result<Rat> {
        self.lattice.intersect(self.lattice.canonical(), &self.class_of(d)?)
    }
}

/// One blow-up of a point: a new exceptional basis element, the name under
/// which the exceptional curve is registered (if any), and the registered
/// curves whose current proper transforms pass through the centre.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupStep {
    pub exceptional: String,
    pub curve_name: Option<String>,
    pub through: Vec<(String, i64)>,
}

/// A sequence of point blow-ups starting from `P^2` with named plane curves.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupPlan {
    /// Plane curves as `(name, degree)`.
    pub plane_curves: Vec<(String, i64)>,
    pub steps: Vec<BlowupStep>,
}

impl BlowupPlan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn plane_curve(mut self, name: impl Into<String>, degree: i64) -> Self {
        self.plane_curves.push((name.into(), degree));
        self
    }

    pub fn blow_up<S: Into<String>>(
        mut self,
        exceptional: impl Into<String>,
        curve_name: Option<&str>,
        through: impl IntoIterator<Item = (S, i64)>,
    ) -> Self {
        self.steps.push(BlowupStep {
            exceptional: exceptional.into(),
            curve_name: curve_name.map(str::to_string),
            through: through.into_iter().map(|(n, m)| (n.into(), m)).collect(),
        });
        self
    }

    /// Replays the plan. Each blow-up appends a basis element `e` with
    /// `e² = -1`, adds `e` to the canonical class and subtracts `m·e` from
    /// every curve passing through the centre with multiplicity `m`.
    pub fn replay(&self) -> Result<LatticeSurface> {
        let rank = 1 + self.steps.len();
        let mut names = vec!["H".to_string()];
        let mut curves: Vec<(String, Vec<i64>)> = self
            .plane_curves
            .iter()
            .map(|(n, deg)| {
                let mut v = vec![0; rank];
                v[0] = *deg;
                (n.clone(), v)
            })
            .collect();
        let mut canonical = vec![0; rank];
        canonical[0] = -3;
        for (k, step) in self.steps.iter().enumerate() {
            let idx = k + 1;
            if names.contains(&step.exceptional) {
                return Err(Error::InvalidParameters(format!(
                    "duplicate exceptional basis name {}",
                    step.exceptional
                )));
            }
            names.push(step.exceptional.clone());
            canonical[idx] = 1;
            for (curve, mult) in &step.through {
                if *mult < 0 {
                    return Err(Error::InvalidParameters(format!("negative multiplicity for {curve}")));
                }
                let entry = curves
                    .iter_mut()
                    .find(|(n, _)| n == curve)
                    .ok_or_else(|| Error::UnknownCurve(curve.clone()))?;
                entry.1[idx] -= mult;
            }
            if let Some(name) = &step.curve_name {
                let mut v = vec![0; rank];
                v[idx] = 1;
                curves.push((name.clone(), v));
            }
        }
        let mut squares = vec![-1; rank];
        squares[0] = 1;
        let lattice = IntersectionLattice::diagonal(names, &squares, ClassVector::from_ints(&canonical))?;
        let mut registry = CurveRegistry::new();
        for (name, v) in curves {
            registry.insert(name, ClassVector::from_ints(&v), true);
        }
        Ok(LatticeSurface { lattice, registry })
    }
}

pub fn gamma() -> &'static str {
    "Gamma"
}

pub fn fibre() -> &'static str {
    "F"
}

pub fn ell(i: usize) -> String {
    format!("l_{i}")
}

pub fn ell_prime(i: usize) -> String {
    format!("lp_{i}")
}

pub fn exc(i: usize) -> String {
    format!("E_{i}")
}

/// The blow-up plan `P^2 → S_1 → S_2 → S` for a given `d`: blow up the
/// strange point `Q`, then each `P_i` on the conic, then the point `Q'_i`
/// where the conic, the fibre through `P_i` and the first exceptional curve
/// over `P_i` still meet.
pub fn km_blowup_plan(d: usize) -> BlowupPlan {
    let mut plan = BlowupPlan::new().plane_curve(gamma(), 2);
    for i in 1..=d {
        plan = plan.plane_curve(ell(i), 1);
    }
    plan = plan.plane_curve(fibre(), 1);
    let through_q: Vec<(String, i64)> = (1..=d)
        .map(|i| (ell(i), 1))
        .chain(std::iter::once((fibre().to_string(), 1)))
        .collect();
    plan = plan.blow_up("e0", None, through_q);
    for i in 1..=d {
        plan = plan
            .blow_up(
                format!("e_{i}_1"),
                Some(&ell_prime(i)),
                [(gamma().to_string(), 1), (ell(i), 1)],
            )
            .blow_up(
                format!("e_{i}_2"),
                Some(&exc(i)),
                [(gamma().to_string(), 1), (ell(i), 1), (ell_prime(i), 1)],
            );
    }
    plan
}

/// The surface `S` of the construction with its named curves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KmSurface {
    pub d: usize,
    pub surface: LatticeSurface,
}

pub fn build_km_surface(d: usize) -> Result<KmSurface> {
    if d < 3 {
        return Err(Error::InvalidParameters(format!(
            "d = {d}: the construction needs d >= 3 so that Gamma^2 < 0"
        )));
    }
    let surface = km_blowup_plan(d).replay()?;
    Ok(KmSurface { d, surface })
}

impl KmSurface {
    pub fn lattice(&self) -> &IntersectionLattice {
        &self.surface.lattice
    }

    pub fn registry(&self) -> &CurveRegistry {
        &self.surface.registry
    }

    pub fn picard_rank(&self) -> usize {
        self.surface.rank()
    }

    /// `2d - 4 = -Γ²`.
    pub fn gamma_neg_square(&self) -> i64 {
        2 * self.d as i64 - 4
    }

    /// The curves `Γ, ℓ_1, ℓ'_1, …, ℓ_d, ℓ'_d` contracted to `T`.
    pub fn contracted_curves(&self) -> Vec<String> {
        let mut out = vec![gamma().to_string()];
        for i in 1..=self.d {
            out.push(ell(i));
            out.push(ell_prime(i));
        }
        out
    }

    /// The anticanonical divisor `Γ + F`.
    pub fn anticanonical_divisor(&self) -> NamedDivisor {
        NamedDivisor::curve(gamma()).plus(&NamedDivisor::curve(fibre()))
    }

    /// Registry rows `(name, class, self-intersection)` in construction order.
    pub fn registry_table(&self) -> Result<Vec<RegistryRow>> {
        self.registry()
            .entries()
            .iter()
            .map(|e| {
                Ok(RegistryRow {
                    name: e.name.to_string(),
                    class: e.class.clone(),
                    self_intersection: self.lattice().square(&e.class)?,
                })
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegistryRow {
    pub name: String,
    pub class: ClassVector,
    pub self_intersection: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SanityItem {
    pub check: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SanityReport {
    pub d: usize,
    pub items: Vec<SanityItem>,
}

impl SanityReport {
    pub fn all_passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }
}

pub fn km_sanity(s: &KmSurface) -> Result<SanityReport> {
    let mut items = Vec::new();
    let mut push = |check: String, passed: bool| items.push(SanityItem { check, passed });
    let surf = &s.surface;
    let one = Rat::one();
    let f_class = surf.curve_class(fibre())?.clone();

    for i in 1..=s.d {
        let fibre_i = NamedDivisor::term(Rat::int(2), exc(i))
            .plus(&NamedDivisor::curve(ell(i)))
            .plus(&NamedDivisor::curve(ell_prime(i)));
        push(
            format!("F = 2E_{i} + l_{i} + lp_{i}"),
            surf.class_of(&fibre_i)? == f_class,
        );
    }

    let contracted = s.contracted_curves();
    let mut orthogonal = true;
    for (a, ca) in contracted.iter().enumerate() {
        for cb in &contracted[a + 1..] {
            orthogonal &= surf.curves_dot(ca, cb)?.is_zero();
        }
    }
    push(
        format!("the {} contracted curves are pairwise orthogonal", contracted.len()),
        orthogonal,
    );

    for i in 1..=s.d {
        let e = exc(i);
        let ok = surf.curves_dot(&e, gamma())? == one
            && surf.curves_dot(&e, &ell(i))? == one
            && surf.curves_dot(&e, &ell_prime(i))? == one;
        push(format!("E_{i}.Gamma = E_{i}.l_{i} = E_{i}.lp_{i} = 1"), ok);
    }

    let minus_k = -s.lattice().canonical();
    push(
        "-K_S = Gamma + F".to_string(),
        surf.class_of(&s.anticanonical_divisor())? == minus_k,
    );
    push(
        "Gamma.F = 2".to_string(),
        surf.curves_dot(gamma(), fibre())? == Rat::int(2),
    );
    Ok(SanityReport { d: s.d, items })
}
