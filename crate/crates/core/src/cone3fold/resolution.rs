//! Resolutions of the two transversal surface singularities of `X` along
//! `C^+` and `C^-`.
//!
//! Along `C^±` the threefold is locally a product of a smooth curve with a
//! cyclic quotient surface singularity: `1/m(1,1)` along `C^+` and
//! `1/m(1,m-1)` along `C^-`. The minimal resolution of `1/m(1,a)` is a chain
//! of rational curves whose negated self-intersections are the
//! Hirzebruch–Jung continued fraction of `m/a`. The two torus-invariant axes
//! meet the two ends of the chain. Everything below is solved on that chain.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qlattice::{linalg, Rat};

/// Hirzebruch–Jung continued fraction `m/a = b_1 - 1/(b_2 - ...)`.
pub fn hirzebruch_jung(m: u64, a: u64) -> Result<Vec<u64>> {
    if m < 2 || a == 0 || a >= m || num_gcd(m, a) != 1 {
        return Err(Error::InvalidParameters(format!(
            "1/{m}({a}) is not a cyclic quotient singularity type"
        )));
    }
    let (mut p, mut q) = (m, a);
    let mut out = Vec::new();
    while q != 0 {
        let b = p.div_ceil(q);
        out.push(b);
        (p, q) = (q, b * q - p);
    }
    Ok(out)
}

fn num_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The exceptional chain of a cyclic quotient singularity with the pullback
/// coefficients of the two axes and of the canonical class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceResolution {
    pub m: u64,
    pub a: u64,
    pub self_intersections: Vec<i64>,
    /// `μ*D_first = D̃_first + Σ c_k F_k` for the axis meeting `F_1`.
    pub first_axis: Vec<Rat>,
    /// Same for the axis meeting the last curve.
    pub last_axis: Vec<Rat>,
    /// `K + Σ c_k F_k = μ*K`.
    pub canonical: Vec<Rat>,
}

impl SliceResolution {
    pub fn new(m: u64, a: u64) -> Result<Self> {
        let b = hirzebruch_jung(m, a)?;
        let r = b.len();
        let gram: Vec<Vec<Rat>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        if i == j {
                            Rat::int(-(b[i] as i64))
                        } else if i.abs_diff(j) == 1 {
                            Rat::one()
                        } else {
                            Rat::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        // (D̃ + Σ c_k F_k) · F_j = 0 with D̃ · F_j the indicator of the end.
        let end = |k: usize| -> Vec<Rat> {
            (0..r)
                .map(|j| if j == k { Rat::int(-1) } else { Rat::zero() })
                .collect()
        };
        let first_axis = linalg::solve(&gram, &end(0)).ok_or(Error::SingularBlock)?;
        let last_axis = linalg::solve(&gram, &end(r - 1)).ok_or(Error::SingularBlock)?;
        // Adjunction on each smooth rational F_j: K · F_j = b_j - 2.
        let k_dot: Vec<Rat> = b.iter().map(|&bj| Rat::int(2 - bj as i64)).collect();
        let canonical = linalg::solve(&gram, &k_dot).ok_or(Error::SingularBlock)?;
        Ok(SliceResolution {
            m,
            a,
            self_intersections: b.iter().map(|&x| -(x as i64)).collect(),
            first_axis,
            last_axis,
            canonical,
        })
    }

    pub fn len(&self) -> usize {
        self.self_intersections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.self_intersections.is_empty()
    }
}

/// The part of the resolution `μ: X̃ → X` lying over one `R_C` with
/// `m_C ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionRecord {
    pub curve: String,
    pub m: u64,
    /// `c` in `K_X̃ + c F_C^+ = μ*K_X` near `C^+`.
    pub f_plus_coefficient: Rat,
    /// The discrepancy `a(F_C^+, X) = -c`.
    pub f_plus_discrepancy: Rat,
    /// Coefficient of `F_C^+` in `μ*S^+`.
    pub s_plus_f_plus: Rat,
    /// Coefficients of `F_1^-, ..., F_{m-1}^-` in `μ*S^-`.
    pub s_minus_chain: Vec<Rat>,
    /// Coefficient of `F_C^+` in `μ*R_C`.
    pub r_c_f_plus: Rat,
    /// Coefficients of `F_1^-, ..., F_{m-1}^-` in `μ*R_C`.
    pub r_c_chain: Vec<Rat>,
    /// Coefficients of `F_k^-` in `μ*K_X - K_X̃`; all zero.
    pub f_minus_canonical: Vec<Rat>,
    pub dual_graph: String,
}

impl ResolutionRecord {
    /// Solve both slices for one curve and compare with the closed forms.
    pub fn for_curve(curve: &str, m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameters(format!(
                "{curve} has m = {m}; nothing to resolve"
            )));
        }
        let plus = SliceResolution::new(m, 1)?;
        let minus = SliceResolution::new(m, m - 1)?;
        let mi = m as i64;

        let record = ResolutionRecord {
            curve: curve.to_string(),
            m,
            f_plus_coefficient: plus.canonical[0].clone(),
            f_plus_discrepancy: -plus.canonical[0].clone(),
            s_plus_f_plus: plus.first_axis[0].clone(),
            s_minus_chain: minus.first_axis.clone(),
            r_c_f_plus: plus.last_axis[0].clone(),
            r_c_chain: minus.last_axis.clone(),
            f_minus_canonical: minus.canonical.clone(),
            dual_graph: dual_graph(curve, m),
        };

        let check = |what: &str, computed: &Rat, expected: Rat| -> Result<()> {
            if *computed != expected {
                return Err(Error::ClosedFormMismatch {
                    what: format!("{what} over {curve}"),
                    computed: computed.to_string(),
                    expected: expected.to_string(),
                });
            }
            Ok(())
        };
        check(
            "F^+ canonical coefficient",
            &record.f_plus_coefficient,
            Rat::new(mi - 2, mi),
        )?;
        check("F^+ in pullback of S^+", &record.s_plus_f_plus, Rat::new(1, mi))?;
        check("F^+ in pullback of R_C", &record.r_c_f_plus, Rat::new(1, mi))?;
        for k in 1..mi {
            let idx = (k - 1) as usize;
            check(
                "F^- in pullback of S^-",
                &record.s_minus_chain[idx],
                Rat::new(mi - k, mi),
            )?;
            check("F^- in pullback of R_C", &record.r_c_chain[idx], Rat::new(k, mi))?;
            check("F^- canonical coefficient", &record.f_minus_canonical[idx], Rat::zero())?;
        }
        Ok(record)
    }
}

/// `S̃^- - F_1^- - ... - F_{m-1}^- - R̃_C`.
pub fn dual_graph(curve: &str, m: u64) -> String {
    let mut nodes = vec!["S~^-".to_string()];
    nodes.extend((1..m).map(|k| format!("F_{k}^-")));
    nodes.push(format!("R~_{curve}"));
    nodes.join(" - ")
}
