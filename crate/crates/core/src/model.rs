//! Closed-form two-term exchange model.
//!
//! Couplings are split into a ferromagnetic part `a1 >= 0` and an
//! antiferromagnetic part `a2 <= 0`. The system state is the normalized
//! superposition `(a1 |FM> + |a2| |AFM>) / sqrt(a1^2 + a2^2)` of the fully
//! parallel and the fully antiparallel configurations.
//!
//! Energies are in "paper units": an aligned nearest-neighbour pair
//! contributes `-2 * coupling * 1/2` per ordered pair, so the fully parallel
//! state has energy `-N z a1`. See [`crate::ed::convention_rescale`] for the
//! conversion to spin-1/2 quantum units.

use serde::Serialize;

use crate::error::{Error, Result};

/// Weights of the superposition must be normalized to this accuracy.
pub const NORM_TOL: f64 = 1e-12;

/// Default relative tolerance for deciding `a1 == |a2|`.
pub const DEFAULT_SG_TOL: f64 = 1e-9;

/// Relative tolerance used when comparing the published energy forms.
pub const FORM_CONSISTENCY_TOL: f64 = 1e-9;

/// Ferromagnetic (`a1 >= 0`) and antiferromagnetic (`a2 <= 0`) exchange terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Couplings {
    a1: f64,
    a2: f64,
}

impl Couplings {
    pub fn new(a1: f64, a2: f64) -> Result<Self> {
        if !a1.is_finite() || !a2.is_finite() || a1 < 0.0 || a2 > 0.0 {
            return Err(Error::InvalidCouplings { a1, a2 });
        }
        // normalize -0.0 so that serialized output is stable
        Ok(Self {
            a1: a1 + 0.0,
            a2: a2 + 0.0,
        })
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }

    pub fn abs_a2(&self) -> f64 {
        self.a2.abs()
    }

    /// Combined exchange integral `a1 + a2`.
    pub fn combined(&self) -> f64 {
        self.a1 + self.a2
    }

    pub fn is_degenerate(&self) -> bool {
        self.a1 == 0.0 && self.a2 == 0.0
    }

    fn require_nondegenerate(&self) -> Result<()> {
        if self.is_degenerate() {
            Err(Error::DegenerateCouplings)
        } else {
            Ok(())
        }
    }
}

/// Spin count `N` and coordination number `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SystemSize {
    n: u64,
    z: u64,
}

impl SystemSize {
    pub fn new(n: u64, z: u64) -> Result<Self> {
        if n == 0 || z == 0 {
            return Err(Error::InvalidInput(format!(
                "system size requires n >= 1 and z >= 1 (got n = {n}, z = {z})"
            )));
        }
        Ok(Self { n, z })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn z(&self) -> u64 {
        self.z
    }

    /// `N * z` as a float, the prefactor of every energy expression.
    pub fn nz(&self) -> f64 {
        self.n as f64 * self.z as f64
    }
}

/// Coefficients of the superposition on the parallel (`w1`) and
/// antiparallel (`w2`) basis states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuperpositionWeights {
    pub w1: f64,
    pub w2: f64,
}

impl SuperpositionWeights {
    pub fn new(w1: f64, w2: f64) -> Result<Self> {
        if !(w1 >= 0.0 && w2 >= 0.0) || ((w1 * w1 + w2 * w2) - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidInput(format!(
                "superposition weights must be non-negative and normalized (got {w1}, {w2})"
            )));
        }
        Ok(Self { w1, w2 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairProbabilities {
    pub p_parallel: f64,
    pub p_antiparallel: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BranchSign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaBranch {
    pub cos_alpha: f64,
    pub sin_alpha: f64,
    pub branch_sign: BranchSign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PhaseLabel {
    #[serde(rename = "FM")]
    Ferro,
    #[serde(rename = "AFM")]
    Antiferro,
    #[serde(rename = "SG")]
    SpinGlass,
    #[serde(rename = "FM_SG")]
    FerroSpinGlass,
    #[serde(rename = "AFM_SG")]
    AntiferroSpinGlass,
    #[serde(rename = "NONE")]
    None,
}

impl PhaseLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            PhaseLabel::Ferro => "FM",
            PhaseLabel::Antiferro => "AFM",
            PhaseLabel::SpinGlass => "SG",
            PhaseLabel::FerroSpinGlass => "FM_SG",
            PhaseLabel::AntiferroSpinGlass => "AFM_SG",
            PhaseLabel::None => "NONE",
        }
    }
}

impl std::fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which ordered basis state carries the pure (non-glass) component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PureBasis {
    #[serde(rename = "FM")]
    Ferro,
    #[serde(rename = "AFM")]
    Antiferro,
}

/// `|X> = pure_coeff |pure> + glass_coeff (|FM> + |AFM>)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StateDecomposition {
    pub pure_basis: PureBasis,
    pub pure_coeff: f64,
    pub glass_coeff: f64,
}

impl StateDecomposition {
    /// Collapse back onto the `{|FM>, |AFM>}` basis as `(w1, w2)`.
    pub fn recombine(&self) -> (f64, f64) {
        match self.pure_basis {
            PureBasis::Ferro => (self.pure_coeff + self.glass_coeff, self.glass_coeff),
            PureBasis::Antiferro => (self.glass_coeff, self.pure_coeff + self.glass_coeff),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyReport {
    /// Energy from the step-by-step eigenvalue derivation.
    pub e_competition: f64,
    /// `-N z |a1 + a2|`, the single-coupling Hamiltonian.
    pub e_conventional: f64,
    /// The rewritten closed form, with the missing `a1` factor restored.
    pub e_abstract_variant: f64,
    pub consistent: bool,
}

pub fn superposition_weights(c: &Couplings) -> Result<SuperpositionWeights> {
    c.require_nondegenerate()?;
    let norm = c.a1.hypot(c.a2);
    Ok(SuperpositionWeights {
        w1: c.a1 / norm,
        w2: c.abs_a2() / norm,
    })
}

pub fn pair_probabilities(w: &SuperpositionWeights) -> PairProbabilities {
    PairProbabilities {
        p_parallel: w.w1 * w.w1,
        p_antiparallel: w.w2 * w.w2,
    }
}

/// `k = (a1 - |a2|) / (a1 + |a2|)`, always in `[-1, 1]`.
pub fn k_factor(c: &Couplings) -> Result<f64> {
    c.require_nondegenerate()?;
    let b = c.abs_a2();
    Ok((c.a1 - b) / (c.a1 + b))
}

/// Both solutions of `cos a - sin a = k` on the unit circle.
///
/// No branch is preferred; callers must not depend on the ordering beyond
/// `[Plus, Minus]`.
pub fn alpha_branches(k: f64) -> Result<[AlphaBranch; 2]> {
    if !(k.abs() <= 1.0) {
        return Err(Error::Domain {
            what: "alpha_branches (|k| <= 1)",
            value: k,
        });
    }
    let root = 0.5 * (2.0 - k * k).sqrt();
    let half = 0.5 * k;
    Ok([
        AlphaBranch {
            cos_alpha: half + root,
            sin_alpha: root - half,
            branch_sign: BranchSign::Plus,
        },
        AlphaBranch {
            cos_alpha: half - root,
            sin_alpha: -root - half,
            branch_sign: BranchSign::Minus,
        },
    ])
}

/// Canonical energy eigenvalue `-N z (a1^2 + a2^2) / (a1 + |a2|)`.
pub fn energy_competition(c: &Couplings, s: &SystemSize) -> Result<f64> {
    c.require_nondegenerate()?;
    let b = c.abs_a2();
    Ok(-s.nz() * ((c.a1 * c.a1 + b * b) / (c.a1 + b)))
}

/// Like [`energy_competition`] but maps `a1 = a2 = 0` to zero energy.
pub fn energy_competition_or_zero(c: &Couplings, s: &SystemSize) -> f64 {
    energy_competition(c, s).unwrap_or(0.0)
}

/// Termwise evaluation `-N z a1 + N z |a2| k`, kept separate from the
/// consolidated form so the two can be compared.
pub fn energy_competition_termwise(c: &Couplings, s: &SystemSize) -> Result<f64> {
    let k = k_factor(c)?;
    let nz = s.nz();
    Ok(-nz * c.a1 + nz * c.abs_a2() * k)
}

pub fn energy_conventional(c: &Couplings, s: &SystemSize) -> f64 {
    // 0 - x keeps the symmetric point at +0
    0.0 - s.nz() * c.combined().abs()
}

/// All published closed forms side by side, with a consistency flag.
pub fn energy_published_forms(c: &Couplings, s: &SystemSize) -> Result<EnergyReport> {
    let e_competition = energy_competition(c, s)?;
    let e_conventional = energy_conventional(c, s);
    let nz = s.nz();
    let b = c.abs_a2();
    let e_abstract_variant = -nz * c.combined().abs() - 2.0 * nz * c.a1 * b / (c.a1 + b);
    let scale = e_competition.abs().max(e_abstract_variant.abs());
    let consistent = (e_abstract_variant - e_competition).abs() <= FORM_CONSISTENCY_TOL * scale;
    Ok(EnergyReport {
        e_competition,
        e_conventional,
        e_abstract_variant,
        consistent,
    })
}

pub fn classify_phase(c: &Couplings, tol: f64) -> PhaseLabel {
    let a1 = c.a1;
    let b = c.abs_a2();
    if a1 == 0.0 && b == 0.0 {
        PhaseLabel::None
    } else if b == 0.0 {
        PhaseLabel::Ferro
    } else if a1 == 0.0 {
        PhaseLabel::Antiferro
    } else if (a1 - b).abs() <= tol * a1.max(b) {
        PhaseLabel::SpinGlass
    } else if a1 > b {
        PhaseLabel::FerroSpinGlass
    } else {
        PhaseLabel::AntiferroSpinGlass
    }
}

/// Split `|X>` into an ordered (FM or AFM) part plus an equal-weight glass part.
pub fn decompose_state(c: &Couplings) -> Result<StateDecomposition> {
    c.require_nondegenerate()?;
    let a1 = c.a1;
    let b = c.abs_a2();
    if a1 == b {
        return Err(Error::SpinGlassPoint);
    }
    let norm = a1.hypot(b);
    Ok(if a1 > b {
        StateDecomposition {
            pure_basis: PureBasis::Ferro,
            pure_coeff: (a1 - b) / norm,
            glass_coeff: b / norm,
        }
    } else {
        StateDecomposition {
            pure_basis: PureBasis::Antiferro,
            pure_coeff: (b - a1) / norm,
            glass_coeff: a1 / norm,
        }
    })
}
