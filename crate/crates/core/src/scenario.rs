// Copyright 2026 dfs-control Contributors
// SPDX-License-Identifier: Apache-2.0

//! The built-in four-level example.
//!
//! Basis order (|0>, |1>, |2>, |3>): an unstable excited level |0> coupled by
//! two lasers (Rabi couplings Omega_1 = Omega cos phi, Omega_2 = Omega sin
//! phi) to the degenerate stable levels |1>, |2>, plus an isolated stable
//! level |3>. |0> decays to |j> at rate gamma_j. The dark state
//! |D1> = cos phi |2> - sin phi |1> and the isolated |D2> = |3> span a
//! two-dimensional DFS when the stable detunings are equal.

use num_complex::Complex64 as C64;

use crate::control::ControlConfig;
use crate::error::{Error, Result};
use crate::lindblad::{DecayChannel, DensityMatrix, LindbladModel};
use crate::operators::{ComplexMatrix, HermitianOperator, StateVector};
use crate::propagate::{IntegratorSettings, Probes};

/// Physical parameters of the four-level system (energies and rates in units
/// of the total decay rate gamma).
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioParams {
    pub omega: f64,
    pub phi: f64,
    pub delta0: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    /// Swap the third control from |0><D2| + h.c. to |0><D1| + h.c.
    pub use_h3_variant: bool,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            omega: 5.0,
            phi: std::f64::consts::PI / 5.0,
            delta0: 4.0,
            delta1: 2.0,
            delta2: 2.0,
            gamma1: 1.0 / 3.0,
            gamma2: 1.0 / 3.0,
            gamma3: 1.0 / 3.0,
            use_h3_variant: false,
        }
    }
}

impl ScenarioParams {
    pub fn validate(&self) -> Result<()> {
        if self.omega < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "omega must be non-negative, got {}",
                self.omega
            )));
        }
        for (name, g) in [
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("gamma3", self.gamma3),
        ] {
            if g < 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be non-negative, got {g}"
                )));
            }
        }
        Ok(())
    }
}

/// Initial-state angles; the resulting amplitude vector
/// (sin b1 cos b3, cos b1 cos b2, cos b1 sin b2, sin b1 sin b3)
/// has unit norm for any angles.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialStateParams {
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
}

/// Which dark state the feedback should steer into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    D1,
    D2,
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::D1 => write!(f, "d1"),
            Self::D2 => write!(f, "d2"),
        }
    }
}

impl std::str::FromStr for Target {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "d1" => Ok(Self::D1),
            "d2" => Ok(Self::D2),
            other => Err(Error::InvalidConfig(format!(
                "unknown target '{other}' (expected d1 or d2)"
            ))),
        }
    }
}

/// The two dark states: |D1> = cos phi |2> - sin phi |1>, |D2> = |3>.
pub fn dark_states(phi: f64) -> (StateVector, StateVector) {
    let d1 = StateVector::new(vec![
        C64::ZERO,
        C64::new(-phi.sin(), 0.0),
        C64::new(phi.cos(), 0.0),
        C64::ZERO,
    ])
    .expect("unit norm for any angle");
    (d1, StateVector::basis(4, 3))
}

/// The dark state selected as the control target.
pub fn target_state(target: Target, phi: f64) -> StateVector {
    let (d1, d2) = dark_states(phi);
    match target {
        Target::D1 => d1,
        Target::D2 => d2,
    }
}

/// Observable whose smallest eigenvalue sits on the chosen target:
/// A1 = |D2><D2| - |D1><D1| for target D1, and -A1 for target D2.
pub fn observable_for_target(target: Target, phi: f64) -> HermitianOperator {
    let (d1, d2) = dark_states(phi);
    let a1 = &d2.projector() - &d1.projector();
    let matrix = match target {
        Target::D1 => a1,
        Target::D2 => a1.scaled(C64::new(-1.0, 0.0)),
    };
    HermitianOperator::new(matrix).expect("projector difference is Hermitian")
}

/// Free Hamiltonian, the three control Hamiltonians and the decay channels.
///
/// Controls are [H1, H2, H3] with H1 the all-ones matrix, H2 the dark-state
/// swap |D1><D2| + h.c., and H3 = |0><D2| + h.c. (or |0><D1| + h.c. with
/// `use_h3_variant`). Channels are |j><0| at rate gamma_j; zero-rate channels
/// are dropped.
pub fn build_model(params: &ScenarioParams) -> Result<LindbladModel> {
    params.validate()?;
    let omega1 = params.omega * params.phi.cos();
    let omega2 = params.omega * params.phi.sin();

    let mut h0 = ComplexMatrix::zeros(4);
    h0.set(0, 0, C64::new(params.delta0, 0.0));
    h0.set(1, 1, C64::new(params.delta1, 0.0));
    h0.set(2, 2, C64::new(params.delta2, 0.0));
    // Level |3> sits at energy zero.
    h0.set(0, 1, C64::new(omega1, 0.0));
    h0.set(1, 0, C64::new(omega1, 0.0));
    h0.set(0, 2, C64::new(omega2, 0.0));
    h0.set(2, 0, C64::new(omega2, 0.0));
    let h0 = HermitianOperator::new(h0)?;

    let (d1, d2) = dark_states(params.phi);
    let excited = StateVector::basis(4, 0);
    let h1 = HermitianOperator::from_fn(4, |_, _| C64::ONE)?;
    let h2 =
        HermitianOperator::new(&ComplexMatrix::outer(&d1, &d2) + &ComplexMatrix::outer(&d2, &d1))?;
    let h3_partner = if params.use_h3_variant { &d1 } else { &d2 };
    let h3 = HermitianOperator::new(
        &ComplexMatrix::outer(&excited, h3_partner) + &ComplexMatrix::outer(h3_partner, &excited),
    )?;

    let mut channels = Vec::new();
    for (j, rate) in [(1, params.gamma1), (2, params.gamma2), (3, params.gamma3)] {
        if rate > 0.0 {
            let jump = ComplexMatrix::outer(&StateVector::basis(4, j), &excited);
            channels.push(DecayChannel::new(jump, rate)?);
        }
    }

    LindbladModel::new(h0, vec![h1, h2, h3], channels)
}

/// Pure initial state from the three angles.
pub fn initial_state(params: &InitialStateParams) -> StateVector {
    let (b1, b2, b3) = (params.beta1, params.beta2, params.beta3);
    StateVector::from_real(&[
        b1.sin() * b3.cos(),
        b1.cos() * b2.cos(),
        b1.cos() * b2.sin(),
        b1.sin() * b3.sin(),
    ])
    .expect("unit norm for any angles")
}

/// Named parameter sets for the standard runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

impl Figure {
    pub const ALL: [Figure; 5] = [
        Figure::Fig2,
        Figure::Fig3,
        Figure::Fig4,
        Figure::Fig5,
        Figure::Fig6,
    ];
}

impl std::fmt::Display for Figure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Fig2 => write!(f, "fig2"),
            Self::Fig3 => write!(f, "fig3"),
            Self::Fig4 => write!(f, "fig4"),
            Self::Fig5 => write!(f, "fig5"),
            Self::Fig6 => write!(f, "fig6"),
        }
    }
}

impl std::str::FromStr for Figure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fig2" => Ok(Self::Fig2),
            "fig3" => Ok(Self::Fig3),
            "fig4" => Ok(Self::Fig4),
            "fig5" => Ok(Self::Fig5),
            "fig6" => Ok(Self::Fig6),
            other => Err(Error::InvalidConfig(format!(
                "unknown preset '{other}' (expected fig2..fig6)"
            ))),
        }
    }
}

/// A fully specified run: scenario, control setup, initial state, integrator.
#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub scenario: ScenarioParams,
    pub target: Target,
    pub kappa2: f64,
    /// `None` removes the third control from the active set entirely.
    pub kappa3: Option<f64>,
    pub init: InitialStateParams,
    pub integrator: IntegratorSettings,
}

/// Preset parameters for each named run.
///
/// All presets share Omega = 5, equal decay rates summing to gamma = 1,
/// Delta = (4, 2, 2) and kappa_2 = 1. fig2 runs without the third control;
/// fig4 targets the isolated dark state; fig5 uses phi = pi/4 and treats
/// kappa_3 as the natural sweep variable. The presets with the third control
/// active carry a 60-unit horizon: the late approach to the target rides a
/// slow ring-down and clears its plateau around t = 45 at kappa_3 = 15.
pub fn preset(figure: Figure) -> FigurePreset {
    let pi = std::f64::consts::PI;
    let base = ScenarioParams::default();
    match figure {
        Figure::Fig2 => FigurePreset {
            scenario: base,
            target: Target::D1,
            kappa2: 1.0,
            kappa3: None,
            init: InitialStateParams {
                beta1: pi / 5.0,
                beta2: pi / 4.0,
                beta3: pi / 3.0,
            },
            integrator: IntegratorSettings::default(),
        },
        Figure::Fig3 => FigurePreset {
            kappa3: Some(15.0),
            integrator: IntegratorSettings {
                t_final: 60.0,
                ..IntegratorSettings::default()
            },
            ..preset(Figure::Fig2)
        },
        Figure::Fig4 => FigurePreset {
            target: Target::D2,
            init: InitialStateParams {
                beta1: 0.0,
                beta2: pi / 4.0,
                beta3: pi / 3.0,
            },
            ..preset(Figure::Fig3)
        },
        Figure::Fig5 => FigurePreset {
            scenario: ScenarioParams {
                phi: pi / 4.0,
                ..ScenarioParams::default()
            },
            init: InitialStateParams {
                beta1: pi / 6.0,
                beta2: pi / 3.0,
                beta3: pi / 5.0,
            },
            ..preset(Figure::Fig3)
        },
        Figure::Fig6 => FigurePreset {
            init: InitialStateParams {
                beta1: pi / 5.0,
                beta2: pi / 4.0,
                beta3: pi / 6.0,
            },
            ..preset(Figure::Fig3)
        },
    }
}

impl FigurePreset {
    /// Build the model, control configuration, initial state and probes.
    pub fn assemble(&self) -> Result<(LindbladModel, ControlConfig, DensityMatrix, Probes)> {
        let model = build_model(&self.scenario)?;
        let (model, kappas) = match self.kappa3 {
            Some(k3) => (model, vec![self.kappa2, k3]),
            None => {
                let active = model.controls()[..2].to_vec();
                (model.with_controls(active)?, vec![self.kappa2])
            }
        };
        let a = observable_for_target(self.target, self.scenario.phi);
        let config = ControlConfig::new(a, 0, kappas, &model)?;
        let rho0 = DensityMatrix::pure(&initial_state(&self.init));
        let (d1, d2) = dark_states(self.scenario.phi);
        let probes = Probes {
            target: target_state(self.target, self.scenario.phi),
            dfs_basis: vec![d1, d2],
        };
        Ok((model, config, rho0, probes))
    }
}
