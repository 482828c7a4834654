//! Gauge frames, analytic gauge fields, and numerical Wilson-loop holonomies.
//!
//! The Wilson line discretizes parallel transport of a degenerate eigenspace:
//! at each path sample the instantaneous subspace frame is computed, adjacent
//! frames are compared through their overlap matrix, each overlap is
//! unitarized by its polar factor, and the ordered product converges to the
//! holonomy as the step count grows. Intermediate frame gauges cancel in the
//! product, so only the endpoint frame matters; closed paths reuse the
//! starting frame at the endpoint.

use crate::linalg::{eigh, kron, kron3, pauli2, polar_unitary, CMatrix, I as IM};
use crate::model::{Arm, ClockArm, SystemSpec};
use crate::pauli::{OperatorSum, PauliString};
use crate::subspace::sector_subspace;
use crate::{Error, Result};
use std::collections::HashMap;

/// Relative spectral-gap floor below which transport aborts.
pub const GAP_FLOOR: f64 = 1e-6;

/// One great-circle segment in (polar, azimuth) coordinates.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PathSegment {
    pub start: (f64, f64),
    pub end: (f64, f64),
}

impl PathSegment {
    pub fn point(&self, fraction: f64) -> (f64, f64) {
        (
            self.start.0 + fraction * (self.end.0 - self.start.0),
            self.start.1 + fraction * (self.end.1 - self.start.1),
        )
    }

    /// Signed area contribution relative to the north pole:
    /// integral of (1 - cos theta) d phi along the segment.
    fn solid_angle(&self) -> f64 {
        let dphi = self.end.1 - self.start.1;
        if dphi == 0.0 {
            return 0.0;
        }
        let (t0, t1) = (self.start.0, self.end.0);
        let dtheta = t1 - t0;
        if dtheta.abs() < 1e-15 {
            return dphi * (1.0 - t0.cos());
        }
        // theta varies linearly with phi: integrate exactly.
        dphi * (1.0 - (t1.sin() - t0.sin()) / dtheta)
    }
}

/// Piecewise path on the coupling sphere of one clock arm.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ParamPath {
    pub segments: Vec<PathSegment>,
}

impl ParamPath {
    pub fn new(segments: Vec<PathSegment>) -> ParamPath {
        ParamPath { segments }
    }

    /// The braid loop: pole -> equator at azimuth 0, equatorial sweep by
    /// `target_phi` (signed), return to the pole along the final meridian.
    pub fn clock_face(target_phi: f64) -> ParamPath {
        let half = std::f64::consts::FRAC_PI_2;
        ParamPath::new(vec![
            PathSegment {
                start: (0.0, 0.0),
                end: (half, 0.0),
            },
            PathSegment {
                start: (half, 0.0),
                end: (half, target_phi),
            },
            PathSegment {
                start: (half, target_phi),
                end: (0.0, target_phi),
            },
        ])
    }

    /// Out to the equator and straight back: encloses no area.
    pub fn out_and_back(azimuth: f64) -> ParamPath {
        let half = std::f64::consts::FRAC_PI_2;
        ParamPath::new(vec![
            PathSegment {
                start: (0.0, azimuth),
                end: (half, azimuth),
            },
            PathSegment {
                start: (half, azimuth),
                end: (0.0, azimuth),
            },
        ])
    }

    /// Endpoints coincide, treating all points with polar angle 0 as the
    /// same physical configuration (the azimuth is degenerate at the pole).
    pub fn closed(&self) -> bool {
        let first = self.segments.first();
        let last = self.segments.last();
        match (first, last) {
            (Some(f), Some(l)) => {
                let a = f.start;
                let b = l.end;
                (a == b) || (a.0.abs() < 1e-12 && b.0.abs() < 1e-12)
            }
            _ => false,
        }
    }

    /// Signed enclosed solid angle (positive for increasing azimuth).
    pub fn solid_angle(&self) -> f64 {
        self.segments.iter().map(PathSegment::solid_angle).sum()
    }

    /// Sample points along the path: `steps` intervals per segment, shared
    /// endpoints deduplicated, both path endpoints included.
    pub fn sample(&self, steps_per_segment: usize) -> Vec<(f64, f64)> {
        let mut pts = Vec::with_capacity(self.segments.len() * steps_per_segment + 1);
        for (si, seg) in self.segments.iter().enumerate() {
            let from = if si == 0 { 0 } else { 1 };
            for k in from..=steps_per_segment {
                pts.push(seg.point(k as f64 / steps_per_segment as f64));
            }
        }
        pts
    }
}

/// Anti-Hermitian connection components for one clock arm.
#[derive(Debug, Clone)]
pub struct GaugeField {
    /// Component along the polar direction (A_theta or A_alpha).
    pub d_polar: CMatrix,
    /// Component along the azimuthal direction (A_phi or A_beta).
    pub d_azimuth: CMatrix,
}

/// exp(i angle G / 2) for an involution G.
fn rot(g: &CMatrix, angle: f64) -> CMatrix {
    let (s, c) = (angle / 2.0).sin_cos();
    CMatrix::identity(g.nrows(), g.ncols()).scale(c) + g.map(|x| x * IM * s)
}

fn tau_eta(a: char, b: char) -> CMatrix {
    kron(&pauli2(a), &pauli2(b))
}

/// chi (x) eta' (x) eta, matching the sector basis order of the middle arm.
fn chi_etap_eta(a: char, b: char, c: char) -> CMatrix {
    kron3(&pauli2(a), &pauli2(b), &pauli2(c))
}

/// The unitary frame F with H_eff = -F^dag (energy-Z) F for the arm.
///
/// Left/right arms: F = exp(+i theta tau^y eta^y / 2) exp(-i phi eta^z / 2).
/// Middle arm: F = exp(-i a chi^x eta^x / 2) exp(-i b chi^z eta^x eta^x' / 2).
/// These generator forms reproduce the closed-form gauge fields exactly.
pub fn gauge_frame(arm: Arm, polar: f64, azimuth: f64) -> CMatrix {
    match arm {
        Arm::Left | Arm::Right => {
            let u_y = rot(&tau_eta('Y', 'Y'), polar);
            let u_z = rot(&tau_eta('I', 'Z'), -azimuth);
            u_y * u_z
        }
        Arm::Middle => {
            let u_y = rot(&chi_etap_eta('X', 'I', 'X'), -polar);
            let u_z = rot(&chi_etap_eta('Z', 'X', 'X'), -azimuth);
            u_y * u_z
        }
    }
}

/// Closed-form gauge fields of the arm at the given point.
///
/// Left/right: A_theta = -i tau^y eta^y / 2,
///             A_phi = i (eta^z cos theta - tau^y eta^x sin theta) / 2.
/// Middle:     A_alpha = i chi^x eta^x / 2,
///             A_beta = i (chi^z eta^x eta^x' cos a - chi^y eta^x' sin a) / 2.
pub fn analytic_gauge_fields(arm: Arm, polar: f64, _azimuth: f64) -> GaugeField {
    let half_i = IM * 0.5;
    let (s, c) = polar.sin_cos();
    match arm {
        Arm::Left | Arm::Right => GaugeField {
            d_polar: tau_eta('Y', 'Y').map(|x| x * (-half_i)),
            d_azimuth: (tau_eta('I', 'Z').scale(c) - tau_eta('Y', 'X').scale(s))
                .map(|x| x * half_i),
        },
        Arm::Middle => GaugeField {
            d_polar: chi_etap_eta('X', 'I', 'X').map(|x| x * half_i),
            d_azimuth: (chi_etap_eta('Z', 'X', 'X').scale(c)
                - chi_etap_eta('Y', 'X', 'I').scale(s))
            .map(|x| x * half_i),
        },
    }
}

/// Connection component from frames by central finite differences:
/// A ~ F (F(+h)^dag - F(-h)^dag) / (2h).
pub fn finite_difference_connection(arm: Arm, polar: f64, azimuth: f64, h: f64) -> GaugeField {
    let f = gauge_frame(arm, polar, azimuth);
    let d_polar = &f
        * (gauge_frame(arm, polar + h, azimuth).adjoint()
            - gauge_frame(arm, polar - h, azimuth).adjoint())
        .scale(1.0 / (2.0 * h));
    let d_azimuth = &f
        * (gauge_frame(arm, polar, azimuth + h).adjoint()
            - gauge_frame(arm, polar, azimuth - h).adjoint())
        .scale(1.0 / (2.0 * h));
    GaugeField { d_polar, d_azimuth }
}

/// Discretized Wilson loop of the lowest `ground_dim` eigenvectors of the
/// Hamiltonian family restricted to a fixed charge sector.
///
/// `family` maps a path point to the full Hamiltonian; `sector` lists
/// conserved strings with their eigenvalue signs (empty for no restriction).
/// Aborts with [`Error::GapClosure`] if the spectral gap above the
/// transported subspace falls under [`GAP_FLOOR`] times the spectral scale.
pub fn wilson_loop(
    family: impl Fn(f64, f64) -> Result<OperatorSum>,
    path: &ParamPath,
    sector: &[(PauliString, i8)],
    ground_dim: usize,
    steps_per_segment: usize,
) -> Result<CMatrix> {
    if !path.closed() {
        return Err(Error::InvalidArgument(
            "wilson loops require a closed path".into(),
        ));
    }
    let probe = family(path.segments[0].start.0, path.segments[0].start.1)?;
    let n_qubits = probe.n_qubits();
    let ops: Vec<PauliString> = sector.iter().map(|(p, _)| *p).collect();
    let signs: Vec<i8> = sector.iter().map(|(_, s)| *s).collect();
    let basis = if sector.is_empty() {
        CMatrix::identity(1 << n_qubits, 1 << n_qubits)
    } else {
        sector_subspace(&ops, &signs, n_qubits)?
    };
    let m = basis.ncols();
    if ground_dim == 0 || ground_dim >= m {
        return Err(Error::InvalidArgument(format!(
            "ground dimension {ground_dim} incompatible with sector dimension {m}"
        )));
    }

    // Restriction cache: each Pauli string appearing in the family projects
    // to a fixed m x m matrix; per-point Hamiltonians are then linear
    // combinations of cached blocks.
    let mut cache: HashMap<(u32, u32), CMatrix> = HashMap::new();
    let mut restrict = |op: &OperatorSum| -> CMatrix {
        let mut out = CMatrix::zeros(m, m);
        for (coef, s) in op.terms() {
            let block = cache.entry(s.key()).or_insert_with(|| {
                let mut applied = CMatrix::zeros(basis.nrows(), m);
                for c in 0..m {
                    applied.set_column(
                        c,
                        &crate::engine::pauli_apply_vec(s, &basis.column(c).into_owned()),
                    );
                }
                basis.adjoint() * applied
            });
            out += block.map(|x| x * coef);
        }
        out
    };

    let points = path.sample(steps_per_segment);
    let frame_at = |restricted: &CMatrix| -> Result<CMatrix> {
        let (vals, vecs) = eigh(restricted);
        let scale = vals.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
        let gap = vals[ground_dim] - vals[ground_dim - 1];
        if gap < GAP_FLOOR * scale {
            return Err(Error::GapClosure(format!(
                "gap {gap:.3e} below floor at scale {scale:.3e}"
            )));
        }
        Ok(vecs.columns(0, ground_dim).into_owned())
    };

    let first = frame_at(&restrict(&family(points[0].0, points[0].1)?))?;
    let mut previous = first.clone();
    let mut transport = CMatrix::identity(ground_dim, ground_dim);
    for pt in points.iter().skip(1) {
        let current = frame_at(&restrict(&family(pt.0, pt.1)?))?;
        let overlap = current.adjoint() * &previous;
        transport = polar_unitary(&overlap) * transport;
        previous = current;
    }
    // Close the loop against the starting frame.
    let overlap = first.adjoint() * &previous;
    transport = polar_unitary(&overlap) * transport;
    Ok(transport)
}

/// Wilson line over the analytic frames of [`gauge_frame`]: the ground block
/// of the frame family (the first columns of F^dag span the low-energy
/// subspace of -F^dag Z F).
pub fn analytic_frame_holonomy(arm: Arm, path: &ParamPath, steps_per_segment: usize) -> CMatrix {
    let ground_dim = match arm {
        Arm::Left | Arm::Right => 2,
        Arm::Middle => 4,
    };
    let points = path.sample(steps_per_segment);
    let ground = |polar: f64, azimuth: f64| -> CMatrix {
        gauge_frame(arm, polar, azimuth)
            .adjoint()
            .columns(0, ground_dim)
            .into_owned()
    };
    let first = ground(points[0].0, points[0].1);
    let mut previous = first.clone();
    let mut transport = CMatrix::identity(ground_dim, ground_dim);
    for pt in points.iter().skip(1) {
        let current = ground(pt.0, pt.1);
        let overlap = current.adjoint() * &previous;
        transport = polar_unitary(&overlap) * transport;
        previous = current;
    }
    let overlap = first.adjoint() * &previous;
    polar_unitary(&overlap) * transport
}

/// Sector restriction for braiding loops of one arm: every conserved charge
/// pinned to -1, plus the energy labels of the junctions the arm leaves idle.
pub fn braid_sector(spec: &SystemSpec, arm: Arm) -> Vec<(PauliString, i8)> {
    let charges = crate::model::conserved_set(spec);
    let sector_ops = crate::model::energy_and_parity_operators(spec);
    let mut sector: Vec<(PauliString, i8)> = Vec::new();
    match spec {
        SystemSpec::FourQubit { .. } | SystemSpec::TetradTorus { .. } => {
            for w in &charges[..2] {
                sector.push((*w, -1));
            }
        }
        SystemSpec::TenQubit { .. } => {
            for w in &charges[..5] {
                sector.push((*w, -1));
            }
            match arm {
                Arm::Left => {
                    sector.push((sector_ops.energy_right.unwrap(), -1));
                    sector.push((sector_ops.energy_middle.unwrap(), -1));
                }
                Arm::Right => {
                    sector.push((sector_ops.energy_left, -1));
                    sector.push((sector_ops.energy_middle.unwrap(), -1));
                }
                Arm::Middle => {
                    sector.push((sector_ops.energy_left, -1));
                    sector.push((sector_ops.energy_right.unwrap(), -1));
                }
            }
        }
    }
    sector
}

/// Hamiltonian family with one arm moving and the others idle.
pub fn arm_family(spec: &SystemSpec, arm: Arm) -> impl Fn(f64, f64) -> Result<OperatorSum> + '_ {
    move |polar, azimuth| {
        let magnitude = spec.arm(arm)?.magnitude;
        let moved = spec.with_arm(arm, ClockArm::new(magnitude, polar, azimuth))?;
        crate::model::hamiltonian(&moved)
    }
}

/// Holonomy of the middle clock arm on the four-dimensional logical subspace
/// (left and right arms idle). Expected: exp(-i Omega eta^x eta^x' / 2) up to
/// the recorded gauge, i.e. doubly degenerate eigenphases of +-Omega/2.
pub fn middle_arm_holonomy(
    spec: &SystemSpec,
    path: &ParamPath,
    steps_per_segment: usize,
) -> Result<CMatrix> {
    let SystemSpec::TenQubit { left, right, .. } = spec else {
        return Err(Error::InvalidArgument(
            "the middle arm exists on the ten-qubit system only".into(),
        ));
    };
    if !left.is_idle() || !right.is_idle() {
        return Err(Error::InvalidArgument(
            "left and right arms must be idle for a middle-arm braid".into(),
        ));
    }
    wilson_loop(
        arm_family(spec, Arm::Middle),
        path,
        &braid_sector(spec, Arm::Middle),
        4,
        steps_per_segment,
    )
}

/// Eigenphases of a unitary holonomy, ascending.
pub fn holonomy_eigenphases(u: &CMatrix) -> Vec<f64> {
    crate::linalg::unitary_eigenphases(u)
}
