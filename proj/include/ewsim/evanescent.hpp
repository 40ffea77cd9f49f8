#pragma once

#include <array>
#include <span>
#include <vector>

#include "ewsim/geometry.hpp"
#include "ewsim/polarization.hpp"

namespace ewsim {

// Tilt angle of the evanescent-wave Poynting vector away from the in-plane
// k direction, chi = atan(sqrt(n^2 sin^2 theta_i - 1)) = atan(kappa / k_l).
double poynting_tilt(const InterfaceGeometry& g);

// Incident-beam ellipse that makes the transmitted evanescent field exactly
// circular: minor/major ratio 1/n, major axis rotated from the TE direction by
// handedness * atan(-gamma/cos theta_i). The handedness selects which circular
// component; the opposite sense uses the mirror image of the ellipse.
EllipseSpec required_input_polarization(const InterfaceGeometry& g, int handedness = +1);

// 3-vector Jones field of the incident beam (inside the dielectric,
// propagation (sin theta_i, 0, cos theta_i)) realizing the given transverse
// ellipse. Unit intensity.
PolarizationState incident_polarization(const InterfaceGeometry& g, const EllipseSpec& spec);

// Transmitted evanescent field at z = 0+ for a transverse incident field,
// via the s/p Fresnel transmission coefficients continued past the critical
// angle. Throws std::domain_error if the input has a longitudinal component.
PolarizationState evanescent_field(const InterfaceGeometry& g, const PolarizationState& input);

enum class BeamMode { te, tm };

// Local field of two equal-amplitude evanescent waves whose in-plane
// directions cross at `crossing_angle` (bisected by x, fringe normal y), both
// at the geometry's incidence angle, evaluated at the given surface points at
// fixed height (the common exp(-kappa z) factor is dropped). TM beams are
// normalized to unit field magnitude so both modes contribute intensity 1.
std::vector<PolarizationState> te_crossing_pattern(
    const InterfaceGeometry& g, double crossing_angle,
    std::span<const std::array<double, 2>> points,
    std::array<BeamMode, 2> modes = {BeamMode::te, BeamMode::te});

// Distance between neighbouring pure-sigma+ and pure-sigma- lines of the
// crossing pattern: lambda0 / (4 n sin(theta_i) sin(crossing_angle/2)).
double sigma_line_spacing(const InterfaceGeometry& g, double crossing_angle);

// Interference fringe visibility 2 sqrt(R) / (1 + R) for an intensity ratio
// R in [0, 1] between two beams.
double fringe_visibility(double intensity_ratio);

}  // namespace ewsim
