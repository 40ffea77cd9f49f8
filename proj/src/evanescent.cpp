#include "ewsim/evanescent.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace ewsim {

namespace {
using cplx = std::complex<double>;

// Fresnel transmission amplitudes (dielectric -> vacuum) continued past the
// critical angle, where cos(theta_t) = i gamma.
cplx fresnel_ts(const InterfaceGeometry& g) {
  const double c = std::cos(g.theta_i());
  return 2.0 * g.n() * c / cplx(g.n() * c, g.gamma_norm());
}

cplx fresnel_tp(const InterfaceGeometry& g) {
  const double c = std::cos(g.theta_i());
  return 2.0 * g.n() * c / cplx(c, g.n() * g.gamma_norm());
}
}  // namespace

double poynting_tilt(const InterfaceGeometry& g) { return std::atan(g.gamma_norm()); }

EllipseSpec required_input_polarization(const InterfaceGeometry& g, int handedness) {
  if (handedness != 1 && handedness != -1)
    throw std::invalid_argument("required_input_polarization: handedness must be +1 or -1");
  EllipseSpec spec;
  spec.ellipticity = 1.0 / g.n();
  // The opposite sense needs the mirror image of the whole ellipse (y -> -y
  // flips orientation and handedness together); flipping the sense alone does
  // not survive the complex Fresnel phases.
  spec.orientation = handedness * std::atan(-g.gamma_norm() / std::cos(g.theta_i()));
  spec.handedness = handedness;
  return spec;
}

PolarizationState incident_polarization(const InterfaceGeometry& g, const EllipseSpec& spec) {
  spec.validate();
  // Transverse frame of the incident beam: s = y, p = (cos theta, 0, -sin theta).
  const double st = std::sin(g.theta_i());
  const double ct = std::cos(g.theta_i());
  const double cphi = std::cos(spec.orientation);
  const double sphi = std::sin(spec.orientation);
  const double norm = std::sqrt(1.0 + spec.ellipticity * spec.ellipticity);
  // Major axis at `orientation` from s toward p; minor axis 90 degrees on.
  const cplx js(cphi / norm, -spec.handedness * spec.ellipticity * sphi / norm);
  const cplx jp(sphi / norm, spec.handedness * spec.ellipticity * cphi / norm);
  PolarizationState e;
  e.ex = jp * ct;
  e.ey = js;
  e.ez = jp * (-st);
  return e;
}

PolarizationState evanescent_field(const InterfaceGeometry& g, const PolarizationState& input) {
  const double st = std::sin(g.theta_i());
  const double ct = std::cos(g.theta_i());
  const double amp = std::sqrt(input.intensity());
  if (!(amp > 0)) throw std::domain_error("evanescent_field: zero input field");
  const cplx along_k = input.ex * st + input.ez * ct;
  if (std::abs(along_k) > 1e-9 * amp)
    throw std::domain_error(
        "evanescent_field: input must be transverse to the incident propagation direction");
  const cplx es = input.ey;
  const cplx ep = input.ex * ct - input.ez * st;
  const cplx ts = fresnel_ts(g) * es;
  const cplx tp = fresnel_tp(g) * ep;
  // Transmitted p unit vector continues to (i gamma, 0, -beta).
  PolarizationState out;
  out.ex = tp * cplx(0.0, g.gamma_norm());
  out.ey = ts;
  out.ez = tp * (-g.beta());
  return out;
}

std::vector<PolarizationState> te_crossing_pattern(const InterfaceGeometry& g,
                                                   double crossing_angle,
                                                   std::span<const std::array<double, 2>> points,
                                                   std::array<BeamMode, 2> modes) {
  if (!(crossing_angle > 0 && crossing_angle <= std::numbers::pi))
    throw std::domain_error("te_crossing_pattern: crossing angle must lie in (0, pi]");
  const double half = crossing_angle / 2;
  const double c2 = std::cos(half), s2 = std::sin(half);
  const std::array<std::array<double, 2>, 2> u = {{{c2, -s2}, {c2, s2}}};
  const double kpar = g.beta() * g.k_l();
  const double gam = g.gamma_norm();
  const double beta = g.beta();
  const double tm_norm = std::sqrt(gam * gam + beta * beta);

  std::vector<PolarizationState> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    PolarizationState e;
    for (int j = 0; j < 2; ++j) {
      const double phase = kpar * (u[j][0] * p[0] + u[j][1] * p[1]);
      const cplx ph = std::polar(1.0, phase);
      if (modes[j] == BeamMode::te) {
        // TE field parallel to the surface, perpendicular to the beam azimuth.
        e.ex += -u[j][1] * ph;
        e.ey += u[j][0] * ph;
      } else {
        // TM evanescent field (i gamma u - beta z), unit-normalized.
        e.ex += cplx(0.0, gam) * u[j][0] / tm_norm * ph;
        e.ey += cplx(0.0, gam) * u[j][1] / tm_norm * ph;
        e.ez += -beta / tm_norm * ph;
      }
    }
    out.push_back(e);
  }
  return out;
}

double sigma_line_spacing(const InterfaceGeometry& g, double crossing_angle) {
  if (!(crossing_angle > 0 && crossing_angle <= std::numbers::pi))
    throw std::domain_error("sigma_line_spacing: crossing angle must lie in (0, pi]");
  return g.lambda0() / (4.0 * g.beta() * std::sin(crossing_angle / 2));
}

double fringe_visibility(double intensity_ratio) {
  if (!(intensity_ratio >= 0 && intensity_ratio <= 1))
    throw std::domain_error("fringe_visibility: intensity ratio must lie in [0, 1]");
  return 2.0 * std::sqrt(intensity_ratio) / (1.0 + intensity_ratio);
}

}  // namespace ewsim
