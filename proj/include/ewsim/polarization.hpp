#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace ewsim {

// Complex analytic signal E(t) = Re[(ex, ey, ez) e^{-i omega t}]. With this
// time convention a field (1, i, 0)/sqrt(2) rotates x -> y and carries spin +z
// (sigma-plus about +z, s3 = +1).
struct PolarizationState {
  std::complex<double> ex{0, 0};
  std::complex<double> ey{0, 0};
  std::complex<double> ez{0, 0};

  double intensity() const {
    return std::norm(ex) + std::norm(ey) + std::norm(ez);
  }

  // Spin density Im(E* x E) / |E|^2. Magnitude is the degree of circular
  // polarization (1 for circular, 0 for linear); direction is the rotation
  // axis. Zero field maps to the zero vector.
  std::array<double, 3> spin() const {
    const double i0 = intensity();
    if (i0 <= 0) return {0, 0, 0};
    const auto cx = std::conj(ex), cy = std::conj(ey), cz = std::conj(ez);
    return {std::imag(cy * ez - cz * ey) / i0,
            std::imag(cz * ex - cx * ez) / i0,
            std::imag(cx * ey - cy * ex) / i0};
  }

  double degree_of_circularity() const {
    const auto s = spin();
    return std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]);
  }

  // Normalized Stokes parameters in the (x, y) basis, divided by the total
  // intensity. For a field confined to the surface plane (ez = 0) these are
  // the usual s1, s2, s3 and satisfy s1^2+s2^2+s3^2 = 1 when fully polarized.
  std::array<double, 3> stokes_xy() const {
    const double i0 = intensity();
    if (i0 <= 0) return {0, 0, 0};
    const std::complex<double> cross = std::conj(ex) * ey;
    return {(std::norm(ex) - std::norm(ey)) / i0, 2.0 * std::real(cross) / i0,
            2.0 * std::imag(cross) / i0};
  }
};

// Polarization ellipse of a coherent field: E = e^{i alpha} (A + i B) with
// real orthogonal axis vectors A (major) and B (minor), |A| >= |B|.
struct PolarizationEllipse {
  std::array<double, 3> major{0, 0, 0};  // unit vector (zero for zero field)
  std::array<double, 3> minor{0, 0, 0};
  double a = 0;            // major semi-axis amplitude
  double b = 0;            // minor semi-axis amplitude
  double ellipticity = 0;  // b/a in [0, 1]; 1 means circular
};

inline PolarizationEllipse analyze_ellipse(const PolarizationState& e) {
  PolarizationEllipse out;
  const double i0 = e.intensity();
  if (i0 <= 0) return out;
  // E.E = |E.E| e^{2 i alpha}; de-phasing by alpha makes Re and Im parts
  // orthogonal with |Re| >= |Im|.
  const std::complex<double> ee = e.ex * e.ex + e.ey * e.ey + e.ez * e.ez;
  const double alpha = 0.5 * std::arg(ee);
  const std::complex<double> ph = std::polar(1.0, -alpha);
  const std::array<std::complex<double>, 3> f = {e.ex * ph, e.ey * ph, e.ez * ph};
  std::array<double, 3> re{}, im{};
  for (int i = 0; i < 3; ++i) {
    re[i] = std::real(f[i]);
    im[i] = std::imag(f[i]);
  }
  auto norm3 = [](const std::array<double, 3>& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  };
  out.a = norm3(re);
  out.b = norm3(im);
  if (out.a > 0)
    for (int i = 0; i < 3; ++i) out.major[i] = re[i] / out.a;
  if (out.b > 0)
    for (int i = 0; i < 3; ++i) out.minor[i] = im[i] / out.b;
  out.ellipticity = out.a > 0 ? out.b / out.a : 0.0;
  return out;
}

// Input-beam polarization given in its transverse plane: major-axis angle
// `orientation` measured from the s (TE) direction toward the p direction,
// minor/major ratio `ellipticity`, and rotation sense `handedness` (+1/-1).
struct EllipseSpec {
  double ellipticity = 0;
  double orientation = 0;  // rad
  int handedness = +1;

  void validate() const {
    if (!(ellipticity >= 0 && ellipticity <= 1))
      throw std::invalid_argument("EllipseSpec: ellipticity must lie in [0, 1]");
    if (handedness != 1 && handedness != -1)
      throw std::invalid_argument("EllipseSpec: handedness must be +1 or -1");
  }
};

}  // namespace ewsim
