#include "ewsim/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ewsim {

void BinningSpec::validate() const {
  if (!(z_max > z_min)) throw std::invalid_argument("BinningSpec: z_max must exceed z_min");
  if (!(v_max > v_min)) throw std::invalid_argument("BinningSpec: v_max must exceed v_min");
  if (nz < 1 || nv < 1) throw std::invalid_argument("BinningSpec: bin counts must be >= 1");
}

PhaseSpaceHistogram::PhaseSpaceHistogram(const BinningSpec& spec) : spec_(spec) {
  spec_.validate();
  counts_.assign(static_cast<std::size_t>(spec_.nz) * spec_.nv, 0);
}

void PhaseSpaceHistogram::add(double z, double v) {
  ++n_total_;
  const int iz = static_cast<int>(std::floor((z - spec_.z_min) / spec_.dz()));
  const int iv = static_cast<int>(std::floor((v - spec_.v_min) / spec_.dv()));
  if (iz < 0 || iz >= spec_.nz || iv < 0 || iv >= spec_.nv) return;
  ++counts_[static_cast<std::size_t>(iz) * spec_.nv + iv];
  ++n_binned_;
}

void PhaseSpaceHistogram::add_missed() { ++n_total_; }

void PhaseSpaceHistogram::merge(const PhaseSpaceHistogram& other) {
  if (other.spec_.nz != spec_.nz || other.spec_.nv != spec_.nv ||
      other.spec_.z_min != spec_.z_min || other.spec_.z_max != spec_.z_max ||
      other.spec_.v_min != spec_.v_min || other.spec_.v_max != spec_.v_max)
    throw std::invalid_argument("PhaseSpaceHistogram::merge: binning specs differ");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  n_total_ += other.n_total_;
  n_binned_ += other.n_binned_;
}

std::uint64_t PhaseSpaceHistogram::count(int iz, int iv) const {
  if (iz < 0 || iz >= spec_.nz || iv < 0 || iv >= spec_.nv)
    throw std::out_of_range("PhaseSpaceHistogram::count: bin index out of range");
  return counts_[static_cast<std::size_t>(iz) * spec_.nv + iv];
}

double PhaseSpaceHistogram::density(int iz, int iv, double h_over_m) const {
  if (n_total_ == 0) return 0;
  const double mass_frac = static_cast<double>(count(iz, iv)) / static_cast<double>(n_total_);
  return mass_frac / (spec_.dz() * spec_.dv()) * h_over_m;
}

std::vector<double> PhaseSpaceHistogram::density_row(int iv, double h_over_m) const {
  std::vector<double> row(static_cast<std::size_t>(spec_.nz));
  for (int iz = 0; iz < spec_.nz; ++iz) row[iz] = density(iz, iv, h_over_m);
  return row;
}

std::vector<double> PhaseSpaceHistogram::v0_row(double h_over_m) const {
  if (spec_.nv % 2 == 1) return density_row(spec_.nv / 2, h_over_m);
  const auto lo = density_row(spec_.nv / 2 - 1, h_over_m);
  const auto hi = density_row(spec_.nv / 2, h_over_m);
  std::vector<double> row(lo.size());
  for (std::size_t i = 0; i < row.size(); ++i) row[i] = 0.5 * (lo[i] + hi[i]);
  return row;
}

PeakEstimate refine_peak(const std::vector<double>& row, double x_min, double dx) {
  if (row.empty()) throw std::invalid_argument("refine_peak: empty row");
  const auto it = std::max_element(row.begin(), row.end());
  const int i = static_cast<int>(it - row.begin());
  PeakEstimate pk;
  pk.index = i;
  pk.x = x_min + (i + 0.5) * dx;
  pk.value = *it;
  if (i == 0 || i + 1 == static_cast<int>(row.size())) return pk;
  const double ym = row[i - 1], y0 = row[i], yp = row[i + 1];
  const double curv = ym - 2.0 * y0 + yp;
  if (!(curv < 0)) return pk;
  const double delta = 0.5 * (ym - yp) / curv;
  pk.x += delta * dx;
  pk.value = y0 - 0.25 * (ym - yp) * delta;
  return pk;
}

double fwhm(const std::vector<double>& row, double x_min, double dx, double peak_value) {
  if (row.empty() || !(peak_value > 0)) return 0;
  const auto it = std::max_element(row.begin(), row.end());
  const int im = static_cast<int>(it - row.begin());
  const double half = 0.5 * peak_value;
  auto center = [&](int i) { return x_min + (i + 0.5) * dx; };

  double left = 0, right = 0;
  bool have_left = false, have_right = false;
  for (int i = im; i > 0; --i) {
    if (row[i - 1] < half && row[i] >= half) {
      const double f = (half - row[i - 1]) / (row[i] - row[i - 1]);
      left = center(i - 1) + f * dx;
      have_left = true;
      break;
    }
  }
  for (int i = im; i + 1 < static_cast<int>(row.size()); ++i) {
    if (row[i] >= half && row[i + 1] < half) {
      const double f = (row[i] - half) / (row[i] - row[i + 1]);
      right = center(i) + f * dx;
      have_right = true;
      break;
    }
  }
  if (!have_left || !have_right) return 0;
  return right - left;
}

}  // namespace ewsim
