#pragma once

#include <cstdint>
#include <vector>

namespace ewsim {

// Uniform (z, v) binning. Bin centers sit at min + (i + 1/2) * width.
struct BinningSpec {
  double z_min = 0, z_max = 1;
  int nz = 64;
  double v_min = -1, v_max = 1;
  int nv = 64;

  void validate() const;
  double dz() const { return (z_max - z_min) / nz; }
  double dv() const { return (v_max - v_min) / nv; }
  double z_center(int iz) const { return z_min + (iz + 0.5) * dz(); }
  double v_center(int iv) const { return v_min + (iv + 0.5) * dv(); }
};

// Count histogram over phase space. Counts are integers so merged results are
// independent of accumulation order; densities are derived on demand.
// n_total counts every trajectory attempted, including ones that never land
// in the map, so normalization reflects the full ensemble.
class PhaseSpaceHistogram {
 public:
  explicit PhaseSpaceHistogram(const BinningSpec& spec);

  void add(double z, double v);  // bins the point if in range; always bumps n_total
  void add_missed();             // trajectory left the sample (overrun, not pumped)
  void merge(const PhaseSpaceHistogram& other);

  const BinningSpec& spec() const { return spec_; }
  std::uint64_t count(int iz, int iv) const;
  std::uint64_t n_total() const { return n_total_; }
  std::uint64_t n_binned() const { return n_binned_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }

  // Dimensionless phase-space density: (count / n_total) / (dz dv) * h_over_m.
  double density(int iz, int iv, double h_over_m) const;
  std::vector<double> density_row(int iv, double h_over_m) const;
  // The v = 0 cut: the central row, or the mean of the two central rows when
  // nv is even (v = 0 is then a bin edge).
  std::vector<double> v0_row(double h_over_m) const;

 private:
  BinningSpec spec_;
  std::vector<std::uint64_t> counts_;  // iz * nv + iv
  std::uint64_t n_total_ = 0;
  std::uint64_t n_binned_ = 0;
};

struct PeakEstimate {
  int index = 0;        // bin of the raw maximum
  double x = 0;         // refined abscissa
  double value = 0;     // refined ordinate
};

// Parabolic vertex through the maximum bin and its neighbors. Positions are
// bin centers x_min + (i + 1/2) dx. Falls back to the raw bin at the edges or
// when the three points are not concave.
PeakEstimate refine_peak(const std::vector<double>& row, double x_min, double dx);

// Full width at half the given peak value, with linear interpolation between
// bin centers. Returns 0 if either crossing is not bracketed inside the row.
double fwhm(const std::vector<double>& row, double x_min, double dx, double peak_value);

}  // namespace ewsim
