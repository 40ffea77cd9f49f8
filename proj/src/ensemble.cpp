#include "ewsim/ensemble.hpp"

#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include "ewsim/constants.hpp"
#include "ewsim/errors.hpp"
#include "ewsim/rng.hpp"

namespace ewsim {

namespace {

constexpr std::uint64_t kBlock = 4096;

struct BlockResult {
  PhaseSpaceHistogram hist;
  std::uint64_t pumped = 0, unpumped = 0, overrun = 0;
  double photon_sum = 0;

  explicit BlockResult(const BinningSpec& spec) : hist(spec) {}
};

void run_block(const MolassesConfig& mol, const MirrorConfig& mirror, double edge,
               const IntegrateOptions& integ, std::uint64_t begin, std::uint64_t end,
               BlockResult& out) {
  const AtomSpecies& sp = mirror.species();
  for (std::uint64_t idx = begin; idx < end; ++idx) {
    TrajectoryRng rng(mol.master_seed, idx);
    const KinematicState release = sample_release(mol, sp, rng);
    if (release.z <= edge) {  // released inside the mirror region: not simulated
      out.hist.add_missed();
      ++out.overrun;
      continue;
    }
    const KinematicState entry = free_fall_to_mirror(release, edge);
    try {
      const BounceOutcome res = integrate_bounce(mirror, entry, rng, integ);
      out.photon_sum += res.photons_scattered;
      if (res.pumped) {
        out.hist.add(res.z_p, res.v_p);
        ++out.pumped;
      } else {
        out.hist.add_missed();
        ++out.unpumped;
      }
    } catch (const MirrorOverrunError&) {
      out.hist.add_missed();
      ++out.overrun;
    }
  }
}

struct DensityBlock {
  std::vector<double> mass;
  double pumped_mass = 0;

  explicit DensityBlock(const BinningSpec& spec)
      : mass(static_cast<std::size_t>(spec.nz) * spec.nv, 0.0) {}
};

void run_density_block(const MolassesConfig& mol, const MirrorConfig& mirror, double edge,
                       IntegrateOptions integ, const BinningSpec& bins, std::uint64_t begin,
                       std::uint64_t end, DensityBlock& out) {
  const AtomSpecies& sp = mirror.species();
  const double b = mirror.branching_b();
  const double dz = bins.dz(), dv = bins.dv();
  integ.disable_pumping = true;

  double z_prev = 0, v_prev = 0, y_prev = 0;
  integ.observer = [&](double, double z, double v, double y) {
    const double w = std::exp(-b * y_prev) - std::exp(-b * y);
    out.pumped_mass += w;
    const double zm = 0.5 * (z_prev + z), vm = 0.5 * (v_prev + v);
    const int iz = static_cast<int>(std::floor((zm - bins.z_min) / dz));
    const int iv = static_cast<int>(std::floor((vm - bins.v_min) / dv));
    if (iz >= 0 && iz < bins.nz && iv >= 0 && iv < bins.nv)
      out.mass[static_cast<std::size_t>(iz) * bins.nv + iv] += w;
    z_prev = z;
    v_prev = v;
    y_prev = y;
  };

  for (std::uint64_t idx = begin; idx < end; ++idx) {
    TrajectoryRng rng(mol.master_seed, idx);
    const KinematicState release = sample_release(mol, sp, rng);
    if (release.z <= edge) continue;
    const KinematicState entry = free_fall_to_mirror(release, edge);
    z_prev = entry.z;
    v_prev = entry.v;
    y_prev = 0;
    try {
      integrate_bounce(mirror, entry, rng, integ);
    } catch (const MirrorOverrunError&) {
      // Same accounting as the sampled run: the trajectory contributes to
      // n_total but deposits nothing (partial deposits before the overrun are
      // negligible and harmless either way, mirroring add_missed).
    }
  }
}

}  // namespace

BinningSpec default_binning(const MirrorConfig& mirror, const MolassesConfig& mol,
                            double entry_margin, int nz, int nv) {
  const double v_i = nominal_entry_speed(mol.drop_height);
  BinningSpec spec;
  spec.z_min = 0;
  spec.z_max = entry_margin / mirror.kappa();
  spec.nz = nz;
  spec.v_min = -v_i;
  spec.v_max = v_i;
  spec.nv = nv;
  return spec;
}

EnsembleResult run_ensemble(const MolassesConfig& mol, const MirrorConfig& mirror,
                            const BinningSpec& bins, const EnsembleOptions& opts) {
  mol.validate();
  bins.validate();
  if (!(opts.entry_margin > 0))
    throw std::invalid_argument("run_ensemble: entry_margin must be > 0");

  const double edge = opts.entry_margin / mirror.kappa();
  const std::uint64_t n = mol.n_atoms;
  const std::uint64_t n_blocks = (n + kBlock - 1) / kBlock;

  unsigned workers = opts.threads > 0 ? static_cast<unsigned>(opts.threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n_blocks));

  std::vector<BlockResult> blocks;
  blocks.reserve(n_blocks);
  for (std::uint64_t i = 0; i < n_blocks; ++i) blocks.emplace_back(bins);

  auto worker = [&](unsigned w) {
    for (std::uint64_t blk = w; blk < n_blocks; blk += workers) {
      const std::uint64_t begin = blk * kBlock;
      const std::uint64_t end = std::min(n, begin + kBlock);
      run_block(mol, mirror, edge, opts.integrate, begin, end, blocks[blk]);
    }
  };

  if (workers <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker, w);
    worker(0);
    for (auto& th : pool) th.join();
  }

  // Fold partial results in block order so floating-point sums are
  // independent of the thread count.
  EnsembleResult res{PhaseSpaceHistogram(bins), {}};
  CompressionReport& rep = res.report;
  double photon_sum = 0;
  for (const BlockResult& b : blocks) {
    res.hist.merge(b.hist);
    rep.n_pumped += b.pumped;
    rep.n_unpumped += b.unpumped;
    rep.n_overrun += b.overrun;
    photon_sum += b.photon_sum;
  }

  rep.n_requested = n;
  rep.pumped_fraction = static_cast<double>(rep.n_pumped) / static_cast<double>(n);
  rep.overrun_fraction = static_cast<double>(rep.n_overrun) / static_cast<double>(n);
  rep.unpumped_fraction = 1.0 - rep.pumped_fraction - rep.overrun_fraction;
  const std::uint64_t n_bounced = rep.n_pumped + rep.n_unpumped;
  rep.mean_photons_scattered = n_bounced ? photon_sum / static_cast<double>(n_bounced) : 0.0;

  const AtomSpecies& sp = mirror.species();
  const double h_over_m = constants::h / sp.mass;
  const double sigma_v = thermal_sigma_v(sp, mol.temperature);
  rep.peak_initial = h_over_m / (2.0 * std::numbers::pi * mol.sigma_z * sigma_v);

  if (rep.n_pumped == 0) {
    rep.no_pumped_warning = true;
    return res;
  }

  const auto row = res.hist.v0_row(h_over_m);
  const PeakEstimate pk = refine_peak(row, bins.z_min, bins.dz());
  rep.peak_final = pk.value;
  rep.peak_z = pk.x;
  rep.compression_factor = rep.peak_final / rep.peak_initial;
  rep.width_z_at_v0 = fwhm(row, bins.z_min, bins.dz(), pk.value);
  return res;
}

double ExpectedPumpDensity::density(int iz, int iv, double h_over_m) const {
  if (n_total == 0) return 0.0;
  const double cell = mass[static_cast<std::size_t>(iz) * spec.nv + iv];
  return cell / static_cast<double>(n_total) / (spec.dz() * spec.dv()) * h_over_m;
}

std::vector<double> ExpectedPumpDensity::v0_density(double h_over_m) const {
  std::vector<double> row(spec.nz);
  if (spec.nv % 2 == 1) {
    const int iv = spec.nv / 2;
    for (int iz = 0; iz < spec.nz; ++iz) row[iz] = density(iz, iv, h_over_m);
  } else {
    const int hi = spec.nv / 2, lo = hi - 1;
    for (int iz = 0; iz < spec.nz; ++iz)
      row[iz] = 0.5 * (density(iz, lo, h_over_m) + density(iz, hi, h_over_m));
  }
  return row;
}

ExpectedPumpDensity expected_pump_density(const MolassesConfig& mol, const MirrorConfig& mirror,
                                          const BinningSpec& bins, const EnsembleOptions& opts) {
  mol.validate();
  bins.validate();
  if (!(opts.entry_margin > 0))
    throw std::invalid_argument("expected_pump_density: entry_margin must be > 0");

  const double edge = opts.entry_margin / mirror.kappa();
  const std::uint64_t n = mol.n_atoms;
  const std::uint64_t n_blocks = (n + kBlock - 1) / kBlock;

  unsigned workers = opts.threads > 0 ? static_cast<unsigned>(opts.threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n_blocks));

  std::vector<DensityBlock> blocks;
  blocks.reserve(n_blocks);
  for (std::uint64_t i = 0; i < n_blocks; ++i) blocks.emplace_back(bins);

  auto worker = [&](unsigned w) {
    for (std::uint64_t blk = w; blk < n_blocks; blk += workers) {
      const std::uint64_t begin = blk * kBlock;
      const std::uint64_t end = std::min(n, begin + kBlock);
      run_density_block(mol, mirror, edge, opts.integrate, bins, begin, end, blocks[blk]);
    }
  };

  if (workers <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker, w);
    worker(0);
    for (auto& th : pool) th.join();
  }

  ExpectedPumpDensity out;
  out.spec = bins;
  out.mass.assign(static_cast<std::size_t>(bins.nz) * bins.nv, 0.0);
  out.n_total = n;
  for (const DensityBlock& b : blocks) {
    out.pumped_mass += b.pumped_mass;
    for (std::size_t i = 0; i < out.mass.size(); ++i) out.mass[i] += b.mass[i];
  }
  return out;
}

}  // namespace ewsim
