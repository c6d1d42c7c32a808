#pragma once

#include "ftamp/stability.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace ftamp {

/// Gaussian perturbation magnitudes. Relative entries multiply the nominal
/// value by (1 + std * z); absolute entries add std * z.
struct PerturbationSpec {
  double friction_mu = 0.1;          // relative
  double applied_wrench = 0.05;      // relative, per component
  double frame_translation = 0.002;  // m
  double frame_rotation = 0.017;     // rad
  double patch_size = 0.1;           // relative
  int sample_count = 100;
  std::uint64_t rng_seed = 0;

  /// Throws std::invalid_argument on negative stds or sample_count < 1.
  void validate() const;
  bool degenerate() const;
};

/// Independent random stream for sample `index`; the same (seed, index) pair
/// always yields the same stream regardless of which thread draws it.
std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index);

/// Draws the perturbations of one sample.
class Perturber {
 public:
  Perturber(const PerturbationSpec& spec, std::mt19937_64& rng) : spec_(spec), rng_(rng) {}

  double friction(double mu);
  double size(double nominal);
  Wrench wrench(const Wrench& w);
  /// Small rigid displacement of a contact frame, returned as T_nominal_perturbed.
  Transform frame_offset();

  JointModel joint(const JointModel& joint);
  ForcefulKinematicChain chain(const ForcefulKinematicChain& chain);

 private:
  double normal() { return dist_(rng_); }

  const PerturbationSpec& spec_;
  std::mt19937_64& rng_;
  std::normal_distribution<double> dist_{0.0, 1.0};
};

/// Fraction of samples for which `trial(index, rng)` succeeds. Samples are
/// evaluated in parallel for large counts; the result does not depend on the
/// worker count.
double estimate_probability(const PerturbationSpec& spec,
                            const std::function<bool(std::size_t, std::mt19937_64&)>& trial);

/// Stable fraction of perturbed copies of (chain, w).
double success_probability(const ForcefulKinematicChain& chain, const Wrench& w, const PerturbationSpec& spec);

/// Stable fraction when every chain must hold for the same perturbation draw
/// of the shared parameters. Each chain receives its own frame and patch draws.
double joint_success_probability(const std::vector<ForcefulKinematicChain>& chains, const Wrench& w,
                                 const PerturbationSpec& spec);

struct ActionCost {
  double success_probability = 1.0;
  double cost = 0.0;
};

/// cost = -ln p, +inf at p = 0. Throws std::invalid_argument outside [0, 1].
ActionCost action_cost(double p);

struct CostRow {
  double sweep_value = 0.0;
  std::string method;
  double probability = 0.0;
  double cost = 0.0;
  // Interval columns, emitted only when `with_interval` is set.
  double cost_lo = 0.0;
  double cost_hi = 0.0;
};

/// Columns: sweep_value,method,probability,cost[,cost_lo,cost_hi].
void write_cost_csv(std::ostream& out, const std::vector<CostRow>& rows, bool with_interval = false);

}  // namespace ftamp
