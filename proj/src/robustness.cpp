#include "ftamp/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace ftamp {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Below this many samples the thread start-up cost dominates.
constexpr int kParallelThreshold = 2000;

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

void PerturbationSpec::validate() const {
  const double stds[] = {friction_mu, applied_wrench, frame_translation, frame_rotation, patch_size};
  for (double s : stds) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw std::invalid_argument("perturbation stds must be finite and >= 0");
  }
  if (sample_count < 1) throw std::invalid_argument("perturbation sample_count must be >= 1");
}

bool PerturbationSpec::degenerate() const {
  return friction_mu == 0.0 && applied_wrench == 0.0 && frame_translation == 0.0 && frame_rotation == 0.0 &&
         patch_size == 0.0;
}

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ index));
}

double Perturber::friction(double mu) { return std::max(0.0, mu * (1.0 + spec_.friction_mu * normal())); }

double Perturber::size(double nominal) {
  // A patch cannot shrink below a small fraction of its nominal size.
  return nominal * std::max(0.05, 1.0 + spec_.patch_size * normal());
}

Wrench Perturber::wrench(const Wrench& w) {
  Wrench out = w;
  for (int i = 0; i < 3; ++i) out.force(i) *= 1.0 + spec_.applied_wrench * normal();
  for (int i = 0; i < 3; ++i) out.torque(i) *= 1.0 + spec_.applied_wrench * normal();
  return out;
}

Transform Perturber::frame_offset() {
  Vec3 p;
  Vec3 r;
  for (int i = 0; i < 3; ++i) p(i) = spec_.frame_translation * normal();
  for (int i = 0; i < 3; ++i) r(i) = spec_.frame_rotation * normal();
  Transform t;
  t.rotation = exp_rotation(r);
  t.translation = p;
  return t;
}

JointModel Perturber::joint(const JointModel& joint) {
  if (const auto* c = std::get_if<CircularPatchJoint>(&joint)) {
    CircularPatchJoint out = *c;
    out.mu = friction(c->mu);
    out.radius = size(c->radius);
    return out;
  }
  if (const auto* p = std::get_if<PolygonPatchJoint>(&joint)) {
    PolygonPatchJoint out = *p;
    out.mu = friction(p->mu);
    const double s = size(1.0);
    for (auto& corner : out.corners) corner *= s;
    return out;
  }
  return joint;
}

ForcefulKinematicChain Perturber::chain(const ForcefulKinematicChain& chain) {
  ForcefulKinematicChain out = chain;
  for (auto& link : out.links) {
    const bool contact = std::holds_alternative<CircularPatchJoint>(link.joint) ||
                         std::holds_alternative<PolygonPatchJoint>(link.joint);
    if (!contact) continue;
    link.joint = joint(link.joint);
    link.to_joint = compose(invert(frame_offset()), link.to_joint);
  }
  return out;
}

double estimate_probability(const PerturbationSpec& spec,
                            const std::function<bool(std::size_t, std::mt19937_64&)>& trial) {
  spec.validate();
  const auto n = static_cast<std::size_t>(spec.sample_count);
  std::vector<char> ok(n, 0);
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      std::mt19937_64 rng = sample_rng(spec.rng_seed, i);
      ok[i] = trial(i, rng) ? 1 : 0;
    }
  };
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  if (spec.sample_count < kParallelThreshold || workers == 1) {
    run(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t begin = 0; begin < n; begin += chunk) pool.emplace_back(run, begin, std::min(n, begin + chunk));
    for (auto& t : pool) t.join();
  }
  std::size_t successes = 0;
  for (char c : ok) successes += static_cast<std::size_t>(c);
  return static_cast<double>(successes) / static_cast<double>(n);
}

double success_probability(const ForcefulKinematicChain& chain, const Wrench& w, const PerturbationSpec& spec) {
  return joint_success_probability({chain}, w, spec);
}

double joint_success_probability(const std::vector<ForcefulKinematicChain>& chains, const Wrench& w,
                                 const PerturbationSpec& spec) {
  return estimate_probability(spec, [&](std::size_t, std::mt19937_64& rng) {
    Perturber draw(spec, rng);
    const Wrench applied = draw.wrench(w);
    for (const auto& chain : chains) {
      if (!chain_stable(draw.chain(chain), applied).stable) return false;
    }
    return true;
  });
}

ActionCost action_cost(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("success probability must lie in [0, 1]");
  ActionCost c;
  c.success_probability = p;
  c.cost = p == 0.0 ? std::numeric_limits<double>::infinity() : (p == 1.0 ? 0.0 : -std::log(p));
  return c;
}

void write_cost_csv(std::ostream& out, const std::vector<CostRow>& rows, bool with_interval) {
  out << "sweep_value,method,probability,cost";
  if (with_interval) out << ",cost_lo,cost_hi";
  out << '\n';
  for (const auto& r : rows) {
    out << format_number(r.sweep_value) << ',' << r.method << ',' << format_number(r.probability) << ','
        << format_number(r.cost);
    if (with_interval) out << ',' << format_number(r.cost_lo) << ',' << format_number(r.cost_hi);
    out << '\n';
  }
}

}  // namespace ftamp
