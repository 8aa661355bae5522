#include "covert/sum_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace covert {

namespace {

bool values_equal(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= kValueMergeTol * std::max({1.0, std::abs(a), std::abs(b)});
}

std::vector<SumDistribution::Atom> sort_and_merge(std::vector<SumDistribution::Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& a, const auto& b) { return a.value < b.value; });
  std::vector<SumDistribution::Atom> merged;
  merged.reserve(atoms.size());
  for (const auto& a : atoms) {
    if (a.prob == 0.0) continue;
    if (!merged.empty() && values_equal(merged.back().value, a.value)) {
      auto& m = merged.back();
      // probability-weighted value keeps merged atoms stable
      const double w = m.prob + a.prob;
      if (!std::isinf(m.value)) m.value = (m.value * m.prob + a.value * a.prob) / w;
      m.prob = w;
    } else {
      merged.push_back(a);
    }
  }
  if (merged.empty()) merged.push_back({0.0, 0.0});
  return merged;
}

}  // namespace

SumDistribution::SumDistribution() : atoms_{{0.0, 1.0}}, count_(0) {}

SumDistribution SumDistribution::point_mass(double value) {
  SumDistribution d;
  d.atoms_ = {{value, 1.0}};
  d.count_ = 0;
  return d;
}

SumDistribution SumDistribution::from_atoms(std::vector<Atom> atoms, std::uint64_t count) {
  SumDistribution d;
  d.atoms_ = sort_and_merge(std::move(atoms));
  d.count_ = count;
  double sum = 0.0;
  for (const auto& a : d.atoms_) {
    if (!(a.prob >= 0.0)) throw InvalidParams("negative atom probability");
    sum += a.prob;
  }
  const double tol = 1e-10 * static_cast<double>(std::max<std::uint64_t>(count, 1));
  if (std::abs(sum - 1.0) > tol) throw InvalidParams("atom probabilities do not sum to one");
  return d;
}

double SumDistribution::total_prob() const {
  double sum = 0.0;
  for (const auto& a : atoms_) sum += a.prob;
  return sum;
}

double SumDistribution::mean() const {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.value * a.prob;
  return m;
}

double SumDistribution::variance() const { return central_moment(2); }

double SumDistribution::central_moment(int k) const {
  const double m = mean();
  double s = 0.0;
  for (const auto& a : atoms_) s += std::pow(a.value - m, k) * a.prob;
  return s;
}

double SumDistribution::third_abs_central() const {
  const double m = mean();
  double s = 0.0;
  for (const auto& a : atoms_) s += std::pow(std::abs(a.value - m), 3) * a.prob;
  return s;
}

namespace {
double query_tol(double x) {
  return std::isinf(x) ? 0.0 : kValueMergeTol * std::max(1.0, std::abs(x));
}
}  // namespace

double SumDistribution::cdf(double x) const {
  const double tol = query_tol(x);
  double s = 0.0;
  for (const auto& a : atoms_) {
    if (a.value <= x + tol) s += a.prob;
  }
  return s;
}

double SumDistribution::tail_geq(double x) const {
  const double tol = query_tol(x);
  double s = 0.0;
  for (const auto& a : atoms_) {
    if (a.value >= x - tol) s += a.prob;
  }
  return s;
}

double SumDistribution::tail_gt(double x) const {
  const double tol = query_tol(x);
  double s = 0.0;
  for (const auto& a : atoms_) {
    if (a.value > x + tol) s += a.prob;
  }
  return s;
}

SumDistribution SumDistribution::convolve(const SumDistribution& other, std::size_t cap) const {
  const std::size_t product = atoms_.size() * other.atoms_.size();
  if (product > cap) throw CombinatorialBlowup("convolution atom count exceeds cap");
  std::vector<Atom> out;
  out.reserve(product);
  for (const auto& a : atoms_) {
    for (const auto& b : other.atoms_) {
      out.push_back({a.value + b.value, a.prob * b.prob});
    }
  }
  SumDistribution d;
  d.atoms_ = sort_and_merge(std::move(out));
  d.count_ = count_ + other.count_;
  return d;
}

SumDistribution SumDistribution::power(std::uint64_t k, std::size_t cap) const {
  SumDistribution acc = point_mass(0.0);
  SumDistribution base = *this;
  std::uint64_t remaining = k;
  while (remaining > 0) {
    if (remaining & 1u) acc = acc.convolve(base, cap);
    remaining >>= 1;
    if (remaining > 0) base = base.convolve(base, cap);
  }
  acc.count_ = count_ * k;
  return acc;
}

SumDistribution SumDistribution::mapped(const std::function<double(double)>& f) const {
  std::vector<Atom> out;
  out.reserve(atoms_.size());
  for (const auto& a : atoms_) out.push_back({f(a.value), a.prob});
  SumDistribution d;
  d.atoms_ = sort_and_merge(std::move(out));
  d.count_ = count_;
  return d;
}

SumDistribution SumDistribution::tilted_by_exp() const {
  std::vector<Atom> out;
  out.reserve(atoms_.size());
  for (const auto& a : atoms_) {
    const double w = a.prob * std::exp(a.value);
    if (w > 0.0) out.push_back({a.value, w});
  }
  SumDistribution d;
  d.atoms_ = sort_and_merge(std::move(out));
  d.count_ = count_;
  return d;
}

SumDistribution iid_sum_distribution(std::span<const double> score,
                                     const FiniteDistribution& base, std::uint64_t count,
                                     std::size_t cap) {
  if (score.size() != base.size()) {
    throw AlphabetMismatch("score and base alphabet sizes differ");
  }
  const std::size_t k = base.size();
  // Number of type classes: C(count + k - 1, k - 1).
  double classes = 1.0;
  for (std::size_t i = 1; i < k; ++i) {
    classes *= static_cast<double>(count + i) / static_cast<double>(i);
    if (classes > static_cast<double>(cap)) {
      throw CombinatorialBlowup("type-class count exceeds cap");
    }
  }

  std::vector<double> log_p(k, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < k; ++i) {
    if (base.prob(i) > 0.0) log_p[i] = std::log(base.prob(i));
  }
  const double log_fact_n = std::lgamma(static_cast<double>(count) + 1.0);

  std::vector<SumDistribution::Atom> atoms;
  // Depth-first over compositions (c_0, ..., c_{k-1}) of count.
  auto recurse = [&](auto&& self, std::size_t idx, std::uint64_t remaining, double value,
                     double log_weight) -> void {
    if (idx + 1 == k) {
      if (base.prob(idx) == 0.0 && remaining > 0) return;
      const double lw = log_weight + static_cast<double>(remaining) * log_p[idx] -
                        std::lgamma(static_cast<double>(remaining) + 1.0);
      atoms.push_back({value + static_cast<double>(remaining) * score[idx],
                       std::exp(log_fact_n + lw)});
      return;
    }
    const std::uint64_t limit = base.prob(idx) == 0.0 ? 0 : remaining;
    for (std::uint64_t c = 0; c <= limit; ++c) {
      self(self, idx + 1, remaining - c, value + static_cast<double>(c) * score[idx],
           log_weight + static_cast<double>(c) * log_p[idx] -
               std::lgamma(static_cast<double>(c) + 1.0));
    }
  };
  if (k == 1) {
    if (base.prob(0) == 0.0 && count > 0) throw InvalidParams("single zero-probability atom");
    atoms.push_back({static_cast<double>(count) * score[0], 1.0});
  } else {
    recurse(recurse, 0, count, 0.0, 0.0);
  }
  return SumDistribution::from_atoms(std::move(atoms), count);
}

}  // namespace covert
