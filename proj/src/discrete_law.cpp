#include "gexpect/discrete_law.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "gexpect/errors.hpp"
#include <json.hpp>

namespace gexpect {

namespace {
constexpr double kProbSumTol = 1e-12;

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}
}  // namespace

DiscreteLaw DiscreteLaw::from_atoms(std::vector<Atom> atoms) {
  if (atoms.empty()) throw ConfigError("discrete law needs at least one atom");
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.value < b.value; });
  std::vector<Atom> merged;
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.value) || !std::isfinite(a.prob))
      throw DomainError("atom value/prob must be finite");
    if (a.prob < 0.0) throw DomainError("negative atom probability");
    if (!merged.empty() && merged.back().value == a.value)
      merged.back().prob += a.prob;
    else
      merged.push_back(a);
  }
  double sum = 0.0;
  for (const Atom& a : merged) sum += a.prob;
  if (std::fabs(sum - 1.0) > kProbSumTol)
    throw DomainError("atom probabilities sum to " + format_real(sum) +
                      ", expected 1");
  DiscreteLaw law;
  law.atoms_ = std::move(merged);
  return law;
}

double DiscreteLaw::mean() const {
  double m = 0.0;
  for (const Atom& a : atoms_) m += a.prob * a.value;
  return m;
}

double DiscreteLaw::expectation_of(const std::vector<double>& values) const {
  double m = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) m += atoms_[i].prob * values[i];
  return m;
}

MeasureFamily MeasureFamily::from_laws(std::vector<DiscreteLaw> laws,
                                       std::string name) {
  if (laws.empty()) throw ConfigError("measure family needs at least one law");
  std::vector<double> support;
  for (const DiscreteLaw& law : laws)
    for (const auto& a : law.atoms()) support.push_back(a.value);
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());

  MeasureFamily fam;
  fam.name_ = std::move(name);
  fam.support_ = std::move(support);
  fam.probs_.reserve(laws.size());
  for (const DiscreteLaw& law : laws) {
    std::vector<double> p(fam.support_.size(), 0.0);
    for (const auto& a : law.atoms()) {
      const auto it = std::lower_bound(fam.support_.begin(), fam.support_.end(),
                                       a.value);
      p[static_cast<std::size_t>(it - fam.support_.begin())] = a.prob;
    }
    fam.probs_.push_back(std::move(p));
  }
  return fam;
}

MeasureFamily MeasureFamily::from_atom_lists(
    const std::vector<std::vector<DiscreteLaw::Atom>>& law_atoms,
    std::string name) {
  std::vector<DiscreteLaw> laws;
  laws.reserve(law_atoms.size());
  for (const auto& atoms : law_atoms) laws.push_back(DiscreteLaw::from_atoms(atoms));
  return from_laws(std::move(laws), std::move(name));
}

MeasureFamily MeasureFamily::rademacher_volatility() {
  return from_atom_lists({{{-1.0, 0.5}, {1.0, 0.5}}, {{-2.0, 0.5}, {2.0, 0.5}}},
                         "rvf");
}

MeasureFamily MeasureFamily::rademacher(double scale) {
  return from_atom_lists({{{-scale, 0.5}, {scale, 0.5}}}, "rademacher");
}

bool MeasureFamily::degenerate_at_zero() const {
  for (const auto& p : probs_)
    for (std::size_t i = 0; i < support_.size(); ++i)
      if (support_[i] != 0.0 && p[i] > 0.0) return false;
  return true;
}

std::string MeasureFamily::to_json() const {
  nlohmann::ordered_json j;
  j["name"] = name_;
  nlohmann::ordered_json laws = nlohmann::ordered_json::array();
  for (const auto& p : probs_) {
    nlohmann::ordered_json law = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < support_.size(); ++i) {
      if (p[i] == 0.0) continue;
      law.push_back(nlohmann::ordered_json::array({support_[i], p[i]}));
    }
    laws.push_back(std::move(law));
  }
  j["laws"] = std::move(laws);
  return j.dump();
}

MeasureFamily MeasureFamily::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad family JSON: ") + e.what());
  }
  if (!j.contains("laws") || !j["laws"].is_array() || j["laws"].empty())
    throw ConfigError("family JSON needs a nonempty 'laws' array");
  std::vector<std::vector<DiscreteLaw::Atom>> law_atoms;
  for (const auto& law : j["laws"]) {
    std::vector<DiscreteLaw::Atom> atoms;
    for (const auto& pair : law) {
      if (!pair.is_array() || pair.size() != 2)
        throw ConfigError("each atom must be a [value, prob] pair");
      atoms.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    law_atoms.push_back(std::move(atoms));
  }
  return from_atom_lists(law_atoms, j.value("name", std::string()));
}

std::uint64_t MeasureFamily::hash() const {
  const std::string bytes = to_json();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace gexpect
