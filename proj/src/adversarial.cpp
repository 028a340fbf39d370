#include "gexpect/adversarial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gexpect/errors.hpp"

namespace gexpect {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double canon(double x) { return x == 0.0 ? 0.0 : x; }  // -0 -> +0

using State = std::array<double, 2>;
using StepFn = std::function<State(const State&, double)>;

struct Layers {
  // states per layer, sorted lexicographically for deterministic order
  std::vector<std::vector<State>> layers;
};

inline bool state_less(const State& a, const State& b) {
  if (a[0] != b[0]) return a[0] < b[0];
  return a[1] < b[1];
}

Layers enumerate_layers(std::span<const MeasureFamily* const> steps,
                        const State& init, const StepFn& step,
                        std::size_t state_budget) {
  Layers out;
  out.layers.resize(steps.size() + 1);
  out.layers[0] = {init};
  std::size_t total = 1;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& support = steps[i]->support();
    std::vector<State> next;
    next.reserve(out.layers[i].size() * support.size());
    for (const State& s : out.layers[i])
      for (const double x : support) next.push_back(step(s, x));
    std::sort(next.begin(), next.end(), state_less);
    next.erase(std::unique(next.begin(), next.end()), next.end());
    total += next.size();
    if (total > state_budget)
      throw ResourceError("state budget exceeded: " + std::to_string(total) +
                          " > " + std::to_string(state_budget));
    out.layers[i + 1] = std::move(next);
  }
  return out;
}

inline std::size_t find_state(const std::vector<State>& layer, const State& s) {
  const auto it = std::lower_bound(layer.begin(), layer.end(), s, state_less);
  return static_cast<std::size_t>(it - layer.begin());
}

// log(sum_i w_i * exp(l_i)) with w_i >= 0; tolerates -inf entries.
double log_weighted_sum_exp(std::span<const double> weights,
                            std::span<const double> logs) {
  double m = kNegInf;
  for (std::size_t i = 0; i < logs.size(); ++i)
    if (weights[i] > 0.0 && logs[i] > m) m = logs[i];
  if (m == kNegInf) return kNegInf;
  double acc = 0.0;
  for (std::size_t i = 0; i < logs.size(); ++i)
    if (weights[i] > 0.0) acc += weights[i] * std::exp(logs[i] - m);
  return m + std::log(acc);
}

double backward_value(std::span<const MeasureFamily* const> steps,
                      const Layers& L, const StepFn& step,
                      const std::function<double(const State&)>& terminal,
                      bool log_space) {
  const std::size_t n = steps.size();
  std::vector<double> values(L.layers[n].size());
  for (std::size_t j = 0; j < values.size(); ++j)
    values[j] = terminal(L.layers[n][j]);

  std::vector<double> prev;
  std::vector<std::size_t> succ;
  std::vector<double> child_logs;
  for (std::size_t i = n; i-- > 0;) {
    const auto& layer = L.layers[i];
    const auto& next_layer = L.layers[i + 1];
    const auto& fam = *steps[i];
    const auto& support = fam.support();
    prev.assign(layer.size(), 0.0);
    succ.resize(support.size());
    child_logs.resize(support.size());
    for (std::size_t j = 0; j < layer.size(); ++j) {
      for (std::size_t o = 0; o < support.size(); ++o)
        succ[o] = find_state(next_layer, step(layer[j], support[o]));
      double best = kNegInf;
      for (std::size_t k = 0; k < fam.law_count(); ++k) {
        const auto& p = fam.probs()[k];
        double e;
        if (log_space) {
          for (std::size_t o = 0; o < support.size(); ++o)
            child_logs[o] = values[succ[o]];
          e = log_weighted_sum_exp(p, child_logs);
        } else {
          e = 0.0;
          for (std::size_t o = 0; o < support.size(); ++o)
            e += p[o] * values[succ[o]];
        }
        if (e > best) best = e;  // first law keeps ties
      }
      prev[j] = best;
    }
    values = prev;
  }
  return values[0];
}

State sv_step(const State& s, double x) {
  return {canon(s[0] + x), canon(s[1] + x * x)};
}

double run_sv(std::span<const MeasureFamily* const> steps,
              const StatPayoff& payoff, std::size_t budget, bool log_space) {
  StepFn step = sv_step;
  const Layers L = enumerate_layers(steps, {0.0, 0.0}, step, budget);
  return backward_value(
      steps, L, step, [&](const State& s) { return payoff(s[0], s[1]); },
      log_space);
}

double run_runmax(const MeasureFamily& fam, int n, double shift,
                  const MaxPayoff& payoff, std::size_t budget,
                  bool log_space) {
  if (n < 1) throw DomainError("need n >= 1");
  std::vector<const MeasureFamily*> steps(static_cast<std::size_t>(n), &fam);
  StepFn step = [shift](const State& s, double x) -> State {
    const double sum = canon(s[0] + x + shift);
    return {sum, std::max(s[1], sum)};
  };
  const Layers L = enumerate_layers(steps, {0.0, kNegInf}, step, budget);
  return backward_value(
      steps, L, step, [&](const State& s) { return payoff(s[0], s[1]); },
      log_space);
}

}  // namespace

double iid_sequence_value(const MeasureFamily& fam, int n,
                          const SequencePayoff& payoff,
                          std::uint64_t tree_guard) {
  if (n < 1) throw DomainError("need n >= 1");
  const std::size_t k = fam.support_size();
  double leaves = 1.0;
  for (int i = 0; i < n; ++i) {
    leaves *= static_cast<double>(k);
    if (leaves > static_cast<double>(tree_guard))
      throw ResourceError(
          "outcome tree too large for a black-box payoff; provide a "
          "sufficient-statistic payoff for state-space induction");
  }
  std::vector<double> prefix(static_cast<std::size_t>(n));
  const auto& support = fam.support();

  std::function<double(int)> value = [&](int depth) -> double {
    if (depth == n) return payoff(std::span<const double>(prefix));
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t kk = 0; kk < fam.law_count(); ++kk) {
      const auto& p = fam.probs()[kk];
      double e = 0.0;
      for (std::size_t o = 0; o < support.size(); ++o) {
        if (p[o] == 0.0) {
          // still descend? value of zero-prob branch does not matter
          continue;
        }
        prefix[static_cast<std::size_t>(depth)] = support[o];
        e += p[o] * value(depth + 1);
      }
      if (e > best) best = e;
    }
    return best;
  };
  return value(0);
}

double adversarial_value_sv(const MeasureFamily& fam, int n,
                            const StatPayoff& payoff,
                            std::size_t state_budget) {
  if (n < 1) throw DomainError("need n >= 1");
  std::vector<const MeasureFamily*> steps(static_cast<std::size_t>(n), &fam);
  return run_sv(steps, payoff, state_budget, /*log_space=*/false);
}

double adversarial_value_sv(std::span<const MeasureFamily* const> steps,
                            const StatPayoff& payoff,
                            std::size_t state_budget) {
  if (steps.empty()) throw DomainError("need at least one step");
  return run_sv(steps, payoff, state_budget, /*log_space=*/false);
}

double adversarial_log_expectation_sv(const MeasureFamily& fam, int n,
                                      const StatPayoff& log_payoff,
                                      std::size_t state_budget) {
  if (n < 1) throw DomainError("need n >= 1");
  std::vector<const MeasureFamily*> steps(static_cast<std::size_t>(n), &fam);
  return run_sv(steps, log_payoff, state_budget, /*log_space=*/true);
}

double adversarial_log_expectation_sv(
    std::span<const MeasureFamily* const> steps, const StatPayoff& log_payoff,
    std::size_t state_budget) {
  if (steps.empty()) throw DomainError("need at least one step");
  return run_sv(steps, log_payoff, state_budget, /*log_space=*/true);
}

double adversarial_value_runmax(const MeasureFamily& fam, int n, double shift,
                                const MaxPayoff& payoff,
                                std::size_t state_budget) {
  return run_runmax(fam, n, shift, payoff, state_budget, /*log_space=*/false);
}

double adversarial_log_expectation_runmax(const MeasureFamily& fam, int n,
                                          double shift,
                                          const MaxPayoff& log_payoff,
                                          std::size_t state_budget) {
  return run_runmax(fam, n, shift, log_payoff, state_budget, /*log_space=*/true);
}

std::size_t sv_state_count(std::span<const MeasureFamily* const> steps) {
  StepFn step = sv_step;
  const Layers L = enumerate_layers(steps, {0.0, 0.0}, step,
                                    std::numeric_limits<std::size_t>::max());
  std::size_t total = 0;
  for (const auto& layer : L.layers) total += layer.size();
  return total;
}

}  // namespace gexpect
