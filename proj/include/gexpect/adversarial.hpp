#ifndef GEXPECT_ADVERSARIAL_HPP
#define GEXPECT_ADVERSARIAL_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gexpect/discrete_law.hpp"

namespace gexpect {

// Nested (adversary-per-history) expectations of functions of an independent
// sequence, evaluated by backward induction. The adversary picks a family
// member at every node after seeing the history; ties go to the first law.

using SequencePayoff = std::function<double(std::span<const double>)>;

// Payoff depending on the sufficient statistic (S_n, V_n^2).
using StatPayoff = std::function<double(double s, double v2)>;

// Payoff depending on (terminal sum, running max of partial sums), where the
// partial sums are of per-atom shifted values (see shift below).
using MaxPayoff = std::function<double(double sum, double runmax)>;

inline constexpr std::uint64_t kDefaultTreeGuard = 20'000'000;   // leaves
inline constexpr std::size_t kDefaultStateBudget = 5'000'000;    // states x steps

// Full outcome-tree value for an arbitrary payoff of (x_1, ..., x_n).
// Throws ResourceError when the tree exceeds the guard; payoffs with a
// low-dimensional sufficient statistic should use the state-space variants.
double iid_sequence_value(const MeasureFamily& fam, int n,
                          const SequencePayoff& payoff,
                          std::uint64_t tree_guard = kDefaultTreeGuard);

// Exact value for payoffs of (S_n, V_n^2). Backward induction runs on the
// exact reachable state set (sums of finitely many atoms), no grid rounding.
double adversarial_value_sv(const MeasureFamily& fam, int n,
                            const StatPayoff& payoff,
                            std::size_t state_budget = kDefaultStateBudget);

// Heterogeneous version: steps[i] is the family governing step i.
double adversarial_value_sv(std::span<const MeasureFamily* const> steps,
                            const StatPayoff& payoff,
                            std::size_t state_budget = kDefaultStateBudget);

// Same recursion in log space: returns log E[exp(L)] where log_payoff gives
// L(s, v2). Safe for exponential payoffs that would overflow linearly.
double adversarial_log_expectation_sv(
    const MeasureFamily& fam, int n, const StatPayoff& log_payoff,
    std::size_t state_budget = kDefaultStateBudget);

double adversarial_log_expectation_sv(
    std::span<const MeasureFamily* const> steps, const StatPayoff& log_payoff,
    std::size_t state_budget = kDefaultStateBudget);

// Value for payoffs of the running maximum of shifted partial sums
// T_k = sum_{i<=k} (x_i + shift). runmax starts at -infinity (no prefix).
double adversarial_value_runmax(const MeasureFamily& fam, int n, double shift,
                                const MaxPayoff& payoff,
                                std::size_t state_budget = kDefaultStateBudget);

double adversarial_log_expectation_runmax(
    const MeasureFamily& fam, int n, double shift, const MaxPayoff& log_payoff,
    std::size_t state_budget = kDefaultStateBudget);

// Count of reachable (S, V^2) states summed over layers; the budget metric.
std::size_t sv_state_count(std::span<const MeasureFamily* const> steps);

}  // namespace gexpect

#endif  // GEXPECT_ADVERSARIAL_HPP
