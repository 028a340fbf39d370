#ifndef GEXPECT_DISCRETE_LAW_HPP
#define GEXPECT_DISCRETE_LAW_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace gexpect {

// One discrete probability law: atoms sorted by value, no duplicate values,
// probabilities summing to 1 within 1e-12.
class DiscreteLaw {
 public:
  struct Atom {
    double value;
    double prob;
  };

  // Sorts by value, merges duplicates, validates the probability sum.
  static DiscreteLaw from_atoms(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }

  double mean() const;
  double expectation_of(const std::vector<double>& values_on_atoms) const;

 private:
  std::vector<Atom> atoms_;
};

// A finite set of laws on a shared merged support. Realizes the sub-linear
// expectation by maximizing over the laws; the conjugate by minimizing.
class MeasureFamily {
 public:
  // At least one law required. All laws are re-expressed on the merged
  // support with zero probability where a law lacks an atom.
  static MeasureFamily from_laws(std::vector<DiscreteLaw> laws,
                                 std::string name = "");

  // Builds the family from (value, prob) atom lists, one per law.
  static MeasureFamily from_atom_lists(
      const std::vector<std::vector<DiscreteLaw::Atom>>& law_atoms,
      std::string name = "");

  // {±1 w.p. 1/2} and {±2 w.p. 1/2}: the two-law volatility family used
  // throughout the test batteries.
  static MeasureFamily rademacher_volatility();

  // Single classical Rademacher law {±scale w.p. 1/2}.
  static MeasureFamily rademacher(double scale = 1.0);

  std::size_t law_count() const { return probs_.size(); }
  std::size_t support_size() const { return support_.size(); }
  const std::vector<double>& support() const { return support_; }
  // probs()[k][i] = probability law k assigns to support()[i].
  const std::vector<std::vector<double>>& probs() const { return probs_; }
  const std::string& name() const { return name_; }

  // True when every law puts all mass on the single atom 0.
  bool degenerate_at_zero() const;

  std::string to_json() const;
  static MeasureFamily from_json(const std::string& text);

  // FNV-1a over the canonical serialization; used to tag report rows.
  std::uint64_t hash() const;

 private:
  std::string name_;
  std::vector<double> support_;
  std::vector<std::vector<double>> probs_;
};

}  // namespace gexpect

#endif  // GEXPECT_DISCRETE_LAW_HPP
